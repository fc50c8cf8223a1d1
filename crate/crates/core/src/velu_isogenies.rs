//! Degree-ℓ isogenies from ℓ-subgroups and the traces of the ones that are
//! endomorphisms.
//!
//! Isogenies are evaluated pointwise from the group law:
//! `φ(P) = (x_P + Σ (x_{P+Q} − x_Q), y_P + Σ (y_{P+Q} − y_Q))` over the
//! nonzero kernel points `Q`.

use std::collections::BTreeSet;

use crate::clifford_orders::Fingerprint;
use crate::error::{Error, Result};
use crate::finite_fields::{roots_of, FieldElement};
use crate::supersingular_curves::{
    curve_from_j, isqrt, normalize_twist, torsion_basis, trace_spread, Curve, CurvePoint,
    TorsionContext,
};

/// A cyclic subgroup of prime order together with its nonzero elements.
#[derive(Debug, Clone)]
pub struct Subgroup {
    order: u64,
    generator: CurvePoint,
    /// `k·G` for `k = 1, …, ℓ − 1`.
    elements: Vec<CurvePoint>,
}

impl Subgroup {
    /// `G` must be a nonzero point with `ℓ·G = O`.
    pub fn new(e: &Curve, generator: CurvePoint, order: u64) -> Result<Self> {
        if !e.contains(&generator) {
            return Err(Error::input("subgroup generator is not on the curve"));
        }
        if generator.is_infinity() {
            return Err(Error::input("subgroup generator is the identity"));
        }
        let mut elements = Vec::with_capacity(order as usize - 1);
        let mut acc = generator.clone();
        for _ in 1..order {
            if acc.is_infinity() {
                return Err(Error::input(format!(
                    "generator order is less than {order}"
                )));
            }
            elements.push(acc.clone());
            acc = e.add(&acc, &generator);
        }
        if !acc.is_infinity() {
            return Err(Error::input(format!("generator order is not {order}")));
        }
        Ok(Subgroup {
            order,
            generator,
            elements,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> &CurvePoint {
        &self.generator
    }

    /// Nonzero elements.
    pub fn elements(&self) -> &[CurvePoint] {
        &self.elements
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        p.is_infinity() || self.elements.contains(p)
    }
}

/// `⟨P1 + k·P2⟩` for `k = 0, …, ℓ − 1`, then `⟨P2⟩`.
pub fn subgroups_of_order(ctx: &TorsionContext) -> Result<Vec<Subgroup>> {
    let e = &ctx.curve;
    let mut out = Vec::with_capacity(ctx.ell as usize + 1);
    let mut g = ctx.p1.clone();
    for _ in 0..ctx.ell {
        out.push(Subgroup::new(e, g.clone(), ctx.ell)?);
        g = e.add(&g, &ctx.p2);
    }
    out.push(Subgroup::new(e, ctx.p2.clone(), ctx.ell)?);
    Ok(out)
}

/// Vélu's codomain `y² = x³ + (A − 5t)x + (B − 7w)`.
pub fn velu_codomain(e: &Curve, c: &Subgroup) -> Result<Curve> {
    let field = e.field();
    let mut t = FieldElement::zero(field);
    let mut w = FieldElement::zero(field);
    // summing over all nonzero Q counts each ±pair twice, which is exactly
    // the doubled weight Vélu assigns to points of order > 2
    for q in c.elements() {
        let (x, y) = match q {
            CurvePoint::Affine { x, y } => (x, y),
            CurvePoint::Infinity => unreachable!("subgroup elements are nonzero"),
        };
        if !e.contains(q) {
            return Err(Error::input("kernel point is not on the curve"));
        }
        let gx = &x.square().scale(3) + e.a();
        w = &w + &(&y.square().scale(2) + &(x * &gx));
        t = &t + &gx;
    }
    Curve::new(e.a() - &t.scale(5), e.b() - &w.scale(7))
}

/// Pointwise image under the isogeny with kernel `c`.
pub fn velu_evaluate(e: &Curve, c: &Subgroup, p: &CurvePoint) -> Result<CurvePoint> {
    if !e.contains(p) {
        return Err(Error::input(format!("{p:?} is not on the domain curve")));
    }
    Ok(velu_evaluate_unchecked(e, c, p))
}

fn velu_evaluate_unchecked(e: &Curve, c: &Subgroup, p: &CurvePoint) -> CurvePoint {
    if c.contains(p) {
        return CurvePoint::Infinity;
    }
    let (mut x, mut y) = match p {
        CurvePoint::Affine { x, y } => (x.clone(), y.clone()),
        CurvePoint::Infinity => unreachable!("identity lies in every subgroup"),
    };
    for q in c.elements() {
        let s = e.add(p, q);
        match (&s, q) {
            (CurvePoint::Affine { x: xs, y: ys }, CurvePoint::Affine { x: xq, y: yq }) => {
                x = &x + &(xs - xq);
                y = &y + &(ys - yq);
            }
            _ => unreachable!("P ∉ C so P + Q ≠ O"),
        }
    }
    CurvePoint::affine(x, y)
}

/// The isogeny `E → E/C` as a value.
#[derive(Debug, Clone)]
pub struct IsogenyStep {
    pub domain: Curve,
    pub kernel: Subgroup,
    pub codomain: Curve,
}

impl IsogenyStep {
    pub fn new(domain: &Curve, kernel: Subgroup) -> Result<Self> {
        let codomain = velu_codomain(domain, &kernel)?;
        Ok(IsogenyStep {
            domain: domain.clone(),
            kernel,
            codomain,
        })
    }

    pub fn degree(&self) -> u64 {
        self.kernel.order()
    }

    pub fn evaluate(&self, p: &CurvePoint) -> Result<CurvePoint> {
        velu_evaluate(&self.domain, &self.kernel, p)
    }

    fn evaluate_unchecked(&self, p: &CurvePoint) -> CurvePoint {
        velu_evaluate_unchecked(&self.domain, &self.kernel, p)
    }
}

/// `(x, y) ↦ (v·x, w·y)` with `w² = v³`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub v: FieldElement,
    pub w: FieldElement,
}

impl Isomorphism {
    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(&self.v * x, &self.w * y),
        }
    }
}

/// Every isomorphism `from → to`, in canonical order of `(v, w)`.
///
/// Both curves must be defined over the same field and have equal j. On
/// normalized curves all isomorphisms are rational over `F_{p²}`, so no
/// field extension is ever needed; a missing root is reported as an
/// internal error.
pub fn isomorphism_search(from: &Curve, to: &Curve) -> Result<Vec<Isomorphism>> {
    if from.j_invariant() != to.j_invariant() {
        return Err(Error::input(
            "isomorphism search between curves of different j",
        ));
    }
    let (a, b) = (to.a(), to.b());
    let (a1, b1) = (from.a(), from.b());
    // A = v²A′ and B = v³B′
    let vs: Vec<FieldElement> = if a.is_zero() {
        roots_of(&b.checked_div(b1)?, 3)
    } else if b.is_zero() {
        roots_of(&a.checked_div(a1)?, 2)
    } else {
        vec![(b * a1).checked_div(&(a * b1))?]
    };
    let mut out = Vec::new();
    for v in vs {
        if &(&v.square() * a1) != a || &(&v.pow_u64(3) * b1) != b {
            continue;
        }
        for w in roots_of(&v.pow_u64(3), 2) {
            out.push(Isomorphism { v: v.clone(), w });
        }
    }
    if out.is_empty() {
        return Err(Error::internal(
            "curves with equal j have no isomorphism over the working field",
        ));
    }
    Ok(out)
}

/// An endomorphism `ψ ∘ φ_C` and its trace.
#[derive(Debug, Clone)]
pub struct Endomorphism {
    pub isomorphism: Isomorphism,
    pub trace: i64,
}

/// Applies `ψ ∘ φ_C`.
fn endo_apply(step: &IsogenyStep, psi: &Isomorphism, p: &CurvePoint) -> CurvePoint {
    psi.apply(&step.evaluate_unchecked(p))
}

/// `t` with `φ(φ(T)) − t·φ(T) + ℓ·T = O`, searched over `|t| ≤ ⌊2√ℓ⌋`.
fn trace_on(step: &IsogenyStep, psi: &Isomorphism, t_pt: &CurvePoint) -> Result<Option<i64>> {
    let e = &step.domain;
    let ell = step.degree();
    let bound = isqrt(4 * ell) as i64;
    let phi_t = endo_apply(step, psi, t_pt);
    if !e.order_exceeds(&phi_t, trace_spread(ell)) {
        return Err(Error::internal(
            "test point image has too small an order to fix the trace",
        ));
    }
    let lhs = e.add(&endo_apply(step, psi, &phi_t), &e.mul_u64(ell, t_pt));
    let mut found = None;
    let mut mult = e.mul_i64(-bound, &phi_t);
    for t in -bound..=bound {
        if mult == lhs {
            if found.is_some() {
                return Err(Error::internal("two traces satisfy the quadratic relation"));
            }
            found = Some(t);
        }
        mult = e.add(&mult, &phi_t);
    }
    Ok(found)
}

/// The endomorphisms with kernel `C`, one per isomorphism `E/C → E`, with
/// traces checked on both test points. Empty when `E/C ≇ E`.
pub fn endomorphisms(ctx: &TorsionContext, c: &Subgroup) -> Result<Vec<Endomorphism>> {
    let e = &ctx.curve;
    let step = IsogenyStep::new(e, c.clone())?;
    if step.codomain.j_invariant() != e.j_invariant() {
        return Ok(Vec::new());
    }
    let ell = ctx.ell as i64;
    let mut out = Vec::new();
    for psi in isomorphism_search(&step.codomain, e)? {
        let t1 = trace_on(&step, &psi, &ctx.test_points[0])?;
        let t2 = trace_on(&step, &psi, &ctx.test_points[1])?;
        let trace = match (t1, t2) {
            (Some(a), Some(b)) if a == b => a,
            _ => {
                return Err(Error::internal(format!(
                    "degree-{ell} endomorphism satisfies no quadratic relation (t = {t1:?}, {t2:?})"
                )))
            }
        };
        if trace * trace >= 4 * ell {
            return Err(Error::internal(format!(
                "trace {trace} violates t² < 4ℓ for ℓ = {ell}"
            )));
        }
        out.push(Endomorphism {
            isomorphism: psi,
            trace,
        });
    }
    Ok(out)
}

/// Traces of every endomorphism with kernel `C`.
pub fn endo_trace_set(ctx: &TorsionContext, c: &Subgroup) -> Result<BTreeSet<i64>> {
    Ok(endomorphisms(ctx, c)?
        .into_iter()
        .map(|d| d.trace)
        .collect())
}

/// `{(t, ℓ)}` over all degree-ℓ endomorphisms of the normalized curve.
pub fn fingerprint_of_curve(e: &Curve, lambda: &[u64], seed: u64) -> Result<Fingerprint> {
    let mut fp = Fingerprint::new();
    for &ell in lambda {
        fp.extend(&fingerprint_at(e, ell, seed)?);
    }
    Ok(fp)
}

/// The degree-ℓ part of [`fingerprint_of_curve`].
pub fn fingerprint_at(e: &Curve, ell: u64, seed: u64) -> Result<Fingerprint> {
    let ctx = torsion_basis(e, ell, seed)?;
    let mut fp = Fingerprint::new();
    for c in subgroups_of_order(&ctx)? {
        for t in endo_trace_set(&ctx, &c)? {
            fp.insert(t, ell as i64);
        }
    }
    Ok(fp)
}

/// The isogeny-side fingerprint of a supersingular `j ∈ F_{p²}`.
pub fn isog_fingerprint(j: &FieldElement, lambda: &[u64], seed: u64) -> Result<Fingerprint> {
    let e = normalize_twist(&curve_from_j(j)?)?;
    fingerprint_of_curve(&e, lambda, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_fields::make_field;
    use crate::supersingular_curves::supersingular_j_list;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_isogeny_of_1728() {
        let f = make_field(29, 1).unwrap();
        let e = Curve::from_i64(&f, 1, 0).unwrap();
        let g = CurvePoint::affine(FieldElement::zero(&f), FieldElement::zero(&f));
        let c = Subgroup::new(&e, g, 2).unwrap();
        let e2 = velu_codomain(&e, &c).unwrap();
        assert_eq!(e2, Curve::from_i64(&f, -4, 0).unwrap());
        assert_eq!(e2.j_invariant(), e.j_invariant());
        // pushforward halves the group and lands on the codomain
        let pts = e.points().unwrap();
        let mut images: Vec<CurvePoint> = pts
            .iter()
            .map(|q| velu_evaluate(&e, &c, q).unwrap())
            .collect();
        for q in &images {
            assert!(e2.contains(q));
        }
        images.sort_by_key(|q| format!("{q:?}"));
        images.dedup();
        assert_eq!(images.len(), pts.len() / 2);
    }

    fn context(p: u64, idx: usize, ell: u64) -> TorsionContext {
        let l = supersingular_j_list(p).unwrap();
        let e = normalize_twist(&curve_from_j(&l.representatives()[idx]).unwrap()).unwrap();
        torsion_basis(&e, ell, 0).unwrap()
    }

    #[test]
    fn subgroups_partition_torsion() {
        for (ell, expect) in [(3u64, 4usize), (7, 8)] {
            let ctx = context(29, 0, ell);
            let subs = subgroups_of_order(&ctx).unwrap();
            assert_eq!(subs.len(), expect);
            let mut seen: Vec<CurvePoint> =
                subs.iter().flat_map(|s| s.elements().to_vec()).collect();
            assert_eq!(seen.len() as u64, ell * ell - 1);
            seen.sort_by_key(|q| format!("{q:?}"));
            seen.dedup();
            assert_eq!(seen.len() as u64, ell * ell - 1);
        }
    }

    #[test]
    fn kernel_homomorphism_and_codomain() {
        let ctx = context(29, 1, 3);
        let e = &ctx.curve;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for c in subgroups_of_order(&ctx).unwrap() {
            let step = IsogenyStep::new(e, c.clone()).unwrap();
            for q in ctx.all_torsion() {
                assert_eq!(step.evaluate(&q).unwrap().is_infinity(), c.contains(&q));
            }
            for _ in 0..10 {
                let a = e.random_point(&mut rng);
                let b = e.random_point(&mut rng);
                let fa = step.evaluate(&a).unwrap();
                let fb = step.evaluate(&b).unwrap();
                assert!(step.codomain.contains(&fa));
                assert_eq!(
                    step.evaluate(&e.add(&a, &b)).unwrap(),
                    step.codomain.add(&fa, &fb)
                );
            }
        }
    }

    #[test]
    fn isomorphism_counts() {
        let f = make_field(29, 2).unwrap();
        let e0 = Curve::from_i64(&f, 0, 1).unwrap();
        assert_eq!(isomorphism_search(&e0, &e0).unwrap().len(), 6);
        let e1728 = Curve::from_i64(&f, 1, 0).unwrap();
        assert_eq!(isomorphism_search(&e1728, &e1728).unwrap().len(), 4);
        let g = curve_from_j(&FieldElement::from_u64(&f, 2)).unwrap();
        let isos = isomorphism_search(&g, &g).unwrap();
        assert_eq!(isos.len(), 2);
        let one = FieldElement::one(&f);
        assert!(isos.contains(&Isomorphism {
            v: one.clone(),
            w: one.clone()
        }));
        assert!(isos.contains(&Isomorphism {
            v: one.clone(),
            w: -&one
        }));
        assert!(isomorphism_search(&e0, &e1728).is_err());
    }

    #[test]
    fn traces_are_symmetric_and_bounded() {
        for idx in 0..3 {
            let ctx = context(29, idx, 3);
            let mut all = BTreeSet::new();
            for c in subgroups_of_order(&ctx).unwrap() {
                let ts = endo_trace_set(&ctx, &c).unwrap();
                for &t in &ts {
                    assert!(ts.contains(&-t));
                    assert!(t * t < 12);
                }
                all.extend(ts);
            }
            assert!(!all.is_empty() || idx < 2);
        }
    }

    #[test]
    fn j0_fingerprint_at_29_matches_its_order() {
        use crate::clifford_orders::clifford;
        use crate::ternary_forms::TernaryForm;
        let f = make_field(29, 2).unwrap();
        let fp = isog_fingerprint(&FieldElement::zero(&f), &[3], 0).unwrap();
        let order = clifford(&TernaryForm::new(1, 1, 10, 0, 1, 1));
        assert_eq!(fp, order.spl(&[3]));
    }

    #[test]
    fn fingerprint_does_not_depend_on_seed() {
        let f = make_field(29, 2).unwrap();
        let j = FieldElement::from_u64(&f, 25);
        assert_eq!(
            isog_fingerprint(&j, &[3, 5], 0).unwrap(),
            isog_fingerprint(&j, &[3, 5], 99).unwrap()
        );
    }
}
