//! Supersingular curves in short Weierstrass form and their torsion.
//!
//! Every supersingular j lies in `F_{p²}`. After [`normalize_twist`] the
//! `p²`-power Frobenius acts on the curve as the scalar `−p`, so
//! `E(F_{p^{2m}}) ≅ (Z/n)²` with `n = |(−p)^m − 1|` and every endomorphism
//! and isomorphism is already defined over `F_{p²}`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finite_fields::{is_prime, make_field, Embedding, Field, FieldElement};

/// `y² = x³ + Ax + B`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    a: FieldElement,
    b: FieldElement,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl Curve {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::input("curve coefficients live in different fields"));
        }
        if a.field().characteristic() < 5 {
            return Err(Error::input(
                "short Weierstrass models need characteristic ≥ 5",
            ));
        }
        let c = Curve { a, b };
        if c.discriminant_part().is_zero() {
            return Err(Error::input(format!("{c:?} is singular")));
        }
        Ok(c)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_i64(field: &Field, a: i64, b: i64) -> Result<Self> {
        Curve::new(
            FieldElement::from_i64(field, a),
            FieldElement::from_i64(field, b),
        )
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    /// `4A³ + 27B²`.
    fn discriminant_part(&self) -> FieldElement {
        &self.a.pow_u64(3).scale(4) + &self.b.square().scale(27)
    }

    pub fn j_invariant(&self) -> FieldElement {
        let four_a3 = self.a.pow_u64(3).scale(4);
        let den = self.discriminant_part();
        &four_a3.scale(1728) * &den.inv().expect("nonsingular curve")
    }

    /// `x³ + Ax + B`.
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        &(&(&x.square() * x) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x.field() == self.field() && y.field() == self.field() && y.square() == self.rhs(x)
            }
        }
    }

    fn require(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::input(format!("{p:?} is not on {self:?}")))
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y),
        }
    }

    /// Chord-and-tangent addition. Inputs are assumed to be on the curve; use
    /// [`Curve::checked_add`] for validated input.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return CurvePoint::Infinity;
            }
            let num = &x1.square().scale(3) + &self.a;
            &num * &y1.scale(2).inv().expect("y ≠ 0")
        } else {
            &(y2 - y1) * &(x2 - x1).inv().expect("x1 ≠ x2")
        };
        let x3 = &(&slope.square() - x1) - x2;
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        CurvePoint::affine(x3, y3)
    }

    pub fn checked_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.require(p)?;
        self.require(q)?;
        Ok(self.add(p, q))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, k: &BigUint, p: &CurvePoint) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    pub fn mul_u64(&self, k: u64, p: &CurvePoint) -> CurvePoint {
        self.scalar_mul(&BigUint::from(k), p)
    }

    pub fn mul_i64(&self, k: i64, p: &CurvePoint) -> CurvePoint {
        let q = self.mul_u64(k.unsigned_abs(), p);
        if k < 0 {
            self.negate(&q)
        } else {
            q
        }
    }

    /// `[k]P ≠ O` for every `1 ≤ k ≤ bound`.
    pub fn order_exceeds(&self, p: &CurvePoint, bound: u64) -> bool {
        let mut acc = CurvePoint::Infinity;
        for _ in 0..bound {
            acc = self.add(&acc, p);
            if acc.is_infinity() {
                return false;
            }
        }
        true
    }

    /// Same curve with coefficients pushed into a larger field.
    pub fn base_change(&self, emb: &Embedding) -> Result<Curve> {
        Curve::new(emb.apply(&self.a)?, emb.apply(&self.b)?)
    }

    pub fn map_point(&self, emb: &Embedding, p: &CurvePoint) -> Result<CurvePoint> {
        self.require(p)?;
        Ok(match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(emb.apply(x)?, emb.apply(y)?),
        })
    }

    /// A point with uniformly drawn x-coordinate (retrying until the
    /// right-hand side is a square), sign of `y` chosen by the generator too.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> CurvePoint {
        loop {
            let x = FieldElement::random(self.field(), rng);
            let r = self.rhs(&x);
            if !r.is_square() {
                continue;
            }
            let y = r.sqrt().expect("square has a root");
            let y = if rand::Rng::gen_bool(rng, 0.5) {
                -&y
            } else {
                y
            };
            return CurvePoint::affine(x, y);
        }
    }

    /// Every rational point, `O` first. Small fields only.
    pub fn points(&self) -> Result<Vec<CurvePoint>> {
        self.check_small()?;
        let mut out = vec![CurvePoint::Infinity];
        for x in FieldElement::all(self.field()) {
            let r = self.rhs(&x);
            if r.is_zero() {
                out.push(CurvePoint::affine(x, r));
            } else if r.is_square() {
                let y = r.sqrt().expect("square has a root");
                out.push(CurvePoint::affine(x.clone(), -&y));
                out.push(CurvePoint::affine(x, y));
            }
        }
        Ok(out)
    }

    /// `#E(F_q)` by summing quadratic characters.
    pub fn count_points(&self) -> Result<BigUint> {
        self.check_small()?;
        let mut total: i64 = 1;
        for x in FieldElement::all(self.field()) {
            total += 1 + self.rhs(&x).legendre() as i64;
        }
        Ok(BigUint::from(total as u64))
    }

    fn check_small(&self) -> Result<()> {
        if self.field().order() > BigUint::from(1u64 << 24) {
            return Err(Error::input(
                "exhaustive point enumeration needs a field of size ≤ 2^24",
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y² = x³ + ({})x + ({})", self.a, self.b)
    }
}

/// Coefficients of `H_p(λ) = Σ binom(k, i)² λ^i mod p`, `k = (p − 1)/2`, low
/// degree first. The roots in `F_{p²}` are exactly the Legendre parameters of
/// supersingular curves.
pub fn deuring_polynomial(p: u64) -> Vec<u64> {
    let k = (p - 1) / 2;
    let mut out = Vec::with_capacity(k as usize + 1);
    // binom(k, i) built incrementally mod p; k < p so no factor vanishes
    let mut binom: u64 = 1;
    for i in 0..=k {
        out.push(binom * binom % p);
        if i < k {
            let num = binom * ((k - i) % p) % p;
            binom = num * inv_mod_u64(i + 1, p) % p;
        }
    }
    out
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A Galois orbit of supersingular j-invariants under `j ↦ j^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JOrbit {
    /// Canonically smallest member.
    pub representative: FieldElement,
    pub members: Vec<FieldElement>,
}

impl JOrbit {
    pub fn is_rational(&self) -> bool {
        self.members.len() == 1
    }
}

#[derive(Debug, Clone)]
pub struct SupersingularList {
    pub p: u64,
    /// `F_{p²}` presented as `F_p(√ε)`.
    pub field: Field,
    /// The full set, canonically sorted; its size is the class number.
    pub all: Vec<FieldElement>,
    /// One orbit per maximal-order type: generic rationals ascending, then
    /// conjugate pairs, then 1728, then 0.
    pub orbits: Vec<JOrbit>,
}

impl SupersingularList {
    pub fn class_number(&self) -> usize {
        self.all.len()
    }

    pub fn type_number(&self) -> usize {
        self.orbits.len()
    }

    pub fn representatives(&self) -> Vec<FieldElement> {
        self.orbits
            .iter()
            .map(|o| o.representative.clone())
            .collect()
    }
}

/// Evaluates `H_p` at every `λ ∈ F_{p²}` and maps roots to j-invariants.
pub fn supersingular_j_list(p: u64) -> Result<SupersingularList> {
    if !is_prime(p) || p < 5 {
        return Err(Error::input(format!(
            "supersingular j list needs a prime p ≥ 5, got {p}"
        )));
    }
    let field = make_field(p, 2)?;
    let h: Vec<FieldElement> = deuring_polynomial(p)
        .into_iter()
        .map(|c| FieldElement::from_u64(&field, c))
        .collect();
    let one = FieldElement::one(&field);
    let mut js = Vec::new();
    for lam in FieldElement::all(&field) {
        let mut acc = FieldElement::zero(&field);
        for c in h.iter().rev() {
            acc = &(&acc * &lam) + c;
        }
        if !acc.is_zero() {
            continue;
        }
        if lam.is_zero() || lam == one {
            return Err(Error::internal(format!(
                "H_{p} vanishes at the singular parameter {lam}"
            )));
        }
        js.push(legendre_j(&lam));
    }
    js.sort();
    js.dedup();
    for j in &js {
        if js.binary_search(&j.frobenius()).is_err() {
            return Err(Error::internal(format!(
                "supersingular set not Galois-stable at {j}"
            )));
        }
    }
    let mut rational = Vec::new();
    let mut pairs = Vec::new();
    let mut special = Vec::new();
    let j1728 = FieldElement::from_u64(&field, 1728);
    for j in &js {
        let c = j.frobenius();
        if c == *j {
            let orbit = JOrbit {
                representative: j.clone(),
                members: vec![j.clone()],
            };
            if j.is_zero() || *j == j1728 {
                special.push(orbit);
            } else {
                rational.push(orbit);
            }
        } else if j < &c {
            pairs.push(JOrbit {
                representative: j.clone(),
                members: vec![j.clone(), c],
            });
        }
    }
    // 1728 before 0, matching the table's column order
    special.sort_by_key(|o| o.representative.is_zero());
    let mut orbits = rational;
    orbits.extend(pairs);
    orbits.extend(special);
    Ok(SupersingularList {
        p,
        field,
        all: js,
        orbits,
    })
}

/// `j = 256(λ² − λ + 1)³ / (λ²(λ − 1)²)`.
pub fn legendre_j(lam: &FieldElement) -> FieldElement {
    let one = FieldElement::one(lam.field());
    let l2 = lam.square();
    let num = (&(&l2 - lam) + &one).pow_u64(3).scale(256);
    let den = &l2 * &(lam - &one).square();
    &num * &den.inv().expect("λ ∉ {0, 1}")
}

/// Renders an element of `F_p(√ε)` as an integer or `a±b√ε`, `b ≤ (p−1)/2`.
pub fn render_j(j: &FieldElement) -> String {
    let field = j.field();
    let p = field.characteristic();
    let c = j.coeffs();
    if c.iter().skip(1).all(|&v| v == 0) {
        return c[0].to_string();
    }
    match field.sqrt_base() {
        Some(eps) => {
            let b = c[1].min(p - c[1]);
            format!("{}±{}√{}", c[0], b, eps)
        }
        None => j.to_string(),
    }
}

/// The standard model with the given j-invariant.
pub fn curve_from_j(j: &FieldElement) -> Result<Curve> {
    let field = j.field();
    if j.is_zero() {
        return Curve::from_i64(field, 0, 1);
    }
    let k = FieldElement::from_u64(field, 1728);
    if *j == k {
        return Curve::from_i64(field, 1, 0);
    }
    let d = &k - j;
    Curve::new((j * &d).scale(3), (&(j * &d) * &d).scale(2))
}

/// A generator of `F_q^*`, canonically first.
pub fn primitive_element(field: &Field) -> FieldElement {
    let q1 = field.order() - BigUint::one();
    let n = q1.to_u64().expect("small field");
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    FieldElement::all(field)
        .skip(1)
        .find(|g| primes.iter().all(|&r| !g.pow_u64(n / r).is_one()))
        .expect("multiplicative group is cyclic")
}

/// The twists of `E` over its base field: quadratic (generic j), quartic
/// (j = 1728) or sextic (j = 0), `E` itself first.
pub fn twists(e: &Curve) -> Result<Vec<Curve>> {
    let g = primitive_element(e.field());
    let mut out = Vec::new();
    if e.a().is_zero() {
        for k in 0..6 {
            out.push(Curve::new(e.a().clone(), e.b() * &g.pow_u64(k))?);
        }
    } else if e.b().is_zero() {
        for k in 0..4 {
            out.push(Curve::new(e.a() * &g.pow_u64(k), e.b().clone())?);
        }
    } else {
        out.push(e.clone());
        out.push(Curve::new(e.a() * &g.square(), e.b() * &g.pow_u64(3))?);
    }
    Ok(out)
}

/// The twist with `#E(F_{p²}) = (p + 1)²`, i.e. Frobenius acting as `−p`.
pub fn normalize_twist(e: &Curve) -> Result<Curve> {
    let field = e.field();
    if field.degree() != 2 {
        return Err(Error::input("normalize_twist expects a curve over F_{p²}"));
    }
    let p = field.characteristic();
    let target = BigUint::from((p + 1) * (p + 1));
    for t in twists(e)? {
        if t.count_points()? == target {
            return Ok(t);
        }
    }
    Err(Error::internal(format!(
        "no twist of {e:?} has (p+1)² points; j = {} is not supersingular",
        e.j_invariant()
    )))
}

/// Multiplicative order of `a` modulo a prime `l ∤ a`.
pub fn mult_order(a: u64, l: u64) -> u64 {
    let a = a % l;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % l;
        k += 1;
    }
    k
}

/// `2⌊2√ℓ⌋`: bound on `|t − t′|` for two admissible traces of degree `ℓ`.
pub(crate) fn trace_spread(l: u64) -> u64 {
    2 * isqrt(4 * l)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Everything needed to work with `E[ℓ]` on a normalized curve.
#[derive(Debug, Clone)]
pub struct TorsionContext {
    pub ell: u64,
    /// Order of `−p` modulo `ℓ`: `E[ℓ]` is rational over `F_{p^{2m}}`.
    pub m: u64,
    /// Working degree: a multiple of `m` large enough that order-`n` points
    /// separate every pair of admissible traces.
    pub work_m: u64,
    pub field: Field,
    /// Exponent of `E(F_{p^{2·work_m}}) ≅ (Z/n)²`.
    pub n: BigUint,
    /// The normalized curve over the working field.
    pub curve: Curve,
    pub p1: CurvePoint,
    pub p2: CurvePoint,
    /// High-order points with `(n/ℓ)·T_i = P_i`.
    pub test_points: [CurvePoint; 2],
}

impl TorsionContext {
    /// All `ℓ²` points `aP1 + bP2`, indexed `a·ℓ + b`.
    pub fn all_torsion(&self) -> Vec<CurvePoint> {
        let e = &self.curve;
        let mut out = Vec::with_capacity((self.ell * self.ell) as usize);
        let mut row = CurvePoint::Infinity;
        for _ in 0..self.ell {
            let mut pt = row.clone();
            for _ in 0..self.ell {
                out.push(pt.clone());
                pt = e.add(&pt, &self.p2);
            }
            row = e.add(&row, &self.p1);
        }
        out
    }
}

/// Finds a basis of `E[ℓ]` on a normalized curve over `F_{p²}`.
///
/// Points are drawn from a ChaCha8 stream seeded by `(seed, ℓ)`; any seed
/// gives a valid basis, the seed only fixes which one.
pub fn torsion_basis(e: &Curve, ell: u64, seed: u64) -> Result<TorsionContext> {
    let field = e.field();
    let p = field.characteristic();
    if field.degree() != 2 {
        return Err(Error::input(
            "torsion_basis expects a normalized curve over F_{p²}",
        ));
    }
    if ell == p || !is_prime(ell) {
        return Err(Error::input(format!(
            "ℓ = {ell} must be a prime different from p = {p}"
        )));
    }
    let minus_p = (ell - p % ell) % ell;
    let m = if ell == 2 {
        1
    } else {
        mult_order(minus_p, ell)
    };
    let spread = trace_spread(ell);
    // test points need order > ℓ·spread so that images under a degree-ℓ map
    // still have order > spread
    let order_bound = ell * spread;
    let mut work_m = m;
    let n = loop {
        let n = signed_power_gap(p, work_m);
        if n > BigUint::from(order_bound) {
            break n;
        }
        work_m += m;
    };
    let big = make_field(p, 2 * work_m as usize)?;
    let emb = Embedding::new(field, &big)?;
    let curve = e.base_change(&emb)?;
    let cofactor = &n / ell;
    if (&cofactor * ell) != n {
        return Err(Error::internal(format!(
            "ℓ = {ell} does not divide n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ell.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut first: Option<(CurvePoint, CurvePoint)> = None;
    for _ in 0..400 {
        let q = curve.random_point(&mut rng);
        if !curve.order_exceeds(&q, order_bound) {
            continue;
        }
        if !curve.scalar_mul(&n, &q).is_infinity() {
            return Err(Error::internal(format!(
                "n = {n} does not annihilate {q:?}; the curve is not normalized"
            )));
        }
        let r = curve.scalar_mul(&cofactor, &q);
        if r.is_infinity() {
            continue;
        }
        match &first {
            None => first = Some((r, q)),
            Some((p1, t1)) => {
                let mut mult = CurvePoint::Infinity;
                let mut dependent = false;
                for _ in 0..ell {
                    if mult == r {
                        dependent = true;
                        break;
                    }
                    mult = curve.add(&mult, p1);
                }
                if dependent {
                    continue;
                }
                return Ok(TorsionContext {
                    ell,
                    m,
                    work_m,
                    field: big,
                    n,
                    p1: p1.clone(),
                    p2: r,
                    test_points: [t1.clone(), q],
                    curve,
                });
            }
        }
    }
    Err(Error::internal(format!(
        "no basis of E[{ell}] found in 400 draws"
    )))
}

/// `|(−p)^m − 1|`.
fn signed_power_gap(p: u64, m: u64) -> BigUint {
    let pm = BigUint::from(p).pow(m as u32);
    if m.is_multiple_of(2) {
        pm - BigUint::one()
    } else {
        pm + BigUint::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn special_j_values() {
        let f = fp(29);
        assert_eq!(
            Curve::from_i64(&f, 3, 0)
                .unwrap()
                .j_invariant()
                .as_prime_field(),
            Some(1728 % 29)
        );
        assert!(Curve::from_i64(&f, 0, 5).unwrap().j_invariant().is_zero());
        assert!(Curve::from_i64(&f, 0, 0).is_err());
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let f = fp(29);
        let e = Curve::from_i64(&f, 1, 0).unwrap();
        let bad = CurvePoint::affine(FieldElement::from_u64(&f, 1), FieldElement::from_u64(&f, 1));
        assert!(e.checked_add(&bad, &CurvePoint::Infinity).is_err());
    }

    /// Addition table against the definition: associativity, commutativity,
    /// identity and inverses over every rational point.
    fn check_group(e: &Curve) {
        let pts = e.points().unwrap();
        let n = pts.len();
        assert_eq!(BigUint::from(n), e.count_points().unwrap());
        let index = |q: &CurvePoint| pts.iter().position(|r| r == q).expect("closed");
        let table: Vec<Vec<usize>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| index(&e.add(a, b))).collect())
            .collect();
        for i in 0..n {
            assert_eq!(table[0][i], i);
            assert_eq!(table[i][index(&e.negate(&pts[i]))], 0);
            for j in 0..n {
                assert_eq!(table[i][j], table[j][i]);
                for k in 0..n {
                    assert_eq!(table[table[i][j]][k], table[i][table[j][k]]);
                }
            }
        }
        for pt in &pts {
            assert!(e.mul_u64(n as u64, pt).is_infinity());
        }
    }

    #[test]
    fn group_law_exhaustive_small_fields() {
        check_group(&Curve::from_i64(&fp(29), 1, 0).unwrap());
        check_group(&Curve::from_i64(&fp(11), 2, 7).unwrap());
        check_group(&Curve::from_i64(&fp(13), 5, 1).unwrap());
    }

    #[test]
    fn deuring_polynomial_small_cases() {
        assert_eq!(deuring_polynomial(5), vec![1, 4, 1]);
        for p in [11u64, 29, 97] {
            let h = deuring_polynomial(p);
            assert_eq!(h.len() as u64, (p - 1) / 2 + 1);
            assert_eq!(h[0], 1);
            assert_eq!(*h.last().unwrap(), 1);
        }
    }

    #[test]
    fn p5_has_only_j_zero() {
        let l = supersingular_j_list(5).unwrap();
        assert_eq!(l.all.len(), 1);
        assert!(l.all[0].is_zero());
    }

    #[test]
    fn lists_for_29_and_37() {
        let l = supersingular_j_list(29).unwrap();
        let rendered: Vec<String> = l.representatives().iter().map(render_j).collect();
        assert_eq!(rendered, vec!["2", "25", "0"]);
        let l = supersingular_j_list(37).unwrap();
        assert_eq!(l.class_number(), 3);
        let rendered: Vec<String> = l.representatives().iter().map(render_j).collect();
        assert_eq!(rendered, vec!["8", "3±10√2"]);
    }

    #[test]
    fn count_law_up_to_97() {
        for p in (11..=97u64).filter(|&p| is_prime(p)) {
            let eps = [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2][(p % 12) as usize];
            let l = supersingular_j_list(p).unwrap();
            assert_eq!(l.class_number() as u64, p / 12 + eps, "p = {p}");
            let rational = l.orbits.iter().filter(|o| o.is_rational()).count();
            assert_eq!(2 * l.type_number() - l.class_number(), rational);
        }
    }

    #[test]
    fn curve_from_j_round_trips() {
        let f = make_field(97, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let j = FieldElement::random(&f, &mut rng);
            assert_eq!(curve_from_j(&j).unwrap().j_invariant(), j);
        }
        assert_eq!(
            curve_from_j(&FieldElement::zero(&f)).unwrap(),
            Curve::from_i64(&f, 0, 1).unwrap()
        );
    }

    #[test]
    fn quadratic_twist_keeps_j() {
        let f = make_field(31, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = FieldElement::random(&f, &mut rng);
            let b = FieldElement::random(&f, &mut rng);
            let Ok(e) = Curve::new(a, b) else { continue };
            let t = &twists(&e).unwrap()[1];
            assert_eq!(t.j_invariant(), e.j_invariant());
        }
    }

    #[test]
    fn normalized_curves_have_p_plus_one_squared_points() {
        let p = 29;
        let l = supersingular_j_list(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in l.representatives() {
            let e = normalize_twist(&curve_from_j(&j).unwrap()).unwrap();
            assert_eq!(e.count_points().unwrap(), BigUint::from(900u32));
            assert_eq!(e.j_invariant(), j);
            for _ in 0..20 {
                let q = e.random_point(&mut rng);
                assert!(e.mul_u64(p + 1, &q).is_infinity());
            }
        }
        // the j = 0 model is a sextic twist of y² = x³ + 1
        let f = &l.field;
        let e0 = Curve::from_i64(f, 0, 1).unwrap();
        let counts: Vec<BigUint> = twists(&e0)
            .unwrap()
            .iter()
            .map(|t| t.count_points().unwrap())
            .collect();
        assert!(counts.contains(&BigUint::from(900u32)));
    }

    #[test]
    fn torsion_context_degrees() {
        let l = supersingular_j_list(29).unwrap();
        let e = normalize_twist(&curve_from_j(&l.representatives()[0]).unwrap()).unwrap();
        let c3 = torsion_basis(&e, 3, 0).unwrap();
        assert_eq!(c3.m, 1);
        let c7 = torsion_basis(&e, 7, 0).unwrap();
        assert_eq!(c7.m, 2);
        assert_eq!(c7.field.degree(), 4);
        for ctx in [&c3, &c7] {
            let pts = ctx.all_torsion();
            let mut sorted = pts.clone();
            sorted.sort_by_key(|q| format!("{q:?}"));
            sorted.dedup();
            assert_eq!(sorted.len() as u64, ctx.ell * ctx.ell);
            for q in &pts {
                assert!(ctx.curve.mul_u64(ctx.ell, q).is_infinity());
            }
        }
        assert!(torsion_basis(&e, 29, 0).is_err());
    }

    #[test]
    fn exponent_annihilates_in_extensions() {
        let l = supersingular_j_list(31).unwrap();
        let e = normalize_twist(&curve_from_j(&l.representatives()[0]).unwrap()).unwrap();
        let ctx = torsion_basis(&e, 5, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let q = ctx.curve.random_point(&mut rng);
            assert!(ctx.curve.scalar_mul(&ctx.n, &q).is_infinity());
        }
        assert!(ctx.n > BigUint::from(0u32));
    }
}
