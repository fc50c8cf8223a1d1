//! Matching supersingular j-invariants with maximal-order types.
//!
//! Both sides are reduced to fingerprints: sets of `(trace, ℓ)` for ℓ in a
//! common prime set Λ. The j-side comes from endomorphisms found by Vélu's
//! formulas; the order side from elements of reduced norm ℓ. The bijection
//! must respect automorphism classes and is verified to be unique.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford_orders::{
    candidate_primes, clifford, select_lambda, separates, Fingerprint, OrderPresentation,
};
use crate::error::{Error, Result};
use crate::finite_fields::{is_prime, FieldElement};
use crate::supersingular_curves::{
    curve_from_j, normalize_twist, render_j, supersingular_j_list, Curve, JOrbit,
};
use crate::ternary_forms::{enumerate_classes, TernaryForm};
use crate::velu_isogenies::fingerprint_at;

/// Automorphism class of a curve or of an order type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauClass {
    ZeroJ,
    J1728,
    RationalJ,
    ConjugatePair,
}

impl TauClass {
    /// Automorphs of the matching form, up to sign.
    pub fn expected_tau(self) -> u32 {
        match self {
            TauClass::ZeroJ => 6,
            TauClass::J1728 => 4,
            TauClass::RationalJ => 2,
            TauClass::ConjugatePair => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TauClass::ZeroJ => "zero_j",
            TauClass::J1728 => "j1728",
            TauClass::RationalJ => "rational_j",
            TauClass::ConjugatePair => "conjugate_pair",
        }
    }
}

impl fmt::Display for TauClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Class of a supersingular `j ∈ F_{p²}`.
pub fn tau_class_of_j(j: &FieldElement) -> TauClass {
    let k = FieldElement::from_u64(j.field(), 1728);
    if j.is_zero() {
        TauClass::ZeroJ
    } else if *j == k {
        TauClass::J1728
    } else if j.frobenius() == *j {
        TauClass::RationalJ
    } else {
        TauClass::ConjugatePair
    }
}

/// Class of a form from its automorph count.
pub fn tau_class_of_form(f: &TernaryForm) -> Result<TauClass> {
    tau_class_of_tau(f.automorph_count()?)
}

pub fn tau_class_of_tau(tau: u32) -> Result<TauClass> {
    match tau {
        6 => Ok(TauClass::ZeroJ),
        4 => Ok(TauClass::J1728),
        2 => Ok(TauClass::RationalJ),
        1 => Ok(TauClass::ConjugatePair),
        _ => Err(Error::internal(format!(
            "τ = {tau} has no automorphism class"
        ))),
    }
}

/// Every class-respecting bijection `σ` with `isog[i] = spl[σ(i)]`.
///
/// Backtracking over all assignments inside each class; only branches that
/// already violate a fingerprint equality are cut, so every admissible
/// bijection is found.
pub fn all_matchings(
    j_classes: &[TauClass],
    isog: &[Fingerprint],
    form_classes: &[TauClass],
    spl: &[Fingerprint],
) -> Vec<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        j_classes: &[TauClass],
        isog: &[Fingerprint],
        form_classes: &[TauClass],
        spl: &[Fingerprint],
        used: &mut Vec<bool>,
        sigma: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == j_classes.len() {
            out.push(sigma.clone());
            return;
        }
        for k in 0..form_classes.len() {
            if used[k] || form_classes[k] != j_classes[i] || spl[k] != isog[i] {
                continue;
            }
            used[k] = true;
            sigma.push(k);
            go(i + 1, j_classes, isog, form_classes, spl, used, sigma, out);
            sigma.pop();
            used[k] = false;
        }
    }
    let mut out = Vec::new();
    if j_classes.len() != form_classes.len() {
        return out;
    }
    let mut used = vec![false; form_classes.len()];
    go(
        0,
        j_classes,
        isog,
        form_classes,
        spl,
        &mut used,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// The unique admissible bijection.
pub fn match_fingerprints(
    j_classes: &[TauClass],
    isog: &[Fingerprint],
    form_classes: &[TauClass],
    spl: &[Fingerprint],
) -> Result<Vec<usize>> {
    if j_classes.len() != form_classes.len() {
        return Err(Error::CorrespondenceViolated(format!(
            "{} j-orbits but {} order types",
            j_classes.len(),
            form_classes.len()
        )));
    }
    let count = |cs: &[TauClass]| {
        let mut m = BTreeMap::new();
        for c in cs {
            *m.entry(*c).or_insert(0usize) += 1;
        }
        m
    };
    if count(j_classes) != count(form_classes) {
        return Err(Error::CorrespondenceViolated(format!(
            "τ classes differ: j side {:?}, form side {:?}",
            count(j_classes),
            count(form_classes)
        )));
    }
    let mut all = all_matchings(j_classes, isog, form_classes, spl);
    match all.len() {
        0 => Err(Error::CorrespondenceViolated(
            "no class-respecting bijection equates the fingerprints".into(),
        )),
        1 => Ok(all.pop().expect("one matching")),
        n => Err(Error::LambdaInsufficient { matchings: n }),
    }
}

#[derive(Debug, Clone, Default)]
pub struct MatchOptions {
    /// Fixed Λ instead of the automatic choice; must separate the orders.
    pub lambda: Option<Vec<u64>>,
    /// Seed for torsion-point draws. Results do not depend on it.
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceEntry {
    pub orbit: JOrbit,
    pub j_label: String,
    pub tau_class: TauClass,
    /// Normalized model of the representative j.
    pub curve: Curve,
    pub form: TernaryForm,
    pub tau: u32,
    pub order: OrderPresentation,
    pub isog: Fingerprint,
    pub spl: Fingerprint,
}

#[derive(Debug, Clone)]
pub struct Correspondence {
    pub p: u64,
    pub lambda: Vec<u64>,
    /// In j-orbit order: generic rationals, conjugate pairs, 1728, 0.
    pub entries: Vec<CorrespondenceEntry>,
    /// `sigma[i]` is the index, in reduced-form order, of the form matched
    /// with the i-th j-orbit.
    pub sigma: Vec<usize>,
    /// Reduced forms in enumeration order, with τ.
    pub forms: Vec<(TernaryForm, u32)>,
    /// How many admissible bijections the final Λ allowed (always 1).
    pub matchings: usize,
}

impl Correspondence {
    pub fn class_number(&self) -> usize {
        self.entries.iter().map(|e| e.orbit.members.len()).sum()
    }

    pub fn type_number(&self) -> usize {
        self.entries.len()
    }
}

/// Steps 1–7 for one prime.
pub fn build_correspondence(p: u64, opts: &MatchOptions) -> Result<Correspondence> {
    if !is_prime(p) || p < 11 {
        return Err(Error::input(format!(
            "build_correspondence needs a prime p ≥ 11, got {p}"
        )));
    }
    let classes = enumerate_classes(p).map_err(|e| e.at_step(1, "enumerate forms"))?;
    let forms: Vec<(TernaryForm, u32)> = classes.iter().map(|c| (c.form, c.tau)).collect();
    let taus: Vec<u32> = forms.iter().map(|f| f.1).collect();

    let orders: Vec<OrderPresentation> = forms.iter().map(|(f, _)| clifford(f)).collect();
    let form_classes = taus
        .iter()
        .map(|&t| tau_class_of_tau(t))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.at_step(2, "orders"))?;

    let list = supersingular_j_list(p).map_err(|e| e.at_step(3, "supersingular j list"))?;
    let j_classes: Vec<TauClass> = list
        .orbits
        .iter()
        .map(|o| tau_class_of_j(&o.representative))
        .collect();
    if list.type_number() != forms.len() {
        return Err(Error::CorrespondenceViolated(format!(
            "{} j-orbits but {} form classes",
            list.type_number(),
            forms.len()
        ))
        .at_step(3, "supersingular j list"));
    }

    let mut lambda = match &opts.lambda {
        Some(l) => {
            for &ell in l {
                if !is_prime(ell) || ell == p || ell == 2 {
                    return Err(Error::input(format!("ℓ = {ell} must be an odd prime ≠ p"))
                        .at_step(4, "select Λ"));
                }
            }
            if !separates(&orders, &taus, l) {
                return Err(
                    Error::input(format!("Λ = {l:?} does not separate the order types"))
                        .at_step(4, "select Λ"),
                );
            }
            l.clone()
        }
        None => select_lambda(&orders, &taus).map_err(|e| e.at_step(4, "select Λ"))?,
    };
    let mut cap = 0;
    for (f, _) in &forms {
        cap = cap.max(f.schiemann_bound().map_err(|e| e.at_step(4, "select Λ"))?);
    }

    let curves = list
        .orbits
        .iter()
        .map(|o| normalize_twist(&curve_from_j(&o.representative)?))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.at_step(5, "isogeny fingerprints"))?;
    let mut per_ell: Vec<BTreeMap<u64, Fingerprint>> = vec![BTreeMap::new(); curves.len()];

    loop {
        for (e, cache) in curves.iter().zip(per_ell.iter_mut()) {
            for &ell in &lambda {
                if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(ell) {
                    let fp = fingerprint_at(e, ell, opts.seed)
                        .map_err(|err| err.at_step(5, "isogeny fingerprints"))?;
                    slot.insert(fp);
                }
            }
        }
        let isog: Vec<Fingerprint> = per_ell
            .iter()
            .map(|c| {
                let mut fp = Fingerprint::new();
                for ell in &lambda {
                    fp.extend(&c[ell]);
                }
                fp
            })
            .collect();
        let spl: Vec<Fingerprint> = orders.iter().map(|o| o.spl(&lambda)).collect();
        match match_fingerprints(&j_classes, &isog, &form_classes, &spl) {
            Ok(sigma) => {
                let entries = list
                    .orbits
                    .iter()
                    .enumerate()
                    .map(|(i, orbit)| {
                        let k = sigma[i];
                        CorrespondenceEntry {
                            orbit: orbit.clone(),
                            j_label: render_j(&orbit.representative),
                            tau_class: j_classes[i],
                            curve: curves[i].clone(),
                            form: forms[k].0,
                            tau: forms[k].1,
                            order: orders[k].clone(),
                            isog: isog[i].clone(),
                            spl: spl[k].clone(),
                        }
                    })
                    .collect();
                return Ok(Correspondence {
                    p,
                    lambda,
                    entries,
                    sigma,
                    forms,
                    matchings: 1,
                });
            }
            Err(Error::LambdaInsufficient { matchings }) if opts.lambda.is_none() => {
                let last = lambda.last().copied().unwrap_or(1);
                match candidate_primes(p).find(|&l| l > last) {
                    Some(next) if next as i64 <= cap => lambda.push(next),
                    _ => return Err(Error::LambdaInsufficient { matchings }.at_step(6, "match")),
                }
            }
            Err(e) => return Err(e.at_step(6, "match")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_fields::make_field;

    fn fp(pairs: &[(i64, i64)]) -> Fingerprint {
        pairs.iter().copied().collect()
    }

    #[test]
    fn classes_of_j() {
        let f = make_field(37, 2).unwrap();
        assert_eq!(tau_class_of_j(&FieldElement::zero(&f)), TauClass::ZeroJ);
        assert_eq!(
            tau_class_of_j(&FieldElement::from_u64(&f, 1728)),
            TauClass::J1728
        );
        assert_eq!(
            tau_class_of_j(&FieldElement::from_u64(&f, 8)),
            TauClass::RationalJ
        );
        assert_eq!(
            tau_class_of_j(&FieldElement::from_coeffs(&f, &[3, 10])),
            TauClass::ConjugatePair
        );
        assert!(tau_class_of_tau(3).is_err());
    }

    #[test]
    fn singleton_matches_trivially() {
        let s = match_fingerprints(
            &[TauClass::RationalJ],
            &[fp(&[])],
            &[TauClass::RationalJ],
            &[fp(&[])],
        );
        assert_eq!(s.unwrap(), vec![0]);
    }

    #[test]
    fn ambiguity_and_violation_are_reported() {
        let r = TauClass::RationalJ;
        let a = fp(&[(1, 3)]);
        let b = fp(&[(2, 3)]);
        let amb = match_fingerprints(
            &[r, r],
            &[a.clone(), a.clone()],
            &[r, r],
            &[a.clone(), a.clone()],
        );
        assert!(matches!(
            amb,
            Err(Error::LambdaInsufficient { matchings: 2 })
        ));
        let none = match_fingerprints(
            &[r, r],
            &[a.clone(), a.clone()],
            &[r, r],
            &[a.clone(), b.clone()],
        );
        assert!(matches!(none, Err(Error::CorrespondenceViolated(_))));
        let swap = match_fingerprints(&[r, r], &[a.clone(), b.clone()], &[r, r], &[b, a]);
        assert_eq!(swap.unwrap(), vec![1, 0]);
    }

    #[test]
    fn class_counts_are_checked_first() {
        let e = fp(&[]);
        let r = match_fingerprints(
            &[TauClass::ZeroJ],
            std::slice::from_ref(&e),
            &[TauClass::J1728],
            std::slice::from_ref(&e),
        );
        assert!(matches!(r, Err(Error::CorrespondenceViolated(_))));
    }

    #[test]
    fn p29_pairs() {
        let c = build_correspondence(29, &MatchOptions::default()).unwrap();
        let got: Vec<(String, TernaryForm)> = c
            .entries
            .iter()
            .map(|e| (e.j_label.clone(), e.form))
            .collect();
        assert_eq!(
            got,
            vec![
                ("2".to_string(), TernaryForm::new(1, 3, 3, 2, 0, 1)),
                ("25".to_string(), TernaryForm::new(1, 2, 4, 1, 1, 0)),
                ("0".to_string(), TernaryForm::new(1, 1, 10, 0, 1, 1)),
            ]
        );
        for e in &c.entries {
            assert_eq!(e.isog, e.spl);
            assert_eq!(e.tau, e.tau_class.expected_tau());
        }
    }

    #[test]
    fn explicit_lambda_is_validated() {
        let bad = MatchOptions {
            lambda: Some(vec![]),
            seed: 0,
        };
        assert!(build_correspondence(29, &bad).is_err());
        let good = MatchOptions {
            lambda: Some(vec![3, 5, 7]),
            seed: 1,
        };
        assert_eq!(
            build_correspondence(29, &good).unwrap().lambda,
            vec![3, 5, 7]
        );
        assert!(build_correspondence(7, &MatchOptions::default()).is_err());
    }
}
