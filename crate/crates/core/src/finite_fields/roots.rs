//! Roots of polynomials over `F_q` by gcd with `X^q − X` followed by
//! equal-degree splitting. Results are sorted canonically, so the random
//! splitting elements never leak into outputs.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Field, FieldElement};
use crate::error::{Error, Result};

type Poly = Vec<FieldElement>;

fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn monic(a: &[FieldElement]) -> Poly {
    let inv = a
        .last()
        .expect("nonzero polynomial")
        .inv()
        .expect("nonzero lead");
    a.iter().map(|c| c * &inv).collect()
}

fn sub(a: &[FieldElement], b: &[FieldElement], field: &Field) -> Poly {
    let n = a.len().max(b.len());
    let zero = FieldElement::zero(field);
    let mut out: Poly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

fn mul(a: &[FieldElement], b: &[FieldElement], field: &Field) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&mut out);
    out
}

/// Division by a monic `m`.
fn divrem(a: &[FieldElement], m: &[FieldElement]) -> (Poly, Poly) {
    let dm = m.len() - 1;
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let field = m[0].field().clone();
    let mut q = vec![FieldElement::zero(&field); r.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dm {
            r[i - dm + j] = &r[i - dm + j] - &(&c * &m[j]);
        }
        q[i - dm] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn gcd(a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let ym = monic(&y);
        let r = divrem(&x, &ym).1;
        x = ym;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        monic(&x)
    }
}

fn powmod(base: &[FieldElement], exp: &BigUint, m: &[FieldElement], field: &Field) -> Poly {
    let mut acc = divrem(&[FieldElement::one(field)], m).1;
    let base = divrem(base, m).1;
    for i in (0..exp.bits()).rev() {
        acc = divrem(&mul(&acc, &acc, field), m).1;
        if exp.bit(i) {
            acc = divrem(&mul(&acc, &base, field), m).1;
        }
    }
    acc
}

/// Splits a monic squarefree product of distinct linear factors.
fn split(g: Poly, field: &Field, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElement>) {
    let deg = g.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        out.push(-&g[0]);
        return;
    }
    let half = (field.order() - BigUint::one()) >> 1;
    let one = FieldElement::one(field);
    loop {
        let delta = FieldElement::random(field, rng);
        let s = powmod(&[delta, one.clone()], &half, &g, field);
        let d = gcd(&sub(&s, std::slice::from_ref(&one), field), &g);
        let dd = d.len().saturating_sub(1);
        if d.is_empty() || dd == 0 || dd == deg {
            continue;
        }
        let (rest, _) = divrem(&g, &d);
        split(d, field, rng, out);
        split(monic(&rest), field, rng, out);
        return;
    }
}

/// All distinct roots in the coefficient field, canonically sorted.
///
/// Coefficients are low degree first. The zero polynomial is rejected.
pub fn poly_roots(coeffs: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let mut f: Poly = coeffs.to_vec();
    trim(&mut f);
    let Some(lead) = f.last() else {
        return Err(Error::input(
            "the zero polynomial has every element as a root",
        ));
    };
    let field = lead.field().clone();
    if field.characteristic() == 2 {
        return Err(Error::input("root finding needs odd characteristic"));
    }
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    let f = monic(&f);
    let x = vec![FieldElement::zero(&field), FieldElement::one(&field)];
    let xq = powmod(&x, &field.order(), &f, &field);
    let linear_part = gcd(&sub(&xq, &x, &field), &f);
    let mut roots = Vec::new();
    // fixed seed: the split order is irrelevant once roots are sorted
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd5_eed5);
    if !linear_part.is_empty() {
        split(linear_part, &field, &mut rng, &mut roots);
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// All `u` with `u^k = c`, canonically sorted.
pub fn roots_of(c: &FieldElement, k: u32) -> Vec<FieldElement> {
    let field = c.field().clone();
    if c.is_zero() {
        return vec![FieldElement::zero(&field)];
    }
    let mut f = vec![FieldElement::zero(&field); k as usize + 1];
    f[0] = -c;
    f[k as usize] = FieldElement::one(&field);
    poly_roots(&f).expect("X^k - c is a nonzero polynomial")
}

/// The canonically first `k`-th root of `c`, if any.
pub fn root_of(c: &FieldElement, k: u32) -> Option<FieldElement> {
    roots_of(c, k).into_iter().next()
}
