//! Exact arithmetic in `F_p` and its extensions `F_{p^k}`.
//!
//! Every extension is built directly over `F_p` by a monic irreducible
//! polynomial of full degree; relative structure (say `F_{p^2} ⊂ F_{p^8}`) is
//! recovered through [`Embedding`]. The quadratic extension is always
//! `F_p(√ε)` with `ε` the smallest quadratic non-residue, so elements of
//! `F_{p^2}` read as `a + b√ε`.
//!
//! Coefficient arithmetic uses native words and requires `p < 2^31`;
//! exponents are arbitrary-size.

pub(crate) mod poly;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use poly::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};

pub use roots::{poly_roots, root_of, roots_of};

/// Shared handle to a field; cloning is cheap.
pub type Field = Arc<FieldDescriptor>;

/// `F_{p^k} = F_p[X] / (g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: u64,
    degree: usize,
    /// Monic defining polynomial, low degree first, `degree + 1` entries.
    modulus: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a non-residue")
}

/// Builds `F_{p^k}` with a deterministic defining polynomial.
///
/// Degree 1 uses `X`, degree 2 uses `X² − ε` (ε the smallest non-residue),
/// and larger degrees take the first irreducible monic polynomial when the
/// lower coefficients are read as base-`p` digits of `1, 2, 3, …`.
pub fn make_field(p: u64, k: usize) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if p >= 1 << 31 {
        return Err(Error::input(format!("characteristic {p} exceeds 2^31")));
    }
    if k == 0 {
        return Err(Error::input("field degree must be at least 1"));
    }
    let modulus = match k {
        1 => vec![0, 1],
        2 if p > 2 => vec![p - smallest_nonresidue(p), 0, 1],
        _ => search_irreducible(p, k),
    };
    Ok(Arc::new(FieldDescriptor {
        p,
        degree: k,
        modulus,
    }))
}

fn search_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut counter: u64 = 1;
    loop {
        let mut candidate = Vec::with_capacity(k + 1);
        let mut n = counter;
        for _ in 0..k {
            candidate.push(n % p);
            n /= p;
        }
        candidate.push(1);
        if candidate[0] != 0 && poly::is_irreducible(&candidate, p) {
            return candidate;
        }
        counter += 1;
    }
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^k`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    /// `ε` when the field is presented as `F_p(√ε)`.
    pub fn sqrt_base(&self) -> Option<u64> {
        (self.degree == 2 && self.modulus[1] == 0).then(|| (self.p - self.modulus[0]) % self.p)
    }

    fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// An element of some [`FieldDescriptor`], always fully reduced.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        FieldElement {
            field: field.clone(),
            coeffs: vec![0; field.degree],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_u64(field, 1)
    }

    pub fn from_u64(field: &Field, v: u64) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = v % field.p;
        e
    }

    pub fn from_i64(field: &Field, v: i64) -> Self {
        let p = field.p as i64;
        Self::from_u64(field, v.rem_euclid(p) as u64)
    }

    /// Coefficients low degree first; missing entries are zero and extra
    /// entries are reduced away.
    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Self {
        let p = field.p;
        let mut c: Vec<u64> = coeffs.iter().map(|v| v % p).collect();
        poly::trim(&mut c);
        let mut c = if c.len() > field.degree {
            poly::rem(&c, &field.modulus, p)
        } else {
            c
        };
        c.resize(field.degree, 0);
        FieldElement {
            field: field.clone(),
            coeffs: c,
        }
    }

    /// The generator `X` of the defining polynomial.
    pub fn generator(field: &Field) -> Self {
        Self::from_coeffs(field, &[0, 1])
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Self {
        let coeffs = (0..field.degree)
            .map(|_| rng.gen_range(0..field.p))
            .collect();
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    /// Every element of the field in canonical order. Only sensible for
    /// small fields.
    pub fn all(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
        let p = field.p;
        let k = field.degree;
        let total = (p as u128).pow(k as u32);
        (0..total).map(move |mut n| {
            let mut coeffs = vec![0u64; k];
            for c in coeffs.iter_mut() {
                *c = (n % p as u128) as u64;
                n /= p as u128;
            }
            FieldElement {
                field: field.clone(),
                coeffs,
            }
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::input("operands belong to different fields"))
        }
    }

    fn assert_same(&self, other: &Self) {
        assert!(
            self.field.same_as(&other.field),
            "operands belong to different fields"
        );
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let p = f.p;
        let k = f.degree;
        if k == 1 {
            return FieldElement {
                field: f.clone(),
                coeffs: vec![mul_mod(self.coeffs[0], other.coeffs[0], p)],
            };
        }
        // products are < p^2 < 2^62; accumulate with a reduction per term
        let mut wide = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                wide[i + j] = add_mod(wide[i + j], mul_mod(a, b, p), p);
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = wide[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let t = mul_mod(c, f.modulus[j], p);
                wide[i - k + j] = sub_mod(wide[i - k + j], t, p);
            }
        }
        wide.truncate(k);
        FieldElement {
            field: f.clone(),
            coeffs: wide,
        }
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.field.p;
        let c = c % p;
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        let p = self.field.p;
        if self.field.degree == 1 {
            return Ok(Self::from_u64(&self.field, inv_mod(self.coeffs[0], p)));
        }
        let mut a = self.coeffs.clone();
        poly::trim(&mut a);
        let (g, s) = poly::ext_gcd(&a, &self.field.modulus, p);
        if g != [1] {
            return Err(Error::internal("defining polynomial is not irreducible"));
        }
        Ok(Self::from_coeffs(&self.field, &s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = Self::one(&self.field);
        for i in (0..exp.bits()).rev() {
            acc = acc.square();
            if exp.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// `a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow_u64(self.field.p)
    }

    /// Quadratic character: 0 for zero, 1 for nonzero squares, −1 otherwise.
    pub fn legendre(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let f = &self.field;
        let p = f.p;
        let base = if f.degree == 1 {
            self.coeffs[0]
        } else if let Some(eps) = f.sqrt_base() {
            // the character of F_{p^2} is the Legendre symbol of the norm
            let a0 = mul_mod(self.coeffs[0], self.coeffs[0], p);
            let a1 = mul_mod(mul_mod(self.coeffs[1], self.coeffs[1], p), eps, p);
            sub_mod(a0, a1, p)
        } else {
            let e = (f.order() - BigUint::one()) >> 1;
            let r = self.pow(&e);
            return if r.is_one() { 1 } else { -1 };
        };
        if pow_mod(base, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self) -> bool {
        self.legendre() >= 0
    }

    pub fn sqrt(&self) -> Option<Self> {
        root_of(self, 2)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same_as(&other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: coefficient vectors compared as base-`p` integers,
/// highest coefficient most significant.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F{}^{}{:?}",
            self.field.p, self.field.degree, self.coeffs
        )
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_prime_field() {
            return write!(f, "{c}");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.assert_same(rhs);
                self.$inner(rhs)
            }
        }
        impl std::ops::$trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p;
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| sub_mod(0, a, p)).collect(),
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A fixed field homomorphism `F_{p^a} → F_{p^b}` for `a | b`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    /// Image of the source generator; `None` when the source is the prime field.
    generator_image: Option<FieldElement>,
}

impl Embedding {
    /// Maps the source generator to the canonically first root of the
    /// source's defining polynomial inside the target, so repeated
    /// constructions agree.
    pub fn new(source: &Field, target: &Field) -> Result<Self> {
        if source.p != target.p {
            return Err(Error::input("embedding between different characteristics"));
        }
        if !target.degree.is_multiple_of(source.degree) {
            return Err(Error::input(format!(
                "degree {} does not divide {}",
                source.degree, target.degree
            )));
        }
        let generator_image = if source.degree == 1 {
            None
        } else {
            let lifted: Vec<FieldElement> = source
                .modulus
                .iter()
                .map(|&c| FieldElement::from_u64(target, c))
                .collect();
            let roots = poly_roots(&lifted)?;
            Some(
                roots
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::internal("defining polynomial has no root in target"))?,
            )
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            generator_image,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if !a.field.same_as(&self.source) {
            return Err(Error::input(
                "element is not in the embedding's source field",
            ));
        }
        Ok(match &self.generator_image {
            None => FieldElement::from_u64(&self.target, a.coeffs[0]),
            Some(r) => {
                let mut acc = FieldElement::zero(&self.target);
                for &c in a.coeffs.iter().rev() {
                    acc = &(&acc * r) + &FieldElement::from_u64(&self.target, c);
                }
                acc
            }
        })
    }
}

/// One-shot embedding of `a` into `target`.
pub fn embed(a: &FieldElement, target: &Field) -> Result<FieldElement> {
    Embedding::new(&a.field, target)?.apply(a)
}
