//! Maximal orders as even Clifford algebras of ternary forms.
//!
//! For a form `f` the order has basis `{1, e1, e2, e3}` with, for every even
//! permutation `(i, j, k)` of `(1, 2, 3)`:
//!
//! ```text
//! e_i²    = a_jk·e_i − a_jj·a_kk
//! e_i·e_j = a_kk·(a_ij − e_k)
//! e_j·e_i = a_1k·e1 + a_2k·e2 + a_3k·e3 − a_ik·a_jk
//! ```
//!
//! Norms are never read off a stored Gram matrix; they come from `α·ᾱ` with
//! `ᾱ = tr(α) − α`, so the structure constants are the single source of truth.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ternary_forms::{TernaryForm, Vec3};

/// Coordinates `(x0, x1, x2, x3)` over `{1, e1, e2, e3}` of some order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuaternionElement(pub [i64; 4]);

impl QuaternionElement {
    pub fn scalar(m: i64) -> Self {
        QuaternionElement([m, 0, 0, 0])
    }

    /// `e_i` for `i ∈ {1, 2, 3}`; `i = 0` is the unit.
    pub fn basis(i: usize) -> Self {
        let mut c = [0; 4];
        c[i] = 1;
        QuaternionElement(c)
    }

    pub fn coords(&self) -> [i64; 4] {
        self.0
    }

    fn add(&self, o: &Self) -> Self {
        QuaternionElement([0, 1, 2, 3].map(|i| self.0[i] + o.0[i]))
    }

    fn sub(&self, o: &Self) -> Self {
        QuaternionElement([0, 1, 2, 3].map(|i| self.0[i] - o.0[i]))
    }
}

impl std::ops::Add for QuaternionElement {
    type Output = QuaternionElement;
    fn add(self, o: Self) -> Self {
        QuaternionElement::add(&self, &o)
    }
}

impl std::ops::Sub for QuaternionElement {
    type Output = QuaternionElement;
    fn sub(self, o: Self) -> Self {
        QuaternionElement::sub(&self, &o)
    }
}

/// Set of `(trace, norm)` pairs. Multiplicities are deliberately dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fingerprint(pub BTreeSet<(i64, i64)>);

impl Fingerprint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, trace: i64, norm: i64) {
        self.0.insert((trace, norm));
    }

    pub fn extend(&mut self, other: &Fingerprint) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn contains(&self, trace: i64, norm: i64) -> bool {
        self.0.contains(&(trace, norm))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Fingerprint) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.0.iter()
    }

    /// Pairs whose second coordinate is `n`.
    pub fn restricted_to(&self, n: i64) -> Fingerprint {
        Fingerprint(self.0.iter().filter(|&&(_, m)| m == n).copied().collect())
    }
}

impl FromIterator<(i64, i64)> for Fingerprint {
    fn from_iter<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        Fingerprint(iter.into_iter().collect())
    }
}

/// `{1, e1, e2, e3}` with the multiplication table of `C₀(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderPresentation {
    form: TernaryForm,
    /// `products[i][j]` = `e_{i+1}·e_{j+1}` as coordinates over the basis.
    products: [[[i64; 4]; 3]; 3],
}

const EVEN_PERMUTATIONS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Symmetric coefficient lookup `a_ij`, 0-based.
fn coeff(f: &TernaryForm, i: usize, j: usize) -> i64 {
    match (i.min(j), i.max(j)) {
        (0, 0) => f.a11,
        (1, 1) => f.a22,
        (2, 2) => f.a33,
        (1, 2) => f.a23,
        (0, 2) => f.a13,
        (0, 1) => f.a12,
        _ => unreachable!(),
    }
}

/// Builds the even Clifford order of `f`.
pub fn clifford(f: &TernaryForm) -> OrderPresentation {
    let mut products = [[[0i64; 4]; 3]; 3];
    for (i, j, k) in EVEN_PERMUTATIONS {
        let a = |r, s| coeff(f, r, s);

        let mut sq = [0i64; 4];
        sq[0] = -a(j, j) * a(k, k);
        sq[i + 1] = a(j, k);
        products[i][i] = sq;

        let mut ij = [0i64; 4];
        ij[0] = a(k, k) * a(i, j);
        ij[k + 1] = -a(k, k);
        products[i][j] = ij;

        let mut ji = [0i64; 4];
        ji[0] = -a(i, k) * a(j, k);
        for m in 0..3 {
            ji[m + 1] = a(m, k);
        }
        products[j][i] = ji;
    }
    OrderPresentation { form: *f, products }
}

impl OrderPresentation {
    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    /// `e_{i}·e_{j}` for `i, j ∈ {1, 2, 3}`.
    pub fn product(&self, i: usize, j: usize) -> QuaternionElement {
        QuaternionElement(self.products[i - 1][j - 1])
    }

    pub fn structure_constants(&self) -> &[[[i64; 4]; 3]; 3] {
        &self.products
    }

    pub fn multiply(&self, a: &QuaternionElement, b: &QuaternionElement) -> QuaternionElement {
        let (x, y) = (a.0, b.0);
        let mut out = [0i64; 4];
        for r in 0..4 {
            out[r] += x[0] * y[r] + x[r] * y[0];
        }
        out[0] -= x[0] * y[0];
        for i in 0..3 {
            if x[i + 1] == 0 {
                continue;
            }
            for j in 0..3 {
                let c = x[i + 1] * y[j + 1];
                if c == 0 {
                    continue;
                }
                let prod = &self.products[i][j];
                for r in 0..4 {
                    out[r] += c * prod[r];
                }
            }
        }
        QuaternionElement(out)
    }

    pub fn trace(&self, a: &QuaternionElement) -> i64 {
        let f = &self.form;
        2 * a.0[0] + f.a23 * a.0[1] + f.a13 * a.0[2] + f.a12 * a.0[3]
    }

    pub fn conjugate(&self, a: &QuaternionElement) -> QuaternionElement {
        QuaternionElement::scalar(self.trace(a)).sub(a)
    }

    /// `α·ᾱ`, which must be a scalar.
    pub fn norm(&self, a: &QuaternionElement) -> Result<i64> {
        let n = self.multiply(a, &self.conjugate(a));
        if n.0[1..] != [0, 0, 0] {
            return Err(Error::internal(format!(
                "α·conj(α) = {:?} is not scalar; structure constants are inconsistent",
                n.0
            )));
        }
        Ok(n.0[0])
    }

    /// Instantiated relations, one line per product, e.g. `e1² = −10`.
    pub fn relations(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(9);
        for (i, j, _) in EVEN_PERMUTATIONS {
            out.push(format!(
                "e{}² = {}",
                i + 1,
                render_element(&self.products[i][i])
            ));
            out.push(format!(
                "e{}e{} = {}",
                i + 1,
                j + 1,
                render_element(&self.products[i][j])
            ));
            out.push(format!(
                "e{}e{} = {}",
                j + 1,
                i + 1,
                render_element(&self.products[j][i])
            ));
        }
        out
    }

    /// `{(tr α, n) : α ∈ O, nr α = n}` without searching 4-space.
    pub fn trace_norm_pairs(&self, n: i64) -> Fingerprint {
        if n < 1 {
            return Fingerprint::new();
        }
        self.pairs_with_norm(n, |m| m == n)
    }

    /// `Γ_b`: every `(tr α, nr α)` with `1 ≤ nr α ≤ b`.
    pub fn gamma_set(&self, b: i64) -> Fingerprint {
        if b < 1 {
            return Fingerprint::new();
        }
        self.pairs_with_norm(b, |_| true)
    }

    /// Pairs for the norms in `lambda`.
    pub fn spl(&self, lambda: &[u64]) -> Fingerprint {
        let mut out = Fingerprint::new();
        for &l in lambda {
            out.extend(&self.trace_norm_pairs(l as i64));
        }
        out
    }

    /// Uses `4·nr(α) − tr(α)² = q̃(x1, x2, x3)`: enumerate `q̃ ≤ 4·max_norm`,
    /// then every admissible trace `t` with `t² + q̃ ≡ 0 (mod 4)` and an
    /// integral `x0`.
    fn pairs_with_norm(&self, max_norm: i64, accept: impl Fn(i64) -> bool) -> Fingerprint {
        let f = &self.form;
        let q = TernaryForm::from_gram(&qtilde(f));
        let mut vecs: Vec<(Vec3, i64)> = q
            .short_vectors(4 * max_norm)
            .expect("q̃ is positive definite for a definite form");
        vecs.push(([0, 0, 0], 0));
        let mut out = Fingerprint::new();
        for (x, qv) in vecs {
            let lin = f.a23 * x[0] + f.a13 * x[1] + f.a12 * x[2];
            let room = 4 * max_norm - qv;
            let tmax = isqrt(room);
            for t in -tmax..=tmax {
                let four_n = t * t + qv;
                if four_n % 4 != 0 || (t - lin) % 2 != 0 {
                    continue;
                }
                let n = four_n / 4;
                if n >= 1 && n <= max_norm && accept(n) {
                    out.insert(t, n);
                }
            }
        }
        out
    }
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn render_element(c: &[i64; 4]) -> String {
    let mut s = String::new();
    for (idx, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let name = if idx == 0 {
            String::new()
        } else {
            format!("e{idx}")
        };
        let mag = v.unsigned_abs();
        let body = if idx > 0 && mag == 1 {
            name
        } else {
            format!("{mag}{name}")
        };
        if s.is_empty() {
            if v < 0 {
                s.push('−');
            }
        } else {
            s.push_str(if v < 0 { " − " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Gram matrix of `4·nr − tr²` restricted to `(x1, x2, x3)`; positive definite.
///
/// Diagonal `4a22a33 − a23², 4a11a33 − a13², 4a11a22 − a12²`, off-diagonal
/// `a13a23 − 2a12a33, a12a23 − 2a13a22, a12a13 − 2a11a23`.
pub fn qtilde(f: &TernaryForm) -> [[i64; 3]; 3] {
    let TernaryForm {
        a11,
        a22,
        a33,
        a23,
        a13,
        a12,
    } = *f;
    let m12 = a13 * a23 - 2 * a12 * a33;
    let m13 = a12 * a23 - 2 * a13 * a22;
    let m23 = a12 * a13 - 2 * a11 * a23;
    [
        [4 * a22 * a33 - a23 * a23, m12, m13],
        [m12, 4 * a11 * a33 - a13 * a13, m23],
        [m13, m23, 4 * a11 * a22 - a12 * a12],
    ]
}

pub fn det3x3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Odd primes `3, 5, 7, 11, …`, skipping `p`.
pub fn candidate_primes(p: u64) -> impl Iterator<Item = u64> {
    (3u64..)
        .step_by(2)
        .filter(|&n| crate::finite_fields::is_prime(n))
        .filter(move |&n| n != p)
}

/// Whether `(τ_i, SPL_i)` are pairwise distinct.
pub fn separates(orders: &[OrderPresentation], taus: &[u32], lambda: &[u64]) -> bool {
    let keys: Vec<(u32, Fingerprint)> = orders
        .iter()
        .zip(taus)
        .map(|(o, &t)| (t, o.spl(lambda)))
        .collect();
    let unique: BTreeSet<&(u32, Fingerprint)> = keys.iter().collect();
    unique.len() == keys.len()
}

/// Shortest prefix of [`candidate_primes`] that separates the orders,
/// counting `τ` as part of each order's signature.
///
/// Going past the largest Schiemann bound without separating is an error:
/// trace/norm pairs up to that bound always distinguish order types.
pub fn select_lambda(orders: &[OrderPresentation], taus: &[u32]) -> Result<Vec<u64>> {
    if orders.is_empty() {
        return Err(Error::input("no orders to separate"));
    }
    if orders.len() != taus.len() {
        return Err(Error::input("orders and τ values are not aligned"));
    }
    let p = orders[0].form().discriminant() as u64;
    let mut cap = 0;
    for o in orders {
        cap = cap.max(o.form().schiemann_bound()?);
    }
    let mut lambda = Vec::new();
    if orders.len() == 1 {
        return Ok(lambda);
    }
    for l in candidate_primes(p) {
        if separates(orders, taus, &lambda) {
            return Ok(lambda);
        }
        if l as i64 > cap {
            break;
        }
        lambda.push(l);
    }
    if separates(orders, taus, &lambda) {
        return Ok(lambda);
    }
    Err(Error::internal(format!(
        "primes up to the Schiemann bound {cap} do not separate the orders of discriminant {p}"
    )))
}
