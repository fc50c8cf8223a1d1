//! Integral positive-definite ternary quadratic forms in Seeber notation.
//!
//! `f = a11·x1² + a22·x2² + a33·x3² + a23·x2x3 + a13·x1x3 + a12·x1x2`, cross
//! coefficients not doubled. The discriminant is `4·det(G)` for the
//! half-integral Gram matrix `G`; the forms attached to the quaternion algebra
//! ramified at `p` are exactly those of discriminant `p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_fields::is_prime;

/// Integer vector in `Z³`.
pub type Vec3 = [i64; 3];

/// Field order gives the lexicographic tie-break used to pick class
/// representatives: `(a11, a22, a33, a23, a13, a12)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TernaryForm {
    pub a11: i64,
    pub a22: i64,
    pub a33: i64,
    pub a23: i64,
    pub a13: i64,
    pub a12: i64,
}

/// A class representative together with its automorph count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormClass {
    #[serde(flatten)]
    pub form: TernaryForm,
    pub tau: u32,
}

impl TernaryForm {
    /// Seeber order: diagonal first, then `a23, a13, a12`.
    pub const fn new(a11: i64, a22: i64, a33: i64, a23: i64, a13: i64, a12: i64) -> Self {
        TernaryForm {
            a11,
            a22,
            a33,
            a23,
            a13,
            a12,
        }
    }

    /// Builds the form `x ↦ xᵀ M x` of an integral symmetric matrix.
    pub fn from_gram(m: &[[i64; 3]; 3]) -> Self {
        TernaryForm::new(
            m[0][0],
            m[1][1],
            m[2][2],
            2 * m[1][2],
            2 * m[0][2],
            2 * m[0][1],
        )
    }

    pub fn evaluate(&self, x: &Vec3) -> i64 {
        let [x1, x2, x3] = *x;
        self.a11 * x1 * x1
            + self.a22 * x2 * x2
            + self.a33 * x3 * x3
            + self.a23 * x2 * x3
            + self.a13 * x1 * x3
            + self.a12 * x1 * x2
    }

    /// Polar form `f(u + v) − f(u) − f(v)`; equals `2uᵀGv`.
    pub fn polar(&self, u: &Vec3, v: &Vec3) -> i64 {
        2 * self.a11 * u[0] * v[0]
            + 2 * self.a22 * u[1] * v[1]
            + 2 * self.a33 * u[2] * v[2]
            + self.a23 * (u[1] * v[2] + u[2] * v[1])
            + self.a13 * (u[0] * v[2] + u[2] * v[0])
            + self.a12 * (u[0] * v[1] + u[1] * v[0])
    }

    /// `4·det(G)`, always an integer.
    pub fn discriminant(&self) -> i64 {
        4 * self.a11 * self.a22 * self.a33
            - self.a11 * self.a23 * self.a23
            - self.a22 * self.a13 * self.a13
            - self.a33 * self.a12 * self.a12
            + self.a12 * self.a13 * self.a23
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a11 > 0 && 4 * self.a11 * self.a22 - self.a12 * self.a12 > 0 && self.discriminant() > 0
    }

    fn require_definite(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::input(format!("{self} is not positive definite")))
        }
    }

    /// All `x ≠ 0` with `f(x) ≤ bound`, each once, paired with `f(x)`.
    ///
    /// The box comes from completing the square one variable at a time; floating
    /// point only sizes the box (with a one-step margin) and every candidate is
    /// checked exactly.
    pub fn short_vectors(&self, bound: i64) -> Result<Vec<(Vec3, i64)>> {
        self.require_definite()?;
        let mut out = Vec::new();
        if bound <= 0 {
            return Ok(out);
        }
        let g11 = self.a11 as f64;
        let g22 = self.a22 as f64;
        let g33 = self.a33 as f64;
        let g12 = self.a12 as f64 / 2.0;
        let g13 = self.a13 as f64 / 2.0;
        let g23 = self.a23 as f64 / 2.0;
        let q11 = g11;
        let q12 = g12 / g11;
        let q13 = g13 / g11;
        let q22 = g22 - g12 * g12 / g11;
        let q23 = (g23 - g12 * g13 / g11) / q22;
        let q33 = g33 - g13 * g13 / g11 - q22 * q23 * q23;
        let b = bound as f64;

        let range = |center: f64, rest: f64, q: f64| -> (i64, i64) {
            let r = (rest.max(0.0) / q).sqrt();
            (
                (center - r).floor() as i64 - 1,
                (center + r).ceil() as i64 + 1,
            )
        };

        let (lo3, hi3) = range(0.0, b, q33);
        for x3 in lo3..=hi3 {
            let t3 = x3 as f64;
            let rest3 = b - q33 * t3 * t3;
            if rest3 < -1.0 {
                continue;
            }
            let (lo2, hi2) = range(-q23 * t3, rest3, q22);
            for x2 in lo2..=hi2 {
                let t2 = x2 as f64;
                let u = t2 + q23 * t3;
                let rest2 = rest3 - q22 * u * u;
                if rest2 < -1.0 {
                    continue;
                }
                let (lo1, hi1) = range(-(q12 * t2 + q13 * t3), rest2, q11);
                for x1 in lo1..=hi1 {
                    let x = [x1, x2, x3];
                    if x == [0, 0, 0] {
                        continue;
                    }
                    let v = self.evaluate(&x);
                    if v <= bound {
                        out.push((x, v));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `r(f, n) = #{x ∈ Z³ : f(x) = n}`.
    pub fn representation_number(&self, n: i64) -> Result<usize> {
        if n == 0 {
            self.require_definite()?;
            return Ok(1);
        }
        Ok(self
            .short_vectors(n)?
            .into_iter()
            .filter(|&(_, v)| v == n)
            .count())
    }

    /// `r(f, 0), r(f, 1), …, r(f, up_to)`.
    pub fn theta_series(&self, up_to: i64) -> Result<Vec<usize>> {
        let mut theta = vec![0usize; up_to.max(0) as usize + 1];
        theta[0] = 1;
        for (_, v) in self.short_vectors(up_to)? {
            theta[v as usize] += 1;
        }
        Ok(theta)
    }

    /// Eisenstein-style reduction conditions; non-definite forms are not reduced.
    pub fn is_reduced(&self) -> bool {
        if !self.is_positive_definite() {
            return false;
        }
        let TernaryForm {
            a11,
            a22,
            a33,
            a23,
            a13,
            a12,
        } = *self;
        if a12 < 0 || a13 < 0 || ((a12 == 0 || a13 == 0) && a23 < 0) {
            return false;
        }
        if a11 == a22 && a23.abs() > a13 {
            return false;
        }
        if a22 == a33 && a13 > a12 {
            return false;
        }
        let diag = [a11, a22, a33];
        let shorts = match self.short_vectors(a33 - 1) {
            Ok(v) => v,
            Err(_) => return false,
        };
        for (x, v) in shorts {
            for i in 0..3 {
                if v < diag[i] && gcd_slice(&x[i..]) == 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Successive minima `N1 ≤ N2 ≤ N3`.
    pub fn successive_minima(&self) -> Result<[i64; 3]> {
        let top = self.a11.max(self.a22).max(self.a33);
        let mut vecs = self.short_vectors(top)?;
        vecs.sort_by_key(|&(x, v)| (v, x));
        let mut chosen: Vec<Vec3> = Vec::new();
        let mut minima = [0i64; 3];
        for (x, v) in vecs {
            let independent = match chosen.len() {
                0 => true,
                1 => cross(&chosen[0], &x) != [0, 0, 0],
                _ => det3(&chosen[0], &chosen[1], &x) != 0,
            };
            if independent {
                minima[chosen.len()] = v;
                chosen.push(x);
                if chosen.len() == 3 {
                    return Ok(minima);
                }
            }
        }
        Err(Error::internal("unit vectors failed to span Z³"))
    }

    /// Bound past which equal representation numbers force equivalence.
    pub fn schiemann_bound(&self) -> Result<i64> {
        Ok(schiemann_bound_from_minima(self.successive_minima()?))
    }

    /// All `T` (columns `t1, t2, t3`) with `f(T·x) = g(x)` and `|det T| = 1`,
    /// stopping after `limit` hits.
    fn isometries_to(&self, g: &TernaryForm, limit: usize) -> Result<Vec<[Vec3; 3]>> {
        self.require_definite()?;
        g.require_definite()?;
        let top = g.a11.max(g.a22).max(g.a33);
        let shorts = self.short_vectors(top)?;
        let with_value = |n: i64| -> Vec<Vec3> {
            shorts
                .iter()
                .filter(|&&(_, v)| v == n)
                .map(|&(x, _)| x)
                .collect()
        };
        let l1 = with_value(g.a11);
        let l2 = with_value(g.a22);
        let l3 = with_value(g.a33);
        let mut found = Vec::new();
        for t1 in &l1 {
            for t2 in &l2 {
                if self.polar(t1, t2) != g.a12 {
                    continue;
                }
                for t3 in &l3 {
                    if self.polar(t1, t3) != g.a13 || self.polar(t2, t3) != g.a23 {
                        continue;
                    }
                    if det3(t1, t2, t3).abs() != 1 {
                        continue;
                    }
                    found.push([*t1, *t2, *t3]);
                    if found.len() >= limit {
                        return Ok(found);
                    }
                }
            }
        }
        Ok(found)
    }

    /// Integral equivalence under `GL₃(Z)`; forms of different discriminant
    /// are simply inequivalent.
    pub fn equivalent(&self, other: &TernaryForm) -> Result<bool> {
        if self.discriminant() != other.discriminant() {
            return Ok(false);
        }
        Ok(!self.isometries_to(other, 1)?.is_empty())
    }

    /// An explicit `T` with `f(T·x) = g(x)` if one exists.
    pub fn equivalence_transform(&self, other: &TernaryForm) -> Result<Option<[Vec3; 3]>> {
        if self.discriminant() != other.discriminant() {
            return Ok(None);
        }
        Ok(self.isometries_to(other, 1)?.into_iter().next())
    }

    /// `τ`: automorphs in `GL₃(Z)` modulo `±I`.
    pub fn automorph_count(&self) -> Result<u32> {
        let n = self.isometries_to(self, usize::MAX)?.len();
        debug_assert!(n % 2 == 0);
        Ok((n / 2) as u32)
    }

    /// The three rows of the Seeber layout; the third row carries `τ` if given.
    pub fn seeber_rows(&self, tau: Option<u32>) -> [String; 3] {
        let w = [self.a11, self.a22, self.a33, self.a23, self.a13, self.a12]
            .iter()
            .map(|v| v.to_string().chars().count())
            .chain(tau.map(|t| t.to_string().len()))
            .max()
            .unwrap_or(1);
        let row = |a: i64, b: i64, c: i64| format!("{a:>w$} {b:>w$} {c:>w$}");
        [
            row(self.a11, self.a22, self.a33),
            row(self.a23, self.a13, self.a12),
            match tau {
                Some(t) => format!("{:>w$} {:>w$} {t:>w$}", "", ""),
                None => " ".repeat(3 * w + 2),
            },
        ]
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{};{},{},{})",
            self.a11, self.a22, self.a33, self.a23, self.a13, self.a12
        )
    }
}

/// `⌊min{−N1/14 + 18N2/7 + N3, 3N1/2 − 5N2/6 + 17N3/6, 13N1/5 + N2 + N3, 7N3/2}⌋`.
pub fn schiemann_bound_from_minima(n: [i64; 3]) -> i64 {
    let [n1, n2, n3] = n;
    // everything scaled by lcm(14, 7, 2, 6, 5) = 210
    let candidates = [
        -15 * n1 + 540 * n2 + 210 * n3,
        315 * n1 - 175 * n2 + 595 * n3,
        546 * n1 + 210 * n2 + 210 * n3,
        735 * n3,
    ];
    candidates.iter().min().unwrap().div_euclid(210)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_slice(x: &[i64]) -> i64 {
    x.iter().fold(0, |g, &v| gcd(g, v))
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> i64 {
    let x = cross(b, c);
    a[0] * x[0] + a[1] * x[1] + a[2] * x[2]
}

/// One reduced representative per `GL₃(Z)` class of discriminant `p`,
/// sorted, each the lexicographically smallest reduced form in its class.
pub fn enumerate_reduced(p: u64) -> Result<Vec<TernaryForm>> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let d = p as i64;
    let mut candidates = Vec::new();
    let mut a11 = 1;
    while a11 * a11 * a11 <= 2 * d {
        let mut a22 = a11;
        while a11 * a22 * a22 <= 2 * d {
            let mut a33 = a22;
            while a11 * a22 * a33 <= 2 * d {
                for a23 in -a22..=a22 {
                    for a13 in -a11..=a11 {
                        for a12 in -a11..=a11 {
                            let f = TernaryForm::new(a11, a22, a33, a23, a13, a12);
                            if f.discriminant() == d && f.is_reduced() {
                                candidates.push(f);
                            }
                        }
                    }
                }
                a33 += 1;
            }
            a22 += 1;
        }
        a11 += 1;
    }
    candidates.sort();
    let mut classes: Vec<TernaryForm> = Vec::new();
    for f in candidates {
        let mut seen = false;
        for g in &classes {
            if g.equivalent(&f)? {
                seen = true;
                break;
            }
        }
        if !seen {
            classes.push(f);
        }
    }
    Ok(classes)
}

/// [`enumerate_reduced`] with automorph counts attached.
pub fn enumerate_classes(p: u64) -> Result<Vec<FormClass>> {
    enumerate_reduced(p)?
        .into_iter()
        .map(|form| {
            Ok(FormClass {
                form,
                tau: form.automorph_count()?,
            })
        })
        .collect()
}
