//! Shared test data and oracles that do not go through the library's
//! arithmetic.
#![allow(dead_code)]

/// The published correspondence table as printed: j-invariant rendering, Seeber
/// form `(a11, a22, a33, a23, a13, a12)`, and τ. The 1728 column is given by
/// its residue mod p.
pub type Row = (&'static str, [i64; 6], u32);

pub const PUBLISHED_TABLE: &[(u64, &[Row])] = &[
    (
        29,
        &[
            ("2", [1, 3, 3, 2, 0, 1], 2),
            ("25", [1, 2, 4, 1, 1, 0], 2),
            ("0", [1, 1, 10, 0, 1, 1], 6),
        ],
    ),
    (
        31,
        &[
            ("2", [1, 2, 4, 1, 0, 0], 2),
            ("4", [1, 2, 5, 2, 0, 1], 2),
            ("23", [1, 1, 8, 0, 1, 0], 4),
        ],
    ),
    (
        37,
        &[
            ("8", [1, 2, 5, 2, 2, 3], 2),
            ("3±10√2", [2, 2, 3, 0, 2, 1], 1),
        ],
    ),
    (
        41,
        &[
            ("3", [1, 3, 4, 2, 1, 0], 2),
            ("28", [1, 2, 6, 1, 0, 1], 2),
            ("32", [1, 3, 4, 0, 1, 1], 2),
            ("0", [1, 1, 14, 0, 1, 1], 6),
        ],
    ),
    (
        43,
        &[
            ("41", [1, 3, 4, 1, 0, 1], 2),
            ("12±8√2", [2, 2, 3, 0, 1, 1], 1),
            ("8", [1, 1, 11, 0, 1, 0], 4),
        ],
    ),
    (
        47,
        &[
            ("9", [1, 2, 7, 0, 1, 1], 2),
            ("10", [1, 2, 6, 1, 0, 0], 2),
            ("44", [1, 3, 4, 1, 0, 0], 2),
            ("36", [1, 1, 12, 0, 1, 0], 4),
            ("0", [1, 1, 16, 0, 1, 1], 6),
        ],
    ),
    (
        53,
        &[
            ("46", [1, 3, 5, 2, 1, 0], 2),
            ("50", [1, 2, 7, 1, 1, 0], 2),
            ("28±9√2", [2, 3, 3, -1, 1, 2], 1),
            ("0", [1, 1, 18, 0, 1, 1], 6),
        ],
    ),
    (
        59,
        &[
            ("15", [1, 3, 5, 1, 0, 0], 2),
            ("28", [1, 4, 5, 4, 0, 1], 2),
            ("47", [1, 2, 9, 2, 0, 1], 2),
            ("48", [1, 4, 4, 1, 0, 1], 2),
            ("17", [1, 1, 15, 0, 1, 0], 4),
            ("0", [1, 1, 20, 0, 1, 1], 6),
        ],
    ),
    (
        61,
        &[
            ("9", [1, 2, 8, 1, 1, 0], 2),
            ("41", [1, 2, 9, 0, 1, 1], 2),
            ("50", [1, 3, 6, -1, 1, 1], 2),
            ("42±4√2", [2, 3, 3, 2, 0, 1], 1),
        ],
    ),
    (
        67,
        &[
            ("66", [1, 4, 5, 3, 1, 0], 2),
            ("45±30√2", [2, 3, 3, 1, 0, 1], 1),
            ("63±32√2", [2, 2, 5, 0, 2, 1], 1),
            ("53", [1, 1, 17, 0, 1, 0], 4),
        ],
    ),
    (
        71,
        &[
            ("17", [1, 4, 5, 3, 0, 0], 2),
            ("40", [1, 3, 6, 1, 0, 0], 2),
            ("41", [1, 4, 5, 2, 0, 1], 2),
            ("48", [1, 2, 9, 1, 0, 0], 2),
            ("24", [1, 1, 18, 0, 1, 0], 4),
            ("0", [1, 1, 24, 0, 1, 1], 6),
            ("66", [1, 4, 5, 0, 1, 1], 2),
        ],
    ),
    (
        73,
        &[
            ("9", [1, 3, 7, 2, 0, 1], 2),
            ("56", [1, 2, 11, 2, 0, 1], 2),
            ("39±5√5", [2, 3, 4, -1, 1, 2], 1),
            ("8±37√5", [2, 2, 5, 0, 1, 1], 1),
        ],
    ),
    (
        79,
        &[
            ("15", [1, 4, 5, 1, 0, 0], 2),
            ("17", [1, 3, 8, 3, 0, 1], 2),
            ("21", [1, 2, 10, 0, 1, 0], 2),
            ("64", [1, 5, 5, 4, 0, 1], 2),
            ("69", [1, 1, 20, 0, 1, 0], 4),
            ("72±38√3", [2, 3, 4, -2, 1, 1], 1),
        ],
    ),
    (
        83,
        &[
            ("17", [1, 3, 8, -1, 1, 1], 2),
            ("28", [1, 2, 12, 1, 0, 1], 2),
            ("50", [1, 3, 7, 1, 0, 0], 2),
            ("67", [1, 4, 6, 3, 1, 0], 2),
            ("68", [1, 1, 21, 0, 1, 0], 4),
            ("0", [1, 1, 28, 0, 1, 1], 6),
            ("38±35√2", [2, 3, 4, 2, 1, 1], 1),
        ],
    ),
    (
        89,
        &[
            ("6", [1, 4, 6, 1, 0, 1], 2),
            ("7", [1, 2, 13, 0, 1, 1], 2),
            ("13", [1, 5, 6, 5, 0, 1], 2),
            ("52", [1, 4, 7, 4, 0, 1], 2),
            ("0", [1, 1, 30, 0, 1, 1], 6),
            ("66", [1, 3, 8, 2, 1, 0], 2),
            ("76±39√3", [2, 3, 4, 0, 1, 1], 1),
        ],
    ),
    (
        97,
        &[
            ("1", [1, 5, 6, -3, 1, 1], 2),
            ("20", [1, 2, 14, 1, 0, 1], 2),
            ("45±28√5", [2, 3, 5, 0, 1, 2], 1),
            ("76±3√5", [2, 3, 5, 3, 0, 1], 1),
            ("81±22√5", [2, 2, 7, 0, 2, 1], 1),
        ],
    ),
];

/// A j rendering reduced to `(a, min(b, p − b), ε)`; integers have `b = 0`.
pub fn normalize_j(s: &str, p: u64) -> (u64, u64, u64) {
    match s.split_once('±') {
        None => (s.parse::<u64>().expect("integer j") % p, 0, 0),
        Some((a, rest)) => {
            let (b, eps) = rest.split_once('√').expect("a±b√ε");
            let b: u64 = b.parse().expect("b");
            (
                a.parse::<u64>().expect("a") % p,
                b.min(p - b % p),
                eps.parse().expect("ε"),
            )
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `F_p(√ε)` with elements `a + b√ε`, written independently of the library.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    pub p: u64,
    pub eps: u64,
}

pub type E2 = (u64, u64);

impl Fp2 {
    pub fn new(p: u64) -> Self {
        let eps = (2..p)
            .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
            .expect("non-residue");
        Fp2 { p, eps }
    }
    pub fn c(&self, v: i64) -> E2 {
        (v.rem_euclid(self.p as i64) as u64, 0)
    }
    pub fn add(&self, x: E2, y: E2) -> E2 {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }
    pub fn sub(&self, x: E2, y: E2) -> E2 {
        ((x.0 + self.p - y.0) % self.p, (x.1 + self.p - y.1) % self.p)
    }
    pub fn mul(&self, x: E2, y: E2) -> E2 {
        let p = self.p;
        (
            (x.0 * y.0 + x.1 * y.1 % p * self.eps) % p,
            (x.0 * y.1 + x.1 * y.0) % p,
        )
    }
    pub fn norm(&self, x: E2) -> u64 {
        let p = self.p;
        (x.0 * x.0 % p + p - x.1 * x.1 % p * self.eps % p) % p
    }
    pub fn inv(&self, x: E2) -> E2 {
        let p = self.p;
        let n = pow_mod(self.norm(x), p - 2, p);
        (x.0 * n % p, (p - x.1) % p * n % p)
    }
    /// Quadratic character on `F_{p²}`, via the norm.
    pub fn chi(&self, x: E2) -> i64 {
        if x == (0, 0) {
            return 0;
        }
        if pow_mod(self.norm(x), (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }
    pub fn elements(&self) -> impl Iterator<Item = E2> + '_ {
        (0..self.p).flat_map(move |b| (0..self.p).map(move |a| (a, b)))
    }

    /// `(A, B)` of a curve with invariant `j`.
    pub fn model(&self, j: E2) -> (E2, E2) {
        let k = self.c(1728);
        if j == (0, 0) {
            return (self.c(0), self.c(1));
        }
        if j == k {
            return (self.c(1), self.c(0));
        }
        let d = self.sub(k, j);
        let jd = self.mul(j, d);
        (
            self.mul(self.c(3), jd),
            self.mul(self.c(2), self.mul(jd, d)),
        )
    }

    /// `#E(F_{p²})` for `y² = x³ + Ax + B`.
    pub fn count(&self, a: E2, b: E2) -> u64 {
        let mut n: i64 = 1;
        for x in self.elements() {
            let r = self.add(self.add(self.mul(self.mul(x, x), x), self.mul(a, x)), b);
            n += 1 + self.chi(r);
        }
        n as u64
    }

    /// Whether `[k]P = O` for any point `P` (on `E` or its quadratic twist)
    /// with abscissa `x ≠ 0`, by an x-only Montgomery ladder.
    pub fn ladder_kills(&self, a: E2, b: E2, x: E2, k: u64) -> bool {
        let one = self.c(1);
        let zero = self.c(0);
        let dbl = |(px, pz): (E2, E2)| -> (E2, E2) {
            let x2 = self.mul(px, px);
            let z2 = self.mul(pz, pz);
            let z3 = self.mul(z2, pz);
            let t = self.sub(x2, self.mul(a, z2));
            let nx = self.sub(
                self.mul(t, t),
                self.mul(self.c(8), self.mul(b, self.mul(px, z3))),
            );
            let inner = self.add(
                self.add(self.mul(x2, px), self.mul(a, self.mul(px, z2))),
                self.mul(b, z3),
            );
            (nx, self.mul(self.c(4), self.mul(pz, inner)))
        };
        // P + Q from P, Q and x(P − Q) = x
        let dadd = |(xp, zp): (E2, E2), (xq, zq): (E2, E2)| -> (E2, E2) {
            if zp == zero {
                return (xq, zq);
            }
            if zq == zero {
                return (xp, zp);
            }
            let t = self.sub(self.mul(xp, xq), self.mul(a, self.mul(zp, zq)));
            let s = self.add(self.mul(xp, zq), self.mul(xq, zp));
            let nx = self.sub(
                self.mul(t, t),
                self.mul(self.c(4), self.mul(b, self.mul(self.mul(zp, zq), s))),
            );
            let d = self.sub(self.mul(xp, zq), self.mul(xq, zp));
            (nx, self.mul(x, self.mul(d, d)))
        };
        let mut r0 = (x, one);
        let mut r1 = dbl(r0);
        let bits = 64 - k.leading_zeros();
        for i in (0..bits - 1).rev() {
            if (k >> i) & 1 == 1 {
                r0 = dadd(r0, r1);
                r1 = dbl(r1);
            } else {
                r1 = dadd(r0, r1);
                r0 = dbl(r0);
            }
        }
        r0.1 == zero
    }

    /// Supersingular j's by point counting: `j` is supersingular iff the
    /// standard model has `(p ± 1)²` points over `F_{p²}`. Three ladder
    /// checks screen out most ordinary j's before the exhaustive count.
    pub fn supersingular_by_counting(&self) -> Vec<E2> {
        let p = self.p;
        let targets = [(p + 1) * (p + 1), (p - 1) * (p - 1)];
        let mut out = Vec::new();
        for j in self.elements() {
            let (a, b) = self.model(j);
            let xs = [(1, 0), (2, 1), (3, 2)];
            let plausible = xs.iter().all(|&x| {
                let x = (x.0 % p, x.1 % p);
                self.ladder_kills(a, b, x, p + 1) || self.ladder_kills(a, b, x, p - 1)
            });
            if plausible && targets.contains(&self.count(a, b)) {
                out.push(j);
            }
        }
        out
    }
}
