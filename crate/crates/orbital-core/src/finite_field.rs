//! Finite fields `𝔽_{p^k}` with table-driven arithmetic, for exhaustive
//! enumeration over small residue fields.

use crate::error::{Error, Result};

/// Largest field order accepted (the multiplication table has `q²` entries).
pub const MAX_ORDER: u32 = 4096;

/// `𝔽_q` with `q = p^k`; elements are `0..q`, read as base-`p` digit vectors of
/// polynomials modulo a fixed irreducible of degree `k`.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Factors `q = p^k` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, k))
}

fn digits(x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .scan(x, |rest, _| {
            let digit = *rest % p;
            *rest /= p;
            Some(digit)
        })
        .collect()
}

fn from_digits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, d| acc * p + d)
}

/// Remainder of `a` modulo the monic `m` over `𝔽_p` (coefficients low to high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let base = r.len() - dm;
            for (i, c) in m.iter().take(dm).enumerate() {
                r[base + i] = (r[base + i] + p - (lead * c) % p) % p;
            }
        }
    }
    r
}

/// Whether the monic `f` of degree `k` has no monic factor of degree `1..=k/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() as u32 - 1;
    (1..=k / 2).all(|deg| {
        (0..p.pow(deg)).all(|low| {
            let mut g = digits(low, p, deg);
            g.push(1);
            poly_rem(f, &g, p).iter().any(|&c| c != 0)
        })
    })
}

impl GaloisField {
    /// Builds `𝔽_q`; `q` must be an odd prime power of at most [`MAX_ORDER`].
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::Unsupported("characteristic 2 is excluded (val(2) must vanish)".into()));
        }
        if q > MAX_ORDER {
            return Err(Error::TooLarge(format!("field of order {q}")));
        }
        let modulus: Vec<u32> = (0..p.pow(k))
            .map(|low| {
                let mut f = digits(low, p, k);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .ok_or_else(|| Error::InvalidInput(format!("no irreducible polynomial of degree {k} over F_{p}")))?;
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = from_digits(&sum, p);
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                mul[(a * q + b) as usize] = from_digits(&poly_rem(&prod, &modulus, p), p);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap_or(0)).collect();
        let inv = (0..q).map(|a| (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap_or(0)).collect();
        Ok(GaloisField { p, k, q, add, mul, neg, inv })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// The image of an integer.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}
