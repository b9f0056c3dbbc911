//! Cyclotomic fields `ℚ(ζ_N)` realized as `ℚ[x]/Φ_N(x)`.
//!
//! Elements carry their conductor `N`; arithmetic between elements of
//! different conductors takes place in `ℚ(ζ_L)` with `L = lcm`, using the
//! embedding `ζ_N = ζ_L^{L/N}`. This makes `zero()` and `one()` context free.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::Zero;

use crate::field::{self, int, Rational};

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_monic_div(&num, &div);
        }
    }
    let poly = Arc::new(num);
    cache.lock().expect("cyclotomic cache poisoned").insert(n, poly.clone());
    poly
}

fn exact_monic_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Euler totient.
pub fn totient(n: u32) -> u32 {
    (cyclotomic_polynomial(n).len() - 1) as u32
}

/// An element of `ℚ(ζ_N)`, stored as coefficients of `1, ζ, …, ζ^{φ(N)−1}`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds an element from an arbitrary polynomial in `ζ_N`.
    pub fn from_poly(conductor: u32, poly: Vec<Rational>) -> Self {
        let coeffs = reduce_mod_cyclotomic(poly, conductor);
        Cyclotomic { conductor, coeffs }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The rational value, if the element lies in `ℚ`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    fn lifted(&self, target: u32) -> Vec<Rational> {
        if target == self.conductor {
            return self.coeffs.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![int(0); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        reduce_mod_cyclotomic(poly, target)
    }

    fn common(&self, other: &Self) -> (u32, Vec<Rational>, Vec<Rational>) {
        let l = self.conductor.lcm(&other.conductor);
        (l, self.lifted(l), other.lifted(l))
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn reduce_mod_cyclotomic(poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    let mut p = trim(poly);
    while p.len() > deg {
        let top = p.len() - 1;
        let c = p[top].clone();
        if !c.is_zero() {
            let shift = top - deg;
            for (j, pj) in phi.iter().enumerate() {
                if *pj != 0 {
                    p[shift + j] -= &c * Rational::from_integer((*pj).into());
                }
            }
        }
        p.pop();
        p = trim(p);
    }
    p.resize(deg, int(0));
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![int(0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![int(0); n];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] -= v;
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![int(0); rem.len() - b.len() + 1];
    let lead = b.last().expect("nonempty").clone();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().expect("nonempty") / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (quot, rem)
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
    let (mut t0, mut t1) = (Vec::<Rational>::new(), vec![int(1)]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    assert!(r0.len() == 1, "element not invertible modulo cyclotomic polynomial");
    let c = r0[0].clone();
    t0.iter().map(|t| t / &c).collect()
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl field::Field for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![int(0)],
        }
    }
    fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![int(1)],
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        let (l, a, b) = self.common(other);
        Cyclotomic {
            conductor: l,
            coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        let (l, a, b) = self.common(other);
        Cyclotomic {
            conductor: l,
            coeffs: a.iter().zip(&b).map(|(x, y)| x - y).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if let Some(r) = self.as_rational() {
            return Cyclotomic {
                conductor: other.conductor,
                coeffs: other.coeffs.iter().map(|c| c * &r).collect(),
            };
        }
        if let Some(r) = other.as_rational() {
            return Cyclotomic {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().map(|c| c * &r).collect(),
            };
        }
        let (l, a, b) = self.common(other);
        Cyclotomic::from_poly(l, poly_mul(&a, &b))
    }
    fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn inv(&self) -> Self {
        assert!(!field::Field::is_zero(self), "inverse of zero");
        if let Some(r) = self.as_rational() {
            return Cyclotomic {
                conductor: 1,
                coeffs: vec![r.recip()],
            };
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|c| Rational::from_integer((*c).into()))
            .collect();
        let inv = poly_inverse_mod(&self.coeffs, &phi);
        Cyclotomic::from_poly(self.conductor, inv)
    }
    fn from_rational(r: &Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r.clone()],
        }
    }
    fn root_of_unity(order: u64, power: u64) -> Option<Self> {
        let order = u32::try_from(order.max(1)).ok()?;
        let k = (power % order as u64) as usize;
        let mut poly = vec![int(0); k + 1];
        poly[k] = int(1);
        Some(Cyclotomic::from_poly(order, poly))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Field};

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for n in 1..=12u64 {
            let z = Cyclotomic::root_of_unity(n, 1).unwrap();
            assert!(z.pow(n).is_one(), "ζ_{n}^{n} ≠ 1");
            for k in 1..n {
                if n % k == 0 {
                    assert!(!z.pow(k).is_one(), "ζ_{n} has order dividing {k}");
                }
            }
        }
    }

    #[test]
    fn sum_of_primitive_cube_roots_is_minus_one() {
        let z = Cyclotomic::root_of_unity(3, 1).unwrap();
        let s = z.add(&z.pow(2));
        assert_eq!(s.as_rational(), Some(int(-1)));
    }

    #[test]
    fn mixed_conductors_embed_compatibly() {
        let i = Cyclotomic::root_of_unity(4, 1).unwrap();
        let minus_one = Cyclotomic::root_of_unity(2, 1).unwrap();
        assert_eq!(i.mul(&i), minus_one);
        let w = Cyclotomic::root_of_unity(12, 3).unwrap();
        assert_eq!(w, i);
    }

    #[test]
    fn inverses() {
        let z = Cyclotomic::root_of_unity(5, 1).unwrap();
        let a = z.add(&Cyclotomic::from_i64(2));
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(z.inv(), z.pow(4));
    }
}
