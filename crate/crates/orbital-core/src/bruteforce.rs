//! Exhaustive enumeration of `𝔽_q`-points of truncated affine Springer fibers
//! for products of SL(2), by Iwasawa coset representatives and exact Laurent
//! polynomial arithmetic over `𝔽_q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Fan, TorusDivisor};
use crate::field::to_i64;
use crate::finite_field::GaloisField;
use crate::poly::CountPolynomial;
use crate::rootdata::RootDatum;

/// Largest number of candidate representatives examined in one run.
pub const MAX_CANDIDATES: u128 = 50_000_000;

/// A Laurent polynomial `Σ c_e ε^e` over `𝔽_q`, stored densely from its
/// lowest exponent; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<u32>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(coeff: u32, exponent: i64) -> Self {
        LaurentPoly {
            low: exponent,
            coeffs: vec![coeff],
        }
        .normalized()
    }

    /// `Σ_j coeffs[j] ε^{low + j}`.
    pub fn from_coefficients(low: i64, coeffs: Vec<u32>) -> Self {
        LaurentPoly { low, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The ε-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Whether the polynomial lies in `𝒪 = 𝔽_q[[ε]]`.
    pub fn is_integral(&self) -> bool {
        self.valuation().map_or(true, |v| v >= 0)
    }

    pub fn add(&self, other: &Self, field: &GaloisField) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
        let coeffs = (low..high).map(|e| field.add(self.coeff(e), other.coeff(e))).collect();
        LaurentPoly { low, coeffs }.normalized()
    }

    pub fn neg(&self, field: &GaloisField) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self, field: &GaloisField) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn mul(&self, other: &Self, field: &GaloisField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = field.add(coeffs[i + j], field.mul(a, b));
            }
        }
        LaurentPoly {
            low: self.low + other.low,
            coeffs,
        }
        .normalized()
    }

    pub fn coeff(&self, exponent: i64) -> u32 {
        let j = exponent - self.low;
        if j < 0 {
            0
        } else {
            self.coeffs.get(j as usize).copied().unwrap_or(0)
        }
    }
}

/// An element `[[a, b], [c, d]]` of `SL(2, 𝔽_q[ε, ε^{-1}])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Matrix {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
}

impl Sl2Matrix {
    pub fn identity() -> Self {
        Sl2Matrix {
            a: LaurentPoly::monomial(1, 0),
            b: LaurentPoly::zero(),
            c: LaurentPoly::zero(),
            d: LaurentPoly::monomial(1, 0),
        }
    }

    /// `α^∨(ε^l) = diag(ε^l, ε^{−l})`.
    pub fn cocharacter(l: i64) -> Self {
        Sl2Matrix {
            a: LaurentPoly::monomial(1, l),
            b: LaurentPoly::zero(),
            c: LaurentPoly::zero(),
            d: LaurentPoly::monomial(1, -l),
        }
    }

    /// The Iwasawa representative `[[ε^a, u], [0, ε^{−a}]]`.
    pub fn iwasawa(a: i64, u: LaurentPoly) -> Self {
        Sl2Matrix {
            a: LaurentPoly::monomial(1, a),
            b: u,
            c: LaurentPoly::zero(),
            d: LaurentPoly::monomial(1, -a),
        }
    }

    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        Sl2Matrix {
            a: self.a.mul(&other.a, f).add(&self.b.mul(&other.c, f), f),
            b: self.a.mul(&other.b, f).add(&self.b.mul(&other.d, f), f),
            c: self.c.mul(&other.a, f).add(&self.d.mul(&other.c, f), f),
            d: self.c.mul(&other.b, f).add(&self.d.mul(&other.d, f), f),
        }
    }

    /// The inverse `[[d, −b], [−c, a]]` of a determinant-one matrix.
    pub fn inverse(&self, f: &GaloisField) -> Self {
        Sl2Matrix {
            a: self.d.clone(),
            b: self.b.neg(f),
            c: self.c.neg(f),
            d: self.a.clone(),
        }
    }

    pub fn determinant(&self, f: &GaloisField) -> LaurentPoly {
        self.a.mul(&self.d, f).sub(&self.b.mul(&self.c, f), f)
    }

    fn entries(&self) -> [&LaurentPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integral())
    }

    /// `(h_B, h_B̄) = (−min(val c, val d), −min(val a, val b))`, the
    /// coefficients of `D(x)` on `D_B` and `D_B̄`.
    pub fn truncation_heights(&self) -> (i64, i64) {
        let low = |x: &LaurentPoly, y: &LaurentPoly| -> i64 {
            let v = [x.valuation(), y.valuation()].into_iter().flatten().min();
            -v.expect("a row of an invertible matrix is nonzero")
        };
        (low(&self.c, &self.d), low(&self.a, &self.b))
    }

    /// The dominant `μ ≥ 0` with `x ∈ K ε^{μα^∨} K`.
    pub fn cartan_invariant(&self) -> i64 {
        -self
            .entries()
            .iter()
            .filter_map(|e| e.valuation())
            .min()
            .expect("an invertible matrix is nonzero")
    }
}

/// The split regular semisimple `γ = Π_i diag(c_i ε^{d_i}, −c_i ε^{d_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitGamma {
    /// `(d_i, c_i)` per SL(2) factor; `c_i ∈ 𝔽_q^×` is given as an integer.
    pub factors: Vec<(u32, i64)>,
}

impl SplitGamma {
    /// `γ` with `c_i = 1`.
    pub fn from_profile(profile: &[u32]) -> Self {
        SplitGamma {
            factors: profile.iter().map(|&d| (d, 1)).collect(),
        }
    }

    fn entry(&self, factor: usize, f: &GaloisField) -> Result<LaurentPoly> {
        let (d, c) = self.factors[factor];
        let unit = f.from_int(c);
        if unit == 0 {
            return Err(Error::InvalidInput(format!(
                "γ has a zero eigenvalue in factor {factor} over F_{}",
                f.order()
            )));
        }
        Ok(LaurentPoly::monomial(unit, d as i64))
    }
}

/// `Ad(x^{−1})γ ∈ 𝔤(𝒪)` for one factor with `γ = diag(t, −t)`.
pub fn in_springer_fiber(x: &Sl2Matrix, t: &LaurentPoly, f: &GaloisField) -> bool {
    let gamma = Sl2Matrix {
        a: t.clone(),
        b: LaurentPoly::zero(),
        c: LaurentPoly::zero(),
        d: t.neg(f),
    };
    x.inverse(f).mul(&gamma, f).mul(x, f).is_integral()
}

/// How each SL(2) factor of the group sits in the fan.
#[derive(Clone, Debug, PartialEq, Eq)]
enum FactorRole {
    /// `M` contains only the torus of this factor: rays `(B, B̄)`.
    Truncated { ray_b: usize, ray_b_bar: usize },
    /// `M` contains the factor: no rays, and `X_*(S)` contains its cocharacters.
    Quotiented,
}

fn factor_roles(fan: &Fan) -> Result<Vec<FactorRole>> {
    let datum = fan.datum();
    check_sl2_product(datum)?;
    (0..datum.rank())
        .map(|i| {
            let find = |sign: i64| {
                fan.rays()
                    .iter()
                    .position(|r| r.generator.iter().enumerate().all(|(j, &g)| if j == i { g == sign } else { g == 0 }))
            };
            match (find(1), find(-1)) {
                (Some(ray_b), Some(ray_b_bar)) => Ok(FactorRole::Truncated { ray_b, ray_b_bar }),
                (None, None) => Ok(FactorRole::Quotiented),
                _ => Err(Error::Unsupported("fan rays do not split along the SL(2) factors".into())),
            }
        })
        .collect()
}

/// Requires a split product of copies of SL(2) with coordinates along the factors.
pub fn check_sl2_product(datum: &RootDatum) -> Result<()> {
    let n = datum.rank();
    let ok = datum.is_split()
        && datum.num_positive() == n
        && (0..n).all(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            let mut two = vec![0; n];
            two[i] = 2;
            datum.positive_roots().any(|a| *datum.coroot(a) == e && *datum.root(a) == two)
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported("enumeration supports split products of SL(2) only".into()))
    }
}

/// `D_M^G(x) = Σ ϖ_σ(H_{P_σ}(x)) D_σ`, one 2×2 matrix per factor.
pub fn truncation_divisor_of_point(point: &[Sl2Matrix], fan: &Fan) -> Result<TorusDivisor> {
    let roles = factor_roles(fan)?;
    if point.len() != roles.len() {
        return Err(Error::InvalidInput(format!("{} matrices for {} factors", point.len(), roles.len())));
    }
    let mut values = vec![0i64; fan.num_rays()];
    for (x, role) in point.iter().zip(&roles) {
        if let FactorRole::Truncated { ray_b, ray_b_bar } = role {
            let (h_b, h_b_bar) = x.truncation_heights();
            values[*ray_b] = h_b;
            values[*ray_b_bar] = h_b_bar;
        }
    }
    Ok(TorusDivisor::from_integers(&values))
}

/// Points of one factor, grouped by the Iwasawa cell `ε^{aα^∨} N(F) K / K`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorEnumeration {
    #[serde(skip)]
    pub points: Vec<Sl2Matrix>,
    pub per_cell: BTreeMap<i64, u64>,
    pub candidates: u64,
    /// Whether the factor was enumerated modulo its cocharacter lattice.
    pub fundamental_domain: bool,
}

impl FactorEnumeration {
    pub fn count(&self) -> u64 {
        self.points.len() as u64
    }
}

/// The enumerated fiber `X_*(S) \ 𝔛_γ(D)(𝔽_q)` as a product over factors.
#[derive(Clone, Debug, Serialize)]
pub struct FiberEnumeration {
    pub q: u32,
    pub factors: Vec<FactorEnumeration>,
}

impl FiberEnumeration {
    pub fn count(&self) -> BigInt {
        self.factors.iter().map(|f| BigInt::from(f.count())).product()
    }
}

/// All `u = Σ_{e ∈ [lo, hi]} c_e ε^e`.
fn laurent_range(lo: i64, hi: i64, f: &GaloisField) -> Vec<LaurentPoly> {
    if hi < lo {
        return vec![LaurentPoly::zero()];
    }
    let width = (hi - lo + 1) as u32;
    let q = f.order() as u64;
    (0..q.pow(width))
        .map(|mut code| {
            let coeffs = (0..width)
                .map(|_| {
                    let c = (code % q) as u32;
                    code /= q;
                    c
                })
                .collect();
            LaurentPoly::from_coefficients(lo, coeffs)
        })
        .collect()
}

fn check_size(widths: impl IntoIterator<Item = (i64, u32)>, q: u32) -> Result<()> {
    let total: u128 = widths
        .into_iter()
        .map(|(cells, width)| cells.max(0) as u128 * (q as u128).saturating_pow(width))
        .sum();
    if total > MAX_CANDIDATES {
        return Err(Error::TooLarge(format!("{total} candidate representatives")));
    }
    Ok(())
}

/// Iwasawa candidates for one factor. Cells run over `a ∈ [a_lo, a_hi]` and
/// `u ∈ F/ε^a𝒪` over exponents `[a − depth, a − 1]`.
fn factor_candidates(a_lo: i64, a_hi: i64, depth: i64, f: &GaloisField) -> Result<Vec<(i64, Sl2Matrix)>> {
    check_size([(a_hi - a_lo + 1, depth.max(0) as u32)], f.order())?;
    let mut out = Vec::new();
    for a in a_lo..=a_hi {
        for u in laurent_range(a - depth, a - 1, f) {
            out.push((a, Sl2Matrix::iwasawa(a, u)));
        }
    }
    Ok(out)
}

/// `𝔛_γ(D)(𝔽_q)` modulo `X_*(S)`. Truncated factors run over every Iwasawa
/// cell one step beyond the truncation bounds and over one unipotent digit
/// more than the Lie algebra condition allows, so both membership tests
/// reject real candidates; quotiented factors use the fundamental domain `a = 0`.
pub fn enumerate_truncated_fiber(fan: &Fan, gamma: &SplitGamma, divisor: &TorusDivisor, field: &GaloisField) -> Result<FiberEnumeration> {
    let all: Vec<usize> = fan.datum().positive_roots().collect();
    enumerate_subsystem_fiber(fan, gamma, divisor, field, &all)
}

/// The same enumeration for the group `H ⊆ G` generated by the torus and the
/// given positive roots: factors whose root is absent are tori, whose
/// affine Grassmannian consists of the points `ε^{aα^∨}` alone.
pub fn enumerate_subsystem_fiber(
    fan: &Fan,
    gamma: &SplitGamma,
    divisor: &TorusDivisor,
    field: &GaloisField,
    positive_roots: &[usize],
) -> Result<FiberEnumeration> {
    let roles = factor_roles(fan)?;
    let datum = fan.datum();
    let has_root: Vec<bool> = (0..datum.rank())
        .map(|i| positive_roots.iter().any(|&a| datum.coroot(a)[i] != 0))
        .collect();
    if gamma.factors.len() != roles.len() {
        return Err(Error::InvalidInput("γ must have one eigenvalue pair per factor".into()));
    }
    let coeff = |i: usize| -> Result<i64> {
        to_i64(&divisor.coefficients[i]).ok_or_else(|| Error::InvalidDivisor("enumeration needs an integral divisor".into()))
    };
    let mut factors = Vec::new();
    for (i, role) in roles.iter().enumerate() {
        let t = gamma.entry(i, field)?;
        let depth = if has_root[i] { gamma.factors[i].0 as i64 + 1 } else { 0 };
        let (candidates, truncation) = match role {
            FactorRole::Truncated { ray_b, ray_b_bar } => {
                let (n_b, n_b_bar) = (coeff(*ray_b)?, coeff(*ray_b_bar)?);
                if n_b + n_b_bar < 0 {
                    (Vec::new(), Some((n_b, n_b_bar)))
                } else {
                    (factor_candidates(-n_b_bar - 1, n_b + 1, depth, field)?, Some((n_b, n_b_bar)))
                }
            }
            FactorRole::Quotiented => (factor_candidates(0, 0, depth, field)?, None),
        };
        let mut per_cell = BTreeMap::new();
        let mut points = Vec::new();
        let examined = candidates.len() as u64;
        for (a, x) in candidates {
            let inside = truncation.map_or(true, |(n_b, n_b_bar)| {
                let (h_b, h_b_bar) = x.truncation_heights();
                h_b <= n_b && h_b_bar <= n_b_bar
            });
            if inside && in_springer_fiber(&x, &t, field) {
                *per_cell.entry(a).or_insert(0) += 1;
                points.push(x);
            }
        }
        factors.push(FactorEnumeration {
            points,
            per_cell,
            candidates: examined,
            fundamental_domain: truncation.is_none(),
        });
    }
    Ok(FiberEnumeration { q: field.order(), factors })
}

/// `Σ_{x ∈ X_*(T) \ 𝔛_γ(𝔽_q)} v_D(x)` with `v_D(x) = #{λ : (λ) + D(x) ≤ D}`,
/// computed factorwise over the fundamental domain `a = 0`.
pub fn weighted_count(fan: &Fan, gamma: &SplitGamma, divisor: &TorusDivisor, field: &GaloisField) -> Result<BigInt> {
    let roles = factor_roles(fan)?;
    let mut total = BigInt::from(1);
    for (i, role) in roles.iter().enumerate() {
        let t = gamma.entry(i, field)?;
        let depth = gamma.factors[i].0 as i64 + 1;
        let mut factor_total = BigInt::from(0);
        for (_, x) in factor_candidates(0, 0, depth, field)? {
            if !in_springer_fiber(&x, &t, field) {
                continue;
            }
            let weight = match role {
                FactorRole::Truncated { ray_b, ray_b_bar } => {
                    let n_b = to_i64(&divisor.coefficients[*ray_b]).unwrap_or(i64::MIN);
                    let n_b_bar = to_i64(&divisor.coefficients[*ray_b_bar]).unwrap_or(i64::MIN);
                    let (h_b, h_b_bar) = x.truncation_heights();
                    // l + h_B ≤ n_B and −l + h_B̄ ≤ n_B̄
                    (n_b - h_b + n_b_bar - h_b_bar + 1).max(0)
                }
                FactorRole::Quotiented => 1,
            };
            factor_total += weight;
        }
        total *= factor_total;
    }
    Ok(total)
}

/// Outcome of comparing the truncated fiber with a union of Cartan strata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanComparison {
    pub points_examined: u64,
    /// Points in the truncated fiber whose Cartan invariant lies outside `𝔓(D)`.
    pub truncated_only: u64,
    /// Points with Cartan invariant in `𝔓(D)` that fail the truncation.
    pub cartan_only: u64,
}

impl CartanComparison {
    pub fn coincide(&self) -> bool {
        self.truncated_only == 0 && self.cartan_only == 0
    }
}

/// Compares `𝔛_γ(D)` with `∪_{μ ∈ 𝔓(D)} 𝔛_γ ∩ K ε^μ K / K` on SL(2) with
/// `M = T`, over a window containing both sets.
pub fn cartan_strata_check(fan: &Fan, gamma: &SplitGamma, divisor: &TorusDivisor, field: &GaloisField) -> Result<CartanComparison> {
    let roles = factor_roles(fan)?;
    let (ray_b, ray_b_bar) = match roles.as_slice() {
        [FactorRole::Truncated { ray_b, ray_b_bar }] => (*ray_b, *ray_b_bar),
        _ => return Err(Error::Unsupported("the Cartan comparison runs on SL(2) with M = T".into())),
    };
    let n_b = to_i64(&divisor.coefficients[ray_b]).ok_or_else(|| Error::InvalidDivisor("integral divisor required".into()))?;
    let n_b_bar = to_i64(&divisor.coefficients[ray_b_bar]).ok_or_else(|| Error::InvalidDivisor("integral divisor required".into()))?;
    let t = gamma.entry(0, field)?;
    let d = gamma.factors[0].0 as i64;
    let reach = n_b.abs().max(n_b_bar.abs()) + 1;
    let polytope = fan.polytope(divisor);
    let mut out = CartanComparison {
        points_examined: 0,
        truncated_only: 0,
        cartan_only: 0,
    };
    for (_, x) in factor_candidates(-reach, reach, reach + d + 1, field)? {
        if !in_springer_fiber(&x, &t, field) {
            continue;
        }
        out.points_examined += 1;
        let (h_b, h_b_bar) = x.truncation_heights();
        let truncated = h_b <= n_b && h_b_bar <= n_b_bar;
        let mu = x.cartan_invariant();
        let cartan = polytope.contains(&[crate::field::int(mu)]) && polytope.contains(&[crate::field::int(-mu)]);
        match (truncated, cartan) {
            (true, false) => out.truncated_only += 1,
            (false, true) => out.cartan_only += 1,
            _ => {}
        }
    }
    Ok(out)
}

/// A random element of `SL(2, 𝔽_q[ε])` with polynomial entries of degree at
/// most `degree`, as a product of elementary and diagonal matrices.
pub fn random_integral_element<R: Rng>(rng: &mut R, field: &GaloisField, degree: u32) -> Sl2Matrix {
    let poly = |rng: &mut R| LaurentPoly::from_coefficients(0, (0..=degree).map(|_| rng.gen_range(0..field.order())).collect());
    let upper = Sl2Matrix {
        b: poly(rng),
        ..Sl2Matrix::identity()
    };
    let lower = Sl2Matrix {
        c: poly(rng),
        ..Sl2Matrix::identity()
    };
    let unit = rng.gen_range(1..field.order());
    let inverse = field.inv(unit).unwrap_or(1);
    let diagonal = Sl2Matrix {
        a: LaurentPoly::monomial(unit, 0),
        b: LaurentPoly::zero(),
        c: LaurentPoly::zero(),
        d: LaurentPoly::monomial(inverse, 0),
    };
    upper.mul(&lower, field).mul(&diagonal, field).mul(&upper.inverse(field), field)
}

/// Fits the integer polynomial through counts at the given field orders,
/// keeping the last order as a consistency witness.
pub fn fit_count_polynomial(samples: &[(u32, BigInt)]) -> Option<CountPolynomial> {
    let (witness, fit) = samples.split_last()?;
    let points: Vec<(i64, BigInt)> = fit.iter().map(|(q, c)| (*q as i64, c.clone())).collect();
    let poly = CountPolynomial::interpolate(&points)?;
    (poly.eval(witness.0 as i64) == witness.1).then_some(poly)
}
