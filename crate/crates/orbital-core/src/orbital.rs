//! Weighted orbital integrals as normalized point counts, the transfer sign
//! `Δ_s(γ)` and the checker for the weighted endoscopic identity
//! `Δ_κ(γ) J^{G,κ}_D = Σ_{I ≠ ∅, τ(I) = I} (−1)^{|I|−1} q^{d_I} J^{G_I,κ}_D`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bruteforce::{enumerate_subsystem_fiber, weighted_count, SplitGamma};
use crate::cyclotomic::Cyclotomic;
use crate::endoscopy::{alternating_sum, strata, tor_trace, EndoscopicStratum, FiniteOrderTorusPoint};
use crate::error::{Error, Result};
use crate::fan::{Fan, TorusDivisor};
use crate::field::{int, Field, Rational};
use crate::finite_field::GaloisField;
use crate::laurent::TorSchedule;
use crate::poly::{serialize_bigint, AsRational, CountPolynomial, TracePolynomial};
use crate::rootdata::RootDatum;
use crate::springer::{SpringerModule, ValuationProfile};

/// `v_D(x) = #{λ ∈ Λ_Σ : (λ) + D(x) ≤ D}` for split data, where `Λ_Σ` is the
/// image of `X_*(T)` in `a_T / a_S`.
pub fn weight(fan: &Fan, point_divisor: &TorusDivisor, divisor: &TorusDivisor) -> Result<usize> {
    if !fan.datum().is_split() {
        return Err(Error::Unsupported("weights are implemented for split tori".into()));
    }
    let room = divisor.add(&point_divisor.scale(&int(-1)));
    Ok(fan.polytope(&room).lattice_points(&fan.quotient_lattice_basis())?.len())
}

/// Normalization constants of a split configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    /// `μ(T_γ)`.
    pub torus_volume: u64,
    /// `μ(S_γ)`.
    pub split_volume: u64,
    /// `|ker(X_*(S_γ)_τ → X_*(T_γ)_τ)|`.
    pub kernel_order: u64,
    /// `|Λ_Σ / Λ_γ|`.
    pub lattice_cosets: u64,
}

impl Normalization {
    fn split() -> Self {
        Normalization {
            torus_volume: 1,
            split_volume: 1,
            kernel_order: 1,
            lattice_cosets: 1,
        }
    }
}

/// How an orbital integral is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitalMode {
    /// Exhaustive enumeration at each listed field order.
    BruteForce { orders: Vec<u32> },
    /// Frobenius traces on Tor of the Springer module, as a polynomial in `q`.
    Lefschetz,
}

/// A count at one field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderValue {
    pub q: u32,
    #[serde(serialize_with = "serialize_bigint")]
    pub value: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalResult {
    pub mode: String,
    /// `J^κ_D(γ)` as a polynomial in `q` (Lefschetz mode, integral traces).
    pub polynomial: Option<CountPolynomial>,
    /// `J^κ_D(γ)` at the enumerated orders (brute-force mode).
    pub values: Vec<OrderValue>,
    pub normalization: Normalization,
    pub assumptions: Vec<String>,
}

/// `γ = Π diag(ε^{d_i}, −ε^{d_i})` with `d_i` the profile on the factor roots.
pub fn split_gamma(datum: &RootDatum, profile: &ValuationProfile) -> SplitGamma {
    let d: Vec<u32> = (0..datum.rank())
        .map(|i| datum.positive_roots().find(|&a| datum.coroot(a)[i] != 0).map_or(0, |a| profile.value(a)))
        .collect();
    SplitGamma::from_profile(&d)
}

/// Metadata flag for residue fields below the large-characteristic regime.
pub fn small_field_flag(q: u32) -> Option<String> {
    (q < 5).then(|| format!("small residue field q = {q}: outside the large-characteristic regime"))
}

fn kappa_is_real(fan: &Fan, s: &FiniteOrderTorusPoint) -> bool {
    s.kappa_order(fan.lattice_split()) <= 2
}

fn trace_for<F: Field>(
    fan: &Fan,
    divisor: &TorusDivisor,
    profile: &ValuationProfile,
    roots: &[usize],
    kappa: &[F],
) -> Result<(TracePolynomial<F>, Vec<String>)> {
    let module = SpringerModule::new(fan, divisor, profile, roots)?;
    Ok((tor_trace(&module, kappa, TorSchedule::default())?, module.assumptions()))
}

/// `J^κ_D(γ)` for split `γ` with the given profile. Brute-force mode counts
/// `X_*(S) \ 𝔛_γ(D)(𝔽_q)` over a fundamental domain; every such point has an
/// `𝔽_q`-rational lift, so its invariant `λ_x ∈ X_*(S)_τ` vanishes and the
/// sign `κ(λ_x)` is 1. Lefschetz mode takes the alternating Frobenius trace
/// of `Tor(κ, L)`.
pub fn orbital_integral(
    fan: &Fan,
    profile: &ValuationProfile,
    divisor: &TorusDivisor,
    s: &FiniteOrderTorusPoint,
    mode: &OrbitalMode,
) -> Result<OrbitalResult> {
    let datum = fan.datum();
    if !datum.is_split() {
        return Err(Error::Unsupported("orbital integrals are evaluated for split data only".into()));
    }
    let all: Vec<usize> = datum.positive_roots().collect();
    match mode {
        OrbitalMode::BruteForce { orders } => {
            let gamma = split_gamma(datum, profile);
            let mut assumptions = vec!["split γ: Frobenius fixes every point's lattice invariant".to_string()];
            assumptions.extend(orders.iter().filter_map(|&q| small_field_flag(q)));
            let mut values = Vec::new();
            for &q in orders {
                let field = GaloisField::new(q)?;
                values.push(OrderValue {
                    q,
                    value: enumerate_subsystem_fiber(fan, &gamma, divisor, &field, &all)?.count(),
                });
            }
            Ok(OrbitalResult {
                mode: "bruteforce".into(),
                polynomial: None,
                values,
                normalization: Normalization::split(),
                assumptions,
            })
        }
        OrbitalMode::Lefschetz => {
            let (polynomial, assumptions) = if kappa_is_real(fan, s) {
                let kappa: Vec<Rational> = s.kappa_values(fan.lattice_split())?;
                let (t, a) = trace_for(fan, divisor, profile, &all, &kappa)?;
                (t.to_count(), a)
            } else {
                let kappa: Vec<Cyclotomic> = s.kappa_values(fan.lattice_split())?;
                let (t, a) = trace_for(fan, divisor, profile, &all, &kappa)?;
                (t.to_count(), a)
            };
            Ok(OrbitalResult {
                mode: "lefschetz".into(),
                polynomial,
                values: Vec::new(),
                normalization: Normalization::split(),
                assumptions,
            })
        }
    }
}

/// `Σ_x v_D(x)` over `X_*(T) \ 𝔛_γ(𝔽_q)`, the weighted form of `J_D(γ)`.
pub fn weighted_orbital_integral(fan: &Fan, profile: &ValuationProfile, divisor: &TorusDivisor, q: u32) -> Result<BigInt> {
    weighted_count(fan, &split_gamma(fan.datum(), profile), divisor, &GaloisField::new(q)?)
}

/// `Δ_s(γ) = Π (−1)^{val(α(γ))}` over the τ-orbits `O` of roots with `−O = O`
/// and `α^∨(s) ≠ 1`, one factor per orbit.
pub fn transfer_sign(datum: &RootDatum, profile: &ValuationProfile, s: &FiniteOrderTorusPoint) -> i64 {
    let mut seen = vec![false; datum.num_roots()];
    let mut sign = 1;
    for start in 0..datum.num_roots() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        let mut next = datum.frobenius_on_root(start);
        while next != start {
            orbit.push(next);
            next = datum.frobenius_on_root(next);
        }
        for &a in &orbit {
            seen[a] = true;
        }
        let symmetric = orbit.contains(&datum.negative(start));
        if symmetric && s.eval(datum.coroot(start)) != int(0) && profile.value(start) % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}

fn render<F: AsRational + Debug>(c: &F) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => format!("{c:?}"),
    }
}

fn render_poly<F: Field + AsRational>(p: &TracePolynomial<F>) -> Vec<String> {
    p.coefficients().iter().map(render).collect()
}

/// Brute-force evaluation of both sides at one field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceSides {
    pub q: u32,
    #[serde(serialize_with = "serialize_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub rhs: BigInt,
    /// Whether the Lefschetz polynomials evaluated at `q` give the same two numbers.
    pub matches_lefschetz: Option<bool>,
}

/// One divisor of the family.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub divisor: BTreeMap<String, String>,
    /// Coefficients of `q^0, q^1, …` of `Δ_κ(γ) J^{G,κ}_D`.
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub equal: bool,
    /// Coefficients of the alternating sum over all τ-stable `I`, degree by degree.
    pub degreewise: Vec<String>,
    pub degreewise_vanishes: bool,
    pub brute_force: Option<BruteForceSides>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    /// `"equal"`, `"discrepancy"` or `"hypotheses-not-met"`.
    pub status: String,
    pub transfer_sign: i64,
    pub stratum_size: usize,
    pub stable_subsets: Vec<Vec<usize>>,
    pub d_i: Vec<u32>,
    pub checks: Vec<IdentityCheck>,
    pub assumptions: Vec<String>,
}

/// Evaluates both sides of the endoscopic identity for each divisor of the
/// family; with `brute_force_q`, also counts both sides over `𝔽_q`.
pub fn fundamental_lemma_check(
    fan: &Fan,
    profile: &ValuationProfile,
    s: &FiniteOrderTorusPoint,
    divisors: &[TorusDivisor],
    brute_force_q: Option<u32>,
) -> Result<IdentityReport> {
    if kappa_is_real(fan, s) {
        check_in::<Rational>(fan, profile, s, divisors, brute_force_q)
    } else {
        check_in::<Cyclotomic>(fan, profile, s, divisors, brute_force_q)
    }
}

fn check_in<F: Field + AsRational>(
    fan: &Fan,
    profile: &ValuationProfile,
    s: &FiniteOrderTorusPoint,
    divisors: &[TorusDivisor],
    brute_force_q: Option<u32>,
) -> Result<IdentityReport> {
    let datum = fan.datum();
    let stratum = strata(fan, s)?;
    let sign = transfer_sign(datum, profile, s);
    let kappa: Vec<F> = s.kappa_values(fan.lattice_split())?;
    let subsets = stratum.tau_stable_subsets();
    let mut assumptions: Vec<String> = vec!["Φ_+ is the positive system of the reference Borel; ∇ and Δ are built from it".into()];
    assumptions.extend(brute_force_q.and_then(small_field_flag));
    let mut checks = Vec::new();
    for divisor in divisors {
        if !fan.is_frobenius_stable(divisor) {
            return Err(Error::InvalidDivisor("the divisor is not τ-stable".into()));
        }
        let all: Vec<usize> = datum.positive_roots().collect();
        let (full, a) = trace_for(fan, divisor, profile, &all, &kappa)?;
        merge(&mut assumptions, a);
        let mut traces = vec![(Vec::new(), full.clone())];
        for subset in &subsets {
            let (t, a) = trace_for(fan, divisor, profile, &stratum.positive_roots_of(subset), &kappa)?;
            merge(&mut assumptions, a);
            traces.push((subset.clone(), t));
        }
        let lhs = full.scale(&F::from_i64(sign));
        let rhs = endoscopic_side(profile, &stratum, &traces[1..]);
        let degreewise = alternating_sum(profile, &stratum, sign, &traces);
        let brute_force = match brute_force_q {
            Some(q) => Some(brute_force_sides(fan, profile, divisor, &stratum, sign, q, &lhs, &rhs)?),
            None => None,
        };
        checks.push(IdentityCheck {
            divisor: fan.divisor_labels(divisor).into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            equal: lhs == rhs,
            lhs: render_poly(&lhs),
            rhs: render_poly(&rhs),
            degreewise_vanishes: degreewise.is_zero(),
            degreewise: render_poly(&degreewise),
            brute_force,
        });
    }
    // For non-split data the invariant λ_x of a rational point can be nonzero
    // and its pairing with κ is not evaluated, so the traces carry κ(λ_x) = 1.
    if !datum.is_split() {
        merge(
            &mut assumptions,
            vec!["non-split τ: κ(λ_x) is taken to be 1 for every rational point".into()],
        );
    }
    let hypotheses_met = profile.is_equivalued() && datum.is_split();
    let all_equal = checks.iter().all(|c| c.equal && c.brute_force.as_ref().map_or(true, |b| b.lhs == b.rhs));
    let status = if !hypotheses_met {
        "hypotheses-not-met"
    } else if all_equal {
        "equal"
    } else {
        "discrepancy"
    };
    Ok(IdentityReport {
        status: status.into(),
        transfer_sign: sign,
        stratum_size: stratum.n(),
        d_i: subsets.iter().map(|i| stratum.d_of(profile, i)).collect(),
        stable_subsets: subsets,
        checks,
        assumptions,
    })
}

fn merge(into: &mut Vec<String>, from: Vec<String>) {
    for a in from {
        if !into.contains(&a) {
            into.push(a);
        }
    }
}

/// `Σ_{I ≠ ∅} (−1)^{|I|−1} q^{d_I} T_I`.
fn endoscopic_side<F: Field>(
    profile: &ValuationProfile,
    stratum: &EndoscopicStratum,
    traces: &[(Vec<usize>, TracePolynomial<F>)],
) -> TracePolynomial<F> {
    let mut acc = TracePolynomial::zero();
    for (subset, t) in traces {
        let parity = if subset.len() % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&t.shift(stratum.d_of(profile, subset) as usize).scale(&F::from_i64(parity)));
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn brute_force_sides<F: Field + AsRational>(
    fan: &Fan,
    profile: &ValuationProfile,
    divisor: &TorusDivisor,
    stratum: &EndoscopicStratum,
    sign: i64,
    q: u32,
    lhs: &TracePolynomial<F>,
    rhs: &TracePolynomial<F>,
) -> Result<BruteForceSides> {
    let datum = fan.datum();
    let field = GaloisField::new(q)?;
    let gamma = split_gamma(datum, profile);
    let all: Vec<usize> = datum.positive_roots().collect();
    let lhs_count = enumerate_subsystem_fiber(fan, &gamma, divisor, &field, &all)?.count() * sign;
    let mut rhs_count = BigInt::from(0);
    for subset in stratum.tau_stable_subsets() {
        let count = enumerate_subsystem_fiber(fan, &gamma, divisor, &field, &stratum.positive_roots_of(&subset))?.count();
        let parity = if subset.len() % 2 == 1 { 1 } else { -1 };
        rhs_count += count * BigInt::from(q).pow(stratum.d_of(profile, &subset)) * parity;
    }
    let matches_lefschetz = match (lhs.to_count(), rhs.to_count()) {
        (Some(l), Some(r)) => Some(l.eval(q as i64) == lhs_count && r.eval(q as i64) == rhs_count),
        _ => None,
    };
    Ok(BruteForceSides {
        q,
        lhs: lhs_count,
        rhs: rhs_count,
        matches_lefschetz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::rootdata::Levi;

    #[test]
    fn weights_on_sl2() {
        let g = RootDatum::sl(2);
        let fan = Fan::new(&g, &Levi::torus());
        let mut d = vec![0; 2];
        d[fan.ray_by_label("1").unwrap()] = 1;
        d[fan.ray_by_label("-1").unwrap()] = 2;
        let d = TorusDivisor::from_integers(&d);
        assert_eq!(weight(&fan, &TorusDivisor::zero(2), &d).unwrap(), 4);
        for l in -3..=3 {
            let shifted = fan.divisor_of_cocharacter(&[l]);
            assert_eq!(weight(&fan, &shifted, &d).unwrap(), 4);
        }
        let group = Fan::new(&g, &g.group_levi());
        assert_eq!(weight(&group, &TorusDivisor::zero(0), &TorusDivisor::zero(0)).unwrap(), 1);
    }

    #[test]
    fn dual_modes_agree_for_sl2_torus_levi() {
        let g = RootDatum::sl(2);
        let fan = Fan::new(&g, &Levi::torus());
        let prof = ValuationProfile::constant(&g, 1);
        let d = TorusDivisor::from_integers(&[1, 1]);
        let s = FiniteOrderTorusPoint::trivial(1);
        let lef = orbital_integral(&fan, &prof, &d, &s, &OrbitalMode::Lefschetz).unwrap();
        assert_eq!(lef.polynomial.unwrap().coefficients(), &[1, 2]);
        let bf = orbital_integral(&fan, &prof, &d, &s, &OrbitalMode::BruteForce { orders: vec![5] }).unwrap();
        assert_eq!(
            bf.values,
            vec![OrderValue {
                q: 5,
                value: BigInt::from(11)
            }]
        );
        assert_eq!(weighted_orbital_integral(&fan, &prof, &d, 5).unwrap(), BigInt::from(11));
    }

    #[test]
    fn kappa_orbital_value_for_group_levi() {
        let g = RootDatum::sl(2);
        let fan = Fan::new(&g, &g.group_levi());
        let prof = ValuationProfile::constant(&g, 1);
        let s = FiniteOrderTorusPoint::new(vec![rat(1, 2)]);
        let lef = orbital_integral(&fan, &prof, &TorusDivisor::zero(0), &s, &OrbitalMode::Lefschetz).unwrap();
        assert_eq!(lef.polynomial.unwrap().coefficients(), &[0, 1]);
        let bf = orbital_integral(&fan, &prof, &TorusDivisor::zero(0), &s, &OrbitalMode::BruteForce { orders: vec![5, 7] }).unwrap();
        let values: Vec<BigInt> = bf.values.iter().map(|v| v.value.clone()).collect();
        assert_eq!(values, vec![BigInt::from(5), BigInt::from(7)]);
    }

    #[test]
    fn transfer_signs() {
        let g = RootDatum::sl(2);
        let prof = ValuationProfile::constant(&g, 1);
        let minus = FiniteOrderTorusPoint::new(vec![rat(1, 2)]);
        assert_eq!(transfer_sign(&g, &prof, &minus), 1);
        let twisted = g.with_frobenius(vec![vec![-1]]).unwrap();
        assert_eq!(transfer_sign(&twisted, &prof, &minus), -1);
        assert_eq!(transfer_sign(&twisted, &ValuationProfile::constant(&g, 2), &minus), 1);
        assert_eq!(transfer_sign(&twisted, &prof, &FiniteOrderTorusPoint::trivial(1)), 1);
    }

    #[test]
    fn identity_for_sl2_examples() {
        let g = RootDatum::sl(2);
        let torus_fan = Fan::new(&g, &Levi::torus());
        let prof = ValuationProfile::constant(&g, 1);
        let r = fundamental_lemma_check(
            &torus_fan,
            &prof,
            &FiniteOrderTorusPoint::new(vec![rat(1, 2)]),
            &[TorusDivisor::from_integers(&[1, 1])],
            Some(5),
        )
        .unwrap();
        assert_eq!(r.status, "equal");
        assert_eq!(r.stratum_size, 1);
        let group_fan = Fan::new(&g, &g.group_levi());
        for d in 1..3 {
            let prof = ValuationProfile::constant(&g, d);
            let r = fundamental_lemma_check(
                &group_fan,
                &prof,
                &FiniteOrderTorusPoint::new(vec![rat(1, 2)]),
                &[TorusDivisor::zero(0)],
                Some(5),
            )
            .unwrap();
            assert_eq!(r.status, "equal", "{r:?}");
            let c = &r.checks[0];
            assert!(c.degreewise_vanishes);
            let mut expected = vec!["0".to_string(); d as usize];
            expected.push("1".into());
            assert_eq!(c.lhs, expected);
            let b = c.brute_force.as_ref().unwrap();
            assert_eq!(b.lhs, BigInt::from(5u32.pow(d)));
            assert_eq!(b.matches_lefschetz, Some(true));
        }
    }

    #[test]
    fn nonsplit_data_is_not_judged() {
        let g = RootDatum::sl(2).with_frobenius(vec![vec![-1]]).unwrap();
        let fan = Fan::new(&g, &Levi::torus());
        let prof = ValuationProfile::constant(&g, 1);
        let s = FiniteOrderTorusPoint::new(vec![rat(1, 2)]);
        let r = fundamental_lemma_check(&fan, &prof, &s, &[TorusDivisor::from_integers(&[1, 1])], None).unwrap();
        assert_eq!(r.status, "hypotheses-not-met");
        assert!(r.assumptions.iter().any(|a| a.starts_with("non-split")));
        assert!(fundamental_lemma_check(&fan, &prof, &s, &[TorusDivisor::from_integers(&[1, 2])], None).is_err());
    }

    #[test]
    fn cube_root_kappa_uses_cyclotomic_coefficients() {
        let g = RootDatum::sl(2);
        let fan = Fan::new(&g, &g.group_levi());
        let prof = ValuationProfile::constant(&g, 1);
        let s = FiniteOrderTorusPoint::new(vec![rat(1, 3)]);
        let r = fundamental_lemma_check(&fan, &prof, &s, &[TorusDivisor::zero(0)], None).unwrap();
        assert_eq!(r.stratum_size, 1);
        assert!(r.checks[0].degreewise_vanishes);
    }
}
