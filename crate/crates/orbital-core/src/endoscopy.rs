//! Endoscopic strata of a finite-order point `s ∈ T̂`, homological transfer
//! factors `Δ = Π ∂_α^{val(α)}`, the Koszul complexes they assemble into, and
//! `κ`-isotypic Frobenius traces through Tor.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Fan, TorusDivisor};
use crate::field::{frac, int, Field, Rational};
use crate::lattice::{solve_congruences, IVec, LatticeSplit};
use crate::laurent::{window_submodule, TorResult, TorSchedule};
use crate::linalg::{kernel_of_columns, sparse_from_entries, SparseMap, SparseVec, Subspace};
use crate::poly::TracePolynomial;
use crate::rootdata::RootDatum;
use crate::springer::{binomial, SpringerModule, SymAlgebra, ValuationProfile};

/// A point `s ∈ T̂` of finite order, as the homomorphism `X_*(T) → ℚ/ℤ`
/// given by its values on the coordinate basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrderTorusPoint {
    values: Vec<Rational>,
}

impl FiniteOrderTorusPoint {
    pub fn new(values: Vec<Rational>) -> Self {
        FiniteOrderTorusPoint {
            values: values.iter().map(frac).collect(),
        }
    }

    pub fn trivial(rank: usize) -> Self {
        FiniteOrderTorusPoint { values: vec![int(0); rank] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .fold(1u64, |acc, v| acc.lcm(&(v.denom().to_string().parse::<u64>().unwrap_or(1))))
    }

    /// `λ(s)` as an element of `ℚ/ℤ` in `[0, 1)`.
    pub fn eval(&self, lambda: &[i64]) -> Rational {
        frac(&lambda.iter().zip(&self.values).map(|(l, v)| int(*l) * v).sum::<Rational>())
    }

    pub fn is_tau_fixed(&self, datum: &RootDatum) -> bool {
        (0..datum.rank()).all(|i| {
            let mut e = vec![0; datum.rank()];
            e[i] = 1;
            self.eval(&datum.frobenius_on_cocharacter(&e)) == self.values[i]
        })
    }

    /// The values `κ(k) = exp(2πi·s(k))` on the basis of `X_*(S)` of `split`.
    pub fn kappa_values<F: Field>(&self, split: &LatticeSplit) -> Result<Vec<F>> {
        split
            .kernel_basis()
            .iter()
            .map(|k| {
                let v = self.eval(k);
                let order: u64 = v.denom().to_string().parse().map_err(|_| Error::TooLarge("order".into()))?;
                let power: u64 = v.numer().to_string().parse().map_err(|_| Error::TooLarge("order".into()))?;
                F::root_of_unity(order, power)
                    .ok_or_else(|| Error::Unsupported(format!("the coefficient field has no root of unity of order {order}")))
            })
            .collect()
    }

    /// Lowest common order of the values on `X_*(S)`.
    pub fn kappa_order(&self, split: &LatticeSplit) -> u64 {
        split
            .kernel_basis()
            .iter()
            .fold(1u64, |acc, k| acc.lcm(&self.eval(k).denom().to_string().parse::<u64>().unwrap_or(1)))
    }
}

/// `Φ_s = {α : α^∨(s) = 1}` as sorted root indices (both signs).
pub fn centralizer_subsystem(datum: &RootDatum, s: &FiniteOrderTorusPoint) -> Vec<usize> {
    (0..datum.num_roots()).filter(|&a| s.eval(datum.coroot(a)) == int(0)).collect()
}

/// The maximal centralizer subsystems over the coset `s · Ker(T̂ → Ŝ)`,
/// indexed by `[n] = {0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoscopicStratum {
    /// Positive roots of each `Φ_i`.
    systems: Vec<Vec<usize>>,
    /// `τ(Φ_i) = Φ_{tau_action[i]}`.
    tau_action: Vec<usize>,
    num_positive: usize,
}

/// JSON view of a stratum.
#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub n: usize,
    /// Positive coroots of each `Φ_i`.
    pub systems: Vec<Vec<IVec>>,
    pub tau_action: Vec<usize>,
    /// `d_I` keyed by the 1-based indices of `I` joined with commas.
    #[serde(rename = "d_I")]
    pub d_i: BTreeMap<String, u32>,
}

impl EndoscopicStratum {
    pub fn n(&self) -> usize {
        self.systems.len()
    }

    pub fn systems(&self) -> &[Vec<usize>] {
        &self.systems
    }

    pub fn tau_action(&self) -> &[usize] {
        &self.tau_action
    }

    /// Positive roots of `Φ_I = ∩_{i ∈ I} Φ_i` (all of `Φ_+` for `I = ∅`).
    pub fn positive_roots_of(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.num_positive)
            .filter(|a| subset.iter().all(|&i| self.systems[i].contains(a)))
            .collect()
    }

    /// `d_I = Σ_{α ∈ Φ_+ − Φ_{I,+}} val(α)`.
    pub fn d_of(&self, profile: &ValuationProfile, subset: &[usize]) -> u32 {
        let inside = self.positive_roots_of(subset);
        (0..self.num_positive).filter(|a| !inside.contains(a)).map(|a| profile.value(a)).sum()
    }

    /// Nonempty `I ⊆ [n]` with `τ(I) = I`, in increasing size then lexicographic order.
    pub fn tau_stable_subsets(&self) -> Vec<Vec<usize>> {
        (1..=self.n())
            .flat_map(|k| (0..self.n()).combinations(k))
            .filter(|i| {
                let image: BTreeSet<usize> = i.iter().map(|&x| self.tau_action[x]).collect();
                image == i.iter().copied().collect()
            })
            .collect()
    }

    pub fn report(&self, datum: &RootDatum, profile: &ValuationProfile) -> StratumReport {
        let mut d_i = BTreeMap::new();
        for k in 1..=self.n() {
            for subset in (0..self.n()).combinations(k) {
                let key = subset.iter().map(|i| (i + 1).to_string()).join(",");
                d_i.insert(key, self.d_of(profile, &subset));
            }
        }
        StratumReport {
            n: self.n(),
            systems: self
                .systems
                .iter()
                .map(|sys| sys.iter().map(|&a| datum.coroot(a).clone()).collect())
                .collect(),
            tau_action: self.tau_action.clone(),
            d_i,
        }
    }
}

/// Solutions `s′ ∈ s · Ker(T̂ → Ŝ)` with `α^∨(s′) = 1` for all `α` in `roots`,
/// returned as values on `X_*(T)`.
fn coset_point_killing(datum: &RootDatum, split: &LatticeSplit, s: &FiniteOrderTorusPoint, roots: &[usize]) -> Option<FiniteOrderTorusPoint> {
    let rows: Vec<IVec> = roots.iter().map(|&a| split.split(datum.coroot(a)).0).collect();
    // s′ agrees with s on X_*(S) and is free on the complement basis.
    let rhs: Vec<Rational> = roots
        .iter()
        .map(|&a| {
            let (_, kernel_part) = split.split(datum.coroot(a));
            let fixed: Rational = kernel_part.iter().zip(split.kernel_basis()).map(|(c, k)| int(*c) * s.eval(k)).sum();
            frac(&-fixed)
        })
        .collect();
    let theta = solve_congruences(&rows, split.complement_rank, &rhs)?;
    // values on the adapted basis → values on coordinates: s′(x) = Σ coords(x)·basis values
    let basis_values: Vec<Rational> = theta.iter().cloned().chain(split.kernel_basis().iter().map(|k| s.eval(k))).collect();
    let values = (0..datum.rank())
        .map(|i| {
            let mut e = vec![0; datum.rank()];
            e[i] = 1;
            let coords = crate::lattice::mat_vec(&split.inverse, &e);
            coords.iter().zip(&basis_values).map(|(c, v)| int(*c) * v).sum()
        })
        .collect();
    Some(FiniteOrderTorusPoint::new(values))
}

/// The stratum `𝓔_s`: maximal subsystems `Φ_{s′}` for `s′ ∈ s · Ker(T̂ → Ŝ)`.
pub fn strata(fan: &Fan, s: &FiniteOrderTorusPoint) -> Result<EndoscopicStratum> {
    let datum = fan.datum();
    if s.values().len() != datum.rank() {
        return Err(Error::InvalidInput(format!(
            "s has {} values, rank is {}",
            s.values().len(),
            datum.rank()
        )));
    }
    if !s.is_tau_fixed(datum) {
        return Err(Error::InvalidInput("s is not fixed by τ".into()));
    }
    let split = fan.lattice_split();
    let np = datum.num_positive();
    if np > 16 {
        return Err(Error::TooLarge(format!("{np} positive roots")));
    }
    let mut achieved: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mask in 0u32..(1 << np) {
        let roots: Vec<usize> = (0..np).filter(|a| mask & (1 << a) != 0).collect();
        if let Some(point) = coset_point_killing(datum, split, s, &roots) {
            let sys: Vec<usize> = centralizer_subsystem(datum, &point).into_iter().filter(|&a| a < np).collect();
            achieved.insert(sys);
        }
    }
    let systems: Vec<Vec<usize>> = achieved
        .iter()
        .filter(|a| !achieved.iter().any(|b| b != *a && a.iter().all(|x| b.contains(x))))
        .cloned()
        .collect();
    let tau_action = systems
        .iter()
        .map(|sys| {
            let mut image: Vec<usize> = sys.iter().map(|&a| datum.positive_of(datum.frobenius_on_root(a))).collect();
            image.sort_unstable();
            systems
                .iter()
                .position(|other| *other == image)
                .ok_or_else(|| Error::InvalidInput("τ does not permute the stratum".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EndoscopicStratum {
        systems,
        tau_action,
        num_positive: np,
    })
}

/// `Δ_{H′}^H = Π_{α ∈ Φ_+^H − Φ_+^{H′}} ∂_α^{val(α)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferFactor {
    /// `(positive root, exponent)` pairs.
    pub exponents: Vec<(usize, u32)>,
    pub degree: usize,
}

impl TransferFactor {
    /// `large` and `small` list positive roots of `H ⊇ H′`.
    pub fn new(large: &[usize], small: &[usize], profile: &ValuationProfile) -> Result<Self> {
        if let Some(a) = small.iter().find(|a| !large.contains(a)) {
            return Err(Error::InvalidInput(format!("root {a} of the smaller system is missing from the larger")));
        }
        let exponents: Vec<(usize, u32)> = large.iter().filter(|a| !small.contains(a)).map(|&a| (a, profile.value(a))).collect();
        let degree = exponents.iter().map(|(_, e)| *e as usize).sum();
        Ok(TransferFactor { exponents, degree })
    }

    /// The operator `𝒮_n → 𝒮_{n−degree}` (into the zero space when `n < degree`).
    pub fn on_sym(&self, datum: &RootDatum, sym: &SymAlgebra, n: usize) -> SparseMap<Rational> {
        let mut map = SparseMap {
            source_dim: sym.dim(n),
            target_dim: sym.dim(n),
            columns: (0..sym.dim(n)).map(|i| vec![(i, int(1))]).collect(),
        };
        let mut deg = n;
        for &(a, e) in &self.exponents {
            let e = e as usize;
            if e > deg {
                return SparseMap::zero(sym.dim(n), 0);
            }
            map = sym.power_derivation(datum.root(a), e, deg).compose(&map);
            deg -= e;
        }
        map
    }

    /// The operator on `Γ(D) ⊗ 𝒮_n`, acting on the 𝒮 factor.
    pub fn on_module(&self, module: &SpringerModule, n: usize) -> SparseMap<Rational> {
        let local = self.on_sym(module.fan().datum(), module.sym(), n);
        let copies = module.weights().len();
        let mut columns = Vec::with_capacity(local.source_dim * copies);
        for w in 0..copies {
            for col in &local.columns {
                columns.push(col.iter().map(|(i, c)| (w * local.target_dim + i, c.clone())).collect());
            }
        }
        SparseMap {
            source_dim: local.source_dim * copies,
            target_dim: local.target_dim * copies,
            columns,
        }
    }

    /// Checks that `Δ` maps the relations and the annihilated part of
    /// `source` in degree `n` into those of `target` (requires `X_*(S) = 0`).
    pub fn respects_presentations(&self, source: &SpringerModule, target: &SpringerModule, n: usize) -> Result<bool> {
        if n < self.degree {
            return Ok(true);
        }
        let map = self.on_module(source, n);
        let rel_t = target.relations(n - self.degree)?;
        let ker_t = target.annihilated_part(n - self.degree)?;
        let rel_ok = source.relations(n)?.basis().iter().all(|v| rel_t.contains(&map.apply(v)));
        let ker_ok = source.annihilated_part(n)?.basis().iter().all(|v| ker_t.contains(&map.apply(v)));
        Ok(rel_ok && ker_ok)
    }
}

/// `𝒦(J, I, D)`: `⊕_{K ⊆ I} L^{G_{J∪K}} e_K` with `d(a e_K) = Σ_{i ∈ I} Δ(a) e_i ∧ e_K`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    base: Vec<usize>,
    indices: Vec<usize>,
    /// `(K, module for G_{J∪K}, degree drop relative to G_J)`, grouped by `|K|`.
    terms: Vec<Vec<(Vec<usize>, SpringerModule, usize)>>,
    stratum: EndoscopicStratum,
    profile: ValuationProfile,
}

impl KoszulComplex {
    pub fn new(
        fan: &Fan,
        stratum: &EndoscopicStratum,
        base: &[usize],
        indices: &[usize],
        divisor: &TorusDivisor,
        profile: &ValuationProfile,
    ) -> Result<Self> {
        if base.iter().any(|j| indices.contains(j)) {
            return Err(Error::InvalidInput("J and I must be disjoint".into()));
        }
        let base_roots = stratum.positive_roots_of(base);
        let base_total = profile.total(&base_roots) as usize;
        let mut terms = Vec::new();
        for k in 0..=indices.len() {
            let mut layer = Vec::new();
            for subset in indices.iter().copied().combinations(k) {
                let union: Vec<usize> = base.iter().chain(&subset).copied().sorted().collect();
                let roots = stratum.positive_roots_of(&union);
                let drop = base_total - profile.total(&roots) as usize;
                layer.push((subset, SpringerModule::new(fan, divisor, profile, &roots)?, drop));
            }
            terms.push(layer);
        }
        Ok(KoszulComplex {
            base: base.to_vec(),
            indices: indices.to_vec(),
            terms,
            stratum: stratum.clone(),
            profile: profile.clone(),
        })
    }

    pub fn length(&self) -> usize {
        self.indices.len()
    }

    /// Offsets and dimensions of the position-`p` ambient space at total degree `total`.
    fn layout(&self, p: usize, total: usize) -> Vec<(usize, Option<usize>)> {
        let mut offset = 0;
        self.terms[p]
            .iter()
            .map(|(_, module, drop)| {
                let deg = total.checked_sub(*drop);
                let here = offset;
                offset += deg.map_or(0, |d| module.ambient_dim(d));
                (here, deg)
            })
            .collect()
    }

    fn ambient(&self, p: usize, total: usize) -> usize {
        self.terms[p]
            .iter()
            .map(|(_, m, drop)| total.checked_sub(*drop).map_or(0, |d| m.ambient_dim(d)))
            .sum()
    }

    /// The differential from position `p` to `p + 1` at total degree `total`,
    /// on the free ambient spaces `Γ(D) ⊗ 𝒮`.
    pub fn differential(&self, p: usize, total: usize) -> Result<SparseMap<Rational>> {
        let source_layout = self.layout(p, total);
        let target_layout = self.layout(p + 1, total);
        let source_dim = self.ambient(p, total);
        let target_dim = self.ambient(p + 1, total);
        let mut columns: Vec<SparseVec<Rational>> = vec![Vec::new(); source_dim];
        for (si, (k_set, module, _)) in self.terms[p].iter().enumerate() {
            let (s_off, Some(s_deg)) = source_layout[si] else { continue };
            let union: Vec<usize> = self.base.iter().chain(k_set).copied().sorted().collect();
            for &i in self.indices.iter().filter(|i| !k_set.contains(i)) {
                let mut bigger: Vec<usize> = k_set.clone();
                bigger.push(i);
                bigger.sort_unstable();
                let ti = self.terms[p + 1].iter().position(|(k, _, _)| *k == bigger).expect("term");
                let (t_off, Some(_)) = target_layout[ti] else { continue };
                let sign = if k_set.iter().filter(|&&x| x < i).count() % 2 == 0 {
                    int(1)
                } else {
                    int(-1)
                };
                let union_i: Vec<usize> = union.iter().copied().chain([i]).sorted().collect();
                let delta = TransferFactor::new(
                    &self.stratum.positive_roots_of(&union),
                    &self.stratum.positive_roots_of(&union_i),
                    &self.profile,
                )?;
                let map = delta.on_module(module, s_deg);
                for (c, col) in map.columns.iter().enumerate() {
                    for (r, x) in col {
                        columns[s_off + c].push((t_off + r, &sign * x));
                    }
                }
            }
        }
        Ok(SparseMap {
            source_dim,
            target_dim,
            columns: columns.into_iter().map(sparse_from_entries).collect(),
        })
    }

    /// `d ∘ d = 0` at every position for the given total degree.
    pub fn is_complex(&self, total: usize) -> Result<bool> {
        for p in 0..self.length().saturating_sub(1) {
            let first = self.differential(p, total)?;
            let second = self.differential(p + 1, total)?;
            if !second.compose(&first).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relations and annihilated parts at position `p`, as subspaces of the ambient space.
    fn presentation(&self, p: usize, total: usize) -> Result<(Subspace<Rational>, Subspace<Rational>)> {
        let layout = self.layout(p, total);
        let dim = self.ambient(p, total);
        let mut relations = Subspace::new(dim);
        let mut annihilated = Subspace::new(dim);
        for (i, (_, module, _)) in self.terms[p].iter().enumerate() {
            let (off, Some(deg)) = layout[i] else { continue };
            for v in module.relations(deg)?.basis() {
                relations.insert(crate::linalg::shift(v, off));
            }
            for v in module.annihilated_part(deg)?.basis() {
                annihilated.insert(crate::linalg::shift(v, off));
            }
        }
        Ok((annihilated.sum(&relations), relations))
    }

    /// Homology dimensions of the complex of `L`-pieces at a total degree (requires `X_*(S) = 0`).
    pub fn homology(&self, total: usize) -> Result<Vec<usize>> {
        let len = self.length();
        let pres: Vec<_> = (0..=len).map(|p| self.presentation(p, total)).collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(len + 1);
        for p in 0..=len {
            let (top, bottom) = &pres[p];
            let cycles: Vec<SparseVec<Rational>> = if p == len {
                top.basis().to_vec()
            } else {
                let d = self.differential(p, total)?;
                let next_rel = &pres[p + 1].1;
                let columns: Vec<SparseVec<Rational>> = top.basis().iter().map(|v| next_rel.reduce(&d.apply(v))).collect();
                kernel_of_columns(&columns, d.target_dim)
                    .iter()
                    .map(|combo| {
                        let mut acc = Vec::new();
                        for (i, c) in combo {
                            acc = crate::linalg::axpy(&acc, c, &top.basis()[*i]);
                        }
                        acc
                    })
                    .collect()
            };
            let mut boundaries = bottom.clone();
            if p > 0 {
                let d = self.differential(p - 1, total)?;
                for v in pres[p - 1].0.basis() {
                    boundaries.insert(d.apply(v));
                }
            }
            let mut with_cycles = boundaries.clone();
            for c in cycles {
                with_cycles.insert(c);
            }
            out.push(with_cycles.dim() - boundaries.dim());
        }
        Ok(out)
    }
}

/// Tor of every 𝒮-degree of `module` against `κ` (values on the `X_*(S)` basis).
pub fn tor_by_degree<F: Field>(module: &SpringerModule, kappa: &[F], schedule: TorSchedule) -> Result<Vec<TorResult<F>>> {
    (0..=module.max_degree()).map(|n| module.laurent_piece(n)?.tor(kappa, schedule)).collect()
}

/// `Σ_n q^n Σ_p (−1)^p trace(τ, Tor_p(κ, L_n))`.
pub fn tor_trace<F: Field>(module: &SpringerModule, kappa: &[F], schedule: TorSchedule) -> Result<TracePolynomial<F>> {
    let mut poly = TracePolynomial::zero();
    for (n, r) in tor_by_degree(module, kappa, schedule)?.iter().enumerate() {
        poly.add_term(n, &r.euler_trace());
    }
    Ok(poly)
}

/// Smallest powers of `∇` killing the kernel and cokernel of `Δ: L^H_n → L^{H′}_{n−deg}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub degree: usize,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub kernel_power: Option<usize>,
    pub cokernel_power: Option<usize>,
}

/// Windowed weight spaces of one module: relations and the annihilated part.
struct Windowed {
    width: usize,
    lo: i64,
    hi: i64,
}

impl Windowed {
    fn relations(&self, module: &SpringerModule, n: usize) -> Subspace<Rational> {
        window_submodule(&module.all_relation_generators(n), module.ambient_dim(n), self.lo, self.hi)
    }

    /// Vectors supported in `inner` whose derivatives lie in the windowed lower relations.
    fn annihilated(&self, module: &SpringerModule, n: usize, inner: (i64, i64)) -> Vec<SparseVec<Rational>> {
        let dim = module.ambient_dim(n);
        let support: Vec<usize> = (0..dim)
            .flat_map(|b| (inner.0..=inner.1).map(move |e| (b, e)))
            .map(|(b, e)| b * self.width + (e - self.lo) as usize)
            .collect();
        if n == 0 {
            return support.iter().map(|&i| vec![(i, int(1))]).collect();
        }
        let lower = self.relations(module, n - 1);
        let lower_dim = module.ambient_dim(n - 1) * self.width;
        let ders = module.derivations(n);
        let columns: Vec<SparseVec<Rational>> = support
            .iter()
            .map(|&i| {
                let (b, e) = (i / self.width, i % self.width);
                let mut entries = Vec::new();
                for (k, der) in ders.iter().enumerate() {
                    let image: SparseVec<Rational> = der.columns[b].iter().map(|(t, c)| (t * self.width + e, c.clone())).collect();
                    for (j, x) in lower.reduce(&image) {
                        entries.push((k * lower_dim + j, x));
                    }
                }
                sparse_from_entries(entries)
            })
            .collect();
        kernel_of_columns(&columns, ders.len() * lower_dim)
            .iter()
            .map(|combo| combo.iter().map(|(i, c)| (support[*i], c.clone())).collect())
            .collect()
    }

    fn lift(&self, map: &SparseMap<Rational>, v: &SparseVec<Rational>) -> SparseVec<Rational> {
        let mut entries = Vec::new();
        for (i, c) in v {
            let (b, e) = (i / self.width, i % self.width);
            for (t, x) in &map.columns[b] {
                entries.push((t * self.width + e, c * x));
            }
        }
        sparse_from_entries(entries)
    }

    /// Multiplication by `(u^shift − 1)^power`.
    fn nabla(&self, v: &SparseVec<Rational>, shift: i64, power: usize) -> Option<SparseVec<Rational>> {
        let mut entries = Vec::new();
        for k in 0..=power {
            let c = int(binomial(power, k) * if (power - k) % 2 == 0 { 1 } else { -1 });
            for (i, x) in v {
                let (b, e) = (i / self.width, (i % self.width) as i64);
                let moved = e + shift * k as i64;
                if moved < 0 || moved >= self.width as i64 {
                    return None;
                }
                entries.push((b * self.width + moved as usize, &c * x));
            }
        }
        Some(sparse_from_entries(entries))
    }
}

/// Localization check for fans without rays and `X_*(S)` of
/// rank one, where `∇ = Π (u^{α^∨} − 1)`: computes the kernel and cokernel
/// of `Δ` on the weight window `−radius..=radius` and the least power of
/// `∇` (at most `max_power`) that kills each.
pub fn localization_powers(
    source: &SpringerModule,
    target: &SpringerModule,
    delta: &TransferFactor,
    n: usize,
    radius: i64,
    max_power: usize,
) -> Result<LocalizationReport> {
    let fan = source.fan();
    if fan.num_rays() != 0 || source.s_rank() != 1 {
        return Err(Error::Unsupported(
            "localization check needs a fan without rays and X_*(S) of rank one".into(),
        ));
    }
    let datum = fan.datum();
    let split = fan.lattice_split();
    let shifts: Vec<i64> = delta.exponents.iter().map(|(a, _)| split.split(datum.coroot(*a)).1[0]).collect();
    let step: i64 = shifts.iter().map(|s| s.abs()).sum::<i64>().max(1);
    let max_prof = source.profile().values().iter().copied().max().unwrap_or(0) as i64;
    let margin = step * max_power as i64 + max_prof + 2;
    let lo = -radius - 2 * margin;
    let hi = radius + 2 * margin;
    let win = Windowed {
        width: (hi - lo + 1) as usize,
        lo,
        hi,
    };
    let inner = (-radius, radius);
    let outer = (-radius - margin, radius + margin);
    let apply_nabla = |v: &SparseVec<Rational>, e: usize| -> Option<SparseVec<Rational>> {
        let mut cur = v.clone();
        for _ in 0..e {
            for &s in &shifts {
                cur = win.nabla(&cur, s, 1)?;
            }
        }
        Some(cur)
    };
    let rel_source = win.relations(source, n);
    let ker_source = win.annihilated(source, n, inner);
    if n < delta.degree {
        let kernel_dim = Subspace::spanned_by(rel_source.ambient(), ker_source.iter()).sum(&rel_source).dim() - rel_source.dim();
        let power = (0..=max_power).find(|&e| ker_source.iter().all(|v| apply_nabla(v, e).is_some_and(|w| rel_source.contains(&w))));
        return Ok(LocalizationReport {
            degree: n,
            kernel_dim,
            cokernel_dim: 0,
            kernel_power: power,
            cokernel_power: Some(0),
        });
    }
    let m = n - delta.degree;
    let map = delta.on_module(source, n);
    let rel_target = win.relations(target, m);
    // kernel: x with Δx ∈ relations of the target
    let columns: Vec<SparseVec<Rational>> = ker_source.iter().map(|v| rel_target.reduce(&win.lift(&map, v))).collect();
    let kernel: Vec<SparseVec<Rational>> = kernel_of_columns(&columns, target.ambient_dim(m) * win.width)
        .iter()
        .map(|combo| {
            let mut acc = Vec::new();
            for (i, c) in combo {
                acc = crate::linalg::axpy(&acc, c, &ker_source[*i]);
            }
            acc
        })
        .collect();
    let kernel_dim = Subspace::spanned_by(rel_source.ambient(), kernel.iter()).sum(&rel_source).dim() - rel_source.dim();
    let kernel_power = (0..=max_power).find(|&e| kernel.iter().all(|v| apply_nabla(v, e).is_some_and(|w| rel_source.contains(&w))));
    // cokernel: L^{H′} modulo the image of a wider window of L^H
    let mut image = rel_target.clone();
    for v in win.annihilated(source, n, outer) {
        image.insert(win.lift(&map, &v));
    }
    let ker_target = win.annihilated(target, m, inner);
    let inner_image = {
        let mut s = rel_target.clone();
        for v in &ker_source {
            s.insert(win.lift(&map, v));
        }
        s
    };
    let cokernel_dim = {
        let mut s = inner_image.clone();
        for v in &ker_target {
            s.insert(v.clone());
        }
        s.dim() - inner_image.dim()
    };
    let cokernel_power = (0..=max_power).find(|&e| ker_target.iter().all(|v| apply_nabla(v, e).is_some_and(|w| image.contains(&w))));
    Ok(LocalizationReport {
        degree: n,
        kernel_dim,
        cokernel_dim,
        kernel_power,
        cokernel_power,
    })
}

/// `Σ_{I, τ(I) = I} (−1)^{|I|} e_I q^{d_I} T_I(q)` over the supplied
/// per-subset traces (`I = ∅` included), where `e_∅ = 1` and `e_I` is the
/// transfer sign otherwise. It vanishes coefficientwise exactly when the
/// endoscopic identity holds in every homological degree.
pub fn alternating_sum<F: Field>(
    profile: &ValuationProfile,
    stratum: &EndoscopicStratum,
    transfer_sign: i64,
    traces: &[(Vec<usize>, TracePolynomial<F>)],
) -> TracePolynomial<F> {
    let mut acc = TracePolynomial::zero();
    for (subset, poly) in traces {
        let parity = if subset.len() % 2 == 0 { 1 } else { -1 };
        let e = if subset.is_empty() { 1 } else { transfer_sign };
        let shifted = poly.shift(stratum.d_of(profile, subset) as usize);
        acc = acc.add(&shifted.scale(&F::from_i64(parity * e)));
    }
    acc
}

/// Positive roots of `Φ_s` itself.
pub fn positive_centralizer(datum: &RootDatum, s: &FiniteOrderTorusPoint) -> Vec<usize> {
    centralizer_subsystem(datum, s).into_iter().filter(|&a| datum.is_positive(a)).collect()
}

/// Checks `Φ_{s′} ⊆ Φ_i` for some `i`, for `s′ = s · t` with `t` running over
/// the `order`-torsion of `Ker(T̂ → Ŝ)`.
pub fn stratum_covers(fan: &Fan, s: &FiniteOrderTorusPoint, stratum: &EndoscopicStratum, order: i64) -> bool {
    let datum = fan.datum();
    let split = fan.lattice_split();
    let c = split.complement_rank;
    (0..c).map(|_| 0..order).multi_cartesian_product().all(|t| {
        let basis_values: Vec<Rational> = t
            .iter()
            .map(|x| Rational::new((*x).into(), order.into()))
            .chain(split.kernel_basis().iter().map(|k| s.eval(k)))
            .collect();
        let values: Vec<Rational> = (0..datum.rank())
            .map(|i| {
                let mut e = vec![0; datum.rank()];
                e[i] = 1;
                let coords = crate::lattice::mat_vec(&split.inverse, &e);
                coords.iter().zip(&basis_values).map(|(c, v)| int(*c) * v).sum()
            })
            .collect();
        let point = FiniteOrderTorusPoint::new(values);
        let sys = positive_centralizer(datum, &point);
        stratum.systems().iter().any(|big| sys.iter().all(|a| big.contains(a)))
    })
}
