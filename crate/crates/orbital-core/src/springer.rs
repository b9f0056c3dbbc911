//! Homology of truncated affine Springer fibers through the GKM-type
//! presentation `Γ(D) ⊗ 𝒮 / Σ R_{α,d}`.
//!
//! The element `γ` enters only through its [`ValuationProfile`]. When
//! `X_*(S) = 0` everything is finite-dimensional and Betti numbers are read
//! off directly; otherwise each 𝒮-degree is a finitely presented module over
//! `ℚ[X_*(S)]`, exported as a [`LaurentPiece`] for Tor computations.

use std::collections::HashMap;

use serde::Serialize;

use crate::cox::CoxRing;
use crate::error::{Error, Result};
use crate::fan::{Fan, TorusDivisor};
use crate::field::{int, Rational};
use crate::lattice::{iadd, iscale, isub, IMat, IVec};
use crate::laurent::{LaurentPiece, LaurentVector};
use crate::linalg::{kernel_of_columns, sparse_from_entries, subquotient_trace, SparseMap, SparseVec, Subspace};
use crate::poly::CountPolynomial;
use crate::rootdata::RootDatum;

/// `α ↦ val(α(γ))` on positive roots, extended by `val(−α) = val(α)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationProfile {
    values: Vec<u32>,
}

impl ValuationProfile {
    /// `values[i]` is the valuation on the `i`-th positive root.
    pub fn new(datum: &RootDatum, values: Vec<u32>) -> Result<Self> {
        if values.len() != datum.num_positive() {
            return Err(Error::InvalidInput(format!(
                "profile has {} values, group has {} positive roots",
                values.len(),
                datum.num_positive()
            )));
        }
        Ok(ValuationProfile { values })
    }

    pub fn constant(datum: &RootDatum, value: u32) -> Self {
        ValuationProfile {
            values: vec![value; datum.num_positive()],
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Valuation on the root with index `root` (either sign).
    pub fn value(&self, root: usize) -> u32 {
        self.values[root % self.values.len()]
    }

    pub fn is_equivalued(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `Σ val(α)` over the given positive roots.
    pub fn total(&self, positive_roots: &[usize]) -> u32 {
        positive_roots.iter().map(|&a| self.value(a)).sum()
    }

    /// The profile of `Ad(w)γ`: `val(α(Ad(w)γ)) = val((w⁻¹α)(γ))`.
    pub fn conjugate(&self, datum: &RootDatum, weyl_index: usize) -> Self {
        let w = &datum.weyl_group()[weyl_index];
        let np = datum.num_positive();
        let mut values = vec![0; np];
        for (a, slot) in values.iter_mut().enumerate() {
            let pre = (0..datum.num_roots())
                .find(|&b| w.root_permutation[b] == a)
                .expect("Weyl elements permute roots");
            *slot = self.value(pre);
        }
        ValuationProfile { values }
    }
}

/// The symmetric algebra `𝒮 = Sym(X_*(T) ⊗ ℚ)` in the coordinate basis.
#[derive(Clone, Debug)]
pub struct SymAlgebra {
    rank: usize,
}

impl SymAlgebra {
    pub fn new(rank: usize) -> Self {
        SymAlgebra { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponent vectors of the degree-`n` monomials, in descending lexicographic order.
    pub fn monomials(&self, n: usize) -> Vec<IVec> {
        fn fill(rank: usize, pos: usize, left: i64, cur: &mut IVec, out: &mut Vec<IVec>) {
            if pos + 1 == rank {
                cur[pos] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                fill(rank, pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        if self.rank == 0 {
            return if n == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        fill(self.rank, 0, n as i64, &mut vec![0; self.rank], &mut out);
        out
    }

    pub fn dim(&self, n: usize) -> usize {
        self.monomials(n).len()
    }

    fn index(&self, n: usize) -> HashMap<IVec, usize> {
        self.monomials(n).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    /// The derivation `∂_χ : 𝒮_n → 𝒮_{n−1}`, `∂_χ(λ) = ⟨χ, λ⟩`.
    pub fn derivation(&self, chi: &[i64], n: usize) -> SparseMap<Rational> {
        let source = self.monomials(n);
        if n == 0 {
            return SparseMap::zero(source.len(), 0);
        }
        let target = self.index(n - 1);
        let columns = source
            .iter()
            .map(|m| {
                sparse_from_entries((0..self.rank).filter(|&i| m[i] > 0 && chi[i] != 0).map(|i| {
                    let mut lower = m.clone();
                    lower[i] -= 1;
                    (target[&lower], int(chi[i] * m[i]))
                }))
            })
            .collect();
        SparseMap {
            source_dim: source.len(),
            target_dim: target.len(),
            columns,
        }
    }

    /// `∂_χ^d : 𝒮_n → 𝒮_{n−d}` (the zero map into a zero space when `d > n`).
    pub fn power_derivation(&self, chi: &[i64], d: usize, n: usize) -> SparseMap<Rational> {
        if d > n {
            return SparseMap::zero(self.dim(n), 0);
        }
        let mut map = SparseMap {
            source_dim: self.dim(n),
            target_dim: self.dim(n),
            columns: (0..self.dim(n)).map(|i| vec![(i, int(1))]).collect(),
        };
        for k in 0..d {
            map = self.derivation(chi, n - k).compose(&map);
        }
        map
    }

    /// A basis of `ker(∂_α^d) ∩ 𝒮_n`.
    pub fn ker_power_derivation(&self, alpha: &[i64], d: usize, n: usize) -> Vec<SparseVec<Rational>> {
        let map = self.power_derivation(alpha, d, n);
        kernel_of_columns(&map.columns, map.target_dim)
    }

    /// The action on `𝒮_n` of the linear map of `X_*(T)` with the given
    /// matrix (column `i` is the image of the `i`-th coordinate vector).
    pub fn linear_action(&self, matrix: &IMat, n: usize) -> SparseMap<Rational> {
        let index = self.index(n);
        let columns = self
            .monomials(n)
            .iter()
            .map(|m| {
                let mut poly: HashMap<IVec, Rational> = HashMap::from([(vec![0; self.rank], int(1))]);
                for (i, &e) in m.iter().enumerate() {
                    for _ in 0..e {
                        let mut next: HashMap<IVec, Rational> = HashMap::new();
                        for (mono, c) in &poly {
                            for (j, row) in matrix.iter().enumerate() {
                                if row[i] == 0 {
                                    continue;
                                }
                                let mut up = mono.clone();
                                up[j] += 1;
                                *next.entry(up).or_insert_with(|| int(0)) += c * int(row[i]);
                            }
                        }
                        poly = next;
                    }
                }
                sparse_from_entries(poly.into_iter().map(|(mono, c)| (index[&mono], c)))
            })
            .collect();
        SparseMap {
            source_dim: index.len(),
            target_dim: index.len(),
            columns,
        }
    }
}

/// Betti numbers `b_{2n}` and the Frobenius trace polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    /// `betti[n] = dim H_{2n}`; odd-degree homology vanishes.
    pub betti: Vec<usize>,
    /// `Σ_n trace(τ | H_{2n}) q^n`.
    pub trace_poly: Vec<i64>,
    pub assumptions: Vec<String>,
}

impl BettiTable {
    pub fn total(&self) -> usize {
        self.betti.iter().sum()
    }

    pub fn count_polynomial(&self) -> CountPolynomial {
        CountPolynomial::new(self.trace_poly.clone())
    }
}

/// The presentation `Γ(D) ⊗ 𝒮_• / Σ_{α ∈ Φ_+^H} Σ_{d ≤ val(α)} R_{α,d}` for a
/// root subsystem `H ⊆ G`, with `Γ(D)` taken modulo `X_*(S)`.
#[derive(Clone, Debug)]
pub struct SpringerModule {
    cox: CoxRing,
    divisor: IVec,
    profile: ValuationProfile,
    subsystem: Vec<usize>,
    weights: Vec<IVec>,
    index: HashMap<IVec, usize>,
    sym: SymAlgebra,
}

/// Where a cocharacter lands: the weight index of its coset and its `X_*(S)` offset.
type Location = (usize, IVec);

impl SpringerModule {
    /// `subsystem` lists the positive roots of `H` (all of `Φ_+^G` for `H = G`).
    pub fn new(fan: &Fan, divisor: &TorusDivisor, profile: &ValuationProfile, subsystem: &[usize]) -> Result<Self> {
        Self::with_cox(CoxRing::new(fan), divisor, profile, subsystem)
    }

    /// Uses the given Cox ring, i.e. a specific projector `λ ↦ λ_S`.
    pub fn with_cox(cox: CoxRing, divisor: &TorusDivisor, profile: &ValuationProfile, subsystem: &[usize]) -> Result<Self> {
        let datum = cox.fan().datum();
        if profile.values().len() != datum.num_positive() {
            return Err(Error::InvalidInput("profile does not match the group".into()));
        }
        if let Some(&bad) = subsystem.iter().find(|&&a| !datum.is_positive(a)) {
            return Err(Error::InvalidInput(format!("root {bad} is not positive")));
        }
        let piece = cox.graded_piece(divisor, true)?;
        let split = cox.split().clone();
        let index = piece.weights.iter().enumerate().map(|(i, w)| (split.split(w).0, i)).collect();
        let divisor = divisor
            .to_integers()
            .ok_or_else(|| Error::InvalidDivisor("divisor must have integer coefficients".into()))?;
        let sym = SymAlgebra::new(datum.rank());
        Ok(SpringerModule {
            cox,
            divisor,
            profile: profile.clone(),
            subsystem: subsystem.to_vec(),
            weights: piece.weights,
            index,
            sym,
        })
    }

    pub fn fan(&self) -> &Fan {
        self.cox.fan()
    }

    fn datum(&self) -> &RootDatum {
        self.cox.fan().datum()
    }

    pub fn profile(&self) -> &ValuationProfile {
        &self.profile
    }

    pub fn subsystem(&self) -> &[usize] {
        &self.subsystem
    }

    pub fn divisor(&self) -> &[i64] {
        &self.divisor
    }

    /// Representatives of `Γ(D)` modulo `X_*(S)`.
    pub fn weights(&self) -> &[IVec] {
        &self.weights
    }

    pub fn s_rank(&self) -> usize {
        self.cox.split().kernel_rank
    }

    pub fn sym(&self) -> &SymAlgebra {
        &self.sym
    }

    /// `Σ_{α ∈ Φ_+^H} val(α)`, the dimension of the fiber.
    pub fn max_degree(&self) -> usize {
        self.profile.total(&self.subsystem) as usize
    }

    /// Rank over `ℚ[X_*(S)]` of `Γ(D) ⊗ 𝒮_n`.
    pub fn ambient_dim(&self, n: usize) -> usize {
        self.weights.len() * self.sym.dim(n)
    }

    fn locate(&self, lambda: &[i64]) -> Option<Location> {
        let (comp, ker) = self.cox.split().split(lambda);
        self.index
            .get(&comp)
            .map(|&w| (w, isub(&ker, &self.cox.split().split(&self.weights[w]).1)))
    }

    /// Generators over `ℚ[X_*(S)]` of `R_{α,d}` in 𝒮-degree `n`, one per
    /// admissible coset representative and kernel basis vector.
    pub fn relation_generators(&self, root: usize, d: usize, n: usize) -> Vec<LaurentVector> {
        let datum = self.datum();
        let coroot = datum.coroot(root).clone();
        let kernel = self.sym.ker_power_derivation(datum.root(root), d, n);
        if kernel.is_empty() {
            return Vec::new();
        }
        let block = self.sym.dim(n);
        let mut out = Vec::new();
        for lambda in &self.weights {
            let chain: Option<Vec<Location>> = (0..=d as i64).map(|k| self.locate(&iadd(lambda, &iscale(k, &coroot)))).collect();
            let Some(chain) = chain else { continue };
            for f in &kernel {
                let mut terms = Vec::new();
                for (k, (w, s)) in chain.iter().enumerate() {
                    let binom = binomial(d, k) * if k % 2 == 0 { 1 } else { -1 };
                    for (m, c) in f {
                        terms.push((w * block + m, s.clone(), c * int(binom)));
                    }
                }
                out.push(LaurentVector::new(terms));
            }
        }
        out
    }

    fn require_finite(&self) -> Result<()> {
        if self.s_rank() > 0 {
            return Err(Error::Unsupported(
                "finite-dimensional pieces need X_*(S) = 0; use the Laurent pieces instead".into(),
            ));
        }
        Ok(())
    }

    /// `R_{α,d}` in 𝒮-degree `n` as a subspace of `Γ(D) ⊗ 𝒮_n` (requires `X_*(S) = 0`).
    pub fn relation_space(&self, root: usize, d: usize, n: usize) -> Result<Subspace<Rational>> {
        self.require_finite()?;
        if d == 0 || d as u32 > self.profile.value(root) {
            return Err(Error::InvalidInput(format!(
                "relation exponent {d} outside 1..={}",
                self.profile.value(root)
            )));
        }
        let gens = self.relation_generators(root, d, n);
        Ok(Subspace::spanned_by(
            self.ambient_dim(n),
            gens.iter().map(LaurentVector::at_identity).collect::<Vec<_>>().iter(),
        ))
    }

    /// All relation generators in degree `n`.
    pub fn all_relation_generators(&self, n: usize) -> Vec<LaurentVector> {
        let mut out = Vec::new();
        for &a in &self.subsystem {
            for d in 1..=self.profile.value(a) as usize {
                out.extend(self.relation_generators(a, d, n));
            }
        }
        out
    }

    /// `Σ_α Σ_d R_{α,d}` in degree `n` (requires `X_*(S) = 0`).
    pub fn relations(&self, n: usize) -> Result<Subspace<Rational>> {
        self.require_finite()?;
        let gens: Vec<SparseVec<Rational>> = self.all_relation_generators(n).iter().map(LaurentVector::at_identity).collect();
        Ok(Subspace::spanned_by(self.ambient_dim(n), gens.iter()))
    }

    /// `∂_{e_i} ⊗ id` from `Γ(D) ⊗ 𝒮_n` to `Γ(D) ⊗ 𝒮_{n−1}`, for each coordinate character.
    pub fn derivations(&self, n: usize) -> Vec<SparseMap<Rational>> {
        let rank = self.sym.rank();
        (0..rank)
            .map(|i| {
                let mut chi = vec![0; rank];
                chi[i] = 1;
                let local = self.sym.derivation(&chi, n);
                block_diagonal(&local, self.weights.len())
            })
            .collect()
    }

    /// Equivariant homology in degree `n`: the relation subspace and the
    /// ambient dimension (requires `X_*(S) = 0`).
    pub fn equivariant_dim(&self, n: usize) -> Result<usize> {
        Ok(self.ambient_dim(n) - self.relations(n)?.dim())
    }

    /// Preimage `K_n` of the `𝒟^+`-annihilated part: vectors all of whose
    /// first derivatives lie in the relations one degree down.
    pub fn annihilated_part(&self, n: usize) -> Result<Subspace<Rational>> {
        self.require_finite()?;
        let dim = self.ambient_dim(n);
        if n == 0 {
            return Ok(Subspace::full(dim));
        }
        let lower = self.relations(n - 1)?;
        let lower_dim = self.ambient_dim(n - 1);
        let ders = self.derivations(n);
        let columns: Vec<SparseVec<Rational>> = (0..dim)
            .map(|b| {
                let mut entries = Vec::new();
                for (i, der) in ders.iter().enumerate() {
                    for (c, x) in lower.reduce(&der.columns[b]) {
                        entries.push((i * lower_dim + c, x));
                    }
                }
                sparse_from_entries(entries)
            })
            .collect();
        let kernel = kernel_of_columns(&columns, ders.len() * lower_dim);
        Ok(Subspace::spanned_by(dim, kernel.iter()))
    }

    /// The action of `τ` on `Γ(D) ⊗ 𝒮_n` (requires `X_*(S) = 0` and a
    /// `τ`-stable divisor).
    pub fn frobenius_action(&self, n: usize) -> Result<SparseMap<Rational>> {
        self.tau_images(n).map(|images| SparseMap {
            source_dim: self.ambient_dim(n),
            target_dim: self.ambient_dim(n),
            columns: images.iter().map(LaurentVector::at_identity).collect(),
        })
    }

    /// Images of the basis of `Γ(D) ⊗ 𝒮_n` under `τ`, as Laurent vectors.
    pub fn tau_images(&self, n: usize) -> Result<Vec<LaurentVector>> {
        let datum = self.datum();
        let fan = self.fan();
        let perm = fan
            .frobenius_on_rays()
            .ok_or_else(|| Error::Unsupported("τ does not permute the rays".into()))?;
        let stable = (0..perm.len()).all(|i| self.divisor[perm[i]] == self.divisor[i]);
        if !stable {
            return Err(Error::InvalidDivisor("divisor is not τ-stable".into()));
        }
        let matrix = datum.frobenius().clone();
        let on_sym = self.sym.linear_action(&matrix, n);
        let block = self.sym.dim(n);
        let mut out = Vec::with_capacity(self.ambient_dim(n));
        for lambda in &self.weights {
            let image = datum.frobenius_on_cocharacter(lambda);
            let (w, s) = self.locate(&image).ok_or_else(|| Error::InvalidDivisor("Γ(D) is not τ-stable".into()))?;
            for m in 0..block {
                let terms = on_sym.columns[m].iter().map(|(j, c)| (w * block + j, s.clone(), c.clone())).collect();
                out.push(LaurentVector::new(terms));
            }
        }
        Ok(out)
    }

    pub fn assumptions(&self) -> Vec<String> {
        let mut a = vec!["purity".to_string(), "tate-twist: trace on degree n carries q^n".to_string()];
        if !self.profile.is_equivalued() {
            a.push("conjectural: profile is not equivalued".to_string());
        }
        a
    }

    /// Betti numbers `b_{2n} = dim L_n[D]` and the trace of `τ` (requires `X_*(S) = 0`).
    pub fn ordinary_homology(&self) -> Result<BettiTable> {
        self.require_finite()?;
        let top = self.max_degree();
        let mut betti = Vec::with_capacity(top + 1);
        let mut trace = Vec::with_capacity(top + 1);
        let split = self.datum().is_split();
        for n in 0..=top {
            let relations = self.relations(n)?;
            let kernel = self.annihilated_part(n)?.sum(&relations);
            betti.push(kernel.dim() - relations.dim());
            if split {
                trace.push((kernel.dim() - relations.dim()) as i64);
            } else {
                let tau = self.frobenius_action(n)?;
                let t = subquotient_trace(&kernel, &relations, |v| tau.apply(v));
                let t = crate::field::to_i64(&t).ok_or_else(|| Error::InvalidInput("non-integral Frobenius trace".into()))?;
                trace.push(t);
            }
        }
        while betti.len() > 1 && betti.last() == Some(&0) {
            betti.pop();
        }
        Ok(BettiTable {
            betti,
            trace_poly: CountPolynomial::new(trace).coefficients().to_vec(),
            assumptions: self.assumptions(),
        })
    }

    /// Betti number in one degree, including degrees above the dimension bound.
    pub fn betti_in_degree(&self, n: usize) -> Result<usize> {
        let relations = self.relations(n)?;
        let kernel = self.annihilated_part(n)?.sum(&relations);
        Ok(kernel.dim() - relations.dim())
    }

    /// The degree-`n` piece as a module over `ℚ[X_*(S)]`, for Tor computations.
    pub fn laurent_piece(&self, n: usize) -> Result<LaurentPiece> {
        let lower = if n == 0 { Vec::new() } else { self.all_relation_generators(n - 1) };
        let tau = if self.datum().is_split() { None } else { Some(self.tau_images(n)?) };
        Ok(LaurentPiece {
            s_rank: self.s_rank(),
            dim: self.ambient_dim(n),
            relations: self.all_relation_generators(n),
            lower_dim: if n == 0 { 0 } else { self.ambient_dim(n - 1) },
            lower_relations: lower,
            derivations: if n == 0 { Vec::new() } else { self.derivations(n) },
            tau,
        })
    }
}

/// `⊕_{copies} local`.
fn block_diagonal(local: &SparseMap<Rational>, copies: usize) -> SparseMap<Rational> {
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

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}
