//! Finitely presented graded pieces over the Laurent ring `ℚ[X_*(S)]` and
//! their Tor against a residue character `κ`, computed from the Koszul
//! complex on `u_i − κ_i` after truncating at powers of the maximal ideal
//! at `κ`.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{int, Field, Rational};
use crate::lattice::IVec;
use crate::linalg::{kernel_of_columns, sparse_from_entries, subquotient_trace, SparseMap, SparseVec, Subspace};

/// A vector of a free module over `ℚ[X_*(S)]`: terms `c · u^e · b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentVector {
    /// `(basis index, exponent of u in the X_*(S) basis, coefficient)`.
    pub terms: Vec<(usize, IVec, Rational)>,
}

impl LaurentVector {
    /// Merges repeated `(basis, exponent)` pairs and drops zero coefficients.
    pub fn new(terms: Vec<(usize, IVec, Rational)>) -> Self {
        let mut merged: HashMap<(usize, IVec), Rational> = HashMap::new();
        for (b, e, c) in terms {
            *merged.entry((b, e)).or_insert_with(|| int(0)) += c;
        }
        let mut terms: Vec<_> = merged
            .into_iter()
            .filter(|(_, c)| !Field::is_zero(c))
            .map(|((b, e), c)| (b, e, c))
            .collect();
        terms.sort();
        LaurentVector { terms }
    }

    /// Specialization at the trivial character `u = 1`; for `X_*(S) = 0`
    /// this is the vector itself.
    pub fn at_identity(&self) -> SparseVec<Rational> {
        sparse_from_entries(self.terms.iter().map(|(b, _, c)| (*b, c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// For `X_*(S)` of rank one: `u^shift · self` in the basis
    /// `(b, e) ↦ b · width + (e − lo)` of the weight window `lo..=hi`, or
    /// `None` if some term leaves the window.
    pub fn in_window(&self, shift: i64, lo: i64, hi: i64) -> Option<SparseVec<Rational>> {
        let width = (hi - lo + 1) as usize;
        let mut entries = Vec::with_capacity(self.terms.len());
        for (b, e, c) in &self.terms {
            let x = e[0] + shift;
            if x < lo || x > hi {
                return None;
            }
            entries.push((b * width + (x - lo) as usize, c.clone()));
        }
        Some(sparse_from_entries(entries))
    }
}

/// The part of the submodule generated by `gens` visible in the weight
/// window `lo..=hi`: all translates that fit entirely inside it.
pub fn window_submodule(gens: &[LaurentVector], free_rank: usize, lo: i64, hi: i64) -> Subspace<Rational> {
    let width = (hi - lo + 1) as usize;
    let mut s = Subspace::new(free_rank * width);
    for g in gens {
        for shift in (lo - hi)..=(hi - lo) {
            if let Some(v) = g.in_window(shift, lo, hi) {
                s.insert(v);
            }
        }
    }
    s
}

/// One 𝒮-degree `n` of a Springer module over `ℚ[X_*(S)]`: the free module
/// `V_n`, relation generators in degrees `n` and `n − 1`, and the
/// derivations `V_n → V_{n−1}` whose joint preimage of the lower relations
/// cuts out the `𝒟^+`-annihilated part.
#[derive(Clone, Debug)]
pub struct LaurentPiece {
    pub s_rank: usize,
    pub dim: usize,
    pub relations: Vec<LaurentVector>,
    pub lower_dim: usize,
    pub lower_relations: Vec<LaurentVector>,
    pub derivations: Vec<SparseMap<Rational>>,
    /// Images of the basis under `τ`, when `τ` is not the identity.
    pub tau: Option<Vec<LaurentVector>>,
}

/// Dimensions and `τ`-traces of `Tor_p(κ, L)`, `p = 0..=rank X_*(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorResult<F> {
    pub dims: Vec<usize>,
    pub traces: Vec<F>,
    /// Truncation power at which the dimensions stabilized.
    pub power: usize,
}

impl<F: Field> TorResult<F> {
    /// `Σ_p (−1)^p trace(τ | Tor_p)`.
    pub fn euler_trace(&self) -> F {
        self.traces
            .iter()
            .enumerate()
            .fold(F::zero(), |acc, (p, t)| if p % 2 == 0 { acc.add(t) } else { acc.sub(t) })
    }
}

/// When to stop raising the truncation power.
#[derive(Clone, Copy, Debug)]
pub struct TorSchedule {
    pub max_power: usize,
    /// Number of consecutive powers with equal Tor dimensions required.
    pub stable_runs: usize,
}

impl Default for TorSchedule {
    fn default() -> Self {
        TorSchedule {
            max_power: 12,
            stable_runs: 3,
        }
    }
}

/// `F[[t_1..t_s]] / (t)^level` in the variables `t_i = u_i − κ_i`.
struct Truncation<F> {
    level: usize,
    monomials: Vec<IVec>,
    index: HashMap<IVec, usize>,
    kappa: Vec<F>,
}

impl<F: Field> Truncation<F> {
    fn new(kappa: &[F], level: usize) -> Self {
        let s = kappa.len();
        let mut monomials = Vec::new();
        for deg in 0..level {
            if s == 0 {
                if deg == 0 {
                    monomials.push(Vec::new());
                }
                continue;
            }
            // exponent vectors of total degree `deg`, descending lexicographic
            let mut layer: Vec<IVec> = (0..s)
                .map(|_| 0..=deg as i64)
                .multi_cartesian_product()
                .filter(|e| e.iter().sum::<i64>() == deg as i64)
                .collect();
            layer.sort_by(|a, b| b.cmp(a));
            monomials.extend(layer);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Truncation {
            level,
            monomials,
            index,
            kappa: kappa.to_vec(),
        }
    }

    fn len(&self) -> usize {
        self.monomials.len()
    }

    /// `u^e = Π (κ_i + t_i)^{e_i}` expanded below the truncation level.
    fn expand(&self, exponent: &[i64]) -> Vec<(IVec, F)> {
        let mut acc: Vec<(IVec, F)> = vec![(vec![0; self.kappa.len()], F::one())];
        for (i, &e) in exponent.iter().enumerate() {
            let mut series = Vec::new();
            let mut binom = int(1);
            for j in 0..self.level as i64 {
                if j > 0 {
                    binom = binom * int(e - j + 1) / int(j);
                }
                if Field::is_zero(&binom) {
                    break;
                }
                let c = F::from_rational(&binom).mul(&self.kappa[i].powi(e - j));
                series.push((j, c));
            }
            let mut next = Vec::new();
            for (mono, c) in &acc {
                let deg: i64 = mono.iter().sum();
                for (j, sc) in &series {
                    if deg + j >= self.level as i64 {
                        break;
                    }
                    let mut m = mono.clone();
                    m[i] += j;
                    next.push((m, c.mul(sc)));
                }
            }
            acc = next;
        }
        acc
    }

    fn embed(&self, v: &LaurentVector) -> SparseVec<F> {
        let nm = self.len();
        let mut entries = Vec::new();
        for (b, e, c) in &v.terms {
            let c = F::from_rational(c);
            for (mono, x) in self.expand(e) {
                entries.push((b * nm + self.index[&mono], c.mul(&x)));
            }
        }
        sparse_from_entries(entries)
    }

    /// Multiplication by `t^a`.
    fn times_monomial(&self, v: &SparseVec<F>, a: &[i64]) -> SparseVec<F> {
        let nm = self.len();
        sparse_from_entries(v.iter().filter_map(|(i, x)| {
            let (b, m) = (i / nm, i % nm);
            let mut mono = self.monomials[m].clone();
            for (k, e) in a.iter().enumerate() {
                mono[k] += e;
            }
            self.index.get(&mono).map(|&j| (b * nm + j, x.clone()))
        }))
    }

    fn times_variable(&self, v: &SparseVec<F>, var: usize) -> SparseVec<F> {
        let mut a = vec![0; self.kappa.len()];
        a[var] = 1;
        self.times_monomial(v, &a)
    }

    /// The submodule generated by `gens`, as a subspace of `free_rank` copies.
    fn submodule(&self, gens: &[LaurentVector], free_rank: usize) -> Subspace<F> {
        let mut s = Subspace::new(free_rank * self.len());
        for g in gens {
            let v = self.embed(g);
            for a in &self.monomials {
                s.insert(self.times_monomial(&v, a));
            }
        }
        s
    }

    /// Reduction to a lower truncation level.
    fn project(&self, v: &SparseVec<F>, lower: &Truncation<F>) -> SparseVec<F> {
        let (nm, lm) = (self.len(), lower.len());
        v.iter()
            .filter(|(i, _)| i % nm < lm)
            .map(|(i, x)| ((i / nm) * lm + i % nm, x.clone()))
            .collect()
    }
}

/// The Koszul complex `Λ^• F^s ⊗ M` on the variables `t_i`, over a
/// truncation, with wedge bases in increasing index order.
struct Koszul<'a, F> {
    trunc: &'a Truncation<F>,
    block: usize,
    wedges: Vec<Vec<Vec<usize>>>,
}

impl<'a, F: Field> Koszul<'a, F> {
    fn new(trunc: &'a Truncation<F>, free_rank: usize) -> Self {
        let s = trunc.kappa.len();
        let wedges = (0..=s).map(|p| (0..s).combinations(p).collect()).collect();
        Koszul {
            trunc,
            block: free_rank * trunc.len(),
            wedges,
        }
    }

    fn ambient(&self, p: usize) -> usize {
        self.wedges[p].len() * self.block
    }

    fn place(&self, v: &SparseVec<F>, wedge: usize) -> SparseVec<F> {
        v.iter().map(|(i, x)| (wedge * self.block + i, x.clone())).collect()
    }

    /// `d(v e_J) = Σ_k (−1)^k t_{j_k} v e_{J ∖ j_k}`.
    fn differential(&self, v: &SparseVec<F>, p: usize, wedge: usize) -> SparseVec<F> {
        let j = &self.wedges[p][wedge];
        let mut entries = Vec::new();
        for (k, &var) in j.iter().enumerate() {
            let mut face = j.clone();
            face.remove(k);
            let target = self.wedges[p - 1].iter().position(|w| *w == face).expect("face");
            let sign = if k % 2 == 0 { F::one() } else { F::one().neg() };
            for (i, x) in self.trunc.times_variable(v, var) {
                entries.push((target * self.block + i, sign.mul(&x)));
            }
        }
        sparse_from_entries(entries)
    }

    /// `W ⊗ Λ^p`.
    fn tensor(&self, w: &Subspace<F>, p: usize) -> Subspace<F> {
        let mut s = Subspace::new(self.ambient(p));
        for j in 0..self.wedges[p].len() {
            for r in w.basis() {
                s.insert(self.place(r, j));
            }
        }
        s
    }
}

/// Data of one truncation level: the approximation of the annihilated part
/// and the relation submodule.
struct Level<F> {
    trunc: Truncation<F>,
    kernel: Subspace<F>,
    relations: Subspace<F>,
}

impl LaurentPiece {
    /// The annihilated part at `level`, projected to each of `targets`.
    fn kernel_projections<F: Field>(&self, kappa: &[F], level: usize, targets: &[usize]) -> Vec<Level<F>> {
        let top = Truncation::new(kappa, level);
        let nm = top.len();
        let full_dim = self.dim * nm;
        let kernel_vectors: Vec<SparseVec<F>> = if self.derivations.is_empty() {
            (0..full_dim).map(|i| vec![(i, F::one())]).collect()
        } else {
            let lower = top.submodule(&self.lower_relations, self.lower_dim);
            let block = self.lower_dim * nm;
            let columns: Vec<SparseVec<F>> = (0..full_dim)
                .map(|col| {
                    let (b, m) = (col / nm, col % nm);
                    let mut entries = Vec::new();
                    for (i, der) in self.derivations.iter().enumerate() {
                        let image: SparseVec<F> = der.columns[b].iter().map(|(t, c)| (t * nm + m, F::from_rational(c))).collect();
                        for (k, x) in lower.reduce(&sparse_from_entries(image)) {
                            entries.push((i * block + k, x));
                        }
                    }
                    sparse_from_entries(entries)
                })
                .collect();
            kernel_of_columns(&columns, self.derivations.len() * block)
        };
        targets
            .iter()
            .map(|&t| {
                let trunc = Truncation::new(kappa, t);
                let kernel = Subspace::spanned_by(
                    self.dim * trunc.len(),
                    kernel_vectors.iter().map(|v| top.project(v, &trunc)).collect::<Vec<_>>().iter(),
                );
                let relations = trunc.submodule(&self.relations, self.dim);
                Level {
                    trunc,
                    kernel: kernel.sum(&relations),
                    relations,
                }
            })
            .collect()
    }

    fn tau_at<F: Field>(&self, trunc: &Truncation<F>, v: &SparseVec<F>, images: &[SparseVec<F>]) -> SparseVec<F> {
        let nm = trunc.len();
        let mut acc: SparseVec<F> = Vec::new();
        for (i, x) in v {
            let (b, m) = (i / nm, i % nm);
            let moved = trunc.times_monomial(&images[b], &trunc.monomials[m]);
            acc = crate::linalg::axpy(&acc, x, &moved);
        }
        acc
    }

    /// Homology of the Koszul complex at truncation `k`, with cycles lifted from `2k`.
    fn koszul_homology<F: Field>(&self, kappa: &[F], k: usize, with_traces: bool) -> (Vec<usize>, Vec<F>) {
        let levels = self.kernel_projections(kappa, 3 * k, &[k, 2 * k]);
        let (low, high) = (&levels[0], &levels[1]);
        let s = kappa.len();
        let kos_low = Koszul::new(&low.trunc, self.dim);
        let kos_high = Koszul::new(&high.trunc, self.dim);
        let tau_images: Option<Vec<SparseVec<F>>> = self
            .tau
            .as_ref()
            .filter(|_| with_traces)
            .map(|imgs| imgs.iter().map(|g| low.trunc.embed(g)).collect());
        let mut dims = Vec::with_capacity(s + 1);
        let mut traces = Vec::with_capacity(s + 1);
        for p in 0..=s {
            // cycles at the high level
            let sources: Vec<(usize, SparseVec<F>)> = (0..kos_high.wedges[p].len())
                .flat_map(|j| high.kernel.basis().iter().map(move |r| (j, r.clone())))
                .collect();
            let cycles: Vec<SparseVec<F>> = if p == 0 {
                sources.iter().map(|(j, r)| kos_high.place(r, *j)).collect()
            } else {
                let rel_below = kos_high.tensor(&high.relations, p - 1);
                let columns: Vec<SparseVec<F>> = sources.iter().map(|(j, r)| rel_below.reduce(&kos_high.differential(r, p, *j))).collect();
                kernel_of_columns(&columns, kos_high.ambient(p - 1))
                    .iter()
                    .map(|combo| {
                        let mut acc: SparseVec<F> = Vec::new();
                        for (idx, c) in combo {
                            let (j, r) = &sources[*idx];
                            acc = crate::linalg::axpy(&acc, c, &kos_high.place(r, *j));
                        }
                        acc
                    })
                    .collect()
            };
            // boundaries at the low level
            let mut bottom = kos_low.tensor(&low.relations, p);
            if p < s {
                for j in 0..kos_low.wedges[p + 1].len() {
                    for r in low.kernel.basis() {
                        bottom.insert(kos_low.differential(r, p + 1, j));
                    }
                }
            }
            let mut top = bottom.clone();
            for c in &cycles {
                let projected: SparseVec<F> = c
                    .iter()
                    .filter_map(|(i, x)| {
                        let (j, rest) = (i / kos_high.block, i % kos_high.block);
                        let v = high.trunc.project(&vec![(rest, x.clone())], &low.trunc);
                        v.first().map(|(r, x)| (j * kos_low.block + r, x.clone()))
                    })
                    .collect();
                top.insert(sparse_from_entries(projected));
            }
            dims.push(top.dim() - bottom.dim());
            let trace = match &tau_images {
                None => F::from_i64((top.dim() - bottom.dim()) as i64),
                Some(images) => subquotient_trace(&top, &bottom, |v| {
                    let mut out = Vec::new();
                    for j in 0..kos_low.wedges[p].len() {
                        let part: SparseVec<F> = v
                            .iter()
                            .filter(|(i, _)| i / kos_low.block == j)
                            .map(|(i, x)| (i % kos_low.block, x.clone()))
                            .collect();
                        out.extend(kos_low.place(&self.tau_at(&low.trunc, &part, images), j));
                    }
                    out
                }),
            };
            traces.push(trace);
        }
        (dims, traces)
    }

    /// `Tor_p^{ℚ[X_*(S)]}(κ, L)` for `L` the annihilated part modulo relations.
    pub fn tor<F: Field>(&self, kappa: &[F], schedule: TorSchedule) -> Result<TorResult<F>> {
        if kappa.len() != self.s_rank {
            return Err(Error::InvalidInput(format!(
                "κ has {} values, X_*(S) has rank {}",
                kappa.len(),
                self.s_rank
            )));
        }
        if kappa.iter().any(Field::is_zero) {
            return Err(Error::InvalidInput("κ must take invertible values".into()));
        }
        if self.dim == 0 {
            return Ok(TorResult {
                dims: vec![0; self.s_rank + 1],
                traces: vec![F::zero(); self.s_rank + 1],
                power: 0,
            });
        }
        let mut history: Vec<Vec<usize>> = Vec::new();
        for k in 1..=schedule.max_power {
            let (dims, _) = self.koszul_homology(kappa, k, false);
            history.push(dims);
            let n = history.len();
            if n >= schedule.stable_runs && history[n - schedule.stable_runs..].iter().all_equal() {
                let (dims, traces) = self.koszul_homology(kappa, k, true);
                return Ok(TorResult { dims, traces, power: k });
            }
        }
        Err(Error::NotStabilized(format!(
            "Tor dimensions {:?} did not stabilize by power {}",
            history.last(),
            schedule.max_power
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    /// `ℚ[u^±] / (1 − u)^e`, a single generator in degree 0.
    fn torsion_piece(e: usize) -> LaurentPiece {
        let terms = (0..=e)
            .map(|k| {
                let b = crate::springer::binomial(e, k) * if k % 2 == 0 { 1 } else { -1 };
                (0, vec![k as i64], int(b))
            })
            .collect();
        LaurentPiece {
            s_rank: 1,
            dim: 1,
            relations: vec![LaurentVector::new(terms)],
            lower_dim: 0,
            lower_relations: Vec::new(),
            derivations: Vec::new(),
            tau: None,
        }
    }

    #[test]
    fn series_expansion_of_inverse() {
        let t = Truncation::new(&[int(2)], 4);
        // u^{-1} = 1/(2 + t) = 1/2 − t/4 + t²/8 − t³/16
        let e = t.expand(&[-1]);
        let coeffs: Vec<Rational> = e.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(coeffs, vec![rat(1, 2), rat(-1, 4), rat(1, 8), rat(-1, 16)]);
    }

    #[test]
    fn free_module_has_one_dimensional_tor_zero() {
        let free = LaurentPiece {
            relations: Vec::new(),
            ..torsion_piece(1)
        };
        for kappa in [int(1), int(-1), int(3)] {
            let r = free.tor(&[kappa], TorSchedule::default()).unwrap();
            assert_eq!(r.dims, vec![1, 0]);
        }
    }

    #[test]
    fn torsion_module_supported_at_one() {
        for e in 1..4 {
            let m = torsion_piece(e);
            let at_one = m.tor(&[int(1)], TorSchedule::default()).unwrap();
            assert_eq!(at_one.dims, vec![1, 1]);
            assert_eq!(at_one.euler_trace(), int(0));
            let away = m.tor(&[int(-1)], TorSchedule::default()).unwrap();
            assert_eq!(away.dims, vec![0, 0]);
        }
    }

    #[test]
    fn two_variable_koszul_of_free_module() {
        let free = LaurentPiece {
            s_rank: 2,
            dim: 1,
            relations: Vec::new(),
            lower_dim: 0,
            lower_relations: Vec::new(),
            derivations: Vec::new(),
            tau: None,
        };
        let r = free.tor(&[int(1), int(-1)], TorSchedule::default()).unwrap();
        assert_eq!(r.dims, vec![1, 0, 0]);
    }

    #[test]
    fn wrong_kappa_length_is_rejected() {
        assert!(torsion_piece(1).tor::<Rational>(&[], TorSchedule::default()).is_err());
    }
}
