//! Root data, Weyl groups, Levi and parabolic subsets, and the rational
//! spaces `a_T`, `a_M`, `a_M^G`, `a_T^M` with their projectors.
//!
//! Characters `X^*(T)` and cocharacters `X_*(T)` are both `ℤ^rank`, paired by
//! the dot product. Weyl group elements act on cocharacters by integer
//! matrices `x ↦ A x`, and on characters by `χ ↦ χ A^{-1}`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::lattice::{identity, idot, iscale, isub, mat_mul, mat_vec, IMat, IVec};
use crate::linalg::dense::{self, QMat, QVec};

/// JSON input format for a root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumSpec {
    pub rank: usize,
    pub simple_roots: Vec<IVec>,
    pub simple_coroots: Vec<IVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<IMat>,
}

/// A Weyl group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on cocharacters: `x ↦ matrix · x`.
    pub matrix: IMat,
    /// Inverse matrix; characters transform as `χ ↦ χ · inverse`.
    pub inverse: IMat,
    /// Induced permutation of root indices.
    pub root_permutation: Vec<usize>,
}

/// A reduced root datum with a finite-order lattice automorphism τ.
#[derive(Clone, Debug)]
pub struct RootDatum {
    rank: usize,
    simple_roots: Vec<IVec>,
    simple_coroots: Vec<IVec>,
    roots: Vec<IVec>,
    coroots: Vec<IVec>,
    simple_coefficients: Vec<IVec>,
    num_positive: usize,
    root_index: HashMap<IVec, usize>,
    coroot_index: HashMap<IVec, usize>,
    weyl: Vec<WeylElement>,
    frobenius: IMat,
    frobenius_order: usize,
    frobenius_root_permutation: Vec<usize>,
}

fn row_times(v: &[i64], m: &[IVec]) -> IVec {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum()).collect()
}

fn integer_inverse(m: &[IVec]) -> Option<IMat> {
    let q: QMat = m.iter().map(|r| dense::qvec(r)).collect();
    let inv = dense::inverse(&q)?;
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None })
                .collect::<Option<IVec>>()
        })
        .collect()
}

impl RootDatum {
    /// Validates and completes a datum from simple roots and coroots.
    pub fn new(spec: &RootDatumSpec) -> Result<Self> {
        let r = spec.rank;
        let l = spec.simple_roots.len();
        if spec.simple_coroots.len() != l {
            return Err(Error::InvalidRootDatum(format!(
                "{} simple roots but {} simple coroots",
                l,
                spec.simple_coroots.len()
            )));
        }
        if spec.simple_roots.iter().chain(&spec.simple_coroots).any(|v| v.len() != r) {
            return Err(Error::InvalidRootDatum(format!("vectors must have length {r}")));
        }
        for i in 0..l {
            for j in 0..l {
                let a = idot(&spec.simple_roots[j], &spec.simple_coroots[i]);
                if i == j && a != 2 {
                    return Err(Error::InvalidRootDatum(format!("<α_{i}, α_{i}^∨> = {a}, expected 2")));
                }
                if i != j {
                    let b = idot(&spec.simple_roots[i], &spec.simple_coroots[j]);
                    if a > 0 || (a == 0) != (b == 0) {
                        return Err(Error::InvalidRootDatum(format!(
                            "Cartan entries ({i},{j}) = {a}, ({j},{i}) = {b} are not those of a root system"
                        )));
                    }
                }
            }
        }
        // Simple roots must be linearly independent.
        let qs: Vec<QVec> = spec.simple_roots.iter().map(|v| dense::qvec(v)).collect();
        if dense::rank_of(&qs) != l {
            return Err(Error::InvalidRootDatum("simple roots are linearly dependent".into()));
        }

        // Generate (root, coroot) pairs by simple reflections.
        let mut pairs: Vec<(IVec, IVec)> = Vec::new();
        let mut seen: HashMap<IVec, usize> = HashMap::new();
        let mut queue: VecDeque<(IVec, IVec)> = VecDeque::new();
        for i in 0..l {
            queue.push_back((spec.simple_roots[i].clone(), spec.simple_coroots[i].clone()));
        }
        while let Some((b, bv)) = queue.pop_front() {
            if seen.contains_key(&b) {
                continue;
            }
            if pairs.len() > 20_000 {
                return Err(Error::InvalidRootDatum("root system is not finite".into()));
            }
            seen.insert(b.clone(), pairs.len());
            pairs.push((b.clone(), bv.clone()));
            for i in 0..l {
                let (a, av) = (&spec.simple_roots[i], &spec.simple_coroots[i]);
                let nb = isub(&b, &iscale(idot(&b, av), a));
                let nbv = isub(&bv, &iscale(idot(a, &bv), av));
                if !seen.contains_key(&nb) {
                    queue.push_back((nb, nbv));
                }
            }
        }
        // Simple-root coefficients.
        let mut with_coeffs = Vec::new();
        for (b, bv) in pairs {
            let target = dense::qvec(&b);
            let sol = dense::solve_columns(&qs, &target).ok_or_else(|| Error::InvalidRootDatum("root outside the span of simple roots".into()))?;
            let coeffs: Option<IVec> = sol
                .iter()
                .map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None })
                .collect();
            let coeffs = coeffs.ok_or_else(|| Error::InvalidRootDatum("non-integral root coefficients".into()))?;
            let pos = coeffs.iter().all(|c| *c >= 0);
            let neg = coeffs.iter().all(|c| *c <= 0);
            if !(pos || neg) {
                return Err(Error::InvalidRootDatum("root with mixed-sign coefficients".into()));
            }
            with_coeffs.push((b, bv, coeffs, pos));
        }
        let mut positives: Vec<_> = with_coeffs.iter().filter(|x| x.3).cloned().collect();
        positives.sort_by(|a, b| {
            let ha: i64 = a.2.iter().sum();
            let hb: i64 = b.2.iter().sum();
            ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
        });
        let p = positives.len();
        if with_coeffs.len() != 2 * p {
            return Err(Error::InvalidRootDatum("root set is not closed under negation".into()));
        }
        let mut roots = Vec::with_capacity(2 * p);
        let mut coroots = Vec::with_capacity(2 * p);
        let mut simple_coefficients = Vec::with_capacity(2 * p);
        for (b, bv, c, _) in &positives {
            roots.push(b.clone());
            coroots.push(bv.clone());
            simple_coefficients.push(c.clone());
        }
        for i in 0..p {
            roots.push(iscale(-1, &roots[i]));
            coroots.push(iscale(-1, &coroots[i]));
            simple_coefficients.push(iscale(-1, &simple_coefficients[i]));
        }
        for i in 0..2 * p {
            if idot(&roots[i], &coroots[i]) != 2 {
                return Err(Error::InvalidRootDatum("<α, α^∨> ≠ 2 for a generated root".into()));
            }
        }
        let root_index: HashMap<IVec, usize> = roots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let coroot_index: HashMap<IVec, usize> = coroots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        if root_index.len() != 2 * p || coroot_index.len() != 2 * p {
            return Err(Error::InvalidRootDatum("duplicate roots or coroots".into()));
        }

        // Weyl group.
        let reflections: Vec<IMat> = (0..l)
            .map(|i| {
                let mut m = identity(r);
                for a in 0..r {
                    for b in 0..r {
                        m[a][b] -= spec.simple_coroots[i][a] * spec.simple_roots[i][b];
                    }
                }
                m
            })
            .collect();
        let mut weyl_mats: Vec<(IMat, IMat)> = vec![(identity(r), identity(r))];
        let mut weyl_seen: HashMap<IMat, usize> = HashMap::new();
        weyl_seen.insert(identity(r), 0);
        let mut frontier = VecDeque::from([0usize]);
        while let Some(idx) = frontier.pop_front() {
            for s in &reflections {
                let (a, ai) = weyl_mats[idx].clone();
                let na = mat_mul(s, &a);
                if weyl_seen.contains_key(&na) {
                    continue;
                }
                let nai = mat_mul(&ai, s);
                weyl_seen.insert(na.clone(), weyl_mats.len());
                frontier.push_back(weyl_mats.len());
                weyl_mats.push((na, nai));
                if weyl_mats.len() > 1_000_000 {
                    return Err(Error::InvalidRootDatum("Weyl group too large".into()));
                }
            }
        }
        let mut weyl = Vec::with_capacity(weyl_mats.len());
        for (a, ai) in weyl_mats {
            let perm: Option<Vec<usize>> = roots.iter().map(|b| root_index.get(&row_times(b, &ai)).copied()).collect();
            let perm = perm.ok_or_else(|| Error::InvalidRootDatum("Weyl group does not permute roots".into()))?;
            weyl.push(WeylElement {
                matrix: a,
                inverse: ai,
                root_permutation: perm,
            });
        }

        // Frobenius.
        let frobenius = spec.frobenius.clone().unwrap_or_else(|| identity(r));
        if frobenius.len() != r || frobenius.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidRootDatum("frobenius must be rank × rank".into()));
        }
        let f_inv = integer_inverse(&frobenius).ok_or_else(|| Error::InvalidRootDatum("frobenius is not a lattice automorphism".into()))?;
        let mut power = frobenius.clone();
        let mut order = 1;
        while power != identity(r) {
            power = mat_mul(&frobenius, &power);
            order += 1;
            if order > 10_000 {
                return Err(Error::InvalidRootDatum("frobenius has infinite order".into()));
            }
        }
        let mut frobenius_root_permutation = Vec::with_capacity(2 * p);
        for i in 0..2 * p {
            let image_root = row_times(&roots[i], &f_inv);
            let image_coroot = mat_vec(&frobenius, &coroots[i]);
            let j = root_index
                .get(&image_root)
                .copied()
                .ok_or_else(|| Error::InvalidRootDatum("frobenius does not permute roots".into()))?;
            if coroots[j] != image_coroot {
                return Err(Error::InvalidRootDatum("frobenius is not compatible with α ↦ α^∨".into()));
            }
            frobenius_root_permutation.push(j);
        }

        Ok(RootDatum {
            rank: r,
            simple_roots: spec.simple_roots.clone(),
            simple_coroots: spec.simple_coroots.clone(),
            roots,
            coroots,
            simple_coefficients,
            num_positive: p,
            root_index,
            coroot_index,
            weyl,
            frobenius,
            frobenius_order: order,
            frobenius_root_permutation,
        })
    }

    /// Simply connected `SL(n)`: characters in fundamental-weight coordinates,
    /// cocharacters in simple-coroot coordinates.
    pub fn sl(n: usize) -> Self {
        assert!(n >= 2, "SL(n) needs n ≥ 2");
        let l = n - 1;
        let roots: Vec<IVec> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| match (i as i64 - j as i64).abs() {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let spec = RootDatumSpec {
            rank: l,
            simple_roots: roots,
            simple_coroots: identity(l),
            frobenius: None,
        };
        RootDatum::new(&spec).expect("SL(n) datum is valid")
    }

    /// A split torus of the given rank.
    pub fn torus(rank: usize) -> Self {
        RootDatum::new(&RootDatumSpec {
            rank,
            simple_roots: Vec::new(),
            simple_coroots: Vec::new(),
            frobenius: None,
        })
        .expect("torus datum is valid")
    }

    /// Direct product of root data (block-diagonal lattices).
    pub fn product(factors: &[RootDatum]) -> Self {
        RootDatum::new(&product_spec(&factors.iter().map(RootDatum::spec).collect::<Vec<_>>())).expect("product of valid data is valid")
    }

    /// Returns the same datum with a different Frobenius action.
    pub fn with_frobenius(&self, frobenius: IMat) -> Result<Self> {
        let mut spec = self.spec();
        spec.frobenius = Some(frobenius);
        RootDatum::new(&spec)
    }

    pub fn spec(&self) -> RootDatumSpec {
        RootDatumSpec {
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            frobenius: if self.frobenius == identity(self.rank) {
                None
            } else {
                Some(self.frobenius.clone())
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[IVec] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[IVec] {
        &self.simple_coroots
    }

    /// All roots: positive roots first (by height), then their negatives in the same order.
    pub fn roots(&self) -> &[IVec] {
        &self.roots
    }

    pub fn coroots(&self) -> &[IVec] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &IVec {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &IVec {
        &self.coroots[i]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn positive_roots(&self) -> std::ops::Range<usize> {
        0..self.num_positive
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive
    }

    /// Index of `−α`.
    pub fn negative(&self, i: usize) -> usize {
        (i + self.num_positive) % (2 * self.num_positive)
    }

    /// Index of the positive root among `±α`.
    pub fn positive_of(&self, i: usize) -> usize {
        i % self.num_positive.max(1)
    }

    pub fn simple_coefficients(&self, i: usize) -> &IVec {
        &self.simple_coefficients[i]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    pub fn coroot_index(&self, v: &[i64]) -> Option<usize> {
        self.coroot_index.get(v).copied()
    }

    /// Index of the `i`-th simple root among all roots.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.root_index[&self.simple_roots[i]]
    }

    pub fn pairing(&self, chi: &[i64], lambda: &[i64]) -> i64 {
        idot(chi, lambda)
    }

    pub fn weyl_group(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn frobenius(&self) -> &IMat {
        &self.frobenius
    }

    pub fn frobenius_order(&self) -> usize {
        self.frobenius_order
    }

    pub fn is_split(&self) -> bool {
        self.frobenius == identity(self.rank)
    }

    /// `τ(α)` as a root index.
    pub fn frobenius_on_root(&self, i: usize) -> usize {
        self.frobenius_root_permutation[i]
    }

    /// Applies τ to a cocharacter.
    pub fn frobenius_on_cocharacter(&self, x: &[i64]) -> IVec {
        mat_vec(&self.frobenius, x)
    }

    /// Root indices of the standard Levi generated by the given simple roots.
    pub fn standard_levi_roots(&self, simple: &[usize]) -> Vec<usize> {
        (0..self.num_roots())
            .filter(|&i| {
                self.simple_coefficients[i]
                    .iter()
                    .enumerate()
                    .all(|(j, c)| *c == 0 || simple.contains(&j))
            })
            .collect()
    }

    fn apply_to_roots(&self, w: &WeylElement, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| w.root_permutation[i]).collect();
        out.sort_unstable();
        out
    }

    /// All Levi subsets containing `T`, each once, sorted.
    pub fn enumerate_levis(&self) -> Vec<Levi> {
        let l = self.semisimple_rank();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u32..(1 << l) {
            let simple: Vec<usize> = (0..l).filter(|j| mask & (1 << j) != 0).collect();
            let base = self.standard_levi_roots(&simple);
            for w in &self.weyl {
                found.insert(self.apply_to_roots(w, &base));
            }
        }
        found.into_iter().map(|roots| Levi { roots }).collect()
    }

    /// All parabolic subsets containing `T`, each once, sorted by root set.
    pub fn enumerate_all_parabolics(&self) -> Vec<Parabolic> {
        let l = self.semisimple_rank();
        let positive: Vec<usize> = self.positive_roots().collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u32..(1 << l) {
            let simple: Vec<usize> = (0..l).filter(|j| mask & (1 << j) != 0).collect();
            let mut base: BTreeSet<usize> = self.standard_levi_roots(&simple).into_iter().collect();
            base.extend(positive.iter().copied());
            let base: Vec<usize> = base.into_iter().collect();
            for w in &self.weyl {
                found.insert(self.apply_to_roots(w, &base));
            }
        }
        found.into_iter().map(|roots| Parabolic::from_roots(self, roots)).collect()
    }

    /// `𝓕(M)`: parabolics whose Levi contains `M`.
    pub fn enumerate_parabolics(&self, levi: &Levi) -> Vec<Parabolic> {
        self.enumerate_all_parabolics()
            .into_iter()
            .filter(|p| levi.roots.iter().all(|r| p.levi.roots.binary_search(r).is_ok()))
            .collect()
    }

    /// `𝓟(M)`: parabolics with Levi exactly `M`.
    pub fn minimal_parabolics(&self, levi: &Levi) -> Vec<Parabolic> {
        self.enumerate_all_parabolics().into_iter().filter(|p| p.levi == *levi).collect()
    }

    /// Borel subsets (parabolics with torus Levi).
    pub fn borels(&self) -> Vec<Parabolic> {
        self.minimal_parabolics(&Levi::torus())
    }

    /// The Levi with the given root set, validated.
    pub fn levi_from_roots(&self, roots: &[usize]) -> Result<Levi> {
        let mut sorted = roots.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let levi = Levi { roots: sorted };
        if self.enumerate_levis().contains(&levi) {
            Ok(levi)
        } else {
            Err(Error::InvalidLevi("root set is not the root set of a Levi subgroup".into()))
        }
    }

    /// The standard Levi generated by the given simple roots (0-based indices).
    pub fn standard_levi(&self, simple: &[usize]) -> Result<Levi> {
        if simple.iter().any(|&j| j >= self.semisimple_rank()) {
            return Err(Error::InvalidLevi(format!(
                "simple root index out of range (semisimple rank {})",
                self.semisimple_rank()
            )));
        }
        Ok(Levi {
            roots: self.standard_levi_roots(simple),
        })
    }

    /// The whole group viewed as a Levi.
    pub fn group_levi(&self) -> Levi {
        Levi {
            roots: (0..self.num_roots()).collect(),
        }
    }

    /// Simple roots of the positive system given by a Borel root set.
    pub fn simple_roots_of_borel(&self, borel: &Parabolic) -> Vec<usize> {
        let set: BTreeSet<usize> = borel.roots.iter().copied().collect();
        borel
            .roots
            .iter()
            .copied()
            .filter(|&a| {
                !borel.roots.iter().any(|&b| {
                    let diff = isub(&self.roots[a], &self.roots[b]);
                    self.root_index(&diff).is_some_and(|c| set.contains(&c))
                })
            })
            .collect()
    }

    /// Weyl translate of `λ` that is dominant for the Borel (first in the fixed enumeration order).
    pub fn dominant_translate(&self, lambda: &[i64], borel: &Parabolic) -> IVec {
        for w in &self.weyl {
            let x = mat_vec(&w.matrix, lambda);
            if borel.roots.iter().all(|&a| idot(&self.roots[a], &x) >= 0) {
                return x;
            }
        }
        unreachable!("every cocharacter has a dominant Weyl translate")
    }

    /// Rational spaces attached to a Levi.
    pub fn levi_spaces(&self, levi: &Levi) -> LeviSpaces {
        LeviSpaces::new(self, levi)
    }
}

/// Root datum description of a direct product.
pub fn product_spec(factors: &[RootDatumSpec]) -> RootDatumSpec {
    let rank: usize = factors.iter().map(|f| f.rank).sum();
    let mut simple_roots = Vec::new();
    let mut simple_coroots = Vec::new();
    let mut frob = identity(rank);
    let mut offset = 0;
    for f in factors {
        let embed = |v: &IVec| {
            let mut out = vec![0; rank];
            out[offset..offset + f.rank].copy_from_slice(v);
            out
        };
        simple_roots.extend(f.simple_roots.iter().map(embed));
        simple_coroots.extend(f.simple_coroots.iter().map(embed));
        if let Some(m) = &f.frobenius {
            for i in 0..f.rank {
                for j in 0..f.rank {
                    frob[offset + i][offset + j] = m[i][j];
                }
            }
        }
        offset += f.rank;
    }
    RootDatumSpec {
        rank,
        simple_roots,
        simple_coroots,
        frobenius: if frob == identity(rank) { None } else { Some(frob) },
    }
}

/// A Levi subset, given by its (closed, symmetric) root set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Levi {
    pub roots: Vec<usize>,
}

impl Levi {
    pub fn torus() -> Self {
        Levi { roots: Vec::new() }
    }

    pub fn is_torus(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains_root(&self, i: usize) -> bool {
        self.roots.binary_search(&i).is_ok()
    }
}

/// A parabolic subset `Φ^M ⊔ Φ^{N_P}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parabolic {
    pub roots: Vec<usize>,
    pub levi: Levi,
    pub nilradical: Vec<usize>,
}

impl Parabolic {
    fn from_roots(datum: &RootDatum, roots: Vec<usize>) -> Self {
        let set: BTreeSet<usize> = roots.iter().copied().collect();
        let (levi, nil): (Vec<usize>, Vec<usize>) = roots.iter().partition(|&&i| set.contains(&datum.negative(i)));
        Parabolic {
            roots,
            levi: Levi { roots: levi },
            nilradical: nil,
        }
    }

    pub fn contains(&self, other: &Parabolic) -> bool {
        other.roots.iter().all(|r| self.roots.binary_search(r).is_ok())
    }
}

/// The spaces `a_T^M`, `a_M`, `a_G`, `a_M^G` (cocharacter side) and their
/// duals, with the projectors along `a_T = a_T^M ⊕ a_M` and
/// `a_M = a_M^G ⊕ a_G`.
#[derive(Clone, Debug)]
pub struct LeviSpaces {
    pub rank: usize,
    /// Basis of `a_T^M` (span of the coroots of `M`).
    pub a_t_m: Vec<QVec>,
    /// Basis of `a_M`.
    pub a_m: Vec<QVec>,
    /// Basis of `a_G`.
    pub a_g: Vec<QVec>,
    /// Basis of `a_M^G = a_M ∩ a_T^G`.
    pub a_m_g: Vec<QVec>,
    /// Basis of `a_M^{G,*}` (characters vanishing on the coroots of `M`, in the span of all roots).
    pub a_m_g_dual: Vec<QVec>,
    /// Projector onto `a_M` along `a_T^M` (rows).
    pub proj_m: QMat,
    /// Projector onto `a_G` along `a_T^G`.
    pub proj_g: QMat,
    /// Projector onto `a_M^G` along `a_T^M ⊕ a_G`.
    pub proj_m_g: QMat,
}

fn projector_onto(rank: usize, kernel: &[QVec], image: &[QVec]) -> QMat {
    // Columns of B: kernel basis, then image basis.
    let cols: Vec<QVec> = kernel.iter().chain(image).cloned().collect();
    assert_eq!(cols.len(), rank, "subspaces are not complementary");
    let b: QMat = (0..rank).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let b_inv = dense::inverse(&b).expect("complementary subspaces");
    // P = B · diag(0.., 1..) · B^{-1}
    let k = kernel.len();
    (0..rank)
        .map(|i| (0..rank).map(|j| (k..rank).map(|t| &b[i][t] * &b_inv[t][j]).sum::<Rational>()).collect())
        .collect()
}

impl LeviSpaces {
    pub fn new(datum: &RootDatum, levi: &Levi) -> Self {
        let r = datum.rank();
        let coroots_m: Vec<QVec> = levi.roots.iter().map(|&i| dense::qvec(datum.coroot(i))).collect();
        let roots_m: Vec<QVec> = levi.roots.iter().map(|&i| dense::qvec(datum.root(i))).collect();
        let all_coroots: Vec<QVec> = datum.coroots().iter().map(|c| dense::qvec(c)).collect();
        let all_roots: Vec<QVec> = datum.roots().iter().map(|c| dense::qvec(c)).collect();
        let a_t_m = dense::basis_of(&coroots_m);
        let a_m = dense::nullspace(&roots_m, r);
        let a_g = dense::nullspace(&all_roots, r);
        let a_t_g = dense::basis_of(&all_coroots);
        let a_m_g = dense::intersect(&a_m, &a_t_g, r);
        let dual_m = dense::nullspace(&coroots_m, r);
        let root_span = dense::basis_of(&all_roots);
        let a_m_g_dual = dense::intersect(&dual_m, &root_span, r);
        let proj_m = projector_onto(r, &a_t_m, &a_m);
        let proj_g = projector_onto(r, &a_t_g, &a_g);
        let proj_m_g: QMat = proj_m.iter().zip(&proj_g).map(|(a, b)| dense::sub(a, b)).collect();
        LeviSpaces {
            rank: r,
            a_t_m,
            a_m,
            a_g,
            a_m_g,
            a_m_g_dual,
            proj_m,
            proj_g,
            proj_m_g,
        }
    }

    /// `dim a_M^G`.
    pub fn relative_rank(&self) -> usize {
        self.a_m_g.len()
    }

    pub fn project_m_g(&self, x: &[Rational]) -> QVec {
        dense::mat_vec(&self.proj_m_g, x)
    }

    pub fn project_m(&self, x: &[Rational]) -> QVec {
        dense::mat_vec(&self.proj_m, x)
    }

    /// Whether `x` lies in `a_M^G`.
    pub fn in_a_m_g(&self, x: &[Rational]) -> bool {
        dense::is_zero(&dense::sub(&self.project_m_g(x), x))
    }
}

/// Projector `p_M^L = p_M − p_L` for `M ⊆ L`.
pub fn relative_projector(small: &LeviSpaces, large: &LeviSpaces) -> QMat {
    small.proj_m.iter().zip(&large.proj_m).map(|(a, b)| dense::sub(a, b)).collect()
}

/// Composition of projectors given by rows: `(a ∘ b)`.
pub fn compose(a: &QMat, b: &QMat) -> QMat {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect())
        .collect()
}

pub fn is_zero_matrix(m: &QMat) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_basics() {
        let g = RootDatum::sl(2);
        assert_eq!(g.num_roots(), 2);
        assert_eq!(g.root(0), &vec![2]);
        assert_eq!(g.coroot(0), &vec![1]);
        assert_eq!(g.weyl_group().len(), 2);
        assert_eq!(g.enumerate_levis().len(), 2);
        assert_eq!(g.enumerate_parabolics(&Levi::torus()).len(), 3);
    }

    #[test]
    fn sl3_counts() {
        let g = RootDatum::sl(3);
        assert_eq!(g.num_roots(), 6);
        assert_eq!(g.weyl_group().len(), 6);
        assert_eq!(g.enumerate_levis().len(), 5);
        assert_eq!(g.enumerate_parabolics(&Levi::torus()).len(), 13);
        assert_eq!(g.minimal_parabolics(&Levi::torus()).len(), 6);
        let m = g.standard_levi(&[0]).unwrap();
        assert_eq!(g.minimal_parabolics(&m).len(), 2);
        // highest root α1 + α2 has coefficients (1, 1)
        assert_eq!(g.simple_coefficients(2), &vec![1, 1]);
    }

    #[test]
    fn sl2_squared_levis() {
        let g = RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]);
        assert_eq!(g.enumerate_levis().len(), 4);
        assert_eq!(g.weyl_group().len(), 4);
    }

    #[test]
    fn rejects_bad_data() {
        let bad = RootDatumSpec {
            rank: 1,
            simple_roots: vec![vec![1]],
            simple_coroots: vec![vec![1]],
            frobenius: None,
        };
        assert!(RootDatum::new(&bad).is_err());
        let g = RootDatum::sl(3);
        assert!(g.with_frobenius(vec![vec![2, 0], vec![0, 1]]).is_err());
        // The diagram automorphism of A2 is allowed.
        assert!(g.with_frobenius(vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn projectors_are_consistent() {
        let g = RootDatum::sl(3);
        let t = g.levi_spaces(&Levi::torus());
        let m = g.levi_spaces(&g.standard_levi(&[0]).unwrap());
        let whole = g.levi_spaces(&g.group_levi());
        // p_M^G = p_M^L + p_L^G with T ⊆ M ⊆ G.
        let t_m = relative_projector(&t, &m);
        let lhs = &t.proj_m_g;
        let rhs: QMat = t_m.iter().zip(&m.proj_m_g).map(|(a, b)| dense::add(a, b)).collect();
        assert_eq!(lhs, &rhs);
        assert!(is_zero_matrix(&whole.proj_m_g));
        assert_eq!(m.relative_rank(), 1);
        // p_M ∘ p_T = p_M
        assert_eq!(compose(&m.proj_m, &t.proj_m), m.proj_m);
    }

    #[test]
    fn dominant_translates() {
        let g = RootDatum::sl(2);
        let borels = g.borels();
        let xs: Vec<IVec> = borels.iter().map(|b| g.dominant_translate(&[3], b)).collect();
        let mut sorted = xs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![vec![-3], vec![3]]);
    }
}
