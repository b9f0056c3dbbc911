//! The Cox ring `A = ℚ[X_*(S)][y_σ]` of the toric variety `Y_Σ`, its graded
//! pieces, and sheaf cohomology of `O(D)` and of finitely presented graded
//! modules via the Čech nerve of the chamber cover, weight by weight.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{integer_points, polyhedron_vertices, recession_cone_is_trivial, Fan, TorusDivisor};
use crate::field::{int, Rational};
use crate::lattice::{iadd, idot, isub, smith, IVec, LatticeSplit, Smith};
use crate::linalg::dense::{self, QVec};
use crate::linalg::{rank, sparse_from_entries, SparseVec};

/// Largest number of rays for which the pattern enumeration is attempted.
pub const MAX_RAYS: usize = 20;

/// The Cox ring of `Y_Σ` with a chosen splitting `X_*(T) → X_*(S)`.
#[derive(Clone, Debug)]
pub struct CoxRing {
    fan: Fan,
    split: LatticeSplit,
    class_smith: Smith,
}

/// A monomial `λ_S · Π y_σ^{e_σ}` of the localized ring `A'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxMonomial {
    /// Coordinates of `λ_S` in the chosen basis of `X_*(S)`.
    pub s_part: IVec,
    pub exponents: IVec,
}

/// The monomial basis of a graded piece `A[D]`, one weight per `X_*(S)`-coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceBasis {
    pub class: IVec,
    /// Representatives `λ ∈ X_*(T)` with `(λ) + D ≥ 0`.
    pub weights: Vec<IVec>,
    /// Exponent vectors `(λ) + D`.
    pub exponents: Vec<IVec>,
}

/// Dimensions of one weight space of `H^•(Y, O(D))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightContribution {
    pub weight: IVec,
    pub dims: Vec<usize>,
}

/// `dim H^i(Y, O(D))` for `i = 0..` and the weights that contribute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub dims: Vec<usize>,
    pub weights: Vec<WeightContribution>,
}

impl CohomologyTable {
    pub fn h(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn higher_vanish(&self) -> bool {
        self.dims.iter().skip(1).all(|d| *d == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, d)| if i % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}

/// A homogeneous polynomial in the `y_σ`: `(coefficient, exponent vector)` terms.
pub type CoxPolynomial = Vec<(i64, IVec)>;

/// A finite presentation `⊕_j A(−F_j) → ⊕_i A(−E_i) → L → 0`.
///
/// Generator `i` has degree `E_i`; relation `j` has degree `F_j` and equals
/// `Σ_i relations[j][i] · g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePresentation {
    pub generator_degrees: Vec<IVec>,
    pub relation_degrees: Vec<IVec>,
    pub relations: Vec<Vec<CoxPolynomial>>,
}

/// Result of [`CoxRing::module_sheaf_cohomology`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleCohomology {
    /// `h^0` is exact and all higher cohomology vanishes.
    Conclusive {
        h0: usize,
    },
    /// `h^0` is exact; higher vanishing could not be established.
    H0Only {
        h0: usize,
        reason: String,
    },
    Inconclusive {
        reason: String,
    },
}

impl CoxRing {
    pub fn new(fan: &Fan) -> Self {
        Self::with_split(fan, fan.lattice_split().clone())
    }

    /// Uses a different adapted basis, i.e. a different projector `λ ↦ λ_S`.
    pub fn with_split(fan: &Fan, split: LatticeSplit) -> Self {
        let rows: Vec<IVec> = fan.rays().iter().map(|r| r.generator.clone()).collect();
        let class_smith = smith(&rows, fan.datum().rank());
        CoxRing {
            fan: fan.clone(),
            split,
            class_smith,
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn split(&self) -> &LatticeSplit {
        &self.split
    }

    /// `λ ↦ λ_S`.
    pub fn s_part(&self, lambda: &[i64]) -> IVec {
        self.split.split(lambda).1
    }

    /// `y^λ = λ_S Π y_σ^{ϖ_σ(λ)}`.
    pub fn monomial_of(&self, lambda: &[i64]) -> CoxMonomial {
        CoxMonomial {
            s_part: self.s_part(lambda),
            exponents: self.fan.principal_coefficients(lambda),
        }
    }

    /// Class of an integer divisor in `Cl(Y) = ℤ^{Σ(1)} / {(λ)}`: torsion
    /// coordinates reduced modulo the elementary divisors, then free coordinates.
    pub fn class_of(&self, coefficients: &[i64]) -> IVec {
        let s = &self.class_smith;
        let u_n: IVec = s.u.iter().map(|row| idot(row, coefficients)).collect();
        u_n.iter()
            .enumerate()
            .filter_map(|(i, v)| {
                if i < s.rank {
                    let d = s.diagonal[i];
                    (d != 1).then(|| v.rem_euclid(d))
                } else {
                    Some(*v)
                }
            })
            .collect()
    }

    fn integral(&self, d: &TorusDivisor) -> Result<IVec> {
        if d.coefficients.len() != self.fan.num_rays() {
            return Err(Error::InvalidDivisor(format!(
                "divisor has {} coefficients, fan has {} rays",
                d.coefficients.len(),
                self.fan.num_rays()
            )));
        }
        d.to_integers()
            .ok_or_else(|| Error::InvalidDivisor("divisor must have integer coefficients".into()))
    }

    /// Rows `ϖ_σ` restricted to the complement basis of `X_*(S)`.
    fn ray_rows(&self) -> Vec<QVec> {
        let basis = self.split.complement_basis();
        self.fan
            .rays()
            .iter()
            .map(|r| basis.iter().map(|b| int(idot(&r.generator, b))).collect())
            .collect()
    }

    fn lift(&self, c: &[i64]) -> IVec {
        self.split.join(c, &vec![0; self.split.kernel_rank])
    }

    /// The monomial basis of `A[D]`; with `mod_s` one representative per
    /// `X_*(S)`-coset, otherwise the full basis (finite only when `X_*(S) = 0`).
    pub fn graded_piece(&self, d: &TorusDivisor, mod_s: bool) -> Result<GradedPieceBasis> {
        let n = self.integral(d)?;
        if !mod_s && self.split.kernel_rank > 0 {
            return Err(Error::TooLarge("A[D] is infinite-dimensional when X_*(S) ≠ 0".into()));
        }
        let rows: Vec<QVec> = self.ray_rows().into_iter().map(|r| dense::scale(&int(-1), &r)).collect();
        let bounds: Vec<Rational> = n.iter().map(|v| int(*v)).collect();
        let points = integer_points(&rows, &bounds, self.split.complement_rank)?;
        let weights: Vec<IVec> = points.iter().map(|c| self.lift(c)).collect();
        let exponents = weights.iter().map(|w| iadd(&self.fan.principal_coefficients(w), &n)).collect();
        Ok(GradedPieceBasis {
            class: self.class_of(&n),
            weights,
            exponents,
        })
    }

    /// Čech cohomology dimensions of the weight complex for a set of good rays.
    fn pattern_cohomology(&self, good: &[bool]) -> Vec<usize> {
        let c = self.fan.num_chambers();
        let mut cochains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); c];
        for k in 1..=c {
            for subset in (0..c).combinations(k) {
                let common: Vec<usize> = self
                    .fan
                    .chamber_rays(subset[0])
                    .iter()
                    .copied()
                    .filter(|s| subset[1..].iter().all(|&p| self.fan.chamber_rays(p).contains(s)))
                    .collect();
                if common.iter().all(|&s| good[s]) {
                    cochains[k - 1].push(subset);
                }
            }
        }
        // d^k: C^k → C^{k+1}, (δf)_J = Σ_t (−1)^t f_{J ∖ j_t}
        let mut ranks = vec![0usize; c];
        for k in 0..c.saturating_sub(1) {
            let columns: Vec<SparseVec<Rational>> = cochains[k]
                .iter()
                .map(|src| {
                    let entries = cochains[k + 1].iter().enumerate().filter_map(|(ti, target)| {
                        let pos = (0..target.len()).find(|&t| {
                            let mut face = target.clone();
                            face.remove(t);
                            face == *src
                        })?;
                        Some((ti, int(if pos % 2 == 0 { 1 } else { -1 })))
                    });
                    sparse_from_entries(entries)
                })
                .collect();
            ranks[k] = rank(cochains[k + 1].len(), &columns);
        }
        (0..c)
            .map(|k| {
                let before = if k == 0 { 0 } else { ranks[k - 1] };
                cochains[k].len() - ranks[k] - before
            })
            .collect()
    }

    /// `H^i(Y, O(D))` for all `i`, weight by weight (modulo `X_*(S)`).
    pub fn sheaf_cohomology(&self, d: &TorusDivisor) -> Result<CohomologyTable> {
        let n = self.integral(d)?;
        let r = self.fan.num_rays();
        if r > MAX_RAYS {
            return Err(Error::TooLarge(format!("{r} rays exceed the pattern enumeration limit")));
        }
        let c = self.fan.num_chambers();
        let rows = self.ray_rows();
        let dim = self.split.complement_rank;
        let mut dims = vec![0usize; c];
        let mut weights = Vec::new();
        for mask in 0u32..(1 << r) {
            let good: Vec<bool> = (0..r).map(|s| mask & (1 << s) != 0).collect();
            let local = self.pattern_cohomology(&good);
            if local.iter().all(|v| *v == 0) {
                continue;
            }
            // Region: −ϖ_σ(λ) ≤ n_σ for good σ, ϖ_σ(λ) ≤ −n_σ − 1 otherwise.
            let mut region_rows = Vec::with_capacity(r);
            let mut bounds = Vec::with_capacity(r);
            for s in 0..r {
                if good[s] {
                    region_rows.push(dense::scale(&int(-1), &rows[s]));
                    bounds.push(int(n[s]));
                } else {
                    region_rows.push(rows[s].clone());
                    bounds.push(int(-n[s] - 1));
                }
            }
            if !recession_cone_is_trivial(&region_rows, dim) {
                if polyhedron_vertices(&region_rows, &bounds, dim).is_empty() && dense::rank_of(&region_rows) == dim {
                    continue;
                }
                return Err(Error::InvalidInput("an unbounded weight region carries nonzero cohomology".into()));
            }
            for point in integer_points(&region_rows, &bounds, dim)? {
                for (k, v) in local.iter().enumerate() {
                    dims[k] += v;
                }
                weights.push(WeightContribution {
                    weight: self.lift(&point),
                    dims: local.clone(),
                });
            }
        }
        weights.sort_by(|a, b| a.weight.cmp(&b.weight));
        Ok(CohomologyTable { dims, weights })
    }

    /// Cohomology of `L̃(D)` for a finitely presented module, via the two-step
    /// comparison with the free cover.
    pub fn module_sheaf_cohomology(&self, presentation: &ModulePresentation, d: &TorusDivisor) -> Result<ModuleCohomology> {
        if self.split.kernel_rank > 0 {
            return Err(Error::Unsupported("module cohomology requires X_*(S) = 0".into()));
        }
        let dn = self.integral(d)?;
        let r = self.fan.num_rays();
        let g = presentation.generator_degrees.len();
        let m = presentation.relation_degrees.len();
        if presentation.relations.len() != m || presentation.relations.iter().any(|row| row.len() != g) {
            return Err(Error::InvalidInput("relation matrix has the wrong shape".into()));
        }
        for deg in presentation.generator_degrees.iter().chain(&presentation.relation_degrees) {
            if deg.len() != r {
                return Err(Error::InvalidInput("degree vectors must have one entry per ray".into()));
            }
        }
        // Homogeneity: each term of relations[j][i] has class F_j − E_i.
        for (j, row) in presentation.relations.iter().enumerate() {
            for (i, poly) in row.iter().enumerate() {
                let target = self.class_of(&isub(&presentation.relation_degrees[j], &presentation.generator_degrees[i]));
                for (_, e) in poly {
                    if e.len() != r || e.iter().any(|x| *x < 0) || self.class_of(e) != target {
                        return Err(Error::InvalidInput(format!("relation {j} is not homogeneous in generator {i}")));
                    }
                }
            }
        }
        if !self.relations_injective(presentation) {
            return Ok(ModuleCohomology::Inconclusive {
                reason: "relation map is not injective; the presentation is not a free resolution".into(),
            });
        }
        let twist = |deg: &IVec| TorusDivisor::from_integers(&isub(&dn, deg));
        let gen_coh: Vec<CohomologyTable> = presentation
            .generator_degrees
            .iter()
            .map(|e| self.sheaf_cohomology(&twist(e)))
            .collect::<Result<_>>()?;
        let rel_coh: Vec<CohomologyTable> = presentation
            .relation_degrees
            .iter()
            .map(|f| self.sheaf_cohomology(&twist(f)))
            .collect::<Result<_>>()?;
        if rel_coh.iter().any(|t| t.h(1) != 0) {
            return Ok(ModuleCohomology::Inconclusive {
                reason: "H^1 of the relation module does not vanish".into(),
            });
        }
        // H^0(L(D)) = coker(H^0(F1(D)) → H^0(F0(D))).
        let mut offsets = Vec::with_capacity(g);
        let mut target_index: Vec<HashMap<IVec, usize>> = Vec::with_capacity(g);
        let mut total = 0usize;
        for e in &presentation.generator_degrees {
            let piece = self.graded_piece(&twist(e), true)?;
            offsets.push(total);
            total += piece.exponents.len();
            target_index.push(piece.exponents.into_iter().enumerate().map(|(k, x)| (x, k)).collect());
        }
        let mut columns: Vec<SparseVec<Rational>> = Vec::new();
        for (j, f) in presentation.relation_degrees.iter().enumerate() {
            let piece = self.graded_piece(&twist(f), true)?;
            for e in &piece.exponents {
                let mut entries = Vec::new();
                for (i, poly) in presentation.relations[j].iter().enumerate() {
                    for (coef, mono) in poly {
                        let image = iadd(e, mono);
                        let k = target_index[i]
                            .get(&image)
                            .ok_or_else(|| Error::InvalidInput("relation image leaves the graded piece".into()))?;
                        entries.push((offsets[i] + k, int(*coef)));
                    }
                }
                columns.push(sparse_from_entries(entries));
            }
        }
        let h0 = total - rank(total, &columns);
        let higher = (1..self.fan.num_chambers().max(1)).all(|i| gen_coh.iter().all(|t| t.h(i) == 0) && rel_coh.iter().all(|t| t.h(i + 1) == 0));
        Ok(if higher {
            ModuleCohomology::Conclusive { h0 }
        } else {
            ModuleCohomology::H0Only {
                h0,
                reason: "higher cohomology of the free cover does not vanish".into(),
            }
        })
    }

    /// Generic-rank test of the relation matrix by evaluation at random points.
    fn relations_injective(&self, p: &ModulePresentation) -> bool {
        let m = p.relation_degrees.len();
        let g = p.generator_degrees.len();
        if m == 0 {
            return true;
        }
        if m > g {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..4 {
            let point: Vec<i64> = (0..self.fan.num_rays()).map(|_| rng.gen_range(2..1000)).collect();
            let rows: Vec<QVec> = p
                .relations
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|poly| {
                            poly.iter()
                                .map(|(c, e)| e.iter().zip(&point).fold(int(*c), |acc, (k, x)| acc * int(*x).pow(*k as i32)))
                                .sum::<Rational>()
                        })
                        .collect()
                })
                .collect();
            if dense::rank_of(&rows) == m {
                return true;
            }
        }
        false
    }
}

/// The graded module attached to the `SL(2)` Springer fiber on `Y = ℙ^1`
/// (rays ordered `(B, B̄)`) split by Springer degree: for `i < d` the
/// generator `(y_B − y_B̄)^i` modulo `(y_B − y_B̄)`, and for `i = d` the free
/// module generated by `(y_B − y_B̄)^d`.
pub fn sl2_springer_module(i: usize, d: usize) -> ModulePresentation {
    let deg = vec![i as i64, 0];
    if i < d {
        ModulePresentation {
            generator_degrees: vec![deg],
            relation_degrees: vec![vec![i as i64 + 1, 0]],
            relations: vec![vec![vec![(1, vec![1, 0]), (-1, vec![0, 1])]]],
        }
    } else {
        ModulePresentation {
            generator_degrees: vec![deg],
            relation_degrees: Vec::new(),
            relations: Vec::new(),
        }
    }
}

impl GradedPieceBasis {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

impl CoxMonomial {
    pub fn is_one(&self) -> bool {
        self.s_part.iter().all(Zero::is_zero) && self.exponents.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Levi, RootDatum};

    fn p1() -> CoxRing {
        CoxRing::new(&Fan::new(&RootDatum::sl(2), &Levi::torus()))
    }

    #[test]
    fn graded_piece_dimensions() {
        let a = p1();
        assert_eq!(a.graded_piece(&TorusDivisor::from_integers(&[1, 2]), false).unwrap().dim(), 4);
        assert_eq!(a.graded_piece(&TorusDivisor::from_integers(&[-5, 1]), false).unwrap().dim(), 0);
    }

    #[test]
    fn line_bundles_on_p1() {
        let a = p1();
        let t = a.sheaf_cohomology(&TorusDivisor::from_integers(&[-2, 0])).unwrap();
        assert_eq!((t.h(0), t.h(1)), (0, 1));
        let t = a.sheaf_cohomology(&TorusDivisor::from_integers(&[0, 0])).unwrap();
        assert_eq!((t.h(0), t.h(1)), (1, 0));
        let t = a.sheaf_cohomology(&TorusDivisor::from_integers(&[-3, -2])).unwrap();
        assert_eq!((t.h(0), t.h(1)), (0, 4));
    }

    #[test]
    fn classes_on_p1_are_total_degree() {
        let a = p1();
        assert_eq!(a.class_of(&[1, 2]), a.class_of(&[3, 0]));
        assert_ne!(a.class_of(&[1, 2]), a.class_of(&[2, 2]));
    }

    #[test]
    fn quotient_by_a_variable() {
        let a = p1();
        let p = ModulePresentation {
            generator_degrees: vec![vec![0, 0]],
            relation_degrees: vec![vec![1, 0]],
            relations: vec![vec![vec![(1, vec![1, 0])]]],
        };
        let res = a.module_sheaf_cohomology(&p, &TorusDivisor::from_integers(&[3, 4])).unwrap();
        assert_eq!(res, ModuleCohomology::Conclusive { h0: 1 });
        let json = r#"{"generator_degrees": [[0, 0]], "relation_degrees": [[1, 0]], "relations": [[[[1, [1, 0]]]]]}"#;
        let parsed: ModulePresentation = serde_json::from_str(json).unwrap();
        assert_eq!(parsed, p);
    }

    #[test]
    fn dimensions_do_not_depend_on_the_projector() {
        let sl3 = RootDatum::sl(3);
        let product = RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]);
        let fans = [
            Fan::new(&sl3, &sl3.standard_levi(&[0]).unwrap()),
            Fan::new(&product, &product.standard_levi(&[1]).unwrap()),
        ];
        for fan in &fans {
            assert!(fan.s_rank() > 0);
            let reference = CoxRing::new(fan);
            for shear in [1, -3] {
                let other = CoxRing::with_split(fan, fan.lattice_split().sheared(shear));
                for a in -3..=3 {
                    for b in -3..=3 {
                        let d = TorusDivisor::from_integers(&[a, b]);
                        assert_eq!(reference.sheaf_cohomology(&d).unwrap().dims, other.sheaf_cohomology(&d).unwrap().dims);
                        assert_eq!(
                            reference.graded_piece(&d, true).unwrap().dim(),
                            other.graded_piece(&d, true).unwrap().dim()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn springer_module_pieces() {
        let a = p1();
        let d = 2;
        let divisor = TorusDivisor::from_integers(&[1, 2]);
        let dims: Vec<usize> = (0..=d)
            .map(|i| match a.module_sheaf_cohomology(&sl2_springer_module(i, d), &divisor).unwrap() {
                ModuleCohomology::Conclusive { h0 } => h0,
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(dims, vec![1, 1, 2]);
    }
}
