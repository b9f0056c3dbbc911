//! The fans `Σ_M^G`, torus-invariant divisors, the dictionary between
//! divisors and `(G, M)`-orthogonal families, regularity measures and the
//! polytopes `𝔓(D)`.
//!
//! The fan lives in the character space: rays are primitive characters
//! `ϖ_σ ∈ X^*(T)`, cones are indexed by `𝓕(M)`, maximal cones by `𝓟(M)`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{ceil_i64, floor_i64, int, Rational};
use crate::lattice::{idot, primitive_on_ray, IVec, LatticeSplit};
use crate::linalg::dense::{self, QMat, QVec};
use crate::rootdata::{Levi, LeviSpaces, Parabolic, RootDatum};

/// A ray `σ = a_Q^{G,+}` of the fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    /// The maximal proper parabolic `Q ∈ 𝓕(M)` indexing the ray.
    pub parabolic: Parabolic,
    /// Primitive generator `ϖ_σ ∈ X^*(T)`.
    pub generator: IVec,
    /// Stable identifier: the generator's coordinates, comma separated.
    pub label: String,
}

/// A pair of adjacent chambers with the rays that differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub first: usize,
    pub second: usize,
    /// The ray of `first` that is not a ray of `second`.
    pub first_ray: usize,
    /// The ray of `second` that is not a ray of `first`.
    pub second_ray: usize,
}

/// The fan `Σ_M^G`.
#[derive(Clone, Debug)]
pub struct Fan {
    datum: RootDatum,
    levi: Levi,
    spaces: LeviSpaces,
    cones: Vec<Parabolic>,
    cone_rays: Vec<Vec<usize>>,
    chambers: Vec<usize>,
    rays: Vec<Ray>,
    dual_bases: Vec<Vec<QVec>>,
    adjacencies: Vec<Adjacency>,
    split: LatticeSplit,
}

/// A torus-invariant divisor `Σ n_σ D_σ` with rational coefficients, indexed
/// by the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    pub coefficients: Vec<Rational>,
}

/// A family `(μ_P)_{P ∈ 𝓟(M)}` of points of `a_M^G`, indexed like the chambers of a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalFamily {
    pub points: Vec<QVec>,
}

/// The output of [`Fan::regularity`]. `None` stands for the minimum over an empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub d: Option<Rational>,
    pub delta: Option<Rational>,
    pub positive: bool,
    pub very_positive: bool,
}

/// The polytope `𝔓(D) ⊂ a_M^G` in halfspace and vertex form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    /// `(ϖ_σ, n_σ)`: the halfspace `ϖ_σ(λ) ≤ n_σ`.
    pub halfspaces: Vec<(IVec, Rational)>,
    /// The points `μ_P^D`, one per chamber.
    pub vertices: Vec<QVec>,
}

impl TorusDivisor {
    pub fn zero(num_rays: usize) -> Self {
        TorusDivisor {
            coefficients: vec![int(0); num_rays],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        TorusDivisor {
            coefficients: values.iter().map(|v| int(*v)).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn to_integers(&self) -> Option<IVec> {
        self.coefficients
            .iter()
            .map(|c| if c.is_integer() { i64::try_from(c.to_integer()).ok() } else { None })
            .collect()
    }

    pub fn add(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor {
            coefficients: dense::add(&self.coefficients, &other.coefficients),
        }
    }

    pub fn scale(&self, c: &Rational) -> TorusDivisor {
        TorusDivisor {
            coefficients: dense::scale(c, &self.coefficients),
        }
    }

    pub fn is_effective(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }
}

impl OrthogonalFamily {
    pub fn zero(num_chambers: usize, rank: usize) -> Self {
        OrthogonalFamily {
            points: vec![vec![int(0); rank]; num_chambers],
        }
    }

    pub fn add(&self, other: &OrthogonalFamily) -> OrthogonalFamily {
        OrthogonalFamily {
            points: self.points.iter().zip(&other.points).map(|(a, b)| dense::add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> OrthogonalFamily {
        OrthogonalFamily {
            points: self.points.iter().map(|a| dense::scale(c, a)).collect(),
        }
    }
}

fn ray_label(generator: &[i64]) -> String {
    generator.iter().map(i64::to_string).join(",")
}

fn row_times(v: &[i64], m: &[IVec]) -> IVec {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum()).collect()
}

fn eval(chi: &[i64], x: &[Rational]) -> Rational {
    chi.iter().zip(x).map(|(c, v)| int(*c) * v).sum()
}

impl Fan {
    /// Builds `Σ_M^G`.
    pub fn new(datum: &RootDatum, levi: &Levi) -> Self {
        let spaces = datum.levi_spaces(levi);
        let cones = datum.enumerate_parabolics(levi);
        let all_roots: Vec<QVec> = datum.roots().iter().map(|r| dense::qvec(r)).collect();
        let root_span = dense::basis_of(&all_roots);
        let ss_rank = root_span.len();
        let r = datum.rank();

        let mut rays = Vec::new();
        for q in &cones {
            let levi_roots: Vec<QVec> = q.levi.roots.iter().map(|&i| dense::qvec(datum.root(i))).collect();
            if ss_rank.saturating_sub(dense::rank_of(&levi_roots)) != 1 {
                continue;
            }
            let levi_coroots: Vec<QVec> = q.levi.roots.iter().map(|&i| dense::qvec(datum.coroot(i))).collect();
            let line = dense::intersect(&dense::nullspace(&levi_coroots, r), &root_span, r);
            assert_eq!(line.len(), 1, "ray of a maximal parabolic must be a line");
            let mut generator = primitive_on_ray(&line[0]);
            let sign: i64 = q.nilradical.iter().map(|&i| idot(&generator, datum.coroot(i))).sum();
            assert!(sign != 0, "ray generator vanishes on the nilradical");
            if sign < 0 {
                generator = generator.iter().map(|x| -x).collect();
            }
            rays.push(Ray {
                parabolic: q.clone(),
                label: ray_label(&generator),
                generator,
            });
        }
        rays.sort_by(|a, b| a.generator.cmp(&b.generator).reverse());

        let cone_rays: Vec<Vec<usize>> = cones
            .iter()
            .map(|p| (0..rays.len()).filter(|&s| rays[s].parabolic.contains(p)).collect())
            .collect();
        let chambers: Vec<usize> = (0..cones.len()).filter(|&i| cones[i].levi == *levi).collect();

        let b = spaces.relative_rank();
        let dual_bases: Vec<Vec<QVec>> = chambers
            .iter()
            .map(|&c| {
                let rs = &cone_rays[c];
                assert_eq!(rs.len(), b, "chamber must be simplicial of full dimension");
                // W[i][k] = ϖ_i(e_k), dual basis α_j = Σ_k (W^{-1})[k][j] e_k
                let w: QMat = rs
                    .iter()
                    .map(|&s| spaces.a_m_g.iter().map(|e| eval(&rays[s].generator, e)).collect())
                    .collect();
                let w_inv = dense::inverse(&w).expect("ray generators of a chamber form a basis");
                (0..b)
                    .map(|j| {
                        let mut v = vec![int(0); r];
                        for (k, e) in spaces.a_m_g.iter().enumerate() {
                            v = dense::add(&v, &dense::scale(&w_inv[k][j], e));
                        }
                        v
                    })
                    .collect()
            })
            .collect();

        let mut adjacencies = Vec::new();
        for (i, j) in (0..chambers.len()).tuple_combinations() {
            let a = &cone_rays[chambers[i]];
            let c = &cone_rays[chambers[j]];
            let only_a: Vec<usize> = a.iter().copied().filter(|s| !c.contains(s)).collect();
            let only_c: Vec<usize> = c.iter().copied().filter(|s| !a.contains(s)).collect();
            if only_a.len() == 1 && only_c.len() == 1 {
                adjacencies.push(Adjacency {
                    first: i,
                    second: j,
                    first_ray: only_a[0],
                    second_ray: only_c[0],
                });
            }
        }

        let ray_rows: Vec<IVec> = rays.iter().map(|s| s.generator.clone()).collect();
        let split = LatticeSplit::kernel_of(&ray_rows, r);

        Fan {
            datum: datum.clone(),
            levi: levi.clone(),
            spaces,
            cones,
            cone_rays,
            chambers,
            rays,
            dual_bases,
            adjacencies,
            split,
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn levi(&self) -> &Levi {
        &self.levi
    }

    pub fn spaces(&self) -> &LeviSpaces {
        &self.spaces
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// All cones, indexed by `𝓕(M)`.
    pub fn cones(&self) -> &[Parabolic] {
        &self.cones
    }

    /// Rays of the cone indexed by `cones()[i]`.
    pub fn cone_rays(&self, i: usize) -> &[usize] {
        &self.cone_rays[i]
    }

    pub fn num_chambers(&self) -> usize {
        self.chambers.len()
    }

    /// The parabolic `P ∈ 𝓟(M)` of chamber `i`.
    pub fn chamber(&self, i: usize) -> &Parabolic {
        &self.cones[self.chambers[i]]
    }

    /// Rays of chamber `i` (the basis `Π_P`).
    pub fn chamber_rays(&self, i: usize) -> &[usize] {
        &self.cone_rays[self.chambers[i]]
    }

    /// The basis `Π_P^∨ ⊂ a_M^G` dual to `Π_P`, in the order of `chamber_rays(i)`.
    pub fn dual_basis(&self, i: usize) -> &[QVec] {
        &self.dual_bases[i]
    }

    pub fn adjacencies(&self) -> &[Adjacency] {
        &self.adjacencies
    }

    /// `α_{P,P'}^∨` for an adjacency.
    pub fn wall_coroot(&self, adj: &Adjacency) -> &QVec {
        let pos = self
            .chamber_rays(adj.first)
            .iter()
            .position(|&s| s == adj.first_ray)
            .expect("ray belongs to chamber");
        &self.dual_bases[adj.first][pos]
    }

    pub fn ray_by_label(&self, label: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.label == label)
    }

    /// Adapted basis of `X_*(T)` whose last block spans `X_*(S)`, the kernel of
    /// `λ ↦ (λ)`.
    pub fn lattice_split(&self) -> &LatticeSplit {
        &self.split
    }

    /// Rank of `X_*(S)`.
    pub fn s_rank(&self) -> usize {
        self.split.kernel_rank
    }

    /// Chamber index of a parabolic in `𝓟(M)`.
    pub fn chamber_index(&self, p: &Parabolic) -> Option<usize> {
        (0..self.num_chambers()).find(|&i| self.chamber(i) == p)
    }

    /// Principal divisor `(λ) = Σ ϖ_σ(λ) D_σ`.
    pub fn divisor_of_cocharacter(&self, lambda: &[i64]) -> TorusDivisor {
        TorusDivisor {
            coefficients: self.rays.iter().map(|s| int(idot(&s.generator, lambda))).collect(),
        }
    }

    /// Integer principal divisor.
    pub fn principal_coefficients(&self, lambda: &[i64]) -> IVec {
        self.rays.iter().map(|s| idot(&s.generator, lambda)).collect()
    }

    /// The family `(λ_P)` attached to a cocharacter: project the `P`-dominant
    /// Weyl translate of `λ` to `a_M^G`.
    pub fn dominant_family(&self, lambda: &[i64]) -> OrthogonalFamily {
        let borels = self.datum.borels();
        let points = (0..self.num_chambers())
            .map(|i| {
                let p = self.chamber(i);
                let b = borels.iter().find(|b| p.contains(b)).expect("every parabolic contains a Borel");
                let dom = self.datum.dominant_translate(lambda, b);
                self.spaces.project_m_g(&dense::qvec(&dom))
            })
            .collect();
        OrthogonalFamily { points }
    }

    /// Extension `λ_Q` of a family to a cone `Q ∈ 𝓕(M)` (index into `cones()`).
    pub fn extended_point(&self, fam: &OrthogonalFamily, cone: usize) -> QVec {
        let q = &self.cones[cone];
        let i = (0..self.num_chambers())
            .find(|&i| q.contains(self.chamber(i)))
            .expect("every cone contains a chamber");
        let spaces_q = self.datum.levi_spaces(&q.levi);
        spaces_q.project_m_g(&fam.points[i])
    }

    /// Checks `(G, M)`-orthogonality; returns the wall scalars `x` per adjacency.
    pub fn orthogonality_scalars(&self, fam: &OrthogonalFamily) -> Result<Vec<Rational>> {
        if fam.points.len() != self.num_chambers() {
            return Err(Error::NotOrthogonal(format!(
                "family has {} points, fan has {} chambers",
                fam.points.len(),
                self.num_chambers()
            )));
        }
        for (i, p) in fam.points.iter().enumerate() {
            if p.len() != self.datum.rank() || !self.spaces.in_a_m_g(p) {
                return Err(Error::NotOrthogonal(format!("point {i} is not in a_M^G")));
            }
        }
        let mut scalars = Vec::with_capacity(self.adjacencies.len());
        for adj in &self.adjacencies {
            let diff = dense::sub(&fam.points[adj.first], &fam.points[adj.second]);
            let coroot = self.wall_coroot(adj);
            let x = eval(&self.rays[adj.first_ray].generator, &diff);
            if dense::sub(&diff, &dense::scale(&x, coroot)) != vec![int(0); diff.len()] {
                return Err(Error::NotOrthogonal(format!(
                    "chambers {} and {} differ by a non-multiple of the wall coroot",
                    adj.first, adj.second
                )));
            }
            scalars.push(x);
        }
        Ok(scalars)
    }

    pub fn is_orthogonal(&self, fam: &OrthogonalFamily) -> bool {
        self.orthogonality_scalars(fam).is_ok()
    }

    /// `D_λ = Σ ϖ_σ(λ_{Q_σ}) D_σ`.
    pub fn family_to_divisor(&self, fam: &OrthogonalFamily) -> Result<TorusDivisor> {
        self.orthogonality_scalars(fam)?;
        let mut coefficients = Vec::with_capacity(self.num_rays());
        for (s, ray) in self.rays.iter().enumerate() {
            let mut value: Option<Rational> = None;
            for i in 0..self.num_chambers() {
                if !self.chamber_rays(i).contains(&s) {
                    continue;
                }
                let v = eval(&ray.generator, &fam.points[i]);
                match &value {
                    None => value = Some(v),
                    Some(prev) if *prev != v => {
                        return Err(Error::NotOrthogonal(format!("ray {} takes two values", ray.label)));
                    }
                    Some(_) => {}
                }
            }
            coefficients.push(value.expect("every ray lies in a chamber"));
        }
        Ok(TorusDivisor { coefficients })
    }

    /// `μ_P^D = Σ_{σ ∈ Π_P} n_σ α_σ^∨`.
    pub fn divisor_to_family(&self, divisor: &TorusDivisor) -> OrthogonalFamily {
        let r = self.datum.rank();
        let points = (0..self.num_chambers())
            .map(|i| {
                let mut v = vec![int(0); r];
                for (pos, &s) in self.chamber_rays(i).iter().enumerate() {
                    v = dense::add(&v, &dense::scale(&divisor.coefficients[s], &self.dual_bases[i][pos]));
                }
                v
            })
            .collect();
        OrthogonalFamily { points }
    }

    /// `Δ_P`: simple roots of a Borel inside `P` that are not roots of `M`.
    pub fn chamber_simple_roots(&self, i: usize) -> Vec<usize> {
        let p = self.chamber(i);
        let borel = self
            .datum
            .borels()
            .into_iter()
            .find(|b| p.contains(b))
            .expect("every parabolic contains a Borel");
        self.datum
            .simple_roots_of_borel(&borel)
            .into_iter()
            .filter(|&a| !self.levi.contains_root(a))
            .collect()
    }

    fn restriction_to_a_m(&self, root: usize) -> QVec {
        let chi = self.datum.root(root);
        self.spaces.a_m.iter().map(|e| eval(chi, e)).collect()
    }

    /// The regularity measures `d`, `δ` of a family and the derived flags.
    pub fn regularity(&self, fam: &OrthogonalFamily) -> Result<Regularity> {
        let scalars = self.orthogonality_scalars(fam)?;
        let simple: Vec<Vec<usize>> = (0..self.num_chambers()).map(|i| self.chamber_simple_roots(i)).collect();
        let mut d: Option<Rational> = None;
        for (i, roots) in simple.iter().enumerate() {
            for &a in roots {
                let v = eval(self.datum.root(a), &fam.points[i]);
                if d.as_ref().map_or(true, |m| v < *m) {
                    d = Some(v);
                }
            }
        }
        let mut delta: Option<Rational> = None;
        for adj in &self.adjacencies {
            for (p, q) in [(adj.first, adj.second), (adj.second, adj.first)] {
                let diff = dense::sub(&fam.points[p], &fam.points[q]);
                for &a in &simple[p] {
                    let ra = self.restriction_to_a_m(a);
                    let opposite = simple[q]
                        .iter()
                        .any(|&b| dense::add(&ra, &self.restriction_to_a_m(b)).iter().all(Zero::is_zero));
                    if opposite {
                        let v = eval(self.datum.root(a), &diff);
                        if delta.as_ref().map_or(true, |m| v < *m) {
                            delta = Some(v);
                        }
                    }
                }
            }
        }
        if let (Some(dv), Some(del)) = (&d, &delta) {
            assert!(*del >= int(2) * dv, "δ < 2d contradicts the triangle bound");
        }
        let positive = scalars.iter().all(|x| !x.is_negative());
        debug_assert_eq!(positive, delta.as_ref().map_or(true, |v| !v.is_negative()));
        let very_positive = d.as_ref().map_or(true, |v| !v.is_negative());
        Ok(Regularity {
            d,
            delta,
            positive,
            very_positive,
        })
    }

    /// The polytope `𝔓(D)`.
    pub fn polytope(&self, divisor: &TorusDivisor) -> Polytope {
        Polytope {
            halfspaces: self
                .rays
                .iter()
                .zip(&divisor.coefficients)
                .map(|(s, n)| (s.generator.clone(), n.clone()))
                .collect(),
            vertices: self.divisor_to_family(divisor).points,
        }
    }

    /// A basis of `X_*(T)/X_*(S)`, lifted to `X_*(T)`.
    pub fn quotient_lattice_basis(&self) -> Vec<IVec> {
        self.split.complement_basis().to_vec()
    }

    /// Permutation of rays induced by τ, if τ preserves `M`.
    pub fn frobenius_on_rays(&self) -> Option<Vec<usize>> {
        let f = self.datum.frobenius();
        (0..self.num_rays())
            .map(|i| {
                // τ(ϖ) = ϖ ∘ τ^{-1}: the ray j with ϖ_j ∘ τ = ϖ_i.
                (0..self.num_rays()).find(|&j| row_times(&self.rays[j].generator, f) == self.rays[i].generator)
            })
            .collect()
    }

    /// Whether `n_{τ(σ)} = n_σ` for every ray.
    pub fn is_frobenius_stable(&self, divisor: &TorusDivisor) -> bool {
        match self.frobenius_on_rays() {
            Some(perm) => perm.iter().enumerate().all(|(i, &j)| divisor.coefficients[i] == divisor.coefficients[j]),
            None => false,
        }
    }

    /// Face closure and intersection closure of the cone set.
    pub fn verify_axioms(&self) -> Result<()> {
        let ray_sets: Vec<Vec<usize>> = self.cone_rays.clone();
        let is_cone = |set: &[usize]| ray_sets.iter().any(|r| r.as_slice() == set);
        for rays in &ray_sets {
            for k in 0..=rays.len() {
                for face in rays.iter().copied().combinations(k) {
                    if !is_cone(&face) {
                        return Err(Error::InvalidInput(format!("face {face:?} of a cone is not a cone")));
                    }
                }
            }
        }
        for (a, b) in ray_sets.iter().tuple_combinations() {
            let common: Vec<usize> = a.iter().copied().filter(|s| b.contains(s)).collect();
            if !is_cone(&common) {
                return Err(Error::InvalidInput("intersection of cones is not a cone".into()));
            }
        }
        Ok(())
    }

    /// Divisor from a label map; missing labels count as zero.
    pub fn divisor_from_labels(&self, map: &BTreeMap<String, i64>) -> Result<TorusDivisor> {
        let mut values = vec![0i64; self.num_rays()];
        for (label, v) in map {
            let i = self
                .ray_by_label(label)
                .ok_or_else(|| Error::InvalidDivisor(format!("unknown ray id {label:?}")))?;
            values[i] = *v;
        }
        Ok(TorusDivisor::from_integers(&values))
    }

    pub fn divisor_labels(&self, divisor: &TorusDivisor) -> BTreeMap<String, Rational> {
        self.rays
            .iter()
            .zip(&divisor.coefficients)
            .map(|(s, n)| (s.label.clone(), n.clone()))
            .collect()
    }
}

impl Polytope {
    /// Halfspace membership of a point of `a_T`.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|(chi, n)| eval(chi, x) <= *n)
    }

    /// Membership in the convex hull of the vertices (Carathéodory search).
    pub fn hull_contains(&self, x: &[Rational]) -> bool {
        let dim = x.len();
        let verts = dedup_points(&self.vertices);
        for k in 1..=verts.len().min(dim + 1) {
            for subset in (0..verts.len()).combinations(k) {
                let cols: Vec<QVec> = subset
                    .iter()
                    .map(|&i| {
                        let mut v = verts[i].clone();
                        v.push(int(1));
                        v
                    })
                    .collect();
                if dense::rank_of(&cols) != k {
                    continue;
                }
                let mut target = x.to_vec();
                target.push(int(1));
                if let Some(t) = dense::solve_columns(&cols, &target) {
                    if t.iter().all(|c| !c.is_negative()) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Points `λ = Σ c_i basis_i` of the lattice spanned by `basis` lying in
    /// the polytope (as `λ ↦ p_M^G(λ)`); returns the coefficient vectors `c`.
    pub fn lattice_points(&self, basis: &[IVec]) -> Result<Vec<IVec>> {
        let rows: Vec<QVec> = self
            .halfspaces
            .iter()
            .map(|(chi, _)| basis.iter().map(|b| int(idot(chi, b))).collect())
            .collect();
        let bounds: Vec<Rational> = self.halfspaces.iter().map(|(_, n)| n.clone()).collect();
        integer_points(&rows, &bounds, basis.len())
    }
}

fn dedup_points(points: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for p in points {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// Whether the recession cone `{x : rows · x ≤ 0}` is `{0}`.
pub fn recession_cone_is_trivial(rows: &[QVec], dim: usize) -> bool {
    if dim == 0 {
        return true;
    }
    if dense::rank_of(rows) < dim {
        return false;
    }
    // The cone is pointed; it is nonzero iff it has an extreme ray, which is
    // the null line of dim−1 independent rows.
    for subset in (0..rows.len()).combinations(dim - 1) {
        let sub: Vec<QVec> = subset.iter().map(|&i| rows[i].clone()).collect();
        let null = dense::nullspace(&sub, dim);
        if null.len() != 1 {
            continue;
        }
        for sign in [int(1), int(-1)] {
            let d = dense::scale(&sign, &null[0]);
            if rows.iter().all(|r| !dense::dot(r, &d).is_positive()) {
                return false;
            }
        }
    }
    true
}

/// Vertices of `{x : rows · x ≤ bounds}` (assumed pointed).
pub fn polyhedron_vertices(rows: &[QVec], bounds: &[Rational], dim: usize) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    if dim == 0 {
        if bounds.iter().all(|b| !b.is_negative()) {
            out.push(Vec::new());
        }
        return out;
    }
    for subset in (0..rows.len()).combinations(dim) {
        let m: QMat = subset.iter().map(|&i| rows[i].clone()).collect();
        let Some(inv) = dense::inverse(&m) else { continue };
        let rhs: QVec = subset.iter().map(|&i| bounds[i].clone()).collect();
        let x = dense::mat_vec(&inv, &rhs);
        if rows.iter().zip(bounds).all(|(r, b)| dense::dot(r, &x) <= *b) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Integer points of the bounded polyhedron `{x ∈ ℤ^dim : rows · x ≤ bounds}`.
pub fn integer_points(rows: &[QVec], bounds: &[Rational], dim: usize) -> Result<Vec<IVec>> {
    if !recession_cone_is_trivial(rows, dim) {
        return Err(Error::InvalidInput("polyhedron is unbounded on the chosen lattice".into()));
    }
    let vertices = polyhedron_vertices(rows, bounds, dim);
    if vertices.is_empty() {
        return Ok(Vec::new());
    }
    if dim == 0 {
        return Ok(vec![Vec::new()]);
    }
    let lo: Vec<i64> = (0..dim)
        .map(|k| vertices.iter().map(|v| ceil_i64(&v[k])).min().expect("nonempty"))
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|k| vertices.iter().map(|v| floor_i64(&v[k])).max().expect("nonempty"))
        .collect();
    let volume: i128 = lo.iter().zip(&hi).map(|(a, b)| i128::from((b - a + 1).max(0))).product();
    if volume > 50_000_000 {
        return Err(Error::TooLarge(format!("bounding box holds {volume} lattice points")));
    }
    let mut out = Vec::new();
    let ranges: Vec<std::ops::RangeInclusive<i64>> = lo.iter().zip(&hi).map(|(a, b)| *a..=*b).collect();
    for point in ranges.into_iter().multi_cartesian_product() {
        let x: QVec = point.iter().map(|v| int(*v)).collect();
        if rows.iter().zip(bounds).all(|(r, b)| dense::dot(r, &x) <= *b) {
            out.push(point);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn sl2_fan() -> Fan {
        Fan::new(&RootDatum::sl(2), &Levi::torus())
    }

    #[test]
    fn sl2_rays_are_fundamental_weights() {
        let fan = sl2_fan();
        let gens: Vec<IVec> = fan.rays().iter().map(|r| r.generator.clone()).collect();
        assert_eq!(gens, vec![vec![1], vec![-1]]);
        assert_eq!(fan.num_chambers(), 2);
        assert_eq!(fan.adjacencies().len(), 1);
        assert_eq!(fan.s_rank(), 0);
        fan.verify_axioms().unwrap();
        let whole = Fan::new(&RootDatum::sl(2), &RootDatum::sl(2).group_levi());
        assert_eq!(whole.num_rays(), 0);
        assert_eq!(whole.num_chambers(), 1);
    }

    #[test]
    fn sl3_hexagonal_fan() {
        let g = RootDatum::sl(3);
        let fan = Fan::new(&g, &Levi::torus());
        assert_eq!(fan.num_rays(), 6);
        assert_eq!(fan.num_chambers(), 6);
        assert_eq!(fan.cones().len(), 13);
        assert_eq!(fan.adjacencies().len(), 6);
        fan.verify_axioms().unwrap();
    }

    #[test]
    fn sl2_divisor_dictionary() {
        let fan = sl2_fan();
        assert_eq!(fan.principal_coefficients(&[1]), vec![1, -1]);
        let fam = fan.dominant_family(&[3]);
        let b = fan.chamber_index(&fan.rays()[0].parabolic).unwrap();
        assert_eq!(fam.points[b], vec![int(3)]);
        assert_eq!(fam.points[1 - b], vec![int(-3)]);
        let d = fan.family_to_divisor(&fam).unwrap();
        assert_eq!(d, TorusDivisor::from_integers(&[3, 3]));
        assert_eq!(fan.divisor_to_family(&d), fam);
        let reg = fan.regularity(&fam).unwrap();
        assert_eq!(reg.d, Some(int(6)));
        assert!(reg.positive && reg.very_positive);
    }

    #[test]
    fn constant_family_is_orthogonal_but_not_very_positive() {
        let fan = sl2_fan();
        let fam = OrthogonalFamily {
            points: vec![vec![int(1)], vec![int(1)]],
        };
        let reg = fan.regularity(&fam).unwrap();
        assert_eq!(reg.d, Some(int(-2)));
        assert_eq!(reg.delta, Some(int(0)));
        assert!(!reg.very_positive);
    }

    #[test]
    fn sl2_interval_lattice_points() {
        let fan = sl2_fan();
        let p = fan.polytope(&TorusDivisor::from_integers(&[1, 2]));
        let pts = p.lattice_points(&[vec![1]]).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(p.hull_contains(&[rat(1, 2)]));
        assert!(!p.hull_contains(&[int(2)]));
    }

    #[test]
    fn unbounded_regions_are_detected() {
        let rows = vec![vec![int(1)]];
        assert!(!recession_cone_is_trivial(&rows, 1));
        assert!(integer_points(&rows, &[int(0)], 1).is_err());
    }
}
