//! Exact sparse and dense linear algebra over a [`Field`].
//!
//! Sparse vectors are sorted `(index, value)` lists without explicit zeros.
//! [`Subspace`] keeps an echelon basis whose rows are normalized at their
//! leading column; reduction against it gives a canonical residue, so the
//! residue map is a concrete model of the quotient `V / W`.

use std::collections::BTreeMap;

use crate::field::{Field, Rational};

/// Sparse vector: sorted by index, no zero entries.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Builds a sparse vector from unsorted entries, merging duplicates.
pub fn sparse_from_entries<F: Field>(entries: impl IntoIterator<Item = (usize, F)>) -> SparseVec<F> {
    let mut map: BTreeMap<usize, F> = BTreeMap::new();
    for (i, v) in entries {
        if v.is_zero() {
            continue;
        }
        match map.get_mut(&i) {
            Some(slot) => *slot = slot.add(&v),
            None => {
                map.insert(i, v);
            }
        }
    }
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `x + c·y` for sparse vectors.
pub fn axpy<F: Field>(x: &SparseVec<F>, c: &F, y: &SparseVec<F>) -> SparseVec<F> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c.mul(&y[j].1)));
            j += 1;
        } else {
            let v = x[i].1.add(&c.mul(&y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Scalar multiple of a sparse vector.
pub fn scale<F: Field>(c: &F, x: &SparseVec<F>) -> SparseVec<F> {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, c.mul(v))).collect()
}

/// Shifts all indices of a sparse vector by `offset`.
pub fn shift<F: Field>(x: &SparseVec<F>, offset: usize) -> SparseVec<F> {
    x.iter().map(|(i, v)| (i + offset, v.clone())).collect()
}

/// Concatenation of sparse vectors living in consecutive blocks.
pub fn concat<F: Field>(blocks: &[(usize, &SparseVec<F>)]) -> SparseVec<F> {
    let mut out = Vec::new();
    for (offset, v) in blocks {
        out.extend(v.iter().map(|(i, x)| (i + offset, x.clone())));
    }
    out.sort_by_key(|(i, _)| *i);
    out
}

/// A linear map given by the images of the standard basis vectors.
#[derive(Clone, Debug)]
pub struct SparseMap<F> {
    pub source_dim: usize,
    pub target_dim: usize,
    pub columns: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMap<F> {
    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        SparseMap {
            source_dim,
            target_dim,
            columns: vec![Vec::new(); source_dim],
        }
    }

    pub fn apply(&self, x: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: SparseVec<F> = Vec::new();
        for (i, c) in x {
            acc = axpy(&acc, c, &self.columns[*i]);
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMap<F>) -> SparseMap<F> {
        assert_eq!(other.target_dim, self.source_dim, "dimension mismatch in composition");
        SparseMap {
            source_dim: other.source_dim,
            target_dim: self.target_dim,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// A subspace of `F^ambient` with an echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    rows: Vec<SparseVec<F>>,
    pivots: BTreeMap<usize, usize>,
}

impl<F: Field> Subspace<F> {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn spanned_by<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a SparseVec<F>>) -> Self {
        let mut s = Subspace::new(ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    /// The whole ambient space.
    pub fn full(ambient: usize) -> Self {
        let mut s = Subspace::new(ambient);
        for i in 0..ambient {
            s.insert(vec![(i, F::one())]);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Canonical residue of `v` modulo the subspace (zero at all pivot columns).
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut v = v.clone();
        let mut floor = 0usize;
        loop {
            let next = v
                .iter()
                .find(|(c, _)| *c >= floor && self.pivots.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            match next {
                None => return v,
                Some((col, coeff)) => {
                    let row = &self.rows[self.pivots[&col]];
                    v = axpy(&v, &coeff.neg(), row);
                    floor = col + 1;
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        debug_assert!(v.iter().all(|(i, _)| *i < self.ambient), "vector outside ambient space");
        let r = self.reduce(&v);
        match r.first() {
            None => false,
            Some((col, lead)) => {
                let col = *col;
                let inv = lead.inv();
                let row = scale(&inv, &r);
                self.pivots.insert(col, self.rows.len());
                self.rows.push(row);
                true
            }
        }
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &SparseMap<F>) -> Subspace<F> {
        let mut s = Subspace::new(map.target_dim);
        for r in &self.rows {
            s.insert(map.apply(r));
        }
        s
    }
}

/// Kernel of a linear map, as a basis of sparse vectors in the source space.
pub fn kernel<F: Field>(map: &SparseMap<F>) -> Vec<SparseVec<F>> {
    kernel_of_columns(&map.columns, map.target_dim)
}

/// Kernel of the map sending the `i`-th basis vector to `columns[i]`.
pub fn kernel_of_columns<F: Field>(columns: &[SparseVec<F>], target_dim: usize) -> Vec<SparseVec<F>> {
    let n = columns.len();
    let mut aug = Subspace::new(target_dim + n);
    for (i, c) in columns.iter().enumerate() {
        let mut row = c.clone();
        row.push((target_dim + i, F::one()));
        aug.insert(row);
    }
    aug.rows
        .iter()
        .filter(|r| r.first().is_some_and(|(c, _)| *c >= target_dim))
        .map(|r| r.iter().map(|(c, v)| (c - target_dim, v.clone())).collect())
        .collect()
}

/// Rank of a family of vectors.
pub fn rank<F: Field>(ambient: usize, vectors: &[SparseVec<F>]) -> usize {
    Subspace::spanned_by(ambient, vectors.iter()).dim()
}

/// Coordinates with respect to a linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates<F> {
    ambient: usize,
    count: usize,
    aug: Subspace<F>,
}

impl<F: Field> Coordinates<F> {
    /// Panics if the family is dependent.
    pub fn new(ambient: usize, family: &[SparseVec<F>]) -> Self {
        let mut aug = Subspace::new(ambient + family.len());
        for (j, v) in family.iter().enumerate() {
            let mut row = v.clone();
            row.push((ambient + j, F::one()));
            aug.insert(row);
        }
        let c = Coordinates {
            ambient,
            count: family.len(),
            aug,
        };
        assert!(
            c.aug.rows.iter().all(|r| r.first().is_some_and(|(col, _)| *col < ambient)),
            "family is linearly dependent"
        );
        c
    }

    /// Coefficients expressing `v` in the family, or `None` if `v` is outside its span.
    pub fn solve(&self, v: &SparseVec<F>) -> Option<Vec<F>> {
        let r = self.aug.reduce(v);
        if r.iter().any(|(c, _)| *c < self.ambient) {
            return None;
        }
        let mut out = vec![F::zero(); self.count];
        for (c, x) in r {
            out[c - self.ambient] = x.neg();
        }
        Some(out)
    }
}

/// A basis of `top / bottom` (requires `bottom ⊆ top`): vectors of `top`
/// whose residues modulo `bottom` are independent.
pub fn complement_basis<F: Field>(top: &Subspace<F>, bottom: &Subspace<F>) -> Vec<SparseVec<F>> {
    let mut seen = bottom.clone();
    let mut out = Vec::new();
    for r in top.basis() {
        if seen.insert(r.clone()) {
            out.push(r.clone());
        }
    }
    out
}

/// Trace of an endomorphism on the subquotient `top / bottom`.
///
/// `map` must preserve both subspaces.
pub fn subquotient_trace<F: Field>(top: &Subspace<F>, bottom: &Subspace<F>, map: impl Fn(&SparseVec<F>) -> SparseVec<F>) -> F {
    let reps = complement_basis(top, bottom);
    if reps.is_empty() {
        return F::zero();
    }
    let residues: Vec<SparseVec<F>> = reps.iter().map(|r| bottom.reduce(r)).collect();
    let coords = Coordinates::new(top.ambient(), &residues);
    let mut tr = F::zero();
    for (j, r) in reps.iter().enumerate() {
        let image = bottom.reduce(&map(r));
        let c = coords.solve(&image).expect("endomorphism does not preserve the subquotient");
        tr = tr.add(&c[j]);
    }
    tr
}

/// Dense rational matrix helpers for small geometric computations.
pub mod dense {
    use num_traits::Zero;

    use crate::field::int;

    use super::*;

    pub type QVec = Vec<Rational>;
    pub type QMat = Vec<QVec>;

    pub fn qvec(v: &[i64]) -> QVec {
        v.iter().map(|x| Rational::from_integer((*x).into())).collect()
    }

    pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> QVec {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> QVec {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(c: &Rational, a: &[Rational]) -> QVec {
        a.iter().map(|x| c * x).collect()
    }

    pub fn is_zero(a: &[Rational]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// Matrix-vector product with `m` given as a list of rows.
    pub fn mat_vec(m: &[QVec], v: &[Rational]) -> QVec {
        m.iter().map(|row| dot(row, v)).collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(m: &mut QMat) -> Vec<usize> {
        let rows = m.len();
        if rows == 0 {
            return Vec::new();
        }
        let cols = m[0].len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !Zero::is_zero(&m[i][c])) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !Zero::is_zero(&m[i][c]) {
                    let f = m[i][c].clone();
                    for j in 0..cols {
                        let delta = &f * &m[r][j];
                        m[i][j] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank_of(vectors: &[QVec]) -> usize {
        let mut m = vectors.to_vec();
        rref(&mut m).len()
    }

    /// Basis of `{x : row · x = 0 for every row}` in dimension `dim`.
    pub fn nullspace(rows: &[QVec], dim: usize) -> Vec<QVec> {
        if rows.is_empty() {
            return (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { int(1) } else { int(0) }).collect())
                .collect();
        }
        let mut m = rows.to_vec();
        let pivots = rref(&mut m);
        let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![int(0); dim];
                x[f] = int(1);
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[r][f].clone();
                }
                x
            })
            .collect()
    }

    /// Solves `Σ c_j columns[j] = target`; `None` if not in the span.
    /// Picks the solution with zero coefficients on non-pivot columns.
    pub fn solve_columns(columns: &[QVec], target: &[Rational]) -> Option<QVec> {
        let n = columns.len();
        let dim = target.len();
        let mut m: QMat = (0..dim)
            .map(|i| {
                let mut row: QVec = columns.iter().map(|c| c[i].clone()).collect();
                row.push(target[i].clone());
                row
            })
            .collect();
        let pivots = rref(&mut m);
        if pivots.contains(&n) {
            return None;
        }
        let mut x = vec![int(0); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[r][n].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix given by rows, or `None` if singular.
    pub fn inverse(m: &[QVec]) -> Option<QMat> {
        let n = m.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let mut aug: QMat = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { int(1) } else { int(0) }));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Basis of the intersection of two subspaces given by spanning sets.
    pub fn intersect(a: &[QVec], b: &[QVec], dim: usize) -> Vec<QVec> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // Solve Σ x_i a_i − Σ y_j b_j = 0.
        let cols: Vec<QVec> = a.iter().cloned().chain(b.iter().map(|v| v.iter().map(|x| -x).collect())).collect();
        let rows: QMat = (0..dim).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let sols = nullspace(&rows, cols.len());
        let mut out = Vec::new();
        for s in sols {
            let mut v = vec![int(0); dim];
            for (i, ai) in a.iter().enumerate() {
                for k in 0..dim {
                    v[k] += &s[i] * &ai[k];
                }
            }
            out.push(v);
        }
        basis_of(&out)
    }

    /// A basis (in echelon form) of the span of `vectors`.
    pub fn basis_of(vectors: &[QVec]) -> Vec<QVec> {
        let mut m = vectors.to_vec();
        let p = rref(&mut m);
        m.truncate(p.len());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn v(entries: &[(usize, i64)]) -> SparseVec<Rational> {
        sparse_from_entries(entries.iter().map(|(i, x)| (*i, int(*x))))
    }

    #[test]
    fn residues_are_canonical() {
        let mut s = Subspace::new(4);
        s.insert(v(&[(1, 2), (2, 1)]));
        s.insert(v(&[(0, 1), (1, 1)]));
        let a = v(&[(0, 1), (3, 1)]);
        let b = axpy(&a, &int(5), &v(&[(1, 2), (2, 1)]));
        assert_eq!(s.reduce(&a), s.reduce(&b));
        assert!(s.contains(&v(&[(0, 1), (1, 3), (2, 1)])));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let cols = vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[(0, 3)])];
        let ker = kernel_of_columns(&cols, 1);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let img = k.iter().fold(Vec::new(), |acc, (i, c)| axpy(&acc, c, &cols[*i]));
            assert!(img.is_empty());
        }
    }

    #[test]
    fn coordinates_solve() {
        let fam = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])];
        let c = Coordinates::new(3, &fam);
        assert_eq!(c.solve(&v(&[(0, 2), (1, 5), (2, 3)])), Some(vec![int(2), int(3)]));
        assert_eq!(c.solve(&v(&[(0, 1)])), None);
    }

    #[test]
    fn subquotient_trace_of_swap() {
        // top = span(e0, e1, e2), bottom = span(e0 + e1); swap e0 ↔ e1 and fix e2.
        let top = Subspace::<Rational>::full(3);
        let bottom = Subspace::spanned_by(3, [v(&[(0, 1), (1, 1)])].iter());
        let swap = |x: &SparseVec<Rational>| {
            sparse_from_entries(x.iter().map(|(i, c)| {
                (
                    if *i == 0 {
                        1
                    } else if *i == 1 {
                        0
                    } else {
                        2
                    },
                    c.clone(),
                )
            }))
        };
        // Quotient basis: e0 (acts by −1 modulo e0+e1) and e2 (fixed): trace 0.
        assert_eq!(subquotient_trace(&top, &bottom, swap), int(0));
    }

    #[test]
    fn dense_helpers() {
        use dense::*;
        let m = vec![qvec(&[2, 1]), qvec(&[1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_vec(&inv, &qvec(&[3, 2])), qvec(&[1, 1]));
        let ns = nullspace(&[qvec(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        let x = solve_columns(&[qvec(&[1, 0]), qvec(&[1, 1])], &qvec(&[3, 1])).unwrap();
        assert_eq!(x, qvec(&[2, 1]));
        let i = intersect(&[qvec(&[1, 0, 0]), qvec(&[0, 1, 0])], &[qvec(&[1, 1, 0]), qvec(&[0, 0, 1])], 3);
        assert_eq!(i.len(), 1);
    }
}
