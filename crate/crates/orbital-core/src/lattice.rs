//! Integer lattice utilities: Smith normal form, saturated sublattices,
//! adapted bases and small congruence systems.

use num_integer::Integer;

use crate::field::{frac, int, Rational};

/// Integer vector.
pub type IVec = Vec<i64>;
/// Integer matrix stored as rows.
pub type IMat = Vec<IVec>;

pub fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn iadd(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn isub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn iscale(c: i64, a: &[i64]) -> IVec {
    a.iter().map(|x| c * x).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_vec(m: &[IVec], v: &[i64]) -> IVec {
    m.iter().map(|row| idot(row, v)).collect()
}

pub fn mat_mul(a: &[IVec], b: &[IVec]) -> IMat {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

pub fn transpose(m: &[IVec], cols: usize) -> IMat {
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// Greatest common divisor of the entries (0 for the zero vector).
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_on_ray(v: &[Rational]) -> IVec {
    let den = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: IVec = v
        .iter()
        .map(|x| i64::try_from((x * Rational::from_integer(den.clone())).to_integer()).expect("coordinate overflow"))
        .collect();
    let g = content(&ints);
    assert!(g != 0, "zero vector has no primitive generator");
    ints.iter().map(|x| x / g).collect()
}

/// Result of a Smith normal form computation: `u · a · v = diag`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    pub v_inv: IMat,
    pub diagonal: IVec,
    pub rank: usize,
}

/// Smith normal form of an `m × n` integer matrix.
pub fn smith(a: &[IVec], cols: usize) -> Smith {
    let m = a.len();
    let n = cols;
    let mut d: IMat = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Pick the nonzero entry of least absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        v_inv.swap(t, pj);
        let mut clean = true;
        for i in t + 1..m {
            let q = Integer::div_floor(&d[i][t], &d[t][t]);
            if q != 0 {
                row_axpy(&mut d, i, t, -q);
                row_axpy(&mut u, i, t, -q);
            }
            if d[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..n {
            let q = Integer::div_floor(&d[t][j], &d[t][t]);
            if q != 0 {
                col_axpy(&mut d, j, t, -q);
                col_axpy(&mut v, j, t, -q);
                // v_inv gets the inverse row operation.
                row_axpy(&mut v_inv, t, j, q);
            }
            if d[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the remaining block by the pivot.
        let p = d[t][t];
        let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| d[i][j] % p != 0);
        if let Some((i, _)) = bad {
            row_axpy(&mut d, t, i, 1);
            row_axpy(&mut u, t, i, 1);
            continue;
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| d[i][i]).collect::<IVec>();
    let rank = diagonal.iter().take_while(|x| **x != 0).count();
    Smith { u, v, v_inv, diagonal, rank }
}

fn swap_cols(m: &mut [IVec], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_axpy(m: &mut [IVec], target: usize, source: usize, c: i64) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src) {
        *x += c * s;
    }
}

fn col_axpy(m: &mut [IVec], target: usize, source: usize, c: i64) {
    for row in m.iter_mut() {
        row[target] += c * row[source];
    }
}

/// A ℤ-basis of `ℤ^n` adapted to a saturated sublattice `K`:
/// the first `complement_rank` columns span a complement, the remaining
/// `kernel_rank` columns span `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSplit {
    /// Basis vectors (each an element of `ℤ^n`).
    pub basis: Vec<IVec>,
    /// Rows of the inverse change of basis: `coords = inverse · x`.
    pub inverse: IMat,
    pub complement_rank: usize,
    pub kernel_rank: usize,
}

impl LatticeSplit {
    /// Adapted basis for the integer kernel of the map `x ↦ (row · x)_row`.
    pub fn kernel_of(rows: &[IVec], n: usize) -> Self {
        if rows.is_empty() {
            return LatticeSplit {
                basis: identity(n),
                inverse: identity(n),
                complement_rank: 0,
                kernel_rank: n,
            };
        }
        let s = smith(rows, n);
        let basis = transpose(&s.v, n);
        LatticeSplit {
            basis,
            inverse: s.v_inv,
            complement_rank: s.rank,
            kernel_rank: n - s.rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates `(complement part, kernel part)` of `x`.
    pub fn split(&self, x: &[i64]) -> (IVec, IVec) {
        let c = mat_vec(&self.inverse, x);
        let (a, b) = c.split_at(self.complement_rank);
        (a.to_vec(), b.to_vec())
    }

    /// Reassembles a lattice vector from its two coordinate blocks.
    pub fn join(&self, complement: &[i64], kernel: &[i64]) -> IVec {
        let n = self.dim();
        let mut x = vec![0i64; n];
        for (c, b) in complement.iter().chain(kernel).zip(&self.basis) {
            for k in 0..n {
                x[k] += c * b[k];
            }
        }
        x
    }

    pub fn complement_basis(&self) -> &[IVec] {
        &self.basis[..self.complement_rank]
    }

    pub fn kernel_basis(&self) -> &[IVec] {
        &self.basis[self.complement_rank..]
    }

    /// A different adapted basis with the same kernel: each complement vector
    /// is sheared by `shear` times the first kernel vector. Used to check that
    /// results do not depend on the choice of complement.
    pub fn sheared(&self, shear: i64) -> LatticeSplit {
        if self.kernel_rank == 0 || self.complement_rank == 0 {
            return self.clone();
        }
        let k0 = self.basis[self.complement_rank].clone();
        let mut basis = self.basis.clone();
        for b in basis.iter_mut().take(self.complement_rank) {
            *b = iadd(b, &iscale(shear, &k0));
        }
        // New coordinates: kernel coordinate 0 loses shear × (sum of complement coordinates).
        let mut inverse = self.inverse.clone();
        let k_row = self.complement_rank;
        for i in 0..self.complement_rank {
            let row = self.inverse[i].clone();
            for (x, r) in inverse[k_row].iter_mut().zip(row) {
                *x -= shear * r;
            }
        }
        LatticeSplit {
            basis,
            inverse,
            complement_rank: self.complement_rank,
            kernel_rank: self.kernel_rank,
        }
    }
}

/// Solves `a · θ ≡ w (mod ℤ^m)` for `θ ∈ (ℚ/ℤ)^n`; returns a rational
/// solution or `None` when the system is inconsistent.
pub fn solve_congruences(a: &[IVec], cols: usize, w: &[Rational]) -> Option<Vec<Rational>> {
    if a.is_empty() {
        return Some(vec![int(0); cols]);
    }
    let s = smith(a, cols);
    let uw: Vec<Rational> = s.u.iter().map(|row| row.iter().zip(w).map(|(x, y)| int(*x) * y).sum()).collect();
    if uw.iter().skip(s.rank).any(|val| frac(val) != int(0)) {
        return None;
    }
    let mut theta_prime = vec![int(0); cols];
    for i in 0..s.rank {
        theta_prime[i] = &uw[i] / int(s.diagonal[i]);
    }
    // θ = v · θ'
    let theta: Vec<Rational> =
        s.v.iter()
            .map(|row| row.iter().zip(&theta_prime).map(|(x, y)| int(*x) * y).sum())
            .collect();
    Some(theta.iter().map(frac).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn smith_is_a_valid_factorization() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a, 3);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(d[i][j], 0);
                }
            }
        }
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(3));
    }

    #[test]
    fn kernel_split_of_single_functional() {
        let split = LatticeSplit::kernel_of(&[vec![1, 1]], 2);
        assert_eq!(split.complement_rank, 1);
        assert_eq!(split.kernel_rank, 1);
        let k = &split.kernel_basis()[0];
        assert_eq!(k[0] + k[1], 0);
        let x = vec![3, -5];
        let (c, kk) = split.split(&x);
        assert_eq!(split.join(&c, &kk), x);
        let sh = split.sheared(2);
        let (c2, k2) = sh.split(&x);
        assert_eq!(sh.join(&c2, &k2), x);
        assert_eq!(mat_mul(&sh.inverse, &transpose(&sh.basis, 2)), identity(2));
    }

    #[test]
    fn congruences() {
        // 2θ ≡ 1/2 has solution 1/4.
        let sol = solve_congruences(&[vec![2]], 1, &[rat(1, 2)]).unwrap();
        assert_eq!(frac(&(int(2) * &sol[0])), rat(1, 2));
        // θ1 ≡ 1/3, θ1 ≡ 1/2 is inconsistent.
        assert!(solve_congruences(&[vec![1], vec![1]], 1, &[rat(1, 3), rat(1, 2)]).is_none());
        // 0·θ ≡ 1/2 is inconsistent.
        assert!(solve_congruences(&[vec![0]], 1, &[rat(1, 2)]).is_none());
    }

    #[test]
    fn primitive_generators() {
        assert_eq!(primitive_on_ray(&[rat(2, 3), rat(-4, 3)]), vec![1, -2]);
    }
}
