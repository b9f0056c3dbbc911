//! Ground-truth computations for SL(2): the paving of the truncated fiber by
//! affine cells, its moment graph, an independent one-variable GKM
//! presentation and point counts. Nothing here goes through the Cox ring or
//! the general Springer engine.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{int, Rational};
use crate::linalg::dense;
use crate::poly::CountPolynomial;
use crate::springer::{binomial, BettiTable};

/// Truncation data on the SL(2) fan: `D = n_B·D_B + n_B̄·D_B̄` (`None` means no
/// truncation on that side) and `d = val(α(γ))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Truncation {
    pub n_b: Option<i64>,
    pub n_b_bar: Option<i64>,
    pub d: u32,
}

/// One cell `C_n` of the paving, with its affine dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub index: i64,
    pub dim: usize,
}

/// The nonempty cells in increasing order of `n`; every other `C_n` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDecomposition {
    pub cells: Vec<Cell>,
}

/// Vertices `t_l` and one-dimensional orbits of the truncated fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentGraph {
    pub vertices: Vec<i64>,
    /// `(l, m, label)` with `l < m`; the stabilizer character is indexed by `label = l + m`.
    pub edges: Vec<(i64, i64, i64)>,
}

/// Graded pieces of the one-variable GKM presentation `ℚ[u^{±1}]_Γ ⊗ ℚ[x] / R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyPresentation {
    /// `#Γ(D)`, the rank of the free part in each degree.
    pub free_rank: usize,
    /// `dim R_n` for `n = 0..=d`.
    pub relation_dims: Vec<usize>,
    /// `dim H_{2n}` read off the presentation.
    pub betti: Vec<usize>,
}

impl Sl2Truncation {
    pub fn new(n_b: i64, n_b_bar: i64, d: u32) -> Self {
        Sl2Truncation {
            n_b: Some(n_b),
            n_b_bar: Some(n_b_bar),
            d,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.n_b.is_some() && self.n_b_bar.is_some()
    }

    fn bounds(&self) -> Result<(i64, i64)> {
        match (self.n_b, self.n_b_bar) {
            (Some(b), Some(b_bar)) => Ok((b, b_bar)),
            _ => Err(Error::InvalidInput("the truncation must be finite on both rays".into())),
        }
    }

    /// `m = n_B + n_B̄`.
    pub fn total(&self) -> Result<i64> {
        self.bounds().map(|(b, b_bar)| b + b_bar)
    }

    /// Whether the truncated torus fiber is nonempty.
    pub fn is_nonempty(&self) -> bool {
        match (self.n_b, self.n_b_bar) {
            (Some(b), Some(b_bar)) => b + b_bar >= 0,
            _ => true,
        }
    }

    /// Dimension of `C_n`, or `None` when the cell is empty.
    pub fn cell_dim(&self, n: i64) -> Result<Option<usize>> {
        let (n_b, n_b_bar) = self.bounds()?;
        if n < -n_b_bar || n > n_b {
            return Ok(None);
        }
        let d = self.d as i64;
        let size = 2 * n.abs();
        let cut = if n >= 0 {
            // C_n ≅ ε^m 𝒪 / ε^{2n} 𝒪 through the upper-triangular chart.
            0.max(n - n_b_bar).max(2 * n - d)
        } else {
            // The lower-triangular chart [[1, 0], [v, 1]]·ε^{nα^∨} with
            // v ∈ ε^{-2|n|+1}𝒪/𝒪: the unipotent coordinate starts one step
            // further, the truncation along D_B cuts at |n| − n_B, and the
            // Lie algebra condition cuts at 2|n| − d as in the upper chart.
            1.max(-n - n_b).max(size - d)
        };
        Ok(Some((size - cut.min(size)) as usize))
    }
}

pub fn cells(t: &Sl2Truncation) -> Result<CellDecomposition> {
    let (n_b, n_b_bar) = t.bounds()?;
    let mut out = Vec::new();
    for n in -n_b_bar..=n_b {
        if let Some(dim) = t.cell_dim(n)? {
            out.push(Cell { index: n, dim });
        }
    }
    Ok(CellDecomposition { cells: out })
}

fn assumptions() -> Vec<String> {
    vec!["large residue characteristic: val(2) = 0, so val(2t) = val(α(γ))".into()]
}

/// `b_{2i} = #{cells of dimension i}`.
pub fn betti(t: &Sl2Truncation) -> Result<BettiTable> {
    let decomposition = cells(t)?;
    let top = decomposition.cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let mut table = vec![0usize; top + 1];
    for c in &decomposition.cells {
        table[c.dim] += 1;
    }
    Ok(BettiTable {
        trace_poly: table.iter().map(|&b| b as i64).collect(),
        betti: table,
        assumptions: assumptions(),
    })
}

/// The chain-of-projective-spaces closed form: for `m ≥ d` the fiber is a chain
/// of `m − d + 1` copies of `ℙ^d` (`b_{2i} = 1` for `i < d`, `b_{2d} = m − d + 1`);
/// for `0 ≤ m < d` it is `ℙ^m`.
pub fn closed_form_betti(d: u32, m: i64) -> Vec<usize> {
    if m < 0 {
        return vec![0];
    }
    let d = d as usize;
    let m = m as usize;
    if m >= d {
        let mut out = vec![1; d + 1];
        out[d] = m - d + 1;
        out
    } else {
        vec![1; m + 1]
    }
}

pub fn fixed_points_and_edges(t: &Sl2Truncation) -> Result<MomentGraph> {
    let (n_b, n_b_bar) = t.bounds()?;
    let vertices: Vec<i64> = (-n_b_bar..=n_b).collect();
    let d = t.d as i64;
    let mut edges = Vec::new();
    for &l in &vertices {
        for &m in vertices.iter().filter(|&&m| m > l && m - l <= d) {
            edges.push((l, m, l + m));
        }
    }
    Ok(MomentGraph { vertices, edges })
}

/// The presentation computed with dense linear algebra on coefficient vectors
/// indexed by the weight window `Γ(D) = {l : −n_B ≤ l ≤ n_B̄}`.
///
/// In 𝒮-degree `n` the relations are the window translates of `(1 − u)^k` for
/// `n < k ≤ d` (only then does `ker ∂^k` meet degree `n`); the kernel of
/// `∂: V_n → V_{n−1}/R_{n−1}` is `R_{n−1}` itself, so `b_0 = #Γ − dim R_0` and
/// `b_n = dim R_{n−1} − dim R_n`.
pub fn gkm_presentation(t: &Sl2Truncation) -> Result<HomologyPresentation> {
    let (n_b, n_b_bar) = t.bounds()?;
    let width = (n_b + n_b_bar + 1).max(0) as usize;
    let d = t.d as usize;
    let relation_dim = |n: usize| -> usize {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for k in (n + 1)..=d {
            for start in 0..width.saturating_sub(k) {
                let mut row = vec![int(0); width];
                for j in 0..=k {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    row[start + j] = int(sign * binomial(k, j));
                }
                rows.push(row);
            }
        }
        dense::rank_of(&rows)
    };
    let relation_dims: Vec<usize> = (0..=d).map(relation_dim).collect();
    let mut betti = vec![width - relation_dims[0]];
    for n in 1..=d {
        betti.push(relation_dims[n - 1] - relation_dims[n]);
    }
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    Ok(HomologyPresentation {
        free_rank: width,
        relation_dims,
        betti,
    })
}

/// `Σ_n q^{dim C_n}`.
pub fn point_count(t: &Sl2Truncation) -> Result<CountPolynomial> {
    let mut poly = CountPolynomial::zero();
    for c in cells(t)?.cells {
        poly = poly.add(&CountPolynomial::monomial(c.dim, 1));
    }
    Ok(poly)
}
