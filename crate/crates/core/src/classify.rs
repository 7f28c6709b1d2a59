//! Classification of 2-nilpotent matrices into `P`-orbits.
//!
//! `P` stabilizes every flag space `F_k = span(e_1..e_{d_k})` and acts on
//! every quotient `V / F_k`, so the rank `r(k, l)` of `N` restricted to
//! `F_l` and projected to `V / F_k` is a `P`-invariant. For the orbit with
//! pattern `(p_{i,j})`, `c(k, l) = r(0, l) - r(k, l)` counts the arrows
//! with source `<= l` and target `<= k`; inclusion-exclusion then recovers
//! every `p_{i,j}`. The same table gives `a_k = d_k - r(0, k)` and
//! `b_{k,l} = d_l - r(k, l)`.

use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::linalg::{rat, RatMatrix};
use crate::patterns::Eolp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    /// `r[k][l]` for `0 <= k, l <= p`.
    pub r: Vec<Vec<usize>>,
    /// `a_1..a_p`.
    pub a: Vec<usize>,
    /// `b[k-1][l-1] = b_{k,l}`.
    pub b: Vec<Vec<usize>>,
}

fn check_square_zero(n: &RatMatrix, blocks: &BlockData) -> Result<()> {
    if !n.is_square() || n.rows() != blocks.n() {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix", blocks.n())));
    }
    if !n.is_x_nilpotent(2) {
        return Err(Error::NotNilpotent(2));
    }
    Ok(())
}

pub fn rank_profile(n: &RatMatrix, blocks: &BlockData) -> Result<RankProfile> {
    check_square_zero(n, blocks)?;
    Ok(rank_profile_unchecked(n, blocks))
}

/// Rank table without the nilpotency check; used for the hom-order of
/// arbitrary matrices.
pub(crate) fn rank_profile_unchecked(n: &RatMatrix, blocks: &BlockData) -> RankProfile {
    let p = blocks.p();
    let size = blocks.n();
    let r: Vec<Vec<usize>> =
        (0..=p).map(|k| (0..=p).map(|l| n.submatrix(blocks.d(k), size, 0, blocks.d(l)).rank()).collect()).collect();
    let a = (1..=p).map(|k| blocks.d(k) - r[0][k]).collect();
    let b = (1..=p).map(|k| (1..=p).map(|l| blocks.d(l) - r[k][l]).collect()).collect();
    RankProfile { r, a, b }
}

/// The orbit label of a 2-nilpotent `N`. Refuses matrices with `N^2 != 0`.
pub fn classify(n: &RatMatrix, blocks: &BlockData) -> Result<Eolp> {
    let prof = rank_profile(n, blocks)?;
    let p = blocks.p();
    let c = |k: usize, l: usize| (prof.r[0][l] - prof.r[k][l]) as i64;
    let mut arrows = vec![vec![0usize; p]; p];
    for i in 1..=p {
        for j in 1..=p {
            let m = c(i, j) - c(i - 1, j) - c(i, j - 1) + c(i - 1, j - 1);
            if m < 0 {
                return Err(Error::Construction(format!("negative arrow count at {j}->{i}")));
            }
            arrows[i - 1][j - 1] = m as usize;
        }
    }
    Eolp::from_arrows(blocks, arrows)
}

/// A 0/1 matrix in the orbit of `e`: every arrow `j -> i` gets a fresh basis
/// vector of block `j` (source) and of block `i` (target), and `N` maps the
/// source to the target.
pub fn representative_matrix(e: &Eolp, blocks: &BlockData) -> Result<RatMatrix> {
    if !e.validate(blocks)? {
        return Err(Error::Pattern(format!("{e} is not a valid pattern for blocks {blocks}")));
    }
    let p = blocks.p();
    let mut next: Vec<usize> = (0..p).map(|k| blocks.d(k)).collect();
    let mut n = RatMatrix::zeros(blocks.n(), blocks.n());
    for i in 0..p {
        for j in 0..p {
            for _ in 0..e.arrows()[i][j] {
                let src = next[j];
                next[j] += 1;
                let tgt = next[i];
                next[i] += 1;
                n[(tgt, src)] = rat(1);
            }
        }
    }
    Ok(n)
}
