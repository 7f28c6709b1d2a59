//! Deterministic random sampling of group elements and nilpotent matrices.
//!
//! Entries are small rationals (numerator and denominator in `[-9, 9]`)
//! so that exact arithmetic stays cheap. The generator state lives in a
//! [`Sampler`] value that callers own; nothing is shared.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::linalg::{rat, ratio, Rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Parabolic,
    Unipotent,
    Nilpotent,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn small_rat(&mut self) -> Rat {
        let p = self.int_in(-9, 9);
        let q = self.int_in(1, 9);
        ratio(p, q)
    }

    pub fn nonzero_small_rat(&mut self) -> Rat {
        loop {
            let v = self.small_rat();
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Small rational that is zero with probability `p_zero`.
    fn sparse_rat(&mut self, p_zero: f64) -> Rat {
        if self.coin(p_zero) {
            Rat::zero()
        } else {
            self.nonzero_small_rat()
        }
    }

    /// Invertible block-upper-triangular matrix for `blocks`.
    ///
    /// Each diagonal block is `L D U` with unitriangular `L`, `U` and a
    /// nonzero diagonal `D`, so invertibility holds by construction.
    pub fn parabolic(&mut self, blocks: &BlockData) -> RatMatrix {
        let n = blocks.n();
        let mut g = RatMatrix::zeros(n, n);
        for k in 1..=blocks.p() {
            let (lo, b) = (blocks.d(k - 1), blocks.b(k));
            let diag = self.gl(b, false);
            for i in 0..b {
                for j in 0..b {
                    g[(lo + i, lo + j)] = diag[(i, j)].clone();
                }
            }
            for j in blocks.d(k)..n {
                for i in lo..lo + b {
                    g[(i, j)] = self.sparse_rat(0.3);
                }
            }
        }
        g
    }

    pub fn borel(&mut self, n: usize) -> RatMatrix {
        self.parabolic(&BlockData::borel(n).expect("n >= 1"))
    }

    pub fn unipotent(&mut self, n: usize) -> RatMatrix {
        let mut u = RatMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                u[(i, j)] = self.sparse_rat(0.3);
            }
        }
        u
    }

    pub fn diagonal(&mut self, n: usize) -> RatMatrix {
        let mut t = RatMatrix::zeros(n, n);
        for i in 0..n {
            t[(i, i)] = self.nonzero_small_rat();
        }
        t
    }

    /// Invertible `n x n` matrix `L D U`, optionally preceded by a random
    /// row permutation.
    pub fn gl(&mut self, n: usize, permute: bool) -> RatMatrix {
        let mut l = RatMatrix::identity(n);
        let mut u = RatMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.sparse_rat(0.5);
                u[(j, i)] = self.sparse_rat(0.5);
            }
        }
        let d = self.diagonal(n);
        let mut g = &(&l * &d) * &u;
        if permute {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut self.rng);
            let mut pg = RatMatrix::zeros(n, n);
            for (i, &pi) in perm.iter().enumerate() {
                for j in 0..n {
                    pg[(i, j)] = g[(pi, j)].clone();
                }
            }
            g = pg;
        }
        g
    }

    /// Random partition of `n` into parts of size at most `x`; half of the
    /// time the maximal one `(x, x, ..., r)`.
    pub fn partition(&mut self, n: usize, x: usize) -> Vec<usize> {
        let greedy = self.coin(0.5);
        let mut rem = n;
        let mut parts = Vec::new();
        while rem > 0 {
            let cap = x.min(rem);
            let part = if greedy { cap } else { self.rng.gen_range(1..=cap) };
            parts.push(part);
            rem -= part;
        }
        parts
    }

    /// Strictly lower triangular nilpotent matrix whose Jordan chains are
    /// given by `parts`, mixed by a random lower unitriangular conjugation.
    pub fn staircase(&mut self, parts: &[usize]) -> RatMatrix {
        let n: usize = parts.iter().sum();
        let mut n0 = RatMatrix::zeros(n, n);
        let mut start = 0;
        for &len in parts {
            for t in 0..len.saturating_sub(1) {
                n0[(start + t + 1, start + t)] = rat(1);
            }
            start += len;
        }
        let mut l = RatMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.sparse_rat(0.6);
            }
        }
        let linv = l.inverse().expect("unitriangular");
        &(&l * &n0) * &linv
    }

    /// `g N0 g^-1` with `N0` a random staircase with `N0^x = 0`.
    pub fn nilpotent(&mut self, n: usize, x: usize) -> RatMatrix {
        let parts = self.partition(n, x);
        self.nilpotent_of_type(&parts)
    }

    /// Random conjugate of the staircase with Jordan chains `parts`.
    pub fn nilpotent_of_type(&mut self, parts: &[usize]) -> RatMatrix {
        let n0 = self.staircase(parts);
        let permute = self.coin(0.7);
        let g = self.gl(n0.rows(), permute);
        let ginv = g.inverse().expect("sampled invertible");
        &(&g * &n0) * &ginv
    }

    /// Random nilpotent with a single Jordan block.
    pub fn regular_nilpotent(&mut self, n: usize) -> RatMatrix {
        self.nilpotent_of_type(&[n])
    }

    /// Random element of the space of U-normal forms: strictly lower
    /// triangular with a nonzero subdiagonal. Entries are integers drawn
    /// from `[-range, range]`.
    pub fn h_u(&mut self, n: usize, range: i64) -> RatMatrix {
        let mut h = RatMatrix::zeros(n, n);
        for i in 1..n {
            for j in 0..i {
                h[(i, j)] = if i == j + 1 {
                    loop {
                        let v = self.int_in(-range, range);
                        if v != 0 {
                            break rat(v);
                        }
                    }
                } else {
                    rat(self.int_in(-range, range))
                };
            }
        }
        h
    }
}

/// One-shot sampling entry point.
///
/// `x` is only consulted for [`SampleKind::Nilpotent`].
pub fn sample(kind: SampleKind, blocks: &BlockData, x: usize, seed: u64) -> Result<RatMatrix> {
    let mut s = Sampler::new(seed);
    let n = blocks.n();
    match kind {
        SampleKind::Parabolic => Ok(s.parabolic(blocks)),
        SampleKind::Unipotent => Ok(s.unipotent(n)),
        SampleKind::Nilpotent => {
            if x == 0 || x > n {
                return Err(Error::Precondition(format!("nilpotency bound {x} outside 1..={n}")));
            }
            Ok(s.nilpotent(n, x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn unipotent_shape() {
        let b = BlockData::borel(2).unwrap();
        let u = sample(SampleKind::Unipotent, &b, 1, 7).unwrap();
        assert_eq!(u[(0, 0)], Rat::one());
        assert_eq!(u[(1, 1)], Rat::one());
        assert!(u[(1, 0)].is_zero());
    }

    #[test]
    fn parabolic_shape_and_invertible() {
        let b: BlockData = "2,1".parse().unwrap();
        for seed in 0..20 {
            let g = sample(SampleKind::Parabolic, &b, 1, seed).unwrap();
            assert!(g[(2, 0)].is_zero() && g[(2, 1)].is_zero());
            assert!(!g.det().unwrap().is_zero());
        }
    }

    #[test]
    fn nilpotent_membership() {
        let b = BlockData::borel(3).unwrap();
        let mut nonzero = 0;
        for seed in 0..30 {
            let m = sample(SampleKind::Nilpotent, &b, 2, seed).unwrap();
            assert!(m.is_x_nilpotent(2));
            if !m.is_zero() {
                nonzero += 1;
            }
        }
        assert!(nonzero > 25);
        assert!(sample(SampleKind::Nilpotent, &b, 4, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let b: BlockData = "1,2,1".parse().unwrap();
        for kind in [SampleKind::Parabolic, SampleKind::Unipotent, SampleKind::Nilpotent] {
            assert_eq!(sample(kind, &b, 3, 11).unwrap(), sample(kind, &b, 3, 11).unwrap());
        }
    }
}
