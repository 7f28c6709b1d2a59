use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes `(b_1, ..., b_p)` of a standard parabolic subgroup of `GL_n`.
///
/// All sizes one is the Borel subgroup; a single block is `GL_n` itself.
/// Vertices and blocks are 1-based in the public API, matching the JSON
/// formats; matrix rows and columns are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockData {
    sizes: Vec<usize>,
}

impl BlockData {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Blocks("at least one block is required".into()));
        }
        if let Some(i) = sizes.iter().position(|&b| b == 0) {
            return Err(Error::Blocks(format!("block {} has size 0", i + 1)));
        }
        Ok(Self { sizes })
    }

    pub fn borel(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of block `i` (1-based).
    pub fn b(&self, i: usize) -> usize {
        self.sizes[i - 1]
    }

    pub fn p(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Partial sum `d_k = b_1 + ... + b_k`, with `d_0 = 0`.
    pub fn d(&self, k: usize) -> usize {
        self.sizes[..k].iter().sum()
    }

    /// The dimension vector `(d_1, ..., d_p)`.
    pub fn dimension_vector(&self) -> Vec<usize> {
        (1..=self.p()).map(|k| self.d(k)).collect()
    }

    /// `dim P = sum_i sum_{x <= i} b_i b_x`.
    pub fn dim_p(&self) -> usize {
        (0..self.p()).map(|i| self.sizes[i] * self.sizes[..=i].iter().sum::<usize>()).sum()
    }

    pub fn is_borel(&self) -> bool {
        self.sizes.iter().all(|&b| b == 1)
    }

    /// 1-based block containing the 0-based basis index `idx`.
    pub fn block_of(&self, idx: usize) -> usize {
        let mut acc = 0;
        for (k, &b) in self.sizes.iter().enumerate() {
            acc += b;
            if idx < acc {
                return k + 1;
            }
        }
        panic!("index {idx} outside n = {}", self.n())
    }

    /// Row-major `n*n` mask of the entries allowed in `P`.
    pub fn pattern_mask(&self) -> Vec<bool> {
        let n = self.n();
        let blk: Vec<usize> = (0..n).map(|i| self.block_of(i)).collect();
        (0..n * n).map(|k| blk[k / n] <= blk[k % n]).collect()
    }

    /// All block data with `n` total size (compositions of `n`), in
    /// lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<BlockData> {
        fn rec(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<BlockData>) {
            if rem == 0 {
                out.push(BlockData { sizes: cur.clone() });
                return;
            }
            for b in 1..=rem {
                cur.push(b);
                rec(rem - b, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for BlockData {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BlockData> for Vec<usize> {
    fn from(b: BlockData) -> Self {
        b.sizes
    }
}

impl FromStr for BlockData {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Blocks(format!("not a block size: {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

impl fmt::Display for BlockData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let b: BlockData = "2,1".parse().unwrap();
        assert_eq!(b.n(), 3);
        assert_eq!(b.p(), 2);
        assert_eq!(b.dimension_vector(), vec![2, 3]);
        assert_eq!(b.d(0), 0);
        assert_eq!(b.dim_p(), 7);
        assert_eq!(BlockData::borel(2).unwrap().dim_p(), 3);
        assert_eq!(BlockData::new(vec![4]).unwrap().dim_p(), 16);
        assert_eq!(b.block_of(1), 1);
        assert_eq!(b.block_of(2), 2);
    }

    #[test]
    fn dim_p_counts_mask() {
        for n in 1..=5 {
            for b in BlockData::all_of_size(n) {
                assert_eq!(b.pattern_mask().iter().filter(|&&x| x).count(), b.dim_p());
            }
        }
    }

    #[test]
    fn compositions() {
        assert_eq!(BlockData::all_of_size(4).len(), 8);
        assert!(BlockData::all_of_size(0).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BlockData::new(vec![]).is_err());
        assert!(BlockData::new(vec![1, 0]).is_err());
        assert!("1,x".parse::<BlockData>().is_err());
        assert!(serde_json::from_str::<BlockData>("[2,0]").is_err());
    }
}
