//! Enhanced oriented link patterns: the combinatorial labels of
//! `P`-orbits on 2-nilpotent matrices.
//!
//! A pattern on `p` vertices is an arrow-multiplicity table plus dot
//! counts. `arrows[i][j]` counts arrows `j -> i` (0-based here, 1-based in
//! JSON and display), which is the multiplicity of `U(i, j)` in the
//! corresponding representation; `dots[i]` is the multiplicity of `V(i)`.
//! Every arrow end uses one unit of capacity at its vertex, so a loop uses
//! two.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::quiver::{Decomposition, Label};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eolp {
    blocks: BlockData,
    arrows: Vec<Vec<usize>>,
    dots: Vec<usize>,
}

impl Eolp {
    /// Builds a pattern, checking only table shapes. Use [`Eolp::validate`]
    /// for the capacity condition.
    pub fn new(blocks: BlockData, arrows: Vec<Vec<usize>>, dots: Vec<usize>) -> Result<Self> {
        let p = blocks.p();
        if arrows.len() != p || arrows.iter().any(|r| r.len() != p) || dots.len() != p {
            return Err(Error::Pattern(format!("tables must be {p}x{p} and length {p}")));
        }
        Ok(Self { blocks, arrows, dots })
    }

    /// Pattern with the given arrows and dots filling the remaining
    /// capacity. Fails if some vertex is overloaded.
    pub fn from_arrows(blocks: &BlockData, arrows: Vec<Vec<usize>>) -> Result<Self> {
        let p = blocks.p();
        if arrows.len() != p || arrows.iter().any(|r| r.len() != p) {
            return Err(Error::Pattern(format!("arrow table must be {p}x{p}")));
        }
        let loads = arrow_loads(&arrows);
        let mut dots = Vec::with_capacity(p);
        for (i, &load) in loads.iter().enumerate() {
            let b = blocks.b(i + 1);
            if load > b {
                return Err(Error::Pattern(format!(
                    "vertex {} carries {load} arrow ends but b_{} = {b}",
                    i + 1,
                    i + 1
                )));
            }
            dots.push(b - load);
        }
        Ok(Self { blocks: blocks.clone(), arrows, dots })
    }

    /// The all-dots pattern (orbit of the zero matrix).
    pub fn zero(blocks: &BlockData) -> Self {
        let p = blocks.p();
        Self { blocks: blocks.clone(), arrows: vec![vec![0; p]; p], dots: blocks.sizes().to_vec() }
    }

    pub fn blocks(&self) -> &BlockData {
        &self.blocks
    }

    pub fn p(&self) -> usize {
        self.arrows.len()
    }

    /// Number of arrows `j -> i` (1-based).
    pub fn arrow(&self, i: usize, j: usize) -> usize {
        self.arrows[i - 1][j - 1]
    }

    /// Dots at vertex `i` (1-based).
    pub fn dot(&self, i: usize) -> usize {
        self.dots[i - 1]
    }

    pub fn arrows(&self) -> &[Vec<usize>] {
        &self.arrows
    }

    pub fn dots(&self) -> &[usize] {
        &self.dots
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().flatten().sum()
    }

    /// Whether arrow ends plus dots meet `b_i` exactly at every vertex.
    pub fn validate(&self, blocks: &BlockData) -> Result<bool> {
        if self.p() != blocks.p() {
            return Err(Error::Pattern(format!("pattern has {} vertices, blocks have {}", self.p(), blocks.p())));
        }
        let loads = arrow_loads(&self.arrows);
        Ok((0..self.p()).all(|i| loads[i] + self.dots[i] == blocks.b(i + 1)))
    }

    pub fn to_multiplicities(&self) -> Decomposition {
        let mut d = Decomposition::new();
        for i in 0..self.p() {
            for j in 0..self.p() {
                d.add(Label::U(i + 1, j + 1), self.arrows[i][j]);
            }
            d.add(Label::V(i + 1), self.dots[i]);
        }
        d
    }

    pub fn from_multiplicities(d: &Decomposition, blocks: &BlockData) -> Result<Self> {
        let p = blocks.p();
        let mut arrows = vec![vec![0; p]; p];
        let mut dots = vec![0; p];
        for (label, m) in d.iter() {
            if label.max_index() > p {
                return Err(Error::Index(format!("{label} needs more than {p} vertices")));
            }
            match label {
                Label::U(i, j) => arrows[i - 1][j - 1] += m,
                Label::V(i) => dots[i - 1] += m,
            }
        }
        let e = Self { blocks: blocks.clone(), arrows, dots };
        if !e.validate(blocks)? {
            return Err(Error::DimensionVector(format!(
                "{d} does not have dimension vector {:?}",
                blocks.dimension_vector()
            )));
        }
        Ok(e)
    }

    /// Short human-readable form, e.g. `1->2 2->2 | dots 0,1`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.p() {
            for j in 0..self.p() {
                let m = self.arrows[i][j];
                if m == 1 {
                    parts.push(format!("{}->{}", j + 1, i + 1));
                } else if m > 1 {
                    parts.push(format!("{}->{}x{m}", j + 1, i + 1));
                }
            }
        }
        let dots: Vec<String> = self.dots.iter().map(ToString::to_string).collect();
        if parts.is_empty() {
            format!("dots {}", dots.join(","))
        } else {
            format!("{} | dots {}", parts.join(" "), dots.join(","))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Eolp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn arrow_loads(arrows: &[Vec<usize>]) -> Vec<usize> {
    let p = arrows.len();
    (0..p).map(|i| (0..p).map(|j| arrows[i][j] + arrows[j][i]).sum()).collect()
}

/// All arrow tables whose loads fit the capacities `caps`, in
/// lexicographic order of the row-major flattened table. Zero capacities
/// are allowed.
pub fn arrow_tables(caps: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(pos: usize, p: usize, rem: &mut Vec<usize>, table: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if pos == p * p {
            out.push(table.clone());
            return;
        }
        let (i, j) = (pos / p, pos % p);
        let max = if i == j { rem[i] / 2 } else { rem[i].min(rem[j]) };
        for m in 0..=max {
            if i == j {
                rem[i] -= 2 * m;
            } else {
                rem[i] -= m;
                rem[j] -= m;
            }
            table[i][j] = m;
            rec(pos + 1, p, rem, table, out);
            if i == j {
                rem[i] += 2 * m;
            } else {
                rem[i] += m;
                rem[j] += m;
            }
        }
        table[i][j] = 0;
    }
    let p = caps.len();
    let mut out = Vec::new();
    rec(0, p, &mut caps.to_vec(), &mut vec![vec![0; p]; p], &mut out);
    out
}

/// All valid patterns of the given type in canonical order.
pub fn enumerate(blocks: &BlockData) -> Vec<Eolp> {
    arrow_tables(blocks.sizes())
        .into_iter()
        .map(|t| Eolp::from_arrows(blocks, t).expect("tables respect capacities"))
        .collect()
}

/// Patterns as decompositions, for capacities that may include zeros
/// (as arise for summands of a representation).
pub fn enumerate_decompositions(caps: &[usize]) -> Vec<Decomposition> {
    arrow_tables(caps)
        .into_iter()
        .map(|t| {
            let p = caps.len();
            let loads = arrow_loads(&t);
            let mut d = Decomposition::new();
            for i in 0..p {
                for j in 0..p {
                    d.add(Label::U(i + 1, j + 1), t[i][j]);
                }
                d.add(Label::V(i + 1), caps[i] - loads[i]);
            }
            d
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    from: usize,
    to: usize,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct EolpJson {
    blocks: BlockData,
    arrows: Vec<ArrowJson>,
    dots: Vec<usize>,
}

impl Serialize for Eolp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut arrows = Vec::new();
        for i in 0..self.p() {
            for j in 0..self.p() {
                if self.arrows[i][j] > 0 {
                    arrows.push(ArrowJson { from: j + 1, to: i + 1, mult: self.arrows[i][j] });
                }
            }
        }
        EolpJson { blocks: self.blocks.clone(), arrows, dots: self.dots.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Eolp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EolpJson::deserialize(d)?;
        let p = raw.blocks.p();
        let mut arrows = vec![vec![0; p]; p];
        for a in &raw.arrows {
            if a.from == 0 || a.to == 0 || a.from > p || a.to > p {
                return Err(D::Error::custom(format!("arrow {}->{} outside 1..={p}", a.from, a.to)));
            }
            if arrows[a.to - 1][a.from - 1] != 0 {
                return Err(D::Error::custom(format!("arrow {}->{} listed twice", a.from, a.to)));
            }
            arrows[a.to - 1][a.from - 1] = a.mult;
        }
        let e = Eolp::new(raw.blocks, arrows, raw.dots).map_err(D::Error::custom)?;
        match e.validate(&e.blocks) {
            Ok(true) => Ok(e),
            _ => Err(D::Error::custom("arrow ends and dots do not match the block sizes")),
        }
    }
}
