//! Representations of the linear quiver `1 -> 2 -> ... -> p` with a loop
//! at `p`, bound by `loop^x = 0`.
//!
//! For `x = 2` the indecomposables with injective chain maps are `V(i)`
//! (one-dimensional from vertex `i` on, zero loop) and `U(i, j)`, whose
//! source vector starts at vertex `j` and whose target vector starts at
//! vertex `i`; the loop sends source to target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::linalg::{rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `U(i, j)`: arrow `j -> i`.
    U(usize, usize),
    V(usize),
}

impl Label {
    pub fn max_index(&self) -> usize {
        match *self {
            Label::U(i, j) => i.max(j),
            Label::V(i) => i,
        }
    }

    fn min_index(&self) -> usize {
        match *self {
            Label::U(i, j) => i.min(j),
            Label::V(i) => i,
        }
    }

    /// Dimension at vertex `k` (1-based).
    pub fn dim_at(&self, k: usize) -> usize {
        match *self {
            Label::U(i, j) => usize::from(k >= j) + usize::from(k >= i),
            Label::V(i) => usize::from(k >= i),
        }
    }

    /// All `x = 2` indecomposables on `p` vertices.
    pub fn all(p: usize) -> Vec<Label> {
        let mut out = Vec::new();
        for i in 1..=p {
            for j in 1..=p {
                out.push(Label::U(i, j));
            }
        }
        out.extend((1..=p).map(Label::V));
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::U(i, j) => write!(f, "U{i},{j}"),
            Label::V(i) => write!(f, "V{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an indecomposable label: {s:?}"));
        let s = s.trim();
        let (head, rest) = s.split_at(s.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(s.len()));
        let rest = rest.trim_start_matches('(').trim_end_matches(')');
        let nums: Vec<usize> =
            rest.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
        let label = match (head, nums.as_slice()) {
            ("U", &[i, j]) => Label::U(i, j),
            ("V", &[i]) => Label::V(i),
            _ => return Err(bad()),
        };
        if label.min_index() == 0 {
            return Err(Error::Index(format!("{s}: vertices are 1-based")));
        }
        Ok(label)
    }
}

/// A multiset of indecomposable labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, usize>", into = "BTreeMap<String, usize>")]
pub struct Decomposition {
    parts: BTreeMap<Label, usize>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(label: Label) -> Self {
        let mut d = Self::new();
        d.add(label, 1);
        d
    }

    pub fn add(&mut self, label: Label, mult: usize) {
        if mult > 0 {
            *self.parts.entry(label).or_insert(0) += mult;
        }
    }

    pub fn mult(&self, label: &Label) -> usize {
        self.parts.get(label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, usize)> {
        self.parts.iter().map(|(l, &m)| (l, m))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (l, m) in other.iter() {
            d.add(*l, m);
        }
        d
    }

    /// Whether no label occurs in both.
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.parts.keys().all(|l| other.mult(l) == 0)
    }

    pub fn max_index(&self) -> usize {
        self.parts.keys().map(Label::max_index).max().unwrap_or(0)
    }

    pub fn dimension_vector(&self, p: usize) -> Result<Vec<usize>> {
        if self.max_index() > p {
            return Err(Error::Index(format!("{self} needs more than {p} vertices")));
        }
        Ok((1..=p).map(|k| self.iter().map(|(l, m)| m * l.dim_at(k)).sum()).collect())
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> =
            self.iter().map(|(l, m)| if m == 1 { l.to_string() } else { format!("{l}^{m}") }).collect();
        f.write_str(&terms.join(" + "))
    }
}

impl FromStr for Decomposition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut d = Self::new();
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(d);
        }
        for term in s.split('+') {
            let (label, mult) = match term.split_once('^') {
                Some((l, m)) => {
                    (l, m.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?)
                }
                None => (term, 1),
            };
            d.add(label.parse()?, mult);
        }
        Ok(d)
    }
}

impl TryFrom<BTreeMap<String, usize>> for Decomposition {
    type Error = Error;
    fn try_from(m: BTreeMap<String, usize>) -> Result<Self> {
        let mut d = Self::new();
        for (k, v) in m {
            d.add(k.parse()?, v);
        }
        Ok(d)
    }
}

impl From<Decomposition> for BTreeMap<String, usize> {
    fn from(d: Decomposition) -> Self {
        d.parts.into_iter().map(|(l, m)| (l.to_string(), m)).collect()
    }
}

/// A representation: spaces of dimension `dims[k]`, chain maps
/// `maps[k]: dims[k] -> dims[k+1]` and a loop at the last vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub x: usize,
    pub dims: Vec<usize>,
    pub maps: Vec<RatMatrix>,
    pub loop_map: RatMatrix,
}

impl QuiverRep {
    pub fn new(x: usize, dims: Vec<usize>, maps: Vec<RatMatrix>, loop_map: RatMatrix) -> Result<Self> {
        let p = dims.len();
        if p == 0 || maps.len() != p - 1 {
            return Err(Error::Shape(format!("{p} vertices need {} chain maps", p.saturating_sub(1))));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                return Err(Error::Shape(format!("chain map {} has the wrong shape", k + 1)));
            }
        }
        if loop_map.rows() != dims[p - 1] || loop_map.cols() != dims[p - 1] {
            return Err(Error::Shape("loop has the wrong shape".into()));
        }
        if !loop_map.is_x_nilpotent(x) {
            return Err(Error::NotNilpotent(x));
        }
        Ok(Self { x, dims, maps, loop_map })
    }

    pub fn p(&self) -> usize {
        self.dims.len()
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::Shape("direct sum of representations on different quivers".into()));
        }
        Ok(Self {
            x: self.x.max(other.x),
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect(),
            loop_map: self.loop_map.block_diag(&other.loop_map),
        })
    }
}

/// The explicit `x = 2` indecomposable for `label` on `p` vertices.
pub fn build_indecomposable(label: Label, p: usize) -> Result<QuiverRep> {
    if label.min_index() == 0 || label.max_index() > p {
        return Err(Error::Index(format!("{label} outside vertices 1..={p}")));
    }
    let dims: Vec<usize> = (1..=p).map(|k| label.dim_at(k)).collect();
    let mut maps = Vec::with_capacity(p - 1);
    for k in 0..p - 1 {
        let (a, b) = (dims[k], dims[k + 1]);
        let mut m = RatMatrix::zeros(b, a);
        match (a, b) {
            (1, 1) | (2, 2) => m = RatMatrix::identity(a),
            (1, 2) => {
                let Label::U(i, j) = label else { unreachable!("V has dimension at most 1") };
                let row = if j < i { 0 } else { 1 };
                m[(row, 0)] = rat(1);
            }
            _ => {}
        }
        maps.push(m);
    }
    let mut loop_map = RatMatrix::zeros(dims[p - 1], dims[p - 1]);
    if dims[p - 1] == 2 {
        loop_map[(1, 0)] = rat(1);
    }
    QuiverRep::new(2, dims, maps, loop_map)
}

/// Direct sum of the indecomposables in `d`.
pub fn build_decomposition(d: &Decomposition, p: usize) -> Result<QuiverRep> {
    let mut acc = QuiverRep::new(2, vec![0; p], vec![RatMatrix::zeros(0, 0); p - 1], RatMatrix::zeros(0, 0))?;
    for (label, m) in d.iter() {
        let rep = build_indecomposable(*label, p)?;
        for _ in 0..m {
            acc = acc.direct_sum(&rep)?;
        }
    }
    Ok(acc)
}

/// The representation of `N`: standard flag embeddings `K^{d_k} -> K^{d_{k+1}}`
/// and loop `N`.
pub fn rep_from_matrix(n: &RatMatrix, blocks: &BlockData, x: usize) -> Result<QuiverRep> {
    if !n.is_square() || n.rows() != blocks.n() {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix", blocks.n())));
    }
    if !n.is_x_nilpotent(x) {
        return Err(Error::NotNilpotent(x));
    }
    let dims = blocks.dimension_vector();
    let maps = dims
        .windows(2)
        .map(|w| {
            let mut m = RatMatrix::zeros(w[1], w[0]);
            for i in 0..w[0] {
                m[(i, i)] = rat(1);
            }
            m
        })
        .collect();
    QuiverRep::new(x, dims, maps, n.clone())
}

/// `dim Hom(M, M')` by solving the intertwining conditions
/// `f_{k+1} M_k = M'_k f_k` and `f_p L = L' f_p` as one linear system.
pub fn hom_dim_oracle(m: &QuiverRep, m2: &QuiverRep) -> Result<usize> {
    if m.p() != m2.p() {
        return Err(Error::Shape("representations on different quivers".into()));
    }
    let p = m.p();
    // f_k is dims2[k] x dims[k], stored row-major after offset[k]
    let mut offset = vec![0; p + 1];
    for k in 0..p {
        offset[k + 1] = offset[k] + m2.dims[k] * m.dims[k];
    }
    let unknowns = offset[p];
    let var = |k: usize, r: usize, c: usize| offset[k] + r * m.dims[k] + c;
    let mut rows: Vec<Vec<(usize, crate::linalg::Rat)>> = Vec::new();

    // f_{k+1} A - A' f_k = 0, entrywise, shape dims2[k+1] x dims[k]
    let mut push_condition = |k_left: usize, a: &RatMatrix, k_right: usize, a2: &RatMatrix| {
        for r in 0..a2.rows() {
            for c in 0..a.cols() {
                let mut eq = Vec::new();
                for t in 0..a.rows() {
                    if !a[(t, c)].is_zero() {
                        eq.push((var(k_left, r, t), a[(t, c)].clone()));
                    }
                }
                for t in 0..a2.cols() {
                    if !a2[(r, t)].is_zero() {
                        eq.push((var(k_right, t, c), -a2[(r, t)].clone()));
                    }
                }
                rows.push(eq);
            }
        }
    };
    for k in 0..p - 1 {
        push_condition(k + 1, &m.maps[k], k, &m2.maps[k]);
    }
    push_condition(p - 1, &m.loop_map, p - 1, &m2.loop_map);

    let mut sys = RatMatrix::zeros(rows.len(), unknowns);
    for (i, eq) in rows.iter().enumerate() {
        for (v, c) in eq {
            sys[(i, *v)] += c;
        }
    }
    Ok(unknowns - sys.rank())
}

fn delta(b: bool) -> usize {
    usize::from(b)
}

/// `[X, Y]` for two indecomposables.
pub fn hom_indec(x: Label, y: Label) -> usize {
    match (x, y) {
        (Label::V(k), Label::V(i)) | (Label::V(k), Label::U(i, _)) => delta(i <= k),
        (Label::U(_, l), Label::V(i)) => delta(i <= l),
        (Label::U(k, l), Label::U(i, j)) => delta(i <= l) + delta(j <= l) * delta(i <= k),
    }
}

/// `[X, Y]` extended bilinearly.
pub fn hom_dim_formula(x: &Decomposition, y: &Decomposition) -> usize {
    x.iter().map(|(lx, mx)| y.iter().map(|(ly, my)| mx * my * hom_indec(*lx, *ly)).sum::<usize>()).sum()
}

/// The four invariant families `a_k = [V_k, X]`, `b_{k,l} = [U_{k,l}, X]`,
/// `abar_i = [X, V_i]`, `bbar_{i,j} = [X, U_{i,j}]`; `b` and `bbar` are
/// row-major `p x p`, indexed from 1 in the math and 0 here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub a: Vec<usize>,
    pub b: Vec<Vec<usize>>,
    pub abar: Vec<usize>,
    pub bbar: Vec<Vec<usize>>,
}

pub fn invariant_vector(x: &Decomposition, p: usize) -> InvariantVector {
    let one = |l: Label| Decomposition::single(l);
    InvariantVector {
        a: (1..=p).map(|k| hom_dim_formula(&one(Label::V(k)), x)).collect(),
        b: (1..=p).map(|k| (1..=p).map(|l| hom_dim_formula(&one(Label::U(k, l)), x)).collect()).collect(),
        abar: (1..=p).map(|i| hom_dim_formula(x, &one(Label::V(i)))).collect(),
        bbar: (1..=p).map(|i| (1..=p).map(|j| hom_dim_formula(x, &one(Label::U(i, j)))).collect()).collect(),
    }
}

/// `dim P - [X, X]`.
pub fn orbit_dimension(x: &Decomposition, blocks: &BlockData) -> Result<usize> {
    let dv = x.dimension_vector(blocks.p())?;
    if dv != blocks.dimension_vector() {
        return Err(Error::DimensionVector(format!(
            "{x} has dimension vector {dv:?}, blocks need {:?}",
            blocks.dimension_vector()
        )));
    }
    Ok(blocks.dim_p() - hom_dim_formula(x, x))
}

/// Dimension of the centralizer of `N` in the Lie algebra of `P`.
pub fn stabilizer_dim(n: &RatMatrix, blocks: &BlockData) -> Result<usize> {
    if !n.is_square() || n.rows() != blocks.n() {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix", blocks.n())));
    }
    Ok(crate::linalg::intertwiner_basis(n, n, &blocks.pattern_mask()).len())
}
