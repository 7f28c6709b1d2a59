//! Degeneration order on `P`-orbits in the 2-nilpotent variety.
//!
//! `X <= Y` means the orbit of `Y` lies in the closure of the orbit of `X`,
//! tested through `a_k(X) <= a_k(Y)` and `b_{k,l}(X) <= b_{k,l}(Y)`. For
//! Borel blocks this is the degeneration order; for other blocks it is the
//! hom-order and is labelled as such.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::patterns::{enumerate, enumerate_decompositions, Eolp};
use crate::quiver::{hom_dim_formula, invariant_vector, orbit_dimension, Decomposition, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderBasis {
    #[serde(rename = "degeneration")]
    Degeneration,
    #[serde(rename = "hom-order")]
    HomOrder,
}

impl OrderBasis {
    pub fn for_blocks(blocks: &BlockData) -> Self {
        if blocks.is_borel() {
            OrderBasis::Degeneration
        } else {
            OrderBasis::HomOrder
        }
    }
}

/// Order test on decompositions with a common dimension vector on `p`
/// vertices.
pub fn leq_decompositions(x: &Decomposition, y: &Decomposition, p: usize) -> bool {
    let (ix, iy) = (invariant_vector(x, p), invariant_vector(y, p));
    ix.a.iter().zip(&iy.a).all(|(u, v)| u <= v) && ix.b.iter().flatten().zip(iy.b.iter().flatten()).all(|(u, v)| u <= v)
}

pub fn leq(x: &Eolp, y: &Eolp, blocks: &BlockData) -> Result<bool> {
    for e in [x, y] {
        if !e.validate(blocks)? {
            return Err(Error::Pattern(format!("{e} is not a valid pattern for blocks {blocks}")));
        }
    }
    Ok(leq_decompositions(&x.to_multiplicities(), &y.to_multiplicities(), blocks.p()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoset {
    pub blocks: BlockData,
    pub elements: Vec<Eolp>,
    /// `relation[i][j]` iff `elements[i] <= elements[j]`.
    pub relation: Vec<Vec<bool>>,
    /// `(i, j)` with `elements[j]` a maximal proper degeneration of `elements[i]`.
    pub covers: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub basis: OrderBasis,
}

fn transitive_reduction(rel: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let m = rel.len();
    let mut covers = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j || !rel[i][j] {
                continue;
            }
            if !(0..m).any(|k| k != i && k != j && rel[i][k] && rel[k][j]) {
                covers.push((i, j));
            }
        }
    }
    covers
}

pub fn hasse(blocks: &BlockData) -> OrbitPoset {
    let elements = enumerate(blocks);
    let p = blocks.p();
    let invs: Vec<_> = elements.iter().map(|e| invariant_vector(&e.to_multiplicities(), p)).collect();
    let relation: Vec<Vec<bool>> = invs
        .iter()
        .map(|x| {
            invs.iter()
                .map(|y| {
                    x.a.iter().zip(&y.a).all(|(u, v)| u <= v)
                        && x.b.iter().flatten().zip(y.b.iter().flatten()).all(|(u, v)| u <= v)
                })
                .collect()
        })
        .collect();
    let dims = elements
        .iter()
        .map(|e| orbit_dimension(&e.to_multiplicities(), blocks).expect("enumerated patterns fit"))
        .collect();
    let covers = transitive_reduction(&relation);
    OrbitPoset { blocks: blocks.clone(), elements, relation, covers, dims, basis: OrderBasis::for_blocks(blocks) }
}

impl OrbitPoset {
    pub fn index_of(&self, e: &Eolp) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        self.covers.contains(&(i, j))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PosetJson::from(self)).expect("poset serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&PosetJson::from(self)).expect("poset serializes")
    }

    /// Rebuilds a poset from its JSON form, recomputing the relation.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PosetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let blocks = raw
            .elements
            .first()
            .map(|e| e.blocks().clone())
            .ok_or_else(|| Error::Parse("poset has no elements".into()))?;
        let p = hasse(&blocks);
        if p.elements != raw.elements || p.covers != raw.covers || p.dims != raw.dims {
            return Err(Error::Parse("poset data does not match the recomputed order".into()));
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<Eolp>,
    covers: Vec<(usize, usize)>,
    dims: Vec<usize>,
    order: OrderBasis,
}

impl From<&OrbitPoset> for PosetJson {
    fn from(p: &OrbitPoset) -> Self {
        PosetJson { elements: p.elements.clone(), covers: p.covers.clone(), dims: p.dims.clone(), order: p.basis }
    }
}

/// DOT digraph; edges run from the denser orbit to its cover.
pub fn to_dot(p: &OrbitPoset) -> String {
    let mut s = String::from("digraph orbits {\n  rankdir=TB;\n");
    for (i, e) in p.elements.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\\ndim {}\"];", e.label(), p.dims[i]);
    }
    for &(i, j) in &p.covers {
        let _ = writeln!(s, "  n{i} -> n{j};");
    }
    s.push_str("}\n");
    s
}

/// Outcome of the minimality test for `D + W <= D' + W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    /// Whether the pair is a cover of the orbit poset (ground truth).
    pub covering: bool,
    /// `[X, D] = [X, D']` and `[D, X] = [D', X]` for every summand `X` of `W`.
    pub delta_criterion: bool,
    /// The interval reading for `D = U(t,s)`, `D' = U(s,t)`, `s < t`, when it applies.
    pub interior_reading: Option<bool>,
    pub discrepancy: bool,
}

fn is_cover_in(x: &Decomposition, y: &Decomposition, universe: &[Decomposition], p: usize) -> bool {
    x != y
        && leq_decompositions(x, y, p)
        && !universe.iter().any(|z| z != x && z != y && leq_decompositions(x, z, p) && leq_decompositions(z, y, p))
}

fn capacities(dv: &[usize]) -> Vec<usize> {
    let mut prev = 0;
    dv.iter()
        .map(|&d| {
            let c = d - prev;
            prev = d;
            c
        })
        .collect()
}

pub fn minimality_check(
    d: &Decomposition,
    d2: &Decomposition,
    w: &Decomposition,
    blocks: &BlockData,
) -> Result<MinimalityReport> {
    let p = blocks.p();
    let dv = d.dimension_vector(p)?;
    if d2.dimension_vector(p)? != dv {
        return Err(Error::Precondition(format!("{d} and {d2} have different dimension vectors")));
    }
    if !d.is_disjoint(d2) {
        return Err(Error::Precondition(format!("{d} and {d2} share a summand")));
    }
    let caps = capacities(&dv);
    if !is_cover_in(d, d2, &enumerate_decompositions(&caps), p) {
        return Err(Error::Precondition(format!("{d} < {d2} is not a minimal degeneration")));
    }
    let (x, y) = (d.sum(w), d2.sum(w));
    let xe = Eolp::from_multiplicities(&x, blocks)?;
    let ye = Eolp::from_multiplicities(&y, blocks)?;
    let universe: Vec<Decomposition> = enumerate(blocks).iter().map(Eolp::to_multiplicities).collect();
    let covering = is_cover_in(&xe.to_multiplicities(), &ye.to_multiplicities(), &universe, p);

    let delta_criterion = w.iter().all(|(l, _)| {
        let s = Decomposition::single(*l);
        hom_dim_formula(&s, d) == hom_dim_formula(&s, d2) && hom_dim_formula(d, &s) == hom_dim_formula(d2, &s)
    });

    let single = |dec: &Decomposition| {
        let mut it = dec.iter();
        match (it.next(), it.next()) {
            (Some((l, 1)), None) => Some(*l),
            _ => None,
        }
    };
    let interior_reading = match (single(d), single(d2)) {
        (Some(Label::U(t, s)), Some(Label::U(s2, t2))) if s == s2 && t == t2 && s < t => {
            let between = |k: usize| s < k && k < t;
            Some(w.iter().all(|(l, _)| match *l {
                Label::V(k) => !between(k),
                Label::U(k, l) => !((k < t && between(l)) || (between(k) && t < l)),
            }))
        }
        _ => None,
    };
    let discrepancy = delta_criterion != covering || interior_reading.is_some_and(|r| r != covering);
    Ok(MinimalityReport { covering, delta_criterion, interior_reading, discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(s: &str) -> BlockData {
        s.parse().unwrap()
    }

    fn dec(s: &str) -> Decomposition {
        s.parse().unwrap()
    }

    fn pat(s: &str, b: &BlockData) -> Eolp {
        Eolp::from_multiplicities(&dec(s), b).unwrap()
    }

    #[test]
    fn leq_examples() {
        let b = bd("1,1");
        let x = pat("U2,1", &b);
        let y = pat("U1,2", &b);
        assert!(leq(&x, &x, &b).unwrap());
        assert!(leq(&x, &y, &b).unwrap());
        assert!(!leq(&y, &x, &b).unwrap());
    }

    #[test]
    fn two_one_is_a_chain() {
        let b = bd("2,1");
        let looped = pat("U1,1 + V2", &b);
        let back = pat("U1,2 + V1", &b);
        assert!(leq(&looped, &back, &b).unwrap());
        assert!(!leq(&back, &looped, &b).unwrap());
        let h = hasse(&b);
        assert_eq!(h.elements.len(), 4);
        assert_eq!(h.covers.len(), 3);
        let mut dims = h.dims.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![0, 2, 3, 4]);
    }

    #[test]
    fn chain_for_two_vertices() {
        let h = hasse(&bd("1,1"));
        assert_eq!(h.covers.len(), 2);
        let lower = h.index_of(&pat("U2,1", &h.blocks)).unwrap();
        let upper = h.index_of(&pat("U1,2", &h.blocks)).unwrap();
        let zero = h.index_of(&Eolp::zero(&h.blocks)).unwrap();
        assert!(h.is_cover(lower, upper) && h.is_cover(upper, zero));
        assert_eq!(h.basis, OrderBasis::Degeneration);
        assert_eq!(hasse(&bd("2,1")).basis, OrderBasis::HomOrder);
    }

    #[test]
    fn poset_laws_and_extremes() {
        for n in 1..=5 {
            for b in BlockData::all_of_size(n) {
                let h = hasse(&b);
                let m = h.elements.len();
                for i in 0..m {
                    assert!(h.relation[i][i]);
                    for j in 0..m {
                        if i != j && h.relation[i][j] {
                            assert!(!h.relation[j][i], "{b}: antisymmetry");
                            assert!(h.dims[i] > h.dims[j], "{b}: dimension drop");
                        }
                        for k in 0..m {
                            if h.relation[i][j] && h.relation[j][k] {
                                assert!(h.relation[i][k]);
                            }
                        }
                    }
                }
                let zero = h.index_of(&Eolp::zero(&b)).unwrap();
                assert_eq!(h.dims[zero], 0);
                assert!((0..m).all(|i| h.relation[i][zero]));
                let mins: Vec<_> = (0..m).filter(|&j| (0..m).all(|i| h.relation[j][i])).collect();
                assert_eq!(mins.len(), 1, "{b}");
                if b.is_borel() {
                    for &(i, j) in &h.covers {
                        assert_eq!(h.dims[i], h.dims[j] + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn dot_output() {
        let one = hasse(&bd("1"));
        let dot = to_dot(&one);
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("[label=").count(), 1);
        let dot = to_dot(&hasse(&bd("1,1")));
        assert_eq!(dot.matches(" -> n").count(), 2);
        let dot = to_dot(&hasse(&bd("2,1")));
        assert_eq!(dot.matches(" -> n").count(), 3);
        assert_eq!(dot.matches("[label=").count(), 4);
    }

    #[test]
    fn json_round_trip() {
        let h = hasse(&bd("1,2"));
        assert_eq!(OrbitPoset::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn minimality_examples() {
        let b = bd("1,1");
        let r = minimality_check(&dec("U2,1"), &dec("U1,2"), &Decomposition::new(), &b).unwrap();
        assert!(r.covering && r.delta_criterion && !r.discrepancy);

        let b = bd("1,1,1");
        let r = minimality_check(&dec("U3,1"), &dec("U1,3"), &dec("V2"), &b).unwrap();
        assert!(!r.covering);
        assert!(!r.delta_criterion);
        assert_eq!(r.interior_reading, Some(false));

        let b = bd("2,1");
        let r = minimality_check(&dec("U2,1"), &dec("U1,2"), &dec("V1"), &b).unwrap();
        assert!(!r.covering);
        assert!(!r.delta_criterion);
        assert_eq!(r.interior_reading, Some(true));
        assert!(r.discrepancy);
    }

    #[test]
    fn minimality_preconditions() {
        let b = bd("1,1");
        assert!(minimality_check(&dec("U2,1"), &dec("V1 + V2"), &Decomposition::new(), &b).is_err());
        assert!(minimality_check(&dec("U2,1"), &dec("U2,1"), &Decomposition::new(), &b).is_err());
        assert!(minimality_check(&dec("U2,1"), &dec("V1"), &Decomposition::new(), &b).is_err());
    }
}
