//! Built-in consistency suite run by `nilorb selftest`.

use serde::Serialize;

use crate::blocks::BlockData;
use crate::classify::{classify, representative_matrix};
use crate::error::Result;
use crate::finiteness::{are_conjugate, witness_for};
use crate::invariants::{builtin, chi, evaluate, weight, Builtin};
use crate::linalg::rat;
use crate::normal_form::{is_generic, normal_form, shape_predicate};
use crate::patterns::enumerate;
use crate::quiver::{build_indecomposable, hom_dim_formula, hom_dim_oracle, Decomposition, Label};
use crate::sample::Sampler;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn orbit_counts() -> Result<bool> {
    let cases = [("1,1", 3), ("2,1", 4), ("1,1,1", 7), ("1,1,1,1", 25), ("2", 2), ("3", 2)];
    Ok(cases.iter().all(|(b, c)| enumerate(&b.parse::<BlockData>().unwrap()).len() == *c))
}

fn hom_oracle() -> Result<bool> {
    for p in 1..=3 {
        for x in Label::all(p) {
            let mx = build_indecomposable(x, p)?;
            for y in Label::all(p) {
                let my = build_indecomposable(y, p)?;
                if hom_dim_oracle(&mx, &my)? != hom_dim_formula(&Decomposition::single(x), &Decomposition::single(y)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn classify_round_trip() -> Result<bool> {
    for n in 1..=4 {
        for blocks in BlockData::all_of_size(n) {
            for e in enumerate(&blocks) {
                if classify(&representative_matrix(&e, &blocks)?, &blocks)? != e {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn classify_invariance(seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for n in 2..=4 {
        for blocks in BlockData::all_of_size(n) {
            let m = s.nilpotent(n, 2);
            let g = s.parabolic(&blocks);
            let moved = &(&g * &m) * &g.inverse().expect("parabolic sample is invertible");
            if classify(&moved, &blocks)? != classify(&m, &blocks)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn normal_forms(seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for n in 2..=4 {
        let blocks = BlockData::borel(n)?;
        for _ in 0..5 {
            let m = s.regular_nilpotent(n);
            if !is_generic(&m, &blocks)? {
                continue;
            }
            let nf = normal_form(&m, &blocks)?;
            let g_inv = nf.g.inverse().expect("normal form transform is invertible");
            if &(&nf.g * &m) * &g_inv != nf.h || !shape_predicate(&nf.h, &blocks) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn uthree_relations(seed: u64) -> Result<bool> {
    let get = |b| builtin(b, 3);
    let (f1, f2, d1, d2) =
        (get(Builtin::UthreeF1)?, get(Builtin::UthreeF2)?, get(Builtin::UthreeDet1)?, get(Builtin::UthreeDet2)?);
    let mut s = Sampler::new(seed);
    for _ in 0..10 {
        let m = s.nilpotent(3, 3);
        let dv = evaluate(&d1, &m)?;
        if dv != evaluate(&d2, &m)? || evaluate(&f1, &m)? * evaluate(&f2, &m)? != num::pow(dv, 3) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn semi_invariance(seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for n in 2..=4 {
        for i in 1..n {
            for d in [builtin(Builtin::Det(i), n)?, builtin(Builtin::F(i), n)?] {
                let w = weight(&d, n)?;
                let m = s.nilpotent(n, n);
                let b = s.borel(n);
                let moved = &(&b * &m) * &b.inverse().expect("Borel sample is invertible");
                if evaluate(&d, &moved)? != chi(&w, &b) * evaluate(&d, &m)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn witnesses(seed: u64) -> Result<bool> {
    for (b, x) in [("1,1,1", 3), ("2,2", 4), ("1,2,1", 4)] {
        let blocks: BlockData = b.parse()?;
        let w1 = witness_for(&blocks, x, &rat(1))?;
        let w2 = witness_for(&blocks, x, &rat(2))?;
        if !are_conjugate(&w1, &w2, &blocks, seed, 20)?.is_no() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run(seed: u64) -> SelftestReport {
    let checks: Vec<(&'static str, Box<dyn Fn() -> Result<bool>>)> = vec![
        ("orbit-counts", Box::new(orbit_counts)),
        ("hom-oracle-equivalence", Box::new(hom_oracle)),
        ("classify-round-trip", Box::new(classify_round_trip)),
        ("classify-invariance", Box::new(move || classify_invariance(seed))),
        ("generic-normal-form", Box::new(move || normal_forms(seed))),
        ("uthree-relations", Box::new(move || uthree_relations(seed))),
        ("semi-invariance", Box::new(move || semi_invariance(seed))),
        ("witness-non-conjugacy", Box::new(move || witnesses(seed))),
    ];
    let checks: Vec<Check> = checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(passed) => Check { name, passed, error: None },
            Err(e) => Check { name, passed: false, error: Some(e.to_string()) },
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    SelftestReport { passed, failed: checks.len() - passed, checks }
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        let r = super::run(1);
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.passed, 8);
    }
}
