//! Orbit-finiteness decision, the infinite-family witnesses and an exact
//! `P`-conjugacy test.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::linalg::{intertwiner_basis, rat, JsonRat, Rat, RatMatrix};
use crate::sample::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    XLe2,
    #[serde(rename = "maximal_x3")]
    MaximalX3,
    SingleBlockJordan,
    InfiniteWithWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    D,
    E,
    F,
}

impl std::str::FromStr for WitnessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "d" => Ok(WitnessKind::D),
            "E" | "e" => Ok(WitnessKind::E),
            "F" | "f" => Ok(WitnessKind::F),
            _ => Err(Error::Parse(format!("unknown witness kind {s:?}"))),
        }
    }
}

/// A one-parameter witness family placed inside `n x n` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub kind: WitnessKind,
    pub n: usize,
    pub x: usize,
    /// For `E`, rows and columns `offset+1..offset+4` carry `E(lambda)`.
    /// For `D`, the middle indices are `offset+1..=end`.
    pub offset: usize,
    pub end: usize,
    /// `F` placed for blocks `(n-1, 1)` through `N -> J N^T J`.
    pub transposed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessVerdict {
    pub finite: bool,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<WitnessFamily>,
}

pub fn is_finite(blocks: &BlockData, x: usize) -> Result<FinitenessVerdict> {
    let n = blocks.n();
    if x == 0 || x > n {
        return Err(Error::Precondition(format!("nilpotency {x} must lie in 1..={n}")));
    }
    let p = blocks.p();
    let finite = |reason| Ok(FinitenessVerdict { finite: true, reason, witness: None, family: None });
    if x <= 2 {
        return finite(Reason::XLe2);
    }
    if p == 1 {
        return finite(Reason::SingleBlockJordan);
    }
    if p == 2 && x == 3 {
        return finite(Reason::MaximalX3);
    }
    let family = if p >= 3 {
        WitnessFamily { kind: WitnessKind::D, n, x, offset: blocks.d(1), end: blocks.d(p - 1), transposed: false }
    } else {
        let (b1, b2) = (blocks.b(1), blocks.b(2));
        if b1 >= 2 && b2 >= 2 {
            WitnessFamily { kind: WitnessKind::E, n, x, offset: b1 - 2, end: b1 + 2, transposed: false }
        } else {
            WitnessFamily { kind: WitnessKind::F, n, x, offset: 0, end: 4, transposed: b2 == 1 }
        }
    };
    Ok(FinitenessVerdict {
        finite: false,
        reason: Reason::InfiniteWithWitness,
        witness: Some(family.kind),
        family: Some(family),
    })
}

fn anti_transpose(m: &RatMatrix) -> RatMatrix {
    let n = m.rows();
    let mut t = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] = m[(n - 1 - j, n - 1 - i)].clone();
        }
    }
    t
}

fn place(n: usize, offset: usize, small: &[[Rat; 4]; 4]) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for (i, row) in small.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(offset + i, offset + j)] = v.clone();
        }
    }
    m
}

/// Member `lambda` of a witness family; errors if the result is not
/// `x`-nilpotent.
pub fn witness_family(family: &WitnessFamily, lambda: &Rat) -> Result<RatMatrix> {
    let WitnessFamily { kind, n, x, offset, end, transposed } = *family;
    if lambda.is_zero() {
        return Err(Error::Precondition("lambda must be nonzero".into()));
    }
    let (z, o, l) = (rat(0), rat(1), lambda.clone());
    let m = match kind {
        WitnessKind::D => {
            if x < 3 || offset == 0 || offset >= end || end >= n {
                return Err(Error::Precondition("D needs x >= 3 and 1 <= offset < end < n".into()));
            }
            let mut m = RatMatrix::zeros(n, n);
            for i in offset..end {
                m[(i, 0)] = o.clone();
                m[(n - 1, i)] = o.clone();
            }
            m[(n - 1, 0)] = l;
            m
        }
        WitnessKind::E => {
            if x < 4 || offset + 4 > n {
                return Err(Error::Precondition("E needs x >= 4 and room for a 4x4 block".into()));
            }
            let e = [
                [z.clone(), z.clone(), z.clone(), z.clone()],
                [o.clone(), z.clone(), z.clone(), z.clone()],
                [o.clone(), o.clone(), z.clone(), z.clone()],
                [l, o.clone(), o.clone(), z.clone()],
            ];
            place(n, offset, &e)
        }
        WitnessKind::F => {
            if x < 4 || n < 4 {
                return Err(Error::Precondition("F needs n >= 4 and x >= 4".into()));
            }
            let m1 = -o.clone();
            let f = [
                [o.clone(), o.clone(), z.clone(), z.clone()],
                [m1.clone(), m1.clone(), z.clone(), z.clone()],
                [&l - &o, l.clone(), m1.clone(), o.clone()],
                [l.clone(), &l - &o, m1, o.clone()],
            ];
            let m = place(n, 0, &f);
            if transposed {
                anti_transpose(&m)
            } else {
                m
            }
        }
    };
    if !m.is_x_nilpotent(x) {
        return Err(Error::Construction(format!("witness {kind:?}({lambda}) is not {x}-nilpotent")));
    }
    Ok(m)
}

/// Witness member for the family attached to `(blocks, x)`.
pub fn witness_for(blocks: &BlockData, x: usize, lambda: &Rat) -> Result<RatMatrix> {
    let v = is_finite(blocks, x)?;
    let family = v.family.ok_or_else(|| Error::Precondition("finite type has no witness family".into()))?;
    witness_family(&family, lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub point: Vec<i64>,
    pub det: JsonRat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `rank(N^power[d_k.., ..d_l])` differs.
    RankProfile { power: u32, k: usize, l: usize, left: usize, right: usize },
    /// No pattern-constrained intertwiner exists.
    EmptyIntertwiner,
    /// `dim T(N, N')` differs from `dim T(N, N)`.
    IntertwinerDimension { pair: usize, stabilizer: usize },
    /// `det(sum t_i T_i)` vanished at every point tried. With `exact` the
    /// points form a full grid beyond the degree, so the polynomial is zero.
    SingularIntertwiners { basis: Vec<RatMatrix>, transcript: Vec<Evaluation>, exact: bool, error_bound: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum Conjugacy {
    Yes { g: RatMatrix },
    No { certificate: Certificate },
    Unknown { evaluations: usize },
}

impl Conjugacy {
    pub fn is_yes(&self) -> bool {
        matches!(self, Conjugacy::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Conjugacy::No { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("conjugacy serializes")
    }
}

const GRID_BUDGET: usize = 4096;
const RANDOM_RANGE: i64 = 1 << 20;

fn combine(basis: &[RatMatrix], t: &[i64]) -> RatMatrix {
    let n = basis[0].rows();
    let mut g = RatMatrix::zeros(n, n);
    for (b, &c) in basis.iter().zip(t) {
        if c != 0 {
            g = &g + &b.scale(&rat(c));
        }
    }
    g
}

fn rank_certificate(a: &RatMatrix, b: &RatMatrix, blocks: &BlockData) -> Option<Certificate> {
    let n = blocks.n();
    let p = blocks.p();
    let (mut pa, mut pb) = (RatMatrix::identity(n), RatMatrix::identity(n));
    for power in 1..=n as u32 {
        pa = &pa * a;
        pb = &pb * b;
        for k in 0..=p {
            for l in 0..=p {
                let sub = |m: &RatMatrix| m.submatrix(blocks.d(k), n, 0, blocks.d(l)).rank();
                let (left, right) = (sub(&pa), sub(&pb));
                if left != right {
                    return Some(Certificate::RankProfile { power, k, l, left, right });
                }
            }
        }
    }
    None
}

/// Decides whether some `g` in `P` has `g N g^{-1} = N'`.
///
/// `trials` bounds the random evaluations used when the intertwiner space
/// is too large for an exhaustive grid.
pub fn are_conjugate(a: &RatMatrix, b: &RatMatrix, blocks: &BlockData, seed: u64, trials: usize) -> Result<Conjugacy> {
    let n = blocks.n();
    for m in [a, b] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::Shape(format!("expected {n}x{n} matrices, got {}x{}", m.rows(), m.cols())));
        }
    }
    if let Some(c) = rank_certificate(a, b, blocks) {
        return Ok(Conjugacy::No { certificate: c });
    }
    let mask = blocks.pattern_mask();
    let basis = intertwiner_basis(a, b, &mask);
    if basis.is_empty() {
        return Ok(Conjugacy::No { certificate: Certificate::EmptyIntertwiner });
    }
    let stab = intertwiner_basis(a, a, &mask).len();
    if stab != basis.len() {
        return Ok(Conjugacy::No {
            certificate: Certificate::IntertwinerDimension { pair: basis.len(), stabilizer: stab },
        });
    }
    let k = basis.len();
    let grid = (n + 1).checked_pow(k as u32).filter(|&g| g <= GRID_BUDGET);
    let mut transcript = Vec::new();
    let mut try_point = |t: Vec<i64>| -> Result<Option<RatMatrix>> {
        let g = combine(&basis, &t);
        let det = g.det()?;
        if det.is_zero() {
            transcript.push(Evaluation { point: t, det: JsonRat(det) });
            Ok(None)
        } else {
            Ok(Some(g))
        }
    };
    let found = if let Some(total) = grid {
        let mut found = None;
        for idx in 0..total {
            let mut t = Vec::with_capacity(k);
            let mut r = idx;
            for _ in 0..k {
                t.push((r % (n + 1)) as i64);
                r /= n + 1;
            }
            if let Some(g) = try_point(t)? {
                found = Some(g);
                break;
            }
        }
        found
    } else {
        let mut s = Sampler::new(seed);
        let mut found = None;
        for _ in 0..trials {
            let t = (0..k).map(|_| s.int_in(-RANDOM_RANGE, RANDOM_RANGE)).collect();
            if let Some(g) = try_point(t)? {
                found = Some(g);
                break;
            }
        }
        found
    };
    if let Some(g) = found {
        let inv = g.inverse().ok_or_else(|| Error::Construction("intertwiner lost invertibility".into()))?;
        if &(&g * a) * &inv != *b {
            return Err(Error::Construction("intertwiner does not conjugate".into()));
        }
        return Ok(Conjugacy::Yes { g });
    }
    let evaluations = transcript.len();
    if evaluations == 0 {
        return Ok(Conjugacy::Unknown { evaluations });
    }
    let exact = grid.is_some();
    let error_bound = if exact { 0.0 } else { (n as f64 / (2 * RANDOM_RANGE + 1) as f64).powi(evaluations as i32) };
    Ok(Conjugacy::No { certificate: Certificate::SingularIntertwiners { basis, transcript, exact, error_bound } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn bd(s: &[usize]) -> BlockData {
        BlockData::new(s.to_vec()).unwrap()
    }

    #[test]
    fn verdict_examples() {
        assert!(is_finite(&bd(&[1, 1, 1]), 2).unwrap().finite);
        assert!(is_finite(&bd(&[2, 3]), 3).unwrap().finite);
        assert_eq!(is_finite(&bd(&[4]), 4).unwrap().reason, Reason::SingleBlockJordan);
        let v = is_finite(&bd(&[1, 1, 1]), 3).unwrap();
        assert!(!v.finite);
        assert_eq!(v.witness, Some(WitnessKind::D));
        assert_eq!(is_finite(&bd(&[2, 2]), 4).unwrap().witness, Some(WitnessKind::E));
        assert_eq!(is_finite(&bd(&[1, 3]), 4).unwrap().witness, Some(WitnessKind::F));
        assert!(is_finite(&bd(&[3, 1]), 4).unwrap().family.unwrap().transposed);
        assert!(is_finite(&bd(&[1, 1]), 3).is_err());
        assert!(is_finite(&bd(&[1, 1]), 0).is_err());
        let json = serde_json::to_value(is_finite(&bd(&[1, 1, 1]), 3).unwrap()).unwrap();
        assert_eq!(json["finite"], false);
        assert_eq!(json["witness"], "D");
        assert_eq!(json["reason"], "infinite_with_witness");
    }

    #[test]
    fn witness_shapes() {
        let fam = |kind, n, x| WitnessFamily {
            kind,
            n,
            x,
            offset: usize::from(kind == WitnessKind::D),
            end: n - 1,
            transposed: false,
        };
        let e = witness_family(&fam(WitnessKind::E, 4, 4), &rat(5)).unwrap();
        assert_eq!(e, RatMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[1, 1, 0, 0], &[5, 1, 1, 0]]));
        assert_eq!(e.nilpotency_degree().unwrap(), Some(4));
        let f = witness_family(&fam(WitnessKind::F, 4, 4), &rat(3)).unwrap();
        assert!(!(&f * &f).is_zero());
        assert!(f.pow(4).is_zero());
        let d = witness_family(&fam(WitnessKind::D, 3, 3), &rat(2)).unwrap();
        assert_eq!(d, RatMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[2, 1, 0]]));
        assert!(witness_family(&fam(WitnessKind::D, 3, 3), &rat(0)).is_err());
        assert!(witness_family(&fam(WitnessKind::E, 4, 3), &rat(1)).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        let b = bd(&[1, 1]);
        let n = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let m = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        match are_conjugate(&n, &n, &b, 1, 20).unwrap() {
            Conjugacy::Yes { g } => assert_eq!(&(&g * &n) * &g.inverse().unwrap(), n),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            are_conjugate(&n, &m, &b, 1, 20).unwrap(),
            Conjugacy::No { certificate: Certificate::RankProfile { .. } }
        ));
        let fam = is_finite(&bd(&[1, 1, 1]), 3).unwrap().family.unwrap();
        let d1 = witness_family(&fam, &rat(1)).unwrap();
        let d2 = witness_family(&fam, &rat(2)).unwrap();
        assert!(are_conjugate(&d1, &d2, &bd(&[1, 1, 1]), 1, 20).unwrap().is_no());
        assert!(are_conjugate(&d1, &RatMatrix::zeros(2, 2), &bd(&[1, 1, 1]), 1, 20).is_err());
    }

    #[test]
    fn witnesses_are_pairwise_non_conjugate() {
        let lambdas = [rat(1), rat(2), rat(-1), ratio(1, 2), rat(7)];
        for n in 3..=6 {
            for blocks in BlockData::all_of_size(n) {
                for x in 3..=n {
                    let v = is_finite(&blocks, x).unwrap();
                    let Some(fam) = v.family.filter(|f| f.kind != WitnessKind::F) else { continue };
                    let ws: Vec<_> = lambdas.iter().map(|l| witness_family(&fam, l).unwrap()).collect();
                    for i in 0..ws.len() {
                        for j in i + 1..ws.len() {
                            let c = are_conjugate(&ws[i], &ws[j], &blocks, 3, 20).unwrap();
                            assert!(c.is_no(), "{blocks} x={x} {fam:?} {i} {j}: {c:?}");
                        }
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn conjugates_are_found() {
        let mut s = Sampler::new(5);
        for n in 2..=5 {
            for blocks in BlockData::all_of_size(n) {
                let m = s.nilpotent(n, 2);
                let g = s.parabolic(&blocks);
                let m2 = &(&g * &m) * &g.inverse().unwrap();
                match are_conjugate(&m, &m2, &blocks, 9, 20).unwrap() {
                    Conjugacy::Yes { g } => {
                        assert!(blocks.pattern_mask().iter().zip(g.entries()).all(|(&ok, v)| ok || v.is_zero()));
                    }
                    other => panic!("{other:?}"),
                }
            }
        }
    }

    #[test]
    fn f_family_collapses() {
        for blocks in [bd(&[1, 3]), bd(&[3, 1]), bd(&[1, 4])] {
            let fam = is_finite(&blocks, 4).unwrap().family.unwrap();
            assert_eq!(fam.kind, WitnessKind::F);
            let f1 = witness_family(&fam, &rat(1)).unwrap();
            let f2 = witness_family(&fam, &rat(2)).unwrap();
            match are_conjugate(&f1, &f2, &blocks, 1, 20).unwrap() {
                Conjugacy::Yes { g } => assert_eq!(&(&g * &f1) * &g.inverse().unwrap(), f2),
                other => panic!("{other:?}"),
            }
        }
    }
}
