//! Determinantal `B`-semi-invariants and `U`-invariants on the nilpotent
//! cone, their weights, and the toric machinery.
//!
//! A datum `((a_i), (a'_j), (P_{ij}))` evaluates at `N` to the determinant
//! of the block matrix whose `(i, j)` block is the corner of `P_{ij}(N)`
//! formed by its last `a_i` rows and first `a'_j` columns. Blocks of size
//! zero are dropped before assembly.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, JsonRat, Rat, RatMatrix};
use crate::normal_form::in_h_u;
use crate::sample::Sampler;

/// Univariate polynomial, coefficients from degree 0 upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = Rat::one();
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn constant_term(&self) -> Rat {
        self.0.first().cloned().unwrap_or_else(Rat::zero)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval(&self, m: &RatMatrix) -> RatMatrix {
        let n = m.rows();
        let mut acc = RatMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &acc * m;
            if !c.is_zero() {
                for i in 0..n {
                    acc[(i, i)] += c;
                }
            }
        }
        acc
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<JsonRat> = self.0.iter().cloned().map(JsonRat).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JsonRat>::deserialize(d)?;
        Ok(Poly(v.into_iter().map(|j| j.0).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiInvDatum {
    pub a: Vec<usize>,
    pub a_prime: Vec<usize>,
    pub polys: Vec<Vec<Poly>>,
}

impl SemiInvDatum {
    pub fn new(a: Vec<usize>, a_prime: Vec<usize>, polys: Vec<Vec<Poly>>) -> Result<Self> {
        let d = Self { a, a_prime, polys };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<()> {
        if self.polys.len() != self.a.len() || self.polys.iter().any(|r| r.len() != self.a_prime.len()) {
            return Err(Error::Datum(format!("polynomial table must be {}x{}", self.a.len(), self.a_prime.len())));
        }
        let (r, r2): (usize, usize) = (self.a.iter().sum(), self.a_prime.iter().sum());
        if r != r2 {
            return Err(Error::Datum(format!("row sizes sum to {r}, column sizes to {r2}")));
        }
        Ok(())
    }

    /// `r = sum a_i`.
    pub fn r(&self) -> usize {
        self.a.iter().sum()
    }

    /// Copy with zero-size blocks removed.
    pub fn trimmed(&self) -> Self {
        let rows: Vec<usize> = (0..self.a.len()).filter(|&i| self.a[i] > 0).collect();
        let cols: Vec<usize> = (0..self.a_prime.len()).filter(|&j| self.a_prime[j] > 0).collect();
        Self {
            a: rows.iter().map(|&i| self.a[i]).collect(),
            a_prime: cols.iter().map(|&j| self.a_prime[j]).collect(),
            polys: rows.iter().map(|&i| cols.iter().map(|&j| self.polys[i][j].clone()).collect()).collect(),
        }
    }

    /// Datum of the product of the two functions (block-diagonal union).
    pub fn product(&self, other: &Self) -> Self {
        let (s1, t1) = (self.a.len(), self.a_prime.len());
        let (s2, t2) = (other.a.len(), other.a_prime.len());
        let mut polys = vec![vec![Poly::zero(); t1 + t2]; s1 + s2];
        for i in 0..s1 {
            for j in 0..t1 {
                polys[i][j] = self.polys[i][j].clone();
            }
        }
        for i in 0..s2 {
            for j in 0..t2 {
                polys[s1 + i][t1 + j] = other.polys[i][j].clone();
            }
        }
        Self {
            a: self.a.iter().chain(&other.a).copied().collect(),
            a_prime: self.a_prime.iter().chain(&other.a_prime).copied().collect(),
            polys,
        }
    }

    /// Upper bound on the total degree of `f` in the entries of `N`.
    pub fn degree_bound(&self) -> usize {
        let t = self.trimmed();
        let mut bound = 0;
        for (i, row) in t.polys.iter().enumerate() {
            let max = row.iter().filter_map(Poly::degree).max().unwrap_or(0);
            bound += t.a[i] * max;
        }
        bound
    }

    pub fn has_positive_degree(&self) -> bool {
        self.polys.iter().flatten().all(|p| p.constant_term().is_zero())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("datum serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        d.check()?;
        Ok(d)
    }
}

/// The block matrix `N^P` of a datum at `N`.
pub fn assemble(d: &SemiInvDatum, n: &RatMatrix) -> Result<RatMatrix> {
    d.check()?;
    if !n.is_square() {
        return Err(Error::Shape("datum evaluated at a non-square matrix".into()));
    }
    let size = n.rows();
    if let Some(&big) = d.a.iter().chain(&d.a_prime).find(|&&x| x > size) {
        return Err(Error::Datum(format!("block size {big} exceeds n = {size}")));
    }
    let t = d.trimmed();
    let r = t.r();
    let mut m = RatMatrix::zeros(r, r);
    let mut row0 = 0;
    for (i, &ai) in t.a.iter().enumerate() {
        let mut col0 = 0;
        for (j, &bj) in t.a_prime.iter().enumerate() {
            let p = &t.polys[i][j];
            if !p.is_zero() {
                let block = p.eval(n).corner_submatrix(ai, bj)?;
                for x in 0..ai {
                    for y in 0..bj {
                        m[(row0 + x, col0 + y)] = block[(x, y)].clone();
                    }
                }
            }
            col0 += bj;
        }
        row0 += ai;
    }
    Ok(m)
}

pub fn evaluate(d: &SemiInvDatum, n: &RatMatrix) -> Result<Rat> {
    assemble(d, n)?.det()
}

/// Weight coefficients over `omega_1..omega_n`.
pub fn weight(d: &SemiInvDatum, n: usize) -> Result<Vec<i64>> {
    let mut w = vec![0i64; n];
    for &a in &d.a {
        if a > n {
            return Err(Error::Datum(format!("block size {a} exceeds n = {n}")));
        }
        for c in &mut w[n - a..] {
            *c += 1;
        }
    }
    for &a in &d.a_prime {
        if a > n {
            return Err(Error::Datum(format!("block size {a} exceeds n = {n}")));
        }
        for c in &mut w[..a] {
            *c -= 1;
        }
    }
    Ok(w)
}

/// Character value `prod_i b_ii^{w_i}` at an invertible upper triangular `b`.
pub fn chi(w: &[i64], b: &RatMatrix) -> Rat {
    let mut acc = Rat::one();
    for (i, &e) in w.iter().enumerate() {
        let x = &b[(i, i)];
        let pow = num::pow(x.clone(), e.unsigned_abs() as usize);
        acc = if e >= 0 { acc * pow } else { acc / pow };
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    /// `det_i = det((N^{n-i})_{(i,i)})`.
    Det(usize),
    /// `f_i`, block sizes `(i), (1, .., 1)`.
    F(usize),
    /// `f_{i,j}`, needs `j < i - 1`.
    Fij(usize, usize),
    UtwoF21,
    UthreeF1,
    UthreeF2,
    UthreeDet1,
    UthreeDet2,
    GRel,
}

impl std::str::FromStr for Builtin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown builtin datum {s:?}"));
        let clean: String = s.chars().filter(|c| !matches!(c, '{' | '}' | ' ')).collect();
        let parts: Vec<&str> = clean.split(|c| c == '_' || c == ',').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        Ok(match parts.as_slice() {
            ["det", i] => Builtin::Det(num(i)?),
            ["f", i] => Builtin::F(num(i)?),
            ["f", i, j] => Builtin::Fij(num(i)?, num(j)?),
            ["utwo", "f21"] => Builtin::UtwoF21,
            ["uthree", "f1"] => Builtin::UthreeF1,
            ["uthree", "f2"] => Builtin::UthreeF2,
            ["uthree", "det1"] => Builtin::UthreeDet1,
            ["uthree", "det2"] => Builtin::UthreeDet2,
            ["g", "rel"] | ["g"] => Builtin::GRel,
            _ => return Err(bad()),
        })
    }
}

fn mono(k: usize) -> Poly {
    Poly::monomial(k)
}

pub fn builtin(name: Builtin, n: usize) -> Result<SemiInvDatum> {
    let need_n = |m: usize| {
        if n == m {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{name:?} is defined for n = {m} only")))
        }
    };
    let d = match name {
        Builtin::Det(i) => {
            if i == 0 || i >= n {
                return Err(Error::Precondition(format!("det_{i} needs 1 <= i <= n-1 = {}", n.saturating_sub(1))));
            }
            SemiInvDatum::new(vec![i], vec![i], vec![vec![mono(n - i)]])?
        }
        Builtin::F(i) => {
            if i == 0 || i >= n {
                return Err(Error::Precondition(format!("f_{i} needs 1 <= i <= n-1 = {}", n.saturating_sub(1))));
            }
            SemiInvDatum::new(vec![i], vec![1; i], vec![(1..=i).map(|j| mono(n - i - 1 + j)).collect()])?
        }
        Builtin::Fij(i, j) => {
            if !(j >= 1 && i <= n && j + 1 < i) {
                return Err(Error::Precondition(format!("f_{{{i},{j}}} needs 1 <= j < i-1 and i <= n = {n}")));
            }
            SemiInvDatum::new(
                vec![j - 1, n - i + 1],
                vec![j, n - i],
                vec![vec![mono(n - j + 1), Poly::zero()], vec![mono(1), mono(i)]],
            )?
        }
        Builtin::UtwoF21 => {
            need_n(2)?;
            SemiInvDatum::new(vec![1], vec![1], vec![vec![mono(1)]])?
        }
        Builtin::UthreeF1 => {
            need_n(3)?;
            SemiInvDatum::new(vec![2], vec![1, 1], vec![vec![mono(1), mono(2)]])?
        }
        Builtin::UthreeF2 => {
            need_n(3)?;
            SemiInvDatum::new(vec![1, 1], vec![2], vec![vec![mono(2)], vec![mono(1)]])?
        }
        Builtin::UthreeDet1 => {
            need_n(3)?;
            SemiInvDatum::new(vec![2], vec![2], vec![vec![mono(1)]])?
        }
        Builtin::UthreeDet2 => {
            need_n(3)?;
            SemiInvDatum::new(vec![1], vec![1], vec![vec![mono(2)]])?
        }
        Builtin::GRel => {
            if n < 4 {
                return Err(Error::Precondition("g is defined for n >= 4".into()));
            }
            if n == 4 {
                SemiInvDatum::new(vec![2], vec![2], vec![vec![mono(1)]])?
            } else {
                SemiInvDatum::new(vec![n - 2], vec![2, n - 4], vec![vec![mono(1), mono(4)]])?
            }
        }
    };
    Ok(d)
}

/// Keeps only the subdiagonal of `h`.
pub fn toric_part(h: &RatMatrix) -> Result<RatMatrix> {
    if !in_h_u(h) {
        return Err(Error::Precondition("matrix is not a U-normal form".into()));
    }
    let n = h.rows();
    let mut t = RatMatrix::zeros(n, n);
    for i in 1..n {
        t[(i, i - 1)] = h[(i, i - 1)].clone();
    }
    Ok(t)
}

/// Subdiagonal matrix with entries `xs`.
pub fn toric_matrix(xs: &[Rat]) -> RatMatrix {
    let n = xs.len() + 1;
    let mut t = RatMatrix::zeros(n, n);
    for (i, x) in xs.iter().enumerate() {
        t[(i + 1, i)] = x.clone();
    }
    t
}

const SAMPLE_RANGE: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToricReport {
    pub toric: bool,
    pub trials: usize,
    /// Bound on the probability that a non-toric datum passed every trial.
    pub error_bound: f64,
    pub counterexample: Option<RatMatrix>,
}

/// Randomized check of `f(H) = f(H_tor)` on `H_U` for `n x n` matrices.
pub fn is_toric_on_samples(d: &SemiInvDatum, n: usize, trials: usize, seed: u64) -> Result<ToricReport> {
    let mut s = Sampler::new(seed);
    for _ in 0..trials {
        let h = s.h_u(n, SAMPLE_RANGE);
        let ht = toric_part(&h)?;
        if evaluate(d, &h)? != evaluate(d, &ht)? {
            return Ok(ToricReport { toric: false, trials, error_bound: 0.0, counterexample: Some(h) });
        }
    }
    let per_trial = (d.degree_bound() as f64 / (2 * SAMPLE_RANGE) as f64).min(1.0);
    Ok(ToricReport { toric: true, trials, error_bound: per_trial.powi(trials as i32), counterexample: None })
}

fn nonempty_proper_subset_sums(xs: &[usize]) -> BTreeSet<usize> {
    let k = xs.len();
    let mut out = BTreeSet::new();
    if k < 2 {
        return out;
    }
    for mask in 1..(1u64 << k) - 1 {
        out.insert((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| xs[i]).sum());
    }
    out
}

/// No nonempty proper sub-sums shared between `a` and `a'` (zero-size
/// blocks ignored).
pub fn is_sum_free(d: &SemiInvDatum) -> bool {
    let t = d.trimmed();
    nonempty_proper_subset_sums(&t.a).is_disjoint(&nonempty_proper_subset_sums(&t.a_prime))
}

/// Exponents predicted by the exponent lemma for a sum-free toric datum.
pub fn predicted_exponents(d: &SemiInvDatum, n: usize) -> Vec<i64> {
    let t = d.trimmed();
    let (s, tt) = (t.a.len() as i64, t.a_prime.len() as i64);
    let mut h = Vec::with_capacity(n.saturating_sub(1));
    for l in 1..n.saturating_sub(1) {
        let plus: i64 = (2..=l).map(|k| t.a_prime.iter().filter(|&&x| x >= k).count() as i64).sum();
        let minus: i64 = (1..l).map(|k| t.a.iter().filter(|&&x| x >= n - k).count() as i64).sum();
        h.push(tt + plus - minus);
    }
    if n >= 2 {
        h.push(s);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricData {
    pub predicted: Vec<i64>,
    pub measured: Vec<u32>,
    pub coefficient: JsonRat,
    pub sum_free: bool,
    pub positive_degree: bool,
    pub matches: bool,
}

fn exact_log2(q: &Rat) -> Option<u32> {
    if !q.is_integer() || !q.is_positive() {
        return None;
    }
    let v = q.to_integer();
    let bits = v.bits();
    (bits > 0 && num::BigInt::one() << (bits - 1) == v).then(|| (bits - 1) as u32)
}

/// Exponents of `f(H_tor)` as a monomial in `x_1..x_{n-1}`, measured by
/// evaluation, next to the lemma's prediction.
pub fn toric_exponents(d: &SemiInvDatum, n: usize) -> Result<ToricData> {
    if n < 2 {
        return Err(Error::Precondition("toric exponents need n >= 2".into()));
    }
    let ones = vec![rat(1); n - 1];
    let c = evaluate(d, &toric_matrix(&ones))?;
    if c.is_zero() {
        return Err(Error::Datum("f vanishes on the toric part at x = 1".into()));
    }
    let mut measured = Vec::with_capacity(n - 1);
    for l in 0..n - 1 {
        let mut xs = ones.clone();
        xs[l] = rat(2);
        let ratio = evaluate(d, &toric_matrix(&xs))? / &c;
        measured.push(exact_log2(&ratio).ok_or_else(|| Error::Datum("f(H_tor) is not a monomial".into()))?);
    }
    let mut s = Sampler::new(0x5eed);
    for _ in 0..3 {
        let xs: Vec<Rat> = (0..n - 1).map(|_| s.nonzero_small_rat()).collect();
        let mut expect = c.clone();
        for (x, &h) in xs.iter().zip(&measured) {
            expect *= num::pow(x.clone(), h as usize);
        }
        if evaluate(d, &toric_matrix(&xs))? != expect {
            return Err(Error::Datum("f(H_tor) is not a monomial".into()));
        }
    }
    let predicted = predicted_exponents(d, n);
    let matches = predicted.iter().zip(&measured).all(|(&p, &m)| p == i64::from(m));
    Ok(ToricData {
        predicted,
        measured,
        coefficient: JsonRat(c),
        sum_free: is_sum_free(d),
        positive_degree: d.has_positive_degree(),
        matches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub n: usize,
    pub trials: usize,
    /// Samples on which `g * F = F'` held.
    pub relation_holds: usize,
    /// Samples on which `g(H) = (x31 x42 - x2 x41) det_{n-4}(H)` held, with `det_0 = 1`.
    pub g_formula_holds: usize,
}

/// Exploratory check of the `g`, `F`, `F'` relation for `n >= 4` on random
/// `U`-normal forms.
pub fn g_relation_check(n: usize, trials: usize, seed: u64) -> Result<RelationReport> {
    if n < 4 {
        return Err(Error::Precondition("the g relation needs n >= 4".into()));
    }
    let g = builtin(Builtin::GRel, n)?;
    let det = |i: usize| builtin(Builtin::Det(i), n);
    let f = |i: usize| builtin(Builtin::F(i), n);
    let fij = |i: usize, j: usize| builtin(Builtin::Fij(i, j), n);
    let (det_n3, det_1) = (det(n - 3)?, det(1)?);
    let (f_n3, f_n1, f_n2) = (f(n - 3)?, f(n - 1)?, f(n - 2)?);
    let (f31, f42, f41) = (fij(3, 1)?, fij(4, 2)?, fij(4, 1)?);
    let mut s = Sampler::new(seed);
    let (mut rel, mut gf) = (0, 0);
    for _ in 0..trials {
        let h = s.h_u(n, 9);
        let e = |d: &SemiInvDatum| evaluate(d, &h);
        let big_f = e(&det_n3)? * e(&det_1)? * e(&f_n3)? * e(&f_n1)?;
        let big_f2 =
            e(&f31)? * e(&f42)? * e(&f_n3)? * e(&f_n1)? - e(&f41)? * num::pow(e(&f_n2)?, 2) * e(&det_n3)? * e(&det_1)?;
        if e(&g)? * big_f == big_f2 {
            rel += 1;
        }
        let det_n4 = if n == 4 { Rat::one() } else { e(&det(n - 4)?)? };
        let x = |i: usize, j: usize| h[(i - 1, j - 1)].clone();
        if e(&g)? == (x(3, 1) * x(4, 2) - x(3, 2) * x(4, 1)) * det_n4 {
            gf += 1;
        }
    }
    Ok(RelationReport { n, trials, relation_holds: rel, g_formula_holds: gf })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(a: &[usize], ap: &[usize], polys: Vec<Vec<Poly>>) -> SemiInvDatum {
        SemiInvDatum::new(a.to_vec(), ap.to_vec(), polys).unwrap()
    }

    fn h3(x1: i64, x2: i64, x31: i64) -> RatMatrix {
        RatMatrix::from_i64(&[&[0, 0, 0], &[x1, 0, 0], &[x31, x2, 0]])
    }

    #[test]
    fn evaluate_examples() {
        let f21 = datum(&[1], &[1], vec![vec![mono(1)]]);
        let n = RatMatrix::from_i64(&[&[2, -4], &[1, -2]]);
        assert_eq!(evaluate(&f21, &n).unwrap(), rat(1));
        let f1 = datum(&[2], &[1, 1], vec![vec![mono(1), mono(2)]]);
        assert_eq!(evaluate(&f1, &h3(2, 3, 5)).unwrap(), rat(12));
        let z = datum(&[1, 1], &[2], vec![vec![Poly::zero()], vec![mono(1)]]);
        assert_eq!(evaluate(&z, &h3(2, 3, 5)).unwrap(), rat(0));
        let empty = datum(&[], &[], vec![]);
        assert_eq!(evaluate(&empty, &h3(1, 1, 1)).unwrap(), rat(1));
        assert!(SemiInvDatum::new(vec![2], vec![1], vec![vec![mono(1)]]).is_err());
        assert!(evaluate(&datum(&[4], &[4], vec![vec![mono(1)]]), &h3(1, 1, 1)).is_err());
    }

    #[test]
    fn weight_examples() {
        let f21 = datum(&[1], &[1], vec![vec![mono(1)]]);
        assert_eq!(weight(&f21, 2).unwrap(), vec![-1, 1]);
        let f1 = datum(&[2], &[1, 1], vec![vec![mono(1), mono(2)]]);
        assert_eq!(weight(&f1, 3).unwrap(), vec![-2, 1, 1]);
        assert_eq!(weight(&datum(&[], &[], vec![]), 3).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn builtin_examples() {
        let n = RatMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let sq = &n * &n;
        assert_eq!(evaluate(&builtin(Builtin::Det(1), 3).unwrap(), &n).unwrap(), sq[(2, 0)]);
        let d1 = evaluate(&builtin(Builtin::UthreeDet1, 3).unwrap(), &n).unwrap();
        assert_eq!(d1, rat(4 * 8 - 5 * 7));
        let f1 = builtin(Builtin::F(1), 4).unwrap();
        assert_eq!(f1.a, vec![1]);
        assert_eq!(f1.polys[0][0], mono(3));
        let t = toric_matrix(&[rat(2), rat(3), rat(5)]);
        assert_eq!(evaluate(&f1, &t).unwrap(), rat(30));
        assert!(builtin(Builtin::Fij(3, 2), 4).is_err());
        assert!(builtin(Builtin::Det(3), 3).is_err());
        assert!(builtin(Builtin::UthreeF1, 4).is_err());
        assert_eq!(builtin(Builtin::F(2), 3).unwrap(), builtin(Builtin::UthreeF1, 3).unwrap());
        assert_eq!("f_{3,1}".parse::<Builtin>().unwrap(), Builtin::Fij(3, 1));
        assert_eq!("det_2".parse::<Builtin>().unwrap(), Builtin::Det(2));
        assert_eq!("uthree_det1".parse::<Builtin>().unwrap(), Builtin::UthreeDet1);
    }

    #[test]
    fn fij_reduces_to_corner_entry() {
        let mut s = Sampler::new(1);
        for n in 3..=5 {
            let m = s.nilpotent(n, n);
            let v = evaluate(&builtin(Builtin::Fij(3, 1), n).unwrap(), &m).unwrap();
            if n == 3 {
                assert_eq!(v, m[(2, 0)]);
            }
        }
    }

    #[test]
    fn toric_part_examples() {
        let t = toric_part(&h3(2, 3, 5)).unwrap();
        assert_eq!(t, h3(2, 3, 0));
        assert_eq!(toric_part(&t).unwrap(), t);
        let two = RatMatrix::from_i64(&[&[0, 0], &[4, 0]]);
        assert_eq!(toric_part(&two).unwrap(), two);
        assert!(toric_part(&h3(0, 3, 5)).is_err());
    }

    #[test]
    fn toric_checks() {
        let f1 = builtin(Builtin::UthreeF1, 3).unwrap();
        assert!(is_toric_on_samples(&f1, 3, 10, 1).unwrap().toric);
        let corner = datum(&[1], &[1], vec![vec![mono(1)]]);
        let r = is_toric_on_samples(&corner, 4, 10, 1).unwrap();
        assert!(!r.toric && r.counterexample.is_some());
        let zero = datum(&[1], &[1], vec![vec![Poly::zero()]]);
        assert!(is_toric_on_samples(&zero, 3, 5, 1).unwrap().toric);
    }

    #[test]
    fn sum_free_examples() {
        let d = |a: &[usize], b: &[usize]| {
            let polys = vec![vec![Poly::zero(); b.len()]; a.len()];
            SemiInvDatum { a: a.to_vec(), a_prime: b.to_vec(), polys }
        };
        assert!(is_sum_free(&d(&[2], &[1, 1])));
        assert!(!is_sum_free(&d(&[1, 1], &[1, 1])));
        assert!(is_sum_free(&d(&[3], &[3])));
    }

    #[test]
    fn exponent_examples() {
        let e = toric_exponents(&builtin(Builtin::UthreeF1, 3).unwrap(), 3).unwrap();
        assert_eq!(e.measured, vec![2, 1]);
        assert!(e.matches);
        let e = toric_exponents(&builtin(Builtin::UthreeF2, 3).unwrap(), 3).unwrap();
        assert_eq!(e.measured, vec![1, 2]);
        assert_eq!(e.predicted, vec![1, 2]);
        let e = toric_exponents(&builtin(Builtin::F(2), 4).unwrap(), 4).unwrap();
        assert_eq!(e.measured, vec![2, 2, 1]);
        assert!(e.matches);
    }

    #[test]
    fn json_round_trip() {
        let d = builtin(Builtin::Fij(4, 1), 5).unwrap();
        assert_eq!(SemiInvDatum::from_json(&d.to_json()).unwrap(), d);
        let s = r#"{"a":[1],"a_prime":[1],"polys":[[["0","1/2"]]]}"#;
        let d = SemiInvDatum::from_json(s).unwrap();
        assert_eq!(d.polys[0][0].0[1], crate::linalg::ratio(1, 2));
    }
    fn all_builtins(n: usize) -> Vec<SemiInvDatum> {
        let mut v = Vec::new();
        for i in 1..n {
            v.push(builtin(Builtin::Det(i), n).unwrap());
            v.push(builtin(Builtin::F(i), n).unwrap());
            for j in 1..i.saturating_sub(1) {
                v.push(builtin(Builtin::Fij(i, j), n).unwrap());
            }
        }
        if n >= 3 {
            for j in 1..n - 1 {
                v.push(builtin(Builtin::Fij(n, j), n).unwrap());
            }
        }
        if n >= 4 {
            v.push(builtin(Builtin::GRel, n).unwrap());
        }
        v
    }

    #[test]
    fn builtins_are_b_semi_invariant() {
        let mut s = Sampler::new(7);
        for n in 2..=5 {
            for d in all_builtins(n) {
                let w = weight(&d, n).unwrap();
                for _ in 0..2 {
                    let m = s.nilpotent(n, n);
                    let b = s.borel(n);
                    let moved = &(&b * &m) * &b.inverse().unwrap();
                    let lhs = evaluate(&d, &moved).unwrap();
                    assert_eq!(lhs, chi(&w, &b) * evaluate(&d, &m).unwrap(), "{d:?}");
                }
            }
        }
    }

    #[test]
    fn product_weights_add() {
        let n = 4;
        let (f, g) = (builtin(Builtin::F(2), n).unwrap(), builtin(Builtin::Det(1), n).unwrap());
        let fg = f.product(&g);
        let wf = weight(&f, n).unwrap();
        let wg = weight(&g, n).unwrap();
        let sum: Vec<i64> = wf.iter().zip(&wg).map(|(x, y)| x + y).collect();
        assert_eq!(weight(&fg, n).unwrap(), sum);
        let m = Sampler::new(3).nilpotent(n, n);
        assert_eq!(evaluate(&fg, &m).unwrap(), evaluate(&f, &m).unwrap() * evaluate(&g, &m).unwrap());
    }

    #[test]
    fn uthree_relations() {
        let f1 = builtin(Builtin::UthreeF1, 3).unwrap();
        let f2 = builtin(Builtin::UthreeF2, 3).unwrap();
        let d1 = builtin(Builtin::UthreeDet1, 3).unwrap();
        let d2 = builtin(Builtin::UthreeDet2, 3).unwrap();
        let mut s = Sampler::new(11);
        for _ in 0..10 {
            let m = s.nilpotent(3, 3);
            let e = |d: &SemiInvDatum| evaluate(d, &m).unwrap();
            assert_eq!(e(&d1), e(&d2));
            assert_eq!(e(&f1) * e(&f2), num::pow(e(&d1), 3));
            let x = |i: usize, j: usize| m[(i - 1, j - 1)].clone();
            let expect = x(3, 2) * e(&d1) + x(3, 1) * (x(1, 1) * x(3, 2) - x(1, 2) * x(3, 1));
            assert_eq!(e(&f2), expect);
        }
    }

    #[test]
    fn toric_builtins_match_lemma() {
        for n in 3..=6 {
            for i in 1..n {
                for d in [builtin(Builtin::Det(i), n).unwrap(), builtin(Builtin::F(i), n).unwrap()] {
                    assert!(is_toric_on_samples(&d, n, 4, 5).unwrap().toric);
                    let e = toric_exponents(&d, n).unwrap();
                    assert!(e.sum_free && e.positive_degree);
                    assert!(e.matches, "n={n} {d:?} {e:?}");
                }
            }
        }
    }

    #[test]
    fn g_relation_report() {
        for n in 4..=6 {
            let r = g_relation_check(n, 5, 2).unwrap();
            assert_eq!(r.trials, 5);
            assert_eq!((r.relation_holds, r.g_formula_holds), (5, 5));
        }
        assert!(g_relation_check(3, 1, 0).is_err());
    }
}
