//! Generic normal forms for the `P`-, `B`- and `U`-actions on the
//! nilpotent cone.
//!
//! On the generic locus `N` is regular and `F_k` is complementary to
//! `im N^{d_k}`. The adapted basis is then built as follows: `w_1` is the
//! (generically unique up to scale) vector of `F_1` whose iterates stay in
//! `F_1 + im N^{d_1 + 1}`; each later vector is the projection of `N`
//! applied to its predecessor onto `F_k` along `im N^{d_k}` (along
//! `im N^{d_1 + 1}` inside the first block). With `W = [w_1 .. w_n]`,
//! `H = W^-1 N W` and `g = W^-1`. The result is checked against the shape
//! predicate before it is returned.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::blocks::BlockData;
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix};

fn check_nilpotent(n: &RatMatrix, blocks: &BlockData) -> Result<()> {
    if !n.is_square() || n.rows() != blocks.n() {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix", blocks.n())));
    }
    if n.nilpotency_degree()?.is_none() {
        return Err(Error::NotNilpotent(blocks.n()));
    }
    Ok(())
}

fn is_regular(n: &RatMatrix) -> bool {
    let size = n.rows();
    size == 0 || !n.pow(size as u32 - 1).is_zero()
}

/// Minor test: `det((N^{n-d_k})_{(d_k, d_k)}) != 0` for `k < p`. With a
/// single block the test is regularity (`N^{n-1} != 0`).
///
/// Sufficient for the normal form but not necessary, and not stable under
/// `P`-conjugation; [`is_generic_by_columns`] is the exact criterion.
pub fn is_generic(n: &RatMatrix, blocks: &BlockData) -> Result<bool> {
    check_nilpotent(n, blocks)?;
    if blocks.p() == 1 {
        return Ok(is_regular(n));
    }
    let size = blocks.n();
    for k in 1..blocks.p() {
        let d = blocks.d(k);
        let minor = n.pow((size - d) as u32).corner_submatrix(d, d)?.det()?;
        if minor.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column test: the first `d_k` columns of `N^{n-d_k}` are independent for
/// `k < p` (regularity for a single block). Holds exactly when the normal
/// form exists.
pub fn is_generic_by_columns(n: &RatMatrix, blocks: &BlockData) -> Result<bool> {
    check_nilpotent(n, blocks)?;
    if blocks.p() == 1 {
        return Ok(is_regular(n));
    }
    let size = blocks.n();
    Ok((1..blocks.p()).all(|k| {
        let d = blocks.d(k);
        n.pow((size - d) as u32).submatrix(0, size, 0, d).rank() == d
    }))
}

/// Lowest row (1-based) of the forced-zero run in column `x` (1-based).
fn zero_run_end(x: usize, blocks: &BlockData) -> usize {
    let d1 = blocks.d(1);
    if x < d1 {
        return d1 + 1;
    }
    for k in 2..=blocks.p() {
        if blocks.d(k - 1) <= x && x < blocks.d(k) {
            return blocks.d(k);
        }
    }
    blocks.n()
}

/// The verified zero and one positions of a normal form (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCertificate {
    pub zeros: Vec<(usize, usize)>,
    pub ones: Vec<(usize, usize)>,
}

/// Positions forced to 0 and 1 in the generic normal form for `blocks`.
pub fn shape_pattern(blocks: &BlockData) -> ShapeCertificate {
    let n = blocks.n();
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for j in 1..=n {
        let end = zero_run_end(j, blocks);
        for i in 1..=n {
            if i <= j || (i >= j + 2 && i <= end) {
                zeros.push((i, j));
            } else if i == j + 1 {
                ones.push((i, j));
            }
        }
    }
    ShapeCertificate { zeros, ones }
}

/// Whether `h` has the zero/one pattern of the generic normal form.
pub fn shape_predicate(h: &RatMatrix, blocks: &BlockData) -> bool {
    if !h.is_square() || h.rows() != blocks.n() {
        return false;
    }
    let pat = shape_pattern(blocks);
    pat.zeros.iter().all(|&(i, j)| h[(i - 1, j - 1)].is_zero())
        && pat.ones.iter().all(|&(i, j)| h[(i - 1, j - 1)].is_one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericNormalForm {
    pub h: RatMatrix,
    pub g: RatMatrix,
    pub blocks: BlockData,
    pub certificate: ShapeCertificate,
}

/// `v = f + r` with `f` in `span(e_1..e_d)` and `r` in the column span of
/// `g_basis`; returns `f`.
fn project(v: &[Rat], d: usize, g_basis: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let n = v.len();
    let mut cols: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            e
        })
        .collect();
    cols.extend(g_basis.iter().cloned());
    let m = RatMatrix::from_columns(n, &cols);
    let c = m.solve(v)?;
    let mut f = vec![Rat::zero(); n];
    f[..d].clone_from_slice(&c[..d]);
    Some(f)
}

/// Candidate first vectors: kernel vectors of the first-block system,
/// normalized to leading coefficient 1.
fn first_vector_candidates(n: &RatMatrix, blocks: &BlockData) -> Vec<Vec<Rat>> {
    let size = blocks.n();
    let d1 = blocks.d(1);
    let mut span = n.pow((d1 + 1).min(size) as u32).column_space();
    for i in 0..d1 {
        let mut e = vec![Rat::zero(); size];
        e[i] = Rat::one();
        span.push(e);
    }
    let annihilators = RatMatrix::from_columns(size, &span).transpose().kernel();
    let mut rows = Vec::new();
    for j in 1..d1 {
        let nj = n.pow(j as u32);
        for y in &annihilators {
            let row: Vec<Rat> =
                (0..d1).map(|c| (0..size).fold(Rat::zero(), |acc, r| acc + &y[r] * &nj[(r, c)])).collect();
            rows.push(row);
        }
    }
    let kernel = if rows.is_empty() {
        RatMatrix::identity(d1).column_space()
    } else {
        RatMatrix::from_rows(rows).expect("uniform rows").kernel()
    };
    let mut cands: Vec<Vec<Rat>> = kernel.clone();
    if kernel.len() > 1 {
        let mut sum = vec![Rat::zero(); d1];
        for v in &kernel {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
        }
        cands.push(sum);
    }
    cands
        .into_iter()
        .filter_map(|c| {
            let pivot = c.iter().find(|x| !x.is_zero())?.clone();
            let mut w = vec![Rat::zero(); size];
            for (i, x) in c.iter().enumerate() {
                w[i] = x / &pivot;
            }
            Some(w)
        })
        .collect()
}

fn build_basis(n: &RatMatrix, blocks: &BlockData, w1: Vec<Rat>) -> Option<RatMatrix> {
    let size = blocks.n();
    let p = blocks.p();
    let d1 = blocks.d(1);
    let img = |m: usize| n.pow(m.min(size) as u32).column_space();
    let mut ws = vec![w1];
    let g1 = img(d1 + 1);
    for _ in 1..d1 {
        let next = project(&n.mul_vec(ws.last().expect("nonempty")), d1, &g1)?;
        ws.push(next);
    }
    for k in 2..=p {
        let dk = blocks.d(k);
        let gk = img(dk);
        for _ in blocks.d(k - 1)..dk {
            let next = project(&n.mul_vec(ws.last().expect("nonempty")), dk, &gk)?;
            ws.push(next);
        }
    }
    let w = RatMatrix::from_columns(size, &ws);
    (w.rank() == size).then_some(w)
}

/// The `P`-normal form of a generic nilpotent `N`, with witness `g` and
/// `g N g^-1 = H`.
pub fn normal_form(n: &RatMatrix, blocks: &BlockData) -> Result<GenericNormalForm> {
    if !is_generic_by_columns(n, blocks)? {
        return Err(Error::NotGeneric(format!("N^(n-d_k) has dependent first d_k columns for blocks {blocks}")));
    }
    for w1 in first_vector_candidates(n, blocks) {
        let Some(w) = build_basis(n, blocks, w1) else { continue };
        let g = w.inverse().expect("full rank");
        let h = &(&g * n) * &w;
        if shape_predicate(&h, blocks) {
            return Ok(GenericNormalForm { h, g, blocks: blocks.clone(), certificate: shape_pattern(blocks) });
        }
    }
    Err(Error::Construction("no adapted basis passed the shape check".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UNormalForm {
    pub h: RatMatrix,
    pub u: RatMatrix,
}

/// Whether `h` lies in `H_U`: strictly lower triangular with a nonzero
/// subdiagonal.
pub fn in_h_u(h: &RatMatrix) -> bool {
    let n = h.rows();
    h.is_square() && (0..n).all(|i| (i..n).all(|j| h[(i, j)].is_zero())) && (1..n).all(|i| !h[(i, i - 1)].is_zero())
}

/// The `U`-normal form: `u` unipotent upper triangular with `u N u^-1 = H`
/// in `H_U`.
pub fn u_normal_form(n: &RatMatrix) -> Result<UNormalForm> {
    let blocks = BlockData::borel(n.rows().max(1))?;
    if n.rows() == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    let b = normal_form(n, &blocks)?;
    let size = n.rows();
    let mut tinv = RatMatrix::zeros(size, size);
    for i in 0..size {
        tinv[(i, i)] = Rat::one() / &b.g[(i, i)];
    }
    let u = &tinv * &b.g;
    let h = &(&u * n) * &u.inverse().expect("unipotent");
    Ok(UNormalForm { h, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::sample::Sampler;

    fn bd(s: &str) -> BlockData {
        s.parse().unwrap()
    }

    fn subdiag(n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = rat(1);
        }
        m
    }

    #[test]
    fn genericity_examples() {
        let b2 = BlockData::borel(2).unwrap();
        assert!(is_generic(&RatMatrix::from_i64(&[&[0, 0], &[1, 0]]), &b2).unwrap());
        assert!(!is_generic(&RatMatrix::from_i64(&[&[0, 1], &[0, 0]]), &b2).unwrap());
        assert!(is_generic(&subdiag(3), &BlockData::borel(3).unwrap()).unwrap());
        assert!(is_generic(&RatMatrix::identity(2), &b2).is_err());
    }

    #[test]
    fn fixed_point() {
        let mut h = subdiag(3);
        h[(2, 0)] = rat(7);
        let nf = normal_form(&h, &BlockData::borel(3).unwrap()).unwrap();
        assert_eq!(nf.h, h);
        assert_eq!(nf.g, RatMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let n = RatMatrix::from_i64(&[&[2, -4], &[1, -2]]);
        let nf = normal_form(&n, &BlockData::borel(2).unwrap()).unwrap();
        assert_eq!(nf.h, subdiag(2));
        assert_eq!(&(&nf.g * &n) * &nf.g.inverse().unwrap(), nf.h);
        let u = u_normal_form(&n).unwrap();
        assert_eq!(u.h, subdiag(2));
        assert_eq!(u.u, RatMatrix::from_i64(&[&[1, -2], &[0, 1]]));
    }

    #[test]
    fn parabolic_shape() {
        let b = bd("2,1");
        let pat = shape_pattern(&b);
        assert!(pat.ones.contains(&(2, 1)) && pat.ones.contains(&(3, 2)));
        assert!(pat.zeros.contains(&(3, 1)));
        let b = bd("3,1");
        assert!(shape_pattern(&b).zeros.contains(&(4, 1)));
        assert!(shape_pattern(&b).zeros.contains(&(3, 1)));
    }

    #[test]
    fn exact_and_unique_on_samples() {
        let mut s = Sampler::new(17);
        for b in [bd("1,1,1"), bd("2,2"), bd("1,3"), bd("4"), bd("1,1,1,1,1"), bd("2,1,2")] {
            let size = b.n();
            let mut done = 0;
            while done < 5 {
                let n = s.regular_nilpotent(size);
                if !is_generic(&n, &b).unwrap() {
                    continue;
                }
                let nf = normal_form(&n, &b).unwrap();
                assert_eq!(&(&nf.g * &n) * &nf.g.inverse().unwrap(), nf.h);
                assert!(b.pattern_mask().iter().zip(nf.g.entries()).all(|(&ok, x)| ok || x.is_zero()));
                let g2 = s.parabolic(&b);
                let n2 = &(&g2 * &n) * &g2.inverse().unwrap();
                assert_eq!(normal_form(&n2, &b).unwrap().h, nf.h);
                done += 1;
            }
        }
    }

    #[test]
    fn conditions_agree() {
        let mut s = Sampler::new(5);
        for b in [bd("1,1,1,1"), bd("2,2"), bd("1,2,1")] {
            for _ in 0..30 {
                let n = s.nilpotent(b.n(), b.n());
                let cols = is_generic_by_columns(&n, &b).unwrap();
                assert_eq!(cols, normal_form(&n, &b).is_ok());
                assert!(!is_generic(&n, &b).unwrap() || cols);
            }
        }
    }

    #[test]
    fn vanishing_minor_with_generic_columns() {
        let b = bd("2,1");
        let n = RatMatrix::from_rows(vec![
            vec![rat(2), rat(2), ratio(-2, 3)],
            vec![rat(0), rat(0), rat(0)],
            vec![rat(6), ratio(11, 2), rat(-2)],
        ])
        .unwrap();
        assert!(!is_generic(&n, &b).unwrap());
        assert!(is_generic_by_columns(&n, &b).unwrap());
        let nf = normal_form(&n, &b).unwrap();
        assert_eq!(nf.h, RatMatrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]));
        assert!(is_generic(&nf.h, &b).unwrap());
    }

    #[test]
    fn u_normal_form_is_u_invariant() {
        let mut s = Sampler::new(9);
        for size in 2..=4 {
            for _ in 0..5 {
                let n = s.regular_nilpotent(size);
                let Ok(a) = u_normal_form(&n) else { continue };
                assert!(in_h_u(&a.h));
                let u = s.unipotent(size);
                let n2 = &(&u * &n) * &u.inverse().unwrap();
                assert_eq!(u_normal_form(&n2).unwrap().h, a.h);
            }
        }
    }
}
