//! Exact rational linear algebra on column lists.

use num_traits::{One, Signed, Zero};

use crate::reals::Rational;

/// Columns padded to a common height.
pub fn pad(cols: &[Vec<Rational>], b: Option<&[Rational]>) -> (Vec<Vec<Rational>>, Vec<Rational>, usize) {
    let d = cols.iter().map(Vec::len).chain(b.map(<[Rational]>::len)).max().unwrap_or(0);
    let fill = |v: &[Rational]| {
        let mut v = v.to_vec();
        v.resize(d, Rational::zero());
        v
    };
    (cols.iter().map(|c| fill(c)).collect(), fill(b.unwrap_or(&[])), d)
}

/// Solves ∑ γ_j cols[j] = b, free variables set to zero.
pub fn solve_in_span(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let (cols, b, d) = pad(cols, Some(b));
    let n = cols.len();
    // Augmented rows [A | b].
    let mut rows: Vec<Vec<Rational>> = (0..d).map(|i| cols.iter().map(|c| c[i].clone()).chain([b[i].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..d).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=n {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut g = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        g[c] = rows[i][n].clone();
    }
    Some(g)
}

pub fn rank(cols: &[Vec<Rational>]) -> usize {
    let (cols, _, d) = pad(cols, None);
    let mut m: Vec<Vec<Rational>> = cols;
    let mut r = 0;
    for i in 0..d {
        let Some(p) = (r..m.len()).find(|&j| !m[j][i].is_zero()) else { continue };
        m.swap(r, p);
        for j in r + 1..m.len() {
            if !m[j][i].is_zero() {
                let f = &m[j][i] / &m[r][i];
                for k in 0..d {
                    let t = &m[r][k] * &f;
                    m[j][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn transpose(cols: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// L = (WᵀW)⁻¹Wᵀ as rows, for W of full column rank.
pub fn left_inverse(cols: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let (w, _, d) = pad(cols, None);
    let n = w.len();
    let gram: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| w[i].iter().zip(&w[j]).map(|(a, b)| a * b).sum()).collect()).collect();
    let rows_wt = w.clone();
    // Solve G·X = Wᵀ column by column of Wᵀ (one per coordinate).
    let gcols: Vec<Vec<Rational>> = (0..n).map(|j| (0..n).map(|i| gram[i][j].clone()).collect()).collect();
    if rank(&gcols) < n {
        return None;
    }
    let wt_cols = transpose(&rows_wt, d);
    let sol: Vec<Vec<Rational>> = wt_cols.iter().map(|b| solve_in_span(&gcols, b)).collect::<Option<_>>()?;
    // sol[i] is column i of L.
    Some((0..n).map(|r| (0..d).map(|i| sol[i][r].clone()).collect()).collect())
}

/// Euclidean least-squares coefficients for b against independent columns.
pub fn least_squares(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    if cols.is_empty() {
        return Some(Vec::new());
    }
    let l = left_inverse(cols)?;
    let (_, b, _) = pad(cols, Some(b));
    Some(l.iter().map(|row| row.iter().zip(&b).map(|(a, x)| a * x).sum()).collect())
}

/// max_i ∑_j |L_ij|.
pub fn inf_norm(rows: &[Vec<Rational>]) -> Rational {
    rows.iter().map(|r| r.iter().map(|x| x.abs()).sum::<Rational>()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}
