//! Small exact linear algebra over the rationals and unimodular integer changes of basis.

use crate::rational::Rational;

/// Row-reduces `rows` in place; returns the pivot columns.
fn reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..rows[i].len() {
                    let sub = &f * &rows[r][k];
                    rows[i][k] -= &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    reduce(&mut m, ncols).len()
}

/// Unique solution of the square system `a x = b`, or `None` if singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = reduce(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// A basis of `{x : rows·x = 0}`.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = reduce(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[r][f];
            }
            v
        })
        .collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

/// An integer matrix `V` with determinant ±1 and `V·u = e_1`. Requires `u` primitive.
pub fn unimodular_to_e1(u: &[i64]) -> Option<Vec<Vec<i64>>> {
    let n = u.len();
    if vec_gcd(u) != 1 {
        return None;
    }
    let mut w = u.to_vec();
    let mut v: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        if nonzero.len() == 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &j in &nonzero {
            if j != p {
                let q = w[j] / w[p];
                w[j] -= q * w[p];
                for k in 0..n {
                    v[j][k] -= q * v[p][k];
                }
            }
        }
    }
    let p = (0..n).find(|&i| w[i] != 0).unwrap();
    w.swap(0, p);
    v.swap(0, p);
    if w[0] < 0 {
        for x in v[0].iter_mut() {
            *x = -*x;
        }
    }
    Some(v)
}

pub fn mat_vec(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Solves `mᵀ·y = x` for `y`, where `m` is invertible.
pub fn solve_transpose(m: &[Vec<i64>], x: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::integer(m[j][i])).collect())
        .collect();
    solve(&a, x)
}
