//! Independent reference computations for the integration suites.
#![allow(dead_code)]

use nullform_core::linmodel::DesignMatrix;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Standard normal by Box-Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Intercept followed by `p - 1` Gaussian columns.
pub fn random_design(rng: &mut impl Rng, n: usize, p: usize) -> DesignMatrix {
    let mut x = DesignMatrix::intercept(n);
    for j in 1..p {
        let col: Vec<f64> = (0..n).map(|_| 2.0 * normal(rng)).collect();
        x = x.with_column(format!("x{j}"), &col).unwrap();
    }
    x
}

pub fn rows_of(x: &DesignMatrix) -> Vec<Vec<f64>> {
    (0..x.nrows()).map(|i| (0..x.ncols()).map(|j| x.get(i, j)).collect()).collect()
}

/// Gauss-Jordan elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        b.swap(c, piv);
        let pivot = a[c].clone();
        for r in 0..n {
            if r != c {
                let f = a[r][c] / pivot[c];
                for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * p;
                }
                b[r] -= f * b[c];
            }
        }
    }
    (0..n).map(|i| b[i] / a[i][i]).collect()
}

fn gram(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = rows[0].len();
    let mut g = vec![vec![0.0; p]; p];
    for r in rows {
        for a in 0..p {
            for b in 0..p {
                g[a][b] += r[a] * r[b];
            }
        }
    }
    g
}

/// Least squares by the normal equations: residuals and their sum of squares.
pub fn normal_eq_fit(rows: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let p = rows[0].len();
    let mut xty = vec![0.0; p];
    for (r, yi) in rows.iter().zip(y) {
        for a in 0..p {
            xty[a] += r[a] * yi;
        }
    }
    let beta = solve(gram(rows), xty);
    let res: Vec<f64> =
        rows.iter().zip(y).map(|(r, yi)| yi - r.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>()).collect();
    let sse = res.iter().map(|e| e * e).sum();
    (res, sse)
}

/// Diagonal of `X (X'X)^-1 X'`.
pub fn hat_diagonal(rows: &[Vec<f64>]) -> Vec<f64> {
    let g = gram(rows);
    rows.iter()
        .map(|r| {
            let z = solve(g.clone(), r.clone());
            r.iter().zip(&z).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Studentized residuals from the closed form `e_i / sqrt(s_(i)^2 (1 - h_i))`,
/// with `s_(i)^2` from an explicit refit without row `i`.
pub fn leave_one_out_studentized(x: &DesignMatrix, y: &[f64]) -> Vec<f64> {
    let rows = rows_of(x);
    let (n, p) = (x.nrows(), x.ncols());
    let (e, _) = normal_eq_fit(&rows, y);
    let h = hat_diagonal(&rows);
    (0..n)
        .map(|i| {
            let sub_rows: Vec<Vec<f64>> = (0..n).filter(|&k| k != i).map(|k| rows[k].clone()).collect();
            let sub_y: Vec<f64> = (0..n).filter(|&k| k != i).map(|k| y[k]).collect();
            let (_, sse_i) = normal_eq_fit(&sub_rows, &sub_y);
            e[i] / (sse_i / (n - 1 - p) as f64 * (1.0 - h[i])).sqrt()
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
