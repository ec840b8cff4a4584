//! Tiny dense complex linear algebra for the path tracker.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes.
pub(crate) fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
        if a[p][k].norm() == 0.0 || !a[p][k].norm().is_finite() {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        let pivot = a[k][k];
        for i in k + 1..n {
            let factor = a[i][k] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= factor * v;
            }
            let v = b[k];
            b[i] -= factor * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    if x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// 2-norm condition number `sigma_max / sigma_min` (infinite when singular).
pub(crate) fn condition_number(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_system() {
        let a = vec![
            vec![c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 1.0), c(1.0, 0.0)],
        ];
        let b = vec![c(4.0, 0.0), c(3.0, 1.0)];
        let x = solve(a, b).unwrap();
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((x[0] - c(1.0, 0.0) / c(1.0, 1.0) * c(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_returns_none() {
        let a = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        assert!(solve(a, vec![c(1.0, 0.0), c(1.0, 0.0)]).is_none());
    }

    #[test]
    fn condition_of_diagonal() {
        let a = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1e-3)],
        ];
        assert!((condition_number(&a) - 1e3).abs() < 1e-9);
    }
}
