//! Roots of univariate complex polynomials via companion-matrix eigenvalues,
//! grouped into distinct roots with multiplicities.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Radius below which two eigenvalues are always identified.
pub const DEDUP_RADIUS: f64 = 1e-8;

// Eigenvalues of a k-fold root scatter by roughly eps^(1/k); candidate
// groups are formed at this looser radius and then tested by evaluating
// the derivatives at the group centroid.
const CANDIDATE_RADIUS: f64 = 1e-3;
const CENTROID_VALUE_TOL: f64 = 1e-12;
const CENTROID_DERIVATIVE_TOL: f64 = 1e-7;

/// Polynomial given by ascending coefficients `c[0] + c[1] z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Univariate {
    coeffs: Vec<Complex64>,
}

impl Univariate {
    /// Trailing (highest-degree) zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the rounding scale of [`eval`](Self::eval).
    pub fn scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// All roots with multiplicity, as eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[d];
        if d == 1 {
            return vec![-self.coeffs[0] / lead];
        }
        let companion = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -self.coeffs[i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let t = companion.schur().unpack().1;
        let mut out = Vec::with_capacity(d);
        let mut m = 0;
        while m < d {
            let split = m + 1 == d
                || t[(m + 1, m)].norm()
                    <= f64::EPSILON * (t[(m, m)].norm() + t[(m + 1, m + 1)].norm());
            if split {
                out.push(t[(m, m)]);
                m += 1;
            } else {
                // 2x2 block: eigenvalues from its characteristic polynomial
                let (a, b, c, e) = (t[(m, m)], t[(m, m + 1)], t[(m + 1, m)], t[(m + 1, m + 1)]);
                let tr = a + e;
                let det = a * e - b * c;
                let disc = (tr * tr - 4.0 * det).sqrt();
                out.push((tr + disc) / 2.0);
                out.push((tr - disc) / 2.0);
                m += 2;
            }
        }
        out.into_iter().map(|z| self.polish(z)).collect()
    }

    /// A few guarded Newton steps; keeps the input if they do not help.
    fn polish(&self, z: Complex64) -> Complex64 {
        let dp = self.derivative();
        let mut best = (self.eval(z).norm(), z);
        let mut x = z;
        for _ in 0..3 {
            let d = dp.eval(x);
            if d.norm() == 0.0 {
                break;
            }
            x -= self.eval(x) / d;
            let r = self.eval(x).norm();
            if !r.is_finite() {
                break;
            }
            if r < best.0 {
                best = (r, x);
            }
        }
        best.1
    }

    /// Distinct roots with their multiplicities, in canonical order.
    pub fn distinct_roots(&self) -> Vec<(Complex64, usize)> {
        let mut roots = self.roots();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let groups = single_linkage(&roots, CANDIDATE_RADIUS);
        let mut out = Vec::new();
        for group in groups {
            if group.len() == 1 {
                out.push((roots[group[0]], 1));
                continue;
            }
            let centroid = group.iter().map(|&i| roots[i]).sum::<Complex64>() / group.len() as f64;
            if self.is_multiple_root(centroid, group.len()) {
                out.push((centroid, group.len()));
            } else {
                let members: Vec<Complex64> = group.iter().map(|&i| roots[i]).collect();
                for sub in single_linkage(&members, DEDUP_RADIUS) {
                    let c = sub.iter().map(|&i| members[i]).sum::<Complex64>() / sub.len() as f64;
                    out.push((c, sub.len()));
                }
            }
        }
        out
    }

    fn is_multiple_root(&self, c: Complex64, k: usize) -> bool {
        let mut p = self.clone();
        for j in 0..k {
            let tol = if j == 0 {
                CENTROID_VALUE_TOL
            } else {
                CENTROID_DERIVATIVE_TOL
            };
            if p.eval(c).norm() > tol * p.scale(c).max(f64::MIN_POSITIVE) {
                return false;
            }
            p = p.derivative();
        }
        true
    }
}

fn single_linkage(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            let r = radius * points[i].norm().max(points[j].norm()).max(1.0);
            if (points[i] - points[j]).norm() <= r {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        match seen[label[i]] {
            Some(g) => groups[g].push(i),
            None => {
                seen[label[i]] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> Univariate {
        Univariate::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    fn from_roots(roots: &[Complex64]) -> Univariate {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        Univariate::new(c)
    }

    #[test]
    fn simple_roots() {
        let p = poly(&[2.0, -3.0, 1.0]);
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn double_root_counted_once() {
        let d = poly(&[1.0, -2.0, 1.0]).distinct_roots();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 2);
        assert!((d[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn higher_multiplicities() {
        let r = [
            Complex64::new(0.5, 1.0),
            Complex64::new(0.5, 1.0),
            Complex64::new(0.5, 1.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(3.0, -1.0),
        ];
        let mut d = from_roots(&r).distinct_roots();
        d.sort_by_key(|x| x.1);
        let mult: Vec<usize> = d.iter().map(|x| x.1).collect();
        assert_eq!(mult, vec![1, 2, 3]);
    }

    #[test]
    fn close_but_distinct_roots_are_kept() {
        let r = [Complex64::new(1.0, 0.0), Complex64::new(1.0001, 0.0)];
        assert_eq!(from_roots(&r).distinct_roots().len(), 2);
    }

    #[test]
    fn roots_of_unity() {
        let mut c = vec![Complex64::new(0.0, 0.0); 8];
        c[0] = Complex64::new(-1.0, 0.0);
        c[7] = Complex64::new(1.0, 0.0);
        let p = Univariate::new(c);
        let d = p.distinct_roots();
        assert_eq!(d.len(), 7);
        for (z, _) in d {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }
}
