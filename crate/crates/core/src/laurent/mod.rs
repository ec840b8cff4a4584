//! Sparse Laurent polynomials over the complex numbers.
//!
//! A [`LaurentPolynomial`] in `n` variables is a finite map from integer
//! exponent vectors (negative entries allowed) to nonzero complex
//! coefficients. Terms are kept in graded order: ascending total degree,
//! ties broken by descending lexicographic order, so that `1 + x + y + x*y`
//! prints the way one would write it by hand.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use parse::{parse, ParseError};

/// Relative magnitude below which a coefficient is treated as zero.
pub const PRUNE_RELATIVE: f64 = 1e-14;

/// Smallest coordinate magnitude accepted by [`LaurentPolynomial::evaluate`].
pub const UNDERFLOW_GUARD: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("exponent vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} has magnitude {magnitude:e}, below the underflow guard")]
    Underflow { index: usize, magnitude: f64 },
    #[error("axis index {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },
    #[error("substitution matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i64 },
    #[error("matrix has shape {rows}x{cols}, expected {dimension}x{dimension}")]
    BadMatrix {
        rows: usize,
        cols: usize,
        dimension: usize,
    },
    #[error("the zero polynomial has no cleared form")]
    ZeroPolynomial,
}

/// Integer exponent vector of a Laurent monomial.
///
/// Ordered by total degree first, then by *descending* lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<i32>);

impl ExponentVector {
    pub fn new(entries: Vec<i32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = vec![0; n];
        v[axis] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i32;

    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(v: Vec<i32>) -> Self {
        Self(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point of the torus `(C*)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint(Vec<Complex64>);

impl TorusPoint {
    /// Fails if any coordinate is zero (or below the underflow guard).
    pub fn new(coords: Vec<Complex64>) -> Result<Self, LaurentError> {
        for (index, c) in coords.iter().enumerate() {
            let magnitude = c.norm();
            if !(magnitude > UNDERFLOW_GUARD) {
                return Err(LaurentError::Underflow { index, magnitude });
            }
        }
        Ok(Self(coords))
    }

    pub fn from_real(coords: &[f64]) -> Result<Self, LaurentError> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The identity element `(1, ..., 1)`.
    pub fn identity(n: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }
}

/// Complex power with integer exponent; negative powers are reciprocals.
pub(crate) fn cpowi(z: Complex64, e: i32) -> Complex64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        Complex64::new(1.0, 0.0) / z.powu(e.unsigned_abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    dimension: usize,
    terms: BTreeMap<ExponentVector, Complex64>,
}

impl LaurentPolynomial {
    pub fn zero(dimension: usize) -> Self {
        Self {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: Complex64) -> Self {
        Self::from_terms(dimension, [(ExponentVector::zero(dimension), c)])
            .expect("zero vector has the right length")
    }

    pub fn monomial(exponent: ExponentVector, c: Complex64) -> Self {
        let n = exponent.len();
        Self::from_terms(n, [(exponent, c)]).expect("length matches by construction")
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, combining
    /// like terms and pruning coefficients that are negligible relative to
    /// the largest one.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (ExponentVector, Complex64)>,
    {
        let mut map: BTreeMap<ExponentVector, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dimension {
                return Err(LaurentError::DimensionMismatch {
                    expected: dimension,
                    found: e.len(),
                });
            }
            *map.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::pruned(dimension, map))
    }

    fn pruned(dimension: usize, mut terms: BTreeMap<ExponentVector, Complex64>) -> Self {
        let max = terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = max * PRUNE_RELATIVE;
        terms.retain(|_, c| c.norm() > floor);
        Self { dimension, terms }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Complex64 {
        self.terms.get(e).copied().unwrap_or_default()
    }

    /// Exponent vectors of the support, in canonical order.
    pub fn support(&self) -> Vec<Vec<i32>> {
        self.terms.keys().map(|e| e.entries().to_vec()).collect()
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of `|c_a| |p^a|`, the natural scale for a relative residual at `p`.
    pub fn evaluation_scale(&self, p: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * monomial_value(e, p).norm())
            .sum()
    }

    /// Evaluates at a torus point.
    pub fn evaluate(&self, p: &TorusPoint) -> Result<Complex64, LaurentError> {
        self.evaluate_slice(p.coords())
    }

    /// Evaluates at raw coordinates, applying the same guards as
    /// [`evaluate`](Self::evaluate).
    pub fn evaluate_slice(&self, p: &[Complex64]) -> Result<Complex64, LaurentError> {
        if p.len() != self.dimension {
            return Err(LaurentError::DimensionMismatch {
                expected: self.dimension,
                found: p.len(),
            });
        }
        for (index, c) in p.iter().enumerate() {
            let magnitude = c.norm();
            if !(magnitude >= UNDERFLOW_GUARD) {
                return Err(LaurentError::Underflow { index, magnitude });
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * monomial_value(e, p))
            .sum())
    }

    /// `z_i * d f / d z_i` (0-based `axis`).
    pub fn log_derivative(&self, axis: usize) -> Result<Self, LaurentError> {
        if axis >= self.dimension {
            return Err(LaurentError::AxisOutOfRange {
                axis,
                dimension: self.dimension,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[axis] != 0)
            .map(|(e, c)| (e.clone(), c * e[axis] as f64));
        Ok(Self {
            dimension: self.dimension,
            terms: terms.collect(),
        })
    }

    /// Componentwise minimum of the support exponents.
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut keys = self.terms.keys();
        let first = keys.next()?.entries().to_vec();
        let min = keys.fold(first, |mut acc, e| {
            for (a, &b) in acc.iter_mut().zip(e.entries()) {
                *a = (*a).min(b);
            }
            acc
        });
        Some(ExponentVector(min))
    }

    /// Multiplies by the monomial `z^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        Self {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(e, c)| (e.add(shift), *c)).collect(),
        }
    }

    /// Returns `(g, shift)` with `g = z^shift * f` an ordinary polynomial
    /// whose exponents are nonnegative and touch zero on every axis.
    pub fn clear_denominators(&self) -> Result<(Self, ExponentVector), LaurentError> {
        let min = self.min_exponents().ok_or(LaurentError::ZeroPolynomial)?;
        let shift = ExponentVector(min.entries().iter().map(|&m| -m).collect());
        Ok((self.shift(&shift), shift))
    }

    /// Monomial change of variables composed with a torus translation:
    /// `z_j -> c_j * z^{M e_j}`, i.e. the monomial `z^a` becomes
    /// `c^a z^{M a}`. `matrix` is row-major and must be unimodular.
    pub fn substitute(&self, matrix: &[Vec<i64>], c: &TorusPoint) -> Result<Self, LaurentError> {
        let n = self.dimension;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(LaurentError::BadMatrix {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, Vec::len),
                dimension: n,
            });
        }
        if c.dimension() != n {
            return Err(LaurentError::DimensionMismatch {
                expected: n,
                found: c.dimension(),
            });
        }
        let det = integer_determinant(matrix);
        if det.abs() != 1 {
            return Err(LaurentError::NotUnimodular { det });
        }
        let terms = self.terms.iter().map(|(e, coef)| {
            let image: Vec<i32> = (0..n)
                .map(|row| {
                    (0..n)
                        .map(|col| matrix[row][col] * e[col] as i64)
                        .sum::<i64>() as i32
                })
                .collect();
            (ExponentVector(image), coef * monomial_value(e, c.coords()))
        });
        Self::from_terms(n, terms)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s));
        Self::from_terms(self.dimension, terms).expect("same dimension")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<ExponentVector, Complex64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *out.entry(ea.add(eb)).or_default() += ca * cb;
            }
        }
        Self::pruned(self.dimension, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            *out.entry(e.clone()).or_default() += c;
        }
        Self::pruned(self.dimension, out)
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dimension, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Keeps only the terms whose exponents satisfy `keep`.
    pub fn restrict<F: Fn(&[i32]) -> bool>(&self, keep: F) -> Self {
        Self {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e.entries()))
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    /// Largest absolute exponent entry, used to bound powers tables.
    pub fn max_abs_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.entries().iter().map(|x| x.unsigned_abs()))
            .max()
            .unwrap_or(0)
    }

    /// Approximate equality of coefficients on the union of supports.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dimension != other.dimension {
            return false;
        }
        let scale = self
            .coefficient_norm()
            .max(other.coefficient_norm())
            .max(1.0);
        self.terms
            .keys()
            .chain(other.terms.keys())
            .all(|e| (self.coefficient(e) - other.coefficient(e)).norm() <= tol * scale)
    }
}

pub(crate) fn monomial_value(e: &ExponentVector, p: &[Complex64]) -> Complex64 {
    e.entries()
        .iter()
        .zip(p)
        .map(|(&k, &z)| cpowi(z, k))
        .product()
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Inverse of a unimodular integer matrix, computed by the adjugate.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, LaurentError> {
    let n = m.len();
    let det = integer_determinant(m);
    if det.abs() != 1 {
        return Err(LaurentError::NotUnimodular { det });
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let cof = integer_determinant(&minor);
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = sign * cof * det;
        }
    }
    Ok(inv)
}

pub(crate) fn variable_name(n: usize, axis: usize) -> String {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if n <= 4 {
        LETTERS[axis].to_string()
    } else {
        format!("x{}", axis + 1)
    }
}

fn format_real(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn format_monomial(n: usize, e: &ExponentVector) -> String {
    e.entries()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(axis, &k)| {
            let v = variable_name(n, axis);
            if k == 1 {
                v
            } else {
                format!("{v}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = format_monomial(self.dimension, e);
            let (negative, body) = if c.im == 0.0 {
                let neg = c.re < 0.0;
                let mag = c.re.abs();
                let body = match (mono.is_empty(), mag == 1.0) {
                    (true, _) => format_real(mag),
                    (false, true) => mono.clone(),
                    (false, false) => format!("{}*{}", format_real(mag), mono),
                };
                (neg, body)
            } else {
                let coef = format!(
                    "({}{}{}i)",
                    format_real(c.re),
                    if c.im < 0.0 { "-" } else { "+" },
                    format_real(c.im.abs())
                );
                let body = if mono.is_empty() {
                    coef
                } else {
                    format!("{coef}*{mono}")
                };
                (false, body)
            };
            match (i, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn p(text: &str, n: usize) -> LaurentPolynomial {
        parse(text, n).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = p("1+x+y", 2);
        let one = TorusPoint::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(f.evaluate(&one).unwrap(), c(3.0));
        let g = p("x^-1", 1);
        let two = TorusPoint::from_real(&[2.0]).unwrap();
        assert_eq!(g.evaluate(&two).unwrap(), c(0.5));
        let root = TorusPoint::from_real(&[-2.0, 1.0]).unwrap();
        assert_eq!(f.evaluate(&root).unwrap(), c(0.0));
    }

    #[test]
    fn evaluate_rejects_underflow() {
        let f = p("1+x", 1);
        let err = f
            .evaluate_slice(&[Complex64::new(1e-301, 0.0)])
            .unwrap_err();
        assert!(matches!(err, LaurentError::Underflow { index: 0, .. }));
        assert!(TorusPoint::from_real(&[0.0]).is_err());
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(p("1+x+y", 2).log_derivative(0).unwrap(), p("x", 2));
        assert_eq!(p("x^-1", 1).log_derivative(0).unwrap(), p("-x^-1", 1));
        assert_eq!(
            p("1+x+y+x*y", 2).log_derivative(1).unwrap(),
            p("y + x*y", 2)
        );
        assert!(p("x", 1).log_derivative(1).is_err());
    }

    #[test]
    fn clear_denominators_examples() {
        let (g, s) = p("x^-1 + y", 2).clear_denominators().unwrap();
        assert_eq!(g, p("1 + x*y", 2));
        assert_eq!(s.entries(), &[1, 0]);

        let f = p("1+x+y", 2);
        let (g, s) = f.clear_denominators().unwrap();
        assert_eq!(g, f);
        assert_eq!(s.entries(), &[0, 0]);

        let (g, s) = p("x^-2*y^-1 + x", 2).clear_denominators().unwrap();
        assert_eq!(g, p("1 + x^3*y", 2));
        assert_eq!(s.entries(), &[2, 1]);

        assert!(LaurentPolynomial::zero(2).clear_denominators().is_err());
    }

    #[test]
    fn substitute_examples() {
        let id = vec![vec![1]];
        let f = p("1+x", 1);
        let one = TorusPoint::identity(1);
        assert_eq!(f.substitute(&id, &one).unwrap(), f);
        let two = TorusPoint::from_real(&[2.0]).unwrap();
        assert_eq!(f.substitute(&id, &two).unwrap(), p("1+2x", 1));

        let m = vec![vec![1, 1], vec![0, 1]];
        let g = p("1+x+y", 2)
            .substitute(&m, &TorusPoint::identity(2))
            .unwrap();
        assert_eq!(g, p("1 + x + x*y", 2));
    }

    #[test]
    fn substitute_rejects_non_unimodular() {
        let m = vec![vec![2, 0], vec![0, 1]];
        let err = p("1+x", 2)
            .substitute(&m, &TorusPoint::identity(2))
            .unwrap_err();
        assert_eq!(err, LaurentError::NotUnimodular { det: 2 });
    }

    #[test]
    fn pruning_relative_to_largest_coefficient() {
        let f = LaurentPolynomial::from_terms(
            1,
            [
                (ExponentVector::new(vec![0]), c(1.0)),
                (ExponentVector::new(vec![1]), c(1e-15)),
            ],
        )
        .unwrap();
        assert_eq!(f.num_terms(), 1);
    }

    #[test]
    fn canonical_order_and_display() {
        let f = p("x*y + y + x + 1", 2);
        assert_eq!(f.to_string(), "1 + x + y + x*y");
        let g = p("3 - 2.5*x^-1*y^2 + (1+2i)*x", 2);
        assert_eq!(g.to_string(), "3 + (1+2i)*x - 2.5*x^-1*y^2");
        assert_eq!(LaurentPolynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![2, 1, 0], vec![1, 1, 0], vec![0, 3, 1]];
        assert_eq!(integer_determinant(&m), 1);
        let inv = unimodular_inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(s, (i == j) as i64);
            }
        }
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), -1);
    }
}
