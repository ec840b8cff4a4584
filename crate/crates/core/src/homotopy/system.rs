use num_complex::Complex64;
use serde::Serialize;

use super::HomotopyError;
use crate::laurent::LaurentPolynomial;

/// A square system of ordinary polynomials (nonnegative exponents).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    unknowns: usize,
    equations: Vec<LaurentPolynomial>,
}

impl PolynomialSystem {
    pub fn new(equations: Vec<LaurentPolynomial>) -> Result<Self, HomotopyError> {
        let unknowns = equations.first().map_or(0, LaurentPolynomial::dimension);
        if unknowns == 0 || equations.len() != unknowns {
            return Err(HomotopyError::NotSquare {
                equations: equations.len(),
                unknowns,
            });
        }
        for (i, f) in equations.iter().enumerate() {
            if f.dimension() != unknowns {
                return Err(HomotopyError::NotSquare {
                    equations: equations.len(),
                    unknowns: f.dimension(),
                });
            }
            if f.is_zero() {
                return Err(HomotopyError::ZeroEquation(i));
            }
            if f.terms().any(|(e, _)| e.entries().iter().any(|&k| k < 0)) {
                return Err(HomotopyError::NegativeExponent(i));
            }
        }
        Ok(Self {
            unknowns,
            equations,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equations(&self) -> &[LaurentPolynomial] {
        &self.equations
    }

    /// Total degree of each equation.
    pub fn degrees(&self) -> Vec<u32> {
        self.equations
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(e, _)| e.total_degree() as u32)
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    /// Largest relative residual `|f_i(x)| / sum |c_a x^a|` over the equations.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        CompiledSystem::new(self).relative_residual(x)
    }
}

/// Flattened representation for fast repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct CompiledSystem {
    n: usize,
    max_degree: usize,
    // per equation: (coefficient, exponents)
    equations: Vec<Vec<(Complex64, Vec<usize>)>>,
}

/// Values, Jacobian rows and evaluation scales at one point.
pub(crate) struct Evaluation {
    pub values: Vec<Complex64>,
    pub jacobian: Vec<Vec<Complex64>>,
    pub scales: Vec<f64>,
}

impl CompiledSystem {
    pub fn new(system: &PolynomialSystem) -> Self {
        let mut max_degree = 0;
        let equations = system
            .equations
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(e, c)| {
                        let ex: Vec<usize> = e.entries().iter().map(|&k| k as usize).collect();
                        max_degree = max_degree.max(ex.iter().copied().max().unwrap_or(0));
                        (*c, ex)
                    })
                    .collect()
            })
            .collect();
        Self {
            n: system.unknowns,
            max_degree,
            equations,
        }
    }

    fn powers(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        x.iter()
            .map(|&z| {
                let mut row = Vec::with_capacity(self.max_degree + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=self.max_degree {
                    row.push(acc);
                    acc *= z;
                }
                row
            })
            .collect()
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Evaluation {
        let pw = self.powers(x);
        let n = self.n;
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        let mut jacobian = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        let mut scales = vec![0.0; n];
        for (i, eq) in self.equations.iter().enumerate() {
            for (c, ex) in eq {
                let mut mono = *c;
                for (j, &k) in ex.iter().enumerate() {
                    mono *= pw[j][k];
                }
                values[i] += mono;
                scales[i] += mono.norm();
                for j in 0..n {
                    let k = ex[j];
                    if k == 0 {
                        continue;
                    }
                    let mut d = *c * k as f64;
                    for (l, &kl) in ex.iter().enumerate() {
                        d *= if l == j { pw[l][kl - 1] } else { pw[l][kl] };
                    }
                    jacobian[i][j] += d;
                }
            }
        }
        Evaluation {
            values,
            jacobian,
            scales,
        }
    }

    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let ev = self.evaluate(x);
        relative(&ev.values, &ev.scales)
    }
}

pub(crate) fn relative(values: &[Complex64], scales: &[f64]) -> f64 {
    values
        .iter()
        .zip(scales)
        .map(|(v, s)| if *s > 0.0 { v.norm() / s } else { v.norm() })
        .fold(0.0, f64::max)
}

/// Counts of path outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub converged: usize,
    pub diverged: usize,
    pub failed: usize,
}

impl PathStats {
    pub fn total(&self) -> usize {
        self.converged + self.diverged + self.failed
    }

    pub fn merge(&mut self, other: &PathStats) {
        self.converged += other.converged;
        self.diverged += other.diverged;
        self.failed += other.failed;
    }
}
