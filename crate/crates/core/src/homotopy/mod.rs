//! Total-degree homotopy continuation for square polynomial systems.
//!
//! Every root of the target system is reached from a start system
//! `x_i^{d_i} - c_i` along `H(x, t) = (1 - t) * gamma * S(x) + t * F(x)`,
//! with a random unit-modulus `gamma` drawn once per solve. Paths are
//! followed by a 4th-order Runge-Kutta predictor on the Davidenko equation
//! and a short Newton corrector.

mod linalg;
mod system;
mod tracker;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::polytope::{self, PolytopeError};

pub use system::{PathStats, PolynomialSystem};
pub use tracker::{track_path, Homotopy, PathResult};

use linalg::condition_number;
use system::CompiledSystem;

/// Largest number of unknowns the solver accepts.
pub const MAX_UNKNOWNS: usize = 6;
/// Largest Bezout number (start-path count) the solver accepts.
pub const MAX_PATHS: u64 = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomotopyError {
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("equation {0} is identically zero")]
    ZeroEquation(usize),
    #[error("equation {0} has a negative exponent")]
    NegativeExponent(usize),
    #[error("{unknowns} unknowns exceed the cap of {MAX_UNKNOWNS}")]
    TooManyUnknowns { unknowns: usize },
    #[error("Bezout number {paths} exceeds the cap of {MAX_PATHS}")]
    CapExceeded { paths: u64 },
    #[error("start degree must be positive")]
    ZeroDegree,
    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Tracker tolerances and the seed for all random choices of one solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative residual the corrector must reach at every step.
    pub corrector_tolerance: f64,
    pub max_corrector_iterations: usize,
    /// A path is declared divergent once any coordinate exceeds this.
    pub divergence_threshold: f64,
    pub endpoint_tolerance: f64,
    /// Relative radius for merging endpoints.
    pub dedup_radius: f64,
    /// Condition-number estimate above which an endpoint is flagged singular.
    pub singular_threshold: f64,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1e-8,
            max_step: 0.1,
            corrector_tolerance: 1e-11,
            max_corrector_iterations: 3,
            divergence_threshold: 1e8,
            endpoint_tolerance: 1e-12,
            dedup_radius: 1e-6,
            singular_threshold: 1e10,
            max_steps: 20_000,
            seed: 42,
        }
    }
}

impl TrackerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), HomotopyError> {
        let bad = |m: &str| Err(HomotopyError::InvalidConfig(m.to_string()));
        if !(0.0 < self.min_step && self.min_step < self.initial_step && self.initial_step < 1.0) {
            return bad("need 0 < min_step < initial_step < 1");
        }
        if self.max_step < self.initial_step {
            return bad("max_step must be at least initial_step");
        }
        for (name, v) in [
            ("corrector_tolerance", self.corrector_tolerance),
            ("divergence_threshold", self.divergence_threshold),
            ("endpoint_tolerance", self.endpoint_tolerance),
            ("dedup_radius", self.dedup_radius),
            ("singular_threshold", self.singular_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(&format!("{name} must be positive"));
            }
        }
        if self.max_corrector_iterations == 0 || self.max_steps == 0 {
            return bad("iteration limits must be positive");
        }
        Ok(())
    }
}

/// Start system `x_i^{d_i} - c_i` together with all of its roots.
#[derive(Debug, Clone)]
pub struct StartSystem {
    pub system: PolynomialSystem,
    pub constants: Vec<Complex64>,
    pub roots: Vec<Vec<Complex64>>,
}

fn unit_random(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * TAU)
}

fn check_degrees(degrees: &[u32]) -> Result<u64, HomotopyError> {
    if degrees.len() > MAX_UNKNOWNS {
        return Err(HomotopyError::TooManyUnknowns {
            unknowns: degrees.len(),
        });
    }
    if degrees.iter().any(|&d| d == 0) {
        return Err(HomotopyError::ZeroDegree);
    }
    let paths = degrees
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
        .unwrap_or(u64::MAX);
    if paths > MAX_PATHS {
        return Err(HomotopyError::CapExceeded { paths });
    }
    Ok(paths)
}

fn bezout_start_with(degrees: &[u32], rng: &mut ChaCha8Rng) -> Result<StartSystem, HomotopyError> {
    check_degrees(degrees)?;
    let m = degrees.len();
    let constants: Vec<Complex64> = (0..m).map(|_| unit_random(rng)).collect();
    let equations = degrees
        .iter()
        .zip(&constants)
        .enumerate()
        .map(|(i, (&d, &c))| {
            let mut e = vec![0; m];
            e[i] = d as i32;
            LaurentPolynomial::from_terms(
                m,
                [
                    (ExponentVector::new(e), Complex64::new(1.0, 0.0)),
                    (ExponentVector::zero(m), -c),
                ],
            )
            .expect("dimensions agree")
        })
        .collect();
    let system = PolynomialSystem::new(equations)?;
    // per-axis roots of x^d = c, then their Cartesian product
    let axis_roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .zip(&constants)
        .map(|(&d, &c)| {
            let base = c.powf(1.0 / d as f64);
            (0..d)
                .map(|k| base * Complex64::from_polar(1.0, TAU * k as f64 / d as f64))
                .collect()
        })
        .collect();
    let mut roots: Vec<Vec<Complex64>> = vec![Vec::new()];
    for choices in &axis_roots {
        roots = roots
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&r| {
                    let mut p = prefix.clone();
                    p.push(r);
                    p
                })
            })
            .collect();
    }
    Ok(StartSystem {
        system,
        constants,
        roots,
    })
}

/// Total-degree start system for the given degrees, with unit-modulus
/// constants drawn from `seed`.
pub fn bezout_start(degrees: &[u32], seed: u64) -> Result<StartSystem, HomotopyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    bezout_start_with(degrees, &mut rng)
}

/// Deduplicated endpoints of a full homotopy solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    pub points: Vec<Vec<Complex64>>,
    /// Jacobian condition estimate above the singular threshold.
    pub singular: Vec<bool>,
    /// Number of converged paths merged into each point.
    pub multiplicities: Vec<usize>,
    pub residuals: Vec<f64>,
    pub conditions: Vec<f64>,
    pub path_stats: PathStats,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn canonical_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn close(a: &[Complex64], b: &[Complex64], radius: f64) -> bool {
    let d: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = linalg::norm(a).max(linalg::norm(b)).max(1.0);
    d <= radius * scale
}

/// Relative residual and row-scaled Jacobian condition number at `x`.
fn quality(system: &CompiledSystem, x: &[Complex64]) -> (f64, f64) {
    let ev = system.evaluate(x);
    let scaled: Vec<Vec<Complex64>> = ev
        .jacobian
        .iter()
        .zip(&ev.scales)
        .map(|(row, &s)| {
            let s = if s > 0.0 { s } else { 1.0 };
            row.iter().map(|v| v / s).collect()
        })
        .collect();
    (
        system::relative(&ev.values, &ev.scales),
        condition_number(&scaled),
    )
}

/// Relative residual and row-scaled Jacobian condition number of `system`
/// at `x`, as used to accept and flag endpoints.
pub(crate) fn endpoint_quality(system: &PolynomialSystem, x: &[Complex64]) -> (f64, f64) {
    quality(&CompiledSystem::new(system), x)
}

/// Solves a square system by tracking every path of the total-degree
/// homotopy, refining, filtering and deduplicating the endpoints.
pub fn solve_square_system(
    system: &PolynomialSystem,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, HomotopyError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = bezout_start_with(&system.degrees(), &mut rng)?;
    let gamma = unit_random(&mut rng);
    let homotopy = Homotopy::new(system, &start.system, gamma);

    let results: Vec<PathResult> = start
        .roots
        .par_iter()
        .map(|root| homotopy.track(root, cfg))
        .collect();

    let target = CompiledSystem::new(system);
    let mut stats = PathStats::default();
    let mut endpoints: Vec<(Vec<Complex64>, f64, f64)> = Vec::new();
    for r in results {
        match r {
            PathResult::Converged { point, .. } => {
                let (residual, condition) = quality(&target, &point);
                if residual < cfg.endpoint_tolerance {
                    stats.converged += 1;
                    endpoints.push((point, residual, condition));
                } else {
                    stats.failed += 1;
                }
            }
            PathResult::Diverged { .. } => stats.diverged += 1,
            PathResult::StepUnderflow { .. } => stats.failed += 1,
        }
    }

    endpoints.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    // single-linkage clustering over the canonically sorted endpoints
    let n = endpoints.len();
    let mut cluster: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        let mut j = i;
        while c[j] != r {
            let next = c[j];
            c[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if close(&endpoints[i].0, &endpoints[j].0, cfg.dedup_radius) {
                let (a, b) = (find(&mut cluster, i), find(&mut cluster, j));
                if a != b {
                    cluster[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out = SolutionSet {
        points: Vec::new(),
        singular: Vec::new(),
        multiplicities: Vec::new(),
        residuals: Vec::new(),
        conditions: Vec::new(),
        path_stats: stats,
    };
    let mut index_of_root: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let root = find(&mut cluster, i);
        match index_of_root[root] {
            Some(k) => {
                out.multiplicities[k] += 1;
                out.singular[k] |= endpoints[i].2 > cfg.singular_threshold;
            }
            None => {
                index_of_root[root] = Some(out.points.len());
                let (p, res, cond) = &endpoints[i];
                out.points.push(p.clone());
                out.residuals.push(*res);
                out.conditions.push(*cond);
                out.singular.push(*cond > cfg.singular_threshold);
                out.multiplicities.push(1);
            }
        }
    }
    Ok(out)
}

/// Mixed volume of the Newton polytopes of a square system of Laurent
/// polynomials: Bernstein's bound on its number of isolated torus roots.
pub fn bkk_bound(equations: &[LaurentPolynomial]) -> Result<u64, HomotopyError> {
    let n = equations.first().map_or(0, LaurentPolynomial::dimension);
    if n > polytope::MAX_DIMENSION {
        return Err(PolytopeError::DimensionTooLarge(n).into());
    }
    if equations.len() != n || equations.iter().any(|f| f.dimension() != n) {
        return Err(HomotopyError::NotSquare {
            equations: equations.len(),
            unknowns: n,
        });
    }
    if let Some(i) = equations.iter().position(LaurentPolynomial::is_zero) {
        return Err(HomotopyError::ZeroEquation(i));
    }
    let polys = equations
        .iter()
        .map(polytope::newton_polytope)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(polytope::mixed_volume(&polys)?)
}
