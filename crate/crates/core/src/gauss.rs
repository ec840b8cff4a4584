//! Gaussian degrees by counting points of `T*_Z (C*)^n` on the graph of a
//! generic invariant 1-form `sum gamma_i dz_i / z_i`.
//!
//! For `Z = V(f_1, ..., f_c)` the intersection is cut out in the unknowns
//! `(z, lambda)` by
//!
//! ```text
//! f_j(z) = 0                                   j = 1..c
//! sum_j lambda_j * (z_i df_j/dz_i)(z) = gamma_i  i = 1..n
//! ```
//!
//! with denominators cleared. Only solutions with every `z_i` and `lambda_j`
//! nonzero are counted. For a hypersurface this is the number of points in
//! a generic fiber of the logarithmic Gauss map.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::homotopy::{
    self, solve_square_system, HomotopyError, PathStats, PolynomialSystem, TrackerConfig,
};
use crate::laurent::{ExponentVector, LaurentError, LaurentPolynomial, TorusPoint};
use crate::polytope::{self, PolytopeError};
use crate::univariate::Univariate;

/// Magnitude below which a coordinate of a solution is treated as zero.
pub const TORUS_THRESHOLD: f64 = 1e-8;
/// Largest torus dimension the numerical route supports.
pub const MAX_TORUS_DIMENSION: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("input is a monomial: its zero set in the torus is empty")]
    Monomial,
    #[error("input is the zero polynomial")]
    ZeroPolynomial,
    #[error("invariant covector must be nonzero and of length {expected}")]
    BadCovector { expected: usize },
    #[error("codimension {codim} is outside 1..={dimension}")]
    BadCodimension { codim: usize, dimension: usize },
    #[error("equations live in different dimensions")]
    DimensionMismatch,
    #[error("torus dimension {0} is not supported (at most 3)")]
    DimensionTooLarge(usize),
    #[error("operation requires dimension 1, got {0}")]
    NotUnivariate(usize),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `gamma` in the dual of the Lie algebra; defines `sum gamma_i dz_i / z_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCovector(Vec<Complex64>);

impl InvariantCovector {
    pub fn new(gamma: Vec<Complex64>) -> Result<Self, GaussError> {
        if gamma.is_empty() || gamma.iter().all(|g| g.norm() == 0.0) {
            return Err(GaussError::BadCovector {
                expected: gamma.len().max(1),
            });
        }
        Ok(Self(gamma))
    }

    /// Independent standard complex Gaussian entries.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        Self(gamma)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Square system whose torus solutions are `T*_Z G ∩ graph(omega_gamma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussFiberSystem {
    /// Equations in the unknowns `(z_1..z_n, lambda_1..lambda_c)`, all
    /// exponents nonnegative.
    pub equations: Vec<LaurentPolynomial>,
    pub torus_dimension: usize,
    pub codimension: usize,
    pub gamma: InvariantCovector,
    /// Monomial `z^s_j` that cleared each defining equation. The
    /// multiplier unknowns are those of the uncleared equations times
    /// `z^-s_j`.
    pub shifts: Vec<ExponentVector>,
}

impl GaussFiberSystem {
    pub fn unknowns(&self) -> usize {
        self.torus_dimension + self.codimension
    }

    /// Every unknown must be nonzero for a solution to count.
    pub fn torus_filter(&self) -> Vec<bool> {
        vec![true; self.unknowns()]
    }

    /// True when some equation is a nonzero constant (no solutions at all).
    pub fn is_inconsistent(&self) -> bool {
        self.equations
            .iter()
            .any(|f| f.is_monomial() && f.terms().all(|(e, _)| e.total_degree() == 0))
    }

    pub fn to_polynomial_system(&self) -> Result<PolynomialSystem, HomotopyError> {
        PolynomialSystem::new(self.equations.clone())
    }

    /// Mixed volume of the equations' Newton polytopes.
    pub fn bkk_bound(&self) -> Result<u64, HomotopyError> {
        homotopy::bkk_bound(&self.equations)
    }
}

fn embed(f: &LaurentPolynomial, total: usize) -> LaurentPolynomial {
    let terms = f.terms().map(|(e, c)| {
        let mut v = e.entries().to_vec();
        v.resize(total, 0);
        (ExponentVector::new(v), *c)
    });
    LaurentPolynomial::from_terms(total, terms).expect("padded to the right length")
}

/// Conormal system of the complete intersection `V(f_1, ..., f_c)`.
pub fn build_ci_conormal_system(
    equations: &[LaurentPolynomial],
    gamma: &InvariantCovector,
) -> Result<GaussFiberSystem, GaussError> {
    let n = equations.first().ok_or(GaussError::BadCodimension {
        codim: 0,
        dimension: 0,
    })?;
    let n = n.dimension();
    let c = equations.len();
    if c > n {
        return Err(GaussError::BadCodimension {
            codim: c,
            dimension: n,
        });
    }
    if equations.iter().any(|f| f.dimension() != n) {
        return Err(GaussError::DimensionMismatch);
    }
    if gamma.len() != n {
        return Err(GaussError::BadCovector { expected: n });
    }
    for f in equations {
        if f.is_zero() {
            return Err(GaussError::ZeroPolynomial);
        }
        if f.is_monomial() {
            return Err(GaussError::Monomial);
        }
    }
    let total = n + c;
    let mut cleared = Vec::with_capacity(c);
    let mut shifts = Vec::with_capacity(c);
    for f in equations {
        let (g, s) = f.clear_denominators()?;
        cleared.push(g);
        shifts.push(s);
    }
    // theta_i f_j = z^-s_j (theta_i g_j - s_ij g_j), which is z^-s_j theta_i g_j
    // on Z; the torus bijection lambda_j -> lambda_j z^-s_j absorbs the
    // monomial, so no clearing factor multiplies gamma
    let mut out: Vec<LaurentPolynomial> = cleared.iter().map(|g| embed(g, total)).collect();
    for i in 0..n {
        let mut eq = LaurentPolynomial::constant(total, -gamma.entries()[i]);
        for (j, g) in cleared.iter().enumerate() {
            let theta = embed(&g.log_derivative(i)?, total);
            eq = eq.add(&theta.shift(&ExponentVector::unit(total, n + j)));
        }
        out.push(eq);
    }
    Ok(GaussFiberSystem {
        equations: out,
        torus_dimension: n,
        codimension: c,
        gamma: gamma.clone(),
        shifts,
    })
}

/// Fiber system of the logarithmic Gauss map of the hypersurface `V(f)`.
pub fn build_gauss_fiber_system(
    f: &LaurentPolynomial,
    gamma: &InvariantCovector,
) -> Result<GaussFiberSystem, GaussError> {
    if f.is_zero() {
        return Err(GaussError::ZeroPolynomial);
    }
    build_ci_conormal_system(std::slice::from_ref(f), gamma)
}

/// Settings for a Gaussian-degree computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussConfig {
    pub tracker: TrackerConfig,
    /// Number of independent covectors drawn before escalation (at least 3).
    pub samples: usize,
    pub torus_threshold: f64,
}

impl Default for GaussConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig::default(),
            samples: 3,
            torus_threshold: TORUS_THRESHOLD,
        }
    }
}

impl GaussConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            tracker: TrackerConfig::with_seed(seed),
            ..Self::default()
        }
    }

    pub fn seed(&self) -> u64 {
        self.tracker.seed
    }
}

/// Result of one covector sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub gamma: Vec<Complex64>,
    /// Torus solutions that are nonsingular and hit by a single path.
    pub count: u64,
    /// Torus solutions flagged singular (excluded from `count`).
    pub singular: usize,
    /// Torus solutions reached by more than one path.
    pub collisions: usize,
    pub path_stats: PathStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussDegreeReport {
    pub gdeg: u64,
    pub samples: Vec<SampleReport>,
    pub agreed: bool,
    pub bkk: u64,
    pub path_stats: PathStats,
    pub warnings: Vec<String>,
}

impl GaussDegreeReport {
    fn exact(gdeg: u64, bkk: u64, warning: Option<String>) -> Self {
        Self {
            gdeg,
            samples: Vec::new(),
            agreed: true,
            bkk,
            path_stats: PathStats::default(),
            warnings: warning.into_iter().collect(),
        }
    }
}

/// SplitMix64 step, used to derive per-sample seeds from the base seed.
pub(crate) fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Determinant of a small square matrix of polynomials, by cofactors.
fn det(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let dim = m[0][0].dimension();
    let mut acc = LaurentPolynomial::zero(dim);
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPolynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&det(&minor));
        acc = if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.add(&term.neg())
        };
    }
    acc
}

/// The fiber system with the multipliers eliminated: `g_j = 0` together
/// with the `(c+1)`-minors of `[θ_r g_j | γ_r]` on rows `0..c` and `i`, for
/// `i = c..n`. These vanish exactly when `γ` lies in the span of the
/// columns `θ g_j`, away from points where `Z` is singular.
///
/// Solving this `n x n` system instead of the `(n+c)`-dimensional one
/// matters numerically: multiplier values span many orders of magnitude
/// across fiber points, and a total-degree start system in the multiplier
/// only reaches the large ones at `1 - t` far below any usable step.
fn multiplier_free_system(
    cleared: &[LaurentPolynomial],
    thetas: &[Vec<LaurentPolynomial>],
    gamma: &InvariantCovector,
) -> Vec<LaurentPolynomial> {
    let n = cleared[0].dimension();
    let c = cleared.len();
    let row = |r: usize| -> Vec<LaurentPolynomial> {
        let mut v: Vec<LaurentPolynomial> = (0..c).map(|j| thetas[j][r].clone()).collect();
        v.push(LaurentPolynomial::constant(n, gamma.entries()[r]));
        v
    };
    let mut out = cleared.to_vec();
    for i in c..n {
        let mut m: Vec<Vec<LaurentPolynomial>> = (0..c).map(row).collect();
        m.push(row(i));
        out.push(det(&m));
    }
    out
}

/// Multipliers for a torus point `z`, by least squares on `θ g · λ = γ`.
fn lift(
    thetas: &[Vec<LaurentPolynomial>],
    gamma: &InvariantCovector,
    z: &[Complex64],
) -> Option<Vec<Complex64>> {
    let n = z.len();
    let c = thetas.len();
    let mut m = DMatrix::<Complex64>::zeros(n, c);
    for (j, th) in thetas.iter().enumerate() {
        for (r, p) in th.iter().enumerate() {
            m[(r, j)] = p.evaluate_slice(z).ok()?;
        }
    }
    let rhs = DVector::from_column_slice(gamma.entries());
    let lambda = m.svd(true, true).solve(&rhs, 1e-300).ok()?;
    let out: Vec<Complex64> = lambda.iter().copied().collect();
    out.iter()
        .all(|l| l.re.is_finite() && l.im.is_finite())
        .then_some(out)
}

/// Relative residual a lifted point must meet on the full fiber system.
const LIFT_TOLERANCE: f64 = 1e-9;

fn run_sample(
    equations: &[LaurentPolynomial],
    cfg: &GaussConfig,
    index: u64,
) -> Result<SampleReport, GaussError> {
    let n = equations[0].dimension();
    let seed = derive_seed(cfg.seed(), index);
    let gamma = InvariantCovector::random(n, seed);
    let fiber = build_ci_conormal_system(equations, &gamma)?;
    let mut report = SampleReport {
        seed,
        gamma: gamma.entries().to_vec(),
        count: 0,
        singular: 0,
        collisions: 0,
        path_stats: PathStats::default(),
    };
    if fiber.is_inconsistent() {
        return Ok(report);
    }
    let fiber_system = fiber.to_polynomial_system()?;
    let tracker = TrackerConfig {
        seed,
        ..cfg.tracker.clone()
    };

    let cleared: Vec<LaurentPolynomial> = equations
        .iter()
        .map(|f| f.clear_denominators().map(|(g, _)| g))
        .collect::<Result<_, _>>()?;
    let thetas: Vec<Vec<LaurentPolynomial>> = cleared
        .iter()
        .map(|g| (0..n).map(|i| g.log_derivative(i)).collect())
        .collect::<Result<_, _>>()?;
    let reduced = multiplier_free_system(&cleared, &thetas, &gamma);
    if reduced.iter().any(|p| p.is_zero()) {
        // the minors vanish identically: fall back to the full system
        return count_on_fiber(&fiber_system, cfg, &tracker, report);
    }
    if reduced
        .iter()
        .any(|p| p.is_monomial() && p.terms().all(|(e, _)| e.total_degree() == 0))
    {
        return Ok(report);
    }
    let solutions = solve_square_system(&PolynomialSystem::new(reduced)?, &tracker)?;
    report.path_stats = solutions.path_stats;
    for (k, z) in solutions.points.iter().enumerate() {
        if z.iter().any(|v| v.norm() <= cfg.torus_threshold) {
            continue;
        }
        let Some(lambda) = lift(&thetas, &gamma, z) else {
            continue;
        };
        if lambda.iter().any(|l| l.norm() <= cfg.torus_threshold) {
            continue;
        }
        let point: Vec<Complex64> = z.iter().chain(&lambda).copied().collect();
        let (residual, condition) = homotopy::endpoint_quality(&fiber_system, &point);
        if residual > LIFT_TOLERANCE {
            // a singular point of Z, where no multiplier exists
            continue;
        }
        if condition > tracker.singular_threshold {
            report.singular += 1;
            continue;
        }
        if solutions.multiplicities[k] > 1 {
            report.collisions += 1;
        }
        report.count += 1;
    }
    Ok(report)
}

fn count_on_fiber(
    system: &PolynomialSystem,
    cfg: &GaussConfig,
    tracker: &TrackerConfig,
    mut report: SampleReport,
) -> Result<SampleReport, GaussError> {
    let solutions = solve_square_system(system, tracker)?;
    report.path_stats = solutions.path_stats;
    for (k, p) in solutions.points.iter().enumerate() {
        if p.iter().any(|z| z.norm() <= cfg.torus_threshold) {
            continue;
        }
        if solutions.singular[k] {
            report.singular += 1;
            continue;
        }
        if solutions.multiplicities[k] > 1 {
            report.collisions += 1;
        }
        report.count += 1;
    }
    Ok(report)
}

/// Most frequent count; ties go to the larger count, since lost paths
/// undercount far more often than anything overcounts.
fn modal(counts: &[u64]) -> (u64, usize) {
    let mut best = (0u64, 0usize);
    for &c in counts {
        let freq = counts.iter().filter(|&&x| x == c).count();
        if freq > best.1 || (freq == best.1 && c > best.0) {
            best = (c, freq);
        }
    }
    best
}

/// Gaussian degree of the complete intersection `V(f_1, ..., f_c)` in
/// `(C*)^n`, `n <= 3`, by sampling covectors until the counts agree.
pub fn gaussian_degree_ci(
    equations: &[LaurentPolynomial],
    cfg: &GaussConfig,
) -> Result<GaussDegreeReport, GaussError> {
    let n = equations.first().map_or(0, LaurentPolynomial::dimension);
    if n > MAX_TORUS_DIMENSION {
        return Err(GaussError::DimensionTooLarge(n));
    }
    let probe = build_ci_conormal_system(
        equations,
        &InvariantCovector::new(vec![Complex64::new(1.0, 0.0); n])?,
    )?;
    let bkk = probe.bkk_bound()?;
    let initial = cfg.samples.max(3);
    let mut samples: Vec<SampleReport> = (0..initial as u64)
        .into_par_iter()
        .map(|k| run_sample(equations, cfg, k))
        .collect::<Result<_, _>>()?;
    let mut warnings = Vec::new();
    let counts: Vec<u64> = samples.iter().map(|s| s.count).collect();
    let (gdeg, agreed) = if counts.iter().all(|&c| c == counts[0]) {
        (counts[0], true)
    } else {
        let extra: Vec<SampleReport> = (initial as u64..initial as u64 + 2)
            .into_par_iter()
            .map(|k| run_sample(equations, cfg, k))
            .collect::<Result<_, _>>()?;
        samples.extend(extra);
        let counts: Vec<u64> = samples.iter().map(|s| s.count).collect();
        let (mode, freq) = modal(&counts);
        (mode, freq > initial)
    };
    if samples.iter().any(|s| s.singular > 0 || s.collisions > 0) || !agreed {
        warnings.push(
            "singular or colliding endpoints, or disagreeing samples: input may be \
             non-reduced or a covector draw non-generic"
                .to_string(),
        );
    }
    let mut path_stats = PathStats::default();
    for s in &samples {
        path_stats.merge(&s.path_stats);
    }
    Ok(GaussDegreeReport {
        gdeg,
        samples,
        agreed,
        bkk,
        path_stats,
        warnings,
    })
}

/// Gaussian degree of the hypersurface `V(f)`, i.e. the degree of its
/// logarithmic Gauss map. `f` should define a reduced hypersurface.
pub fn gaussian_degree_hypersurface(
    f: &LaurentPolynomial,
    cfg: &GaussConfig,
) -> Result<GaussDegreeReport, GaussError> {
    if f.is_zero() {
        return Err(GaussError::ZeroPolynomial);
    }
    if f.is_monomial() {
        return Err(GaussError::Monomial);
    }
    let n = f.dimension();
    if n > MAX_TORUS_DIMENSION {
        return Err(GaussError::DimensionTooLarge(n));
    }
    let newton = polytope::newton_polytope(f)?;
    if !newton.is_full_dimensional() {
        let gamma = InvariantCovector::new(vec![Complex64::new(1.0, 0.0); n])?;
        let bkk = build_gauss_fiber_system(f, &gamma)?.bkk_bound()?;
        return Ok(GaussDegreeReport::exact(
            0,
            bkk,
            Some(format!(
                "Newton polytope has dimension {} < {}: the Gauss map is not dominant",
                newton.affine_dimension(),
                n
            )),
        ));
    }
    gaussian_degree_ci(std::slice::from_ref(f), cfg)
}

/// Number of distinct roots of a univariate Laurent polynomial in `C*`.
pub fn gaussian_degree_1d(f: &LaurentPolynomial) -> Result<u64, GaussError> {
    if f.dimension() != 1 {
        return Err(GaussError::NotUnivariate(f.dimension()));
    }
    if f.is_zero() {
        return Err(GaussError::ZeroPolynomial);
    }
    let (g, _) = f.clear_denominators()?;
    let degree = g.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (e, c) in g.terms() {
        coeffs[e[0] as usize] = *c;
    }
    let roots = Univariate::new(coeffs).distinct_roots();
    Ok(roots
        .iter()
        .filter(|(z, _)| z.norm() >= TORUS_THRESHOLD)
        .count() as u64)
}

/// Lagrangians whose Gaussian degree needs no computation.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialLagrangian {
    /// The zero section `T*_G G`.
    ZeroSection { dimension: usize },
    /// The cotangent fiber over a point.
    Point(TorusPoint),
}

/// The zero section misses every graph with `gamma != 0`; the cotangent
/// fiber over a point meets each graph exactly once.
pub fn gaussian_degree_special(lagrangian: &SpecialLagrangian) -> u64 {
    match lagrangian {
        SpecialLagrangian::ZeroSection { .. } => 0,
        SpecialLagrangian::Point(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(s: &str, n: usize) -> LaurentPolynomial {
        parse(s, n).unwrap()
    }

    #[test]
    fn fiber_system_of_a_line() {
        let g = InvariantCovector::new(vec![c(2.0, 0.0), c(0.0, 3.0)]).unwrap();
        let fib = build_gauss_fiber_system(&p("1+x+y", 2), &g).unwrap();
        assert_eq!(fib.unknowns(), 3);
        assert_eq!(fib.equations[0], p("1+x+y", 3));
        // lambda * x - gamma_1 and lambda * y - gamma_2 in unknowns (x, y, lambda)
        assert_eq!(fib.equations[1], p("x*z - 2", 3));
        assert_eq!(fib.equations[2], p("y*z - 3i", 3));
        assert_eq!(fib.torus_filter(), vec![true; 3]);
    }

    #[test]
    fn fiber_system_records_clearing() {
        let g = InvariantCovector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let fib = build_gauss_fiber_system(&p("x^-1+y", 2), &g).unwrap();
        assert_eq!(fib.shifts[0].entries(), &[1, 0]);
        assert_eq!(fib.equations[0], p("1+x*y", 3));
        assert_eq!(fib.equations[1], p("x*y*z - 1", 3));
        assert_eq!(fib.equations[2], p("x*y*z - 1", 3));
    }

    #[test]
    fn fiber_system_of_divisible_polynomial_is_polynomial() {
        let g = InvariantCovector::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let fib = build_gauss_fiber_system(&p("x + x^2*y", 2), &g).unwrap();
        assert_eq!(fib.shifts[0].entries(), &[-1, 0]);
        assert!(fib.to_polynomial_system().is_ok());
    }

    #[test]
    fn fiber_system_univariate() {
        let g = InvariantCovector::new(vec![c(1.0, 0.0)]).unwrap();
        let fib = build_gauss_fiber_system(&p("z^2-3z+2", 1), &g).unwrap();
        assert_eq!(fib.equations[0], p("x^2-3x+2", 2));
        assert_eq!(fib.equations[1], p("2*x^2*y - 3*x*y - 1", 2));
    }

    #[test]
    fn monomial_and_codimension_errors() {
        let g = InvariantCovector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(
            build_gauss_fiber_system(&p("x*y^2", 2), &g),
            Err(GaussError::Monomial)
        );
        let fs = vec![p("1+x", 2), p("1+y", 2), p("x+y", 2)];
        assert!(matches!(
            build_ci_conormal_system(&fs, &g),
            Err(GaussError::BadCodimension { codim: 3, .. })
        ));
        assert!(InvariantCovector::new(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn ci_with_one_equation_matches_hypersurface() {
        let g = InvariantCovector::random(2, 5);
        let f = p("1+x+y+3*x*y", 2);
        assert_eq!(
            build_ci_conormal_system(std::slice::from_ref(&f), &g).unwrap(),
            build_gauss_fiber_system(&f, &g).unwrap()
        );
    }

    #[test]
    fn point_as_complete_intersection() {
        let fs = vec![p("x - 2", 2), p("y - 3", 2)];
        let g = InvariantCovector::new(vec![c(1.0, 0.0), c(5.0, 0.0)]).unwrap();
        let fib = build_ci_conormal_system(&fs, &g).unwrap();
        assert_eq!(fib.equations[2], p("x*z - 1", 4));
        assert_eq!(fib.equations[3], p("y*w - 5", 4));
        let report = gaussian_degree_ci(&fs, &GaussConfig::default()).unwrap();
        assert_eq!(report.gdeg, 1);
        assert!(report.agreed);
    }

    #[test]
    fn gdeg_of_a_line_is_one() {
        let r = gaussian_degree_hypersurface(&p("1+x+y", 2), &GaussConfig::default()).unwrap();
        assert_eq!(r.gdeg, 1);
        assert!(r.agreed);
        assert!(r.gdeg <= r.bkk);
        assert_eq!(r.samples.len(), 3);
    }

    #[test]
    fn gdeg_of_generic_bilinear_curve_is_two() {
        let r =
            gaussian_degree_hypersurface(&p("1+x+y+3*x*y", 2), &GaussConfig::default()).unwrap();
        assert_eq!(r.gdeg, 2);
        assert!(r.agreed);
    }

    #[test]
    fn gdeg_of_product_of_lines_vanishes() {
        let r = gaussian_degree_hypersurface(&p("1+x+y+x*y", 2), &GaussConfig::default()).unwrap();
        assert_eq!(r.gdeg, 0);
        assert_eq!(r.bkk, 2);
    }

    #[test]
    fn lower_dimensional_newton_polytope_gives_zero() {
        let r = gaussian_degree_hypersurface(&p("x^-1+y", 2), &GaussConfig::default()).unwrap();
        assert_eq!(r.gdeg, 0);
        assert_eq!(r.warnings.len(), 1);
        assert!(r.samples.is_empty());
    }

    #[test]
    fn univariate_exact_route() {
        assert_eq!(gaussian_degree_1d(&p("z^2-3z+2", 1)).unwrap(), 2);
        assert_eq!(gaussian_degree_1d(&p("z^2-2z+1", 1)).unwrap(), 1);
        assert_eq!(gaussian_degree_1d(&p("z^3-z^2", 1)).unwrap(), 1);
        assert_eq!(
            gaussian_degree_1d(&LaurentPolynomial::zero(1)),
            Err(GaussError::ZeroPolynomial)
        );
        assert!(gaussian_degree_1d(&p("x+y", 2)).is_err());
    }

    #[test]
    fn univariate_numeric_route_agrees_on_squarefree_input() {
        for s in ["z^2-3z+2", "z^-1 + 2 + z^3", "3 - z^4"] {
            let f = p(s, 1);
            let r = gaussian_degree_hypersurface(&f, &GaussConfig::default()).unwrap();
            assert_eq!(r.gdeg, gaussian_degree_1d(&f).unwrap(), "{s}");
        }
    }

    #[test]
    fn special_lagrangians() {
        assert_eq!(
            gaussian_degree_special(&SpecialLagrangian::ZeroSection { dimension: 2 }),
            0
        );
        let pt = TorusPoint::from_real(&[2.0, 3.0]).unwrap();
        assert_eq!(gaussian_degree_special(&SpecialLagrangian::Point(pt)), 1);
        let pt = TorusPoint::from_real(&[-1.0]).unwrap();
        assert_eq!(gaussian_degree_special(&SpecialLagrangian::Point(pt)), 1);
    }

    #[test]
    fn modal_prefers_frequency_then_larger() {
        assert_eq!(modal(&[2, 2, 1, 2, 3]), (2, 3));
        assert_eq!(modal(&[1, 2, 1, 2, 3]), (2, 2));
    }
}
