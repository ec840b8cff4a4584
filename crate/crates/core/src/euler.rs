//! Combinatorial Euler characteristics of torus hypersurfaces and the
//! face-by-face nondegeneracy test that makes them applicable.
//!
//! For `f` nondegenerate with respect to its Newton polytope `Δ`,
//! `χ(V(f)) = (-1)^(n-1) · Vol_n(Δ)` (normalized volume). In dimension two
//! this is also `-(2I + B - 2)` by Pick's theorem.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gauss::{gaussian_degree_1d, GaussError, TORUS_THRESHOLD};
use crate::homotopy::{
    bkk_bound, solve_square_system, HomotopyError, PolynomialSystem, TrackerConfig,
};
use crate::laurent::{ExponentVector, LaurentError, LaurentPolynomial};
use crate::polytope::{self, AffineLattice, PolytopeError};
use crate::univariate::Univariate;

/// Largest ambient dimension handled here.
pub const MAX_DIMENSION: usize = 3;
/// A candidate critical point must satisfy every face equation to this
/// relative residual.
pub const WITNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EulerError {
    #[error("input is a monomial: its zero set in the torus is empty")]
    Monomial,
    #[error("input is the zero polynomial")]
    ZeroPolynomial,
    #[error("dimension {0} is not supported (at most 3)")]
    DimensionTooLarge(usize),
    #[error("operation requires dimension 2, got {0}")]
    NotPlanar(usize),
    #[error("Newton polygon is not two-dimensional")]
    DegeneratePolygon,
    #[error("lattice point count {pick} disagrees with normalized volume {volume}")]
    PickMismatch { pick: i64, volume: i64 },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiMethod {
    Khovanskii,
    Pick,
    OneDim,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiReport {
    pub chi: i64,
    pub method: ChiMethod,
    /// Outcome of a nondegeneracy check, when one was run.
    pub nondegenerate: Option<bool>,
}

fn validate(f: &LaurentPolynomial) -> Result<(), EulerError> {
    if f.is_zero() {
        return Err(EulerError::ZeroPolynomial);
    }
    if f.is_monomial() {
        return Err(EulerError::Monomial);
    }
    if f.dimension() > MAX_DIMENSION {
        return Err(EulerError::DimensionTooLarge(f.dimension()));
    }
    Ok(())
}

/// `(-1)^(n-1)` times the normalized volume of the Newton polytope. In
/// dimension one the hypersurface is a finite set and its distinct roots in
/// `C*` are counted directly.
pub fn chi_nondegenerate_hypersurface(f: &LaurentPolynomial) -> Result<ChiReport, EulerError> {
    validate(f)?;
    let n = f.dimension();
    if n == 1 {
        let roots = gaussian_degree_1d(f)? as i64;
        let span = polytope::newton_polytope(f)?.normalized_volume() as i64;
        return Ok(ChiReport {
            chi: roots,
            method: ChiMethod::OneDim,
            nondegenerate: Some(roots == span),
        });
    }
    let volume = polytope::newton_polytope(f)?.normalized_volume() as i64;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    Ok(ChiReport {
        chi: sign * volume,
        method: ChiMethod::Khovanskii,
        nondegenerate: None,
    })
}

/// `-(2I + B - 2)` from the interior and boundary lattice points of the
/// Newton polygon.
pub fn chi_curve_pick(f: &LaurentPolynomial) -> Result<ChiReport, EulerError> {
    validate(f)?;
    if f.dimension() != 2 {
        return Err(EulerError::NotPlanar(f.dimension()));
    }
    let newton = polytope::newton_polytope(f)?;
    if !newton.is_full_dimensional() {
        return Err(EulerError::DegeneratePolygon);
    }
    let (interior, boundary) = newton.lattice_point_counts()?;
    let pick = 2 * interior as i64 + boundary as i64 - 2;
    let volume = newton.normalized_volume() as i64;
    if pick != volume {
        return Err(EulerError::PickMismatch { pick, volume });
    }
    Ok(ChiReport {
        chi: -pick,
        method: ChiMethod::Pick,
        nondegenerate: None,
    })
}

/// Euler characteristic of the complement `(C*)^n \ V(f)`.
pub fn chi_complement(f: &LaurentPolynomial) -> Result<i64, EulerError> {
    Ok(-chi_nondegenerate_hypersurface(f)?.chi)
}

/// Result of testing every face restriction `f_F` for a critical torus zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Nondegeneracy {
    Nondegenerate,
    Degenerate {
        /// Exponent vectors of `f` lying on the offending face.
        face: Vec<Vec<i64>>,
        /// Whether the face is the whole Newton polytope.
        whole: bool,
        /// A critical zero of `f_F`. For the whole polytope these are torus
        /// coordinates; for a proper face they are coordinates on the face's
        /// own lattice.
        witness: Vec<Complex64>,
    },
    Inconclusive {
        reason: String,
    },
}

impl Nondegeneracy {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Self::Nondegenerate)
    }
}

/// Every face of positive dimension of the hull of `points` (given by the
/// indices of the points it contains), largest first.
fn faces(points: &[Vec<i64>]) -> Result<Vec<Vec<usize>>, PolytopeError> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut order = Vec::new();
    let mut stack = vec![(0..points.len()).collect::<Vec<usize>>()];
    while let Some(face) = stack.pop() {
        if !seen.insert(face.clone()) {
            continue;
        }
        let pts: Vec<Vec<i64>> = face.iter().map(|&i| points[i].clone()).collect();
        let lattice = AffineLattice::of(&pts);
        let k = lattice.rank();
        if k == 0 {
            continue;
        }
        order.push((k, face.clone()));
        if k == 1 {
            continue;
        }
        let hull = polytope::convex_hull(&lattice.coordinates)?;
        for h in hull.facets() {
            let sub: Vec<usize> = face
                .iter()
                .zip(&lattice.coordinates)
                .filter(|(_, u)| h.eval(u) == 0)
                .map(|(&i, _)| i)
                .collect();
            stack.push(sub);
        }
    }
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(order.into_iter().map(|(_, f)| f).collect())
}

/// `f_F` rewritten on the lattice of its own support, so that its variables
/// are independent.
fn face_polynomial(
    f: &LaurentPolynomial,
    support: &[Vec<i64>],
    face: &[usize],
    whole_full: bool,
) -> Result<LaurentPolynomial, LaurentError> {
    let pts: Vec<Vec<i64>> = face.iter().map(|&i| support[i].clone()).collect();
    if whole_full {
        return Ok(f.clone());
    }
    let lattice = AffineLattice::of(&pts);
    let terms: Vec<(ExponentVector, Complex64)> = pts
        .iter()
        .zip(&lattice.coordinates)
        .map(|(p, u)| {
            let e = ExponentVector::new(p.iter().map(|&x| x as i32).collect());
            (
                ExponentVector::new(u.iter().map(|&x| x as i32).collect()),
                f.coefficient(&e),
            )
        })
        .collect();
    LaurentPolynomial::from_terms(lattice.rank(), terms)
}

fn relative_residual(p: &LaurentPolynomial, x: &[Complex64]) -> f64 {
    match p.evaluate_slice(x) {
        Ok(v) => {
            let s = p.evaluation_scale(x);
            if s > 0.0 {
                v.norm() / s
            } else {
                v.norm()
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Gauss-Newton on an overdetermined system; returns the best iterate and
/// its largest relative residual.
fn polish(
    eqs: &[LaurentPolynomial],
    grads: &[Vec<LaurentPolynomial>],
    x: &[Complex64],
) -> (Vec<Complex64>, f64) {
    let worst = |x: &[Complex64]| {
        eqs.iter()
            .map(|p| relative_residual(p, x))
            .fold(0.0, f64::max)
    };
    let k = x.len();
    let mut cur = x.to_vec();
    let mut best = (cur.clone(), worst(&cur));
    for _ in 0..20 {
        if best.1 < 1e-14 {
            break;
        }
        let mut jac = DMatrix::<Complex64>::zeros(eqs.len(), k);
        let mut rhs = DVector::<Complex64>::zeros(eqs.len());
        for (r, p) in eqs.iter().enumerate() {
            let Ok(v) = p.evaluate_slice(&cur) else {
                return best;
            };
            rhs[r] = -v;
            for c in 0..k {
                // d/dw_c = theta_c / w_c
                jac[(r, c)] = grads[r][c].evaluate_slice(&cur).unwrap_or_default() / cur[c];
            }
        }
        let Ok(step) = jac.svd(true, true).solve(&rhs, 1e-14) else {
            return best;
        };
        cur.iter_mut().zip(step.iter()).for_each(|(a, b)| *a += b);
        if cur
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite() || z.norm() < TORUS_THRESHOLD)
        {
            return best;
        }
        let r = worst(&cur);
        if r < best.1 {
            best = (cur.clone(), r);
        }
    }
    best
}

/// A common torus zero of `g, θ_1 g, ..., θ_k g` with `g` in `k` variables,
/// or `Ok(None)` when there is none. `Err` carries an inconclusive reason.
fn critical_torus_zero(
    g: &LaurentPolynomial,
    cfg: &TrackerConfig,
    seed: u64,
) -> Result<Option<Vec<Complex64>>, String> {
    let k = g.dimension();
    if k == 1 {
        let (h, _) = g.clear_denominators().map_err(|e| e.to_string())?;
        let deg = h.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::default(); deg + 1];
        for (e, c) in h.terms() {
            coeffs[e[0] as usize] = *c;
        }
        return Ok(Univariate::new(coeffs)
            .distinct_roots()
            .into_iter()
            .find(|(z, m)| *m > 1 && z.norm() >= TORUS_THRESHOLD)
            .map(|(z, _)| vec![z]));
    }
    let mut eqs = vec![g.clone()];
    for i in 0..k {
        eqs.push(g.log_derivative(i).map_err(|e| e.to_string())?);
    }
    if eqs.iter().any(|p| p.is_zero()) {
        // g does not depend on some variable: its faces are cylinders and
        // critical zeros are those of fewer variables, which cannot happen
        // on a lattice of full rank
        return Err("face polynomial is independent of a lattice direction".into());
    }
    if eqs.iter().any(LaurentPolynomial::is_monomial) {
        return Ok(None);
    }
    let grads: Vec<Vec<LaurentPolynomial>> = eqs
        .iter()
        .map(|p| {
            (0..k)
                .map(|i| {
                    p.log_derivative(i)
                        .unwrap_or_else(|_| LaurentPolynomial::zero(k))
                })
                .collect()
        })
        .collect();

    // square subsystems: each drops one of the k + 1 equations; the last
    // one is the randomized system theta_i g + r_i g, whose solutions
    // include every critical zero
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subsystems: Vec<Vec<LaurentPolynomial>> = (0..=k)
        .map(|skip| {
            eqs.iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    subsystems.push(
        (1..=k)
            .map(|i| {
                let r = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                eqs[i].add(&g.scale(r))
            })
            .collect(),
    );
    let tracker = TrackerConfig {
        // singular endpoints are kept and polished below
        endpoint_tolerance: 1e-8,
        seed,
        ..cfg.clone()
    };
    let mut randomized_complete = false;
    let last = subsystems.len() - 1;
    for (idx, sub) in subsystems.iter().enumerate() {
        let cleared: Vec<LaurentPolynomial> = sub
            .iter()
            .map(|p| p.clear_denominators().map(|(h, _)| h))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if cleared.iter().any(LaurentPolynomial::is_monomial) {
            if idx == last {
                randomized_complete = true;
            }
            continue;
        }
        let system = PolynomialSystem::new(cleared).map_err(|e| e.to_string())?;
        let solutions = match solve_square_system(&system, &tracker) {
            Ok(s) => s,
            Err(e) => return Err(e.to_string()),
        };
        for p in &solutions.points {
            if p.iter().any(|z| z.norm() < TORUS_THRESHOLD) {
                continue;
            }
            let (x, r) = polish(&eqs, &grads, p);
            if r < WITNESS_TOLERANCE {
                return Ok(Some(x));
            }
        }
        if idx == last {
            // with no critical zero on any face there are no roots at toric
            // infinity, so all isolated torus roots are found exactly when
            // their path count reaches the mixed volume
            let bound = bkk_bound(system.equations()).map_err(|e| e.to_string())?;
            let found: usize = solutions
                .points
                .iter()
                .zip(&solutions.multiplicities)
                .filter(|(p, _)| p.iter().all(|z| z.norm() >= TORUS_THRESHOLD))
                .map(|(_, m)| m)
                .sum();
            randomized_complete = found as u64 == bound;
        }
    }
    if randomized_complete {
        Ok(None)
    } else {
        Err(
            "torus roots of the randomized critical-point system fall short of its mixed volume"
                .into(),
        )
    }
}

/// Tests each face restriction `f_F` of `f` (the whole polytope included)
/// for a common torus zero of `f_F, θ_1 f_F, ..., θ_n f_F`.
pub fn nondegeneracy_check(
    f: &LaurentPolynomial,
    cfg: &TrackerConfig,
) -> Result<Nondegeneracy, EulerError> {
    validate(f)?;
    let support: Vec<Vec<i64>> = f
        .support()
        .into_iter()
        .map(|e| e.into_iter().map(i64::from).collect())
        .collect();
    let all = faces(&support)?;
    let full = polytope::newton_polytope(f)?.is_full_dimensional();
    let mut reasons = Vec::new();
    for (idx, face) in all.iter().enumerate() {
        let whole = face.len() == support.len() && idx == 0;
        let g = face_polynomial(f, &support, face, whole && full)?;
        let seed = cfg.seed.wrapping_add(idx as u64);
        match critical_torus_zero(&g, cfg, seed) {
            Ok(Some(witness)) => {
                return Ok(Nondegeneracy::Degenerate {
                    face: face.iter().map(|&i| support[i].clone()).collect(),
                    whole,
                    witness,
                })
            }
            Ok(None) => {}
            Err(reason) => reasons.push(format!("face {idx} of {}: {reason}", all.len())),
        }
    }
    if reasons.is_empty() {
        Ok(Nondegeneracy::Nondegenerate)
    } else {
        Ok(Nondegeneracy::Inconclusive {
            reason: reasons.join("; "),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;

    fn p(s: &str, n: usize) -> LaurentPolynomial {
        parse(s, n).unwrap()
    }

    #[test]
    fn khovanskii_values() {
        let chi = |s: &str, n| chi_nondegenerate_hypersurface(&p(s, n)).unwrap().chi;
        assert_eq!(chi("1+x+y", 2), -1);
        assert_eq!(chi("1+x+y+3*x*y", 2), -2);
        assert_eq!(chi("1+x+y+z", 3), 1);
        assert_eq!(
            chi_nondegenerate_hypersurface(&p("x*y", 2)),
            Err(EulerError::Monomial)
        );
    }

    #[test]
    fn one_dimensional_counts_points() {
        let r = chi_nondegenerate_hypersurface(&p("z-2", 1)).unwrap();
        assert_eq!(
            (r.chi, r.method, r.nondegenerate),
            (1, ChiMethod::OneDim, Some(true))
        );
        let r = chi_nondegenerate_hypersurface(&p("z^2-2z+1", 1)).unwrap();
        assert_eq!((r.chi, r.nondegenerate), (1, Some(false)));
        assert_eq!(chi_complement(&p("z-2", 1)).unwrap(), -1);
    }

    #[test]
    fn pick_values() {
        let chi = |s: &str| chi_curve_pick(&p(s, 2)).unwrap().chi;
        assert_eq!(chi("1+x+y"), -1);
        assert_eq!(chi("1+x+3*x^2*y^2+y"), -4);
        assert_eq!(chi("1+x+y+3*x*y"), -2);
        assert_eq!(
            chi_curve_pick(&p("1+x*y", 2)),
            Err(EulerError::DegeneratePolygon)
        );
        assert_eq!(
            chi_curve_pick(&p("1+x+y+z", 3)),
            Err(EulerError::NotPlanar(3))
        );
    }

    #[test]
    fn complement() {
        assert_eq!(chi_complement(&p("1+x+y", 2)).unwrap(), 1);
        assert_eq!(chi_complement(&p("1+x+y+3*x*y", 2)).unwrap(), 2);
    }

    #[test]
    fn faces_of_a_square() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let fs = faces(&pts).unwrap();
        assert_eq!(fs.len(), 5);
        assert_eq!(fs[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn faces_of_a_tetrahedron_with_an_edge_point() {
        let pts = vec![
            vec![0, 0, 0],
            vec![2, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ];
        let fs = faces(&pts).unwrap();
        // the solid, four triangles, six edges
        assert_eq!(fs.len(), 11);
        assert!(fs.contains(&vec![0, 1, 2]));
    }

    #[test]
    fn line_is_nondegenerate() {
        let v = nondegeneracy_check(&p("1+x+y", 2), &TrackerConfig::default()).unwrap();
        assert_eq!(v, Nondegeneracy::Nondegenerate);
        let v = nondegeneracy_check(&p("1+x+y+3*x*y", 2), &TrackerConfig::default()).unwrap();
        assert_eq!(v, Nondegeneracy::Nondegenerate);
    }

    #[test]
    fn product_of_lines_is_degenerate_at_the_whole_polygon() {
        let v = nondegeneracy_check(&p("1+x+y+x*y", 2), &TrackerConfig::default()).unwrap();
        match v {
            Nondegeneracy::Degenerate { whole, witness, .. } => {
                assert!(whole);
                assert!((witness[0] + 1.0).norm() < 1e-8);
                assert!((witness[1] + 1.0).norm() < 1e-8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_edge_is_found() {
        // edge from (0,0) to (2,0) restricts to (1+x)^2
        let v = nondegeneracy_check(&p("1+2*x+x^2+y", 2), &TrackerConfig::default()).unwrap();
        match v {
            Nondegeneracy::Degenerate {
                whole,
                face,
                witness,
            } => {
                assert!(!whole);
                assert_eq!(face.len(), 3);
                assert!((witness[0] + 1.0).norm() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn univariate_nondegeneracy() {
        let cfg = TrackerConfig::default();
        assert!(nondegeneracy_check(&p("z-2", 1), &cfg)
            .unwrap()
            .is_nondegenerate());
        assert!(!nondegeneracy_check(&p("z^2-2z+1", 1), &cfg)
            .unwrap()
            .is_nondegenerate());
    }

    #[test]
    fn three_dimensional_check() {
        let cfg = TrackerConfig::default();
        assert!(nondegeneracy_check(&p("1+x+y+z", 3), &cfg)
            .unwrap()
            .is_nondegenerate());
        assert!(nondegeneracy_check(&p("1+x+y+z+x*y*z", 3), &cfg)
            .unwrap()
            .is_nondegenerate());
        // (1+x)(1+y) + z has a degenerate face on z = 0
        let v = nondegeneracy_check(&p("1+x+y+x*y+z", 3), &cfg).unwrap();
        assert!(
            matches!(v, Nondegeneracy::Degenerate { whole: false, .. }),
            "{v:?}"
        );
    }
}
