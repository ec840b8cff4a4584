use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::linalg::{norm, solve};
use super::system::{relative, CompiledSystem, PolynomialSystem};
use super::TrackerConfig;

/// Remaining homotopy distance at which tracking gives up and hands the
/// point to endpoint refinement regardless of convergence.
const ENDGAME_FLOOR: f64 = 1e-40;
/// Below this remaining distance a path whose relative motion over one step
/// drops under `SETTLED_MOTION` is considered arrived.
const SETTLE_DISTANCE: f64 = 1e-8;
const SETTLED_MOTION: f64 = 1e-12;
/// Smallest step, as a fraction of the remaining distance, once that is
/// below `min_step`.
const RELATIVE_MIN_STEP: f64 = 1e-3;

/// Largest relative distance endpoint refinement may move a point.
const REFINE_REACH: f64 = 1e-3;

/// Outcome of following one path from `t = 0` to `t = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PathResult {
    Converged {
        point: Vec<Complex64>,
        steps: usize,
    },
    Diverged {
        t: f64,
    },
    /// The step size fell below the minimum (or the step budget ran out).
    StepUnderflow {
        t: f64,
    },
}

/// `H(x, t) = (1 - t) * gamma * start(x) + t * target(x)`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    target: CompiledSystem,
    start: CompiledSystem,
    gamma: Complex64,
}

struct HomotopyEval {
    values: Vec<Complex64>,
    jx: Vec<Vec<Complex64>>,
    jt: Vec<Complex64>,
    scales: Vec<f64>,
}

impl Homotopy {
    pub fn new(target: &PolynomialSystem, start: &PolynomialSystem, gamma: Complex64) -> Self {
        Self {
            target: CompiledSystem::new(target),
            start: CompiledSystem::new(start),
            gamma,
        }
    }

    /// `s = 1 - t` is passed explicitly: near the end of a path `t` itself
    /// cannot resolve the remaining distance in `f64`.
    fn eval(&self, x: &[Complex64], s: f64) -> HomotopyEval {
        let f = self.target.evaluate(x);
        let st = self.start.evaluate(x);
        let a = self.gamma * s;
        let b = 1.0 - s;
        let n = x.len();
        let values = (0..n).map(|i| a * st.values[i] + b * f.values[i]).collect();
        let jx = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| a * st.jacobian[i][j] + b * f.jacobian[i][j])
                    .collect()
            })
            .collect();
        let jt = (0..n)
            .map(|i| f.values[i] - self.gamma * st.values[i])
            .collect();
        let scales = (0..n)
            .map(|i| a.norm() * st.scales[i] + b * f.scales[i])
            .collect();
        HomotopyEval {
            values,
            jx,
            jt,
            scales,
        }
    }

    /// Tangent `dx/dt = -H_x^{-1} H_t`.
    fn velocity(&self, x: &[Complex64], s: f64) -> Option<Vec<Complex64>> {
        let e = self.eval(x, s);
        solve(e.jx, e.jt.iter().map(|v| -v).collect())
    }

    /// One RK4 step advancing `t` by `h`, i.e. from `s` to `s - h`.
    fn rk4(&self, x: &[Complex64], s: f64, h: f64) -> Option<Vec<Complex64>> {
        let axpy = |base: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
            base.iter().zip(k).map(|(b, v)| b + v * c).collect()
        };
        let k1 = self.velocity(x, s)?;
        let k2 = self.velocity(&axpy(x, &k1, h / 2.0), s - h / 2.0)?;
        let k3 = self.velocity(&axpy(x, &k2, h / 2.0), s - h / 2.0)?;
        let k4 = self.velocity(&axpy(x, &k3, h), s - h)?;
        Some(
            (0..x.len())
                .map(|i| x[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
                .collect(),
        )
    }

    /// Newton at fixed `s`; returns the corrected point once the relative
    /// residual is below `tol`.
    fn correct(
        &self,
        mut x: Vec<Complex64>,
        s: f64,
        tol: f64,
        max_iter: usize,
    ) -> Option<Vec<Complex64>> {
        let mut last_step = f64::INFINITY;
        for iter in 0..=max_iter {
            let e = self.eval(&x, s);
            if relative(&e.values, &e.scales) < tol {
                return Some(x);
            }
            if iter == max_iter {
                break;
            }
            let dx = solve(e.jx, e.values.iter().map(|v| -v).collect())?;
            let step = norm(&dx);
            // require contraction after the first iteration
            if step > 0.5 * last_step && step > 1e-14 * (1.0 + norm(&x)) {
                return None;
            }
            last_step = step;
            x.iter_mut().zip(&dx).for_each(|(a, b)| *a += b);
        }
        None
    }

    /// Follows the path starting at `start_point` (a root of the start system).
    ///
    /// Close to the end the minimum step shrinks with the remaining distance
    /// `1 - t`, so paths whose endpoint only dominates the start system very
    /// close to `t = 1` are followed geometrically instead of being
    /// abandoned. The point goes to endpoint refinement once it stops moving.
    pub fn track(&self, start_point: &[Complex64], cfg: &TrackerConfig) -> PathResult {
        let mut x = start_point.to_vec();
        let mut s = 1.0_f64;
        let mut h = cfg.initial_step;
        let mut streak = 0;
        let mut steps = 0;
        while s > ENDGAME_FLOOR {
            if steps >= cfg.max_steps {
                return PathResult::StepUnderflow { t: 1.0 - s };
            }
            steps += 1;
            // never jump to the end: a diverging path would land on a
            // finite root there
            let dt = h.min(0.5 * s);
            let s1 = s - dt;
            let accepted = self.rk4(&x, s, dt).and_then(|pred| {
                let moved = x
                    .iter()
                    .zip(&pred)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let corrected = self.correct(
                    pred.clone(),
                    s1,
                    cfg.corrector_tolerance,
                    cfg.max_corrector_iterations,
                )?;
                let fix = pred
                    .iter()
                    .zip(&corrected)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                // a large correction relative to the predicted motion means
                // the predictor left the path's basin
                if fix > 0.25 * moved + 1e-9 * (1.0 + norm(&x)) {
                    None
                } else {
                    Some(corrected)
                }
            });
            match accepted {
                Some(next) => {
                    let motion = x
                        .iter()
                        .zip(&next)
                        .map(|(a, b)| (a - b).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    x = next;
                    s = s1;
                    if s < SETTLE_DISTANCE && motion < SETTLED_MOTION * (1.0 + norm(&x)) {
                        break;
                    }
                    if x.iter().any(|z| z.norm() > cfg.divergence_threshold) {
                        return PathResult::Diverged { t: 1.0 - s };
                    }
                    streak += 1;
                    if streak >= 5 {
                        h = (h * 1.5).min(cfg.max_step);
                        streak = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    streak = 0;
                    // near the end a healthy path advances by a fixed
                    // fraction of the remaining distance
                    if h < cfg.min_step.min(RELATIVE_MIN_STEP * s) {
                        return PathResult::StepUnderflow { t: 1.0 - s };
                    }
                }
            }
        }
        match self.refine(x, cfg) {
            Some(point) => PathResult::Converged { point, steps },
            None => PathResult::StepUnderflow { t: 1.0 },
        }
    }

    /// Newton on the target system alone until the endpoint tolerance is met.
    /// Iterates that wander away from the tracked point are rejected: a path
    /// still on its way to infinity would otherwise be captured by some
    /// unrelated finite root.
    fn refine(&self, mut x: Vec<Complex64>, cfg: &TrackerConfig) -> Option<Vec<Complex64>> {
        let origin = x.clone();
        let reach = REFINE_REACH * (1.0 + norm(&origin));
        let mut best = (f64::INFINITY, x.clone());
        for _ in 0..10 {
            let moved = origin
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if moved > reach {
                break;
            }
            let e = self.target.evaluate(&x);
            let r = relative(&e.values, &e.scales);
            if r < best.0 {
                best = (r, x.clone());
            }
            if r < cfg.endpoint_tolerance {
                return Some(x);
            }
            let dx = solve(e.jacobian, e.values.iter().map(|v| -v).collect())?;
            x.iter_mut().zip(&dx).for_each(|(a, b)| *a += b);
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                break;
            }
        }
        // hand back the best iterate; the caller applies the residual filter
        Some(best.1)
    }
}

/// Tracks one path of `(1 - t) * gamma * start + t * target`, drawing the
/// unit-modulus `gamma` from `cfg.seed`.
pub fn track_path(
    target: &PolynomialSystem,
    start: &PolynomialSystem,
    start_point: &[Complex64],
    cfg: &TrackerConfig,
) -> PathResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gamma = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    Homotopy::new(target, start, gamma).track(start_point, cfg)
}
