//! Gaussian degrees of subvarieties of the complex torus `(C*)^n`, computed
//! by counting intersections of conormal varieties with graphs of generic
//! invariant 1-forms, together with combinatorial Euler-characteristic
//! oracles and an evaluator for `chi = sum n_v * gdeg(L_v)` on
//! user-supplied characteristic cycles.

pub mod cycles;
pub mod euler;
pub mod gauss;
pub mod homotopy;
pub mod laurent;
pub mod polytope;
pub mod univariate;
