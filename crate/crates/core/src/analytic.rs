//! Exact solution of the crack-distribution model, used as the verification
//! oracle for the numerical schemes.
//!
//! Along a characteristic of the growth flow the density transforms as
//!
//! ```text
//! f(l, t) = l⁻² · D(t) · F( l·D(t) + g(t) ),     F(x) = x²·f₀(x),
//! ```
//!
//! where `D(t) = e^(−B·t³)` with `B = β·v_σ²/3`, and
//! `g(t) = (α/(9·β·v_σ²)^(1/3)) · γ(1/3, B·t³)` accumulates the −α drift.
//! The argument `l·D(t) + g(t)` traces the characteristic through `(l, t)`
//! back to its foot point at `t = 0`, and `F` is fixed by the `t = 0` limit
//! (where `D = 1`, `g = 0`, and the expression must collapse to `f₀(l)`).
//!
//! The moving branch applies where `α <= β·v_σ²·l·t²`; below that threshold
//! the crack population is frozen and the density is the initial condition
//! unchanged.

use crate::error::Error;
use crate::gamma::lower_incomplete;
use crate::grid::{Field, Grid, Params};
use crate::physics::InitialCondition;

/// Node-count threshold below which the field evaluator stays sequential
/// even with the `parallel` feature (rayon dispatch costs more than the
/// whole row for small grids).
#[cfg(feature = "parallel")]
const PAR_MIN_NODES: usize = 4096;

/// The t-dependent pieces of the exact solution, computed once per time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicState {
    /// `B = β·v_σ²/3` (1/time³).
    pub b_coeff: f64,
    /// `D(t) = e^(−B·t³)`, in (0, 1] for finite `t >= 0`.
    pub decay_factor: f64,
    /// `g(t) = (α/(9·β·v_σ²)^(1/3)) · γ(1/3, B·t³)`, the accumulated −α
    /// drift of the characteristic (length, >= 0).
    pub gamma_term: f64,
}

/// Computes the characteristic state at physical time `t >= 0`.
///
/// Fails with [`Error::DegenerateLoading`] when `v_sigma = 0`: the
/// construction divides by the cube root of `9·β·v_σ²`.
pub fn characteristic_state(t: f64, params: &Params) -> Result<CharacteristicState, Error> {
    debug_assert!(t >= 0.0, "characteristic state needs t >= 0");
    if params.v_sigma == 0.0 {
        return Err(Error::DegenerateLoading);
    }
    let b_coeff = params.beta * params.v_sigma * params.v_sigma / 3.0;
    let x = b_coeff * (t * t * t);
    let decay_factor = (-x).exp();
    let gamma_term = params.alpha / (9.0 * params.beta * params.v_sigma * params.v_sigma).cbrt()
        * lower_incomplete(1.0 / 3.0, x)?;
    Ok(CharacteristicState {
        b_coeff,
        decay_factor,
        gamma_term,
    })
}

/// The exact solution at one point `(l, t)`, `l > 0`.
///
/// On the frozen branch (`α > β·v_σ²·l·t²`) this is `f₀(l)` unchanged; on
/// the moving branch it is `l⁻²·D·F(l·D + g)` with `F(x) = x²·f₀(x)`.
pub fn analytic_solution(
    l: f64,
    t: f64,
    params: &Params,
    ic: &InitialCondition,
) -> Result<f64, Error> {
    if l == 0.0 {
        return Err(Error::SingularPoint);
    }
    debug_assert!(l > 0.0, "analytic solution needs l > 0");
    let state = characteristic_state(t, params)?;
    Ok(solution_at(l, t, &state, params, ic))
}

/// Moving/frozen branch selection and evaluation with a precomputed state.
fn solution_at(
    l: f64,
    t: f64,
    state: &CharacteristicState,
    params: &Params,
    ic: &InitialCondition,
) -> f64 {
    // Non-strict threshold: at exact equality the moving branch applies
    // (its characteristic has only just been released).
    if params.alpha <= params.beta * params.v_sigma * params.v_sigma * l * t * t {
        let u = l * state.decay_factor + state.gamma_term;
        state.decay_factor * (u * u * ic.eval(u)) / (l * l)
    } else {
        ic.eval(l)
    }
}

/// Samples the exact solution on the grid at time level `t_index`.
///
/// Node 0 carries `f₀(0)` (both initial-condition families are finite
/// there) as untransported boundary data — the solution itself is singular
/// at `l = 0` and the numerical schemes never update that node either.
pub fn analytic_field(
    t_index: usize,
    grid: &Grid,
    params: &Params,
    ic: &InitialCondition,
) -> Result<Field<f64>, Error> {
    let t = grid.time_at(t_index);
    let state = characteristic_state(t, params)?;
    let mut values = vec![0.0; grid.node_count()];
    values[0] = ic.eval(0.0);
    fill_interior(&mut values[1..], grid, t, &state, params, ic);
    Ok(Field::new(values, t_index, grid))
}

#[cfg(feature = "parallel")]
fn fill_interior(
    out: &mut [f64],
    grid: &Grid,
    t: f64,
    state: &CharacteristicState,
    params: &Params,
    ic: &InitialCondition,
) {
    use rayon::prelude::*;
    if out.len() >= PAR_MIN_NODES {
        out.par_iter_mut().enumerate().for_each(|(k, slot)| {
            *slot = solution_at(grid.node_length(k + 1), t, state, params, ic);
        });
    } else {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = solution_at(grid.node_length(k + 1), t, state, params, ic);
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn fill_interior(
    out: &mut [f64],
    grid: &Grid,
    t: f64,
    state: &CharacteristicState,
    params: &Params,
    ic: &InitialCondition,
) {
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = solution_at(grid.node_length(k + 1), t, state, params, ic);
    }
}
