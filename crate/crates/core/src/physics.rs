//! The physical model: stress ramp, threshold crack velocity, growth gate,
//! and the two initial-condition families.

use crate::grid::{Field, Grid, Params};
use crate::scalar::Scalar;

/// The two initial-condition families.
///
/// Amplitudes and placements carry no defaults: they must be chosen
/// explicitly by the caller (the front end rejects invocations that omit
/// them), so no shape is ever invented silently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    /// `f(l) = amplitude` for `l_lo <= l <= l_hi` (inclusive on grid nodes),
    /// 0 elsewhere.
    StepWise {
        amplitude: f64,
        l_lo: f64,
        l_hi: f64,
    },
    /// `f(l) = amplitude·e^(−decay·l)`.
    Exponential { amplitude: f64, decay: f64 },
}

impl InitialCondition {
    /// Closed-form evaluation at an arbitrary length `x >= 0`, in `f64`.
    ///
    /// The analytic solution needs the initial condition at off-grid
    /// arguments (the characteristic foot point), so this evaluates the
    /// closed form rather than interpolating sampled fields.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::StepWise {
                amplitude,
                l_lo,
                l_hi,
            } => {
                if x >= l_lo && x <= l_hi {
                    amplitude
                } else {
                    0.0
                }
            }
            InitialCondition::Exponential { amplitude, decay } => amplitude * (-(decay * x)).exp(),
        }
    }

    /// Invariant violations of this initial condition, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        match *self {
            InitialCondition::StepWise {
                amplitude,
                l_lo,
                l_hi,
            } => {
                if !(amplitude >= 0.0 && amplitude.is_finite()) {
                    v.push("amplitude >= 0".to_string());
                }
                if !(l_lo >= 0.0 && l_lo < l_hi && l_hi.is_finite()) {
                    v.push("0 <= l_lo < l_hi".to_string());
                }
            }
            InitialCondition::Exponential { amplitude, decay } => {
                if !(amplitude >= 0.0 && amplitude.is_finite()) {
                    v.push("amplitude >= 0".to_string());
                }
                if !(decay > 0.0 && decay.is_finite()) {
                    v.push("decay > 0".to_string());
                }
            }
        }
        v
    }
}

/// Stress at time level `n`: the linear ramp `σ = v_σ·(n·dt)`.
pub fn sigma_at(t_index: usize, grid: &Grid, params: &Params) -> f64 {
    sigma_level::<f64>(t_index, grid.dt, params.v_sigma)
}

/// Precision-generic stress ramp used inside the steppers.
///
/// The association `v_σ·(n·dt)` — level index converted to `T` first, then
/// scaled — is part of the bit-reproducibility contract and must not be
/// reordered.
pub fn sigma_level<T: Scalar>(t_index: usize, dt: T, v_sigma: T) -> T {
    v_sigma * (T::from_index(t_index) * dt)
}

/// Crack growth velocity `v(l, σ)`: `−α + β·l·σ²` on the supercritical
/// branch (`α <= β·l·σ²`, non-strict), 0 on the frozen branch.
///
/// The result is never negative: the active branch fires only when
/// `β·l·σ²` has reached `α`.
pub fn crack_velocity(l: f64, sigma: f64, params: &Params) -> f64 {
    let s2 = sigma * sigma;
    let drive = params.beta * l * s2;
    if params.alpha <= drive {
        -params.alpha + drive
    } else {
        0.0
    }
}

/// The growth gate: true iff `β·l·σ² − α > 0` (strict).
///
/// At exact threshold equality the gate is closed, which is
/// velocity-consistent: [`crack_velocity`] is 0 there on either branch.
pub fn growth_active(l: f64, sigma: f64, params: &Params) -> bool {
    let s2 = sigma * sigma;
    gate(l, s2, params.alpha, params.beta)
}

/// Precision-generic gate used inside the steppers; `s2` is σ².
///
/// Association (`l·s2·β − α`) is fixed by the bit-reproducibility contract.
pub fn gate<T: Scalar>(lphys: T, s2: T, alpha: T, beta: T) -> bool {
    lphys * s2 * beta - alpha > T::zero()
}

/// Samples an initial condition onto the grid at precision `T`.
///
/// All arithmetic — node positions, interval membership, the exponential —
/// runs in `T`, so a binary32 run starts from genuinely binary32 samples
/// rather than rounded binary64 ones.
pub fn initial_field<T: Scalar>(ic: &InitialCondition, grid: &Grid) -> Field<T> {
    let dl = T::from_config(grid.dl);
    let values = match *ic {
        InitialCondition::StepWise {
            amplitude,
            l_lo,
            l_hi,
        } => {
            let amp = T::from_config(amplitude);
            let lo = T::from_config(l_lo);
            let hi = T::from_config(l_hi);
            (0..=grid.lmax)
                .map(|i| {
                    let l = T::from_index(i) * dl;
                    if l >= lo && l <= hi {
                        amp
                    } else {
                        T::zero()
                    }
                })
                .collect()
        }
        InitialCondition::Exponential { amplitude, decay } => {
            let amp = T::from_config(amplitude);
            let k = T::from_config(decay);
            (0..=grid.lmax)
                .map(|i| {
                    let l = T::from_index(i) * dl;
                    amp * (-(k * l)).exp()
                })
                .collect()
        }
    };
    Field::new(values, 0, grid)
}
