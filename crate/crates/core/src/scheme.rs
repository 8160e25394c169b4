//! Explicit finite-difference stencils: FTCS and donor-cell upwind.
//!
//! Both schemes advance the conservation-form transport equation
//!
//! ```text
//! ∂f/∂t = −(1/l²)·∂(l²·v·f)/∂l,     v(l, σ) = −α + β·l·σ²,
//! ```
//!
//! expanded to advective form `f' = f·(1 − (3βσ² − 2α/l)·dt) − v·dt·Δf/Δl`
//! at every interior node where the growth gate `β·l·σ² − α > 0` is open.
//! Gated-off nodes and the two boundary nodes (0 and `lmax`) are copied
//! through unchanged.
//!
//! # Bit reproducibility
//!
//! The per-node update is written as one fixed expression tree; the
//! evaluation order of every multiply, divide, and subtract is part of the
//! crate's reproducibility contract (see the crate docs). Both execution
//! modes — sequential and rayon-parallel — evaluate exactly that tree per
//! node with no cross-node arithmetic, so they produce identical bits.

use crate::error::Error;
use crate::grid::{Field, Grid, Params};
use crate::physics::{gate, sigma_level};
use crate::scalar::Scalar;

/// Node-count threshold below which [`ExecMode::Auto`] stays sequential.
pub(crate) const SERIAL_CUTOFF: usize = 4096;

/// Which stencil advances the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    /// Forward-time centered-space: second-order spatial difference,
    /// conditionally (and here practically never) stable for pure
    /// advection — kept as the instability specimen.
    Ftcs,
    /// Donor-cell upwind: first-order one-sided difference chosen by the
    /// sign of the local advection coefficient.
    Upwind,
}

impl SchemeKind {
    /// The name used by the command-line interface and report files.
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ftcs => "ftcs",
            SchemeKind::Upwind => "upwind",
        }
    }
}

/// Switches for the two physical terms of the update, for term-by-term
/// debugging. Production runs keep both on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermToggles {
    /// Apply the advective difference term.
    pub advection: bool,
    /// Apply the local source factor `1 − (3βσ² − 2α/l)·dt`.
    pub source: bool,
}

impl Default for TermToggles {
    fn default() -> Self {
        TermToggles {
            advection: true,
            source: true,
        }
    }
}

/// How the per-node loop is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    /// Parallel for large grids (when the `parallel` feature is on),
    /// sequential below [`SERIAL_CUTOFF`] nodes.
    #[default]
    Auto,
    /// Always single-threaded.
    Sequential,
    /// Always rayon-parallel; degrades to sequential (with identical
    /// results) when the crate is built without the `parallel` feature.
    Parallel,
}

impl ExecMode {
    fn parallel_for(self, interior_nodes: usize) -> bool {
        if !cfg!(feature = "parallel") {
            return false;
        }
        match self {
            ExecMode::Auto => interior_nodes >= SERIAL_CUTOFF,
            ExecMode::Sequential => false,
            ExecMode::Parallel => true,
        }
    }
}

/// Per-step constants, converted to the working precision exactly once so
/// every node sees identical operands.
struct Coeffs<T> {
    dl: T,
    dt: T,
    alpha: T,
    beta: T,
    s2: T,
    one: T,
    two: T,
    three: T,
}

impl<T: Scalar> Coeffs<T> {
    fn new(t_index: usize, grid: &Grid, params: &Params) -> Self {
        let dt = T::from_config(grid.dt);
        let sigma = sigma_level(t_index, dt, T::from_config(params.v_sigma));
        Coeffs {
            dl: T::from_config(grid.dl),
            dt,
            alpha: T::from_config(params.alpha),
            beta: T::from_config(params.beta),
            s2: sigma * sigma,
            one: T::one(),
            two: T::from_config(2.0),
            three: T::from_config(3.0),
        }
    }
}

/// The fixed per-node expression tree. `f` is the field at the current
/// level; the return value is the node's value at the next level.
#[inline]
fn update_node<T: Scalar>(
    f: &[T],
    i: usize,
    c: &Coeffs<T>,
    scheme: SchemeKind,
    toggles: TermToggles,
    compat_half_coefficient: bool,
) -> T {
    let lphys = T::from_index(i) * c.dl;
    if !gate(lphys, c.s2, c.alpha, c.beta) {
        return f[i];
    }
    let src = if toggles.source {
        f[i] * (c.one - (c.three * c.beta * c.s2 - (c.two * c.alpha) / lphys) * c.dt)
    } else {
        f[i]
    };
    if !toggles.advection {
        return src;
    }
    let coeff = lphys * c.beta * c.s2 - c.alpha;
    let adv = match scheme {
        SchemeKind::Ftcs => {
            let div = if compat_half_coefficient {
                c.dl
            } else {
                c.two * c.dl
            };
            coeff * c.dt / div * (f[i + 1] - f[i - 1])
        }
        SchemeKind::Upwind => {
            if coeff > T::zero() {
                coeff * c.dt / c.dl * (f[i] - f[i - 1])
            } else if coeff < T::zero() {
                coeff * c.dt / c.dl * (f[i + 1] - f[i])
            } else {
                T::zero()
            }
        }
    };
    src - adv
}

/// Advances `field` one time level with full control over scheme, term
/// toggles, spatial-coefficient compatibility mode, and execution mode.
///
/// `t_index` is the level the *input* field lives at; the stress σ is
/// evaluated there and the returned field is stamped `t_index + 1`.
///
/// # Errors
///
/// [`Error::BlownUpInput`] when the input field already contains a
/// non-finite value — stepping it further would only manufacture NaNs.
///
/// # Panics
///
/// On contract violations: `field.time_index != t_index`, or a field/grid
/// length mismatch.
#[allow(clippy::too_many_arguments)]
pub fn step<T: Scalar>(
    field: &Field<T>,
    t_index: usize,
    grid: &Grid,
    params: &Params,
    scheme: SchemeKind,
    toggles: TermToggles,
    compat_half_coefficient: bool,
    mode: ExecMode,
) -> Result<Field<T>, Error> {
    assert_eq!(
        field.time_index, t_index,
        "field is at level {} but the step was asked for level {t_index}",
        field.time_index
    );
    assert_eq!(
        field.values.len(),
        grid.node_count(),
        "field has {} nodes but the grid has {}",
        field.values.len(),
        grid.node_count()
    );
    if !field.is_finite() {
        return Err(Error::BlownUpInput { level: t_index });
    }
    let c = Coeffs::<T>::new(t_index, grid, params);
    let f = field.values.as_slice();
    let mut out = field.values.clone();
    let interior = grid.lmax - 1;
    if mode.parallel_for(interior) {
        parallel_fill(
            &mut out[1..grid.lmax],
            f,
            &c,
            scheme,
            toggles,
            compat_half_coefficient,
        );
    } else {
        for (k, slot) in out[1..grid.lmax].iter_mut().enumerate() {
            *slot = update_node(f, k + 1, &c, scheme, toggles, compat_half_coefficient);
        }
    }
    Ok(Field::new(out, t_index + 1, grid))
}

#[cfg(feature = "parallel")]
fn parallel_fill<T: Scalar>(
    out: &mut [T],
    f: &[T],
    c: &Coeffs<T>,
    scheme: SchemeKind,
    toggles: TermToggles,
    compat_half_coefficient: bool,
) {
    use rayon::prelude::*;
    out.par_iter_mut().enumerate().for_each(|(k, slot)| {
        *slot = update_node(f, k + 1, c, scheme, toggles, compat_half_coefficient);
    });
}

#[cfg(not(feature = "parallel"))]
fn parallel_fill<T: Scalar>(
    out: &mut [T],
    f: &[T],
    c: &Coeffs<T>,
    scheme: SchemeKind,
    toggles: TermToggles,
    compat_half_coefficient: bool,
) {
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = update_node(f, k + 1, c, scheme, toggles, compat_half_coefficient);
    }
}

/// One FTCS step with both terms on and the standard centered `2·dl`
/// spatial divisor.
pub fn ftcs_step<T: Scalar>(
    field: &Field<T>,
    t_index: usize,
    grid: &Grid,
    params: &Params,
) -> Result<Field<T>, Error> {
    step(
        field,
        t_index,
        grid,
        params,
        SchemeKind::Ftcs,
        TermToggles::default(),
        false,
        ExecMode::Auto,
    )
}

/// One donor-cell upwind step with both terms on.
pub fn upwind_step<T: Scalar>(
    field: &Field<T>,
    t_index: usize,
    grid: &Grid,
    params: &Params,
) -> Result<Field<T>, Error> {
    step(
        field,
        t_index,
        grid,
        params,
        SchemeKind::Upwind,
        TermToggles::default(),
        false,
        ExecMode::Auto,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{initial_field, InitialCondition};

    fn defaults() -> (Grid, Params) {
        (Grid::default(), Params::default())
    }

    fn exp_field(grid: &Grid) -> Field<f64> {
        initial_field(
            &InitialCondition::Exponential {
                amplitude: 1.0,
                decay: 1.0,
            },
            grid,
        )
    }

    /// A deterministic ad-hoc field with varied magnitudes.
    fn wiggly_field(grid: &Grid, t_index: usize) -> Field<f64> {
        let values = (0..grid.node_count())
            .map(|i| 0.5 + (i as f64 * 0.7).sin().abs() + 1e-3 * i as f64)
            .collect();
        let mut f = Field::new(values, 0, grid);
        f.time_index = t_index;
        f
    }

    #[test]
    fn closed_gate_copies_the_field_through() {
        // At level 0 the stress is zero, the gate is closed everywhere,
        // and the step must be a bitwise identity.
        let (g, p) = defaults();
        let f = exp_field(&g);
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let next = step(
                &f,
                0,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            assert_eq!(next.time_index, 1);
            assert_eq!(next.values, f.values);
        }
    }

    #[test]
    fn boundary_nodes_never_move() {
        let (g, p) = defaults();
        let mut f = wiggly_field(&g, 900);
        f.values[0] = 17.0;
        f.values[g.lmax] = -4.0;
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let next = step(
                &f,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            assert_eq!(next.values[0].to_bits(), f.values[0].to_bits());
            assert_eq!(next.values[g.lmax].to_bits(), f.values[g.lmax].to_bits());
        }
    }

    #[test]
    fn interior_changes_once_the_gate_opens() {
        // At level 900 (σ = 0.9 on defaults) the gate is open in the upper
        // part of the grid; both schemes must actually move those nodes.
        let (g, p) = defaults();
        let f = exp_field(&g);
        let mut f = f;
        f.time_index = 900;
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let next = step(
                &f,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            let moved = (1..g.lmax)
                .filter(|&i| next.values[i] != f.values[i])
                .count();
            assert!(moved > 10, "{:?}: only {moved} nodes moved", scheme);
        }
    }

    #[test]
    fn update_matches_the_written_expression_tree() {
        // Recompute one gated node with the documented expression order
        // and demand bit equality.
        let (g, p) = defaults();
        let f = wiggly_field(&g, 900);
        let i = 150; // l = 7.5, gate open at σ = 0.9
        let (dl, dt) = (g.dl, g.dt);
        let sigma = p.v_sigma * (900.0 * dt);
        let s2 = sigma * sigma;
        let lphys = i as f64 * dl;
        assert!(lphys * s2 * p.beta - p.alpha > 0.0);
        let src = f.values[i] * (1.0 - (3.0 * p.beta * s2 - (2.0 * p.alpha) / lphys) * dt);
        let coeff = lphys * p.beta * s2 - p.alpha;
        let expect_ftcs = src - coeff * dt / (2.0 * dl) * (f.values[i + 1] - f.values[i - 1]);
        let expect_up = src - coeff * dt / dl * (f.values[i] - f.values[i - 1]);
        let ftcs = ftcs_step(&f, 900, &g, &p).unwrap();
        let up = upwind_step(&f, 900, &g, &p).unwrap();
        assert_eq!(ftcs.values[i].to_bits(), expect_ftcs.to_bits());
        assert_eq!(up.values[i].to_bits(), expect_up.to_bits());
    }

    #[test]
    fn compat_mode_doubles_the_centered_term() {
        let (g, p) = defaults();
        let f = wiggly_field(&g, 900);
        let normal = ftcs_step(&f, 900, &g, &p).unwrap();
        let compat = step(
            &f,
            900,
            &g,
            &p,
            SchemeKind::Ftcs,
            TermToggles::default(),
            true,
            ExecMode::Auto,
        )
        .unwrap();
        let i = 150;
        let sigma = p.v_sigma * (900.0 * g.dt);
        let s2 = sigma * sigma;
        let src =
            f.values[i] * (1.0 - (3.0 * p.beta * s2 - (2.0 * p.alpha) / (i as f64 * g.dl)) * g.dt);
        // The compat advective term is exactly twice the normal one.
        let adv_normal = src - normal.values[i];
        let adv_compat = src - compat.values[i];
        assert!((adv_compat - 2.0 * adv_normal).abs() <= 1e-18 + adv_normal.abs() * 1e-12);
        assert_ne!(normal.values[i].to_bits(), compat.values[i].to_bits());
    }

    #[test]
    fn toggles_isolate_the_terms() {
        let (g, p) = defaults();
        let f = wiggly_field(&g, 900);
        let i = 150;
        let lphys = i as f64 * g.dl;
        let sigma = p.v_sigma * (900.0 * g.dt);
        let s2 = sigma * sigma;
        let only_source = step(
            &f,
            900,
            &g,
            &p,
            SchemeKind::Ftcs,
            TermToggles {
                advection: false,
                source: true,
            },
            false,
            ExecMode::Auto,
        )
        .unwrap();
        let expect = f.values[i] * (1.0 - (3.0 * p.beta * s2 - (2.0 * p.alpha) / lphys) * g.dt);
        assert_eq!(only_source.values[i].to_bits(), expect.to_bits());

        let only_adv = step(
            &f,
            900,
            &g,
            &p,
            SchemeKind::Upwind,
            TermToggles {
                advection: true,
                source: false,
            },
            false,
            ExecMode::Auto,
        )
        .unwrap();
        let coeff = lphys * p.beta * s2 - p.alpha;
        let expect = f.values[i] - coeff * g.dt / g.dl * (f.values[i] - f.values[i - 1]);
        assert_eq!(only_adv.values[i].to_bits(), expect.to_bits());

        let neither = step(
            &f,
            900,
            &g,
            &p,
            SchemeKind::Ftcs,
            TermToggles {
                advection: false,
                source: false,
            },
            false,
            ExecMode::Auto,
        )
        .unwrap();
        assert_eq!(neither.values, f.values);
    }

    #[test]
    fn step_is_linear_in_the_field() {
        // The gate and all coefficients are field-independent, so the
        // update is linear up to floating-point round-off (≤ 4 ulp).
        let (g, p) = defaults();
        let a = wiggly_field(&g, 900);
        let b = {
            let values = (0..g.node_count())
                .map(|i| ((i * 37 + 11) % 101) as f64 * 0.03 - 1.0)
                .collect();
            let mut f = Field::new(values, 0, &g);
            f.time_index = 900;
            f
        };
        let combo = {
            let values = (0..g.node_count())
                .map(|i| 2.0 * a.values[i] + 0.5 * b.values[i])
                .collect();
            let mut f = Field::new(values, 0, &g);
            f.time_index = 900;
            f
        };
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let sa = step(
                &a,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            let sb = step(
                &b,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            let sc = step(
                &combo,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            for i in 0..=g.lmax {
                let recomposed = 2.0 * sa.values[i] + 0.5 * sb.values[i];
                let err = (sc.values[i] - recomposed).abs();
                let ulp = sc.values[i].abs().max(recomposed.abs()).max(1e-300) * f64::EPSILON;
                assert!(err <= 4.0 * ulp, "node {i}: err {err:e} > 4 ulp");
            }
        }
    }

    #[test]
    fn update_is_local_to_the_stencil() {
        let (g, p) = defaults();
        let base = wiggly_field(&g, 900);
        let mut bumped = base.clone();
        let j = 120;
        bumped.values[j] += 0.25;
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let s0 = step(
                &base,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            let s1 = step(
                &bumped,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Auto,
            )
            .unwrap();
            for i in 0..=g.lmax {
                if i + 1 < j || i > j + 1 {
                    assert_eq!(
                        s0.values[i].to_bits(),
                        s1.values[i].to_bits(),
                        "{scheme:?}: node {i} felt a bump at {j}"
                    );
                }
            }
            assert_ne!(s0.values[j].to_bits(), s1.values[j].to_bits());
        }
    }

    #[test]
    fn upwind_is_a_convex_combination_under_cfl() {
        // With α = 0 and the source off, the upwind update is
        // (1−ν)·f[i] + ν·f[i−1] with ν = l·β·σ²·dt/dl ∈ [0, 0.8] on this
        // configuration, so values stay within the initial bounds and
        // non-negative.
        let g = Grid::default();
        let p = Params {
            alpha: 0.0,
            ..Params::default()
        };
        let t_index = 2000; // σ = 2, ν_max = 10·4·0.001/0.05 = 0.8
        let values: Vec<f64> = (0..g.node_count())
            .map(|i| ((i * 29 + 7) % 53) as f64 / 53.0)
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut f = Field::new(values, 0, &g);
        f.time_index = t_index;
        let next = step(
            &f,
            t_index,
            &g,
            &p,
            SchemeKind::Upwind,
            TermToggles {
                advection: true,
                source: false,
            },
            false,
            ExecMode::Auto,
        )
        .unwrap();
        for (i, v) in next.values.iter().enumerate() {
            assert!(*v >= lo - 1e-15 && *v <= hi + 1e-15, "node {i}: {v}");
            assert!(*v >= 0.0, "node {i} went negative: {v}");
        }
    }

    #[test]
    fn ftcs_and_upwind_agree_shortly_after_activation() {
        // Both schemes are consistent discretizations; 50 steps past gate
        // activation they still agree to ≤ 10% in relative L2.
        let (g, p) = defaults();
        let ic = InitialCondition::Exponential {
            amplitude: 1.0,
            decay: 1.0,
        };
        // Gate first opens at the top node when σ² > α/(β·l_top) = 0.1,
        // i.e. σ > 0.3162…, level 317 on defaults.
        let mut a: Field<f64> = initial_field(&ic, &g);
        let mut b = a.clone();
        for n in 0..367 {
            a = ftcs_step(&a, n, &g, &p).unwrap();
            b = upwind_step(&b, n, &g, &p).unwrap();
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..=g.lmax {
            let d = a.values[i] - b.values[i];
            num += d * d;
            den += a.values[i] * a.values[i];
        }
        let rel = (num / den).sqrt();
        assert!(rel <= 0.10, "schemes diverged: rel L2 = {rel}");
        assert!(rel > 0.0, "schemes unexpectedly identical");
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let (g, p) = defaults();
        let mut f = exp_field(&g);
        f.time_index = 500;
        f.values[42] = f64::NAN;
        match ftcs_step(&f, 500, &g, &p) {
            Err(Error::BlownUpInput { level }) => assert_eq!(level, 500),
            other => panic!("expected BlownUpInput, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "field is at level")]
    fn level_mismatch_is_a_contract_violation() {
        let (g, p) = defaults();
        let f = exp_field(&g);
        let _ = ftcs_step(&f, 3, &g, &p);
    }

    #[test]
    fn f32_stepping_stays_in_f32() {
        // A binary32 step of a binary32 field equals the binary32
        // expression tree exactly — no hidden double-precision detour.
        let (g, p) = defaults();
        let ic = InitialCondition::Exponential {
            amplitude: 1.0,
            decay: 1.0,
        };
        let mut f: Field<f32> = initial_field(&ic, &g);
        f.time_index = 900;
        let next = ftcs_step(&f, 900, &g, &p).unwrap();
        let i = 150usize;
        let dl = 0.05f32;
        let dt = 0.001f32;
        let sigma = 1.0f32 * (900.0f32 * dt);
        let s2 = sigma * sigma;
        let lphys = 150.0f32 * dl;
        let src = f.values[i] * (1.0f32 - (3.0f32 * 1.0f32 * s2 - (2.0f32 * 1.0f32) / lphys) * dt);
        let coeff = lphys * 1.0f32 * s2 - 1.0f32;
        let expect = src - coeff * dt / (2.0f32 * dl) * (f.values[i + 1] - f.values[i - 1]);
        assert_eq!(next.values[i].to_bits(), expect.to_bits());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_are_bit_identical() {
        let g = Grid {
            lmax: 6000,
            ..Grid::default()
        };
        let p = Params::default();
        let values: Vec<f64> = (0..g.node_count())
            .map(|i| (i as f64 * 0.11).sin() + 1.5)
            .collect();
        let mut f = Field::new(values, 0, &g);
        f.time_index = 900;
        for scheme in [SchemeKind::Ftcs, SchemeKind::Upwind] {
            let seq = step(
                &f,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Sequential,
            )
            .unwrap();
            let par = step(
                &f,
                900,
                &g,
                &p,
                scheme,
                TermToggles::default(),
                false,
                ExecMode::Parallel,
            )
            .unwrap();
            for i in 0..=g.lmax {
                assert_eq!(seq.values[i].to_bits(), par.values[i].to_bits(), "node {i}");
            }
        }
    }
}
