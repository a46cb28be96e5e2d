//! The half-power Dirichlet energy on sphere-valued maps and its
//! constrained gradient flow.
//!
//! The energy of a map u: grid → S^{m−1} is
//!
//! ```text
//! E(u) = Σ_i ‖(−Δ)^{n/4} u_i‖²_{L²}
//! ```
//!
//! evaluated by Plancherel on the frequency side.  Criticality under
//! constrained variations Π(u + tφ) is measured by the tension field
//! P^T (−Δ)^{n/2}u — the tangential part of the full-order image — whose
//! sup norm is the Euler–Lagrange residual: it vanishes exactly when
//! (−Δ)^{n/2}u is pointwise normal, which is the discrete critical-point
//! condition.  The equator ("circle") map x ↦ (cos x₁, sin x₁, 0, …) is
//! critical in every dimension handled here, because (−Δ)^{n/2} acts as
//! the identity on its two active modes and the tangent projector then
//! annihilates u itself; it has energy exactly 2π·(2π)^{n−1} under this
//! normalisation.
//!
//! The flow is projected gradient descent in that variation class:
//!
//! ```text
//! u ← Π( u − τ (−Δ)^{n/2} u )
//! ```
//!
//! with Π the pointwise nearest-point retraction onto the sphere and an
//! energy-increase backtracking line search on τ.  A step is accepted
//! only when the energy does not increase *exactly* (float comparison,
//! no slack): near critical points the retraction's own roundoff can tip
//! either way, and the backtracking absorbs it — each halved τ reseeds
//! the rounding — so traces satisfy a bitwise monotonicity assertion.
//! τ resets to the configured value at every iteration; backtracking is
//! local to the step that needed it.
//!
//! The default step 0.1·(N/2)^{−n} is an explicit-Euler stability
//! heuristic against the top symbol value (N/2)^n of (−Δ)^{n/2}; runs
//! with an iteration budget should set τ near the stability bound
//! instead and let the line search cover the slack.
//!
//! Initial data for reproducible experiments is the equator map plus a
//! seeded tangent perturbation band-limited to 2 ≤ |ξ| ≤ 4.  The band
//! matters: |ξ| = 1 tangent modes are (discretely) neutral directions —
//! they rotate the equator map to a nearby critical point without
//! first-order energy change — so noise placed there would stall the
//! residual without being wrong, and noise above the band is no longer
//! "smooth" at the coarse grids the flow runs on.

use crate::error::{Error, Result};
use crate::field::{to_frequency, ScalarField, VectorFieldMap};
use crate::grid::PeriodicGrid;
use crate::manifold::{nearest_projection, projector_fields, ManifoldMap, SphereTarget};
use crate::random::gaussian_random_field;
use crate::spectral::{apply_to_spectrum, vector_fractional_laplacian, FourierMultiplier};

/// Parameters of one flow run.  `grid` and `target_dim` fix the
/// discretisation and the sphere S^{target_dim−1}; `seed` and
/// `perturbation` describe the initial data built by
/// [`perturbed_circle_map`]-style constructors (they do not affect
/// [`flow_step`]/[`flow_run`] themselves, which take the start
/// explicitly).
#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub grid: PeriodicGrid,
    /// Ambient dimension m of the target sphere S^{m−1}.
    pub target_dim: usize,
    /// Base step size; every iteration starts from this value.
    pub tau: f64,
    pub max_iterations: usize,
    /// Stop once the Euler–Lagrange residual falls to this level.
    pub tolerance: f64,
    /// Multiplier applied to τ when a trial step raises the energy.
    pub backtracking_factor: f64,
    /// Retries before a step gives up with [`Error::StepFailure`].
    pub max_backtracks: usize,
    /// Seed for the initial tangent perturbation.
    pub seed: u64,
    /// Sup-amplitude of the initial tangent perturbation.
    pub perturbation: f64,
}

impl FlowConfig {
    /// Defaults: the stability-heuristic step, 1000 iterations,
    /// residual tolerance 1e-6, halving line search with 30 retries,
    /// seed 1, perturbation amplitude 0.1.
    pub fn new(grid: &PeriodicGrid, target_dim: usize) -> Result<Self> {
        let config = FlowConfig {
            grid: grid.clone(),
            target_dim,
            tau: default_step(grid),
            max_iterations: 1000,
            tolerance: 1e-6,
            backtracking_factor: 0.5,
            max_backtracks: 30,
            seed: 1,
            perturbation: 0.1,
        };
        config.validate()?;
        Ok(config)
    }

    /// Rejects parameters the flow cannot run with.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::config(format!(
                "step size tau must be positive and finite, got {}",
                self.tau
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::config(format!(
                "residual tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.backtracking_factor > 0.0 && self.backtracking_factor < 1.0) {
            return Err(Error::config(format!(
                "backtracking factor must lie in (0,1), got {}",
                self.backtracking_factor
            )));
        }
        if self.target_dim < 2 {
            return Err(Error::config(format!(
                "target sphere needs ambient dimension >= 2, got {}",
                self.target_dim
            )));
        }
        if !(self.perturbation.is_finite() && self.perturbation >= 0.0) {
            return Err(Error::config(format!(
                "perturbation amplitude must be >= 0, got {}",
                self.perturbation
            )));
        }
        Ok(())
    }
}

/// Stability-heuristic default step 0.1·(N/2)^{−n}: one tenth of the
/// reciprocal top symbol value of (−Δ)^{n/2} on the grid.
pub fn default_step(grid: &PeriodicGrid) -> f64 {
    0.1 * (grid.points_per_axis as f64 / 2.0).powi(-(grid.n as i32))
}

/// One point of a flow trajectory: the iterate plus the scalars a trace
/// records about it.  `tau` is the step size accepted when producing
/// this iterate (the configured base value at iteration 0).
#[derive(Debug, Clone)]
pub struct FlowState {
    pub map: ManifoldMap,
    pub energy: f64,
    pub residual: f64,
    pub iteration: usize,
    pub tau: f64,
}

impl FlowState {
    /// Wraps a map with its energy and residual computed.
    pub fn new(map: ManifoldMap, iteration: usize, tau: f64) -> Result<Self> {
        let energy = energy(&map);
        let residual = el_residual(&map)?;
        Ok(FlowState {
            map,
            energy,
            residual,
            iteration,
            tau,
        })
    }
}

/// One row of a flow trace: everything about an iteration except the
/// field itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub energy: f64,
    pub residual: f64,
    pub tau: f64,
}

/// A completed run: per-iteration rows (row 0 describes the start),
/// the final state, and whether the residual tolerance was reached
/// within the iteration budget.
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub rows: Vec<TraceRow>,
    pub final_state: FlowState,
    pub converged: bool,
}

/// Σ_i ‖(−Δ)^{n/4} v_i‖²_{L²} for an unconstrained vector field,
/// summed on the frequency side.
pub fn vector_energy(v: &VectorFieldMap) -> f64 {
    let mult = FourierMultiplier::fractional_laplacian(v.grid.n as f64 / 4.0);
    v.components
        .iter()
        .map(|c| {
            let mut spec = to_frequency(c);
            apply_to_spectrum(&mut spec, &mult);
            spec.l2_norm_squared()
        })
        .sum()
}

/// The flow's objective: [`vector_energy`] of the map's components.
pub fn energy(u: &ManifoldMap) -> f64 {
    vector_energy(&u.field)
}

/// The tension field P^T (−Δ)^{n/2}u: the tangential part of the
/// full-order image, i.e. the constrained gradient direction (up to the
/// factor 2 absorbed into the step size).
pub fn tension_field(u: &ManifoldMap) -> Result<VectorFieldMap> {
    let full = vector_fractional_laplacian(&u.field, u.field.grid.n as f64 / 2.0)?;
    projector_fields(u)?.tangent.matvec(&full)
}

/// Euler–Lagrange residual: max over the grid of |P^T (−Δ)^{n/2}u|.
/// Zero exactly at critical points of the constrained energy.
pub fn el_residual(u: &ManifoldMap) -> Result<f64> {
    Ok(tension_field(u)?.magnitude().linf())
}

/// The equator map x ↦ (cos x₁, sin x₁, 0, …, 0) into S^{m−1}.
pub fn circle_map(grid: &PeriodicGrid, target_dim: usize) -> Result<ManifoldMap> {
    if target_dim < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: target_dim,
        });
    }
    let mut components = vec![
        ScalarField::from_fn(grid, |x| x[0].cos()),
        ScalarField::from_fn(grid, |x| x[0].sin()),
    ];
    for _ in 2..target_dim {
        components.push(ScalarField::zeros(grid));
    }
    ManifoldMap::new(
        VectorFieldMap::new(components)?,
        SphereTarget::new(target_dim)?,
    )
}

/// The boundary trace of the disk automorphism z ↦ (z − a)/(1 − az),
/// written as a map of the 1-torus into S¹:
///
/// ```text
/// u_a(x) = ( (1+a²)cos x − 2a , (1−a²)sin x ) / (1 + a² − 2a cos x )
/// ```
///
/// For |a| < 1 the map is unit-valued and, being the trace of a
/// holomorphic function with nonnegative spectrum, exactly critical for
/// the half-order energy: for such maps the tension field reduces to
/// Re(u′ū) = ½(|u|²)′ = 0.  Unlike the plain circle map its Fourier
/// coefficients decay like a^k rather than terminating, which makes it
/// the reference fixture for refinement studies — tangency and
/// structure-equation defects decay spectrally in N while sitting far
/// above roundoff at moderate N.  Only meaningful on one-dimensional
/// grids, where the half-order energy is the critical one.
pub fn blaschke_map(grid: &PeriodicGrid, a: f64) -> Result<ManifoldMap> {
    if grid.n != 1 {
        return Err(Error::WrongDimension {
            expected: 1,
            got: grid.n,
        });
    }
    if a.abs() >= 1.0 {
        return Err(Error::config(format!(
            "blaschke parameter must satisfy |a| < 1, got {a}"
        )));
    }
    let first = ScalarField::from_fn(grid, |x| {
        ((1.0 + a * a) * x[0].cos() - 2.0 * a) / (1.0 + a * a - 2.0 * a * x[0].cos())
    });
    let second = ScalarField::from_fn(grid, |x| {
        (1.0 - a * a) * x[0].sin() / (1.0 + a * a - 2.0 * a * x[0].cos())
    });
    ManifoldMap::new(VectorFieldMap::new(vec![first, second])?, SphereTarget::new(2)?)
}

/// A seeded tangent field along u, band-limited to 2 ≤ |ξ| ≤ 4 and
/// normalised to the requested sup-amplitude before projection (this
/// leaves `sup |φ| ≤ amplitude` after the tangent projection, which can
/// only shrink vectors).  Zero amplitude returns the zero field.
pub fn tangent_noise(u: &ManifoldMap, amplitude: f64, seed: u64) -> Result<VectorFieldMap> {
    let grid = &u.field.grid;
    if amplitude == 0.0 {
        return Ok(VectorFieldMap::zeros(grid, u.field.target_dim));
    }
    let components = (0..u.field.target_dim)
        .map(|i| {
            let raw = gaussian_random_field(grid, 2.0, seed.wrapping_add(i as u64))?;
            let mut spec = to_frequency(&raw);
            for (idx, xi) in grid.frequency_set.iter().enumerate() {
                let r = PeriodicGrid::frequency_norm(*xi);
                if !(2.0..=4.0).contains(&r) {
                    spec.coeffs[idx] = num_complex::Complex64::default();
                }
            }
            spec.from_frequency()
        })
        .collect::<Result<Vec<_>>>()?;
    let raw_field = VectorFieldMap::new(components)?;
    let sup = raw_field.magnitude().linf();
    if sup == 0.0 {
        return Err(Error::DivisionByZero {
            context: "band-limited noise vanished; grid has no modes with 2 <= |xi| <= 4".into(),
        });
    }
    projector_fields(u)?
        .tangent
        .matvec(&raw_field.scaled(amplitude / sup))
}

/// The equator map displaced by seeded tangent noise and retracted back
/// onto the sphere: the reproducible non-critical start used by flow
/// experiments.
pub fn perturbed_circle_map(
    grid: &PeriodicGrid,
    target_dim: usize,
    amplitude: f64,
    seed: u64,
) -> Result<ManifoldMap> {
    let base = circle_map(grid, target_dim)?;
    let noise = tangent_noise(&base, amplitude, seed)?;
    nearest_projection(&base.field.add(&noise)?)
}

/// The start described by a config: equator map into S^{target_dim−1}
/// perturbed at the configured amplitude and seed.
pub fn initial_map(config: &FlowConfig) -> Result<ManifoldMap> {
    perturbed_circle_map(
        &config.grid,
        config.target_dim,
        config.perturbation,
        config.seed,
    )
}

/// One projected-descent step with backtracking.
///
/// Starts from the configured base τ, halves (by the configured factor)
/// whenever the trial energy exceeds the current one *or* the trial
/// point cannot be retracted (a component passed too close to the
/// origin), and gives up with [`Error::StepFailure`] after
/// `max_backtracks` retries.  Acceptance compares energies exactly:
/// accepted traces are monotone with no tolerance.
pub fn flow_step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    config.grid.expect_same(&state.map.field.grid)?;
    let gradient = vector_fractional_laplacian(
        &state.map.field,
        state.map.field.grid.n as f64 / 2.0,
    )?;
    let mut tau = config.tau;
    for _attempt in 0..=config.max_backtracks {
        let trial = state.map.field.sub(&gradient.scaled(tau))?;
        match nearest_projection(&trial) {
            Ok(candidate) => {
                let trial_energy = energy(&candidate);
                if trial_energy <= state.energy {
                    let residual = el_residual(&candidate)?;
                    return Ok(FlowState {
                        map: candidate,
                        energy: trial_energy,
                        residual,
                        iteration: state.iteration + 1,
                        tau,
                    });
                }
            }
            Err(Error::NearZeroVector { .. }) => {}
            Err(other) => return Err(other),
        }
        tau *= config.backtracking_factor;
    }
    Err(Error::StepFailure {
        backtracks: config.max_backtracks,
        tau,
    })
}

/// Runs the flow from an explicit start until the residual tolerance or
/// the iteration budget is reached, recording one trace row per state
/// (row 0 is the start itself, so an already-critical start terminates
/// with a single row).
pub fn flow_run(start: &ManifoldMap, config: &FlowConfig) -> Result<FlowTrace> {
    config.validate()?;
    config.grid.expect_same(&start.field.grid)?;
    let mut state = FlowState::new(start.clone(), 0, config.tau)?;
    let mut rows = vec![TraceRow {
        iteration: 0,
        energy: state.energy,
        residual: state.residual,
        tau: config.tau,
    }];
    let mut converged = state.residual <= config.tolerance;
    while !converged && state.iteration < config.max_iterations {
        state = flow_step(&state, config)?;
        rows.push(TraceRow {
            iteration: state.iteration,
            energy: state.energy,
            residual: state.residual,
            tau: state.tau,
        });
        converged = state.residual <= config.tolerance;
    }
    Ok(FlowTrace {
        rows,
        final_state: state,
        converged,
    })
}

/// Central-difference check of the constrained energy gradient.
///
/// Projects `direction` to the tangent bundle along u, then returns
/// `(analytic, numeric)` where `analytic = 2⟨(−Δ)^{n/2}u, φ⟩_{L²}` and
/// `numeric = [E(Π(u + tφ)) − E(Π(u − tφ))] / 2t` — the derivative of
/// the energy through the same retracted variation class the flow
/// steps in.
pub fn energy_gradient_check(
    u: &ManifoldMap,
    direction: &VectorFieldMap,
    t: f64,
) -> Result<(f64, f64)> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::config(format!(
            "finite-difference width must be positive, got {t}"
        )));
    }
    let phi = projector_fields(u)?.tangent.matvec(direction)?;
    let full = vector_fractional_laplacian(&u.field, u.field.grid.n as f64 / 2.0)?;
    let analytic = 2.0 * full.l2_inner(&phi)?;
    let plus = nearest_projection(&u.field.add(&phi.scaled(t))?)?;
    let minus = nearest_projection(&u.field.sub(&phi.scaled(t))?)?;
    let numeric = (energy(&plus) - energy(&minus)) / (2.0 * t);
    Ok((analytic, numeric))
}
