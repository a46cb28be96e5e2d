//! Spectral toolkit for fractional operators and sphere-valued maps on
//! the torus.
//!
//! The crate discretises [0, 2π)^n (n = 1 or 3) and provides, layer by
//! layer:
//!
//! * exact Fourier-multiplier calculus — fractional Laplacians (−Δ)^s,
//!   Riesz transforms, coordinate derivatives ([`spectral`]);
//! * the dyadic Littlewood–Paley ladder, shell/low-pass projections,
//!   paraproducts, and kernel/maximal-function comparisons ([`dyadic`]);
//! * rearrangement-based Lorentz norms, homogeneous Sobolev/Besov/
//!   Triebel–Lizorkin/Hardy/BMO functionals ([`norms`]);
//! * exterior algebra over ℝ^m with interior multiplication, Hodge star
//!   and frame projectors ([`grassmann`]);
//! * sphere-valued maps, nearest-point projection, tangent/normal
//!   projector fields and criticality residuals ([`manifold`]);
//! * three-term commutators of fractional Laplacians with function
//!   multiplication, their Taylor-coefficient machinery, and a seeded
//!   estimate-ratio harness ([`commutator`], [`taylor`], [`estimates`]);
//! * the constrained gradient flow for half-Laplacian harmonic maps into
//!   spheres and the antisymmetric-potential first-order system
//!   ([`flow`], [`system`]);
//! * deterministic experiment configuration, suite running and report
//!   I/O ([`suite`], [`snapshot`]).
//!
//! Everything is pure and deterministic: random inputs come only from
//! seeded generators, and the report writers emit byte-stable output.

pub mod error;
pub mod tolerances;

pub mod commutator;
pub mod dyadic;
pub mod fft;
pub mod field;
pub mod flow;
pub mod grassmann;
pub mod grid;
pub mod manifold;
pub mod norms;
pub mod random;
pub mod spectral;
pub mod system;
pub mod taylor;

pub use commutator::{
    half_order_commutator, omega_fields, op_f_structure, op_m1, op_m2, op_r_matrix,
    op_r_remainder, op_s1, op_t, op_t_matrix, op_t_star, op_t_star_matrix,
    op_t_star_paraproduct_pieces, projector_rewriting_residuals, pseudo_commutator,
    structure_equation_rhs,
};
pub use dyadic::{build_partition, DyadicPartition, ParaproductKind, SupportReport};
pub use error::{Error, Result};
pub use grassmann::{hodge_star, interior_mult, projector_from_frame, wedge, MultiVector};
pub use manifold::{
    gauss_map, nearest_projection, projector_fields, tangency_residual, wedge_residual,
    ManifoldMap, ProjectorField, SphereTarget,
};
pub use norms::{
    besov_norm, bmo_norm, decreasing_rearrangement, hardy_norm, lorentz_holder_check,
    lorentz_norm, lp_norm, maximal_function, sobolev_lorentz_norm, sobolev_norm, triebel_norm,
    NormReport, Rearrangement,
};
pub use flow::{
    blaschke_map, circle_map, default_step, el_residual, energy, energy_gradient_check,
    flow_run, flow_step, initial_map, perturbed_circle_map, tangent_noise, tension_field,
    vector_energy, FlowConfig, FlowState, FlowTrace, TraceRow,
};
pub use system::{
    assemble_system, structure_equation_residual, system_defect, system_residual,
    PotentialSystem,
};
pub use field::{
    block_matrix, from_frequency, stack, to_frequency, MatrixField, ScalarField, SpectralField,
    VectorFieldMap,
};
pub use grid::PeriodicGrid;
pub use taylor::{direct_symbol_difference, taylor_coefficients, TaylorCoefficients, TaylorTerm};
pub use random::gaussian_random_field;
pub use spectral::{
    apply_multiplier, fractional_laplacian, gradient, partial_derivative, riesz_contraction,
    riesz_transform, FourierMultiplier,
};
