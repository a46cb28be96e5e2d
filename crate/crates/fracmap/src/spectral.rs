//! Fourier multipliers: fractional Laplacians, Riesz transforms,
//! coordinate derivatives.
//!
//! A [`FourierMultiplier`] is a symbol σ on the frequency lattice plus an
//! explicit value for the zero mode (0 for every homogeneous symbol of
//! nonzero order — |ξ|^{2s} and iξ_k/|ξ| are singular there, and the
//! mean of a field is the discrete stand-in for the constants that
//! homogeneous spaces quotient out).
//!
//! At self-conjugate lattice points (every component in {0, −N/2}) a real
//! field's coefficient is real, so a symbol can only act there through
//! its real part; `apply_multiplier` projects the symbol accordingly.
//! For even symbols this is a no-op; for odd ones (Riesz, odd-order
//! derivatives) it zeroes the Nyquist content, which is the unique choice
//! that keeps real fields real and the operator linear. Seeded random
//! fields carry no energy at those points, so inverse identities like
//! contraction∘transform = id hold to full precision on them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    to_frequency, MatrixField, ScalarField, SpectralField, VectorFieldMap,
};
use crate::grid::PeriodicGrid;
use crate::tolerances;

/// Maximum total order accepted by [`partial_derivative`].
pub const MAX_DERIVATIVE_ORDER: usize = 8;

pub struct FourierMultiplier {
    /// Human-readable tag used in diagnostics.
    pub name: String,
    /// σ(ξ) on the integer lattice (never called at ξ = 0).
    pub symbol: Box<dyn Fn([i64; 3]) -> Complex64 + Send + Sync>,
    /// Value used at ξ = 0.
    pub zero_mode_value: Complex64,
}

impl FourierMultiplier {
    pub fn new(
        name: impl Into<String>,
        zero_mode_value: Complex64,
        symbol: impl Fn([i64; 3]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        FourierMultiplier {
            name: name.into(),
            symbol: Box::new(symbol),
            zero_mode_value,
        }
    }

    pub fn identity() -> Self {
        FourierMultiplier::new("identity", Complex64::new(1.0, 0.0), |_| {
            Complex64::new(1.0, 0.0)
        })
    }

    /// Symbol |ξ|^{2s} of (−Δ)^s.
    pub fn fractional_laplacian(s: f64) -> Self {
        FourierMultiplier::new(format!("(-lap)^{s}"), Complex64::default(), move |xi| {
            Complex64::new(PeriodicGrid::frequency_norm(xi).powf(2.0 * s), 0.0)
        })
    }

    /// Symbol iξ_k/|ξ| of the k-th Riesz transform.
    pub fn riesz(k: usize) -> Self {
        FourierMultiplier::new(format!("riesz_{k}"), Complex64::default(), move |xi| {
            Complex64::new(0.0, xi[k] as f64 / PeriodicGrid::frequency_norm(xi))
        })
    }

    /// Symbol −iξ_k/|ξ|, the k-th component of the contraction that
    /// left-inverts the Riesz transform.
    pub fn riesz_conjugate(k: usize) -> Self {
        FourierMultiplier::new(format!("riesz_bar_{k}"), Complex64::default(), move |xi| {
            Complex64::new(0.0, -(xi[k] as f64) / PeriodicGrid::frequency_norm(xi))
        })
    }

    /// Symbol Π_k (iξ_k)^{α_k} of ∂^α.
    pub fn partial(alpha: [usize; 3]) -> Self {
        FourierMultiplier::new(
            format!("d^{alpha:?}"),
            Complex64::default(),
            move |xi| {
                let mut acc = Complex64::new(1.0, 0.0);
                for (a, &x) in alpha.iter().zip(xi.iter()) {
                    acc *= Complex64::new(0.0, x as f64).powu(*a as u32);
                }
                acc
            },
        )
    }

    /// σ symmetrised across the lattice conjugate pair so a real field stays
    /// real.  Off the Nyquist hyperplanes the partner index holds exactly −ξ
    /// and an honest symbol (σ(−ξ) = conj σ(ξ)) passes through unchanged; on
    /// them the aliased partner carries the same Nyquist components, so the
    /// averaging keeps the even part of σ and drops the odd part (a Riesz
    /// component along a Nyquist axis acts as zero there).
    fn effective_symbol(&self, grid: &PeriodicGrid, idx: usize) -> Complex64 {
        let xi = grid.frequency_set[idx];
        if xi == [0, 0, 0] {
            return self.zero_mode_value;
        }
        let partner = grid.conjugate_index(idx);
        if partner == idx {
            return Complex64::new((self.symbol)(xi).re, 0.0);
        }
        let mirrored = (self.symbol)(grid.frequency_set[partner]);
        0.5 * ((self.symbol)(xi) + mirrored.conj())
    }

    /// Largest |σ| over the nonzero lattice (used by order-zero checks).
    pub fn sup_modulus(&self, grid: &PeriodicGrid) -> f64 {
        (1..grid.len())
            .map(|idx| self.effective_symbol(grid, idx).norm())
            .fold(self.zero_mode_value.norm(), f64::max)
    }
}

/// Multiplies a spectrum by σ in place (with the real-field symmetrisation
/// of [`FourierMultiplier::effective_symbol`]).
pub fn apply_to_spectrum(spec: &mut SpectralField, mult: &FourierMultiplier) {
    for idx in 0..spec.coeffs.len() {
        let factor = mult.effective_symbol(&spec.grid, idx);
        spec.coeffs[idx] *= factor;
    }
}

fn spectrum_max(spec: &SpectralField) -> f64 {
    spec.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// σ(D) f, with the Hermitian-symmetry check of `from_frequency` standing
/// guard over the output's realness.  The check is anchored at
/// sup|σ|·max|ĉ|, the largest magnitude the output could honestly carry, so
/// a symbol that annihilates the big coefficients does not leave the check
/// comparing roundoff against roundoff.
pub fn apply_multiplier(f: &ScalarField, mult: &FourierMultiplier) -> Result<ScalarField> {
    let mut spec = to_frequency(f);
    let anchor = mult.sup_modulus(&f.grid) * spectrum_max(&spec);
    apply_to_spectrum(&mut spec, mult);
    crate::field::from_frequency_scaled(&spec, anchor)
}

fn expect_mean_zero_spectrum(spec: &SpectralField) -> Result<()> {
    let scale: f64 = spec.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let c0 = spec.coeffs[0].norm();
    if c0 > tolerances::MEAN_ZERO * scale {
        let nn = spec.grid.len() as f64;
        return Err(Error::MeanNotZero {
            mean: c0 / nn,
            limit: tolerances::MEAN_ZERO * scale / nn,
        });
    }
    Ok(())
}

/// (−Δ)^s f. Negative orders demand a mean-zero field.
pub fn fractional_laplacian(f: &ScalarField, s: f64) -> Result<ScalarField> {
    let mut spec = to_frequency(f);
    if s < 0.0 {
        expect_mean_zero_spectrum(&spec)?;
    }
    let mult = FourierMultiplier::fractional_laplacian(s);
    let anchor = mult.sup_modulus(&f.grid) * spectrum_max(&spec);
    apply_to_spectrum(&mut spec, &mult);
    crate::field::from_frequency_scaled(&spec, anchor)
}

/// The n Riesz transforms R_k f, k = 0..n. The zero mode is annihilated.
pub fn riesz_transform(f: &ScalarField) -> Result<VectorFieldMap> {
    let spec = to_frequency(f);
    let anchor = spectrum_max(&spec); // Riesz symbols have modulus ≤ 1
    let mut components = Vec::with_capacity(f.grid.n);
    for k in 0..f.grid.n {
        let mut s = spec.clone();
        apply_to_spectrum(&mut s, &FourierMultiplier::riesz(k));
        components.push(crate::field::from_frequency_scaled(&s, anchor)?);
    }
    VectorFieldMap::new(components)
}

/// Σ_k (−iξ_k/|ξ|) ĝ_k: the contraction sending the Riesz image of a
/// mean-zero scalar back to the scalar.
pub fn riesz_contraction(g: &VectorFieldMap) -> Result<ScalarField> {
    if g.target_dim != g.grid.n {
        return Err(Error::DimensionMismatch {
            left: g.grid.n,
            right: g.target_dim,
        });
    }
    let mut acc = SpectralField::zeros(&g.grid);
    let mut anchor = 0.0;
    for (k, comp) in g.components.iter().enumerate() {
        g.grid.expect_same(&comp.grid)?;
        let mut s = to_frequency(comp);
        anchor += spectrum_max(&s); // each symbol has modulus ≤ 1
        apply_to_spectrum(&mut s, &FourierMultiplier::riesz_conjugate(k));
        for (a, b) in acc.coeffs.iter_mut().zip(&s.coeffs) {
            *a += b;
        }
    }
    crate::field::from_frequency_scaled(&acc, anchor)
}

/// ∂^α f via the symbol Π (iξ_k)^{α_k}; total order capped at 8.
pub fn partial_derivative(f: &ScalarField, alpha: [usize; 3]) -> Result<ScalarField> {
    let order: usize = alpha.iter().sum();
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::OrderTooHigh {
            order,
            max: MAX_DERIVATIVE_ORDER,
        });
    }
    apply_multiplier(f, &FourierMultiplier::partial(alpha))
}

/// (−Δ)^s applied to every component of a vector-valued map.
pub fn vector_fractional_laplacian(v: &VectorFieldMap, s: f64) -> Result<VectorFieldMap> {
    v.map_components(|c| fractional_laplacian(c, s))
}

/// (−Δ)^s applied to every entry of a matrix field.
pub fn matrix_fractional_laplacian(m: &MatrixField, s: f64) -> Result<MatrixField> {
    m.map_entries(|e| fractional_laplacian(e, s))
}

/// The spatial gradient as an n-component map.
pub fn gradient(f: &ScalarField) -> Result<VectorFieldMap> {
    let mut components = Vec::with_capacity(f.grid.n);
    for k in 0..f.grid.n {
        let mut alpha = [0usize; 3];
        alpha[k] = 1;
        components.push(partial_derivative(f, alpha)?);
    }
    VectorFieldMap::new(components)
}
