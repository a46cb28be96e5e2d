//! Multi-dimensional FFT built from 1-d transforms.
//!
//! Convention (fixed once, everywhere): the forward transform is the plain
//! unnormalised DFT, c(ξ) = Σ_x f(x) e^{−i⟨ξ, x⟩} over grid samples, and
//! the inverse carries the 1/N^n factor. With samples at x = 2π·j/N this
//! is exactly the textbook DFT in each axis, so a trigonometric polynomial
//! with integer frequencies is represented exactly: c(ξ) = N^n·a_ξ for
//! f = Σ a_ξ e^{i⟨ξ,x⟩} band-limited to the lattice.
//!
//! Plans are cached in one global planner; the transforms themselves run
//! on caller-owned buffers, so concurrent use only contends on the
//! (cheap, cached) plan lookup.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

use crate::grid::PeriodicGrid;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().expect("fft planner poisoned");
    if inverse {
        p.plan_fft_inverse(len)
    } else {
        p.plan_fft_forward(len)
    }
}

/// One 1-d transform along `axis` of the row-major hypercube `data`.
fn transform_axis(data: &mut [Complex64], np: usize, n_axes: usize, axis: usize, inverse: bool) {
    let fft = plan(np, inverse);
    if axis == n_axes - 1 {
        // Contiguous lines: rustfft batches over chunks of its length.
        fft.process(data);
        return;
    }
    // Strided lines: gather into scratch, transform, scatter back.
    let stride = np.pow((n_axes - 1 - axis) as u32);
    let block = stride * np;
    let mut line = vec![Complex64::default(); np];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let n_blocks = data.len() / block;
    for b in 0..n_blocks {
        let base = b * block;
        for offset in 0..stride {
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = data[base + offset + k * stride];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (k, value) in line.iter().enumerate() {
                data[base + offset + k * stride] = *value;
            }
        }
    }
}

/// In-place forward DFT over every axis (unnormalised).
pub fn forward(grid: &PeriodicGrid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    for axis in 0..grid.n {
        transform_axis(data, grid.points_per_axis, grid.n, axis, false);
    }
}

/// In-place inverse DFT over every axis, including the 1/N^n factor.
pub fn inverse(grid: &PeriodicGrid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    for axis in 0..grid.n {
        transform_axis(data, grid.points_per_axis, grid.n, axis, true);
    }
    let scale = 1.0 / grid.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TWO_PI;

    #[test]
    fn single_mode_lands_on_its_lattice_coefficient() {
        let grid = PeriodicGrid::new(3, 8).unwrap();
        // f = exp(i(x1 + 2x2 - 3x3)) sampled on the grid.
        let mut data: Vec<Complex64> = (0..grid.len())
            .map(|idx| {
                let x = grid.point(idx);
                (Complex64::new(0.0, x[0] + 2.0 * x[1] - 3.0 * x[2])).exp()
            })
            .collect();
        forward(&grid, &mut data);
        let hot = grid.index_of_frequency([1, 2, -3]);
        for (idx, c) in data.iter().enumerate() {
            let expected = if idx == hot { grid.len() as f64 } else { 0.0 };
            assert!(
                (c - Complex64::new(expected, 0.0)).norm() < 1e-9 * grid.len() as f64,
                "idx {idx}: {c}"
            );
        }
    }

    #[test]
    fn round_trip_is_identity_to_machine_precision() {
        for (n, np) in [(1usize, 64usize), (3, 8)] {
            let grid = PeriodicGrid::new(n, np).unwrap();
            let original: Vec<Complex64> = (0..grid.len())
                .map(|i| {
                    let x = grid.point(i);
                    Complex64::new(
                        (3.0 * x[0]).sin() + 0.3 * (x[1] + 0.5).cos(),
                        (2.0 * x[0] - x[2]).cos(),
                    )
                })
                .collect();
            let mut data = original.clone();
            forward(&grid, &mut data);
            inverse(&grid, &mut data);
            let scale: f64 = original.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in original.iter().zip(&data) {
                assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn forward_matches_direct_dft_on_a_small_grid() {
        let grid = PeriodicGrid::new(1, 8).unwrap();
        let samples: Vec<Complex64> = (0..8)
            .map(|i| Complex64::new((i * i) as f64 * 0.1 - 1.0, (i as f64).cos()))
            .collect();
        let mut data = samples.clone();
        forward(&grid, &mut data);
        for (k, xi) in grid.frequency_set.iter().enumerate() {
            let mut direct = Complex64::default();
            for (j, s) in samples.iter().enumerate() {
                let phase = -TWO_PI * (xi[0] as f64) * (j as f64) / 8.0;
                direct += s * Complex64::new(0.0, phase).exp();
            }
            assert!((direct - data[k]).norm() < 1e-10);
        }
    }
}
