//! Forward and inverse Fourier transforms on a finite abelian group.
//!
//! Convention: `f̂(χ) = Σ_x f(x) χ(x)` with `χ(x) = exp(+2πi a·x)`, and
//! `f(x) = N⁻¹ Σ_χ f̂(χ) conj(χ(x))`.
//!
//! The fast path runs a 1-D DFT along each cyclic axis. The direct path is an
//! `O(N²)` sum over a table of roots of unity and is kept as the oracle.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::group::{root_of_unity, Group};

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, positive_exponent: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((len, positive_exponent))
            .or_insert_with(|| {
                // rustfft's "Inverse" is the unnormalized e^{+2πi jk/n} sum.
                let dir = if positive_exponent {
                    FftDirection::Inverse
                } else {
                    FftDirection::Forward
                };
                planner.plan_fft(len, dir)
            })
            .clone()
    })
}

/// Applies the separable unnormalized DFT in place, axis by axis.
fn per_axis_dft(group: &Group, data: &mut [Complex64], positive_exponent: bool) {
    let n_total = group.order();
    debug_assert_eq!(data.len(), n_total);
    for (&n, &stride) in group.cyclic_orders().iter().zip(group.strides()) {
        if n == 1 {
            continue;
        }
        let fft = plan(n, positive_exponent);
        if stride == 1 {
            // Contiguous lines: rustfft handles back-to-back batches.
            fft.process(data);
            continue;
        }
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let block = n * stride;
        for start in (0..n_total).step_by(block) {
            for inner in 0..stride {
                let base = start + inner;
                for (t, v) in line.iter_mut().enumerate() {
                    *v = data[base + t * stride];
                }
                fft.process(&mut line);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
}

/// Fast forward transform: `out[χ] = Σ_x values[x] χ(x)`.
pub fn forward(group: &Group, values: &[Complex64]) -> Vec<Complex64> {
    let mut data = values.to_vec();
    per_axis_dft(group, &mut data, true);
    data
}

/// Fast inverse transform: `out[x] = N⁻¹ Σ_χ coeffs[χ] conj(χ(x))`.
pub fn inverse(group: &Group, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut data = coeffs.to_vec();
    per_axis_dft(group, &mut data, false);
    let scale = 1.0 / group.order() as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

fn roots_table(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| root_of_unity(k, n)).collect()
}

/// Direct `O(N²)` forward transform.
pub fn forward_direct(group: &Group, values: &[Complex64]) -> Vec<Complex64> {
    let n = group.order();
    let roots = roots_table(n);
    (0..n)
        .map(|c| {
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
                .map(|(x, v)| v * roots[group.phase(c, x)])
                .sum()
        })
        .collect()
}

/// Direct `O(N²)` inverse transform.
pub fn inverse_direct(group: &Group, coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = group.order();
    let roots = roots_table(n);
    (0..n)
        .map(|x| {
            let s: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(c, v)| v * roots[group.phase(c, x)].conj())
                .sum();
            s / n as f64
        })
        .collect()
}
