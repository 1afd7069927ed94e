use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Planned 2-D FFT of size n x n built from two 1-D row passes and a
/// transpose. All methods are unnormalized: `inverse(forward(u)) = n^2 * u`.
///
/// The engine is strictly single-threaded; plans and scratch space are cached
/// per thread so repeated transforms of the same size are allocation-free.
pub struct Fft2 {
    n: usize,
    forward: std::sync::Arc<dyn Fft<f64>>,
    inverse: std::sync::Arc<dyn Fft<f64>>,
    scratch: RefCell<Vec<Complex64>>,
    transpose_buf: RefCell<Vec<Complex64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Rc<Fft2>>> = RefCell::new(HashMap::new());
}

/// Returns the cached 2-D FFT engine for size `n` (rows and columns).
pub fn fft2(n: usize) -> Rc<Fft2> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                let forward = planner.plan_fft_forward(n);
                let inverse = planner.plan_fft_inverse(n);
                let scratch_len = forward
                    .get_inplace_scratch_len()
                    .max(inverse.get_inplace_scratch_len());
                Rc::new(Fft2 {
                    n,
                    forward,
                    inverse,
                    scratch: RefCell::new(vec![Complex64::new(0.0, 0.0); scratch_len]),
                    transpose_buf: RefCell::new(vec![Complex64::new(0.0, 0.0); n * n]),
                })
            })
            .clone()
    })
}

/// Out-of-place blocked transpose of an n x n row-major matrix.
fn transpose(n: usize, src: &[Complex64], dst: &mut [Complex64]) {
    const B: usize = 32;
    for jb in (0..n).step_by(B) {
        for ib in (0..n).step_by(B) {
            for j in jb..(jb + B).min(n) {
                for i in ib..(ib + B).min(n) {
                    dst[i * n + j] = src[j * n + i];
                }
            }
        }
    }
}

impl Fft2 {
    pub fn n(&self) -> usize {
        self.n
    }

    fn rows(&self, plan: &dyn Fft<f64>, data: &mut [Complex64]) {
        let mut scratch = self.scratch.borrow_mut();
        plan.process_with_scratch(data, &mut scratch);
    }

    fn transpose_inplace(&self, data: &mut [Complex64]) {
        let mut buf = self.transpose_buf.borrow_mut();
        transpose(self.n, data, &mut buf);
        data.copy_from_slice(&buf);
    }

    /// Forward transform leaving the spectrum in *transposed* layout:
    /// `data[kx*n + ky]`. One transpose cheaper than [`Self::forward`]; valid
    /// on its own whenever the consumer is layout-symmetric (pointwise
    /// multipliers with m(kx,ky) = m(ky,kx), convolutions, Parseval sums).
    pub fn forward_transposed(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n * self.n);
        self.rows(self.forward.as_ref(), data);
        self.transpose_inplace(data);
        self.rows(self.forward.as_ref(), data);
    }

    /// Inverse of [`Self::forward_transposed`] (up to the n^2 factor).
    pub fn inverse_transposed(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n * self.n);
        self.rows(self.inverse.as_ref(), data);
        self.transpose_inplace(data);
        self.rows(self.inverse.as_ref(), data);
    }

    /// Forward transform in standard layout `data[ky*n + kx]`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward_transposed(data);
        self.transpose_inplace(data);
    }

    /// Inverse transform from standard layout (up to the n^2 factor).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transpose_inplace(data);
        self.inverse_transposed(data);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Brute-force 2-D DFT used as the ground truth for the fast path.
    fn dft2(n: usize, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for ky in 0..n {
            for kx in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    for i in 0..n {
                        let phase = -2.0 * PI * (kx * i + ky * j) as f64 / n as f64;
                        acc += u[j * n + i] * Complex64::from_polar(1.0, phase);
                    }
                }
                out[ky * n + kx] = acc;
            }
        }
        out
    }

    fn sample_field(n: usize) -> Vec<Complex64> {
        (0..n * n)
            .map(|t| {
                let a = (t as f64 * 0.37).sin() + 0.2;
                let b = (t as f64 * 1.13).cos() - 0.1;
                Complex64::new(a, b)
            })
            .collect()
    }

    #[test]
    fn forward_matches_brute_force_dft() {
        let n = 8;
        let u = sample_field(n);
        let want = dft2(n, &u);
        let mut got = u.clone();
        fft2(n).forward(&mut got);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn transposed_layout_is_transpose_of_standard() {
        let n = 16;
        let u = sample_field(n);
        let mut std_layout = u.clone();
        fft2(n).forward(&mut std_layout);
        let mut tr = u.clone();
        fft2(n).forward_transposed(&mut tr);
        for ky in 0..n {
            for kx in 0..n {
                let d = (std_layout[ky * n + kx] - tr[kx * n + ky]).norm();
                assert!(d < 1e-10);
            }
        }
    }

    #[test]
    fn roundtrip_scales_by_n_squared() {
        let n = 32;
        let u = sample_field(n);
        let mut buf = u.clone();
        let engine = fft2(n);
        engine.forward_transposed(&mut buf);
        engine.inverse_transposed(&mut buf);
        let scale = (n * n) as f64;
        for (b, orig) in buf.iter().zip(&u) {
            assert!((b / scale - orig).norm() < 1e-12);
        }
    }
}
