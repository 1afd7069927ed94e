use crate::error::{Error, Result};
use crate::fft::{fft2, Fft2};
use crate::field::RealField;
use crate::grid::Grid;
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Convolution kernels on R^2, truncated at |x| < L/2.
///
/// The truncation is strict: lattice offsets with |x| exactly L/2 (four
/// axis-aligned points, a measure-zero set of the continuum disc) are
/// excluded so that every retained offset is reachable in both directions
/// from the box center. This makes the constant-density identity
/// `(K * 1)(0) = power_kernel_box_integral` exact rather than off by the
/// rim points that fall outside the half-open box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// |x|^(-gamma) with 0 < gamma < 2 (integrable singularity in 2-D).
    Power { gamma: f64 },
    /// |x|^(-1).
    InverseDistance,
    /// The vector kernel x/|x|; both components are produced per call.
    Direction,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        if let KernelSpec::Power { gamma } = self {
            if !(gamma.is_finite() && *gamma > 0.0 && *gamma < 2.0) {
                return Err(Error::InvalidArgument(format!(
                    "power kernel exponent must lie in (0, 2), got {gamma}"
                )));
            }
        }
        Ok(())
    }
}

const SUBCELL: usize = 16;

/// Average of `eval` over one grid cell [-h/2, h/2]^2 by midpoint quadrature
/// on a SUBCELL x SUBCELL refinement. Midpoints never hit the cell center,
/// so integrable singularities are handled without special cases.
fn cell_average(h: f64, eval: impl Fn(f64, f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for a in 0..SUBCELL {
        let dx = ((a as f64 + 0.5) / SUBCELL as f64 - 0.5) * h;
        for b in 0..SUBCELL {
            let dy = ((b as f64 + 0.5) / SUBCELL as f64 - 0.5) * h;
            acc += eval(dx, dy);
        }
    }
    acc / (SUBCELL * SUBCELL) as f64
}

/// Precomputed zero-padded transform of a truncated kernel on a fixed grid.
///
/// Padding to 2n per axis makes the circular FFT product a *linear*
/// convolution of box-supported data: offsets range over [-(n-1), n-1] per
/// axis and never wrap. The kernel is sampled pointwise, truncated at
/// |x| < L/2, and the singular x = 0 cell carries its cell average.
pub struct TruncatedConvolver {
    grid: Grid,
    spec: KernelSpec,
    m: usize,
    kernel_hat: Vec<Complex64>,
    engine: Rc<Fft2>,
    work: RefCell<Vec<Complex64>>,
}

thread_local! {
    static CONVOLVERS: RefCell<HashMap<(usize, u64, u8, u64), Rc<TruncatedConvolver>>> =
        RefCell::new(HashMap::new());
}

/// Returns the cached convolver for `(grid, spec)`.
pub fn convolver(grid: Grid, spec: KernelSpec) -> Result<Rc<TruncatedConvolver>> {
    spec.validate()?;
    let (kind, gamma_bits) = match spec {
        KernelSpec::Power { gamma } => (0u8, gamma.to_bits()),
        KernelSpec::InverseDistance => (1, 0),
        KernelSpec::Direction => (2, 0),
    };
    let key = (grid.n(), grid.box_length().to_bits(), kind, gamma_bits);
    CONVOLVERS.with(|cache| {
        if let Some(c) = cache.borrow().get(&key) {
            return Ok(c.clone());
        }
        let built = Rc::new(TruncatedConvolver::build(grid, spec));
        cache.borrow_mut().insert(key, built.clone());
        Ok(built)
    })
}

impl TruncatedConvolver {
    fn build(grid: Grid, spec: KernelSpec) -> TruncatedConvolver {
        let n = grid.n();
        let m = 2 * n;
        let h = grid.spacing();
        let cutoff = 0.5 * grid.box_length();

        // Direction components are packed as K_x + i*K_y so a single real
        // input transform yields both convolutions.
        let eval = |dx: f64, dy: f64| -> Complex64 {
            let r = (dx * dx + dy * dy).sqrt();
            match spec {
                KernelSpec::Power { gamma } => Complex64::new(r.powf(-gamma), 0.0),
                KernelSpec::InverseDistance => Complex64::new(1.0 / r, 0.0),
                KernelSpec::Direction => Complex64::new(dx / r, dy / r),
            }
        };
        let singular = Complex64::new(
            cell_average(h, |dx, dy| eval(dx, dy).re),
            cell_average(h, |dx, dy| eval(dx, dy).im),
        );

        let mut table = vec![Complex64::new(0.0, 0.0); m * m];
        let offset = |slot: usize| -> Option<isize> {
            // Slot -> signed offset; the unused +-n slot stays zero.
            if slot < n {
                Some(slot as isize)
            } else if slot > n {
                Some(slot as isize - m as isize)
            } else {
                None
            }
        };
        for sj in 0..m {
            let Some(dj) = offset(sj) else { continue };
            let dy = dj as f64 * h;
            for si in 0..m {
                let Some(di) = offset(si) else { continue };
                let dx = di as f64 * h;
                let v = if di == 0 && dj == 0 {
                    singular
                } else if (dx * dx + dy * dy).sqrt() < cutoff {
                    eval(dx, dy)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                table[sj * m + si] = v;
            }
        }

        let engine = fft2(m);
        engine.forward_transposed(&mut table);
        TruncatedConvolver {
            grid,
            spec,
            m,
            kernel_hat: table,
            engine,
            work: RefCell::new(vec![Complex64::new(0.0, 0.0); m * m]),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn spec(&self) -> KernelSpec {
        self.spec
    }

    /// Shared FFT pipeline: zero-pad, transform, multiply by the kernel
    /// transform, invert. Returns the padded complex result buffer.
    fn convolve_raw(&self, f: &RealField) -> Result<std::cell::RefMut<'_, Vec<Complex64>>> {
        if f.grid() != self.grid {
            return Err(Error::InvalidArgument(
                "field grid does not match convolver grid".into(),
            ));
        }
        let n = self.grid.n();
        let m = self.m;
        let mut work = self.work.borrow_mut();
        work.fill(Complex64::new(0.0, 0.0));
        for j in 0..n {
            let src = &f.values()[j * n..(j + 1) * n];
            let dst = &mut work[j * m..j * m + n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d = Complex64::new(*s, 0.0);
            }
        }
        self.engine.forward_transposed(&mut work);
        for (w, k) in work.iter_mut().zip(&self.kernel_hat) {
            *w *= k;
        }
        self.engine.inverse_transposed(&mut work);
        let scale = self.grid.cell_area() / (m * m) as f64;
        for w in work.iter_mut() {
            *w *= scale;
        }
        Ok(work)
    }

    /// Scalar convolution `h^2 sum_y K(x-y) f(y)` for the scalar kernels.
    pub fn apply(&self, f: &RealField) -> Result<RealField> {
        if matches!(self.spec, KernelSpec::Direction) {
            return Err(Error::InvalidArgument(
                "direction kernel is vector-valued; use apply_vector".into(),
            ));
        }
        let n = self.grid.n();
        let m = self.m;
        let work = self.convolve_raw(f)?;
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                out.push(work[j * m + i].re);
            }
        }
        RealField::from_values(self.grid, out)
    }

    /// Both components of the direction-kernel convolution.
    pub fn apply_vector(&self, f: &RealField) -> Result<(RealField, RealField)> {
        if !matches!(self.spec, KernelSpec::Direction) {
            return Err(Error::InvalidArgument(
                "apply_vector requires the direction kernel".into(),
            ));
        }
        let n = self.grid.n();
        let m = self.m;
        let work = self.convolve_raw(f)?;
        let mut out_x = Vec::with_capacity(n * n);
        let mut out_y = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let z = work[j * m + i];
                out_x.push(z.re);
                out_y.push(z.im);
            }
        }
        Ok((
            RealField::from_values(self.grid, out_x)?,
            RealField::from_values(self.grid, out_y)?,
        ))
    }
}

/// One-shot truncated-kernel convolution (cached engine underneath).
pub fn convolve_truncated(f: &RealField, spec: KernelSpec) -> Result<RealField> {
    convolver(f.grid(), spec)?.apply(f)
}

/// One-shot direction-kernel convolution.
pub fn convolve_direction(f: &RealField) -> Result<(RealField, RealField)> {
    convolver(f.grid(), KernelSpec::Direction)?.apply_vector(f)
}

/// Integral of the truncated power kernel over the offset lattice,
/// `h^2 * sum_{|delta| < L/2} |delta|^(-gamma)` with the singular cell
/// averaged. This is exactly the constant potential seen at the box center
/// by a unit-density field; computed by direct summation, no FFT involved.
pub fn power_kernel_box_integral(grid: Grid, gamma: f64) -> Result<f64> {
    KernelSpec::Power { gamma }.validate()?;
    let n = grid.n() as isize;
    let h = grid.spacing();
    let cutoff = 0.5 * grid.box_length();
    let mut acc = cell_average(h, |dx, dy| (dx * dx + dy * dy).sqrt().powf(-gamma));
    for dj in -(n - 1)..n {
        for di in -(n - 1)..n {
            if di == 0 && dj == 0 {
                continue;
            }
            let (dx, dy) = (di as f64 * h, dj as f64 * h);
            let r = (dx * dx + dy * dy).sqrt();
            if r < cutoff {
                acc += r.powf(-gamma);
            }
        }
    }
    Ok(acc * grid.cell_area())
}
