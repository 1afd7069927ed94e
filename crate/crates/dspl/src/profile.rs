use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use num_complex::Complex64;

/// Boosted Gaussian `A * exp(i v.x) * exp(-|x|^2 / (2 w^2))`.
pub fn gaussian(grid: Grid, amplitude: f64, width: f64, boost: [f64; 2]) -> Result<Field> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gaussian width must be positive, got {width}"
        )));
    }
    if !amplitude.is_finite() || !boost.iter().all(|b| b.is_finite()) {
        return Err(Error::InvalidArgument(
            "gaussian amplitude/boost must be finite".into(),
        ));
    }
    let inv_2w2 = 0.5 / (width * width);
    Ok(Field::from_fn(grid, |x, y| {
        let r2 = x * x + y * y;
        Complex64::from_polar(amplitude * (-r2 * inv_2w2).exp(), boost[0] * x + boost[1] * y)
    }))
}

/// Plane wave `A * exp(i k.x)` with `k = 2*pi*(mx, my)/L` exactly on the
/// frequency lattice; `mode` gives the integer mode numbers.
pub fn plane_wave(grid: Grid, amplitude: f64, mode: [i64; 2]) -> Result<Field> {
    if !amplitude.is_finite() {
        return Err(Error::InvalidArgument("amplitude must be finite".into()));
    }
    let half_n = (grid.n() / 2) as i64;
    for m in mode {
        if m < -half_n || m >= half_n {
            return Err(Error::InvalidArgument(format!(
                "plane-wave mode {m} outside representable range [{}, {})",
                -half_n, half_n
            )));
        }
    }
    let k = wave_vector(grid, mode);
    Ok(Field::from_fn(grid, |x, y| {
        Complex64::from_polar(amplitude, k[0] * x + k[1] * y)
    }))
}

/// Wave vector of a lattice mode.
pub fn wave_vector(grid: Grid, mode: [i64; 2]) -> [f64; 2] {
    let c = 2.0 * std::f64::consts::PI / grid.box_length();
    [c * mode[0] as f64, c * mode[1] as f64]
}

/// Compactly supported bump `A * exp(-1/(1-|x/R|^2))` on |x| < R, zero
/// outside. Smooth, compact support; the default pairing test function.
pub fn bump(grid: Grid, amplitude: f64, radius: f64) -> Result<Field> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bump radius must be positive, got {radius}"
        )));
    }
    if !amplitude.is_finite() {
        return Err(Error::InvalidArgument("amplitude must be finite".into()));
    }
    let r2 = radius * radius;
    Ok(Field::from_fn(grid, |x, y| {
        let q = (x * x + y * y) / r2;
        if q < 1.0 {
            Complex64::new(amplitude * (-1.0 / (1.0 - q)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lebesgue_norm;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_mass_matches_closed_form() {
        // ||A exp(-|x|^2/(2 w^2))||_L2^2 = A^2 * pi * w^2.
        let g = Grid::new(128, 40.0).unwrap();
        let f = gaussian(g, 1.3, 1.7, [0.4, -0.2]).unwrap();
        let mass = lebesgue_norm(&f, 2.0).unwrap().powi(2);
        let want = 1.3f64.powi(2) * PI * 1.7f64.powi(2);
        assert!((mass - want).abs() < 1e-10 * want);
    }

    #[test]
    fn plane_wave_is_single_lattice_mode() {
        let g = Grid::new(16, 5.0).unwrap();
        let f = plane_wave(g, 0.7, [3, -2]).unwrap();
        let spec = crate::spectral::transform(&f);
        let mut hits = 0;
        for ky in 0..16 {
            for kx in 0..16 {
                let mag = spec.values()[ky * 16 + kx].norm();
                let is_mode = kx == 3 && ky == 14; // -2 wraps to n-2
                if is_mode {
                    assert!((mag - 0.7 * 5.0).abs() < 1e-10);
                    hits += 1;
                } else {
                    assert!(mag < 1e-10);
                }
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn plane_wave_rejects_unrepresentable_modes() {
        let g = Grid::new(8, 5.0).unwrap();
        assert!(plane_wave(g, 1.0, [4, 0]).is_err());
        assert!(plane_wave(g, 1.0, [0, -5]).is_err());
        assert!(plane_wave(g, 1.0, [-4, 3]).is_ok());
    }

    #[test]
    fn bump_is_compactly_supported() {
        let g = Grid::new(64, 20.0).unwrap();
        let f = bump(g, 2.0, 4.0).unwrap();
        for j in 0..64 {
            for i in 0..64 {
                let (x, y) = (g.coord(i), g.coord(j));
                let inside = x * x + y * y < 16.0;
                let v = f.at(i, j).norm();
                if inside {
                    assert!(v > 0.0);
                } else {
                    assert_eq!(v, 0.0);
                }
            }
        }
        // Peak value at the origin is A/e.
        assert!((f.at(32, 32).re - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
    }
}
