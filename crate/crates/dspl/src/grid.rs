use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Uniform n x n periodic grid on the square [-L/2, L/2)^2.
///
/// `n` must be a power of two. Physical samples live at
/// `x_i = -L/2 + i*h` with `h = L/n`; the Fourier lattice is
/// `xi_k = 2*pi*k/L` for `k` in `[-n/2, n/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    box_length: f64,
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Grid> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "grid size must be a nonzero power of two, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Grid(format!(
                "box length must be finite and positive, got {box_length}"
            )));
        }
        Ok(Grid { n, box_length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Grid spacing h = L/n.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Total number of samples n^2.
    pub fn num_points(&self) -> usize {
        self.n * self.n
    }

    /// Area element h^2 used by all quadrature sums.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Physical coordinate along one axis for sample index `i` in `[0, n)`.
    pub fn coord(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        -0.5 * self.box_length + i as f64 * self.spacing()
    }

    /// Angular frequency for FFT bin `k` in `[0, n)`: bins above n/2 wrap to
    /// negative frequencies, so the lattice is `2*pi*k/L`, `k in [-n/2, n/2)`.
    pub fn frequency(&self, k: usize) -> f64 {
        debug_assert!(k < self.n);
        let k = if k < self.n / 2 {
            k as isize
        } else {
            k as isize - self.n as isize
        };
        2.0 * PI * k as f64 / self.box_length
    }

    /// Per-axis frequency table in FFT bin order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.frequency(k)).collect()
    }

    /// Largest representable frequency magnitude pi*n/L.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.box_length
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(0, 1.0).is_err());
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, -2.0).is_err());
        assert!(Grid::new(16, f64::NAN).is_err());
        assert!(Grid::new(16, 1.0).is_ok());
    }

    #[test]
    fn coordinates_span_half_open_box() {
        let g = Grid::new(8, 4.0).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.coord(0), -2.0);
        assert_eq!(g.coord(4), 0.0);
        assert_eq!(g.coord(7), 1.5);
    }

    #[test]
    fn frequency_lattice_wraps_to_negative() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        // L = 2*pi makes xi_k = k exactly.
        let f: Vec<f64> = g.frequencies();
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.nyquist(), 4.0);
    }
}
