use crate::error::{Error, Result};
use crate::grid::Grid;
use num_complex::Complex64;

/// Complex scalar field sampled on a [`Grid`], row-major: `values[j*n + i]`
/// holds the sample at `(x_i, y_j)`. All samples are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Real scalar field with the same layout as [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Field {
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.num_points()],
        }
    }

    /// Builds a field from a closure over physical coordinates `(x, y)`.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64, f64) -> Complex64) -> Field {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.num_points());
        for j in 0..n {
            let y = grid.coord(j);
            for i in 0..n {
                values.push(f(grid.coord(i), y));
            }
        }
        Field { grid, values }
    }

    /// Wraps raw samples; rejects length mismatches and non-finite entries.
    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Field> {
        if values.len() != grid.num_points() {
            return Err(Error::InvalidArgument(format!(
                "field length {} does not match grid {}^2",
                values.len(),
                grid.n()
            )));
        }
        if !values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "field contains non-finite samples".into(),
            ));
        }
        Ok(Field { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Sample at column `i`, row `j` (i.e. at `(x_i, y_j)`).
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.n() + i]
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Pointwise |u|^2 as a real field.
    pub fn modulus_squared(&self) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn conj(&self) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// Pointwise difference `self - other`; grids must match.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("grid mismatch in field sub".into()));
        }
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// L^2 pairing <self, other> = h^2 * sum self * conj(other).
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "grid mismatch in field inner product".into(),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(acc * self.grid.cell_area())
    }
}

impl RealField {
    pub fn zeros(grid: Grid) -> RealField {
        RealField {
            grid,
            values: vec![0.0; grid.num_points()],
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<RealField> {
        if values.len() != grid.num_points() {
            return Err(Error::InvalidArgument(format!(
                "field length {} does not match grid {}^2",
                values.len(),
                grid.n()
            )));
        }
        Ok(RealField { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n() + i]
    }

    /// Box integral h^2 * sum of samples.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_values_validates() {
        let g = Grid::new(4, 1.0).unwrap();
        assert!(Field::from_values(g, vec![Complex64::new(0.0, 0.0); 15]).is_err());
        assert!(Field::from_values(g, vec![Complex64::new(f64::NAN, 0.0); 16]).is_err());
        assert!(Field::from_values(g, vec![Complex64::new(1.0, -1.0); 16]).is_ok());
    }

    #[test]
    fn layout_is_row_major() {
        let g = Grid::new(4, 4.0).unwrap();
        let f = Field::from_fn(g, |x, y| Complex64::new(x, y));
        assert_eq!(f.at(1, 0), Complex64::new(g.coord(1), g.coord(0)));
        assert_eq!(f.at(0, 3), Complex64::new(g.coord(0), g.coord(3)));
        assert_eq!(f.values()[3 * 4], Complex64::new(g.coord(0), g.coord(3)));
    }

    #[test]
    fn integral_uses_cell_area() {
        let g = Grid::new(8, 2.0).unwrap();
        let r = RealField::from_values(g, vec![3.0; 64]).unwrap();
        // Constant 3 over a box of area 4.
        assert!((r.integral() - 12.0).abs() < 1e-12);
    }
}
