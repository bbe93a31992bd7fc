use crate::{Error, Result};

/// Uniform cell-centered 1D mesh on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Mesh {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::domain(
                "Mesh::new",
                format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            ));
        }
        if n_cells == 0 {
            return Err(Error::domain("Mesh::new", "n_cells must be positive"));
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
        })
    }

    /// Symmetric mesh `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_cells: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_cells)
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(move |i| self.center(i))
    }

    /// Same cell layout up to a relative tolerance on the endpoints.
    pub fn matches(&self, other: &Mesh) -> bool {
        let scale = self.dx().max(other.dx());
        self.n_cells == other.n_cells
            && (self.x_min - other.x_min).abs() <= 1e-9 * scale
            && (self.x_max - other.x_max).abs() <= 1e-9 * scale
    }
}
