//! One-dimensional periodic grids and nodal fields.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub periodic: bool,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize, periodic: bool) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::InvalidParam(format!(
                "x_max = {x_max} must exceed x_min = {x_min}"
            )));
        }
        if n_cells < 16 {
            return Err(Error::GridTooSmall {
                need: 16,
                got: n_cells,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
            periodic,
        })
    }

    pub fn periodic(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        Self::new(x_min, x_max, n_cells, true)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    /// Node x_i = x_min + i*dx; on a periodic grid x_max is the wrapped image
    /// of x_min, so nodes run i = 0 .. n_cells-1.
    pub fn node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.node(i)).collect()
    }

    /// Periodic index wrap.
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.n_cells as isize) as usize
    }

    /// Nearest node index to x (periodic images considered).
    pub fn nearest(&self, x: f64) -> usize {
        let s = (x - self.x_min) / self.dx();
        self.wrap(s.round() as isize)
    }
}

/// A real-valued field sampled on grid nodes at a given time.
#[derive(Clone, Debug)]
pub struct GridField {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub time: f64,
}

impl GridField {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.n_cells {
            return Err(Error::MismatchedGrids(format!(
                "field length {} != n_cells {}",
                values.len(),
                grid.n_cells
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("field contains non-finite values".into()));
        }
        Ok(Self { grid, values, time })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid1D, f: F, time: f64) -> Result<Self> {
        let values = (0..grid.n_cells).map(|i| f(grid.node(i))).collect();
        Self::new(grid, values, time)
    }

    pub fn constant(grid: Grid1D, c: f64, time: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.n_cells],
            time,
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// sup |self - other| on the shared grid.
    pub fn sup_distance(&self, other: &GridField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::MismatchedGrids("sup_distance".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Forward differences (v[i+1]-v[i])/dx with periodic wrap.
    pub fn forward_differences(&self) -> Vec<f64> {
        let n = self.grid.n_cells;
        let dx = self.grid.dx();
        (0..n)
            .map(|i| (self.values[(i + 1) % n] - self.values[i]) / dx)
            .collect()
    }
}
