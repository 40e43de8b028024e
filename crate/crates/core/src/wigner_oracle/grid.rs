//! Rectangular Wigner-function grids and their plain-text file format.
//!
//! ```text
//! # x_min x_max y_min y_max nx ny t
//! W(x_0, y_0) W(x_1, y_0) ... W(x_{nx-1}, y_0)
//! ...
//! W(x_0, y_{ny-1}) ...
//! ```
//!
//! The header carries the numeric values in that order. Grid points include
//! both window edges; `x` is the position axis and `y` the momentum axis.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector, Matrix2, SMatrix, SVector, Vector2};

use super::{FockPair, MomentIntegrator};
use crate::error::{domain, Error, Result};
use crate::hamiltonian::{CoeffSet, QuadratureScale};
use crate::numfmt::fmt_g;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridWindow {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let finite = [x.0, x.1, y.0, y.1].iter().all(|v| v.is_finite());
        if !finite || x.0 >= x.1 || y.0 >= y.1 {
            return Err(domain(format!("grid window must be finite and nonempty, got x={x:?} y={y:?}")));
        }
        if nx < 2 || ny < 2 {
            return Err(domain(format!("grid resolution must be >= 2, got {nx}x{ny}")));
        }
        Ok(Self {
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
            nx,
            ny,
        })
    }

    /// Square window `[-half, half]²` with `n` points per axis.
    pub fn symmetric(half: f64, n: usize) -> Result<Self> {
        Self::new((-half, half), (-half, half), n, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub window: GridWindow,
    pub t: f64,
    /// Row-major, `ny` rows of `nx` values.
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.window.nx + i]
    }

    pub fn cell_area(&self) -> f64 {
        self.window.dx() * self.window.dy()
    }

    /// Riemann sum of the grid values times the cell area.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        let w = &self.window;
        writeln!(
            out,
            "# {} {} {} {} {} {} {}",
            fmt_g(w.x_min),
            fmt_g(w.x_max),
            fmt_g(w.y_min),
            fmt_g(w.y_max),
            w.nx,
            w.ny,
            fmt_g(self.t)
        )?;
        for row in self.values.chunks(w.nx) {
            let line: Vec<String> = row.iter().map(|&v| fmt_g(v)).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("malformed grid file: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let fields: Vec<&str> = header
            .strip_prefix('#')
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .collect();
        if fields.len() != 7 {
            return Err(bad("header needs 7 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let count = |s: &str| s.parse::<usize>().map_err(|_| bad("bad count"));
        let window = GridWindow::new(
            (num(fields[0])?, num(fields[1])?),
            (num(fields[2])?, num(fields[3])?),
            count(fields[4])?,
            count(fields[5])?,
        )?;
        let t = num(fields[6])?;
        let mut values = Vec::with_capacity(window.nx * window.ny);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let row: Vec<f64> = line.split_whitespace().map(num).collect::<Result<_>>()?;
            if row.len() != window.nx {
                return Err(bad("row length"));
            }
            values.extend(row);
        }
        if values.len() != window.nx * window.ny {
            return Err(bad("row count"));
        }
        Ok(Self { window, t, values })
    }
}

/// Gaussian Wigner function `exp[−½ (R−d)ᵀ σ⁻¹ (R−d)] / ((2π)^{D/2} √det σ)`.
pub fn gaussian_wigner<const D: usize>(
    cm: &SMatrix<f64, D, D>,
    mean: &SVector<f64, D>,
    r: &SVector<f64, D>,
) -> Result<f64> {
    let cm = DMatrix::from_iterator(D, D, cm.iter().copied());
    let chol = cm.cholesky().ok_or(Error::NonPositive {
        min_eigenvalue: f64::NAN,
    })?;
    let diff = DVector::from_iterator(D, r.iter().zip(mean.iter()).map(|(a, b)| a - b));
    let quad: f64 = diff.dot(&chol.solve(&diff));
    let det = chol.determinant();
    Ok((-0.5 * quad).exp() / ((2.0 * PI).powf(D as f64 / 2.0) * det.sqrt()))
}

/// What to draw on a [`WignerGrid`].
#[derive(Debug, Clone, Copy)]
pub enum GridSource {
    /// A single-mode Gaussian with covariance `cm` and first moments `mean`.
    Gaussian { cm: Matrix2<f64>, mean: Vector2<f64> },
    /// The local state of `mode` (0 or 1) of the `(k, l)` Laguerre–Wigner
    /// state, in physical `(Q, P)` coordinates.
    Laguerre {
        pair: FockPair,
        mode: usize,
        coeffs: CoeffSet,
        hbar: f64,
        order: usize,
    },
}

pub fn wigner_grid(source: &GridSource, window: GridWindow, t: f64) -> Result<WignerGrid> {
    let mut values = Vec::with_capacity(window.nx * window.ny);
    match *source {
        GridSource::Gaussian { cm, mean } => {
            for j in 0..window.ny {
                for i in 0..window.nx {
                    let r = Vector2::new(window.x(i), window.y(j));
                    values.push(gaussian_wigner(&cm, &mean, &r)?);
                }
            }
        }
        GridSource::Laguerre {
            pair,
            mode,
            coeffs,
            hbar,
            order,
        } => {
            if mode > 1 {
                return Err(domain(format!("mode index must be 0 or 1, got {mode}")));
            }
            let integ = MomentIntegrator::new(order)?;
            let scale = QuadratureScale::new(&coeffs, hbar);
            for j in 0..window.ny {
                for i in 0..window.nx {
                    let (u, v) = (window.x(i) / scale.q(), window.y(j) / scale.p());
                    // dQ dP = ħ du dv
                    values.push(integ.marginal(&pair, mode, u, v, t, coeffs.rate())? / hbar);
                }
            }
        }
    }
    Ok(WignerGrid { window, t, values })
}
