use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::PhaseSpaceGrid;
use crate::error::{Error, Result};

/// Tolerance on `max|Im| / max|Re|` for fields flagged as real.
pub const REALNESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    RealExpected,
    Complex,
}

/// Complex samples of a phase-space function on a [`PhaseSpaceGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: PhaseSpaceGrid,
    values: Vec<Complex64>,
    kind: FieldKind,
}

impl Field {
    pub fn new(grid: PhaseSpaceGrid, values: Vec<Complex64>, kind: FieldKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.x.n,
                grid.p.n
            )));
        }
        let field = Self { grid, values, kind };
        if kind == FieldKind::RealExpected {
            let ratio = field.imag_ratio();
            if ratio >= REALNESS_TOL {
                return Err(Error::NotReal { ratio });
            }
        }
        Ok(field)
    }

    pub fn zeros(grid: PhaseSpaceGrid, kind: FieldKind) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], kind }
    }

    /// Samples `f(x, p)` on every lattice point, rows evaluated in parallel.
    pub fn from_fn<F>(grid: PhaseSpaceGrid, kind: FieldKind, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let values: Vec<Complex64> = (0..grid.x.n)
            .into_par_iter()
            .flat_map_iter(|ix| {
                let x = grid.x.value(ix);
                let f = &f;
                (0..grid.p.n).map(move |ip| f(x, grid.p.value(ip)))
            })
            .collect();
        Self::new(grid, values, kind)
    }

    pub fn from_real_fn<F>(grid: PhaseSpaceGrid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        Self::from_fn(grid, FieldKind::RealExpected, |x, p| Complex64::new(f(x, p), 0.0))
    }

    /// Fallible variant of [`Field::from_fn`]; the first error in lattice order wins.
    pub fn try_from_fn<F>(grid: PhaseSpaceGrid, kind: FieldKind, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        let values: Result<Vec<Complex64>> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (x, p) = grid.point(idx / grid.p.n, idx % grid.p.n);
                f(x, p)
            })
            .collect();
        Self::new(grid, values?, kind)
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, ix: usize, ip: usize) -> Complex64 {
        self.values[self.grid.index(ix, ip)]
    }

    /// Row of p-samples at x index `ix`.
    pub fn row(&self, ix: usize) -> &[Complex64] {
        let n = self.grid.p.n;
        &self.values[ix * n..(ix + 1) * n]
    }

    pub fn map<F>(&self, kind: FieldKind, f: F) -> Result<Field>
    where
        F: Fn(f64, f64, Complex64) -> Complex64,
    {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let (x, p) = self.grid.point(idx / self.grid.p.n, idx % self.grid.p.n);
                f(x, p, v)
            })
            .collect();
        Field::new(self.grid, values, kind)
    }

    pub fn scaled(&self, c: f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            kind: self.kind,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    /// Continuum L2 norm, `sqrt(sum |v|^2 dx dp)`.
    pub fn l2_norm(&self) -> f64 {
        let cell = self.grid.dx() * self.grid.dp();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell).sqrt()
    }

    pub fn max_abs_re(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.re.abs()))
    }

    pub fn max_abs_im(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// `max|Im| / max|Re|`, zero for the zero field.
    pub fn imag_ratio(&self) -> f64 {
        let re = self.max_abs_re();
        let im = self.max_abs_im();
        if im == 0.0 {
            0.0
        } else if re == 0.0 {
            f64::INFINITY
        } else {
            im / re
        }
    }

    /// Largest magnitude on the four window edges relative to the global maximum.
    pub fn edge_ratio(&self) -> f64 {
        let max = self.sup_norm();
        if max == 0.0 {
            return 0.0;
        }
        let (nx, np) = (self.grid.x.n, self.grid.p.n);
        let mut edge: f64 = 0.0;
        for ip in 0..np {
            edge = edge.max(self.get(0, ip).norm()).max(self.get(nx - 1, ip).norm());
        }
        for ix in 0..nx {
            edge = edge.max(self.get(ix, 0).norm()).max(self.get(ix, np - 1).norm());
        }
        edge / max
    }

    /// CSV with header `x,p,re,im`, row-major over x then p, 17 significant digits, LF endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"x,p,re,im\n")?;
        for ix in 0..self.grid.x.n {
            let x = self.grid.x.value(ix);
            for ip in 0..self.grid.p.n {
                let v = self.get(ix, ip);
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt17(x),
                    fmt17(self.grid.p.value(ip)),
                    fmt17(v.re),
                    fmt17(v.im)
                )?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Seventeen significant digits in scientific notation.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sup_norm(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.norm()))
}
