//! Discrete Floquet-Bloch transform for data sampled on period cells.
//!
//! A function on the line is stored cell by cell: cell `j` holds samples of `φ(x + 2πj)` on a
//! fixed grid over `[−π, π)`. The transform is the finite sum
//!
//! ```text
//! (Jφ)(α, x) = Σ_j φ(x + 2πj) e^{i2παj}
//! ```
//!
//! evaluated on an equispaced α-grid, and the inverse is the trapezoid rule for
//! `∫_Λ (Jφ)(α, x) e^{−i2πjα} dα`. Both are a DFT in the cell index, so the round trip is exact
//! up to rounding once the α-grid resolves every stored cell.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::cplx::{pair_matrix, pair_vec};
use crate::error::{Error, Result};

/// Which unit interval the α-grid covers. Values are 1-periodic in α, so both describe the
/// same transform; the shifted interval keeps `α₀ = 1/2` away from the end of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LambdaKind {
    /// `(−1/2, 1/2]`
    #[default]
    Centered,
    /// `(0, 1]`
    Shifted,
}

impl LambdaKind {
    /// `n` equispaced points covering the half-open interval, right end included.
    pub fn grid(self, n: usize) -> Vec<f64> {
        let start = match self {
            LambdaKind::Centered => -0.5,
            LambdaKind::Shifted => 0.0,
        };
        (1..=n).map(|i| start + i as f64 / n as f64).collect()
    }

    /// Reduces `alpha` into the interval.
    pub fn wrap(self, alpha: f64) -> f64 {
        match self {
            LambdaKind::Centered => {
                let a = alpha - alpha.round();
                if a <= -0.5 {
                    a + 1.0
                } else {
                    a
                }
            }
            LambdaKind::Shifted => {
                let a = alpha - alpha.floor();
                if a == 0.0 {
                    1.0
                } else {
                    a
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub j: i64,
    #[serde(with = "pair_vec")]
    pub samples: Vec<Complex64>,
}

/// Samples of a compactly supported function, one cell per period. Missing cells are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CellArrayRepr", into = "CellArrayRepr")]
pub struct CellArray {
    grid_size: usize,
    cells: BTreeMap<i64, Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct CellArrayRepr {
    grid_size: usize,
    cells: Vec<Cell>,
}

impl TryFrom<CellArrayRepr> for CellArray {
    type Error = Error;

    fn try_from(r: CellArrayRepr) -> Result<Self> {
        let mut out = CellArray::new(r.grid_size)?;
        for c in r.cells {
            out.insert(c.j, c.samples)?;
        }
        Ok(out)
    }
}

impl From<CellArray> for CellArrayRepr {
    fn from(c: CellArray) -> Self {
        CellArrayRepr {
            grid_size: c.grid_size,
            cells: c
                .cells
                .into_iter()
                .map(|(j, samples)| Cell { j, samples })
                .collect(),
        }
    }
}

impl CellArray {
    pub fn new(grid_size: usize) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::Parameter("grid_size must be positive".into()));
        }
        Ok(CellArray {
            grid_size,
            cells: BTreeMap::new(),
        })
    }

    /// Samples `f` on `[2πj − π, 2πj + π)` for every `j` in `js`.
    pub fn from_fn(
        grid_size: usize,
        js: impl IntoIterator<Item = i64>,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let mut out = CellArray::new(grid_size)?;
        let xs = out.x_grid();
        for j in js {
            let shift = TAU * j as f64;
            out.insert(j, xs.iter().map(|x| f(x + shift)).collect())?;
        }
        Ok(out)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Sample abscissae `−π + 2πm/grid_size` in the reference cell.
    pub fn x_grid(&self) -> Vec<f64> {
        (0..self.grid_size)
            .map(|m| -PI + TAU * m as f64 / self.grid_size as f64)
            .collect()
    }

    pub fn insert(&mut self, j: i64, samples: Vec<Complex64>) -> Result<()> {
        if samples.len() != self.grid_size {
            return Err(Error::Parameter(format!(
                "cell {j} has {} samples, grid size is {}",
                samples.len(),
                self.grid_size
            )));
        }
        self.cells.insert(j, samples);
        Ok(())
    }

    pub fn get(&self, j: i64) -> Option<&[Complex64]> {
        self.cells.get(&j).map(Vec::as_slice)
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        self.cells.iter().map(|(j, v)| (*j, v.as_slice()))
    }

    /// Cells holding at least one nonzero sample.
    pub fn nonzero_cells(&self) -> usize {
        self.cells
            .values()
            .filter(|v| v.iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .count()
    }

    pub fn max_abs_index(&self) -> i64 {
        self.cells.keys().map(|j| j.abs()).max().unwrap_or(0)
    }

    /// Moves every cell from `j` to `j + shift`, i.e. `φ(x) ↦ φ(x − 2π·shift)`.
    pub fn translate(&self, shift: i64) -> Self {
        CellArray {
            grid_size: self.grid_size,
            cells: self
                .cells
                .iter()
                .map(|(j, v)| (j + shift, v.clone()))
                .collect(),
        }
    }

    /// `Σ_j Σ_m |φ_j(x_m)|²`.
    pub fn energy(&self) -> f64 {
        self.cells
            .values()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Largest sample difference, with missing cells read as zero on both sides.
    pub fn max_diff(&self, other: &CellArray) -> f64 {
        let zero = vec![Complex64::new(0.0, 0.0); self.grid_size.max(other.grid_size)];
        let keys: std::collections::BTreeSet<i64> = self
            .cells
            .keys()
            .chain(other.cells.keys())
            .copied()
            .collect();
        keys.into_iter()
            .map(|j| {
                let a = self.cells.get(&j).unwrap_or(&zero);
                let b = other.cells.get(&j).unwrap_or(&zero);
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Transform values on an α-grid: `values[n][m] = (Jφ)(α_n, x_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochArray {
    pub alpha_grid: Vec<f64>,
    #[serde(with = "pair_matrix")]
    pub values: Vec<Vec<Complex64>>,
    pub lambda_kind: LambdaKind,
}

impl BlochArray {
    /// Builds a transform array from a function of `(α, m)` on the grid of `lambda_kind`.
    pub fn from_fn(
        n_alpha: usize,
        grid_size: usize,
        lambda_kind: LambdaKind,
        f: impl Fn(f64, usize) -> Complex64,
    ) -> Self {
        let alpha_grid = lambda_kind.grid(n_alpha);
        let values = alpha_grid
            .iter()
            .map(|&a| (0..grid_size).map(|m| f(a, m)).collect())
            .collect();
        BlochArray {
            alpha_grid,
            values,
            lambda_kind,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Row `n` of the transform of `data.translate(shift)`: moving the data `shift` cells to
    /// the right multiplies the transform by `e^{i2πα·shift}`. Read as a function of `x`, the
    /// same sum satisfies `ψ(α, x + 2π) = e^{−i2πα} ψ(α, x)`.
    pub fn quasi_periodic_extension(&self, n: usize, shift: i64) -> Vec<Complex64> {
        let f = Complex64::from_polar(1.0, TAU * self.alpha_grid[n] * shift as f64);
        self.values[n].iter().map(|z| z * f).collect()
    }

    /// `(1/N) Σ_n Σ_m |ψ(α_n, x_m)|²`, the trapezoid α-mean of the squared sample norm.
    pub fn mean_energy(&self) -> f64 {
        let total: f64 = self
            .values
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum();
        total / self.alpha_grid.len() as f64
    }
}

/// Smallest α-grid that resolves `data` without aliasing.
pub fn min_alpha_points(data: &CellArray) -> usize {
    let by_count = 2 * data.nonzero_cells() + 1;
    let by_index = 2 * data.max_abs_index() as usize + 1;
    by_count.max(by_index)
}

/// `(Jφ)(α_n, x_m)` on `n_alpha` equispaced points of `lambda_kind`.
pub fn fb_transform(
    data: &CellArray,
    n_alpha: usize,
    lambda_kind: LambdaKind,
) -> Result<BlochArray> {
    let need = min_alpha_points(data);
    if n_alpha < need {
        return Err(Error::Parameter(format!(
            "{n_alpha} α-points undersample this data; need at least {need}"
        )));
    }
    let g = data.grid_size();
    let alpha_grid = lambda_kind.grid(n_alpha);
    let values = alpha_grid
        .iter()
        .map(|&a| {
            let mut row = vec![Complex64::new(0.0, 0.0); g];
            for (j, cell) in data.cells() {
                let w = Complex64::from_polar(1.0, TAU * a * j as f64);
                for (acc, z) in row.iter_mut().zip(cell) {
                    *acc += z * w;
                }
            }
            row
        })
        .collect();
    Ok(BlochArray {
        alpha_grid,
        values,
        lambda_kind,
    })
}

/// Recovers cells `j ∈ [−⌊(N−1)/2⌋, ⌊N/2⌋]` by the periodic trapezoid rule in α.
///
/// The kernel is `e^{−i2πjα}`, the conjugate of the forward kernel, so that
/// `fb_inverse(fb_transform(φ)) = φ`.
pub fn fb_inverse(bloch: &BlochArray) -> Result<CellArray> {
    let n = bloch.alpha_grid.len();
    if n == 0 || bloch.values.len() != n {
        return Err(Error::Parameter(
            "α-grid and value rows disagree in length".into(),
        ));
    }
    let g = bloch.grid_size();
    if bloch.values.iter().any(|row| row.len() != g) {
        return Err(Error::Parameter("ragged value matrix".into()));
    }
    let lo = -((n as i64 - 1) / 2);
    let hi = n as i64 / 2;
    let mut out = CellArray::new(g.max(1))?;
    let scale = 1.0 / n as f64;
    for j in lo..=hi {
        let mut cell = vec![Complex64::new(0.0, 0.0); g];
        for (a, row) in bloch.alpha_grid.iter().zip(&bloch.values) {
            let w = Complex64::from_polar(scale, -TAU * j as f64 * a);
            for (acc, z) in cell.iter_mut().zip(row) {
                *acc += z * w;
            }
        }
        out.insert(j, cell)?;
    }
    Ok(out)
}
