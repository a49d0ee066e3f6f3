//! Periodic grids, sampled fields and spectral differential operators.
//!
//! The unbounded surface is modeled by a periodic cell `[0, L1) x [0, L2)`
//! sampled on an `n1 x n2` grid. The cell must be large compared with the
//! support of the load: the periodic images of the response then differ from
//! the free-plane response only by the decay of the load and kernel over
//! one period.
//!
//! Samples are stored row-major with `y1` as the slow index, so the value at
//! `(y1_i, y2_j)` lives at `i * n2 + j`. Transforms are real-to-complex along
//! `y2` followed by complex transforms along `y1`, giving a half spectrum of
//! `n1 x (n2 / 2 + 1)` modes. Mode `j` along an axis has wavenumber
//! `2 pi j' / L` with `j'` in `[-n/2, n/2)`.
//!
//! Odd-order multipliers (first derivatives, the mixed term of the membrane
//! symbol) are zeroed on the Nyquist row/column of the differentiated
//! direction; even-order multipliers keep the Nyquist modes.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Uniform periodic grid on the rectangle `[0, l1) x [0, l2)` (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    n1: usize,
    n2: usize,
    l1: f64,
    l2: f64,
}

impl PeriodicGrid {
    pub fn new(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Self> {
        for (name, n) in [("n1", n1), ("n2", n2)] {
            if n < 4 || n % 2 != 0 {
                return Err(invalid(name, format!("must be even and >= 4, got {n}")));
            }
        }
        for (name, l) in [("L1", l1), ("L2", l2)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(invalid(name, format!("must be positive, got {l}")));
            }
        }
        Ok(Self { n1, n2, l1, l2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }
    pub fn n2(&self) -> usize {
        self.n2
    }
    pub fn l1(&self) -> f64 {
        self.l1
    }
    pub fn l2(&self) -> f64 {
        self.l2
    }
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn dy1(&self) -> f64 {
        self.l1 / self.n1 as f64
    }
    pub fn dy2(&self) -> f64 {
        self.l2 / self.n2 as f64
    }
    /// Area of one grid cell.
    pub fn cell_area(&self) -> f64 {
        self.dy1() * self.dy2()
    }
    pub fn y1(&self, i: usize) -> f64 {
        i as f64 * self.dy1()
    }
    pub fn y2(&self, j: usize) -> f64 {
        j as f64 * self.dy2()
    }

    /// Number of stored modes along `y2` in the half spectrum.
    pub fn half_n2(&self) -> usize {
        self.n2 / 2 + 1
    }

    /// Wavenumber of spectral row `j1`.
    pub fn xi1(&self, j1: usize) -> f64 {
        2.0 * PI * signed_index(j1, self.n1) as f64 / self.l1
    }

    /// Wavenumber of spectral column `j2` of the half spectrum.
    pub fn xi2(&self, j2: usize) -> f64 {
        2.0 * PI * signed_index(j2, self.n2) as f64 / self.l2
    }

    pub fn is_nyquist1(&self, j1: usize) -> bool {
        j1 == self.n1 / 2
    }
    pub fn is_nyquist2(&self, j2: usize) -> bool {
        j2 == self.n2 / 2
    }

    /// Shortest periodic offset from `from` to `to` along each axis.
    pub fn periodic_offset(&self, from: [f64; 2], to: [f64; 2]) -> [f64; 2] {
        let wrap = |d: f64, l: f64| d - l * (d / l).round();
        [
            wrap(to[0] - from[0], self.l1),
            wrap(to[1] - from[1], self.l2),
        ]
    }
}

fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Real samples on a periodic grid (Pa for pressure, m for deflection).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::FieldMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("scalar field"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                values.push(f(grid.y1(i), grid.y2(j)));
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n2 + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoidal (spectrally accurate for smooth periodic data) integral
    /// over the cell.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Circular shift by `(s1, s2)` grid nodes.
    pub fn shifted(&self, s1: usize, s2: usize) -> Self {
        let (n1, n2) = (self.grid.n1, self.grid.n2);
        let mut values = vec![0.0; self.values.len()];
        for i in 0..n1 {
            for j in 0..n2 {
                values[((i + s1) % n1) * n2 + (j + s2) % n2] = self.values[i * n2 + j];
            }
        }
        Self {
            grid: self.grid,
            values,
        }
    }

    pub(crate) fn combine(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }
}

/// Two real components on a periodic grid (m for displacements, Pa for
/// tractions).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: PeriodicGrid,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

impl VectorField {
    pub fn new(grid: PeriodicGrid, c1: Vec<f64>, c2: Vec<f64>) -> Result<Self> {
        if c1.len() != grid.len() || c2.len() != grid.len() {
            return Err(Error::FieldMismatch(format!(
                "expected {} samples per component, got {} and {}",
                grid.len(),
                c1.len(),
                c2.len()
            )));
        }
        if c1.iter().chain(&c2).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vector field"));
        }
        Ok(Self { grid, c1, c2 })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            c1: vec![0.0; grid.len()],
            c2: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64, f64) -> [f64; 2]) -> Result<Self> {
        let mut c1 = Vec::with_capacity(grid.len());
        let mut c2 = Vec::with_capacity(grid.len());
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                let [a, b] = f(grid.y1(i), grid.y2(j));
                c1.push(a);
                c2.push(b);
            }
        }
        Self::new(grid, c1, c2)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }
    pub fn c1(&self) -> &[f64] {
        &self.c1
    }
    pub fn c2(&self) -> &[f64] {
        &self.c2
    }

    /// Largest pointwise Euclidean magnitude.
    pub fn max_norm(&self) -> f64 {
        self.c1
            .iter()
            .zip(&self.c2)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            c1: self.c1.iter().map(|v| v * factor).collect(),
            c2: self.c2.iter().map(|v| v * factor).collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect()
        };
        Ok(Self {
            grid: self.grid,
            c1: mix(&self.c1, &other.c1),
            c2: mix(&self.c2, &other.c2),
        })
    }
}

fn check_same_grid(a: &PeriodicGrid, b: &PeriodicGrid) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch(format!(
            "grids differ: {a:?} vs {b:?}"
        )));
    }
    Ok(())
}

/// FFT plans for one grid. Plans are immutable and shareable; scratch
/// buffers are allocated per call, so one instance may serve several threads.
#[derive(Clone)]
pub struct Transform2d {
    grid: PeriodicGrid,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transform2d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform2d")
            .field("grid", &self.grid)
            .finish()
    }
}

impl Transform2d {
    pub fn new(grid: PeriodicGrid) -> Self {
        let mut real = RealFftPlanner::<f64>::new();
        let mut complex = FftPlanner::<f64>::new();
        Self {
            grid,
            r2c: real.plan_fft_forward(grid.n2),
            c2r: real.plan_fft_inverse(grid.n2),
            fwd: complex.plan_fft_forward(grid.n1),
            inv: complex.plan_fft_inverse(grid.n1),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Unnormalized forward transform of real row-major samples.
    pub fn forward(&self, values: &[f64]) -> Spectrum {
        let g = self.grid;
        let m2 = g.half_n2();
        let mut data = vec![Complex64::new(0.0, 0.0); g.n1 * m2];
        let mut row = self.r2c.make_input_vec();
        let mut scratch = self.r2c.make_scratch_vec();
        for i in 0..g.n1 {
            row.copy_from_slice(&values[i * g.n2..(i + 1) * g.n2]);
            // lengths are fixed by construction
            self.r2c
                .process_with_scratch(&mut row, &mut data[i * m2..(i + 1) * m2], &mut scratch)
                .expect("real FFT buffer sizes");
        }
        self.columns(&mut data, &self.fwd);
        Spectrum { grid: g, data }
    }

    /// Inverse transform including the `1 / (n1 n2)` normalization.
    pub fn inverse(&self, spectrum: &Spectrum) -> Vec<f64> {
        let g = self.grid;
        let m2 = g.half_n2();
        let mut data = spectrum.data.clone();
        self.columns(&mut data, &self.inv);
        let mut out = vec![0.0; g.len()];
        let mut row = self.c2r.make_input_vec();
        let mut scratch = self.c2r.make_scratch_vec();
        let norm = 1.0 / g.len() as f64;
        for i in 0..g.n1 {
            row.copy_from_slice(&data[i * m2..(i + 1) * m2]);
            // zero- and Nyquist-frequency bins of a real signal are real
            row[0].im = 0.0;
            row[m2 - 1].im = 0.0;
            let dst = &mut out[i * g.n2..(i + 1) * g.n2];
            self.c2r
                .process_with_scratch(&mut row, dst, &mut scratch)
                .expect("real FFT buffer sizes");
            dst.iter_mut().for_each(|v| *v *= norm);
        }
        out
    }

    fn columns(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let g = self.grid;
        let m2 = g.half_n2();
        let mut col = vec![Complex64::new(0.0, 0.0); g.n1];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for j in 0..m2 {
            for i in 0..g.n1 {
                col[i] = data[i * m2 + j];
            }
            plan.process_with_scratch(&mut col, &mut scratch);
            for i in 0..g.n1 {
                data[i * m2 + j] = col[i];
            }
        }
    }
}

/// Half spectrum of a real field, indexed `[j1 * (n2/2 + 1) + j2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: PeriodicGrid,
    data: Vec<Complex64>,
}

/// Wavevector of one stored mode together with its Nyquist flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub xi: [f64; 2],
    pub nyquist: [bool; 2],
}

impl Mode {
    /// `i xi_alpha`, the symbol of a first derivative, zeroed on Nyquist.
    pub fn derivative(&self, axis: usize) -> Complex64 {
        if self.nyquist[axis] {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, self.xi[axis])
        }
    }

    /// `xi_1 xi_2` with the odd-symmetry convention applied.
    pub fn mixed(&self) -> f64 {
        if self.nyquist[0] || self.nyquist[1] {
            0.0
        } else {
            self.xi[0] * self.xi[1]
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1]
    }
}

impl Spectrum {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Mode-wise sum of two spectra on the same grid.
    pub fn add(&self, other: &Spectrum) -> Spectrum {
        assert_eq!(self.grid, other.grid, "spectra on different grids");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Spectrum {
            grid: self.grid,
            data,
        }
    }

    /// Mode-wise combination of two spectra on the same grid.
    pub fn zip_map(
        &self,
        other: &Spectrum,
        f: impl Fn(&Mode, Complex64, Complex64) -> Complex64,
    ) -> Spectrum {
        assert_eq!(self.grid, other.grid, "spectra on different grids");
        let mut k = 0usize;
        self.map(|mode, a| {
            let b = other.data[k];
            k += 1;
            f(mode, a, b)
        })
    }

    /// Builds a new spectrum by evaluating `f(mode, coefficient)` on every
    /// stored mode.
    pub fn map(&self, mut f: impl FnMut(&Mode, Complex64) -> Complex64) -> Spectrum {
        let g = self.grid;
        let m2 = g.half_n2();
        let mut data = Vec::with_capacity(self.data.len());
        for j1 in 0..g.n1 {
            for j2 in 0..m2 {
                let mode = Mode {
                    xi: [g.xi1(j1), g.xi2(j2)],
                    nyquist: [g.is_nyquist1(j1), g.is_nyquist2(j2)],
                };
                data.push(f(&mode, self.data[j1 * m2 + j2]));
            }
        }
        Spectrum { grid: g, data }
    }
}

/// Spectral gradient.
pub fn gradient(f: &ScalarField) -> VectorField {
    let t = Transform2d::new(f.grid);
    let s = t.forward(&f.values);
    let g1 = t.inverse(&s.map(|m, c| m.derivative(0) * c));
    let g2 = t.inverse(&s.map(|m, c| m.derivative(1) * c));
    VectorField {
        grid: f.grid,
        c1: g1,
        c2: g2,
    }
}

/// Spectral divergence.
pub fn divergence(v: &VectorField) -> ScalarField {
    let t = Transform2d::new(v.grid);
    let s1 = t.forward(&v.c1);
    let s2 = t.forward(&v.c2);
    let sum = s1
        .map(|m, c| m.derivative(0) * c)
        .add(&s2.map(|m, c| m.derivative(1) * c));
    ScalarField {
        grid: v.grid,
        values: t.inverse(&sum),
    }
}

/// Spectral Laplacian.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let t = Transform2d::new(f.grid);
    let s = t.forward(&f.values);
    ScalarField {
        grid: f.grid,
        values: t.inverse(&s.map(|m, c| -m.norm_sq() * c)),
    }
}

/// Test and demonstration loads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressureLoad {
    /// `amplitude * cos(2 pi (m1 y1 / L1 + m2 y2 / L2))` for integer mode
    /// numbers, so the field is exactly periodic.
    CosineMode { m1: i64, m2: i64, amplitude: f64 },
    /// Periodized `amplitude * exp(-r^2 / (2 width^2))`; `width` must be
    /// below `min(L1, L2) / 6`.
    Gaussian {
        center: [f64; 2],
        width: f64,
        amplitude: f64,
    },
    /// `peak * sqrt(1 - r^2 / radius^2)` inside the contact radius. The
    /// square-root edge limits spectral convergence to an algebraic rate, so
    /// accuracy studies with this load must refine the grid.
    Hertz {
        center: [f64; 2],
        radius: f64,
        peak: f64,
    },
}

/// Samples a pressure load on `grid`.
pub fn make_pressure(load: &PressureLoad, grid: PeriodicGrid) -> Result<ScalarField> {
    let lmin = grid.l1.min(grid.l2);
    match *load {
        PressureLoad::CosineMode { m1, m2, amplitude } => {
            if !amplitude.is_finite() {
                return Err(Error::NonFinite("cosine amplitude"));
            }
            let k1 = 2.0 * PI * m1 as f64 / grid.l1;
            let k2 = 2.0 * PI * m2 as f64 / grid.l2;
            ScalarField::from_fn(grid, |y1, y2| amplitude * (k1 * y1 + k2 * y2).cos())
        }
        PressureLoad::Gaussian {
            center,
            width,
            amplitude,
        } => {
            if !(width > 0.0 && width < lmin / 6.0) {
                return Err(invalid(
                    "width",
                    format!(
                        "must lie in (0, min(L1, L2)/6 = {}), got {width}",
                        lmin / 6.0
                    ),
                ));
            }
            // width < L/6 makes images beyond two periods contribute < 1e-17
            let inv = 1.0 / (2.0 * width * width);
            ScalarField::from_fn(grid, |y1, y2| {
                let [d1, d2] = grid.periodic_offset(center, [y1, y2]);
                let mut sum = 0.0;
                for a in -2..=2 {
                    for b in -2..=2 {
                        let e1 = d1 + a as f64 * grid.l1;
                        let e2 = d2 + b as f64 * grid.l2;
                        sum += (-(e1 * e1 + e2 * e2) * inv).exp();
                    }
                }
                amplitude * sum
            })
        }
        PressureLoad::Hertz {
            center,
            radius,
            peak,
        } => {
            if !(radius > 0.0 && radius < lmin / 2.0) {
                return Err(invalid(
                    "radius",
                    format!(
                        "must lie in (0, min(L1, L2)/2 = {}), got {radius}",
                        lmin / 2.0
                    ),
                ));
            }
            ScalarField::from_fn(grid, |y1, y2| {
                let [d1, d2] = grid.periodic_offset(center, [y1, y2]);
                let q = 1.0 - (d1 * d1 + d2 * d2) / (radius * radius);
                peak * q.max(0.0).sqrt()
            })
        }
    }
}
