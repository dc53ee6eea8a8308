//! Uniform grids, sampled fields, the analytic distribution catalog and its
//! exact Gabor wavefront sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{ConicSet, QMat};
use crate::error::{Error, Result};
use crate::numerics::{is_symmetric, sum_sq};

/// Uniform grid on the box `[-L, L)^n` with `N` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(rename = "n")]
    dim: usize,
    #[serde(rename = "N")]
    points: usize,
    #[serde(rename = "L")]
    half_width: f64,
}

impl Grid {
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if points < 4 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "samples per axis must be even and >= 4, got {points}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self { dim, points, half_width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Sample spacing `2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `Δ^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of the `j`-th sample along any axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// The grid carrying the discrete Fourier transform: same `N`, half-width
    /// `Nπ/(2L)`, spacing `π/L`. Taking the dual twice returns the original.
    pub fn dual(&self) -> Grid {
        Grid {
            dim: self.dim,
            points: self.points,
            half_width: self.points as f64 * PI / (2.0 * self.half_width),
        }
    }

    /// Row-major multi-index of a flat index (axis 0 slowest).
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat).into_iter().map(|j| self.coord(j)).collect()
    }

    /// Nearest grid index along one axis, or `None` outside `[-L, L)`.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let j = ((x + self.half_width) / self.spacing()).round();
        if j < 0.0 || j >= self.points as f64 {
            None
        } else {
            Some(j as usize)
        }
    }

    /// Largest angular frequency representable without aliasing, `π/Δ`.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Complex samples on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    n: usize,
    #[serde(rename = "N")]
    points: usize,
    #[serde(rename = "L")]
    half_width: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    /// Builds a field by evaluating `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, value: Complex64) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `‖f‖₂` with `Δ^n` weights.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_volume() * sum_sq(&self.values)).sqrt()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn zip_with(
        &self,
        other: &SampledField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn pointwise_product(&self, other: &SampledField) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_tagged(None)
    }

    pub(crate) fn to_json_tagged(&self, kind: Option<&str>) -> serde_json::Value {
        let repr = FieldRepr {
            kind: kind.map(str::to_owned),
            n: self.grid.dim,
            points: self.grid.points,
            half_width: self.grid.half_width,
            re: self.values.iter().map(|z| z.re).collect(),
            im: self.values.iter().map(|z| z.im).collect(),
        };
        serde_json::to_value(repr).expect("field serialization")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let repr: FieldRepr = serde_json::from_value(value.clone())?;
        if repr.re.len() != repr.im.len() {
            return Err(Error::InvalidField("re/im length mismatch".into()));
        }
        let grid = Grid::new(repr.n, repr.points, repr.half_width)?;
        let values = repr.re.iter().zip(&repr.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Self::new(grid, values)
    }
}

/// Relative L² distance `‖f−g‖₂ / max(‖f‖₂, ε)`.
pub fn field_l2_distance(f: &SampledField, g: &SampledField) -> Result<f64> {
    f.grid.check_same(&g.grid)?;
    let diff: f64 = f.values.iter().zip(&g.values).map(|(a, b)| (a - b).norm_sqr()).sum();
    let w = f.grid.cell_volume();
    Ok((w * diff).sqrt() / (w * sum_sq(&f.values)).sqrt().max(f64::EPSILON))
}

/// Real antisymmetric matrix, built from its strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    entries: Vec<Vec<f64>>,
    exact: Option<QMat>,
}

impl AntisymmetricMatrix {
    /// `upper` lists the entries `θ_ij`, `i < j`, row by row.
    pub fn from_upper(dim: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != dim * dim.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim.saturating_sub(1) / 2,
                got: upper.len(),
            });
        }
        let mut entries = vec![vec![0.0; dim]; dim];
        let mut k = 0;
        for i in 0..dim {
            for j in i + 1..dim {
                entries[i][j] = upper[k];
                entries[j][i] = -upper[k];
                k += 1;
            }
        }
        Ok(Self { entries, exact: None })
    }

    /// Accepts a full matrix, rejecting anything that is not exactly antisymmetric.
    pub fn from_full(m: &[Vec<f64>]) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::NotAntisymmetric);
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != -m[j][i] {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        Ok(Self { entries: m.to_vec(), exact: None })
    }

    pub fn zero(dim: usize) -> Self {
        Self { entries: vec![vec![0.0; dim]; dim], exact: None }
    }

    /// Canonical symplectic form `[[0, I], [-I, 0]]` on `R^{2m}`.
    pub fn symplectic(half: usize) -> Self {
        let dim = 2 * half;
        let mut entries = vec![vec![0.0; dim]; dim];
        for i in 0..half {
            entries[i][half + i] = 1.0;
            entries[half + i][i] = -1.0;
        }
        Self { entries, exact: None }
    }

    /// Keeps the rational entries for the exact calculus.
    pub fn from_rational(m: QMat) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::NotAntisymmetric);
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != -m[j][i].clone() {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        let entries = m.iter().map(|r| crate::cone::rational::to_f64(r)).collect();
        Ok(Self { entries, exact: Some(m) })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn negate(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            exact: self.exact.as_ref().map(|m| crate::cone::rational::mat_neg(m)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0.0)
    }

    /// `xᵀ θ y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            let mut r = 0.0;
            for (j, t) in row.iter().enumerate() {
                r += t * y[j];
            }
            s += x[i] * r;
        }
        s
    }

    pub fn to_rational(&self) -> QMat {
        match &self.exact {
            Some(m) => m.clone(),
            None => crate::cone::qmat_from_f64(&self.entries),
        }
    }
}

/// Catalog of tempered distributions with known wavefront sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDistribution {
    /// Point mass at `a`.
    Delta { a: Vec<f64> },
    /// `e^{i a·x}`.
    PlaneWave { a: Vec<f64> },
    /// `e^{(i/2) xᵀAx}`, optionally times `e^{-|x|²/2}`.
    Chirp {
        a: Vec<Vec<f64>>,
        #[serde(default)]
        envelope: bool,
    },
    /// `e^{-|x-μ|²/(2σ²)} e^{i b·x}`.
    GaussianPacket { center: Vec<f64>, width: f64, modulation: Vec<f64> },
}

impl AnalyticDistribution {
    pub fn delta(a: &[f64]) -> Self {
        Self::Delta { a: a.to_vec() }
    }

    pub fn plane_wave(a: &[f64]) -> Self {
        Self::PlaneWave { a: a.to_vec() }
    }

    pub fn chirp(a: Vec<Vec<f64>>) -> Self {
        Self::Chirp { a, envelope: false }
    }

    pub fn gaussian(center: &[f64], width: f64, modulation: &[f64]) -> Self {
        Self::GaussianPacket { center: center.to_vec(), width, modulation: modulation.to_vec() }
    }

    pub fn standard_gaussian(dim: usize) -> Self {
        Self::gaussian(&vec![0.0; dim], 1.0, &vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Delta { a } | Self::PlaneWave { a } => a.len(),
            Self::Chirp { a, .. } => a.len(),
            Self::GaussianPacket { center, .. } => center.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Chirp { a, .. } if !is_symmetric(a) => Err(Error::NotSymmetric),
            Self::GaussianPacket { width, center, modulation } => {
                if !(*width > 0.0) {
                    return Err(Error::InvalidField(format!("packet width must be positive, got {width}")));
                }
                if center.len() != modulation.len() {
                    return Err(Error::DimensionMismatch { expected: center.len(), got: modulation.len() });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Samples on `grid`. Returns the field and any warnings (off-grid delta
    /// centers are snapped to the nearest grid point).
    pub fn sample_with_warnings(&self, grid: &Grid) -> Result<(SampledField, Vec<String>)> {
        self.validate()?;
        if self.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), got: self.dim() });
        }
        let nyq = grid.nyquist();
        let mut warnings = Vec::new();
        let field = match self {
            Self::Delta { a } => {
                let mut idx = Vec::with_capacity(a.len());
                for &ai in a {
                    let j = grid.nearest_index(ai).ok_or_else(|| Error::OutsideBox(a.clone()))?;
                    if (grid.coord(j) - ai).abs() > 1e-12 * grid.half_width() {
                        warnings.push(format!(
                            "delta coordinate {ai} snapped to grid point {}",
                            grid.coord(j)
                        ));
                    }
                    idx.push(j);
                }
                let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
                values[grid.ravel(&idx)] = Complex64::new(1.0 / grid.cell_volume(), 0.0);
                SampledField::from_parts_unchecked(*grid, values)
            }
            Self::PlaneWave { a } => {
                if let Some(f) = a.iter().find(|f| f.abs() > nyq) {
                    return Err(Error::Nyquist(format!("plane-wave frequency {f} exceeds band {nyq}")));
                }
                SampledField::from_fn(*grid, |x| {
                    Complex64::from_polar(1.0, a.iter().zip(x).map(|(p, q)| p * q).sum())
                })?
            }
            Self::Chirp { a, envelope } => {
                let l = grid.half_width();
                let reach = a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>() * l).fold(0.0, f64::max);
                if reach > nyq {
                    return Err(Error::Nyquist(format!("chirp frequency {reach} at box corner exceeds band {nyq}")));
                }
                let env = *envelope;
                SampledField::from_fn(*grid, |x| {
                    let ax = crate::numerics::mat_vec(a, x);
                    let q: f64 = x.iter().zip(&ax).map(|(p, q)| p * q).sum();
                    let amp = if env { (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp() } else { 1.0 };
                    Complex64::from_polar(amp, 0.5 * q)
                })?
            }
            Self::GaussianPacket { center, width, modulation } => {
                if let Some(f) = modulation.iter().find(|f| f.abs() > nyq) {
                    return Err(Error::Nyquist(format!("packet modulation {f} exceeds band {nyq}")));
                }
                SampledField::from_fn(*grid, |x| {
                    let r2: f64 = x.iter().zip(center).map(|(p, c)| (p - c) * (p - c)).sum();
                    let ph: f64 = x.iter().zip(modulation).map(|(p, b)| p * b).sum();
                    Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), ph)
                })?
            }
        };
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok((field, warnings))
    }

    pub fn sample(&self, grid: &Grid) -> Result<SampledField> {
        self.sample_with_warnings(grid).map(|(f, _)| f)
    }

    /// Exact global wavefront set in `R^{2n}`.
    pub fn exact_wf(&self) -> ConicSet {
        let n = self.dim();
        match self {
            Self::Delta { .. } => ConicSet::zero_times_space(n),
            Self::PlaneWave { .. } => ConicSet::space_times_zero(n),
            Self::Chirp { a, envelope: false } => ConicSet::graph(crate::cone::qmat_from_f64(a)),
            Self::Chirp { envelope: true, .. } | Self::GaussianPacket { .. } => ConicSet::empty(2 * n),
        }
    }
}

pub fn make_grid(n: usize, points: usize, half_width: f64) -> Result<Grid> {
    Grid::new(n, points, half_width)
}

pub fn sample_analytic(d: &AnalyticDistribution, g: &Grid) -> Result<SampledField> {
    d.sample(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = make_grid(1, 8, 4.0).unwrap();
        assert_eq!(g.spacing(), 1.0);
        let pts: Vec<f64> = (0..8).map(|j| g.coord(j)).collect();
        assert_eq!(pts, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        let g2 = make_grid(2, 32, 8.0).unwrap();
        assert_eq!(g2.spacing(), 0.5);
        assert_eq!(g2.len(), 1024);
        assert!(make_grid(1, 7, 4.0).is_err());
        assert!(make_grid(1, 8, 0.0).is_err());
        assert!(make_grid(1, 8, -1.0).is_err());
        assert!(make_grid(1, 2, 1.0).is_err());
    }

    #[test]
    fn dual_grid_is_involutive() {
        let g = make_grid(2, 32, 6.0).unwrap();
        let d = g.dual();
        assert!((d.spacing() - PI / 6.0).abs() < 1e-15);
        assert!(d.dual().same_as(&g));
    }

    #[test]
    fn ravel_roundtrip() {
        let g = make_grid(3, 4, 1.0).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(i)), i);
        }
        assert_eq!(g.unravel(1), vec![0, 0, 1]);
    }

    #[test]
    fn delta_impulse() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let f = sample_analytic(&AnalyticDistribution::delta(&[0.0]), &g).unwrap();
        for (j, v) in f.values().iter().enumerate() {
            let expect = if j == 4 { 1.0 } else { 0.0 };
            assert_eq!(*v, Complex64::new(expect, 0.0));
        }
        let g2 = make_grid(2, 16, 3.0).unwrap();
        let f2 = sample_analytic(&AnalyticDistribution::delta(&[0.75, -1.5]), &g2).unwrap();
        let mass: f64 = f2.values().iter().map(|z| z.re).sum::<f64>() * g2.cell_volume();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_snaps_with_warning_and_rejects_outside() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let (f, w) = AnalyticDistribution::delta(&[0.3]).sample_with_warnings(&g).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(f.values()[4].re, 1.0);
        assert!(matches!(
            sample_analytic(&AnalyticDistribution::delta(&[4.0]), &g),
            Err(Error::OutsideBox(_))
        ));
    }

    #[test]
    fn plane_wave_and_gaussian_samples() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let pw = sample_analytic(&AnalyticDistribution::plane_wave(&[1.0]), &g).unwrap();
        let gs = sample_analytic(&AnalyticDistribution::standard_gaussian(1), &g).unwrap();
        for j in 0..16 {
            let x = g.coord(j);
            assert!((pw.values()[j] - Complex64::from_polar(1.0, x)).norm() < 1e-15);
            assert!((gs.values()[j].re - (-x * x / 2.0).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn aliasing_configurations_rejected() {
        let g = make_grid(1, 16, 4.0).unwrap();
        assert!(matches!(
            sample_analytic(&AnalyticDistribution::plane_wave(&[100.0]), &g),
            Err(Error::Nyquist(_))
        ));
        assert!(matches!(
            sample_analytic(&AnalyticDistribution::chirp(vec![vec![10.0]]), &g),
            Err(Error::Nyquist(_))
        ));
        assert!(matches!(
            sample_analytic(&AnalyticDistribution::chirp(vec![vec![0.0, 1.0], vec![0.5, 0.0]]), &make_grid(2, 8, 1.0).unwrap()),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = make_grid(2, 16, 4.0).unwrap();
        let d = AnalyticDistribution::gaussian(&[0.5, -0.25], 0.8, &[1.0, 2.0]);
        assert_eq!(d.sample(&g).unwrap(), d.sample(&g).unwrap());
    }

    #[test]
    fn l2_distance_cases() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let f = AnalyticDistribution::standard_gaussian(1).sample(&g).unwrap();
        assert_eq!(field_l2_distance(&f, &f).unwrap(), 0.0);
        let neg = f.scale(Complex64::new(-1.0, 0.0));
        assert!((field_l2_distance(&f, &neg).unwrap() - 2.0).abs() < 1e-15);
        let h = AnalyticDistribution::gaussian(&[0.5], 1.0, &[0.0]).sample(&g).unwrap();
        // independent direct sum
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..64 {
            let x = -8.0 + 0.25 * j as f64;
            let a = (-x * x / 2.0).exp();
            let b = (-(x - 0.5) * (x - 0.5) / 2.0).exp();
            num += (a - b) * (a - b);
            den += a * a;
        }
        let expect = (num / den).sqrt();
        assert!((field_l2_distance(&f, &h).unwrap() - expect).abs() < 1e-14);
        let other = make_grid(1, 32, 8.0).unwrap();
        assert!(field_l2_distance(&f, &SampledField::constant(other, Complex64::new(1.0, 0.0))).is_err());
    }

    #[test]
    fn antisymmetric_construction() {
        let t = AntisymmetricMatrix::from_upper(3, &[1.0, 2.0, 3.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.entries()[i][j] + t.entries()[j][i], 0.0);
            }
        }
        assert!(AntisymmetricMatrix::from_full(&[vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        let s = AntisymmetricMatrix::symplectic(1);
        assert_eq!(s.entries(), &[vec![0.0, 1.0], vec![-1.0, 0.0]]);
    }

    #[test]
    fn field_json_roundtrip() {
        let g = make_grid(2, 4, 1.0).unwrap();
        let f = AnalyticDistribution::gaussian(&[0.0, 0.0], 1.0, &[1.0, 0.0]).sample(&g).unwrap();
        let j = f.to_json();
        assert_eq!(j["N"], 4);
        assert_eq!(j["re"].as_array().unwrap().len(), 16);
        assert_eq!(SampledField::from_json(&j).unwrap(), f);
    }
}
