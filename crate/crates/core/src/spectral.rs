//! Unitary discrete Fourier transform on [`Grid`]s and the short-time Fourier
//! transform.
//!
//! Convention: `F f(ξ) = (2π)^{-n/2} ∫ f(x) e^{-iξ·x} dx`, discretized as a
//! `Δ^n`-weighted sum over the box and evaluated on [`Grid::dual`]. With this
//! choice the discrete transform is exactly unitary and `F∘F` is the exact
//! coordinate reflection `x ↦ -x` (index `j ↦ (N-j) mod N`).

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Grid, SampledField};
use crate::par;

/// Planned n-dimensional transform for one grid.
pub struct DiscreteFourier {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl DiscreteFourier {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.points());
        let inverse = planner.plan_fft_inverse(grid.points());
        Self { grid, forward, inverse }
    }

    pub fn scratch_len(&self) -> usize {
        self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len())
            + self.grid.points()
    }

    /// In-place transform of row-major samples on `self.grid` (forward) or on
    /// its dual (inverse). `scratch` must hold at least [`Self::scratch_len`].
    pub fn apply(&self, data: &mut [Complex64], inverse: bool, scratch: &mut [Complex64]) {
        let g = self.grid;
        let (n, dim) = (g.points(), g.dim());
        let fft = if inverse { &self.inverse } else { &self.forward };
        checkerboard(data, &g);
        let (line, work) = scratch.split_at_mut(n);
        for axis in 0..dim {
            let stride = n.pow((dim - 1 - axis) as u32);
            let block = stride * n;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + k * stride];
                    }
                    fft.process_with_scratch(line, work);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
        checkerboard(data, &g);
        // e^{∓iKL} per axis with KL = Nπ/2
        let axis_phase = Complex64::from_polar(1.0, if inverse { 1.0 } else { -1.0 } * n as f64 * PI / 2.0);
        let weight = if inverse { g.dual().spacing() } else { g.spacing() };
        let scale = (weight / (2.0 * PI).sqrt()).powi(dim as i32);
        let factor = axis_phase.powi(dim as i32) * scale;
        for v in data.iter_mut() {
            *v *= factor;
        }
    }
}

fn checkerboard(data: &mut [Complex64], g: &Grid) {
    for (i, v) in data.iter_mut().enumerate() {
        if g.unravel(i).iter().sum::<usize>() % 2 == 1 {
            *v = -*v;
        }
    }
}

/// Unitary forward transform; the result lives on `f.grid().dual()`.
pub fn fourier_forward(f: &SampledField) -> SampledField {
    let plan = DiscreteFourier::new(*f.grid());
    let mut data = f.values().to_vec();
    let mut scratch = vec![Complex64::default(); plan.scratch_len()];
    plan.apply(&mut data, false, &mut scratch);
    SampledField::from_parts_unchecked(f.grid().dual(), data)
}

/// Inverse of [`fourier_forward`]; maps a field on a dual grid back.
pub fn fourier_inverse(f: &SampledField) -> SampledField {
    let target = f.grid().dual();
    let plan = DiscreteFourier::new(target);
    let mut data = f.values().to_vec();
    let mut scratch = vec![Complex64::default(); plan.scratch_len()];
    plan.apply(&mut data, true, &mut scratch);
    SampledField::from_parts_unchecked(target, data)
}

/// Coordinate reflection `f(x) ↦ f(-x)` on the periodic grid.
pub fn reflect(f: &SampledField) -> SampledField {
    let g = *f.grid();
    let n = g.points();
    let values = (0..g.len())
        .map(|i| {
            let idx: Vec<usize> = g.unravel(i).into_iter().map(|j| (n - j) % n).collect();
            f.values()[g.ravel(&idx)]
        })
        .collect();
    SampledField::from_parts_unchecked(g, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Gaussian,
    Hann { half_width: f64, power: u32 },
}

/// Analysis window sampled on the same grid as the signal.
#[derive(Debug, Clone)]
pub struct WindowFunction {
    grid: Grid,
    values: Vec<Complex64>,
    l2norm: f64,
    kind: WindowKind,
    margin_x: f64,
    margin_xi: f64,
}

impl WindowFunction {
    pub fn from_field(field: SampledField, kind: WindowKind, margin_x: f64, margin_xi: f64) -> Result<Self> {
        let l2norm = field.l2_norm();
        if !(l2norm > 0.0) {
            return Err(Error::InvalidField("window is identically zero".into()));
        }
        let grid = *field.grid();
        Ok(Self { grid, values: field.into_values(), l2norm, kind, margin_x, margin_xi })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn l2norm(&self) -> f64 {
        self.l2norm
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    /// Width of the position-space band near the box edge where STFT values
    /// are affected by truncation.
    pub fn margin_x(&self) -> f64 {
        self.margin_x
    }

    /// Same, for the frequency axis.
    pub fn margin_xi(&self) -> f64 {
        self.margin_xi
    }

    /// `ψ` at the grid offset `idx - N/2` per axis; zero outside the box.
    fn at_offset(&self, offset: &[isize]) -> Complex64 {
        let half = (self.grid.points() / 2) as isize;
        let mut flat = 0usize;
        for &o in offset {
            let j = o + half;
            if j < 0 || j >= self.grid.points() as isize {
                return Complex64::default();
            }
            flat = flat * self.grid.points() + j as usize;
        }
        self.values[flat]
    }
}

/// Normalized Gaussian window `π^{-n/4} e^{-|x|²/2}`.
pub fn gaussian_window(g: &Grid) -> WindowFunction {
    let c = PI.powf(-(g.dim() as f64) / 4.0);
    let field = SampledField::from_fn(*g, |x| Complex64::new(c * (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0))
        .expect("finite window");
    WindowFunction::from_field(field, WindowKind::Gaussian, 2.0, 2.0).expect("nonzero window")
}

/// Separable Hann-type window `∏ cos^{2p}(π x_i / (2w))` on `|x_i| < w`.
/// Its spectrum decays like `|ξ|^{-(2p+1)}`, so larger `p` behaves better
/// in decay fits.
pub fn hann_window(g: &Grid, half_width: f64, power: u32) -> Result<WindowFunction> {
    if !(half_width > g.spacing()) || power == 0 {
        return Err(Error::InvalidField(format!("Hann half-width {half_width} below grid spacing or zero power")));
    }
    let field = SampledField::from_fn(*g, |x| {
        let v: f64 = x
            .iter()
            .map(|&t| if t.abs() < half_width { (PI * t / (2.0 * half_width)).cos().powi(2 * power as i32) } else { 0.0 })
            .product();
        Complex64::new(v, 0.0)
    })?;
    // main lobe of the spectrum extends to (p + 1)π / w
    let margin_xi = (power as f64 + 1.0) * PI / half_width;
    WindowFunction::from_field(field, WindowKind::Hann { half_width, power }, half_width, margin_xi)
}

/// Short-time Fourier transform samples over positions × frequencies.
#[derive(Debug, Clone)]
pub struct StftData {
    base: Grid,
    freq: Grid,
    /// `values[x * M + ξ]`.
    values: Vec<Complex64>,
    normalization: f64,
    margin_x: f64,
    margin_xi: f64,
}

/// Phase convention of the modulation inside the STFT integral.
pub const STFT_PHASE: &str = "exp(-i xi.y)";

impl StftData {
    pub fn base(&self) -> &Grid {
        &self.base
    }

    pub fn freq(&self) -> &Grid {
        &self.freq
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn at(&self, x: usize, xi: usize) -> Complex64 {
        self.values[x * self.base.len() + xi]
    }

    /// `Δ^n (π/L)^n Σ |V|²`, the discrete phase-space energy.
    pub fn energy(&self) -> f64 {
        let w = self.base.cell_volume() * self.freq.cell_volume();
        w * crate::numerics::sum_sq(&self.values)
    }

    /// Half-extents of the trusted region (position, frequency).
    pub fn trusted_extent(&self) -> (f64, f64) {
        (
            self.base.half_width() - self.margin_x,
            self.freq.half_width() - self.margin_xi,
        )
    }

    pub fn is_trusted(&self, x: &[f64], xi: &[f64]) -> bool {
        let (tx, tf) = self.trusted_extent();
        x.iter().all(|v| v.abs() <= tx) && xi.iter().all(|v| v.abs() <= tf)
    }

    /// Multilinear interpolation of `|V|` at phase-space point `(x, ξ)`;
    /// `None` outside the sampled range.
    pub fn magnitude_at(&self, x: &[f64], xi: &[f64]) -> Option<f64> {
        let n = self.base.dim();
        let np = self.base.points();
        let mut lower = Vec::with_capacity(2 * n);
        let mut frac = Vec::with_capacity(2 * n);
        for (coords, g) in [(x, &self.base), (xi, &self.freq)] {
            for &c in coords {
                let t = (c + g.half_width()) / g.spacing();
                if !(t >= 0.0 && t <= (np - 1) as f64) {
                    return None;
                }
                let j = (t.floor() as usize).min(np - 2);
                lower.push(j);
                frac.push(t - j as f64);
            }
        }
        let d = 2 * n;
        let mut acc = 0.0;
        let mut idx = vec![0usize; d];
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            for a in 0..d {
                let bit = (corner >> a) & 1;
                idx[a] = lower[a] + bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if w == 0.0 {
                continue;
            }
            let xf = self.base.ravel(&idx[..n]);
            let ff = self.freq.ravel(&idx[n..]);
            acc += w * self.at(xf, ff).norm();
        }
        Some(acc)
    }

    /// CSV with columns `x1..xn, xi1..xin, abs`.
    pub fn write_magnitude_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.base.dim();
        let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        header.extend((1..=n).map(|i| format!("xi{i}")));
        header.push("abs".into());
        writeln!(out, "{}", header.join(","))?;
        let m = self.base.len();
        for xi in 0..m {
            let xp = self.base.point(xi);
            for fi in 0..m {
                let fp = self.freq.point(fi);
                let cols: Vec<String> = xp
                    .iter()
                    .chain(fp.iter())
                    .map(|v| format!("{v}"))
                    .chain(std::iter::once(format!("{:e}", self.at(xi, fi).norm())))
                    .collect();
                writeln!(out, "{}", cols.join(","))?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "stft",
            "n": self.base.dim(),
            "N": self.base.points(),
            "L": self.base.half_width(),
            "normalization": self.normalization,
            "phase": STFT_PHASE,
            "re": self.values.iter().map(|z| z.re).collect::<Vec<_>>(),
            "im": self.values.iter().map(|z| z.im).collect::<Vec<_>>(),
        })
    }
}

/// `V_ψ u(x, ξ) = (2π)^{-n/2}/‖ψ‖ ∫ u(y) conj(ψ(y−x)) e^{-iξ·y} dy` at all
/// grid positions and dual-grid frequencies. One transform per position,
/// data-parallel over positions.
pub fn stft(u: &SampledField, window: &WindowFunction) -> Result<StftData> {
    u.grid().check_same(window.grid())?;
    let g = *u.grid();
    let m = g.len();
    let plan = DiscreteFourier::new(g);
    let inv_norm = 1.0 / window.l2norm();
    let mut values = vec![Complex64::default(); m * m];
    let uvals = u.values();
    par::for_each_chunk_mut(&mut values, m, |x_flat, row| {
        let xi = g.unravel(x_flat);
        let mut scratch = vec![Complex64::default(); plan.scratch_len()];
        let mut offset = vec![0isize; g.dim()];
        for (y_flat, slot) in row.iter_mut().enumerate() {
            let yi = g.unravel(y_flat);
            for a in 0..g.dim() {
                offset[a] = yi[a] as isize - xi[a] as isize;
            }
            *slot = uvals[y_flat] * window.at_offset(&offset).conj();
        }
        plan.apply(row, false, &mut scratch);
        for v in row.iter_mut() {
            *v *= inv_norm;
        }
    });
    Ok(StftData {
        base: g,
        freq: g.dual(),
        values,
        normalization: (2.0 * PI).powf(-(g.dim() as f64) / 2.0) * inv_norm,
        margin_x: window.margin_x(),
        margin_xi: window.margin_xi(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_l2_distance, make_grid, AnalyticDistribution};

    fn direct_forward(f: &SampledField) -> SampledField {
        // O(M²) reference sum of the continuum formula
        let g = *f.grid();
        let d = g.dual();
        let w = g.cell_volume() / (2.0 * PI).powf(g.dim() as f64 / 2.0);
        SampledField::from_fn(d, |xi| {
            let mut acc = Complex64::default();
            for (j, v) in f.values().iter().enumerate() {
                let x = g.point(j);
                let ph: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
                acc += v * Complex64::from_polar(1.0, -ph);
            }
            acc * w
        })
        .unwrap()
    }

    #[test]
    fn fft_matches_direct_sum() {
        let g = make_grid(2, 8, 3.0).unwrap();
        let f = AnalyticDistribution::gaussian(&[0.3, -0.2], 0.9, &[1.0, -0.5]).sample(&g).unwrap();
        let a = fourier_forward(&f);
        let b = direct_forward(&f);
        assert!(field_l2_distance(&b, &a).unwrap() < 1e-13);
    }

    #[test]
    fn gaussian_is_fixed_point() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let f = AnalyticDistribution::standard_gaussian(1).sample(&g).unwrap();
        let ff = fourier_forward(&f);
        let expect = AnalyticDistribution::standard_gaussian(1).sample(ff.grid()).unwrap();
        assert!(field_l2_distance(&expect, &ff).unwrap() <= 1e-8);
        assert!((ff.l2_norm() - f.l2_norm()).abs() < 1e-10);
    }

    #[test]
    fn delta_transforms_to_constant() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let d = AnalyticDistribution::delta(&[0.0]).sample(&g).unwrap();
        let fd = fourier_forward(&d);
        let c = (2.0 * PI).powf(-0.5);
        for v in fd.values() {
            assert!((v - Complex64::new(c, 0.0)).norm() < 1e-15);
        }
        let back = fourier_inverse(&fd);
        assert!(field_l2_distance(&d, &back).unwrap() < 1e-14);
        assert!(back.grid().same_as(&g));
    }

    #[test]
    fn shift_theorem() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let a = 1.5;
        let shifted = AnalyticDistribution::gaussian(&[a], 1.0, &[0.0]).sample(&g).unwrap();
        let fs = fourier_forward(&shifted);
        let expect = SampledField::from_fn(g.dual(), |xi| {
            Complex64::from_polar((-xi[0] * xi[0] / 2.0).exp(), -a * xi[0])
        })
        .unwrap();
        assert!(field_l2_distance(&expect, &fs).unwrap() < 1e-8);
    }

    #[test]
    fn double_forward_is_reflection() {
        let g = make_grid(2, 16, 4.0).unwrap();
        let f = AnalyticDistribution::gaussian(&[0.5, -1.0], 0.7, &[2.0, 1.0]).sample(&g).unwrap();
        let ff = fourier_forward(&fourier_forward(&f));
        assert!(ff.grid().same_as(&g));
        assert!(field_l2_distance(&reflect(&f), &ff).unwrap() < 1e-10);
        let inv = fourier_inverse(&fourier_forward(&f));
        assert!(field_l2_distance(&f, &inv).unwrap() < 1e-10);
        // inverse = forward composed with reflection
        let fwd_on_dual = fourier_forward(&reflect(&fourier_forward(&f)));
        assert!(field_l2_distance(&f, &fwd_on_dual).unwrap() < 1e-10);
    }

    #[test]
    fn window_properties() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let w = gaussian_window(&g);
        assert!((w.l2norm() - 1.0).abs() < 1e-10);
        let peak = w.values()[32];
        assert!((peak.re - PI.powf(-0.25)).abs() < 1e-15);
        for j in 1..32 {
            assert_eq!(w.values()[32 + j], w.values()[32 - j]);
        }
    }

    #[test]
    fn stft_of_window_and_delta() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let w = gaussian_window(&g);
        let psi = SampledField::new(g, w.values().to_vec()).unwrap();
        let v = stft(&psi, &w).unwrap();
        let c = (2.0 * PI).powf(-0.5);
        assert!((v.at(32, 32).norm() - c).abs() < 1e-12);
        assert!((v.normalization() - c).abs() < 1e-12);

        let a = 1.0;
        let d = AnalyticDistribution::delta(&[a]).sample(&g).unwrap();
        let vd = stft(&d, &w).unwrap();
        for xi in [0usize, 10, 40] {
            let x = g.coord(xi);
            let expect = c * PI.powf(-0.25) * (-(a - x) * (a - x) / 2.0).exp();
            for f in [0usize, 17, 63] {
                assert!((vd.at(xi, f).norm() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stft_plane_wave_matches_direct_sum() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let w = gaussian_window(&g);
        let b = 2.0;
        let u = AnalyticDistribution::plane_wave(&[b]).sample(&g).unwrap();
        let v = stft(&u, &w).unwrap();
        let dual = g.dual();
        for &(xi, fi) in &[(32usize, 32usize), (20, 37), (40, 30), (32, 40)] {
            let (x, f) = (g.coord(xi), dual.coord(fi));
            let mut acc = Complex64::default();
            for j in 0..64 {
                let y = g.coord(j);
                let psi = PI.powf(-0.25) * (-(y - x) * (y - x) / 2.0).exp();
                acc += Complex64::from_polar(psi, b * y - f * y);
            }
            let direct = acc * g.spacing() / (2.0 * PI).sqrt();
            assert!((direct - v.at(xi, fi)).norm() < 1e-12);
        }
        // ridge at ξ = b, flat in x away from the edges
        let row: Vec<f64> = (0..64).map(|f| v.at(32, f).norm()).collect();
        let peak = row.iter().cloned().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        assert!((dual.coord(peak) - b).abs() <= dual.spacing());
        let ridge_index = dual.nearest_index(b).unwrap();
        assert!((v.at(28, ridge_index).norm() - v.at(36, ridge_index).norm()).abs() < 1e-8);
    }

    #[test]
    fn parseval_constant_is_one() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let w = gaussian_window(&g);
        for d in [
            AnalyticDistribution::standard_gaussian(1),
            AnalyticDistribution::gaussian(&[1.0], 0.7, &[1.5]),
        ] {
            let u = d.sample(&g).unwrap();
            let v = stft(&u, &w).unwrap();
            let rel = (v.energy() - u.l2_norm().powi(2)).abs() / u.l2_norm().powi(2);
            assert!(rel < 1e-6, "{rel}");
        }
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g = make_grid(1, 64, 8.0).unwrap();
        let w = gaussian_window(&make_grid(1, 32, 8.0).unwrap());
        let u = AnalyticDistribution::standard_gaussian(1).sample(&g).unwrap();
        assert!(stft(&u, &w).is_err());
    }
}
