//! Numerical Gabor wavefront sets: ray-wise decay regression of `|V_ψ u|`
//! over a grid of phase-space directions.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone::{angular_containment_directions, Cap, ConicSet, ContainmentReport};
use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::numerics::{angle_deg, dot, norm};
use crate::par;
use crate::spectral::{fourier_forward, gaussian_window, hann_window, stft, StftData, WindowFunction, WindowKind};
use crate::twisted::chirp_field;

/// Unit directions on `S^{d−1}`, stored in antipodal pairs: entry `i + D/2`
/// is `−` entry `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<Vec<f64>>,
    resolution_deg: f64,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Random orthogonal matrix from Gram–Schmidt on Gaussian columns.
fn random_rotation(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        for b in &q {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= p * c);
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            q.push(v.iter().map(|a| a / nv).collect());
        }
    }
    q
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|a| a / n).collect()
}

impl DirectionGrid {
    /// `count` equally spaced angles on the circle, starting at angle 0.
    pub fn circle(count: usize) -> Result<Self> {
        if count < 4 || !count.is_multiple_of(2) {
            return Err(Error::Config("direction count must be even and at least 4".into()));
        }
        let half = count / 2;
        let mut directions = Vec::with_capacity(count);
        for sign in [1.0, -1.0] {
            for i in 0..half {
                let t = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                directions.push(vec![sign * t.cos(), sign * t.sin()]);
            }
        }
        Ok(Self { dim: 2, directions, resolution_deg: 180.0 / count as f64 })
    }

    /// Low-discrepancy directions with antipodal closure. In dimension 4
    /// these are Halton points mapped by the uniform quaternion map; in
    /// higher dimensions normalized Gaussian samples. A seeded rotation is
    /// applied and the covering radius is estimated by seeded probing.
    pub fn sphere(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim == 2 {
            return Self::circle(count);
        }
        if dim < 2 || count < 4 || !count.is_multiple_of(2) {
            return Err(Error::Config("direction count must be even and at least 4".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rot = random_rotation(dim, &mut rng);
        let half = count / 2;
        let mut base = Vec::with_capacity(half);
        for i in 1..=half as u64 {
            let v = if dim == 4 {
                let (u1, u2, u3) = (radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5));
                let tau = 2.0 * std::f64::consts::PI;
                let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
                vec![a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin(), b * (tau * u3).cos()]
            } else {
                (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect()
            };
            let r: Vec<f64> = rot.iter().map(|row| dot(row, &v)).collect();
            base.push(normalize(&r));
        }
        let mut directions = base.clone();
        directions.extend(base.iter().map(|v| v.iter().map(|a| -a).collect()));
        let mut grid = Self { dim, directions, resolution_deg: 0.0 };
        grid.resolution_deg = grid.estimate_covering_radius(4000, seed ^ 0x9e37_79b9);
        Ok(grid)
    }

    fn estimate_covering_radius(&self, probes: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probes: Vec<Vec<f64>> = (0..probes)
            .map(|_| normalize(&(0..self.dim).map(|_| StandardNormal.sample(&mut rng)).collect::<Vec<f64>>()))
            .collect();
        let worst = par::map_indices(probes.len(), |p| {
            self.directions.iter().map(|d| dot(d, &probes[p])).fold(f64::NEG_INFINITY, f64::max)
        });
        let c = worst.into_iter().fold(1.0, f64::min).clamp(-1.0, 1.0);
        c.acos().to_degrees()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// Angular resolution (covering radius) in degrees.
    pub fn resolution_deg(&self) -> f64 {
        self.resolution_deg
    }

    pub fn antipode(&self, i: usize) -> usize {
        let h = self.len() / 2;
        if i < h {
            i + h
        } else {
            i - h
        }
    }

    /// Indices of directions within `radius_deg` of direction `i`, excluding `i`.
    fn neighbors(&self, radius_deg: f64) -> Vec<Vec<usize>> {
        let c = radius_deg.to_radians().cos();
        if self.dim == 2 {
            let d = self.len();
            let step = 360.0 / d as f64;
            let k = (radius_deg / step).floor() as usize;
            // entry i sits at angle i·step, the second half being the antipodes
            return (0..d)
                .map(|i| {
                    (1..=k)
                        .flat_map(|s| [(i + s) % d, (i + d - s) % d])
                        .collect()
                })
                .collect();
        }
        par::map_indices(self.len(), |i| {
            (0..self.len())
                .filter(|&j| j != i && dot(&self.directions[i], &self.directions[j]) >= c)
                .collect()
        })
    }
}

/// Where rays start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Apex {
    Origin,
    /// `|V|²`-weighted centroid of the trusted region.
    #[default]
    Centroid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorParams {
    /// Directions with fitted decay order below this are singular.
    pub k_test: f64,
    /// Outer radius; defaults to 0.8 of the trusted ball about the apex.
    pub r_max: Option<f64>,
    /// `r_min = r_min_fraction · r_max`.
    pub r_min_fraction: f64,
    /// Number of log-spaced radii.
    pub radii: usize,
    /// Also flag directions whose `|V|` at `r_max` exceeds this fraction of `max |V|`.
    pub floor: Option<f64>,
    pub apex: Apex,
    /// Keep only directions whose `k̂` is minimal among neighbors within
    /// `ridge_radius_deg`.
    pub ridge: bool,
    /// Defaults to 3° on the circle and 2.5 covering radii otherwise.
    pub ridge_radius_deg: Option<f64>,
    pub directions: Option<usize>,
    pub seed: u64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self {
            k_test: 1.0,
            r_max: None,
            r_min_fraction: 0.2,
            radii: 12,
            floor: None,
            apex: Apex::Centroid,
            ridge: true,
            ridge_radius_deg: None,
            directions: None,
            seed: 0,
        }
    }
}

impl EstimatorParams {
    pub fn direction_count(&self, dim: usize) -> usize {
        self.directions.unwrap_or(if dim == 2 { 360 } else { 2048 })
    }

    pub fn direction_grid(&self, dim: usize) -> Result<DirectionGrid> {
        DirectionGrid::sphere(dim, self.direction_count(dim), self.seed)
    }
}

#[derive(Debug, Clone)]
pub struct WavefrontEstimate {
    pub grid: DirectionGrid,
    pub params: EstimatorParams,
    pub apex: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub k_hat: Vec<f64>,
    pub residual: Vec<f64>,
    pub trusted: Vec<bool>,
    /// `|V|` at `r_max` relative to `max |V|`.
    pub end_level: Vec<f64>,
    pub ridge: Vec<bool>,
    pub flagged: Vec<bool>,
}

impl WavefrontEstimate {
    fn below_threshold(&self, i: usize) -> bool {
        self.k_hat[i] < self.params.k_test || self.params.floor.is_some_and(|f| self.end_level[i] > f)
    }

    fn refresh_flags(&mut self) {
        self.flagged = (0..self.grid.len())
            .map(|i| self.trusted[i] && self.below_threshold(i) && (!self.params.ridge || self.ridge[i]))
            .collect();
    }

    /// Same fits, new threshold.
    pub fn with_k_test(&self, k_test: f64) -> Self {
        let mut e = self.clone();
        e.params.k_test = k_test;
        e.refresh_flags();
        e
    }

    pub fn flagged_directions(&self) -> Vec<Vec<f64>> {
        self.grid.directions.iter().zip(&self.flagged).filter(|(_, f)| **f).map(|(d, _)| d.clone()).collect()
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|f| **f).count()
    }

    pub fn to_caps(&self, radius_deg: f64) -> ConicSet {
        let caps = self.flagged_directions().into_iter().map(|center| Cap { center, radius_deg }).collect();
        ConicSet::caps(self.grid.dim(), caps)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "directions": self.grid.directions,
            "k_hat": self.k_hat,
            "residual": self.residual,
            "trusted": self.trusted,
            "flagged": self.flagged,
            "resolution_deg": self.grid.resolution_deg,
            "apex": self.apex,
            "params": {
                "k_test": self.params.k_test,
                "r_min": self.r_min,
                "r_max": self.r_max,
                "radii": self.params.radii,
                "floor": self.params.floor,
                "apex": self.params.apex,
                "ridge": self.params.ridge,
                "directions": self.grid.len(),
                "seed": self.params.seed,
            },
        })
    }

    /// One row per direction: components, `k_hat`, residual, trusted, flagged.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let d = self.grid.dim();
        let mut header: Vec<String> = (1..=d).map(|i| format!("w{i}")).collect();
        header.extend(["k_hat", "residual", "trusted", "flagged"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.grid.len() {
            let mut cols: Vec<String> = self.grid.directions[i].iter().map(|v| format!("{v}")).collect();
            cols.push(format!("{}", self.k_hat[i]));
            cols.push(format!("{}", self.residual[i]));
            cols.push(format!("{}", self.trusted[i]));
            cols.push(format!("{}", self.flagged[i]));
            writeln!(out, "{}", cols.join(","))?;
        }
        Ok(())
    }
}

fn centroid(v: &StftData) -> Vec<f64> {
    let n = v.base().dim();
    let m = v.base().len();
    let parts = par::map_indices(m, |xi| {
        let xp = v.base().point(xi);
        let mut acc = vec![0.0; 2 * n + 1];
        for fi in 0..m {
            let fp = v.freq().point(fi);
            if !v.is_trusted(&xp, &fp) {
                continue;
            }
            let w = v.at(xi, fi).norm_sqr();
            for k in 0..n {
                acc[k] += w * xp[k];
                acc[n + k] += w * fp[k];
            }
            acc[2 * n] += w;
        }
        acc
    });
    let mut total = vec![0.0; 2 * n + 1];
    for p in parts {
        total.iter_mut().zip(p).for_each(|(a, b)| *a += b);
    }
    let w = total[2 * n];
    if w == 0.0 {
        return vec![0.0; 2 * n];
    }
    total[..2 * n].iter().map(|a| a / w).collect()
}

/// Least-squares slope and RMS residual of `y` against `x`.
fn fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let k = sxy / sxx;
    let res = x.iter().zip(y).map(|(a, b)| (b - my - k * (a - mx)).powi(2)).sum::<f64>() / m;
    (k, res.sqrt())
}

/// Fits the decay order `k̂` of `|V|` along rays from the apex.
pub fn estimate_from_stft(v: &StftData, params: &EstimatorParams) -> Result<WavefrontEstimate> {
    let n = v.base().dim();
    let d = 2 * n;
    if params.radii < 2 || !(params.r_min_fraction > 0.0 && params.r_min_fraction < 1.0) {
        return Err(Error::Config("need at least 2 radii and 0 < r_min_fraction < 1".into()));
    }
    let vmax = v.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if vmax == 0.0 {
        return Err(Error::Estimator("field is identically zero".into()));
    }
    let apex = match params.apex {
        Apex::Origin => vec![0.0; d],
        Apex::Centroid => centroid(v),
    };
    let (tx, tf) = v.trusted_extent();
    let ball = (0..d)
        .map(|k| if k < n { tx - apex[k].abs() } else { tf - apex[k].abs() })
        .fold(f64::INFINITY, f64::min);
    if ball < 1.0 {
        return Err(Error::Estimator(format!("trusted region radius {ball:.3} about the apex is too small")));
    }
    let r_max = params.r_max.unwrap_or(0.8 * ball);
    let r_min = params.r_min_fraction * r_max;
    let radii: Vec<f64> = (0..params.radii)
        .map(|i| r_min * (r_max / r_min).powf(i as f64 / (params.radii - 1) as f64))
        .collect();
    let xs: Vec<f64> = radii.iter().map(|r| (1.0 + r * r).ln()).collect();
    let grid = params.direction_grid(d)?;
    let fits = par::map_indices(grid.len(), |i| {
        let w = &grid.directions[i];
        let mut ys = Vec::with_capacity(radii.len());
        let mut trusted = true;
        let mut last = 0.0;
        for &r in &radii {
            let p: Vec<f64> = apex.iter().zip(w).map(|(a, b)| a + r * b).collect();
            trusted &= v.is_trusted(&p[..n], &p[n..]);
            let m = v.magnitude_at(&p[..n], &p[n..]).unwrap_or(0.0);
            last = m;
            ys.push(-(m.max(f64::MIN_POSITIVE)).ln());
        }
        let (k, res) = fit(&xs, &ys);
        (k, res, trusted, last / vmax)
    });
    let k_hat: Vec<f64> = fits.iter().map(|f| f.0).collect();
    let ridge_radius = params
        .ridge_radius_deg
        .unwrap_or(if d == 2 { 3.0 } else { 2.5 * grid.resolution_deg() });
    let ridge = if params.ridge {
        let nb = grid.neighbors(ridge_radius);
        (0..grid.len()).map(|i| nb[i].iter().all(|&j| !fits[j].2 || k_hat[i] <= k_hat[j])).collect()
    } else {
        vec![true; grid.len()]
    };
    let mut est = WavefrontEstimate {
        grid,
        params: params.clone(),
        apex,
        r_min,
        r_max,
        residual: fits.iter().map(|f| f.1).collect(),
        trusted: fits.iter().map(|f| f.2).collect(),
        end_level: fits.iter().map(|f| f.3).collect(),
        k_hat,
        ridge,
        flagged: Vec::new(),
    };
    est.refresh_flags();
    Ok(est)
}

pub fn estimate_wf(u: &SampledField, window: &WindowFunction, params: &EstimatorParams) -> Result<WavefrontEstimate> {
    estimate_from_stft(&stft(u, window)?, params)
}

/// Window of the same family built on another grid.
pub fn window_like(window: &WindowFunction, grid: &crate::field::Grid) -> Result<WindowFunction> {
    match window.kind() {
        WindowKind::Gaussian => Ok(gaussian_window(grid)),
        WindowKind::Hann { half_width, power } => hann_window(grid, half_width, power),
    }
}

/// Symmetric angular Hausdorff distance in degrees; 0 for two empty sets and
/// 180 when exactly one is empty.
pub fn angular_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return 180.0,
        _ => {}
    }
    let one_way = |p: &[Vec<f64>], q: &[Vec<f64>]| {
        p.iter()
            .map(|x| q.iter().map(|y| angle_deg(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[derive(Debug, Clone)]
pub struct TransformCheck {
    pub distance_deg: f64,
    pub flagged_before: usize,
    pub flagged_after: usize,
    pub resolution_deg: f64,
}

impl TransformCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "distance_deg": self.distance_deg,
            "flagged_before": self.flagged_before,
            "flagged_after": self.flagged_after,
            "resolution_deg": self.resolution_deg,
        })
    }
}

fn rotate90(v: &[f64]) -> Vec<f64> {
    let n = v.len() / 2;
    v[n..].iter().cloned().chain(v[..n].iter().map(|a| -a)).collect()
}

/// Compares `(x, ξ) ↦ (ξ, −x)` applied to the flagged set of `u` with the
/// flagged set of `F u`.
pub fn check_fourier_symmetry(u: &SampledField, window: &WindowFunction, params: &EstimatorParams) -> Result<TransformCheck> {
    let before = estimate_wf(u, window, params)?;
    let fu = fourier_forward(u);
    let after = estimate_wf(&fu, &window_like(window, fu.grid())?, params)?;
    let rotated: Vec<Vec<f64>> = before.flagged_directions().iter().map(|v| rotate90(v)).collect();
    Ok(TransformCheck {
        distance_deg: angular_hausdorff(&rotated, &after.flagged_directions()),
        flagged_before: before.flagged_count(),
        flagged_after: after.flagged_count(),
        resolution_deg: before.grid.resolution_deg(),
    })
}

/// Compares `(x, ξ) ↦ (x, ξ + Ax)` applied to the flagged set of `u` with the
/// flagged set of `e^{(i/2) xᵀAx} u`.
pub fn check_chirp_shear(
    u: &SampledField,
    a: &[Vec<f64>],
    window: &WindowFunction,
    params: &EstimatorParams,
) -> Result<TransformCheck> {
    let neg: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    let chirp = chirp_field(&neg, u.grid())?;
    let cu = u.pointwise_product(&chirp)?;
    let before = estimate_wf(u, window, params)?;
    let after = estimate_wf(&cu, window, params)?;
    let n = a.len();
    let sheared: Vec<Vec<f64>> = before
        .flagged_directions()
        .iter()
        .map(|v| {
            let ax = crate::numerics::mat_vec(a, &v[..n]);
            let w: Vec<f64> = v[..n].iter().cloned().chain(v[n..].iter().zip(&ax).map(|(p, q)| p + q)).collect();
            normalize(&w)
        })
        .collect();
    Ok(TransformCheck {
        distance_deg: angular_hausdorff(&sheared, &after.flagged_directions()),
        flagged_before: before.flagged_count(),
        flagged_after: after.flagged_count(),
        resolution_deg: before.grid.resolution_deg(),
    })
}

/// Fraction of flagged directions within `tol_deg` of `s`.
pub fn angular_containment(est: &WavefrontEstimate, s: &ConicSet, tol_deg: f64) -> Result<ContainmentReport> {
    angular_containment_directions(&est.flagged_directions(), s, tol_deg)
}
