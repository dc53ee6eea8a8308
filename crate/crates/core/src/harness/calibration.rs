//! Measured normalization constants, written by `twistlab calibrate` and
//! checked in under `data/calibration.json`.

use serde::{Deserialize, Serialize};

use crate::field::{AnalyticDistribution, AntisymmetricMatrix, Grid};
use crate::spectral::{gaussian_window, stft};
use crate::twisted::{star_product_constant, star_via_product_with, twisted_convolution};
use crate::{Error, Result};

use super::config::CalibrateConfig;

pub const CALIBRATION_SCHEMA: &str = "twistlab.calibration/1";

const BUNDLED: &str = include_str!("../../data/calibration.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub dim: usize,
    pub measured: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub schema: String,
    pub points: usize,
    pub half_width: f64,
    /// Phase-space energy of the STFT over `‖u‖²`.
    pub parseval: Vec<Constant>,
    /// `c(n)` in `f ⋆ g = c(n) F(F⁻¹f ∗ F⁻¹g)`.
    pub star_constant: Vec<Constant>,
}

impl Calibration {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED).expect("bundled calibration parses")
    }

    pub fn star_constant(&self, dim: usize) -> Option<f64> {
        self.star_constant.iter().find(|c| c.dim == dim).map(|c| c.measured)
    }

    pub fn parseval(&self, dim: usize) -> Option<f64> {
        self.parseval.iter().find(|c| c.dim == dim).map(|c| c.measured)
    }
}

fn theta_for(dim: usize) -> AntisymmetricMatrix {
    if dim.is_multiple_of(2) {
        AntisymmetricMatrix::symplectic(dim / 2)
    } else {
        AntisymmetricMatrix::zero(dim)
    }
}

/// Least-squares `c` minimising `‖c·raw − reference‖` over Gaussian pairs.
pub fn measure_star_constant(grid: &Grid) -> Result<f64> {
    let n = grid.dim();
    let theta = theta_for(n);
    let f = AnalyticDistribution::standard_gaussian(n).sample(grid)?;
    let mut center = vec![0.0; n];
    center[0] = 0.5;
    let mut modulation = vec![0.0; n];
    modulation[n - 1] = 1.0;
    let g = AnalyticDistribution::gaussian(&center, 0.8, &modulation).sample(grid)?;
    let reference = twisted_convolution(&f, &g, &theta)?;
    let raw = star_via_product_with(&f, &g, &theta, 1.0)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (r, s) in raw.values().iter().zip(reference.values()) {
        num += (r.conj() * s).re;
        den += r.norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::Config("degenerate calibration field".into()));
    }
    Ok(num / den)
}

pub fn measure_parseval(grid: &Grid) -> Result<f64> {
    let n = grid.dim();
    let mut center = vec![0.0; n];
    center[0] = 1.0;
    let u = AnalyticDistribution::gaussian(&center, 0.7, &vec![1.5; n]).sample(grid)?;
    let v = stft(&u, &gaussian_window(grid))?;
    Ok(v.energy() / u.l2_norm().powi(2))
}

pub fn run_calibration(cfg: &CalibrateConfig) -> Result<Calibration> {
    let mut parseval = Vec::new();
    let mut star_constant = Vec::new();
    for &n in &cfg.dims {
        let grid = Grid::new(n, cfg.points, cfg.half_width)?;
        parseval.push(Constant { dim: n, measured: measure_parseval(&grid)?, analytic: 1.0 });
        star_constant.push(Constant { dim: n, measured: measure_star_constant(&grid)?, analytic: star_product_constant(n) });
    }
    Ok(Calibration {
        schema: CALIBRATION_SCHEMA.into(),
        points: cfg.points,
        half_width: cfg.half_width,
        parseval,
        star_constant,
    })
}
