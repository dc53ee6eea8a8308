//! Twisted convolution `⋆`, the twisted convolution product `∗`, the doubled
//! chirp matrix and the Fourier relation between the two products.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AntisymmetricMatrix, Grid, SampledField};
use crate::numerics::{is_symmetric, CompensatedSum};
use crate::par;
use crate::spectral::{fourier_forward, fourier_inverse};

/// Constant `c(n)` in `f ⋆ g = c(n) · F(F⁻¹f ∗ F⁻¹g)` under the unitary
/// convention of [`crate::spectral`]. The `calibrate` subcommand re-measures
/// it by comparing both routes on Gaussians.
pub fn star_product_constant(n: usize) -> f64 {
    (2.0 * PI).powf(n as f64 / 2.0)
}

/// How `f(x − y)` is evaluated when `x − y` leaves the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    ZeroPad,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    /// Twisted convolution.
    Star,
    /// Twisted convolution product.
    Product,
    Pointwise,
}

/// `θ` together with the symmetric `2n×2n` matrix `Θ = ½[[0, θ], [−θ, 0]]`
/// satisfying `(k,p)ᵀ Θ (k,p) = kᵀθp`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpMatrix {
    theta: AntisymmetricMatrix,
    doubled: Vec<Vec<f64>>,
}

impl ChirpMatrix {
    pub fn new(theta: AntisymmetricMatrix) -> Self {
        let n = theta.dim();
        let mut doubled = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                doubled[i][n + j] = 0.5 * theta.entries()[i][j];
                doubled[n + i][j] = -0.5 * theta.entries()[i][j];
            }
        }
        Self { theta, doubled }
    }

    pub fn theta(&self) -> &AntisymmetricMatrix {
        &self.theta
    }

    pub fn doubled(&self) -> &[Vec<f64>] {
        &self.doubled
    }

    /// `Kᵀ(ΘK)`.
    pub fn quadratic(&self, k: &[f64]) -> f64 {
        let tk = crate::numerics::mat_vec(&self.doubled, k);
        k.iter().zip(&tk).map(|(a, b)| a * b).sum()
    }
}

/// Samples of `e^{-(i/2) Kᵀ(S K)}` on `grid`.
pub fn chirp_field(s: &[Vec<f64>], grid: &Grid) -> Result<SampledField> {
    if !is_symmetric(s) {
        return Err(Error::NotSymmetric);
    }
    if s.len() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), got: s.len() });
    }
    let reach = s
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>() * grid.half_width())
        .fold(0.0, f64::max);
    if reach > grid.nyquist() {
        return Err(Error::Nyquist(format!(
            "chirp frequency {reach} at box corner exceeds band {}",
            grid.nyquist()
        )));
    }
    SampledField::from_fn(*grid, |k| {
        let sk = crate::numerics::mat_vec(s, k);
        let q: f64 = k.iter().zip(&sk).map(|(a, b)| a * b).sum();
        Complex64::from_polar(1.0, -0.5 * q)
    })
}

/// `out(p_k) = w Σ_l a(p_k − p_l) b(p_l) e^{-(i/2) p_kᵀ θ p_l}` by direct
/// summation over the grid, parallel over output points.
fn twisted_sum(
    grid: &Grid,
    a: &[Complex64],
    b: &[Complex64],
    theta: &AntisymmetricMatrix,
    boundary: Boundary,
    weight: f64,
) -> Vec<Complex64> {
    let n = grid.dim();
    let np = grid.points() as isize;
    let half = np / 2;
    let m = grid.len();
    let idx: Vec<Vec<usize>> = (0..m).map(|i| grid.unravel(i)).collect();
    let coords: Vec<Vec<f64>> = (0..m).map(|i| grid.point(i)).collect();
    let theta_p: Vec<Vec<f64>> = coords
        .iter()
        .map(|p| crate::numerics::mat_vec(theta.entries(), p))
        .collect();
    let twisted = !theta.is_zero();
    par::map_indices(m, |k| {
        let mut acc = CompensatedSum::new();
        let ik = &idx[k];
        let pk = &coords[k];
        'terms: for l in 0..m {
            let bl = b[l];
            if bl == Complex64::default() {
                continue;
            }
            let il = &idx[l];
            let mut flat = 0usize;
            for ax in 0..n {
                let mut j = ik[ax] as isize - il[ax] as isize + half;
                if j < 0 || j >= np {
                    match boundary {
                        Boundary::ZeroPad => continue 'terms,
                        Boundary::Periodic => j = j.rem_euclid(np),
                    }
                }
                flat = flat * np as usize + j as usize;
            }
            let mut term = a[flat] * bl;
            if twisted {
                let ph: f64 = pk.iter().zip(&theta_p[l]).map(|(x, y)| x * y).sum();
                term *= Complex64::from_polar(1.0, -0.5 * ph);
            }
            acc.add(term);
        }
        acc.value() * weight
    })
}

fn check_pair(f: &SampledField, g: &SampledField, theta: &AntisymmetricMatrix) -> Result<()> {
    f.grid().check_same(g.grid())?;
    if theta.dim() != f.grid().dim() {
        return Err(Error::DimensionMismatch { expected: f.grid().dim(), got: theta.dim() });
    }
    Ok(())
}

/// `f ⋆ g(x) = ∫ f(x−y) g(y) e^{-(i/2) xᵀθy} dy` by `Δ^n`-weighted summation.
pub fn twisted_convolution(
    f: &SampledField,
    g: &SampledField,
    theta: &AntisymmetricMatrix,
) -> Result<SampledField> {
    twisted_convolution_with(f, g, theta, Boundary::ZeroPad)
}

pub fn twisted_convolution_with(
    f: &SampledField,
    g: &SampledField,
    theta: &AntisymmetricMatrix,
    boundary: Boundary,
) -> Result<SampledField> {
    check_pair(f, g, theta)?;
    let grid = *f.grid();
    let out = twisted_sum(&grid, f.values(), g.values(), theta, boundary, grid.cell_volume());
    SampledField::new(grid, out)
}

/// `u ∗ v = F⁻¹[(2π)^{-n/2} ∫ Fu(ξ−η) Fv(η) e^{-(i/2) ξᵀθη} dη]`. The
/// `(2π)^{-n/2}` factor makes `θ = 0` reproduce the pointwise product.
pub fn twisted_convolution_product(
    u: &SampledField,
    v: &SampledField,
    theta: &AntisymmetricMatrix,
) -> Result<SampledField> {
    check_pair(u, v, theta)?;
    let fu = fourier_forward(u);
    let fv = fourier_forward(v);
    let dual = *fu.grid();
    let w = dual.cell_volume() / (2.0 * PI).powf(dual.dim() as f64 / 2.0);
    let inner = twisted_sum(&dual, fu.values(), fv.values(), theta, Boundary::ZeroPad, w);
    let inner = SampledField::new(dual, inner)?;
    Ok(fourier_inverse(&inner))
}

/// Twisted convolution computed through the product route,
/// `c(n) · F(F⁻¹f ∗ F⁻¹g)`.
pub fn star_via_product(
    f: &SampledField,
    g: &SampledField,
    theta: &AntisymmetricMatrix,
) -> Result<SampledField> {
    star_via_product_with(f, g, theta, star_product_constant(f.grid().dim()))
}

/// [`star_via_product`] with an explicit constant, e.g. a calibrated one.
pub fn star_via_product_with(
    f: &SampledField,
    g: &SampledField,
    theta: &AntisymmetricMatrix,
    c: f64,
) -> Result<SampledField> {
    check_pair(f, g, theta)?;
    let pf = fourier_inverse(f);
    let pg = fourier_inverse(g);
    let prod = twisted_convolution_product(&pf, &pg, theta)?;
    Ok(fourier_forward(&prod).scale(Complex64::new(c, 0.0)))
}

pub fn apply_product(
    kind: ProductKind,
    f: &SampledField,
    g: &SampledField,
    theta: &AntisymmetricMatrix,
) -> Result<SampledField> {
    match kind {
        ProductKind::Star => twisted_convolution(f, g, theta),
        ProductKind::Product => twisted_convolution_product(f, g, theta),
        ProductKind::Pointwise => f.pointwise_product(g),
    }
}

/// Relative L² norm of `(f∘g)∘h − f∘(g∘h)` over the interior half-box
/// `|x_i| < L/2`.
pub fn associativity_defect(
    f: &SampledField,
    g: &SampledField,
    h: &SampledField,
    theta: &AntisymmetricMatrix,
    kind: ProductKind,
) -> Result<f64> {
    let left = apply_product(kind, &apply_product(kind, f, g, theta)?, h, theta)?;
    let right = apply_product(kind, f, &apply_product(kind, g, h, theta)?, theta)?;
    let grid = *f.grid();
    Ok(interior_relative_l2(&grid, left.values(), right.values()))
}

pub(crate) fn interior_relative_l2(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let lim = grid.half_width() / 2.0;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..grid.len() {
        if grid.point(i).iter().all(|x| x.abs() < lim) {
            num += (a[i] - b[i]).norm_sqr();
            den += a[i].norm_sqr();
        }
    }
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_l2_distance, make_grid, AnalyticDistribution};

    #[test]
    fn doubled_chirp_matrix() {
        let t = AntisymmetricMatrix::from_upper(3, &[0.5, -1.25, 2.0]).unwrap();
        let c = ChirpMatrix::new(t.clone());
        let d = c.doubled();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(d[i][j], d[j][i]);
            }
        }
        let k = [0.3, -1.0, 2.0];
        let p = [1.5, 0.25, -0.75];
        let big: Vec<f64> = k.iter().chain(p.iter()).cloned().collect();
        assert!((c.quadratic(&big) - t.bilinear(&k, &p)).abs() < 1e-12);
    }

    #[test]
    fn chirp_field_values() {
        let g = make_grid(1, 16, 2.0).unwrap();
        let one = chirp_field(&[vec![0.0]], &g).unwrap();
        assert!(one.values().iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        let c = chirp_field(&[vec![1.0]], &g).unwrap();
        let at1 = c.values()[g.nearest_index(1.0).unwrap()];
        assert!((at1 - Complex64::from_polar(1.0, -0.5)).norm() < 1e-15);
        assert!(c.values().iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
        assert!(matches!(chirp_field(&[vec![8.0]], &g), Err(Error::Nyquist(_))));
        assert!(chirp_field(&[vec![0.0, 1.0], vec![0.0, 0.0]], &make_grid(2, 8, 1.0).unwrap()).is_err());
    }

    #[test]
    fn delta_is_right_unit_of_star() {
        let g = make_grid(2, 16, 4.0).unwrap();
        let f = AnalyticDistribution::gaussian(&[0.5, -0.5], 1.0, &[1.0, 0.0]).sample(&g).unwrap();
        let d = AnalyticDistribution::delta(&[0.0, 0.0]).sample(&g).unwrap();
        let t = AntisymmetricMatrix::symplectic(1);
        let out = twisted_convolution(&f, &d, &t).unwrap();
        assert!(field_l2_distance(&f, &out).unwrap() < 1e-15);
    }

    #[test]
    fn constant_is_unit_of_pointwise_product() {
        let g = make_grid(1, 32, 6.0).unwrap();
        let one = SampledField::constant(g, Complex64::new(1.0, 0.0));
        let v = AnalyticDistribution::gaussian(&[0.5], 0.8, &[1.0]).sample(&g).unwrap();
        let out = twisted_convolution_product(&one, &v, &AntisymmetricMatrix::zero(1)).unwrap();
        assert!(field_l2_distance(&v, &out).unwrap() < 1e-12);
    }

    #[test]
    fn theta_sign_flip_is_conjugation() {
        let g = make_grid(2, 12, 4.0).unwrap();
        let f = AnalyticDistribution::gaussian(&[0.5, 0.0], 1.0, &[1.0, -1.0]).sample(&g).unwrap();
        let h = AnalyticDistribution::gaussian(&[0.0, -0.5], 0.8, &[0.0, 2.0]).sample(&g).unwrap();
        let t = AntisymmetricMatrix::symplectic(1);
        let a = twisted_convolution(&f, &h, &t.negate()).unwrap();
        let b = twisted_convolution(&f.conj(), &h.conj(), &t).unwrap().conj();
        assert!(field_l2_distance(&a, &b).unwrap() < 1e-10);
    }

    #[test]
    fn periodic_boundary_differs_only_near_edges() {
        let g = make_grid(1, 32, 4.0).unwrap();
        let f = AnalyticDistribution::standard_gaussian(1).sample(&g).unwrap();
        let t = AntisymmetricMatrix::zero(1);
        let z = twisted_convolution_with(&f, &f, &t, Boundary::ZeroPad).unwrap();
        let p = twisted_convolution_with(&f, &f, &t, Boundary::Periodic).unwrap();
        assert!(interior_relative_l2(&g, z.values(), p.values()) < 1e-3);
        assert!(field_l2_distance(&z, &p).unwrap() > 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f = AnalyticDistribution::standard_gaussian(1).sample(&g).unwrap();
        assert!(twisted_convolution(&f, &f, &AntisymmetricMatrix::symplectic(1)).is_err());
        let g2 = make_grid(1, 32, 4.0).unwrap();
        let f2 = AnalyticDistribution::standard_gaussian(1).sample(&g2).unwrap();
        assert!(twisted_convolution_product(&f, &f2, &AntisymmetricMatrix::zero(1)).is_err());
    }
}
