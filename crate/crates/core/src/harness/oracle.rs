//! Reference values for the twisted convolution that avoid the grid sum:
//! a closed form for the standard Gaussian and an adaptive trapezoid rule
//! evaluated directly on analytic packets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::field::{AnalyticDistribution, AntisymmetricMatrix};
use crate::numerics::mat_vec;
use crate::{Error, Result};

/// `e^{-|x-μ|²/(2σ²)} e^{i b·x}` evaluated pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub center: Vec<f64>,
    pub width: f64,
    pub modulation: Vec<f64>,
}

impl Packet {
    pub fn new(center: &[f64], width: f64, modulation: &[f64]) -> Self {
        Self { center: center.to_vec(), width, modulation: modulation.to_vec() }
    }

    pub fn from_analytic(d: &AnalyticDistribution) -> Result<Self> {
        match d {
            AnalyticDistribution::GaussianPacket { center, width, modulation } => {
                Ok(Self::new(center, *width, modulation))
            }
            other => Err(Error::Config(format!("no quadrature oracle for {other:?}"))),
        }
    }

    pub fn to_analytic(&self) -> AnalyticDistribution {
        AnalyticDistribution::gaussian(&self.center, self.width, &self.modulation)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut r2 = 0.0;
        let mut ph = 0.0;
        for i in 0..x.len() {
            r2 += (x[i] - self.center[i]).powi(2);
            ph += x[i] * self.modulation[i];
        }
        Complex64::from_polar((-r2 / (2.0 * self.width * self.width)).exp(), ph)
    }
}

/// `π^{n/2} e^{−|x|²/4 − |θᵀx|²/16}`, the twisted convolution of two
/// standard Gaussians.
pub fn standard_gaussian_star(theta: &AntisymmetricMatrix, x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let tx = mat_vec(theta.entries(), x);
    let t2: f64 = tx.iter().map(|v| v * v).sum();
    PI.powf(n / 2.0) * (-r2 / 4.0 - t2 / 16.0).exp()
}

/// Trapezoid rule for `∫ f(x−y) g(y) e^{-(i/2) xᵀθy} dy` over the cube
/// `[-radius, radius]^n` with `nodes` points per axis.
pub fn trapezoid_star(f: &Packet, g: &Packet, theta: &AntisymmetricMatrix, x: &[f64], radius: f64, nodes: usize) -> Complex64 {
    let n = x.len();
    let h = 2.0 * radius / (nodes - 1) as f64;
    let tx: Vec<f64> = {
        // xᵀθy = (θᵀx)·y
        let mut v = vec![0.0; n];
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = (0..n).map(|i| x[i] * theta.entries()[i][j]).sum();
        }
        v
    };
    let total = nodes.pow(n as u32);
    let mut y = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut acc = Complex64::new(0.0, 0.0);
    for flat in 0..total {
        let mut rest = flat;
        let mut w = 1.0;
        for ax in (0..n).rev() {
            let j = rest % nodes;
            rest /= nodes;
            y[ax] = -radius + j as f64 * h;
            d[ax] = x[ax] - y[ax];
            if j == 0 || j == nodes - 1 {
                w *= 0.5;
            }
        }
        let ph: f64 = tx.iter().zip(&y).map(|(a, b)| a * b).sum();
        acc += f.eval(&d) * g.eval(&y) * Complex64::from_polar(w, -0.5 * ph);
    }
    acc * h.powi(n as i32)
}

/// Oracle value at `x` together with the change between `nodes` and
/// `2·nodes − 1` points, which bounds the quadrature error for these
/// smooth, rapidly decaying integrands.
pub fn oracle_star(f: &Packet, g: &Packet, theta: &AntisymmetricMatrix, x: &[f64], radius: f64, nodes: usize) -> (Complex64, f64) {
    let coarse = trapezoid_star(f, g, theta, x, radius, nodes);
    let fine = trapezoid_star(f, g, theta, x, radius, 2 * nodes - 1);
    (fine, (fine - coarse).norm())
}

/// Relative L² distance between two equally long value lists.
pub fn relative_l2(a: &[Complex64], reference: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(reference).map(|(p, q)| (p - q).norm_sqr()).sum();
    let den: f64 = reference.iter().map(|q| q.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form() {
        let f = Packet::new(&[0.0, 0.0], 1.0, &[0.0, 0.0]);
        let t = AntisymmetricMatrix::symplectic(1);
        for x in [[0.0, 0.0], [1.0, -0.5], [2.0, 1.5]] {
            let (v, err) = oracle_star(&f, &f, &t, &x, 9.0, 61);
            assert!(err < 1e-12);
            assert!((v - Complex64::new(standard_gaussian_star(&t, &x), 0.0)).norm() < 1e-12);
        }
        let z = AntisymmetricMatrix::zero(1);
        let v = trapezoid_star(&Packet::new(&[0.0], 1.0, &[0.0]), &Packet::new(&[0.0], 1.0, &[0.0]), &z, &[1.0], 10.0, 101);
        assert!((v.re - PI.sqrt() * (-0.25f64).exp()).abs() < 1e-13);
    }
}
