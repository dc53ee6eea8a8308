use num_complex::Complex64;
use twistlab::field::{make_grid, AnalyticDistribution, SampledField};
use twistlab::spectral::{gaussian_window, hann_window};
use twistlab::wavefront::*;
use twistlab::Error;

fn params() -> EstimatorParams {
    EstimatorParams { directions: Some(360), ..Default::default() }
}

fn catalog() -> Vec<(AnalyticDistribution, Vec<Vec<f64>>)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        (AnalyticDistribution::delta(&[1.5]), vec![vec![0.0, 1.0], vec![0.0, -1.0]]),
        (AnalyticDistribution::plane_wave(&[-1.0]), vec![vec![1.0, 0.0], vec![-1.0, 0.0]]),
        (AnalyticDistribution::gaussian(&[1.0], 0.7, &[2.0]), vec![]),
        (AnalyticDistribution::chirp(vec![vec![-0.5]]), vec![vec![2.0 / 5f64.sqrt(), -1.0 / 5f64.sqrt()], vec![-2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()]]),
        (AnalyticDistribution::chirp(vec![vec![1.0]]), vec![vec![s, s], vec![-s, -s]]),
    ]
}

#[test]
fn catalog_with_both_windows() {
    let g = make_grid(1, 128, 12.0).unwrap();
    let windows = [gaussian_window(&g), hann_window(&g, 4.0, 4).unwrap()];
    for (d, expected) in catalog() {
        let u = d.sample(&g).unwrap();
        for w in &windows {
            let est = estimate_wf(&u, w, &params()).unwrap();
            let dist = angular_hausdorff(&est.flagged_directions(), &expected);
            assert!(dist <= 5.0, "{d:?} with {:?}: {dist}", w.kind());
        }
    }
}

#[test]
fn amplitude_scaling_leaves_flags_unchanged() {
    let g = make_grid(1, 128, 12.0).unwrap();
    let w = gaussian_window(&g);
    let u = AnalyticDistribution::chirp(vec![vec![1.0]]).sample(&g).unwrap();
    let a = estimate_wf(&u, &w, &params()).unwrap();
    let b = estimate_wf(&u.scale(Complex64::new(0.0, 40.0)), &w, &params()).unwrap();
    assert_eq!(a.flagged, b.flagged);
    // steep rays reach the roundoff floor of the transform and are skipped
    let mut compared = 0;
    for (i, (x, y)) in a.k_hat.iter().zip(&b.k_hat).enumerate() {
        if a.trusted[i] && x.abs() < 4.0 {
            assert!((x - y).abs() < 1e-6, "{i}: {x} vs {y}");
            compared += 1;
        }
    }
    assert!(compared > 10);
}

#[test]
fn raising_k_test_only_adds_directions() {
    let g = make_grid(1, 128, 12.0).unwrap();
    let u = AnalyticDistribution::gaussian(&[0.0], 1.0, &[0.0]).sample(&g).unwrap();
    let est = estimate_wf(&u, &gaussian_window(&g), &params()).unwrap();
    let mut prev = est.with_k_test(0.5).flagged;
    for k in [1.0, 2.0, 4.0, 8.0, 100.0] {
        let next = est.with_k_test(k).flagged;
        assert!(prev.iter().zip(&next).all(|(p, n)| !p || *n));
        prev = next;
    }
}

#[test]
fn direction_grids() {
    let c = DirectionGrid::circle(360).unwrap();
    assert_eq!(c.len(), 360);
    assert!((c.resolution_deg() - 0.5).abs() < 1e-12);
    for i in 0..c.len() {
        let (p, q) = (&c.directions()[i], &c.directions()[c.antipode(i)]);
        assert!((p[0] + q[0]).abs() < 1e-15 && (p[1] + q[1]).abs() < 1e-15);
    }
    let s = DirectionGrid::sphere(4, 512, 3).unwrap();
    assert_eq!(s, DirectionGrid::sphere(4, 512, 3).unwrap());
    assert_ne!(s, DirectionGrid::sphere(4, 512, 4).unwrap());
    for i in 0..s.len() {
        let v = &s.directions()[i];
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let w = &s.directions()[s.antipode(i)];
        assert!(v.iter().zip(w).all(|(a, b)| a == &-b));
    }
    assert!(s.resolution_deg() > 5.0 && s.resolution_deg() < 45.0);
    assert!(DirectionGrid::sphere(4, 2048, 3).unwrap().resolution_deg() < s.resolution_deg());
    assert!(DirectionGrid::circle(7).is_err());
    assert!(DirectionGrid::sphere(6, 64, 0).unwrap().len() == 64);
}

#[test]
fn diagnostics() {
    let g = make_grid(1, 16, 2.0).unwrap();
    let u = AnalyticDistribution::delta(&[0.0]).sample(&g).unwrap();
    assert!(matches!(estimate_wf(&u, &gaussian_window(&g), &params()), Err(Error::Estimator(_))));
    let g = make_grid(1, 64, 8.0).unwrap();
    let zero = SampledField::constant(g, Complex64::new(0.0, 0.0));
    assert!(matches!(estimate_wf(&zero, &gaussian_window(&g), &params()), Err(Error::Estimator(_))));
    let bad = EstimatorParams { radii: 1, ..params() };
    let u = AnalyticDistribution::delta(&[0.0]).sample(&g).unwrap();
    assert!(estimate_wf(&u, &gaussian_window(&g), &bad).is_err());
}

#[test]
fn json_and_csv_exports() {
    let g = make_grid(1, 128, 12.0).unwrap();
    let u = AnalyticDistribution::delta(&[0.0]).sample(&g).unwrap();
    let est = estimate_wf(&u, &gaussian_window(&g), &params()).unwrap();
    let j = est.to_json();
    assert_eq!(j["directions"].as_array().unwrap().len(), 360);
    assert_eq!(j["flagged"].as_array().unwrap().iter().filter(|v| v.as_bool().unwrap()).count(), 2);
    let mut buf = Vec::new();
    est.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("w1,w2,k_hat,residual,trusted,flagged\n"));
    assert_eq!(text.lines().count(), 361);
    let caps = est.to_caps(2.0);
    assert!(caps.member_f64(&[0.0, 1.0]).unwrap());
    assert!(!caps.member_f64(&[1.0, 0.0]).unwrap());
}

#[test]
fn fourier_and_shear_on_off_centre_inputs() {
    let g = make_grid(1, 128, 12.0).unwrap();
    let w = gaussian_window(&g);
    for d in [AnalyticDistribution::delta(&[2.0]), AnalyticDistribution::plane_wave(&[1.5])] {
        let u = d.sample(&g).unwrap();
        assert!(check_fourier_symmetry(&u, &w, &params()).unwrap().distance_deg <= 10.0);
        assert!(check_chirp_shear(&u, &[vec![0.5]], &w, &params()).unwrap().distance_deg <= 5.0);
    }
}
