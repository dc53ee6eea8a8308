use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistlab::cone::rational::{q, qi, qvec, QVec};
use twistlab::cone::*;
use twistlab::field::AntisymmetricMatrix;
use twistlab::harness::suites::random_polyhedral;

fn random_cone(rng: &mut ChaCha8Rng, dim: usize, max_gens: usize) -> ConicSet {
    random_polyhedral(rng, dim, max_gens, 0.0)
}

#[test]
fn condition_phrasings_agree_for_invertible_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let theta = AntisymmetricMatrix::from_upper(2, &[1.5]).unwrap();
    let mut violated = 0;
    for _ in 0..100 {
        let mut u = random_cone(&mut rng, 4, 3);
        let mut v = random_cone(&mut rng, 4, 3);
        if rng.gen_bool(0.3) {
            // plant a solution of x = ½θξ: ξ = 2θ⁻¹x = (−4x₁/3, 4x₀/3), scaled by 3
            let (a, b) = (rng.gen_range(-2i64..=2), rng.gen_range(1i64..=2));
            u = u.union(&ConicSet::polyhedral(4, vec![qvec(&[3 * a, 3 * b, -4 * b, 4 * a])]));
            v = v.union(&ConicSet::polyhedral(4, vec![qvec(&[3 * a, 3 * b, 4 * b, -4 * a])]));
        }
        let a = existence_condition(&u, &v, &theta).unwrap();
        let b = existence_condition_inverse_form(&u, &v, &theta).unwrap();
        assert_eq!(a.holds, b.holds);
        if !a.holds {
            violated += 1;
            for w in [&a.witness.unwrap()[0], &b.witness.unwrap()[0]] {
                assert!(u.member(w).unwrap());
                let flipped: QVec = w[..2].iter().cloned().chain(w[2..].iter().map(|x| -x)).collect();
                assert!(v.member(&flipped).unwrap());
            }
        }
    }
    assert!(violated > 0 && violated < 100, "uninformative sample: {violated}");
}

#[test]
fn theta_zero_matches_pointwise_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let zero = AntisymmetricMatrix::zero(2);
    let mut violated = 0;
    for _ in 0..100 {
        let u = random_polyhedral(&mut rng, 4, 3, 0.5);
        let v = random_polyhedral(&mut rng, 4, 3, 0.5);
        let a = existence_condition(&u, &v, &zero).unwrap();
        let b = pointwise_criterion(&u, &v).unwrap();
        assert_eq!(a.holds, b.holds);
        violated += usize::from(!a.holds);
    }
    assert!(violated > 0 && violated < 100, "uninformative sample: {violated}");
}

#[test]
fn product_with_empty_right_factor() {
    // only the zero pairing survives, forcing x + ½θξ = 0 on WFu
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let theta = AntisymmetricMatrix::symplectic(1);
    let th = theta.to_rational();
    let empty = ConicSet::empty(4);
    for _ in 0..30 {
        let u = random_cone(&mut rng, 4, 3);
        let p = predicted_product_wf(&u, &empty, &theta).unwrap();
        for c in p.poly_components().unwrap() {
            for g in &c.generators {
                assert!(PolyCone { dim: 4, generators: u.poly_components().unwrap().iter().flat_map(|c| c.generators.clone()).collect(), excluded: vec![] }.closed_contains(g));
                for i in 0..2 {
                    let s: num_rational::BigRational = (0..2).map(|j| &th[i][j] * &g[2 + j]).sum();
                    assert_eq!(&g[i] + s * q(1, 2), qi(0));
                }
            }
        }
    }
    let delta = ConicSet::zero_times_space(2);
    assert!(predicted_product_wf(&delta, &empty, &theta).unwrap().components().is_empty());
    let zero = AntisymmetricMatrix::zero(2);
    assert!(same_set(&predicted_product_wf(&delta, &empty, &zero).unwrap(), &delta).unwrap());
}

fn light_cone_theta() -> AntisymmetricMatrix {
    AntisymmetricMatrix::from_full(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap()
}

fn left_half_space() -> ConicSet {
    ConicSet::polyhedral(2, vec![qvec(&[-1, 0]), qvec(&[0, 1]), qvec(&[0, -1])])
}

#[test]
fn light_cone_variants() {
    let theta = light_cone_theta();
    let upward = ConicSet::polyhedral(2, vec![qvec(&[1, 1]), qvec(&[-1, 1])]);
    assert!(cone_algebra_check(&left_half_space(), true, &upward, &theta).unwrap().pass());

    let forward = ConicSet::polyhedral(2, vec![qvec(&[1, 1]), qvec(&[1, -1])]);
    let r = cone_algebra_check(&left_half_space(), true, &forward, &theta).unwrap();
    assert_eq!(r.closed_under_addition.status, Status::Holds);
    assert_eq!(r.implication.status, Status::Fails);
    let lower = ConicSet::polyhedral(2, vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[0, -1])]);
    assert!(!cone_algebra_check(&lower, true, &forward, &theta).unwrap().pass());
    let upper = ConicSet::polyhedral(2, vec![qvec(&[0, 1]), qvec(&[1, 0]), qvec(&[-1, 0])]);
    assert!(cone_algebra_check(&upper, true, &forward, &theta).unwrap().pass());

    let two_sheet = ConicSet::new(
        2,
        vec![
            Component::Polyhedral { generators: vec![qvec(&[1, 1]), qvec(&[0, 1])], excluded: vec![] },
            Component::Polyhedral { generators: vec![qvec(&[1, -1]), qvec(&[0, -1])], excluded: vec![] },
        ],
    )
    .unwrap();
    let r = cone_algebra_check(&left_half_space(), true, &two_sheet, &theta).unwrap();
    assert_eq!(r.closed_under_addition.status, Status::Fails);

    let double = upward.union(&ConicSet::polyhedral(2, vec![qvec(&[-1, -1]), qvec(&[1, -1])]));
    let r = cone_algebra_check(&left_half_space(), true, &double, &theta).unwrap();
    assert_eq!(r.closed_under_addition.status, Status::Fails);
    let w = &r.closed_under_addition.witness;
    assert_eq!(w.len(), 2);
    assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a + b == qi(0)));
}

#[test]
fn theta_zero_implication_is_trivial() {
    let zero = AntisymmetricMatrix::zero(2);
    let salient = ConicSet::polyhedral(2, vec![qvec(&[1, 2]), qvec(&[2, 1])]);
    let any = ConicSet::polyhedral(2, vec![qvec(&[-1, 3])]);
    let r = cone_algebra_check(&any, false, &salient, &zero).unwrap();
    assert!(r.pass());
}

#[test]
fn pullback_along_diagonal() {
    // tensor wavefront without (0; ξ, −ξ) points
    let n = 1;
    let diag = vec![qvec(&[1]), qvec(&[1])];
    let s = ConicSet::new(4, vec![Component::Polyhedral { generators: vec![qvec(&[0, 0, 1, 1]), qvec(&[1, 1, 0, 0])], excluded: vec![] }]).unwrap();
    let p = wf_pullback(&s, &diag).unwrap();
    assert!(p.well_defined);
    assert!(p.set.member(&qvec(&[0, 2])).unwrap());
    let bad = ConicSet::new(4, vec![Component::Ray { direction: qvec(&[0, 0, 1, -1]) }]).unwrap();
    assert!(!wf_pullback(&bad, &diag).unwrap().well_defined);
    let _ = n;
}

fn component_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]
    #[test]
    fn membership_is_dilation_invariant(gens in component_strategy(), points in prop::collection::vec((prop::collection::vec(-4i64..=4, 4), 1i64..5), 25)) {
        let gens: Vec<QVec> = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).map(|g| qvec(&g)).collect();
        prop_assume!(!gens.is_empty());
        let sets = [
            ConicSet::polyhedral(4, gens.clone()),
            ConicSet::new(4, vec![Component::Subspace { basis: gens.clone() }]).unwrap(),
            ConicSet::graph(vec![vec![qi(1), q(1, 2)], vec![q(1, 2), qi(-2)]]),
            ConicSet::zero_times_space(2),
        ];
        for (p, den) in points {
            prop_assume!(p.iter().any(|&x| x != 0));
            let v: QVec = p.iter().map(|&x| q(x, den)).collect();
            let v2: QVec = v.iter().map(|x| x * qi(2)).collect();
            for s in &sets {
                prop_assert_eq!(s.member(&v).unwrap(), s.member(&v2).unwrap());
            }
        }
    }
}
