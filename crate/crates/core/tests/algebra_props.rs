use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_perv::algebra::{
    generator_element, generators, is_member, mu_delta_check, random_element, transport, AlgebraElement,
    GeneratorLabel, RandomElementConfig,
};
use toric_perv::fan::{standard, ConeId, Fan};
use toric_perv::lattice::{IntMatrix, LatticeVector};
use toric_perv::laurent::LaurentPoly;

fn example_fans() -> Vec<Arc<Fan>> {
    vec![
        Arc::new(standard::affine_space(1)),
        Arc::new(standard::affine_space(2)),
        Arc::new(standard::projective_line()),
        Arc::new(standard::projective_plane()),
        Arc::new(standard::p1_times_p1()),
        Arc::new(standard::hirzebruch(1)),
    ]
}

fn all_chains(fan: &Fan, tau: ConeId, sigma: ConeId) -> Vec<Vec<usize>> {
    let extra = fan.difference(sigma, tau);
    let mut out = Vec::new();
    permutations(&extra, &mut Vec::new(), &mut out);
    out
}

fn permutations(rest: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest.is_empty() {
        out.push(prefix.clone());
        return;
    }
    for i in 0..rest.len() {
        let mut r = rest.to_vec();
        prefix.push(r.remove(i));
        permutations(&r, prefix, out);
        prefix.pop();
    }
}

/// Product of the up generators adding the rays of `order` to `tau`, one at a time.
fn up_chain(fan: &Arc<Fan>, tau: ConeId, order: &[usize]) -> AlgebraElement {
    let mut cur = tau;
    let mut acc = AlgebraElement::diagonal_unit(fan, tau);
    for &r in order {
        let mut rays = fan.cone(cur).to_vec();
        rays.push(r);
        rays.sort_unstable();
        let next = fan.cone_id(&rays).expect("face");
        let pair = fan.covering_pair(cur, next).expect("pair");
        acc = generator_element(fan, GeneratorLabel::Up(pair)).mul(&acc).unwrap();
        cur = next;
    }
    acc
}

#[test]
fn products_stay_in_the_algebra() {
    let cfg = RandomElementConfig::default();
    for fan in example_fans() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_element(&fan, &mut rng, &cfg);
            let b = random_element(&fan, &mut rng, &cfg);
            let ab = a.mul(&b).unwrap();
            assert!(is_member(&fan, ab.entries()).unwrap().is_member(), "{fan}: product left the algebra");
        }
    }
}

#[test]
fn scalars_are_central() {
    let cfg = RandomElementConfig::default();
    for fan in example_fans() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut gens = generators(&fan);
        for _ in 0..20 {
            let f = toric_perv::algebra::random_poly(fan.rank(), &mut rng, &cfg);
            let s = AlgebraElement::scalar(&fan, f);
            let x = random_element(&fan, &mut rng, &cfg);
            assert_eq!(s.mul(&x).unwrap(), x.mul(&s).unwrap());
        }
        let central: Vec<_> =
            gens.iter().filter(|g| matches!(g.label, GeneratorLabel::Central { .. })).map(|g| g.element.clone()).collect();
        assert_eq!(central.len(), 2 * fan.rank());
        gens.retain(|g| !matches!(g.label, GeneratorLabel::Central { .. }));
        for c in &central {
            for g in &gens {
                assert_eq!(c.mul(&g.element).unwrap(), g.element.mul(c).unwrap());
            }
        }
    }
}

#[test]
fn up_chains_do_not_depend_on_the_route() {
    for fan in example_fans() {
        for sigma in fan.cone_ids() {
            for tau in fan.faces(sigma) {
                let chains = all_chains(&fan, tau, sigma);
                let first = up_chain(&fan, tau, &chains[0]);
                let expected = AlgebraElement::matrix_unit(&fan, sigma, tau, fan.binomial_product(sigma, tau)).unwrap();
                assert_eq!(first, expected);
                for c in &chains[1..] {
                    assert_eq!(up_chain(&fan, tau, c), first);
                }
            }
        }
    }
}

#[test]
fn mu_delta_is_identity_on_every_maximal_corner() {
    let cfg = RandomElementConfig::default();
    for fan in example_fans() {
        let report = mu_delta_check(&fan, 20, 3, &cfg).unwrap();
        assert!(report.is_ok(), "{fan}\n{report}");
    }
}

#[test]
fn face_closure_is_idempotent_and_pairs_are_covering() {
    for fan in example_fans() {
        let all: Vec<Vec<usize>> = fan.cone_ids().map(|c| fan.cone(c).to_vec()).collect();
        let again = Fan::build(fan.rank(), fan.rays().to_vec(), &all).unwrap();
        assert_eq!(*fan, again);
        for p in fan.covering_pairs() {
            assert_eq!(fan.difference(p.upper, p.lower), vec![p.ray]);
            assert_eq!(fan.dim(p.upper), fan.dim(p.lower) + 1);
        }
        assert!(fan.is_fan().ok);
    }
}

#[test]
fn chart_normalization_sends_rays_to_the_first_basis_vectors() {
    for fan in example_fans() {
        for sigma in fan.cone_ids() {
            let beta = fan.chart_normalization(sigma).unwrap();
            assert!(beta.is_unimodular());
            for (k, v) in fan.ray_vectors(sigma).iter().enumerate() {
                assert_eq!(beta.apply(v).unwrap(), LatticeVector::unit(fan.rank(), k));
            }
        }
    }
}

#[test]
fn non_regular_cone_is_rejected() {
    let rays = vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 2])];
    assert!(Fan::build(2, rays, &[vec![0, 1]]).is_err());
}

fn automorphisms() -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]),
        IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]),
        IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transport_is_multiplicative(seed in any::<u64>(), which in 0usize..4, fan_index in 0usize..4) {
        let fans = [standard::affine_space(2), standard::projective_plane(), standard::p1_times_p1(), standard::hirzebruch(1)];
        let fan = Arc::new(fans[fan_index].clone());
        let beta = &automorphisms()[which];
        let target = Arc::new(fan.image(beta).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RandomElementConfig::default();
        let a = random_element(&fan, &mut rng, &cfg);
        let b = random_element(&fan, &mut rng, &cfg);
        let lhs = transport(&a.mul(&b).unwrap(), beta, &target).unwrap();
        let rhs = transport(&a, beta, &target).unwrap().mul(&transport(&b, beta, &target).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let fan = Arc::new(standard::projective_plane());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RandomElementConfig::default();
        let (a, b, c) = (
            random_element(&fan, &mut rng, &cfg),
            random_element(&fan, &mut rng, &cfg),
            random_element(&fan, &mut rng, &cfg),
        );
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }
}

#[test]
fn t_scalar_is_a_unit_of_the_center() {
    let fan = Arc::new(standard::projective_line());
    let t = LaurentPoly::from_i64(1, &[(1, &[1])]);
    let tinv = LaurentPoly::from_i64(1, &[(1, &[-1])]);
    let prod = AlgebraElement::scalar(&fan, t).mul(&AlgebraElement::scalar(&fan, tinv)).unwrap();
    assert_eq!(prod, AlgebraElement::unit(&fan));
}
