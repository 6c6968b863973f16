use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_perv::algebra::AlgebraElement;
use toric_perv::equivariant::{character_eq_module, is_pth_root, line_module, EqStructure, QuotientData};
use toric_perv::fan::{standard, Fan};
use toric_perv::lattice::{IntMatrix, LatticeVector};
use toric_perv::laurent::{ratio, LaurentPoly};
use toric_perv::linalg::QMatrix;

fn small_fans() -> Vec<Arc<Fan>> {
    vec![
        Arc::new(standard::affine_space(1)),
        Arc::new(standard::affine_space(2)),
        Arc::new(standard::projective_line()),
        Arc::new(standard::projective_plane()),
    ]
}

fn quotients(n: usize) -> Vec<QuotientData> {
    let mut out = vec![QuotientData::whole_torus(n), QuotientData::trivial(n)];
    for p in [2, 3] {
        out.push(QuotientData::from_matrix(IntMatrix::from_rows(&[vec![p; n]])).unwrap());
    }
    if n == 2 {
        out.push(QuotientData::from_characters(2, &IntMatrix::from_rows(&[vec![1, 1]])).unwrap());
        out.push(QuotientData::from_characters(2, &IntMatrix::from_rows(&[vec![2, 0]])).unwrap());
    }
    out
}

#[test]
fn structure_constants_are_associative_on_every_basis_triple() {
    for fan in small_fans() {
        for q in quotients(fan.rank()) {
            let s = EqStructure::new(&fan, &q).unwrap();
            assert!(s.is_exhaustive());
            let report = s.check_associativity(0, 0);
            assert!(report.is_ok(), "{fan} with Q = {}\n{report}", q.q());
        }
    }
}

#[test]
fn identity_quotient_reproduces_the_plain_algebra() {
    for fan in small_fans().into_iter().chain([Arc::new(standard::p1_times_p1())]) {
        let s = EqStructure::new(&fan, &QuotientData::trivial(fan.rank())).unwrap();
        let f = |a, b| AlgebraElement::matrix_unit(&fan, a, b, fan.binomial_product(a, b)).unwrap();
        for a in fan.cone_ids() {
            for b in fan.cone_ids() {
                for c in fan.cone_ids() {
                    let plain = f(a, b).mul(&f(b, c)).unwrap();
                    let eq = s.mul(&s.basis(a, b), &s.basis(b, c));
                    let coeff = eq.entries.get(&(a, c)).cloned().unwrap_or_else(|| LaurentPoly::zero(fan.rank()));
                    assert_eq!(plain, AlgebraElement::matrix_unit(&fan, a, c, &coeff * &fan.binomial_product(a, c)).unwrap());
                }
            }
        }
    }
}

#[test]
fn connected_quotient_of_the_line_kills_both_loops() {
    let fan = Arc::new(standard::affine_space(1));
    let q = QuotientData::whole_torus(1);
    let s = EqStructure::new(&fan, &q).unwrap();
    let (zero, ray) = (fan.zero_cone(), fan.cone_id(&[0]).unwrap());
    assert!(s.mul(&s.basis(ray, zero), &s.basis(zero, ray)).is_zero());
    assert!(s.mul(&s.basis(zero, ray), &s.basis(ray, zero)).is_zero());
    let one = || QMatrix::from_i64(&[vec![1]]);
    let zero_m = || QMatrix::from_i64(&[vec![0]]);
    assert!(line_module(&q, one(), zero_m(), vec![]).unwrap().validate().is_ok());
    assert!(!line_module(&q, one(), one(), vec![]).unwrap().validate().is_ok());
}

fn nonzero_rational() -> impl Strategy<Value = toric_perv::laurent::Rational> {
    (-6i64..=6, 1i64..=3).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discrete_quotient_validity_is_a_root_of_monodromy(
        p in 2i64..=3,
        u in nonzero_rational(),
        v in nonzero_rational(),
        s in nonzero_rational(),
        exact in any::<bool>(),
    ) {
        let q = QuotientData::from_matrix(IntMatrix::from_rows(&[vec![p]])).unwrap();
        let s = QMatrix::scalar(1, s);
        let u = QMatrix::scalar(1, u);
        // Half the cases solve for v so that S is a root.
        let v = if exact {
            s.pow(p).unwrap().sub(&QMatrix::identity(1)).mul(&u.inverse().unwrap())
        } else {
            QMatrix::scalar(1, v)
        };
        let monodromy = QMatrix::identity(1).add(&v.mul(&u));
        let m = line_module(&q, u, v, vec![s.clone()]).unwrap();
        prop_assert_eq!(m.validate().is_ok(), is_pth_root(&s, p, &monodromy));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inflation_is_valid_with_composite_monodromy(seed in any::<u64>(), which in 0usize..4, qi in 0usize..6) {
        let fan = small_fans()[which].clone();
        let qs = quotients(fan.rank());
        let q = &qs[qi % qs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = character_eq_module(&fan, q, 2, &mut rng).unwrap();
        prop_assert!(m.validate().is_ok());
        let plain = m.inflate().unwrap();
        prop_assert!(plain.validate().is_ok());
        for c in fan.cone_ids() {
            for r in fan.rays() {
                let w = r.to_i64().unwrap();
                let qw = q.apply(&LatticeVector::from_i64(&w)).unwrap();
                prop_assert_eq!(plain.torus_element(c, &w), m.module().torus_element(c, &qw));
            }
        }
    }
}

#[test]
fn rank_deficient_quotient_is_rejected() {
    assert!(QuotientData::from_matrix(IntMatrix::from_rows(&[vec![0]])).is_err());
    assert!(QuotientData::from_matrix(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]])).is_err());
}

#[test]
fn characters_give_the_expected_divisors() {
    let q = QuotientData::from_characters(2, &IntMatrix::from_rows(&[vec![2, 0]])).unwrap();
    let d: Vec<String> = q.divisors().iter().map(ToString::to_string).collect();
    // The quotient of the torus by the kernel of s1^2 is s1^2 itself: Q = (2 0).
    assert_eq!(d, vec!["2".to_string()]);
    assert_eq!(q.q(), &IntMatrix::from_rows(&[vec![2, 0]]));
}
