use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_perv::algebra::{random_element, RandomElementConfig};
use toric_perv::descent::DescentDatum;
use toric_perv::equivariant::{character_eq_module, QuotientData};
use toric_perv::fan::{standard, Fan};
use toric_perv::io;
use toric_perv::lattice::IntMatrix;
use toric_perv::pervmod::construct::random_module;

fn fan_by_index(i: usize) -> Arc<Fan> {
    Arc::new(match i {
        0 => standard::affine_space(1),
        1 => standard::projective_line(),
        2 => standard::projective_plane(),
        3 => standard::hirzebruch(2),
        _ => standard::p1_times_p1(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn fans_round_trip(i in 0usize..5) {
        let fan = fan_by_index(i);
        let text = io::to_pretty(&io::fan_to_json(&fan).unwrap());
        prop_assert_eq!(io::parse_fan(&text).unwrap(), (*fan).clone());
    }

    #[test]
    fn elements_round_trip(seed in any::<u64>(), i in 0usize..5) {
        let fan = fan_by_index(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&fan, &mut rng, &RandomElementConfig::default());
        let text = io::to_pretty(&io::element_to_json(&x).unwrap());
        let back = io::parse_element(&text, None, None).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(io::to_pretty(&io::element_to_json(&back).unwrap()), text);
    }

    #[test]
    fn modules_round_trip(seed in any::<u64>(), i in 0usize..5) {
        let fan = fan_by_index(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&fan, &mut rng);
        let text = io::to_pretty(&io::module_to_json(&m).unwrap());
        let back = io::parse_module(&text, None).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(io::to_pretty(&io::module_to_json(&back).unwrap()), text);
    }

    #[test]
    fn descent_data_round_trip(seed in any::<u64>(), i in 1usize..4) {
        let fan = fan_by_index(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = DescentDatum::conjugated(&random_module(&fan, &mut rng), &mut rng).unwrap();
        let text = io::to_pretty(&io::descent_to_json(&d).unwrap());
        let back = io::parse_descent(&text, None).unwrap();
        prop_assert_eq!(io::to_pretty(&io::descent_to_json(&back).unwrap()), text);
        prop_assert_eq!(back.charts(), d.charts());
        prop_assert_eq!(back.glue_maps(), d.glue_maps());
    }

    #[test]
    fn equivariant_modules_round_trip(seed in any::<u64>(), p in 1i64..=3) {
        let fan = fan_by_index(2);
        let q = QuotientData::from_matrix(IntMatrix::from_rows(&[vec![p, 0], vec![0, 1]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = character_eq_module(&fan, &q, 1, &mut rng).unwrap();
        let text = io::to_pretty(&io::eq_module_to_json(&m).unwrap());
        let back = io::parse_eq_module(&text, None).unwrap();
        prop_assert_eq!(&back, &m);
    }
}

#[test]
fn quotients_round_trip() {
    for q in [
        QuotientData::whole_torus(2),
        QuotientData::trivial(3),
        QuotientData::from_characters(2, &IntMatrix::from_rows(&[vec![1, -1]])).unwrap(),
    ] {
        let text = io::to_pretty(&io::quotient_to_json(&q).unwrap());
        assert_eq!(io::parse_quotient(&text).unwrap(), q);
    }
}

#[test]
fn malformed_inputs_are_parse_errors() {
    assert!(matches!(io::parse_fan("{\"rank\": 1}"), Err(toric_perv::Error::Parse(_))));
    assert!(io::parse_module("{\"spaces\": {}}", None).is_err());
    assert!(io::parse_rational("1/0").is_err());
}
