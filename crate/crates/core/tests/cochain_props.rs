use std::sync::OnceLock;

use proptest::prelude::*;

use obstruct_core::cohomology::{cup, run_cochain_suites, small_models, Cochain1, Cochain2, Cochain3, GaloisModel};
use obstruct_core::verify::SuiteOptions;

fn models() -> &'static [GaloisModel] {
    static MODELS: OnceLock<Vec<GaloisModel>> = OnceLock::new();
    MODELS.get_or_init(|| small_models(8))
}

/// A model, a modulus, and raw values for three 1-cochains and one 2-cochain.
fn setup() -> impl Strategy<Value = (usize, i64, [u32; 3], Vec<i64>)> {
    (0..models().len(), prop::sample::select(vec![2i64, 4, 8]), prop::array::uniform3(0u32..3))
        .prop_flat_map(|(i, m, w)| {
            let n = models()[i].order();
            (Just(i), Just(m), Just(w), prop::collection::vec(0..m, 3 * n + n * n))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn coboundary_squares_to_zero((i, m, w, vals) in setup()) {
        let model = &models()[i];
        let n = model.order();
        let c = Cochain1::from_values(model, m, w[0], vals[..n].to_vec()).unwrap();
        prop_assert!(c.d().d().is_zero());
        let e = Cochain2::from_values(model, m, w[1], vals[3 * n..].to_vec()).unwrap();
        prop_assert!(e.d().coboundary::<4>().is_zero());
    }

    #[test]
    fn cup_satisfies_leibniz((i, m, w, vals) in setup()) {
        let model = &models()[i];
        let n = model.order();
        let c = Cochain1::from_values(model, m, w[0], vals[..n].to_vec()).unwrap();
        let d = Cochain1::from_values(model, m, w[1], vals[n..2 * n].to_vec()).unwrap();
        let lhs = cup::<1, 1, 2>(&c, &d).unwrap().d();
        let rhs = cup::<2, 1, 3>(&c.d(), &d).unwrap().sub(&cup::<1, 2, 3>(&c, &d.d()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_is_associative((i, m, w, vals) in setup()) {
        let model = &models()[i];
        let n = model.order();
        let c: Vec<Cochain1> = (0..3)
            .map(|k| Cochain1::from_values(model, m, w[k], vals[k * n..(k + 1) * n].to_vec()).unwrap())
            .collect();
        let left: Cochain3 = cup::<2, 1, 3>(&cup::<1, 1, 2>(&c[0], &c[1]).unwrap(), &c[2]).unwrap();
        let right: Cochain3 = cup::<1, 2, 3>(&c[0], &cup::<1, 1, 2>(&c[1], &c[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn identities_hold_on_every_small_model() {
    let reports = run_cochain_suites(&SuiteOptions::default()).unwrap();
    assert!(reports.len() > 100);
    for r in &reports {
        assert!(r.passed(), "{r}");
    }
}
