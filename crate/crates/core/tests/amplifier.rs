use noonamp_core::opa::{amplify, noncollinear_amplified_noon, noncollinear_amplify, numeric_evolve};
use noonamp_core::*;
use proptest::prelude::*;

const K1H: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::H);
const K1V: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::V);
const K1P: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::Plus);
const K1M: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::Minus);
const K2P: ModeLabel = ModeLabel::new(Spatial::K2, Polarization::Plus);
const K2M: ModeLabel = ModeLabel::new(Spatial::K2, Polarization::Minus);

/// Random superposition of up to three photons on `k1`, in the `{H, V}` basis.
fn seed_strategy() -> impl Strategy<Value = PureState> {
    prop::collection::vec(((0u32..=2, 0u32..=2), (-1.0f64..1.0, -1.0f64..1.0)), 1..5).prop_filter_map(
        "needs nonzero norm",
        |terms| {
            let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Linear).unwrap();
            let mut state = PureState::zero(modes, 4);
            for ((h, v), (re, im)) in terms {
                let bs = state.basis_state(&[(K1H, h), (K1V, v)]).unwrap();
                state.add_amplitude(bs, Complex64::new(re, im));
            }
            (state.norm_sqr() > 1e-3).then(|| state.normalized().unwrap())
        },
    )
}

fn geometry_strategy() -> impl Strategy<Value = AmplifierGeometry> {
    prop_oneof![
        Just(AmplifierGeometry::Collinear),
        Just(AmplifierGeometry::Noncollinear)
    ]
}

fn count(state: &PureState, bs: &FockBasisState, mode: ModeLabel) -> i64 {
    state.count_of(bs, mode).unwrap() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn disentangled_engine_matches_the_integrator(
        seed in seed_strategy(),
        geometry in geometry_strategy(),
        g in 0.0f64..0.8,
    ) {
        let gain = GainParams::new(g).unwrap();
        let trunc = Truncation::auto(4, &gain);
        let fast = amplify(&seed, geometry, &gain, &trunc).unwrap();
        let slow = numeric_evolve(&seed, geometry, &gain, &trunc, None).unwrap();
        prop_assert!(1.0 - fidelity(&fast, &slow).unwrap() < 1e-9);
        prop_assert!((fast.norm_sqr() + fast.leakage() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn collinear_output_conserves_polarization_difference(seed in seed_strategy(), g in 0.0f64..1.5) {
        let gain = GainParams::new(g).unwrap();
        let out = amplify(&seed, AmplifierGeometry::Collinear, &gain, &Truncation::auto(4, &gain)).unwrap();
        let mut weight_by_difference = std::collections::BTreeMap::<i64, f64>::new();
        for (bs, amp) in out.terms() {
            *weight_by_difference.entry(count(&out, bs, K1H) - count(&out, bs, K1V)).or_default() += amp.norm_sqr();
        }
        let mut seed_weights = std::collections::BTreeMap::<i64, f64>::new();
        for (bs, amp) in seed.terms() {
            *seed_weights.entry(count(&seed, bs, K1H) - count(&seed, bs, K1V)).or_default() += amp.norm_sqr();
        }
        for (d, w) in &weight_by_difference {
            let expected = seed_weights.get(d).copied().unwrap_or(0.0);
            prop_assert!((w - expected).abs() < 1e-8, "difference {} weight {} vs {}", d, w, expected);
        }
    }

    #[test]
    fn noncollinear_emission_is_pairwise(n in 0u32..=3, g in 0.0f64..1.2) {
        let gain = GainParams::new(g).unwrap();
        let trunc = Truncation::auto(n, &gain);
        let seed = make_seed(n, 0.0, trunc.cutoff).unwrap();
        let out = noncollinear_amplify(&seed, &gain, &trunc).unwrap();
        for (bs, _) in out.terms() {
            let signal = count(&out, bs, K1P) + count(&out, bs, K1M);
            let idler = count(&out, bs, K2P) + count(&out, bs, K2M);
            prop_assert_eq!(signal - idler, n as i64);
        }
    }
}

#[test]
fn zero_gain_is_the_identity() {
    let gain = GainParams::new(0.0).unwrap();
    for geometry in [AmplifierGeometry::Collinear, AmplifierGeometry::Noncollinear] {
        for n in 1..=4 {
            let seed = make_seed(n, 0.3, n as u16).unwrap();
            let out = amplify(&seed, geometry, &gain, &Truncation::new(n as u16)).unwrap();
            assert!(
                (fidelity(
                    &change_basis(&seed, out.modes().basis())
                        .unwrap()
                        .embed(out.modes())
                        .unwrap(),
                    &out
                )
                .unwrap()
                    - 1.0)
                    .abs()
                    < 1e-14
            );
        }
    }
}

#[test]
fn squeezed_vacuum_occupation() {
    let gain = GainParams::new(0.7).unwrap();
    let trunc = Truncation::auto(0, &gain);
    let out = amplify(
        &make_seed(0, 0.0, trunc.cutoff).unwrap(),
        AmplifierGeometry::Collinear,
        &gain,
        &trunc,
    )
    .unwrap();
    let n_h = out.mean_occupation(K1H).unwrap();
    assert!((n_h - 0.7f64.sinh().powi(2)).abs() < 1e-10, "{n_h}");
    let total = out.mean_total_photons();
    let want = eval_formula(FormulaId::MeanPhotonsSpontaneous, &FormulaParams::new().gain(gain)).unwrap();
    assert!((total - want).abs() < 1e-10);
}

#[test]
fn stimulated_photon_number() {
    let gain = GainParams::new(0.7).unwrap();
    let trunc = Truncation::auto(2, &gain);
    let out = amplify(
        &make_seed(2, 0.0, trunc.cutoff).unwrap(),
        AmplifierGeometry::Collinear,
        &gain,
        &trunc,
    )
    .unwrap();
    let want = 2.0 + 6.0 * 0.7f64.sinh().powi(2);
    assert!((out.mean_total_photons() - want).abs() < 1e-9);
    let formula = eval_formula(FormulaId::MeanPhotonsStimulated, &FormulaParams::new().gain(gain)).unwrap();
    assert!((formula - want).abs() < 1e-12);
}

#[test]
fn two_photon_noncollinear_state_matches_expansion() {
    let gain = GainParams::new(0.8).unwrap();
    let trunc = Truncation::auto(2, &gain);
    let out = amplify(
        &make_seed(2, 0.0, trunc.cutoff).unwrap(),
        AmplifierGeometry::Noncollinear,
        &gain,
        &trunc,
    )
    .unwrap();
    let closed = noncollinear_amplified_noon(2, &gain, &trunc).unwrap();
    assert!(1.0 - fidelity(&closed, &out).unwrap() < 1e-8);
}

#[test]
fn leakage_is_reported_and_enforced() {
    let gain = GainParams::new(1.5).unwrap();
    let seed = make_seed(2, 0.0, 2).unwrap();
    let tight = Truncation::new(12);
    match amplify(&seed, AmplifierGeometry::Collinear, &gain, &tight) {
        Err(Error::LeakageExceeded { leakage, budget }) => assert!(leakage > budget),
        other => panic!("expected a leakage error, got {other:?}"),
    }
    let loose = tight.with_budget(1.0);
    let out = amplify(&seed, AmplifierGeometry::Collinear, &gain, &loose).unwrap();
    assert!(out.leakage() > 1e-3);
    assert!((out.norm_sqr() + out.leakage() - 1.0).abs() < 1e-12);
}

#[test]
fn occupied_idler_is_rejected() {
    let modes = ModeSet::spatial(&[Spatial::K1, Spatial::K2], PolarizationBasis::Diagonal).unwrap();
    let seed = PureState::from_terms(modes, 2, [(&[(K2P, 1)][..], Complex64::new(1.0, 0.0))]).unwrap();
    let gain = GainParams::new(0.2).unwrap();
    assert_eq!(
        noncollinear_amplify(&seed, &gain, &Truncation::auto(1, &gain)).unwrap_err(),
        Error::NonVacuumIdler
    );
}
