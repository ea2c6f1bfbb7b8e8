//! Reference values from an independent dense simulation (numpy, complex128,
//! explicit `U ⊗ U` on a `(2n+1)²` grid) and exact fractions.

use approx::assert_abs_diff_eq;
use qwalk_core::entropy::{entropy_record, position_entropy_small};
use qwalk_core::evolution::{distribution, evolve, path_sum_oracle};
use qwalk_core::{Chirality, CoinParameters, InitialState, C64};

fn hadamard_l(n: usize) -> qwalk_core::AmplitudeField {
    evolve(&CoinParameters::hadamard(), &InitialState::basis(Chirality::L), n).unwrap()
}

#[test]
fn hadamard_probabilities_are_exact_fractions() {
    let p = distribution(&hadamard_l(2));
    assert_abs_diff_eq!(p.at(0, 0), 0.25, epsilon = 1e-15);
    assert_abs_diff_eq!(p.at(2, 0), 1.0 / 16.0, epsilon = 1e-15);
    let p = distribution(&hadamard_l(3));
    assert_abs_diff_eq!(p.at(0, 1), 5.0 / 64.0, epsilon = 1e-15);
    assert_abs_diff_eq!(p.at(3, 0), 1.0 / 64.0, epsilon = 1e-15);
    let p = distribution(&hadamard_l(5));
    assert_abs_diff_eq!(p.at(0, 1), 3.0 / 64.0, epsilon = 1e-15);
    assert_abs_diff_eq!(p.at(5, 0), 1.0 / 1024.0, epsilon = 1e-15);
}

#[test]
fn hadamard_entropies() {
    let cases = [
        (1, 2.0, 2.0),
        (2, 1.954_434_002_924_964_5, 3.0),
        (3, 1.554_849_093_270_264_3, 3.097_589_881_390_794_7),
        (5, 1.875_546_954_838_68, 4.086_057_564_934_364),
    ];
    for (n, s_c, s_shannon) in cases {
        let field = hadamard_l(n);
        let r = entropy_record(&field).unwrap();
        assert_abs_diff_eq!(r.s_c, s_c, epsilon = 1e-12);
        assert_abs_diff_eq!(r.s_shannon, s_shannon, epsilon = 1e-12);
        assert_abs_diff_eq!(position_entropy_small(&field).unwrap(), s_c, epsilon = 1e-10);
    }
}

#[test]
fn pi_over_3_superposition() {
    let coin = CoinParameters::from_angle(std::f64::consts::FRAC_PI_3).unwrap();
    let phi = InitialState::new([
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.5, 0.0),
        C64::new(-0.5, 0.0),
    ])
    .unwrap();
    let r = entropy_record(&evolve(&coin, &phi, 4).unwrap()).unwrap();
    assert_abs_diff_eq!(r.s_c, 1.720_634_732_063_579_8, epsilon = 1e-12);
    assert_abs_diff_eq!(r.s_shannon, 3.344_944_708_319_775_6, epsilon = 1e-12);
    for (got, want) in r.norms.iter().zip([0.190_540_18, 0.322_991_46, 0.290_853_8, 0.195_614_55]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-8);
    }
}

#[test]
fn lattice_update_matches_path_sums() {
    let coins = [
        CoinParameters::hadamard(),
        CoinParameters::from_angle(0.3).unwrap(),
        CoinParameters::new(
            C64::from_polar(0.6, 0.3),
            C64::from_polar(0.8, -1.1),
            C64::from_polar(1.0, 0.7),
        )
        .unwrap(),
    ];
    let raw = [
        C64::new(0.1, 0.2),
        C64::new(-0.4, 0.3),
        C64::new(0.5, -0.1),
        C64::new(0.2, 0.0),
    ];
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let phi = InitialState::new(raw.map(|z| z / norm)).unwrap();
    for coin in coins {
        for n in 0..=6 {
            let fast = evolve(&coin, &phi, n).unwrap();
            let slow = path_sum_oracle(&coin, n).unwrap().field(&phi);
            for (a, b) in fast.sites().iter().zip(slow.sites()) {
                for k in 0..4 {
                    assert!((a[k] - b[k]).norm() < 1e-13, "n = {n}");
                }
            }
        }
    }
}
