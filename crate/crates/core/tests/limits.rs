use std::f64::consts::{FRAC_PI_3, PI};

use qwalk_core::asymptotics::limits::limit_density;
use qwalk_core::asymptotics::{
    calibrate, chebyshev_quadrature2d, empirical_limit, limit_overlaps, walk_series, CalibrationCase,
    QuadratureGrid, Transcription,
};
use qwalk_core::{Chirality, CoinParameters, InitialState, MemoryCap, C64};

fn mix() -> InitialState {
    InitialState::new([
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.5, 0.0),
        C64::new(-0.5, 0.0),
    ])
    .unwrap()
}

#[test]
fn unit_integrands() {
    let grid = QuadratureGrid::new(64, 64, 1.0, 1.0).unwrap();
    assert!((chebyshev_quadrature2d(|_, _| 1.0, &grid) - PI * PI).abs() < 1e-10);
    assert!((chebyshev_quadrature2d(|x, _| x * x, &grid) - PI * PI / 2.0).abs() < 1e-10);
}

/// The spectral weight has eigenvalue crossings inside the domain, so the
/// node count only buys algebraic convergence. Track the doubling changes.
#[test]
fn spectral_overlaps_converge_under_refinement() {
    let coin = CoinParameters::hadamard();
    let phi = InitialState::basis(Chirality::L);
    let at = |n: usize| {
        let grid = QuadratureGrid::for_coin(&coin, n).unwrap();
        limit_overlaps(&coin, &phi, &grid, &Transcription::Spectral).unwrap()
    };
    let values: Vec<[f64; 4]> = [32, 64, 128, 256].iter().map(|&n| at(n)).collect();
    let changes: Vec<f64> = values
        .windows(2)
        .map(|w| (0..4).map(|k| (w[1][k] - w[0][k]).abs()).fold(0.0, f64::max))
        .collect();
    println!("doubling changes 32->64->128->256: {changes:?}");
    assert!(changes.windows(2).all(|c| c[1] < c[0]));
    assert!(changes[2] < 1e-4);
    for v in &values {
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn limit_density_is_a_density() {
    let coin = CoinParameters::from_angle(FRAC_PI_3).unwrap();
    let grid = QuadratureGrid::for_coin(&coin, 48).unwrap();
    let d = limit_density(&coin, &mix(), &grid).unwrap();
    assert!((d.trace() - 1.0).abs() < 1e-9);
    let eigs = d.eigenvalues().unwrap();
    assert!(eigs.iter().all(|&l| l > -1e-12));
}

#[test]
fn calibration_selects_spectral_weights() {
    let cases: Vec<CalibrationCase> = [
        (CoinParameters::hadamard(), InitialState::basis(Chirality::L)),
        (CoinParameters::from_angle(FRAC_PI_3).unwrap(), mix()),
    ]
    .into_iter()
    .map(|(coin, phi)| {
        let series = walk_series(&coin, &phi, 160, MemoryCap::DEFAULT).unwrap();
        let empirical = core::array::from_fn(|i| {
            let col: Vec<f64> = series.iter().map(|r| r.norms[i]).collect();
            empirical_limit(&col, 0.5).unwrap().estimate
        });
        CalibrationCase { coin, phi, empirical }
    })
    .collect();
    let cal = calibrate(&cases, 48).unwrap();
    assert_eq!(cal.selected, Some(Transcription::Spectral));
    assert!(cal.unique);
    assert_eq!(cal.scores.len(), Transcription::candidates().len());
    for s in &cal.scores {
        assert_eq!(s.accepted, s.transcription_id == "spectral", "{s:?}");
    }
}
