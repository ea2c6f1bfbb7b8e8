//! Seeded random coins and initial states.

use std::f64::consts::PI;

use qwalk_core::{CoinParameters, InitialState, C64};
use rand::Rng;

/// `a = cos α·e^{iβ}`, `b = sin α·e^{iγ}`, `Δ = e^{iδ}` with α kept away
/// from 0 and π/2 so that `abcd` stays clear of zero.
pub fn random_coin<R: Rng>(rng: &mut R) -> CoinParameters {
    let alpha = rng.gen_range(0.15..(PI / 2.0 - 0.15));
    let phase = |rng: &mut R| C64::from_polar(1.0, rng.gen_range(-PI..PI));
    let a = phase(rng) * alpha.cos();
    let b = phase(rng) * alpha.sin();
    let delta = phase(rng);
    CoinParameters::new(a, b, delta).expect("sampled coin is unitary")
}

pub fn random_state<R: Rng>(rng: &mut R) -> InitialState {
    loop {
        let raw: [C64; 4] =
            std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.1 {
            return InitialState::new(raw.map(|z| z / norm)).expect("normalized");
        }
    }
}

/// A product state `u ⊗ v` of two random qubits.
pub fn random_product_state<R: Rng>(rng: &mut R) -> InitialState {
    let mut qubit = || {
        let t = rng.gen_range(0.0..PI / 2.0);
        [
            C64::new(t.cos(), 0.0),
            C64::from_polar(t.sin(), rng.gen_range(-PI..PI)),
        ]
    };
    let u = qubit();
    let v = qubit();
    InitialState::product(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid_and_reproducible() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let c = random_coin(&mut r1);
            assert!(c.unitarity_residual() < 1e-12);
            assert!(c.abcd() > 1e-3);
            assert_eq!(c, random_coin(&mut r2));
            let s = random_state(&mut r1);
            let _ = random_state(&mut r2);
            let n: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
