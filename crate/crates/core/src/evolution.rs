//! Lattice evolution of the four-component amplitude field.
//!
//! One step is the stencil
//!
//! ```text
//! Ψₙ₊₁(x, y) = P·Ψₙ(x+1, y) + Q·Ψₙ(x−1, y) + R·Ψₙ(x, y+1) + S·Ψₙ(x, y−1)
//! ```
//!
//! where `P, Q, R, S` are the L/R/D/U row slices of `U ⊗ U`. Each output
//! component reads exactly one neighbour, so a step costs four 4-term dot
//! products per site. Fields are stored densely over `[−n, n]²` and every step
//! writes into a fresh, larger buffer.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::coin::{Chirality, CoinParameters, DirectionMatrices};
use crate::linalg::{mat4_add, mat4_apply, mat4_mul, Mat4};
use crate::par;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ZERO4: [C64; 4] = [ZERO; 4];

/// Normalization tolerance for initial states.
pub const STATE_TOL: f64 = 1e-12;
/// Largest time the path-sum oracle will enumerate (4ⁿ words).
pub const ORACLE_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EvolutionError {
    #[error("initial state violates |alpha|^2 + |beta|^2 + |gamma|^2 + |lambda|^2 = 1 (got {norm})")]
    NotNormalized { norm: f64 },
    #[error("lattice for n = {n} needs {required} bytes, above the {cap}-byte memory cap")]
    ResourceLimit { n: usize, required: u64, cap: u64 },
    #[error("path-sum oracle limited to n <= {max}, requested {n}")]
    TooLarge { n: usize, max: usize },
    #[error("field data has {got} sites, expected {expected} for n = {n}")]
    Shape { n: usize, got: usize, expected: usize },
}

/// Coin state at the origin, components on `(L, R, D, U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InitialState {
    amplitudes: [C64; 4],
}

impl InitialState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self, EvolutionError> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !((norm - 1.0).abs() < STATE_TOL) {
            return Err(EvolutionError::NotNormalized { norm });
        }
        Ok(InitialState { amplitudes })
    }

    pub fn basis(chirality: Chirality) -> Self {
        let mut amplitudes = ZERO4;
        amplitudes[chirality.index()] = C64::new(1.0, 0.0);
        InitialState { amplitudes }
    }

    /// `u ⊗ v` for two qubit states, normalizing each factor.
    pub fn product(u: [C64; 2], v: [C64; 2]) -> Self {
        let nu = crate::math::sqrt(u[0].norm_sqr() + u[1].norm_sqr());
        let nv = crate::math::sqrt(v[0].norm_sqr() + v[1].norm_sqr());
        let amplitudes =
            core::array::from_fn(|k| (u[k / 2] / nu) * (v[k % 2] / nv));
        InitialState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amplitudes
    }

    pub fn component(&self, chirality: Chirality) -> C64 {
        self.amplitudes[chirality.index()]
    }

    /// Multiplies every component by `e^{iχ}`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let phase = C64::from_polar(1.0, chi);
        InitialState {
            amplitudes: self.amplitudes.map(|z| z * phase),
        }
    }
}

/// Upper bound on the bytes a single field buffer may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryCap(pub u64);

impl MemoryCap {
    pub const DEFAULT: MemoryCap = MemoryCap(4 << 30);

    /// `(2n+1)² · 4` complex entries.
    pub fn field_bytes(n: usize) -> u64 {
        let side = 2 * n as u64 + 1;
        side * side * 4 * core::mem::size_of::<C64>() as u64
    }

    pub fn check(self, n: usize) -> Result<(), EvolutionError> {
        let required = Self::field_bytes(n);
        if required > self.0 {
            Err(EvolutionError::ResourceLimit {
                n,
                required,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemoryCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `Ψₙ(x, y)` on the square `[−n, n]²`, rows indexed by `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeField {
    n: usize,
    sites: Vec<[C64; 4]>,
}

impl AmplitudeField {
    pub fn from_sites(n: usize, sites: Vec<[C64; 4]>) -> Result<Self, EvolutionError> {
        let side = 2 * n + 1;
        if sites.len() != side * side {
            return Err(EvolutionError::Shape {
                n,
                got: sites.len(),
                expected: side * side,
            });
        }
        Ok(AmplitudeField { n, sites })
    }

    pub fn time(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn sites(&self) -> &[[C64; 4]] {
        &self.sites
    }

    #[inline]
    fn offset(&self, x: i64, y: i64) -> Option<usize> {
        let n = self.n as i64;
        if x < -n || x > n || y < -n || y > n {
            return None;
        }
        Some(((y + n) as usize) * self.side() + (x + n) as usize)
    }

    /// Amplitude at `(x, y)`; zero outside the stored square.
    #[inline]
    pub fn at(&self, x: i64, y: i64) -> [C64; 4] {
        self.offset(x, y).map_or(ZERO4, |i| self.sites[i])
    }

    /// Row `y` of the square, indexed by `x + n`.
    pub fn row(&self, y: i64) -> &[[C64; 4]] {
        let side = self.side();
        let start = (y + self.n as i64) as usize * side;
        &self.sites[start..start + side]
    }

    /// Whether `(x, y)` can carry amplitude at this time.
    pub fn parity_allowed(&self, x: i64, y: i64) -> bool {
        (x + y + self.n as i64).rem_euclid(2) == 0
    }

    /// Sites of the right parity inside the square, row by row.
    pub fn parity_sites(&self) -> impl Iterator<Item = (i64, i64, [C64; 4])> + '_ {
        let n = self.n as i64;
        (-n..=n).flat_map(move |y| {
            (-n..=n)
                .filter(move |x| (x + y + n).rem_euclid(2) == 0)
                .map(move |x| (x, y, self.at(x, y)))
        })
    }

    /// `Σ_{x,y} ‖Ψₙ(x, y)‖²`, summed row by row in a fixed order.
    pub fn norm_sqr(&self) -> f64 {
        let side = self.side();
        par::map_rows(side, |r| {
            self.sites[r * side..(r + 1) * side]
                .iter()
                .map(|s| s.iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum::<f64>()
        })
        .into_iter()
        .sum()
    }

    /// `‖Ψₙʲ‖²` for each chirality.
    pub fn component_norms(&self) -> [f64; 4] {
        let side = self.side();
        par::map_rows(side, |r| {
            let mut acc = [0.0; 4];
            for s in &self.sites[r * side..(r + 1) * side] {
                for j in 0..4 {
                    acc[j] += s[j].norm_sqr();
                }
            }
            acc
        })
        .into_iter()
        .fold([0.0; 4], |mut acc, row| {
            for j in 0..4 {
                acc[j] += row[j];
            }
            acc
        })
    }

    /// Number of wrong-parity sites holding a nonzero amplitude.
    pub fn parity_violations(&self) -> usize {
        let n = self.n as i64;
        let mut count = 0;
        for y in -n..=n {
            for x in -n..=n {
                if !self.parity_allowed(x, y) && self.at(x, y).iter().any(|z| *z != ZERO) {
                    count += 1;
                }
            }
        }
        count
    }
}

pub fn initial_field(phi: &InitialState) -> AmplitudeField {
    AmplitudeField {
        n: 0,
        sites: vec![*phi.amplitudes()],
    }
}

#[inline]
fn dot4(row: &[C64; 4], v: &[C64; 4]) -> C64 {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3]
}

/// One application of the walk operator.
pub fn step(field: &AmplitudeField, dirs: &DirectionMatrices) -> AmplitudeField {
    let n_next = field.n + 1;
    let side = 2 * n_next + 1;
    let rows = [
        dirs.row(Chirality::L),
        dirs.row(Chirality::R),
        dirs.row(Chirality::D),
        dirs.row(Chirality::U),
    ];
    let reach = n_next as i64;
    let mut sites = vec![ZERO4; side * side];
    par::fill_rows(&mut sites, side, |r, out| {
        let y = r as i64 - reach;
        let span = reach - y.abs();
        // first x in the diamond with x + y + n_next even
        let mut x = -span;
        while x <= span {
            let site = [
                dot4(&rows[0], &field.at(x + 1, y)),
                dot4(&rows[1], &field.at(x - 1, y)),
                dot4(&rows[2], &field.at(x, y + 1)),
                dot4(&rows[3], &field.at(x, y - 1)),
            ];
            out[(x + reach) as usize] = site;
            x += 2;
        }
    });
    AmplitudeField { n: n_next, sites }
}

/// Incremental driver: owns the current field and advances it in place.
#[derive(Debug, Clone)]
pub struct Walk {
    dirs: DirectionMatrices,
    field: AmplitudeField,
    cap: MemoryCap,
}

impl Walk {
    pub fn new(coin: &CoinParameters, phi: &InitialState) -> Self {
        Walk {
            dirs: coin.directions(),
            field: initial_field(phi),
            cap: MemoryCap::DEFAULT,
        }
    }

    pub fn with_memory_cap(mut self, cap: MemoryCap) -> Self {
        self.cap = cap;
        self
    }

    pub fn time(&self) -> usize {
        self.field.n
    }

    pub fn field(&self) -> &AmplitudeField {
        &self.field
    }

    pub fn into_field(self) -> AmplitudeField {
        self.field
    }

    pub fn advance(&mut self) -> Result<(), EvolutionError> {
        self.cap.check(self.field.n + 1)?;
        self.field = step(&self.field, &self.dirs);
        Ok(())
    }
}

pub fn evolve(
    coin: &CoinParameters,
    phi: &InitialState,
    n: usize,
) -> Result<AmplitudeField, EvolutionError> {
    evolve_with_cap(coin, phi, n, MemoryCap::DEFAULT)
}

pub fn evolve_with_cap(
    coin: &CoinParameters,
    phi: &InitialState,
    n: usize,
    cap: MemoryCap,
) -> Result<AmplitudeField, EvolutionError> {
    cap.check(n)?;
    let mut walk = Walk::new(coin, phi).with_memory_cap(cap);
    for _ in 0..n {
        walk.advance()?;
    }
    Ok(walk.into_field())
}

/// Direction counts `(l, r, d, u)`.
pub type StepCounts = [usize; 4];

/// `Ξₙ(l, r, d, u)` for every count vector with `l + r + d + u = n`.
#[derive(Debug, Clone)]
pub struct PathSumTable {
    pub n: usize,
    pub entries: BTreeMap<StepCounts, Mat4>,
}

impl PathSumTable {
    pub fn get(&self, counts: StepCounts) -> Option<&Mat4> {
        self.entries.get(&counts)
    }

    /// Site reached by a count vector.
    pub fn position(counts: StepCounts) -> (i64, i64) {
        let [l, r, d, u] = counts.map(|c| c as i64);
        (r - l, u - d)
    }

    /// `Ψₙ(x, y) = Σ Ξₙ(l, r, d, u)·φ` over the classes landing on `(x, y)`.
    pub fn field(&self, phi: &InitialState) -> AmplitudeField {
        let n = self.n as i64;
        let side = self.n * 2 + 1;
        let mut sites = vec![ZERO4; side * side];
        for (&counts, xi) in &self.entries {
            let (x, y) = Self::position(counts);
            let amp = mat4_apply(xi, phi.amplitudes());
            let slot = &mut sites[((y + n) as usize) * side + (x + n) as usize];
            for j in 0..4 {
                slot[j] += amp[j];
            }
        }
        AmplitudeField { n: self.n, sites }
    }

    /// `‖Ξₙ(l, r, d, u)·φ‖²` per count class. Several classes can reach one
    /// site and their amplitudes add, so site probabilities come from
    /// [`PathSumTable::distribution`], not from summing these.
    pub fn class_norms(&self, phi: &InitialState) -> BTreeMap<StepCounts, f64> {
        self.entries
            .iter()
            .map(|(&c, xi)| {
                let amp = mat4_apply(xi, phi.amplitudes());
                (c, amp.iter().map(|z| z.norm_sqr()).sum())
            })
            .collect()
    }

    pub fn distribution(&self, phi: &InitialState) -> ProbabilityGrid {
        distribution(&self.field(phi))
    }
}

/// Enumerates all `4ⁿ` direction words and accumulates the ordered products
/// per count class. The most recent step multiplies on the left.
pub fn path_sum_oracle(coin: &CoinParameters, n: usize) -> Result<PathSumTable, EvolutionError> {
    if n > ORACLE_MAX_N {
        return Err(EvolutionError::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let dirs = coin.directions();
    let mut entries = BTreeMap::new();
    let identity = crate::linalg::mat4_identity();
    enumerate_words(&dirs, n, identity, [0; 4], &mut entries);
    Ok(PathSumTable { n, entries })
}

fn enumerate_words(
    dirs: &DirectionMatrices,
    remaining: usize,
    product: Mat4,
    counts: StepCounts,
    out: &mut BTreeMap<StepCounts, Mat4>,
) {
    if remaining == 0 {
        out.entry(counts)
            .and_modify(|acc| *acc = mat4_add(acc, &product))
            .or_insert(product);
        return;
    }
    for k in 0..4 {
        let mut next = counts;
        next[k] += 1;
        let extended = mat4_mul(&dirs.slices[k], &product);
        enumerate_words(dirs, remaining - 1, extended, next, out);
    }
}

/// `P(Xₙ = x, Yₙ = y)` on `[−n, n]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGrid {
    n: usize,
    p: Vec<f64>,
}

impl ProbabilityGrid {
    pub fn time(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn at(&self, x: i64, y: i64) -> f64 {
        let n = self.n as i64;
        if x < -n || x > n || y < -n || y > n {
            return 0.0;
        }
        self.p[((y + n) as usize) * self.side() + (x + n) as usize]
    }

    pub fn total(&self) -> f64 {
        let side = self.side();
        self.p.chunks(side).map(|row| row.iter().sum::<f64>()).sum()
    }

    /// Number of sites with positive probability.
    pub fn support_size(&self) -> usize {
        self.p.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn rows(&self) -> core::slice::Chunks<'_, f64> {
        self.p.chunks(self.side())
    }
}

pub fn distribution(field: &AmplitudeField) -> ProbabilityGrid {
    let side = field.side();
    let mut p = vec![0.0; side * side];
    par::fill_rows(&mut p, side, |r, out| {
        for (dst, s) in out.iter_mut().zip(&field.sites[r * side..(r + 1) * side]) {
            *dst = s.iter().map(|z| z.norm_sqr()).sum();
        }
    });
    ProbabilityGrid { n: field.n, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn assert_site(field: &AmplitudeField, x: i64, y: i64, want: [f64; 4]) {
        let got = field.at(x, y);
        for j in 0..4 {
            assert_abs_diff_eq!(got[j].re, want[j], epsilon = 1e-15);
            assert_abs_diff_eq!(got[j].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn initial_state_validation() {
        assert!(InitialState::new([c(1.0), c(1.0), c(0.0), c(0.0)]).is_err());
        let phi = InitialState::new([c(0.5); 4]).unwrap();
        let f = initial_field(&phi);
        assert_eq!(f.time(), 0);
        assert_abs_diff_eq!(f.norm_sqr(), 1.0, epsilon = 1e-15);

        let f = initial_field(&InitialState::basis(Chirality::L));
        assert_site(&f, 0, 0, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn hadamard_first_step() {
        let dirs = CoinParameters::hadamard().directions();
        let f = step(&initial_field(&InitialState::basis(Chirality::L)), &dirs);
        assert_site(&f, -1, 0, [0.5, 0.0, 0.0, 0.0]);
        assert_site(&f, 1, 0, [0.0, 0.5, 0.0, 0.0]);
        assert_site(&f, 0, -1, [0.0, 0.0, 0.5, 0.0]);
        assert_site(&f, 0, 1, [0.0, 0.0, 0.0, 0.5]);
        assert_abs_diff_eq!(f.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_coin_moves_ballistically() {
        let f = evolve(&CoinParameters::identity(), &InitialState::basis(Chirality::L), 1).unwrap();
        assert_site(&f, -1, 0, [1.0, 0.0, 0.0, 0.0]);
        for n in [1, 5, 17] {
            let f = evolve(&CoinParameters::identity(), &InitialState::basis(Chirality::U), n).unwrap();
            assert_abs_diff_eq!(distribution(&f).at(0, n as i64), 1.0, epsilon = 0.0);
        }
    }

    #[test]
    fn hadamard_second_step() {
        let f = evolve(&CoinParameters::hadamard(), &InitialState::basis(Chirality::L), 2).unwrap();
        assert_site(&f, 0, 0, [0.25, 0.25, -0.25, -0.25]);
        let p = distribution(&f);
        assert_abs_diff_eq!(p.at(0, 0), 0.25, epsilon = 1e-15);
        for (x, y) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert_abs_diff_eq!(p.at(x, y), 0.125, epsilon = 1e-15);
        }
        for (x, y) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
            assert_abs_diff_eq!(p.at(x, y), 0.0625, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_steps_is_initial_field() {
        let phi = InitialState::basis(Chirality::D);
        let f = evolve(&CoinParameters::hadamard(), &phi, 0).unwrap();
        assert_eq!(f, initial_field(&phi));
        let p = distribution(&f);
        assert_eq!(p.values(), &[1.0]);
    }

    #[test]
    fn memory_cap_rejects_large_lattices() {
        let err = evolve_with_cap(
            &CoinParameters::hadamard(),
            &InitialState::basis(Chirality::L),
            100,
            MemoryCap(1 << 20),
        )
        .unwrap_err();
        assert!(matches!(err, EvolutionError::ResourceLimit { n: 100, .. }));
        assert_eq!(MemoryCap::field_bytes(1), 9 * 64);
    }

    #[test]
    fn oracle_single_step_classes() {
        let coin = CoinParameters::hadamard();
        let dirs = coin.directions();
        let t = path_sum_oracle(&coin, 1).unwrap();
        assert_eq!(t.entries.len(), 4);
        assert_eq!(t.get([1, 0, 0, 0]), Some(dirs.get(Chirality::L)));
        assert_eq!(t.get([0, 1, 0, 0]), Some(dirs.get(Chirality::R)));
        assert_eq!(t.get([0, 0, 1, 0]), Some(dirs.get(Chirality::D)));
        assert_eq!(t.get([0, 0, 0, 1]), Some(dirs.get(Chirality::U)));
        assert!(matches!(path_sum_oracle(&coin, 9), Err(EvolutionError::TooLarge { .. })));
    }

    #[test]
    fn oracle_two_step_class_is_both_orderings() {
        let coin = CoinParameters::hadamard();
        let dirs = coin.directions();
        let t = path_sum_oracle(&coin, 2).unwrap();
        let (p, q) = (dirs.get(Chirality::L), dirs.get(Chirality::R));
        let want = mat4_add(&mat4_mul(p, q), &mat4_mul(q, p));
        assert_eq!(t.get([1, 1, 0, 0]), Some(&want));

        let phi = InitialState::basis(Chirality::L);
        let lr = t.class_norms(&phi)[&[1, 1, 0, 0]];
        let du = t.class_norms(&phi)[&[0, 0, 1, 1]];
        assert_abs_diff_eq!(lr + du, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(t.distribution(&phi).at(0, 0), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn wrong_parity_sites_stay_bitwise_zero() {
        let coin = CoinParameters::from_angle(0.3).unwrap();
        let phi = InitialState::new([c(0.5), C64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        let f = evolve(&coin, &phi, 33).unwrap();
        assert_eq!(f.parity_violations(), 0);
    }
}
