//! Numerical minimization of the channel output entropy over pure inputs.
//!
//! Mixed inputs never beat the best of their own eigenvectors (entropy is
//! concave), so the search runs over pure states only, parametrized by three
//! hyperspherical angles and three relative phases. Each run is a batch of
//! Nelder-Mead descents started from the four computational basis states,
//! the four Bell states, and a shifted Halton sequence over the angle box.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{AnsatzBranch, AnsatzState};
use crate::channel::{apply, ChannelSpec, DensityMatrix};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::pauli::PureState;
use crate::sampling::random_mixed_state;
use crate::spectral::von_neumann_entropy_bits;

const DOMINANCE_SLACK: f64 = 1e-9;
const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Low-discrepancy starting points, in addition to the eight warm starts.
    pub restarts: usize,
    pub max_iterations: usize,
    pub entropy_tolerance: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { restarts: 64, max_iterations: 2000, entropy_tolerance: 1e-9, seed: 42 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidChannel("restarts and max_iterations must be positive".into()));
        }
        if !(self.entropy_tolerance > 0.0 && self.entropy_tolerance.is_finite()) {
            return Err(Error::OutOfRange {
                name: "entropy_tolerance",
                value: self.entropy_tolerance,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SearchConfig { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    AnalyticClosedForm,
    AnsatzGrid,
    GlobalSearch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoeResult {
    pub state: PureState,
    pub entropy_bits: f64,
    pub method: Method,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Angles `[a1, a2, a3, b1, b2, b3]` to
/// `(cos a1, e^{ib1} sin a1 cos a2, e^{ib2} sin a1 sin a2 cos a3, e^{ib3} sin a1 sin a2 sin a3)`.
pub fn parametrize_pure_state(angles: &[f64; 6]) -> PureState {
    let [a1, a2, a3, b1, b2, b3] = *angles;
    let (s1, c1) = a1.sin_cos();
    let (s2, c2) = a2.sin_cos();
    let (s3, c3) = a3.sin_cos();
    let amps = [
        Complex64::new(c1, 0.0),
        Complex64::from_polar(s1 * c2, b1),
        Complex64::from_polar(s1 * s2 * c3, b2),
        Complex64::from_polar(s1 * s2 * s3, b3),
    ];
    PureState::normalized(amps).expect("unit vector by construction")
}

pub fn output_entropy(spec: &ChannelSpec, state: &PureState) -> Result<f64> {
    von_neumann_entropy_bits(&apply(spec, &DensityMatrix::from_pure(state)))
}

fn entropy_at(spec: &ChannelSpec, angles: &[f64; 6]) -> f64 {
    output_entropy(spec, &parametrize_pure_state(angles)).unwrap_or(f64::INFINITY)
}

/// `|00>, |01>, |10>, |11>` and `|00> ± |11>`, `|01> ± |10>`.
fn warm_starts() -> [[f64; 6]; 8] {
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [FRAC_PI_2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0],
        [FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0],
        [FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0],
        [FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, PI],
        [FRAC_PI_2, FRAC_PI_4, 0.0, 0.0, 0.0, 0.0],
        [FRAC_PI_2, FRAC_PI_4, 0.0, 0.0, PI, 0.0],
    ]
}

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while n > 0 {
        x += (n % base) as f64 * inv;
        n /= base;
        inv /= base as f64;
    }
    x
}

/// Halton point `index` with a Cranley-Patterson shift, mapped to the angle box.
fn halton_start(index: u64, shift: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|d| {
        let u = (radical_inverse(index + 1, HALTON_BASES[d]) + shift[d]).fract();
        if d < 3 {
            u * FRAC_PI_2
        } else {
            u * TAU
        }
    })
}

struct Descent {
    angles: [f64; 6],
    entropy: f64,
}

pub fn minimize_output_entropy(spec: &ChannelSpec, config: &SearchConfig) -> Result<MoeResult> {
    config.validate()?;
    let mut shift_rng = ChaCha8Rng::seed_from_u64(config.seed);
    let shift: [f64; 6] = std::array::from_fn(|_| shift_rng.gen::<f64>());

    let warm = warm_starts();
    let total = warm.len() + config.restarts;
    let opts = NelderMeadOptions { max_iterations: config.max_iterations, f_tolerance: 1e-14, rebuilds: 2 };

    let descents: Vec<Descent> = (0..total)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64 + 1);
            let start = if k < warm.len() {
                warm[k]
            } else {
                halton_start((k - warm.len()) as u64, &shift)
            };
            let steps: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.15..0.45));
            let m = nelder_mead(|x| entropy_at(spec, x), start, steps, opts);
            Descent { angles: m.x, entropy: m.f }
        })
        .collect();

    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| descents[a].entropy.total_cmp(&descents[b].entropy).then(a.cmp(&b)));
    let best = &descents[order[0]];
    let runner_up = &descents[order[1]];
    let state = parametrize_pure_state(&best.angles);
    let entropy = output_entropy(spec, &state)?;

    Ok(MoeResult {
        state,
        entropy_bits: entropy,
        method: Method::GlobalSearch,
        converged: runner_up.entropy - best.entropy <= config.entropy_tolerance,
        restarts_used: total,
    })
}

/// Exhaustive scan of both ansatz branches on a `(θ, φ)` grid.
pub fn ansatz_grid_search(spec: &ChannelSpec, theta_steps: usize, phi_steps: usize) -> Result<MoeResult> {
    if theta_steps < 2 || phi_steps < 1 {
        return Err(Error::InvalidChannel("grid needs at least 2 theta and 1 phi points".into()));
    }
    let mut best: Option<(f64, PureState)> = None;
    for branch in [AnsatzBranch::ZeroZeroOneOne, AnsatzBranch::ZeroOneOneZero] {
        for t in 0..theta_steps {
            let theta = FRAC_PI_2 * t as f64 / (theta_steps - 1) as f64;
            for f in 0..phi_steps {
                let phi = TAU * f as f64 / phi_steps as f64;
                let state = AnsatzState::new(theta, phi, branch)?.to_pure_state();
                let s = output_entropy(spec, &state)?;
                if best.as_ref().map_or(true, |(b, _)| s < *b) {
                    best = Some((s, state));
                }
            }
        }
    }
    let (entropy_bits, state) = best.expect("non-empty grid");
    Ok(MoeResult { state, entropy_bits, method: Method::AnsatzGrid, converged: true, restarts_used: 0 })
}

/// Samples random mixed inputs and checks that none beats its best eigenvector.
pub fn mixed_state_dominance_check(spec: &ChannelSpec, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let (rho, _, eigenvectors) = random_mixed_state(&mut rng);
        let mixed = von_neumann_entropy_bits(&apply(spec, &rho))?;
        let mut best_pure = f64::INFINITY;
        for v in &eigenvectors {
            best_pure = best_pure.min(output_entropy(spec, v)?);
        }
        if mixed < best_pure - DOMINANCE_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{preset_depolarizing, preset_symmetric};
    use crate::spectral::shannon_entropy_bits;

    fn quick() -> SearchConfig {
        SearchConfig { restarts: 16, ..SearchConfig::default() }
    }

    #[test]
    fn parametrization_examples() {
        assert_eq!(parametrize_pure_state(&[0.0; 6]), PureState::basis(0));
        let bell = parametrize_pure_state(&[FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0]);
        for k in 0..4 {
            assert!((bell.amplitudes()[k] - PureState::bell().amplitudes()[k]).norm() < 1e-15);
        }
        let s = parametrize_pure_state(&[1.3, -4.0, 0.2, 7.0, 0.1, -2.2]);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn warm_starts_cover_basis_and_bell_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let states: Vec<_> = warm_starts().iter().map(parametrize_pure_state).collect();
        for k in 0..4 {
            assert!((states[k].amplitudes()[k].norm() - 1.0).abs() < 1e-15);
        }
        assert!((states[5].amplitudes()[3] + Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((states[7].amplitudes()[2] + Complex64::new(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn output_entropy_examples() {
        let s = output_entropy(&ChannelSpec::identity(), &parametrize_pure_state(&[0.3, 1.0, 2.0, 0.1, 0.2, 0.3]));
        assert!(s.unwrap().abs() < 1e-10);

        let bell = output_entropy(&preset_symmetric(0.3, 0.5).unwrap(), &PureState::bell()).unwrap();
        assert!((bell - shannon_entropy_bits(&[0.63, 0.13, 0.12, 0.12]).unwrap()).abs() < 1e-10);

        let product = output_entropy(&preset_symmetric(0.45, 0.2).unwrap(), &PureState::basis(0)).unwrap();
        assert!((product - shannon_entropy_bits(&[0.828, 0.072, 0.072, 0.028]).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn minimizer_examples() {
        let r = minimize_output_entropy(&ChannelSpec::identity(), &quick()).unwrap();
        assert!(r.entropy_bits.abs() < 1e-10);
        assert_eq!(r.method, Method::GlobalSearch);
        assert_eq!(r.restarts_used, 24);

        let r = minimize_output_entropy(&preset_symmetric(0.3, 0.5).unwrap(), &quick()).unwrap();
        assert!((r.entropy_bits - 1.536_721_674).abs() < 1e-6);
        assert!(r.converged);

        let r = minimize_output_entropy(&preset_symmetric(0.45, 0.2).unwrap(), &quick()).unwrap();
        assert!((r.entropy_bits - 0.916_501_946).abs() < 1e-6);
        let [w0, _] = r.state.schmidt_weights();
        assert!(w0 > 1.0 - 1e-6, "minimizer should be a product state, Schmidt {w0}");
    }

    #[test]
    fn minimizer_is_deterministic() {
        let spec = preset_depolarizing(0.6, 0.3).unwrap();
        let a = minimize_output_entropy(&spec, &quick()).unwrap();
        let b = minimize_output_entropy(&spec, &quick()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entropy_bits.to_bits(), b.entropy_bits.to_bits());
    }

    #[test]
    fn minimizer_rejects_bad_config() {
        let cfg = SearchConfig { restarts: 0, ..SearchConfig::default() };
        assert!(minimize_output_entropy(&ChannelSpec::identity(), &cfg).is_err());
    }

    #[test]
    fn ansatz_grid_finds_bell_optimum() {
        let r = ansatz_grid_search(&preset_symmetric(0.3, 0.5).unwrap(), 9, 8).unwrap();
        assert!((r.entropy_bits - 1.536_721_674).abs() < 1e-8);
        assert_eq!(r.method, Method::AnsatzGrid);
    }

    #[test]
    fn dominance_examples() {
        assert!(mixed_state_dominance_check(&ChannelSpec::identity(), 50, 1).unwrap());
        assert!(mixed_state_dominance_check(&preset_symmetric(0.3, 0.5).unwrap(), 200, 2).unwrap());
        assert!(mixed_state_dominance_check(&preset_depolarizing(0.7, 0.5).unwrap(), 200, 3).unwrap());
    }
}
