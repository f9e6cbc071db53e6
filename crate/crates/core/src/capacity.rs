//! Holevo quantity of the Pauli-covariant ensemble.
//!
//! Given a minimal-output-entropy input `ρ*`, the sixteen states
//! `(σi⊗σj) ρ* (σi⊗σj)` with equal priors all have output entropy `S_min`
//! and average to an input whose output is `I/4`. Their Holevo quantity is
//! therefore `2 - S_min`, the upper bound for any two-qubit channel.

use serde::Serialize;

use crate::analytic::{optimal_input, Regime, SymmetricParams};
use crate::channel::{apply, ChannelSpec, DensityMatrix};
use crate::error::{Error, Result};
use crate::pauli::{pauli_products, Operator, PureState};
use crate::search::{minimize_output_entropy, Method, SearchConfig};
use crate::spectral::von_neumann_entropy_bits;

const PRIOR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<DensityMatrix>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<DensityMatrix>, priors: Vec<f64>) -> Result<Self> {
        if states.len() != priors.len() || states.is_empty() {
            return Err(Error::InvalidProbabilities(format!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            )));
        }
        if priors.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProbabilities("negative prior".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!("priors sum to {total}")));
        }
        Ok(Ensemble { states, priors })
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `Σ p_i ρ_i`.
    pub fn average(&self) -> Result<DensityMatrix> {
        let parts: Vec<(f64, DensityMatrix)> = self.priors.iter().copied().zip(self.states.iter().copied()).collect();
        DensityMatrix::mixture(&parts)
    }
}

/// The sixteen Pauli conjugates of `|ψ><ψ|`, each with prior 1/16.
pub fn covariant_ensemble(state: &PureState) -> Ensemble {
    let rho = Operator::projector(state);
    let states = pauli_products()
        .iter()
        .map(|u| DensityMatrix::from_operator_unchecked(u.conjugate_unchecked(&rho)))
        .collect();
    Ensemble { states, priors: vec![1.0 / 16.0; 16] }
}

/// `S(E(Σ p_i ρ_i)) - Σ p_i S(E(ρ_i))`, in bits.
pub fn holevo_chi(spec: &ChannelSpec, ensemble: &Ensemble) -> Result<f64> {
    let output_entropies = ensemble_output_entropies(spec, ensemble)?;
    let average = von_neumann_entropy_bits(&apply(spec, &ensemble.average()?))?;
    let conditional: f64 = ensemble.priors.iter().zip(&output_entropies).map(|(p, s)| p * s).sum();
    Ok(average - conditional)
}

/// `S(E(ρ_i))` for each member, in ensemble order.
pub fn ensemble_output_entropies(spec: &ChannelSpec, ensemble: &Ensemble) -> Result<Vec<f64>> {
    ensemble
        .states
        .iter()
        .map(|rho| von_neumann_entropy_bits(&apply(spec, rho)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CapacityPath {
    /// Closed form for the symmetric class, numerical search otherwise.
    #[default]
    Auto,
    ForceNumeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub chi_bits: f64,
    pub s_min_bits: f64,
    pub ensemble: Ensemble,
    pub saturation_gap: f64,
    pub state: PureState,
    pub method: Method,
    /// Closed-form regime; `None` on the numerical path.
    pub regime: Option<Regime>,
    pub converged: bool,
}

pub fn two_qubit_capacity(spec: &ChannelSpec, config: &SearchConfig) -> Result<CapacityResult> {
    two_qubit_capacity_with(spec, config, CapacityPath::Auto)
}

pub fn two_qubit_capacity_with(spec: &ChannelSpec, config: &SearchConfig, path: CapacityPath) -> Result<CapacityResult> {
    let symmetric_p = match path {
        CapacityPath::Auto => spec.symmetric_class(),
        CapacityPath::ForceNumeric => None,
    };
    let (state, s_min, method, regime, converged) = match symmetric_p {
        Some(p) => {
            let report = optimal_input(&SymmetricParams::new(p, spec.mu())?);
            (report.state.to_pure_state(), report.s_min, Method::AnalyticClosedForm, Some(report.regime), true)
        }
        None => {
            let found = minimize_output_entropy(spec, config)?;
            (found.state, found.entropy_bits, Method::GlobalSearch, None, found.converged)
        }
    };
    let ensemble = covariant_ensemble(&state);
    let chi = holevo_chi(spec, &ensemble)?;
    Ok(CapacityResult {
        chi_bits: chi,
        s_min_bits: s_min,
        saturation_gap: (chi - (2.0 - s_min)).abs(),
        ensemble,
        state,
        method,
        regime,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{preset_depolarizing, preset_symmetric};
    use crate::spectral::hermitian_eigenvalues;

    fn quick() -> SearchConfig {
        SearchConfig { restarts: 16, ..SearchConfig::default() }
    }

    #[test]
    fn product_ensemble_collapses_to_basis() {
        let e = covariant_ensemble(&PureState::basis(0));
        assert_eq!(e.len(), 16);
        let mut counts = [0; 4];
        for rho in e.states() {
            let k = (0..4)
                .find(|&k| rho.operator().approx_eq(&Operator::projector(&PureState::basis(k))))
                .expect("computational basis projector");
            counts[k] += 1;
        }
        assert_eq!(counts, [4; 4]);
        assert!(e.priors().iter().all(|&p| p == 1.0 / 16.0));
    }

    #[test]
    fn bell_ensemble_stays_maximally_entangled() {
        let e = covariant_ensemble(&PureState::bell());
        for rho in e.states() {
            // A pure state with maximally mixed marginal: ρ_A = I/2.
            let op = rho.operator();
            let a00 = op.get(0, 0) + op.get(1, 1);
            let a01 = op.get(0, 2) + op.get(1, 3);
            assert!((a00.re - 0.5).abs() < 1e-12 && a01.norm() < 1e-12);
            let s = hermitian_eigenvalues(op).unwrap();
            assert!((s.0[0] - 1.0).abs() < 1e-12);
        }
        let avg = e.average().unwrap();
        assert!(avg.operator().approx_eq(&Operator::identity().scale(0.25)));
    }

    #[test]
    fn chi_examples() {
        let basis = Ensemble::new((0..4).map(|k| DensityMatrix::from_pure(&PureState::basis(k))).collect(), vec![0.25; 4])
            .unwrap();
        assert!((holevo_chi(&ChannelSpec::identity(), &basis).unwrap() - 2.0).abs() < 1e-12);

        let single = Ensemble::new(vec![DensityMatrix::from_pure(&PureState::bell())], vec![1.0]).unwrap();
        let spec = preset_depolarizing(0.6, 0.4).unwrap();
        assert!(holevo_chi(&spec, &single).unwrap().abs() < 1e-12);

        let spec = preset_symmetric(0.3, 0.5).unwrap();
        let chi = holevo_chi(&spec, &covariant_ensemble(&PureState::bell())).unwrap();
        assert!((chi - 0.463_278_326).abs() < 1e-6);
    }

    #[test]
    fn ensemble_validation() {
        let s = DensityMatrix::maximally_mixed();
        assert!(Ensemble::new(vec![s, s], vec![0.5]).is_err());
        assert!(Ensemble::new(vec![s, s], vec![0.7, 0.7]).is_err());
        assert!(Ensemble::new(vec![s, s], vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn chi_ignores_duplication_and_order() {
        let spec = preset_depolarizing(0.55, 0.3).unwrap();
        let a = DensityMatrix::from_pure(&PureState::basis(1));
        let b = DensityMatrix::from_pure(&PureState::bell());
        let plain = Ensemble::new(vec![a, b], vec![0.3, 0.7]).unwrap();
        let split = Ensemble::new(vec![b, a, b], vec![0.5, 0.3, 0.2]).unwrap();
        let (x, y) = (holevo_chi(&spec, &plain).unwrap(), holevo_chi(&spec, &split).unwrap());
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn capacity_examples() {
        let r = two_qubit_capacity(&preset_symmetric(0.25, 1.0).unwrap(), &quick()).unwrap();
        assert!((r.chi_bits - 2.0).abs() < 1e-10);
        assert!(r.saturation_gap <= 1e-10);
        assert_eq!(r.method, Method::AnalyticClosedForm);

        let r = two_qubit_capacity(&preset_symmetric(0.45, 0.2).unwrap(), &quick()).unwrap();
        assert!((r.chi_bits - 1.083_498_054).abs() < 1e-8);
        assert_eq!(r.regime, Some(Regime::Product));

        let r = two_qubit_capacity(&preset_depolarizing(0.7, 0.9).unwrap(), &quick()).unwrap();
        assert_eq!(r.method, Method::GlobalSearch);
        assert!(r.saturation_gap <= 1e-8);
        assert!((r.chi_bits - (2.0 - r.s_min_bits)).abs() <= 1e-8);
    }

    #[test]
    fn forced_numeric_path_agrees_with_closed_form() {
        let spec = preset_symmetric(0.38, 0.3).unwrap();
        let analytic = two_qubit_capacity(&spec, &quick()).unwrap();
        let numeric = two_qubit_capacity_with(&spec, &quick(), CapacityPath::ForceNumeric).unwrap();
        assert_eq!(numeric.method, Method::GlobalSearch);
        assert!((analytic.chi_bits - numeric.chi_bits).abs() < 1e-6);
    }
}
