//! Closed forms for the symmetric class `q0 = q1 = p`, `q2 = q3 = (1 - 2p)/2`.
//!
//! For ansatz inputs `cosθ|00> + e^{iφ} sinθ|11>` the channel output is
//!
//! ```text
//! ¼[ σ0σ0 + η cos2θ (σ0σ1 + σ1σ0) + C σ1σ1
//!    + μ sin2θ cosφ (σ2σ2 - σ3σ3) + μη sin2θ sinφ (σ2σ3 + σ3σ2) ]
//! ```
//!
//! with `η = 4p - 1` and `C = μ + (1 - μ)η²`. Its spectrum is
//! `(1 - C)/4` (twice) and `(1 + C)/4 ± Δ/2`, where
//! `Δ² = η² cos²2θ + μ² sin²2θ (cos²φ + η² sin²φ)`.
//!
//! The output entropy falls as `Δ` grows, so the minimum sits at `φ = 0` and
//! either `θ = 0` (`Δ = |η|`) or `θ = π/4` (`Δ = μ`), whichever is larger.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::pauli::{pauli_product, Operator, PauliIndex, PureState};
use crate::spectral::Spectrum;

/// Tolerance for calling `μ = |η|` a tie.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricParams {
    p: f64,
    mu: f64,
    eta: f64,
    big_c: f64,
}

impl SymmetricParams {
    pub fn new(p: f64, mu: f64) -> Result<Self> {
        check_range("p", p, 0.0, 0.5, "[0, 1/2]")?;
        check_range("mu", mu, 0.0, 1.0, "[0, 1]")?;
        let eta = 4.0 * p - 1.0;
        Ok(SymmetricParams { p, mu, eta, big_c: mu + (1.0 - mu) * eta * eta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AnsatzBranch {
    /// `cosθ|00> + e^{iφ} sinθ|11>`
    ZeroZeroOneOne,
    /// `cosθ|01> + e^{iφ} sinθ|10>`
    ZeroOneOneZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnsatzState {
    theta: f64,
    phi: f64,
    branch: AnsatzBranch,
}

impl AnsatzState {
    /// `θ ∈ [0, π/2]`; `φ` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64, branch: AnsatzBranch) -> Result<Self> {
        check_range("theta", theta, 0.0, FRAC_PI_2, "[0, pi/2]")?;
        if !phi.is_finite() {
            return Err(Error::OutOfRange { name: "phi", value: phi, range: "finite" });
        }
        Ok(AnsatzState { theta, phi: phi.rem_euclid(TAU), branch })
    }

    pub fn product() -> Self {
        AnsatzState { theta: 0.0, phi: 0.0, branch: AnsatzBranch::ZeroZeroOneOne }
    }

    pub fn bell() -> Self {
        AnsatzState { theta: FRAC_PI_4, phi: 0.0, branch: AnsatzBranch::ZeroZeroOneOne }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn branch(&self) -> AnsatzBranch {
        self.branch
    }

    pub fn to_pure_state(&self) -> PureState {
        let (s, c) = self.theta.sin_cos();
        let a = Complex64::new(c, 0.0);
        let b = Complex64::from_polar(s, self.phi);
        let z = Complex64::new(0.0, 0.0);
        let amps = match self.branch {
            AnsatzBranch::ZeroZeroOneOne => [a, z, z, b],
            AnsatzBranch::ZeroOneOneZero => [z, a, b, z],
        };
        PureState::normalized(amps).expect("unit vector by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Product,
    Entangled,
    /// `μ = |η|`: product and Bell inputs give the same spectrum.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalInputReport {
    pub state: AnsatzState,
    pub s_min: f64,
    pub capacity: f64,
    pub regime: Regime,
}

fn require_computed_branch(state: &AnsatzState) -> Result<()> {
    match state.branch {
        AnsatzBranch::ZeroZeroOneOne => Ok(()),
        AnsatzBranch::ZeroOneOneZero => Err(Error::UnsupportedBranch),
    }
}

/// Coefficients `c[i][j]` of `σi ⊗ σj` in the output state, ¼ included.
pub fn pauli_expansion_coefficients(params: &SymmetricParams, state: &AnsatzState) -> Result<[[f64; 4]; 4]> {
    require_computed_branch(state)?;
    let (eta, mu) = (params.eta, params.mu);
    let (sin2t, cos2t) = (2.0 * state.theta).sin_cos();
    let (sinp, cosp) = state.phi.sin_cos();
    let mut c = [[0.0; 4]; 4];
    c[0][0] = 1.0;
    c[0][1] = eta * cos2t;
    c[1][0] = eta * cos2t;
    c[1][1] = params.big_c;
    c[2][2] = mu * sin2t * cosp;
    c[3][3] = -mu * sin2t * cosp;
    c[2][3] = mu * eta * sin2t * sinp;
    c[3][2] = mu * eta * sin2t * sinp;
    Ok(c.map(|row| row.map(|x| x / 4.0)))
}

/// `Σ c[i][j] σi ⊗ σj`.
pub fn operator_from_pauli_coefficients(coeffs: &[[f64; 4]; 4]) -> Operator {
    let mut out = Operator::zero();
    for (i, row) in PauliIndex::ALL.iter().zip(coeffs.iter()) {
        for (j, &w) in PauliIndex::ALL.iter().zip(row.iter()) {
            if w != 0.0 {
                out = out + pauli_product(*i, *j).scale(w);
            }
        }
    }
    out
}

/// The eigenvalue spread `Δ`.
pub fn spread(params: &SymmetricParams, state: &AnsatzState) -> f64 {
    let (eta, mu) = (params.eta, params.mu);
    let (sin2t, cos2t) = (2.0 * state.theta).sin_cos();
    let (sinp, cosp) = state.phi.sin_cos();
    (eta * eta * cos2t * cos2t + mu * mu * sin2t * sin2t * (cosp * cosp + eta * eta * sinp * sinp)).sqrt()
}

pub fn output_eigenvalues(params: &SymmetricParams, state: &AnsatzState) -> Result<Spectrum> {
    require_computed_branch(state)?;
    let delta = spread(params, state);
    let c = params.big_c;
    let low = (1.0 - c) / 4.0;
    let mid = (1.0 + c) / 4.0;
    Ok(Spectrum::sorted([mid + delta / 2.0, mid - delta / 2.0, low, low]))
}

fn entropy_of(params: &SymmetricParams, state: &AnsatzState) -> f64 {
    output_eigenvalues(params, state)
        .and_then(|s| s.entropy_bits())
        .expect("closed-form spectrum is a probability vector")
}

pub fn optimal_input(params: &SymmetricParams) -> OptimalInputReport {
    let abs_eta = params.eta.abs();
    let regime = if (params.mu - abs_eta).abs() <= BOUNDARY_TOLERANCE {
        Regime::Boundary
    } else if params.mu > abs_eta {
        Regime::Entangled
    } else {
        Regime::Product
    };
    let state = match regime {
        Regime::Product => AnsatzState::product(),
        Regime::Entangled | Regime::Boundary => AnsatzState::bell(),
    };
    let s_min = entropy_of(params, &state);
    OptimalInputReport { state, s_min, capacity: 2.0 - s_min, regime }
}

/// Memory threshold `|4p - 1|` above which the Bell input is optimal.
pub fn threshold(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 0.5, "[0, 1/2]")?;
    Ok((4.0 * p - 1.0).abs())
}

/// Two-qubit capacity in bits (per two channel uses).
pub fn capacity_symmetric(p: f64, mu: f64) -> Result<f64> {
    Ok(optimal_input(&SymmetricParams::new(p, mu)?).capacity)
}
