//! The two-qubit Pauli channel with memory.
//!
//! Two consecutive uses of the single-qubit channel `ρ → Σ q_i σi ρ σi`,
//! where with probability `mu` the second use repeats the first use's Pauli:
//!
//! ```text
//! p_ij = (1 - mu) q_i q_j + mu q_i δ_ij
//! ρ → Σ_ij p_ij (σi ⊗ σj) ρ (σi ⊗ σj)
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::pauli::{pauli_matrix, pauli_product, pauli_products, Mat2, Operator, PauliIndex, PureState};
use crate::spectral::hermitian_eigenvalues;

const WEIGHT_TOLERANCE: f64 = 1e-12;
const DENSITY_TOLERANCE: f64 = 1e-10;
const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Single-use Pauli weights plus the memory parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSpec {
    q: [f64; 4],
    mu: f64,
}

impl ChannelSpec {
    pub fn new(q: [f64; 4], mu: f64) -> Result<Self> {
        if q.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidChannel(format!("weights {q:?} must be non-negative")));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidChannel(format!("weights sum to {total}, not 1")));
        }
        check_range("mu", mu, 0.0, 1.0, "[0, 1]")?;
        Ok(ChannelSpec { q, mu })
    }

    pub fn identity() -> Self {
        ChannelSpec { q: [1.0, 0.0, 0.0, 0.0], mu: 0.0 }
    }

    pub fn q(&self) -> [f64; 4] {
        self.q
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `Some(p)` when `q0 = q1` and `q2 = q3` within 1e-12.
    pub fn symmetric_class(&self) -> Option<f64> {
        let [a, b, c, d] = self.q;
        ((a - b).abs() <= WEIGHT_TOLERANCE && (c - d).abs() <= WEIGHT_TOLERANCE).then_some(a)
    }
}

/// `q0 = q1 = p`, `q2 = q3 = (1 - 2p)/2`.
pub fn preset_symmetric(p: f64, mu: f64) -> Result<ChannelSpec> {
    check_range("p", p, 0.0, 0.5, "[0, 1/2]")?;
    let q = (1.0 - 2.0 * p) / 2.0;
    ChannelSpec::new([p, p, q, q], mu)
}

/// `q0 = x`, `q1 = q2 = q3 = (1 - x)/3`.
pub fn preset_depolarizing(x: f64, mu: f64) -> Result<ChannelSpec> {
    check_range("x", x, 0.0, 1.0, "[0, 1]")?;
    let r = (1.0 - x) / 3.0;
    ChannelSpec::new([x, r, r, r], mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution(pub [[f64; 4]; 4]);

impl JointDistribution {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn row_marginals(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.0[i].iter().sum())
    }

    pub fn column_marginals(&self) -> [f64; 4] {
        std::array::from_fn(|j| self.0.iter().map(|row| row[j]).sum())
    }
}

pub fn joint_distribution(spec: &ChannelSpec) -> JointDistribution {
    let (q, mu) = (spec.q, spec.mu);
    JointDistribution(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let memory = if i == j { mu * q[i] } else { 0.0 };
            (1.0 - mu) * q[i] * q[j] + memory
        })
    }))
}

/// Hermitian, unit-trace, positive semidefinite two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_residual();
        if !op.is_finite() || herm > DENSITY_TOLERANCE {
            return Err(Error::InvalidState(format!("hermiticity residual {herm:e}")));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let smallest = hermitian_eigenvalues(&op)?.0[3];
        if smallest < -POSITIVITY_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {smallest:e}")));
        }
        Ok(DensityMatrix(op))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix(Operator::projector(psi))
    }

    /// `I/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix(Operator::identity().scale(0.25))
    }

    /// Convex combination `Σ w_k ρ_k`; weights are taken as given.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let op = parts
            .iter()
            .fold(Operator::zero(), |acc, (w, rho)| acc + rho.0.scale(*w));
        DensityMatrix::new(op)
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    /// Trusted constructor for results of trace-preserving, positive maps.
    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        DensityMatrix(op)
    }
}

/// `σi ⊗ σj` for every pair, scaled by `√p_ij`, ordered by `4*i + j`.
pub fn kraus_operators(spec: &ChannelSpec) -> Vec<Operator> {
    let p = joint_distribution(spec);
    pauli_products()
        .iter()
        .enumerate()
        .map(|(k, s)| s.scale(p.0[k / 4][k % 4].sqrt()))
        .collect()
}

/// Applies the channel as the 16-term weighted Pauli sum.
pub fn apply(spec: &ChannelSpec, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix(apply_operator(spec, &rho.0))
}

/// The channel's linear action on an arbitrary operator.
pub fn apply_operator(spec: &ChannelSpec, rho: &Operator) -> Operator {
    let p = joint_distribution(spec);
    let mut out = Operator::zero();
    for (k, s) in pauli_products().iter().enumerate() {
        let w = p.0[k / 4][k % 4];
        if w == 0.0 {
            continue;
        }
        out = out + s.conjugate_unchecked(rho).scale(w);
    }
    out
}

/// Single-use channel `ρ → Σ q_i σi ρ σi` on one qubit.
pub fn apply_single_use(q: &[f64; 4], rho: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, &w) in PauliIndex::ALL.iter().zip(q.iter()) {
        let s = pauli_matrix(*i);
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        acc += s[r][a] * rho[a][b] * s[c][b].conj();
                    }
                }
                out[r][c] += acc * w;
            }
        }
    }
    out
}

/// `max |E(UρU†) - U E(ρ) U†|` with `U = σi ⊗ σj`.
pub fn covariance_residual(spec: &ChannelSpec, rho: &DensityMatrix, i: PauliIndex, j: PauliIndex) -> f64 {
    let u = pauli_product(i, j);
    let lhs = apply_operator(spec, &u.conjugate_unchecked(&rho.0));
    let rhs = u.conjugate_unchecked(&apply_operator(spec, &rho.0));
    lhs.max_abs_diff(&rhs)
}

/// Uniform twirl of the channel output over all sixteen Pauli products.
pub fn ensemble_average_output(spec: &ChannelSpec, rho: &DensityMatrix) -> DensityMatrix {
    let out = apply_operator(spec, &rho.0);
    let sum = pauli_products()
        .iter()
        .fold(Operator::zero(), |acc, s| acc + s.conjugate_unchecked(&out));
    DensityMatrix(sum.scale(1.0 / 16.0))
}

/// Averages over `{σ0⊗σ0, σ1⊗σ1}`: `½(ρ + (σ1⊗σ1) ρ (σ1⊗σ1))`.
///
/// The result only has the entries `(0,0) (0,3) (1,1) (1,2) (2,1) (2,2) (3,0) (3,3)`.
pub fn symmetrize(rho: &DensityMatrix) -> DensityMatrix {
    let zz = pauli_product(PauliIndex::ALL[1], PauliIndex::ALL[1]);
    DensityMatrix((rho.0 + zz.conjugate_unchecked(&rho.0)).scale(0.5))
}
