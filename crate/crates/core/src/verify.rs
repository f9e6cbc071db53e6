//! Cross-module self-check run by `paulicap verify`.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{capacity_symmetric, output_eigenvalues, threshold, AnsatzBranch, AnsatzState, SymmetricParams};
use crate::capacity::two_qubit_capacity;
use crate::channel::{
    apply, covariance_residual, ensemble_average_output, kraus_operators, preset_depolarizing, preset_symmetric,
    symmetrize, ChannelSpec, DensityMatrix,
};
use crate::error::Result;
use crate::pauli::{pauli_matrix, Mat2, Operator, PauliIndex};
use crate::sampling::{random_channel_spec, random_density_matrix, random_probabilities};
use crate::search::{minimize_output_entropy, mixed_state_dominance_check, SearchConfig};
use crate::spectral::hermitian_eigenvalues;
use crate::sweep::{linear_grid, numeric_threshold, ChannelChoice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDensity {
    Low,
    High,
}

struct Sizes {
    random_pairs: usize,
    eigen_grid: (usize, usize, usize, usize),
    moe_grid: usize,
    saturation_specs: usize,
    memory_limit_specs: usize,
}

impl GridDensity {
    fn sizes(self) -> Sizes {
        match self {
            GridDensity::Low => Sizes {
                random_pairs: 100,
                eigen_grid: (10, 10, 6, 4),
                moe_grid: 4,
                saturation_specs: 10,
                memory_limit_specs: 5,
            },
            GridDensity::High => Sizes {
                random_pairs: 100,
                eigen_grid: (20, 20, 12, 8),
                moe_grid: 15,
                saturation_specs: 100,
                memory_limit_specs: 20,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {:<28} residual={:.3e} tol={:.1e}\n", c.name, c.residual, c.tolerance));
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c]))
}

fn pauli_residual() -> f64 {
    let mut worst = 0.0f64;
    let id = pauli_matrix(PauliIndex::ALL[0]);
    for i in PauliIndex::ALL {
        let s = pauli_matrix(i);
        let sq = mat2_mul(&s, &s);
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((sq[r][c] - id[r][c]).norm());
            }
        }
        for j in PauliIndex::ALL {
            if i.value() == 0 || j.value() == 0 || i == j {
                continue;
            }
            let t = pauli_matrix(j);
            let (st, ts) = (mat2_mul(&s, &t), mat2_mul(&t, &s));
            for r in 0..2 {
                for c in 0..2 {
                    worst = worst.max((st[r][c] + ts[r][c]).norm());
                }
            }
        }
    }
    worst
}

fn random_pairs(n: usize, rng: &mut ChaCha8Rng) -> Vec<(ChannelSpec, DensityMatrix)> {
    (0..n).map(|_| (random_channel_spec(rng), random_density_matrix(rng))).collect()
}

fn eigen_grid_residual(grid: (usize, usize, usize, usize)) -> Result<f64> {
    let (np, nm, nt, nf) = grid;
    let ps = linear_grid(0.0, 0.5, np)?;
    let mus = linear_grid(0.0, 1.0, nm)?;
    let thetas = linear_grid(0.0, FRAC_PI_2, nt)?;
    let phis: Vec<f64> = (0..nf).map(|k| TAU * k as f64 / nf as f64).collect();
    let per_p: Vec<Result<f64>> = ps
        .par_iter()
        .map(|&p| {
            let mut worst = 0.0f64;
            for &mu in &mus {
                let params = SymmetricParams::new(p, mu)?;
                let spec = preset_symmetric(p, mu)?;
                for &theta in &thetas {
                    for &phi in &phis {
                        let st = AnsatzState::new(theta, phi, AnsatzBranch::ZeroZeroOneOne)?;
                        let formula = output_eigenvalues(&params, &st)?;
                        let dense =
                            hermitian_eigenvalues(apply(&spec, &DensityMatrix::from_pure(&st.to_pure_state())).operator())?;
                        worst = worst.max(formula.max_abs_diff(&dense));
                    }
                }
            }
            Ok(worst)
        })
        .collect();
    per_p.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

pub fn run_verify(density: GridDensity, seed: u64) -> Result<VerifyReport> {
    let sizes = density.sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SearchConfig::default().with_seed(seed);
    let mut checks = Vec::new();

    checks.push(Check { name: "pauli_involution_anticommute", residual: pauli_residual(), tolerance: 1e-12 });

    let pairs = random_pairs(sizes.random_pairs, &mut rng);
    let completeness = pairs
        .iter()
        .map(|(spec, _)| {
            kraus_operators(spec)
                .iter()
                .fold(Operator::zero(), |acc, k| acc + k.adjoint() * *k)
                .max_abs_diff(&Operator::identity())
        })
        .fold(0.0, f64::max);
    checks.push(Check { name: "kraus_completeness", residual: completeness, tolerance: 1e-12 });

    let mut trace_herm = 0.0f64;
    for (spec, rho) in &pairs {
        let out = apply(spec, rho);
        trace_herm = trace_herm
            .max((out.operator().trace().re - 1.0).abs())
            .max(out.operator().trace().im.abs())
            .max(out.operator().hermiticity_residual());
    }
    checks.push(Check { name: "trace_and_hermiticity", residual: trace_herm, tolerance: 1e-12 });

    let mut covariance = 0.0f64;
    for (spec, rho) in &pairs {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                covariance = covariance.max(covariance_residual(spec, rho, i, j));
            }
        }
    }
    checks.push(Check { name: "pauli_covariance", residual: covariance, tolerance: 1e-10 });

    let quarter = Operator::identity().scale(0.25);
    let averaging = pairs
        .iter()
        .map(|(spec, rho)| ensemble_average_output(spec, rho).operator().max_abs_diff(&quarter))
        .fold(0.0, f64::max);
    checks.push(Check { name: "twirl_maximally_mixed", residual: averaging, tolerance: 1e-12 });

    let mut absorption = 0.0f64;
    for (_, rho) in &pairs {
        let spec = preset_symmetric(rand::Rng::gen_range(&mut rng, 0.0..=0.5), rand::Rng::gen_range(&mut rng, 0.0..=1.0))?;
        absorption = absorption.max(apply(&spec, &symmetrize(rho)).operator().max_abs_diff(apply(&spec, rho).operator()));
    }
    checks.push(Check { name: "symmetric_class_absorbs_F", residual: absorption, tolerance: 1e-12 });

    checks.push(Check {
        name: "eigenvalue_formula_grid",
        residual: eigen_grid_residual(sizes.eigen_grid)?,
        tolerance: 1e-9,
    });

    let n = sizes.moe_grid;
    let moe_points: Vec<(f64, f64)> = linear_grid(0.0, 0.5, n)?
        .into_iter()
        .flat_map(|p| linear_grid(0.0, 1.0, n).unwrap().into_iter().map(move |mu| (p, mu)))
        .collect();
    let mut moe = 0.0f64;
    for (p, mu) in moe_points {
        let found = minimize_output_entropy(&preset_symmetric(p, mu)?, &config)?;
        moe = moe.max((found.entropy_bits - (2.0 - capacity_symmetric(p, mu)?)).abs());
    }
    checks.push(Check { name: "analytic_vs_search_entropy", residual: moe, tolerance: 1e-6 });

    let mut gap = 0.0f64;
    for k in 0..sizes.saturation_specs {
        let spec = random_channel_spec(&mut rng);
        let r = two_qubit_capacity(&spec, &config.with_seed(seed.wrapping_add(k as u64)))?;
        gap = gap.max(r.saturation_gap);
    }
    checks.push(Check { name: "holevo_saturation_gap", residual: gap, tolerance: 1e-8 });

    let mut limit = 0.0f64;
    for _ in 0..sizes.memory_limit_specs {
        let spec = ChannelSpec::new(random_probabilities_summing(&mut rng), 1.0)?;
        limit = limit.max((two_qubit_capacity(&spec, &config)?.chi_bits - 2.0).abs());
    }
    checks.push(Check { name: "perfect_memory_capacity_2", residual: limit, tolerance: 1e-9 });

    let mut thresholds = 0.0f64;
    for p in [0.30, 0.35, 0.40, 0.45] {
        let numeric = numeric_threshold(&ChannelChoice::Symmetric { p })?.unwrap_or(f64::INFINITY);
        thresholds = thresholds.max((numeric - threshold(p)?).abs());
    }
    checks.push(Check { name: "threshold_bisection", residual: thresholds, tolerance: 1e-4 });

    let dominated = mixed_state_dominance_check(&preset_symmetric(0.3, 0.5)?, 200, seed)?
        && mixed_state_dominance_check(&preset_depolarizing(0.7, 0.5)?, 200, seed)?;
    checks.push(Check {
        name: "mixed_inputs_dominated",
        residual: if dominated { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });

    Ok(VerifyReport { checks })
}

fn random_probabilities_summing(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let mut q = random_probabilities(rng);
    q[0] = 1.0 - q[1] - q[2] - q[3];
    q
}
