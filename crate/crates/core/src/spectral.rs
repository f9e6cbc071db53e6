//! Eigenvalues of 4×4 Hermitian matrices and entropies in bits.

use num_complex::Complex64;

use crate::channel::DensityMatrix;
use crate::error::{Error, Result};
use crate::pauli::Operator;

const HERMITIAN_TOLERANCE: f64 = 1e-10;
const OFF_DIAGONAL_STOP: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;
const NEGATIVE_DUST: f64 = 1e-9;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum(pub [f64; 4]);

impl Spectrum {
    pub fn sorted(mut values: [f64; 4]) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum(values)
    }

    pub fn values(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn entropy_bits(&self) -> Result<f64> {
        shannon_entropy_bits(&self.0)
    }
}

/// Cyclic complex Jacobi sweeps over the upper triangle.
///
/// Stops when the off-diagonal Frobenius norm drops below
/// `1e-14 · max(1, ‖M‖_F)` or after 100 sweeps.
pub fn hermitian_eigenvalues(m: &Operator) -> Result<Spectrum> {
    let residual = m.hermiticity_residual();
    if !m.is_finite() || residual > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(residual));
    }
    let mut a = m.0;
    let stop = OFF_DIAGONAL_STOP * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < stop {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                rotate(&mut a, p, q);
            }
        }
    }
    Ok(Spectrum::sorted(std::array::from_fn(|k| a[k][k].re)))
}

fn off_diagonal_norm(a: &[[Complex64; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            if r != c {
                s += a[r][c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A ← U† A U` with `U` chosen to annihilate `a[p][q]`.
///
/// `U = D·R`, where `D` strips the phase of `a[p][q]` from column `q` and
/// `R` is the real plane rotation for the resulting real 2×2 pivot block.
fn rotate(a: &mut [[Complex64; 4]; 4], p: usize, q: usize) {
    let g = a[p][q];
    let mag = g.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = g / mag;
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u_pp + y * u_qp;
        row[q] = x * u_pq + y * u_qq;
    }
    for col in 0..4 {
        let (x, y) = (a[p][col], a[q][col]);
        a[p][col] = u_pp.conj() * x + u_qp.conj() * y;
        a[q][col] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;
}

/// `-Σ p log2 p` with `0 log 0 = 0`; entries in `[-1e-9, 0)` are clamped to zero.
pub fn shannon_entropy_bits(p: &[f64]) -> Result<f64> {
    let total: f64 = p.iter().sum();
    if !total.is_finite() || (total - 1.0).abs() > NEGATIVE_DUST {
        return Err(Error::InvalidProbabilities(format!("sum {total} differs from 1")));
    }
    if let Some(bad) = p.iter().find(|&&x| x < -NEGATIVE_DUST) {
        return Err(Error::InvalidProbabilities(format!("negative weight {bad}")));
    }
    Ok(p.iter()
        .map(|&x| if x > 0.0 { -x * x.log2() } else { 0.0 })
        .sum::<f64>()
        .max(0.0))
}

pub fn von_neumann_entropy_bits(rho: &DensityMatrix) -> Result<f64> {
    hermitian_eigenvalues(rho.operator())?.entropy_bits()
}
