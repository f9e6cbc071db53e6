//! Pauli matrices, two-qubit operators and pure states.
//!
//! Index convention: `σ0 = I`, `σ1 = diag(1, -1)`, `σ2` is the real
//! off-diagonal flip and `σ3 = [[0, -i], [i, 0]]`. So `σ1` is the diagonal
//! one and the computational basis `|00>, |01>, |10>, |11>` is the
//! eigenbasis of `σ1 ⊗ σ1`. This differs from the usual x, y, z order.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used by [`Operator::approx_eq`].
pub const OPERATOR_TOLERANCE: f64 = 1e-12;
const UNITARY_TOLERANCE: f64 = 1e-10;
const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const ALL: [PauliIndex; 4] = [PauliIndex(0), PauliIndex(1), PauliIndex(2), PauliIndex(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 4 {
            Ok(PauliIndex(value))
        } else {
            Err(Error::OutOfRange {
                name: "pauli index",
                value: f64::from(value),
                range: "{0,1,2,3}",
            })
        }
    }

    pub fn value(self) -> usize {
        usize::from(self.0)
    }
}

pub fn pauli_matrix(i: PauliIndex) -> Mat2 {
    match i.0 {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ONE, ZERO], [ZERO, -ONE]],
        2 => [[ZERO, ONE], [ONE, ZERO]],
        _ => [[ZERO, -I], [I, ZERO]],
    }
}

/// Kronecker product `a ⊗ b`, with `entry[2r+s][2c+t] = a[r][c] * b[s][t]`.
pub fn tensor(a: &Mat2, b: &Mat2) -> Operator {
    let mut m = [[ZERO; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    m[2 * r + s][2 * c + t] = a[r][c] * b[s][t];
                }
            }
        }
    }
    Operator(m)
}

/// `σi ⊗ σj`.
pub fn pauli_product(i: PauliIndex, j: PauliIndex) -> Operator {
    tensor(&pauli_matrix(i), &pauli_matrix(j))
}

/// All sixteen `σi ⊗ σj`, ordered by `4*i + j`.
pub fn pauli_products() -> [Operator; 16] {
    std::array::from_fn(|k| pauli_product(PauliIndex((k / 4) as u8), PauliIndex((k % 4) as u8)))
}

/// `U ρ U†`, rejecting `U` that is not unitary within 1e-10.
pub fn conjugate(u: &Operator, rho: &Operator) -> Result<Operator> {
    let residual = (*u * u.adjoint()).max_abs_diff(&Operator::identity());
    if residual > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary(residual));
    }
    Ok(u.conjugate_unchecked(rho))
}

/// A 4×4 complex matrix acting on two qubits.
#[derive(Clone, Copy, PartialEq)]
pub struct Operator(pub [[Complex64; 4]; 4]);

impl Operator {
    pub fn zero() -> Self {
        Operator([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = ONE;
        }
        Operator(m)
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for k in 0..4 {
            m[k][k] = Complex64::new(d[k], 0.0);
        }
        Operator(m)
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        Operator(rows.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    /// `|ψ><ψ|`.
    pub fn projector(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        Operator(std::array::from_fn(|r| std::array::from_fn(|c| a[r] * a[c].conj())))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn adjoint(&self) -> Self {
        Operator(std::array::from_fn(|r| std::array::from_fn(|c| self.0[c][r].conj())))
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Operator(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|r| (0..4).map(|c| self.0[r][c] * v[c]).sum())
    }

    /// `self · ρ · self†` without a unitarity check.
    pub fn conjugate_unchecked(&self, rho: &Operator) -> Operator {
        *self * *rho * self.adjoint()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Operator) -> bool {
        self.max_abs_diff(other) <= OPERATOR_TOLERANCE
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c] + rhs.0[r][c])))
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c] - rhs.0[r][c])))
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for k in 0..4 {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..4 {
                    m[r][c] += a * rhs.0[k][c];
                }
            }
        }
        Operator(m)
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator[")?;
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Normalized two-qubit state vector in the `|00>, |01>, |10>, |11>` basis.
///
/// The global phase is left alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState([Complex64; 4]);

impl PureState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(PureState(amplitudes))
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(PureState(amplitudes.map(|a| a / norm)))
    }

    pub fn basis(k: usize) -> Self {
        let mut a = [ZERO; 4];
        a[k] = ONE;
        PureState(a)
    }

    /// `(|00> + |11>)/√2`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState([Complex64::new(h, 0.0), ZERO, ZERO, Complex64::new(h, 0.0)])
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `U|ψ>` for a unitary `U`, renormalized against roundoff.
    pub fn transformed(&self, u: &Operator) -> Result<Self> {
        PureState::normalized(u.apply(&self.0))
    }

    /// Squared Schmidt coefficients, descending.
    pub fn schmidt_weights(&self) -> [f64; 2] {
        // For the 2x2 coefficient matrix M, the weights are the eigenvalues of M M†.
        let a = &self.0;
        let det = a[0] * a[3] - a[1] * a[2];
        let disc = (1.0 - 4.0 * det.norm_sqr()).max(0.0).sqrt();
        [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u8) -> PauliIndex {
        PauliIndex::new(i).unwrap()
    }

    fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
        std::array::from_fn(|r| std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c]))
    }

    #[test]
    fn matrices_follow_convention() {
        assert_eq!(pauli_matrix(p(0)), [[ONE, ZERO], [ZERO, ONE]]);
        assert_eq!(pauli_matrix(p(1)), [[ONE, ZERO], [ZERO, -ONE]]);
        assert_eq!(pauli_matrix(p(2)), [[ZERO, ONE], [ONE, ZERO]]);
        assert_eq!(pauli_matrix(p(3)), [[ZERO, -I], [I, ZERO]]);
        assert!(PauliIndex::new(4).is_err());
    }

    #[test]
    fn involution_and_anticommutation() {
        for i in PauliIndex::ALL {
            let s = pauli_matrix(i);
            assert_eq!(mat2_mul(&s, &s), pauli_matrix(p(0)));
        }
        for i in 1..4 {
            for j in 1..4 {
                if i == j {
                    continue;
                }
                let (a, b) = (pauli_matrix(p(i)), pauli_matrix(p(j)));
                let ab = mat2_mul(&a, &b);
                let ba = mat2_mul(&b, &a);
                for r in 0..2 {
                    for c in 0..2 {
                        assert!((ab[r][c] + ba[r][c]).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(pauli_product(p(0), p(0)), Operator::identity());
        assert_eq!(pauli_product(p(1), p(1)), Operator::diagonal([1.0, -1.0, -1.0, 1.0]));
        let swap_blocks = Operator::from_real([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(pauli_product(p(2), p(0)), swap_blocks);
    }

    #[test]
    fn tensor_is_bilinear() {
        let a = pauli_matrix(p(2));
        let b = pauli_matrix(p(3));
        let c = pauli_matrix(p(1));
        let k = Complex64::new(0.3, -1.2);
        let a_plus_kc: Mat2 = std::array::from_fn(|r| std::array::from_fn(|s| a[r][s] + k * c[r][s]));
        let lhs = tensor(&a_plus_kc, &b);
        let kc_b = tensor(&c, &b);
        let rhs = tensor(&a, &b) + Operator(kc_b.0.map(|row| row.map(|x| x * k)));
        assert!(lhs.approx_eq(&rhs));
    }

    #[test]
    fn conjugation_examples() {
        let rho = Operator::projector(&PureState::basis(0));
        assert_eq!(conjugate(&Operator::identity(), &rho).unwrap(), rho);
        assert!(conjugate(&pauli_product(p(1), p(1)), &rho).unwrap().approx_eq(&rho));
        let flipped = conjugate(&pauli_product(p(2), p(0)), &rho).unwrap();
        assert!(flipped.approx_eq(&Operator::projector(&PureState::basis(2))));
    }

    #[test]
    fn conjugation_rejects_non_unitary() {
        let u = Operator::identity().scale(1.01);
        assert!(matches!(conjugate(&u, &Operator::identity()), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn conjugation_preserves_trace_and_hermiticity() {
        let rho = Operator::from_real([
            [0.4, 0.1, 0.0, 0.2],
            [0.1, 0.3, 0.05, 0.0],
            [0.0, 0.05, 0.2, 0.0],
            [0.2, 0.0, 0.0, 0.1],
        ]);
        for u in pauli_products() {
            let out = conjugate(&u, &rho).unwrap();
            assert!((out.trace() - rho.trace()).norm() < 1e-12);
            assert!(out.hermiticity_residual() < 1e-12);
        }
    }

    #[test]
    fn pure_state_validation_and_schmidt() {
        assert!(PureState::new([ONE, ONE, ZERO, ZERO]).is_err());
        let w = PureState::bell().schmidt_weights();
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
        assert_eq!(PureState::basis(3).schmidt_weights(), [1.0, 0.0]);
    }
}
