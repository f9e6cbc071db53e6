//! Random states and channels for property checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channel::{ChannelSpec, DensityMatrix};
use crate::pauli::{Operator, PureState};

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Haar-distributed pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        if let Ok(s) = PureState::normalized(gaussian_vector(rng)) {
            return s;
        }
    }
}

/// Orthonormal basis from Gram-Schmidt on Gaussian vectors.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(rng: &mut R) -> [PureState; 4] {
    let mut basis: Vec<[Complex64; 4]> = Vec::with_capacity(4);
    while basis.len() < 4 {
        let mut v = gaussian_vector(rng);
        for b in &basis {
            let overlap: Complex64 = (0..4).map(|k| b[k].conj() * v[k]).sum();
            for k in 0..4 {
                v[k] -= overlap * b[k];
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.map(|a| a / norm));
        }
    }
    std::array::from_fn(|k| PureState::normalized(basis[k]).expect("nonzero"))
}

/// Uniform point on the probability simplex.
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let w: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let total: f64 = w.iter().sum();
    w.map(|x| x / total)
}

/// A full-rank mixed state together with its eigen-decomposition.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R) -> (DensityMatrix, [f64; 4], [PureState; 4]) {
    let basis = random_orthonormal_basis(rng);
    let weights = random_probabilities(rng);
    let op = basis
        .iter()
        .zip(weights.iter())
        .fold(Operator::zero(), |acc, (v, w)| acc + Operator::projector(v).scale(*w));
    let rho = DensityMatrix::new(op).expect("convex mixture of projectors");
    (rho, weights, basis)
}

pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    random_mixed_state(rng).0
}

/// Arbitrary Pauli weights and memory, uniform on simplex × `[0, 1]`.
pub fn random_channel_spec<R: Rng + ?Sized>(rng: &mut R) -> ChannelSpec {
    let mut q = random_probabilities(rng);
    // Absorb roundoff so the weights sum to 1 within the spec tolerance.
    q[0] = 1.0 - q[1] - q[2] - q[3];
    ChannelSpec::new(q, rng.gen_range(0.0..=1.0)).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = random_orthonormal_basis(&mut rng);
        for i in 0..4 {
            for j in 0..4 {
                let ip: Complex64 = (0..4).map(|k| b[i].amplitudes()[k].conj() * b[j].amplitudes()[k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn random_specs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let s = random_channel_spec(&mut rng);
            assert!((s.q().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
