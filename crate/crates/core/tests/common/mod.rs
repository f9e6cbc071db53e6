#![allow(dead_code)]

use num_complex::Complex64;
use paulicap::pauli::Operator;

/// Coefficients of `det(λI - M) = λ⁴ + c1 λ³ + c2 λ² + c3 λ + c4` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(m: &Operator) -> [Complex64; 5] {
    let mut coeffs = [Complex64::new(0.0, 0.0); 5];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut mk = Operator::zero();
    for k in 1..=4 {
        // M_k = M (M_{k-1} + c_{k-1} I), c_k = -tr(M M_k)/k
        let shifted = mk + Operator::identity().scaled_complex(coeffs[k - 1]);
        mk = *m * shifted;
        coeffs[k] = -mk.trace() / k as f64;
    }
    coeffs
}

trait ScaleComplex {
    fn scaled_complex(&self, s: Complex64) -> Operator;
}

impl ScaleComplex for Operator {
    fn scaled_complex(&self, s: Complex64) -> Operator {
        Operator(self.0.map(|r| r.map(|x| x * s)))
    }
}

fn horner(c: &[Complex64; 5], z: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn horner_derivative(c: &[Complex64; 5], z: Complex64) -> Complex64 {
    (0..4).fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + c[k] * (4 - k) as f64)
}

/// Roots of the characteristic polynomial via Durand-Kerner, polished by Newton,
/// returned as real parts sorted descending.
pub fn quartic_root_eigenvalues(m: &Operator) -> [f64; 4] {
    let c = characteristic_polynomial(m);
    let seed = Complex64::new(0.4, 0.9);
    let scale = 1.0 + m.frobenius_norm();
    let mut z: [Complex64; 4] = std::array::from_fn(|k| seed.powu(k as u32) * scale);
    for _ in 0..500 {
        let prev = z;
        for i in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            z[i] -= horner(&c, z[i]) / denom;
        }
        if (0..4).all(|k| (z[k] - prev[k]).norm() < 1e-15 * scale) {
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..3 {
            let d = horner_derivative(&c, *root);
            if d.norm() > 1e-300 {
                *root -= horner(&c, *root) / d;
            }
        }
    }
    let mut re = z.map(|r| r.re);
    re.sort_by(|a, b| b.total_cmp(a));
    re
}
