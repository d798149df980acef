//! Pointwise 3D micropolar law. Tensors are stored row-major, entry (j, i) holding the
//! component written σ_ji, so σ_ji n_j is the traction on a face with normal n.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::material::{reciprocal_constants, MaterialParams, ReciprocalParams};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Strain3D {
    pub gamma: Matrix3<f64>,
    pub chi: Matrix3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Stress3D {
    pub sigma: Matrix3<f64>,
    pub mu_c: Matrix3<f64>,
}

/// (a+b)·x + (a−b)·xᵀ + c·tr(x)·𝟙, the common shape of all four isotropic maps.
fn isotropic(x: &Matrix3<f64>, a: f64, b: f64, c: f64) -> Matrix3<f64> {
    x * (a + b) + x.transpose() * (a - b) + Matrix3::identity() * (c * x.trace())
}

pub fn stress_from_strain_3d(s: &Strain3D, p: &MaterialParams) -> Stress3D {
    Stress3D {
        sigma: isotropic(&s.gamma, p.mu, p.alpha, p.lambda),
        mu_c: isotropic(&s.chi, p.gamma, p.epsilon, p.beta),
    }
}

pub fn strain_from_stress_3d(t: &Stress3D, r: &ReciprocalParams) -> Strain3D {
    Strain3D {
        gamma: isotropic(&t.sigma, r.mu_p, r.alpha_p, r.lambda_p),
        chi: isotropic(&t.mu_c, r.gamma_p, r.epsilon_p, r.beta_p),
    }
}

fn quadratic(x: &Matrix3<f64>, a: f64, b: f64, c: f64) -> f64 {
    let tr = x.trace();
    0.5 * ((a + b) * x.dot(x) + (a - b) * x.dot(&x.transpose()) + c * tr * tr)
}

/// Strain energy W(γ, χ).
pub fn strain_energy_3d(s: &Strain3D, p: &MaterialParams) -> f64 {
    quadratic(&s.gamma, p.mu, p.alpha, p.lambda) + quadratic(&s.chi, p.gamma, p.epsilon, p.beta)
}

/// Stress energy Φ(σ, μ).
pub fn stress_energy_3d(t: &Stress3D, r: &ReciprocalParams) -> f64 {
    quadratic(&t.sigma, r.mu_p, r.alpha_p, r.lambda_p)
        + quadratic(&t.mu_c, r.gamma_p, r.epsilon_p, r.beta_p)
}

/// σ·γ + μ·χ with the double contraction Σ a_ij b_ij.
pub fn work_3d(t: &Stress3D, s: &Strain3D) -> f64 {
    t.sigma.dot(&s.gamma) + t.mu_c.dot(&s.chi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDensities {
    pub w: f64,
    pub phi: f64,
    pub internal_work: f64,
}

/// W on the strain, Φ on the stress it produces, and the internal work σ·γ + μ·χ (= 2W).
pub fn energy_densities_3d(s: &Strain3D, p: &MaterialParams) -> Result<EnergyDensities> {
    let r = reciprocal_constants(p)?;
    let t = stress_from_strain_3d(s, p);
    Ok(EnergyDensities {
        w: strain_energy_3d(s, p),
        phi: stress_energy_3d(&t, &r),
        internal_work: work_3d(&t, s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> MaterialParams {
        MaterialParams {
            lambda: 1.0,
            mu: 1.0,
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            epsilon: 1.0,
            rho: 1.0,
            j: [1.0; 3],
        }
    }

    /// Element-by-element assembly of the 9×9 map on row-major flattened tensors.
    fn matrix_form(a: f64, b: f64, c: f64) -> SMatrix<f64, 9, 9> {
        let mut m = SMatrix::<f64, 9, 9>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let row = 3 * i + j;
                m[(row, 3 * i + j)] += a + b;
                m[(row, 3 * j + i)] += a - b;
                if i == j {
                    for k in 0..3 {
                        m[(row, 4 * k)] += c;
                    }
                }
            }
        }
        m
    }

    fn flatten(x: &Matrix3<f64>) -> SMatrix<f64, 9, 1> {
        SMatrix::<f64, 9, 1>::from_fn(|k, _| x[(k / 3, k % 3)])
    }

    fn random_tensor(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
        Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn zero_in_zero_out() {
        let t = stress_from_strain_3d(&Strain3D::default(), &unit());
        assert_eq!(t, Stress3D::default());
    }

    #[test]
    fn identity_strain_is_pure_pressure() {
        let s = Strain3D { gamma: Matrix3::identity(), chi: Matrix3::zeros() };
        for alpha in [0.1, 1.0, 7.0] {
            let t = stress_from_strain_3d(&s, &unit().with_alpha(alpha));
            assert!((t.sigma - Matrix3::identity() * 5.0).abs().max() < 1e-14);
        }
    }

    #[test]
    fn identity_stress_compliance() {
        let r = reciprocal_constants(&unit()).unwrap();
        let t = Stress3D { sigma: Matrix3::identity(), mu_c: Matrix3::zeros() };
        let s = strain_from_stress_3d(&t, &r);
        assert!((s.gamma - Matrix3::identity() * 0.2).abs().max() < 1e-15);
    }

    #[test]
    fn agrees_with_matrix_assembly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = unit();
        let ms = matrix_form(p.mu, p.alpha, p.lambda);
        let mc = matrix_form(p.gamma, p.epsilon, p.beta);
        for _ in 0..50 {
            let s = Strain3D { gamma: random_tensor(&mut rng), chi: random_tensor(&mut rng) };
            let t = stress_from_strain_3d(&s, &p);
            assert!((flatten(&t.sigma) - ms * flatten(&s.gamma)).abs().max() < 1e-14);
            assert!((flatten(&t.mu_c) - mc * flatten(&s.chi)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_law_is_numeric_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let p = MaterialParams {
                lambda: rng.gen_range(-0.5..3.0),
                mu: rng.gen_range(0.5..3.0),
                alpha: rng.gen_range(0.1..3.0),
                beta: rng.gen_range(-0.3..3.0),
                gamma: rng.gen_range(0.5..3.0),
                epsilon: rng.gen_range(0.1..3.0),
                rho: 1.0,
                j: [1.0; 3],
            };
            let r = reciprocal_constants(&p).unwrap();
            let inv = matrix_form(p.mu, p.alpha, p.lambda).try_inverse().unwrap();
            let printed = matrix_form(r.mu_p, r.alpha_p, r.lambda_p);
            assert!((inv - printed).abs().max() < 1e-12 * inv.abs().max());
            let inv = matrix_form(p.gamma, p.epsilon, p.beta).try_inverse().unwrap();
            let printed = matrix_form(r.gamma_p, r.epsilon_p, r.beta_p);
            assert!((inv - printed).abs().max() < 1e-12 * inv.abs().max());
        }
    }

    #[test]
    fn energies_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = MaterialParams { lambda: 2.0, alpha: 0.3, beta: 0.7, epsilon: 0.4, ..unit() };
        let s = Strain3D { gamma: random_tensor(&mut rng), chi: random_tensor(&mut rng) };
        let e = energy_densities_3d(&s, &p).unwrap();
        assert!(e.w > 0.0);
        assert!((e.w - e.phi).abs() < 1e-13 * e.w);
        assert!((e.internal_work - 2.0 * e.w).abs() < 1e-13 * e.w);
        let z = energy_densities_3d(&Strain3D::default(), &p).unwrap();
        assert_eq!((z.w, z.phi, z.internal_work), (0.0, 0.0, 0.0));
    }
}
