//! Plate constitutive algebra: strain-displacement, stiffness and compliance forms,
//! stress energy, and the thickness profiles linking resultants to 3D stresses.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::cosserat3d::Stress3D;
use crate::error::{Error, Result};
use crate::material::{check_thickness, MaterialParams, TechnicalConstants};
use crate::plate_fields::{InertiaSet, KinematicsGradient, LoadSet, PlateKinematics, PlateStrain, PlateStress};

/// e_αβ = Ψ_β,α + ε₃αβΩ₃, ω_α = Ψ_α − ε₃αβΩ_β⁰, ω*_α = W,α + ε₃αβΩ_β⁰, τ₃α = Ω₃,α,
/// τ⁰_αβ = Ω⁰_β,α, υ_αβ = U_β,α + ε₃αβΩ₃⁰, τ⁰₃α = Ω₃⁰,α.
pub fn strain_from_kinematics(u: &PlateKinematics, grad: &KinematicsGradient) -> PlateStrain {
    let (d1, d2) = (&grad.d1, &grad.d2);
    PlateStrain {
        e11: d1.psi1,
        e12: d1.psi2 + u.omega3,
        e21: d2.psi1 - u.omega3,
        e22: d2.psi2,
        omega1: u.psi1 - u.omega2_0,
        omega2: u.psi2 + u.omega1_0,
        omega1_s: d1.w + u.omega2_0,
        omega2_s: d2.w - u.omega1_0,
        tau31: d1.omega3,
        tau32: d2.omega3,
        tau11_0: d1.omega1_0,
        tau12_0: d1.omega2_0,
        tau21_0: d2.omega1_0,
        tau22_0: d2.omega2_0,
        upsilon11: d1.u1,
        upsilon12: d1.u2 + u.omega3_0,
        upsilon21: d2.u1 - u.omega3_0,
        upsilon22: d2.u2,
        tau31_0: d1.omega3_0,
        tau32_0: d2.omega3_0,
    }
}

/// Coefficients of the stiffness (kinematic) form of the plate law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateStiffness {
    pub h: f64,
    pub nu: f64,
    /// flexural rigidity
    pub d: f64,
    /// pressure prestress in M_αα
    pub lp: f64,
    /// twisting moments: M₁₂ = at·e₁₂ + bt·e₂₁
    pub at: f64,
    pub bt: f64,
    /// shear: Q = sa·ω + sb·ω*, Q* = sa·ω* + sb·ω
    pub sa: f64,
    pub sb: f64,
    /// micropolar moments R_αα
    pub rd1: f64,
    pub rd2: f64,
    pub rt: f64,
    /// micropolar moments R₁₂, R₂₁
    pub ra: f64,
    pub rb: f64,
    /// S*_α = ks·Ω₃,α
    pub ks: f64,
    /// membrane: N_αα = ke(υ_αα + νυ_α'α') + ns·σ₀
    pub ke: f64,
    pub ns: f64,
    /// membrane shear: N₁₂ = na·υ₁₂ + nb·υ₂₁
    pub na: f64,
    pub nb: f64,
    /// M*_α = km·Ω₃⁰,α
    pub km: f64,
}

impl PlateStiffness {
    pub fn new(tc: &TechnicalConstants) -> Self {
        let h = tc.h;
        let g = tc.g;
        let n2 = tc.n_sq();
        let mu_plus = g / (1.0 - n2);
        let mu_minus = g * (1.0 - 2.0 * n2) / (1.0 - n2);
        let lt2 = tc.l_t * tc.l_t;
        let lb2 = tc.l_b * tc.l_b;
        let psi = tc.psi_polar;
        let k2 = tc.kappa2_sq;
        let ks = g * lt2 * (4.0 * lb2 - lt2) * h.powi(3) / (12.0 * lb2);
        Self {
            h,
            nu: tc.nu,
            d: tc.d,
            lp: tc.nu * h * h / (10.0 * (1.0 - tc.nu)),
            at: h.powi(3) / 12.0 * mu_plus,
            bt: h.powi(3) / 12.0 * mu_minus,
            sa: tc.kappa1_sq * h * mu_plus,
            sb: tc.kappa1_sq * h * mu_minus,
            rd1: k2 * g * h * lt2 * (2.0 - psi),
            rd2: k2 * g * h * lt2 * (1.0 - psi),
            rt: k2 * h * (1.0 - psi) / 2.0,
            ra: k2 * g * h * 2.0 * lb2,
            rb: k2 * g * h * (lt2 - 2.0 * lb2),
            ks,
            ke: tc.e * h / (1.0 - tc.nu * tc.nu),
            ns: h * tc.nu / (1.0 - tc.nu),
            na: h * mu_plus,
            nb: h * mu_minus,
            km: 12.0 * ks / (h * h),
        }
    }

    /// 𝒮 = C ℰ + load prestress.
    pub fn stress(&self, e: &PlateStrain, loads: &LoadSet) -> PlateStress {
        let mut s = self.elastic_stress(e);
        let pre = self.load_prestress(loads);
        s = s.add(&pre);
        s
    }

    /// 𝒮 = C ℰ, the load-free part.
    pub fn elastic_stress(&self, e: &PlateStrain) -> PlateStress {
        let nu = self.nu;
        PlateStress {
            m11: self.d * (e.e11 + nu * e.e22),
            m22: self.d * (e.e22 + nu * e.e11),
            m12: self.at * e.e12 + self.bt * e.e21,
            m21: self.at * e.e21 + self.bt * e.e12,
            q1: self.sa * e.omega1 + self.sb * e.omega1_s,
            q2: self.sa * e.omega2 + self.sb * e.omega2_s,
            q1_s: self.sa * e.omega1_s + self.sb * e.omega1,
            q2_s: self.sa * e.omega2_s + self.sb * e.omega2,
            s1_s: self.ks * e.tau31,
            s2_s: self.ks * e.tau32,
            r11: self.rd1 * e.tau11_0 + self.rd2 * e.tau22_0,
            r22: self.rd1 * e.tau22_0 + self.rd2 * e.tau11_0,
            r12: self.ra * e.tau12_0 + self.rb * e.tau21_0,
            r21: self.ra * e.tau21_0 + self.rb * e.tau12_0,
            n11: self.ke * (e.upsilon11 + nu * e.upsilon22),
            n22: self.ke * (e.upsilon22 + nu * e.upsilon11),
            n12: self.na * e.upsilon12 + self.nb * e.upsilon21,
            n21: self.na * e.upsilon21 + self.nb * e.upsilon12,
            m1_s: self.km * e.tau31_0,
            m2_s: self.km * e.tau32_0,
        }
    }

    /// Resultants produced by the loads alone (zero kinematics).
    pub fn load_prestress(&self, loads: &LoadSet) -> PlateStress {
        PlateStress {
            m11: self.lp * loads.p,
            m22: self.lp * loads.p,
            r11: self.rt * loads.t,
            r22: self.rt * loads.t,
            n11: self.ns * loads.sigma0,
            n22: self.ns * loads.sigma0,
            ..PlateStress::default()
        }
    }
}

pub fn stress_from_kinematics(
    u: &PlateKinematics,
    grad: &KinematicsGradient,
    tc: &TechnicalConstants,
    loads: &LoadSet,
) -> PlateStress {
    PlateStiffness::new(tc).stress(&strain_from_kinematics(u, grad), loads)
}

/// Coefficients of the plate stress energy Φ(𝒮), obtained by thickness integration of
/// the 3D stress energy over the assumed profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateCompliance {
    pub h: f64,
    n_dd: f64,
    n_12: f64,
    /// Paired components enter as sym·(x + y)² + anti·(x − y)²; the antisymmetric weight grows
    /// like 1/α and is kept apart so the finite part survives α → 0.
    n_pair: Pair,
    m_pair: Pair,
    q_pair: Pair,
    div_m: f64,
    r_dd: f64,
    r_12: f64,
    r_pair: Pair,
    s_sq: f64,
    div_sq: f64,
    sigma0_n: f64,
    sigma0_sq: f64,
    t_r: f64,
    t_sq: f64,
    v_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Pair {
    sym: f64,
    anti: f64,
}

impl Pair {
    fn energy(&self, x: f64, y: f64) -> f64 {
        self.sym * (x + y).powi(2) + self.anti * (x - y).powi(2)
    }

    fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, d) = (2.0 * self.sym * (x + y), 2.0 * self.anti * (x - y));
        (s + d, s - d)
    }
}

impl PlateCompliance {
    pub fn new(mp: &MaterialParams, h: f64) -> Result<Self> {
        mp.ensure_admissible()?;
        check_thickness(h)?;
        let MaterialParams { lambda: l, mu: m, alpha: a, beta: b, gamma: g, epsilon: e, .. } = *mp;
        let bulk = m * (3.0 * l + 2.0 * m);
        let cbulk = g * (3.0 * b + 2.0 * g);
        Ok(Self {
            h,
            n_dd: (l + m) / (2.0 * h * bulk),
            n_12: -l / (2.0 * h * bulk),
            n_pair: Pair { sym: 1.0 / (8.0 * h * m), anti: 1.0 / (8.0 * h * a) },
            m_pair: Pair { sym: 1.5 / (h.powi(3) * m), anti: 1.5 / (h.powi(3) * a) },
            q_pair: Pair { sym: 3.0 / (20.0 * h * m), anti: 3.0 / (20.0 * h * a) },
            div_m: 3.0 * l / (5.0 * h * bulk),
            r_dd: 3.0 * (b + g) / (5.0 * h * cbulk),
            r_12: -3.0 * b / (5.0 * h * cbulk),
            r_pair: Pair { sym: 3.0 / (20.0 * h * g), anti: 3.0 / (20.0 * h * e) },
            s_sq: (g + e) / (8.0 * h * g * e),
            div_sq: 17.0 * h * (l + m) / (280.0 * bulk),
            sigma0_n: -l / (2.0 * bulk),
            sigma0_sq: h * (l + m) / (2.0 * bulk),
            t_r: -b / (2.0 * cbulk),
            t_sq: h * (b + g) / (2.0 * cbulk),
            v_sq: h * (b + g) / (6.0 * cbulk),
        })
    }

    /// Φ(𝒮; loads, ∇·Q*).
    pub fn energy(&self, s: &PlateStress, loads: &LoadSet, div_qs: f64) -> f64 {
        let w = 12.0 / (self.h * self.h);
        self.n_dd * (s.n11 * s.n11 + s.n22 * s.n22 + w * (s.m11 * s.m11 + s.m22 * s.m22))
            + self.n_12 * (s.n11 * s.n22 + w * s.m11 * s.m22)
            + self.n_pair.energy(s.n12, s.n21)
            + self.m_pair.energy(s.m12, s.m21)
            + self.q_pair.energy(s.q1, s.q1_s)
            + self.q_pair.energy(s.q2, s.q2_s)
            + self.div_m * div_qs * (s.m11 + s.m22)
            + self.r_dd * (s.r11 * s.r11 + s.r22 * s.r22)
            + self.r_12 * s.r11 * s.r22
            + self.r_pair.energy(s.r12, s.r21)
            + self.s_sq * (s.m1_s * s.m1_s + s.m2_s * s.m2_s + w * (s.s1_s * s.s1_s + s.s2_s * s.s2_s))
            + self.div_sq * div_qs * div_qs
            + self.sigma0_n * (s.n11 + s.n22) * loads.sigma0
            + self.sigma0_sq * loads.sigma0 * loads.sigma0
            + self.t_r * (s.r11 + s.r22) * loads.t
            + self.t_sq * loads.t * loads.t
            + self.v_sq * loads.v * loads.v
    }

    /// ℰ = ∂Φ/∂𝒮.
    pub fn strain(&self, s: &PlateStress, loads: &LoadSet, div_qs: f64) -> PlateStrain {
        let w = 12.0 / (self.h * self.h);
        let (e12, e21) = self.m_pair.grad(s.m12, s.m21);
        let (omega1, omega1_s) = self.q_pair.grad(s.q1, s.q1_s);
        let (omega2, omega2_s) = self.q_pair.grad(s.q2, s.q2_s);
        let (tau12_0, tau21_0) = self.r_pair.grad(s.r12, s.r21);
        let (upsilon12, upsilon21) = self.n_pair.grad(s.n12, s.n21);
        PlateStrain {
            e11: w * (2.0 * self.n_dd * s.m11 + self.n_12 * s.m22) + self.div_m * div_qs,
            e22: w * (2.0 * self.n_dd * s.m22 + self.n_12 * s.m11) + self.div_m * div_qs,
            e12,
            e21,
            omega1,
            omega2,
            omega1_s,
            omega2_s,
            tau31: 2.0 * w * self.s_sq * s.s1_s,
            tau32: 2.0 * w * self.s_sq * s.s2_s,
            tau11_0: 2.0 * self.r_dd * s.r11 + self.r_12 * s.r22 + self.t_r * loads.t,
            tau22_0: 2.0 * self.r_dd * s.r22 + self.r_12 * s.r11 + self.t_r * loads.t,
            tau12_0,
            tau21_0,
            upsilon11: 2.0 * self.n_dd * s.n11 + self.n_12 * s.n22 + self.sigma0_n * loads.sigma0,
            upsilon22: 2.0 * self.n_dd * s.n22 + self.n_12 * s.n11 + self.sigma0_n * loads.sigma0,
            upsilon12,
            upsilon21,
            tau31_0: 2.0 * self.s_sq * s.m1_s,
            tau32_0: 2.0 * self.s_sq * s.m2_s,
        }
    }
}

/// Compliance form ℰ(𝒮). `div_qs` supplies Q*_β,β, which enters e_αα.
pub fn strain_from_stress(
    s: &PlateStress,
    mp: &MaterialParams,
    h: f64,
    loads: &LoadSet,
    div_qs: f64,
) -> Result<PlateStrain> {
    Ok(PlateCompliance::new(mp, h)?.strain(s, loads, div_qs))
}

pub fn plate_energy_density(
    s: &PlateStress,
    mp: &MaterialParams,
    h: f64,
    loads: &LoadSet,
    div_qs: f64,
) -> Result<f64> {
    Ok(PlateCompliance::new(mp, h)?.energy(s, loads, div_qs))
}

/// M_αβe_αβ + Q_αω_α + Q*_αω*_α + R_αβτ⁰_αβ + S*_ατ₃α + N_αβυ_αβ + M*_ατ⁰₃α.
pub fn internal_work_density(s: &PlateStress, e: &PlateStrain) -> f64 {
    s.to_array().iter().zip(e.to_array()).map(|(a, b)| a * b).sum()
}

/// Pointwise integrand of the mixed functional: Φ(𝒮) − (𝒮·ℰ + KÜ·𝒰 − pW − vΩ₃⁰).
#[allow(clippy::too_many_arguments)]
pub fn hpr_density(
    compliance: &PlateCompliance,
    s: &PlateStress,
    e: &PlateStrain,
    u: &PlateKinematics,
    accel: &PlateKinematics,
    inertia: &InertiaSet,
    loads: &LoadSet,
) -> f64 {
    compliance.energy(s, loads, -loads.p)
        - (internal_work_density(s, e) + crate::plate_fields::kinetic_density(accel, u, inertia)
            - loads.p * u.w
            - loads.v * u.omega3_0)
}

/// 3D stresses at scaled height ζ ∈ [−1, 1] reconstructed from the resultants.
pub fn thickness_profiles(s: &PlateStress, loads: &LoadSet, h: f64, zeta: f64) -> Result<Stress3D> {
    if !(zeta.abs() <= 1.0) {
        return Err(Error::Domain(format!("scaled thickness coordinate {zeta} outside [-1, 1]")));
    }
    check_thickness(h)?;
    let bubble = 1.0 - zeta * zeta;
    let shear = 3.0 / (2.0 * h) * bubble;
    let bend = 6.0 * zeta / (h * h);
    let mut sigma = Matrix3::zeros();
    let mut mu_c = Matrix3::zeros();
    let n = [[s.n11, s.n12], [s.n21, s.n22]];
    let m = [[s.m11, s.m12], [s.m21, s.m22]];
    let r = [[s.r11, s.r12], [s.r21, s.r22]];
    let q = [s.q1, s.q2];
    let q_s = [s.q1_s, s.q2_s];
    let s_s = [s.s1_s, s.s2_s];
    let m_s = [s.m1_s, s.m2_s];
    for a in 0..2 {
        for b in 0..2 {
            sigma[(a, b)] = n[a][b] / h + bend * m[a][b];
            mu_c[(a, b)] = shear * r[a][b];
        }
        sigma[(2, a)] = shear * q[a];
        sigma[(a, 2)] = shear * q_s[a];
        mu_c[(a, 2)] = bend * s_s[a] + m_s[a] / h;
    }
    sigma[(2, 2)] = -0.75 * (zeta.powi(3) / 3.0 - zeta) * loads.p + loads.sigma0;
    mu_c[(2, 2)] = zeta * loads.v + loads.t;
    Ok(Stress3D { sigma, mu_c })
}

/// 8-point Gauss-Legendre rule on [−1, 1].
pub const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// ∫₋₁¹ f(ζ) dζ, exact for polynomials up to degree 15.
pub fn integrate_thickness<T, F>(f: F) -> T
where
    F: Fn(f64) -> T,
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    GAUSS8.iter().fold(T::default(), |acc, &(z, w)| acc + f(z) * w)
}

/// Weighted thickness integrals of a 3D stress profile.
pub fn resultants_from_profiles<F>(profile: F, h: f64) -> PlateStress
where
    F: Fn(f64) -> Stress3D,
{
    let half = 0.5 * h;
    let mut acc = [0.0; 20];
    for &(z, w) in GAUSS8.iter() {
        let t = profile(z);
        let (sg, mc) = (&t.sigma, &t.mu_c);
        let moment = half * half * z * w;
        let force = half * w;
        let vals = [
            moment * sg[(0, 0)],
            moment * sg[(0, 1)],
            moment * sg[(1, 0)],
            moment * sg[(1, 1)],
            force * sg[(2, 0)],
            force * sg[(2, 1)],
            force * sg[(0, 2)],
            force * sg[(1, 2)],
            moment * mc[(0, 2)],
            moment * mc[(1, 2)],
            force * mc[(0, 0)],
            force * mc[(0, 1)],
            force * mc[(1, 0)],
            force * mc[(1, 1)],
            force * sg[(0, 0)],
            force * sg[(0, 1)],
            force * sg[(1, 0)],
            force * sg[(1, 1)],
            force * mc[(0, 2)],
            force * mc[(1, 2)],
        ];
        acc.iter_mut().zip(vals).for_each(|(a, v)| *a += v);
    }
    PlateStress::from_array(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosserat3d::{stress_energy_3d, work_3d, Strain3D};
    use crate::material::{reciprocal_constants, technical_constants};
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

    fn skewed() -> MaterialParams {
        MaterialParams {
            lambda: 1.7,
            mu: 0.9,
            alpha: 0.35,
            beta: -0.2,
            gamma: 0.6,
            epsilon: 1.3,
            rho: 2.0,
            j: [0.3, 0.4, 0.5],
        }
    }

    fn random_stress(rng: &mut ChaCha8Rng) -> PlateStress {
        PlateStress::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn levi_civita_signs() {
        let u = PlateKinematics { omega3: 2.0, ..Default::default() };
        let e = strain_from_kinematics(&u, &KinematicsGradient::default());
        assert_eq!((e.e12, e.e21, e.tau31), (2.0, -2.0, 0.0));
        let u = PlateKinematics { psi1: 1.0, ..Default::default() };
        let e = strain_from_kinematics(&u, &KinematicsGradient::default());
        assert_eq!((e.omega1, e.omega1_s, e.e11), (1.0, 0.0, 0.0));
        let u = PlateKinematics { w: 5.0, ..Default::default() };
        let e = strain_from_kinematics(&u, &KinematicsGradient::default());
        assert_eq!(e, PlateStrain::default());
    }

    #[test]
    fn pressure_prestress() {
        let tc = technical_constants(&unit(), 1.0).unwrap();
        let s = stress_from_kinematics(
            &PlateKinematics::default(),
            &KinematicsGradient::default(),
            &tc,
            &LoadSet::pressure(1.0),
        );
        assert!((s.m11 - 1.0 / 30.0).abs() < 1e-15);
        assert!((s.m22 - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn single_entries() {
        let c = PlateCompliance::new(&unit(), 1.0).unwrap();
        let s = PlateStress { s1_s: 1.0, ..Default::default() };
        assert!((c.strain(&s, &LoadSet::default(), 0.0).tau31 - 6.0).abs() < 1e-14);
        let s = PlateStress { n11: 1.0, ..Default::default() };
        assert!((c.energy(&s, &LoadSet::default(), 0.0) - 0.2).abs() < 1e-15);
        let s = PlateStress { m11: 2.0, ..Default::default() };
        let e = PlateStrain { e11: 3.0, ..Default::default() };
        assert_eq!(internal_work_density(&s, &e), 6.0);
    }

    #[test]
    fn stiffness_inverts_compliance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = skewed();
        let h = 0.3;
        let tc = technical_constants(&p, h).unwrap();
        let k = PlateStiffness::new(&tc);
        let c = PlateCompliance::new(&p, h).unwrap();
        for _ in 0..20 {
            let e = PlateStrain::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let back = c.strain(&k.elastic_stress(&e), &LoadSet::default(), 0.0);
            for (a, b) in back.to_array().iter().zip(e.to_array()) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn load_terms_invert_with_pressure_divergence() {
        // With ∇·Q* = −p the compliance absorbs exactly the stiffness prestress.
        let p = skewed();
        let h = 0.2;
        let tc = technical_constants(&p, h).unwrap();
        let k = PlateStiffness::new(&tc);
        let c = PlateCompliance::new(&p, h).unwrap();
        let loads = LoadSet { p: 0.7, sigma0: -0.4, v: 0.3, t: 0.9 };
        let e = PlateStrain { e11: 0.1, tau22_0: -0.2, upsilon12: 0.05, ..Default::default() };
        let back = c.strain(&k.stress(&e, &loads), &loads, -loads.p);
        for (a, b) in back.to_array().iter().zip(e.to_array()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_matches_thickness_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = skewed();
        let h = 0.4;
        let r = reciprocal_constants(&p).unwrap();
        let c = PlateCompliance::new(&p, h).unwrap();
        for _ in 0..10 {
            let s = random_stress(&mut rng);
            let loads = LoadSet {
                p: rng.gen_range(-1.0..1.0),
                sigma0: rng.gen_range(-1.0..1.0),
                v: rng.gen_range(-1.0..1.0),
                t: rng.gen_range(-1.0..1.0),
            };
            let quad: f64 = integrate_thickness(|z| {
                stress_energy_3d(&thickness_profiles(&s, &loads, h, z).unwrap(), &r)
            }) * (0.5 * h);
            let phi = c.energy(&s, &loads, -loads.p);
            assert!((quad - phi).abs() < 1e-12 * quad.abs().max(1.0), "{quad} vs {phi}");
        }
    }

    #[test]
    fn profile_round_trip_and_faces() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 0.25;
        let s = random_stress(&mut rng);
        let loads = LoadSet { p: 0.4, sigma0: 0.1, v: -0.3, t: 0.2 };
        let back = resultants_from_profiles(|z| thickness_profiles(&s, &loads, h, z).unwrap(), h);
        for (a, b) in back.to_array().iter().zip(s.to_array()) {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
        let top = thickness_profiles(&s, &loads, h, 1.0).unwrap();
        let bot = thickness_profiles(&s, &loads, h, -1.0).unwrap();
        assert!((top.sigma[(2, 2)] - loads.sigma_top()).abs() < 1e-15);
        assert!((bot.sigma[(2, 2)] - loads.sigma_bottom()).abs() < 1e-15);
        assert!((top.mu_c[(2, 2)] - loads.mu_top()).abs() < 1e-15);
        assert_eq!((top.sigma[(2, 0)], bot.sigma[(2, 1)], top.mu_c[(2, 0)]), (0.0, 0.0, 0.0));
        assert!(thickness_profiles(&s, &loads, h, 1.5).is_err());
    }

    #[test]
    fn single_moment_profile() {
        let s = PlateStress { m11: 1.0, ..Default::default() };
        let t = thickness_profiles(&s, &LoadSet::default(), 1.0, 1.0).unwrap();
        assert!((t.sigma[(0, 0)] - 6.0).abs() < 1e-15);
        let c = 2.5;
        let h = 0.3;
        let r = resultants_from_profiles(
            |_| Stress3D { sigma: Matrix3::new(c, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0), ..Default::default() },
            h,
        );
        assert!((r.n11 - h * c).abs() < 1e-15 && r.m11.abs() < 1e-15);
    }

    #[test]
    fn work_matches_thickness_integral() {
        // Arbitrary cubic-in-ζ 3D strain; plate measures are its weighted thickness averages,
        // each weight being the shape of the conjugate stress profile.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 0.3;
        let s = random_stress(&mut rng);
        let coeffs: Vec<[f64; 4]> =
            (0..18).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect();
        let strain_at = |z: f64| {
            let c = |k: usize| coeffs[k].iter().rev().fold(0.0, |acc, a| acc * z + a);
            Strain3D {
                gamma: Matrix3::new(c(0), c(1), c(2), c(3), c(4), c(5), c(6), c(7), 0.0),
                chi: Matrix3::new(c(8), c(9), c(10), c(11), c(12), c(13), 0.0, 0.0, c(14)),
            }
        };
        let avg = |f: &dyn Fn(&Strain3D) -> f64, weight: &dyn Fn(f64) -> f64| {
            integrate_thickness(|z| f(&strain_at(z)) * weight(z))
        };
        let half = |_: f64| 0.5;
        let bubble = |z: f64| 0.75 * (1.0 - z * z);
        let first = |z: f64| 3.0 / h * z;
        let e = PlateStrain {
            e11: avg(&|t| t.gamma[(0, 0)], &|z| 3.0 / h * z),
            e12: avg(&|t| t.gamma[(0, 1)], &first),
            e21: avg(&|t| t.gamma[(1, 0)], &first),
            e22: avg(&|t| t.gamma[(1, 1)], &first),
            omega1: avg(&|t| t.gamma[(2, 0)], &bubble),
            omega2: avg(&|t| t.gamma[(2, 1)], &bubble),
            omega1_s: avg(&|t| t.gamma[(0, 2)], &bubble),
            omega2_s: avg(&|t| t.gamma[(1, 2)], &bubble),
            tau31: avg(&|t| t.chi[(0, 2)], &first),
            tau32: avg(&|t| t.chi[(1, 2)], &first),
            tau11_0: avg(&|t| t.chi[(0, 0)], &bubble),
            tau12_0: avg(&|t| t.chi[(0, 1)], &bubble),
            tau21_0: avg(&|t| t.chi[(1, 0)], &bubble),
            tau22_0: avg(&|t| t.chi[(1, 1)], &bubble),
            upsilon11: avg(&|t| t.gamma[(0, 0)], &half),
            upsilon12: avg(&|t| t.gamma[(0, 1)], &half),
            upsilon21: avg(&|t| t.gamma[(1, 0)], &half),
            upsilon22: avg(&|t| t.gamma[(1, 1)], &half),
            tau31_0: avg(&|t| t.chi[(0, 2)], &half),
            tau32_0: avg(&|t| t.chi[(1, 2)], &half),
        };
        let quad: f64 = integrate_thickness(|z| {
            work_3d(&thickness_profiles(&s, &LoadSet::default(), h, z).unwrap(), &strain_at(z))
        }) * (0.5 * h);
        let plate = internal_work_density(&s, &e);
        assert!((quad - plate).abs() < 1e-12 * quad.abs().max(1.0), "{quad} vs {plate}");
    }
}
