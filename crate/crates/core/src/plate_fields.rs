//! Plate-level containers: kinematics 𝒰, strain ℰ, resultants 𝒮, loads and inertia.

use serde::Serialize;

use crate::material::{check_thickness, MaterialParams, MicroInertia};
use crate::Result;

macro_rules! flat_fields {
    ($(#[$meta:meta])* $name:ident, $n:literal, [$($field:ident),+ $(,)?]) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
        pub struct $name {
            $(pub $field: f64,)+
        }

        impl $name {
            pub const LEN: usize = $n;
            pub const NAMES: [&'static str; $n] = [$(stringify!($field)),+];

            pub fn to_array(&self) -> [f64; $n] {
                [$(self.$field),+]
            }

            pub fn from_array(a: [f64; $n]) -> Self {
                let mut it = a.into_iter();
                Self { $($field: it.next().unwrap(),)+ }
            }

            pub fn dot(&self, other: &Self) -> f64 {
                self.to_array().iter().zip(other.to_array()).map(|(a, b)| a * b).sum()
            }

            pub fn scale(&self, c: f64) -> Self {
                Self::from_array(self.to_array().map(|x| c * x))
            }

            pub fn add(&self, other: &Self) -> Self {
                let b = other.to_array();
                let mut a = self.to_array();
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Self::from_array(a)
            }

            pub fn max_abs(&self) -> f64 {
                self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
            }
        }
    };
}

flat_fields!(
    /// 𝒰: flexural block (psi1..omega2_0) followed by the extensional block (u1, u2, omega3_0).
    PlateKinematics,
    9,
    [psi1, psi2, w, omega3, omega1_0, omega2_0, u1, u2, omega3_0]
);

flat_fields!(
    /// ℰ: weighted strain and torsion measures.
    PlateStrain,
    20,
    [
        e11, e12, e21, e22, omega1, omega2, omega1_s, omega2_s, tau31, tau32, tau11_0, tau12_0,
        tau21_0, tau22_0, upsilon11, upsilon12, upsilon21, upsilon22, tau31_0, tau32_0,
    ]
);

flat_fields!(
    /// 𝒮: stress and couple-stress resultants, ordered to pair with [`PlateStrain`].
    PlateStress,
    20,
    [
        m11, m12, m21, m22, q1, q2, q1_s, q2_s, s1_s, s2_s, r11, r12, r21, r22, n11, n12, n21,
        n22, m1_s, m2_s,
    ]
);

impl PlateKinematics {
    pub const FLEXURAL: [usize; 6] = [0, 1, 2, 3, 4, 5];
    pub const EXTENSIONAL: [usize; 3] = [6, 7, 8];

    pub fn flexural(&self) -> [f64; 6] {
        [self.psi1, self.psi2, self.w, self.omega3, self.omega1_0, self.omega2_0]
    }

    pub fn extensional(&self) -> [f64; 3] {
        [self.u1, self.u2, self.omega3_0]
    }

    pub fn from_blocks(f: [f64; 6], e: [f64; 3]) -> Self {
        Self::from_array([f[0], f[1], f[2], f[3], f[4], f[5], e[0], e[1], e[2]])
    }
}

/// First derivatives ∂₁𝒰 and ∂₂𝒰 at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct KinematicsGradient {
    pub d1: PlateKinematics,
    pub d2: PlateKinematics,
}

/// Face loads reduced to the four plate load quantities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LoadSet {
    /// σᵗ − σᵇ
    pub p: f64,
    /// (σᵗ + σᵇ)/2
    pub sigma0: f64,
    /// (μᵗ − μᵇ)/2
    pub v: f64,
    /// (μᵗ + μᵇ)/2
    pub t: f64,
}

impl LoadSet {
    pub fn from_faces(sigma_top: f64, sigma_bottom: f64, mu_top: f64, mu_bottom: f64) -> Self {
        Self {
            p: sigma_top - sigma_bottom,
            sigma0: 0.5 * (sigma_top + sigma_bottom),
            v: 0.5 * (mu_top - mu_bottom),
            t: 0.5 * (mu_top + mu_bottom),
        }
    }

    pub fn pressure(p: f64) -> Self {
        Self { p, ..Self::default() }
    }

    pub fn sigma_top(&self) -> f64 {
        self.sigma0 + 0.5 * self.p
    }

    pub fn sigma_bottom(&self) -> f64 {
        self.sigma0 - 0.5 * self.p
    }

    pub fn mu_top(&self) -> f64 {
        self.t + self.v
    }

    pub fn mu_bottom(&self) -> f64 {
        self.t - self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InertiaSet {
    pub i_o: f64,
    pub rho_o: f64,
    pub i_o1: f64,
    pub i_o2: f64,
    pub j3_s: f64,
    pub i_o3: f64,
}

pub const K1_STAR: f64 = 4.0 / 5.0;
pub const K2_STAR: f64 = 8.0 / 5.0;
pub const K3_STAR: f64 = 5.0 / 6.0;

impl InertiaSet {
    /// Diagonal mass in [`PlateKinematics`] order.
    pub fn mass_vector(&self) -> [f64; 9] {
        [
            self.i_o, self.i_o, self.rho_o, self.j3_s, self.i_o1, self.i_o2, self.rho_o,
            self.rho_o, self.i_o3,
        ]
    }

    pub fn flexural_mass(&self) -> [f64; 6] {
        [self.i_o, self.i_o, self.rho_o, self.j3_s, self.i_o1, self.i_o2]
    }

    pub fn extensional_mass(&self) -> [f64; 3] {
        [self.rho_o, self.rho_o, self.i_o3]
    }
}

pub fn inertia_constants(p: &MaterialParams, h: f64) -> Result<InertiaSet> {
    inertia_constants_with(p, h, MicroInertia::default())
}

pub fn inertia_constants_with(p: &MaterialParams, h: f64, micro: MicroInertia) -> Result<InertiaSet> {
    check_thickness(h)?;
    Ok(InertiaSet {
        i_o: p.rho * h.powi(3) / 12.0,
        rho_o: p.rho * h,
        i_o1: K3_STAR * p.j[0] * h,
        i_o2: K3_STAR * p.j[1] * h,
        j3_s: micro.k4() * p.j[2] * h.powi(3),
        i_o3: p.j[2] * h,
    })
}

/// Ω_α⁰ = k₁*Θ_α⁰, Ω₃ = (k₂*/h)Θ₃, Ω₃⁰ = Θ₃⁰.
pub fn weighted_from_microrotation(
    theta0: [f64; 2],
    theta3_0: f64,
    theta3: f64,
    h: f64,
) -> ([f64; 2], f64, f64) {
    ([K1_STAR * theta0[0], K1_STAR * theta0[1]], K2_STAR * theta3 / h, theta3_0)
}

/// The bilinear density K Ü·𝒰.
pub fn kinetic_density(accel: &PlateKinematics, value: &PlateKinematics, inertia: &InertiaSet) -> f64 {
    let m = inertia.mass_vector();
    let a = accel.to_array();
    let u = value.to_array();
    (0..9).map(|i| m[i] * a[i] * u[i]).sum()
}

/// ½ K 𝒰̇·𝒰̇, used for energy tracking.
pub fn kinetic_energy_density(velocity: &PlateKinematics, inertia: &InertiaSet) -> f64 {
    0.5 * kinetic_density(velocity, velocity, inertia)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn unit_inertia() {
        let i = inertia_constants(&unit(), 1.0).unwrap();
        assert_eq!(i.i_o, 1.0 / 12.0);
        assert_eq!(i.rho_o, 1.0);
        assert_eq!(i.i_o1, 5.0 / 6.0);
        assert_eq!(i.j3_s, 25.0 / 32.0);
        assert_eq!(i.i_o3, 1.0);
    }

    #[test]
    fn thickness_scaling() {
        let a = inertia_constants(&unit(), 0.3).unwrap();
        let b = inertia_constants(&unit(), 0.6).unwrap();
        assert!((b.i_o / a.i_o - 8.0).abs() < 1e-12);
        assert!((b.rho_o / a.rho_o - 2.0).abs() < 1e-12);
    }

    #[test]
    fn massless_keeps_micro_terms() {
        let p = MaterialParams { rho: 0.0, ..unit() };
        let i = inertia_constants(&p, 1.0).unwrap();
        assert_eq!((i.i_o, i.rho_o), (0.0, 0.0));
        assert_eq!(i.i_o1, 5.0 / 6.0);
        assert!(inertia_constants(&p, 0.0).is_err());
    }

    #[test]
    fn correspondence() {
        let (o, o3, o30) = weighted_from_microrotation([1.0, 0.0], 0.0, 0.0, 2.0);
        assert_eq!(o[0], 0.8);
        assert_eq!((o3, o30), (0.0, 0.0));
        let h = 0.37;
        let (_, o3, _) = weighted_from_microrotation([0.0, 0.0], 0.0, h, h);
        assert!((o3 - 1.6).abs() < 1e-15);
    }

    #[test]
    fn single_velocity_kinetic_energy() {
        let i = inertia_constants(&unit(), 1.0).unwrap();
        let v = PlateKinematics { w: 1.0, ..Default::default() };
        assert_eq!(kinetic_energy_density(&v, &i), 0.5);
        assert_eq!(kinetic_energy_density(&PlateKinematics::default(), &i), 0.0);
    }

    #[test]
    fn face_loads() {
        let l = LoadSet::from_faces(3.0, 1.0, 0.5, -0.5);
        assert_eq!((l.p, l.sigma0, l.v, l.t), (2.0, 2.0, 0.5, 0.0));
        assert_eq!((l.sigma_top(), l.sigma_bottom()), (3.0, 1.0));
        assert_eq!((l.mu_top(), l.mu_bottom()), (0.5, -0.5));
    }

    #[test]
    fn array_round_trip() {
        let s = PlateStress::from_array(std::array::from_fn(|i| i as f64));
        assert_eq!(s.r11, 10.0);
        assert_eq!(PlateStress::from_array(s.to_array()), s);
        assert_eq!(PlateStrain::NAMES[10], "tau11_0");
    }
}
