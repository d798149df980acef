use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cosserat moduli, density and microinertia (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub lambda: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub rho: f64,
    #[serde(rename = "J")]
    pub j: [f64; 3],
}

impl MaterialParams {
    /// Build from the classical pair (E-free form): shear modulus, Poisson ratio, coupling number N
    /// and the two characteristic lengths. Handy for tests and sweeps.
    pub fn from_engineering(
        g: f64,
        nu: f64,
        coupling: f64,
        l_t: f64,
        l_b: f64,
        polar_ratio: f64,
        rho: f64,
        j: [f64; 3],
    ) -> Self {
        let mu = g;
        let lambda = 2.0 * mu * nu / (1.0 - 2.0 * nu);
        let n2 = coupling * coupling;
        let alpha = mu * n2 / (1.0 - n2);
        let gamma = mu * l_t * l_t;
        // l_b = ½√((γ+ε)/μ)
        let epsilon = 4.0 * mu * l_b * l_b - gamma;
        // Ψ = 2γ/(β+2γ)
        let beta = 2.0 * gamma / polar_ratio - 2.0 * gamma;
        Self { lambda, mu, alpha, beta, gamma, epsilon, rho, j }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> ValidationReport {
        validate_parameters(self)
    }

    pub fn ensure_admissible(&self) -> Result<()> {
        let report = validate_parameters(self);
        if report.is_admissible() {
            Ok(())
        } else {
            Err(Error::Domain(format!("inadmissible material: {report}")))
        }
    }
}

/// One admissibility inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    MuPositive,
    BulkPositive,
    GammaPositive,
    CoupleBulkPositive,
    AlphaPositive,
    MuAlphaPositive,
    EpsilonPositive,
    GammaEpsilonPositive,
    RhoPositive,
    J1Positive,
    J2Positive,
    J3Positive,
}

impl Condition {
    pub const ALL: [Condition; 12] = [
        Condition::MuPositive,
        Condition::BulkPositive,
        Condition::GammaPositive,
        Condition::CoupleBulkPositive,
        Condition::AlphaPositive,
        Condition::MuAlphaPositive,
        Condition::EpsilonPositive,
        Condition::GammaEpsilonPositive,
        Condition::RhoPositive,
        Condition::J1Positive,
        Condition::J2Positive,
        Condition::J3Positive,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Condition::MuPositive => "μ>0",
            Condition::BulkPositive => "3λ+2μ>0",
            Condition::GammaPositive => "γ>0",
            Condition::CoupleBulkPositive => "3β+2γ>0",
            Condition::AlphaPositive => "α>0",
            Condition::MuAlphaPositive => "μ+α>0",
            Condition::EpsilonPositive => "ε>0",
            Condition::GammaEpsilonPositive => "γ+ε>0",
            Condition::RhoPositive => "ρ>0",
            Condition::J1Positive => "J1>0",
            Condition::J2Positive => "J2>0",
            Condition::J3Positive => "J3>0",
        }
    }

    /// Value that must be strictly positive.
    fn margin(&self, p: &MaterialParams) -> f64 {
        match self {
            Condition::MuPositive => p.mu,
            Condition::BulkPositive => 3.0 * p.lambda + 2.0 * p.mu,
            Condition::GammaPositive => p.gamma,
            Condition::CoupleBulkPositive => 3.0 * p.beta + 2.0 * p.gamma,
            Condition::AlphaPositive => p.alpha,
            Condition::MuAlphaPositive => p.mu + p.alpha,
            Condition::EpsilonPositive => p.epsilon,
            Condition::GammaEpsilonPositive => p.gamma + p.epsilon,
            Condition::RhoPositive => p.rho,
            Condition::J1Positive => p.j[0],
            Condition::J2Positive => p.j[1],
            Condition::J3Positive => p.j[2],
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Condition>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.violations.iter().map(Condition::label).collect()
    }

    pub fn contains(&self, c: Condition) -> bool {
        self.violations.contains(&c)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("admissible");
        }
        write!(f, "violated: {}", self.labels().join(", "))
    }
}

/// Never fails; NaN margins count as violations.
pub fn validate_parameters(p: &MaterialParams) -> ValidationReport {
    let violations = Condition::ALL
        .iter()
        .copied()
        // written as !(x > 0) so NaN is flagged
        .filter(|c| !(c.margin(p) > 0.0))
        .collect();
    ValidationReport { violations }
}

/// Transverse shear correction used in the Q, Q* stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShearCorrection {
    /// κ₁² = 5/6
    #[default]
    Reissner,
    /// κ₁² = π²/12
    Mindlin,
}

impl ShearCorrection {
    pub fn kappa1_sq(self) -> f64 {
        match self {
            ShearCorrection::Reissner => 5.0 / 6.0,
            ShearCorrection::Mindlin => std::f64::consts::PI * std::f64::consts::PI / 12.0,
        }
    }
}

/// Coefficient of J₃h³ in the Ω₃ inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MicroInertia {
    /// k₄* = 25/32
    #[default]
    Tabulated,
    /// k₄* = 85/1008, the exact thickness integral of the cubic φ₃ profile.
    ThicknessConsistent,
}

impl MicroInertia {
    pub fn k4(self) -> f64 {
        match self {
            MicroInertia::Tabulated => 25.0 / 32.0,
            MicroInertia::ThicknessConsistent => 85.0 / 1008.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TechnicalConstants {
    pub h: f64,
    pub e: f64,
    pub nu: f64,
    pub g: f64,
    pub d: f64,
    pub l_t: f64,
    pub l_b: f64,
    pub n: f64,
    pub psi_polar: f64,
    pub kappa1_sq: f64,
    pub kappa2_sq: f64,
}

impl TechnicalConstants {
    pub fn n_sq(&self) -> f64 {
        self.n * self.n
    }
}

pub fn technical_constants(p: &MaterialParams, h: f64) -> Result<TechnicalConstants> {
    technical_constants_with(p, h, ShearCorrection::default())
}

pub fn technical_constants_with(
    p: &MaterialParams,
    h: f64,
    shear: ShearCorrection,
) -> Result<TechnicalConstants> {
    p.ensure_admissible()?;
    check_thickness(h)?;
    let MaterialParams { lambda, mu, alpha, beta, gamma, epsilon, .. } = *p;
    let e = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
    let nu = lambda / (2.0 * (lambda + mu));
    let g = e / (2.0 * (1.0 + nu));
    let d = e * h.powi(3) / (12.0 * (1.0 - nu * nu));
    Ok(TechnicalConstants {
        h,
        e,
        nu,
        g,
        d,
        l_t: (gamma / mu).sqrt(),
        l_b: 0.5 * ((gamma + epsilon) / mu).sqrt(),
        n: (alpha / (mu + alpha)).sqrt(),
        psi_polar: 2.0 * gamma / (beta + 2.0 * gamma),
        kappa1_sq: shear.kappa1_sq(),
        kappa2_sq: 5.0 / 3.0,
    })
}

pub(crate) fn check_thickness(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("thickness must be positive and finite, got {h}")))
    }
}

/// Moduli of the inverse (compliance) 3D law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalParams {
    pub mu_p: f64,
    pub alpha_p: f64,
    pub gamma_p: f64,
    pub epsilon_p: f64,
    pub lambda_p: f64,
    pub beta_p: f64,
}

pub fn reciprocal_constants(p: &MaterialParams) -> Result<ReciprocalParams> {
    p.ensure_admissible()?;
    let MaterialParams { lambda, mu, alpha, beta, gamma, epsilon, .. } = *p;
    Ok(ReciprocalParams {
        mu_p: 1.0 / (4.0 * mu),
        alpha_p: 1.0 / (4.0 * alpha),
        gamma_p: 1.0 / (4.0 * gamma),
        epsilon_p: 1.0 / (4.0 * epsilon),
        lambda_p: -lambda / (6.0 * mu * (lambda + 2.0 * mu / 3.0)),
        beta_p: -beta / (6.0 * gamma * (beta + 2.0 * gamma / 3.0)),
    })
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
    fn unit_material_is_admissible() {
        assert!(validate_parameters(&unit()).is_admissible());
    }

    #[test]
    fn zero_alpha_flags_alpha() {
        let r = validate_parameters(&unit().with_alpha(0.0));
        assert_eq!(r.labels(), vec!["α>0"]);
    }

    #[test]
    fn negative_mu_flags_both_mu_conditions() {
        let p = MaterialParams { mu: -1.0, ..unit() };
        let r = validate_parameters(&p);
        assert!(r.contains(Condition::MuPositive));
        assert!(r.contains(Condition::MuAlphaPositive));
    }

    #[test]
    fn nan_is_a_violation() {
        let p = MaterialParams { gamma: f64::NAN, ..unit() };
        let r = validate_parameters(&p);
        assert!(r.contains(Condition::GammaPositive));
        assert!(r.contains(Condition::CoupleBulkPositive));
    }

    #[test]
    fn unit_lame_pair() {
        let tc = technical_constants(&unit(), 1.0).unwrap();
        assert!((tc.nu - 0.25).abs() < 1e-15);
        assert!((tc.e - 2.5).abs() < 1e-15);
        assert!((tc.g - 1.0).abs() < 1e-15);
        assert!((tc.d - 2.5 / (12.0 * (1.0 - 0.0625))).abs() < 1e-15);
        assert!((tc.n - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn polar_ratio_limits() {
        // β → 0⁺ gives Ψ → 1; the formula is continuous there
        let p = MaterialParams { beta: 0.0, ..unit() };
        let psi = 2.0 * p.gamma / (p.beta + 2.0 * p.gamma);
        assert_eq!(psi, 1.0);
        let tc = technical_constants(&p, 1.0).unwrap();
        assert_eq!(tc.psi_polar, 1.0);
    }

    #[test]
    fn bad_thickness() {
        assert!(technical_constants(&unit(), 0.0).is_err());
        assert!(technical_constants(&unit(), -1.0).is_err());
    }

    #[test]
    fn reciprocal_values() {
        let r = reciprocal_constants(&unit()).unwrap();
        assert_eq!(r.mu_p, 0.25);
        let p0 = MaterialParams { lambda: 0.0, ..unit() };
        assert_eq!(reciprocal_constants(&p0).unwrap().lambda_p, 0.0);
    }

    #[test]
    fn mindlin_switch() {
        let tc = technical_constants_with(&unit(), 1.0, ShearCorrection::Mindlin).unwrap();
        assert!((tc.kappa1_sq - 0.822_467_033_424_113_2).abs() < 1e-15);
    }

    #[test]
    fn engineering_constructor_round_trips() {
        let p = MaterialParams::from_engineering(2.0, 0.3, 0.4, 0.05, 0.04, 1.2, 3.0, [1e-3; 3]);
        let tc = technical_constants(&p, 0.1).unwrap();
        assert!((tc.nu - 0.3).abs() < 1e-14);
        assert!((tc.n - 0.4).abs() < 1e-14);
        assert!((tc.l_t - 0.05).abs() < 1e-14);
        assert!((tc.l_b - 0.04).abs() < 1e-14);
        assert!((tc.psi_polar - 1.2).abs() < 1e-14);
    }
}
