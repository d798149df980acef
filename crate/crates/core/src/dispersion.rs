//! Plane-wave analysis: H = Ĥ e^{i(ξ·x − ωt)} turns L(∂)H = M Ḧ into A(ξ)Ĥ = ω² M Ĥ with
//! A(ξ) = −L(iξ), which is Hermitian.

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use serde::Serialize;

use crate::operators::{ExtensionalOperator, FlexuralOperator, Symbol};
use crate::{Error, Result};

/// ω² below this is a sign error in the symbol, above it (and below zero) it is roundoff.
pub const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// A mode shape as (re, im) pairs in field order.
pub type ModeShape = Vec<[f64; 2]>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending ω ≥ 0.
    pub omega: Vec<f64>,
    /// ω² before clipping.
    pub omega_sq: Vec<f64>,
    pub modes: Option<Vec<ModeShape>>,
}

/// Eigenvalues ω² of A(ξ)v = ω² M v, ascending, with optional M-scaled eigenvectors.
pub fn spectrum<const N: usize>(sym: &Symbol<N>, mass: &[f64; N], xi: [f64; 2], with_modes: bool) -> Result<Spectrum> {
    let (re, im) = sym.fourier(xi);
    let inv_sqrt: [f64; N] = std::array::from_fn(|i| 1.0 / mass[i].sqrt());
    let a = DMatrix::<Complex<f64>>::from_fn(N, N, |r, c| {
        // −L(iξ), scaled to M^{-1/2} A M^{-1/2}; average with the adjoint to shed roundoff.
        let z = Complex::new(-re[(r, c)], -im[(r, c)]);
        let zt = Complex::new(-re[(c, r)], im[(c, r)]);
        (z + zt) * 0.5 * inv_sqrt[r] * inv_sqrt[c]
    });
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let omega_sq: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if let Some(&bad) = omega_sq.iter().find(|&&l| l < -NEGATIVE_TOLERANCE || l.is_nan()) {
        return Err(Error::NonConservative { eigenvalue: bad, xi1: xi[0], xi2: xi[1] });
    }
    let omega = omega_sq.iter().map(|l| l.max(0.0).sqrt()).collect();
    let modes = with_modes.then(|| {
        order
            .iter()
            .map(|&i| {
                let mut v: Vec<Complex<f64>> = (0..N).map(|r| eig.eigenvectors[(r, i)] * inv_sqrt[r]).collect();
                let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if big.norm() > 0.0 {
                    let phase = big.conj() / big.norm();
                    v.iter_mut().for_each(|z| *z = *z * phase / norm);
                }
                v.iter().map(|z| [z.re, z.im]).collect()
            })
            .collect()
    });
    Ok(Spectrum { omega, omega_sq, modes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionResult {
    pub xi_samples: Vec<[f64; 2]>,
    pub flexural_branches: Vec<Vec<f64>>,
    pub extensional_branches: Vec<Vec<f64>>,
    pub flexural_modes: Option<Vec<Vec<ModeShape>>>,
    pub extensional_modes: Option<Vec<Vec<ModeShape>>>,
}

/// Branches for explicit symbols and masses (used for both the shipped and the printed tables).
pub fn dispersion_from_symbols(
    flex: (&Symbol<6>, &[f64; 6]),
    ext: (&Symbol<3>, &[f64; 3]),
    xi: &[[f64; 2]],
    with_modes: bool,
) -> Result<DispersionResult> {
    let pts: Vec<(Spectrum, Spectrum)> = xi
        .par_iter()
        .map(|&k| Ok((spectrum(flex.0, flex.1, k, with_modes)?, spectrum(ext.0, ext.1, k, with_modes)?)))
        .collect::<Result<_>>()?;
    let modes = |f: fn(&(Spectrum, Spectrum)) -> &Spectrum| {
        with_modes.then(|| pts.iter().map(|p| f(p).modes.clone().unwrap_or_default()).collect())
    };
    Ok(DispersionResult {
        xi_samples: xi.to_vec(),
        flexural_branches: pts.iter().map(|p| p.0.omega.clone()).collect(),
        extensional_branches: pts.iter().map(|p| p.1.omega.clone()).collect(),
        flexural_modes: modes(|p| &p.0),
        extensional_modes: modes(|p| &p.1),
    })
}

pub fn dispersion_curves(
    flex: &FlexuralOperator,
    ext: &ExtensionalOperator,
    xi: &[[f64; 2]],
    with_modes: bool,
) -> Result<DispersionResult> {
    dispersion_from_symbols((&flex.symbol, &flex.mass), (&ext.symbol, &ext.mass), xi, with_modes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroMode {
    pub branch: usize,
    /// Field index carrying the largest share of the mode.
    pub dominant_field: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cutoffs {
    pub omega: Vec<f64>,
    pub zero_modes: Vec<ZeroMode>,
}

/// Relative size below which a ξ = 0 eigenvalue counts as a zero mode.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-9;

/// Frequencies at ξ = 0 and the zero modes among them.
pub fn cutoff_frequencies<const N: usize>(sym: &Symbol<N>, mass: &[f64; N]) -> Result<Cutoffs> {
    let s = spectrum(sym, mass, [0.0, 0.0], true)?;
    let top = s.omega_sq.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let modes = s.modes.as_ref().expect("requested");
    let zero_modes = s
        .omega_sq
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= ZERO_MODE_TOLERANCE * top.max(f64::MIN_POSITIVE))
        .map(|(branch, _)| {
            // share in the mass norm
            let share = |f: usize| mass[f] * (modes[branch][f][0].powi(2) + modes[branch][f][1].powi(2));
            let dominant_field = (0..N).max_by(|&a, &b| share(a).total_cmp(&share(b))).unwrap_or(0);
            ZeroMode { branch, dominant_field }
        })
        .collect();
    Ok(Cutoffs { omega: s.omega, zero_modes })
}

/// `n` magnitudes in (0, k_max]: half log-spaced from k_max/1000, half linear.
pub fn log_linear_magnitudes(k_max: f64, n: usize) -> Vec<f64> {
    let n_log = n / 2;
    let n_lin = n - n_log;
    let lo = (k_max * 1e-3).ln();
    let hi = k_max.ln();
    let mut v: Vec<f64> = (0..n_log)
        .map(|i| (lo + (hi - lo) * i as f64 / n_log.max(1) as f64).exp())
        .chain((1..=n_lin).map(|i| k_max * i as f64 / n_lin as f64))
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Default sampling directions: the two axes and the diagonal.
pub const DEFAULT_DIRECTIONS: [[f64; 2]; 3] =
    [[1.0, 0.0], [0.0, 1.0], [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2]];
