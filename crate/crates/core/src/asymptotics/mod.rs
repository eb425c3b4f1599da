//! Closed-form coefficients of the slow-driving (adiabatic, Ω ≪ ω_l) and
//! fast-driving (diabatic, Ω ≫ ω_l, ω_c) expansions, and the asymptotic TUR
//! quantifiers built from them.
//!
//! Coefficients are quoted for φ = π/2. The prediction helpers restore the φ
//! dependence: δ terms scale with sin φ and the cross terms with cos φ.
//!
//! The adiabatic expansion starts at O(Ω²) only when T₁ = T₂; with a temperature
//! gradient the O(Ω) heat-leak term is not modelled here.

mod certificate;

pub use certificate::{
    certify_random, tur_certificate, CertificateReport, CertifyOptions, CertifyReport,
    CheckSummary, PointViolation, Violation,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::observables::{breakpoints, delta_power_integrand, position_correlators};
use crate::quadrature::{integrate_real_line, integrate_real_line_vec, QuadratureConfig};
use crate::response::{MachineParams, ReducedResponse};
use crate::spectral::{coth_unchecked, scaled_x_over_sinh, x_coth_x};
use crate::thermal::Factored;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Adiabatic,
    Diabatic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoeffs {
    pub regime: Regime,
    pub alpha_a: f64,
    pub alpha_b: f64,
    /// Coefficient of cos φ shared by both oscillators.
    pub alpha_cross: f64,
    pub delta_alpha_a: f64,
    pub delta_alpha_b: f64,
    /// Diabatic only; carries the coth(Ω/2T₁) factor of the Ω it was computed at.
    pub delta_beta_a: Option<f64>,
    pub delta_beta_b: Option<f64>,
    /// Diabatic only.
    pub c_tilde: Option<f64>,
    /// Adiabatic only: D_Pl ≈ Ω²·fluct_l.
    pub fluct_a: Option<f64>,
    pub fluct_b: Option<f64>,
    /// Largest propagated quadrature error among the coefficients.
    pub error_estimate: f64,
    pub converged: bool,
}

fn measure(p: &MachineParams) -> f64 {
    1.0 / (4.0 * PI * p.mass)
}

/// Ω-independent coefficients of P_l ≈ Ω sin φ·δα_l + Ω²(α_l + cos φ·α_cross)
/// and D_Pl ≈ Ω²·fluct_l.
pub fn adiabatic_coefficients(
    p: &MachineParams,
    cfg: &QuadratureConfig,
) -> Result<AsymptoticCoeffs> {
    p.validate()?;
    cfg.validate()?;
    let bath = p.bath1();
    let still = MachineParams {
        omega_drive: 0.0,
        ..*p
    };
    let pts = breakpoints(p, Some(0.0));
    let m = measure(p);
    let scale = 4.0 * p.t1 * p.t2;
    let f = |omega: f64| -> [f64; 6] {
        let r = ReducedResponse::at(p, omega);
        let u = omega / (2.0 * p.t1);
        let w_n0 = 2.0 * p.t1 * x_coth_x(u) - 2.0 * p.t2 * x_coth_x(omega / (2.0 * p.t2));
        // ω²/(2T₁ sinh²u) = 2T₁(u/sinh u)²
        let au = u.abs();
        let sinh_term = 2.0 * p.t1 * (scaled_x_over_sinh(au) * (-au).exp()).powi(2);
        let weight =
            bath.density_derivative(omega) * w_n0 - bath.density_over_omega(omega) * sinh_term;
        let kd = scale * Factored::new(omega, 0.0, p.t1, p.t2).weighted_coth();
        let j = bath.density_over_omega(omega);
        [
            -m * weight * r.aa_im_over_w,
            -m * weight * r.bb_im_over_w,
            -m * weight * r.ab_im_over_w,
            -m * delta_power_integrand(&still, omega, &r),
            m * j * r.aa_im_over_w * kd,
            m * j * r.bb_im_over_w * kd,
        ]
    };
    let res = integrate_real_line_vec(f, &pts, cfg);
    let [a, b, c, d, fa, fb] = res.map(|r| r.value);
    Ok(AsymptoticCoeffs {
        regime: Regime::Adiabatic,
        alpha_a: a,
        alpha_b: b,
        alpha_cross: c,
        delta_alpha_a: d,
        delta_alpha_b: -d,
        delta_beta_a: None,
        delta_beta_b: None,
        c_tilde: None,
        fluct_a: Some(fa),
        fluct_b: Some(fb),
        error_estimate: res.iter().map(|r| r.error_estimate).fold(0.0, f64::max),
        converged: res.iter().all(|r| r.converged),
    })
}

/// Equilibrium weights of P_l⁽⁰⁾ ≈ Ω𝒥₁(Ω)(α_l + cos φ·α_cross) and
/// δP_l ≈ Ω𝒥₁(Ω) sin φ(δα_l·Ω/ω_c + δβ_l), with δβ evaluated at `p.omega_drive`.
pub fn diabatic_coefficients(
    p: &MachineParams,
    cfg: &QuadratureConfig,
) -> Result<AsymptoticCoeffs> {
    p.validate()?;
    cfg.validate()?;
    let [aa, bb, ab] = position_correlators(p, cfg);
    let m = measure(p);
    let re = integrate_real_line(
        |w| m * ReducedResponse::at(p, w).ab_re,
        &breakpoints(p, None),
        cfg,
    );
    let beta = -coth_unchecked(p.omega_drive / (2.0 * p.t1)) * re.value;
    let all = [aa, bb, ab, re];
    Ok(AsymptoticCoeffs {
        regime: Regime::Diabatic,
        alpha_a: aa.value,
        alpha_b: bb.value,
        alpha_cross: ab.value,
        delta_alpha_a: ab.value,
        delta_alpha_b: -ab.value,
        delta_beta_a: Some(beta),
        delta_beta_b: Some(-beta),
        c_tilde: Some(ab.value / aa.value),
        fluct_a: None,
        fluct_b: None,
        error_estimate: all.iter().map(|r| r.error_estimate).fold(0.0, f64::max),
        converged: all.iter().all(|r| r.converged),
    })
}

/// Leading-order powers predicted by a set of coefficients at `p.omega_drive`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPowers {
    pub p_a0: f64,
    pub p_b0: f64,
    pub dp_a: f64,
    pub dp_b: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p: f64,
}

impl AsymptoticCoeffs {
    pub fn powers(&self, p: &MachineParams) -> AsymptoticPowers {
        let w = p.omega_drive;
        let (cos_phi, sin_phi) = (p.phi.cos(), p.phi.sin());
        let (slow, fast) = match self.regime {
            Regime::Adiabatic => (w * w, w),
            Regime::Diabatic => {
                let j = w * p.bath1().spectral_density(w);
                (j, j * w / p.omega_c)
            }
        };
        let beta = |b: Option<f64>| match self.regime {
            Regime::Adiabatic => 0.0,
            Regime::Diabatic => w * p.bath1().spectral_density(w) * b.unwrap_or(0.0),
        };
        let p_a0 = slow * (self.alpha_a + cos_phi * self.alpha_cross);
        let p_b0 = slow * (self.alpha_b + cos_phi * self.alpha_cross);
        let dp_a = sin_phi * (fast * self.delta_alpha_a + beta(self.delta_beta_a));
        let dp_b = sin_phi * (fast * self.delta_alpha_b + beta(self.delta_beta_b));
        AsymptoticPowers {
            p_a0,
            p_b0,
            dp_a,
            dp_b,
            p_a: p_a0 + dp_a,
            p_b: p_b0 + dp_b,
            p: p_a0 + p_b0,
        }
    }
}

/// D_Pl ≈ Ω²·fluct_l for adiabatic coefficients, `None` for diabatic ones.
pub fn adiabatic_fluctuation(p: &MachineParams, coeffs: &AsymptoticCoeffs) -> Option<(f64, f64)> {
    let w2 = p.omega_drive * p.omega_drive;
    Some((w2 * coeffs.fluct_a?, w2 * coeffs.fluct_b?))
}

/// D_Pl^(dia) = Ω²𝒥₁(Ω)coth(Ω/2T₁)·α_l for both oscillators.
pub fn diabatic_fluctuation(p: &MachineParams, coeffs: &AsymptoticCoeffs) -> (f64, f64) {
    let w = p.omega_drive;
    let pre = w * w * p.bath1().spectral_density(w) * coth_unchecked(w / (2.0 * p.t1));
    (pre * coeffs.alpha_a, pre * coeffs.alpha_b)
}

/// Slow-driving local TUR quantifier 2Ω²(α_A + α_B)α_A/δα_A².
pub fn adiabatic_local_tur(p: &MachineParams, coeffs: &AsymptoticCoeffs) -> f64 {
    let w = p.omega_drive;
    2.0 * w * w * (coeffs.alpha_a + coeffs.alpha_b) * coeffs.alpha_a
        / (coeffs.delta_alpha_a * coeffs.delta_alpha_a)
}

/// Fast-driving local TUR quantifier at temperature T = T₁:
/// (Ω/T)coth(Ω/2T)(1 + α_B/α_A)/(1 + C̃Ω/ω_c)².
pub fn diabatic_local_tur(p: &MachineParams, coeffs: &AsymptoticCoeffs) -> Option<f64> {
    let c = coeffs.c_tilde?;
    let w = p.omega_drive;
    let t = p.t1;
    let lever = 1.0 + c * w / p.omega_c;
    Some(
        (w / t) * coth_unchecked(w / (2.0 * t)) * (1.0 + coeffs.alpha_b / coeffs.alpha_a)
            / (lever * lever),
    )
}
