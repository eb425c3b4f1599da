//! Thermal factors built from the two bath occupations.
//!
//! With a = (ω+Ω)/2T₁, b = ω/2T₂ and λ = b − a,
//!
//!   N(ω, Ω) = coth(a) − coth(b) = sinh(λ) / (sinh(a) sinh(b)).
//!
//! Every quantity here is evaluated in factored exponential form, e^{|λ|−|a|−|b|}
//! times bounded factors, which never overflows and needs no special case near
//! λ = 0. Products with the zeros of the spectral density and the response at
//! ω = −Ω and ω = 0 are supplied as `weighted`, finite everywhere.

use crate::spectral::{damped_sinh, scaled_x_over_sinh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalKernels {
    /// coth((ω+Ω)/2T₁) − coth(ω/2T₂); infinite at ω = 0 and at ω = −Ω.
    pub n: f64,
    /// ω/2T₂ − (ω+Ω)/2T₁.
    pub lambda: f64,
    /// N/λ through the cosh/sinh identity; infinite where N is.
    pub n_over_lambda: f64,
    /// (ω+Ω)·ω·N, regular everywhere.
    pub weighted: f64,
    /// (ω+Ω)·ω·N·coth(λ), regular and non-negative everywhere.
    pub weighted_coth: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Factored {
    /// e^{|λ|−|a|−|b|}
    envelope: f64,
    a: f64,
    b: f64,
    lambda: f64,
}

impl Factored {
    #[inline]
    pub fn new(omega: f64, drive: f64, t1: f64, t2: f64) -> Self {
        let a = (omega + drive) / (2.0 * t1);
        let b = omega / (2.0 * t2);
        // λ from the rescaled frequencies directly keeps it exact when T₁ = T₂
        let lambda = if t1 == t2 { -drive / (2.0 * t1) } else { b - a };
        let envelope = (lambda.abs() - a.abs() - b.abs()).min(0.0).exp();
        Self {
            envelope,
            a,
            b,
            lambda,
        }
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// x·ω·N / (4T₁T₂) with x = ω + Ω.
    #[inline]
    pub fn weighted(&self) -> f64 {
        let l = self.lambda.abs();
        self.lambda.signum()
            * self.envelope
            * damped_sinh(l)
            * scaled_x_over_sinh(self.a.abs())
            * scaled_x_over_sinh(self.b.abs())
    }

    /// x·ω·N·coth(λ) / (4T₁T₂).
    #[inline]
    pub fn weighted_coth(&self) -> f64 {
        let l = self.lambda.abs();
        let damped_cosh = 0.5 * (1.0 + (-2.0 * l).exp());
        self.envelope
            * damped_cosh
            * scaled_x_over_sinh(self.a.abs())
            * scaled_x_over_sinh(self.b.abs())
    }

    /// λ·x·ω·N / (4T₁T₂) ≥ 0.
    #[inline]
    pub fn weighted_lambda(&self) -> f64 {
        let l = self.lambda.abs();
        l * self.envelope
            * damped_sinh(l)
            * scaled_x_over_sinh(self.a.abs())
            * scaled_x_over_sinh(self.b.abs())
    }

    pub fn n(&self) -> f64 {
        let l = self.lambda.abs();
        let den = damped_sinh(self.a.abs()) * damped_sinh(self.b.abs());
        let sign = self.lambda.signum() * self.a.signum() * self.b.signum();
        if den == 0.0 {
            return sign * f64::INFINITY;
        }
        sign * self.envelope * damped_sinh(l) / den
    }

    pub fn n_over_lambda(&self) -> f64 {
        let l = self.lambda.abs();
        let sinhc = if l < 1e-8 {
            1.0 - l
        } else {
            damped_sinh(l) / l
        };
        let den = damped_sinh(self.a.abs()) * damped_sinh(self.b.abs());
        let sign = self.a.signum() * self.b.signum();
        if den == 0.0 {
            return sign * f64::INFINITY;
        }
        sign * self.envelope * sinhc / den
    }
}

pub fn thermal_kernel(omega: f64, drive: f64, t1: f64, t2: f64) -> ThermalKernels {
    let f = Factored::new(omega, drive, t1, t2);
    let scale = 4.0 * t1 * t2;
    ThermalKernels {
        n: f.n(),
        lambda: f.lambda(),
        n_over_lambda: f.n_over_lambda(),
        weighted: scale * f.weighted(),
        weighted_coth: scale * f.weighted_coth(),
    }
}
