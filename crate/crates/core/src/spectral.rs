//! Bath spectral densities and their frequency-domain damping kernels.
//!
//! Units throughout the crate: ħ = k_B = 1, frequencies in units of ω_A.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude [`coth_stable`] switches to its Laurent series.
pub const COTH_SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralShape {
    /// Memory-less friction, 𝒥(ω) = mγω.
    StrictOhmic { gamma: f64 },
    /// 𝒥(ω) = mγω / (1 + ω²/ω_c²).
    DrudeLorentz { gamma: f64, cutoff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub shape: SpectralShape,
    pub mass: f64,
}

impl SpectralModel {
    pub fn strict_ohmic(gamma: f64) -> Self {
        Self {
            shape: SpectralShape::StrictOhmic { gamma },
            mass: 1.0,
        }
    }

    pub fn drude_lorentz(gamma: f64, cutoff: f64) -> Self {
        Self {
            shape: SpectralShape::DrudeLorentz { gamma, cutoff },
            mass: 1.0,
        }
    }

    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = mass;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and strictly positive",
                })
            }
        };
        positive("mass", self.mass)?;
        match self.shape {
            SpectralShape::StrictOhmic { gamma } => positive("gamma", gamma),
            SpectralShape::DrudeLorentz { gamma, cutoff } => {
                positive("gamma", gamma)?;
                positive("omega_c", cutoff)
            }
        }
    }

    pub fn gamma(&self) -> f64 {
        match self.shape {
            SpectralShape::StrictOhmic { gamma } | SpectralShape::DrudeLorentz { gamma, .. } => {
                gamma
            }
        }
    }

    /// 𝒥(ω)/ω, which is even and regular at ω = 0.
    #[inline]
    pub fn density_over_omega(&self, omega: f64) -> f64 {
        match self.shape {
            SpectralShape::StrictOhmic { gamma } => self.mass * gamma,
            SpectralShape::DrudeLorentz { gamma, cutoff } => {
                let r = omega / cutoff;
                self.mass * gamma / (1.0 + r * r)
            }
        }
    }

    #[inline]
    pub fn spectral_density(&self, omega: f64) -> f64 {
        omega * self.density_over_omega(omega)
    }

    /// d𝒥/dω in closed form.
    pub fn density_derivative(&self, omega: f64) -> f64 {
        match self.shape {
            SpectralShape::StrictOhmic { gamma } => self.mass * gamma,
            SpectralShape::DrudeLorentz { gamma, cutoff } => {
                let r2 = (omega / cutoff).powi(2);
                self.mass * gamma * (1.0 - r2) / ((1.0 + r2) * (1.0 + r2))
            }
        }
    }

    /// Real and imaginary parts (γ′, γ″) of the Fourier-transformed memory kernel.
    pub fn damping_kernel(&self, omega: f64) -> (f64, f64) {
        match self.shape {
            SpectralShape::StrictOhmic { gamma } => (gamma, 0.0),
            SpectralShape::DrudeLorentz { cutoff, .. } => {
                let real = self.density_over_omega(omega) / self.mass;
                let imag = self.spectral_density(omega) / (self.mass * cutoff);
                (real, imag)
            }
        }
    }
}

pub fn spectral_density(model: &SpectralModel, omega: f64) -> f64 {
    model.spectral_density(omega)
}

pub fn damping_kernel_freq(model: &SpectralModel, omega: f64) -> (f64, f64) {
    model.damping_kernel(omega)
}

/// coth(x), switching to 1/x + x/3 − x³/45 for |x| < [`COTH_SERIES_CUTOFF`].
///
/// `x = 0` is a pole and is reported as a domain error.
pub fn coth_stable(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("coth has a pole at x = 0"));
    }
    if !x.is_finite() {
        return if x.is_nan() {
            Err(Error::Domain("coth of NaN"))
        } else {
            Ok(x.signum())
        };
    }
    Ok(coth_unchecked(x))
}

#[inline]
pub(crate) fn coth_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    if ax < COTH_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    } else if ax > 20.0 {
        // 1 + 2e^{-2|x|} is exact to the last ulp once e^{-2|x|} < 1e-17
        x.signum() * (1.0 + 2.0 * (-2.0 * ax).exp())
    } else {
        let e = (-2.0 * ax).exp();
        x.signum() * (1.0 + e) / (1.0 - e)
    }
}

/// x·coth(x), even and equal to 1 at the origin.
#[inline]
pub(crate) fn x_coth_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < COTH_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0
    } else {
        ax * coth_unchecked(ax)
    }
}

/// (1 − e^{−2t})/2 = e^{−t} sinh(t) for t ≥ 0.
#[inline]
pub(crate) fn damped_sinh(t: f64) -> f64 {
    -0.5 * (-2.0 * t).exp_m1()
}

/// t / ((1 − e^{−2t})/2), the regular part of t/sinh(t) once e^{−t} is factored out.
#[inline]
pub(crate) fn scaled_x_over_sinh(t: f64) -> f64 {
    if t < 1e-8 {
        1.0 + t
    } else {
        t / damped_sinh(t)
    }
}
