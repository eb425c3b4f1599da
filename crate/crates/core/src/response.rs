//! Response matrix of the two oscillators dressed by the static (strictly Ohmic) bath.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SpectralModel;

/// Physical parameters of the two-oscillator machine.
///
/// Bath ν = 1 is Drude-Lorentz with coupling `gamma1` and cutoff `omega_c` and is
/// driven at `omega_drive` with relative phase `phi`; bath ν = 2 is strictly Ohmic
/// with coupling `gamma2` and static.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub mass: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega_c: f64,
    pub phi: f64,
    pub omega_drive: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Default for MachineParams {
    /// The strong-damping, small-cutoff isothermal point used throughout the figures.
    fn default() -> Self {
        Self {
            omega_a: 1.0,
            omega_b: 0.6,
            mass: 1.0,
            gamma1: 0.01,
            gamma2: 100.0,
            omega_c: 1.2,
            phi: std::f64::consts::FRAC_PI_2,
            omega_drive: 1.0,
            t1: 1.0,
            t2: 1.0,
        }
    }
}

impl MachineParams {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64); 9] = [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("mass", self.mass),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("omega_c", self.omega_c),
            ("omega_drive", self.omega_drive),
            ("t1", self.t1),
            ("t2", self.t2),
        ];
        for (name, value) in checks {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        if !(0.0..TAU).contains(&self.phi) {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: self.phi,
                reason: "must lie in [0, 2π)",
            });
        }
        if self.omega_a == self.omega_b {
            return Err(Error::InvalidParameter {
                name: "omega_b",
                value: self.omega_b,
                reason: "resonant oscillators (omega_a = omega_b) have no steady state",
            });
        }
        Ok(())
    }

    /// Wraps `phi` into [0, 2π).
    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi.rem_euclid(TAU);
        if self.phi >= TAU {
            self.phi = 0.0;
        }
        self
    }

    pub fn isothermal(mut self, t: f64) -> Self {
        self.t1 = t;
        self.t2 = t;
        self
    }

    /// Swaps the oscillator labels A ↔ B.
    pub fn mirrored(mut self) -> Self {
        std::mem::swap(&mut self.omega_a, &mut self.omega_b);
        self
    }

    /// Common frequency sqrt((ω_A² + ω_B²)/2) of the locked mode.
    pub fn omega_bar(&self) -> f64 {
        (0.5 * (self.omega_a.powi(2) + self.omega_b.powi(2))).sqrt()
    }

    pub fn bath1(&self) -> SpectralModel {
        SpectralModel::drude_lorentz(self.gamma1, self.omega_c).with_mass(self.mass)
    }

    pub fn bath2(&self) -> SpectralModel {
        SpectralModel::strict_ohmic(self.gamma2).with_mass(self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMatrix {
    pub omega: f64,
    pub aa: Complex64,
    pub ab: Complex64,
    pub ba: Complex64,
    pub bb: Complex64,
}

impl ResponseMatrix {
    pub fn imag(&self) -> [[f64; 2]; 2] {
        [[self.aa.im, self.ab.im], [self.ba.im, self.bb.im]]
    }

    pub fn conj(&self) -> Self {
        Self {
            omega: -self.omega,
            aa: self.aa.conj(),
            ab: self.ab.conj(),
            ba: self.ba.conj(),
            bb: self.bb.conj(),
        }
    }
}

/// 𝒟(ω) = (ω² − ω_A²)(ω² − ω_B²) + iω(2ω² − ω_A² − ω_B²)γ₂.
pub fn denominator(p: &MachineParams, omega: f64) -> Complex64 {
    let w2 = omega * omega;
    let a2 = p.omega_a * p.omega_a;
    let b2 = p.omega_b * p.omega_b;
    Complex64::new(
        (w2 - a2) * (w2 - b2),
        omega * (2.0 * w2 - a2 - b2) * p.gamma2,
    )
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn response_matrix(p: &MachineParams, omega: f64) -> Result<ResponseMatrix> {
    let d = denominator(p, omega);
    if !(d.norm_sqr() > f64::MIN_POSITIVE) {
        return Err(Error::Pole { omega });
    }
    let w2 = omega * omega;
    let damping = Complex64::new(0.0, omega * p.gamma2);
    let aa = -(Complex64::new(w2 - p.omega_b * p.omega_b, 0.0) + damping) / d;
    let bb = -(Complex64::new(w2 - p.omega_a * p.omega_a, 0.0) + damping) / d;
    let ab = damping / d;
    Ok(ResponseMatrix {
        omega,
        aa,
        ab,
        ba: ab,
        bb,
    })
}

/// χ_eff″(ω) = χ^(A,A)″ + χ^(B,B)″ + 2cos(φ)χ^(A,B)″, from the entrywise matrix.
pub fn chi_eff_imag(p: &MachineParams, omega: f64) -> f64 {
    match response_matrix(p, omega) {
        Ok(chi) => chi.aa.im + chi.bb.im + 2.0 * p.phi.cos() * chi.ab.im,
        Err(_) => 0.0,
    }
}

/// 𝒩(ω), the quadratic form in ω² with ω·χ_eff″ = γ₂ω²𝒩(ω)/|𝒟(ω)|².
pub fn passivity_numerator(p: &MachineParams, omega: f64) -> f64 {
    let w2 = omega * omega;
    let a2 = p.omega_a * p.omega_a;
    let b2 = p.omega_b * p.omega_b;
    2.0 * w2 * w2 + 2.0 * p.phi.cos() * (w2 - a2) * (w2 - b2) - 2.0 * w2 * (a2 + b2)
        + a2 * a2
        + b2 * b2
}

/// Discriminant of 𝒩 viewed as a quadratic in ω², −4(ω_A² − ω_B²)² sin²φ.
pub fn passivity_discriminant(p: &MachineParams) -> f64 {
    let a2 = p.omega_a * p.omega_a;
    let b2 = p.omega_b * p.omega_b;
    let c = p.phi.cos();
    // 𝒩 = (2 + 2c) u² − 2(1 + c)(a2 + b2) u + a2² + b2² + 2c·a2·b2 with u = ω²
    let qa = 2.0 + 2.0 * c;
    let qb = -2.0 * (1.0 + c) * (a2 + b2);
    let qc = a2 * a2 + b2 * b2 + 2.0 * c * a2 * b2;
    qb * qb - 4.0 * qa * qc
}

/// Closed-form cross-check of χ_eff″ through 𝒩(ω).
pub fn chi_eff_imag_closed_form(p: &MachineParams, omega: f64) -> f64 {
    p.gamma2 * omega * passivity_numerator(p, omega) / denominator(p, omega).norm_sqr()
}

/// Eigenvalues of the real symmetric matrix χ₂″(ω), ordered so that |major| ≥ |minor|.
pub fn chi_imag_eigenvalues(p: &MachineParams, omega: f64) -> (f64, f64) {
    let Ok(chi) = response_matrix(p, omega) else {
        return (0.0, 0.0);
    };
    let (a, b, c) = (chi.aa.im, chi.bb.im, chi.ab.im);
    let mean = 0.5 * (a + b);
    let radius = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    let (hi, lo) = (mean + radius, mean - radius);
    if hi.abs() >= lo.abs() {
        (hi, lo)
    } else {
        (lo, hi)
    }
}

/// The response functions that enter the thermodynamic integrals, in a form that is
/// regular at ω = 0: the imaginary parts divided by ω, plus Re χ^(A,B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ReducedResponse {
    pub aa_im_over_w: f64,
    pub bb_im_over_w: f64,
    pub ab_im_over_w: f64,
    pub ab_re: f64,
}

/// Beyond this |ω| every response function is below 1e-60 of its peak and is set to zero.
const RESPONSE_FAR_FIELD: f64 = 1e20;

impl ReducedResponse {
    #[inline]
    pub fn at(p: &MachineParams, omega: f64) -> Self {
        if omega.abs() > RESPONSE_FAR_FIELD {
            return Self {
                aa_im_over_w: 0.0,
                bb_im_over_w: 0.0,
                ab_im_over_w: 0.0,
                ab_re: 0.0,
            };
        }
        let w2 = omega * omega;
        let a2 = p.omega_a * p.omega_a;
        let b2 = p.omega_b * p.omega_b;
        let re = (w2 - a2) * (w2 - b2);
        let spread = 2.0 * w2 - a2 - b2;
        let im = omega * spread * p.gamma2;
        let inv = p.gamma2 / (re * re + im * im);
        Self {
            aa_im_over_w: (w2 - b2) * (w2 - b2) * inv,
            bb_im_over_w: (w2 - a2) * (w2 - a2) * inv,
            ab_im_over_w: re * inv,
            ab_re: w2 * p.gamma2 * spread * inv,
        }
    }

    #[inline]
    pub fn eff_im_over_w(&self, cos_phi: f64) -> f64 {
        self.aa_im_over_w + self.bb_im_over_w + 2.0 * cos_phi * self.ab_im_over_w
    }
}

/// Complex roots of 𝒟(ω) (Durand-Kerner), i.e. the poles of the response matrix.
///
/// All roots lie in the lower half plane for valid parameters. Their real parts and
/// widths seed the quadrature breakpoints.
pub fn response_poles(p: &MachineParams) -> [Complex64; 4] {
    let a2 = p.omega_a * p.omega_a;
    let b2 = p.omega_b * p.omega_b;
    let g = p.gamma2;
    let i = Complex64::i();
    // monic coefficients of ω⁴ + c3 ω³ + c2 ω² + c1 ω + c0
    let c3 = 2.0 * g * i;
    let c2 = Complex64::new(-(a2 + b2), 0.0);
    let c1 = -g * (a2 + b2) * i;
    let c0 = Complex64::new(a2 * b2, 0.0);
    let eval = |z: Complex64| (((z + c3) * z + c2) * z + c1) * z + c0;

    let scale = 1.0 + g + p.omega_a.max(p.omega_b);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots = [
        seed.powu(0) * scale,
        seed.powu(1) * scale,
        seed.powu(2) * scale,
        seed.powu(3) * scale,
    ];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for k in 0..4 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != k {
                    den *= roots[k] - roots[j];
                }
            }
            if den.norm_sqr() == 0.0 {
                den = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = eval(roots[k]) / den;
            roots[k] -= step;
            delta = delta.max(step.norm() / (1.0 + roots[k].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig(gamma2: f64) -> MachineParams {
        MachineParams {
            gamma2,
            ..MachineParams::default()
        }
    }

    #[test]
    fn denominator_examples() {
        let p = fig(100.0);
        let d0 = denominator(&p, 0.0);
        assert_relative_eq!(d0.re, 0.36, max_relative = 1e-15);
        assert_eq!(d0.im, 0.0);
        let wbar = 0.68f64.sqrt();
        let d = denominator(&p, wbar);
        assert_relative_eq!(d.re, -0.1024, max_relative = 1e-12);
        assert!(d.im.abs() < 1e-12);
        // term-by-term at ω = 0.3: (0.09 − 1)(0.09 − 0.36) = 0.2457,
        // 0.3·(0.18 − 1.36)·100 = −35.4
        let d = denominator(&p, 0.3);
        assert_relative_eq!(d.re, 0.2457, max_relative = 1e-13);
        assert_relative_eq!(d.im, -35.4, max_relative = 1e-13);
    }

    #[test]
    fn static_limit() {
        let p = fig(100.0);
        let chi = response_matrix(&p, 0.0).unwrap();
        assert_relative_eq!(chi.aa.re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(chi.bb.re, 1.0 / 0.36, max_relative = 1e-15);
        assert_eq!(chi.ab, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn off_diagonal_at_common_frequency() {
        let p = fig(100.0);
        let wbar = p.omega_bar();
        let chi = response_matrix(&p, wbar).unwrap();
        let expected = wbar * 100.0 / -0.1024;
        assert!(chi.ab.re.abs() < 1e-9 * chi.ab.im.abs());
        assert_relative_eq!(chi.ab.im, expected, max_relative = 1e-10);
        assert!((chi.ab.im + 805.3).abs() < 0.1);
        assert_eq!(chi.ab, chi.ba);
    }

    #[test]
    fn conjugation_symmetry() {
        let p = fig(3.0);
        let plus = response_matrix(&p, 0.7).unwrap();
        let minus = response_matrix(&p, -0.7).unwrap();
        assert_eq!(minus.aa, plus.conj().aa);
        assert_eq!(minus.ab, plus.conj().ab);
        assert_eq!(minus.bb, plus.conj().bb);
    }

    #[test]
    fn chi_eff_examples() {
        let p = fig(100.0);
        assert_eq!(chi_eff_imag(&p, 0.0), 0.0);
        let chi = response_matrix(&p, 0.5).unwrap();
        let entrywise = chi_eff_imag(&p, 0.5);
        // cos(π/2) is 6e-17, so the cross term is gone up to rounding
        assert_relative_eq!(entrywise, chi.aa.im + chi.bb.im, max_relative = 1e-14);
        assert_relative_eq!(
            entrywise,
            chi_eff_imag_closed_form(&p, 0.5),
            max_relative = 1e-12
        );
    }

    #[test]
    fn reduced_response_matches_entrywise() {
        for &(g, w) in &[(100.0, 0.5), (0.01, 0.61), (2.0, -3.3), (7.0, 25.0)] {
            let p = fig(g).with_phi(0.3);
            let chi = response_matrix(&p, w).unwrap();
            let r = ReducedResponse::at(&p, w);
            assert_relative_eq!(r.aa_im_over_w * w, chi.aa.im, max_relative = 1e-12);
            assert_relative_eq!(r.bb_im_over_w * w, chi.bb.im, max_relative = 1e-12);
            assert_relative_eq!(r.ab_im_over_w * w, chi.ab.im, max_relative = 1e-12);
            assert_relative_eq!(r.ab_re, chi.ab.re, max_relative = 1e-12);
        }
    }

    #[test]
    fn eigenvalues_at_zero() {
        assert_eq!(chi_imag_eigenvalues(&fig(100.0), 0.0), (0.0, 0.0));
    }

    #[test]
    fn eigenvalue_closed_form_matches_characteristic_polynomial() {
        let p = fig(1.0);
        for &w in &[0.3, 0.7, 0.95, 2.0] {
            let (l1, l2) = chi_imag_eigenvalues(&p, w);
            let m = response_matrix(&p, w).unwrap().imag();
            let tr = m[0][0] + m[1][1];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert_relative_eq!(l1 + l2, tr, epsilon = 1e-12 * tr.abs().max(1.0));
            let scale = (m[0][0] * m[1][1]).abs() + m[0][1] * m[0][1];
            assert_relative_eq!(l1 * l2, det, epsilon = 1e-12 * scale);
            assert!(l1.abs() >= l2.abs());
        }
    }

    #[test]
    fn discriminant_vanishes_without_phase() {
        let p = fig(1.0).with_phi(0.0);
        assert!(passivity_discriminant(&p).abs() < 1e-12);
        let q = fig(1.0).with_phi(1.1);
        let expected = -4.0 * (1.0f64 - 0.36).powi(2) * 1.1f64.sin().powi(2);
        assert_relative_eq!(passivity_discriminant(&q), expected, max_relative = 1e-12);
    }

    #[test]
    fn poles_are_roots_in_lower_half_plane() {
        for &g in &[0.01, 1.0, 100.0] {
            let p = fig(g);
            for z in response_poles(&p) {
                let w2 = z * z;
                let d = (w2 - 1.0) * (w2 - 0.36) + Complex64::i() * z * (2.0 * w2 - 1.36) * g;
                assert!(d.norm() < 1e-9 * (1.0 + z.norm().powi(4)), "g={g} z={z}");
                assert!(z.im < 0.0);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(MachineParams::default().validate().is_ok());
        for p in [
            MachineParams {
                omega_b: 1.0,
                ..Default::default()
            },
            MachineParams {
                phi: TAU,
                ..Default::default()
            },
            MachineParams {
                t2: 0.0,
                ..Default::default()
            },
        ] {
            assert!(p.validate().is_err());
        }
        assert!(MachineParams::default().with_phi(-0.5).validate().is_ok());
    }

    #[test]
    fn omega_bar_between_frequencies() {
        let p = MachineParams::default();
        let wbar = p.omega_bar();
        assert!(p.omega_b < wbar && wbar < p.omega_a);
        assert_relative_eq!(wbar, 0.8246211251235321, max_relative = 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = MachineParams> {
            (0.2f64..0.9, -2.0f64..2.0, 0.0f64..TAU).prop_map(|(wb, lg, phi)| MachineParams {
                omega_b: wb,
                gamma2: 10f64.powf(lg),
                phi,
                ..MachineParams::default()
            })
        }

        proptest! {
            #[test]
            fn entrywise_parity(p in params(), w in 1e-3f64..50.0) {
                let plus = response_matrix(&p, w).unwrap();
                let minus = response_matrix(&p, -w).unwrap();
                for (x, y) in [(plus.aa, minus.aa), (plus.ab, minus.ab), (plus.bb, minus.bb)] {
                    prop_assert!((x.re - y.re).abs() <= 1e-14 * x.norm());
                    prop_assert!((x.im + y.im).abs() <= 1e-14 * x.norm());
                }
            }

            #[test]
            fn effective_passivity(p in params(), w in -50.0f64..50.0) {
                prop_assert!(w * chi_eff_imag(&p, w) >= -1e-14 * response_matrix(&p, w).unwrap().ab.norm());
                prop_assert!(passivity_numerator(&p, w) >= -1e-12);
                prop_assert!(passivity_discriminant(&p) <= 1e-12);
                let chi = response_matrix(&p, w).unwrap();
                prop_assert!(w * chi.aa.im >= 0.0);
                prop_assert!(w * chi.bb.im >= 0.0);
            }

            #[test]
            fn closed_form_agrees(p in params(), w in -20.0f64..20.0) {
                let a = chi_eff_imag(&p, w);
                let b = chi_eff_imag_closed_form(&p, w);
                let scale = response_matrix(&p, w).unwrap().aa.norm()
                    + response_matrix(&p, w).unwrap().bb.norm();
                prop_assert!((a - b).abs() <= 1e-11 * scale);
            }
        }
    }

    #[test]
    fn large_frequency_decay() {
        let p = fig(5.0);
        let r3 = response_matrix(&p, 1e3).unwrap();
        let r4 = response_matrix(&p, 1e4).unwrap();
        for (x, y) in [(r3.aa, r4.aa), (r3.bb, r4.bb)] {
            // O(ω⁻²): ten times the frequency, a hundredth of the magnitude
            let ratio = x.norm() / y.norm();
            assert!((ratio - 100.0).abs() < 2.0, "ratio {ratio}");
        }
        // the off-diagonal decays faster than ω⁻²
        assert!(r3.ab.norm() / r4.ab.norm() >= 100.0);
    }
}
