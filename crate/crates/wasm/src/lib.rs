//! Browser bindings for the interactive demo page in `www/`.
//!
//! Every function returns a flat row-major `Float64Array`; the column layout is
//! given in each doc comment. Undefined values are NaN.

use synctur::response::chi_imag_eigenvalues;
use synctur::sweep::{linspace, logspace};
use synctur::{sync_report, thermo_report, Error, MachineParams, QuadratureConfig, Result};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 4096;

fn check_points(points: usize) -> Result<()> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "points",
            value: points as f64,
            reason: "must lie between 2 and 4096",
        })
    }
}

fn check_range(name: &'static str, lo: f64, hi: f64) -> Result<()> {
    if lo > 0.0 && hi > lo && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: lo,
            reason: "range must satisfy 0 < min < max",
        })
    }
}

fn params(omega_b: f64, gamma2: f64) -> MachineParams {
    MachineParams {
        omega_b,
        gamma2,
        ..MachineParams::default()
    }
}

pub fn spectrum_rows(omega_b: f64, gamma2: f64, omega_max: f64, points: usize) -> Result<Vec<f64>> {
    check_points(points)?;
    check_range("omega_max", 1e-3, omega_max)?;
    let p = params(omega_b, gamma2);
    p.validate()?;
    let mut out = Vec::with_capacity(3 * points);
    for w in linspace(omega_max / points as f64, omega_max, points) {
        let (major, minor) = chi_imag_eigenvalues(&p, w);
        out.extend([w, major, minor]);
    }
    Ok(out)
}

pub fn pearson_rows(
    omega_b: f64,
    gamma2: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>> {
    check_points(points)?;
    check_range("t_min", t_min, t_max)?;
    let cfg = QuadratureConfig::default();
    let mut out = Vec::with_capacity(3 * points);
    for t in logspace(t_min, t_max, points) {
        let s = sync_report(&params(omega_b, gamma2).isothermal(t), &cfg)?;
        out.extend([t, s.pearson_c, s.pearson_tilde]);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn tur_rows(
    omega_c: f64,
    gamma2: f64,
    t1: f64,
    t2: f64,
    phi: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<Vec<f64>> {
    check_points(points)?;
    check_range("omega_min", omega_min, omega_max)?;
    let cfg = QuadratureConfig::default();
    let base = MachineParams {
        omega_c,
        gamma2,
        t1,
        t2,
        ..MachineParams::default()
    }
    .with_phi(phi);
    let mut out = Vec::with_capacity(4 * points);
    for w in logspace(omega_min, omega_max, points) {
        let r = thermo_report(
            &MachineParams {
                omega_drive: w,
                ..base
            },
            &cfg,
        )?;
        out.extend([
            w,
            r.p_a,
            r.q_pa.unwrap_or(f64::NAN),
            r.q_p.unwrap_or(f64::NAN),
        ]);
    }
    Ok(out)
}

fn js(r: Result<Vec<f64>>) -> std::result::Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Columns `[ω, λ_major, λ_minor]`: eigenvalues of the imaginary part of the
/// response matrix on ω ∈ (0, omega_max].
#[wasm_bindgen(js_name = susceptibilitySpectrum)]
pub fn susceptibility_spectrum(
    omega_b: f64,
    gamma2: f64,
    omega_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(spectrum_rows(omega_b, gamma2, omega_max, points))
}

/// Columns `[T, C, C̃]`: Pearson and Pearson-like coefficients over a log grid of
/// bath temperatures.
#[wasm_bindgen(js_name = pearsonCurve)]
pub fn pearson_curve(
    omega_b: f64,
    gamma2: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(pearson_rows(omega_b, gamma2, t_min, t_max, points))
}

/// Columns `[Ω, P_A, Q_PA, Q_P]` over a log grid of driving frequencies.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = localTurCurve)]
pub fn local_tur_curve(
    omega_c: f64,
    gamma2: f64,
    t1: f64,
    t2: f64,
    phi: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(tur_rows(
        omega_c, gamma2, t1, t2, phi, omega_min, omega_max, points,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_layout_and_peak() {
        let rows = spectrum_rows(0.6, 100.0, 2.0, 400).unwrap();
        assert_eq!(rows.len(), 1200);
        let peak = rows
            .chunks(3)
            .max_by(|a, b| a[1].abs().total_cmp(&b[1].abs()))
            .unwrap()[0];
        assert!((peak - 0.68f64.sqrt()).abs() < 0.02);
    }

    #[test]
    fn pearson_is_negative_at_strong_damping() {
        let rows = pearson_rows(0.6, 100.0, 0.01, 10.0, 4).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows[1] < -0.8);
        assert!(rows[10].abs() < rows[1].abs());
    }

    #[test]
    fn tur_curve_marks_undefined_as_nan() {
        let rows = tur_rows(
            1.2,
            100.0,
            0.1,
            0.1,
            std::f64::consts::FRAC_PI_2,
            100.0,
            1000.0,
            3,
        )
        .unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows[10] < 2.0, "Q_PA at the diabatic corner");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(spectrum_rows(1.0, 100.0, 2.0, 10).is_err());
        assert!(pearson_rows(0.6, 100.0, 1.0, 0.5, 10).is_err());
        assert!(tur_rows(1.2, 100.0, 1.0, 1.0, 0.0, 1.0, 10.0, 1).is_err());
    }
}
