//! Threshold driving frequency above which the local TUR for oscillator A stays
//! violated.

use crate::error::{Error, Result};
use crate::observables::thermo_report;
use crate::quadrature::QuadratureConfig;
use crate::response::MachineParams;

use super::logspace;

pub const THRESHOLD_SCAN_POINTS: usize = 64;
const BISECTION_WIDTH: f64 = 1e-3;

/// `Some(true)` when Q_PA < 2, `Some(false)` when Q_PA ≥ 2, `None` when undefined.
fn violated(base: &MachineParams, omega: f64, cfg: &QuadratureConfig) -> Result<Option<bool>> {
    let p = MachineParams {
        omega_drive: omega,
        ..*base
    };
    Ok(thermo_report(&p, cfg)?.q_pa.map(|q| q < 2.0))
}

/// Lowest Ω in `range` above which Q_PA < 2 holds at every scanned frequency up to
/// the upper end.
///
/// A 64-point log-spaced scan brackets the last transition into the violated
/// region, then bisection in log Ω narrows it to a relative width of 1e-3 and the
/// geometric midpoint is returned. Undefined Q_PA counts as not violated. `None`
/// when the scan ends outside the violated region, and also when every scanned
/// point is violated, since no crossing is bracketed.
pub fn find_threshold_frequency(
    base: &MachineParams,
    range: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<Option<f64>> {
    let (lo, hi) = range;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidSweep(
            "threshold range must satisfy 0 < lo < hi".into(),
        ));
    }
    let grid = logspace(lo, hi, THRESHOLD_SCAN_POINTS);
    let flags = grid
        .iter()
        .map(|&w| Ok(violated(base, w, cfg)? == Some(true)))
        .collect::<Result<Vec<bool>>>()?;
    let Some(first) = flags.iter().rposition(|v| !v).map(|i| i + 1) else {
        return Ok(None);
    };
    if first == grid.len() {
        return Ok(None);
    }
    let (mut a, mut b) = (grid[first - 1], grid[first]);
    while b / a - 1.0 > BISECTION_WIDTH {
        let mid = (a * b).sqrt();
        if violated(base, mid, cfg)? == Some(true) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some((a * b).sqrt()))
}
