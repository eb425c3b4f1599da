//! Named sweeps that produce the data behind each figure.
//!
//! All presets start from [`MachineParams::default`] (ω_B = 0.6, γ₁ = 0.01,
//! γ₂ = 100, ω_c = 1.2, φ = π/2) and take the grid resolution `n` for their
//! continuous axes. Axis ranges are chosen to contain the regimes each figure
//! describes.

use crate::error::{Error, Result};
use crate::response::MachineParams;

use super::{linspace, logspace, Axis, SweepParam, SweepSpec};

pub const PRESETS: [&str; 7] = [
    "fig2a", "fig2b", "fig3", "fig4", "supfig1", "supfig3", "supfig4",
];
pub const DEFAULT_RESOLUTION: usize = 64;
pub const DAMPINGS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

fn qs(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| (*s).to_owned()).collect()
}

/// Base point for the strong-gradient presets: T̄ = 1 and (T₁ − T₂)/T̄ = 1.8.
pub fn gradient_base() -> MachineParams {
    MachineParams {
        t1: 1.9,
        t2: 0.1,
        ..MachineParams::default()
    }
}

/// The sweep for preset `name` on an `n`-point resolution.
///
/// * `fig2a`: eigenvalues of χ″(ω) over ω ∈ [0.005, 2] for each γ₂ in [`DAMPINGS`].
/// * `fig2b`: Pearson coefficient over T₂ ∈ [0.01, 10] for each γ₂.
/// * `fig3`: powers and TUR quantifiers over Ω ∈ [0.01, 1000] × T ∈ [0.01, 10], isothermal.
/// * `fig4`: the same over Ω × T̄ ∈ [0.1, 10] at (T₁ − T₂)/T̄ = 1.8.
/// * `supfig1`: efficiency and local powers over Ω × T, isothermal.
/// * `supfig3`: local quantities over Ω × (T₁ − T₂)/T̄ ∈ [−1.8, 1.8] at T̄ = 1.
/// * `supfig4`: threshold frequency over T̄ ∈ [0.5, 2] for (T₁ − T₂)/T̄ ∈ {0, 0.9, 1.8}.
pub fn preset(name: &str, n: usize) -> Result<SweepSpec> {
    if n < 2 {
        return Err(Error::InvalidSweep(
            "preset resolution must be at least 2".into(),
        ));
    }
    let base = MachineParams::default();
    let drive = || Axis::new(SweepParam::OmegaDrive, logspace(1e-2, 1e3, n));
    let spec = match name {
        "fig2a" => SweepSpec::new(
            base,
            Axis::new(SweepParam::Omega, linspace(0.005, 2.0, n)),
            Some(Axis::new(SweepParam::Gamma2, DAMPINGS.to_vec())),
            qs(&["lambda_major", "lambda_minor"]),
        ),
        "fig2b" => SweepSpec::new(
            base,
            Axis::new(SweepParam::T2, logspace(1e-2, 10.0, n)),
            Some(Axis::new(SweepParam::Gamma2, DAMPINGS.to_vec())),
            qs(&["pearson_C", "pearson_tilde"]),
        ),
        "fig3" => SweepSpec::new(
            base,
            drive(),
            Some(Axis::new(SweepParam::T, logspace(1e-2, 10.0, n))),
            qs(&["P_A", "Q_PA", "P", "Q_P"]),
        ),
        "fig4" => SweepSpec::new(
            gradient_base(),
            drive(),
            Some(Axis::new(SweepParam::Tbar, logspace(0.1, 10.0, n))),
            qs(&["P_A", "Q_PA", "P", "Q_P"]),
        ),
        "supfig1" => SweepSpec::new(
            base,
            drive(),
            Some(Axis::new(SweepParam::T, logspace(1e-2, 10.0, n))),
            qs(&["P_A", "P_B", "eta"]),
        ),
        "supfig3" => SweepSpec::new(
            base,
            drive(),
            Some(Axis::new(SweepParam::DtRel, linspace(-1.8, 1.8, n))),
            qs(&["P_A", "Q_PA", "P_B", "Q_PB"]),
        ),
        "supfig4" => SweepSpec::new(
            gradient_base(),
            Axis::new(SweepParam::Tbar, linspace(0.5, 2.0, n)),
            Some(Axis::new(SweepParam::DtRel, vec![0.0, 0.9, 1.8])),
            qs(&["omega_th"]),
        ),
        other => {
            return Err(Error::InvalidSweep(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(spec)
}
