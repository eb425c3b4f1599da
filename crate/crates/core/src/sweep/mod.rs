//! Parameter grids over one or two axes, evaluated row by row.
//!
//! A row of the grid is one value of the first axis; rows run concurrently when the
//! `parallel` feature is enabled, and results are gathered in row-major order so the
//! output never depends on the thread count.

mod export;
pub mod presets;
mod threshold;

pub use export::{export, import_json, to_csv_string, to_json_string, Format};
pub use threshold::{find_threshold_frequency, THRESHOLD_SCAN_POINTS};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{sync_report, thermo_report, SyncReport, ThermoReport};
use crate::quadrature::QuadratureConfig;
use crate::response::{chi_eff_imag, chi_imag_eigenvalues, MachineParams};

/// A sweepable parameter.
///
/// `T` sets both temperatures. `Tbar` and `DtRel` are the mean temperature and the
/// relative difference (T₁ − T₂)/T̄, so T₁ = T̄(1 + r/2) and T₂ = T̄(1 − r/2); the
/// coordinate not on an axis keeps the value implied by the base point. `Omega` is
/// the probe frequency of the spectral quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SweepParam {
    OmegaB,
    Gamma1,
    Gamma2,
    OmegaC,
    Phi,
    OmegaDrive,
    T1,
    T2,
    T,
    Tbar,
    DtRel,
    Omega,
}

impl SweepParam {
    pub const ALL: [SweepParam; 12] = [
        Self::OmegaB,
        Self::Gamma1,
        Self::Gamma2,
        Self::OmegaC,
        Self::Phi,
        Self::OmegaDrive,
        Self::T1,
        Self::T2,
        Self::T,
        Self::Tbar,
        Self::DtRel,
        Self::Omega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OmegaB => "omega_b",
            Self::Gamma1 => "gamma1",
            Self::Gamma2 => "gamma2",
            Self::OmegaC => "omega_c",
            Self::Phi => "phi",
            Self::OmegaDrive => "omega_drive",
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::T => "t",
            Self::Tbar => "tbar",
            Self::DtRel => "dt_rel",
            Self::Omega => "omega",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown sweep parameter `{s}`")))
    }
}

impl From<SweepParam> for String {
    fn from(p: SweepParam) -> String {
        p.name().to_owned()
    }
}

impl TryFrom<String> for SweepParam {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }
}

/// `n` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

pub const SPECTRUM_FIELDS: &[&str] = &["lambda_major", "lambda_minor", "chi_eff_imag"];
pub const THRESHOLD_FIELD: &str = "omega_th";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Thermo,
    Sync,
    Spectrum,
    Threshold,
}

fn kind_of(q: &str) -> Result<Kind> {
    if ThermoReport::FIELDS.contains(&q) {
        Ok(Kind::Thermo)
    } else if SyncReport::FIELDS.contains(&q) {
        Ok(Kind::Sync)
    } else if SPECTRUM_FIELDS.contains(&q) {
        Ok(Kind::Spectrum)
    } else if q == THRESHOLD_FIELD {
        Ok(Kind::Threshold)
    } else {
        Err(Error::UnknownQuantity(q.to_owned()))
    }
}

/// Every quantity name a sweep can export.
pub fn known_quantities() -> Vec<&'static str> {
    ThermoReport::FIELDS
        .iter()
        .chain(SyncReport::FIELDS)
        .chain(SPECTRUM_FIELDS)
        .copied()
        .chain(std::iter::once(THRESHOLD_FIELD))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: MachineParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub quantities: Vec<String>,
    pub cfg: QuadratureConfig,
    /// Ω bracket searched for `omega_th`.
    pub threshold_range: (f64, f64),
}

impl SweepSpec {
    pub fn new(
        base: MachineParams,
        axis1: Axis,
        axis2: Option<Axis>,
        quantities: Vec<String>,
    ) -> Self {
        Self {
            base,
            axis1,
            axis2,
            quantities,
            cfg: QuadratureConfig::default(),
            threshold_range: (0.1, 1000.0),
        }
    }

    fn axes(&self) -> impl Iterator<Item = &Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref())
    }

    fn kinds(&self) -> Result<Vec<Kind>> {
        self.quantities.iter().map(|q| kind_of(q)).collect()
    }

    pub fn len(&self) -> usize {
        self.axis1.values.len() * self.axis2.as_ref().map_or(1, |a| a.values.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameters at grid point (axis1 = `x`, axis2 = `y`) plus the probe frequency
    /// when an `omega` axis is present.
    pub fn point(&self, x: f64, y: Option<f64>) -> (MachineParams, Option<f64>) {
        let mut p = self.base;
        let mut tbar = 0.5 * (p.t1 + p.t2);
        let mut rel = (p.t1 - p.t2) / tbar;
        let mut probe = None;
        let values = std::iter::once((self.axis1.param, x))
            .chain(self.axis2.as_ref().map(|a| a.param).zip(y));
        for (param, v) in values {
            match param {
                SweepParam::OmegaB => p.omega_b = v,
                SweepParam::Gamma1 => p.gamma1 = v,
                SweepParam::Gamma2 => p.gamma2 = v,
                SweepParam::OmegaC => p.omega_c = v,
                SweepParam::Phi => p.phi = v,
                SweepParam::OmegaDrive => p.omega_drive = v,
                SweepParam::T1 => p.t1 = v,
                SweepParam::T2 => p.t2 = v,
                SweepParam::T => {
                    p.t1 = v;
                    p.t2 = v;
                }
                SweepParam::Tbar | SweepParam::DtRel => {
                    if param == SweepParam::Tbar {
                        tbar = v;
                    } else {
                        rel = v;
                    }
                    p.t1 = tbar * (1.0 + 0.5 * rel);
                    p.t2 = tbar * (1.0 - 0.5 * rel);
                }
                SweepParam::Omega => probe = Some(v),
            }
        }
        (p, probe)
    }

    pub fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            return Err(Error::NoQuantities);
        }
        let kinds = self.kinds()?;
        self.cfg.validate()?;
        let mut seen = Vec::new();
        for axis in self.axes() {
            if seen.contains(&axis.param) {
                return Err(Error::InvalidSweep(format!(
                    "axis `{}` given twice",
                    axis.param
                )));
            }
            seen.push(axis.param);
            if axis.values.is_empty() {
                return Err(Error::InvalidSweep(format!(
                    "axis `{}` is empty",
                    axis.param
                )));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSweep(format!(
                    "axis `{}` has non-finite values",
                    axis.param
                )));
            }
            if axis.values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSweep(format!(
                    "axis `{}` must be strictly increasing",
                    axis.param
                )));
            }
        }
        let temps = [
            SweepParam::T,
            SweepParam::T1,
            SweepParam::T2,
            SweepParam::Tbar,
            SweepParam::DtRel,
        ];
        if seen.iter().filter(|p| temps.contains(p)).count() > 1
            && !(seen.contains(&SweepParam::Tbar) && seen.contains(&SweepParam::DtRel))
            && !(seen.contains(&SweepParam::T1) && seen.contains(&SweepParam::T2))
        {
            return Err(Error::InvalidSweep("conflicting temperature axes".into()));
        }
        let has_probe = seen.contains(&SweepParam::Omega);
        let wants_spectrum = kinds.contains(&Kind::Spectrum);
        if has_probe != wants_spectrum {
            return Err(Error::InvalidSweep(
                "an `omega` axis goes with spectral quantities and only with them".into(),
            ));
        }
        if has_probe && kinds.iter().any(|k| *k != Kind::Spectrum) {
            return Err(Error::InvalidSweep(
                "spectral quantities cannot be mixed with other quantities".into(),
            ));
        }
        if kinds.contains(&Kind::Threshold) {
            if seen.contains(&SweepParam::OmegaDrive) {
                return Err(Error::InvalidSweep(
                    "`omega_th` cannot be swept over omega_drive".into(),
                ));
            }
            let (lo, hi) = self.threshold_range;
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::InvalidSweep(
                    "threshold range must satisfy 0 < lo < hi".into(),
                ));
            }
        }
        for &x in &self.axis1.values {
            let ys: Vec<Option<f64>> = match &self.axis2 {
                Some(a) => a.values.iter().copied().map(Some).collect(),
                None => vec![None],
            };
            for y in ys {
                let (p, _) = self.point(x, y);
                if !(p.t1 > 0.0 && p.t2 > 0.0) {
                    return Err(Error::InvalidSweep(format!(
                        "non-positive temperature (t1 = {}, t2 = {}) on the grid",
                        p.t1, p.t2
                    )));
                }
                if kinds.contains(&Kind::Threshold) {
                    // Ω comes from the threshold search
                    MachineParams {
                        omega_drive: self.threshold_range.0,
                        ..p
                    }
                    .validate()?;
                } else {
                    p.validate()?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    /// One entry per requested quantity; `None` where undefined.
    pub values: Vec<Option<f64>>,
    pub converged: bool,
    /// Names of the integrals that missed their tolerance at this point.
    pub unconverged: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn column(&self, quantity: &str) -> Option<Vec<Option<f64>>> {
        let i = self.spec.quantities.iter().position(|q| q == quantity)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

fn evaluate(spec: &SweepSpec, kinds: &[Kind], x: f64, y: Option<f64>) -> Result<SweepRow> {
    let (p, probe) = spec.point(x, y);
    let mut unconverged = Vec::new();
    let thermo = if kinds.contains(&Kind::Thermo) {
        let r = thermo_report(&p, &spec.cfg)?;
        unconverged.extend(
            r.integrals
                .iter()
                .filter(|s| !s.converged)
                .map(|s| s.name.clone()),
        );
        Some(r)
    } else {
        None
    };
    let sync = if kinds.contains(&Kind::Sync) {
        let r = sync_report(&p, &spec.cfg)?;
        unconverged.extend(
            r.integrals
                .iter()
                .filter(|s| !s.converged)
                .map(|s| s.name.clone()),
        );
        Some(r)
    } else {
        None
    };
    let threshold = if kinds.contains(&Kind::Threshold) {
        let (lo, hi) = spec.threshold_range;
        Some(find_threshold_frequency(&p, (lo, hi), &spec.cfg)?)
    } else {
        None
    };
    let values = spec
        .quantities
        .iter()
        .zip(kinds)
        .map(|(q, k)| match k {
            Kind::Thermo => thermo.as_ref().and_then(|r| r.get(q).flatten()),
            Kind::Sync => sync.as_ref().and_then(|r| r.get(q)),
            Kind::Spectrum => {
                let w = probe.unwrap_or(0.0);
                let (major, minor) = chi_imag_eigenvalues(&p, w);
                Some(match q.as_str() {
                    "lambda_major" => major,
                    "lambda_minor" => minor,
                    _ => chi_eff_imag(&p, w),
                })
            }
            Kind::Threshold => threshold.flatten(),
        })
        .collect();
    Ok(SweepRow {
        axis1: x,
        axis2: y,
        values,
        converged: unconverged.is_empty(),
        unconverged,
    })
}

fn evaluate_line(spec: &SweepSpec, kinds: &[Kind], x: f64) -> Result<Vec<SweepRow>> {
    match &spec.axis2 {
        Some(a) => a
            .values
            .iter()
            .map(|&y| evaluate(spec, kinds, x, Some(y)))
            .collect(),
        None => Ok(vec![evaluate(spec, kinds, x, None)?]),
    }
}

/// Evaluates every grid point. Non-convergence is recorded per row; only invalid
/// specs are errors.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let kinds = spec.kinds()?;
    let line = |&x: &f64| evaluate_line(spec, &kinds, x);
    #[cfg(feature = "parallel")]
    let lines: Vec<Result<Vec<SweepRow>>> = {
        use rayon::prelude::*;
        spec.axis1.values.par_iter().map(line).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let lines: Vec<Result<Vec<SweepRow>>> = spec.axis1.values.iter().map(line).collect();
    let mut rows = Vec::with_capacity(spec.len());
    for l in lines {
        rows.extend(l?);
    }
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool when
/// `threads` is 0. Without the `parallel` feature `f` simply runs inline.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidSweep(format!("cannot start {threads} threads: {e}")))?;
        return Ok(pool.install(f));
    }
    let _ = threads;
    Ok(f())
}

pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    with_threads(threads, || run_sweep(spec))?
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepSpec {
        SweepSpec::new(
            MachineParams::default(),
            Axis::new(SweepParam::OmegaDrive, logspace(0.1, 100.0, 3)),
            Some(Axis::new(SweepParam::T, vec![0.2, 1.0])),
            vec!["P_A".into(), "Q_PA".into(), "pearson_C".into()],
        )
    }

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = logspace(1e-2, 1e3, 6);
        assert_eq!((g[0], g[5]), (1e-2, 1e3));
        assert!((g[2] - 1.0).abs() < 1e-12);
        assert_eq!(logspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn param_names_round_trip() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        assert_eq!(
            "omega-drive".parse::<SweepParam>().unwrap(),
            SweepParam::OmegaDrive
        );
        assert!("omega_a".parse::<SweepParam>().is_err());
    }

    #[test]
    fn derived_temperature_axes() {
        let mut spec = small();
        spec.axis1 = Axis::new(SweepParam::Tbar, vec![1.0, 2.0]);
        spec.axis2 = Some(Axis::new(SweepParam::DtRel, vec![0.0, 1.8]));
        let (p, _) = spec.point(2.0, Some(1.8));
        assert!((p.t1 - 3.8).abs() < 1e-15 && (p.t2 - 0.2).abs() < 1e-15);
        // the off-axis coordinate comes from the base point
        spec.axis2 = None;
        spec.base.t1 = 1.5;
        spec.base.t2 = 0.5;
        let (p, _) = spec.point(2.0, None);
        assert!((p.t1 - 3.0).abs() < 1e-15 && (p.t2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut s = small();
        s.quantities.clear();
        assert_eq!(
            s.validate().unwrap_err().to_string(),
            "no quantities selected"
        );
        let mut s = small();
        s.quantities.push("bogus".into());
        assert!(matches!(s.validate(), Err(Error::UnknownQuantity(_))));
        let mut s = small();
        s.axis1.values = vec![1.0, 1.0];
        assert!(s.validate().is_err());
        let mut s = small();
        s.axis2 = Some(Axis::new(SweepParam::DtRel, vec![1.0, 2.5]));
        assert!(s.validate().is_err());
        let mut s = small();
        s.axis1 = Axis::new(SweepParam::Omega, vec![0.5]);
        assert!(s.validate().is_err());
        assert!(small().validate().is_ok());
    }

    #[test]
    fn degenerate_sweep_equals_point_call() {
        let mut s = small();
        s.axis1.values = vec![20.0];
        s.axis2 = None;
        let res = run_sweep(&s).unwrap();
        assert_eq!(res.rows.len(), 1);
        let direct = thermo_report(
            &MachineParams {
                omega_drive: 20.0,
                ..s.base
            },
            &s.cfg,
        )
        .unwrap();
        assert_eq!(res.rows[0].values[0], Some(direct.p_a));
        assert_eq!(res.rows[0].values[1], direct.q_pa);
    }

    #[test]
    fn row_major_and_thread_independent() {
        let s = small();
        let one = run_sweep_with_threads(&s, 1).unwrap();
        let four = run_sweep_with_threads(&s, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.rows.len(), 6);
        assert_eq!((one.rows[1].axis1, one.rows[1].axis2), (0.1, Some(1.0)));
        assert_eq!(one.rows[2].axis1, s.axis1.values[1]);
    }

    #[test]
    fn spectrum_quantities() {
        let s = SweepSpec::new(
            MachineParams::default(),
            Axis::new(SweepParam::Omega, linspace(0.1, 2.0, 5)),
            Some(Axis::new(SweepParam::Gamma2, vec![0.01, 100.0])),
            vec!["lambda_major".into(), "lambda_minor".into()],
        );
        let res = run_sweep(&s).unwrap();
        assert_eq!(res.rows.len(), 10);
        assert!(res
            .rows
            .iter()
            .all(|r| r.values.iter().all(Option::is_some)));
    }
}
