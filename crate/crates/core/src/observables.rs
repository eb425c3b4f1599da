//! Period-averaged thermodynamic observables and synchronization measures at a
//! single parameter point.
//!
//! All frequency integrals run over the whole real line with measure dω/(4πm).
//! The integrands are assembled from pieces that are regular at the removable
//! points ω = 0 and ω = −Ω:
//!
//! * 𝒥₁(x)/x with x = ω + Ω,
//! * χ″(ω)/ω for the three independent response entries,
//! * x·ω·N(ω, Ω) and its coth(λ) and λ weighted versions (see [`crate::thermal`]),
//! * x·coth(x/2T₁) and ω·coth(ω/2T₂).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real_line_vec, IntegralResult, QuadratureConfig};
use crate::response::{response_poles, MachineParams, ReducedResponse};
use crate::spectral::x_coth_x;
use crate::thermal::Factored;

/// Multiplier turning summed quadrature error estimates into the tolerance used by
/// every invariant check.
pub const EPS_NUM_FACTOR: f64 = 10.0;

/// Convergence record of one named integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralStatus {
    pub name: String,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralStatus {
    fn new(name: &str, r: &IntegralResult) -> Self {
        Self {
            name: name.to_owned(),
            value: r.value,
            error_estimate: r.error_estimate,
            evaluations: r.evaluations,
            converged: r.converged,
        }
    }
}

/// Absolute quadrature error estimates propagated to each reported quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Uncertainty {
    pub p_a0: f64,
    pub p_b0: f64,
    pub dp_a: f64,
    pub dp_b: f64,
    pub p: f64,
    pub j1: f64,
    pub j2: f64,
    pub s_dot: f64,
    pub d_pa: f64,
    pub d_pb: f64,
    pub d_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub p_a0: f64,
    pub p_b0: f64,
    pub dp_a: f64,
    pub dp_b: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p: f64,
    pub j1: f64,
    pub j2: f64,
    /// −J₁/T₁ − J₂/T₂.
    pub s_dot: f64,
    /// Entropy production from its own frequency integral, an independent check on
    /// `s_dot`.
    pub s_dot_direct: f64,
    pub d_pa: f64,
    pub d_pb: f64,
    pub d_p: f64,
    pub q_p: Option<f64>,
    pub q_pa: Option<f64>,
    pub q_pb: Option<f64>,
    pub eta: Option<f64>,
    pub uncertainty: Uncertainty,
    pub integrals: Vec<IntegralStatus>,
}

impl ThermoReport {
    pub fn converged(&self) -> bool {
        self.integrals.iter().all(|i| i.converged)
    }

    /// Numerical slack for a quantity: [`EPS_NUM_FACTOR`] times its propagated error.
    pub fn eps(&self, abs_error: f64) -> f64 {
        EPS_NUM_FACTOR * abs_error
    }

    pub fn eps_q_p(&self) -> Option<f64> {
        let u = &self.uncertainty;
        tur_error(self.q_p, self.s_dot, u.s_dot, self.d_p, u.d_p, self.p, u.p).map(|e| self.eps(e))
    }

    pub fn eps_q_pa(&self) -> Option<f64> {
        let u = &self.uncertainty;
        tur_error(
            self.q_pa,
            self.s_dot,
            u.s_dot,
            self.d_pa,
            u.d_pa,
            self.p_a,
            u.p_a0 + u.dp_a,
        )
        .map(|e| self.eps(e))
    }

    pub fn eps_q_pb(&self) -> Option<f64> {
        let u = &self.uncertainty;
        tur_error(
            self.q_pb,
            self.s_dot,
            u.s_dot,
            self.d_pb,
            u.d_pb,
            self.p_b,
            u.p_b0 + u.dp_b,
        )
        .map(|e| self.eps(e))
    }

    /// Looks a scalar field up by its export name.
    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        Some(match name {
            "P_A0" => Some(self.p_a0),
            "P_B0" => Some(self.p_b0),
            "dP_A" => Some(self.dp_a),
            "dP_B" => Some(self.dp_b),
            "P_A" => Some(self.p_a),
            "P_B" => Some(self.p_b),
            "P" => Some(self.p),
            "J1" => Some(self.j1),
            "J2" => Some(self.j2),
            "S_dot" => Some(self.s_dot),
            "D_PA" => Some(self.d_pa),
            "D_PB" => Some(self.d_pb),
            "D_P" => Some(self.d_p),
            "Q_P" => self.q_p,
            "Q_PA" => self.q_pa,
            "Q_PB" => self.q_pb,
            "eta" => self.eta,
            _ => return None,
        })
    }

    pub const FIELDS: &'static [&'static str] = &[
        "P_A0", "P_B0", "dP_A", "dP_B", "P_A", "P_B", "P", "J1", "J2", "S_dot", "D_PA", "D_PB",
        "D_P", "Q_P", "Q_PA", "Q_PB", "eta",
    ];
}

fn tur_error(q: Option<f64>, s: f64, ds: f64, d: f64, dd: f64, o: f64, d_o: f64) -> Option<f64> {
    let q = q?;
    let rel = |e: f64, v: f64| if v == 0.0 { 0.0 } else { e / v.abs() };
    Some(q.abs() * (rel(ds, s) + rel(dd, d) + 2.0 * rel(d_o, o)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    pub var_aa: f64,
    pub var_bb: f64,
    pub cov_ab: f64,
    pub pearson_c: f64,
    pub pearson_tilde: f64,
    pub integrals: Vec<IntegralStatus>,
}

impl SyncReport {
    pub fn converged(&self) -> bool {
        self.integrals.iter().all(|i| i.converged)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "var_AA" => self.var_aa,
            "var_BB" => self.var_bb,
            "cov_AB" => self.cov_ab,
            "pearson_C" => self.pearson_c,
            "pearson_tilde" => self.pearson_tilde,
            _ => return None,
        })
    }

    pub const FIELDS: &'static [&'static str] =
        &["var_AA", "var_BB", "cov_AB", "pearson_C", "pearson_tilde"];
}

/// Breakpoints for integrands built on χ₂(ω) and the thermal factors: the
/// removable points, the response poles with their widths, and the thermal and
/// cutoff scales around both removable points.
pub(crate) fn breakpoints(p: &MachineParams, bath1_center: Option<f64>) -> Vec<f64> {
    let mut pts = vec![0.0];
    for z in response_poles(p) {
        let width = z.im.abs();
        for k in [0.0, 1.0, 10.0] {
            pts.push(z.re - k * width);
            pts.push(z.re + k * width);
        }
    }
    for t in [p.t2, 10.0 * p.t2] {
        pts.push(t);
        pts.push(-t);
    }
    if let Some(c) = bath1_center {
        pts.push(c);
        for s in [p.t1, 10.0 * p.t1, p.omega_c] {
            pts.push(c - s);
            pts.push(c + s);
        }
    }
    pts.retain(|x| x.is_finite());
    pts.sort_by(f64::total_cmp);
    // merge points closer than a relative 1e-12, they only create sliver panels
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300));
    pts
}

/// Raw integral values (without the 1/(4πm) measure or Ω prefactors).
#[derive(Debug, Clone, Copy)]
struct RawIntegrals {
    p_a0: IntegralResult,
    p_b0: IntegralResult,
    j1: IntegralResult,
    d_a: IntegralResult,
    d_b: IntegralResult,
    d_eff: IntegralResult,
    s_dot: IntegralResult,
    dp: IntegralResult,
}

const RAW_NAMES: [&str; 8] = [
    "P_A0",
    "P_B0",
    "J1",
    "D_PA",
    "D_PB",
    "D_P",
    "S_dot_direct",
    "dP",
];

/// The δP integrand [𝒥₁(x)coth(x/2T₁)χ_AB′(ω) − x𝒥₁(x)/ω_c·χ_AB″(ω)coth(ω/2T₂)].
#[inline]
pub(crate) fn delta_power_integrand(p: &MachineParams, omega: f64, r: &ReducedResponse) -> f64 {
    let bath = p.bath1();
    let x = omega + p.omega_drive;
    let j_over_x = bath.density_over_omega(x);
    let coth_term = j_over_x * 2.0 * p.t1 * x_coth_x(x / (2.0 * p.t1)) * r.ab_re;
    let memory_term =
        x * x * j_over_x / p.omega_c * r.ab_im_over_w * 2.0 * p.t2 * x_coth_x(omega / (2.0 * p.t2));
    coth_term - memory_term
}

fn raw_integrals(p: &MachineParams, cfg: &QuadratureConfig) -> RawIntegrals {
    let bath = p.bath1();
    let cos_phi = p.phi.cos();
    let thermal_scale = 4.0 * p.t1 * p.t2;
    let pts = breakpoints(p, Some(-p.omega_drive));
    let f = |omega: f64| -> [f64; 8] {
        let x = omega + p.omega_drive;
        let j = bath.density_over_omega(x);
        let r = ReducedResponse::at(p, omega);
        let th = Factored::new(omega, p.omega_drive, p.t1, p.t2);
        let k = thermal_scale * th.weighted();
        let kd = thermal_scale * th.weighted_coth();
        let kl = thermal_scale * th.weighted_lambda();
        let eff = r.eff_im_over_w(cos_phi);
        [
            j * (r.aa_im_over_w + cos_phi * r.ab_im_over_w) * k,
            j * (r.bb_im_over_w + cos_phi * r.ab_im_over_w) * k,
            x * j * eff * k,
            j * r.aa_im_over_w * kd,
            j * r.bb_im_over_w * kd,
            j * eff * kd,
            2.0 * j * eff * kl,
            delta_power_integrand(p, omega, &r),
        ]
    };
    let [p_a0, p_b0, j1, d_a, d_b, d_eff, s_dot, dp] = integrate_real_line_vec(f, &pts, cfg);
    RawIntegrals {
        p_a0,
        p_b0,
        j1,
        d_a,
        d_b,
        d_eff,
        s_dot,
        dp,
    }
}

/// Powers: P_l⁽⁰⁾, δP_l, P_l and P, with their propagated errors and statuses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerComponents {
    pub p_a0: f64,
    pub p_b0: f64,
    pub dp_a: f64,
    pub dp_b: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p: f64,
    pub uncertainty: Uncertainty,
    pub integrals: Vec<IntegralStatus>,
}

pub fn power_components(p: &MachineParams, cfg: &QuadratureConfig) -> Result<PowerComponents> {
    p.validate()?;
    cfg.validate()?;
    let raw = raw_integrals(p, cfg);
    let report = assemble(p, cfg, &raw);
    Ok(PowerComponents {
        p_a0: report.p_a0,
        p_b0: report.p_b0,
        dp_a: report.dp_a,
        dp_b: report.dp_b,
        p_a: report.p_a,
        p_b: report.p_b,
        p: report.p,
        uncertainty: report.uncertainty,
        integrals: report
            .integrals
            .into_iter()
            .filter(|s| matches!(s.name.as_str(), "P_A0" | "P_B0" | "dP"))
            .collect(),
    })
}

/// J₁ from its frequency integral and J₂ = −P − J₁.
pub fn heat_currents(p: &MachineParams, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let r = thermo_report(p, cfg)?;
    Ok((r.j1, r.j2))
}

/// Ṡ = −J₁/T₁ − J₂/T₂.
pub fn entropy_rate(j1: f64, j2: f64, _p: f64, t1: f64, t2: f64) -> f64 {
    -j1 / t1 - j2 / t2
}

/// (D_PA, D_PB, D_P).
pub fn power_fluctuations(p: &MachineParams, cfg: &QuadratureConfig) -> Result<(f64, f64, f64)> {
    let r = thermo_report(p, cfg)?;
    Ok((r.d_pa, r.d_pb, r.d_p))
}

/// Q_O = Ṡ·D_O/O² for the total and the two local powers; `None` where the
/// power cannot be told apart from zero.
pub fn tur_quantifiers(
    report: &ThermoReport,
    abs_tol: f64,
) -> (Option<f64>, Option<f64>, Option<f64>) {
    let u = &report.uncertainty;
    let q = |o: f64, err: f64, d: f64| {
        if o.abs() <= abs_tol.max(EPS_NUM_FACTOR * err) {
            None
        } else {
            Some(report.s_dot * d / (o * o))
        }
    };
    (
        q(report.p, u.p, report.d_p),
        q(report.p_a, u.p_a0 + u.dp_a, report.d_pa),
        q(report.p_b, u.p_b0 + u.dp_b, report.d_pb),
    )
}

/// η = −P_A/P_B when B absorbs and A delivers power.
pub fn efficiency(report: &ThermoReport) -> Option<f64> {
    (report.p_b > 0.0 && report.p_a < 0.0).then(|| -report.p_a / report.p_b)
}

fn assemble(p: &MachineParams, cfg: &QuadratureConfig, raw: &RawIntegrals) -> ThermoReport {
    let measure = 1.0 / (4.0 * PI * p.mass);
    let drive = p.omega_drive;
    let sin_phi = p.phi.sin();

    let power = -drive * measure;
    let p_a0 = power * raw.p_a0.value;
    let p_b0 = power * raw.p_b0.value;
    let (dp_a, dp_b, dp_err) = if sin_phi == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let dp = -drive * sin_phi * measure * raw.dp.value;
        (
            dp,
            -dp,
            (drive * sin_phi * measure).abs() * raw.dp.error_estimate,
        )
    };
    let p_total = p_a0 + p_b0;
    let j1 = measure * raw.j1.value;
    let j2 = -p_total - j1;
    let s_dot = entropy_rate(j1, j2, p_total, p.t1, p.t2);
    let fluct = drive * drive * measure;
    let d_pa = fluct * raw.d_a.value;
    let d_pb = fluct * raw.d_b.value;
    let d_p = fluct * raw.d_eff.value;

    let e_pa0 = drive * measure * raw.p_a0.error_estimate;
    let e_pb0 = drive * measure * raw.p_b0.error_estimate;
    let e_p = e_pa0 + e_pb0;
    let e_j1 = measure * raw.j1.error_estimate;
    let e_j2 = e_p + e_j1;
    let uncertainty = Uncertainty {
        p_a0: e_pa0,
        p_b0: e_pb0,
        dp_a: dp_err,
        dp_b: dp_err,
        p: e_p,
        j1: e_j1,
        j2: e_j2,
        s_dot: e_j1 / p.t1 + e_j2 / p.t2,
        d_pa: fluct * raw.d_a.error_estimate,
        d_pb: fluct * raw.d_b.error_estimate,
        d_p: fluct * raw.d_eff.error_estimate,
    };

    let integrals = [
        raw.p_a0, raw.p_b0, raw.j1, raw.d_a, raw.d_b, raw.d_eff, raw.s_dot, raw.dp,
    ]
    .iter()
    .zip(RAW_NAMES)
    .map(|(r, n)| IntegralStatus::new(n, r))
    .collect();

    let mut report = ThermoReport {
        p_a0,
        p_b0,
        dp_a,
        dp_b,
        p_a: p_a0 + dp_a,
        p_b: p_b0 + dp_b,
        p: p_total,
        j1,
        j2,
        s_dot,
        s_dot_direct: measure * raw.s_dot.value,
        d_pa,
        d_pb,
        d_p,
        q_p: None,
        q_pa: None,
        q_pb: None,
        eta: None,
        uncertainty,
        integrals,
    };
    let (q_p, q_pa, q_pb) = tur_quantifiers(&report, cfg.abs_tol);
    report.q_p = q_p;
    report.q_pa = q_pa;
    report.q_pb = q_pb;
    report.eta = efficiency(&report);
    report
}

/// Every period-averaged observable at one parameter point.
///
/// Unconverged integrals are recorded in [`ThermoReport::integrals`], not raised;
/// use [`thermo_report_strict`] to turn them into an error.
pub fn thermo_report(p: &MachineParams, cfg: &QuadratureConfig) -> Result<ThermoReport> {
    p.validate()?;
    cfg.validate()?;
    Ok(assemble(p, cfg, &raw_integrals(p, cfg)))
}

pub fn thermo_report_strict(p: &MachineParams, cfg: &QuadratureConfig) -> Result<ThermoReport> {
    let report = thermo_report(p, cfg)?;
    if let Some(bad) = report.integrals.iter().find(|s| !s.converged) {
        return Err(Error::NotConverged {
            name: leak_name(&bad.name),
            value: bad.value,
            error: bad.error_estimate,
        });
    }
    Ok(report)
}

fn leak_name(name: &str) -> &'static str {
    RAW_NAMES
        .iter()
        .chain(SYNC_NAMES.iter())
        .find(|n| **n == name)
        .copied()
        .unwrap_or("unknown")
}

const SYNC_NAMES: [&str; 3] = ["var_AA", "var_BB", "cov_AB"];

/// Equilibrium position correlators ∫dω/(4πm)·coth(ω/2T₂)·χ^(l,l′)″(ω).
pub(crate) fn position_correlators(
    p: &MachineParams,
    cfg: &QuadratureConfig,
) -> [IntegralResult; 3] {
    let pts = breakpoints(p, None);
    let measure = 1.0 / (4.0 * PI * p.mass);
    let f = |omega: f64| {
        let r = ReducedResponse::at(p, omega);
        let w_coth = measure * 2.0 * p.t2 * x_coth_x(omega / (2.0 * p.t2));
        [
            r.aa_im_over_w * w_coth,
            r.bb_im_over_w * w_coth,
            r.ab_im_over_w * w_coth,
        ]
    };
    integrate_real_line_vec(f, &pts, cfg)
}

/// Position variances, covariance, and the Pearson and Pearson-like coefficients
/// of the two oscillators in equilibrium with the static bath.
pub fn sync_report(p: &MachineParams, cfg: &QuadratureConfig) -> Result<SyncReport> {
    p.validate()?;
    cfg.validate()?;
    let [aa, bb, ab] = position_correlators(p, cfg);
    if !(aa.value > 0.0 && bb.value > 0.0) {
        return Err(Error::Domain("non-positive position variance"));
    }
    Ok(SyncReport {
        var_aa: aa.value,
        var_bb: bb.value,
        cov_ab: ab.value,
        pearson_c: ab.value / (aa.value * bb.value).sqrt(),
        pearson_tilde: ab.value / aa.value,
        integrals: [aa, bb, ab]
            .iter()
            .zip(SYNC_NAMES)
            .map(|(r, n)| IntegralStatus::new(n, r))
            .collect(),
    })
}
