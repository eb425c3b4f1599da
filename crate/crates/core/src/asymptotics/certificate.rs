//! Pointwise certificate of the ingredients of the Q_P ≥ 2 bound, and a seeded
//! random sweep that checks the bound itself together with Ṡ ≥ 0.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::thermo_report;
use crate::quadrature::QuadratureConfig;
use crate::response::{
    passivity_discriminant, passivity_numerator, MachineParams, ReducedResponse,
};
use crate::spectral::x_coth_x;
use crate::thermal::Factored;

/// Relative rounding slack for pointwise checks, a few ulps of the largest term.
const ROUNDING: f64 = 8.0 * f64::EPSILON;
const MAX_LISTED: usize = 100;

pub const CHECKS: [&str; 6] = [
    "G_bound",
    "N_over_lambda_sign",
    "bath1_positivity",
    "chi_eff_positivity",
    "passivity_form",
    "passivity_discriminant",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: usize,
    pub violations: usize,
    /// Smallest margin seen, normalized by the check's rounding scale.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub omega: f64,
    pub omega_prime: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub params: MachineParams,
    pub checks: Vec<CheckSummary>,
    /// The first violations found, at most 100.
    pub violations: Vec<Violation>,
}

impl CertificateReport {
    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }
}

struct Tally {
    checks: Vec<CheckSummary>,
    violations: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: CHECKS
                .iter()
                .map(|n| CheckSummary {
                    name: (*n).to_owned(),
                    evaluated: 0,
                    violations: 0,
                    worst_margin: f64::INFINITY,
                })
                .collect(),
            violations: Vec::new(),
        }
    }

    /// Records `margin ≥ −tol`.
    fn record(&mut self, idx: usize, margin: f64, tol: f64, omega: f64, omega_prime: f64) {
        let c = &mut self.checks[idx];
        c.evaluated += 1;
        let normalized = if tol > 0.0 { margin / tol } else { margin };
        c.worst_margin = c.worst_margin.min(normalized);
        if margin < -tol || margin.is_nan() {
            c.violations += 1;
            if self.violations.len() < MAX_LISTED {
                self.violations.push(Violation {
                    check: CHECKS[idx].to_owned(),
                    omega,
                    omega_prime,
                    margin,
                });
            }
        }
    }
}

/// Checks, at every pair (ω, ω′):
///
/// * G(ω, ω′) ≥ (λ_ω − λ_ω′)²,
/// * sign(N/λ) = sign(ω(ω+Ω)),
/// * (ω+Ω)𝒥₁(ω+Ω) ≥ 0,
/// * ω·χ_eff″(ω) ≥ 0,
/// * 𝒩(ω) ≥ 0,
///
/// plus the non-positive discriminant of 𝒩 once per parameter set.
pub fn tur_certificate(p: &MachineParams, sample: &[(f64, f64)]) -> Result<CertificateReport> {
    p.validate()?;
    if sample
        .iter()
        .any(|(a, b)| !(a.is_finite() && b.is_finite()))
    {
        return Err(Error::Domain("certificate sample points must be finite"));
    }
    let mut tally = Tally::new();
    let bath = p.bath1();
    let cos_phi = p.phi.cos();
    let lambda = |w: f64| Factored::new(w, p.omega_drive, p.t1, p.t2).lambda();

    for &(w, wp) in sample {
        let (l, lp) = (lambda(w), lambda(wp));
        let g = l * l * x_coth_x(lp) + lp * lp * x_coth_x(l) - 2.0 * l * lp;
        let gap = (l - lp) * (l - lp);
        tally.record(
            0,
            g - gap,
            ROUNDING * (g.abs() + gap + 2.0 * (l * lp).abs()),
            w,
            wp,
        );

        for x in [w, wp] {
            let s = x * (x + p.omega_drive);
            let n_over_l = Factored::new(x, p.omega_drive, p.t1, p.t2).n_over_lambda();
            if s != 0.0 && n_over_l != 0.0 && !n_over_l.is_nan() {
                let agree = if n_over_l.signum() == s.signum() {
                    1.0
                } else {
                    -1.0
                };
                tally.record(1, agree, 0.0, w, wp);
            }

            let y = x + p.omega_drive;
            tally.record(2, y * bath.spectral_density(y), 0.0, w, wp);

            let r = ReducedResponse::at(p, x);
            let x2 = x * x;
            let scale =
                x2 * (r.aa_im_over_w.abs() + r.bb_im_over_w.abs() + 2.0 * r.ab_im_over_w.abs());
            tally.record(3, x2 * r.eff_im_over_w(cos_phi), ROUNDING * scale, w, wp);

            let (a2, b2) = (p.omega_a * p.omega_a, p.omega_b * p.omega_b);
            let terms = 2.0 * x2 * x2
                + 2.0 * ((x2 - a2) * (x2 - b2)).abs()
                + 2.0 * x2 * (a2 + b2)
                + a2 * a2
                + b2 * b2;
            tally.record(4, passivity_numerator(p, x), ROUNDING * terms, w, wp);
        }
    }
    let (a2, b2) = (p.omega_a * p.omega_a, p.omega_b * p.omega_b);
    let disc_scale = 16.0 * (a2 + b2) * (a2 + b2);
    tally.record(
        5,
        -passivity_discriminant(p),
        ROUNDING * disc_scale,
        f64::NAN,
        f64::NAN,
    );

    Ok(CertificateReport {
        params: *p,
        checks: tally.checks,
        violations: tally.violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Number of random parameter sets.
    pub samples: usize,
    /// Random (ω, ω′) pairs checked per parameter set.
    pub pairs_per_sample: usize,
    pub seed: u64,
    pub cfg: QuadratureConfig,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            pairs_per_sample: 100,
            seed: 7,
            cfg: QuadratureConfig::default(),
        }
    }
}

/// A parameter set where Q_P < 2 − ε_num or Ṡ < −ε_num.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointViolation {
    pub index: usize,
    pub check: String,
    pub params: MachineParams,
    pub value: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub options: CertifyOptions,
    pub points_checked: usize,
    /// Points where |P| could not be told apart from zero, so Q_P is undefined.
    pub undefined_q_p: usize,
    pub unconverged: usize,
    pub min_q_p: Option<f64>,
    pub min_s_dot: f64,
    pub point_violations: Vec<PointViolation>,
    pub pair_checks: Vec<CheckSummary>,
    pub pair_violations: Vec<Violation>,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.point_violations.is_empty() && self.pair_checks.iter().all(|c| c.violations == 0)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// One random parameter set: ω_B/ω_A, γ₂, ω_c, Ω, T₁, T₂ log-uniform over
/// [0.2, 0.9], [0.01, 100], [1, 1000], [0.01, 1000], [0.05, 5], [0.05, 5] and
/// φ uniform on [0, 2π), with the remaining fields at their defaults.
pub fn sample_params(rng: &mut ChaCha8Rng) -> MachineParams {
    MachineParams {
        omega_b: log_uniform(rng, 0.2, 0.9),
        gamma2: log_uniform(rng, 0.01, 100.0),
        omega_c: log_uniform(rng, 1.0, 1000.0),
        omega_drive: log_uniform(rng, 0.01, 1000.0),
        t1: log_uniform(rng, 0.05, 5.0),
        t2: log_uniform(rng, 0.05, 5.0),
        phi: rng.gen_range(0.0..TAU),
        ..MachineParams::default()
    }
}

fn sample_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let one = |rng: &mut ChaCha8Rng| {
        let m = log_uniform(rng, 1e-3, 1e3);
        if rng.gen::<bool>() {
            m
        } else {
            -m
        }
    };
    (one(rng), one(rng))
}

struct PointOutcome {
    q_p: Option<f64>,
    s_dot: f64,
    converged: bool,
    violations: Vec<PointViolation>,
    cert: CertificateReport,
}

fn check_point(
    index: usize,
    p: MachineParams,
    pairs: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> Result<PointOutcome> {
    let r = thermo_report(&p, cfg)?;
    let mut violations = Vec::new();
    if let (Some(q), Some(eps)) = (r.q_p, r.eps_q_p()) {
        if q < 2.0 - eps {
            violations.push(PointViolation {
                index,
                check: "Q_P".into(),
                params: p,
                value: q,
                eps,
            });
        }
    }
    let eps_s = r.eps(r.uncertainty.s_dot);
    if r.s_dot < -eps_s {
        violations.push(PointViolation {
            index,
            check: "S_dot".into(),
            params: p,
            value: r.s_dot,
            eps: eps_s,
        });
    }
    Ok(PointOutcome {
        q_p: r.q_p,
        s_dot: r.s_dot,
        converged: r.converged(),
        violations,
        cert: tur_certificate(&p, pairs)?,
    })
}

type Job = (usize, MachineParams, Vec<(f64, f64)>);

/// Draws `samples` parameter sets and pair lists from one seeded stream, then
/// checks the bound and the pointwise certificate at each. The report depends only
/// on the options, not on the thread count.
pub fn certify_random(opts: &CertifyOptions) -> Result<CertifyReport> {
    opts.cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let jobs: Vec<Job> = (0..opts.samples)
        .map(|i| {
            let p = sample_params(&mut rng);
            let pairs = (0..opts.pairs_per_sample)
                .map(|_| sample_pair(&mut rng))
                .collect();
            (i, p, pairs)
        })
        .collect();

    let run = |(i, p, pairs): &(usize, MachineParams, Vec<(f64, f64)>)| {
        check_point(*i, *p, pairs, &opts.cfg)
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Result<PointOutcome>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Result<PointOutcome>> = jobs.iter().map(run).collect();

    let mut tally = Tally::new();
    let mut report = CertifyReport {
        options: *opts,
        points_checked: 0,
        undefined_q_p: 0,
        unconverged: 0,
        min_q_p: None,
        min_s_dot: f64::INFINITY,
        point_violations: Vec::new(),
        pair_checks: Vec::new(),
        pair_violations: Vec::new(),
    };
    for outcome in outcomes {
        let o = outcome?;
        report.points_checked += 1;
        match o.q_p {
            Some(q) => report.min_q_p = Some(report.min_q_p.map_or(q, |m: f64| m.min(q))),
            None => report.undefined_q_p += 1,
        }
        report.min_s_dot = report.min_s_dot.min(o.s_dot);
        if !o.converged {
            report.unconverged += 1;
        }
        report.point_violations.extend(o.violations);
        for (acc, c) in tally.checks.iter_mut().zip(&o.cert.checks) {
            acc.evaluated += c.evaluated;
            acc.violations += c.violations;
            acc.worst_margin = acc.worst_margin.min(c.worst_margin);
        }
        for v in o.cert.violations {
            if tally.violations.len() < MAX_LISTED {
                tally.violations.push(v);
            }
        }
    }
    report.pair_checks = tally.checks;
    report.pair_violations = tally.violations;
    Ok(report)
}
