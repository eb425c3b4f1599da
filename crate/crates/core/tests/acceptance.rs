//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use synctur::asymptotics::{diabatic_fluctuation, AsymptoticCoeffs};
use synctur::response::chi_imag_eigenvalues;
use synctur::sweep::{logspace, presets::preset, SweepResult};
use synctur::{
    adiabatic_coefficients, diabatic_coefficients, run_sweep, sync_report, thermo_report,
    MachineParams, QuadratureConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn log_uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_params(rng: &mut ChaCha20Rng) -> MachineParams {
    MachineParams {
        omega_b: log_uniform(rng, 0.2, 0.9),
        gamma2: log_uniform(rng, 0.01, 100.0),
        omega_c: log_uniform(rng, 1.0, 1000.0),
        omega_drive: log_uniform(rng, 1e-2, 1e3),
        t1: log_uniform(rng, 0.05, 5.0),
        t2: log_uniform(rng, 0.05, 5.0),
        phi: rng.gen_range(0.0..TAU),
        ..MachineParams::default()
    }
}

fn fig3(omega: f64, t: f64) -> MachineParams {
    MachineParams {
        omega_drive: omega,
        ..MachineParams::default()
    }
    .isothermal(t)
}

fn tur_certificate() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha20Rng::seed_from_u64(20_240_601);
    let (mut bad, mut undefined, mut unconverged) = (0, 0, 0);
    let mut min_q = f64::INFINITY;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let r = match thermo_report(&p, &cfg) {
            Ok(r) => r,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        if !r.converged() {
            unconverged += 1;
        }
        if r.s_dot < -r.eps(r.uncertainty.s_dot) {
            bad += 1;
        }
        match (r.q_p, r.eps_q_p()) {
            (Some(q), Some(e)) => {
                min_q = min_q.min(q);
                if q < 2.0 - e {
                    bad += 1;
                }
            }
            _ => undefined += 1,
        }
    }
    outcome(
        bad == 0 && unconverged == 0,
        format!("1000 points, violations {bad}, unconverged {unconverged}, undefined Q_P {undefined}, min Q_P {min_q:.6}"),
    )
}

fn isothermal_identities() -> Outcome {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    let mut missing = 0;
    for i in 0..100 {
        let mut p = random_params(&mut rng);
        p.t2 = p.t1;
        p.phi = if i % 2 == 0 {
            FRAC_PI_2
        } else {
            3.0 * FRAC_PI_2
        };
        let r = thermo_report(&p, &cfg).unwrap();
        let (w, t) = (p.omega_drive, p.t1);
        let factor = w / (w / (2.0 * t)).tanh();
        worst = worst.max(rel(r.d_pa, factor * r.p_a0));
        match r.q_p {
            Some(q) => worst = worst.max(rel(q, factor / t)),
            None => missing += 1,
        }
    }
    outcome(
        worst < 1e-6 && missing == 0,
        format!("100 points, worst relative deviation {worst:.2e}, undefined Q_P {missing}"),
    )
}

fn adiabatic_oracle() -> Outcome {
    let cfg = QuadratureConfig::default();
    let p = fig3(1e-3, 1.0);
    let r = thermo_report(&p, &cfg).unwrap();
    let a = adiabatic_coefficients(&p, &cfg).unwrap().powers(&p);
    let (e_p, e_pa) = (rel(a.p, r.p), rel(a.p_a, r.p_a));
    outcome(
        e_p < 0.01 && e_pa < 0.01,
        format!("P deviation {e_p:.2e}, P_A deviation {e_pa:.2e}"),
    )
}

fn diabatic_q_pa_times_omega(omega: f64, cfg: &QuadratureConfig) -> Option<f64> {
    thermo_report(&fig3(omega, 0.1), cfg)
        .unwrap()
        .q_pa
        .map(|q| q * omega)
}

fn diabatic_oracle() -> Outcome {
    let cfg = QuadratureConfig::default();
    let p = fig3(1e3, 0.1);
    let r = thermo_report(&p, &cfg).unwrap();
    let c: AsymptoticCoeffs = diabatic_coefficients(&p, &cfg).unwrap();
    let a = c.powers(&p);
    let (d_a, _) = diabatic_fluctuation(&p, &c);
    let devs = [
        rel(a.p_a0, r.p_a0),
        rel(a.p_b0, r.p_b0),
        rel(a.dp_a, r.dp_a),
        rel(a.dp_b, r.dp_b),
        rel(d_a, r.d_pa),
    ];
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    let ratio = match (
        diabatic_q_pa_times_omega(1e3, &cfg),
        diabatic_q_pa_times_omega(2e3, &cfg),
    ) {
        (Some(x), Some(y)) => y / x,
        _ => f64::NAN,
    };
    outcome(
        worst < 0.02 && (ratio - 1.0).abs() < 0.1,
        format!("worst closed-form deviation {worst:.2e}, Q_PA·Ω ratio {ratio:.4}"),
    )
}

fn local_maxima(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    (1..ys.len() - 1)
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])
        .map(|i| (xs[i], ys[i]))
        .collect()
}

fn synchronization_spectrum() -> Outcome {
    let grid: Vec<f64> = (1..=200_000).map(|i| i as f64 * 1e-5).collect();
    let scan = |gamma2: f64| -> Vec<f64> {
        let p = MachineParams {
            gamma2,
            ..MachineParams::default()
        };
        grid.iter()
            .map(|&w| chi_imag_eigenvalues(&p, w).0)
            .collect()
    };
    let strong = scan(100.0);
    let (i_max, _) = strong
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let locked = grid[i_max];
    let target = 0.68f64.sqrt();
    let weak = scan(0.01);
    let mut peaks = local_maxima(&grid, &weak);
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    let top: Vec<f64> = peaks.iter().take(2).map(|p| p.0).collect();
    let near = |w: f64| top.iter().any(|&x| rel(x, w) < 0.02);
    outcome(
        rel(locked, target) < 0.02 && peaks.len() >= 2 && near(1.0) && near(0.6),
        format!("strong-damping argmax {locked:.5} vs {target:.5}, weak-damping peaks {top:?}"),
    )
}

fn pearson_regimes() -> Outcome {
    let cfg = QuadratureConfig::default();
    let strong = sync_report(&MachineParams::default().isothermal(0.01), &cfg).unwrap();
    let weak = MachineParams {
        gamma2: 0.01,
        ..MachineParams::default()
    };
    let worst_weak = logspace(0.01, 10.0, 40)
        .into_iter()
        .map(|t| {
            sync_report(&weak.isothermal(t), &cfg)
                .unwrap()
                .pearson_c
                .abs()
        })
        .fold(0.0, f64::max);
    outcome(
        strong.pearson_c < -0.9 && worst_weak < 0.1,
        format!(
            "strong damping C = {:.5} (needs < -0.9), weak damping max |C| = {worst_weak:.2e}",
            strong.pearson_c
        ),
    )
}

fn corner_cells(result: &SweepResult, want_negative_power: bool) -> usize {
    let q = result.column("Q_PA").unwrap();
    let pa = result.column("P_A").unwrap();
    result
        .rows
        .iter()
        .enumerate()
        .filter(|(i, row)| {
            let corner = row.axis1 >= 100.0 && row.axis2.is_some_and(|t| t <= 0.1);
            let low_q = q[*i].is_some_and(|v| v < 2.0);
            let neg = pa[*i].is_some_and(|v| v < 0.0);
            corner && low_q && (neg || !want_negative_power)
        })
        .count()
}

fn figure_regions() -> Outcome {
    let run = |f: &dyn Fn(&mut MachineParams)| {
        let mut spec = preset("fig3", 64).unwrap();
        f(&mut spec.base);
        run_sweep(&spec).unwrap()
    };
    let small_cutoff = run(&|_| {});
    let large_cutoff = run(&|p| p.omega_c = 1000.0);
    let weak = run(&|p| p.gamma2 = 0.01);
    let (a, b, c) = (
        corner_cells(&small_cutoff, true),
        corner_cells(&large_cutoff, true),
        corner_cells(&weak, false),
    );
    let converged =
        small_cutoff.all_converged() && large_cutoff.all_converged() && weak.all_converged();
    outcome(
        a > 0 && b == 0 && c == 0 && converged,
        format!("violating corner cells: omega_c=1.2 {a}, omega_c=1000 {b}, gamma2=0.01 (Q_PA<2 only) {c}"),
    )
}

fn mirror_symmetry() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut failures = 0;
    let points = [
        (0.05, 0.3),
        (1.0, 1.0),
        (20.0, 1.0),
        (3.0, 0.1),
        (1e3, 0.1),
        (0.5, 5.0),
    ];
    for (w, t) in points {
        let a = thermo_report(&fig3(w, t).with_phi(FRAC_PI_2), &cfg).unwrap();
        let m = fig3(w, t).mirrored().with_phi(3.0 * FRAC_PI_2);
        let b = thermo_report(&m, &cfg).unwrap();
        let u = &a.uncertainty;
        let ok_p = (a.p_a - b.p_b).abs()
            <= a.eps(u.p_a0 + u.dp_a + b.uncertainty.p_b0 + b.uncertainty.dp_b);
        let ok_d = (a.d_pa - b.d_pb).abs() <= a.eps(u.d_pa + b.uncertainty.d_pb);
        let ok_q = match (a.q_pa, b.q_pb, a.eps_q_pa(), b.eps_q_pb()) {
            (Some(x), Some(y), Some(ex), Some(ey)) => (x - y).abs() <= ex + ey,
            (None, None, _, _) => true,
            _ => false,
        };
        if !(ok_p && ok_d && ok_q) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{} points, mismatches {failures}", points.len()),
    )
}

fn efficiency() -> Outcome {
    let r = thermo_report(&fig3(1e3, 0.1), &QuadratureConfig::default()).unwrap();
    let converter = r.p_b > 0.0 && r.p_a < 0.0;
    let eta = r.eta.unwrap_or(f64::NAN);
    outcome(
        converter && eta > 0.9,
        format!("P_A = {:.4e}, P_B = {:.4e}, eta = {eta:.5}", r.p_a, r.p_b),
    )
}

// Dense reference integrals with naive integrands: the complex response matrix,
// plain coth, no factoring of the thermal terms.

const DENSE_NODES: usize = 10_000_000;
const DENSE_WINDOW: f64 = 1e8;
const DENSE_SCALE: f64 = 1.0;

fn chi(p: &MachineParams, w: f64) -> (Complex64, Complex64, Complex64) {
    let (a2, b2, g) = (p.omega_a * p.omega_a, p.omega_b * p.omega_b, p.gamma2);
    let i = Complex64::i();
    let d = (w * w - a2) * (w * w - b2) + i * w * (2.0 * w * w - a2 - b2) * g;
    (
        -(w * w - b2 + i * w * g) / d,
        -(w * w - a2 + i * w * g) / d,
        i * w * g / d,
    )
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

fn naive_integrands(p: &MachineParams, w: f64) -> [f64; 11] {
    let x = w + p.omega_drive;
    let j1 = p.gamma1 * x / (1.0 + (x / p.omega_c).powi(2));
    let (aa, bb, ab) = chi(p, w);
    let c = p.phi.cos();
    let eff = aa.im + bb.im + 2.0 * c * ab.im;
    let (ca, cb) = (coth(x / (2.0 * p.t1)), coth(w / (2.0 * p.t2)));
    let n = ca - cb;
    let lambda = w / (2.0 * p.t2) - x / (2.0 * p.t1);
    let n_coth = n * coth(lambda);
    [
        j1 * (aa.im + c * ab.im) * n,
        j1 * (bb.im + c * ab.im) * n,
        x * j1 * eff * n,
        j1 * aa.im * n_coth,
        j1 * bb.im * n_coth,
        j1 * eff * n_coth,
        2.0 * j1 * eff * n * lambda,
        j1 * ca * ab.re - x * j1 / p.omega_c * ab.im * cb,
        aa.im * cb / (4.0 * PI),
        bb.im * cb / (4.0 * PI),
        ab.im * cb / (4.0 * PI),
    ]
}

/// Trapezoid in t with ω = s·sinh(t) over |ω| ≤ W; the odd interval count keeps ω = 0 off the grid.
fn dense_reference(p: &MachineParams) -> ([f64; 11], usize) {
    let intervals = DENSE_NODES - 1;
    let lim = (DENSE_WINDOW / DENSE_SCALE).asinh();
    let h = 2.0 * lim / intervals as f64;
    let mut sum = [0.0f64; 11];
    let mut comp = [0.0f64; 11];
    let mut skipped = 0;
    for k in 0..DENSE_NODES {
        let t = -lim + k as f64 * h;
        let w = DENSE_SCALE * t.sinh();
        let jac = DENSE_SCALE * t.cosh() * if k == 0 || k == intervals { 0.5 } else { 1.0 };
        let f = naive_integrands(p, w);
        for j in 0..11 {
            let v = f[j] * jac;
            if !v.is_finite() {
                skipped += 1;
                continue;
            }
            let s = sum[j] + v;
            comp[j] += if sum[j].abs() >= v.abs() {
                (sum[j] - s) + v
            } else {
                (v - s) + sum[j]
            };
            sum[j] = s;
        }
    }
    (std::array::from_fn(|j| (sum[j] + comp[j]) * h), skipped)
}

fn quadrature_equivalence() -> Outcome {
    let spots = [
        fig3(1.0, 1.0),
        fig3(20.0, 1.0),
        fig3(0.05, 0.3),
        MachineParams {
            omega_drive: 3.0,
            t1: 0.7,
            t2: 0.2,
            phi: 1.0,
            ..MachineParams::default()
        },
        MachineParams {
            omega_drive: 0.4,
            t1: 0.1,
            t2: 1.9,
            phi: 4.0,
            ..MachineParams::default()
        },
        MachineParams {
            gamma2: 0.01,
            omega_drive: 0.8,
            t1: 0.5,
            t2: 0.5,
            phi: 2.0,
            ..MachineParams::default()
        },
        MachineParams {
            gamma2: 1.0,
            omega_c: 30.0,
            omega_drive: 5.0,
            t1: 2.0,
            t2: 0.3,
            phi: 0.3,
            ..MachineParams::default()
        },
        MachineParams {
            omega_b: 0.3,
            gamma2: 10.0,
            omega_c: 3.0,
            omega_drive: 0.2,
            t1: 0.05,
            t2: 0.08,
            phi: 5.5,
            ..MachineParams::default()
        },
        MachineParams {
            omega_b: 0.85,
            gamma2: 0.1,
            omega_c: 200.0,
            omega_drive: 50.0,
            t1: 4.0,
            t2: 1.0,
            phi: 2.8,
            ..MachineParams::default()
        },
        MachineParams {
            omega_b: 0.5,
            gamma2: 3.0,
            omega_c: 1.5,
            omega_drive: 0.02,
            t1: 1.2,
            t2: 0.9,
            phi: 3.5,
            ..MachineParams::default()
        },
    ];
    let cfg = QuadratureConfig::default();
    let mut worst = (0.0f64, String::new());
    let mut skipped = 0;
    for (i, p) in spots.iter().enumerate() {
        let (reference, s) = dense_reference(p);
        skipped += s;
        let thermo = thermo_report(p, &cfg).unwrap();
        let sync = sync_report(p, &cfg).unwrap();
        let ours = thermo.integrals.iter().chain(&sync.integrals);
        for (status, r) in ours.zip(reference) {
            let e = rel(status.value, r);
            if e > worst.0 || e.is_nan() {
                worst = (
                    e,
                    format!(
                        "point {i} {}: {:.12e} vs {r:.12e}",
                        status.name, status.value
                    ),
                );
            }
        }
    }
    outcome(
        worst.0 < 1e-6,
        format!(
            "10 points x 11 integrals, {DENSE_NODES} nodes on |omega| <= {DENSE_WINDOW:e}, {skipped} non-finite nodes, worst {:.2e} ({})",
            worst.0, worst.1
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("tur_certificate", tur_certificate),
        ("isothermal_identities", isothermal_identities),
        ("adiabatic_oracle", adiabatic_oracle),
        ("diabatic_oracle", diabatic_oracle),
        ("synchronization_spectrum", synchronization_spectrum),
        ("pearson_regimes", pearson_regimes),
        ("figure_regions", figure_regions),
        ("mirror_symmetry", mirror_symmetry),
        ("efficiency", efficiency),
        ("quadrature_equivalence", quadrature_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} {name}: {verdict} ({}; {:.1}s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
