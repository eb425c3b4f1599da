use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use synctur::asymptotics::{
    adiabatic_coefficients, adiabatic_local_tur, certify_random, diabatic_coefficients,
    diabatic_local_tur, CertifyOptions,
};
use synctur::sweep::presets::{preset, DEFAULT_RESOLUTION, PRESETS};
use synctur::sweep::{
    export, linspace, logspace, run_sweep_with_threads, to_csv_string, to_json_string,
    with_threads, Axis, Format, SweepParam, SweepResult, SweepSpec,
};
use synctur::{sync_report, thermo_report, MachineParams, QuadratureConfig};

mod config;

const EXIT_INVALID: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

/// Thermodynamics, uncertainty relations and synchronization of two driven
/// oscillators sharing common baths (units: ħ = k_B = ω_A = m = 1).
#[derive(Parser, Debug)]
#[command(name = "synctur", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every observable at one parameter point and print JSON.
    Point,
    /// Evaluate quantities over a one- or two-dimensional parameter grid.
    Sweep(SweepArgs),
    /// Check the Q_P ≥ 2 bound and its pointwise ingredients on random parameters.
    Certify(CertifyArgs),
    /// Emit the data behind a named figure.
    FigureData(FigureArgs),
    /// Print the slow- and fast-driving asymptotic coefficients.
    Asymptotics,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Frequency of oscillator B in units of ω_A
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega_b: Option<f64>,
    /// Coupling strength of the driven bath
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma1: Option<f64>,
    /// Coupling strength of the static bath
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma2: Option<f64>,
    /// Drude cutoff of the driven bath
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega_c: Option<f64>,
    /// Relative drive phase in radians, wrapped into [0, 2π)
    #[arg(long, global = true, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Driving frequency Ω
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega_drive: Option<f64>,
    /// Temperature of the driven bath
    #[arg(long, global = true, allow_negative_numbers = true)]
    t1: Option<f64>,
    /// Temperature of the static bath
    #[arg(long, global = true, allow_negative_numbers = true)]
    t2: Option<f64>,
    /// Mean temperature (T₁ + T₂)/2; conflicts with --t1/--t2
    #[arg(long, global = true, allow_negative_numbers = true)]
    tbar: Option<f64>,
    /// Relative temperature difference (T₁ − T₂)/T̄; conflicts with --t1/--t2
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt_rel: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format, csv or json (inferred from --out, else csv)
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "SYNCTUR_THREADS")]
    threads: Option<usize>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Outer axis: `name=lo:hi:n[:log]` or `name=v1,v2,...`
    #[arg(long)]
    axis1: String,
    /// Optional inner axis, same syntax
    #[arg(long)]
    axis2: Option<String>,
    /// Comma-separated quantity names
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    quantities: Vec<String>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Number of random parameter sets
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Random frequency pairs per parameter set
    #[arg(long, default_value_t = 100)]
    pairs: usize,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// One of fig2a, fig2b, fig3, fig4, supfig1, supfig3, supfig4
    preset: String,
    /// Points per continuous axis
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
}

/// Settings merged from the config file and the flags.
struct Resolved {
    common: Common,
    file: config::Config,
}

impl Resolved {
    fn new(common: Common) -> Result<Self> {
        let file = match &common.config {
            Some(path) => config::load(path)?,
            None => config::Config::new(),
        };
        Ok(Self { common, file })
    }

    fn num(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => config::get_f64(&self.file, key),
        }
    }

    fn str(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn int<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| {
                    anyhow::anyhow!("config key `{key}`: `{v}` is not a valid integer")
                })
            })
            .transpose()
    }

    /// Applies every explicitly given parameter to `base`.
    fn params(&self, base: MachineParams) -> Result<MachineParams> {
        let c = &self.common;
        let mut p = base;
        let set = |slot: &mut f64, flag: Option<f64>, key: &str| -> Result<()> {
            if let Some(v) = self.num(flag, key)? {
                *slot = v;
            }
            Ok(())
        };
        set(&mut p.omega_b, c.omega_b, "omega-b")?;
        set(&mut p.gamma1, c.gamma1, "gamma1")?;
        set(&mut p.gamma2, c.gamma2, "gamma2")?;
        set(&mut p.omega_c, c.omega_c, "omega-c")?;
        set(&mut p.omega_drive, c.omega_drive, "omega-drive")?;
        if let Some(phi) = self.num(c.phi, "phi")? {
            p = p.with_phi(phi);
        }
        let t1 = self.num(c.t1, "t1")?;
        let t2 = self.num(c.t2, "t2")?;
        let tbar = self.num(c.tbar, "tbar")?;
        let rel = self.num(c.dt_rel, "dt-rel")?;
        if (tbar.is_some() || rel.is_some()) && (t1.is_some() || t2.is_some()) {
            bail!("--tbar/--dt-rel cannot be combined with --t1/--t2");
        }
        if let Some(v) = t1 {
            p.t1 = v;
        }
        if let Some(v) = t2 {
            p.t2 = v;
        }
        if tbar.is_some() || rel.is_some() {
            let tbar = tbar.unwrap_or(0.5 * (p.t1 + p.t2));
            let rel = rel.unwrap_or((p.t1 - p.t2) / (0.5 * (p.t1 + p.t2)));
            p.t1 = tbar * (1.0 + 0.5 * rel);
            p.t2 = tbar * (1.0 - 0.5 * rel);
        }
        Ok(p)
    }

    fn quadrature(&self) -> Result<QuadratureConfig> {
        let mut q = QuadratureConfig::default();
        if let Some(v) = self.num(self.common.rel_tol, "rel-tol")? {
            q.rel_tol = v;
        }
        if let Some(v) = self.num(self.common.abs_tol, "abs-tol")? {
            q.abs_tol = v;
        }
        q.validate()?;
        Ok(q)
    }

    fn threads(&self) -> Result<usize> {
        Ok(self.int(self.common.threads, "threads")?.unwrap_or(0))
    }

    fn out(&self) -> Option<PathBuf> {
        self.common
            .out
            .clone()
            .or_else(|| self.file.get("out").map(PathBuf::from))
    }

    fn format(&self) -> Result<Format> {
        if let Some(f) = self.str(&self.common.format, "format") {
            return Ok(f.parse()?);
        }
        let json = self
            .out()
            .and_then(|p| p.extension().map(|e| e.eq_ignore_ascii_case("json")))
            .unwrap_or(false);
        Ok(if json { Format::Json } else { Format::Csv })
    }
}

fn parse_axis(text: &str) -> Result<Axis> {
    let Some((name, grid)) = text.split_once('=') else {
        bail!("axis `{text}`: expected `name=lo:hi:n[:log]` or `name=v1,v2,...`");
    };
    let param: SweepParam = name.parse()?;
    let number = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("axis `{text}`: `{s}` is not a number"))
    };
    let values = if grid.contains(':') {
        let parts: Vec<&str> = grid.split(':').collect();
        let (lo, hi) = match parts.as_slice() {
            [lo, hi, _] | [lo, hi, _, _] => (number(lo)?, number(hi)?),
            _ => bail!("axis `{text}`: expected lo:hi:n[:log]"),
        };
        let n: usize = parts[2]
            .trim()
            .parse()
            .with_context(|| format!("axis `{text}`: `{}` is not a point count", parts[2]))?;
        match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => linspace(lo, hi, n),
            Some("log") => {
                if !(lo > 0.0 && hi > 0.0) {
                    bail!("axis `{text}`: log spacing needs positive bounds");
                }
                logspace(lo, hi, n)
            }
            Some(other) => bail!("axis `{text}`: unknown spacing `{other}` (lin or log)"),
        }
    } else {
        grid.split(',').map(number).collect::<Result<Vec<_>>>()?
    };
    Ok(Axis::new(param, values))
}

fn write_output(res: &Resolved, result: &SweepResult) -> Result<()> {
    let format = res.format()?;
    match res.out() {
        Some(path) => export(result, format, &path)?,
        None => {
            let text = match format {
                Format::Csv => to_csv_string(result)?,
                Format::Json => to_json_string(result)?,
            };
            print!("{text}");
        }
    }
    Ok(())
}

fn write_json(res: &Resolved, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match res.out() {
        Some(path) => write_file(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn point(res: &Resolved) -> Result<u8> {
    let p = res.params(MachineParams::default())?;
    p.validate()?;
    let cfg = res.quadrature()?;
    let thermo = thermo_report(&p, &cfg)?;
    let sync = sync_report(&p, &cfg)?;
    write_json(res, &json!({ "params": p, "thermo": thermo, "sync": sync }))?;
    let failed: Vec<&str> = thermo
        .integrals
        .iter()
        .chain(&sync.integrals)
        .filter(|s| !s.converged)
        .map(|s| s.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!(
            "error: quadrature did not converge for {}",
            failed.join(", ")
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn sweep(res: &Resolved, args: &SweepArgs) -> Result<u8> {
    let base = res.params(MachineParams::default())?;
    let mut spec = SweepSpec::new(
        base,
        parse_axis(&args.axis1)?,
        args.axis2.as_deref().map(parse_axis).transpose()?,
        args.quantities
            .iter()
            .map(|q| q.trim().to_owned())
            .filter(|q| !q.is_empty())
            .collect(),
    );
    spec.cfg = res.quadrature()?;
    let result = run_sweep_with_threads(&spec, res.threads()?)?;
    write_output(res, &result)?;
    report_unconverged(&result);
    Ok(0)
}

fn report_unconverged(result: &SweepResult) {
    let bad = result.rows.iter().filter(|r| !r.converged).count();
    if bad > 0 {
        eprintln!(
            "warning: {bad} of {} grid points did not converge",
            result.rows.len()
        );
    }
}

fn certify(res: &Resolved, args: &CertifyArgs) -> Result<u8> {
    if args.samples == 0 {
        bail!("--samples must be positive");
    }
    let opts = CertifyOptions {
        samples: args.samples,
        pairs_per_sample: args.pairs,
        seed: res
            .int(res.common.seed, "seed")?
            .unwrap_or(CertifyOptions::default().seed),
        cfg: res.quadrature()?,
    };
    let report = with_threads(res.threads()?, || certify_random(&opts))??;
    write_json(res, &serde_json::to_value(&report)?)?;
    if report.passed() {
        eprintln!(
            "certificate holds on {} parameter sets (min Q_P = {})",
            report.points_checked,
            report
                .min_q_p
                .map_or("undefined".to_owned(), |q| q.to_string())
        );
        Ok(0)
    } else {
        let pairs: usize = report.pair_checks.iter().map(|c| c.violations).sum();
        eprintln!(
            "certificate violated: {} point violations, {pairs} pointwise violations",
            report.point_violations.len()
        );
        Ok(EXIT_VIOLATION)
    }
}

fn figure_data(res: &Resolved, args: &FigureArgs) -> Result<u8> {
    if !PRESETS.contains(&args.preset.as_str()) {
        bail!(
            "unknown preset `{}` (expected one of {})",
            args.preset,
            PRESETS.join(", ")
        );
    }
    let mut spec = preset(&args.preset, args.resolution)?;
    spec.base = res.params(spec.base)?;
    spec.cfg = res.quadrature()?;
    let result = run_sweep_with_threads(&spec, res.threads()?)?;
    write_output(res, &result)?;
    report_unconverged(&result);
    Ok(0)
}

fn asymptotics(res: &Resolved) -> Result<u8> {
    let p = res.params(MachineParams::default())?;
    let cfg = res.quadrature()?;
    let ad = adiabatic_coefficients(&p, &cfg)?;
    let dia = diabatic_coefficients(&p, &cfg)?;
    let value = json!({
        "params": p,
        "adiabatic": ad,
        "diabatic": dia,
        "adiabatic_local_tur": adiabatic_local_tur(&p, &ad),
        "diabatic_local_tur": diabatic_local_tur(&p, &dia),
    });
    write_json(res, &value)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let res = Resolved::new(cli.common)?;
    match &cli.command {
        Command::Point => point(&res),
        Command::Sweep(a) => sweep(&res, a),
        Command::Certify(a) => certify(&res, a),
        Command::FigureData(a) => figure_data(&res, a),
        Command::Asymptotics => asymptotics(&res),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
