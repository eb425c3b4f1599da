//! Adaptive Gauss-Kronrod integration over the real line.
//!
//! The line is cut at the caller's breakpoints into finite panels plus two tails.
//! Tails beyond the pivot `L` are mapped onto (0, 1] by ω = ±L/t. All panels share
//! one global error budget: the panel with the largest error in the worst-performing
//! component is bisected until every component meets `max(rel_tol·|I|, abs_tol)`.
//!
//! Several integrands that share expensive setup (the response matrix, the thermal
//! factors) are integrated together through [`integrate_real_line_vec`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections of any initial panel.
    pub max_depth: u32,
    /// Tail pivot as a multiple of the largest breakpoint magnitude (and of 1).
    pub tail_cut: f64,
    /// Shift applied to a node where the integrand is not finite.
    pub singular_offset: f64,
    /// Hard cap on the number of live panels.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 50,
            tail_cut: 50.0,
            singular_offset: 1e-8,
            max_panels: 20_000,
        }
    }
}

impl QuadratureConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| {
            Err(Error::InvalidParameter {
                name,
                value,
                reason,
            })
        };
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol", self.rel_tol, "must be positive");
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol", self.abs_tol, "must be positive");
        }
        if self.max_depth < 10 {
            return bad("max_depth", self.max_depth as f64, "must be at least 10");
        }
        if !(self.tail_cut >= 10.0) {
            return bad("tail_cut", self.tail_cut, "must be at least 10");
        }
        if !(self.singular_offset > 0.0) {
            return bad("singular_offset", self.singular_offset, "must be positive");
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    pub fn require(self, name: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                name,
                value: self.value,
                error: self.error_estimate,
            })
        }
    }
}

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_866_246,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Map {
    LeftTail,
    Finite,
    RightTail,
}

#[derive(Debug, Clone)]
struct Panel<const N: usize> {
    map: Map,
    a: f64,
    b: f64,
    depth: u32,
    value: [f64; N],
    error: [f64; N],
}

struct Evaluator<'f, F, const N: usize> {
    f: &'f F,
    pivot: f64,
    offset: f64,
    evaluations: usize,
}

impl<F, const N: usize> Evaluator<'_, F, N>
where
    F: Fn(f64) -> [f64; N],
{
    /// Integrand in the panel's own variable, Jacobian included.
    fn mapped(&mut self, map: Map, t: f64, toward: f64) -> [f64; N] {
        let (omega, jac) = match map {
            Map::Finite => (t, 1.0),
            Map::RightTail => (self.pivot / t, self.pivot / (t * t)),
            Map::LeftTail => (-self.pivot / t, self.pivot / (t * t)),
        };
        let mut out = self.raw(omega, toward);
        for v in &mut out {
            *v *= jac;
        }
        out
    }

    fn raw(&mut self, omega: f64, toward: f64) -> [f64; N] {
        self.evaluations += 1;
        let out = (self.f)(omega);
        if out.iter().all(|v| v.is_finite()) {
            return out;
        }
        // step off a removable singularity into the panel interior
        self.evaluations += 1;
        let nudged = omega + self.offset * (toward - omega).signum() * omega.abs().max(1.0);
        (self.f)(nudged)
    }

    fn kronrod(&mut self, map: Map, a: f64, b: f64, depth: u32) -> Panel<N> {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = self.mapped(map, center, center);
        let mut res_k = [0.0; N];
        let mut res_g = [0.0; N];
        let mut res_abs = [0.0; N];
        let mut fv1 = [[0.0; N]; 10];
        let mut fv2 = [[0.0; N]; 10];
        for k in 0..N {
            res_k[k] = WGK[10] * fc[k];
            res_abs[k] = WGK[10] * fc[k].abs();
        }
        for j in 0..10 {
            let dx = half * XGK[j];
            let f1 = self.mapped(map, center - dx, center);
            let f2 = self.mapped(map, center + dx, center);
            for k in 0..N {
                let s = f1[k] + f2[k];
                res_k[k] += WGK[j] * s;
                res_abs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
                if j % 2 == 1 {
                    res_g[k] += WG[j / 2] * s;
                }
            }
            fv1[j] = f1;
            fv2[j] = f2;
        }
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let habs = half.abs();
        for k in 0..N {
            let mean = 0.5 * res_k[k];
            let mut res_asc = WGK[10] * (fc[k] - mean).abs();
            for j in 0..10 {
                res_asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
            }
            res_asc *= habs;
            let abs_total = res_abs[k] * habs;
            let mut err = ((res_k[k] - res_g[k]) * half).abs();
            if res_asc != 0.0 && err != 0.0 {
                err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
            }
            if abs_total > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
                err = err.max(50.0 * f64::EPSILON * abs_total);
            }
            value[k] = res_k[k] * half;
            error[k] = if value[k].is_finite() && err.is_finite() {
                err
            } else {
                f64::INFINITY
            };
        }
        Panel {
            map,
            a,
            b,
            depth,
            value,
            error,
        }
    }
}

fn tolerance(cfg: &QuadratureConfig, value: f64) -> f64 {
    (cfg.rel_tol * value.abs()).max(cfg.abs_tol)
}

/// Integrates `f` over ℝ. `breakpoints` mark removable singularities and sharp
/// features; non-finite entries are ignored.
pub fn integrate_real_line<F>(f: F, breakpoints: &[f64], cfg: &QuadratureConfig) -> IntegralResult
where
    F: Fn(f64) -> f64,
{
    let [r] = integrate_real_line_vec(|w| [f(w)], breakpoints, cfg);
    r
}

/// Integrates `N` integrands simultaneously on a shared adaptive partition.
///
/// Each component gets its own value, error estimate and convergence flag; the
/// evaluation count is shared.
pub fn integrate_real_line_vec<F, const N: usize>(
    f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> [IntegralResult; N]
where
    F: Fn(f64) -> [f64; N],
{
    let mut points: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| b.is_finite())
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let extent = points.iter().fold(1.0f64, |m, b| m.max(b.abs()));
    let pivot = cfg.tail_cut * extent;

    let mut eval = Evaluator {
        f: &f,
        pivot,
        offset: cfg.singular_offset,
        evaluations: 0,
    };

    let mut panels: Vec<Panel<N>> = Vec::with_capacity(64);
    panels.push(eval.kronrod(Map::LeftTail, 0.0, 1.0, 0));
    let mut left = -pivot;
    for &p in points.iter().chain(std::iter::once(&pivot)) {
        if p > left {
            panels.push(eval.kronrod(Map::Finite, left, p, 0));
            left = p;
        }
    }
    panels.push(eval.kronrod(Map::RightTail, 0.0, 1.0, 0));

    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    for pan in &panels {
        for k in 0..N {
            total[k] += pan.value[k];
            total_err[k] += pan.error[k];
        }
    }

    let mut converged = [false; N];
    loop {
        let mut worst: Option<(usize, f64)> = None;
        for k in 0..N {
            let ratio = total_err[k] / tolerance(cfg, total[k]);
            converged[k] = ratio <= 1.0;
            if !converged[k] && worst.is_none_or(|(_, r)| ratio > r) {
                worst = Some((k, ratio));
            }
        }
        let Some((k, _)) = worst else { break };
        if panels.len() >= cfg.max_panels {
            break;
        }
        let target = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < cfg.max_depth)
            .max_by(|(_, x), (_, y)| x.error[k].total_cmp(&y.error[k]))
            .map(|(i, _)| i);
        let Some(i) = target else { break };
        if panels[i].error[k] == 0.0 {
            break;
        }
        let old = panels.swap_remove(i);
        let mid = 0.5 * (old.a + old.b);
        if !(mid > old.a && mid < old.b) {
            // interval exhausted at machine resolution; cannot split further
            let mut frozen = old;
            frozen.depth = cfg.max_depth;
            panels.push(frozen);
            continue;
        }
        let lo = eval.kronrod(old.map, old.a, mid, old.depth + 1);
        let hi = eval.kronrod(old.map, mid, old.b, old.depth + 1);
        for c in 0..N {
            total[c] += lo.value[c] + hi.value[c] - old.value[c];
            total_err[c] += lo.error[c] + hi.error[c] - old.error[c];
        }
        panels.push(lo);
        panels.push(hi);
    }

    // final left-to-right compensated sum for reproducible values
    panels.sort_by(|x, y| x.map.cmp(&y.map).then(x.a.total_cmp(&y.a)));
    let evaluations = eval.evaluations;
    std::array::from_fn(|k| {
        let value = neumaier_sum(panels.iter().map(|p| p.value[k]));
        let error_estimate = neumaier_sum(panels.iter().map(|p| p.error[k]));
        let converged = error_estimate.is_finite()
            && value.is_finite()
            && error_estimate <= tolerance(cfg, value);
        IntegralResult {
            value,
            error_estimate,
            evaluations,
            converged,
        }
    })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
