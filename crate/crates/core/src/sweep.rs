//! Parameter sweeps, threshold location and CSV/JSON emission.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::analytic::{self, optimal_input, Regime, SymmetricParams};
use crate::capacity::{two_qubit_capacity_with, CapacityPath};
use crate::channel::{preset_depolarizing, preset_symmetric, ChannelSpec};
use crate::error::{Error, Result};
use crate::pauli::PureState;
use crate::search::{output_entropy, SearchConfig};

/// Deviation from unit sum that custom weights may have before being rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;
/// Offset from the threshold at which one-sided slopes are taken.
pub const SLOPE_OFFSET: f64 = 1e-4;
/// Half-width of the central difference used for each slope.
pub const SLOPE_STEP: f64 = 1e-5;
const BISECTION_WIDTH: f64 = 1e-8;
const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Symmetric,
    Depolarizing,
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Symmetric => "symmetric",
            Family::Depolarizing => "depolarizing",
            Family::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordRegime {
    Product,
    Entangled,
    Boundary,
    Unknown,
}

impl RecordRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordRegime::Product => "product",
            RecordRegime::Entangled => "entangled",
            RecordRegime::Boundary => "boundary",
            RecordRegime::Unknown => "unknown",
        }
    }
}

impl From<Regime> for RecordRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Product => RecordRegime::Product,
            Regime::Entangled => RecordRegime::Entangled,
            Regime::Boundary => RecordRegime::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMethod {
    Analytic,
    Numeric,
}

impl SweepMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMethod::Analytic => "analytic",
            SweepMethod::Numeric => "numeric",
        }
    }
}

/// A channel family with its shape parameter fixed, awaiting `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelChoice {
    Symmetric { p: f64 },
    Depolarizing { x: f64 },
    Custom { q: [f64; 4] },
}

impl ChannelChoice {
    pub fn family(&self) -> Family {
        match self {
            ChannelChoice::Symmetric { .. } => Family::Symmetric,
            ChannelChoice::Depolarizing { .. } => Family::Depolarizing,
            ChannelChoice::Custom { .. } => Family::Custom,
        }
    }

    /// `p`, `x`, or `q0` for custom weights.
    pub fn param(&self) -> f64 {
        match self {
            ChannelChoice::Symmetric { p } => *p,
            ChannelChoice::Depolarizing { x } => *x,
            ChannelChoice::Custom { q } => q[0],
        }
    }

    pub fn with_param(&self, value: f64) -> Result<Self> {
        match self {
            ChannelChoice::Symmetric { .. } => Ok(ChannelChoice::Symmetric { p: value }),
            ChannelChoice::Depolarizing { .. } => Ok(ChannelChoice::Depolarizing { x: value }),
            ChannelChoice::Custom { .. } => Err(Error::InvalidChannel("custom weights have no scalar parameter".into())),
        }
    }

    pub fn spec(&self, mu: f64) -> Result<ChannelSpec> {
        match self {
            ChannelChoice::Symmetric { p } => preset_symmetric(*p, mu),
            ChannelChoice::Depolarizing { x } => preset_depolarizing(*x, mu),
            ChannelChoice::Custom { q } => ChannelSpec::new(*q, mu),
        }
    }
}

/// Validates user weights, renormalizing only deviations below 1e-9.
pub fn custom_weights(q: &[f64]) -> Result<[f64; 4]> {
    let q: [f64; 4] = q
        .try_into()
        .map_err(|_| Error::InvalidChannel(format!("expected 4 weights, got {}", q.len())))?;
    if q.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidChannel(format!("weights {q:?} must be non-negative")));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
        return Err(Error::InvalidChannel(format!("weights sum to {total}, not 1")));
    }
    Ok(q.map(|x| x / total))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub family: Family,
    pub param: f64,
    pub mu: f64,
    pub s_min_bits: f64,
    pub capacity_bits: f64,
    pub regime: RecordRegime,
    pub method: SweepMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub record: SweepRecord,
    pub state: PureState,
    pub converged: bool,
    pub saturation_gap: f64,
}

/// Capacity at one point. The symmetric family uses the closed form;
/// other families, including custom weights that happen to be symmetric,
/// go through the numerical search.
pub fn evaluate_point(choice: &ChannelChoice, mu: f64, config: &SearchConfig) -> Result<PointResult> {
    let spec = choice.spec(mu)?;
    let path = match choice {
        ChannelChoice::Symmetric { .. } => CapacityPath::Auto,
        _ => CapacityPath::ForceNumeric,
    };
    let r = two_qubit_capacity_with(&spec, config, path)?;
    let (regime, method) = match r.regime {
        Some(reg) => (reg.into(), SweepMethod::Analytic),
        None => (RecordRegime::Unknown, SweepMethod::Numeric),
    };
    Ok(PointResult {
        record: SweepRecord {
            family: choice.family(),
            param: choice.param(),
            mu,
            s_min_bits: r.s_min_bits,
            capacity_bits: 2.0 - r.s_min_bits,
            regime,
            method,
        },
        state: r.state,
        converged: r.converged,
        saturation_gap: r.saturation_gap,
    })
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::OutOfRange { name: "steps", value: steps as f64, range: "[2, inf)" });
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidChannel(format!("bad range [{lo}, {hi}]")));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k == steps - 1 { hi } else { lo + (hi - lo) * k as f64 / n })
        .collect())
}

/// Seed for grid point `index`, independent of evaluation order.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub all_converged: bool,
}

fn run_points(points: Vec<(ChannelChoice, f64)>, config: &SearchConfig) -> Result<SweepOutcome> {
    let results: Vec<Result<PointResult>> = points
        .par_iter()
        .enumerate()
        .map(|(k, (choice, mu))| evaluate_point(choice, *mu, &config.with_seed(point_seed(config.seed, k))))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut all_converged = true;
    for r in results {
        let r = r?;
        all_converged &= r.converged;
        records.push(r.record);
    }
    Ok(SweepOutcome { records, all_converged })
}

pub fn sweep_mu(
    choice: &ChannelChoice,
    mu_min: f64,
    mu_max: f64,
    steps: usize,
    config: &SearchConfig,
) -> Result<SweepOutcome> {
    if !(0.0..=1.0).contains(&mu_min) || !(0.0..=1.0).contains(&mu_max) || mu_min > mu_max {
        return Err(Error::InvalidChannel(format!("need 0 <= mu_min <= mu_max <= 1, got [{mu_min}, {mu_max}]")));
    }
    let points = linear_grid(mu_min, mu_max, steps)?.into_iter().map(|mu| (*choice, mu)).collect();
    run_points(points, config)
}

pub fn sweep_param(
    choice: &ChannelChoice,
    param_min: f64,
    param_max: f64,
    mu: f64,
    steps: usize,
    config: &SearchConfig,
) -> Result<SweepOutcome> {
    let points = linear_grid(param_min, param_max, steps)?
        .into_iter()
        .map(|v| choice.with_param(v).map(|c| (c, mu)))
        .collect::<Result<Vec<_>>>()?;
    for (c, _) in &points {
        c.spec(mu)?;
    }
    run_points(points, config)
}

/// `S(E(|00>)) - S(E(Bell))`; positive when the Bell input is better.
pub fn candidate_entropy_difference(spec: &ChannelSpec) -> Result<f64> {
    Ok(output_entropy(spec, &PureState::basis(0))? - output_entropy(spec, &PureState::bell())?)
}

/// Bisection for a sign change of `f` on `[lo, hi]`; `None` without a strict sign change.
pub fn bisect_sign_change(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, width: f64) -> Result<Option<f64>> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa.abs() <= SIGN_TOLERANCE || fb.abs() <= SIGN_TOLERANCE || fa.signum() == fb.signum() {
        return Ok(None);
    }
    let sa = fa.signum();
    while b - a > width {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Memory value where the Bell and `|00>` candidates swap order, if interior.
pub fn numeric_threshold(choice: &ChannelChoice) -> Result<Option<f64>> {
    bisect_sign_change(|mu| candidate_entropy_difference(&choice.spec(mu)?), 0.0, 1.0, BISECTION_WIDTH)
}

/// Central-difference derivative of `f` at `x` with half-width `h`.
pub fn central_difference(f: &impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Slopes of `f` just left and right of `x0`.
pub fn one_sided_slopes(f: &impl Fn(f64) -> Result<f64>, x0: f64, offset: f64, h: f64) -> Result<(f64, f64)> {
    Ok((central_difference(f, x0 - offset, h)?, central_difference(f, x0 + offset, h)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub family: Family,
    pub p: f64,
    /// `|4p - 1|` for the symmetric family.
    pub mu_t_analytic: Option<f64>,
    pub mu_t_numeric: Option<f64>,
    pub left_slope: Option<f64>,
    pub right_slope: Option<f64>,
    pub note: Option<String>,
}

pub fn threshold_report(choice: &ChannelChoice, config: &SearchConfig) -> Result<ThresholdReport> {
    let (mu_t_analytic, mut notes) = match choice {
        ChannelChoice::Symmetric { p } => {
            let t = analytic::threshold(*p)?;
            let mut notes = Vec::new();
            if 4.0 * p - 1.0 < 0.0 {
                notes.push(format!("literal 4p-1 = {} is negative; threshold taken as |4p-1|", format_sig(4.0 * p - 1.0, 9)));
            }
            (Some(t), notes)
        }
        ChannelChoice::Depolarizing { x } => {
            preset_depolarizing(*x, 0.0)?;
            (None, Vec::new())
        }
        ChannelChoice::Custom { .. } => (None, Vec::new()),
    };
    let mu_t_numeric = numeric_threshold(choice)?;

    let interior_analytic = mu_t_analytic.filter(|t| *t > 0.0 && *t < 1.0);
    if mu_t_analytic.is_some() && interior_analytic.is_none() {
        notes.push("no interior threshold".into());
    } else if mu_t_analytic.is_none() && mu_t_numeric.is_none() {
        notes.push("no interior crossing of the Bell and |00> candidates".into());
    }

    let kink = interior_analytic.or(mu_t_numeric).filter(|t| *t - SLOPE_OFFSET - SLOPE_STEP >= 0.0 && *t + SLOPE_OFFSET + SLOPE_STEP <= 1.0);
    let (left_slope, right_slope) = match kink {
        Some(t) => {
            let capacity = |mu: f64| -> Result<f64> {
                match choice {
                    ChannelChoice::Symmetric { p } => analytic::capacity_symmetric(*p, mu),
                    _ => Ok(2.0 - evaluate_point(choice, mu, config)?.record.s_min_bits),
                }
            };
            let (l, r) = one_sided_slopes(&capacity, t, SLOPE_OFFSET, SLOPE_STEP)?;
            (Some(l), Some(r))
        }
        None => (None, None),
    };

    Ok(ThresholdReport {
        family: choice.family(),
        p: choice.param(),
        mu_t_analytic,
        mu_t_numeric,
        left_slope,
        right_slope,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

/// Closed-form regime and capacity for a symmetric point, exposed for reports.
pub fn symmetric_point(p: f64, mu: f64) -> Result<analytic::OptimalInputReport> {
    Ok(optimal_input(&SymmetricParams::new(p, mu)?))
}

/// Index of the sharpest slope break in an evenly spaced series.
///
/// Scores each interior point by how far its second difference exceeds the
/// mean of its neighbours' second differences, so smooth but strongly curved
/// stretches (for example near a pure output) do not register.
pub fn locate_kink(values: &[f64]) -> Option<usize> {
    if values.len() < 5 {
        return None;
    }
    let d2: Vec<f64> = values.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]).abs()).collect();
    (1..d2.len() - 1)
        .map(|k| (k + 1, d2[k] - 0.5 * (d2[k - 1] + d2[k + 1])))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(k, _)| k)
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn capacity_column(per_qubit: bool) -> &'static str {
    if per_qubit {
        "capacity_bits_per_qubit"
    } else {
        "capacity_bits"
    }
}

fn capacity_value(r: &SweepRecord, per_qubit: bool) -> f64 {
    if per_qubit {
        r.capacity_bits / 2.0
    } else {
        r.capacity_bits
    }
}

pub fn render_csv(records: &[SweepRecord], per_qubit: bool) -> String {
    let mut out = format!("family,param,mu,s_min_bits,{},regime,method\n", capacity_column(per_qubit));
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.family.as_str(),
            format_sig(r.param, 9),
            format_sig(r.mu, 9),
            format_sig(r.s_min_bits, 9),
            format_sig(capacity_value(r, per_qubit), 9),
            r.regime.as_str(),
            r.method.as_str(),
        ));
    }
    out
}

fn json_number(x: f64) -> Value {
    format_sig(x, 9)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

pub fn record_json(r: &SweepRecord, per_qubit: bool) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), Value::String(r.family.as_str().into()));
    m.insert("param".into(), json_number(r.param));
    m.insert("mu".into(), json_number(r.mu));
    m.insert("s_min_bits".into(), json_number(r.s_min_bits));
    m.insert(capacity_column(per_qubit).into(), json_number(capacity_value(r, per_qubit)));
    m.insert("regime".into(), Value::String(r.regime.as_str().into()));
    m.insert("method".into(), Value::String(r.method.as_str().into()));
    Value::Object(m)
}

pub fn render_json(records: &[SweepRecord], per_qubit: bool) -> String {
    let arr = Value::Array(records.iter().map(|r| record_json(r, per_qubit)).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("serializable");
    s.push('\n');
    s
}
