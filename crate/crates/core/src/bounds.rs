//! Closed-form tail bounds and rates: near-regular and regular-variant
//! bounds with their thresholds on `a`, the explicit 3-AP bound, Azuma
//! inequalities, p-model rates with their δ window, binomial tails, and the
//! transfer from the m-model to the p-model.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::combinatorics::binom_big;
use crate::error::{Error, Result};

/// Which bound a query evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "thm1.2")]
    NearRegular,
    #[serde(rename = "prop3.1")]
    RegularVariant,
    #[serde(rename = "thm5.2")]
    Ap3Explicit,
    #[serde(rename = "azuma")]
    Azuma,
    #[serde(rename = "azuma-truncated")]
    AzumaTruncated,
    #[serde(rename = "pmodel-rate")]
    PModelRate,
    #[serde(rename = "binom-tail")]
    BinomTail,
}

impl TheoremId {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidParameter(format!("unknown theorem `{s}`")))
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::NearRegular => "thm1.2",
            TheoremId::RegularVariant => "prop3.1",
            TheoremId::Ap3Explicit => "thm5.2",
            TheoremId::Azuma => "azuma",
            TheoremId::AzumaTruncated => "azuma-truncated",
            TheoremId::PModelRate => "pmodel-rate",
            TheoremId::BinomTail => "binom-tail",
        }
    }
}

/// Finite stand-ins for the unspecified polynomial and exponential
/// constants: the bound reads N^{c1}·exp(−c2·…). `c2` is held as its
/// logarithm since the default underflows for r ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "ConstantsFile", into = "ConstantsFile")]
pub struct ConstantsPack {
    pub c1: f64,
    pub ln_c2: f64,
}

#[derive(Serialize, Deserialize)]
struct ConstantsFile {
    c1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ln_c2: Option<f64>,
}

impl From<ConstantsFile> for ConstantsPack {
    fn from(f: ConstantsFile) -> Self {
        let ln_c2 = f.ln_c2.or(f.c2.map(f64::ln)).unwrap_or(0.0);
        ConstantsPack { c1: f.c1, ln_c2 }
    }
}

impl From<ConstantsPack> for ConstantsFile {
    fn from(c: ConstantsPack) -> Self {
        ConstantsFile {
            c1: c.c1,
            c2: None,
            ln_c2: Some(c.ln_c2),
        }
    }
}

impl ConstantsPack {
    pub fn new(c1: f64, c2: f64) -> Self {
        ConstantsPack { c1, ln_c2: c2.ln() }
    }

    /// The shipped default c1 = k², c2 = (10·k!)^{−10^r}. These are not
    /// derived from any proof and only make the bounds computable.
    pub fn default_for(k: usize, r: usize) -> Self {
        ConstantsPack {
            c1: (k * k) as f64,
            ln_c2: -(10f64.powi(r as i32)) * ln_big_constant(k),
        }
    }
}

/// ln(10·k!).
fn ln_big_constant(k: usize) -> f64 {
    10f64.ln() + ln_gamma(k as f64 + 1.0)
}

/// Variant of the p-model rate denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateVariant {
    /// 2k²(1−p).
    #[default]
    Generic,
    /// 3-APs: 18(1−p).
    Ap3,
    /// Sidon quadruples: 32(1−p).
    Sidon,
}

/// Parameters of a bound evaluation. Unused fields are ignored by each
/// theorem; missing required ones are reported by name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundQuery {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Maximum r-degree Δ_r.
    #[serde(rename = "Delta_r", default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<f64>,
    /// Edge count e(H).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Increment bounds for the Azuma evaluators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    /// Σ P(|X_i| > c_i) for the truncated Azuma bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_sum: Option<f64>,
    /// Factor replacing `≪` in asymptotic side conditions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<RateVariant>,
    /// The hypergraph is also vertex-regular (narrows some side conditions).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::MissingInput(name.to_string()))
}

impl BoundQuery {
    /// Parses JSON, also accepting unquoted keys such as `{N:101,m:50}`.
    pub fn from_json_relaxed(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(&quote_bare_keys(text))?)
    }

    /// Sets a numeric field by name, as used by grid sweeps.
    pub fn set(&mut self, field: &str, value: f64) -> Result<()> {
        match field {
            "N" => self.n = Some(value),
            "k" => self.k = Some(value as usize),
            "r" => self.r = Some(value as usize),
            "m" => self.m = Some(value),
            "p" => self.p = Some(value),
            "a" => self.a = Some(value),
            "delta" => self.delta = Some(value),
            "eta" => self.eta = Some(value),
            "Delta_r" => self.max_degree = Some(value),
            "h" => self.h = Some(value),
            "tail_sum" => self.tail_sum = Some(value),
            "rho" => self.rho = Some(value),
            other => {
                return Err(Error::InvalidParameter(format!("cannot sweep field `{other}`")));
            }
        }
        Ok(())
    }
}

/// Wraps bare object keys in quotes so relaxed inline JSON parses.
pub fn quote_bare_keys(text: &str) -> String {
    let re = regex::Regex::new(r#"([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:"#).unwrap();
    re.replace_all(text, r#"$1"$2":"#).into_owned()
}

/// A named side condition of a theorem and whether it holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Value of a bound together with the status of its side conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub theorem: TheoremId,
    pub value: f64,
    pub log_value: f64,
    pub valid: bool,
    pub conditions: Vec<SideCondition>,
    pub extras: BTreeMap<String, f64>,
    pub note: Option<String>,
}

impl BoundResult {
    fn new(theorem: TheoremId, log_value: f64) -> Self {
        BoundResult {
            theorem,
            value: log_value.exp(),
            log_value,
            valid: true,
            conditions: Vec::new(),
            extras: BTreeMap::new(),
            note: None,
        }
    }

    fn condition(&mut self, name: &str, holds: bool, detail: String) {
        self.valid &= holds;
        self.conditions.push(SideCondition {
            name: name.to_string(),
            holds,
            detail,
        });
    }
}

/// Dispatches on the theorem id.
pub fn evaluate(theorem: TheoremId, q: &BoundQuery, constants: Option<&ConstantsPack>) -> Result<BoundResult> {
    match theorem {
        TheoremId::NearRegular => nearreg_bound(q, need_constants(constants)?),
        TheoremId::RegularVariant => regular_variant_bound(q, need_constants(constants)?),
        TheoremId::Ap3Explicit => ap3_explicit_bound(need(q.n, "N")?, need(q.m, "m")?, need(q.a, "a")?),
        TheoremId::Azuma => azuma(need_ref(&q.c, "c")?, need(q.a, "a")?),
        TheoremId::AzumaTruncated => azuma_truncated(
            need_ref(&q.c, "c")?,
            need(q.a, "a")?,
            need(q.n, "N")?,
            need(q.tail_sum, "tail_sum")?,
        ),
        TheoremId::PModelRate => pmodel_rate(q),
        TheoremId::BinomTail => {
            let n = need(q.n, "N")?;
            let p = need(q.p, "p")?;
            let m = need(q.m, "m")?;
            if n < 0.0 || n.fract() != 0.0 || m < 0.0 || m.fract() != 0.0 {
                return Err(Error::InvalidParameter("N and m must be nonnegative integers".into()));
            }
            let mut res = BoundResult::new(TheoremId::BinomTail, binom_log_tail(n as u64, p, m as u64)?);
            res.extras.insert("pmf".into(), binom_pmf(n as u64, p, m as u64)?);
            Ok(res)
        }
    }
}

fn need_ref<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::MissingInput(name.to_string()))
}

fn need_constants(c: Option<&ConstantsPack>) -> Result<&ConstantsPack> {
    c.ok_or_else(|| Error::MissingInput("constants pack".into()))
}

/// ln of N^{c1}·exp(−c2·a^{2/r}/(mΔ_r^{2/r})).
fn log_display_bound(n: f64, m: f64, a: f64, r: usize, max_degree: f64, c: &ConstantsPack) -> f64 {
    let e = 2.0 / r as f64;
    let log_ratio = c.ln_c2 + e * a.ln() - m.ln() - e * max_degree.ln();
    c.c1 * n.ln() - log_ratio.exp()
}

struct NearRegParams {
    n: f64,
    k: usize,
    r: usize,
    m: f64,
    a: f64,
    eta: f64,
    max_degree: f64,
    h: f64,
}

fn nearreg_params(q: &BoundQuery) -> Result<NearRegParams> {
    let p = NearRegParams {
        n: need(q.n, "N")?,
        k: need(q.k, "k")?,
        r: need(q.r, "r")?,
        m: need(q.m, "m")?,
        a: need(q.a, "a")?,
        eta: q.eta.unwrap_or(0.0),
        max_degree: need(q.max_degree, "Delta_r")?,
        h: need(q.h, "h")?,
    };
    if p.r == 0 || p.r > p.k {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= k (r={}, k={})", p.r, p.k)));
    }
    if !(p.a > 0.0) || !(p.m > 0.0) || p.m > p.n || !(p.max_degree > 0.0) || p.eta < 0.0 {
        return Err(Error::InvalidParameter(
            "need a > 0, 0 < m <= N, Delta_r > 0 and eta >= 0".into(),
        ));
    }
    Ok(p)
}

/// ln of (10k!)^{10^r}·h·(η·(m/N)^{e})^{r/(r−d)}; −∞ when η = 0 or r = 1.
fn log_threshold(p: &NearRegParams, e: usize, d: usize) -> f64 {
    if p.eta == 0.0 || p.r <= d {
        return f64::NEG_INFINITY;
    }
    let inner = p.eta.ln() + e as f64 * (p.m / p.n).ln();
    10f64.powi(p.r as i32) * ln_big_constant(p.k) + p.h.ln() + p.r as f64 / (p.r - d) as f64 * inner
}

/// Bound for (r−1, η)-near-regular hypergraphs with maximum r-degree Δ_r.
/// Valid when a clears the threshold and η ≤ 3^{−r+1}.
pub fn nearreg_bound(q: &BoundQuery, c: &ConstantsPack) -> Result<BoundResult> {
    let p = nearreg_params(q)?;
    let mut res = BoundResult::new(
        TheoremId::NearRegular,
        log_display_bound(p.n, p.m, p.a, p.r, p.max_degree, c),
    );
    let lt = log_threshold(&p, p.k - 1, 1);
    res.extras.insert("log_threshold".into(), lt);
    res.condition(
        "a >= threshold",
        p.a.ln() >= lt,
        format!("ln a = {:.6}, ln threshold = {lt:.6}", p.a.ln()),
    );
    let eta_max = 3f64.powi(1 - p.r as i32);
    res.condition(
        "eta <= 3^(1-r)",
        p.eta <= eta_max,
        format!("eta = {}, limit = {eta_max}", p.eta),
    );
    Ok(res)
}

/// Variant for hypergraphs that are also vertex-regular, r ≥ 3: same value,
/// smaller threshold on a.
pub fn regular_variant_bound(q: &BoundQuery, c: &ConstantsPack) -> Result<BoundResult> {
    let p = nearreg_params(q)?;
    if p.r < 3 {
        return Err(Error::InvalidParameter(format!("regular variant needs r >= 3 (r={})", p.r)));
    }
    let mut res = BoundResult::new(
        TheoremId::RegularVariant,
        log_display_bound(p.n, p.m, p.a, p.r, p.max_degree, c),
    );
    let lt = log_threshold(&p, p.k - 2, 2);
    res.extras.insert("log_threshold".into(), lt);
    res.condition(
        "a >= threshold",
        p.a.ln() >= lt,
        format!("ln a = {:.6}, ln threshold = {lt:.6}", p.a.ln()),
    );
    let eta_max = 3f64.powi(1 - p.r as i32);
    res.condition(
        "eta <= 3^(1-r)",
        p.eta <= eta_max,
        format!("eta = {}, limit = {eta_max}", p.eta),
    );
    Ok(res)
}

/// Evaluates the near-regular bound for every 1 ≤ r′ ≤ r, using
/// `max_degrees[r′−1]` = Δ_{r′}, and returns the index of the smallest value
/// together with all evaluations.
pub fn nearreg_min_over_r(q: &BoundQuery, max_degrees: &[f64], c: &ConstantsPack) -> Result<(usize, Vec<BoundResult>)> {
    let r = need(q.r, "r")?;
    if max_degrees.len() < r {
        return Err(Error::MissingInput(format!("Delta_r' for r' = 1..={r}")));
    }
    let mut all = Vec::with_capacity(r);
    for rp in 1..=r {
        let mut sub = q.clone();
        sub.r = Some(rp);
        sub.max_degree = Some(max_degrees[rp - 1]);
        all.push(nearreg_bound(&sub, c)?);
    }
    let best = (0..r)
        .min_by(|&i, &j| all[i].log_value.total_cmp(&all[j].log_value))
        .unwrap()
        + 1;
    Ok((best, all))
}

/// (Nm+1)·exp(−a/(9m)) for 3-APs in Z/NZ, plus a* = 9m·ln(Nm+1), the
/// smallest a at which the bound drops below 1.
pub fn ap3_explicit_bound(n: f64, m: f64, a: f64) -> Result<BoundResult> {
    if !(m > 0.0) || !(a >= 0.0) {
        return Err(Error::InvalidParameter("need m > 0 and a >= 0".into()));
    }
    let ln_pre = (n * m + 1.0).ln();
    let mut res = BoundResult::new(TheoremId::Ap3Explicit, ln_pre - a / (9.0 * m));
    res.extras.insert("a_star".into(), 9.0 * m * ln_pre);
    Ok(res)
}

pub fn ap3_threshold(n: f64, m: f64) -> f64 {
    9.0 * m * (n * m + 1.0).ln()
}

/// exp(−a²/(2Σc_i²)). All c_i = 0 with a > 0 gives 0: the deviation is
/// then identically zero.
pub fn azuma(c: &[f64], a: f64) -> Result<BoundResult> {
    if c.iter().any(|&x| !(x >= 0.0)) || a < 0.0 {
        return Err(Error::InvalidParameter("need every c_i >= 0 and a >= 0".into()));
    }
    let sum_sq: f64 = c.iter().map(|x| x * x).sum();
    if a == 0.0 {
        return Ok(BoundResult::new(TheoremId::Azuma, 0.0));
    }
    if sum_sq == 0.0 {
        let mut res = BoundResult::new(TheoremId::Azuma, f64::NEG_INFINITY);
        res.note = Some("all increment bounds are zero: the deviation cannot exceed a > 0".into());
        return Ok(res);
    }
    Ok(BoundResult::new(TheoremId::Azuma, -a * a / (2.0 * sum_sq)))
}

/// exp(−a²/(2Σc_i²)) + N·Σ P(|X_i| > c_i).
pub fn azuma_truncated(c: &[f64], a: f64, n: f64, tail_sum: f64) -> Result<BoundResult> {
    if tail_sum < 0.0 {
        return Err(Error::InvalidParameter("tail_sum must be >= 0".into()));
    }
    let base = azuma(c, a)?;
    let value = base.value + n * tail_sum;
    let mut res = BoundResult::new(TheoremId::AzumaTruncated, value.ln());
    res.value = value;
    res.note = base.note;
    res.extras.insert("azuma_part".into(), base.value);
    Ok(res)
}

/// Rate δ²pN/(2k²(1−p)) of the p-model tail, with the δ window checked
/// when r, Δ_r and h are given (each `≪` replaced by a factor ρ).
pub fn pmodel_rate(q: &BoundQuery) -> Result<BoundResult> {
    let p = need(q.p, "p")?;
    let delta = need(q.delta, "delta")?;
    let n = need(q.n, "N")?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0,1), got {p}")));
    }
    let variant = q.variant.unwrap_or_default();
    let k = match variant {
        RateVariant::Generic => need(q.k, "k")?,
        RateVariant::Ap3 => 3,
        RateVariant::Sidon => 4,
    };
    let rate = delta * delta * p * n / (2.0 * (k * k) as f64 * (1.0 - p));
    let mut res = BoundResult::new(TheoremId::PModelRate, -rate);
    res.extras.insert("rate".into(), rate);
    if let (Some(r), Some(dr), Some(h)) = (q.r, q.max_degree, q.h) {
        let w = pmodel_window(k, r, n, p, dr, h, q.eta.unwrap_or(0.0), q.regular.unwrap_or(false))?;
        let rho = q.rho.unwrap_or(10.0);
        res.extras.insert("window_lower".into(), w.0);
        res.extras.insert("window_upper".into(), w.1);
        res.condition(
            "rho*lower <= delta",
            rho * w.0 <= delta,
            format!("lower = {:.6e}, rho = {rho}", w.0),
        );
        res.condition(
            "rho*delta <= upper",
            rho * delta <= w.1,
            format!("upper = {:.6e}, rho = {rho}", w.1),
        );
    }
    Ok(res)
}

/// The (lower, upper) ends of the admissible δ range. With `regular`, the
/// η term of the lower end becomes (η^r p^{2k−2r})^{1/(r−2)} (needs r ≥ 3).
#[allow(clippy::too_many_arguments)]
pub fn pmodel_window(k: usize, r: usize, n: f64, p: f64, max_degree: f64, h: f64, eta: f64, regular: bool) -> Result<(f64, f64)> {
    if r < 2 || r > k {
        return Err(Error::InvalidParameter(format!("window needs 2 <= r <= k (r={r})")));
    }
    let (kf, rf) = (k as f64, r as f64);
    let first = max_degree * (n * n.ln()).powf(rf / 2.0) / (p.powf(kf - rf / 2.0) * h);
    let second = if eta == 0.0 {
        0.0
    } else if regular {
        if r < 3 {
            return Err(Error::InvalidParameter("regular window needs r >= 3".into()));
        }
        (eta.powf(rf) * p.powf(2.0 * (kf - rf))).powf(1.0 / (rf - 2.0))
    } else {
        (eta.powf(rf) * p.powf(kf - rf)).powf(1.0 / (rf - 1.0))
    };
    let third = 1.0 / (p * n).sqrt();
    let upper = (p.powf(kf - rf) * h / (n.powf(rf) * max_degree)).powf(1.0 / (rf - 1.0));
    Ok((first.max(second).max(third), upper))
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must lie in [0,1], got {p}")))
    }
}

/// ln b_{N,p}(m).
pub fn binom_log_pmf(n: u64, p: f64, m: u64) -> Result<f64> {
    check_p(p)?;
    if m > n {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 0.0 {
        return Ok(if m == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if p == 1.0 {
        return Ok(if m == n { 0.0 } else { f64::NEG_INFINITY });
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(ln_gamma(nf + 1.0) - ln_gamma(mf + 1.0) - ln_gamma(nf - mf + 1.0)
        + mf * p.ln()
        + (nf - mf) * (-p).ln_1p())
}

pub fn binom_pmf(n: u64, p: f64, m: u64) -> Result<f64> {
    Ok(binom_log_pmf(n, p, m)?.exp())
}

/// ln B_{N,p}(m) = ln P(Bin(N,p) ≥ m), by log-sum-exp over the pmf terms.
pub fn binom_log_tail(n: u64, p: f64, m: u64) -> Result<f64> {
    check_p(p)?;
    if m == 0 {
        return Ok(0.0);
    }
    if m > n {
        return Ok(f64::NEG_INFINITY);
    }
    let terms: Vec<f64> = (m..=n).map(|i| binom_log_pmf(n, p, i)).collect::<Result<_>>()?;
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(top);
    }
    Ok(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

pub fn binom_tail(n: u64, p: f64, m: u64) -> Result<f64> {
    Ok(binom_log_tail(n, p, m)?.exp())
}

/// The same tail through the regularized incomplete beta function,
/// P(Bin(N,p) ≥ m) = I_p(m, N−m+1).
pub fn binom_tail_beta(n: u64, p: f64, m: u64) -> Result<f64> {
    check_p(p)?;
    if m == 0 {
        return Ok(1.0);
    }
    if m > n {
        return Ok(0.0);
    }
    Ok(beta_reg(m as f64, (n - m + 1) as f64, p))
}

/// m = ⌊pN + x·√(Np(1−p))⌋, the tail index at normalized distance x.
pub fn tail_index(n: u64, p: f64, x: f64) -> u64 {
    let nf = n as f64;
    (p * nf + x * (nf * p * (1.0 - p)).sqrt()).floor().max(0.0) as u64
}

/// Log-scale prediction −x²/2 for ln B_{N,p}(⌊pN + x√(Npq)⌋).
pub fn stirling_log_tail(_n: u64, _p: f64, x: f64) -> f64 {
    -x * x / 2.0
}

/// Exact b_{N,p}(m) for rational p.
pub fn binom_pmf_exact(n: u64, p: &BigRational, m: u64) -> BigRational {
    if m > n {
        return BigRational::zero();
    }
    let q = BigRational::one() - p;
    BigRational::from_integer(binom_big(n, m))
        * num_traits::pow(p.clone(), m as usize)
        * num_traits::pow(q, (n - m) as usize)
}

/// P(D(B_p) > a) = Σ_m b_{N,p}(m)·P(N(B_m) > p^k·h + a), where `m_tail(m, c)`
/// returns P(N(B_m) > c).
pub fn pmodel_transfer(n: u64, p: f64, mut m_tail: impl FnMut(u64) -> Result<f64>) -> Result<f64> {
    let mut total = 0.0;
    for m in 0..=n {
        let w = binom_pmf(n, p, m)?;
        if w > 0.0 {
            total += w * m_tail(m)?;
        }
    }
    Ok(total)
}

/// Exact version of [`pmodel_transfer`] for rational p.
pub fn pmodel_transfer_exact(
    n: u64,
    p: &BigRational,
    mut m_tail: impl FnMut(u64) -> Result<BigRational>,
) -> Result<BigRational> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::InvalidParameter("p must lie in [0,1]".into()));
    }
    let mut total = BigRational::zero();
    for m in 0..=n {
        let w = binom_pmf_exact(n, p, m);
        if !w.is_zero() {
            total += w * m_tail(m)?;
        }
    }
    Ok(total)
}

/// p^k·h as an exact rational.
pub fn pmodel_mean_exact(p: &BigRational, k: usize, h: u64) -> BigRational {
    num_traits::pow(p.clone(), k) * BigRational::from_integer(BigInt::from(h))
}
