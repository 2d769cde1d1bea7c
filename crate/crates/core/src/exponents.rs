//! Exact admissibility predicates for exponent tuples.
//!
//! Every condition is affine in reciprocal exponents, so exponents are stored
//! as their reciprocals (`1/∞ = 0`) in exact rational arithmetic. No verdict
//! depends on floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Parses `10`, `-3/4`, `0.25` or `2.5e-1` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: '{s}'"));
    if let Some((a, b)) = t.split_once('/') {
        let num = parse_rational(a)?;
        let den = parse_rational(b)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: i128 = all.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = qi(10);
    let mut value = qi(num);
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Lebesgue-type exponent `p ∈ (0, ∞]`, stored as `1/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    recip: Q,
}

impl Exponent {
    pub fn infinity() -> Self {
        Exponent { recip: Q::zero() }
    }

    pub fn finite(p: Q) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidExponent(format!("exponent must be positive, got {p}")));
        }
        Ok(Exponent { recip: p.recip() })
    }

    pub fn int(p: i128) -> Self {
        Exponent::finite(qi(p)).expect("positive integer exponent")
    }

    /// Exponent with the given reciprocal; `0` is infinity.
    pub fn from_recip(recip: Q) -> Result<Self> {
        if recip.is_negative() {
            return Err(Error::InvalidExponent(format!(
                "reciprocal exponent must be non-negative, got {recip}"
            )));
        }
        Ok(Exponent { recip })
    }

    pub fn recip(&self) -> Q {
        self.recip
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    pub fn value(&self) -> Option<Q> {
        (!self.is_infinite()).then(|| self.recip.recip())
    }

    pub fn to_f64(&self) -> f64 {
        match self.value() {
            None => f64::INFINITY,
            Some(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`; requires `p ≥ 1`.
    pub fn conjugate(&self) -> Result<Self> {
        if self.recip > Q::one() {
            return Err(Error::InvalidExponent(format!(
                "conjugate needs p >= 1, got {self}"
            )));
        }
        Ok(Exponent {
            recip: Q::one() - self.recip,
        })
    }

    /// `p / k`, e.g. the halved exponents of the kernel norm.
    pub fn divided_by(&self, k: i128) -> Self {
        Exponent {
            recip: self.recip * qi(k),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Exponent::infinity()),
            other => Exponent::finite(parse_rational(other)?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod q_string {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `(n, σ, q̃, r̃, q, r)`: the object every admissibility predicate consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub n: u32,
    #[serde(with = "q_string")]
    pub sigma: Q,
    pub qt: Exponent,
    pub rt: Exponent,
    pub q: Exponent,
    pub r: Exponent,
}

impl ExponentTuple {
    pub fn new(n: u32, sigma: Q, qt: Exponent, rt: Exponent, q: Exponent, r: Exponent) -> Self {
        ExponentTuple {
            n,
            sigma,
            qt,
            rt,
            q,
            r,
        }
    }

    /// Parses a tuple from string entries (`inf` allowed).
    pub fn parse(n: u32, sigma: &str, qt: &str, rt: &str, q: &str, r: &str) -> Result<Self> {
        Ok(ExponentTuple {
            n,
            sigma: parse_rational(sigma)?,
            qt: qt.parse()?,
            rt: rt.parse()?,
            q: q.parse()?,
            r: r.parse()?,
        })
    }

    pub fn get(&self, field: Field) -> Exponent {
        match field {
            Field::Qt => self.qt,
            Field::Rt => self.rt,
            Field::Q => self.q,
            Field::R => self.r,
        }
    }

    pub fn set(&mut self, field: Field, e: Exponent) {
        match field {
            Field::Qt => self.qt = e,
            Field::Rt => self.rt = e,
            Field::Q => self.q = e,
            Field::R => self.r = e,
        }
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} sigma={} (qt,rt,q,r)=({},{},{},{})",
            self.n, self.sigma, self.qt, self.rt, self.q, self.r
        )
    }
}

/// Exponent slot of an [`ExponentTuple`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Qt,
    Rt,
    Q,
    R,
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "qt" => Ok(Field::Qt),
            "rt" => Ok(Field::Rt),
            "q" => Ok(Field::Q),
            "r" => Ok(Field::R),
            other => Err(Error::Parse(format!("unknown exponent field '{other}'"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::Qt => "qt",
            Field::Rt => "rt",
            Field::Q => "q",
            Field::R => "r",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionSet {
    /// Schrödinger admissible pairs `(q, r)`.
    Classical,
    /// Amalgam estimates with `L²` data (interpolated region).
    Cn2,
    /// Amalgam estimates with `Ḣ^σ` data.
    Theorem,
    /// Fixed-time kernel amalgam bound.
    Proposition,
    /// Interpolated estimates with `r̃ = 4`.
    Corollary,
}

impl FromStr for ConditionSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classical" | "admissible" => Ok(ConditionSet::Classical),
            "cn2" | "c-n2" => Ok(ConditionSet::Cn2),
            "theorem" => Ok(ConditionSet::Theorem),
            "proposition" | "prop" | "kernel" => Ok(ConditionSet::Proposition),
            "corollary" => Ok(ConditionSet::Corollary),
            other => Err(Error::Parse(format!("unknown condition set '{other}'"))),
        }
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionSet::Classical => "classical",
            ConditionSet::Cn2 => "cn2",
            ConditionSet::Theorem => "theorem",
            ConditionSet::Proposition => "proposition",
            ConditionSet::Corollary => "corollary",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

/// Which σ-regime of the kernel bound applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCase {
    /// `0 < σ < n/4`: condition (c3).
    SmallSigma,
    /// `n/4 < σ < n/2`: condition (c4).
    LargeSigma,
    /// `σ = n/4`: either condition suffices.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub passed: bool,
    /// Signed distance to violation (`> 0` strict pass, `0` on the boundary).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_q")]
    pub slack: Option<Q>,
}

mod opt_q {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_str(&q.to_string()),
            None => s.serialize_none(),
        }
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub verdict: Verdict,
    pub set: ConditionSet,
    pub constraints: Vec<ConstraintCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<KernelCase>,
}

impl RegionReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    /// Names of failed constraints.
    pub fn violations(&self) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Checker {
    checks: Vec<ConstraintCheck>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: Vec::new() }
    }

    fn push(&mut self, name: &str, passed: bool, slack: Option<Q>) -> bool {
        self.checks.push(ConstraintCheck {
            name: name.to_string(),
            passed,
            slack,
        });
        passed
    }

    /// `lhs < rhs`
    fn lt(&mut self, name: &str, lhs: Q, rhs: Q) -> bool {
        let slack = rhs - lhs;
        self.push(name, slack.is_positive(), Some(slack))
    }

    /// `lhs ≤ rhs`
    fn le(&mut self, name: &str, lhs: Q, rhs: Q) -> bool {
        let slack = rhs - lhs;
        self.push(name, !slack.is_negative(), Some(slack))
    }

    /// `lhs = rhs`; slack is `rhs - lhs`.
    fn eq(&mut self, name: &str, lhs: Q, rhs: Q) -> bool {
        let slack = rhs - lhs;
        self.push(name, slack.is_zero(), Some(slack))
    }

    fn flag(&mut self, name: &str, passed: bool) -> bool {
        self.push(name, passed, None)
    }

    /// `lo ≤ p ≤ ∞` stated on the reciprocal: `0 ≤ 1/p ≤ 1/lo`.
    fn at_least(&mut self, name: &str, e: Exponent, lo: i128) -> bool {
        self.le(name, e.recip(), q(1, lo))
    }

    fn finish(self, set: ConditionSet, case: Option<KernelCase>) -> RegionReport {
        let verdict = if self.checks.iter().all(|c| c.passed) {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        RegionReport {
            verdict,
            set,
            constraints: self.checks,
            case,
        }
    }
}

fn nq(n: u32) -> Q {
    qi(n as i128)
}

/// `q, r ≥ 2`, `2/q + n/r = n/2`, `(q, r, n) ≠ (2, ∞, 2)`.
pub fn is_schrodinger_admissible(qe: Exponent, r: Exponent, n: u32) -> RegionReport {
    let mut c = Checker::new();
    c.flag("n >= 1", n >= 1);
    c.at_least("q >= 2", qe, 2);
    c.at_least("r >= 2", r, 2);
    let n_q = nq(n);
    c.eq(
        "2/q + n/r = n/2",
        qi(2) * qe.recip() + n_q * r.recip(),
        n_q / qi(2),
    );
    let endpoint = qe.recip() == q(1, 2) && r.is_infinite() && n == 2;
    c.flag("(q,r,n) != (2,inf,2)", !endpoint);
    c.finish(ConditionSet::Classical, None)
}

/// The interpolated amalgam region with `L²` data.
pub fn satisfies_cn2(t: &ExponentTuple) -> RegionReport {
    let mut c = Checker::new();
    let n = nq(t.n);
    c.flag("n >= 1", t.n >= 1);
    c.at_least("qt >= 1", t.qt, 1);
    c.at_least("rt >= 1", t.rt, 1);
    c.at_least("q >= 2", t.q, 2);
    c.at_least("r >= 2", t.r, 2);
    // r̃ ≤ r  ⟺  1/r ≤ 1/r̃
    c.le("rt <= r", t.r.recip(), t.rt.recip());
    c.le(
        "2/q + n/r <= n/2",
        qi(2) * t.q.recip() + n * t.r.recip(),
        n / qi(2),
    );
    c.le(
        "n/2 <= 2/qt + n/rt",
        n / qi(2),
        qi(2) * t.qt.recip() + n * t.rt.recip(),
    );
    if t.n == 2 {
        c.flag("rt < inf (n = 2)", !t.rt.is_infinite());
        c.flag("r < inf (n = 2)", !t.r.is_infinite());
    }
    if t.n >= 3 {
        // r̃ ≤ 2n/(n-2)  ⟺  1/r̃ ≥ (n-2)/(2n)
        c.le("rt <= 2n/(n-2)", (n - qi(2)) / (qi(2) * n), t.rt.recip());
    }
    c.finish(ConditionSet::Cn2, None)
}

/// The `Ḣ^σ` amalgam Strichartz region.
pub fn satisfies_theorem(t: &ExponentTuple) -> RegionReport {
    let mut c = Checker::new();
    let n = nq(t.n);
    let s = t.sigma;
    c.flag("n >= 1", t.n >= 1);
    c.at_least("qt >= 2", t.qt, 2);
    c.lt("qt < q", t.q.recip(), t.qt.recip());
    c.lt("q < inf", Q::zero(), t.q.recip());
    c.at_least("rt >= 2", t.rt, 2);
    c.at_least("r >= 2", t.r, 2);
    let floor = ((n - qi(2)) / qi(4)).max(Q::zero());
    c.lt("sigma > max{0,(n-2)/4}", floor, s);
    c.lt("sigma < n/2", s, n / qi(2));
    c.lt(
        "(c1) 2/qt + (n-1)/rt > n/2 - sigma",
        n / qi(2) - s,
        qi(2) * t.qt.recip() + (n - qi(1)) * t.rt.recip(),
    );
    c.eq(
        "(c2) 2/q + n/r = n/2 - sigma - (n-1)/rt",
        qi(2) * t.q.recip() + n * t.r.recip(),
        n / qi(2) - s - (n - qi(1)) * t.rt.recip(),
    );
    c.finish(ConditionSet::Theorem, None)
}

/// Hypotheses of the fixed-time kernel bound, with the σ-case that applied.
pub fn satisfies_prop_kernel(n_dim: u32, sigma: Q, rt: Exponent, r: Exponent) -> RegionReport {
    let mut c = Checker::new();
    let n = nq(n_dim);
    c.flag("n >= 1", n_dim >= 1);
    c.at_least("rt >= 2", rt, 2);
    c.at_least("r >= 2", r, 2);
    let lo = c.lt("sigma > 0", Q::zero(), sigma);
    let hi = c.lt("sigma < n/2", sigma, n / qi(2));
    let lhs = (n - qi(1)) * rt.recip() + n * r.recip();
    let quarter = n / qi(4);
    let case = if !(lo && hi) {
        None
    } else if sigma < quarter {
        c.lt("(c3) (n-1)/rt + n/r < sigma", lhs, sigma);
        Some(KernelCase::SmallSigma)
    } else if sigma > quarter {
        c.lt("(c4) (n-1)/rt + n/r < n/2 - sigma", lhs, n / qi(2) - sigma);
        Some(KernelCase::LargeSigma)
    } else {
        // both bounds read the same at σ = n/4
        let slack3 = sigma - lhs;
        let slack4 = n / qi(2) - sigma - lhs;
        let slack = slack3.max(slack4);
        c.push("(c3) or (c4) at sigma = n/4", slack.is_positive(), Some(slack));
        Some(KernelCase::Boundary)
    };
    c.finish(ConditionSet::Proposition, case)
}

/// The interpolated region with `r̃ = 4`.
pub fn satisfies_corollary(t: &ExponentTuple) -> RegionReport {
    let mut c = Checker::new();
    let n = nq(t.n);
    let s = t.sigma;
    c.flag("n >= 1", t.n >= 1);
    c.eq("rt = 4", t.rt.recip(), q(1, 4));
    let floor = ((n - qi(2)) / qi(8)).max(Q::zero());
    c.lt("sigma > max{0,(n-2)/8}", floor, s);
    c.lt("sigma < n/4", s, n / qi(4));
    c.at_least("qt >= 1", t.qt, 1);
    c.eq(
        "(cc1) 2/q + n/r = n/2 - sigma",
        qi(2) * t.q.recip() + n * t.r.recip(),
        n / qi(2) - s,
    );
    c.lt("(c2c2) 2/qt > n/4 - sigma", n / qi(4) - s, qi(2) * t.qt.recip());
    c.lt("0 < 1/q", Q::zero(), t.q.recip());
    c.lt("1/q < 1/qt + 1/4", t.q.recip(), t.qt.recip() + q(1, 4));
    c.le("1/qt + 1/4 <= 1/2", t.qt.recip() + q(1, 4), q(1, 2));
    c.at_least("r >= 2", t.r, 2);
    if t.n == 2 {
        c.flag("r != inf (n = 2)", !t.r.is_infinite());
    }
    c.finish(ConditionSet::Corollary, None)
}

/// Dispatches a tuple to the predicate of `set`.
pub fn check(set: ConditionSet, t: &ExponentTuple) -> RegionReport {
    match set {
        ConditionSet::Classical => is_schrodinger_admissible(t.q, t.r, t.n),
        ConditionSet::Cn2 => satisfies_cn2(t),
        ConditionSet::Theorem => satisfies_theorem(t),
        ConditionSet::Proposition => satisfies_prop_kernel(t.n, t.sigma, t.rt, t.r),
        ConditionSet::Corollary => satisfies_corollary(t),
    }
}

/// Predicted power-law exponents of `t ↦ ‖K_t‖_{W(L^{r̃/2}, L^{r/2})}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDecay {
    #[serde(with = "q_string")]
    pub small_t: Q,
    #[serde(with = "q_string")]
    pub large_t: Q,
    /// The kernel-bound hypotheses fail; values are formal substitutions.
    pub extrapolated: bool,
}

pub fn predicted_kernel_decay(n_dim: u32, sigma: Q, rt: Exponent, r: Exponent) -> KernelDecay {
    let n = nq(n_dim);
    let small = -n / qi(2) + sigma + (n - qi(1)) * rt.recip();
    let large = small + n * r.recip();
    let ok = satisfies_prop_kernel(n_dim, sigma, rt, r).accepted();
    KernelDecay {
        small_t: small,
        large_t: large,
        extrapolated: !ok,
    }
}

/// Solves `2/q + n/r = n/2 - σ` for `r`.
pub fn classical_sobolev_line(n_dim: u32, sigma: Q, qe: Exponent) -> Result<Exponent> {
    let n = nq(n_dim);
    if !(sigma.is_positive() && sigma < n / qi(2)) {
        return Err(Error::InvalidExponent(format!(
            "need 0 < sigma < n/2, got sigma = {sigma}, n = {n_dim}"
        )));
    }
    if qe.recip() > q(1, 2) {
        return Err(Error::InvalidExponent(format!("need q >= 2, got {qe}")));
    }
    let n_over_r = n / qi(2) - sigma - qi(2) * qe.recip();
    if n_over_r.is_negative() {
        return Err(Error::InvalidExponent(format!(
            "no admissible r: 2/q = {} exceeds n/2 - sigma = {}",
            qi(2) * qe.recip(),
            n / qi(2) - sigma
        )));
    }
    let recip = n_over_r / n;
    if recip > q(1, 2) {
        return Err(Error::InvalidExponent(format!(
            "no admissible r: solution 1/r = {recip} violates r >= 2"
        )));
    }
    Exponent::from_recip(recip)
}

/// Grid scan request over reciprocal coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionQuery {
    pub set: ConditionSet,
    pub n: u32,
    #[serde(with = "q_string")]
    pub sigma: Q,
    pub fixed: BTreeMap<Field, Exponent>,
    pub free: Vec<Field>,
    /// Field solved from the set's defining equality.
    pub solve: Option<Field>,
    /// Reciprocal-coordinate step, e.g. `1/64`.
    #[serde(with = "q_string")]
    pub resolution: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshPoint {
    /// Reciprocal coordinates of the free fields, in query order.
    pub coords: Vec<String>,
    pub verdict: Verdict,
    /// Whether a grid neighbour carries the opposite verdict.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan {
    pub query: RegionQuery,
    pub accepted: Vec<ExponentTuple>,
    pub mesh: Vec<MeshPoint>,
}

/// Solves the set's defining equality for one field, returning its reciprocal.
fn solve_equality(set: ConditionSet, t: &ExponentTuple, field: Field) -> Result<Q> {
    let n = nq(t.n);
    // a·(1/q) + b·(1/r) + c·(1/r̃) = rhs
    let (a, b, c, rhs) = match set {
        ConditionSet::Theorem => (qi(2), n, n - qi(1), n / qi(2) - t.sigma),
        ConditionSet::Corollary => (qi(2), n, Q::zero(), n / qi(2) - t.sigma),
        ConditionSet::Classical => (qi(2), n, Q::zero(), n / qi(2)),
        other => {
            return Err(Error::Region(format!(
                "condition set '{other}' has no defining equality to solve"
            )))
        }
    };
    let (coef, rest) = match field {
        Field::Q => (a, b * t.r.recip() + c * t.rt.recip()),
        Field::R => (b, a * t.q.recip() + c * t.rt.recip()),
        Field::Rt => (c, a * t.q.recip() + b * t.r.recip()),
        Field::Qt => (Q::zero(), Q::zero()),
    };
    if coef.is_zero() {
        return Err(Error::Region(format!(
            "field '{field}' does not enter the equality of '{set}'"
        )));
    }
    Ok((rhs - rest) / coef)
}

/// Scans up to two free reciprocal coordinates over `[0, 1]`.
pub fn sample_region(query: &RegionQuery) -> Result<RegionScan> {
    if query.free.len() > 2 {
        return Err(Error::Region(format!(
            "at most 2 free coordinates, got {}",
            query.free.len()
        )));
    }
    if !(query.resolution.is_positive() && query.resolution <= Q::one()) {
        return Err(Error::Region("resolution must lie in (0, 1]".into()));
    }
    let steps = (Q::one() / query.resolution).floor().to_integer() as usize;
    let all = [Field::Qt, Field::Rt, Field::Q, Field::R];
    let mut base = ExponentTuple::new(
        query.n,
        query.sigma,
        Exponent::infinity(),
        Exponent::infinity(),
        Exponent::infinity(),
        Exponent::infinity(),
    );
    for f in all {
        let roles = [
            query.fixed.contains_key(&f),
            query.free.contains(&f),
            query.solve == Some(f),
        ];
        match roles.iter().filter(|&&b| b).count() {
            0 => {
                let unused = query.set == ConditionSet::Proposition && matches!(f, Field::Qt | Field::Q)
                    || query.set == ConditionSet::Classical && matches!(f, Field::Qt | Field::Rt);
                if !unused {
                    return Err(Error::Region(format!(
                        "field '{f}' is neither fixed, free nor solved"
                    )));
                }
            }
            1 => {}
            _ => {
                return Err(Error::Region(format!("field '{f}' given more than one role")));
            }
        }
        if let Some(e) = query.fixed.get(&f) {
            base.set(f, *e);
        }
    }
    let dims = query.free.len();
    let per_axis = steps + 1;
    let total = per_axis.pow(dims as u32);
    let mut verdicts = Vec::with_capacity(total);
    let mut coords_all = Vec::with_capacity(total);
    let mut accepted = Vec::new();
    for flat in 0..total {
        let mut t = base;
        let mut coords = Vec::with_capacity(dims);
        let mut rem = flat;
        for &f in query.free.iter().rev() {
            let i = rem % per_axis;
            rem /= per_axis;
            let c = query.resolution * qi(i as i128);
            coords.push(c);
            t.set(f, Exponent::from_recip(c)?);
        }
        coords.reverse();
        let verdict = match query.solve {
            Some(f) => match solve_equality(query.set, &t, f)
                .ok()
                .and_then(|v| Exponent::from_recip(v).ok())
            {
                Some(e) => {
                    t.set(f, e);
                    check(query.set, &t).verdict
                }
                None => Verdict::Reject,
            },
            None => check(query.set, &t).verdict,
        };
        if verdict == Verdict::Accept {
            accepted.push(t);
        }
        verdicts.push(verdict);
        coords_all.push(coords);
    }
    let mesh = (0..total)
        .map(|flat| {
            let mut boundary = false;
            let mut stride = 1;
            for _ in 0..dims {
                let i = (flat / stride) % per_axis;
                if i > 0 && verdicts[flat - stride] != verdicts[flat] {
                    boundary = true;
                }
                if i + 1 < per_axis && verdicts[flat + stride] != verdicts[flat] {
                    boundary = true;
                }
                stride *= per_axis;
            }
            MeshPoint {
                coords: coords_all[flat].iter().map(|c| c.to_string()).collect(),
                verdict: verdicts[flat],
                boundary,
            }
        })
        .collect();
    Ok(RegionScan {
        query: query.clone(),
        accepted,
        mesh,
    })
}
