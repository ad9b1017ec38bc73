//! Ready-made finite-precision CDFs and survival functions.
//!
//! Distributions are evaluated in binary64 at the value of each code and the
//! result is rounded to the probability format. Discrete distributions default
//! to unsigned integer formats but accept any value format.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::bitops::{ProbFloat, ProbFormat};
use crate::dist_spec::{make_ddf, sf_as_ddf, DualDistFn, FiniteCdf, FiniteSf};
use crate::entropy::BitSource;
use crate::error::{Error, Result};
use crate::formats::{parse_kv, Code, Extended, FormatKind, FormatSpec};

/// Which way the unit-interval uniform CDF rounds a real draw to a float.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Each float `x` in `(0, 1]` receives the mass of `(pred(x), x]`.
    Up,
    /// Each float `x` in `[0, 1)` receives the mass of `[x, succ(x))`.
    Down,
}

/// The CDF of a uniform real on `[0, 1]` rounded to a float format.
///
/// NaN codes have cumulative probability one. The probability format must
/// represent every value of `fmt` in `[0, 1]` for the result to be exact.
pub fn uniform_unit_cdf(fmt: FormatSpec, prob: ProbFormat, rounding: Rounding) -> Result<FiniteCdf> {
    if !matches!(fmt.kind(), FormatKind::IeeeFloat { .. }) {
        return Err(Error::Parameter("the unit uniform needs a float format".into()));
    }
    let clamp = |v: Extended<f64>| -> f64 {
        match v {
            Extended::NegInf => 0.0,
            Extended::Finite(x) => x.clamp(0.0, 1.0),
            Extended::PosInf | Extended::Bottom => 1.0,
        }
    };
    let eval = move |c: Code| -> ProbFloat {
        let v = match rounding {
            Rounding::Up => fmt.gamma(c),
            Rounding::Down => match fmt.succ(c) {
                Ok(s) => fmt.gamma(s),
                Err(_) => Extended::Bottom,
            },
        };
        match fmt.gamma(c) {
            Extended::Bottom => prob.one(),
            _ => prob.round_f64(clamp(v)),
        }
    };
    FiniteCdf::new(fmt, prob, eval)
}

/// Uniform draws by the usual division method: `k / 2^l` for `l` random bits,
/// rounded to nearest (ties to even) in a float format of width at most 16.
pub struct DivisionUniform {
    fmt: FormatSpec,
    bits: u32,
    table: Vec<Code>,
}

impl DivisionUniform {
    pub fn new(fmt: FormatSpec, bits: u32) -> Result<Self> {
        if !matches!(fmt.kind(), FormatKind::IeeeFloat { .. }) || fmt.width() > 16 {
            return Err(Error::Parameter("division uniform needs a float format of width <= 16".into()));
        }
        if bits == 0 || bits > 16 {
            return Err(Error::Parameter("division uniform needs 1..=16 bits".into()));
        }
        let mut values: Vec<(f64, Code)> = (0..=fmt.max_index())
            .map(|i| fmt.at_index(i))
            .filter_map(|c| match fmt.gamma(c) {
                Extended::Finite(x) if (0.0..=1.0).contains(&x) && !(x == 0.0 && x.is_sign_negative()) => Some((x, c)),
                _ => None,
            })
            .collect();
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
        let table = (0..1u64 << bits)
            .map(|k| {
                let x = k as f64 / (1u64 << bits) as f64;
                let pos = values.partition_point(|v| v.0 < x);
                if pos < values.len() && values[pos].0 == x {
                    return values[pos].1;
                }
                let (lo, hi) = (values[pos - 1], values[pos]);
                let (dl, dh) = (x - lo.0, hi.0 - x);
                if dl < dh || (dl == dh && lo.1.bits() & 1 == 0) {
                    lo.1
                } else {
                    hi.1
                }
            })
            .collect();
        Ok(Self { fmt, bits, table })
    }

    pub fn format(&self) -> &FormatSpec {
        &self.fmt
    }

    pub fn sample<S: BitSource + ?Sized>(&self, src: &mut S) -> Result<Code> {
        let mut k = 0usize;
        for _ in 0..self.bits {
            k = (k << 1) | src.next_bit()? as usize;
        }
        Ok(self.table[k])
    }
}

/// A CDF over `uint:4` that alternates between zero and one; fails validation.
pub fn parity_cdf(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::unsigned(4).expect("valid width");
    FiniteCdf::trusted(fmt, prob, move |c| if c.bits() % 2 == 1 { prob.one() } else { prob.zero() })
}

/// The distributions available by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistKind {
    Cauchy,
    Exponential,
    Flat,
    Gumbel1,
    Gumbel2,
    Laplace,
    Logistic,
    Pareto,
    Rayleigh,
    Weibull,
    Geometric,
}

/// Catalog entry: name, parameters with defaults, and whether the distribution is discrete.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub kind: DistKind,
    pub name: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub discrete: bool,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { kind: DistKind::Cauchy, name: "cauchy", params: &[("a", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Exponential, name: "exponential", params: &[("s", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Flat, name: "flat", params: &[("a", 0.0), ("b", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Gumbel1, name: "gumbel1", params: &[("a", 1.0), ("b", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Gumbel2, name: "gumbel2", params: &[("a", 1.0), ("b", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Laplace, name: "laplace", params: &[("a", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Logistic, name: "logistic", params: &[("a", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Pareto, name: "pareto", params: &[("a", 3.0), ("b", 2.0)], discrete: false },
    CatalogEntry { kind: DistKind::Rayleigh, name: "rayleigh", params: &[("sigma", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Weibull, name: "weibull", params: &[("a", 1.0), ("b", 1.0)], discrete: false },
    CatalogEntry { kind: DistKind::Geometric, name: "geometric", params: &[("p", 0.4)], discrete: true },
];

/// All available distributions.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// A named distribution with concrete parameters, e.g. `pareto:a=3,b=2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistParams {
    pub kind: DistKind,
    pub params: BTreeMap<String, f64>,
}

impl DistParams {
    /// Defaults for `name`, then overrides; checks parameter domains.
    pub fn new(name: &str, overrides: &[(String, f64)]) -> Result<Self> {
        let entry = CATALOG
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parameter(format!("unknown distribution '{name}'")))?;
        let mut params: BTreeMap<String, f64> = entry.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            match params.get_mut(k.as_str()) {
                Some(slot) => *slot = *v,
                None => return Err(Error::Parameter(format!("{} has no parameter '{k}'", entry.name))),
            }
        }
        let d = Self { kind: entry.kind, params };
        d.check()?;
        Ok(d)
    }

    pub fn entry(&self) -> &'static CatalogEntry {
        CATALOG.iter().find(|e| e.kind == self.kind).expect("every kind is cataloged")
    }

    pub fn name(&self) -> &'static str {
        self.entry().name
    }

    pub fn is_discrete(&self) -> bool {
        self.entry().discrete
    }

    pub fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Parameter(format!("{}: {msg}", self.name())));
        for (k, v) in &self.params {
            if !v.is_finite() {
                return bad(&format!("parameter {k} must be finite"));
            }
        }
        match self.kind {
            DistKind::Flat if !(self.get("a") < self.get("b")) => bad("need a < b"),
            DistKind::Geometric if !(self.get("p") > 0.0 && self.get("p") <= 1.0) => bad("need 0 < p <= 1"),
            DistKind::Pareto | DistKind::Gumbel1 | DistKind::Gumbel2 | DistKind::Weibull
                if !(self.get("a") > 0.0 && self.get("b") > 0.0) =>
            {
                bad("need a > 0 and b > 0")
            }
            DistKind::Exponential if self.get("s") <= 0.0 => bad("need s > 0"),
            DistKind::Rayleigh if self.get("sigma") <= 0.0 => bad("need sigma > 0"),
            DistKind::Cauchy | DistKind::Laplace | DistKind::Logistic if self.get("a") <= 0.0 => bad("need a > 0"),
            _ => Ok(()),
        }
    }

    /// The default value format: binary64 for continuous, `uint:16` for discrete distributions.
    pub fn default_format(&self) -> FormatSpec {
        if self.is_discrete() {
            FormatSpec::unsigned(16).expect("valid width")
        } else {
            FormatSpec::binary64()
        }
    }

    /// The CDF at a real point, in binary64.
    pub fn cdf_f64(&self, x: f64) -> f64 {
        let p = |k: &str| self.get(k);
        match self.kind {
            DistKind::Cauchy => {
                let u = x / p("a");
                if u > -1.0 {
                    0.5 + u.atan() / PI
                } else {
                    (-1.0 / u).atan() / PI
                }
            }
            DistKind::Exponential => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / p("s")).exp_m1()
                }
            }
            DistKind::Flat => {
                let (a, b) = (p("a"), p("b"));
                if x < a {
                    0.0
                } else if x > b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
            DistKind::Gumbel1 => (-p("b") * (-p("a") * x).exp()).exp(),
            DistKind::Gumbel2 => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-p("b") * x.powf(-p("a"))).exp()
                }
            }
            DistKind::Laplace => {
                let u = x / p("a");
                if u < 0.0 {
                    0.5 * u.exp()
                } else {
                    1.0 - 0.5 * (-u).exp()
                }
            }
            DistKind::Logistic => logistic_lower(x / p("a")),
            DistKind::Pareto => {
                let (a, b) = (p("a"), p("b"));
                if x < b {
                    0.0
                } else {
                    1.0 - (b / x).powf(a)
                }
            }
            DistKind::Rayleigh => {
                if x <= 0.0 {
                    0.0
                } else {
                    let u = x / p("sigma");
                    -(-u * u / 2.0).exp_m1()
                }
            }
            DistKind::Weibull => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / p("a")).powf(p("b"))).exp_m1()
                }
            }
            DistKind::Geometric => {
                if x < 0.0 {
                    0.0
                } else {
                    -((x.floor() + 1.0) * (-p("p")).ln_1p()).exp_m1()
                }
            }
        }
    }

    /// The survival function at a real point, in binary64.
    pub fn sf_f64(&self, x: f64) -> f64 {
        let p = |k: &str| self.get(k);
        match self.kind {
            DistKind::Cauchy => {
                let u = -x / p("a");
                if u > -1.0 {
                    0.5 + u.atan() / PI
                } else {
                    (-1.0 / u).atan() / PI
                }
            }
            DistKind::Exponential => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / p("s")).exp()
                }
            }
            DistKind::Flat => {
                let (a, b) = (p("a"), p("b"));
                if x < a {
                    1.0
                } else if x > b {
                    0.0
                } else {
                    (b - x) / (b - a)
                }
            }
            DistKind::Gumbel1 => -(-p("b") * (-p("a") * x).exp()).exp_m1(),
            DistKind::Gumbel2 => {
                if x <= 0.0 {
                    1.0
                } else {
                    -(-p("b") * x.powf(-p("a"))).exp_m1()
                }
            }
            DistKind::Laplace => {
                let u = x / p("a");
                if u > 0.0 {
                    0.5 * (-u).exp()
                } else {
                    1.0 - 0.5 * u.exp()
                }
            }
            DistKind::Logistic => logistic_lower(-x / p("a")),
            DistKind::Pareto => {
                let (a, b) = (p("a"), p("b"));
                if x < b {
                    1.0
                } else {
                    (b / x).powf(a)
                }
            }
            DistKind::Rayleigh => {
                if x <= 0.0 {
                    1.0
                } else {
                    let u = x / p("sigma");
                    (-u * u / 2.0).exp()
                }
            }
            DistKind::Weibull => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / p("a")).powf(p("b"))).exp()
                }
            }
            DistKind::Geometric => {
                if x < 0.0 {
                    1.0
                } else {
                    ((x.floor() + 1.0) * (-p("p")).ln_1p()).exp()
                }
            }
        }
    }

    /// The finite-precision CDF over `fmt` with probabilities in `prob`.
    pub fn cdf(&self, fmt: FormatSpec, prob: ProbFormat) -> Result<FiniteCdf> {
        let d = self.clone();
        let top = fmt.max_code();
        let discrete = self.is_discrete();
        let eval = move |c: Code| -> ProbFloat {
            if discrete && c == top {
                return prob.one();
            }
            match fmt.gamma(c) {
                Extended::NegInf => prob.zero(),
                Extended::PosInf | Extended::Bottom => prob.one(),
                Extended::Finite(x) => prob.round_f64(d.cdf_f64(x)),
            }
        };
        FiniteCdf::new(fmt, prob, eval)
    }

    /// The finite-precision survival function over `fmt`.
    pub fn sf(&self, fmt: FormatSpec, prob: ProbFormat) -> Result<FiniteSf> {
        let d = self.clone();
        let top = fmt.max_code();
        let discrete = self.is_discrete();
        let eval = move |c: Code| -> ProbFloat {
            if discrete && c == top {
                return prob.zero();
            }
            match fmt.gamma(c) {
                Extended::NegInf => prob.one(),
                Extended::PosInf | Extended::Bottom => prob.zero(),
                Extended::Finite(x) => prob.round_f64(d.sf_f64(x)),
            }
        };
        FiniteSf::new(fmt, prob, eval)
    }

    /// The dual function splicing the CDF's left tail with the SF's right tail.
    pub fn ddf(&self, fmt: FormatSpec, prob: ProbFormat) -> Result<DualDistFn> {
        make_ddf(&self.cdf(fmt, prob)?, &self.sf(fmt, prob)?)
    }

    /// The survival function realized as a dual function.
    pub fn sf_ddf(&self, fmt: FormatSpec, prob: ProbFormat) -> Result<DualDistFn> {
        sf_as_ddf(&self.sf(fmt, prob)?)
    }
}

/// `1 / (1 + e^-u)` without overflow.
fn logistic_lower(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

impl FromStr for DistParams {
    type Err = Error;

    /// Parses `name` or `name:k=v,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), r),
            None => (s.trim(), ""),
        };
        let overrides = parse_params(rest)?;
        Self::new(name, &overrides)
    }
}

/// Parses `k=v,...` into real-valued parameters.
pub fn parse_params(s: &str) -> Result<Vec<(String, f64)>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    parse_kv(s)?
        .into_iter()
        .map(|(k, v)| {
            v.parse::<f64>()
                .map(|x| (k.clone(), x))
                .map_err(|_| Error::Parse(format!("parameter {k}: '{v}' is not a number")))
        })
        .collect()
}

impl fmt::Display for DistParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let mut sep = ':';
        for (k, v) in &self.params {
            write!(f, "{sep}{k}={v}")?;
            sep = ',';
        }
        Ok(())
    }
}
