//! Finite-precision distribution specifications.
//!
//! A [`FiniteCdf`] maps every code of a format to a probability float and is
//! nondecreasing in the format's order, ending at one. A [`FiniteSf`] is the
//! nonincreasing counterpart ending at zero. A [`DualDistFn`] stores, per code,
//! a pair `(d, f)` meaning cumulative probability `f` when `d = 0` and `1 - f`
//! when `d = 1`, which keeps both tails accurate.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::bitops::{ProbFloat, ProbFormat};
use crate::error::{Error, Result};
use crate::formats::{Code, ExtendedReal, FormatSpec};

/// Widths up to this value are validated exhaustively by default.
pub const EXHAUSTIVE_WIDTH: u32 = 16;

/// Adjacent pairs checked by default for wider formats.
pub const DEFAULT_SAMPLED_PAIRS: u64 = 1_000_000;

const DEFAULT_VALIDATION_SEED: u64 = 0x5eed_cafe;
const MAX_WITNESSES: usize = 16;

/// Callback type for CDFs and SFs.
pub type ProbFn = Arc<dyn Fn(Code) -> ProbFloat + Send + Sync>;

/// Callback type for dual distribution functions.
pub type DualFn = Arc<dyn Fn(Code) -> DualValue + Send + Sync>;

/// A dual cumulative value: `f` if `!d`, else `1 - f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DualValue {
    pub d: bool,
    pub f: ProbFloat,
}

impl DualValue {
    pub const fn new(d: bool, f: ProbFloat) -> Self {
        Self { d, f }
    }

    /// `self ⪯ other` in the order of the represented cumulative values.
    #[inline]
    pub fn lte(&self, other: &DualValue) -> bool {
        match (self.d, other.d) {
            (false, true) => true,
            (false, false) => self.f <= other.f,
            (true, true) => other.f <= self.f,
            (true, false) => false,
        }
    }

    /// Whether the pair is in canonical form: `f ≤ 1/2` when `d = 0`, `f < 1/2` when `d = 1`.
    pub fn is_canonical(&self, prob: &ProbFormat) -> bool {
        if self.d {
            self.f < prob.half()
        } else {
            self.f <= prob.half()
        }
    }

    /// The represented cumulative value as an exact rational.
    pub fn to_rational(&self, prob: &ProbFormat) -> BigRational {
        let f = prob.to_rational(self.f);
        if self.d {
            BigRational::one() - f
        } else {
            f
        }
    }

    /// The represented cumulative value as a host double (rounded when `d = 1`).
    pub fn to_f64(&self, prob: &ProbFormat) -> f64 {
        let f = prob.to_f64(self.f);
        if self.d {
            1.0 - f
        } else {
            f
        }
    }
}

/// How thoroughly to check monotonicity and endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    /// Exhaustive up to [`EXHAUSTIVE_WIDTH`], sampled otherwise.
    Auto,
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

/// What went wrong at a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The value at the maximal code is not the required endpoint.
    Endpoint,
    /// A value lies outside `[0, 1]`, or a dual pair is not canonical.
    Range,
    /// The order between two adjacent codes is wrong.
    Monotonicity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub code: Code,
    /// The successor of `code` for monotonicity violations.
    pub next: Option<Code>,
    pub detail: String,
}

/// Outcome of [`FiniteCdf::validate`] and friends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub exhaustive: bool,
    pub checked_pairs: u64,
    pub violation_count: u64,
    /// The first few violations found.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn push(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(v);
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Validation(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = if self.exhaustive { "exhaustive" } else { "sampled" };
        if self.passed() {
            return write!(f, "pass ({mode}, {} adjacent pairs)", self.checked_pairs);
        }
        write!(f, "fail ({mode}, {} adjacent pairs, {} violations)", self.checked_pairs, self.violation_count)?;
        for v in &self.violations {
            match v.next {
                Some(n) => write!(f, "; {:?} at {} -> {}: {}", v.kind, v.code, n, v.detail)?,
                None => write!(f, "; {:?} at {}: {}", v.kind, v.code, v.detail)?,
            }
        }
        Ok(())
    }
}

/// Runs `check(i)` on adjacent index pairs `(i, i+1)` per `mode`.
fn for_each_pair(fmt: &FormatSpec, mode: ValidationMode, mut check: impl FnMut(u64)) -> (bool, u64) {
    let last = fmt.max_index();
    let exhaustive = match mode {
        ValidationMode::Auto => fmt.width() <= EXHAUSTIVE_WIDTH,
        ValidationMode::Exhaustive => true,
        ValidationMode::Sampled { .. } => false,
    };
    if exhaustive {
        for i in 0..last {
            check(i);
        }
        return (true, last);
    }
    let (pairs, seed) = match mode {
        ValidationMode::Sampled { pairs, seed } => (pairs, seed),
        _ => (DEFAULT_SAMPLED_PAIRS, DEFAULT_VALIDATION_SEED),
    };
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut n = 0;
    if last > 0 {
        check(0);
        check(last - 1);
        n += 2;
    }
    while n < pairs.max(2) && last > 0 {
        check(rng.next_u64() % last);
        n += 1;
    }
    (false, n)
}

macro_rules! spec_common {
    () => {
        pub fn format(&self) -> &FormatSpec {
            &self.fmt
        }

        pub fn prob_format(&self) -> &ProbFormat {
            &self.prob
        }
    };
}

/// A finite-precision cumulative distribution function.
#[derive(Clone)]
pub struct FiniteCdf {
    fmt: FormatSpec,
    prob: ProbFormat,
    eval: ProbFn,
}

impl fmt::Debug for FiniteCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCdf").field("fmt", &self.fmt).field("prob", &self.prob).finish()
    }
}

impl FiniteCdf {
    /// Builds and validates a CDF.
    pub fn new(fmt: FormatSpec, prob: ProbFormat, eval: impl Fn(Code) -> ProbFloat + Send + Sync + 'static) -> Result<Self> {
        let cdf = Self::trusted(fmt, prob, eval);
        cdf.validate().into_result()?;
        Ok(cdf)
    }

    /// Builds a CDF without validation.
    pub fn trusted(fmt: FormatSpec, prob: ProbFormat, eval: impl Fn(Code) -> ProbFloat + Send + Sync + 'static) -> Self {
        Self { fmt, prob, eval: Arc::new(eval) }
    }

    spec_common!();

    #[inline]
    pub fn eval(&self, c: Code) -> ProbFloat {
        (self.eval)(c)
    }

    /// `F(φ(i))`.
    #[inline]
    pub fn eval_index(&self, i: u64) -> ProbFloat {
        (self.eval)(self.fmt.at_index(i))
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(ValidationMode::Auto)
    }

    pub fn validate_with(&self, mode: ValidationMode) -> ValidationReport {
        let one = self.prob.one();
        let mut report = ValidationReport { exhaustive: false, checked_pairs: 0, violation_count: 0, violations: vec![] };
        let top = self.fmt.max_code();
        let f_top = self.eval(top);
        if f_top != one {
            report.push(Violation {
                kind: ViolationKind::Endpoint,
                code: top,
                next: None,
                detail: format!("F(max) = {} but must be 1", self.prob.to_f64(f_top)),
            });
        }
        let mut range_reported = false;
        let (exhaustive, n) = for_each_pair(&self.fmt, mode, |i| {
            let (a, b) = (self.fmt.at_index(i), self.fmt.at_index(i + 1));
            let (fa, fb) = (self.eval(a), self.eval(b));
            if !range_reported && (!self.prob.contains(fa) || !self.prob.contains(fb)) {
                range_reported = true;
                report.push(Violation { kind: ViolationKind::Range, code: a, next: Some(b), detail: "value outside [0, 1]".into() });
            }
            if fa > fb {
                report.push(Violation {
                    kind: ViolationKind::Monotonicity,
                    code: a,
                    next: Some(b),
                    detail: format!("F = {} then {}", self.prob.to_f64(fa), self.prob.to_f64(fb)),
                });
            }
        });
        report.exhaustive = exhaustive;
        report.checked_pairs = n;
        report
    }

    /// The probability `F(b) - F(pred(b))` of code `b` as an exact rational.
    pub fn mass_exact(&self, c: Code) -> BigRational {
        let i = self.fmt.index_of(c);
        let hi = self.prob.to_rational(self.eval_index(i));
        if i == 0 {
            hi
        } else {
            hi - self.prob.to_rational(self.eval_index(i - 1))
        }
    }
}

/// A finite-precision survival function.
#[derive(Clone)]
pub struct FiniteSf {
    fmt: FormatSpec,
    prob: ProbFormat,
    eval: ProbFn,
}

impl fmt::Debug for FiniteSf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSf").field("fmt", &self.fmt).field("prob", &self.prob).finish()
    }
}

impl FiniteSf {
    /// Builds and validates a survival function.
    pub fn new(fmt: FormatSpec, prob: ProbFormat, eval: impl Fn(Code) -> ProbFloat + Send + Sync + 'static) -> Result<Self> {
        let sf = Self::trusted(fmt, prob, eval);
        sf.validate().into_result()?;
        Ok(sf)
    }

    pub fn trusted(fmt: FormatSpec, prob: ProbFormat, eval: impl Fn(Code) -> ProbFloat + Send + Sync + 'static) -> Self {
        Self { fmt, prob, eval: Arc::new(eval) }
    }

    spec_common!();

    #[inline]
    pub fn eval(&self, c: Code) -> ProbFloat {
        (self.eval)(c)
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(ValidationMode::Auto)
    }

    pub fn validate_with(&self, mode: ValidationMode) -> ValidationReport {
        let mut report = ValidationReport { exhaustive: false, checked_pairs: 0, violation_count: 0, violations: vec![] };
        let top = self.fmt.max_code();
        let s_top = self.eval(top);
        if s_top != self.prob.zero() {
            report.push(Violation {
                kind: ViolationKind::Endpoint,
                code: top,
                next: None,
                detail: format!("S(max) = {} but must be 0", self.prob.to_f64(s_top)),
            });
        }
        let mut range_reported = false;
        let (exhaustive, n) = for_each_pair(&self.fmt, mode, |i| {
            let (a, b) = (self.fmt.at_index(i), self.fmt.at_index(i + 1));
            let (sa, sb) = (self.eval(a), self.eval(b));
            if !range_reported && (!self.prob.contains(sa) || !self.prob.contains(sb)) {
                range_reported = true;
                report.push(Violation { kind: ViolationKind::Range, code: a, next: Some(b), detail: "value outside [0, 1]".into() });
            }
            if sb > sa {
                report.push(Violation {
                    kind: ViolationKind::Monotonicity,
                    code: a,
                    next: Some(b),
                    detail: format!("S = {} then {}", self.prob.to_f64(sa), self.prob.to_f64(sb)),
                });
            }
        });
        report.exhaustive = exhaustive;
        report.checked_pairs = n;
        report
    }
}

/// A dual distribution function.
#[derive(Clone)]
pub struct DualDistFn {
    fmt: FormatSpec,
    prob: ProbFormat,
    eval: DualFn,
    cutoff: Option<Code>,
}

impl fmt::Debug for DualDistFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualDistFn")
            .field("fmt", &self.fmt)
            .field("prob", &self.prob)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl DualDistFn {
    /// Builds and validates a dual distribution function.
    pub fn new(
        fmt: FormatSpec,
        prob: ProbFormat,
        cutoff: Option<Code>,
        eval: impl Fn(Code) -> DualValue + Send + Sync + 'static,
    ) -> Result<Self> {
        let g = Self::trusted(fmt, prob, cutoff, eval);
        g.validate().into_result()?;
        Ok(g)
    }

    pub fn trusted(
        fmt: FormatSpec,
        prob: ProbFormat,
        cutoff: Option<Code>,
        eval: impl Fn(Code) -> DualValue + Send + Sync + 'static,
    ) -> Self {
        Self { fmt, prob, eval: Arc::new(eval), cutoff }
    }

    spec_common!();

    /// The first code represented with `d = 1`, when known.
    pub fn cutoff(&self) -> Option<Code> {
        self.cutoff
    }

    #[inline]
    pub fn eval(&self, c: Code) -> DualValue {
        (self.eval)(c)
    }

    #[inline]
    pub fn eval_index(&self, i: u64) -> DualValue {
        (self.eval)(self.fmt.at_index(i))
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(ValidationMode::Auto)
    }

    pub fn validate_with(&self, mode: ValidationMode) -> ValidationReport {
        let mut report = ValidationReport { exhaustive: false, checked_pairs: 0, violation_count: 0, violations: vec![] };
        let top = self.fmt.max_code();
        let g_top = self.eval(top);
        if g_top != DualValue::new(true, self.prob.zero()) {
            report.push(Violation {
                kind: ViolationKind::Endpoint,
                code: top,
                next: None,
                detail: format!("G(max) = ({}, {}) but must be (1, 0)", g_top.d as u8, self.prob.to_f64(g_top.f)),
            });
        }
        let mut range_reported = false;
        let (exhaustive, n) = for_each_pair(&self.fmt, mode, |i| {
            let (a, b) = (self.fmt.at_index(i), self.fmt.at_index(i + 1));
            let (ga, gb) = (self.eval(a), self.eval(b));
            if !range_reported && (!ga.is_canonical(&self.prob) || !gb.is_canonical(&self.prob)) {
                range_reported = true;
                report.push(Violation {
                    kind: ViolationKind::Range,
                    code: a,
                    next: Some(b),
                    detail: "pair not canonical (need f <= 1/2 when d = 0, f < 1/2 when d = 1)".into(),
                });
            }
            if !ga.lte(&gb) {
                report.push(Violation {
                    kind: ViolationKind::Monotonicity,
                    code: a,
                    next: Some(b),
                    detail: format!("G* = {} then {}", ga.to_f64(&self.prob), gb.to_f64(&self.prob)),
                });
            }
        });
        report.exhaustive = exhaustive;
        report.checked_pairs = n;
        report
    }

    /// The probability `G*(b) - G*(pred(b))` of code `b` as an exact rational.
    pub fn mass_exact(&self, c: Code) -> BigRational {
        let i = self.fmt.index_of(c);
        let hi = self.eval_index(i).to_rational(&self.prob);
        if i == 0 {
            hi
        } else {
            hi - self.eval_index(i - 1).to_rational(&self.prob)
        }
    }
}

/// The pair `(F((b0…0)⁻), F(b1…1))` whose exact difference is the probability
/// of all codes whose index starts with the `len`-bit prefix `prefix`.
pub fn p_of_prefix(cdf: &FiniteCdf, prefix: u64, len: u32) -> Result<(ProbFloat, ProbFloat)> {
    let n = cdf.fmt.width();
    if len > n {
        return Err(Error::Precondition(format!("prefix length {len} exceeds width {n}")));
    }
    if len < 64 && prefix >> len != 0 {
        return Err(Error::Precondition("prefix has bits beyond its length".into()));
    }
    let rest = n - len;
    let (lo_idx, hi_idx) = if rest == 64 {
        (0, u64::MAX)
    } else {
        let base = prefix << rest;
        (base, base | crate::formats::mask(rest))
    };
    let hi = cdf.eval_index(hi_idx);
    let lo = if lo_idx == 0 { cdf.prob.zero() } else { cdf.eval_index(lo_idx - 1) };
    Ok((lo, hi))
}

/// Smallest index `i` with `pred(i)` true, for a predicate monotone in `i`.
fn lower_bound(max_index: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let (mut lo, mut hi) = (0u128, max_index as u128 + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid as u64) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo.min(max_index as u128) as u64
}

/// The least code `b` (in format order) with `q ≤ F(b)`.
pub fn quantile(cdf: &FiniteCdf, q: ProbFloat) -> Code {
    let i = lower_bound(cdf.fmt.max_index(), |s| q <= cdf.eval_index(s));
    cdf.fmt.at_index(i)
}

/// The least code `b` with `target ⪯ G(b)`.
pub fn quantile_ddf(g: &DualDistFn, target: DualValue) -> Code {
    let i = lower_bound(g.fmt.max_index(), |s| target.lte(&g.eval_index(s)));
    g.fmt.at_index(i)
}

/// Builds the dual function that follows `F` below the cutoff
/// `b* = quantile(F, succ(1/2))` and `S` from `b*` on.
pub fn make_ddf(cdf: &FiniteCdf, sf: &FiniteSf) -> Result<DualDistFn> {
    if cdf.fmt != sf.fmt || cdf.prob != sf.prob {
        return Err(Error::Construction("CDF and SF must share format and probability format".into()));
    }
    let prob = cdf.prob;
    let cutoff = quantile(cdf, prob.succ(prob.half()));
    if sf.eval(cutoff) >= prob.half() {
        return Err(Error::Construction(format!(
            "S at the cutoff {} is {} but must be below 1/2",
            cutoff,
            prob.to_f64(sf.eval(cutoff))
        )));
    }
    let fmt = cdf.fmt;
    let cut_idx = fmt.index_of(cutoff);
    let (f, s) = (cdf.clone(), sf.clone());
    DualDistFn::new(fmt, prob, Some(cutoff), move |c| {
        if fmt.index_of(c) < cut_idx {
            DualValue::new(false, f.eval(c))
        } else {
            DualValue::new(true, s.eval(c))
        }
    })
}

/// Realizes a survival function as a dual function: `(1, S(b))` where
/// `S(b) < 1/2`, and `(0, 1 - S(b))` elsewhere. The complement of a value in
/// `[1/2, 1]` is always exact.
pub fn sf_as_ddf(sf: &FiniteSf) -> Result<DualDistFn> {
    let prob = sf.prob;
    let fmt = sf.fmt;
    let half = prob.half();
    let s = sf.clone();
    let cutoff = {
        let i = lower_bound(fmt.max_index(), |k| s.eval(fmt.at_index(k)) < half);
        Some(fmt.at_index(i))
    };
    let s2 = sf.clone();
    DualDistFn::new(fmt, prob, cutoff, move |c| {
        let v = s2.eval(c);
        if v < half {
            DualValue::new(true, v)
        } else {
            match prob.complement(v) {
                Some(r) => DualValue::new(false, r),
                // Unreachable for v in [1/2, 1]; a value above one fails validation.
                None => DualValue::new(false, ProbFloat(u64::MAX)),
            }
        }
    })
}

/// Minimum and maximum codes with nonzero probability and their values.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportRange {
    pub min_code: Code,
    pub max_code: Code,
    pub min: ExtendedReal,
    pub max: ExtendedReal,
}

/// Support range of a CDF: the codes where `F` first becomes positive and first reaches one.
pub fn support_range(cdf: &FiniteCdf) -> SupportRange {
    let lo = quantile(cdf, cdf.prob.min_positive());
    let hi = quantile(cdf, cdf.prob.one());
    SupportRange { min_code: lo, max_code: hi, min: cdf.fmt.gamma(lo), max: cdf.fmt.gamma(hi) }
}

/// Support range of a dual function.
pub fn support_range_ddf(g: &DualDistFn) -> SupportRange {
    let lo = quantile_ddf(g, DualValue::new(false, g.prob.min_positive()));
    let hi = quantile_ddf(g, DualValue::new(true, g.prob.zero()));
    SupportRange { min_code: lo, max_code: hi, min: g.fmt.gamma(lo), max: g.fmt.gamma(hi) }
}

/// Fraction of the values of a float format with `E` exponent and `m` fraction
/// bits in `[0, 1]` that are multiples of `2^-l`.
pub fn coverage_density(exp_bits: u32, man_bits: u32, l: u32) -> Result<BigRational> {
    if !(2..=11).contains(&exp_bits) || !(1..=52).contains(&man_bits) {
        return Err(Error::Parameter(format!("unsupported float parameters E={exp_bits}, m={man_bits}")));
    }
    let l_max = (1u32 << (exp_bits - 1)) - 2;
    if l > l_max {
        return Err(Error::Parameter(format!("l = {l} outside [0, {l_max}]")));
    }
    let m = man_bits as usize;
    let denom = (BigInt::one() << m) * BigInt::from((1u64 << (exp_bits - 1)) - 1) + 1;
    let num = if l <= man_bits + 1 {
        BigInt::one() << l as usize
    } else {
        (BigInt::one() << m) * BigInt::from(l - man_bits + 1) + 1
    };
    Ok(BigRational::new(num, denom))
}

/// Orders codes of a format by their index; convenience for sorting.
pub fn cmp_codes(fmt: &FormatSpec, a: Code, b: Code) -> Ordering {
    fmt.index_of(a).cmp(&fmt.index_of(b))
}
