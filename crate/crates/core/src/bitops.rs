//! Exact binary digits of differences of probability floats.
//!
//! Given floats `x > x'` in `[0, 1]`, [`preproc_sub`] produces a compact
//! description ([`BitExtractor`]) of the binary expansion of the exact real
//! difference `x - x'`, from which [`extract_bit`] reads any digit in constant
//! time. [`preproc_sum_complement`] does the same for `1 - (x + x')`. All work
//! uses single-word integer arithmetic on the exponent and significand fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::formats::{dyadic, ldexp, mask, parse_kv};

/// A floating-point format for probabilities, restricted to values in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProbFormat {
    exp_bits: u32,
    man_bits: u32,
    bias: i32,
}

/// A probability stored as the raw bits of its [`ProbFormat`] encoding.
///
/// Probabilities are non-negative, so the integer order of the bits is the
/// numeric order of the values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ProbFloat(pub u64);

impl ProbFloat {
    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }
}

impl ProbFormat {
    /// IEEE binary32.
    pub const F32: ProbFormat = ProbFormat { exp_bits: 8, man_bits: 23, bias: 127 };
    /// IEEE binary64.
    pub const F64: ProbFormat = ProbFormat { exp_bits: 11, man_bits: 52, bias: 1023 };

    /// A software-emulated format with the standard bias `2^(E-1) - 1`.
    pub fn emulated(exp_bits: u32, man_bits: u32) -> Result<Self> {
        if !(2..=11).contains(&exp_bits) {
            return Err(Error::InvalidFormat(format!("probability format needs 2 <= E <= 11, got {exp_bits}")));
        }
        Self::with_bias(exp_bits, man_bits, (1 << (exp_bits - 1)) - 1)
    }

    /// A format with a non-standard exponent bias.
    pub fn with_bias(exp_bits: u32, man_bits: u32, bias: i32) -> Result<Self> {
        if !(2..=11).contains(&exp_bits) || !(1..=52).contains(&man_bits) {
            return Err(Error::InvalidFormat(format!(
                "probability format needs 2 <= E <= 11 and 1 <= m <= 52, got E={exp_bits}, m={man_bits}"
            )));
        }
        let max_e = (1i32 << exp_bits) - 2;
        if bias < 2 || bias > max_e || bias > 1023 {
            return Err(Error::InvalidFormat(format!(
                "bias {bias} must lie in [2, {}] so that 1/2 and 1 are normal numbers",
                max_e.min(1023)
            )));
        }
        Ok(Self { exp_bits, man_bits, bias })
    }

    #[inline]
    pub fn exp_bits(&self) -> u32 {
        self.exp_bits
    }

    #[inline]
    pub fn man_bits(&self) -> u32 {
        self.man_bits
    }

    #[inline]
    pub fn bias(&self) -> i32 {
        self.bias
    }

    /// Total encoding width `1 + E + m`.
    pub fn width(&self) -> u32 {
        1 + self.exp_bits + self.man_bits
    }

    /// Exponent `δ` of the probability grain: every value is a multiple of `2^-δ`.
    pub fn grain_exponent(&self) -> u32 {
        (self.bias + self.man_bits as i32 - 1) as u32
    }

    #[inline]
    pub fn zero(&self) -> ProbFloat {
        ProbFloat(0)
    }

    #[inline]
    pub fn one(&self) -> ProbFloat {
        ProbFloat((self.bias as u64) << self.man_bits)
    }

    #[inline]
    pub fn half(&self) -> ProbFloat {
        ProbFloat(((self.bias - 1) as u64) << self.man_bits)
    }

    /// Smallest positive value (the smallest subnormal).
    #[inline]
    pub fn min_positive(&self) -> ProbFloat {
        ProbFloat(1)
    }

    /// Next larger value, saturating at one.
    pub fn succ(&self, p: ProbFloat) -> ProbFloat {
        if p >= self.one() {
            self.one()
        } else {
            ProbFloat(p.0 + 1)
        }
    }

    /// Next smaller value, saturating at zero.
    pub fn pred(&self, p: ProbFloat) -> ProbFloat {
        ProbFloat(p.0.saturating_sub(1))
    }

    /// Whether `p` encodes a value in `[0, 1]`.
    pub fn contains(&self, p: ProbFloat) -> bool {
        p <= self.one()
    }

    /// All values of the format in `[0, 1]`, ascending.
    pub fn values(&self) -> impl Iterator<Item = ProbFloat> {
        (0..=self.one().0).map(ProbFloat)
    }

    /// `(ê, f)` with `p = f · 2^(ê - m)` and `f < 2^(m+1)`.
    #[inline]
    pub fn decode(&self, p: ProbFloat) -> (i32, u64) {
        let m = self.man_bits;
        let e = (p.0 >> m) as i32;
        let frac = p.0 & mask(m);
        if e == 0 {
            (1 - self.bias, frac)
        } else {
            (e - self.bias, frac | (1u64 << m))
        }
    }

    /// `(sig, shift)` with `p = (sig << shift) · 2^-δ`.
    #[inline]
    pub fn scaled(&self, p: ProbFloat) -> (u64, u32) {
        let m = self.man_bits;
        let e = (p.0 >> m) as u32;
        let frac = p.0 & mask(m);
        if e == 0 {
            (frac, 0)
        } else {
            (frac | (1u64 << m), e - 1)
        }
    }

    pub fn to_f64(&self, p: ProbFloat) -> f64 {
        if *self == Self::F64 {
            return f64::from_bits(p.0);
        }
        if *self == Self::F32 {
            return f32::from_bits(p.0 as u32) as f64;
        }
        let (eh, f) = self.decode(p);
        ldexp(f as f64, eh - self.man_bits as i32)
    }

    pub fn to_rational(&self, p: ProbFloat) -> BigRational {
        let (eh, f) = self.decode(p);
        dyadic(BigInt::from(f), (eh - self.man_bits as i32) as i64)
    }

    /// Rounds `num · 2^q` to nearest, ties to even. Returns the value and whether it was exact.
    /// Values above one saturate to one.
    pub fn encode(&self, num: u64, q: i32) -> (ProbFloat, bool) {
        if num == 0 {
            return (self.zero(), true);
        }
        let m = self.man_bits as i32;
        let bl = 64 - num.leading_zeros() as i32;
        let te = bl - 1 + q;
        if te > 0 {
            return (self.one(), false);
        }
        let emin = 1 - self.bias;
        let top = te.max(emin);
        let tq = top - m;
        let (n, exact) = if q >= tq {
            ((num as u128) << (q - tq), true)
        } else {
            let sh = (tq - q) as u32;
            if sh > 100 {
                (0u128, false)
            } else {
                let r = num as u128;
                let mut n = r >> sh;
                let rem = r & ((1u128 << sh) - 1);
                let half = 1u128 << (sh - 1);
                if rem > half || (rem == half && n & 1 == 1) {
                    n += 1;
                }
                (n, rem == 0)
            }
        };
        let bits = (((top + self.bias - 1) as u64) << m) + n as u64;
        if bits > self.one().0 {
            (self.one(), false)
        } else {
            (ProbFloat(bits), exact)
        }
    }

    /// Exact `num · 2^q`, or `None` if not representable in `[0, 1]`.
    pub fn exact(&self, num: u64, q: i32) -> Option<ProbFloat> {
        match self.encode(num, q) {
            (p, true) => Some(p),
            _ => None,
        }
    }

    /// Rounds a host double to nearest, ties to even. Values at or below zero give zero;
    /// values at or above one, and NaN, give one.
    pub fn round_f64(&self, x: f64) -> ProbFloat {
        if x.is_nan() || x >= 1.0 {
            return self.one();
        }
        if x <= 0.0 {
            return self.zero();
        }
        if *self == Self::F32 {
            return ProbFloat((x as f32).to_bits() as u64);
        }
        if *self == Self::F64 {
            return ProbFloat(x.to_bits());
        }
        let b = x.to_bits();
        let e = (b >> 52) as i32;
        let frac = b & mask(52);
        let (num, q) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        self.encode(num, q).0
    }

    /// Exact `1 - p`, or `None` if it is not representable.
    pub fn complement(&self, p: ProbFloat) -> Option<ProbFloat> {
        if p == self.zero() {
            return Some(self.one());
        }
        let (eh, mut f) = self.decode(p);
        let mut q = eh - self.man_bits as i32;
        let floor = -(self.man_bits as i32) - 1;
        while q < floor && f & 1 == 0 {
            f >>= 1;
            q += 1;
        }
        if q < floor {
            return None;
        }
        let num = (1u64 << (-q) as u32) - f;
        self.exact(num, q)
    }
}

impl fmt::Display for ProbFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::F32 {
            return f.write_str("f32");
        }
        if *self == Self::F64 {
            return f.write_str("f64");
        }
        let standard = (1 << (self.exp_bits - 1)) - 1;
        if self.bias == standard {
            write!(f, "float:E={},m={}", self.exp_bits, self.man_bits)
        } else {
            write!(f, "float:E={},m={},bias={}", self.exp_bits, self.man_bits, self.bias)
        }
    }
}

impl FromStr for ProbFormat {
    type Err = Error;

    /// Accepts `f32`, `f64` and `float:E=4,m=3[,bias=5]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "f32" => Ok(Self::F32),
            "f64" => Ok(Self::F64),
            other => {
                let rest = other
                    .strip_prefix("float:")
                    .ok_or_else(|| Error::Parse(format!("unknown probability format '{other}'")))?;
                let (mut e, mut m, mut bias) = (None, None, None);
                for (k, v) in parse_kv(rest)? {
                    let val: i64 = v.parse().map_err(|_| Error::Parse(format!("invalid number '{v}'")))?;
                    match k.as_str() {
                        "E" | "e" => e = Some(val as u32),
                        "m" | "M" => m = Some(val as u32),
                        "bias" => bias = Some(val as i32),
                        _ => return Err(Error::Parse(format!("unknown key '{k}'"))),
                    }
                }
                match (e, m, bias) {
                    (Some(e), Some(m), None) => Self::emulated(e, m),
                    (Some(e), Some(m), Some(b)) => Self::with_bias(e, m, b),
                    _ => Err(Error::Parse("probability format needs E= and m=".into())),
                }
            }
        }
    }
}

/// Segmented description of a binary expansion in `(0, 1)`:
/// `n1` copies of `b1`, then the `n_hi`-bit integer `g_hi`, then `n2` copies of
/// `b2`, then the `n_lo`-bit integer `g_lo`, then zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BitExtractor {
    pub n1: u32,
    pub n2: u32,
    pub n_hi: u32,
    pub n_lo: u32,
    pub b1: bool,
    pub b2: bool,
    pub g_hi: u64,
    pub g_lo: u64,
}

impl BitExtractor {
    /// Digit `l` (counting from 1 after the binary point).
    #[inline]
    pub fn bit(&self, l: u64) -> bool {
        debug_assert!(l >= 1);
        let n1 = self.n1 as u64;
        if l <= n1 {
            return self.b1;
        }
        let a = n1 + self.n_hi as u64;
        if l <= a {
            return (self.g_hi >> (a - l)) & 1 == 1;
        }
        let b = a + self.n2 as u64;
        if l <= b {
            return self.b2;
        }
        let c = b + self.n_lo as u64;
        if l <= c {
            return (self.g_lo >> (c - l)) & 1 == 1;
        }
        false
    }

    /// Position of the last segment; every digit beyond it is zero.
    pub fn support_len(&self) -> u64 {
        self.n1 as u64 + self.n_hi as u64 + self.n2 as u64 + self.n_lo as u64
    }
}

/// Digit `l ≥ 1` of the expansion described by `beta`.
#[inline]
pub fn extract_bit(beta: &BitExtractor, l: u64) -> bool {
    beta.bit(l)
}

/// Low part shared by both preprocessing routines: aligns `x'` to `x`.
#[inline]
fn align(fmt: &ProbFormat, eh: i32, ehp: i32, fp: u64) -> (u32, u64, u64) {
    let m = fmt.man_bits;
    let d = (eh - ehp) as u32;
    let fp_hi = fp >> d.min(fmt.exp_bits + m);
    let n_lo = d.min(m + 1);
    let fp_lo = fp & mask(n_lo);
    (d, fp_hi, fp_lo)
}

/// Digits of `x - x'` without precondition checks. Callers guarantee `0 < x - x' < 1`.
#[inline]
pub(crate) fn sub_unchecked(fmt: &ProbFormat, x: ProbFloat, xp: ProbFloat) -> BitExtractor {
    let m = fmt.man_bits;
    let (eh, f) = fmt.decode(x);
    let (ehp, fp) = fmt.decode(xp);
    let (d, fp_hi, fp_lo) = align(fmt, eh, ehp, fp);
    let is_one = (x == fmt.one()) as i32;
    let b2 = fp_lo > 0;
    let n_lo = d.min(m + 1);
    BitExtractor {
        n1: (-eh - 1 + is_one) as u32,
        n2: d.saturating_sub(m + 1),
        n_hi: m + 1 - is_one as u32,
        n_lo,
        b1: false,
        b2,
        g_hi: f - fp_hi - b2 as u64,
        g_lo: ((b2 as u64) << n_lo) - fp_lo,
    }
}

/// Digits of `1 - (x + x')` without precondition checks.
#[inline]
pub(crate) fn sum_complement_unchecked(fmt: &ProbFormat, x: ProbFloat, xp: ProbFloat) -> BitExtractor {
    let (x, xp) = if x >= xp { (x, xp) } else { (xp, x) };
    let m = fmt.man_bits;
    let (eh, f) = fmt.decode(x);
    let (ehp, fp) = fmt.decode(xp);
    let (d, fp_hi, fp_lo) = align(fmt, eh, ehp, fp);
    let is_half = (x == fmt.half()) as i32;
    let b2 = fp_lo > 0;
    let n_lo = d.min(m + 1);
    let n_hi = m + 2 - is_half as u32;
    BitExtractor {
        n1: (-eh - 2 + is_half) as u32,
        n2: d.saturating_sub(m + 1),
        n_hi,
        n_lo,
        b1: true,
        b2,
        g_hi: (1u64 << n_hi) - f - fp_hi - b2 as u64,
        g_lo: ((b2 as u64) << n_lo) - fp_lo,
    }
}

/// Digits of the exact difference `x - x'`.
///
/// Requires `x, x' ∈ [0, 1]` with `0 < x - x' < 1`.
pub fn preproc_sub(fmt: &ProbFormat, x: ProbFloat, xp: ProbFloat) -> Result<BitExtractor> {
    if !fmt.contains(x) || !fmt.contains(xp) {
        return Err(Error::Precondition("operands must lie in [0, 1]".into()));
    }
    if x <= xp {
        return Err(Error::Precondition("difference must be positive".into()));
    }
    if x == fmt.one() && xp == fmt.zero() {
        return Err(Error::Precondition("difference must be below one".into()));
    }
    Ok(sub_unchecked(fmt, x, xp))
}

/// Digits of the exact value `1 - (x + x')`.
///
/// Requires `x, x' ∈ [0, 1/2]` with `0 < x + x' < 1`.
pub fn preproc_sum_complement(fmt: &ProbFormat, x: ProbFloat, xp: ProbFloat) -> Result<BitExtractor> {
    let half = fmt.half();
    if x > half || xp > half {
        return Err(Error::Precondition("operands must lie in [0, 1/2]".into()));
    }
    if x == fmt.zero() && xp == fmt.zero() {
        return Err(Error::Precondition("sum must be positive".into()));
    }
    if x == half && xp == half {
        return Err(Error::Precondition("sum must be below one".into()));
    }
    Ok(sum_complement_unchecked(fmt, x, xp))
}

/// Digits of `G*(d, f) - G*(d', f')` where `G*(d, f) = (1 - d) f + d (1 - f)`.
///
/// The pair `(d, d') = (0, 1)` cannot arise from a monotone dual function and is an error.
pub fn preproc_dual(fmt: &ProbFormat, d: bool, f: ProbFloat, dp: bool, fp: ProbFloat) -> Result<BitExtractor> {
    match (d, dp) {
        (false, false) => preproc_sub(fmt, f, fp),
        (true, true) => preproc_sub(fmt, fp, f),
        (true, false) => preproc_sum_complement(fmt, f, fp),
        (false, true) => Err(Error::ForbiddenDispatch),
    }
}

/// Unchecked variant of [`preproc_dual`] for callers that have established the preconditions.
#[inline]
pub(crate) fn dual_unchecked(fmt: &ProbFormat, d: bool, f: ProbFloat, dp: bool, fp: ProbFloat) -> Result<BitExtractor> {
    match (d, dp) {
        (false, false) => Ok(sub_unchecked(fmt, f, fp)),
        (true, true) => Ok(sub_unchecked(fmt, fp, f)),
        (true, false) => Ok(sum_complement_unchecked(fmt, f, fp)),
        (false, true) => Err(Error::ForbiddenDispatch),
    }
}
