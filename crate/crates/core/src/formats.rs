//! Binary number formats.
//!
//! A format is a triple `(n, γ, φ)`: a width `n`, a value map `γ` from `n`-bit
//! codes onto the extended reals, and a bijection `φ` on `n`-bit strings such
//! that dictionary order of preimages agrees with value order. Generators work
//! in "index space" (the preimages under `φ`), where the order is plain
//! unsigned-integer order, and map back to codes at the end.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported code width.
pub const MAX_WIDTH: u32 = 64;

/// Bit mask with the low `width` bits set.
#[inline]
pub(crate) fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// `2^k` as a host double, for `k` in `[-1074, 1023]`.
#[inline]
pub(crate) fn pow2(k: i32) -> f64 {
    debug_assert!((-1074..=1023).contains(&k));
    if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (k + 1074))
    }
}

/// `x · 2^k`, exact whenever the result is representable.
pub(crate) fn ldexp(mut x: f64, mut k: i32) -> f64 {
    while k > 1000 {
        x *= pow2(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= pow2(-1000);
        k += 1000;
    }
    x * pow2(k)
}

/// `num · 2^exp` as an exact rational.
pub(crate) fn dyadic(num: BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(num << (exp as usize))
    } else {
        BigRational::new(num, BigInt::one() << ((-exp) as usize))
    }
}

/// An `n`-bit string, the unit of generator output.
///
/// The derived ordering compares raw bits and is not the value order of any
/// particular format; use [`FormatSpec::compare`] for that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    bits: u64,
    width: u32,
}

impl Code {
    pub fn new(bits: u64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidFormat(format!("width {width} outside [1, 64]")));
        }
        if bits & !mask(width) != 0 {
            return Err(Error::CodeWidth { bits, width });
        }
        Ok(Self { bits, width })
    }

    #[inline]
    pub(crate) fn from_raw(bits: u64, width: u32) -> Self {
        debug_assert!(bits & !mask(width) == 0);
        Self { bits, width }
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn width(self) -> u32 {
        self.width
    }

    /// Zero-padded lowercase hex with a `0x` prefix.
    pub fn to_hex(self) -> String {
        let digits = self.width.div_ceil(4) as usize;
        format!("0x{:0digits$x}", self.bits)
    }

    /// The code as a string of `0`/`1` characters, most significant bit first.
    pub fn to_binary(self) -> String {
        let w = self.width as usize;
        format!("{:0w$b}", self.bits)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// The extended reals with a maximal "not a number" element.
///
/// Order: `NegInf < Finite(_) < PosInf < Bottom`.
#[derive(Clone, Debug, PartialEq)]
pub enum Extended<T> {
    NegInf,
    Finite(T),
    PosInf,
    Bottom,
}

/// Extended reals with host-double finite values.
pub type ExtendedReal = Extended<f64>;

/// Extended reals with exact rational finite values.
pub type ExtendedRational = Extended<BigRational>;

impl<T> Extended<T> {
    fn rank(&self) -> u8 {
        match self {
            Extended::NegInf => 0,
            Extended::Finite(_) => 1,
            Extended::PosInf => 2,
            Extended::Bottom => 3,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }
}

impl<T: PartialOrd> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}

impl ExtendedReal {
    /// Maps a host double, sending NaN to `Bottom`.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            Extended::Bottom
        } else if x == f64::INFINITY {
            Extended::PosInf
        } else if x == f64::NEG_INFINITY {
            Extended::NegInf
        } else {
            Extended::Finite(x)
        }
    }

    /// The host double for this value (`Bottom` becomes NaN).
    pub fn to_f64(&self) -> f64 {
        match *self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Finite(x) => x,
            Extended::PosInf => f64::INFINITY,
            Extended::Bottom => f64::NAN,
        }
    }

    /// Total order (finite values are never NaN).
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(x) => write!(f, "{x:?}"),
            Extended::PosInf => f.write_str("inf"),
            Extended::Bottom => f.write_str("nan"),
        }
    }
}

/// The family of a binary number format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormatKind {
    UnsignedInt,
    SignMagnitude,
    TwosComplement,
    /// Unsigned integer scaled by `2^-offset`.
    FixedUnsigned { offset: i32 },
    FixedSignMagnitude { offset: i32 },
    FixedTwosComplement { offset: i32 },
    /// IEEE-754 style float with `exp_bits` exponent and `man_bits` fraction bits.
    IeeeFloat { exp_bits: u32, man_bits: u32 },
    /// Posit with two exponent bits.
    Posit,
}

/// A binary number format: width, value map and order map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormatSpec {
    kind: FormatKind,
    width: u32,
}

impl FormatSpec {
    pub fn new(kind: FormatKind, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidFormat(format!("width {width} outside [1, 64]")));
        }
        match kind {
            FormatKind::UnsignedInt | FormatKind::FixedUnsigned { .. } => {}
            FormatKind::SignMagnitude
            | FormatKind::TwosComplement
            | FormatKind::FixedSignMagnitude { .. }
            | FormatKind::FixedTwosComplement { .. } => {
                if width < 2 {
                    return Err(Error::InvalidFormat("signed formats need at least 2 bits".into()));
                }
            }
            FormatKind::IeeeFloat { exp_bits, man_bits } => {
                if !(1..=11).contains(&exp_bits) || !(1..=52).contains(&man_bits) {
                    return Err(Error::InvalidFormat(format!(
                        "float needs 1 <= E <= 11 and 1 <= m <= 52, got E={exp_bits}, m={man_bits}"
                    )));
                }
                if width != 1 + exp_bits + man_bits {
                    return Err(Error::InvalidFormat(format!(
                        "float width {width} != 1 + {exp_bits} + {man_bits}"
                    )));
                }
            }
            FormatKind::Posit => {
                if width < 3 {
                    return Err(Error::InvalidFormat("posits need at least 3 bits".into()));
                }
            }
        }
        match kind {
            FormatKind::FixedUnsigned { offset }
            | FormatKind::FixedSignMagnitude { offset }
            | FormatKind::FixedTwosComplement { offset } => {
                if offset.unsigned_abs() > 1000 {
                    return Err(Error::InvalidFormat(format!("fixed-point offset {offset} too large")));
                }
            }
            _ => {}
        }
        Ok(Self { kind, width })
    }

    pub fn unsigned(n: u32) -> Result<Self> {
        Self::new(FormatKind::UnsignedInt, n)
    }

    pub fn sign_magnitude(n: u32) -> Result<Self> {
        Self::new(FormatKind::SignMagnitude, n)
    }

    pub fn twos_complement(n: u32) -> Result<Self> {
        Self::new(FormatKind::TwosComplement, n)
    }

    pub fn ieee_float(exp_bits: u32, man_bits: u32) -> Result<Self> {
        Self::new(FormatKind::IeeeFloat { exp_bits, man_bits }, 1 + exp_bits + man_bits)
    }

    pub fn posit(n: u32) -> Result<Self> {
        Self::new(FormatKind::Posit, n)
    }

    pub fn binary32() -> Self {
        Self { kind: FormatKind::IeeeFloat { exp_bits: 8, man_bits: 23 }, width: 32 }
    }

    pub fn binary64() -> Self {
        Self { kind: FormatKind::IeeeFloat { exp_bits: 11, man_bits: 52 }, width: 64 }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn kind(&self) -> FormatKind {
        self.kind
    }

    /// Number of codes, `2^n`, as a `u128`.
    pub fn cardinality(&self) -> u128 {
        1u128 << self.width
    }

    /// Largest index in dictionary order, `2^n - 1`.
    #[inline]
    pub fn max_index(&self) -> u64 {
        mask(self.width)
    }

    pub fn code(&self, bits: u64) -> Result<Code> {
        Code::new(bits, self.width)
    }

    fn check(&self, c: Code) -> Result<()> {
        if c.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: c.width });
        }
        Ok(())
    }

    #[inline]
    fn top(&self) -> u64 {
        1u64 << (self.width - 1)
    }

    #[inline]
    fn phi_sm(&self, b: u64) -> u64 {
        let top = self.top();
        let low = top - 1;
        if b & top == 0 {
            top | (!b & low)
        } else {
            b & low
        }
    }

    #[inline]
    fn phi_sm_inv(&self, c: u64) -> u64 {
        let top = self.top();
        let low = top - 1;
        if c & top != 0 {
            !c & low
        } else {
            top | c
        }
    }

    /// Order map on raw bits: index (dictionary preimage) to code.
    #[inline]
    pub fn phi_bits(&self, b: u64) -> u64 {
        match self.kind {
            FormatKind::UnsignedInt | FormatKind::FixedUnsigned { .. } => b,
            FormatKind::SignMagnitude | FormatKind::FixedSignMagnitude { .. } => self.phi_sm(b),
            FormatKind::TwosComplement | FormatKind::FixedTwosComplement { .. } | FormatKind::Posit => {
                b ^ self.top()
            }
            FormatKind::IeeeFloat { exp_bits, man_bits } => {
                let boundary = self.top() | (mask(exp_bits) << man_bits);
                if b <= boundary {
                    self.phi_sm(b + mask(man_bits))
                } else {
                    b
                }
            }
        }
    }

    /// Inverse order map on raw bits: code to index.
    #[inline]
    pub fn phi_inv_bits(&self, c: u64) -> u64 {
        match self.kind {
            FormatKind::UnsignedInt | FormatKind::FixedUnsigned { .. } => c,
            FormatKind::SignMagnitude | FormatKind::FixedSignMagnitude { .. } => self.phi_sm_inv(c),
            FormatKind::TwosComplement | FormatKind::FixedTwosComplement { .. } | FormatKind::Posit => {
                c ^ self.top()
            }
            FormatKind::IeeeFloat { man_bits, .. } => {
                let u = self.phi_sm_inv(c);
                let shift = mask(man_bits);
                if u >= shift {
                    u - shift
                } else {
                    c
                }
            }
        }
    }

    /// `φ(c)`.
    pub fn phi(&self, c: Code) -> Code {
        debug_assert_eq!(c.width, self.width);
        Code::from_raw(self.phi_bits(c.bits), self.width)
    }

    /// `φ⁻¹(c)`.
    pub fn phi_inv(&self, c: Code) -> Code {
        debug_assert_eq!(c.width, self.width);
        Code::from_raw(self.phi_inv_bits(c.bits), self.width)
    }

    /// The code at position `index` of the format's order.
    #[inline]
    pub fn at_index(&self, index: u64) -> Code {
        debug_assert!(index <= self.max_index());
        Code::from_raw(self.phi_bits(index), self.width)
    }

    /// Position of `c` in the format's order.
    #[inline]
    pub fn index_of(&self, c: Code) -> u64 {
        self.phi_inv_bits(c.bits)
    }

    /// The minimal code, `φ(0ⁿ)`.
    pub fn min_code(&self) -> Code {
        self.at_index(0)
    }

    /// The maximal code, `φ(1ⁿ)`.
    pub fn max_code(&self) -> Code {
        self.at_index(self.max_index())
    }

    pub fn succ(&self, c: Code) -> Result<Code> {
        self.check(c)?;
        let i = self.index_of(c);
        if i == self.max_index() {
            return Err(Error::Extremal("successor"));
        }
        Ok(self.at_index(i + 1))
    }

    pub fn pred(&self, c: Code) -> Result<Code> {
        self.check(c)?;
        let i = self.index_of(c);
        if i == 0 {
            return Err(Error::Extremal("predecessor"));
        }
        Ok(self.at_index(i - 1))
    }

    /// Compares two codes under the order induced by `φ`.
    pub fn compare(&self, a: Code, b: Code) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.index_of(a).cmp(&self.index_of(b)))
    }

    /// Signed integer value of the raw bits for the integer-like kinds.
    fn integer_value(&self, bits: u64) -> i128 {
        let top = self.top();
        match self.kind {
            FormatKind::UnsignedInt | FormatKind::FixedUnsigned { .. } => bits as i128,
            FormatKind::SignMagnitude | FormatKind::FixedSignMagnitude { .. } => {
                let mag = (bits & (top - 1)) as i128;
                if bits & top != 0 {
                    -mag
                } else {
                    mag
                }
            }
            FormatKind::TwosComplement | FormatKind::FixedTwosComplement { .. } => {
                if bits & top != 0 {
                    bits as i128 - (1i128 << self.width)
                } else {
                    bits as i128
                }
            }
            _ => unreachable!("not an integer kind"),
        }
    }

    fn fixed_offset(&self) -> i32 {
        match self.kind {
            FormatKind::FixedUnsigned { offset }
            | FormatKind::FixedSignMagnitude { offset }
            | FormatKind::FixedTwosComplement { offset } => offset,
            _ => 0,
        }
    }

    /// `γ(c)` as a host double. Exact except for integer, fixed-point and posit
    /// codes with more than 53 significant bits, which round to nearest.
    pub fn gamma(&self, c: Code) -> ExtendedReal {
        debug_assert_eq!(c.width, self.width);
        let bits = c.bits;
        match self.kind {
            FormatKind::IeeeFloat { exp_bits, man_bits } => {
                if exp_bits == 11 && man_bits == 52 {
                    return ExtendedReal::from_f64(f64::from_bits(bits));
                }
                if exp_bits == 8 && man_bits == 23 {
                    return ExtendedReal::from_f64(f32::from_bits(bits as u32) as f64);
                }
                match decode_float(bits, exp_bits, man_bits) {
                    FloatParts::Inf(neg) => {
                        if neg {
                            Extended::NegInf
                        } else {
                            Extended::PosInf
                        }
                    }
                    FloatParts::Nan => Extended::Bottom,
                    FloatParts::Finite { neg, sig, exp } => {
                        let v = ldexp(sig as f64, exp);
                        Extended::Finite(if neg { -v } else { v })
                    }
                }
            }
            FormatKind::Posit => match decode_posit(bits, self.width) {
                PositParts::Zero => Extended::Finite(0.0),
                PositParts::NegInf => Extended::NegInf,
                PositParts::Finite { sig, exp } => Extended::Finite(ldexp_i128(sig, exp)),
            },
            _ => {
                let v = self.integer_value(bits);
                Extended::Finite(ldexp_i128(v, -(self.fixed_offset() as i64)))
            }
        }
    }

    /// `γ(c)` as an exact rational.
    pub fn gamma_exact(&self, c: Code) -> ExtendedRational {
        debug_assert_eq!(c.width, self.width);
        let bits = c.bits;
        match self.kind {
            FormatKind::IeeeFloat { exp_bits, man_bits } => match decode_float(bits, exp_bits, man_bits) {
                FloatParts::Inf(neg) => {
                    if neg {
                        Extended::NegInf
                    } else {
                        Extended::PosInf
                    }
                }
                FloatParts::Nan => Extended::Bottom,
                FloatParts::Finite { neg, sig, exp } => {
                    let s = BigInt::from(sig);
                    let v = dyadic(if neg { -s } else { s }, exp as i64);
                    Extended::Finite(v)
                }
            },
            FormatKind::Posit => match decode_posit(bits, self.width) {
                PositParts::Zero => Extended::Finite(BigRational::zero()),
                PositParts::NegInf => Extended::NegInf,
                PositParts::Finite { sig, exp } => Extended::Finite(dyadic(BigInt::from(sig), exp)),
            },
            _ => {
                let v = self.integer_value(bits);
                Extended::Finite(dyadic(BigInt::from(v), -(self.fixed_offset() as i64)))
            }
        }
    }
}

fn ldexp_i128(v: i128, exp: i64) -> f64 {
    if v == 0 {
        return 0.0;
    }
    let out = ldexp(v.unsigned_abs() as f64, exp.clamp(-4000, 4000) as i32);
    if v < 0 {
        -out
    } else {
        out
    }
}

pub(crate) enum FloatParts {
    Inf(bool),
    Nan,
    /// `(-1)^neg · sig · 2^exp`.
    Finite { neg: bool, sig: u64, exp: i32 },
}

pub(crate) fn decode_float(bits: u64, exp_bits: u32, man_bits: u32) -> FloatParts {
    let neg = (bits >> (exp_bits + man_bits)) & 1 == 1;
    let e = (bits >> man_bits) & mask(exp_bits);
    let frac = bits & mask(man_bits);
    let bias = (1i32 << (exp_bits - 1)) - 1;
    if e == mask(exp_bits) {
        return if frac == 0 { FloatParts::Inf(neg) } else { FloatParts::Nan };
    }
    if e == 0 {
        FloatParts::Finite { neg, sig: frac, exp: 1 - bias - man_bits as i32 }
    } else {
        FloatParts::Finite { neg, sig: frac | (1u64 << man_bits), exp: e as i32 - bias - man_bits as i32 }
    }
}

enum PositParts {
    Zero,
    NegInf,
    /// `sig · 2^exp` with a signed significand.
    Finite { sig: i128, exp: i64 },
}

/// Decodes a posit with two exponent bits. Fields cut off by the width read as zero bits.
fn decode_posit(bits: u64, n: u32) -> PositParts {
    let top = 1u64 << (n - 1);
    if bits == 0 {
        return PositParts::Zero;
    }
    if bits == top {
        return PositParts::NegInf;
    }
    let s = (bits & top != 0) as i64;
    let body_len = n - 1;
    let b1 = (bits >> (body_len - 1)) & 1;
    // Length of the run of b1 starting at the most significant body bit.
    let mut k = 0u32;
    while k < body_len && (bits >> (body_len - 1 - k)) & 1 == b1 {
        k += 1;
    }
    let rest = body_len.saturating_sub(k + 1);
    let rest_bits = if rest == 0 { 0 } else { bits & mask(rest) };
    let e_taken = rest.min(2);
    let frac_bits = rest - e_taken;
    let e = if e_taken == 0 { 0 } else { ((rest_bits >> frac_bits) << (2 - e_taken)) as i64 };
    let f = if frac_bits == 0 { 0 } else { rest_bits & mask(frac_bits) };
    let r = if b1 == 1 { k as i64 - 1 } else { -(k as i64) };
    let scale = (1 - 2 * s) * (4 * r + e + s);
    let sig = (1 - 3 * s as i128) * (1i128 << frac_bits) + f as i128;
    PositParts::Finite { sig, exp: scale - frac_bits as i64 }
}

impl fmt::Display for FormatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.width;
        match self.kind {
            FormatKind::UnsignedInt => write!(f, "uint:{n}"),
            FormatKind::SignMagnitude => write!(f, "sm:{n}"),
            FormatKind::TwosComplement => write!(f, "int:{n}"),
            FormatKind::FixedUnsigned { offset } => write!(f, "fixed:n={n},m={offset},signed=u"),
            FormatKind::FixedSignMagnitude { offset } => write!(f, "fixed:n={n},m={offset},signed=sm"),
            FormatKind::FixedTwosComplement { offset } => write!(f, "fixed:n={n},m={offset},signed=tc"),
            FormatKind::IeeeFloat { exp_bits: 8, man_bits: 23 } => f.write_str("f32"),
            FormatKind::IeeeFloat { exp_bits: 11, man_bits: 52 } => f.write_str("f64"),
            FormatKind::IeeeFloat { exp_bits, man_bits } => write!(f, "float:E={exp_bits},m={man_bits}"),
            FormatKind::Posit => write!(f, "posit:{n}"),
        }
    }
}

/// Parses `key=value` pairs separated by commas.
pub(crate) fn parse_kv(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{p}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.parse().map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))
}

impl FromStr for FormatSpec {
    type Err = Error;

    /// Accepts `f32`, `f64`, `float:E=5,m=2`, `uint:8`, `int:8`, `sm:8`,
    /// `posit:16` and `fixed:n=16,m=8,signed=sm|tc|u`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "f32" | "binary32" => return Ok(Self::binary32()),
            "f64" | "binary64" => return Ok(Self::binary64()),
            _ => {}
        }
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown format descriptor '{s}'")))?;
        match head {
            "uint" => Self::unsigned(parse_u32(rest, "width")?),
            "int" | "tc" => Self::twos_complement(parse_u32(rest, "width")?),
            "sm" => Self::sign_magnitude(parse_u32(rest, "width")?),
            "posit" => Self::posit(parse_u32(rest, "width")?),
            "float" => {
                let mut e = None;
                let mut m = None;
                for (k, v) in parse_kv(rest)? {
                    match k.as_str() {
                        "E" | "e" => e = Some(parse_u32(&v, "exponent width")?),
                        "m" | "M" => m = Some(parse_u32(&v, "fraction width")?),
                        _ => return Err(Error::Parse(format!("unknown float key '{k}'"))),
                    }
                }
                match (e, m) {
                    (Some(e), Some(m)) => Self::ieee_float(e, m),
                    _ => Err(Error::Parse("float descriptor needs E= and m=".into())),
                }
            }
            "fixed" => {
                let mut n = None;
                let mut m = 0i32;
                let mut signed = "u".to_string();
                for (k, v) in parse_kv(rest)? {
                    match k.as_str() {
                        "n" => n = Some(parse_u32(&v, "width")?),
                        "m" => m = v.parse().map_err(|_| Error::Parse(format!("invalid offset '{v}'")))?,
                        "signed" => signed = v,
                        _ => return Err(Error::Parse(format!("unknown fixed key '{k}'"))),
                    }
                }
                let n = n.ok_or_else(|| Error::Parse("fixed descriptor needs n=".into()))?;
                let kind = match signed.as_str() {
                    "u" | "no" | "unsigned" | "false" => FormatKind::FixedUnsigned { offset: m },
                    "sm" => FormatKind::FixedSignMagnitude { offset: m },
                    "tc" | "yes" | "true" => FormatKind::FixedTwosComplement { offset: m },
                    _ => return Err(Error::Parse(format!("unknown signedness '{signed}'"))),
                };
                Self::new(kind, n)
            }
            _ => Err(Error::Parse(format!("unknown format descriptor '{s}'"))),
        }
    }
}
