//! Exact Bernoulli sampling and rational binary expansions.

use super::multiword::MultiWordUInt;
use crate::bitops::{ProbFloat, ProbFormat};
use crate::dist_spec::DualValue;
use crate::entropy::BitSource;
use crate::error::{Error, Result};

/// Returns `true` with probability exactly `i/k`, consuming two flips on average
/// (fewer when `i/k` is dyadic).
pub fn bernoulli<S: BitSource + ?Sized>(i: &MultiWordUInt, k: &MultiWordUInt, src: &mut S) -> Result<bool> {
    if i.is_zero() || i >= k {
        return Err(Error::Precondition("bernoulli requires 0 < i < k".into()));
    }
    bernoulli_unchecked(*i, k, src)
}

#[inline]
pub(crate) fn bernoulli_unchecked<S: BitSource + ?Sized>(mut i: MultiWordUInt, k: &MultiWordUInt, src: &mut S) -> Result<bool> {
    loop {
        i.shl1();
        if i == *k {
            return src.next_bit();
        }
        let b = if i > *k {
            i.sub_assign(k);
            true
        } else {
            false
        };
        if src.next_bit()? {
            return Ok(b);
        }
    }
}

/// `bernoulli` for ratios of machine integers.
pub fn bernoulli_u64<S: BitSource + ?Sized>(i: u64, k: u64, src: &mut S) -> Result<bool> {
    bernoulli(&MultiWordUInt::from(i), &MultiWordUInt::from(k), src)
}

/// The digits of the concise binary expansion of `i/k`, after the binary point.
///
/// A dyadic ratio ends with its final one digit followed by zeros.
#[derive(Clone, Debug)]
pub struct BinaryExpansion {
    i: MultiWordUInt,
    k: MultiWordUInt,
    done: bool,
}

/// Streams the digits of `i/k` for `0 < i < k`.
pub fn binary_expansion(i: MultiWordUInt, k: MultiWordUInt) -> Result<BinaryExpansion> {
    if i.is_zero() || i >= k {
        return Err(Error::Precondition("binary expansion requires 0 < i < k".into()));
    }
    Ok(BinaryExpansion { i, k, done: false })
}

impl Iterator for BinaryExpansion {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.done {
            return Some(false);
        }
        self.i.shl1();
        if self.i == self.k {
            self.done = true;
            return Some(true);
        }
        if self.i > self.k {
            self.i.sub_assign(&self.k);
            Some(true)
        } else {
            Some(false)
        }
    }
}

/// A probability float as an integer multiple of the smallest subnormal.
#[inline]
fn scaled(prob: &ProbFormat, p: ProbFloat) -> MultiWordUInt {
    let (sig, shift) = prob.scaled(p);
    MultiWordUInt::from_shifted(sig, shift)
}

/// `(i, k)` with `i/k = (f1 - f2) / (f1 - f0)` exactly, unreduced.
pub fn exact_ratio(prob: &ProbFormat, f0: ProbFloat, f2: ProbFloat, f1: ProbFloat) -> Result<(MultiWordUInt, MultiWordUInt)> {
    for f in [f0, f2, f1] {
        if !prob.contains(f) {
            return Err(Error::Precondition("ratio operands must lie in [0, 1]".into()));
        }
    }
    if !(f0 < f2 && f2 < f1) {
        return Err(Error::Precondition("ratio requires f0 < f2 < f1".into()));
    }
    Ok(exact_ratio_unchecked(prob, f0, f2, f1))
}

#[inline]
pub(crate) fn exact_ratio_unchecked(prob: &ProbFormat, f0: ProbFloat, f2: ProbFloat, f1: ProbFloat) -> (MultiWordUInt, MultiWordUInt) {
    let s1 = scaled(prob, f1);
    let mut i = s1;
    i.sub_assign(&scaled(prob, f2));
    let mut k = s1;
    k.sub_assign(&scaled(prob, f0));
    (i, k)
}

#[inline]
fn scaled_dual(prob: &ProbFormat, g: DualValue) -> MultiWordUInt {
    let s = scaled(prob, g.f);
    if g.d {
        let mut one = scaled(prob, prob.one());
        one.sub_assign(&s);
        one
    } else {
        s
    }
}

/// `(i, k)` with `i/k = (G*(g1) - G*(g2)) / (G*(g1) - G*(g0))` exactly.
pub fn exact_ratio_dual(prob: &ProbFormat, g0: DualValue, g2: DualValue, g1: DualValue) -> Result<(MultiWordUInt, MultiWordUInt)> {
    for g in [g0, g2, g1] {
        if !g.is_canonical(prob) {
            return Err(Error::Precondition("dual ratio operands must be canonical".into()));
        }
    }
    if !(g0.lte(&g2) && g2.lte(&g1) && g0 != g2 && g2 != g1) {
        return Err(Error::Precondition("dual ratio requires g0 < g2 < g1".into()));
    }
    Ok(exact_ratio_dual_unchecked(prob, g0, g2, g1))
}

#[inline]
pub(crate) fn exact_ratio_dual_unchecked(prob: &ProbFormat, g0: DualValue, g2: DualValue, g1: DualValue) -> (MultiWordUInt, MultiWordUInt) {
    let s1 = scaled_dual(prob, g1);
    let mut i = s1;
    i.sub_assign(&scaled_dual(prob, g2));
    let mut k = s1;
    k.sub_assign(&scaled_dual(prob, g0));
    (i, k)
}
