//! Entropy-optimal generation by lazy refinement of the DDG tree.

use super::GenResult;
use crate::bitops::{dual_unchecked, sub_unchecked, BitExtractor};
use crate::dist_spec::{DualDistFn, DualValue, FiniteCdf};
use crate::entropy::BitSource;
use crate::error::{Error, Result};
use crate::formats::mask;

/// Index of the last code in the left half below the prefix `b` of length `len`.
#[inline]
pub(crate) fn midpoint(b: u64, len: u32, n: u32) -> u64 {
    let rest = n - len - 1;
    let hi = if len == 0 { 0 } else { b << (n - len) };
    hi | mask(rest)
}

/// Chooses the next output bit given the digit extractors of the two child masses.
/// Returns `true` for the right child.
#[inline]
fn choose<S: BitSource + ?Sized>(b0: &BitExtractor, b1: &BitExtractor, l: &mut u64, src: &mut S) -> Result<bool> {
    if *l > 0 {
        match (b0.bit(*l), b1.bit(*l)) {
            (true, false) => return Ok(false),
            (false, true) => return Ok(true),
            _ => {}
        }
    }
    loop {
        let x = src.next_bit()?;
        *l += 1;
        if !x && b0.bit(*l) {
            return Ok(false);
        }
        if x && b1.bit(*l) {
            return Ok(true);
        }
    }
}

/// Draws a code from the distribution of `cdf` using the optimal expected number of flips.
pub fn gen_opt<S: BitSource + ?Sized>(cdf: &FiniteCdf, src: &mut S) -> Result<GenResult> {
    let fmt = cdf.format();
    let prob = cdf.prob_format();
    let n = fmt.width();
    let start = src.bits_consumed();
    let (mut f0, mut f1) = (prob.zero(), prob.one());
    let (mut b, mut l) = (0u64, 0u64);
    for len in 0..n {
        let f2 = cdf.eval_index(midpoint(b, len, n));
        if f2 < f0 || f2 > f1 {
            return Err(Error::SpecViolation(format!(
                "CDF not monotone near index {}: value {} outside [{}, {}]",
                midpoint(b, len, n),
                prob.to_f64(f2),
                prob.to_f64(f0),
                prob.to_f64(f1)
            )));
        }
        let right = if f2 == f1 {
            false
        } else if f2 == f0 {
            true
        } else {
            let beta0 = sub_unchecked(prob, f2, f0);
            let beta1 = sub_unchecked(prob, f1, f2);
            choose(&beta0, &beta1, &mut l, src)?
        };
        b = (b << 1) | right as u64;
        if right {
            f0 = f2;
        } else {
            f1 = f2;
        }
    }
    Ok(GenResult { code: fmt.at_index(b), flips: src.bits_consumed() - start })
}

/// Entropy-optimal generation from a dual distribution function.
pub fn gen_opt_ddf<S: BitSource + ?Sized>(g: &DualDistFn, src: &mut S) -> Result<GenResult> {
    let fmt = g.format();
    let prob = g.prob_format();
    let n = fmt.width();
    let start = src.bits_consumed();
    let mut g0 = DualValue::new(false, prob.zero());
    let mut g1 = DualValue::new(true, prob.zero());
    let (mut b, mut l) = (0u64, 0u64);
    for len in 0..n {
        let idx = midpoint(b, len, n);
        let g2 = g.eval_index(idx);
        check_dual(prob, idx, g0, g2, g1)?;
        let right = if g2 == g1 {
            false
        } else if g2 == g0 {
            true
        } else {
            let beta0 = dual_unchecked(prob, g2.d, g2.f, g0.d, g0.f)?;
            let beta1 = dual_unchecked(prob, g1.d, g1.f, g2.d, g2.f)?;
            choose(&beta0, &beta1, &mut l, src)?
        };
        b = (b << 1) | right as u64;
        if right {
            g0 = g2;
        } else {
            g1 = g2;
        }
    }
    Ok(GenResult { code: fmt.at_index(b), flips: src.bits_consumed() - start })
}

/// Runtime guard shared by the dual generators.
#[inline]
pub(crate) fn check_dual(
    prob: &crate::bitops::ProbFormat,
    idx: u64,
    g0: DualValue,
    g2: DualValue,
    g1: DualValue,
) -> Result<()> {
    if !g2.is_canonical(prob) {
        return Err(Error::SpecViolation(format!("dual value at index {idx} is not canonical")));
    }
    if !(g0.lte(&g2) && g2.lte(&g1)) {
        return Err(Error::SpecViolation(format!(
            "dual function not monotone near index {idx}: {} outside [{}, {}]",
            g2.to_f64(prob),
            g0.to_f64(prob),
            g1.to_f64(prob)
        )));
    }
    Ok(())
}
