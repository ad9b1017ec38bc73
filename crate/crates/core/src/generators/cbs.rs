//! Conditional bit sampling: one exact Bernoulli draw per output bit.

use super::bernoulli::{bernoulli_unchecked, exact_ratio_dual_unchecked, exact_ratio_unchecked};
use super::opt::{check_dual, midpoint};
use super::GenResult;
use crate::dist_spec::{DualDistFn, DualValue, FiniteCdf};
use crate::entropy::BitSource;
use crate::error::{Error, Result};

/// Draws a code from `cdf` by sampling each bit from its exact conditional probability.
pub fn gen_cbs<S: BitSource + ?Sized>(cdf: &FiniteCdf, src: &mut S) -> Result<GenResult> {
    let fmt = cdf.format();
    let prob = cdf.prob_format();
    let n = fmt.width();
    let start = src.bits_consumed();
    let (mut f0, mut f1) = (prob.zero(), prob.one());
    let mut b = 0u64;
    for len in 0..n {
        let idx = midpoint(b, len, n);
        let f2 = cdf.eval_index(idx);
        if f2 < f0 || f2 > f1 {
            return Err(Error::SpecViolation(format!("CDF not monotone near index {idx}")));
        }
        let right = if f2 == f1 {
            false
        } else if f2 == f0 {
            true
        } else {
            let (i, k) = exact_ratio_unchecked(prob, f0, f2, f1);
            bernoulli_unchecked(i, &k, src)?
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

/// Conditional bit sampling from a dual distribution function.
pub fn gen_cbs_ddf<S: BitSource + ?Sized>(g: &DualDistFn, src: &mut S) -> Result<GenResult> {
    let fmt = g.format();
    let prob = g.prob_format();
    let n = fmt.width();
    let start = src.bits_consumed();
    let mut g0 = DualValue::new(false, prob.zero());
    let mut g1 = DualValue::new(true, prob.zero());
    let mut b = 0u64;
    for len in 0..n {
        let idx = midpoint(b, len, n);
        let g2 = g.eval_index(idx);
        check_dual(prob, idx, g0, g2, g1)?;
        let right = if g2 == g1 {
            false
        } else if g2 == g0 {
            true
        } else {
            let (i, k) = exact_ratio_dual_unchecked(prob, g0, g2, g1);
            bernoulli_unchecked(i, &k, src)?
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
