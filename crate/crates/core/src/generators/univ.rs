//! Entropy-optimal generation from a binary-coded probability distribution
//! given by exact rationals.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist_spec::{p_of_prefix, FiniteCdf};
use crate::entropy::BitSource;
use crate::error::{Error, Result};

type PrefixFn = Arc<dyn Fn(&[bool]) -> BigRational + Send + Sync>;

/// A prefix-consistent map from bit strings to probabilities:
/// `p(ε) = 1` and `p(b) = p(b0) + p(b1)`.
#[derive(Clone)]
pub struct RationalBcd {
    eval: PrefixFn,
}

impl RationalBcd {
    /// Wraps an arbitrary prefix function. Consistency is the caller's responsibility.
    pub fn from_fn(f: impl Fn(&[bool]) -> BigRational + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f) }
    }

    /// The distribution over `depth`-bit strings whose leaf `i` (read as an unsigned
    /// integer, most significant bit first) has probability `leaves[i]`.
    pub fn from_leaves(depth: u32, leaves: Vec<BigRational>) -> Result<Self> {
        if depth >= 32 || leaves.len() != 1usize << depth {
            return Err(Error::Precondition(format!("need exactly 2^{depth} leaves")));
        }
        if leaves.iter().any(|p| p.is_negative()) {
            return Err(Error::Precondition("leaf probabilities must be nonnegative".into()));
        }
        let mut prefix = Vec::with_capacity(leaves.len() + 1);
        prefix.push(BigRational::zero());
        for p in &leaves {
            let next = prefix.last().expect("nonempty") + p;
            prefix.push(next);
        }
        if !prefix.last().expect("nonempty").is_one() {
            return Err(Error::Precondition("leaf probabilities must sum to one".into()));
        }
        let prefix = Arc::new(prefix);
        Ok(Self::from_fn(move |b| {
            let len = b.len().min(depth as usize) as u32;
            let v = b[..len as usize].iter().fold(0usize, |acc, &x| (acc << 1) | x as usize);
            let rest = depth - len;
            let lo = v << rest;
            let hi = (v + 1) << rest;
            &prefix[hi] - &prefix[lo]
        }))
    }

    /// The distribution of the index bits of a code drawn from `cdf`.
    pub fn from_cdf(cdf: &FiniteCdf) -> Self {
        let cdf = cdf.clone();
        Self::from_fn(move |b| {
            let n = cdf.format().width() as usize;
            let len = b.len().min(n);
            let v = b[..len].iter().fold(0u64, |acc, &x| (acc << 1) | x as u64);
            let (lo, hi) = p_of_prefix(&cdf, v, len as u32).expect("prefix within width");
            let prob = cdf.prob_format();
            prob.to_rational(hi) - prob.to_rational(lo)
        })
    }

    pub fn prob(&self, b: &[bool]) -> BigRational {
        (self.eval)(b)
    }
}

/// Digit `l` of the concise binary expansion of `q ≥ 0`; digit 0 is the integer part's low bit.
pub(crate) fn digit(q: &BigRational, l: u64) -> bool {
    let scaled = q.numer() << l as usize;
    scaled.div_floor(q.denom()).is_odd()
}

/// Draws `depth` bits from `p`, returning them with the number of flips consumed.
pub fn gen_univ<S: BitSource + ?Sized>(p: &RationalBcd, src: &mut S, depth: u32) -> Result<(Vec<bool>, u64)> {
    let start = src.bits_consumed();
    let mut b: Vec<bool> = Vec::with_capacity(depth as usize);
    let mut l = 0u64;
    for _ in 0..depth {
        b.push(false);
        let p0 = p.prob(&b);
        *b.last_mut().expect("pushed") = true;
        let p1 = p.prob(&b);
        b.pop();
        let right = match (digit(&p0, l), digit(&p1, l)) {
            (true, false) => false,
            (false, true) => true,
            _ => loop {
                let x = src.next_bit()?;
                l += 1;
                if !x && digit(&p0, l) {
                    break false;
                }
                if x && digit(&p1, l) {
                    break true;
                }
            },
        };
        b.push(right);
    }
    Ok((b, src.bits_consumed() - start))
}

/// Reads a bit string as an unsigned integer, most significant bit first.
pub fn bits_to_u64(b: &[bool]) -> u64 {
    b.iter().fold(0, |acc, &x| (acc << 1) | x as u64)
}

