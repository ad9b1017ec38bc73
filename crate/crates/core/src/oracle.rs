//! Exact-rational reference machinery for testing the generators.
//!
//! Nothing here is used on production paths. Everything is computed with
//! arbitrary-size integers, so results are exact but slow.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist_spec::{DualDistFn, FiniteCdf};
use crate::entropy::ReplaySource;
use crate::error::{Error, Result};
use crate::formats::Code;

/// Exact rational numbers.
pub type ExactRational = BigRational;

/// Depth used by default when enumerating generators.
pub const DEFAULT_DEPTH: u32 = 64;

/// `2^-k` as an exact rational.
pub fn dyadic_unit(k: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Digit `l ≥ 1` of the concise binary expansion of `q ∈ [0, 1]`.
///
/// Digit `0` is the integer part, which is one only for `q = 1`.
pub fn rational_digit(q: &BigRational, l: u64) -> bool {
    let scaled = q.numer() << l as usize;
    scaled.div_floor(q.denom()).is_odd()
}

/// The result of exploring a generator over every input string up to a depth.
#[derive(Clone, Debug, PartialEq)]
pub struct DdgEnumeration<T: Ord> {
    /// Probability of each output.
    pub outcomes: BTreeMap<T, BigRational>,
    /// Probability that exactly `c` flips are consumed.
    pub cost_terms: BTreeMap<u64, BigRational>,
    /// Mass of input strings that had not halted at the depth limit.
    pub residual: BigRational,
    /// Every halting input string found.
    pub halting: Vec<Vec<bool>>,
}

impl<T: Ord> DdgEnumeration<T> {
    /// `Σ c · Pr(C = c)` over halted paths.
    pub fn expected_cost(&self) -> BigRational {
        self.cost_terms
            .iter()
            .fold(BigRational::zero(), |acc, (c, m)| acc + m * BigRational::from_integer(BigInt::from(*c)))
    }

    /// Total halted mass.
    pub fn halted_mass(&self) -> BigRational {
        self.outcomes.values().fold(BigRational::zero(), |acc, m| acc + m)
    }

    /// Whether no halting string is a proper prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        let mut sorted: Vec<&Vec<bool>> = self.halting.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| !(w[1].len() >= w[0].len() && w[1][..w[0].len()] == w[0][..]))
    }

    /// Probability of `key`, zero when never produced.
    pub fn mass(&self, key: &T) -> BigRational {
        self.outcomes.get(key).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Explores `gen` over all input strings of length at most `depth`, depth first.
///
/// A string `u` halts when `gen` returns having consumed exactly `|u|` bits;
/// it is extended when `gen` runs out of input. Any other error is returned.
pub fn enumerate_ddg<T, G>(mut gen: G, depth: u32) -> Result<DdgEnumeration<T>>
where
    T: Ord,
    G: FnMut(&mut ReplaySource) -> Result<T>,
{
    let mut out = DdgEnumeration {
        outcomes: BTreeMap::new(),
        cost_terms: BTreeMap::new(),
        residual: BigRational::zero(),
        halting: Vec::new(),
    };
    let mut stack: Vec<Vec<bool>> = vec![vec![]];
    while let Some(u) = stack.pop() {
        let mut src = ReplaySource::from_prefix(&u);
        match gen(&mut src) {
            Ok(value) => {
                let used = src.remaining();
                if used != 0 {
                    return Err(Error::Precondition(format!(
                        "generator halted after {} of {} bits; enumeration expects prefix-free inputs",
                        u.len() - used,
                        u.len()
                    )));
                }
                let m = dyadic_unit(u.len() as u64);
                *out.outcomes.entry(value).or_insert_with(BigRational::zero) += &m;
                *out.cost_terms.entry(u.len() as u64).or_insert_with(BigRational::zero) += &m;
                out.halting.push(u);
            }
            Err(Error::Exhausted { .. }) => {
                if u.len() as u32 >= depth {
                    out.residual += dyadic_unit(u.len() as u64);
                } else {
                    let mut u1 = u.clone();
                    u1.push(true);
                    let mut u0 = u;
                    u0.push(false);
                    stack.push(u1);
                    stack.push(u0);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `Σ_{l≥1} l · 2^-l · q_l` over the concise expansion digits `q_l` of `q ∈ [0, 1]`,
/// computed exactly by solving the eventually periodic digit recurrence.
pub fn digit_depth_sum(q: &BigRational) -> BigRational {
    if q.is_zero() || q.is_one() {
        return BigRational::zero();
    }
    assert!(!q.is_negative() && q < &BigRational::one(), "digit_depth_sum needs q in [0, 1]");
    let den = q.denom().clone();
    // Remainders r_j with q_j = r_j / den the tail after j doublings.
    let mut rems: Vec<BigInt> = vec![q.numer().clone()];
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    seen.insert(rems[0].clone(), 0);
    let cycle_start = loop {
        let next = (rems.last().expect("nonempty") << 1usize).mod_floor(&den);
        if let Some(&s) = seen.get(&next) {
            break s;
        }
        seen.insert(next.clone(), rems.len());
        rems.push(next);
    };
    let digit = |j: usize| -> BigRational {
        // Digit produced going from r_j to r_{j+1}.
        let d = (&rems[j] << 1usize) >= den;
        BigRational::from_integer(BigInt::from(d as u8))
    };
    let value = |j: usize| -> BigRational { BigRational::new(rems[j].clone(), den.clone()) };
    let next_index = |j: usize| if j + 1 == rems.len() { cycle_start } else { j + 1 };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // T(r_j) = d/2 + (T(r_{j+1}) + V(r_{j+1}))/2. Over the cycle: T_s = A / (1 - 2^-L).
    let len = rems.len() - cycle_start;
    let mut a = BigRational::zero();
    let mut weight = BigRational::one();
    for j in cycle_start..rems.len() {
        let term = &half * (digit(j) + value(next_index(j)));
        a += &weight * term;
        weight *= &half;
    }
    let t_start = a / (BigRational::one() - dyadic_unit(len as u64));
    let mut t = vec![BigRational::zero(); rems.len()];
    t[cycle_start] = t_start;
    for j in (cycle_start + 1..rems.len()).rev() {
        let nj = next_index(j);
        t[j] = &half * (digit(j) + value(nj) + &t[nj]);
    }
    for j in (0..cycle_start).rev() {
        t[j] = &half * (digit(j) + value(j + 1) + &t[j + 1]);
    }
    t.swap_remove(0)
}

/// The optimal expected number of flips for a distribution with the given masses.
pub fn knuth_yao_cost<'a>(masses: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    masses.into_iter().fold(BigRational::zero(), |acc, q| acc + digit_depth_sum(q))
}

/// The optimal expected number of flips for the distribution of a CDF.
pub fn knuth_yao_cost_cdf(cdf: &FiniteCdf) -> BigRational {
    knuth_yao_cost(cdf_masses(cdf).values())
}

/// Base-2 Shannon entropy.
pub fn shannon_entropy<'a>(masses: impl IntoIterator<Item = &'a BigRational>) -> f64 {
    masses
        .into_iter()
        .filter(|p| p.is_positive())
        .map(|p| {
            let x = p.to_f64().unwrap_or(0.0);
            -x * x.log2()
        })
        .sum()
}

/// Exact probability of every code with positive mass under `cdf`.
pub fn cdf_masses(cdf: &FiniteCdf) -> BTreeMap<Code, BigRational> {
    let fmt = cdf.format();
    let prob = cdf.prob_format();
    let mut out = BTreeMap::new();
    let mut prev = BigRational::zero();
    for i in 0..=fmt.max_index() {
        let cur = prob.to_rational(cdf.eval_index(i));
        let m = &cur - &prev;
        if !m.is_zero() {
            out.insert(fmt.at_index(i), m);
        }
        prev = cur;
    }
    out
}

/// Exact probability of every code with positive mass under a dual function.
pub fn ddf_masses(g: &DualDistFn) -> BTreeMap<Code, BigRational> {
    let fmt = g.format();
    let prob = g.prob_format();
    let mut out = BTreeMap::new();
    let mut prev = BigRational::zero();
    for i in 0..=fmt.max_index() {
        let cur = g.eval_index(i).to_rational(prob);
        let m = &cur - &prev;
        if !m.is_zero() {
            out.insert(fmt.at_index(i), m);
        }
        prev = cur;
    }
    out
}

/// Which of the three digit patterns the addends `x + y = z` show on the window
/// `[l, l']`, where `z_l = z_l' = 1` and `z` is zero strictly between.
///
/// Returns the list of matching pattern numbers (1, 2 or 3); the expected
/// answer always has length one.
pub fn window_patterns(x: &BigRational, y: &BigRational, l: u64, lp: u64) -> Vec<u8> {
    assert!(l < lp);
    let col = |j: u64| (rational_digit(x, j), rational_digit(y, j));
    let cols: Vec<(bool, bool)> = (l..=lp).map(col).collect();
    let last = cols.len() - 1;
    let differ = |c: &(bool, bool)| c.0 != c.1;
    let same = |c: &(bool, bool)| c.0 == c.1;
    let not_both = |c: &(bool, bool)| !(c.0 && c.1);
    let inner = &cols[1..last];
    let mut hits = Vec::new();
    if differ(&cols[0]) && inner.iter().all(|c| *c == (false, false)) && not_both(&cols[last]) {
        hits.push(1);
    }
    if same(&cols[0]) && inner.iter().all(differ) && cols[last] == (true, true) {
        hits.push(2);
    }
    if same(&cols[0]) && not_both(&cols[last]) {
        let k1 = inner.iter().take_while(|c| differ(c)).count();
        if k1 < inner.len() && inner[k1] == (true, true) && inner[k1 + 1..].iter().all(|c| *c == (false, false)) {
            hits.push(3);
        }
    }
    hits
}
