//! Small-format distributions shared by the integration tests.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rvg_core::bitops::{ProbFloat, ProbFormat};
use rvg_core::dist_spec::{FiniteCdf, FiniteSf};
use rvg_core::formats::{Extended, FormatSpec};

pub struct Fixture {
    pub name: &'static str,
    pub cdf: FiniteCdf,
}

/// Probabilities with 4 exponent and 3 fraction bits.
pub fn p43() -> ProbFormat {
    ProbFormat::emulated(4, 3).unwrap()
}

/// Uniform over the eight codes of `uint:3`.
pub fn dyadic_uniform(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::unsigned(3).unwrap();
    FiniteCdf::new(fmt, prob, move |c| prob.exact(c.bits() + 1, -3).unwrap()).unwrap()
}

/// All mass on the value 1.0 of a 5-bit float format.
pub fn point_mass(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::ieee_float(2, 2).unwrap();
    FiniteCdf::new(fmt, prob, move |c| match fmt.gamma(c) {
        Extended::NegInf => prob.zero(),
        Extended::Finite(x) if x < 1.0 => prob.zero(),
        _ => prob.one(),
    })
    .unwrap()
}

/// Mass 11/32 on -3 and 21/32 on 5 in 4-bit two's complement.
pub fn two_atom(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::twos_complement(4).unwrap();
    FiniteCdf::new(fmt, prob, move |c| match fmt.gamma(c) {
        Extended::Finite(x) if x < -3.0 => prob.zero(),
        Extended::Finite(x) if x < 5.0 => prob.exact(11, -5).unwrap(),
        _ => prob.one(),
    })
    .unwrap()
}

/// Numerators over 137 of the 16-outcome example distribution.
pub const WEIGHTS_137: [u64; 16] = [6, 12, 13, 9, 10, 12, 6, 1, 1, 2, 13, 8, 14, 13, 7, 10];

/// The 137-denominator distribution over `uint:4` with its cumulative values
/// rounded to the probability format.
pub fn dist_137(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::unsigned(4).unwrap();
    let mut cum = [ProbFloat(0); 16];
    let mut acc = 0u64;
    for (i, &w) in WEIGHTS_137.iter().enumerate() {
        acc += w;
        cum[i] = prob.round_f64(acc as f64 / 137.0);
    }
    FiniteCdf::new(fmt, prob, move |c| cum[c.bits() as usize]).unwrap()
}

/// Every probability value of `prob`, in increasing order.
pub fn grid(prob: &ProbFormat) -> Vec<ProbFloat> {
    prob.values().collect()
}

/// The CDF whose jumps are the gaps between consecutive probability values,
/// over the smallest unsigned format with enough codes.
pub fn max_entropy(prob: ProbFormat) -> FiniteCdf {
    let ys = grid(&prob);
    let atoms = ys.len() - 1;
    let n = (usize::BITS - (atoms - 1).leading_zeros()) as u32;
    let fmt = FormatSpec::unsigned(n).unwrap();
    FiniteCdf::new(fmt, prob, move |c| ys[(c.bits() as usize + 1).min(atoms)]).unwrap()
}

/// `m + 2 - 2^(3 - 2^(E-1))`.
pub fn cost_ceiling(prob: &ProbFormat) -> BigRational {
    let m = prob.man_bits() as i64;
    let k = (1i64 << (prob.exp_bits() - 1)) - 3;
    BigRational::from_integer((m + 2).into()) - BigRational::new(1.into(), num_bigint::BigInt::from(1) << k as usize)
}

/// A logistic-shaped CDF over 6-bit posits.
pub fn posit_logistic(prob: ProbFormat) -> FiniteCdf {
    let fmt = FormatSpec::posit(6).unwrap();
    FiniteCdf::new(fmt, prob, move |c| match fmt.gamma(c) {
        Extended::NegInf => prob.zero(),
        Extended::Finite(x) => prob.round_f64(1.0 / (1.0 + (-x).exp())),
        _ => prob.one(),
    })
    .unwrap()
}

/// The matching survival function for fixtures that need one.
pub fn sf_from(cdf: &FiniteCdf) -> FiniteSf {
    let prob = *cdf.prob_format();
    let c2 = cdf.clone();
    FiniteSf::new(*cdf.format(), prob, move |c| {
        let f = c2.eval(c);
        prob.complement(f).expect("fixture complement is exact")
    })
    .unwrap()
}

pub fn all_fixtures() -> Vec<Fixture> {
    let p = p43();
    vec![
        Fixture { name: "dyadic-uniform", cdf: dyadic_uniform(p) },
        Fixture { name: "point-mass", cdf: point_mass(p) },
        Fixture { name: "two-atom", cdf: two_atom(p) },
        Fixture { name: "dist-137", cdf: dist_137(p) },
        Fixture { name: "max-entropy", cdf: max_entropy(p) },
        Fixture { name: "posit-logistic", cdf: posit_logistic(p) },
    ]
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap()
}
