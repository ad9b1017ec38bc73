//! Exactness, cost and agreement properties of the generators.

mod common;

use common::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rvg_core::dist_spec::{make_ddf, FiniteCdf};
use rvg_core::distlib::{DistParams, DivisionUniform};
use rvg_core::entropy::ReplaySource;
use rvg_core::formats::{Code, Extended, FormatSpec};
use rvg_core::generators::*;
use rvg_core::oracle::*;
use std::collections::BTreeMap;

fn enumerate<G: FnMut(&mut ReplaySource) -> rvg_core::Result<Code>>(g: G) -> DdgEnumeration<Code> {
    enumerate_ddg(g, 40).unwrap()
}

/// Masses agree with `want` up to the unresolved residual.
fn close(got: &BTreeMap<Code, BigRational>, want: &BTreeMap<Code, BigRational>, residual: &BigRational) -> bool {
    want.iter().all(|(c, p)| {
        let g = got.get(c).cloned().unwrap_or_else(BigRational::zero);
        g <= *p && p - g <= *residual
    }) && got.keys().all(|c| want.contains_key(c))
}

#[test]
fn bisection_generator_is_exact() {
    for fx in all_fixtures() {
        let e = enumerate(|s| gen_cbs(&fx.cdf, s).map(|r| r.code));
        let want = cdf_masses(&fx.cdf);
        assert!(close(&e.outcomes, &want, &e.residual), "{}", fx.name);
        assert!(e.residual <= dyadic_unit(20), "{}: residual {}", fx.name, e.residual);
        assert!(e.is_prefix_free());
    }
}

#[test]
fn bisection_costs_at_least_the_optimum() {
    for fx in all_fixtures() {
        let opt = enumerate(|s| gen_opt(&fx.cdf, s).map(|r| r.code)).expected_cost();
        let cbs = enumerate(|s| gen_cbs(&fx.cdf, s).map(|r| r.code));
        // The truncated cost only undercounts the bisection generator.
        assert!(cbs.expected_cost() + &cbs.residual * BigRational::from_integer(41.into()) >= opt, "{}", fx.name);
        if fx.name == "dyadic-uniform" {
            assert_eq!(cbs.expected_cost(), opt);
        }
    }
}

#[test]
fn dual_bisection_generator_is_exact() {
    let p = p43();
    let d: DistParams = "exponential:s=1".parse().unwrap();
    let g = d.ddf(FormatSpec::ieee_float(3, 3).unwrap(), p).unwrap();
    let e = enumerate_ddg(|s: &mut ReplaySource| gen_cbs_ddf(&g, s).map(|r| r.code), 24).unwrap();
    assert!(close(&e.outcomes, &ddf_masses(&g), &e.residual));
    assert!(e.residual <= dyadic_unit(8), "residual {}", e.residual);
    let uni = dyadic_uniform(p);
    let g = make_ddf(&uni, &sf_from(&uni)).unwrap();
    let e = enumerate(|s| gen_cbs_ddf(&g, s).map(|r| r.code));
    assert!(e.residual.is_zero());
    assert_eq!(e.outcomes, cdf_masses(&uni));
}

#[test]
fn bernoulli_third_enumerates_to_its_expansion() {
    let e = enumerate_ddg(|s: &mut ReplaySource| bernoulli_u64(1, 3, s), 30).unwrap();
    let third = BigRational::new(1.into(), 3.into());
    let err = &third - e.mass(&true);
    assert!(err >= BigRational::zero() && err <= e.residual);
    assert!(e.residual <= dyadic_unit(30));
    // Expected flips converge to 2.
    let gap = BigRational::from_integer(2.into()) - e.expected_cost();
    assert!(gap > BigRational::zero() && gap < dyadic_unit(24));
}

#[test]
fn division_method_misses_most_small_floats() {
    let fmt = FormatSpec::ieee_float(5, 2).unwrap();
    let div = DivisionUniform::new(fmt, 8).unwrap();
    let mut hit = std::collections::BTreeSet::new();
    for k in 0..256u16 {
        let bits: Vec<bool> = (0..8).rev().map(|i| k >> i & 1 == 1).collect();
        hit.insert(div.sample(&mut ReplaySource::new(bits).unwrap()).unwrap());
    }
    let unit: Vec<(f64, Code)> = (0..=fmt.max_index())
        .map(|i| fmt.at_index(i))
        .filter_map(|c| match fmt.gamma(c) {
            Extended::Finite(x) if (0.0..1.0).contains(&x) && !x.is_sign_negative() => Some((x, c)),
            _ => None,
        })
        .collect();
    assert_eq!(unit.len(), 60);
    let covered: Vec<f64> = unit[..32].iter().filter(|(_, c)| hit.contains(c)).map(|p| p.0).collect();
    assert_eq!(covered, [0.0, 0.00390625]);
    assert!(!hit.contains(&unit[33].1) && hit.contains(&unit[34].1));
}

fn univ_and_opt_agree(cdf: &FiniteCdf, bits: &[bool]) {
    let fmt = cdf.format();
    let p = RationalBcd::from_cdf(cdf);
    let mut a = ReplaySource::new(bits.to_vec()).unwrap();
    let mut b = ReplaySource::new(bits.to_vec()).unwrap();
    let (out, flips) = gen_univ(&p, &mut a, fmt.width()).unwrap();
    let r = gen_opt(cdf, &mut b).unwrap();
    assert_eq!(fmt.at_index(bits_to_u64(&out)), r.code);
    assert_eq!(flips, r.flips);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_and_float_generators_agree(bits in prop::collection::vec(any::<bool>(), 128), which in 0usize..6) {
        let fx = &all_fixtures()[which];
        univ_and_opt_agree(&fx.cdf, &bits);
    }

    #[test]
    fn flips_match_the_depth_of_the_output(bits in prop::collection::vec(any::<bool>(), 128)) {
        // The optimal generator never reads past the point where the output is determined.
        let cdf = dist_137(p43());
        let r = gen_opt(&cdf, &mut ReplaySource::new(bits.clone()).unwrap()).unwrap();
        let again = gen_opt(&cdf, &mut ReplaySource::new(bits[..r.flips as usize].to_vec()).unwrap()).unwrap();
        prop_assert_eq!(again.code, r.code);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn one_window_pattern_per_pair_of_ones((a, b) in (0u64..1 << 20).prop_flat_map(|a| (Just(a), 0..(1u64 << 20) - a))) {
        let unit = BigRational::new(1.into(), (1u64 << 20).into());
        let x = BigRational::from_integer(a.into()) * &unit;
        let y = BigRational::from_integer(b.into()) * &unit;
        let z = a + b;
        let ones: Vec<u64> = (1..=20).filter(|&l| z >> (20 - l) & 1 == 1).collect();
        for w in ones.windows(2) {
            let hits = window_patterns(&x, &y, w[0], w[1]);
            prop_assert_eq!(hits.len(), 1, "x={} y={} window [{}, {}]: {:?}", a, b, w[0], w[1], hits);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bernoulli_of_dyadic_is_exact(k in 1u64..1 << 12) {
        let n = 1u64 << 12;
        let e = enumerate_ddg(|s: &mut ReplaySource| bernoulli_u64(k, n, s), 16).unwrap();
        prop_assert!(e.residual.is_zero());
        prop_assert_eq!(e.mass(&true), BigRational::new(k.into(), n.into()));
        prop_assert!(e.expected_cost() <= BigRational::from_integer(2.into()));
    }
}

#[test]
fn enumeration_of_fair_coin() {
    let e = enumerate_ddg(|s: &mut ReplaySource| rvg_core::entropy::BitSource::next_bit(s), 8).unwrap();
    assert!(e.residual.is_zero());
    assert_eq!(e.expected_cost(), BigRational::one());
}
