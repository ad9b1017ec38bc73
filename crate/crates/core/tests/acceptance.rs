//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits with a failure status if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use common::*;
use rvg_core::bitops::{preproc_sub, preproc_sum_complement, ProbFloat, ProbFormat};
use rvg_core::dist_spec::{make_ddf, support_range, support_range_ddf, sf_as_ddf, FiniteCdf};
use rvg_core::distlib::{uniform_unit_cdf, DistParams, Rounding};
use rvg_core::entropy::{prng_source, BitSource, ReplaySource};
use rvg_core::formats::{Code, FormatSpec};
use rvg_core::generators::{
    bernoulli_u64, exact_ratio, gen_cbs, gen_opt, gen_opt_ddf, gen_univ, RationalBcd,
};
use rvg_core::oracle::{
    cdf_masses, ddf_masses, dyadic_unit, enumerate_ddg, knuth_yao_cost, rational_digit, shannon_entropy,
    DdgEnumeration,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn enumerate_opt(cdf: &FiniteCdf) -> DdgEnumeration<Code> {
    enumerate_ddg(|s: &mut ReplaySource| gen_opt(cdf, s).map(|r| r.code), 64).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let bound = dyadic_unit(48);
    let mut names = Vec::new();
    for fx in all_fixtures() {
        let e = enumerate_opt(&fx.cdf);
        let want = cdf_masses(&fx.cdf);
        ensure(e.outcomes == want, || format!("{}: enumerated masses differ from exact masses", fx.name))?;
        ensure(e.residual <= bound, || format!("{}: residual {} too large", fx.name, e.residual))?;
        ensure(e.halted_mass() + &e.residual == BigRational::one(), || format!("{}: mass not conserved", fx.name))?;
        ensure(e.is_prefix_free(), || format!("{}: halting set not prefix-free", fx.name))?;
        names.push(fx.name);
    }
    // A non-dyadic two-atom distribution through the rational generator.
    let third = RationalBcd::from_leaves(1, vec![BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 3.into())]).unwrap();
    let e = enumerate_ddg(|s: &mut ReplaySource| gen_univ(&third, s, 1).map(|(b, _)| b[0]), 64).unwrap();
    let err = (e.mass(&false) - BigRational::new(1.into(), 3.into())).abs();
    ensure(err <= e.residual && e.residual <= bound, || format!("1/3 atom: error {err}, residual {}", e.residual))?;
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{} fixtures exact, non-dyadic 1/3 atom within residual 2^-64 ({t:.1?})", names.len() + 1))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut max_ent_gap = None;
    for fx in all_fixtures() {
        let prob = *fx.cdf.prob_format();
        let e = enumerate_opt(&fx.cdf);
        let masses = cdf_masses(&fx.cdf);
        let ky = knuth_yao_cost(masses.values());
        let ec = e.expected_cost();
        ensure(e.residual.is_zero(), || format!("{}: residual should vanish for dyadic masses", fx.name))?;
        ensure(ec == ky, || format!("{}: E[C] = {ec} but optimal cost is {ky}", fx.name))?;
        let h = shannon_entropy(masses.values());
        let ecf = to_f64(&ec);
        ensure(h <= ecf + 1e-12 && ecf < h + 2.0, || format!("{}: H = {h}, E[C] = {ecf}", fx.name))?;
        let ceiling = cost_ceiling(&prob);
        ensure(ec <= ceiling, || format!("{}: E[C] = {ec} above ceiling {ceiling}", fx.name))?;
        if fx.name == "max-entropy" {
            max_ent_gap = Some((ceiling - &ec).abs());
        }
    }
    let gap = max_ent_gap.ok_or("no max-entropy fixture")?;
    ensure(gap <= dyadic_unit(40), || format!("max-entropy misses the ceiling by {gap}"))?;
    // The same construction on 3 exponent and 2 fraction bits.
    let p32 = ProbFormat::emulated(3, 2).unwrap();
    let small = max_entropy(p32);
    let ec = enumerate_opt(&small).expected_cost();
    ensure(ec == cost_ceiling(&p32), || format!("(3,2) max-entropy cost {ec}"))?;
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("E[C] equals optimal cost on all fixtures; ceilings 4.96875 and {} attained ({t:.1?})", to_f64(&ec)))
}

struct Run {
    bits: f64,
    rate: f64,
}

fn run<F: Fn(&mut rvg_core::entropy::PrngSource) -> u64>(count: u64, seed: u64, f: F) -> Run {
    let mut src = prng_source(seed);
    let start = Instant::now();
    let mut bits = 0;
    for _ in 0..count {
        bits += f(&mut src);
    }
    let secs = start.elapsed().as_secs_f64();
    Run { bits: bits as f64 / count as f64, rate: count as f64 / secs }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    const N: u64 = 1_000_000;
    // The reference exponential CBS rate is for scale 15; scale 1 is reported alongside.
    let exp: DistParams = "exponential:s=15".parse().unwrap();
    let cdf = exp.cdf(FormatSpec::binary64(), ProbFormat::F32).unwrap();
    let opt = run(N, 1, |s| gen_opt(&cdf, s).unwrap().flips);
    let cbs = run(N, 2, |s| gen_cbs(&cdf, s).unwrap().flips);
    let exp1: DistParams = "exponential:s=1".parse().unwrap();
    let cdf1 = exp1.cdf(FormatSpec::binary64(), ProbFormat::F32).unwrap();
    let opt1 = run(N, 5, |s| gen_opt(&cdf1, s).unwrap().flips);
    let cbs1 = run(N, 6, |s| gen_cbs(&cdf1, s).unwrap().flips);
    let geo: DistParams = "geometric:p=0.4".parse().unwrap();
    let gcdf = geo.cdf(geo.default_format(), ProbFormat::F32).unwrap();
    let gopt = run(N, 3, |s| gen_opt(&gcdf, s).unwrap().flips);
    let gcbs = run(N, 4, |s| gen_cbs(&gcdf, s).unwrap().flips);
    ensure((24.9..=25.1).contains(&opt.bits), || format!("exponential(15) OPT {:.4} bits", opt.bits))?;
    ensure((24.9..=25.1).contains(&opt1.bits), || format!("exponential(1) OPT {:.4} bits", opt1.bits))?;
    ensure((48.0..=49.2).contains(&cbs.bits), || format!("exponential(15) CBS {:.4} bits", cbs.bits))?;
    ensure((3.7..=3.9).contains(&gopt.bits), || format!("geometric OPT {:.4} bits", gopt.bits))?;
    for (name, o, c) in [("exponential(15)", &opt, &cbs), ("exponential(1)", &opt1, &cbs1), ("geometric", &gopt, &gcbs)] {
        ensure(o.rate >= c.rate, || format!("{name} OPT {:.0}/s slower than CBS {:.0}/s", o.rate, c.rate))?;
    }
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!(
        "exponential(15) OPT {:.4} / CBS {:.4}, exponential(1) OPT {:.4} / CBS {:.4}, geometric(0.4) OPT {:.4} / CBS {:.4} bits; \
         OPT faster by {:.1}x, {:.1}x, {:.1}x ({t:.1?})",
        opt.bits,
        cbs.bits,
        opt1.bits,
        cbs1.bits,
        gopt.bits,
        gcbs.bits,
        opt.rate / cbs.rate,
        opt1.rate / cbs1.rate,
        gopt.rate / gcbs.rate
    ))
}

/// Whether `code` or one of its format neighbors prints as `want` at 7 significant digits.
fn matches_printed(fmt: &FormatSpec, code: Code, want: &str, neighbors: bool) -> bool {
    let print = |c: Code| format!("{:.6e}", fmt.gamma(c).to_f64());
    let mut cands = vec![code];
    if neighbors {
        cands.extend(fmt.pred(code).ok());
        cands.extend(fmt.succ(code).ok());
    }
    cands.into_iter().any(|c| print(c) == want)
}

fn criterion_4() -> Outcome {
    let f64fmt = FormatSpec::binary64();
    let prob = ProbFormat::F32;
    let mut report = Vec::new();
    let mut check = |label: &str, dist: &str, rows: [(&str, &str); 3], neighbors: bool| -> Result<(), String> {
        let d: DistParams = dist.parse().unwrap();
        let cdf = d.cdf(f64fmt, prob).unwrap();
        let sf = d.sf(f64fmt, prob).unwrap();
        let t0 = Instant::now();
        let r_cdf = support_range(&cdf);
        let t_cdf = t0.elapsed();
        let (sf_dual, ddf) = (sf_as_ddf(&sf).unwrap(), make_ddf(&cdf, &sf).unwrap());
        let t0 = Instant::now();
        let r_sf = support_range_ddf(&sf_dual);
        let t_sf = t0.elapsed();
        let t0 = Instant::now();
        let r_ddf = support_range_ddf(&ddf);
        let t_ddf = t0.elapsed();
        for (kind, r, (lo, hi), t) in [
            ("CDF", &r_cdf, rows[0], t_cdf),
            ("SF", &r_sf, rows[1], t_sf),
            ("DDF", &r_ddf, rows[2], t_ddf),
        ] {
            ensure(matches_printed(&f64fmt, r.min_code, lo, neighbors), || {
                format!("{label} {kind} min {:.6e}, expected {lo}", r.min.to_f64())
            })?;
            ensure(matches_printed(&f64fmt, r.max_code, hi, neighbors), || {
                format!("{label} {kind} max {:.6e}, expected {hi}", r.max.to_f64())
            })?;
            ensure(t < Duration::from_millis(10), || format!("{label} {kind} range took {t:?}"))?;
        }
        report.push(label.to_string());
        Ok(())
    };
    check(
        "exponential(1)",
        "exponential:s=1",
        [("7.006492e-46", "1.732868e1"), ("2.980232e-8", "1.039721e2"), ("7.006492e-46", "1.039721e2")],
        true,
    )?;
    check(
        "flat(0.1, 3.14)",
        "flat:a=0.1,b=3.14",
        [("1.000000e-1", "3.140000e0"), ("1.000001e-1", "3.140000e0"), ("1.000000e-1", "3.140000e0")],
        false,
    )?;
    Ok(format!("{} ranges match", report.join(" and ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    const N: u64 = 10_000_000;
    let fmt = FormatSpec::ieee_float(5, 2).unwrap();
    let prob = ProbFormat::emulated(5, 2).unwrap();
    let cdf = uniform_unit_cdf(fmt, prob, Rounding::Down).unwrap();
    let masses = cdf_masses(&cdf);
    ensure(masses.len() == 60, || format!("{} floats with positive mass, expected 60", masses.len()))?;
    let mut counts = std::collections::BTreeMap::<Code, u64>::new();
    let mut src = prng_source(5);
    for _ in 0..N {
        *counts.entry(gen_opt(&cdf, &mut src).unwrap().code).or_default() += 1;
    }
    ensure(counts.keys().all(|c| masses.contains_key(c)), || "generated a float outside [0, 1)".into())?;
    let mut chi2 = 0.0;
    let mut worst: f64 = 0.0;
    for (c, m) in &masses {
        let p = to_f64(m);
        let obs = *counts.get(c).unwrap_or(&0) as f64;
        ensure(obs > 0.0, || format!("float {} never observed", fmt.gamma(*c)))?;
        let mean = N as f64 * p;
        let sd = (N as f64 * p * (1.0 - p)).sqrt();
        worst = worst.max((obs - mean).abs() / sd);
        chi2 += (obs - mean).powi(2) / mean;
    }
    ensure(worst <= 4.0, || format!("a count is {worst:.2} standard deviations off"))?;
    // 0.999 quantile of the chi-square distribution with 59 degrees of freedom.
    const CRITICAL: f64 = 98.324;
    ensure(chi2 < CRITICAL, || format!("chi-square {chi2:.2} above {CRITICAL}"))?;
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("60/60 floats observed, max |z| = {worst:.2}, chi-square = {chi2:.2} < {CRITICAL} ({t:.1?})"))
}

/// Exact rational value of a binary64 number in `[0, 1]`.
fn rat64(x: f64) -> BigRational {
    ProbFormat::F64.to_rational(ProbFloat(x.to_bits()))
}

fn criterion_6() -> Outcome {
    // Exhaustive on 4 exponent and 3 fraction bits.
    let p = p43();
    let vals: Vec<ProbFloat> = p.values().collect();
    let mut pairs = 0u64;
    let mut shadow_violations = 0u64;
    let limit = BigInt::one() << (1 + 4 + 3 - 1);
    for &x in &vals {
        for &xp in &vals {
            if let Ok(beta) = preproc_sub(&p, x, xp) {
                let d = p.to_rational(x) - p.to_rational(xp);
                for l in 1..=40u64 {
                    ensure(beta.bit(l) == rational_digit(&d, l), || {
                        format!("digit {l} of {} - {}", p.to_f64(x), p.to_f64(xp))
                    })?;
                }
                for v in shadow_sub(&p, x, xp) {
                    if !(-&limit <= v && v < limit) {
                        shadow_violations += 1;
                    }
                }
                pairs += 1;
            }
        }
    }
    ensure(shadow_violations == 0, || format!("{shadow_violations} intermediates exceed 8 signed bits"))?;
    // Random binary64 pairs.
    let f = ProbFormat::F64;
    let mut rng = rand::rngs::StdRng::seed_from_u64(6);
    let random_value = |rng: &mut rand::rngs::StdRng| -> f64 {
        match rng.gen_range(0..4) {
            0 => rng.gen::<f64>(),
            1 => rng.gen::<f64>() * 2f64.powi(-rng.gen_range(0..1000)),
            2 => f64::from_bits(rng.gen_range(0..1u64 << 52)),
            _ => 0.5 - rng.gen::<f64>() * 2f64.powi(-rng.gen_range(1..60)),
        }
    };
    let mut sub_n = 0;
    let mut sum_n = 0;
    for _ in 0..100_000 {
        let (a, b) = (random_value(&mut rng), random_value(&mut rng));
        let (x, xp) = if a >= b { (a, b) } else { (b, a) };
        if x > xp {
            let beta = preproc_sub(&f, ProbFloat(x.to_bits()), ProbFloat(xp.to_bits())).unwrap();
            let d = rat64(x) - rat64(xp);
            check_digits(&beta, &d).map_err(|l| format!("sub digit {l} of {x:e} - {xp:e}"))?;
            sub_n += 1;
        }
        let (h, hp) = (a.min(0.5), (b * 0.5).min(0.5));
        if h + hp > 0.0 && !(h == 0.5 && hp == 0.5) {
            let beta = preproc_sum_complement(&f, ProbFloat(h.to_bits()), ProbFloat(hp.to_bits())).unwrap();
            let d = BigRational::one() - rat64(h) - rat64(hp);
            check_digits(&beta, &d).map_err(|l| format!("complement digit {l} of 1 - {h:e} - {hp:e}"))?;
            sum_n += 1;
        }
    }
    Ok(format!("{pairs} exhaustive small-format pairs, {sub_n} + {sum_n} binary64 pairs through digit 1100, 0 mismatches"))
}

/// Compares digits 1..=1100 against the binary64 scaling: `d · 2^1074` is an integer.
fn check_digits(beta: &rvg_core::bitops::BitExtractor, d: &BigRational) -> Result<(), u64> {
    let scaled = d * BigRational::from_integer(BigInt::one() << 1074usize);
    assert!(scaled.is_integer());
    let n = scaled.to_integer();
    for l in 1..=1100u64 {
        let want = l <= 1074 && n.bit(1074 - l);
        if beta.bit(l) != want {
            return Err(l);
        }
    }
    Ok(())
}

/// Recomputes the difference preprocessing with wide integers and returns every intermediate.
fn shadow_sub(p: &ProbFormat, x: ProbFloat, xp: ProbFloat) -> Vec<BigInt> {
    let m = p.man_bits() as i64;
    let (eh, f) = p.decode(x);
    let (ehp, fp) = p.decode(xp);
    let (eh, ehp, f, fp) = (eh as i64, ehp as i64, f as i64, fp as i64);
    let d = eh - ehp;
    let fp_hi = fp >> d.min(p.exp_bits() as i64 + m);
    let n_lo = d.min(m + 1);
    let fp_lo = fp & ((1 << n_lo) - 1);
    let one = (x == p.one()) as i64;
    let b2 = (fp_lo > 0) as i64;
    let n1 = -eh - 1 + one;
    let n2 = (d - m - 1).max(0);
    let n_hi = m + 1 - one;
    let g_hi = f - fp_hi - b2;
    let g_lo = (b2 << n_lo) - fp_lo;
    [eh, ehp, f, fp, d, fp_hi, n_lo, fp_lo, n1, n2, n_hi, g_hi, g_lo, n1 + n_hi + n2 + n_lo]
        .into_iter()
        .map(BigInt::from)
        .collect()
}

fn criterion_7() -> Outcome {
    const N: u64 = 1_000_000;
    let mut out = Vec::new();
    for (i, k, lo, hi) in [(1u64, 3u64, 1.99, 2.01), (3, 8, 1.74, 1.76), (1, 2, 1.0, 1.0)] {
        let mut src = prng_source(7 + i * 31 + k);
        let mut ones = 0u64;
        for _ in 0..N {
            ones += bernoulli_u64(i, k, &mut src).unwrap() as u64;
        }
        let mean = src.bits_consumed() as f64 / N as f64;
        ensure((lo..=hi).contains(&mean), || format!("({i},{k}) mean flips {mean}"))?;
        let p = i as f64 / k as f64;
        let z = (ones as f64 - N as f64 * p) / (N as f64 * p * (1.0 - p)).sqrt();
        ensure(z.abs() <= 4.0, || format!("({i},{k}) frequency off by {z:.2} sd"))?;
        out.push(format!("({i},{k}) {mean:.4}"));
    }
    Ok(format!("mean flips {}", out.join(", ")))
}

fn criterion_8() -> Outcome {
    let leaves = WEIGHTS_137.iter().map(|&w| BigRational::new(w.into(), 137.into())).collect();
    let p = RationalBcd::from_leaves(4, leaves).unwrap();
    let mut src = ReplaySource::new(vec![true, false, true, true, false]).unwrap();
    let (bits, flips) = gen_univ(&p, &mut src, 4).map_err(|e| e.to_string())?;
    let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    ensure(s == "1010" && flips == 5, || format!("output {s} after {flips} flips"))?;
    Ok("replay 1,0,1,1,0 yields 1010 with 5 flips".into())
}

fn criterion_9() -> Outcome {
    const N: u64 = 1_000_000;
    let exp: DistParams = "exponential:s=1".parse().unwrap();
    let fmt = FormatSpec::binary64();
    let cdf = exp.cdf(fmt, ProbFormat::F32).unwrap();
    let ddf = exp.ddf(fmt, ProbFormat::F32).unwrap();
    let a = run(N, 91, |s| gen_opt(&cdf, s).unwrap().flips);
    let b = run(N, 92, |s| gen_opt_ddf(&ddf, s).unwrap().flips);
    let ratio = b.bits / a.bits;
    ensure((0.98..=1.15).contains(&ratio), || format!("DDF/CDF bits ratio {ratio:.4}"))?;
    // Exactness of the dual generator on small fixtures.
    let p = p43();
    let uni = dyadic_uniform(p);
    let mut fixtures = vec![("dyadic-uniform", make_ddf(&uni, &sf_from(&uni)).unwrap())];
    let exp_small: DistParams = "exponential:s=1".parse().unwrap();
    let small = FormatSpec::ieee_float(3, 3).unwrap();
    fixtures.push(("exponential-small", exp_small.ddf(small, p).unwrap()));
    fixtures.push(("sf-small", exp_small.sf_ddf(small, p).unwrap()));
    for (name, g) in &fixtures {
        let e = enumerate_ddg(|s: &mut ReplaySource| gen_opt_ddf(g, s).map(|r| r.code), 64).unwrap();
        ensure(e.residual.is_zero() && e.outcomes == ddf_masses(g), || format!("{name}: dual masses differ"))?;
    }
    let e_cdf = enumerate_opt(&uni);
    let e_ddf = enumerate_ddg(|s: &mut ReplaySource| gen_opt_ddf(&fixtures[0].1, s).map(|r| r.code), 64).unwrap();
    ensure(e_cdf.outcomes == e_ddf.outcomes, || "dual and CDF generators disagree on the uniform fixture".into())?;
    Ok(format!("DDF/CDF bits ratio {ratio:.4} ({:.4} / {:.4}); {} dual fixtures exact", b.bits, a.bits, fixtures.len()))
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    for (e, m, want) in [(3u32, 2u32, 9u32), (4, 3, 19), (8, 23, 299)] {
        let p = if (e, m) == (8, 23) { ProbFormat::F32 } else { ProbFormat::emulated(e, m).unwrap() };
        let expected = 2 * ((1 << (e - 1)) + m - 2) + 1;
        ensure(expected == want, || "width formula".into())?;
        let (i, k) = exact_ratio(&p, p.zero(), p.min_positive(), p.one()).map_err(|e| e.to_string())?;
        let total = i.bit_len() + k.bit_len();
        ensure(total == want, || format!("({e},{m}) needs {total} bits, expected {want}"))?;
        // No other ratio needs more.
        if e <= 4 {
            let vals: Vec<ProbFloat> = p.values().collect();
            for a in 0..vals.len() {
                for c in a + 2..vals.len() {
                    for b in a + 1..c {
                        let (i, k) = exact_ratio(&p, vals[a], vals[b], vals[c]).unwrap();
                        ensure(i.bit_len() + k.bit_len() <= want, || format!("({e},{m}) ratio exceeds bound"))?;
                    }
                }
            }
        }
        out.push(format!("({e},{m}) {total}"));
    }
    Ok(format!("worst-case ratio widths {}", out.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exactness by DDG enumeration", criterion_1),
        ("entropy optimality and cost ceiling", criterion_2),
        ("bits per variate", criterion_3),
        ("support ranges", criterion_4),
        ("uniform coverage", criterion_5),
        ("bit extraction", criterion_6),
        ("Bernoulli costs", criterion_7),
        ("replay trace", criterion_8),
        ("dual function overhead and exactness", criterion_9),
        ("exact ratio width", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
