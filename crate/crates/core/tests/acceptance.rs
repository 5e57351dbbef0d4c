//! Acceptance checks, one PASS/FAIL line per criterion. All comparisons are
//! exact integer or rational equalities; the only tolerances are the runtime
//! limits below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use cayley_gds::algebra::{is_prime_power, FiniteGroup, Subgroup};
use cayley_gds::bounds::{ac_upper, df_upper, moore};
use cayley_gds::constructions::{best_for_degree, build_construction1, build_construction2, build_example31};
use cayley_gds::covering::{
    check_cover, neofield_config, neofield_config_literal, search_above, search_cover, tau_bound, tau_exhaustive,
    SearchBounds,
};
use cayley_gds::diffsets::{lemma34_identity, verify_gds, GdsDescriptor, GdsParams, Multiplicity};
use cayley_gds::graph::{all_pairs_diameter, diameter_bfs, diameter_groupring, CayleyCertificate, ALL_PAIRS_LIMIT};

const LIMIT_SMALL: Duration = Duration::from_secs(1);
const LIMIT_M5: Duration = Duration::from_secs(10);
const LIMIT_M7: Duration = Duration::from_secs(120);
const LIMIT_NEOFIELD: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Pool) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

/// Built certificates, shared by the oracle and bound checks.
#[derive(Default)]
struct Pool(Vec<CayleyCertificate>);

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn construction2(pool: &mut Pool, m: u32, order: usize, degree: usize, limit: Duration) -> Outcome {
    let (cert, took) = timed(|| build_construction2(m).and_then(|s| s.certify()));
    let cert = cert.map_err(|e| e.to_string())?;
    ensure!(cert.order == order, "m={m}: order {}", cert.order);
    ensure!(cert.degree == degree, "m={m}: degree {}", cert.degree);
    ensure!(cert.diameter == 2, "m={m}: diameter {}", cert.diameter);
    ensure!(took < limit, "m={m}: took {took:?}, limit {limit:?}");
    ensure!(9 * cert.order == 4 * cert.degree * cert.degree, "m={m}: order != 4/9 * degree^2");
    let line = format!("m={m}: order {order}, degree {degree}, diameter 2 in {took:.2?}");
    pool.0.push(cert);
    Ok(line)
}

fn c1(pool: &mut Pool) -> Outcome {
    let line = construction2(pool, 1, 16, 6, LIMIT_SMALL)?;
    Ok(format!("{line}; 16 = 4/9 * 6^2"))
}

fn c2(pool: &mut Pool) -> Outcome {
    let a = construction2(pool, 3, 256, 24, LIMIT_SMALL)?;
    let b = construction2(pool, 5, 4096, 96, LIMIT_M5)?;
    let c = construction2(pool, 7, 65536, 384, LIMIT_M7)?;
    Ok(format!("{a}; {b}; {c}; each order = 4/9 * degree^2"))
}

fn c3(_: &mut Pool) -> Outcome {
    for m in [1, 3, 5] {
        let (holds, defect) = lemma34_identity(m).map_err(|e| e.to_string())?;
        ensure!(holds && defect.is_zero(), "m={m}: identity fails");
    }
    let mut sizes = Vec::new();
    for m in [2, 4] {
        let (holds, defect) = lemma34_identity(m).map_err(|e| e.to_string())?;
        ensure!(!holds && !defect.support().is_empty(), "m={m}: identity unexpectedly holds");
        sizes.push(format!("m={m} defect support {}", defect.support().len()));
    }
    Ok(format!("holds for m=1,3,5; fails with {}", sizes.join(", ")))
}

fn c4(pool: &mut Pool) -> Outcome {
    let mut parts = Vec::new();
    // (q, order, stated degree, shift in the (d - shift)^2 formula)
    for (q, order, stated_d, shift) in [(3u64, 100usize, 20usize, 4usize), (4, 225, 26, 2), (8, 1225, 0, 0)] {
        let (cert, took) = timed(|| build_construction1(q, &neofield_config()).and_then(|s| s.certify()));
        let cert = cert.map_err(|e| e.to_string())?;
        ensure!(cert.order == order, "q={q}: order {}", cert.order);
        ensure!(cert.diameter == 2, "q={q}: diameter {}", cert.diameter);
        ensure!(took < LIMIT_NEOFIELD, "q={q}: took {took:?}");
        if stated_d > 0 {
            ensure!(cert.degree <= stated_d, "q={q}: degree {} > {stated_d}", cert.degree);
            ensure!(64 * order == 25 * (stated_d - shift).pow(2), "q={q}: 25/64 formula mismatch");
        }
        parts.push(format!("q={q}: order {order}, degree {}, diameter 2 in {took:.2?}", cert.degree));
        pool.0.push(cert);
    }
    Ok(parts.join("; "))
}

/// `{+-d +- a_i} u {+-a_i +- a_j : i < j}` in Z5 x Z5, computed with plain
/// integer pairs.
fn signed_sums(d: (i64, i64), a: [(i64, i64); 3]) -> Vec<(i64, i64)> {
    let m = |x: i64| x.rem_euclid(5);
    let mut out = Vec::new();
    for ai in a {
        for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.push((m(s * d.0 + t * ai.0), m(s * d.1 + t * ai.1)));
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push((m(s * a[i].0 + t * a[j].0), m(s * a[i].1 + t * a[j].1)));
            }
        }
    }
    out
}

fn c5(_: &mut Pool) -> Outcome {
    let lit = check_cover(&neofield_config_literal()).map_err(|e| e.to_string())?;
    ensure!(!lit.covered && !lit.uncovered.is_empty(), "literal configuration covers");
    let fixed = check_cover(&neofield_config()).map_err(|e| e.to_string())?;
    ensure!(fixed.covered, "corrected configuration misses {:?}", fixed.uncovered);

    let mut sums = signed_sums((1, 0), [(2, 0), (0, 1), (0, 2)]);
    ensure!(sums.len() == 24, "{} slots", sums.len());
    sums.sort();
    sums.dedup();
    let nonzero: Vec<(i64, i64)> = (0..5).flat_map(|x| (0..5).map(move |y| (x, y))).filter(|&p| p != (0, 0)).collect();
    ensure!(sums == nonzero, "signed sums are not Z5xZ5 minus 0");

    let mut lit_sums = signed_sums((1, 0), [(1, 0), (0, 1), (0, 2)]);
    lit_sums.sort();
    lit_sums.dedup();
    Ok(format!(
        "literal misses {} elements ({} distinct signed sums); corrected: 24 sums = Z5xZ5 minus 0",
        lit.uncovered.len(),
        lit_sums.len()
    ))
}

fn c6(pool: &mut Pool) -> Outcome {
    let mut parts = Vec::new();
    for q in [3u64, 5, 7] {
        let cert = build_example31(q).and_then(|s| s.certify()).map_err(|e| e.to_string())?;
        let qq = q as usize;
        ensure!(cert.order == 6 * qq * (qq - 1), "q={q}: order {}", cert.order);
        ensure!(cert.diameter == 2, "q={q}: diameter {}", cert.diameter);
        parts.push(format!("q={q}: order {}, degree {} (quoted {})", cert.order, cert.degree, 4 * qq - 2));
        pool.0.push(cert);
    }
    Ok(parts.join("; "))
}

fn c7(_: &mut Pool) -> Outcome {
    let err = |e: cayley_gds::Error| e.to_string();
    let z7 = Arc::new(FiniteGroup::cyclic(7).map_err(err)?);
    let d = GdsDescriptor::new(&z7, vec![1, 2, 4], vec![], GdsParams::difference_set(7, 3, 1)).map_err(err)?;
    let r = verify_gds(&d).map_err(err)?;
    ensure!(r.ok && r.measured_k == 3 && r.measured_lambda == Multiplicity::Uniform(1), "(7,3,1): {r:?}");

    let z4 = Arc::new(FiniteGroup::cyclic(4).map_err(err)?);
    let n = Subgroup::new(&z4, [0, 2]).map_err(err)?;
    let d = GdsDescriptor::new(&z4, vec![0, 1], vec![n], GdsParams::relative(2, 2, 2, 1)).map_err(err)?;
    let r = verify_gds(&d).map_err(err)?;
    ensure!(
        r.ok && r.measured_lambda == Multiplicity::Uniform(1) && r.measured_lambda_i == vec![Multiplicity::Uniform(0)],
        "(2,2,2,1): {r:?}"
    );

    let g = Arc::new(FiniteGroup::parse("z4xz4").map_err(err)?);
    let el = |a: usize, b: usize| g.compose(&[a, b]).unwrap();
    let subs = vec![
        Subgroup::new(&g, (0..4).map(|x| el(x, 0))).map_err(err)?,
        Subgroup::new(&g, (0..4).map(|x| el(0, x))).map_err(err)?,
        Subgroup::new(&g, (0..4).map(|x| el(x, x))).map_err(err)?,
    ];
    let params = GdsParams::generalized(16, &[4, 4, 4], 3, 1, &[0, 0, 0]);
    let d = GdsDescriptor::new(&g, vec![el(1, 2), el(2, 0), el(0, 3)], subs, params).map_err(err)?;
    let r = verify_gds(&d).map_err(err)?;
    ensure!(
        r.ok && r.measured_lambda == Multiplicity::Uniform(1)
            && r.measured_lambda_i == vec![Multiplicity::Uniform(0); 3],
        "(16;4,4,4;3,1;0,0,0): {r:?}"
    );

    let bad = GdsDescriptor::new(&z7, vec![1, 2, 3], vec![], GdsParams::difference_set(7, 3, 1)).map_err(err)?;
    let r = verify_gds(&bad).map_err(err)?;
    let w = r.witnesses.iter().find(|w| w.element == Some(1));
    ensure!(!r.ok && w.is_some_and(|w| w.measured == 2 && w.expected == 1), "{{1,2,3}} not rejected: {r:?}");
    Ok("(7,3,1), (2,2,2,1)-RDS and (16;4,4,4;3,1;0,0,0)-GDS verified; {1,2,3} rejected, difference 1 occurs twice"
        .into())
}

fn c8(pool: &mut Pool) -> Outcome {
    let mut checked = 0;
    for c in pool.0.iter().filter(|c| c.order <= ALL_PAIRS_LIMIT) {
        let g = Arc::new(FiniteGroup::parse(&c.group).map_err(|e| e.to_string())?);
        let bfs = diameter_bfs(&g, &c.generators).map_err(|e| e.to_string())?;
        let ap = all_pairs_diameter(&g, &c.generators).map_err(|e| e.to_string())?;
        let gr = diameter_groupring(&g, &c.generators).map_err(|e| e.to_string())?;
        ensure!(bfs == ap, "{}: bfs {bfs}, all-pairs {ap}", c.group);
        ensure!(gr.value() == Some(bfs).filter(|&d| d <= 2), "{}: bfs {bfs}, group ring {gr:?}", c.group);
        checked += 1;
    }
    ensure!(checked > 0, "no graphs of order <= {ALL_PAIRS_LIMIT}");
    Ok(format!("bfs = all-pairs = group-ring decision on {checked} graphs"))
}

fn c9(_: &mut Pool) -> Outcome {
    let four_ninths = Ratio::new(4, 9);
    for s in 4..=64 {
        let t = tau_exhaustive(s).ok_or(format!("no value at s={s}"))?;
        ensure!(t < four_ninths, "s={s}: tau {t} >= 4/9");
        ensure!(tau_bound(s) >= t, "s={s}: bound {} below {t}", tau_bound(s));
    }
    ensure!(tau_exhaustive(3) == Some(four_ninths), "s=3: {:?}", tau_exhaustive(3));
    Ok("tau < 4/9 for 4 <= s <= 64, bound dominates; tau(3) = 4/9".into())
}

fn c10(_: &mut Pool) -> Outcome {
    let target = Ratio::new(25u64, 64);
    let bounds = SearchBounds { max_order: 25, k: 3, max_psi: 1, max_theta: 2 };
    let hits = search_cover(bounds).map_err(|e| e.to_string())?;
    let best = hits.first().ok_or("no hits")?;
    ensure!(best.config.score() == target, "best score {}", best.config.score());
    ensure!(hits.iter().all(|h| h.config.score() <= target), "score above 25/64");
    // Cost s <= 11 is forced by |H|/s^2 > 25/64 with |H| <= 50, so psi <= 5 and
    // theta_i <= 11 leave no configuration out.
    let wide = SearchBounds { max_order: 50, k: 3, max_psi: 5, max_theta: 11 };
    let (above, took) = timed(|| search_above(wide, target));
    let above = above.map_err(|e| e.to_string())?;
    ensure!(above.is_empty(), "{} groups beat 25/64", above.len());
    Ok(format!(
        "best 25/64 in {} at |H| <= 25; nothing above 25/64 for |H| <= 50, k = 3, any psi, theta ({took:.2?})",
        best.config.group().descriptor()
    ))
}

fn c11(pool: &mut Pool) -> Outcome {
    ensure!(moore(7, 2) == 50, "moore(7,2) = {}", moore(7, 2));
    ensure!(moore(57, 2) == 3250, "moore(57,2) = {}", moore(57, 2));
    ensure!(df_upper(2, 2) == 13, "df_upper(2,2) = {}", df_upper(2, 2));
    for c in &pool.0 {
        ensure!(c.order as u128 <= ac_upper(c.degree as u64), "{}: order {} above bound", c.group, c.order);
    }
    Ok(format!("Moore and lattice values exact; ac_upper dominates {} certificates", pool.0.len()))
}

/// Largest order promised at degree `d` by the two families' stated degrees.
/// Even q gives a group of odd order (no involutions), so it only counts for even `d`.
fn family_floor(d: usize) -> usize {
    let mut best = 0;
    for q in (3..=d as u64).filter(|&q| is_prime_power(q)) {
        let stated_d = if q % 2 == 0 { 8 * q - 6 } else { 8 * q - 4 } as usize;
        if stated_d <= d && (q % 2 == 1 || d.is_multiple_of(2)) {
            best = best.max(25 * (q as usize - 1).pow(2));
        }
    }
    for m in (1..12).step_by(2) {
        if 3 << m <= d {
            best = best.max(4 << (2 * m));
        }
    }
    best
}

fn c12(pool: &mut Pool) -> Outcome {
    let degrees: Vec<usize> = (6..=64).chain((65..=400).step_by(13)).chain([383, 384, 400]).collect();
    for &d in &degrees {
        let cert = best_for_degree(d).and_then(|s| s.certify()).map_err(|e| format!("d={d}: {e}"))?;
        ensure!(cert.degree == d, "d={d}: degree {}", cert.degree);
        ensure!(cert.diameter == 2, "d={d}: diameter {}", cert.diameter);
        let floor = family_floor(d);
        ensure!(cert.order >= floor, "d={d}: order {} < {floor}", cert.order);
        if d == 20 || d == 400 {
            pool.0.push(cert);
        }
    }
    Ok(format!("{} degrees in [6, 400]: padded diameter-2 certificates at or above the family floor", degrees.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1  twisted-group m=1", c1),
        ("2  twisted-group m=3,5,7", c2),
        ("3  twisted-group identity", c3),
        ("4  neofield q=3,4,8", c4),
        ("5  Z5xZ5 covering configurations", c5),
        ("6  direct-product q=3,5,7", c6),
        ("7  difference set examples", c7),
        ("8  diameter oracle equivalence", c8),
        ("9  tau analysis", c9),
        ("10 covering search", c10),
        ("11 bounds table values", c11),
        ("12 padded best-for-degree", c12),
    ];
    let mut pool = Pool::default();
    let mut failed = 0;
    for (name, f) in criteria {
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut pool))).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
