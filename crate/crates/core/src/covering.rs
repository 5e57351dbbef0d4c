//! Covering configurations on the auxiliary group `H`.
//!
//! A configuration `(Psi, Lambda_1..Lambda_k)` covers `H` when
//!
//! ```text
//! H <= Psi Psi^(-1) + sum_i Psi Lambda_i + sum_i Psi^(-1) Lambda_i + sum_{i != j} Lambda_i Lambda_j
//! ```
//!
//! in `Z[H]`. Its cost is `s = 2 psi + sum theta_i` and its score `|H| / s^2`
//! is the leading constant of the graph order `|H| n^2` against degree `s n`.
//!
//! [`search_cover`] enumerates every abelian group of bounded order and finds,
//! for each, the cheapest covering configuration within the size bounds.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::FiniteGroup;
use crate::error::{Error, Result};
use crate::groupring::{Coverage, GroupRingElement};

/// Upper limit on the number of candidate configurations [`search_cover`]
/// will examine after counting-bound pruning.
pub const SEARCH_BUDGET: u128 = 20_000_000_000;

/// `(H, Psi, Lambda_1..Lambda_k)`; every `Lambda_i` is closed under inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringConfig {
    group: Arc<FiniteGroup>,
    psi: Vec<usize>,
    lambdas: Vec<Vec<usize>>,
}

impl CoveringConfig {
    pub fn new(group: &Arc<FiniteGroup>, psi: Vec<usize>, lambdas: Vec<Vec<usize>>) -> Result<Self> {
        let normalize = |mut v: Vec<usize>| -> Result<Vec<usize>> {
            v.sort_unstable();
            v.dedup();
            if let Some(&x) = v.iter().find(|&&x| x >= group.order()) {
                return Err(Error::IndexOutOfRange { index: x, order: group.order() });
            }
            Ok(v)
        };
        let psi = normalize(psi)?;
        let lambdas = lambdas.into_iter().map(normalize).collect::<Result<Vec<_>>>()?;
        for (i, l) in lambdas.iter().enumerate() {
            if l.iter().any(|&x| l.binary_search(&group.inv(x)).is_err()) {
                return Err(Error::InvalidParameter(format!("Lambda_{} is not closed under inversion", i + 1)));
            }
        }
        Ok(CoveringConfig { group: group.clone(), psi, lambdas })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn psi(&self) -> &[usize] {
        &self.psi
    }

    pub fn lambdas(&self) -> &[Vec<usize>] {
        &self.lambdas
    }

    /// `s = 2 psi + sum theta_i`.
    pub fn cost(&self) -> u64 {
        2 * self.psi.len() as u64 + self.lambdas.iter().map(|l| l.len() as u64).sum::<u64>()
    }

    /// `|H| / s^2`.
    pub fn score(&self) -> Ratio<u64> {
        let s = self.cost();
        Ratio::new(self.group.order() as u64, s * s)
    }

    /// Applies a map on `H` (an automorphism, for the invariance checks) to
    /// every set of the configuration.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(
            &self.group,
            self.psi.iter().map(|&x| f(x)).collect(),
            self.lambdas.iter().map(|l| l.iter().map(|&x| f(x)).collect()).collect(),
        )
    }
}

/// Evaluates the covering sum exactly as displayed in the module docs and
/// reports the elements of `H` it misses.
pub fn check_cover(c: &CoveringConfig) -> Result<Coverage> {
    let h = c.group();
    let psi = GroupRingElement::from_subset(h, c.psi())?;
    let psi_inv = psi.inv_image();
    let lambdas: Vec<GroupRingElement> =
        c.lambdas().iter().map(|l| GroupRingElement::from_subset(h, l)).collect::<Result<_>>()?;
    let mut total = psi.mul(&psi_inv)?;
    for l in &lambdas {
        total = total.add(&psi.mul(l)?)?;
        total = total.add(&psi_inv.mul(l)?)?;
    }
    for (i, li) in lambdas.iter().enumerate() {
        for (j, lj) in lambdas.iter().enumerate() {
            if i != j {
                total = total.add(&li.mul(lj)?)?;
            }
        }
    }
    Ok(total.covers_group())
}

fn z55() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::parse("z5xz5").unwrap())
}

fn pm(h: &FiniteGroup, a: [usize; 2]) -> Vec<usize> {
    let x = h.compose(&a).unwrap();
    vec![x, h.inv(x)]
}

/// The original Z5 x Z5 configuration for the neofield
/// construction: `d = a_1 = (1,0)`, `a_2 = (0,1)`, `a_3 = (0,2)`. It does not
/// cover `H`.
pub fn neofield_config_literal() -> CoveringConfig {
    let h = z55();
    let lambdas = vec![pm(&h, [1, 0]), pm(&h, [0, 1]), pm(&h, [0, 2])];
    CoveringConfig::new(&h, vec![h.compose(&[1, 0]).unwrap()], lambdas).unwrap()
}

/// The repaired Z5 x Z5 configuration `d = (1,0)`, `a_1 = (2,0)`, `a_2 = (0,1)`,
/// `a_3 = (0,2)`: the 24 signed sums `+-d +-a_i`, `+-a_i +-a_j` are exactly the
/// nonzero elements.
pub fn neofield_config() -> CoveringConfig {
    let h = z55();
    let lambdas = vec![pm(&h, [2, 0]), pm(&h, [0, 1]), pm(&h, [0, 2])];
    CoveringConfig::new(&h, vec![h.compose(&[1, 0]).unwrap()], lambdas).unwrap()
}

/// `H = Z6`, `Psi = {1}`, `Lambda_1 = {0}`, `Lambda_2 = {3}`.
pub fn dpds_config() -> CoveringConfig {
    let h = Arc::new(FiniteGroup::cyclic(6).unwrap());
    CoveringConfig::new(&h, vec![1], vec![vec![0], vec![3]]).unwrap()
}

/// Invariant-factor decompositions `d_1 | d_2 | ... | d_t` (all `d_i >= 2`)
/// of the abelian groups of order `n`; `[]` for the trivial group.
pub fn abelian_groups(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, prev: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (prev.max(2)..=rest).filter(|d| rest.is_multiple_of(*d) && d % prev == 0) {
            acc.push(d);
            rec(rest / d, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

fn group_from_factors(factors: &[usize]) -> Result<FiniteGroup> {
    if factors.is_empty() {
        return FiniteGroup::cyclic(1);
    }
    FiniteGroup::product(factors.iter().map(|&d| FiniteGroup::cyclic(d)).collect::<Result<_>>()?)
}

/// Inverse-closed subsets of `H` of size exactly `size`, built from the orbits
/// `{h, -h}`, in a fixed order.
fn inverse_closed_subsets(h: &FiniteGroup, size: usize) -> Vec<Vec<usize>> {
    let orbits: Vec<Vec<usize>> = h
        .elements()
        .filter(|&x| x <= h.inv(x))
        .map(|x| if h.inv(x) == x { vec![x] } else { vec![x, h.inv(x)] })
        .collect();
    let mut out = Vec::new();
    fn rec(orbits: &[Vec<usize>], start: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut s = acc.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        for i in start..orbits.len() {
            if orbits[i].len() <= left {
                acc.extend(&orbits[i]);
                rec(orbits, i + 1, left - orbits[i].len(), acc, out);
                acc.truncate(acc.len() - orbits[i].len());
            }
        }
    }
    rec(&orbits, 0, size, &mut Vec::new(), &mut out);
    out
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, start: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for x in start..n {
            acc.push(x);
            rec(n, x + 1, left - 1, acc, out);
            acc.pop();
        }
    }
    rec(n, 0, size, &mut Vec::new(), &mut out);
    out
}

/// Most elements the covering sum can reach for the given sizes: each term
/// contributes at most the product of its factor sizes, and `Psi Psi^(-1)`
/// has the identity at least `psi` times.
pub fn coverage_upper_bound(psi: usize, thetas: &[usize]) -> usize {
    let mut bound = psi * psi - psi.saturating_sub(1);
    let sum: usize = thetas.iter().sum();
    bound += 2 * psi * sum;
    for i in 0..thetas.len() {
        for j in i + 1..thetas.len() {
            bound += thetas[i] * thetas[j];
        }
    }
    bound
}

/// Nonincreasing size profiles `theta_1 >= .. >= theta_k`, each in `0..=max`.
fn theta_profiles(k: usize, max: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, cap: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for t in (0..=cap.min(left)).rev() {
            acc.push(t);
            rec(k, t, left - t, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, max, total, &mut Vec::new(), &mut out);
    out
}

/// Word-packed coverage test used inside the search loop.
struct FastCover {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl FastCover {
    fn new(h: &FiniteGroup) -> Self {
        let n = h.order();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = h.op(x, y);
            }
        }
        FastCover { order: n, table, inv: h.elements().map(|x| h.inv(x)).collect() }
    }

    fn covers(&self, psi: &[usize], lambdas: &[&[usize]]) -> bool {
        let n = self.order;
        let mut hit = vec![0u64; n.div_ceil(64)];
        let mut mark = |x: usize| hit[x / 64] |= 1 << (x % 64);
        for &a in psi {
            for &b in psi {
                mark(self.table[a * n + self.inv[b]]);
            }
            for l in lambdas {
                for &c in l.iter() {
                    mark(self.table[a * n + c]);
                    mark(self.table[self.inv[a] * n + c]);
                }
            }
        }
        for (i, li) in lambdas.iter().enumerate() {
            for lj in &lambdas[i + 1..] {
                for &a in li.iter() {
                    for &b in lj.iter() {
                        mark(self.table[a * n + b]);
                    }
                }
            }
        }
        let full = n / 64;
        hit[..full].iter().all(|&w| w == u64::MAX) && (n.is_multiple_of(64) || hit[full] == (1u64 << (n % 64)) - 1)
    }
}

/// Search bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_order: usize,
    pub k: usize,
    pub max_psi: usize,
    pub max_theta: usize,
}

/// Best configuration found for one group.
#[derive(Clone, Debug)]
pub struct SearchHit {
    pub invariant_factors: Vec<usize>,
    pub config: CoveringConfig,
}

fn count_choose(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Finds, for every abelian group `H` with `|H| <= max_order`, a covering
/// configuration of minimum cost with `1 <= psi <= max_psi` and
/// `0 <= theta_i <= max_theta`. Results are sorted by score (descending),
/// then by group; each returned configuration has been re-checked with
/// [`check_cover`].
///
/// Cost model: for each group and cost level, the number of `Psi` subsets
/// times the number of size-sorted `Lambda` tuples; levels whose
/// [`coverage_upper_bound`] is below `|H|` are skipped without enumeration.
/// The call fails up front when the unpruned total exceeds [`SEARCH_BUDGET`].
pub fn search_cover(bounds: SearchBounds) -> Result<Vec<SearchHit>> {
    run_search(bounds, None)
}

/// Like [`search_cover`], but per group only cost levels `s` with
/// `|H| / s^2 > threshold` are examined, so the result lists exactly the
/// groups admitting a configuration that scores above `threshold`.
pub fn search_above(bounds: SearchBounds, threshold: Ratio<u64>) -> Result<Vec<SearchHit>> {
    run_search(bounds, Some(threshold))
}

/// Largest cost worth trying in a group of order `n`.
fn cost_cap(n: usize, bounds: SearchBounds, threshold: Option<Ratio<u64>>) -> usize {
    let max_cost = 2 * bounds.max_psi + bounds.k * bounds.max_theta;
    match threshold {
        None => max_cost,
        Some(t) => {
            (0..=max_cost).take_while(|&s| s < 2 || Ratio::new(n as u64, (s * s) as u64) > t).last().unwrap_or(0)
        }
    }
}

fn run_search(bounds: SearchBounds, threshold: Option<Ratio<u64>>) -> Result<Vec<SearchHit>> {
    let SearchBounds { max_order, k, max_psi, max_theta } = bounds;
    if max_psi == 0 {
        return Err(Error::InvalidParameter("max_psi must be at least 1".into()));
    }
    let groups: Vec<Vec<usize>> = (1..=max_order).flat_map(abelian_groups).collect();

    let mut budget: u128 = 0;
    for factors in &groups {
        let n: usize = factors.iter().product();
        let cap = cost_cap(n, bounds, threshold);
        for psi in (1..=max_psi.min(n)).take_while(|&p| 2 * p <= cap) {
            for total in 0..=(k * max_theta).min(cap - 2 * psi) {
                for profile in theta_profiles(k, max_theta, total) {
                    if coverage_upper_bound(psi, &profile) < n {
                        continue;
                    }
                    let lambda_count: u128 =
                        profile.iter().map(|&t| count_choose(n as u128 + 1, t as u128).max(1)).product();
                    budget = budget.saturating_add(count_choose(n as u128, psi as u128).saturating_mul(lambda_count));
                }
            }
        }
    }
    if budget > SEARCH_BUDGET {
        return Err(Error::SearchExplosion(format!("about {budget} candidates exceed the budget of {SEARCH_BUDGET}")));
    }

    let hits: Vec<Option<SearchHit>> = groups
        .par_iter()
        .map(|factors| best_for_group(factors, bounds, cost_cap(factors.iter().product(), bounds, threshold)))
        .collect::<Result<_>>()?;
    let mut hits: Vec<SearchHit> = hits.into_iter().flatten().collect();
    for hit in &hits {
        let cov = check_cover(&hit.config)?;
        assert!(cov.covered, "search produced a non-covering configuration for {:?}", hit.invariant_factors);
    }
    hits.sort_by(|a, b| {
        b.config
            .score()
            .cmp(&a.config.score())
            .then_with(|| a.config.group().order().cmp(&b.config.group().order()))
            .then_with(|| a.invariant_factors.cmp(&b.invariant_factors))
    });
    Ok(hits)
}

fn best_for_group(factors: &[usize], bounds: SearchBounds, max_cost: usize) -> Result<Option<SearchHit>> {
    let h = Arc::new(group_from_factors(factors)?);
    let n = h.order();
    let fast = FastCover::new(&h);
    let theta_cap = bounds.max_theta.min(max_cost.saturating_sub(2));
    let closed: Vec<Vec<Vec<usize>>> = (0..=theta_cap).map(|t| inverse_closed_subsets(&h, t)).collect();

    for cost in 2..=max_cost {
        for psi_size in 1..=bounds.max_psi.min(n) {
            if 2 * psi_size > cost {
                break;
            }
            let rest = cost - 2 * psi_size;
            if rest > bounds.k * bounds.max_theta {
                continue;
            }
            for profile in theta_profiles(bounds.k, theta_cap, rest) {
                if coverage_upper_bound(psi_size, &profile) < n {
                    continue;
                }
                if profile.iter().any(|&t| closed[t].is_empty()) {
                    continue;
                }
                for psi in subsets_of_size(n, psi_size) {
                    if let Some(lambdas) = search_lambdas(&fast, &psi, &profile, &closed) {
                        let config = CoveringConfig::new(&h, psi, lambdas)?;
                        return Ok(Some(SearchHit { invariant_factors: factors.to_vec(), config }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Tries every `Lambda` tuple matching `profile`; equal sizes are taken in
/// nondecreasing order since the covering sum is symmetric in the `Lambda_i`.
fn search_lambdas(
    fast: &FastCover,
    psi: &[usize],
    profile: &[usize],
    closed: &[Vec<Vec<usize>>],
) -> Option<Vec<Vec<usize>>> {
    let k = profile.len();
    let mut idx = vec![0usize; k];
    loop {
        let chosen: Vec<&[usize]> = (0..k).map(|i| closed[profile[i]][idx[i]].as_slice()).collect();
        if fast.covers(psi, &chosen) {
            return Some(chosen.iter().map(|s| s.to_vec()).collect());
        }
        // odometer, resetting equal-size successors to their predecessor's position
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] + 1 < closed[profile[i]].len() {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = if profile[j] == profile[j - 1] { idx[j - 1] } else { 0 };
                }
                break;
            }
        }
    }
}

fn format_element(h: &FiniteGroup, x: usize) -> String {
    let parts = h.decompose(x);
    if parts.len() == 1 {
        parts[0].to_string()
    } else {
        format!("({})", parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn format_set(h: &FiniteGroup, xs: &[usize]) -> String {
    format!("{{{}}}", xs.iter().map(|&x| format_element(h, x)).collect::<Vec<_>>().join(","))
}

/// Tab-separated search results with a header row.
pub fn results_table(hits: &[SearchHit], k: usize) -> String {
    let mut s = String::from("invariant_factors\tpsi");
    for i in 1..=k {
        write!(s, "\tlambda_{i}").unwrap();
    }
    s.push_str("\ts\tscore\n");
    for hit in hits {
        let h = hit.config.group();
        let factors = if hit.invariant_factors.is_empty() {
            "1".to_string()
        } else {
            hit.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(s, "{factors}\t{}", format_set(h, hit.config.psi())).unwrap();
        for l in hit.config.lambdas() {
            write!(s, "\t{}", format_set(h, l)).unwrap();
        }
        let score = hit.config.score();
        writeln!(s, "\t{}\t{}/{}", hit.config.cost(), score.numer(), score.denom()).unwrap();
    }
    s
}

/// `((2s - 1/2)^2 / 10 + 1) / s^2` as an exact rational.
pub fn tau_bound(s: i64) -> Ratio<i64> {
    // (2s - 1/2)^2 / 10 = (4s - 1)^2 / 40
    Ratio::new((4 * s - 1) * (4 * s - 1) + 40, 40 * s * s)
}

/// Maximum of `(1 + psi(psi-1) + psi(psi+1)/2 + 2 psi theta) / s^2` over
/// integers `psi >= 1`, `theta >= 0` with `2 psi + theta = s`; `None` if
/// `s < 2`.
pub fn tau_exhaustive(s: i64) -> Option<Ratio<i64>> {
    (1..=s / 2)
        .map(|psi| {
            let theta = s - 2 * psi;
            Ratio::new(1 + psi * (psi - 1) + psi * (psi + 1) / 2 + 2 * psi * theta, s * s)
        })
        .max()
}
