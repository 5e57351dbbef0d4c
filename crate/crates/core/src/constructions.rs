//! Generating sets `S` in `G x H` assembled from a difference set `D` in `G`,
//! its exceptional subgroups `N_i`, and a covering configuration on `H`:
//!
//! `S = sum_{g in Psi} (D, g) + (D^(-1), -g) + sum_i sum_{h in Lambda_i} (N_i, h) + Upsilon`
//!
//! An element of `G x H` is indexed `g * |H| + h`.

use std::sync::Arc;

use crate::algebra::{FiniteGroup, Subgroup};
use crate::covering::{check_cover, neofield_config, CoveringConfig};
use crate::diffsets::{dpds, lemma34_identity, neofield_augmented, neofield_gds, trivial_planar_rds};
use crate::error::{Error, Result};
use crate::graph::{certify, CayleyCertificate, Provenance};
use crate::groupring::GroupRingElement;

/// `(A, h)`: the subset `A` of `G` placed at `h` in `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub label: String,
    pub subset: Vec<usize>,
    pub shift: usize,
}

/// A symmetric, identity-free generating set together with the pieces it was built from.
#[derive(Clone, Debug)]
pub struct GeneratingSpec {
    base: Arc<FiniteGroup>,
    aux: Arc<FiniteGroup>,
    group: Arc<FiniteGroup>,
    layers: Vec<Layer>,
    sporadic: Vec<usize>,
    padding: Vec<usize>,
    generators: Vec<usize>,
    provenance: Provenance,
    claimed_degree: Option<usize>,
}

impl GeneratingSpec {
    fn assemble(
        base: Arc<FiniteGroup>,
        aux: Arc<FiniteGroup>,
        layers: Vec<Layer>,
        sporadic: Vec<usize>,
        mut provenance: Provenance,
        claimed_degree: Option<usize>,
    ) -> Result<Self> {
        let group = if aux.order() == 1 { base.clone() } else { Arc::new(FiniteGroup::direct_product(&base, &aux)?) };
        let h = aux.order();
        let mut s: Vec<usize> = layers
            .iter()
            .flat_map(|l| l.subset.iter().map(move |&g| g * h + l.shift))
            .chain(sporadic.iter().copied())
            .collect();
        s.sort_unstable();
        s.dedup();
        if s.first() == Some(&0) {
            s.remove(0);
            provenance.notes.push("identity dropped from the layer union".into());
        }
        let spec = GeneratingSpec {
            base,
            aux,
            group,
            layers,
            sporadic,
            padding: Vec::new(),
            generators: s,
            provenance,
            claimed_degree,
        };
        spec.check_invariants()?;
        Ok(spec)
    }

    /// Wraps the generating set of a certificate (as a single layer over a
    /// trivial `H`) so that it can be padded.
    pub fn from_certificate(cert: &CayleyCertificate) -> Result<Self> {
        let group = cert.group()?;
        let layers = vec![Layer { label: "S".into(), subset: cert.generators.clone(), shift: 0 }];
        let trivial = Arc::new(FiniteGroup::cyclic(1)?);
        GeneratingSpec::assemble(group, trivial, layers, Vec::new(), cert.provenance.clone(), cert.claimed_degree)
    }

    fn check_invariants(&self) -> Result<()> {
        let g = &self.group;
        if self.generators.binary_search(&0).is_ok() {
            return Err(Error::InvalidGeneratingSet("contains the identity".into()));
        }
        if let Some(&x) = self.generators.iter().find(|&&x| self.generators.binary_search(&g.inv(x)).is_err()) {
            return Err(Error::InvalidGeneratingSet(format!("not symmetric: inverse of {x} missing")));
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn aux(&self) -> &Arc<FiniteGroup> {
        &self.aux
    }

    /// `G x H`.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// `Upsilon`, as indices in `G x H`.
    pub fn sporadic(&self) -> &[usize] {
        &self.sporadic
    }

    /// Elements added by [`pad_to_degree`] (or to reach the stated degree).
    pub fn padding(&self) -> &[usize] {
        &self.padding
    }

    /// `S`, sorted.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn claimed_degree(&self) -> Option<usize> {
        self.claimed_degree
    }

    /// `(g, h)` as an index of `G x H`.
    pub fn lift(&self, g: usize, h: usize) -> usize {
        g * self.aux.order() + h
    }

    /// The layers and `Upsilon` summed as a multiset in `Z[G x H]`, before the
    /// identity is dropped and before padding.
    pub fn layer_sum(&self) -> Result<GroupRingElement> {
        let mut coeffs = vec![0i64; self.order()];
        for l in &self.layers {
            for &g in &l.subset {
                coeffs[self.lift(g, l.shift)] += 1;
            }
        }
        for &x in &self.sporadic {
            coeffs[x] += 1;
        }
        GroupRingElement::from_coefficients(&self.group, coeffs)
    }

    /// Measures the diameter and packages the result.
    pub fn certify(&self) -> Result<CayleyCertificate> {
        certify(&self.group, self.generators.clone(), self.provenance.clone(), self.claimed_degree)
    }
}

fn check_prime_power(q: u64) -> Result<()> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("q = {q} is degenerate; need q >= 3")));
    }
    crate::algebra::prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

fn inverse_subset(g: &FiniteGroup, a: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().map(|&x| g.inv(x)).collect();
    v.sort_unstable();
    v
}

/// The direct product difference set in `(F_q,+) x (F_q^*,*)` with `H = Z6`,
/// `Psi = {1}`, `Lambda_1 = {0}`, `Lambda_2 = {3}` and `Upsilon = {(0,1,+-1)}`.
/// `(N_1, 0)` contains the identity, which is dropped, so `|S| = 4q - 2`.
pub fn build_example31(q: u64) -> Result<GeneratingSpec> {
    check_prime_power(q)?;
    let d = dpds(q)?;
    let g = d.group().clone();
    let h = Arc::new(FiniteGroup::cyclic(6)?);
    let set = d.set().to_vec();
    let layers = vec![
        Layer { label: "(D,1)".into(), subset: set.clone(), shift: 1 },
        Layer { label: "(D^-1,-1)".into(), subset: inverse_subset(&g, &set), shift: 5 },
        Layer { label: "(N1,0)".into(), subset: d.subgroups()[0].elements().to_vec(), shift: 0 },
        Layer { label: "(N2,3)".into(), subset: d.subgroups()[1].elements().to_vec(), shift: 3 },
    ];
    let sporadic = vec![1, 5];
    let provenance = Provenance { builder: "example31".into(), parameters: format!("q={q}"), notes: vec![] };
    GeneratingSpec::assemble(g, h, layers, sporadic, provenance, Some(4 * q as usize - 2))
}

/// The neofield construction without the covering check, for auditing configurations
/// that fail it.
pub fn build_construction1_unchecked(q: u64, config: &CoveringConfig) -> Result<GeneratingSpec> {
    check_prime_power(q)?;
    if config.lambdas().len() != 3 || config.psi().is_empty() {
        return Err(Error::InvalidParameter("neofield construction needs a nonempty Psi and three Lambda sets".into()));
    }
    let aug = neofield_augmented(q)?;
    let plain = neofield_gds(q)?;
    let g = aug.group().clone();
    let dt = aug.set().to_vec();
    let dt_inv = inverse_subset(&g, &dt);
    let h = config.group().clone();
    let mut layers = Vec::new();
    for &p in config.psi() {
        layers.push(Layer { label: format!("(D~,{p})"), subset: dt.clone(), shift: p });
        layers.push(Layer { label: format!("(D~^-1,{})", h.inv(p)), subset: dt_inv.clone(), shift: h.inv(p) });
    }
    for (i, (n, lam)) in plain.subgroups().iter().zip(config.lambdas()).enumerate() {
        for &a in lam {
            layers.push(Layer { label: format!("(N{},{a})", i + 1), subset: n.elements().to_vec(), shift: a });
        }
    }
    let claimed = if q.is_multiple_of(2) { 8 * q - 6 } else { 8 * q - 4 };
    let provenance = Provenance { builder: "construction1".into(), parameters: format!("q={q}"), notes: vec![] };
    GeneratingSpec::assemble(g, h, layers, Vec::new(), provenance, Some(claimed as usize))
}

/// Neofield construction: the set `D~` in `(F_q^*)^2` with a covering
/// configuration on `H`. Fails unless the configuration covers `H`.
pub fn build_construction1(q: u64, config: &CoveringConfig) -> Result<GeneratingSpec> {
    let cov = check_cover(config)?;
    if !cov.covered {
        return Err(Error::CoverFailed { uncovered: cov.uncovered.len() });
    }
    build_construction1_unchecked(q, config)
}

/// Twisted-group construction: `S = (D,1) + (D^(-1),-1) + (N,0)` in `tw(m) x Z4`, `m` odd.
///
/// `(N,0)` holds the identity; it is dropped and the lowest unused involution
/// is added so the degree is `3 * 2^m`.
pub fn build_construction2(m: u32) -> Result<GeneratingSpec> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let (holds, defect) = lemma34_identity(m)?;
    if !holds {
        return Err(Error::IdentityDefect { m, defect_support: defect.support().len() });
    }
    let rds = trivial_planar_rds(m)?;
    let g = rds.group().clone();
    let h = Arc::new(FiniteGroup::cyclic(4)?);
    let d = rds.set().to_vec();
    let n: &Subgroup = &rds.subgroups()[0];
    let layers = vec![
        Layer { label: "(D,1)".into(), subset: d.clone(), shift: 1 },
        Layer { label: "(D^-1,-1)".into(), subset: inverse_subset(&g, &d), shift: 3 },
        Layer { label: "(N,0)".into(), subset: n.elements().to_vec(), shift: 0 },
    ];
    let q = 1usize << m;
    let provenance = Provenance { builder: "construction2".into(), parameters: format!("m={m}"), notes: vec![] };
    let spec = GeneratingSpec::assemble(g, h, layers, Vec::new(), provenance, Some(3 * q))?;
    check_square_identity(&spec, n)?;
    pad_to_degree(&spec, 3 * q)
}

/// `a e + b (N,0) + c (G,2) + t (G,Z4)` in `Z[tw(m) x Z4]`.
fn square_shape(spec: &GeneratingSpec, n: &Subgroup, [a, b, c, t]: [i64; 4]) -> Result<GroupRingElement> {
    let mut coeffs = vec![0i64; spec.order()];
    coeffs[0] += a;
    for &x in n.elements() {
        coeffs[spec.lift(x, 0)] += b;
    }
    for g in spec.base.elements() {
        coeffs[spec.lift(g, 2)] += c;
        for h in 0..4 {
            coeffs[spec.lift(g, h)] += t;
        }
    }
    GroupRingElement::from_coefficients(spec.group(), coeffs)
}

/// Sum of `L_i * L_j` over unordered pairs `i <= j` of layers: each cross
/// term once, as the layer products are usually listed.
pub fn layer_pair_sum(spec: &GeneratingSpec) -> Result<GroupRingElement> {
    let h = spec.aux.order();
    let elems: Vec<GroupRingElement> = spec
        .layers
        .iter()
        .map(|l| {
            let s: Vec<usize> = l.subset.iter().map(|&g| g * h + l.shift).collect();
            GroupRingElement::from_subset(&spec.group, &s)
        })
        .collect::<Result<_>>()?;
    let mut total = GroupRingElement::zero(&spec.group);
    for i in 0..elems.len() {
        for j in i..elems.len() {
            total = total.add(&elems[i].mul(&elems[j])?)?;
        }
    }
    Ok(total)
}

/// For the twisted-group layer sum `S`:
/// `S*S = 2q e + (q-2)(N,0) + 2(G,Z4)` and the pairwise form
/// `sum_{i<=j} L_i L_j = q e + (q-1)(N,0) + (G,2) + (G,Z4)`.
fn check_square_identity(spec: &GeneratingSpec, n: &Subgroup) -> Result<()> {
    let q = n.order() as i64;
    let s = spec.layer_sum()?;
    let full = s.mul(&s)?.sub(&square_shape(spec, n, [2 * q, q - 2, 0, 2])?)?;
    let pairs = layer_pair_sum(spec)?.sub(&square_shape(spec, n, [q, q - 1, 1, 1])?)?;
    for (name, diff) in [("S*S", full), ("pairwise layer sum", pairs)] {
        if !diff.is_zero() {
            return Err(Error::OracleMismatch(format!("{name} identity fails on {} elements", diff.support().len())));
        }
    }
    Ok(())
}

/// Adds unused elements in index order until the degree is `d`: involutions
/// first (as many as parity allows), then inverse pairs.
pub fn pad_to_degree(spec: &GeneratingSpec, d: usize) -> Result<GeneratingSpec> {
    let have = spec.degree();
    let order = spec.order();
    if d < have || d >= order {
        return Err(Error::DegreeUnreachable {
            target: d,
            reason: format!("need {have} <= d <= {} (current degree, order - 1)", order - 1),
        });
    }
    let deficit = d - have;
    if deficit == 0 {
        return Ok(spec.clone());
    }
    let g = &spec.group;
    let unused = |x: &usize| *x != 0 && spec.generators.binary_search(x).is_err();
    let involutions: Vec<usize> = g.elements().filter(unused).filter(|&x| g.inv(x) == x).collect();
    let pairs: Vec<usize> = g.elements().filter(unused).filter(|&x| x < g.inv(x)).collect();
    let take_inv = (0..=deficit.min(involutions.len()))
        .rev()
        .find(|&i| (deficit - i).is_multiple_of(2) && (deficit - i) / 2 <= pairs.len())
        .ok_or_else(|| Error::DegreeUnreachable {
            target: d,
            reason: format!(
                "deficit {deficit} with {} free involutions and {} free pairs",
                involutions.len(),
                pairs.len()
            ),
        })?;
    let mut added: Vec<usize> = involutions[..take_inv].to_vec();
    for &x in &pairs[..(deficit - take_inv) / 2] {
        added.push(x);
        added.push(g.inv(x));
    }
    let mut out = spec.clone();
    out.generators.extend(&added);
    out.generators.sort_unstable();
    out.padding.extend(added);
    out.padding.sort_unstable();
    out.provenance.notes.push(format!("padded from degree {have} to {d}"));
    out.check_invariants()?;
    Ok(out)
}

/// Candidate base constructions for a target degree, with the degree and
/// order each one is expected to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Candidate {
    Construction2(u32),
    Construction1(u64),
    Example31(u64),
}

impl Candidate {
    fn degree(self) -> usize {
        match self {
            Candidate::Construction2(m) => 3 << m,
            Candidate::Construction1(q) if q % 2 == 0 => 8 * q as usize - 8,
            Candidate::Construction1(q) => 8 * q as usize - 6,
            Candidate::Example31(q) => 4 * q as usize - 2,
        }
    }

    fn order(self) -> usize {
        match self {
            Candidate::Construction2(m) => 1 << (2 * m + 2),
            Candidate::Construction1(q) => 25 * (q as usize - 1).pow(2),
            Candidate::Example31(q) => 6 * q as usize * (q as usize - 1),
        }
    }

    fn build(self) -> Result<GeneratingSpec> {
        match self {
            Candidate::Construction2(m) => build_construction2(m),
            Candidate::Construction1(q) => build_construction1(q, &neofield_config()),
            Candidate::Example31(q) => build_example31(q),
        }
    }
}

/// The largest-order neofield or twisted-group graph whose degree is at most `d`, padded
/// to exactly `d`. The direct-product family is used only where neither fits (d = 15, 16, 17).
pub fn best_for_degree(d: usize) -> Result<GeneratingSpec> {
    if d < 6 {
        return Err(Error::InvalidParameter(format!("degree {d} < 6")));
    }
    let mut cands = Vec::new();
    for m in (1..).step_by(2).take_while(|&m| 3usize << m <= d) {
        cands.push(Candidate::Construction2(m));
    }
    for q in (3..=d as u64).filter(|&q| crate::algebra::is_prime_power(q)) {
        cands.push(Candidate::Construction1(q));
        cands.push(Candidate::Example31(q));
    }
    // order >= d + 2 keeps the padded graph short of complete
    cands.retain(|c| c.degree() <= d && c.order() >= d + 2 && c.order() <= crate::algebra::max_order());
    cands.sort_by_key(|c| (matches!(c, Candidate::Example31(_)), std::cmp::Reverse(c.order())));
    // Odd-order groups have no involutions, so the parity of d may rule a
    // candidate out; fall through to the next one.
    let mut last = Error::DegreeUnreachable { target: d, reason: "no base construction fits".into() };
    for c in cands {
        let spec = c.build()?;
        if spec.degree() > d {
            last = Error::DegreeUnreachable {
                target: d,
                reason: format!("{} has degree {}", spec.provenance.builder, spec.degree()),
            };
            continue;
        }
        match pad_to_degree(&spec, d) {
            Ok(padded) => return Ok(padded),
            Err(e @ Error::DegreeUnreachable { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::neofield_config_literal;
    use crate::graph::diameter_bfs;

    fn diameter(s: &GeneratingSpec) -> usize {
        diameter_bfs(s.group(), s.generators()).unwrap()
    }

    #[test]
    fn lift_matches_product_indexing() {
        let s = build_example31(3).unwrap();
        let g = s.group();
        for x in s.base().elements() {
            for y in s.aux().elements() {
                let mut parts = s.base().decompose(x);
                parts.extend(s.aux().decompose(y));
                assert_eq!(g.compose(&parts).unwrap(), s.lift(x, y));
            }
        }
    }

    #[test]
    fn example31_small() {
        for (q, order) in [(3, 36), (4, 72), (5, 120)] {
            let s = build_example31(q).unwrap();
            assert_eq!(s.order(), order);
            assert_eq!(s.degree(), 4 * q as usize - 2);
            assert_eq!(diameter(&s), 2);
        }
        assert!(build_example31(2).is_err());
        assert!(build_example31(6).is_err());
    }

    #[test]
    fn construction1_degrees() {
        for (q, deg) in [(3u64, 18usize), (4, 24), (5, 34)] {
            let s = build_construction1(q, &neofield_config()).unwrap();
            assert_eq!(s.order(), 25 * (q as usize - 1).pow(2));
            assert_eq!(s.degree(), deg);
            assert_eq!(diameter(&s), 2);
        }
    }

    #[test]
    fn construction1_literal_config() {
        assert!(matches!(build_construction1(3, &neofield_config_literal()), Err(Error::CoverFailed { .. })));
        let s = build_construction1_unchecked(3, &neofield_config_literal()).unwrap();
        assert_eq!(diameter(&s), 3);
    }

    #[test]
    fn construction2_small() {
        let s = build_construction2(1).unwrap();
        assert_eq!((s.order(), s.degree()), (16, 6));
        assert_eq!(s.padding(), &[2]);
        assert_eq!(diameter(&s), 2);
        assert!(matches!(build_construction2(2), Err(Error::IdentityDefect { m: 2, .. })));
    }

    #[test]
    fn padding_rules() {
        let s = build_construction2(1).unwrap();
        assert_eq!(pad_to_degree(&s, 6).unwrap().generators(), s.generators());
        let p = pad_to_degree(&s, 8).unwrap();
        assert_eq!(p.degree(), 8);
        assert_eq!(diameter(&p), 2);
        let p = pad_to_degree(&s, 9).unwrap();
        assert_eq!(p.degree(), 9);
        assert!(pad_to_degree(&s, 16).is_err());
        assert!(pad_to_degree(&s, 5).is_err());
        assert!(pad_to_degree(&s, 15).is_ok());
    }

    #[test]
    fn odd_deficit_without_involutions() {
        // Z5 x Z3 has no involutions at all.
        let z5 = Arc::new(FiniteGroup::cyclic(5).unwrap());
        let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let layers = vec![Layer { label: "(Z5,0)".into(), subset: (0..5).collect(), shift: 0 }];
        let s = GeneratingSpec::assemble(z5, z3, layers, vec![], Provenance::default(), None).unwrap();
        assert_eq!(s.degree(), 4);
        assert!(matches!(pad_to_degree(&s, 5), Err(Error::DegreeUnreachable { .. })));
        assert_eq!(pad_to_degree(&s, 6).unwrap().degree(), 6);
    }

    #[test]
    fn asymmetric_layers_rejected() {
        let z7 = Arc::new(FiniteGroup::cyclic(7).unwrap());
        let z1 = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let layers = vec![Layer { label: "".into(), subset: vec![1, 2, 4], shift: 0 }];
        assert!(matches!(
            GeneratingSpec::assemble(z7, z1, layers, vec![], Provenance::default(), None),
            Err(Error::InvalidGeneratingSet(_))
        ));
    }

    #[test]
    fn certificate_roundtrip_padding() {
        let cert = build_construction2(1).unwrap().certify().unwrap();
        let s = GeneratingSpec::from_certificate(&cert).unwrap();
        assert_eq!(s.group().descriptor(), "tw1xz4");
        assert_eq!(s.generators(), &cert.generators[..]);
        let p = pad_to_degree(&s, 7).unwrap().certify().unwrap();
        assert_eq!((p.degree, p.diameter), (7, 2));
    }

    #[test]
    fn best_odd_degree_skips_odd_order() {
        // The neofield graph at q = 8 has odd order 1225 and degree 56.
        let s = best_for_degree(57).unwrap();
        assert_eq!(s.degree(), 57);
        assert_eq!(s.order() % 2, 0);
        assert_eq!(best_for_degree(56).unwrap().order(), 1225);
    }

    #[test]
    fn best_small_degrees() {
        let s = best_for_degree(6).unwrap();
        assert_eq!((s.provenance().builder.as_str(), s.order()), ("construction2", 16));
        let s = best_for_degree(20).unwrap();
        assert_eq!((s.provenance().builder.as_str(), s.order(), s.degree()), ("construction1", 100, 20));
        let s = best_for_degree(24).unwrap();
        assert_eq!((s.provenance().builder.as_str(), s.order()), ("construction2", 256));
        let s = best_for_degree(16).unwrap();
        assert_eq!((s.provenance().builder.as_str(), s.order(), s.degree()), ("example31", 72, 16));
        assert!(best_for_degree(5).is_err());
    }
}
