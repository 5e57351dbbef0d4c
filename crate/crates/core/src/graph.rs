//! Cayley graph diameters and certificates.
//!
//! `g ~ h` iff `g^-1 h` is in `S`. Since Cayley graphs are vertex-transitive,
//! one breadth-first search from the identity gives the diameter; the
//! group-ring test `e + S + S*S >= G` and an all-pairs search on small graphs
//! are independent cross-checks.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteGroup;
use crate::bounds;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;

/// Largest order accepted by [`all_pairs_diameter`].
pub const ALL_PAIRS_LIMIT: usize = 2000;

/// Checks that `s` is duplicate-free, in range, identity-free and closed under inversion.
pub fn validate_generators(group: &FiniteGroup, s: &[usize]) -> Result<()> {
    let mut member = vec![false; group.order()];
    for &x in s {
        if x >= group.order() {
            return Err(Error::IndexOutOfRange { index: x, order: group.order() });
        }
        if member[x] {
            return Err(Error::InvalidGeneratingSet(format!("duplicate generator {x}")));
        }
        member[x] = true;
    }
    if member.first() == Some(&true) {
        return Err(Error::InvalidGeneratingSet("contains the identity".into()));
    }
    if let Some(&x) = s.iter().find(|&&x| !member[group.inv(x)]) {
        return Err(Error::InvalidGeneratingSet(format!("inverse of {x} missing")));
    }
    Ok(())
}

/// Eccentricity of `source`, or `Disconnected`.
fn eccentricity(group: &FiniteGroup, s: &[usize], source: usize) -> Result<usize> {
    let n = group.order();
    let mut visited = vec![0u64; n.div_ceil(64)];
    visited[source / 64] |= 1 << (source % 64);
    let mut frontier = vec![source];
    let mut next = Vec::new();
    let mut reached = 1;
    let mut depth = 0;
    loop {
        for &u in &frontier {
            for &g in s {
                let v = group.op(u, g);
                let (w, b) = (v / 64, 1u64 << (v % 64));
                if visited[w] & b == 0 {
                    visited[w] |= b;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        reached += next.len();
        depth += 1;
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    if reached == n {
        Ok(depth)
    } else {
        Err(Error::Disconnected { reached, order: n })
    }
}

/// Diameter by breadth-first search from the identity.
pub fn diameter_bfs(group: &FiniteGroup, s: &[usize]) -> Result<usize> {
    validate_generators(group, s)?;
    eccentricity(group, s, 0)
}

/// Outcome of the group-ring diameter test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterDecision {
    Zero,
    One,
    Two,
    MoreThanTwo,
}

impl DiameterDecision {
    /// The exact diameter when it is at most 2.
    pub fn value(self) -> Option<usize> {
        match self {
            DiameterDecision::Zero => Some(0),
            DiameterDecision::One => Some(1),
            DiameterDecision::Two => Some(2),
            DiameterDecision::MoreThanTwo => None,
        }
    }
}

/// Decides diameter <= 2 by testing `e >= G`, `e + S >= G` and `e + S + S*S >= G` in `Z[G]`.
pub fn diameter_groupring(group: &Arc<FiniteGroup>, s: &[usize]) -> Result<DiameterDecision> {
    validate_generators(group, s)?;
    let e = GroupRingElement::scalar(group, 1);
    if e.covers_group().covered {
        return Ok(DiameterDecision::Zero);
    }
    let gens = GroupRingElement::from_subset(group, s)?;
    let one_step = e.add(&gens)?;
    if one_step.covers_group().covered {
        return Ok(DiameterDecision::One);
    }
    if one_step.add(&gens.mul(&gens)?)?.covers_group().covered {
        return Ok(DiameterDecision::Two);
    }
    Ok(DiameterDecision::MoreThanTwo)
}

/// Maximum eccentricity over every vertex; only for orders up to [`ALL_PAIRS_LIMIT`].
pub fn all_pairs_diameter(group: &FiniteGroup, s: &[usize]) -> Result<usize> {
    if group.order() > ALL_PAIRS_LIMIT {
        return Err(Error::SizeGuard { order: group.order() as u128, limit: ALL_PAIRS_LIMIT });
    }
    validate_generators(group, s)?;
    let eccs = group.elements().into_par_iter().map(|v| eccentricity(group, s, v)).collect::<Result<Vec<_>>>()?;
    Ok(eccs.into_iter().max().unwrap_or(0))
}

/// Where a generating set came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    /// Builder name, e.g. `construction2`.
    pub builder: String,
    /// Builder parameters, e.g. `m=3`.
    pub parameters: String,
    /// Free-form remarks (identity removal, padding, corrections).
    #[serde(default)]
    pub notes: Vec<String>,
}

/// A re-verifiable record of a Cayley graph and its diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyCertificate {
    /// Group descriptor, see [`FiniteGroup::descriptor`].
    pub group: String,
    pub generators: Vec<usize>,
    pub order: usize,
    pub degree: usize,
    pub diameter: usize,
    pub provenance: Provenance,
    /// Verification methods that produced or confirmed `diameter`.
    pub methods: Vec<String>,
    /// Degree stated for the family this graph belongs to, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_degree: Option<usize>,
}

impl CayleyCertificate {
    /// A certificate that has not been through [`certify`]; exports refuse it.
    pub fn unverified(group: &FiniteGroup, generators: Vec<usize>, provenance: Provenance) -> Self {
        CayleyCertificate {
            group: group.descriptor(),
            order: group.order(),
            degree: generators.len(),
            generators,
            diameter: 0,
            provenance,
            methods: Vec::new(),
            claimed_degree: None,
        }
    }

    pub fn is_verified(&self) -> bool {
        !self.methods.is_empty()
    }

    pub fn group(&self) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(FiniteGroup::parse(&self.group)?))
    }

    /// Rebuilds the group from its descriptor and runs every check again.
    pub fn reverify(&self) -> Result<CayleyCertificate> {
        let group = self.group()?;
        let fresh = certify(&group, self.generators.clone(), self.provenance.clone(), self.claimed_degree)?;
        if fresh.order != self.order || fresh.degree != self.degree || fresh.diameter != self.diameter {
            return Err(Error::OracleMismatch(format!(
                "recorded (order {}, degree {}, diameter {}) but recomputed ({}, {}, {})",
                self.order, self.degree, self.diameter, fresh.order, fresh.degree, fresh.diameter
            )));
        }
        Ok(fresh)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("certificate serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Computes the diameter by BFS and confirms it with the group-ring test (and
/// the all-pairs search when the graph is small). Any disagreement, or an
/// order above the Moore or abelian counting bound, is an error.
pub fn certify(
    group: &Arc<FiniteGroup>,
    mut generators: Vec<usize>,
    provenance: Provenance,
    claimed_degree: Option<usize>,
) -> Result<CayleyCertificate> {
    generators.sort_unstable();
    let diameter = diameter_bfs(group, &generators)?;
    let mut methods = vec!["bfs".to_string()];

    let decision = diameter_groupring(group, &generators)?;
    if decision.value().map_or(diameter <= 2, |d| d != diameter) {
        return Err(Error::OracleMismatch(format!("bfs gives {diameter}, group ring gives {decision:?}")));
    }
    methods.push("group-ring".into());

    if group.order() <= ALL_PAIRS_LIMIT {
        let ap = all_pairs_diameter(group, &generators)?;
        if ap != diameter {
            return Err(Error::OracleMismatch(format!("bfs gives {diameter}, all-pairs gives {ap}")));
        }
        methods.push("all-pairs".into());
    }

    let degree = generators.len();
    if diameter == 2 {
        let d = degree as u128;
        let order = group.order() as u128;
        if order > d * d + 1 {
            return Err(Error::BoundViolation { degree, detail: format!("order {order} above d^2 + 1") });
        }
        if order > bounds::ac_upper(degree as u64) {
            return Err(Error::BoundViolation { degree, detail: format!("order {order} above the abelian bound") });
        }
    }

    Ok(CayleyCertificate {
        group: group.descriptor(),
        generators,
        order: group.order(),
        degree,
        diameter,
        provenance,
        methods,
        claimed_degree,
    })
}

/// Writes the certificate as structured text.
pub fn export_certificate(cert: &CayleyCertificate, path: &Path) -> Result<()> {
    if !cert.is_verified() {
        return Err(Error::Unverified);
    }
    std::fs::write(path, cert.to_text())?;
    Ok(())
}

/// Edges `u v` with `u < v`, sorted, one per line.
pub fn write_edges(cert: &CayleyCertificate, out: &mut impl Write) -> Result<()> {
    if !cert.is_verified() {
        return Err(Error::Unverified);
    }
    let group = cert.group()?;
    let mut nbrs = Vec::with_capacity(cert.generators.len());
    for u in group.elements() {
        nbrs.clear();
        nbrs.extend(cert.generators.iter().map(|&g| group.op(u, g)).filter(|&v| v > u));
        nbrs.sort_unstable();
        for &v in &nbrs {
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}

/// Writes the edge list to `path`.
pub fn export_edges(cert: &CayleyCertificate, path: &Path) -> Result<()> {
    if !cert.is_verified() {
        return Err(Error::Unverified);
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_edges(cert, &mut w)?;
    w.flush()?;
    Ok(())
}
