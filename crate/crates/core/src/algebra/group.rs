use std::fmt;
use std::sync::Arc;

use super::{max_order, FiniteField};
use crate::error::{Error, Result};

/// The shape of a [`FiniteGroup`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// Z_n, index = residue.
    Cyclic(usize),
    /// (F_q, +), index = field index.
    Additive(Arc<FiniteField>),
    /// (F_q^*, *), index = field index - 1 (so the field's one is the identity).
    Unit(Arc<FiniteField>),
    /// F_{2^m} x F_{2^m} under (a,b)*(c,d) = (a+c, b+d+ac), isomorphic to Z_4^m.
    /// Index of (a, b) is a * 2^m + b.
    Twisted { m: u32, field: Arc<FiniteField> },
    /// Direct product of non-product factors, indexed lexicographically.
    Product(Vec<FiniteGroup>),
}

/// A finite abelian group realized by formula on the index range `[0, order)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    kind: GroupKind,
    order: usize,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.descriptor())
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn guard(order: u128) -> Result<()> {
    if order > max_order() as u128 {
        Err(Error::SizeGuard { order, limit: max_order() })
    } else {
        Ok(())
    }
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        guard(n as u128)?;
        Ok(FiniteGroup { kind: GroupKind::Cyclic(n), order: n })
    }

    pub fn additive(field: &Arc<FiniteField>) -> Self {
        FiniteGroup { kind: GroupKind::Additive(field.clone()), order: field.order() }
    }

    /// The multiplicative group of `field`: cyclic of order q - 1.
    pub fn unit(field: &Arc<FiniteField>) -> Self {
        FiniteGroup { kind: GroupKind::Unit(field.clone()), order: field.order() - 1 }
    }

    /// The order-4^m group on GF(2^m) x GF(2^m) with (a,b)*(c,d) = (a+c, b+d+ac).
    pub fn twisted(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("twisted group needs m >= 1".into()));
        }
        guard(1u128 << (2 * m.min(63)))?;
        let field = Arc::new(FiniteField::new(1u64 << m)?);
        Ok(FiniteGroup { kind: GroupKind::Twisted { m, field }, order: 1 << (2 * m) })
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        Self::product(vec![a.clone(), b.clone()])
    }

    /// Direct product of any number of groups; nested products are flattened.
    pub fn product(factors: Vec<FiniteGroup>) -> Result<Self> {
        let mut flat = Vec::new();
        for f in factors {
            match f.kind {
                GroupKind::Product(inner) => flat.extend(inner),
                _ => flat.push(f),
            }
        }
        let order: u128 = flat.iter().map(|f| f.order as u128).product();
        guard(order)?;
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        if flat.is_empty() {
            return Self::cyclic(1);
        }
        Ok(FiniteGroup { kind: GroupKind::Product(flat), order: order as usize })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Factors of a product, or the group itself.
    pub fn factors(&self) -> &[FiniteGroup] {
        match &self.kind {
            GroupKind::Product(fs) => fs,
            _ => std::slice::from_ref(self),
        }
    }

    /// The field underlying an additive, unit or twisted group.
    pub fn field(&self) -> Option<&Arc<FiniteField>> {
        match &self.kind {
            GroupKind::Additive(f) | GroupKind::Unit(f) | GroupKind::Twisted { field: f, .. } => Some(f),
            _ => None,
        }
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.order && y < self.order);
        match &self.kind {
            GroupKind::Cyclic(n) => {
                let s = x + y;
                if s >= *n {
                    s - n
                } else {
                    s
                }
            }
            GroupKind::Additive(f) => f.add(x as u32, y as u32) as usize,
            GroupKind::Unit(f) => f.mul(x as u32 + 1, y as u32 + 1) as usize - 1,
            GroupKind::Twisted { m, field } => {
                let mask = (1usize << m) - 1;
                let (a, b) = ((x >> m) as u32, (x & mask) as u32);
                let (c, d) = ((y >> m) as u32, (y & mask) as u32);
                let hi = a ^ c;
                let lo = b ^ d ^ field.mul(a, c);
                ((hi as usize) << m) | lo as usize
            }
            GroupKind::Product(fs) => {
                let (mut x, mut y) = (x, y);
                let (mut res, mut place) = (0, 1);
                for f in fs.iter().rev() {
                    let n = f.order;
                    res += f.op(x % n, y % n) * place;
                    place *= n;
                    x /= n;
                    y /= n;
                }
                res
            }
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(n) => (n - x) % n,
            GroupKind::Additive(f) => f.neg(x as u32) as usize,
            GroupKind::Unit(f) => f.inv(x as u32 + 1).expect("unit group element is nonzero") as usize - 1,
            GroupKind::Twisted { m, field } => {
                // (a, b)^-1 = (a, b + a^2)
                let mask = (1usize << m) - 1;
                let a = (x >> m) as u32;
                let b = (x & mask) as u32;
                ((a as usize) << m) | (b ^ field.mul(a, a)) as usize
            }
            GroupKind::Product(fs) => {
                let mut x = x;
                let (mut res, mut place) = (0, 1);
                for f in fs.iter().rev() {
                    let n = f.order;
                    res += f.inv(x % n) * place;
                    place *= n;
                    x /= n;
                }
                res
            }
        }
    }

    /// `x^t` for any integer `t`; negative powers go through the inverse.
    pub fn pow(&self, x: usize, t: i64) -> usize {
        let mut base = if t < 0 { self.inv(x) } else { x };
        let mut k = t.unsigned_abs();
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            k >>= 1;
        }
        acc
    }

    /// Order of the element `x`, found by repeated multiplication.
    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.op(y, x);
            k += 1;
        }
        k
    }

    /// Splits an index into per-factor indices.
    pub fn decompose(&self, x: usize) -> Vec<usize> {
        let fs = self.factors();
        let mut out = vec![0; fs.len()];
        let mut x = x;
        for (slot, f) in out.iter_mut().zip(fs).rev() {
            *slot = x % f.order;
            x /= f.order;
        }
        out
    }

    /// Inverse of [`Self::decompose`].
    pub fn compose(&self, parts: &[usize]) -> Result<usize> {
        let fs = self.factors();
        if parts.len() != fs.len() {
            return Err(Error::InvalidParameter(format!("expected {} components, got {}", fs.len(), parts.len())));
        }
        let mut x = 0;
        for (&p, f) in parts.iter().zip(fs) {
            if p >= f.order {
                return Err(Error::IndexOutOfRange { index: p, order: f.order });
            }
            x = x * f.order + p;
        }
        Ok(x)
    }

    /// Converts the natural label of an element of a non-product group to its
    /// index. Labels are residues, field indices (unit groups: the nonzero
    /// field element itself) or twisted indices.
    pub fn index_of_label(&self, label: usize) -> Result<usize> {
        let idx = match &self.kind {
            GroupKind::Unit(_) => {
                if label == 0 {
                    return Err(Error::InvalidParameter("zero is not a unit".into()));
                }
                label - 1
            }
            GroupKind::Product(_) => return Err(Error::InvalidParameter("product groups have no single label".into())),
            _ => label,
        };
        if idx >= self.order {
            return Err(Error::IndexOutOfRange { index: idx, order: self.order });
        }
        Ok(idx)
    }

    /// Inverse of [`Self::index_of_label`] for non-product groups.
    pub fn label_of_index(&self, idx: usize) -> usize {
        match &self.kind {
            GroupKind::Unit(_) => idx + 1,
            _ => idx,
        }
    }

    /// Builds an element of a product from per-factor labels.
    pub fn from_labels(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.factors().len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} components, got {}",
                self.factors().len(),
                labels.len()
            )));
        }
        let parts = self.factors().iter().zip(labels).map(|(f, &l)| f.index_of_label(l)).collect::<Result<Vec<_>>>()?;
        self.compose(&parts)
    }

    /// Per-factor labels of an element.
    pub fn labels(&self, x: usize) -> Vec<usize> {
        self.decompose(x).iter().zip(self.factors()).map(|(&i, f)| f.label_of_index(i)).collect()
    }

    /// Twisted-group element (a, b) as an index. Panics if `self` is not twisted.
    pub fn twisted_index(&self, a: u32, b: u32) -> usize {
        match &self.kind {
            GroupKind::Twisted { m, .. } => ((a as usize) << m) | b as usize,
            _ => panic!("twisted_index on {self}"),
        }
    }

    /// Twisted-group index as the pair (a, b).
    pub fn twisted_pair(&self, x: usize) -> (u32, u32) {
        match &self.kind {
            GroupKind::Twisted { m, .. } => ((x >> m) as u32, (x & ((1 << m) - 1)) as u32),
            _ => panic!("twisted_pair on {self}"),
        }
    }

    /// Compact text descriptor: factors `z<n>`, `add<q>`, `mul<q>`, `tw<m>`
    /// joined by `x`, e.g. `tw3xz4` or `mul5xmul5xz5xz5`.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic(n) => format!("z{n}"),
            GroupKind::Additive(f) => format!("add{}", f.order()),
            GroupKind::Unit(f) => format!("mul{}", f.order()),
            GroupKind::Twisted { m, .. } => format!("tw{m}"),
            GroupKind::Product(fs) => fs.iter().map(|f| f.descriptor()).collect::<Vec<_>>().join("x"),
        }
    }

    /// Parses a [`Self::descriptor`] string.
    pub fn parse(desc: &str) -> Result<Self> {
        let bad = || Error::InvalidDescriptor(desc.to_string());
        let mut factors = Vec::new();
        for part in desc.trim().to_ascii_lowercase().split('x') {
            let (tag, num) = part.split_at(part.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
            let n: u64 = num.parse().map_err(|_| bad())?;
            let g = match tag {
                "z" => Self::cyclic(n as usize)?,
                "add" => Self::additive(&Arc::new(FiniteField::new(n)?)),
                "mul" => Self::unit(&Arc::new(FiniteField::new(n)?)),
                "tw" => Self::twisted(n as u32)?,
                _ => return Err(bad()),
            };
            factors.push(g);
        }
        Self::product(factors)
    }
}

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validates that `elements` contains the identity and is closed under
    /// the operation and inversion.
    pub fn new(group: &Arc<FiniteGroup>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= group.order()) {
            return Err(Error::IndexOutOfRange { index: x, order: group.order() });
        }
        if elements.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        let sub = Subgroup { group: group.clone(), elements };
        for &x in &sub.elements {
            if !sub.contains(group.inv(x)) {
                return Err(Error::NotASubgroup(format!("inverse of {x} missing")));
            }
            for &y in &sub.elements {
                if !sub.contains(group.op(x, y)) {
                    return Err(Error::NotASubgroup(format!("{x} * {y} not contained")));
                }
            }
        }
        Ok(sub)
    }

    /// The subgroup generated by `gens`.
    pub fn generated_by(group: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut stack = vec![0];
        let mut elements = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                if g >= group.order() {
                    return Err(Error::IndexOutOfRange { index: g, order: group.order() });
                }
                let y = group.op(x, g);
                if !seen[y] {
                    seen[y] = true;
                    elements.push(y);
                    stack.push(y);
                }
            }
        }
        elements.sort_unstable();
        Ok(Subgroup { group: group.clone(), elements })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// True when the only common element is the identity.
    pub fn meets_trivially(&self, other: &Subgroup) -> bool {
        self.elements.iter().filter(|&&x| other.contains(x)).count() == 1
    }
}
