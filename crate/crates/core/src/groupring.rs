//! The integer group ring Z[G].
//!
//! Elements are dense coefficient vectors indexed by group element. Products
//! only visit the supports of their operands, which in every construction here
//! are of size about sqrt(|G|).

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A formal sum `sum a_g g` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<i64>,
}

/// Outcome of a coverage test `G <= A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covered: bool,
    /// Indices with coefficient below 1, ascending.
    pub uncovered: Vec<usize>,
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupRingElement {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        GroupRingElement { group: group.clone(), coeffs: vec![0; group.order()] }
    }

    /// `c * e`.
    pub fn scalar(group: &Arc<FiniteGroup>, c: i64) -> Self {
        let mut z = Self::zero(group);
        z.coeffs[0] = c;
        z
    }

    /// The whole group `G` as the sum of all its elements.
    pub fn whole(group: &Arc<FiniteGroup>) -> Self {
        GroupRingElement { group: group.clone(), coeffs: vec![1; group.order()] }
    }

    /// A multiset of elements; each coefficient is the multiplicity.
    pub fn from_subset(group: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        let mut z = Self::zero(group);
        for &x in elements {
            let slot = z.coeffs.get_mut(x).ok_or(Error::IndexOutOfRange { index: x, order: group.order() })?;
            *slot += 1;
        }
        Ok(z)
    }

    pub fn from_subgroup(n: &Subgroup) -> Self {
        Self::from_subset(n.group(), n.elements()).expect("subgroup indices are in range")
    }

    pub fn from_coefficients(group: &Arc<FiniteGroup>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(GroupRingElement { group: group.clone(), coeffs })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> i64 {
        self.coeffs[g]
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    /// Sum of all coefficients.
    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::CoefficientOverflow))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, c: i64) -> Result<Self> {
        let coeffs =
            self.coeffs.iter().map(|a| a.checked_mul(c).ok_or(Error::CoefficientOverflow)).collect::<Result<_>>()?;
        Ok(GroupRingElement { group: self.group.clone(), coeffs })
    }

    /// Convolution: the coefficient of `g` is `sum_h a_h b_{h^-1 g}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let g = &self.group;
        let right: Vec<(usize, i64)> =
            other.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        let mut out = vec![0i64; g.order()];
        for (h, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(k, b) in &right {
                let slot = &mut out[g.op(h, k)];
                let term = a.checked_mul(b).ok_or(Error::CoefficientOverflow)?;
                *slot = slot.checked_add(term).ok_or(Error::CoefficientOverflow)?;
            }
        }
        Ok(GroupRingElement { group: g.clone(), coeffs: out })
    }

    /// `A^(t) = sum a_g g^t`, accumulating collisions.
    pub fn power_image(&self, t: i64) -> Self {
        let mut out = vec![0i64; self.group.order()];
        for (g, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                out[self.group.pow(g, t)] += a;
            }
        }
        GroupRingElement { group: self.group.clone(), coeffs: out }
    }

    /// `A^(-1)`.
    pub fn inv_image(&self) -> Self {
        let mut out = vec![0i64; self.group.order()];
        for (g, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                out[self.group.inv(g)] += a;
            }
        }
        GroupRingElement { group: self.group.clone(), coeffs: out }
    }

    /// Coefficientwise `self <= other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_group(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }

    /// Whether every element of the group has coefficient at least 1.
    pub fn covers_group(&self) -> Coverage {
        let uncovered: Vec<usize> = self.coeffs.iter().enumerate().filter(|(_, &c)| c < 1).map(|(i, _)| i).collect();
        Coverage { covered: uncovered.is_empty(), uncovered }
    }

    /// `index:coefficient` lines for nonzero coefficients, by ascending index.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                writeln!(s, "{i}:{c}").unwrap();
            }
        }
        s
    }
}
