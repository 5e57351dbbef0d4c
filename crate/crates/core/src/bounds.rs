//! Closed-form upper bounds for the degree/diameter problem and tables that
//! compare them with certified constructions. All arithmetic is exact.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::CayleyCertificate;

/// Moore bound `1 + d((d-1)^k - 1)/(d - 2)` for `d > 2`, `2k + 1` for `d = 2`.
pub fn moore(d: u64, k: u32) -> u128 {
    match d {
        0 => 1,
        1 => 2,
        2 => 2 * k as u128 + 1,
        _ => {
            let d = d as u128;
            1 + d * ((d - 1).pow(k) - 1) / (d - 2)
        }
    }
}

/// Counting bound for abelian Cayley graphs of diameter 2: `floor(d^2/2) + d + 1`.
pub fn ac_upper(d: u64) -> u128 {
    let d = d as u128;
    d * d / 2 + d + 1
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Lattice-covering bound for abelian Cayley graphs of degree `2 delta` and
/// diameter `k`: `sum_{i=0}^{delta} 2^i C(delta, i) C(k, i)`.
pub fn df_upper(delta: u64, k: u64) -> u128 {
    (0..=delta).map(|i| (1u128 << i) * binomial(delta, i) * binomial(k, i)).sum()
}

/// One line of the comparison table (diameter 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub degree: u64,
    pub diameter: u32,
    pub moore: u128,
    pub ac_upper: u128,
    /// Only for even degree.
    pub df_upper: Option<u128>,
    /// Largest certified order at this degree.
    pub best_order: Option<usize>,
    pub construction: Option<String>,
}

/// One row per degree in `degrees`, filled with the largest certified
/// diameter-2 order at that degree. A certificate above an upper bound is a
/// hard error.
pub fn table(degrees: impl IntoIterator<Item = u64>, certificates: &[CayleyCertificate]) -> Result<Vec<BoundRow>> {
    if let Some(c) = certificates.iter().find(|c| !c.is_verified()) {
        return Err(Error::InvalidParameter(format!("unverified certificate for {}", c.group)));
    }
    let mut rows = Vec::new();
    for d in degrees {
        let best = certificates.iter().filter(|c| c.degree as u64 == d && c.diameter == 2).max_by_key(|c| c.order);
        let row = BoundRow {
            degree: d,
            diameter: 2,
            moore: moore(d, 2),
            ac_upper: ac_upper(d),
            df_upper: (d % 2 == 0).then(|| df_upper(d / 2, 2)),
            best_order: best.map(|c| c.order),
            construction: best.map(|c| format!("{}({})", c.provenance.builder, c.provenance.parameters)),
        };
        if let Some(v) = row.best_order {
            let v = v as u128;
            if v > row.ac_upper || row.ac_upper > row.moore {
                return Err(Error::BoundViolation {
                    degree: d as usize,
                    detail: format!("order {v}, abelian bound {}, Moore bound {}", row.ac_upper, row.moore),
                });
            }
            if row.df_upper.is_some_and(|df| v > df) {
                return Err(Error::BoundViolation {
                    degree: d as usize,
                    detail: format!("order {v} above the lattice bound"),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Tab-separated rendering with a fixed header; blanks are `-`.
pub fn render_table(rows: &[BoundRow]) -> String {
    let mut s = String::from("degree\tdiameter\tmoore\tac_upper\tdf_upper\tbest_order\tconstruction\n");
    let dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    for r in rows {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.degree,
            r.diameter,
            r.moore,
            r.ac_upper,
            dash(r.df_upper.map(|v| v.to_string())),
            dash(r.best_order.map(|v| v.to_string())),
            dash(r.construction.clone())
        )
        .unwrap();
    }
    s
}
