//! Text formats for elements and parameter claims.

use anyhow::{bail, Context, Result};
use num_rational::Ratio;

use cayley_gds::algebra::FiniteGroup;
use cayley_gds::diffsets::GdsParams;

/// `1,2,4` (indices) or `(1,2),(0,3)` (per-factor labels).
pub fn parse_elements(g: &FiniteGroup, text: &str) -> cayley_gds::Result<Vec<usize>> {
    let bad = |m: String| cayley_gds::Error::Parse(m);
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if !text.contains('(') {
        return text
            .split(',')
            .map(|t| {
                let x: usize = t.trim().parse().map_err(|_| bad(format!("bad element {t:?}")))?;
                if x >= g.order() {
                    return Err(cayley_gds::Error::IndexOutOfRange { index: x, order: g.order() });
                }
                Ok(x)
            })
            .collect();
    }
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('(') {
        let end = rest[start..].find(')').ok_or_else(|| bad(format!("unclosed tuple in {text:?}")))? + start;
        let labels = rest[start + 1..end]
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("bad label {t:?}"))))
            .collect::<cayley_gds::Result<Vec<_>>>()?;
        out.push(g.from_labels(&labels)?);
        rest = &rest[end + 1..];
    }
    Ok(out)
}

/// An element as `(l_1,..,l_t)` for products, a bare label otherwise.
pub fn format_labels(g: &FiniteGroup, x: usize) -> String {
    let l = g.labels(x);
    if l.len() == 1 {
        l[0].to_string()
    } else {
        format!("({})", l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn numbers<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().ok().with_context(|| format!("bad number {t:?}")))
        .collect()
}

/// `a/b` or an integer.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
    if b == 0 {
        bail!("zero denominator in {s:?}");
    }
    Ok(Ratio::new(a, b))
}

/// `v,k,lambda` | `m,n,k,lambda` | `v;n_1,..,n_r;k,lambda;lambda_1,..,lambda_r`.
pub fn parse_claim(s: &str) -> Result<GdsParams> {
    if s.contains(';') {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 4 {
            bail!("expected v;n_1,..;k,lambda;lambda_1,.. but got {s:?}");
        }
        let v: usize = parts[0].trim().parse().context("bad v")?;
        let ns: Vec<usize> = numbers(parts[1])?;
        let kl: Vec<i64> = numbers(parts[2])?;
        let ls: Vec<i64> = numbers(parts[3])?;
        if kl.len() != 2 || kl[0] < 0 || ns.len() != ls.len() {
            bail!("malformed claim {s:?}");
        }
        return Ok(GdsParams::generalized(v, &ns, kl[0] as usize, kl[1], &ls));
    }
    let xs: Vec<i64> = numbers(s)?;
    if xs.iter().any(|&x| x < 0) {
        bail!("negative parameter in {s:?}");
    }
    match xs[..] {
        [v, k, l] => Ok(GdsParams::difference_set(v as usize, k as usize, l)),
        [m, n, k, l] => Ok(GdsParams::relative(m as usize, n as usize, k as usize, l)),
        _ => bail!("expected 3 or 4 numbers, or the ';' form, in {s:?}"),
    }
}
