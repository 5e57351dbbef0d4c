//! `cayley-gds`: build, verify and tabulate diameter-2 abelian Cayley graphs.

mod input;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use cayley_gds::algebra::{set_max_order, FiniteGroup, Subgroup};
use cayley_gds::bounds;
use cayley_gds::constructions::{
    build_construction1, build_construction1_unchecked, build_construction2, build_example31, pad_to_degree,
    GeneratingSpec,
};
use cayley_gds::covering::{self, check_cover, neofield_config, neofield_config_literal, SearchBounds};
use cayley_gds::diffsets::{check_type_equation, verify_gds, GdsDescriptor, PlaneType};
use cayley_gds::graph::{export_certificate, export_edges, CayleyCertificate};
use cayley_gds::Error;

#[derive(Parser)]
#[command(name = "cayley-gds", version, about = "Large Cayley graphs of diameter 2 from generalized difference sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionName {
    /// Direct product difference set with H = Z6.
    Example31,
    /// Neofield construction with H = Z5 x Z5 (needs --q).
    Neofield,
    /// Relative difference set in the twisted group with H = Z4 (needs --m).
    Rds4,
}

#[derive(Subcommand)]
enum Command {
    /// Build a generating set, verify its diameter and write a certificate.
    Build {
        #[arg(long, value_enum)]
        construction: ConstructionName,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        m: Option<u32>,
        /// Use the original, uncorrected covering configuration for the neofield construction.
        #[arg(long)]
        use_literal_paper_config: bool,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Edge list output path.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Verify a difference set claim or a certificate.
    Verify {
        /// Group descriptor, e.g. `z7`, `add5xmul5`, `tw3`.
        #[arg(long)]
        group: Option<String>,
        /// Elements as indices `1,2,4` or label tuples `(1,2),(3,4)`.
        #[arg(long)]
        set: Option<String>,
        /// Exceptional subgroup elements; repeat for several subgroups.
        #[arg(long = "subgroup")]
        subgroups: Vec<String>,
        /// `v,k,lambda`, `m,n,k,lambda` or `v;n_1,..;k,lambda;lambda_1,..`.
        #[arg(long)]
        claim: Option<String>,
        /// Also check the group-ring equations of plane type I..V.
        #[arg(long = "type")]
        plane_type: Option<PlaneType>,
        /// Write the structured report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Re-verify a certificate instead.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Search abelian groups H for covering configurations.
    Search {
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest |Psi|.
        #[arg(long, default_value_t = 1)]
        psi: usize,
        /// Largest |Lambda_i|.
        #[arg(long, default_value_t = 2)]
        theta: usize,
        /// Only report groups with a configuration scoring above this ratio, e.g. `25/64`.
        #[arg(long)]
        above: Option<String>,
        /// Full tab-separated results.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate upper bounds against certified orders.
    Bounds {
        /// A degree or range `lo:hi`.
        #[arg(long)]
        d: String,
        /// Directory of certificates (`*.toml`).
        #[arg(long)]
        certs: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pad a certified generating set to a larger degree.
    Pad {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Re-verify a certificate and write its edge list.
    Export {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        edges: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when a requested verification fails.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { construction, q, m, use_literal_paper_config, out, edges, max_order } => {
            if let Some(n) = max_order {
                set_max_order(n);
            }
            cmd_build(construction, q, m, use_literal_paper_config, out.as_deref(), edges.as_deref())
        }
        Command::Verify { group, set, subgroups, claim, plane_type, report, cert, max_order } => {
            if let Some(n) = max_order {
                set_max_order(n);
            }
            match cert {
                Some(path) => cmd_verify_cert(&path),
                None => {
                    let group = group.context("--group is required without --cert")?;
                    let set = set.context("--set is required without --cert")?;
                    let claim = claim.context("--claim is required without --cert")?;
                    cmd_verify(&group, &set, &subgroups, &claim, plane_type, report.as_deref())
                }
            }
        }
        Command::Search { max_order, k, psi, theta, above, out } => {
            let threshold = above.map(|a| input::parse_ratio(&a)).transpose().context("parsing --above")?;
            cmd_search(SearchBounds { max_order, k, max_psi: psi, max_theta: theta }, threshold, out.as_deref())
        }
        Command::Bounds { d, certs, out } => cmd_bounds(&d, certs.as_deref(), out.as_deref()),
        Command::Pad { cert, d, out, edges } => cmd_pad(&cert, d, &out, edges.as_deref()),
        Command::Export { cert, edges } => {
            let c = load_verified(&cert)?;
            export_edges(&c, &edges)?;
            println!("wrote {} edges to {}", c.order * c.degree / 2, edges.display());
            Ok(true)
        }
    }
}

fn summarize(c: &CayleyCertificate) -> String {
    let mut s = String::new();
    writeln!(s, "construction: {} ({})", c.provenance.builder, c.provenance.parameters).unwrap();
    writeln!(s, "group: {}", c.group).unwrap();
    writeln!(s, "order: {}", c.order).unwrap();
    match c.claimed_degree {
        Some(cd) => writeln!(s, "degree: {} (claimed {cd})", c.degree).unwrap(),
        None => writeln!(s, "degree: {}", c.degree).unwrap(),
    }
    writeln!(s, "diameter: {} [{}]", c.diameter, c.methods.join(", ")).unwrap();
    for n in &c.provenance.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    s
}

fn write_outputs(c: &CayleyCertificate, out: Option<&Path>, edges: Option<&Path>) -> Result<()> {
    if let Some(p) = out {
        export_certificate(c, p).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = edges {
        export_edges(c, p).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn cmd_build(
    which: ConstructionName,
    q: Option<u64>,
    m: Option<u32>,
    literal: bool,
    out: Option<&Path>,
    edges: Option<&Path>,
) -> Result<bool> {
    let need_q = || q.context("--q is required for this construction");
    let spec: GeneratingSpec = match which {
        ConstructionName::Example31 => build_example31(need_q()?)?,
        ConstructionName::Rds4 => build_construction2(m.context("--m is required for rds4")?)?,
        ConstructionName::Neofield if literal => {
            let q = need_q()?;
            let config = neofield_config_literal();
            let cov = check_cover(&config)?;
            if cov.covered {
                build_construction1(q, &config)?
            } else {
                let h = config.group();
                let missing: Vec<String> = cov.uncovered.iter().map(|&x| input::format_labels(h, x)).collect();
                println!("covering check FAILED for the uncorrected configuration");
                println!("uncovered in {}: {}", h.descriptor(), missing.join(" "));
                let spec = build_construction1_unchecked(q, &config)?;
                let c = spec.certify()?;
                print!("{}", summarize(&c));
                write_outputs(&c, out, edges)?;
                return Ok(false);
            }
        }
        ConstructionName::Neofield => build_construction1(need_q()?, &neofield_config())?,
    };
    let c = spec.certify()?;
    print!("{}", summarize(&c));
    write_outputs(&c, out, edges)?;
    Ok(c.diameter == 2)
}

fn cmd_verify_cert(path: &Path) -> Result<bool> {
    let c = CayleyCertificate::load(path).with_context(|| format!("reading {}", path.display()))?;
    match c.reverify() {
        Ok(fresh) => {
            print!("{}", summarize(&fresh));
            println!("certificate ok");
            Ok(true)
        }
        Err(e) => {
            println!("certificate FAILED: {e}");
            Ok(false)
        }
    }
}

fn cmd_verify(
    group: &str,
    set: &str,
    subgroups: &[String],
    claim: &str,
    plane_type: Option<PlaneType>,
    report: Option<&Path>,
) -> Result<bool> {
    let g = Arc::new(FiniteGroup::parse(group)?);
    let d = input::parse_elements(&g, set).context("parsing --set")?;
    let subs = subgroups
        .iter()
        .map(|s| Subgroup::new(&g, input::parse_elements(&g, s)?))
        .collect::<cayley_gds::Result<Vec<_>>>()
        .context("parsing --subgroup")?;
    let params = input::parse_claim(claim).context("parsing --claim")?;
    let desc = GdsDescriptor::new(&g, d, subs, params)?;
    let rep = verify_gds(&desc)?;
    println!("claim: {}", desc.params());
    println!("measured: k = {}, lambda = {}", rep.measured_k, rep.measured_lambda);
    for (i, l) in rep.measured_lambda_i.iter().enumerate() {
        println!("measured: lambda_{} = {l}", i + 1);
    }
    let mut text = rep.to_text();
    let mut ok = rep.ok;
    for w in &rep.witnesses {
        let at = w.element.map_or("-".to_string(), |e| input::format_labels(&g, e));
        println!("witness: {} at {at}: measured {} expected {}", w.relation, w.measured, w.expected);
    }
    if let Some(ty) = plane_type {
        let t = check_type_equation(&desc, ty)?;
        for w in &t.witnesses {
            let at = w.element.map_or("-".to_string(), |e| input::format_labels(&g, e));
            println!("witness ({ty:?}): {} at {at}: measured {} expected {}", w.relation, w.measured, w.expected);
        }
        println!("type {ty:?} equations: {}", if t.ok { "ok" } else { "FAILED" });
        ok &= t.ok;
        text.push_str(&format!("\n[type_{ty:?}]\n"));
        text.push_str(&t.to_text());
    }
    println!("{}", if ok { "ok" } else { "FAILED" });
    if let Some(p) = report {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ok)
}

fn cmd_search(b: SearchBounds, threshold: Option<Ratio<u64>>, out: Option<&Path>) -> Result<bool> {
    let hits = match threshold {
        Some(t) => covering::search_above(b, t)?,
        None => covering::search_cover(b)?,
    };
    let table = covering::results_table(&hits, b.k);
    if let Some(p) = out {
        std::fs::write(p, &table).with_context(|| format!("writing {}", p.display()))?;
    }
    let mut lines = table.lines();
    println!("{}", lines.next().unwrap_or_default());
    for l in lines.take(10) {
        println!("{l}");
    }
    match threshold {
        Some(t) => println!("groups with a configuration scoring above {}/{}: {}", t.numer(), t.denom(), hits.len()),
        None => println!("groups with a covering configuration: {}", hits.len()),
    }
    if let Some(best) = hits.first() {
        let s = best.config.score();
        println!("best score: {}/{} in {}", s.numer(), s.denom(), best.config.group().descriptor());
    }
    Ok(true)
}

fn parse_degrees(spec: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let (lo, hi) = match spec.split_once(':') {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let d = spec.trim().parse()?;
            (d, d)
        }
    };
    if lo > hi {
        bail!("empty degree range {spec}");
    }
    Ok(lo..=hi)
}

fn load_verified(path: &Path) -> Result<CayleyCertificate> {
    let c = CayleyCertificate::load(path).with_context(|| format!("reading {}", path.display()))?;
    c.reverify().with_context(|| format!("re-verifying {}", path.display()))
}

fn cmd_bounds(d: &str, certs: Option<&Path>, out: Option<&Path>) -> Result<bool> {
    let degrees = parse_degrees(d)?;
    let mut loaded = Vec::new();
    if let Some(dir) = certs {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "toml"));
        paths.sort();
        for p in paths {
            loaded.push(load_verified(&p)?);
        }
    }
    let rows = match bounds::table(degrees, &loaded) {
        Ok(r) => r,
        Err(e @ Error::BoundViolation { .. }) => {
            println!("bound violation: {e}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let text = bounds::render_table(&rows);
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(true)
}

fn cmd_pad(cert: &Path, d: usize, out: &Path, edges: Option<&Path>) -> Result<bool> {
    let c = load_verified(cert)?;
    let spec = GeneratingSpec::from_certificate(&c)?;
    let padded = pad_to_degree(&spec, d)?.certify()?;
    print!("{}", summarize(&padded));
    write_outputs(&padded, Some(out), edges)?;
    Ok(padded.diameter <= 2 && c.diameter <= 2)
}
