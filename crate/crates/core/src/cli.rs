//! Command-line front end. Every command prints one JSON report; exit code 0
//! means all checks passed, 1 a mathematical check failed, 2 a usage or I/O
//! error.

use crate::exactla::rank_of_sums;
use crate::graphops::{self, gra_delta, Gra, GraphSum};
use crate::mixed::cc_minus;
use crate::operad::{check_associativity, check_dg, check_rotational, grav_dim, ger_mixed_complex, ConcreteGer, Operad};
use crate::poly::{gra_act, vkgra_act, Polyvector};
use crate::treeops::{enumerate_m, m_circ_dims, m_circ_homology_dims, m_homology_dims, MOperad, DEFAULT_BOUND};
use crate::twist::{check_tw_square, ger_to_graphs_check, tw_gra, tw_graphs_to_json};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const CACHE_ENV: &str = "OPCYC_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "opcyc", version, about = "Dimension tables, homology and law checks for operads in mixed complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Ignore the disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded dimensions of a named object.
    Dims(TableArgs),
    /// Homology dimensions.
    Homology(TableArgs),
    /// Run one named check.
    Verify(VerifyArgs),
    /// Apply a graph to polyvector inputs.
    Act(ActArgs),
    /// Dump a basis as JSON.
    Export(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "Ger")]
    Ger,
    #[value(name = "Grav")]
    Grav,
    #[value(name = "M")]
    M,
    #[value(name = "Mcirc")]
    Mcirc,
    #[value(name = "Gra")]
    Gra,
    #[value(name = "vKGra")]
    VkGra,
    #[value(name = "TwGra")]
    TwGra,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long)]
    pub arity: usize,
    /// Power of u kept in CC⁻, or K internal vertices for TwGra.
    #[arg(long, default_value_t = 4)]
    pub trunc: usize,
    #[arg(long, default_value_t = 3)]
    pub max_edges: usize,
    /// Number of type-II vertices (vKGra).
    #[arg(long, default_value_t = 1)]
    pub boundary: u8,
    /// Enumeration bound on non-root black vertices of M.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    #[arg(long)]
    pub by_degree: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub table: TableArgs,
    #[arg(long)]
    pub check: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ActArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub inputs: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

/// Exit code and report of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub report: Value,
}

impl Outcome {
    fn verdict(pass: bool, report: Value) -> Self {
        Outcome { code: if pass { 0 } else { 1 }, report }
    }
}

fn table(by: &BTreeMap<i64, usize>, with_degrees: bool) -> Value {
    let total: usize = by.values().sum();
    if with_degrees {
        let degs: serde_json::Map<String, Value> = by.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({"total": total, "by_degree": degs})
    } else {
        json!({"total": total})
    }
}

fn unsupported(what: &str, t: Target) -> CliError {
    CliError::Usage(format!("{what} is not available for {t:?}"))
}

fn gra_dims(n: usize, max_edges: usize) -> BTreeMap<i64, usize> {
    let mut by = BTreeMap::new();
    for g in (Gra { max_edges }).basis(n) {
        *by.entry(g.degree()).or_insert(0) += 1;
    }
    by
}

fn dims(a: &TableArgs) -> Result<Outcome, CliError> {
    let by = match a.target {
        Target::Ger => ConcreteGer::dims_by_degree(a.arity),
        Target::Grav => BTreeMap::from([(0, grav_dim(a.arity))]),
        Target::M => enumerate_m(a.arity, a.bound, None).map_err(|e| CliError::Usage(e.to_string()))?.dims_by_degree(),
        Target::Mcirc => m_circ_dims(a.arity, a.bound).map_err(|e| CliError::Usage(e.to_string()))?,
        Target::Gra => gra_dims(a.arity, a.max_edges),
        Target::TwGra => {
            let gra = Gra { max_edges: a.max_edges };
            let tw = tw_gra(&gra, a.trunc);
            let levels: Vec<usize> = (0..=a.trunc).map(|k| tw.basis(a.arity, k).len()).collect();
            let total: usize = levels.iter().sum();
            return Ok(Outcome { code: 0, report: json!({"total": total, "levels": levels}) });
        }
        Target::VkGra => return Err(unsupported("dims", a.target)),
    };
    Ok(Outcome { code: 0, report: table(&by, a.by_degree) })
}

fn homology(a: &TableArgs) -> Result<Outcome, CliError> {
    let by = match a.target {
        Target::M => m_homology_dims(a.arity),
        Target::Mcirc => m_circ_homology_dims(a.arity, a.bound).map_err(|e| CliError::Usage(e.to_string()))?,
        // HC⁻ of (Ger, 0, R) at the given truncation
        Target::Ger => cc_minus(&ger_mixed_complex(a.arity), a.trunc).homology(),
        _ => return Err(unsupported("homology", a.target)),
    };
    Ok(Outcome { code: 0, report: table(&by, true) })
}

fn report_json(r: &crate::operad::Report, timing: bool) -> Value {
    if timing {
        r.to_json()
    } else {
        r.to_json_untimed()
    }
}

fn verify(v: &VerifyArgs, seed: u64, timing: bool) -> Result<Outcome, CliError> {
    let a = &v.table;
    let n = a.arity;
    match (a.target, v.check.as_str()) {
        (Target::Mcirc, "homology-vs-grav") => {
            let h: usize = m_circ_homology_dims(n, a.bound).map_err(|e| CliError::Usage(e.to_string()))?.values().sum();
            let g = grav_dim(n);
            Ok(Outcome::verdict(h == g, json!({"dim_H_Mcirc": h, "dim_Grav": g})))
        }
        (Target::M, "homology") => {
            let h: usize = m_homology_dims(n).values().sum();
            let fact: usize = (1..=n).product();
            Ok(Outcome::verdict(h == fact, json!({"dim_H_M": h, "factorial": fact})))
        }
        (Target::M, "rotational") | (Target::M, "dg") => {
            let elems: Vec<_> = (1..=n).flat_map(|k| enumerate_m(k, usize::MAX, None).expect("unbounded").labels().to_vec()).map(crate::FormalSum::term).collect();
            let r = if v.check == "dg" {
                check_dg(&MOperad, &elems)
            } else {
                check_rotational(&MOperad, |x| MOperad.rho(x).expect("M is rotational"), &elems)
            };
            Ok(Outcome::verdict(r.pass(), report_json(&r, timing)))
        }
        (Target::Ger, "r-exact") => {
            let basis = ConcreteGer::basis(n);
            let imgs: Vec<GraphSum> = basis.iter().map(|b| gra_delta(b).expect("tadpole-free")).collect();
            let (dim, rank) = (rank_of_sums(&basis), rank_of_sums(&imgs));
            Ok(Outcome::verdict(rank == dim - rank, json!({"rank_R": rank, "dim_ker_R": dim - rank})))
        }
        (Target::Ger, "hc-minus") => {
            let mx = ger_mixed_complex(n);
            let h0 = cc_minus(&mx, a.trunc).total_homology();
            let h1 = cc_minus(&mx, a.trunc + 1).total_homology();
            let g = grav_dim(n);
            Ok(Outcome::verdict(h0 == g && h1 == g, json!({"dim_HC_minus": h0, "dim_HC_minus_next": h1, "dim_Grav": g})))
        }
        (Target::Gra, "tadpole") => {
            let gra = Gra { max_edges: a.max_edges };
            let (mut checked, mut residues, mut nonzero_sq) = (0, 0, 0);
            for m in 1..=n {
                for g in gra.basis(m) {
                    checked += 1;
                    match gra_delta(&crate::FormalSum::term(g)) {
                        Ok(d) => {
                            if !gra_delta(&d).map(|dd| dd.is_zero()).unwrap_or(false) {
                                nonzero_sq += 1;
                            }
                        }
                        Err(_) => residues += 1,
                    }
                }
            }
            let pass = residues == 0 && nonzero_sq == 0;
            Ok(Outcome::verdict(pass, json!({"checked": checked, "tadpole_residues": residues, "delta_squared_nonzero": nonzero_sq})))
        }
        (Target::Gra, "associativity") => {
            let gra = Gra { max_edges: a.max_edges };
            let elems: Vec<GraphSum> = (1..=n).flat_map(|m| gra.basis(m)).map(crate::FormalSum::term).collect();
            let r = check_associativity(&gra, &elems);
            Ok(Outcome::verdict(r.pass(), report_json(&r, timing)))
        }
        (Target::VkGra, "sigma") => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nb = a.boundary;
            let mut failures = Vec::new();
            for _ in 0..v.samples {
                let x = graphops::random_vkgra(&mut rng, n as u8, nb, a.max_edges, 1);
                let period = graphops::vkgra_sigma_pow(&x, nb as usize + 1) == x;
                let commutes = graphops::vkgra_sigma(&graphops::vkgra_differential(&x)) == graphops::vkgra_differential(&graphops::vkgra_sigma(&x));
                if !(period && commutes) {
                    failures.push(graphops::sum_to_json(&x));
                }
            }
            Ok(Outcome::verdict(failures.is_empty(), json!({"checked": v.samples, "failures": failures})))
        }
        (Target::TwGra, "d-squared") => {
            let gra = Gra { max_edges: a.max_edges };
            let tw = tw_gra(&gra, a.trunc);
            let reps: Vec<_> = (1..=n).map(|m| check_tw_square(&tw, m)).collect();
            let pass = reps.iter().all(|r| r.pass());
            Ok(Outcome::verdict(pass, serde_json::to_value(&reps).expect("serializes")))
        }
        (Target::TwGra, "ger-cycles") => {
            let r = ger_to_graphs_check(n);
            Ok(Outcome::verdict(r.pass(), serde_json::to_value(&r).expect("serializes")))
        }
        (t, c) => Err(CliError::Usage(format!("unknown check {c:?} for {t:?}"))),
    }
}

fn read_json(p: &PathBuf) -> Result<Value, CliError> {
    let s = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&s).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
}

fn act(a: &ActArgs) -> Result<Outcome, CliError> {
    let g = graphops::sum_from_json(&read_json(&a.graph)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let inputs = match read_json(&a.inputs)? {
        Value::Array(xs) => xs,
        other => vec![other],
    };
    let xs: Vec<Polyvector> = inputs.iter().map(Polyvector::from_json).collect::<Result<_, _>>().map_err(|e| CliError::Usage(e.to_string()))?;
    let plain = g.keys().all(|h| h.n == 0 && h.v.iter().all(|&p| p == 0));
    let report = if plain {
        gra_act(&g, &xs).map_err(|e| CliError::Usage(e.to_string()))?.to_json()
    } else {
        vkgra_act(&g, &xs).map_err(|e| CliError::Usage(e.to_string()))?.to_json()
    };
    Ok(Outcome { code: 0, report })
}

fn export(a: &TableArgs) -> Result<Outcome, CliError> {
    let report = match a.target {
        Target::Ger => Value::Array(ConcreteGer::basis(a.arity).iter().map(graphops::sum_to_json).collect()),
        Target::Gra => {
            let gra = Gra { max_edges: a.max_edges };
            Value::Array(gra.basis(a.arity).iter().map(|g| g.to_json(1)).collect())
        }
        Target::M => {
            let b = enumerate_m(a.arity, a.bound, None).map_err(|e| CliError::Usage(e.to_string()))?;
            Value::Array(b.labels().iter().map(|t| t.to_json()).collect())
        }
        Target::TwGra => {
            let gra = Gra { max_edges: a.max_edges };
            let tw = tw_gra(&gra, a.trunc);
            let levels: Vec<Value> = (0..=a.trunc)
                .map(|k| {
                    let mut s = crate::FormalSum::zero();
                    for t in tw.basis(a.arity, k) {
                        s.add_int(t, 1);
                    }
                    tw_graphs_to_json(&s)
                })
                .collect();
            Value::Array(levels)
        }
        t => return Err(unsupported("export", t)),
    };
    Ok(Outcome { code: 0, report })
}

/// Runs one job without touching the cache.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cyclic = match &cli.command {
        Command::Homology(a) => a.target == Target::Ger && a.trunc == 0,
        Command::Verify(v) => v.check == "hc-minus" && v.table.trunc == 0,
        _ => false,
    };
    if cyclic {
        return Err(CliError::Usage("the u-truncation must be at least 1".into()));
    }
    match &cli.command {
        Command::Dims(a) => dims(a),
        Command::Homology(a) => homology(a),
        Command::Verify(v) => verify(v, cli.seed, cli.timing),
        Command::Act(a) => act(a),
        Command::Export(a) => export(a),
    }
}

/// Content address of a job: crate version, command, parameters and seed.
pub fn cache_key(cli: &Cli) -> Option<String> {
    let desc = match &cli.command {
        Command::Act(_) => return None,
        c => format!("{}|{c:?}|{}", env!("CARGO_PKG_VERSION"), cli.seed),
    };
    let digest = Sha256::digest(desc.as_bytes());
    Some(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Runs a job through the cache directory named by `OPCYC_CACHE_DIR`, if set.
pub fn run_cached(cli: &Cli) -> Result<Outcome, CliError> {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let key = cache_key(cli);
    let path = match (dir, key, cli.no_cache || cli.timing) {
        (Some(d), Some(k), false) => Some(d.join(format!("{k}.json"))),
        _ => None,
    };
    if let Some(p) = &path {
        if let Ok(s) = std::fs::read_to_string(p) {
            if let Ok(v) = serde_json::from_str::<Value>(&s) {
                if let (Some(code), Some(report)) = (v["code"].as_u64(), v.get("report")) {
                    return Ok(Outcome { code: code as u8, report: report.clone() });
                }
            }
        }
    }
    let out = run(cli)?;
    if let Some(p) = &path {
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let body = json!({"code": out.code, "report": out.report});
        std::fs::write(p, body.to_string()).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(out)
}

/// Parses `args`, runs the job, writes the report, and returns the exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cached(&cli) {
        Ok(out) => {
            let text = format!("{}\n", out.report);
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            out.code
        }
        Err(CliError::Usage(m)) | Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            2
        }
    }
}
