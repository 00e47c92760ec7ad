//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{
    count_class, enumerate_conditional, enumerate_delta_class, for_each_member,
    interchange_connected, DEFAULT_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Distortion};
use crate::maxent::{barvinok_bounds, solve_maxent, SolverOptions};
use crate::probability::{
    delta_class_prob_exact, delta_class_prob_lower, family_d_graph, log_graph_prob,
    typeclass_point_prob, typeclass_prob_bounds, sanov_bounds, FamilyDParams,
};
use crate::rd::{
    build_cover_random, class_members, cover_pool, delta_class_cardinality_bounds, exact_rn,
    exact_rn_prob, high_prob_set_lower, lemma_ln_m, rd_lower, rd_upper, smallest_covering_m,
    verify_cover, TypeCache,
};
use crate::types::{
    components_from_structure, invariant_positions, normalize, structure_matrix, EdgeType,
};
use crate::verify::{run_criterion, VerifyConfig, CRITERIA};

#[derive(Parser, Debug)]
#[command(name = "edgetype", version, about = "Edge-type classes of directed graphs")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Solver tolerance on the margins residual.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Largest vertex count for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    pub limit: usize,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct TypeArg {
    /// Edge type as a JSON file or inline JSON `{"r":[..],"c":[..],"w":..}`.
    #[arg(long = "type")]
    pub ty: String,
    /// Restriction graph overriding the one in the type.
    #[arg(long)]
    pub w: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Nonemptiness of the class, with a witness.
    Feasible(TypeArg),
    /// Sort degrees non-increasingly.
    Normalize(TypeArg),
    /// Structure matrix of a normalized type.
    Structure(TypeArg),
    /// Cells fixed across the class.
    Invariants(TypeArg),
    /// Component partition of the cell grid.
    Components(TypeArg),
    /// Exact class size.
    Count(TypeArg),
    /// Every member, one JSON graph per line.
    Enumerate(TypeArg),
    /// Connectivity of the class under 2x2 interchanges.
    InterchangeCheck(TypeArg),
    /// Maximum-entropy product random graph of a type.
    Maxent(TypeArg),
    /// Entropy bounds on class and delta-class sizes.
    Bounds {
        #[command(flatten)]
        t: TypeArg,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        delta_hat: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        #[arg(long)]
        dens: Option<usize>,
    },
    /// Point and class probability under a logistic-family graph.
    Prob {
        #[command(flatten)]
        t: TypeArg,
        /// Family parameters as JSON `{"a":[..],"b":[..],"w":..}`.
        #[arg(long)]
        params: String,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Bounds on the probability of a union of classes.
    Sanov {
        #[arg(long)]
        params: String,
        /// JSON array of types.
        #[arg(long)]
        types: String,
    },
    /// Delta class of a type.
    Delta {
        #[command(flatten)]
        t: TypeArg,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        dens: Option<usize>,
    },
    /// Graphs `H` with `G xor H` in the class.
    Conditional {
        #[command(flatten)]
        t: TypeArg,
        #[arg(long)]
        graph: String,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        dens: Option<usize>,
    },
    /// Local distortion between two graphs.
    Distortion {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        other: String,
    },
    /// Random covering codebooks over a seed sweep.
    Cover {
        #[command(flatten)]
        t: TypeArg,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        dens: Option<usize>,
        /// Codebook draws; defaults to the covering bound.
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 16)]
        seeds: u64,
    },
    /// Upper and lower rate-distortion bounds.
    RdBounds {
        #[command(flatten)]
        t: TypeArg,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.25)]
        delta_hat: f64,
        #[arg(long)]
        dens: Option<usize>,
    },
    /// Exact minimum codebook for a class, or for a random graph with `--params`.
    RnExact {
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long)]
        params: Option<String>,
        /// Distortion numerator `k` in `k / n`.
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Run every self-check.
    VerifyAll {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
    },
}

/// Reads a JSON argument given inline or as a path.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn load_type(a: &TypeArg) -> Result<EdgeType> {
    let mut t = EdgeType::from_json(&read_json_arg(&a.ty)?)?;
    if let Some(w) = &a.w {
        t.w = DiGraph::restriction_from_json(&read_json_arg(w)?, t.n())?;
    }
    Ok(t)
}

fn load_graph(arg: &str) -> Result<DiGraph> {
    DiGraph::from_json(&read_json_arg(arg)?)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Result of a subcommand before it is written out.
enum Output {
    Json(Value),
    Lines(Vec<Value>),
    Table(Vec<String>, Vec<Vec<String>>),
}

struct Run {
    out: Output,
    code: i32,
}

impl Run {
    fn ok(v: Value) -> Self {
        Run { out: Output::Json(v), code: 0 }
    }
}

fn matrix(g: &DiGraph) -> Value {
    json!(g.to_matrix())
}

fn solver(common: &Common, n: usize) -> SolverOptions {
    let mut o = SolverOptions::for_n(n);
    if let Some(t) = common.tol {
        o = o.with_tol(t);
    }
    o.limit = common.limit;
    o
}

fn dispatch(cmd: &Command, common: &Common) -> Result<Run> {
    match cmd {
        Command::Feasible(a) => {
            let t = load_type(a)?;
            let w = t.realize();
            let code = if w.is_some() { 0 } else { 1 };
            Ok(Run {
                out: Output::Json(json!({
                    "feasible": w.is_some(),
                    "witness": w.as_ref().map(matrix),
                })),
                code,
            })
        }
        Command::Normalize(a) => {
            let t = load_type(a)?;
            let nz = normalize(&t);
            Ok(Run::ok(json!({
                "type": nz.ty.to_json(),
                "row_perm": nz.row_perm,
                "col_perm": nz.col_perm,
            })))
        }
        Command::Structure(a) => {
            let t = load_type(a)?;
            let s = structure_matrix(&t.r, &t.c)?;
            Ok(Run::ok(json!({
                "matrix": s.t,
                "nonnegative": s.all_nonnegative(),
                "zeros": s.zeros(),
            })))
        }
        Command::Invariants(a) => {
            let t = load_type(a)?;
            let m = crate::enumerate::invariant_masks(&t, common.limit).or_else(|e| match e {
                Error::LimitExceeded { .. } => invariant_positions(&t),
                e => Err(e),
            })?;
            Ok(Run::ok(json!({
                "ones": matrix(&m.inv1),
                "zeros": matrix(&m.inv0),
                "free": matrix(&m.free),
            })))
        }
        Command::Components(a) => {
            let t = load_type(a)?;
            let p = components_from_structure(&t)?;
            let nontrivial: Vec<Value> = p
                .nontrivial()
                .iter()
                .map(|b| json!({ "rows": b.rows, "cols": b.cols }))
                .collect();
            Ok(Run::ok(json!({
                "row_blocks": p.row_blocks,
                "col_blocks": p.col_blocks,
                "nontrivial": nontrivial,
            })))
        }
        Command::Count(a) => {
            let t = load_type(a)?;
            let k = count_class(&t, common.limit)?;
            Ok(Run {
                out: Output::Json(json!({ "count": k })),
                code: if k == 0 { 1 } else { 0 },
            })
        }
        Command::Enumerate(a) => {
            let t = load_type(a)?;
            let mut lines = Vec::new();
            for_each_member(&t, common.limit, |g| lines.push(g.to_json()))?;
            let code = if lines.is_empty() { 1 } else { 0 };
            Ok(Run { out: Output::Lines(lines), code })
        }
        Command::InterchangeCheck(a) => {
            let t = load_type(a)?;
            let r = interchange_connected(&t, common.limit)?;
            Ok(Run::ok(to_value(&r)?))
        }
        Command::Maxent(a) => {
            let t = load_type(a)?;
            let sol = solve_maxent(&t, solver(common, t.n()))?;
            Ok(Run::ok(json!({
                "p": sol.graph.to_matrix(),
                "duals": to_value(&sol.duals)?,
                "report": to_value(&sol.report)?,
            })))
        }
        Command::Bounds { t, delta, delta_hat, eta, dens } => {
            let t = load_type(t)?;
            let opts = solver(common, t.n());
            let dens = dens.unwrap_or_else(|| t.density());
            let mut v = json!({ "barvinok": to_value(&barvinok_bounds(&t, opts)?)? });
            if let Some(d) = delta {
                v["delta_class"] = to_value(&delta_class_cardinality_bounds(&t, *d, dens, opts)?)?;
            }
            if let Some(dh) = delta_hat {
                v["high_probability_set"] = to_value(&high_prob_set_lower(&t, *dh, *eta, dens, opts)?)?;
            }
            Ok(Run::ok(v))
        }
        Command::Prob { t, params, graph } => {
            let t = load_type(t)?;
            let params = FamilyDParams::from_json(&read_json_arg(params)?)?;
            let opts = solver(common, t.n());
            let mut v = json!({
                "point": to_value(&typeclass_point_prob(&params, &t, opts)?)?,
                "class": to_value(&typeclass_prob_bounds(&params, &t, opts)?)?,
            });
            if let Some(g) = graph {
                let g = load_graph(g)?;
                let f = family_d_graph(&params)?;
                v["graph_log_prob"] = json!(log_graph_prob(&f, &g));
            }
            Ok(Run::ok(v))
        }
        Command::Sanov { params, types } => {
            let params = FamilyDParams::from_json(&read_json_arg(params)?)?;
            let list = read_json_arg(types)?;
            let types: Vec<EdgeType> = list
                .as_array()
                .ok_or_else(|| Error::InvalidInput("--types must be a JSON array".into()))?
                .iter()
                .map(EdgeType::from_json)
                .collect::<Result<_>>()?;
            let opts = solver(common, params.n());
            Ok(Run::ok(to_value(&sanov_bounds(&params, &types, opts)?)?))
        }
        Command::Delta { t, delta, dens } => {
            let t = load_type(t)?;
            let dens = dens.unwrap_or_else(|| t.density());
            let opts = solver(common, t.n());
            let members = enumerate_delta_class(&t, *delta, dens, common.limit)?;
            let sol = solve_maxent(&t, opts)?;
            let prob = delta_class_prob_exact(&sol.graph, &t, *delta, dens, common.limit)?;
            Ok(Run {
                code: if members.is_empty() { 1 } else { 0 },
                out: Output::Json(json!({
                    "size": members.len(),
                    "entropy": sol.report.entropy_nats,
                    "probability_under_maxent": prob,
                    "probability_lower_bound": delta_class_prob_lower(t.n(), *delta, dens),
                    "dens": dens,
                })),
            })
        }
        Command::Conditional { t, graph, delta, dens } => {
            let t = load_type(t)?;
            let g = load_graph(graph)?;
            let dd = delta.map(|d| (d, dens.unwrap_or_else(|| t.density())));
            let hs = enumerate_conditional(&t, &g, dd, common.limit)?;
            let code = if hs.is_empty() { 1 } else { 0 };
            Ok(Run { out: Output::Lines(hs.iter().map(DiGraph::to_json).collect()), code })
        }
        Command::Distortion { graph, other } => {
            let g = load_graph(graph)?;
            let h = load_graph(other)?;
            let d = g.distortion(&h)?;
            Ok(Run::ok(json!({ "num": d.num, "den": d.den, "value": d.value() })))
        }
        Command::Cover { t, xi, delta, dens, m, seed, seeds } => {
            let t = load_type(t)?;
            let n = t.n();
            let opts = solver(common, n);
            let dens = dens.unwrap_or_else(|| t.density());
            let threshold = Distortion::from_budget(*xi, *delta, n);
            let members = class_members(&t, common.limit)?;
            let pool = cover_pool(&t, *xi, *delta, dens, common.limit)?;
            let mut cache = TypeCache::new(t.w.clone(), opts);
            let ln_m = lemma_ln_m(&t, *xi, *delta, dens, &mut cache)?;
            let m_used = m.unwrap_or(ln_m.exp());
            let seed_list: Vec<u64> = (0..*seeds).map(|k| seed.wrapping_add(k)).collect();
            let mut rows = Vec::new();
            for &s in &seed_list {
                let cb = build_cover_random(&pool, m_used, s)?;
                let chk = verify_cover(&cb.graphs, &members, threshold);
                rows.push(json!({
                    "seed": s,
                    "codebook_size": cb.graphs.len(),
                    "covers": chk.ok,
                    "worst_distortion": chk.worst_distortion.map(|d| d.value()),
                }));
            }
            let smallest = smallest_covering_m(&pool, &members, threshold, &seed_list)?;
            let any = rows.iter().any(|r| r["covers"] == json!(true));
            if common.format == Format::Csv {
                let header = ["r", "c", "xi", "delta", "seed", "m", "codebook_size", "covers", "worst_distortion"];
                let body = rows
                    .iter()
                    .map(|r| {
                        vec![
                            format!("{:?}", t.r),
                            format!("{:?}", t.c),
                            xi.to_string(),
                            delta.to_string(),
                            r["seed"].to_string(),
                            m_used.to_string(),
                            r["codebook_size"].to_string(),
                            r["covers"].to_string(),
                            r["worst_distortion"].to_string(),
                        ]
                    })
                    .collect();
                return Ok(Run {
                    out: Output::Table(header.iter().map(|s| s.to_string()).collect(), body),
                    code: if any { 0 } else { 1 },
                });
            }
            Ok(Run {
                code: if any { 0 } else { 1 },
                out: Output::Json(json!({
                    "threshold": { "num": threshold.num, "den": threshold.den },
                    "pool_size": pool.len(),
                    "class_size": members.len(),
                    "ln_m_bound": ln_m,
                    "m_used": m_used,
                    "smallest_covering_m": smallest,
                    "runs": rows,
                })),
            })
        }
        Command::RdBounds { t, xi, delta, delta_hat, dens } => {
            let t = load_type(t)?;
            let n = t.n();
            let opts = solver(common, n);
            let dens = dens.unwrap_or_else(|| t.density());
            let mut cache = TypeCache::new(t.w.clone(), opts);
            let up = rd_upper(&t, *xi, *delta, dens, &mut cache)?;
            let lo = rd_lower(&t, *xi, *delta, *delta_hat, dens, &mut cache)?;
            let exact = if n <= 3 {
                let members = class_members(&t, common.limit)?;
                Some(exact_rn(&members, Distortion::from_budget(*xi, *delta, n), 3)?)
            } else {
                None
            };
            if common.format == Format::Csv {
                let header = ["r", "c", "xi", "delta", "delta_hat", "lower", "upper", "exact", "lower_applicable", "upper_applicable"];
                let row = vec![
                    format!("{:?}", t.r),
                    format!("{:?}", t.c),
                    xi.to_string(),
                    delta.to_string(),
                    delta_hat.to_string(),
                    lo.bound_nats.to_string(),
                    up.bound_nats.to_string(),
                    exact.as_ref().map_or(String::new(), |e| e.rate_nats.to_string()),
                    lo.applicable.to_string(),
                    up.applicable.to_string(),
                ];
                return Ok(Run::ok_table(&header, vec![row]));
            }
            Ok(Run::ok(json!({
                "upper": to_value(&up)?,
                "lower": to_value(&lo)?,
                "exact": exact.map(|e| json!({ "codewords": e.codewords, "rate_nats": e.rate_nats, "rate_bits": e.rate_bits })),
            })))
        }
        Command::RnExact { ty, params, d, eps } => {
            let rate = match (ty, params) {
                (Some(ty), None) => {
                    let t = EdgeType::from_json(&read_json_arg(ty)?)?;
                    let members = class_members(&t, common.limit)?;
                    exact_rn(&members, Distortion::new(*d, t.n()), 3)?
                }
                (None, Some(p)) => {
                    let f = family_d_graph(&FamilyDParams::from_json(&read_json_arg(p)?)?)?;
                    exact_rn_prob(&f, Distortion::new(*d, f.n()), *eps, 3)?
                }
                _ => return Err(Error::InvalidInput("give exactly one of --type and --params".into())),
            };
            Ok(Run::ok(json!({
                "codewords": rate.codewords,
                "rate_nats": rate.rate_nats,
                "rate_bits": rate.rate_bits,
                "codebook": rate.codebook.iter().map(matrix).collect::<Vec<_>>(),
            })))
        }
        Command::VerifyAll { n, seed } => {
            let cfg = VerifyConfig { n: *n, seed: *seed };
            let results: Vec<_> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, &cfg)).collect();
            let code = if results.iter().all(|r| r.passed) { 0 } else { 1 };
            if common.format == Format::Csv {
                let header = ["id", "name", "passed", "seconds", "detail"];
                let body = results
                    .iter()
                    .map(|r| vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), format!("{:.3}", r.seconds), r.detail.clone()])
                    .collect();
                return Ok(Run { out: Output::Table(header.iter().map(|s| s.to_string()).collect(), body), code });
            }
            Ok(Run { out: Output::Json(to_value(&results)?), code })
        }
    }
}

impl Run {
    fn ok_table(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Run { out: Output::Table(header.iter().map(|s| s.to_string()).collect(), rows), code: 0 }
    }
}

fn render(out: &Output, format: Format) -> Result<String> {
    match (out, format) {
        (Output::Json(v), _) => Ok(format!("{}\n", serde_json::to_string_pretty(v)?)),
        (Output::Lines(vs), Format::Json) => {
            let mut s = String::new();
            for v in vs {
                s.push_str(&serde_json::to_string(v)?);
                s.push('\n');
            }
            Ok(s)
        }
        (Output::Lines(_), Format::Csv) => Err(Error::InvalidInput("csv output is not available for graph lists".into())),
        (Output::Table(header, rows), Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
        }
        (Output::Table(..), Format::Json) => unreachable!("tables are only built for csv"),
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(j) = cli.common.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let result = dispatch(&cli.command, &cli.common).and_then(|run| {
        let text = render(&run.out, cli.common.format)?;
        match &cli.common.out {
            Some(p) => fs::write(p, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(run.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            e.exit_code()
        }
    }
}
