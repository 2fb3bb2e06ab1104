//! `sktour`: construct QR tournaments, check S_k properties, compute teaching
//! dimensions, evaluate order bounds and search for small witnesses.
//!
//! Exit codes: 0 success / property holds, 1 property fails, 2 usage or
//! input error, 3 infeasible pattern, 4 teaching cap exceeded, 5 search
//! budget exceeded.

mod report;
mod source;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};
use sktour::bounds::{bounds_table, MAX_TABLE_K};
use sktour::search::{exhaustive_min_order, random_search, ExhaustiveOptions, SearchOutcome};
use sktour::sk::{check_property, counting_obstruction, CheckOptions};
use sktour::teaching::{
    all_teaching_dims, canonical_nc_teacher, induced_class, nctd_of_induced, rtd, verify_nc_teacher, ConceptClass,
    DEFAULT_CAP,
};
use sktour::{Error, QrModulus, Tournament, Variant};

use report::{Format, RunReport};
use source::{Loaded, Source};

#[derive(Parser, Debug)]
#[command(name = "sktour", version, about = "QR tournaments, S_k properties and teaching dimensions")]
struct Cli {
    /// Output rendering; JSON is canonical.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for scans and teaching-set searches.
    #[arg(long, env = "SKTOUR_THREADS", default_value_t = 1, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the QR tournament of order p.
    Qr {
        p: u64,
        /// Write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Check a weak/strong S_k or strong S_{k,m} property.
    Check {
        source: Source,
        #[command(flatten)]
        variant: VariantFlags,
        #[arg(short)]
        k: usize,
        /// Required witness multiplicity (strong only).
        #[arg(short, default_value_t = 1)]
        m: usize,
        /// Scan every pattern to report the exact minimum witness count.
        #[arg(long)]
        full: bool,
    },
    /// Teaching dimensions of the induced class (or of a concept matrix).
    Teach {
        source: Source,
        #[arg(long)]
        td: bool,
        #[arg(long)]
        rtd: bool,
        #[arg(long)]
        nctd: bool,
        /// Largest teaching-set size searched for.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Bound table for k = 1..=k_max.
    Bounds { k_max: u32 },
    /// Search for small tournaments with a property.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Args, Debug, Clone, Copy)]
#[command(group(ArgGroup::new("variant").required(true).args(["weak", "strong"])))]
struct VariantFlags {
    #[arg(long)]
    weak: bool,
    #[arg(long)]
    strong: bool,
}

impl VariantFlags {
    fn resolve(self, m: usize) -> Result<Variant, Failure> {
        match (self.weak, m) {
            (true, 1) => Ok(Variant::Weak),
            (true, _) => Err(Failure::usage("-m applies to --strong only")),
            (false, 1) => Ok(Variant::Strong),
            (false, _) => Ok(Variant::StrongWithMultiplicity),
        }
    }
}

#[derive(Subcommand, Debug)]
enum SearchCommand {
    /// Enumerate every orientation for orders k+1..=nmax.
    Exhaustive {
        #[command(flatten)]
        variant: VariantFlags,
        #[arg(short)]
        k: usize,
        #[arg(short, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        nmax: usize,
        /// Skip labellings whose vertex-0 row is not of the form 1..10..0.
        #[arg(long)]
        symmetry_cut: bool,
        /// Write the witness as an edge list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample seeded random tournaments of order n.
    Random {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        variant: VariantFlags,
        #[arg(short, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed run: exit code, message, and possibly a partial report.
struct Failure {
    code: u8,
    message: String,
    partial: Option<RunReport>,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into(), partial: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PatternTooLarge { .. } => 3,
            Error::CapExceeded { .. } => 4,
            Error::BudgetExceeded(_) => 5,
            _ => 2,
        };
        Failure { code, message: e.to_string(), partial: None }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(e) => e.into(),
            Err(e) => Failure::usage(format!("{e:#}")),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

struct Ctx {
    threads: usize,
    started: Instant,
}

impl Ctx {
    fn report(&self, command: &str, parameters: Value, payload: Value) -> RunReport {
        let parameters: BTreeMap<String, Value> = match parameters {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        RunReport {
            command: command.to_string(),
            parameters,
            payload,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

type Outcome = Result<(RunReport, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.max(1);
    // Ignore the error if a pool already exists; it only sizes rayon's default pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    let ctx = Ctx { threads, started: Instant::now() };
    let result = match cli.command {
        Command::Qr { p, dot, edges } => cmd_qr(&ctx, p, dot.as_deref(), edges.as_deref()),
        Command::Check { source, variant, k, m, full } => cmd_check(&ctx, &source, variant, k, m, full),
        Command::Teach { source, td, rtd, nctd, cap } => cmd_teach(&ctx, &source, td, rtd, nctd, cap),
        Command::Bounds { k_max } => cmd_bounds(&ctx, k_max),
        Command::Search(s) => cmd_search(&ctx, s),
    };
    match result {
        Ok((report, code)) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(code)
        }
        Err(f) => {
            if let Some(report) = f.partial {
                print!("{}", report.render(cli.format));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_qr(ctx: &Ctx, p: u64, dot: Option<&Path>, edges: Option<&Path>) -> Outcome {
    let q = QrModulus::new(p)?;
    let t = q.tournament();
    let half = ((p - 1) / 2) as usize;
    let regular = (0..t.order()).all(|x| t.out_degree(x) == half && t.in_degree(x) == half);
    if let Some(path) = dot {
        std::fs::write(path, t.to_dot())?;
    }
    if let Some(path) = edges {
        std::fs::write(path, t.to_edge_list())?;
    }
    let payload = json!({
        "order": t.order(),
        "out_degree": half,
        "regular": regular,
        "edge_count": t.edges().count(),
        "dot": dot.map(|p| p.display().to_string()),
        "edge_list": edges.map(|p| p.display().to_string()),
    });
    Ok((ctx.report("qr", json!({ "p": p }), payload), 0))
}

fn cmd_check(ctx: &Ctx, source: &Source, flags: VariantFlags, k: usize, m: usize, full: bool) -> Outcome {
    if m == 0 {
        return Err(Failure::usage("-m must be at least 1"));
    }
    let variant = flags.resolve(m)?;
    let t = source.load_tournament()?;
    let params = json!({ "source": source.to_string(), "variant": variant, "k": k, "m": m, "full": full });
    if k >= 1 {
        if let Some(reason) = counting_obstruction(t.order(), variant, k, m) {
            return Err(Failure { code: 3, message: format!("infeasible pattern: {reason}"), partial: None });
        }
    }
    eprintln!("checking {variant} S_{k} (m = {m}) on {source}, order {}", t.order());
    let opts = CheckOptions { threads: ctx.threads, full_report: full };
    let verdict = check_property(&t, variant, k, m, opts)?;
    let code = if verdict.holds { 0 } else { 1 };
    let payload = json!({ "order": t.order(), "verdict": verdict });
    Ok((ctx.report("check", params, payload), code))
}

fn cmd_teach(ctx: &Ctx, source: &Source, td: bool, want_rtd: bool, nctd: bool, cap: usize) -> Outcome {
    let (td, want_rtd, nctd) = if td || want_rtd || nctd { (td, want_rtd, nctd) } else { (true, true, true) };
    let params = json!({ "source": source.to_string(), "td": td, "rtd": want_rtd, "nctd": nctd, "cap": cap });
    let (tournament, class): (Option<Tournament>, ConceptClass) = match source.load()? {
        Loaded::Tournament(t) => {
            let c = induced_class(&t);
            (Some(t), c)
        }
        Loaded::Class(c) => (None, c),
    };
    let mut payload = serde_json::Map::new();
    payload.insert("domain_size".into(), json!(class.domain_size()));
    payload.insert("concepts".into(), json!(class.len()));
    let mut cap_hit = false;

    if td {
        let dims = all_teaching_dims(&class, cap);
        let per_concept: Vec<Value> = dims
            .iter()
            .enumerate()
            .map(|(i, r)| match r {
                Ok(t) => json!({ "concept": i, "dimension": t.dimension, "witness": t.witness }),
                Err(_) => json!({ "concept": i, "dimension": null, "exceeds_cap": true }),
            })
            .collect();
        let known: Vec<usize> = dims.iter().filter_map(|r| r.as_ref().ok().map(|t| t.dimension)).collect();
        let all_known = known.len() == dims.len();
        cap_hit |= !all_known;
        payload.insert("teaching_dims".into(), Value::Array(per_concept));
        payload.insert("td_min".into(), json!(known.iter().min()));
        payload.insert("td_max".into(), json!(if all_known { known.iter().max().copied() } else { None }));
        if known.is_empty() {
            payload.insert("td_min_at_least".into(), json!(cap + 1));
        }
    }
    if want_rtd {
        match rtd(&class, cap) {
            Ok(trace) => {
                payload.insert("rtd".into(), json!(trace));
            }
            Err(Error::CapExceeded { .. }) => {
                cap_hit = true;
                payload.insert("rtd".into(), Value::Null);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if nctd {
        let Some(t) = &tournament else {
            return Err(Failure::usage("--nctd is only defined for tournament-induced classes"));
        };
        let teacher = canonical_nc_teacher(t);
        let verdict = verify_nc_teacher(&class, &teacher)?;
        payload.insert(
            "nctd".into(),
            json!({ "value": nctd_of_induced(t), "teacher": teacher, "teacher_valid": verdict.valid }),
        );
    }
    payload.insert("cap_exceeded".into(), json!(cap_hit));
    let report = ctx.report("teach", params, Value::Object(payload));
    if cap_hit {
        return Err(Failure {
            code: 4,
            message: format!("teaching dimension exceeds cap {cap} for some concept"),
            partial: Some(report),
        });
    }
    Ok((report, 0))
}

fn cmd_bounds(ctx: &Ctx, k_max: u32) -> Outcome {
    if !(1..=MAX_TABLE_K).contains(&k_max) {
        return Err(Failure::usage(format!("k_max must be in 1..={MAX_TABLE_K}, got {k_max}")));
    }
    let rows = bounds_table(k_max)?;
    let chain = rows.iter().all(|r| r.lower <= r.f_upper && r.f_upper <= r.big_f_upper);
    let payload = json!({ "rows": rows, "chain_holds": chain });
    Ok((ctx.report("bounds", json!({ "k_max": k_max }), payload), 0))
}

fn cmd_search(ctx: &Ctx, cmd: SearchCommand) -> Outcome {
    let (params, variant, k, m, outcome, out) = match cmd {
        SearchCommand::Exhaustive { variant, k, m, nmax, symmetry_cut, out } => {
            let v = variant.resolve(m)?;
            eprintln!("exhaustive search: {v} S_{k}, orders {}..={nmax}", k + 1);
            let opts = ExhaustiveOptions { symmetry_cut, threads: ctx.threads };
            let outcome = exhaustive_min_order(k, v, m, nmax, opts)?;
            let params = json!({ "mode": "exhaustive", "variant": v, "k": k, "m": m, "nmax": nmax,
                                 "symmetry_cut": symmetry_cut });
            (params, v, k, m, outcome, out)
        }
        SearchCommand::Random { n, k, variant, m, trials, seed, out } => {
            let v = variant.resolve(m)?;
            eprintln!("random search: {v} S_{k}, order {n}, {trials} trials, seed {seed}");
            let outcome = random_search(n, k, v, m, trials, seed)?;
            let params = json!({ "mode": "random", "variant": v, "n": n, "k": k, "m": m, "trials": trials,
                                 "seed": seed });
            (params, v, k, m, outcome, out)
        }
    };
    let verified = match &outcome.witness {
        Some(w) => Some(check_property(w, variant, k, m, CheckOptions::default())?.holds),
        None => None,
    };
    if let (Some(path), Some(w)) = (&out, &outcome.witness) {
        write_witness(path, w, verified == Some(true))?;
    }
    let SearchOutcome { found, order, witness, trials_or_count, exhaustive } = outcome;
    let payload = json!({
        "found": found,
        "order": order,
        "witness": witness,
        "trials_or_count": trials_or_count,
        "exhaustive": exhaustive,
        "verified": verified,
        "out": out.map(|p| p.display().to_string()),
    });
    Ok((ctx.report("search", params, payload), 0))
}

fn write_witness(path: &Path, w: &Tournament, verified: bool) -> Result<(), Failure> {
    if !verified {
        return Err(Failure::usage("witness failed re-verification, not written"));
    }
    let text = w.to_edge_list();
    if Tournament::parse_edge_list(&text)? != *w {
        return Err(Failure::usage("witness edge list does not round-trip"));
    }
    std::fs::write(path, text)?;
    Ok(())
}
