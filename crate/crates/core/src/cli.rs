//! Command-line front end. Exit codes: 0 success, 1 falsified check, 2 usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    bound_report, explicit_hoffman, hoffman_bound, rat_string, BoundReport,
};
use crate::error::{Error, Result};
use crate::geometry::cache::resolve_cache_dir;
use crate::geometry::{load_or_build, DEFAULT_CAP};
use crate::lp::{delsarte_lp, delsarte_problem};
use crate::qcore::{count_codim, gauss, num_generators, omega, Family, PolarParams};
use crate::search::{classify_witness, max_ekr, EKRInstance};
use crate::spectra::{eig_table, scheme_spectrum, verify_spectrum};
use crate::verify::{run_suites, VerifyConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "polar-ekr", version, about = "EKR sets of generators in finite classical polar spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Qplus, Qminus, Q, W, Hodd or Heven.
    #[arg(long, global = true)]
    pub family: Option<Family>,
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, global = true)]
    pub t: Option<usize>,
    /// Ranges such as `d=2..8`, `t=0..3` or `q=3,4`; repeatable.
    #[arg(long, global = true)]
    pub grid: Vec<String>,
    /// Node budget for clique search.
    #[arg(long, global = true, default_value_t = crate::search::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    #[arg(long, global = true, env = crate::geometry::CACHE_ENV)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian coefficient [n k]_q.
    Gauss {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
    },
    /// Generator count and codimension profile.
    Count,
    /// Eigenmatrices and eigenvalue tables; `--verify` checks them on the graph.
    Spectrum {
        #[arg(long)]
        verify: bool,
    },
    Hoffman,
    /// Closed-form estimate for q >= 3.
    Explicit,
    /// Delsarte LP bound; `--dump` prints the LP instance.
    Lp {
        #[arg(long)]
        dump: bool,
    },
    /// Full bound report, one row per grid instance.
    Bounds {
        #[arg(long)]
        lp: bool,
    },
    /// Exact maximum EKR set on the enumerated graph.
    Search,
    /// Run the oracle suites; `--suite N` selects some.
    Verify {
        #[arg(long)]
        suite: Vec<u32>,
    },
    /// Grid scan of bound reports as CSV.
    Table {
        #[arg(long)]
        lp: bool,
    },
}

/// Outcome of a subcommand before rendering.
struct Output {
    value: Value,
    pretty: String,
    csv: Vec<Vec<String>>,
    header: Vec<&'static str>,
    falsified: bool,
}

impl Output {
    fn simple(value: Value, pretty: String) -> Self {
        Output { value, pretty, csv: Vec::new(), header: Vec::new(), falsified: false }
    }
}

#[derive(Debug, Clone, Default)]
struct Grid {
    qs: Option<Vec<u64>>,
    ds: Option<Vec<usize>>,
    ts: Option<Vec<usize>>,
}

fn parse_list(v: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad range {v:?}"));
    if let Some((a, b)) = v.split_once("..") {
        let (incl, b) = match b.strip_prefix('=') {
            Some(b) => (true, b),
            None => (true, b),
        };
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        let hi = if incl { b } else { b.saturating_sub(1) };
        if a > hi {
            return Err(bad());
        }
        Ok((a..=hi).collect())
    } else {
        v.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    }
}

fn parse_grid(specs: &[String]) -> Result<Grid> {
    let mut g = Grid::default();
    for s in specs {
        for part in s.split(';').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=range, got {part:?}")))?;
            let vals = parse_list(v)?;
            match k.trim() {
                "q" => g.qs = Some(vals),
                "d" => g.ds = Some(vals.into_iter().map(|x| x as usize).collect()),
                "t" => g.ts = Some(vals.into_iter().map(|x| x as usize).collect()),
                other => return Err(Error::Parse(format!("unknown grid key {other:?}"))),
            }
        }
    }
    Ok(g)
}

impl Cli {
    fn family(&self) -> Result<Family> {
        self.family.ok_or_else(|| Error::Parse("--family is required".into()))
    }

    fn params(&self) -> Result<PolarParams> {
        let q = self.q.ok_or_else(|| Error::Parse("--q is required".into()))?;
        let d = self.d.ok_or_else(|| Error::Parse("--d is required".into()))?;
        PolarParams::new(self.family()?, q, d)
    }

    fn t(&self) -> Result<usize> {
        self.t.ok_or_else(|| Error::Parse("--t is required".into()))
    }

    /// Instances from `--grid`, falling back to the single selectors.
    fn instances(&self) -> Result<Vec<(PolarParams, usize)>> {
        let g = parse_grid(&self.grid)?;
        let f = self.family()?;
        let qs = g.qs.or(self.q.map(|q| vec![q])).ok_or_else(|| Error::Parse("--q or a q grid is required".into()))?;
        let ds = g.ds.or(self.d.map(|d| vec![d])).ok_or_else(|| Error::Parse("--d or a d grid is required".into()))?;
        let mut out = Vec::new();
        for &q in &qs {
            for &d in &ds {
                let p = PolarParams::new(f, q, d)?;
                let ts: Vec<usize> = match (&g.ts, self.t) {
                    (Some(ts), _) => ts.iter().copied().filter(|&t| t <= d).collect(),
                    (None, Some(t)) => vec![t],
                    (None, None) => (0..=d).collect(),
                };
                out.extend(ts.into_iter().map(|t| (p, t)));
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("grid selects no instances".into()));
        }
        Ok(out)
    }

    fn cache_dir(&self) -> Option<PathBuf> {
        resolve_cache_dir(self.cache.as_deref())
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

fn report_row(r: &BoundReport) -> Vec<String> {
    let opt = |x: Option<String>| x.unwrap_or_default();
    vec![
        r.family.clone(),
        s(r.q),
        s(r.d),
        s(r.t),
        s(&r.n),
        opt(r.hoffman.as_ref().map(rat_string)),
        opt(r.hoffman_floor.as_ref().map(s)),
        opt(r.explicit_bound.map(|x| format!("{x:e}"))),
        opt(r.lp_bound.as_ref().map(rat_string)),
        opt(r.b_constants.as_ref().map(|b| s(b.combined()))),
        opt(r.y_lower.as_ref().map(s)),
        s(&r.example_size_exact),
        r.delta_gaps.as_array().iter().map(|x| rat_string(x)).collect::<Vec<_>>().join(" "),
        s(r.threshold_ok),
        opt(r.stability_ok.map(s)),
    ]
}

/// Columns of `bounds` and `table` CSV output, in order.
pub const BOUND_COLUMNS: [&str; 15] = [
    "family",
    "q",
    "d",
    "t",
    "n",
    "hoffman",
    "hoffman_floor",
    "explicit",
    "lp",
    "b_combined",
    "y_lower",
    "example_size",
    "delta_gaps",
    "threshold_ok",
    "stability_ok",
];

fn bounds_output(cli: &Cli, with_lp: bool) -> Result<Output> {
    let reports: Vec<BoundReport> =
        cli.instances()?.iter().map(|(p, t)| bound_report(p, *t, with_lp)).collect::<Result<_>>()?;
    // examples are EKR sets, so they never exceed a valid upper bound
    let falsified = reports.iter().any(|r| {
        r.hoffman_floor.as_ref().is_some_and(|h| &r.example_size_exact > h)
            || r.lp_bound.as_ref().is_some_and(|l| crate::ExactRat::from_integer(r.example_size_exact.clone()) > *l)
    });
    let stable = reports.iter().filter(|r| r.stability_ok == Some(true)).count();
    let summary = format!("{} instances, {} with stability verdict true", reports.len(), stable);
    let pretty = reports
        .iter()
        .map(|r| {
            format!(
                "{} t={}: n={} hoffman={} explicit={} lp={} example={} b={} threshold={} stable={}",
                r.notation,
                r.t,
                r.n,
                r.hoffman.as_ref().map(rat_string).unwrap_or("-".into()),
                r.explicit_bound.map(|x| format!("{x:.6e}")).unwrap_or("-".into()),
                r.lp_bound.as_ref().map(rat_string).unwrap_or("-".into()),
                r.example_size_exact,
                r.b_constants.as_ref().map(|b| s(b.combined())).unwrap_or("-".into()),
                r.threshold_ok,
                r.stability_ok.map(s).unwrap_or("-".into()),
            )
        })
        .chain(std::iter::once(summary.clone()))
        .collect::<Vec<_>>()
        .join("\n");
    let value = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).expect("serializable")
    } else {
        json!({ "schema_version": SCHEMA_VERSION, "reports": reports, "summary": summary })
    };
    Ok(Output { value, pretty, csv: reports.iter().map(report_row).collect(), header: BOUND_COLUMNS.to_vec(), falsified })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Gauss { n, k } => {
            let q = cli.q.ok_or_else(|| Error::Parse("--q is required".into()))?;
            let v = gauss(*n, *k, q)?;
            Ok(Output::simple(json!({ "schema_version": SCHEMA_VERSION, "n": n, "k": k, "q": q, "value": s(&v) }), s(&v)))
        }
        Command::Count => {
            let p = cli.params()?;
            let n = num_generators(&p);
            let profile: Vec<String> = (0..=p.d() as i64).map(|s| count_codim(&p, s).map(|x| x.to_string())).collect::<Result<_>>()?;
            let omegas: Vec<String> = (0..=p.d() as i64).map(|r| omega(&p, r).to_string()).collect();
            let pretty = format!("{n}\ncodim profile: {}\nomega: {}", profile.join(" "), omegas.join(" "));
            let mut out = Output::simple(
                json!({
                    "schema_version": SCHEMA_VERSION, "params": p.notation(), "n": s(&n),
                    "codim_profile": profile, "omega": omegas,
                }),
                pretty,
            );
            out.header = vec!["params", "n", "codim_profile"];
            out.csv = vec![vec![p.notation(), s(&n), profile.join(" ")]];
            Ok(out)
        }
        Command::Spectrum { verify } => {
            let p = cli.params()?;
            let spec = scheme_spectrum(&p)?;
            let mut value = spec.to_json();
            let mut pretty = format!("{} eigenvalue tables (row a: lambda_0..lambda_d of sum_{{s>a}} A_s)", p.notation());
            for a in 0..p.d() {
                let t = eig_table(&p, a)?;
                pretty += &format!("\na={a}: {}", t.values.iter().map(s).collect::<Vec<_>>().join(" "));
            }
            let mut falsified = false;
            if *verify {
                let g = load_or_build(cli.cache_dir().as_deref(), &p, DEFAULT_CAP)?;
                let checks = (0..=p.d()).map(|t| verify_spectrum(&g, t)).collect::<Result<Vec<_>>>()?;
                falsified = checks.iter().any(|c| !c.passed());
                for c in &checks {
                    pretty += &format!("\nt={}: annihilated={} witness={:?}", c.t, c.annihilated, c.witness);
                }
                value["checks"] = serde_json::to_value(&checks).expect("serializable");
            }
            Ok(Output { value, pretty, csv: Vec::new(), header: Vec::new(), falsified })
        }
        Command::Hoffman => {
            let (p, t) = (cli.params()?, cli.t()?);
            let h = hoffman_bound(&p, t)?;
            let floor = h.floor().to_integer();
            let pretty = if h.is_integer() { rat_string(&h) } else { format!("{} (floor {floor})", rat_string(&h)) };
            let mut out = Output::simple(
                json!({ "schema_version": SCHEMA_VERSION, "params": p.notation(), "t": t, "hoffman": rat_string(&h), "floor": s(&floor) }),
                pretty,
            );
            out.header = vec!["params", "t", "hoffman", "floor"];
            out.csv = vec![vec![p.notation(), s(t), rat_string(&h), s(&floor)]];
            Ok(out)
        }
        Command::Explicit => {
            let (p, t) = (cli.params()?, cli.t()?);
            let e = explicit_hoffman(&p, t)?;
            let h = hoffman_bound(&p, t)?;
            let falsified = crate::bounds::ln_rat(&h) > crate::bounds::explicit_hoffman_ln(&p, t)?;
            Ok(Output {
                value: json!({ "schema_version": SCHEMA_VERSION, "params": p.notation(), "t": t, "explicit": e, "hoffman": rat_string(&h) }),
                pretty: format!("{e:.9e}"),
                csv: vec![vec![p.notation(), s(t), format!("{e:e}"), rat_string(&h)]],
                header: vec!["params", "t", "explicit", "hoffman"],
                falsified,
            })
        }
        Command::Lp { dump } => {
            let (p, t) = (cli.params()?, cli.t()?);
            let r = delsarte_lp(&p, t)?;
            let floor = r.value.floor().to_integer();
            let mut pretty = rat_string(&r.value);
            let mut value = json!({
                "schema_version": SCHEMA_VERSION, "params": p.notation(), "t": t,
                "lp_value": rat_string(&r.value), "floor": s(&floor), "iterations": r.iterations,
            });
            if *dump {
                let txt = delsarte_problem(&p, t)?.to_text();
                pretty = format!("{txt}value {pretty}");
                value["instance"] = Value::String(txt);
            }
            let mut out = Output::simple(value, pretty);
            out.header = vec!["params", "t", "lp_value", "floor"];
            out.csv = vec![vec![p.notation(), s(t), rat_string(&r.value), s(&floor)]];
            Ok(out)
        }
        Command::Bounds { lp } => bounds_output(cli, *lp),
        Command::Table { lp } => bounds_output(cli, *lp),
        Command::Search => {
            let (p, t) = (cli.params()?, cli.t()?);
            if t > p.d() {
                return Err(Error::OutOfRange(format!("t = {t} > d = {}", p.d())));
            }
            let g = load_or_build(cli.cache_dir().as_deref(), &p, DEFAULT_CAP)?;
            let r = max_ekr(&EKRInstance::new(&g, t), cli.budget);
            let class = classify_witness(&g, t, &r.witness);
            let hf = if t > 0 && t < p.d() { Some(crate::bounds::hoffman_floor(&p, t)?) } else { None };
            let falsified = hf.as_ref().is_some_and(|h| crate::ExactInt::from(r.size) > *h);
            Ok(Output {
                value: json!({
                    "schema_version": SCHEMA_VERSION, "params": p.notation(), "t": t,
                    "size": r.size, "optimal": r.optimal, "witness": r.witness,
                    "classification": class.tag(), "nodes_explored": r.nodes_explored,
                    "hoffman_floor": hf.as_ref().map(s),
                }),
                pretty: format!(
                    "size {} ({}), {} after {} nodes; witness {:?}",
                    r.size,
                    if r.optimal { "optimal" } else { "budget exhausted" },
                    class.tag(),
                    r.nodes_explored,
                    r.witness
                ),
                csv: vec![vec![p.notation(), s(t), s(r.size), s(r.optimal), class.tag().into()]],
                header: vec!["params", "t", "size", "optimal", "classification"],
                falsified,
            })
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig { cache_dir: cli.cache_dir(), budget: cli.budget, ..VerifyConfig::default() };
            let results = run_suites(&cfg, suite)?;
            let falsified = results.iter().any(|r| !r.passed);
            let pretty = results
                .iter()
                .map(|r| {
                    format!(
                        "[{}] {:>2} {} ({} checks, {} ms) {}",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.id,
                        r.name,
                        r.checked,
                        r.millis,
                        r.detail
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output {
                value: json!({ "schema_version": SCHEMA_VERSION, "suites": results }),
                pretty,
                csv: results.iter().map(|r| vec![s(r.id), r.name.clone(), s(r.passed), s(r.checked), s(r.millis)]).collect(),
                header: vec!["id", "name", "passed", "checked", "millis"],
                falsified,
            })
        }
    }
}

fn render(out: &Output, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Pretty => writeln!(w, "{}", out.pretty),
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&out.value).expect("serializable")),
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            if out.header.is_empty() {
                wr.write_record(["json"])?;
                wr.write_record([out.value.to_string()])?;
            } else {
                wr.write_record(&out.header)?;
                for row in &out.csv {
                    wr.write_record(row)?;
                }
            }
            wr.flush()
        }
    }
}

/// Parse, run and render; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let go = || dispatch(&cli);
    let res = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(Error::Unsupported(format!("thread pool: {e}"))),
        },
        None => go(),
    };
    match res {
        Ok(out) => {
            if let Err(e) = render(&out, cli.format, stdout) {
                let _ = writeln!(stderr, "write error: {e}");
                return 2;
            }
            if out.falsified {
                let _ = writeln!(stderr, "falsified: see the reported instance");
            }
            i32::from(out.falsified)
        }
        Err(Error::Inconsistent(msg)) => {
            let _ = writeln!(stderr, "falsified: {msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
