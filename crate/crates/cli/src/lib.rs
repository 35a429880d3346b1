//! Command implementations for the `cutmetrics` binary.
//!
//! [`run`] parses arguments and executes one command, returning the exit
//! code and the text destined for stdout and stderr, so the commands can be
//! exercised without spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cutmetrics::distances::log_distance_matrix;
use cutmetrics::{
    check_cutpoint_additivity, check_metric_axioms, compare, normalize_distances, trapezoid,
    validate_transitional_measure, DistanceMatrix, Error, Graph, LongWalkMethod, Metric,
    ValidationReport,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
/// Bad input, usage errors, and failed validations.
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cutmetrics",
    version,
    about = "Cutpoint-additive graph distances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the distance matrix of one metric as CSV.
    Compute(CommonArgs),
    /// Check the transition inequality, metric axioms and cutpoint additivity.
    Validate(CommonArgs),
    /// Tabulate several metrics under a common normalisation.
    Compare(CommonArgs),
    /// Planar trapezoid coordinates for four vertices, one block per metric.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Graph file in the edge-list format.
    #[arg(long)]
    pub input: PathBuf,
    /// Write results here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Metric name, optionally with an inline parameter (`walk=0.4`).
    /// Repeat or comma-separate for compare/figure.
    #[arg(long, value_delimiter = ',')]
    pub metric: Vec<String>,
    /// Path accessibility parameter.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Walk parameter, or forest edge re-weighting (default 1).
    #[arg(long)]
    pub t: Option<f64>,
    /// Normalisation pairs, e.g. "1-2,2-3,3-4".
    #[arg(long)]
    pub pairs: Option<String>,
    /// Normalisation target for the summed pair distances.
    #[arg(long)]
    pub target: Option<f64>,
    /// Relative tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Machine-readable JSON output.
    #[arg(long)]
    pub json: bool,
    /// Use the experimental para-Laplacian closed form for long-walk metrics.
    #[arg(long)]
    pub closed_form: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// The four vertices to place, e.g. "1,2,3,4".
    #[arg(long)]
    pub vertices: Option<String>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::InvalidWeight { .. }
            | Error::VertexOutOfRange { .. }
            | Error::TooFewVertices(_)
            | Error::Disconnected(_)
            | Error::CapExceeded { .. }
            | Error::InvalidArgument(_) => EXIT_INPUT,
            Error::ParameterOutOfRange { .. } | Error::ParameterRejected(_) => EXIT_PARAMETER,
            Error::Singular { .. }
            | Error::DimensionMismatch { .. }
            | Error::NoConvergence { .. }
            | Error::KernelMismatch { .. }
            | Error::NonPositiveEntry { .. }
            | Error::ExtrapolationFailed { .. } => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let (result, output) = match &cli.command {
        Command::Compute(a) => (cmd_compute(a), &a.output),
        Command::Validate(a) => (cmd_validate(a), &a.output),
        Command::Compare(a) => (cmd_compare(a), &a.output),
        Command::Figure(a) => (cmd_figure(a), &a.common.output),
    };
    match result {
        Ok(mut outcome) => {
            if let Some(path) = output {
                if let Err(e) = std::fs::write(path, &outcome.stdout) {
                    outcome.code = EXIT_INPUT;
                    outcome
                        .stderr
                        .push_str(&format!("cannot write {}: {e}\n", path.display()));
                }
                outcome.stdout.clear();
            }
            outcome
        }
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            code: f.code,
            message: format!("{}: {}", path.display(), f.message),
        }
    })
}

/// Parses `name` or `name=value` into a metric, drawing missing parameters
/// from `--tau` / `--t`.
pub fn parse_metric(
    spec: &str,
    tau: Option<f64>,
    t: Option<f64>,
    method: LongWalkMethod,
) -> Result<Metric, String> {
    let (name, inline) = match spec.split_once(['=', ':']) {
        Some((name, value)) => {
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid parameter {value:?} for metric {name}"))?;
            (name.trim(), Some(v))
        }
        None => (spec.trim(), None),
    };
    let no_param = |m: Metric| {
        if inline.is_some() {
            Err(format!("metric {name} takes no parameter"))
        } else {
            Ok(m)
        }
    };
    match name {
        "shortest" => no_param(Metric::Shortest),
        "resistance" => no_param(Metric::Resistance),
        "reliability" => no_param(Metric::Reliability),
        "longwalk" => no_param(Metric::LongWalk { method }),
        "longwalk-rescaled" => no_param(Metric::LongWalkRescaled { method }),
        "path" => inline
            .or(tau)
            .map(|tau| Metric::Path { tau })
            .ok_or_else(|| "metric path requires --tau".to_string()),
        "walk" => inline
            .or(t)
            .map(|t| Metric::Walk { t })
            .ok_or_else(|| "metric walk requires --t".to_string()),
        "forest" => Ok(Metric::Forest {
            t: inline.or(t).unwrap_or(1.0),
        }),
        other => Err(format!(
            "unknown metric {other:?}; expected one of {}",
            Metric::NAMES.join(", ")
        )),
    }
}

fn metrics_from(args: &CommonArgs, single: bool) -> Result<Vec<Metric>, Failure> {
    let specs: Vec<&str> = args
        .metric
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    if specs.is_empty() {
        return Err(Failure::usage("no metric given (use --metric NAME)"));
    }
    if single && specs.len() != 1 {
        return Err(Failure::usage("this command takes exactly one --metric"));
    }
    let method = if args.closed_form {
        LongWalkMethod::ClosedForm
    } else {
        LongWalkMethod::Limit
    };
    let metrics = specs
        .iter()
        .map(|s| parse_metric(s, args.tau, args.t, method))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::usage)?;
    if args.tau.is_some() && !metrics.iter().any(|m| matches!(m, Metric::Path { .. })) {
        return Err(Failure::usage("--tau only applies to the path metric"));
    }
    if args.t.is_some()
        && !metrics
            .iter()
            .any(|m| matches!(m, Metric::Walk { .. } | Metric::Forest { .. }))
    {
        return Err(Failure::usage(
            "--t only applies to the walk and forest metrics",
        ));
    }
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
    }
    Ok(metrics)
}

/// Parses `"1-2,2-3"` into 0-based pairs.
pub fn parse_pairs(text: &str, n: usize) -> Result<Vec<(usize, usize)>, String> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| format!("invalid pair {item:?}"))?;
        let id = |s: &str| -> Result<usize, String> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| format!("invalid vertex {s:?}"))?;
            if v == 0 || v > n {
                return Err(format!("vertex {v} out of range 1..={n}"));
            }
            Ok(v - 1)
        };
        pairs.push((id(a)?, id(b)?));
    }
    if pairs.is_empty() {
        return Err("empty pair list".into());
    }
    Ok(pairs)
}

/// At least 12 significant digits, never fewer than 12 decimals.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-30..=15).contains(&exponent) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exponent).max(12) as usize;
    format!("{x:.decimals$}")
}

fn provenance(metric: &Metric) -> Value {
    let mut params = serde_json::Map::new();
    if let Some((name, value)) = metric.parameter() {
        params.insert(name.into(), json!(value));
    }
    if let Metric::LongWalk { method } | Metric::LongWalkRescaled { method } = metric {
        let m = match method {
            LongWalkMethod::Limit => "limit",
            LongWalkMethod::ClosedForm => "closed-form (experimental)",
        };
        params.insert("method".into(), json!(m));
    }
    Value::Object(params)
}

fn normalised(
    d: DistanceMatrix,
    args: &CommonArgs,
    default_pairs: Option<Vec<(usize, usize)>>,
) -> Result<DistanceMatrix, Failure> {
    let pairs = match (&args.pairs, default_pairs) {
        (Some(text), _) => parse_pairs(text, d.order()).map_err(Failure::usage)?,
        (None, Some(p)) => p,
        (None, None) => {
            if args.target.is_some() {
                return Err(Failure::usage("--target needs --pairs"));
            }
            return Ok(d);
        }
    };
    let target = args.target.unwrap_or(pairs.len() as f64);
    Ok(normalize_distances(&d, &pairs, target)?)
}

fn cmd_compute(args: &CommonArgs) -> CmdResult {
    let metric = metrics_from(args, true)?[0];
    let g = load_graph(&args.input)?;
    let d = normalised(metric.compute(&g)?, args, None)?;
    let n = g.order();
    let mut out = String::from("vertex");
    for j in 1..=n {
        write!(out, ",{j}").unwrap();
    }
    out.push('\n');
    for i in 0..n {
        write!(out, "{}", i + 1).unwrap();
        for j in 0..n {
            write!(out, ",{}", format_value(d.get(i, j))).unwrap();
        }
        out.push('\n');
    }
    let stderr = format!("metric: {metric} {}; vertices: {n}\n", provenance(&metric));
    Ok(Outcome {
        code: EXIT_OK,
        stdout: out,
        stderr,
    })
}

fn violations_json(check: &str, report: &ValidationReport) -> Vec<Value> {
    report
        .violations
        .iter()
        .map(|v| {
            json!({
                "check": check,
                "kind": v.kind.as_str(),
                "i": v.i + 1,
                "j": v.j + 1,
                "k": v.k.map(|k| k + 1),
                "lhs": v.lhs,
                "rhs": v.rhs,
                "expected_equal": v.expected_equal,
            })
        })
        .collect()
}

fn cmd_validate(args: &CommonArgs) -> CmdResult {
    let metric = metrics_from(args, true)?[0];
    let g = load_graph(&args.input)?;
    let tol = args.tol.unwrap_or(metric.default_tolerance());

    let mut checks: Vec<(&str, ValidationReport)> = Vec::new();
    let mut skipped = Vec::new();
    let distances = match metric.measure(&g) {
        Some(measure) => {
            // validate first and transform regardless, so a bad τ is
            // reported rather than refused
            let s = measure?;
            let report = validate_transitional_measure(&g, &s, tol);
            checks.push(("transitional-measure", report));
            match log_distance_matrix(&s.matrix) {
                Ok(m) => Some(DistanceMatrix::new(m, metric)),
                Err(_) => None,
            }
        }
        None => Some(metric.compute(&g)?),
    };
    match distances {
        Some(d) => {
            checks.push(("metric-axioms", check_metric_axioms(&d, tol)));
            checks.push((
                "cutpoint-additivity",
                check_cutpoint_additivity(&g, &d, tol),
            ));
        }
        None => skipped.extend(["metric-axioms", "cutpoint-additivity"]),
    }

    let passed = skipped.is_empty() && checks.iter().all(|(_, r)| r.passed());
    let stdout = if args.json {
        let violations: Vec<Value> = checks
            .iter()
            .flat_map(|(name, r)| violations_json(name, r))
            .collect();
        let summary: Vec<Value> = checks
            .iter()
            .map(|(name, r)| json!({"name": name, "passed": r.passed(), "violations": r.violations.len()}))
            .chain(skipped.iter().map(|name| json!({"name": name, "passed": false, "skipped": true})))
            .collect();
        let report = json!({
            "command": "validate",
            "metric": metric.name(),
            "params": provenance(&metric),
            "tolerance": tol,
            "passed": passed,
            "checks": summary,
            "violations": violations,
        });
        serde_json::to_string_pretty(&report).expect("report serialises") + "\n"
    } else {
        let mut out = format!("metric: {metric}; tolerance: {tol:e}\n");
        for (name, r) in &checks {
            writeln!(out, "{name}: {r}").unwrap();
        }
        for name in &skipped {
            writeln!(out, "{name}: skipped (measure has non-positive entries)").unwrap();
        }
        writeln!(out, "overall: {}", if passed { "passed" } else { "failed" }).unwrap();
        out
    };
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_INPUT },
        stdout,
        stderr: String::new(),
    })
}

fn default_chain(vertices: [usize; 4]) -> Vec<(usize, usize)> {
    vertices.windows(2).map(|w| (w[0], w[1])).collect()
}

fn cmd_compare(args: &CommonArgs) -> CmdResult {
    let metrics = metrics_from(args, false)?;
    let g = load_graph(&args.input)?;
    let n = g.order();
    let pairs = match &args.pairs {
        Some(text) => parse_pairs(text, n).map_err(Failure::usage)?,
        None if n >= 4 => default_chain([0, 1, 2, 3]),
        None => {
            return Err(Failure::usage(
                "graphs with fewer than 4 vertices need --pairs",
            ))
        }
    };
    let target = args.target.unwrap_or(pairs.len() as f64);
    let rows = compare(&g, &metrics, &pairs, target)?;

    let columns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let stdout = if args.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                let distances: serde_json::Map<String, Value> = columns
                    .iter()
                    .map(|&(i, j)| (format!("{}-{}", i + 1, j + 1), json!(r.distances.get(i, j))))
                    .collect();
                json!({"metric": r.metric.name(), "params": provenance(&r.metric), "distances": distances})
            })
            .collect();
        let pairs: Vec<String> = pairs
            .iter()
            .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        let doc = json!({"command": "compare", "pairs": pairs, "target": target, "rows": rows});
        serde_json::to_string_pretty(&doc).expect("table serialises") + "\n"
    } else {
        let mut out = String::from("metric,params");
        for (i, j) in &columns {
            write!(out, ",{}-{}", i + 1, j + 1).unwrap();
        }
        out.push('\n');
        for r in &rows {
            let params = r
                .metric
                .parameter()
                .map(|(p, v)| format!("{p}={v}"))
                .unwrap_or_default();
            write!(out, "{},{params}", r.metric.name()).unwrap();
            for &(i, j) in &columns {
                write!(out, ",{}", format_value(r.distances.get(i, j))).unwrap();
            }
            out.push('\n');
        }
        out
    };
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}

fn cmd_figure(args: &FigureArgs) -> CmdResult {
    let common = &args.common;
    let metrics = metrics_from(common, false)?;
    let g = load_graph(&common.input)?;
    let n = g.order();
    let vertices: [usize; 4] = match &args.vertices {
        Some(text) => {
            let ids = text
                .split(',')
                .map(|s| match s.trim().parse::<usize>() {
                    Ok(v) if v >= 1 && v <= n => Ok(v - 1),
                    _ => Err(Failure::usage(format!("invalid vertex {s:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            ids.try_into()
                .map_err(|_| Failure::usage("--vertices needs exactly four ids"))?
        }
        None if n >= 4 => [0, 1, 2, 3],
        None => {
            return Err(Failure::usage(
                "figure needs a graph with at least 4 vertices",
            ))
        }
    };

    let mut blocks = Vec::new();
    for metric in &metrics {
        let d = normalised(metric.compute(&g)?, common, Some(default_chain(vertices)))?;
        let tol = common.tol.unwrap_or(metric.default_tolerance());
        let shape = trapezoid(&d, vertices, tol)?;
        blocks.push((*metric, shape));
    }

    let stdout = if common.json {
        let doc: Vec<Value> = blocks
            .iter()
            .map(|(m, shape)| {
                let points: Vec<Value> = vertices
                    .iter()
                    .zip(shape.points)
                    .map(|(v, (x, y))| json!({"vertex": v + 1, "x": x, "y": y}))
                    .collect();
                json!({"metric": m.name(), "params": provenance(m), "h": shape.h, "points": points})
            })
            .collect();
        serde_json::to_string_pretty(&json!({"command": "figure", "blocks": doc}))
            .expect("serialises")
            + "\n"
    } else {
        let mut out = String::from("metric,params,h,vertex,x,y\n");
        for (m, shape) in &blocks {
            let params = m
                .parameter()
                .map(|(p, v)| format!("{p}={v}"))
                .unwrap_or_default();
            for (v, (x, y)) in vertices.iter().zip(shape.points) {
                writeln!(
                    out,
                    "{},{params},{},{},{},{}",
                    m.name(),
                    format_value(shape.h),
                    v + 1,
                    format_value(x),
                    format_value(y)
                )
                .unwrap();
            }
        }
        out
    };
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    })
}
