mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperq::checks::{
    classify_on_points, eq1_check, leibniz_check, product_check, prop26_rhs_check, prop31_check,
    sum_check,
};
use hyperq::geometry::Atlas;
use hyperq::grid::{from_point, to_point};
use hyperq::operators::{CheckConfig, DEFAULT_EPS_POLE, DEFAULT_TOL};
use hyperq::{Error, GridSpec, Point, QFunction, ResidualReport};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "hyperq",
    version,
    about = "Residual checks for quaternionic functions on C^2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run residual checks for a function definition on a sample grid.
    Check(CheckArgs),
    /// Verify the transition functions of an atlas file.
    Atlas(AtlasArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Function definition, e.g. "f1 = conj(z2); f2 = -conj(z1)".
    #[arg(long)]
    def: Option<String>,
    /// Comma-separated: eq1, prop31, leibniz, prop26rhs, sum, product, classify, orders.
    #[arg(long, value_delimiter = ',', default_value = "eq1")]
    checks: Vec<String>,
    /// Second function for leibniz, prop26rhs, sum and product.
    #[arg(long = "with")]
    with: Option<String>,
    /// File with one definition per line, for classify.
    #[arg(long)]
    family: Option<PathBuf>,
    /// default | box:MIN:MAX:COUNT | random:COUNT[:SEED[:MIN:MAX]] |
    /// annulus:RMIN:RMAX:COUNT[:SEED] | path to a JSON grid file.
    #[arg(long, default_value = "default")]
    grid: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Compare residual / (1 + scale) against the tolerance.
    #[arg(long)]
    relative: bool,
    #[arg(long, default_value_t = DEFAULT_EPS_POLE)]
    eps_pole: f64,
    /// Point for orders, as re1,im1,re2,im2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Option<Vec<f64>>,
    /// Seed for random grids that do not name one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-point residuals as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Usage and input errors exit with 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

const KNOWN_CHECKS: [&str; 8] = [
    "eq1",
    "prop31",
    "leibniz",
    "prop26rhs",
    "sum",
    "product",
    "classify",
    "orders",
];

fn parse_grid(text: &str, seed: u64) -> Result<GridSpec, UsageError> {
    let bad = |why: &str| UsageError(format!("bad --grid `{text}`: {why}"));
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| bad(&format!("`{s}` is not a number")))
    };
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| bad(&format!("`{s}` is not a count")))
    };
    let int = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| bad(&format!("`{s}` is not a seed")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        ["default"] => GridSpec::default(),
        ["box", lo, hi, n] => GridSpec::uniform(num(lo)?, num(hi)?, count(n)?),
        ["random", n] => GridSpec::random(-1.0, 1.0, count(n)?, seed),
        ["random", n, s] => GridSpec::random(-1.0, 1.0, count(n)?, int(s)?),
        ["random", n, s, lo, hi] => GridSpec::random(num(lo)?, num(hi)?, count(n)?, int(s)?),
        ["annulus", r0, r1, n, rest @ ..] if rest.len() <= 1 => {
            let (r0, r1) = (num(r0)?, num(r1)?);
            let s = rest.first().map(|s| int(s)).transpose()?.unwrap_or(seed);
            let half = r1.max(0.0).sqrt();
            GridSpec::random(-half, half, count(n)?, s).with_norm_sq_range(r0, r1)
        }
        _ => {
            let body = fs::read_to_string(text).map_err(|e| bad(&e.to_string()))?;
            serde_json::from_str(&body).map_err(|e| bad(&e.to_string()))?
        }
    };
    grid.validate()?;
    Ok(grid)
}

fn parse_family(path: &PathBuf) -> Result<Vec<(String, QFunction)>, UsageError> {
    let body =
        fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    body.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Ok((l.to_string(), QFunction::parse(l)?)))
        .collect()
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_csv(path: Option<&PathBuf>, checks: &[ResidualReport]) -> Result<(), UsageError> {
    if let Some(p) = path {
        let file = fs::File::create(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
        report::write_csv(file, checks).map_err(|e| UsageError(e.to_string()))?;
    }
    Ok(())
}

fn run_check(args: &CheckArgs) -> Result<bool, UsageError> {
    for c in &args.checks {
        if !KNOWN_CHECKS.contains(&c.as_str()) {
            return Err(UsageError(format!(
                "unknown check `{c}` (known: {})",
                KNOWN_CHECKS.join(", ")
            )));
        }
    }
    let f = args.def.as_deref().map(QFunction::parse).transpose()?;
    let g = args.with.as_deref().map(QFunction::parse).transpose()?;
    let family = args.family.as_ref().map(parse_family).transpose()?;
    let grid = parse_grid(&args.grid, args.seed)?;
    let points = grid.points()?;
    let cfg = CheckConfig {
        tol: args.tol,
        relative: args.relative,
        eps_pole: args.eps_pole,
        ..CheckConfig::default()
    };

    let needs_f = args.checks.iter().any(|c| c != "classify");
    let f = match (f, needs_f) {
        (Some(f), _) => Some(f),
        (None, true) => return Err(UsageError("--def is required".into())),
        (None, false) => None,
    };
    let need_g = |name: &str| -> Result<&QFunction, UsageError> {
        g.as_ref()
            .ok_or_else(|| UsageError(format!("check `{name}` requires --with")))
    };

    let mut checks = Vec::new();
    let mut extra = Map::new();
    let mut sum_discrepancy = None;
    for name in &args.checks {
        let f = f.as_ref();
        match name.as_str() {
            "eq1" => checks.push(eq1_check(f.unwrap(), &points, &cfg)),
            "prop31" => checks.push(prop31_check(f.unwrap(), &points, &cfg)),
            "leibniz" => checks.push(leibniz_check(f.unwrap(), need_g(name)?, &points, &cfg)),
            "prop26rhs" => checks.push(prop26_rhs_check(f.unwrap(), need_g(name)?, &points, &cfg)),
            "sum" => {
                let s = sum_check(f.unwrap(), need_g(name)?, &points, &cfg);
                checks.push(s.direct);
                sum_discrepancy = Some(report::check_entry(&s.discrepancy));
            }
            "product" => checks.push(product_check(f.unwrap(), need_g(name)?, &points, &cfg)),
            "classify" => {
                let fam = family
                    .as_ref()
                    .ok_or_else(|| UsageError("check `classify` requires --family".into()))?;
                let fs: Vec<QFunction> = fam.iter().map(|(_, q)| q.clone()).collect();
                let verdicts = classify_on_points(&fs, &points, &cfg)?;
                let members: Vec<Value> = fam
                    .iter()
                    .zip(&verdicts)
                    .map(|((src, _), v)| {
                        let res: Map<String, Value> = v
                            .max_residuals
                            .iter()
                            .map(|(k, x)| (k.clone(), json!(x)))
                            .collect();
                        json!({
                            "def": src,
                            "level": v.level.as_str(),
                            "failing_check": v.failing_check,
                            "max_residuals": res,
                        })
                    })
                    .collect();
                extra.insert("classification".into(), json!({ "members": members }));
            }
            "orders" => {
                let f = f.unwrap();
                let at: Point = match args.at.as_deref() {
                    Some(&[a, b, c, d]) => to_point([a, b, c, d]),
                    Some(_) => return Err(UsageError("--at takes re1,im1,re2,im2".into())),
                    None => to_point([0.0; 4]),
                };
                let zero = match f.zero_order(at, 1e-12) {
                    Ok(z) => json!({ "order": z.order, "per_component": z.per_component }),
                    Err(Error::NotAZero { norm_sq }) => {
                        json!({ "order": 0, "note": format!("not a zero (norm_sq = {norm_sq:e})") })
                    }
                    Err(Error::NotPolynomial) => Value::Null,
                    Err(e) => return Err(e.into()),
                };
                let pole = f.pole_order(at)?;
                extra.insert(
                    "orders".into(),
                    json!({
                        "at": from_point(at),
                        "zero_order": zero,
                        "pole_order": { "order": pole.order, "per_component": pole.per_component },
                    }),
                );
            }
            _ => unreachable!("validated above"),
        }
    }
    if let Some(d) = sum_discrepancy {
        extra.insert("sum_expanded_vs_direct".into(), d);
    }

    let mut def = Map::new();
    if let Some(f) = &f {
        def.insert("f".into(), json!(args.def));
        def.insert("canonical".into(), json!(f.to_string()));
    }
    if let Some(src) = &args.with {
        def.insert("with".into(), json!(src));
    }
    if let Some(fam) = &family {
        def.insert(
            "family".into(),
            json!(fam.iter().map(|(s, _)| s).collect::<Vec<_>>()),
        );
    }
    let mut grid_v = serde_json::to_value(&grid).expect("grid serializes");
    grid_v["points"] = json!(points.len());

    let doc = report::document(Value::Object(def), grid_v, &checks, extra);
    write_output(args.out.as_ref(), &report::to_json_string(&doc))?;
    write_csv(args.csv.as_ref(), &checks)?;
    Ok(checks.iter().all(|c| c.pass))
}

fn run_atlas(args: &AtlasArgs) -> Result<bool, UsageError> {
    let body = fs::read_to_string(&args.file)
        .map_err(|e| UsageError(format!("{}: {e}", args.file.display())))?;
    let atlas = Atlas::from_json(&body)?;
    let reports = atlas.verify()?;
    let mut checks = Vec::new();
    let mut transitions = Vec::new();
    for r in reports {
        let label = format!("{}->{}", r.from, r.to);
        let pass = r.pass();
        let mut sha = r.sha;
        sha.name = format!("sha[{label}]");
        checks.push(sha);
        if let Some(mut rt) = r.round_trip {
            rt.name = format!("round_trip[{label}]");
            checks.push(rt);
        }
        transitions.push(json!({ "from": r.from, "to": r.to, "pass": pass }));
    }
    let def = json!({
        "charts": atlas.charts.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
        "transitions": atlas.transitions.iter().map(|t| json!({"from": t.from, "to": t.to, "def": t.def})).collect::<Vec<_>>(),
    });
    let grids = Value::Array(
        atlas
            .transitions
            .iter()
            .map(|t| serde_json::to_value(&t.grid).expect("grid serializes"))
            .collect(),
    );
    let mut extra = Map::new();
    extra.insert("transitions".into(), Value::Array(transitions));
    let doc = report::document(def, grids, &checks, extra);
    write_output(args.out.as_ref(), &report::to_json_string(&doc))?;
    write_csv(args.csv.as_ref(), &checks)?;
    Ok(checks.iter().all(|c| c.pass))
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("HYPERQ_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        UsageError(format!(
            "HYPERQ_THREADS must be a non-negative integer, got `{v}`"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Check(a) => run_check(a),
        Command::Atlas(a) => run_atlas(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
