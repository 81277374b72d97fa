use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use toric_core::arith::rational::{format_rational, parse_rational, to_f64};
use toric_core::arith::Rational;
use toric_core::blending::{
    check_rational_linear_precision, toric_blending, toric_patch_eval, BlendingSystem,
    IdentityMode, PrecisionReport, Verdict, WeightVector,
};
use toric_core::geometry::{convex_hull_facets, design_matrix};
use toric_core::horn::{
    format_matrix, minimize_horn_pair, tfp_horn_pair, validate_horn_pair, HornPair, HornReport,
};
use toric_core::io::{
    blending_json, expect_blending, expect_grading, expect_horn, horn_json, load_model,
    polytope_json, rationals_json, Model,
};
use toric_core::mle::{birch_residual, ips_fit, mle_closed_form, mle_horn, DataVector};
use toric_core::tfp::{tfp_blending, trivial_grading, DenominatorForm, Multigrading};

/// Largest IPS deviation from the exact estimate accepted by `mle`.
const IPS_AGREEMENT: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "toric-precision",
    version,
    about = "Rational linear precision, toric fiber products and Horn pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Clone)]
struct Options {
    /// Sample points or random trials used by sampled checks.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Convergence tolerance for iterative scaling.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_iter: usize,
    /// Denominator used for product blending functions.
    #[arg(long, global = true, value_enum, default_value_t = Form::B)]
    form: Form,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Facets and vertices of the convex hull of a configuration.
    Facets { model: PathBuf },
    /// Blending functions of a model (toric unless given explicitly).
    Blend { model: PathBuf },
    /// Checks partition of unity, toric membership, positivity and linear precision.
    Verify { model: PathBuf },
    /// Toric fiber product of two blending systems.
    Tfp {
        b: PathBuf,
        c: PathBuf,
        /// Multigrading; without it the product is Cartesian.
        grading: Option<PathBuf>,
    },
    /// Horn pair of a toric fiber product.
    HornTfp {
        b: PathBuf,
        c: PathBuf,
        grading: PathBuf,
    },
    /// Checks that a Horn pair sums to one and stays positive.
    HornValidate { horn: PathBuf },
    /// Merges proportional rows of a Horn matrix.
    HornMinimize { horn: PathBuf },
    /// Closed-form maximum likelihood estimate, cross-checked by iterative scaling.
    Mle {
        model: PathBuf,
        /// Counts, comma separated.
        #[arg(long)]
        data: String,
        /// Horn pair to compare against.
        #[arg(long)]
        horn: Option<PathBuf>,
    },
    /// Maximum likelihood estimate by iterative scaling.
    Ips {
        model: PathBuf,
        #[arg(long)]
        data: String,
    },
    /// Evaluates the patch of a blending system at a point.
    Patch {
        model: PathBuf,
        /// JSON array of control points.
        #[arg(long)]
        control: PathBuf,
        /// Parameter point, comma separated rationals.
        #[arg(long)]
        at: String,
    },
}

struct Report {
    json: Value,
    text: String,
    passed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            passed: true,
        }
    }
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    if let Some(dir) = std::env::var_os("TORIC_PRECISION_FIXTURES") {
        let dir = PathBuf::from(dir);
        for candidate in [
            dir.join(path),
            path.file_name().map(|f| dir.join(f)).unwrap_or_default(),
        ] {
            if candidate.is_file() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn load(path: &Path) -> Result<Model> {
    let path = resolve(path);
    load_model(&path).with_context(|| format!("{}", path.display()))
}

fn blending_of(path: &Path) -> Result<BlendingSystem> {
    match load(path)? {
        Model::Configuration(config) => {
            let poly = convex_hull_facets(&config)?;
            Ok(toric_blending(
                &poly,
                &config,
                &WeightVector::ones(config.len()),
            )?)
        }
        Model::Graded(g) => Ok(g.toric_system()?),
        other => Ok(expect_blending(other).with_context(|| format!("{}", path.display()))?),
    }
}

fn horn_of(path: &Path) -> Result<HornPair> {
    expect_horn(load(path)?).with_context(|| format!("{}", path.display()))
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t).map_err(|e| anyhow!("{e}")))
        .collect()
}

fn fmt_list(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn verdict_line(out: &mut String, name: &str, v: &Verdict) {
    let status = if v.passed { "pass" } else { "FAIL" };
    let _ = write!(out, "{name}: {status}");
    if let Some(w) = &v.witness {
        let _ = write!(out, " ({w})");
    }
    out.push('\n');
}

fn precision_text(r: &PrecisionReport) -> String {
    let mut out = String::new();
    verdict_line(&mut out, "partition of unity", &r.partition_of_unity);
    verdict_line(&mut out, "toric membership", &r.toric_membership);
    verdict_line(&mut out, "interior positivity", &r.interior_positivity);
    verdict_line(&mut out, "linear precision", &r.linear_precision);
    out
}

fn horn_report_text(r: &HornReport) -> String {
    let mut out = String::new();
    verdict_line(&mut out, "sums to one", &r.sums_to_one);
    verdict_line(&mut out, "positive", &r.positive);
    if let Some(s) = r.symbolic_sum {
        let _ = writeln!(out, "symbolic sum: {}", if s { "pass" } else { "FAIL" });
    }
    out
}

fn functions_text(sys: &BlendingSystem) -> String {
    let mut out = format!("variables: {}\n", sys.vars().join(", "));
    for (n, f) in sys.functions().iter().enumerate() {
        let _ = writeln!(
            out,
            "{} w={}: {}",
            sys.config().label(n),
            format_rational(&sys.weights().as_slice()[n]),
            f
        );
    }
    out
}

fn horn_text(pair: &HornPair) -> String {
    format!(
        "{}lambda = {}\n",
        format_matrix(pair.matrix()),
        fmt_list(pair.lambda())
    )
}

fn cmd_facets(path: &Path) -> Result<Report> {
    let model = load(path)?;
    let config = model
        .config()
        .ok_or_else(|| anyhow!("{} has no point configuration", path.display()))?;
    let poly = convex_hull_facets(config)?;
    let mut text = String::new();
    for f in poly.facets() {
        let _ = writeln!(text, "normal {:?} offset {}", f.normal, f.offset);
    }
    let _ = writeln!(text, "vertices {:?}", poly.vertices());
    Ok(Report::ok(polytope_json(&poly), text))
}

fn cmd_blend(path: &Path) -> Result<Report> {
    let sys = blending_of(path)?;
    Ok(Report::ok(blending_json(&sys), functions_text(&sys)))
}

fn cmd_verify(path: &Path, o: &Options) -> Result<Report> {
    let sys = blending_of(path)?;
    let report = check_rational_linear_precision(&sys, o.samples, o.seed, IdentityMode::Exact);
    Ok(Report {
        json: serde_json::to_value(&report)?,
        text: precision_text(&report),
        passed: report.all_passed(),
    })
}

fn product_grading(
    grading: Option<&Path>,
    sb: &BlendingSystem,
    sc: &BlendingSystem,
) -> Result<Multigrading> {
    match grading {
        Some(g) => {
            let spec = expect_grading(load(g)?).with_context(|| format!("{}", g.display()))?;
            Ok(spec.validate(sb.config(), sc.config())?)
        }
        None => Ok(trivial_grading(sb.config(), sc.config())?),
    }
}

fn cmd_tfp(b: &Path, c: &Path, grading: Option<&Path>, o: &Options) -> Result<Report> {
    let sb = blending_of(b)?;
    let sc = blending_of(c)?;
    let g = product_grading(grading, &sb, &sc)?;
    let form = match o.form {
        Form::B => DenominatorForm::B,
        Form::C => DenominatorForm::C,
    };
    let product = tfp_blending(&sb, &sc, &g, form)?;
    let check = |s: &BlendingSystem| {
        check_rational_linear_precision(s, o.samples, o.seed, IdentityMode::Exact)
    };
    let (rb, rc, rp) = (check(&sb), check(&sc), check(&product));
    let mut text = functions_text(&product);
    let _ = write!(text, "\nfirst factor:\n{}", precision_text(&rb));
    let _ = write!(text, "\nsecond factor:\n{}", precision_text(&rc));
    let _ = write!(text, "\nproduct:\n{}", precision_text(&rp));
    Ok(Report {
        json: json!({
            "system": blending_json(&product),
            "factors": [rb, rc],
            "report": rp,
        }),
        text,
        passed: rp.all_passed(),
    })
}

fn cmd_horn_tfp(b: &Path, c: &Path, grading: &Path, o: &Options) -> Result<Report> {
    let pb = horn_of(b)?;
    let pc = horn_of(c)?;
    let spec = expect_grading(load(grading)?).with_context(|| format!("{}", grading.display()))?;
    let pair = tfp_horn_pair(
        &pb,
        &pc,
        spec.degrees.len(),
        &spec.assignment_b,
        &spec.assignment_c,
    )?;
    let report = validate_horn_pair(&pair, o.samples, o.seed);
    Ok(Report {
        json: json!({"pair": horn_json(&pair), "report": report}),
        text: format!("{}\n{}", horn_text(&pair), horn_report_text(&report)),
        passed: report.passed(),
    })
}

fn cmd_horn_validate(path: &Path, o: &Options) -> Result<Report> {
    let pair = horn_of(path)?;
    let report = validate_horn_pair(&pair, o.samples, o.seed);
    Ok(Report {
        json: serde_json::to_value(&report)?,
        text: horn_report_text(&report),
        passed: report.passed(),
    })
}

fn cmd_horn_minimize(path: &Path) -> Result<Report> {
    let pair = horn_of(path)?;
    let min = minimize_horn_pair(&pair, true)?;
    let mut text = horn_text(&min.pair);
    let _ = writeln!(
        text,
        "rows {} -> {}",
        pair.matrix().nrows(),
        min.pair.matrix().nrows()
    );
    for (r, group) in min.provenance.iter().enumerate() {
        let rows: Vec<String> = group.iter().map(|x| (x + 1).to_string()).collect();
        let _ = writeln!(text, "row {} <- {}", r + 1, rows.join(", "));
    }
    Ok(Report::ok(
        json!({"pair": horn_json(&min.pair), "provenance": min.provenance}),
        text,
    ))
}

fn cmd_mle(path: &Path, data: &str, horn: Option<&Path>, o: &Options) -> Result<Report> {
    let sys = blending_of(path)?;
    let u = DataVector::parse(data)?;
    let exact = mle_closed_form(&sys, &u)?;
    let dm = design_matrix(sys.config());
    let residual = birch_residual(&dm, &u, &exact)?;
    let fit = ips_fit(&dm, sys.weights(), &u, o.tol, o.max_iter)?;
    let floats: Vec<f64> = exact.iter().map(to_f64).collect();
    let ips_error = fit
        .probs
        .iter()
        .zip(&floats)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let residual_zero = residual.iter().all(Zero::is_zero);
    let mut passed = residual_zero && ips_error <= IPS_AGREEMENT;

    let mut text = format!("exact: {}\n", fmt_list(&exact));
    let _ = writeln!(text, "float: {floats:?}");
    let _ = writeln!(text, "birch residual: {}", fmt_list(&residual));
    let _ = writeln!(
        text,
        "ips: {} iterations, max deviation {ips_error:.3e}",
        fit.iterations
    );
    let mut json = json!({
        "exact": rationals_json(&exact),
        "float": floats,
        "birch_residual": rationals_json(&residual),
        "iterations": fit.iterations,
        "ips_max_deviation": ips_error,
    });
    if let Some(h) = horn {
        let pair = horn_of(h)?;
        let agrees = mle_horn(&pair, &u)? == exact;
        passed &= agrees;
        let _ = writeln!(text, "horn: {}", if agrees { "agrees" } else { "DIFFERS" });
        json["horn_agrees"] = json!(agrees);
    }
    if !residual_zero {
        text.push_str("closed form does not solve the likelihood equations\n");
    }
    Ok(Report { json, text, passed })
}

fn cmd_ips(path: &Path, data: &str, o: &Options) -> Result<Report> {
    let model = load(path)?;
    let (config, weights) = match model {
        Model::Configuration(c) => {
            let w = WeightVector::ones(c.len());
            (c, w)
        }
        Model::Graded(g) => (g.config, g.weights),
        other => {
            let sys = expect_blending(other)?;
            (sys.config().clone(), sys.weights().clone())
        }
    };
    let u = DataVector::parse(data)?;
    let fit = ips_fit(&design_matrix(&config), &weights, &u, o.tol, o.max_iter)?;
    let text = format!(
        "probabilities: {:?}\niterations: {}\nresidual: {:.3e}\n",
        fit.probs, fit.iterations, fit.residual
    );
    Ok(Report::ok(serde_json::to_value(&fit)?, text))
}

fn cmd_patch(path: &Path, control: &Path, at: &str) -> Result<Report> {
    let sys = blending_of(path)?;
    let control_path = resolve(control);
    let raw: Value = serde_json::from_str(
        &std::fs::read_to_string(&control_path)
            .with_context(|| format!("{}", control_path.display()))?,
    )
    .with_context(|| format!("{}", control_path.display()))?;
    let rows = raw
        .as_array()
        .ok_or_else(|| anyhow!("control points must be an array"))?;
    let mut points = Vec::new();
    for (n, row) in rows.iter().enumerate() {
        let coords = row
            .as_array()
            .ok_or_else(|| anyhow!("control[{n}] must be an array"))?;
        let parsed: Result<Vec<Rational>> = coords
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s).map_err(|e| anyhow!("control[{n}]: {e}")),
                Value::Number(x) => {
                    parse_rational(&x.to_string()).map_err(|e| anyhow!("control[{n}]: {e}"))
                }
                _ => bail!("control[{n}] entries must be numbers or strings"),
            })
            .collect();
        points.push(parsed?);
    }
    let p = parse_list(at)?;
    let value = toric_patch_eval(&sys, &points, &p)?;
    Ok(Report::ok(
        rationals_json(&value),
        format!("{}\n", fmt_list(&value)),
    ))
}

fn run(cli: &Cli) -> Result<Report> {
    let o = &cli.opts;
    match &cli.command {
        Command::Facets { model } => cmd_facets(model),
        Command::Blend { model } => cmd_blend(model),
        Command::Verify { model } => cmd_verify(model, o),
        Command::Tfp { b, c, grading } => cmd_tfp(b, c, grading.as_deref(), o),
        Command::HornTfp { b, c, grading } => cmd_horn_tfp(b, c, grading, o),
        Command::HornValidate { horn } => cmd_horn_validate(horn, o),
        Command::HornMinimize { horn } => cmd_horn_minimize(horn),
        Command::Mle { model, data, horn } => cmd_mle(model, data, horn.as_deref(), o),
        Command::Ips { model, data } => cmd_ips(model, data, o),
        Command::Patch { model, control, at } => cmd_patch(model, control, at),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.opts.output {
                Output::Text => print!("{}", report.text),
                Output::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(
                        &json!({"passed": report.passed, "result": report.json})
                    )
                    .expect("report serializes")
                ),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
