//! `shiftlab`: entropy, hitting statistics, and Cantor constructions for
//! primitive subshifts of finite type, from the command line.
//!
//! Exit codes: 2 malformed input or invalid parameters, 3 shift not
//! primitive, 4 word too short for the requested horizon, 5 empty regime.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use shiftlab_core::{
    build_sequences, dichotomy_experiment, dim_hea, dim_level_set, dim_u_a, ea_survives,
    limit_ratio_experiment, seed_sequence, BuildParams, CantorError, CensorMode, GibbsError,
    HittingError, LimitRatioResult, ParryMeasure, Sft, SftError, TargetFunction, Variant,
    DEFAULT_DEPTH_BUDGET,
};

#[derive(Parser)]
#[command(name = "shiftlab", version, about)]
struct Cli {
    /// Shift definition JSON ({"m":2,"allowed":[[1,1],[1,0]]}); golden-mean
    /// shift if omitted
    #[arg(long, global = true)]
    sft: Option<PathBuf>,

    /// Directory for output artifacts (created if missing)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed; per-sample seeds are derived deterministically
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (falls back to SHIFTLAB_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Entropy, spectral data, and the measure of maximal entropy
    Entropy {
        /// Also report the finite-length estimate ln(#words(n))/n
        #[arg(long, default_value_t = 30)]
        estimate_n: u64,
    },
    /// Exact pair correlations of the measure of maximal entropy
    Correlations {
        /// First cylinder base (digit text)
        #[arg(long)]
        e: String,
        /// Second cylinder base (digit text)
        #[arg(long)]
        f: String,
        #[arg(long)]
        n_max: usize,
    },
    /// Eventually-always survival of L_N > Φ(N) - 1 over a window
    Ea {
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        n1: usize,
        /// Evaluate one explicit word (digit text file) instead of sampling
        #[arg(long, conflicts_with = "count")]
        word: Option<PathBuf>,
        /// Number of sampled orbits
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Censor::Strict)]
        censor: Censor,
    },
    /// Monte Carlo table of L_N / log_A N at checkpoints
    Limit {
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Comma-separated checkpoint horizons (each >= 2)
        #[arg(long, value_delimiter = ',', required = true)]
        checkpoints: Vec<u64>,
        /// Also write an SVG of the median ratio against log10 N
        #[arg(long)]
        svg: bool,
    },
    /// Build Cantor level sequences and report their mass distribution
    Cantor {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        psi: PsiArgs,
        /// Integer P >= 3 for the Φ-driven variants
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = DEFAULT_DEPTH_BUDGET)]
        budget: u64,
        /// Sample a point of the construction and write this many symbols
        #[arg(long)]
        point_len: Option<usize>,
    },
    /// Closed-form dimension values and regime tags
    Dims {
        #[arg(long)]
        tau: f64,
        /// Level-set pairs "a,b" (b may be "inf"); repeatable
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Also report the eventually-always hitting set dimension at tau
        #[arg(long)]
        hea: bool,
        /// Also report the exact-liminf dimension U(a) with its optimal b
        #[arg(long)]
        ua: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Censor {
    Strict,
    Optimistic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Section4,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Section4 => Variant::Section4,
            VariantArg::Case2 => Variant::Case2,
            VariantArg::Case3 => Variant::Case3,
            VariantArg::Case4 => Variant::Case4,
            VariantArg::Case5 => Variant::Case5,
            VariantArg::Case6 => Variant::Case6,
        }
    }
}

/// Target family Φ(N) = -log_m ψ(N), shared by several subcommands.
#[derive(Args, Clone)]
struct PsiArgs {
    /// log: Φ = c·log_A N; linear: Φ = τ·N; power: Φ = N^s
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
}

impl PsiArgs {
    fn build(&self, entropy: f64) -> Result<TargetFunction, Failure> {
        let fam = self
            .family
            .as_deref()
            .ok_or_else(|| Failure::usage("a target family is required (--family)"))?;
        match fam {
            "log" => {
                let c = self
                    .c
                    .ok_or_else(|| Failure::usage("--family log requires --c"))?;
                if c <= 0.0 {
                    return Err(Failure::usage("--c must be positive"));
                }
                Ok(TargetFunction::log_rate(c, entropy))
            }
            "linear" => {
                let tau = self
                    .tau
                    .ok_or_else(|| Failure::usage("--family linear requires --tau"))?;
                if tau < 0.0 {
                    return Err(Failure::usage("--tau must be nonnegative"));
                }
                Ok(TargetFunction::linear_rate(tau))
            }
            "power" => {
                let s = self
                    .s
                    .ok_or_else(|| Failure::usage("--family power requires --s"))?;
                if !(s > 0.0 && s < 1.0) {
                    return Err(Failure::usage("--s must lie in (0,1)"));
                }
                Ok(TargetFunction::power_rate(s))
            }
            other => Err(Failure::usage(&format!("unknown target family {other:?}"))),
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: &str) -> Failure {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }
}

impl From<SftError> for Failure {
    fn from(e: SftError) -> Failure {
        let code = if matches!(e, SftError::NotPrimitive) { 3 } else { 2 };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<HittingError> for Failure {
    fn from(e: HittingError) -> Failure {
        let code = match e {
            HittingError::InsufficientWordLength { .. }
            | HittingError::GrowthCapExceeded { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<CantorError> for Failure {
    fn from(e: CantorError) -> Failure {
        let code = if matches!(e, CantorError::EmptyRegime { .. }) { 5 } else { 2 };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<GibbsError> for Failure {
    fn from(e: GibbsError) -> Failure {
        Failure {
            code: 2,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: 2,
            msg: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[derive(Deserialize)]
struct RawSft {
    m: usize,
    allowed: Vec<Vec<u8>>,
}

fn load_sft(path: &Option<PathBuf>) -> Result<Sft, Failure> {
    match path {
        None => Ok(Sft::golden_mean()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let raw: RawSft = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(&format!("bad shift definition: {e}")))?;
            Ok(Sft::new(raw.m, raw.allowed)?)
        }
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_artifact(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn manifest(
    sft: &Sft,
    psi: &TargetFunction,
    master: u64,
    count: usize,
    n0: u64,
    n1: u64,
    checkpoints: &[u64],
) -> serde_json::Value {
    serde_json::json!({
        "sft": serde_json::to_value(sft).unwrap(),
        "psi": serde_json::to_value(psi).unwrap(),
        "seeds": {"master": master, "count": count},
        "N0": n0,
        "N1": n1,
        "checkpoints": checkpoints,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = cli.threads.or_else(|| {
        std::env::var("SHIFTLAB_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    let sft = load_sft(&cli.sft)?;

    match &cli.cmd {
        Cmd::Entropy { estimate_n } => cmd_entropy(&cli, &sft, *estimate_n),
        Cmd::Correlations { e, f, n_max } => cmd_correlations(&cli, &sft, e, f, *n_max),
        Cmd::Ea {
            psi,
            n0,
            n1,
            word,
            count,
            censor,
        } => cmd_ea(&cli, &sft, psi, *n0, *n1, word, *count, *censor),
        Cmd::Limit {
            count,
            checkpoints,
            svg,
        } => cmd_limit(&cli, &sft, *count, checkpoints, *svg),
        Cmd::Cantor {
            variant,
            a,
            b,
            psi,
            p,
            budget,
            point_len,
        } => cmd_cantor(&cli, &sft, *variant, *a, *b, psi, *p, *budget, *point_len),
        Cmd::Dims { tau, pairs, hea, ua } => cmd_dims(&cli, &sft, *tau, pairs, *hea, *ua),
    }
}

fn cmd_entropy(cli: &Cli, sft: &Sft, estimate_n: u64) -> Result<(), Failure> {
    if estimate_n < 1 {
        return Err(Failure::usage("--estimate-n must be at least 1"));
    }
    let mu = ParryMeasure::new(sft)?;
    let estimate = sft.entropy_estimate(estimate_n);
    match cli.format {
        Format::Json => {
            let v = serde_json::json!({
                "m": sft.m(),
                "gap": sft.gap(),
                "lambda": mu.lambda,
                "entropy": mu.entropy,
                "theta": mu.theta,
                "estimate_n": estimate_n,
                "estimate": estimate,
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            println!("m,gap,lambda,entropy,theta,estimate_n,estimate");
            println!(
                "{},{},{},{},{},{},{}",
                sft.m(),
                sft.gap(),
                sig17(mu.lambda),
                sig17(mu.entropy),
                sig17(mu.theta),
                estimate_n,
                sig17(estimate)
            );
        }
    }
    let measure = serde_json::to_string_pretty(&mu).unwrap();
    write_artifact(&cli.out, "measure.json", &measure)
}

fn cmd_correlations(cli: &Cli, sft: &Sft, e: &str, f: &str, n_max: usize) -> Result<(), Failure> {
    let e = shiftlab_core::parse_word(e, sft.m())?;
    let f = shiftlab_core::parse_word(f, sft.m())?;
    if e.is_empty() || f.is_empty() {
        return Err(Failure::usage("cylinder bases must be nonempty"));
    }
    if n_max < e.len() {
        return Err(Failure::usage("--n-max must be at least the length of --e"));
    }
    let mu = ParryMeasure::new(sft)?;
    let rows: Vec<(usize, f64)> = (e.len()..=n_max)
        .map(|n| Ok((n, mu.correlation(&e, &f, n)?)))
        .collect::<Result<_, GibbsError>>()?;
    let mut csv = String::from("n,correlation\n");
    for (n, c) in &rows {
        writeln!(csv, "{n},{}", sig17(*c)).unwrap();
    }
    match cli.format {
        Format::Json => {
            let v = serde_json::json!({
                "theta": mu.theta,
                "rows": rows.iter().map(|(n, c)| serde_json::json!({"n": n, "correlation": c}))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => print!("{csv}"),
    }
    write_artifact(&cli.out, "correlations.csv", &csv)
}

#[allow(clippy::too_many_arguments)]
fn cmd_ea(
    cli: &Cli,
    sft: &Sft,
    psi_args: &PsiArgs,
    n0: usize,
    n1: usize,
    word: &Option<PathBuf>,
    count: usize,
    censor: Censor,
) -> Result<(), Failure> {
    if n0 < 1 || n1 <= n0 {
        return Err(Failure::usage("need 1 <= n0 < n1"));
    }
    let mu = ParryMeasure::new(sft)?;
    let psi = psi_args.build(mu.entropy)?;
    if let TargetFunction::LogRate { c, .. } = psi {
        if c == 1.0 {
            return Err(Failure::usage(
                "the survival dichotomy is undefined at c = 1 (the critical rate)",
            ));
        }
    }
    let mode = match censor {
        Censor::Strict => CensorMode::Strict,
        Censor::Optimistic => CensorMode::Optimistic,
    };

    if let Some(path) = word {
        let text = std::fs::read_to_string(path)?;
        let w = shiftlab_core::parse_word(text.trim(), sft.m())?;
        let report = ea_survives(&w, &psi, n0, n1, mode)?;
        match cli.format {
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            Format::Csv => {
                println!("n0,n1,survived,first_failure,censored");
                println!(
                    "{},{},{},{},{}",
                    report.n0,
                    report.n1,
                    report.survived,
                    report.first_failure.map_or(String::new(), |v| v.to_string()),
                    report.censored
                );
            }
        }
        return Ok(());
    }

    if count == 0 {
        return Err(Failure::usage("--count must be positive"));
    }
    let seeds = seed_sequence(cli.seed, count);
    let res = dichotomy_experiment(&mu, &psi, &seeds, n0, n1)?;
    let mut csv = String::from("seed,survived,first_failure,censored\n");
    for (seed, r) in &res.reports {
        writeln!(
            csv,
            "{seed},{},{},{}",
            r.survived,
            r.first_failure.map_or(String::new(), |v| v.to_string()),
            r.censored
        )
        .unwrap();
    }
    match cli.format {
        Format::Json => {
            let v = serde_json::json!({
                "fraction": res.fraction,
                "count": count,
                "n0": n0,
                "n1": n1,
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => print!("{csv}"),
    }
    write_artifact(&cli.out, "reports.csv", &csv)?;
    let man = manifest(sft, &psi, cli.seed, count, n0 as u64, n1 as u64, &[]);
    write_artifact(
        &cli.out,
        "manifest.json",
        &serde_json::to_string_pretty(&man).unwrap(),
    )
}

fn cmd_limit(
    cli: &Cli,
    sft: &Sft,
    count: usize,
    checkpoints: &[u64],
    svg: bool,
) -> Result<(), Failure> {
    if count == 0 {
        return Err(Failure::usage("--count must be positive"));
    }
    let mu = ParryMeasure::new(sft)?;
    let seeds = seed_sequence(cli.seed, count);
    let res = limit_ratio_experiment(&mu, &seeds, checkpoints)?;
    let csv = rows_csv(&res);
    match cli.format {
        Format::Json => {
            let v = serde_json::json!({ "stats": res.stats });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => print!("{csv}"),
    }
    write_artifact(&cli.out, "rows.csv", &csv)?;
    write_artifact(
        &cli.out,
        "stats.json",
        &serde_json::to_string_pretty(&res.stats).unwrap(),
    )?;
    let psi = TargetFunction::log_rate(1.0, mu.entropy);
    let mut cps: Vec<u64> = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let man = manifest(
        sft,
        &psi,
        cli.seed,
        count,
        *cps.first().unwrap(),
        *cps.last().unwrap(),
        &cps,
    );
    write_artifact(
        &cli.out,
        "manifest.json",
        &serde_json::to_string_pretty(&man).unwrap(),
    )?;
    if svg {
        write_artifact(&cli.out, "median.svg", &median_svg(&res))?;
    }
    Ok(())
}

fn rows_csv(res: &LimitRatioResult) -> String {
    let mut csv = String::from("seed,checkpoint,L_N,ratio,censored\n");
    for r in &res.rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            r.seed,
            r.checkpoint,
            r.l_n,
            sig17(r.ratio),
            r.censored
        )
        .unwrap();
    }
    csv
}

/// Single polyline of the median ratio against log10 N.
fn median_svg(res: &LimitRatioResult) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let xs: Vec<f64> = res.stats.iter().map(|s| (s.checkpoint as f64).log10()).collect();
    let ys: Vec<f64> = res.stats.iter().map(|s| s.median).collect();
    let (x0, x1) = (xs[0], *xs.last().unwrap());
    let (mut y0, mut y1) = (0.0f64, 1.5f64);
    for &y in &ys {
        y0 = y0.min(y - 0.1);
        y1 = y1.max(y + 0.1);
    }
    let px = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-9) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let pts: Vec<String> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<line x1=\"{pad}\" y1=\"{hb}\" x2=\"{wr}\" y2=\"{hb}\" stroke=\"black\"/>\n",
            "<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{hb}\" stroke=\"black\"/>\n",
            "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{pts}\"/>\n",
            "<text x=\"{wm}\" y=\"{hl}\" text-anchor=\"middle\" font-size=\"12\">log10 N</text>\n",
            "</svg>\n"
        ),
        w = w,
        h = h,
        pad = pad,
        hb = h - pad,
        wr = w - pad,
        wm = w / 2.0,
        hl = h - 10.0,
        pts = pts.join(" ")
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_cantor(
    cli: &Cli,
    sft: &Sft,
    variant: VariantArg,
    a: f64,
    b: f64,
    psi_args: &PsiArgs,
    p: u32,
    budget: u64,
    point_len: Option<usize>,
) -> Result<(), Failure> {
    let variant: Variant = variant.into();
    let phi;
    let params = if variant == Variant::Section4 {
        BuildParams::section4(a, b, budget)
    } else {
        phi = psi_args.build(sft.entropy())?;
        let mut p_args = BuildParams::rate(&phi, p, budget);
        p_args.a = a;
        p_args.b = b;
        p_args
    };
    let seq = build_sequences(variant, sft, &params)?;
    let report = seq.report(sft);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    write_artifact(
        &cli.out,
        "construction.json",
        &serde_json::to_string_pretty(&report).unwrap(),
    )?;
    if let Some(len) = point_len {
        let w = seq.sample_point(sft, cli.seed, len)?;
        write_artifact(&cli.out, "point.txt", &shiftlab_core::format_word(&w))?;
    }
    Ok(())
}

fn cmd_dims(
    cli: &Cli,
    sft: &Sft,
    tau: f64,
    pairs: &[String],
    hea: bool,
    ua: Option<f64>,
) -> Result<(), Failure> {
    if tau < 0.0 {
        return Err(Failure::usage("--tau must be nonnegative"));
    }
    let dim_full = sft.entropy() / (sft.m() as f64).ln();
    let mut rows = Vec::new();
    for pair in pairs {
        let (a, b) = parse_pair(pair)?;
        let v = dim_level_set(a, b, tau)?;
        rows.push(serde_json::json!({
            "a": a,
            "b": if b.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(b) },
            "tau": tau,
            "regime": v.regime_tag(),
            "relative": v.relative(),
            "absolute": v.relative() * dim_full,
        }));
    }
    if hea {
        let v = dim_hea(tau);
        rows.push(serde_json::json!({
            "set": "hea",
            "tau": tau,
            "regime": v.regime_tag(),
            "relative": v.relative(),
            "absolute": v.relative() * dim_full,
        }));
    }
    if let Some(a) = ua {
        if a < 0.0 {
            return Err(Failure::usage("--ua must be nonnegative"));
        }
        let u = dim_u_a(a);
        rows.push(serde_json::json!({
            "set": "exact-liminf",
            "a": a,
            "regime": u.dim.regime_tag(),
            "relative": u.dim.relative(),
            "absolute": u.dim.relative() * dim_full,
            "optimal_b": u.optimal_b,
        }));
    }
    if rows.is_empty() {
        return Err(Failure::usage("nothing to compute: pass --pair, --hea, or --ua"));
    }
    let mut csv = String::from("set,a,b,tau,regime,relative,absolute\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.get("set").and_then(|v| v.as_str()).unwrap_or("level"),
            r.get("a").map(fmt_json_num).unwrap_or_default(),
            r.get("b").map(fmt_json_num).unwrap_or_default(),
            fmt_json_num(&r["tau"]),
            r["regime"].as_str().unwrap(),
            sig17(r["relative"].as_f64().unwrap()),
            sig17(r["absolute"].as_f64().unwrap()),
        )
        .unwrap();
    }
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => print!("{csv}"),
    }
    write_artifact(&cli.out, "dims.csv", &csv)
}

fn fmt_json_num(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => sig17(n.as_f64().unwrap()),
        serde_json::Value::String(s) => s.clone(),
        _ => String::new(),
    }
}

fn parse_pair(text: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::usage(&format!("bad pair {text:?}: expected \"a,b\"")));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::usage(&format!("bad liminf in {text:?}")))?;
    let b_text = parts[1].trim();
    let b: f64 = if b_text == "inf" {
        f64::INFINITY
    } else {
        b_text
            .parse()
            .map_err(|_| Failure::usage(&format!("bad limsup in {text:?}")))?
    };
    if a < 0.0 || !a.is_finite() {
        return Err(Failure::usage("liminf must be finite and nonnegative"));
    }
    Ok((a, b))
}
