//! `lobbygame` command line. [`run`] takes argv and the two output streams
//! and returns the exit status, so tests can drive it in-process.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lobbygame::empirics::{anomaly_table, load_countries, ColumnMapping, EmpiricsError, IndexScale, Thresholds};
use lobbygame::equilibrium::{
    canonical_construction, classify_regimes_with_tol, construct, Construction, RegimeReport,
};
use lobbygame::payoff::{exact_payoffs, simulate, PayoffEstimate};
use lobbygame::profile_doc::ProfileDocument;
use lobbygame::sweep::{run_sweep, write_csv, Range, SweepGrid};
use lobbygame::verify::verify_equilibrium;
use lobbygame::{fmt_num, round_sig, validate_params, Capacity, GameError, Params, Payoffs, Profile, RawParams};

#[derive(Parser, Debug)]
#[command(
    name = "lobbygame",
    version,
    about = "Lobbying and access game: equilibria, verification, payoffs, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the regime and print the equilibrium profile
    Solve(SolveArgs),
    /// Check a profile document for equilibrium (exit 0 iff it passes)
    Verify(VerifyArgs),
    /// Exact expected payoffs
    Payoffs(PayoffArgs),
    /// Monte Carlo payoff estimate
    Simulate(SimulateArgs),
    /// Evaluate a parameter grid into CSV
    Sweep(SweepArgs),
    /// Quadrant and anomaly accounting for country data
    Quadrants(QuadrantArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Regime {
    Truthful,
    OverLobbying,
    SilentSecond,
}

#[derive(Args, Debug, Clone)]
struct GameArgs {
    #[arg(long)]
    pi1: f64,
    #[arg(long)]
    pi2: f64,
    #[arg(long)]
    f1: f64,
    #[arg(long)]
    f2: f64,
    #[arg(long)]
    alpha: f64,
    /// 1 (one reform at most) or 2
    #[arg(long, value_parser = parse_capacity)]
    capacity: Capacity,
    /// Build this equilibrium instead of the one the regime selects
    #[arg(long, value_enum)]
    regime: Option<Regime>,
}

/// Either a full parameter set or a profile document.
#[derive(Args, Debug, Clone)]
struct Source {
    #[arg(long)]
    pi1: Option<f64>,
    #[arg(long)]
    pi2: Option<f64>,
    #[arg(long)]
    f1: Option<f64>,
    #[arg(long)]
    f2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_capacity)]
    capacity: Option<Capacity>,
    #[arg(long, value_enum)]
    regime: Option<Regime>,
    /// Profile document, `-` for stdin
    #[arg(long, conflicts_with_all = ["pi1", "pi2", "f1", "f2", "alpha", "capacity", "regime"])]
    profile: Option<PathBuf>,
}

impl Source {
    fn game(&self) -> Res<GameArgs> {
        match (self.pi1, self.pi2, self.f1, self.f2, self.alpha, self.capacity) {
            (Some(pi1), Some(pi2), Some(f1), Some(f2), Some(alpha), Some(capacity)) => Ok(GameArgs {
                pi1,
                pi2,
                f1,
                f2,
                alpha,
                capacity,
                regime: self.regime,
            }),
            _ => Err(GameError::InvalidArgument(
                "give --profile or all of --pi1 --pi2 --f1 --f2 --alpha --capacity".into(),
            )
            .into()),
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value = "1e-9")]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Profile document, `-` for stdin
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, default_value = "1e-9")]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PayoffArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Start from a named grid; range flags override single axes
    #[arg(long, default_value = "default")]
    grid: String,
    /// MIN:MAX:STEPS or a single value
    #[arg(long)]
    pi1: Option<Range>,
    #[arg(long)]
    pi2: Option<Range>,
    #[arg(long)]
    f1: Option<Range>,
    #[arg(long)]
    f2: Option<Range>,
    #[arg(long)]
    alpha: Option<Range>,
    /// 1, 2 or both
    #[arg(long, default_value = "both")]
    capacity: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also simulate each point with this many trials
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value = "1e-9")]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuadrantArgs {
    #[arg(long)]
    input: PathBuf,
    /// cpia (1-6), percent (0-100) or MIN:MAX
    #[arg(long, default_value = "cpia")]
    scale: IndexScale,
    /// Defaults to the scale midpoint
    #[arg(long)]
    index_cutoff: Option<f64>,
    #[arg(long, default_value_t = 40.0)]
    abundance_cutoff: f64,
    #[arg(long, default_value_t = 1025.0)]
    income_cutoff: f64,
    #[arg(long, default_value = "country")]
    col_name: String,
    #[arg(long, default_value = "index")]
    col_index: String,
    #[arg(long, default_value = "abundance")]
    col_abundance: String,
    #[arg(long, default_value = "gni")]
    col_gni: String,
    #[arg(long, default_value = "income_class")]
    col_income: String,
    /// comma, tab or auto
    #[arg(long, default_value = "auto")]
    delimiter: String,
    #[command(flatten)]
    output: Output,
    /// Per-country CSV
    #[arg(long)]
    countries_out: Option<PathBuf>,
}

fn parse_capacity(s: &str) -> Result<Capacity, String> {
    s.parse::<Capacity>()
        .map_err(|_| format!("capacity must be 1 or 2, got '{s}'"))
}

enum Failure {
    Game(GameError),
    Empirics(EmpiricsError),
    Io(String),
    /// Already reported; carry the exit code.
    Exit(i32),
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        Failure::Game(e)
    }
}

impl From<EmpiricsError> for Failure {
    fn from(e: EmpiricsError) -> Self {
        Failure::Empirics(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<lobbygame::ParamError> for Failure {
    fn from(e: lobbygame::ParamError) -> Self {
        Failure::Game(e.into())
    }
}

type Res<T = ()> = Result<T, Failure>;

/// Runs the command line and returns the exit status: 0 success, 1 domain
/// error or failed verification, 2 bad arguments or out-of-range parameters.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Payoffs(a) => payoffs(a, stdout),
        Command::Simulate(a) => simulate_cmd(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Quadrants(a) => quadrants(a, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Exit(code)) => code,
        Err(Failure::Game(e)) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.name());
            match e {
                GameError::Params(_) | GameError::InvalidArgument(_) => 2,
                _ => 1,
            }
        }
        Err(Failure::Empirics(e)) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.name());
            match e {
                EmpiricsError::InvalidThresholds(_) => 2,
                _ => 1,
            }
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(stderr, "error[Io]: {m}");
            1
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Res {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_input(path: &Path) -> Res<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn num(v: f64) -> Value {
    let r = round_sig(v, 12);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn construction_for(regime: Regime, capacity: Capacity) -> Res<Construction> {
    match (regime, capacity) {
        (Regime::Truthful, Capacity::N2) => Ok(Construction::Lemma1Truthful),
        (Regime::OverLobbying, Capacity::N2) => Ok(Construction::Lemma1OverLobbying),
        (Regime::SilentSecond, Capacity::N1) => Ok(Construction::Lemma2SilentSecond),
        (Regime::Truthful, Capacity::N1) => Ok(Construction::Lemma2Truthful),
        (r, c) => Err(GameError::RegimeMismatch(format!("no {r:?} equilibrium is built for capacity {c}")).into()),
    }
}

fn build(game: &GameArgs) -> Res<(Params, Construction, Profile)> {
    let params: Params = validate_params(&RawParams {
        pi1: game.pi1,
        pi2: game.pi2,
        f1: game.f1,
        f2: game.f2,
        alpha: game.alpha,
        capacity: game.capacity,
    })?;
    let c = match game.regime {
        Some(r) => construction_for(r, game.capacity)?,
        None => canonical_construction(&params)?,
    };
    let profile = construct(&params, c)?;
    Ok((params, c, profile))
}

fn load_source(source: &Source) -> Res<(Params, Profile, Option<String>)> {
    match &source.profile {
        Some(path) => {
            let doc = ProfileDocument::parse(&read_input(path)?)?;
            Ok((doc.params, doc.profile, doc.construction))
        }
        None => {
            let (p, c, prof) = build(&source.game()?)?;
            Ok((p, prof, Some(c.name().to_string())))
        }
    }
}

fn regime_entries(r: &RegimeReport<f64>) -> Vec<(&'static str, String)> {
    vec![
        ("lobbying_ratio", fmt_num(r.lobbying_ratio)),
        ("lemma1_regime", r.lemma1.to_string()),
        ("lemma2_regime", r.lemma2.to_string()),
        ("region", r.region.to_string()),
        ("region2_empty", r.region2_empty.to_string()),
        ("pareto_lhs", fmt_num(r.pareto_lhs)),
        ("pareto_condition", r.pareto_condition.to_string()),
        ("boundary", r.is_boundary().to_string()),
    ]
}

fn doc_entries(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| {
            let l = l.split('#').next()?.trim();
            let (k, v) = l.split_once('=')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn solve(a: SolveArgs, stdout: &mut dyn Write) -> Res {
    let (params, c, profile) = build(&a.game)?;
    let regimes = classify_regimes_with_tol(&params, &a.tol);
    let doc = ProfileDocument::new(&params, &profile, Some(c.name())).render();
    let text = match a.output.format {
        Format::Text => {
            let mut s = String::new();
            for (k, v) in regime_entries(&regimes) {
                s.push_str(&format!("# {k}: {v}\n"));
            }
            s.push_str(&doc);
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in regime_entries(&regimes) {
                s.push_str(&format!("{k},{v}\n"));
            }
            for (k, v) in doc_entries(&doc) {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
        Format::Json => {
            let mut regime = Map::new();
            for (k, v) in regime_entries(&regimes) {
                regime.insert(k.into(), Value::String(v));
            }
            let mut prof = Map::new();
            for (k, v) in doc_entries(&doc) {
                prof.insert(k, Value::String(v));
            }
            let v = json!({ "regime": regime, "profile": prof, "document": doc });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    emit(&a.output.out, &text, stdout)
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Res {
    if !(a.tol > 0.0) {
        return Err(GameError::InvalidArgument("tol must be positive".into()).into());
    }
    let doc = ProfileDocument::parse(&read_input(&a.profile)?)?;
    let report = verify_equilibrium(&doc.profile, &doc.params, &a.tol)?;
    let lines = report.lines();
    let text = match a.output.format {
        Format::Text => lines.join("\n") + "\n",
        Format::Csv => {
            let mut s = String::from("status,condition,detail\n");
            for l in &lines {
                let mut parts = l.splitn(3, ' ');
                let status = parts.next().unwrap_or("");
                let cond = parts.next().unwrap_or("");
                let detail = parts.next().unwrap_or("");
                s.push_str(&format!("{status},{cond},\"{detail}\"\n"));
            }
            s
        }
        Format::Json => {
            let v = json!({
                "passed": report.passed(),
                "bayes_ok": report.bayes_ok(),
                "lobby_foc_ok": report.lobby_foc_ok(),
                "access_ok": report.access_ok(),
                "policy_ok": report.policy_ok(),
                "max_violation": num(report.max_violation),
                "tol": num(a.tol),
                "lines": lines,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    emit(&a.output.out, &text, stdout)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Exit(1))
    }
}

fn payoff_text(eu: &Payoffs, format: Format) -> String {
    let c = eu.components();
    match format {
        Format::Text => format!(
            "eu_gi1 = {}\neu_gi2 = {}\neu_dp = {}\n",
            fmt_num(c[0]),
            fmt_num(c[1]),
            fmt_num(c[2])
        ),
        Format::Csv => format!(
            "eu_gi1,eu_gi2,eu_dp\n{},{},{}\n",
            fmt_num(c[0]),
            fmt_num(c[1]),
            fmt_num(c[2])
        ),
        Format::Json => {
            let v = json!({ "eu_gi1": num(c[0]), "eu_gi2": num(c[1]), "eu_dp": num(c[2]) });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn payoffs(a: PayoffArgs, stdout: &mut dyn Write) -> Res {
    let (params, profile, _) = load_source(&a.source)?;
    let eu = exact_payoffs(&profile, &params)?;
    emit(&a.output.out, &payoff_text(&eu, a.output.format), stdout)
}

fn estimate_text(est: &PayoffEstimate, format: Format) -> String {
    let m = est.mean.components().map(fmt_num);
    let se = est
        .stderr
        .as_ref()
        .map_or([(); 3].map(|_| "NA".to_string()), |s| s.components().map(fmt_num));
    match format {
        Format::Text => format!(
            "trials = {}\nseed = {}\nrng = {}\nmean = {} {} {}\nstderr = {} {} {}\n",
            est.trials, est.seed, est.rng, m[0], m[1], m[2], se[0], se[1], se[2]
        ),
        Format::Csv => format!(
            "trials,seed,rng,mean_gi1,mean_gi2,mean_dp,se_gi1,se_gi2,se_dp\n{},{},{},{},{},{},{},{},{}\n",
            est.trials, est.seed, est.rng, m[0], m[1], m[2], se[0], se[1], se[2]
        ),
        Format::Json => {
            let c = est.mean.components();
            let stderr = est.stderr.as_ref().map_or(Value::Null, |s| {
                let s = s.components();
                json!({ "eu_gi1": num(s[0]), "eu_gi2": num(s[1]), "eu_dp": num(s[2]) })
            });
            let v = json!({
                "trials": est.trials,
                "seed": est.seed,
                "rng": est.rng,
                "mean": { "eu_gi1": num(c[0]), "eu_gi2": num(c[1]), "eu_dp": num(c[2]) },
                "stderr": stderr,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    }
}

fn simulate_cmd(a: SimulateArgs, stdout: &mut dyn Write) -> Res {
    let (params, profile, _) = load_source(&a.source)?;
    let est = simulate(&profile, &params, a.trials, a.seed)?;
    emit(&a.output.out, &estimate_text(&est, a.output.format), stdout)
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> Res {
    let mut grid = match a.grid.as_str() {
        "default" => SweepGrid::default(),
        other => return Err(GameError::InvalidArgument(format!("unknown grid '{other}'")).into()),
    };
    for (slot, r) in [
        (&mut grid.pi1, a.pi1),
        (&mut grid.pi2, a.pi2),
        (&mut grid.f1, a.f1),
        (&mut grid.f2, a.f2),
        (&mut grid.alpha, a.alpha),
    ] {
        if let Some(r) = r {
            *slot = r;
        }
    }
    grid.capacities = match a.capacity.as_str() {
        "both" => vec![Capacity::N1, Capacity::N2],
        c => vec![parse_capacity(c).map_err(GameError::InvalidArgument)?],
    };
    grid.seed = a.seed;
    grid.sim_trials = a.trials;
    grid.tol = a.tol;
    let rows = run_sweep(&grid)?;
    let text = match a.format {
        Format::Csv | Format::Text => {
            let mut buf = Vec::new();
            write_csv(&rows, grid.sim_trials.is_some(), &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => {
            let v = serde_json::to_value(&rows).expect("json");
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    emit(&a.out, &text, stdout)
}

fn quadrants(a: QuadrantArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    let mut t = Thresholds::for_scale(a.scale);
    if let Some(c) = a.index_cutoff {
        t.index_high_cutoff = c;
    }
    t.abundance_cutoff = a.abundance_cutoff;
    t.income_low_cutoff = a.income_cutoff;
    t.validate()?;
    let delimiter = match a.delimiter.as_str() {
        "auto" => None,
        "comma" | "," => Some(b','),
        "tab" | "\\t" => Some(b'\t'),
        d => return Err(GameError::InvalidArgument(format!("unknown delimiter '{d}'")).into()),
    };
    let mapping = ColumnMapping {
        name: a.col_name,
        index: a.col_index,
        abundance: a.col_abundance,
        gni: Some(a.col_gni),
        income_class: Some(a.col_income),
    };
    let loaded = load_countries(&a.input, &mapping, &t, delimiter)?;
    for d in &loaded.diagnostics {
        writeln!(stderr, "{d}")?;
    }
    let table = anomaly_table(&loaded.records, &t)?;
    for d in table.boundary_diagnostics() {
        writeln!(stderr, "{d}")?;
    }
    let text = match a.output.format {
        Format::Text => table.to_text(),
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_quadrant_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => {
            let v = serde_json::to_value(&table).expect("json");
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    emit(&a.output.out, &text, stdout)?;
    if let Some(path) = &a.countries_out {
        let mut buf = Vec::new();
        table.write_country_csv(&mut buf)?;
        fs::write(path, buf)?;
    }
    Ok(())
}
