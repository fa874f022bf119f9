//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error. Every error path
//! prints one line `error: kind=<kind> reason=<text>` to stderr.

use anyhow::{Context, Result};
use chrono::NaiveDateTime;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mrt_core::backtest::{self, parse_timestamp, Period, QuoteSeries};
use mrt_core::bids::{render_table, TableFormat, TableKind};
use mrt_core::chart::{estimate_exponent, fake_chart_component, percent_to_prices, uniform_grid, ChartSeries, FakeComponent};
use mrt_core::config;
use mrt_core::optimize::{optimize, weights, BacktestObjective, OptOptions, OptResult, ParamSpace, WeightRule};
use mrt_core::pont::service::{SeatKind, SessionSpec};
use mrt_core::pont::{GameConfig, Players, Variant};
use mrt_core::EngineConfig;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

/// Environment variable naming the pont session directory.
pub const DATA_ENV: &str = "MRT_PONT_DATA";

#[derive(Parser, Debug)]
#[command(name = "mrt", version, about = "Momentum risk-taking toolkit and pont card game")]
pub struct Cli {
    /// Print the effective configuration (defaults < config file < flags) before running.
    #[arg(long, global = true)]
    pub show_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the return and minimal-bid tables.
    Tables {
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Write the model chart (percent) or prices derived from it.
    FakeChart(FakeChartArgs),
    /// Estimate the power-law exponent of a chart CSV (`t_hours,value`).
    EstimateR {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Replay the trading engine over quotes and report per-level metrics.
    Backtest(BacktestArgs),
    /// Search engine parameters maximizing return per position.
    Optimize(OptimizeArgs),
    /// The pont card game.
    Pont {
        #[command(subcommand)]
        command: PontCommand,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    All,
    Super,
    Ultra,
    Extra,
    Regular,
    #[value(name = "min-4cat")]
    Min4Cat,
    #[value(name = "min-7cat")]
    Min7Cat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    Both,
    Super,
    Ultra,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChartFormat {
    /// `t_hours,value` percent chart.
    Chart,
    /// `timestamp,symbol,price` hourly quotes at 100·(1 + p/100).
    Quotes,
}

#[derive(Args, Debug)]
pub struct FakeChartArgs {
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ComponentArg::Both)]
    component: ComponentArg,
    /// First sample time in hours (≥ 1).
    #[arg(long, default_value_t = 1.0)]
    from: f64,
    /// Last sample time in hours.
    #[arg(long, default_value_t = 150.0)]
    to: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, value_enum, default_value_t = ChartFormat::Chart)]
    format: ChartFormat,
    /// Symbol for `--format quotes`.
    #[arg(long, default_value = "FAKE")]
    symbol: String,
    /// Timestamp of the first quote for `--format quotes`.
    #[arg(long, value_parser = iso, default_value = "2024-01-01T00:00:00")]
    start: NaiveDateTime,
}

#[derive(Args, Debug)]
pub struct EngineArgs {
    /// `timestamp,symbol,price` CSV.
    #[arg(long, value_name = "FILE")]
    quotes: PathBuf,
    /// Flat key=value engine configuration.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `--set beta=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, value_parser = iso)]
    from: NaiveDateTime,
    #[arg(long, value_parser = iso)]
    to: NaiveDateTime,
    /// Restrict to one symbol of the quote file.
    #[arg(long)]
    symbol: Option<String>,
}

#[derive(Args, Debug)]
pub struct BacktestArgs {
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    report: FormatArg,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Best parameters as a key=value config the backtester reads.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// JSON results for company weights (default: `<out>.json`).
    #[arg(long, value_name = "FILE")]
    results: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Outer coordinate-ascent iterations.
    #[arg(long, default_value_t = 8)]
    max_outer: usize,
    /// Extra seeded runs; the best result is kept.
    #[arg(long, default_value_t = 0)]
    restarts: u64,
    /// Minimum education span in business days.
    #[arg(long, default_value_t = 126.0)]
    min_days: f64,
    /// Accept only configs whose mean position length (days) lies in LO,HI.
    #[arg(long, value_name = "LO,HI", value_parser = band)]
    duration_band: Option<(f64, f64)>,
    /// `cutoff:X`, `proportional` or `top:K`.
    #[arg(long, default_value = "cutoff:0")]
    rule: String,
}

#[derive(Subcommand, Debug)]
pub enum PontCommand {
    /// Serve sessions over HTTP and websocket.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// Session log directory (in-memory when absent).
        #[arg(long, env = DATA_ENV)]
        data: Option<PathBuf>,
    },
    /// Play in the terminal through the same service layer.
    Play(PlayArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PlayArgs {
    /// Comma-separated seat kinds, e.g. `human,bot,bot`.
    #[arg(long, default_value = "human,bot,bot")]
    pub seats: String,
    /// `2`, `3`, `4` or `2x2` (default: from the number of seats).
    #[arg(long)]
    pub players: Option<String>,
    /// `full`, `basic` or `poker`.
    #[arg(long, default_value = "full")]
    pub variant: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub bot_seed: u64,
    #[arg(long, default_value_t = 0)]
    pub dealer: usize,
    /// Play every trick even when the outcome is decided.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, env = DATA_ENV)]
    pub data: Option<PathBuf>,
}

fn iso(s: &str) -> std::result::Result<NaiveDateTime, String> {
    parse_timestamp(s).ok_or_else(|| format!("'{s}' is not an ISO-8601 date or date-time"))
}

fn band(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad number '{a}'"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad number '{b}'"))?;
    if lo > hi {
        return Err(format!("{lo} > {hi}"));
    }
    Ok((lo, hi))
}

/// Parse `argv`, dispatch, and map the outcome to an exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            1
        }
    }
}

/// The single-line error report.
pub fn error_line(e: &anyhow::Error) -> String {
    let kind = e
        .chain()
        .find_map(|c| c.downcast_ref::<mrt_core::Error>().map(|e| e.kind()))
        .or_else(|| e.chain().find_map(|c| c.downcast_ref::<std::io::Error>().map(|_| "io")))
        .unwrap_or("error");
    let reason = format!("{e:#}").replace(['\n', '\r'], " ");
    format!("error: kind={kind} reason={reason}")
}

fn show(enabled: bool, pairs: &[(&str, String)]) {
    if enabled {
        println!("# effective config");
        for (k, v) in pairs {
            println!("{k}={v}");
        }
    }
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let sc = cli.show_config;
    match cli.command {
        Command::Tables { kind, format } => {
            show(sc, &[("kind", format!("{kind:?}").to_lowercase()), ("format", format!("{format:?}").to_lowercase())]);
            print!("{}", tables(kind, format));
            Ok(())
        }
        Command::FakeChart(a) => {
            show(
                sc,
                &[
                    ("component", format!("{:?}", a.component).to_lowercase()),
                    ("from", a.from.to_string()),
                    ("to", a.to.to_string()),
                    ("step", a.step.to_string()),
                    ("format", format!("{:?}", a.format).to_lowercase()),
                ],
            );
            fake_chart_cmd(&a)
        }
        Command::EstimateR { input } => {
            show(sc, &[("in", input.display().to_string())]);
            let f = fs::File::open(&input).with_context(|| format!("cannot open {}", input.display()))?;
            let chart = ChartSeries::read_csv(BufReader::new(f), input.display().to_string())?;
            let r = estimate_exponent(&chart)?;
            println!("r={r:.4} samples={}", chart.len());
            Ok(())
        }
        Command::Backtest(a) => backtest_cmd(&a, sc),
        Command::Optimize(a) => optimize_cmd(&a, sc),
        Command::Pont { command: PontCommand::Serve { port, bind, data } } => {
            show(sc, &[("bind", bind.clone()), ("port", port.to_string()), ("data", data.as_ref().map(|d| d.display().to_string()).unwrap_or_default())]);
            crate::server::serve(&bind, port, data)
        }
        Command::Pont { command: PontCommand::Play(a) } => {
            let spec = play_spec(&a)?;
            if sc {
                println!("# effective config");
                println!("{}", serde_json::to_string(&spec)?);
            }
            let stdin = std::io::stdin();
            crate::play::play(spec, a.data.as_deref(), &mut stdin.lock(), &mut std::io::stdout())
        }
    }
}

fn tables(kind: KindArg, format: FormatArg) -> String {
    let f = match format {
        FormatArg::Text => TableFormat::Text,
        FormatArg::Csv => TableFormat::Csv,
    };
    let kinds: Vec<TableKind> = match kind {
        KindArg::All => TableKind::ALL.to_vec(),
        KindArg::Super => vec![TableKind::Super],
        KindArg::Ultra => vec![TableKind::Ultra],
        KindArg::Extra => vec![TableKind::Extra],
        KindArg::Regular => vec![TableKind::Regular],
        KindArg::Min4Cat => vec![TableKind::Min4Cat],
        KindArg::Min7Cat => vec![TableKind::Min7Cat],
    };
    kinds.iter().map(|&k| render_table(k, f)).collect::<Vec<_>>().join("\n")
}

fn fake_chart_cmd(a: &FakeChartArgs) -> Result<()> {
    let which = match a.component {
        ComponentArg::Both => FakeComponent::Both,
        ComponentArg::Super => FakeComponent::Super,
        ComponentArg::Ultra => FakeComponent::Ultra,
    };
    if !(a.step > 0.0) || a.to < a.from {
        return Err(mrt_core::Error::Config(format!("empty grid from {} to {} step {}", a.from, a.to, a.step)).into());
    }
    let chart = fake_chart_component(&uniform_grid(a.from, a.to, a.step), which)?;
    let mut out = Vec::new();
    match a.format {
        ChartFormat::Chart => chart.write_csv(&mut out)?,
        ChartFormat::Quotes => {
            let q = QuoteSeries::from_prices(a.symbol.clone(), a.start, &percent_to_prices(&chart))?;
            writeln!(out, "timestamp,symbol,price")?;
            for (t, p) in &q.samples {
                writeln!(out, "{},{},{p}", t.format("%Y-%m-%dT%H:%M:%S"), a.symbol)?;
            }
        }
    }
    fs::write(&a.out, out).with_context(|| format!("cannot write {}", a.out.display()))?;
    println!("wrote {} samples to {}", chart.len(), a.out.display());
    Ok(())
}

/// Effective engine config: defaults, then the config file, then `--set`.
fn engine_config(a: &EngineArgs) -> Result<EngineConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            config::parse(&text)?
        }
        None => EngineConfig::default(),
    };
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| mrt_core::Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        config::set_key(&mut cfg, k.trim(), v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_series(a: &EngineArgs) -> Result<Vec<QuoteSeries>> {
    let all = backtest::ingest_csv(&a.quotes)?;
    let series: Vec<QuoteSeries> = match &a.symbol {
        Some(s) => vec![all.get(s).cloned().ok_or_else(|| mrt_core::Error::Empty(format!("symbol {s} not in {}", a.quotes.display())))?],
        None => all.into_values().collect(),
    };
    if series.is_empty() {
        return Err(mrt_core::Error::Empty(format!("no quotes in {}", a.quotes.display())).into());
    }
    Ok(series)
}

fn show_engine(enabled: bool, cfg: &EngineConfig) {
    if enabled {
        println!("# effective config");
        print!("{}", config::render(cfg));
    }
}

fn backtest_cmd(a: &BacktestArgs, sc: bool) -> Result<()> {
    let cfg = engine_config(&a.engine)?;
    show_engine(sc, &cfg);
    let period = Period { from: a.engine.from, to: a.engine.to };
    let mut trades = Vec::new();
    for s in load_series(&a.engine)? {
        let r = backtest::run(&cfg, &s, period)?;
        match a.report {
            FormatArg::Text => print!("{}", backtest::render_report(&cfg, std::slice::from_ref(&r))),
            FormatArg::Csv => trades.extend(r.trades),
        }
    }
    if a.report == FormatArg::Csv {
        print!("{}", backtest::trades_csv(&trades));
    }
    Ok(())
}

#[derive(Serialize)]
struct SymbolResult {
    symbol: String,
    education_return: f64,
    initial_return: f64,
    trades: usize,
    mean_length_days: f64,
    weight: f64,
    params: EngineConfig,
}

#[derive(Serialize)]
struct ResultsFile {
    v: u32,
    rule: String,
    from: String,
    to: String,
    results: Vec<SymbolResult>,
}

fn optimize_cmd(a: &OptimizeArgs, sc: bool) -> Result<()> {
    let start = engine_config(&a.engine)?;
    show_engine(sc, &start);
    let rule = WeightRule::parse(&a.rule)?;
    let period = Period { from: a.engine.from, to: a.engine.to };
    let mut found: Vec<(String, OptResult)> = Vec::new();
    for s in load_series(&a.engine)? {
        let mut obj = BacktestObjective::new(&s, period, &start, a.min_days)?;
        obj.duration_band = a.duration_band;
        let space = ParamSpace::around(start.clone());
        let mut best: Option<OptResult> = None;
        for k in 0..=a.restarts {
            let r = optimize(&space, &obj, OptOptions { max_outer: a.max_outer, seed: a.seed.wrapping_add(k), sweep_discrete: true })?;
            if best.as_ref().map_or(true, |b| r.best.score > b.best.score) {
                best = Some(r);
            }
        }
        let r = best.expect("at least one run");
        println!(
            "{}: return/position {:.4}% over {} trades (default {:.4}%), {} evaluations",
            s.symbol, r.best.score, r.best.num, r.initial.score, r.evaluations
        );
        found.push((s.symbol.clone(), r));
    }
    let scores: Vec<(String, f64)> = found.iter().map(|(s, r)| (s.clone(), r.best.score)).collect();
    let w: BTreeMap<String, f64> = weights(&scores, rule)?;
    // The config file carries the best symbol's parameters (first on ties).
    let (best_sym, best) = found.iter().fold(&found[0], |acc, x| if x.1.best.score > acc.1.best.score { x } else { acc });
    fs::write(&a.out, format!("# optimized on {best_sym}\n{}", config::render(&best.params)))
        .with_context(|| format!("cannot write {}", a.out.display()))?;
    let results_path = a.results.clone().unwrap_or_else(|| json_beside(&a.out));
    let file = ResultsFile {
        v: 1,
        rule: a.rule.clone(),
        from: a.engine.from.to_string(),
        to: a.engine.to.to_string(),
        results: found
            .iter()
            .map(|(s, r)| SymbolResult {
                symbol: s.clone(),
                education_return: r.best.score,
                initial_return: r.initial.score,
                trades: r.best.num,
                mean_length_days: r.best.lngth,
                weight: w[s],
                params: r.params.clone(),
            })
            .collect(),
    };
    // Unusable (-inf) scores serialize as null.
    let json = serde_json::to_string_pretty(&file)?;
    fs::write(&results_path, json + "\n").with_context(|| format!("cannot write {}", results_path.display()))?;
    println!("wrote {} and {}", a.out.display(), results_path.display());
    Ok(())
}

fn json_beside(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Session spec from the terminal-play flags.
pub fn play_spec(a: &PlayArgs) -> Result<SessionSpec> {
    let seats: Vec<SeatKind> = a
        .seats
        .split(',')
        .map(|s| match s.trim() {
            "human" | "h" => Ok(SeatKind::Human),
            "bot" | "b" => Ok(SeatKind::Bot),
            other => Err(mrt_core::Error::Config(format!("unknown seat kind '{other}' (human or bot)"))),
        })
        .collect::<std::result::Result<_, _>>()?;
    let players = match &a.players {
        Some(p) => Players::parse(p)?,
        None => match seats.len() {
            2 => Players::Two,
            3 => Players::Three,
            4 => Players::Four,
            n => return Err(mrt_core::Error::Config(format!("{n} seats; pont is played by 2 to 4")).into()),
        },
    };
    let mut config = GameConfig::new(players, Variant::parse(&a.variant)?, a.seed);
    config.dealer = a.dealer;
    config.strict = a.strict;
    config.validate()?;
    Ok(SessionSpec { config, seats, bot_seed: a.bot_seed, poker: None })
}
