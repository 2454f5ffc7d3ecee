use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bolza_core::acceptance::{self, Options, Status};
use bolza_core::graph::{build_arrangement, face_census, is_filling, signature_string};
use bolza_core::intersection::{complexity_table, gamma_set, sweep_by_crossings, sweep_by_length};
use bolza_core::model::Bolza;
use bolza_core::par::Exec;
use bolza_core::real::Real;
use bolza_core::render::{render_svg, Layer, RenderSpec, MAX_DEPTH};
use bolza_core::spectrum::{length_spectrum, SearchOptions};
use bolza_core::systems::{derive_records, format_records, systole_length, CurveSystem, Systems};
use bolza_core::word::Word;
use bolza_core::{Config, Error as CoreError, Hp, Precision};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Exit status for results that could not be certified.
const UNCERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(name = "bolza", version, about = "Closed geodesics and curve systems on the Bolza surface")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
    /// Worker threads; 0 lets the pool decide, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Re-derive the curve systems by enumeration instead of loading the frozen file, and
    /// write the regenerated file to `curve_systems.txt` in the working directory.
    #[arg(long, global = true)]
    rebuild_certificates: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Length spectrum: lengths, exact traces and multiplicities.
    Spectrum {
        #[arg(long, default_value_t = 5.0)]
        max_length: f64,
    },
    /// Cumulative counts T_k of simple classes by intersection with the systoles.
    Complexity {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// Sweep by length instead of by crossings; rows beyond its reach are uncertified.
        #[arg(long)]
        max_length: Option<f64>,
        /// Exit with status 2 if any row is uncertified.
        #[arg(long)]
        certified_only: bool,
    },
    /// Arrangement graph of a curve system.
    Graph {
        #[arg(long, value_enum, default_value_t = SystemArg::Sys)]
        system: SystemArg,
        /// Comma-separated words forming a custom system (overrides --system).
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        /// Also write the abstract graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// SVG picture of curve systems over the octagon tessellation.
    Render {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "sys")]
        system: Vec<SystemArg>,
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long)]
        no_weierstrass: bool,
    },
    /// Runs the acceptance suite; exit status 1 if any criterion fails.
    Verify {
        /// Largest complexity to certify; criteria that need more are skipped.
        #[arg(long, default_value_t = 11)]
        kmax: usize,
        /// Comma-separated criterion numbers to run.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Perturbs one generator entry by this relative amount (negative control).
        #[arg(long, hide = true)]
        perturb: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    High,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Sys,
    Omega1,
    Omega2,
    Second,
    Gamma,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let incomplete = e.chain().any(|c| matches!(c.downcast_ref::<CoreError>(), Some(CoreError::Incomplete { .. })));
            ExitCode::from(if incomplete { UNCERTIFIED } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if let Command::Verify { kmax, only, samples, perturb } = &cli.command {
        return verify(&cli.global, *kmax, only, *samples, *perturb);
    }
    match cli.global.precision {
        PrecisionArg::Double => dispatch(cli, Bolza::<f64>::new(config(&cli.global, Precision::Double))?),
        PrecisionArg::High => dispatch(cli, Bolza::<Hp>::new(config(&cli.global, Precision::High))?),
    }
}

fn config(g: &Global, p: Precision) -> Config {
    let mut cfg = Config::new(p);
    cfg.jobs = g.jobs;
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg
}

fn dispatch<R: Real>(cli: &Cli, model: Bolza<R>) -> Result<u8> {
    let g = &cli.global;
    let exec = Exec::from_jobs(g.jobs);
    match &cli.command {
        Command::Spectrum { max_length } => spectrum(g, &model, *max_length, exec),
        Command::Complexity { kmax, max_length, certified_only } => {
            complexity(g, &model, &systems(g, &model, exec)?, *kmax, *max_length, *certified_only, exec)
        }
        Command::Graph { system, words, dot } => {
            let s = systems(g, &model, exec)?;
            let chosen = pick(&model, &s, *system, words, exec)?;
            graph(g, &model, &chosen, dot.as_ref())
        }
        Command::Render { system, words, depth, size, no_weierstrass } => {
            if *depth > MAX_DEPTH {
                bail!("tile depth {depth} exceeds {MAX_DEPTH}");
            }
            let s = systems(g, &model, exec)?;
            let mut layers = Vec::new();
            if words.is_empty() {
                for &k in system {
                    layers.push(Layer { system: pick(&model, &s, k, &[], exec)?, color: None });
                }
            } else {
                layers.push(Layer { system: pick(&model, &s, SystemArg::Sys, words, exec)?, color: None });
            }
            let spec = RenderSpec { layers, depth: *depth, size: *size, weierstrass: !no_weierstrass };
            emit(g, &render_svg(&model, &spec)?)?;
            Ok(0)
        }
        Command::Verify { .. } => unreachable!("handled before model construction"),
    }
}

fn systems<R: Real>(g: &Global, model: &Bolza<R>, exec: Exec) -> Result<Systems> {
    if !g.rebuild_certificates {
        return Ok(Systems::load(model)?);
    }
    let records = derive_records(model, exec)?;
    let path = PathBuf::from("curve_systems.txt");
    fs::write(&path, format_records(&records)).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("rebuilt curve systems written to {}", path.display());
    Ok(Systems::from_records(model, &records)?)
}

fn pick<R: Real>(model: &Bolza<R>, s: &Systems, which: SystemArg, words: &[String], exec: Exec) -> Result<CurveSystem> {
    if !words.is_empty() {
        let ws = words.iter().map(|w| w.parse::<Word>()).collect::<std::result::Result<Vec<_>, _>>()?;
        return Ok(CurveSystem::from_words(model, "custom", &ws)?);
    }
    Ok(match which {
        SystemArg::Sys => s.sys.clone(),
        SystemArg::Omega1 => s.omega1.clone(),
        SystemArg::Omega2 => s.omega2.clone(),
        SystemArg::Second => s.second.clone(),
        SystemArg::Gamma => gamma_set(&sweep_by_length(model, s, 10.0 * systole_length() / 2.0 + 1e-9, exec)?),
    })
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

/// Pretty JSON with keys sorted (`serde_json::Value` objects are ordered maps).
fn json_text(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn spectrum<R: Real>(g: &Global, model: &Bolza<R>, max_length: f64, exec: Exec) -> Result<u8> {
    let t = length_spectrum(model, max_length, SearchOptions { exec, ..SearchOptions::default() })?;
    let trace = |r: &bolza_core::spectrum::SpectrumRow| r.trace.map(|q| (q.p, q.q));
    let text = match g.format {
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "length": r.length,
                        "trace_p": trace(r).map(|x| x.0),
                        "trace_q": trace(r).map(|x| x.1),
                        "mult_total": r.mult_total,
                        "mult_simple": r.mult_simple,
                        "words": r.words,
                    })
                })
                .collect();
            json_text(&json!({ "max_length": max_length, "certified": t.certified, "rows": rows }))?
        }
        Format::Csv => csv_text(
            &["length", "trace_p", "trace_q", "mult_total", "mult_simple", "words"],
            t.rows
                .iter()
                .map(|r| {
                    let (p, q) = trace(r).map_or((String::new(), String::new()), |(p, q)| (p.to_string(), q.to_string()));
                    vec![r.length.to_string(), p, q, r.mult_total.to_string(), r.mult_simple.to_string(), r.words.join(" ")]
                })
                .collect(),
        )?,
    };
    emit(g, &text)?;
    if !t.certified {
        eprintln!("enumeration to length {max_length} is not saturated");
        return Ok(UNCERTIFIED);
    }
    Ok(0)
}

fn complexity<R: Real>(
    g: &Global,
    model: &Bolza<R>,
    s: &Systems,
    kmax: usize,
    max_length: Option<f64>,
    certified_only: bool,
    exec: Exec,
) -> Result<u8> {
    let sweep = match max_length {
        Some(l) => sweep_by_length(model, s, l, exec)?,
        None => sweep_by_crossings(model, s, kmax, exec)?,
    };
    let rows = complexity_table(&sweep, kmax);
    let text = match g.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let words: Vec<&str> = r.witnesses.iter().map(|w| w.word.as_str()).collect();
                    json!({ "k": r.k, "T_k": r.t_k, "certified": r.certified, "witnesses": words })
                })
                .collect();
            json_text(&Value::Array(rows))?
        }
        Format::Csv => csv_text(
            &["k", "T_k", "certified", "witnesses"],
            rows.iter()
                .map(|r| {
                    let words: Vec<&str> = r.witnesses.iter().map(|w| w.word.as_str()).collect();
                    vec![r.k.to_string(), r.t_k.to_string(), r.certified.to_string(), words.join(" ")]
                })
                .collect(),
        )?,
    };
    emit(g, &text)?;
    let open: Vec<usize> = rows.iter().filter(|r| !r.certified).map(|r| r.k).collect();
    if certified_only && !open.is_empty() {
        eprintln!("uncertified rows: k = {open:?}");
        return Ok(UNCERTIFIED);
    }
    Ok(0)
}

fn graph<R: Real>(g: &Global, model: &Bolza<R>, s: &CurveSystem, dot: Option<&PathBuf>) -> Result<u8> {
    let filling = is_filling(model, s)?;
    let arrangement = if filling { Some(build_arrangement(model, s)?) } else { None };
    let census: Vec<(String, usize)> = arrangement
        .as_ref()
        .map(|a| face_census(a).entries.iter().map(|(sig, n)| (signature_string(sig), *n)).collect())
        .unwrap_or_default();
    let text = match g.format {
        Format::Json => {
            let counts = |f: fn(&bolza_core::graph::SurfaceGraph) -> usize| arrangement.as_ref().map(f);
            json_text(&json!({
                "system": s.name,
                "words": s.classes.iter().map(|c| c.word.to_string()).collect::<Vec<_>>(),
                "V": counts(|a| a.vertices.len()),
                "E": counts(|a| a.edges.len()),
                "F": counts(|a| a.faces.len()),
                "euler": arrangement.as_ref().map(|a| a.euler()),
                "filling": filling,
                "census": census.iter().map(|(sig, n)| json!({ "signature": sig, "count": n })).collect::<Vec<_>>(),
            }))?
        }
        Format::Csv => csv_text(&["signature", "count"], census.iter().map(|(s, n)| vec![s.clone(), n.to_string()]).collect())?,
    };
    emit(g, &text)?;
    if let Some(path) = dot {
        let Some(a) = &arrangement else { bail!("{} does not fill, so it has no cellular graph to export", s.name) };
        fs::write(path, a.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn verify(g: &Global, kmax: usize, only: &[u8], samples: usize, perturb: Option<f64>) -> Result<u8> {
    if g.format == Format::Csv {
        bail!("verify reports only in JSON");
    }
    let mut opts = Options { kmax, exec: Exec::from_jobs(g.jobs), samples, perturb, ..Options::default() };
    if let Some(s) = g.seed {
        opts.seed = s;
    }
    let report = acceptance::run(opts, if only.is_empty() { None } else { Some(only) });
    emit(g, &json_text(&serde_json::to_value(&report)?)?)?;
    for c in &report.criteria {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        eprintln!("[{tag}] {:>2} {}: {}", c.id, c.title, c.detail);
    }
    let failing = report.failing();
    if failing.is_empty() {
        Ok(0)
    } else {
        eprintln!("failing criteria: {failing:?}");
        Ok(1)
    }
}
