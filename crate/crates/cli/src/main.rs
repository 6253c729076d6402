mod args;
mod config;
mod error;
mod source;
mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use snowball_core::bench::{estimate_success, mode_name, write_csv, write_gset, write_json, RunRecord, SuccessTarget, TtsEstimate};
use snowball_core::{run, InitialState};

use args::{Cli, Command, GenArgs, InfoArgs, RunArgs, TargetArgs, TtsArgs};
use error::{CliError, CliResult};
use source::{load, planes_needed, Loaded};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Tts(a) => tts(&a),
        Command::Verify(a) => {
            let failed = verify::run_all(a.seed);
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(failed.join(", ")))
            }
        }
        Command::Gen(a) => gen(&a),
        Command::Info(a) => info(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("snowball: {e}");
            e.exit_code()
        }
    }
}

fn create(flag: &str, path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("{flag} {}: {e}", path.display())))
}

fn output_error(flag: &str, path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{flag} {}: {e}", path.display()))
}

fn target(args: &TargetArgs, loaded: &Loaded) -> Option<SuccessTarget> {
    match (args.target_cut, args.target_energy) {
        (Some(c), _) => Some(SuccessTarget::Cut(c)),
        (_, Some(e)) => Some(SuccessTarget::Energy(e)),
        _ => loaded.default_target_cut.map(SuccessTarget::Cut),
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    instance: &'a str,
    mode: &'static str,
    uniformized: bool,
    seed: u64,
    steps: u64,
    best_cut: Option<i64>,
    best_energy: i64,
    final_energy: i64,
    flips: u64,
    fallbacks: u64,
    null_transitions: u64,
    success: Option<bool>,
    planted_recovered: Option<bool>,
    kernel_ms: f64,
    total_ms: f64,
}

fn solve(a: &RunArgs) -> CliResult<()> {
    let loaded = load(&a.source)?;
    let cfg = config::engine_config(&a.engine, loaded.instance.n(), loaded.min_planes())?;
    let report = run(&loaded.instance, &cfg, InitialState::Random).map_err(|e| CliError::Input(e.to_string()))?;
    let success = target(&a.target, &loaded).map(|t| match t {
        SuccessTarget::Cut(c) => report.best_cut.is_some_and(|v| v >= c),
        SuccessTarget::Energy(e) => report.best_energy <= e,
    });
    let planted_recovered = loaded
        .planted
        .as_ref()
        .map(|(s, _)| report.best_state == *s || report.best_state == s.global_flip());
    let summary = SolveSummary {
        instance: &loaded.label,
        mode: mode_name(cfg.mode),
        uniformized: cfg.uniformized,
        seed: cfg.seed,
        steps: report.steps,
        best_cut: report.best_cut,
        best_energy: report.best_energy,
        final_energy: report.final_energy,
        flips: report.flip_count,
        fallbacks: report.fallback_count,
        null_transitions: report.null_transition_count,
        success,
        planted_recovered,
        kernel_ms: report.kernel_time.as_secs_f64() * 1e3,
        total_ms: report.total_time.as_secs_f64() * 1e3,
    };
    if let Some(path) = &a.output.csv {
        let rec = RunRecord::new(&loaded.label, cfg.mode, &report, success);
        write_csv(create("--csv", path)?, &[rec]).map_err(|e| output_error("--csv", path, e))?;
    }
    if let Some(path) = &a.output.json {
        write_json(create("--json", path)?, &summary).map_err(|e| output_error("--json", path, e))?;
    }
    let cut = report.best_cut.map(|c| format!("best_cut={c} ")).unwrap_or_default();
    let planted = planted_recovered.map(|r| format!(" planted_recovered={r}")).unwrap_or_default();
    println!(
        "{} {} seed={} steps={}: {cut}best_energy={} flips={} kernel={:.3}ms total={:.3}ms{planted}",
        summary.instance, summary.mode, summary.seed, summary.steps, summary.best_energy, summary.flips, summary.kernel_ms,
        summary.total_ms,
    );
    Ok(())
}

fn tts(a: &TtsArgs) -> CliResult<()> {
    if !(a.p > 0.0 && a.p < 1.0) {
        return Err(CliError::Usage(format!("--p must lie in (0, 1), got {}", a.p)));
    }
    if a.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let loaded = load(&a.run.source)?;
    let cfg = config::engine_config(&a.run.engine, loaded.instance.n(), loaded.min_planes())?;
    let target = target(&a.run.target, &loaded)
        .ok_or_else(|| CliError::Usage("tts needs --target-cut or --target-energy for this source".into()))?;
    let est = estimate_success(&loaded.instance, &cfg, target, a.runs).map_err(|e| CliError::Input(e.to_string()))?;
    let summary = TtsEstimate::from_success(&loaded.label, a.p, &est).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &a.run.output.csv {
        write_csv(create("--csv", path)?, &est.records).map_err(|e| output_error("--csv", path, e))?;
    }
    if let Some(path) = &a.run.output.json {
        write_json(create("--json", path)?, &summary).map_err(|e| output_error("--json", path, e))?;
    }
    let tts = summary.tts_ms.map(|t| format!("{t:.3}ms")).unwrap_or_else(|| "inf".into());
    println!(
        "{} {}: P_a={:.3} [{:.3}, {:.3}] over {} runs, t_a={:.3}ms, TTS({})={tts}",
        summary.instance,
        mode_name(cfg.mode),
        summary.p_a,
        summary.ci_low,
        summary.ci_high,
        summary.runs,
        summary.t_a_ms,
        summary.p,
    );
    Ok(())
}

fn gen(a: &GenArgs) -> CliResult<()> {
    let loaded = load(&a.source)?;
    let text = write_gset(&loaded.graph);
    match &a.out {
        Some(path) => {
            let mut w = create("--out", path)?;
            w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| output_error("--out", path, e))?;
            println!("{}: wrote {} vertices, {} edges to {}", loaded.label, loaded.graph.n_vertices(), loaded.graph.edge_count(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn info(a: &InfoArgs) -> CliResult<()> {
    let loaded = load(&a.source)?;
    let g = &loaded.graph;
    let max_w = g.edges().iter().map(|e| e.weight.abs()).max().unwrap_or(0);
    println!("instance      {}", loaded.label);
    println!("vertices      {}", g.n_vertices());
    println!("edges         {} ({} positive, {} negative)", g.edge_count(), g.positive_edges(), g.negative_edges());
    println!("total weight  {}", g.total_weight());
    println!("density       {:.4}", g.density());
    println!("max |w|       {max_w} ({} bit planes)", planes_needed(max_w));
    if let Some((_, cut)) = &loaded.planted {
        println!("planted cut   {cut}");
    }
    if let Some(c) = loaded.default_target_cut {
        println!("target cut    {c}");
    }
    Ok(())
}
