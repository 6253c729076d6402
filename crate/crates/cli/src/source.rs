//! Instance loading for the `--gset | --k2000 | --complete | --planted`
//! sources.

use std::path::Path;

use snowball_core::bench::{gen_complete_random, gen_planted_grid, parse_gset, Bitmap, K2000_TARGET_CUT, K2000_VERTICES};
use snowball_core::model::maxcut_encode;
use snowball_core::{IsingInstance, SpinState, WeightedGraph};

use crate::args::SourceArgs;
use crate::error::{CliError, CliResult};

pub struct Loaded {
    pub label: String,
    pub graph: WeightedGraph,
    pub instance: IsingInstance,
    /// Planted optimum, for bitmap sources.
    pub planted: Option<(SpinState, i64)>,
    /// Success threshold used when none is given on the command line.
    pub default_target_cut: Option<i64>,
}

fn read(flag: &str, path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{flag} {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into())
}

pub fn load(src: &SourceArgs) -> CliResult<Loaded> {
    let input = |flag: &str, e: snowball_core::bench::BenchError| CliError::Input(format!("{flag}: {e}"));
    let (label, graph, planted, default_target_cut) = if let Some(path) = &src.gset {
        let g = parse_gset(&read("--gset", path)?).map_err(|e| input(&format!("--gset {}", path.display()), e))?;
        (stem(path), g, None, None)
    } else if src.k2000 {
        let g = gen_complete_random(K2000_VERTICES, src.graph_seed).map_err(|e| input("--k2000", e))?;
        ("K2000".to_string(), g, None, Some(K2000_TARGET_CUT))
    } else if let Some(n) = src.complete {
        if n < 2 {
            return Err(CliError::Usage(format!("--complete: need at least 2 vertices, got {n}")));
        }
        let g = gen_complete_random(n, src.graph_seed).map_err(|e| input("--complete", e))?;
        (format!("K{n}"), g, None, None)
    } else if let Some(path) = &src.planted {
        let flag = format!("--planted {}", path.display());
        let bitmap = Bitmap::parse(&read("--planted", path)?).map_err(|e| input(&flag, e))?;
        let p = gen_planted_grid(&bitmap).map_err(|e| input(&flag, e))?;
        let cut = p.planted_cut;
        (stem(path), p.graph, Some((p.planted, cut)), Some(cut))
    } else {
        return Err(CliError::Usage("one of --gset, --k2000, --complete, --planted is required".into()));
    };
    let instance = maxcut_encode(&graph).map_err(|e| CliError::Input(e.to_string()))?.with_label(label.clone());
    Ok(Loaded { label, graph, instance, planted, default_target_cut })
}

impl Loaded {
    /// Bit planes needed for the largest coupling magnitude.
    pub fn min_planes(&self) -> u32 {
        planes_needed(self.instance.couplings().iter().map(|j| j.abs()).max().unwrap_or(0))
    }
}

/// Smallest plane count that represents every coupling.
pub fn planes_needed(max_abs: i64) -> u32 {
    (64 - max_abs.leading_zeros()).max(1)
}
