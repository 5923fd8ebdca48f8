//! Contraction-factor experiments on the anisotropic Poisson model problem.
//!
//! For each aspect ratio a hierarchy is built once. Every `(smoother, k)` cell
//! then measures `‖E‖²_A` of the symmetric V-cycle, and the matching bound is
//! evaluated with either `C = 2a²` or a measured `C`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use polymg::bounds::{bound_cheb, bound_cheb_sharp, bound_cheb_two_level, bound_opt_conjecture, bound_simple};
use polymg::fem::GridSpec;
use polymg::linalg::PowerOptions;
use polymg::multigrid::{
    build_hierarchy, measure_c, measure_contraction, CMethod, Hierarchy, HierarchyOptions, TwoLevel, VCycleConfig,
};
use polymg::optpoly::optimal_betas;
use polymg::smoothers::SmootherConfig;
use rayon::prelude::*;

use crate::{fmt_value, CliError, CliResult};

/// Largest grid used when `C` is measured rather than taken as `2a²`.
pub const MEASURED_C_MAX_M: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmootherKind {
    Simple { omega: f64 },
    Cheb4,
    Optimized,
}

/// A smoother family together with its output column name.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedSmoother {
    pub name: String,
    pub kind: SmootherKind,
}

impl NamedSmoother {
    /// `w43`, `w32`, `cheb` (or `cheb4`), `opt`, or `simple` with the given `ω`.
    pub fn parse(name: &str, omega: f64) -> CliResult<Self> {
        let kind = match name {
            "w43" => SmootherKind::Simple { omega: 4.0 / 3.0 },
            "w32" => SmootherKind::Simple { omega: 1.5 },
            "simple" => {
                if !(omega > 0.0 && omega < 2.0) {
                    return Err(CliError::Usage(format!("--omega {omega} outside (0, 2)")));
                }
                SmootherKind::Simple { omega }
            }
            "cheb" | "cheb4" => SmootherKind::Cheb4,
            "opt" => SmootherKind::Optimized,
            other => return Err(CliError::Usage(format!("unknown smoother `{other}`"))),
        };
        let name = if name == "cheb4" { "cheb" } else { name };
        Ok(Self {
            name: name.to_string(),
            kind,
        })
    }

    /// The four columns of the standard figure data.
    pub fn standard() -> Vec<Self> {
        ["w43", "w32", "cheb", "opt"]
            .iter()
            .map(|n| Self::parse(n, 1.0).expect("standard names parse"))
            .collect()
    }

    pub fn config(&self, k: usize) -> CliResult<SmootherConfig> {
        Ok(match self.kind {
            SmootherKind::Simple { omega } => SmootherConfig::Simple { omega, k },
            SmootherKind::Cheb4 => SmootherConfig::Cheb4 { k },
            SmootherKind::Optimized => SmootherConfig::Optimized {
                betas: optimal_betas(k)?,
            },
        })
    }

    /// The closed-form bound for this smoother and whether its hypotheses hold.
    pub fn bound(&self, c: f64, k: usize) -> (f64, bool) {
        match self.kind {
            SmootherKind::Simple { omega } => {
                let b = bound_simple(c, omega, k);
                (b.value, b.valid)
            }
            SmootherKind::Cheb4 => (bound_cheb(c, k), true),
            SmootherKind::Optimized => (bound_opt_conjecture(c, k), true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CMode {
    /// `C = 2a²`.
    Analytic,
    /// `C` measured on the finest two-level pair of a grid with `m ≤ 6`.
    Measured,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub m: u32,
    pub aspects: Vec<f64>,
    pub ks: Vec<usize>,
    pub smoothers: Vec<NamedSmoother>,
    pub c_mode: CMode,
    pub seed: u64,
    pub tol: f64,
    pub max_cycles: usize,
    pub hierarchy: HierarchyOptions,
}

impl ExperimentConfig {
    pub fn new(m: u32, aspects: Vec<f64>, ks: Vec<usize>) -> Self {
        Self {
            m,
            aspects,
            ks,
            smoothers: NamedSmoother::standard(),
            c_mode: CMode::Analytic,
            seed: 0,
            tol: 1e-8,
            max_cycles: 500,
            hierarchy: HierarchyOptions::default(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if let Some(a) = self.aspects.iter().find(|a| !(**a >= 1.0)) {
            return Err(CliError::Usage(format!("aspect {a} must be at least 1")));
        }
        if let Some(k) = self.ks.iter().find(|k| !(1..=200).contains(*k)) {
            return Err(CliError::Usage(format!("k = {k} outside [1, 200]")));
        }
        if self.smoothers.is_empty() || self.aspects.is_empty() || self.ks.is_empty() {
            return Err(CliError::Usage("empty experiment".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    /// Measured `‖E‖²_A`, or NaN if the measurement failed.
    pub value: f64,
    pub converged: bool,
    pub cycles: usize,
    pub bound: f64,
    pub bound_valid: bool,
}

#[derive(Debug, Clone)]
pub struct AspectResult {
    pub aspect: f64,
    pub c: f64,
    /// `cells[i][j]` is `ks[i]` with `smoothers[j]`.
    pub cells: Vec<Vec<Cell>>,
}

fn constant_c(cfg: &ExperimentConfig, aspect: f64) -> CliResult<f64> {
    match cfg.c_mode {
        CMode::Analytic => Ok(2.0 * aspect * aspect),
        CMode::Measured => {
            let grid = GridSpec::new(cfg.m.min(MEASURED_C_MAX_M), aspect)?;
            let h = build_hierarchy(&grid, &cfg.hierarchy)?.truncated(2)?;
            let tl = TwoLevel::from_hierarchy(&h)?;
            let opts = PowerOptions {
                seed: cfg.seed,
                max_iter: 5000,
                ..PowerOptions::default()
            };
            Ok(measure_c(&tl, CMethod::Power, opts)?.value)
        }
    }
}

fn measure_cell(h: &Hierarchy, cfg: &ExperimentConfig, s: &NamedSmoother, k: usize, c: f64) -> Cell {
    let (bound, bound_valid) = s.bound(c, k);
    let measured = s
        .config(k)
        .and_then(|sc| Ok(measure_contraction(h, &VCycleConfig::symmetric(sc), cfg.seed, cfg.tol, cfg.max_cycles)?));
    match measured {
        Ok(e) => Cell {
            value: e.value,
            converged: e.converged,
            cycles: e.cycles,
            bound,
            bound_valid,
        },
        Err(err) => {
            eprintln!("warning: {} k={k}: {err}", s.name);
            Cell {
                value: f64::NAN,
                converged: false,
                cycles: 0,
                bound,
                bound_valid,
            }
        }
    }
}

/// Runs every cell. Cells are independent and run on the rayon pool; the
/// result order (and hence the output) does not depend on scheduling.
pub fn run_cells(cfg: &ExperimentConfig) -> CliResult<Vec<AspectResult>> {
    cfg.validate()?;
    cfg.aspects
        .iter()
        .map(|&aspect| {
            let grid = GridSpec::new(cfg.m, aspect)?;
            let h = build_hierarchy(&grid, &cfg.hierarchy)?;
            let c = constant_c(cfg, aspect)?;
            let jobs: Vec<(usize, usize)> = (0..cfg.ks.len())
                .flat_map(|i| (0..cfg.smoothers.len()).map(move |j| (i, j)))
                .collect();
            let flat: Vec<Cell> = jobs
                .par_iter()
                .map(|&(i, j)| measure_cell(&h, cfg, &cfg.smoothers[j], cfg.ks[i], c))
                .collect();
            let cells = flat.chunks(cfg.smoothers.len()).map(<[Cell]>::to_vec).collect();
            Ok(AspectResult { aspect, c, cells })
        })
        .collect()
}

fn aspect_label(a: f64) -> String {
    if a.fract() == 0.0 {
        format!("{}", a as u64)
    } else {
        format!("{a}")
    }
}

/// Writes `data-<aspect>.dat` (measured factors) and `bounds-<aspect>.dat`
/// (bound curves) for each aspect, returning the paths written.
pub fn write_outputs(cfg: &ExperimentConfig, results: &[AspectResult], out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let names: Vec<&str> = cfg.smoothers.iter().map(|s| s.name.as_str()).collect();
    let mut paths = Vec::new();
    for r in results {
        let label = aspect_label(r.aspect);
        let data_path = out_dir.join(format!("data-{label}.dat"));
        let mut data = format!("k {}\n", names.join(" "));
        for (k, row) in cfg.ks.iter().zip(&r.cells) {
            let vals: Vec<String> = row.iter().map(|c| fmt_value(c.value)).collect();
            data.push_str(&format!("{k} {}\n", vals.join(" ")));
        }
        fs::File::create(&data_path)?.write_all(data.as_bytes())?;

        let bounds_path = out_dir.join(format!("bounds-{label}.dat"));
        let mut text = format!("# C = {}\nk {} cheb_sharp cheb_two_level\n", fmt_value(r.c), names.join(" "));
        for (k, row) in cfg.ks.iter().zip(&r.cells) {
            let mut vals: Vec<String> = row
                .iter()
                .map(|c| if c.bound_valid { fmt_value(c.bound) } else { "nan".into() })
                .collect();
            vals.push(fmt_value(bound_cheb_sharp(r.c, *k).value));
            vals.push(fmt_value(bound_cheb_two_level(r.c, *k)));
            text.push_str(&format!("{k} {}\n", vals.join(" ")));
        }
        fs::File::create(&bounds_path)?.write_all(text.as_bytes())?;
        paths.push(data_path);
        paths.push(bounds_path);
    }
    Ok(paths)
}

/// [`run_cells`] followed by [`write_outputs`].
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let results = run_cells(cfg)?;
    let capped = results
        .iter()
        .flat_map(|r| r.cells.iter().flatten())
        .filter(|c| !c.converged && !c.value.is_nan())
        .count();
    if capped > 0 {
        eprintln!(
            "note: {capped} cells stopped at the {}-cycle cap; their values are lower estimates",
            cfg.max_cycles
        );
    }
    write_outputs(cfg, &results, out_dir)
}
