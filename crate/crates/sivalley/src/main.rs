//! Command-line driver: parameter sweeps over the dot model with CSV output
//! and reproducibility manifests.
//!
//! Exit codes: 2 for configuration problems, 3 for numerical failures,
//! 4 for I/O errors.

use clap::{Parser, Subcommand};
use sivalley::config::{ConfigError, RunConfig};
use sivalley::gates::swap_protocol;
use sivalley::output::{fmt_f64, write_csv, Manifest};
use sivalley::phonon::{fig7_tables, PhononModel};
use sivalley::qubit::QubitModel;
use sivalley::units::{HBAR_EV_S, PLANCK_EV_S};
use num_complex::Complex64;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sivalley",
    version,
    about = "Silicon quantum dot multi-valley simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (flat `key = value unit` text).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: `out`, or `out_dir` from the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread count override.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tracked z-valley energy levels over an electric-field sweep.
    Spectrum,
    /// Splitting ε and coupling Δ over an electric-field sweep.
    Coupling,
    /// Locate the avoided crossing between two tracked doublets.
    Anticross,
    /// Two-level Rabi population trace at a fixed (ε, Δ).
    Rabi,
    /// SWAP-gate fidelities, closed form vs exact, over a δ/Δ sweep.
    Swap,
    /// Phonon scattering rates and decoherence times over (ΔE, T) grids.
    Phonon,
    /// Cross-axis inter-valley coupling suppression ratio.
    Crosstalk,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Coupling => "coupling",
            Command::Anticross => "anticross",
            Command::Rabi => "rabi",
            Command::Swap => "swap",
            Command::Phonon => "phonon",
            Command::Crosstalk => "crosstalk",
        }
    }
}

enum AppError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Numerical(_) => 3,
            AppError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Config(m) | AppError::Numerical(m) | AppError::Io(m) => m,
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<sivalley::solver::SolverError> for AppError {
    fn from(e: sivalley::solver::SolverError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<sivalley::phonon::PhononError> for AppError {
    fn from(e: sivalley::phonon::PhononError) -> Self {
        AppError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sivalley {}: {}", cli.command.name(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(AppError::Config("--threads must be at least 1".into()));
        }
        cfg.threads = threads;
    }
    let out_dir: PathBuf = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| AppError::Config(format!("cannot build worker pool: {e}")))?;
    let command = cli.command;
    pool.install(|| dispatch(command, &cfg, &out_dir))
}

fn dispatch(command: Command, cfg: &RunConfig, out_dir: &Path) -> Result<(), AppError> {
    let mut manifest = Manifest::new(command.name(), cfg.seed, cfg.threads, cfg.echo());
    std::fs::write(out_dir.join("resolved_config.txt"), cfg.echo())?;
    manifest.outputs.push("resolved_config.txt".into());
    match command {
        Command::Spectrum => cmd_spectrum(cfg, out_dir, &mut manifest)?,
        Command::Coupling => cmd_coupling(cfg, out_dir, &mut manifest)?,
        Command::Anticross => cmd_anticross(cfg, out_dir, &mut manifest)?,
        Command::Rabi => cmd_rabi(cfg, out_dir, &mut manifest)?,
        Command::Swap => cmd_swap(cfg, out_dir, &mut manifest)?,
        Command::Phonon => cmd_phonon(cfg, out_dir, &mut manifest)?,
        Command::Crosstalk => cmd_crosstalk(cfg, out_dir, &mut manifest)?,
    }
    let manifest_name = format!("{}.manifest.json", command.name());
    manifest.write(&out_dir.join(manifest_name))?;
    Ok(())
}

fn emit(
    out_dir: &Path,
    manifest: &mut Manifest,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), AppError> {
    write_csv(&out_dir.join(name), header, rows)?;
    manifest.outputs.push(name.to_string());
    Ok(())
}

fn cmd_spectrum(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = cfg.model();
    let spec = cfg.dot_spec(0.0, 1.5);
    let grid = cfg.field_grid(0.0, 300.0, 31);
    let spectrum = model.sweep_field(&spec, &grid, cfg.levels)?;
    let valleys = model.valleys();

    let mut rows = Vec::new();
    let mut doublet_rows = Vec::new();
    let mut inset_rows = Vec::new();
    for p in &spectrum.points {
        for i in 0..p.energies.len() {
            rows.push(vec![
                fmt_f64(p.field_kv_cm),
                p.tracked_ids[i].to_string(),
                fmt_f64(p.energies[i]),
                "5/6".to_string(),
                p.parities[i].to_string(),
                fmt_f64(p.residuals[i]),
            ]);
            manifest.residual_max = manifest.residual_max.max(p.residuals[i]);
        }
        // lowest level of each in-plane valley pair for comparison
        let mut point_spec = spec.clone();
        point_spec.field_kv_cm = p.field_kv_cm;
        for (pair, idx) in [("1/2", 0usize), ("3/4", 2)] {
            let h = model.single_valley_hamiltonian(&valleys[idx], &point_spec);
            let sol = sivalley::eigen::eigh_lowest(&h, 1)
                .map_err(|e| AppError::Numerical(e.to_string()))?;
            rows.push(vec![
                fmt_f64(p.field_kv_cm),
                "0".to_string(),
                fmt_f64(sol.values[0]),
                pair.to_string(),
                String::new(),
                fmt_f64(sol.residuals[0]),
            ]);
        }
        manifest.warnings.extend(p.warnings.iter().cloned());
        if p.energies.len() >= 2 {
            let eps = p.energies[1] - p.energies[0];
            doublet_rows.push(vec![
                fmt_f64(p.field_kv_cm),
                fmt_f64(p.energies[0]),
                fmt_f64(p.energies[1]),
                fmt_f64(eps),
            ]);
        }
        if p.field_kv_cm >= cfg.anticross_field_min_kv_cm
            && p.field_kv_cm <= cfg.anticross_field_max_kv_cm
        {
            for i in 0..p.energies.len() {
                inset_rows.push(vec![
                    fmt_f64(p.field_kv_cm),
                    i.to_string(),
                    fmt_f64(p.energies[i]),
                    p.parities[i].to_string(),
                ]);
            }
        }
    }
    emit(
        out_dir,
        manifest,
        "spectrum.csv",
        &["field_kV_cm", "level_id", "energy_eV", "valley_pair", "parity", "residual"],
        &rows,
    )?;
    emit(
        out_dir,
        manifest,
        "spectrum_doublet.csv",
        &["field_kV_cm", "e0_eV", "e1_eV", "splitting_eV"],
        &doublet_rows,
    )?;
    emit(
        out_dir,
        manifest,
        "spectrum_anticross_region.csv",
        &["field_kV_cm", "level", "energy_eV", "parity"],
        &inset_rows,
    )?;
    Ok(())
}

fn cmd_coupling(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = cfg.model();
    let grid = cfg.field_grid(0.0, 500.0, 26);
    let mut rows = Vec::new();
    for &f in &grid {
        let mut spec = cfg.dot_spec(0.0, 0.0);
        spec.field_kv_cm = f;
        let r = model.splitting_and_coupling(&spec)?;
        manifest.residual_max = manifest.residual_max.max(r.residual_max);
        let ratio = if r.delta_ev == 0.0 {
            0.0
        } else {
            r.eps_ev / r.delta_ev
        };
        rows.push(vec![
            fmt_f64(f),
            fmt_f64(r.eps_ev * 1e6),
            fmt_f64(r.delta_ev * 1e6),
            fmt_f64(ratio),
        ]);
    }
    emit(
        out_dir,
        manifest,
        "coupling.csv",
        &["F_kV_cm", "eps_ueV", "delta_ueV", "eps_over_delta"],
        &rows,
    )
}

fn cmd_anticross(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = cfg.model();
    let spec = cfg.dot_spec(0.0, 1.5);
    let search = model.find_anticrossing(
        &spec,
        cfg.anticross_doublet_a,
        cfg.anticross_doublet_b,
        cfg.anticross_field_min_kv_cm,
        cfg.anticross_field_max_kv_cm,
        cfg.anticross_coarse,
        cfg.anticross_tol_kv_cm,
    )?;
    if !search.interior {
        manifest
            .warnings
            .push("gap minimum sits on the search boundary; no interior anti-crossing".into());
    }
    let trace_rows: Vec<Vec<String>> = search
        .trace
        .iter()
        .map(|&(f, g)| vec![fmt_f64(f), fmt_f64(g)])
        .collect();
    emit(
        out_dir,
        manifest,
        "anticross_trace.csv",
        &["field_kV_cm", "gap_eV"],
        &trace_rows,
    )?;
    let summary = vec![vec![
        fmt_f64(search.f_star),
        fmt_f64(search.gap),
        fmt_f64(search.gap * 1e6),
        if search.interior { "true" } else { "false" }.to_string(),
    ]];
    emit(
        out_dir,
        manifest,
        "anticross.csv",
        &["field_star_kV_cm", "gap_eV", "gap_ueV", "interior"],
        &summary,
    )
}

fn cmd_rabi(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = QubitModel {
        eps_ev: cfg.eps_ev,
        delta_ev: cfg.delta_ev,
        form: cfg.hamiltonian_form,
    };
    let mut rows = Vec::new();
    let n = cfg.rabi_points;
    for i in 0..n {
        let t = cfg.rabi_t_max_s * i as f64 / (n - 1) as f64;
        let state = model.evolve([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], t);
        rows.push(vec![
            fmt_f64(t * 1e9),
            fmt_f64(state[0].norm_sqr()),
            fmt_f64(state[1].norm_sqr()),
        ]);
    }
    emit(out_dir, manifest, "rabi.csv", &["t_ns", "p0", "p1"], &rows)?;
    let summary = vec![vec![
        fmt_f64(cfg.eps_ev * 1e6),
        fmt_f64(cfg.delta_ev * 1e6),
        fmt_f64(model.rabi_frequency_ghz()),
        fmt_f64(if cfg.delta_ev != 0.0 {
            HBAR_EV_S / cfg.delta_ev.abs() * 1e12
        } else {
            f64::INFINITY
        }),
        fmt_f64(PLANCK_EV_S / (2.0 * cfg.delta_ev.abs()) * 1e9),
    ]];
    emit(
        out_dir,
        manifest,
        "rabi_summary.csv",
        &["eps_ueV", "delta_ueV", "f_GHz", "hbar_over_delta_ps", "population_period_ns"],
        &summary,
    )
}

fn cmd_swap(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let mut rows = Vec::new();
    for ratio in cfg.swap_ratio_grid() {
        let delta_c = cfg.swap_coupling_ev;
        let delta = delta_c / ratio;
        let report = swap_protocol(delta_c, cfg.swap_variant, Some(delta));
        rows.push(vec![
            fmt_f64(ratio),
            fmt_f64(report.t),
            fmt_f64(report.fidelity_closed),
            fmt_f64(report.fidelity_exact),
            fmt_f64(report.unitarity_defect_closed),
        ]);
    }
    emit(
        out_dir,
        manifest,
        "swap.csv",
        &["delta_over_Delta", "t", "fidelity_closed", "fidelity_exact", "unitarity_defect"],
        &rows,
    )?;
    // the tuned operating point Δ = (4+√13)δ as its own row
    let tuned = swap_protocol(cfg.swap_coupling_ev, cfg.swap_variant, None);
    let summary = vec![vec![
        fmt_f64(tuned.case.delta),
        fmt_f64(tuned.case.delta_c),
        fmt_f64(tuned.t),
        fmt_f64(tuned.amp_01_closed.norm()),
        fmt_f64(tuned.amp_01_exact.norm()),
        fmt_f64(tuned.residual_10),
        fmt_f64(tuned.unitarity_defect_closed),
    ]];
    emit(
        out_dir,
        manifest,
        "swap_tuned.csv",
        &[
            "Delta_eV",
            "delta_eV",
            "t",
            "amp01_closed",
            "amp01_exact",
            "residual_10",
            "unitarity_defect",
        ],
        &summary,
    )
}

fn cmd_phonon(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = PhononModel {
        rho_g_cm3: cfg.rho_g_cm3,
        c_l_cm_s: cfg.c_l_cm_s,
        e_ac_ev: cfg.e_ac_ev,
    };
    let rows = fig7_tables(&cfg.phonon_de_grid(), &cfg.phonon_t_grid(), &model)?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.delta_e_uev),
                fmt_f64(r.t_k),
                fmt_f64(r.rate_per_s),
                fmt_f64(r.tau_s),
            ]
        })
        .collect();
    emit(
        out_dir,
        manifest,
        "phonon.csv",
        &["deltaE_ueV", "T_K", "rate_per_s", "tau_s"],
        &csv_rows,
    )
}

fn cmd_crosstalk(cfg: &RunConfig, out_dir: &Path, manifest: &mut Manifest) -> Result<(), AppError> {
    let model = cfg.model();
    let spec = cfg.dot_spec(400.0, 0.0);
    let r = model.cross_axis_coupling(&spec)?;
    let rows = vec![vec![
        fmt_f64(spec.field_kv_cm),
        fmt_f64(r.numerator_ev),
        fmt_f64(r.denominator_ev),
        fmt_f64(r.ratio),
    ]];
    emit(
        out_dir,
        manifest,
        "crosstalk.csv",
        &["field_kV_cm", "delta_15_eV", "delta_56_eV", "ratio"],
        &rows,
    )
}
