use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use speclab::domain::{parse_domain, Pointer};
use speclab::error::{EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};
use speclab::pipeline::IdentityReport;
use speclab::scenario::parse_kind;
use speclab::{
    dump, load_scenario, parse_scenario, report, run, write_reports, Overrides, RunError, BUNDLED,
};
use speclab_core::assembly::{assemble, BoundaryCondition};
use speclab_core::geometry::{BoundaryKind, Domain};
use speclab_core::identity::Region;
use speclab_core::inequalities::{MeshHierarchy, Verdict};

/// Eigenvalue inequalities for mixed Dirichlet-Neumann Laplacians.
///
/// Exit status: 0 when no theorem with satisfied hypotheses is violated,
/// 2 when one is, 1 on configuration, IO or computation errors. The
/// `SPECLAB_THREADS` environment variable caps parallelism.
#[derive(Parser)]
#[command(name = "speclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every bundled scenario and write reports under DIR/<scenario>/.
    Suite {
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the checks of one scenario.
    ///
    /// --levels and --kmax replace the scenario's `levels` and `k_max`.
    /// CSV reports go to --out, else to the scenario's `output`, else to
    /// speclab-out/<name>. JSON goes to --out as a file, else to stdout.
    Check {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the first k_max eigenvalues of one kind as CSV.
    Spectrum {
        #[arg(long)]
        scenario: PathBuf,
        /// d, n or mixed.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dump the finest mesh (polygons only).
        #[arg(long)]
        dump_mesh: Option<PathBuf>,
        /// Dump stiffness.mtx and mass.mtx of the finest mesh into this directory.
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Certify the integral identity on a polygon domain file, or show its
    /// failure on the unit disk with `--domain disk`.
    Identity {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SPECLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("SPECLAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), RunError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| RunError::io(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| RunError::io("<stdout>", e)),
    }
}

fn suite(out: &Path) -> Result<u8, RunError> {
    let scenarios = BUNDLED
        .iter()
        .map(|(_, text)| parse_scenario(text, Overrides::default()))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<_> = scenarios.par_iter().map(run).collect();
    let mut status = EXIT_OK;
    let mut summaries = Vec::new();
    for (s, o) in scenarios.iter().zip(outcomes) {
        match o {
            Ok(o) => {
                write_reports(&o, &out.join(&s.name))?;
                print!("{}", report::summary_lines(&o));
                if o.has_theorem_failure() && status == EXIT_OK {
                    status = EXIT_VIOLATION;
                }
                summaries.push(report::summary_json(&o));
            }
            Err(e) => {
                eprintln!("{}: {e}", s.name);
                status = EXIT_ERROR;
            }
        }
    }
    let text = serde_json::to_string_pretty(&summaries).expect("JSON values serialize") + "\n";
    emit(Some(&out.join("suite_summary.json")), &text)?;
    Ok(status)
}

fn check(
    scenario: &Path,
    overrides: Overrides,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, RunError> {
    let s = load_scenario(scenario, overrides)?;
    let o = run(&s)?;
    match format {
        Format::Csv => {
            let dir = out
                .or_else(|| s.output.clone())
                .unwrap_or_else(|| Path::new("speclab-out").join(&s.name));
            let written = write_reports(&o, &dir)?;
            print!("{}", report::summary_lines(&o));
            eprintln!("wrote {} files to {}", written.len(), dir.display());
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&report::full_json(&o))
                .expect("JSON values serialize")
                + "\n";
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(report::exit_status(&o))
}

struct SpectrumArgs {
    scenario: PathBuf,
    kind: String,
    overrides: Overrides,
    out: Option<PathBuf>,
    dump_mesh: Option<PathBuf>,
    dump_matrices: Option<PathBuf>,
}

fn spectrum(a: SpectrumArgs) -> Result<u8, RunError> {
    let kind = parse_kind(&a.kind).ok_or_else(|| {
        RunError::Schema(
            Pointer::root().error(format!("--kind must be d, n or mixed, got {:?}", a.kind)),
        )
    })?;
    let mut s = load_scenario(&a.scenario, a.overrides)?;
    s.spectra = vec![kind];
    s.checks.clear();
    s.validate()?;
    let o = run(&s)?;
    let sp = o.spectrum(kind).expect("requested kind is computed");
    emit(a.out.as_deref(), &report::spectrum_csv(sp))?;
    if a.dump_mesh.is_some() || a.dump_matrices.is_some() {
        let Domain::Polygon(p) = &s.domain else {
            return Err(RunError::Schema(
                Pointer::root()
                    .key("domain")
                    .error("mesh and matrix dumps need a polygon domain"),
            ));
        };
        let h = MeshHierarchy::for_count(p, s.k_max, s.levels)?;
        let mesh = h
            .meshes()
            .last()
            .expect("hierarchy has at least two meshes");
        if let Some(path) = &a.dump_mesh {
            let mut buf = Vec::new();
            dump::write_mesh(&mut buf, mesh, p).map_err(|e| RunError::io(path, e))?;
            fs::write(path, buf).map_err(|e| RunError::io(path, e))?;
        }
        if let Some(dir) = &a.dump_matrices {
            let bc = match kind {
                BoundaryKind::Dirichlet => BoundaryCondition::PureDirichlet,
                BoundaryKind::Neumann => BoundaryCondition::PureNeumann,
                BoundaryKind::Mixed => BoundaryCondition::Mixed(p.labels()),
            };
            let asm = assemble(mesh, &bc).map_err(|e| RunError::Inequality(e.into()))?;
            fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
            for (name, m) in [("stiffness.mtx", &asm.stiffness), ("mass.mtx", &asm.mass)] {
                let path = dir.join(name);
                let mut buf = Vec::new();
                dump::write_matrix(&mut buf, m).map_err(|e| RunError::io(&path, e))?;
                fs::write(&path, buf).map_err(|e| RunError::io(&path, e))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn identity(domain: &str, out: Option<PathBuf>) -> Result<u8, RunError> {
    let report = if domain == "disk" {
        IdentityReport::new("disk".into(), Region::UnitDisk)?
    } else {
        let path = Path::new(domain);
        let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| RunError::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
        let root = Pointer::root();
        let Domain::Polygon(p) = parse_domain(&v, &root)? else {
            return Err(root
                .key("type")
                .error("identity needs a polygon domain")
                .into());
        };
        if !p.is_convex() {
            return Err(RunError::Prerequisite {
                pointer: "/vertices".into(),
                source: speclab_core::geometry::GeometryError::NotConvex,
            });
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        IdentityReport::new(name, Region::Polygon(&p))?
    };
    emit(out.as_deref(), &report::identity_csv(&report))?;
    let note = match (report.overall, report.hypothesis_satisfied) {
        (Verdict::Violated, false) => " (expected: curved boundary)",
        _ => "",
    };
    eprintln!(
        "{}: identity {} worst relative residual {:.3e}{note}",
        report.domain, report.overall, report.worst_relative
    );
    Ok(
        if report.overall == Verdict::Violated && report.hypothesis_satisfied {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        },
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    let result = match cli.command {
        Command::Suite { out } => suite(&out),
        Command::Check {
            scenario,
            levels,
            kmax,
            format,
            out,
        } => check(
            &scenario,
            Overrides {
                levels,
                k_max: kmax,
            },
            format,
            out,
        ),
        Command::Spectrum {
            scenario,
            kind,
            levels,
            kmax,
            out,
            dump_mesh,
            dump_matrices,
        } => spectrum(SpectrumArgs {
            scenario,
            kind,
            overrides: Overrides {
                levels,
                k_max: kmax,
            },
            out,
            dump_mesh,
            dump_matrices,
        }),
        Command::Identity { domain, out } => identity(&domain, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
