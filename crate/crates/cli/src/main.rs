//! `coxring`: finite-generation verdicts and lattice computations for
//! blow-ups of the plane, driven by a JSON configuration file.
//!
//! Exit codes: 0 on success (an `Unknown` verdict is a success), 2 for
//! malformed input, 3 when the request cannot be computed for this surface
//! (search windows, unbounded enumerations, infinite cases), 4 when an
//! internal invariant or a cross-check fails.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coxring_core::cone::{self, effective_cone, nef_dual};
use coxring_core::enumerate::{
    effective_roots_with_window, enumerate_classes, minus_one_curves_certified,
    minus_two_curves_with_window, passes_recognition, span_rank, ClassQuery, Completeness,
    DEFAULT_DEGREE_WINDOW,
};
use coxring_core::verdict::{cross_check, decide_with, DecideOptions};
use coxring_core::weyl::{infinitude_witness, orbit, simple_roots};
use coxring_core::{DivisorClass, Error, SurfaceConfig};

use report::{
    ChiReport, ConeReport, CurvesReport, OrbitReport, Report, RootsReport, VerdictReport,
    WitnessReport,
};

#[derive(Parser, Debug)]
#[command(name = "coxring", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Write the result to `DIR/<config>.<command>.<ext>` instead of stdout.
    #[arg(long, value_name = "DIR", global = true)]
    output_dir: Option<PathBuf>,

    /// Degree window `|d0| <= N` for root closures over nine or more points.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_DEGREE_WINDOW, global = true)]
    window: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-generation verdict with a cross-check of the result.
    Verdict {
        config: PathBuf,
        /// Treat a nine-point configuration as an elliptic pencil.
        #[arg(long)]
        halphen: bool,
    },
    /// (-1)-curves or (-2)-curves of the surface.
    Curves {
        config: PathBuf,
        #[arg(long = "type", value_enum)]
        curve_type: CurveType,
        /// Only classes with `|d0| <= N`; required over nine or more points.
        #[arg(long, value_name = "N")]
        degree_bound: Option<i64>,
        /// Every class of the given type, ignoring the configuration's curves.
        #[arg(long)]
        all: bool,
    },
    /// Effective roots: the closure of the declared roots.
    Roots { config: PathBuf },
    /// Effective or nef cone.
    Cone {
        config: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Also compute the Hilbert basis (and, for the nef cone, extremality).
        #[arg(long)]
        hilbert: bool,
    },
    /// Truncated orbit of a class under the simple reflections.
    Orbit {
        config: PathBuf,
        /// Class as `d0,m1,...,mr`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Distinct (-1)-curves from an infinite family.
    Witness {
        config: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Euler characteristic, genus and an h0 lower bound for a class.
    Chi {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveType {
    Minus1,
    Minus2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Eff,
    Nef,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cross-check failed")]
    CrossCheck,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(Error::InvariantBreach(_)) | CliError::CrossCheck => 4,
            CliError::Core(_) => 3,
        }
    }
}

fn load_config(path: &Path) -> Result<SurfaceConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config: SurfaceConfig = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    config.validate()?;
    Ok(config)
}

fn curves(
    config: &SurfaceConfig,
    curve_type: CurveType,
    degree_bound: Option<i64>,
    all: bool,
    window: i64,
) -> Result<CurvesReport, Error> {
    let model = config.model();
    let name = match curve_type {
        CurveType::Minus1 => "minus1",
        CurveType::Minus2 => "minus2",
    };
    let bounded = |b: i64| format!("bounded by |d0| <= {b}");
    let (scope, completeness, classes) = if all {
        let q = match curve_type {
            CurveType::Minus1 => ClassQuery::minus_one(),
            CurveType::Minus2 => ClassQuery::roots(),
        };
        let q = match degree_bound {
            Some(b) => q.with_degree_bound(b),
            None => q,
        };
        let classes = enumerate_classes(config.r, &q)?;
        let completeness = degree_bound.map_or("exact".to_string(), bounded);
        ("all_classes", completeness, classes)
    } else {
        match (curve_type, degree_bound) {
            (CurveType::Minus2, _) => {
                let curves = minus_two_curves_with_window(config, window)?;
                let classes = curves
                    .into_iter()
                    .filter(|c| degree_bound.map_or(true, |b| c.d0().abs() <= b))
                    .collect();
                let completeness = degree_bound.map_or("exact".to_string(), bounded);
                ("configuration", completeness, classes)
            }
            (CurveType::Minus1, Some(b)) => {
                let minus_two = minus_two_curves_with_window(config, window)?;
                let q = ClassQuery::minus_one().with_degree_bound(b);
                let mut classes = Vec::new();
                for c in enumerate_classes(config.r, &q)? {
                    if passes_recognition(&model, &c, &minus_two)? {
                        classes.push(c);
                    }
                }
                ("configuration", bounded(b), classes)
            }
            (CurveType::Minus1, None) => match minus_one_curves_certified(config) {
                Ok(m) => {
                    let completeness = match m.completeness {
                        Completeness::Exact => "exact".to_string(),
                        Completeness::StableUpTo { bound } => {
                            format!("stable up to |d0| <= {bound}")
                        }
                    };
                    ("configuration", completeness, m.curves)
                }
                Err(Error::InfiniteOrUndecided(_)) => {
                    return Err(Error::UnboundedSearch { r: config.r })
                }
                Err(e) => return Err(e),
            },
        }
    };
    Ok(CurvesReport {
        curve_type: name.to_string(),
        scope: scope.to_string(),
        degree_bound,
        completeness,
        count: classes.len(),
        classes,
    })
}

fn cone_report(config: &SurfaceConfig, which: Which, hilbert: bool) -> Result<ConeReport, Error> {
    let eff = effective_cone(config)?;
    let (name, cone) = match which {
        Which::Eff => ("eff", eff),
        Which::Nef => ("nef", nef_dual(&eff)?),
    };
    let hilbert_basis = if hilbert {
        Some(cone::hilbert_basis(&cone)?)
    } else {
        None
    };
    let extremality = match (which, &hilbert_basis) {
        (Which::Nef, Some(hb)) => Some(cone::extremality_of(&config.model(), hb)?),
        _ => None,
    };
    Ok(ConeReport {
        which: name.to_string(),
        degenerate: cone.degenerate,
        generators: cone.generators,
        extremal_rays: cone.extremal_rays,
        hilbert_basis,
        extremality,
    })
}

fn chi(config: &SurfaceConfig, class: &DivisorClass) -> Result<ChiReport, Error> {
    let model = config.model();
    let h0_lower_bound = match effective_cone(config) {
        Ok(eff) => Some(model.h0_lower_bound(class, &eff)?),
        Err(e) if e.is_input_error() || matches!(e, Error::InvariantBreach(_)) => return Err(e),
        Err(_) => None,
    };
    Ok(ChiReport {
        class: class.clone(),
        square: model.square(class)?,
        k_degree: model.k_degree(class)?,
        chi: model.euler_characteristic(class)?,
        genus: model.arithmetic_genus(class)?,
        h0_lower_bound,
    })
}

fn run(cli: &Cli) -> Result<(Report, &Path, &'static str), CliError> {
    let (report, path, name) = match &cli.command {
        Command::Verdict {
            config: path,
            halphen,
        } => {
            let config = load_config(path)?;
            let verdict = decide_with(&config, DecideOptions { halphen: *halphen })?;
            let checks = cross_check(&config, &verdict)?;
            let report = Report::Verdict(VerdictReport {
                verdict,
                cross_check: checks,
            });
            (report, path, "verdict")
        }
        Command::Curves {
            config: path,
            curve_type,
            degree_bound,
            all,
        } => {
            let config = load_config(path)?;
            let report = curves(&config, *curve_type, *degree_bound, *all, cli.window)?;
            (Report::Curves(report), path, "curves")
        }
        Command::Roots { config: path } => {
            let config = load_config(path)?;
            let roots: Vec<DivisorClass> = effective_roots_with_window(&config, cli.window)?
                .into_iter()
                .collect();
            let report = RootsReport {
                span_rank: span_rank(&roots)?,
                count: roots.len(),
                roots,
            };
            (Report::Roots(report), path, "roots")
        }
        Command::Cone {
            config: path,
            which,
            hilbert,
        } => {
            let config = load_config(path)?;
            (
                Report::Cone(cone_report(&config, *which, *hilbert)?),
                path,
                "cone",
            )
        }
        Command::Orbit {
            config: path,
            class,
            limit,
        } => {
            let config = load_config(path)?;
            let x = DivisorClass::parse_with_rank(class, config.r)?;
            let o = orbit(&x, &simple_roots(config.r), (*limit).max(1))?;
            let classes: Vec<DivisorClass> = o.classes.into_iter().collect();
            let report = OrbitReport {
                class: x,
                limit: *limit,
                count: classes.len(),
                exceeded: o.exceeded,
                classes,
            };
            (Report::Orbit(report), path, "orbit")
        }
        Command::Witness {
            config: path,
            count,
        } => {
            let config = load_config(path)?;
            let classes = infinitude_witness(&config, *count)?;
            let report = WitnessReport {
                count: classes.len(),
                classes,
            };
            (Report::Witness(report), path, "witness")
        }
        Command::Chi {
            config: path,
            class,
        } => {
            let config = load_config(path)?;
            let x = DivisorClass::parse_with_rank(class, config.r)?;
            (Report::Chi(chi(&config, &x)?), path, "chi")
        }
    };
    Ok((report, path.as_path(), name))
}

fn emit(cli: &Cli, report: &Report, config_path: &Path, command: &str) -> Result<(), CliError> {
    let (text, ext) = match cli.format {
        Format::Json => (report.to_json(), "json"),
        Format::Table => (report.to_table(), "txt"),
    };
    match &cli.output_dir {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(dir) => {
            let stem = config_path
                .file_stem()
                .map_or("config".into(), |s| s.to_string_lossy());
            let target = dir.join(format!("{stem}.{command}.{ext}"));
            fs::create_dir_all(dir)
                .and_then(|_| fs::write(&target, text))
                .map_err(|source| CliError::Io {
                    path: target,
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, path, name)| {
        emit(&cli, &report, path, name)?;
        if report.has_failed_check() {
            return Err(CliError::CrossCheck);
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
