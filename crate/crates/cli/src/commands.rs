//! The five commands. Each returns the report text and the exit status.

use std::path::{Path, PathBuf};

use torricelli_core::{
    classify_vertex, geodesic_balancing_residual, grid_refine_minimize, solve, solve_on_sphere,
    sphere, spherical_grid_minimize, verify, vertex_pull, Case, Error, Point, SolverOptions,
    SpherePoint, VertexVerdict, DEFAULT_VERIFY_TOLERANCE,
};

use crate::config::{LoadedConfig, Problem};
use crate::report::*;
use crate::{CliError, Command, Exit, SolveArgs};

/// Grid resolution used by `oracle-compare` on the sphere.
pub const SPHERE_ORACLE_RESOLUTION_DEG: f64 = 0.5;

type CmdResult = Result<(String, Exit), CliError>;

pub fn dispatch(command: &Command) -> (Option<&PathBuf>, CmdResult) {
    match command {
        Command::Solve(a) => (a.output.as_ref(), cmd_solve(a, false)),
        Command::SphereSolve(a) => (a.output.as_ref(), cmd_solve(a, true)),
        Command::Verify {
            input,
            at,
            tolerance,
            output,
        } => (output.as_ref(), cmd_verify(input, at, *tolerance)),
        Command::Classify { input, output } => (output.as_ref(), cmd_classify(input)),
        Command::OracleCompare {
            solve,
            levels,
            per_level,
        } => (
            solve.output.as_ref(),
            cmd_oracle_compare(solve, *levels, *per_level),
        ),
    }
}

fn input_error(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Input {
        field: field.into(),
        message: e.to_string(),
    }
}

/// Flag, then the file's `options`, then the library default.
pub fn solver_options(
    loaded: &LoadedConfig,
    tolerance: Option<f64>,
    max_iter: Option<usize>,
) -> Result<SolverOptions, CliError> {
    let file = loaded.file.options.clone().unwrap_or_default();
    let mut opts = SolverOptions::default();
    if let Some(t) = tolerance.or(file.residual_tolerance) {
        opts = opts.with_tolerance(t);
    }
    if let Some(n) = max_iter.or(file.max_iterations) {
        opts = opts.with_max_iterations(n);
    }
    opts.validate().map_err(|e| {
        let field = if tolerance.is_some() && !(opts.residual_tolerance > 0.0) {
            "--tolerance"
        } else {
            "--max-iter"
        };
        input_error(field, e)
    })?;
    Ok(opts)
}

pub fn cmd_solve(args: &SolveArgs, sphere_only: bool) -> CmdResult {
    let loaded = LoadedConfig::from_path(&args.input)?;
    let opts = solver_options(&loaded, args.tolerance, args.max_iter)?;
    let report = match &loaded.problem {
        Problem::Euclidean(_) if sphere_only => {
            return Err(input_error(
                "dimension",
                "sphere-solve needs dimension \"sphere\"",
            ))
        }
        Problem::Euclidean(cfg) => {
            let out = solve(cfg, &opts).map_err(|e| input_error("input", e))?;
            let balance = match out.case {
                Case::Floating => verify(cfg, &out.minimizer, opts.residual_tolerance)
                    .ok()
                    .map(|r| BalanceRecord::from(&r)),
                Case::AbsorbedAt(_) => None,
            };
            ReportFile::new(
                loaded.digest.clone(),
                OutcomeRecord::euclidean(&out),
                balance,
                warning_strings(&out.warnings),
            )
        }
        Problem::Sphere(cfg) => {
            let out = solve_on_sphere(cfg, &opts).map_err(|e| input_error("input", e))?;
            let balance = match out.case {
                Case::Floating => geodesic_balancing_residual(cfg, &out.minimizer)
                    .ok()
                    .map(|r| {
                        BalanceRecord::sphere(&r, opts.residual_tolerance, cfg.total_weight())
                    }),
                Case::AbsorbedAt(_) => None,
            };
            ReportFile::new(
                loaded.digest.clone(),
                OutcomeRecord::sphere(&out),
                balance,
                warning_strings(&out.warnings),
            )
        }
    };
    let exit = if report.outcome.converged {
        Exit::Success
    } else {
        Exit::NotConverged
    };
    Ok((to_json(&report), exit))
}

pub fn parse_probe(at: &str) -> Result<Vec<f64>, CliError> {
    at.split(',')
        .map(|s| {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| input_error("--at", format!("not a number: {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(input_error("--at", format!("not finite: {s:?}")))
            }
        })
        .collect()
}

fn probe_error(e: Error) -> CliError {
    match e {
        Error::AtAnchor(index) => CliError::DegenerateProbe { index },
        other => input_error("--at", other),
    }
}

pub fn cmd_verify(input: &Path, at: &str, tolerance: Option<f64>) -> CmdResult {
    let loaded = LoadedConfig::from_path(input)?;
    let tolerance = tolerance.unwrap_or(DEFAULT_VERIFY_TOLERANCE);
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(input_error(
            "--tolerance",
            format!("must be positive, got {tolerance}"),
        ));
    }
    let coords = parse_probe(at)?;
    let record = match &loaded.problem {
        Problem::Euclidean(cfg) => {
            if coords.len() != cfg.dim().get() {
                return Err(input_error(
                    "--at",
                    format!(
                        "expected {} coordinates, got {}",
                        cfg.dim().get(),
                        coords.len()
                    ),
                ));
            }
            let x = Point::new(&coords).map_err(|e| input_error("--at", e))?;
            BalanceRecord::from(&verify(cfg, &x, tolerance).map_err(probe_error)?)
        }
        Problem::Sphere(cfg) => {
            let v: [f64; 3] = coords.as_slice().try_into().map_err(|_| {
                input_error(
                    "--at",
                    format!("expected 3 coordinates, got {}", coords.len()),
                )
            })?;
            let x = SpherePoint::from_vector(v).map_err(|e| input_error("--at", e))?;
            let r = geodesic_balancing_residual(cfg, &x).map_err(probe_error)?;
            BalanceRecord::sphere(&r, tolerance, cfg.total_weight())
        }
    };
    let exit = if record.passed {
        Exit::Success
    } else {
        Exit::Failed
    };
    Ok((to_json(&record), exit))
}

const ONLY_ANCHOR: &str = "absorbed (only anchor)";
const ABSORBED: &str = "absorbed";
const FLOATING: &str = "floating possible";
const INACTIVE: &str = "inactive";

pub fn cmd_classify(input: &Path) -> CmdResult {
    let loaded = LoadedConfig::from_path(input)?;
    let rows = match &loaded.problem {
        Problem::Euclidean(cfg) => {
            // Coincident anchors act as one anchor carrying their summed weight.
            let merged = cfg.merge_active();
            let m = &merged.config;
            let only = m.len() == 1;
            let mut rows = Vec::with_capacity(cfg.len());
            for (i, p) in cfg.points().iter().enumerate() {
                if !(p.weight > 0.0) {
                    rows.push(inactive_row(i, p.weight));
                    continue;
                }
                let k = (0..m.len())
                    .find(|&k| m.points()[k].position == p.position)
                    .expect("every active anchor has a merged group");
                let pull = vertex_pull(m, k).map_err(|e| input_error("points", e))?;
                let verdict = if only {
                    ONLY_ANCHOR
                } else {
                    match classify_vertex(m, k, &SolverOptions::default())
                        .map_err(|e| input_error("points", e))?
                    {
                        VertexVerdict::Absorbed => ABSORBED,
                        VertexVerdict::Excluded => FLOATING,
                    }
                };
                rows.push(ClassifyRow {
                    index: i,
                    weight: p.weight,
                    effective_weight: m.points()[k].weight,
                    vertex_pull: Some(pull),
                    verdict: verdict.into(),
                });
            }
            rows
        }
        Problem::Sphere(cfg) => {
            let (m, _, _) = cfg.merge_active();
            let only = m.len() == 1;
            let mut rows = Vec::with_capacity(cfg.len());
            for (i, &(p, w)) in cfg.points().iter().enumerate() {
                if !(w > 0.0) {
                    rows.push(inactive_row(i, w));
                    continue;
                }
                let k = (0..m.len())
                    .find(|&k| m.points()[k].0 == p)
                    .expect("every active anchor has a merged group");
                let pull = sphere::vertex_pull(&m, k).map_err(|e| input_error("points", e))?;
                let effective = m.points()[k].1;
                let verdict = if only {
                    ONLY_ANCHOR
                } else if pull <= effective {
                    ABSORBED
                } else {
                    FLOATING
                };
                rows.push(ClassifyRow {
                    index: i,
                    weight: w,
                    effective_weight: effective,
                    vertex_pull: Some(pull),
                    verdict: verdict.into(),
                });
            }
            rows
        }
    };
    let report = ClassifyReport {
        input_digest: loaded.digest,
        rows,
    };
    Ok((to_json(&report), Exit::Success))
}

fn inactive_row(index: usize, weight: f64) -> ClassifyRow {
    ClassifyRow {
        index,
        weight,
        effective_weight: weight,
        vertex_pull: None,
        verdict: INACTIVE.into(),
    }
}

pub fn cmd_oracle_compare(args: &SolveArgs, levels: usize, per_level: usize) -> CmdResult {
    let loaded = LoadedConfig::from_path(&args.input)?;
    let opts = solver_options(&loaded, args.tolerance, args.max_iter)?;
    let grid_error = |e: Error| input_error("--levels/--per-level", e);
    let (solver, oracle, distance) = match &loaded.problem {
        Problem::Euclidean(cfg) => {
            let out = solve(cfg, &opts).map_err(|e| input_error("input", e))?;
            let grid = grid_refine_minimize(cfg, levels, per_level).map_err(grid_error)?;
            let distance = out.minimizer.distance(&grid.argmin);
            (
                SolverSide {
                    argmin: out.minimizer.to_vec(),
                    objective_value: out.objective_value,
                    converged: out.converged,
                    iterations: out.iterations,
                },
                OracleSide {
                    argmin: grid.argmin.to_vec(),
                    objective_value: grid.min_value,
                    resolution: grid.resolution,
                    cells_evaluated: grid.cells_evaluated,
                    level_values: grid.level_values,
                },
                distance,
            )
        }
        Problem::Sphere(cfg) => {
            let out = solve_on_sphere(cfg, &opts).map_err(|e| input_error("input", e))?;
            let grid =
                spherical_grid_minimize(cfg, SPHERE_ORACLE_RESOLUTION_DEG).map_err(grid_error)?;
            let distance = out.minimizer.distance(&grid.argmin);
            (
                SolverSide {
                    argmin: out.minimizer.coords().to_vec(),
                    objective_value: out.objective_value,
                    converged: out.converged,
                    iterations: out.iterations,
                },
                OracleSide {
                    argmin: grid.argmin.coords().to_vec(),
                    objective_value: grid.min_value,
                    resolution: grid.resolution,
                    cells_evaluated: grid.cells_evaluated,
                    level_values: grid.level_values,
                },
                distance,
            )
        }
    };
    let threshold = 10.0 * oracle.resolution;
    let agreed = distance <= threshold;
    let report = OracleCompareReport {
        input_digest: loaded.digest,
        solver,
        oracle,
        distance,
        threshold,
        agreed,
    };
    let exit = if agreed { Exit::Success } else { Exit::Failed };
    Ok((to_json(&report), exit))
}
