//! Weighted Fermat-Torricelli point of a Euclidean configuration.
//!
//! An anchor `A_i` is the minimizer iff the weighted pull of the other anchors
//! toward it does not exceed its own weight. When no anchor absorbs, the
//! minimizer floats and the unit vectors toward the anchors balance; it is
//! located with a Weiszfeld fixed-point iteration started at the weighted
//! centroid. A Newton step on the smooth objective replaces the Weiszfeld
//! update whenever it lowers both the residual and the objective, which keeps
//! minimizers close to an anchor from stalling the linear Weiszfeld rate.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    active_directions, check_off_anchors, objective_unchecked, unit_vector, Configuration,
    Degeneracy, Point, COINCIDENCE_EPS,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Convergence threshold on the balancing residual, relative to the total weight.
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    /// Absolute snap radius around anchors. `None` uses 1e-12 times the diameter.
    pub vertex_snap_distance: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            residual_tolerance: 1e-9,
            max_iterations: 10_000,
            vertex_snap_distance: None,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.residual_tolerance = tol;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "residual_tolerance must be positive, got {}",
                self.residual_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be positive".into(),
            ));
        }
        if let Some(s) = self.vertex_snap_distance {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "vertex_snap_distance must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn snap_distance(&self, diameter: f64) -> f64 {
        self.vertex_snap_distance
            .unwrap_or(1e-12 * if diameter > 0.0 { diameter } else { 1.0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// The minimizer is not an anchor; the weighted unit vectors balance there.
    Floating,
    /// The minimizer is anchor `i` (original index).
    AbsorbedAt(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Warning {
    /// Active anchors lie on one line; the minimizer may not be unique.
    CollinearInput,
    /// Three-dimensional anchors lie in one plane.
    CoplanarInput,
    /// Anchors sharing a position were merged before solving.
    MergedDuplicates,
    /// More than one anchor met the absorption test with equality.
    BoundaryTie,
}

impl Warning {
    pub fn as_str(&self) -> &'static str {
        match self {
            Warning::CollinearInput => "CollinearInput",
            Warning::CoplanarInput => "CoplanarInput",
            Warning::MergedDuplicates => "MergedDuplicates",
            Warning::BoundaryTie => "BoundaryTie",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexVerdict {
    /// The minimizer sits at this anchor.
    Absorbed,
    /// The minimizer is somewhere else.
    Excluded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOutcome {
    pub minimizer: Point,
    pub case: Case,
    /// Balancing residual norm at a floating minimizer; for an absorbed anchor,
    /// the amount by which the pull exceeds the anchor weight (zero).
    pub residual_norm: f64,
    pub objective_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<Warning>,
}

/// `|| sum_{j != i} b_j u(A_j, A_i) ||` over the active anchors.
pub fn vertex_pull(config: &Configuration, i: usize) -> Result<f64> {
    Ok(pull_vector(config, i)?.norm())
}

/// Resultant `sum_{j != i} b_j u(A_i, A_j)`, pointing from `A_i` into the
/// configuration. Its norm is the vertex pull.
fn pull_vector(config: &Configuration, i: usize) -> Result<Point> {
    let weight = config.weight(i)?;
    if weight <= 0.0 {
        return Err(Error::InactiveAnchor(i));
    }
    let anchor = config.position(i)?;
    let mut acc = Point::origin(config.dim());
    for (j, p) in config.active() {
        if j == i {
            continue;
        }
        acc = acc + unit_vector(&anchor, &p.position)?.as_point() * p.weight;
    }
    Ok(acc)
}

/// Closed absorption test: anchor `i` is the minimizer iff its pull is at most `b_i`.
pub fn classify_vertex(
    config: &Configuration,
    i: usize,
    options: &SolverOptions,
) -> Result<VertexVerdict> {
    options.validate()?;
    let pull = vertex_pull(config, i)?;
    Ok(if pull <= config.weight(i)? {
        VertexVerdict::Absorbed
    } else {
        VertexVerdict::Excluded
    })
}

/// One Weiszfeld update: the inverse-distance weighted average of the anchors.
pub fn weiszfeld_step(config: &Configuration, x: &Point) -> Result<Point> {
    check_off_anchors(config, x)?;
    let mut num = Point::origin(config.dim());
    let mut den = 0.0;
    for (_, p) in config.active() {
        let w = p.weight / x.distance(&p.position);
        num = num + p.position * w;
        den += w;
    }
    if !(den > 0.0) {
        return Err(Error::NoActiveAnchor);
    }
    Ok(num * (1.0 / den))
}

pub(crate) fn residual_vector(config: &Configuration, x: &Point) -> Result<Point> {
    let mut r = Point::origin(config.dim());
    for (_, w, u) in active_directions(config, x)? {
        r = r + u.as_point() * w;
    }
    Ok(r)
}

/// Solves from the weighted centroid of the active anchors.
pub fn solve(config: &Configuration, options: &SolverOptions) -> Result<SolverOutcome> {
    run(config, options, None, None)
}

/// Solves from a caller-chosen starting point.
pub fn solve_from(
    config: &Configuration,
    options: &SolverOptions,
    start: &Point,
) -> Result<SolverOutcome> {
    start.check_dim(config.dim())?;
    run(config, options, Some(*start), None)
}

/// Like [`solve`], also returning every iterate the fixed-point loop visited.
pub fn solve_traced(
    config: &Configuration,
    options: &SolverOptions,
) -> Result<(SolverOutcome, Vec<Point>)> {
    let mut trace = Vec::new();
    let out = run(config, options, None, Some(&mut trace))?;
    Ok((out, trace))
}

fn structural_warnings(config: &Configuration, merged: bool) -> Vec<Warning> {
    let mut warnings = Vec::new();
    match config.degeneracy() {
        Degeneracy::Collinear => warnings.push(Warning::CollinearInput),
        Degeneracy::Coplanar => warnings.push(Warning::CoplanarInput),
        Degeneracy::None => {}
    }
    if merged {
        warnings.push(Warning::MergedDuplicates);
    }
    warnings
}

fn run(
    config: &Configuration,
    options: &SolverOptions,
    start: Option<Point>,
    mut trace: Option<&mut Vec<Point>>,
) -> Result<SolverOutcome> {
    options.validate()?;
    let merged = config.merge_active();
    let anchors = &merged.config;
    if anchors.is_empty() {
        return Err(Error::NoActiveAnchor);
    }
    let mut warnings = structural_warnings(config, merged.merged);

    let absorbed_at = |k: usize, warnings: Vec<Warning>, pull: f64| {
        let minimizer = anchors.points()[k].position;
        SolverOutcome {
            minimizer,
            case: Case::AbsorbedAt(merged.origin[k]),
            residual_norm: (pull - anchors.points()[k].weight).max(0.0),
            objective_value: objective_unchecked(config, &minimizer),
            iterations: 0,
            converged: true,
            warnings,
        }
    };

    if anchors.len() == 1 {
        return Ok(absorbed_at(0, warnings, 0.0));
    }

    // Closed-condition absorption over every (merged) anchor.
    let mut candidates = Vec::new();
    for k in 0..anchors.len() {
        let pull = vertex_pull(anchors, k)?;
        if pull <= anchors.points()[k].weight {
            let f = objective_unchecked(anchors, &anchors.points()[k].position);
            candidates.push((k, pull, f));
        }
    }
    if let Some(&(first, ..)) = candidates.first() {
        let (best, pull, _) = candidates
            .iter()
            .copied()
            .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)))
            .unwrap_or((first, 0.0, 0.0));
        if candidates.len() > 1 {
            warnings.push(Warning::BoundaryTie);
        }
        return Ok(absorbed_at(best, warnings, pull));
    }

    let total = config.total_weight();
    let target = options.residual_tolerance * total;
    let snap = options.snap_distance(anchors.diameter());
    let mut x = match start {
        Some(s) => s,
        None => anchors.weighted_centroid()?,
    };
    let mut iterations = 0;
    let mut converged = false;
    let mut residual_norm;

    loop {
        if let Some(k) = nearest_within(anchors, &x, snap) {
            // Re-test absorption, then step off the anchor along the pull of the others.
            let pull = pull_vector(anchors, k)?;
            let excess = pull.norm() - anchors.points()[k].weight;
            if excess <= 0.0 {
                let mut out = absorbed_at(k, warnings, pull.norm());
                out.iterations = iterations;
                return Ok(out);
            }
            let anchor = anchors.points()[k].position;
            let curvature: f64 = anchors
                .points()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, p)| p.weight / anchor.distance(&p.position))
                .sum();
            let step = (excess / curvature).max(snap);
            x = anchor + pull * (step / pull.norm());
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(x);
        }
        let residual = residual_vector(anchors, &x)?;
        residual_norm = residual.norm();
        if residual_norm <= target {
            converged = true;
            break;
        }
        if iterations >= options.max_iterations {
            break;
        }
        let fx = objective_unchecked(anchors, &x);
        x = match newton_candidate(anchors, &x, &residual, snap) {
            Some((cand, r))
                if r < residual_norm
                    && objective_unchecked(anchors, &cand) <= fx + 4.0 * f64::EPSILON * fx =>
            {
                cand
            }
            _ => weiszfeld_step(anchors, &x)?,
        };
        iterations += 1;
    }

    Ok(SolverOutcome {
        minimizer: x,
        case: Case::Floating,
        residual_norm,
        objective_value: objective_unchecked(config, &x),
        iterations,
        converged,
        warnings,
    })
}

/// Newton step on the smooth objective, with the residual norm at the
/// candidate. `None` when the Hessian is singular or the step lands on an anchor.
#[allow(clippy::needless_range_loop)]
fn newton_candidate(
    config: &Configuration,
    x: &Point,
    residual: &Point,
    snap: f64,
) -> Option<(Point, f64)> {
    let d = config.dim().get();
    let mut h = [[0.0f64; 3]; 3];
    for p in config.points() {
        let v = p.position - *x;
        let r = v.norm();
        let u = v * (1.0 / r);
        let s = p.weight / r;
        for a in 0..d {
            for b in 0..d {
                let id = if a == b { 1.0 } else { 0.0 };
                h[a][b] += s * (id - u.coords()[a] * u.coords()[b]);
            }
        }
    }
    let step = solve_small(h, residual.coords(), d)?;
    let cand = *x + Point::new(&step[..d]).ok()?;
    if nearest_within(config, &cand, snap).is_some() {
        return None;
    }
    let r = residual_vector(config, &cand).ok()?.norm();
    Some((cand, r))
}

/// Gaussian elimination with partial pivoting for `d <= 3`.
#[allow(clippy::needless_range_loop)]
fn solve_small(mut a: [[f64; 3]; 3], rhs: &[f64], d: usize) -> Option<[f64; 3]> {
    let mut b = [0.0; 3];
    b[..d].copy_from_slice(rhs);
    let scale = (0..d).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[piv][col].abs() > 1e-14 * scale) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..d {
            let f = a[row][col] / a[col][col];
            for k in col..d {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut out = [0.0; 3];
    for row in (0..d).rev() {
        let mut acc = b[row];
        for k in row + 1..d {
            acc -= a[row][k] * out[k];
        }
        out[row] = acc / a[row][row];
    }
    out.iter().all(|v| v.is_finite()).then_some(out)
}

fn nearest_within(config: &Configuration, x: &Point, radius: f64) -> Option<usize> {
    config
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| (i, x.distance(&p.position)))
        .filter(|&(_, d)| d <= radius.max(COINCIDENCE_EPS))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}
