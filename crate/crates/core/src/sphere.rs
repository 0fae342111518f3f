//! The weighted Fermat-Torricelli problem on the unit sphere.
//!
//! Geodesics from the knot point are pulled back to its tangent plane with the
//! logarithm map; at a floating minimizer the weighted unit tangents toward the
//! anchors balance, exactly as the Euclidean unit vectors do in the plane.
//! Anchors must lie in an open hemisphere so that every geodesic used is the
//! unique shortest arc.

use crate::error::{Error, Result};
use crate::oracle::{random_unit, SplitMix64};
use crate::solver::{Case, SolverOptions, Warning};

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &Vec3, y: &Vec3) -> Vec3 {
    [
        alpha * x[0] + y[0],
        alpha * x[1] + y[1],
        alpha * x[2] + y[2],
    ]
}

fn scale(alpha: f64, x: &Vec3) -> Vec3 {
    [alpha * x[0], alpha * x[1], alpha * x[2]]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A point on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Accepts a vector that is already unit length (within 1e-12).
    pub fn new(coords: Vec3) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("sphere point"));
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(n));
        }
        Ok(SpherePoint(coords))
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn from_vector(v: Vec3) -> Result<Self> {
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("sphere point"));
        }
        let n = norm(&v);
        if !(n > 1e-300) {
            return Err(Error::InvalidArgument(
                "zero vector has no direction".into(),
            ));
        }
        Ok(SpherePoint(scale(1.0 / n, &v)))
    }

    pub fn from_lat_lon_deg(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        if !lat_deg.is_finite() || !lon_deg.is_finite() {
            return Err(Error::NonFinite("latitude/longitude"));
        }
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(Error::InvalidArgument(format!(
                "latitude {lat_deg} outside [-90, 90]"
            )));
        }
        let (sl, cl) = lat_deg.to_radians().sin_cos();
        let (so, co) = lon_deg.to_radians().sin_cos();
        SpherePoint::from_vector([cl * co, cl * so, sl])
    }

    pub fn coords(&self) -> &Vec3 {
        &self.0
    }

    /// (latitude, longitude) in degrees.
    pub fn lat_lon_deg(&self) -> (f64, f64) {
        let [x, y, z] = self.0;
        (
            z.clamp(-1.0, 1.0).asin().to_degrees(),
            y.atan2(x).to_degrees(),
        )
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Great-circle distance in radians.
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        // atan2 form stays accurate for nearby points
        let c = cross(&self.0, &other.0);
        norm(&c).atan2(self.dot(other))
    }

    /// An orthonormal basis of the tangent plane.
    pub fn tangent_basis(&self) -> (Vec3, Vec3) {
        let p = &self.0;
        let (i, _) = p
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap_or((0, &0.0));
        let mut e = [0.0; 3];
        e[i] = 1.0;
        let t = axpy(-dot(&e, p), p, &e);
        let e1 = scale(1.0 / norm(&t), &t);
        let e2 = cross(p, &e1);
        (e1, e2)
    }

    /// Exponential map without argument checks; renormalizes the result.
    pub(crate) fn exp_raw(&self, v: Vec3) -> SpherePoint {
        let n = norm(&v);
        if n < 1e-12 {
            return *self;
        }
        let (s, c) = n.sin_cos();
        let out = axpy(s / n, &v, &scale(c, &self.0));
        SpherePoint(scale(1.0 / norm(&out), &out))
    }
}

/// A vector in the tangent plane at `base`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    base: SpherePoint,
    vec: Vec3,
}

impl TangentVector {
    pub fn new(base: SpherePoint, vec: Vec3) -> Result<Self> {
        if vec.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("tangent vector"));
        }
        let ip = dot(&base.0, &vec);
        if ip.abs() > 1e-10 {
            return Err(Error::NotTangent(ip));
        }
        Ok(TangentVector { base, vec })
    }

    pub fn zero(base: SpherePoint) -> Self {
        TangentVector {
            base,
            vec: [0.0; 3],
        }
    }

    /// Removes the normal component so the result is tangent at `base`.
    fn projected(base: SpherePoint, v: Vec3) -> Self {
        let vec = axpy(-dot(&base.0, &v), &base.0, &v);
        TangentVector { base, vec }
    }

    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn vec(&self) -> &Vec3 {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        norm(&self.vec)
    }
}

/// `exp_base(v)`: walk the geodesic from `base` in direction `v` for length `|v|`.
pub fn exp_map(base: &SpherePoint, v: &TangentVector) -> Result<SpherePoint> {
    if v.base != *base {
        return Err(Error::BaseMismatch);
    }
    let n = v.norm();
    if n >= std::f64::consts::PI {
        return Err(Error::BeyondInjectivityRadius(n));
    }
    Ok(base.exp_raw(v.vec))
}

/// `log_base(target)`: the tangent vector at `base` whose geodesic reaches `target`.
pub fn log_map(base: &SpherePoint, target: &SpherePoint) -> Result<TangentVector> {
    if base == target {
        return Ok(TangentVector::zero(*base));
    }
    let c = base.dot(target);
    if c <= -1.0 + 1e-12 {
        return Err(Error::AntipodalPoints);
    }
    let w = axpy(-c, &base.0, &target.0);
    let n = norm(&w);
    if n == 0.0 {
        return Ok(TangentVector::zero(*base));
    }
    let theta = n.atan2(c);
    Ok(TangentVector::projected(*base, scale(theta / n, &w)))
}

/// Weighted anchors on the unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereConfiguration {
    points: Vec<(SpherePoint, f64)>,
    hemisphere_center: Option<SpherePoint>,
}

const HEMISPHERE_PROBES: usize = 64;
const HEMISPHERE_SEED: u64 = 0x5EE_D0F5_FE4E;

impl SphereConfiguration {
    pub fn new(points: Vec<(SpherePoint, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (index, &(_, w)) in points.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite("weight"));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, weight: w });
            }
        }
        let mut cfg = SphereConfiguration {
            points,
            hemisphere_center: None,
        };
        cfg.hemisphere_center = cfg.find_hemisphere();
        Ok(cfg)
    }

    /// Tries the normalized weighted centroid, then 64 seeded random directions.
    fn find_hemisphere(&self) -> Option<SpherePoint> {
        let contains = |n: &SpherePoint| self.active().all(|(_, p, _)| n.dot(&p) > 0.0);
        let mut centroid = [0.0; 3];
        for (_, p, w) in self.active() {
            centroid = axpy(w, &p.0, &centroid);
        }
        if let Ok(c) = SpherePoint::from_vector(centroid) {
            if contains(&c) {
                return Some(c);
            }
        }
        let mut rng = SplitMix64::new(HEMISPHERE_SEED);
        (0..HEMISPHERE_PROBES)
            .map(|_| random_unit(&mut rng))
            .find(|n| contains(n))
    }

    pub fn points(&self) -> &[(SpherePoint, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Active anchors as `(index, point, weight)`.
    pub fn active(&self) -> impl Iterator<Item = (usize, SpherePoint, f64)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, (_, w))| *w > 0.0)
            .map(|(i, &(p, w))| (i, p, w))
    }

    pub fn active_count(&self) -> usize {
        self.active().count()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|(_, w)| w).sum()
    }

    /// True iff the active anchors lie strictly inside an open hemisphere.
    pub fn in_hemisphere(&self) -> bool {
        self.hemisphere_center.is_some()
    }

    /// Pole of a hemisphere containing the active anchors, when one was found.
    pub fn hemisphere_center(&self) -> Option<SpherePoint> {
        self.hemisphere_center
    }

    /// Largest geodesic distance between active anchors.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<SpherePoint> = self.active().map(|(_, p, _)| p).collect();
        let mut d: f64 = 0.0;
        for (a, pa) in pts.iter().enumerate() {
            for pb in &pts[a + 1..] {
                d = d.max(pa.distance(pb));
            }
        }
        d
    }

    /// Applies `f` to every anchor.
    pub fn map_points(&self, f: impl Fn(&SpherePoint) -> SpherePoint) -> Result<Self> {
        SphereConfiguration::new(self.points.iter().map(|(p, w)| (f(p), *w)).collect())
    }

    /// Folds active anchors at identical positions together, summing weights.
    /// Returns the merged configuration, the first original index of each
    /// merged anchor, and whether anything was folded.
    pub fn merge_active(&self) -> (SphereConfiguration, Vec<usize>, bool) {
        let mut points: Vec<(SpherePoint, f64)> = Vec::new();
        let mut origin = Vec::new();
        for (i, p, w) in self.active() {
            match points.iter().position(|(q, _)| *q == p) {
                Some(k) => points[k].1 += w,
                None => {
                    points.push((p, w));
                    origin.push(i);
                }
            }
        }
        let merged = points.len() < self.active_count();
        let cfg = SphereConfiguration {
            points,
            hemisphere_center: self.hemisphere_center,
        };
        (cfg, origin, merged)
    }
}

/// `sum_i b_i d(x, A_i)` with great-circle distances.
pub fn geodesic_objective(config: &SphereConfiguration, x: &SpherePoint) -> f64 {
    geodesic_objective_unchecked(config, x)
}

pub(crate) fn geodesic_objective_unchecked(config: &SphereConfiguration, x: &SpherePoint) -> f64 {
    config.active().map(|(_, p, w)| w * x.distance(&p)).sum()
}

fn unit_log(base: &SpherePoint, target: &SpherePoint, index: usize) -> Result<(Vec3, f64)> {
    let v = log_map(base, target)?;
    let n = v.norm();
    if !(n > 1e-300) {
        return Err(Error::AtAnchor(index));
    }
    Ok((scale(1.0 / n, &v.vec), n))
}

/// `sum_i b_i log_x(A_i) / |log_x(A_i)|`, a tangent vector at `x`.
pub fn geodesic_balancing_residual(
    config: &SphereConfiguration,
    x: &SpherePoint,
) -> Result<TangentVector> {
    let mut acc = [0.0; 3];
    for (i, p, w) in config.active() {
        let (u, _) = unit_log(x, &p, i)?;
        acc = axpy(w, &u, &acc);
    }
    Ok(TangentVector::projected(*x, acc))
}

fn pull_tangent(config: &SphereConfiguration, i: usize) -> Result<TangentVector> {
    let &(anchor, weight) = config.points.get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        len: config.points.len(),
    })?;
    if weight <= 0.0 {
        return Err(Error::InactiveAnchor(i));
    }
    let mut acc = [0.0; 3];
    for (j, p, w) in config.active() {
        if j == i {
            continue;
        }
        let (u, _) = unit_log(&anchor, &p, j).map_err(|e| match e {
            Error::AtAnchor(_) => Error::CoincidentPoints,
            other => other,
        })?;
        acc = axpy(w, &u, &acc);
    }
    Ok(TangentVector::projected(anchor, acc))
}

/// Norm of the weighted unit tangents at anchor `i` toward every other anchor.
pub fn vertex_pull(config: &SphereConfiguration, i: usize) -> Result<f64> {
    Ok(pull_tangent(config, i)?.norm())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereOutcome {
    pub minimizer: SpherePoint,
    pub case: Case,
    pub residual_norm: f64,
    pub objective_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<Warning>,
}

/// Riemannian descent: `x <- exp_x(step * residual / sum b)`, with `step`
/// starting at the mean anchor distance and halved whenever the objective
/// would increase. A Riemannian Newton step is tried first and taken when it
/// lowers both the residual and the objective.
pub fn solve_on_sphere(
    config: &SphereConfiguration,
    options: &SolverOptions,
) -> Result<SphereOutcome> {
    options.validate()?;
    if config.active_count() == 0 {
        return Err(Error::NoActiveAnchor);
    }
    if !config.in_hemisphere() {
        return Err(Error::NotInHemisphere);
    }
    let (anchors, origin, merged) = config.merge_active();
    let mut warnings = Vec::new();
    if merged {
        warnings.push(Warning::MergedDuplicates);
    }
    if great_circle_degenerate(&anchors) {
        warnings.push(Warning::CollinearInput);
    }

    let absorbed_at = |k: usize, warnings: Vec<Warning>, pull: f64, iterations: usize| {
        let (minimizer, weight) = anchors.points[k];
        SphereOutcome {
            minimizer,
            case: Case::AbsorbedAt(origin[k]),
            residual_norm: (pull - weight).max(0.0),
            objective_value: geodesic_objective_unchecked(config, &minimizer),
            iterations,
            converged: true,
            warnings,
        }
    };

    if anchors.len() == 1 {
        return Ok(absorbed_at(0, warnings, 0.0, 0));
    }

    let mut candidates = Vec::new();
    for k in 0..anchors.len() {
        let pull = vertex_pull(&anchors, k)?;
        if pull <= anchors.points[k].1 {
            let f = geodesic_objective_unchecked(&anchors, &anchors.points[k].0);
            candidates.push((k, pull, f));
        }
    }
    if !candidates.is_empty() {
        if candidates.len() > 1 {
            warnings.push(Warning::BoundaryTie);
        }
        let (k, pull, _) = candidates
            .into_iter()
            .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        return Ok(absorbed_at(k, warnings, pull, 0));
    }

    let total = config.total_weight();
    let target = options.residual_tolerance * total;
    let snap = options.snap_distance(anchors.diameter());
    let mut x = anchors.hemisphere_center.ok_or(Error::NotInHemisphere)?;
    let mut centroid = [0.0; 3];
    for (_, p, w) in anchors.active() {
        centroid = axpy(w, &p.0, &centroid);
    }
    if let Ok(c) = SpherePoint::from_vector(centroid) {
        x = c;
    }

    let mean_distance = anchors
        .active()
        .map(|(_, p, _)| x.distance(&p))
        .sum::<f64>()
        / anchors.len() as f64;
    let mut step = mean_distance.max(snap);
    let mut fx = geodesic_objective_unchecked(&anchors, &x);
    let mut iterations = 0;
    let mut residual_norm;
    let mut converged = false;

    loop {
        if let Some(k) = nearest_within(&anchors, &x, snap) {
            let pull = pull_tangent(&anchors, k)?;
            let excess = pull.norm() - anchors.points[k].1;
            if excess <= 0.0 {
                return Ok(absorbed_at(k, warnings, pull.norm(), iterations));
            }
            let anchor = anchors.points[k].0;
            let curvature: f64 = anchors
                .active()
                .filter(|(j, _, _)| *j != k)
                .map(|(_, p, w)| w / anchor.distance(&p))
                .sum();
            let len = (excess / curvature)
                .max(snap)
                .min(0.5 * mean_distance.max(snap));
            x = anchor.exp_raw(scale(len / pull.norm(), &pull.vec));
            fx = geodesic_objective_unchecked(&anchors, &x);
        }
        let residual = geodesic_balancing_residual(&anchors, &x)?;
        residual_norm = residual.norm();
        if residual_norm <= target {
            converged = true;
            break;
        }
        if iterations >= options.max_iterations {
            break;
        }
        iterations += 1;
        if let Some((cand, r)) = newton_candidate(&anchors, &x, &residual, snap) {
            let fc = geodesic_objective_unchecked(&anchors, &cand);
            if r < residual_norm && fc <= fx + 4.0 * f64::EPSILON * fx {
                x = cand;
                fx = fc;
                continue;
            }
        }
        let direction = scale(1.0 / total, &residual.vec);
        loop {
            let candidate = x.exp_raw(scale(step, &direction));
            let fc = geodesic_objective_unchecked(&anchors, &candidate);
            if fc <= fx {
                x = candidate;
                fx = fc;
                break;
            }
            step *= 0.5;
            if step < 1e-300 {
                break;
            }
        }
        if step < 1e-300 {
            residual_norm = geodesic_balancing_residual(&anchors, &x)?.norm();
            break;
        }
    }

    Ok(SphereOutcome {
        minimizer: x,
        case: Case::Floating,
        residual_norm,
        objective_value: geodesic_objective_unchecked(config, &x),
        iterations,
        converged,
        warnings,
    })
}

/// Riemannian Newton step. The Hessian of `d(x, A)` on the tangent plane is
/// `cot(d) (I - u u^T)` with `u` the unit tangent toward `A`.
fn newton_candidate(
    config: &SphereConfiguration,
    x: &SpherePoint,
    residual: &TangentVector,
    snap: f64,
) -> Option<(SpherePoint, f64)> {
    let (e1, e2) = x.tangent_basis();
    let mut h = [[0.0f64; 2]; 2];
    for (i, p, w) in config.active() {
        let (u, d) = unit_log(x, &p, i).ok()?;
        let u2 = [dot(&u, &e1), dot(&u, &e2)];
        let c = w / d.tan();
        h[0][0] += c * (1.0 - u2[0] * u2[0]);
        h[0][1] -= c * u2[0] * u2[1];
        h[1][1] += c * (1.0 - u2[1] * u2[1]);
    }
    h[1][0] = h[0][1];
    let g = [dot(&residual.vec, &e1), dot(&residual.vec, &e2)];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let scale_h = h[0][0].abs().max(h[1][1].abs());
    if !(det > 1e-14 * scale_h * scale_h) || h[0][0] <= 0.0 {
        return None;
    }
    let a = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
    let b = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
    let v = axpy(a, &e1, &scale(b, &e2));
    if !(norm(&v) < std::f64::consts::FRAC_PI_2) {
        return None;
    }
    let cand = x.exp_raw(v);
    if nearest_within(config, &cand, snap).is_some() {
        return None;
    }
    let r = geodesic_balancing_residual(config, &cand).ok()?.norm();
    Some((cand, r))
}

fn nearest_within(config: &SphereConfiguration, x: &SpherePoint, radius: f64) -> Option<usize> {
    config
        .points
        .iter()
        .enumerate()
        .map(|(i, (p, _))| (i, x.distance(p)))
        .filter(|&(_, d)| d <= radius)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// All active anchors on one great circle.
fn great_circle_degenerate(config: &SphereConfiguration) -> bool {
    let pts: Vec<Vec3> = config.active().map(|(_, p, _)| p.0).collect();
    let mut best: Option<Vec3> = None;
    let mut best_norm = 0.0;
    for (a, pa) in pts.iter().enumerate() {
        for pb in &pts[a + 1..] {
            let c = cross(pa, pb);
            let n = norm(&c);
            if n > best_norm {
                best_norm = n;
                best = Some(c);
            }
        }
    }
    match best {
        Some(n) if best_norm > 1e-12 => {
            let n = scale(1.0 / best_norm, &n);
            pts.iter().all(|p| dot(p, &n).abs() <= 1e-12)
        }
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn north() -> SpherePoint {
        SpherePoint::new([0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn log_of_itself_is_exactly_zero() {
        let p = SpherePoint::from_vector([1.0, 0.0, 0.2]).unwrap();
        assert_eq!(log_map(&p, &p).unwrap().vec(), &[0.0; 3]);
        let cfg = SphereConfiguration::new(vec![(p, 1.0), (north(), 1.0)]).unwrap();
        assert_eq!(
            geodesic_balancing_residual(&cfg, &p),
            Err(Error::AtAnchor(0))
        );
    }

    fn symmetric_three(lat: f64) -> SphereConfiguration {
        SphereConfiguration::new(
            [0.0, 120.0, 240.0]
                .iter()
                .map(|&lon| (SpherePoint::from_lat_lon_deg(lat, lon).unwrap(), 1.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exp_examples() {
        let n = north();
        let v = TangentVector::new(n, [FRAC_PI_2, 0.0, 0.0]).unwrap();
        let p = exp_map(&n, &v).unwrap();
        assert_abs_diff_eq!(p.coords()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.coords()[2], 0.0, epsilon = 1e-15);
        assert_eq!(exp_map(&n, &TangentVector::zero(n)).unwrap(), n);
        let v = TangentVector::new(n, [FRAC_PI_4, 0.0, 0.0]).unwrap();
        let p = exp_map(&n, &v).unwrap();
        assert_abs_diff_eq!(p.coords()[0], 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.coords()[2], 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn exp_errors() {
        let n = north();
        let v = TangentVector::new(n, [PI, 0.0, 0.0]).unwrap();
        assert!(matches!(
            exp_map(&n, &v),
            Err(Error::BeyondInjectivityRadius(_))
        ));
        let e = SpherePoint::new([1.0, 0.0, 0.0]).unwrap();
        let v = TangentVector::new(e, [0.0, 0.1, 0.0]).unwrap();
        assert_eq!(exp_map(&n, &v), Err(Error::BaseMismatch));
        assert!(matches!(
            TangentVector::new(n, [0.0, 0.0, 0.1]),
            Err(Error::NotTangent(_))
        ));
    }

    #[test]
    fn log_examples() {
        let n = north();
        let e = SpherePoint::new([1.0, 0.0, 0.0]).unwrap();
        let v = log_map(&n, &e).unwrap();
        assert_abs_diff_eq!(v.vec()[0], FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v.vec()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.vec()[2], 0.0, epsilon = 1e-15);
        assert_eq!(log_map(&n, &n).unwrap().norm(), 0.0);
        let s = SpherePoint::new([0.0, 0.0, -1.0]).unwrap();
        assert_eq!(log_map(&n, &s), Err(Error::AntipodalPoints));
    }

    #[test]
    fn point_constructors() {
        assert!(matches!(
            SpherePoint::new([1.0, 1.0, 0.0]),
            Err(Error::NotUnit(_))
        ));
        assert!(SpherePoint::from_vector([0.0; 3]).is_err());
        let p = SpherePoint::from_lat_lon_deg(90.0, 17.0).unwrap();
        assert!(p.distance(&north()) < 1e-15);
        let (lat, lon) = SpherePoint::from_lat_lon_deg(-20.0, 135.0)
            .unwrap()
            .lat_lon_deg();
        assert_abs_diff_eq!(lat, -20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lon, 135.0, epsilon = 1e-12);
        assert!(SpherePoint::from_lat_lon_deg(91.0, 0.0).is_err());
    }

    #[test]
    fn residual_examples() {
        let cfg = symmetric_three(30.0);
        let r = geodesic_balancing_residual(&cfg, &north()).unwrap();
        assert!(r.norm() <= 1e-12);
        let single =
            SphereConfiguration::new(vec![(SpherePoint::new([1.0, 0.0, 0.0]).unwrap(), 2.5)])
                .unwrap();
        let r = geodesic_balancing_residual(&single, &north()).unwrap();
        assert_abs_diff_eq!(r.vec()[0], 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.vec()[2], 0.0, epsilon = 1e-15);
        assert_eq!(
            geodesic_balancing_residual(&single, &SpherePoint::new([1.0, 0.0, 0.0]).unwrap()),
            Err(Error::AtAnchor(0))
        );
    }

    #[test]
    fn hemisphere_flag() {
        assert!(symmetric_three(10.0).in_hemisphere());
        // equator points every 120 degrees are not strictly inside any open hemisphere
        assert!(!symmetric_three(0.0).in_hemisphere());
        let opposite = SphereConfiguration::new(vec![
            (north(), 1.0),
            (SpherePoint::new([0.0, 0.0, -1.0]).unwrap(), 1.0),
        ])
        .unwrap();
        assert!(!opposite.in_hemisphere());
        assert_eq!(
            solve_on_sphere(&opposite, &SolverOptions::default()),
            Err(Error::NotInHemisphere)
        );
    }

    #[test]
    fn solve_symmetric_three() {
        let out = solve_on_sphere(&symmetric_three(30.0), &SolverOptions::default()).unwrap();
        assert_eq!(out.case, Case::Floating);
        assert!(out.converged);
        assert!(out.minimizer.distance(&north()) <= 1e-8);
    }

    #[test]
    fn solve_dominant_weight() {
        let cfg = SphereConfiguration::new(vec![
            (SpherePoint::from_lat_lon_deg(40.0, 10.0).unwrap(), 5.0),
            (SpherePoint::from_lat_lon_deg(42.0, 12.0).unwrap(), 1.0),
            (SpherePoint::from_lat_lon_deg(39.0, 13.0).unwrap(), 1.0),
        ])
        .unwrap();
        let out = solve_on_sphere(&cfg, &SolverOptions::default()).unwrap();
        assert_eq!(out.case, Case::AbsorbedAt(0));
        assert_eq!(out.minimizer, cfg.points()[0].0);
    }

    #[test]
    fn single_anchor_is_absorbed() {
        let cfg = SphereConfiguration::new(vec![(north(), 1.0)]).unwrap();
        let out = solve_on_sphere(&cfg, &SolverOptions::default()).unwrap();
        assert_eq!(out.case, Case::AbsorbedAt(0));
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn sphere_vertex_pull_errors() {
        let cfg = symmetric_three(30.0);
        assert!(matches!(
            vertex_pull(&cfg, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
        let cfg = SphereConfiguration::new(vec![(north(), 0.0), (north(), 1.0)]).unwrap();
        assert_eq!(vertex_pull(&cfg, 0), Err(Error::InactiveAnchor(0)));
    }
}
