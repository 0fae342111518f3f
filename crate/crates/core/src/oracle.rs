//! Brute-force ground truth: nested grid search for the Euclidean problem, a
//! latitude-longitude scan for the sphere, and seeded random configurations.
//!
//! Nothing here touches the solver's analytic machinery; the grids only ever
//! evaluate the objective.

use crate::error::{Error, Result};
use crate::geometry::{objective_unchecked, Configuration, Dim, Point, WeightedPoint};
use crate::sphere::{geodesic_objective_unchecked, SphereConfiguration, SpherePoint};

/// SplitMix64 (Steele, Lea, Flood 2014).
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// return z ^ (z >> 31)
/// ```
///
/// Uniform doubles take the top 53 bits: `(z >> 11) * 2^-53`, in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.next_f64()
    }

    /// Uniform integer in `low..=high`.
    pub fn range_inclusive(&mut self, low: usize, high: usize) -> usize {
        low + (self.next_u64() % (high - low + 1) as u64) as usize
    }
}

const MIN_SEPARATION: f64 = 1e-3;

/// Anchors uniform in `[-1, 1]^d`, weights uniform in `[weight_low, weight_high]`.
///
/// Draw order per anchor: `d` coordinates, then the weight. A configuration
/// with two anchors closer than 1e-3 is discarded and redrawn from the same
/// stream.
pub fn random_configuration(
    seed: u64,
    m: usize,
    dim: Dim,
    weight_low: f64,
    weight_high: f64,
) -> Result<Configuration> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if !(weight_low > 0.0 && weight_low <= weight_high && weight_high.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight range [{weight_low}, {weight_high}] is invalid"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    loop {
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            let coords: Vec<f64> = (0..dim.get()).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let w = rng.uniform(weight_low, weight_high);
            points.push(WeightedPoint::new(Point::new(&coords)?, w));
        }
        let separated = points.iter().enumerate().all(|(a, p)| {
            points[a + 1..]
                .iter()
                .all(|q| p.position.distance(&q.position) >= MIN_SEPARATION)
        });
        if separated {
            return Configuration::new(dim, points);
        }
    }
}

/// Anchors drawn uniformly from a spherical cap of angular radius
/// `cap_radius_deg` around a random center, weights uniform in the range.
pub fn random_sphere_configuration(
    seed: u64,
    m: usize,
    cap_radius_deg: f64,
    weight_low: f64,
    weight_high: f64,
) -> Result<SphereConfiguration> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if !(cap_radius_deg > 0.0 && cap_radius_deg < 90.0) {
        return Err(Error::InvalidArgument(
            "cap radius must lie in (0, 90) degrees".into(),
        ));
    }
    if !(weight_low > 0.0 && weight_low <= weight_high && weight_high.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight range [{weight_low}, {weight_high}] is invalid"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let center = random_unit(&mut rng);
    let (e1, e2) = center.tangent_basis();
    let cos_cap = cap_radius_deg.to_radians().cos();
    let mut points = Vec::with_capacity(m);
    for _ in 0..m {
        // uniform on the cap: cos(theta) uniform in [cos_cap, 1]
        let ct = rng.uniform(cos_cap, 1.0);
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let phi = rng.uniform(-std::f64::consts::PI, std::f64::consts::PI);
        let c = center.coords();
        let v = [
            ct * c[0] + st * (phi.cos() * e1[0] + phi.sin() * e2[0]),
            ct * c[1] + st * (phi.cos() * e1[1] + phi.sin() * e2[1]),
            ct * c[2] + st * (phi.cos() * e1[2] + phi.sin() * e2[2]),
        ];
        let w = rng.uniform(weight_low, weight_high);
        points.push((SpherePoint::from_vector(v)?, w));
    }
    SphereConfiguration::new(points)
}

pub(crate) fn random_unit(rng: &mut SplitMix64) -> SpherePoint {
    loop {
        let v = [
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0),
        ];
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if n2 > 1e-6 && n2 <= 1.0 {
            if let Ok(p) = SpherePoint::from_vector(v) {
                return p;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult<P> {
    pub argmin: P,
    pub min_value: f64,
    /// Final grid cell size (Euclidean length, or radians on the sphere).
    pub resolution: f64,
    pub cells_evaluated: u64,
    /// Incumbent value after each level, for the monotonicity check.
    pub level_values: Vec<f64>,
}

const CELL_BUDGET: u64 = 100_000_000;

/// Nested grid search for the weighted distance-sum minimum.
///
/// Level one covers the active anchors' bounding box padded by 10% of the
/// diameter on every side, with `per_level` cell centers per axis; the anchors
/// themselves are evaluated too. Every later level covers a box three cells
/// wide centered on the incumbent, again with `per_level` cells per axis, and
/// is rescanned around the new incumbent (same cell size, at most 16 times)
/// while the best cell lies on the box edge. The incumbent is only replaced by
/// a strictly smaller value, so ties go to the lowest linear grid index.
pub fn grid_refine_minimize(
    config: &Configuration,
    levels: usize,
    per_level: usize,
) -> Result<OracleResult<Point>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    if per_level < 8 {
        return Err(Error::InvalidArgument(format!(
            "per_level must be at least 8, got {per_level}"
        )));
    }
    let d = config.dim().get();
    let cells = (per_level as u64)
        .checked_pow(d as u32)
        .and_then(|c| c.checked_mul(levels as u64))
        .unwrap_or(u64::MAX);
    if cells > CELL_BUDGET {
        return Err(Error::BudgetExceeded { cells });
    }
    let active: Vec<Point> = config.active().map(|(_, p)| p.position).collect();
    if active.is_empty() {
        return Err(Error::NoActiveAnchor);
    }

    let pad = 0.1 * config.diameter();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &active {
        for (a, &c) in p.coords().iter().enumerate() {
            lo[a] = lo[a].min(c - pad);
            hi[a] = hi[a].max(c + pad);
        }
    }

    let mut best = active[0];
    let mut best_val = objective_unchecked(config, &best);
    let mut evaluated = 1u64;
    for p in &active[1..] {
        let v = objective_unchecked(config, p);
        evaluated += 1;
        if v < best_val {
            best_val = v;
            best = *p;
        }
    }

    let mut cell = [0.0f64; 3];
    let mut level_values = Vec::with_capacity(levels);
    for level in 0..levels {
        if level > 0 {
            for c in cell.iter_mut().take(d) {
                *c /= per_level as f64 / 3.0;
            }
        } else {
            for a in 0..d {
                cell[a] = (hi[a] - lo[a]) / per_level as f64;
            }
        }
        let mut passes = 0;
        loop {
            if level > 0 {
                for a in 0..d {
                    lo[a] = best.coords()[a] - 0.5 * per_level as f64 * cell[a];
                }
            }
            let improved_on_edge =
                scan_box(config, &lo, &cell, per_level, &mut best, &mut best_val)?;
            evaluated += per_level.pow(d as u32) as u64;
            passes += 1;
            // a convex objective minimized on the box edge has its minimum
            // outside the box: slide the box and rescan at the same cell size
            if level == 0 || !improved_on_edge || passes > MAX_RECENTER {
                break;
            }
        }
        level_values.push(best_val);
    }

    let resolution = cell[..d].iter().copied().fold(0.0, f64::max);
    Ok(OracleResult {
        argmin: best,
        min_value: best_val,
        resolution,
        cells_evaluated: evaluated,
        level_values,
    })
}

const MAX_RECENTER: usize = 16;

/// Scans `per_level^d` cell centers starting at `lo`. Returns whether the
/// incumbent moved to a cell on the outer ring of the box.
fn scan_box(
    config: &Configuration,
    lo: &[f64; 3],
    cell: &[f64; 3],
    per_level: usize,
    best: &mut Point,
    best_val: &mut f64,
) -> Result<bool> {
    let d = config.dim().get();
    let total = per_level.pow(d as u32);
    let mut coords = [0.0; 3];
    let mut on_edge = false;
    for linear in 0..total {
        let mut rest = linear;
        let mut edge = false;
        for a in 0..d {
            let k = rest % per_level;
            rest /= per_level;
            edge |= k == 0 || k == per_level - 1;
            coords[a] = lo[a] + (k as f64 + 0.5) * cell[a];
        }
        let p = Point::new(&coords[..d])?;
        let v = objective_unchecked(config, &p);
        if v < *best_val {
            *best_val = v;
            *best = p;
            on_edge = edge;
        }
    }
    Ok(on_edge)
}

/// Latitude-longitude scan of the hemisphere that contains the anchors,
/// followed by one refinement pass at `resolution_degrees / 16` over a window
/// of two coarse cells around the incumbent. Anchors are evaluated as well.
pub fn spherical_grid_minimize(
    config: &SphereConfiguration,
    resolution_degrees: f64,
) -> Result<OracleResult<SpherePoint>> {
    if !(resolution_degrees > 0.0 && resolution_degrees <= 45.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must lie in (0, 45] degrees, got {resolution_degrees}"
        )));
    }
    let pole = config.hemisphere_center().ok_or(Error::NotInHemisphere)?;
    if config.active_count() == 0 {
        return Err(Error::NoActiveAnchor);
    }
    let coarse = resolution_degrees.to_radians();
    let (e1, e2) = pole.tangent_basis();
    let pc = pole.coords();

    let mut best = pole;
    let mut best_val = geodesic_objective_unchecked(config, &pole);
    let mut evaluated = 1u64;
    for (_, p, _) in config.active() {
        let v = geodesic_objective_unchecked(config, &p);
        evaluated += 1;
        if v < best_val {
            best_val = v;
            best = p;
        }
    }

    let n_polar = (std::f64::consts::FRAC_PI_2 / coarse).ceil() as usize;
    let n_az = (2.0 * std::f64::consts::PI / coarse).ceil() as usize;
    for a in 1..n_polar {
        let theta = a as f64 * coarse;
        let (st, ct) = theta.sin_cos();
        for b in 0..n_az {
            let phi = b as f64 * coarse;
            let (sp, cp) = phi.sin_cos();
            let v = [
                ct * pc[0] + st * (cp * e1[0] + sp * e2[0]),
                ct * pc[1] + st * (cp * e1[1] + sp * e2[1]),
                ct * pc[2] + st * (cp * e1[2] + sp * e2[2]),
            ];
            let p = SpherePoint::from_vector(v)?;
            let val = geodesic_objective_unchecked(config, &p);
            if val < best_val {
                best_val = val;
                best = p;
            }
        }
        evaluated += n_az as u64;
    }
    let mut level_values = vec![best_val];

    let fine = coarse / 16.0;
    let (f1, f2) = best.tangent_basis();
    let center = best;
    let half = 32i32;
    for a in -half..=half {
        for b in -half..=half {
            if a == 0 && b == 0 {
                continue;
            }
            let t1 = a as f64 * fine;
            let t2 = b as f64 * fine;
            let v = [
                t1 * f1[0] + t2 * f2[0],
                t1 * f1[1] + t2 * f2[1],
                t1 * f1[2] + t2 * f2[2],
            ];
            let p = center.exp_raw(v);
            let val = geodesic_objective_unchecked(config, &p);
            if val < best_val {
                best_val = val;
                best = p;
            }
        }
    }
    evaluated += ((2 * half + 1) * (2 * half + 1) - 1) as u64;
    level_values.push(best_val);

    Ok(OracleResult {
        argmin: best,
        min_value: best_val,
        resolution: fine,
        cells_evaluated: evaluated,
        level_values,
    })
}
