//! Virtual-work certificates for a candidate knot point `x`.
//!
//! Displacing `x` toward anchor `A_j` by `delta` changes the potential of the
//! hanging weights by `delta * sum_i b_i cos(angle A_j x A_i)` to first order.
//! Equilibrium means this vanishes for every direction, which in the plane
//! splits into a cosine sum and a signed sine sum per anchor direction, and in
//! space into three component sums in a spherical frame built from two anchor
//! directions. Each family is an orthogonal decomposition of the balancing
//! residual `sum_i b_i u(x, A_i)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{active_directions, unit_vector, Configuration, Dim, Point, UnitVector};

/// Default verification tolerance, relative to the total weight.
pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-8;

/// Frames whose two defining rays are closer to parallel than this are rejected.
pub const FRAME_DEGENERACY_EPS: f64 = 1e-10;

/// `sum_i b_i u(x, A_i)` over the active anchors. Equals minus the gradient.
pub fn balancing_residual(config: &Configuration, x: &Point) -> Result<Point> {
    let mut r = Point::origin(config.dim());
    for (_, w, u) in active_directions(config, x)? {
        r = r + u.as_point() * w;
    }
    Ok(r)
}

fn direction(config: &Configuration, x: &Point, j: usize) -> Result<UnitVector> {
    let a = config.position(j)?;
    unit_vector(x, &a).map_err(|e| match e {
        Error::CoincidentPoints => Error::AtAnchor(j),
        other => other,
    })
}

fn require_dim(config: &Configuration, dim: Dim) -> Result<()> {
    if config.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.get(),
            found: config.dim().get(),
        });
    }
    Ok(())
}

/// The coefficient `c_{i,j}` of a displacement toward `A_j` on string `i`.
///
/// Positive when the foot of the displaced point on line `x A_i` lies on the
/// segment toward `A_i`, negative when it falls on the opposite ray. Both cases
/// reduce to `u(x, A_i) . u(x, A_j)`.
pub fn signed_coefficient_2d(config: &Configuration, x: &Point, i: usize, j: usize) -> Result<f64> {
    require_dim(config, Dim::Two)?;
    x.check_dim(Dim::Two)?;
    let ui = direction(config, x, i)?;
    let uj = direction(config, x, j)?;
    Ok(ui.dot(&uj).clamp(-1.0, 1.0))
}

/// Sine of the counterclockwise angle from `u(x, A_j)` to `u(x, A_i)`.
pub fn signed_sine_2d(config: &Configuration, x: &Point, i: usize, j: usize) -> Result<f64> {
    require_dim(config, Dim::Two)?;
    x.check_dim(Dim::Two)?;
    let ui = direction(config, x, i)?;
    let uj = direction(config, x, j)?;
    Ok(uj.as_point().cross2(&ui.as_point()))
}

/// `sum_i b_i cos(angle A_j x A_i)`: the rate at which the weights descend
/// when `x` moves toward `A_j`.
pub fn cos_sum_2d(config: &Configuration, x: &Point, j: usize) -> Result<f64> {
    require_dim(config, Dim::Two)?;
    let dirs = active_directions(config, x)?;
    let uj = direction(config, x, j)?;
    Ok(dirs
        .iter()
        .map(|(_, w, ui)| w * ui.dot(&uj).clamp(-1.0, 1.0))
        .sum())
}

/// `sum_i b_i sin(angle from u(x,A_j) to u(x,A_i))`, counterclockwise positive.
pub fn sin_sum_2d(config: &Configuration, x: &Point, j: usize) -> Result<f64> {
    require_dim(config, Dim::Two)?;
    let dirs = active_directions(config, x)?;
    let uj = direction(config, x, j)?.as_point();
    Ok(dirs
        .iter()
        .map(|(_, w, ui)| w * uj.cross2(&ui.as_point()))
        .sum())
}

/// Orthonormal frame at `x`: first axis toward `A_j`, second in the plane of
/// `A_j`, `x`, `A_k` on the side of `A_k`, third completing a right-handed basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalFrame {
    pub j: usize,
    pub k: usize,
    pub axes: [Point; 3],
}

impl SphericalFrame {
    pub fn coordinates(&self, v: &Point) -> [f64; 3] {
        [
            v.dot(&self.axes[0]),
            v.dot(&self.axes[1]),
            v.dot(&self.axes[2]),
        ]
    }
}

/// Elevation `alpha` above the `(j, k)` plane and azimuth `omega` from the `j` axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalFrameAngles {
    pub index: usize,
    /// In `[-pi/2, pi/2]`.
    pub alpha: f64,
    /// In `(-pi, pi]`.
    pub omega: f64,
}

impl SphericalFrameAngles {
    /// `(cos a cos w, cos a sin w, sin a)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (sa, ca) = self.alpha.sin_cos();
        let (sw, cw) = self.omega.sin_cos();
        [ca * cw, ca * sw, sa]
    }
}

pub fn spherical_frame(
    config: &Configuration,
    x: &Point,
    j: usize,
    k: usize,
) -> Result<SphericalFrame> {
    require_dim(config, Dim::Three)?;
    x.check_dim(Dim::Three)?;
    let e1 = direction(config, x, j)?.as_point();
    let uk = direction(config, x, k)?.as_point();
    let w = uk - e1 * uk.dot(&e1);
    if w.norm() < FRAME_DEGENERACY_EPS {
        return Err(Error::DegenerateFrame { j, k });
    }
    let e2 = w * (1.0 / w.norm());
    let e3 = e1.cross3(&e2);
    Ok(SphericalFrame {
        j,
        k,
        axes: [e1, e2, e3],
    })
}

fn frame_angles(frame: &SphericalFrame, index: usize, u: &UnitVector) -> SphericalFrameAngles {
    let [c1, c2, c3] = frame.coordinates(&u.as_point());
    let alpha = c3.atan2(c1.hypot(c2));
    let mut omega = c2.atan2(c1);
    if omega <= -PI {
        omega = PI;
    }
    SphericalFrameAngles {
        index,
        alpha,
        omega,
    }
}

/// Spherical angles of every active anchor direction in the `(j, k)` frame.
pub fn spherical_frame_3d(
    config: &Configuration,
    x: &Point,
    j: usize,
    k: usize,
) -> Result<Vec<SphericalFrameAngles>> {
    let dirs = active_directions(config, x)?;
    let frame = spherical_frame(config, x, j, k)?;
    Ok(dirs
        .iter()
        .map(|(i, _, u)| frame_angles(&frame, *i, u))
        .collect())
}

/// `(sum b cos a cos w, sum b cos a sin w, sum b sin a)` in the `(j, k)` frame.
pub fn component_sums_3d(
    config: &Configuration,
    x: &Point,
    j: usize,
    k: usize,
) -> Result<[f64; 3]> {
    let angles = spherical_frame_3d(config, x, j, k)?;
    let mut s = [0.0; 3];
    for a in &angles {
        let w = config.weight(a.index)?;
        let (sa, ca) = a.alpha.sin_cos();
        let (sw, cw) = a.omega.sin_cos();
        s[0] += w * ca * cw;
        s[1] += w * ca * sw;
        s[2] += w * sa;
    }
    Ok(s)
}

/// Smallest active `k != j` giving a nondegenerate frame with first axis `j`.
pub fn frame_partner(config: &Configuration, x: &Point, j: usize) -> Result<Option<usize>> {
    for k in config.active_indices() {
        if k == j {
            continue;
        }
        match spherical_frame(config, x, j, k) {
            Ok(_) => return Ok(Some(k)),
            Err(Error::DegenerateFrame { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// First-order work done by the weights when `x` moves `delta` toward `A_j`.
/// Positive work means the weights descend and the objective decreases.
pub fn virtual_work(config: &Configuration, x: &Point, j: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "displacement must be positive, got {delta}"
        )));
    }
    let limit = 1e-3 * config.length_scale();
    if delta > limit {
        return Err(Error::DeltaTooLarge { delta, limit });
    }
    let rate = match config.dim() {
        Dim::Two => cos_sum_2d(config, x, j)?,
        Dim::Three => match frame_partner(config, x, j)? {
            Some(k) => component_sums_3d(config, x, j, k)?[0],
            // every ray parallel to the j axis: s1 is the plain projection
            None => {
                let uj = direction(config, x, j)?;
                active_directions(config, x)?
                    .iter()
                    .map(|(_, w, u)| w * u.dot(&uj))
                    .sum()
            }
        },
    };
    Ok(delta * rate)
}

/// Certificate sums for one anchor direction `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSums {
    pub index: usize,
    /// Projection of the residual on `u(x, A_j)`.
    pub cos_sum: f64,
    /// Planar only: projection on `u(x, A_j)` turned a quarter counterclockwise.
    pub sin_sum: Option<f64>,
    /// Spatial only: partner anchor of the frame used for `triple`.
    pub frame_partner: Option<usize>,
    /// Spatial only: the three component sums in the `(j, partner)` frame.
    pub triple: Option<[f64; 3]>,
    /// Work for a displacement of `probe_delta` toward `A_j`.
    pub virtual_work: f64,
}

impl DirectionSums {
    /// Euclidean norm of this direction's component decomposition.
    pub fn component_norm(&self) -> f64 {
        match (self.sin_sum, self.triple) {
            (Some(s), _) => self.cos_sum.hypot(s),
            (None, Some([a, b, c])) => (a * a + b * b + c * c).sqrt(),
            (None, None) => self.cos_sum.abs(),
        }
    }

    fn components(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.cos_sum)
            .chain(self.sin_sum)
            .chain(self.triple.into_iter().flatten())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub point: Point,
    pub residual: Point,
    pub residual_norm: f64,
    pub per_direction: Vec<DirectionSums>,
    /// First nondegenerate `(j, k)` frame (3D only).
    pub canonical_frame: Option<(usize, usize)>,
    pub probe_delta: f64,
    pub tolerance: f64,
    pub total_weight: f64,
    pub passed: bool,
}

impl BalanceReport {
    /// Residual test: `|sum b_i u_i| <= eps * sum b`.
    pub fn residual_within(&self, eps: f64) -> bool {
        self.residual_norm <= eps * self.total_weight
    }

    /// Component test: every direction's decomposition has norm `<= eps * sum b`.
    pub fn components_within(&self, eps: f64) -> bool {
        self.per_direction
            .iter()
            .all(|d| d.component_norm() <= eps * self.total_weight)
    }

    /// Largest magnitude of any single reported component sum.
    pub fn max_component(&self) -> f64 {
        self.per_direction
            .iter()
            .flat_map(|d| d.components())
            .fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Evaluates every certificate at `x` and decides pass/fail at `tolerance`
/// (relative to the total weight).
pub fn verify(config: &Configuration, x: &Point, tolerance: f64) -> Result<BalanceReport> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let residual = balancing_residual(config, x)?;
    let residual_norm = residual.norm();
    let total_weight = config.total_weight();
    let probe_delta = 1e-6 * config.length_scale();

    let mut per_direction = Vec::new();
    let mut canonical_frame = None;
    for j in config.active_indices() {
        let entry = match config.dim() {
            Dim::Two => DirectionSums {
                index: j,
                cos_sum: cos_sum_2d(config, x, j)?,
                sin_sum: Some(sin_sum_2d(config, x, j)?),
                frame_partner: None,
                triple: None,
                virtual_work: virtual_work(config, x, j, probe_delta)?,
            },
            Dim::Three => {
                let partner = frame_partner(config, x, j)?;
                let triple = partner
                    .map(|k| component_sums_3d(config, x, j, k))
                    .transpose()?;
                if canonical_frame.is_none() {
                    canonical_frame = partner.map(|k| (j, k));
                }
                let cos_sum = match triple {
                    Some(t) => t[0],
                    None => residual.dot(&direction(config, x, j)?.as_point()),
                };
                DirectionSums {
                    index: j,
                    cos_sum,
                    sin_sum: None,
                    frame_partner: partner,
                    triple,
                    virtual_work: virtual_work(config, x, j, probe_delta)?,
                }
            }
        };
        per_direction.push(entry);
    }

    let bound = tolerance * total_weight;
    let passed = residual_norm <= bound
        && per_direction.iter().all(|d| {
            d.components().all(|c| c.abs() <= bound) && d.virtual_work.abs() <= bound * probe_delta
        });

    Ok(BalanceReport {
        point: *x,
        residual,
        residual_norm,
        per_direction,
        canonical_frame,
        probe_delta,
        tolerance,
        total_weight,
        passed,
    })
}
