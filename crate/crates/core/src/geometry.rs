//! Points, weighted configurations, and the weighted distance-sum objective.
//!
//! Every sum over anchors runs in index order so results are bit-reproducible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Distances at or below this are treated as exact coincidence.
pub const COINCIDENCE_EPS: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A point in the plane or in space. Unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: Dim,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let dim = Dim::from_usize(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Point { coords: c, dim })
    }

    pub const fn xy(x: f64, y: f64) -> Self {
        Point {
            coords: [x, y, 0.0],
            dim: Dim::Two,
        }
    }

    pub const fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point {
            coords: [x, y, z],
            dim: Dim::Three,
        }
    }

    pub fn origin(dim: Dim) -> Self {
        Point {
            coords: [0.0; 3],
            dim,
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim.get()]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords().to_vec()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    /// Planar cross product `self.x * other.y - self.y * other.x`.
    pub fn cross2(&self, other: &Point) -> f64 {
        self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0]
    }

    pub fn cross3(&self, other: &Point) -> Point {
        let a = &self.coords;
        let b = &other.coords;
        Point::xyz(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    pub(crate) fn check_dim(&self, dim: Dim) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.get(),
                found: self.dim.get(),
            });
        }
        Ok(())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        Point {
            coords: [
                self.coords[0] + rhs.coords[0],
                self.coords[1] + rhs.coords[1],
                self.coords[2] + rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        Point {
            coords: [
                self.coords[0] - rhs.coords[0],
                self.coords[1] - rhs.coords[1],
                self.coords[2] - rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point {
            coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

/// A direction of Euclidean length one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector(Point);

impl UnitVector {
    /// Normalizes `v`, failing when it is (numerically) zero.
    pub fn normalize(v: Point) -> Result<Self> {
        let n = v.norm();
        if !(n > COINCIDENCE_EPS) {
            return Err(Error::CoincidentPoints);
        }
        Ok(UnitVector(v * (1.0 / n)))
    }

    pub fn as_point(&self) -> Point {
        self.0
    }

    pub fn coords(&self) -> &[f64] {
        self.0.coords()
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedPoint {
    pub position: Point,
    pub weight: f64,
}

impl WeightedPoint {
    pub fn new(position: Point, weight: f64) -> Self {
        WeightedPoint { position, weight }
    }
}

/// Anchors `A_i` with weights `b_i` in a fixed dimension.
///
/// Zero-weight anchors are kept (so indices stay stable) but never enter a sum.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    points: Vec<WeightedPoint>,
    dim: Dim,
}

impl Configuration {
    pub fn new(dim: Dim, points: Vec<WeightedPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (index, p) in points.iter().enumerate() {
            p.position.check_dim(dim)?;
            if !p.weight.is_finite() {
                return Err(Error::NonFinite("weight"));
            }
            if p.weight < 0.0 {
                return Err(Error::NegativeWeight {
                    index,
                    weight: p.weight,
                });
            }
        }
        Ok(Configuration { points, dim })
    }

    /// Builds a configuration from raw coordinate rows and weights.
    pub fn from_coords(coords: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} positions but {} weights",
                coords.len(),
                weights.len()
            )));
        }
        let first = coords.first().ok_or(Error::EmptyConfiguration)?;
        let dim = Dim::from_usize(first.len())?;
        let points = coords
            .iter()
            .zip(weights)
            .map(|(c, &w)| Point::new(c).map(|p| WeightedPoint::new(p, w)))
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(dim, points)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn position(&self, i: usize) -> Result<Point> {
        self.get(i).map(|p| p.position)
    }

    pub fn weight(&self, i: usize) -> Result<f64> {
        self.get(i).map(|p| p.weight)
    }

    fn get(&self, i: usize) -> Result<&WeightedPoint> {
        self.points.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.points.len(),
        })
    }

    /// Indices of anchors with positive weight, in order.
    pub fn active_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.weight > 0.0)
            .map(|(i, _)| i)
    }

    pub fn active(&self) -> impl Iterator<Item = (usize, &WeightedPoint)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.weight > 0.0)
    }

    pub fn active_count(&self) -> usize {
        self.active_indices().count()
    }

    /// Sum of all weights.
    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// Largest pairwise distance between active anchors (all anchors if none is active).
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = if self.active_count() > 0 {
            self.active().map(|(_, p)| p.position).collect()
        } else {
            self.points.iter().map(|p| p.position).collect()
        };
        let mut d: f64 = 0.0;
        for (a, pa) in pts.iter().enumerate() {
            for pb in &pts[a + 1..] {
                d = d.max(pa.distance(pb));
            }
        }
        d
    }

    /// Diameter, or 1 when every anchor sits at the same spot.
    pub fn length_scale(&self) -> f64 {
        let d = self.diameter();
        if d > 0.0 {
            d
        } else {
            1.0
        }
    }

    pub fn has_distinct_positions(&self) -> bool {
        for (a, pa) in self.points.iter().enumerate() {
            for pb in &self.points[a + 1..] {
                if pa.position == pb.position {
                    return false;
                }
            }
        }
        true
    }

    /// Weighted centroid of the active anchors.
    pub fn weighted_centroid(&self) -> Result<Point> {
        let total: f64 = self.active().map(|(_, p)| p.weight).sum();
        if !(total > 0.0) {
            return Err(Error::NoActiveAnchor);
        }
        let mut acc = Point::origin(self.dim);
        for (_, p) in self.active() {
            acc = acc + p.position * p.weight;
        }
        Ok(acc * (1.0 / total))
    }

    pub fn degeneracy(&self) -> Degeneracy {
        let pts: Vec<Point> = self.active().map(|(_, p)| p.position).collect();
        degeneracy_of(&pts, self.length_scale())
    }

    /// Active anchors with coincident positions merged by summing weights.
    pub fn merge_active(&self) -> MergedAnchors {
        let mut points: Vec<WeightedPoint> = Vec::new();
        let mut origin: Vec<usize> = Vec::new();
        for (i, p) in self.active() {
            match points.iter().position(|q| q.position == p.position) {
                Some(k) => points[k].weight += p.weight,
                None => {
                    points.push(*p);
                    origin.push(i);
                }
            }
        }
        let merged = points.len() < self.active_count();
        MergedAnchors {
            config: Configuration {
                points,
                dim: self.dim,
            },
            origin,
            merged,
        }
    }

    /// Applies `f` to every anchor position.
    pub fn map_positions(&self, f: impl Fn(Point) -> Point) -> Result<Configuration> {
        let points = self
            .points
            .iter()
            .map(|p| WeightedPoint::new(f(p.position), p.weight))
            .collect();
        Configuration::new(self.dim, points)
    }

    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Result<Configuration> {
        let points = self
            .points
            .iter()
            .map(|p| WeightedPoint::new(p.position, f(p.weight)))
            .collect();
        Configuration::new(self.dim, points)
    }
}

/// Result of [`Configuration::merge_active`].
#[derive(Clone, Debug)]
pub struct MergedAnchors {
    /// Distinct active positions with summed weights.
    pub config: Configuration,
    /// For each merged anchor, the first original index at that position.
    pub origin: Vec<usize>,
    /// Whether any duplicates were folded together.
    pub merged: bool,
}

/// Affine degeneracy of a point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    None,
    /// Every point on one line (includes fewer than three distinct points).
    Collinear,
    /// Three-dimensional set lying in one plane.
    Coplanar,
}

fn degeneracy_of(pts: &[Point], scale: f64) -> Degeneracy {
    let tol = 1e-12 * scale;
    let Some(&a) = pts.first() else {
        return Degeneracy::Collinear;
    };
    let Some(&b) = pts
        .iter()
        .max_by(|p, q| a.distance(p).total_cmp(&a.distance(q)))
    else {
        return Degeneracy::Collinear;
    };
    let Ok(axis) = UnitVector::normalize(b - a) else {
        return Degeneracy::Collinear;
    };
    let axis = axis.as_point();
    let off_axis = |p: &Point| {
        let v = *p - a;
        (v - axis * v.dot(&axis)).norm()
    };
    let Some(&c) = pts
        .iter()
        .max_by(|p, q| off_axis(p).total_cmp(&off_axis(q)))
    else {
        return Degeneracy::Collinear;
    };
    if off_axis(&c) <= tol {
        return Degeneracy::Collinear;
    }
    if a.dim() == Dim::Two {
        return Degeneracy::None;
    }
    let normal = match UnitVector::normalize((b - a).cross3(&(c - a))) {
        Ok(n) => n.as_point(),
        Err(_) => return Degeneracy::Collinear,
    };
    if pts.iter().all(|p| (*p - a).dot(&normal).abs() <= tol) {
        Degeneracy::Coplanar
    } else {
        Degeneracy::None
    }
}

/// The unit vector `u(from, to)` pointing from `from` toward `to`.
pub fn unit_vector(from: &Point, to: &Point) -> Result<UnitVector> {
    to.check_dim(from.dim())?;
    UnitVector::normalize(*to - *from)
}

/// Weighted sum of Euclidean distances from `x` to the anchors.
pub fn objective(config: &Configuration, x: &Point) -> Result<f64> {
    x.check_dim(config.dim())?;
    Ok(objective_unchecked(config, x))
}

pub(crate) fn objective_unchecked(config: &Configuration, x: &Point) -> f64 {
    config
        .active()
        .map(|(_, p)| p.weight * x.distance(&p.position))
        .sum()
}

/// Unsigned angle at vertex `x` between the rays toward `a` and `b`.
pub fn angle(x: &Point, a: &Point, b: &Point) -> Result<f64> {
    let ua = unit_vector(x, a)?;
    let ub = unit_vector(x, b)?;
    Ok(ua.dot(&ub).clamp(-1.0, 1.0).acos())
}

/// Errors with `AtAnchor` when `x` sits on an active anchor.
pub(crate) fn check_off_anchors(config: &Configuration, x: &Point) -> Result<()> {
    x.check_dim(config.dim())?;
    for (i, p) in config.active() {
        if x.distance(&p.position) <= COINCIDENCE_EPS {
            return Err(Error::AtAnchor(i));
        }
    }
    Ok(())
}

/// Unit vectors from `x` toward each active anchor, paired with index and weight.
pub(crate) fn active_directions(
    config: &Configuration,
    x: &Point,
) -> Result<Vec<(usize, f64, UnitVector)>> {
    check_off_anchors(config, x)?;
    config
        .active()
        .map(|(i, p)| {
            UnitVector::normalize(p.position - *x)
                .map(|u| (i, p.weight, u))
                .map_err(|_| Error::AtAnchor(i))
        })
        .collect()
}

/// Gradient of the objective, `sum_i b_i (x - A_i) / |x - A_i|`.
pub fn gradient(config: &Configuration, x: &Point) -> Result<Point> {
    let mut g = Point::origin(config.dim());
    for (_, w, u) in active_directions(config, x)? {
        g = g - u.as_point() * w;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn equilateral() -> Configuration {
        Configuration::from_coords(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]],
            &[1.0, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn unit_vector_examples() {
        let u = unit_vector(&Point::xy(0.0, 0.0), &Point::xy(1.0, 0.0)).unwrap();
        assert_eq!(u.coords(), &[1.0, 0.0]);
        let u = unit_vector(&Point::xyz(0.0, 0.0, 0.0), &Point::xyz(0.0, 3.0, 4.0)).unwrap();
        assert_abs_diff_eq!(u.coords()[1], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(u.coords()[2], 0.8, epsilon = 1e-15);
        assert_eq!(
            unit_vector(&Point::xy(1.0, 1.0), &Point::xy(1.0, 1.0)),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn objective_examples() {
        let single = Configuration::from_coords(&[vec![0.0, 0.0]], &[2.0]).unwrap();
        assert_eq!(objective(&single, &Point::xy(3.0, 4.0)).unwrap(), 10.0);
        assert_eq!(objective(&single, &Point::xy(0.0, 0.0)).unwrap(), 0.0);
        let c = Point::xy(0.5, 3f64.sqrt() / 6.0);
        assert_abs_diff_eq!(
            objective(&equilateral(), &c).unwrap(),
            3f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn objective_rejects_wrong_dimension() {
        assert!(matches!(
            objective(&equilateral(), &Point::xyz(0.0, 0.0, 0.0)),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn angle_examples() {
        let o = Point::xy(0.0, 0.0);
        assert_abs_diff_eq!(
            angle(&o, &Point::xy(1.0, 0.0), &Point::xy(0.0, 1.0)).unwrap(),
            PI / 2.0,
            epsilon = 1e-15
        );
        assert_eq!(
            angle(&o, &Point::xy(1.0, 0.0), &Point::xy(-2.0, 0.0)).unwrap(),
            PI
        );
        let c = Point::xy(0.5, 3f64.sqrt() / 6.0);
        let tri = equilateral();
        let a = tri.position(0).unwrap();
        let b = tri.position(2).unwrap();
        assert_abs_diff_eq!(angle(&c, &a, &b).unwrap(), 2.0 * PI / 3.0, epsilon = 1e-12);
        assert_eq!(angle(&o, &o, &b), Err(Error::CoincidentPoints));
    }

    #[test]
    fn gradient_examples() {
        let c = Point::xy(0.5, 3f64.sqrt() / 6.0);
        let g = gradient(&equilateral(), &c).unwrap();
        assert!(g.norm() <= 1e-12);
        let single = Configuration::from_coords(&[vec![0.0, 0.0]], &[3.0]).unwrap();
        let g = gradient(&single, &Point::xy(0.0, 5.0)).unwrap();
        assert_eq!(g.coords(), &[0.0, 3.0]);
        assert_eq!(
            gradient(&single, &Point::xy(0.0, 0.0)),
            Err(Error::AtAnchor(0))
        );
    }

    #[test]
    fn zero_weight_anchor_is_ignored() {
        let cfg =
            Configuration::from_coords(&[vec![0.0, 0.0], vec![5.0, 5.0]], &[1.0, 0.0]).unwrap();
        assert_eq!(cfg.active_count(), 1);
        // sitting on an inactive anchor is fine
        assert!(gradient(&cfg, &Point::xy(5.0, 5.0)).is_ok());
        assert_eq!(cfg.diameter(), 0.0);
        assert_eq!(cfg.length_scale(), 1.0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Configuration::from_coords(&[], &[]),
            Err(Error::EmptyConfiguration)
        );
        assert!(matches!(
            Configuration::from_coords(&[vec![0.0, 0.0]], &[-1.0]),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
        assert!(matches!(
            Configuration::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0, 0.0]], &[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            Configuration::from_coords(&[vec![0.0; 4]], &[1.0]),
            Err(Error::UnsupportedDimension(4))
        );
        assert_eq!(
            Configuration::from_coords(&[vec![f64::NAN, 0.0]], &[1.0]),
            Err(Error::NonFinite("point coordinates"))
        );
    }

    #[test]
    fn merge_sums_duplicate_weights() {
        let cfg = Configuration::from_coords(
            &[
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 0.0],
                vec![2.0, 2.0],
            ],
            &[1.0, 2.0, 0.5, 0.0],
        )
        .unwrap();
        assert!(!cfg.has_distinct_positions());
        let m = cfg.merge_active();
        assert!(m.merged);
        assert_eq!(m.origin, vec![0, 1]);
        assert_eq!(m.config.weight(0).unwrap(), 1.5);
        let x = Point::xy(0.3, 0.7);
        assert_abs_diff_eq!(
            objective(&cfg, &x).unwrap(),
            objective(&m.config, &x).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn degeneracy_flags() {
        let line = Configuration::from_coords(
            &[vec![0.0, 0.0], vec![1.0, 1.0], vec![3.0, 3.0]],
            &[1.0, 1.0, 1.0],
        )
        .unwrap();
        assert_eq!(line.degeneracy(), Degeneracy::Collinear);
        assert_eq!(equilateral().degeneracy(), Degeneracy::None);
        let flat = Configuration::from_coords(
            &[
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![2.0, 3.0, 1.0],
            ],
            &[1.0; 4],
        )
        .unwrap();
        assert_eq!(flat.degeneracy(), Degeneracy::Coplanar);
    }
}
