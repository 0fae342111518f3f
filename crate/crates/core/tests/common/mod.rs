#![allow(dead_code)]

use torricelli_core::{objective, Configuration, Dim, Point, SplitMix64};

/// Central difference of the objective along `dir` (unit) with step `h`.
pub fn central_directional(cfg: &Configuration, x: &Point, dir: &Point, h: f64) -> f64 {
    let plus = objective(cfg, &(*x + *dir * h)).unwrap();
    let minus = objective(cfg, &(*x - *dir * h)).unwrap();
    (plus - minus) / (2.0 * h)
}

/// Central-difference gradient along the coordinate axes.
pub fn fd_gradient(cfg: &Configuration, x: &Point, h: f64) -> Point {
    let d = cfg.dim().get();
    let mut g = vec![0.0; d];
    for (a, ga) in g.iter_mut().enumerate() {
        let mut e = vec![0.0; d];
        e[a] = 1.0;
        *ga = central_directional(cfg, x, &Point::new(&e).unwrap(), h);
    }
    Point::new(&g).unwrap()
}

/// A point inside the padded bounding box at least `margin * diameter` from
/// every anchor.
pub fn smooth_point(cfg: &Configuration, rng: &mut SplitMix64, margin: f64) -> Point {
    let diam = cfg.diameter();
    loop {
        let coords: Vec<f64> = (0..cfg.dim().get())
            .map(|_| rng.uniform(-1.2, 1.2))
            .collect();
        let x = Point::new(&coords).unwrap();
        if cfg
            .points()
            .iter()
            .all(|p| p.position.distance(&x) >= margin * diam)
        {
            return x;
        }
    }
}

/// Random rotation matrix (rows), via Gram-Schmidt on random vectors.
pub fn random_rotation(dim: Dim, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let d = dim.get();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    while rows.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.uniform(-1.0, 1.0)).collect();
        for r in &rows {
            let ip: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            for (vi, ri) in v.iter_mut().zip(r) {
                *vi -= ip * ri;
            }
        }
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-3 {
            rows.push(v.iter().map(|a| a / n).collect());
        }
    }
    // force det = +1
    if d == 3 {
        let (a, b) = (&rows[0], &rows[1]);
        rows[2] = vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
    } else if rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0] < 0.0 {
        rows[1] = rows[1].iter().map(|v| -v).collect();
    }
    rows
}

pub fn apply(rot: &[Vec<f64>], p: &Point) -> Point {
    let c = p.coords();
    let out: Vec<f64> = rot
        .iter()
        .map(|row| row.iter().zip(c).map(|(r, x)| r * x).sum())
        .collect();
    Point::new(&out).unwrap()
}

pub fn equilateral() -> Configuration {
    Configuration::from_coords(
        &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]],
        &[1.0; 3],
    )
    .unwrap()
}

pub fn mixed_dim(seed: u64) -> Dim {
    if seed.is_multiple_of(2) {
        Dim::Two
    } else {
        Dim::Three
    }
}
