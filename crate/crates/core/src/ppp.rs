//! Homogeneous Poisson point processes on a rectangular (optionally
//! toroidal) window, and the nearest-neighbour distance law.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::check_w;
use crate::shapes::Point2;

/// Axis-aligned window [0, width) × [0, height).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub width: f64,
    pub height: f64,
    /// Toroidal wraparound in both directions.
    pub wrap: bool,
}

impl Window {
    pub fn new(width: f64, height: f64, wrap: bool) -> Result<Self> {
        if !(width.is_finite() && width > 0.0 && height.is_finite() && height > 0.0) {
            return Err(Error::invalid("window", format!("{width} x {height} must be positive")));
        }
        Ok(Self { width, height, wrap })
    }

    pub fn square(side: f64, wrap: bool) -> Result<Self> {
        Self::new(side, side, wrap)
    }

    /// Toroidal square of side 10/√min(λ_b, λ_v).
    pub fn default_for(lambda_b: f64, lambda_v: f64) -> Result<Self> {
        let lambda = lambda_b.min(lambda_v);
        if !(lambda > 0.0) {
            return Err(Error::invalid("intensity", "window sizing needs positive intensities"));
        }
        Self::square(10.0 / lambda.sqrt(), true)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * self.width, 0.5 * self.height)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= 0.0 && p.x < self.width && p.y >= 0.0 && p.y < self.height
    }

    /// Maps a point into the window (toroidal windows only).
    pub fn wrap_point(&self, p: Point2) -> Point2 {
        if !self.wrap {
            return p;
        }
        let wrap = |v: f64, len: f64| {
            let r = v.rem_euclid(len);
            if r >= len {
                0.0
            } else {
                r
            }
        };
        Point2::new(wrap(p.x, self.width), wrap(p.y, self.height))
    }

    /// Displacement `to - from`, taking the shortest image on a torus.
    pub fn displacement(&self, from: Point2, to: Point2) -> Point2 {
        let d = to - from;
        if !self.wrap {
            return d;
        }
        let fold = |v: f64, len: f64| v - len * (v / len).round();
        Point2::new(fold(d.x, self.width), fold(d.y, self.height))
    }

    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        self.displacement(a, b).norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointPattern {
    pub points: Vec<Point2>,
    /// Intensity the pattern was drawn with, per m².
    pub intensity: f64,
    pub window: Window,
}

impl PointPattern {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Poisson(λ|A|) points, i.i.d. uniform over the window.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, window: Window, rng: &mut R) -> Result<PointPattern> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(Error::invalid("intensity", format!("{intensity} must be >= 0")));
    }
    let mean = intensity * window.area();
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean).map_err(|e| Error::invalid("intensity", e.to_string()))?;
        let n: f64 = poisson.sample(rng);
        n as usize
    } else {
        0
    };
    let points = (0..count)
        .map(|_| {
            Point2::new(
                rng.random::<f64>() * window.width,
                rng.random::<f64>() * window.height,
            )
        })
        .collect();
    Ok(PointPattern {
        points,
        intensity,
        window,
    })
}

/// Distance from `origin` to the closest point of the pattern, by
/// exhaustive search. Uses the toroidal metric when the window wraps.
pub fn nearest_distance(origin: Point2, pattern: &PointPattern) -> Result<f64> {
    pattern
        .points
        .iter()
        .map(|&p| pattern.window.distance(origin, p))
        .min_by(f64::total_cmp)
        .ok_or(Error::EmptyPattern)
}

/// Mean distance to the nearest point of a PPP, 1/(2√λ).
pub fn mean_nearest_distance(intensity: f64) -> f64 {
    0.5 / intensity.sqrt()
}

/// P(nearest distance ≤ r) = 1 - exp(-πλr²).
pub fn nearest_distance_cdf(r: f64, intensity: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    -(-PI * intensity * r * r).exp_m1()
}

/// E[R_c] = √W/(1 - W) · 1/(2√λ_b): the circle radius of the unit-ratio
/// approximation averaged over the BS–DRV nearest distance.
pub fn expected_rc(w: f64, lambda_b: f64) -> Result<f64> {
    check_w(w)?;
    if !(lambda_b.is_finite() && lambda_b > 0.0) {
        return Err(Error::invalid("lambda_b", format!("{lambda_b} must be > 0")));
    }
    Ok(rc_scale(w) * mean_nearest_distance(lambda_b))
}

/// √W/(1 - W): R_c per metre of BS–DRV distance.
pub fn rc_scale(w: f64) -> f64 {
    w.sqrt() / (1.0 - w)
}

/// Density of R_c = k d with d Rayleigh-distributed nearest distance and
/// k = √W/(1 - W):  f(r) = (2πλ_b r / k²) exp(-πλ_b r²/k²).
pub fn rc_pdf(r: f64, w: f64, lambda_b: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    let k = rc_scale(w);
    let u = r / k;
    2.0 * PI * lambda_b * u * (-PI * lambda_b * u * u).exp() / k
}

pub fn rc_cdf(r: f64, w: f64, lambda_b: f64) -> f64 {
    nearest_distance_cdf(r / rc_scale(w), lambda_b)
}

/// Uniform-grid spatial index for repeated nearest-point queries.
#[derive(Debug, Clone)]
pub struct NearestIndex {
    window: Window,
    nx: usize,
    ny: usize,
    cell_w: f64,
    cell_h: f64,
    /// CSR offsets into `sorted`, one slot per cell plus a sentinel.
    offsets: Vec<usize>,
    sorted: Vec<Point2>,
}

impl NearestIndex {
    /// Builds an index with roughly one point per cell.
    pub fn new(pattern: &PointPattern) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let window = pattern.window;
        let target_cells = pattern.len().max(1) as f64;
        let aspect = window.width / window.height;
        let nx = ((target_cells * aspect).sqrt().ceil() as usize).clamp(1, 4096);
        let ny = ((target_cells / aspect).sqrt().ceil() as usize).clamp(1, 4096);
        let cell_w = window.width / nx as f64;
        let cell_h = window.height / ny as f64;

        let cell_of = |p: Point2| {
            let p = window.wrap_point(p);
            let cx = ((p.x / cell_w) as usize).min(nx - 1);
            let cy = ((p.y / cell_h) as usize).min(ny - 1);
            cy * nx + cx
        };
        let mut counts = vec![0usize; nx * ny + 1];
        for &p in &pattern.points {
            counts[cell_of(p) + 1] += 1;
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut sorted = vec![Point2::ORIGIN; pattern.len()];
        for &p in &pattern.points {
            let c = cell_of(p);
            sorted[cursor[c]] = p;
            cursor[c] += 1;
        }
        Ok(Self {
            window,
            nx,
            ny,
            cell_w,
            cell_h,
            offsets,
            sorted,
        })
    }

    /// Distance to the nearest indexed point.
    pub fn nearest_distance(&self, origin: Point2) -> f64 {
        let origin = self.window.wrap_point(origin);
        let cx = ((origin.x / self.cell_w).floor() as isize).clamp(0, self.nx as isize - 1);
        let cy = ((origin.y / self.cell_h).floor() as isize).clamp(0, self.ny as isize - 1);
        let step = self.cell_w.min(self.cell_h);
        let max_ring = if self.window.wrap {
            self.nx.max(self.ny) / 2 + 1
        } else {
            self.nx.max(self.ny)
        } as isize;

        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            for dy in -ring..=ring {
                let edge_row = dy.abs() == ring;
                let dxs: &mut dyn Iterator<Item = isize> = if edge_row {
                    &mut (-ring..=ring)
                } else {
                    &mut [-ring, ring].into_iter()
                };
                for dx in dxs {
                    if let Some(cell) = self.cell_index(cx + dx, cy + dy) {
                        for &p in &self.sorted[self.offsets[cell]..self.offsets[cell + 1]] {
                            let d = self.window.distance(origin, p);
                            if d < best {
                                best = d;
                            }
                        }
                    }
                }
            }
            // every unvisited cell is at least `ring` whole cells away
            let reach = ring as f64 * step;
            if best <= reach {
                break;
            }
        }
        best
    }

    fn cell_index(&self, cx: isize, cy: isize) -> Option<usize> {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let (cx, cy) = if self.window.wrap {
            (cx.rem_euclid(nx), cy.rem_euclid(ny))
        } else if cx < 0 || cy < 0 || cx >= nx || cy >= ny {
            return None;
        } else {
            (cx, cy)
        };
        Some(cy as usize * self.nx + cx as usize)
    }
}
