//! Total-field intensity in the plane spanned by the cavity (`x`) and pump
//! (`y`) axes, `E ∝ g₀ cos(kx) α + Ω e^{iky}`, and its zeros.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{cos_turns, sin_turns, ModelParams, Site};

/// Refined points with `|E|² ≤ ZERO_ACCEPT · peak` are reported as zeros.
pub const ZERO_ACCEPT: f64 = 1e-12;

const REFINE_ITERATIONS: usize = 200;

/// Inclusive, uniformly spaced sampling of a rectangle (coordinates in units of λ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl ZeroGrid {
    pub fn square(min: f64, max: f64, n: usize) -> Self {
        Self {
            x_min: min,
            x_max: max,
            nx: n,
            y_min: min,
            y_max: max,
            ny: n,
        }
    }

    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![min],
            _ => (0..n)
                .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        Self::axis(self.y_min, self.y_max, self.ny)
    }

    fn spacing(&self) -> f64 {
        let dx = if self.nx > 1 {
            (self.x_max - self.x_min) / (self.nx - 1) as f64
        } else {
            0.0
        };
        let dy = if self.ny > 1 {
            (self.y_max - self.y_min) / (self.ny - 1) as f64
        } else {
            0.0
        };
        dx.max(dy)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldZeroMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `intensity[i][j]` at `(xs[i], ys[j])`.
    pub intensity: Vec<Vec<f64>>,
    pub peak: f64,
    /// Sorted by `x`, then `y`.
    pub zeros: Vec<Site>,
    pub alpha: Complex64,
}

impl FieldZeroMap {
    pub fn intensity_at(&self, params: &ModelParams, site: Site) -> f64 {
        total_field(params, self.alpha, site).norm_sqr()
    }
}

pub fn total_field(params: &ModelParams, alpha: Complex64, site: Site) -> Complex64 {
    let t = site.x / params.lambda;
    params.g0 * cos_turns(t) * alpha + params.pump_at(site.y)
}

/// Field amplitude that cancels the pump at the antinodes, `−Ω/g₀`.
pub fn cancelling_amplitude(params: &ModelParams) -> Complex64 {
    if params.g0 == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(-params.omega / params.g0, 0.0)
    }
}

/// Rows `∂(Re E, Im E)/∂(x, y)`.
fn field_jacobian(params: &ModelParams, alpha: Complex64, site: Site) -> Matrix2<f64> {
    let k = params.wavenumber();
    let dx = params.coupling_gradient_at(site.x) * alpha;
    let t = site.y / params.lambda;
    let dy = Complex64::new(0.0, k) * params.omega * Complex64::new(cos_turns(t), sin_turns(t));
    Matrix2::new(dx.re, dy.re, dx.im, dy.im)
}

/// Gauss-Newton on `(Re E, Im E) = 0` with a pseudo-inverse step, which
/// handles zeros where the Jacobian drops rank.
fn refine(params: &ModelParams, alpha: Complex64, start: Site, floor: f64) -> Site {
    let mut p = start;
    let mut value = total_field(params, alpha, p).norm_sqr();
    for _ in 0..REFINE_ITERATIONS {
        if value <= floor {
            break;
        }
        let e = total_field(params, alpha, p);
        let jac = field_jacobian(params, alpha, p);
        let Ok(step) = jac.svd(true, true).solve(&Vector2::new(e.re, e.im), 1e-14 * jac.norm())
        else {
            break;
        };
        let next = Site::new(p.x - step[0], p.y - step[1]);
        let next_value = total_field(params, alpha, next).norm_sqr();
        if !(next_value < value) {
            break;
        }
        p = next;
        value = next_value;
    }
    p
}

/// Samples `|E|²` on `grid`, refines every grid local minimum and keeps those
/// that reach `ZERO_ACCEPT · peak` without leaving the sampled rectangle.
/// `alpha` defaults to [`cancelling_amplitude`].
pub fn field_zero_map(
    params: &ModelParams,
    alpha: Option<Complex64>,
    grid: &ZeroGrid,
) -> Result<FieldZeroMap> {
    if grid.nx == 0 || grid.ny == 0 {
        return Err(Error::Empty { what: "zero-map grid" });
    }
    let alpha = alpha.unwrap_or_else(|| cancelling_amplitude(params));
    let lambda = params.lambda;
    let xs: Vec<f64> = grid.xs().iter().map(|x| x * lambda).collect();
    let ys: Vec<f64> = grid.ys().iter().map(|y| y * lambda).collect();
    let intensity: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            ys.iter()
                .map(|&y| total_field(params, alpha, Site::new(x, y)).norm_sqr())
                .collect()
        })
        .collect();
    let peak = intensity.iter().flatten().copied().fold(0.0, f64::max);
    let floor = 1e-32 * peak;
    let accept = ZERO_ACCEPT * peak;
    let merge = 0.5 * grid.spacing().max(f64::EPSILON) * lambda;
    let slack = 1e-9 * lambda;
    let inside = |p: Site| {
        p.x >= grid.x_min * lambda - slack
            && p.x <= grid.x_max * lambda + slack
            && p.y >= grid.y_min * lambda - slack
            && p.y <= grid.y_max * lambda + slack
    };

    let mut zeros: Vec<Site> = Vec::new();
    for i in 0..xs.len() {
        for j in 0..ys.len() {
            if !is_local_min(&intensity, i, j) {
                continue;
            }
            let p = refine(params, alpha, Site::new(xs[i], ys[j]), floor);
            if total_field(params, alpha, p).norm_sqr() > accept || !inside(p) {
                continue;
            }
            if zeros
                .iter()
                .all(|z| (z.x - p.x).abs() > merge || (z.y - p.y).abs() > merge)
            {
                zeros.push(p);
            }
        }
    }
    zeros.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(FieldZeroMap {
        xs,
        ys,
        intensity,
        peak,
        zeros,
        alpha,
    })
}

fn is_local_min(map: &[Vec<f64>], i: usize, j: usize) -> bool {
    let v = map[i][j];
    for di in -1i64..=1 {
        for dj in -1i64..=1 {
            let (a, b) = (i as i64 + di, j as i64 + dj);
            if a < 0 || b < 0 || a as usize >= map.len() || b as usize >= map[0].len() {
                continue;
            }
            if map[a as usize][b as usize] < v {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams {
            g0: 10.0,
            omega: 2.0,
            ..Default::default()
        }
    }

    fn wrapped(z: &Site) -> (f64, f64) {
        (z.x.rem_euclid(1.0), z.y.rem_euclid(1.0))
    }

    #[test]
    fn cancelling_field_gives_checkerboard() {
        let map = field_zero_map(&params(), None, &ZeroGrid::square(-0.3, 0.8, 45)).unwrap();
        assert!(!map.zeros.is_empty());
        for z in &map.zeros {
            let (x, y) = wrapped(z);
            let near = |a: f64, b: f64| (a - b).abs() < 1e-6 || (a - b - 1.0).abs() < 1e-6;
            assert!((near(x, 0.0) && near(y, 0.0)) || (near(x, 0.5) && near(y, 0.5)));
            assert!(map.intensity_at(&params(), *z) < 1e-16 * map.peak);
        }
        assert_eq!(map.zeros.len(), 2);
    }

    #[test]
    fn no_pump_gives_node_lines() {
        let p = ModelParams {
            omega: 0.0,
            ..params()
        };
        let map = field_zero_map(&p, Some(Complex64::new(0.3, 0.1)), &ZeroGrid::square(0.0, 1.0, 21))
            .unwrap();
        assert!(!map.zeros.is_empty());
        for z in &map.zeros {
            let q = (z.x - 0.25).rem_euclid(0.5);
            assert!(q.min(0.5 - q) < 1e-9);
        }
    }

    #[test]
    fn wrong_phase_leaves_antinodes_bright() {
        let p = params();
        let alpha = -cancelling_amplitude(&p);
        let map = field_zero_map(&p, Some(alpha), &ZeroGrid::square(0.0, 1.0, 21)).unwrap();
        let at_site = map.intensity_at(&p, Site::default());
        assert_eq!(at_site, (2.0 * p.omega).powi(2));
    }

    #[test]
    fn empty_grid_is_an_error() {
        assert!(field_zero_map(&params(), None, &ZeroGrid::square(0.0, 1.0, 0)).is_err());
    }

    #[test]
    fn wavelength_translation_moves_zeros_by_lambda() {
        let p = params();
        let a = field_zero_map(&p, None, &ZeroGrid::square(0.1, 0.9, 33)).unwrap();
        let b = field_zero_map(&p, None, &ZeroGrid::square(1.1, 1.9, 33)).unwrap();
        assert_eq!(a.zeros.len(), b.zeros.len());
        for (u, v) in a.zeros.iter().zip(&b.zeros) {
            assert!((v.x - u.x - 1.0).abs() < 1e-9 && (v.y - u.y - 1.0).abs() < 1e-9);
        }
    }
}
