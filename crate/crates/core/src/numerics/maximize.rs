//! Derivative-free maximization of a function over the closed moment polytope.

use rayon::prelude::*;

use crate::geometry::{MomentPoint, Polytope};
use crate::scalar::{exact_from_f64, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct MaximizeOptions {
    /// Grid resolution per axis of the bounding box.
    pub grid: usize,
    /// Number of best grid points refined by pattern search.
    pub candidates: usize,
    /// Pattern search stops once the step falls below this.
    pub min_step: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            grid: 400,
            candidates: 8,
            min_step: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaximizeResult {
    pub point: MomentPoint<f64>,
    pub value: f64,
}

/// Membership that is exact near the boundary, so the returned point is
/// guaranteed to lie in the closed polytope.
fn inside(poly: &Polytope<f64>, x: &MomentPoint<f64>) -> bool {
    let slacks = poly.slacks(x);
    if slacks.iter().any(|s| *s < -1e-9) {
        return false;
    }
    if slacks.iter().all(|s| *s > 1e-9) {
        return true;
    }
    match (exact_from_f64(x.x1), exact_from_f64(x.x2)) {
        (Some(a), Some(b)) => {
            let exact = MomentPoint::new(a, b);
            poly.facets().iter().all(|f| {
                let offset = exact_from_f64(f.offset).expect("finite facet offset");
                Rational::int(f.normal[0]) * &exact.x1
                    + Rational::int(f.normal[1]) * &exact.x2
                    + offset
                    >= Rational::int(0)
            })
        }
        _ => false,
    }
}

const DIRECTIONS: [[f64; 2]; 8] = [
    [1.0, 0.0],
    [-1.0, 0.0],
    [0.0, 1.0],
    [0.0, -1.0],
    [1.0, 1.0],
    [-1.0, -1.0],
    [1.0, -1.0],
    [-1.0, 1.0],
];

/// Grid search over the bounding box followed by compass pattern search from
/// the best grid points. Directions include both diagonals so that the search
/// can slide along slanted facets.
pub fn maximize_on_polytope<F>(f: F, poly: &Polytope<f64>, opts: &MaximizeOptions) -> MaximizeResult
where
    F: Fn(&MomentPoint<f64>) -> f64 + Sync,
{
    let (lo, hi) = poly.bounding_box();
    let n = opts.grid.max(1);
    let mut samples: Vec<(f64, usize, usize)> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let f = &f;
            (0..=n).filter_map(move |j| {
                let x = MomentPoint::new(
                    lo.x1 + (hi.x1 - lo.x1) * i as f64 / n as f64,
                    lo.x2 + (hi.x2 - lo.x2) * j as f64 / n as f64,
                );
                if !inside(poly, &x) {
                    return None;
                }
                let v = f(&x);
                v.is_finite().then_some((v, i, j))
            })
        })
        .collect();
    // deterministic order: value descending, then grid position
    samples.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let h0 = (hi.x1 - lo.x1).max(hi.x2 - lo.x2) / n as f64;
    let refined: Vec<MaximizeResult> = samples
        .iter()
        .take(opts.candidates.max(1))
        .map(|&(v, i, j)| {
            let start = MomentPoint::new(
                lo.x1 + (hi.x1 - lo.x1) * i as f64 / n as f64,
                lo.x2 + (hi.x2 - lo.x2) * j as f64 / n as f64,
            );
            pattern_search(&f, poly, start, v, h0, opts.min_step)
        })
        .collect();
    refined
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("polytope contains grid points")
}

fn pattern_search<F>(
    f: &F,
    poly: &Polytope<f64>,
    mut x: MomentPoint<f64>,
    mut v: f64,
    mut h: f64,
    min_step: f64,
) -> MaximizeResult
where
    F: Fn(&MomentPoint<f64>) -> f64,
{
    while h >= min_step {
        let mut improved = false;
        for d in DIRECTIONS {
            let y = MomentPoint::new(x.x1 + h * d[0], x.x2 + h * d[1]);
            if !inside(poly, &y) {
                continue;
            }
            let w = f(&y);
            if w > v {
                x = y;
                v = w;
                improved = true;
                break;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    MaximizeResult { point: x, value: v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{polytope, SurfaceParams};

    #[test]
    fn constant_function() {
        let poly = polytope(&SurfaceParams::<f64>::f1());
        let r = maximize_on_polytope(|_| 1.0, &poly, &MaximizeOptions::default());
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn slanted_facet_maximum() {
        // maximized on the segment x1 + x2 = 4 at (3, 1)
        let poly = polytope(&SurfaceParams::<f64>::f1());
        let f = |x: &MomentPoint<f64>| x.x1 + x.x2 - (x.x1 - 3.0).powi(2);
        let r = maximize_on_polytope(
            f,
            &poly,
            &MaximizeOptions {
                grid: 50,
                ..Default::default()
            },
        );
        assert!((r.value - 4.0).abs() < 1e-10, "{r:?}");
        assert!((r.point.x1 - 3.0).abs() < 1e-5);
    }
}
