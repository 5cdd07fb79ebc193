//! Gradient-flow trajectories inside the moment polytope.

use serde::{Deserialize, Serialize};

use super::rk::{Control, DormandPrince, SolveStatus};
use super::VectorField;
use crate::geometry::{Divisor, MomentPoint, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `x' = X(x)`
    Forward,
    /// `x' = -X(x)`
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    HitBoundary,
    StepLimit,
    /// Only with a finite `t_max`.
    TimeLimit,
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    /// Local error tolerance of the integrator.
    pub tol: f64,
    /// Stop once `|X| <= converge_tol`.
    pub converge_tol: f64,
    pub max_steps: usize,
    pub t_max: f64,
    /// Distance to a facet line below which the start point counts as on it.
    pub facet_eps: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            converge_tol: 1e-12,
            max_steps: 100_000,
            t_max: f64::INFINITY,
            facet_eps: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<MomentPoint<f64>>,
    pub termination: Termination,
    /// Facet whose line carried the whole trajectory, if the reduced 1-D flow was used.
    pub confined_to: Option<Divisor>,
}

impl Trajectory {
    pub fn last(&self) -> &MomentPoint<f64> {
        self.points
            .last()
            .expect("trajectory has at least its start point")
    }

    pub fn end_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory has at least its start point")
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Facet whose line contains `x0` and along which `field` is tangent.
fn invariant_facet<F: VectorField<f64, 2>>(
    field: &F,
    poly: &Polytope<f64>,
    x0: &MomentPoint<f64>,
    eps: f64,
) -> Option<(Divisor, MomentPoint<f64>, MomentPoint<f64>)> {
    let vertices = poly.vertices();
    let n = vertices.len();
    for (i, facet) in poly.facets().iter().enumerate() {
        if facet.slack(x0).abs() > eps {
            continue;
        }
        // facet i runs from vertex i-1 to vertex i
        let start = vertices[(i + n - 1) % n].clone();
        let end = vertices[i].clone();
        let tangent = [0.25, 0.5, 0.75]
            .iter()
            .chain(std::iter::once(&-1.0))
            .all(|&lam| {
                let p = if lam < 0.0 {
                    x0.clone()
                } else {
                    start.lerp(&end, &lam)
                };
                let x = field.eval(&p.to_array());
                let normal = (facet.normal[0] as f64).hypot(facet.normal[1] as f64);
                (facet.normal_dot(&x) / normal).abs() <= 1e-12 * (1.0 + norm(x))
            });
        if tangent {
            return Some((facet.divisor, start, end));
        }
    }
    None
}

/// Integrates `x' = ±X(x)` from `x0` with an adaptive Dormand-Prince scheme.
///
/// When `x0` lies on a facet line along which the field is tangent, the flow is
/// integrated as a 1-D equation in the line parameter, so the trajectory stays
/// on the facet exactly; it then stops at the facet's end vertices. Otherwise the
/// trajectory stops where it leaves the polytope, the last point clipped onto the
/// boundary.
pub fn integrate_flow<F: VectorField<f64, 2>>(
    field: &F,
    poly: &Polytope<f64>,
    x0: &MomentPoint<f64>,
    direction: Direction,
    opts: &FlowOptions,
) -> Trajectory {
    let sign = direction.sign();
    let mut solver = DormandPrince::new(opts.tol);
    solver.max_steps = opts.max_steps;

    if let Some((divisor, a, b)) = invariant_facet(field, poly, x0, opts.facet_eps) {
        let d = [b.x1 - a.x1, b.x2 - a.x2];
        let dd = d[0] * d[0] + d[1] * d[1];
        let at = |tau: f64| MomentPoint::new(a.x1 + tau * d[0], a.x2 + tau * d[1]);
        let tau0 = ((x0.x1 - a.x1) * d[0] + (x0.x2 - a.x2) * d[1]) / dd;
        let rhs = |s: &[f64; 1]| {
            let x = field.eval(&at(s[0]).to_array());
            [sign * (x[0] * d[0] + x[1] * d[1]) / dd]
        };
        let mut termination = None;
        let sol = solver.solve(rhs, [tau0], opts.t_max, |_, s| {
            let x = field.eval(&at(s[0]).to_array());
            if norm(x) <= opts.converge_tol {
                termination = Some(Termination::Converged);
                Control::Stop
            } else if !(0.0..=1.0).contains(&s[0]) {
                termination = Some(Termination::HitBoundary);
                Control::Stop
            } else {
                Control::Continue
            }
        });
        let points = sol
            .states
            .iter()
            .map(|s| at(s[0].clamp(0.0, 1.0)))
            .collect();
        return Trajectory {
            times: sol.times,
            points,
            termination: termination.unwrap_or(status_termination(sol.status)),
            confined_to: Some(divisor),
        };
    }

    let rhs = |x: &[f64; 2]| {
        let v = field.eval(x);
        [sign * v[0], sign * v[1]]
    };
    let mut termination = None;
    let sol = solver.solve(rhs, x0.to_array(), opts.t_max, |_, x| {
        let p = MomentPoint::from_array(*x);
        if poly.slacks(&p).iter().any(|s| *s < -opts.facet_eps) {
            termination = Some(Termination::HitBoundary);
            Control::Stop
        } else if norm(field.eval(x)) <= opts.converge_tol {
            termination = Some(Termination::Converged);
            Control::Stop
        } else {
            Control::Continue
        }
    });
    let mut points: Vec<MomentPoint<f64>> = sol
        .states
        .iter()
        .map(|x| MomentPoint::from_array(*x))
        .collect();
    let termination = termination.unwrap_or(status_termination(sol.status));
    if termination == Termination::HitBoundary && points.len() >= 2 {
        let n = points.len();
        let clipped = clip_to_polytope(poly, &points[n - 2], &points[n - 1]);
        points[n - 1] = clipped;
    }
    Trajectory {
        times: sol.times,
        points,
        termination,
        confined_to: None,
    }
}

fn status_termination(status: SolveStatus) -> Termination {
    match status {
        SolveStatus::ReachedEnd => Termination::TimeLimit,
        SolveStatus::Stopped => Termination::Converged,
        SolveStatus::StepLimit | SolveStatus::StepTooSmall => Termination::StepLimit,
    }
}

/// Last point of the segment `inside -> outside` that still lies in the polytope.
fn clip_to_polytope(
    poly: &Polytope<f64>,
    inside: &MomentPoint<f64>,
    outside: &MomentPoint<f64>,
) -> MomentPoint<f64> {
    let mut lam = 1.0f64;
    for f in poly.facets() {
        let s0 = f.slack(inside);
        let s1 = f.slack(outside);
        if s1 < 0.0 && s0 >= 0.0 {
            lam = lam.min(s0 / (s0 - s1));
        }
    }
    inside.lerp(outside, &lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{polytope, SurfaceParams};

    struct Linear(f64, f64, [f64; 2]);

    impl VectorField<f64, 2> for Linear {
        fn eval(&self, x: &[f64; 2]) -> [f64; 2] {
            [self.0 * (x[0] - self.2[0]), self.1 * (x[1] - self.2[1])]
        }
    }

    #[test]
    fn converges_to_sink() {
        let poly = polytope(&SurfaceParams::<f64>::f1());
        let f = Linear(-1.0, -2.0, [1.0, 1.0]);
        let tr = integrate_flow(
            &f,
            &poly,
            &MomentPoint::new(1.5, 0.5),
            Direction::Forward,
            &FlowOptions::default(),
        );
        assert_eq!(tr.termination, Termination::Converged);
        assert!((tr.last().x1 - 1.0).abs() < 1e-11);
    }

    #[test]
    fn leaves_through_facet() {
        let poly = polytope(&SurfaceParams::<f64>::f1());
        let f = Linear(-1.0, -1.0, [1.0, 1.0]);
        let tr = integrate_flow(
            &f,
            &poly,
            &MomentPoint::new(1.5, 1.0),
            Direction::Backward,
            &FlowOptions::default(),
        );
        assert_eq!(tr.termination, Termination::HitBoundary);
        let end = tr.last();
        assert!(end.x1 + end.x2 <= 4.0 + 1e-12 && (end.x1 + end.x2 - 4.0).abs() < 1e-9);
    }

    #[test]
    fn time_limit() {
        let poly = polytope(&SurfaceParams::<f64>::f1());
        let f = Linear(-1.0, -1.0, [1.0, 1.0]);
        let opts = FlowOptions {
            t_max: 0.5,
            ..FlowOptions::default()
        };
        let tr = integrate_flow(
            &f,
            &poly,
            &MomentPoint::new(1.5, 1.0),
            Direction::Forward,
            &opts,
        );
        assert_eq!(tr.termination, Termination::TimeLimit);
        assert!((tr.end_time() - 0.5).abs() < 1e-15);
    }
}
