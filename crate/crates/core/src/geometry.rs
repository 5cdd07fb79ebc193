//! Charts, moment map and moment polytope of the Hirzebruch surface `F_k`.
//!
//! Two coordinate systems on the open polytope are used throughout:
//!
//! * affine coordinates `(x_1, x_2)` of the complex torus chart, stored through
//!   `s = e^{2 x_1}` and `t = e^{2 x_2}` so that the moment map stays rational;
//! * moment coordinates `(x^1, x^2)`, the image of the moment map, in which the
//!   polytope, the Lagrangian sections and all intersection loci are described.
//!
//! For `k = 1` and unit Kähler constants the inverse map is closed form; for
//! other `k` it is computed by Newton's method on the convex Legendre potential.

use std::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Real, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid surface parameters: {0}")]
    InvalidParams(String),
    #[error("boundary point, affine chart diverges")]
    BoundaryPoint,
    #[error("point lies outside the moment polytope")]
    Outside,
    #[error("inversion failed after {iterations} Newton iterations (residual {residual:e})")]
    InversionFailed { iterations: usize, residual: f64 },
}

/// The four torus-invariant divisors, one per facet of the moment polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Divisor {
    D24,
    D12,
    D13,
    D34,
}

impl Divisor {
    /// Circular (counter-clockwise) order of the fan rays.
    pub const ALL: [Divisor; 4] = [Divisor::D24, Divisor::D12, Divisor::D13, Divisor::D34];

    /// Primitive inward facet normal, equivalently the fan ray of the divisor.
    pub fn ray(self, k: u32) -> [i64; 2] {
        match self {
            Divisor::D24 => [1, 0],
            Divisor::D12 => [0, 1],
            Divisor::D13 => [-1, -(k as i64)],
            Divisor::D34 => [0, -1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Divisor::D24 => "D24",
            Divisor::D12 => "D12",
            Divisor::D13 => "D13",
            Divisor::D34 => "D34",
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hirzebruch index `k` and Kähler constants `C1`, `C2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceParams<T> {
    pub k: u32,
    pub c1: T,
    pub c2: T,
}

impl<T: Scalar> SurfaceParams<T> {
    pub fn new(k: u32, c1: T, c2: T) -> Result<Self, GeometryError> {
        if k == 0 {
            return Err(GeometryError::InvalidParams("k must be at least 1".into()));
        }
        if c1 <= T::zero() || c2 <= T::zero() {
            return Err(GeometryError::InvalidParams(
                "Kähler constants must be positive".into(),
            ));
        }
        Ok(Self { k, c1, c2 })
    }

    /// `F_k` with `C1 = C2 = 1`.
    pub fn hirzebruch(k: u32) -> Self {
        assert!(k >= 1, "Hirzebruch index must be positive");
        Self {
            k,
            c1: T::one(),
            c2: T::one(),
        }
    }

    /// `F_1` with unit Kähler constants, the only surface the category code accepts.
    pub fn f1() -> Self {
        Self::hirzebruch(1)
    }

    pub fn is_unit_f1(&self) -> bool {
        self.k == 1 && self.c1 == T::one() && self.c2 == T::one()
    }
}

/// A point of the moment polytope in moment coordinates `(x^1, x^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentPoint<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Scalar> MomentPoint<T> {
    pub fn new(x1: T, x2: T) -> Self {
        Self { x1, x2 }
    }

    pub fn ints(x1: i64, x2: i64) -> Self {
        Self::new(T::int(x1), T::int(x2))
    }

    pub fn to_f64(&self) -> MomentPoint<f64> {
        MomentPoint::new(self.x1.approx(), self.x2.approx())
    }

    pub fn to_array(&self) -> [f64; 2] {
        [self.x1.approx(), self.x2.approx()]
    }

    /// Affine combination `self + lambda * (other - self)`.
    pub fn lerp(&self, other: &Self, lambda: &T) -> Self {
        Self::new(
            self.x1.clone() + lambda.clone() * (other.x1.clone() - self.x1.clone()),
            self.x2.clone() + lambda.clone() * (other.x2.clone() - self.x2.clone()),
        )
    }
}

impl MomentPoint<f64> {
    pub fn from_array(p: [f64; 2]) -> Self {
        Self::new(p[0], p[1])
    }
}

/// Point of the complex torus chart, stored as `s = e^{2 x_1}`, `t = e^{2 x_2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePoint<T> {
    pub s: T,
    pub t: T,
}

impl<T: Scalar> AffinePoint<T> {
    pub fn new(s: T, t: T) -> Self {
        debug_assert!(s > T::zero() && t > T::zero());
        Self { s, t }
    }
}

impl<T: Real> AffinePoint<T> {
    pub fn from_log(x1: T, x2: T) -> Self {
        let two = T::lit(2.0);
        Self {
            s: Float::exp(two * x1),
            t: Float::exp(two * x2),
        }
    }

    /// The affine coordinates `(x_1, x_2) = (log s / 2, log t / 2)`.
    pub fn log_coords(&self) -> (T, T) {
        let half = T::lit(0.5);
        (half * Float::ln(self.s), half * Float::ln(self.t))
    }
}

/// Fiber coordinates of the dual torus fibration, normalized so that lattice
/// translations shift them by integers.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint<T> {
    pub y1: T,
    pub y2: T,
}

/// Moment map in terms of `s`, `t`; rational in its inputs, hence exact for
/// rational `s`, `t`.
pub fn moment_from_affine<T: Scalar>(
    params: &SurfaceParams<T>,
    p: &AffinePoint<T>,
) -> MomentPoint<T> {
    let one = T::one();
    let two = T::int(2);
    let sk = p.s.powu(params.k);
    let denom = one.clone() + sk.clone() + p.t.clone();
    let x1 = params.c1.clone() * two.clone() * p.s.clone() / (one + p.s.clone())
        + params.c2.clone() * T::int(params.k as i64) * two.clone() * sk / denom.clone();
    let x2 = params.c2.clone() * two * p.t.clone() / denom;
    MomentPoint::new(x1, x2)
}

/// Result of evaluating the moment map from affine coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentImage<T> {
    pub point: MomentPoint<T>,
    /// Set when the evaluation saturated and the image is a limit point on `∂P`.
    pub boundary_limit: bool,
}

/// Moment map from affine coordinates `(x_1, x_2)`, evaluated with logistic and
/// softmax forms so that large `|x_j|` (including infinities) produce the limit
/// point on the boundary instead of overflowing.
pub fn moment_from_log<T: Real>(params: &SurfaceParams<T>, x1: T, x2: T) -> MomentImage<T> {
    let two = T::lit(2.0);
    let zero = T::zero();
    let one = T::one();
    let k = T::int(params.k as i64);

    let logistic = |a: T| -> T {
        if a >= zero {
            one / (one + Float::exp(-a))
        } else {
            let e = Float::exp(a);
            e / (one + e)
        }
    };

    let a1 = two * k * x1;
    let a2 = two * x2;
    // softmax over (0, a1, a2)
    let m = Float::max(Float::max(zero, a1), a2);
    let (e0, e1, e2) = (Float::exp(zero - m), Float::exp(a1 - m), Float::exp(a2 - m));
    let total = e0 + e1 + e2;

    let p1 = two * params.c1 * logistic(two * x1) + two * params.c2 * k * (e1 / total);
    let p2 = two * params.c2 * (e2 / total);
    let point = MomentPoint::new(p1, p2);
    let strictly_inside = p1 > zero
        && p2 > zero
        && p2 < two * params.c2
        && p1 + k * p2 < two * (params.c2 * k + params.c1);
    MomentImage {
        point,
        boundary_limit: !strictly_inside,
    }
}

fn open_polytope_check<T: Scalar>(slacks: &[T]) -> Result<(), GeometryError> {
    if slacks.iter().any(|s| *s < -T::tolerance()) {
        return Err(GeometryError::Outside);
    }
    if slacks.iter().any(|s| s.near_zero() || *s <= T::zero()) {
        return Err(GeometryError::BoundaryPoint);
    }
    Ok(())
}

/// Closed-form inverse of the moment map for `F_1` with unit constants:
/// `s = x^1/(4 - x^1 - x^2)` and `t = x^2 (4 - x^2) / ((2 - x^2)(4 - x^1 - x^2))`.
pub fn affine_from_moment_k1<T: Scalar>(
    x: &MomentPoint<T>,
) -> Result<AffinePoint<T>, GeometryError> {
    let four = T::int(4);
    let two = T::int(2);
    let a13 = four.clone() - x.x1.clone() - x.x2.clone();
    let a34 = two - x.x2.clone();
    open_polytope_check(&[x.x1.clone(), x.x2.clone(), a34.clone(), a13.clone()])?;
    let s = x.x1.clone() / a13.clone();
    let t = x.x2.clone() * (four - x.x2.clone()) / (a34 * a13);
    Ok(AffinePoint { s, t })
}

/// Gradient of the Legendre potential `C1 log(1+s) + C2 log(1+s^k+t)` in affine
/// coordinates (equal to the moment map) together with its Hessian, the inverse
/// metric `g^{-1}`.
fn moment_and_metric_inverse<T: Real>(
    params: &SurfaceParams<T>,
    z1: T,
    z2: T,
) -> ([T; 2], [[T; 2]; 2]) {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let zero = T::zero();
    let k = T::int(params.k as i64);
    let image = moment_from_log(params, z1, z2);

    // p = s/(1+s), q = s^k/(1+s^k+t), r = t/(1+s^k+t), all computed stably.
    let p = if z1 >= zero {
        T::one() / (T::one() + Float::exp(-two * z1))
    } else {
        let e = Float::exp(two * z1);
        e / (T::one() + e)
    };
    let a1 = two * k * z1;
    let a2 = two * z2;
    let m = Float::max(Float::max(zero, a1), a2);
    let total = Float::exp(-m) + Float::exp(a1 - m) + Float::exp(a2 - m);
    let (e1, e2) = (Float::exp(a1 - m), Float::exp(a2 - m));
    let (q, r) = (e1 / total, e2 / total);

    // s/(1+s)^2 = p(1-p); s^k(1+t)/(1+s^k+t)^2 = q(1-q); s^k t/(..)^2 = q r; t(1+s^k)/(..)^2 = r(1-r)
    let h11 = four * (params.c1 * p * (T::one() - p) + params.c2 * k * k * q * (T::one() - q));
    let h12 = -four * params.c2 * k * q * r;
    let h22 = four * params.c2 * r * (T::one() - r);
    ([image.point.x1, image.point.x2], [[h11, h12], [h12, h22]])
}

fn legendre_objective<T: Real>(
    params: &SurfaceParams<T>,
    target: &MomentPoint<T>,
    z1: T,
    z2: T,
) -> T {
    let two = T::lit(2.0);
    let zero = T::zero();
    let k = T::int(params.k as i64);
    let softplus = |a: T| -> T { Float::max(a, zero) + Float::ln_1p(Float::exp(-Float::abs(a))) };
    let a1 = two * k * z1;
    let a2 = two * z2;
    let m = Float::max(Float::max(zero, a1), a2);
    let lse = m + Float::ln(Float::exp(-m) + Float::exp(a1 - m) + Float::exp(a2 - m));
    let phi = params.c1 * softplus(two * z1) + params.c2 * lse;
    phi - target.x1 * z1 - target.x2 * z2
}

/// Numerical inverse of the moment map for any `k`: damped Newton iteration on
/// the strictly convex function `phi(z) - <x, z>`, whose gradient is the moment
/// map minus the target.
pub fn affine_from_moment_numeric<T: Real>(
    params: &SurfaceParams<T>,
    x: &MomentPoint<T>,
) -> Result<AffinePoint<T>, GeometryError> {
    let poly = polytope(params);
    open_polytope_check(&poly.slacks(x))?;

    const MAX_ITER: usize = 200;
    let tol = T::lit(1e-12);
    let (mut z1, mut z2) = (T::zero(), T::zero());
    let mut residual = T::infinity();
    for _ in 0..MAX_ITER {
        let (m, h) = moment_and_metric_inverse(params, z1, z2);
        let (r1, r2) = (m[0] - x.x1, m[1] - x.x2);
        residual = Float::max(Float::abs(r1), Float::abs(r2));
        if residual <= tol {
            return Ok(AffinePoint::from_log(z1, z2));
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let (mut d1, mut d2) = if det > T::zero() && det.is_finite() {
            (
                -(h[1][1] * r1 - h[0][1] * r2) / det,
                -(-h[1][0] * r1 + h[0][0] * r2) / det,
            )
        } else {
            (-r1, -r2)
        };
        // Cap the step so the exponentials stay finite.
        let cap = T::lit(8.0);
        let norm = Float::max(Float::abs(d1), Float::abs(d2));
        if norm > cap {
            d1 = d1 * cap / norm;
            d2 = d2 * cap / norm;
        }
        let f0 = legendre_objective(params, x, z1, z2);
        let slope = r1 * d1 + r2 * d2;
        let mut lambda = T::one();
        loop {
            let (n1, n2) = (z1 + lambda * d1, z2 + lambda * d2);
            let f1 = legendre_objective(params, x, n1, n2);
            // near the solution objective differences drown in rounding, so a
            // step that shrinks the residual is accepted as well
            let m1 = moment_from_log(params, n1, n2).point;
            let r_new = Float::max(Float::abs(m1.x1 - x.x1), Float::abs(m1.x2 - x.x2));
            let decreases =
                f1 <= f0 + T::lit(1e-4) * lambda * slope || r_new < T::lit(0.5) * residual;
            if decreases || lambda < T::lit(1e-10) {
                z1 = n1;
                z2 = n2;
                break;
            }
            lambda = lambda * T::lit(0.5);
        }
    }
    Err(GeometryError::InversionFailed {
        iterations: MAX_ITER,
        residual: residual.approx(),
    })
}

/// One facet: the half-plane `<normal, x> + offset >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet<T> {
    pub normal: [i64; 2],
    pub offset: T,
    pub divisor: Divisor,
}

impl<T: Scalar> Facet<T> {
    /// Value of the defining affine form; zero exactly on the facet line.
    pub fn slack(&self, x: &MomentPoint<T>) -> T {
        T::int(self.normal[0]) * x.x1.clone()
            + T::int(self.normal[1]) * x.x2.clone()
            + self.offset.clone()
    }

    /// `<normal, v>` for a direction `v`.
    pub fn normal_dot(&self, v: &[T; 2]) -> T {
        T::int(self.normal[0]) * v[0].clone() + T::int(self.normal[1]) * v[1].clone()
    }
}

/// The moment polytope, facets listed in the circular order of the fan.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<T> {
    pub k: u32,
    facets: Vec<Facet<T>>,
}

/// Where a point sits relative to a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    /// On the boundary; lists every facet through the point (two at a vertex).
    Boundary(Vec<Divisor>),
    Outside,
}

/// `P = {0 <= x^1, 0 <= x^2 <= 2 C2, x^1 + k x^2 <= 2 (C2 k + C1)}`.
pub fn polytope<T: Scalar>(params: &SurfaceParams<T>) -> Polytope<T> {
    let two = T::int(2);
    let k = params.k;
    let facets = vec![
        Facet {
            normal: Divisor::D24.ray(k),
            offset: T::zero(),
            divisor: Divisor::D24,
        },
        Facet {
            normal: Divisor::D12.ray(k),
            offset: T::zero(),
            divisor: Divisor::D12,
        },
        Facet {
            normal: Divisor::D13.ray(k),
            offset: two.clone() * (params.c2.clone() * T::int(k as i64) + params.c1.clone()),
            divisor: Divisor::D13,
        },
        Facet {
            normal: Divisor::D34.ray(k),
            offset: two * params.c2.clone(),
            divisor: Divisor::D34,
        },
    ];
    Polytope { k, facets }
}

/// Classifies `x` using the scalar's default tolerance (exact for rationals).
pub fn locate<T: Scalar>(p: &Polytope<T>, x: &MomentPoint<T>) -> Location {
    p.locate_with(x, &T::tolerance())
}

impl<T: Scalar> Polytope<T> {
    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn facet(&self, d: Divisor) -> &Facet<T> {
        self.facets
            .iter()
            .find(|f| f.divisor == d)
            .expect("every divisor has a facet")
    }

    pub fn slacks(&self, x: &MomentPoint<T>) -> Vec<T> {
        self.facets.iter().map(|f| f.slack(x)).collect()
    }

    /// Vertices in counter-clockwise order, vertex `i` joining facets `i` and `i+1`.
    pub fn vertices(&self) -> Vec<MomentPoint<T>> {
        let n = self.facets.len();
        (0..n)
            .map(|i| intersect_lines(&self.facets[i], &self.facets[(i + 1) % n]))
            .collect()
    }

    pub fn locate_with(&self, x: &MomentPoint<T>, eps: &T) -> Location {
        let mut on = Vec::new();
        for f in &self.facets {
            let s = f.slack(x);
            if s < -eps.clone() {
                return Location::Outside;
            }
            if s.abs() <= *eps {
                on.push(f.divisor);
            }
        }
        if on.is_empty() {
            Location::Interior
        } else {
            Location::Boundary(on)
        }
    }

    pub fn contains(&self, x: &MomentPoint<T>) -> bool {
        self.locate(x) != Location::Outside
    }

    pub fn locate(&self, x: &MomentPoint<T>) -> Location {
        locate(self, x)
    }

    /// Axis-aligned bounding box `[(min x1, min x2), (max x1, max x2)]`.
    pub fn bounding_box(&self) -> (MomentPoint<T>, MomentPoint<T>) {
        let vs = self.vertices();
        let mut lo = vs[0].clone();
        let mut hi = vs[0].clone();
        for v in &vs[1..] {
            if v.x1 < lo.x1 {
                lo.x1 = v.x1.clone();
            }
            if v.x2 < lo.x2 {
                lo.x2 = v.x2.clone();
            }
            if v.x1 > hi.x1 {
                hi.x1 = v.x1.clone();
            }
            if v.x2 > hi.x2 {
                hi.x2 = v.x2.clone();
            }
        }
        (lo, hi)
    }

    pub fn centroid_of_vertices(&self) -> MomentPoint<T> {
        let vs = self.vertices();
        let n = T::int(vs.len() as i64);
        let (mut a, mut b) = (T::zero(), T::zero());
        for v in vs {
            a = a + v.x1;
            b = b + v.x2;
        }
        MomentPoint::new(a / n.clone(), b / n)
    }
}

fn intersect_lines<T: Scalar>(f: &Facet<T>, g: &Facet<T>) -> MomentPoint<T> {
    // n_f . x = -c_f, n_g . x = -c_g
    let (a, b) = (T::int(f.normal[0]), T::int(f.normal[1]));
    let (c, d) = (T::int(g.normal[0]), T::int(g.normal[1]));
    let (e, h) = (-f.offset.clone(), -g.offset.clone());
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    assert!(!det.is_zero(), "adjacent facets must not be parallel");
    MomentPoint::new(
        (e.clone() * d - b * h.clone()) / det.clone(),
        (a * h - c * e) / det,
    )
}
