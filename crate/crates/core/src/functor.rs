//! Basis functions attached to intersection components and their sup-norm
//! normalization.
//!
//! The squared modulus of the basis function for `(diff, I)` is
//! `(4-x1-x2)^E1 (2-x2)^E2 (4-x2)^E3 x1^E4 x2^E5` with integer exponents
//! `E = (a+b-i1-i2, b-i2, -(a+b-i2), i1, i2)`. In the variables
//! `u = x1/(4-x2)` and `w = x2` it separates as `(1-u)^E1 u^E4 (2-w)^E2 w^E5`
//! over the rectangle `[0,1] x [0,2]`, which makes the maximum exact.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aside::{IntersectionComponent, Locus};
use crate::bside::{LatticeIndex, LineBundleLabel};
use crate::geometry::{polytope, MomentPoint, SurfaceParams};
use crate::scalar::{Rational, Scalar};

type Q = Rational;
type QPoint = MomentPoint<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("pole on boundary: a factor with negative exponent vanishes")]
    PoleOnBoundary,
    #[error("basis function is unbounded on P (negative exponent {0:?})")]
    Unbounded([i64; 5]),
    #[error("no mirror basis element: component is not a generator")]
    NotGenerator,
}

/// Maximum of a squared modulus over `P` and where it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupNorm {
    pub norm_sq: Q,
    pub argmax: Locus,
}

impl SupNorm {
    pub fn norm(&self) -> f64 {
        self.norm_sq.approx().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFunction {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
    /// Twice the exponents of `(4-x1-x2, 2-x2, 4-x2, x1, x2)` in the modulus.
    pub doubled_exponents: [i64; 5],
    /// Set once the function has been rescaled to sup-norm one.
    pub normalization: Option<SupNorm>,
}

pub fn raw_basis_function(diff: LineBundleLabel, index: LatticeIndex) -> BasisFunction {
    let (a, b, i1, i2) = (diff.a, diff.b, index.i1, index.i2);
    BasisFunction {
        diff,
        index,
        doubled_exponents: [a + b - i1 - i2, b - i2, -(a + b - i2), i1, i2],
        normalization: None,
    }
}

impl BasisFunction {
    fn factors<T: Scalar>(x: &MomentPoint<T>) -> [T; 5] {
        let four = T::int(4);
        [
            four.clone() - x.x1.clone() - x.x2.clone(),
            T::int(2) - x.x2.clone(),
            four - x.x2.clone(),
            x.x1.clone(),
            x.x2.clone(),
        ]
    }

    /// Squared modulus before normalization.
    pub fn raw_modulus_sq<T: Scalar>(&self, x: &MomentPoint<T>) -> Result<T, FunctorError> {
        let mut acc = T::one();
        for (f, e) in Self::factors(x).iter().zip(self.doubled_exponents) {
            acc = acc * f.powi_checked(e).ok_or(FunctorError::PoleOnBoundary)?;
        }
        Ok(acc)
    }

    /// Squared modulus, divided by the squared sup-norm when normalized.
    pub fn modulus_sq<T: Scalar>(&self, x: &MomentPoint<T>) -> Result<T, FunctorError> {
        let raw = self.raw_modulus_sq(x)?;
        Ok(match &self.normalization {
            Some(n) => raw / T::from_rational(&n.norm_sq),
            None => raw,
        })
    }

    pub fn modulus(&self, x: &MomentPoint<f64>) -> Result<f64, FunctorError> {
        self.modulus_sq(x).map(f64::sqrt)
    }

    /// `-log |e|` of the normalized function; zero exactly on the max locus.
    pub fn potential(&self, x: &MomentPoint<f64>) -> Result<f64, FunctorError> {
        self.modulus_sq(x).map(|m| -0.5 * m.ln())
    }

    /// Exponents `(E1, E4)` of `1-u` and `u`, and `(E2, E5)` of `2-w` and `w`.
    fn separated(&self) -> ([i64; 2], [i64; 2]) {
        let e = self.doubled_exponents;
        ([e[0], e[3]], [e[1], e[4]])
    }

    /// Product with another basis function: exponents and indices add.
    pub fn product(&self, other: &BasisFunction) -> BasisFunction {
        raw_basis_function(self.diff + other.diff, self.index + other.index)
    }
}

/// Maximizer set of a one-variable factor `(L - v)^p v^q` on `[0, L]`.
enum Argmax1 {
    At(Q),
    Everywhere,
}

fn max_factor(p: i64, q: i64, len: i64) -> (Q, Argmax1) {
    let l = Q::int(len);
    match (p, q) {
        (0, 0) => (Q::one(), Argmax1::Everywhere),
        (0, q) => (l.clone().powu(q as u32), Argmax1::At(l)),
        (p, 0) => (l.powu(p as u32), Argmax1::At(Q::zero())),
        (p, q) => {
            let v = l.clone() * Q::ratio(q, p + q);
            let value = (l.clone() - v.clone()).powu(p as u32) * v.powu(q as u32);
            (value, Argmax1::At(l * Q::ratio(q, p + q)))
        }
    }
}

/// Exact supremum of the squared modulus over `P` and its maximizer set.
pub fn sup_norm(f: &BasisFunction) -> Result<SupNorm, FunctorError> {
    let ([e1, e4], [e2, e5]) = f.separated();
    if [e1, e2, e4, e5].iter().any(|&e| e < 0) {
        return Err(FunctorError::Unbounded(f.doubled_exponents));
    }
    let (gu, u) = max_factor(e1, e4, 1);
    let (gw, w) = max_factor(e2, e5, 2);
    let poly = polytope(&SurfaceParams::<Q>::f1());
    let four = Q::int(4);
    let argmax = match (u, w) {
        (Argmax1::At(u), Argmax1::At(w)) => Locus::Point(QPoint::new(u * (four - w.clone()), w)),
        (Argmax1::At(u), Argmax1::Everywhere) => Locus::segment(
            QPoint::new(u.clone() * four, Q::zero()),
            QPoint::new(u * Q::int(2), Q::int(2)),
            &poly,
        ),
        (Argmax1::Everywhere, Argmax1::At(w)) => Locus::segment(
            QPoint::new(Q::zero(), w.clone()),
            QPoint::new(four - w.clone(), w),
            &poly,
        ),
        (Argmax1::Everywhere, Argmax1::Everywhere) => Locus::WholePolytope,
    };
    Ok(SupNorm {
        norm_sq: gu * gw,
        argmax,
    })
}

/// The normalized basis function mirror to a generator.
pub fn iota(comp: &IntersectionComponent) -> Result<BasisFunction, FunctorError> {
    if !comp.is_generator {
        return Err(FunctorError::NotGenerator);
    }
    let mut f = raw_basis_function(comp.diff, comp.index);
    f.normalization = Some(sup_norm(&f)?);
    Ok(f)
}

/// [`iota`] over a batch, computed in parallel; output order follows input order.
pub fn iota_all(comps: &[IntersectionComponent]) -> Vec<Result<BasisFunction, FunctorError>> {
    comps.par_iter().map(iota).collect()
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Grid points per axis of the bounding box.
    pub grid: usize,
    /// Grid points closer than this to the locus are skipped.
    pub delta: f64,
    /// Required gap `1 - |e|` at the remaining grid points.
    pub min_margin: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: 200,
            delta: 1e-2,
            min_margin: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxLocusReport {
    /// `|e|^2 = 1` holds identically on the component (exact).
    pub unit_on_locus: bool,
    /// The exact maximizer set equals the component.
    pub argmax_matches: bool,
    /// Smallest `1 - |e|` over grid points at distance `>= delta`; `None` if there are none.
    pub min_margin: Option<f64>,
    pub worst_point: Option<[f64; 2]>,
    pub grid_points: usize,
    pub passed: bool,
}

/// `|e|^2 = 1` on the whole locus. Along a segment each factor is affine in
/// the parameter, so the cleared identity is a polynomial of degree at most
/// `sum |E|`; checking more points than that proves it.
fn unit_on_locus(f: &BasisFunction, locus: &Locus) -> bool {
    let Some(norm) = &f.normalization else {
        return false;
    };
    match locus {
        Locus::WholePolytope => {
            f.doubled_exponents.iter().all(|&e| e == 0) && norm.norm_sq.is_one()
        }
        Locus::Point(p) => f.modulus_sq(p).map(|m| m.is_one()).unwrap_or(false),
        Locus::Segment { start, end, .. } => {
            let degree: i64 = f.doubled_exponents.iter().map(|e| e.abs()).sum();
            (0..=degree + 1).all(|j| {
                let x = start.lerp(end, &Q::ratio(j, degree + 1));
                let mut num = Q::one();
                let mut den = norm.norm_sq.clone();
                for (factor, e) in BasisFunction::factors(&x)
                    .into_iter()
                    .zip(f.doubled_exponents)
                {
                    if e >= 0 {
                        num *= factor.powu(e as u32);
                    } else {
                        den *= factor.powu((-e) as u32);
                    }
                }
                num == den
            })
        }
    }
}

/// Certifies that a normalized basis function has modulus one exactly on its
/// component and stays below one elsewhere.
pub fn verify_max_locus(
    comp: &IntersectionComponent,
    f: &BasisFunction,
    opts: &VerifyOptions,
) -> MaxLocusReport {
    let unit = unit_on_locus(f, &comp.locus);
    let argmax_matches = f
        .normalization
        .as_ref()
        .map(|n| n.argmax.same_set(&comp.locus))
        .unwrap_or(false);

    let poly = polytope(&SurfaceParams::<f64>::f1());
    let (lo, hi) = poly.bounding_box();
    // `grid` points per axis, endpoints included
    let n = opts.grid.max(2);
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let (margin, worst, count) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, None, 0usize);
            for j in 0..n {
                let x = MomentPoint::new(step(lo.x1, hi.x1, i), step(lo.x2, hi.x2, j));
                if !poly.contains(&x) || comp.locus.distance(x.to_array()) < opts.delta {
                    continue;
                }
                best.2 += 1;
                let m = match f.modulus(&x) {
                    Ok(m) => 1.0 - m,
                    Err(_) => f64::NEG_INFINITY,
                };
                if m < best.0 {
                    best = (m, Some(x.to_array()), best.2);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, None, 0),
            |a, b| {
                let count = a.2 + b.2;
                // ties resolve to the earlier row for a deterministic report
                if b.0 < a.0 {
                    (b.0, b.1, count)
                } else {
                    (a.0, a.1, count)
                }
            },
        );
    MaxLocusReport {
        unit_on_locus: unit,
        argmax_matches,
        min_margin: (count > 0).then_some(margin),
        worst_point: worst,
        grid_points: count,
        passed: unit && argmax_matches && margin >= opts.min_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aside::enumerate_intersections;
    use crate::scalar::rat;

    fn l(a: i64, b: i64) -> LineBundleLabel {
        LineBundleLabel::new(a, b)
    }

    fn i(i1: i64, i2: i64) -> LatticeIndex {
        LatticeIndex::new(i1, i2)
    }

    fn component(diff: LineBundleLabel, index: LatticeIndex) -> IntersectionComponent {
        enumerate_intersections(diff)
            .into_iter()
            .find(|c| c.index == index)
            .expect("component present")
    }

    #[test]
    fn raw_moduli() {
        let x = QPoint::new(rat(1, 2), rat(1, 3));
        let f = raw_basis_function(l(1, 0), i(0, 0));
        let expected = (Q::int(4) - &x.x1 - &x.x2) / (Q::int(4) - &x.x2);
        assert_eq!(f.raw_modulus_sq(&x).unwrap(), expected);
        assert!(raw_basis_function(l(0, 0), i(0, 0))
            .raw_modulus_sq(&x)
            .unwrap()
            .is_one());
        assert_eq!(
            raw_basis_function(l(0, 1), i(0, 1))
                .raw_modulus_sq(&x)
                .unwrap(),
            rat(1, 3)
        );
    }

    #[test]
    fn pole_detection() {
        let f = raw_basis_function(l(-1, 0), i(0, 0));
        assert_eq!(
            f.raw_modulus_sq(&QPoint::ints(4, 0)),
            Err(FunctorError::PoleOnBoundary)
        );
        assert!(matches!(sup_norm(&f), Err(FunctorError::Unbounded(_))));
    }

    #[test]
    fn sup_norms() {
        let s = sup_norm(&raw_basis_function(l(1, 0), i(0, 0))).unwrap();
        assert_eq!(s.norm_sq, rat(1, 1));
        assert!(matches!(
            s.argmax,
            Locus::Segment {
                facet: Some(crate::geometry::Divisor::D24),
                ..
            }
        ));

        let s = sup_norm(&raw_basis_function(l(0, 1), i(0, 1))).unwrap();
        assert_eq!(s.norm_sq, rat(2, 1));
        assert!(matches!(
            s.argmax,
            Locus::Segment {
                facet: Some(crate::geometry::Divisor::D34),
                ..
            }
        ));

        let s = sup_norm(&raw_basis_function(l(1, 1), i(1, 0))).unwrap();
        assert_eq!(s.norm_sq, rat(1, 2));
        assert_eq!(s.argmax, Locus::Point(QPoint::ints(2, 0)));

        let s = sup_norm(&raw_basis_function(l(1, 1), i(1, 1))).unwrap();
        assert_eq!(s.norm_sq, rat(2, 1));
        assert_eq!(s.argmax, Locus::Point(QPoint::ints(2, 2)));
    }

    #[test]
    fn iota_examples() {
        let e = iota(&component(l(0, 0), i(0, 0))).unwrap();
        assert!(e
            .modulus_sq(&QPoint::new(rat(1, 3), rat(1, 7)))
            .unwrap()
            .is_one());

        let e = iota(&component(l(0, 1), i(0, 0))).unwrap();
        assert_eq!(e.normalization.as_ref().unwrap().norm_sq, rat(2, 1));
        let x = QPoint::new(rat(1, 2), rat(1, 2));
        let expected =
            (Q::int(4) - &x.x1 - &x.x2) * (Q::int(2) - &x.x2) / (Q::int(2) * (Q::int(4) - &x.x2));
        assert_eq!(e.modulus_sq(&x).unwrap(), expected);

        let non_gen = component(l(-1, 1), i(0, 1));
        assert_eq!(iota(&non_gen), Err(FunctorError::NotGenerator));
    }

    #[test]
    fn max_locus_examples() {
        for (diff, index) in [(l(1, 0), i(0, 0)), (l(1, 1), i(1, 1)), (l(0, 0), i(0, 0))] {
            let comp = component(diff, index);
            let f = iota(&comp).unwrap();
            let report = verify_max_locus(&comp, &f, &VerifyOptions::default());
            assert!(
                report.unit_on_locus && report.argmax_matches,
                "{diff} {index}: {report:?}"
            );
            // the identity's locus is all of P, leaving no grid point to test
            match report.min_margin {
                Some(m) => assert!(m > 0.0),
                None => assert!(diff.is_trivial() && report.grid_points == 0),
            }
        }
    }
}
