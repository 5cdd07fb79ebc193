//! Lagrangian sections `L(a,b)` over the moment polytope of `F_1`, their
//! intersection components and the Morse data grading them.
//!
//! All loci are rational points or rational segments, so enumeration, Morse
//! indices and generator tests run in exact arithmetic.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bside::{LatticeIndex, LineBundleLabel};
use crate::geometry::{
    polytope, Divisor, FiberPoint, Location, MomentPoint, Polytope, SurfaceParams,
};
use crate::numerics::{
    integrate_flow, stable_manifold_probe, Direction, FlowOptions, LinearizedField, Termination,
    VectorField,
};
use crate::scalar::{Rational, Scalar};

type Q = Rational;
type QPoint = MomentPoint<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsideError {
    #[error("degenerate linearization for diff {diff}, index {index}")]
    DegenerateLinearization {
        diff: LineBundleLabel,
        index: LatticeIndex,
    },
}

/// The Lagrangian section mirror to `O(a,b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LagrangianSection {
    pub label: LineBundleLabel,
}

impl LagrangianSection {
    pub fn new(label: LineBundleLabel) -> Self {
        Self { label }
    }

    pub fn value<T: Scalar>(&self, x: &MomentPoint<T>) -> FiberPoint<T> {
        section_value(self.label, x)
    }
}

/// Fiber coordinates of `L(a,b)` over `x`:
/// `y1 = (2a + (2 - x2) b) x1 / (2 (4 - x2))`, `y2 = b x2 / 2`.
pub fn section_value<T: Scalar>(label: LineBundleLabel, x: &MomentPoint<T>) -> FiberPoint<T> {
    let (a, b) = (T::int(label.a), T::int(label.b));
    let two = T::int(2);
    let y1 = (two.clone() * a + (two.clone() - x.x2.clone()) * b.clone()) * x.x1.clone()
        / (two.clone() * (T::int(4) - x.x2.clone()));
    let y2 = b * x.x2.clone() / two;
    FiberPoint { y1, y2 }
}

/// The field `y_{(a,b)} - I` whose zeros in `P` form the component `V_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradientFieldSpec {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
}

impl GradientFieldSpec {
    pub fn new(diff: LineBundleLabel, index: LatticeIndex) -> Self {
        Self { diff, index }
    }

    pub fn at<T: Scalar>(&self, x: &MomentPoint<T>) -> [T; 2] {
        let y = section_value(self.diff, x);
        [y.y1 - T::int(self.index.i1), y.y2 - T::int(self.index.i2)]
    }

    /// The field multiplied by `4 - x2`; polynomial of degree two.
    fn cleared<T: Scalar>(&self, x: &MomentPoint<T>) -> [T; 2] {
        let (a, b) = (T::int(self.diff.a), T::int(self.diff.b));
        let two = T::int(2);
        let w = T::int(4) - x.x2.clone();
        [
            (a + b.clone() - b.clone() * x.x2.clone() / two.clone()) * x.x1.clone()
                - T::int(self.index.i1) * w.clone(),
            (b * x.x2.clone() / two - T::int(self.index.i2)) * w,
        ]
    }

    /// Upper-triangular Jacobian with respect to `(x1, x2)`.
    pub fn jacobian_at<T: Scalar>(&self, x: &MomentPoint<T>) -> [[T; 2]; 2] {
        let (a, b) = (T::int(self.diff.a), T::int(self.diff.b));
        let two = T::int(2);
        let w = T::int(4) - x.x2.clone();
        let j11 = (a.clone() + b.clone() - b.clone() * x.x2.clone() / two.clone()) / w.clone();
        let j12 = x.x1.clone() * (a - b.clone()) / (w.clone() * w);
        let j22 = b / two;
        [[j11, j12], [T::zero(), j22]]
    }
}

impl VectorField<f64, 2> for GradientFieldSpec {
    fn eval(&self, x: &[f64; 2]) -> [f64; 2] {
        self.at(&MomentPoint::from_array(*x))
    }
}

impl LinearizedField for GradientFieldSpec {
    fn jacobian(&self, x: &[f64; 2]) -> [[f64; 2]; 2] {
        self.jacobian_at(&MomentPoint::from_array(*x))
    }
}

/// `y_{(a,b)} - I` evaluated at `x`.
pub fn gradient_field<T: Scalar>(
    diff: LineBundleLabel,
    index: LatticeIndex,
    x: &MomentPoint<T>,
) -> [T; 2] {
    GradientFieldSpec::new(diff, index).at(x)
}

/// Geometry of an intersection component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Locus {
    Point(QPoint),
    /// Closed segment `start + lambda (end - start)`, `lambda in [0, 1]`; `facet`
    /// is set when the segment lies in a facet of `P`.
    Segment {
        start: QPoint,
        end: QPoint,
        facet: Option<Divisor>,
    },
    WholePolytope,
}

impl Locus {
    pub(crate) fn segment(start: QPoint, end: QPoint, poly: &Polytope<Q>) -> Self {
        let facet = poly
            .facets()
            .iter()
            .find(|f| f.slack(&start).is_zero() && f.slack(&end).is_zero())
            .map(|f| f.divisor);
        Locus::Segment { start, end, facet }
    }

    /// Points at which local tests are run: the point itself, or the midpoint
    /// of a segment and two points at relative distance 1/1000 from its ends.
    pub fn representatives(&self) -> Vec<QPoint> {
        match self {
            Locus::Point(p) => vec![p.clone()],
            Locus::Segment { start, end, .. } => {
                [Q::ratio(1, 2), Q::ratio(1, 1000), Q::ratio(999, 1000)]
                    .iter()
                    .map(|l| start.lerp(end, l))
                    .collect()
            }
            Locus::WholePolytope => {
                vec![polytope(&SurfaceParams::<Q>::f1()).centroid_of_vertices()]
            }
        }
    }

    /// Equality as point sets; segment orientation is ignored.
    pub fn same_set(&self, other: &Locus) -> bool {
        match (self, other) {
            (
                Locus::Segment {
                    start: a, end: b, ..
                },
                Locus::Segment {
                    start: c, end: d, ..
                },
            ) => (a == c && b == d) || (a == d && b == c),
            _ => self == other,
        }
    }

    pub fn contains(&self, x: &QPoint) -> bool {
        match self {
            Locus::Point(p) => p == x,
            Locus::Segment { start, end, .. } => {
                let d = [
                    end.x1.clone() - start.x1.clone(),
                    end.x2.clone() - start.x2.clone(),
                ];
                let r = [
                    x.x1.clone() - start.x1.clone(),
                    x.x2.clone() - start.x2.clone(),
                ];
                let cross = d[0].clone() * r[1].clone() - d[1].clone() * r[0].clone();
                if !cross.is_zero() {
                    return false;
                }
                let dot = d[0].clone() * r[0].clone() + d[1].clone() * r[1].clone();
                let len2 = d[0].clone() * d[0].clone() + d[1].clone() * d[1].clone();
                dot >= Q::zero() && dot <= len2
            }
            Locus::WholePolytope => polytope(&SurfaceParams::<Q>::f1()).contains(x),
        }
    }

    /// Exact check that the locus lies in the boundary of `P`.
    pub fn in_boundary(&self, poly: &Polytope<Q>) -> bool {
        match self {
            Locus::Point(p) => matches!(poly.locate(p), Location::Boundary(_)),
            Locus::Segment { start, end, .. } => poly
                .facets()
                .iter()
                .any(|f| f.slack(start).is_zero() && f.slack(end).is_zero()),
            Locus::WholePolytope => false,
        }
    }

    /// Euclidean distance from `x` to the locus.
    pub fn distance(&self, x: [f64; 2]) -> f64 {
        match self {
            Locus::Point(p) => {
                let p = p.to_array();
                (x[0] - p[0]).hypot(x[1] - p[1])
            }
            Locus::Segment { start, end, .. } => {
                let (a, b) = (start.to_array(), end.to_array());
                let d = [b[0] - a[0], b[1] - a[1]];
                let len2 = d[0] * d[0] + d[1] * d[1];
                let lam = (((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
                (x[0] - a[0] - lam * d[0]).hypot(x[1] - a[1] - lam * d[1])
            }
            Locus::WholePolytope => 0.0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Locus::Point(_) => "point",
            Locus::Segment { .. } => "segment",
            Locus::WholePolytope => "polytope",
        }
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::scalar::format_rational as r;
        match self {
            Locus::Point(p) => write!(f, "({}, {})", r(&p.x1), r(&p.x2)),
            Locus::Segment { start, end, facet } => {
                write!(
                    f,
                    "[({}, {}) -- ({}, {})]",
                    r(&start.x1),
                    r(&start.x2),
                    r(&end.x1),
                    r(&end.x2)
                )?;
                if let Some(d) = facet {
                    write!(f, " on {d}")?;
                }
                Ok(())
            }
            Locus::WholePolytope => f.write_str("P"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionComponent {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
    pub locus: Locus,
    /// `None` when the linearization is degenerate.
    pub morse_index: Option<u32>,
    pub is_generator: bool,
}

impl IntersectionComponent {
    pub fn field(&self) -> GradientFieldSpec {
        GradientFieldSpec::new(self.diff, self.index)
    }

    pub fn is_identity(&self) -> bool {
        self.locus == Locus::WholePolytope
    }
}

/// Integers strictly between or equal to 0 and `end`, starting from 0.
fn toward(end: i64) -> Box<dyn Iterator<Item = i64>> {
    if end >= 0 {
        Box::new(0..=end)
    } else {
        Box::new((end..=0).rev())
    }
}

/// Solves `y_{(a,b)}(x) = I` over `P` for every `I` with a nonempty solution.
pub fn intersection_loci(diff: LineBundleLabel) -> Vec<(LatticeIndex, Locus)> {
    let poly = polytope(&SurfaceParams::<Q>::f1());
    let (a, b) = (diff.a, diff.b);
    let four = Q::int(4);
    let mut out = Vec::new();
    if a == 0 && b == 0 {
        out.push((LatticeIndex::ZERO, Locus::WholePolytope));
        return out;
    }
    if b == 0 {
        // x1 = (4 - x2) i1 / a for x2 in [0, 2]
        for i1 in toward(a) {
            let start = QPoint::new(Q::ratio(4 * i1, a), Q::zero());
            let end = QPoint::new(Q::ratio(2 * i1, a), Q::int(2));
            out.push((LatticeIndex::new(i1, 0), Locus::segment(start, end, &poly)));
        }
        return out;
    }
    for i2 in toward(b) {
        let x2 = Q::ratio(2 * i2, b);
        let c = a + b - i2;
        if c == 0 {
            let start = QPoint::new(Q::zero(), x2.clone());
            let end = QPoint::new(four.clone() - x2.clone(), x2);
            out.push((LatticeIndex::new(0, i2), Locus::segment(start, end, &poly)));
        } else {
            for i1 in toward(c) {
                let x1 = (four.clone() - x2.clone()) * Q::ratio(i1, c);
                out.push((
                    LatticeIndex::new(i1, i2),
                    Locus::Point(QPoint::new(x1, x2.clone())),
                ));
            }
        }
    }
    out
}

/// All intersection components of `L(0,0)` and `L(diff)`, with Morse index and
/// generator flag filled in.
pub fn enumerate_intersections(diff: LineBundleLabel) -> Vec<IntersectionComponent> {
    intersection_loci(diff)
        .into_iter()
        .map(|(index, locus)| {
            let mut comp = IntersectionComponent {
                diff,
                index,
                locus,
                morse_index: None,
                is_generator: false,
            };
            comp.morse_index = morse_index(&comp).ok();
            comp.is_generator = is_generator(&comp);
            comp
        })
        .collect()
}

/// Eigenvalue of the linearization transverse to the locus, with its
/// eigenvector. For points both eigenvalues are returned.
fn linear_data(
    field: &GradientFieldSpec,
    locus: &Locus,
    at: &QPoint,
) -> Result<Vec<(Q, [Q; 2])>, ()> {
    let j = field.jacobian_at(at);
    let (j11, j12, j22) = (j[0][0].clone(), j[0][1].clone(), j[1][1].clone());
    let e11 = [Q::one(), Q::zero()];
    let e22 = [j12.clone(), j22.clone() - j11.clone()];
    match locus {
        Locus::WholePolytope => Ok(vec![]),
        Locus::Point(_) => {
            if j11.is_zero() || j22.is_zero() {
                return Err(());
            }
            if j11 == j22 && !j12.is_zero() {
                // defective; only one eigendirection
                return Ok(vec![(j11.clone(), e11.clone()), (j22, e11)]);
            }
            Ok(vec![(j11, e11), (j22, e22)])
        }
        Locus::Segment { start, end, .. } => {
            let d = [
                end.x1.clone() - start.x1.clone(),
                end.x2.clone() - start.x2.clone(),
            ];
            let jd = [
                j11.clone() * d[0].clone() + j12.clone() * d[1].clone(),
                j22.clone() * d[1].clone(),
            ];
            if !(jd[0].is_zero() && jd[1].is_zero()) {
                return Err(());
            }
            match (j11.is_zero(), j22.is_zero()) {
                (false, true) => Ok(vec![(j11, e11)]),
                (true, false) => Ok(vec![(j22, e22)]),
                _ => Err(()),
            }
        }
    }
}

/// Number of stable directions of the flow `x' = X(x)` transverse to the
/// component, computed exactly from the Jacobian.
pub fn morse_index(comp: &IntersectionComponent) -> Result<u32, AsideError> {
    let field = comp.field();
    let at = match &comp.locus {
        Locus::WholePolytope => return Ok(0),
        Locus::Point(p) => p.clone(),
        Locus::Segment { start, end, .. } => start.lerp(end, &Q::ratio(1, 2)),
    };
    let data =
        linear_data(&field, &comp.locus, &at).map_err(|_| AsideError::DegenerateLinearization {
            diff: comp.diff,
            index: comp.index,
        })?;
    Ok(data.iter().filter(|(lam, _)| lam.is_negative()).count() as u32)
}

/// Whether the line through `v` with direction `e` is invariant under the field.
/// The cleared field is quadratic along the line, so five samples decide it.
fn line_invariant(field: &GradientFieldSpec, v: &QPoint, e: &[Q; 2], normal: [i64; 2]) -> bool {
    (-2..=2).all(|t| {
        let t = Q::int(t);
        let p = QPoint::new(
            v.x1.clone() + t.clone() * e[0].clone(),
            v.x2.clone() + t * e[1].clone(),
        );
        let x = field.cleared(&p);
        (Q::int(normal[0]) * x[0].clone() + Q::int(normal[1]) * x[1].clone()).is_zero()
    })
}

/// Whether the one-dimensional stable manifold through `v` extends on both
/// sides of `v` inside `P`, judged by backward flows from `v +- h e`.
fn stable_curve_interior_numeric(field: &GradientFieldSpec, v: &QPoint, e: &[Q; 2]) -> bool {
    let poly = polytope(&SurfaceParams::<f64>::f1());
    let v = v.to_f64();
    let e = [e[0].approx(), e[1].approx()];
    let n = e[0].hypot(e[1]);
    let h = 1e-6;
    [1.0, -1.0].iter().all(|s| {
        let start = MomentPoint::new(v.x1 + s * h * e[0] / n, v.x2 + s * h * e[1] / n);
        if !poly.contains(&start) {
            return false;
        }
        let opts = FlowOptions {
            t_max: 50.0,
            ..FlowOptions::default()
        };
        let tr = integrate_flow(field, &poly, &start, Direction::Backward, &opts);
        let far = tr
            .points
            .iter()
            .any(|p| (p.x1 - v.x1).hypot(p.x2 - v.x2) > 1e-3);
        far && (tr.termination != Termination::HitBoundary || {
            let end = tr.last();
            (end.x1 - v.x1).hypot(end.x2 - v.x2) > 1e-3
        })
    })
}

fn point_is_interior_of_stable_set(
    field: &GradientFieldSpec,
    poly: &Polytope<Q>,
    v: &QPoint,
    degree: u32,
    stable: &[[Q; 2]],
) -> bool {
    let on: Vec<Divisor> = match poly.locate(v) {
        Location::Interior => return true,
        Location::Boundary(ds) => ds,
        Location::Outside => return false,
    };
    match degree {
        0 => true,
        1 => {
            let e = &stable[0];
            if on.iter().any(|d| !poly.facet(*d).normal_dot(e).is_zero()) {
                return false;
            }
            // tangent to every facet through v, hence v lies on exactly one facet
            let facet = poly.facet(on[0]);
            if line_invariant(field, v, e, facet.normal) {
                true
            } else {
                stable_curve_interior_numeric(field, v, e)
            }
        }
        _ => false,
    }
}

/// Whether some point `v` of the component is an interior point of
/// `S_v ∩ P` relative to its stable manifold `S_v`.
pub fn is_generator(comp: &IntersectionComponent) -> bool {
    if comp.is_identity() {
        return true;
    }
    let degree = match morse_index(comp) {
        Ok(d) => d,
        Err(_) => return false,
    };
    if degree == 0 {
        return true;
    }
    let poly = polytope(&SurfaceParams::<Q>::f1());
    let field = comp.field();
    comp.locus.representatives().iter().any(|v| {
        let stable: Vec<[Q; 2]> = match linear_data(&field, &comp.locus, v) {
            Ok(data) => data
                .into_iter()
                .filter(|(lam, _)| lam.is_negative())
                .map(|(_, e)| e)
                .collect(),
            Err(_) => return false,
        };
        point_is_interior_of_stable_set(&field, &poly, v, degree, &stable)
    })
}

/// Secondary certificate: the floating-point stable-manifold probe reports the
/// same dimension as the exact Morse index at every representative point.
pub fn probe_agrees(comp: &IntersectionComponent) -> bool {
    let Some(expected) = comp.morse_index else {
        return false;
    };
    if comp.is_identity() {
        return expected == 0;
    }
    let field = comp.field();
    comp.locus.representatives().iter().all(|v| {
        stable_manifold_probe(&field, &v.to_f64())
            .map(|p| p.dimension == expected)
            .unwrap_or(false)
    })
}

/// Generators of the morphism space `L(from) -> L(to)`, bucketed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBasis {
    pub from: LineBundleLabel,
    pub to: LineBundleLabel,
    /// `degrees[r]` holds the degree-`r` generators, `r = 0, 1, 2`.
    pub degrees: [Vec<IntersectionComponent>; 3],
    /// Components whose linearization is degenerate, kept for diagnostics.
    pub degenerate: Vec<IntersectionComponent>,
}

impl HomBasis {
    pub fn counts(&self) -> [u64; 3] {
        [0, 1, 2].map(|r| self.degrees[r].len() as u64)
    }

    pub fn generators(&self) -> impl Iterator<Item = &IntersectionComponent> {
        self.degrees.iter().flatten()
    }
}

pub fn hom_basis(from: LineBundleLabel, to: LineBundleLabel) -> HomBasis {
    let mut degrees: [Vec<IntersectionComponent>; 3] = Default::default();
    let mut degenerate = Vec::new();
    for comp in enumerate_intersections(to - from) {
        match comp.morse_index {
            None => degenerate.push(comp),
            Some(d) if comp.is_generator => degrees[d as usize].push(comp),
            Some(_) => {}
        }
    }
    HomBasis {
        from,
        to,
        degrees,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn l(a: i64, b: i64) -> LineBundleLabel {
        LineBundleLabel::new(a, b)
    }

    fn p(x1: Q, x2: Q) -> QPoint {
        QPoint::new(x1, x2)
    }

    fn find(comps: &[IntersectionComponent], i1: i64, i2: i64) -> IntersectionComponent {
        comps
            .iter()
            .find(|c| c.index == LatticeIndex::new(i1, i2))
            .cloned()
            .expect("component present")
    }

    #[test]
    fn section_values() {
        let y = section_value(l(1, 0), &p(rat(2, 1), rat(0, 1)));
        assert_eq!((y.y1, y.y2), (rat(1, 2), rat(0, 1)));
        let y = section_value(l(0, 1), &p(rat(1, 1), rat(1, 1)));
        assert_eq!((y.y1, y.y2), (rat(1, 6), rat(1, 2)));
        let y = LagrangianSection::new(l(0, 0)).value(&p(rat(3, 7), rat(1, 3)));
        assert!(y.y1.is_zero() && y.y2.is_zero());
    }

    #[test]
    fn field_values() {
        let f = gradient_field(l(2, -2), LatticeIndex::new(1, -1), &p(rat(3, 1), rat(1, 1)));
        assert!(f[0].is_zero() && f[1].is_zero());
        let f = gradient_field(l(1, 0), LatticeIndex::ZERO, &p(rat(2, 1), rat(1, 1)));
        assert_eq!(f, [rat(2, 3), rat(0, 1)]);
        for k in 0..5 {
            let f = gradient_field(l(1, 0), LatticeIndex::ZERO, &p(rat(0, 1), rat(k, 2)));
            assert!(f[0].is_zero() && f[1].is_zero());
        }
    }

    #[test]
    fn degree_one_example() {
        let comps = enumerate_intersections(l(2, -2));
        let loci: Vec<String> = comps
            .iter()
            .map(|c| format!("{}:{}", c.index, c.locus))
            .collect();
        assert_eq!(
            loci,
            vec![
                "(0,0):[(0, 0) -- (4, 0)] on D12",
                "(0,-1):(0, 1)",
                "(1,-1):(3, 1)",
                "(0,-2):(0, 2)",
                "(1,-2):(1, 2)",
                "(2,-2):(2, 2)",
            ]
        );
        let basis = hom_basis(l(0, 0), l(2, -2));
        assert_eq!(basis.counts(), [0, 2, 0]);
        let pts: Vec<Locus> = basis.degrees[1].iter().map(|c| c.locus.clone()).collect();
        assert_eq!(
            pts,
            vec![
                Locus::Point(QPoint::ints(0, 1)),
                Locus::Point(QPoint::ints(3, 1))
            ]
        );
        assert_eq!(find(&comps, 0, -1).morse_index, Some(1));
    }

    #[test]
    fn facet_segments_for_b_zero() {
        let comps = enumerate_intersections(l(1, 0));
        assert_eq!(comps.len(), 2);
        assert!(matches!(
            comps[0].locus,
            Locus::Segment {
                facet: Some(Divisor::D24),
                ..
            }
        ));
        assert!(matches!(
            comps[1].locus,
            Locus::Segment {
                facet: Some(Divisor::D13),
                ..
            }
        ));
        assert!(comps
            .iter()
            .all(|c| c.morse_index == Some(0) && c.is_generator));
        let basis = hom_basis(l(0, 0), l(1, 0));
        assert_eq!(basis.counts(), [2, 0, 0]);
    }

    #[test]
    fn identity_component() {
        let comps = enumerate_intersections(l(0, 0));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].locus, Locus::WholePolytope);
        assert_eq!(comps[0].morse_index, Some(0));
        assert!(comps[0].is_generator);
    }

    #[test]
    fn morse_indices() {
        let c = find(&enumerate_intersections(l(1, 1)), 1, 0);
        assert_eq!(c.morse_index, Some(0));
        let c = find(&enumerate_intersections(l(-1, -1)), -1, 0);
        assert_eq!(c.locus, Locus::Point(QPoint::ints(2, 0)));
        assert_eq!(c.morse_index, Some(2));
        assert!(!c.is_generator);
    }

    #[test]
    fn non_generator_at_corner() {
        let c = find(&enumerate_intersections(l(-1, 1)), 0, 1);
        assert_eq!(c.locus, Locus::Point(QPoint::ints(0, 2)));
        assert!(!c.is_generator);
    }

    #[test]
    fn horizontal_segment_generator() {
        let basis = hom_basis(l(1, 0), l(0, 1));
        assert_eq!(basis.counts(), [1, 0, 0]);
        assert!(matches!(
            basis.degrees[0][0].locus,
            Locus::Segment {
                facet: Some(Divisor::D12),
                ..
            }
        ));
    }

    #[test]
    fn segment_membership() {
        let seg = Locus::segment(
            QPoint::ints(4, 0),
            QPoint::ints(2, 2),
            &polytope(&SurfaceParams::f1()),
        );
        assert!(seg.contains(&QPoint::ints(3, 1)));
        assert!(!seg.contains(&QPoint::ints(5, -1)));
        assert!(!seg.contains(&QPoint::ints(1, 1)));
        assert!((seg.distance([2.0, 0.0]) - 2.0f64.sqrt()).abs() < 1e-15);
    }
}
