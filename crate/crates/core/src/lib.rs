//! Line bundles on the Hirzebruch surface `F_1` and the Morse homotopy
//! category of Lagrangian sections over its moment polytope.
//!
//! * [`geometry`]: moment map, moment polytope and the affine/moment coordinate charts.
//! * [`bside`]: monomial sections, toric sheaf cohomology, exceptional collections.
//! * [`aside`]: Lagrangian sections, intersection components, Morse indices, generators.
//! * [`functor`]: basis functions of components and their sup-norm normalization.
//! * [`product`]: structure constants from sup-norm ratios and from gradient trees.
//! * [`numerics`]: flow integration, maximization over the polytope, stable-manifold probes.
//!
//! Exact computations use [`Rational`]; sampling and flows use `f64`. Geometry is
//! generic over [`Scalar`] and works for `f32` as well.

pub mod aside;
pub mod bside;
pub mod functor;
pub mod geometry;
pub mod numerics;
pub mod product;
pub mod records;
pub mod scalar;

pub use aside::{enumerate_intersections, hom_basis, HomBasis, IntersectionComponent, Locus};
pub use bside::{
    exceptional_collection, hom_cohomology, CohomologyProfile, LatticeIndex, LineBundleLabel,
};
pub use functor::{iota, raw_basis_function, sup_norm, verify_max_locus, BasisFunction};
pub use geometry::{Divisor, MomentPoint, Polytope, SurfaceParams};
pub use product::{bside_structure_constant, gradient_trees, m2, GradientTree, StructureConstant};
pub use scalar::{rat, Rational, Real, Scalar};

/// Moment-polytope point with exact coordinates.
pub type ExactPoint = MomentPoint<Rational>;
/// Moment-polytope point in double precision.
pub type Point = MomentPoint<f64>;
/// Moment-polytope point in single precision.
pub type Point32 = MomentPoint<f32>;
pub type ExactPolytope = Polytope<Rational>;
pub type ExactParams = SurfaceParams<Rational>;
