//! Composition of morphisms on both sides of the correspondence.
//!
//! On the line-bundle side the product of basis functions is the product of
//! monomials, so the structure constant is a ratio of sup-norms. On the Morse
//! side it is `exp(-area)` of the gradient tree joining the two inputs to the
//! output; the area is the sum of the two input potentials at the root.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aside::{enumerate_intersections, hom_basis, IntersectionComponent};
use crate::bside::{exceptional_collection, LatticeIndex, LineBundleLabel};
use crate::functor::{iota, raw_basis_function, sup_norm, BasisFunction, FunctorError};
use crate::geometry::{polytope, MomentPoint, Polytope, SurfaceParams};
use crate::numerics::{integrate_flow, Direction, FlowOptions, Termination, Trajectory};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProductError {
    #[error("composite vanishes in cohomology (kappa = {})", .0.kappa)]
    CompositeVanishes(Box<StructureConstant>),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("invalid tree: root on a pole of a potential")]
    InvalidTree,
}

/// Identifies a basis element by its bundle difference and lattice index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisKey {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
}

impl BasisKey {
    pub fn of(c: &IntersectionComponent) -> Self {
        Self {
            diff: c.diff,
            index: c.index,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstant {
    pub left: BasisKey,
    pub right: BasisKey,
    pub target: BasisKey,
    /// `kappa^2`, exact.
    pub kappa_sq: Rational,
    pub kappa: f64,
    /// `-log kappa`.
    pub area: f64,
}

/// `kappa = M_{I+J} / (M_I M_J)` for the product of two basis functions.
pub fn bside_structure_constant(
    f: &BasisFunction,
    g: &BasisFunction,
) -> Result<StructureConstant, ProductError> {
    let norm_sq = |h: &BasisFunction| -> Result<Rational, ProductError> {
        Ok(match &h.normalization {
            Some(n) => n.norm_sq.clone(),
            None => sup_norm(h)?.norm_sq,
        })
    };
    let target = f.product(g);
    let kappa_sq = norm_sq(&target)? / (norm_sq(f)? * norm_sq(g)?);
    let kappa = kappa_sq.approx().sqrt();
    let sc = StructureConstant {
        left: BasisKey {
            diff: f.diff,
            index: f.index,
        },
        right: BasisKey {
            diff: g.diff,
            index: g.index,
        },
        target: BasisKey {
            diff: target.diff,
            index: target.index,
        },
        kappa_sq,
        kappa,
        area: -kappa.ln(),
    };
    let target_is_generator = enumerate_intersections(target.diff)
        .iter()
        .any(|c| c.index == target.index && c.is_generator);
    if target_is_generator {
        Ok(sc)
    } else {
        Err(ProductError::CompositeVanishes(Box::new(sc)))
    }
}

#[derive(Clone, Debug)]
pub struct GradientTree {
    pub left: IntersectionComponent,
    pub right: IntersectionComponent,
    pub target: IntersectionComponent,
    pub v: MomentPoint<f64>,
    pub w: MomentPoint<f64>,
    pub z: MomentPoint<f64>,
    /// Polylines `v -> z`, `w -> z` and the root edge at `z`.
    pub edges: [Vec<MomentPoint<f64>>; 3],
    pub area: f64,
}

impl GradientTree {
    pub fn is_degenerate(&self) -> bool {
        self.edges.iter().all(|e| e.len() <= 1)
    }

    pub fn points(&self) -> impl Iterator<Item = &MomentPoint<f64>> {
        self.edges.iter().flatten()
    }
}

/// The component of `diff` with the given index, if it is a generator.
fn generator_with(diff: LineBundleLabel, index: LatticeIndex) -> Option<IntersectionComponent> {
    enumerate_intersections(diff)
        .into_iter()
        .find(|c| c.index == index && c.is_generator)
}

/// Backward flow of the input's field from `z`; accepted when it ends on the input's locus.
fn flow_to_input(
    comp: &IntersectionComponent,
    poly: &Polytope<f64>,
    z: &MomentPoint<f64>,
) -> Option<Trajectory> {
    let tr = integrate_flow(
        &comp.field(),
        poly,
        z,
        Direction::Backward,
        &FlowOptions::default(),
    );
    let ok = matches!(
        tr.termination,
        Termination::Converged | Termination::HitBoundary
    ) && comp.locus.distance(tr.last().to_array()) <= 1e-6;
    ok.then_some(tr)
}

fn identity_tree(
    identity: &IntersectionComponent,
    other: &IntersectionComponent,
    identity_left: bool,
) -> GradientTree {
    let z = other.locus.representatives()[0].to_f64();
    let (left, right) = if identity_left {
        (identity.clone(), other.clone())
    } else {
        (other.clone(), identity.clone())
    };
    GradientTree {
        left,
        right,
        target: other.clone(),
        v: z.clone(),
        w: z.clone(),
        z: z.clone(),
        edges: [vec![z.clone()], vec![z.clone()], vec![z]],
        area: 0.0,
    }
}

/// Gradient trees from `V` and `W` to the generator with index `I_V + I_W`.
///
/// The root is placed at a representative point `z` of the target; each input
/// edge is the backward flow of that input's field from `z`, which has to
/// end on the input component. Identity inputs give the degenerate tree.
pub fn gradient_trees(v: &IntersectionComponent, w: &IntersectionComponent) -> Vec<GradientTree> {
    if v.is_identity() {
        return vec![identity_tree(v, w, true)];
    }
    if w.is_identity() {
        return vec![identity_tree(w, v, false)];
    }
    let Some(target) = generator_with(v.diff + w.diff, v.index + w.index) else {
        return vec![];
    };
    let degree = match (v.morse_index, w.morse_index) {
        (Some(a), Some(b)) => a + b,
        _ => return vec![],
    };
    if target.morse_index != Some(degree) {
        return vec![];
    }
    let poly = polytope(&SurfaceParams::<f64>::f1());
    for z in target.locus.representatives() {
        let z = z.to_f64();
        let (Some(tv), Some(tw)) = (flow_to_input(v, &poly, &z), flow_to_input(w, &poly, &z))
        else {
            continue;
        };
        let reversed = |t: &Trajectory| t.points.iter().rev().cloned().collect::<Vec<_>>();
        let mut tree = GradientTree {
            left: v.clone(),
            right: w.clone(),
            target: target.clone(),
            v: tv.last().clone(),
            w: tw.last().clone(),
            z: z.clone(),
            edges: [reversed(&tv), reversed(&tw), vec![z]],
            area: 0.0,
        };
        match tree_area(&tree) {
            Ok(a) => tree.area = a,
            Err(_) => continue,
        }
        // the root is fixed by the target point, so one matching per target
        return vec![tree];
    }
    vec![]
}

/// `f_V(z) + f_W(z)` with `f = -log |iota(.)|`.
pub fn tree_area(tree: &GradientTree) -> Result<f64, ProductError> {
    if tree.left.is_identity() || tree.right.is_identity() {
        return Ok(0.0);
    }
    let fv = iota(&tree.left)?;
    let fw = iota(&tree.right)?;
    let a = fv
        .potential(&tree.z)
        .map_err(|_| ProductError::InvalidTree)?
        + fw.potential(&tree.z)
            .map_err(|_| ProductError::InvalidTree)?;
    if a.is_finite() {
        // potentials vanish on their loci; tiny negative values are rounding
        Ok(a.max(0.0))
    } else {
        Err(ProductError::InvalidTree)
    }
}

/// `m2(V, W)`: the target generator of matching index and degree together
/// with `sum exp(-area)` over trees; the coefficient is zero without a tree.
pub fn m2(
    v: &IntersectionComponent,
    w: &IntersectionComponent,
) -> Vec<(IntersectionComponent, f64)> {
    let trees = gradient_trees(v, w);
    if let Some(t) = trees.first() {
        let coefficient = trees.iter().map(|t| (-t.area).exp()).sum();
        return vec![(t.target.clone(), coefficient)];
    }
    let degree = match (v.morse_index, w.morse_index) {
        (Some(a), Some(b)) => a + b,
        _ => return vec![],
    };
    generator_with(v.diff + w.diff, v.index + w.index)
        .filter(|z| z.morse_index == Some(degree))
        .map(|z| vec![(z, 0.0)])
        .unwrap_or_default()
}

/// One composable pair of generators and its structure constants on both sides.
#[derive(Clone, Debug)]
pub struct ProductRow {
    /// Positions `(i, j, k)` in the collection: `left: E_i -> E_j`, `right: E_j -> E_k`.
    pub positions: (usize, usize, usize),
    pub left: IntersectionComponent,
    pub right: IntersectionComponent,
    pub target: BasisKey,
    pub bside: StructureConstant,
    pub tree: Option<GradientTree>,
    /// `|area + log kappa|`; infinite when no tree was found.
    pub residual: f64,
}

fn key_bside(
    v: &IntersectionComponent,
    w: &IntersectionComponent,
) -> Result<StructureConstant, ProductError> {
    let f = raw_basis_function(v.diff, v.index);
    let g = raw_basis_function(w.diff, w.index);
    match bside_structure_constant(&f, &g) {
        Ok(s) => Ok(s),
        Err(ProductError::CompositeVanishes(s)) => Ok(*s),
        Err(e) => Err(e),
    }
}

/// All composable pairs of generators in the collection `E(c)`.
pub fn composable_pairs(
    labels: &[LineBundleLabel],
) -> Vec<(
    (usize, usize, usize),
    IntersectionComponent,
    IntersectionComponent,
)> {
    let n = labels.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let left = hom_basis(labels[i], labels[j]);
            for k in j..n {
                let right = hom_basis(labels[j], labels[k]);
                for v in left.generators() {
                    for w in right.generators() {
                        out.push(((i, j, k), v.clone(), w.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Structure constants of every composable pair in `labels`, computed in parallel.
pub fn product_table(labels: &[LineBundleLabel]) -> Result<Vec<ProductRow>, ProductError> {
    composable_pairs(labels)
        .into_par_iter()
        .map(|(positions, v, w)| {
            let bside = key_bside(&v, &w)?;
            let tree = gradient_trees(&v, &w).into_iter().next();
            let residual = tree
                .as_ref()
                .map(|t| (t.area + bside.kappa.ln()).abs())
                .unwrap_or(f64::INFINITY);
            Ok(ProductRow {
                positions,
                target: bside.target,
                left: v,
                right: w,
                bside,
                tree,
                residual,
            })
        })
        .collect()
}

pub fn collection_products(c: u32) -> Result<Vec<ProductRow>, ProductError> {
    product_table(&exceptional_collection(c))
}

/// Both bracketings of a triple of composable generators.
#[derive(Clone, Debug)]
pub struct AssociativityRow {
    pub inputs: [BasisKey; 3],
    pub left_first: f64,
    pub right_first: f64,
}

/// `m2(m2(u, v), w)` against `m2(u, m2(v, w))` for every composable triple in
/// `labels` whose composites are all nonzero.
pub fn associativity_check(labels: &[LineBundleLabel]) -> Vec<AssociativityRow> {
    let n = labels.len();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for l in k..n {
                    let (a, b, c) = (
                        hom_basis(labels[i], labels[j]),
                        hom_basis(labels[j], labels[k]),
                        hom_basis(labels[k], labels[l]),
                    );
                    for u in a.generators() {
                        for v in b.generators() {
                            for w in c.generators() {
                                triples.push((u.clone(), v.clone(), w.clone()));
                            }
                        }
                    }
                }
            }
        }
    }
    triples
        .into_par_iter()
        .filter_map(|(u, v, w)| {
            let compose = |x: &IntersectionComponent, y: &IntersectionComponent| {
                m2(x, y).into_iter().find(|(_, c)| *c > 0.0)
            };
            let (uv, c_uv) = compose(&u, &v)?;
            let (uv_w, c1) = compose(&uv, &w)?;
            let (vw, c_vw) = compose(&v, &w)?;
            let (u_vw, c2) = compose(&u, &vw)?;
            debug_assert_eq!(BasisKey::of(&uv_w), BasisKey::of(&u_vw));
            Some(AssociativityRow {
                inputs: [BasisKey::of(&u), BasisKey::of(&v), BasisKey::of(&w)],
                left_first: c_uv * c1,
                right_first: c_vw * c2,
            })
        })
        .collect()
}

/// Whether every point of the tree lies on a facet line of `P` to within `tol`.
pub fn tree_on_boundary(tree: &GradientTree, tol: f64) -> bool {
    let poly = polytope(&SurfaceParams::<f64>::f1());
    tree.points()
        .all(|p| poly.contains(p) && poly.facets().iter().any(|f| f.slack(p).abs() <= tol))
}

/// Identity of the unit: `kappa = 1` whenever one input is an identity.
pub fn is_unit_constant(s: &StructureConstant) -> bool {
    s.kappa_sq.is_one()
}
