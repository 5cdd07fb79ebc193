//! Serializable records for Hom tables, components, basis functions and
//! structure constants. Exact rationals are written as `"p/q"` strings.

use std::io;

use serde::{Deserialize, Serialize};

use crate::aside::{IntersectionComponent, Locus};
use crate::bside::{CohomologyProfile, LatticeIndex, LineBundleLabel};
use crate::functor::{BasisFunction, MaxLocusReport};
use crate::geometry::{Divisor, MomentPoint};
use crate::product::{BasisKey, ProductRow};
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomRecord {
    pub from: LineBundleLabel,
    pub to: LineBundleLabel,
    pub h: [u64; 3],
}

impl HomRecord {
    pub fn new(from: LineBundleLabel, to: LineBundleLabel, p: &CohomologyProfile) -> Self {
        Self {
            from,
            to,
            h: p.as_array(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct HomCsvRow {
    a1: i64,
    b1: i64,
    a2: i64,
    b2: i64,
    h0: u64,
    h1: u64,
    h2: u64,
}

pub fn write_hom_csv<W: io::Write>(records: &[HomRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(HomCsvRow {
            a1: r.from.a,
            b1: r.from.b,
            a2: r.to.a,
            b2: r.to.b,
            h0: r.h[0],
            h1: r.h[1],
            h2: r.h[2],
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_hom_csv<R: io::Read>(input: R) -> csv::Result<Vec<HomRecord>> {
    csv::Reader::from_reader(input)
        .deserialize::<HomCsvRow>()
        .map(|row| {
            row.map(|r| HomRecord {
                from: LineBundleLabel::new(r.a1, r.b1),
                to: LineBundleLabel::new(r.a2, r.b2),
                h: [r.h0, r.h1, r.h2],
            })
        })
        .collect()
}

fn point_strings(p: &MomentPoint<Rational>) -> [String; 2] {
    [format_rational(&p.x1), format_rational(&p.x2)]
}

fn parse_point(p: &[String; 2]) -> Option<MomentPoint<Rational>> {
    Some(MomentPoint::new(
        parse_rational(&p[0])?,
        parse_rational(&p[1])?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometryRecord {
    Point {
        point: [String; 2],
    },
    Segment {
        start: [String; 2],
        end: [String; 2],
        facet: Option<Divisor>,
    },
    Polytope,
}

impl From<&Locus> for GeometryRecord {
    fn from(l: &Locus) -> Self {
        match l {
            Locus::Point(p) => GeometryRecord::Point {
                point: point_strings(p),
            },
            Locus::Segment { start, end, facet } => GeometryRecord::Segment {
                start: point_strings(start),
                end: point_strings(end),
                facet: *facet,
            },
            Locus::WholePolytope => GeometryRecord::Polytope,
        }
    }
}

impl GeometryRecord {
    pub fn to_locus(&self) -> Option<Locus> {
        Some(match self {
            GeometryRecord::Point { point } => Locus::Point(parse_point(point)?),
            GeometryRecord::Segment { start, end, facet } => Locus::Segment {
                start: parse_point(start)?,
                end: parse_point(end)?,
                facet: *facet,
            },
            GeometryRecord::Polytope => Locus::WholePolytope,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
    pub geometry: GeometryRecord,
    /// Absent when the linearization is degenerate.
    pub degree: Option<u32>,
    pub generator: bool,
}

impl From<&IntersectionComponent> for ComponentRecord {
    fn from(c: &IntersectionComponent) -> Self {
        Self {
            diff: c.diff,
            index: c.index,
            geometry: (&c.locus).into(),
            degree: c.morse_index,
            generator: c.is_generator,
        }
    }
}

impl ComponentRecord {
    pub fn to_component(&self) -> Option<IntersectionComponent> {
        Some(IntersectionComponent {
            diff: self.diff,
            index: self.index,
            locus: self.geometry.to_locus()?,
            morse_index: self.degree,
            is_generator: self.generator,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub diff: LineBundleLabel,
    pub index: LatticeIndex,
    /// Exponents of `(4-x1-x2, 2-x2, 4-x2, x1, x2)` as `[numerator, 2]`.
    pub exponents: [[i64; 2]; 5],
    /// Squared sup-norm `M^2`, exact.
    pub norm: String,
    pub argmax: GeometryRecord,
}

impl BasisRecord {
    /// `None` for functions that have not been normalized.
    pub fn new(f: &BasisFunction) -> Option<Self> {
        let n = f.normalization.as_ref()?;
        Some(Self {
            diff: f.diff,
            index: f.index,
            exponents: f.doubled_exponents.map(|e| [e, 2]),
            norm: format_rational(&n.norm_sq),
            argmax: (&n.argmax).into(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub left: BasisKey,
    pub right: BasisKey,
    pub target: BasisKey,
    pub kappa: f64,
    /// Exact `kappa^2`.
    pub kappa_sq: String,
    /// Tree area; absent when no tree was found.
    pub area: Option<f64>,
    /// `|area + log kappa|`; absent when no tree was found.
    pub residual: Option<f64>,
    pub tree: Vec<[f64; 2]>,
}

impl From<&ProductRow> for ProductRecord {
    fn from(r: &ProductRow) -> Self {
        Self {
            left: BasisKey::of(&r.left),
            right: BasisKey::of(&r.right),
            target: r.target,
            kappa: r.bside.kappa,
            kappa_sq: format_rational(&r.bside.kappa_sq),
            area: r.tree.as_ref().map(|t| t.area),
            residual: r.residual.is_finite().then_some(r.residual),
            tree: r
                .tree
                .as_ref()
                .map(|t| t.points().map(|p| p.to_array()).collect())
                .unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRecord {
    pub c: u32,
    pub labels: Vec<LineBundleLabel>,
    /// `bside[i][j] = [h0, h1, h2]` of `Hom(E_i, E_j)`.
    pub bside: Vec<Vec<[u64; 3]>>,
    /// Graded generator counts on the Morse side.
    pub aside: Vec<Vec<[u64; 3]>>,
    pub agree: bool,
}

/// Single-pair version of [`DimsRecord`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDimsRecord {
    pub from: LineBundleLabel,
    pub to: LineBundleLabel,
    pub bside: [u64; 3],
    pub aside: [u64; 3],
    /// Components skipped because their linearization is degenerate.
    pub degenerate: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub key: BasisKey,
    pub degree: Option<u32>,
    pub locus: GeometryRecord,
    #[serde(flatten)]
    pub report: MaxLocusReport,
}
