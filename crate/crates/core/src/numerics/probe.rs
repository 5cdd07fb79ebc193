//! Linear stable-manifold analysis at a zero of a planar vector field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::LinearizedField;
use crate::geometry::MomentPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("non-hyperbolic transverse direction at ({0}, {1})")]
    NonHyperbolic(f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableProbe {
    /// Number of stable directions, excluding directions along which the zero set continues.
    pub dimension: u32,
    /// Unit stable eigenvectors.
    pub directions: Vec<[f64; 2]>,
    pub eigenvalues: Vec<f64>,
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Real eigenpairs of a 2x2 matrix, or `None` when the eigenvalues are complex.
pub fn eigen_2x2(j: [[f64; 2]; 2]) -> Option<[(f64, [f64; 2]); 2]> {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    // avoid cancellation for the smaller eigenvalue
    let big = if tr >= 0.0 {
        tr / 2.0 + root
    } else {
        tr / 2.0 - root
    };
    let small = if big != 0.0 { det / big } else { 0.0 };
    let vec_for = |lam: f64| -> [f64; 2] {
        let (a, b, c, d) = (j[0][0] - lam, j[0][1], j[1][0], j[1][1] - lam);
        let v1 = [b, -a];
        let v2 = [-d, c];
        let v = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) {
            v1
        } else {
            v2
        };
        if v[0].hypot(v[1]) == 0.0 {
            // scalar multiple of the identity
            [1.0, 0.0]
        } else {
            unit(v)
        }
    };
    let mut pairs = [(big, vec_for(big)), (small, vec_for(small))];
    if pairs[0].0 > pairs[1].0 {
        pairs.swap(0, 1);
    }
    if disc == 0.0 && j[0][1] == 0.0 && j[1][0] == 0.0 {
        pairs[0].1 = [1.0, 0.0];
        pairs[1].1 = [0.0, 1.0];
    }
    Some(pairs)
}

/// Dimension and tangent directions of the stable manifold of `v` for the flow
/// `x' = X(x)`. A zero eigenvalue is accepted only when the zero set of the field
/// continues along its eigenvector (a clean critical segment).
pub fn stable_manifold_probe<F: LinearizedField>(
    field: &F,
    v: &MomentPoint<f64>,
) -> Result<StableProbe, ProbeError> {
    let x = v.to_array();
    let j = field.jacobian(&x);
    let scale = j
        .iter()
        .flatten()
        .fold(0.0f64, |m, e| m.max(e.abs()))
        .max(1.0);
    let Some(pairs) = eigen_2x2(j) else {
        let tr = j[0][0] + j[1][1];
        let dimension = if tr < 0.0 { 2 } else { 0 };
        return Ok(StableProbe {
            dimension,
            directions: if dimension == 2 {
                vec![[1.0, 0.0], [0.0, 1.0]]
            } else {
                vec![]
            },
            eigenvalues: vec![tr / 2.0, tr / 2.0],
        });
    };
    let mut directions = Vec::new();
    let mut eigenvalues = Vec::new();
    for (lam, e) in pairs {
        if lam.abs() <= 1e-12 * scale {
            let h = 1e-4;
            let along = field.eval(&[x[0] + h * e[0], x[1] + h * e[1]]);
            if along[0].hypot(along[1]) > 1e-10 {
                return Err(ProbeError::NonHyperbolic(x[0], x[1]));
            }
            continue;
        }
        eigenvalues.push(lam);
        if lam < 0.0 {
            directions.push(e);
        }
    }
    Ok(StableProbe {
        dimension: directions.len() as u32,
        directions,
        eigenvalues,
    })
}
