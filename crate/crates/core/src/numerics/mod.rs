//! Numerical kernels: flow integration, maximization over the polytope and
//! linear stable-manifold analysis.

pub mod flow;
pub mod maximize;
pub mod probe;
pub mod rk;

pub use flow::{integrate_flow, Direction, FlowOptions, Termination, Trajectory};
pub use maximize::{maximize_on_polytope, MaximizeOptions, MaximizeResult};
pub use probe::{stable_manifold_probe, ProbeError, StableProbe};
pub use rk::{dopri_step, integrate_fixed, DormandPrince};

/// An autonomous vector field on `R^N`.
pub trait VectorField<T, const N: usize>: Sync {
    fn eval(&self, x: &[T; N]) -> [T; N];
}

/// A planar field with a known Jacobian.
pub trait LinearizedField: VectorField<f64, 2> {
    fn jacobian(&self, x: &[f64; 2]) -> [[f64; 2]; 2];
}

/// The zero field, whose flow is stationary.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroField;

impl VectorField<f64, 2> for ZeroField {
    fn eval(&self, _: &[f64; 2]) -> [f64; 2] {
        [0.0, 0.0]
    }
}

impl LinearizedField for ZeroField {
    fn jacobian(&self, _: &[f64; 2]) -> [[f64; 2]; 2] {
        [[0.0, 0.0], [0.0, 0.0]]
    }
}
