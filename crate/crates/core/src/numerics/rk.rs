//! Dormand-Prince 5(4) for autonomous systems `x' = f(x)` with a fixed state size.

use num_traits::Float;

use crate::scalar::Real;

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand-Prince step of size `h`: the fifth-order solution and the
/// embedded error estimate.
pub fn dopri_step<T: Real, const N: usize, F>(f: &F, x: &[T; N], h: T) -> ([T; N], [T; N])
where
    F: Fn(&[T; N]) -> [T; N],
{
    let mut k = [[T::zero(); N]; 7];
    k[0] = f(x);
    for s in 1..7 {
        let mut y = *x;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = T::lit(A[s][j]);
            if a != T::zero() {
                for i in 0..N {
                    y[i] = y[i] + h * a * kj[i];
                }
            }
        }
        // the seventh stage is evaluated at the new solution (FSAL)
        if s == 6 {
            let fx = f(&y);
            k[6] = fx;
            let mut err = [T::zero(); N];
            for i in 0..N {
                for (j, kj) in k.iter().enumerate() {
                    err[i] = err[i] + h * T::lit(E[j]) * kj[i];
                }
            }
            return (y, err);
        }
        k[s] = f(&y);
    }
    unreachable!()
}

/// Integrates with `n` equal steps; used for convergence-order checks.
pub fn integrate_fixed<T: Real, const N: usize, F>(f: &F, x0: [T; N], t_end: T, n: usize) -> [T; N]
where
    F: Fn(&[T; N]) -> [T; N],
{
    let h = t_end / T::int(n as i64);
    let mut x = x0;
    for _ in 0..n {
        x = dopri_step(f, &x, h).0;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    ReachedEnd,
    Stopped,
    StepLimit,
    StepTooSmall,
}

#[derive(Clone, Debug)]
pub struct Solution<T, const N: usize> {
    pub times: Vec<T>,
    pub states: Vec<[T; N]>,
    pub status: SolveStatus,
}

/// Adaptive driver with mixed absolute/relative local error control.
#[derive(Clone, Debug)]
pub struct DormandPrince<T> {
    pub rtol: T,
    pub atol: T,
    pub h_init: T,
    pub h_min: T,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Real> DormandPrince<T> {
    pub fn new(tol: T) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_init: T::lit(1e-3),
            h_min: T::lit(1e-14),
            h_max: T::lit(1.0),
            max_steps: 100_000,
        }
    }

    /// Integrates from `t = 0` to `t_end` (which may be infinite). The observer
    /// sees every accepted state and may stop the integration; the stopping
    /// state is kept in the solution.
    pub fn solve<const N: usize, F, O>(
        &self,
        f: F,
        x0: [T; N],
        t_end: T,
        mut observer: O,
    ) -> Solution<T, N>
    where
        F: Fn(&[T; N]) -> [T; N],
        O: FnMut(T, &[T; N]) -> Control,
    {
        let mut times = vec![T::zero()];
        let mut states = vec![x0];
        if observer(T::zero(), &x0) == Control::Stop {
            return Solution {
                times,
                states,
                status: SolveStatus::Stopped,
            };
        }
        let mut t = T::zero();
        let mut x = x0;
        let mut h = self.h_init;
        let safety = T::lit(0.9);
        let fifth = T::lit(0.2);
        for _ in 0..self.max_steps {
            if t >= t_end {
                return Solution {
                    times,
                    states,
                    status: SolveStatus::ReachedEnd,
                };
            }
            let h_step = Float::min(h, t_end - t);
            let (y, e) = dopri_step(&f, &x, h_step);
            let mut err = T::zero();
            for i in 0..N {
                let scale = self.atol + self.rtol * Float::max(Float::abs(x[i]), Float::abs(y[i]));
                err = Float::max(err, Float::abs(e[i]) / scale);
            }
            if !err.is_finite() {
                h = h_step * T::lit(0.1);
                if h < self.h_min {
                    break;
                }
                continue;
            }
            let factor = if err == T::zero() {
                T::lit(5.0)
            } else {
                Float::min(
                    T::lit(5.0),
                    Float::max(T::lit(0.2), safety * Float::powf(err, -fifth)),
                )
            };
            if err <= T::one() {
                t = t + h_step;
                x = y;
                times.push(t);
                states.push(x);
                h = Float::min(h_step * factor, self.h_max);
                if observer(t, &x) == Control::Stop {
                    return Solution {
                        times,
                        states,
                        status: SolveStatus::Stopped,
                    };
                }
            } else {
                h = h_step * factor;
                if h < self.h_min {
                    return Solution {
                        times,
                        states,
                        status: SolveStatus::StepTooSmall,
                    };
                }
            }
        }
        let status = if t >= t_end {
            SolveStatus::ReachedEnd
        } else {
            SolveStatus::StepLimit
        };
        Solution {
            times,
            states,
            status,
        }
    }
}
