//! Line bundles `O(a,b) = O(a D24 + b D12)` on `F_k`: monomial sections, toric
//! sheaf cohomology and exceptional collections.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::Divisor;

/// Names the line bundle `O(a,b)` and, on the mirror side, the Lagrangian `L(a,b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LineBundleLabel {
    pub a: i64,
    pub b: i64,
}

impl LineBundleLabel {
    pub const TRIVIAL: LineBundleLabel = LineBundleLabel { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn is_trivial(self) -> bool {
        self == Self::TRIVIAL
    }
}

impl From<[i64; 2]> for LineBundleLabel {
    fn from(v: [i64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<LineBundleLabel> for [i64; 2] {
    fn from(l: LineBundleLabel) -> Self {
        [l.a, l.b]
    }
}

impl Add for LineBundleLabel {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LineBundleLabel {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for LineBundleLabel {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl fmt::Display for LineBundleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Exponent vector of a monomial section and index of an intersection component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeIndex {
    pub i1: i64,
    pub i2: i64,
}

impl LatticeIndex {
    pub const ZERO: LatticeIndex = LatticeIndex { i1: 0, i2: 0 };

    pub const fn new(i1: i64, i2: i64) -> Self {
        Self { i1, i2 }
    }
}

/// Row-major order: by `i2`, then by `i1`.
impl Ord for LatticeIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.i2, self.i1).cmp(&(other.i2, other.i1))
    }
}

impl PartialOrd for LatticeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i64; 2]> for LatticeIndex {
    fn from(v: [i64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<LatticeIndex> for [i64; 2] {
    fn from(i: LatticeIndex) -> Self {
        [i.i1, i.i2]
    }
}

impl Add for LatticeIndex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.i1 + o.i1, self.i2 + o.i2)
    }
}

impl Sub for LatticeIndex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.i1 - o.i1, self.i2 - o.i2)
    }
}

impl Neg for LatticeIndex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.i1, -self.i2)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i1, self.i2)
    }
}

/// Complete fan of `F_k`, rays in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub k: u32,
    pub rays: Vec<(Divisor, [i64; 2])>,
}

impl Fan {
    pub fn hirzebruch(k: u32) -> Self {
        assert!(k >= 1, "Hirzebruch index must be positive");
        Self {
            k,
            rays: Divisor::ALL.iter().map(|&d| (d, d.ray(k))).collect(),
        }
    }

    /// Coefficient of `O(a,b)` on each ray, in ray order.
    fn coefficients(&self, label: LineBundleLabel) -> Vec<i64> {
        self.rays
            .iter()
            .map(|(d, _)| match d {
                Divisor::D24 => label.a,
                Divisor::D12 => label.b,
                _ => 0,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
}

impl CohomologyProfile {
    pub fn new(h0: u64, h1: u64, h2: u64) -> Self {
        Self { h0, h1, h2 }
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.h0, self.h1, self.h2]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    pub fn is_zero(&self) -> bool {
        self.as_array() == [0, 0, 0]
    }
}

impl Add for CohomologyProfile {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.h0 + o.h0, self.h1 + o.h1, self.h2 + o.h2)
    }
}

/// Exponents `I` of the monomial sections of `O(a,b)`:
/// `0 <= i2 <= b` and `0 <= i1 <= a + k (b - i2)`, ordered by `(i2, i1)`.
pub fn section_generators(k: u32, label: LineBundleLabel) -> Vec<LatticeIndex> {
    let k = k as i64;
    let mut out = Vec::new();
    for i2 in 0..=label.b.max(-1) {
        let top = label.a + k * (label.b - i2);
        for i1 in 0..=top.max(-1) {
            out.push(LatticeIndex::new(i1, i2));
        }
    }
    out
}

/// Number of global sections of `O(a,b)`.
pub fn dim_sections(k: u32, label: LineBundleLabel) -> u64 {
    let (a, b, k) = (label.a, label.b, k as i64);
    if a >= 0 && b >= 0 {
        ((b + 1) * (2 * a + 2 + k * b) / 2) as u64
    } else {
        section_generators(k as u32, label).len() as u64
    }
}

/// Contribution of one character `m` to the cohomology of `O(label)`.
fn character_contribution(fan: &Fan, coeffs: &[i64], m: [i64; 2]) -> CohomologyProfile {
    let negative: Vec<bool> = fan
        .rays
        .iter()
        .zip(coeffs)
        .map(|((_, u), &c)| m[0] * u[0] + m[1] * u[1] < -c)
        .collect();
    let n = negative.len();
    let count = negative.iter().filter(|&&z| z).count();
    if count == 0 {
        return CohomologyProfile::new(1, 0, 0);
    }
    if count == n {
        return CohomologyProfile::new(0, 0, 1);
    }
    // Circular runs: count positions where a run of negative rays starts.
    let components = (0..n)
        .filter(|&i| negative[i] && !negative[(i + n - 1) % n])
        .count() as u64;
    CohomologyProfile::new(0, components - 1, 0)
}

/// Cohomology of `O(label)` summed over characters in `[-r, r]^2`, together
/// with the part coming from the outer shell `max(|m1|,|m2|) = r`.
pub fn cohomology_in_box(
    k: u32,
    label: LineBundleLabel,
    r: i64,
) -> (CohomologyProfile, CohomologyProfile) {
    let fan = Fan::hirzebruch(k);
    let coeffs = fan.coefficients(label);
    (-r..=r)
        .into_par_iter()
        .map(|m1| {
            let mut total = CohomologyProfile::default();
            let mut shell = CohomologyProfile::default();
            for m2 in -r..=r {
                let c = character_contribution(&fan, &coeffs, [m1, m2]);
                total = total + c;
                if m1.abs() == r || m2.abs() == r {
                    shell = shell + c;
                }
            }
            (total, shell)
        })
        .reduce(
            || (CohomologyProfile::default(), CohomologyProfile::default()),
            |x, y| (x.0 + y.0, x.1 + y.1),
        )
}

/// Initial half-width of the character scan box.
pub fn scan_radius(k: u32, label: LineBundleLabel) -> i64 {
    label.a.abs() + k as i64 * label.b.abs() + 2
}

/// `H^*(F_k, O(a,b))` by the character-by-character toric recipe. The scan box
/// grows until its outer shell contributes nothing.
pub fn cohomology(k: u32, label: LineBundleLabel) -> CohomologyProfile {
    let mut r = scan_radius(k, label);
    loop {
        let (total, shell) = cohomology_in_box(k, label, r);
        if shell.is_zero() {
            return total;
        }
        r *= 2;
    }
}

/// `Ext^*(O(from), O(to)) = H^*(O(to - from))` on `F_1`.
pub fn hom_cohomology(from: LineBundleLabel, to: LineBundleLabel) -> CohomologyProfile {
    cohomology(1, to - from)
}

/// `(O, O(1,0), O(c,1), O(1+c,1))`.
pub fn exceptional_collection(c: u32) -> [LineBundleLabel; 4] {
    let c = c as i64;
    [
        LineBundleLabel::new(0, 0),
        LineBundleLabel::new(1, 0),
        LineBundleLabel::new(c, 1),
        LineBundleLabel::new(1 + c, 1),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCheck {
    pub strong_exceptional: bool,
    /// `h0[i][j] = dim Hom(E_i, E_j)`.
    pub h0: Vec<Vec<u64>>,
    pub profiles: Vec<Vec<CohomologyProfile>>,
}

pub fn check_strong_exceptional(labels: &[LineBundleLabel]) -> ExceptionalCheck {
    assert!(!labels.is_empty(), "collection must be nonempty");
    let profiles: Vec<Vec<CohomologyProfile>> = labels
        .iter()
        .map(|&from| labels.iter().map(|&to| hom_cohomology(from, to)).collect())
        .collect();
    let mut ok = true;
    for (i, row) in profiles.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            ok &= match i.cmp(&j) {
                std::cmp::Ordering::Equal => p.as_array() == [1, 0, 0],
                std::cmp::Ordering::Less => p.h1 == 0 && p.h2 == 0,
                std::cmp::Ordering::Greater => p.is_zero(),
            };
        }
    }
    let h0 = profiles
        .iter()
        .map(|row| row.iter().map(|p| p.h0).collect())
        .collect();
    ExceptionalCheck {
        strong_exceptional: ok,
        h0,
        profiles,
    }
}
