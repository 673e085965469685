//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The error estimate follows the QUADPACK `qk15` heuristic. Integrands may be
//! real or complex valued; anything implementing [`QuadValue`] works.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 4000,
        }
    }

    pub const fn with_max_intervals(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-13, 1e-11)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (1.0f64).min((200.0 * err / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_breaks(f, &[a, b], tol)
}

/// Integrate `f` over `[points[0], points[last]]`, starting from the partition
/// given by `points` (which must be nondecreasing). Known kinks and scale
/// changes belong in `points`.
pub fn integrate_breaks<T, F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if points.len() < 2 {
        return Err(Error::Empty("quadrature partition"));
    }
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if !(w[1] >= w[0]) {
            return Err(Error::Unsorted(1));
        }
        if w[1] > w[0] {
            let (value, error) = kronrod15(&mut f, w[0], w[1]);
            heap.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    let mut frozen: Vec<Segment<T>> = Vec::new();
    loop {
        let (value, error) = totals(heap.iter().chain(frozen.iter()));
        let target = tol.abs.max(tol.rel * value.magnitude());
        if error <= target || heap.is_empty() {
            return Ok(Estimate {
                value,
                error,
                intervals: heap.len() + frozen.len(),
            });
        }
        if heap.len() + frozen.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                estimate: value.magnitude(),
                error,
                requested: target,
                intervals: heap.len() + frozen.len(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs());
        if (worst.b - worst.a) <= 8.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            // cannot be resolved further in floating point
            frozen.push(worst);
            continue;
        }
        let (lv, le) = kronrod15(&mut f, worst.a, mid);
        let (rv, re) = kronrod15(&mut f, mid, worst.b);
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
}

fn totals<'a, T: QuadValue + 'a>(segments: impl Iterator<Item = &'a Segment<T>>) -> (T, f64) {
    let mut value = T::zero();
    let mut error = 0.0;
    for s in segments {
        value = value + s.value;
        error += s.error;
    }
    (value, error)
}

/// Integrate `f` over `[a, ∞)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<T, F>(mut f: F, a: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate(
        |t: f64| {
            let s = 1.0 - t;
            let x = a + t / s;
            if !x.is_finite() {
                T::zero()
            } else {
                f(x) * (1.0 / (s * s))
            }
        },
        0.0,
        1.0,
        tol,
    )
}
