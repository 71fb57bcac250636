//! Complex FFT of arbitrary length and the type-I discrete sine transform
//! built on it.
//!
//! Power-of-two lengths use an iterative radix-2 transform; every other
//! length goes through Bluestein's chirp-z reformulation onto a padded
//! power-of-two transform.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `exp(i * theta)`.
    pub fn cis(theta: f64) -> Self {
        Self { re: math::cos(theta), im: math::sin(theta) }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn scale(self, s: f64) -> Self {
        Self { re: self.re * s, im: self.im * s }
    }
}

impl Add for Complex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Complex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Complex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Precomputed forward transform of one length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    kind: PlanKind,
}

#[derive(Debug, Clone)]
enum PlanKind {
    Radix2 { twiddles: Vec<Complex> },
    Bluestein { chirp: Vec<Complex>, kernel_hat: Vec<Complex>, inner: Box<FftPlan> },
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        if len.is_power_of_two() {
            let twiddles = (0..len / 2).map(|k| Complex::cis(-2.0 * PI * k as f64 / len as f64)).collect();
            return Self { len, kind: PlanKind::Radix2 { twiddles } };
        }
        let m = (2 * len - 1).next_power_of_two();
        let inner = FftPlan::new(m);
        // k^2 mod 2n keeps the chirp angle small and exact for large k.
        let chirp: Vec<Complex> = (0..len)
            .map(|k| {
                let k2 = (k as u128 * k as u128 % (2 * len as u128)) as f64;
                Complex::cis(-PI * k2 / len as f64)
            })
            .collect();
        let mut kernel = vec![Complex::ZERO; m];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        inner.forward(&mut kernel);
        Self { len, kind: PlanKind::Bluestein { chirp, kernel_hat: kernel, inner: Box::new(inner) } }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place forward transform `X_k = sum_j x_j exp(-2 pi i jk / n)`.
    pub fn forward(&self, data: &mut [Complex]) {
        assert_eq!(data.len(), self.len);
        match &self.kind {
            PlanKind::Radix2 { twiddles } => radix2(data, twiddles),
            PlanKind::Bluestein { chirp, kernel_hat, inner } => {
                let m = inner.len;
                let mut a = vec![Complex::ZERO; m];
                for (k, (x, c)) in data.iter().zip(chirp).enumerate() {
                    a[k] = *x * *c;
                }
                inner.forward(&mut a);
                for (v, h) in a.iter_mut().zip(kernel_hat) {
                    *v = *v * *h;
                }
                inner.inverse_unscaled(&mut a);
                let scale = 1.0 / m as f64;
                for (k, out) in data.iter_mut().enumerate() {
                    *out = (a[k] * chirp[k]).scale(scale);
                }
            }
        }
    }

    fn inverse_unscaled(&self, data: &mut [Complex]) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward(data);
        for v in data.iter_mut() {
            *v = v.conj();
        }
    }
}

fn radix2(data: &mut [Complex], twiddles: &[Complex]) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut size = 2;
    while size <= n {
        let half = size / 2;
        let stride = n / size;
        for start in (0..n).step_by(size) {
            for k in 0..half {
                let t = data[start + k + half] * twiddles[k * stride];
                let u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
        size *= 2;
    }
}

/// Type-I discrete sine transform of a fixed length `n`:
/// `X_k = sum_{j=1..n} x_j sin(pi j k / (n + 1))`, `k = 1..n`.
///
/// Applying it twice multiplies by `(n + 1) / 2`.
#[derive(Debug, Clone)]
pub struct Dst1 {
    n: usize,
    plan: FftPlan,
}

impl Dst1 {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "DST length must be positive");
        Self { n, plan: FftPlan::new(2 * (n + 1)) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Transforms `data` in place using `scratch` of length `2(n+1)`.
    pub fn apply(&self, data: &mut [f64], scratch: &mut Vec<Complex>) {
        let n = self.n;
        assert_eq!(data.len(), n);
        let m = 2 * (n + 1);
        scratch.clear();
        scratch.resize(m, Complex::ZERO);
        for (j, &v) in data.iter().enumerate() {
            scratch[j + 1] = Complex::new(v, 0.0);
            scratch[m - 1 - j] = Complex::new(-v, 0.0);
        }
        self.plan.forward(scratch);
        for (k, out) in data.iter_mut().enumerate() {
            *out = -0.5 * scratch[k + 1].im;
        }
    }
}
