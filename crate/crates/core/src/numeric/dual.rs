//! Forward-mode automatic differentiation over complex scalars.
//!
//! `Dual<T>` carries one infinitesimal; nesting (`Dual<Dual<C64>>`) yields
//! exact second derivatives. Square roots take an explicit branch hint (a
//! plain complex number near the intended value), which is how the
//! energy-level root `p1 = K_-` keeps its branch under differentiation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

type C64 = Complex64;

/// Scalar interface shared by `Complex64` and nested duals.
pub trait CScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: C64) -> Self;
    fn zero() -> Self {
        Self::from_c64(C64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Self::from_c64(C64::new(1.0, 0.0))
    }
    fn from_f64(x: f64) -> Self {
        Self::from_c64(C64::new(x, 0.0))
    }
    /// The underlying complex value with all infinitesimals dropped.
    fn value(&self) -> C64;
    /// Square root on the branch closer to `hint`.
    fn sqrt_hinted(self, hint: C64) -> Self;
}

impl CScalar for C64 {
    fn from_c64(z: C64) -> Self {
        z
    }
    fn value(&self) -> C64 {
        *self
    }
    fn sqrt_hinted(self, hint: C64) -> Self {
        let s = self.sqrt();
        if (s - hint).norm() <= (-s - hint).norm() {
            s
        } else {
            -s
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

impl<T: CScalar> Dual<T> {
    pub fn constant(v: T) -> Self {
        Self { v, d: T::zero() }
    }
    /// Independent variable: value `v`, derivative 1.
    pub fn var(v: T) -> Self {
        Self { v, d: T::one() }
    }
}

impl<T: CScalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            v: self.v + rhs.v,
            d: self.d + rhs.d,
        }
    }
}

impl<T: CScalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            v: self.v - rhs.v,
            d: self.d - rhs.d,
        }
    }
}

impl<T: CScalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            v: self.v * rhs.v,
            d: self.v * rhs.d + self.d * rhs.v,
        }
    }
}

impl<T: CScalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let v = self.v / rhs.v;
        Self {
            v,
            d: (self.d - v * rhs.d) / rhs.v,
        }
    }
}

impl<T: CScalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            d: -self.d,
        }
    }
}

impl<T: CScalar> CScalar for Dual<T> {
    fn from_c64(z: C64) -> Self {
        Self::constant(T::from_c64(z))
    }
    fn value(&self) -> C64 {
        self.v.value()
    }
    fn sqrt_hinted(self, hint: C64) -> Self {
        let s = self.v.sqrt_hinted(hint);
        let two = T::from_f64(2.0);
        Self {
            v: s,
            d: self.d / (two * s),
        }
    }
}

/// Gradient of `f` at `x` (one dual pass per coordinate).
pub fn gradient<F>(f: F, x: &[C64]) -> Vec<C64>
where
    F: Fn(&[Dual<C64>]) -> Dual<C64>,
{
    (0..x.len())
        .map(|k| {
            let args: Vec<Dual<C64>> = x
                .iter()
                .enumerate()
                .map(|(i, &xi)| {
                    if i == k {
                        Dual::var(xi)
                    } else {
                        Dual::constant(xi)
                    }
                })
                .collect();
            f(&args).d
        })
        .collect()
}

/// Hessian of `f` at `x` via nested duals.
pub fn hessian<F>(f: F, x: &[C64]) -> Vec<Vec<C64>>
where
    F: Fn(&[Dual<Dual<C64>>]) -> Dual<Dual<C64>>,
{
    let n = x.len();
    let mut h = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in 0..n {
            let args: Vec<Dual<Dual<C64>>> = x
                .iter()
                .enumerate()
                .map(|(i, &xi)| {
                    let inner = if i == k {
                        Dual::var(xi)
                    } else {
                        Dual::constant(xi)
                    };
                    let outer_d = if i == j {
                        if i == k {
                            // d/dj of the inner-var slot
                            Dual {
                                v: C64::new(1.0, 0.0),
                                d: C64::new(0.0, 0.0),
                            }
                        } else {
                            Dual::constant(C64::new(1.0, 0.0))
                        }
                    } else {
                        Dual::constant(C64::new(0.0, 0.0))
                    };
                    Dual {
                        v: inner,
                        d: outer_d,
                    }
                })
                .collect();
            h[j][k] = f(&args).d.d;
        }
    }
    h
}
