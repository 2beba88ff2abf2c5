//! Adaptive Dormand-Prince 5(4) integration of complex ODE systems.
//!
//! States are flat complex vectors; the right-hand side is any closure of
//! the real path parameter. Fixed controller constants and a deterministic
//! initial step make repeated runs bit-identical.

use num_complex::Complex64;

use crate::Error;

type C64 = Complex64;

const A: [[f64; 6]; 6] = [
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
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/ds = f(s, y)` from `s0` to `s1` with embedded 5(4) error
/// control at the given relative/absolute tolerance.
pub fn integrate<F>(f: F, s0: f64, s1: f64, y0: Vec<C64>, rtol: f64, atol: f64) -> Result<Vec<C64>, Error>
where
    F: Fn(f64, &[C64]) -> Vec<C64>,
{
    let span = s1 - s0;
    if span == 0.0 {
        return Ok(y0);
    }
    let n = y0.len();
    let mut s = s0;
    let mut y = y0;
    let mut h = span / 100.0;
    let h_min = span.abs() * 1e-14;
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    k[0] = f(s, &y);
    let mut steps = 0usize;
    while (s1 - s) * span.signum() > 0.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::Numerical("integration step budget exhausted".into()));
        }
        if (s + h - s1) * span.signum() > 0.0 {
            h = s1 - s;
        }
        if h.abs() < h_min {
            return Err(Error::Numerical(
                "step size underflow (path too close to a singular point?)".into(),
            ));
        }
        for stage in 0..6 {
            let mut ys: Vec<C64> = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage + 1] = f(s + C[stage] * h, &ys);
        }
        let mut y5 = y.clone();
        let mut y4 = y.clone();
        for (j, kj) in k.iter().enumerate() {
            for i in 0..n {
                y5[i] += h * B5[j] * kj[i];
                y4[i] += h * B4[j] * kj[i];
            }
        }
        // component-scaled RMS error
        let mut err2 = 0.0;
        for i in 0..n {
            let sc = atol + rtol * y[i].norm().max(y5[i].norm());
            let e = (y5[i] - y4[i]).norm() / sc;
            err2 += e * e;
        }
        let err = (err2 / n as f64).sqrt().max(1e-300);
        if err <= 1.0 {
            s += h;
            y = y5;
            k[0] = k[6].clone(); // FSAL
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h *= fac;
            k[0] = f(s, &y);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_exponential() {
        // y' = (1 + i) y, y(0) = 1 -> y(1) = e^{1+i}
        let lam = C64::new(1.0, 1.0);
        let y = integrate(
            |_s, y| vec![lam * y[0]],
            0.0,
            1.0,
            vec![C64::new(1.0, 0.0)],
            1e-12,
            1e-12,
        )
        .unwrap();
        let expected = lam.exp();
        assert!((y[0] - expected).norm() < 1e-10);
    }

    #[test]
    fn winding_integral_around_origin() {
        // integrate d(log z)/ds along the unit circle: result 2 pi i
        let y = integrate(
            |s, _y| {
                let ang = 2.0 * std::f64::consts::PI * s;
                let z = C64::new(ang.cos(), ang.sin());
                let dz = C64::new(0.0, 2.0 * std::f64::consts::PI) * z;
                vec![dz / z]
            },
            0.0,
            1.0,
            vec![C64::new(0.0, 0.0)],
            1e-12,
            1e-12,
        )
        .unwrap();
        assert!((y[0] - C64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-10);
    }

    #[test]
    fn deterministic_repeat() {
        let run = || {
            integrate(
                |s, y| vec![y[0] * C64::new(-s, 0.4)],
                0.0,
                2.0,
                vec![C64::new(1.0, -0.3)],
                1e-12,
                1e-12,
            )
            .unwrap()[0]
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
    }
}
