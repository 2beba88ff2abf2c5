//! Polynomial root finding by the Durand-Kerner (Weierstrass) iteration.
//!
//! Degrees here never exceed 8 (characteristic polynomials of the 4x4
//! monodromy matrices and small test systems), where the simultaneous
//! iteration is robust and deterministic.

use num_complex::Complex64;

type C64 = Complex64;

/// Roots of the monic polynomial with coefficients `[1, c1, .., cn]`.
///
/// Multiple roots converge linearly instead of quadratically; the iteration
/// budget below still takes them to ~1e-8 for the quartic case.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    assert!(n >= 1, "constant polynomial has no roots");
    assert!(
        (coeffs[0] - C64::new(1.0, 0.0)).norm() < 1e-12,
        "polynomial must be monic"
    );
    let eval = |z: C64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    // radius bound: 1 + max |c_i|
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| radius * seed.powu(k as u32 + 1))
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let zk = roots[k];
            let mut denom = C64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != k {
                    denom *= zk - zj;
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = eval(zk) / denom;
            roots[k] = zk - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * (1.0 + radius) {
            break;
        }
    }
    roots
}

fn derivative_coeffs(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    (0..n).map(|k| coeffs[k] * (n - k) as f64).collect()
}

fn eval_pair(coeffs: &[C64], z: C64) -> (C64, C64) {
    // Horner for value and derivative
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots with multiple-root clusters polished to full precision.
///
/// A root of multiplicity m extracted from a polynomial is only accurate to
/// ~eps^(1/m); but it is a simple, well-conditioned root of the (m-1)-th
/// derivative, so each detected cluster is re-solved there by Newton.
/// `cluster_tol` must sit between the multiple-root splitting radius and
/// the smallest genuine root separation.
pub fn polynomial_roots_polished(coeffs: &[C64], cluster_tol: f64) -> Vec<C64> {
    let roots = polynomial_roots(coeffs);
    let n = roots.len();
    let mut group = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = next;
        for j in i + 1..n {
            if group[j] == usize::MAX && (roots[i] - roots[j]).norm() < cluster_tol {
                group[j] = next;
            }
        }
        next += 1;
    }
    let mut out = roots.clone();
    for g in 0..next {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == g).collect();
        let m = members.len();
        let mut z: C64 = members.iter().map(|&i| roots[i]).sum::<C64>() / m as f64;
        let mut d = coeffs.to_vec();
        for _ in 1..m {
            d = derivative_coeffs(&d);
        }
        for _ in 0..60 {
            let (p, dp) = eval_pair(&d, z);
            if dp.norm() < 1e-300 {
                break;
            }
            let step = p / dp;
            z -= step;
            if step.norm() < 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
        for &i in &members {
            out[i] = z;
        }
    }
    out
}

/// Minimal-cost perfect matching distance between two multisets of complex
/// numbers (brute force over permutations; n <= 6).
pub fn multiset_match_max_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    assert!(n <= 6, "matching is brute-force; keep n small");
    let mut idx: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut idx, 0, &mut |perm| {
        let cost = (0..n)
            .map(|i| (a[i] - b[perm[i]]).norm())
            .fold(0.0, f64::max);
        if cost < best {
            best = cost;
        }
    });
    best
}

fn permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quartic_with_known_roots() {
        // (z-1)(z+2)(z-i)(z+i) = z^4 + z^3 - z^2 + z - 2
        let coeffs = vec![
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(1.0, 0.0),
            c(-2.0, 0.0),
        ];
        let roots = polynomial_roots(&coeffs);
        let expected = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        assert!(multiset_match_max_distance(&roots, &expected) < 1e-10);
    }

    #[test]
    fn double_root_accuracy() {
        // (z - 2)^2 (z + 1)^2 = z^4 - 2 z^3 - 3 z^2 + 4 z + 4
        let coeffs = vec![
            c(1.0, 0.0),
            c(-2.0, 0.0),
            c(-3.0, 0.0),
            c(4.0, 0.0),
            c(4.0, 0.0),
        ];
        let roots = polynomial_roots(&coeffs);
        let expected = [c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)];
        assert!(multiset_match_max_distance(&roots, &expected) < 1e-7);
    }
}
