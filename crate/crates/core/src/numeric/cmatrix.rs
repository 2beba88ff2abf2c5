//! Small dense complex matrices with the decompositions this crate needs:
//! LU determinant, eigenvalues via the characteristic polynomial, and
//! singular values by one-sided Jacobi. Everything is deterministic and
//! sized for 4x4 .. 12x12 work, which is all the monodromy layer uses.

use num_complex::Complex64;

use super::roots::polynomial_roots;

pub type C64 = Complex64;

#[derive(Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn flat(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += *y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= *y;
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= k;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let (p, pmax) = (col..n)
                .map(|r| (r, m[(r, col)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if pmax == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if p != col {
                for j in 0..n {
                    let tmp = m[(col, j)];
                    m[(col, j)] = m[(p, j)];
                    m[(p, j)] = tmp;
                }
                det = -det;
            }
            det *= m[(col, col)];
            let pivot = m[(col, col)];
            for r in col + 1..n {
                let f = m[(r, col)] / pivot;
                for j in col..n {
                    let sub = f * m[(col, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        det
    }

    /// Solve `self * X = B` by LU with partial pivoting.
    pub fn solve(&self, b: &CMat) -> Option<CMat> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut m = self.clone();
        let mut rhs = b.clone();
        for col in 0..n {
            let (p, pmax) = (col..n)
                .map(|r| (r, m[(r, col)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if pmax < 1e-300 {
                return None;
            }
            if p != col {
                for j in 0..n {
                    let tmp = m[(col, j)];
                    m[(col, j)] = m[(p, j)];
                    m[(p, j)] = tmp;
                }
                for j in 0..rhs.cols {
                    let tmp = rhs[(col, j)];
                    rhs[(col, j)] = rhs[(p, j)];
                    rhs[(p, j)] = tmp;
                }
            }
            let pivot = m[(col, col)];
            for r in col + 1..n {
                let f = m[(r, col)] / pivot;
                for j in col..n {
                    let sub = f * m[(col, j)];
                    m[(r, j)] -= sub;
                }
                for j in 0..rhs.cols {
                    let sub = f * rhs[(col, j)];
                    rhs[(r, j)] -= sub;
                }
            }
        }
        let mut x = CMat::zeros(n, rhs.cols);
        for j in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = rhs[(i, j)];
                for k in i + 1..n {
                    acc -= m[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / m[(i, i)];
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<CMat> {
        self.solve(&CMat::identity(self.rows))
    }

    /// Monic characteristic polynomial coefficients `[1, c1, .., cn]` by
    /// Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<C64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        let mut m = self.clone();
        for k in 1..=n {
            let ck = -m.trace() / k as f64;
            coeffs.push(ck);
            if k < n {
                let mut shifted = m;
                for i in 0..n {
                    shifted[(i, i)] += ck;
                }
                m = self.matmul(&shifted);
            }
        }
        coeffs
    }

    /// Osborne-style diagonal balancing with power-of-two factors (an exact
    /// similarity), which keeps characteristic-polynomial coefficients well
    /// conditioned for matrices inflated by conjugation.
    pub fn balanced(&self) -> CMat {
        let n = self.rows;
        let mut a = self.clone();
        for _ in 0..16 {
            let mut converged = true;
            for i in 0..n {
                let mut r = 0.0;
                let mut c = 0.0;
                for j in 0..n {
                    if j != i {
                        r += a[(i, j)].norm();
                        c += a[(j, i)].norm();
                    }
                }
                if r == 0.0 || c == 0.0 {
                    continue;
                }
                let target = (c / r).sqrt();
                let mut f = 1.0f64;
                while f < target * std::f64::consts::FRAC_1_SQRT_2 {
                    f *= 2.0;
                }
                while f > target * std::f64::consts::SQRT_2 {
                    f /= 2.0;
                }
                if f != 1.0 {
                    converged = false;
                    for j in 0..n {
                        a[(i, j)] *= f;
                    }
                    for j in 0..n {
                        a[(j, i)] /= f;
                    }
                }
            }
            if converged {
                break;
            }
        }
        a
    }

    /// Eigenvalues via the characteristic polynomial of the balanced matrix.
    pub fn eigenvalues(&self) -> Vec<C64> {
        polynomial_roots(&self.balanced().charpoly())
    }

    /// Eigenvalues with multiple-root clusters polished to full precision.
    pub fn eigenvalues_polished(&self, cluster_tol: f64) -> Vec<C64> {
        super::roots::polynomial_roots_polished(&self.balanced().charpoly(), cluster_tol)
    }

    /// Singular values in descending order, by one-sided Jacobi.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut a = self.clone();
        let n = a.cols;
        // column of a as vector helpers
        let col_dot = |m: &CMat, p: usize, q: usize| -> C64 {
            (0..m.rows).map(|i| m[(i, p)].conj() * m[(i, q)]).sum()
        };
        for _sweep in 0..40 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in p + 1..n {
                    let app = col_dot(&a, p, p).re;
                    let aqq = col_dot(&a, q, q).re;
                    let apq = col_dot(&a, p, q);
                    let apq_norm = apq.norm();
                    off = off.max(apq_norm);
                    if apq_norm <= 1e-300 || apq_norm <= 1e-17 * (app * aqq).sqrt() {
                        continue;
                    }
                    // 2x2 Hermitian eigenrotation for [[app, apq], [conj(apq), aqq]]
                    let phase = apq / apq_norm;
                    let tau = (aqq - app) / (2.0 * apq_norm);
                    let t = tau.signum_or_one() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..a.rows {
                        let vp = a[(i, p)];
                        // rotate against the de-phased q column so the pair
                        // Gram entry becomes real before the real rotation
                        let vq = phase.conj() * a[(i, q)];
                        a[(i, p)] = c * vp - s * vq;
                        a[(i, q)] = s * vp + c * vq;
                    }
                }
            }
            if off < 1e-30 {
                break;
            }
        }
        let mut svs: Vec<f64> = (0..n)
            .map(|j| (0..a.rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        svs.sort_by(|x, y| y.total_cmp(x));
        svs
    }

    /// Numerical rank with an absolute threshold on singular values.
    pub fn rank_with_threshold(&self, threshold: f64) -> usize {
        self.singular_values().iter().filter(|&&s| s > threshold).count()
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:+.6e}{:+.6e}i", self[(i, j)].re, self[(i, j)].im))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn det_and_inverse() {
        let m = CMat::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(1.0, -1.0), c(3.0, 0.0)],
        ]);
        // det = 6 - i(1 - i) = 6 - i - 1 = 5 - i
        let d = m.det();
        assert!((d - c(5.0, -1.0)).norm() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).sub(&CMat::identity(2)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        // companion-free check: triangular matrix
        let m = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(5.0, 2.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-2.0, 1.0), c(7.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, -0.5)],
        ]);
        let mut eigs = m.eigenvalues();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        let expected = [c(-2.0, 1.0), c(0.5, -0.5), c(1.0, 0.0)];
        for (e, x) in eigs.iter().zip(expected) {
            assert!((e - x).norm() < 1e-10, "{e} vs {x}");
        }
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        let m = CMat::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(3.0, 1.0), c(1.0, 0.0)],
            vec![c(2.0, -2.0), c(0.0, 0.0), c(1.0, 1.0)],
        ]);
        let svs = m.singular_values();
        // cross-check: squared singular values are eigenvalues of A^H A
        let gram = m.adjoint().matmul(&m);
        let mut gram_eigs: Vec<f64> = gram.eigenvalues().iter().map(|z| z.re).collect();
        gram_eigs.sort_by(|a, b| b.total_cmp(a));
        for (s, g) in svs.iter().zip(gram_eigs) {
            assert!((s * s - g).abs() < 1e-9 * (1.0 + g.abs()), "{s} vs {g}");
        }
        // Frobenius identity
        let fro: f64 = svs.iter().map(|s| s * s).sum();
        assert!((fro - m.norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn rank_detection() {
        // rank-1 matrix with a clean gap
        let m = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        let svs = m.singular_values();
        assert!(svs[1] < 1e-14 && svs[0] > 1.0);
        assert_eq!(m.rank_with_threshold(1e-8), 1);
    }
}
