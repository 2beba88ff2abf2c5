//! Exact matrices over Q(sqrt3, i) and over multivariate polynomials,
//! with division-free characteristic polynomials and Gaussian elimination.

use num_complex::Complex64;

use super::field::FieldElement;
use super::poly::{varset, MultiPoly, VarSet};
use crate::Error;

/// Dense matrix over Q(sqrt3, i).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![FieldElement::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x = &*x + y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x = &*x - y;
        }
        out
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * k;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = FieldElement::zero();
                for j in 0..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> FieldElement {
        assert!(self.is_square());
        let mut acc = FieldElement::zero();
        for i in 0..self.rows {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    pub fn map<F: Fn(&FieldElement) -> FieldElement>(&self, f: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entry-wise complex conjugate (the `i -> -i` automorphism).
    pub fn conj_i(&self) -> Self {
        self.map(|x| x.conj_i())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Evaluate every entry to double precision.
    pub fn eval(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].eval()).collect())
            .collect()
    }

    /// Monic characteristic polynomial `det(lambda I - M)` by the
    /// Faddeev-LeVerrier recurrence (division only by integers, so symbolic
    /// and number-field entries are both fine).
    ///
    /// Returns coefficients `[1, c1, ..., cn]` of
    /// `lambda^n + c1 lambda^(n-1) + ... + cn`.
    pub fn charpoly(&self) -> Result<Vec<FieldElement>, Error> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![FieldElement::one()];
        let mut m = self.clone();
        for k in 1..=n {
            let ck = -(&m.trace() / &FieldElement::from_int(k as i64));
            coeffs.push(ck.clone());
            if k < n {
                let mut shifted = m;
                for i in 0..n {
                    shifted[(i, i)] = &shifted[(i, i)] + &ck;
                }
                m = self.matmul(&shifted);
            }
        }
        Ok(coeffs)
    }

    pub fn det(&self) -> FieldElement {
        let coeffs = self.charpoly().expect("det of non-square matrix");
        let cn = coeffs.last().unwrap().clone();
        if self.rows % 2 == 0 {
            cn
        } else {
            -cn
        }
    }

    /// Row-reduce a copy, returning (rank, reduced matrix, pivot columns).
    fn row_echelon(&self) -> (usize, FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m[(row, j)].clone();
                    let b = m[(p, j)].clone();
                    m[(row, j)] = b;
                    m[(p, j)] = a;
                }
            }
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                m[(row, j)] = &m[(row, j)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in col..m.cols {
                        let sub = &m[(row, j)] * &factor;
                        m[(r, j)] = &m[(r, j)] - &sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (row, m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().0
    }

    /// Basis of the right kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let (_, rref, pivots) = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![FieldElement::zero(); self.cols];
            v[f] = FieldElement::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rref[(r, f)];
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse; errors on a singular matrix.
    pub fn inverse(&self) -> Result<FieldMatrix, Error> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = FieldElement::one();
        }
        let (rank, rref, _) = aug.row_echelon();
        if rank < n {
            return Err(Error::Singular("matrix is not invertible".into()));
        }
        let mut out = FieldMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = rref[(i, n + j)].clone();
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for FieldMatrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Evaluate a monic coefficient list at an exact point.
pub fn eval_poly_coeffs(coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = FieldElement::zero();
    for c in coeffs {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Render `[1, c1, .., cn]` as a polynomial string in `l`.
pub fn charpoly_string(coeffs: &[FieldElement]) -> String {
    let n = coeffs.len() - 1;
    let vs = varset(&["l"]);
    let l = MultiPoly::var(&vs, "l");
    let mut p = MultiPoly::zero(&vs);
    for (k, c) in coeffs.iter().enumerate() {
        p = p.add(&l.pow((n - k) as u32).scale(c));
    }
    p.to_string()
}

/// Dense matrix of multivariate polynomials (all entries share one VarSet).
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(vars: &VarSet, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![MultiPoly::zero(vars); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.data[0].vars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let vars = self.vars().clone();
        let mut out = Self::zeros(&vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> MultiPoly {
        assert!(self.is_square());
        let mut acc = MultiPoly::zero(self.vars());
        for i in 0..self.rows {
            acc = acc.add(&self[(i, i)]);
        }
        acc
    }

    pub fn map<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Faddeev-LeVerrier: coefficients `[1, c1, .., cn]` of
    /// `det(lambda I - M)`, each a polynomial in the matrix's variables.
    pub fn charpoly_coeffs(&self) -> Result<Vec<MultiPoly>, Error> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let vars = self.vars().clone();
        let one = FieldElement::one();
        let mut coeffs = vec![MultiPoly::constant(&vars, one)];
        let mut m = self.clone();
        for k in 1..=n {
            let ck = m
                .trace()
                .scale(&(-FieldElement::from_ratio(1, k as i64)));
            coeffs.push(ck.clone());
            if k < n {
                let mut shifted = m;
                for i in 0..n {
                    shifted[(i, i)] = shifted[(i, i)].add(&ck);
                }
                m = self.matmul(&shifted);
            }
        }
        Ok(coeffs)
    }

    /// Characteristic polynomial as a single polynomial in the extended
    /// variable set `vars + [lambda_name]`.
    pub fn charpoly(&self, lambda_name: &str) -> Result<MultiPoly, Error> {
        let coeffs = self.charpoly_coeffs()?;
        let mut names: Vec<&str> = self.vars().iter().map(|s| s.as_str()).collect();
        assert!(
            !names.contains(&lambda_name),
            "lambda variable collides with a matrix variable"
        );
        names.push(lambda_name);
        let ext = varset(&names);
        let lam = MultiPoly::var(&ext, lambda_name);
        let n = coeffs.len() - 1;
        let mut p = MultiPoly::zero(&ext);
        for (k, c) in coeffs.iter().enumerate() {
            p = p.add(&c.extend_vars(&ext).mul(&lam.pow((n - k) as u32)));
        }
        Ok(p)
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = MultiPoly;
    fn index(&self, (i, j): (usize, usize)) -> &MultiPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MultiPoly {
        &mut self.data[i * self.cols + j]
    }
}
