//! Linear differential operators on polynomial rings.
//!
//! A `LinearField` is a vector field whose component on `d/dx_j` is a linear
//! form `sum_i m[j][i] * x_i`; the coefficients may themselves be symbolic
//! (polynomials in non-`x` variables of the ambient ring). Applying one to a
//! polynomial is a derivation, and the commutator of two linear fields is
//! again linear with matrix `N M - M N`.

use super::poly::{MultiPoly, VarSet};
use crate::Error;

#[derive(Clone)]
pub struct LinearField {
    /// Ambient polynomial ring (contains both the x-variables and any symbols).
    pub vars: VarSet,
    /// Names of the variables being differentiated, in matrix order.
    pub x_names: Vec<String>,
    /// Coefficient matrix: component j of the field is `sum_i mat[j][i] x_i`.
    pub mat: Vec<Vec<MultiPoly>>,
}

impl LinearField {
    pub fn new(vars: &VarSet, x_names: &[&str], mat: Vec<Vec<MultiPoly>>) -> Self {
        let n = x_names.len();
        assert_eq!(mat.len(), n, "field matrix must be square in the x-variables");
        assert!(mat.iter().all(|row| row.len() == n));
        Self {
            vars: vars.clone(),
            x_names: x_names.iter().map(|s| s.to_string()).collect(),
            mat,
        }
    }

    /// The component polynomial `sum_i mat[j][i] * x_i` on `d/dx_j`.
    pub fn component(&self, j: usize) -> MultiPoly {
        let mut acc = MultiPoly::zero(&self.vars);
        for (i, name) in self.x_names.iter().enumerate() {
            let xi = MultiPoly::var(&self.vars, name);
            acc = acc.add(&self.mat[j][i].mul(&xi));
        }
        acc
    }

    /// Apply the derivation: `sum_j component_j * dp/dx_j`.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly, Error> {
        if *p.vars != *self.vars {
            return Err(Error::Shape(format!(
                "polynomial variables {:?} do not match field variables {:?}",
                p.vars, self.vars
            )));
        }
        let mut acc = MultiPoly::zero(&self.vars);
        for (j, name) in self.x_names.iter().enumerate() {
            let dp = p.partial(name);
            if dp.is_zero() {
                continue;
            }
            acc = acc.add(&self.component(j).mul(&dp));
        }
        Ok(acc)
    }

    /// Commutator `[self, other]` as a linear field.
    ///
    /// For linear fields v_M, v_N one has [v_M, v_N] = v_{NM - MN}.
    pub fn commutator(&self, other: &Self) -> Self {
        assert_eq!(self.x_names, other.x_names, "commutator over different variables");
        let n = self.x_names.len();
        let zero = MultiPoly::zero(&self.vars);
        let mut out = vec![vec![zero; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = MultiPoly::zero(&self.vars);
                for k in 0..n {
                    acc = acc.add(&other.mat[i][k].mul(&self.mat[k][j]));
                    acc = acc.sub(&self.mat[i][k].mul(&other.mat[k][j]));
                }
                out[i][j] = acc;
            }
        }
        Self {
            vars: self.vars.clone(),
            x_names: self.x_names.clone(),
            mat: out,
        }
    }

    pub fn scale_rational(&self, p: i64, q: i64) -> Self {
        use super::field::FieldElement;
        let k = FieldElement::from_ratio(p, q);
        Self {
            vars: self.vars.clone(),
            x_names: self.x_names.clone(),
            mat: self
                .mat
                .iter()
                .map(|row| row.iter().map(|e| e.scale(&k)).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::FieldElement;
    use crate::exactalg::poly::varset;

    /// delta = x2 d/dx1 + x4 d/dx3 over plain x-variables.
    fn delta(vars: &VarSet) -> LinearField {
        let zero = MultiPoly::zero(vars);
        let one = MultiPoly::one(vars);
        LinearField::new(
            vars,
            &["x1", "x2", "x3", "x4"],
            vec![
                vec![zero.clone(), one.clone(), zero.clone(), zero.clone()],
                vec![zero.clone(), zero.clone(), zero.clone(), zero.clone()],
                vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
                vec![zero.clone(), zero.clone(), zero.clone(), zero.clone()],
            ],
        )
    }

    #[test]
    fn delta_acts_on_coordinates() {
        let vs = varset(&["x1", "x2", "x3", "x4"]);
        let d = delta(&vs);
        let x1 = MultiPoly::var(&vs, "x1");
        let x2 = MultiPoly::var(&vs, "x2");
        assert!(d.apply(&x1).unwrap().sub(&x2).is_zero());
        // Y3 = x4 x1 - x2 x3 lies in the kernel
        let y3 = MultiPoly::var(&vs, "x4")
            .mul(&x1)
            .sub(&x2.mul(&MultiPoly::var(&vs, "x3")));
        assert!(d.apply(&y3).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule_holds() {
        let vs = varset(&["x1", "x2", "x3", "x4"]);
        let d = delta(&vs);
        let p = MultiPoly::var(&vs, "x1")
            .pow(2)
            .add(&MultiPoly::var(&vs, "x3").scale(&FieldElement::from_int(5)));
        let q = MultiPoly::var(&vs, "x2").mul(&MultiPoly::var(&vs, "x1"));
        let lhs = d.apply(&p.mul(&q)).unwrap();
        let rhs = d.apply(&p).unwrap().mul(&q).add(&p.mul(&d.apply(&q).unwrap()));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn self_commutator_vanishes() {
        let vs = varset(&["x1", "x2", "x3", "x4"]);
        let d = delta(&vs);
        assert!(d.commutator(&d).is_zero());
    }

    #[test]
    fn commutator_matches_polynomial_composition_on_monomials() {
        let vs = varset(&["x1", "x2", "x3", "x4"]);
        let d = delta(&vs);
        // a generic second field with integer coefficients
        let c = |n: i64| MultiPoly::constant(&vs, FieldElement::from_int(n));
        let g = LinearField::new(
            &vs,
            &["x1", "x2", "x3", "x4"],
            vec![
                vec![c(1), c(2), c(0), c(-1)],
                vec![c(0), c(3), c(1), c(0)],
                vec![c(2), c(0), c(0), c(1)],
                vec![c(1), c(-2), c(0), c(2)],
            ],
        );
        let bracket = d.commutator(&g);
        for name in ["x1", "x2", "x3", "x4"] {
            let x = MultiPoly::var(&vs, name);
            let direct = d
                .apply(&g.apply(&x).unwrap())
                .unwrap()
                .sub(&g.apply(&d.apply(&x).unwrap()).unwrap());
            assert!(bracket.apply(&x).unwrap().sub(&direct).is_zero());
        }
    }
}
