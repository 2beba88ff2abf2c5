//! Dense multivariate polynomials over Q(sqrt3, i).
//!
//! Terms are kept in a map from exponent vectors to nonzero coefficients;
//! degrees in this crate stay small (<= 8 in <= ~24 variables), so no sparse
//! machinery is needed. All polynomials participating in one computation
//! must share the same ordered variable list.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::FieldElement;

pub type VarSet = Arc<Vec<String>>;

/// Build a shared variable list from string literals.
pub fn varset(names: &[&str]) -> VarSet {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub vars: VarSet,
    /// exponent vector -> coefficient; zero coefficients are never stored.
    pub terms: BTreeMap<Vec<u8>, FieldElement>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, value: FieldElement) -> Self {
        let mut p = Self::zero(vars);
        if !value.is_zero() {
            p.terms.insert(vec![0; vars.len()], value);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, FieldElement::one())
    }

    /// The variable `name` as a polynomial. Panics if unknown.
    pub fn var(vars: &VarSet, name: &str) -> Self {
        let idx = var_index(vars, name);
        let mut expo = vec![0u8; vars.len()];
        expo[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(expo, FieldElement::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn assert_same_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars || *self.vars == *other.vars,
            "polynomial variable sets differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    fn insert_term(&mut self, expo: Vec<u8>, coeff: FieldElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let expo: Vec<u8> = e1
                    .iter()
                    .zip(e2)
                    .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                    .collect();
                out.insert_term(expo, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `name`.
    pub fn partial(&self, name: &str) -> Self {
        let idx = var_index(&self.vars, name);
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[idx] -= 1;
            out.insert_term(expo, c * &FieldElement::from_int(e[idx] as i64));
        }
        out
    }

    /// Exact evaluation at a full point (one value per variable).
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.vars.len(), "evaluation arity mismatch");
        let mut acc = FieldElement::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    term = &term * &point[i].powi(p as u32);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Replace variable `name` by `replacement` (same variable set).
    pub fn substitute(&self, name: &str, replacement: &Self) -> Self {
        self.assert_same_vars(replacement);
        let idx = var_index(&self.vars, name);
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut expo = e.clone();
            let power = expo[idx];
            expo[idx] = 0;
            let mut term = Self::zero(&self.vars);
            term.insert_term(expo, c.clone());
            if power > 0 {
                term = term.mul(&replacement.pow(power as u32));
            }
            out = out.add(&term);
        }
        out
    }

    /// Rewrite every occurrence of the product `va * vb` by `replacement`
    /// until no term contains both variables. Used for reduction modulo a
    /// binomial relation like `c1*a3 -> -a1^2`.
    pub fn reduce_product(&self, va: &str, vb: &str, replacement: &Self) -> Self {
        self.assert_same_vars(replacement);
        let ia = var_index(&self.vars, va);
        let ib = var_index(&self.vars, vb);
        assert_ne!(ia, ib, "reduce_product needs distinct variables");
        let mut current = self.clone();
        loop {
            let target = current
                .terms
                .iter()
                .find(|(e, _)| e[ia] >= 1 && e[ib] >= 1)
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = target else {
                return current;
            };
            current.terms.remove(&e);
            let mut expo = e;
            expo[ia] -= 1;
            expo[ib] -= 1;
            let mut rest = Self::zero(&self.vars);
            rest.insert_term(expo, c);
            current = current.add(&rest.mul(replacement));
        }
    }

    /// Rewrite `name^2 -> replacement` until the degree in `name` is < 2.
    pub fn reduce_square(&self, name: &str, replacement: &Self) -> Self {
        self.assert_same_vars(replacement);
        let idx = var_index(&self.vars, name);
        let mut current = self.clone();
        loop {
            let target = current
                .terms
                .iter()
                .find(|(e, _)| e[idx] >= 2)
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = target else {
                return current;
            };
            current.terms.remove(&e);
            let mut expo = e;
            expo[idx] -= 2;
            let mut rest = Self::zero(&self.vars);
            rest.insert_term(expo, c);
            current = current.add(&rest.mul(replacement));
        }
    }

    /// Re-express over a larger variable set (every current variable must be
    /// present in `new_vars`).
    pub fn extend_vars(&self, new_vars: &VarSet) -> Self {
        let mapping: Vec<usize> = self
            .vars
            .iter()
            .map(|name| var_index(new_vars, name))
            .collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut expo = vec![0u8; new_vars.len()];
            for (i, &p) in e.iter().enumerate() {
                expo[mapping[i]] = p;
            }
            out.insert_term(expo, c.clone());
        }
        out
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coeff(&self, expo: &[u8]) -> FieldElement {
        self.terms.get(expo).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Coefficient of `name^k`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, name: &str, k: u8) -> Self {
        let idx = var_index(&self.vars, name);
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] == k {
                let mut expo = e.clone();
                expo[idx] = 0;
                out.insert_term(expo, c.clone());
            }
        }
        out
    }
}

pub fn var_index(vars: &VarSet, name: &str) -> usize {
    vars.iter()
        .position(|v| v == name)
        .unwrap_or_else(|| panic!("unknown variable {name:?} in {vars:?}"))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        // highest total degree first, then map order
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| {
            (
                std::cmp::Reverse(e.iter().map(|&x| x as u32).sum::<u32>()),
                (*e).clone(),
            )
        });
        for (e, c) in terms {
            let mut monos = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => monos.push(self.vars[i].clone()),
                    _ => monos.push(format!("{}^{}", self.vars[i], p)),
                }
            }
            let mono = monos.join("*");
            let piece = if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("({c})*{mono}")
            };
            parts.push(piece);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> VarSet {
        varset(&["x", "y", "z"])
    }

    #[test]
    fn ring_operations() {
        let vs = xyz();
        let x = MultiPoly::var(&vs, "x");
        let y = MultiPoly::var(&vs, "y");
        let p = x.add(&y); // x + y
        let q = p.mul(&p); // x^2 + 2xy + y^2
        assert_eq!(q.coeff(&[2, 0, 0]), FieldElement::one());
        assert_eq!(q.coeff(&[1, 1, 0]), FieldElement::from_int(2));
        assert_eq!(q.coeff(&[0, 2, 0]), FieldElement::one());
        assert!(q.sub(&q).is_zero());
    }

    #[test]
    fn partial_derivative() {
        let vs = xyz();
        let x = MultiPoly::var(&vs, "x");
        let y = MultiPoly::var(&vs, "y");
        // d/dx (x^2 y) = 2 x y
        let p = x.pow(2).mul(&y);
        let dp = p.partial("x");
        assert_eq!(dp.coeff(&[1, 1, 0]), FieldElement::from_int(2));
        assert_eq!(dp.terms.len(), 1);
    }

    #[test]
    fn substitution_and_reduction() {
        let vs = xyz();
        let x = MultiPoly::var(&vs, "x");
        let y = MultiPoly::var(&vs, "y");
        // substitute x -> y + 1 in x^2: (y+1)^2
        let repl = y.add(&MultiPoly::one(&vs));
        let p = x.pow(2).substitute("x", &repl);
        assert_eq!(p.coeff(&[0, 2, 0]), FieldElement::one());
        assert_eq!(p.coeff(&[0, 1, 0]), FieldElement::from_int(2));
        assert_eq!(p.coeff(&[0, 0, 0]), FieldElement::one());
        // reduce x^2 -> -y in x^3 + x: x*(-y) + x
        let q = x.pow(3).add(&x).reduce_square("x", &y.neg());
        assert_eq!(q.coeff(&[1, 1, 0]), -FieldElement::one());
        assert_eq!(q.coeff(&[1, 0, 0]), FieldElement::one());
        // reduce x*y -> z in x^2 y^2: z^2
        let r = x.pow(2).mul(&y.pow(2)).reduce_product("x", "y", &MultiPoly::var(&vs, "z"));
        assert_eq!(r.coeff(&[0, 0, 2]), FieldElement::one());
        assert_eq!(r.terms.len(), 1);
    }

    #[test]
    fn exact_evaluation() {
        let vs = xyz();
        let x = MultiPoly::var(&vs, "x");
        let z = MultiPoly::var(&vs, "z");
        let p = x.mul(&z).add(&MultiPoly::constant(&vs, FieldElement::from_ratio(1, 2)));
        let v = p.eval(&[
            FieldElement::sqrt3(),
            FieldElement::zero(),
            FieldElement::sqrt3(),
        ]);
        // sqrt3 * sqrt3 + 1/2 = 7/2
        assert_eq!(v, FieldElement::from_ratio(7, 2));
    }
}
