use std::collections::BTreeMap;
use std::fmt;

use super::{check_exp, fmt_term, LaurentPoly, PolyError, Var};
use crate::cyclo::CycloNum;

/// Polynomial in a chart variable (Laurent) and the deformation parameter ε
/// (nonnegative powers only). Keys are `(chart exponent, ε exponent)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    var: Var,
    terms: BTreeMap<(i64, u32), CycloNum>,
}

impl EpsPoly {
    pub fn zero(var: Var) -> Self {
        EpsPoly { var, terms: BTreeMap::new() }
    }

    pub fn monomial(var: Var, exp: i64, eps_exp: u32, c: CycloNum) -> Self {
        let mut p = Self::zero(var);
        p.add_term((exp, eps_exp), c);
        p
    }

    /// `p · εᵏ`.
    pub fn from_laurent(p: &LaurentPoly, eps_exp: u32) -> Self {
        let mut out = Self::zero(p.var());
        for (e, c) in p.terms() {
            out.add_term((e, eps_exp), c.clone());
        }
        out
    }

    fn add_term(&mut self, key: (i64, u32), c: CycloNum) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `((chart exponent, ε exponent), coefficient)` in key order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), &CycloNum)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_eps_exp(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    fn same_var(&self, rhs: &Self) -> Result<(), PolyError> {
        if self.var == rhs.var {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.var, rhs.var))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_var(rhs)?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            if let Some(x) = out.terms.get(k) {
                x.checked_add(c)?;
            }
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_add(&self.negated_other(rhs))
    }

    fn negated_other(&self, rhs: &Self) -> Self {
        EpsPoly { var: rhs.var, terms: rhs.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_var(rhs)?;
        let mut out = Self::zero(self.var);
        for ((e1, d1), c1) in &self.terms {
            for ((e2, d2), c2) in &rhs.terms {
                out.add_term((check_exp(e1 + e2)?, d1 + d2), c1.checked_mul(c2)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut out = Self::zero(self.var);
        for (k, x) in &self.terms {
            out.add_term(*k, x * c);
        }
        out
    }

    /// Multiplication by `Xᵏ` in the chart variable.
    pub fn shift(&self, k: i64) -> Self {
        EpsPoly { var: self.var, terms: self.terms.iter().map(|((e, d), c)| ((e + k, *d), c.clone())).collect() }
    }

    /// `p(μ·X, ε)`.
    pub fn precompose_scale(&self, mu: &CycloNum) -> Result<Self, PolyError> {
        if mu.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        let mut out = Self::zero(self.var);
        for ((e, d), c) in &self.terms {
            out.add_term((*e, *d), c.checked_mul(&mu.pow(*e)?)?);
        }
        Ok(out)
    }

    /// `X ↦ 1/Y` in the chart variable; ε untouched.
    pub fn substitute_inverse(&self, new_var: Var) -> Self {
        EpsPoly { var: new_var, terms: self.terms.iter().map(|((e, d), c)| ((-e, *d), c.clone())).collect() }
    }

    /// Terms with a negative chart exponent.
    pub fn negative_part(&self) -> Vec<((i64, u32), CycloNum)> {
        self.terms.iter().filter(|((e, _), _)| *e < 0).map(|(k, c)| (*k, c.clone())).collect()
    }

    /// Substitutes a value for ε.
    pub fn specialize(&self, eps: &CycloNum) -> Result<LaurentPoly, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for ((e, d), c) in &self.terms {
            terms.push((*e, c.checked_mul(&eps.pow(*d as i64)?)?));
        }
        Ok(LaurentPoly::from_terms(self.var, terms))
    }

    pub fn promote(&self, m: u32) -> Result<Self, PolyError> {
        let mut out = Self::zero(self.var);
        for (k, c) in &self.terms {
            out.terms.insert(*k, c.promote(m)?);
        }
        Ok(out)
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((e, d), c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            match d {
                0 => {}
                1 => mono.push("eps".to_string()),
                d => mono.push(format!("eps^{d}")),
            }
            match e {
                0 => {}
                1 => mono.push(self.var.to_string()),
                e => mono.push(format!("{}^{e}", self.var)),
            }
            fmt_term(f, i == 0, c, &mono.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloCtx;
    use crate::poly::sigma_zero;

    #[test]
    fn specialization_and_products() {
        let c = CycloCtx::new(4).unwrap();
        let sigma = sigma_zero(4).unwrap();
        let e_sigma = EpsPoly::from_laurent(&sigma, 1);
        assert_eq!(e_sigma.specialize(&c.one()).unwrap(), sigma);
        assert!(e_sigma.specialize(&c.zero()).unwrap().is_zero());
        let sq = e_sigma.checked_mul(&e_sigma).unwrap();
        assert_eq!(sq.max_eps_exp(), Some(2));
        assert_eq!(sq.specialize(&c.integer(2)).unwrap(), (&sigma * &sigma).scale(&c.integer(4)));
        assert_eq!(e_sigma.to_string(), "eps*t^8 - eps*t^4");
    }

    #[test]
    fn chart_swap_and_rotation() {
        let c = CycloCtx::new(4).unwrap();
        let e_sigma = EpsPoly::from_laurent(&sigma_zero(4).unwrap(), 1);
        let back = e_sigma.substitute_inverse(Var::S).substitute_inverse(Var::T);
        assert_eq!(back, e_sigma);
        assert_eq!(e_sigma.precompose_scale(&c.root_of_unity(1)).unwrap(), e_sigma);
        let swapped = e_sigma.substitute_inverse(Var::S).shift(8);
        assert!(swapped.negative_part().is_empty());
        assert_eq!(swapped.shift(-1).negative_part().len(), 1);
        assert_eq!(e_sigma.checked_sub(&e_sigma).unwrap(), EpsPoly::zero(Var::T));
    }
}
