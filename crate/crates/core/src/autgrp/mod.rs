//! The automorphism group of the canonical manifold.
//!
//! Lifted automorphisms are triples `(k, α, P)`: base rotation `t ↦ ζₐᵏt` and
//! fiber matrix `[[α, P(t)], [0, α]]` with `P` of degree at most `b − a`. The
//! group law is whatever chartwise composition of these maps produces; the
//! printed closed form is only ever compared against it.

mod ansatz;

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::bundle::{contraction_chart, transition, BundleError, BundleMap, ChartMap, GlueStatus, ManifoldSpec};
use crate::cyclo::{CycloError, CycloNum, Rational};
use crate::moebius::Moebius;
use crate::poly::{LaurentPoly, PolyError, Var};

pub use ansatz::{lift_space, AnsatzSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("invalid automorphism data: {0}")]
    InvalidElement(String),
    #[error("composite left the (k, alpha, P) family: {0}")]
    LeftFamily(String),
    #[error("degree bound {degree} is below b - a = {min}")]
    DegreeTooSmall { degree: usize, min: usize },
    #[error("inverse failed its round-trip check")]
    InverseCheck,
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// `(k mod a, α, P)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutElement {
    k: u32,
    alpha: CycloNum,
    p: LaurentPoly,
}

impl AutElement {
    /// Validates `α ≠ 0`, `P ∈ ℂ_{b−a}[t]`, and moves data into the spec's field.
    pub fn new(spec: &ManifoldSpec, k: i64, alpha: CycloNum, p: LaurentPoly) -> Result<Self, AutError> {
        let n = spec.ctx().conductor();
        let alpha = alpha.promote(n)?;
        let p = p.promote(n)?;
        if alpha.is_zero() {
            return Err(AutError::InvalidElement("alpha must be nonzero".into()));
        }
        if p.var() != Var::T {
            return Err(AutError::InvalidElement("P must be a polynomial in t".into()));
        }
        let max = spec.b() as i64 - spec.a() as i64;
        if p.min_exp().is_some_and(|e| e < 0) || p.max_exp().is_some_and(|e| e > max) {
            return Err(AutError::InvalidElement(format!("P must have degree in [0, {max}], got {p}")));
        }
        Ok(Self::new_unchecked(spec, k, alpha, p))
    }

    /// Skips the invariant checks; used to probe the gluing criterion with
    /// out-of-range data.
    pub fn new_unchecked(spec: &ManifoldSpec, k: i64, alpha: CycloNum, p: LaurentPoly) -> Self {
        AutElement { k: k.rem_euclid(spec.a() as i64) as u32, alpha, p }
    }

    pub fn identity(spec: &ManifoldSpec) -> Self {
        Self::new_unchecked(spec, 0, spec.ctx().one(), LaurentPoly::zero(Var::T))
    }

    /// The contraction `g = (0, λ, σ₀)`.
    pub fn contraction(spec: &ManifoldSpec) -> Self {
        Self::new_unchecked(spec, 0, spec.lambda_num(), spec.sigma0().clone())
    }

    /// The rotation lift `(1, 1, 0)`.
    pub fn rotation(spec: &ManifoldSpec) -> Self {
        Self::new_unchecked(spec, 1, spec.ctx().one(), LaurentPoly::zero(Var::T))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> &CycloNum {
        &self.alpha
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.p
    }
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, alpha={}, P={})", self.k, self.alpha, self.p)
    }
}

/// The t-chart map `(ζₐᵏt, αz₀ + P(t)w₀, αw₀)`, without gluing checks.
pub fn chart_map(e: &AutElement, spec: &ManifoldSpec) -> ChartMap {
    let base = Moebius::scaling(&spec.rotation(e.k as i64)).expect("roots of unity are nonzero");
    let alpha = LaurentPoly::constant(Var::T, e.alpha.clone());
    ChartMap::new(Var::T, base, [[alpha.clone(), e.p.clone()], [LaurentPoly::zero(Var::T), alpha]]).expect("t-chart entries")
}

/// The glued map of `e`; an error carries the obstruction when it does not glue.
pub fn to_bundle_map(e: &AutElement, spec: &ManifoldSpec) -> Result<BundleMap, AutError> {
    let map = BundleMap::from_t_chart(chart_map(e, spec), transition(spec))?;
    match map.status() {
        GlueStatus::Verified => Ok(map),
        GlueStatus::Failed(o) => Err(BundleError::GluingFailed(o.clone()).into()),
    }
}

/// Glues and commutes with the contraction.
pub fn is_automorphism(e: &AutElement, spec: &ManifoldSpec) -> Result<bool, AutError> {
    let map = BundleMap::from_t_chart(chart_map(e, spec), transition(spec))?;
    if !map.is_verified() {
        return Ok(false);
    }
    Ok(crate::bundle::commutes_with_contraction(&map, spec)?)
}

/// Reads `(k, α, P)` back off a glued bundle map.
pub fn extract(map: &BundleMap, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    let chart = map.chart0();
    let mu = chart.base_scale()?;
    let k = (0..spec.a() as i64)
        .find(|&k| spec.rotation(k) == mu)
        .ok_or_else(|| AutError::LeftFamily(format!("base scale {mu} is not an a-th root of unity")))?;
    let [[m00, m01], [m10, m11]] = chart.fiber();
    if !m10.is_zero() || m00 != m11 {
        return Err(AutError::LeftFamily(format!("fiber is not [[alpha, P], [0, alpha]]: {chart}")));
    }
    let alpha = match (m00.max_exp(), m00.coeff(0)) {
        (Some(0), Some(c)) if m00.min_exp() == Some(0) => c.clone(),
        _ => return Err(AutError::LeftFamily(format!("diagonal {m00} is not a nonzero constant"))),
    };
    AutElement::new(spec, k, alpha, m01.clone()).map_err(|e| AutError::LeftFamily(e.to_string()))
}

/// `e · e′ = e ∘ e′`, computed by composing the glued bundle maps.
pub fn multiply(e: &AutElement, e2: &AutElement, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    let composed = to_bundle_map(e, spec)?.compose(&to_bundle_map(e2, spec)?)?;
    extract(&composed, spec)
}

/// The inverse, solved from the composition law and checked by round trip.
pub fn inverse(e: &AutElement, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    // e ∘ (−k, α⁻¹, R) has polynomial part α·R + α⁻¹·P(ζ^{−k}t); R cancels it.
    let alpha_inv = e.alpha.inv()?;
    let shifted = e.p.precompose_scale(&spec.rotation(-(e.k as i64)))?;
    let r = shifted.scale(&-(&alpha_inv * &alpha_inv));
    let inv = AutElement::new(spec, -(e.k as i64), alpha_inv, r)?;
    if multiply(e, &inv, spec)? != AutElement::identity(spec) || multiply(&inv, e, spec)? != AutElement::identity(spec) {
        return Err(AutError::InverseCheck);
    }
    Ok(inv)
}

/// `eⁿ` for any integer `n`.
pub fn pow(e: &AutElement, n: i64, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    let mut base = if n < 0 { inverse(e, spec)? } else { e.clone() };
    let mut n = n.unsigned_abs();
    let mut acc = AutElement::identity(spec);
    while n > 0 {
        if n & 1 == 1 {
            acc = multiply(&acc, &base, spec)?;
        }
        n >>= 1;
        if n > 0 {
            base = multiply(&base, &base, spec)?;
        }
    }
    Ok(acc)
}

/// The integer `n` with `λⁿ = q`, if any.
fn lambda_log(q: &Rational, lambda: &Rational) -> Option<i64> {
    if *q <= Rational::from_integer(0.into()) {
        return None;
    }
    let one = Rational::one();
    let mut cur = q.clone();
    let mut n = 0i64;
    while cur < one {
        cur /= lambda;
        n += 1;
    }
    while cur > one {
        cur *= lambda;
        n -= 1;
    }
    (cur == one).then_some(n)
}

/// `Some(n)` iff `e′ = gⁿ · e` for the contraction `g`.
pub fn mod_g_equal(e: &AutElement, e2: &AutElement, spec: &ManifoldSpec) -> Result<Option<i64>, AutError> {
    if e.k != e2.k {
        return Ok(None);
    }
    let Some(ratio) = e2.alpha.checked_div(&e.alpha)?.as_rational() else {
        return Ok(None);
    };
    let Some(n) = lambda_log(&ratio, spec.lambda()) else {
        return Ok(None);
    };
    let gn = pow(&AutElement::contraction(spec), n, spec)?;
    Ok((multiply(&gn, e, spec)? == *e2).then_some(n))
}

/// The component index `k`; `k = 0` is the identity component.
pub fn component_of(e: &AutElement) -> u32 {
    e.k
}

/// A coset of the contraction group `⟨g⟩`.
#[derive(Clone, Debug)]
pub struct AutClass {
    pub representative: AutElement,
    pub spec: ManifoldSpec,
}

impl AutClass {
    pub fn same_class(&self, other: &AutClass) -> Result<bool, AutError> {
        Ok(self.spec == other.spec && mod_g_equal(&self.representative, &other.representative, &self.spec)?.is_some())
    }
}

#[derive(Clone, Debug)]
pub struct ComponentGroup {
    pub order: u32,
    pub generator: AutClass,
    pub cyclic: bool,
    /// Component of `generatorᵐ` for `m = 1..=order`.
    pub orbit: Vec<u32>,
}

/// The group of components, generated by the rotation lift `(1, 1, 0)`.
pub fn component_group(spec: &ManifoldSpec) -> Result<ComponentGroup, AutError> {
    let gen = AutElement::rotation(spec);
    if !is_automorphism(&gen, spec)? {
        return Err(AutError::InvalidElement("rotation lift is not an automorphism".into()));
    }
    let mut orbit = Vec::new();
    let mut acc = gen.clone();
    loop {
        orbit.push(component_of(&acc));
        if component_of(&acc) == 0 || orbit.len() > spec.a() as usize {
            break;
        }
        acc = multiply(&acc, &gen, spec)?;
    }
    let order = orbit.len() as u32;
    let mut seen = orbit.clone();
    seen.sort_unstable();
    seen.dedup();
    let cyclic = order == spec.a() && seen.len() == spec.a() as usize;
    Ok(ComponentGroup { order, generator: AutClass { representative: gen, spec: spec.clone() }, cyclic, orbit })
}

/// The solution space of the lifting conditions over `t ↦ ζₐᵏt` with
/// `α₀, τ₀` of degree at most `D ≥ b − a`.
pub fn solve_ansatz(spec: &ManifoldSpec, k: i64, degree: usize) -> Result<AnsatzSolution, AutError> {
    let min = (spec.b() - spec.a()) as usize;
    if degree < min {
        return Err(AutError::DegreeTooSmall { degree, min });
    }
    lift_space(&spec.rotation(k), &contraction_chart(spec), &transition(spec), degree)
}

/// `(k+k′, αβ, α·Q + β·P(ζₐ^{k′}t))`, the closed form that composition
/// produces for `e ∘ e′`.
pub fn composition_rule(e: &AutElement, e2: &AutElement, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    let p = e2.p.scale(&e.alpha).checked_add(&e.p.precompose_scale(&spec.rotation(e2.k as i64))?.scale(&e2.alpha))?;
    Ok(AutElement::new_unchecked(spec, e.k as i64 + e2.k as i64, &e.alpha * &e2.alpha, p))
}

/// The closed-form product `(k+k′, αβ, α·Q∘r + β·P∘r)` with `r = ζₐᵏ` the
/// rotation of the left factor: the closed form under audit.
pub fn printed_product(e: &AutElement, e2: &AutElement, spec: &ManifoldSpec) -> Result<AutElement, AutError> {
    let r = spec.rotation(e.k as i64);
    let p = e2.p.precompose_scale(&r)?.scale(&e.alpha).checked_add(&e.p.precompose_scale(&r)?.scale(&e2.alpha))?;
    Ok(AutElement::new_unchecked(spec, e.k as i64 + e2.k as i64, &e.alpha * &e2.alpha, p))
}

/// Outcome of comparing [`printed_product`] with the composition oracle.
#[derive(Clone, Debug, Default)]
pub struct ProductRuleAudit {
    pub pairs: usize,
    /// Pairs where [`composition_rule`] equals `e ∘ e′`.
    pub rule_agree: usize,
    /// Pairs where the printed form equals `e ∘ e′`.
    pub agree_left: usize,
    /// Pairs where it equals `e′ ∘ e` instead.
    pub agree_right: usize,
    /// Pairs with `k = k′ = 0` (both factors in the identity component).
    pub identity_component_pairs: usize,
    pub identity_component_agree: usize,
    pub first_mismatch: Option<(AutElement, AutElement, AutElement, AutElement)>,
}

pub fn audit_product_rule(pairs: &[(AutElement, AutElement)], spec: &ManifoldSpec) -> Result<ProductRuleAudit, AutError> {
    let mut audit = ProductRuleAudit { pairs: pairs.len(), ..Default::default() };
    for (e, e2) in pairs {
        let printed = printed_product(e, e2, spec)?;
        let left = multiply(e, e2, spec)?;
        let right = multiply(e2, e, spec)?;
        audit.rule_agree += (composition_rule(e, e2, spec)? == left) as usize;
        let ok = printed == left;
        audit.agree_left += ok as usize;
        audit.agree_right += (printed == right) as usize;
        if e.k == 0 && e2.k == 0 {
            audit.identity_component_pairs += 1;
            audit.identity_component_agree += ok as usize;
        }
        if !ok && audit.first_mismatch.is_none() {
            audit.first_mismatch = Some((e.clone(), e2.clone(), left, printed));
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: u32, b: u32) -> ManifoldSpec {
        ManifoldSpec::canonical(a, b, ManifoldSpec::default_lambda()).unwrap()
    }

    fn t_poly(s: &ManifoldSpec, terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(Var::T, terms.iter().map(|&(e, v)| (e, s.ctx().integer(v))))
    }

    #[test]
    fn bundle_maps_of_basic_elements() {
        let s = spec(4, 12);
        let id = to_bundle_map(&AutElement::identity(&s), &s).unwrap();
        assert_eq!(id, BundleMap::identity(s.ctx(), transition(&s)));
        let g = to_bundle_map(&AutElement::contraction(&s), &s).unwrap();
        assert_eq!(g, crate::bundle::contraction(&s).unwrap());
        assert!(is_automorphism(&AutElement::rotation(&s), &s).unwrap());
        assert!(is_automorphism(&AutElement::identity(&s), &s).unwrap());
    }

    #[test]
    fn element_validation() {
        let s = spec(4, 12);
        let c = s.ctx();
        assert!(AutElement::new(&s, 0, c.zero(), LaurentPoly::zero(Var::T)).is_err());
        assert!(AutElement::new(&s, 0, c.one(), t_poly(&s, &[(9, 1)])).is_err());
        assert!(AutElement::new(&s, 0, c.one(), t_poly(&s, &[(-1, 1)])).is_err());
        assert_eq!(AutElement::new(&s, 5, c.one(), t_poly(&s, &[(8, 1)])).unwrap().k(), 1);
    }

    #[test]
    fn degree_above_bound_does_not_glue() {
        let s = spec(4, 12);
        let bad = AutElement::new_unchecked(&s, 0, s.ctx().one(), t_poly(&s, &[(9, 1)]));
        assert!(!is_automorphism(&bad, &s).unwrap());
        match to_bundle_map(&bad, &s) {
            Err(AutError::Bundle(BundleError::GluingFailed(o))) => assert_eq!(o.exponents(), vec![-1]),
            other => panic!("expected gluing failure, got {other:?}"),
        }
    }

    #[test]
    fn multiplication_examples() {
        let s = spec(4, 12);
        let c = s.ctx();
        let e = AutElement::new(&s, 3, c.integer(2) + c.root_of_unity(1), t_poly(&s, &[(0, 1), (5, -3)])).unwrap();
        assert_eq!(multiply(&e, &AutElement::identity(&s), &s).unwrap(), e);
        let f = AutElement::new(&s, 2, c.integer(3), t_poly(&s, &[(8, 1)])).unwrap();
        let ef = multiply(&e, &f, &s).unwrap();
        assert_eq!(ef.k(), 1);
        assert_eq!(ef.alpha(), &(e.alpha() * f.alpha()));
        // ((1,1,t), (1,1,0)): P∘r with r = i gives i·t
        let x = AutElement::new(&s, 1, c.one(), t_poly(&s, &[(1, 1)])).unwrap();
        let y = AutElement::rotation(&s);
        let xy = multiply(&x, &y, &s).unwrap();
        assert_eq!(xy.poly(), &LaurentPoly::monomial(Var::T, 1, c.root_of_unity(1)));
        assert_eq!(printed_product(&x, &y, &s).unwrap(), xy);
    }

    #[test]
    fn printed_rule_disagrees_across_components() {
        let s = spec(4, 12);
        let c = s.ctx();
        let rot = AutElement::rotation(&s);
        let q = AutElement::new(&s, 0, c.one(), t_poly(&s, &[(1, 1)])).unwrap();
        let oracle = multiply(&rot, &q, &s).unwrap();
        assert_eq!(oracle.poly(), &t_poly(&s, &[(1, 1)]));
        let printed = printed_product(&rot, &q, &s).unwrap();
        assert_eq!(printed.poly(), &LaurentPoly::monomial(Var::T, 1, c.root_of_unity(1)));
        assert_ne!(oracle, printed);
    }

    #[test]
    fn inverses() {
        let s = spec(4, 12);
        let c = s.ctx();
        assert_eq!(inverse(&AutElement::identity(&s), &s).unwrap(), AutElement::identity(&s));
        let d = AutElement::new(&s, 0, c.integer(3), LaurentPoly::zero(Var::T)).unwrap();
        assert_eq!(inverse(&d, &s).unwrap().alpha(), &c.rational(Rational::new(1.into(), 3.into())));
        let e = AutElement::new(&s, 1, c.one(), t_poly(&s, &[(2, 1), (7, 4)])).unwrap();
        let inv = inverse(&e, &s).unwrap();
        assert_eq!(inv.k(), 3);
        assert_eq!(multiply(&inv, &e, &s).unwrap(), AutElement::identity(&s));
    }

    #[test]
    fn mod_g_examples() {
        let s = spec(4, 12);
        let id = AutElement::identity(&s);
        let g = AutElement::contraction(&s);
        assert_eq!(mod_g_equal(&id, &g, &s).unwrap(), Some(1));
        assert_eq!(mod_g_equal(&g, &id, &s).unwrap(), Some(-1));
        assert_eq!(mod_g_equal(&g, &g, &s).unwrap(), Some(0));
        assert_eq!(mod_g_equal(&AutElement::rotation(&s), &id, &s).unwrap(), None);
        let g3 = pow(&g, -3, &s).unwrap();
        assert_eq!(mod_g_equal(&id, &g3, &s).unwrap(), Some(-3));
        // same α but different polynomial part: not a g-multiple
        let e = AutElement::new(&s, 0, s.ctx().one(), t_poly(&s, &[(1, 1)])).unwrap();
        assert_eq!(mod_g_equal(&id, &e, &s).unwrap(), None);
        // α ratio 3 is not a power of 1/2
        let d = AutElement::new(&s, 0, s.ctx().integer(3), LaurentPoly::zero(Var::T)).unwrap();
        assert_eq!(mod_g_equal(&id, &d, &s).unwrap(), None);
    }

    #[test]
    fn lambda_log_cases() {
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(lambda_log(&Rational::new(1.into(), 8.into()), &half), Some(3));
        assert_eq!(lambda_log(&Rational::from_integer(4.into()), &half), Some(-2));
        assert_eq!(lambda_log(&Rational::from_integer(3.into()), &half), None);
        assert_eq!(lambda_log(&Rational::from_integer((-1).into()), &half), None);
    }

    #[test]
    fn component_groups() {
        for (a, b) in [(4, 12), (5, 15), (6, 20)] {
            let s = spec(a, b);
            let cg = component_group(&s).unwrap();
            assert_eq!(cg.order, a);
            assert!(cg.cyclic);
            assert_eq!(*cg.orbit.last().unwrap(), 0);
        }
        let s = spec(4, 12);
        let gen4 = pow(&AutElement::rotation(&s), 4, &s).unwrap();
        assert_eq!(component_of(&gen4), 0);
        assert_eq!(component_of(&AutElement::contraction(&s)), 0);
    }

    #[test]
    fn ansatz_dimensions() {
        let s = spec(4, 12);
        for (k, d) in [(0, 12), (1, 12), (0, 8)] {
            let sol = solve_ansatz(&s, k, d).unwrap();
            assert_eq!(sol.dimension(), 10, "k = {k}, D = {d}");
            assert!(sol.alpha_is_constant());
            assert!(sol.admits_invertible());
            assert_eq!(sol.max_tau_degree(), Some(8));
        }
        assert_eq!(solve_ansatz(&s, 0, 7).unwrap_err(), AutError::DegreeTooSmall { degree: 7, min: 8 });
    }
}
