//! Exact Möbius transformations of ℙ¹ over cyclotomic fields: point action,
//! three-point interpolation, setwise stabilizers of finite configurations and
//! recognition of the finite subgroup type.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use thiserror::Error;

use crate::cyclo::{common_conductor, CycloCtx, CycloError, CycloNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoebiusError {
    #[error("(0 : 0) is not a point of the projective line")]
    ZeroPoint,
    #[error("matrix is singular")]
    Singular,
    #[error("points must be pairwise distinct")]
    RepeatedPoints,
    #[error("stabilizer of {0} points is infinite; need at least 3")]
    TooFewPoints(usize),
    #[error("element set is not closed under composition and inverse")]
    NotClosed,
    #[error("group of order {0} is not a recognised finite subgroup of PGL2")]
    Unrecognized(usize),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

fn lcm_of<'a>(xs: impl IntoIterator<Item = &'a CycloNum>) -> u32 {
    xs.into_iter().fold(1, |m, x| common_conductor(m, x.conductor()))
}

/// A point `(u : v)` of ℙ¹, stored normalized as `(x : 1)` or `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    u: CycloNum,
    v: CycloNum,
}

impl ProjPoint {
    pub fn new(u: CycloNum, v: CycloNum) -> Result<Self, MoebiusError> {
        let m = lcm_of([&u, &v]);
        let (u, v) = (u.promote(m)?, v.promote(m)?);
        if v.is_zero() {
            if u.is_zero() {
                return Err(MoebiusError::ZeroPoint);
            }
            let ctx = u.ctx().clone();
            return Ok(ProjPoint { u: ctx.one(), v: ctx.zero() });
        }
        let u = u.checked_div(&v)?;
        let v = v.ctx().one();
        Ok(ProjPoint { u, v })
    }

    pub fn finite(x: CycloNum) -> Self {
        let v = x.ctx().one();
        ProjPoint { u: x, v }
    }

    pub fn infinity(ctx: &std::sync::Arc<CycloCtx>) -> Self {
        ProjPoint { u: ctx.one(), v: ctx.zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.v.is_zero()
    }

    /// The affine coordinate `u/v`, absent at ∞.
    pub fn affine(&self) -> Option<&CycloNum> {
        (!self.is_infinity()).then_some(&self.u)
    }

    pub fn u(&self) -> &CycloNum {
        &self.u
    }

    pub fn v(&self) -> &CycloNum {
        &self.v
    }

    pub fn conductor(&self) -> u32 {
        self.u.conductor()
    }

    pub fn promote(&self, m: u32) -> Result<Self, MoebiusError> {
        Ok(ProjPoint { u: self.u.promote(m)?, v: self.v.promote(m)? })
    }

    /// Projective equality `u·v′ = u′·v`, promoting if the fields differ.
    pub fn same_point(&self, other: &ProjPoint) -> bool {
        let m = common_conductor(self.conductor(), other.conductor());
        match (self.promote(m), other.promote(m)) {
            (Ok(p), Ok(q)) => &p.u * &q.v == &q.u * &p.v,
            _ => false,
        }
    }
}

/// Finite points first (by coefficient order of the affine coordinate), ∞ last.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.is_infinity(), &self.u).cmp(&(other.is_infinity(), &other.u))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some(x) => write!(f, "{x}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint({self})")
    }
}

/// `z ↦ (αz + β)/(γz + δ)`, stored projectively: the first nonzero entry in
/// row-major order is scaled to 1, so structural equality is equality in PGL₂.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Moebius {
    m: [[CycloNum; 2]; 2],
}

impl Moebius {
    pub fn new(a: CycloNum, b: CycloNum, c: CycloNum, d: CycloNum) -> Result<Self, MoebiusError> {
        let n = lcm_of([&a, &b, &c, &d]);
        let m = [[a.promote(n)?, b.promote(n)?], [c.promote(n)?, d.promote(n)?]];
        Self::normalized(m)
    }

    fn normalized(m: [[CycloNum; 2]; 2]) -> Result<Self, MoebiusError> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(MoebiusError::Singular);
        }
        let lead = m.iter().flatten().find(|x| !x.is_zero()).expect("nonsingular").inv()?;
        let scaled = m.map(|row| row.map(|x| &x * &lead));
        Ok(Moebius { m: scaled })
    }

    pub fn identity(ctx: &std::sync::Arc<CycloCtx>) -> Self {
        Moebius { m: [[ctx.one(), ctx.zero()], [ctx.zero(), ctx.one()]] }
    }

    /// `z ↦ μz`.
    pub fn scaling(mu: &CycloNum) -> Result<Self, MoebiusError> {
        let ctx = mu.ctx();
        Self::normalized([[mu.clone(), ctx.zero()], [ctx.zero(), ctx.one()]])
    }

    /// `z ↦ 1/z`.
    pub fn inversion(ctx: &std::sync::Arc<CycloCtx>) -> Self {
        Moebius { m: [[ctx.zero(), ctx.one()], [ctx.one(), ctx.zero()]] }
    }

    pub fn entries(&self) -> &[[CycloNum; 2]; 2] {
        &self.m
    }

    pub fn conductor(&self) -> u32 {
        self.m[0][0].conductor()
    }

    pub fn promote(&self, n: u32) -> Result<Self, MoebiusError> {
        let mut out = Vec::with_capacity(4);
        for x in self.m.iter().flatten() {
            out.push(x.promote(n)?);
        }
        let [a, b, c, d]: [CycloNum; 4] = out.try_into().expect("four entries");
        Ok(Moebius { m: [[a, b], [c, d]] })
    }

    fn unify(&self, other: &Moebius) -> (Moebius, Moebius) {
        let n = common_conductor(self.conductor(), other.conductor());
        (self.promote(n).expect("divides lcm"), other.promote(n).expect("divides lcm"))
    }

    pub fn is_identity(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let n = common_conductor(self.conductor(), p.conductor());
        let (m, p) = (self.promote(n).expect("divides lcm"), p.promote(n).expect("divides lcm"));
        let u = &m.m[0][0] * &p.u + &m.m[0][1] * &p.v;
        let v = &m.m[1][0] * &p.u + &m.m[1][1] * &p.v;
        ProjPoint::new(u, v).expect("nonsingular map sends points to points")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let (a, b) = self.unify(other);
        let e = |i: usize, j: usize| &a.m[i][0] * &b.m[0][j] + &a.m[i][1] * &b.m[1][j];
        Self::normalized([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]).expect("product of nonsingular maps")
    }

    pub fn inverse(&self) -> Moebius {
        let [[a, b], [c, d]] = &self.m;
        Self::normalized([[d.clone(), -b], [-c, a.clone()]]).expect("adjugate of nonsingular map")
    }

    /// Returns `μ` when the map is `z ↦ μz`, i.e. fixes both 0 and ∞.
    pub fn is_rotation_about_zero(&self) -> Option<CycloNum> {
        let [[a, b], [c, d]] = &self.m;
        (b.is_zero() && c.is_zero()).then(|| a / d)
    }

    /// Smallest `k ≥ 1` with `selfᵏ = id`, searching up to `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.compose(self);
        }
        None
    }

    /// The map sending `(p₁, p₂, p₃)` to `(0, 1, ∞)`.
    fn to_standard(p: &[ProjPoint; 3]) -> Result<Moebius, MoebiusError> {
        // ℓᵢ(x) = vᵢ·x_u − uᵢ·x_v vanishes exactly at pᵢ
        let ell = |i: usize, x: &ProjPoint| &p[i].v * &x.u - &p[i].u * &x.v;
        let l3 = ell(2, &p[1]);
        let l1 = ell(0, &p[1]);
        Self::normalized([[&l3 * &p[0].v, -(&l3 * &p[0].u)], [&l1 * &p[2].v, -(&l1 * &p[2].u)]])
    }

    /// The unique map with `src[i] ↦ dst[i]`.
    pub fn through_triples(src: &[ProjPoint; 3], dst: &[ProjPoint; 3]) -> Result<Moebius, MoebiusError> {
        let n = lcm_of(src.iter().chain(dst).flat_map(|p| [&p.u, &p.v]));
        let lift =
            |t: &[ProjPoint; 3]| -> Result<[ProjPoint; 3], MoebiusError> { Ok([t[0].promote(n)?, t[1].promote(n)?, t[2].promote(n)?]) };
        let (src, dst) = (lift(src)?, lift(dst)?);
        for t in [&src, &dst] {
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(MoebiusError::RepeatedPoints);
            }
        }
        Ok(Self::to_standard(&dst)?.inverse().compose(&Self::to_standard(&src)?))
    }
}

impl Mul for &Moebius {
    type Output = Moebius;
    fn mul(self, rhs: &Moebius) -> Moebius {
        self.compose(rhs)
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Debug for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Moebius{self}")
    }
}

/// Promotes a point set into one field and sorts it, rejecting repeats.
fn canonical_points(points: &[ProjPoint]) -> Result<Vec<ProjPoint>, MoebiusError> {
    let n = lcm_of(points.iter().map(ProjPoint::u));
    let mut pts = points.iter().map(|p| p.promote(n)).collect::<Result<Vec<_>, _>>()?;
    pts.sort();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return Err(MoebiusError::RepeatedPoints);
    }
    Ok(pts)
}

/// `{0} ∪ μₙ` in `ℚ(ζₙ)`.
pub fn zero_and_roots(n: u32) -> Result<Vec<ProjPoint>, MoebiusError> {
    let c = CycloCtx::new(n)?;
    Ok(std::iter::once(ProjPoint::finite(c.zero())).chain((0..n as i64).map(|k| ProjPoint::finite(c.root_of_unity(k)))).collect())
}

/// `z ↦ −(z − j)/(2jz + j²)` with `j = ζ₃`: permutes `{0, 1, j, j²}` without
/// fixing 0.
pub fn three_roots_extra_symmetry() -> Moebius {
    let c = CycloCtx::new(3).expect("conductor 3");
    let j = c.root_of_unity(1);
    Moebius::new(-c.one(), j.clone(), &j * &c.integer(2), &j * &j).expect("nonsingular")
}

/// The full setwise stabilizer of a finite configuration of at least three
/// points, in sorted order.
///
/// Every stabilizing map sends the three smallest points to some ordered
/// triple of distinct points of the set, and is determined by that image, so
/// enumerating the `n(n−1)(n−2)` candidates is exhaustive.
pub fn stabilizer(points: &[ProjPoint]) -> Result<Vec<Moebius>, MoebiusError> {
    let pts = canonical_points(points)?;
    if pts.len() < 3 {
        return Err(MoebiusError::TooFewPoints(pts.len()));
    }
    let set: BTreeSet<&ProjPoint> = pts.iter().collect();
    let base = [pts[0].clone(), pts[1].clone(), pts[2].clone()];
    let n = pts.len();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| [i, j, k])))
        .filter(|[i, j, k]| i != j && i != k && j != k)
        .collect();
    let found: BTreeSet<Moebius> = triples
        .par_iter()
        .filter_map(|[i, j, k]| {
            let dst = [pts[*i].clone(), pts[*j].clone(), pts[*k].clone()];
            let m = Moebius::through_triples(&base, &dst).ok()?;
            pts.iter().all(|p| set.contains(&m.apply(p))).then_some(m)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let group: Vec<Moebius> = found.into_iter().collect();
    check_closed(&group)?;
    Ok(group)
}

fn check_closed(elems: &[Moebius]) -> Result<(), MoebiusError> {
    let set: BTreeSet<&Moebius> = elems.iter().collect();
    if !elems.iter().any(Moebius::is_identity) {
        return Err(MoebiusError::NotClosed);
    }
    for x in elems {
        if !set.contains(&x.inverse()) {
            return Err(MoebiusError::NotClosed);
        }
        for y in elems {
            if !set.contains(&x.compose(y)) {
                return Err(MoebiusError::NotClosed);
            }
        }
    }
    Ok(())
}

/// Isomorphism type of a finite subgroup of PGL₂(ℂ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupLabel {
    Cyclic(usize),
    Dihedral(usize),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl SubgroupLabel {
    pub fn order(&self) -> usize {
        match self {
            SubgroupLabel::Cyclic(n) => *n,
            SubgroupLabel::Dihedral(n) => 2 * n,
            SubgroupLabel::Tetrahedral => 12,
            SubgroupLabel::Octahedral => 24,
            SubgroupLabel::Icosahedral => 60,
        }
    }
}

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupLabel::Cyclic(n) => write!(f, "cyclic({n})"),
            SubgroupLabel::Dihedral(n) => write!(f, "dihedral({n})"),
            SubgroupLabel::Tetrahedral => f.write_str("tetrahedral"),
            SubgroupLabel::Octahedral => f.write_str("octahedral"),
            SubgroupLabel::Icosahedral => f.write_str("icosahedral"),
        }
    }
}

/// Number of elements of each order in A₄, S₄ and A₅.
const POLYHEDRAL_PROFILES: [(SubgroupLabel, &[(usize, usize)]); 3] = [
    (SubgroupLabel::Tetrahedral, &[(1, 1), (2, 3), (3, 8)]),
    (SubgroupLabel::Octahedral, &[(1, 1), (2, 9), (3, 8), (4, 6)]),
    (SubgroupLabel::Icosahedral, &[(1, 1), (2, 15), (3, 20), (5, 24)]),
];

/// Identifies a finite group of Möbius maps from its order and the multiset
/// of element orders. The input is checked for closure first.
pub fn classify_finite_subgroup(elems: &[Moebius]) -> Result<SubgroupLabel, MoebiusError> {
    let n = elems.iter().fold(1, |m, x| common_conductor(m, x.conductor()));
    let set: BTreeSet<Moebius> = elems.iter().map(|x| x.promote(n)).collect::<Result<_, _>>()?;
    let group: Vec<Moebius> = set.into_iter().collect();
    check_closed(&group)?;
    let order = group.len();
    let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
    for g in &group {
        let k = g.order(order).ok_or(MoebiusError::NotClosed)?;
        *profile.entry(k).or_default() += 1;
    }
    if profile.contains_key(&order) {
        return Ok(SubgroupLabel::Cyclic(order));
    }
    if order % 2 == 0 && profile.contains_key(&(order / 2)) {
        return Ok(SubgroupLabel::Dihedral(order / 2));
    }
    POLYHEDRAL_PROFILES
        .iter()
        .find(|(label, want)| label.order() == order && want.iter().copied().eq(profile.iter().map(|(k, v)| (*k, *v))))
        .map(|(label, _)| *label)
        .ok_or(MoebiusError::Unrecognized(order))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn ctx(n: u32) -> Arc<CycloCtx> {
        CycloCtx::new(n).unwrap()
    }

    fn pt(c: &Arc<CycloCtx>, v: i64) -> ProjPoint {
        ProjPoint::finite(c.integer(v))
    }

    #[test]
    fn point_normalization() {
        let c = ctx(4);
        let p = ProjPoint::new(c.integer(2), c.integer(4)).unwrap();
        assert_eq!(p, ProjPoint::finite(c.rational(crate::cyclo::Rational::new(1.into(), 2.into()))));
        assert!(ProjPoint::new(c.integer(3), c.zero()).unwrap().is_infinity());
        assert_eq!(ProjPoint::new(c.zero(), c.zero()), Err(MoebiusError::ZeroPoint));
        assert!(pt(&ctx(1), 1).same_point(&ProjPoint::finite(ctx(4).one())));
    }

    #[test]
    fn apply_examples() {
        let c = ctx(4);
        let p = pt(&c, 1);
        assert_eq!(Moebius::identity(&c).apply(&p), p);
        let rot = Moebius::scaling(&c.root_of_unity(1)).unwrap();
        assert_eq!(rot.apply(&p), ProjPoint::finite(c.root_of_unity(1)));
        let j = ctx(3).root_of_unity(1);
        assert_eq!(three_roots_extra_symmetry().apply(&pt(&ctx(3), 0)), ProjPoint::finite(&j * &j));
        assert!(Moebius::inversion(&c).apply(&pt(&c, 0)).is_infinity());
    }

    #[test]
    fn singular_rejected() {
        let c = ctx(1);
        assert_eq!(Moebius::new(c.one(), c.one(), c.one(), c.one()), Err(MoebiusError::Singular));
    }

    #[test]
    fn through_triples_examples() {
        let c = ctx(1);
        let std3 = [pt(&c, 0), pt(&c, 1), ProjPoint::infinity(&c)];
        assert!(Moebius::through_triples(&std3, &std3).unwrap().is_identity());
        let rev = [ProjPoint::infinity(&c), pt(&c, 1), pt(&c, 0)];
        assert_eq!(Moebius::through_triples(&std3, &rev).unwrap(), Moebius::inversion(&c));
        let src = [pt(&c, 2), pt(&c, -1), pt(&c, 5)];
        let c5 = ctx(5);
        let dst = [ProjPoint::finite(c5.root_of_unity(1)), ProjPoint::infinity(&c5), pt(&c5, 3)];
        let m = Moebius::through_triples(&src, &dst).unwrap();
        for (s, d) in src.iter().zip(&dst) {
            assert_eq!(m.apply(s), *d);
        }
        let bad = [pt(&c, 0), pt(&c, 0), pt(&c, 1)];
        assert_eq!(Moebius::through_triples(&bad, &std3), Err(MoebiusError::RepeatedPoints));
    }

    #[test]
    fn rotation_detection() {
        let c5 = ctx(5);
        let z = c5.root_of_unity(1);
        assert_eq!(Moebius::scaling(&z).unwrap().is_rotation_about_zero(), Some(z));
        assert_eq!(Moebius::inversion(&c5).is_rotation_about_zero(), None);
        assert_eq!(three_roots_extra_symmetry().is_rotation_about_zero(), None);
    }

    #[test]
    fn rotations_stabilize_zero_and_roots() {
        for a in 4..=7u32 {
            let stab = stabilizer(&zero_and_roots(a).unwrap()).unwrap();
            assert_eq!(stab.len(), a as usize);
            let mus: BTreeSet<CycloNum> = stab.iter().map(|m| m.is_rotation_about_zero().unwrap()).collect();
            let roots: BTreeSet<CycloNum> = (0..a as i64).map(|k| ctx(a).root_of_unity(k)).collect();
            assert_eq!(mus, roots);
            assert_eq!(classify_finite_subgroup(&stab).unwrap(), SubgroupLabel::Cyclic(a as usize));
        }
    }

    #[test]
    fn triangle_with_center_has_extra_symmetry() {
        let stab = stabilizer(&zero_and_roots(3).unwrap()).unwrap();
        assert!(stab.len() > 3);
        assert!(stab.contains(&three_roots_extra_symmetry()));
        // {0} ∪ μ₃ is an equianharmonic quadruple: its stabilizer is A₄
        assert_eq!(stab.len(), 12);
        assert_eq!(classify_finite_subgroup(&stab).unwrap(), SubgroupLabel::Tetrahedral);
    }

    #[test]
    fn three_points_give_s3() {
        let c = ctx(1);
        let stab = stabilizer(&[pt(&c, 0), pt(&c, 1), ProjPoint::infinity(&c)]).unwrap();
        assert_eq!(stab.len(), 6);
        assert_eq!(classify_finite_subgroup(&stab).unwrap(), SubgroupLabel::Dihedral(3));
    }

    #[test]
    fn octahedron_vertices() {
        // {0, ∞, ±1, ±i}: stabilizer is the octahedral group
        let c = ctx(4);
        let mut pts = vec![pt(&c, 0), ProjPoint::infinity(&c)];
        pts.extend((0..4).map(|k| ProjPoint::finite(c.root_of_unity(k))));
        let stab = stabilizer(&pts).unwrap();
        assert_eq!(classify_finite_subgroup(&stab).unwrap(), SubgroupLabel::Octahedral);
    }

    #[test]
    fn square_gives_dihedral() {
        let c = ctx(4);
        let pts: Vec<_> = (0..4).map(|k| ProjPoint::finite(c.root_of_unity(k))).collect();
        let stab = stabilizer(&pts).unwrap();
        // four points with cross-ratio −1 (harmonic): stabilizer is D₄
        assert_eq!(classify_finite_subgroup(&stab).unwrap(), SubgroupLabel::Dihedral(4));
    }

    #[test]
    fn trivial_group_and_errors() {
        let c = ctx(1);
        assert_eq!(classify_finite_subgroup(&[Moebius::identity(&c)]).unwrap(), SubgroupLabel::Cyclic(1));
        let m = Moebius::scaling(&c.integer(2)).unwrap();
        assert_eq!(classify_finite_subgroup(&[Moebius::identity(&c), m]), Err(MoebiusError::NotClosed));
        assert_eq!(stabilizer(&[pt(&c, 0), pt(&c, 1)]), Err(MoebiusError::TooFewPoints(2)));
        assert_eq!(stabilizer(&[pt(&c, 0), pt(&c, 1), pt(&c, 1)]), Err(MoebiusError::RepeatedPoints));
    }

    #[test]
    fn stabilizer_closed_and_round_trip() {
        let c = ctx(1);
        let pts = [pt(&c, 0), pt(&c, 1), pt(&c, -1), ProjPoint::infinity(&c)];
        let stab = stabilizer(&pts).unwrap();
        check_closed(&stab).unwrap();
        let src = [pt(&c, 2), pt(&c, 3), pt(&c, 7)];
        let m = Moebius::through_triples(&[pt(&c, 0), pt(&c, 1), ProjPoint::infinity(&c)], &src).unwrap();
        let image = [m.apply(&src[0]), m.apply(&src[1]), m.apply(&src[2])];
        let back = Moebius::through_triples(&image, &src).unwrap();
        assert!(back.compose(&m).is_identity());
    }
}
