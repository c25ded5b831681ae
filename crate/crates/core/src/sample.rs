//! Seeded random data for property checks and the verification suite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgrp::AutElement;
use crate::bundle::ManifoldSpec;
use crate::cyclo::{CycloCtx, CycloNum, Rational};
use crate::poly::{LaurentPoly, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 4`, `1 ≤ q ≤ 3`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = small_rational(rng);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Sparse element of the field: each power-basis coordinate is zero half the time.
pub fn cyclo_num<R: Rng>(ctx: &Arc<CycloCtx>, rng: &mut R) -> CycloNum {
    let coeffs =
        (0..ctx.degree()).map(|_| if rng.gen_bool(0.5) { small_rational(rng) } else { Rational::from_integer(0.into()) }).collect();
    ctx.from_power_coeffs(coeffs)
}

pub fn nonzero_cyclo_num<R: Rng>(ctx: &Arc<CycloCtx>, rng: &mut R) -> CycloNum {
    loop {
        let x = cyclo_num(ctx, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random Laurent polynomial supported in `[lo, hi]`, roughly a third of the
/// exponents occupied.
pub fn laurent<R: Rng>(ctx: &Arc<CycloCtx>, var: Var, lo: i64, hi: i64, rng: &mut R) -> LaurentPoly {
    let mut terms = Vec::new();
    for e in lo..=hi {
        if rng.gen_ratio(1, 3) {
            terms.push((e, nonzero_cyclo_num(ctx, rng)));
        }
    }
    LaurentPoly::from_terms(var, terms)
}

/// Uniform component, nonzero α, and `P` of degree at most `b − a`.
pub fn automorphism<R: Rng>(spec: &ManifoldSpec, rng: &mut R) -> AutElement {
    let ctx = spec.ctx();
    let k = rng.gen_range(0..spec.a() as i64);
    let alpha = nonzero_cyclo_num(ctx, rng);
    let p = laurent(ctx, Var::T, 0, (spec.b() - spec.a()) as i64, rng);
    AutElement::new(spec, k, alpha, p).expect("sampled data satisfies the invariants")
}
