//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runtime limits are part of each criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hopfaut_core::autgrp::{self, AutElement};
use hopfaut_core::bundle::{contraction_chart, glues, GlueStatus};
use hopfaut_core::cyclo::cyclotomic_poly;
use hopfaut_core::family;
use hopfaut_core::hopf::{classify_fiber, special_fibers};
use hopfaut_core::moebius::{stabilizer, three_roots_extra_symmetry, zero_and_roots};
use hopfaut_core::poly::sigma_zero;
use hopfaut_core::{sample, CycloCtx, CycloNum, HopfClass, LaurentPoly, ManifoldSpec, ProjPoint, Rational, Var};

const LIMIT_GLUING: Duration = Duration::from_secs(1);
const LIMIT_SPECIAL_FIBERS: Duration = Duration::from_secs(1);
const LIMIT_STABILIZER_PER_A: Duration = Duration::from_secs(10);
const LIMIT_ANSATZ_PER_CASE: Duration = Duration::from_secs(30);
const LIMIT_COMPONENTS: Duration = Duration::from_secs(10);
const LIMIT_PRODUCT_RULE: Duration = Duration::from_secs(10);
const LIMIT_FAMILY: Duration = Duration::from_secs(30);
const LIMIT_ARITHMETIC: Duration = Duration::from_secs(10);

const SEED: u64 = 20_26;

type Outcome = Result<String, String>;

/// Name, units of work, time limit per unit, check.
type Criterion = (&'static str, u32, Duration, fn() -> Outcome);

fn canonical(a: u32, b: u32) -> ManifoldSpec {
    ManifoldSpec::canonical(a, b, ManifoldSpec::default_lambda()).expect("canonical spec")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `f` with a time limit per unit of work.
fn timed(units: u32, limit: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration, Duration) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let budget = limit * units;
    let out = match out {
        Ok(_) if took > budget => Err(format!("took {took:.2?}, limit {budget:.2?}")),
        o => o,
    };
    (out, took, budget)
}

fn gluing_boundary() -> Outcome {
    let good = canonical(4, 12);
    ensure(glues(&contraction_chart(&good), &good).map_err(|e| e.to_string())?.is_verified(), || "(4,12,8) does not glue".into())?;
    let bad = ManifoldSpec::general(4, 11, 8, ManifoldSpec::default_lambda(), sigma_zero(4).unwrap()).map_err(|e| e.to_string())?;
    match glues(&contraction_chart(&bad), &bad).map_err(|e| e.to_string())? {
        GlueStatus::Failed(o) if o.exponents() == [-1] => Ok("(4,12,8) glues; (4,11,8) obstructed at exponent -1".into()),
        other => Err(format!("(4,11,8) gave {other:?}")),
    }
}

fn special_fiber_counts() -> Outcome {
    for a in 4..=8 {
        let spec = canonical(a, 3 * a);
        let mut got = special_fibers(&spec).map_err(|e| e.to_string())?;
        got.sort();
        let mut want = zero_and_roots(a).map_err(|e| e.to_string())?;
        want.sort();
        ensure(got == want, || format!("a = {a}: special fibers {got:?}"))?;
        let ctx = spec.ctx();
        for t in [ProjPoint::infinity(ctx), ProjPoint::finite(ctx.integer(2))] {
            let class = classify_fiber(&spec, &t).map_err(|e| e.to_string())?;
            ensure(class == HopfClass::X1, || format!("a = {a}: fiber over {t} is {class}"))?;
        }
    }
    Ok("a = 4..8: exactly a+1 special fibers {0} and the a-th roots of unity; inf and 2 give X1".into())
}

fn stabilizers() -> Outcome {
    for a in 4..=7 {
        let g = stabilizer(&zero_and_roots(a).unwrap()).map_err(|e| e.to_string())?;
        ensure(g.len() == a as usize && g.iter().all(|m| m.is_rotation_about_zero().is_some()), || format!("a = {a}: order {}", g.len()))?;
    }
    let pts = zero_and_roots(3).unwrap();
    let g = stabilizer(&pts).map_err(|e| e.to_string())?;
    let extra = three_roots_extra_symmetry();
    let rotations = g.iter().filter(|m| m.is_rotation_about_zero().is_some()).count();
    ensure(rotations == 3 && g.len() > 3 && g.contains(&extra), || format!("a = 3: order {}, {rotations} rotations", g.len()))?;
    for p in &pts {
        let image = extra.apply(p);
        ensure(pts.contains(&image), || format!("extra map sends {p} to {image}"))?;
    }
    ensure(extra.apply(&pts[0]) != pts[0], || "extra map fixes 0".into())?;
    Ok(format!("a = 4..7: exactly the a rotations; a = 3: order {} including z -> -(z-j)/(2jz+j^2)", g.len()))
}

fn ansatz_dimensions() -> Outcome {
    let mut dims = Vec::new();
    for (a, b) in [(4, 12), (4, 13), (5, 15)] {
        let spec = canonical(a, b);
        for k in 0..a as i64 {
            let start = Instant::now();
            let sol = autgrp::solve_ansatz(&spec, k, b as usize).map_err(|e| e.to_string())?;
            ensure(start.elapsed() <= LIMIT_ANSATZ_PER_CASE, || format!("({a},{b}) k = {k} took {:.2?}", start.elapsed()))?;
            let want = (b - a + 2) as usize;
            ensure(sol.dimension() == want && sol.alpha_is_constant(), || {
                format!("({a},{b}) k = {k}: dimension {} (want {want}), alpha constant {}", sol.dimension(), sol.alpha_is_constant())
            })?;
        }
        dims.push(format!("({a},{b}): {}", b - a + 2));
    }
    Ok(format!("dimension b-a+2 for every k, alpha part constant [{}]", dims.join(", ")))
}

fn components() -> Outcome {
    for (a, b) in [(4, 12), (5, 15), (6, 20)] {
        let spec = canonical(a, b);
        let cg = autgrp::component_group(&spec).map_err(|e| e.to_string())?;
        ensure(cg.order == a && cg.cyclic, || format!("({a},{b}): order {} cyclic {}", cg.order, cg.cyclic))?;
        let mut rng = sample::rng(SEED + a as u64);
        for _ in 0..100 {
            let x = sample::automorphism(&spec, &mut rng);
            let y = sample::automorphism(&spec, &mut rng);
            let k = autgrp::component_of(&autgrp::multiply(&x, &y, &spec).map_err(|e| e.to_string())?);
            ensure(k == (x.k() + y.k()) % a, || format!("k not multiplicative on {x}, {y}"))?;
        }
    }
    Ok("orders 4, 5, 6, cyclic; k multiplicative on 100 random pairs each".into())
}

fn product_rule() -> Outcome {
    let spec = canonical(4, 12);
    let mut rng = sample::rng(SEED);
    let id = AutElement::identity(&spec);
    let m = |x: &AutElement, y: &AutElement| autgrp::multiply(x, y, &spec).map_err(|e| e.to_string());
    let mut pairs = Vec::new();
    for _ in 0..100 {
        let (x, y, z) =
            (sample::automorphism(&spec, &mut rng), sample::automorphism(&spec, &mut rng), sample::automorphism(&spec, &mut rng));
        ensure(m(&m(&x, &y)?, &z)? == m(&x, &m(&y, &z)?)?, || format!("associativity fails on {x}, {y}, {z}"))?;
        ensure(m(&x, &id)? == x && m(&id, &x)? == x, || format!("identity fails on {x}"))?;
        let inv = autgrp::inverse(&x, &spec).map_err(|e| e.to_string())?;
        ensure(m(&x, &inv)? == id, || format!("inverse fails on {x}"))?;
        pairs.push((x, y));
    }
    let audit = autgrp::audit_product_rule(&pairs, &spec).map_err(|e| e.to_string())?;
    ensure(audit.rule_agree == audit.pairs, || "composition disagrees with its closed form".into())?;
    Ok(format!(
        "group axioms on 100 triples; printed rule matches e*e' on {}/{} pairs, e'*e on {}/{} (discrepancy: composition gives a*Q + b*P(zeta^k' t))",
        audit.agree_left, audit.pairs, audit.agree_right, audit.pairs
    ))
}

fn family_identities() -> Outcome {
    let spec = canonical(4, 12);
    let ctx = spec.ctx();
    let mut rng = sample::rng(SEED + 7);
    for _ in 0..50 {
        let e = sample::automorphism(&spec, &mut rng);
        ensure(family::commutes_in_family(&family::extend_to_family(&e, &spec), &spec).map_err(|e| e.to_string())?, || {
            format!("{e} fails in the family")
        })?;
    }
    let i4 = CycloCtx::new(4).unwrap();
    let roots: Vec<CycloNum> = (0..4).map(|k| ctx.root_of_unity(k)).collect();
    let others = [ctx.integer(2), ctx.integer(3), i4.one() + i4.root_of_unity(1)];
    let mut zero_set: Vec<CycloNum> = (0..20).map(|_| ctx.rational(sample::nonzero_rational(&mut rng))).collect();
    zero_set.extend(roots.iter().cloned());
    zero_set.extend(others.iter().cloned());
    for mu in &zero_set {
        ensure(family::scaling_lift(mu, &spec, true).map_err(|e| e.to_string())?, || format!("mu = {mu} does not lift at eps = 0"))?;
    }
    for mu in roots.iter().chain(&others) {
        let lifts = family::scaling_lift(mu, &spec, false).map_err(|e| e.to_string())?;
        let root = mu.pow(4).map_err(|e| e.to_string())?.is_one();
        ensure(lifts == root, || format!("mu = {mu}: family lift {lifts}, mu^4 = 1 {root}"))?;
    }
    Ok(format!("50 extensions commute in (t, eps); {} scalings lift at eps = 0; family lifts exactly for mu^4 = 1", zero_set.len()))
}

fn arithmetic() -> Outcome {
    let mut rng = sample::rng(SEED + 8);
    for n in [3u32, 4, 5, 8, 12] {
        let ctx = CycloCtx::new(n).unwrap();
        for _ in 0..200 {
            let (x, y, z) = (sample::cyclo_num(&ctx, &mut rng), sample::cyclo_num(&ctx, &mut rng), sample::cyclo_num(&ctx, &mut rng));
            ensure(&(&x + &y) + &z == &x + &(&y + &z) && &x + &y == &y + &x, || format!("addition fails on n = {n}"))?;
            ensure(&(&x * &y) * &z == &x * &(&y * &z) && &x * &y == &y * &x, || format!("multiplication fails on n = {n}"))?;
            ensure(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || format!("distributivity fails on n = {n}"))?;
            ensure(&x + &ctx.zero() == x && &x * &ctx.one() == x && (&x - &x.clone()).is_zero(), || format!("identities fail on n = {n}"))?;
            if !x.is_zero() {
                ensure((&x * &x.inv().unwrap()).is_one(), || format!("inverse fails for {x}"))?;
            }
        }
        for _ in 0..200 {
            let p = |rng: &mut _| sample::laurent(&ctx, Var::T, -4, 4, rng);
            let (f, g, h) = (p(&mut rng), p(&mut rng), p(&mut rng));
            ensure(&(&f * &g) * &h == &f * &(&g * &h) && &f * &g == &g * &f, || format!("polynomial product fails on n = {n}"))?;
            ensure(&f * &(&g + &h) == &(&f * &g) + &(&f * &h), || format!("polynomial distributivity fails on n = {n}"))?;
            ensure(&f * &LaurentPoly::constant(Var::T, ctx.one()) == f && (&f - &f.clone()).is_zero(), || {
                format!("polynomial identities fail on n = {n}")
            })?;
        }
    }
    for n in 1..=12u32 {
        let ctx = CycloCtx::new(n).unwrap();
        let zeta = ctx.root_of_unity(1);
        let value = cyclotomic_poly(n)
            .unwrap()
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, c| &acc * &zeta + ctx.rational(Rational::from_integer(c.clone())));
        ensure(value.is_zero(), || format!("Phi_{n}(zeta_{n}) = {value}"))?;
    }
    Ok("field and ring axioms on 200 cases per conductor in {3,4,5,8,12}; Phi_n(zeta_n) = 0 for n <= 12".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("gluing boundary", 1, LIMIT_GLUING, gluing_boundary),
        ("special fibers", 1, LIMIT_SPECIAL_FIBERS, special_fiber_counts),
        ("stabilizer rigidity", 5, LIMIT_STABILIZER_PER_A, stabilizers),
        ("ansatz dimensions", 3, LIMIT_ANSATZ_PER_CASE, ansatz_dimensions),
        ("component group", 1, LIMIT_COMPONENTS, components),
        ("product rule audit", 1, LIMIT_PRODUCT_RULE, product_rule),
        ("family identities", 1, LIMIT_FAMILY, family_identities),
        ("arithmetic substrate", 1, LIMIT_ARITHMETIC, arithmetic),
    ];
    let mut failed = 0;
    for (i, (name, units, limit, f)) in criteria.into_iter().enumerate() {
        let (out, took, budget) = timed(units, limit, f);
        match out {
            Ok(msg) => println!("PASS [{}] {name}: {msg} ({took:.2?} / {budget:.0?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} ({took:.2?} / {budget:.0?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
