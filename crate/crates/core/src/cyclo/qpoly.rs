//! Dense univariate polynomials over ℚ, lowest degree first.
//!
//! Only what the cyclotomic field needs: reduction, multiplication and the
//! extended Euclidean algorithm. Vectors are kept trimmed (no trailing zeros),
//! and the zero polynomial is the empty vector.

use num_traits::{One, Zero};

use super::Rational;

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn mul(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let n = p.len().max(q.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let a = p.get(i).cloned().unwrap_or_else(Rational::zero);
            match q.get(i) {
                Some(b) => a - b,
                None => a,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Euclidean division `p = quot * d + rem`. `d` must be nonzero.
pub(crate) fn div_rem(p: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!d.is_empty(), "polynomial division by zero");
    let mut rem = p.to_vec();
    trim(&mut rem);
    if rem.len() < d.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = d.last().unwrap().recip();
    let mut quot = vec![Rational::zero(); rem.len() - d.len() + 1];
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let factor = rem.last().unwrap() * &lead_inv;
        for (i, c) in d.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        // the leading term cancels exactly
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Returns `(g, u)` with `g = gcd(p, m)` made monic and `u * p ≡ g (mod m)`.
pub(crate) fn ext_gcd_left(p: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (m.to_vec(), p.to_vec());
    let (mut u0, mut u1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let u = sub(&u0, &mul(&q, &u1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, u);
    }
    if let Some(lead) = r0.last().cloned() {
        let inv = lead.recip();
        for c in r0.iter_mut().chain(u0.iter_mut()) {
            *c *= &inv;
        }
    }
    (r0, u0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        let mut p: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn division_reconstructs_dividend() {
        let p = q(&[3, 0, -2, 5, 1]);
        let d = q(&[1, 2, 3]);
        let (quot, rem) = div_rem(&p, &d);
        assert!(rem.len() < d.len());
        let back = sub(&mul(&quot, &d), &sub(&[], &rem));
        assert_eq!(back, p);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        // x + 1 against x^2 + 1
        let (g, u) = ext_gcd_left(&q(&[1, 1]), &q(&[1, 0, 1]));
        assert_eq!(g, q(&[1]));
        let (_, r) = div_rem(&mul(&u, &q(&[1, 1])), &q(&[1, 0, 1]));
        assert_eq!(r, q(&[1]));
    }
}
