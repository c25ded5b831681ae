use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients of the `n`-th cyclotomic polynomial Φₙ, lowest degree first.
///
/// Uses `Xⁿ − 1 = ∏_{d | n} Φ_d` and exact division by the proper-divisor
/// factors. `n = 0` has no cyclotomic polynomial and yields `None`.
pub fn cyclotomic_poly(n: u32) -> Option<Vec<BigInt>> {
    if n == 0 {
        return None;
    }
    let mut cache: Vec<Option<Vec<BigInt>>> = vec![None; n as usize + 1];
    Some(phi_rec(n, &mut cache))
}

fn phi_rec(n: u32, cache: &mut Vec<Option<Vec<BigInt>>>) -> Vec<BigInt> {
    if let Some(p) = &cache[n as usize] {
        return p.clone();
    }
    // Xⁿ − 1
    let mut acc = vec![BigInt::zero(); n as usize + 1];
    acc[0] = -BigInt::one();
    acc[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        let f = phi_rec(d, cache);
        acc = exact_div_monic(&acc, &f);
    }
    cache[n as usize] = Some(acc.clone());
    acc
}

/// Divides `p` by the monic `d`, asserting that the remainder vanishes.
fn exact_div_monic(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(d.last().is_some_and(One::is_one));
    let mut rem = p.to_vec();
    let mut quot = vec![BigInt::zero(); p.len() + 1 - d.len()];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + d.len() - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in d.iter().enumerate() {
            rem[shift + i] -= &c * di;
        }
        quot[shift] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "cyclotomic division left a remainder");
    quot
}

pub(crate) fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
