//! Integer factorization for witness search and discriminant analysis:
//! trial division followed by Pollard-Brent rho under an iteration cap.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::{is_prime_u64, mul_mod, small_primes};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_limit: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 10_000_000,
        }
    }
}

/// Factors `|n|` into sorted `(prime, exponent)` pairs. `n = 0` is rejected.
pub fn factorize(n: &BigInt, budget: FactorBudget) -> Result<Vec<(BigUint, u32)>> {
    let too_hard = || Error::FactorizationTooHard {
        value: n.clone(),
        trial_limit: budget.trial_limit,
        rho_iterations: budget.rho_iterations,
    };
    let mut rest = n.magnitude().clone();
    if rest.is_zero() {
        return Err(too_hard());
    }
    let mut found: Vec<BigUint> = Vec::new();

    let limit = budget.trial_limit.min(1_000_000);
    for &p in small_primes() {
        if p > limit {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            found.push(pb.clone());
            rest = q;
        }
    }

    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    let mut spent = 0u64;
    while let Some(c) = stack.pop() {
        if is_probable_prime(&c, limit) {
            found.push(c);
            continue;
        }
        let d = rho_split(&c, budget.rho_iterations, &mut spent).ok_or_else(too_hard)?;
        let e = &c / &d;
        stack.push(d);
        stack.push(e);
    }

    found.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in found {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Distinct prime divisors of `|n|`.
pub fn prime_divisors(n: &BigInt, budget: FactorBudget) -> Result<Vec<BigUint>> {
    Ok(factorize(n, budget)?.into_iter().map(|(p, _)| p).collect())
}

/// Primality for a cofactor with no prime factor up to `trial_limit`.
fn is_probable_prime(n: &BigUint, trial_limit: u64) -> bool {
    if let Some(v) = n.to_u64() {
        if let Some(sq) = trial_limit.checked_mul(trial_limit) {
            if v < sq {
                return v > 1;
            }
        }
        return is_prime_u64(v);
    }
    // Miller-Rabin with the first 20 prime bases; composites passing all of
    // them are astronomically rare at the sizes met here.
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in small_primes().iter().take(20) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_split(n: &BigUint, cap: u64, spent: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(v) = n.to_u64() {
        return rho_u64(v, cap, spent).map(BigUint::from);
    }
    rho_big(n, cap, spent)
}

fn rho_u64(n: u64, cap: u64, spent: &mut u64) -> Option<u64> {
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        let mut g = 1;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                *spent += m;
                if *spent > cap {
                    return None;
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, cap: u64, spent: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    q = (q * diff(&x, &y)) % n;
                }
                *spent += m;
                if *spent > cap {
                    return None;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}
