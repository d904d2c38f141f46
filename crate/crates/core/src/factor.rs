//! Deterministic factorization of integers below 2^127.
//!
//! Trial division by the primes below 10^5, then Pollard rho (Brent's
//! variant) with the fixed polynomial x^2 + 1 and starting points 2, 3, 4, ...
//! Primality is Miller–Rabin with the first twelve prime bases, which is
//! deterministic below 3.3 * 10^24; larger survivors are reported as
//! probable primes.

use std::sync::OnceLock;

use serde::Serialize;

pub const TRIAL_LIMIT: u32 = 100_000;
const MR_BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_DETERMINISTIC_BELOW: u128 = 3_317_044_064_679_887_385_961_981;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Primality {
    Composite,
    Prime,
    ProbablePrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u128,
    /// Prime factors with multiplicity, ascending.
    pub factors: Vec<(u128, u32)>,
    /// Composite part left when the rho budget ran out.
    pub unfactored: Option<u128>,
    /// Some factor is only a strong probable prime.
    pub probable: bool,
}

impl Factorization {
    pub fn complete(&self) -> bool {
        self.unfactored.is_none()
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Product of the primes occurring to an odd power. Only meaningful
    /// for complete factorizations.
    pub fn squarefree_kernel(&self) -> u128 {
        self.factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| *p)
            .product()
    }
}

pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // m < 2^127, so doubling never overflows.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Miller–Rabin test. Panics for `n >= 2^127`.
pub fn is_prime(n: u128) -> Primality {
    assert!(n < 1u128 << 127, "is_prime supports n < 2^127");
    if n < 2 {
        return Primality::Composite;
    }
    for &p in &MR_BASES {
        if n == p {
            return Primality::Prime;
        }
        if n.is_multiple_of(p) {
            return Primality::Composite;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return Primality::Composite;
    }
    if n < MR_DETERMINISTIC_BELOW {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

/// Brent's rho on composite `n` with f(x) = x^2 + 1. Consumes iterations
/// from `budget`; returns a non-trivial factor when one is found.
fn rho(n: u128, budget: &mut u64) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    for start in 2u128.. {
        if *budget == 0 || start >= n {
            return None;
        }
        let f = |x: u128| (mul_mod(x, x, n) + 1) % n;
        let mut y = start;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
                *budget = budget.saturating_sub(steps);
                if *budget == 0 && g == 1 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            // Batch overshot; walk back one step at a time.
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
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

/// Factors `n < 2^127` with at most `budget` rho iterations in total.
pub fn factor(n: u128, budget: u64) -> Factorization {
    assert!(n > 0, "factor(0)");
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut probable = false;
    let mut unfactored: Vec<u128> = Vec::new();
    let mut stack = Vec::new();
    if m > 1 {
        stack.push(m);
    }
    let mut budget = budget;
    let mut found: Vec<u128> = Vec::new();
    while let Some(c) = stack.pop() {
        if c < (TRIAL_LIMIT as u128) * (TRIAL_LIMIT as u128) {
            // Survived trial division, so it is prime.
            found.push(c);
            continue;
        }
        match is_prime(c) {
            Primality::Prime => found.push(c),
            Primality::ProbablePrime => {
                probable = true;
                found.push(c);
            }
            Primality::Composite => {
                if let Some(sq) = perfect_square_root(c) {
                    stack.push(sq);
                    stack.push(sq);
                    continue;
                }
                match rho(c, &mut budget) {
                    Some(g) => {
                        stack.push(g);
                        stack.push(c / g);
                    }
                    None => unfactored.push(c),
                }
            }
        }
    }
    found.sort_unstable();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    factors.sort_unstable();
    let unfactored = if unfactored.is_empty() {
        None
    } else {
        Some(unfactored.iter().product())
    };
    Factorization {
        n,
        factors,
        unfactored,
        probable,
    }
}

fn perfect_square_root(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    (r * r == n).then_some(r)
}
