//! Small integer number theory used by the square-class and Hilbert-symbol code.

use num_integer::Integer;

/// Integer cube root, rounded down.
fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    while r.saturating_mul(r).saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Integer square root, rounded down.
pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Squarefree part of `n > 0`: the unique squarefree `s` with `n = s * m^2`.
///
/// Primes up to the cube root are divided out by trial division; what is left
/// has at most two prime factors, so it is either a perfect square or already
/// squarefree.
pub fn squarefree_part(mut n: u64) -> u64 {
    assert!(n > 0, "squarefree part of zero");
    let bound = icbrt(n);
    let mut out = 1u64;
    let mut p = 2u64;
    while p <= bound && p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = isqrt(n);
    if r * r != n {
        out *= n;
    }
    out
}

/// Squarefree part of the product of two squarefree numbers.
///
/// Returns `None` if the result does not fit in 64 bits.
pub fn squarefree_product(a: u64, b: u64) -> Option<u64> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b / g)
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}

/// `base^exp mod m` with 128-bit intermediates.
pub(crate) fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a / p)` for an odd prime `p` and `a` coprime to `p`.
pub(crate) fn legendre(a: i128, p: u64) -> i8 {
    let p128 = p as u128;
    let a = a.rem_euclid(p as i128) as u128;
    debug_assert!(a != 0);
    if pow_mod(a, (p128 - 1) / 2, p128) == 1 {
        1
    } else {
        -1
    }
}
