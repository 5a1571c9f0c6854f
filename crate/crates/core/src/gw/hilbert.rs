//! Hilbert symbols over ℚ and the complete invariant set deciding equality in
//! GW(ℚ): rank, signature, discriminant and the Hasse–Witt invariant at every
//! prime.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use super::{GwElement, GwError, SquareClass};
use crate::arith::{is_prime, legendre, prime_divisors};

/// A place of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn squarefree_rep(x: Rational64) -> i128 {
    assert!(*x.numer() != 0, "Hilbert symbol of zero");
    let v = *x.numer() as i128 * *x.denom() as i128;
    SquareClass::from_i128(v)
        .and_then(|c| c.rational_value().ok_or(GwError::SymbolicGenerators))
        .expect("square class of a 64-bit rational")
}

/// `(a, b)_v`: `+1` iff `z² = a x² + b y²` has a nontrivial solution in ℚ_v.
///
/// # Panics
///
/// If `a` or `b` is zero, or `place` is `Prime(p)` with `p` not prime.
pub fn hilbert_symbol(a: Rational64, b: Rational64, place: Place) -> i8 {
    if let Place::Prime(p) = place {
        assert!(is_prime(p), "{p} is not prime");
    }
    hilbert_squarefree(squarefree_rep(a), squarefree_rep(b), place)
}

/// Splits `a = p^e · u` with `p ∤ u`.
fn split(mut a: i128, p: i128) -> (u32, i128) {
    let mut e = 0;
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    (e, a)
}

/// Hilbert symbol of two nonzero integers at a place.
pub(crate) fn hilbert_squarefree(a: i128, b: i128, place: Place) -> i8 {
    let p = match place {
        Place::Real => return if a < 0 && b < 0 { -1 } else { 1 },
        Place::Prime(p) => p,
    };
    let (alpha, u) = split(a, p as i128);
    let (beta, v) = split(b, p as i128);
    let (alpha, beta) = (alpha % 2, beta % 2);
    let mut exponent = 0u32;
    if p == 2 {
        let eps = |x: i128| u32::from(x.rem_euclid(4) == 3);
        let omega = |x: i128| u32::from(matches!(x.rem_euclid(8), 3 | 5));
        exponent += eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        if exponent % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps_p = u32::from(p % 4 == 3);
        exponent += alpha * beta * eps_p;
        let mut out: i8 = if exponent % 2 == 0 { 1 } else { -1 };
        if beta == 1 {
            out *= legendre(u, p);
        }
        if alpha == 1 {
            out *= legendre(v, p);
        }
        out
    }
}

/// A diagonal form `⊕ mᵢ·⟨aᵢ⟩` with squarefree `aᵢ` and `mᵢ > 0`.
#[derive(Debug, Default)]
struct Diagonal {
    entries: Vec<(i128, u64)>,
}

impl Diagonal {
    fn push(&mut self, a: i128, m: u64) {
        if m > 0 {
            self.entries.push((a, m));
        }
    }

    fn rank(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    fn signature(&self) -> i128 {
        self.entries.iter().map(|&(a, m)| a.signum() * m as i128).sum()
    }

    fn discriminant(&self) -> Result<i128, GwError> {
        let mut d = 1i128;
        for &(a, m) in &self.entries {
            if m % 2 == 1 {
                d = sf_mul(d, a)?;
            }
        }
        Ok(d)
    }

    /// `Π_{i<j} (aᵢ, aⱼ)_p` over the expanded list of entries.
    ///
    /// Appending `m` copies of `⟨a⟩` to a form of discriminant `d` multiplies
    /// the invariant by `(d, a)^m · (a, a)^{m(m−1)/2}`.
    fn hasse(&self, place: Place) -> Result<i8, GwError> {
        let mut d = 1i128;
        let mut s = 1i8;
        for &(a, m) in &self.entries {
            if m % 2 == 1 {
                s *= hilbert_squarefree(d, a, place);
            }
            let pairs = (m as u128) * (m as u128 - 1) / 2;
            if pairs % 2 == 1 {
                s *= hilbert_squarefree(a, a, place);
            }
            if m % 2 == 1 {
                d = sf_mul(d, a)?;
            }
        }
        Ok(s)
    }
}

/// Squarefree part of the product of two squarefree integers.
fn sf_mul(a: i128, b: i128) -> Result<i128, GwError> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b / g).ok_or(GwError::Overflow)
}

fn rational_entries(x: &GwElement) -> Result<Vec<(i128, i64)>, GwError> {
    x.classes()
        .map(|(c, m)| c.rational_value().map(|a| (a, m)).ok_or(GwError::SymbolicGenerators))
        .collect()
}

/// Decides `x = y` in GW(ℚ).
///
/// Both sides are moved to effective forms (`x⁺ + y⁻` against `y⁺ + x⁻`, valid
/// by Witt cancellation) and compared by rank, signature, discriminant and the
/// Hasse–Witt invariant at every prime dividing twice the entries.
pub fn equals_over_q(x: &GwElement, y: &GwElement) -> Result<bool, GwError> {
    let (xs, ys) = (rational_entries(x)?, rational_entries(y)?);
    let mut lhs = Diagonal::default();
    let mut rhs = Diagonal::default();
    let place_hyperbolics = |h: i64, pos: &mut Diagonal, neg: &mut Diagonal| {
        let side = if h >= 0 { pos } else { neg };
        side.push(1, h.unsigned_abs());
        side.push(-1, h.unsigned_abs());
    };
    place_hyperbolics(x.hyperbolics(), &mut lhs, &mut rhs);
    place_hyperbolics(y.hyperbolics(), &mut rhs, &mut lhs);
    for &(a, m) in &xs {
        if m > 0 { lhs.push(a, m as u64) } else { rhs.push(a, m.unsigned_abs()) }
    }
    for &(a, m) in &ys {
        if m > 0 { rhs.push(a, m as u64) } else { lhs.push(a, m.unsigned_abs()) }
    }

    if lhs.rank() != rhs.rank() || lhs.signature() != rhs.signature() {
        return Ok(false);
    }
    if lhs.discriminant()? != rhs.discriminant()? {
        return Ok(false);
    }
    let mut primes = BTreeSet::from([2u64]);
    for &(a, _) in lhs.entries.iter().chain(&rhs.entries) {
        let abs = u64::try_from(a.unsigned_abs()).map_err(|_| GwError::Overflow)?;
        primes.extend(prime_divisors(abs));
    }
    for p in primes {
        if lhs.hasse(Place::Prime(p))? != rhs.hasse(Place::Prime(p))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn cls(a: i64, m: i64) -> GwElement {
        GwElement::from_class(SquareClass::from_integer(a).unwrap(), m)
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(q(-1), q(-1), Place::Real), -1);
        assert_eq!(hilbert_symbol(q(-1), q(-1), Place::Prime(2)), -1);
        for p in [2, 3, 5, 7, 11] {
            for b in [-6, -1, 2, 3, 5, 7, 10] {
                assert_eq!(hilbert_symbol(q(1), q(b), Place::Prime(p)), 1);
            }
        }
        assert_eq!(hilbert_symbol(q(3), q(3), Place::Prime(3)), -1);
        // (2, 5)_5 = (2/5) = -1
        assert_eq!(hilbert_symbol(q(2), q(5), Place::Prime(5)), -1);
        // rationals reduce to their square class
        assert_eq!(hilbert_symbol(Rational64::new(-1, 4), q(-9), Place::Prime(2)), -1);
    }

    #[test]
    #[should_panic(expected = "not prime")]
    fn non_prime_place() {
        hilbert_symbol(q(1), q(1), Place::Prime(9));
    }

    #[test]
    fn equality_examples() {
        assert!(equals_over_q(&cls(2, 2), &cls(1, 2)).unwrap());
        assert!(!equals_over_q(&cls(1, 2), &cls(3, 2)).unwrap());
        let x = GwElement::hyperbolic(2) + cls(1, 8);
        assert!(equals_over_q(&x, &x).unwrap());
        // ⟨1⟩ + ⟨1⟩ = ⟨5⟩ + ⟨5⟩ since 5 = 1² + 2²
        assert!(equals_over_q(&cls(1, 2), &cls(5, 2)).unwrap());
        // ⟨a⟩ + ⟨-a⟩ and ℍ
        assert!(equals_over_q(&(cls(3, 1) + cls(-3, 1)), &GwElement::hyperbolic(1)).unwrap());
        // virtual elements
        assert!(equals_over_q(&(cls(2, 2) - cls(1, 2)), &GwElement::zero()).unwrap());
        assert!(!equals_over_q(&(cls(7, 1) - cls(3, 1)), &GwElement::zero()).unwrap());
    }

    #[test]
    fn symbolic_rejected() {
        let s = GwElement::class_of(1, 1, &["d1"]).unwrap();
        assert_eq!(equals_over_q(&s, &s), Err(GwError::SymbolicGenerators));
    }
}
