//! Exact arithmetic in the Grothendieck–Witt ring of a characteristic-0 field.
//!
//! Elements are kept as `n·ℍ + Σ mᵢ⟨aᵢ⟩` where every `⟨aᵢ⟩` is a canonical
//! [`SquareClass`]. Canonical form only uses `⟨a⟩ = ⟨ab²⟩` (built into the
//! square-class representation) and `⟨a⟩ + ⟨−a⟩ = ℍ`. Deciding equality over
//! ℚ beyond that is done with the invariants in the `hilbert` submodule.

mod hilbert;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

use crate::arith::{squarefree_part, squarefree_product};

pub use hilbert::{equals_over_q, hilbert_symbol, Place};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("⟨0⟩ is not a unit square class")]
    ZeroClass,
    #[error("no sign assigned to generator `{0}`")]
    MissingGenerator(String),
    #[error("element has symbolic generators; only formal equality is available")]
    SymbolicGenerators,
    #[error("square class core does not fit in 64 bits")]
    Overflow,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(x: i64) -> Sign {
        if x < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Assignment of real signs to symbolic generators.
pub type SignAssignment = BTreeMap<String, Sign>;

/// The class `⟨a⟩` of a unit modulo squares.
///
/// `a = sign · core · Π symbols`, with `core` squarefree and each symbolic
/// generator present at most once (odd exponent). Record equality is class
/// equality when the generators are algebraically independent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    sign: Sign,
    core: u64,
    symbols: Vec<String>,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass { sign: Sign::Positive, core: 1, symbols: Vec::new() }
    }

    pub fn minus_one() -> Self {
        SquareClass { sign: Sign::Negative, core: 1, symbols: Vec::new() }
    }

    /// `⟨numerator / denominator · Π symbols⟩`; repeated symbols cancel in pairs.
    pub fn new<S: AsRef<str>>(numerator: i64, denominator: i64, symbols: &[S]) -> Result<Self, GwError> {
        if numerator == 0 || denominator == 0 {
            return Err(GwError::ZeroClass);
        }
        let sign = Sign::of(numerator).times(Sign::of(denominator));
        // a/b and a·b differ by the square b², so both reduce to the same core.
        let core = squarefree_product(
            squarefree_part(numerator.unsigned_abs()),
            squarefree_part(denominator.unsigned_abs()),
        )
        .ok_or(GwError::Overflow)?;
        let mut class = SquareClass { sign, core, symbols: Vec::new() };
        for s in symbols {
            class.toggle_symbol(s.as_ref());
        }
        Ok(class)
    }

    /// Class of a nonzero integer.
    pub fn from_integer(a: i64) -> Result<Self, GwError> {
        SquareClass::new::<&str>(a, 1, &[])
    }

    /// Class of a nonzero 128-bit integer whose absolute value fits in 64 bits.
    pub(crate) fn from_i128(a: i128) -> Result<Self, GwError> {
        if a == 0 {
            return Err(GwError::ZeroClass);
        }
        let abs = u64::try_from(a.unsigned_abs()).map_err(|_| GwError::Overflow)?;
        Ok(SquareClass {
            sign: if a < 0 { Sign::Negative } else { Sign::Positive },
            core: squarefree_part(abs),
            symbols: Vec::new(),
        })
    }

    fn toggle_symbol(&mut self, name: &str) {
        match self.symbols.binary_search_by(|s| s.as_str().cmp(name)) {
            Ok(idx) => {
                self.symbols.remove(idx);
            }
            Err(idx) => self.symbols.insert(idx, name.to_owned()),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn core(&self) -> u64 {
        self.core
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn is_rational(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The signed squarefree integer `±core`; `None` when generators are present.
    pub fn rational_value(&self) -> Option<i128> {
        self.is_rational().then(|| self.sign.as_i64() as i128 * self.core as i128)
    }

    pub fn negate(&self) -> SquareClass {
        SquareClass { sign: self.sign.flip(), core: self.core, symbols: self.symbols.clone() }
    }

    /// `⟨a⟩⟨b⟩ = ⟨ab⟩`.
    ///
    /// # Panics
    ///
    /// If the product core exceeds 64 bits.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        self.checked_mul(other).expect("square class core exceeds 64 bits")
    }

    pub fn checked_mul(&self, other: &SquareClass) -> Result<SquareClass, GwError> {
        let core = squarefree_product(self.core, other.core).ok_or(GwError::Overflow)?;
        let mut out = SquareClass { sign: self.sign.times(other.sign), core, symbols: self.symbols.clone() };
        for s in &other.symbols {
            out.toggle_symbol(s);
        }
        Ok(out)
    }

    /// Real sign of a representative once every generator has a sign.
    pub fn sign_under(&self, assignment: &SignAssignment) -> Result<Sign, GwError> {
        let mut sign = self.sign;
        for s in &self.symbols {
            let g = assignment.get(s).ok_or_else(|| GwError::MissingGenerator(s.clone()))?;
            sign = sign.times(*g);
        }
        Ok(sign)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        if self.sign == Sign::Negative {
            f.write_str("-")?;
        }
        let mut first = true;
        if self.core != 1 || self.symbols.is_empty() {
            write!(f, "{}", self.core)?;
            first = false;
        }
        for s in &self.symbols {
            if !first {
                f.write_str("·")?;
            }
            f.write_str(s)?;
            first = false;
        }
        f.write_str("⟩")
    }
}

/// An element `n·ℍ + Σ mᵢ⟨aᵢ⟩` of the Grothendieck–Witt ring.
///
/// Multiplicities may be negative (the Grothendieck group), but a class and
/// its negation never both carry multiplicities of the same sign: such pairs
/// are folded into `ℍ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GwElement {
    hyperbolics: i64,
    classes: BTreeMap<SquareClass, i64>,
}

impl GwElement {
    pub fn zero() -> Self {
        GwElement::default()
    }

    pub fn one() -> Self {
        GwElement::from_class(SquareClass::one(), 1)
    }

    /// `n·ℍ`.
    pub fn hyperbolic(n: i64) -> Self {
        GwElement { hyperbolics: n, classes: BTreeMap::new() }
    }

    pub fn from_class(class: SquareClass, multiplicity: i64) -> Self {
        let mut out = GwElement::zero();
        out.add_class(class, multiplicity);
        out
    }

    /// `⟨numerator / denominator · Π symbols⟩` as a ring element.
    pub fn class_of<S: AsRef<str>>(numerator: i64, denominator: i64, symbols: &[S]) -> Result<Self, GwError> {
        Ok(GwElement::from_class(SquareClass::new(numerator, denominator, symbols)?, 1))
    }

    /// `⟨a⟩` for a nonzero integer `a`.
    pub fn unit(a: i64) -> Result<Self, GwError> {
        Ok(GwElement::from_class(SquareClass::from_integer(a)?, 1))
    }

    pub fn hyperbolics(&self) -> i64 {
        self.hyperbolics
    }

    pub fn classes(&self) -> impl Iterator<Item = (&SquareClass, i64)> {
        self.classes.iter().map(|(c, m)| (c, *m))
    }

    pub fn multiplicity_of(&self, class: &SquareClass) -> i64 {
        self.classes.get(class).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.hyperbolics == 0 && self.classes.is_empty()
    }

    /// Equality using only `⟨a⟩ = ⟨ab²⟩` and `⟨a⟩ + ⟨−a⟩ = ℍ`.
    ///
    /// Records are unique for effective elements, but a virtual element such
    /// as `⟨a⟩ − ⟨−a⟩` also equals `ℍ − 2⟨−a⟩`. Two elements agree formally
    /// iff their ranks agree and, for every pair `{c, −c}`, so does `m_c − m_{−c}`.
    pub fn formally_equal(&self, other: &GwElement) -> bool {
        fn pair_differences(x: &GwElement) -> BTreeMap<SquareClass, i64> {
            let mut out = BTreeMap::new();
            for (c, m) in &x.classes {
                let (key, m) = if c.sign == Sign::Positive { (c.clone(), *m) } else { (c.negate(), -m) };
                *out.entry(key).or_insert(0) += m;
            }
            out.retain(|_, m| *m != 0);
            out
        }
        self.rank() == other.rank() && pair_differences(self) == pair_differences(other)
    }

    pub fn has_symbols(&self) -> bool {
        self.classes.keys().any(|c| !c.is_rational())
    }

    /// Adds `m·⟨c⟩` and restores canonical form for that class pair.
    ///
    /// # Panics
    ///
    /// On multiplicity overflow.
    pub fn add_class(&mut self, class: SquareClass, m: i64) {
        self.try_add_class(class, m).expect("multiplicity overflow");
    }

    pub(crate) fn try_add_class(&mut self, class: SquareClass, m: i64) -> Result<(), GwError> {
        if m == 0 {
            return Ok(());
        }
        let neg = class.negate();
        let here = self.multiplicity_of(&class).checked_add(m).ok_or(GwError::Overflow)?;
        let there = self.multiplicity_of(&neg);
        if here != 0 && there != 0 && (here > 0) == (there > 0) {
            let t = if here > 0 { here.min(there) } else { here.max(there) };
            self.hyperbolics = self.hyperbolics.checked_add(t).ok_or(GwError::Overflow)?;
            self.set(class, here - t);
            self.set(neg, there - t);
        } else {
            self.set(class, here);
        }
        Ok(())
    }

    fn set(&mut self, class: SquareClass, m: i64) {
        if m == 0 {
            self.classes.remove(&class);
        } else {
            self.classes.insert(class, m);
        }
    }

    /// `2·hyperbolics + Σ multiplicities`; the specialization to GW(ℂ) ≅ ℤ.
    pub fn rank(&self) -> i64 {
        2 * self.hyperbolics + self.classes.values().sum::<i64>()
    }

    /// Signature after giving each generator a real sign; `ℍ` contributes 0.
    pub fn signature(&self, assignment: &SignAssignment) -> Result<i64, GwError> {
        let mut total = 0;
        for (c, m) in &self.classes {
            total += c.sign_under(assignment)?.as_i64() * m;
        }
        Ok(total)
    }

    /// Signature of an element without generators.
    pub fn real_signature(&self) -> Result<i64, GwError> {
        self.signature(&SignAssignment::new())
    }

    /// Product of all diagonal entries modulo squares, `ℍ` counting as `⟨−1⟩`.
    pub fn discriminant(&self) -> SquareClass {
        let mut d = SquareClass::one();
        if self.hyperbolics.rem_euclid(2) == 1 {
            d = d.mul(&SquareClass::minus_one());
        }
        for (c, m) in &self.classes {
            if m.rem_euclid(2) == 1 {
                d = d.mul(c);
            }
        }
        d
    }

    /// Replaces every generator by a nonzero integer value and re-canonicalizes.
    pub fn specialize(&self, values: &BTreeMap<String, i64>) -> Result<GwElement, GwError> {
        let mut out = GwElement::hyperbolic(self.hyperbolics);
        for (c, m) in &self.classes {
            let mut class = SquareClass { sign: c.sign, core: c.core, symbols: Vec::new() };
            for s in &c.symbols {
                let v = values.get(s).ok_or_else(|| GwError::MissingGenerator(s.clone()))?;
                class = class.checked_mul(&SquareClass::from_integer(*v)?)?;
            }
            out.add_class(class, *m);
        }
        Ok(out)
    }

    /// Equality of two elements without generators in GW(ℚ).
    pub fn equals_over_q(&self, other: &GwElement) -> Result<bool, GwError> {
        equals_over_q(self, other)
    }
}

impl AddAssign<&GwElement> for GwElement {
    fn add_assign(&mut self, rhs: &GwElement) {
        self.hyperbolics += rhs.hyperbolics;
        for (c, m) in &rhs.classes {
            self.add_class(c.clone(), *m);
        }
    }
}

impl AddAssign for GwElement {
    fn add_assign(&mut self, rhs: GwElement) {
        *self += &rhs;
    }
}

impl Add<&GwElement> for &GwElement {
    type Output = GwElement;
    fn add(self, rhs: &GwElement) -> GwElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GwElement {
    type Output = GwElement;
    fn add(mut self, rhs: GwElement) -> GwElement {
        self += &rhs;
        self
    }
}

impl Neg for &GwElement {
    type Output = GwElement;
    fn neg(self) -> GwElement {
        GwElement {
            hyperbolics: -self.hyperbolics,
            classes: self.classes.iter().map(|(c, m)| (c.clone(), -m)).collect(),
        }
    }
}

impl Neg for GwElement {
    type Output = GwElement;
    fn neg(self) -> GwElement {
        -&self
    }
}

impl Sub<&GwElement> for &GwElement {
    type Output = GwElement;
    fn sub(self, rhs: &GwElement) -> GwElement {
        self + &(-rhs)
    }
}

impl Sub for GwElement {
    type Output = GwElement;
    fn sub(self, rhs: GwElement) -> GwElement {
        &self - &rhs
    }
}

impl Mul<&GwElement> for &GwElement {
    type Output = GwElement;

    /// Bilinear in classes, with `ℍ·⟨a⟩ = ℍ` and `ℍ·ℍ = 2ℍ`.
    fn mul(self, rhs: &GwElement) -> GwElement {
        let lhs_classes: i64 = self.classes.values().sum();
        let rhs_classes: i64 = rhs.classes.values().sum();
        let mut out = GwElement::hyperbolic(
            2 * self.hyperbolics * rhs.hyperbolics
                + self.hyperbolics * rhs_classes
                + rhs.hyperbolics * lhs_classes,
        );
        for (a, m) in &self.classes {
            for (b, n) in &rhs.classes {
                out.add_class(a.mul(b), m * n);
            }
        }
        out
    }
}

impl Mul for GwElement {
    type Output = GwElement;
    fn mul(self, rhs: GwElement) -> GwElement {
        &self * &rhs
    }
}

impl std::iter::Sum for GwElement {
    fn sum<I: Iterator<Item = GwElement>>(iter: I) -> GwElement {
        iter.fold(GwElement::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for GwElement {
    fn product<I: Iterator<Item = GwElement>>(iter: I) -> GwElement {
        iter.fold(GwElement::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, m: i64, body: &dyn fmt::Display| -> fmt::Result {
            match (first, m < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if m.unsigned_abs() != 1 {
                write!(f, "{}", m.unsigned_abs())?;
            }
            write!(f, "{body}")
        };
        if self.hyperbolics != 0 {
            term(f, self.hyperbolics, &"ℍ")?;
        }
        for (c, m) in &self.classes {
            term(f, *m, c)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GwElement {
    type Err = GwError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_element(s)
    }
}
