//! Arithmetic in GF(q) for an odd prime q and in its quadratic extension
//! GF(q²) = GF(q)[ω] / (ω² − n), with n the smallest non-square of GF(q).

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    value: u32,
    modulus: u32,
}

impl PrimeFieldElement {
    pub fn new(value: u32, modulus: u32) -> Self {
        debug_assert!(is_prime(modulus));
        Self {
            value: value % modulus,
            modulus,
        }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Self {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn lift(self, value: u32) -> Self {
        Self {
            value: value % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.lift(self.value + rhs.value)
    }

    pub fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.lift(self.value + self.modulus - rhs.value)
    }

    pub fn neg(self) -> Self {
        self.lift(self.modulus - self.value)
    }

    pub fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.lift(self.value * rhs.value)
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(u64::from(self.modulus) - 2))
    }

    pub fn is_square(self) -> bool {
        self.is_zero() || self.pow(u64::from(self.modulus - 1) / 2).value == 1
    }
}

impl fmt::Debug for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The quadratic extension GF(q²) of a prime field of odd order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadField {
    q: u32,
    nonsquare: u32,
}

impl QuadField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) || q == 2 {
            return Err(Error::UnsupportedOrder(q));
        }
        let nonsquare = (2..q)
            .find(|&n| !PrimeFieldElement::new(n, q).is_square())
            .expect("an odd prime field has non-squares");
        Ok(Self { q, nonsquare })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The element n with ω² = n.
    pub fn nonsquare(&self) -> u32 {
        self.nonsquare
    }

    pub fn order(&self) -> u32 {
        self.q * self.q
    }

    pub fn element(&self, a: u32, b: u32) -> QuadExtElement {
        QuadExtElement {
            a: PrimeFieldElement::new(a, self.q),
            b: PrimeFieldElement::new(b, self.q),
            nonsquare: self.nonsquare,
        }
    }

    pub fn zero(&self) -> QuadExtElement {
        self.element(0, 0)
    }

    pub fn one(&self) -> QuadExtElement {
        self.element(1, 0)
    }

    pub fn omega(&self) -> QuadExtElement {
        self.element(0, 1)
    }

    /// Element with index `a·q + b`, the lexicographic order on `(a, b)`.
    pub fn from_index(&self, index: u32) -> QuadExtElement {
        self.element(index / self.q, index % self.q)
    }

    /// All q² elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = QuadExtElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// The smallest element (in index order) of multiplicative order q² − 1.
    pub fn primitive_element(&self) -> QuadExtElement {
        let target = u64::from(self.order() - 1);
        self.elements()
            .find(|x| x.multiplicative_order() == Some(target))
            .expect("GF(q^2)* is cyclic")
    }
}

/// `a + b·ω` with ω² equal to the field's fixed non-square.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    pub a: PrimeFieldElement,
    pub b: PrimeFieldElement,
    nonsquare: u32,
}

impl QuadExtElement {
    fn q(&self) -> u32 {
        self.a.modulus()
    }

    fn with(self, a: PrimeFieldElement, b: PrimeFieldElement) -> Self {
        Self {
            a,
            b,
            nonsquare: self.nonsquare,
        }
    }

    pub fn index(&self) -> u32 {
        self.a.value() * self.q() + self.b.value()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_in_subfield(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(self, rhs: Self) -> Self {
        self.with(self.a.add(rhs.a), self.b.add(rhs.b))
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.with(self.a.sub(rhs.a), self.b.sub(rhs.b))
    }

    pub fn neg(self) -> Self {
        self.with(self.a.neg(), self.b.neg())
    }

    pub fn mul(self, rhs: Self) -> Self {
        let n = PrimeFieldElement::new(self.nonsquare, self.q());
        let a = self.a.mul(rhs.a).add(n.mul(self.b).mul(rhs.b));
        let b = self.a.mul(rhs.b).add(self.b.mul(rhs.a));
        self.with(a, b)
    }

    pub fn scale(self, s: PrimeFieldElement) -> Self {
        self.with(self.a.mul(s), self.b.mul(s))
    }

    /// x ↦ x^q. Since q is odd, ω^q = −ω.
    pub fn frobenius(self) -> Self {
        self.with(self.a, self.b.neg())
    }

    /// N(x) = x^(q+1) = a² − n·b².
    pub fn norm(self) -> PrimeFieldElement {
        let prod = self.mul(self.frobenius());
        debug_assert!(prod.b.is_zero());
        prod.a
    }

    pub fn inv(self) -> Result<Self> {
        let n_inv = self.norm().inv()?;
        Ok(self.frobenius().scale(n_inv))
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = self.with(
            PrimeFieldElement::one(self.q()),
            PrimeFieldElement::zero(self.q()),
        );
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            exp >>= 1;
        }
        acc
    }

    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut x = *self;
        let mut k = 1;
        while !(x.a.value() == 1 && x.b.is_zero()) {
            x = x.mul(*self);
            k += 1;
        }
        Some(k)
    }
}

impl fmt::Debug for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w", self.a.value(), self.b.value())
    }
}
