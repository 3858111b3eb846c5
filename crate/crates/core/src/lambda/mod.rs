//! The coefficient ring `Λ = Z[1/N]` and linear algebra over it.

mod invariants;
mod lattice;
mod matrix;

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub use invariants::{invariants_by_orbits, GroupAction, IndexedModuleFamily, OrbitInvariants};
pub use lattice::{hermite_rows, integer_kernel, lattice_index, smith_diagonal};
pub use matrix::LambdaMatrix;

/// `Z[1/N]`, identified by the set of primes dividing `N`.
///
/// Only the radical of `N` matters for equality; the base itself is kept for
/// display.
#[derive(Clone, Copy, Debug)]
pub struct LambdaRing {
    base: u64,
    radical: u64,
}

impl LambdaRing {
    pub fn new(base: u64) -> Result<Self> {
        if base == 0 {
            return Err(Error::InvalidBase);
        }
        Ok(LambdaRing { base, radical: prime_factors(base).iter().product() })
    }

    /// The ring `Z` itself.
    pub fn integers() -> Self {
        LambdaRing { base: 1, radical: 1 }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Product of the inverted primes.
    pub fn radical(&self) -> u64 {
        self.radical
    }

    pub fn primes(&self) -> Vec<u64> {
        prime_factors(self.radical)
    }

    /// True iff every prime of `n` is inverted, i.e. `n` is a unit up to sign.
    /// Zero is never supported.
    pub fn supports(&self, n: &BigInt) -> bool {
        if n.is_zero() {
            return false;
        }
        let mut m: BigUint = n.magnitude().clone();
        if m.is_one() {
            return true;
        }
        let rad = BigUint::from(self.radical);
        loop {
            let g = m.gcd(&rad);
            if g.is_one() {
                return m.is_one();
            }
            m /= g;
        }
    }

    pub fn supports_u64(&self, n: u64) -> bool {
        self.supports(&BigInt::from(n))
    }

    /// The smallest ring inverting the primes of both.
    pub fn join(&self, other: &LambdaRing) -> LambdaRing {
        LambdaRing {
            base: self.base.lcm(&other.base),
            radical: self.radical.lcm(&other.radical),
        }
    }

    /// `Z[1/N][1/n]`.
    pub fn with_inverted(&self, n: u64) -> Result<LambdaRing> {
        Ok(self.join(&LambdaRing::new(n)?))
    }

    /// True iff `self ⊆ other` as subrings of `Q`.
    pub fn is_subring_of(&self, other: &LambdaRing) -> bool {
        other.supports_u64(self.radical)
    }

    pub fn zero(&self) -> LocalizedScalar {
        LocalizedScalar { value: BigRational::zero(), ring: *self }
    }

    pub fn one(&self) -> LocalizedScalar {
        LocalizedScalar { value: BigRational::one(), ring: *self }
    }

    pub fn int(&self, n: impl Into<BigInt>) -> LocalizedScalar {
        LocalizedScalar { value: BigRational::from_integer(n.into()), ring: *self }
    }

    /// `numerator / denominator`, failing if it is not an element of this ring.
    pub fn fraction(
        &self,
        numerator: impl Into<BigInt>,
        denominator: impl Into<BigInt>,
    ) -> Result<LocalizedScalar> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        LocalizedScalar::from_rational(*self, BigRational::new(numerator.into(), den))
    }
}

impl PartialEq for LambdaRing {
    fn eq(&self, other: &Self) -> bool {
        self.radical == other.radical
    }
}

impl Eq for LambdaRing {}

impl core::hash::Hash for LambdaRing {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.radical.hash(state);
    }
}

impl fmt::Display for LambdaRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base == 1 {
            write!(f, "Z")
        } else {
            write!(f, "Z[1/{}]", self.base)
        }
    }
}

/// Distinct primes of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// An element of `Z[1/N]`, stored as a reduced fraction.
#[derive(Clone, Debug)]
pub struct LocalizedScalar {
    value: BigRational,
    ring: LambdaRing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
}

impl LocalizedScalar {
    pub fn from_rational(ring: LambdaRing, value: BigRational) -> Result<Self> {
        if !value.denom().is_one() && !ring.supports(value.denom()) {
            return Err(Error::NotInRing {
                numerator: value.numer().clone(),
                denominator: value.denom().clone(),
                base: ring.base,
            });
        }
        Ok(LocalizedScalar { value, ring })
    }

    pub(crate) fn from_rational_unchecked(ring: LambdaRing, value: BigRational) -> Self {
        LocalizedScalar { value, ring }
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    /// Units of `Z[1/N]` are `±` products of powers of the inverted primes.
    pub fn is_unit(&self) -> bool {
        self.ring.supports(self.value.numer())
    }

    /// Moves the value to a larger ring (or any ring still containing it).
    pub fn in_ring(&self, ring: LambdaRing) -> Result<Self> {
        LocalizedScalar::from_rational(ring, self.value.clone())
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.base, right: other.ring.base });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(LocalizedScalar { value: &self.value + &other.value, ring: self.ring })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(LocalizedScalar { value: &self.value - &other.value, ring: self.ring })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(LocalizedScalar { value: &self.value * &other.value, ring: self.ring })
    }

    /// `self / other`, defined when `other` is a unit.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if !other.is_unit() {
            return Err(Error::NotInvertible { witness: other.clone() });
        }
        Ok(LocalizedScalar { value: &self.value / &other.value, ring: self.ring })
    }

    pub fn try_inverse(&self) -> Result<Self> {
        self.ring.one().try_div(self)
    }

    pub fn pow(&self, exp: u32) -> Self {
        LocalizedScalar { value: num_traits::pow(self.value.clone(), exp as usize), ring: self.ring }
    }
}

/// Ring operations on two scalars of the same `Λ`.
pub fn scalar_arith(x: &LocalizedScalar, y: &LocalizedScalar, op: ScalarOp) -> Result<LocalizedScalar> {
    match op {
        ScalarOp::Add => x.try_add(y),
        ScalarOp::Sub => x.try_sub(y),
        ScalarOp::Mul => x.try_mul(y),
    }
}

/// Unit test in `Λ`: the numerator's prime support divides `N`.
pub fn is_unit(x: &LocalizedScalar) -> bool {
    x.is_unit()
}

impl PartialEq for LocalizedScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.value == other.value
    }
}

impl Eq for LocalizedScalar {}

impl PartialOrd for LocalizedScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.ring == other.ring).then(|| self.value.cmp(&other.value))
    }
}

impl fmt::Display for LocalizedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_integer() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

// Operator forms panic on a ring mismatch; use the `try_*` methods when the
// operands may come from different rings.
impl<'a> Add<&'a LocalizedScalar> for &'a LocalizedScalar {
    type Output = LocalizedScalar;
    fn add(self, rhs: &'a LocalizedScalar) -> LocalizedScalar {
        self.try_add(rhs).expect("ring mismatch in scalar addition")
    }
}

impl<'a> Sub<&'a LocalizedScalar> for &'a LocalizedScalar {
    type Output = LocalizedScalar;
    fn sub(self, rhs: &'a LocalizedScalar) -> LocalizedScalar {
        self.try_sub(rhs).expect("ring mismatch in scalar subtraction")
    }
}

impl<'a> Mul<&'a LocalizedScalar> for &'a LocalizedScalar {
    type Output = LocalizedScalar;
    fn mul(self, rhs: &'a LocalizedScalar) -> LocalizedScalar {
        self.try_mul(rhs).expect("ring mismatch in scalar multiplication")
    }
}

impl Neg for &LocalizedScalar {
    type Output = LocalizedScalar;
    fn neg(self) -> LocalizedScalar {
        LocalizedScalar { value: -&self.value, ring: self.ring }
    }
}

impl Neg for LocalizedScalar {
    type Output = LocalizedScalar;
    fn neg(self) -> LocalizedScalar {
        LocalizedScalar { value: -self.value, ring: self.ring }
    }
}
