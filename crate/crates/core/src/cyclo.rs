//! Arithmetic in `R(σ)_Λ = Λ[t]/(t^s - 1)` and `R̃(σ)_Λ = Λ[t]/(Φ_s)`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lambda::{LambdaMatrix, LambdaRing, LocalizedScalar};
use crate::{Error, Result};

pub fn euler_phi(n: u64) -> u64 {
    crate::lambda::prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// Divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer coefficients of `Φ_d`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicPoly {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for CyclotomicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of `num` by the monic `den`; panics if the division is not exact.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// `Φ_e` for every divisor `e` of `s`, keyed by `e`.
pub fn cyclotomic_family(s: u64) -> BTreeMap<u64, CyclotomicPoly> {
    assert!(s >= 1, "cyclotomic order must be positive");
    let divs = divisors(s);
    let mut out: BTreeMap<u64, CyclotomicPoly> = BTreeMap::new();
    for &d in &divs {
        // t^d - 1 divided by Φ_e for the proper divisors e of d
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = BigInt::from(-1);
        p[d as usize] = BigInt::one();
        for e in divisors(d).into_iter().filter(|&e| e != d) {
            p = exact_div_monic(&p, &out[&e].coeffs);
        }
        out.insert(d, CyclotomicPoly { order: d, coeffs: p });
    }
    out
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic(d: u64) -> CyclotomicPoly {
    cyclotomic_family(d).remove(&d).expect("d divides itself")
}

/// Remainder of `coeffs` modulo the monic `phi`.
fn reduce_rational(mut coeffs: Vec<BigRational>, phi: &[BigInt]) -> Vec<BigRational> {
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        let c = core::mem::take(&mut coeffs[i]);
        if c.is_zero() {
            continue;
        }
        for (j, p) in phi[..deg].iter().enumerate() {
            if !p.is_zero() {
                coeffs[i - deg + j] -= &c * p;
            }
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, BigRational::zero());
    coeffs
}

/// An element of `Λ[t]/(t^s - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepRingElement {
    ring: LambdaRing,
    coeffs: Vec<LocalizedScalar>,
}

impl RepRingElement {
    pub fn new(ring: LambdaRing, coeffs: Vec<LocalizedScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch { left: ring.base(), right: bad.ring().base() });
        }
        Ok(RepRingElement { ring, coeffs })
    }

    pub fn from_i64(ring: LambdaRing, coeffs: &[i64]) -> Result<Self> {
        Self::new(ring, coeffs.iter().map(|&c| ring.int(c)).collect())
    }

    pub fn zero(ring: LambdaRing, s: usize) -> Self {
        RepRingElement { ring, coeffs: vec![ring.zero(); s] }
    }

    /// `t^e`.
    pub fn monomial(ring: LambdaRing, s: usize, e: usize) -> Self {
        let mut x = Self::zero(ring, s);
        x.coeffs[e % s] = ring.one();
        x
    }

    pub fn one(ring: LambdaRing, s: usize) -> Self {
        Self::monomial(ring, s, 0)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[LocalizedScalar] {
        &self.coeffs
    }

    pub fn add_at(&mut self, e: usize, c: &LocalizedScalar) {
        let s = self.order();
        self.coeffs[e % s] = &self.coeffs[e % s] + c;
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.base(), right: other.ring.base() });
        }
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), found: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RepRingElement { ring: self.ring, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(RepRingElement { ring: self.ring, coeffs })
    }

    /// Cyclic convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let s = self.order();
        let mut acc = vec![BigRational::zero(); s];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % s] += a.as_rational() * b.as_rational();
                }
            }
        }
        let coeffs = acc.into_iter().map(|v| LocalizedScalar::from_rational_unchecked(self.ring, v)).collect();
        Ok(RepRingElement { ring: self.ring, coeffs })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(self.ring, self.order());
        for _ in 0..exp {
            out = out.mul(self).expect("same ring and order");
        }
        out
    }
}

/// An element of `Λ[t]/(Φ_s)` in the basis `1, t, ..., t^{φ(s)-1}`.
#[derive(Clone, Debug)]
pub struct TildeRingElement {
    ring: LambdaRing,
    modulus: Arc<CyclotomicPoly>,
    coeffs: Vec<LocalizedScalar>,
}

impl PartialEq for TildeRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.order == other.modulus.order && self.ring == other.ring && self.coeffs == other.coeffs
    }
}

impl Eq for TildeRingElement {}

/// `Λ[t]/(Φ_s)` as a context: the modulus plus the residues of `t^e`.
#[derive(Clone, Debug)]
pub struct TildeRing {
    ring: LambdaRing,
    modulus: Arc<CyclotomicPoly>,
    powers: Vec<Vec<BigInt>>,
}

impl TildeRing {
    pub fn new(ring: LambdaRing, s: u64) -> Self {
        Self::with_modulus(ring, Arc::new(cyclotomic(s)))
    }

    pub fn with_modulus(ring: LambdaRing, modulus: Arc<CyclotomicPoly>) -> Self {
        let s = modulus.order as usize;
        let deg = modulus.degree();
        let mut powers = Vec::with_capacity(s);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        if deg == 0 {
            cur.clear();
        }
        for _ in 0..s {
            powers.push(cur.clone());
            // multiply by t and reduce
            let mut next = vec![BigInt::zero(); deg + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let top = next[deg].clone();
            if !top.is_zero() {
                for (x, c) in next.iter_mut().zip(&modulus.coeffs[..deg]) {
                    *x -= &top * c;
                }
            }
            next.truncate(deg);
            cur = next;
        }
        TildeRing { ring, modulus, powers }
    }

    pub fn order(&self) -> u64 {
        self.modulus.order
    }

    pub fn rank(&self) -> usize {
        self.modulus.degree()
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn modulus(&self) -> &Arc<CyclotomicPoly> {
        &self.modulus
    }

    /// Integer coordinates of `t^e mod Φ_s`.
    pub fn power_coords(&self, e: usize) -> &[BigInt] {
        &self.powers[e % self.powers.len()]
    }

    pub fn monomial(&self, e: usize) -> TildeRingElement {
        let coeffs = self.power_coords(e).iter().map(|c| self.ring.int(c.clone())).collect();
        TildeRingElement { ring: self.ring, modulus: self.modulus.clone(), coeffs }
    }

    pub fn zero(&self) -> TildeRingElement {
        TildeRingElement { ring: self.ring, modulus: self.modulus.clone(), coeffs: vec![self.ring.zero(); self.rank()] }
    }

    pub fn one(&self) -> TildeRingElement {
        self.monomial(0)
    }

    pub fn element(&self, coeffs: Vec<LocalizedScalar>) -> Result<TildeRingElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != self.ring) {
            return Err(Error::RingMismatch { left: self.ring.base(), right: bad.ring().base() });
        }
        Ok(TildeRingElement { ring: self.ring, modulus: self.modulus.clone(), coeffs })
    }

    /// `Σ_e c_e t^e` reduced, for integer-free rational data.
    pub fn from_exponents<'a>(&self, terms: impl IntoIterator<Item = (usize, &'a LocalizedScalar)>) -> TildeRingElement {
        let mut acc = vec![BigRational::zero(); self.rank()];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(self.power_coords(e)) {
                if !p.is_zero() {
                    *a += c.as_rational() * p;
                }
            }
        }
        let coeffs = acc.into_iter().map(|v| LocalizedScalar::from_rational_unchecked(self.ring, v)).collect();
        TildeRingElement { ring: self.ring, modulus: self.modulus.clone(), coeffs }
    }
}

impl TildeRingElement {
    pub fn order(&self) -> u64 {
        self.modulus.order
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[LocalizedScalar] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Arc<CyclotomicPoly> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LocalizedScalar::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.first().is_some_and(LocalizedScalar::is_one) && self.coeffs[1..].iter().all(LocalizedScalar::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.base(), right: other.ring.base() });
        }
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch { expected: self.order() as usize, found: other.order() as usize });
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<LocalizedScalar>) -> Self {
        TildeRingElement { ring: self.ring, modulus: self.modulus.clone(), coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &LocalizedScalar) -> Result<Self> {
        Ok(self.with_coeffs(self.coeffs.iter().map(|a| a.try_mul(c)).collect::<Result<_>>()?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a.as_rational() * b.as_rational();
                }
            }
        }
        let reduced = reduce_rational(prod, &self.modulus.coeffs);
        Ok(self.with_coeffs(
            reduced.into_iter().map(|v| LocalizedScalar::from_rational_unchecked(self.ring, v)).collect(),
        ))
    }

    /// Matrix of `y ↦ self · y` on the basis `1, t, ..., t^{φ(s)-1}`.
    pub fn multiplication_matrix(&self) -> LambdaMatrix {
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        let mut basis = vec![self.ring.zero(); n];
        for j in 0..n {
            basis.iter_mut().for_each(|b| *b = self.ring.zero());
            basis[j] = self.ring.one();
            let col = self.mul(&self.with_coeffs(basis.clone())).expect("same ring");
            cols.push(col.coeffs);
        }
        LambdaMatrix::from_columns(self.ring, n, &cols).expect("well-formed columns")
    }
}

impl fmt::Display for TildeRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ") mod Φ_{}", self.order())
    }
}

/// The projection `Λ[t]/(t^s - 1) -> Λ[t]/(Φ_s)`.
pub fn reduce_mod_phi(x: &RepRingElement) -> TildeRingElement {
    let tr = TildeRing::new(x.ring, x.order() as u64);
    tr.from_exponents(x.coeffs.iter().enumerate())
}

/// Determinant of multiplication by `x`.
pub fn norm(x: &TildeRingElement) -> LocalizedScalar {
    x.multiplication_matrix().det().expect("square matrix")
}

/// Inverse in `Λ[t]/(Φ_s)`, which exists iff the norm is a unit in `Λ`.
pub fn try_invert_tilde(x: &TildeRingElement) -> Result<TildeRingElement> {
    let m = x.multiplication_matrix();
    let inv = match m.try_invert() {
        Ok(inv) => inv,
        Err(Error::NotInvertible { witness }) => return Err(Error::NotInvertible { witness }),
        Err(e) => return Err(e),
    };
    // x^-1 = x^-1 · 1, the first column of the inverse matrix
    Ok(x.with_coeffs(inv.column(0)))
}

/// The isomorphism `Λ[t]/(t^s - 1) ≅ ∏_{d | s} Λ[t]/(Φ_d)`.
#[derive(Clone, Debug)]
pub struct CrtDecomposition {
    pub order: u64,
    pub ring: LambdaRing,
    /// The divisors `d`, ascending; block `i` has `φ(d_i)` rows.
    pub divisors: Vec<u64>,
    pub components: Vec<TildeRing>,
    pub forward: LambdaMatrix,
    pub inverse: LambdaMatrix,
}

impl CrtDecomposition {
    pub fn split(&self, x: &RepRingElement) -> Result<Vec<TildeRingElement>> {
        if x.order() as u64 != self.order {
            return Err(Error::DimensionMismatch { expected: self.order as usize, found: x.order() });
        }
        let v = self.forward.mul_vec(x.coeffs())?;
        let mut out = Vec::with_capacity(self.components.len());
        let mut off = 0;
        for c in &self.components {
            out.push(c.element(v[off..off + c.rank()].to_vec())?);
            off += c.rank();
        }
        Ok(out)
    }

    pub fn combine(&self, parts: &[TildeRingElement]) -> Result<RepRingElement> {
        let v: Vec<LocalizedScalar> = parts.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        RepRingElement::new(self.ring, self.inverse.mul_vec(&v)?)
    }
}

/// Reduction modulo each `Φ_d`, `d | s`, together with its inverse.
pub fn crt_decompose(s: u64, ring: LambdaRing) -> Result<CrtDecomposition> {
    if s == 0 {
        return Err(Error::InvalidGroup("order must be positive".into()));
    }
    if !ring.supports_u64(s) {
        return Err(Error::OrderNotInvertible { order: s, base: ring.base() });
    }
    let family = cyclotomic_family(s);
    let components: Vec<TildeRing> =
        family.into_values().map(|p| TildeRing::with_modulus(ring, Arc::new(p))).collect();
    let divisors = components.iter().map(TildeRing::order).collect();
    let n = s as usize;
    let mut forward = LambdaMatrix::zeros(ring, n, n);
    let mut row = 0;
    for c in &components {
        for j in 0..n {
            for (i, v) in c.power_coords(j).iter().enumerate() {
                forward.set(row + i, j, ring.int(v.clone()));
            }
        }
        row += c.rank();
    }
    let inverse = forward
        .try_invert()
        .map_err(|e| Error::Internal(alloc::format!("CRT matrix for s = {s} is singular: {e}")))?;
    Ok(CrtDecomposition { order: s, ring, divisors, components, forward, inverse })
}

/// `λ_{-1}` of a sum of characters of a cyclic group, with its unit status.
#[derive(Clone, Debug)]
pub struct LambdaMinusOne {
    /// `∏_a (1 - t^a)^{r_a}` in `R(σ)`.
    pub element: RepRingElement,
    /// Its image in `Λ[1/s][t]/(Φ_s)`.
    pub image: TildeRingElement,
    pub image_norm: LocalizedScalar,
    pub is_unit: bool,
}

/// Computes `∏_a (1 - t^a)^{r_a}` and checks that its image in
/// `Λ[1/s][t]/(Φ_s)` is a unit. Weights at residues `≡ 0 mod s` violate the
/// hypothesis and are reported as [`Error::FixedWeight`].
pub fn lambda_minus_one(s: u64, weights: &BTreeMap<u64, u32>, ring: LambdaRing) -> Result<LambdaMinusOne> {
    if s == 0 {
        return Err(Error::InvalidGroup("order must be positive".into()));
    }
    let ring = ring.with_inverted(s)?;
    let n = s as usize;
    let mut element = RepRingElement::one(ring, n);
    for (&a, &r) in weights {
        if r == 0 {
            continue;
        }
        let mut factor = RepRingElement::one(ring, n);
        factor.add_at(a as usize % n, &ring.int(-1));
        element = element.mul(&factor.pow(r))?;
    }
    let image = reduce_mod_phi(&element);
    let image_norm = norm(&image);
    let fixed: Vec<usize> =
        weights.iter().filter(|(&a, &r)| r > 0 && a % s == 0).map(|(&a, _)| a as usize).collect();
    if !fixed.is_empty() {
        return Err(Error::FixedWeight { residues: fixed, image_norm });
    }
    let is_unit = image_norm.is_unit();
    Ok(LambdaMinusOne { element, image, image_norm, is_unit })
}

/// `gcd(a, s) = 1`.
pub fn is_unit_residue(a: u64, s: u64) -> bool {
    a.gcd(&s) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn z(n: u64) -> LambdaRing {
        LambdaRing::new(n).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).coeffs(), &ints(&[-1, 1])[..]);
        assert_eq!(cyclotomic(6).coeffs(), &ints(&[1, -1, 1])[..]);
        assert_eq!(cyclotomic(12).coeffs(), &ints(&[1, 0, -1, 0, 1])[..]);
        assert_eq!(alloc::format!("{}", cyclotomic(6)), "t^2 - t + 1");
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic(105).coeffs().contains(&BigInt::from(-2)));
    }

    #[test]
    fn euler_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(divisors(12), alloc::vec![1, 2, 3, 4, 6, 12]);
        for s in 1..60 {
            assert_eq!(cyclotomic(s).degree() as u64, euler_phi(s));
        }
    }

    #[test]
    fn reduce_examples() {
        let r = LambdaRing::integers();
        let t2 = RepRingElement::monomial(r, 3, 2);
        assert_eq!(reduce_mod_phi(&t2).coeffs(), &[r.int(-1), r.int(-1)]);
        let x = RepRingElement::from_i64(r, &[1, 1]).unwrap();
        assert!(reduce_mod_phi(&x).is_zero());
        for s in 1..10 {
            assert!(reduce_mod_phi(&RepRingElement::one(r, s)).is_one());
        }
    }

    #[test]
    fn norm_examples() {
        let r = LambdaRing::integers();
        let tr = TildeRing::new(r, 3);
        assert!(norm(&tr.monomial(1)).is_one());
        let one_minus_t = tr.one().sub(&tr.monomial(1)).unwrap();
        assert_eq!(norm(&one_minus_t), r.int(3));
        for s in 1..8 {
            assert!(norm(&TildeRing::new(r, s).one()).is_one());
        }
        // s = 1: R̃ = Λ and the norm is the identity
        let t1 = TildeRing::new(r, 1);
        let seven = t1.element(alloc::vec![r.int(7)]).unwrap();
        assert_eq!(norm(&seven), r.int(7));
    }

    #[test]
    fn inverse_examples() {
        let r3 = z(3);
        let tr = TildeRing::new(r3, 3);
        let x = tr.one().sub(&tr.monomial(1)).unwrap();
        let inv = try_invert_tilde(&x).unwrap();
        let third = r3.fraction(1, 3).unwrap();
        assert_eq!(inv.coeffs(), &[r3.fraction(2, 3).unwrap(), third]);
        assert!(x.mul(&inv).unwrap().is_one());

        let zz = LambdaRing::integers();
        let one = TildeRing::new(zz, 2).one();
        assert!(try_invert_tilde(&one).unwrap().is_one());

        let tr = TildeRing::new(zz, 3);
        let x = tr.one().sub(&tr.monomial(1)).unwrap();
        assert_eq!(try_invert_tilde(&x), Err(Error::NotInvertible { witness: zz.int(3) }));
    }

    #[test]
    fn crt_examples() {
        let r = z(2);
        let d = crt_decompose(2, r).unwrap();
        let t = RepRingElement::monomial(r, 2, 1);
        let parts = d.split(&t).unwrap();
        assert_eq!(parts[0].coeffs(), &[r.int(1)]);
        assert_eq!(parts[1].coeffs(), &[r.int(-1)]);
        let e = d.combine(&[TildeRing::new(r, 1).one(), TildeRing::new(r, 2).zero()]).unwrap();
        let half = r.fraction(1, 2).unwrap();
        assert_eq!(e.coeffs(), &[half.clone(), half]);

        let d1 = crt_decompose(1, LambdaRing::integers()).unwrap();
        assert!(d1.forward.is_identity());

        let d4 = crt_decompose(4, r).unwrap();
        assert_eq!(d4.divisors, alloc::vec![1, 2, 4]);
        let ranks: Vec<usize> = d4.components.iter().map(TildeRing::rank).collect();
        assert_eq!(ranks, alloc::vec![1, 1, 2]);

        assert!(matches!(crt_decompose(3, r), Err(Error::OrderNotInvertible { .. })));
    }

    #[test]
    fn crt_components_are_ring_maps() {
        let r = z(6);
        let d = crt_decompose(6, r).unwrap();
        let x = RepRingElement::from_i64(r, &[1, -2, 0, 3, 1, 5]).unwrap();
        let y = RepRingElement::from_i64(r, &[0, 1, 4, -1, 2, 0]).unwrap();
        let xy = d.split(&x.mul(&y).unwrap()).unwrap();
        let (px, py) = (d.split(&x).unwrap(), d.split(&y).unwrap());
        for ((a, b), c) in px.iter().zip(&py).zip(&xy) {
            assert_eq!(&a.mul(b).unwrap(), c);
        }
        assert_eq!(d.combine(&px).unwrap(), x);
    }

    #[test]
    fn lambda_minus_one_examples() {
        let zz = LambdaRing::integers();
        let w: BTreeMap<u64, u32> = [(1, 1)].into_iter().collect();
        let out = lambda_minus_one(3, &w, zz).unwrap();
        assert_eq!(out.image_norm, z(3).int(3));
        assert!(out.is_unit);

        let w: BTreeMap<u64, u32> = [(1, 2)].into_iter().collect();
        let out = lambda_minus_one(2, &w, zz).unwrap();
        assert_eq!(out.image.coeffs(), &[z(2).int(4)]);
        assert!(out.is_unit);

        let w: BTreeMap<u64, u32> = [(2, 1)].into_iter().collect();
        let out = lambda_minus_one(4, &w, zz).unwrap();
        assert_eq!(out.image.coeffs(), &[z(2).int(2), z(2).zero()]);
        assert!(out.is_unit);
    }

    #[test]
    fn lambda_minus_one_rejects_fixed_weights() {
        let w: BTreeMap<u64, u32> = [(3, 1), (1, 1)].into_iter().collect();
        match lambda_minus_one(3, &w, LambdaRing::integers()) {
            Err(Error::FixedWeight { residues, image_norm }) => {
                assert_eq!(residues, alloc::vec![3]);
                assert!(image_norm.is_zero());
            }
            other => panic!("expected FixedWeight, got {other:?}"),
        }
    }

    #[test]
    fn cyclotomic_product_identity_small() {
        for s in 1..=40u64 {
            let mut prod = ints(&[1]);
            for p in cyclotomic_family(s).values() {
                let mut next = alloc::vec![BigInt::zero(); prod.len() + p.degree()];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in p.coeffs().iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expected = alloc::vec![BigInt::zero(); s as usize + 1];
            expected[0] = BigInt::from(-1);
            expected[s as usize] = BigInt::one();
            assert_eq!(prod, expected, "s = {s}");
        }
    }

    fn tilde_from(tr: &TildeRing, v: &[i64]) -> TildeRingElement {
        tr.element(v.iter().map(|&x| tr.ring().int(x)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(s in prop::sample::select(alloc::vec![3u64, 4, 5, 6, 8, 12]),
                                  a in proptest::collection::vec(-3i64..=3, 4),
                                  b in proptest::collection::vec(-3i64..=3, 4)) {
            let tr = TildeRing::new(LambdaRing::integers(), s);
            let n = tr.rank();
            let x = tilde_from(&tr, &a[..n]);
            let y = tilde_from(&tr, &b[..n]);
            prop_assert_eq!(norm(&x.mul(&y).unwrap()), &norm(&x) * &norm(&y));
        }

        #[test]
        fn invertible_iff_norm_unit(s in 1u64..10, base in 1u64..13, a in proptest::collection::vec(-3i64..=3, 6)) {
            let tr = TildeRing::new(z(base), s);
            let x = tilde_from(&tr, &a[..tr.rank()]);
            let nx = norm(&x);
            match try_invert_tilde(&x) {
                Ok(inv) => {
                    prop_assert!(nx.is_unit());
                    prop_assert!(x.mul(&inv).unwrap().is_one());
                }
                Err(Error::NotInvertible { witness }) => {
                    prop_assert!(!nx.is_unit());
                    prop_assert_eq!(witness, nx);
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
