//! Dual cyclic subgroups of `GL_n` up to conjugacy.
//!
//! An order-`s` dual cyclic subgroup of `GL_n` is determined by the
//! dimensions `w(a)` of its eigenspaces, indexed by the characters
//! `a mod s`; two are conjugate iff the weight vectors differ by an
//! automorphism `x ↦ u·x` of `Z/s`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::lambda::{hermite_rows, lattice_index, LambdaRing, LocalizedScalar};
use crate::{Error, Result};

/// Units of `Z/s` (for `s = 1` this is `{0}`).
pub fn units_mod(s: u64) -> Vec<u64> {
    (0..s).filter(|&a| a.gcd(&s) == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightFunction {
    s: u64,
    n: u64,
    w: Vec<u64>,
}

impl WeightFunction {
    pub fn new(w: Vec<u64>) -> Result<Self> {
        let s = w.len() as u64;
        if s == 0 {
            return Err(Error::InvalidWeightFunction("order must be positive".into()));
        }
        let n: u64 = w.iter().sum();
        if n == 0 {
            return Err(Error::InvalidWeightFunction("weights sum to zero".into()));
        }
        let g = w.iter().enumerate().filter(|(_, &m)| m > 0).fold(s, |acc, (a, _)| acc.gcd(&(a as u64)));
        if g != 1 {
            return Err(Error::InvalidWeightFunction(format!("support generates a subgroup of index {g}")));
        }
        Ok(WeightFunction { s, n, w })
    }

    /// Checks the expected rank as well.
    pub fn with_rank(n: u64, w: Vec<u64>) -> Result<Self> {
        let wf = Self::new(w)?;
        if wf.n != n {
            return Err(Error::InvalidWeightFunction(format!("weights sum to {}, expected {n}", wf.n)));
        }
        Ok(wf)
    }

    pub fn order(&self) -> u64 {
        self.s
    }

    pub fn rank(&self) -> u64 {
        self.n
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    /// `x ↦ w(u·x)`.
    pub fn reindex(&self, u: u64) -> WeightFunction {
        let w = (0..self.s).map(|x| self.w[(u * x % self.s) as usize]).collect();
        WeightFunction { s: self.s, n: self.n, w }
    }

    /// The residues with nonzero weight, with their weights.
    pub fn blocks(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.w.iter().enumerate().filter(|(_, &m)| m > 0).map(|(a, &m)| (a as u64, m))
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.w.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A conjugacy class, by its canonical weight function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjClass {
    pub canonical: WeightFunction,
}

/// `w_G(σ)` as a subgroup of `(Z/s)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylSubgroup {
    pub s: u64,
    pub elements: Vec<u64>,
}

impl WeylSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Contains `1` and is closed under multiplication.
    pub fn is_subgroup(&self) -> bool {
        let set: BTreeSet<u64> = self.elements.iter().copied().collect();
        set.contains(&(1 % self.s))
            && self.elements.iter().all(|&a| a.gcd(&self.s) == 1)
            && self.elements.iter().all(|&a| self.elements.iter().all(|&b| set.contains(&(a * b % self.s))))
    }
}

/// The largest vector of the `(Z/s)*`-orbit, in lexicographic order.
pub fn canonicalize(w: &WeightFunction) -> ConjClass {
    let canonical = units_mod(w.s).into_iter().map(|u| w.reindex(u)).max_by(|a, b| a.w.cmp(&b.w)).expect("1 is a unit");
    ConjClass { canonical }
}

fn compositions(n: u64, parts: usize, f: &mut impl FnMut(&[u64])) {
    fn go(rest: u64, i: usize, cur: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if i + 1 == cur.len() {
            cur[i] = rest;
            f(cur);
            return;
        }
        for x in 0..=rest {
            cur[i] = x;
            go(rest - x, i + 1, cur, f);
        }
    }
    if parts == 0 {
        return;
    }
    let mut cur = vec![0; parts];
    go(n, 0, &mut cur, f);
}

/// All classes of order-`s` dual cyclic subgroups of `GL_n`, sorted
/// lexicographically on the canonical vectors.
pub fn enumerate_classes(n: u64, s: u64) -> Vec<ConjClass> {
    let mut out: BTreeSet<ConjClass> = BTreeSet::new();
    if n == 0 || s == 0 {
        return Vec::new();
    }
    compositions(n, s as usize, &mut |w| {
        if let Ok(wf) = WeightFunction::new(w.to_vec()) {
            out.insert(canonicalize(&wf));
        }
    });
    out.into_iter().collect()
}

/// Sizes of the blocks `GL_{d_i}` of the centralizer, ascending.
pub fn centralizer_blocks(w: &WeightFunction) -> Vec<u64> {
    let mut b: Vec<u64> = w.blocks().map(|(_, m)| m).collect();
    b.sort_unstable();
    b
}

/// The stabilizer of `w` in `(Z/s)*`.
pub fn weyl_w(w: &WeightFunction) -> WeylSubgroup {
    let elements = units_mod(w.s).into_iter().filter(|&u| w.reindex(u) == *w).collect();
    WeylSubgroup { s: w.s, elements }
}

/// Whether `(Z/s)*` acts freely on the units of `Z/s` by multiplication.
pub fn torsor_freeness(s: u64) -> bool {
    let units = units_mod(s);
    units.iter().filter(|&&a| a != 1 % s.max(1)).all(|&a| units.iter().all(|&x| a * x % s != x))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// With `q = p^{v_p(n)}` and `m = n/q`, checks `binom(n, q) ≡ m ≢ 0 (mod p)`.
/// Returns false when `n = 0` or `p` is not prime.
pub fn binomial_witness(n: u64, p: u64) -> bool {
    if n == 0 || !is_prime(p) {
        return false;
    }
    let mut q = 1;
    while (n / q) % p == 0 {
        q *= p;
    }
    let m = n / q;
    let b = num_integer::binomial(BigInt::from(n), BigInt::from(q));
    let bp = b.mod_floor(&BigInt::from(p)).to_u64().expect("small");
    bp == m % p && m % p != 0
}

/// Generators `binom(d, r) t^{r a}` of the image of `R(C_G(σ))`, with their degree `r`.
pub(crate) fn exterior_power_images(w: &WeightFunction) -> Vec<(u64, BigInt, u64)> {
    let mut out = Vec::new();
    for (a, d) in w.blocks() {
        for r in 1..=d {
            out.push((r, num_integer::binomial(BigInt::from(d), BigInt::from(r)), r * a % w.s));
        }
    }
    out
}

/// Index in `Λ[t]/(t^s - 1)`, `Λ = Z[1/s]`, of the lattice spanned by
/// products of exterior powers of the centralizer blocks' standard
/// representations of total degree at most `degree_bound`.
///
/// The lattice is computed degree by degree: `V_0 = Z·1` and
/// `V_k = Σ_r (degree-r generators)·V_{k-r}`. Reports
/// [`Error::RankDeficient`] when the span is not of full rank.
pub fn restriction_index(w: &WeightFunction, degree_bound: u64) -> Result<LocalizedScalar> {
    let s = w.s as usize;
    let ring = LambdaRing::new(w.s)?;
    let gens = exterior_power_images(w);
    let shift = |v: &[BigInt], c: &BigInt, e: u64| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); s];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[(i + e as usize) % s] = c * x;
            }
        }
        out
    };
    let mut unit = vec![BigInt::zero(); s];
    unit[0] = BigInt::from(1);
    let mut layers: Vec<Vec<Vec<BigInt>>> = vec![vec![unit]];
    let mut total: Vec<Vec<BigInt>> = layers[0].clone();
    for k in 1..=degree_bound {
        let mut span = Vec::new();
        for (r, c, e) in &gens {
            if *r > k {
                continue;
            }
            for v in &layers[(k - r) as usize] {
                span.push(shift(v, c, *e));
            }
        }
        let layer = hermite_rows(&span, s);
        total.extend(layer.iter().cloned());
        total = hermite_rows(&total, s);
        layers.push(layer);
    }
    let idx = lattice_index(&total, s)?;
    Ok(ring.int(idx))
}
