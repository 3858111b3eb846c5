//! Finite diagonalizable groups through their character groups.
//!
//! A [`CharGroup`] is a finite abelian group `M`, possibly given as a
//! quotient `A/K` of a group `A = Z/d_1 x ... x Z/d_k` in invariant-factor
//! form. Elements are indexed by their coset, ordered by the smallest
//! representative tuple (lexicographic), so a plain group has the usual
//! lexicographic enumeration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclo::{euler_phi, RepRingElement, TildeRing, TildeRingElement};
use crate::lambda::{integer_kernel, smith_diagonal, LambdaMatrix, LambdaRing, LocalizedScalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharGroup {
    factors: Vec<u64>,
    strides: Vec<usize>,
    kernel: Vec<usize>,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    invariants: Vec<u64>,
}

impl CharGroup {
    /// `Z/d_1 x ... x Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
    pub fn new(factors: &[u64]) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("invariant factor {d} must exceed 1")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
        }
        let order = factors.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d as usize));
        let Some(order) = order.filter(|&n| n <= 1 << 24) else {
            return Err(Error::InvalidGroup("group too large".into()));
        };
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(CharGroup {
            factors: factors.to_vec(),
            strides,
            kernel: vec![0],
            reps: (0..order).collect(),
            coset_of: (0..order).collect(),
            invariants: factors.to_vec(),
        })
    }

    pub fn trivial() -> Self {
        Self::new(&[]).expect("valid")
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            Self::new(&[n]).expect("valid")
        }
    }

    /// The group `Z/n_1 x ... x Z/n_k` for arbitrary positive orders,
    /// brought to invariant-factor form.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("orders must be positive".into()));
        }
        let k = orders.len();
        let mut a = vec![BigInt::zero(); k * k];
        for (i, &n) in orders.iter().enumerate() {
            a[i * k + i] = BigInt::from(n);
        }
        let diag: Vec<u64> = smith_diagonal(k, k, &a)
            .into_iter()
            .map(|d| u64::try_from(d).expect("factor fits"))
            .filter(|&d| d > 1)
            .collect();
        Self::new(&diag)
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Invariant factors of this group.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariants
    }

    /// Invariant factors of the ambient group `A`.
    pub fn ambient_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_quotient(&self) -> bool {
        self.kernel.len() > 1
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    fn ambient_order(&self) -> usize {
        self.coset_of.len()
    }

    fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (i, &st) in self.strides.iter().enumerate() {
            out[i] = (idx / st) as u64;
            idx %= st;
        }
        out
    }

    fn encode(&self, tuple: &[u64]) -> usize {
        tuple.iter().zip(&self.factors).zip(&self.strides).map(|((&a, &d), &st)| (a % d) as usize * st).sum()
    }

    fn ambient_add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        let (mut a, mut b) = (a, b);
        for (&st, &d) in self.strides.iter().zip(&self.factors) {
            let (x, y) = (a / st, b / st);
            a %= st;
            b %= st;
            out += (x + y) % d as usize * st;
        }
        out
    }

    fn ambient_neg(&self, a: usize) -> usize {
        let t: Vec<u64> = self.decode(a).iter().zip(&self.factors).map(|(&x, &d)| (d - x) % d).collect();
        self.encode(&t)
    }

    /// Smallest representative of element `i`, as a tuple in `A`.
    pub fn tuple(&self, i: usize) -> Vec<u64> {
        self.decode(self.reps[i])
    }

    /// The element containing the tuple (entries are reduced mod `d_i`).
    pub fn index_of(&self, tuple: &[u64]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(Error::DimensionMismatch { expected: self.factors.len(), found: tuple.len() });
        }
        Ok(self.coset_of[self.encode(tuple)])
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        self.coset_of[self.ambient_add(self.reps[i], self.reps[j])]
    }

    pub fn neg(&self, i: usize) -> usize {
        self.coset_of[self.ambient_neg(self.reps[i])]
    }

    pub fn multiple(&self, i: usize, n: u64) -> usize {
        (0..n).fold(0, |acc, _| self.add(acc, i))
    }

    /// Images of the standard generators of `A`.
    pub fn generator_images(&self) -> Vec<usize> {
        (0..self.factors.len()).map(|i| self.coset_of[self.strides[i]]).collect()
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut n = 1;
        let mut x = i;
        while x != 0 {
            x = self.add(x, i);
            n += 1;
        }
        n
    }

    fn check_coarser(&self, q: &CharGroup) -> Result<()> {
        if self.factors != q.factors || !self.kernel.iter().all(|&k| q.kernel.binary_search(&k).is_ok()) {
            return Err(Error::InvalidGroup(format!("{q} is not a quotient of {self}")));
        }
        Ok(())
    }

    /// The image in the quotient `q` of every element.
    pub fn projection_to(&self, q: &CharGroup) -> Result<Vec<usize>> {
        self.check_coarser(q)?;
        Ok(self.reps.iter().map(|&a| q.coset_of[a]).collect())
    }

    /// A preimage of every element of the quotient `q`.
    pub fn lift_from(&self, q: &CharGroup) -> Result<Vec<usize>> {
        self.check_coarser(q)?;
        Ok(q.reps.iter().map(|&a| self.coset_of[a]).collect())
    }

    /// `M/K` for a subgroup `K` of `M`.
    pub fn quotient(&self, k: &Subgroup) -> Result<CharGroup> {
        if k.group_order != self.order() {
            return Err(Error::InvalidSubgroup("subgroup of a different group".into()));
        }
        let kernel: Vec<usize> = (0..self.ambient_order()).filter(|&a| k.contains(self.coset_of[a])).collect();
        let mut coset_of = vec![usize::MAX; self.ambient_order()];
        let mut reps = Vec::new();
        for a in 0..self.ambient_order() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(a);
            for &x in &kernel {
                coset_of[self.ambient_add(a, x)] = c;
            }
        }
        // invariant factors from the relations d_i e_i and the kernel
        let nf = self.factors.len();
        let mut rel: Vec<BigInt> = Vec::new();
        for (i, &d) in self.factors.iter().enumerate() {
            rel.extend((0..nf).map(|j| BigInt::from(if i == j { d } else { 0 })));
        }
        let kgens = Subgroup::canonical_generators_by(&kernel, |gens| {
            ambient_closure(gens, |a, b| self.ambient_add(a, b))
        });
        for &g in &kgens {
            rel.extend(self.decode(g).into_iter().map(BigInt::from));
        }
        let rows = nf + kgens.len();
        let invariants = smith_diagonal(rows, nf, &rel)
            .into_iter()
            .map(|d| u64::try_from(d).expect("factor fits"))
            .filter(|&d| d > 1)
            .collect();
        Ok(CharGroup { factors: self.factors.clone(), strides: self.strides.clone(), kernel, reps, coset_of, invariants })
    }
}

impl fmt::Display for CharGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.invariants.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

fn ambient_closure(gens: &[usize], add: impl Fn(usize, usize) -> usize) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    seen.insert(0);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = add(x, g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// All groups of order `n` in invariant-factor form.
pub fn abelian_groups_of_order(n: u64) -> Vec<CharGroup> {
    fn chains(n: u64, last: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        // builds d_k, d_{k-1}, ... with each dividing the previous
        if n == 1 {
            out.push(acc.iter().rev().copied().collect());
            return;
        }
        for d in (2..=n).filter(|&d| n % d == 0 && last % d == 0) {
            acc.push(d);
            chains(n / d, d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    chains(n, n, &mut Vec::new(), &mut out);
    let mut groups: Vec<CharGroup> = out.into_iter().filter_map(|f| CharGroup::new(&f).ok()).collect();
    groups.sort_by(|a, b| a.invariants.cmp(&b.invariants));
    groups.dedup();
    groups
}

/// A subgroup of a [`CharGroup`], as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    group_order: usize,
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(group: &CharGroup) -> Self {
        Subgroup { group_order: group.order(), members: vec![0], generators: Vec::new() }
    }

    pub fn whole(group: &CharGroup) -> Self {
        Self::generated(group, &(0..group.order()).collect::<Vec<_>>())
    }

    pub fn generated(group: &CharGroup, gens: &[usize]) -> Self {
        let members: Vec<usize> = ambient_closure(gens, |a, b| group.add(a, b)).into_iter().collect();
        let generators = Self::canonical_generators_by(&members, |g| ambient_closure(g, |a, b| group.add(a, b)));
        Subgroup { group_order: group.order(), members, generators }
    }

    /// The subgroup generated by tuples of the ambient group.
    pub fn from_tuples(group: &CharGroup, tuples: &[Vec<u64>]) -> Result<Self> {
        let gens = tuples.iter().map(|t| group.index_of(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self::generated(group, &gens))
    }

    /// Greedy generators: each member not yet in the span, in index order.
    fn canonical_generators_by(members: &[usize], closure: impl Fn(&[usize]) -> BTreeSet<usize>) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<usize> = [0].into_iter().collect();
        for &m in members {
            if !span.contains(&m) {
                gens.push(m);
                span = closure(&gens);
                if span.len() == members.len() {
                    break;
                }
            }
        }
        gens
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group_order == other.group_order && self.members.iter().all(|&m| other.contains(m))
    }
}

/// A cyclic quotient `M -> M/K ≅ Z/s`, i.e. a dual cyclic subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    pub kernel: Subgroup,
    pub order: u64,
    /// Smallest element mapping to a generator of `M/K`.
    pub generator: usize,
    /// Residue mod `s` of every element, with `generator ↦ 1`.
    pub labels: Vec<u64>,
}

impl CyclicQuotient {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn label(&self, m: usize) -> u64 {
        self.labels[m]
    }

    /// Whether `M -> M/K_σ` factors through `M/K`, i.e. `K ⊆ K_σ`.
    pub fn factors_through(&self, k: &Subgroup) -> bool {
        k.is_subgroup_of(&self.kernel)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u64
}

/// All subgroups `K ⊆ M` with `M/K` cyclic, sorted by order and then by the
/// kernel's generator list.
pub fn enumerate_cyclic_quotients(m: &CharGroup) -> Vec<CyclicQuotient> {
    // homomorphisms A -> Z/L vanishing on the kernel of A -> M
    let l = m.factors.last().copied().unwrap_or(1);
    let mut seen: BTreeMap<Vec<usize>, (u64, Vec<u64>)> = BTreeMap::new();
    let ambient: Vec<Vec<u64>> = (0..m.ambient_order()).map(|a| m.decode(a)).collect();
    let weights: Vec<u64> = m.factors.iter().map(|&d| l / d).collect();
    for c in &ambient {
        let f = |a: &[u64]| -> u64 {
            a.iter().zip(c).zip(&weights).map(|((&x, &y), &w)| x * y % l * w % l).sum::<u64>() % l
        };
        if m.kernel.iter().any(|&k| f(&ambient[k]) != 0) {
            continue;
        }
        let vals: Vec<u64> = m.reps.iter().map(|&r| f(&ambient[r])).collect();
        let g = vals.iter().fold(l, |acc, &v| acc.gcd(&v));
        let s = l / g;
        let kernel: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == 0).collect();
        seen.entry(kernel).or_insert_with(|| (s, vals.iter().map(|&v| v / g).collect()));
    }
    let mut out: Vec<CyclicQuotient> = seen
        .into_iter()
        .map(|(members, (s, label0))| {
            let generator = (0..label0.len()).find(|&i| label0[i].gcd(&s) == 1).expect("surjective");
            let u = mod_inverse(label0[generator], s);
            let labels = label0.iter().map(|&x| x * u % s).collect();
            let generators = Subgroup::canonical_generators_by(&members, |g| ambient_closure(g, |a, b| m.add(a, b)));
            let kernel = Subgroup { group_order: m.order(), members, generators };
            CyclicQuotient { kernel, order: s, generator, labels }
        })
        .collect();
    out.sort_by(|a, b| (a.order, &a.kernel.generators).cmp(&(b.order, &b.kernel.generators)));
    out
}

/// An element of `Λ[M]`, dense in the element enumeration of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    group: Arc<CharGroup>,
    ring: LambdaRing,
    coeffs: Vec<LocalizedScalar>,
}

impl GroupAlgebraElement {
    pub fn new(group: Arc<CharGroup>, ring: LambdaRing, coeffs: Vec<LocalizedScalar>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), found: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch { left: ring.base(), right: bad.ring().base() });
        }
        Ok(GroupAlgebraElement { group, ring, coeffs })
    }

    pub fn zero(group: Arc<CharGroup>, ring: LambdaRing) -> Self {
        let coeffs = vec![ring.zero(); group.order()];
        GroupAlgebraElement { group, ring, coeffs }
    }

    /// The basis character `m`.
    pub fn basis(group: Arc<CharGroup>, ring: LambdaRing, m: usize) -> Self {
        let mut x = Self::zero(group, ring);
        x.coeffs[m] = ring.one();
        x
    }

    pub fn one(group: Arc<CharGroup>, ring: LambdaRing) -> Self {
        Self::basis(group, ring, 0)
    }

    pub fn group(&self) -> &Arc<CharGroup> {
        &self.group
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[LocalizedScalar] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.base(), right: other.ring.base() });
        }
        if !(Arc::ptr_eq(&self.group, &other.group) || self.group == other.group) {
            return Err(Error::InvalidGroup("elements of different group algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(GroupAlgebraElement { group: self.group.clone(), ring: self.ring, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(GroupAlgebraElement { group: self.group.clone(), ring: self.ring, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc = vec![BigRational::zero(); self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[self.group.add(i, j)] += a.as_rational() * b.as_rational();
                }
            }
        }
        let coeffs = acc.into_iter().map(|v| LocalizedScalar::from_rational_unchecked(self.ring, v)).collect();
        Ok(GroupAlgebraElement { group: self.group.clone(), ring: self.ring, coeffs })
    }

    /// The augmentation `Σ x_m`.
    pub fn rank(&self) -> LocalizedScalar {
        let sum = self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c.as_rational());
        LocalizedScalar::from_rational_unchecked(self.ring, sum)
    }
}

/// Pushes `x` forward along `M -> M/K_σ ≅ Z/s`.
pub fn restrict_to_quotient(x: &GroupAlgebraElement, sigma: &CyclicQuotient) -> Result<RepRingElement> {
    if sigma.labels.len() != x.coeffs.len() {
        return Err(Error::DimensionMismatch { expected: sigma.labels.len(), found: x.coeffs.len() });
    }
    let mut out = RepRingElement::zero(x.ring, sigma.order as usize);
    for (c, &l) in x.coeffs.iter().zip(&sigma.labels) {
        if !c.is_zero() {
            out.add_at(l as usize, c);
        }
    }
    Ok(out)
}

/// The isomorphism `δ : Λ[M] -> ∏_σ R̃(σ)_Λ` and its idempotents.
#[derive(Clone, Debug)]
pub struct DecompositionData {
    pub group: Arc<CharGroup>,
    pub ring: LambdaRing,
    pub quotients: Vec<CyclicQuotient>,
    pub components: Vec<TildeRing>,
    /// Row offset of each σ block in `delta`.
    pub offsets: Vec<usize>,
    pub delta: LambdaMatrix,
    pub inverse: LambdaMatrix,
    pub idempotents: Vec<GroupAlgebraElement>,
}

impl DecompositionData {
    pub fn apply(&self, x: &GroupAlgebraElement) -> Result<Vec<TildeRingElement>> {
        let v = self.delta.mul_vec(x.coeffs())?;
        self.components
            .iter()
            .zip(&self.offsets)
            .map(|(c, &off)| c.element(v[off..off + c.rank()].to_vec()))
            .collect()
    }

    pub fn combine(&self, parts: &[TildeRingElement]) -> Result<GroupAlgebraElement> {
        let v: Vec<LocalizedScalar> = parts.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        GroupAlgebraElement::new(self.group.clone(), self.ring, self.inverse.mul_vec(&v)?)
    }

    /// Index of the trivial quotient.
    pub fn geometric_index(&self) -> usize {
        self.quotients.iter().position(CyclicQuotient::is_trivial).expect("trivial quotient is always present")
    }
}

/// Rows `off..off + φ(s)` of `δ` for one quotient: column `m` is `t^{label(m)} mod Φ_s`.
pub(crate) fn delta_block(tr: &TildeRing, sigma: &CyclicQuotient) -> Vec<Vec<BigInt>> {
    (0..tr.rank()).map(|i| sigma.labels.iter().map(|&l| tr.power_coords(l as usize)[i].clone()).collect()).collect()
}

pub fn delta_decompose(m: Arc<CharGroup>, ring: LambdaRing) -> Result<DecompositionData> {
    let order = m.order() as u64;
    if !ring.supports_u64(order) {
        return Err(Error::OrderNotInvertible { order, base: ring.base() });
    }
    let quotients = enumerate_cyclic_quotients(&m);
    let mut rings: BTreeMap<u64, TildeRing> = BTreeMap::new();
    let components: Vec<TildeRing> =
        quotients.iter().map(|q| rings.entry(q.order).or_insert_with(|| TildeRing::new(ring, q.order)).clone()).collect();
    let n = m.order();
    let mut delta = LambdaMatrix::zeros(ring, n, n);
    let mut offsets = Vec::with_capacity(quotients.len());
    let mut row = 0;
    for (q, tr) in quotients.iter().zip(&components) {
        offsets.push(row);
        for (i, r) in delta_block(tr, q).into_iter().enumerate() {
            for (j, v) in r.into_iter().enumerate() {
                if !v.is_zero() {
                    delta.set(row + i, j, ring.int(v));
                }
            }
        }
        row += tr.rank();
    }
    if row != n {
        return Err(Error::Internal(format!("counting identity fails for {m}: {row} != {n}")));
    }
    let inverse = delta
        .try_invert()
        .map_err(|e| Error::Internal(format!("decomposition matrix of {m} is not invertible: {e}")))?;
    let idempotents = offsets
        .iter()
        .map(|&off| GroupAlgebraElement::new(m.clone(), ring, inverse.column(off)))
        .collect::<Result<_>>()?;
    Ok(DecompositionData { group: m, ring, quotients, components, offsets, delta, inverse, idempotents })
}

/// A free `Λ`-module with an action of `Λ[M]`, given by the matrices of the
/// standard generators of the ambient group.
#[derive(Clone, Debug)]
pub struct RModule {
    group: Arc<CharGroup>,
    ring: LambdaRing,
    rank: usize,
    action: Vec<LambdaMatrix>,
}

impl RModule {
    pub fn new(group: Arc<CharGroup>, ring: LambdaRing, rank: usize, action: Vec<LambdaMatrix>) -> Result<Self> {
        if action.len() != group.ambient_factors().len() {
            return Err(Error::DimensionMismatch { expected: group.ambient_factors().len(), found: action.len() });
        }
        for a in &action {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
            }
            if a.ring() != ring {
                return Err(Error::RingMismatch { left: ring.base(), right: a.ring().base() });
            }
        }
        let module = RModule { group, ring, rank, action };
        // the action must factor through M: check commutativity and every element of K
        for (i, a) in module.action.iter().enumerate() {
            for b in &module.action[i + 1..] {
                if a.mul(b)? != b.mul(a)? {
                    return Err(Error::CocycleViolation("generator actions do not commute".into()));
                }
            }
        }
        for &k in &module.group.kernel {
            if !module.ambient_matrix(&module.group.decode(k))?.is_identity() {
                return Err(Error::CocycleViolation(format!(
                    "kernel element {:?} acts nontrivially",
                    module.group.decode(k)
                )));
            }
        }
        for (i, &d) in module.group.factors.iter().enumerate() {
            let mut t = vec![0; module.group.factors.len()];
            t[i] = d;
            let mut p = LambdaMatrix::identity(ring, rank);
            for _ in 0..d {
                p = p.mul(&module.action[i])?;
            }
            if !p.is_identity() {
                return Err(Error::CocycleViolation(format!("generator {i} has order not dividing {d}")));
            }
        }
        Ok(module)
    }

    fn ambient_matrix(&self, tuple: &[u64]) -> Result<LambdaMatrix> {
        let mut p = LambdaMatrix::identity(self.ring, self.rank);
        for (a, &e) in self.action.iter().zip(tuple) {
            for _ in 0..e {
                p = a.mul(&p)?;
            }
        }
        Ok(p)
    }

    fn permutation(ring: LambdaRing, n: usize, image: impl Fn(usize) -> usize) -> LambdaMatrix {
        let mut p = LambdaMatrix::zeros(ring, n, n);
        for j in 0..n {
            p.set(image(j), j, ring.one());
        }
        p
    }

    /// `Λ[M]` acting on itself.
    pub fn regular(group: Arc<CharGroup>, ring: LambdaRing) -> Self {
        let n = group.order();
        let action =
            group.generator_images().into_iter().map(|g| Self::permutation(ring, n, |j| group.add(j, g))).collect();
        RModule { group, ring, rank: n, action }
    }

    /// `Λ[M/K]` as a `Λ[M]`-module.
    pub fn quotient_algebra(group: Arc<CharGroup>, ring: LambdaRing, k: &Subgroup) -> Result<Self> {
        let q = group.quotient(k)?;
        let n = q.order();
        let action = q.generator_images().into_iter().map(|g| Self::permutation(ring, n, |j| q.add(j, g))).collect();
        Ok(RModule { group, ring, rank: n, action })
    }

    /// `Λ^r ⊗ self`, with `Λ^r` the outer factor.
    pub fn copies(&self, r: usize) -> Self {
        let n = self.rank;
        let action = self
            .action
            .iter()
            .map(|a| {
                LambdaMatrix::from_fn(self.ring, r * n, r * n, |i, j| {
                    if i / n == j / n {
                        a.get(i % n, j % n).clone()
                    } else {
                        self.ring.zero()
                    }
                })
            })
            .collect();
        RModule { group: self.group.clone(), ring: self.ring, rank: r * n, action }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn group(&self) -> &Arc<CharGroup> {
        &self.group
    }

    /// The matrix of every element of `M`.
    pub fn element_matrices(&self) -> Vec<LambdaMatrix> {
        let gens = self.group.generator_images();
        let mut out: Vec<Option<LambdaMatrix>> = vec![None; self.group.order()];
        out[0] = Some(LambdaMatrix::identity(self.ring, self.rank));
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for (a, &g) in self.action.iter().zip(&gens) {
                let y = self.group.add(x, g);
                if out[y].is_none() {
                    let m = a.mul(out[x].as_ref().expect("visited")).expect("same shape");
                    out[y] = Some(m);
                    stack.push(y);
                }
            }
        }
        out.into_iter().map(|m| m.expect("generators span M")).collect()
    }

    /// The matrix of `x`.
    pub fn act(&self, x: &GroupAlgebraElement) -> Result<LambdaMatrix> {
        if x.coeffs.len() != self.group.order() {
            return Err(Error::DimensionMismatch { expected: self.group.order(), found: x.coeffs.len() });
        }
        Ok(combine_matrices(self.ring, self.rank, &self.element_matrices(), &x.coeffs))
    }
}

pub(crate) fn combine_matrices(
    ring: LambdaRing,
    n: usize,
    mats: &[LambdaMatrix],
    coeffs: &[LocalizedScalar],
) -> LambdaMatrix {
    let mut acc = vec![BigRational::zero(); n * n];
    for (m, c) in mats.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (a, e) in acc.iter_mut().zip(m.entries()) {
            if !e.is_zero() {
                *a += c.as_rational() * e.as_rational();
            }
        }
    }
    let data = acc.into_iter().map(|v| LocalizedScalar::from_rational_unchecked(ring, v)).collect();
    LambdaMatrix::new(ring, n, n, data).expect("square")
}

/// The image of an idempotent: a free basis, the projection, and the
/// coordinates of the projection in that basis.
#[derive(Clone, Debug)]
pub struct LocalizedModule {
    /// Columns form a `Λ`-basis of the image.
    pub basis: LambdaMatrix,
    pub projection: LambdaMatrix,
    /// `projection = basis * coords`.
    pub coords: LambdaMatrix,
}

impl LocalizedModule {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// The image of an idempotent matrix `p`.
pub(crate) fn idempotent_image(p: LambdaMatrix) -> Result<LocalizedModule> {
    let n = p.rows();
    let ring = p.ring();
    let ip = LambdaMatrix::identity(ring, n).sub(&p)?;
    let (b, _) = ip.integer_form();
    let kernel = integer_kernel(n, n, &b);
    let columns: Vec<Vec<LocalizedScalar>> =
        kernel.into_iter().map(|v| v.into_iter().map(|x| ring.int(x)).collect()).collect();
    let basis = LambdaMatrix::from_columns(ring, n, &columns)?;
    let coords = if basis.cols() == 0 { LambdaMatrix::zeros(ring, 0, n) } else { basis.solve_columns(&p)? };
    Ok(LocalizedModule { basis, projection: p, coords })
}

/// Localization at `S_σ`, realized as the image of the idempotent `e_σ`.
pub fn sigma_localize(module: &RModule, data: &DecompositionData, sigma: usize) -> Result<LocalizedModule> {
    if !(Arc::ptr_eq(&module.group, &data.group) || *module.group == *data.group) || module.ring != data.ring {
        return Err(Error::InvalidGroup("module and decomposition over different group algebras".into()));
    }
    let e = data.idempotents.get(sigma).ok_or(Error::DimensionMismatch { expected: data.quotients.len(), found: sigma })?;
    idempotent_image(module.act(e)?)
}

/// Localization at the trivial quotient.
pub fn geometric_localize(module: &RModule, data: &DecompositionData) -> Result<LocalizedModule> {
    sigma_localize(module, data, data.geometric_index())
}

/// Integer basis of the kernel of `R(σ) -> R̃(σ)` when `M/K` is identified
/// with `Z/s` through the generator of label `u`.
pub fn kernel_ideal_basis(sigma: &CyclicQuotient, u: u64) -> Vec<Vec<BigInt>> {
    let s = sigma.order;
    let tr = TildeRing::new(LambdaRing::integers(), s);
    let r = reduction_matrix(&tr, s, u);
    integer_kernel(tr.rank(), s as usize, &r)
}

fn reduction_matrix(tr: &TildeRing, s: u64, u: u64) -> Vec<BigInt> {
    let uinv = mod_inverse(u, s);
    let n = s as usize;
    let mut r = vec![BigInt::zero(); tr.rank() * n];
    for l in 0..n {
        let e = (l as u64 * uinv % s.max(1)) as usize;
        for (i, v) in tr.power_coords(e).iter().enumerate() {
            r[i * n + l] = v.clone();
        }
    }
    r
}

/// Whether `m_σ` is the same ideal for every choice of generator of `M/K`.
pub fn generator_independence(sigma: &CyclicQuotient) -> bool {
    let s = sigma.order;
    let tr = TildeRing::new(LambdaRing::integers(), s);
    let base = kernel_ideal_basis(sigma, 1);
    if base.len() as u64 != s - euler_phi(s) {
        return false;
    }
    let n = s as usize;
    (1..=s).filter(|&u| u.gcd(&s) == 1).all(|u| {
        let r = reduction_matrix(&tr, s, u);
        base.iter().all(|v| (0..tr.rank()).all(|i| (0..n).map(|j| &r[i * n + j] * &v[j]).sum::<BigInt>().is_zero()))
    })
}

/// Renders a subgroup as its generator tuples.
pub fn describe_subgroup(group: &CharGroup, k: &Subgroup) -> String {
    let gens: Vec<String> = k.generators.iter().map(|&g| format!("{:?}", group.tuple(g))).collect();
    format!("<{}>", gens.join(", "))
}
