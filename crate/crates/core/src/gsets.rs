//! Equivariant `K_0` of finite-orbit actions of a finite diagonalizable group.
//!
//! A [`DiagGSet`] is a disjoint union of orbits `G/H_O`; orbit `O` is given by
//! the kernel `K_O` of `M -> M/K_O`, the restriction of characters of `G` to
//! `H_O`. Then `K_0(X, G)_Λ = ⊕_O Λ[M/K_O]`, and `σ` fixes `O` exactly when
//! `M -> M/K_σ` factors through `M/K_O`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::cyclo::{euler_phi, TildeRing, TildeRingElement};
use crate::diaggrp::{
    delta_block, delta_decompose, enumerate_cyclic_quotients, geometric_localize, sigma_localize, CharGroup,
    CyclicQuotient, DecompositionData, GroupAlgebraElement, LocalizedModule, RModule, Subgroup,
};
use crate::lambda::{hermite_rows, integer_kernel, LambdaMatrix, LambdaRing, LocalizedScalar};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DiagGSet {
    group: Arc<CharGroup>,
    orbits: Vec<Subgroup>,
    orbit_groups: Vec<Arc<CharGroup>>,
}

impl DiagGSet {
    pub fn new(group: Arc<CharGroup>, orbits: Vec<Subgroup>) -> Result<Self> {
        let orbit_groups = orbits.iter().map(|k| group.quotient(k).map(Arc::new)).collect::<Result<_>>()?;
        Ok(DiagGSet { group, orbits, orbit_groups })
    }

    pub fn group(&self) -> &Arc<CharGroup> {
        &self.group
    }

    pub fn orbits(&self) -> &[Subgroup] {
        &self.orbits
    }

    /// Character group `M/K_O` of the stabilizer of each orbit.
    pub fn stabilizer_groups(&self) -> &[Arc<CharGroup>] {
        &self.orbit_groups
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Whether `σ` fixes orbit `o`.
    pub fn is_fixed(&self, sigma: &CyclicQuotient, o: usize) -> bool {
        sigma.factors_through(&self.orbits[o])
    }
}

/// Essential dual cyclic subgroups and `N = lcm` of their orders.
#[derive(Clone, Debug)]
pub struct Essential {
    pub quotients: Vec<CyclicQuotient>,
    pub n: u64,
}

pub fn essential_sigmas(x: &DiagGSet) -> Result<Essential> {
    if x.is_empty() {
        return Err(Error::EmptySpace);
    }
    let quotients: Vec<CyclicQuotient> = enumerate_cyclic_quotients(&x.group)
        .into_iter()
        .filter(|q| (0..x.orbits.len()).any(|o| x.is_fixed(q, o)))
        .collect();
    let n = quotients.iter().fold(1u64, |acc, q| acc.lcm(&q.order));
    Ok(Essential { quotients, n })
}

/// `⊕_O Λ[M/K_O]` with its basis of characters, orbit by orbit.
#[derive(Clone, Debug)]
pub struct K0Ring {
    gset: DiagGSet,
    ring: LambdaRing,
    offsets: Vec<usize>,
    rank: usize,
    /// For each orbit, the image in `M/K_O` of each element of `M`.
    projections: Vec<Vec<usize>>,
    /// For each orbit, a preimage in `M` of each element of `M/K_O`.
    lifts: Vec<Vec<usize>>,
}

/// An element of `K_0(X, G)_Λ`, one group-algebra element per orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Class {
    pub components: Vec<GroupAlgebraElement>,
}

pub fn k0(x: &DiagGSet, ring: LambdaRing) -> Result<K0Ring> {
    let mut offsets = Vec::with_capacity(x.orbits.len());
    let mut rank = 0;
    let mut projections = Vec::new();
    let mut lifts = Vec::new();
    for q in &x.orbit_groups {
        offsets.push(rank);
        rank += q.order();
        projections.push(x.group.projection_to(q)?);
        lifts.push(x.group.lift_from(q)?);
    }
    Ok(K0Ring { gset: x.clone(), ring, offsets, rank, projections, lifts })
}

impl K0Ring {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn gset(&self) -> &DiagGSet {
        &self.gset
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// `(orbit, element of M/K_O)` of a basis index.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let o = self.offsets.partition_point(|&off| off <= i) - 1;
        (o, i - self.offsets[o])
    }

    pub fn index(&self, orbit: usize, c: usize) -> usize {
        self.offsets[orbit] + c
    }

    /// Product of two basis characters, `None` when they live on different orbits.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        let ((oi, ci), (oj, cj)) = (self.locate(i), self.locate(j));
        (oi == oj).then(|| self.index(oi, self.gset.orbit_groups[oi].add(ci, cj)))
    }

    /// The character `m` of `G` times a basis character.
    pub fn act(&self, m: usize, i: usize) -> usize {
        let (o, c) = self.locate(i);
        self.index(o, self.gset.orbit_groups[o].add(self.projections[o][m], c))
    }

    /// The unit `Σ_O 1_O`.
    pub fn one(&self) -> K0Class {
        self.class_from_vector(&self.unit_vector()).expect("well formed")
    }

    fn unit_vector(&self) -> Vec<LocalizedScalar> {
        let mut v = vec![self.ring.zero(); self.rank];
        for &off in &self.offsets {
            v[off] = self.ring.one();
        }
        v
    }

    pub fn zero(&self) -> K0Class {
        self.class_from_vector(&vec![self.ring.zero(); self.rank]).expect("well formed")
    }

    pub fn basis(&self, i: usize) -> K0Class {
        let mut v = vec![self.ring.zero(); self.rank];
        v[i] = self.ring.one();
        self.class_from_vector(&v).expect("well formed")
    }

    pub fn class_from_vector(&self, v: &[LocalizedScalar]) -> Result<K0Class> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: v.len() });
        }
        let components = self
            .gset
            .orbit_groups
            .iter()
            .zip(&self.offsets)
            .map(|(q, &off)| GroupAlgebraElement::new(q.clone(), self.ring, v[off..off + q.order()].to_vec()))
            .collect::<Result<_>>()?;
        Ok(K0Class { components })
    }

    pub fn to_vector(&self, x: &K0Class) -> Result<Vec<LocalizedScalar>> {
        if x.components.len() != self.offsets.len() {
            return Err(Error::DimensionMismatch { expected: self.offsets.len(), found: x.components.len() });
        }
        Ok(x.components.iter().flat_map(|c| c.coeffs().iter().cloned()).collect())
    }

    pub fn mul(&self, x: &K0Class, y: &K0Class) -> Result<K0Class> {
        let components = x.components.iter().zip(&y.components).map(|(a, b)| a.mul(b)).collect::<Result<_>>()?;
        Ok(K0Class { components })
    }
}

/// Target coordinates of `Ψ`, orbit by orbit: `(σ, O)` for every essential
/// `σ` fixing `O`.
pub type PsiImage = BTreeMap<(usize, usize), TildeRingElement>;

#[derive(Clone, Debug)]
pub struct PsiMap {
    pub ring: LambdaRing,
    pub essential: Essential,
    /// `(σ, O)` pairs in row order; `σ` indexes `essential.quotients`.
    pub index: Vec<(usize, usize)>,
    pub row_offsets: Vec<usize>,
    pub components: Vec<TildeRing>,
    pub matrix: LambdaMatrix,
    /// Row and column range of each orbit's diagonal block.
    pub blocks: Vec<(core::ops::Range<usize>, core::ops::Range<usize>)>,
}

impl PsiMap {
    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    fn part(&self, v: &[LocalizedScalar], k: usize) -> TildeRingElement {
        let (s, _) = self.index[k];
        let off = self.row_offsets[k];
        let tr = &self.components[s];
        tr.element(v[off..off + tr.rank()].to_vec()).expect("consistent shapes")
    }

    fn split(&self, v: &[LocalizedScalar]) -> Vec<TildeRingElement> {
        (0..self.index.len()).map(|k| self.part(v, k)).collect()
    }

    pub fn apply(&self, k0: &K0Ring, x: &K0Class) -> Result<PsiImage> {
        let v = self.matrix.mul_vec(&k0.to_vector(x)?)?;
        Ok(self.index.iter().copied().zip(self.split(&v)).collect())
    }
}

/// Builds `Ψ` over `ring`: a character `χ` on `O` goes to `t^{label_σ(χ)} mod Φ_s`
/// in every block `(σ, O)`.
pub fn psi(x: &DiagGSet, ring: LambdaRing) -> Result<(K0Ring, PsiMap)> {
    let essential = essential_sigmas(x)?;
    let k = k0(x, ring)?;
    let mut rings: BTreeMap<u64, TildeRing> = BTreeMap::new();
    let components: Vec<TildeRing> = essential
        .quotients
        .iter()
        .map(|q| rings.entry(q.order).or_insert_with(|| TildeRing::new(ring, q.order)).clone())
        .collect();
    let mut index = Vec::new();
    let mut row_offsets = Vec::new();
    let mut blocks = Vec::new();
    let mut rows = 0;
    for o in 0..x.orbits.len() {
        let start = rows;
        for (s, q) in essential.quotients.iter().enumerate() {
            if x.is_fixed(q, o) {
                index.push((s, o));
                row_offsets.push(rows);
                rows += components[s].rank();
            }
        }
        let cols = k.offsets[o]..k.offsets[o] + x.orbit_groups[o].order();
        blocks.push((start..rows, cols));
    }
    let mut matrix = LambdaMatrix::zeros(ring, rows, k.rank);
    // per-orbit blocks depend only on K_O
    let mut cache: BTreeMap<&[usize], Vec<Vec<BigInt>>> = BTreeMap::new();
    for (o, (rr, cc)) in blocks.iter().enumerate() {
        let block = cache.entry(x.orbits[o].members()).or_insert_with(|| {
            let mut b = Vec::new();
            for q in essential.quotients.iter().filter(|q| x.is_fixed(q, o)) {
                let tr = &rings[&q.order];
                let lifted = CyclicQuotient {
                    kernel: q.kernel.clone(),
                    order: q.order,
                    generator: q.generator,
                    labels: k.lifts[o].iter().map(|&m| q.labels[m]).collect(),
                };
                b.extend(delta_block(tr, &lifted));
            }
            b
        });
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    matrix.set(rr.start + i, cc.start + j, ring.int(v.clone()));
                }
            }
        }
    }
    Ok((k, PsiMap { ring, essential, index, row_offsets, components, matrix, blocks }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<String>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { pass: true, witness: None }
    }

    fn fail(w: String) -> Self {
        Verdict { pass: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub ring: LambdaRing,
    /// `N_{(G,X)}`.
    pub n: u64,
    pub essential_orders: Vec<u64>,
    pub source_rank: usize,
    pub target_rank: usize,
    pub determinant: LocalizedScalar,
    pub block_determinants: Vec<LocalizedScalar>,
    pub rank_identity: Verdict,
    pub unit_determinant: Verdict,
    pub ring_homomorphism: Verdict,
    pub r_linearity: Verdict,
}

impl MainTheoremReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.pass)
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 4] {
        [
            ("rank_identity", &self.rank_identity),
            ("unit_determinant", &self.unit_determinant),
            ("ring_homomorphism", &self.ring_homomorphism),
            ("r_linearity", &self.r_linearity),
        ]
    }
}

/// The coefficient ring `Z[1/N]`, or `Z[1/override]` when `override` is a
/// multiple of `N`.
pub fn coefficient_ring(essential: &Essential, lambda_override: Option<u64>) -> Result<LambdaRing> {
    match lambda_override {
        None => LambdaRing::new(essential.n),
        Some(m) if m > 0 && m % essential.n == 0 => LambdaRing::new(m),
        Some(m) => Err(Error::InvalidOverride { requested: m, required: essential.n }),
    }
}

pub fn verify_main_theorem(x: &DiagGSet, lambda_override: Option<u64>) -> Result<MainTheoremReport> {
    let essential = essential_sigmas(x)?;
    let ring = coefficient_ring(&essential, lambda_override)?;
    let (k, psi) = psi(x, ring)?;

    // (a) Σ_O |M/K_O| = Σ_σ φ(|σ|) · #{O ⊆ X^σ}
    let source_rank: usize = x.orbit_groups.iter().map(|q| q.order()).sum();
    let counted: u64 = essential
        .quotients
        .iter()
        .map(|q| euler_phi(q.order) * (0..x.orbits.len()).filter(|&o| x.is_fixed(q, o)).count() as u64)
        .sum();
    let rank_identity = if source_rank as u64 == counted && psi.target_rank() == source_rank {
        Verdict::pass()
    } else {
        Verdict::fail(format!("source rank {source_rank}, counted {counted}, matrix rows {}", psi.target_rank()))
    };

    // (b) block-diagonal structure, then the determinant block by block
    let mut off_block = None;
    'scan: for (o, (rr, _)) in psi.blocks.iter().enumerate() {
        for i in rr.clone() {
            for j in 0..k.rank {
                if !psi.blocks[o].1.contains(&j) && !psi.matrix.get(i, j).is_zero() {
                    off_block = Some((i, j));
                    break 'scan;
                }
            }
        }
    }
    let mut block_dets: BTreeMap<&[usize], LocalizedScalar> = BTreeMap::new();
    let mut block_determinants = Vec::new();
    let mut determinant = ring.one();
    let square = rank_identity.pass;
    if square {
        for (o, (rr, cc)) in psi.blocks.iter().enumerate() {
            let d = block_dets
                .entry(x.orbits[o].members())
                .or_insert_with(|| {
                    let rows: Vec<usize> = rr.clone().collect();
                    let cols: Vec<usize> = cc.clone().collect();
                    psi.matrix.submatrix(&rows, &cols).det().expect("square block")
                })
                .clone();
            determinant = &determinant * &d;
            block_determinants.push(d);
        }
    }
    let unit_determinant = match off_block {
        Some((i, j)) => Verdict::fail(format!("entry ({i}, {j}) lies outside the orbit blocks")),
        None if !square => Verdict::fail("matrix is not square".into()),
        None if !determinant.is_unit() => Verdict::fail(format!("determinant {determinant} is not a unit in {ring}")),
        None => Verdict::pass(),
    };

    let columns: Vec<Vec<TildeRingElement>> = (0..k.rank).map(|j| psi.split(&psi.matrix.column(j))).collect();

    // (c) Ψ(χχ') = Ψ(χ)Ψ(χ') on all basis pairs, and Ψ(1) = 1
    let mut ring_homomorphism = Verdict::pass();
    let unit_image = psi.split(&psi.matrix.mul_vec(&k.unit_vector())?);
    if let Some(p) = unit_image.iter().position(|c| !c.is_one()) {
        ring_homomorphism = Verdict::fail(format!("Ψ(1) has component {} in block {:?}", unit_image[p], psi.index[p]));
    }
    'pairs: for i in 0..k.rank {
        if !ring_homomorphism.pass {
            break;
        }
        for j in i..k.rank {
            let expected = k.basis_product(i, j);
            for (b, (u, v)) in columns[i].iter().zip(&columns[j]).enumerate() {
                let prod = if u.is_zero() || v.is_zero() { None } else { Some(u.mul(v)?) };
                let want = expected.map(|e| &columns[e][b]);
                let ok = match (&prod, want) {
                    (None, None) => true,
                    (None, Some(w)) => w.is_zero(),
                    (Some(p), None) => p.is_zero(),
                    (Some(p), Some(w)) => p == w,
                };
                if !ok {
                    ring_homomorphism = Verdict::fail(format!("basis pair ({i}, {j}) in block {:?}", psi.index[b]));
                    break 'pairs;
                }
            }
        }
    }

    // (d) Ψ(m·x) = res(m)·Ψ(x) for every character m of G
    let mut r_linearity = Verdict::pass();
    'lin: for m in 0..x.group.order() {
        let res: Vec<TildeRingElement> =
            psi.index.iter().map(|&(s, _)| psi.components[s].monomial(essential.quotients[s].labels[m] as usize)).collect();
        for (i, col) in columns.iter().enumerate() {
            let target = &columns[k.act(m, i)];
            for (b, c) in col.iter().enumerate() {
                if res[b].mul(c)? != target[b] {
                    r_linearity = Verdict::fail(format!("character {m} on basis {i} in block {:?}", psi.index[b]));
                    break 'lin;
                }
            }
        }
    }

    Ok(MainTheoremReport {
        ring,
        n: essential.n,
        essential_orders: essential.quotients.iter().map(|q| q.order).collect(),
        source_rank,
        target_rank: psi.target_rank(),
        determinant,
        block_determinants,
        rank_identity,
        unit_determinant,
        ring_homomorphism,
        r_linearity,
    })
}

/// `π^*`: the rank of each orbit component.
pub fn pi_pullback(k: &K0Ring, x: &K0Class) -> Result<Vec<LocalizedScalar>> {
    if x.components.len() != k.offsets.len() {
        return Err(Error::DimensionMismatch { expected: k.offsets.len(), found: x.components.len() });
    }
    Ok(x.components.iter().map(GroupAlgebraElement::rank).collect())
}

/// `π_*`: `1_O ↦ [G:H_O] · Σ_{χ ∈ M/K_O} χ`.
pub fn pi_pushforward(k: &K0Ring, v: &[LocalizedScalar]) -> Result<K0Class> {
    if v.len() != k.offsets.len() {
        return Err(Error::DimensionMismatch { expected: k.offsets.len(), found: v.len() });
    }
    let g = k.gset.group.order();
    let components = k
        .gset
        .orbit_groups
        .iter()
        .zip(v)
        .map(|(q, c)| {
            let coeff = c * &k.ring.int((g / q.order()) as u64);
            GroupAlgebraElement::new(q.clone(), k.ring, vec![coeff; q.order()])
        })
        .collect::<Result<_>>()?;
    Ok(K0Class { components })
}

/// Matrices of `π^*` (orbits x rank) and `π_*` (rank x orbits).
pub fn pi_matrices(k: &K0Ring) -> (LambdaMatrix, LambdaMatrix) {
    let r = k.ring;
    let n = k.offsets.len();
    let pull = LambdaMatrix::from_fn(r, n, k.rank, |o, j| if k.locate(j).0 == o { r.one() } else { r.zero() });
    let g = k.gset.group.order();
    let push = LambdaMatrix::from_fn(r, k.rank, n, |i, o| {
        if k.locate(i).0 == o {
            r.int((g / k.gset.orbit_groups[o].order()) as u64)
        } else {
            r.zero()
        }
    });
    (pull, push)
}

/// The geometric localization of each orbit summand `Λ[M/K_O]`.
fn geometric_parts(k: &K0Ring) -> Result<Vec<LocalizedModule>> {
    let mut cache: BTreeMap<&[usize], LocalizedModule> = BTreeMap::new();
    let mut out = Vec::new();
    for (o, q) in k.gset.orbit_groups.iter().enumerate() {
        let key = k.gset.orbits[o].members();
        if !cache.contains_key(key) {
            let data = delta_decompose(q.clone(), k.ring)?;
            let loc = geometric_localize(&RModule::regular(q.clone(), k.ring), &data)?;
            cache.insert(key, loc);
        }
        out.push(cache[key].clone());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FiniteGroupReport {
    pub pull_push: LambdaMatrix,
    /// `π^* π_* = |G| · id`.
    pub pull_push_scalar: Verdict,
    /// `π_* π^*(χ) = χ · res(regular representation)` on every basis character.
    pub push_pull_regular: Verdict,
    /// `π^*` on the geometric part, in the localized bases.
    pub geometric_pullback: LambdaMatrix,
    pub geometric_determinant: LocalizedScalar,
    pub geometric_unit: Verdict,
}

impl FiniteGroupReport {
    pub fn all_pass(&self) -> bool {
        self.pull_push_scalar.pass && self.push_pull_regular.pass && self.geometric_unit.pass
    }
}

/// Compares `π^*` and `π_*` for the finite group `G` over `ring`.
pub fn verify_finite_group(x: &DiagGSet, ring: LambdaRing) -> Result<FiniteGroupReport> {
    if x.is_empty() {
        return Err(Error::EmptySpace);
    }
    let k = k0(x, ring)?;
    let (pull, push) = pi_matrices(&k);
    let g = x.group.order() as u64;
    let pull_push = pull.mul(&push)?;
    let expected = LambdaMatrix::identity(ring, x.orbits.len()).scale(&ring.int(g))?;
    let pull_push_scalar =
        if pull_push == expected { Verdict::pass() } else { Verdict::fail(format!("π^*π_* = {pull_push}")) };

    // res of the regular representation of G to H_O is |K_O| · Σ χ
    let mut push_pull_regular = Verdict::pass();
    let regular: Vec<LocalizedScalar> = vec![ring.one(); x.group.order()];
    'basis: for i in 0..k.rank {
        let xi = k.basis(i);
        let lhs = pi_pushforward(&k, &pi_pullback(&k, &xi)?)?;
        let (o, _) = k.locate(i);
        let q = &x.orbit_groups[o];
        let mut res = vec![ring.zero(); q.order()];
        for (m, c) in regular.iter().enumerate() {
            let j = k.projections[o][m];
            res[j] = &res[j] + c;
        }
        let res = GroupAlgebraElement::new(q.clone(), ring, res)?;
        let rhs = xi.components[o].mul(&res)?;
        if lhs.components[o] != rhs {
            push_pull_regular = Verdict::fail(format!("basis {i}"));
            break 'basis;
        }
    }

    let parts = geometric_parts(&k)?;
    let n = x.orbits.len();
    let mut geometric_pullback = LambdaMatrix::zeros(ring, n, parts.iter().map(LocalizedModule::rank).sum());
    let mut col = 0;
    for (o, p) in parts.iter().enumerate() {
        for c in 0..p.rank() {
            let mut v = vec![ring.zero(); k.rank];
            for (i, e) in p.basis.column(c).into_iter().enumerate() {
                v[k.offsets[o] + i] = e;
            }
            for (r, val) in pull.mul_vec(&v)?.into_iter().enumerate() {
                geometric_pullback.set(r, col, val);
            }
            col += 1;
        }
    }
    let (geometric_determinant, geometric_unit) = match geometric_pullback.det() {
        Ok(d) if d.is_unit() => (d, Verdict::pass()),
        Ok(d) => (d.clone(), Verdict::fail(format!("determinant {d} is not a unit in {ring}"))),
        Err(e) => (ring.zero(), Verdict::fail(format!("{e}"))),
    };
    Ok(FiniteGroupReport {
        pull_push,
        pull_push_scalar,
        push_pull_regular,
        geometric_pullback,
        geometric_determinant,
        geometric_unit,
    })
}

#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub source_rank: usize,
    pub target_rank: usize,
    /// `θ` restricted to the σ-localization, in its basis.
    pub matrix: LambdaMatrix,
    pub determinant: LocalizedScalar,
    /// `θ` vanishes on `(1 - e_σ)·V`.
    pub factors_through_localization: Verdict,
    pub unit_determinant: Verdict,
}

impl ThetaReport {
    pub fn all_pass(&self) -> bool {
        self.factors_through_localization.pass && self.unit_determinant.pass
    }
}

/// `θ` on the slice module `Λ^r ⊗ Λ[M']`: the twist `χ ↦ χ ⊗ res_σ χ`
/// followed by the rank map on the first factor and reduction mod `Φ_s` on
/// the second, so `i ⊗ χ ↦ i ⊗ (t^{label_σ(χ)} mod Φ_s)`. Checked on the
/// σ-localization `e_σ·V`.
pub fn theta_slice(data: &DecompositionData, r: usize, sigma: usize) -> Result<ThetaReport> {
    let q = data.quotients.get(sigma).ok_or(Error::DimensionMismatch { expected: data.quotients.len(), found: sigma })?;
    let ring = data.ring;
    let tr = &data.components[sigma];
    let n = data.group.order();
    let f = tr.rank();
    let block = delta_block(tr, q);
    let theta = LambdaMatrix::from_fn(ring, r * f, r * n, |i, j| {
        if i / f == j / n {
            let v = &block[i % f][j % n];
            if v.is_zero() {
                ring.zero()
            } else {
                ring.int(v.clone())
            }
        } else {
            ring.zero()
        }
    });
    let module = RModule::regular(data.group.clone(), ring).copies(r);
    let loc = sigma_localize(&module, data, sigma)?;
    let complement = LambdaMatrix::identity(ring, r * n).sub(&loc.projection)?;
    let factors_through_localization = if theta.mul(&complement)?.is_zero() {
        Verdict::pass()
    } else {
        Verdict::fail("θ is nonzero on the complement of e_σ".into())
    };
    let matrix = theta.mul(&loc.basis)?;
    let (determinant, unit_determinant) = if !matrix.is_square() {
        (ring.zero(), Verdict::fail(format!("θ is {}x{}", matrix.rows(), matrix.cols())))
    } else {
        let d = matrix.det()?;
        let v = if d.is_unit() { Verdict::pass() } else { Verdict::fail(format!("determinant {d} is not a unit")) };
        (d, v)
    };
    Ok(ThetaReport {
        source_rank: loc.rank(),
        target_rank: r * f,
        matrix,
        determinant,
        factors_through_localization,
        unit_determinant,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Nilpotency index of the kernel of the per-orbit rank map on the
    /// geometric part (1 means the kernel is zero).
    pub component_index: Option<u32>,
    /// The same for the kernel of the total rank map.
    pub total_index: Option<u32>,
    pub geometric_rank: usize,
}

/// Smallest `j` with `I^j = 0` for the ideal spanned by `gens` in `Z^n`
/// with componentwise product, or `None` if `I` is not nilpotent.
fn nilpotency_index(gens: &[Vec<BigInt>], n: usize) -> Option<u32> {
    let base = hermite_rows(gens, n);
    let mut power = base.clone();
    for j in 1..=(n as u32 + 1) {
        if power.is_empty() {
            return Some(j);
        }
        let mut next = Vec::new();
        for a in &power {
            for b in &base {
                next.push(a.iter().zip(b).map(|(x, y)| x * y).collect());
            }
        }
        power = hermite_rows(&next, n);
    }
    None
}

/// Kernels of the rank maps on `K_0(X, G)_geom ≅ ⊕_O Λ·e_{1,O}`.
pub fn nilpotency_check(x: &DiagGSet, ring: LambdaRing) -> Result<NilpotencyReport> {
    if x.is_empty() {
        return Err(Error::EmptySpace);
    }
    let k = k0(x, ring)?;
    let parts = geometric_parts(&k)?;
    // rank of each geometric basis vector on each orbit; the ring structure
    // on the geometric part is componentwise in these coordinates
    let n = parts.iter().map(LocalizedModule::rank).sum::<usize>();
    let orbits = x.orbits.len();
    let mut ranks = vec![BigInt::zero(); orbits * n];
    let mut col = 0;
    for (o, p) in parts.iter().enumerate() {
        for c in 0..p.rank() {
            let total = p.basis.column(c).iter().fold(BigInt::zero(), |acc, e| acc + e.numerator());
            ranks[o * n + col] = total;
            col += 1;
        }
    }
    let component_kernel = integer_kernel(orbits, n, &ranks);
    let mut total = vec![BigInt::zero(); n];
    for o in 0..orbits {
        for (j, t) in total.iter_mut().enumerate() {
            *t += &ranks[o * n + j];
        }
    }
    let total_kernel = integer_kernel(1, n, &total);
    // map kernel vectors to idempotent coordinates (scale by each orbit's rank)
    let to_idempotent = |v: &Vec<BigInt>| -> Vec<BigInt> {
        (0..n).map(|j| (0..orbits).map(|o| &ranks[o * n + j]).fold(BigInt::zero(), |a, r| a + r) * &v[j]).collect()
    };
    let comp: Vec<Vec<BigInt>> = component_kernel.iter().map(to_idempotent).collect();
    let tot: Vec<Vec<BigInt>> = total_kernel.iter().map(to_idempotent).collect();
    Ok(NilpotencyReport {
        component_index: nilpotency_index(&comp, n),
        total_index: nilpotency_index(&tot, n),
        geometric_rank: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> LambdaRing {
        LambdaRing::new(n).unwrap()
    }

    fn gset(factors: &[u64], kernels: &[&[usize]]) -> DiagGSet {
        let m = Arc::new(CharGroup::new(factors).unwrap());
        let orbits = kernels.iter().map(|g| Subgroup::generated(&m, g)).collect();
        DiagGSet::new(m, orbits).unwrap()
    }

    #[test]
    fn essential_examples() {
        let free = gset(&[2], &[&[1]]);
        let e = essential_sigmas(&free).unwrap();
        assert_eq!(e.quotients.len(), 1);
        assert_eq!(e.n, 1);
        let fixed = gset(&[2], &[&[]]);
        let e = essential_sigmas(&fixed).unwrap();
        assert_eq!(e.quotients.iter().map(|q| q.order).collect::<Vec<_>>(), alloc::vec![1, 2]);
        assert_eq!(e.n, 2);
        let all = gset(&[2, 2], &[&[], &[]]);
        assert_eq!(essential_sigmas(&all).unwrap().quotients.len(), 4);
        let empty = gset(&[2], &[]);
        assert!(matches!(essential_sigmas(&empty), Err(Error::EmptySpace)));
    }

    #[test]
    fn k0_ranks() {
        assert_eq!(k0(&gset(&[2], &[&[]]), z(2)).unwrap().rank(), 2);
        let k = k0(&gset(&[2], &[&[1], &[]]), z(2)).unwrap();
        assert_eq!(k.rank(), 3);
        let zero = k.zero();
        assert_eq!(k.mul(&zero, &k.one()).unwrap(), zero);
    }

    #[test]
    fn psi_examples() {
        let (k, p) = psi(&gset(&[2], &[&[]]), z(2)).unwrap();
        let img = p.apply(&k, &k.basis(1)).unwrap();
        assert!(img[&(0, 0)].is_one());
        assert_eq!(img[&(1, 0)].coeffs(), &[z(2).int(-1)]);

        let (k, p) = psi(&gset(&[2], &[&[1]]), LambdaRing::integers()).unwrap();
        let img = p.apply(&k, &k.basis(0)).unwrap();
        assert_eq!(img.len(), 1);
        assert!(img[&(0, 0)].is_one());

        let (k, p) = psi(&gset(&[6], &[&[], &[3], &[1]]), z(6)).unwrap();
        assert!(p.apply(&k, &k.one()).unwrap().values().all(TildeRingElement::is_one));
    }

    #[test]
    fn main_theorem_examples() {
        let rep = verify_main_theorem(&gset(&[2], &[&[1], &[]]), None).unwrap();
        assert_eq!((rep.source_rank, rep.target_rank), (3, 3));
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.ring, z(2));

        let rep = verify_main_theorem(&gset(&[], &[&[], &[], &[]]), None).unwrap();
        assert!(rep.all_pass());
        assert!(rep.determinant.is_one());

        let rep = verify_main_theorem(&gset(&[6], &[&[], &[3], &[1]]), None).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.n, 6);
    }

    #[test]
    fn override_must_be_multiple() {
        let x = gset(&[2], &[&[]]);
        assert!(verify_main_theorem(&x, Some(10)).unwrap().all_pass());
        assert_eq!(
            verify_main_theorem(&x, Some(3)).unwrap_err(),
            Error::InvalidOverride { requested: 3, required: 2 }
        );
    }

    #[test]
    fn determinant_is_not_a_unit_over_z() {
        // Ψ is only an isomorphism after inverting N
        let x = gset(&[2], &[&[]]);
        let (_, p) = psi(&x, LambdaRing::integers()).unwrap();
        assert_eq!(p.matrix.det().unwrap(), LambdaRing::integers().int(-2));
    }

    #[test]
    fn finite_group_examples() {
        let x = gset(&[2], &[&[]]);
        let k = k0(&x, z(2)).unwrap();
        let pushed = pi_pushforward(&k, &[z(2).one()]).unwrap();
        assert_eq!(pushed.components[0].coeffs(), &[z(2).one(), z(2).one()]);
        let rep = verify_finite_group(&gset(&[2, 2], &[&[], &[1], &[1, 2]]), z(2)).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn theta_examples() {
        let m = Arc::new(CharGroup::cyclic(2));
        let d = delta_decompose(m, z(2)).unwrap();
        let rep = theta_slice(&d, 1, 1).unwrap();
        assert_eq!((rep.source_rank, rep.target_rank), (1, 1));
        assert!(rep.all_pass());
        assert!(rep.determinant.is_unit());

        let rep = theta_slice(&d, 2, 0).unwrap();
        assert!(rep.all_pass());

        let m = Arc::new(CharGroup::cyclic(12));
        let d = delta_decompose(m, z(12)).unwrap();
        let s4 = d.quotients.iter().position(|q| q.order == 4).unwrap();
        let rep = theta_slice(&d, 2, s4).unwrap();
        assert_eq!(rep.matrix.rows(), 4);
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn nilpotency_examples() {
        let rep = nilpotency_check(&gset(&[6], &[&[3]]), z(6)).unwrap();
        assert_eq!(rep.component_index, Some(1));
        assert_eq!(rep.total_index, Some(1));
        let rep = nilpotency_check(&gset(&[2], &[&[], &[1]]), z(2)).unwrap();
        assert_eq!(rep.component_index, Some(1));
        assert_eq!(rep.total_index, None);
        let rep = nilpotency_check(&gset(&[], &[&[]]), LambdaRing::integers()).unwrap();
        assert_eq!(rep.component_index, Some(1));
    }
}
