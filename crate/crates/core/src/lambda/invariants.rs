//! Invariants of a finite group acting on a product of free modules that it
//! permutes, computed both globally and orbit by orbit.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::lattice::integer_kernel;
use super::{LambdaMatrix, LambdaRing, LocalizedScalar};
use crate::{Error, Result};

/// One group element (typically a generator): a permutation of the index
/// set together with the maps `M_α -> M_{wα}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub permutation: Vec<usize>,
    pub maps: Vec<LambdaMatrix>,
}

impl GroupAction {
    fn identity(ring: LambdaRing, ranks: &[usize]) -> Self {
        GroupAction {
            permutation: (0..ranks.len()).collect(),
            maps: ranks.iter().map(|&r| LambdaMatrix::identity(ring, r)).collect(),
        }
    }

    /// `self ∘ other`.
    fn compose(&self, other: &GroupAction) -> Result<Self> {
        let permutation = other.permutation.iter().map(|&a| self.permutation[a]).collect();
        let maps = other
            .permutation
            .iter()
            .zip(&other.maps)
            .map(|(&a, m)| self.maps[a].mul(m))
            .collect::<Result<_>>()?;
        Ok(GroupAction { permutation, maps })
    }

    fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p) && self.maps.iter().all(LambdaMatrix::is_identity)
    }
}

/// A family `(M_α)_{α ∈ A}` of free `Λ`-modules with a `W`-action given by
/// generators and defining relations.
#[derive(Clone, Debug)]
pub struct IndexedModuleFamily {
    pub ring: LambdaRing,
    pub ranks: Vec<usize>,
    pub generators: Vec<GroupAction>,
    /// Words in the generators (applied right to left) that must act trivially.
    pub relations: Vec<Vec<usize>>,
}

/// Output of [`invariants_by_orbits`].
#[derive(Clone, Debug)]
pub struct OrbitInvariants {
    /// Orbit representatives `B` (smallest index of each orbit).
    pub representatives: Vec<usize>,
    /// `|W_β|` for each representative.
    pub stabilizer_orders: Vec<usize>,
    pub group_order: usize,
    /// Columns: a `Λ`-basis of `(∏ M_α)^W` in the concatenated coordinates.
    pub invariant_basis: LambdaMatrix,
    /// For each representative, columns spanning `M_β^{W_β}`.
    pub local_bases: Vec<LambdaMatrix>,
    /// The projection `(∏ M_α)^W -> ∏ M_β^{W_β}` in these bases.
    pub comparison: LambdaMatrix,
    pub comparison_det: LocalizedScalar,
}

impl OrbitInvariants {
    pub fn invariant_rank(&self) -> usize {
        self.invariant_basis.cols()
    }

    pub fn local_ranks(&self) -> Vec<usize> {
        self.local_bases.iter().map(LambdaMatrix::cols).collect()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.comparison.is_square() && self.comparison_det.is_unit()
    }
}

const MAX_GROUP_ORDER: usize = 20_000;

impl IndexedModuleFamily {
    fn validate(&self) -> Result<()> {
        let n = self.ranks.len();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.permutation.len() != n || g.maps.len() != n {
                return Err(Error::CocycleViolation(format!("generator {gi} has the wrong length")));
            }
            let seen: BTreeSet<usize> = g.permutation.iter().copied().collect();
            if seen.len() != n || seen.iter().any(|&p| p >= n) {
                return Err(Error::CocycleViolation(format!("generator {gi} is not a permutation")));
            }
            for (a, m) in g.maps.iter().enumerate() {
                let target = g.permutation[a];
                if m.rows() != self.ranks[target] || m.cols() != self.ranks[a] {
                    return Err(Error::CocycleViolation(format!(
                        "generator {gi}: map on index {a} has shape {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        self.ranks[target],
                        self.ranks[a]
                    )));
                }
                if m.ring() != self.ring {
                    return Err(Error::RingMismatch { left: self.ring.base(), right: m.ring().base() });
                }
                if m.try_invert().is_err() {
                    return Err(Error::CocycleViolation(format!("generator {gi}: map on index {a} is not invertible")));
                }
            }
        }
        for (ri, word) in self.relations.iter().enumerate() {
            let mut acc = GroupAction::identity(self.ring, &self.ranks);
            for &g in word.iter().rev() {
                let gen = self
                    .generators
                    .get(g)
                    .ok_or_else(|| Error::CocycleViolation(format!("relation {ri} names unknown generator {g}")))?;
                acc = gen.compose(&acc)?;
            }
            if !acc.is_identity() {
                return Err(Error::CocycleViolation(format!("relation {ri} ({word:?}) does not act trivially")));
            }
        }
        Ok(())
    }

    /// All elements of the group generated by the generators.
    pub fn elements(&self) -> Result<Vec<GroupAction>> {
        self.validate()?;
        let mut elems = alloc::vec![GroupAction::identity(self.ring, &self.ranks)];
        let mut frontier = 0;
        while frontier < elems.len() {
            let x = elems[frontier].clone();
            frontier += 1;
            for g in &self.generators {
                let y = g.compose(&x)?;
                if !elems.contains(&y) {
                    if elems.len() >= MAX_GROUP_ORDER {
                        return Err(Error::CocycleViolation("generated group is too large; missing relations?".into()));
                    }
                    elems.push(y);
                }
            }
        }
        Ok(elems)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.ranks.len() + 1);
        off.push(0);
        for r in &self.ranks {
            off.push(off.last().unwrap() + r);
        }
        off
    }

    /// The action of `w` on the concatenated module `⊕ M_α`.
    fn total_matrix(&self, w: &GroupAction) -> LambdaMatrix {
        let off = self.offsets();
        let dim = off[self.ranks.len()];
        let mut m = LambdaMatrix::zeros(self.ring, dim, dim);
        for (a, map) in w.maps.iter().enumerate() {
            let b = w.permutation[a];
            for i in 0..map.rows() {
                for j in 0..map.cols() {
                    m.set(off[b] + i, off[a] + j, map.get(i, j).clone());
                }
            }
        }
        m
    }
}

/// `Λ`-basis (as columns) of the common fixed vectors of the given square
/// matrices.
fn fixed_basis(ring: LambdaRing, dim: usize, actions: &[LambdaMatrix]) -> Result<LambdaMatrix> {
    let id = LambdaMatrix::identity(ring, dim);
    let mut stacked: Vec<BigInt> = Vec::new();
    let mut rows = 0;
    for a in actions {
        let (b, _) = a.sub(&id)?.integer_form();
        stacked.extend(b);
        rows += dim;
    }
    let kernel = integer_kernel(rows, dim, &stacked);
    let columns: Vec<Vec<LocalizedScalar>> =
        kernel.into_iter().map(|v| v.into_iter().map(|x| ring.int(x)).collect()).collect();
    LambdaMatrix::from_columns(ring, dim, &columns)
}

/// Computes `(∏_α M_α)^W` directly and compares it with `∏_{β ∈ B} M_β^{W_β}`
/// through the projection onto the representatives.
pub fn invariants_by_orbits(fam: &IndexedModuleFamily) -> Result<OrbitInvariants> {
    let elements = fam.elements()?;
    let n = fam.ranks.len();
    let off = fam.offsets();
    let dim = off[n];

    let mut representatives = Vec::new();
    let mut seen = alloc::vec![false; n];
    for a in 0..n {
        if seen[a] {
            continue;
        }
        representatives.push(a);
        for w in &elements {
            seen[w.permutation[a]] = true;
        }
    }

    let gen_mats: Vec<LambdaMatrix> = fam.generators.iter().map(|g| fam.total_matrix(g)).collect();
    let invariant_basis = fixed_basis(fam.ring, dim, &gen_mats)?;

    let mut stabilizer_orders = Vec::new();
    let mut local_bases = Vec::new();
    for &b in &representatives {
        let stab: Vec<LambdaMatrix> =
            elements.iter().filter(|w| w.permutation[b] == b).map(|w| w.maps[b].clone()).collect();
        stabilizer_orders.push(stab.len());
        local_bases.push(fixed_basis(fam.ring, fam.ranks[b], &stab)?);
    }

    let local_rank: usize = local_bases.iter().map(LambdaMatrix::cols).sum();
    if local_rank != invariant_basis.cols() {
        return Err(Error::Internal(format!(
            "invariant rank {} differs from orbit-wise rank {local_rank}",
            invariant_basis.cols()
        )));
    }

    // project onto the representatives, then express in the local bases
    let proj_rows: usize = representatives.iter().map(|&b| fam.ranks[b]).sum();
    let mut projected = LambdaMatrix::zeros(fam.ring, proj_rows, invariant_basis.cols());
    let mut local = LambdaMatrix::zeros(fam.ring, proj_rows, local_rank);
    let (mut row0, mut col0) = (0, 0);
    for (&b, basis) in representatives.iter().zip(&local_bases) {
        for i in 0..fam.ranks[b] {
            for j in 0..invariant_basis.cols() {
                projected.set(row0 + i, j, invariant_basis.get(off[b] + i, j).clone());
            }
            for j in 0..basis.cols() {
                local.set(row0 + i, col0 + j, basis.get(i, j).clone());
            }
        }
        row0 += fam.ranks[b];
        col0 += basis.cols();
    }
    let comparison = local.solve_columns(&projected)?;
    let comparison_det = comparison.det()?;

    Ok(OrbitInvariants {
        representatives,
        stabilizer_orders,
        group_order: elements.len(),
        invariant_basis,
        local_bases,
        comparison,
        comparison_det,
    })
}
