//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use kdecomp_core::cyclo::{cyclotomic, divisors, euler_phi, norm, TildeRing};
use kdecomp_core::diaggrp::{
    abelian_groups_of_order, delta_decompose, enumerate_cyclic_quotients, sigma_localize, CharGroup,
    DecompositionData, GroupAlgebraElement, RModule, Subgroup,
};
use kdecomp_core::gln::{
    binomial_witness, enumerate_classes, restriction_index, torsor_freeness, units_mod, weyl_w,
};
use kdecomp_core::gsets::{
    essential_sigmas, nilpotency_check, theta_slice, verify_finite_group, verify_main_theorem, DiagGSet,
};
use kdecomp_core::lambda::LambdaRing;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 0x6b64_6563_6f6d_7030;

type Outcome = Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(n: u64) -> LambdaRing {
    LambdaRing::new(n.max(1)).expect("positive base")
}

fn groups_of_order_at_most(n: u64) -> Vec<Arc<CharGroup>> {
    (1..=n).flat_map(abelian_groups_of_order).map(Arc::new).collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn criterion_1() -> Outcome {
    for s in 1..=200u64 {
        let product = divisors(s).into_iter().fold(vec![BigInt::one()], |acc, d| poly_mul(&acc, cyclotomic(d).coeffs()));
        let mut expected = vec![BigInt::zero(); s as usize + 1];
        expected[0] = BigInt::from(-1);
        expected[s as usize] = BigInt::one();
        ensure(product == expected, || format!("product of cyclotomic polynomials differs from t^{s} - 1"))?;
    }
    Ok("s <= 200".into())
}

/// `δ(1) = 1` and `δ(g·m) = δ(g)·δ(m)` for generators `g` and all basis
/// characters `m`.
fn delta_is_multiplicative(d: &DecompositionData) -> Result<(), String> {
    let g = &d.group;
    let images: Vec<_> = (0..g.order())
        .map(|m| d.apply(&GroupAlgebraElement::basis(g.clone(), d.ring, m)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(images[g.zero()].iter().all(|c| c.is_one()), || format!("{g}: δ(1) != 1"))?;
    for a in g.generator_images() {
        for m in 0..g.order() {
            let am = g.add(a, m);
            for (k, (x, y)) in images[a].iter().zip(&images[m]).enumerate() {
                let p = x.mul(y).map_err(|e| e.to_string())?;
                ensure(p == images[am][k], || format!("{g}: δ not multiplicative at {a}*{m}, quotient {k}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let groups = groups_of_order_at_most(64);
    groups.par_iter().try_for_each(|m| -> Result<(), String> {
        let n = m.order() as u64;
        let d = delta_decompose(m.clone(), ring(n)).map_err(|e| format!("{m}: {e}"))?;
        let det = d.delta.det().map_err(|e| e.to_string())?;
        ensure(det.is_unit(), || format!("{m}: det δ = {det}"))?;
        delta_is_multiplicative(&d)?;
        let lib: BTreeSet<(u64, u128)> =
            d.quotients.iter().map(|q| (q.order, oracle::bitset(q.kernel.members()))).collect();
        let brute = oracle::Abelian { factors: m.invariant_factors().to_vec() }.cyclic_quotient_kernels();
        ensure(lib == brute, || format!("{m}: cyclic quotients differ from subgroup search"))
    })?;
    let mut counted = 0;
    for m in groups_of_order_at_most(128) {
        let total: u64 = enumerate_cyclic_quotients(&m).iter().map(|q| euler_phi(q.order)).sum();
        ensure(total == m.order() as u64, || format!("{m}: sum of phi is {total}"))?;
        counted += 1;
    }
    Ok(format!("{} groups with |M| <= 64, counting identity on {counted} groups with |M| <= 128", groups.len()))
}

fn subgroups(m: &Arc<CharGroup>) -> Vec<Subgroup> {
    let members = |bits: u128| -> Vec<usize> { (0..m.order()).filter(|&i| bits >> i & 1 == 1).collect() };
    oracle::Abelian { factors: m.invariant_factors().to_vec() }
        .all_subgroups()
        .into_iter()
        .map(|b| Subgroup::generated(m, &members(b)))
        .collect()
}

fn criterion_3() -> Outcome {
    let groups = groups_of_order_at_most(64);
    groups.par_iter().try_for_each(|m| -> Result<(), String> {
        let r = ring(m.order() as u64);
        let d = delta_decompose(m.clone(), r).map_err(|e| e.to_string())?;
        let zero = GroupAlgebraElement::zero(m.clone(), r);
        let mut sum = zero.clone();
        for (i, e) in d.idempotents.iter().enumerate() {
            ensure(e.mul(e).map_err(|x| x.to_string())? == *e, || format!("{m}: e_{i} is not idempotent"))?;
            for (j, f) in d.idempotents.iter().enumerate().skip(i + 1) {
                ensure(e.mul(f).map_err(|x| x.to_string())? == zero, || format!("{m}: e_{i} e_{j} != 0"))?;
            }
            sum = sum.add(e).map_err(|x| x.to_string())?;
        }
        ensure(sum == GroupAlgebraElement::one(m.clone(), r), || format!("{m}: idempotents do not sum to 1"))
    })?;

    // Λ[M/K'] localized at σ vanishes iff K' ⊄ K_σ
    let mut vanishing = 0;
    let mut surviving = 0;
    for m in groups_of_order_at_most(12) {
        let r = ring(m.order() as u64);
        let d = delta_decompose(m.clone(), r).map_err(|e| e.to_string())?;
        for k in subgroups(&m) {
            let module = RModule::quotient_algebra(m.clone(), r, &k).map_err(|e| e.to_string())?;
            for (i, q) in d.quotients.iter().enumerate() {
                let loc = sigma_localize(&module, &d, i).map_err(|e| e.to_string())?;
                if q.factors_through(&k) {
                    ensure(loc.rank() as u64 == euler_phi(q.order), || format!("{m}: rank {} at σ {i}", loc.rank()))?;
                    surviving += 1;
                } else {
                    ensure(loc.rank() == 0 && loc.projection.is_zero(), || format!("{m}: nonzero localization at σ {i}"))?;
                    vanishing += 1;
                }
            }
        }
    }
    ensure(vanishing >= 20, || format!("only {vanishing} vanishing cases"))?;
    Ok(format!("{} groups; {vanishing} vanishing and {surviving} surviving localizations", groups.len()))
}

fn criterion_4() -> Outcome {
    for s in 2..=30u64 {
        let tr = TildeRing::new(ring(s), s);
        for l in 1..s {
            let x = tr.one().sub(&tr.monomial(l as usize)).map_err(|e| e.to_string())?;
            let nx = norm(&x);
            ensure(nx.is_unit(), || format!("s = {s}, l = {l}: norm {nx}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pairs = 0;
    for s in [3u64, 4, 5, 6, 8, 12] {
        let r = ring(s);
        let tr = TildeRing::new(r, s);
        let random = |rng: &mut ChaCha8Rng| {
            let c = (0..tr.rank()).map(|_| r.int(rng.gen_range(-9i64..=9))).collect();
            tr.element(c).expect("coefficients in the ring")
        };
        for _ in 0..1000 {
            let (x, y) = (random(&mut rng), random(&mut rng));
            let xy = x.mul(&y).map_err(|e| e.to_string())?;
            let lhs = norm(&xy);
            let rhs = norm(&x).try_mul(&norm(&y)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("s = {s}: N(xy) = {lhs}, N(x)N(y) = {rhs}"))?;
            pairs += 1;
        }
    }
    Ok(format!("1 - t^l for s <= 30, {pairs} random norm pairs"))
}

/// The groups `G` with `|G|` in the desk-scale list, with their subgroups.
fn gset_groups() -> Vec<(Arc<CharGroup>, Vec<Subgroup>)> {
    [1u64, 2, 3, 4, 6, 8, 12]
        .into_iter()
        .flat_map(abelian_groups_of_order)
        .map(|g| {
            let g = Arc::new(g);
            let subs = subgroups(&g);
            (g, subs)
        })
        .collect()
}

/// Every multiset of at most 4 orbit types, plus 200 random G-sets with
/// at most 8 orbits.
fn gset_grid() -> Vec<DiagGSet> {
    let mut out = Vec::new();
    let groups = gset_groups();
    for (g, subs) in &groups {
        let mut stack: Vec<Vec<usize>> = (0..subs.len()).map(|i| vec![i]).collect();
        while let Some(ms) = stack.pop() {
            let orbits = ms.iter().map(|&i| subs[i].clone()).collect();
            out.push(DiagGSet::new(g.clone(), orbits).expect("valid orbits"));
            if ms.len() < 4 {
                let last = *ms.last().expect("nonempty");
                for i in last..subs.len() {
                    let mut next = ms.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for _ in 0..200 {
        let (g, subs) = &groups[rng.gen_range(0..groups.len())];
        let k = rng.gen_range(1..=8);
        let orbits = (0..k).map(|_| subs[rng.gen_range(0..subs.len())].clone()).collect();
        out.push(DiagGSet::new(g.clone(), orbits).expect("valid orbits"));
    }
    out
}

fn describe(x: &DiagGSet) -> String {
    let orbits: Vec<usize> = x.orbits().iter().map(Subgroup::order).collect();
    format!("G = {}, stabilizer kernels of orders {orbits:?}", x.group())
}

fn criterion_5(grid: &[DiagGSet]) -> Outcome {
    grid.par_iter().try_for_each(|x| -> Result<(), String> {
        let rep = verify_main_theorem(x, None).map_err(|e| format!("{}: {e}", describe(x)))?;
        let n = essential_sigmas(x).map_err(|e| e.to_string())?.n;
        ensure(rep.ring == ring(n), || format!("{}: ring {} instead of Z[1/{n}]", describe(x), rep.ring))?;
        for (name, v) in rep.verdicts() {
            ensure(v.pass, || format!("{}: {name} failed: {:?}", describe(x), v.witness))?;
        }
        Ok(())
    })?;
    Ok(format!("{} G-sets", grid.len()))
}

fn criterion_6(grid: &[DiagGSet]) -> Outcome {
    grid.par_iter().try_for_each(|x| -> Result<(), String> {
        let rep = verify_finite_group(x, ring(x.group().order() as u64)).map_err(|e| e.to_string())?;
        ensure(rep.all_pass(), || {
            format!(
                "{}: {:?} {:?} {:?}",
                describe(x),
                rep.pull_push_scalar,
                rep.push_pull_regular,
                rep.geometric_unit
            )
        })
    })?;
    Ok(format!("{} G-sets", grid.len()))
}

fn criterion_7() -> Outcome {
    let groups = groups_of_order_at_most(24);
    let cases: Vec<(Arc<DecompositionData>, usize, usize)> = groups
        .iter()
        .map(|m| delta_decompose(m.clone(), ring(m.order() as u64)).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .flat_map(|d| {
            let q = d.quotients.len();
            (0..q).flat_map(move |s| (1..=3).map(move |r| (s, r))).map(move |(s, r)| (d.clone(), s, r))
        })
        .collect();
    cases.par_iter().try_for_each(|(d, s, r)| -> Result<(), String> {
        let rep = theta_slice(d, *r, *s).map_err(|e| e.to_string())?;
        ensure(rep.all_pass(), || {
            format!("{} σ {s} r {r}: {:?} {:?}", d.group, rep.factors_through_localization, rep.unit_determinant)
        })
    })?;
    Ok(format!("{} groups, {} (σ, r) slices", groups.len(), cases.len()))
}

fn criterion_8() -> Outcome {
    let mut classes = 0;
    for n in 1..=6u64 {
        for s in 1..=8u64 {
            let found = enumerate_classes(n, s);
            let expected = oracle::burnside_class_count(n, s);
            ensure(found.len() as u64 == expected, || format!("n = {n}, s = {s}: {} classes, expected {expected}", found.len()))?;
            for c in &found {
                let w = &c.canonical;
                let weyl = weyl_w(w);
                ensure(weyl.is_subgroup(), || format!("{w}: Weyl group is not a subgroup"))?;
                let stabilizer: Vec<u64> = units_mod(s).into_iter().filter(|&u| w.reindex(u) == *w).collect();
                ensure(weyl.elements == stabilizer, || format!("{w}: Weyl group is not the stabilizer"))?;
                classes += 1;
            }
        }
    }
    Ok(format!("{classes} classes for n <= 6, s <= 8"))
}

fn criterion_9() -> Outcome {
    for s in 1..=1000u64 {
        ensure(torsor_freeness(s), || format!("torsor freeness fails at s = {s}"))?;
    }
    let primes: Vec<u64> = (2..=64u64).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    for n in 1..=64u64 {
        for &p in &primes {
            ensure(binomial_witness(n, p), || format!("binomial witness fails at n = {n}, p = {p}"))?;
        }
    }
    let mut indices = 0;
    for n in 1..=4u64 {
        for s in 1..=6u64 {
            for c in enumerate_classes(n, s) {
                let w = &c.canonical;
                let ix = restriction_index(w, s * n).map_err(|e| format!("{w}: {e}"))?;
                ensure(ix.is_unit(), || format!("{w}: restriction index {ix}"))?;
                let dp = oracle::restriction_index_dp(w.weights(), s * n);
                ensure(dp.as_ref() == Some(ix.numerator()), || format!("{w}: index {ix}, oracle {dp:?}"))?;
                indices += 1;
            }
        }
    }
    Ok(format!("torsors s <= 1000, binomials n, p <= 64, {indices} restriction indices"))
}

fn criterion_10(grid: &[DiagGSet]) -> Outcome {
    let singles: Vec<&DiagGSet> = grid.iter().filter(|x| x.orbits().len() == 1).collect();
    singles.par_iter().try_for_each(|x| -> Result<(), String> {
        let n = essential_sigmas(x).map_err(|e| e.to_string())?.n;
        let rep = nilpotency_check(x, ring(n)).map_err(|e| e.to_string())?;
        ensure(rep.component_index == Some(1), || format!("{}: kernel index {:?}", describe(x), rep.component_index))
    })?;
    Ok(format!("{} single-orbit G-sets", singles.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let grid = gset_grid();
    let criteria: Vec<Criterion> = vec![
        ("cyclotomic identity", Box::new(criterion_1)),
        ("delta isomorphism", Box::new(criterion_2)),
        ("idempotents and localization", Box::new(criterion_3)),
        ("lambda units and norms", Box::new(criterion_4)),
        ("main theorem", Box::new(|| criterion_5(&grid))),
        ("finite group comparison", Box::new(|| criterion_6(&grid))),
        ("theta on slices", Box::new(criterion_7)),
        ("GL_n classification", Box::new(criterion_8)),
        ("surjectivity combinatorics", Box::new(criterion_9)),
        ("nilpotent kernel", Box::new(|| criterion_10(&grid))),
    ];
    let mut failed = BTreeMap::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(witness) => {
                println!("criterion {:>2} FAIL  {name}: {witness} ({secs:.1}s)", i + 1);
                failed.insert(i + 1, witness);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1}s", criteria.len() - failed.len(), criteria.len(), start.elapsed().as_secs_f64());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
