//! Dispatch from instances to the core library.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use kdecomp_core::cyclo::{euler_phi, lambda_minus_one, TildeRingElement};
use kdecomp_core::diaggrp::{
    delta_decompose, describe_subgroup, generator_independence, CharGroup, DecompositionData, GroupAlgebraElement,
    Subgroup,
};
use kdecomp_core::gln::{
    binomial_witness, centralizer_blocks, enumerate_classes, restriction_index, torsor_freeness, weyl_w,
    WeightFunction,
};
use kdecomp_core::gsets::{essential_sigmas, nilpotency_check, theta_slice, verify_finite_group, verify_main_theorem, DiagGSet};
use kdecomp_core::lambda::LambdaRing;
use kdecomp_core::Error;
use serde_json::json;

use crate::instance::{Generator, InputError, Instance, Kind, Weights};
use crate::report::{Report, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Largest group order (or cyclic order) the engine will enumerate.
    pub max_order: u64,
    /// Takes precedence over an instance's own `lambda_override`.
    pub lambda_override: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_order: 512, lambda_override: None }
    }
}

type CacheKey = (Vec<u64>, u64);

/// Runs instances; decompositions are shared across runs.
#[derive(Debug, Default)]
pub struct Engine {
    options: Options,
    cache: Mutex<HashMap<CacheKey, Arc<DecompositionData>>>,
}

/// Largest number of weight vectors `classify-gln` will scan.
const MAX_COMPOSITIONS: u128 = 1 << 20;

fn binom(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn require<T: Clone>(field: &Option<T>, name: &str) -> Result<T, InputError> {
    field.clone().ok_or_else(|| InputError::at(format!("/{name}"), "missing required field"))
}

impl Engine {
    pub fn new(options: Options) -> Self {
        Engine { options, cache: Mutex::new(HashMap::new()) }
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn run(&self, name: &str, instance: &Instance) -> Result<Report, InputError> {
        let start = Instant::now();
        let mut report = Report::new(name, instance.clone());
        match instance.kind {
            Kind::Decompose => self.decompose(instance, &mut report)?,
            Kind::ClassifyGln => self.classify_gln(instance, &mut report)?,
            Kind::VerifyGset => self.verify_gset(instance, &mut report)?,
            Kind::VerifySlice => self.verify_slice(instance, &mut report)?,
            Kind::LambdaUnit => self.lambda_unit(instance, &mut report)?,
        }
        report.runtime_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }

    fn override_for(&self, instance: &Instance) -> Option<u64> {
        self.options.lambda_override.or(instance.lambda_override)
    }

    /// `Z[1/required]`, or the override when it is a multiple of `required`.
    fn ring_for(&self, instance: &Instance, required: u64) -> Result<LambdaRing, InputError> {
        let base = match self.override_for(instance) {
            None => required,
            Some(m) if m > 0 && m % required == 0 => m,
            Some(m) => {
                return Err(InputError::at("/lambda_override", Error::InvalidOverride { requested: m, required }))
            }
        };
        LambdaRing::new(base).map_err(|e| InputError::at("/lambda_override", e))
    }

    fn group(&self, instance: &Instance) -> Result<Arc<CharGroup>, InputError> {
        let factors = require(&instance.group, "group")?;
        let g = CharGroup::new(&factors).map_err(|e| InputError::at("/group", e))?;
        if g.order() as u64 > self.options.max_order {
            return Err(InputError::at(
                "/group",
                format!("group order {} exceeds the bound {}", g.order(), self.options.max_order),
            ));
        }
        Ok(Arc::new(g))
    }

    fn subgroup(group: &CharGroup, gens: &[Generator], pointer: &str) -> Result<Subgroup, InputError> {
        let mut tuples = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            let t = g.to_tuple();
            group.index_of(&t).map_err(|e| InputError::at(format!("{pointer}/{i}"), e))?;
            tuples.push(t);
        }
        Subgroup::from_tuples(group, &tuples).map_err(|e| InputError::at(pointer, e))
    }

    fn canonical_generators(group: &CharGroup, k: &Subgroup) -> Vec<Generator> {
        k.generators().iter().map(|&g| Generator::Tuple(group.tuple(g))).collect()
    }

    fn decomposition(&self, group: &Arc<CharGroup>, ring: LambdaRing) -> Result<Arc<DecompositionData>, Error> {
        let key = (group.invariant_factors().to_vec(), ring.base());
        if let Some(d) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(delta_decompose(group.clone(), ring)?);
        self.cache.lock().expect("cache lock").insert(key, d.clone());
        Ok(d)
    }

    fn decompose(&self, instance: &Instance, report: &mut Report) -> Result<(), InputError> {
        let group = self.group(instance)?;
        let ring = self.ring_for(instance, group.exponent())?;
        report.ring = ring.to_string();
        report.rank("group_order", group.order());
        let data = match self.decomposition(&group, ring) {
            Ok(d) => d,
            Err(e) => {
                report.verdict("delta_invertible", Verdict::fail(e.to_string()));
                return Ok(());
            }
        };
        let n = group.order();
        report.rank("quotients", data.quotients.len());
        report.rank("target_rank", data.components.iter().map(|c| c.rank()).sum::<usize>());

        let phi_sum: u64 = data.quotients.iter().map(|q| euler_phi(q.order)).sum();
        report.verdict(
            "counting_identity",
            Verdict::check(phi_sum == n as u64, || format!("sum of phi(s) is {phi_sum}, |M| is {n}")),
        );

        match data.delta.det() {
            Ok(d) => {
                report.determinant("delta", &d);
                report.verdict("delta_invertible", Verdict::check(d.is_unit(), || format!("determinant {d}")));
            }
            Err(e) => report.verdict("delta_invertible", Verdict::fail(e.to_string())),
        }

        report.verdict("ring_homomorphism", delta_multiplicative(&data));
        report.verdict("idempotents", idempotents_split(&data));

        let dependent: Vec<String> = data
            .quotients
            .iter()
            .filter(|q| !generator_independence(q))
            .map(|q| describe_subgroup(&group, &q.kernel))
            .collect();
        report.verdict(
            "generator_independence",
            Verdict::check(dependent.is_empty(), || format!("kernels {}", dependent.join(" "))),
        );

        let quotients: Vec<_> = data
            .quotients
            .iter()
            .map(|q| {
                json!({
                    "order": q.order,
                    "kernel": describe_subgroup(&group, &q.kernel),
                    "generator": group.tuple(q.generator),
                })
            })
            .collect();
        report.detail("quotients", json!(quotients));
        Ok(())
    }

    fn classify_gln(&self, instance: &Instance, report: &mut Report) -> Result<(), InputError> {
        let n = require(&instance.n, "n")?;
        let s = require(&instance.s, "s")?;
        if n == 0 {
            return Err(InputError::at("/n", "rank must be positive"));
        }
        if s == 0 || s > self.options.max_order {
            return Err(InputError::at("/s", format!("order must lie in 1..={}", self.options.max_order)));
        }
        if binom((n + s - 1) as u128, (s - 1) as u128) > MAX_COMPOSITIONS {
            return Err(InputError::at("/n", "too many weight vectors to enumerate"));
        }
        let ring = self.ring_for(instance, s)?;
        report.ring = ring.to_string();

        let chosen = match &instance.weights {
            None => None,
            Some(Weights::Dense(w)) => {
                if w.len() as u64 != s {
                    return Err(InputError::at("/weights", format!("expected {s} entries, found {}", w.len())));
                }
                Some(WeightFunction::with_rank(n, w.clone()).map_err(|e| InputError::at("/weights", e))?)
            }
            Some(Weights::Sparse(_)) => {
                return Err(InputError::at("/weights", "classify-gln takes a dense weight vector"));
            }
        };

        let classes = enumerate_classes(n, s);
        report.rank("classes", classes.len());
        let targets: Vec<WeightFunction> = match &chosen {
            Some(w) => vec![w.clone()],
            None => classes.iter().map(|c| c.canonical.clone()).collect(),
        };

        let bad_weyl: Vec<String> =
            targets.iter().filter(|w| !weyl_w(w).is_subgroup()).map(|w| w.to_string()).collect();
        report.verdict("weyl_subgroups", Verdict::check(bad_weyl.is_empty(), || bad_weyl.join(" ")));
        report.verdict("torsor_freeness", Verdict::check(torsor_freeness(s), || format!("s = {s}")));

        let primes: Vec<u64> = (2..=s).filter(|p| s % p == 0 && (2..*p).all(|d| p % d != 0)).collect();
        let mut bad_binom = Vec::new();
        for w in &targets {
            for d in centralizer_blocks(w) {
                for &p in &primes {
                    if !binomial_witness(d, p) {
                        bad_binom.push(format!("(d={d}, p={p})"));
                    }
                }
            }
        }
        bad_binom.dedup();
        report.verdict("binomial_witnesses", Verdict::check(bad_binom.is_empty(), || bad_binom.join(" ")));

        let mut failures = Vec::new();
        for w in &targets {
            match restriction_index(w, s * n) {
                Ok(ix) => {
                    if chosen.is_some() {
                        report.determinant("restriction_index", &ix);
                    }
                    if !ix.is_unit() {
                        failures.push(format!("{w}: index {ix}"));
                    }
                }
                Err(e) => failures.push(format!("{w}: {e}")),
            }
        }
        report.verdict("restriction_surjective", Verdict::check(failures.is_empty(), || failures.join("; ")));

        let rows: Vec<_> = targets
            .iter()
            .map(|w| {
                json!({
                    "weights": w.weights(),
                    "centralizer_blocks": centralizer_blocks(w),
                    "weyl": weyl_w(w).elements,
                })
            })
            .collect();
        report.detail("classes", json!(rows));
        Ok(())
    }

    fn gset(&self, instance: &Instance) -> Result<(DiagGSet, Vec<Vec<Generator>>), InputError> {
        let group = self.group(instance)?;
        let orbits = require(&instance.orbits, "orbits")?;
        if orbits.is_empty() {
            return Err(InputError::at("/orbits", Error::EmptySpace));
        }
        let mut subgroups = Vec::with_capacity(orbits.len());
        let mut echo = Vec::with_capacity(orbits.len());
        for (i, gens) in orbits.iter().enumerate() {
            let k = Self::subgroup(&group, gens, &format!("/orbits/{i}"))?;
            echo.push(Self::canonical_generators(&group, &k));
            subgroups.push(k);
        }
        let x = DiagGSet::new(group, subgroups).map_err(|e| InputError::at("/orbits", e))?;
        Ok((x, echo))
    }

    fn verify_gset(&self, instance: &Instance, report: &mut Report) -> Result<(), InputError> {
        let (x, echo) = self.gset(instance)?;
        report.instance.orbits = Some(echo);
        let essential = essential_sigmas(&x).map_err(|e| InputError::at("/orbits", e))?;
        let ring = self.ring_for(instance, essential.n)?;
        report.ring = ring.to_string();
        report.rank("essential", essential.quotients.len());
        report.rank("n", essential.n);

        let main = match verify_main_theorem(&x, Some(ring.base())) {
            Ok(m) => m,
            Err(e @ Error::Internal(_)) => {
                report.verdict("main_theorem", Verdict::fail(e.to_string()));
                return Ok(());
            }
            Err(e) => return Err(InputError::at("/", e)),
        };
        for (name, v) in main.verdicts() {
            report.verdict(name, v.into());
        }
        report.rank("source_rank", main.source_rank);
        report.rank("target_rank", main.target_rank);
        report.determinant("psi", &main.determinant);
        report.detail("essential_orders", json!(main.essential_orders));

        match verify_finite_group(&x, ring) {
            Ok(f) => {
                report.verdict("pi_pull_push", (&f.pull_push_scalar).into());
                report.verdict("pi_push_pull", (&f.push_pull_regular).into());
                report.verdict("pi_geometric_unit", (&f.geometric_unit).into());
                report.determinant("pi_geometric", &f.geometric_determinant);
            }
            Err(e) => report.verdict("pi_pull_push", Verdict::fail(e.to_string())),
        }

        match nilpotency_check(&x, ring) {
            Ok(nr) => {
                report.verdict(
                    "nilpotent_kernel",
                    Verdict::check(nr.component_index.is_some(), || "kernel of the rank map is not nilpotent".into()),
                );
                report.rank("geometric_rank", nr.geometric_rank);
                report.detail(
                    "nilpotency",
                    json!({ "component_index": nr.component_index, "total_index": nr.total_index }),
                );
            }
            Err(e) => report.verdict("nilpotent_kernel", Verdict::fail(e.to_string())),
        }
        Ok(())
    }

    fn verify_slice(&self, instance: &Instance, report: &mut Report) -> Result<(), InputError> {
        let group = self.group(instance)?;
        let r = instance.rank.unwrap_or(1);
        if r == 0 || r > 8 {
            return Err(InputError::at("/rank", "rank must lie in 1..=8"));
        }
        let ring = self.ring_for(instance, group.exponent())?;
        report.ring = ring.to_string();
        let data = match self.decomposition(&group, ring) {
            Ok(d) => d,
            Err(e) => {
                report.verdict("theta_unit", Verdict::fail(e.to_string()));
                return Ok(());
            }
        };
        let sigmas: Vec<usize> = match &instance.sigma_kernel {
            None => (0..data.quotients.len()).collect(),
            Some(gens) => {
                let k = Self::subgroup(&group, gens, "/sigma_kernel")?;
                report.instance.sigma_kernel = Some(Self::canonical_generators(&group, &k));
                let idx = data
                    .quotients
                    .iter()
                    .position(|q| q.kernel.members() == k.members())
                    .ok_or_else(|| InputError::at("/sigma_kernel", Error::NotCyclicQuotient))?;
                vec![idx]
            }
        };
        let mut factor_fail = Vec::new();
        let mut unit_fail = Vec::new();
        for &i in &sigmas {
            let label = describe_subgroup(&group, &data.quotients[i].kernel);
            match theta_slice(&data, r as usize, i) {
                Ok(t) => {
                    if !t.factors_through_localization.pass {
                        factor_fail.push(label.clone());
                    }
                    if !t.unit_determinant.pass {
                        unit_fail.push(format!("{label}: {}", t.unit_determinant.witness.unwrap_or_default()));
                    }
                    report.determinant(&format!("theta{label}"), &t.determinant);
                    report.rank(&format!("localized{label}"), t.source_rank);
                    report.rank(&format!("target{label}"), t.target_rank);
                }
                Err(e) => unit_fail.push(format!("{label}: {e}")),
            }
        }
        report.verdict(
            "theta_factors_through_localization",
            Verdict::check(factor_fail.is_empty(), || factor_fail.join(" ")),
        );
        report.verdict("theta_unit", Verdict::check(unit_fail.is_empty(), || unit_fail.join("; ")));
        Ok(())
    }

    fn lambda_unit(&self, instance: &Instance, report: &mut Report) -> Result<(), InputError> {
        let s = require(&instance.s, "s")?;
        if s == 0 || s > self.options.max_order {
            return Err(InputError::at("/s", format!("order must lie in 1..={}", self.options.max_order)));
        }
        let raw = require(&instance.weights, "weights")?;
        let mut weights: BTreeMap<u64, u32> = BTreeMap::new();
        let mut add = |a: u64, r: u64, pointer: String| -> Result<(), InputError> {
            let r = u32::try_from(r).ok().filter(|&r| r <= 64).ok_or_else(|| InputError::at(&pointer, "multiplicity exceeds 64"))?;
            *weights.entry(a % s).or_default() += r;
            Ok(())
        };
        match &raw {
            Weights::Dense(w) => {
                for (a, &r) in w.iter().enumerate() {
                    add(a as u64, r, format!("/weights/{a}"))?;
                }
            }
            Weights::Sparse(m) => {
                for (k, &r) in m {
                    let pointer = format!("/weights/{}", k.replace('~', "~0").replace('/', "~1"));
                    let a: u64 = k.parse().map_err(|_| InputError::at(&pointer, "key is not a residue"))?;
                    add(a, r, pointer)?;
                }
            }
        }
        weights.retain(|_, r| *r > 0);
        report.instance.weights =
            Some(Weights::Sparse(weights.iter().map(|(a, r)| (a.to_string(), u64::from(*r))).collect()));
        let ring = self.ring_for(instance, s)?;
        report.ring = ring.to_string();
        match lambda_minus_one(s, &weights, ring) {
            Ok(l) => {
                report.verdict("no_fixed_weight", Verdict::pass());
                report.verdict("unit", Verdict::check(l.is_unit, || format!("norm {}", l.image_norm)));
                report.determinant("norm", &l.image_norm);
                report.detail("image", json!(l.image.to_string()));
            }
            Err(Error::FixedWeight { residues, image_norm }) => {
                report.verdict("no_fixed_weight", Verdict::fail(format!("residues {residues:?} are fixed")));
                report.verdict("unit", Verdict::check(image_norm.is_unit(), || format!("norm {image_norm}")));
                report.determinant("norm", &image_norm);
            }
            Err(e) => return Err(InputError::at("/", e)),
        }
        Ok(())
    }
}

/// `δ(g·m) = δ(g)·δ(m)` for every generator `g` and basis character `m`,
/// which forces multiplicativity on all of `Λ[M]`.
fn delta_multiplicative(data: &DecompositionData) -> Verdict {
    let group = &data.group;
    let n = group.order();
    let column = |m: usize| -> Result<Vec<TildeRingElement>, Error> {
        data.apply(&GroupAlgebraElement::basis(group.clone(), data.ring, m))
    };
    let run = || -> Result<Option<String>, Error> {
        let images: Vec<_> = (0..n).map(column).collect::<Result<_, _>>()?;
        for g in group.generator_images() {
            for m in 0..n {
                let gm = group.add(g, m);
                for (k, (a, b)) in images[g].iter().zip(&images[m]).enumerate() {
                    if a.mul(b)? != images[gm][k] {
                        return Ok(Some(format!(
                            "characters {:?} and {:?} at quotient {}",
                            group.tuple(g),
                            group.tuple(m),
                            k
                        )));
                    }
                }
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => Verdict::pass(),
        Ok(Some(w)) => Verdict::fail(w),
        Err(e) => Verdict::fail(e.to_string()),
    }
}

/// `δ(e_σ)` is the unit of the σ factor and zero elsewhere, and
/// `Σ e_σ = 1`.
fn idempotents_split(data: &DecompositionData) -> Verdict {
    let run = || -> Result<Option<String>, Error> {
        let one = GroupAlgebraElement::one(data.group.clone(), data.ring);
        let mut sum = GroupAlgebraElement::zero(data.group.clone(), data.ring);
        for (i, e) in data.idempotents.iter().enumerate() {
            let parts = data.apply(e)?;
            for (j, p) in parts.iter().enumerate() {
                let ok = if i == j { p.is_one() } else { p.is_zero() };
                if !ok {
                    return Ok(Some(format!("idempotent {i} has component {p} at quotient {j}")));
                }
            }
            sum = sum.add(e)?;
        }
        Ok((sum != one).then(|| "idempotents do not sum to 1".to_string()))
    };
    match run() {
        Ok(None) => Verdict::pass(),
        Ok(Some(w)) => Verdict::fail(w),
        Err(e) => Verdict::fail(e.to_string()),
    }
}
