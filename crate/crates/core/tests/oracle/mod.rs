//! Brute-force reference computations, written without the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `Z/d_1 x ... x Z/d_k` with elements numbered lexicographically.
pub struct Abelian {
    pub factors: Vec<u64>,
}

impl Abelian {
    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn decode(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let d = self.factors[k] as usize;
            out[k] = (i % d) as u64;
            i /= d;
        }
        out
    }

    pub fn encode(&self, t: &[u64]) -> usize {
        t.iter().zip(&self.factors).fold(0, |acc, (&a, &d)| acc * d as usize + (a % d) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.encode(&s)
    }

    /// Subgroup generated by the subgroup `set` and `g`: the union of the
    /// cosets `set + k·g`.
    pub fn closure(&self, set: u128, g: usize) -> u128 {
        let members: Vec<usize> = (0..self.order()).filter(|&a| set >> a & 1 == 1).collect();
        let mut out = 1;
        let mut x = 0;
        loop {
            for &a in &members {
                out |= 1 << self.add(a, x);
            }
            x = self.add(x, g);
            if x == 0 {
                return out;
            }
        }
    }

    /// Every subgroup, grown one generator at a time.
    pub fn all_subgroups(&self) -> BTreeSet<u128> {
        assert!(self.order() <= 128);
        let mut seen: BTreeSet<u128> = [1u128].into_iter().collect();
        let mut frontier: Vec<u128> = vec![1];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h >> g & 1 == 0 {
                    let k = self.closure(h, g);
                    if seen.insert(k) {
                        frontier.push(k);
                    }
                }
            }
        }
        seen
    }

    /// Kernels `K` with `M/K` cyclic, with the order of the quotient.
    pub fn cyclic_quotient_kernels(&self) -> BTreeSet<(u64, u128)> {
        let n = self.order() as u64;
        self.all_subgroups()
            .into_iter()
            .filter_map(|k| {
                let s = n / k.count_ones() as u64;
                (0..self.order()).any(|g| self.closure(k, g).count_ones() as u64 == n).then_some((s, k))
            })
            .collect()
    }
}

pub fn bitset(members: &[usize]) -> u128 {
    members.iter().fold(0, |acc, &m| acc | 1 << m)
}

pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&a| a.gcd(&n) == 1).count() as u64
}

/// Number of `(Z/s)*`-orbits on weight vectors of total `n` with generating
/// support, by Burnside's lemma.
pub fn burnside_class_count(n: u64, s: u64) -> u64 {
    let units: Vec<u64> = (0..s).filter(|&a| a.gcd(&s) == 1).collect();
    let mut vectors = Vec::new();
    let mut cur = vec![0u64; s as usize];
    fn go(i: usize, rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == cur.len() {
            cur[i] = rest;
            out.push(cur.clone());
            return;
        }
        for x in 0..=rest {
            cur[i] = x;
            go(i + 1, rest - x, cur, out);
        }
    }
    go(0, n, &mut cur, &mut vectors);
    let valid: Vec<Vec<u64>> = vectors
        .into_iter()
        .filter(|w| w.iter().enumerate().filter(|(_, &m)| m > 0).fold(s, |g, (a, _)| g.gcd(&(a as u64))) == 1)
        .collect();
    let fixed: u64 = units
        .iter()
        .map(|&u| valid.iter().filter(|w| (0..s).all(|x| w[(u * x % s) as usize] == w[x as usize])).count() as u64)
        .sum();
    assert_eq!(fixed % units.len() as u64, 0);
    fixed / units.len() as u64
}

/// Index of the monomial lattice spanned by products of `binom(d, r) t^{r a}`
/// of total degree at most `bound`: per exponent, the gcd of reachable
/// coefficients. `None` when some exponent is unreachable.
pub fn restriction_index_dp(w: &[u64], bound: u64) -> Option<BigInt> {
    let s = w.len();
    let mut gens = Vec::new();
    for (a, &d) in w.iter().enumerate() {
        for r in 1..=d {
            gens.push((r as usize, num_integer::binomial(BigInt::from(d), BigInt::from(r)), (r as usize * a) % s));
        }
    }
    let mut best: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); s]];
    best[0][0] = BigInt::one();
    for k in 1..=bound as usize {
        let mut row = vec![BigInt::zero(); s];
        for (r, c, e) in &gens {
            if *r > k {
                continue;
            }
            for (src, v) in best[k - r].iter().enumerate() {
                if !v.is_zero() {
                    let t = (src + e) % s;
                    row[t] = row[t].gcd(&(c * v));
                }
            }
        }
        best.push(row);
    }
    let mut idx = BigInt::one();
    for e in 0..s {
        let g = best.iter().fold(BigInt::zero(), |acc, row| acc.gcd(&row[e]));
        if g.is_zero() {
            return None;
        }
        idx *= g;
    }
    Some(idx)
}

/// Invariant-factor chains of order `n`.
pub fn chains(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, last: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(acc.iter().rev().copied().collect());
            return;
        }
        for d in 2..=n {
            if n % d == 0 && last % d == 0 {
                acc.push(d);
                go(n / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
