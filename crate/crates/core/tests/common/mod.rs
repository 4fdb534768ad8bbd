//! Independent model of staircase complexes used to cross-check the library.
//!
//! Gradings come from the closed-form sums rather than a step recursion, and
//! filtered homology is read off combinatorially: the only differentials are
//! `x_{2k+1} -> x_{2k+2}`, so a pair cancels exactly when its upper end lies
//! in the sublevel set.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cablefloer::laurent::LaurentPoly;

pub type Ranks = BTreeMap<i64, usize>;

#[derive(Debug, Clone)]
pub struct Staircase {
    /// `(A, M)` of `x_0, x_1, ...` in order of decreasing `A`.
    pub gens: Vec<(i64, i64)>,
}

pub fn staircase(delta: &LaurentPoly) -> Staircase {
    let terms: Vec<(i64, i64)> = delta.terms_desc().collect();
    for (i, &(_, c)) in terms.iter().enumerate() {
        assert_eq!(c, if i % 2 == 0 { 1 } else { -1 }, "{delta} is not a staircase polynomial");
    }
    let e: Vec<i64> = terms.iter().map(|&(e, _)| e).collect();
    let even_m = |k: usize| -> i64 { -2 * (0..k).map(|i| e[2 * i] - e[2 * i + 1]).sum::<i64>() };
    let gens = (0..e.len())
        .map(|i| {
            let m = if i % 2 == 0 { even_m(i / 2) } else { even_m(i / 2 + 1) + 1 };
            (e[i], m)
        })
        .collect();
    Staircase { gens }
}

impl Staircase {
    pub fn filt(&self, j: i64) -> Ranks {
        let mut out = Ranks::new();
        for (i, &(a, m)) in self.gens.iter().enumerate() {
            if a > j {
                continue;
            }
            let cancelled = if i % 2 == 1 { true } else { i > 0 && self.gens[i - 1].0 <= j };
            if !cancelled {
                *out.entry(m).or_default() += 1;
            }
        }
        out
    }

    pub fn homology(&self) -> Ranks {
        self.filt(i64::MAX)
    }

    pub fn hfk(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for &g in &self.gens {
            *out.entry(g).or_default() += 1;
        }
        out
    }

    pub fn hfk_at(&self, a: i64) -> Ranks {
        let mut out = Ranks::new();
        for &(x, m) in &self.gens {
            if x == a {
                *out.entry(m).or_default() += 1;
            }
        }
        out
    }

    /// Least `j` whose sublevel set carries the class of `x_0`.
    pub fn tau(&self) -> i64 {
        self.gens[0].0
    }
}

pub fn ranks(pairs: &[(i64, usize)]) -> Ranks {
    pairs.iter().copied().collect()
}

/// `|q| + 2 max(0, (2g-1)|p| - |q|)`, written out again.
pub fn lspace_rank(g: i64, p: i64, q: i64) -> i64 {
    let (p, q) = (p.abs(), q.abs());
    let excess = (2 * g - 1) * p - q;
    q + if excess > 0 { 2 * excess } else { 0 }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
