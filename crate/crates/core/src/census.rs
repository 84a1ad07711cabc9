//! Posets up to isomorphism, random posets, and the cross-module identity
//! checks run over them.
//!
//! A poset on `n ≤ 11` points is encoded by the bits `i ⪯ j` for `i < j`,
//! column by column, after renumbering its points along a linear extension.
//! The canonical code is the least such encoding over all linear
//! extensions; isomorphic posets have the same set of encodings.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::antichains::{max_strong_antichain, max_strong_antichain_exact};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ideals::{et_decompose, min_ideal_cover};
use crate::interval_tree::{factorization_check, for_each_interval};
use crate::poset::{warshall, Poset};
use crate::separation::restriction_identity_check;

pub const MAX_CODE_N: usize = 11;

struct Canon<'a> {
    p: &'a Poset,
    total: u32,
    order: Vec<usize>,
    placed: ElemSet,
    best: Option<u64>,
}

impl Canon<'_> {
    fn walk(&mut self, code: u64, bits: u32) {
        if let Some(b) = self.best {
            let shift = self.total - bits;
            if code > b.checked_shr(shift).unwrap_or(0) {
                return;
            }
        }
        let n = self.p.len();
        if self.order.len() == n {
            self.best = Some(self.best.map_or(code, |b| b.min(code)));
            return;
        }
        for x in 0..n {
            if self.placed.contains(x) || !self.p.strict_down(x).is_subset(&self.placed) {
                continue;
            }
            let mut c = code;
            for &y in &self.order {
                c = (c << 1) | u64::from(self.p.leq(y, x));
            }
            let k = self.order.len() as u32;
            self.order.push(x);
            self.placed.insert(x);
            self.walk(c, bits + k);
            self.placed.remove(x);
            self.order.pop();
        }
    }
}

/// Least encoding over all linear extensions.
pub fn canonical_code(p: &Poset) -> Result<u64> {
    let n = p.len();
    if n > MAX_CODE_N {
        return Err(Error::Precondition(format!(
            "canonical codes need at most {MAX_CODE_N} points, got {n}"
        )));
    }
    let mut c = Canon {
        p,
        total: (n * n.saturating_sub(1) / 2) as u32,
        order: Vec::with_capacity(n),
        placed: ElemSet::new(n),
        best: None,
    };
    c.walk(0, 0);
    Ok(c.best.unwrap_or(0))
}

/// Poset on ids `0..n` with the given encoding.
pub fn poset_from_code(n: usize, code: u64) -> Result<Poset> {
    let total = n * n.saturating_sub(1) / 2;
    let mut rel = vec![vec![false; n]; n];
    let mut pos = 0;
    for j in 0..n {
        rel[j][j] = true;
        for i in 0..j {
            rel[i][j] = (code >> (total - 1 - pos)) & 1 == 1;
            pos += 1;
        }
    }
    Poset::validate(&rel, (0..n as u64).collect())
}

/// Canonical codes of all posets on `n` points for `n = 0..=max_n`.
///
/// Every poset on `n + 1` points is one on `n` points plus a new maximal
/// element whose strict down-cone is an initial interval of the old one.
pub fn generate(max_n: usize) -> Result<Vec<Vec<u64>>> {
    if max_n > MAX_CODE_N {
        return Err(Error::Precondition(format!("census size is limited to {MAX_CODE_N}")));
    }
    let mut levels = vec![vec![0u64]];
    for n in 1..=max_n {
        let prev = &levels[n - 1];
        let next: BTreeSet<u64> = prev
            .par_iter()
            .map(|&code| -> Result<Vec<u64>> {
                let p = poset_from_code(n - 1, code)?;
                let mut downs = Vec::new();
                for_each_interval(&p, |d| downs.push(d.clone()));
                downs
                    .iter()
                    .map(|d| canonical_code(&extend_by_top(&p, d)?))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

fn extend_by_top(p: &Poset, below: &ElemSet) -> Result<Poset> {
    let n = p.len();
    let mut rel = p.relation_matrix();
    for (i, row) in rel.iter_mut().enumerate() {
        row.push(below.contains(i));
    }
    let mut last = vec![false; n + 1];
    last[n] = true;
    rel.push(last);
    Poset::validate(&rel, (0..=n as u64).collect())
}

/// Random poset on ids `0..n`: each pair `i < j` is a generator with
/// probability `density`, then closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        rel[i][i] = true;
        for j in i + 1..n {
            rel[i][j] = rng.gen_bool(density);
        }
    }
    warshall(&mut rel);
    Poset::validate(&rel, (0..n as u64).collect()).expect("closure of a DAG is a partial order")
}

/// Failed identities for one poset, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    pub decomposition: usize,
    pub factorization: usize,
    pub restriction: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.decomposition + self.factorization + self.restriction
    }

    fn add(&mut self, o: &Violations) {
        self.decomposition += o.decomposition;
        self.factorization += o.factorization;
        self.restriction += o.restriction;
    }
}

/// Number of parts, maximum strong antichain size (closed form and by
/// search), number of maximal elements and minimum ideal cover all agree.
pub fn decomposition_identity(p: &Poset) -> Result<bool> {
    let parts = et_decompose(p)?.parts.len();
    let (ell, _) = max_strong_antichain(p);
    let (exact, _) = max_strong_antichain_exact(p);
    let maximal = p.maximal_elements().len();
    let cover = min_ideal_cover(p, &p.carrier())?;
    Ok([ell, exact, maximal, cover].iter().all(|&v| v == parts))
}

/// `restrict` checks every subset, so keep it to small posets.
pub fn check_identities(p: &Poset, restrict: bool) -> Result<Violations> {
    let mut v = Violations::default();
    if !decomposition_identity(p)? {
        v.decomposition += 1;
    }
    for x in 0..p.len() {
        if !factorization_check(p, x)? {
            v.factorization += 1;
        }
    }
    if restrict {
        for mask in 0..1u64 << p.len() {
            let q = ElemSet::from_mask(p.len(), mask);
            if !restriction_identity_check(p, &q)? {
                v.restriction += 1;
            }
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub classes: usize,
    pub violations: Violations,
}

/// Run [`check_identities`] over every poset with at most `max_n` points,
/// one row per size.
pub fn census(max_n: usize) -> Result<Vec<CensusRow>> {
    let levels = generate(max_n)?;
    levels
        .iter()
        .enumerate()
        .map(|(n, codes)| {
            let per: Vec<Violations> = codes
                .par_iter()
                .map(|&c| check_identities(&poset_from_code(n, c)?, n <= 6))
                .collect::<Result<_>>()?;
            let mut violations = Violations::default();
            for v in &per {
                violations.add(v);
            }
            Ok(CensusRow {
                n,
                classes: codes.len(),
                violations,
            })
        })
        .collect()
}

/// Same checks on `k` random posets with sizes drawn from `sizes`.
pub fn random_census<R: Rng>(
    rng: &mut R,
    k: usize,
    sizes: std::ops::RangeInclusive<usize>,
) -> Result<Violations> {
    let posets: Vec<Poset> = (0..k)
        .map(|_| {
            let n = rng.gen_range(sizes.clone());
            let density = rng.gen_range(0.05..0.6);
            random_poset(rng, n, density)
        })
        .collect();
    let per: Vec<Violations> = posets
        .par_iter()
        .map(|p| check_identities(p, false))
        .collect::<Result<_>>()?;
    let mut total = Violations::default();
    for v in &per {
        total.add(v);
    }
    Ok(total)
}
