//! Antichains and strong antichains: detection, greedy maximal extension,
//! maximum strong antichains and the cone refinement used to localise large
//! strong antichains above a single member of a maximal one.

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Distinct members are pairwise incomparable.
pub fn is_antichain(p: &Poset, d: &ElemSet) -> bool {
    let v = d.to_vec();
    v.iter()
        .enumerate()
        .all(|(k, &x)| v[k + 1..].iter().all(|&y| p.incomparable(x, y)))
}

/// Distinct members are pairwise incompatible in the whole carrier.
pub fn is_strong_antichain(p: &Poset, s: &ElemSet) -> bool {
    let v = s.to_vec();
    v.iter()
        .enumerate()
        .all(|(k, &x)| v[k + 1..].iter().all(|&y| !p.compatible_in_carrier(x, y)))
}

/// Greedy scan by increasing index: `x` is accepted iff the seed, the
/// elements already accepted and `x` still form an antichain.
pub fn extend_maximal_antichain(p: &Poset, d: &ElemSet) -> Result<ElemSet> {
    p.check_subset(d)?;
    if !is_antichain(p, d) {
        return Err(Error::Precondition("seed is not an antichain".into()));
    }
    let mut e = d.clone();
    for x in 0..p.len() {
        if !e.contains(x) && e.iter().all(|y| p.incomparable(x, y)) {
            e.insert(x);
        }
    }
    Ok(e)
}

/// Same scan with incompatibility in place of incomparability.
pub fn extend_maximal_strong_antichain(p: &Poset, s: &ElemSet) -> Result<ElemSet> {
    p.check_subset(s)?;
    if !is_strong_antichain(p, s) {
        return Err(Error::Precondition("seed is not a strong antichain".into()));
    }
    let mut t = s.clone();
    for x in 0..p.len() {
        if !t.contains(x) && t.iter().all(|y| !p.compatible_in_carrier(x, y)) {
            t.insert(x);
        }
    }
    Ok(t)
}

pub fn is_maximal_antichain(p: &Poset, d: &ElemSet) -> bool {
    is_antichain(p, d)
        && (0..p.len()).all(|x| d.contains(x) || d.iter().any(|y| p.comparable(x, y)))
}

pub fn is_maximal_strong_antichain(p: &Poset, s: &ElemSet) -> bool {
    is_strong_antichain(p, s)
        && (0..p.len()).all(|x| s.contains(x) || s.iter().any(|y| p.compatible_in_carrier(x, y)))
}

/// Maximum size of a strong antichain, with a witness.
///
/// On a finite poset the maximal elements form a strong antichain of
/// maximum size: two distinct maximal elements have no common upper bound,
/// and sending each member of a strong antichain to a maximal element above
/// it is injective. The witness is therefore the set of maximal elements,
/// which is also ⊆-maximal.
pub fn max_strong_antichain(p: &Poset) -> (usize, ElemSet) {
    let w = p.maximal_elements();
    (w.len(), w)
}

/// Exact maximum strong antichain by branch and bound over the
/// incompatibility graph, independent of the maximal-element shortcut.
/// Returns the lexicographically least witness of maximum size.
pub fn max_strong_antichain_exact(p: &Poset) -> (usize, ElemSet) {
    let n = p.len();
    let incompatible: Vec<ElemSet> = (0..n)
        .map(|x| ElemSet::from_indices(n, (0..n).filter(|&y| !p.compatible_in_carrier(x, y))))
        .collect();
    let mut best = ElemSet::new(n);
    let mut current = ElemSet::new(n);
    search_clique(&incompatible, &mut current, p.carrier(), &mut best);
    (best.len(), best)
}

fn search_clique(adj: &[ElemSet], current: &mut ElemSet, cands: ElemSet, best: &mut ElemSet) {
    if current.len() + cands.len() < best.len() {
        return;
    }
    if cands.is_empty() {
        if current.len() > best.len() || (current.len() == best.len() && *current < *best) {
            *best = current.clone();
        }
        return;
    }
    let mut cands = cands;
    while let Some(v) = cands.first() {
        if current.len() + cands.len() < best.len() {
            return;
        }
        cands.remove(v);
        current.insert(v);
        search_clique(adj, current, cands.intersection(&adj[v]), best);
        current.remove(v);
    }
    if current.len() > best.len() || (current.len() == best.len() && *current < *best) {
        *best = current.clone();
    }
}

/// Result of [`refine_cone`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRefinement {
    pub u: usize,
    pub v: ElemSet,
    /// The pair `(u(y), v(y))` chosen for every `y` in the input antichain.
    pub pairs: Vec<(usize, usize, usize)>,
}

/// Given a ⊆-maximal strong antichain `s` and a strong antichain `t` of size
/// `|s|·k`, find `u ∈ s` whose upper cone holds at least `k` pairwise
/// incompatible elements.
///
/// Each `y ∈ t` is sent to the least pair `(u(y), v(y))` (ordered by index)
/// with `u(y) ∈ s` and `u(y), y ⪯ v(y)`; the least `u` hit at least `k`
/// times wins and `V` collects its `v(y)`.
pub fn refine_cone(p: &Poset, s: &ElemSet, t: &ElemSet) -> Result<ConeRefinement> {
    p.check_subset(s)?;
    p.check_subset(t)?;
    if !is_maximal_strong_antichain(p, s) {
        return Err(Error::Precondition(
            "S is not a maximal strong antichain".into(),
        ));
    }
    if !is_strong_antichain(p, t) {
        return Err(Error::Precondition("T is not a strong antichain".into()));
    }
    if s.is_empty() || t.is_empty() || !t.len().is_multiple_of(s.len()) {
        return Err(Error::Precondition(format!(
            "|T| = {} is not a positive multiple of |S| = {}",
            t.len(),
            s.len()
        )));
    }
    let k = t.len() / s.len();
    let mut pairs = Vec::with_capacity(t.len());
    for y in t.iter() {
        let pair = s.iter().find_map(|u| {
            p.up(u)
                .intersection(p.up(y))
                .first()
                .map(|v| (u, v))
        });
        match pair {
            Some((u, v)) => pairs.push((y, u, v)),
            None => {
                return Err(Error::Inconsistency(format!(
                    "element {} is compatible with no member of a maximal strong antichain",
                    p.id(y)
                )))
            }
        }
    }
    let u = s
        .iter()
        .find(|&u| pairs.iter().filter(|&&(_, pu, _)| pu == u).count() >= k)
        .ok_or_else(|| Error::Inconsistency("pigeonhole failed".into()))?;
    let v = ElemSet::from_indices(
        p.len(),
        pairs.iter().filter(|&&(_, pu, _)| pu == u).map(|&(_, _, v)| v),
    );
    if v.len() < k || !is_strong_antichain(p, &v) || !v.is_subset(p.up(u)) {
        return Err(Error::Inconsistency(
            "refined set is not a strong antichain of size k above u".into(),
        ));
    }
    Ok(ConeRefinement { u, v, pairs })
}
