//! Kleene–Brouwer order on finite sequences and the decomposition of a
//! finite tree along a designated path.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};

pub type Node = Vec<u64>;

/// `σ <_KB τ` iff `σ` properly extends `τ`, or `σ(i) < τ(i)` at the first
/// index where they differ.
pub fn kb_compare(sigma: &[u64], tau: &[u64]) -> Ordering {
    match sigma.iter().zip(tau).find(|(a, b)| a != b) {
        Some((a, b)) => a.cmp(b),
        None => tau.len().cmp(&sigma.len()),
    }
}

fn kb_lt(s: &[u64], t: &[u64]) -> bool {
    kb_compare(s, t) == Ordering::Less
}

/// `T` split along `path`: `T = X ⊔ Y₀ ⊔ … ⊔ Y_{d−1} ⊔ {path} ⊔ beyond`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KbDecomposition {
    pub x: BTreeSet<Node>,
    pub ys: Vec<BTreeSet<Node>>,
    /// Proper extensions of `path`, which lie KB-below every prefix of it.
    pub beyond: BTreeSet<Node>,
}

/// Split the finite tree `t` along `path` (of length `d`):
/// `X = {σ : σ <_KB path↾n for all n ≤ d}` minus the proper extensions of
/// `path`, and `Yₙ = {σ : path↾(n+1) <_KB σ ≤_KB path↾n}`.
///
/// Each `Yₙ` is recomputed as `{σ : path↾n ⊏ σ, path(n) < σ(n)} ∪
/// {path↾n}` and the partition of `t` is checked.
pub fn kb_decompose(t: &BTreeSet<Node>, path: &[u64]) -> Result<KbDecomposition> {
    if let Some(s) = t.iter().find(|s| !s.is_empty() && !t.contains(&s[..s.len() - 1])) {
        return Err(Error::Precondition(format!("{s:?} has no parent in the tree")));
    }
    for n in 0..=path.len() {
        if !t.contains(&path[..n]) {
            return Err(Error::Precondition(format!(
                "path prefix {:?} is not in the tree",
                &path[..n]
            )));
        }
    }
    let d = path.len();
    let beyond: BTreeSet<Node> = t
        .iter()
        .filter(|s| s.len() > d && s.starts_with(path))
        .cloned()
        .collect();
    let x: BTreeSet<Node> = t
        .iter()
        .filter(|s| !beyond.contains(*s) && (0..=d).all(|n| kb_lt(s, &path[..n])))
        .cloned()
        .collect();
    let ys: Vec<BTreeSet<Node>> = (0..d)
        .map(|n| {
            t.iter()
                .filter(|s| kb_lt(&path[..n + 1], s) && kb_compare(s, &path[..n]) != Ordering::Greater)
                .cloned()
                .collect()
        })
        .collect();
    for (n, y) in ys.iter().enumerate() {
        let closed: BTreeSet<Node> = t
            .iter()
            .filter(|s| {
                s.as_slice() == &path[..n]
                    || (s.len() > n && s.starts_with(&path[..n]) && path[n] < s[n])
            })
            .cloned()
            .collect();
        if &closed != y {
            return Err(Error::Inconsistency(format!(
                "closed form of Y{n} differs from its definition"
            )));
        }
    }
    let mut seen = BTreeSet::new();
    let mut total = 0;
    for part in std::iter::once(&x).chain(&ys).chain(std::iter::once(&beyond)) {
        total += part.len();
        seen.extend(part.iter().cloned());
    }
    seen.insert(path.to_vec());
    total += 1;
    if seen != *t || total != t.len() {
        return Err(Error::Inconsistency("pieces do not partition the tree".into()));
    }
    Ok(KbDecomposition { x, ys, beyond })
}

/// Random finite tree of the given depth and branching bound, together
/// with a path through it of random length.
pub fn random_tree<R: Rng>(rng: &mut R, max_depth: usize, max_branch: u64) -> (BTreeSet<Node>, Node) {
    let mut t = BTreeSet::new();
    let mut frontier = vec![Vec::new()];
    t.insert(Vec::new());
    while let Some(s) = frontier.pop() {
        if s.len() >= max_depth {
            continue;
        }
        let k = rng.gen_range(0..=max_branch);
        for c in 0..k {
            let mut child = s.clone();
            child.push(c);
            t.insert(child.clone());
            frontier.push(child);
        }
    }
    let mut path = Vec::new();
    loop {
        let children: Vec<u64> = (0..max_branch)
            .filter(|&c| {
                let mut ch = path.clone();
                ch.push(c);
                t.contains(&ch)
            })
            .collect();
        if children.is_empty() || rng.gen_bool(0.2) {
            break;
        }
        path.push(children[rng.gen_range(0..children.len())]);
    }
    (t, path)
}
