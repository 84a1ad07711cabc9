//! Separating sets by initial intervals.
//!
//! The semi-decidable hypotheses of the infinite setting are modelled by
//! stage revelation: a member of `A` or `B` with id `< k` counts as revealed
//! by stage `k`, the finite stand-in for "some witness below `|σ|` exists".

use std::collections::BTreeSet;

use crate::antichains::{is_antichain, is_maximal_antichain};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ideals::min_ideal_cover;
use crate::interval_tree::{enumerate_intervals, intervals_of_subset, ApproxSeq};
use crate::poset::Poset;

fn check_separable(p: &Poset, a: &ElemSet, b: &ElemSet) -> Result<()> {
    p.check_subset(a)?;
    p.check_subset(b)?;
    for x in a.iter() {
        if let Some(y) = b.iter().find(|&y| p.leq(y, x)) {
            return Err(Error::Precondition(format!(
                "{} ⪯ {} with the first in B and the second in A",
                p.id(y),
                p.id(x)
            )));
        }
    }
    Ok(())
}

/// `Down(A)`, an initial interval containing `A` and missing `B`, provided
/// no member of `B` lies below a member of `A`.
pub fn separate_down(p: &Poset, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
    check_separable(p, a, b)?;
    Ok(p.down_closure(a))
}

/// The length-`k` approximation `σ(x) = 1 ⟺ x ∈ P ∧ ∃y ∈ A (id(y) < k ∧
/// x ⪯ y)`, checked to lie in `T(P)` and to respect every revealed member
/// of `A` and `B`.
pub fn separation_tree(p: &Poset, a: &ElemSet, b: &ElemSet, k: u64) -> Result<ApproxSeq> {
    check_separable(p, a, b)?;
    let revealed = |s: &ElemSet| {
        ElemSet::from_indices(p.len(), s.iter().filter(|&y| p.id(y) < k))
    };
    let (ra, rb) = (revealed(a), revealed(b));
    let sigma = ApproxSeq::characteristic(p, &p.down_closure(&ra), k);
    let ok = crate::interval_tree::tp_member(p, &sigma)
        && ra.iter().all(|x| sigma.get(p.id(x)) == Some(true))
        && rb.iter().all(|y| sigma.get(p.id(y)) == Some(false));
    if !ok {
        return Err(Error::Inconsistency(format!(
            "stage-{k} approximation {sigma:?} is not a separating member of T(P)"
        )));
    }
    Ok(sigma)
}

/// `{x : ∃d ∈ D, x ⪯ d}` for a maximal antichain `D`, computed both
/// directly and as `{x : ¬∃d ∈ D, d ≺ x}`.
pub fn maximal_antichain_interval(p: &Poset, d: &ElemSet) -> Result<ElemSet> {
    p.check_subset(d)?;
    if !is_maximal_antichain(p, d) {
        return Err(Error::Precondition("D is not a maximal antichain".into()));
    }
    let below = p.down_closure(d);
    let not_above = ElemSet::from_indices(
        p.len(),
        (0..p.len()).filter(|&x| !d.iter().any(|y| p.lt(y, x))),
    );
    if below != not_above {
        return Err(Error::Inconsistency(
            "the two descriptions of the interval below D differ".into(),
        ));
    }
    let pairwise_incompatible = d.iter().all(|x| {
        d.iter()
            .all(|y| x == y || !p.up(x).intersection(p.up(y)).intersects(&below))
    });
    if !p.is_initial_interval(&below) || !pairwise_incompatible {
        return Err(Error::Inconsistency(
            "interval below D does not separate its members".into(),
        ));
    }
    Ok(below)
}

/// Initial interval containing the antichain `D` with nothing strictly
/// above a member of `D`, and the least number of ideals covering it.
pub fn antichain_separator(p: &Poset, d: &ElemSet) -> Result<(ElemSet, usize)> {
    p.check_subset(d)?;
    if !is_antichain(p, d) {
        return Err(Error::Precondition("D is not an antichain".into()));
    }
    if d.len() < 2 {
        return Err(Error::Precondition("D needs at least two elements".into()));
    }
    let above = ElemSet::from_indices(
        p.len(),
        (0..p.len()).filter(|&x| d.iter().any(|y| p.lt(y, x))),
    );
    let i = p.down_closure(d).difference(&above);
    if !p.is_initial_interval(&i) || !d.is_subset(&i) {
        return Err(Error::Inconsistency("separator is not an initial interval".into()));
    }
    let certificate = min_ideal_cover(p, &i)?;
    if certificate < d.len() {
        return Err(Error::Inconsistency(format!(
            "{} ideals cover an interval holding {} incompatible elements",
            certificate,
            d.len()
        )));
    }
    Ok((i, certificate))
}

/// `Int(Q) = {J ∩ Q : J ∈ Int(P)}`, by enumerating both sides.
pub fn restriction_identity_check(p: &Poset, q: &ElemSet) -> Result<bool> {
    p.check_subset(q)?;
    let inner: BTreeSet<ElemSet> = intervals_of_subset(p, q)?.into_iter().collect();
    let traces: BTreeSet<ElemSet> = enumerate_intervals(p)?
        .iter()
        .map(|j| j.intersection(q))
        .collect();
    Ok(inner == traces)
}
