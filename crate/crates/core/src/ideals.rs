//! Ideals, the decomposition of a finite poset into finitely many ideals
//! indexed by a maximum strong antichain, essential subfamilies and minimum
//! ideal covers.
//!
//! On a finite poset every nonempty ideal `A` is a principal down-cone: two
//! members of `A` have an upper bound in `A`, so by induction the whole of
//! `A` has one, `m`, and then `A = down(m)` because `A` is initial. Minimum
//! ideal covers therefore only need to consider the sets `down(x)`.

use crate::antichains::max_strong_antichain;
use crate::cover::min_cover;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// A target set written as a union of ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCover {
    pub target: ElemSet,
    pub parts: Vec<ElemSet>,
    /// The strong antichain the parts are indexed by, when the cover came
    /// from a decomposition. Empty for covers assembled by hand.
    pub witness: ElemSet,
}

impl IdealCover {
    pub fn union(&self) -> ElemSet {
        self.parts
            .iter()
            .fold(ElemSet::new(self.target.capacity()), |acc, a| acc.union(a))
    }

    /// Every part is an ideal of the target and the parts cover it exactly.
    pub fn is_valid(&self, p: &Poset) -> bool {
        let sub = p.restrict_with_map(&self.target);
        self.union() == self.target
            && self.parts.iter().all(|a| {
                a.is_subset(&self.target) && is_ideal(&sub.0, &pull_back(a, &sub.1))
            })
    }

    /// No part is contained in the union of the others.
    pub fn is_essential(&self) -> bool {
        is_essential(&self.parts)
    }
}

fn pull_back(set: &ElemSet, map: &[usize]) -> ElemSet {
    ElemSet::from_indices(
        map.len(),
        map.iter()
            .enumerate()
            .filter(|&(_, &i)| set.contains(i))
            .map(|(k, _)| k),
    )
}

/// An initial interval whose members are pairwise compatible inside it.
pub fn is_ideal(p: &Poset, a: &ElemSet) -> bool {
    if !p.is_initial_interval(a) {
        return false;
    }
    let v = a.to_vec();
    v.iter().enumerate().all(|(k, &x)| {
        v[k + 1..]
            .iter()
            .all(|&y| p.up(x).intersection(p.up(y)).intersects(a))
    })
}

/// `A_z`: the elements compatible with `z` in the whole carrier.
pub fn compatibility_class(p: &Poset, z: usize) -> Result<ElemSet> {
    p.check_element(z)?;
    Ok(ElemSet::from_indices(
        p.len(),
        (0..p.len()).filter(|&x| p.compatible_in_carrier(x, z)),
    ))
}

/// Cover the carrier by the classes `A_z`, `z` ranging over a maximum strong
/// antichain. Each class is an ideal and every element lands in one.
pub fn et_decompose(p: &Poset) -> Result<IdealCover> {
    let (_, s) = max_strong_antichain(p);
    let mut parts = Vec::with_capacity(s.len());
    for z in s.iter() {
        let a = compatibility_class(p, z)?;
        if !is_ideal(p, &a) {
            return Err(Error::Inconsistency(format!(
                "class of {} is not an ideal",
                p.id(z)
            )));
        }
        parts.push(a);
    }
    let cover = IdealCover {
        target: p.carrier(),
        parts,
        witness: s,
    };
    if cover.union() != cover.target {
        return Err(Error::Inconsistency(
            "compatibility classes do not cover the poset".into(),
        ));
    }
    Ok(cover)
}

/// Indices of a minimum subfamily with the same union, least index set
/// among the minimum ones.
pub fn essential_reduce_indices(family: &[ElemSet]) -> Vec<usize> {
    let target = family
        .iter()
        .fold(ElemSet::default(), |acc, a| acc.union(a));
    min_cover(&target, family).expect("a family covers its own union")
}

pub fn essential_reduce(family: &[ElemSet]) -> Vec<ElemSet> {
    essential_reduce_indices(family)
        .into_iter()
        .map(|i| family[i].clone())
        .collect()
}

/// The decomposition with its parts cut down to a minimum essential
/// subfamily; the witness keeps the matching members.
pub fn essential_cover(p: &Poset) -> Result<IdealCover> {
    let c = et_decompose(p)?;
    let keep = essential_reduce_indices(&c.parts);
    let w = c.witness.to_vec();
    Ok(IdealCover {
        target: c.target,
        witness: ElemSet::from_indices(p.len(), keep.iter().map(|&k| w[k])),
        parts: keep.iter().map(|&k| c.parts[k].clone()).collect(),
    })
}

/// Every member owns a point outside the union of the others.
pub fn is_essential(family: &[ElemSet]) -> bool {
    (0..family.len()).all(|i| {
        let others = family
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(ElemSet::default(), |acc, (_, a)| acc.union(a));
        !family[i].is_subset(&others)
    })
}

/// Least number of ideals of `restrict(p, target)` whose union is `target`,
/// by exhaustive search over principal down-cones.
pub fn min_ideal_cover(p: &Poset, target: &ElemSet) -> Result<usize> {
    p.check_subset(target)?;
    if !p.is_initial_interval(target) {
        return Err(Error::Precondition("target is not an initial interval".into()));
    }
    let cones: Vec<ElemSet> = target.iter().map(|x| p.down(x).clone()).collect();
    let chosen = min_cover(target, &cones)
        .ok_or_else(|| Error::Inconsistency("principal cones miss the target".into()))?;
    Ok(chosen.len())
}

/// Decompose an initial interval into ideals of the induced suborder.
pub fn decompose_interval(p: &Poset, i: &ElemSet) -> Result<IdealCover> {
    p.check_subset(i)?;
    if !p.is_initial_interval(i) {
        return Err(Error::Precondition("set is not an initial interval".into()));
    }
    let (sub, map) = p.restrict_with_map(i);
    let inner = et_decompose(&sub)?;
    let lift = |s: &ElemSet| ElemSet::from_indices(p.len(), s.iter().map(|k| map[k]));
    Ok(IdealCover {
        target: i.clone(),
        parts: inner.parts.iter().map(lift).collect(),
        witness: lift(&inner.witness),
    })
}
