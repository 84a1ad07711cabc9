//! The tree `T(P)` of finite approximations of initial intervals.
//!
//! An [`ApproxSeq`] is a finite 0/1 sequence indexed by element *ids*, not
//! by internal index; positions that are not ids of the carrier must hold 0.
//! Because ids increase with the internal index, the carrier elements decided
//! by a sequence of length `l` are exactly the indices whose id is `< l`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Default cap on the number of sets [`enumerate_intervals`] will return.
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApproxSeq {
    bits: Vec<bool>,
}

impl ApproxSeq {
    pub fn new() -> Self {
        ApproxSeq::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        ApproxSeq { bits }
    }

    /// Parse a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Schema(format!("bad bit {c:?} in approximation"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ApproxSeq::from_bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Value at a position; `None` past the end.
    pub fn get(&self, pos: u64) -> Option<bool> {
        usize::try_from(pos).ok().and_then(|p| self.bits.get(p).copied())
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn prefix(&self, len: usize) -> ApproxSeq {
        ApproxSeq::from_bits(self.bits[..len.min(self.len())].to_vec())
    }

    /// `self ⊑ other`.
    pub fn is_prefix_of(&self, other: &ApproxSeq) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Neither extends the other.
    pub fn incompatible(&self, other: &ApproxSeq) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// Characteristic sequence of `set` up to (excluding) position `len`.
    pub fn characteristic(p: &Poset, set: &ElemSet, len: u64) -> ApproxSeq {
        let mut bits = vec![false; len as usize];
        for i in set.iter() {
            if p.id(i) < len {
                bits[p.id(i) as usize] = true;
            }
        }
        ApproxSeq { bits }
    }

    /// Carrier elements marked 1.
    pub fn ones(&self, p: &Poset) -> ElemSet {
        ElemSet::from_indices(p.len(), decided(p, self).filter(|&i| self.bits[p.id(i) as usize]))
    }

    /// The initial interval generated by the 1-positions; its characteristic
    /// function extends `self` whenever `self ∈ T(P)`.
    pub fn canonical_interval(&self, p: &Poset) -> ElemSet {
        p.down_closure(&self.ones(p))
    }
}

impl fmt::Display for ApproxSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ApproxSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

/// Carrier indices whose position is decided by `sigma`.
fn decided<'a>(p: &'a Poset, sigma: &ApproxSeq) -> impl Iterator<Item = usize> + 'a {
    let len = sigma.len() as u64;
    (0..p.len()).take_while(move |&i| p.id(i) < len)
}

/// Whether `sigma` belongs to `T(P)`.
pub fn tp_member(p: &Poset, sigma: &ApproxSeq) -> bool {
    let mut carrier_ones = 0;
    for i in decided(p, sigma) {
        if sigma.bits[p.id(i) as usize] {
            carrier_ones += 1;
            if decided(p, sigma).any(|x| p.leq(x, i) && !sigma.bits[p.id(x) as usize]) {
                return false;
            }
        }
    }
    carrier_ones == sigma.bits.iter().filter(|&&b| b).count()
}

/// Depth-first walk of `T(P)` down to length `id_bound`, 0-branch first,
/// calling `visit` on every initial interval in lexicographic bit order.
pub fn for_each_interval<F: FnMut(&ElemSet)>(p: &Poset, mut visit: F) {
    let mut current = p.empty_set();
    walk(p, 0, &mut current, &mut visit);
}

fn walk<F: FnMut(&ElemSet)>(p: &Poset, x: usize, current: &mut ElemSet, visit: &mut F) {
    if x == p.len() {
        visit(current);
        return;
    }
    // Elements before x are decided; later ones are still free.
    let can_take = p.down(x).iter().filter(|&z| z < x).all(|z| current.contains(z));
    let can_skip = !p.up(x).iter().any(|y| y < x && current.contains(y));
    if can_skip {
        walk(p, x + 1, current, visit);
    }
    if can_take {
        current.insert(x);
        walk(p, x + 1, current, visit);
        current.remove(x);
    }
}

/// All initial intervals, refusing to materialise more than `cap` of them.
pub fn enumerate_intervals_capped(p: &Poset, cap: usize) -> Result<Vec<ElemSet>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_interval(p, |s| {
        if out.len() < cap {
            out.push(s.clone());
        } else {
            over = true;
        }
    });
    if over {
        return Err(Error::Capped { cap });
    }
    Ok(out)
}

pub fn enumerate_intervals(p: &Poset) -> Result<Vec<ElemSet>> {
    enumerate_intervals_capped(p, DEFAULT_ENUM_CAP)
}

/// Number of initial intervals.
///
/// Splits on a minimal element `x` of the remaining set `R`: intervals
/// avoiding `x` avoid its whole upper cone, and intervals containing `x` are
/// the intervals of `R ∖ {x}` with `x` added. Subproblems are memoised.
pub fn count_intervals(p: &Poset) -> Result<u128> {
    let mut memo = HashMap::new();
    count_rec(p, p.carrier(), &mut memo)
}

fn count_rec(p: &Poset, rest: ElemSet, memo: &mut HashMap<ElemSet, u128>) -> Result<u128> {
    let Some(x) = rest.iter().find(|&x| p.down(x).intersection(&rest).len() == 1) else {
        return Ok(1);
    };
    if let Some(&c) = memo.get(&rest) {
        return Ok(c);
    }
    let without = count_rec(p, rest.difference(p.up(x)), memo)?;
    let mut smaller = rest.clone();
    smaller.remove(x);
    let with = count_rec(p, smaller, memo)?;
    let total = without.checked_add(with).ok_or(Error::Overflow)?;
    memo.insert(rest, total);
    Ok(total)
}

/// `x` can still go either way below some extension of `tau`.
pub fn free_for(p: &Poset, tau: &ApproxSeq, x: usize) -> Result<bool> {
    p.check_element(x)?;
    if !tp_member(p, tau) {
        return Err(Error::Precondition(format!("{tau:?} is not in T(P)")));
    }
    Ok(is_free(p, tau, x))
}

fn is_free(p: &Poset, tau: &ApproxSeq, x: usize) -> bool {
    decided(p, tau).all(|y| {
        if tau.bits[p.id(y) as usize] {
            !p.leq(x, y)
        } else {
            !p.leq(y, x)
        }
    })
}

/// Output of [`split`]: two incompatible extensions and, for each, a pair
/// of chain elements that remain free for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub tau0: ApproxSeq,
    pub tau1: ApproxSeq,
    pub free0: (usize, usize),
    pub free1: (usize, usize),
}

/// Value of an extension of `tau` at carrier element `x`: forced by `tau`
/// when `x` is not free, otherwise by `free_rule`.
fn extend_with(
    p: &Poset,
    tau: &ApproxSeq,
    len: u64,
    free_rule: impl Fn(usize) -> bool,
) -> ApproxSeq {
    let mut bits = vec![false; len as usize];
    for x in (0..p.len()).take_while(|&x| p.id(x) < len) {
        let forced_out = decided(p, tau).any(|y| !tau.bits[p.id(y) as usize] && p.leq(y, x));
        let forced_in = decided(p, tau).any(|y| tau.bits[p.id(y) as usize] && p.leq(x, y));
        bits[p.id(x) as usize] = if forced_out {
            false
        } else if forced_in {
            true
        } else {
            free_rule(x)
        };
    }
    ApproxSeq { bits }
}

/// Least pair `(a', b')` of chain elements with `lo ≺ a' ≺ b' ≺ hi`, both
/// decided only after `pivot`, and no carrier element decided before
/// `pivot` strictly between them.
fn witness_pair(
    p: &Poset,
    q: &ElemSet,
    lo: usize,
    hi: usize,
    pivot: usize,
) -> Result<(usize, usize)> {
    let candidates: Vec<usize> = q
        .iter()
        .filter(|&y| y > pivot && p.lt(lo, y) && p.lt(y, hi))
        .collect();
    for &a2 in &candidates {
        for &b2 in &candidates {
            if p.lt(a2, b2) && !(0..pivot).any(|x| p.lt(a2, x) && p.lt(x, b2)) {
                return Ok((a2, b2));
            }
        }
    }
    Err(Error::NoAdmissiblePair {
        lo: p.id(lo),
        hi: p.id(hi),
    })
}

fn check_split_input(p: &Poset, tau: &ApproxSeq, xs: &[usize], q: &ElemSet) -> Result<()> {
    p.check_subset(q)?;
    if !tp_member(p, tau) {
        return Err(Error::Precondition(format!("{tau:?} is not in T(P)")));
    }
    if !p.is_chain(q) {
        return Err(Error::Precondition("Q is not a chain".into()));
    }
    for &x in xs {
        p.check_element(x)?;
        if !q.contains(x) {
            return Err(Error::OutsideSubset(p.id(x)));
        }
        if !is_free(p, tau, x) {
            return Err(Error::Precondition(format!("{} is not free", p.name(x))));
        }
    }
    Ok(())
}

/// Split `tau` at `b` into `τ₀, τ₁ ∈ T(P)` of length `id(b) + 1` with
/// `τᵢ(b) = i`, leaving a fresh free pair inside `Q` for each branch.
///
/// `τ₀` takes its pair `a ≺ a' ≺ b' ≺ b` and `τ₁` takes `b ≺ a' ≺ b' ≺ c`;
/// in each branch an element that is free for `tau` is put in iff it lies
/// strictly below `b'`. On a chain this is the same as "strictly below
/// `a'`", and in general it keeps `b'` free when some free element below
/// `b'` is incomparable to `a'`.
pub fn split(
    p: &Poset,
    tau: &ApproxSeq,
    a: usize,
    b: usize,
    c: usize,
    q: &ElemSet,
) -> Result<Split> {
    check_split_input(p, tau, &[a, b, c], q)?;
    if !(p.lt(a, b) && p.lt(b, c)) {
        return Err(Error::Precondition("need a ≺ b ≺ c".into()));
    }
    let len = p.id(b) + 1;
    if len < tau.len() as u64 {
        return Err(Error::Precondition(format!(
            "{} is already decided by {tau:?}",
            p.name(b)
        )));
    }
    let free0 = witness_pair(p, q, a, b, b)?;
    let free1 = witness_pair(p, q, b, c, b)?;
    let tau0 = extend_with(p, tau, len, |x| p.lt(x, free0.1));
    let tau1 = extend_with(p, tau, len, |x| p.lt(x, free1.1));
    let out = Split {
        tau0,
        tau1,
        free0,
        free1,
    };
    check_branches(p, tau, b, &[(&out.tau0, Some(out.free0)), (&out.tau1, Some(out.free1))])?;
    Ok(out)
}

/// Last-level split that needs no free pair afterwards: free elements go
/// in iff they lie strictly below `b` (branch 0) or weakly below it
/// (branch 1).
pub fn split_leaf(p: &Poset, tau: &ApproxSeq, b: usize) -> Result<(ApproxSeq, ApproxSeq)> {
    p.check_element(b)?;
    check_split_input(p, tau, &[], &p.empty_set())?;
    if !is_free(p, tau, b) {
        return Err(Error::Precondition(format!("{} is not free", p.name(b))));
    }
    let len = p.id(b) + 1;
    let tau0 = extend_with(p, tau, len, |x| p.lt(x, b));
    let tau1 = extend_with(p, tau, len, |x| p.leq(x, b));
    check_branches(p, tau, b, &[(&tau0, None), (&tau1, None)])?;
    Ok((tau0, tau1))
}

fn check_branches(
    p: &Poset,
    tau: &ApproxSeq,
    b: usize,
    branches: &[(&ApproxSeq, Option<(usize, usize)>)],
) -> Result<()> {
    for (i, (t, pair)) in branches.iter().enumerate() {
        let ok = tp_member(p, t)
            && tau.is_prefix_of(t)
            && t.len() as u64 == p.id(b) + 1
            && t.get(p.id(b)) == Some(i == 1)
            && pair.is_none_or(|(x, y)| is_free(p, t, x) && is_free(p, t, y));
        if !ok {
            return Err(Error::Inconsistency(format!(
                "split branch {i} of {tau:?} at {} fails its postconditions",
                p.name(b)
            )));
        }
    }
    Ok(())
}

/// Split `depth` times along the chain `q`, starting from the root.
///
/// All levels but the last use [`split`] with `a`, `c` the least and
/// greatest free members of `q` and `b` the free member of least id
/// strictly between them for which a split exists. The last level uses
/// [`split_leaf`] at the free member of least id. Leaves are returned in
/// branch order (`0…0` first).
pub fn iterate_split(p: &Poset, q: &ElemSet, depth: usize) -> Result<Vec<ApproxSeq>> {
    p.check_subset(q)?;
    if !p.is_chain(q) {
        return Err(Error::Precondition("Q is not a chain".into()));
    }
    let mut level = vec![ApproxSeq::new()];
    for d in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for tau in &level {
            let mut free: Vec<usize> = q.iter().filter(|&x| is_free(p, tau, x)).collect();
            if d + 1 == depth {
                let b = *free.first().ok_or_else(|| {
                    Error::Precondition(format!("no free element for {tau:?}"))
                })?;
                let (t0, t1) = split_leaf(p, tau, b)?;
                next.push(t0);
                next.push(t1);
                continue;
            }
            free.sort_by(|&x, &y| chain_cmp(p, x, y));
            let (Some(&a), Some(&c)) = (free.first(), free.last()) else {
                return Err(Error::Precondition(format!("no free element for {tau:?}")));
            };
            let mut middle: Vec<usize> = free
                .iter()
                .copied()
                .filter(|&b| p.lt(a, b) && p.lt(b, c))
                .collect();
            middle.sort_unstable();
            let mut last_err = Error::NoAdmissiblePair {
                lo: p.id(a),
                hi: p.id(c),
            };
            let mut done = None;
            for b in middle {
                match split(p, tau, a, b, c, q) {
                    Ok(s) => {
                        done = Some(s);
                        break;
                    }
                    Err(e @ Error::NoAdmissiblePair { .. }) => last_err = e,
                    Err(e) => return Err(e),
                }
            }
            let s = done.ok_or(last_err)?;
            next.push(s.tau0);
            next.push(s.tau1);
        }
        level = next;
    }
    Ok(level)
}

fn chain_cmp(p: &Poset, x: usize, y: usize) -> Ordering {
    if x == y {
        Ordering::Equal
    } else if p.lt(x, y) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Chain of the `2^k` dyadic rationals `j / 2^k` in `[0, 1)`.
///
/// Ids follow generation order (`0, 1/2, 1/4, 3/4, 1/8, …`), so finer
/// dyadics get larger ids; labels are the reduced fractions.
pub fn dyadic_chain(k: u32) -> Poset {
    let n = 1usize << k;
    let mut nums = vec![0usize];
    for level in 1..=k {
        let step = n >> level;
        nums.extend((0..1usize << (level - 1)).map(|j| (2 * j + 1) * step));
    }
    let rel: Vec<Vec<bool>> = nums
        .iter()
        .map(|&x| nums.iter().map(|&y| x <= y).collect())
        .collect();
    let labels = nums
        .iter()
        .map(|&x| {
            if x == 0 {
                return Some("0".to_string());
            }
            let g = 1usize << (x.trailing_zeros().min(k));
            Some(format!("{}/{}", x / g, n / g))
        })
        .collect();
    Poset::validate_labeled(&rel, (0..n as u64).collect(), labels)
        .expect("a chain of naturals is a partial order")
}

/// `⋂_{x∈F} ↓°x ∩ ⋂_{x∈G} ↑°x ∩ ⋂_{x∈H} inc(x)`; empty index sets impose
/// nothing.
pub fn cone_restrict(p: &Poset, f: &ElemSet, g: &ElemSet, h: &ElemSet) -> Result<ElemSet> {
    for s in [f, g, h] {
        p.check_subset(s)?;
    }
    let mut out = p.carrier();
    for x in f.iter() {
        out.intersect_with(&p.strict_down(x));
    }
    for x in g.iter() {
        out.intersect_with(&p.strict_up(x));
    }
    for x in h.iter() {
        out.intersect_with(&p.incomparable_to(x));
    }
    Ok(out)
}

/// Both sides of the two factorization identities at `x`, as sets of sets:
/// `(avoiding x, built from ↓°x and inc x, containing x, built from ↑°x and
/// inc x)`.
pub struct FactorizationSides {
    pub without_x: BTreeSet<ElemSet>,
    pub without_x_built: BTreeSet<ElemSet>,
    pub with_x: BTreeSet<ElemSet>,
    pub with_x_built: BTreeSet<ElemSet>,
}

/// Intervals of the suborder on `set`, as subsets of `p`.
pub fn intervals_of_subset(p: &Poset, set: &ElemSet) -> Result<Vec<ElemSet>> {
    let (sub, map) = p.restrict_with_map(set);
    Ok(enumerate_intervals(&sub)?
        .into_iter()
        .map(|i| ElemSet::from_indices(p.len(), i.iter().map(|k| map[k])))
        .collect())
}

pub fn factorization_sides(p: &Poset, x: usize) -> Result<FactorizationSides> {
    p.check_element(x)?;
    let all = enumerate_intervals(p)?;
    let below = intervals_of_subset(p, &p.strict_down(x))?;
    let above = intervals_of_subset(p, &p.strict_up(x))?;
    let inc = intervals_of_subset(p, &p.incomparable_to(x))?;
    let mut sides = FactorizationSides {
        without_x: all.iter().filter(|i| !i.contains(x)).cloned().collect(),
        without_x_built: BTreeSet::new(),
        with_x: all.iter().filter(|i| i.contains(x)).cloned().collect(),
        with_x_built: BTreeSet::new(),
    };
    for j in &inc {
        let dj = p.down_closure(j);
        for i in &below {
            sides.without_x_built.insert(i.union(&dj));
        }
        for i in &above {
            let mut gen = i.union(j);
            gen.insert(x);
            sides.with_x_built.insert(p.down_closure(&gen));
        }
    }
    Ok(sides)
}

/// Both identities hold at `x`.
pub fn factorization_check(p: &Poset, x: usize) -> Result<bool> {
    let s = factorization_sides(p, x)?;
    Ok(s.without_x == s.without_x_built && s.with_x == s.with_x_built)
}
