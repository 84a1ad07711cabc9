//! Finite slices of the reversal constructions: posets that encode the
//! range of an injective function (or its false stages), with decoders that
//! read the encoded set back from an antichain, ideal cover or interval.
//!
//! Every builder takes a horizon `N` and indexes its elements by `n < N`.
//! A function table is only known on its prefix; each builder documents how
//! it treats arguments past the end. Relations are written down rule by rule
//! without closing them and must pass [`Poset::validate`]; a failure there is
//! an [`Error::Inconsistency`].

pub mod kb;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::antichains::{is_antichain, is_maximal_antichain, is_maximal_strong_antichain, max_strong_antichain};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ideals::IdealCover;
use crate::poset::Poset;

/// Finite prefix `f(0), …, f(len − 1)` of an injective function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FnTable {
    values: Vec<u64>,
}

impl FnTable {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, &v) in values.iter().enumerate() {
            if !seen.insert(v) {
                return Err(Error::Precondition(format!(
                    "function is not injective: value {v} repeats at argument {i}"
                )));
            }
        }
        Ok(FnTable { values })
    }

    pub fn empty() -> Self {
        FnTable::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied()
    }

    /// Argument mapped to `v`, if any.
    pub fn preimage(&self, v: u64) -> Option<usize> {
        self.values.iter().position(|&x| x == v)
    }

    /// `{f(i) : i < bound} ∩ [0, below)`.
    pub fn range_within(&self, bound: usize, below: u64) -> BTreeSet<u64> {
        self.values
            .iter()
            .take(bound)
            .copied()
            .filter(|&v| v < below)
            .collect()
    }
}

fn check_disjoint(f: &FnTable, g: &FnTable) -> Result<()> {
    match f.values.iter().find(|v| g.values.contains(v)) {
        Some(v) => Err(Error::Precondition(format!(
            "value {v} lies in the range of both functions"
        ))),
        None => Ok(()),
    }
}

/// Verdict of [`classify_stages`] for a single argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Some later value undercuts this one; final.
    False,
    /// No later value seen so far undercuts it; may still turn false.
    TrueSoFar,
}

/// `n` is false iff `f(k) < f(n)` for some known `k > n`.
pub fn classify_stages(f: &FnTable) -> Vec<Stage> {
    (0..f.len())
        .map(|n| {
            if f.values[n + 1..].iter().any(|&v| v < f.values[n]) {
                Stage::False
            } else {
                Stage::TrueSoFar
            }
        })
        .collect()
}

/// `∃k, n < k ≤ m, f(k) < f(n)`: at stage `m` the argument `n` is known to
/// be false.
pub fn false_by(f: &FnTable, n: usize, m: usize) -> bool {
    match f.get(n) {
        Some(fnv) => (n + 1..=m).any(|k| f.get(k).is_some_and(|v| v < fnv)),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    TwoChain,
    TrueFalse,
    OmegaOmegaStar,
    RangeStrong,
    Sep,
    AntichainExt,
    Wkl,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::TwoChain,
        Family::TrueFalse,
        Family::OmegaOmegaStar,
        Family::RangeStrong,
        Family::Sep,
        Family::AntichainExt,
        Family::Wkl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TwoChain => "two-chain",
            Family::TrueFalse => "truefalse",
            Family::OmegaOmegaStar => "omega-omegastar",
            Family::RangeStrong => "range-strong",
            Family::Sep => "sep",
            Family::AntichainExt => "antichain-ext",
            Family::Wkl => "wkl",
        }
    }

    /// Whether the family is built from a pair `f, g`.
    pub fn needs_g(self) -> bool {
        matches!(self, Family::Sep | Family::Wkl)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown gadget family {s:?}")))
    }
}

/// A gadget poset; element roles are its labels (`"a3"`, `"c"`, `"a3^1"`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    pub family: Family,
    pub poset: Poset,
    pub horizon: usize,
}

impl GadgetInstance {
    pub fn role(&self, label: &str) -> Result<usize> {
        self.poset
            .index_of_label(label)
            .ok_or_else(|| Error::Schema(format!("no element labelled {label:?}")))
    }

    pub fn roles(&self) -> BTreeMap<String, u64> {
        (0..self.poset.len())
            .filter_map(|i| self.poset.label(i).map(|l| (l.to_string(), self.poset.id(i))))
            .collect()
    }

    /// Reattach a family to a poset read back from its labels; the horizon
    /// is the number of `b_n` present.
    pub fn from_poset(family: Family, poset: Poset) -> Result<Self> {
        let horizon = (0..)
            .take_while(|n| poset.index_of_label(&format!("b{n}")).is_some())
            .count();
        if horizon == 0 && !poset.is_empty() {
            return Err(Error::Schema(format!("no b0 label in a {family} gadget")));
        }
        Ok(GadgetInstance {
            family,
            poset,
            horizon,
        })
    }

    fn family_set(&self, prefix: &str) -> ElemSet {
        ElemSet::from_indices(
            self.poset.len(),
            (0..self.horizon).filter_map(|n| self.poset.index_of_label(&format!("{prefix}{n}"))),
        )
    }

    /// `{a_n : n < N}`.
    pub fn a_set(&self) -> ElemSet {
        self.family_set("a")
    }

    /// `{b_n : n < N}`.
    pub fn b_set(&self) -> ElemSet {
        self.family_set("b")
    }

    fn expect(&self, family: Family) -> Result<()> {
        if self.family != family {
            return Err(Error::Precondition(format!(
                "expected a {family} gadget, got {}",
                self.family
            )));
        }
        Ok(())
    }
}

/// Collects labelled elements and generating pairs, then validates.
struct Builder {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    pairs: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            labels: Vec::new(),
            index: BTreeMap::new(),
            pairs: Vec::new(),
        }
    }

    fn add(&mut self, label: String) -> usize {
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        i
    }

    fn at(&self, label: &str) -> usize {
        self.index[label]
    }

    fn leq(&mut self, lo: usize, hi: usize) {
        self.pairs.push((lo, hi));
    }

    fn finish(self, family: Family, horizon: usize) -> Result<GadgetInstance> {
        let n = self.labels.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in self.pairs {
            rel[lo][hi] = true;
        }
        let labels = self.labels.into_iter().map(Some).collect();
        let poset = Poset::validate_labeled(&rel, (0..n as u64).collect(), labels).map_err(|e| {
            Error::Inconsistency(format!("{family} gadget is not a partial order: {e}"))
        })?;
        Ok(GadgetInstance {
            family,
            poset,
            horizon,
        })
    }
}

fn idx(v: u64) -> Option<usize> {
    usize::try_from(v).ok()
}

/// `{a_n, b_n, c_n : n < N}` with `a_n, b_n ⪯ c_m` iff `f(m) = n`.
pub fn g_range_strong(f: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    let mut b = Builder::new();
    for n in 0..horizon {
        for r in ["a", "b", "c"] {
            b.add(format!("{r}{n}"));
        }
    }
    for m in 0..horizon.min(f.len()) {
        if let Some(n) = f.get(m).and_then(idx).filter(|&n| n < horizon) {
            let c = b.at(&format!("c{m}"));
            for r in ["a", "b"] {
                let x = b.at(&format!("{r}{n}"));
                b.leq(x, c);
            }
        }
    }
    b.finish(Family::RangeStrong, horizon)
}

/// `{n : a_n ∉ S ∨ b_n ∉ S}` for a maximal strong antichain `S`.
pub fn decode_range_strong(inst: &GadgetInstance, s: &ElemSet) -> Result<BTreeSet<u64>> {
    inst.expect(Family::RangeStrong)?;
    inst.poset.check_subset(s)?;
    if !is_maximal_strong_antichain(&inst.poset, s) {
        return Err(Error::Precondition("S is not a maximal strong antichain".into()));
    }
    let mut out = BTreeSet::new();
    for n in 0..inst.horizon {
        let a = inst.role(&format!("a{n}"))?;
        let b = inst.role(&format!("b{n}"))?;
        if !s.contains(a) || !s.contains(b) {
            out.insert(n as u64);
        }
    }
    Ok(out)
}

/// `{a_n, b_n, c_n : n < N}` with `c_n ⪯ a_m` iff `f(m) = n` and
/// `b_m ⪯ c_n` iff `g(m) = n`.
pub fn g_sep(f: &FnTable, g: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    check_disjoint(f, g)?;
    let mut b = Builder::new();
    for n in 0..horizon {
        for r in ["a", "b", "c"] {
            b.add(format!("{r}{n}"));
        }
    }
    for m in 0..horizon {
        if let Some(n) = f.get(m).and_then(idx).filter(|&n| n < horizon) {
            let (c, a) = (b.at(&format!("c{n}")), b.at(&format!("a{m}")));
            b.leq(c, a);
        }
        if let Some(n) = g.get(m).and_then(idx).filter(|&n| n < horizon) {
            let (bm, c) = (b.at(&format!("b{m}")), b.at(&format!("c{n}")));
            b.leq(bm, c);
        }
    }
    b.finish(Family::Sep, horizon)
}

/// `{n : c_n ∈ I}` for an initial interval holding every `a_n` and no `b_n`.
pub fn decode_sep(inst: &GadgetInstance, i: &ElemSet) -> Result<BTreeSet<u64>> {
    inst.expect(Family::Sep)?;
    let p = &inst.poset;
    p.check_subset(i)?;
    if !p.is_initial_interval(i) {
        return Err(Error::Precondition("I is not an initial interval".into()));
    }
    if !inst.a_set().is_subset(i) || inst.b_set().intersects(i) {
        return Err(Error::Precondition("I must contain every a_n and no b_n".into()));
    }
    let mut out = BTreeSet::new();
    for n in 0..inst.horizon {
        if i.contains(inst.role(&format!("c{n}"))?) {
            out.insert(n as u64);
        }
    }
    Ok(out)
}

/// `{a_n, b_n : n < N} ∪ {c}` with `a_n ⪯ c`, `b_n ⪯ b_m` for `n ≤ m`, and
/// `a_n ⪯ b_m` iff `f(i) = n` for some `i < m`.
///
/// The decoded set is `{f(i) : i < min(len f, N − 1)} ∩ [0, N)`: a value
/// entering at argument `i` only shows up below `b_m` for `m > i`.
pub fn g_two_chain(f: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    let mut b = Builder::new();
    for n in 0..horizon {
        b.add(format!("a{n}"));
        b.add(format!("b{n}"));
    }
    let c = b.add("c".to_string());
    for n in 0..horizon {
        let an = b.at(&format!("a{n}"));
        b.leq(an, c);
        for m in n..horizon {
            let (bn, bm) = (b.at(&format!("b{n}")), b.at(&format!("b{m}")));
            b.leq(bn, bm);
        }
    }
    for m in 0..horizon {
        let bm = b.at(&format!("b{m}"));
        for i in 0..m.min(f.len()) {
            if let Some(n) = f.get(i).and_then(idx).filter(|&n| n < horizon) {
                let an = b.at(&format!("a{n}"));
                b.leq(an, bm);
            }
        }
    }
    let inst = b.finish(Family::TwoChain, horizon)?;
    let (l, _) = max_strong_antichain(&inst.poset);
    if l > 2 {
        return Err(Error::Inconsistency(format!(
            "two-chain gadget has a strong antichain of size {l}"
        )));
    }
    Ok(inst)
}

/// Checks shared by the decoders that read an essential ideal cover: the
/// cover is valid for the whole carrier and essential, and some part
/// holds every `b_n`. Returns that part.
fn part_with_all_b<'a>(inst: &GadgetInstance, cover: &'a IdealCover) -> Result<&'a ElemSet> {
    let p = &inst.poset;
    if cover.target != p.carrier() || !cover.is_valid(p) {
        return Err(Error::Precondition("not an ideal cover of the gadget".into()));
    }
    if !cover.is_essential() {
        return Err(Error::Precondition("ideal cover is not essential".into()));
    }
    let bs = inst.b_set();
    cover
        .parts
        .iter()
        .find(|a| bs.is_subset(a))
        .ok_or_else(|| Error::Precondition("no part contains every b_n".into()))
}

fn a_members(inst: &GadgetInstance, part: &ElemSet) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for n in 0..inst.horizon {
        if part.contains(inst.role(&format!("a{n}"))?) {
            out.insert(n as u64);
        }
    }
    Ok(out)
}

/// `{n : a_n ∈ A}` where `A` is the part of an essential ideal cover that
/// holds every `b_n`.
pub fn decode_two_chain(inst: &GadgetInstance, cover: &IdealCover) -> Result<BTreeSet<u64>> {
    inst.expect(Family::TwoChain)?;
    let part = part_with_all_b(inst, cover)?;
    a_members(inst, part)
}

fn require_defined(f: &FnTable, horizon: usize) -> Result<()> {
    if f.len() < horizon {
        return Err(Error::Precondition(format!(
            "f is known on {} arguments but the horizon is {horizon}",
            f.len()
        )));
    }
    Ok(())
}

/// `{a_n, b_n : n < N}` (or `{a_n^i : i ≤ n} ∪ {b_n}` with `copies`) with
/// `b_n ⪯ b_m` for `n < m` and `a_n ⪯ b_m` iff `n` is false by stage `m`.
/// Needs `f` on every argument below the horizon.
pub fn g_truefalse(f: &FnTable, horizon: usize, copies: bool) -> Result<GadgetInstance> {
    require_defined(f, horizon)?;
    let mut b = Builder::new();
    let mut a_labels: Vec<Vec<String>> = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let labels: Vec<String> = if copies {
            (0..=n).map(|i| format!("a{n}^{i}")).collect()
        } else {
            vec![format!("a{n}")]
        };
        for l in &labels {
            b.add(l.clone());
        }
        a_labels.push(labels);
        b.add(format!("b{n}"));
    }
    for m in 0..horizon {
        let bm = b.at(&format!("b{m}"));
        for n in 0..m {
            let bn = b.at(&format!("b{n}"));
            b.leq(bn, bm);
            if false_by(f, n, m) {
                for l in &a_labels[n] {
                    let a = b.at(l);
                    b.leq(a, bm);
                }
            }
        }
    }
    b.finish(Family::TrueFalse, horizon)
}

/// `{n : a_n ⪯ b_{N−1}}` (first copy `a_n^0` in the copies variant): the
/// arguments false by the last stage of the slice.
pub fn decode_truefalse(inst: &GadgetInstance) -> Result<BTreeSet<u64>> {
    inst.expect(Family::TrueFalse)?;
    let Some(last) = inst.horizon.checked_sub(1) else {
        return Ok(BTreeSet::new());
    };
    let top = inst.role(&format!("b{last}"))?;
    let mut out = BTreeSet::new();
    for n in 0..inst.horizon {
        let a = match inst.poset.index_of_label(&format!("a{n}")) {
            Some(a) => a,
            None => inst.role(&format!("a{n}^0"))?,
        };
        if inst.poset.leq(a, top) {
            out.insert(n as u64);
        }
    }
    Ok(out)
}

/// For the copies variant: `{a_n^i : i ≤ n}` for the largest `n` that is
/// still true at the horizon, a strong antichain of size `n + 1`.
pub fn truefalse_large_antichain(inst: &GadgetInstance, f: &FnTable) -> Result<ElemSet> {
    inst.expect(Family::TrueFalse)?;
    let n = (0..inst.horizon)
        .rev()
        .find(|&n| !false_by(f, n, inst.horizon - 1))
        .ok_or_else(|| Error::Precondition("no true stage below the horizon".into()))?;
    let mut s = inst.poset.empty_set();
    for i in 0..=n {
        let label = format!("a{n}^{i}");
        s.insert(inst.role(&label).map_err(|_| {
            Error::Precondition("gadget was built without copies".into())
        })?);
    }
    Ok(s)
}

/// `{a_n, b_n : n < N}`. For `n ≤ m`: `a_n ⪯ a_m` and `a_n ⪯ b_m` when `n`
/// is false by stage `m`, `a_m ⪯ a_n` otherwise; the `b_n` form a chain.
/// Needs `f` on every argument below the horizon.
pub fn g_omega_omegastar(f: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    require_defined(f, horizon)?;
    let mut b = Builder::new();
    for n in 0..horizon {
        b.add(format!("a{n}"));
        b.add(format!("b{n}"));
    }
    for n in 0..horizon {
        let an = b.at(&format!("a{n}"));
        for m in n..horizon {
            let (am, bn, bm) = (b.at(&format!("a{m}")), b.at(&format!("b{n}")), b.at(&format!("b{m}")));
            b.leq(bn, bm);
            if false_by(f, n, m) {
                b.leq(an, am);
                b.leq(an, bm);
            } else {
                b.leq(am, an);
            }
        }
    }
    b.finish(Family::OmegaOmegaStar, horizon)
}

/// `{n : a_n ∈ A}` where `A` is the part of an essential ideal cover holding
/// every `b_n`; equals the arguments false by stage `N − 1`.
pub fn decode_wpo(inst: &GadgetInstance, cover: &IdealCover) -> Result<BTreeSet<u64>> {
    inst.expect(Family::OmegaOmegaStar)?;
    let part = part_with_all_b(inst, cover)?;
    a_members(inst, part)
}

/// Width of an ω + ω* slice. The `a_n` and the `b_n` are two chains, so the
/// width is at most 2; it is 2 exactly when some `a_n` is incomparable to
/// some `b_m`.
pub fn omega_width(inst: &GadgetInstance) -> Result<usize> {
    inst.expect(Family::OmegaOmegaStar)?;
    let p = &inst.poset;
    if p.is_empty() {
        return Ok(0);
    }
    let (a, b) = (inst.a_set(), inst.b_set());
    if !p.is_chain(&a) || !p.is_chain(&b) {
        return Err(Error::Inconsistency("ω + ω* slice is not two chains".into()));
    }
    let split = a.iter().any(|x| b.iter().any(|y| p.incomparable(x, y)));
    Ok(if split { 2 } else { 1 })
}

/// `{a_n, b_n : n < N}` with `b_m ⪯ a_n` iff `f(m) = n`.
pub fn g_antichain_ext(f: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    let mut b = Builder::new();
    for n in 0..horizon {
        b.add(format!("a{n}"));
        b.add(format!("b{n}"));
    }
    for m in 0..horizon.min(f.len()) {
        if let Some(n) = f.get(m).and_then(idx).filter(|&n| n < horizon) {
            let (bm, an) = (b.at(&format!("b{m}")), b.at(&format!("a{n}")));
            b.leq(bm, an);
        }
    }
    b.finish(Family::AntichainExt, horizon)
}

/// `{n : a_n ∉ E}` for a maximal antichain `E ⊇ {b_m}`.
pub fn decode_ext(inst: &GadgetInstance, e: &ElemSet) -> Result<BTreeSet<u64>> {
    inst.expect(Family::AntichainExt)?;
    let p = &inst.poset;
    p.check_subset(e)?;
    if !is_maximal_antichain(p, e) || !inst.b_set().is_subset(e) {
        return Err(Error::Precondition(
            "E is not a maximal antichain containing every b_m".into(),
        ));
    }
    let mut out = BTreeSet::new();
    for n in 0..inst.horizon {
        if !e.contains(inst.role(&format!("a{n}"))?) {
            out.insert(n as u64);
        }
    }
    Ok(out)
}

/// `{a_n, b_k : n, k < N}` with
/// (i) `a_n ⪯ b_m` iff `m = g(n)`;
/// (ii) `b_k ⪯ a_n` iff `f(i) = k` for some `i < n` with `i < g(n)`;
/// (iii) `b_k ⪯ b_m` iff `f(i) = k` for some `i < m` with `f(j) ≠ m` for
/// all `j < i`.
/// An argument past the end of `g` counts as `g(n) = ∞`.
pub fn g_wkl(f: &FnTable, g: &FnTable, horizon: usize) -> Result<GadgetInstance> {
    check_disjoint(f, g)?;
    let mut b = Builder::new();
    for n in 0..horizon {
        b.add(format!("a{n}"));
        b.add(format!("b{n}"));
    }
    let ginf = |n: usize| g.get(n).unwrap_or(u64::MAX);
    for n in 0..horizon {
        let an = b.at(&format!("a{n}"));
        if let Some(m) = g.get(n).and_then(idx).filter(|&m| m < horizon) {
            let bm = b.at(&format!("b{m}"));
            b.leq(an, bm);
        }
        for i in 0..n.min(f.len()) {
            if (i as u64) < ginf(n) {
                if let Some(k) = f.get(i).and_then(idx).filter(|&k| k < horizon) {
                    let bk = b.at(&format!("b{k}"));
                    b.leq(bk, an);
                }
            }
        }
    }
    for m in 0..horizon {
        let bm = b.at(&format!("b{m}"));
        let entered = f.preimage(m as u64).unwrap_or(usize::MAX);
        for i in 0..m.min(f.len()).min(entered) {
            if let Some(k) = f.get(i).and_then(idx).filter(|&k| k < horizon) {
                let bk = b.at(&format!("b{k}"));
                b.leq(bk, bm);
            }
        }
    }
    b.finish(Family::Wkl, horizon)
}

/// Result of [`decode_wkl`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WklDecoding {
    pub set: BTreeSet<u64>,
    /// Least `n₀` with `a_n ∈ I` for every `n₀ ≤ n < N`.
    pub n0: usize,
}

/// `{k : b_k ∈ I}` for an initial interval containing every `a_n` from some
/// `n₀ < N` on and nothing strictly above any `a_n`.
pub fn decode_wkl(inst: &GadgetInstance, i: &ElemSet) -> Result<WklDecoding> {
    inst.expect(Family::Wkl)?;
    let p = &inst.poset;
    p.check_subset(i)?;
    if !p.is_initial_interval(i) {
        return Err(Error::Precondition("I is not an initial interval".into()));
    }
    let a = inst.a_set();
    if a.iter().any(|x| i.iter().any(|y| p.lt(x, y))) {
        return Err(Error::Precondition("I contains an element above some a_n".into()));
    }
    let mut n0 = inst.horizon;
    while n0 > 0 && i.contains(inst.role(&format!("a{}", n0 - 1))?) {
        n0 -= 1;
    }
    if n0 >= inst.horizon {
        return Err(Error::Precondition(
            "I does not contain a final segment of the a_n".into(),
        ));
    }
    let mut set = BTreeSet::new();
    for k in 0..inst.horizon {
        if i.contains(inst.role(&format!("b{k}"))?) {
            set.insert(k as u64);
        }
    }
    Ok(WklDecoding { set, n0 })
}

/// Library pipeline for each family: build, run the matching algorithm,
/// decode. `two-chain` and `omega-omegastar` go through the decomposition
/// and essential reduction, `range-strong` and `antichain-ext` through the
/// greedy extensions, `sep` and `wkl` through the separators.
pub fn run_pipeline(
    family: Family,
    f: &FnTable,
    g: &FnTable,
    horizon: usize,
) -> Result<(GadgetInstance, BTreeSet<u64>)> {
    use crate::antichains::{extend_maximal_antichain, extend_maximal_strong_antichain};
    use crate::ideals::essential_cover;
    use crate::separation::{antichain_separator, separate_down};

    let essential = |inst: &GadgetInstance| essential_cover(&inst.poset);
    match family {
        Family::RangeStrong => {
            let inst = g_range_strong(f, horizon)?;
            let s = extend_maximal_strong_antichain(&inst.poset, &inst.poset.empty_set())?;
            let d = decode_range_strong(&inst, &s)?;
            Ok((inst, d))
        }
        Family::Sep => {
            let inst = g_sep(f, g, horizon)?;
            let i = separate_down(&inst.poset, &inst.a_set(), &inst.b_set())?;
            let d = decode_sep(&inst, &i)?;
            Ok((inst, d))
        }
        Family::TwoChain => {
            let inst = g_two_chain(f, horizon)?;
            let d = decode_two_chain(&inst, &essential(&inst)?)?;
            Ok((inst, d))
        }
        Family::TrueFalse => {
            let inst = g_truefalse(f, horizon, false)?;
            let d = decode_truefalse(&inst)?;
            Ok((inst, d))
        }
        Family::OmegaOmegaStar => {
            let inst = g_omega_omegastar(f, horizon)?;
            let d = decode_wpo(&inst, &essential(&inst)?)?;
            Ok((inst, d))
        }
        Family::AntichainExt => {
            let inst = g_antichain_ext(f, horizon)?;
            let e = extend_maximal_antichain(&inst.poset, &inst.b_set())?;
            let d = decode_ext(&inst, &e)?;
            Ok((inst, d))
        }
        Family::Wkl => {
            let inst = g_wkl(f, g, horizon)?;
            let a = inst.a_set();
            let i = if a.len() >= 2 {
                antichain_separator(&inst.poset, &a)?.0
            } else {
                separate_down(&inst.poset, &a, &inst.poset.up_closure(&a).difference(&a))?
            };
            let d = decode_wkl(&inst, &i)?.set;
            Ok((inst, d))
        }
    }
}

/// Check that the antichain `{a_n}` of a gadget really is one.
pub fn a_is_antichain(inst: &GadgetInstance) -> bool {
    is_antichain(&inst.poset, &inst.a_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antichains::{extend_maximal_antichain, extend_maximal_strong_antichain};
    use crate::ideals::{essential_reduce, et_decompose};
    use crate::separation::separate_down;

    fn ft(v: &[u64]) -> FnTable {
        FnTable::new(v.to_vec()).unwrap()
    }

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn fn_table_rejects_repeats() {
        assert!(FnTable::new(vec![1, 2, 1]).is_err());
        assert!(g_sep(&ft(&[1]), &ft(&[1]), 3).is_err());
    }

    #[test]
    fn classify_examples() {
        use Stage::*;
        assert_eq!(classify_stages(&ft(&[1, 2, 3])), vec![TrueSoFar; 3]);
        assert_eq!(classify_stages(&ft(&[3, 2, 1])), vec![False, False, TrueSoFar]);
        assert_eq!(
            classify_stages(&ft(&[3, 1, 4, 0, 5])),
            vec![False, False, False, TrueSoFar, TrueSoFar]
        );
    }

    #[test]
    fn range_strong_examples() {
        let inst = g_range_strong(&FnTable::empty(), 3).unwrap();
        let s = extend_maximal_strong_antichain(&inst.poset, &inst.poset.empty_set()).unwrap();
        assert_eq!(s, inst.poset.carrier());
        assert!(decode_range_strong(&inst, &s).unwrap().is_empty());

        let (_, d) = run_pipeline(Family::RangeStrong, &ft(&[2]), &FnTable::empty(), 3).unwrap();
        assert_eq!(d, set(&[2]));
        let (_, d) = run_pipeline(Family::RangeStrong, &ft(&[0, 1]), &FnTable::empty(), 2).unwrap();
        assert_eq!(d, set(&[0, 1]));
    }

    #[test]
    fn sep_examples() {
        let (f, g) = (ft(&[0]), ft(&[1]));
        let (_, d) = run_pipeline(Family::Sep, &f, &g, 2).unwrap();
        assert!(d.contains(&0) && !d.contains(&1));
        let (_, d) = run_pipeline(Family::Sep, &g, &f, 2).unwrap();
        assert!(d.contains(&1) && !d.contains(&0));
        let inst = g_sep(&f, &g, 2).unwrap();
        assert!(decode_sep(&inst, &inst.poset.empty_set()).is_err());
    }

    #[test]
    fn two_chain_examples() {
        let (inst, d) = run_pipeline(Family::TwoChain, &FnTable::empty(), &FnTable::empty(), 4).unwrap();
        assert!(d.is_empty());
        assert_eq!(inst.poset.len(), 9);

        let inst = g_two_chain(&ft(&[5]), 8).unwrap();
        let a5 = inst.role("a5").unwrap();
        assert!(!inst.poset.leq(a5, inst.role("b0").unwrap()));
        assert!(inst.poset.leq(a5, inst.role("b1").unwrap()));
        let cover = et_decompose(&inst.poset).unwrap();
        let parts = essential_reduce(&cover.parts);
        let cover = IdealCover { parts, ..cover };
        assert_eq!(decode_two_chain(&inst, &cover).unwrap(), set(&[5]));
    }

    #[test]
    fn two_chain_rejects_inessential_cover() {
        let inst = g_two_chain(&ft(&[1]), 3).unwrap();
        let mut cover = et_decompose(&inst.poset).unwrap();
        cover.parts.push(cover.parts[0].clone());
        assert!(decode_two_chain(&inst, &cover).is_err());
    }

    #[test]
    fn truefalse_examples() {
        let inst = g_truefalse(&ft(&[0, 1, 2, 3]), 4, true).unwrap();
        let p = &inst.poset;
        for x in inst.poset.labels().iter().flatten().filter(|l| l.starts_with('a')) {
            let a = inst.role(x).unwrap();
            assert_eq!(p.up(a).len(), 1);
        }
        let s = truefalse_large_antichain(&inst, &ft(&[0, 1, 2, 3])).unwrap();
        assert_eq!(s.len(), 4);
        assert!(crate::antichains::is_strong_antichain(p, &s));

        let inst = g_truefalse(&ft(&[1, 0]), 2, false).unwrap();
        assert!(inst.poset.leq(inst.role("a0").unwrap(), inst.role("b1").unwrap()));
        assert!(g_truefalse(&ft(&[1]), 2, false).is_err());

        // 3 > 1 and 4 > 0: arguments 0, 1, 2 are false by stage 4
        let f = ft(&[3, 1, 4, 0, 5]);
        assert_eq!(decode_truefalse(&g_truefalse(&f, 5, false).unwrap()).unwrap(), set(&[0, 1, 2]));
        assert_eq!(decode_truefalse(&g_truefalse(&f, 5, true).unwrap()).unwrap(), set(&[0, 1, 2]));
        assert_eq!(decode_truefalse(&g_truefalse(&f, 3, false).unwrap()).unwrap(), set(&[0]));
    }

    #[test]
    fn omega_examples() {
        let inst = g_omega_omegastar(&ft(&[0, 1, 2, 3]), 4).unwrap();
        let p = &inst.poset;
        let a = |n: usize| inst.role(&format!("a{n}")).unwrap();
        // all true: later a's sit below earlier ones
        assert!(p.leq(a(3), a(0)));
        assert!(inst.a_set().iter().all(|x| p.up(x).intersection(&inst.b_set()).is_empty()));

        let (inst, d) = run_pipeline(Family::OmegaOmegaStar, &ft(&[3, 1, 4, 0, 5]), &FnTable::empty(), 5).unwrap();
        assert_eq!(d, set(&[0, 1, 2]));
        assert_eq!(omega_width(&inst).unwrap(), 2);
    }

    #[test]
    fn antichain_ext_examples() {
        let inst = g_antichain_ext(&FnTable::empty(), 3).unwrap();
        let e = extend_maximal_antichain(&inst.poset, &inst.b_set()).unwrap();
        assert_eq!(e, inst.poset.carrier());
        assert!(decode_ext(&inst, &e).unwrap().is_empty());
        let (_, d) = run_pipeline(Family::AntichainExt, &ft(&[4]), &FnTable::empty(), 5).unwrap();
        assert_eq!(d, set(&[4]));
    }

    #[test]
    fn wkl_examples() {
        let inst = g_wkl(&FnTable::empty(), &FnTable::empty(), 4).unwrap();
        assert_eq!(inst.poset.covers(), vec![]);

        let g = ft(&[1, 2, 3, 4, 5]);
        let f = ft(&[0]);
        let inst = g_wkl(&f, &g, 5).unwrap();
        let b0 = inst.role("b0").unwrap();
        for n in 1..5 {
            assert!(inst.poset.leq(b0, inst.role(&format!("a{n}")).unwrap()));
        }
        let i = separate_down(&inst.poset, &inst.a_set(), &inst.poset.empty_set()).unwrap();
        let dec = decode_wkl(&inst, &i).unwrap();
        assert!(dec.set.contains(&0));
        assert_eq!(dec.n0, 0);
        let (_, d) = run_pipeline(Family::Wkl, &f, &g, 5).unwrap();
        assert_eq!(d, set(&[0]));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
