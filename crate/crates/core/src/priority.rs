//! Simulator for the finite-injury construction of a computable poset
//! `{x_n, y_n}` whose `x_n` form an antichain while every computable initial
//! interval is generated by a finite set.
//!
//! The partial computable functions `Φ_e` are replaced by an [`Evaluator`]:
//! a monotone table answering `Φ_{e,s}(z)` with `Some(bit)` once it has
//! converged. Element ids are `x_n = 2n` and `y_n = 2n + 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::antichains::is_antichain;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;

pub fn x_id(n: usize) -> u64 {
    2 * n as u64
}

pub fn y_id(n: usize) -> u64 {
    2 * n as u64 + 1
}

/// Stage-`s` approximation of `Φ_e` on element `elem`.
pub trait Evaluator {
    fn eval(&self, e: usize, elem: u64, s: usize) -> Option<bool>;
}

impl<F: Fn(usize, u64, usize) -> Option<bool>> Evaluator for F {
    fn eval(&self, e: usize, elem: u64, s: usize) -> Option<bool> {
        self(e, elem, s)
    }
}

/// Convergence rule for a single requirement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Rule {
    /// Never converges.
    Never,
    /// Converges to `value` on every element from stage `from` on.
    Const { value: u8, from: usize },
    /// Converges to `value` on element `z` from stage `z + delay` on.
    Delayed { value: u8, delay: usize },
    /// Per-element convergence; elements not listed never converge.
    Table { entries: Vec<Entry> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub elem: u64,
    pub value: u8,
    pub from: usize,
}

/// Evaluator given by one [`Rule`] per requirement; requirements past the
/// end of the list never converge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolEvaluator {
    pub requirements: Vec<Rule>,
}

impl PoolEvaluator {
    pub fn from_json(text: &str) -> Result<Self> {
        let pool: PoolEvaluator = serde_json::from_str(text)?;
        for rule in &pool.requirements {
            let bad = match rule {
                Rule::Never => false,
                Rule::Const { value, .. } | Rule::Delayed { value, .. } => *value > 1,
                Rule::Table { entries } => entries.iter().any(|e| e.value > 1),
            };
            if bad {
                return Err(Error::Schema("evaluator values must be 0 or 1".into()));
            }
        }
        Ok(pool)
    }
}

impl Evaluator for PoolEvaluator {
    fn eval(&self, e: usize, elem: u64, s: usize) -> Option<bool> {
        match self.requirements.get(e)? {
            Rule::Never => None,
            Rule::Const { value, from } => (s >= *from).then_some(*value == 1),
            Rule::Delayed { value, delay } => {
                (s as u64 >= elem.saturating_add(*delay as u64)).then_some(*value == 1)
            }
            Rule::Table { entries } => entries
                .iter()
                .find(|en| en.elem == elem && s >= en.from)
                .map(|en| en.value == 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// `Φ(y_n) = 0`: later elements go above `y_n`.
    Low,
    /// `Φ(y_n) = 1`: later elements go below `y_n`.
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Activation {
    pub n: usize,
    pub stage: usize,
    pub polarity: Polarity,
    pub requirement: usize,
}

/// Witnesses `n_{e,s}` and flags `r(e,s)` for `e < horizon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageState {
    pub s: usize,
    pub n: Vec<usize>,
    pub r: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityLog {
    pub horizon: usize,
    pub activations: Vec<Activation>,
    pub stages: Vec<StageState>,
}

impl PriorityLog {
    pub fn final_stage(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn state(&self, s: usize) -> &StageState {
        &self.stages[s]
    }

    /// Transcript with one stage per line, for byte-exact golden files.
    pub fn to_transcript(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "\"horizon\": {},", self.horizon);
        let _ = writeln!(out, "\"final_stage\": {},", self.final_stage());
        let _ = writeln!(out, "\"activations\": [");
        for (k, a) in self.activations.iter().enumerate() {
            let sep = if k + 1 < self.activations.len() { "," } else { "" };
            let _ = writeln!(out, "{}{sep}", serde_json::to_string(a).expect("plain data"));
        }
        let _ = writeln!(out, "],");
        let _ = writeln!(out, "\"stages\": [");
        for (k, st) in self.stages.iter().enumerate() {
            let sep = if k + 1 < self.stages.len() { "," } else { "" };
            let _ = writeln!(out, "{}{sep}", serde_json::to_string(st).expect("plain data"));
        }
        let _ = writeln!(out, "]");
        let _ = writeln!(out, "}}");
        out
    }

    pub fn from_transcript(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            horizon: usize,
            final_stage: usize,
            activations: Vec<Activation>,
            stages: Vec<StageState>,
        }
        let d: Doc = serde_json::from_str(text)?;
        if d.stages.len() != d.final_stage + 1 {
            return Err(Error::Schema("final_stage disagrees with the stage list".into()));
        }
        Ok(PriorityLog {
            horizon: d.horizon,
            activations: d.activations,
            stages: d.stages,
        })
    }
}

/// Stage 0: `n_{e,0} = e`, `r(e,0) = 0`.
pub fn prio_init(horizon: usize) -> Result<PriorityLog> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    Ok(PriorityLog {
        horizon,
        activations: Vec::new(),
        stages: vec![StageState {
            s: 0,
            n: (0..horizon).collect(),
            r: vec![0; horizon],
        }],
    })
}

fn query<E: Evaluator + ?Sized>(ev: &E, e: usize, elem: u64, s: usize) -> Result<Option<bool>> {
    let now = ev.eval(e, elem, s);
    if s > 0 {
        if let Some(before) = ev.eval(e, elem, s - 1) {
            if now != Some(before) {
                return Err(Error::NonMonotoneEvaluator { e, elem, stage: s });
            }
        }
    }
    Ok(now)
}

/// Append stage `s + 1`.
pub fn prio_step<E: Evaluator + ?Sized>(log: &mut PriorityLog, ev: &E) -> Result<Option<Activation>> {
    let s = log.final_stage();
    let cur = log.stages[s].clone();
    let mut attention = None;
    for e in 0..log.horizon.min(s + 1) {
        let n = cur.n[e];
        if n <= s && cur.r[e] == 0 {
            if let Some(v) = query(ev, e, y_id(n), s)? {
                attention = Some((e, n, v));
                break;
            }
        }
    }
    let mut next = StageState {
        s: s + 1,
        n: cur.n,
        r: cur.r,
    };
    let act = attention.map(|(e, n, v)| {
        next.r[e] = 1;
        for i in e + 1..log.horizon {
            next.n[i] = s + i - e;
            next.r[i] = 0;
        }
        Activation {
            n,
            stage: s + 1,
            polarity: if v { Polarity::High } else { Polarity::Low },
            requirement: e,
        }
    });
    if let Some(a) = act {
        log.activations.push(a);
    }
    log.stages.push(next);
    Ok(act)
}

pub fn prio_run<E: Evaluator + ?Sized>(horizon: usize, stages: usize, ev: &E) -> Result<PriorityLog> {
    let mut log = prio_init(horizon)?;
    for _ in 0..stages {
        prio_step(&mut log, ev)?;
    }
    Ok(log)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    pub kind: Kind,
    pub n: usize,
}

impl Elem {
    pub fn x(n: usize) -> Self {
        Elem { kind: Kind::X, n }
    }

    pub fn y(n: usize) -> Self {
        Elem { kind: Kind::Y, n }
    }

    pub fn id(self) -> u64 {
        match self.kind {
            Kind::X => x_id(self.n),
            Kind::Y => y_id(self.n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Below,
    Above,
    Incomparable,
}

/// For each activated `n`: its polarity and the stage window `[s, t)` in
/// which `y_n` is related to `z_m`, `t` being the first later stage at
/// which a smaller number is activated.
pub struct OrderIndex {
    windows: BTreeMap<usize, (Polarity, usize, usize)>,
}

impl OrderIndex {
    pub fn new(log: &PriorityLog) -> Self {
        let mut windows = BTreeMap::new();
        for a in &log.activations {
            let end = log
                .activations
                .iter()
                .filter(|b| b.stage > a.stage && b.n < a.n)
                .map(|b| b.stage)
                .min()
                .unwrap_or(usize::MAX);
            windows.entry(a.n).or_insert((a.polarity, a.stage, end));
        }
        OrderIndex { windows }
    }

    /// Relation of `a` to `b`.
    pub fn relate(&self, a: Elem, b: Elem) -> Relation {
        if a == b {
            return Relation::Equal;
        }
        if a.n == b.n {
            return Relation::Incomparable;
        }
        let (lo, hi, flipped) = if a.n < b.n { (a, b, false) } else { (b, a, true) };
        if lo.kind == Kind::X {
            return Relation::Incomparable;
        }
        let rel = match self.windows.get(&lo.n) {
            Some(&(pol, s, t)) if lo.n < s && s <= hi.n && hi.n < t => match pol {
                Polarity::Low => Relation::Below,
                Polarity::High => Relation::Above,
            },
            _ => Relation::Incomparable,
        };
        match (rel, flipped) {
            (Relation::Below, true) => Relation::Above,
            (Relation::Above, true) => Relation::Below,
            (r, _) => r,
        }
    }
}

/// Relation between two elements according to the log.
pub fn prio_order(log: &PriorityLog, a: Elem, b: Elem) -> Relation {
    OrderIndex::new(log).relate(a, b)
}

/// The slice `{x_n, y_n : n < N}`, validated. Needs `N − 1` stages.
pub fn prio_poset(log: &PriorityLog, n: usize) -> Result<Poset> {
    if n > 0 && n - 1 > log.final_stage() {
        return Err(Error::Precondition(format!(
            "a slice of {n} indices needs at least {} stages, the log has {}",
            n - 1,
            log.final_stage()
        )));
    }
    let idx = OrderIndex::new(log);
    let elems: Vec<Elem> = (0..n).flat_map(|k| [Elem::x(k), Elem::y(k)]).collect();
    let rel: Vec<Vec<bool>> = elems
        .iter()
        .map(|&a| {
            elems
                .iter()
                .map(|&b| matches!(idx.relate(a, b), Relation::Equal | Relation::Below))
                .collect()
        })
        .collect();
    let labels = elems
        .iter()
        .map(|e| {
            Some(match e.kind {
                Kind::X => format!("x{}", e.n),
                Kind::Y => format!("y{}", e.n),
            })
        })
        .collect();
    Poset::validate_labeled(&rel, elems.iter().map(|e| e.id()).collect(), labels)
        .map_err(|e| Error::Inconsistency(format!("priority slice is not a partial order: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Properties (1) and (2) of the activation log: each number is activated
/// at most once, and once `n` is activated at stage `s` no `m` with
/// `n < m < s` is activated later. Returns the first violation.
pub fn log_property_violation(log: &PriorityLog) -> Option<String> {
    let acts = &log.activations;
    for (i, a) in acts.iter().enumerate() {
        if acts[i + 1..].iter().any(|b| b.n == a.n) {
            return Some(format!("{} activated twice", a.n));
        }
        if let Some(b) = acts
            .iter()
            .find(|b| b.stage > a.stage && a.n < b.n && b.n < a.stage)
        {
            return Some(format!(
                "{} activated at stage {} after {} was activated at stage {}",
                b.n, b.stage, a.n, a.stage
            ));
        }
    }
    None
}

/// Each requirement receives attention at most once between two injuries.
fn injury_violation(log: &PriorityLog) -> Option<String> {
    for e in 0..log.horizon {
        let mut acted = false;
        for st in log.stages.windows(2) {
            let (before, after) = (&st[0], &st[1]);
            if after.r[e] == 0 && before.r[e] == 1 {
                acted = false;
            }
            if before.r[e] == 0 && after.r[e] == 1 {
                if acted {
                    return Some(format!("R{e} acted twice in one epoch"));
                }
                acted = true;
            }
        }
    }
    None
}

/// Verify a run on the slice of `N` indices.
///
/// (a) the slice is a partial order; (b) the `x_n` form an antichain;
/// (c) log properties (1), (2); (d) for every requirement whose current
/// witness has been activated, every `z_m` from the activation stage on
/// sits above (low) or below (high) the witness; (e) every requirement
/// whose final guess is total on the slice and an initial interval `I` has
/// `I = Down(F)` for the reported finite `F`, with `F ∖ {y_n}` confined to
/// indices below the activation stage. Also checked: at most one attention
/// per requirement between injuries, and the last state change.
pub fn prio_verify<E: Evaluator + ?Sized>(log: &PriorityLog, ev: &E, n: usize) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    let p = match prio_poset(log, n) {
        Ok(p) => {
            rep.push("a: partial order", true, format!("{} elements", p.len()));
            Some(p)
        }
        Err(e @ Error::Precondition(_)) => return Err(e),
        Err(e) => {
            rep.push("a: partial order", false, e.to_string());
            None
        }
    };
    let Some(p) = p else { return Ok(rep) };
    let xs = ElemSet::from_indices(p.len(), (0..n).map(|k| 2 * k));
    rep.push("b: x antichain", is_antichain(&p, &xs), format!("{} elements", xs.len()));
    match log_property_violation(log) {
        None => rep.push("c: log properties", true, format!("{} activations", log.activations.len())),
        Some(v) => rep.push("c: log properties", false, v),
    }

    let fin = log.state(log.final_stage());
    let idx = OrderIndex::new(log);
    for e in 0..log.horizon {
        let w = fin.n[e];
        let act = log
            .activations
            .iter()
            .rev()
            .find(|a| a.requirement == e && a.n == w && fin.r[e] == 1);
        let Some(act) = act else { continue };
        let bad = (act.stage..n).filter(|&m| m != w).find_map(|m| {
            [Elem::x(m), Elem::y(m)].into_iter().find(|&z| {
                let want = match act.polarity {
                    Polarity::Low => Relation::Below,
                    Polarity::High => Relation::Above,
                };
                idx.relate(Elem::y(w), z) != want
            })
        });
        rep.push(
            format!("d: R{e} cofinite"),
            bad.is_none(),
            match bad {
                None => format!("y{w} {:?} from stage {}", act.polarity, act.stage),
                Some(z) => format!("y{w} not related to element {} as required", z.id()),
            },
        );
    }

    for e in 0..log.horizon {
        let guess: Option<Vec<bool>> = (0..p.len())
            .map(|i| ev.eval(e, p.id(i), log.final_stage()))
            .collect();
        let name = format!("e: R{e} finite generation");
        let Some(guess) = guess else {
            rep.push(name, true, "not applicable: guess not total on the slice");
            continue;
        };
        let set = ElemSet::from_indices(p.len(), (0..p.len()).filter(|&i| guess[i]));
        if !p.is_initial_interval(&set) {
            rep.push(name, true, "not applicable: guess is not an initial interval");
            continue;
        }
        let f = p.maximal_in(&set);
        let mut ok = p.down_closure(&f) == set;
        let act = log
            .activations
            .iter()
            .rev()
            .find(|a| a.requirement == e && a.n == fin.n[e] && fin.r[e] == 1);
        if let Some(a) = act {
            let yw = Elem::y(a.n);
            let below_w = |i: usize| {
                let id = p.id(i) as usize;
                let z = if id.is_multiple_of(2) { Elem::x(id / 2) } else { Elem::y(id / 2) };
                matches!(idx.relate(z, yw), Relation::Below | Relation::Equal)
            };
            ok &= set
                .iter()
                .filter(|&i| a.polarity == Polarity::Low || !below_w(i))
                .all(|i| (p.id(i) / 2) < a.stage as u64);
        }
        rep.push(name, ok, format!("F = {:?}", p.ids_of(&f)));
    }

    match injury_violation(log) {
        None => rep.push("finite injury", true, "at most one attention per epoch"),
        Some(v) => rep.push("finite injury", false, v),
    }
    let last_change = (1..log.stages.len())
        .rev()
        .find(|&s| log.stages[s].n != log.stages[s - 1].n || log.stages[s].r != log.stages[s - 1].r)
        .unwrap_or(0);
    rep.push(
        "settled",
        last_change < log.final_stage(),
        format!("no change after stage {last_change}"),
    );
    Ok(rep)
}
