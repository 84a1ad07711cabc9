//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Oracles here work on bitmasks built from `Poset::leq` alone and do not
//! call the library routine they check.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use posets::antichains::{is_antichain, max_strong_antichain};
use posets::census::{census, generate, poset_from_code, random_poset};
use posets::gadgets::kb::{kb_compare, kb_decompose, random_tree, Node};
use posets::gadgets::{run_pipeline, Family, FnTable};
use posets::ideals::{essential_reduce, et_decompose, is_essential, min_ideal_cover};
use posets::interval_tree::{
    count_intervals, dyadic_chain, enumerate_intervals, factorization_check, factorization_sides,
    iterate_split, tp_member, ApproxSeq,
};
use posets::priority::{prio_poset, prio_run, prio_verify, Evaluator, PoolEvaluator, PriorityLog};
use posets::separation::{antichain_separator, restriction_identity_check, separate_down, separation_tree};
use posets::{ElemSet, Poset};

const TOY_POOL: &str = include_str!("data/toy_pool.json");
const TOY_GOLDEN: &str = include_str!("data/toy_transcript.json");

// ---------------------------------------------------------------- oracles

/// Up and down masks over internal indices; `n ≤ 32`.
struct Bits {
    n: usize,
    up: Vec<u32>,
    down: Vec<u32>,
}

impl Bits {
    fn of(p: &Poset) -> Bits {
        let n = p.len();
        assert!(n <= 32);
        let mut up = vec![0u32; n];
        let mut down = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                if p.leq(i, j) {
                    up[i] |= 1 << j;
                    down[j] |= 1 << i;
                }
            }
        }
        Bits { n, up, down }
    }

    fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    fn members(m: u32) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| m >> i & 1 == 1)
    }

    /// Downward closed inside `region`.
    fn is_down_in(&self, s: u32, region: u32) -> bool {
        Bits::members(s).all(|a| self.down[a] & region & !s == 0)
    }

    fn is_down(&self, s: u32) -> bool {
        self.is_down_in(s, self.full())
    }

    fn downsets_in(&self, region: u32) -> BTreeSet<u32> {
        subsets(region).filter(|&s| self.is_down_in(s, region)).collect()
    }

    fn down_closure(&self, s: u32) -> u32 {
        Bits::members(s).fold(0, |acc, a| acc | self.down[a])
    }

    fn compatible(&self, a: usize, b: usize, within: u32) -> bool {
        self.up[a] & self.up[b] & within != 0
    }

    fn is_ideal(&self, s: u32) -> bool {
        self.is_down(s)
            && Bits::members(s).all(|a| Bits::members(s).all(|b| self.compatible(a, b, s)))
    }

    fn maximal_count(&self) -> usize {
        (0..self.n).filter(|&i| self.up[i] == 1 << i).count()
    }

    fn max_strong_antichain(&self) -> usize {
        subsets(self.full())
            .filter(|&s| {
                Bits::members(s).all(|a| {
                    Bits::members(s).all(|b| a == b || !self.compatible(a, b, self.full()))
                })
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Least number of ideals (by definition, not by principal cones)
    /// whose union is `target`.
    fn min_ideal_cover(&self, target: u32) -> usize {
        let ideals: Vec<u32> = subsets(target).filter(|&s| s != 0 && self.is_ideal(s)).collect();
        min_union_cover(target, &ideals).expect("singleton cones cover")
    }
}

fn subsets(region: u32) -> impl Iterator<Item = u32> {
    // all submasks of region, ascending
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == region { None } else { Some((cur.wrapping_sub(region)) & region) };
        Some(cur)
    })
}

/// Fewest members of `family` with union exactly `target`, by trying
/// every subfamily in order of size.
fn min_union_cover(target: u32, family: &[u32]) -> Option<usize> {
    if target == 0 {
        return Some(0);
    }
    let k = family.len();
    (1..=k).find(|&size| {
        (0u64..1 << k)
            .filter(|c| c.count_ones() as usize == size)
            .any(|c| {
                (0..k).filter(|&i| c >> i & 1 == 1).fold(0, |acc, i| acc | family[i]) == target
            })
    })
}

fn mask(s: &ElemSet) -> u32 {
    s.iter().fold(0, |acc, i| acc | 1 << i)
}

fn classes(max_n: usize) -> Vec<Poset> {
    generate(max_n)
        .unwrap()
        .iter()
        .enumerate()
        .flat_map(|(n, codes)| codes.iter().map(move |&c| poset_from_code(n, c).unwrap()))
        .collect()
}

fn random_small(rng: &mut ChaCha8Rng, sizes: std::ops::RangeInclusive<usize>) -> Poset {
    let n = rng.gen_range(sizes);
    let d = rng.gen_range(0.05..0.7);
    random_poset(rng, n, d)
}

// ---------------------------------------------------------------- report

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: usize, detail: String) -> Outcome {
    Outcome {
        passed: failures == 0,
        detail,
    }
}

// ---------------------------------------------------------------- 1

fn decomposition_mismatch(p: &Poset) -> Option<String> {
    let b = Bits::of(p);
    let want = b.maximal_count();
    let strong = b.max_strong_antichain();
    let cover = b.min_ideal_cover(b.full());
    let c = et_decompose(p).ok()?;
    let parts_ok = c.parts.iter().all(|a| b.is_ideal(mask(a)))
        && c.parts.iter().fold(0, |acc, a| acc | mask(a)) == b.full();
    let lib = (
        c.parts.len(),
        max_strong_antichain(p).0,
        min_ideal_cover(p, &p.carrier()).ok()?,
    );
    if parts_ok && strong == want && cover == want && lib == (want, want, want) {
        None
    } else {
        Some(format!(
            "{} points: maximal {want}, oracle strong {strong}, oracle cover {cover}, library {lib:?}",
            p.len()
        ))
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let levels = generate(6).unwrap();
    let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
    let rows = census(6).unwrap();
    let census_violations: usize = rows.iter().map(|r| r.violations.decomposition).sum();
    let elapsed = t.elapsed();
    let all = classes(6);
    let bad_census: Vec<String> = all.par_iter().filter_map(decomposition_mismatch).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random: Vec<Poset> = (0..500).map(|_| random_small(&mut rng, 7..=10)).collect();
    let bad_random: Vec<String> = random.par_iter().filter_map(decomposition_mismatch).collect();
    let failures = usize::from(counts != [1, 1, 2, 5, 16, 63, 318])
        + census_violations
        + bad_census.len()
        + bad_random.len()
        + usize::from(elapsed > Duration::from_secs(60));
    outcome(
        failures,
        format!(
            "{} classes up to 6 points in {:.1?}, 500 random on 7..=10; violations: census {}, oracle {} + {}{}",
            all.len(),
            elapsed,
            census_violations,
            bad_census.len(),
            bad_random.len(),
            bad_census.first().or(bad_random.first()).map(|s| format!(" ({s})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<Poset> = (0..200).map(|_| random_small(&mut rng, 0..=12)).collect();
    let bad = samples
        .par_iter()
        .filter(|p| {
            let b = Bits::of(p);
            let brute = subsets(b.full()).filter(|&s| b.is_down(s)).count() as u128;
            let listed: BTreeSet<u32> = enumerate_intervals(p).unwrap().iter().map(mask).collect();
            count_intervals(p).unwrap() != brute
                || listed.len() as u128 != brute
                || !listed.iter().all(|&s| b.is_down(s))
        })
        .count();
    let shapes = (0..=16usize)
        .filter(|&n| {
            count_intervals(&Poset::chain(n)).unwrap() != n as u128 + 1
                || count_intervals(&Poset::antichain(n)).unwrap() != 1u128 << n
        })
        .count();
    outcome(
        bad + shapes,
        format!("200 random up to 12 points: {bad} mismatches; chains and antichains up to 16: {shapes} mismatches"),
    )
}

// ---------------------------------------------------------------- 3

fn factorization_oracle(p: &Poset, x: usize) -> [BTreeSet<u32>; 4] {
    let b = Bits::of(p);
    let below = b.down[x] & !(1 << x);
    let above = b.up[x] & !(1 << x);
    let inc = b.full() & !b.down[x] & !b.up[x];
    let all = b.downsets_in(b.full());
    let mut without = BTreeSet::new();
    let mut with = BTreeSet::new();
    for &j in &b.downsets_in(inc) {
        for &i in &b.downsets_in(below) {
            without.insert(i | b.down_closure(j));
        }
        for &i in &b.downsets_in(above) {
            with.insert(b.down_closure(1 << x | i | j));
        }
    }
    [
        all.iter().copied().filter(|s| s >> x & 1 == 0).collect(),
        without,
        all.iter().copied().filter(|s| s >> x & 1 == 1).collect(),
        with,
    ]
}

fn criterion_3() -> Outcome {
    let all = classes(6);
    let pairs: Vec<(usize, usize)> = all
        .iter()
        .enumerate()
        .flat_map(|(k, p)| (0..p.len()).map(move |x| (k, x)))
        .collect();
    let bad = pairs
        .par_iter()
        .filter(|&&(k, x)| {
            let p = &all[k];
            let o = factorization_oracle(p, x);
            let s = factorization_sides(p, x).unwrap();
            let m = |v: &BTreeSet<ElemSet>| v.iter().map(mask).collect::<BTreeSet<u32>>();
            o[0] != o[1]
                || o[2] != o[3]
                || [m(&s.without_x), m(&s.without_x_built), m(&s.with_x), m(&s.with_x_built)] != o
                || !factorization_check(p, x).unwrap()
        })
        .count();
    outcome(bad, format!("{} (P, x) pairs up to 6 points: {bad} violations", pairs.len()))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let all = classes(6);
    let checked: Vec<(usize, usize)> = all
        .par_iter()
        .map(|p| {
            let b = Bits::of(p);
            let downs = b.downsets_in(b.full());
            let mut bad = 0;
            for q in subsets(b.full()) {
                let inner = b.downsets_in(q);
                let traces: BTreeSet<u32> = downs.iter().map(|j| j & q).collect();
                let lib = restriction_identity_check(p, &ElemSet::from_mask(p.len(), q as u64)).unwrap();
                if inner != traces || !lib {
                    bad += 1;
                }
            }
            (1 << p.len(), bad)
        })
        .collect();
    let total: usize = checked.iter().map(|c| c.0).sum();
    let bad: usize = checked.iter().map(|c| c.1).sum();
    outcome(bad, format!("{total} (P, Q) pairs up to 6 points: {bad} violations"))
}

// ---------------------------------------------------------------- 5

fn separation_failures(p: &Poset) -> (usize, usize, usize) {
    let b = Bits::of(p);
    let n = p.len();
    let set = |m: u32| ElemSet::from_mask(n, m as u64);
    let (mut cases, mut separators, mut bad) = (0, 0, 0);
    for a in subsets(b.full()) {
        for bb in subsets(b.full() & !a) {
            let separable = Bits::members(bb).all(|y| b.up[y] & a == 0);
            let got = separate_down(p, &set(a), &set(bb));
            if !separable {
                bad += usize::from(got.is_ok());
                continue;
            }
            cases += 1;
            let i = mask(&got.unwrap());
            let tree = separation_tree(p, &set(a), &set(bb), p.id_bound()).unwrap();
            let tree_mask = (0..n).filter(|&k| tree.get(p.id(k)) == Some(true)).fold(0, |acc, k| acc | 1 << k);
            if !b.is_down(i) || a & !i != 0 || i & bb != 0 || tree_mask != i || tree.len() as u64 != p.id_bound() {
                bad += 1;
            }
        }
    }
    for d in subsets(b.full()) {
        let anti = Bits::members(d).all(|x| b.up[x] & d == 1 << x);
        if d.count_ones() < 2 || !anti {
            continue;
        }
        separators += 1;
        let above = Bits::members(d).fold(0, |acc, x| acc | (b.up[x] & !(1 << x)));
        let want = b.down_closure(d) & !above;
        match antichain_separator(p, &set(d)) {
            Ok((i, cert)) => {
                if mask(&i) != want || cert < d.count_ones() as usize || cert != b.min_ideal_cover(want) {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    (cases, separators, bad)
}

fn criterion_5() -> Outcome {
    let all = classes(5);
    let r: Vec<(usize, usize, usize)> = all.par_iter().map(separation_failures).collect();
    let cases: usize = r.iter().map(|t| t.0).sum();
    let seps: usize = r.iter().map(|t| t.1).sum();
    let bad: usize = r.iter().map(|t| t.2).sum();
    outcome(
        bad,
        format!("{cases} separable (P, A, B) and {seps} antichain separators up to 5 points: {bad} violations"),
    )
}

// ---------------------------------------------------------------- 6

/// Ground truth for each family within the horizon.
fn expected(family: Family, f: &[u64], g: &[u64], n: usize) -> BTreeSet<u64> {
    let below = |v: u64| v < n as u64;
    let range_upto = |bound: usize| -> BTreeSet<u64> {
        f.iter().take(bound).copied().filter(|&v| below(v)).collect()
    };
    let false_at = |k: usize, m: usize| (k + 1..=m).any(|j| f[j] < f[k]);
    match family {
        Family::RangeStrong | Family::Sep | Family::AntichainExt => range_upto(n),
        Family::TwoChain => range_upto(n.saturating_sub(1)),
        Family::TrueFalse | Family::OmegaOmegaStar => {
            (0..n).filter(|&k| false_at(k, n - 1)).map(|k| k as u64).collect()
        }
        Family::Wkl => (0..f.len())
            .filter(|&i| (0..n).any(|m| i < m && g.get(m).is_none_or(|&gv| (i as u64) < gv)))
            .map(|i| f[i])
            .filter(|&v| below(v))
            .collect(),
    }
}

/// Poset axioms on the relation matrix with row bitsets.
fn axioms_hold(p: &Poset) -> bool {
    let n = p.len();
    let words = n.div_ceil(64);
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r = vec![0u64; words];
            for j in 0..n {
                if p.leq(i, j) {
                    r[j / 64] |= 1 << (j % 64);
                }
            }
            r
        })
        .collect();
    let has = |i: usize, j: usize| rows[i][j / 64] >> (j % 64) & 1 == 1;
    (0..n).all(|i| has(i, i))
        && (0..n).all(|i| (0..n).all(|j| i == j || !(has(i, j) && has(j, i))))
        && (0..n).all(|i| {
            (0..n)
                .filter(|&j| has(i, j))
                .all(|j| rows[j].iter().zip(&rows[i]).all(|(rj, ri)| rj & !ri == 0))
        })
}

fn injective(len: usize, values: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<u64>| {
                values
                    .iter()
                    .filter(|v| !s.contains(v))
                    .map(|&v| {
                        let mut t = s.clone();
                        t.push(v);
                        t
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn gadget_failure(family: Family, f: &[u64], g: &[u64], n: usize) -> Option<String> {
    let ft = FnTable::new(f.to_vec()).unwrap();
    let gt = FnTable::new(g.to_vec()).unwrap();
    let want = expected(family, f, g, n);
    match run_pipeline(family, &ft, &gt, n) {
        Ok((inst, got)) if got == want && axioms_hold(&inst.poset) => None,
        Ok((_, got)) => Some(format!("{family} f={f:?} g={g:?} N={n}: got {got:?}, want {want:?}")),
        Err(e) => Some(format!("{family} f={f:?} g={g:?} N={n}: {e}")),
    }
}

fn criterion_6() -> Outcome {
    let values: Vec<u64> = (0..8).collect();
    let mut cases: Vec<(Family, Vec<u64>, Vec<u64>, usize)> = Vec::new();
    for n in 1..=5 {
        for family in Family::ALL {
            let lens: Vec<usize> = match family {
                Family::TrueFalse | Family::OmegaOmegaStar => vec![n],
                _ => (0..=n).collect(),
            };
            for &len in &lens {
                for f in injective(len, &values) {
                    if family.needs_g() {
                        let rest: Vec<u64> = values.iter().copied().filter(|v| !f.contains(v)).collect();
                        for glen in 0..=n.min(rest.len()) {
                            for g in injective(glen, &rest) {
                                cases.push((family, f.clone(), g, n));
                            }
                        }
                    } else {
                        cases.push((family, f.clone(), vec![], n));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut random = Vec::new();
    for k in 0..200 {
        let family = Family::ALL[k % Family::ALL.len()];
        let n = rng.gen_range(1..=64usize);
        let mut pool: Vec<u64> = (0..2 * n as u64 + 4).collect();
        for i in (1..pool.len()).rev() {
            pool.swap(i, rng.gen_range(0..=i));
        }
        let flen = if matches!(family, Family::TrueFalse | Family::OmegaOmegaStar) {
            n
        } else {
            rng.gen_range(0..=n)
        };
        let f = pool[..flen].to_vec();
        let g = if family.needs_g() {
            pool[flen..flen + rng.gen_range(0..=n.min(pool.len() - flen))].to_vec()
        } else {
            vec![]
        };
        random.push((family, f, g, n));
    }
    let fails: Vec<String> = cases
        .par_iter()
        .chain(random.par_iter())
        .filter_map(|(fam, f, g, n)| gadget_failure(*fam, f, g, *n))
        .collect();
    outcome(
        fails.len(),
        format!(
            "{} exhaustive (N ≤ 5, values < 8) and 200 random (N ≤ 64) instances: {} failures{}",
            cases.len(),
            fails.len(),
            fails.first().map(|s| format!(" ({s})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 7

/// Stage rule re-run directly: `(witnesses, flags)` per stage and
/// `(n, stage, low?)` per activation.
#[allow(clippy::type_complexity)]
fn simulate(
    horizon: usize,
    stages: usize,
    ev: &dyn Evaluator,
) -> (Vec<(Vec<usize>, Vec<u8>)>, Vec<(usize, usize, bool)>) {
    let mut n: Vec<usize> = (0..horizon).collect();
    let mut r = vec![0u8; horizon];
    let mut states = vec![(n.clone(), r.clone())];
    let mut acts = Vec::new();
    for s in 0..stages {
        let hit = (0..horizon).find_map(|e| {
            (e <= s && n[e] <= s && r[e] == 0)
                .then(|| ev.eval(e, 2 * n[e] as u64 + 1, s))
                .flatten()
                .map(|v| (e, v))
        });
        if let Some((e, v)) = hit {
            acts.push((n[e], s + 1, !v));
            r[e] = 1;
            for i in e + 1..horizon {
                n[i] = s + i - e;
                r[i] = 0;
            }
        }
        states.push((n.clone(), r.clone()));
    }
    (states, acts)
}

/// `y_k ⪯ z_m` (low) or `⪰` (high) for `k < m`, from the activation list.
fn oracle_leq(acts: &[(usize, usize, bool)], a: (bool, usize), b: (bool, usize)) -> bool {
    // (is_y, index)
    if a == b {
        return true;
    }
    let related = |k: usize, m: usize| -> Option<bool> {
        let &(_, s, low) = acts.iter().find(|t| t.0 == k)?;
        let ok = k < s && s <= m && !acts.iter().any(|&(j, t, _)| j < k && s < t && t <= m);
        ok.then_some(low)
    };
    match a.1.cmp(&b.1) {
        Ordering::Less => a.0 && related(a.1, b.1) == Some(true),
        Ordering::Greater => b.0 && related(b.1, a.1) == Some(false),
        Ordering::Equal => false,
    }
}

fn criterion_7() -> Outcome {
    let pool = PoolEvaluator::from_json(TOY_POOL).unwrap();
    let t = Instant::now();
    let log = prio_run(10, 500, &pool).unwrap();
    let p = prio_poset(&log, 100);
    let rep = prio_verify(&log, &pool, 100).unwrap();
    let elapsed = t.elapsed();
    let mut notes = Vec::new();
    if log.to_transcript() != TOY_GOLDEN {
        notes.push("transcript differs from golden file".to_string());
    }
    if PriorityLog::from_transcript(TOY_GOLDEN).ok().as_ref() != Some(&log) {
        notes.push("golden file does not parse back to the log".to_string());
    }
    let (states, acts) = simulate(10, 500, &pool);
    let lib_states: Vec<(Vec<usize>, Vec<u8>)> = log.stages.iter().map(|s| (s.n.clone(), s.r.clone())).collect();
    let lib_acts: Vec<(usize, usize, bool)> = log
        .activations
        .iter()
        .map(|a| (a.n, a.stage, a.polarity == posets::priority::Polarity::Low))
        .collect();
    if states != lib_states || acts != lib_acts {
        notes.push("independent re-run of the stage rule disagrees".to_string());
    }
    match &p {
        Ok(p) => {
            let elem = |i: usize| (p.id(i) % 2 == 1, (p.id(i) / 2) as usize);
            let wrong = (0..p.len())
                .flat_map(|i| (0..p.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| p.leq(i, j) != oracle_leq(&acts, elem(i), elem(j)))
                .count();
            if wrong > 0 {
                notes.push(format!("{wrong} order pairs disagree with the rules"));
            }
            if !axioms_hold(p) {
                notes.push("slice fails the axioms".to_string());
            }
            let xs = ElemSet::from_indices(p.len(), (0..100).map(|k| 2 * k));
            if !is_antichain(p, &xs) {
                notes.push("x_n are not an antichain".to_string());
            }
        }
        Err(e) => notes.push(format!("slice: {e}")),
    }
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        notes.push(format!("verify failed: {failed:?}"));
    }
    let converged = rep.checks.iter().filter(|c| c.name.starts_with("d:")).count();
    if converged == 0 {
        notes.push("no requirement converged".to_string());
    }
    if elapsed > Duration::from_secs(10) {
        notes.push(format!("took {elapsed:.1?}"));
    }
    outcome(
        notes.len(),
        format!(
            "{} activations, {converged} converged requirements, {} checks in {:.1?}{}",
            log.activations.len(),
            rep.checks.len(),
            elapsed,
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let p = dyadic_chain(6);
    let leaves = match iterate_split(&p, &p.carrier(), 5) {
        Ok(l) => l,
        Err(e) => return outcome(1, format!("iterate_split failed: {e}")),
    };
    // T(P) by definition: no decided 0 lies below a decided 1
    let member = |s: &ApproxSeq| {
        let decided: Vec<usize> = (0..p.len()).filter(|&i| (p.id(i) as usize) < s.len()).collect();
        let one = |i: usize| s.get(p.id(i)) == Some(true);
        (0..s.len() as u64).all(|pos| p.index_of(pos).is_some() || s.get(pos) == Some(false))
            && decided.iter().all(|&i| !one(i) || decided.iter().all(|&j| !p.leq(j, i) || one(j)))
    };
    let incompatible = |a: &ApproxSeq, b: &ApproxSeq| {
        a.bits().iter().zip(b.bits()).any(|(x, y)| x != y)
    };
    let mut bad = 0;
    bad += usize::from(leaves.len() != 32 || p.len() != 64);
    bad += leaves.iter().filter(|s| !member(s) || !tp_member(&p, s)).count();
    for (i, a) in leaves.iter().enumerate() {
        bad += leaves[i + 1..].iter().filter(|b| !incompatible(a, b)).count();
    }
    let intervals: BTreeSet<Vec<usize>> = leaves
        .iter()
        .map(|s| {
            let ones: Vec<usize> = (0..p.len()).filter(|&i| s.get(p.id(i)) == Some(true)).collect();
            (0..p.len()).filter(|&i| ones.iter().any(|&o| p.leq(i, o))).collect()
        })
        .collect();
    let extends = leaves.iter().all(|s| {
        let i = s.canonical_interval(&p);
        p.is_initial_interval(&i) && ApproxSeq::characteristic(&p, &i, s.len() as u64) == *s
    });
    bad += usize::from(intervals.len() != 32) + usize::from(!extends);
    outcome(
        bad,
        format!(
            "{} leaves on a 64-element dyadic chain, {} distinct initial intervals",
            leaves.len(),
            intervals.len()
        ),
    )
}

// ---------------------------------------------------------------- 9

fn kb_oracle(s: &[u64], t: &[u64]) -> Ordering {
    for k in 0..s.len().min(t.len()) {
        if s[k] != t[k] {
            return s[k].cmp(&t[k]);
        }
    }
    // the longer one extends the other and comes first
    t.len().cmp(&s.len())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let trees: Vec<(BTreeSet<Node>, Node)> = (0..200).map(|_| random_tree(&mut rng, 6, 3)).collect();
    let mut bad = 0;
    let mut nodes_seen = 0;
    for (t, path) in &trees {
        let nodes: Vec<&Node> = t.iter().collect();
        nodes_seen += nodes.len();
        for a in &nodes {
            for b in &nodes {
                let c = kb_compare(a, b);
                if c != kb_oracle(a, b) || c != kb_compare(b, a).reverse() || (c == Ordering::Equal) != (a == b) {
                    bad += 1;
                }
            }
        }
        let mut sorted = nodes.clone();
        sorted.sort_by(|a, b| kb_compare(a, b));
        for i in 0..sorted.len() {
            bad += sorted[i + 1..].iter().filter(|b| kb_compare(sorted[i], b) != Ordering::Less).count();
        }
        let d = match kb_decompose(t, path) {
            Ok(d) => d,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let lt = |s: &[u64], u: &[u64]| kb_oracle(s, u) == Ordering::Less;
        let pre = |n: usize| &path[..n];
        let beyond: BTreeSet<Node> = t.iter().filter(|s| s.len() > path.len() && s.starts_with(path)).cloned().collect();
        let x: BTreeSet<Node> = t
            .iter()
            .filter(|s| !beyond.contains(*s) && (0..=path.len()).all(|n| lt(s, pre(n))))
            .cloned()
            .collect();
        let ys: Vec<BTreeSet<Node>> = (0..path.len())
            .map(|n| t.iter().filter(|s| lt(pre(n + 1), s) && !lt(pre(n), s)).cloned().collect())
            .collect();
        let closed: Vec<BTreeSet<Node>> = (0..path.len())
            .map(|n| {
                t.iter()
                    .filter(|s| s.as_slice() == pre(n) || (s.len() > n && s.starts_with(pre(n)) && path[n] < s[n]))
                    .cloned()
                    .collect()
            })
            .collect();
        let mut pieces: Vec<&BTreeSet<Node>> = vec![&x, &beyond];
        pieces.extend(ys.iter());
        let union: BTreeSet<Node> = pieces.iter().flat_map(|s| s.iter().cloned()).chain([path.clone()]).collect();
        let sizes: usize = pieces.iter().map(|s| s.len()).sum::<usize>() + 1;
        if d.x != x || d.ys != ys || d.beyond != beyond || ys != closed || union != *t || sizes != t.len() {
            bad += 1;
        }
    }
    outcome(bad, format!("200 trees, {nodes_seen} nodes: {bad} violations"))
}

// ---------------------------------------------------------------- 10

fn reduction_failure(family: &[u32], universe: usize) -> bool {
    let sets: Vec<ElemSet> = family.iter().map(|&m| ElemSet::from_mask(universe, m as u64)).collect();
    let target = family.iter().fold(0, |acc, m| acc | m);
    let best = min_union_cover(target, family).unwrap();
    let out = essential_reduce(&sets);
    let union = out.iter().fold(0, |acc, s| acc | mask(s));
    out.len() != best || union != target || !is_essential(&out) || !out.iter().all(|s| sets.contains(s))
}

fn criterion_10() -> Outcome {
    // every family of at most 4 subsets of a 3-point universe
    let all: Vec<u32> = (0..8).collect();
    let mut exhaustive = 0;
    let mut bad = 0;
    for c in 0u32..1 << 8 {
        if c.count_ones() <= 4 {
            let family: Vec<u32> = all.iter().copied().filter(|&s| c >> s & 1 == 1).collect();
            exhaustive += 1;
            bad += usize::from(reduction_failure(&family, 3));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let random: Vec<(Vec<u32>, usize)> = (0..3000)
        .map(|_| {
            let u = rng.gen_range(1..=12);
            let k = rng.gen_range(0..=10);
            let density = rng.gen_range(0.1..0.6);
            let family = (0..k)
                .map(|_| (0..u).filter(|_| rng.gen_bool(density)).fold(0u32, |acc, i| acc | 1 << i))
                .collect();
            (family, u)
        })
        .collect();
    bad += random.par_iter().filter(|(f, u)| reduction_failure(f, *u)).count();
    outcome(
        bad,
        format!("{exhaustive} exhaustive families on 3 points and 3000 random (≤ 10 sets, ≤ 12 points): {bad} violations"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("decomposition identity", criterion_1),
        ("interval counting", criterion_2),
        ("factorization identities", criterion_3),
        ("restriction identity", criterion_4),
        ("separation", criterion_5),
        ("gadget decoders", criterion_6),
        ("priority simulator", criterion_7),
        ("perfect branching", criterion_8),
        ("KB decomposition", criterion_9),
        ("essential reduction", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        println!(
            "criterion {:>2} {:<26} {}  [{:.1?}] {}",
            k + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            t.elapsed(),
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
