//! Exact minimum set cover over small families, used by the ideal-cover
//! bound and by essential reduction.

use crate::elemset::ElemSet;

/// Lexicographically least index set of minimum size whose union covers
/// `target`, or `None` when the whole family does not cover it.
pub(crate) fn min_cover(target: &ElemSet, sets: &[ElemSet]) -> Option<Vec<usize>> {
    let all: Vec<usize> = (0..sets.len()).collect();
    if !can_cover(target, sets, &all, sets.len()) {
        return None;
    }
    let k = (0..=sets.len()).find(|&k| can_cover(target, sets, &all, k))?;
    let mut chosen = Vec::with_capacity(k);
    let mut uncovered = target.clone();
    let mut start = 0;
    while chosen.len() < k {
        let budget = k - chosen.len() - 1;
        let i = (start..sets.len())
            .find(|&i| {
                let rest = uncovered.difference(&sets[i]);
                let allowed: Vec<usize> = (i + 1..sets.len()).collect();
                can_cover(&rest, sets, &allowed, budget)
            })
            .expect("a cover of size k exists");
        uncovered.difference_with(&sets[i]);
        chosen.push(i);
        start = i + 1;
    }
    Some(chosen)
}

/// Whether at most `budget` sets drawn from `allowed` cover `uncovered`.
/// Branches on the uncovered element with the fewest candidate sets.
fn can_cover(uncovered: &ElemSet, sets: &[ElemSet], allowed: &[usize], budget: usize) -> bool {
    if uncovered.is_empty() {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for e in uncovered.iter() {
        let cands: Vec<usize> = allowed
            .iter()
            .copied()
            .filter(|&j| sets[j].contains(e))
            .collect();
        if cands.is_empty() {
            return false;
        }
        if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
            let done = cands.len() == 1;
            best = Some((e, cands));
            if done {
                break;
            }
        }
    }
    let (_, cands) = best.expect("uncovered is nonempty");
    cands.iter().any(|&j| {
        let rest = uncovered.difference(&sets[j]);
        let narrowed: Vec<usize> = allowed.iter().copied().filter(|&k| k != j).collect();
        can_cover(&rest, sets, &narrowed, budget - 1)
    })
}
