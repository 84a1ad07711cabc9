//! Finite partial orders over dense internal indices.
//!
//! Elements are addressed by internal index `0..n`. External ids (strictly
//! increasing natural numbers) and optional labels are a bijective dressing
//! used for I/O and for the approximation sequences of the interval tree.

use crate::elemset::ElemSet;
use crate::error::{Error, Result, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<u64>,
    labels: Vec<Option<String>>,
    /// `up[i] = {j : i ⪯ j}`
    up: Vec<ElemSet>,
    /// `down[i] = {j : j ⪯ i}`
    down: Vec<ElemSet>,
}

/// Upper and lower cones of an element, plus the elements incomparable to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cones {
    pub up: ElemSet,
    pub strict_up: ElemSet,
    pub down: ElemSet,
    pub strict_down: ElemSet,
    pub inc: ElemSet,
}

impl Poset {
    /// Check the three axioms on a square relation and build the poset.
    ///
    /// Violations are reported in the order reflexivity, antisymmetry,
    /// transitivity, each with the least witness by internal index.
    pub fn validate(relation: &[Vec<bool>], ids: Vec<u64>) -> Result<Poset> {
        let n = ids.len();
        Poset::validate_labeled(relation, ids, vec![None; n])
    }

    pub fn validate_labeled(
        relation: &[Vec<bool>],
        ids: Vec<u64>,
        labels: Vec<Option<String>>,
    ) -> Result<Poset> {
        let n = relation.len();
        if relation.iter().any(|row| row.len() != n) {
            return Err(Error::Schema("relation is not square".into()));
        }
        if ids.len() != n || labels.len() != n {
            return Err(Error::Schema(format!(
                "relation has {n} rows but {} ids and {} labels",
                ids.len(),
                labels.len()
            )));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Schema("ids must be strictly increasing".into()));
        }
        let up: Vec<ElemSet> = relation
            .iter()
            .map(|row| ElemSet::from_indices(n, (0..n).filter(|&j| row[j])))
            .collect();
        if let Some(i) = (0..n).find(|&i| !up[i].contains(i)) {
            return Err(Violation::Reflexivity(ids[i]).into());
        }
        for i in 0..n {
            if let Some(j) = up[i].iter().find(|&j| j > i && up[j].contains(i)) {
                return Err(Violation::Antisymmetry(ids[i], ids[j]).into());
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if let Some(k) = up[j].difference(&up[i]).first() {
                    return Err(Violation::Transitivity(ids[i], ids[j], ids[k]).into());
                }
            }
        }
        Ok(Poset::from_up_rows(ids, labels, up))
    }

    fn from_up_rows(ids: Vec<u64>, labels: Vec<Option<String>>, up: Vec<ElemSet>) -> Poset {
        let n = ids.len();
        let mut down = vec![ElemSet::new(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }
        Poset {
            ids,
            labels,
            up,
            down,
        }
    }

    /// Build from `(lower id, upper id)` pairs. Reflexive pairs are implied.
    /// With `closed == false` the pairs are treated as generators (typically
    /// cover pairs) and closed transitively; otherwise they must already form
    /// a transitive, antisymmetric relation.
    pub fn from_pairs(
        ids: Vec<u64>,
        labels: Vec<Option<String>>,
        pairs: &[(u64, u64)],
        closed: bool,
    ) -> Result<Poset> {
        let n = ids.len();
        let index = |id: u64| -> Result<usize> {
            ids.binary_search(&id).map_err(|_| Error::NotInCarrier(id))
        };
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            rel[index(a)?][index(b)?] = true;
        }
        if !closed {
            warshall(&mut rel);
        }
        Poset::validate_labeled(&rel, ids, labels)
    }

    /// Poset on ids `0..n` generated by index pairs `(lower, upper)`.
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let pairs: Vec<(u64, u64)> = pairs.iter().map(|&(a, b)| (a as u64, b as u64)).collect();
        Poset::from_pairs((0..n as u64).collect(), vec![None; n], &pairs, false)
    }

    pub fn chain(n: usize) -> Poset {
        let up = (0..n).map(|i| ElemSet::from_indices(n, i..n)).collect();
        Poset::from_up_rows((0..n as u64).collect(), vec![None; n], up)
    }

    pub fn antichain(n: usize) -> Poset {
        let up = (0..n).map(|i| ElemSet::from_indices(n, [i])).collect();
        Poset::from_up_rows((0..n as u64).collect(), vec![None; n], up)
    }

    pub fn empty() -> Poset {
        Poset::antichain(0)
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Poset> {
        if labels.len() != self.len() {
            return Err(Error::Schema("label count does not match carrier".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> u64 {
        self.ids[i]
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Label if present, id otherwise.
    pub fn name(&self, i: usize) -> String {
        match &self.labels[i] {
            Some(l) => l.clone(),
            None => self.ids[i].to_string(),
        }
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn index(&self, id: u64) -> Result<usize> {
        self.index_of(id).ok_or(Error::NotInCarrier(id))
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    /// One past the largest id, i.e. the length of a full approximation.
    pub fn id_bound(&self) -> u64 {
        self.ids.last().map_or(0, |&m| m + 1)
    }

    pub fn set_from_ids<I: IntoIterator<Item = u64>>(&self, ids: I) -> Result<ElemSet> {
        let mut s = ElemSet::new(self.len());
        for id in ids {
            s.insert(self.index(id)?);
        }
        Ok(s)
    }

    pub fn ids_of(&self, set: &ElemSet) -> Vec<u64> {
        set.iter().map(|i| self.ids[i]).collect()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.up[i].contains(j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn incomparable(&self, i: usize, j: usize) -> bool {
        !self.comparable(i, j)
    }

    pub fn up(&self, i: usize) -> &ElemSet {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &ElemSet {
        &self.down[i]
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::new(self.len())
    }

    pub fn check_subset(&self, set: &ElemSet) -> Result<()> {
        match set.iter().find(|&i| i >= self.len()) {
            Some(i) => Err(Error::NotInCarrier(i as u64)),
            None => Ok(()),
        }
    }

    pub(crate) fn check_element(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::NotInCarrier(x as u64))
        }
    }

    pub fn cones(&self, x: usize) -> Result<Cones> {
        self.check_element(x)?;
        let up = self.up[x].clone();
        let down = self.down[x].clone();
        let mut strict_up = up.clone();
        strict_up.remove(x);
        let mut strict_down = down.clone();
        strict_down.remove(x);
        let inc = self.carrier().difference(&up.union(&down));
        Ok(Cones {
            up,
            strict_up,
            down,
            strict_down,
            inc,
        })
    }

    pub fn strict_up(&self, x: usize) -> ElemSet {
        let mut s = self.up[x].clone();
        s.remove(x);
        s
    }

    pub fn strict_down(&self, x: usize) -> ElemSet {
        let mut s = self.down[x].clone();
        s.remove(x);
        s
    }

    pub fn incomparable_to(&self, x: usize) -> ElemSet {
        self.carrier().difference(&self.up[x].union(&self.down[x]))
    }

    pub fn down_closure(&self, set: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for x in set.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn up_closure(&self, set: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for x in set.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    /// Whether `x` and `y` have a common upper bound inside `within`.
    pub fn compatible(&self, x: usize, y: usize, within: &ElemSet) -> Result<bool> {
        for e in [x, y] {
            self.check_element(e)?;
            if !within.contains(e) {
                return Err(Error::OutsideSubset(self.ids[e]));
            }
        }
        Ok(self.up[x].intersection(&self.up[y]).intersects(within))
    }

    /// Compatibility in the whole carrier.
    pub fn compatible_in_carrier(&self, x: usize, y: usize) -> bool {
        self.up[x].intersects(&self.up[y])
    }

    pub fn is_initial_interval(&self, set: &ElemSet) -> bool {
        set.iter().all(|y| self.down[y].is_subset(set))
    }

    pub fn is_chain(&self, set: &ElemSet) -> bool {
        let v = set.to_vec();
        v.iter()
            .enumerate()
            .all(|(k, &x)| v[k + 1..].iter().all(|&y| self.comparable(x, y)))
    }

    /// ⪯-maximal members of `set` (relative to `set`).
    pub fn maximal_in(&self, set: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.len(),
            set.iter()
                .filter(|&x| self.up[x].intersection(set).len() == 1),
        )
    }

    pub fn maximal_elements(&self) -> ElemSet {
        self.maximal_in(&self.carrier())
    }

    /// Induced suborder on `set`, keeping ids and labels.
    pub fn restrict(&self, set: &ElemSet) -> Poset {
        self.restrict_with_map(set).0
    }

    /// Induced suborder plus the map from its indices back to ours.
    pub fn restrict_with_map(&self, set: &ElemSet) -> (Poset, Vec<usize>) {
        let map: Vec<usize> = set.iter().filter(|&i| i < self.len()).collect();
        let m = map.len();
        let up = map
            .iter()
            .map(|&i| ElemSet::from_indices(m, (0..m).filter(|&k| self.leq(i, map[k]))))
            .collect();
        let ids = map.iter().map(|&i| self.ids[i]).collect();
        let labels = map.iter().map(|&i| self.labels[i].clone()).collect();
        (Poset::from_up_rows(ids, labels, up), map)
    }

    pub fn relation_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.leq(i, j)).collect())
            .collect()
    }

    /// Lexicographic sum of `parts[x]` along `self`.
    ///
    /// The carrier is ordered by `(x, y)` and receives fresh ids `0..`;
    /// labels are `"<x>.<y>"` built from the component names.
    pub fn lex_sum(&self, parts: &[Poset]) -> Result<Poset> {
        if parts.len() != self.len() {
            return Err(Error::Precondition(format!(
                "lexicographic sum needs {} parts, got {}",
                self.len(),
                parts.len()
            )));
        }
        let pairs: Vec<(usize, usize)> = parts
            .iter()
            .enumerate()
            .flat_map(|(x, q)| (0..q.len()).map(move |y| (x, y)))
            .collect();
        let rel: Vec<Vec<bool>> = pairs
            .iter()
            .map(|&(x, y)| {
                pairs
                    .iter()
                    .map(|&(x2, y2)| self.lt(x, x2) || (x == x2 && parts[x].leq(y, y2)))
                    .collect()
            })
            .collect();
        let labels = pairs
            .iter()
            .map(|&(x, y)| Some(format!("{}.{}", self.name(x), parts[x].name(y))))
            .collect();
        Poset::validate_labeled(&rel, (0..pairs.len() as u64).collect(), labels)
    }

    /// Number of adjacent pairs `x ≺ y` in the chain `q` (no member of `q`
    /// strictly between them).
    pub fn density_defect(&self, q: &ElemSet) -> Result<usize> {
        self.check_subset(q)?;
        if !self.is_chain(q) {
            return Err(Error::Precondition("subset is not a chain".into()));
        }
        let mut count = 0;
        for x in q.iter() {
            for y in q.iter() {
                if self.lt(x, y) && !q.iter().any(|z| self.lt(x, z) && self.lt(z, y)) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Hasse diagram edges `(lower, upper)`, sorted by index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if x != y && !self.up[x].iter().any(|z| z != x && z != y && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Reflexive-transitive closure in place.
pub(crate) fn warshall(rel: &mut [Vec<bool>]) {
    let n = rel.len();
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                for j in 0..n {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
}
