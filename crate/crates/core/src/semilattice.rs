//! Finite join-semilattices used as index sets, and their congruences.

use std::collections::BTreeSet;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::congruence;
use crate::error::{Diagnostic, Error, Result};
use crate::partition::{Partition, Relation};

/// Default bound on the size of semilattices whose congruences are enumerated.
pub const CONGRUENCE_CAP: usize = 10;

pub type SemilatticeCongruence = Partition;
pub type BinaryIndexRelation = Relation;

/// A join table on `0..size`. The order is always derived from the join.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JoinSemilattice {
    size: usize,
    join: Vec<usize>,
    least: Option<usize>,
}

impl JoinSemilattice {
    /// Unchecked constructor; see [`validate_semilattice`].
    pub fn new(size: usize, join: Vec<usize>, least: Option<usize>) -> Self {
        JoinSemilattice { size, join, least }
    }

    pub fn from_rows(rows: &[Vec<usize>], least: Option<usize>) -> Self {
        Self::new(rows.len(), rows.concat(), least)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let join = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        Self::new(n, join, if n > 0 { Some(0) } else { None })
    }

    /// Bottom 0, incomparable atoms 1 and 2, top 3.
    pub fn diamond() -> Self {
        Self::from_rows(
            &[vec![0, 1, 2, 3], vec![1, 1, 3, 3], vec![2, 3, 2, 3], vec![3, 3, 3, 3]],
            Some(0),
        )
    }

    /// Two incomparable elements 0 and 1 below 2; no least element.
    pub fn vee() -> Self {
        Self::from_rows(&[vec![0, 2, 2], vec![2, 1, 2], vec![2, 2, 2]], None)
    }

    /// All subsets of an `n`-set, element = bitmask, join = union.
    pub fn powerset(n: usize) -> Self {
        let m = 1usize << n;
        let join = (0..m * m).map(|k| (k / m) | (k % m)).collect();
        Self::new(m, join, Some(0))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn least(&self) -> Option<usize> {
        self.least
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.size + j]
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.join.chunks(self.size.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        items.into_iter().reduce(|a, b| self.join(a, b))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.join(i, j) == j
    }

    /// The element below every other, whether or not it is declared.
    pub fn find_least(&self) -> Option<usize> {
        (0..self.size).find(|&l| (0..self.size).all(|i| self.leq(l, i)))
    }

    pub fn with_least(mut self, least: Option<usize>) -> Self {
        self.least = least;
        self
    }

    pub fn is_chain(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// Cover pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let lt = |a: usize, b: usize| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The semilattice as a one-operation algebra, for congruence machinery.
    pub fn to_algebra(&self) -> FiniteAlgebra {
        let sig = Signature::new([("join", 2)]).expect("static signature");
        let labels = (0..self.size).map(|i| i.to_string()).collect();
        FiniteAlgebra::from_fn(sig, labels, |_, a| self.join(a[0], a[1])).expect("valid join table")
    }

    /// Quotient by a congruence; element `b` is block `b` in canonical order.
    pub fn quotient(&self, c: &Partition) -> JoinSemilattice {
        let reps: Vec<usize> = c.blocks().iter().map(|b| b[0]).collect();
        let m = reps.len();
        let join = (0..m * m).map(|k| c.block_of(self.join(reps[k / m], reps[k % m]))).collect();
        JoinSemilattice::new(m, join, self.least.map(|l| c.block_of(l)))
    }
}

/// Every failure of the semilattice laws, each with a witness.
pub fn validate_semilattice(s: &JoinSemilattice) -> Vec<Diagnostic> {
    let n = s.size;
    let mut out = Vec::new();
    if n == 0 {
        out.push(Diagnostic::new("nonempty", "the index set is empty"));
        return out;
    }
    if s.join.len() != n * n {
        out.push(Diagnostic::new("shape", format!("join table has {} entries, expected {}", s.join.len(), n * n)));
        return out;
    }
    if let Some(bad) = s.join.iter().find(|&&v| v >= n) {
        out.push(Diagnostic::new("range", format!("join table contains {bad}, outside 0..{n}")));
        return out;
    }
    if let Some(i) = (0..n).find(|&i| s.join(i, i) != i) {
        out.push(Diagnostic::new("idempotence", format!("{i} ∨ {i} = {}", s.join(i, i))));
    }
    'comm: for i in 0..n {
        for j in 0..n {
            if s.join(i, j) != s.join(j, i) {
                out.push(Diagnostic::new("commutativity", format!("{i} ∨ {j} ≠ {j} ∨ {i}")));
                break 'comm;
            }
        }
    }
    'assoc: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if s.join(s.join(i, j), k) != s.join(i, s.join(j, k)) {
                    out.push(Diagnostic::new("associativity", format!("({i} ∨ {j}) ∨ {k} ≠ {i} ∨ ({j} ∨ {k})")));
                    break 'assoc;
                }
            }
        }
    }
    if let Some(l) = s.least {
        if l >= n {
            out.push(Diagnostic::new("least", format!("declared least {l} outside 0..{n}")));
        } else if let Some(i) = (0..n).find(|&i| s.join(l, i) != i) {
            out.push(Diagnostic::new("least", format!("{l} ∨ {i} = {} ≠ {i}", s.join(l, i))));
        }
    }
    out
}

pub fn leq(s: &JoinSemilattice, i: usize, j: usize) -> bool {
    s.leq(i, j)
}

fn is_compatible(s: &JoinSemilattice, p: &Partition) -> bool {
    let n = s.size;
    let blocks = p.blocks();
    for b in &blocks {
        for w in b.windows(2) {
            let (i, j) = (w[0], w[1]);
            if (0..n).any(|k| !p.same(s.join(i, k), s.join(j, k))) {
                return false;
            }
        }
    }
    true
}

fn for_each_rgs(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(pos: usize, max: usize, cur: &mut Vec<usize>, n: usize, f: &mut impl FnMut(&[usize])) {
        if pos == n {
            f(cur);
            return;
        }
        let top = if pos == 0 { 0 } else { max + 1 };
        for b in 0..=top {
            cur.push(b);
            go(pos + 1, max.max(b), cur, n, f);
            cur.pop();
        }
    }
    go(0, 0, &mut Vec::with_capacity(n), n, f);
}

/// Every congruence, by filtering all set partitions in restricted growth
/// string order. The result is in that (lexicographic) order.
pub fn all_semilattice_congruences(s: &JoinSemilattice, cap: usize) -> Result<Vec<SemilatticeCongruence>> {
    if s.size > cap {
        return Err(Error::SizeCap { what: "index semilattice".into(), size: s.size, cap });
    }
    let mut out = Vec::new();
    for_each_rgs(s.size, &mut |rgs| {
        let p = Partition::from_labels(rgs);
        if is_compatible(s, &p) {
            out.push(p);
        }
    });
    Ok(out)
}

/// Least congruence containing `r`.
pub fn cg_semilattice(s: &JoinSemilattice, r: &Relation) -> SemilatticeCongruence {
    congruence::cg(&s.to_algebra(), r.pairs())
}

/// Every join-compatible partition containing `r`, intersected. Exhaustive,
/// so only for oracles.
pub fn cg_semilattice_by_intersection(s: &JoinSemilattice, r: &Relation) -> Result<SemilatticeCongruence> {
    let mut acc = Partition::indiscrete(s.size);
    for c in all_semilattice_congruences(s, CONGRUENCE_CAP)? {
        if r.pairs().all(|(a, b)| c.same(a, b)) {
            acc = acc.meet(&c);
        }
    }
    Ok(acc)
}

/// `(i,j), (j,k) ∈ r` implies `(i, i∨k) ∈ r`.
pub fn is_upper_transitive(s: &JoinSemilattice, r: &Relation) -> bool {
    upper_transitivity_witness(s, r).is_none()
}

pub fn upper_transitivity_witness(s: &JoinSemilattice, r: &Relation) -> Option<(usize, usize, usize)> {
    for (i, j) in r.pairs() {
        for k in 0..s.size {
            if r.contains(j, k) && !r.contains(i, s.join(i, k)) {
                return Some((i, j, k));
            }
        }
    }
    None
}

/// `(i,j), (k,l) ∈ r` implies `(i∨k, j∨l) ∈ r`.
pub fn is_join_closed(s: &JoinSemilattice, r: &Relation) -> bool {
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    pairs.iter().all(|&(i, j)| pairs.iter().all(|&(k, l)| r.contains(s.join(i, k), s.join(j, l))))
}

/// Least reflexive, symmetric, join-closed, upper-transitive relation
/// containing `r`.
pub fn closure_refl_symm_join_ut(s: &JoinSemilattice, r: &Relation) -> Relation {
    let n = s.size;
    let mut out = r.union(&Relation::identity(n));
    loop {
        let mut grew = false;
        let pairs: Vec<(usize, usize)> = out.pairs().collect();
        for &(i, j) in &pairs {
            grew |= out.insert(j, i);
            for &(k, l) in &pairs {
                grew |= out.insert(s.join(i, k), s.join(j, l));
            }
            for k in 0..n {
                if out.contains(j, k) {
                    grew |= out.insert(i, s.join(i, k));
                }
            }
        }
        if !grew {
            return out;
        }
    }
}

/// Pairs `(i, j)` such that both `i` and `j` are `r`-linked to `i ∨ j`.
/// For a reflexive, symmetric, join-closed, upper-transitive `r` this is a
/// congruence, the least one containing `r`.
pub fn linkage_congruence(s: &JoinSemilattice, r: &Relation) -> Relation {
    let n = s.size;
    let mut out = Relation::empty(n);
    for i in 0..n {
        for j in 0..n {
            let m = s.join(i, j);
            if r.contains(i, m) && r.contains(j, m) {
                out.insert(i, j);
            }
        }
    }
    out
}

/// Elements reachable as joins of nonempty subsets of `gens`, plus the least
/// element for the empty subset when present.
pub fn generated_by(s: &JoinSemilattice, gens: &[usize]) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = s.least.into_iter().collect();
    for mask in 1u32..(1u32 << gens.len()) {
        let pick = (0..gens.len()).filter(|b| mask >> b & 1 == 1).map(|b| gens[b]);
        out.extend(s.join_all(pick));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_shapes_are_valid() {
        for s in [JoinSemilattice::chain(1), JoinSemilattice::chain(4), JoinSemilattice::diamond(), JoinSemilattice::vee(), JoinSemilattice::powerset(3)] {
            assert!(validate_semilattice(&s).is_empty(), "{s:?}");
        }
        assert_eq!(JoinSemilattice::vee().find_least(), None);
    }

    #[test]
    fn detects_broken_tables() {
        let bad = JoinSemilattice::from_rows(&[vec![0, 1], vec![0, 1]], None);
        let d = validate_semilattice(&bad);
        assert_eq!(d[0].law, "commutativity");
        let wrong_least = JoinSemilattice::chain(2).with_least(Some(1));
        assert_eq!(validate_semilattice(&wrong_least)[0].law, "least");
    }

    #[test]
    fn congruence_counts_of_small_shapes() {
        // Chain with n elements: 2^(n-1) congruences (cut points are free).
        for n in 1..=5 {
            let c = all_semilattice_congruences(&JoinSemilattice::chain(n), CONGRUENCE_CAP).unwrap();
            assert_eq!(c.len(), 1 << (n - 1));
        }
        // Diamond: compared against an independent kernel count.
        let d = JoinSemilattice::diamond();
        let brute = for_each_count(&d);
        assert_eq!(all_semilattice_congruences(&d, CONGRUENCE_CAP).unwrap().len(), brute);
        assert!(all_semilattice_congruences(&JoinSemilattice::chain(11), CONGRUENCE_CAP).is_err());
    }

    fn for_each_count(s: &JoinSemilattice) -> usize {
        // Independent count: every labelling into 0..n, keep those whose
        // kernel is compatible, dedupe kernels.
        let n = s.size();
        let mut kernels = BTreeSet::new();
        for labels in crate::algebra::Tuples::new(n, n) {
            let ok = (0..n).all(|i| {
                (0..n).all(|j| {
                    labels[i] != labels[j] || (0..n).all(|k| labels[s.join(i, k)] == labels[s.join(j, k)])
                })
            });
            if ok {
                kernels.insert(Partition::from_labels(&labels));
            }
        }
        kernels.len()
    }

    #[test]
    fn generated_congruence_matches_intersection() {
        let d = JoinSemilattice::diamond();
        for a in 0..4 {
            for b in 0..4 {
                let r = Relation::from_pairs(4, [(a, b)]);
                assert_eq!(cg_semilattice(&d, &r), cg_semilattice_by_intersection(&d, &r).unwrap());
            }
        }
        // Collapsing the two atoms collapses everything above them.
        let c = cg_semilattice(&d, &Relation::from_pairs(4, [(1, 2)]));
        assert_eq!(c, Partition::from_labels(&[0, 1, 1, 1]));
    }

    #[test]
    fn upper_transitivity_and_linkage() {
        let d = JoinSemilattice::diamond();
        let r = Relation::from_pairs(4, [(1, 0), (0, 2)]);
        assert!(!is_upper_transitive(&d, &r));
        let closed = closure_refl_symm_join_ut(&d, &r);
        assert!(is_upper_transitive(&d, &closed) && is_join_closed(&d, &closed) && closed.is_symmetric());
        let c = linkage_congruence(&d, &closed).to_partition().unwrap();
        assert_eq!(c, cg_semilattice(&d, &r));
    }

    #[test]
    fn covers_of_diamond() {
        assert_eq!(JoinSemilattice::diamond().covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(JoinSemilattice::chain(2).covers(), vec![(0, 1)]);
    }

    #[test]
    fn quotient_of_diamond_is_chain() {
        let d = JoinSemilattice::diamond();
        let c = Partition::from_labels(&[0, 1, 0, 1]);
        let q = d.quotient(&c);
        assert_eq!(q, JoinSemilattice::chain(2));
    }
}
