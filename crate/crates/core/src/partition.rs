//! Equivalence relations as canonical block labellings, and plain binary
//! relations as dense boolean matrices.

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;

/// An equivalence relation on `0..n`, stored as a restricted growth string:
/// `block[x]` is the number of the block of `x`, blocks numbered by first
/// occurrence. Two partitions are equal iff their vectors are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition { block: (0..n).collect() }
    }

    pub fn indiscrete(n: usize) -> Self {
        Partition { block: vec![0; n] }
    }

    /// Canonicalizes an arbitrary block labelling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renum = BTreeMap::new();
        let mut block = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = renum.len();
            block.push(*renum.entry(l).or_insert(next));
        }
        Partition { block }
    }

    /// Smallest equivalence containing the given pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        Self::from_union_find(&uf, n)
    }

    pub(crate) fn from_union_find(uf: &UnionFind<usize>, n: usize) -> Self {
        let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Self::from_labels(&labels)
    }

    /// Builds a partition from a list of blocks covering `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, members) in blocks.iter().enumerate() {
            for &x in members {
                if x >= n || labels[x] != usize::MAX {
                    return None;
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return None;
        }
        Some(Self::from_labels(&labels))
    }

    pub fn size(&self) -> usize {
        self.block.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.block[a] == self.block[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    /// Blocks in canonical order (by least member), each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_indiscrete(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Containment as relations: every block of `self` lies inside a block of `other`.
    pub fn le(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (x, &b) in self.block.iter().enumerate() {
            let o = other.block[x];
            if image[b] == usize::MAX {
                image[b] = o;
            } else if image[b] != o {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let n = self.size();
        let mut renum = BTreeMap::new();
        let mut block = Vec::with_capacity(n);
        for x in 0..n {
            let key = (self.block[x], other.block[x]);
            let next = renum.len();
            block.push(*renum.entry(key).or_insert(next));
        }
        Partition { block }
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for x in 0..n {
                let b = p.block[x];
                if first[b] == usize::MAX {
                    first[b] = x;
                } else {
                    uf.union(first[b], x);
                }
            }
        }
        Self::from_union_find(&uf, n)
    }

    pub fn to_relation(&self) -> Relation {
        let n = self.size();
        let mut r = Relation::empty(n);
        for a in 0..n {
            for b in 0..n {
                if self.same(a, b) {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    /// Pairs `(a, b)` with `a < b` that generate this partition (each
    /// member linked to the least element of its block).
    pub fn spanning_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for blk in self.blocks() {
            for &x in &blk[1..] {
                out.push((blk[0], x));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", parts.join(" | "))
    }
}

/// A binary relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        Relation { n, bits: vec![true; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let slot = &mut self.bits[a * self.n + b];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(move |(k, _)| (k / n, k % n))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// Some `(a, b, c)` with `a R b`, `b R c` but not `a R c`.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        for (a, b) in self.pairs() {
            for c in 0..self.n {
                if self.contains(b, c) && !self.contains(a, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    pub fn to_partition(&self) -> Option<Partition> {
        if !self.is_equivalence() {
            return None;
        }
        Some(Partition::from_pairs(self.n, self.pairs()))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect();
        Relation { n: self.n, bits }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a && b).collect();
        Relation { n: self.n, bits }
    }

    /// Relational product: `a (R∘S) c` iff `a R b` and `b S c` for some `b`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let n = self.n;
        let mut out = Relation::empty(n);
        for (a, b) in self.pairs() {
            for c in 0..n {
                if other.contains(b, c) {
                    out.insert(a, c);
                }
            }
        }
        out
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.pairs().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", ps.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[5, 3, 5, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn meet_and_join() {
        let a = Partition::from_pairs(4, [(0, 1)]);
        let b = Partition::from_pairs(4, [(1, 2)]);
        assert_eq!(a.join(&b), Partition::from_pairs(4, [(0, 1), (1, 2)]));
        assert!(a.meet(&b).is_discrete());
        assert!(a.le(&a.join(&b)));
        assert!(!a.join(&b).le(&a));
    }

    #[test]
    fn relation_product_is_not_commutative() {
        let r = Relation::from_pairs(3, [(0, 1)]);
        let s = Relation::from_pairs(3, [(1, 2)]);
        assert!(r.compose(&s).contains(0, 2));
        assert!(s.compose(&r).is_empty());
    }

    #[test]
    fn equivalence_round_trip() {
        let p = Partition::from_pairs(5, [(0, 3), (3, 4)]);
        assert_eq!(p.to_relation().to_partition(), Some(p));
        assert_eq!(Relation::from_pairs(2, [(0, 1)]).to_partition(), None);
    }
}
