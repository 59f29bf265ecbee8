//! Płonka sums of direct systems, partition functions, and recovery of a
//! direct system from a partition function.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{FiniteAlgebra, Tuples};
use crate::direct_system::{validate_system, DirectSystem};
use crate::error::{Diagnostic, Error, Result};
use crate::semilattice::{validate_semilattice, JoinSemilattice};
use crate::term::{Compiled, Term};

/// A composed algebra together with the system it came from.
///
/// Global elements are numbered fiber by fiber in index order, and by local
/// order inside a fiber. `locate[g] = (i, a)` and `place[i][a] = g` are
/// inverse bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlonkaSum {
    pub algebra: FiniteAlgebra,
    pub origin: DirectSystem,
    pub locate: Vec<(usize, usize)>,
    pub place: Vec<Vec<usize>>,
}

impl PlonkaSum {
    pub fn fiber_of(&self, g: usize) -> usize {
        self.locate[g].0
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }
}

fn global_labels(d: &DirectSystem) -> Vec<String> {
    let all: Vec<&String> = d.fibers.iter().flat_map(|f| f.labels()).collect();
    let distinct: BTreeSet<&String> = all.iter().copied().collect();
    if distinct.len() == all.len() {
        all.into_iter().cloned().collect()
    } else {
        d.fibers
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.labels().iter().map(move |l| format!("{l}@{i}")))
            .collect()
    }
}

/// The Płonka sum of a valid system. Element labels are the fiber labels
/// when they are globally distinct, and `label@i` otherwise.
pub fn compose(d: &DirectSystem) -> Result<PlonkaSum> {
    let diags = validate_system(d);
    if !diags.is_empty() {
        return Err(Error::InvalidSystem(diags));
    }
    let mut place = Vec::with_capacity(d.fibers.len());
    let mut locate = Vec::new();
    for (i, f) in d.fibers.iter().enumerate() {
        place.push((locate.len()..locate.len() + f.size()).collect::<Vec<_>>());
        locate.extend((0..f.size()).map(|a| (i, a)));
    }
    let sig = d.fibers[0].signature().clone();
    let least = d.index.least();
    let algebra = FiniteAlgebra::from_fn(sig, global_labels(d), |op, args| {
        if args.is_empty() {
            let l = least.expect("validated: constants imply a least index");
            return place[l][d.fibers[l].constant(op)];
        }
        let j = d.index.join_all(args.iter().map(|&g| locate[g].0)).expect("nonempty");
        let local: Vec<usize> = args
            .iter()
            .map(|&g| {
                let (i, a) = locate[g];
                d.transitions[&(i, j)][a]
            })
            .collect();
        place[j][d.fibers[j].apply(op, &local)]
    })?;
    Ok(PlonkaSum { algebra, origin: d.clone(), locate, place })
}

/// A binary operation on an algebra's carrier, stored as an `n × n` table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionFunction {
    size: usize,
    table: Vec<usize>,
}

impl PartitionFunction {
    pub fn from_table(size: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != size * size || table.iter().any(|&v| v >= size) {
            return Err(Error::ShapeMismatch(format!("a binary table on {size} elements needs {} entries in range", size * size)));
        }
        Ok(PartitionFunction { size, table })
    }

    /// Evaluates a term in the variables `x` (left) and `y` (right).
    pub fn from_term(alg: &FiniteAlgebra, term: &Term) -> Result<Self> {
        let vars = ["x".to_string(), "y".to_string()];
        let c = Compiled::new(term, alg.signature(), &vars)?;
        let n = alg.size();
        let table = (0..n * n).map(|k| c.eval(alg, &[k / n, k % n])).collect();
        Ok(PartitionFunction { size: n, table })
    }

    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `b ⊙ a1 ⊙ … ⊙ an`, bracketed to the left.
    fn fold(&self, b: usize, items: &[usize]) -> usize {
        items.iter().fold(b, |acc, &a| self.apply(acc, a))
    }
}

/// Failures of the six partition-function laws, first witness of each.
/// The constant law is only checked when the signature has constants.
pub fn check_partition_function(alg: &FiniteAlgebra, pf: &PartitionFunction) -> Vec<Diagnostic> {
    let n = alg.size();
    let mut out = Vec::new();
    if pf.size() != n {
        out.push(Diagnostic::new("shape", format!("table is on {} elements, algebra has {n}", pf.size())));
        return out;
    }
    let l = |x: usize| alg.label(x).to_string();
    if let Some(a) = (0..n).find(|&a| pf.apply(a, a) != a) {
        out.push(Diagnostic::new("idempotence", format!("a = {}", l(a))));
    }
    let triples = || Tuples::new(n, 3);
    if let Some(t) = triples().find(|t| pf.apply(t[0], pf.apply(t[1], t[2])) != pf.apply(pf.apply(t[0], t[1]), t[2])) {
        out.push(Diagnostic::new("associativity", format!("(a,b,c) = ({},{},{})", l(t[0]), l(t[1]), l(t[2]))));
    }
    if let Some(t) = triples().find(|t| pf.apply(t[0], pf.apply(t[1], t[2])) != pf.apply(t[0], pf.apply(t[2], t[1]))) {
        out.push(Diagnostic::new("right commutativity", format!("(a,b,c) = ({},{},{})", l(t[0]), l(t[1]), l(t[2]))));
    }
    'distributivity: for (k, op) in alg.signature().ops().iter().enumerate() {
        if op.arity == 0 {
            continue;
        }
        for args in Tuples::new(n, op.arity) {
            for b in 0..n {
                let lhs = pf.apply(alg.apply(k, &args), b);
                let moved: Vec<usize> = args.iter().map(|&a| pf.apply(a, b)).collect();
                if lhs != alg.apply(k, &moved) {
                    let shown: Vec<String> = args.iter().map(|&a| l(a)).collect();
                    out.push(Diagnostic::new("right distributivity", format!("{}({}) ⊙ {}", op.name, shown.join(","), l(b))));
                    break 'distributivity;
                }
            }
        }
    }
    'absorption: for (k, op) in alg.signature().ops().iter().enumerate() {
        if op.arity == 0 {
            continue;
        }
        for args in Tuples::new(n, op.arity) {
            let v = alg.apply(k, &args);
            for b in 0..n {
                if pf.apply(b, v) != pf.fold(b, &args) {
                    let shown: Vec<String> = args.iter().map(|&a| l(a)).collect();
                    out.push(Diagnostic::new("left absorption", format!("{} ⊙ {}({})", l(b), op.name, shown.join(","))));
                    break 'absorption;
                }
            }
        }
    }
    'constants: for c in alg.signature().constants() {
        let cv = alg.constant(c);
        for a in 0..n {
            if pf.apply(a, cv) != a {
                out.push(Diagnostic::new("constant absorption", format!("{} ⊙ {}", l(a), alg.signature().ops()[c].name)));
                break 'constants;
            }
        }
    }
    out
}

/// `a ⊙ b = p_{i, i∨j}(a)` for `a ∈ A_i`, `b ∈ A_j`.
pub fn induced_partition_function(ps: &PlonkaSum) -> PartitionFunction {
    let n = ps.size();
    let d = &ps.origin;
    let table = (0..n * n)
        .map(|k| {
            let ((i, a), (j, _)) = (ps.locate[k / n], ps.locate[k % n]);
            let m = d.index.join(i, j);
            ps.place[m][d.transitions[&(i, m)][a]]
        })
        .collect();
    PartitionFunction { size: n, table }
}

/// Recovers the direct system encoded by a partition function.
///
/// Blocks are numbered by their least element; inside a block, elements
/// keep their original relative order. The returned sum keeps `alg` itself
/// as its algebra, with `locate`/`place` describing the blocks.
pub fn decompose(alg: &FiniteAlgebra, pf: &PartitionFunction) -> Result<PlonkaSum> {
    let diags = check_partition_function(alg, pf);
    if !diags.is_empty() {
        return Err(Error::NotAPartitionFunction(diags));
    }
    let n = alg.size();
    let same = |a: usize, b: usize| pf.apply(a, b) == a && pf.apply(b, a) == b;
    let mut block_of = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if block_of[a] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let members: Vec<usize> = (a..n).filter(|&b| block_of[b] == usize::MAX && same(a, b)).collect();
        for &b in &members {
            block_of[b] = id;
        }
        blocks.push(members);
    }
    let inconsistent = |msg: String| Error::InconsistentTransitions(msg);
    for blk in &blocks {
        for &a in blk {
            for &b in blk {
                if !same(a, b) {
                    return Err(inconsistent(format!("blocks are not an equivalence at ({},{})", alg.label(a), alg.label(b))));
                }
            }
        }
    }
    let m = blocks.len();
    // Join of blocks: a ⊙ b lies in the block of i ∨ j.
    let mut join = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            let v = block_of[pf.apply(blocks[i][0], blocks[j][0])];
            for &a in &blocks[i] {
                for &b in &blocks[j] {
                    if block_of[pf.apply(a, b)] != v {
                        return Err(inconsistent(format!("{} ⊙ {} leaves block {v}", alg.label(a), alg.label(b))));
                    }
                }
            }
            join[i * m + j] = v;
        }
    }
    let constants: Vec<usize> = alg.signature().constants().collect();
    let least = if let Some(&c) = constants.first() {
        Some(block_of[alg.constant(c)])
    } else {
        None
    };
    let mut index = JoinSemilattice::new(m, join, least);
    if least.is_none() {
        let l = index.find_least();
        index = index.with_least(l);
    }
    let diags = validate_semilattice(&index);
    if !diags.is_empty() {
        return Err(inconsistent(format!("recovered index is not a semilattice: {}", diags[0])));
    }
    // The order read from the join must agree with "b ⊙ a = b for some a ∈ A_i, b ∈ A_j".
    for i in 0..m {
        for j in 0..m {
            let witnessed = blocks[i].iter().any(|&a| blocks[j].iter().any(|&b| pf.apply(b, a) == b));
            if witnessed != index.leq(i, j) {
                return Err(inconsistent(format!("order between blocks {i} and {j} disagrees with the join")));
            }
        }
    }
    let mut local = vec![0; n];
    for blk in &blocks {
        for (pos, &a) in blk.iter().enumerate() {
            local[a] = pos;
        }
    }
    let mut fibers = Vec::with_capacity(m);
    for (i, blk) in blocks.iter().enumerate() {
        let labels = blk.iter().map(|&a| alg.label(a).to_string()).collect();
        let mut escape = None;
        let fiber = FiniteAlgebra::from_fn(alg.signature().clone(), labels, |op, args| {
            let v = if args.is_empty() {
                // Constants of a fiber are the images of the global constants.
                let vals: BTreeSet<usize> = blk.iter().map(|&b| pf.apply(alg.constant(op), b)).collect();
                if vals.len() != 1 {
                    escape.get_or_insert(format!("constant {} has several images in block {i}", alg.signature().ops()[op].name));
                }
                *vals.iter().next().unwrap()
            } else {
                let global: Vec<usize> = args.iter().map(|&a| blk[a]).collect();
                alg.apply(op, &global)
            };
            if block_of[v] != i {
                escape.get_or_insert(format!("block {i} is not closed under {}", alg.signature().ops()[op].name));
                return 0;
            }
            local[v]
        })?;
        if let Some(msg) = escape {
            return Err(inconsistent(msg));
        }
        fibers.push(fiber);
    }
    let mut transitions = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            if !index.leq(i, j) {
                continue;
            }
            let reference = blocks[j][0];
            let mut map = Vec::with_capacity(blocks[i].len());
            for &x in &blocks[i] {
                let v = pf.apply(x, reference);
                for &b in &blocks[j] {
                    if pf.apply(x, b) != v {
                        return Err(inconsistent(format!(
                            "p({i},{j}) depends on the chosen element: {} ⊙ {} ≠ {} ⊙ {}",
                            alg.label(x),
                            alg.label(reference),
                            alg.label(x),
                            alg.label(b)
                        )));
                    }
                }
                if block_of[v] != j {
                    return Err(inconsistent(format!("{} ⊙ {} is not in block {j}", alg.label(x), alg.label(reference))));
                }
                map.push(local[v]);
            }
            transitions.insert((i, j), map);
        }
    }
    let system = DirectSystem::new(index, fibers, transitions);
    let diags = validate_system(&system);
    if !diags.is_empty() {
        return Err(Error::InvalidSystem(diags));
    }
    let place: Vec<Vec<usize>> = blocks.clone();
    let locate: Vec<(usize, usize)> = (0..n).map(|a| (block_of[a], local[a])).collect();
    // The recovered system must rebuild the original operations exactly.
    let rebuilt = compose(&system)?;
    for (k, op) in alg.signature().ops().iter().enumerate() {
        for args in Tuples::new(n, op.arity) {
            let moved: Vec<usize> = args.iter().map(|&a| rebuilt.place[locate[a].0][locate[a].1]).collect();
            let (bi, ba) = rebuilt.locate[rebuilt.algebra.apply(k, &moved)];
            if place[bi][ba] != alg.apply(k, &args) {
                return Err(inconsistent(format!("the recovered system does not rebuild {}", op.name)));
            }
        }
    }
    Ok(PlonkaSum { algebra: alg.clone(), origin: system, locate, place })
}

/// Tries each candidate binary term (in `x`, `y`) in order and returns the
/// first whose table is a partition function.
pub fn find_partition_function(alg: &FiniteAlgebra, candidates: &[Term]) -> Option<(Term, PartitionFunction)> {
    candidates.iter().find_map(|t| {
        let pf = PartitionFunction::from_term(alg, t).ok()?;
        check_partition_function(alg, &pf).is_empty().then(|| (t.clone(), pf))
    })
}

/// Checks that a labelling of elements by index values presents `alg` as a
/// semilattice of subalgebras over `order`: the least block is a
/// subalgebra, and every operation lands in the block of the join of its
/// arguments' blocks.
pub fn check_semilattice_of_subalgebras(alg: &FiniteAlgebra, blocks: &[usize], order: &JoinSemilattice) -> Result<bool> {
    let n = alg.size();
    let m = order.size();
    if blocks.len() != n || blocks.iter().any(|&b| b >= m) {
        return Err(Error::ShapeMismatch(format!("need one index in 0..{m} per element, got {} entries", blocks.len())));
    }
    let used: BTreeSet<usize> = blocks.iter().copied().collect();
    if used.len() != m {
        return Err(Error::ShapeMismatch(format!("{} blocks used for an index of size {m}", used.len())));
    }
    if !validate_semilattice(order).is_empty() {
        return Err(Error::ShapeMismatch("the order is not a join-semilattice".into()));
    }
    for c in alg.signature().constants() {
        if Some(blocks[alg.constant(c)]) != order.least() {
            return Ok(false);
        }
    }
    for (k, op) in alg.signature().ops().iter().enumerate() {
        if op.arity == 0 {
            continue;
        }
        for args in Tuples::new(n, op.arity) {
            let j = order.join_all(args.iter().map(|&a| blocks[a])).unwrap();
            if blocks[alg.apply(k, &args)] != j {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::term::parse_term;

    fn group(n: usize) -> FiniteAlgebra {
        let sig = Signature::new([("mul", 2), ("inv", 1)]).unwrap();
        FiniteAlgebra::from_fn(sig, (0..n).map(|i| format!("g{n}_{i}")).collect(), |op, a| match op {
            0 => (a[0] + a[1]) % n,
            _ => (n - a[0]) % n,
        })
        .unwrap()
    }

    fn z2_over_z4() -> DirectSystem {
        DirectSystem::from_generating_maps(
            JoinSemilattice::chain(2),
            vec![group(4), group(2)],
            BTreeMap::from([((0, 1), vec![0, 1, 0, 1])]),
        )
    }

    #[test]
    fn compose_routes_through_the_join() {
        let ps = compose(&z2_over_z4()).unwrap();
        assert_eq!(ps.size(), 6);
        // g4_1 · g2_1 = p(g4_1) + g2_1 = 1 + 1 = 0 in Z2.
        let a = ps.algebra.element("g4_1").unwrap();
        let b = ps.algebra.element("g2_1").unwrap();
        assert_eq!(ps.algebra.label(ps.algebra.apply(0, &[a, b])), "g2_0");
    }

    #[test]
    fn clifford_term_is_the_induced_partition_function() {
        let ps = compose(&z2_over_z4()).unwrap();
        let t = parse_term("(mul (mul x y) (inv y))").unwrap();
        let pf = PartitionFunction::from_term(&ps.algebra, &t).unwrap();
        assert!(check_partition_function(&ps.algebra, &pf).is_empty());
        assert_eq!(pf, induced_partition_function(&ps));
    }

    #[test]
    fn decompose_inverts_compose() {
        let d = z2_over_z4();
        let ps = compose(&d).unwrap();
        let back = decompose(&ps.algebra, &induced_partition_function(&ps)).unwrap();
        assert_eq!(back.origin, d);
        assert_eq!(compose(&back.origin).unwrap().algebra, ps.algebra);
    }

    #[test]
    fn first_projection_gives_the_one_fiber_representation() {
        let ps = compose(&z2_over_z4()).unwrap();
        let first = PartitionFunction::from_term(&ps.algebra, &parse_term("x").unwrap()).unwrap();
        let whole = decompose(&ps.algebra, &first).unwrap();
        assert_eq!(whole.origin.index.size(), 1);
        assert_eq!(whole.origin.fibers[0], ps.algebra);
        let second = PartitionFunction::from_term(&ps.algebra, &parse_term("y").unwrap()).unwrap();
        let d = check_partition_function(&ps.algebra, &second);
        assert!(d.iter().any(|x| x.law == "right distributivity"));
        assert!(matches!(decompose(&ps.algebra, &second), Err(Error::NotAPartitionFunction(_))));
    }

    #[test]
    fn search_finds_a_partition_function() {
        let ps = compose(&z2_over_z4()).unwrap();
        let cands = ["(mul x y)", "(mul (mul x y) (inv y))"].map(|s| parse_term(s).unwrap());
        let (t, _) = find_partition_function(&ps.algebra, &cands).unwrap();
        assert_eq!(t.to_string(), "(mul (mul x y) (inv y))");
    }

    #[test]
    fn semilattice_of_subalgebras() {
        let ps = compose(&z2_over_z4()).unwrap();
        let blocks: Vec<usize> = ps.locate.iter().map(|&(i, _)| i).collect();
        assert!(check_semilattice_of_subalgebras(&ps.algebra, &blocks, &JoinSemilattice::chain(2)).unwrap());
        let mut wrong = blocks.clone();
        wrong.swap(0, 5);
        assert!(!check_semilattice_of_subalgebras(&ps.algebra, &wrong, &JoinSemilattice::chain(2)).unwrap());
        assert!(check_semilattice_of_subalgebras(&ps.algebra, &blocks[..3], &JoinSemilattice::chain(2)).is_err());
    }

    #[test]
    fn invalid_system_is_refused() {
        let mut d = z2_over_z4();
        d.transitions.insert((0, 1), vec![0, 1, 1, 1]);
        assert!(matches!(compose(&d), Err(Error::InvalidSystem(_))));
    }
}
