//! Congruences of finite algebras and of Płonka sums: generation,
//! enumeration, the correspondence with system congruences, factor pairs,
//! quotients and subdirect irreducibility.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::algebra::{FiniteAlgebra, Tuples};
use crate::direct_system::{star, validate_system, DirectSystem};
use crate::error::{Diagnostic, Error, Result};
use crate::partition::{Partition, Relation};
use crate::plonka::{compose, PlonkaSum};
use crate::semilattice::{all_semilattice_congruences, cg_semilattice, linkage_congruence};

/// Default bound on carrier size for congruence enumeration.
pub const ALGEBRA_CAP: usize = 12;
/// Bounds for the exhaustive system-congruence enumeration.
pub const SYSTEM_ELEMENT_CAP: usize = 10;
pub const SYSTEM_INDEX_CAP: usize = 4;

pub type AlgebraCongruence = Partition;

/// Least congruence containing the given pairs.
///
/// Each merged pair is pushed through every basic translation
/// `x ↦ f(c1, …, x, …, ck)`; merging continues until nothing new is
/// identified.
pub fn cg(alg: &FiniteAlgebra, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for (a, b) in pairs {
        if uf.union(a, b) {
            queue.push((a, b));
        }
    }
    let ops: Vec<(usize, usize)> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, o)| o.arity > 0)
        .map(|(k, o)| (k, o.arity))
        .collect();
    let mut args = Vec::with_capacity(crate::algebra::MAX_ARITY);
    while let Some((a, b)) = queue.pop() {
        for &(k, arity) in &ops {
            for pos in 0..arity {
                for rest in Tuples::new(n, arity - 1) {
                    args.clear();
                    args.extend_from_slice(&rest[..pos]);
                    args.push(a);
                    args.extend_from_slice(&rest[pos..]);
                    let x = alg.apply(k, &args);
                    args[pos] = b;
                    let y = alg.apply(k, &args);
                    if uf.union(x, y) {
                        queue.push((x, y));
                    }
                }
            }
        }
    }
    Partition::from_union_find(&uf, n)
}

/// Compatibility of an equivalence with every operation.
pub fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
    p.size() == alg.size() && cg(alg, p.spanning_pairs()) == *p
}

fn canonical_sort(list: &mut [Partition]) {
    list.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
}

/// Every congruence, as the join-closure of the principal congruences.
/// Sorted by decreasing number of blocks (Δ first, ∇ last), then by block
/// labelling.
pub fn all_congruences(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<AlgebraCongruence>> {
    let n = alg.size();
    if n > cap {
        return Err(Error::SizeCap { what: "algebra".into(), size: n, cap });
    }
    let mut seen: BTreeSet<Partition> = BTreeSet::new();
    seen.insert(Partition::discrete(n));
    for a in 0..n {
        for b in a + 1..n {
            seen.insert(cg(alg, [(a, b)]));
        }
    }
    let mut list: Vec<Partition> = seen.iter().cloned().collect();
    let mut frontier = list.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for y in &list {
                let j = x.join(y);
                if seen.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        list.extend(next.iter().cloned());
        frontier = next;
    }
    canonical_sort(&mut list);
    Ok(list)
}

/// Restriction of a global congruence to fiber `i`, in local indices.
pub fn pure_fiber(ps: &PlonkaSum, theta: &Partition, i: usize) -> Partition {
    let labels: Vec<usize> = ps.place[i].iter().map(|&g| theta.block_of(g)).collect();
    Partition::from_labels(&labels)
}

/// Index pairs `(i, j)` such that some element of `A_i` is congruent to
/// some element of `A_j`.
pub fn linkage(ps: &PlonkaSum, theta: &Partition) -> Relation {
    let m = ps.origin.index.size();
    let mut out = Relation::empty(m);
    for blk in theta.blocks() {
        let fibers: BTreeSet<usize> = blk.iter().map(|&g| ps.fiber_of(g)).collect();
        for &i in &fibers {
            for &j in &fibers {
                out.insert(i, j);
            }
        }
    }
    out
}

/// How a congruence of a sum sits over the index and the fibers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberData {
    /// Index pairs linked by the congruence.
    pub linkage: Relation,
    /// Pairs `(i, j)` with both `i` and `j` linked to `i ∨ j`.
    pub index_congruence: Relation,
    /// Restriction to each fiber, in local indices.
    pub pure: Vec<Partition>,
    /// For `i ≠ j`, the congruent pairs `(a, b)` with `a ∈ A_i`, `b ∈ A_j`, local indices.
    pub mixed: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

pub fn fibers_of(ps: &PlonkaSum, theta: &Partition) -> FiberData {
    let s = linkage(ps, theta);
    let c = linkage_congruence(&ps.origin.index, &s);
    let m = ps.origin.index.size();
    let pure = (0..m).map(|i| pure_fiber(ps, theta, i)).collect();
    let mut mixed: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for x in 0..ps.size() {
        for y in 0..ps.size() {
            let ((i, a), (j, b)) = (ps.locate[x], ps.locate[y]);
            if i != j && theta.same(x, y) {
                mixed.entry((i, j)).or_default().push((a, b));
            }
        }
    }
    FiberData { linkage: s, index_congruence: c, pure, mixed }
}

/// A congruence of the index paired with one congruence per fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemCongruence {
    pub index: Partition,
    pub fibers: Vec<Partition>,
}

impl SystemCongruence {
    pub fn le(&self, other: &SystemCongruence) -> bool {
        self.index.le(&other.index) && self.fibers.iter().zip(&other.fibers).all(|(a, b)| a.le(b))
    }
}

/// Whether some `a ∈ A_i`, `b ∈ A_j` become related in fiber `i ∨ j`
/// under the given fiber congruences.
fn images_meet(d: &DirectSystem, fibers: &[Partition], i: usize, j: usize) -> bool {
    let m = d.index.join(i, j);
    let left: BTreeSet<usize> = d.transitions[&(i, m)].iter().map(|&x| fibers[m].block_of(x)).collect();
    d.transitions[&(j, m)].iter().any(|&y| left.contains(&fibers[m].block_of(y)))
}

/// Pairs of the index congruence whose fibers meet a common class at their join.
pub fn system_linkage(d: &DirectSystem, sc: &SystemCongruence) -> Relation {
    linkage_under(d, &sc.index, &sc.fibers)
}

fn linkage_under(d: &DirectSystem, c: &Partition, fibers: &[Partition]) -> Relation {
    let n = d.index.size();
    let mut out = Relation::empty(n);
    for i in 0..n {
        for j in 0..n {
            if c.same(i, j) && images_meet(d, fibers, i, j) {
                out.insert(i, j);
            }
        }
    }
    out
}

/// Every failure of the system-congruence conditions.
pub fn validate_system_congruence(d: &DirectSystem, sc: &SystemCongruence) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = d.index.size();
    if sc.index.size() != n || sc.fibers.len() != n {
        out.push(Diagnostic::new("shape", "index partition or fiber list has the wrong size"));
        return out;
    }
    if !is_congruence(&d.index.to_algebra(), &sc.index) {
        out.push(Diagnostic::new("index", format!("{} is not a congruence of the index", sc.index)));
    }
    for (i, (f, p)) in d.fibers.iter().zip(&sc.fibers).enumerate() {
        if p.size() != f.size() || !is_congruence(f, p) {
            out.push(Diagnostic::new("fiber", format!("{p} is not a congruence of fiber {i}")));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let s = system_linkage(d, sc);
    for i in 0..n {
        for j in 0..n {
            let m = d.index.join(i, j);
            let p = &d.transitions[&(i, m)];
            let (ti, tm) = (&sc.fibers[i], &sc.fibers[m]);
            let size = d.fibers[i].size();
            for a in 0..size {
                for b in a + 1..size {
                    let below = ti.same(a, b);
                    let above = tm.same(p[a], p[b]);
                    if below && !above {
                        out.push(Diagnostic::new(
                            "pullback containment",
                            format!("({},{}) related in fiber {i} but not after moving to {m}", d.fibers[i].label(a), d.fibers[i].label(b)),
                        ));
                    } else if above && !below && s.contains(i, j) {
                        out.push(Diagnostic::new(
                            "pullback equality",
                            format!(
                                "linked pair ({i},{j}): ({},{}) related in fiber {m} but not in fiber {i}",
                                d.fibers[i].label(a),
                                d.fibers[i].label(b)
                            ),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Index congruence generated by the linkage, with per-fiber restrictions.
pub fn to_system_congruence(ps: &PlonkaSum, theta: &Partition) -> Result<SystemCongruence> {
    if theta.size() != ps.size() || !is_congruence(&ps.algebra, theta) {
        return Err(Error::InvalidSystemCongruence(format!("{theta} is not a congruence of the sum")));
    }
    let fd = fibers_of(ps, theta);
    let index = fd.index_congruence.to_partition().ok_or_else(|| {
        Error::InvalidSystemCongruence("linked index pairs do not induce an equivalence".into())
    })?;
    Ok(SystemCongruence { index, fibers: fd.pure })
}

/// The union, over linked pairs `(i, j)`, of the pairs `(a, b) ∈ A_i × A_j`
/// whose images at `i ∨ j` are related.
pub fn from_system_congruence(ps: &PlonkaSum, sc: &SystemCongruence) -> Result<Partition> {
    let d = &ps.origin;
    let diags = validate_system_congruence(d, sc);
    if !diags.is_empty() {
        return Err(Error::InvalidSystemCongruence(crate::error::join_diagnostics(&diags)));
    }
    let s = system_linkage(d, sc);
    let mut rel = Relation::empty(ps.size());
    for (i, j) in s.pairs() {
        let m = d.index.join(i, j);
        let (pi, pj) = (&d.transitions[&(i, m)], &d.transitions[&(j, m)]);
        for (a, &x) in pi.iter().enumerate() {
            for (b, &y) in pj.iter().enumerate() {
                if sc.fibers[m].same(x, y) {
                    rel.insert(ps.place[i][a], ps.place[j][b]);
                }
            }
        }
    }
    let theta = rel
        .to_partition()
        .ok_or_else(|| Error::InvalidSystemCongruence("the assembled relation is not an equivalence".into()))?;
    if !is_congruence(&ps.algebra, &theta) {
        return Err(Error::InvalidSystemCongruence("the assembled relation is not compatible".into()));
    }
    Ok(theta)
}

/// All valid system congruences, by brute force over the index congruences
/// and every family of fiber congruences.
pub fn all_system_congruences(d: &DirectSystem, element_cap: usize, index_cap: usize) -> Result<Vec<SystemCongruence>> {
    let total = d.total_size();
    if total > element_cap {
        return Err(Error::SizeCap { what: "system".into(), size: total, cap: element_cap });
    }
    if d.index.size() > index_cap {
        return Err(Error::SizeCap { what: "system index".into(), size: d.index.size(), cap: index_cap });
    }
    let diags = validate_system(d);
    if !diags.is_empty() {
        return Err(Error::InvalidSystem(diags));
    }
    let index_cons = all_semilattice_congruences(&d.index, index_cap)?;
    let fiber_cons: Vec<Vec<Partition>> =
        d.fibers.iter().map(|f| all_congruences(f, element_cap)).collect::<Result<_>>()?;
    let sizes: Vec<usize> = fiber_cons.iter().map(|l| l.len()).collect();
    let mut out = Vec::new();
    for c in &index_cons {
        let mut pick = vec![0; sizes.len()];
        loop {
            let sc = SystemCongruence {
                index: c.clone(),
                fibers: pick.iter().enumerate().map(|(i, &k)| fiber_cons[i][k].clone()).collect(),
            };
            if validate_system_congruence(d, &sc).is_empty() {
                out.push(sc);
            }
            let mut pos = 0;
            while pos < pick.len() {
                pick[pos] += 1;
                if pick[pos] < sizes[pos] {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
            if pos == pick.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// System congruence generated by a relation on the sum, relative to an
/// index congruence `c` that must already link every related pair.
///
/// Each fiber first receives the congruence generated by every related
/// pair pushed up into it; linked index pairs are computed from those
/// congruences; finally a pair of `A_i` is related when it becomes related
/// in some fiber above `i` that is linked to `i`.
pub fn generated_system_congruence(ps: &PlonkaSum, r: &[(usize, usize)], c: &Partition) -> Result<SystemCongruence> {
    let d = &ps.origin;
    let n = d.index.size();
    if c.size() != n {
        return Err(Error::ShapeMismatch("index congruence has the wrong size".into()));
    }
    let mut by_fibers: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(x, y) in r {
        if x >= ps.size() || y >= ps.size() {
            return Err(Error::IndexOutOfRange { index: x.max(y), size: ps.size() });
        }
        let ((u, a), (v, b)) = (ps.locate[x], ps.locate[y]);
        if !c.same(u, v) {
            return Err(Error::PrematureRelation(format!(
                "({},{}) links indices {u} and {v}",
                ps.algebra.label(x),
                ps.algebra.label(y)
            )));
        }
        by_fibers.entry((u, v)).or_default().push((a, b));
    }
    let psi: Vec<Partition> = (0..n)
        .map(|i| {
            let mut seeds = Vec::new();
            for (&(u, v), pairs) in &by_fibers {
                if d.index.leq(u, i) && d.index.leq(v, i) {
                    let (pu, pv) = (&d.transitions[&(u, i)], &d.transitions[&(v, i)]);
                    seeds.extend(pairs.iter().map(|&(a, b)| (pu[a], pv[b])));
                }
            }
            cg(&d.fibers[i], seeds)
        })
        .collect();
    let s = linkage_under(d, c, &psi);
    let fibers = (0..n)
        .map(|i| {
            let size = d.fibers[i].size();
            let mut pairs = Vec::new();
            for k in 0..n {
                if !(d.index.leq(i, k) && s.contains(i, k)) {
                    continue;
                }
                let p = &d.transitions[&(i, k)];
                for a in 0..size {
                    for b in a + 1..size {
                        if psi[k].same(p[a], p[b]) {
                            pairs.push((a, b));
                        }
                    }
                }
            }
            let rel = Relation::from_pairs(size, pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]))
                .union(&Relation::identity(size));
            rel.to_partition().ok_or_else(|| {
                Error::InvalidSystemCongruence(format!("the pairs collected for fiber {i} are not transitive"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemCongruence { index: c.clone(), fibers })
}

/// Congruence of the sum generated by `r`, computed fiberwise.
pub fn cg_plonka(ps: &PlonkaSum, r: &[(usize, usize)]) -> Result<Partition> {
    let m = ps.origin.index.size();
    let s_r = Relation::from_pairs(m, r.iter().map(|&(x, y)| (ps.fiber_of(x), ps.fiber_of(y))));
    let c = cg_semilattice(&ps.origin.index, &s_r);
    let sc = generated_system_congruence(ps, r, &c)?;
    from_system_congruence(ps, &sc)
}

pub fn permutes(a: &Partition, b: &Partition) -> bool {
    let (ra, rb) = (a.to_relation(), b.to_relation());
    ra.compose(&rb) == rb.compose(&ra)
}

/// Meet Δ, join ∇, and the two relational products agree.
pub fn is_factor_pair(a: &Partition, b: &Partition) -> bool {
    a.meet(b).is_discrete() && a.join(b).is_indiscrete() && permutes(a, b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCheck {
    pub factor_pair: bool,
    pub permutable: bool,
    pub index_factor_pair: bool,
    pub fiber_factor_pairs: Vec<bool>,
    /// The factor-pair property agrees with its fiberwise characterization.
    pub holds: bool,
}

pub fn check_factor_theorem(ps: &PlonkaSum, t1: &Partition, t2: &Partition) -> Result<FactorCheck> {
    let s1 = to_system_congruence(ps, t1)?;
    let s2 = to_system_congruence(ps, t2)?;
    let factor_pair = is_factor_pair(t1, t2);
    let permutable = permutes(t1, t2);
    let index_factor_pair = is_factor_pair(&s1.index, &s2.index);
    let fiber_factor_pairs: Vec<bool> = s1.fibers.iter().zip(&s2.fibers).map(|(a, b)| is_factor_pair(a, b)).collect();
    let characterized = permutable && index_factor_pair && fiber_factor_pairs.iter().all(|&x| x);
    Ok(FactorCheck { factor_pair, permutable, index_factor_pair, fiber_factor_pairs, holds: factor_pair == characterized })
}

/// `A/θ` with classes in canonical order, each labelled `[x]` by its least
/// member's label.
pub fn quotient_algebra(alg: &FiniteAlgebra, theta: &Partition) -> Result<FiniteAlgebra> {
    if !is_congruence(alg, theta) {
        return Err(Error::Validation(format!("{theta} is not a congruence")));
    }
    let blocks = theta.blocks();
    let labels = blocks.iter().map(|b| format!("[{}]", alg.label(b[0]))).collect();
    FiniteAlgebra::from_fn(alg.signature().clone(), labels, |op, args| {
        let reps: Vec<usize> = args.iter().map(|&q| blocks[q][0]).collect();
        theta.block_of(alg.apply(op, &reps))
    })
}

/// The direct system whose sum is `A/θ`. The index is the quotient by the
/// index congruence of `θ`; each new fiber collects the classes of the
/// elements lying over one index class. The result is checked against
/// [`quotient_algebra`] before it is returned.
pub fn quotient_plonka(ps: &PlonkaSum, theta: &Partition) -> Result<DirectSystem> {
    let sc = to_system_congruence(ps, theta)?;
    let d = &ps.origin;
    let c = &sc.index;
    let index = d.index.quotient(c);
    let m = index.size();
    let idx_blocks = c.blocks();
    let classes = theta.blocks();
    let fail = |msg: String| Error::InconsistentTransitions(msg);
    // Classes over each index class, in canonical class order.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut class_home = vec![0; classes.len()];
    for (q, cls) in classes.iter().enumerate() {
        let homes: BTreeSet<usize> = cls.iter().map(|&g| c.block_of(ps.fiber_of(g))).collect();
        if homes.len() != 1 {
            return Err(fail(format!("class {q} spans several index classes")));
        }
        let h = *homes.iter().next().unwrap();
        class_home[q] = h;
        members[h].push(q);
    }
    let mut local = vec![0; classes.len()];
    for list in &members {
        for (pos, &q) in list.iter().enumerate() {
            local[q] = pos;
        }
    }
    let qalg = quotient_algebra(&ps.algebra, theta)?;
    let least = d.index.least();
    let mut fibers = Vec::with_capacity(m);
    for h in 0..m {
        let labels = members[h].iter().map(|&q| qalg.label(q).to_string()).collect();
        let mut problem = None;
        let fiber = FiniteAlgebra::from_fn(ps.algebra.signature().clone(), labels, |op, args| {
            let q = if args.is_empty() {
                let l = least.expect("validated system with constants has a least index");
                let cl = d.fibers[l].constant(op);
                let vals: BTreeSet<usize> = idx_blocks[h]
                    .iter()
                    .map(|&k| theta.block_of(ps.place[k][d.transitions[&(l, k)][cl]]))
                    .collect();
                if vals.len() != 1 {
                    problem.get_or_insert(format!("constant {op} has several classes over index class {h}"));
                }
                *vals.iter().next().unwrap()
            } else {
                let qs: Vec<usize> = args.iter().map(|&a| members[h][a]).collect();
                qalg.apply(op, &qs)
            };
            if class_home[q] != h {
                problem.get_or_insert(format!("index class {h} is not closed"));
                return 0;
            }
            local[q]
        })?;
        if let Some(p) = problem {
            return Err(fail(p));
        }
        fibers.push(fiber);
    }
    let mut transitions = BTreeMap::new();
    for h in 0..m {
        for t in 0..m {
            if !index.leq(h, t) {
                continue;
            }
            let mut map = Vec::with_capacity(members[h].len());
            for &q in &members[h] {
                let mut images = BTreeSet::new();
                for &g in &classes[q] {
                    let (j, a) = ps.locate[g];
                    for &k in &idx_blocks[t] {
                        let top = d.index.join(j, k);
                        images.insert(theta.block_of(ps.place[top][d.transitions[&(j, top)][a]]));
                    }
                }
                if images.len() != 1 {
                    return Err(fail(format!("transition {h} → {t} depends on representatives")));
                }
                let img = *images.iter().next().unwrap();
                if class_home[img] != t {
                    return Err(fail(format!("transition {h} → {t} leaves its target fiber")));
                }
                map.push(local[img]);
            }
            transitions.insert((h, t), map);
        }
    }
    let system = DirectSystem::new(index, fibers, transitions);
    let rebuilt = compose(&system)?;
    // Element (h, local) of the rebuilt sum is class members[h][local].
    let to_class: Vec<usize> = rebuilt.locate.iter().map(|&(h, a)| members[h][a]).collect();
    for (k, op) in qalg.signature().ops().iter().enumerate() {
        for args in Tuples::new(rebuilt.size(), op.arity) {
            let qs: Vec<usize> = args.iter().map(|&x| to_class[x]).collect();
            if to_class[rebuilt.algebra.apply(k, &args)] != qalg.apply(k, &qs) {
                return Err(fail(format!("the quotient system does not rebuild {}", op.name)));
            }
        }
    }
    Ok(system)
}

/// Least nontrivial congruence, when the nontrivial congruences have a
/// nontrivial meet. A trivial algebra has none.
pub fn monolith(alg: &FiniteAlgebra, cap: usize) -> Result<Option<Partition>> {
    let all = all_congruences(alg, cap)?;
    let nontrivial: Vec<&Partition> = all.iter().filter(|p| !p.is_discrete()).collect();
    let Some(first) = nontrivial.first() else { return Ok(None) };
    let meet = nontrivial.iter().fold((*first).clone(), |acc, p| acc.meet(p));
    Ok((!meet.is_discrete()).then_some(meet))
}

/// Subdirect irreducibility; trivial algebras are not counted.
pub fn is_subdirectly_irreducible(alg: &FiniteAlgebra, cap: usize) -> Result<bool> {
    Ok(monolith(alg, cap)?.is_some())
}

/// Exactly two congruences.
pub fn is_simple(alg: &FiniteAlgebra, cap: usize) -> Result<bool> {
    Ok(alg.size() > 1 && all_congruences(alg, cap)?.len() == 2)
}

/// An element returned by every non-nullary operation whenever it is one of
/// the arguments.
pub fn has_absorbing_element(alg: &FiniteAlgebra) -> Result<Option<usize>> {
    if alg.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    let n = alg.size();
    Ok((0..n).find(|&z| {
        alg.signature().ops().iter().enumerate().all(|(k, op)| {
            op.arity == 0 || Tuples::new(n, op.arity).filter(|t| t.contains(&z)).all(|t| alg.apply(k, &t) == z)
        })
    }))
}

/// Whether a trivial base algebra may serve as the irreducible algebra
/// below the adjoined point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrivialBase {
    Excluded,
    Admitted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiCheck {
    pub star_irreducible: bool,
    pub base_irreducible: bool,
    pub base_trivial: bool,
    pub absorbing: Option<usize>,
    pub predicted: bool,
    pub holds: bool,
}

/// Compares irreducibility of the sum over `star(b)` with the prediction
/// "b irreducible without an absorbing element", under the given reading
/// of the trivial case.
pub fn check_si_theorem(b: &FiniteAlgebra, reading: TrivialBase, cap: usize) -> Result<SiCheck> {
    let sum = compose(&star(b))?;
    let star_irreducible = is_subdirectly_irreducible(&sum.algebra, cap)?;
    let base_irreducible = is_subdirectly_irreducible(b, cap)?;
    let base_trivial = b.is_trivial();
    let absorbing = if base_trivial { None } else { has_absorbing_element(b)? };
    let predicted = (base_irreducible && absorbing.is_none()) || (base_trivial && reading == TrivialBase::Admitted);
    Ok(SiCheck { star_irreducible, base_irreducible, base_trivial, absorbing, predicted, holds: predicted == star_irreducible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn z(n: usize) -> FiniteAlgebra {
        let sig = Signature::new([("mul", 2), ("inv", 1)]).unwrap();
        FiniteAlgebra::from_fn(sig, (0..n).map(|i| i.to_string()).collect(), |op, a| match op {
            0 => (a[0] + a[1]) % n,
            _ => (n - a[0]) % n,
        })
        .unwrap()
    }

    fn by_filtering(alg: &FiniteAlgebra) -> BTreeSet<Partition> {
        // Every labelling of the carrier whose kernel is compatible.
        let n = alg.size();
        Tuples::new(n, n)
            .map(|l| Partition::from_labels(&l))
            .filter(|p| {
                alg.signature().ops().iter().enumerate().all(|(k, op)| {
                    Tuples::new(n, op.arity).all(|a| {
                        Tuples::new(n, op.arity).all(|b| {
                            !a.iter().zip(&b).all(|(&x, &y)| p.same(x, y)) || p.same(alg.apply(k, &a), alg.apply(k, &b))
                        })
                    })
                })
            })
            .collect()
    }

    #[test]
    fn congruences_of_cyclic_groups() {
        // Subgroups of Z4: 3; of Z6: 4; of Z2×Z2 would be 5.
        assert_eq!(all_congruences(&z(4), ALGEBRA_CAP).unwrap().len(), 3);
        assert_eq!(all_congruences(&z(6), ALGEBRA_CAP).unwrap().len(), 4);
        for n in 1..=5 {
            let mine: BTreeSet<Partition> = all_congruences(&z(n), ALGEBRA_CAP).unwrap().into_iter().collect();
            assert_eq!(mine, by_filtering(&z(n)));
        }
    }

    #[test]
    fn canonical_order_runs_from_delta_to_nabla() {
        let all = all_congruences(&z(4), ALGEBRA_CAP).unwrap();
        assert!(all[0].is_discrete());
        assert!(all.last().unwrap().is_indiscrete());
        assert!(all_congruences(&z(13), ALGEBRA_CAP).is_err());
    }

    #[test]
    fn principal_congruence_in_z4() {
        assert_eq!(cg(&z(4), [(0, 2)]), Partition::from_labels(&[0, 1, 0, 1]));
        assert!(cg(&z(4), [(0, 1)]).is_indiscrete());
    }

    #[test]
    fn monolith_and_irreducibility() {
        assert_eq!(monolith(&z(4), ALGEBRA_CAP).unwrap(), Some(Partition::from_labels(&[0, 1, 0, 1])));
        assert_eq!(monolith(&z(6), ALGEBRA_CAP).unwrap(), None);
        assert!(!is_subdirectly_irreducible(&z(1), ALGEBRA_CAP).unwrap());
        assert!(is_simple(&z(3), ALGEBRA_CAP).unwrap());
        assert!(!is_simple(&z(4), ALGEBRA_CAP).unwrap());
    }

    #[test]
    fn absorbing_elements() {
        assert_eq!(has_absorbing_element(&z(1)), Err(Error::TrivialAlgebra));
        assert_eq!(has_absorbing_element(&z(2)).unwrap(), None);
        let sl = FiniteAlgebra::from_fn(Signature::new([("join", 2)]).unwrap(), vec!["0".into(), "1".into()], |_, a| a[0] | a[1]).unwrap();
        assert_eq!(has_absorbing_element(&sl).unwrap(), Some(1));
    }

    #[test]
    fn factor_pairs_of_z6() {
        let two = cg(&z(6), [(0, 3)]);
        let three = cg(&z(6), [(0, 2)]);
        assert!(is_factor_pair(&two, &three));
        assert!(!is_factor_pair(&two, &two));
    }
}
