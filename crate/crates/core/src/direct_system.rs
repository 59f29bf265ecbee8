//! Semilattice-indexed families of algebras with transition homomorphisms.

use std::collections::BTreeMap;

use crate::algebra::{homomorphism_violation, FiniteAlgebra, Homomorphism};
use crate::error::{Diagnostic, Error, Result};
use crate::plonka::compose;
use crate::semilattice::{validate_semilattice, JoinSemilattice};

/// Fibers indexed by a join-semilattice, with a transition map `p_ij` for
/// every comparable pair `i ≤ j` (and only those).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSystem {
    pub index: JoinSemilattice,
    pub fibers: Vec<FiniteAlgebra>,
    pub transitions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl DirectSystem {
    /// Unchecked constructor; see [`validate_system`].
    pub fn new(
        index: JoinSemilattice,
        fibers: Vec<FiniteAlgebra>,
        transitions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Self {
        DirectSystem { index, fibers, transitions }
    }

    /// Fills in identities on the diagonal and every comparable pair that
    /// can be reached by composing supplied maps along a chain. Supplied
    /// maps are kept as given, so inconsistencies surface in validation.
    pub fn from_generating_maps(
        index: JoinSemilattice,
        fibers: Vec<FiniteAlgebra>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Self {
        let n = index.size();
        let mut t = maps;
        for (i, f) in fibers.iter().enumerate().take(n) {
            t.entry((i, i)).or_insert_with(|| (0..f.size()).collect());
        }
        loop {
            let mut fresh = Vec::new();
            for (&(i, j), p) in &t {
                for k in 0..n {
                    if k == j || t.contains_key(&(i, k)) {
                        continue;
                    }
                    if let Some(q) = t.get(&(j, k)) {
                        let composed: Option<Vec<usize>> = p.iter().map(|&x| q.get(x).copied()).collect();
                        if let Some(c) = composed {
                            fresh.push(((i, k), c));
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for (key, map) in fresh {
                t.entry(key).or_insert(map);
            }
        }
        DirectSystem { index, fibers, transitions: t }
    }

    pub fn transition(&self, i: usize, j: usize) -> Result<&[usize]> {
        let n = self.index.size();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), size: n });
        }
        if !self.index.leq(i, j) {
            return Err(Error::Incomparable { from: i, to: j });
        }
        self.transitions
            .get(&(i, j))
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidSystem(vec![Diagnostic::new("missing", format!("no transition {i} → {j}"))]))
    }

    /// `p_{i, i∨j}` applied to `a ∈ A_i`, with `j` given.
    pub fn lift(&self, i: usize, j: usize, a: usize) -> usize {
        let m = self.index.join(i, j);
        self.transitions[&(i, m)][a]
    }

    pub fn total_size(&self) -> usize {
        self.fibers.iter().map(|f| f.size()).sum()
    }

    pub fn signature(&self) -> Option<&crate::algebra::Signature> {
        self.fibers.first().map(|f| f.signature())
    }
}

/// Every failure of the direct-system laws, with `(i, j, k)` witnesses for
/// the composition law.
pub fn validate_system(d: &DirectSystem) -> Vec<Diagnostic> {
    let mut out = validate_semilattice(&d.index);
    if !out.is_empty() {
        return out;
    }
    let n = d.index.size();
    if d.fibers.len() != n {
        out.push(Diagnostic::new("shape", format!("{} fibers for {n} indices", d.fibers.len())));
        return out;
    }
    let sig = d.fibers[0].signature();
    for (i, f) in d.fibers.iter().enumerate() {
        if f.signature() != sig {
            out.push(Diagnostic::new("signature", format!("fiber {i} has signature {}, expected {sig}", f.signature())));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if sig.has_constants() && d.index.least().is_none() {
        out.push(Diagnostic::new("least", "the signature has constants but the index declares no least element"));
    }
    for &(i, j) in d.transitions.keys() {
        if i >= n || j >= n || !d.index.leq(i, j) {
            out.push(Diagnostic::new("comparability", format!("transition {i} → {j} given for an incomparable pair")));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !d.index.leq(i, j) {
                continue;
            }
            match d.transitions.get(&(i, j)) {
                None => out.push(Diagnostic::new("missing", format!("no transition {i} → {j}"))),
                Some(p) => {
                    if i == j && p.iter().enumerate().any(|(x, &y)| x != y) {
                        out.push(Diagnostic::new("identity", format!("transition {i} → {i} is not the identity")));
                    } else if let Some(v) = homomorphism_violation(&d.fibers[i], &d.fibers[j], p) {
                        out.push(Diagnostic::new("homomorphism", format!("transition {i} → {j}: {v}")));
                    }
                }
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !(d.index.leq(i, j) && d.index.leq(j, k)) {
                    continue;
                }
                let (pij, pjk, pik) = (&d.transitions[&(i, j)], &d.transitions[&(j, k)], &d.transitions[&(i, k)]);
                if let Some(a) = (0..d.fibers[i].size()).find(|&a| pjk[pij[a]] != pik[a]) {
                    out.push(Diagnostic::new(
                        "composition",
                        format!(
                            "(i,j,k) = ({i},{j},{k}): p_jk(p_ij({})) = {} but p_ik gives {}",
                            d.fibers[i].label(a),
                            d.fibers[k].label(pjk[pij[a]]),
                            d.fibers[k].label(pik[a])
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// A map of systems: an join-preserving map `phi` on indices
/// with one fiber homomorphism per source index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMorphism {
    pub phi: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

pub fn validate_morphism(source: &DirectSystem, target: &DirectSystem, m: &SystemMorphism) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let (n, t) = (source.index.size(), target.index.size());
    if m.phi.len() != n || m.components.len() != n || m.phi.iter().any(|&x| x >= t) {
        out.push(Diagnostic::new("shape", "phi or components do not match the index sizes"));
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = m.phi[source.index.join(i, j)];
            let rhs = target.index.join(m.phi[i], m.phi[j]);
            if lhs != rhs {
                out.push(Diagnostic::new("phi", format!("phi({i} ∨ {j}) = {lhs} but phi({i}) ∨ phi({j}) = {rhs}")));
                return out;
            }
        }
    }
    if let (Some(a), Some(b)) = (source.index.least(), target.index.least()) {
        if m.phi[a] != b {
            out.push(Diagnostic::new("least", format!("phi sends the least index {a} to {}, not {b}", m.phi[a])));
        }
    }
    for i in 0..n {
        if let Some(v) = homomorphism_violation(&source.fibers[i], &target.fibers[m.phi[i]], &m.components[i]) {
            out.push(Diagnostic::new("component", format!("component at {i}: {v}")));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            if !source.index.leq(i, j) {
                continue;
            }
            let p = &source.transitions[&(i, j)];
            let q = &target.transitions[&(m.phi[i], m.phi[j])];
            if let Some(a) = (0..source.fibers[i].size()).find(|&a| m.components[j][p[a]] != q[m.components[i][a]]) {
                out.push(Diagnostic::new(
                    "naturality",
                    format!("square ({i},{j}) fails at {}", source.fibers[i].label(a)),
                ));
            }
        }
    }
    out
}

/// `second ∘ first`.
pub fn compose_morphisms(first: &SystemMorphism, second: &SystemMorphism) -> SystemMorphism {
    let phi = first.phi.iter().map(|&i| second.phi[i]).collect();
    let components = first
        .components
        .iter()
        .zip(&first.phi)
        .map(|(f, &i)| f.iter().map(|&a| second.components[i][a]).collect())
        .collect();
    SystemMorphism { phi, components }
}

pub fn identity_morphism(d: &DirectSystem) -> SystemMorphism {
    SystemMorphism {
        phi: (0..d.index.size()).collect(),
        components: d.fibers.iter().map(|f| (0..f.size()).collect()).collect(),
    }
}

/// Label of the element adjoined by [`star`].
pub const INFINITY_LABEL: &str = "∞";

/// Two-chain system with `b` below and a fresh one-element fiber `{∞}` on top.
pub fn star(b: &FiniteAlgebra) -> DirectSystem {
    let top = FiniteAlgebra::trivial(b.signature().clone(), INFINITY_LABEL);
    let mut t = BTreeMap::new();
    t.insert((0, 0), (0..b.size()).collect());
    t.insert((0, 1), vec![0; b.size()]);
    t.insert((1, 1), vec![0]);
    DirectSystem::new(JoinSemilattice::chain(2), vec![b.clone(), top], t)
}

/// Extends `g: A_i → B` to the sum: elements of fibers at or below `i` are
/// pushed up to `i` and mapped by `g`; everything else goes to `∞`. The
/// result maps `compose(d)` into `compose(star(B))`.
pub fn extend_hom(d: &DirectSystem, i: usize, g: &Homomorphism) -> Result<Homomorphism> {
    let n = d.index.size();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    if g.source != d.fibers[i] {
        return Err(Error::SignatureMismatch(format!("the homomorphism's source is not fiber {i}")));
    }
    if let Some(v) = homomorphism_violation(&g.source, &g.target, &g.map) {
        return Err(Error::Validation(format!("not a homomorphism: {v}")));
    }
    let source = compose(d)?;
    let target = compose(&star(&g.target))?;
    let infinity = target.place[1][0];
    let map = source
        .locate
        .iter()
        .map(|&(j, a)| {
            if d.index.leq(j, i) {
                target.place[0][g.map[d.transitions[&(j, i)][a]]]
            } else {
                infinity
            }
        })
        .collect();
    Ok(Homomorphism { source: source.algebra, target: target.algebra, map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn z2() -> FiniteAlgebra {
        let sig = Signature::new([("mul", 2), ("inv", 1)]).unwrap();
        FiniteAlgebra::from_fn(sig, vec!["0".into(), "1".into()], |op, a| if op == 0 { a[0] ^ a[1] } else { a[0] })
            .unwrap()
    }

    fn chain_of_z2(n: usize) -> DirectSystem {
        let maps = (0..n.saturating_sub(1)).map(|i| ((i, i + 1), vec![0, 1])).collect();
        DirectSystem::from_generating_maps(JoinSemilattice::chain(n), vec![z2(); n], maps)
    }

    #[test]
    fn generated_maps_are_completed() {
        let d = chain_of_z2(3);
        assert!(validate_system(&d).is_empty());
        assert_eq!(d.transition(0, 2).unwrap(), &[0, 1]);
        assert_eq!(d.transition(2, 0), Err(Error::Incomparable { from: 2, to: 0 }));
    }

    #[test]
    fn composition_witness_names_triple() {
        let mut d = chain_of_z2(3);
        let sig = d.fibers[0].signature().clone();
        let one = FiniteAlgebra::trivial(sig, "e");
        d.fibers[1] = one;
        d.transitions.insert((0, 1), vec![0, 0]);
        d.transitions.insert((1, 1), vec![0]);
        d.transitions.insert((1, 2), vec![0]);
        let diags = validate_system(&d);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].law, "composition");
        assert!(diags[0].witness.contains("(0,1,2)"));
    }

    #[test]
    fn constants_need_a_least_index() {
        let sig = Signature::new([("e", 0)]).unwrap();
        let t = FiniteAlgebra::trivial(sig, "x");
        let d = DirectSystem::from_generating_maps(JoinSemilattice::vee(), vec![t.clone(), t.clone(), t], BTreeMap::from([((0, 2), vec![0]), ((1, 2), vec![0])]));
        assert!(validate_system(&d).iter().any(|x| x.law == "least"));
    }

    #[test]
    fn star_shape() {
        let s = star(&z2());
        assert!(validate_system(&s).is_empty());
        assert_eq!(s.total_size(), 3);
        assert_eq!(s.fibers[1].label(0), INFINITY_LABEL);
    }

    #[test]
    fn morphisms_compose() {
        let d = chain_of_z2(2);
        let id = identity_morphism(&d);
        assert!(validate_morphism(&d, &d, &id).is_empty());
        let swap = SystemMorphism { phi: vec![0, 1], components: vec![vec![0, 1], vec![0, 1]] };
        assert_eq!(compose_morphisms(&id, &swap), swap);
        assert_eq!(compose_morphisms(&swap, &id), swap);
        let bad = SystemMorphism { phi: vec![0, 0], components: vec![vec![0, 1], vec![1, 0]] };
        assert!(!validate_morphism(&d, &d, &bad).is_empty());
    }

    #[test]
    fn least_preservation_is_enforced() {
        // Constant map to the top is a join map and natural, but moves the least index.
        let d = chain_of_z2(2);
        let up = SystemMorphism { phi: vec![1, 1], components: vec![vec![0, 1], vec![0, 1]] };
        let diags = validate_morphism(&d, &d, &up);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].law, "least");
    }

    #[test]
    fn extension_lands_in_star() {
        let d = chain_of_z2(2);
        let g = Homomorphism { source: z2(), target: z2(), map: vec![0, 1] };
        let h = extend_hom(&d, 0, &g).unwrap();
        assert!(h.is_valid());
        assert_eq!(h.map, vec![0, 1, 2, 2]);
        assert!(matches!(extend_hom(&d, 5, &g), Err(Error::IndexOutOfRange { .. })));
    }
}
