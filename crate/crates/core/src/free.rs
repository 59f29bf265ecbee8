//! Free algebras of regularized varieties, assembled as sums over the
//! semilattice of finite subsets of the generators.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{check_homomorphism, extend_from_generators, generated_subalgebra, FiniteAlgebra, Tuples};
use crate::direct_system::DirectSystem;
use crate::error::{Diagnostic, Error, Result};
use crate::plonka::{compose, PlonkaSum};
use crate::semilattice::{validate_semilattice, JoinSemilattice};
use crate::varieties::ibsl_signature;

/// Largest generator count for the subset semilattice.
pub const SUBSET_CAP: usize = 6;
/// Default generator cap for free sums over Boolean fibers.
pub const BOOLEAN_GENERATOR_CAP: usize = 2;

/// Supplies finite free algebras of a variety together with the
/// homomorphisms their freeness promises.
pub trait FreeFiberProvider {
    fn name(&self) -> &str;
    fn max_generators(&self) -> usize;
    /// The free algebra on `k` generators and those generators, in order.
    fn free_algebra(&self, k: usize) -> Result<(FiniteAlgebra, Vec<usize>)>;
    /// The homomorphism from the free algebra on `k` generators to
    /// `target` sending generator `r` to `images[r]`.
    fn extend(&self, k: usize, images: &[usize], target: &FiniteAlgebra) -> Result<Vec<usize>>;
}

/// Free Boolean algebras as truth tables: on `k` generators an element is a
/// bitmask over the `2^k` rows, so there are `2^(2^k)` of them.
#[derive(Clone, Debug, Default)]
pub struct BooleanProvider;

pub fn boolean_free_provider() -> BooleanProvider {
    BooleanProvider
}

impl BooleanProvider {
    pub const MAX: usize = 3;

    fn rows(k: usize) -> usize {
        1 << k
    }

    /// Truth table of the `r`-th projection.
    fn generator_mask(k: usize, r: usize) -> usize {
        (0..Self::rows(k)).filter(|t| t >> r & 1 == 1).fold(0, |m, t| m | 1 << t)
    }
}

impl FreeFiberProvider for BooleanProvider {
    fn name(&self) -> &str {
        "boolean"
    }

    fn max_generators(&self) -> usize {
        Self::MAX
    }

    fn free_algebra(&self, k: usize) -> Result<(FiniteAlgebra, Vec<usize>)> {
        if k > Self::MAX {
            return Err(Error::ProviderFailure(format!("boolean provider supports at most {} generators", Self::MAX)));
        }
        let rows = Self::rows(k);
        let size = 1usize << rows;
        let full = size - 1;
        let labels = (0..size).map(|m| format!("t{m:0rows$b}")).collect();
        let alg = FiniteAlgebra::from_fn(ibsl_signature(), labels, |op, a| match op {
            0 => a[0] | a[1],
            1 => a[0] & a[1],
            2 => full & !a[0],
            3 => 0,
            _ => full,
        })?;
        Ok((alg, (0..k).map(|r| Self::generator_mask(k, r)).collect()))
    }

    fn extend(&self, k: usize, images: &[usize], target: &FiniteAlgebra) -> Result<Vec<usize>> {
        if images.len() != k {
            return Err(Error::ProviderFailure(format!("{} images for {k} generators", images.len())));
        }
        if target.signature() != &ibsl_signature() {
            return Err(Error::ProviderFailure("target is not in the Boolean signature".into()));
        }
        let (source, _) = self.free_algebra(k)?;
        let (join, meet, neg, zero, one) = (0, 1, 2, 3, 4);
        // Minterm of row t: meet of each image or its complement.
        let minterms: Vec<usize> = (0..Self::rows(k))
            .map(|t| {
                (0..k).fold(target.constant(one), |acc, r| {
                    let lit = if t >> r & 1 == 1 { images[r] } else { target.apply(neg, &[images[r]]) };
                    target.apply(meet, &[acc, lit])
                })
            })
            .collect();
        let map: Vec<usize> = (0..source.size())
            .map(|mask| {
                (0..Self::rows(k))
                    .filter(|t| mask >> t & 1 == 1)
                    .fold(target.constant(zero), |acc, t| target.apply(join, &[acc, minterms[t]]))
            })
            .collect();
        if !check_homomorphism(&source, target, &map) {
            return Err(Error::ProviderFailure("target is not a Boolean algebra: the extension is not a homomorphism".into()));
        }
        Ok(map)
    }
}

/// Finite subsets of `n` generators under union, least element ∅.
pub fn finite_subsets_semilattice(n: usize) -> Result<JoinSemilattice> {
    if n > SUBSET_CAP {
        return Err(Error::SizeCap { what: "generator set".into(), size: n, cap: SUBSET_CAP });
    }
    Ok(JoinSemilattice::powerset(n))
}

/// Every join-semilattice with a least element 0 on at most `max` elements
/// (isomorphic copies included), built from partial orders.
pub fn small_semilattices_with_zero(max: usize) -> Vec<JoinSemilattice> {
    let mut out = Vec::new();
    for m in 1..=max {
        let off: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        for bits in 0u64..(1u64 << off.len()) {
            let le = |a: usize, b: usize| {
                a == b || off.iter().position(|&p| p == (a, b)).is_some_and(|k| bits >> k & 1 == 1)
            };
            let order_ok = (0..m).all(|a| le(0, a))
                && (0..m).all(|a| (0..m).all(|b| a == b || !(le(a, b) && le(b, a))))
                && (0..m).all(|a| (0..m).all(|b| (0..m).all(|c| !(le(a, b) && le(b, c)) || le(a, c))));
            if !order_ok {
                continue;
            }
            let mut join = Vec::with_capacity(m * m);
            let mut ok = true;
            'pairs: for a in 0..m {
                for b in 0..m {
                    let ubs: Vec<usize> = (0..m).filter(|&u| le(a, u) && le(b, u)).collect();
                    match ubs.iter().find(|&&u| ubs.iter().all(|&v| le(u, v))) {
                        Some(&l) => join.push(l),
                        None => {
                            ok = false;
                            break 'pairs;
                        }
                    }
                }
            }
            if ok {
                out.push(JoinSemilattice::new(m, join, Some(0)));
            }
        }
    }
    out
}

/// Checks that `s` is free (with zero) on `gens`: every map of the
/// generators into each small semilattice with zero extends to a unique
/// zero- and join-preserving map.
pub fn check_free_semilattice(s: &JoinSemilattice, gens: &[usize], max_target: usize) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !validate_semilattice(s).is_empty() {
        out.push(Diagnostic::new("index freeness", "the index is not a valid semilattice"));
        return out;
    }
    let Some(zero) = s.least() else {
        out.push(Diagnostic::new("index freeness", "the index has no least element"));
        return out;
    };
    // Every element, with every subset of generators joining to it.
    let mut reps: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for mask in 0u32..(1u32 << gens.len()) {
        let pick = (0..gens.len()).filter(|b| mask >> b & 1 == 1).map(|b| gens[b]);
        let top = s.join_all(pick).unwrap_or(zero);
        reps.entry(top).or_default().push(mask);
    }
    if let Some(i) = (0..s.size()).find(|i| !reps.contains_key(i)) {
        out.push(Diagnostic::new("index freeness", format!("index {i} is not a join of generators")));
        return out;
    }
    for target in small_semilattices_with_zero(max_target) {
        for images in Tuples::new(target.size(), gens.len()) {
            let value = |mask: u32| {
                (0..gens.len()).filter(|b| mask >> b & 1 == 1).map(|b| images[b]).fold(0, |acc, x| target.join(acc, x))
            };
            let mut f = vec![0; s.size()];
            for (&i, masks) in &reps {
                let vals: BTreeSet<usize> = masks.iter().map(|&m| value(m)).collect();
                if vals.len() > 1 {
                    out.push(Diagnostic::new(
                        "index freeness",
                        format!("index {i} has two generator presentations with different images in a semilattice of size {}", target.size()),
                    ));
                    return out;
                }
                f[i] = *vals.iter().next().unwrap();
            }
            let hom = (0..s.size()).all(|i| (0..s.size()).all(|j| f[s.join(i, j)] == target.join(f[i], f[j])));
            if !hom || f[zero] != 0 {
                out.push(Diagnostic::new("index freeness", format!("extension into a semilattice of size {} is not a homomorphism", target.size())));
                return out;
            }
        }
    }
    out
}

/// The designated generators of a system claimed to be free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessClaim {
    /// Index elements claimed to freely generate the index.
    pub index_generators: Vec<usize>,
    /// Per fiber, its generator tuple, ordered like the index generators below it.
    pub fiber_generators: Vec<Vec<usize>>,
}

/// Checks the three freeness conditions: a free index, fibers generated by
/// their designated tuples, and injective transitions that route each
/// designated generator to the generator in the same position of the
/// larger fiber.
pub fn check_freeness_conditions(d: &DirectSystem, claim: &FreenessClaim) -> Vec<Diagnostic> {
    let mut out = check_free_semilattice(&d.index, &claim.index_generators, 4);
    let n = d.index.size();
    if claim.fiber_generators.len() != n {
        out.push(Diagnostic::new("fiber generation", "one generator tuple per fiber is required"));
        return out;
    }
    let below = |i: usize| -> Vec<usize> {
        claim.index_generators.iter().copied().filter(|&g| d.index.leq(g, i)).collect()
    };
    for i in 0..n {
        let gens = &claim.fiber_generators[i];
        let expected = below(i).len();
        if gens.len() != expected {
            out.push(Diagnostic::new("fiber generation", format!("fiber {i} lists {} generators, expected {expected}", gens.len())));
            continue;
        }
        let span = generated_subalgebra(&d.fibers[i], &gens.iter().copied().collect());
        if span.len() != d.fibers[i].size() {
            out.push(Diagnostic::new(
                "fiber generation",
                format!("fiber {i} has {} elements but its generators reach only {}", d.fibers[i].size(), span.len()),
            ));
        }
        let distinct: BTreeSet<usize> = gens.iter().copied().collect();
        if distinct.len() != gens.len() {
            out.push(Diagnostic::new("generator routing", format!("fiber {i} has coinciding designated generators: distinct generators collapse")));
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i == k || !d.index.leq(i, k) {
                continue;
            }
            let p = &d.transitions[&(i, k)];
            let image: BTreeSet<usize> = p.iter().copied().collect();
            if image.len() != p.len() {
                out.push(Diagnostic::new("generator routing", format!("transition {i} → {k} is not injective")));
            }
            let (gi, gk) = (below(i), below(k));
            if claim.fiber_generators[i].len() != gi.len() || claim.fiber_generators[k].len() != gk.len() {
                continue;
            }
            for (r, g) in gi.iter().enumerate() {
                let pos = gk.iter().position(|x| x == g).expect("generators below i are below k");
                if p[claim.fiber_generators[i][r]] != claim.fiber_generators[k][pos] {
                    out.push(Diagnostic::new(
                        "generator routing",
                        format!("transition {i} → {k} does not send generator {r} to generator {pos}"),
                    ));
                }
            }
        }
    }
    out
}

/// `Σ_j C(n, j) · sizes[j]`.
pub fn free_count(n: usize, sizes: &[u128]) -> u128 {
    let mut binom: u128 = 1;
    let mut total = 0;
    for j in 0..=n {
        total += binom * sizes[j];
        binom = binom * (n - j) as u128 / (j + 1) as u128;
    }
    total
}

/// `2^(2^k)`.
pub fn boolean_fiber_size(k: usize) -> u128 {
    1u128 << (1u32 << k)
}

/// The free algebra on `n` generators as a sum, with the count check.
#[derive(Clone, Debug)]
pub struct FreeReport {
    pub sum: PlonkaSum,
    pub claim: FreenessClaim,
    /// Global elements standing for the free generators.
    pub generators: Vec<usize>,
    pub fiber_sizes: Vec<usize>,
    pub predicted: u128,
    pub actual: usize,
}

/// Builds the sum of free fibers over the subsets of `n` generators. The
/// fiber at a subset is free on its members in increasing order; transitions
/// send each generator to the one with the same name in the larger subset.
pub fn free_plonka(n: usize, provider: &dyn FreeFiberProvider) -> Result<FreeReport> {
    if n > provider.max_generators() {
        return Err(Error::ProviderFailure(format!(
            "{} provider supports at most {} generators",
            provider.name(),
            provider.max_generators()
        )));
    }
    let index = finite_subsets_semilattice(n)?;
    let subsets: Vec<Vec<usize>> = (0..index.size()).map(|m| (0..n).filter(|b| m >> b & 1 == 1).collect()).collect();
    let mut fibers = Vec::with_capacity(subsets.len());
    let mut gens = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let (alg, g) = provider.free_algebra(s.len())?;
        if g.len() != s.len() {
            return Err(Error::ProviderFailure(format!("asked for {} generators, got {}", s.len(), g.len())));
        }
        fibers.push(alg);
        gens.push(g);
    }
    let mut transitions = BTreeMap::new();
    for (i, si) in subsets.iter().enumerate() {
        for (k, sk) in subsets.iter().enumerate() {
            if !index.leq(i, k) {
                continue;
            }
            let images: Vec<usize> = si.iter().map(|e| gens[k][sk.iter().position(|x| x == e).unwrap()]).collect();
            let map = provider.extend(si.len(), &images, &fibers[k])?;
            let distinct: BTreeSet<usize> = map.iter().copied().collect();
            if distinct.len() != map.len() {
                return Err(Error::InjectivityViolation(format!("transition {si:?} → {sk:?}")));
            }
            transitions.insert((i, k), map);
        }
    }
    let system = DirectSystem::new(index, fibers, transitions);
    let sum = compose(&system)?;
    let generators = (0..n).map(|j| sum.place[1 << j][gens[1 << j][0]]).collect();
    let claim = FreenessClaim { index_generators: (0..n).map(|j| 1 << j).collect(), fiber_generators: gens };
    let fiber_sizes: Vec<usize> = (0..=n).map(|k| provider.free_algebra(k).map(|(a, _)| a.size())).collect::<Result<_>>()?;
    let sizes: Vec<u128> = fiber_sizes.iter().map(|&s| s as u128).collect();
    Ok(FreeReport { predicted: free_count(n, &sizes), actual: sum.size(), sum, claim, generators, fiber_sizes })
}

/// First assignment of `gens` into `target` that does not extend to a
/// homomorphism, if any.
pub fn universal_property_failure(alg: &FiniteAlgebra, gens: &[usize], target: &FiniteAlgebra) -> Option<Vec<usize>> {
    Tuples::new(target.size(), gens.len()).find(|images| extend_from_generators(alg, gens, images, target).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_fiber_sizes() {
        for k in 0..=3 {
            let (alg, g) = BooleanProvider.free_algebra(k).unwrap();
            assert_eq!(alg.size() as u128, boolean_fiber_size(k));
            assert_eq!(g.len(), k);
        }
        assert!(BooleanProvider.free_algebra(4).is_err());
    }

    #[test]
    fn counts_for_small_generator_sets() {
        let sizes: Vec<u128> = (0..=3).map(boolean_fiber_size).collect();
        assert_eq!(free_count(0, &sizes), 2);
        assert_eq!(free_count(1, &sizes), 6);
        assert_eq!(free_count(2, &sizes), 26);
        assert_eq!(free_count(3, &sizes), 2 + 3 * 4 + 3 * 16 + 256);
    }

    #[test]
    fn generators_generate_and_extend() {
        let (b2, g) = BooleanProvider.free_algebra(2).unwrap();
        assert_eq!(generated_subalgebra(&b2, &g.iter().copied().collect()).len(), 16);
        let (b1, g1) = BooleanProvider.free_algebra(1).unwrap();
        // x ↦ generator 0 of B_2 is an embedding.
        let m = BooleanProvider.extend(1, &[g[0]], &b2).unwrap();
        assert_eq!(m[g1[0]], g[0]);
        assert_eq!(m.iter().collect::<BTreeSet<_>>().len(), b1.size());
    }

    #[test]
    fn powerset_is_free_on_singletons() {
        let s = finite_subsets_semilattice(2).unwrap();
        assert!(check_free_semilattice(&s, &[1, 2], 4).is_empty());
        // A chain of three is not free on its two upper elements.
        assert!(!check_free_semilattice(&JoinSemilattice::chain(3), &[1, 2], 4).is_empty());
        assert!(finite_subsets_semilattice(7).is_err());
    }

    #[test]
    fn small_semilattice_census() {
        // Labelled orders with 0 at the bottom: a 3-chain in two ways; on four
        // elements, six chains and three diamonds.
        let all = small_semilattices_with_zero(4);
        let counts: Vec<usize> = (1..=4).map(|m| all.iter().filter(|s| s.size() == m).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 9]);
        assert!(all.iter().all(|s| validate_semilattice(s).is_empty()));
    }

    #[test]
    fn free_sum_on_two_generators() {
        let rep = free_plonka(2, &BooleanProvider).unwrap();
        assert_eq!(rep.actual, 26);
        assert_eq!(rep.predicted, 26);
        assert!(check_freeness_conditions(&rep.sum.origin, &rep.claim).is_empty());
    }
}
