//! Built-in signatures, example algebras and systems, and axiom suites for
//! the regularized varieties exercised by the test corpus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{direct_product, FiniteAlgebra, Signature};
use crate::direct_system::{star, DirectSystem};
use crate::error::{Error, Result};
use crate::free::FreenessClaim;
use crate::plonka::compose;
use crate::semilattice::JoinSemilattice;
use crate::term::{counterexample, parse_identity, parse_term, Identity, Term};

pub fn ibsl_signature() -> Signature {
    Signature::new([("join", 2), ("meet", 2), ("neg", 1), ("zero", 0), ("one", 0)]).expect("static signature")
}

pub fn group_signature() -> Signature {
    Signature::new([("mul", 2), ("inv", 1)]).expect("static signature")
}

pub fn brace_signature() -> Signature {
    Signature::new([("mul", 2), ("circ", 2), ("inv", 1), ("prime", 1)]).expect("static signature")
}

pub fn lattice_signature() -> Signature {
    Signature::new([("join", 2), ("meet", 2)]).expect("static signature")
}

pub fn semilattice_signature() -> Signature {
    Signature::new([("join", 2)]).expect("static signature")
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Cyclic group `Z_n` with `mul` = addition mod n and `inv` = negation.
pub fn z(n: usize) -> FiniteAlgebra {
    let l = (0..n).map(|k| k.to_string()).collect();
    FiniteAlgebra::from_fn(group_signature(), l, |op, a| if op == 0 { (a[0] + a[1]) % n } else { (n - a[0]) % n })
        .expect("cyclic group")
}

/// The Klein group `Z2 × Z2`.
pub fn klein() -> FiniteAlgebra {
    direct_product(&[z(2), z(2)]).expect("product of groups")
}

/// Boolean algebra on a bitmask carrier of size 2 or 4, labels in mask order.
fn boolean_with(names: &[&str]) -> FiniteAlgebra {
    let full = names.len() - 1;
    FiniteAlgebra::from_fn(ibsl_signature(), labels(names), |op, a| match op {
        0 => a[0] | a[1],
        1 => a[0] & a[1],
        2 => full ^ a[0],
        3 => 0,
        _ => full,
    })
    .expect("boolean algebra")
}

pub fn b2() -> FiniteAlgebra {
    boolean_with(&["0", "1"])
}

/// Four-element Boolean algebra `{0, a, a', 1}`.
pub fn b4() -> FiniteAlgebra {
    boolean_with(&["0", "a", "a'", "1"])
}

/// Trivial brace on a group: `circ` = `mul`, `prime` = `inv`.
pub fn trivial_brace(group: &FiniteAlgebra) -> FiniteAlgebra {
    let l = group.labels().to_vec();
    FiniteAlgebra::from_fn(brace_signature(), l, |op, a| match op {
        0 | 1 => group.apply(0, a),
        _ => group.apply(1, a),
    })
    .expect("trivial brace")
}

/// Two-element join-semilattice.
pub fn sl2() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(semilattice_signature(), labels(&["0", "1"]), |_, a| a[0].max(a[1])).expect("semilattice")
}

/// Two-element lattice.
pub fn lattice2(names: [&str; 2]) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(lattice_signature(), labels(&names), |op, a| if op == 0 { a[0].max(a[1]) } else { a[0].min(a[1]) })
        .expect("lattice")
}

/// The three-element involutive bisemilattice `B2` with an absorbing top.
pub fn ibsl3() -> FiniteAlgebra {
    compose(&star(&b2())).expect("star system is valid").algebra
}

/// Diamond-indexed system of Boolean algebras whose sum carries a pair of
/// non-permuting congruences. Fiber order: bottom, `i`, `j`, top; global
/// elements 0–3, 4–5, 6–9, 10–13.
pub fn diamond_ibsl_system() -> DirectSystem {
    let fibers = vec![
        boolean_with(&["0_a", "a", "a'", "1_a"]),
        boolean_with(&["⊥", "⊤"]),
        boolean_with(&["0_b", "b", "b'", "1_b"]),
        boolean_with(&["0_c", "c", "c'", "1_c"]),
    ];
    let maps = BTreeMap::from([
        ((0, 1), vec![0, 1, 0, 1]),
        ((0, 2), vec![0, 1, 2, 3]),
        ((1, 3), vec![0, 3]),
        ((2, 3), vec![0, 3, 0, 3]),
    ]);
    DirectSystem::from_generating_maps(JoinSemilattice::diamond(), fibers, maps)
}

/// Lattices over the vee: one-element fibers `{0}` and `{1}` below the
/// two-element lattice `{2 < 3}`, with `0 ↦ 3` and `1 ↦ 2`. Elements of the
/// sum are numbered by their labels.
pub fn non_transitive_system() -> DirectSystem {
    let fibers = vec![
        FiniteAlgebra::trivial(lattice_signature(), "0"),
        FiniteAlgebra::trivial(lattice_signature(), "1"),
        lattice2(["2", "3"]),
    ];
    let maps = BTreeMap::from([((0, 2), vec![1]), ((1, 2), vec![0])]);
    DirectSystem::from_generating_maps(JoinSemilattice::vee(), fibers, maps)
}

/// Finite stand-in for a sum of free groups over the free semilattice on
/// two generators, where both generators land on the same top generator.
/// `Z2` sits at the atoms and the top, the trivial group at the bottom.
pub fn clifford_non_free_system() -> (DirectSystem, FreenessClaim) {
    let fibers = vec![FiniteAlgebra::trivial(group_signature(), "e"), z(2), z(2), z(2)];
    let maps = BTreeMap::from([
        ((0, 1), vec![0]),
        ((0, 2), vec![0]),
        ((1, 3), vec![0, 1]),
        ((2, 3), vec![0, 1]),
    ]);
    let d = DirectSystem::from_generating_maps(JoinSemilattice::diamond(), fibers, maps);
    let claim = FreenessClaim { index_generators: vec![1, 2], fiber_generators: vec![vec![], vec![1], vec![1], vec![1, 1]] };
    (d, claim)
}

/// The binary term acting as partition function in sums of the catalog
/// signatures: absorption for Boolean algebras and lattices, `x·y·y⁻¹`
/// for groups and braces.
pub fn partition_term(sig: &Signature) -> Option<Term> {
    let text = if sig.index_of("meet").is_some() && sig.index_of("join").is_some() {
        "(join x (meet x y))"
    } else if sig.index_of("mul").is_some() && sig.index_of("inv").is_some() {
        "(mul x (mul y (inv y)))"
    } else {
        return None;
    };
    Some(parse_term(text).expect("static term parses"))
}

/// A catalog entry: an algebra under a stable name.
#[derive(Clone, Debug)]
pub struct NamedAlgebra {
    pub name: String,
    pub algebra: FiniteAlgebra,
}

/// A catalog entry: a system under a stable name, with the suite its
/// fibers satisfy when there is one.
#[derive(Clone, Debug)]
pub struct NamedSystem {
    pub name: String,
    pub system: DirectSystem,
    pub suite: Option<&'static str>,
}

fn named(name: &str, algebra: FiniteAlgebra) -> NamedAlgebra {
    NamedAlgebra { name: name.to_string(), algebra }
}

pub fn catalog_algebras() -> Vec<NamedAlgebra> {
    vec![
        named("trivial-group", FiniteAlgebra::trivial(group_signature(), "e")),
        named("trivial-ibsl", FiniteAlgebra::trivial(ibsl_signature(), "0")),
        named("trivial-brace", FiniteAlgebra::trivial(brace_signature(), "e")),
        named("trivial-lattice", FiniteAlgebra::trivial(lattice_signature(), "0")),
        named("trivial-semilattice", FiniteAlgebra::trivial(semilattice_signature(), "0")),
        named("z2", z(2)),
        named("z3", z(3)),
        named("z4", z(4)),
        named("klein", klein()),
        named("b2", b2()),
        named("b4", b4()),
        named("ibsl3", ibsl3()),
        named("diamond-ibsl", compose(&diamond_ibsl_system()).expect("valid system").algebra),
        named("non-transitive", compose(&non_transitive_system()).expect("valid system").algebra),
        named("brace-z2", trivial_brace(&z(2))),
        named("brace-z3", trivial_brace(&z(3))),
        named("sl2", sl2()),
        named("lattice2", lattice2(["0", "1"])),
    ]
}

fn chain_system(fibers: Vec<FiniteAlgebra>, steps: Vec<Vec<usize>>) -> DirectSystem {
    let n = fibers.len();
    let maps = steps.into_iter().enumerate().map(|(i, p)| ((i, i + 1), p)).collect();
    DirectSystem::from_generating_maps(JoinSemilattice::chain(n), fibers, maps)
}

fn diamond_system(fibers: Vec<FiniteAlgebra>, maps: [Vec<usize>; 4]) -> DirectSystem {
    let [p01, p02, p13, p23] = maps;
    let maps = BTreeMap::from([((0, 1), p01), ((0, 2), p02), ((1, 3), p13), ((2, 3), p23)]);
    DirectSystem::from_generating_maps(JoinSemilattice::diamond(), fibers, maps)
}

fn vee_system(fibers: Vec<FiniteAlgebra>, p0: Vec<usize>, p1: Vec<usize>) -> DirectSystem {
    let maps = BTreeMap::from([((0, 2), p0), ((1, 2), p1)]);
    DirectSystem::from_generating_maps(JoinSemilattice::vee(), fibers, maps)
}

/// Systems of total size at most 10 over chains, the diamond and the vee,
/// in signatures with and without constants. Every fiber lies in a variety
/// with a binary partition-function term (groups, braces, Boolean
/// algebras, lattices), so the sums are in the scope of the decomposition.
pub fn catalog_systems() -> Vec<NamedSystem> {
    let te = || FiniteAlgebra::trivial(group_signature(), "e");
    let tb = || FiniteAlgebra::trivial(ibsl_signature(), "0");
    let entry = |name: &str, system: DirectSystem, suite: Option<&'static str>| NamedSystem {
        name: name.to_string(),
        system,
        suite,
    };
    let g = Some("clifford");
    let i = Some("ibsl");
    vec![
        entry("z4-point", chain_system(vec![z(4)], vec![]), g),
        entry("klein-point", chain_system(vec![klein()], vec![]), g),
        entry("z2-z2", chain_system(vec![z(2), z(2)], vec![vec![0, 1]]), g),
        entry("z2-e", chain_system(vec![z(2), te()], vec![vec![0, 0]]), g),
        entry("z3-e", chain_system(vec![z(3), te()], vec![vec![0, 0, 0]]), g),
        entry("e-z2", chain_system(vec![te(), z(2)], vec![vec![0]]), g),
        entry("z4-z2", chain_system(vec![z(4), z(2)], vec![vec![0, 1, 0, 1]]), g),
        entry("klein-z2", chain_system(vec![klein(), z(2)], vec![vec![0, 0, 1, 1]]), g),
        entry("z3-z3", chain_system(vec![z(3), z(3)], vec![vec![0, 1, 2]]), g),
        entry("z2-z2-e", chain_system(vec![z(2), z(2), te()], vec![vec![0, 1], vec![0, 0]]), g),
        entry("e-e-e", chain_system(vec![te(), te(), te()], vec![vec![0], vec![0]]), g),
        entry("e-z2-z2-e", chain_system(vec![te(), z(2), z(2), te()], vec![vec![0], vec![0, 1], vec![0, 0]]), g),
        entry(
            "diamond-z2",
            diamond_system(vec![z(2), z(2), z(2), z(2)], [vec![0, 1], vec![0, 1], vec![0, 1], vec![0, 1]]),
            g,
        ),
        entry("diamond-z2-e", diamond_system(vec![z(2), z(2), te(), te()], [vec![0, 1], vec![0, 0], vec![0, 0], vec![0]]), g),
        entry("vee-z2", vee_system(vec![z(2), z(2), z(2)], vec![0, 1], vec![0, 1]), g),
        entry("vee-e-e-z2", vee_system(vec![te(), te(), z(2)], vec![0], vec![0]), g),
        entry("vee-z3-e-e", vee_system(vec![z(3), te(), te()], vec![0, 0, 0], vec![0]), g),
        entry("star-b2", star(&b2()), i),
        entry("b4-point", chain_system(vec![b4()], vec![]), i),
        entry("b2-b2", chain_system(vec![b2(), b2()], vec![vec![0, 1]]), i),
        entry("b4-b2", chain_system(vec![b4(), b2()], vec![vec![0, 1, 0, 1]]), i),
        entry("b2-b4", chain_system(vec![b2(), b4()], vec![vec![0, 3]]), i),
        entry("b2-b2-e", chain_system(vec![b2(), b2(), tb()], vec![vec![0, 1], vec![0, 0]]), i),
        entry("e-e", chain_system(vec![tb(), tb()], vec![vec![0]]), i),
        entry(
            "diamond-b2",
            diamond_system(vec![b2(), b2(), b2(), b2()], [vec![0, 1], vec![0, 1], vec![0, 1], vec![0, 1]]),
            i,
        ),
        entry("vee-lattices", non_transitive_system(), None),
        entry(
            "lattice2-e",
            chain_system(vec![lattice2(["0", "1"]), FiniteAlgebra::trivial(lattice_signature(), "t")], vec![vec![0, 0]]),
            None,
        ),
        entry(
            "brace-z2-e",
            chain_system(vec![trivial_brace(&z(2)), FiniteAlgebra::trivial(brace_signature(), "e")], vec![vec![0, 0]]),
            Some("dwb"),
        ),
        entry("brace-z3-point", chain_system(vec![trivial_brace(&z(3))], vec![]), Some("dwb")),
        entry(
            "brace-z2-z2",
            chain_system(vec![trivial_brace(&z(2)), trivial_brace(&z(2))], vec![vec![0, 1]]),
            Some("dwb"),
        ),
    ]
}

/// Catalog systems that exceed the enumeration caps and are used only
/// where a single structured example is needed.
pub fn large_systems() -> Vec<NamedSystem> {
    vec![NamedSystem { name: "diamond-boolean".into(), system: diamond_ibsl_system(), suite: Some("ibsl") }]
}

/// A named equational basis together with the irregular identity that
/// collapses its models back to the underlying strongly irregular variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSuite {
    pub name: String,
    pub signature: Signature,
    pub identities: Vec<(String, Identity)>,
    pub irregular_witness: Option<Identity>,
}

fn suite(name: &str, signature: Signature, ids: &[(&str, &str)], witness: &str) -> AxiomSuite {
    let identities = ids
        .iter()
        .map(|(label, text)| (label.to_string(), parse_identity(text).expect("static identity parses")))
        .collect();
    AxiomSuite {
        name: name.to_string(),
        signature,
        identities,
        irregular_witness: Some(parse_identity(witness).expect("static identity parses")),
    }
}

pub fn ibsl_suite() -> AxiomSuite {
    suite(
        "ibsl",
        ibsl_signature(),
        &[
            ("join idempotence", "(join x x) = x"),
            ("join commutativity", "(join x y) = (join y x)"),
            ("join associativity", "(join x (join y z)) = (join (join x y) z)"),
            ("double negation", "(neg (neg x)) = x"),
            ("meet by duality", "(meet x y) = (neg (join (neg x) (neg y)))"),
            ("meet absorbs negated join", "(meet x (join (neg x) y)) = (meet x y)"),
            ("zero is a join unit", "(join (zero) x) = x"),
            ("one is the negated zero", "(one) = (neg (zero))"),
        ],
        "(join x (meet x y)) = x",
    )
}

pub fn clifford_suite() -> AxiomSuite {
    suite(
        "clifford",
        group_signature(),
        &[
            ("associativity", "(mul x (mul y z)) = (mul (mul x y) z)"),
            ("inverse involution", "(inv (inv x)) = x"),
            ("inverse regularity", "(mul x (mul (inv x) x)) = x"),
            ("idempotents commute", "(mul (mul x (inv x)) (mul y (inv y))) = (mul (mul y (inv y)) (mul x (inv x)))"),
            ("inverse commutes", "(mul x (inv x)) = (mul (inv x) x)"),
        ],
        "(mul x (mul y (inv y))) = x",
    )
}

pub fn dwb_suite() -> AxiomSuite {
    suite(
        "dwb",
        brace_signature(),
        &[
            ("mul associativity", "(mul x (mul y z)) = (mul (mul x y) z)"),
            ("inv involution", "(inv (inv x)) = x"),
            ("inv regularity", "(mul x (mul (inv x) x)) = x"),
            ("mul idempotents commute", "(mul (mul x (inv x)) (mul y (inv y))) = (mul (mul y (inv y)) (mul x (inv x)))"),
            ("inv commutes", "(mul x (inv x)) = (mul (inv x) x)"),
            ("circ associativity", "(circ x (circ y z)) = (circ (circ x y) z)"),
            ("prime involution", "(prime (prime x)) = x"),
            ("prime regularity", "(circ x (circ (prime x) x)) = x"),
            ("circ idempotents commute", "(circ (circ x (prime x)) (circ y (prime y))) = (circ (circ y (prime y)) (circ x (prime x)))"),
            ("brace distributivity", "(circ x (mul y z)) = (mul (mul (circ x y) (inv x)) (circ x z))"),
            ("shared idempotents", "(mul x (inv x)) = (circ x (prime x))"),
        ],
        "(mul x (mul y (inv y))) = x",
    )
}

pub fn builtin_suites() -> Vec<AxiomSuite> {
    vec![ibsl_suite(), clifford_suite(), dwb_suite()]
}

pub fn suite_by_name(name: &str) -> Option<AxiomSuite> {
    builtin_suites().into_iter().find(|s| s.name == name)
}

/// Outcome of one identity: `counterexample` maps variables to element labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub label: String,
    pub identity: String,
    pub holds: bool,
    pub counterexample: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub identities: Vec<IdentityCheck>,
    pub witness: Option<IdentityCheck>,
}

impl SuiteReport {
    /// Every identity of the basis holds.
    pub fn basis_holds(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }

    /// Basis holds and so does the witness, if it was checked.
    pub fn all_hold(&self) -> bool {
        self.basis_holds() && self.witness.as_ref().map_or(true, |w| w.holds)
    }
}

fn check_one(alg: &FiniteAlgebra, label: &str, id: &Identity) -> Result<IdentityCheck> {
    let cx = counterexample(alg, id)?;
    Ok(IdentityCheck {
        label: label.to_string(),
        identity: id.to_string(),
        holds: cx.is_none(),
        counterexample: cx.map(|env| env.into_iter().map(|(v, x)| (v, alg.label(x).to_string())).collect()),
    })
}

pub fn check_suite(alg: &FiniteAlgebra, suite: &AxiomSuite, include_witness: bool) -> Result<SuiteReport> {
    if alg.signature() != &suite.signature {
        return Err(Error::SignatureMismatch(format!("the algebra is not in the signature of suite {}", suite.name)));
    }
    let identities = suite.identities.iter().map(|(l, id)| check_one(alg, l, id)).collect::<Result<Vec<_>>>()?;
    let witness = match (&suite.irregular_witness, include_witness) {
        (Some(w), true) => Some(check_one(alg, "irregular witness", w)?),
        _ => None,
    };
    Ok(SuiteReport { suite: suite.name.clone(), identities, witness })
}
