//! Finite algebras given by operation tables, homomorphisms, subalgebras and
//! direct products.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest operation arity accepted by table storage.
pub const MAX_ARITY: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<Operation>,
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let ops: Vec<Operation> =
            ops.into_iter().map(|(name, arity)| Operation { name: name.into(), arity }).collect();
        let mut seen = BTreeSet::new();
        for op in &ops {
            if !is_token(&op.name) {
                return Err(Error::InvalidSignature(format!("bad operation name `{}`", op.name)));
            }
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate operation `{}`", op.name)));
            }
            if op.arity > MAX_ARITY {
                return Err(Error::InvalidSignature(format!(
                    "operation `{}` has arity {} (maximum {MAX_ARITY})",
                    op.name, op.arity
                )));
            }
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.ops[i].arity)
    }

    /// Plural signatures have at least one operation of arity two or more.
    pub fn is_plural(&self) -> bool {
        self.ops.iter().any(|o| o.arity >= 2)
    }

    pub fn has_constants(&self) -> bool {
        self.ops.iter().any(|o| o.arity == 0)
    }

    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().enumerate().filter(|(_, o)| o.arity == 0).map(|(i, _)| i)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|o| format!("{}/{}", o.name, o.arity)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// All tuples in `0..n` of length `k`, in lexicographic (row-major) order.
pub(crate) struct Tuples {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Tuples {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Tuples { n, cur: vec![0; k], done: k > 0 && n == 0 }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut pos = self.cur.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cur[pos] += 1;
            if self.cur[pos] < self.n {
                break;
            }
            self.cur[pos] = 0;
        }
        Some(out)
    }
}

fn table_len(n: usize, arity: usize) -> Option<usize> {
    n.checked_pow(arity as u32)
}

/// A finite algebra: carrier `0..n`, one label per element, and one flat
/// row-major table of length `n^arity` per operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    signature: Signature,
    labels: Vec<String>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(signature: Signature, labels: Vec<String>, tables: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !is_token(l) {
                return Err(Error::InvalidAlgebra(format!("bad element label `{l}`")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate element label `{l}`")));
            }
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} operations",
                tables.len(),
                signature.len()
            )));
        }
        for (op, t) in signature.ops().iter().zip(&tables) {
            let want = table_len(n, op.arity)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{}` too large", op.name)))?;
            if t.len() != want {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {want}",
                    op.name,
                    t.len()
                )));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` contains {bad}, outside 0..{n}",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra { signature, labels, tables })
    }

    /// Builds the tables by evaluating `f(op_index, args)` on every tuple.
    pub fn from_fn(
        signature: Signature,
        labels: Vec<String>,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let n = labels.len();
        let mut tables = Vec::with_capacity(signature.len());
        for (k, op) in signature.ops().iter().enumerate() {
            tables.push(Tuples::new(n, op.arity).map(|args| f(k, &args)).collect());
        }
        Self::new(signature, labels, tables)
    }

    /// The one-element algebra of a signature.
    pub fn trivial(signature: Signature, label: &str) -> Self {
        Self::from_fn(signature, vec![label.to_string()], |_, _| 0).expect("trivial algebra is well formed")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature.ops[op].arity
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let n = self.size();
        let idx = args.iter().fold(0, |acc, &a| acc * n + a);
        self.tables[op][idx]
    }

    pub fn apply_named(&self, op: &str, args: &[usize]) -> Result<usize> {
        let k = self.signature.index_of(op).ok_or_else(|| Error::UnknownOperation(op.into()))?;
        let arity = self.arity(k);
        if arity != args.len() {
            return Err(Error::ArityMismatch { op: op.into(), expected: arity, found: args.len() });
        }
        Ok(self.apply(k, args))
    }

    /// Value of the nullary operation `op`.
    pub fn constant(&self, op: usize) -> usize {
        self.tables[op][0]
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        Self::new(self.signature.clone(), labels, self.tables.clone())
    }

    /// The isomorphic copy in which element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.size();
        let mut inv = vec![usize::MAX; n];
        for (x, &y) in perm.iter().enumerate() {
            if y >= n || inv[y] != usize::MAX {
                return Err(Error::InvalidAlgebra("permutation is not a bijection".into()));
            }
            inv[y] = x;
        }
        let labels = inv.iter().map(|&x| self.labels[x].clone()).collect();
        Self::from_fn(self.signature.clone(), labels, |op, args| {
            let pre: Vec<usize> = args.iter().map(|&a| inv[a]).collect();
            perm[self.apply(op, &pre)]
        })
    }

    /// Restriction to a subset closed under all operations. Elements keep
    /// their relative order.
    pub fn restrict(&self, subset: &BTreeSet<usize>) -> Result<Self> {
        let members: Vec<usize> = subset.iter().copied().collect();
        let mut local = HashMap::new();
        for (i, &x) in members.iter().enumerate() {
            local.insert(x, i);
        }
        let labels = members.iter().map(|&x| self.labels[x].clone()).collect();
        let mut escaped = None;
        let alg = Self::from_fn(self.signature.clone(), labels, |op, args| {
            let global: Vec<usize> = args.iter().map(|&a| members[a]).collect();
            let v = self.apply(op, &global);
            match local.get(&v) {
                Some(&l) => l,
                None => {
                    escaped.get_or_insert((op, global));
                    0
                }
            }
        })?;
        if let Some((op, args)) = escaped {
            return Err(Error::InvalidAlgebra(format!(
                "subset not closed: {} applied to {:?} leaves it",
                self.signature.ops[op].name,
                args.iter().map(|&a| self.label(a)).collect::<Vec<_>>()
            )));
        }
        Ok(alg)
    }
}

/// A map between two algebras of the same signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: FiniteAlgebra,
    pub target: FiniteAlgebra,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn is_valid(&self) -> bool {
        check_homomorphism(&self.source, &self.target, &self.map)
    }
}

/// First operation/tuple where `map` fails to commute, if any.
pub fn homomorphism_violation(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    map: &[usize],
) -> Option<String> {
    if source.signature() != target.signature() {
        return Some(format!("signatures differ: {} vs {}", source.signature(), target.signature()));
    }
    if map.len() != source.size() {
        return Some(format!("map has {} entries for {} elements", map.len(), source.size()));
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= target.size()) {
        return Some(format!("image {bad} outside the target carrier"));
    }
    for (k, op) in source.signature().ops().iter().enumerate() {
        for args in Tuples::new(source.size(), op.arity) {
            let image_args: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            let lhs = map[source.apply(k, &args)];
            let rhs = target.apply(k, &image_args);
            if lhs != rhs {
                let shown: Vec<&str> = args.iter().map(|&a| source.label(a)).collect();
                return Some(format!(
                    "{}({}) maps to {} but the images give {}",
                    op.name,
                    shown.join(","),
                    target.label(lhs),
                    target.label(rhs)
                ));
            }
        }
    }
    None
}

pub fn check_homomorphism(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[usize]) -> bool {
    homomorphism_violation(source, target, map).is_none()
}

/// Closure of `seed` under every operation; constants are always included.
pub fn generated_subalgebra(alg: &FiniteAlgebra, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = seed.clone();
    for c in alg.signature().constants() {
        set.insert(alg.constant(c));
    }
    loop {
        let members: Vec<usize> = set.iter().copied().collect();
        let mut grew = false;
        for (k, op) in alg.signature().ops().iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            for pick in Tuples::new(members.len(), op.arity) {
                let args: Vec<usize> = pick.iter().map(|&p| members[p]).collect();
                grew |= set.insert(alg.apply(k, &args));
            }
        }
        if !grew {
            return set;
        }
    }
}

/// The unique homomorphism sending `gens[r]` to `images[r]`, provided the
/// generators generate `source` and the assignment extends. Built by
/// propagating images through the operations.
pub fn extend_from_generators(
    source: &FiniteAlgebra,
    gens: &[usize],
    images: &[usize],
    target: &FiniteAlgebra,
) -> Option<Vec<usize>> {
    if gens.len() != images.len() || source.signature() != target.signature() {
        return None;
    }
    let mut map: Vec<Option<usize>> = vec![None; source.size()];
    let assign = |map: &mut Vec<Option<usize>>, x: usize, y: usize| -> Option<bool> {
        match map[x] {
            Some(prev) if prev != y => None,
            Some(_) => Some(false),
            None => {
                map[x] = Some(y);
                Some(true)
            }
        }
    };
    for (&g, &v) in gens.iter().zip(images) {
        assign(&mut map, g, v)?;
    }
    for c in source.signature().constants() {
        assign(&mut map, source.constant(c), target.constant(c))?;
    }
    loop {
        let known: Vec<usize> = (0..source.size()).filter(|&x| map[x].is_some()).collect();
        let mut grew = false;
        for (k, op) in source.signature().ops().iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            for pick in Tuples::new(known.len(), op.arity) {
                let args: Vec<usize> = pick.iter().map(|&p| known[p]).collect();
                let image_args: Vec<usize> = args.iter().map(|&a| map[a].unwrap()).collect();
                grew |= assign(&mut map, source.apply(k, &args), target.apply(k, &image_args))?;
            }
        }
        if !grew {
            break;
        }
    }
    let total: Option<Vec<usize>> = map.into_iter().collect();
    total.filter(|m| check_homomorphism(source, target, m))
}

/// Every homomorphism from `source` to `target`, by exhaustive search with
/// pruning on constants. Refuses searches over more than `cap` maps.
pub fn all_homomorphisms(source: &FiniteAlgebra, target: &FiniteAlgebra, cap: u64) -> Result<Vec<Vec<usize>>> {
    if source.signature() != target.signature() {
        return Err(Error::SignatureMismatch(format!("{} vs {}", source.signature(), target.signature())));
    }
    let space = (target.size() as u64).checked_pow(source.size() as u32).unwrap_or(u64::MAX);
    if space > cap {
        return Err(Error::SizeCap { what: "homomorphism search".into(), size: space as usize, cap: cap as usize });
    }
    Ok(Tuples::new(target.size(), source.size())
        .filter(|m| check_homomorphism(source, target, m))
        .collect())
}

/// Direct product with elements ordered lexicographically and labelled by
/// tuples such as `<a,b>` (parentheses are reserved by the term syntax).
pub fn direct_product(algs: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = algs.first().ok_or_else(|| Error::InvalidAlgebra("empty product".into()))?;
    for a in algs {
        if a.signature() != first.signature() {
            return Err(Error::SignatureMismatch(format!("{} vs {}", first.signature(), a.signature())));
        }
    }
    let sizes: Vec<usize> = algs.iter().map(|a| a.size()).collect();
    let decode = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            out[i] = x % sizes[i];
            x /= sizes[i];
        }
        out
    };
    let encode = |coords: &[usize]| coords.iter().zip(&sizes).fold(0, |acc, (&c, &s)| acc * s + c);
    let total: usize = sizes.iter().product();
    let labels = (0..total)
        .map(|x| {
            let parts: Vec<&str> = decode(x).iter().zip(algs).map(|(&c, a)| a.label(c)).collect();
            format!("<{}>", parts.join(","))
        })
        .collect();
    FiniteAlgebra::from_fn(first.signature().clone(), labels, |op, args| {
        let decoded: Vec<Vec<usize>> = args.iter().map(|&a| decode(a)).collect();
        let coords: Vec<usize> = (0..algs.len())
            .map(|i| {
                let local: Vec<usize> = decoded.iter().map(|d| d[i]).collect();
                algs[i].apply(op, &local)
            })
            .collect();
        encode(&coords)
    })
}
