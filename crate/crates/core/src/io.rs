//! JSON formats for algebras, semilattices, systems, relations and
//! partitions. Parse errors carry a field path such as
//! `$.fibers[1].operations.mul[3]`.
//!
//! Algebra: `{"signature": [{"name": "mul", "arity": 2}, ...],
//! "elements": ["0", "1"], "operations": {"mul": [0, 1, 1, 0], ...}}`;
//! tables are row-major over argument tuples, entries are element indices
//! or labels.
//!
//! Semilattice: `{"join": [[0, 1], [1, 1]], "least": 0}`; `least` may be
//! omitted or null.
//!
//! System: `{"index": <semilattice>, "fibers": [<algebra>, ...],
//! "transitions": [{"from": 0, "to": 1, "map": [...]}, ...]}`; identities
//! and composites of the listed maps are filled in.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::algebra::{FiniteAlgebra, Signature};
use crate::direct_system::{validate_system, DirectSystem};
use crate::error::{Error, Result};
use crate::partition::{Partition, Relation};
use crate::semilattice::{validate_semilattice, JoinSemilattice};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    parse_json(&text)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse(path, "expected a non-negative integer"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::parse(path, "expected a string"))
}

/// An element given as an index or as one of `labels`.
fn element(v: &Value, path: &str, labels: &[String]) -> Result<usize> {
    let x = match v {
        Value::String(s) => {
            labels.iter().position(|l| l == s).ok_or_else(|| Error::parse(path, format!("unknown element `{s}`")))?
        }
        _ => uint(v, path)?,
    };
    if x >= labels.len() {
        return Err(Error::parse(path, format!("element {x} out of range (size {})", labels.len())));
    }
    Ok(x)
}

pub fn algebra_from_value(v: &Value, path: &str) -> Result<FiniteAlgebra> {
    let sig_path = format!("{path}.signature");
    let mut ops = Vec::new();
    for (k, op) in array(field(v, path, "signature")?, &sig_path)?.iter().enumerate() {
        let p = format!("{sig_path}[{k}]");
        let name = string(field(op, &p, "name")?, &format!("{p}.name"))?;
        let arity = uint(field(op, &p, "arity")?, &format!("{p}.arity"))?;
        ops.push((name.to_string(), arity));
    }
    let signature = Signature::new(ops).map_err(|e| Error::parse(&sig_path, e.to_string()))?;
    let el_path = format!("{path}.elements");
    let labels = array(field(v, path, "elements")?, &el_path)?
        .iter()
        .enumerate()
        .map(|(k, x)| string(x, &format!("{el_path}[{k}]")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let op_path = format!("{path}.operations");
    let tables_v = field(v, path, "operations")?.as_object().ok_or_else(|| Error::parse(&op_path, "expected an object"))?;
    if let Some(extra) = tables_v.keys().find(|k| signature.index_of(k).is_none()) {
        return Err(Error::parse(&op_path, format!("operation `{extra}` is not in the signature")));
    }
    let mut tables = Vec::with_capacity(signature.len());
    for op in signature.ops() {
        let p = format!("{op_path}.{}", op.name);
        let t = tables_v.get(&op.name).ok_or_else(|| Error::parse(&op_path, format!("missing table for `{}`", op.name)))?;
        let entries = array(t, &p)?;
        let expected = labels.len().pow(op.arity as u32);
        if entries.len() != expected {
            return Err(Error::parse(&p, format!("expected {expected} entries, found {}", entries.len())));
        }
        tables.push(
            entries.iter().enumerate().map(|(k, x)| element(x, &format!("{p}[{k}]"), &labels)).collect::<Result<Vec<_>>>()?,
        );
    }
    FiniteAlgebra::new(signature, labels, tables).map_err(|e| Error::Validation(e.to_string()))
}

pub fn algebra_to_value(alg: &FiniteAlgebra) -> Value {
    let sig: Vec<Value> = alg.signature().ops().iter().map(|o| json!({"name": o.name, "arity": o.arity})).collect();
    let mut ops = Map::new();
    for (k, o) in alg.signature().ops().iter().enumerate() {
        ops.insert(o.name.clone(), json!(alg.table(k)));
    }
    json!({"signature": sig, "elements": alg.labels(), "operations": ops})
}

pub fn semilattice_from_value(v: &Value, path: &str) -> Result<JoinSemilattice> {
    let jp = format!("{path}.join");
    let rows = array(field(v, path, "join")?, &jp)?;
    let n = rows.len();
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{jp}[{i}]");
        let row = array(row, &rp)?;
        if row.len() != n {
            return Err(Error::parse(&rp, format!("expected {n} entries, found {}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            let x = uint(x, &format!("{rp}[{j}]"))?;
            if x >= n {
                return Err(Error::parse(format!("{rp}[{j}]"), format!("index {x} out of range (size {n})")));
            }
            table.push(x);
        }
    }
    let least = match v.get("least") {
        None | Some(Value::Null) => None,
        Some(x) => Some(uint(x, &format!("{path}.least"))?),
    };
    let mut s = JoinSemilattice::new(n, table, least);
    let diags = validate_semilattice(&s);
    if !diags.is_empty() {
        return Err(Error::Validation(crate::error::join_diagnostics(&diags)));
    }
    if least.is_none() {
        let l = s.find_least();
        s = s.with_least(l);
    }
    Ok(s)
}

pub fn semilattice_to_value(s: &JoinSemilattice) -> Value {
    json!({"join": s.rows(), "least": s.least()})
}

pub fn system_from_value(v: &Value, path: &str) -> Result<DirectSystem> {
    let index = semilattice_from_value(field(v, path, "index")?, &format!("{path}.index"))?;
    let fp = format!("{path}.fibers");
    let fibers = array(field(v, path, "fibers")?, &fp)?
        .iter()
        .enumerate()
        .map(|(k, f)| algebra_from_value(f, &format!("{fp}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let tp = format!("{path}.transitions");
    let mut maps = BTreeMap::new();
    let listed = match v.get("transitions") {
        None | Some(Value::Null) => Vec::new(),
        Some(t) => array(t, &tp)?.clone(),
    };
    for (k, t) in listed.iter().enumerate() {
        let p = format!("{tp}[{k}]");
        let from = uint(field(t, &p, "from")?, &format!("{p}.from"))?;
        let to = uint(field(t, &p, "to")?, &format!("{p}.to"))?;
        let (Some(src), Some(dst)) = (fibers.get(from), fibers.get(to)) else {
            return Err(Error::parse(&p, format!("fiber index out of range ({} fibers)", fibers.len())));
        };
        let mp = format!("{p}.map");
        let entries = array(field(t, &p, "map")?, &mp)?;
        if entries.len() != src.size() {
            return Err(Error::parse(&mp, format!("expected {} entries, found {}", src.size(), entries.len())));
        }
        let map = entries
            .iter()
            .enumerate()
            .map(|(e, x)| element(x, &format!("{mp}[{e}]"), dst.labels()))
            .collect::<Result<Vec<_>>>()?;
        if maps.insert((from, to), map).is_some() {
            return Err(Error::parse(&p, format!("duplicate transition {from} → {to}")));
        }
    }
    let d = DirectSystem::from_generating_maps(index, fibers, maps);
    let diags = validate_system(&d);
    if !diags.is_empty() {
        return Err(Error::InvalidSystem(diags));
    }
    Ok(d)
}

/// All non-identity transitions are written, so parsing is exact.
pub fn system_to_value(d: &DirectSystem) -> Value {
    let transitions: Vec<Value> = d
        .transitions
        .iter()
        .filter(|((i, j), _)| i != j)
        .map(|((i, j), m)| json!({"from": i, "to": j, "map": m}))
        .collect();
    json!({
        "index": semilattice_to_value(&d.index),
        "fibers": d.fibers.iter().map(algebra_to_value).collect::<Vec<_>>(),
        "transitions": transitions,
    })
}

/// `[[a, b], ...]` of element indices or labels.
pub fn pairs_from_value(v: &Value, path: &str, labels: &[String]) -> Result<Vec<(usize, usize)>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let pp = format!("{path}[{k}]");
            let items = array(p, &pp)?;
            if items.len() != 2 {
                return Err(Error::parse(&pp, "expected a pair"));
            }
            Ok((element(&items[0], &format!("{pp}[0]"), labels)?, element(&items[1], &format!("{pp}[1]"), labels)?))
        })
        .collect()
}

pub fn relation_from_value(v: &Value, path: &str, labels: &[String]) -> Result<Relation> {
    Ok(Relation::from_pairs(labels.len(), pairs_from_value(v, path, labels)?))
}

/// `[[a, b, ...], [c], ...]`: blocks covering every element exactly once.
pub fn partition_from_value(v: &Value, path: &str, labels: &[String]) -> Result<Partition> {
    let blocks = array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let bp = format!("{path}[{k}]");
            array(b, &bp)?.iter().enumerate().map(|(e, x)| element(x, &format!("{bp}[{e}]"), labels)).collect()
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Partition::from_blocks(labels.len(), &blocks).ok_or_else(|| Error::parse(path, "blocks must cover every element exactly once"))
}

pub fn partition_to_value(p: &Partition, labels: &[String]) -> Value {
    json!(p.blocks().iter().map(|b| b.iter().map(|&x| labels[x].clone()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Accepts either an algebra or a system document and returns the
/// algebra (composing a system).
pub fn algebra_or_sum_from_value(v: &Value) -> Result<FiniteAlgebra> {
    if v.get("fibers").is_some() {
        let d = system_from_value(v, "$")?;
        Ok(crate::plonka::compose(&d)?.algebra)
    } else {
        algebra_from_value(v, "$")
    }
}
