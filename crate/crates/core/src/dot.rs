//! Graphviz output. Nodes are numbered in canonical order and edges are
//! cover pairs drawn from the smaller element upward.

use std::fmt::Write;

use crate::direct_system::DirectSystem;
use crate::partition::Partition;
use crate::semilattice::JoinSemilattice;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn digraph(name: &str, nodes: &[String], edges: &[(usize, usize)]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for (k, label) in nodes.iter().enumerate() {
        writeln!(out, "  n{k} [label=\"{}\"];", escape(label)).unwrap();
    }
    for (a, b) in edges {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn semilattice_dot(s: &JoinSemilattice) -> String {
    let nodes: Vec<String> = (0..s.size()).map(|i| i.to_string()).collect();
    digraph("semilattice", &nodes, &s.covers())
}

/// Hasse diagram of a list of congruences under refinement.
pub fn congruence_lattice_dot(labels: &[String], congruences: &[Partition]) -> String {
    let nodes: Vec<String> = congruences
        .iter()
        .map(|p| {
            p.blocks()
                .iter()
                .map(|b| b.iter().map(|&x| labels[x].as_str()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(" | ")
        })
        .collect();
    let n = congruences.len();
    let lt = |a: usize, b: usize| a != b && congruences[a].le(&congruences[b]) && congruences[a] != congruences[b];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                edges.push((a, b));
            }
        }
    }
    digraph("congruences", &nodes, &edges)
}

/// The index order with each node showing its fiber's elements.
pub fn system_dot(d: &DirectSystem) -> String {
    let nodes: Vec<String> = d.fibers.iter().enumerate().map(|(i, f)| format!("{i}: {{{}}}", f.labels().join(", "))).collect();
    digraph("system", &nodes, &d.index.covers())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::all_congruences;
    use crate::varieties::z;

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn chain_and_diamond() {
        let c = semilattice_dot(&JoinSemilattice::chain(2));
        assert_eq!((count(&c, "[label"), count(&c, "->")), (2, 1));
        let d = semilattice_dot(&JoinSemilattice::diamond());
        assert_eq!((count(&d, "[label"), count(&d, "->")), (4, 4));
        assert_eq!(d, semilattice_dot(&JoinSemilattice::diamond()));
    }

    #[test]
    fn congruences_of_z4_form_a_chain() {
        let z4 = z(4);
        let cons = all_congruences(&z4, 12).unwrap();
        let dot = congruence_lattice_dot(z4.labels(), &cons);
        assert_eq!((count(&dot, "[label"), count(&dot, "->")), (3, 2));
        assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));
    }
}
