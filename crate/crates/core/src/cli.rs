//! Command-line front end. Every verb produces a [`Report`] with a machine
//! section (canonical JSON) and an aligned human section; failures are
//! reported, never raised.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::FiniteAlgebra;
use crate::congruence::{
    all_congruences, all_system_congruences, cg, cg_plonka, check_factor_theorem, check_si_theorem, from_system_congruence,
    is_subdirectly_irreducible, monolith, permutes, quotient_algebra, quotient_plonka, to_system_congruence, TrivialBase,
    ALGEBRA_CAP, SYSTEM_ELEMENT_CAP, SYSTEM_INDEX_CAP,
};
use crate::direct_system::DirectSystem;
use crate::dot::{congruence_lattice_dot, semilattice_dot, system_dot};
use crate::error::{Diagnostic, Error, Result};
use crate::free::{boolean_free_provider, free_plonka, BOOLEAN_GENERATOR_CAP};
use crate::io::{
    algebra_from_value, algebra_to_value, pairs_from_value, parse_json, partition_from_value, partition_to_value, read_json,
    semilattice_from_value, semilattice_to_value, system_from_value, system_to_value,
};
use crate::partition::Partition;
use crate::plonka::{check_partition_function, check_semilattice_of_subalgebras, compose, decompose, find_partition_function, PartitionFunction};
use crate::term::{counterexample, parse_identity, parse_term, Term};
use crate::varieties::{catalog_algebras, catalog_systems, check_suite, large_systems, suite_by_name};

/// Seed used by randomized commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Environment variable overriding every size cap.
pub const CAP_ENV: &str = "PLONKA_CAP";

#[derive(Debug, Parser)]
#[command(name = "plonka", version, about = "Finite Płonka sums: composition, decomposition, congruences, free algebras")]
pub struct Cli {
    /// Print only the machine section.
    #[arg(long, global = true)]
    pub machine: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Admitted,
    Excluded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotObject {
    Semilattice,
    Congruences,
    System,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an algebra, semilattice or system document.
    Validate { file: PathBuf },
    /// Compose a system into its sum.
    Compose { file: PathBuf },
    /// Decompose an algebra along a partition function term in `x`, `y`.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        pf: Option<String>,
    },
    /// Check the partition-function laws for a term.
    CheckPf {
        file: PathBuf,
        #[arg(long)]
        pf: String,
    },
    /// Check a labelling of elements by index values (a JSON array) as a
    /// semilattice of subalgebras over the given index.
    CheckSos {
        file: PathBuf,
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        index: PathBuf,
    },
    /// List congruences; for a system, also the system congruences and the bijection.
    Congruences {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Generated congruence of `--pairs`, or a randomized comparison of the
    /// fiberwise construction against the direct closure.
    Cg {
        file: PathBuf,
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Quotient by a congruence given as blocks.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        theta: String,
    },
    /// Check the factor-pair characterization for two congruences of a sum.
    Factor {
        file: PathBuf,
        #[arg(long)]
        theta1: String,
        #[arg(long)]
        theta2: String,
    },
    /// Subdirect irreducibility and the monolith.
    Si {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compare irreducibility of the sum over `star(b)` with its prediction.
    StarSi {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "admitted")]
        reading: Reading,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Free algebra of the regularized variety on `n` generators.
    Free {
        #[arg(long, default_value = "boolean")]
        variety: String,
        #[arg(long)]
        generators: usize,
        #[arg(long)]
        emit: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check an algebra (or the sum of a system) against a built-in suite.
    CheckSuite {
        file: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        with_witness: bool,
    },
    /// Regularity of an identity, or its validity in an algebra.
    CheckId {
        identity: String,
        #[arg(long)]
        regular: bool,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// List or emit built-in algebras and systems.
    Catalog {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        emit: Option<String>,
    },
    /// Graphviz text for a semilattice, a congruence lattice or a system.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: DotObject,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub verb: String,
    pub result: Value,
    pub diagnostics: Vec<Diagnostic>,
    pub human: Vec<(String, String)>,
    pub exit_code: i32,
}

impl Report {
    fn new(verb: &str) -> Self {
        Report { verb: verb.to_string(), result: json!({}), diagnostics: Vec::new(), human: Vec::new(), exit_code: 0 }
    }

    fn line(&mut self, key: impl Into<String>, value: impl ToString) {
        self.human.push((key.into(), value.to_string()));
    }

    /// Records failed checks; the exit code becomes 2.
    fn fail(&mut self, diags: impl IntoIterator<Item = Diagnostic>) {
        self.diagnostics.extend(diags);
        if !self.diagnostics.is_empty() && self.exit_code == 0 {
            self.exit_code = 2;
        }
    }

    fn from_error(verb: &str, e: &Error) -> Self {
        let mut r = Report::new(verb);
        let law = match e {
            Error::Parse { .. } => "parse",
            Error::SizeCap { .. } => "size cap",
            _ => "validation",
        };
        r.diagnostics.push(Diagnostic::new(law, e.to_string()));
        if let Error::InvalidSystem(ds) | Error::InvalidMorphism(ds) | Error::NotAPartitionFunction(ds) = e {
            r.diagnostics.extend(ds.iter().cloned());
        }
        r.line("error", e);
        r.exit_code = e.exit_code();
        r
    }

    pub fn machine(&self) -> Value {
        json!({
            "verb": self.verb,
            "exit_code": self.exit_code,
            "result": self.result,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn human_text(&self) -> String {
        let width = self.human.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = format!("plonka {}: {}\n", self.verb, if self.exit_code == 0 { "ok" } else { "failed" });
        for (k, v) in &self.human {
            let pad = width - k.chars().count();
            out.push_str(&format!("  {k}{}  {v}\n", " ".repeat(pad)));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("  ! {d}\n"));
        }
        out
    }

    pub fn render(&self, machine_only: bool) -> String {
        let json = serde_json::to_string_pretty(&self.machine()).expect("report serializes");
        if machine_only {
            format!("{json}\n")
        } else {
            format!("{}--- machine ---\n{json}\n", self.human_text())
        }
    }
}

/// A cap from the flag, else the environment override, else the default.
pub fn effective_cap(flag: Option<usize>, default: usize) -> usize {
    flag.or_else(|| std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok())).unwrap_or(default)
}

fn verb_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Compose { .. } => "compose",
        Command::Decompose { .. } => "decompose",
        Command::CheckPf { .. } => "check-pf",
        Command::CheckSos { .. } => "check-sos",
        Command::Congruences { .. } => "congruences",
        Command::Cg { .. } => "cg",
        Command::Quotient { .. } => "quotient",
        Command::Factor { .. } => "factor",
        Command::Si { .. } => "si",
        Command::StarSi { .. } => "star-si",
        Command::Free { .. } => "free",
        Command::CheckSuite { .. } => "check-suite",
        Command::CheckId { .. } => "check-id",
        Command::Catalog { .. } => "catalog",
        Command::ExportDot { .. } => "export-dot",
    }
}

/// Runs one command. Errors of any kind become a failed report.
pub fn run(cmd: &Command) -> Report {
    let verb = verb_name(cmd);
    match dispatch(verb, cmd) {
        Ok(r) => r,
        Err(e) => Report::from_error(verb, &e),
    }
}

/// Either kind of document that carries elements.
enum Input {
    Algebra(FiniteAlgebra),
    System(DirectSystem),
}

impl Input {
    fn load(path: &Path) -> Result<Input> {
        let v = read_json(path)?;
        if v.get("fibers").is_some() {
            Ok(Input::System(system_from_value(&v, "$")?))
        } else {
            Ok(Input::Algebra(algebra_from_value(&v, "$")?))
        }
    }

    fn algebra(&self) -> Result<FiniteAlgebra> {
        match self {
            Input::Algebra(a) => Ok(a.clone()),
            Input::System(d) => Ok(compose(d)?.algebra),
        }
    }
}

fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    Input::load(path)?.algebra()
}

/// JSON given inline (starting with `[` or `{`) or as a file path.
fn inline_or_file(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        parse_json(arg)
    } else {
        read_json(Path::new(arg))
    }
}

fn partition_arg(arg: &str, labels: &[String]) -> Result<Partition> {
    partition_from_value(&inline_or_file(arg)?, "$", labels)
}

fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::SizeCap { what: what.into(), size, cap });
    }
    Ok(())
}

fn show_partition(p: &Partition, labels: &[String]) -> String {
    let blocks: Vec<String> =
        p.blocks().iter().map(|b| b.iter().map(|&x| labels[x].as_str()).collect::<Vec<_>>().join(",")).collect();
    format!("{{{}}}", blocks.join(" | "))
}

/// Binary terms tried by `decompose` when no `--pf` is given: absorption
/// shapes over every pair of binary operations and the Clifford shape for
/// every binary/unary pair, then the first projection.
fn default_candidates(alg: &FiniteAlgebra) -> Vec<Term> {
    let ops = alg.signature().ops();
    let mut out = Vec::new();
    for f in ops.iter().filter(|o| o.arity == 2) {
        for g in ops.iter().filter(|o| o.arity == 2) {
            out.push(Term::app(&f.name, vec![Term::var("x"), Term::app(&g.name, vec![Term::var("x"), Term::var("y")])]));
        }
        for u in ops.iter().filter(|o| o.arity == 1) {
            out.push(Term::app(
                &f.name,
                vec![Term::var("x"), Term::app(&f.name, vec![Term::var("y"), Term::app(&u.name, vec![Term::var("y")])])],
            ));
        }
    }
    out.push(Term::var("x"));
    out
}

fn dispatch(verb: &str, cmd: &Command) -> Result<Report> {
    let mut r = Report::new(verb);
    match cmd {
        Command::Validate { file } => {
            let v = read_json(file)?;
            let kind = if v.get("fibers").is_some() {
                let d = system_from_value(&v, "$")?;
                r.line("fibers", d.fibers.len());
                r.line("total size", d.total_size());
                "system"
            } else if v.get("signature").is_some() {
                let a = algebra_from_value(&v, "$")?;
                r.line("size", a.size());
                "algebra"
            } else {
                let s = semilattice_from_value(&v, "$")?;
                r.line("size", s.size());
                "semilattice"
            };
            r.line("kind", kind);
            r.line("valid", true);
            r.result = json!({"kind": kind, "valid": true});
        }
        Command::Compose { file } => {
            let v = read_json(file)?;
            let d = system_from_value(&v, "$")?;
            let ps = compose(&d)?;
            r.line("fibers", d.fibers.len());
            r.line("size", ps.size());
            for (i, f) in d.fibers.iter().enumerate() {
                r.line(format!("fiber {i}"), (0..f.size()).map(|k| ps.algebra.label(ps.place[i][k])).collect::<Vec<_>>().join(" "));
            }
            r.result = json!({"algebra": algebra_to_value(&ps.algebra), "locate": ps.locate});
        }
        Command::Decompose { file, pf } => {
            let alg = load_algebra(file)?;
            let (term, table) = match pf {
                Some(t) => {
                    let t = parse_term(t)?;
                    let p = PartitionFunction::from_term(&alg, &t)?;
                    (t, p)
                }
                None => find_partition_function(&alg, &default_candidates(&alg))
                    .ok_or_else(|| Error::Validation("no candidate term is a partition function".into()))?,
            };
            let ps = decompose(&alg, &table)?;
            r.line("partition function", &term);
            r.line("index size", ps.origin.index.size());
            r.line("fiber sizes", ps.origin.fibers.iter().map(|f| f.size().to_string()).collect::<Vec<_>>().join(" "));
            r.result = json!({"partition_function": term.to_string(), "system": system_to_value(&ps.origin), "locate": ps.locate});
        }
        Command::CheckPf { file, pf } => {
            let alg = load_algebra(file)?;
            let t = parse_term(pf)?;
            let table = PartitionFunction::from_term(&alg, &t)?;
            let diags = check_partition_function(&alg, &table);
            r.line("term", &t);
            r.line("partition function", diags.is_empty());
            r.result = json!({"term": t.to_string(), "partition_function": diags.is_empty()});
            r.fail(diags);
        }
        Command::CheckSos { file, blocks, index } => {
            let alg = load_algebra(file)?;
            let order = semilattice_from_value(&read_json(index)?, "$")?;
            let b: Vec<usize> = serde_json::from_value(inline_or_file(blocks)?)
                .map_err(|e| Error::parse("--blocks", e.to_string()))?;
            let ok = check_semilattice_of_subalgebras(&alg, &b, &order)?;
            r.line("semilattice of subalgebras", ok);
            r.result = json!({"semilattice_of_subalgebras": ok});
            if !ok {
                r.fail([Diagnostic::new("semilattice of subalgebras", "some operation leaves the block of the join")]);
            }
        }
        Command::Congruences { file, cap } => congruences(&mut r, &Input::load(file)?, *cap)?,
        Command::Cg { file, pairs, random, seed } => {
            let input = Input::load(file)?;
            let alg = input.algebra()?;
            if let Some(p) = pairs {
                let ps_pairs = pairs_from_value(&inline_or_file(p)?, "$", alg.labels())?;
                let theta = match &input {
                    Input::System(d) => cg_plonka(&compose(d)?, &ps_pairs)?,
                    Input::Algebra(a) => cg(a, ps_pairs.iter().copied()),
                };
                r.line("generated", show_partition(&theta, alg.labels()));
                r.result = json!({"congruence": partition_to_value(&theta, alg.labels())});
            }
            if let Some(n) = random {
                let Input::System(d) = &input else {
                    return Err(Error::Validation("--random compares the fiberwise construction and needs a system".into()));
                };
                let ps = compose(d)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut mismatches = Vec::new();
                for k in 0..*n {
                    let count = rng.gen_range(1..=3);
                    let rel: Vec<(usize, usize)> =
                        (0..count).map(|_| (rng.gen_range(0..ps.size()), rng.gen_range(0..ps.size()))).collect();
                    if cg_plonka(&ps, &rel)? != cg(&ps.algebra, rel.iter().copied()) {
                        mismatches.push(Diagnostic::new("generated congruence", format!("trial {k}: relation {rel:?}")));
                    }
                }
                r.line("trials", n);
                r.line("seed", seed);
                r.line("mismatches", mismatches.len());
                r.result["random"] = json!({"trials": n, "seed": seed, "mismatches": mismatches.len()});
                r.fail(mismatches);
            }
            if pairs.is_none() && random.is_none() {
                return Err(Error::parse("arguments", "give --pairs or --random"));
            }
        }
        Command::Quotient { file, theta } => match Input::load(file)? {
            Input::Algebra(a) => {
                let t = partition_arg(theta, a.labels())?;
                let q = quotient_algebra(&a, &t)?;
                r.line("classes", q.size());
                r.result = json!({"algebra": algebra_to_value(&q)});
            }
            Input::System(d) => {
                let ps = compose(&d)?;
                let t = partition_arg(theta, ps.algebra.labels())?;
                let q = quotient_plonka(&ps, &t)?;
                r.line("index size", q.index.size());
                r.line("classes", q.total_size());
                r.result = json!({"system": system_to_value(&q)});
            }
        },
        Command::Factor { file, theta1, theta2 } => {
            let Input::System(d) = Input::load(file)? else {
                return Err(Error::Validation("factor needs a system".into()));
            };
            let ps = compose(&d)?;
            let labels = ps.algebra.labels().to_vec();
            let t1 = partition_arg(theta1, &labels)?;
            let t2 = partition_arg(theta2, &labels)?;
            let fc = check_factor_theorem(&ps, &t1, &t2)?;
            let witness = non_permuting_witness(&t1, &t2).map(|(x, z)| [labels[x].clone(), labels[z].clone()]);
            r.line("factor pair", fc.factor_pair);
            r.line("permutable", fc.permutable);
            r.line("index factor pair", fc.index_factor_pair);
            r.line("fiber factor pairs", format!("{:?}", fc.fiber_factor_pairs));
            if let Some(w) = &witness {
                r.line("non-permuting pair", format!("({}, {}) in θ1∘θ2, not in θ2∘θ1", w[0], w[1]));
            }
            r.line("characterization holds", fc.holds);
            r.result = json!({
                "factor_pair": fc.factor_pair,
                "permutable": fc.permutable,
                "index_factor_pair": fc.index_factor_pair,
                "fiber_factor_pairs": fc.fiber_factor_pairs,
                "non_permuting_witness": witness,
                "holds": fc.holds,
            });
            if !fc.holds {
                r.fail([Diagnostic::new("factor characterization", "fiberwise criterion disagrees with the direct check")]);
            }
        }
        Command::Si { file, cap } => {
            let alg = load_algebra(file)?;
            let cap = effective_cap(*cap, ALGEBRA_CAP);
            let si = is_subdirectly_irreducible(&alg, cap)?;
            let m = monolith(&alg, cap)?;
            r.line("subdirectly irreducible", si);
            if let Some(m) = &m {
                r.line("monolith", show_partition(m, alg.labels()));
            }
            r.result = json!({"subdirectly_irreducible": si, "monolith": m.map(|m| partition_to_value(&m, alg.labels()))});
        }
        Command::StarSi { file, reading, cap } => {
            let alg = load_algebra(file)?;
            let cap = effective_cap(*cap, ALGEBRA_CAP);
            let reading = match reading {
                Reading::Admitted => TrivialBase::Admitted,
                Reading::Excluded => TrivialBase::Excluded,
            };
            let c = check_si_theorem(&alg, reading, cap)?;
            r.line("star irreducible", c.star_irreducible);
            r.line("base irreducible", c.base_irreducible);
            r.line("base trivial", c.base_trivial);
            r.line("absorbing element", c.absorbing.map_or("none".to_string(), |a| alg.label(a).to_string()));
            r.line("predicted", c.predicted);
            r.line("holds", c.holds);
            r.result = json!({
                "star_irreducible": c.star_irreducible,
                "base_irreducible": c.base_irreducible,
                "base_trivial": c.base_trivial,
                "absorbing": c.absorbing.map(|a| alg.label(a).to_string()),
                "predicted": c.predicted,
                "holds": c.holds,
            });
            if !c.holds {
                r.fail([Diagnostic::new("star irreducibility", "prediction disagrees with brute force")]);
            }
        }
        Command::Free { variety, generators, emit, cap } => {
            if variety != "boolean" {
                return Err(Error::parse("--variety", format!("unknown variety `{variety}` (available: boolean)")));
            }
            check_cap("generator set", *generators, effective_cap(*cap, BOOLEAN_GENERATOR_CAP))?;
            let rep = free_plonka(*generators, &boolean_free_provider())?;
            r.line("generators", generators);
            r.line("fiber sizes", rep.fiber_sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
            r.line("predicted size", rep.predicted);
            r.line("carrier size", rep.actual);
            r.result = json!({
                "variety": variety,
                "generators": generators,
                "fiber_sizes": rep.fiber_sizes,
                "predicted": rep.predicted as u64,
                "size": rep.actual,
                "generator_elements": rep.generators.iter().map(|&g| rep.sum.algebra.label(g).to_string()).collect::<Vec<_>>(),
            });
            if *emit {
                r.result["system"] = system_to_value(&rep.sum.origin);
            }
            if rep.predicted != rep.actual as u128 {
                r.fail([Diagnostic::new("free count", format!("predicted {} but built {}", rep.predicted, rep.actual))]);
            }
        }
        Command::CheckSuite { file, suite, with_witness } => {
            let alg = load_algebra(file)?;
            let s = suite_by_name(suite).ok_or_else(|| Error::parse("--suite", format!("unknown suite `{suite}` (ibsl, clifford, dwb)")))?;
            let rep = check_suite(&alg, &s, *with_witness)?;
            for c in rep.identities.iter().chain(rep.witness.iter()) {
                r.line(&c.label, if c.holds { "holds".to_string() } else { format!("fails at {:?}", c.counterexample.as_ref().unwrap()) });
            }
            r.result = serde_json::to_value(&rep).expect("report serializes");
            let failed = rep.identities.iter().chain(rep.witness.iter()).filter(|c| !c.holds);
            r.fail(failed.map(|c| Diagnostic::new(c.label.clone(), format!("{} fails", c.identity))).collect::<Vec<_>>());
        }
        Command::CheckId { identity, regular, algebra } => {
            let id = parse_identity(identity)?;
            r.line("identity", &id);
            r.result = json!({"identity": id.to_string()});
            if *regular || algebra.is_none() {
                r.line("regular", id.is_regular());
                r.result["regular"] = json!(id.is_regular());
            }
            if let Some(path) = algebra {
                let alg = load_algebra(path)?;
                let cx = counterexample(&alg, &id)?;
                r.line("holds", cx.is_none());
                let named = cx.map(|env| env.into_iter().map(|(k, x)| (k, alg.label(x).to_string())).collect::<std::collections::BTreeMap<_, _>>());
                r.result["holds"] = json!(named.is_none());
                r.result["counterexample"] = json!(named);
                if let Some(env) = named {
                    r.fail([Diagnostic::new("identity", format!("fails at {env:?}"))]);
                }
            }
        }
        Command::Catalog { list, emit } => {
            let algs = catalog_algebras();
            let systems: Vec<_> = catalog_systems().into_iter().chain(large_systems()).collect();
            if let Some(name) = emit {
                if let Some(s) = systems.iter().find(|s| &s.name == name) {
                    r.line("system", name);
                    r.result = json!({"name": name, "system": system_to_value(&s.system)});
                } else if let Some(a) = algs.iter().find(|a| &a.name == name) {
                    r.line("algebra", name);
                    r.result = json!({"name": name, "algebra": algebra_to_value(&a.algebra)});
                } else {
                    return Err(Error::parse("--emit", format!("no catalog entry named `{name}`")));
                }
            } else if *list {
                for a in &algs {
                    r.line(&a.name, format!("algebra, {} elements", a.algebra.size()));
                }
                for s in &systems {
                    r.line(&s.name, format!("system, {} fibers, {} elements", s.system.fibers.len(), s.system.total_size()));
                }
                r.result = json!({
                    "algebras": algs.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
                    "systems": systems.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
                });
            } else {
                return Err(Error::parse("arguments", "give --list or --emit <name>"));
            }
        }
        Command::ExportDot { file, what } => {
            let v = read_json(file)?;
            let dot = match what {
                DotObject::Semilattice => {
                    let s = if v.get("fibers").is_some() {
                        system_from_value(&v, "$")?.index
                    } else {
                        semilattice_from_value(&v, "$")?
                    };
                    semilattice_dot(&s)
                }
                DotObject::Congruences => {
                    let alg = crate::io::algebra_or_sum_from_value(&v)?;
                    let cons = all_congruences(&alg, effective_cap(None, ALGEBRA_CAP))?;
                    congruence_lattice_dot(alg.labels(), &cons)
                }
                DotObject::System => system_dot(&system_from_value(&v, "$")?),
            };
            r.line("lines", dot.lines().count());
            r.result = json!({"dot": dot});
        }
    }
    Ok(r)
}

/// `(x, z)` with `x θ1 y θ2 z` for some `y` but not `x θ2 y' θ1 z`.
fn non_permuting_witness(t1: &Partition, t2: &Partition) -> Option<(usize, usize)> {
    if permutes(t1, t2) {
        return None;
    }
    let a = t1.to_relation().compose(&t2.to_relation());
    let b = t2.to_relation().compose(&t1.to_relation());
    let w = a.pairs().find(|&(x, z)| !b.contains(x, z));
    w
}

fn congruences(r: &mut Report, input: &Input, cap: Option<usize>) -> Result<()> {
    match input {
        Input::Algebra(a) => {
            let cons = all_congruences(a, effective_cap(cap, ALGEBRA_CAP))?;
            r.line("congruences", cons.len());
            for (k, c) in cons.iter().enumerate() {
                r.line(format!("θ{k}"), show_partition(c, a.labels()));
            }
            r.result = json!({"congruences": cons.iter().map(|c| partition_to_value(c, a.labels())).collect::<Vec<_>>()});
        }
        Input::System(d) => {
            let element_cap = effective_cap(cap, SYSTEM_ELEMENT_CAP);
            let index_cap = effective_cap(cap, SYSTEM_INDEX_CAP).max(SYSTEM_INDEX_CAP);
            check_cap("system", d.total_size(), element_cap)?;
            let ps = compose(d)?;
            let labels = ps.algebra.labels().to_vec();
            let cons = all_congruences(&ps.algebra, effective_cap(cap, ALGEBRA_CAP))?;
            let scs = all_system_congruences(d, element_cap, index_cap)?;
            r.line("algebra congruences", cons.len());
            r.line("system congruences", scs.len());
            let mut rows = Vec::new();
            let mut bijective = cons.len() == scs.len();
            for (k, theta) in cons.iter().enumerate() {
                let sc = to_system_congruence(&ps, theta)?;
                let back = from_system_congruence(&ps, &sc)?;
                let pos = scs.iter().position(|s| s == &sc);
                bijective &= pos.is_some() && &back == theta;
                let fibers: Vec<String> =
                    sc.fibers.iter().zip(&d.fibers).map(|(p, f)| show_partition(p, f.labels())).collect();
                let index_labels: Vec<String> = (0..d.index.size()).map(|i| i.to_string()).collect();
                r.line(
                    format!("θ{k}"),
                    format!("{}  ↔  C = {}; {}", show_partition(theta, &labels), show_partition(&sc.index, &index_labels), fibers.join("; ")),
                );
                rows.push(json!({
                    "congruence": partition_to_value(theta, &labels),
                    "index": partition_to_value(&sc.index, &index_labels),
                    "fibers": sc.fibers.iter().zip(&d.fibers).map(|(p, f)| partition_to_value(p, f.labels())).collect::<Vec<_>>(),
                }));
            }
            r.line("bijection", bijective);
            r.result = json!({
                "algebra_congruences": cons.len(),
                "system_congruences": scs.len(),
                "bijection": bijective,
                "table": rows,
                "index": semilattice_to_value(&d.index),
            });
            if !bijective {
                r.fail([Diagnostic::new("congruence correspondence", "system congruences do not match the sum's congruences")]);
            }
        }
    }
    Ok(())
}
