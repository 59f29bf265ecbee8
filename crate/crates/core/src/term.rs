//! Terms, identities, their text syntax and exhaustive evaluation.
//!
//! Syntax is parenthesized prefix form, `(join x (meet x y))`, with
//! constants written as empty applications, `(one)`. A bare name is a
//! variable. Binary infix products such as `x.y` or `(x * y) * z` are also
//! accepted; the symbol itself becomes the operation name and products
//! associate to the left.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::algebra::{FiniteAlgebra, Signature, Tuples};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.to_string(), args)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Checks operation names and arities against a signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = sig.arity(op).ok_or_else(|| Error::UnknownOperation(op.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch { op: op.clone(), expected: arity, found: args.len() });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    /// Both sides mention exactly the same variables.
    pub fn is_regular(&self) -> bool {
        self.lhs.vars() == self.rhs.vars()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.lhs, self.rhs)
    }
}

pub fn is_regular(id: &Identity) -> bool {
    id.is_regular()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Name(String),
    Symbol(String),
}

const SYMBOLS: &[char] = &['.', '*', '+', '·', '∘', '∨', '∧', '^', '&', '|', '/', '\\'];

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '(' {
            chars.next();
            out.push(Token::Open);
        } else if c == ')' {
            chars.next();
            out.push(Token::Close);
        } else if SYMBOLS.contains(&c) {
            chars.next();
            out.push(Token::Symbol(c.to_string()));
        } else {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_whitespace() || d == '(' || d == ')' || SYMBOLS.contains(&d) {
                    break;
                }
                name.push(d);
                chars.next();
            }
            out.push(Token::Name(name));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("term token {}", self.pos), msg)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn infix(&mut self) -> Result<Term> {
        let mut acc = self.primary()?;
        while let Some(Token::Symbol(s)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.primary()?;
            acc = Term::App(s, vec![acc, rhs]);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.next() {
            Some(Token::Name(n)) => Ok(Term::Var(n)),
            Some(Token::Open) => {
                let inner = match self.peek().cloned() {
                    Some(Token::Name(head)) => {
                        let infix_follows = matches!(self.tokens.get(self.pos + 1), Some(Token::Symbol(_)));
                        if infix_follows {
                            self.infix()?
                        } else {
                            self.pos += 1;
                            let mut args = Vec::new();
                            while !matches!(self.peek(), Some(Token::Close) | None) {
                                args.push(self.primary()?);
                            }
                            Term::App(head, args)
                        }
                    }
                    Some(Token::Symbol(head)) => {
                        self.pos += 1;
                        let mut args = Vec::new();
                        while !matches!(self.peek(), Some(Token::Close) | None) {
                            args.push(self.primary()?);
                        }
                        Term::App(head, args)
                    }
                    Some(Token::Open) => self.infix()?,
                    _ => return Err(self.err("expected an operation name after `(`")),
                };
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(Token::Close) => Err(self.err("unexpected `)`")),
            Some(Token::Symbol(s)) => Err(self.err(&format!("unexpected operator `{s}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let t = p.infix()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

/// Parses `lhs ≈ rhs` (an ASCII `=` also works).
pub fn parse_identity(text: &str) -> Result<Identity> {
    let (l, r) = text
        .split_once('≈')
        .or_else(|| text.split_once('='))
        .ok_or_else(|| Error::parse("identity", "missing `≈` between the two sides"))?;
    Ok(Identity::new(parse_term(l)?, parse_term(r)?))
}

impl FromStr for Term {
    type Err = Error;
    fn from_str(s: &str) -> Result<Term> {
        parse_term(s)
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Identity> {
        parse_identity(s)
    }
}

/// A term with operation names resolved to table indices and variables to
/// positions in a fixed variable list.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Var(usize),
    App(usize, Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn new(term: &Term, sig: &Signature, vars: &[String]) -> Result<Compiled> {
        match term {
            Term::Var(v) => vars
                .iter()
                .position(|w| w == v)
                .map(Compiled::Var)
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(op, args) => {
                let k = sig.index_of(op).ok_or_else(|| Error::UnknownOperation(op.clone()))?;
                let arity = sig.ops()[k].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch { op: op.clone(), expected: arity, found: args.len() });
                }
                let args = args.iter().map(|a| Compiled::new(a, sig, vars)).collect::<Result<_>>()?;
                Ok(Compiled::App(k, args))
            }
        }
    }

    pub(crate) fn eval(&self, alg: &FiniteAlgebra, env: &[usize]) -> usize {
        match self {
            Compiled::Var(i) => env[*i],
            Compiled::App(op, args) => {
                let vals: Vec<usize> = args.iter().map(|a| a.eval(alg, env)).collect();
                alg.apply(*op, &vals)
            }
        }
    }
}

pub fn eval_term(alg: &FiniteAlgebra, term: &Term, assignment: &BTreeMap<String, usize>) -> Result<usize> {
    let vars: Vec<String> = assignment.keys().cloned().collect();
    let env: Vec<usize> = assignment.values().copied().collect();
    if let Some(&bad) = env.iter().find(|&&x| x >= alg.size()) {
        return Err(Error::IndexOutOfRange { index: bad, size: alg.size() });
    }
    Ok(Compiled::new(term, alg.signature(), &vars)?.eval(alg, &env))
}

/// An assignment falsifying the identity, searched exhaustively.
pub fn counterexample(alg: &FiniteAlgebra, id: &Identity) -> Result<Option<BTreeMap<String, usize>>> {
    let vars: Vec<String> = id.vars().into_iter().collect();
    let lhs = Compiled::new(&id.lhs, alg.signature(), &vars)?;
    let rhs = Compiled::new(&id.rhs, alg.signature(), &vars)?;
    for env in Tuples::new(alg.size(), vars.len()) {
        if lhs.eval(alg, &env) != rhs.eval(alg, &env) {
            return Ok(Some(vars.iter().cloned().zip(env).collect()));
        }
    }
    Ok(None)
}

pub fn satisfies_identity(alg: &FiniteAlgebra, id: &Identity) -> Result<bool> {
    Ok(counterexample(alg, id)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_element_lattice() -> FiniteAlgebra {
        let sig = Signature::new([("join", 2), ("meet", 2), ("one", 0)]).unwrap();
        FiniteAlgebra::from_fn(sig, vec!["0".into(), "1".into()], |op, a| match op {
            0 => a[0] | a[1],
            1 => a[0] & a[1],
            _ => 1,
        })
        .unwrap()
    }

    #[test]
    fn parses_prefix_form() {
        let t = parse_term("(join x (meet x y))").unwrap();
        assert_eq!(t, Term::app("join", vec![Term::var("x"), Term::app("meet", vec![Term::var("x"), Term::var("y")])]));
        assert_eq!(t.to_string(), "(join x (meet x y))");
        assert_eq!(parse_term("(one)").unwrap(), Term::app("one", vec![]));
    }

    #[test]
    fn parses_infix_products() {
        let id = parse_identity("x.y ≈ x").unwrap();
        assert_eq!(id.lhs, Term::app(".", vec![Term::var("x"), Term::var("y")]));
        assert!(!id.is_regular());
        let t = parse_term("(x * y) * z").unwrap();
        assert_eq!(t.to_string(), "(* (* x y) z)");
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(parse_term("(join x").is_err());
        assert!(parse_term("x y").is_err());
        assert!(parse_term(")").is_err());
        assert!(parse_identity("(join x x)").is_err());
    }

    #[test]
    fn evaluation_errors() {
        let l = two_element_lattice();
        let env = BTreeMap::from([("x".to_string(), 1)]);
        assert_eq!(eval_term(&l, &parse_term("(join x (one))").unwrap(), &env), Ok(1));
        assert!(matches!(eval_term(&l, &parse_term("(neg x)").unwrap(), &env), Err(Error::UnknownOperation(_))));
        assert!(matches!(eval_term(&l, &parse_term("(join x)").unwrap(), &env), Err(Error::ArityMismatch { .. })));
        assert!(matches!(eval_term(&l, &parse_term("(join x y)").unwrap(), &env), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn absorption_holds_in_two_element_lattice() {
        let l = two_element_lattice();
        assert!(satisfies_identity(&l, &parse_identity("(join x (meet x y)) ≈ x").unwrap()).unwrap());
        let cx = counterexample(&l, &parse_identity("(meet x y) ≈ x").unwrap()).unwrap().unwrap();
        assert_eq!(cx, BTreeMap::from([("x".to_string(), 1), ("y".to_string(), 0)]));
    }
}
