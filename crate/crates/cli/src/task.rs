//! Bias, background knowledge and example files.

use std::collections::{BTreeMap, BTreeSet};

use lff_core::bias::{Bias, Direction};
use lff_core::eval::{ExampleSet, KnowledgeBase};
use lff_core::term::{Clause, Literal, PredSig, Sym, Term};

use crate::syntax::{self, parse_clauses, print_clause, print_literal, Pos, SyntaxError, TUPLE};

pub const DEFAULT_MAX_CLAUSES: usize = 1;
pub const DEFAULT_MAX_VARS: usize = 6;
pub const DEFAULT_MAX_BODY: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum TaskError {
    #[error("{file}: {err}")]
    Syntax { file: &'static str, err: SyntaxError },
    #[error("{file}:{pos}: {msg}")]
    At { file: &'static str, pos: Pos, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(file: &'static str, pos: Pos, msg: impl Into<String>) -> TaskError {
    TaskError::At { file, pos, msg: msg.into() }
}

fn clauses(file: &'static str, src: &str) -> Result<Vec<(Clause, Pos)>, TaskError> {
    parse_clauses(src).map_err(|err| TaskError::Syntax { file, err })
}

fn count(t: &Term) -> Option<usize> {
    match t {
        Term::Int(n) => usize::try_from(*n).ok(),
        _ => None,
    }
}

fn name(t: &Term) -> Option<Sym> {
    match t {
        Term::Atom(a) => Some(a.clone()),
        _ => None,
    }
}

/// `(a,b)` or a bare `a`.
fn tuple_atoms(t: &Term) -> Option<Vec<Sym>> {
    match t {
        Term::Atom(a) => Some(vec![a.clone()]),
        Term::Compound(f, items) if f.as_str() == TUPLE => items.iter().map(name).collect(),
        _ => None,
    }
}

pub fn parse_bias(src: &str) -> Result<Bias, TaskError> {
    const F: &str = "bias";
    let mut limits: BTreeMap<String, usize> = BTreeMap::new();
    let mut head: Option<PredSig> = None;
    let mut body: Vec<PredSig> = Vec::new();
    let mut types: Vec<(Sym, Vec<Sym>, Pos)> = Vec::new();
    let mut dirs: Vec<(Sym, Vec<Sym>, Pos)> = Vec::new();
    for (c, pos) in clauses(F, src)? {
        let Some(h) = c.head.as_ref().filter(|_| c.body.is_empty()) else {
            return Err(at(F, pos, "bias directives are facts"));
        };
        let args = &h.args;
        match (h.pred.as_str(), args.len()) {
            (d @ ("max_clause" | "max_vars" | "max_body"), 1) => {
                let n = count(&args[0]).ok_or_else(|| at(F, pos, format!("{d} expects a count")))?;
                if limits.insert(d.to_string(), n).is_some() {
                    return Err(at(F, pos, format!("duplicate {d} directive")));
                }
            }
            (d @ ("head_pred" | "body_pred"), 2) => {
                let (Some(p), Some(a)) = (name(&args[0]), count(&args[1])) else {
                    return Err(at(F, pos, format!("{d} expects a name and an arity")));
                };
                let sig = PredSig { name: p, arity: a };
                if d == "head_pred" {
                    if head.replace(sig).is_some() {
                        return Err(at(F, pos, "duplicate head_pred directive"));
                    }
                } else if body.contains(&sig) {
                    return Err(at(F, pos, format!("duplicate body_pred {sig}")));
                } else {
                    body.push(sig);
                }
            }
            (d @ ("type" | "direction"), 2) => {
                let (Some(p), Some(items)) = (name(&args[0]), tuple_atoms(&args[1])) else {
                    return Err(at(F, pos, format!("{d} expects a name and a tuple")));
                };
                let list = if d == "type" { &mut types } else { &mut dirs };
                if list.iter().any(|(q, ..)| *q == p) {
                    return Err(at(F, pos, format!("duplicate {d} directive for {p}")));
                }
                list.push((p, items, pos));
            }
            (other, n) => return Err(at(F, pos, format!("unknown directive {other}/{n}"))),
        }
    }
    let head = head.ok_or_else(|| TaskError::Invalid("bias: no head_pred directive".into()))?;
    let declared: Vec<PredSig> = std::iter::once(head.clone()).chain(body.iter().cloned()).collect();
    let resolve = |p: &Sym, n: usize, pos: Pos, what: &str| -> Result<PredSig, TaskError> {
        let mut found = declared.iter().filter(|s| s.name == *p);
        let sig = found.next().ok_or_else(|| at(F, pos, format!("{what} for undeclared predicate {p}")))?;
        if found.next().is_some() {
            return Err(at(F, pos, format!("{what} for {p} is ambiguous: declared with several arities")));
        }
        if sig.arity != n {
            return Err(at(F, pos, format!("{what} for {sig} has {n} entries")));
        }
        Ok(sig.clone())
    };
    let mut type_map = BTreeMap::new();
    for (p, ts, pos) in types {
        type_map.insert(resolve(&p, ts.len(), pos, "type")?, ts);
    }
    let mut dir_map = BTreeMap::new();
    for (p, ds, pos) in dirs {
        let sig = resolve(&p, ds.len(), pos, "direction")?;
        let ds = ds
            .iter()
            .map(|d| match d.as_str() {
                "in" => Ok(Direction::In),
                "out" => Ok(Direction::Out),
                other => Err(at(F, pos, format!("unknown direction {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        dir_map.insert(sig, ds);
    }
    let limit = |d: &str, default| limits.get(d).copied().unwrap_or(default);
    Bias::new(
        head,
        body,
        type_map,
        dir_map,
        limit("max_vars", DEFAULT_MAX_VARS),
        limit("max_body", DEFAULT_MAX_BODY),
        limit("max_clause", DEFAULT_MAX_CLAUSES),
    )
    .map_err(|e| TaskError::Invalid(format!("bias: {e}")))
}

/// Background clauses as written, without the standard list relations.
pub fn parse_bk(src: &str) -> Result<Vec<Clause>, TaskError> {
    clauses("bk", src)?
        .into_iter()
        .map(|(c, pos)| if c.head.is_some() { Ok(c) } else { Err(at("bk", pos, "background clauses need a head")) })
        .collect()
}

pub fn parse_examples(src: &str) -> Result<ExampleSet, TaskError> {
    const F: &str = "examples";
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (c, p) in clauses(F, src)? {
        let h = c.head.as_ref().filter(|h| c.body.is_empty() && h.args.len() == 1);
        let target = match h.map(|h| h.pred.as_str()) {
            Some("pos") => &mut pos,
            Some("neg") => &mut neg,
            _ => return Err(at(F, p, "expected pos(..) or neg(..)")),
        };
        let lit = match &h.unwrap().args[0] {
            Term::Atom(a) => Literal { pred: a.clone(), args: Vec::new() },
            Term::Compound(f, args) if f.as_str() != TUPLE && f.as_str() != lff_core::term::CONS => {
                Literal { pred: f.clone(), args: args.clone() }
            }
            other => return Err(at(F, p, format!("`{other}` is not an atom"))),
        };
        target.push(lit);
    }
    if pos.is_empty() {
        return Err(TaskError::Invalid("examples: no positive examples".into()));
    }
    ExampleSet::new(pos, neg).map_err(|e| TaskError::Invalid(format!("examples: {e}")))
}

#[derive(Clone, Debug)]
pub struct TaskBundle {
    pub name: String,
    pub bias: Bias,
    pub bk: KnowledgeBase,
    /// The clauses from the background file; `bk` adds the list relations.
    pub bk_extra: Vec<Clause>,
    pub examples: ExampleSet,
}

impl PartialEq for TaskBundle {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name && self.bias == o.bias && self.bk_extra == o.bk_extra && self.examples == o.examples
    }
}

impl TaskBundle {
    pub fn parse(name: &str, bias: &str, bk: &str, exs: &str) -> Result<TaskBundle, TaskError> {
        let bias = parse_bias(bias)?;
        let bk_extra = parse_bk(bk)?;
        let examples = parse_examples(exs)?;
        let kb = KnowledgeBase::standard_with(bk_extra.clone()).map_err(|e| TaskError::Invalid(format!("bk: {e}")))?;
        let bundle = TaskBundle { name: name.to_string(), bias, bk: kb, bk_extra, examples };
        bundle.cross_check()?;
        Ok(bundle)
    }

    fn cross_check(&self) -> Result<(), TaskError> {
        let bad = |m: String| Err(TaskError::Invalid(m));
        if let Some(t) = self.examples.target() {
            if t != self.bias.head {
                return bad(format!("examples are for {t} but the bias head is {}", self.bias.head));
            }
        }
        let mut arities: BTreeMap<&Sym, BTreeSet<usize>> = BTreeMap::new();
        for c in self.bk.clauses().clauses() {
            for l in c.literals() {
                arities.entry(&l.pred).or_default().insert(l.arity());
            }
        }
        for (p, ns) in &arities {
            if ns.len() > 1 {
                return bad(format!("bk: {p} is used with arities {ns:?}"));
            }
        }
        for b in &self.bias.body {
            if !self.bk.defines(b) {
                return match arities.get(&b.name) {
                    Some(ns) => bad(format!("body predicate {b} is defined with arity {ns:?}")),
                    None => bad(format!("body predicate {b} is not defined by the background knowledge")),
                };
            }
        }
        if self.bk.defines(&self.bias.head) {
            return bad(format!("the background knowledge already defines {}", self.bias.head));
        }
        Ok(())
    }

    /// Canonical texts for the three files.
    pub fn print(&self) -> (String, String, String) {
        let bias = self.bias.to_text();
        let bk: String = self.bk_extra.iter().map(|c| print_clause(c) + "\n").collect();
        let mut exs = String::new();
        for (sign, list) in [("pos", &self.examples.pos), ("neg", &self.examples.neg)] {
            for e in list.iter() {
                exs += &format!("{sign}({}).\n", print_literal(e));
            }
        }
        (bias, bk, exs)
    }
}

/// A program file: clauses of the target predicate, possibly goal clauses.
pub fn parse_program(src: &str) -> Result<lff_core::term::Program, TaskError> {
    Ok(lff_core::term::Program::new(clauses("program", src)?.into_iter().map(|(c, _)| c)))
}

pub fn parse_literal(src: &str) -> Result<Literal, TaskError> {
    match syntax::parse_term(src).map_err(|err| TaskError::Syntax { file: "literal", err })? {
        Term::Atom(a) => Ok(Literal { pred: a, args: Vec::new() }),
        Term::Compound(f, args) => Ok(Literal { pred: f, args }),
        other => Err(TaskError::Invalid(format!("`{other}` is not an atom"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZENDO: &str = "\
head_pred(zendo,1).
body_pred(piece,2).
body_pred(contact,2).
body_pred(coord1,2).
body_pred(coord2,2).
body_pred(size,2).
body_pred(blue,1).
body_pred(green,1).
body_pred(red,1).
body_pred(small,1).
body_pred(medium,1).
body_pred(large,1).
body_pred(upright,1).
body_pred(lhs,1).
body_pred(rhs,1).
body_pred(strange,1).

type(zendo,(state,)).
type(piece,(state,piece)).
type(contact,(piece,piece)).
type(coord1,(piece,real)).
type(coord2,(piece,real)).
type(size,(piece,real)).
type(blue,(piece,)).
type(green,(piece,)).
type(red,(piece,)).
type(small,(real,)).
type(medium,(real,)).
type(large,(real,)).
type(upright,(piece,)).
type(lhs,(piece,)).
type(rhs,(piece,)).
type(strange,(piece,)).

direction(zendo,(in,)).
direction(piece,(in,out)).
direction(contact,(in,out)).
direction(coord1,(in,out)).
direction(coord2,(in,out)).
direction(size,(in,out)).
direction(blue,(in,)).
direction(green,(in,)).
direction(red,(in,)).
direction(small,(in,)).
direction(medium,(in,)).
direction(large,(in,)).
direction(upright,(in,)).
direction(lhs,(in,)).
direction(rhs,(in,)).
direction(strange,(in,)).
max_vars(6).
";

    #[test]
    fn zendo_bias() {
        let b = parse_bias(ZENDO).unwrap();
        assert_eq!(b.head, PredSig::new("zendo", 1));
        assert_eq!(b.body.len(), 15);
        assert_eq!(b.max_vars, 6);
        assert_eq!(b.max_clauses, DEFAULT_MAX_CLAUSES);
        assert_eq!(b.types[&PredSig::new("coord1", 2)], vec![Sym::new("piece"), Sym::new("real")]);
        assert_eq!(parse_bias(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn bias_errors() {
        let base = "head_pred(f,1).\ntype(f,(t,)).\ndirection(f,(in,)).\n";
        let dup = format!("{base}max_vars(3).\nmax_vars(4).\n");
        let e = parse_bias(&dup).unwrap_err().to_string();
        assert!(e.contains("5:1") && e.contains("duplicate max_vars"), "{e}");
        let e = parse_bias(&format!("{base}type(g,(t,)).\n")).unwrap_err().to_string();
        assert!(e.contains("undeclared"), "{e}");
        let e = parse_bias("head_pred(f,1).\ntype(f,(t,u)).\ndirection(f,(in,)).\n").unwrap_err().to_string();
        assert!(e.contains("2 entries"), "{e}");
        let e = parse_bias("head_pred(f,1).\ndirection(f,(in,)).\n").unwrap_err().to_string();
        assert!(e.contains("no type declaration"), "{e}");
        let e = parse_bias(&format!("{base}direction(f,(up,)).\n")).unwrap_err().to_string();
        assert!(e.contains("duplicate direction"), "{e}");
        assert!(parse_bias(&format!("{base}frob(1).\n")).is_err());
        assert!(parse_bias("max_vars(3).\n").is_err());
    }

    #[test]
    fn example_literals() {
        let e = parse_examples("pos(f([i,j,c,a,i],i)).\nneg(f([a],b)).\n").unwrap();
        assert_eq!(print_literal(&e.pos[0]), "f([i,j,c,a,i],i)");
        assert_eq!(e.neg.len(), 1);
        let e = parse_examples("").unwrap_err().to_string();
        assert!(e.contains("no positive examples"), "{e}");
        assert!(parse_examples("neg(f(a)).\n").unwrap_err().to_string().contains("no positive examples"));
        assert!(parse_examples("pos(f(X)).\n").unwrap_err().to_string().contains("not ground"));
        assert!(parse_examples("p(f(a)).\n").is_err());
    }

    fn last_bias() -> &'static str {
        "max_clause(2).\nmax_vars(5).\nmax_body(5).\nhead_pred(f,2).\nbody_pred(head,2).\nbody_pred(tail,2).\n\
         body_pred(empty,1).\ntype(f,(list,element)).\ntype(head,(list,element)).\ntype(tail,(list,list)).\n\
         type(empty,(list,)).\ndirection(f,(in,out)).\ndirection(head,(in,out)).\ndirection(tail,(in,out)).\n\
         direction(empty,(in,)).\n"
    }

    #[test]
    fn bundle_cross_references() {
        let exs = "pos(f([a,b],b)).\nneg(f([a,b],a)).\n";
        let b = TaskBundle::parse("t", last_bias(), "", exs).unwrap();
        let (bias, bk, ex) = b.print();
        assert_eq!(TaskBundle::parse("t", &bias, &bk, &ex).unwrap(), b);
        let e = TaskBundle::parse("t", last_bias(), "", "pos(g([a],a)).\n").unwrap_err().to_string();
        assert!(e.contains("bias head"), "{e}");
        let missing = last_bias().replace("body_pred(empty,1).", "body_pred(empty,1).\nbody_pred(nope,1).")
            + "type(nope,(list,)).\ndirection(nope,(in,)).\n";
        let e = TaskBundle::parse("t", &missing, "", exs).unwrap_err().to_string();
        assert!(e.contains("nope/1"), "{e}");
        let e = TaskBundle::parse("t", &missing, "nope(a,b).\n", exs).unwrap_err().to_string();
        assert!(e.contains("arity"), "{e}");
        let e = TaskBundle::parse("t", last_bias(), ":- head(A,B).\n", exs).unwrap_err().to_string();
        assert!(e.contains("bk:1:1"), "{e}");
        let e = TaskBundle::parse("t", last_bias(), "f(a,b).\n", exs).unwrap_err().to_string();
        assert!(e.contains("already defines"), "{e}");
    }
}
