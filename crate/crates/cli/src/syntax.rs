//! Tokenizer and parser for the Prolog-like task file syntax.

use std::fmt;

use lff_core::term::{Clause, Literal, Sym, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Atom(String),
    Var(String),
    Int(i64),
    Open,
    Close,
    LBrack,
    RBrack,
    Comma,
    Bar,
    End,
    Neck,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(a) => write!(f, "`{a}`"),
            Tok::Var(v) => write!(f, "`{v}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::End => f.write_str("`.`"),
            Tok::Neck => f.write_str("`:-`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| SyntaxError { pos: Pos { line, col }, msg };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let start = i;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => out.push((Tok::Open, pos)),
            ')' => out.push((Tok::Close, pos)),
            '[' => out.push((Tok::LBrack, pos)),
            ']' => out.push((Tok::RBrack, pos)),
            ',' => out.push((Tok::Comma, pos)),
            '|' => out.push((Tok::Bar, pos)),
            '.' => out.push((Tok::End, pos)),
            ':' if chars.get(i + 1) == Some(&'-') => {
                out.push((Tok::Neck, pos));
                i += 2;
                col += 2;
                continue;
            }
            '\'' => {
                let mut s = String::new();
                i += 1;
                while i < chars.len() {
                    if chars[i] == '\'' {
                        if chars.get(i + 1) != Some(&'\'') {
                            break;
                        }
                        i += 1;
                    } else if chars[i] == '\n' {
                        return Err(err(pos.line, pos.col, "unterminated quoted atom".into()));
                    }
                    s.push(chars[i]);
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err(pos.line, pos.col, "unterminated quoted atom".into()));
                }
                i += 1;
                col += i - start;
                out.push((Tok::Atom(s), pos));
                continue;
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| err(line, col, format!("integer out of range: {text}")))?;
                col += i - start;
                out.push((Tok::Int(n), pos));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                if c.is_uppercase() || c == '_' {
                    out.push((Tok::Var(text), pos));
                } else {
                    out.push((Tok::Atom(text), pos));
                }
                continue;
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

/// A parsed file: a sequence of clauses with their start positions.
pub fn parse_clauses(src: &str) -> Result<Vec<(Clause, Pos)>, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, fresh: 0, eof: end_pos(src) };
    let mut out = Vec::new();
    while p.i < p.toks.len() {
        let pos = p.pos();
        out.push((p.clause()?, pos));
    }
    Ok(out)
}

/// Parses a single term, for command-line arguments and tests.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, fresh: 0, eof: end_pos(src) };
    let t = p.term()?;
    if p.i < p.toks.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

fn end_pos(src: &str) -> Pos {
    let line = src.lines().count().max(1);
    let col = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

/// Functor given to parenthesised tuples such as `(list,element)`.
pub const TUPLE: &str = "";

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    fresh: usize,
    eof: Pos,
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.eof, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn unexpected(&self, want: &str) -> SyntaxError {
        let msg = match self.peek() {
            Some(t) => format!("expected {want}, found {t}"),
            None => format!("expected {want}, found end of input"),
        };
        SyntaxError { pos: self.pos(), msg }
    }

    fn expect(&mut self, t: Tok, want: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.unexpected(want))
        }
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        // anonymous variables are numbered per clause
        self.fresh = 0;
        if self.peek() == Some(&Tok::Neck) {
            self.i += 1;
            let body = self.body()?;
            self.expect(Tok::End, "`.`")?;
            return Ok(Clause::goal(body));
        }
        let head = self.literal()?;
        let body = if self.peek() == Some(&Tok::Neck) {
            self.i += 1;
            self.body()?
        } else {
            Vec::new()
        };
        self.expect(Tok::End, "`.` or `:-`")?;
        Ok(Clause::rule(head, body))
    }

    fn body(&mut self) -> Result<Vec<Literal>, SyntaxError> {
        let mut out = vec![self.literal()?];
        while self.peek() == Some(&Tok::Comma) {
            self.i += 1;
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let pos = self.pos();
        match self.term()? {
            Term::Atom(a) => Ok(Literal { pred: a, args: Vec::new() }),
            Term::Compound(f, args) if f.as_str() != TUPLE && f.as_str() != lff_core::term::CONS => {
                Ok(Literal { pred: f, args })
            }
            other => Err(SyntaxError { pos, msg: format!("expected a literal, found `{other}`") }),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let Some(t) = self.peek().cloned() else { return Err(self.unexpected("a term")) };
        match t {
            Tok::Int(n) => {
                self.i += 1;
                Ok(Term::Int(n))
            }
            Tok::Var(v) => {
                self.i += 1;
                if v == "_" {
                    self.fresh += 1;
                    Ok(Term::Var(Sym::from(format!("_G{}", self.fresh))))
                } else {
                    Ok(Term::Var(Sym::from(v)))
                }
            }
            Tok::Atom(a) => {
                self.i += 1;
                if self.peek() == Some(&Tok::Open) {
                    self.i += 1;
                    let args = self.args(Tok::Close, "`,` or `)`")?;
                    Ok(Term::Compound(Sym::from(a), args))
                } else {
                    Ok(Term::Atom(Sym::from(a)))
                }
            }
            Tok::LBrack => {
                self.i += 1;
                if self.peek() == Some(&Tok::RBrack) {
                    self.i += 1;
                    return Ok(Term::nil());
                }
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.i += 1;
                    items.push(self.term()?);
                }
                let tail = if self.peek() == Some(&Tok::Bar) {
                    self.i += 1;
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBrack, "`,`, `|` or `]`")?;
                Ok(items.into_iter().rev().fold(tail, |t, h| Term::cons(h, t)))
            }
            Tok::Open => {
                self.i += 1;
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.i += 1;
                    if self.peek() == Some(&Tok::Close) {
                        break;
                    }
                    items.push(self.term()?);
                }
                self.expect(Tok::Close, "`,` or `)`")?;
                Ok(Term::Compound(Sym::new(TUPLE), items))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn args(&mut self, close: Tok, want: &str) -> Result<Vec<Term>, SyntaxError> {
        let mut out = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Comma) => {
                    self.i += 1;
                    out.push(self.term()?);
                }
                Some(t) if *t == close => {
                    self.i += 1;
                    return Ok(out);
                }
                _ => return Err(self.unexpected(want)),
            }
        }
    }
}

fn plain_atom(a: &str) -> bool {
    let mut cs = a.chars();
    a == lff_core::term::NIL
        || cs.next().is_some_and(|c| c.is_lowercase()) && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// Renders a term in the syntax [`parse_term`] reads, quoting atoms where
/// needed.
pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(s: &mut String, t: &Term) {
    match t {
        Term::Var(v) => s.push_str(v.as_str()),
        Term::Int(i) => s.push_str(&i.to_string()),
        Term::Atom(a) if plain_atom(a.as_str()) => s.push_str(a.as_str()),
        Term::Atom(a) => write_atom(s, a.as_str()),
        Term::Compound(..) if t.as_list_cell().is_some() => {
            s.push('[');
            let mut cur = t;
            let mut first = true;
            while let Some((h, rest)) = cur.as_list_cell() {
                if !first {
                    s.push(',');
                }
                write_term(s, h);
                first = false;
                cur = rest;
            }
            if *cur != Term::nil() {
                s.push('|');
                write_term(s, cur);
            }
            s.push(']');
        }
        Term::Compound(f, args) => {
            if f.as_str() != TUPLE {
                write_term(s, &Term::Atom(f.clone()));
            }
            s.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write_term(s, a);
            }
            if f.as_str() == TUPLE && args.len() == 1 {
                s.push(',');
            }
            s.push(')');
        }
    }
}

fn write_atom(s: &mut String, a: &str) {
    s.push('\'');
    s.push_str(&a.replace('\'', "''"));
    s.push('\'');
}

pub fn print_literal(l: &Literal) -> String {
    if l.args.is_empty() {
        print_term(&Term::Atom(l.pred.clone()))
    } else {
        print_term(&Term::Compound(l.pred.clone(), l.args.clone()))
    }
}

pub fn print_clause(c: &Clause) -> String {
    let body: Vec<String> = c.body.iter().map(print_literal).collect();
    match (&c.head, body.is_empty()) {
        (Some(h), true) => format!("{}.", print_literal(h)),
        (Some(h), false) => format!("{} :- {}.", print_literal(h), body.join(", ")),
        (None, _) => format!(":- {}.", body.join(", ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facts_rules_and_goals() {
        let src = "% comment\nlast(A,B) :- tail(A,C), last(C,B).\nc_6(6).\n:- empty(A), head(A,B).\n";
        let cs = parse_clauses(src).unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0].0.to_string(), "last(A,B) :- tail(A,C), last(C,B).");
        assert_eq!(cs[0].1, Pos { line: 2, col: 1 });
        assert_eq!(cs[1].0.to_string(), "c_6(6).");
        assert!(cs[2].0.is_goal());
    }

    #[test]
    fn lists_and_tuples() {
        assert_eq!(parse_term("[i,j,c,a,i]").unwrap().to_string(), "[i,j,c,a,i]");
        assert_eq!(parse_term("[H|T]").unwrap().to_string(), "[H|T]");
        assert_eq!(parse_term("[]").unwrap(), Term::nil());
        let Term::Compound(f, items) = parse_term("(state,)").unwrap() else { panic!() };
        assert_eq!((f.as_str(), items.len()), (TUPLE, 1));
        let Term::Compound(_, items) = parse_term("(in,out)").unwrap() else { panic!() };
        assert_eq!(items.len(), 2);
        assert_eq!(parse_term("-3").unwrap(), Term::Int(-3));
        assert_eq!(parse_term("'Hello'").unwrap(), Term::atom("Hello"));
    }

    #[test]
    fn anonymous_variables_are_distinct() {
        let cs = parse_clauses("p(_,_).").unwrap();
        let h = cs[0].0.head.clone().unwrap();
        assert_ne!(h.args[0], h.args[1]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_clauses("p(a).\nq(b :- r.").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 5 });
        assert!(e.msg.contains("expected"), "{e}");
        let e = parse_clauses("p(a)").unwrap_err();
        assert!(e.msg.contains("end of input"));
        let e = parse_clauses("p(a).\n  q(#).").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 5 });
    }

    #[test]
    fn printing_round_trips() {
        for src in ["f([a,'B c',3|T],(x,),(y,z),[],-4)", "'Upper'", "g(h(X),[[]])"] {
            let t = parse_term(src).unwrap();
            assert_eq!(print_term(&t), src);
            assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
        }
        let c = &parse_clauses(":- empty(A), head(A,B).").unwrap()[0].0;
        assert_eq!(print_clause(c), ":- empty(A), head(A,B).");
    }
}
