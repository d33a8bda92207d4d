//! Compact function-free clauses with small integer predicates and
//! variables, used on the generator's hot path.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::canon::var_name;
use crate::term::{Clause, Literal, PredSig, Sym, Term};

pub const MAX_ARITY: usize = 6;
pub const MAX_VARS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FLit {
    pub pred: u16,
    pub arity: u8,
    pub args: [u8; MAX_ARITY],
}

impl FLit {
    pub fn args(&self) -> &[u8] {
        &self.args[..self.arity as usize]
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FClause {
    pub head: Option<FLit>,
    pub body: Vec<FLit>,
    /// Bit `p % 64` set for every body predicate `p`.
    pub mask: u64,
    pub recursive: bool,
}

impl FClause {
    pub fn new(head: Option<FLit>, body: Vec<FLit>) -> Self {
        let mask = body.iter().fold(0u64, |m, l| m | (1u64 << (l.pred % 64)));
        let recursive = head.is_some_and(|h| body.iter().any(|b| b.pred == h.pred));
        FClause { head, body, mask, recursive }
    }

    pub fn size(&self) -> usize {
        self.body.len() + usize::from(self.head.is_some())
    }
}

/// Assigns small ids to predicate signatures.
#[derive(Clone, Debug, Default)]
pub struct PredTable {
    ids: BTreeMap<PredSig, u16>,
    sigs: Vec<PredSig>,
}

impl PredTable {
    pub fn new(sigs: impl IntoIterator<Item = PredSig>) -> Self {
        let mut t = PredTable::default();
        for s in sigs {
            t.intern(s);
        }
        t
    }

    pub fn intern(&mut self, s: PredSig) -> u16 {
        if let Some(id) = self.ids.get(&s) {
            return *id;
        }
        let id = self.sigs.len() as u16;
        self.ids.insert(s.clone(), id);
        self.sigs.push(s);
        id
    }

    pub fn id(&self, s: &PredSig) -> Option<u16> {
        self.ids.get(s).copied()
    }

    pub fn sig(&self, id: u16) -> &PredSig {
        &self.sigs[id as usize]
    }

    /// Converts a function-free clause whose variables number at most
    /// [`MAX_VARS`]. Returns `None` for anything else.
    pub fn flatten(&mut self, c: &Clause) -> Option<FClause> {
        let mut vars: Vec<Sym> = Vec::new();
        let mut lit = |l: &Literal, vars: &mut Vec<Sym>| -> Option<FLit> {
            if l.args.len() > MAX_ARITY {
                return None;
            }
            let mut args = [0u8; MAX_ARITY];
            for (i, a) in l.args.iter().enumerate() {
                let Term::Var(v) = a else { return None };
                let idx = match vars.iter().position(|x| x == v) {
                    Some(i) => i,
                    None => {
                        vars.push(v.clone());
                        vars.len() - 1
                    }
                };
                if idx >= MAX_VARS {
                    return None;
                }
                args[i] = idx as u8;
            }
            Some(FLit { pred: self.intern(l.sig()), arity: l.args.len() as u8, args })
        };
        let head = match &c.head {
            Some(h) => Some(lit(h, &mut vars)?),
            None => None,
        };
        let mut body = Vec::with_capacity(c.body.len());
        for b in &c.body {
            body.push(lit(b, &mut vars)?);
        }
        Some(FClause::new(head, body))
    }

    pub fn unflatten(&self, c: &FClause) -> Clause {
        let lit = |l: &FLit| {
            Literal {
                pred: self.sig(l.pred).name.clone(),
                args: l.args().iter().map(|v| Term::Var(var_name(*v as u32))).collect(),
            }
        };
        Clause { head: c.head.as_ref().map(lit), body: c.body.iter().map(lit).collect() }
    }
}

/// θ-subsumption on flat clauses, equivalent to
/// [`crate::subsume::clause_subsumes`] on their expansions.
pub fn subsumes(c1: &FClause, c2: &FClause) -> bool {
    if c1.mask & !c2.mask != 0 {
        return false;
    }
    let mut env = [u8::MAX; MAX_VARS];
    match (&c1.head, &c2.head) {
        (Some(h1), Some(h2)) => {
            if !bind(h1, h2, &mut env) {
                return false;
            }
        }
        (Some(_), None) => return false,
        (None, _) => {}
    }
    body_search(&c1.body, &c2.body, 0, &mut env)
}

fn bind(p: &FLit, t: &FLit, env: &mut [u8; MAX_VARS]) -> bool {
    if p.pred != t.pred || p.arity != t.arity {
        return false;
    }
    for i in 0..p.arity as usize {
        let v = p.args[i] as usize;
        if env[v] == u8::MAX {
            env[v] = t.args[i];
        } else if env[v] != t.args[i] {
            return false;
        }
    }
    true
}

fn body_search(pat: &[FLit], target: &[FLit], k: usize, env: &mut [u8; MAX_VARS]) -> bool {
    let Some(p) = pat.get(k) else { return true };
    for t in target {
        if t.pred != p.pred {
            continue;
        }
        let saved = *env;
        if bind(p, t, env) && body_search(pat, target, k + 1, env) {
            return true;
        }
        *env = saved;
    }
    false
}
