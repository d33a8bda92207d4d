//! Enumeration of every well-formed clause of a bias, one representative
//! per variant class.
//!
//! Clauses are built as strictly increasing literal sequences under a
//! running first-appearance variable numbering. Every clause has such a
//! sequence (its canonical one), so filtering the enumeration down to
//! sequences that equal their own canonical form yields each clause once.

use alloc::vec;
use alloc::vec::Vec;

use crate::bias::{Bias, Direction};
use crate::canon::var_name;
use crate::flat::{FClause, FLit, PredTable, MAX_ARITY};
use crate::term::{Clause, Literal, PredSig, Sym, Term};

/// A catalog clause in both representations.
#[derive(Clone, Debug)]
pub struct Entry {
    pub clause: Clause,
    pub flat: FClause,
}

struct PredInfo {
    id: u16,
    sig: PredSig,
    types: Vec<u16>,
    dirs: Vec<Direction>,
}

struct Enumerator<'a> {
    preds: Vec<PredInfo>,
    head: usize,
    max_vars: usize,
    max_body: usize,
    out: &'a mut Vec<Vec<Entry>>,
    lits: Vec<(usize, [u8; MAX_ARITY])>,
    var_types: Vec<u16>,
}

/// All well-formed clauses of `bias`, grouped by size: `result[s]` holds
/// the clauses with `s` literals. Predicates are interned into `table`.
pub fn enumerate(bias: &Bias, table: &mut PredTable) -> Vec<Vec<Entry>> {
    let mut type_names: Vec<Sym> = Vec::new();
    let mut type_id = |s: &Sym| -> u16 {
        match type_names.iter().position(|n| n == s) {
            Some(i) => i as u16,
            None => {
                type_names.push(s.clone());
                (type_names.len() - 1) as u16
            }
        }
    };
    let mut preds = Vec::new();
    for sig in bias.callable() {
        let types = bias.types[&sig].iter().map(&mut type_id).collect();
        let dirs = bias.directions[&sig].clone();
        preds.push(PredInfo { id: table.intern(sig.clone()), sig, types, dirs });
    }
    let head = preds.iter().position(|p| p.sig == bias.head).unwrap_or_default();
    let mut out = vec![Vec::new(); bias.max_body + 2];
    let mut e = Enumerator {
        preds,
        head,
        max_vars: bias.max_vars,
        max_body: bias.max_body,
        out: &mut out,
        lits: Vec::new(),
        var_types: Vec::new(),
    };
    let arity = e.preds[head].sig.arity;
    if arity <= bias.max_vars {
        e.var_types = e.preds[head].types.clone();
        e.extend(0);
    }
    out
}

impl Enumerator<'_> {
    fn extend(&mut self, start: usize) {
        if !self.lits.is_empty() {
            self.emit();
        }
        if self.lits.len() == self.max_body {
            return;
        }
        for p in start..self.preds.len() {
            let arity = self.preds[p].types.len();
            let mut args = [0u8; MAX_ARITY];
            self.choose_args(p, 0, arity, &mut args);
        }
    }

    fn choose_args(&mut self, p: usize, i: usize, arity: usize, args: &mut [u8; MAX_ARITY]) {
        if i == arity {
            if let Some((lp, largs)) = self.lits.last() {
                if *lp == p && args[..arity] <= largs[..arity] {
                    return;
                }
            }
            self.lits.push((p, *args));
            self.extend(p);
            self.lits.pop();
            return;
        }
        let ty = self.preds[p].types[i];
        let n = self.var_types.len();
        for v in 0..n {
            if self.var_types[v] == ty {
                args[i] = v as u8;
                self.choose_args(p, i + 1, arity, args);
            }
        }
        if n < self.max_vars {
            self.var_types.push(ty);
            args[i] = n as u8;
            self.choose_args(p, i + 1, arity, args);
            self.var_types.pop();
        }
    }

    fn emit(&mut self) {
        let head = self.head;
        let harity = self.preds[head].types.len();
        let mut hargs = [0u8; MAX_ARITY];
        for (i, a) in hargs.iter_mut().enumerate().take(harity) {
            *a = i as u8;
        }
        if self.lits.iter().any(|(p, a)| *p == head && a[..harity] == hargs[..harity]) {
            return;
        }
        if !self.no_singletons() || !self.safe() || !self.connected() || !self.is_canonical() {
            return;
        }
        let to_lit = |p: usize, a: &[u8; MAX_ARITY]| FLit {
            pred: self.preds[p].id,
            arity: self.preds[p].types.len() as u8,
            args: *a,
        };
        let flat = FClause::new(Some(to_lit(head, &hargs)), self.lits.iter().map(|(p, a)| to_lit(*p, a)).collect());
        let term_lit = |p: usize, a: &[u8; MAX_ARITY]| Literal {
            pred: self.preds[p].sig.name.clone(),
            args: a[..self.preds[p].types.len()].iter().map(|v| Term::Var(var_name(*v as u32))).collect(),
        };
        let clause = Clause::rule(term_lit(head, &hargs), self.lits.iter().map(|(p, a)| term_lit(*p, a)).collect());
        let size = flat.size();
        self.out[size].push(Entry { clause, flat });
    }

    /// Every variable occurs at least twice, head included.
    fn no_singletons(&self) -> bool {
        let harity = self.preds[self.head].types.len();
        let mut count = [0u8; 32];
        for v in 0..harity {
            count[v] += 1;
        }
        for (p, a) in &self.lits {
            for v in &a[..self.preds[*p].types.len()] {
                count[*v as usize] += 1;
            }
        }
        count[..self.var_types.len()].iter().all(|c| *c >= 2)
    }

    fn safe(&self) -> bool {
        let head = &self.preds[self.head];
        let mut head_in = 0u32;
        for (i, d) in head.dirs.iter().enumerate() {
            if *d == Direction::In {
                head_in |= 1 << i;
            }
        }
        for (i, (p, a)) in self.lits.iter().enumerate() {
            let info = &self.preds[*p];
            for (k, d) in info.dirs.iter().enumerate() {
                let v = a[k] as u32;
                if *d != Direction::In || head_in & (1 << v) != 0 {
                    continue;
                }
                let produced = self.lits.iter().enumerate().any(|(j, (q, b))| {
                    j != i
                        && self.preds[*q]
                            .dirs
                            .iter()
                            .enumerate()
                            .any(|(m, od)| *od == Direction::Out && b[m] as u32 == v)
                });
                if !produced {
                    return false;
                }
            }
        }
        true
    }

    fn connected(&self) -> bool {
        let harity = self.preds[self.head].types.len();
        let masks: Vec<u32> = core::iter::once(if harity == 0 { 0 } else { (1u32 << harity) - 1 })
            .chain(self.lits.iter().map(|(p, a)| {
                a[..self.preds[*p].types.len()].iter().fold(0u32, |m, v| m | (1 << v))
            }))
            .filter(|m| *m != 0)
            .collect();
        if masks.len() <= 1 {
            return true;
        }
        let mut reached = masks[0];
        let mut done = vec![false; masks.len()];
        done[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (i, m) in masks.iter().enumerate() {
                if !done[i] && m & reached != 0 {
                    done[i] = true;
                    reached |= m;
                    changed = true;
                }
            }
        }
        done.into_iter().all(|d| d)
    }

    /// True when the current sequence is the least encoding of its clause.
    fn is_canonical(&self) -> bool {
        let harity = self.preds[self.head].types.len();
        let mine: Vec<u8> = self
            .lits
            .iter()
            .flat_map(|(p, a)| core::iter::once(*p as u8).chain(a[..self.preds[*p].types.len()].iter().copied()))
            .collect();
        let mut map = [u8::MAX; 32];
        for (i, m) in map.iter_mut().enumerate().take(harity) {
            *m = i as u8;
        }
        let mut used = vec![false; self.lits.len()];
        let mut prefix = Vec::with_capacity(mine.len());
        !self.beats(&mine, &mut used, &mut map, harity as u8, &mut prefix)
    }

    /// Searches for an order whose encoding is strictly below `mine`.
    fn beats(&self, mine: &[u8], used: &mut [bool], map: &mut [u8; 32], next: u8, prefix: &mut Vec<u8>) -> bool {
        let depth = prefix.len();
        if used.iter().all(|u| *u) {
            return prefix.as_slice() < mine;
        }
        let mut best: Option<Vec<u8>> = None;
        let mut cands: Vec<usize> = Vec::new();
        for (i, (p, a)) in self.lits.iter().enumerate() {
            if used[i] {
                continue;
            }
            let enc = encode(*p, &a[..self.preds[*p].types.len()], map, next);
            match &best {
                Some(b) if enc > *b => {}
                Some(b) if enc == *b => cands.push(i),
                _ => {
                    best = Some(enc);
                    cands.clear();
                    cands.push(i);
                }
            }
        }
        let Some(best) = best else { return false };
        let mine_part = &mine[depth..depth + best.len()];
        match best.as_slice().cmp(mine_part) {
            core::cmp::Ordering::Less => return true,
            core::cmp::Ordering::Greater => return false,
            core::cmp::Ordering::Equal => {}
        }
        for i in cands {
            let (p, a) = &self.lits[i];
            let saved = *map;
            let mut n = next;
            for v in &a[..self.preds[*p].types.len()] {
                if map[*v as usize] == u8::MAX {
                    map[*v as usize] = n;
                    n += 1;
                }
            }
            used[i] = true;
            prefix.extend_from_slice(&best);
            let r = self.beats(mine, used, map, n, prefix);
            prefix.truncate(depth);
            used[i] = false;
            *map = saved;
            if r {
                return true;
            }
        }
        false
    }
}

fn encode(p: usize, args: &[u8], map: &[u8; 32], next: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(args.len() + 1);
    out.push(p as u8);
    let mut local = *map;
    let mut n = next;
    for v in args {
        if local[*v as usize] == u8::MAX {
            local[*v as usize] = n;
            n += 1;
        }
        out.push(local[*v as usize]);
    }
    out
}
