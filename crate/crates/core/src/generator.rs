//! Enumerates well-formed programs of a fixed size that no stored
//! constraint prunes.
//!
//! Programs are sets of catalog clauses. Within a size, programs with fewer
//! clauses come first; programs with the same clause count are ordered by
//! their clause sizes and then by catalog position.
//!
//! Each catalog clause caches, per stored constraint, which payload clauses
//! subsume it. Caches are brought up to date lazily when the clause is
//! visited, so a candidate is always checked against the whole store as it
//! stands when the candidate is produced.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::bias::Bias;
use crate::catalog::{self, Entry};
use crate::constraints::{ConstraintKind, ConstraintStore};
use crate::flat::{subsumes, FClause, PredTable};
use crate::term::Program;

const MIN_CLAUSE: usize = 2;

struct FlatConstraint {
    kind: ConstraintKind,
    clauses: Vec<FClause>,
    full: u32,
}

impl FlatConstraint {
    /// Whether the predicate sets allow this constraint to involve a clause
    /// whose body predicates are `mask`.
    fn may_touch(&self, mask: u64) -> bool {
        if self.full == 0 {
            return false;
        }
        if self.kind == ConstraintKind::Generalisation {
            self.clauses.iter().any(|m| mask & !m.mask == 0)
        } else {
            self.clauses.iter().any(|m| m.mask & !mask == 0)
        }
    }

    /// Whether the predicate sets allow this constraint to prune a program
    /// through the one clause alone, whatever the other clauses are.
    fn may_kill(&self, mask: u64) -> bool {
        match self.kind {
            _ if self.full == 0 => false,
            ConstraintKind::Specialisation => false,
            ConstraintKind::Generalisation => self.clauses.iter().all(|m| mask & !m.mask == 0),
            ConstraintKind::Redundancy => self.clauses.iter().all(|m| m.mask & !mask == 0),
        }
    }

    /// Bit j is set when payload clause j subsumes `c`, or is subsumed by it
    /// for generalisation constraints.
    fn mask_for(&self, c: &FClause) -> u32 {
        let gen = self.kind == ConstraintKind::Generalisation;
        let mut mask = 0u32;
        for (j, m) in self.clauses.iter().enumerate() {
            if if gen { subsumes(c, m) } else { subsumes(m, c) } {
                mask |= 1 << j;
            }
        }
        mask
    }
}

/// Catalog clauses sharing a body predicate set, with the constraints that
/// set can interact with.
struct Group {
    mask: u64,
    upto: usize,
    touch: Vec<u32>,
    kill: Vec<u32>,
}

#[derive(Default)]
struct ClauseState {
    group: u32,
    /// Positions reached in the group's lists.
    upto_touch: usize,
    upto_kill: usize,
    /// (constraint id, mask) for the scanned part of the touch list.
    hits: Vec<(u32, u32)>,
    gen_dead: bool,
    red_solo: bool,
    spec_any: bool,
}

impl ClauseState {
    fn note(&mut self, kind: ConstraintKind, mask: u32, full: u32) {
        match kind {
            ConstraintKind::Specialisation => self.spec_any = true,
            ConstraintKind::Generalisation => self.gen_dead |= mask == full,
            ConstraintKind::Redundancy => self.red_solo |= mask == full,
        }
    }
}

struct Cursor {
    comps: Vec<Vec<usize>>,
    ci: usize,
    idx: Vec<usize>,
    /// `None` when `idx` still has to be checked, otherwise the level to
    /// advance before the next check.
    pending: Option<usize>,
    started: bool,
}

pub struct Generator {
    bias: Bias,
    table: PredTable,
    catalog: Vec<Vec<Entry>>,
    states: Vec<Vec<ClauseState>>,
    groups: Vec<Group>,
    fcons: Vec<FlatConstraint>,
    cursor: Option<Cursor>,
    size: usize,
}

impl Generator {
    pub fn new(bias: &Bias) -> Generator {
        let mut table = PredTable::default();
        let catalog = catalog::enumerate(bias, &mut table);
        let mut groups = Vec::new();
        let mut by_mask = BTreeMap::new();
        let states = catalog
            .iter()
            .map(|c| {
                c.iter()
                    .map(|e| {
                        let group = *by_mask.entry(e.flat.mask).or_insert_with(|| {
                            groups.push(Group { mask: e.flat.mask, upto: 0, touch: Vec::new(), kill: Vec::new() });
                            groups.len() as u32 - 1
                        });
                        ClauseState { group, ..ClauseState::default() }
                    })
                    .collect()
            })
            .collect();
        Generator { bias: bias.clone(), table, catalog, states, groups, fcons: Vec::new(), cursor: None, size: 0 }
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    /// Number of well-formed clauses with `size` literals.
    pub fn clause_count(&self, size: usize) -> usize {
        self.catalog.get(size).map_or(0, Vec::len)
    }

    /// Largest program size the bias admits.
    pub fn max_program_size(&self) -> usize {
        let largest = (MIN_CLAUSE..self.catalog.len()).rev().find(|s| !self.catalog[*s].is_empty());
        largest.map_or(0, |s| s * self.bias.max_clauses)
    }

    /// Restarts enumeration at programs of `size` literals.
    pub fn start(&mut self, size: usize) {
        self.size = size;
        let max_clause = self.catalog.len().saturating_sub(1);
        let mut comps = Vec::new();
        for k in 1..=self.bias.max_clauses {
            let mut cur = Vec::new();
            compositions(size, k, MIN_CLAUSE, max_clause, &mut cur, &mut comps);
        }
        comps.retain(|c: &Vec<usize>| c.iter().all(|s| !self.catalog[*s].is_empty()));
        self.cursor = Some(Cursor { comps, ci: 0, idx: Vec::new(), pending: None, started: false });
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The next program of the current size not pruned by `store`, or
    /// `None` once the size is exhausted.
    pub fn next(&mut self, store: &ConstraintStore) -> Option<Program> {
        self.sync(store);
        let mut cur = self.cursor.take()?;
        let found = loop {
            if !cur.started {
                let Some(comp) = cur.comps.get(cur.ci) else { break None };
                cur.idx = vec![0; comp.len()];
                cur.started = true;
                cur.pending = None;
                if !self.fill(&mut cur, 0) {
                    cur.ci += 1;
                    cur.started = false;
                    continue;
                }
            } else if let Some(level) = cur.pending {
                if !self.step(&mut cur, level) {
                    cur.ci += 1;
                    cur.started = false;
                    continue;
                }
            }
            match self.check(&cur) {
                Ok(()) => {
                    cur.pending = Some(cur.idx.len() - 1);
                    break Some(self.program(&cur));
                }
                Err(level) => cur.pending = Some(level),
            }
        };
        self.cursor = Some(cur);
        found
    }

    fn program(&self, cur: &Cursor) -> Program {
        let comp = &cur.comps[cur.ci];
        Program::new(comp.iter().zip(&cur.idx).map(|(s, i)| self.catalog[*s][*i].clause.clone()))
    }

    fn min_at(&self, cur: &Cursor, i: usize) -> usize {
        let comp = &cur.comps[cur.ci];
        if i > 0 && comp[i] == comp[i - 1] {
            cur.idx[i - 1] + 1
        } else {
            0
        }
    }

    fn fill(&self, cur: &mut Cursor, from: usize) -> bool {
        for i in from..cur.idx.len() {
            let m = self.min_at(cur, i);
            if m >= self.catalog[cur.comps[cur.ci][i]].len() {
                return false;
            }
            cur.idx[i] = m;
        }
        true
    }

    fn step(&self, cur: &mut Cursor, level: usize) -> bool {
        let mut l = level;
        loop {
            cur.idx[l] += 1;
            if cur.idx[l] < self.catalog[cur.comps[cur.ci][l]].len() && self.fill(cur, l + 1) {
                return true;
            }
            if l == 0 {
                return false;
            }
            l -= 1;
        }
    }

    fn sync(&mut self, store: &ConstraintStore) {
        for c in &store.constraints()[self.fcons.len()..] {
            let clauses: Vec<FClause> =
                c.payload.clauses().iter().filter_map(|cl| self.table.flatten(cl)).collect();
            // payloads with constants never arise from hypotheses; such a
            // constraint is kept inert
            let inert = clauses.len() != c.payload.len() || clauses.len() > 32;
            let full = if inert { 0 } else { (1u64 << clauses.len()).wrapping_sub(1) as u32 };
            self.fcons.push(FlatConstraint { kind: c.kind, clauses, full });
        }
    }

    fn update_group(&mut self, g: u32) {
        let g = &mut self.groups[g as usize];
        for (id, fc) in self.fcons.iter().enumerate().skip(g.upto) {
            if fc.may_touch(g.mask) {
                g.touch.push(id as u32);
            }
            if fc.may_kill(g.mask) {
                g.kill.push(id as u32);
            }
        }
        g.upto = self.fcons.len();
    }

    /// Scans the clause against every constraint it may interact with,
    /// recording hits. With `alone`, stops once the clause cannot stand as
    /// a program by itself; otherwise stops once it cannot appear in any
    /// program.
    fn refresh(&mut self, size: usize, i: usize, alone: bool) {
        self.update_group_of(self.states[size][i].group);
        let st = &mut self.states[size][i];
        let g = &self.groups[st.group as usize];
        let c = &self.catalog[size][i].flat;
        for (pos, &id) in g.touch.iter().enumerate().skip(st.upto_touch) {
            let fc = &self.fcons[id as usize];
            let mask = fc.mask_for(c);
            if mask == 0 {
                continue;
            }
            st.hits.push((id, mask));
            st.note(fc.kind, mask, fc.full);
            if st.gen_dead || alone && (st.spec_any || st.red_solo) {
                st.upto_touch = pos + 1;
                return;
            }
        }
        st.upto_touch = g.touch.len();
    }

    /// Scans only the constraints that can prune through this clause alone.
    fn refresh_kill(&mut self, size: usize, i: usize) {
        self.update_group_of(self.states[size][i].group);
        let st = &mut self.states[size][i];
        let g = &self.groups[st.group as usize];
        let c = &self.catalog[size][i].flat;
        for (pos, &id) in g.kill.iter().enumerate().skip(st.upto_kill) {
            let fc = &self.fcons[id as usize];
            let mask = fc.mask_for(c);
            if mask == fc.full {
                st.note(fc.kind, mask, fc.full);
                if st.gen_dead {
                    st.upto_kill = pos + 1;
                    return;
                }
            }
        }
        st.upto_kill = g.kill.len();
    }

    fn update_group_of(&mut self, g: u32) {
        if self.groups[g as usize].upto < self.fcons.len() {
            self.update_group(g);
        }
    }

    /// The clause's mask for constraint `id`, from its hits when the scan
    /// has passed `id`.
    fn mask_of(&self, size: usize, i: usize, id: u32) -> u32 {
        let st = &self.states[size][i];
        let touch = &self.groups[st.group as usize].touch;
        if st.upto_touch > 0 && touch[st.upto_touch - 1] >= id {
            return match st.hits.binary_search_by_key(&id, |h| h.0) {
                Ok(j) => st.hits[j].1,
                Err(_) => 0,
            };
        }
        self.fcons[id as usize].mask_for(&self.catalog[size][i].flat)
    }

    /// `Err(level)` names the shallowest position whose change can make the
    /// candidate acceptable.
    ///
    /// A constraint that prunes a multi-clause program either does so
    /// through one clause alone or needs several clauses. The first kind is
    /// found by scanning each clause's kill list. The second touches every
    /// clause of a covering subset of at least two, so it shows up in the
    /// hits of all but one clause; the clause with the longest touch list
    /// is left out.
    fn check(&mut self, cur: &Cursor) -> Result<(), usize> {
        let comp = &cur.comps[cur.ci];
        let k = comp.len();
        let last = k - 1;
        if k == 1 {
            self.refresh(comp[0], cur.idx[0], true);
            let s = &self.states[comp[0]][cur.idx[0]];
            let recursive = self.catalog[comp[0]][cur.idx[0]].flat.recursive;
            return if s.gen_dead || s.spec_any || s.red_solo || recursive { Err(0) } else { Ok(()) };
        }
        for i in 0..k {
            self.refresh_kill(comp[i], cur.idx[i]);
            if self.states[comp[i]][cur.idx[i]].gen_dead {
                return Err(i);
            }
            let ci = &self.catalog[comp[i]][cur.idx[i]].flat;
            for j in 0..i {
                let cj = &self.catalog[comp[j]][cur.idx[j]].flat;
                if subsumes(cj, ci) || subsumes(ci, cj) {
                    return Err(i);
                }
            }
        }
        let recursive: Vec<bool> = (0..k).map(|i| self.catalog[comp[i]][cur.idx[i]].flat.recursive).collect();
        if recursive.iter().all(|r| *r) {
            return Err(last);
        }
        for d in 0..k {
            if self.states[comp[d]][cur.idx[d]].red_solo && (0..k).all(|i| i == d || !recursive[i]) {
                return Err(last);
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_cached_key(|i| {
            let g = self.states[comp[*i]][cur.idx[*i]].group;
            self.update_group_of(g);
            self.groups[g as usize].touch.len()
        });
        let mut ids = BTreeSet::new();
        for &i in &order[..last] {
            self.refresh(comp[i], cur.idx[i], false);
            ids.extend(self.states[comp[i]][cur.idx[i]].hits.iter().map(|h| h.0));
        }
        for id in ids {
            let fc = &self.fcons[id as usize];
            let mut union = 0;
            let mut pruned = true;
            for j in 0..k {
                let m = self.mask_of(comp[j], cur.idx[j], id);
                union |= m;
                let need = match fc.kind {
                    ConstraintKind::Specialisation => true,
                    ConstraintKind::Generalisation => false,
                    ConstraintKind::Redundancy => recursive[j],
                };
                if need && m == 0 {
                    pruned = false;
                    break;
                }
            }
            if pruned && (fc.kind == ConstraintKind::Specialisation || union == fc.full) {
                return Err(last);
            }
        }
        Ok(())
    }
}

fn compositions(rest: usize, k: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for s in lo..=hi.min(rest) {
        cur.push(s);
        compositions(rest - s, k - 1, s, hi, cur, out);
        cur.pop();
    }
}
