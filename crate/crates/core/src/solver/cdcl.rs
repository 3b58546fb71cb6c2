//! A compact CDCL solver: two watched literals with blockers, first-UIP
//! learning with local minimization, VSIDS, phase saving, Luby restarts
//! and LBD-based clause deletion. Clauses may be added between calls.

use std::time::Instant;

const NO_REASON: u32 = u32::MAX;
const UNDEF: u8 = 2;

type L = u32;

fn code(dimacs: i32) -> L {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

fn var(l: L) -> usize {
    (l >> 1) as usize
}

#[derive(Debug, Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: L,
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<L>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

/// Indexed max-heap over variable activities.
#[derive(Debug, Default)]
struct Heap {
    heap: Vec<u32>,
    pos: Vec<u32>,
}

impl Heap {
    const ABSENT: u32 = u32::MAX;

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, Self::ABSENT);
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != Self::ABSENT
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len() as u32;
        self.heap.push(v as u32);
        self.up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()? as usize;
        let last = self.heap.pop().unwrap();
        self.pos[top] = Self::ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent] as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i as u32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let mut child = 2 * i + 1;
            if child >= self.heap.len() {
                break;
            }
            if child + 1 < self.heap.len() && act[self.heap[child + 1] as usize] > act[self.heap[child] as usize] {
                child += 1;
            }
            if act[self.heap[child] as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i as u32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }
}

fn luby(mut i: u64) -> u64 {
    // i-th element (0-based) of 1,1,2,1,1,2,4,...
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// Limits for one call to [`Solver::solve`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub conflicts: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Default)]
pub struct Solver {
    clauses: Vec<Clause>,
    free: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<L>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: Heap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    model: Vec<bool>,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        let mut s = Solver { var_inc: 1.0, cla_inc: 1.0, ok: true, ..Default::default() };
        s.reserve(num_vars);
        s
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Makes variables `1..=n` available.
    pub fn reserve(&mut self, n: usize) {
        let old = self.num_vars();
        if n <= old {
            return;
        }
        self.assigns.resize(n, UNDEF);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.activity.resize(n, 0.0);
        self.polarity.resize(n, false);
        self.seen.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
        self.heap.grow(n);
        for v in old..n {
            self.heap.insert(v, &self.activity);
        }
    }

    fn value(&self, l: L) -> u8 {
        let a = self.assigns[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn is_true(&self, l: L) -> bool {
        self.value(l) == 1
    }

    fn is_false(&self, l: L) -> bool {
        self.value(l) == 0
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: L, reason: u32) {
        let v = var(l);
        self.assigns[v] = 1 ^ (l & 1) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause of DIMACS literals. Returns false once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &[i32]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let max = clause.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        self.reserve(max);
        let mut lits: Vec<L> = clause.iter().map(|&l| code(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) || lits.iter().any(|&l| self.is_true(l)) {
            return true;
        }
        lits.retain(|&l| !self.is_false(l));
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false, 0);
            }
        }
        self.ok
    }

    fn attach(&mut self, lits: Vec<L>, learnt: bool, lbd: u32) -> u32 {
        let (l0, l1) = (lits[0], lits[1]);
        let c = Clause { lits, learnt, deleted: false, lbd, activity: 0.0 };
        let cref = match self.free.pop() {
            Some(i) => {
                self.clauses[i as usize] = c;
                i
            }
            None => {
                self.clauses.push(c);
                (self.clauses.len() - 1) as u32
            }
        };
        self.watches[(l0 ^ 1) as usize].push(Watch { cref, blocker: l1 });
        self.watches[(l1 ^ 1) as usize].push(Watch { cref, blocker: l0 });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.is_true(w.blocker) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let nw = Watch { cref: w.cref, blocker: first };
                if first != w.blocker && self.is_true(first) {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if !self.is_false(l) {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(l ^ 1) as usize].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if self.is_false(first) {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[p as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.clauses[cref];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<L>, u32, u32) {
        let mut learnt: Vec<L> = vec![0];
        let mut path = 0;
        let mut p: Option<L> = None;
        let mut index = self.trail.len();
        loop {
            let cref = confl as usize;
            if self.clauses[cref].learnt {
                self.bump_clause(cref);
            }
            let start = usize::from(p.is_some());
            for k in start..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[var(lit)];
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap() ^ 1;

        // drop literals implied by the rest of the clause
        let original = learnt.clone();
        let mut keep = vec![learnt[0]];
        for &q in &learnt[1..] {
            let r = self.reason[var(q)];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|&x| self.seen[var(x)] || self.level[var(x)] == 0);
            if !redundant {
                keep.push(q);
            }
        }
        for &q in &original {
            self.seen[var(q)] = false;
        }
        let mut learnt = keep;

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[max_i])] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var(learnt[1])];
        }
        let mut levels: Vec<u32> = learnt.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        (learnt, bt, levels.len() as u32)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l & 1 == 1;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn locked(&self, cref: u32) -> bool {
        let l0 = self.clauses[cref as usize].lits[0];
        self.is_true(l0) && self.reason[var(l0)] == cref
    }

    fn reduce_db(&mut self) {
        let mut ls = std::mem::take(&mut self.learnts);
        ls.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap())
        });
        let target = ls.len() / 2;
        let mut freed = Vec::new();
        let mut kept = Vec::with_capacity(ls.len());
        for cref in ls {
            let c = &self.clauses[cref as usize];
            if freed.len() < target && c.lbd > 2 && c.lits.len() > 2 && !self.locked(cref) {
                let c = &mut self.clauses[cref as usize];
                c.deleted = true;
                c.lits = Vec::new();
                freed.push(cref);
            } else {
                kept.push(cref);
            }
        }
        self.learnts = kept;
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        // slots are reusable only once no watcher points at them
        self.free.extend(freed);
    }

    fn pick_branch(&mut self) -> Option<L> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(2 * v as u32 + u32::from(self.polarity[v]));
            }
        }
        None
    }

    /// `Some(true)` with a model, `Some(false)`, or `None` when a limit hit.
    pub fn solve(&mut self, limits: Limits) -> Option<bool> {
        if !self.ok {
            return Some(false);
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return Some(false);
        }
        let start_conflicts = self.conflicts;
        let mut restarts = 0u64;
        let mut until_restart = 100 * luby(0);
        let mut max_learnts = (self.clauses.len() / 3).max(5_000) as f64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(false);
                }
                let (learnt, bt, lbd) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let l0 = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.bump_clause(cref as usize);
                    self.enqueue(l0, cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                until_restart = until_restart.saturating_sub(1);
                let used = self.conflicts - start_conflicts;
                if limits.conflicts.is_some_and(|c| used >= c)
                    || (used.is_multiple_of(256) && limits.deadline.is_some_and(|d| Instant::now() >= d))
                {
                    self.cancel_until(0);
                    return None;
                }
            } else {
                if until_restart == 0 {
                    restarts += 1;
                    until_restart = 100 * luby(restarts);
                    self.cancel_until(0);
                }
                if self.learnts.len() as f64 >= max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    max_learnts *= 1.1;
                }
                self.decisions += 1;
                match self.pick_branch() {
                    None => {
                        self.model = self.assigns.iter().map(|&a| a == 1).collect();
                        self.cancel_until(0);
                        return Some(true);
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }

    /// Values of variables `1..=num_vars` from the last satisfiable call.
    pub fn model(&self) -> &[bool] {
        &self.model
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn brute_force(n: usize, clauses: &[Vec<i32>]) -> bool {
        (0..1u32 << n).any(|m| {
            clauses.iter().all(|c| c.iter().any(|&l| (m >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
        })
    }

    fn solve(n: usize, clauses: &[Vec<i32>]) -> Option<bool> {
        let mut s = Solver::new(n);
        for c in clauses {
            s.add_clause(c);
        }
        let r = s.solve(Limits::default());
        if r == Some(true) {
            let m = s.model();
            assert!(clauses.iter().all(|c| c.iter().any(|&l| m[l.unsigned_abs() as usize - 1] == (l > 0))));
        }
        r
    }

    #[test]
    fn contradiction() {
        assert_eq!(solve(1, &[vec![1], vec![-1]]), Some(false));
        assert_eq!(solve(1, &[vec![1]]), Some(true));
        assert_eq!(solve(0, &[]), Some(true));
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<_> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 6 pigeons, 5 holes
        let (p, h) = (6, 5);
        let x = |i: usize, j: usize| (i * h + j + 1) as i32;
        let mut cls = Vec::new();
        for i in 0..p {
            cls.push((0..h).map(|j| x(i, j)).collect());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    cls.push(vec![-x(a, j), -x(b, j)]);
                }
            }
        }
        assert_eq!(solve(p * h, &cls), Some(false));
    }

    #[test]
    fn random_3sat_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(3..=12);
            let m = rng.gen_range(1..=6 * n);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n as i32);
                            if rng.gen() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            assert_eq!(solve(n, &clauses), Some(brute_force(n, &clauses)));
        }
    }

    #[test]
    fn incremental_enumeration() {
        // x1 or x2 or x3 has 7 models
        let mut s = Solver::new(3);
        s.add_clause(&[1, 2, 3]);
        let mut count = 0;
        while s.solve(Limits::default()) == Some(true) {
            count += 1;
            let block: Vec<i32> =
                s.model().iter().enumerate().map(|(i, &b)| if b { -(i as i32 + 1) } else { i as i32 + 1 }).collect();
            s.add_clause(&block);
        }
        assert_eq!(count, 7);
    }

    #[test]
    fn conflict_limit_reports_unknown() {
        let (p, h) = (9, 8);
        let x = |i: usize, j: usize| (i * h + j + 1) as i32;
        let mut s = Solver::new(p * h);
        for i in 0..p {
            s.add_clause(&(0..h).map(|j| x(i, j)).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&[-x(a, j), -x(b, j)]);
                }
            }
        }
        assert_eq!(s.solve(Limits { conflicts: Some(10), deadline: None }), None);
    }
}
