//! Branch and bound over weight assignments for the sum and product
//! objectives.

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering};
use std::sync::Mutex;

use super::layout::Layout;
use super::SearchStats;

const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Objective {
    Sum,
    Product,
}

pub(crate) struct Problem {
    pub lay: Layout,
    pub objective: Objective,
    pub q: u64,
    pub minw: u32,
    pub wmax: u32,
    pub symmetry: bool,
}

struct Incumbent {
    value: BigUint,
    weights: Vec<u32>,
}

pub(crate) struct Shared {
    objective: Objective,
    /// Best sum, or -1.
    inc_sum: AtomicI64,
    /// `ln` of the best product as `f64` bits, or negative infinity.
    inc_log: AtomicU64,
    best: Mutex<Option<Incumbent>>,
    nodes: AtomicU64,
    bound_prunes: AtomicU64,
    symmetry_prunes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
}

impl Shared {
    pub fn new(objective: Objective, budget: u64) -> Self {
        Shared {
            objective,
            inc_sum: AtomicI64::new(-1),
            inc_log: AtomicU64::new(f64::NEG_INFINITY.to_bits()),
            best: Mutex::new(None),
            nodes: AtomicU64::new(0),
            bound_prunes: AtomicU64::new(0),
            symmetry_prunes: AtomicU64::new(0),
            budget,
            stop: AtomicBool::new(false),
        }
    }

    fn inc_log(&self) -> f64 {
        f64::from_bits(self.inc_log.load(Ordering::Acquire))
    }

    /// Replaces the incumbent on strict improvement.
    pub fn offer(&self, value: BigUint, weights: &[u32]) {
        let mut best = self.best.lock().expect("incumbent lock");
        if best.as_ref().is_some_and(|b| value <= b.value) {
            return;
        }
        match self.objective {
            Objective::Sum => {
                let v = i64::try_from(&value).expect("sum fits i64");
                self.inc_sum.store(v, Ordering::Release);
            }
            Objective::Product => self.inc_log.store(ln_big(&value).to_bits(), Ordering::Release),
        }
        *best = Some(Incumbent { value, weights: weights.to_vec() });
    }

    pub fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    pub fn result(&self) -> Option<(BigUint, Vec<u32>)> {
        let best = self.best.lock().expect("incumbent lock");
        best.as_ref().map(|b| (b.value.clone(), b.weights.clone()))
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes.load(Ordering::Relaxed),
            bound_prunes: self.bound_prunes.load(Ordering::Relaxed),
            symmetry_prunes: self.symmetry_prunes.load(Ordering::Relaxed),
            wall_ms: 0,
        }
    }
}

pub(crate) fn ln_big(v: &BigUint) -> f64 {
    if v.bits() == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = v.bits().saturating_sub(60);
    let top: u64 = (v >> shift).try_into().expect("60 bits fit");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn tolerance(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

enum Term {
    AmGm { total: u64, count: u32 },
    Caps { mask: u64 },
}

struct Worker<'a> {
    pb: &'a Problem,
    sh: &'a Shared,
    w: Vec<u32>,
    set_sum: Vec<u64>,
    set_free: Vec<u32>,
    log_assigned: f64,
    sum_assigned: u64,
    ln: Vec<f64>,
    local_nodes: u64,
    bound_prunes: u64,
    symmetry_prunes: u64,
    ub: Vec<i64>,
    order: Vec<u32>,
    terms: Vec<Term>,
}

impl<'a> Worker<'a> {
    fn new(pb: &'a Problem, sh: &'a Shared) -> Self {
        let lay = &pb.lay;
        Worker {
            pb,
            sh,
            w: vec![0; lay.pairs],
            set_sum: vec![0; lay.sets()],
            set_free: vec![lay.s as u32 * (lay.s as u32 - 1) / 2; lay.sets()],
            log_assigned: 0.0,
            sum_assigned: 0,
            ln: (0..=pb.q + 1).map(|v| (v as f64).ln()).collect(),
            local_nodes: 0,
            bound_prunes: 0,
            symmetry_prunes: 0,
            ub: vec![0; lay.pairs],
            order: Vec::with_capacity(lay.sets()),
            terms: Vec::new(),
        }
    }

    fn flush(&mut self) {
        let total = self.sh.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.sh.bound_prunes.fetch_add(self.bound_prunes, Ordering::Relaxed);
        self.sh.symmetry_prunes.fetch_add(self.symmetry_prunes, Ordering::Relaxed);
        self.local_nodes = 0;
        self.bound_prunes = 0;
        self.symmetry_prunes = 0;
        if total > self.sh.budget {
            self.sh.stop.store(true, Ordering::Relaxed);
        }
    }

    fn assign(&mut self, p: usize, v: u32) {
        self.w[p] = v;
        for &x in &self.pb.lay.cover[p] {
            self.set_sum[x as usize] += u64::from(v);
            self.set_free[x as usize] -= 1;
        }
        self.sum_assigned += u64::from(v);
        if self.pb.objective == Objective::Product {
            self.log_assigned += self.ln[v as usize];
        }
    }

    fn unassign(&mut self, p: usize, v: u32) {
        self.w[p] = 0;
        for &x in &self.pb.lay.cover[p] {
            self.set_sum[x as usize] -= u64::from(v);
            self.set_free[x as usize] += 1;
        }
        self.sum_assigned -= u64::from(v);
        if self.pb.objective == Objective::Product {
            self.log_assigned -= self.ln[v as usize];
        }
    }

    /// Largest value pair `p` can take with every other free pair at the
    /// minimum weight.
    fn pair_ub(&self, p: usize) -> i64 {
        let minw = i64::from(self.pb.minw);
        let mut ub = i64::from(self.pb.wmax);
        for &x in &self.pb.lay.cover[p] {
            let x = x as usize;
            let room = self.pb.q as i64 - self.set_sum[x] as i64 - (i64::from(self.set_free[x]) - 1) * minw;
            ub = ub.min(room);
        }
        ub
    }

    fn symmetry_ok(&mut self, p: usize) -> bool {
        if !self.pb.symmetry {
            return true;
        }
        let Some(k) = self.pb.lay.completes[p] else { return true };
        for i in 0..k {
            if self.pb.lay.transposition_beats(&self.w, i, k) {
                self.symmetry_prunes += 1;
                return false;
            }
        }
        true
    }

    /// Whether the subtree below a full assignment of ranks `< next` can
    /// still beat the incumbent.
    fn bound_ok(&mut self, next: usize) -> bool {
        let pb = self.pb;
        let lay = &pb.lay;
        let minw = i64::from(pb.minw);
        for r in next..lay.pairs {
            let u = self.pair_ub(r);
            if u < minw {
                return false;
            }
            self.ub[r] = u;
        }
        let free_mask = (u64::MAX << next) & mask_below(lay.pairs);
        self.order.clear();
        self.order.extend((0..lay.sets() as u32).filter(|&x| self.set_free[x as usize] > 0));
        {
            let (sum, free) = (&self.set_sum, &self.set_free);
            let q = pb.q;
            // fewest units per free pair first
            self.order.sort_by(|&x, &y| {
                let (x, y) = (x as usize, y as usize);
                let lhs = u128::from(q - sum[x]) * u128::from(free[y]);
                let rhs = u128::from(q - sum[y]) * u128::from(free[x]);
                lhs.cmp(&rhs).then(x.cmp(&y))
            });
        }
        self.terms.clear();
        let mut claimed = 0u64;
        let mut log_bound = self.log_assigned;
        let mut sum_bound = self.sum_assigned;
        for &x in &self.order {
            let x = x as usize;
            let group = lay.set_pairs[x] & free_mask & !claimed;
            if group == 0 {
                continue;
            }
            claimed |= group;
            let g = group.count_ones();
            let residual = pb.q - self.set_sum[x];
            let caps: i64 = bits(group).map(|r| self.ub[r]).sum();
            match pb.objective {
                Objective::Sum => sum_bound += residual.min(caps as u64),
                Objective::Product => {
                    let total = residual as i64 - i64::from(self.set_free[x] - g) * minw;
                    if total < i64::from(g) * minw {
                        return false;
                    }
                    let total = total as u64;
                    let (fl, t) = (total / u64::from(g), total % u64::from(g));
                    let amgm = (u64::from(g) - t) as f64 * self.ln[fl as usize] + t as f64 * self.ln[fl as usize + 1];
                    let cap_log: f64 = bits(group).map(|r| self.ln[self.ub[r] as usize]).sum();
                    if amgm <= cap_log {
                        log_bound += amgm;
                        self.terms.push(Term::AmGm { total, count: g });
                    } else {
                        log_bound += cap_log;
                        self.terms.push(Term::Caps { mask: group });
                    }
                }
            }
        }
        match pb.objective {
            Objective::Sum => (sum_bound as i64) > self.sh.inc_sum.load(Ordering::Acquire),
            Objective::Product => {
                let inc = self.sh.inc_log();
                let tol = tolerance(inc);
                if log_bound < inc - tol {
                    return false;
                }
                if log_bound > inc + tol {
                    return true;
                }
                let exact = self.exact_bound(next);
                let best = self.sh.best.lock().expect("incumbent lock");
                best.as_ref().is_none_or(|b| exact > b.value)
            }
        }
    }

    fn exact_bound(&self, next: usize) -> BigUint {
        let mut acc: BigUint = self.w[..next].iter().map(|&v| BigUint::from(v)).product();
        for term in &self.terms {
            match *term {
                Term::AmGm { total, count } => {
                    let (fl, t) = (total / u64::from(count), total % u64::from(count));
                    acc *= Pow::pow(BigUint::from(fl), u64::from(count) - t) * Pow::pow(BigUint::from(fl + 1), t);
                }
                Term::Caps { mask } => {
                    for r in bits(mask) {
                        acc *= BigUint::from(self.ub[r] as u64);
                    }
                }
            }
        }
        acc
    }

    fn leaf(&mut self) {
        match self.pb.objective {
            Objective::Sum => {
                if self.sum_assigned as i64 > self.sh.inc_sum.load(Ordering::Acquire) {
                    self.sh.offer(BigUint::from(self.sum_assigned), &self.w);
                }
            }
            Objective::Product => {
                let inc = self.sh.inc_log();
                if self.log_assigned >= inc - tolerance(inc) {
                    let v: BigUint = self.w.iter().map(|&x| BigUint::from(x)).product();
                    self.sh.offer(v, &self.w);
                }
            }
        }
    }

    /// Tries every value of pair `p`; `stop_at` ends the recursion early and
    /// hands each surviving prefix to `visit`.
    fn dfs(&mut self, p: usize, stop_at: usize, visit: &mut dyn FnMut(&[u32])) {
        if self.sh.stopped() {
            return;
        }
        let lay_pairs = self.pb.lay.pairs;
        if p == lay_pairs {
            self.leaf();
            return;
        }
        if p == stop_at {
            visit(&self.w[..p]);
            return;
        }
        let ub = self.pair_ub(p);
        let minw = i64::from(self.pb.minw);
        if ub < minw {
            return;
        }
        for v in (minw..=ub).rev() {
            let v = v as u32;
            self.local_nodes += 1;
            if self.local_nodes >= FLUSH_EVERY {
                self.flush();
                if self.sh.stopped() {
                    return;
                }
            }
            self.assign(p, v);
            if self.symmetry_ok(p) {
                if p + 1 == lay_pairs {
                    self.leaf();
                } else if self.bound_ok(p + 1) {
                    self.dfs(p + 1, stop_at, visit);
                } else {
                    self.bound_prunes += 1;
                }
            }
            self.unassign(p, v);
        }
    }

    fn replay(&mut self, prefix: &[u32]) {
        for (p, &v) in prefix.iter().enumerate() {
            self.assign(p, v);
        }
    }
}

fn mask_below(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let r = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(r)
    })
}

/// Runs the search to completion or until the node budget is spent.
/// Single-threaded runs visit nodes in a fixed order, so the witness is
/// reproducible; with several threads only the value is.
pub(crate) fn run(pb: &Problem, sh: &Shared, threads: usize) {
    if threads <= 1 || pb.lay.pairs < 4 {
        let mut wk = Worker::new(pb, sh);
        wk.dfs(0, usize::MAX, &mut |_| {});
        wk.flush();
        return;
    }
    // split at the shallowest depth with enough independent subtrees
    let target = 16 * threads;
    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    for depth in 1..pb.lay.pairs {
        prefixes.clear();
        let mut wk = Worker::new(pb, sh);
        wk.dfs(0, depth, &mut |pre| prefixes.push(pre.to_vec()));
        wk.flush();
        if prefixes.len() >= target || depth + 1 == pb.lay.pairs || sh.stopped() {
            break;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| {
        prefixes.par_iter().for_each(|pre| {
            let mut wk = Worker::new(pb, sh);
            wk.replay(pre);
            if pre.len() == pb.lay.pairs {
                wk.leaf();
            } else if wk.bound_ok(pre.len()) {
                wk.dfs(pre.len(), usize::MAX, &mut |_| {});
            }
            wk.flush();
        });
    });
}
