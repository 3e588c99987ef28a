//! Exhaustive integer enumeration of constraint systems: interval propagation
//! to a finite box, then branch-and-bound search, with a naive full-scan
//! engine kept as an independent cross-check.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::constraints::{ConstraintSystem, LinearConstraint, Relation};
use crate::cyclotomic::{rat, Rat};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("node budget exceeded after {explored} nodes")]
    NodeBudget { explored: u64 },
    #[error("box volume {volume} exceeds the naive-scan budget")]
    VolumeBudget { volume: u128 },
    #[error("engines disagree on a survivor set")]
    EngineMismatch,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Fallback half-width for variables propagation cannot bound.
    pub fallback_bound: i64,
    pub node_budget: u64,
    pub volume_budget: u128,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fallback_bound: 10,
            node_budget: 10_000_000,
            volume_budget: 100_000_000,
        }
    }
}

/// Inclusive integer bounds per variable. `exhaustive` is false when any
/// variable needed the fallback box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub exhaustive: bool,
    pub infeasible: bool,
}

impl BoundsBox {
    pub fn volume(&self) -> u128 {
        if self.infeasible {
            return 0;
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (h - l + 1).max(0) as u128)
            .product()
    }
}

/// The set of integer solutions found in a box, sorted lexicographically.
/// Equality ignores the node statistics.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub vectors: Vec<Vec<i64>>,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl PartialEq for SolutionSet {
    fn eq(&self, other: &Self) -> bool {
        self.vectors == other.vectors && self.exhaustive == other.exhaustive
    }
}
impl Eq for SolutionSet {}

// Partial bounds during propagation; None = unbounded.
#[derive(Clone)]
struct RatBounds {
    lo: Vec<Option<Rat>>,
    hi: Vec<Option<Rat>>,
}

fn propagate_rational(
    constraints: &[LinearConstraint],
    bounds: &mut RatBounds,
) -> Result<bool, ()> {
    // one sweep; returns whether anything tightened, Err on infeasibility
    let n = bounds.lo.len();
    let mut changed = false;
    let mut directed: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for c in constraints {
        match c.relation {
            Relation::GeZero => directed.push((c.coeffs.clone(), c.constant.clone())),
            Relation::EqZero => {
                directed.push((c.coeffs.clone(), c.constant.clone()));
                directed.push((
                    c.coeffs.iter().map(|x| -x).collect(),
                    -c.constant.clone(),
                ));
            }
            Relation::Integral => {}
        }
    }
    for (coeffs, constant) in &directed {
        for j in 0..n {
            let aj = &coeffs[j];
            if aj.is_zero() {
                continue;
            }
            // a_j x_j >= -constant - sum_{i != j} a_i x_i; use the maximum of
            // the right-hand side over the current box.
            let mut rest_max = Some(Rat::zero());
            for i in 0..n {
                if i == j || coeffs[i].is_zero() {
                    continue;
                }
                let term = if coeffs[i].is_positive() {
                    bounds.hi[i].as_ref().map(|b| &coeffs[i] * b)
                } else {
                    bounds.lo[i].as_ref().map(|b| &coeffs[i] * b)
                };
                rest_max = match (rest_max, term) {
                    (Some(acc), Some(t)) => Some(acc + t),
                    _ => None,
                };
            }
            let Some(rest_max) = rest_max else { continue };
            let rhs = (-constant - rest_max) / aj;
            if aj.is_positive() {
                let new_lo = rhs.ceil();
                let tighter = match &bounds.lo[j] {
                    None => true,
                    Some(cur) => new_lo > *cur,
                };
                if tighter {
                    bounds.lo[j] = Some(new_lo);
                    changed = true;
                }
            } else {
                let new_hi = rhs.floor();
                let tighter = match &bounds.hi[j] {
                    None => true,
                    Some(cur) => new_hi < *cur,
                };
                if tighter {
                    bounds.hi[j] = Some(new_hi);
                    changed = true;
                }
            }
            if let (Some(l), Some(h)) = (&bounds.lo[j], &bounds.hi[j]) {
                if l > h {
                    return Err(());
                }
            }
        }
    }
    Ok(changed)
}

// --- exact rational LP (two-phase simplex, Bland's rule) -------------------
//
// Interval propagation cannot bound systems whose rows all mix several
// variables (kernel-coset sums do exactly that on non-cyclic abelian groups),
// even though the feasible polytope is bounded. A small exact simplex closes
// that gap: after the interval fixpoint each still-loose variable bound is
// tightened to the rational optimum and rounded to an integer.

enum LpOutcome {
    Optimal(Rat),
    Unbounded,
    Infeasible,
}

// Tableau for repeated minimization over one feasible region: phase 1 runs
// once, each objective warm-starts phase 2 from the previous basis.
struct LpTableau {
    tab: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
    total: usize,
    n: usize,
    feasible: bool,
}

impl LpTableau {
    // rows are (coeffs, rhs) with free x: eq rows a.x = b, ge rows a.x >= b.
    // Inequality rows with b <= 0 start feasibly on their slack variable, so
    // artificial columns are only spent on equalities and positive-rhs rows.
    fn new(eq_rows: &[(Vec<Rat>, Rat)], ge_rows: &[(Vec<Rat>, Rat)], n: usize) -> LpTableau {
        let m = eq_rows.len() + ge_rows.len();
        let cols = 2 * n + ge_rows.len();
        let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(m);
        for (coeffs, bb) in eq_rows.iter().chain(ge_rows.iter()) {
            let mut row = vec![Rat::zero(); cols];
            for j in 0..n {
                row[j] = coeffs[j].clone();
                row[n + j] = -&coeffs[j];
            }
            rows.push((row, bb.clone()));
        }
        for (k, _) in ge_rows.iter().enumerate() {
            rows[eq_rows.len() + k].0[2 * n + k] = rat(-1);
        }
        // choose a starting basis: slack where possible, artificial otherwise
        let mut needs_artificial: Vec<bool> = Vec::with_capacity(m);
        for (i, (row, b)) in rows.iter_mut().enumerate() {
            let is_ge = i >= eq_rows.len();
            if is_ge && !b.is_positive() {
                // flip so the slack enters the basis at value -b >= 0
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                *b = -&*b;
                needs_artificial.push(false);
            } else {
                if b.is_negative() {
                    for v in row.iter_mut() {
                        *v = -&*v;
                    }
                    *b = -&*b;
                }
                needs_artificial.push(true);
            }
        }
        let art_count = needs_artificial.iter().filter(|&&x| x).count();
        let total = cols + art_count;
        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut next_art = cols;
        for (i, (row, b)) in rows.into_iter().enumerate() {
            let mut full = row;
            full.resize(total, Rat::zero());
            if needs_artificial[i] {
                full[next_art] = rat(1);
                basis.push(next_art);
                next_art += 1;
            } else {
                let slack = 2 * n + (i - eq_rows.len());
                basis.push(slack);
            }
            full.push(b);
            tab.push(full);
        }
        let mut feasible = true;
        if art_count > 0 {
            let phase1_cost: Vec<Rat> = (0..total)
                .map(|j| if j >= cols { rat(1) } else { Rat::zero() })
                .collect();
            if !simplex_phase(&mut tab, &mut basis, &phase1_cost, total, total) {
                unreachable!("phase 1 cannot be unbounded");
            }
            let p1_value: Rat = basis
                .iter()
                .enumerate()
                .map(|(i, &bv)| {
                    if bv >= cols {
                        tab[i][total].clone()
                    } else {
                        Rat::zero()
                    }
                })
                .sum();
            feasible = p1_value.is_zero();
            if feasible {
                // drive artificials out of the basis where possible
                for i in 0..m {
                    if basis[i] >= cols {
                        if let Some(j) = (0..cols).find(|&j| !tab[i][j].is_zero()) {
                            pivot(&mut tab, &mut basis, i, j, total);
                        }
                    }
                }
            }
        }
        LpTableau {
            tab,
            basis,
            cols,
            total,
            n,
            feasible,
        }
    }

    // minimize objective . x; artificial columns are banned from re-entering
    fn minimize(&mut self, objective: &[Rat]) -> LpOutcome {
        if !self.feasible {
            return LpOutcome::Infeasible;
        }
        let mut cost = vec![Rat::zero(); self.total];
        for j in 0..self.n {
            cost[j] = objective[j].clone();
            cost[self.n + j] = -&objective[j];
        }
        if !simplex_phase(&mut self.tab, &mut self.basis, &cost, self.total, self.cols) {
            return LpOutcome::Unbounded;
        }
        let mut value = Rat::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.total && !cost[bv].is_zero() {
                value += &cost[bv] * &self.tab[i][self.total];
            }
        }
        LpOutcome::Optimal(value)
    }
}

// Minimize cost over the tableau; returns false on unboundedness. Columns at
// or beyond `ban_from` never enter the basis. Uses the steepest reduced cost
// for speed, switching to Bland's rule (which cannot cycle) after a cap.
fn simplex_phase(
    tab: &mut Vec<Vec<Rat>>,
    basis: &mut Vec<usize>,
    cost: &[Rat],
    total: usize,
    ban_from: usize,
) -> bool {
    let bland_after = 4 * (tab.len() + total);
    let mut iterations = 0usize;
    loop {
        let bland = iterations > bland_after;
        iterations += 1;
        // reduced costs: c_j - c_B . B^-1 A_j
        let mut entering: Option<(usize, Rat)> = None;
        for j in 0..total {
            if j >= ban_from || basis.contains(&j) {
                continue;
            }
            let mut red = cost[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !cost[bv].is_zero() && !tab[i][j].is_zero() {
                    red -= &cost[bv] * &tab[i][j];
                }
            }
            if red.is_negative() {
                if bland {
                    entering = Some((j, red));
                    break;
                }
                let better = match &entering {
                    None => true,
                    Some((_, best)) => red < *best,
                };
                if better {
                    entering = Some((j, red));
                }
            }
        }
        let Some((j, _)) = entering else { return true };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][total] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else { return false };
        pivot(tab, basis, i, j, total);
    }
}

fn pivot(tab: &mut Vec<Vec<Rat>>, basis: &mut Vec<usize>, row: usize, col: usize, total: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &p;
    }
    for i in 0..tab.len() {
        if i != row && !tab[i][col].is_zero() {
            let f = tab[i][col].clone();
            for j in 0..=total {
                let t = &tab[row][j] * &f;
                tab[i][j] = &tab[i][j] - &t;
            }
        }
    }
    basis[row] = col;
}

// LP-based per-variable bound tightening. Returns false on infeasibility.
fn lp_tighten(sys: &ConstraintSystem, bounds: &mut RatBounds) -> bool {
    let n = bounds.lo.len();
    if n == 0 {
        return true;
    }
    let mut eq_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut ge_rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for c in &sys.constraints {
        // a.x + c REL 0  ->  a.x REL -c
        match c.relation {
            Relation::EqZero => eq_rows.push((c.coeffs.clone(), -c.constant.clone())),
            Relation::GeZero => ge_rows.push((c.coeffs.clone(), -c.constant.clone())),
            Relation::Integral => {}
        }
    }
    for j in 0..n {
        if let Some(l) = &bounds.lo[j] {
            let mut coeffs = vec![Rat::zero(); n];
            coeffs[j] = rat(1);
            ge_rows.push((coeffs, l.clone()));
        }
        if let Some(h) = &bounds.hi[j] {
            let mut coeffs = vec![Rat::zero(); n];
            coeffs[j] = rat(-1);
            ge_rows.push((coeffs, -h.clone()));
        }
    }
    let mut lp = LpTableau::new(&eq_rows, &ge_rows, n);
    if !lp.feasible {
        return false;
    }
    // lower bounds first; upper bounds often follow from the equality rows by
    // one interval round, so LP maximization runs only for the leftovers
    for j in 0..n {
        if bounds.lo[j].is_some() {
            continue;
        }
        let mut objective = vec![Rat::zero(); n];
        objective[j] = rat(1);
        match lp.minimize(&objective) {
            LpOutcome::Optimal(v) => bounds.lo[j] = Some(v.ceil()),
            LpOutcome::Unbounded => {}
            LpOutcome::Infeasible => return false,
        }
    }
    let _ = propagate_rational_rounds(sys, bounds);
    for j in 0..n {
        if bounds.hi[j].is_some() {
            continue;
        }
        let mut objective = vec![Rat::zero(); n];
        objective[j] = rat(-1);
        match lp.minimize(&objective) {
            LpOutcome::Optimal(v) => bounds.hi[j] = Some((-v).floor()),
            LpOutcome::Unbounded => {}
            LpOutcome::Infeasible => return false,
        }
    }
    for j in 0..n {
        if let (Some(l), Some(h)) = (&bounds.lo[j], &bounds.hi[j]) {
            if l > h {
                return false;
            }
        }
    }
    true
}

// interval sweeps to fixpoint; returns false on infeasibility
fn propagate_rational_rounds(sys: &ConstraintSystem, bounds: &mut RatBounds) -> bool {
    for _ in 0..10_000 {
        match propagate_rational(&sys.constraints, bounds) {
            Ok(true) => continue,
            Ok(false) => return true,
            Err(()) => return false,
        }
    }
    true
}

/// Iterated interval propagation/// Iterated interval propagation over the inequality rows and equalities until
/// fixpoint, then exact LP tightening of each variable bound. Variables left
/// unbounded fall back to `[-B, B]` and clear the exhaustive flag.
pub fn propagate_bounds(sys: &ConstraintSystem, cfg: &SolverConfig) -> BoundsBox {
    let n = sys.vars.len();
    if sys.infeasible {
        return BoundsBox {
            lo: vec![],
            hi: vec![],
            exhaustive: true,
            infeasible: true,
        };
    }
    let mut bounds = RatBounds {
        lo: vec![None; n],
        hi: vec![None; n],
    };
    let mut infeasible = false;
    for _ in 0..10_000 {
        match propagate_rational(&sys.constraints, &mut bounds) {
            Ok(true) => continue,
            Ok(false) => break,
            Err(()) => {
                infeasible = true;
                break;
            }
        }
    }
    if !infeasible && !lp_tighten(sys, &mut bounds) {
        infeasible = true;
    }
    if !infeasible {
        // integer rounding may enable one more interval round
        for _ in 0..10_000 {
            match propagate_rational(&sys.constraints, &mut bounds) {
                Ok(true) => continue,
                Ok(false) => break,
                Err(()) => {
                    infeasible = true;
                    break;
                }
            }
        }
    }
    let mut exhaustive = true;
    let b = cfg.fallback_bound;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for j in 0..n {
        let l = match &bounds.lo[j] {
            Some(q) => q.to_integer().to_i64().unwrap_or(-b),
            None => {
                exhaustive = false;
                // keep a nonempty box around any known upper bound
                match &bounds.hi[j] {
                    Some(h) => (-b).min(h.to_integer().to_i64().unwrap_or(-b)),
                    None => -b,
                }
            }
        };
        let h = match &bounds.hi[j] {
            Some(q) => q.to_integer().to_i64().unwrap_or(b),
            None => {
                exhaustive = false;
                b.max(l)
            }
        };
        if l > h {
            infeasible = true;
        }
        lo.push(l);
        hi.push(h);
    }
    // an infeasible system is fully decided: the empty set is exhaustive
    if infeasible {
        exhaustive = true;
    }
    BoundsBox {
        lo,
        hi,
        exhaustive,
        infeasible,
    }
}

/// Exact membership check against the full (un-propagated) system.
pub fn check_point(sys: &ConstraintSystem, point: &[i64]) -> bool {
    sys.satisfied(point)
}

/// Depth-first branch-and-bound in variable declaration order, re-propagating
/// the remaining interval after every assignment. Complete within the box and
/// deterministic.
pub fn enumerate_bnb(
    sys: &ConstraintSystem,
    bx: &BoundsBox,
    cfg: &SolverConfig,
) -> Result<SolutionSet, SolveError> {
    let n = sys.vars.len();
    let mut out = SolutionSet {
        vectors: Vec::new(),
        exhaustive: bx.exhaustive,
        nodes: 0,
    };
    if bx.infeasible || sys.infeasible {
        return Ok(out);
    }
    let mut point = vec![0i64; n];
    let mut stack_bounds = RatBounds {
        lo: bx.lo.iter().map(|&l| Some(rat(l))).collect(),
        hi: bx.hi.iter().map(|&h| Some(rat(h))).collect(),
    };
    dfs(sys, cfg, 0, &mut point, &mut stack_bounds, &mut out)?;
    out.vectors.sort();
    out.vectors.dedup();
    Ok(out)
}

fn dfs(
    sys: &ConstraintSystem,
    cfg: &SolverConfig,
    depth: usize,
    point: &mut Vec<i64>,
    bounds: &RatBounds,
    out: &mut SolutionSet,
) -> Result<(), SolveError> {
    let n = sys.vars.len();
    if depth == n {
        if check_point(sys, point) {
            out.vectors.push(point.clone());
        }
        return Ok(());
    }
    let lo = bounds.lo[depth]
        .as_ref()
        .expect("box is finite")
        .to_integer()
        .to_i64()
        .unwrap();
    let hi = bounds.hi[depth]
        .as_ref()
        .expect("box is finite")
        .to_integer()
        .to_i64()
        .unwrap();
    for v in lo..=hi {
        out.nodes += 1;
        if out.nodes > cfg.node_budget {
            return Err(SolveError::NodeBudget { explored: out.nodes });
        }
        point[depth] = v;
        let mut child = bounds.clone();
        child.lo[depth] = Some(rat(v));
        child.hi[depth] = Some(rat(v));
        // re-propagate with the fixed prefix
        let mut feasible = true;
        for _ in 0..10_000 {
            match propagate_rational(&sys.constraints, &mut child) {
                Ok(true) => continue,
                Ok(false) => break,
                Err(()) => {
                    feasible = false;
                    break;
                }
            }
        }
        // the prefix assignment must survive propagation unchanged
        if feasible {
            for d in 0..=depth {
                let l = child.lo[d].as_ref().unwrap();
                let h = child.hi[d].as_ref().unwrap();
                if l > &rat(point[d]) || h < &rat(point[d]) {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            dfs(sys, cfg, depth + 1, point, &child, out)?;
        }
    }
    point[depth] = 0;
    Ok(())
}

/// Full Cartesian scan over the box with a per-point exact check. Independent
/// oracle engine; subject to the volume budget.
pub fn enumerate_naive(
    sys: &ConstraintSystem,
    bx: &BoundsBox,
    cfg: &SolverConfig,
) -> Result<SolutionSet, SolveError> {
    let n = sys.vars.len();
    let mut out = SolutionSet {
        vectors: Vec::new(),
        exhaustive: bx.exhaustive,
        nodes: 0,
    };
    if bx.infeasible || sys.infeasible {
        return Ok(out);
    }
    let volume = bx.volume();
    if volume > cfg.volume_budget {
        return Err(SolveError::VolumeBudget { volume });
    }
    let mut point = bx.lo.clone();
    loop {
        out.nodes += 1;
        if check_point(sys, &point) {
            out.vectors.push(point.clone());
        }
        // odometer increment, last variable fastest (keeps lex order)
        let mut i = n;
        loop {
            if i == 0 {
                out.vectors.sort();
                out.vectors.dedup();
                return Ok(out);
            }
            i -= 1;
            point[i] += 1;
            if point[i] <= bx.hi[i] {
                break;
            }
            point[i] = bx.lo[i];
        }
    }
}

/// Engine selection for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Bnb,
    Naive,
    /// Run both engines and require byte-identical survivor sets.
    Both,
}

/// Propagate and enumerate with the configured engine.
pub fn solve(
    sys: &ConstraintSystem,
    engine: Engine,
    cfg: &SolverConfig,
) -> Result<SolutionSet, SolveError> {
    let bx = propagate_bounds(sys, cfg);
    match engine {
        Engine::Bnb => enumerate_bnb(sys, &bx, cfg),
        Engine::Naive => enumerate_naive(sys, &bx, cfg),
        Engine::Both => {
            let a = enumerate_bnb(sys, &bx, cfg)?;
            let b = enumerate_naive(sys, &bx, cfg)?;
            if a != b {
                return Err(SolveError::EngineMismatch);
            }
            Ok(a)
        }
    }
}
