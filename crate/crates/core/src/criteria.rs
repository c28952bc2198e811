//! Convergence criteria for the resampling algorithm, from the symmetric
//! local lemma up to the exact orderable-set form, plus the weight-vector
//! fixed-point search.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CriterionError;
use crate::math;
use crate::model::Instance;

/// Default cap on subsets enumerated by the exact kinds.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;
/// Default per-entry divergence cap for the fixed-point search.
pub const DEFAULT_DIVERGENCE_CAP: f64 = 1e9;
/// Default iteration budget for the fixed-point search.
pub const DEFAULT_MAX_ITERS: u64 = 100_000;
/// Convergence tolerance: max per-event change between iterates.
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Relative slack when comparing mu against rhs, so exact fixed points
/// (mu = rhs) count as satisfied.
pub const CHECK_TOL: f64 = 1e-9;

/// Nonnegative weight per bad-event.
#[derive(Clone, Debug, PartialEq)]
pub struct MuVector {
    values: Vec<f64>,
}

impl MuVector {
    pub fn new(values: Vec<f64>) -> Result<Self, CriterionError> {
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || v < 0.0 || !v.is_finite() {
                return Err(CriterionError::InvalidMu { event: i });
            }
        }
        Ok(MuVector { values })
    }

    pub fn uniform(len: usize, value: f64) -> Result<Self, CriterionError> {
        Self::new(vec![value; len])
    }

    pub fn get(&self, event: usize) -> f64 {
        self.values[event]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total weight W.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Which neighborhood a criterion walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborRelation {
    /// Events disagreeing on a shared variable.
    Lopsidependency,
    /// Events sharing a variable, agreeing or not. Counting agreements can
    /// strengthen the independent-set criterion on some instances.
    FullDependency,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    /// `e * P(B) * (d+1) <= 1` per event; not weight-based, the report's
    /// lhs is fixed at 1.
    SymmetricLll,
    /// `mu(B) >= P(B) * prod_{B' ~ B or B' = B} (1 + mu(B'))` over the full
    /// dependency graph (inclusive product; equivalent to the classical
    /// x-parametrized form).
    AsymmetricLll,
    /// `mu(B) >= P(B) [mu(B) + prod_{B' lopsidependent} (1 + mu(B'))]`.
    Llll,
    /// Per-variable product form of the lopsided criterion: neighbors are
    /// counted once per disagreeing variable.
    LlllVariable,
    /// `mu(B) >= P(B) [mu(B) + sum over independent neighbor sets of
    /// prod mu]`, neighborhood pluggable.
    PegdenGeneral(NeighborRelation),
    /// Per-variable sum form of the independent-set criterion over the full
    /// dependency graph: `mu(B) >= P(B) prod_{(i,j) in B} (1 + sum_{B'
    /// involving i} mu(B'))`.
    PegdenVariable,
    /// `mu(B) >= P(B) [mu(B) + prod_{(i,j) in B} (1 + sum of mu over events
    /// disagreeing at i)]`; the closed form blending the two above.
    BlendClosedForm,
    /// Exact sum over orderable sets.
    OrderableExact,
    /// Exact sum over assignable sets (orderable relaxed to an injection).
    AssignableExact,
}

impl CriterionKind {
    pub fn is_enumerative(&self) -> bool {
        matches!(
            self,
            CriterionKind::PegdenGeneral(_)
                | CriterionKind::OrderableExact
                | CriterionKind::AssignableExact
        )
    }
}

/// A criterion kind plus its multiplicative slack and enumeration budget.
#[derive(Clone, Copy, Debug)]
pub struct Criterion {
    pub kind: CriterionKind,
    /// Slack epsilon >= 0; the right-hand side is multiplied by (1+epsilon).
    pub epsilon: f64,
    pub enumeration_cap: u64,
}

impl Criterion {
    pub fn new(kind: CriterionKind) -> Self {
        Criterion {
            kind,
            epsilon: 0.0,
            enumeration_cap: DEFAULT_ENUM_CAP,
        }
    }

    pub fn with_epsilon(kind: CriterionKind, epsilon: f64) -> Self {
        assert!(epsilon >= 0.0);
        Criterion {
            kind,
            epsilon,
            enumeration_cap: DEFAULT_ENUM_CAP,
        }
    }
}

/// Decide whether `set` (event ids, no duplicates) is orderable to the
/// target: either the target singleton, or an ordering exists in which each
/// event disagrees with the target on a variable no earlier event does.
///
/// Greedy last-element peeling is exact here: removing any element that
/// disagrees with the target on a variable no *other* remaining element
/// disagrees on preserves orderability of the remainder, so no backtracking
/// is required.
pub fn is_orderable(
    instance: &Instance,
    target_terms: &[(u32, u32)],
    target_id: Option<usize>,
    set: &[usize],
) -> bool {
    if let Some(id) = target_id {
        if set == [id] {
            return true; // the singleton case
        }
        if set.contains(&id) {
            return false; // nothing disagrees with itself
        }
    }
    let mut remaining: Vec<usize> = set.to_vec();
    while !remaining.is_empty() {
        // Per target term, how many remaining events disagree there.
        let mut counts = vec![0u32; target_terms.len()];
        for &e in &remaining {
            let ev = instance.event(e);
            for (k, &(var, val)) in target_terms.iter().enumerate() {
                if matches!(ev.demands(var), Some(other) if other != val) {
                    counts[k] += 1;
                }
            }
        }
        let mut peeled = None;
        'outer: for (pos, &e) in remaining.iter().enumerate() {
            let ev = instance.event(e);
            for (k, &(var, val)) in target_terms.iter().enumerate() {
                if counts[k] == 1 && matches!(ev.demands(var), Some(other) if other != val) {
                    peeled = Some(pos);
                    break 'outer;
                }
            }
        }
        match peeled {
            Some(pos) => {
                remaining.swap_remove(pos);
            }
            None => return false,
        }
    }
    true
}

/// Decide whether `set` is assignable to the target: the target singleton,
/// or an injective map from events to target terms they disagree with.
pub fn is_assignable(
    instance: &Instance,
    target_terms: &[(u32, u32)],
    target_id: Option<usize>,
    set: &[usize],
) -> bool {
    if let Some(id) = target_id {
        if set == [id] {
            return true;
        }
    }
    if set.len() > target_terms.len() {
        return false;
    }
    // Bipartite matching, events against target term slots.
    let mut slot_of = vec![usize::MAX; target_terms.len()];
    fn augment(
        instance: &Instance,
        target_terms: &[(u32, u32)],
        set: &[usize],
        ev_pos: usize,
        seen: &mut [bool],
        slot_of: &mut [usize],
    ) -> bool {
        let ev = instance.event(set[ev_pos]);
        for (k, &(var, val)) in target_terms.iter().enumerate() {
            if seen[k] || !matches!(ev.demands(var), Some(other) if other != val) {
                continue;
            }
            seen[k] = true;
            if slot_of[k] == usize::MAX
                || augment(instance, target_terms, set, slot_of[k], seen, slot_of)
            {
                slot_of[k] = ev_pos;
                return true;
            }
        }
        false
    }
    for ev_pos in 0..set.len() {
        let mut seen = vec![false; target_terms.len()];
        if !augment(instance, target_terms, set, ev_pos, &mut seen, &mut slot_of) {
            return false;
        }
    }
    true
}

/// Events that disagree with the given terms on some variable, ascending.
pub fn disagreeing_events(instance: &Instance, terms: &[(u32, u32)]) -> Vec<usize> {
    let mut out = Vec::new();
    for &(var, val) in terms {
        for &e in instance.events_involving(var) {
            if matches!(instance.event(e).demands(var), Some(other) if other != val) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

struct SetSearch<'a> {
    instance: &'a Instance,
    target_terms: &'a [(u32, u32)],
    target_id: Option<usize>,
    candidates: Vec<usize>,
    max_size: usize,
    cap: u64,
    orderable: bool,
    emitted: u64,
    out: Vec<Vec<usize>>,
}

impl SetSearch<'_> {
    // Both families are downward closed, so prefixes that fail never have
    // passing supersets and the search can prune.
    fn rec(&mut self, start: usize, cur: &mut Vec<usize>) -> Result<(), CriterionError> {
        self.emitted += 1;
        if self.emitted > self.cap {
            return Err(CriterionError::EnumerationCapExceeded { cap: self.cap });
        }
        self.out.push(cur.clone());
        if cur.len() == self.max_size {
            return Ok(());
        }
        for idx in start..self.candidates.len() {
            cur.push(self.candidates[idx]);
            let pass = if self.orderable {
                is_orderable(self.instance, self.target_terms, self.target_id, cur)
            } else {
                is_assignable(self.instance, self.target_terms, self.target_id, cur)
            };
            if pass {
                self.rec(idx + 1, cur)?;
            }
            cur.pop();
        }
        Ok(())
    }
}

fn enumerate_sets(
    instance: &Instance,
    target_terms: &[(u32, u32)],
    target_id: Option<usize>,
    cap: u64,
    orderable: bool,
) -> Result<Vec<Vec<usize>>, CriterionError> {
    let mut search = SetSearch {
        instance,
        target_terms,
        target_id,
        candidates: disagreeing_events(instance, target_terms),
        max_size: target_terms.len(),
        cap,
        orderable,
        emitted: 0,
        out: Vec::new(),
    };
    search.rec(0, &mut Vec::new())?;
    let SetSearch {
        mut out,
        mut emitted,
        ..
    } = search;
    if let Some(id) = target_id {
        emitted += 1;
        if emitted > cap {
            return Err(CriterionError::EnumerationCapExceeded { cap });
        }
        out.push(vec![id]);
    }
    Ok(out)
}

/// Enumerate all subsets orderable to an instance event, the empty set and
/// the target singleton included.
pub fn enumerate_orderable_sets(
    instance: &Instance,
    target: usize,
    cap: u64,
) -> Result<Vec<Vec<usize>>, CriterionError> {
    if target >= instance.event_count() {
        return Err(CriterionError::EventOutOfRange { event: target });
    }
    let terms = instance.event(target).terms().to_vec();
    enumerate_sets(instance, &terms, Some(target), cap, true)
}

/// Orderable sets for an external atomic event (not a bad-event of the
/// instance); the singleton case does not apply.
pub fn enumerate_orderable_sets_for_terms(
    instance: &Instance,
    terms: &[(u32, u32)],
    cap: u64,
) -> Result<Vec<Vec<usize>>, CriterionError> {
    enumerate_sets(instance, terms, None, cap, true)
}

/// Enumerate all subsets assignable to an instance event.
pub fn enumerate_assignable_sets(
    instance: &Instance,
    target: usize,
    cap: u64,
) -> Result<Vec<Vec<usize>>, CriterionError> {
    if target >= instance.event_count() {
        return Err(CriterionError::EventOutOfRange { event: target });
    }
    let terms = instance.event(target).terms().to_vec();
    enumerate_sets(instance, &terms, Some(target), cap, false)
}

fn check_mu(instance: &Instance, mu: &MuVector) -> Result<(), CriterionError> {
    if mu.len() != instance.event_count() {
        return Err(CriterionError::MuLengthMismatch {
            expected: instance.event_count(),
            got: mu.len(),
        });
    }
    Ok(())
}

/// Sum of mu over events disagreeing with (var, val): everything involving
/// the variable minus everything agreeing on it.
fn disagree_sum(instance: &Instance, mu: &MuVector, var: u32, val: u32) -> f64 {
    let involve: f64 = instance
        .events_involving(var)
        .iter()
        .map(|&e| mu.get(e))
        .sum();
    let agree: f64 = instance
        .events_containing(var, val)
        .iter()
        .map(|&e| mu.get(e))
        .sum();
    involve - agree
}

fn sum_products_over_independent(
    instance: &Instance,
    mu: &MuVector,
    target: usize,
    relation: NeighborRelation,
    cap: u64,
) -> Result<f64, CriterionError> {
    let neighbors: &[usize] = match relation {
        NeighborRelation::Lopsidependency => instance.lopsi_neighbors(target),
        NeighborRelation::FullDependency => instance.dep_neighbors(target),
    };
    let adjacent = |a: usize, b: usize| -> bool {
        let adj = match relation {
            NeighborRelation::Lopsidependency => instance.lopsi_neighbors(a),
            NeighborRelation::FullDependency => instance.dep_neighbors(a),
        };
        adj.binary_search(&b).is_ok()
    };
    // DFS over independent subsets; the empty set contributes 1.
    let mut total = 0.0f64;
    let mut stack: Vec<(usize, f64, Vec<usize>)> = vec![(0, 1.0, Vec::new())];
    let mut emitted: u64 = 0;
    while let Some((start, product, members)) = stack.pop() {
        emitted += 1;
        if emitted > cap {
            return Err(CriterionError::EnumerationCapExceeded { cap });
        }
        total += product;
        for (idx, &cand) in neighbors.iter().enumerate().skip(start) {
            if members.iter().all(|&m| !adjacent(m, cand)) {
                let mut next = members.clone();
                next.push(cand);
                stack.push((idx + 1, product * mu.get(cand), next));
            }
        }
    }
    Ok(total)
}

/// Right-hand side of the criterion for one event, slack included.
pub fn rhs(
    instance: &Instance,
    target: usize,
    mu: &MuVector,
    crit: &Criterion,
) -> Result<f64, CriterionError> {
    if target >= instance.event_count() {
        return Err(CriterionError::EventOutOfRange { event: target });
    }
    check_mu(instance, mu)?;
    let slack = 1.0 + crit.epsilon;
    let p = instance.event_prob(target);
    let ev = instance.event(target);
    let value = match crit.kind {
        CriterionKind::SymmetricLll => {
            let d = instance.dep_neighbors(target).len() as f64;
            math::E * p * (d + 1.0)
        }
        CriterionKind::AsymmetricLll => {
            let mut prod = 1.0 + mu.get(target);
            for &b in instance.dep_neighbors(target) {
                prod *= 1.0 + mu.get(b);
            }
            p * prod
        }
        CriterionKind::Llll => {
            let mut prod = 1.0f64;
            for &b in instance.lopsi_neighbors(target) {
                prod *= 1.0 + mu.get(b);
            }
            p * (mu.get(target) + prod)
        }
        CriterionKind::LlllVariable => {
            let mut prod = 1.0f64;
            for &(var, val) in ev.terms() {
                for &b in instance.events_involving(var) {
                    if matches!(instance.event(b).demands(var), Some(other) if other != val) {
                        prod *= 1.0 + mu.get(b);
                    }
                }
            }
            p * (mu.get(target) + prod)
        }
        CriterionKind::PegdenGeneral(relation) => {
            let sum = sum_products_over_independent(
                instance,
                mu,
                target,
                relation,
                crit.enumeration_cap,
            )?;
            p * (mu.get(target) + sum)
        }
        CriterionKind::PegdenVariable => {
            let mut prod = 1.0f64;
            for &(var, _) in ev.terms() {
                let s: f64 = instance
                    .events_involving(var)
                    .iter()
                    .map(|&e| mu.get(e))
                    .sum();
                prod *= 1.0 + s;
            }
            p * prod
        }
        CriterionKind::BlendClosedForm => {
            let mut prod = 1.0f64;
            for &(var, val) in ev.terms() {
                prod *= 1.0 + disagree_sum(instance, mu, var, val);
            }
            p * (mu.get(target) + prod)
        }
        CriterionKind::OrderableExact | CriterionKind::AssignableExact => {
            let sets = if crit.kind == CriterionKind::OrderableExact {
                enumerate_orderable_sets(instance, target, crit.enumeration_cap)?
            } else {
                enumerate_assignable_sets(instance, target, crit.enumeration_cap)?
            };
            let mut sum = 0.0f64;
            for set in &sets {
                let mut prod = 1.0f64;
                for &b in set {
                    prod *= mu.get(b);
                }
                sum += prod;
            }
            p * sum
        }
    };
    Ok(slack * value)
}

#[derive(Clone, Debug)]
pub struct EventCheck {
    pub event: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Per-event comparison results plus the total weight W.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub epsilon: f64,
    pub per_event: Vec<EventCheck>,
    pub total_weight: f64,
    pub satisfied: bool,
}

/// Check the criterion for every event. The per-event flag compares
/// `mu(B) >= rhs(B)` (lhs fixed at 1 for the symmetric kind) with a 1e-9
/// relative tolerance so exact fixed points pass.
pub fn check(
    instance: &Instance,
    mu: &MuVector,
    crit: &Criterion,
) -> Result<CriterionReport, CriterionError> {
    check_mu(instance, mu)?;
    let mut per_event = Vec::with_capacity(instance.event_count());
    let mut satisfied = true;
    for b in 0..instance.event_count() {
        let r = rhs(instance, b, mu, crit)?;
        let lhs = match crit.kind {
            CriterionKind::SymmetricLll => 1.0,
            _ => mu.get(b),
        };
        let ok = lhs >= r - CHECK_TOL * math::abs(r).max(1.0);
        satisfied &= ok;
        per_event.push(EventCheck {
            event: b,
            lhs,
            rhs: r,
            ok,
        });
    }
    Ok(CriterionReport {
        kind: crit.kind,
        epsilon: crit.epsilon,
        per_event,
        total_weight: mu.total(),
        satisfied,
    })
}

/// Why the fixed-point search stopped without a satisfying weight vector.
#[derive(Clone, Debug)]
pub struct FixedPointFailure {
    pub iterations: u64,
    /// Some entry exceeded the divergence cap (otherwise the iteration
    /// budget ran out). Failure means "no weights found", not "none exist".
    pub diverged: bool,
}

#[derive(Clone, Debug)]
pub enum FixedPointOutcome {
    Found(MuVector),
    Failure(FixedPointFailure),
}

impl FixedPointOutcome {
    pub fn found(self) -> Option<MuVector> {
        match self {
            FixedPointOutcome::Found(mu) => Some(mu),
            FixedPointOutcome::Failure(_) => None,
        }
    }
}

/// Search for a satisfying weight vector by monotone fixed-point iteration
/// from `mu0(B) = (1+eps) P(B)`.
///
/// The rhs map is monotone in mu, so iterates increase toward the least
/// fixed point whenever one exists; on convergence the result is verified
/// with [`check`].
pub fn find_mu_fixed_point(
    instance: &Instance,
    crit: &Criterion,
    max_iters: u64,
    cap: f64,
) -> Result<FixedPointOutcome, CriterionError> {
    let m = instance.event_count();
    let mut current = MuVector::new(
        (0..m)
            .map(|b| instance.event_prob(b) * (1.0 + crit.epsilon))
            .collect(),
    )
    .expect("probabilities are finite and nonnegative");
    for iter in 1..=max_iters {
        let mut next = Vec::with_capacity(m);
        let mut delta = 0.0f64;
        for b in 0..m {
            let r = rhs(instance, b, &current, crit)?;
            if !r.is_finite() || r > cap {
                return Ok(FixedPointOutcome::Failure(FixedPointFailure {
                    iterations: iter,
                    diverged: true,
                }));
            }
            delta = delta.max(math::abs(r - current.get(b)));
            next.push(r);
        }
        let next = MuVector::new(next).expect("rhs is finite and nonnegative");
        if delta < FIXED_POINT_TOL {
            let report = check(instance, &next, crit)?;
            return Ok(if report.satisfied {
                FixedPointOutcome::Found(next)
            } else {
                FixedPointOutcome::Failure(FixedPointFailure {
                    iterations: iter,
                    diverged: false,
                })
            });
        }
        current = next;
    }
    Ok(FixedPointOutcome::Failure(FixedPointFailure {
        iterations: max_iters,
        diverged: false,
    }))
}
