//! Variable spaces, atomic bad-events, and instances with their
//! precomputed (lopsi)dependency structure.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{TermError, ValidationReport, Violation};
use crate::rng::{purpose, stream};

/// Absolute tolerance for probability-vector normalization.
pub const PROB_TOL: f64 = 1e-12;

/// n discrete variables with finite domains and per-value probabilities.
///
/// Domains are index sets: variable `i` takes values `0..domain_size(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableSpace {
    probs: Vec<Vec<f64>>,
}

impl VariableSpace {
    /// Build a space from per-variable probability vectors.
    pub fn new(probs: Vec<Vec<f64>>) -> Result<Self, ValidationReport> {
        let space = VariableSpace { probs };
        let report = space.validate();
        if report.ok() {
            Ok(space)
        } else {
            Err(report)
        }
    }

    /// `n` variables, each uniform over `domain` values.
    pub fn uniform(n: usize, domain: usize) -> Self {
        assert!(domain >= 1);
        let p = 1.0 / domain as f64;
        VariableSpace {
            probs: vec![vec![p; domain]; n],
        }
    }

    /// Two-valued variables with `P(X_i = 1) = biases[i]`.
    pub fn bernoulli(biases: &[f64]) -> Result<Self, ValidationReport> {
        Self::new(biases.iter().map(|&b| vec![1.0 - b, b]).collect())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, pv) in self.probs.iter().enumerate() {
            if pv.is_empty() {
                report.push(Violation::EmptyDomain { var: i });
                continue;
            }
            let mut sum = 0.0;
            let mut bad = false;
            for (j, &p) in pv.iter().enumerate() {
                if p.is_nan() || p < 0.0 {
                    report.push(Violation::NegativeProb {
                        var: i,
                        value: j as u32,
                    });
                    bad = true;
                }
                sum += p;
            }
            if !bad && crate::math::abs(sum - 1.0) > PROB_TOL {
                report.push(Violation::UnnormalizedProbs { var: i, sum });
            }
        }
        report
    }

    pub fn var_count(&self) -> usize {
        self.probs.len()
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.probs[var].len()
    }

    pub fn prob(&self, var: usize, value: u32) -> f64 {
        self.probs[var][value as usize]
    }

    pub fn probs_of(&self, var: usize) -> &[f64] {
        &self.probs[var]
    }

    /// Largest single-value probability over all variables; `1 - max` is the
    /// switching margin the simplified parallel algorithm depends on.
    pub fn max_prob(&self) -> f64 {
        let mut m = 0.0f64;
        for pv in &self.probs {
            for &p in pv {
                m = m.max(p);
            }
        }
        m
    }

    /// Draw a full assignment, one keyed stream per variable.
    pub fn sample_assignment(&self, seed: u64) -> Assignment {
        let values = (0..self.var_count())
            .map(|i| stream(seed, &[purpose::INITIAL, i as u64]).sample(&self.probs[i]))
            .collect();
        Assignment { values }
    }
}

/// One value per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<u32>,
}

impl Assignment {
    pub fn new(values: Vec<u32>) -> Self {
        Assignment { values }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, var: usize) -> u32 {
        self.values[var]
    }

    pub fn set(&mut self, var: usize, value: u32) {
        self.values[var] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An atomic bad-event: a conjunction of (variable, value) demands.
///
/// Terms are sorted by variable and hold at most one demand per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadEvent {
    id: usize,
    terms: Vec<(u32, u32)>,
}

impl BadEvent {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn terms(&self) -> &[(u32, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value this event demands on `var`, if any.
    pub fn demands(&self, var: u32) -> Option<u32> {
        self.terms
            .binary_search_by_key(&var, |&(v, _)| v)
            .ok()
            .map(|idx| self.terms[idx].1)
    }

    /// True iff every demand is met by `a`.
    pub fn is_true(&self, a: &Assignment) -> bool {
        self.terms.iter().all(|&(v, j)| a.get(v as usize) == j)
    }
}

/// Evaluate raw terms against an assignment, checking ranges.
pub fn eval_terms(terms: &[(u32, u32)], a: &Assignment) -> Result<bool, TermError> {
    let mut all = true;
    for &(v, j) in terms {
        if v as usize >= a.len() {
            return Err(TermError::VariableOutOfRange { var: v });
        }
        all &= a.get(v as usize) == j;
    }
    Ok(all)
}

/// Two atomic events disagree on some variable.
///
/// Symmetric, and false for any event against itself (one demand per
/// variable makes self-disagreement impossible).
pub fn lopsidependent(b1: &BadEvent, b2: &BadEvent) -> bool {
    terms_disagree(b1.terms(), b2.terms())
}

/// Disagreement test on raw sorted term slices.
pub fn terms_disagree(t1: &[(u32, u32)], t2: &[(u32, u32)]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < t1.len() && j < t2.len() {
        match t1[i].0.cmp(&t2[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if t1[i].1 != t2[j].1 {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// Two atomic events share a variable (agreeing or not).
pub fn terms_share_var(t1: &[(u32, u32)], t2: &[(u32, u32)]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < t1.len() && j < t2.len() {
        match t1[i].0.cmp(&t2[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Probability of an atomic event under the product measure.
pub fn event_prob(terms: &[(u32, u32)], space: &VariableSpace) -> Result<f64, TermError> {
    let mut p = 1.0f64;
    for &(v, j) in terms {
        if v as usize >= space.var_count() {
            return Err(TermError::VariableOutOfRange { var: v });
        }
        if j as usize >= space.domain_size(v as usize) {
            return Err(TermError::ValueOutOfRange { var: v, value: j });
        }
        p *= space.prob(v as usize, j);
    }
    Ok(p)
}

/// A validated collection of bad-events over a variable space, with the
/// lopsidependency relation and per-(variable, value) indexes precomputed.
#[derive(Clone, Debug)]
pub struct Instance {
    space: VariableSpace,
    events: Vec<BadEvent>,
    probs: Vec<f64>,
    /// Lopsidependency adjacency (disagree on a shared variable), sorted.
    lopsi: Vec<Vec<usize>>,
    /// Full dependency adjacency (share a variable), sorted, self excluded.
    dep: Vec<Vec<usize>>,
    /// Events involving each variable.
    var_events: Vec<Vec<usize>>,
    /// `contains[var][value]`: events demanding exactly (var, value).
    contains: Vec<Vec<Vec<usize>>>,
    max_event_size: usize,
}

impl Instance {
    /// Validate raw events against a space and build all indexes.
    pub fn build(
        space: VariableSpace,
        raw_events: Vec<Vec<(u32, u32)>>,
    ) -> Result<Self, ValidationReport> {
        let mut report = space.validate();
        let n = space.var_count();
        let mut events = Vec::with_capacity(raw_events.len());
        for (id, mut terms) in raw_events.into_iter().enumerate() {
            terms.sort_unstable();
            terms.dedup();
            if terms.is_empty() {
                report.push(Violation::EmptyEvent { event: id });
            }
            let mut prev_var: Option<u32> = None;
            for &(v, j) in &terms {
                if v as usize >= n {
                    report.push(Violation::VariableOutOfRange { event: id, var: v });
                    continue;
                }
                if j as usize >= space.domain_size(v as usize) {
                    report.push(Violation::ValueOutOfRange {
                        event: id,
                        var: v,
                        value: j,
                    });
                }
                if prev_var == Some(v) {
                    report.push(Violation::ContradictoryEvent { event: id, var: v });
                }
                prev_var = Some(v);
            }
            events.push(BadEvent { id, terms });
        }
        if !report.ok() {
            return Err(report);
        }

        let m = events.len();
        let mut var_events = vec![Vec::new(); n];
        let mut contains: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|i| vec![Vec::new(); space.domain_size(i)])
            .collect();
        for ev in &events {
            for &(v, j) in &ev.terms {
                var_events[v as usize].push(ev.id);
                contains[v as usize][j as usize].push(ev.id);
            }
        }

        // Neighborhoods via the per-variable indexes, deduplicated with a stamp.
        let mut lopsi = vec![Vec::new(); m];
        let mut dep = vec![Vec::new(); m];
        let mut stamp = vec![usize::MAX; m];
        let mut dep_stamp = vec![usize::MAX; m];
        for ev in &events {
            for &(v, j) in &ev.terms {
                for &other in &var_events[v as usize] {
                    if other != ev.id && dep_stamp[other] != ev.id {
                        dep_stamp[other] = ev.id;
                        dep[ev.id].push(other);
                    }
                }
                for &other in &var_events[v as usize] {
                    if other == ev.id || stamp[other] == ev.id {
                        continue;
                    }
                    if events[other].demands(v) != Some(j) {
                        stamp[other] = ev.id;
                        lopsi[ev.id].push(other);
                    }
                }
            }
        }
        for adj in lopsi.iter_mut().chain(dep.iter_mut()) {
            adj.sort_unstable();
        }

        let probs = events
            .iter()
            .map(|ev| event_prob(&ev.terms, &space).expect("validated terms"))
            .collect();
        let max_event_size = events.iter().map(|e| e.len()).max().unwrap_or(0);

        Ok(Instance {
            space,
            events,
            probs,
            lopsi,
            dep,
            var_events,
            contains,
            max_event_size,
        })
    }

    /// Re-check every type invariant plus the structural fact that
    /// lopsidependent events are mutually exclusive (they disagree on a
    /// shared variable, so no assignment satisfies both).
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.space.validate();
        for ev in &self.events {
            if ev.terms.is_empty() {
                report.push(Violation::EmptyEvent { event: ev.id });
            }
            for w in ev.terms.windows(2) {
                if w[0].0 == w[1].0 {
                    report.push(Violation::ContradictoryEvent {
                        event: ev.id,
                        var: w[0].0,
                    });
                }
            }
            for &(v, j) in &ev.terms {
                if v as usize >= self.space.var_count() {
                    report.push(Violation::VariableOutOfRange {
                        event: ev.id,
                        var: v,
                    });
                } else if j as usize >= self.space.domain_size(v as usize) {
                    report.push(Violation::ValueOutOfRange {
                        event: ev.id,
                        var: v,
                        value: j,
                    });
                }
            }
        }
        // Relation consistency in both directions.
        for (id, ev) in self.events.iter().enumerate() {
            for other in 0..self.events.len() {
                let recorded = self.lopsi[id].binary_search(&other).is_ok();
                let actual = lopsidependent(ev, &self.events[other]);
                if recorded != actual {
                    report.push(Violation::InconsistentLopsidependency {
                        first: id,
                        second: other,
                    });
                }
            }
        }
        report
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn var_count(&self) -> usize {
        self.space.var_count()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn events(&self) -> &[BadEvent] {
        &self.events
    }

    pub fn event(&self, id: usize) -> &BadEvent {
        &self.events[id]
    }

    pub fn event_prob(&self, id: usize) -> f64 {
        self.probs[id]
    }

    pub fn lopsi_neighbors(&self, id: usize) -> &[usize] {
        &self.lopsi[id]
    }

    pub fn dep_neighbors(&self, id: usize) -> &[usize] {
        &self.dep[id]
    }

    pub fn events_involving(&self, var: u32) -> &[usize] {
        &self.var_events[var as usize]
    }

    pub fn events_containing(&self, var: u32, value: u32) -> &[usize] {
        &self.contains[var as usize][value as usize]
    }

    /// Largest event size (the parallel algorithm's M).
    pub fn max_event_size(&self) -> usize {
        self.max_event_size
    }

    /// Ids of events true under `a`, ascending.
    pub fn true_events(&self, a: &Assignment) -> Vec<usize> {
        self.events
            .iter()
            .filter(|e| e.is_true(a))
            .map(|e| e.id)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_bit_space() -> VariableSpace {
        VariableSpace::uniform(3, 2)
    }

    #[test]
    fn is_true_conjunction() {
        // Single-term conjunction holds; adding a failing term breaks it.
        let space = two_bit_space();
        let inst = Instance::build(space, vec![vec![(1, 0)], vec![(1, 0), (2, 0)]]).unwrap();
        let a = Assignment::new(vec![9, 0, 1]); // var0 unused by events
        let _ = a;
        let a = Assignment::new(vec![0, 0, 1]);
        assert!(inst.event(0).is_true(&a));
        assert!(!inst.event(1).is_true(&a));
    }

    #[test]
    fn empty_event_rejected() {
        let err = Instance::build(two_bit_space(), vec![vec![]]).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::EmptyEvent { event: 0 })));
    }

    #[test]
    fn lopsidependency_examples() {
        let inst = Instance::build(
            VariableSpace::uniform(4, 2),
            vec![
                vec![(1, 0)],         // B1
                vec![(1, 1)],         // B2: disagrees with B1
                vec![(1, 0), (2, 1)], // B3: agrees with B1
                vec![(2, 0)],         // B4: disjoint from B1
            ],
        )
        .unwrap();
        let (b1, b2, b3, b4) = (inst.event(0), inst.event(1), inst.event(2), inst.event(3));
        assert!(lopsidependent(b1, b2));
        assert!(!lopsidependent(b3, b1)); // agreement only
        assert!(!lopsidependent(b1, b4)); // disjoint variables
        assert!(!lopsidependent(b1, b1)); // never with itself
                                          // symmetry over all pairs
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    lopsidependent(inst.event(i), inst.event(j)),
                    lopsidependent(inst.event(j), inst.event(i))
                );
            }
        }
        assert_eq!(inst.lopsi_neighbors(0), &[1]);
        assert_eq!(inst.dep_neighbors(0), &[1, 2]);
    }

    #[test]
    fn event_prob_examples() {
        let inst = Instance::build(two_bit_space(), vec![vec![(1, 0), (2, 1)]]).unwrap();
        assert!((inst.event_prob(0) - 0.25).abs() < 1e-15);

        let sure = VariableSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((event_prob(&[(0, 1)], &sure).unwrap() - 1.0).abs() < 1e-15);

        // Ramsey-style: three edges red with probability p each -> q = p^3.
        let p = 0.2;
        let space = VariableSpace::bernoulli(&[p, p, p]).unwrap();
        let q = event_prob(&[(0, 1), (1, 1), (2, 1)], &space).unwrap();
        assert!((q - p * p * p).abs() < 1e-15);
    }

    #[test]
    fn contradictory_event_rejected() {
        let err = Instance::build(two_bit_space(), vec![vec![(1, 0), (1, 1)]]).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ContradictoryEvent { event: 0, var: 1 })));
    }

    #[test]
    fn unnormalized_probs_rejected() {
        let err = VariableSpace::new(vec![vec![0.5, 0.6]]).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::UnnormalizedProbs { var: 0, .. })));
    }

    #[test]
    fn validate_well_formed() {
        let inst = Instance::build(
            two_bit_space(),
            vec![vec![(0, 0), (1, 0)], vec![(1, 1), (2, 0)]],
        )
        .unwrap();
        assert!(inst.validate().ok());
    }

    #[test]
    fn eval_terms_range_error() {
        let a = Assignment::new(vec![0, 1]);
        assert!(eval_terms(&[(5, 0)], &a).is_err());
        assert_eq!(eval_terms(&[(1, 1)], &a), Ok(true));
    }

    // Lopsidependent events are mutually exclusive: brute-force over all
    // assignments of small boolean instances.
    #[test]
    fn lopsidependent_implies_exclusive() {
        let mut gen = crate::rng::stream(41, &[crate::rng::purpose::GEN, 77]);
        for _ in 0..50 {
            let n = 2 + (gen.next_below(10) as usize); // <= 12 booleans
            let m = 1 + (gen.next_below(6) as usize);
            let mut raw = Vec::new();
            for _ in 0..m {
                let size = 1 + (gen.next_below(3.min(n as u64)) as usize);
                let mut vars: Vec<u32> = (0..n as u32).collect();
                for i in 0..size {
                    let j = i + gen.next_below((n - i) as u64) as usize;
                    vars.swap(i, j);
                }
                let terms: Vec<(u32, u32)> = vars[..size]
                    .iter()
                    .map(|&v| (v, gen.next_below(2) as u32))
                    .collect();
                raw.push(terms);
            }
            let inst = Instance::build(VariableSpace::uniform(n, 2), raw).unwrap();
            for i in 0..inst.event_count() {
                for &j in inst.lopsi_neighbors(i) {
                    for bits in 0..(1u32 << n) {
                        let a = Assignment::new((0..n).map(|v| (bits >> v) & 1).collect());
                        assert!(
                            !(inst.event(i).is_true(&a) && inst.event(j).is_true(&a)),
                            "lopsidependent events {i},{j} both true"
                        );
                    }
                }
            }
        }
    }

    // event_prob equals the measure of satisfying assignments by enumeration.
    #[test]
    fn event_prob_matches_brute_force() {
        let space = VariableSpace::new(vec![vec![0.25, 0.75], vec![0.5, 0.5], vec![0.1, 0.2, 0.7]])
            .unwrap();
        let inst = Instance::build(space, vec![vec![(0, 1), (2, 2)], vec![(1, 0)]]).unwrap();
        for id in 0..inst.event_count() {
            let mut total = 0.0;
            for v0 in 0..2u32 {
                for v1 in 0..2u32 {
                    for v2 in 0..3u32 {
                        let a = Assignment::new(vec![v0, v1, v2]);
                        if inst.event(id).is_true(&a) {
                            total += inst.space().prob(0, v0)
                                * inst.space().prob(1, v1)
                                * inst.space().prob(2, v2);
                        }
                    }
                }
            }
            assert!((total - inst.event_prob(id)).abs() < 1e-12);
        }
    }
}
