//! Bounded-occurrence k-SAT: occurrence bounds, the tilted product measure,
//! and instance construction with per-clause certificates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::model::{Instance, VariableSpace};

/// A literal: variable index and polarity (true = positive).
pub type Lit = (u32, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatBuildError {
    KTooSmall { k: usize },
    RepeatedVariable { clause: usize, var: u32 },
    IrregularClause { clause: usize, len: usize, k: usize },
    VariableOutOfRange { clause: usize, var: u32 },
    Invalid(String),
}

impl fmt::Display for SatBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatBuildError::KTooSmall { k } => write!(f, "clause size {k} below 2"),
            SatBuildError::RepeatedVariable { clause, var } => {
                write!(f, "clause {clause} repeats variable {var}")
            }
            SatBuildError::IrregularClause { clause, len, k } => {
                write!(f, "clause {clause} has {len} literals, expected {k}")
            }
            SatBuildError::VariableOutOfRange { clause, var } => {
                write!(f, "clause {clause} uses out-of-range variable {var}")
            }
            SatBuildError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for SatBuildError {}

/// The occurrence bounds: `l_new` from the orderable criterion and the
/// asymptotically-tight earlier bound `l_gst = 2^{k+1}/(e(k+1))`.
#[derive(Clone, Copy, Debug)]
pub struct KsatBounds {
    pub l_new: f64,
    pub l_gst: f64,
}

/// Occurrence bounds for clause size k:
/// `l_new = 2^{k+1}(1-1/k)^k/(k-1) - 2/k`.
pub fn ksat_bounds(k: u32) -> KsatBounds {
    assert!(k >= 2);
    let kf = k as f64;
    let l_new = math::powi(2.0, k as i32 + 1) * math::powi(1.0 - 1.0 / kf, k as i32) / (kf - 1.0)
        - 2.0 / kf;
    let l_gst = math::powi(2.0, k as i32 + 1) / (math::E * (kf + 1.0));
    KsatBounds { l_new, l_gst }
}

/// Derived configuration of a built SAT instance.
#[derive(Clone, Debug)]
pub struct SatConfig {
    pub k: usize,
    /// Occurrence bound actually attained, `max_i l_i`.
    pub l_max: u32,
    /// Occurrence count per variable.
    pub occurrences: Vec<u32>,
    /// Fraction of each variable's occurrences that are positive.
    pub positive_fraction: Vec<f64>,
    /// Bias parameter `x = alpha k L / (2 alpha + 2k + alpha k L)`.
    pub x: f64,
    /// Uniform weight `alpha`, the optimizer of the balanced-case bound.
    pub alpha: f64,
    /// The theorem's bound for this k.
    pub l_bound: f64,
    /// Whether `l_max` sits within the bound; instances above it are still
    /// built so experiments can probe tightness.
    pub within_bound: bool,
}

fn alpha_for(k: u32, l: u32) -> f64 {
    let kf = k as f64;
    let denom = 2.0 + kf * l as f64;
    2.0 * kf * (math::pow(math::powi(2.0, k as i32 + 1) / denom, 1.0 / (kf - 1.0)) - 1.0) / denom
}

/// Build the bad-event instance of a k-SAT formula under the tilted
/// product measure: variable i is true with probability
/// `1/2 - x (delta_i - 1/2)`, and each clause contributes the event that
/// all its literals are falsified. Weights are uniformly `alpha`.
pub fn ksat_build(
    clauses: &[Vec<Lit>],
    n_vars: usize,
) -> Result<(Instance, SatConfig), SatBuildError> {
    if clauses.is_empty() {
        return Err(SatBuildError::Invalid("no clauses".into()));
    }
    let k = clauses[0].len();
    if k < 2 {
        return Err(SatBuildError::KTooSmall { k });
    }
    let mut occurrences = alloc::vec![0u32; n_vars];
    let mut positive = alloc::vec![0u32; n_vars];
    for (ci, clause) in clauses.iter().enumerate() {
        if clause.len() != k {
            return Err(SatBuildError::IrregularClause {
                clause: ci,
                len: clause.len(),
                k,
            });
        }
        let mut vars: Vec<u32> = clause.iter().map(|&(v, _)| v).collect();
        vars.sort_unstable();
        for w in vars.windows(2) {
            if w[0] == w[1] {
                return Err(SatBuildError::RepeatedVariable {
                    clause: ci,
                    var: w[0],
                });
            }
        }
        for &(v, pos) in clause {
            if v as usize >= n_vars {
                return Err(SatBuildError::VariableOutOfRange { clause: ci, var: v });
            }
            occurrences[v as usize] += 1;
            if pos {
                positive[v as usize] += 1;
            }
        }
    }
    let l_max = occurrences.iter().copied().max().unwrap_or(0);
    let bounds = ksat_bounds(k as u32);
    let alpha = alpha_for(k as u32, l_max);
    let kf = k as f64;
    let x = alpha * kf * l_max as f64 / (2.0 * alpha + 2.0 * kf + alpha * kf * l_max as f64);

    let positive_fraction: Vec<f64> = occurrences
        .iter()
        .zip(&positive)
        .map(|(&occ, &pos)| {
            if occ == 0 {
                0.5
            } else {
                pos as f64 / occ as f64
            }
        })
        .collect();

    // value 1 = true; P(true) = 1/2 - x (delta - 1/2)
    let biases: Vec<f64> = positive_fraction
        .iter()
        .map(|&d| 0.5 - x * (d - 0.5))
        .collect();
    let space = VariableSpace::bernoulli(&biases)
        .map_err(|e| SatBuildError::Invalid(format!("bad bias vector: {e}")))?;

    // falsified clause: every literal takes its complementary value
    let events: Vec<Vec<(u32, u32)>> = clauses
        .iter()
        .map(|clause| {
            clause
                .iter()
                .map(|&(v, pos)| (v, if pos { 0 } else { 1 }))
                .collect()
        })
        .collect();
    let instance = Instance::build(space, events)
        .map_err(|e| SatBuildError::Invalid(format!("instance rejected: {e}")))?;

    let config = SatConfig {
        k,
        l_max,
        occurrences,
        positive_fraction,
        x,
        alpha,
        l_bound: bounds.l_new,
        within_bound: (l_max as f64) <= bounds.l_new,
    };
    Ok((instance, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{check, Criterion, CriterionKind, MuVector};
    use alloc::vec;

    #[test]
    fn bounds_at_k6() {
        let b = ksat_bounds(6);
        assert!((b.l_new - 8.240054869684501).abs() < 1e-9);
        assert!((b.l_gst - 128.0 / (7.0 * math::E)).abs() < 1e-9);
        assert!((b.l_gst - 6.726938352849231).abs() < 1e-9);
    }

    #[test]
    fn new_bound_beats_gst_for_small_k() {
        for k in 3..=20 {
            let b = ksat_bounds(k);
            assert!(b.l_new > b.l_gst, "k = {k}");
        }
    }

    #[test]
    fn bias_formula_edge_cases() {
        // all-positive variable (delta = 1): P(true) = 1/2 - x/2
        // balanced variable (delta = 1/2): P(true) = 1/2 exactly
        let clauses: Vec<Vec<Lit>> = vec![
            vec![(0, true), (1, true), (2, true)],
            vec![(0, true), (1, false), (3, true)],
        ];
        let (inst, cfg) = ksat_build(&clauses, 4).unwrap();
        assert!((cfg.positive_fraction[0] - 1.0).abs() < 1e-15);
        assert!((cfg.positive_fraction[1] - 0.5).abs() < 1e-15);
        let p_true_0 = inst.space().prob(0, 1);
        assert!((p_true_0 - (0.5 - cfg.x / 2.0)).abs() < 1e-12);
        let p_true_1 = inst.space().prob(1, 1);
        assert!((p_true_1 - 0.5).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&cfg.x));
    }

    #[test]
    fn repeated_variable_rejected() {
        let clauses: Vec<Vec<Lit>> = vec![vec![(0, true), (0, false), (1, true)]];
        assert!(matches!(
            ksat_build(&clauses, 2),
            Err(SatBuildError::RepeatedVariable { clause: 0, var: 0 })
        ));
    }

    #[test]
    fn falsifying_event_encoding() {
        let clauses: Vec<Vec<Lit>> = vec![vec![(0, true), (1, false)], vec![(0, false), (1, true)]];
        let (inst, _) = ksat_build(&clauses, 2).unwrap();
        // clause (x0 or not-x1) falsified by x0 = false, x1 = true
        assert_eq!(inst.event(0).terms(), &[(0, 0), (1, 1)]);
        assert_eq!(inst.event(1).terms(), &[(0, 1), (1, 0)]);
    }

    // A tiny low-occurrence instance satisfies the blended closed form
    // with uniform weight alpha.
    #[test]
    fn blend_certificate_small_instance() {
        // k = 3, every variable occurs once: L = 1 <= bound(3) = 1.70
        let clauses: Vec<Vec<Lit>> = vec![
            vec![(0, true), (1, true), (2, true)],
            vec![(3, false), (4, true), (5, false)],
        ];
        let (inst, cfg) = ksat_build(&clauses, 6).unwrap();
        assert_eq!(cfg.l_max, 1);
        assert!(cfg.within_bound, "L = 1 <= bound {}", cfg.l_bound);
        let mu = MuVector::uniform(inst.event_count(), cfg.alpha).unwrap();
        let report = check(&inst, &mu, &Criterion::new(CriterionKind::BlendClosedForm)).unwrap();
        assert!(report.satisfied);
    }
}
