//! Proper coloring of k-uniform hypergraphs: per-(edge, color) bad-events,
//! and the largest per-vertex degree each criterion certifies.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::model::{Instance, VariableSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypergraphError {
    NonUniformEdge { edge: usize, len: usize, k: usize },
    VertexOutOfRange { edge: usize, vertex: u32 },
    TooFewColors { c: u32 },
    Invalid(String),
}

impl fmt::Display for HypergraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypergraphError::NonUniformEdge { edge, len, k } => {
                write!(f, "edge {edge} has {len} vertices, expected {k}")
            }
            HypergraphError::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} uses out-of-range vertex {vertex}")
            }
            HypergraphError::TooFewColors { c } => write!(f, "need at least 2 colors, got {c}"),
            HypergraphError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for HypergraphError {}

/// Which occurrence-bound criterion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypergraphCriterion {
    /// The orderable-set closed form.
    New,
    /// The plain lopsided neighbor-product criterion.
    Original,
}

/// Right-hand side minus alpha for the chosen criterion at degree bound l.
fn gap(c: u32, k: u32, l: u32, kind: HypergraphCriterion, alpha: f64) -> f64 {
    let ck = math::powi(c as f64, -(k as i32));
    match kind {
        HypergraphCriterion::New => {
            // alpha >= c^-k [ (1+aD)^k + a(c-1)((1+aD)^k - (aD)^k) + a ],
            // D = (c-1)(L-1)
            let d = (c as f64 - 1.0) * (l as f64 - 1.0);
            let t = math::powi(1.0 + alpha * d, k as i32);
            let td = math::powi(alpha * d, k as i32);
            ck * (t + alpha * (c as f64 - 1.0) * (t - td) + alpha) - alpha
        }
        HypergraphCriterion::Original => {
            // alpha >= c^-k [ alpha + (1+alpha)^((k(L-1)+1)(c-1)) ]
            let e = ((k as f64) * (l as f64 - 1.0) + 1.0) * (c as f64 - 1.0);
            ck * (alpha + math::pow(1.0 + alpha, e)) - alpha
        }
    }
}

/// Smallest gap over alpha, by golden-section search on a log scale after
/// a coarse bracketing scan.
fn min_gap(c: u32, k: u32, l: u32, kind: HypergraphCriterion) -> (f64, f64) {
    let lo_ln = math::ln(1e-12);
    let hi_ln = math::ln(1e6);
    // coarse scan to bracket the minimum
    let steps = 240;
    let mut best = (f64::INFINITY, lo_ln);
    for i in 0..=steps {
        let x = lo_ln + (hi_ln - lo_ln) * i as f64 / steps as f64;
        let g = gap(c, k, l, kind, math::exp(x));
        if g < best.0 {
            best = (g, x);
        }
    }
    let span = (hi_ln - lo_ln) / steps as f64;
    let (mut a, mut b) = (best.1 - span, best.1 + span);
    let phi = 0.618_033_988_749_894_9;
    for _ in 0..200 {
        let m1 = b - phi * (b - a);
        let m2 = a + phi * (b - a);
        if gap(c, k, l, kind, math::exp(m1)) < gap(c, k, l, kind, math::exp(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let x = 0.5 * (a + b);
    (gap(c, k, l, kind, math::exp(x)), math::exp(x))
}

/// A weight alpha satisfying the criterion at degree bound `l`, if any.
pub fn hypergraph_alpha(c: u32, k: u32, l: u32, kind: HypergraphCriterion) -> Option<f64> {
    if c < 2 || k < 2 || l < 1 {
        return None;
    }
    let (g, alpha) = min_gap(c, k, l, kind);
    (g <= 0.0).then_some(alpha)
}

/// Upper limit of the degree scan; bounds beyond this sit far outside the
/// desk-scale regime these calculators serve.
pub const LMAX_SCAN_CAP: u32 = 1_000_000;

/// Largest integer degree bound L certified by the criterion, scanning
/// downward from the asymptotic closed form plus slack, clamped to
/// [`LMAX_SCAN_CAP`].
pub fn hypergraph_lmax(c: u32, k: u32, kind: HypergraphCriterion) -> u32 {
    assert!(c >= 2 && k >= 2);
    let asymptotic = math::powi(c as f64, k as i32)
        * math::powi(1.0 - 1.0 / k as f64, k as i32 - 1)
        / ((c as f64 - 1.0) * k as f64);
    // clamp so huge parameters cannot run the scan away
    let start = if asymptotic.is_finite() && asymptotic < LMAX_SCAN_CAP as f64 {
        math::ceil(asymptotic) as u32 + 5
    } else {
        LMAX_SCAN_CAP
    };
    for l in (1..=start).rev() {
        if hypergraph_alpha(c, k, l, kind).is_some() {
            return l;
        }
    }
    0
}

/// The asymptotic closed-form weight and bound used for large L:
/// `alpha = ((c^k/((c-1)kL))^{1/(k-1)} - 1)/((c-1)L)` certifies
/// `L <= c^k (1-1/k)^{k-1} / ((c-1)k)`.
pub fn hypergraph_asymptotic(c: u32, k: u32) -> (f64, f64) {
    let kf = k as f64;
    let bound = math::powi(c as f64, k as i32) * math::powi(1.0 - 1.0 / kf, k as i32 - 1)
        / ((c as f64 - 1.0) * kf);
    let l = math::floor(bound).max(1.0);
    let alpha = (math::pow(
        math::powi(c as f64, k as i32) / ((c as f64 - 1.0) * kf * l),
        1.0 / (kf - 1.0),
    ) - 1.0)
        / ((c as f64 - 1.0) * l);
    (bound, alpha)
}

/// Built hypergraph-coloring instance parameters.
#[derive(Clone, Debug)]
pub struct HypergraphColorConfig {
    pub k: usize,
    pub colors: u32,
    /// Max vertex degree of the input hypergraph.
    pub l_max: u32,
    /// Uniform weight certifying the new criterion at `l_max`, if feasible.
    pub alpha: Option<f64>,
}

/// One bad-event per (edge, color): all k vertices of the edge take that
/// color, under the uniform color distribution. Event ids are
/// `edge * c + color`.
pub fn hypergraph_build(
    edges: &[Vec<u32>],
    n_vertices: usize,
    c: u32,
) -> Result<(Instance, HypergraphColorConfig), HypergraphError> {
    if c < 2 {
        return Err(HypergraphError::TooFewColors { c });
    }
    if edges.is_empty() {
        return Err(HypergraphError::Invalid("no edges".into()));
    }
    let k = edges[0].len();
    if k < 2 {
        return Err(HypergraphError::Invalid(format!("edge size {k} below 2")));
    }
    let mut degree = alloc::vec![0u32; n_vertices];
    for (ei, edge) in edges.iter().enumerate() {
        if edge.len() != k {
            return Err(HypergraphError::NonUniformEdge {
                edge: ei,
                len: edge.len(),
                k,
            });
        }
        for &v in edge {
            if v as usize >= n_vertices {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: ei,
                    vertex: v,
                });
            }
            degree[v as usize] += 1;
        }
    }
    let l_max = degree.iter().copied().max().unwrap_or(0);

    let space = VariableSpace::uniform(n_vertices, c as usize);
    let mut events = Vec::with_capacity(edges.len() * c as usize);
    for edge in edges {
        for color in 0..c {
            events.push(edge.iter().map(|&v| (v, color)).collect());
        }
    }
    let instance = Instance::build(space, events)
        .map_err(|e| HypergraphError::Invalid(format!("instance rejected: {e}")))?;
    let alpha = hypergraph_alpha(c, k as u32, l_max.max(1), HypergraphCriterion::New);
    Ok((
        instance,
        HypergraphColorConfig {
            k,
            colors: c,
            l_max,
            alpha,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lopsidependent;
    use alloc::vec;

    #[test]
    fn table_spot_checks() {
        assert_eq!(hypergraph_lmax(2, 6, HypergraphCriterion::New), 5);
        assert_eq!(hypergraph_lmax(2, 6, HypergraphCriterion::Original), 4);
        assert_eq!(hypergraph_lmax(2, 10, HypergraphCriterion::New), 40);
        assert_eq!(hypergraph_lmax(2, 10, HypergraphCriterion::Original), 38);
    }

    #[test]
    fn build_single_edge_two_colors() {
        let (inst, cfg) = hypergraph_build(&[vec![0, 1]], 2, 2).unwrap();
        assert_eq!(inst.event_count(), 2);
        assert!((inst.event_prob(0) - 0.25).abs() < 1e-15);
        assert!((inst.event_prob(1) - 0.25).abs() < 1e-15);
        assert_eq!(cfg.l_max, 1);
        // same edge, different colors: every vertex disagrees
        assert!(lopsidependent(inst.event(0), inst.event(1)));
    }

    #[test]
    fn disjoint_edges_not_lopsidependent() {
        let (inst, _) = hypergraph_build(&[vec![0, 1], vec![2, 3]], 4, 2).unwrap();
        // events 0,1 belong to edge 0; events 2,3 to edge 1
        assert!(!lopsidependent(inst.event(0), inst.event(2)));
        assert!(!lopsidependent(inst.event(0), inst.event(3)));
        assert!(!lopsidependent(inst.event(1), inst.event(3)));
    }

    #[test]
    fn non_uniform_edge_rejected() {
        let err = hypergraph_build(&[vec![0, 1], vec![0, 1, 2]], 3, 2).unwrap_err();
        assert!(matches!(
            err,
            HypergraphError::NonUniformEdge {
                edge: 1,
                len: 3,
                k: 2
            }
        ));
    }

    #[test]
    fn asymptotic_form_is_consistent() {
        for (c, k) in [(2u32, 8u32), (3, 6), (4, 5)] {
            let (bound, alpha) = hypergraph_asymptotic(c, k);
            let l = math::floor(bound);
            // the approximated chain: c^-k (1 + alpha (c-1) L)^k <= alpha
            let approx = math::powi(c as f64, -(k as i32))
                * math::powi(1.0 + alpha * (c as f64 - 1.0) * l, k as i32);
            assert!(
                approx <= alpha * (1.0 + 1e-9),
                "c={c} k={k}: approx {approx} vs {alpha}"
            );
            // and so does the exact closed form at the integer bound
            let g = gap(c, k, l as u32, HypergraphCriterion::New, alpha);
            assert!(g <= 1e-9, "c={c} k={k}: gap {g}");
        }
    }
}
