//! Independent transversals of partitioned graphs: one variable per class,
//! one bad-event per cross-class edge.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::model::{Assignment, Instance, VariableSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransversalError {
    UnequalClassSizes {
        class: usize,
        size: usize,
        expected: usize,
    },
    OverlappingClasses {
        vertex: u32,
    },
    UnpartitionedVertex {
        vertex: u32,
    },
    VertexOutOfRange {
        vertex: u32,
    },
    Invalid(String),
}

impl fmt::Display for TransversalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransversalError::UnequalClassSizes {
                class,
                size,
                expected,
            } => {
                write!(f, "class {class} has {size} vertices, expected {expected}")
            }
            TransversalError::OverlappingClasses { vertex } => {
                write!(f, "vertex {vertex} appears in two classes")
            }
            TransversalError::UnpartitionedVertex { vertex } => {
                write!(f, "vertex {vertex} belongs to no class")
            }
            TransversalError::VertexOutOfRange { vertex } => {
                write!(f, "vertex {vertex} out of range")
            }
            TransversalError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for TransversalError {}

/// Smallest class size the criterion certifies for max degree `delta`.
pub fn transversal_threshold(delta: u32) -> u32 {
    4 * delta - 1
}

/// A weight satisfying `alpha >= b^{-2} (alpha + (1 + (b-1) delta alpha)^2)`,
/// solved in closed form: the criterion is the quadratic
/// `beta^2 alpha^2 + (1 + 2 beta - b^2) alpha + 1 <= 0` with
/// `beta = (b-1) delta`, feasible exactly when `b >= 4 delta - 1`.
pub fn transversal_alpha(b: u32, delta: u32) -> Option<f64> {
    if b < 2 || delta == 0 {
        return None;
    }
    let beta = (b as f64 - 1.0) * delta as f64;
    let a2 = beta * beta;
    let a1 = 1.0 + 2.0 * beta - (b as f64) * (b as f64);
    let disc = a1 * a1 - 4.0 * a2;
    if disc < 0.0 || a1 >= 0.0 {
        return None;
    }
    let root = (-a1 - math::sqrt(disc)) / (2.0 * a2);
    (root >= 0.0).then_some(root)
}

#[derive(Clone, Debug)]
pub struct TransversalConfig {
    pub classes: usize,
    pub class_size: u32,
    pub max_degree: u32,
    /// Weight certifying the displayed criterion at (class_size, degree).
    pub alpha: Option<f64>,
    /// Intra-class edges removed: a transversal picks one vertex per class,
    /// so their bad-events can never hold.
    pub dropped_intra_class: usize,
}

/// Variables are the classes, uniform over their `b` vertices; each
/// cross-class edge becomes the bad-event that both endpoints are chosen.
pub fn transversal_build(
    n_vertices: usize,
    edges: &[(u32, u32)],
    partition: &[Vec<u32>],
) -> Result<(Instance, TransversalConfig), TransversalError> {
    if partition.is_empty() {
        return Err(TransversalError::Invalid("empty partition".into()));
    }
    let b = partition[0].len();
    if b == 0 {
        return Err(TransversalError::Invalid("empty class".into()));
    }
    let mut class_of = alloc::vec![usize::MAX; n_vertices];
    let mut index_in_class = alloc::vec![0u32; n_vertices];
    for (ci, class) in partition.iter().enumerate() {
        if class.len() != b {
            return Err(TransversalError::UnequalClassSizes {
                class: ci,
                size: class.len(),
                expected: b,
            });
        }
        for (vi, &v) in class.iter().enumerate() {
            if v as usize >= n_vertices {
                return Err(TransversalError::VertexOutOfRange { vertex: v });
            }
            if class_of[v as usize] != usize::MAX {
                return Err(TransversalError::OverlappingClasses { vertex: v });
            }
            class_of[v as usize] = ci;
            index_in_class[v as usize] = vi as u32;
        }
    }
    let mut degree = alloc::vec![0u32; n_vertices];
    let mut events = Vec::new();
    let mut dropped = 0usize;
    for &(u, v) in edges {
        for w in [u, v] {
            if w as usize >= n_vertices {
                return Err(TransversalError::VertexOutOfRange { vertex: w });
            }
            if class_of[w as usize] == usize::MAX {
                return Err(TransversalError::UnpartitionedVertex { vertex: w });
            }
            degree[w as usize] += 1;
        }
        let (cu, cv) = (class_of[u as usize], class_of[v as usize]);
        if cu == cv {
            dropped += 1;
            continue;
        }
        events.push(alloc::vec![
            (cu as u32, index_in_class[u as usize]),
            (cv as u32, index_in_class[v as usize]),
        ]);
    }
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let space = VariableSpace::uniform(partition.len(), b);
    let instance = Instance::build(space, events)
        .map_err(|e| TransversalError::Invalid(format!("instance rejected: {e}")))?;
    let alpha = transversal_alpha(b as u32, max_degree.max(1));
    Ok((
        instance,
        TransversalConfig {
            classes: partition.len(),
            class_size: b as u32,
            max_degree,
            alpha,
            dropped_intra_class: dropped,
        },
    ))
}

/// The chosen vertex per class under an assignment.
pub fn extract_transversal(a: &Assignment, partition: &[Vec<u32>]) -> Vec<u32> {
    partition
        .iter()
        .enumerate()
        .map(|(ci, class)| class[a.get(ci) as usize])
        .collect()
}

/// No edge has both endpoints chosen.
pub fn is_independent_transversal(chosen: &[u32], edges: &[(u32, u32)]) -> bool {
    edges
        .iter()
        .all(|&(u, v)| !(chosen.contains(&u) && chosen.contains(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn threshold_and_alpha() {
        assert_eq!(transversal_threshold(2), 7);
        // b = 7, delta = 2: tangent solution alpha = 1/12
        let alpha = transversal_alpha(7, 2).unwrap();
        assert!((alpha - 1.0 / 12.0).abs() < 1e-9);
        // b = 6, delta = 2: below the boundary, no alpha
        assert!(transversal_alpha(6, 2).is_none());
        // well inside: alpha exists and satisfies the inequality strictly
        let alpha = transversal_alpha(9, 2).unwrap();
        let beta = 8.0 * 2.0;
        let rhs = (alpha + (1.0 + beta * alpha) * (1.0 + beta * alpha)) / 81.0;
        assert!(alpha >= rhs - 1e-12);
    }

    #[test]
    fn build_drops_intra_class_edges() {
        // classes {0,1}, {2,3}; one cross edge, one intra edge
        let (inst, cfg) =
            transversal_build(4, &[(0, 2), (2, 3)], &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(inst.event_count(), 1);
        assert_eq!(cfg.dropped_intra_class, 1);
        assert!((inst.event_prob(0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unequal_classes_rejected() {
        let err = transversal_build(3, &[], &[vec![0, 1], vec![2]]).unwrap_err();
        assert!(matches!(
            err,
            TransversalError::UnequalClassSizes { class: 1, .. }
        ));
    }

    #[test]
    fn extract_and_verify() {
        let partition = vec![vec![0, 1], vec![2, 3]];
        let a = Assignment::new(vec![1, 0]);
        let chosen = extract_transversal(&a, &partition);
        assert_eq!(chosen, vec![1, 2]);
        assert!(is_independent_transversal(&chosen, &[(0, 2), (1, 3)]));
        assert!(!is_independent_transversal(&chosen, &[(1, 2)]));
    }
}
