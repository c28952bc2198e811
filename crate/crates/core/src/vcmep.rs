//! Vertex-capacitated maximal edge packing: a sequential greedy oracle and
//! a simulated-parallel randomized-rounding algorithm.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::rng::{purpose, stream};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VcmepError {
    EmptyEdge { edge: usize },
    VertexOutOfRange { edge: usize, vertex: u32 },
    CapacityLengthMismatch { expected: usize, got: usize },
    BadEps { got_times_1000: i64 },
}

impl fmt::Display for VcmepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VcmepError::EmptyEdge { edge } => write!(f, "edge {edge} is empty"),
            VcmepError::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} uses out-of-range vertex {vertex}")
            }
            VcmepError::CapacityLengthMismatch { expected, got } => {
                write!(f, "{got} capacities for {expected} vertices")
            }
            VcmepError::BadEps { .. } => write!(f, "eps must lie in (0, 1/2]"),
        }
    }
}

impl core::error::Error for VcmepError {}

/// Hypergraph with per-vertex capacities in `0..=m`.
#[derive(Clone, Debug)]
pub struct CapacitatedHypergraph {
    pub vertices: usize,
    pub edges: Vec<Vec<u32>>,
    pub capacities: Vec<u32>,
}

impl CapacitatedHypergraph {
    pub fn new(
        vertices: usize,
        mut edges: Vec<Vec<u32>>,
        capacities: Vec<u32>,
    ) -> Result<Self, VcmepError> {
        if capacities.len() != vertices {
            return Err(VcmepError::CapacityLengthMismatch {
                expected: vertices,
                got: capacities.len(),
            });
        }
        for (i, edge) in edges.iter_mut().enumerate() {
            edge.sort_unstable();
            edge.dedup();
            if edge.is_empty() {
                return Err(VcmepError::EmptyEdge { edge: i });
            }
            if let Some(&v) = edge.iter().find(|&&v| v as usize >= vertices) {
                return Err(VcmepError::VertexOutOfRange { edge: i, vertex: v });
            }
        }
        Ok(CapacitatedHypergraph {
            vertices,
            edges,
            capacities,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Largest edge size (k).
    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(|e| e.len()).max().unwrap_or(0)
    }
}

/// A subset of edges with its per-vertex load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub selected: Vec<usize>,
    pub load: Vec<u32>,
}

impl Packing {
    fn empty(g: &CapacitatedHypergraph) -> Self {
        Packing {
            selected: Vec::new(),
            load: vec![0; g.vertices],
        }
    }

    fn add(&mut self, g: &CapacitatedHypergraph, edge: usize) {
        self.selected.push(edge);
        for &v in &g.edges[edge] {
            self.load[v as usize] += 1;
        }
    }

    fn fits(&self, g: &CapacitatedHypergraph, edge: usize) -> bool {
        g.edges[edge]
            .iter()
            .all(|&v| self.load[v as usize] < g.capacities[v as usize])
    }

    /// Every vertex load within its capacity.
    pub fn is_feasible(&self, g: &CapacitatedHypergraph) -> bool {
        self.load.iter().zip(&g.capacities).all(|(&l, &c)| l <= c)
    }

    /// No excluded edge is addable.
    pub fn is_maximal(&self, g: &CapacitatedHypergraph) -> bool {
        let chosen: Vec<bool> = {
            let mut b = vec![false; g.edge_count()];
            for &e in &self.selected {
                b[e] = true;
            }
            b
        };
        (0..g.edge_count()).all(|e| chosen[e] || !self.fits(g, e))
    }
}

/// Scan edges in the given order, adding each whose vertices all have
/// residual capacity; the result is maximal because loads only grow.
pub fn vcmep_greedy(g: &CapacitatedHypergraph, order: &[usize]) -> Packing {
    let mut packing = Packing::empty(g);
    for &e in order {
        if packing.fits(g, e) {
            packing.add(g, e);
        }
    }
    packing
}

/// Ascending edge ids.
pub fn natural_order(g: &CapacitatedHypergraph) -> Vec<usize> {
    (0..g.edge_count()).collect()
}

/// Largest packing size reachable by extending `base`; exhaustive, meant
/// for tiny instances only (the potential log below).
pub fn max_packing_size(g: &CapacitatedHypergraph, base: &Packing) -> usize {
    fn rec(
        g: &CapacitatedHypergraph,
        packing: &mut Packing,
        from: usize,
        chosen: &[bool],
    ) -> usize {
        let mut best = packing.selected.len();
        for e in from..g.edge_count() {
            if !chosen[e] && packing.fits(g, e) {
                packing.add(g, e);
                best = best.max(rec(g, packing, e + 1, chosen));
                packing.selected.pop();
                for &v in &g.edges[e] {
                    packing.load[v as usize] -= 1;
                }
            }
        }
        best
    }
    let mut chosen = vec![false; g.edge_count()];
    for &e in &base.selected {
        chosen[e] = true;
    }
    let mut work = base.clone();
    rec(g, &mut work, 0, &chosen)
}

/// Deterministic water-filling fractional packing over the active edges:
/// raise all unfrozen fractions uniformly, freezing edges at tight vertices
/// or at fraction 1.
fn water_filling(g: &CapacitatedHypergraph, active: &[usize], residual: &[u32]) -> Vec<f64> {
    let mut x = vec![0.0f64; active.len()];
    let mut frozen = vec![false; active.len()];
    let mut slack: Vec<f64> = residual.iter().map(|&c| c as f64).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertices];
    for (idx, &e) in active.iter().enumerate() {
        for &v in &g.edges[e] {
            incident[v as usize].push(idx);
        }
    }
    loop {
        let mut unfrozen_at: Vec<u32> = vec![0; g.vertices];
        let mut any = false;
        for (idx, &e) in active.iter().enumerate() {
            if frozen[idx] {
                continue;
            }
            any = true;
            for &v in &g.edges[e] {
                unfrozen_at[v as usize] += 1;
            }
        }
        if !any {
            break;
        }
        let mut delta = f64::INFINITY;
        for v in 0..g.vertices {
            if unfrozen_at[v] > 0 {
                delta = delta.min(slack[v] / unfrozen_at[v] as f64);
            }
        }
        for (idx, _) in active.iter().enumerate() {
            if !frozen[idx] {
                delta = delta.min(1.0 - x[idx]);
            }
        }
        if delta > 0.0 {
            for (idx, &e) in active.iter().enumerate() {
                if frozen[idx] {
                    continue;
                }
                x[idx] += delta;
                for &v in &g.edges[e] {
                    slack[v as usize] -= delta;
                }
            }
        }
        // freeze at tight vertices and at fraction 1
        for (idx, &e) in active.iter().enumerate() {
            if frozen[idx] {
                continue;
            }
            let tight =
                x[idx] >= 1.0 - 1e-12 || g.edges[e].iter().any(|&v| slack[v as usize] <= 1e-12);
            if tight {
                frozen[idx] = true;
            }
        }
    }
    x
}

/// One rounding round of the simulated-parallel packer.
#[derive(Clone, Debug)]
pub struct PackRound {
    pub round: usize,
    pub active_edges: usize,
    pub fractional_value: f64,
    pub selected: usize,
    pub committed: usize,
    /// Residual potential (max residual packing size), brute-forced on
    /// instances of at most 10 edges, None otherwise.
    pub potential: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PackResult {
    pub packing: Packing,
    pub rounds: Vec<PackRound>,
    pub terminated: bool,
}

/// Edges over which the brute-force potential is still logged.
const POTENTIAL_EDGE_LIMIT: usize = 10;

/// Simulated-parallel packing: per round, compute a fractional packing of
/// the residual, select each active edge with probability `x_f (1-eps) /
/// (2k)`, de-select every edge at a violated vertex, commit survivors.
/// Deterministic given `seed`.
pub fn vcmep_parallel_sim(
    g: &CapacitatedHypergraph,
    seed: u64,
    eps: f64,
    max_rounds: Option<usize>,
) -> Result<PackResult, VcmepError> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(VcmepError::BadEps {
            got_times_1000: (eps * 1000.0) as i64,
        });
    }
    let k = g.max_edge_size().max(1);
    let m = g.edge_count();
    let cap = max_rounds
        .unwrap_or_else(|| math::ceil(50.0 * k as f64 * math::ln(m as f64 + 2.0)) as usize + 1);

    let mut packing = Packing::empty(g);
    let mut committed = vec![false; m];
    let mut rounds = Vec::new();
    let mut terminated = false;

    for round in 0..cap {
        let residual: Vec<u32> = (0..g.vertices)
            .map(|v| g.capacities[v].saturating_sub(packing.load[v]))
            .collect();
        let active: Vec<usize> = (0..m)
            .filter(|&e| !committed[e] && g.edges[e].iter().all(|&v| residual[v as usize] >= 1))
            .collect();
        if active.is_empty() {
            terminated = true;
            let potential = (m <= POTENTIAL_EDGE_LIMIT)
                .then(|| (max_packing_size(g, &packing) - packing.selected.len()) as u64);
            rounds.push(PackRound {
                round,
                active_edges: 0,
                fractional_value: 0.0,
                selected: 0,
                committed: 0,
                potential,
            });
            break;
        }
        let x = water_filling(g, &active, &residual);
        let fractional_value: f64 = x.iter().sum();

        let scale = (1.0 - eps) / (2.0 * k as f64);
        let mut picked = vec![false; active.len()];
        for (idx, &e) in active.iter().enumerate() {
            let u = stream(seed, &[purpose::PACK, round as u64, e as u64]).next_f64();
            picked[idx] = u < x[idx] * scale;
        }
        let selected_count = picked.iter().filter(|&&p| p).count();

        // de-select every edge touching a violated vertex
        let mut picked_load = vec![0u32; g.vertices];
        for (idx, &e) in active.iter().enumerate() {
            if picked[idx] {
                for &v in &g.edges[e] {
                    picked_load[v as usize] += 1;
                }
            }
        }
        for (idx, &e) in active.iter().enumerate() {
            if picked[idx]
                && g.edges[e]
                    .iter()
                    .any(|&v| picked_load[v as usize] > residual[v as usize])
            {
                picked[idx] = false;
            }
        }

        let mut committed_count = 0;
        for (idx, &e) in active.iter().enumerate() {
            if picked[idx] {
                packing.add(g, e);
                committed[e] = true;
                committed_count += 1;
            }
        }
        let potential = (m <= POTENTIAL_EDGE_LIMIT)
            .then(|| (max_packing_size(g, &packing) - packing.selected.len()) as u64);
        rounds.push(PackRound {
            round,
            active_edges: active.len(),
            fractional_value,
            selected: selected_count,
            committed: committed_count,
            potential,
        });
    }
    if !terminated {
        // check whether the final state happens to be maximal anyway
        terminated = packing.is_maximal(g);
    }
    Ok(PackResult {
        packing,
        rounds,
        terminated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(cap: u32) -> CapacitatedHypergraph {
        CapacitatedHypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![cap; 3])
            .unwrap()
    }

    #[test]
    fn greedy_triangle_capacity_one() {
        let g = triangle(1);
        let p = vcmep_greedy(&g, &natural_order(&g));
        assert_eq!(p.selected, vec![0]);
        assert!(p.is_feasible(&g));
        assert!(p.is_maximal(&g));
    }

    #[test]
    fn greedy_triangle_capacity_two_takes_all() {
        let g = triangle(2);
        let p = vcmep_greedy(&g, &natural_order(&g));
        assert_eq!(p.selected, vec![0, 1, 2]);
        assert!(p.is_feasible(&g) && p.is_maximal(&g));
    }

    #[test]
    fn greedy_zero_capacity_empty_and_maximal() {
        let g = triangle(0);
        let p = vcmep_greedy(&g, &natural_order(&g));
        assert!(p.selected.is_empty());
        assert!(p.is_feasible(&g) && p.is_maximal(&g));
    }

    #[test]
    fn parallel_triangle_capacity_one() {
        let g = triangle(1);
        for seed in 0..40u64 {
            let res = vcmep_parallel_sim(&g, seed, 0.5, None).unwrap();
            assert!(res.terminated);
            assert_eq!(res.packing.selected.len(), 1);
            assert!(res.packing.is_feasible(&g) && res.packing.is_maximal(&g));
            assert_eq!(res.rounds.last().unwrap().potential, Some(0));
        }
    }

    #[test]
    fn parallel_single_edge() {
        let g = CapacitatedHypergraph::new(4, vec![vec![0, 1, 2]], vec![2; 4]).unwrap();
        let res = vcmep_parallel_sim(&g, 7, 0.25, None).unwrap();
        assert!(res.terminated);
        assert_eq!(res.packing.selected, vec![0]);
    }

    #[test]
    fn parallel_matches_seed() {
        let g = triangle(1);
        let a = vcmep_parallel_sim(&g, 123, 0.5, None).unwrap();
        let b = vcmep_parallel_sim(&g, 123, 0.5, None).unwrap();
        assert_eq!(a.packing, b.packing);
    }

    #[test]
    fn eps_validated() {
        let g = triangle(1);
        assert!(vcmep_parallel_sim(&g, 1, 0.0, None).is_err());
        assert!(vcmep_parallel_sim(&g, 1, 0.75, None).is_err());
    }

    #[test]
    fn empty_edge_rejected() {
        assert!(matches!(
            CapacitatedHypergraph::new(2, vec![vec![]], vec![1, 1]),
            Err(VcmepError::EmptyEdge { edge: 0 })
        ));
    }

    #[test]
    fn brute_force_on_triangle() {
        let g = triangle(1);
        assert_eq!(max_packing_size(&g, &Packing::empty(&g)), 1);
        let g = triangle(2);
        assert_eq!(max_packing_size(&g, &Packing::empty(&g)), 3);
    }
}
