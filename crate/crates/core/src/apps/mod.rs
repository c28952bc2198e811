//! Instance builders and bound calculators for the five applications:
//! bounded-occurrence k-SAT, hypergraph coloring, independent transversals,
//! second Hamiltonian cycles, and toy-scale Ramsey coloring.

pub mod hamiltonian;
pub mod hypergraph;
pub mod ramsey;
pub mod sat;
pub mod transversal;
