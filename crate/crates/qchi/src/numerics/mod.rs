//! Dense complex linear algebra, quantum states, and entropic functionals.

pub mod entropy;
pub mod gibbs;
pub mod matrix;
pub mod states;

pub use entropy::{
    mutual_information, relative_entropy, shannon_entropy, von_neumann_entropy,
    von_neumann_entropy_with,
};
pub use gibbs::{gibbs_state, GibbsResult};
pub use matrix::{hermitian_eigen, hermitize, kron, CMatrix, CVector, C64};
pub use states::{
    partial_trace, purify, BipartiteState, DensityMatrix, Hamiltonian, PureState, Subsystem,
};
