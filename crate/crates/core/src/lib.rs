pub mod catalog;
pub mod cli;
pub mod contract;
pub mod diagram;
pub mod gluing;
pub mod hypergraph;
pub mod perm;
pub mod replacement;
pub mod selfsim;
pub mod shiftlang;
