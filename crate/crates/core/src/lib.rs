pub mod algebra;
pub mod codec;
pub mod fock;
pub mod measure;
pub mod observables;
pub mod quad;
pub mod specfun;
pub mod states;
