pub mod burgers;
pub mod damping;
pub mod error;
pub mod experiment;
pub mod euler;
pub mod functionals;
pub mod gas;
pub mod numerics;
pub mod verdict;
