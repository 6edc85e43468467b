pub mod identities;
pub mod moments;
pub mod quadrature;
pub mod reduction;
pub mod report;
pub mod specfun;
