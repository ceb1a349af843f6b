pub mod genpair;
pub mod gf;
pub mod grouporder;
pub mod linalg;
