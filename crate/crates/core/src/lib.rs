pub mod cli;
pub mod cnf;
pub mod fold;
pub mod geom;
pub mod io;
pub mod perturb;
pub mod reduce;
pub mod serve;
pub mod solve;
pub mod verify;
