pub mod algebra;
pub mod localization;
pub mod hypergeometric;
pub mod duality;
pub mod quiver;
pub mod determinantal;
pub mod cli;
