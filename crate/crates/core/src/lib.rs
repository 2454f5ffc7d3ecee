pub mod acceptance;
pub mod config;
pub mod crossings;
pub mod error;
pub mod graph;
pub mod hyp;
pub mod intersection;
pub mod model;
pub mod par;
pub mod quad;
pub mod real;
pub mod render;
pub mod spectrum;
pub mod systems;
pub mod walk;
pub mod word;

pub use config::{Config, Precision, Tolerances};
pub use error::{Error, Result};
pub use real::{Hp, Real};
