//! Higher-order binary optimization toolkit: polynomial modelling, HOBO
//! tensor compilation, batched sampling, contraction-path planning and
//! tensor-train decomposition.

pub mod compile;
pub mod decomp;
pub mod encode;
pub mod expr;
pub mod parse;
pub mod path;
pub mod problems;
pub mod sampler;
pub mod tensor;

pub use compile::{compile, HoboTensor};
pub use expr::{Polynomial, Symbols};
pub use parse::{parse_problem, parse_term_list, ProblemSpec};
