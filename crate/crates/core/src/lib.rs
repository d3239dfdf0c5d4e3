pub mod atlas;
pub mod basis;
pub mod boxset;
pub mod corpus;
pub mod error;
pub mod format;
pub mod gbox;
pub mod generate;
pub mod interval;
pub mod map;
pub mod quotient;
pub mod rational;
pub mod render;
pub mod shrink;
pub mod validate;

pub use boxset::BoxSet;
pub use error::{Error, Result};
pub use gbox::GBox;
pub use interval::{Bound, Interval};
pub use rational::Rational;
