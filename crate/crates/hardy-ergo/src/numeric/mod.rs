pub mod ball;
pub mod dd;
