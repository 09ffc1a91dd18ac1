pub mod cli;
pub mod colouring;
pub mod cycles;
pub mod density;
pub mod experiments;
mod flow;
pub mod graph;
pub mod rational;
