pub mod cad;
pub mod cli;
pub mod combinatorics;
pub mod heuristics;
pub mod interval;
pub mod order;
pub mod poly;
pub mod projection;
pub mod roots;
