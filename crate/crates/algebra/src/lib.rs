pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod pid;
pub mod rings;
pub mod splines;
