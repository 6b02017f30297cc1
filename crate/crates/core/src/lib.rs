pub mod census;
pub mod cli;
pub mod dixon;
pub mod error;
pub mod families;
pub mod linalg;
pub mod mesh;
pub mod nodes;
pub mod pencil;
pub mod poly;
pub mod projection;
