pub mod connection;
pub mod cosymplectic;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod fixture;
pub mod frame;
pub mod jet;
pub mod point;
pub mod report;
pub mod spec_file;
pub mod statistical;
pub mod structures;
pub mod table;
pub mod verify;
