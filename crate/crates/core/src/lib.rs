pub mod caseproof;
pub mod grids;
pub mod nullstellensatz;
pub mod oracle;
pub mod permgroup;
pub mod polyring;
pub mod solver;
