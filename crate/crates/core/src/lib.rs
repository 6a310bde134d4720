pub mod bench;
pub mod bt;
pub mod domain;
pub mod feedback;
pub mod fixtures;
pub mod household;
pub mod oracle;
pub mod planner;
pub mod provider;
pub mod synth;
