pub mod cabling;
pub mod filtration;
pub mod knotdb;
pub mod laurent;
pub mod obstructions;
pub mod surgery;
pub mod verify;
