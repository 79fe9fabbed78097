pub mod automata;
pub mod constructions;
pub mod logic;
pub mod par;
pub mod semilinear;
pub mod structures;
pub mod verify;
