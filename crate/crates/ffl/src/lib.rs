pub mod cli;
pub mod par;
pub mod table;
pub mod text;
