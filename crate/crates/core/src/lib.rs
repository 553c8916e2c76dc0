pub mod cliques;
pub mod events;
pub mod format;
pub mod graph;
pub mod monogamy;
pub mod packing;
pub mod rational;
pub mod scenarios;
pub mod theta;
