//! Exact tools for the Arnoux-Yoccoz family of translation surfaces and its
//! infinite-genus limit.

pub mod binseq;
pub mod builders;
pub mod iet;
pub mod numfield;
pub mod par;
pub mod surface;
pub mod veech;
