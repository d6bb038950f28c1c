//! Internal fault injection for the verification suites.
//!
//! Each formula path consults this hook at exactly one pinch point. Setting
//! `METACOMM_INTERNAL_FAULT` to a suite name perturbs that formula, and the
//! corresponding verification sweep must then exit nonzero; the CLI test
//! suite exercises this for every suite. Not part of the public contract.

#[doc(hidden)]
pub fn active(name: &str) -> bool {
    std::env::var("METACOMM_INTERNAL_FAULT").map_or(false, |v| v == name)
}
