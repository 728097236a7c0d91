#[path = "../../src/testutil.rs"]
mod testutil;

#[allow(unused_imports)]
pub use testutil::*;
