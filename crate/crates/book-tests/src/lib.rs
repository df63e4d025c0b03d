//! Compiles the guide's code blocks as doc-tests so they stay in sync with
//! the library.

#[doc = include_str!("../../../book/src/index.md")]
pub mod index {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/monoid.md")]
pub mod monoid {}
#[doc = include_str!("../../../book/src/k0.md")]
pub mod k0 {}
#[doc = include_str!("../../../book/src/classify.md")]
pub mod classify {}
#[doc = include_str!("../../../book/src/talented.md")]
pub mod talented {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
