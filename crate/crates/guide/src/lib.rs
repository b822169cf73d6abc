// The book chapters are Markdown files under `book/src`. Including each one
// as a module's documentation lets `cargo test --doc` run every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/damping.md")]
pub mod damping {}
#[doc = include_str!("../../../book/src/burgers.md")]
pub mod burgers {}
#[doc = include_str!("../../../book/src/radial.md")]
pub mod radial {}
#[doc = include_str!("../../../book/src/functionals.md")]
pub mod functionals {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
