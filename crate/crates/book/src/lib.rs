//! The chapters of `book/` as modules, so `cargo test -p solvir-book` runs
//! every `rust` block in them. `mdbook test` cannot link against `solvir`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/scalars.md")]
pub mod scalars {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}
#[doc = include_str!("../../../book/src/cocycles.md")]
pub mod cocycles {}
#[doc = include_str!("../../../book/src/density.md")]
pub mod density {}
#[doc = include_str!("../../../book/src/verma.md")]
pub mod verma {}
#[doc = include_str!("../../../book/src/gvm.md")]
pub mod gvm {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
