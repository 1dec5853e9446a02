// The guide chapters double as doc-tests: each module below pulls one
// markdown chapter in, so `cargo test --doc` runs every code snippet the
// book shows.

#[doc = include_str!("../../../book/src/quadrature.md")]
pub mod quadrature {}

#[doc = include_str!("../../../book/src/hypergeometric.md")]
pub mod hypergeometric {}

#[doc = include_str!("../../../book/src/curve_and_periods.md")]
pub mod curve_and_periods {}

#[doc = include_str!("../../../book/src/theta.md")]
pub mod theta {}

#[doc = include_str!("../../../book/src/schwarz_map.md")]
pub mod schwarz_map {}

#[doc = include_str!("../../../book/src/monodromy.md")]
pub mod monodromy {}
