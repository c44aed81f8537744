//! Code listings from the guide in `book/`, compiled and run as doc-tests so the
//! chapters cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/gamma.md")]
pub mod gamma {}

#[doc = include_str!("../../../book/src/power-sums.md")]
pub mod power_sums {}

#[doc = include_str!("../../../book/src/riemann-liouville.md")]
pub mod riemann_liouville {}

#[doc = include_str!("../../../book/src/caputo.md")]
pub mod caputo {}

#[doc = include_str!("../../../book/src/numerics.md")]
pub mod numerics {}

#[doc = include_str!("../../../book/src/laplace.md")]
pub mod laplace {}

#[doc = include_str!("../../../book/src/liouville-weyl.md")]
pub mod liouville_weyl {}

#[doc = include_str!("../../../book/src/exponent-law.md")]
pub mod exponent_law {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
