//! Fractional integrals and derivatives, exact and approximate.
//!
//! The crate has two layers. The exact layer works on finite sums of real
//! powers of `t` ([`PowerSum`]). That class is closed under the
//! Riemann-Liouville integral `J^α` and under both fractional derivatives
//! (`D^α` and the Caputo `D_*^α`), with Gamma-function ratios as
//! coefficients. The numeric layer approximates the same operators on
//! uniformly sampled causal functions ([`SampledFunction`]) and is checked
//! against the exact layer.
//!
//! ```
//! use fracops::{rl_derivative, FracOrder, PowerSum};
//!
//! let half = FracOrder::new(0.5).unwrap();
//! let g: PowerSum = "t^0.5".parse().unwrap();
//! let d = rl_derivative(&g, half).unwrap();
//! assert!((d.evaluate(1.0).unwrap() - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exponent_law;
pub mod expr;
pub mod laplace;
pub mod liouville;
pub mod numeric;
mod quad;
pub mod special;
pub mod suites;
pub mod symbolic;
pub mod tol;

pub use error::{FracError, Result};
pub use expr::{parse, Expression};
pub use laplace::{numeric_laplace, rl_initial_values, rule_caputo, rule_j, rule_rl, transform, SPowerSum, TailBound};
pub use liouville::{
    causal_jump_identity_check, classify, liouville_derivative, liouville_integral, weyl_integral, FunctionClass,
    JumpCheck, LiouvilleTerm, WeylTerm,
};
pub use numeric::{
    caputo_derivative_numeric, convergence_order, oracle_quadrature, rl_derivative_numeric, rl_integral_numeric,
    ConvergenceCase, ConvergenceReport, InitialData, NumericOperator, SampledFunction,
};
pub use special::{beta, gamma, reciprocal_gamma};
pub use symbolic::{
    caputo_derivative, check_caputo_admissible, classical_derivative, decompose_rl_caputo, initial_derivatives,
    null_space_basis, rl_derivative, rl_integral, Decomposition, DerivativeKind, FracOrder, PowerSum, PowerTerm,
};
