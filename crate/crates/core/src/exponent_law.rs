//! Sequential composition of fractional operators.
//!
//! Fractional derivatives obey neither `D^α D^β = D^(α+β)` nor
//! `D^α D^β = D^β D^α` in general. [`apply_word`] evaluates an operator word
//! strictly right to left with no rewriting, so both failures are visible on
//! power functions:
//!
//! ```
//! use fracops::exponent_law::{apply_word, OperatorWord};
//! use fracops::PowerSum;
//!
//! let f = PowerSum::monomial(1.0, -0.5);
//! let twice: OperatorWord = "D:0.5,D:0.5".parse().unwrap();
//! let once: OperatorWord = "D:1".parse().unwrap();
//! assert!(apply_word(&twice, &f).unwrap().output().is_zero());
//! assert!(!apply_word(&once, &f).unwrap().output().is_zero());
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{FracError, Result};
use crate::symbolic::{caputo_derivative, rl_derivative, rl_integral, FracOrder, PowerSum, PowerTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Riemann-Liouville integral.
    J,
    /// Riemann-Liouville derivative.
    D,
    /// Caputo derivative.
    Dc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub kind: StepKind,
    pub ord: FracOrder,
}

impl Step {
    pub fn new(kind: StepKind, alpha: f64) -> Result<Self> {
        Ok(Self {
            kind,
            ord: FracOrder::new(alpha)?,
        })
    }

    pub fn apply(&self, f: &PowerSum) -> Result<PowerSum> {
        match self.kind {
            StepKind::J => rl_integral(f, self.ord),
            StepKind::D => rl_derivative(f, self.ord),
            StepKind::Dc => caputo_derivative(f, self.ord),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            StepKind::J => "J",
            StepKind::D => "D",
            StepKind::Dc => "Dc",
        };
        write!(f, "{k}:{}", self.ord)
    }
}

/// A non-empty product of operators, written left to right and applied
/// rightmost first.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorWord {
    steps: Vec<Step>,
}

impl OperatorWord {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(FracError::Domain("operator word is empty".into()));
        }
        Ok(Self { steps })
    }

    pub fn single(kind: StepKind, alpha: f64) -> Result<Self> {
        Self::new(vec![Step::new(kind, alpha)?])
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for OperatorWord {
    type Err = FracError;

    /// Comma-separated `J:α`, `D:α` or `Dc:α`.
    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            let fail = |extra: usize, what: &str| FracError::Parse {
                offset: offset + extra,
                expected: what.to_string(),
            };
            let lead = part.len() - part.trim_start().len();
            let (kind, rest) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| fail(lead, "step of the form KIND:ORDER"))?;
            let kind = match kind.trim() {
                "J" => StepKind::J,
                "D" => StepKind::D,
                "Dc" => StepKind::Dc,
                _ => return Err(fail(lead, "'J', 'D' or 'Dc'")),
            };
            let at = lead + part.trim().find(':').unwrap_or(0) + 1;
            let alpha: f64 = rest.trim().parse().map_err(|_| fail(at, "non-negative order"))?;
            steps.push(Step::new(kind, alpha).map_err(|_| fail(at, "non-negative order"))?);
            offset += part.len() + 1;
        }
        Self::new(steps)
    }
}

/// The input and every intermediate result of a word application.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTrace {
    pub input: PowerSum,
    /// `intermediates[i]` is the result after `i + 1` steps, counted from the right.
    pub intermediates: Vec<PowerSum>,
}

impl WordTrace {
    pub fn output(&self) -> &PowerSum {
        self.intermediates.last().unwrap_or(&self.input)
    }
}

/// Applies `word` to `f` rightmost first. A failing step is reported as
/// [`FracError::AtStep`] with its position in the word as written (0 = leftmost).
pub fn apply_word(word: &OperatorWord, f: &PowerSum) -> Result<WordTrace> {
    let mut intermediates = Vec::with_capacity(word.steps.len());
    let mut current = f.clone();
    for (pos, step) in word.steps.iter().enumerate().rev() {
        current = step.apply(&current).map_err(|e| FracError::AtStep {
            step: pos,
            source: Box::new(e),
        })?;
        intermediates.push(current.clone());
    }
    Ok(WordTrace {
        input: f.clone(),
        intermediates,
    })
}

/// The three composition rules checked on `f = t^λ η(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionCase {
    /// μ >= 0, 0 <= ν <= μ: `D^ν J^μ f = J^(μ-ν) f`.
    IntegralFirst,
    /// μ >= 0, ν > μ: `D^ν J^μ f = D^(ν-μ) f`.
    DerivativeWins,
    /// 0 <= μ < λ+1, ν >= 0: `D^ν D^μ f = D^(μ+ν) f`.
    DerivativesAdd,
}

impl TryFrom<u8> for CompositionCase {
    type Error = FracError;
    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::IntegralFirst),
            2 => Ok(Self::DerivativeWins),
            3 => Ok(Self::DerivativesAdd),
            _ => Err(FracError::Domain(format!("no composition case {k}"))),
        }
    }
}

/// Builds `t^λ Σ η_n t^n` and compares both sides of the selected rule.
/// Returns `Err(Precondition)` when (λ, μ, ν) lies outside the hypothesis.
pub fn check_theorem3(lambda: f64, eta: &[f64], mu: f64, nu: f64, case: CompositionCase) -> Result<bool> {
    let outside = |why: &str| {
        Err(FracError::Precondition(format!(
            "(λ, μ, ν) = ({lambda}, {mu}, {nu}) {why}"
        )))
    };
    if !(lambda > -1.0) {
        return outside("needs λ > -1");
    }
    let ok = match case {
        CompositionCase::IntegralFirst => mu >= 0.0 && (0.0..=mu).contains(&nu),
        CompositionCase::DerivativeWins => mu >= 0.0 && nu > mu,
        CompositionCase::DerivativesAdd => (0.0..lambda + 1.0).contains(&mu) && nu >= 0.0,
    };
    if !ok {
        return outside("violates the case hypothesis");
    }
    let f = PowerSum::new(
        eta.iter()
            .enumerate()
            .map(|(n, &c)| PowerTerm::new(c, lambda + n as f64)),
    );
    let ord = FracOrder::new;
    let (lhs, rhs) = match case {
        CompositionCase::IntegralFirst => (
            rl_derivative(&rl_integral(&f, ord(mu)?)?, ord(nu)?)?,
            rl_integral(&f, ord(mu - nu)?)?,
        ),
        CompositionCase::DerivativeWins => (
            rl_derivative(&rl_integral(&f, ord(mu)?)?, ord(nu)?)?,
            rl_derivative(&f, ord(nu - mu)?)?,
        ),
        CompositionCase::DerivativesAdd => (
            rl_derivative(&rl_derivative(&f, ord(mu)?)?, ord(nu)?)?,
            rl_derivative(&f, ord(mu + nu)?)?,
        ),
    };
    Ok(lhs.approx_eq(&rhs))
}

/// Which of the three sequential problems `D^α D^β u = f`, `D^β D^α v = f`
/// or `D w = f` (α + β = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequentialKind {
    A { alpha: f64, beta: f64 },
    B { alpha: f64, beta: f64 },
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialProblem {
    pub kind: SequentialKind,
    pub rhs: PowerSum,
    pub constants: Vec<f64>,
}

impl SequentialProblem {
    pub fn new(kind: SequentialKind, rhs: PowerSum, constants: Vec<f64>) -> Result<Self> {
        if let SequentialKind::A { alpha, beta } | SequentialKind::B { alpha, beta } = kind {
            if !(alpha > 0.0 && beta > 0.0) || (alpha + beta - 1.0).abs() > 1e-12 {
                return Err(FracError::Domain(format!(
                    "sequential orders need α, β > 0 with α + β = 1, got ({alpha}, {beta})"
                )));
            }
        }
        let problem = Self { kind, rhs, constants };
        let want = problem.basis().len();
        if problem.constants.len() != want {
            return Err(FracError::Length {
                expected: want,
                got: problem.constants.len(),
            });
        }
        Ok(problem)
    }

    /// The operator word on the left-hand side.
    pub fn word(&self) -> OperatorWord {
        let d = |a: f64| Step {
            kind: StepKind::D,
            ord: FracOrder::new(a).expect("validated order"),
        };
        let steps = match self.kind {
            SequentialKind::A { alpha, beta } => vec![d(alpha), d(beta)],
            SequentialKind::B { alpha, beta } => vec![d(beta), d(alpha)],
            SequentialKind::C => vec![d(1.0)],
        };
        OperatorWord { steps }
    }

    /// The free terms that multiply the constants.
    pub fn basis(&self) -> Vec<PowerSum> {
        match self.kind {
            SequentialKind::A { beta, .. } => vec![PowerSum::constant(1.0), PowerSum::monomial(1.0, beta - 1.0)],
            SequentialKind::B { alpha, .. } => vec![PowerSum::constant(1.0), PowerSum::monomial(1.0, alpha - 1.0)],
            SequentialKind::C => vec![PowerSum::constant(1.0)],
        }
    }
}

/// `J f` plus the constants times the free terms.
pub fn solve_sequential(problem: &SequentialProblem) -> Result<PowerSum> {
    let mut u = rl_integral(&problem.rhs, FracOrder::new(1.0)?)?;
    for (c, b) in problem.constants.iter().zip(problem.basis()) {
        u = &u + &b.scale(*c);
    }
    Ok(u)
}

/// Applies the problem's word to `candidate` and subtracts the right-hand side.
pub fn verify_sequential(problem: &SequentialProblem, candidate: &PowerSum) -> Result<(PowerSum, bool)> {
    let lhs = apply_word(&problem.word(), candidate)?;
    let residual = lhs.output() - &problem.rhs;
    let ok = residual.is_zero() || residual.approx_eq(&PowerSum::zero());
    Ok((residual, ok))
}

/// Exponents γ in `grid` whose monomial `t^γ` the problem's word maps to 0.
/// Monomials outside the word's domain do not count.
pub fn annihilated_exponents(kind: SequentialKind, grid: &[f64]) -> Vec<f64> {
    let probe = SequentialProblem {
        kind,
        rhs: PowerSum::zero(),
        constants: Vec::new(),
    };
    let word = probe.word();
    grid.iter()
        .copied()
        .filter(|&g| {
            apply_word(&word, &PowerSum::monomial(1.0, g))
                .map(|tr| tr.output().is_zero())
                .unwrap_or(false)
        })
        .collect()
}

/// Exponents -1 < γ <= 3 on a 1/200 lattice, plus α-1 and β-1.
pub fn default_exponent_grid(kind: SequentialKind) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=800).map(|k| -1.0 + k as f64 / 200.0).collect();
    if let SequentialKind::A { alpha, beta } | SequentialKind::B { alpha, beta } = kind {
        grid.extend([alpha - 1.0, beta - 1.0]);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}
