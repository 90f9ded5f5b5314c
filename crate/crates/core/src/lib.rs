//! Exact-arithmetic engine for finite games.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point and no tolerance anywhere. The crate covers:
//!
//! - `lotteries` — simple/compound lotteries, expected utility, normalization
//!   and utility construction from indifference probabilities
//! - `strategic` — strategic-form games: dominance, iterated deletion, pure
//!   and mixed Nash, best replies, second-price auction and pivotal mechanism
//! - `extensive` — history-based game trees with imperfect information and
//!   chance: validation, Kuhn conversion, induced strategic form, backward
//!   induction, subgames and subgame-perfect equilibrium, win/lose solving
//! - `epistemics` — knowledge and common knowledge, conditioning, common
//!   priors, agreement, belief revision from plausibility orders, models of
//!   games and common knowledge of rationality
//! - `refinements` — assessments, sequential rationality, weak sequential
//!   equilibrium, plausibility-order consistency, perfect Bayesian and
//!   sequential equilibrium via choice-measurable orders and uniform priors
//! - `incompleteinfo` — incomplete-information scenarios, the Harsanyi
//!   transformation, Bayesian Nash equilibrium and type spaces

pub mod epistemics;
pub mod extensive;
pub mod incompleteinfo;
pub mod linprog;
pub mod loglin;
pub mod lotteries;
pub mod num;
pub mod refinements;
pub mod strategic;

pub use num::{fmt_q, parse_q, Q};
