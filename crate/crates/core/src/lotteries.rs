//! Lotteries over outcome labels, expected utility and von Neumann-Morgenstern
//! utility construction. All probabilities and utilities are exact rationals.

use crate::num::{fmt_q, parse_q, q0, q1, sum, Q};
use num_traits::{One, Signed};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LotteryError {
    #[error("probabilities must be nonnegative and sum to 1 (sum = {0})")]
    BadDistribution(String),
    #[error("duplicate outcome label `{0}`")]
    DuplicateOutcome(String),
    #[error("outcome label `{0}` does not parse as a rational money amount")]
    NonNumericOutcome(String),
    #[error("no utility value for outcome `{0}`")]
    MissingUtility(String),
    #[error("utility not defined at the expected value {0}")]
    MissingUtilityAtExpectedValue(String),
    #[error("levels do not partition the outcome space (problem near `{0}`)")]
    BadRanking(String),
    #[error("utility function does not represent the ranking: {0}")]
    DoesNotRepresent(String),
    #[error("ranking has a single indifference level; normalization is undefined")]
    DegenerateRanking,
    #[error("utility function is constant; affine relation underdetermined")]
    ConstantUtility,
    #[error("continuity values violate monotonicity: {0}")]
    NonMonotone(String),
    #[error("continuity value missing for outcome `{0}`")]
    MissingContinuityValue(String),
}

/// A simple lottery: a probability distribution over outcome labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleLottery {
    outcomes: Vec<String>,
    probs: Vec<Q>,
}

impl SimpleLottery {
    pub fn new(outcomes: Vec<String>, probs: Vec<Q>) -> Result<Self, LotteryError> {
        assert_eq!(outcomes.len(), probs.len(), "outcome/probability mismatch");
        let mut seen = std::collections::BTreeSet::new();
        for o in &outcomes {
            if !seen.insert(o.clone()) {
                return Err(LotteryError::DuplicateOutcome(o.clone()));
            }
        }
        if probs.iter().any(|p| p.is_negative()) || !sum(&probs).is_one() {
            return Err(LotteryError::BadDistribution(fmt_q(&sum(&probs))));
        }
        Ok(SimpleLottery { outcomes, probs })
    }

    pub fn degenerate(outcome: &str) -> Self {
        SimpleLottery {
            outcomes: vec![outcome.to_string()],
            probs: vec![q1()],
        }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[Q] {
        &self.probs
    }

    pub fn prob_of(&self, outcome: &str) -> Q {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| self.probs[i].clone())
            .unwrap_or_else(q0)
    }

    /// Expected value of a money lottery (every label parses as a rational).
    pub fn expected_value(&self) -> Result<Q, LotteryError> {
        let mut acc = q0();
        for (o, p) in self.outcomes.iter().zip(&self.probs) {
            let x = parse_q(o).map_err(|_| LotteryError::NonNumericOutcome(o.clone()))?;
            acc += x * p;
        }
        Ok(acc)
    }

    /// Expected utility with respect to `u`.
    pub fn expected_utility(&self, u: &UtilityFunction) -> Result<Q, LotteryError> {
        let mut acc = q0();
        for (o, p) in self.outcomes.iter().zip(&self.probs) {
            let v = u
                .value(o)
                .ok_or_else(|| LotteryError::MissingUtility(o.clone()))?;
            acc += v * p;
        }
        Ok(acc)
    }
}

/// An entry of a compound lottery: either a bare outcome or a simple lottery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompoundItem {
    Outcome(String),
    Lottery(SimpleLottery),
}

/// A compound lottery (nesting depth exactly one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompoundLottery {
    entries: Vec<(CompoundItem, Q)>,
}

impl CompoundLottery {
    pub fn new(entries: Vec<(CompoundItem, Q)>) -> Result<Self, LotteryError> {
        let probs: Vec<Q> = entries.iter().map(|(_, p)| p.clone()).collect();
        if probs.iter().any(|p| p.is_negative()) || !sum(&probs).is_one() {
            return Err(LotteryError::BadDistribution(fmt_q(&sum(&probs))));
        }
        Ok(CompoundLottery { entries })
    }

    pub fn entries(&self) -> &[(CompoundItem, Q)] {
        &self.entries
    }

    /// The corresponding simple lottery: `q_i = sum_j p_j * o_i(x_j)`.
    ///
    /// Outcome order: first appearance across entries.
    pub fn reduce(&self) -> SimpleLottery {
        let mut order: Vec<String> = Vec::new();
        let mut acc: BTreeMap<String, Q> = BTreeMap::new();
        let mut add = |order: &mut Vec<String>, o: &str, p: Q| {
            if !acc.contains_key(o) {
                order.push(o.to_string());
            }
            *acc.entry(o.to_string()).or_insert_with(q0) += p;
        };
        for (item, p) in &self.entries {
            match item {
                CompoundItem::Outcome(o) => add(&mut order, o, p.clone()),
                CompoundItem::Lottery(l) => {
                    for (o, s) in l.outcomes.iter().zip(&l.probs) {
                        add(&mut order, o, p * s);
                    }
                }
            }
        }
        let probs = order.iter().map(|o| acc[o].clone()).collect();
        SimpleLottery::new(order, probs).expect("reduction preserves total mass")
    }
}

/// A utility function on outcome labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityFunction {
    values: BTreeMap<String, Q>,
}

impl UtilityFunction {
    pub fn new(values: impl IntoIterator<Item = (String, Q)>) -> Self {
        UtilityFunction {
            values: values.into_iter().collect(),
        }
    }

    pub fn value(&self, outcome: &str) -> Option<Q> {
        self.values.get(outcome).cloned()
    }

    pub fn values(&self) -> impl Iterator<Item = (&String, &Q)> {
        self.values.iter()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }

    /// Applies `o -> a*u(o) + b` pointwise.
    pub fn affine(&self, a: &Q, b: &Q) -> UtilityFunction {
        UtilityFunction {
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), a * v + b))
                .collect(),
        }
    }
}

/// An ordinal ranking given as ordered indifference levels, best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    levels: Vec<Vec<String>>,
}

impl Ranking {
    pub fn new(levels: Vec<Vec<String>>) -> Result<Self, LotteryError> {
        let mut seen = std::collections::BTreeSet::new();
        for level in &levels {
            if level.is_empty() {
                return Err(LotteryError::BadRanking("empty level".into()));
            }
            for o in level {
                if !seen.insert(o.clone()) {
                    return Err(LotteryError::BadRanking(o.clone()));
                }
            }
        }
        Ok(Ranking { levels })
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    pub fn level_of(&self, outcome: &str) -> Option<usize> {
        self.levels
            .iter()
            .position(|l| l.iter().any(|o| o == outcome))
    }

    fn check_represents(&self, u: &UtilityFunction) -> Result<Vec<Q>, LotteryError> {
        // one utility value per level, strictly decreasing
        let mut level_values = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            let v0 = u
                .value(&level[0])
                .ok_or_else(|| LotteryError::MissingUtility(level[0].clone()))?;
            for o in level {
                let v = u
                    .value(o)
                    .ok_or_else(|| LotteryError::MissingUtility(o.clone()))?;
                if v != v0 {
                    return Err(LotteryError::DoesNotRepresent(format!(
                        "`{}` and `{}` are ranked indifferent but have utilities {} and {}",
                        level[0],
                        o,
                        fmt_q(&v0),
                        fmt_q(&v)
                    )));
                }
            }
            level_values.push(v0);
        }
        for w in level_values.windows(2) {
            if w[0] <= w[1] {
                return Err(LotteryError::DoesNotRepresent(format!(
                    "level values {} and {} are not strictly decreasing",
                    fmt_q(&w[0]),
                    fmt_q(&w[1])
                )));
            }
        }
        Ok(level_values)
    }
}

/// Normalizes `u` (which must represent `r`) so the best outcomes map to 1
/// and the worst to 0.
pub fn normalize(u: &UtilityFunction, r: &Ranking) -> Result<UtilityFunction, LotteryError> {
    let level_values = r.check_represents(u)?;
    if level_values.len() < 2 {
        return Err(LotteryError::DegenerateRanking);
    }
    let best = level_values.first().unwrap().clone();
    let worst = level_values.last().unwrap().clone();
    let a = q1() / (&best - &worst);
    let b = -&worst * &a;
    Ok(u.affine(&a, &b))
}

/// Finds `(a, b)` with `a > 0` and `v = a*u + b` pointwise, if it exists.
pub fn affine_relation(
    u: &UtilityFunction,
    v: &UtilityFunction,
) -> Result<Option<(Q, Q)>, LotteryError> {
    let outcomes: Vec<&String> = u.outcomes().collect();
    let base = &outcomes[0];
    let u0 = u.value(base).unwrap();
    let Some(other) = outcomes.iter().find(|o| u.value(o).unwrap() != u0) else {
        return Err(LotteryError::ConstantUtility);
    };
    let u1 = u.value(other).unwrap();
    let v0 = v
        .value(base)
        .ok_or_else(|| LotteryError::MissingUtility((*base).clone()))?;
    let v1 = v
        .value(other)
        .ok_or_else(|| LotteryError::MissingUtility((*other).clone()))?;
    let a = (&v1 - &v0) / (&u1 - &u0);
    let b = &v0 - &a * &u0;
    if !a.is_positive() {
        return Ok(None);
    }
    for o in &outcomes {
        let rhs = &a * &u.value(o).unwrap() + &b;
        match v.value(o) {
            Some(vo) if vo == rhs => {}
            Some(_) => return Ok(None),
            None => return Err(LotteryError::MissingUtility((*o).clone())),
        }
    }
    Ok(Some((a, b)))
}

/// Builds the normalized utility function from continuity answers: for each
/// non-best, non-worst outcome, `p[o]` is the probability that makes the agent
/// indifferent between `o` and the best/worst binary lottery.
pub fn vnm_from_continuity(
    r: &Ranking,
    p: &BTreeMap<String, Q>,
) -> Result<UtilityFunction, LotteryError> {
    let levels = r.levels();
    if levels.len() < 2 {
        return Err(LotteryError::DegenerateRanking);
    }
    let mut level_values: Vec<Q> = Vec::with_capacity(levels.len());
    for (i, level) in levels.iter().enumerate() {
        if i == 0 {
            level_values.push(q1());
        } else if i == levels.len() - 1 {
            level_values.push(q0());
        } else {
            let v0 = p
                .get(&level[0])
                .ok_or_else(|| LotteryError::MissingContinuityValue(level[0].clone()))?
                .clone();
            for o in level {
                let v = p
                    .get(o)
                    .ok_or_else(|| LotteryError::MissingContinuityValue(o.clone()))?;
                if *v != v0 {
                    return Err(LotteryError::NonMonotone(format!(
                        "`{}` and `{}` are indifferent but have values {} and {}",
                        level[0],
                        o,
                        fmt_q(&v0),
                        fmt_q(v)
                    )));
                }
            }
            if v0 >= q1() || v0 <= q0() {
                return Err(LotteryError::NonMonotone(format!(
                    "value {} for `{}` is not strictly between 0 and 1",
                    fmt_q(&v0),
                    level[0]
                )));
            }
            level_values.push(v0);
        }
    }
    for w in level_values.windows(2) {
        if w[0] <= w[1] {
            return Err(LotteryError::NonMonotone(format!(
                "values {} and {} not strictly decreasing across levels",
                fmt_q(&w[0]),
                fmt_q(&w[1])
            )));
        }
    }
    let mut values = BTreeMap::new();
    for (level, v) in levels.iter().zip(&level_values) {
        for o in level {
            values.insert(o.clone(), v.clone());
        }
    }
    Ok(UtilityFunction { values })
}

/// Attitude to risk of an agent with money utility `u` facing lottery `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiskAttitude {
    Averse,
    Neutral,
    Loving,
}

/// Compares `EU(l)` with `u(E[l])`; `u` must be tabled at `E[l]` and at every
/// outcome of `l`. Money amounts are compared as exact rationals, so the table
/// key for `E[l]` must be the canonical rendering of that rational.
pub fn risk_attitude(u: &UtilityFunction, l: &SimpleLottery) -> Result<RiskAttitude, LotteryError> {
    let ev = l.expected_value()?;
    let eu = l.expected_utility(u)?;
    let u_at_ev = u
        .values
        .iter()
        .find(|(k, _)| parse_q(k).map(|x| x == ev).unwrap_or(false))
        .map(|(_, v)| v.clone())
        .ok_or_else(|| LotteryError::MissingUtilityAtExpectedValue(fmt_q(&ev)))?;
    Ok(match eu.cmp(&u_at_ev) {
        std::cmp::Ordering::Less => RiskAttitude::Averse,
        std::cmp::Ordering::Equal => RiskAttitude::Neutral,
        std::cmp::Ordering::Greater => RiskAttitude::Loving,
    })
}
