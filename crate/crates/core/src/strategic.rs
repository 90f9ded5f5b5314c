//! Finite strategic-form games with exact rational payoffs: dominance
//! relations, iterated deletion, pure and mixed Nash equilibria, best replies,
//! Pareto comparisons and the two dominant-strategy mechanisms.

use crate::linprog::{lexicographic_max, solve_lp, Constraint, Lp, LpOutcome, Rel};
use crate::num::{fmt_q, q0, q1, sum, Q};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("unknown player index {0}")]
    UnknownPlayer(usize),
    #[error("unknown strategy `{0}` for player {1}")]
    UnknownStrategy(String, usize),
    #[error("payoff table is not total: missing profile {0:?}")]
    MissingProfile(Vec<String>),
    #[error("probabilities in a mixed strategy must be nonnegative and sum to 1")]
    BadMixture,
    #[error("bid grid must be nonempty")]
    EmptyGrid,
    #[error("length mismatch between cost shares and reports")]
    LengthMismatch,
    #[error("truth {0} is not on the report grid of player {1}")]
    TruthNotOnGrid(String, usize),
    #[error("game must have exactly two players, found {0}")]
    NotTwoPlayer(usize),
}

/// A finite strategic-form game. Payoffs are stored as a flat table in
/// mixed-radix profile order (player 0 slowest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategicGame {
    players: Vec<String>,
    strategies: Vec<Vec<String>>,
    payoffs: Vec<Vec<Q>>, // indexed by profile index; inner = per player
}

impl StrategicGame {
    pub fn new(
        players: Vec<String>,
        strategies: Vec<Vec<String>>,
        mut table: BTreeMap<Vec<String>, Vec<Q>>,
    ) -> Result<Self, GameError> {
        assert_eq!(players.len(), strategies.len());
        let mut payoffs = Vec::new();
        for profile in strategies.iter().map(|s| s.iter()).multi_cartesian_product() {
            let key: Vec<String> = profile.iter().map(|s| s.to_string()).collect();
            match table.remove(&key) {
                Some(v) => {
                    assert_eq!(v.len(), players.len(), "payoff vector arity");
                    payoffs.push(v);
                }
                None => return Err(GameError::MissingProfile(key)),
            }
        }
        Ok(StrategicGame {
            players,
            strategies,
            payoffs,
        })
    }

    /// Convenience constructor for a two-player game from nested payoff pairs:
    /// `table[r][c] = (payoff of row player, payoff of column player)`.
    pub fn two_player(
        rows: Vec<String>,
        cols: Vec<String>,
        table: Vec<Vec<(Q, Q)>>,
    ) -> StrategicGame {
        let mut map = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, col) in cols.iter().enumerate() {
                let (a, b) = table[r][c].clone();
                map.insert(vec![row.clone(), col.clone()], vec![a, b]);
            }
        }
        StrategicGame::new(
            vec!["1".into(), "2".into()],
            vec![rows, cols],
            map,
        )
        .expect("total table")
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn strategies(&self, player: usize) -> &[String] {
        &self.strategies[player]
    }

    pub fn strategy_index(&self, player: usize, label: &str) -> Result<usize, GameError> {
        self.strategies
            .get(player)
            .ok_or(GameError::UnknownPlayer(player))?
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| GameError::UnknownStrategy(label.to_string(), player))
    }

    fn profile_index(&self, profile: &[usize]) -> usize {
        let mut idx = 0;
        for (p, &s) in profile.iter().enumerate() {
            idx = idx * self.strategies[p].len() + s;
        }
        idx
    }

    /// Payoff vector at a pure profile (indices per player).
    pub fn payoff(&self, profile: &[usize]) -> &[Q] {
        &self.payoffs[self.profile_index(profile)]
    }

    pub fn payoff_of(&self, profile: &[usize], player: usize) -> &Q {
        &self.payoffs[self.profile_index(profile)][player]
    }

    /// Iterates over all pure profiles as index vectors.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.strategies
            .iter()
            .map(|s| 0..s.len())
            .multi_cartesian_product()
    }

    pub fn profile_labels(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(p, &s)| self.strategies[p][s].clone())
            .collect()
    }

    /// Sub-profiles of the players other than `player`, restricted to the
    /// given survivor sets.
    fn opponent_profiles<'a>(
        &'a self,
        player: usize,
        restriction: &'a [Vec<usize>],
    ) -> impl Iterator<Item = Vec<usize>> + 'a {
        restriction
            .iter()
            .enumerate()
            .map(move |(p, set)| {
                if p == player {
                    vec![usize::MAX]
                } else {
                    set.clone()
                }
            })
            .multi_cartesian_product()
    }

    fn full_restriction(&self) -> Vec<Vec<usize>> {
        self.strategies
            .iter()
            .map(|s| (0..s.len()).collect())
            .collect()
    }

    /// Expected payoff to `player` of pure strategy `s` against independent
    /// opponent mixtures.
    fn payoff_vs_mixtures(&self, player: usize, s: usize, opponents: &[MixedStrategy]) -> Q {
        let mut total = q0();
        let sets: Vec<Vec<usize>> = self
            .strategies
            .iter()
            .enumerate()
            .map(|(p, strat)| {
                if p == player {
                    vec![s]
                } else {
                    (0..strat.len()).collect()
                }
            })
            .collect();
        for profile in sets.iter().map(|v| v.iter().copied()).multi_cartesian_product() {
            let mut prob = q1();
            for (p, &sp) in profile.iter().enumerate() {
                if p != player {
                    let mx = opponents
                        .iter()
                        .find(|m| m.player == p)
                        .expect("mixture for every opponent");
                    prob *= mx.prob(sp);
                    if prob.is_zero() {
                        break;
                    }
                }
            }
            if !prob.is_zero() {
                total += prob * self.payoff_of(&profile, player);
            }
        }
        total
    }
}

/// A mixed strategy of one player (probabilities over strategy indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedStrategy {
    pub player: usize,
    pub probs: Vec<Q>, // indexed by strategy index; full length
}

impl MixedStrategy {
    pub fn new(game: &StrategicGame, player: usize, probs: Vec<Q>) -> Result<Self, GameError> {
        if probs.len() != game.strategies(player).len()
            || probs.iter().any(|p| p.is_negative())
            || !sum(&probs).is_one()
        {
            return Err(GameError::BadMixture);
        }
        Ok(MixedStrategy { player, probs })
    }

    pub fn pure(game: &StrategicGame, player: usize, s: usize) -> Self {
        let mut probs = vec![q0(); game.strategies(player).len()];
        probs[s] = q1();
        MixedStrategy { player, probs }
    }

    fn prob(&self, s: usize) -> Q {
        self.probs[s].clone()
    }

    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn describe(&self, game: &StrategicGame) -> String {
        let parts: Vec<String> = self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, p)| format!("{}@{}", game.strategies(self.player)[i], fmt_q(p)))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Classification of the dominance relation between two strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Strict,
    /// Weak but not strict.
    Weak,
    Equivalent,
    None,
}

/// Classifies how strategy `a` relates to strategy `b` for `player`.
pub fn dominance(
    game: &StrategicGame,
    player: usize,
    a: &str,
    b: &str,
) -> Result<Dominance, GameError> {
    let ia = game.strategy_index(player, a)?;
    let ib = game.strategy_index(player, b)?;
    Ok(dominance_idx(
        game,
        player,
        ia,
        ib,
        &game.full_restriction(),
    ))
}

fn dominance_idx(
    game: &StrategicGame,
    player: usize,
    a: usize,
    b: usize,
    restriction: &[Vec<usize>],
) -> Dominance {
    let mut all_ge = true;
    let mut all_eq = true;
    let mut some_gt = false;
    for mut opp in game.opponent_profiles(player, restriction) {
        opp[player] = a;
        let pa = game.payoff_of(&opp, player).clone();
        opp[player] = b;
        let pb = game.payoff_of(&opp, player).clone();
        match pa.cmp(&pb) {
            std::cmp::Ordering::Greater => {
                some_gt = true;
                all_eq = false;
            }
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Less => {
                all_ge = false;
                all_eq = false;
            }
        }
    }
    if all_eq {
        Dominance::Equivalent
    } else if all_ge && some_gt {
        let strict = {
            let mut strict = true;
            for mut opp in game.opponent_profiles(player, restriction) {
                opp[player] = a;
                let pa = game.payoff_of(&opp, player).clone();
                opp[player] = b;
                let pb = game.payoff_of(&opp, player).clone();
                if pa <= pb {
                    strict = false;
                    break;
                }
            }
            strict
        };
        if strict {
            Dominance::Strict
        } else {
            Dominance::Weak
        }
    } else {
        Dominance::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceMode {
    Strict,
    Weak,
}

/// Strategies of `player` that are dominant in the requested sense. In weak
/// mode a strategy qualifies when, against every other strategy, it either
/// weakly dominates it or is equivalent to it (and it is not strictly
/// dominant).
pub fn dominant_strategies(
    game: &StrategicGame,
    player: usize,
    mode: DominanceMode,
) -> Vec<String> {
    let n = game.strategies(player).len();
    let restriction = game.full_restriction();
    let mut out = Vec::new();
    for a in 0..n {
        let mut strict_all = true;
        let mut weak_all = true;
        for b in 0..n {
            if a == b {
                continue;
            }
            match dominance_idx(game, player, a, b, &restriction) {
                Dominance::Strict => {}
                Dominance::Weak | Dominance::Equivalent => strict_all = false,
                Dominance::None => {
                    strict_all = false;
                    weak_all = false;
                }
            }
        }
        let qualifies = match mode {
            DominanceMode::Strict => strict_all && n > 1 || n == 1,
            DominanceMode::Weak => weak_all,
        };
        if qualifies {
            out.push(game.strategies(player)[a].clone());
        }
    }
    out
}

/// A dominant-strategy equilibrium, when one exists.
pub fn dominant_equilibrium(game: &StrategicGame) -> Option<(Vec<String>, DominanceMode)> {
    let mut profile = Vec::new();
    let mut strict = true;
    for p in 0..game.num_players() {
        let strict_set = dominant_strategies(game, p, DominanceMode::Strict);
        if let Some(s) = strict_set.first() {
            profile.push(s.clone());
            continue;
        }
        let weak_set = dominant_strategies(game, p, DominanceMode::Weak);
        match weak_set.first() {
            Some(s) => {
                profile.push(s.clone());
                strict = false;
            }
            None => return None,
        }
    }
    Some((
        profile,
        if strict {
            DominanceMode::Strict
        } else {
            DominanceMode::Weak
        },
    ))
}

/// Deletion regime for iterated elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeletionMode {
    /// Delete all pure strategies strictly dominated by a pure strategy,
    /// every player, every round.
    StrictPure,
    /// Delete all weakly-or-strictly dominated strategies of all players
    /// simultaneously each round.
    WeakSimultaneous,
    /// Delete pure strategies strictly dominated by a mixed strategy.
    StrictMixed,
}

/// What eliminated a strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dominator {
    Pure(String),
    Mixed(Vec<(String, Q)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionStep {
    pub round: usize,
    pub player: usize,
    pub deleted: String,
    pub by: Dominator,
}

/// Record of an iterated-deletion run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub rounds: Vec<DeletionStep>,
    /// Per-player surviving strategy labels.
    pub survivors: Vec<Vec<String>>,
}

/// Runs iterated deletion to its fixed point.
pub fn iterated_deletion(game: &StrategicGame, mode: DeletionMode) -> EliminationTrace {
    let mut surviving: Vec<Vec<usize>> = game.full_restriction();
    let mut rounds = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut marked: Vec<(usize, usize, Dominator)> = Vec::new();
        for p in 0..game.num_players() {
            if surviving[p].len() <= 1 {
                continue;
            }
            for &cand in &surviving[p] {
                let dominator = match mode {
                    DeletionMode::StrictPure | DeletionMode::WeakSimultaneous => surviving[p]
                        .iter()
                        .filter(|&&o| o != cand)
                        .find_map(|&o| {
                            let d = dominance_idx(game, p, o, cand, &surviving);
                            let hit = match mode {
                                DeletionMode::StrictPure => d == Dominance::Strict,
                                _ => matches!(d, Dominance::Strict | Dominance::Weak),
                            };
                            hit.then(|| Dominator::Pure(game.strategies(p)[o].clone()))
                        }),
                    DeletionMode::StrictMixed => {
                        dominating_mixture(game, p, cand, &surviving).map(|mx| {
                            Dominator::Mixed(
                                mx.probs
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, pr)| pr.is_positive())
                                    .map(|(i, pr)| (game.strategies(p)[i].clone(), pr.clone()))
                                    .collect(),
                            )
                        })
                    }
                };
                if let Some(by) = dominator {
                    marked.push((p, cand, by));
                }
            }
        }
        if marked.is_empty() {
            break;
        }
        for (p, s, by) in marked {
            surviving[p].retain(|&x| x != s);
            rounds.push(DeletionStep {
                round,
                player: p,
                deleted: game.strategies(p)[s].clone(),
                by,
            });
        }
    }
    let survivors = surviving
        .iter()
        .enumerate()
        .map(|(p, set)| {
            set.iter()
                .map(|&s| game.strategies(p)[s].clone())
                .collect()
        })
        .collect();
    EliminationTrace { rounds, survivors }
}

/// A mixed strategy of `player` over `restriction[player]` that strictly
/// dominates `s` against every opponent profile in the restricted product,
/// found by maximizing the minimum advantage; `None` when no such mixture
/// exists.
fn dominating_mixture(
    game: &StrategicGame,
    player: usize,
    s: usize,
    restriction: &[Vec<usize>],
) -> Option<MixedStrategy> {
    let own = &restriction[player];
    // variables: sigma over `own` plus the margin epsilon (last)
    let nv = own.len() + 1;
    let mut constraints = Vec::new();
    for mut opp in game.opponent_profiles(player, restriction) {
        let mut coeffs = vec![q0(); nv];
        for (k, &cand) in own.iter().enumerate() {
            opp[player] = cand;
            coeffs[k] = game.payoff_of(&opp, player).clone();
        }
        opp[player] = s;
        let base = game.payoff_of(&opp, player).clone();
        coeffs[nv - 1] = -q1(); // sigma . payoff - eps >= base
        constraints.push(Constraint::new(coeffs, Rel::Ge, base));
    }
    let mut ones = vec![q1(); nv];
    ones[nv - 1] = q0();
    constraints.push(Constraint::new(ones, Rel::Eq, q1()));
    // bound epsilon so the LP is bounded
    let mut eps_bound = vec![q0(); nv];
    eps_bound[nv - 1] = q1();
    constraints.push(Constraint::new(eps_bound.clone(), Rel::Le, Q::from_integer(1_000_000.into())));
    let mut objective = vec![q0(); nv];
    objective[nv - 1] = q1();
    let lp = Lp {
        num_vars: nv,
        objective,
        constraints,
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let mut probs = vec![q0(); game.strategies(player).len()];
            for (k, &cand) in own.iter().enumerate() {
                probs[cand] = x[k].clone();
            }
            Some(MixedStrategy { player, probs })
        }
        _ => None,
    }
}

/// Certificate that `s` can be rational: either a strictly dominating mixture
/// (so `s` is never a best response) or a belief over the opponents'
/// restricted product (correlation allowed) that makes `s` a best response.
#[derive(Clone, Debug)]
pub enum RationalityCertificate {
    DominatingMixture(MixedStrategy),
    SupportingBelief(Vec<(Vec<String>, Q)>),
}

/// Returns the dominating mixture if one exists; otherwise a supporting
/// belief certifying that `s_i` is a best response to it.
pub fn dominated_by_mixed(
    game: &StrategicGame,
    player: usize,
    s: &str,
    restriction: Option<&[Vec<String>]>,
) -> Result<RationalityCertificate, GameError> {
    let s_idx = game.strategy_index(player, s)?;
    let restriction = resolve_restriction(game, restriction)?;
    if let Some(mx) = dominating_mixture(game, player, s_idx, &restriction) {
        return Ok(RationalityCertificate::DominatingMixture(mx));
    }
    let belief =
        supporting_belief(game, player, s_idx, &restriction).expect("no dominating mixture implies a supporting belief exists");
    Ok(RationalityCertificate::SupportingBelief(belief))
}

fn resolve_restriction(
    game: &StrategicGame,
    restriction: Option<&[Vec<String>]>,
) -> Result<Vec<Vec<usize>>, GameError> {
    match restriction {
        None => Ok(game.full_restriction()),
        Some(sets) => sets
            .iter()
            .enumerate()
            .map(|(p, labels)| {
                labels
                    .iter()
                    .map(|l| game.strategy_index(p, l))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect(),
    }
}

/// A belief (distribution, correlation allowed) over the opponents' restricted
/// product making `s` a best response, chosen as the lexicographically largest
/// vertex for determinism.
pub fn supporting_belief(
    game: &StrategicGame,
    player: usize,
    s: usize,
    restriction: &[Vec<usize>],
) -> Option<Vec<(Vec<String>, Q)>> {
    let opp_profiles: Vec<Vec<usize>> = game.opponent_profiles(player, restriction).collect();
    let nv = opp_profiles.len();
    let mut constraints = Vec::new();
    constraints.push(Constraint::new(vec![q1(); nv], Rel::Eq, q1()));
    for alt in 0..game.strategies(player).len() {
        if alt == s {
            continue;
        }
        let mut coeffs = Vec::with_capacity(nv);
        for opp in &opp_profiles {
            let mut prof = opp.clone();
            prof[player] = s;
            let ps = game.payoff_of(&prof, player).clone();
            prof[player] = alt;
            let pa = game.payoff_of(&prof, player).clone();
            coeffs.push(ps - pa);
        }
        constraints.push(Constraint::new(coeffs, Rel::Ge, q0()));
    }
    let lp = Lp {
        num_vars: nv,
        objective: vec![q0(); nv],
        constraints,
    };
    let order: Vec<usize> = (0..nv).collect();
    let x = lexicographic_max(&lp, &order)?;
    Some(
        opp_profiles
            .iter()
            .zip(&x)
            .filter(|(_, p)| p.is_positive())
            .map(|(opp, p)| {
                let labels = opp
                    .iter()
                    .enumerate()
                    .filter(|&(pl, _)| pl != player)
                    .map(|(pl, &sid)| game.strategies(pl)[sid].clone())
                    .collect();
                (labels, p.clone())
            })
            .collect(),
    )
}

/// All pure-strategy Nash equilibria, as label profiles.
pub fn pure_nash(game: &StrategicGame) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    'profiles: for profile in game.profiles() {
        for p in 0..game.num_players() {
            let current = game.payoff_of(&profile, p).clone();
            for alt in 0..game.strategies(p).len() {
                if alt == profile[p] {
                    continue;
                }
                let mut dev = profile.clone();
                dev[p] = alt;
                if *game.payoff_of(&dev, p) > current {
                    continue 'profiles;
                }
            }
        }
        out.push(game.profile_labels(&profile));
    }
    out
}

/// Best replies of `player` against the given opponent mixtures, with the
/// achieved value.
pub fn best_replies(
    game: &StrategicGame,
    player: usize,
    opponents: &[MixedStrategy],
) -> (Vec<String>, Q) {
    let values: Vec<Q> = (0..game.strategies(player).len())
        .map(|s| game.payoff_vs_mixtures(player, s, opponents))
        .collect();
    let best = values.iter().max().expect("nonempty strategy set").clone();
    let replies = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(s, _)| game.strategies(player)[s].clone())
        .collect();
    (replies, best)
}

/// Whether the mixed profile is a Nash equilibrium: every player's mixture
/// puts positive weight only on best replies.
pub fn is_nash(game: &StrategicGame, profile: &[MixedStrategy]) -> bool {
    assert_eq!(profile.len(), game.num_players());
    for p in 0..game.num_players() {
        let opponents: Vec<MixedStrategy> =
            profile.iter().filter(|m| m.player != p).cloned().collect();
        let (replies, _) = best_replies(game, p, &opponents);
        let reply_idx: Vec<usize> = replies
            .iter()
            .map(|r| game.strategy_index(p, r).unwrap())
            .collect();
        for s in profile[p].support() {
            if !reply_idx.contains(&s) {
                return false;
            }
        }
    }
    true
}

/// One mixed equilibrium (or equilibrium component) of a two-player game.
#[derive(Clone, Debug)]
pub enum MixedEquilibrium {
    Isolated(MixedStrategy, MixedStrategy),
    /// An underdetermined but solvable support pair, described by its
    /// defining linear constraints.
    Component {
        support: (Vec<String>, Vec<String>),
        constraints: Vec<String>,
    },
}

/// Enumerates mixed-strategy equilibria of a two-player game by support
/// enumeration with exact indifference systems. Output order is canonical
/// (lexicographic by support).
pub fn mixed_nash_2p(game: &StrategicGame) -> Result<Vec<MixedEquilibrium>, GameError> {
    if game.num_players() != 2 {
        return Err(GameError::NotTwoPlayer(game.num_players()));
    }
    let n0 = game.strategies(0).len();
    let n1 = game.strategies(1).len();
    let mut out = Vec::new();
    for s0 in nonempty_subsets(n0) {
        for s1 in nonempty_subsets(n1) {
            match solve_support(game, &s0, &s1) {
                SupportOutcome::Isolated(m0, m1) => {
                    out.push(MixedEquilibrium::Isolated(m0, m1));
                }
                SupportOutcome::Component(cs) => out.push(MixedEquilibrium::Component {
                    support: (
                        s0.iter().map(|&i| game.strategies(0)[i].clone()).collect(),
                        s1.iter().map(|&i| game.strategies(1)[i].clone()).collect(),
                    ),
                    constraints: cs,
                }),
                SupportOutcome::None => {}
            }
        }
    }
    Ok(out)
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    // ordered by (size, lexicographic) so singleton supports come first
    let mut subsets: Vec<Vec<usize>> = (1..(1usize << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort();
    subsets
}

enum SupportOutcome {
    Isolated(MixedStrategy, MixedStrategy),
    Component(Vec<String>),
    None,
}

fn solve_support(game: &StrategicGame, s0: &[usize], s1: &[usize]) -> SupportOutcome {
    // unknowns: sigma0 over s0, then sigma1 over s1, then v0, v1
    let k0 = s0.len();
    let k1 = s1.len();
    let nv = k0 + k1 + 2;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    // player 0 indifferent across s0 against sigma1: sum_j sigma1_j pi0(i, j) = v0
    for &i in s0 {
        let mut row = vec![q0(); nv];
        for (jj, &j) in s1.iter().enumerate() {
            row[k0 + jj] = game.payoff_of(&[i, j], 0).clone();
        }
        row[k0 + k1] = -q1();
        rows.push(row);
        rhs.push(q0());
    }
    for &j in s1 {
        let mut row = vec![q0(); nv];
        for (ii, &i) in s0.iter().enumerate() {
            row[ii] = game.payoff_of(&[i, j], 1).clone();
        }
        row[k0 + k1 + 1] = -q1();
        rows.push(row);
        rhs.push(q0());
    }
    let mut row = vec![q0(); nv];
    for c in row.iter_mut().take(k0) {
        *c = q1();
    }
    rows.push(row);
    rhs.push(q1());
    let mut row = vec![q0(); nv];
    for c in row.iter_mut().skip(k0).take(k1) {
        *c = q1();
    }
    rows.push(row);
    rhs.push(q1());

    let build = |x: &[Q]| -> Option<(MixedStrategy, MixedStrategy)> {
        let mut p0 = vec![q0(); game.strategies(0).len()];
        for (ii, &i) in s0.iter().enumerate() {
            if !x[ii].is_positive() {
                return None; // support must be exact
            }
            p0[i] = x[ii].clone();
        }
        let mut p1 = vec![q0(); game.strategies(1).len()];
        for (jj, &j) in s1.iter().enumerate() {
            if !x[k0 + jj].is_positive() {
                return None;
            }
            p1[j] = x[k0 + jj].clone();
        }
        let m0 = MixedStrategy { player: 0, probs: p0 };
        let m1 = MixedStrategy { player: 1, probs: p1 };
        is_nash(game, &[m0.clone(), m1.clone()]).then_some((m0, m1))
    };

    match crate::linprog::solve_linear(&rows, &rhs) {
        crate::linprog::LinearSolution::Unique(x) => match build(&x) {
            Some((m0, m1)) => SupportOutcome::Isolated(m0, m1),
            None => SupportOutcome::None,
        },
        crate::linprog::LinearSolution::Underdetermined(x) => {
            // solvable but not isolated; report as a component when the
            // particular solution is a valid equilibrium, described by its
            // defining constraints
            if build(&x).is_some() {
                let mut cs = Vec::new();
                for (&i, xi) in s0.iter().zip(x.iter()) {
                    cs.push(format!(
                        "p1({}) free around {}",
                        game.strategies(0)[i],
                        fmt_q(xi)
                    ));
                }
                for (&j, xj) in s1.iter().zip(x.iter().skip(k0)) {
                    cs.push(format!(
                        "p2({}) free around {}",
                        game.strategies(1)[j],
                        fmt_q(xj)
                    ));
                }
                cs.push("indifference system is rank-deficient".to_string());
                SupportOutcome::Component(cs)
            } else {
                SupportOutcome::None
            }
        }
        crate::linprog::LinearSolution::Inconsistent => SupportOutcome::None,
    }
}

/// Pareto comparison of two pure profiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pareto {
    Strict,
    Weak,
    None,
}

pub fn pareto(game: &StrategicGame, s: &[String], t: &[String]) -> Result<Pareto, GameError> {
    let si: Vec<usize> = s
        .iter()
        .enumerate()
        .map(|(p, l)| game.strategy_index(p, l))
        .collect::<Result<_, _>>()?;
    let ti: Vec<usize> = t
        .iter()
        .enumerate()
        .map(|(p, l)| game.strategy_index(p, l))
        .collect::<Result<_, _>>()?;
    let ps = game.payoff(&si);
    let pt = game.payoff(&ti);
    let all_gt = ps.iter().zip(pt).all(|(a, b)| a > b);
    let all_ge = ps.iter().zip(pt).all(|(a, b)| a >= b);
    let some_gt = ps.iter().zip(pt).any(|(a, b)| a > b);
    Ok(if all_gt {
        Pareto::Strict
    } else if all_ge && some_gt {
        Pareto::Weak
    } else {
        Pareto::None
    })
}

/// Tie-breaking rule for the second-price auction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieRule {
    LowestIndex,
    /// A designated player wins whenever she is among the highest bidders.
    Designated(usize),
}

/// Winner and price of a second-price auction for one bid profile.
pub fn second_price_outcome(bids: &[Q], tie: TieRule) -> (usize, Q) {
    let max = bids.iter().max().unwrap().clone();
    let tied: Vec<usize> = (0..bids.len()).filter(|&i| bids[i] == max).collect();
    let winner = match tie {
        TieRule::LowestIndex => tied[0],
        TieRule::Designated(d) => {
            if tied.contains(&d) {
                d
            } else {
                tied[0]
            }
        }
    };
    let second = bids
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != winner)
        .map(|(_, b)| b)
        .max()
        .cloned()
        .unwrap_or(max);
    (winner, second)
}

/// Builds the strategic form of a second-price auction on a finite bid grid.
/// Player `i`'s payoff is `value[i] - second_highest_bid` when she wins and 0
/// otherwise.
pub fn second_price_auction(
    values: &[Q],
    bid_grid: &[Q],
    tie: TieRule,
) -> Result<StrategicGame, GameError> {
    if bid_grid.is_empty() {
        return Err(GameError::EmptyGrid);
    }
    let n = values.len();
    assert!(n >= 2, "auction needs at least two bidders");
    let players = (1..=n).map(|i| i.to_string()).collect();
    let strategies: Vec<Vec<String>> = (0..n)
        .map(|_| bid_grid.iter().map(fmt_q).collect())
        .collect();
    let mut table = BTreeMap::new();
    for bids in (0..n)
        .map(|_| bid_grid.iter().cloned())
        .multi_cartesian_product()
    {
        let (winner, price) = second_price_outcome(&bids, tie);
        let mut pay = vec![q0(); n];
        pay[winner] = &values[winner] - &price;
        table.insert(bids.iter().map(fmt_q).collect(), pay);
    }
    StrategicGame::new(players, strategies, table)
}

/// Result of one run of the pivotal mechanism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotalOutcome {
    pub carried_out: bool,
    pub pivotal: Vec<usize>,
    pub taxes: Vec<Q>,
}

/// Decision, pivotal set and taxes of the pivotal mechanism, given cost
/// shares `c` and reported benefits `w`.
pub fn pivotal_mechanism(c: &[Q], w: &[Q]) -> Result<PivotalOutcome, GameError> {
    if c.len() != w.len() {
        return Err(GameError::LengthMismatch);
    }
    let total_w = sum(w);
    let total_c = sum(c);
    let carried_out = total_w > total_c;
    let mut pivotal = Vec::new();
    let mut taxes = vec![q0(); c.len()];
    for i in 0..c.len() {
        let w_rest = &total_w - &w[i];
        let c_rest = &total_c - &c[i];
        let rest_decision = w_rest > c_rest;
        if rest_decision != carried_out {
            pivotal.push(i);
            taxes[i] = (&w_rest - &c_rest).abs();
        }
    }
    Ok(PivotalOutcome {
        carried_out,
        pivotal,
        taxes,
    })
}

/// Builds the strategic form of the pivotal mechanism over finite report
/// grids. Player `i`'s payoff is her utility change relative to wealth:
/// `v_i - c_i - tax_i` if the project is carried out, else `-tax_i`.
pub fn pivotal_game(
    c: &[Q],
    v: &[Q],
    report_grids: &[Vec<Q>],
) -> Result<StrategicGame, GameError> {
    let n = c.len();
    if v.len() != n || report_grids.len() != n {
        return Err(GameError::LengthMismatch);
    }
    let players = (1..=n).map(|i| i.to_string()).collect();
    let strategies: Vec<Vec<String>> = report_grids
        .iter()
        .map(|g| g.iter().map(fmt_q).collect())
        .collect();
    let mut table = BTreeMap::new();
    for reports in report_grids
        .iter()
        .map(|g| g.iter().cloned())
        .multi_cartesian_product()
    {
        let out = pivotal_mechanism(c, &reports)?;
        let pay: Vec<Q> = (0..n)
            .map(|i| {
                let base = if out.carried_out {
                    &v[i] - &c[i]
                } else {
                    q0()
                };
                base - &out.taxes[i]
            })
            .collect();
        table.insert(reports.iter().map(fmt_q).collect(), pay);
    }
    StrategicGame::new(players, strategies, table)
}

/// Whether, for every player, reporting her truth is weakly dominant in the
/// mechanism-induced game.
pub fn verify_truthful_dominance(
    game: &StrategicGame,
    truths: &[Q],
) -> Result<bool, GameError> {
    for (p, truth) in truths.iter().enumerate() {
        let label = fmt_q(truth);
        if game.strategy_index(p, &label).is_err() {
            return Err(GameError::TruthNotOnGrid(label, p));
        }
        let dominant = dominant_strategies(game, p, DominanceMode::Weak);
        let strict = dominant_strategies(game, p, DominanceMode::Strict);
        if !dominant.contains(&label) && !strict.contains(&label) {
            return Ok(false);
        }
    }
    Ok(true)
}
