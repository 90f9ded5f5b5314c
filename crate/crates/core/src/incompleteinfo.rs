//! State-space representations of incomplete-information situations, the
//! Harsanyi transformation into an extensive game with an initial chance
//! move, Bayesian Nash equilibrium, pooling/separating classification, and
//! conversions between state-space structures and type spaces.

use crate::epistemics::{common_prior, EpistemicError, EpistemicStructure};
use crate::extensive::{self, ExtensiveForm, Node};
use crate::num::{fmt_q, q0, q1, Q};
use crate::strategic;
use itertools::Itertools;
use num_traits::{One, Signed};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IncompleteInfoError {
    #[error("no common prior exists; the transformation cannot be carried out")]
    NoCommonPrior,
    #[error("structure error: {0}")]
    Structure(#[from] EpistemicError),
    #[error("state `{0}` has no payoff table")]
    MissingStateGame(String),
    #[error("transformed form is invalid: {0}")]
    InvalidForm(String),
    #[error("scenario is not one-sided: players {0:?} have non-trivial information")]
    NotOneSided(Vec<usize>),
    #[error("game error: {0}")]
    Game(#[from] strategic::GameError),
    #[error("form error: {0}")]
    Form(#[from] extensive::EfError),
    #[error(
        "states `{0}` and `{1}` induce the same type profile but different payoffs; \
         the conversion would be lossy"
    )]
    NonInjectiveEncoding(String, String),
    #[error("type space is malformed: {0}")]
    BadTypeSpace(String),
}

/// The state-dependent games of a scenario: either one strategic-form payoff
/// table per state over shared strategy sets, or a shared tree shape with
/// state-dependent terminal payoffs.
#[derive(Clone, Debug)]
pub enum ScenarioGames {
    Strategic {
        /// Shared per-player strategy label sets.
        strategies: Vec<Vec<String>>,
        /// Per state: profile labels -> payoff vector.
        payoffs: Vec<BTreeMap<Vec<String>, Vec<Q>>>,
    },
    Dynamic {
        /// Shared tree shape; its terminal payoffs are placeholders.
        shape: ExtensiveForm,
        /// Per state: terminal path label (dotted) -> payoff vector.
        payoffs: Vec<BTreeMap<String, Vec<Q>>>,
    },
}

/// An incomplete-information situation: a knowledge-belief structure over
/// states, a game per state over a shared arena, and a designated true state.
#[derive(Clone, Debug)]
pub struct IncompleteScenario {
    pub structure: EpistemicStructure,
    pub games: ScenarioGames,
    pub true_state: usize,
}

impl IncompleteScenario {
    pub fn num_players(&self) -> usize {
        self.structure.num_agents()
    }
}

/// Builds the simultaneous shared shape for a strategic scenario: players
/// move in index order, each exactly once, observing nothing.
fn simultaneous_shape(strategies: &[Vec<String>], players: Vec<String>) -> ExtensiveForm {
    fn build(strategies: &[Vec<String>], player: usize) -> Node {
        if player == strategies.len() {
            return Node::Terminal(vec![]);
        }
        Node::Decision {
            player,
            actions: strategies[player]
                .iter()
                .map(|s| (s.clone(), build(strategies, player + 1)))
                .collect(),
        }
    }
    // group all of player i's histories (depth i) into one information set
    let mut groups: Vec<Vec<Vec<String>>> = Vec::new();
    for (i, _) in strategies.iter().enumerate() {
        if i == 0 {
            continue; // singleton root
        }
        let prefixes: Vec<Vec<String>> = strategies[..i]
            .iter()
            .map(|s| s.iter().cloned())
            .multi_cartesian_product()
            .collect();
        groups.push(prefixes);
    }
    let group_refs: Vec<Vec<Vec<&str>>> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| p.iter().map(|s| s.as_str()).collect())
                .collect()
        })
        .collect();
    let tree = build(strategies, 0);
    ExtensiveForm::from_tree(players, tree, &group_refs).expect("simultaneous shape")
}

/// Clones a shape subtree, substituting state payoffs at terminals. Payoff
/// vectors are padded to the player count (placeholder terminals in the
/// shape carry empty vectors).
fn clone_with_payoffs(
    shape: &ExtensiveForm,
    h: extensive::HistoryId,
    payoffs: &BTreeMap<String, Vec<Q>>,
    num_players: usize,
) -> Result<Node, IncompleteInfoError> {
    if shape.is_terminal(h) {
        let key = shape.label(h);
        let pay = payoffs
            .get(&key)
            .ok_or(IncompleteInfoError::MissingStateGame(key))?;
        assert_eq!(pay.len(), num_players, "payoff arity");
        return Ok(Node::Terminal(pay.clone()));
    }
    match shape.owner(h).unwrap() {
        extensive::Owner::Chance => Ok(Node::Chance {
            actions: shape
                .actions(h)
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    Ok((
                        a.clone(),
                        shape.chance_probs(h).unwrap()[k].clone(),
                        clone_with_payoffs(shape, shape.child(h, k), payoffs, num_players)?,
                    ))
                })
                .collect::<Result<_, IncompleteInfoError>>()?,
        }),
        extensive::Owner::Player(pl) => Ok(Node::Decision {
            player: pl,
            actions: shape
                .actions(h)
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    Ok((
                        a.clone(),
                        clone_with_payoffs(shape, shape.child(h, k), payoffs, num_players)?,
                    ))
                })
                .collect::<Result<_, IncompleteInfoError>>()?,
        }),
    }
}

/// The Harsanyi transformation: Nature draws the state from the common
/// prior, the shared arena is grafted under each branch, and each player's
/// information sets join Nature's branches within one of her knowledge cells
/// (crossed with the arena's own information structure). States with zero
/// prior probability are omitted from Nature's move.
pub fn harsanyi_transform(sc: &IncompleteScenario) -> Result<ExtensiveForm, IncompleteInfoError> {
    let prior = common_prior(&sc.structure)?.ok_or(IncompleteInfoError::NoCommonPrior)?;
    let players = match &sc.games {
        ScenarioGames::Strategic { .. } | ScenarioGames::Dynamic { .. } => {
            (1..=sc.num_players()).map(|i| i.to_string()).collect::<Vec<_>>()
        }
    };
    let shape = match &sc.games {
        ScenarioGames::Strategic { strategies, .. } => {
            simultaneous_shape(strategies, players.clone())
        }
        ScenarioGames::Dynamic { shape, .. } => shape.clone(),
    };
    let state_payoffs: Vec<BTreeMap<String, Vec<Q>>> = match &sc.games {
        ScenarioGames::Strategic { payoffs, .. } => payoffs
            .iter()
            .map(|table| {
                table
                    .iter()
                    .map(|(profile, pay)| (profile.join("."), pay.clone()))
                    .collect()
            })
            .collect(),
        ScenarioGames::Dynamic { payoffs, .. } => payoffs.clone(),
    };
    let live: Vec<usize> = (0..sc.structure.num_states())
        .filter(|&w| prior[w].is_positive())
        .collect();
    let mut chance_actions = Vec::new();
    for &w in &live {
        let node = clone_with_payoffs(
            &shape,
            extensive::ROOT,
            &state_payoffs[w],
            sc.num_players(),
        )?;
        chance_actions.push((sc.structure.states()[w].clone(), prior[w].clone(), node));
    }
    // information groups: per player, per (knowledge cell, shape info set)
    let mut groups: Vec<Vec<Vec<String>>> = Vec::new();
    for player in 0..sc.num_players() {
        for cell in sc.structure.cells(player) {
            let live_cell: Vec<usize> = cell.iter().copied().filter(|w| live.contains(w)).collect();
            if live_cell.is_empty() {
                continue;
            }
            for set in shape.info_sets() {
                if set.player != player {
                    continue;
                }
                let mut group = Vec::new();
                for &w in &live_cell {
                    for &m in &set.members {
                        let mut path = vec![sc.structure.states()[w].clone()];
                        path.extend(shape.path(m));
                        group.push(path);
                    }
                }
                groups.push(group);
            }
        }
    }
    let group_refs: Vec<Vec<Vec<&str>>> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| p.iter().map(|s| s.as_str()).collect())
                .collect()
        })
        .collect();
    let ef = ExtensiveForm::from_tree(
        players,
        Node::Chance {
            actions: chance_actions,
        },
        &group_refs,
    )?;
    let diags = ef.validate();
    if !diags.is_empty() {
        return Err(IncompleteInfoError::InvalidForm(diags.join("; ")));
    }
    Ok(ef)
}

/// The pure-strategy Bayesian Nash equilibria of the scenario: the pure Nash
/// equilibria of the strategic form of the transformed game.
pub fn bayesian_nash(sc: &IncompleteScenario) -> Result<Vec<Vec<String>>, IncompleteInfoError> {
    let ef = harsanyi_transform(sc)?;
    let (game, _) = extensive::to_strategic_form(&ef);
    Ok(strategic::pure_nash(&game))
}

/// Classification of a pure Bayesian Nash equilibrium of a one-sided
/// scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumKind {
    Pooling,
    Separating,
    Neither,
}

/// Classifies an equilibrium of a one-sided strategic scenario: pooling when
/// the informed player chooses the same action at each of her knowledge
/// cells, separating when the choices are pairwise distinct.
pub fn classify(
    sc: &IncompleteScenario,
    equilibrium: &[String],
) -> Result<EquilibriumKind, IncompleteInfoError> {
    let informed: Vec<usize> = (0..sc.num_players())
        .filter(|&p| sc.structure.cells(p).len() > 1)
        .collect();
    if informed.len() != 1 {
        return Err(IncompleteInfoError::NotOneSided(informed));
    }
    let informed = informed[0];
    // the informed player's component is her dotted choice list, one per cell
    let choices: Vec<&str> = equilibrium[informed].split('.').collect();
    let distinct: BTreeSet<&str> = choices.iter().copied().collect();
    Ok(if distinct.len() == 1 {
        EquilibriumKind::Pooling
    } else if distinct.len() == choices.len() {
        EquilibriumKind::Separating
    } else {
        EquilibriumKind::Neither
    })
}

/// A static Bayesian game of incomplete information: per-player type sets,
/// relevant type profiles, state-dependent utilities over shared strategy
/// sets, and per-type beliefs about the other players' types.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    pub players: Vec<String>,
    /// Per player: type labels.
    pub types: Vec<Vec<String>>,
    /// Shared per-player strategy label sets.
    pub strategies: Vec<Vec<String>>,
    /// Relevant type profiles (indices into `types`).
    pub relevant: Vec<Vec<usize>>,
    /// Per relevant profile: per player, strategy-profile labels -> utility.
    pub utilities: BTreeMap<Vec<usize>, Vec<BTreeMap<Vec<String>, Q>>>,
    /// `beliefs[i][ti]`: distribution over opponents' type profiles, stored
    /// as (full profile with own component fixed to `ti`, probability).
    pub beliefs: Vec<Vec<Vec<(Vec<usize>, Q)>>>,
}

impl TypeSpace {
    /// Checks the support condition (positive belief only on relevant
    /// profiles) and distribution arithmetic.
    pub fn validate(&self) -> Result<(), IncompleteInfoError> {
        for (i, per_type) in self.beliefs.iter().enumerate() {
            if per_type.len() != self.types[i].len() {
                return Err(IncompleteInfoError::BadTypeSpace(format!(
                    "player {i} needs one belief per type"
                )));
            }
            for (ti, entries) in per_type.iter().enumerate() {
                let total: Q = entries.iter().fold(q0(), |a, (_, p)| a + p);
                if !total.is_one() || entries.iter().any(|(_, p)| p.is_negative()) {
                    return Err(IncompleteInfoError::BadTypeSpace(format!(
                        "beliefs of type {} of player {} are not a distribution",
                        self.types[i][ti], i
                    )));
                }
                for (profile, p) in entries {
                    if profile[i] != ti {
                        return Err(IncompleteInfoError::BadTypeSpace(
                            "belief profile does not match the owning type".into(),
                        ));
                    }
                    if p.is_positive() && !self.relevant.contains(profile) {
                        return Err(IncompleteInfoError::BadTypeSpace(format!(
                            "type {} of player {} assigns positive probability to an irrelevant profile",
                            self.types[i][ti], i
                        )));
                    }
                }
            }
        }
        for t in &self.relevant {
            if !self.utilities.contains_key(t) {
                return Err(IncompleteInfoError::BadTypeSpace(
                    "missing utilities at a relevant profile".into(),
                ));
            }
        }
        Ok(())
    }

    /// True when every player's utility depends only on her own type.
    pub fn own_payoff_knowledge(&self) -> bool {
        for i in 0..self.players.len() {
            let mut by_own: BTreeMap<usize, &Vec<BTreeMap<Vec<String>, Q>>> = BTreeMap::new();
            for (profile, utils) in &self.utilities {
                match by_own.get(&profile[i]) {
                    None => {
                        by_own.insert(profile[i], utils);
                    }
                    Some(prev) => {
                        if prev[i] != utils[i] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn profile_label(&self, t: &[usize]) -> String {
        t.iter()
            .enumerate()
            .map(|(i, &ti)| self.types[i][ti].clone())
            .join(",")
    }
}

/// Converts a state-space strategic scenario into a type space: one type per
/// knowledge cell, relevant profiles are the images of states, utilities and
/// beliefs are transported. Fails when two states map to the same type
/// profile but carry different payoffs.
pub fn state_to_type(sc: &IncompleteScenario) -> Result<TypeSpace, IncompleteInfoError> {
    let ScenarioGames::Strategic {
        strategies,
        payoffs,
    } = &sc.games
    else {
        return Err(IncompleteInfoError::BadTypeSpace(
            "type conversion applies to strategic scenarios".into(),
        ));
    };
    let n = sc.num_players();
    let structure = &sc.structure;
    // type label of player i's cell c: joined state labels
    let type_labels: Vec<Vec<String>> = (0..n)
        .map(|i| {
            structure
                .cells(i)
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|&w| structure.states()[w].clone())
                        .join("+")
                })
                .collect()
        })
        .collect();
    let cell_of = |i: usize, w: usize| -> usize {
        structure
            .cells(i)
            .iter()
            .position(|cell| cell.contains(&w))
            .expect("partition covers states")
    };
    let profile_of = |w: usize| -> Vec<usize> { (0..n).map(|i| cell_of(i, w)).collect() };
    // relevant set: image of states; detect lossy encodings
    let mut relevant: Vec<Vec<usize>> = Vec::new();
    let mut utilities: BTreeMap<Vec<usize>, Vec<BTreeMap<Vec<String>, Q>>> = BTreeMap::new();
    let mut source: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for w in 0..structure.num_states() {
        let t = profile_of(w);
        let per_player: Vec<BTreeMap<Vec<String>, Q>> = (0..n)
            .map(|i| {
                payoffs[w]
                    .iter()
                    .map(|(profile, pay)| (profile.clone(), pay[i].clone()))
                    .collect()
            })
            .collect();
        match source.get(&t) {
            None => {
                source.insert(t.clone(), w);
                relevant.push(t.clone());
                utilities.insert(t, per_player);
            }
            Some(&w0) => {
                if utilities[&t] != per_player {
                    return Err(IncompleteInfoError::NonInjectiveEncoding(
                        structure.states()[w0].clone(),
                        structure.states()[w].clone(),
                    ));
                }
            }
        }
    }
    relevant.sort();
    // beliefs: per player, per cell, transported from cell beliefs
    let mut beliefs: Vec<Vec<Vec<(Vec<usize>, Q)>>> = Vec::new();
    for i in 0..n {
        let mut per_type = Vec::new();
        for (c, cell) in structure.cells(i).iter().enumerate() {
            let cb = structure.cell_beliefs(i, c)?;
            let mut table: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
            for &w in cell {
                if cb[w].is_positive() {
                    *table.entry(profile_of(w)).or_insert_with(q0) += &cb[w];
                }
            }
            per_type.push(table.into_iter().collect());
        }
        beliefs.push(per_type);
    }
    let ts = TypeSpace {
        players: (1..=n).map(|i| i.to_string()).collect(),
        types: type_labels,
        strategies: strategies.clone(),
        relevant,
        utilities,
        beliefs,
    };
    ts.validate()?;
    Ok(ts)
}

/// Converts a type space into a state-space scenario (with no designated
/// true state): states are the relevant profiles, cells group profiles by
/// the player's own type, beliefs and utilities are transported.
pub fn type_to_state(ts: &TypeSpace) -> Result<IncompleteScenario, IncompleteInfoError> {
    ts.validate()?;
    let n = ts.players.len();
    let states: Vec<String> = ts.relevant.iter().map(|t| ts.profile_label(t)).collect();
    let mut partitions: Vec<Vec<Vec<String>>> = Vec::new();
    let mut beliefs: Vec<Vec<Vec<(String, Q)>>> = Vec::new();
    for i in 0..n {
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut cell_beliefs: Vec<Vec<(String, Q)>> = Vec::new();
        for ti in 0..ts.types[i].len() {
            let members: Vec<String> = ts
                .relevant
                .iter()
                .filter(|t| t[i] == ti)
                .map(|t| ts.profile_label(t))
                .collect();
            if members.is_empty() {
                continue; // type never occurs in a relevant profile
            }
            let entries: Vec<(String, Q)> = ts.beliefs[i][ti]
                .iter()
                .filter(|(_, p)| p.is_positive())
                .map(|(t, p)| (ts.profile_label(t), p.clone()))
                .collect();
            cells.push(members);
            cell_beliefs.push(entries);
        }
        partitions.push(cells);
        beliefs.push(cell_beliefs);
    }
    let structure = EpistemicStructure::new(states.clone(), partitions, Some(beliefs))?;
    let payoffs: Vec<BTreeMap<Vec<String>, Vec<Q>>> = ts
        .relevant
        .iter()
        .map(|t| {
            let per_player = &ts.utilities[t];
            let mut table: BTreeMap<Vec<String>, Vec<Q>> = BTreeMap::new();
            for profile in per_player[0].keys() {
                let pay: Vec<Q> = (0..n).map(|i| per_player[i][profile].clone()).collect();
                table.insert(profile.clone(), pay);
            }
            table
        })
        .collect();
    Ok(IncompleteScenario {
        structure,
        games: ScenarioGames::Strategic {
            strategies: ts.strategies.clone(),
            payoffs,
        },
        true_state: 0,
    })
}

/// A common prior on type profiles conditioning to every type's beliefs, or
/// `None`; exact linear feasibility. Every type must receive positive mass.
pub fn harsanyi_consistent(
    ts: &TypeSpace,
) -> Result<Option<Vec<(Vec<usize>, Q)>>, IncompleteInfoError> {
    ts.validate()?;
    let n = ts.players.len();
    let all_profiles: Vec<Vec<usize>> = (0..n)
        .map(|i| 0..ts.types[i].len())
        .multi_cartesian_product()
        .collect();
    let nv = all_profiles.len() + 1; // + epsilon
    use crate::linprog::{solve_lp, Constraint, Lp, LpOutcome, Rel};
    let mut constraints = Vec::new();
    let mut ones = vec![q1(); nv];
    ones[nv - 1] = q0();
    constraints.push(Constraint::new(ones, Rel::Eq, q1()));
    for i in 0..n {
        for ti in 0..ts.types[i].len() {
            let event: Vec<usize> = all_profiles
                .iter()
                .enumerate()
                .filter(|(_, t)| t[i] == ti)
                .map(|(k, _)| k)
                .collect();
            // proportionality: P(t) = belief(t_{-i}) * P(type event)
            let belief: BTreeMap<Vec<usize>, Q> =
                ts.beliefs[i][ti].iter().cloned().collect();
            for &k in &event {
                let b = belief
                    .get(&all_profiles[k])
                    .cloned()
                    .unwrap_or_else(q0);
                let mut coeffs = vec![q0(); nv];
                coeffs[k] = q1();
                for &j in &event {
                    coeffs[j] -= &b;
                }
                constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
            }
            // positive type mass
            let mut coeffs = vec![q0(); nv];
            for &j in &event {
                coeffs[j] = q1();
            }
            coeffs[nv - 1] = -q1();
            constraints.push(Constraint::new(coeffs, Rel::Ge, q0()));
        }
    }
    let mut cap = vec![q0(); nv];
    cap[nv - 1] = q1();
    constraints.push(Constraint::new(cap, Rel::Le, q1()));
    let mut objective = vec![q0(); nv];
    objective[nv - 1] = q1();
    let lp = Lp {
        num_vars: nv,
        objective,
        constraints,
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Ok(Some(
            all_profiles
                .iter()
                .zip(&x)
                .map(|(t, p)| (t.clone(), p.clone()))
                .collect(),
        )),
        _ => Ok(None),
    }
}

/// Checks that two strategic scenarios are isomorphic: a bijection on states
/// matching labels up to renaming, preserving partitions, beliefs and
/// payoff tables. Used for round-trip validation.
pub fn scenarios_isomorphic(a: &IncompleteScenario, b: &IncompleteScenario) -> bool {
    let (ScenarioGames::Strategic { strategies: sa, payoffs: pa },
         ScenarioGames::Strategic { strategies: sb, payoffs: pb }) = (&a.games, &b.games)
    else {
        return false;
    };
    if sa != sb || a.structure.num_agents() != b.structure.num_agents() {
        return false;
    }
    let n = a.structure.num_states();
    if n != b.structure.num_states() {
        return false;
    }
    // candidate bijection: match states by payoff table, then check
    // partitions and beliefs under it (search over per-table permutations)
    let perms = (0..n).permutations(n);
    'outer: for perm in perms {
        for w in 0..n {
            if pa[w] != pb[perm[w]] {
                continue 'outer;
            }
        }
        // partitions and beliefs must transport
        for i in 0..a.structure.num_agents() {
            let cells_a: BTreeSet<Vec<usize>> = a
                .structure
                .cells(i)
                .iter()
                .map(|cell| {
                    let mut c: Vec<usize> = cell.iter().map(|&w| perm[w]).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            let cells_b: BTreeSet<Vec<usize>> = b
                .structure
                .cells(i)
                .iter()
                .map(|cell| {
                    let mut c = cell.clone();
                    c.sort_unstable();
                    c
                })
                .collect();
            if cells_a != cells_b {
                continue 'outer;
            }
            for w in 0..n {
                let ba = a.structure.beliefs_at(i, w);
                let bb = b.structure.beliefs_at(i, perm[w]);
                match (ba, bb) {
                    (Ok(ba), Ok(bb)) => {
                        for x in 0..n {
                            if ba[x] != bb[perm[x]] {
                                continue 'outer;
                            }
                        }
                    }
                    _ => continue 'outer,
                }
            }
        }
        return true;
    }
    false
}

/// Pretty-prints a prior over type profiles.
pub fn describe_type_prior(ts: &TypeSpace, prior: &[(Vec<usize>, Q)]) -> String {
    prior
        .iter()
        .filter(|(_, p)| p.is_positive())
        .map(|(t, p)| format!("({})@{}", ts.profile_label(t), fmt_q(p)))
        .join(", ")
}
