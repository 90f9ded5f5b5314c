//! Finite knowledge-belief structures: knowledge and common-knowledge
//! operators, probabilistic conditioning, common priors, the agreement check,
//! belief revision from plausibility orders, and epistemic models of
//! strategic-form games.

use crate::linprog::{solve_lp, Constraint, Lp, LpOutcome, Rel};
use crate::num::{fmt_q, q0, q1, Q};
use crate::strategic::{supporting_belief, DeletionMode, StrategicGame};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EpistemicError {
    #[error("unknown agent {0}")]
    UnknownAgent(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("partition of agent {0} does not partition the state space")]
    BadPartition(usize),
    #[error("beliefs at a cell of agent {0} are not a distribution supported inside the cell")]
    BadBeliefs(usize),
    #[error("conditioning on a null event")]
    NullEvent,
    #[error("the empty set cannot be an item of information")]
    EmptyInformation,
    #[error("no beliefs stored for agent {0}")]
    MissingBeliefs(usize),
    #[error("prior is not full support at `{0}`")]
    NotFullSupport(String),
    #[error("agreement check requires a common prior")]
    NoCommonPrior,
    #[error("levels do not partition the state space")]
    BadLevels,
    #[error("model strategy assignment is not constant on a cell of agent {0}")]
    InconsistentAssignment(usize),
}

/// An event is a set of state indices.
pub type Event = BTreeSet<usize>;

/// A finite multi-agent knowledge structure with optional cell beliefs.
#[derive(Clone, Debug)]
pub struct EpistemicStructure {
    states: Vec<String>,
    /// Per agent: cell index of every state.
    partitions: Vec<Vec<usize>>,
    /// Per agent: cells as sorted state lists.
    cells: Vec<Vec<Vec<usize>>>,
    /// Per agent per cell: distribution over the whole state space with
    /// support inside the cell (empty when the structure carries no beliefs).
    beliefs: Vec<Vec<Vec<Q>>>,
}

impl EpistemicStructure {
    /// `partitions[i]` lists the cells of agent `i` as sets of state labels.
    /// `beliefs[i][c]`, when present, gives the distribution of agent `i` at
    /// her `c`-th cell as (state label, probability) pairs.
    pub fn new(
        states: Vec<String>,
        partitions: Vec<Vec<Vec<String>>>,
        beliefs: Option<Vec<Vec<Vec<(String, Q)>>>>,
    ) -> Result<Self, EpistemicError> {
        let index: BTreeMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let n = states.len();
        let mut part_idx = Vec::new();
        let mut cells_all = Vec::new();
        for (agent, cells) in partitions.iter().enumerate() {
            let mut assignment = vec![usize::MAX; n];
            let mut cell_sets = Vec::new();
            for (c, cell) in cells.iter().enumerate() {
                let mut ids = Vec::new();
                for label in cell {
                    let &id = index
                        .get(label.as_str())
                        .ok_or_else(|| EpistemicError::UnknownState(label.clone()))?;
                    if assignment[id] != usize::MAX {
                        return Err(EpistemicError::BadPartition(agent));
                    }
                    assignment[id] = c;
                    ids.push(id);
                }
                if ids.is_empty() {
                    return Err(EpistemicError::BadPartition(agent));
                }
                ids.sort_unstable();
                cell_sets.push(ids);
            }
            if assignment.iter().any(|&c| c == usize::MAX) {
                return Err(EpistemicError::BadPartition(agent));
            }
            part_idx.push(assignment);
            cells_all.push(cell_sets);
        }
        let mut belief_tables = Vec::new();
        if let Some(beliefs) = beliefs {
            for (agent, per_cell) in beliefs.iter().enumerate() {
                let mut tables = Vec::new();
                for (c, entries) in per_cell.iter().enumerate() {
                    let mut table = vec![q0(); n];
                    for (label, p) in entries {
                        let &id = index
                            .get(label.as_str())
                            .ok_or_else(|| EpistemicError::UnknownState(label.clone()))?;
                        if part_idx[agent][id] != c {
                            return Err(EpistemicError::BadBeliefs(agent));
                        }
                        table[id] = p.clone();
                    }
                    if table.iter().any(|p| p.is_negative())
                        || !table.iter().fold(q0(), |a, b| a + b).is_one()
                    {
                        return Err(EpistemicError::BadBeliefs(agent));
                    }
                    tables.push(table);
                }
                if tables.len() != cells_all[agent].len() {
                    return Err(EpistemicError::BadBeliefs(agent));
                }
                belief_tables.push(tables);
            }
        }
        Ok(EpistemicStructure {
            states,
            partitions: part_idx,
            cells: cells_all,
            beliefs: belief_tables,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_agents(&self) -> usize {
        self.partitions.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, label: &str) -> Result<usize, EpistemicError> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| EpistemicError::UnknownState(label.to_string()))
    }

    pub fn event(&self, labels: &[&str]) -> Result<Event, EpistemicError> {
        labels.iter().map(|l| self.state_index(l)).collect()
    }

    pub fn event_labels(&self, e: &Event) -> Vec<String> {
        e.iter().map(|&w| self.states[w].clone()).collect()
    }

    /// Cell (as a sorted state set) of agent `i` containing state `w`.
    pub fn cell_of(&self, agent: usize, w: usize) -> &[usize] {
        &self.cells[agent][self.partitions[agent][w]]
    }

    pub fn cells(&self, agent: usize) -> &[Vec<usize>] {
        &self.cells[agent]
    }

    pub fn has_beliefs(&self) -> bool {
        !self.beliefs.is_empty()
    }

    /// Beliefs of agent `i` at her cell containing `w`, as a full-length
    /// distribution.
    pub fn beliefs_at(&self, agent: usize, w: usize) -> Result<&[Q], EpistemicError> {
        if self.beliefs.is_empty() {
            return Err(EpistemicError::MissingBeliefs(agent));
        }
        Ok(&self.beliefs[agent][self.partitions[agent][w]])
    }

    pub fn cell_beliefs(&self, agent: usize, cell: usize) -> Result<&[Q], EpistemicError> {
        if self.beliefs.is_empty() {
            return Err(EpistemicError::MissingBeliefs(agent));
        }
        Ok(&self.beliefs[agent][cell])
    }
}

/// The knowledge operator: `KE = { w : I(w) subset of E }`.
pub fn know(s: &EpistemicStructure, agent: usize, e: &Event) -> Result<Event, EpistemicError> {
    if agent >= s.num_agents() {
        return Err(EpistemicError::UnknownAgent(agent));
    }
    Ok((0..s.num_states())
        .filter(|&w| s.cell_of(agent, w).iter().all(|x| e.contains(x)))
        .collect())
}

/// The common-knowledge partition: the finest common coarsening of all
/// agents' partitions (transitive closure of one-step reachability).
pub fn ck_partition(s: &EpistemicStructure) -> Vec<Vec<usize>> {
    let n = s.num_states();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for agent in 0..s.num_agents() {
        for cell in s.cells(agent) {
            for w in cell.windows(2) {
                let a = find(&mut parent, w[0]);
                let b = find(&mut parent, w[1]);
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for w in 0..n {
        let r = find(&mut parent, w);
        groups.entry(r).or_default().push(w);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// The common-knowledge operator via the common-knowledge partition.
pub fn ck(s: &EpistemicStructure, e: &Event) -> Event {
    let partition = ck_partition(s);
    let mut out = Event::new();
    for cell in &partition {
        if cell.iter().all(|w| e.contains(w)) {
            out.extend(cell.iter().copied());
        }
    }
    out
}

/// Conditions a distribution on an event. Returns the updated distribution.
pub fn condition(p: &[Q], e: &Event) -> Result<Vec<Q>, EpistemicError> {
    let mass: Q = e.iter().fold(q0(), |a, &w| a + &p[w]);
    if !mass.is_positive() {
        return Err(EpistemicError::NullEvent);
    }
    Ok((0..p.len())
        .map(|w| {
            if e.contains(&w) {
                &p[w] / &mass
            } else {
                q0()
            }
        })
        .collect())
}

/// Event-level conditional probability `P(A | B)`.
pub fn conditional_probability(p: &[Q], a: &Event, b: &Event) -> Result<Q, EpistemicError> {
    let pb: Q = b.iter().fold(q0(), |acc, &w| acc + &p[w]);
    if !pb.is_positive() {
        return Err(EpistemicError::NullEvent);
    }
    let pab: Q = a.intersection(b).fold(q0(), |acc, &w| acc + &p[w]);
    Ok(pab / pb)
}

/// A common prior: a distribution over states giving every cell positive
/// mass whose conditionals reproduce each agent's cell beliefs. Solved as an
/// exact linear feasibility problem; `None` when the system is infeasible.
pub fn common_prior(s: &EpistemicStructure) -> Result<Option<Vec<Q>>, EpistemicError> {
    if !s.has_beliefs() {
        return Err(EpistemicError::MissingBeliefs(0));
    }
    let n = s.num_states();
    // variables: P(w) for each state, plus a floor eps (last variable)
    let nv = n + 1;
    let mut constraints = Vec::new();
    let mut ones = vec![q1(); nv];
    ones[n] = q0();
    constraints.push(Constraint::new(ones, Rel::Eq, q1()));
    for agent in 0..s.num_agents() {
        for (c, cell) in s.cells(agent).iter().enumerate() {
            let beliefs = s.cell_beliefs(agent, c)?;
            // proportionality: P(w) = beliefs(w) * P(cell), for every w in cell
            for &w in cell {
                let mut coeffs = vec![q0(); nv];
                coeffs[w] = q1();
                for &x in cell {
                    coeffs[x] -= &beliefs[w];
                }
                constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
            }
            // positive cell mass: P(cell) >= eps
            let mut coeffs = vec![q0(); nv];
            for &x in cell {
                coeffs[x] = q1();
            }
            coeffs[n] = -q1();
            constraints.push(Constraint::new(coeffs, Rel::Ge, q0()));
        }
    }
    let mut cap = vec![q0(); nv];
    cap[n] = q1();
    constraints.push(Constraint::new(cap, Rel::Le, q1()));
    let mut objective = vec![q0(); nv];
    objective[n] = q1();
    let lp = Lp {
        num_vars: nv,
        objective,
        constraints,
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Ok(Some(x[..n].to_vec())),
        _ => Ok(None),
    }
}

/// Validates a claimed common prior against the stored beliefs.
pub fn is_common_prior(s: &EpistemicStructure, p: &[Q]) -> Result<bool, EpistemicError> {
    for agent in 0..s.num_agents() {
        for (c, cell) in s.cells(agent).iter().enumerate() {
            let mass: Q = cell.iter().fold(q0(), |a, &w| a + &p[w]);
            if !mass.is_positive() {
                return Ok(false);
            }
            let beliefs = s.cell_beliefs(agent, c)?;
            for &w in cell {
                if &p[w] / &mass != beliefs[w] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Outcome of the agreement check for one event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementReport {
    /// True when no state commonly knows a disagreeing posterior pair.
    pub holds: bool,
    /// A commonly-known shared posterior, when some state commonly knows
    /// that both agents assign the same value: (state label, value).
    pub common_posterior: Option<(String, Q)>,
    /// A violating state and the disagreeing pair, when `holds` is false.
    pub violation: Option<(String, Q, Q)>,
}

/// Checks that two like-minded agents cannot commonly know a disagreement
/// about the probability of `e`. Posteriors come from each agent's stored
/// cell beliefs; the structure must admit a common prior.
pub fn agreement_holds(
    s: &EpistemicStructure,
    e: &Event,
) -> Result<AgreementReport, EpistemicError> {
    if s.num_agents() != 2 {
        return Err(EpistemicError::UnknownAgent(2));
    }
    if common_prior(s)?.is_none() {
        return Err(EpistemicError::NoCommonPrior);
    }
    let posterior = |agent: usize, w: usize| -> Result<Q, EpistemicError> {
        let beliefs = s.beliefs_at(agent, w)?;
        Ok(e.iter().fold(q0(), |a, &x| a + &beliefs[x]))
    };
    let mut report = AgreementReport {
        holds: true,
        common_posterior: None,
        violation: None,
    };
    for cell in &ck_partition(s) {
        // posterior pair values across the CK cell
        let pairs: BTreeSet<(Q, Q)> = cell
            .iter()
            .map(|&w| Ok((posterior(0, w)?, posterior(1, w)?)))
            .collect::<Result<_, EpistemicError>>()?;
        if pairs.len() == 1 {
            let (p, q_) = pairs.first().unwrap().clone();
            // the pair is commonly known on this cell
            if p != q_ {
                report.holds = false;
                report.violation = Some((s.states[cell[0]].clone(), p, q_));
            } else if report.common_posterior.is_none() {
                report.common_posterior = Some((s.states[cell[0]].clone(), p));
            }
        }
    }
    Ok(report)
}

/// A plausibility order on states, as ordered levels (most plausible first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePlausibilityOrder {
    levels: Vec<Vec<usize>>,
}

impl StatePlausibilityOrder {
    pub fn new(s: &EpistemicStructure, levels: Vec<Vec<&str>>) -> Result<Self, EpistemicError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for level in levels {
            let mut ids = Vec::new();
            for label in level {
                let id = s.state_index(label)?;
                if !seen.insert(id) {
                    return Err(EpistemicError::BadLevels);
                }
                ids.push(id);
            }
            if ids.is_empty() {
                return Err(EpistemicError::BadLevels);
            }
            ids.sort_unstable();
            out.push(ids);
        }
        if seen.len() != s.num_states() {
            return Err(EpistemicError::BadLevels);
        }
        Ok(StatePlausibilityOrder { levels: out })
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Most plausible states within `e`.
    pub fn minima(&self, e: &Event) -> Event {
        for level in &self.levels {
            let hits: Event = level.iter().copied().filter(|w| e.contains(w)).collect();
            if !hits.is_empty() {
                return hits;
            }
        }
        Event::new()
    }
}

/// The AGM belief revision function rationalized by the order: for each item
/// of information `E`, the most plausible states of `E`.
pub fn agm_revise(
    order: &StatePlausibilityOrder,
    items: &[Event],
) -> Result<Vec<(Event, Event)>, EpistemicError> {
    let mut out = Vec::new();
    for e in items {
        if e.is_empty() {
            return Err(EpistemicError::EmptyInformation);
        }
        out.push((e.clone(), order.minima(e)));
    }
    Ok(out)
}

/// Checks Arrow's Axiom on a belief revision function given as (E, f(E))
/// pairs: whenever `E ⊆ F` and `E` meets `f(F)`, `f(E) = E ∩ f(F)`.
pub fn check_arrow(f: &[(Event, Event)]) -> bool {
    for (e, fe) in f {
        for (g, fg) in f {
            if e.is_subset(g) {
                let inter: Event = e.intersection(fg).copied().collect();
                if !inter.is_empty() && *fe != inter {
                    return false;
                }
            }
        }
    }
    true
}

/// Probabilistic AGM revision: conditions the full-support distribution `p0`
/// on the revision output for each item of information.
pub fn probabilistic_revision(
    order: &StatePlausibilityOrder,
    p0: &[Q],
    items: &[Event],
) -> Result<Vec<(Event, Vec<Q>)>, EpistemicError> {
    if let Some(i) = p0.iter().position(|x| !x.is_positive()) {
        return Err(EpistemicError::NotFullSupport(i.to_string()));
    }
    let revised = agm_revise(order, items)?;
    revised
        .into_iter()
        .map(|(e, fe)| Ok((e, condition(p0, &fe)?)))
        .collect()
}

/// A model of a strategic-form game: an epistemic structure with beliefs plus
/// a strategy assignment, constant on each player's cells.
#[derive(Clone, Debug)]
pub struct GameModel {
    pub structure: EpistemicStructure,
    pub game: StrategicGame,
    /// Per player, per state: index of the strategy played there.
    pub assignment: Vec<Vec<usize>>,
}

impl GameModel {
    pub fn new(
        structure: EpistemicStructure,
        game: StrategicGame,
        assignment_labels: Vec<Vec<&str>>,
    ) -> Result<Self, EpistemicError> {
        let n = structure.num_states();
        let mut assignment = Vec::new();
        for (player, labels) in assignment_labels.iter().enumerate() {
            assert_eq!(labels.len(), n, "one strategy per state");
            let ids: Vec<usize> = labels
                .iter()
                .map(|l| {
                    game.strategy_index(player, l)
                        .map_err(|_| EpistemicError::UnknownState((*l).to_string()))
                })
                .collect::<Result<_, _>>()?;
            for cell in structure.cells(player) {
                if cell.iter().map(|&w| ids[w]).collect::<BTreeSet<_>>().len() > 1 {
                    return Err(EpistemicError::InconsistentAssignment(player));
                }
            }
            assignment.push(ids);
        }
        Ok(GameModel {
            structure,
            game,
            assignment,
        })
    }

    /// Expected payoff to `player` at state `w` from playing `strategy`
    /// (index), given her beliefs about the opponents' assigned strategies.
    fn expected_payoff(&self, player: usize, w: usize, strategy: usize) -> Q {
        let beliefs = self
            .structure
            .beliefs_at(player, w)
            .expect("model carries beliefs");
        let mut acc = q0();
        for (x, p) in beliefs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut profile: Vec<usize> = (0..self.game.num_players())
                .map(|j| self.assignment[j][x])
                .collect();
            profile[player] = strategy;
            acc += p * self.game.payoff_of(&profile, player);
        }
        acc
    }
}

/// The event that `player` is rational: her assigned strategy maximizes
/// expected payoff under her beliefs at the state.
pub fn rationality_event(model: &GameModel, player: usize) -> Event {
    let n = model.structure.num_states();
    (0..n)
        .filter(|&w| {
            let played = model.assignment[player][w];
            let current = model.expected_payoff(player, w, played);
            (0..model.game.strategies(player).len())
                .all(|alt| model.expected_payoff(player, w, alt) <= current)
        })
        .collect()
}

/// States where every player is rational.
pub fn all_rational(model: &GameModel) -> Event {
    let mut r: Event = (0..model.structure.num_states()).collect();
    for p in 0..model.game.num_players() {
        let rp = rationality_event(model, p);
        r = r.intersection(&rp).copied().collect();
    }
    r
}

/// States where rationality of all players is common knowledge.
pub fn ckr_states(model: &GameModel) -> Event {
    ck(&model.structure, &all_rational(model))
}

/// Builds a model whose states are the survivors of iterated deletion of
/// strategies strictly dominated by mixtures, with each player's cells
/// grouping states by her own strategy and beliefs chosen from the
/// best-response feasibility region (lexicographically first vertex). In the
/// resulting model rationality is common knowledge everywhere.
pub fn build_ckr_model(game: &StrategicGame) -> GameModel {
    let trace = crate::strategic::iterated_deletion(game, DeletionMode::StrictMixed);
    let survivor_idx: Vec<Vec<usize>> = trace
        .survivors
        .iter()
        .enumerate()
        .map(|(p, labels)| {
            labels
                .iter()
                .map(|l| game.strategy_index(p, l).unwrap())
                .collect()
        })
        .collect();
    let profiles: Vec<Vec<usize>> = survivor_idx
        .iter()
        .map(|s| s.iter().copied())
        .multi_cartesian_product()
        .collect();
    let states: Vec<String> = profiles
        .iter()
        .map(|prof| {
            prof.iter()
                .enumerate()
                .map(|(p, &s)| game.strategies(p)[s].clone())
                .join(",")
        })
        .collect();
    let nplayers = game.num_players();
    // cells: group states by own strategy
    let mut partitions: Vec<Vec<Vec<String>>> = Vec::new();
    let mut cell_members: Vec<Vec<Vec<usize>>> = Vec::new();
    for p in 0..nplayers {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (w, prof) in profiles.iter().enumerate() {
            groups.entry(prof[p]).or_default().push(w);
        }
        let members: Vec<Vec<usize>> = groups.values().cloned().collect();
        partitions.push(
            members
                .iter()
                .map(|ws| ws.iter().map(|&w| states[w].clone()).collect())
                .collect(),
        );
        cell_members.push(members);
    }
    // beliefs: per player per cell, the supporting belief over the opponents'
    // survivor product mapped onto cell states
    let mut beliefs: Vec<Vec<Vec<(String, Q)>>> = Vec::new();
    for p in 0..nplayers {
        let mut per_cell = Vec::new();
        for members in &cell_members[p] {
            let own = profiles[members[0]][p];
            let belief = supporting_belief(game, p, own, &survivor_idx)
                .expect("survivors admit supporting beliefs");
            // belief is over opponents' label profiles; map to cell states
            let mut entries = Vec::new();
            for (opp_labels, prob) in &belief {
                let target = members
                    .iter()
                    .find(|&&w| {
                        let prof = &profiles[w];
                        let mut labels = Vec::new();
                        for (j, &s) in prof.iter().enumerate() {
                            if j != p {
                                labels.push(game.strategies(j)[s].clone());
                            }
                        }
                        labels == *opp_labels
                    })
                    .expect("every opponent profile appears in the cell");
                entries.push((states[*target].clone(), prob.clone()));
            }
            per_cell.push(entries);
        }
        beliefs.push(per_cell);
    }
    let structure = EpistemicStructure::new(states.clone(), partitions, Some(beliefs))
        .expect("construction is a valid structure");
    let assignment_labels: Vec<Vec<&str>> = (0..nplayers)
        .map(|p| {
            profiles
                .iter()
                .map(|prof| game.strategies(p)[prof[p]].as_str())
                .collect()
        })
        .collect();
    GameModel::new(structure, game.clone(), assignment_labels)
        .expect("assignment constant on cells by construction")
}

/// Pretty-prints a distribution over states.
pub fn describe_distribution(s: &EpistemicStructure, p: &[Q]) -> String {
    p.iter()
        .enumerate()
        .filter(|(_, v)| v.is_positive())
        .map(|(w, v)| format!("{}@{}", s.states()[w], fmt_q(v)))
        .join(", ")
}
