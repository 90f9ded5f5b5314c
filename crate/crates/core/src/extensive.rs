//! History-based extensive forms with imperfect information and chance moves.
//!
//! A history is the sequence of actions leading from the root to a node; the
//! set of histories is prefix-closed and the null history is the root. Each
//! decision history is owned by a player or by chance, and each player's
//! decision histories are partitioned into information sets.

use crate::num::{fmt_q, q0, q1, Q};
use crate::strategic::{self, MixedEquilibrium, StrategicGame};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type HistoryId = usize;
pub const ROOT: HistoryId = 0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EfError {
    #[error("history {0} not found")]
    NoSuchHistory(String),
    #[error("form is invalid: {0}")]
    Invalid(String),
    #[error("operation requires perfect information, but {0} is in a non-singleton information set")]
    ImperfectInformation(String),
    #[error("solution cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("no equilibrium found in the subgame rooted at `{0}`")]
    UnresolvedSubgame(String),
    #[error("win/lose solving requires exactly two players")]
    NotTwoPlayer,
    #[error("terminal `{0}` has no outcome label")]
    MissingOutcome(String),
    #[error("player {0} out of range")]
    BadPlayer(usize),
    #[error("bad behavioral strategy: {0}")]
    BadBehavioral(String),
}

/// Who moves at a decision history.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    Player(usize),
    Chance,
}

/// Tree node description used to construct forms.
#[derive(Clone, Debug)]
pub enum Node {
    Terminal(Vec<Q>),
    Decision {
        player: usize,
        actions: Vec<(String, Node)>,
    },
    Chance {
        actions: Vec<(String, Q, Node)>,
    },
}

#[derive(Clone, Debug)]
struct HistoryNode {
    parent: Option<(HistoryId, usize)>, // (parent id, action index at parent)
    actions: Vec<String>,
    children: Vec<HistoryId>,
    owner: Option<Owner>,
    chance_probs: Option<Vec<Q>>,
    payoffs: Option<Vec<Q>>,
    info_set: usize, // meaningful for player-owned histories
}

/// An information set: a player, shared available actions, member histories.
#[derive(Clone, Debug)]
pub struct InfoSet {
    pub player: usize,
    pub actions: Vec<String>,
    pub members: Vec<HistoryId>,
}

/// A finite extensive form with payoffs at terminal histories.
#[derive(Clone, Debug)]
pub struct ExtensiveForm {
    players: Vec<String>,
    nodes: Vec<HistoryNode>,
    info_sets: Vec<InfoSet>,
}

impl ExtensiveForm {
    /// Builds a form from a tree description. `info_groups` lists, per group,
    /// the histories (as action paths) that share one information set; every
    /// unlisted decision history gets a singleton set.
    pub fn from_tree(
        players: Vec<String>,
        root: Node,
        info_groups: &[Vec<Vec<&str>>],
    ) -> Result<ExtensiveForm, EfError> {
        let mut ef = ExtensiveForm {
            players,
            nodes: Vec::new(),
            info_sets: Vec::new(),
        };
        ef.insert(None, root)?;
        // default: one singleton info set per player-owned decision history
        let mut path_to_id: BTreeMap<Vec<String>, HistoryId> = BTreeMap::new();
        for id in 0..ef.nodes.len() {
            path_to_id.insert(ef.path(id), id);
        }
        let mut grouped: BTreeSet<HistoryId> = BTreeSet::new();
        for group in info_groups {
            let ids: Vec<HistoryId> = group
                .iter()
                .map(|p| {
                    let key: Vec<String> = p.iter().map(|s| s.to_string()).collect();
                    path_to_id
                        .get(&key)
                        .copied()
                        .ok_or_else(|| EfError::NoSuchHistory(p.join(".")))
                })
                .collect::<Result<_, _>>()?;
            let first = ids[0];
            let owner = ef.nodes[first].owner;
            let Some(Owner::Player(pl)) = owner else {
                return Err(EfError::Invalid(format!(
                    "history `{}` in an information group is not a player decision",
                    ef.label(first)
                )));
            };
            let set_id = ef.info_sets.len();
            ef.info_sets.push(InfoSet {
                player: pl,
                actions: ef.nodes[first].actions.clone(),
                members: ids.clone(),
            });
            for id in ids {
                ef.nodes[id].info_set = set_id;
                grouped.insert(id);
            }
        }
        for id in 0..ef.nodes.len() {
            if let Some(Owner::Player(pl)) = ef.nodes[id].owner {
                if !grouped.contains(&id) {
                    let set_id = ef.info_sets.len();
                    ef.info_sets.push(InfoSet {
                        player: pl,
                        actions: ef.nodes[id].actions.clone(),
                        members: vec![id],
                    });
                    ef.nodes[id].info_set = set_id;
                }
            }
        }
        Ok(ef)
    }

    fn insert(&mut self, parent: Option<(HistoryId, usize)>, node: Node) -> Result<HistoryId, EfError> {
        let id = self.nodes.len();
        match node {
            Node::Terminal(payoffs) => {
                self.nodes.push(HistoryNode {
                    parent,
                    actions: vec![],
                    children: vec![],
                    owner: None,
                    chance_probs: None,
                    payoffs: Some(payoffs),
                    info_set: usize::MAX,
                });
            }
            Node::Decision { player, actions } => {
                if player >= self.players.len() {
                    return Err(EfError::BadPlayer(player));
                }
                self.nodes.push(HistoryNode {
                    parent,
                    actions: actions.iter().map(|(a, _)| a.clone()).collect(),
                    children: vec![],
                    owner: Some(Owner::Player(player)),
                    chance_probs: None,
                    payoffs: None,
                    info_set: usize::MAX,
                });
                for (k, (_, child)) in actions.into_iter().enumerate() {
                    let cid = self.insert(Some((id, k)), child)?;
                    self.nodes[id].children.push(cid);
                }
            }
            Node::Chance { actions } => {
                self.nodes.push(HistoryNode {
                    parent,
                    actions: actions.iter().map(|(a, _, _)| a.clone()).collect(),
                    children: vec![],
                    owner: Some(Owner::Chance),
                    chance_probs: Some(actions.iter().map(|(_, p, _)| p.clone()).collect()),
                    payoffs: None,
                    info_set: usize::MAX,
                });
                for (k, (_, _, child)) in actions.into_iter().enumerate() {
                    let cid = self.insert(Some((id, k)), child)?;
                    self.nodes[id].children.push(cid);
                }
            }
        }
        Ok(id)
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_histories(&self) -> usize {
        self.nodes.len()
    }

    pub fn histories(&self) -> impl Iterator<Item = HistoryId> {
        0..self.nodes.len()
    }

    pub fn is_terminal(&self, h: HistoryId) -> bool {
        self.nodes[h].payoffs.is_some()
    }

    pub fn terminals(&self) -> impl Iterator<Item = HistoryId> + '_ {
        self.histories().filter(|&h| self.is_terminal(h))
    }

    pub fn decisions(&self) -> impl Iterator<Item = HistoryId> + '_ {
        self.histories().filter(|&h| !self.is_terminal(h))
    }

    pub fn owner(&self, h: HistoryId) -> Option<Owner> {
        self.nodes[h].owner
    }

    pub fn payoffs(&self, h: HistoryId) -> Option<&[Q]> {
        self.nodes[h].payoffs.as_deref()
    }

    pub fn actions(&self, h: HistoryId) -> &[String] {
        &self.nodes[h].actions
    }

    pub fn child(&self, h: HistoryId, action_idx: usize) -> HistoryId {
        self.nodes[h].children[action_idx]
    }

    pub fn children(&self, h: HistoryId) -> &[HistoryId] {
        &self.nodes[h].children
    }

    pub fn parent(&self, h: HistoryId) -> Option<(HistoryId, usize)> {
        self.nodes[h].parent
    }

    pub fn chance_probs(&self, h: HistoryId) -> Option<&[Q]> {
        self.nodes[h].chance_probs.as_deref()
    }

    /// Index of the information set containing decision history `h`.
    pub fn info_set_of(&self, h: HistoryId) -> usize {
        debug_assert!(!self.is_terminal(h));
        self.nodes[h].info_set
    }

    pub fn info_sets(&self) -> &[InfoSet] {
        &self.info_sets
    }

    pub fn info_set(&self, idx: usize) -> &InfoSet {
        &self.info_sets[idx]
    }

    /// Action path of `h` from the root.
    pub fn path(&self, h: HistoryId) -> Vec<String> {
        let mut rev = Vec::new();
        let mut cur = h;
        while let Some((p, k)) = self.nodes[cur].parent {
            rev.push(self.nodes[p].actions[k].clone());
            cur = p;
        }
        rev.reverse();
        rev
    }

    /// Printable label of `h`: dotted action path, or `-` for the root.
    pub fn label(&self, h: HistoryId) -> String {
        let p = self.path(h);
        if p.is_empty() {
            "-".to_string()
        } else {
            p.join(".")
        }
    }

    /// Looks a history up by its action path.
    pub fn history(&self, path: &[&str]) -> Result<HistoryId, EfError> {
        let mut cur = ROOT;
        for step in path {
            let k = self.nodes[cur]
                .actions
                .iter()
                .position(|a| a == step)
                .ok_or_else(|| EfError::NoSuchHistory(path.join(".")))?;
            cur = self.nodes[cur].children[k];
        }
        Ok(cur)
    }

    pub fn is_prefix_of(&self, h: HistoryId, g: HistoryId) -> bool {
        let mut cur = g;
        loop {
            if cur == h {
                return true;
            }
            match self.nodes[cur].parent {
                Some((p, _)) => cur = p,
                None => return false,
            }
        }
    }

    /// All histories in the subtree rooted at `h` (including `h`).
    pub fn subtree(&self, h: HistoryId) -> Vec<HistoryId> {
        let mut out = vec![h];
        let mut stack = vec![h];
        while let Some(cur) = stack.pop() {
            for &c in &self.nodes[cur].children {
                out.push(c);
                stack.push(c);
            }
        }
        out.sort_unstable();
        out
    }

    /// True iff every information set is a singleton.
    pub fn perfect_information(&self) -> bool {
        self.info_sets.iter().all(|s| s.members.len() == 1)
    }

    /// Structural diagnostics; an empty list means the form is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        for (idx, node) in self.nodes.iter().enumerate() {
            if let Some(p) = &node.payoffs {
                if p.len() != self.players.len() {
                    diags.push(format!(
                        "terminal `{}` has {} payoffs for {} players",
                        self.label(idx),
                        p.len(),
                        self.players.len()
                    ));
                }
            }
            if let Some(probs) = &node.chance_probs {
                if probs.iter().any(|p| !p.is_positive()) {
                    diags.push(format!(
                        "chance history `{}` has a non-positive branch probability",
                        self.label(idx)
                    ));
                }
                if !probs.iter().fold(q0(), |a, b| a + b).is_one() {
                    diags.push(format!(
                        "chance probabilities at `{}` do not sum to 1",
                        self.label(idx)
                    ));
                }
            }
        }
        for set in &self.info_sets {
            for &m in &set.members {
                if self.nodes[m].actions != set.actions {
                    diags.push(format!(
                        "history `{}` has actions {:?} but its information set has {:?}",
                        self.label(m),
                        self.nodes[m].actions,
                        set.actions
                    ));
                }
            }
            for (&a, &b) in set.members.iter().tuple_combinations() {
                if self.is_prefix_of(a, b) || self.is_prefix_of(b, a) {
                    diags.push(format!(
                        "histories `{}` and `{}` share an information set but one precedes the other",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        // perfect recall: if h1, h2 are decision histories of player i,
        // a in A(h1) and h1a is a prefix of h2, then every h' in I(h2) has a
        // predecessor h in I(h1) with ha a prefix of h'
        for set1 in &self.info_sets {
            for set2 in &self.info_sets {
                if set1.player != set2.player {
                    continue;
                }
                for &h1 in &set1.members {
                    for (k, _) in self.nodes[h1].actions.iter().enumerate() {
                        let h1a = self.nodes[h1].children[k];
                        for &h2 in &set2.members {
                            if !self.is_prefix_of(h1a, h2) {
                                continue;
                            }
                            for &hp in &set2.members {
                                let ok = set1.members.iter().any(|&h| {
                                    let ha = self.nodes[h].children[k];
                                    self.is_prefix_of(ha, hp)
                                });
                                if !ok {
                                    diags.push(format!(
                                        "perfect recall fails for player {}: `{}` follows action `{}` at `{}` but `{}` in the same information set does not",
                                        self.players[set1.player],
                                        self.label(h2),
                                        self.nodes[h1].actions[k],
                                        self.label(h1),
                                        self.label(hp)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        diags.sort();
        diags.dedup();
        diags
    }
}

/// A pure strategy: one action index per information set of the player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PureStrategy {
    pub player: usize,
    pub choice: BTreeMap<usize, usize>, // info set -> action index
}

impl PureStrategy {
    pub fn describe(&self, ef: &ExtensiveForm) -> String {
        if self.choice.is_empty() {
            return "·".to_string();
        }
        let parts: Vec<String> = self
            .choice
            .iter()
            .map(|(&set, &a)| ef.info_set(set).actions[a].clone())
            .collect();
        parts.join(".")
    }
}

/// A behavioral strategy: one distribution over actions per information set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehavioralStrategy {
    pub player: usize,
    pub mix: BTreeMap<usize, Vec<Q>>, // info set -> distribution over actions
}

impl BehavioralStrategy {
    pub fn validate(&self, ef: &ExtensiveForm) -> Result<(), EfError> {
        for (&set, probs) in &self.mix {
            let info = ef.info_set(set);
            if info.player != self.player {
                return Err(EfError::BadBehavioral(format!(
                    "information set {set} belongs to another player"
                )));
            }
            if probs.len() != info.actions.len()
                || probs.iter().any(|p| p.is_negative())
                || !probs.iter().fold(q0(), |a, b| a + b).is_one()
            {
                return Err(EfError::BadBehavioral(format!(
                    "distribution at information set {set} is not a distribution over its actions"
                )));
            }
        }
        Ok(())
    }

    pub fn pure(ef: &ExtensiveForm, s: &PureStrategy) -> BehavioralStrategy {
        let mix = s
            .choice
            .iter()
            .map(|(&set, &a)| {
                let mut probs = vec![q0(); ef.info_set(set).actions.len()];
                probs[a] = q1();
                (set, probs)
            })
            .collect();
        BehavioralStrategy {
            player: s.player,
            mix,
        }
    }
}

/// A behavioral profile: one behavioral strategy per player (chance behavior
/// is fixed by the form).
pub type BehavioralProfile = Vec<BehavioralStrategy>;

/// Probability that the profile assigns to the action leading into child `k`
/// of decision history `h`.
pub fn edge_prob(ef: &ExtensiveForm, profile: &BehavioralProfile, h: HistoryId, k: usize) -> Q {
    match ef.owner(h).expect("decision history") {
        Owner::Chance => ef.chance_probs(h).unwrap()[k].clone(),
        Owner::Player(pl) => {
            let set = ef.info_set_of(h);
            profile[pl]
                .mix
                .get(&set)
                .map(|probs| probs[k].clone())
                .unwrap_or_else(q0)
        }
    }
}

/// Probability of reaching `target` from `from` under the profile.
pub fn reach_probability(
    ef: &ExtensiveForm,
    profile: &BehavioralProfile,
    from: HistoryId,
    target: HistoryId,
) -> Q {
    if !ef.is_prefix_of(from, target) {
        return q0();
    }
    let mut prob = q1();
    let mut cur = target;
    while cur != from {
        let (p, k) = ef.parent(cur).expect("from is a prefix");
        prob *= edge_prob(ef, profile, p, k);
        cur = p;
    }
    prob
}

/// Distribution over terminal histories induced by the profile from the root.
pub fn outcome_distribution(
    ef: &ExtensiveForm,
    profile: &BehavioralProfile,
) -> Vec<(HistoryId, Q)> {
    ef.terminals()
        .map(|z| (z, reach_probability(ef, profile, ROOT, z)))
        .collect()
}

/// Expected payoff vector from history `from` under the profile.
pub fn expected_payoffs_from(
    ef: &ExtensiveForm,
    profile: &BehavioralProfile,
    from: HistoryId,
) -> Vec<Q> {
    let mut acc = vec![q0(); ef.num_players()];
    let mut stack = vec![(from, q1())];
    while let Some((h, prob)) = stack.pop() {
        if prob.is_zero() {
            continue;
        }
        if let Some(pay) = ef.payoffs(h) {
            for (a, v) in acc.iter_mut().zip(pay) {
                *a += &prob * v;
            }
        } else {
            for k in 0..ef.children(h).len() {
                let p = edge_prob(ef, profile, h, k);
                stack.push((ef.child(h, k), &prob * p));
            }
        }
    }
    acc
}

/// All pure strategies of a player, in canonical info-set order.
pub fn pure_strategies(ef: &ExtensiveForm, player: usize) -> Vec<PureStrategy> {
    let sets: Vec<usize> = (0..ef.info_sets().len())
        .filter(|&s| ef.info_set(s).player == player)
        .collect();
    if sets.is_empty() {
        return vec![PureStrategy {
            player,
            choice: BTreeMap::new(),
        }];
    }
    sets.iter()
        .map(|&s| 0..ef.info_set(s).actions.len())
        .multi_cartesian_product()
        .map(|choices| PureStrategy {
            player,
            choice: sets.iter().copied().zip(choices).collect(),
        })
        .collect()
}

/// A mixed strategy over pure strategies of one player.
#[derive(Clone, Debug)]
pub struct ExtensiveMixed {
    pub player: usize,
    pub probs: Vec<(PureStrategy, Q)>,
}

/// Converts a mixed strategy to a realization-equivalent behavioral strategy.
/// At information sets the player's own mixture makes unreachable, the
/// distribution is uniform.
pub fn behavioral_from_mixed(
    ef: &ExtensiveForm,
    m: &ExtensiveMixed,
) -> Result<BehavioralStrategy, EfError> {
    let diags = ef.validate();
    if !diags.is_empty() {
        return Err(EfError::Invalid(diags.join("; ")));
    }
    let player = m.player;
    let mut mix = BTreeMap::new();
    for (set_id, set) in ef.info_sets().iter().enumerate() {
        if set.player != player {
            continue;
        }
        // own actions on the path to the set (identical across members under
        // perfect recall): (info set, action index) pairs
        let member = set.members[0];
        let mut own_path = Vec::new();
        let mut cur = member;
        while let Some((p, k)) = ef.parent(cur) {
            if let Some(Owner::Player(pl)) = ef.owner(p) {
                if pl == player {
                    own_path.push((ef.info_set_of(p), k));
                }
            }
            cur = p;
        }
        let consistent = |s: &PureStrategy| {
            own_path
                .iter()
                .all(|&(iset, k)| s.choice.get(&iset) == Some(&k))
        };
        let total: Q = m
            .probs
            .iter()
            .filter(|(s, _)| consistent(s))
            .fold(q0(), |a, (_, p)| a + p);
        let n = set.actions.len();
        let probs = if total.is_zero() {
            vec![q1() / Q::from_integer((n as i64).into()); n]
        } else {
            (0..n)
                .map(|a| {
                    let mass: Q = m
                        .probs
                        .iter()
                        .filter(|(s, _)| consistent(s) && s.choice.get(&set_id) == Some(&a))
                        .fold(q0(), |acc, (_, p)| acc + p);
                    mass / &total
                })
                .collect()
        };
        mix.insert(set_id, probs);
    }
    Ok(BehavioralStrategy { player, mix })
}

/// Induced strategic form: pure strategies per player, expected payoffs over
/// chance. Also returns the pure strategies backing each label.
pub fn to_strategic_form(ef: &ExtensiveForm) -> (StrategicGame, Vec<Vec<PureStrategy>>) {
    let all: Vec<Vec<PureStrategy>> = (0..ef.num_players())
        .map(|p| pure_strategies(ef, p))
        .collect();
    let labels: Vec<Vec<String>> = all
        .iter()
        .map(|ss| ss.iter().map(|s| s.describe(ef)).collect())
        .collect();
    let mut table = BTreeMap::new();
    for combo in all
        .iter()
        .map(|ss| ss.iter())
        .multi_cartesian_product()
    {
        let profile: BehavioralProfile = combo
            .iter()
            .map(|s| BehavioralStrategy::pure(ef, s))
            .collect();
        let pay = expected_payoffs_from(ef, &profile, ROOT);
        let key: Vec<String> = combo.iter().map(|s| s.describe(ef)).collect();
        table.insert(key, pay);
    }
    let game = StrategicGame::new(ef.players().to_vec(), labels, table)
        .expect("profile enumeration is total");
    (game, all)
}

/// All backward-induction solutions of a perfect-information game, as pure
/// profiles; enumeration of tie-breaking selections is capped.
pub fn backward_induction(
    ef: &ExtensiveForm,
    cap: usize,
) -> Result<Vec<Vec<PureStrategy>>, EfError> {
    if !ef.perfect_information() {
        let set = ef
            .info_sets()
            .iter()
            .find(|s| s.members.len() > 1)
            .unwrap();
        return Err(EfError::ImperfectInformation(
            ef.label(set.members[0]),
        ));
    }
    // options(h): list of (choice map over info sets in subtree, payoff vector)
    fn options(
        ef: &ExtensiveForm,
        h: HistoryId,
        cap: usize,
    ) -> Result<Vec<(BTreeMap<usize, usize>, Vec<Q>)>, EfError> {
        if let Some(pay) = ef.payoffs(h) {
            return Ok(vec![(BTreeMap::new(), pay.to_vec())]);
        }
        let child_opts: Vec<Vec<(BTreeMap<usize, usize>, Vec<Q>)>> = ef
            .children(h)
            .iter()
            .map(|&c| options(ef, c, cap))
            .collect::<Result<_, _>>()?;
        match ef.owner(h).unwrap() {
            Owner::Chance => {
                let probs = ef.chance_probs(h).unwrap().to_vec();
                let mut out = Vec::new();
                for combo in child_opts.iter().map(|v| v.iter()).multi_cartesian_product() {
                    let mut choice = BTreeMap::new();
                    let mut pay = vec![q0(); ef.num_players()];
                    for (k, (cmap, cpay)) in combo.iter().enumerate() {
                        choice.extend(cmap.iter().map(|(&a, &b)| (a, b)));
                        for (acc, v) in pay.iter_mut().zip(cpay.iter()) {
                            *acc += &probs[k] * v;
                        }
                    }
                    out.push((choice, pay));
                    if out.len() > cap {
                        return Err(EfError::CapExceeded(cap));
                    }
                }
                Ok(out)
            }
            Owner::Player(pl) => {
                // the mover picks a maximizing child; other branches still
                // need a plan, so cross all children's selections
                let mut out = Vec::new();
                for combo in child_opts.iter().map(|v| v.iter()).multi_cartesian_product() {
                    let best = combo
                        .iter()
                        .map(|(_, pay)| pay[pl].clone())
                        .max()
                        .expect("nonempty action set");
                    for (k, (_, pay)) in combo.iter().enumerate() {
                        if pay[pl] == best {
                            let mut choice = BTreeMap::new();
                            for (cmap, _) in combo.iter() {
                                choice.extend(cmap.iter().map(|(&a, &b)| (a, b)));
                            }
                            choice.insert(ef.info_set_of(h), k);
                            out.push((choice, combo[k].1.clone()));
                            if out.len() > cap {
                                return Err(EfError::CapExceeded(cap));
                            }
                        }
                    }
                }
                // identical plans can arise via different tie paths
                out.sort_by(|a, b| a.0.cmp(&b.0));
                out.dedup_by(|a, b| a.0 == b.0);
                Ok(out)
            }
        }
    }
    let opts = options(ef, ROOT, cap)?;
    let mut profiles = Vec::new();
    for (choice, _) in opts {
        let profile: Vec<PureStrategy> = (0..ef.num_players())
            .map(|p| PureStrategy {
                player: p,
                choice: choice
                    .iter()
                    .filter(|(&set, _)| ef.info_set(set).player == p)
                    .map(|(&set, &a)| (set, a))
                    .collect(),
            })
            .collect();
        profiles.push(profile);
    }
    profiles.sort_by(|a, b| {
        a.iter()
            .map(|s| s.choice.clone())
            .collect::<Vec<_>>()
            .cmp(&b.iter().map(|s| s.choice.clone()).collect::<Vec<_>>())
    });
    profiles.dedup();
    Ok(profiles)
}

/// Proper subgames, each flagged minimal.
pub fn subgames(ef: &ExtensiveForm) -> Vec<(HistoryId, bool)> {
    let mut roots = Vec::new();
    for h in ef.decisions() {
        if h == ROOT {
            continue;
        }
        if let Some(Owner::Player(_)) = ef.owner(h) {
            if ef.info_set(ef.info_set_of(h)).members.len() != 1 {
                continue;
            }
        }
        let inside: BTreeSet<HistoryId> = ef.subtree(h).into_iter().collect();
        let cuts = ef.info_sets().iter().any(|set| {
            let members_in = set.members.iter().filter(|m| inside.contains(m)).count();
            members_in > 0 && members_in < set.members.len()
        });
        if !cuts {
            roots.push(h);
        }
    }
    roots
        .iter()
        .map(|&r| {
            let minimal = !roots
                .iter()
                .any(|&other| other != r && ef.is_prefix_of(r, other));
            (r, minimal)
        })
        .collect()
}

/// Extracts the subgame rooted at `root` as a standalone form, returning the
/// new form plus a map from its info-set indices to the original ones.
pub fn subgame_at(ef: &ExtensiveForm, root: HistoryId) -> (ExtensiveForm, BTreeMap<usize, usize>) {
    fn clone_node(ef: &ExtensiveForm, h: HistoryId) -> Node {
        if let Some(pay) = ef.payoffs(h) {
            return Node::Terminal(pay.to_vec());
        }
        match ef.owner(h).unwrap() {
            Owner::Chance => Node::Chance {
                actions: ef
                    .actions(h)
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        (
                            a.clone(),
                            ef.chance_probs(h).unwrap()[k].clone(),
                            clone_node(ef, ef.child(h, k)),
                        )
                    })
                    .collect(),
            },
            Owner::Player(pl) => Node::Decision {
                player: pl,
                actions: ef
                    .actions(h)
                    .iter()
                    .enumerate()
                    .map(|(k, a)| (a.clone(), clone_node(ef, ef.child(h, k))))
                    .collect(),
            },
        }
    }
    let tree = clone_node(ef, root);
    let inside: BTreeSet<HistoryId> = ef.subtree(root).into_iter().collect();
    // groups: original info sets fully inside the subtree
    let root_path = ef.path(root);
    let mut groups: Vec<(usize, Vec<Vec<String>>)> = Vec::new();
    for (idx, set) in ef.info_sets().iter().enumerate() {
        if set.members.iter().all(|m| inside.contains(m)) {
            let rel_paths: Vec<Vec<String>> = set
                .members
                .iter()
                .map(|&m| {
                    let p = ef.path(m);
                    p[root_path.len()..].to_vec()
                })
                .collect();
            groups.push((idx, rel_paths));
        }
    }
    let group_refs: Vec<Vec<Vec<&str>>> = groups
        .iter()
        .map(|(_, paths)| {
            paths
                .iter()
                .map(|p| p.iter().map(|s| s.as_str()).collect())
                .collect()
        })
        .collect();
    let sub = ExtensiveForm::from_tree(ef.players().to_vec(), tree, &group_refs)
        .expect("subtree construction");
    // map: sub info set index -> original index. The first `groups.len()`
    // info sets of `sub` are the grouped ones in order; remaining singletons
    // are matched by member path.
    let mut map = BTreeMap::new();
    for (sub_idx, (orig_idx, _)) in groups.iter().enumerate() {
        map.insert(sub_idx, *orig_idx);
    }
    for sub_idx in groups.len()..sub.info_sets().len() {
        let member = sub.info_set(sub_idx).members[0];
        let mut full_path = root_path.clone();
        full_path.extend(sub.path(member));
        let path_refs: Vec<&str> = full_path.iter().map(|s| s.as_str()).collect();
        let orig = ef.history(&path_refs).expect("member path exists");
        map.insert(sub_idx, ef.info_set_of(orig));
    }
    (sub, map)
}

/// Replaces the subtree rooted at `root` with a terminal carrying `payoffs`.
fn replace_with_terminal(ef: &ExtensiveForm, root: HistoryId, payoffs: Vec<Q>) -> ExtensiveForm {
    fn clone_node(
        ef: &ExtensiveForm,
        h: HistoryId,
        cut: HistoryId,
        payoffs: &Vec<Q>,
    ) -> Node {
        if h == cut {
            return Node::Terminal(payoffs.clone());
        }
        if let Some(pay) = ef.payoffs(h) {
            return Node::Terminal(pay.to_vec());
        }
        match ef.owner(h).unwrap() {
            Owner::Chance => Node::Chance {
                actions: ef
                    .actions(h)
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        (
                            a.clone(),
                            ef.chance_probs(h).unwrap()[k].clone(),
                            clone_node(ef, ef.child(h, k), cut, payoffs),
                        )
                    })
                    .collect(),
            },
            Owner::Player(pl) => Node::Decision {
                player: pl,
                actions: ef
                    .actions(h)
                    .iter()
                    .enumerate()
                    .map(|(k, a)| (a.clone(), clone_node(ef, ef.child(h, k), cut, payoffs)))
                    .collect(),
            },
        }
    }
    let tree = clone_node(ef, ROOT, root, &payoffs);
    let removed: BTreeSet<HistoryId> = ef
        .subtree(root)
        .into_iter()
        .filter(|&h| h != root)
        .collect();
    let mut groups: Vec<Vec<Vec<String>>> = Vec::new();
    for set in ef.info_sets() {
        let survivors: Vec<HistoryId> = set
            .members
            .iter()
            .copied()
            .filter(|m| !removed.contains(m) && *m != root)
            .collect();
        if survivors.len() > 1 {
            groups.push(survivors.iter().map(|&m| ef.path(m)).collect());
        }
    }
    let group_refs: Vec<Vec<Vec<&str>>> = groups
        .iter()
        .map(|paths| {
            paths
                .iter()
                .map(|p| p.iter().map(|s| s.as_str()).collect())
                .collect()
        })
        .collect();
    ExtensiveForm::from_tree(ef.players().to_vec(), tree, &group_refs)
        .expect("reduction preserves structure")
}

/// A solved-equilibrium fragment: behavior at a set of original info sets,
/// plus the induced payoff vector.
#[derive(Clone, Debug)]
struct Fragment {
    behavior: BTreeMap<usize, Vec<Q>>, // original info set -> distribution
    payoffs: Vec<Q>,
}

/// Nash equilibria of a no-proper-subgame extensive form, each as behavior at
/// the form's information sets (relative indices) with its payoff vector.
fn flat_equilibria(
    ef: &ExtensiveForm,
    cap: usize,
) -> Result<Vec<(BTreeMap<usize, Vec<Q>>, Vec<Q>)>, EfError> {
    let (game, pures) = to_strategic_form(ef);
    let mut out = Vec::new();
    for profile in strategic::pure_nash(&game) {
        let strategies: Vec<&PureStrategy> = profile
            .iter()
            .enumerate()
            .map(|(p, label)| {
                let idx = game.strategy_index(p, label).unwrap();
                &pures[p][idx]
            })
            .collect();
        let mut behavior = BTreeMap::new();
        for s in &strategies {
            for (&set, &a) in &s.choice {
                let mut probs = vec![q0(); ef.info_set(set).actions.len()];
                probs[a] = q1();
                behavior.insert(set, probs);
            }
        }
        let bprofile: BehavioralProfile = strategies
            .iter()
            .map(|s| BehavioralStrategy::pure(ef, s))
            .collect();
        let payoffs = expected_payoffs_from(ef, &bprofile, ROOT);
        out.push((behavior, payoffs));
        if out.len() > cap {
            return Err(EfError::CapExceeded(cap));
        }
    }
    if out.is_empty() {
        // mixed fall-back: project out players with a single strategy and
        // solve the remaining two-player game exactly
        let active: Vec<usize> = (0..ef.num_players())
            .filter(|&p| game.strategies(p).len() > 1)
            .collect();
        if active.len() == 2 {
            let (p0, p1) = (active[0], active[1]);
            let rows = game.strategies(p0).to_vec();
            let cols = game.strategies(p1).to_vec();
            let table: Vec<Vec<(Q, Q)>> = (0..rows.len())
                .map(|i| {
                    (0..cols.len())
                        .map(|j| {
                            let mut profile = vec![0usize; ef.num_players()];
                            profile[p0] = i;
                            profile[p1] = j;
                            let pay = game.payoff(&profile);
                            (pay[p0].clone(), pay[p1].clone())
                        })
                        .collect()
                })
                .collect();
            let reduced = StrategicGame::two_player(rows, cols, table);
            for eq in strategic::mixed_nash_2p(&reduced).expect("two players by construction") {
                if let MixedEquilibrium::Isolated(m0, m1) = eq {
                    let mut behavior = BTreeMap::new();
                    let mut bprofile: Vec<BehavioralStrategy> = (0..ef.num_players())
                        .map(|p| BehavioralStrategy {
                            player: p,
                            mix: BTreeMap::new(),
                        })
                        .collect();
                    for (p, m) in [(p0, &m0), (p1, &m1)] {
                        let em = ExtensiveMixed {
                            player: p,
                            probs: m
                                .probs
                                .iter()
                                .enumerate()
                                .filter(|(_, pr)| pr.is_positive())
                                .map(|(i, pr)| (pures[p][i].clone(), pr.clone()))
                                .collect(),
                        };
                        let beh = behavioral_from_mixed(ef, &em)?;
                        for (&set, probs) in &beh.mix {
                            behavior.insert(set, probs.clone());
                        }
                        bprofile[p] = beh;
                    }
                    // single-strategy players still contribute their forced
                    // pure choices
                    for p in 0..ef.num_players() {
                        if !active.contains(&p) {
                            let forced = &pures[p][0];
                            let beh = BehavioralStrategy::pure(ef, forced);
                            for (&set, probs) in &beh.mix {
                                behavior.insert(set, probs.clone());
                            }
                            bprofile[p] = beh;
                        }
                    }
                    let payoffs = expected_payoffs_from(ef, &bprofile, ROOT);
                    out.push((behavior, payoffs));
                    if out.len() > cap {
                        return Err(EfError::CapExceeded(cap));
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(EfError::UnresolvedSubgame(ef.label(ROOT)));
    }
    Ok(out)
}

/// All subgame-perfect equilibria assembled by the recursive algorithm:
/// solve minimal proper subgames, replace them by their equilibrium payoffs,
/// repeat. Mixing is used where a subgame only has mixed equilibria (two
/// players). The enumeration of equilibrium selections is capped.
pub fn spe(ef: &ExtensiveForm, cap: usize) -> Result<Vec<BehavioralProfile>, EfError> {
    fn solve(ef: &ExtensiveForm, cap: usize) -> Result<Vec<Fragment>, EfError> {
        let subs = subgames(ef);
        let minimal: Vec<HistoryId> = {
            let mut m: Vec<HistoryId> = subs
                .iter()
                .filter(|(_, min)| *min)
                .map(|&(r, _)| r)
                .collect();
            m.sort_by_key(|&r| ef.path(r));
            m
        };
        if minimal.is_empty() {
            let flat = flat_equilibria(ef, cap)?;
            return Ok(flat
                .into_iter()
                .map(|(behavior, payoffs)| Fragment { behavior, payoffs })
                .collect());
        }
        // solve each minimal subgame independently
        let mut per_sub: Vec<Vec<Fragment>> = Vec::new();
        for &root in &minimal {
            let (sub, set_map) = subgame_at(ef, root);
            let eqs = flat_equilibria(&sub, cap)?;
            let frags = eqs
                .into_iter()
                .map(|(behavior, payoffs)| Fragment {
                    behavior: behavior
                        .into_iter()
                        .map(|(s, probs)| (set_map[&s], probs))
                        .collect(),
                    payoffs,
                })
                .collect();
            per_sub.push(frags);
        }
        let mut results = Vec::new();
        for combo in per_sub.iter().map(|v| v.iter()).multi_cartesian_product() {
            // reduce the game with the chosen equilibrium payoffs
            let mut reduced = ef.clone();
            // paths stay valid because we cut depth-first from the deepest
            // roots first; replace in reverse path order to be safe
            let mut pairs: Vec<(Vec<String>, &Fragment)> = minimal
                .iter()
                .zip(combo.iter())
                .map(|(&r, f)| (ef.path(r), *f))
                .collect();
            pairs.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
            for (path, frag) in &pairs {
                let refs: Vec<&str> = path.iter().map(|s| s.as_str()).collect();
                let root = reduced.history(&refs).expect("path survives reduction");
                reduced = replace_with_terminal(&reduced, root, frag.payoffs.clone());
            }
            // info-set indices survive by path; recompute mapping through paths
            let tails = solve(&reduced, cap)?;
            for tail in tails {
                // translate reduced info-set indices to original ones by path
                let mut behavior: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
                for (&rset, probs) in &tail.behavior {
                    let member = reduced.info_set(rset).members[0];
                    let p = reduced.path(member);
                    let refs: Vec<&str> = p.iter().map(|s| s.as_str()).collect();
                    let orig = ef.history(&refs).expect("reduced paths exist in original");
                    behavior.insert(ef.info_set_of(orig), probs.clone());
                }
                for frag in combo.iter() {
                    for (&set, probs) in &frag.behavior {
                        behavior.insert(set, probs.clone());
                    }
                }
                results.push(Fragment {
                    behavior,
                    payoffs: tail.payoffs,
                });
                if results.len() > cap {
                    return Err(EfError::CapExceeded(cap));
                }
            }
        }
        Ok(results)
    }

    let frags = solve(ef, cap)?;
    let mut out: Vec<BehavioralProfile> = Vec::new();
    for frag in frags {
        let profile: BehavioralProfile = (0..ef.num_players())
            .map(|p| BehavioralStrategy {
                player: p,
                mix: frag
                    .behavior
                    .iter()
                    .filter(|(&set, _)| ef.info_set(set).player == p)
                    .map(|(&set, probs)| (set, probs.clone()))
                    .collect(),
            })
            .collect();
        out.push(profile);
    }
    // canonical order and dedup
    out.sort_by_key(|prof| format!("{prof:?}"));
    out.dedup();
    Ok(out)
}

/// Best payoff `player` can get from `root` against the fixed behavior of
/// everyone else, maximizing over own pure strategies (at info sets fully
/// inside the subtree).
fn best_deviation_value(
    ef: &ExtensiveForm,
    profile: &BehavioralProfile,
    player: usize,
    root: HistoryId,
) -> Q {
    let inside: BTreeSet<HistoryId> = ef.subtree(root).into_iter().collect();
    let own_sets: Vec<usize> = (0..ef.info_sets().len())
        .filter(|&s| {
            ef.info_set(s).player == player
                && ef.info_set(s).members.iter().all(|m| inside.contains(m))
        })
        .collect();
    if own_sets.is_empty() {
        return expected_payoffs_from(ef, profile, root)[player].clone();
    }
    let mut best: Option<Q> = None;
    for choices in own_sets
        .iter()
        .map(|&s| 0..ef.info_set(s).actions.len())
        .multi_cartesian_product()
    {
        let mut dev = profile.clone();
        for (&s, &a) in own_sets.iter().zip(choices.iter()) {
            let mut probs = vec![q0(); ef.info_set(s).actions.len()];
            probs[a] = q1();
            dev[player].mix.insert(s, probs);
        }
        let v = expected_payoffs_from(ef, &dev, root)[player].clone();
        best = Some(match best {
            None => v,
            Some(b) => b.max(v),
        });
    }
    best.expect("nonempty choice product")
}

/// Whether the behavioral profile is a Nash equilibrium of the game rooted at
/// `root` (pure deviations suffice by multilinearity).
fn is_nash_from(ef: &ExtensiveForm, profile: &BehavioralProfile, root: HistoryId) -> bool {
    let current = expected_payoffs_from(ef, profile, root);
    for p in 0..ef.num_players() {
        if best_deviation_value(ef, profile, p, root) > current[p] {
            return false;
        }
    }
    true
}

/// Whether the profile is a subgame-perfect equilibrium: a Nash equilibrium
/// of the whole game whose restriction to every proper subgame is a Nash
/// equilibrium of that subgame.
pub fn is_spe(ef: &ExtensiveForm, profile: &BehavioralProfile) -> bool {
    if !is_nash_from(ef, profile, ROOT) {
        return false;
    }
    for (root, _) in subgames(ef) {
        if !is_nash_from(ef, profile, root) {
            return false;
        }
    }
    true
}

/// Label of a terminal in a two-player win/lose/draw game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WldOutcome {
    Win1,
    Win2,
    Draw,
}

/// Category of a solved win/lose/draw game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WldCategory {
    /// Player 1 has a winning strategy.
    Player1Wins,
    /// Player 2 has a winning strategy.
    Player2Wins,
    /// Both players can force at least a draw.
    Draw,
}

/// Result of solving a two-player perfect-information win/lose/draw game:
/// the category plus guaranteeing choice maps (info set -> action index).
#[derive(Clone, Debug)]
pub struct WldSolution {
    pub category: WldCategory,
    pub strategy1: BTreeMap<usize, usize>,
    pub strategy2: BTreeMap<usize, usize>,
}

/// Solves a two-player perfect-information game whose terminals carry
/// win/lose/draw labels.
pub fn solve_zermelo(
    ef: &ExtensiveForm,
    outcomes: &BTreeMap<HistoryId, WldOutcome>,
) -> Result<WldSolution, EfError> {
    if ef.num_players() != 2 {
        return Err(EfError::NotTwoPlayer);
    }
    if !ef.perfect_information() {
        let set = ef
            .info_sets()
            .iter()
            .find(|s| s.members.len() > 1)
            .unwrap();
        return Err(EfError::ImperfectInformation(ef.label(set.members[0])));
    }
    // value in {0 = win2, 1 = draw, 2 = win1}; player 1 maximizes
    fn value(
        ef: &ExtensiveForm,
        outcomes: &BTreeMap<HistoryId, WldOutcome>,
        h: HistoryId,
        s1: &mut BTreeMap<usize, usize>,
        s2: &mut BTreeMap<usize, usize>,
    ) -> Result<u8, EfError> {
        if ef.is_terminal(h) {
            return outcomes
                .get(&h)
                .map(|o| match o {
                    WldOutcome::Win2 => 0,
                    WldOutcome::Draw => 1,
                    WldOutcome::Win1 => 2,
                })
                .ok_or_else(|| EfError::MissingOutcome(ef.label(h)));
        }
        let Owner::Player(pl) = ef.owner(h).unwrap() else {
            return Err(EfError::Invalid(
                "win/lose solving does not support chance moves".into(),
            ));
        };
        let mut vals = Vec::new();
        for k in 0..ef.children(h).len() {
            vals.push(value(ef, outcomes, ef.child(h, k), s1, s2)?);
        }
        let (best_k, best_v) = vals
            .iter()
            .enumerate()
            .max_by_key(|&(_, v)| if pl == 0 { *v } else { 2 - *v })
            .map(|(k, v)| (k, *v))
            .unwrap();
        if pl == 0 {
            s1.insert(ef.info_set_of(h), best_k);
        } else {
            s2.insert(ef.info_set_of(h), best_k);
        }
        Ok(best_v)
    }
    let mut s1 = BTreeMap::new();
    let mut s2 = BTreeMap::new();
    let v = value(ef, outcomes, ROOT, &mut s1, &mut s2)?;
    let category = match v {
        2 => WldCategory::Player1Wins,
        0 => WldCategory::Player2Wins,
        _ => WldCategory::Draw,
    };
    Ok(WldSolution {
        category,
        strategy1: s1,
        strategy2: s2,
    })
}

/// Report on an alternating sum game: players take turns adding a number from
/// `1..=max_pick` to a running total starting at 0; whoever reaches `target`
/// or more wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumGameReport {
    /// 0-based index of the player with a winning strategy.
    pub winner: usize,
    /// Running totals from which the player about to move loses (with best
    /// play on both sides).
    pub losing_positions: Vec<u64>,
}

/// Solves the alternating sum game by dynamic programming on positions.
/// The mover at total `t` wins iff some pick reaches the target or lands the
/// opponent on a losing position.
pub fn solve_sum_game(target: u64, max_pick: u64) -> SumGameReport {
    assert!(target > 0 && max_pick > 0);
    let mut mover_wins = vec![false; target as usize];
    for t in (0..target).rev() {
        let mut win = false;
        for pick in 1..=max_pick {
            let next = t + pick;
            if next >= target || !mover_wins[next as usize] {
                win = true;
                break;
            }
        }
        mover_wins[t as usize] = win;
    }
    let losing_positions: Vec<u64> = (0..target).filter(|&t| !mover_wins[t as usize]).collect();
    let winner = if mover_wins[0] { 0 } else { 1 };
    SumGameReport {
        winner,
        losing_positions,
    }
}

/// Builds the explicit game tree of a small alternating sum game, labeling
/// terminals with the winner. Useful for cross-checking `solve_sum_game`
/// against `solve_zermelo` at desk scale.
pub fn sum_game_tree(
    target: u64,
    max_pick: u64,
) -> (ExtensiveForm, BTreeMap<HistoryId, WldOutcome>) {
    fn build(total: u64, target: u64, max_pick: u64, player: usize) -> Node {
        let actions = (1..=max_pick)
            .map(|pick| {
                let next = total + pick;
                let label = pick.to_string();
                if next >= target {
                    (
                        label,
                        Node::Terminal(if player == 0 {
                            vec![q1(), q0()]
                        } else {
                            vec![q0(), q1()]
                        }),
                    )
                } else {
                    (label, build(next, target, max_pick, 1 - player))
                }
            })
            .collect();
        Node::Decision { player, actions }
    }
    let ef = ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        build(0, target, max_pick, 0),
        &[],
    )
    .expect("sum game tree");
    let outcomes = ef
        .terminals()
        .map(|z| {
            let pay = ef.payoffs(z).unwrap();
            let o = if pay[0].is_one() {
                WldOutcome::Win1
            } else {
                WldOutcome::Win2
            };
            (z, o)
        })
        .collect();
    (ef, outcomes)
}

/// Pretty profile description: per player, `set-label:action@prob` fragments.
pub fn describe_profile(ef: &ExtensiveForm, profile: &BehavioralProfile) -> String {
    let mut parts = Vec::new();
    for strat in profile {
        let mut frags = Vec::new();
        let mut sets: Vec<(&usize, &Vec<Q>)> = strat.mix.iter().collect();
        sets.sort_by_key(|(&set, _)| ef.info_set(set).members[0]);
        for (&set, probs) in sets {
            let info = ef.info_set(set);
            let inner: Vec<String> = probs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(k, p)| {
                    if p.is_one() {
                        info.actions[k].clone()
                    } else {
                        format!("{}@{}", info.actions[k], fmt_q(p))
                    }
                })
                .collect();
            frags.push(inner.join("+"));
        }
        parts.push(format!(
            "{}:({})",
            ef.players()[strat.player],
            frags.join(", ")
        ));
    }
    parts.join(" ")
}
