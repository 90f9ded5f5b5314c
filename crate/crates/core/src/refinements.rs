//! Assessments on extensive forms and their refinements: sequential
//! rationality, Bayesian updating at reached information sets, weak
//! sequential equilibrium, plausibility-order consistency, Bayesian
//! consistency, perfect Bayesian equilibrium, independence properties,
//! choice-measurable integer representations, uniform full-support priors
//! and sequential equilibrium via the finite characterization.

use crate::extensive::{
    edge_prob, expected_payoffs_from, reach_probability, BehavioralProfile, ExtensiveForm,
    HistoryId, Owner, ROOT,
};
use crate::linprog::{solve_lp, Constraint, Lp, LpOutcome, Rel};
use crate::loglin::{solve_monomial_system, MonomialEquation, MonomialSolution};
use crate::num::{fmt_q, q0, q1, Q};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RefinementError {
    #[error("belief system is not a distribution on information set {0}")]
    BadBeliefs(usize),
    #[error("information set {0} does not belong to player {1}")]
    WrongOwner(usize, usize),
    #[error("search cap of {0} candidates exceeded")]
    CapExceeded(usize),
    #[error("order does not rationalize the assessment: {0}")]
    NotRationalizing(String),
    #[error("assessment is not Bayesian relative to the order")]
    NotBayesian,
    #[error("levels do not partition the history set")]
    BadLevels,
}

/// A behavioral profile together with a system of beliefs over decision
/// histories (one distribution per information set; singleton sets carry 1).
#[derive(Clone, Debug)]
pub struct Assessment {
    pub sigma: BehavioralProfile,
    pub mu: BTreeMap<HistoryId, Q>,
}

impl Assessment {
    pub fn new(
        ef: &ExtensiveForm,
        sigma: BehavioralProfile,
        mu_entries: Vec<(HistoryId, Q)>,
    ) -> Result<Self, RefinementError> {
        let mut mu: BTreeMap<HistoryId, Q> = mu_entries.into_iter().collect();
        // singleton sets and chance histories default to probability one
        for h in ef.decisions() {
            match ef.owner(h) {
                Some(Owner::Chance) => {
                    mu.entry(h).or_insert_with(q1);
                }
                Some(Owner::Player(_)) => {
                    if ef.info_set(ef.info_set_of(h)).members.len() == 1 {
                        mu.entry(h).or_insert_with(q1);
                    }
                }
                None => {}
            }
        }
        for (set_id, set) in ef.info_sets().iter().enumerate() {
            let total: Q = set
                .members
                .iter()
                .map(|h| mu.get(h).cloned().unwrap_or_else(q0))
                .fold(q0(), |a, b| a + b);
            if !total.is_one()
                || set
                    .members
                    .iter()
                    .any(|h| mu.get(h).map(|p| p.is_negative()).unwrap_or(false))
            {
                return Err(RefinementError::BadBeliefs(set_id));
            }
            for h in &set.members {
                mu.entry(*h).or_insert_with(q0);
            }
        }
        Ok(Assessment { sigma, mu })
    }

    pub fn mu_of(&self, h: HistoryId) -> Q {
        self.mu.get(&h).cloned().unwrap_or_else(q0)
    }
}

/// The conditional expected payoff of the owner of information set `set_id`,
/// starting from that set: beliefs weight the members, the profile drives the
/// continuation.
pub fn sequential_value(ef: &ExtensiveForm, a: &Assessment, set_id: usize) -> Q {
    let set = ef.info_set(set_id);
    let player = set.player;
    let mut acc = q0();
    for &h in &set.members {
        let v = expected_payoffs_from(ef, &a.sigma, h)[player].clone();
        acc += a.mu_of(h) * v;
    }
    acc
}

/// A profitable deviation found by the sequential-rationality check: the
/// player, the information set where it starts and the replacement plan
/// (action index per info set weakly following the start).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationWitness {
    pub player: usize,
    pub set_id: usize,
    pub plan: BTreeMap<usize, usize>,
}

/// Information sets of `player` that weakly follow `set_id` (including it):
/// those whose members all descend from members of `set_id`.
fn following_sets(ef: &ExtensiveForm, player: usize, set_id: usize) -> Vec<usize> {
    let starts = &ef.info_set(set_id).members;
    (0..ef.info_sets().len())
        .filter(|&s| {
            ef.info_set(s).player == player
                && !ef.info_set(s).members.is_empty()
                && ef
                    .info_set(s)
                    .members
                    .iter()
                    .all(|&m| starts.iter().any(|&h| ef.is_prefix_of(h, m)))
        })
        .collect()
}

/// The best value `player` can achieve at `set_id` by replacing her behavior
/// there and at all her weakly-following sets with a pure continuation plan,
/// against the rest of the assessment. Returns the value and the plan.
fn best_continuation(
    ef: &ExtensiveForm,
    a: &Assessment,
    set_id: usize,
) -> (Q, BTreeMap<usize, usize>) {
    let set = ef.info_set(set_id);
    let player = set.player;
    let sets = following_sets(ef, player, set_id);
    // order own sets by own-action depth, deepest first; sets at equal depth
    // are independent because any play reaches at most one of them
    let own_depth = |s: usize| {
        let m = ef.info_set(s).members[0];
        let mut d = 0;
        let mut cur = m;
        while let Some((p, _)) = ef.parent(cur) {
            if let Some(Owner::Player(pl)) = ef.owner(p) {
                if pl == player {
                    d += 1;
                }
            }
            cur = p;
        }
        d
    };
    let mut ordered = sets.clone();
    ordered.sort_by_key(|&s| std::cmp::Reverse(own_depth(s)));
    let mut plan: BTreeMap<usize, usize> = BTreeMap::new();

    // value of history h for `player` under: others/chance fixed by sigma,
    // own sets decided by `plan` where present, own sigma elsewhere
    fn val(
        ef: &ExtensiveForm,
        a: &Assessment,
        player: usize,
        plan: &BTreeMap<usize, usize>,
        h: HistoryId,
    ) -> Q {
        if let Some(pay) = ef.payoffs(h) {
            return pay[player].clone();
        }
        if let Owner::Player(pl) = ef.owner(h).unwrap() {
            if pl == player {
                let s = ef.info_set_of(h);
                if let Some(&k) = plan.get(&s) {
                    return val(ef, a, player, plan, ef.child(h, k));
                }
            }
        }
        let mut acc = q0();
        for k in 0..ef.children(h).len() {
            let p = edge_prob(ef, &a.sigma, h, k);
            if !p.is_zero() {
                acc += p * val(ef, a, player, plan, ef.child(h, k));
            }
        }
        acc
    }

    for &s in &ordered {
        // weight of each member: beliefs at the governing ancestor in the
        // starting set times the non-own-move probabilities from there
        let weight = |m: HistoryId| -> Q {
            let anc = set
                .members
                .iter()
                .find(|&&h| ef.is_prefix_of(h, m))
                .copied()
                .expect("member descends from the starting set");
            let mut w = a.mu_of(anc);
            let mut cur = m;
            while cur != anc {
                let (p, k) = ef.parent(cur).unwrap();
                match ef.owner(p).unwrap() {
                    Owner::Player(pl) if pl == player => {}
                    _ => w *= edge_prob(ef, &a.sigma, p, k),
                }
                cur = p;
            }
            w
        };
        let nacts = ef.info_set(s).actions.len();
        let mut best_k = 0;
        let mut best_v: Option<Q> = None;
        for k in 0..nacts {
            let mut trial = plan.clone();
            trial.insert(s, k);
            let v: Q = ef
                .info_set(s)
                .members
                .iter()
                .map(|&m| weight(m) * val(ef, a, player, &trial, ef.child(m, k)))
                .fold(q0(), |x, y| x + y);
            if best_v.as_ref().map_or(true, |b| v > *b) {
                best_v = Some(v);
                best_k = k;
            }
        }
        plan.insert(s, best_k);
    }
    let value: Q = set
        .members
        .iter()
        .map(|&h| a.mu_of(h) * val(ef, a, player, &plan, h))
        .fold(q0(), |x, y| x + y);
    (value, plan)
}

/// Sequential rationality: at every information set, no replacement of the
/// owner's behavior there and at her weakly-following sets improves her
/// conditional expected payoff. Deviations are full continuation plans.
pub fn is_sequentially_rational(
    ef: &ExtensiveForm,
    a: &Assessment,
) -> (bool, Option<DeviationWitness>) {
    for set_id in 0..ef.info_sets().len() {
        let current = sequential_value(ef, a, set_id);
        let (best, plan) = best_continuation(ef, a, set_id);
        if best > current {
            return (
                false,
                Some(DeviationWitness {
                    player: ef.info_set(set_id).player,
                    set_id,
                    plan,
                }),
            );
        }
    }
    (true, None)
}

/// Bayesian updating at reached information sets: wherever the profile gives
/// an information set positive prior probability, beliefs are the
/// conditionals; unreached sets are unconstrained.
pub fn bayes_updating_reached(ef: &ExtensiveForm, a: &Assessment) -> bool {
    for set in ef.info_sets() {
        let reach: Vec<Q> = set
            .members
            .iter()
            .map(|&h| reach_probability(ef, &a.sigma, ROOT, h))
            .collect();
        let total: Q = reach.iter().fold(q0(), |x, y| x + y);
        if total.is_positive() {
            for (&h, r) in set.members.iter().zip(&reach) {
                if a.mu_of(h) * &total != *r {
                    return false;
                }
            }
        }
    }
    true
}

/// Weak sequential equilibrium: sequential rationality plus Bayesian
/// updating at reached information sets.
pub fn is_weak_sequential(ef: &ExtensiveForm, a: &Assessment) -> bool {
    bayes_updating_reached(ef, a) && is_sequentially_rational(ef, a).0
}

/// A plausibility order on all histories, as ordered levels (most plausible
/// first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryPlausibilityOrder {
    pub levels: Vec<Vec<HistoryId>>,
}

impl HistoryPlausibilityOrder {
    pub fn from_paths(
        ef: &ExtensiveForm,
        levels: &[Vec<&[&str]>],
    ) -> Result<Self, RefinementError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for level in levels {
            let mut ids = Vec::new();
            for path in level {
                let id = ef.history(path).map_err(|_| RefinementError::BadLevels)?;
                if !seen.insert(id) {
                    return Err(RefinementError::BadLevels);
                }
                ids.push(id);
            }
            ids.sort_unstable();
            out.push(ids);
        }
        if seen.len() != ef.num_histories() {
            return Err(RefinementError::BadLevels);
        }
        Ok(HistoryPlausibilityOrder { levels: out })
    }

    /// Level array indexed by history.
    pub fn level_index(&self, num_histories: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; num_histories];
        for (l, level) in self.levels.iter().enumerate() {
            for &h in level {
                idx[h] = l;
            }
        }
        idx
    }

    /// Checks the structural order properties plus the two rationalization
    /// properties with respect to the assessment: plausibility-preserving
    /// actions are exactly the positive-probability ones, and positive
    /// beliefs sit exactly on the most plausible histories of each set.
    pub fn rationalizes(&self, ef: &ExtensiveForm, a: &Assessment) -> Result<(), String> {
        let lvl = self.level_index(ef.num_histories());
        for h in ef.decisions() {
            let owner = ef.owner(h).unwrap();
            let mut has_preserving = false;
            for k in 0..ef.children(h).len() {
                let ha = ef.child(h, k);
                if lvl[ha] < lvl[h] {
                    return Err(format!(
                        "appending `{}` to `{}` increases plausibility",
                        ef.actions(h)[k],
                        ef.label(h)
                    ));
                }
                let preserving = lvl[ha] == lvl[h];
                has_preserving |= preserving;
                let positive = match owner {
                    Owner::Chance => true,
                    Owner::Player(_) => edge_prob(ef, &a.sigma, h, k).is_positive(),
                };
                if preserving != positive {
                    return Err(format!(
                        "action `{}` at `{}` is {} but has {} probability",
                        ef.actions(h)[k],
                        ef.label(h),
                        if preserving {
                            "plausibility-preserving"
                        } else {
                            "plausibility-decreasing"
                        },
                        if positive { "positive" } else { "zero" },
                    ));
                }
            }
            if !has_preserving {
                return Err(format!(
                    "no plausibility-preserving action at `{}`",
                    ef.label(h)
                ));
            }
        }
        for set in ef.info_sets() {
            let min = set.members.iter().map(|&m| lvl[m]).min().unwrap();
            for &m in &set.members {
                let best = lvl[m] == min;
                let positive = a.mu_of(m).is_positive();
                if best != positive {
                    return Err(format!(
                        "history `{}` is {} plausible in its information set but has {} belief",
                        ef.label(m),
                        if best { "maximally" } else { "not maximally" },
                        if positive { "positive" } else { "zero" },
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Forced part of every plausibility order rationalizing an assessment:
/// equivalence classes (union-find over forced indifferences) plus forced
/// strict edges between classes.
struct ForcedStructure {
    /// Representative per history.
    class_of: Vec<usize>,
    /// Strict edges `more plausible -> less plausible` between class reps.
    strict: BTreeSet<(usize, usize)>,
    /// Class representatives.
    reps: Vec<usize>,
}

fn forced_structure(ef: &ExtensiveForm, a: &Assessment) -> Option<ForcedStructure> {
    let n = ef.num_histories();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    fn union(parent: &mut Vec<usize>, a: usize, b: usize) {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut strict_pairs: Vec<(HistoryId, HistoryId)> = Vec::new();
    for h in ef.decisions() {
        let owner = ef.owner(h).unwrap();
        for k in 0..ef.children(h).len() {
            let ha = ef.child(h, k);
            let positive = match owner {
                Owner::Chance => true,
                Owner::Player(_) => edge_prob(ef, &a.sigma, h, k).is_positive(),
            };
            if positive {
                union(&mut parent, h, ha);
            } else {
                strict_pairs.push((h, ha));
            }
        }
    }
    for set in ef.info_sets() {
        let positives: Vec<HistoryId> = set
            .members
            .iter()
            .copied()
            .filter(|&m| a.mu_of(m).is_positive())
            .collect();
        for w in positives.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
        for &m in &set.members {
            if !a.mu_of(m).is_positive() {
                if let Some(&p) = positives.first() {
                    strict_pairs.push((p, m));
                }
            }
        }
    }
    let strict: BTreeSet<(usize, usize)> = strict_pairs
        .iter()
        .map(|&(x, y)| (find(&mut parent, x), find(&mut parent, y)))
        .collect();
    if strict.iter().any(|&(x, y)| x == y) {
        return None;
    }
    let reps: Vec<usize> = {
        let mut r: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    if has_cycle(&reps, &strict) {
        return None;
    }
    let class_of: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    Some(ForcedStructure {
        class_of,
        strict,
        reps,
    })
}

fn has_cycle(nodes: &[usize], edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut indeg: BTreeMap<usize, usize> = nodes.iter().map(|&x| (x, 0)).collect();
    for &(_, b) in edges {
        *indeg.get_mut(&b).unwrap() += 1;
    }
    let mut queue: Vec<usize> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&x, _)| x)
        .collect();
    let mut seen = 0;
    while let Some(x) = queue.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == x {
                let d = indeg.get_mut(&b).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(b);
                }
            }
        }
    }
    seen != nodes.len()
}

/// Longest-path layering of the forced condensation: a canonical completion
/// to a total pre-order.
fn canonical_levels(fs: &ForcedStructure) -> Vec<Vec<usize>> {
    let mut depth: BTreeMap<usize, usize> = fs.reps.iter().map(|&r| (r, 0)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(x, y) in &fs.strict {
            let dx = depth[&x];
            if depth[&y] < dx + 1 {
                depth.insert(y, dx + 1);
                changed = true;
            }
        }
    }
    let max_depth = depth.values().copied().max().unwrap_or(0);
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
    for (h, &c) in fs.class_of.iter().enumerate() {
        levels[depth[&c]].push(h);
    }
    levels.retain(|l| !l.is_empty());
    levels
}

/// Finds some plausibility order rationalizing the assessment, or `None`
/// when the forced structure is contradictory.
pub fn rationalize(ef: &ExtensiveForm, a: &Assessment) -> Option<HistoryPlausibilityOrder> {
    let fs = forced_structure(ef, a)?;
    let order = HistoryPlausibilityOrder {
        levels: canonical_levels(&fs),
    };
    debug_assert!(order.rationalizes(ef, a).is_ok(), "{:?}", order.rationalizes(ef, a));
    Some(order)
}

/// The positive-belief decision histories of the assessment.
pub fn mu_support(ef: &ExtensiveForm, a: &Assessment) -> Vec<HistoryId> {
    ef.decisions()
        .filter(|&h| a.mu_of(h).is_positive())
        .collect()
}

/// One class distribution of a Bayesian-consistency witness: the class's
/// positive-belief histories and their probabilities.
pub type ClassDistribution = Vec<(HistoryId, Q)>;

/// Product of sigma/chance probabilities along the segment from `anc` to `h`.
fn path_probability(ef: &ExtensiveForm, a: &Assessment, anc: HistoryId, h: HistoryId) -> Q {
    let mut prob = q1();
    let mut cur = h;
    while cur != anc {
        let (p, k) = ef.parent(cur).expect("anc is a prefix");
        prob *= edge_prob(ef, &a.sigma, p, k);
        cur = p;
    }
    prob
}

/// Builds the family of class distributions demanded by Bayesian consistency
/// relative to `order`: per equivalence class meeting the belief support, a
/// distribution supported exactly on the class's positive-belief histories,
/// consistent with the profile along prefixes and reproducing the beliefs by
/// conditioning on information sets. `None` when some class system is
/// infeasible.
pub fn bayes_witness(
    ef: &ExtensiveForm,
    a: &Assessment,
    order: &HistoryPlausibilityOrder,
) -> Result<Option<Vec<ClassDistribution>>, RefinementError> {
    order
        .rationalizes(ef, a)
        .map_err(RefinementError::NotRationalizing)?;
    let lvl = order.level_index(ef.num_histories());
    let support = mu_support(ef, a);
    let mut classes: BTreeMap<usize, Vec<HistoryId>> = BTreeMap::new();
    for &h in &support {
        classes.entry(lvl[h]).or_default().push(h);
    }
    let mut out = Vec::new();
    for members in classes.values() {
        match solve_class_system(ef, a, members) {
            Some(nu) => out.push(nu),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Solves one class system: variables `nu(h) > 0` for the class's
/// positive-belief histories; prefix consistency with the profile inside the
/// class; beliefs reproduced by conditioning on each information set; total
/// mass one.
fn solve_class_system(
    ef: &ExtensiveForm,
    a: &Assessment,
    members: &[HistoryId],
) -> Option<ClassDistribution> {
    let nv = members.len() + 1; // + epsilon floor
    let idx: BTreeMap<HistoryId, usize> =
        members.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    let mut constraints = Vec::new();
    let mut ones = vec![q1(); nv];
    ones[nv - 1] = q0();
    constraints.push(Constraint::new(ones, Rel::Eq, q1()));
    for (&h, &i) in &idx {
        for (&h2, &j) in &idx {
            if h != h2 && ef.is_prefix_of(h, h2) {
                let p = path_probability(ef, a, h, h2);
                let mut coeffs = vec![q0(); nv];
                coeffs[j] = q1();
                coeffs[i] = -p;
                constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
            }
        }
    }
    // chance histories sit in singleton information sets by convention, so
    // they add no conditioning constraints
    let sets: BTreeSet<usize> = members
        .iter()
        .filter(|&&h| matches!(ef.owner(h), Some(Owner::Player(_))))
        .map(|&h| ef.info_set_of(h))
        .collect();
    for &s in &sets {
        let in_class: Vec<usize> = ef
            .info_set(s)
            .members
            .iter()
            .filter_map(|m| idx.get(m).copied())
            .collect();
        for &i in &in_class {
            let h = members[i];
            let mut coeffs = vec![q0(); nv];
            coeffs[i] = q1();
            for &j in &in_class {
                coeffs[j] -= a.mu_of(h);
            }
            constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
        }
    }
    for i in 0..members.len() {
        let mut coeffs = vec![q0(); nv];
        coeffs[i] = q1();
        coeffs[nv - 1] = -q1();
        constraints.push(Constraint::new(coeffs, Rel::Ge, q0()));
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
        LpOutcome::Optimal { x, value } if value.is_positive() => Some(
            members
                .iter()
                .zip(&x)
                .map(|(&h, v)| (h, v.clone()))
                .collect(),
        ),
        _ => None,
    }
}

/// Validates a proposed class distribution against the Bayesian-consistency
/// requirements for its class.
pub fn validate_class_distribution(
    ef: &ExtensiveForm,
    a: &Assessment,
    nu: &ClassDistribution,
) -> bool {
    let table: BTreeMap<HistoryId, Q> = nu.iter().cloned().collect();
    let total: Q = table.values().fold(q0(), |x, y| x + y);
    if !total.is_one() || table.values().any(|v| !v.is_positive()) {
        return false;
    }
    for (&h, vh) in &table {
        for (&h2, v2) in &table {
            if h != h2 && ef.is_prefix_of(h, h2) && *v2 != vh * path_probability(ef, a, h, h2) {
                return false;
            }
        }
        // chance histories live in singleton sets by convention
        if !matches!(ef.owner(h), Some(Owner::Player(_))) {
            continue;
        }
        let set = ef.info_set(ef.info_set_of(h));
        let mass: Q = set
            .members
            .iter()
            .filter_map(|m| table.get(m))
            .fold(q0(), |x, y| x + y);
        for &m in &set.members {
            let vm = table.get(&m).cloned().unwrap_or_else(q0);
            if vm != a.mu_of(m) * &mass {
                return false;
            }
        }
    }
    true
}

/// Three-valued outcome for searches bounded by a candidate cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    /// The bounded search was exhausted without an answer.
    Undecided,
}

/// Perfect Bayesian equilibrium: sequential rationality plus the existence
/// of a rationalizing plausibility order relative to which the assessment is
/// Bayesian. The search enumerates mergings of the forced equivalence
/// classes carrying positive beliefs, capped at `cap` candidates.
pub fn is_pbe(ef: &ExtensiveForm, a: &Assessment, cap: usize) -> Decision {
    if !is_sequentially_rational(ef, a).0 {
        return Decision::No;
    }
    let Some(fs) = forced_structure(ef, a) else {
        return Decision::No;
    };
    let support = mu_support(ef, a);
    let mut mu_classes: Vec<usize> = support.iter().map(|&h| fs.class_of[h]).collect();
    mu_classes.sort_unstable();
    mu_classes.dedup();
    let reach = strict_reachability(&fs);
    let mut count = 0usize;
    for partition in SetPartitions::new(mu_classes.len()) {
        count += 1;
        if count > cap {
            return Decision::Undecided;
        }
        let blocks: Vec<Vec<usize>> = partition
            .iter()
            .map(|idxs| idxs.iter().map(|&i| mu_classes[i]).collect())
            .collect();
        // merging classes with a strict path between them is contradictory
        let merge_ok = blocks.iter().all(|block| {
            block
                .iter()
                .tuple_combinations()
                .all(|(&x, &y)| !reach.contains(&(x, y)) && !reach.contains(&(y, x)))
        });
        if !merge_ok || !quotient_acyclic(&fs, &blocks) {
            continue;
        }
        let feasible = blocks.iter().all(|block| {
            let members: Vec<HistoryId> = support
                .iter()
                .copied()
                .filter(|&h| block.contains(&fs.class_of[h]))
                .collect();
            solve_class_system(ef, a, &members).is_some()
        });
        if feasible {
            return Decision::Yes;
        }
    }
    Decision::No
}

fn strict_reachability(fs: &ForcedStructure) -> BTreeSet<(usize, usize)> {
    let mut reach = fs.strict.clone();
    loop {
        let snapshot: Vec<(usize, usize)> = reach.iter().copied().collect();
        let mut grew = false;
        for &(a, b) in &snapshot {
            for &(c, d) in &snapshot {
                if b == c && reach.insert((a, d)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return reach;
        }
    }
}

/// Whether the quotient of the forced strict digraph by the given blocks
/// (classes not mentioned stay singletons) is acyclic.
fn quotient_acyclic(fs: &ForcedStructure, blocks: &[Vec<usize>]) -> bool {
    let mut block_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (bi, block) in blocks.iter().enumerate() {
        for &c in block {
            block_of.insert(c, bi);
        }
    }
    let mut next = blocks.len();
    for &r in &fs.reps {
        block_of.entry(r).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
    }
    let nodes: Vec<usize> = (0..next).collect();
    let mut edges = BTreeSet::new();
    for &(x, y) in &fs.strict {
        let bx = block_of[&x];
        let by = block_of[&y];
        if bx == by {
            return false;
        }
        edges.insert((bx, by));
    }
    !has_cycle(&nodes, &edges)
}

/// Iterator over all set partitions of `{0..n}` (restricted-growth strings).
struct SetPartitions {
    n: usize,
    rgs: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    fn new(n: usize) -> Self {
        SetPartitions {
            n,
            rgs: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in self.rgs.iter().enumerate() {
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(i);
        }
        if self.n == 0 {
            self.done = true;
            return Some(blocks);
        }
        // advance the restricted-growth string
        let mut i = self.n - 1;
        loop {
            let max_prefix = self.rgs[..i].iter().copied().max().map_or(0, |m| m + 1);
            if self.rgs[i] < max_prefix {
                self.rgs[i] += 1;
                for v in self.rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
        }
        Some(blocks)
    }
}

/// Results of the three independence checks on an order and a belief system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub ind1: bool,
    pub ind2: bool,
    pub ind3: bool,
}

/// Checks the plausibility-independence properties: appending a common
/// action preserves relative plausibility of same-set histories (first),
/// conditional action comparisons agree across a set (second), and belief
/// ratios survive a common appended action (third).
pub fn independence_checks(
    ef: &ExtensiveForm,
    order: &HistoryPlausibilityOrder,
    mu: &BTreeMap<HistoryId, Q>,
) -> IndependenceReport {
    let lvl = order.level_index(ef.num_histories());
    let mu_of = |h: HistoryId| mu.get(&h).cloned().unwrap_or_else(q0);
    let mut ind1 = true;
    let mut ind2 = true;
    let mut ind3 = true;
    for set in ef.info_sets() {
        for (&h, &h2) in set.members.iter().tuple_combinations() {
            for k in 0..set.actions.len() {
                let ha = ef.child(h, k);
                let h2a = ef.child(h2, k);
                if (lvl[h] <= lvl[h2]) != (lvl[ha] <= lvl[h2a])
                    || (lvl[h2] <= lvl[h]) != (lvl[h2a] <= lvl[ha])
                {
                    ind1 = false;
                }
                for k2 in 0..set.actions.len() {
                    if k2 == k {
                        continue;
                    }
                    let hb = ef.child(h, k2);
                    let h2b = ef.child(h2, k2);
                    if (lvl[ha] <= lvl[hb]) != (lvl[h2a] <= lvl[h2b]) {
                        ind2 = false;
                    }
                }
                // belief-ratio condition: both extensions must be decision
                // histories in a common information set, all four positive
                if !ef.is_terminal(ha)
                    && !ef.is_terminal(h2a)
                    && matches!(ef.owner(ha), Some(Owner::Player(_)))
                    && matches!(ef.owner(h2a), Some(Owner::Player(_)))
                    && ef.info_set_of(ha) == ef.info_set_of(h2a)
                {
                    let (m1, m2, m3, m4) = (mu_of(h), mu_of(h2), mu_of(ha), mu_of(h2a));
                    if m1.is_positive()
                        && m2.is_positive()
                        && m3.is_positive()
                        && m4.is_positive()
                        && &m1 * &m4 != &m2 * &m3
                    {
                        ind3 = false;
                    }
                }
            }
        }
    }
    IndependenceReport { ind1, ind2, ind3 }
}

/// An integer representation of a plausibility order with the
/// choice-measurability property, decomposed into per-action weights: `f(h)`
/// is the sum of `lambda` over the actions along `h`, with weights keyed by
/// (information set of the decision history, action index).
#[derive(Clone, Debug)]
pub struct IntegerRep {
    pub f: BTreeMap<HistoryId, BigInt>,
    pub lambda: BTreeMap<(usize, usize), BigInt>,
}

/// Key for the per-edge weight of a decision history's action: information
/// set for player moves, the history itself for chance moves (distinct keys
/// play the role of the implicit action renaming).
fn edge_key(ef: &ExtensiveForm, h: HistoryId, k: usize) -> (usize, usize) {
    match ef.owner(h).unwrap() {
        Owner::Player(_) => (ef.info_set_of(h), k),
        Owner::Chance => (ef.info_sets().len() + h, k),
    }
}

/// Edge keys along the path from the root to `h`.
fn path_keys(ef: &ExtensiveForm, h: HistoryId) -> Vec<(usize, usize)> {
    let mut keys = Vec::new();
    let mut cur = h;
    while let Some((p, k)) = ef.parent(cur) {
        keys.push(edge_key(ef, p, k));
        cur = p;
    }
    keys.reverse();
    keys
}

/// Searches for a choice-measurable integer representation of the order:
/// nonnegative action weights, zero exactly on plausibility-preserving
/// actions, whose path sums represent the order. `None` when no such
/// representation exists.
pub fn choice_measurable(
    ef: &ExtensiveForm,
    order: &HistoryPlausibilityOrder,
) -> Option<IntegerRep> {
    let lvl = order.level_index(ef.num_histories());
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut var_idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut preserving: Vec<bool> = Vec::new();
    for h in ef.decisions() {
        for k in 0..ef.children(h).len() {
            let key = edge_key(ef, h, k);
            let is_preserving = lvl[ef.child(h, k)] == lvl[h];
            match var_idx.get(&key) {
                None => {
                    var_idx.insert(key, vars.len());
                    vars.push(key);
                    preserving.push(is_preserving);
                }
                Some(&i) => {
                    // preservation must be uniform across the information set
                    if preserving[i] != is_preserving {
                        return None;
                    }
                }
            }
        }
    }
    let nv = vars.len();
    let mut constraints = Vec::new();
    for (i, &p) in preserving.iter().enumerate() {
        let mut coeffs = vec![q0(); nv];
        coeffs[i] = q1();
        if p {
            constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
        } else {
            constraints.push(Constraint::new(coeffs, Rel::Ge, q1()));
        }
    }
    let path_coeffs = |h: HistoryId| -> Vec<Q> {
        let mut c = vec![q0(); nv];
        for key in path_keys(ef, h) {
            c[var_idx[&key]] += q1();
        }
        c
    };
    for (li, level) in order.levels.iter().enumerate() {
        for pair in level.windows(2) {
            let a_ = path_coeffs(pair[0]);
            let b_ = path_coeffs(pair[1]);
            let diff: Vec<Q> = a_.iter().zip(&b_).map(|(x, y)| x - y).collect();
            constraints.push(Constraint::new(diff, Rel::Eq, q0()));
        }
        if li + 1 < order.levels.len() {
            let a_ = path_coeffs(order.levels[li + 1][0]);
            let b_ = path_coeffs(level[0]);
            let diff: Vec<Q> = a_.iter().zip(&b_).map(|(x, y)| x - y).collect();
            constraints.push(Constraint::new(diff, Rel::Ge, q1()));
        }
    }
    let lp = Lp {
        num_vars: nv,
        objective: vec![q0(); nv],
        constraints,
    };
    let LpOutcome::Optimal { x, .. } = solve_lp(&lp) else {
        return None;
    };
    let lcd: BigInt = x.iter().fold(BigInt::one(), |acc, v| {
        num_integer::lcm(acc, v.denom().clone())
    });
    let lambda: BTreeMap<(usize, usize), BigInt> = vars
        .iter()
        .zip(&x)
        .map(|(key, v)| {
            let scaled = v * Q::from_integer(lcd.clone());
            (*key, scaled.numer().clone())
        })
        .collect();
    let f: BTreeMap<HistoryId, BigInt> = ef
        .histories()
        .map(|h| {
            let total: BigInt = path_keys(ef, h)
                .iter()
                .map(|key| lambda[key].clone())
                .fold(BigInt::zero(), |a, b| a + b);
            (h, total)
        })
        .collect();
    Some(IntegerRep { f, lambda })
}

/// Checks that `f` is an integer representation of the order satisfying the
/// choice-measurability equation at every information set.
pub fn validate_integer_rep(
    ef: &ExtensiveForm,
    order: &HistoryPlausibilityOrder,
    f: &BTreeMap<HistoryId, BigInt>,
) -> bool {
    let lvl = order.level_index(ef.num_histories());
    for h in ef.histories() {
        for g in ef.histories() {
            if (f[&h] <= f[&g]) != (lvl[h] <= lvl[g]) {
                return false;
            }
        }
    }
    for set in ef.info_sets() {
        for (&h, &h2) in set.members.iter().tuple_combinations() {
            for k in 0..set.actions.len() {
                let ha = ef.child(h, k);
                let h2a = ef.child(h2, k);
                if &f[&h] - &f[&h2] != &f[&ha] - &f[&h2a] {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks the equivalent difference form of choice measurability: for
/// same-set histories and any two actions, the weight gap between the two
/// actions is the same at both histories.
pub fn validate_action_difference_form(
    ef: &ExtensiveForm,
    f: &BTreeMap<HistoryId, BigInt>,
) -> bool {
    for set in ef.info_sets() {
        for (&h, &h2) in set.members.iter().tuple_combinations() {
            for (ka, kb) in (0..set.actions.len()).tuple_combinations() {
                let lhs = &f[&ef.child(h, kb)] - &f[&ef.child(h, ka)];
                let rhs = &f[&ef.child(h2, kb)] - &f[&ef.child(h2, ka)];
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Outcome of the uniform-prior search.
#[derive(Clone, Debug)]
pub enum UniformPrior {
    Infeasible,
    /// A full-support prior over decision histories satisfying the two
    /// uniformity properties and conditioning to the class distributions.
    /// The witness is `None` in the degenerate case where the constraints
    /// force an irrational prior (existence still holds).
    Feasible(Option<Vec<(HistoryId, Q)>>),
}

/// Multiplier decomposition of the prior system: each decision history's
/// prior is a fixed rational (product of positive-probability edges) times a
/// product of per-(set, action) variables for the zero-probability edges.
struct PriorSystem {
    bounded_vars: usize,
    decomposition: BTreeMap<HistoryId, (Q, Vec<usize>)>,
}

fn prior_system(ef: &ExtensiveForm, a: &Assessment) -> PriorSystem {
    let mut var_idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut decomposition = BTreeMap::new();
    for h in ef.decisions() {
        let mut fixed = q1();
        let mut vars = Vec::new();
        let mut cur = h;
        while let Some((p, k)) = ef.parent(cur) {
            let prob = edge_prob(ef, &a.sigma, p, k);
            if prob.is_positive() {
                fixed *= prob;
            } else {
                let key = edge_key(ef, p, k);
                let next = var_idx.len();
                let idx = *var_idx.entry(key).or_insert(next);
                vars.push(idx);
            }
            cur = p;
        }
        vars.sort_unstable();
        decomposition.insert(h, (fixed, vars));
    }
    PriorSystem {
        bounded_vars: var_idx.len(),
        decomposition,
    }
}

/// The belief-ratio monomial equations of the uniform-prior system.
fn prior_equations(
    ef: &ExtensiveForm,
    a: &Assessment,
    system: &PriorSystem,
) -> Vec<MonomialEquation> {
    let mut equations = Vec::new();
    for set in ef.info_sets() {
        let positives: Vec<HistoryId> = set
            .members
            .iter()
            .copied()
            .filter(|&m| a.mu_of(m).is_positive())
            .collect();
        for pair in positives.windows(2) {
            let (h, h2) = (pair[0], pair[1]);
            let (fh, vh) = &system.decomposition[&h];
            let (f2, v2) = &system.decomposition[&h2];
            let mut exponents: BTreeMap<usize, Q> = BTreeMap::new();
            for &v in vh {
                *exponents.entry(v).or_insert_with(q0) += q1();
            }
            for &v in v2 {
                *exponents.entry(v).or_insert_with(q0) -= q1();
            }
            exponents.retain(|_, e| !e.is_zero());
            // nu(h)/nu(h2) = mu(h)/mu(h2)
            let rhs = a.mu_of(h) * f2 / (a.mu_of(h2) * fh);
            equations.push(MonomialEquation { exponents, rhs });
        }
    }
    equations
}

/// Searches for a full-support prior over decision histories that extends
/// the profile multiplicatively (equal multipliers across an information
/// set, matching the profile on its support, never exceeding one) and whose
/// conditionals reproduce the belief ratios. The order must rationalize the
/// assessment and admit a Bayesian witness.
pub fn uniformly_bayesian(
    ef: &ExtensiveForm,
    a: &Assessment,
    order: &HistoryPlausibilityOrder,
) -> Result<UniformPrior, RefinementError> {
    if bayes_witness(ef, a, order)?.is_none() {
        return Err(RefinementError::NotBayesian);
    }
    let system = prior_system(ef, a);
    let equations = prior_equations(ef, a, &system);
    let bounded = vec![true; system.bounded_vars];
    match solve_monomial_system(system.bounded_vars, &equations, &bounded) {
        MonomialSolution::Infeasible => Ok(UniformPrior::Infeasible),
        MonomialSolution::Feasible(None) => Ok(UniformPrior::Feasible(None)),
        MonomialSolution::Feasible(Some(xs)) => {
            let mut raw: Vec<(HistoryId, Q)> = Vec::new();
            for (&h, (fixed, vars)) in &system.decomposition {
                let mut v = fixed.clone();
                for &i in vars {
                    v *= &xs[i];
                }
                raw.push((h, v));
            }
            let total: Q = raw.iter().fold(q0(), |acc, (_, v)| acc + v);
            let nu = raw.into_iter().map(|(h, v)| (h, v / &total)).collect();
            Ok(UniformPrior::Feasible(Some(nu)))
        }
    }
}

/// Validates a claimed uniform full-support prior over decision histories
/// against the assessment: full support, multiplicative consistency with
/// the profile, uniform ratios across information sets, and belief
/// reproduction within every information set.
pub fn validate_uniform_prior(
    ef: &ExtensiveForm,
    a: &Assessment,
    nu: &BTreeMap<HistoryId, Q>,
) -> bool {
    let decisions: Vec<HistoryId> = ef.decisions().collect();
    if decisions
        .iter()
        .any(|h| !nu.get(h).map(|v| v.is_positive()).unwrap_or(false))
    {
        return false;
    }
    for &h in &decisions {
        for k in 0..ef.children(h).len() {
            let ha = ef.child(h, k);
            if ef.is_terminal(ha) {
                continue;
            }
            let prob = edge_prob(ef, &a.sigma, h, k);
            if prob.is_positive() {
                if nu[&ha] != &nu[&h] * &prob {
                    return false;
                }
            } else if nu[&ha] > nu[&h] {
                return false;
            }
        }
    }
    for set in ef.info_sets() {
        for (&h, &h2) in set.members.iter().tuple_combinations() {
            for k in 0..set.actions.len() {
                let ha = ef.child(h, k);
                let h2a = ef.child(h2, k);
                if !ef.is_terminal(ha)
                    && !ef.is_terminal(h2a)
                    && &nu[&h] * &nu[&h2a] != &nu[&h2] * &nu[&ha]
                {
                    return false;
                }
            }
        }
        let positives: Vec<HistoryId> = set
            .members
            .iter()
            .copied()
            .filter(|&m| a.mu_of(m).is_positive())
            .collect();
        for (&h, &h2) in positives.iter().tuple_combinations() {
            if &nu[&h] * a.mu_of(h2) != &nu[&h2] * a.mu_of(h) {
                return false;
            }
        }
    }
    true
}

/// Decides sequential equilibrium by the finite characterization: the
/// assessment must be sequentially rational, rationalized by a plausibility
/// order admitting a choice-measurable integer representation, and admit a
/// uniform full-support prior. Both existence questions reduce to exact
/// feasibility problems, so the verdict needs no capped enumeration.
pub fn is_sequential_equilibrium(ef: &ExtensiveForm, a: &Assessment) -> Decision {
    if !is_sequentially_rational(ef, a).0 {
        return Decision::No;
    }
    if forced_structure(ef, a).is_none() {
        return Decision::No;
    }
    if cm_rationalizing_weights(ef, a).is_none() {
        return Decision::No;
    }
    let system = prior_system(ef, a);
    let equations = prior_equations(ef, a, &system);
    let bounded = vec![true; system.bounded_vars];
    match solve_monomial_system(system.bounded_vars, &equations, &bounded) {
        MonomialSolution::Infeasible => Decision::No,
        MonomialSolution::Feasible(_) => Decision::Yes,
    }
}

/// The rationalizing choice-measurable plausibility order found by the
/// sequential-equilibrium search, when one exists: histories ordered by the
/// path sums of the solved action weights.
pub fn sequential_order(ef: &ExtensiveForm, a: &Assessment) -> Option<HistoryPlausibilityOrder> {
    let weights = cm_rationalizing_weights(ef, a)?;
    // rebuild the variable table in the same way the solver does
    let mut var_idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for h in ef.decisions() {
        for k in 0..ef.children(h).len() {
            let key = edge_key(ef, h, k);
            let next = var_idx.len();
            var_idx.entry(key).or_insert(next);
        }
    }
    let value_of = |h: HistoryId| -> Q {
        path_keys(ef, h)
            .iter()
            .map(|key| weights[var_idx[key]].clone())
            .fold(q0(), |x, y| x + y)
    };
    let mut by_value: Vec<(Q, HistoryId)> = ef.histories().map(|h| (value_of(h), h)).collect();
    by_value.sort();
    let mut levels: Vec<Vec<HistoryId>> = Vec::new();
    let mut current: Option<Q> = None;
    for (v, h) in by_value {
        match &current {
            Some(c) if *c == v => levels.last_mut().unwrap().push(h),
            _ => {
                levels.push(vec![h]);
                current = Some(v);
            }
        }
    }
    let order = HistoryPlausibilityOrder { levels };
    debug_assert!(order.rationalizes(ef, a).is_ok());
    Some(order)
}

/// Feasibility core of the choice-measurable-order search: nonnegative
/// weights per (information set, action), zero exactly on
/// positive-probability actions, whose path sums tie the positive-belief
/// histories of every information set together and put them strictly below
/// the zero-belief ones. A solution induces a rationalizing order (sort by
/// path sum) that is choice measurable by construction.
fn cm_rationalizing_weights(ef: &ExtensiveForm, a: &Assessment) -> Option<Vec<Q>> {
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut var_idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut zero_weight: Vec<bool> = Vec::new();
    for h in ef.decisions() {
        let owner = ef.owner(h).unwrap();
        for k in 0..ef.children(h).len() {
            let key = edge_key(ef, h, k);
            let positive = match owner {
                Owner::Chance => true,
                Owner::Player(_) => edge_prob(ef, &a.sigma, h, k).is_positive(),
            };
            if !var_idx.contains_key(&key) {
                var_idx.insert(key, vars.len());
                vars.push(key);
                zero_weight.push(positive);
            }
        }
    }
    let nv = vars.len();
    let mut constraints = Vec::new();
    for (i, &z) in zero_weight.iter().enumerate() {
        let mut coeffs = vec![q0(); nv];
        coeffs[i] = q1();
        if z {
            constraints.push(Constraint::new(coeffs, Rel::Eq, q0()));
        } else {
            constraints.push(Constraint::new(coeffs, Rel::Ge, q1()));
        }
    }
    let path_coeffs = |h: HistoryId| -> Vec<Q> {
        let mut c = vec![q0(); nv];
        for key in path_keys(ef, h) {
            c[var_idx[&key]] += q1();
        }
        c
    };
    for set in ef.info_sets() {
        let positives: Vec<HistoryId> = set
            .members
            .iter()
            .copied()
            .filter(|&m| a.mu_of(m).is_positive())
            .collect();
        for pair in positives.windows(2) {
            let diff: Vec<Q> = path_coeffs(pair[0])
                .iter()
                .zip(&path_coeffs(pair[1]))
                .map(|(x, y)| x - y)
                .collect();
            constraints.push(Constraint::new(diff, Rel::Eq, q0()));
        }
        if let Some(&p) = positives.first() {
            for &m in &set.members {
                if !a.mu_of(m).is_positive() {
                    let diff: Vec<Q> = path_coeffs(m)
                        .iter()
                        .zip(&path_coeffs(p))
                        .map(|(x, y)| x - y)
                        .collect();
                    constraints.push(Constraint::new(diff, Rel::Ge, q1()));
                }
            }
        }
    }
    let lp = Lp {
        num_vars: nv,
        objective: vec![q0(); nv],
        constraints,
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Pretty-prints the non-trivial part of an assessment's belief system.
pub fn describe_mu(ef: &ExtensiveForm, a: &Assessment) -> String {
    let mut parts = Vec::new();
    for set in ef.info_sets() {
        if set.members.len() > 1 {
            let inner: Vec<String> = set
                .members
                .iter()
                .map(|&h| format!("{}@{}", ef.label(h), fmt_q(&a.mu_of(h))))
                .collect();
            parts.push(inner.join(" "));
        }
    }
    parts.join(" | ")
}
