//! Command implementations: each takes a parsed document plus options and
//! produces a deterministic text report. Errors carry the process exit code
//! (1 usage, 2 validation failure, 3 cap exceeded / undecided).

use crate::dot;
use crate::parser::{history_label, Body, Document, ExtensiveDoc};
use exactgt::epistemics::{
    agm_revise, agreement_holds, check_arrow, ck, ck_partition, ckr_states, common_prior,
    probabilistic_revision, EpistemicStructure, Event, StatePlausibilityOrder,
};
use exactgt::extensive::{
    backward_induction, describe_profile, solve_zermelo, spe, subgames, to_strategic_form,
    EfError, WldCategory,
};
use exactgt::incompleteinfo::{
    bayesian_nash, classify, harsanyi_consistent, harsanyi_transform, state_to_type,
    type_to_state, EquilibriumKind, IncompleteInfoError, ScenarioGames,
};
use exactgt::num::fmt_q;
use exactgt::refinements::{
    is_pbe, is_sequential_equilibrium, is_sequentially_rational, is_weak_sequential, Decision,
};
use exactgt::strategic::{
    dominance, dominated_by_mixed, mixed_nash_2p, pure_nash, Dominance, MixedEquilibrium,
    RationalityCertificate, StrategicGame,
};

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
    pub fn undecided(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

type CliResult = Result<String, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Dot,
}

fn strategic_of(doc: &Document) -> Result<StrategicGame, CliError> {
    match &doc.body {
        Body::Strategic(g) => Ok(g.clone()),
        Body::Extensive(x) => Ok(to_strategic_form(&x.ef).0),
        _ => Err(CliError::usage(
            "this command needs a strategic or extensive document",
        )),
    }
}

fn extensive_of(doc: &Document) -> Result<&ExtensiveDoc, CliError> {
    match &doc.body {
        Body::Extensive(x) => Ok(x),
        _ => Err(CliError::usage("this command needs an extensive document")),
    }
}

fn epistemic_of(doc: &Document) -> Result<&EpistemicStructure, CliError> {
    match &doc.body {
        Body::Epistemic(s) => Ok(s),
        Body::Scenario(sc) => Ok(&sc.structure),
        _ => Err(CliError::usage(
            "this command needs an epistemic or scenario document",
        )),
    }
}

fn profile_line(labels: &[String]) -> String {
    format!("({})", labels.join(","))
}

pub fn cmd_validate(doc: &Document, format: Format) -> CliResult {
    match &doc.body {
        Body::Extensive(x) => {
            let diags = x.ef.validate();
            if format == Format::Dot {
                return Ok(dot::emit_tree(&x.ef));
            }
            if diags.is_empty() {
                Ok("valid".to_string())
            } else {
                Err(CliError::invalid(diags.join("\n")))
            }
        }
        Body::Epistemic(s) => {
            if format == Format::Dot {
                return Ok(dot::emit_structure(s));
            }
            Ok("valid".to_string())
        }
        Body::Scenario(sc) => {
            if format == Format::Dot {
                return Ok(dot::emit_structure(&sc.structure));
            }
            Ok("valid".to_string())
        }
        _ => Ok("valid".to_string()),
    }
}

pub fn cmd_nash(doc: &Document) -> CliResult {
    let game = strategic_of(doc)?;
    let profiles = pure_nash(&game);
    if profiles.is_empty() {
        Ok("none".to_string())
    } else {
        Ok(profiles
            .iter()
            .map(|p| profile_line(p))
            .collect::<Vec<_>>()
            .join("\n"))
    }
}

pub fn cmd_mixed_nash(doc: &Document) -> CliResult {
    let game = strategic_of(doc)?;
    let eqs = mixed_nash_2p(&game).map_err(|e| CliError::usage(format!("{e}")))?;
    if eqs.is_empty() {
        return Ok("none".to_string());
    }
    let mut lines = Vec::new();
    for eq in eqs {
        match eq {
            MixedEquilibrium::Isolated(m0, m1) => {
                lines.push(format!(
                    "({}, {})",
                    m0.describe(&game),
                    m1.describe(&game)
                ));
            }
            MixedEquilibrium::Component {
                support,
                constraints,
            } => {
                lines.push(format!(
                    "component support ({}) x ({}): {}",
                    support.0.join(","),
                    support.1.join(","),
                    constraints.join("; ")
                ));
            }
        }
    }
    Ok(lines.join("\n"))
}

pub fn cmd_dominate(doc: &Document, player_name: &str, strategy: &str) -> CliResult {
    let game = strategic_of(doc)?;
    let player = game
        .players()
        .iter()
        .position(|p| p == player_name)
        .ok_or_else(|| CliError::usage(format!("unknown player `{player_name}`")))?;
    let mut lines = Vec::new();
    for other in game.strategies(player).to_vec() {
        if other == strategy {
            continue;
        }
        let rel = dominance(&game, player, strategy, &other)
            .map_err(|e| CliError::usage(format!("{e}")))?;
        let word = match rel {
            Dominance::Strict => "strictly dominates",
            Dominance::Weak => "weakly dominates",
            Dominance::Equivalent => "is equivalent to",
            Dominance::None => "does not dominate",
        };
        lines.push(format!("{strategy} {word} {other}"));
    }
    match dominated_by_mixed(&game, player, strategy, None)
        .map_err(|e| CliError::usage(format!("{e}")))?
    {
        RationalityCertificate::DominatingMixture(mx) => {
            lines.push(format!(
                "{strategy} is strictly dominated by the mixture {}",
                mx.describe(&game)
            ));
        }
        RationalityCertificate::SupportingBelief(belief) => {
            let parts: Vec<String> = belief
                .iter()
                .map(|(prof, p)| format!("({})@{}", prof.join(","), fmt_q(p)))
                .collect();
            lines.push(format!(
                "{strategy} is a best response to the belief {}",
                parts.join(" ")
            ));
        }
    }
    Ok(lines.join("\n"))
}

pub fn cmd_bi(doc: &Document, cap: usize) -> CliResult {
    let x = extensive_of(doc)?;
    let sols = backward_induction(&x.ef, cap).map_err(map_ef_err)?;
    let mut lines = Vec::new();
    for sol in &sols {
        let labels: Vec<String> = sol.iter().map(|s| s.describe(&x.ef)).collect();
        lines.push(profile_line(&labels));
    }
    Ok(lines.join("\n"))
}

pub fn cmd_spe(doc: &Document, cap: usize) -> CliResult {
    let x = extensive_of(doc)?;
    let sols = spe(&x.ef, cap).map_err(map_ef_err)?;
    let mut lines = Vec::new();
    for profile in &sols {
        lines.push(describe_profile(&x.ef, profile));
    }
    Ok(lines.join("\n"))
}

pub fn cmd_subgames(doc: &Document) -> CliResult {
    let x = extensive_of(doc)?;
    let subs = subgames(&x.ef);
    if subs.is_empty() {
        return Ok("none".to_string());
    }
    Ok(subs
        .iter()
        .map(|&(r, minimal)| {
            format!(
                "{}{}",
                history_label(&x.ef, r),
                if minimal { " (minimal)" } else { "" }
            )
        })
        .collect::<Vec<_>>()
        .join("\n"))
}

fn map_ef_err(e: EfError) -> CliError {
    match e {
        EfError::CapExceeded(n) => CliError::undecided(format!("cap of {n} exceeded")),
        EfError::UnresolvedSubgame(l) => {
            CliError::undecided(format!("no equilibrium found in the subgame at `{l}`"))
        }
        other => CliError::invalid(format!("{other}")),
    }
}

pub fn cmd_zermelo(doc: &Document) -> CliResult {
    let x = extensive_of(doc)?;
    let outcomes = x
        .outcomes
        .as_ref()
        .ok_or_else(|| CliError::usage("document has no `[outcomes]` section"))?;
    let sol = solve_zermelo(&x.ef, outcomes).map_err(map_ef_err)?;
    let head = match sol.category {
        WldCategory::Player1Wins => "player 1 wins",
        WldCategory::Player2Wins => "player 2 wins",
        WldCategory::Draw => "both players can force at least a draw",
    };
    let mut lines = vec![head.to_string()];
    let strategy = |choice: &std::collections::BTreeMap<usize, usize>| -> String {
        choice
            .iter()
            .map(|(&set, &k)| {
                let info = x.ef.info_set(set);
                format!(
                    "{}:{}",
                    history_label(&x.ef, info.members[0]),
                    info.actions[k]
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    lines.push(format!("strategy 1: {}", strategy(&sol.strategy1)));
    lines.push(format!("strategy 2: {}", strategy(&sol.strategy2)));
    Ok(lines.join("\n"))
}

fn assessment_of(x: &ExtensiveDoc) -> Result<&exactgt::refinements::Assessment, CliError> {
    x.assessment
        .as_ref()
        .ok_or_else(|| CliError::usage("document has no `[sigma]`/`[mu]` sections"))
}

pub fn cmd_wse(doc: &Document) -> CliResult {
    let x = extensive_of(doc)?;
    let a = assessment_of(x)?;
    let (rational, witness) = is_sequentially_rational(&x.ef, a);
    if is_weak_sequential(&x.ef, a) {
        Ok("yes".to_string())
    } else if !rational {
        let w = witness.unwrap();
        let set = x.ef.info_set(w.set_id);
        Ok(format!(
            "no (player {} improves at {} with {})",
            x.ef.players()[w.player],
            history_label(&x.ef, set.members[0]),
            w.plan
                .iter()
                .map(|(&s, &k)| x.ef.info_set(s).actions[k].clone())
                .collect::<Vec<_>>()
                .join(".")
        ))
    } else {
        Ok("no (beliefs violate updating at a reached information set)".to_string())
    }
}

pub fn cmd_pbe(doc: &Document, cap: usize) -> CliResult {
    let x = extensive_of(doc)?;
    let a = assessment_of(x)?;
    match is_pbe(&x.ef, a, cap) {
        Decision::Yes => Ok("yes".to_string()),
        Decision::No => Ok("no".to_string()),
        Decision::Undecided => Err(CliError::undecided(format!(
            "undecided at the configured bound of {cap}"
        ))),
    }
}

pub fn cmd_seqeq(doc: &Document) -> CliResult {
    let x = extensive_of(doc)?;
    let a = assessment_of(x)?;
    match is_sequential_equilibrium(&x.ef, a) {
        Decision::Yes => Ok("yes".to_string()),
        Decision::No => Ok("no".to_string()),
        Decision::Undecided => Err(CliError::undecided("undecided at the configured bound")),
    }
}

fn event_of(s: &EpistemicStructure, labels: &str) -> Result<Event, CliError> {
    let words: Vec<&str> = labels.split_whitespace().collect();
    s.event(&words)
        .map_err(|e| CliError::usage(format!("{e}")))
}

pub fn cmd_know(doc: &Document, agent_name: &str, event: &str) -> CliResult {
    let s = epistemic_of(doc)?;
    let agent: usize = agent_name
        .parse::<usize>()
        .ok()
        .and_then(|i| i.checked_sub(1))
        .ok_or_else(|| CliError::usage("agent must be a 1-based index"))?;
    let e = event_of(s, event)?;
    let ke = exactgt::epistemics::know(s, agent, &e)
        .map_err(|e| CliError::usage(format!("{e}")))?;
    Ok(format!("{{{}}}", s.event_labels(&ke).join(" ")))
}

pub fn cmd_ck(doc: &Document, event: Option<&str>) -> CliResult {
    let s = epistemic_of(doc)?;
    let partition = ck_partition(s);
    let cells: Vec<String> = partition
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|&w| s.states()[w].clone())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let mut lines = vec![format!("partition: {}", cells.join(" | "))];
    if let Some(event) = event {
        let e = event_of(s, event)?;
        let cke = ck(s, &e);
        lines.push(format!("ck: {{{}}}", s.event_labels(&cke).join(" ")));
    }
    Ok(lines.join("\n"))
}

pub fn cmd_prior(doc: &Document) -> CliResult {
    match &doc.body {
        Body::TypeSpace(ts) => {
            match harsanyi_consistent(ts).map_err(|e| CliError::invalid(format!("{e}")))? {
                None => Ok("none".to_string()),
                Some(prior) => Ok(prior
                    .iter()
                    .map(|(t, p)| format!("{}@{}", ts.profile_label(t), fmt_q(p)))
                    .collect::<Vec<_>>()
                    .join(" ")),
            }
        }
        _ => {
            let s = epistemic_of(doc)?;
            match common_prior(s).map_err(|e| CliError::invalid(format!("{e}")))? {
                None => Ok("none".to_string()),
                Some(p) => Ok(p
                    .iter()
                    .enumerate()
                    .map(|(w, v)| format!("{}@{}", s.states()[w], fmt_q(v)))
                    .collect::<Vec<_>>()
                    .join(" ")),
            }
        }
    }
}

pub fn cmd_agree(doc: &Document, event: &str) -> CliResult {
    let s = epistemic_of(doc)?;
    let e = event_of(s, event)?;
    let report = agreement_holds(s, &e).map_err(|e| CliError::invalid(format!("{e}")))?;
    if report.holds {
        match report.common_posterior {
            Some((state, value)) => Ok(format!(
                "agree (at {state} both posteriors are {})",
                fmt_q(&value)
            )),
            None => Ok("agree".to_string()),
        }
    } else {
        let (state, p, q_) = report.violation.unwrap();
        Ok(format!(
            "disagree at {state}: {} vs {}",
            fmt_q(&p),
            fmt_q(&q_)
        ))
    }
}

pub fn cmd_revise(
    doc: &Document,
    order_spec: &str,
    info_specs: &[String],
    p0_spec: Option<&str>,
) -> CliResult {
    let s = epistemic_of(doc)?;
    let levels: Vec<Vec<&str>> = order_spec
        .split('|')
        .map(|level| level.split_whitespace().collect())
        .collect();
    let order = StatePlausibilityOrder::new(s, levels)
        .map_err(|e| CliError::usage(format!("{e}")))?;
    let mut items: Vec<Event> = Vec::new();
    for spec in info_specs {
        items.push(event_of(s, spec)?);
    }
    // the sure event is always an item of information
    let all: Event = (0..s.num_states()).collect();
    if !items.contains(&all) {
        items.push(all);
    }
    let f = agm_revise(&order, &items).map_err(|e| CliError::usage(format!("{e}")))?;
    let mut lines = Vec::new();
    for (e, fe) in &f {
        lines.push(format!(
            "f({{{}}}) = {{{}}}",
            s.event_labels(e).join(" "),
            s.event_labels(fe).join(" ")
        ));
    }
    lines.push(format!(
        "arrow: {}",
        if check_arrow(&f) { "holds" } else { "fails" }
    ));
    if let Some(p0_spec) = p0_spec {
        let entries: Vec<&str> = p0_spec.split_whitespace().collect();
        let mut p0 = vec![exactgt::num::q0(); s.num_states()];
        for word in entries {
            let Some((label, v)) = word.rsplit_once(':') else {
                return Err(CliError::usage(format!(
                    "expected `state:prob`, found `{word}`"
                )));
            };
            let w = s
                .state_index(label)
                .map_err(|e| CliError::usage(format!("{e}")))?;
            p0[w] = exactgt::parse_q(v).map_err(CliError::usage)?;
        }
        let revised =
            probabilistic_revision(&order, &p0, &items).map_err(|e| CliError::usage(format!("{e}")))?;
        for (e, dist) in &revised {
            let parts: Vec<String> = dist
                .iter()
                .enumerate()
                .filter(|(_, v)| *v > &exactgt::num::q0())
                .map(|(w, v)| format!("{}:{}", s.states()[w], fmt_q(v)))
                .collect();
            lines.push(format!(
                "P({{{}}}) = {}",
                s.event_labels(e).join(" "),
                parts.join(" ")
            ));
        }
    }
    Ok(lines.join("\n"))
}

pub fn cmd_ckr(doc: &Document) -> CliResult {
    let game = strategic_of(doc)?;
    let model = exactgt::epistemics::build_ckr_model(&game);
    let mut lines = Vec::new();
    lines.push(format!(
        "states: {}",
        model.structure.states().join(" ")
    ));
    let ckr = ckr_states(&model);
    lines.push(format!(
        "ckr: {{{}}}",
        model.structure.event_labels(&ckr).join(" ")
    ));
    Ok(lines.join("\n"))
}

fn map_ii_err(e: IncompleteInfoError) -> CliError {
    match e {
        IncompleteInfoError::NoCommonPrior => CliError::invalid(format!("{e}")),
        other => CliError::invalid(format!("{other}")),
    }
}

pub fn cmd_harsanyi(doc: &Document, format: Format) -> CliResult {
    let Body::Scenario(sc) = &doc.body else {
        return Err(CliError::usage("this command needs a scenario document"));
    };
    let ef = harsanyi_transform(sc).map_err(map_ii_err)?;
    if format == Format::Dot {
        return Ok(dot::emit_tree(&ef));
    }
    let mut lines = Vec::new();
    let probs: Vec<String> = ef
        .chance_probs(exactgt::extensive::ROOT)
        .unwrap()
        .iter()
        .map(fmt_q)
        .collect();
    lines.push(format!("nature: {}", probs.join(" ")));
    lines.push(format!(
        "true state: {}",
        sc.structure.states()[sc.true_state]
    ));
    let eqs = bayesian_nash(sc).map_err(map_ii_err)?;
    if eqs.is_empty() {
        lines.push("bayesian-nash: none".to_string());
    } else {
        for eq in &eqs {
            let kind = match classify(sc, eq) {
                Ok(EquilibriumKind::Pooling) => " pooling",
                Ok(EquilibriumKind::Separating) => " separating",
                Ok(EquilibriumKind::Neither) => " neither",
                Err(_) => "",
            };
            lines.push(format!("bayesian-nash: {}{}", profile_line(eq), kind));
        }
    }
    // what is actually played at the true state, per equilibrium strategy
    if let (ScenarioGames::Strategic { .. }, Some(first)) = (&sc.games, eqs.first()) {
        let (game, pures) = to_strategic_form(&ef);
        let mut actual = Vec::new();
        for (p, label) in first.iter().enumerate() {
            let idx = game.strategy_index(p, label).unwrap();
            let strat = &pures[p][idx];
            // find the info set whose members live under the true state
            let state_label = &sc.structure.states()[sc.true_state];
            for (&set, &k) in &strat.choice {
                let member = ef.info_set(set).members[0];
                let path = ef.path(member);
                if path.first() == Some(state_label) {
                    actual.push(ef.info_set(set).actions[k].clone());
                    break;
                }
            }
        }
        if actual.len() == first.len() {
            lines.push(format!(
                "actually played in the first equilibrium: {}",
                profile_line(&actual)
            ));
        }
    }
    Ok(lines.join("\n"))
}

pub fn cmd_totypes(doc: &Document) -> CliResult {
    let Body::Scenario(sc) = &doc.body else {
        return Err(CliError::usage("this command needs a scenario document"));
    };
    let ts = state_to_type(sc).map_err(map_ii_err)?;
    Ok(crate::parser::print(&Body::TypeSpace(ts)))
}

pub fn cmd_tostates(doc: &Document) -> CliResult {
    let Body::TypeSpace(ts) = &doc.body else {
        return Err(CliError::usage("this command needs a typespace document"));
    };
    let sc = type_to_state(ts).map_err(map_ii_err)?;
    Ok(crate::parser::print(&Body::Scenario(sc)))
}

pub fn cmd_lottery(doc: &Document) -> CliResult {
    let Body::Lottery(l) = &doc.body else {
        return Err(CliError::usage("this command needs a lottery document"));
    };
    let mut lines = Vec::new();
    if let Ok(ev) = l.lottery.expected_value() {
        lines.push(format!("expected value: {}", fmt_q(&ev)));
    }
    if let Some(u) = &l.utility {
        let eu = l
            .lottery
            .expected_utility(u)
            .map_err(|e| CliError::invalid(format!("{e}")))?;
        lines.push(format!("expected utility: {}", fmt_q(&eu)));
    }
    if lines.is_empty() {
        lines.push("no numeric outcomes and no utility table".to_string());
    }
    Ok(lines.join("\n"))
}

/// Runs one expectation op against a document, returning the report text.
pub fn run_expectation(doc: &Document, op: &str, cap: usize) -> CliResult {
    match op {
        "validate" => match cmd_validate(doc, Format::Text) {
            Ok(s) => Ok(s),
            Err(e) if e.code == 2 => Ok("invalid".to_string()),
            Err(e) => Err(e),
        },
        "nash" => cmd_nash(doc),
        "mixed-nash" => cmd_mixed_nash(doc),
        "bi" => cmd_bi(doc, cap),
        "spe" => cmd_spe(doc, cap),
        "subgames" => cmd_subgames(doc),
        "zermelo" => cmd_zermelo(doc)
            .map(|s| s.lines().next().unwrap_or("").to_string()),
        "wse" => cmd_wse(doc).map(|s| s.split(' ').next().unwrap_or("").to_string()),
        "pbe" => cmd_pbe(doc, cap),
        "seqeq" => cmd_seqeq(doc),
        "prior" => cmd_prior(doc),
        "ck-partition" => {
            let s = epistemic_of(doc)?;
            let cells: Vec<String> = ck_partition(s)
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|&w| s.states()[w].clone())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            Ok(cells.join(" | "))
        }
        "nature" => {
            let Body::Scenario(sc) = &doc.body else {
                return Err(CliError::usage("nature expectation needs a scenario"));
            };
            let ef = harsanyi_transform(sc).map_err(map_ii_err)?;
            let probs: Vec<String> = ef
                .chance_probs(exactgt::extensive::ROOT)
                .unwrap()
                .iter()
                .map(fmt_q)
                .collect();
            Ok(probs.join(" "))
        }
        "bayesian-nash" => {
            let Body::Scenario(sc) = &doc.body else {
                return Err(CliError::usage("bayesian-nash expectation needs a scenario"));
            };
            let eqs = bayesian_nash(sc).map_err(map_ii_err)?;
            let mut lines = Vec::new();
            for eq in &eqs {
                let kind = match classify(sc, eq) {
                    Ok(EquilibriumKind::Pooling) => " pooling",
                    Ok(EquilibriumKind::Separating) => " separating",
                    Ok(EquilibriumKind::Neither) => " neither",
                    Err(_) => "",
                };
                lines.push(format!("{}{}", profile_line(eq), kind));
            }
            Ok(lines.join("\n"))
        }
        "ev" => {
            let Body::Lottery(l) = &doc.body else {
                return Err(CliError::usage("ev expectation needs a lottery"));
            };
            let ev = l
                .lottery
                .expected_value()
                .map_err(|e| CliError::invalid(format!("{e}")))?;
            Ok(fmt_q(&ev))
        }
        "eu" => {
            let Body::Lottery(l) = &doc.body else {
                return Err(CliError::usage("eu expectation needs a lottery"));
            };
            let u = l
                .utility
                .as_ref()
                .ok_or_else(|| CliError::usage("lottery has no utility table"))?;
            let eu = l
                .lottery
                .expected_utility(u)
                .map_err(|e| CliError::invalid(format!("{e}")))?;
            Ok(fmt_q(&eu))
        }
        other => Err(CliError::usage(format!("unknown expectation op `{other}`"))),
    }
}

/// Runs every fixture: parses, evaluates each expectation, compares reports.
/// Returns (report text, all passed).
pub fn run_fixtures(fixtures: &[(String, String)], cap: usize) -> (String, bool) {
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (name, text) in fixtures {
        match crate::parser::parse(text) {
            Err(e) => {
                all_ok = false;
                lines.push(format!("{name}: FAIL (parse error: {e})"));
            }
            Ok(doc) => {
                if doc.expectations.is_empty() {
                    lines.push(format!("{name}: pass (no expectations)"));
                    continue;
                }
                let mut fixture_ok = true;
                let mut notes = Vec::new();
                for (op, expected) in &doc.expectations {
                    match run_expectation(&doc, op, cap) {
                        Err(e) => {
                            fixture_ok = false;
                            notes.push(format!("{op}: error {}", e.message));
                        }
                        Ok(report) => {
                            let got: Vec<String> = report
                                .lines()
                                .map(|l| l.trim().to_string())
                                .filter(|l| !l.is_empty())
                                .collect();
                            let want: Vec<String> = expected
                                .iter()
                                .map(|l| l.trim().to_string())
                                .filter(|l| !l.is_empty())
                                .collect();
                            if got != want {
                                fixture_ok = false;
                                notes.push(format!(
                                    "{op}: expected {want:?}, got {got:?}"
                                ));
                            }
                        }
                    }
                }
                if fixture_ok {
                    lines.push(format!("{name}: pass"));
                } else {
                    all_ok = false;
                    lines.push(format!("{name}: FAIL ({})", notes.join("; ")));
                }
            }
        }
    }
    (lines.join("\n"), all_ok)
}

/// The corpus bundled into the binary.
pub fn builtin_fixtures() -> Vec<(String, String)> {
    macro_rules! fixture {
        ($name:literal) => {
            (
                $name.to_string(),
                include_str!(concat!("../fixtures/", $name)).to_string(),
            )
        };
    }
    vec![
        fixture!("strategic_unique_nash.fix"),
        fixture!("strategic_three_player.fix"),
        fixture!("strategic_no_nash.fix"),
        fixture!("mixed_2x2_unique.fix"),
        fixture!("mixed_3x2_support.fix"),
        fixture!("deletion_chain.fix"),
        fixture!("auction_second_price.fix"),
        fixture!("pivotal_mechanism.fix"),
        fixture!("tree_split_offer.fix"),
        fixture!("tree_two_solutions.fix"),
        fixture!("tree_chain_store.fix"),
        fixture!("tree_nested_subgames.fix"),
        fixture!("tree_mixed_spe.fix"),
        fixture!("tree_forgetful.fix"),
        fixture!("zermelo_small_sum.fix"),
        fixture!("epistemic_three_agents.fix"),
        fixture!("epistemic_prior_five.fix"),
        fixture!("epistemic_no_prior.fix"),
        fixture!("assessment_wse.fix"),
        fixture!("assessment_pbe_not_seq.fix"),
        fixture!("assessment_sequential.fix"),
        fixture!("assessment_reputation.fix"),
        fixture!("scenario_one_sided.fix"),
        fixture!("scenario_gift.fix"),
        fixture!("scenario_two_sided.fix"),
        fixture!("typespace_five_profiles.fix"),
        fixture!("typespace_three_players.fix"),
        fixture!("lottery_money.fix"),
        fixture!("lottery_utility.fix"),
    ]
}
