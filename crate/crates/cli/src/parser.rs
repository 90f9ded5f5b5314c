//! Line-oriented sectioned text format for games, structures and fixtures.
//!
//! A document starts with `kind: <kind>` and continues with `[section]`
//! blocks. All numerics are exact rationals written as `p/q` or integers.
//! Histories are dotted action paths; the root is written `.`.

use exactgt::epistemics::EpistemicStructure;
use exactgt::extensive::{
    BehavioralStrategy, ExtensiveForm, HistoryId, Node, Owner, WldOutcome,
};
use exactgt::incompleteinfo::{IncompleteScenario, ScenarioGames, TypeSpace};
use exactgt::lotteries::{SimpleLottery, UtilityFunction};
use exactgt::num::{parse_q, Q};
use exactgt::refinements::Assessment;
use exactgt::strategic::StrategicGame;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// A parsed document of any kind, plus any expectation sections (used by the
/// fixture runner).
#[derive(Debug)]
pub struct Document {
    pub body: Body,
    /// `[expect <op>]` sections: op name and expected report lines.
    pub expectations: Vec<(String, Vec<String>)>,
}

#[derive(Debug)]
pub enum Body {
    Strategic(StrategicGame),
    Extensive(ExtensiveDoc),
    Epistemic(EpistemicStructure),
    Scenario(IncompleteScenario),
    TypeSpace(TypeSpace),
    Lottery(LotteryDoc),
}

#[derive(Debug)]
pub struct ExtensiveDoc {
    pub ef: ExtensiveForm,
    pub assessment: Option<Assessment>,
    pub outcomes: Option<BTreeMap<HistoryId, WldOutcome>>,
}

#[derive(Debug)]
pub struct LotteryDoc {
    pub lottery: SimpleLottery,
    pub utility: Option<UtilityFunction>,
}

struct Lines<'a> {
    rows: Vec<(usize, &'a str)>, // (1-based line number, content)
}

/// Splits the input into logical rows, dropping comments and blank lines but
/// keeping leading whitespace (it encodes tree depth).
fn logical_lines(text: &str) -> Lines<'_> {
    let rows = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let without_comment = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            };
            (i + 1, without_comment.trim_end())
        })
        .filter(|(_, s)| !s.trim().is_empty())
        .collect();
    Lines { rows }
}

struct Section<'a> {
    line: usize,
    header: Vec<String>, // header words inside the brackets
    rows: Vec<(usize, &'a str)>,
}

fn split_sections<'a>(lines: &'a Lines<'a>) -> Result<(String, Vec<Section<'a>>), ParseError> {
    let mut iter = lines.rows.iter().peekable();
    let Some(&&(first_line, first)) = iter.peek() else {
        return err(0, "empty document");
    };
    let kind = match first.trim().strip_prefix("kind:") {
        Some(k) => k.trim().to_string(),
        None => return err(first_line, "expected `kind: <kind>` on the first line"),
    };
    iter.next();
    let mut sections: Vec<Section> = Vec::new();
    for &(line, row) in iter {
        let trimmed = row.trim();
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                return err(line, "unterminated section header, expected `]`");
            }
            let inner = &trimmed[1..trimmed.len() - 1];
            sections.push(Section {
                line,
                header: inner.split_whitespace().map(|s| s.to_string()).collect(),
                rows: Vec::new(),
            });
        } else {
            match sections.last_mut() {
                Some(s) => s.rows.push((line, row)),
                None => return err(line, "content before the first `[section]` header"),
            }
        }
    }
    Ok((kind, sections))
}

fn parse_rational(line: usize, s: &str) -> Result<Q, ParseError> {
    parse_q(s).or_else(|e| err(line, e))
}

fn single_row<'a>(section: &Section<'a>) -> Result<(usize, &'a str), ParseError> {
    match section.rows.as_slice() {
        [row] => Ok(*row),
        _ => err(
            section.line,
            format!(
                "section `{}` needs exactly one row",
                section.header.join(" ")
            ),
        ),
    }
}

/// Splits `a b | c d | e` into groups of words.
fn bar_groups(row: &str) -> Vec<Vec<String>> {
    row.split('|')
        .map(|g| g.split_whitespace().map(|w| w.to_string()).collect())
        .collect()
}

/// Parses `label:prob` pairs.
fn labeled_probs(line: usize, words: &[String]) -> Result<Vec<(String, Q)>, ParseError> {
    words
        .iter()
        .map(|w| match w.rsplit_once(':') {
            Some((label, p)) => Ok((label.to_string(), parse_rational(line, p)?)),
            None => err(line, format!("expected `label:prob`, found `{w}`")),
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let lines = logical_lines(text);
    let (kind, mut sections) = split_sections(&lines)?;
    // peel off expectations
    let mut expectations = Vec::new();
    sections.retain(|s| {
        if s.header.first().map(|h| h.as_str()) == Some("expect") {
            let op = s.header.get(1).cloned().unwrap_or_default();
            let rows = s.rows.iter().map(|(_, r)| r.trim().to_string()).collect();
            expectations.push((op, rows));
            false
        } else {
            true
        }
    });
    let body = match kind.as_str() {
        "strategic" => Body::Strategic(parse_strategic(&sections)?),
        "extensive" => Body::Extensive(parse_extensive(&sections)?),
        "epistemic" => Body::Epistemic(parse_epistemic(&sections)?),
        "scenario" => Body::Scenario(parse_scenario(&sections)?),
        "typespace" => Body::TypeSpace(parse_typespace(&sections)?),
        "lottery" => Body::Lottery(parse_lottery(&sections)?),
        other => return err(1, format!("unknown document kind `{other}`")),
    };
    Ok(Document { body, expectations })
}

fn find<'a, 'b>(sections: &'b [Section<'a>], name: &str) -> Option<&'b Section<'a>> {
    sections
        .iter()
        .find(|s| s.header.first().map(|h| h.as_str()) == Some(name) && s.header.len() == 1)
}

fn find_all<'a, 'b>(sections: &'b [Section<'a>], name: &str) -> Vec<&'b Section<'a>> {
    sections
        .iter()
        .filter(|s| s.header.first().map(|h| h.as_str()) == Some(name))
        .collect()
}

fn require<'a, 'b>(
    sections: &'b [Section<'a>],
    name: &str,
) -> Result<&'b Section<'a>, ParseError> {
    find(sections, name).ok_or(ParseError {
        line: 0,
        message: format!("missing `[{name}]` section"),
    })
}

fn parse_players(sections: &[Section]) -> Result<Vec<String>, ParseError> {
    let s = require(sections, "players")?;
    let (_, row) = single_row(s)?;
    Ok(row.split_whitespace().map(|w| w.to_string()).collect())
}

fn parse_strategy_sections(
    sections: &[Section],
    players: &[String],
) -> Result<Vec<Vec<String>>, ParseError> {
    players
        .iter()
        .map(|p| {
            let s = sections
                .iter()
                .find(|s| {
                    s.header.first().map(|h| h.as_str()) == Some("strategies")
                        && s.header.get(1) == Some(p)
                })
                .ok_or(ParseError {
                    line: 0,
                    message: format!("missing `[strategies {p}]` section"),
                })?;
            let (_, row) = single_row(s)?;
            Ok(row.split_whitespace().map(|w| w.to_string()).collect())
        })
        .collect()
}

fn parse_payoff_rows(
    section: &Section,
    num_players: usize,
) -> Result<BTreeMap<Vec<String>, Vec<Q>>, ParseError> {
    let mut table = BTreeMap::new();
    for &(line, row) in &section.rows {
        let Some((profile, values)) = row.split_once(':') else {
            return err(line, "expected `strategy profile : payoffs`");
        };
        let key: Vec<String> = profile.split_whitespace().map(|w| w.to_string()).collect();
        let pay: Vec<Q> = values
            .split_whitespace()
            .map(|v| parse_rational(line, v))
            .collect::<Result<_, _>>()?;
        if pay.len() != num_players {
            return err(line, format!("expected {num_players} payoffs"));
        }
        table.insert(key, pay);
    }
    Ok(table)
}

fn parse_strategic(sections: &[Section]) -> Result<StrategicGame, ParseError> {
    let players = parse_players(sections)?;
    let strategies = parse_strategy_sections(sections, &players)?;
    let payoffs = require(sections, "payoffs")?;
    let line = payoffs.line;
    let table = parse_payoff_rows(payoffs, players.len())?;
    StrategicGame::new(players, strategies, table)
        .or_else(|e| err(line, format!("bad payoff table: {e}")))
}

/// Row content inside a `[tree]` section.
enum TreeRow {
    Decision { owner: String },
    Terminal { payoffs: Option<Vec<Q>> },
}

fn parse_tree(section: &Section, players: &[String]) -> Result<Node, ParseError> {
    struct Raw {
        line: usize,
        depth: usize,
        action: Option<String>,
        prob: Option<Q>,
        row: TreeRow,
    }
    let mut raws = Vec::new();
    for &(line, row) in &section.rows {
        let indent = row.len() - row.trim_start().len();
        if indent % 2 != 0 {
            return err(line, "tree indentation must use two spaces per level");
        }
        let depth = indent / 2;
        let mut words: Vec<&str> = row.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let action = if depth == 0 {
            if words[0] != "." {
                return err(line, "the root row must start with `.`");
            }
            words.remove(0);
            None
        } else {
            Some(words.remove(0).to_string())
        };
        let prob = match words.first() {
            Some(w) if w.starts_with('@') => {
                let p = parse_rational(line, &w[1..])?;
                words.remove(0);
                Some(p)
            }
            _ => None,
        };
        let tree_row = match words.first() {
            Some(&"->") => {
                words.remove(0);
                if words == ["_"] {
                    TreeRow::Terminal { payoffs: None }
                } else {
                    let pay: Vec<Q> = words
                        .iter()
                        .map(|w| parse_rational(line, w))
                        .collect::<Result<_, _>>()?;
                    if pay.len() != players.len() {
                        return err(line, format!("expected {} payoffs", players.len()));
                    }
                    TreeRow::Terminal { payoffs: Some(pay) }
                }
            }
            Some(owner) => {
                let owner = owner.to_string();
                if owner != "chance" && !players.contains(&owner) {
                    return err(line, format!("unknown player `{owner}`"));
                }
                TreeRow::Decision { owner }
            }
            None => return err(line, "expected an owner or `-> payoffs`"),
        };
        raws.push(Raw {
            line,
            depth,
            action,
            prob,
            row: tree_row,
        });
    }
    if raws.is_empty() {
        return err(section.line, "empty tree");
    }
    fn build(
        raws: &[Raw],
        players: &[String],
        at: usize,
    ) -> Result<(Node, usize), ParseError> {
        let root = &raws[at];
        let mut children: Vec<(String, Option<Q>, Node)> = Vec::new();
        let mut i = at + 1;
        while i < raws.len() && raws[i].depth > root.depth {
            if raws[i].depth != root.depth + 1 {
                return err(raws[i].line, "child row skips a depth level");
            }
            let action = raws[i].action.clone().expect("non-root rows carry actions");
            let prob = raws[i].prob.clone();
            let (node, next) = build(raws, players, i)?;
            children.push((action, prob, node));
            i = next;
        }
        let node = match &root.row {
            TreeRow::Terminal { payoffs } => {
                if !children.is_empty() {
                    return err(root.line, "terminal rows cannot have children");
                }
                Node::Terminal(payoffs.clone().unwrap_or_default())
            }
            TreeRow::Decision { owner } => {
                if children.is_empty() {
                    return err(root.line, "decision rows need children");
                }
                if owner == "chance" {
                    let actions = children
                        .into_iter()
                        .map(|(a, p, n)| match p {
                            Some(p) => Ok((a, p, n)),
                            None => err(root.line, "chance children need `@prob`"),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Node::Chance { actions }
                } else {
                    let player = players.iter().position(|p| p == owner).expect("checked");
                    Node::Decision {
                        player,
                        actions: children.into_iter().map(|(a, _, n)| (a, n)).collect(),
                    }
                }
            }
        };
        Ok((node, i))
    }
    let (node, consumed) = build(&raws, players, 0)?;
    if consumed != raws.len() {
        return err(raws[consumed].line, "unreachable tree row");
    }
    Ok(node)
}

fn parse_path(path: &str) -> Vec<String> {
    if path == "." {
        Vec::new()
    } else {
        path.split('.').map(|s| s.to_string()).collect()
    }
}

fn parse_info_groups(sections: &[Section]) -> Vec<Vec<Vec<String>>> {
    let mut groups = Vec::new();
    for s in find_all(sections, "infoset") {
        let mut group = Vec::new();
        for &(_, row) in &s.rows {
            for path in row.split_whitespace() {
                group.push(parse_path(path));
            }
        }
        groups.push(group);
    }
    groups
}

fn parse_extensive(sections: &[Section]) -> Result<ExtensiveDoc, ParseError> {
    let players = parse_players(sections)?;
    let tree_section = require(sections, "tree")?;
    let tree = parse_tree(tree_section, &players)?;
    let groups = parse_info_groups(sections);
    let group_refs: Vec<Vec<Vec<&str>>> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| p.iter().map(|s| s.as_str()).collect())
                .collect()
        })
        .collect();
    let ef = ExtensiveForm::from_tree(players.clone(), tree, &group_refs)
        .or_else(|e| err(tree_section.line, format!("{e}")))?;
    let sigma_sections = find_all(sections, "sigma");
    let mu_section = find(sections, "mu");
    let assessment = if !sigma_sections.is_empty() {
        let mut profile: Vec<BehavioralStrategy> = (0..players.len())
            .map(|p| BehavioralStrategy {
                player: p,
                mix: BTreeMap::new(),
            })
            .collect();
        for s in &sigma_sections {
            let name = s.header.get(1).cloned().unwrap_or_default();
            let Some(player) = players.iter().position(|p| *p == name) else {
                return err(s.line, format!("unknown player `{name}` in sigma header"));
            };
            for &(line, row) in &s.rows {
                let Some((path, rest)) = row.split_once(':') else {
                    return err(line, "expected `history : action@prob ...`");
                };
                let path = parse_path(path.trim());
                let refs: Vec<&str> = path.iter().map(|s| s.as_str()).collect();
                let h = ef.history(&refs).or_else(|e| err(line, format!("{e}")))?;
                let set = ef.info_set_of(h);
                let info = ef.info_set(set);
                let mut probs = vec![Q::from_integer(0.into()); info.actions.len()];
                for word in rest.split_whitespace() {
                    let Some((action, p)) = word.rsplit_once('@') else {
                        return err(line, format!("expected `action@prob`, found `{word}`"));
                    };
                    let Some(k) = info.actions.iter().position(|a| a == action) else {
                        return err(line, format!("action `{action}` not available"));
                    };
                    probs[k] = parse_rational(line, p)?;
                }
                profile[player].mix.insert(set, probs);
            }
        }
        let mut mu_entries: Vec<(HistoryId, Q)> = Vec::new();
        if let Some(s) = mu_section {
            for &(line, row) in &s.rows {
                for (label, p) in labeled_probs(line, &bar_groups(row).concat())? {
                    let path = parse_path(&label);
                    let refs: Vec<&str> = path.iter().map(|s| s.as_str()).collect();
                    let h = ef.history(&refs).or_else(|e| err(line, format!("{e}")))?;
                    mu_entries.push((h, p));
                }
            }
        }
        let a = Assessment::new(&ef, profile, mu_entries)
            .or_else(|e| err(mu_section.map(|s| s.line).unwrap_or(0), format!("{e}")))?;
        for strat in &a.sigma {
            strat.validate(&ef).or_else(|e| err(0, format!("{e}")))?;
        }
        Some(a)
    } else {
        None
    };
    let outcomes = match find(sections, "outcomes") {
        None => None,
        Some(s) => {
            let mut map = BTreeMap::new();
            for &(line, row) in &s.rows {
                let Some((path, label)) = row.split_once(':') else {
                    return err(line, "expected `terminal : win1|win2|draw`");
                };
                let path = parse_path(path.trim());
                let refs: Vec<&str> = path.iter().map(|s| s.as_str()).collect();
                let h = ef.history(&refs).or_else(|e| err(line, format!("{e}")))?;
                let outcome = match label.trim() {
                    "win1" => WldOutcome::Win1,
                    "win2" => WldOutcome::Win2,
                    "draw" => WldOutcome::Draw,
                    other => return err(line, format!("unknown outcome `{other}`")),
                };
                map.insert(h, outcome);
            }
            Some(map)
        }
    };
    Ok(ExtensiveDoc {
        ef,
        assessment,
        outcomes,
    })
}

fn parse_partitions_and_beliefs(
    sections: &[Section],
    states: &[String],
    agents: &[String],
) -> Result<(Vec<Vec<Vec<String>>>, Option<Vec<Vec<Vec<(String, Q)>>>>), ParseError> {
    let mut partitions = Vec::new();
    let mut beliefs: Vec<Vec<Vec<(String, Q)>>> = Vec::new();
    let mut any_beliefs = false;
    for agent in agents {
        let p = sections
            .iter()
            .find(|s| {
                s.header.first().map(|h| h.as_str()) == Some("partition")
                    && s.header.get(1) == Some(agent)
            })
            .ok_or(ParseError {
                line: 0,
                message: format!("missing `[partition {agent}]` section"),
            })?;
        let (pline, prow) = single_row(p)?;
        let cells = bar_groups(prow);
        for cell in &cells {
            for w in cell {
                if !states.contains(w) {
                    return err(pline, format!("unknown state `{w}` in partition"));
                }
            }
        }
        partitions.push(cells.clone());
        let b = sections.iter().find(|s| {
            s.header.first().map(|h| h.as_str()) == Some("beliefs")
                && s.header.get(1) == Some(agent)
        });
        match b {
            Some(b) => {
                any_beliefs = true;
                let (bline, brow) = single_row(b)?;
                let groups = bar_groups(brow);
                if groups.len() != cells.len() {
                    return err(bline, "one belief group per partition cell");
                }
                let parsed: Vec<Vec<(String, Q)>> = groups
                    .iter()
                    .map(|g| labeled_probs(bline, g))
                    .collect::<Result<_, _>>()?;
                beliefs.push(parsed);
            }
            None => beliefs.push(Vec::new()),
        }
    }
    Ok((partitions, any_beliefs.then_some(beliefs)))
}

fn agent_names(sections: &[Section]) -> Vec<String> {
    sections
        .iter()
        .filter(|s| s.header.first().map(|h| h.as_str()) == Some("partition"))
        .filter_map(|s| s.header.get(1).cloned())
        .collect()
}

fn parse_epistemic(sections: &[Section]) -> Result<EpistemicStructure, ParseError> {
    let states_section = require(sections, "states")?;
    let (_, srow) = single_row(states_section)?;
    let states: Vec<String> = srow.split_whitespace().map(|w| w.to_string()).collect();
    let agents = agent_names(sections);
    if agents.is_empty() {
        return err(states_section.line, "no `[partition <agent>]` sections");
    }
    let (partitions, beliefs) = parse_partitions_and_beliefs(sections, &states, &agents)?;
    EpistemicStructure::new(states, partitions, beliefs)
        .or_else(|e| err(states_section.line, format!("{e}")))
}

fn parse_scenario(sections: &[Section]) -> Result<IncompleteScenario, ParseError> {
    let states_section = require(sections, "states")?;
    let (_, srow) = single_row(states_section)?;
    let states: Vec<String> = srow.split_whitespace().map(|w| w.to_string()).collect();
    let agents = agent_names(sections);
    let (partitions, beliefs) = parse_partitions_and_beliefs(sections, &states, &agents)?;
    let structure = EpistemicStructure::new(states.clone(), partitions, beliefs)
        .or_else(|e| err(states_section.line, format!("{e}")))?;
    let true_state_section = require(sections, "true-state")?;
    let (tline, trow) = single_row(true_state_section)?;
    let true_state = states
        .iter()
        .position(|s| s == trow.trim())
        .ok_or(ParseError {
            line: tline,
            message: format!("unknown true state `{}`", trow.trim()),
        })?;
    let payoff_section_for = |state: &String| -> Result<&Section, ParseError> {
        sections
            .iter()
            .find(|s| {
                s.header.first().map(|h| h.as_str()) == Some("payoffs")
                    && s.header.get(1) == Some(state)
            })
            .ok_or(ParseError {
                line: 0,
                message: format!("missing `[payoffs {state}]` section"),
            })
    };
    let games = if find(sections, "tree").is_some() {
        let tree_section = require(sections, "tree")?;
        let tree = parse_tree(tree_section, &agents)?;
        let groups = parse_info_groups(sections);
        let group_refs: Vec<Vec<Vec<&str>>> = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|p| p.iter().map(|s| s.as_str()).collect())
                    .collect()
            })
            .collect();
        let shape = ExtensiveForm::from_tree(agents.clone(), tree, &group_refs)
            .or_else(|e| err(tree_section.line, format!("{e}")))?;
        let mut payoffs = Vec::new();
        for state in &states {
            let s = payoff_section_for(state)?;
            let mut table = BTreeMap::new();
            for &(line, row) in &s.rows {
                let Some((path, values)) = row.split_once(':') else {
                    return err(line, "expected `terminal : payoffs`");
                };
                let pay: Vec<Q> = values
                    .split_whitespace()
                    .map(|v| parse_rational(line, v))
                    .collect::<Result<_, _>>()?;
                table.insert(path.trim().to_string(), pay);
            }
            payoffs.push(table);
        }
        ScenarioGames::Dynamic { shape, payoffs }
    } else {
        let strategies = parse_strategy_sections(sections, &agents)?;
        let mut payoffs = Vec::new();
        for state in &states {
            let s = payoff_section_for(state)?;
            payoffs.push(parse_payoff_rows(s, agents.len())?);
        }
        ScenarioGames::Strategic {
            strategies,
            payoffs,
        }
    };
    Ok(IncompleteScenario {
        structure,
        games,
        true_state,
    })
}

fn parse_typespace(sections: &[Section]) -> Result<TypeSpace, ParseError> {
    let players = parse_players(sections)?;
    let types: Vec<Vec<String>> = players
        .iter()
        .map(|p| {
            let s = sections
                .iter()
                .find(|s| {
                    s.header.first().map(|h| h.as_str()) == Some("types")
                        && s.header.get(1) == Some(p)
                })
                .ok_or(ParseError {
                    line: 0,
                    message: format!("missing `[types {p}]` section"),
                })?;
            let (_, row) = single_row(s)?;
            Ok(row.split_whitespace().map(|w| w.to_string()).collect())
        })
        .collect::<Result<_, ParseError>>()?;
    let strategies = parse_strategy_sections(sections, &players)?;
    let parse_profile = |line: usize, word: &str| -> Result<Vec<usize>, ParseError> {
        let parts: Vec<&str> = word.split(',').collect();
        if parts.len() != players.len() {
            return err(line, format!("type profile `{word}` has wrong arity"));
        }
        parts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                types[i].iter().position(|x| x == t).ok_or(ParseError {
                    line,
                    message: format!("unknown type `{t}` for player {}", players[i]),
                })
            })
            .collect()
    };
    let relevant_section = require(sections, "relevant")?;
    let mut relevant = Vec::new();
    for &(line, row) in &relevant_section.rows {
        for word in row.split_whitespace() {
            relevant.push(parse_profile(line, word)?);
        }
    }
    let mut utilities: BTreeMap<Vec<usize>, Vec<BTreeMap<Vec<String>, Q>>> = BTreeMap::new();
    for s in find_all(sections, "utility") {
        let player_name = s.header.get(1).ok_or(ParseError {
            line: s.line,
            message: "expected `[utility <player> <profile>]`".into(),
        })?;
        let Some(player) = players.iter().position(|p| p == player_name) else {
            return err(s.line, format!("unknown player `{player_name}`"));
        };
        let profile_word = s.header.get(2).ok_or(ParseError {
            line: s.line,
            message: "expected a type profile in the utility header".into(),
        })?;
        let t = parse_profile(s.line, profile_word)?;
        let mut table = BTreeMap::new();
        for &(line, row) in &s.rows {
            let Some((profile, value)) = row.split_once(':') else {
                return err(line, "expected `strategy profile : value`");
            };
            let key: Vec<String> = profile.split_whitespace().map(|w| w.to_string()).collect();
            table.insert(key, parse_rational(line, value.trim())?);
        }
        utilities
            .entry(t)
            .or_insert_with(|| vec![BTreeMap::new(); players.len()])[player] = table;
    }
    let mut beliefs: Vec<Vec<Vec<(Vec<usize>, Q)>>> = players
        .iter()
        .enumerate()
        .map(|(i, _)| vec![Vec::new(); types[i].len()])
        .collect();
    for s in find_all(sections, "beliefs") {
        let player_name = s.header.get(1).ok_or(ParseError {
            line: s.line,
            message: "expected `[beliefs <player> <type>]`".into(),
        })?;
        let Some(player) = players.iter().position(|p| p == player_name) else {
            return err(s.line, format!("unknown player `{player_name}`"));
        };
        let type_name = s.header.get(2).ok_or(ParseError {
            line: s.line,
            message: "expected a type in the beliefs header".into(),
        })?;
        let Some(ti) = types[player].iter().position(|t| t == type_name) else {
            return err(s.line, format!("unknown type `{type_name}`"));
        };
        let mut entries = Vec::new();
        for &(line, row) in &s.rows {
            for word in row.split_whitespace() {
                let Some((profile, p)) = word.rsplit_once(':') else {
                    return err(line, format!("expected `profile:prob`, found `{word}`"));
                };
                entries.push((parse_profile(line, profile)?, parse_rational(line, p)?));
            }
        }
        beliefs[player][ti] = entries;
    }
    let ts = TypeSpace {
        players,
        types,
        strategies,
        relevant,
        utilities,
        beliefs,
    };
    ts.validate().or_else(|e| err(0, format!("{e}")))?;
    Ok(ts)
}

fn parse_lottery(sections: &[Section]) -> Result<LotteryDoc, ParseError> {
    let outcomes_section = require(sections, "outcomes")?;
    let (_, orow) = single_row(outcomes_section)?;
    let outcomes: Vec<String> = orow.split_whitespace().map(|w| w.to_string()).collect();
    let probs_section = require(sections, "probs")?;
    let (pline, prow) = single_row(probs_section)?;
    let probs: Vec<Q> = prow
        .split_whitespace()
        .map(|w| parse_rational(pline, w))
        .collect::<Result<_, _>>()?;
    let lottery =
        SimpleLottery::new(outcomes, probs).or_else(|e| err(pline, format!("{e}")))?;
    let utility = match find(sections, "utility") {
        None => None,
        Some(s) => {
            let mut values = Vec::new();
            for &(line, row) in &s.rows {
                let Some((o, v)) = row.split_once(':') else {
                    return err(line, "expected `outcome : value`");
                };
                values.push((o.trim().to_string(), parse_rational(line, v.trim())?));
            }
            Some(UtilityFunction::new(values))
        }
    };
    Ok(LotteryDoc { lottery, utility })
}

// ---------------------------------------------------------------------------
// printing (canonical form: parse then print is a fixed point)
// ---------------------------------------------------------------------------

use exactgt::fmt_q;

pub fn print(doc: &Body) -> String {
    match doc {
        Body::Strategic(g) => print_strategic(g),
        Body::Extensive(x) => print_extensive(x),
        Body::Epistemic(s) => print_epistemic("epistemic", s, None),
        Body::Scenario(sc) => print_scenario(sc),
        Body::TypeSpace(ts) => print_typespace(ts),
        Body::Lottery(l) => print_lottery(l),
    }
}

fn print_strategic(g: &StrategicGame) -> String {
    let mut out = String::from("kind: strategic\n[players]\n");
    out.push_str(&g.players().join(" "));
    out.push('\n');
    for (p, name) in g.players().iter().enumerate() {
        out.push_str(&format!("[strategies {name}]\n"));
        out.push_str(&g.strategies(p).join(" "));
        out.push('\n');
    }
    out.push_str("[payoffs]\n");
    for profile in g.profiles() {
        let labels = g.profile_labels(&profile);
        let pay: Vec<String> = g.payoff(&profile).iter().map(fmt_q).collect();
        out.push_str(&format!("{} : {}\n", labels.join(" "), pay.join(" ")));
    }
    out
}

fn print_tree(ef: &ExtensiveForm, h: HistoryId, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    let head = if depth == 0 {
        ".".to_string()
    } else {
        let (parent, k) = ef.parent(h).unwrap();
        let action = ef.actions(parent)[k].clone();
        match ef.owner(parent) {
            Some(Owner::Chance) => {
                let p = &ef.chance_probs(parent).unwrap()[k];
                format!("{action} @{}", fmt_q(p))
            }
            _ => action,
        }
    };
    if let Some(pay) = ef.payoffs(h) {
        if pay.is_empty() {
            out.push_str(&format!("{indent}{head} -> _\n"));
        } else {
            let values: Vec<String> = pay.iter().map(fmt_q).collect();
            out.push_str(&format!("{indent}{head} -> {}\n", values.join(" ")));
        }
    } else {
        let owner = match ef.owner(h).unwrap() {
            Owner::Chance => "chance".to_string(),
            Owner::Player(p) => ef.players()[p].clone(),
        };
        out.push_str(&format!("{indent}{head} {owner}\n"));
        for k in 0..ef.children(h).len() {
            print_tree(ef, ef.child(h, k), depth + 1, out);
        }
    }
}

pub fn history_label(ef: &ExtensiveForm, h: HistoryId) -> String {
    let path = ef.path(h);
    if path.is_empty() {
        ".".to_string()
    } else {
        path.join(".")
    }
}

fn print_extensive_body(ef: &ExtensiveForm, out: &mut String) {
    out.push_str("[players]\n");
    out.push_str(&ef.players().join(" "));
    out.push('\n');
    out.push_str("[tree]\n");
    print_tree(ef, exactgt::extensive::ROOT, 0, out);
    for set in ef.info_sets() {
        if set.members.len() > 1 {
            out.push_str("[infoset]\n");
            let paths: Vec<String> = set.members.iter().map(|&m| history_label(ef, m)).collect();
            out.push_str(&paths.join(" "));
            out.push('\n');
        }
    }
}

fn print_extensive(x: &ExtensiveDoc) -> String {
    let mut out = String::from("kind: extensive\n");
    print_extensive_body(&x.ef, &mut out);
    if let Some(a) = &x.assessment {
        for strat in &a.sigma {
            let player = &x.ef.players()[strat.player];
            if strat.mix.is_empty() {
                continue;
            }
            out.push_str(&format!("[sigma {player}]\n"));
            for (&set, probs) in &strat.mix {
                let info = x.ef.info_set(set);
                let member = history_label(&x.ef, info.members[0]);
                let parts: Vec<String> = info
                    .actions
                    .iter()
                    .zip(probs)
                    .map(|(a, p)| format!("{a}@{}", fmt_q(p)))
                    .collect();
                out.push_str(&format!("{member} : {}\n", parts.join(" ")));
            }
        }
        out.push_str("[mu]\n");
        for set in x.ef.info_sets() {
            if set.members.len() > 1 {
                let parts: Vec<String> = set
                    .members
                    .iter()
                    .map(|&m| format!("{}:{}", history_label(&x.ef, m), fmt_q(&a.mu_of(m))))
                    .collect();
                out.push_str(&parts.join(" "));
                out.push('\n');
            }
        }
    }
    if let Some(outcomes) = &x.outcomes {
        out.push_str("[outcomes]\n");
        for (&h, o) in outcomes {
            let label = match o {
                WldOutcome::Win1 => "win1",
                WldOutcome::Win2 => "win2",
                WldOutcome::Draw => "draw",
            };
            out.push_str(&format!("{} : {label}\n", history_label(&x.ef, h)));
        }
    }
    out
}

fn print_epistemic(kind: &str, s: &EpistemicStructure, agents: Option<&[String]>) -> String {
    let mut out = format!("kind: {kind}\n[states]\n");
    out.push_str(&s.states().join(" "));
    out.push('\n');
    let names: Vec<String> = match agents {
        Some(a) => a.to_vec(),
        None => (1..=s.num_agents()).map(|i| i.to_string()).collect(),
    };
    for (agent, name) in names.iter().enumerate() {
        out.push_str(&format!("[partition {name}]\n"));
        let cells: Vec<String> = s
            .cells(agent)
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|&w| s.states()[w].clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        out.push_str(&cells.join(" | "));
        out.push('\n');
        if s.has_beliefs() {
            out.push_str(&format!("[beliefs {name}]\n"));
            let groups: Vec<String> = s
                .cells(agent)
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    let table = s.cell_beliefs(agent, c).expect("beliefs present");
                    cell.iter()
                        .map(|&w| format!("{}:{}", s.states()[w], fmt_q(&table[w])))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            out.push_str(&groups.join(" | "));
            out.push('\n');
        }
    }
    out
}

fn print_scenario(sc: &IncompleteScenario) -> String {
    let names: Vec<String> = (1..=sc.num_players()).map(|i| i.to_string()).collect();
    let mut out = print_epistemic("scenario", &sc.structure, Some(&names));
    out.push_str("[true-state]\n");
    out.push_str(&sc.structure.states()[sc.true_state]);
    out.push('\n');
    match &sc.games {
        ScenarioGames::Strategic {
            strategies,
            payoffs,
        } => {
            for (p, name) in names.iter().enumerate() {
                out.push_str(&format!("[strategies {name}]\n"));
                out.push_str(&strategies[p].join(" "));
                out.push('\n');
            }
            for (w, state) in sc.structure.states().iter().enumerate() {
                out.push_str(&format!("[payoffs {state}]\n"));
                for (profile, pay) in &payoffs[w] {
                    let values: Vec<String> = pay.iter().map(fmt_q).collect();
                    out.push_str(&format!(
                        "{} : {}\n",
                        profile.join(" "),
                        values.join(" ")
                    ));
                }
            }
        }
        ScenarioGames::Dynamic { shape, payoffs } => {
            out.push_str("[tree]\n");
            print_tree(shape, exactgt::extensive::ROOT, 0, &mut out);
            for set in shape.info_sets() {
                if set.members.len() > 1 {
                    out.push_str("[infoset]\n");
                    let paths: Vec<String> = set
                        .members
                        .iter()
                        .map(|&m| history_label(shape, m))
                        .collect();
                    out.push_str(&paths.join(" "));
                    out.push('\n');
                }
            }
            for (w, state) in sc.structure.states().iter().enumerate() {
                out.push_str(&format!("[payoffs {state}]\n"));
                for (path, pay) in &payoffs[w] {
                    let values: Vec<String> = pay.iter().map(fmt_q).collect();
                    out.push_str(&format!("{path} : {}\n", values.join(" ")));
                }
            }
        }
    }
    out
}

fn print_typespace(ts: &TypeSpace) -> String {
    let mut out = String::from("kind: typespace\n[players]\n");
    out.push_str(&ts.players.join(" "));
    out.push('\n');
    for (p, name) in ts.players.iter().enumerate() {
        out.push_str(&format!("[types {name}]\n"));
        out.push_str(&ts.types[p].join(" "));
        out.push('\n');
    }
    for (p, name) in ts.players.iter().enumerate() {
        out.push_str(&format!("[strategies {name}]\n"));
        out.push_str(&ts.strategies[p].join(" "));
        out.push('\n');
    }
    out.push_str("[relevant]\n");
    let profiles: Vec<String> = ts
        .relevant
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(i, &ti)| ts.types[i][ti].clone())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    out.push_str(&profiles.join(" "));
    out.push('\n');
    for t in &ts.relevant {
        let profile_word: String = t
            .iter()
            .enumerate()
            .map(|(i, &ti)| ts.types[i][ti].clone())
            .collect::<Vec<_>>()
            .join(",");
        for (p, name) in ts.players.iter().enumerate() {
            out.push_str(&format!("[utility {name} {profile_word}]\n"));
            for (profile, v) in &ts.utilities[t][p] {
                out.push_str(&format!("{} : {}\n", profile.join(" "), fmt_q(v)));
            }
        }
    }
    for (p, name) in ts.players.iter().enumerate() {
        for (ti, tname) in ts.types[p].iter().enumerate() {
            out.push_str(&format!("[beliefs {name} {tname}]\n"));
            let entries: Vec<String> = ts.beliefs[p][ti]
                .iter()
                .map(|(t, prob)| {
                    let word: String = t
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| ts.types[i][x].clone())
                        .collect::<Vec<_>>()
                        .join(",");
                    format!("{word}:{}", fmt_q(prob))
                })
                .collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
    }
    out
}

fn print_lottery(l: &LotteryDoc) -> String {
    let mut out = String::from("kind: lottery\n[outcomes]\n");
    out.push_str(&l.lottery.outcomes().join(" "));
    out.push('\n');
    out.push_str("[probs]\n");
    let probs: Vec<String> = l.lottery.probs().iter().map(fmt_q).collect();
    out.push_str(&probs.join(" "));
    out.push('\n');
    if let Some(u) = &l.utility {
        out.push_str("[utility]\n");
        for (o, v) in u.values() {
            out.push_str(&format!("{o} : {}\n", fmt_q(v)));
        }
    }
    out
}
