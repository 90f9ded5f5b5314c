//! Deterministic DOT emission for game trees and knowledge structures.

use crate::parser::history_label;
use exactgt::epistemics::EpistemicStructure;
use exactgt::extensive::{ExtensiveForm, Owner, ROOT};
use exactgt::fmt_q;

/// Renders the tree: histories as nodes, actions as edge labels (with chance
/// probabilities), information sets as same-rank clusters of like-styled
/// nodes. Output is byte-deterministic for a given form.
pub fn emit_tree(ef: &ExtensiveForm) -> String {
    let mut out = String::from("digraph game {\n  rankdir=TB;\n  node [shape=circle];\n");
    for h in ef.histories() {
        let id = format!("h{h}");
        let label = history_label(ef, h);
        if let Some(pay) = ef.payoffs(h) {
            let values: Vec<String> = pay.iter().map(fmt_q).collect();
            out.push_str(&format!(
                "  {id} [shape=box, label=\"{}\\n({})\"];\n",
                label,
                values.join(", ")
            ));
        } else {
            let owner = match ef.owner(h).unwrap() {
                Owner::Chance => "chance".to_string(),
                Owner::Player(p) => ef.players()[p].clone(),
            };
            out.push_str(&format!("  {id} [label=\"{label}\\n{owner}\"];\n"));
        }
    }
    let mut stack = vec![ROOT];
    while let Some(h) = stack.pop() {
        for k in 0..ef.children(h).len() {
            let c = ef.child(h, k);
            let mut edge_label = ef.actions(h)[k].clone();
            if let Some(probs) = ef.chance_probs(h) {
                edge_label = format!("{edge_label} ({})", fmt_q(&probs[k]));
            }
            out.push_str(&format!("  h{h} -> h{c} [label=\"{edge_label}\"];\n"));
            stack.push(c);
        }
    }
    for (i, set) in ef.info_sets().iter().enumerate() {
        if set.members.len() > 1 {
            let ids: Vec<String> = set.members.iter().map(|m| format!("h{m}")).collect();
            out.push_str(&format!(
                "  subgraph cluster_set{i} {{ label=\"{}:{}\"; style=dashed; {}; }}\n",
                ef.players()[set.player],
                i,
                ids.join("; ")
            ));
            out.push_str(&format!("  {{ rank=same; {}; }}\n", ids.join("; ")));
        }
    }
    out.push_str("}\n");
    out
}

/// Renders a knowledge structure: states as nodes, one colored edge bundle
/// per agent linking the states inside each cell.
pub fn emit_structure(s: &EpistemicStructure) -> String {
    const COLORS: [&str; 6] = ["blue", "red", "darkgreen", "orange", "purple", "brown"];
    let mut out = String::from("graph structure {\n  node [shape=circle];\n");
    for (w, label) in s.states().iter().enumerate() {
        out.push_str(&format!("  s{w} [label=\"{label}\"];\n"));
    }
    for agent in 0..s.num_agents() {
        let color = COLORS[agent % COLORS.len()];
        for cell in s.cells(agent) {
            for pair in cell.windows(2) {
                out.push_str(&format!(
                    "  s{} -- s{} [color={color}, label=\"{}\"];\n",
                    pair[0],
                    pair[1],
                    agent + 1
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
