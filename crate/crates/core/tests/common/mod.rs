//! Shared game fixtures for the integration suites: the solved examples the
//! engine is exercised against, with construction helpers.

#![allow(dead_code)]

use exactgt::epistemics::EpistemicStructure;
use exactgt::extensive::{
    BehavioralProfile, BehavioralStrategy, ExtensiveForm, Node, PureStrategy,
};
use exactgt::incompleteinfo::{IncompleteScenario, ScenarioGames, TypeSpace};
use exactgt::num::{q, qi, Q};
use exactgt::refinements::Assessment;
use exactgt::strategic::StrategicGame;
use std::collections::BTreeMap;

pub fn t(v: &[i64]) -> Node {
    Node::Terminal(v.iter().map(|&x| qi(x)).collect())
}

pub fn tq(v: &[(i64, i64)]) -> Node {
    Node::Terminal(v.iter().map(|&(n, d)| q(n, d)).collect())
}

pub fn d(player: usize, actions: Vec<(&str, Node)>) -> Node {
    Node::Decision {
        player,
        actions: actions.into_iter().map(|(a, n)| (a.to_string(), n)).collect(),
    }
}

pub fn ch(actions: Vec<(&str, Q, Node)>) -> Node {
    Node::Chance {
        actions: actions
            .into_iter()
            .map(|(a, p, n)| (a.to_string(), p, n))
            .collect(),
    }
}

/// Information set id of the history at `path`.
pub fn iset(ef: &ExtensiveForm, path: &[&str]) -> usize {
    ef.info_set_of(ef.history(path).expect("history exists"))
}

/// Behavioral strategy from (representative member path, distribution) pairs.
pub fn bstrat(ef: &ExtensiveForm, player: usize, entries: &[(&[&str], &[Q])]) -> BehavioralStrategy {
    BehavioralStrategy {
        player,
        mix: entries
            .iter()
            .map(|(path, probs)| (iset(ef, path), probs.to_vec()))
            .collect(),
    }
}

/// Pure behavioral strategy from (member path, action name) pairs.
pub fn pstrat(ef: &ExtensiveForm, player: usize, entries: &[(&[&str], &str)]) -> BehavioralStrategy {
    BehavioralStrategy {
        player,
        mix: entries
            .iter()
            .map(|(path, action)| {
                let set = iset(ef, path);
                let info = ef.info_set(set);
                let k = info
                    .actions
                    .iter()
                    .position(|a| a == action)
                    .expect("action available");
                let mut probs = vec![q(0, 1); info.actions.len()];
                probs[k] = q(1, 1);
                (set, probs)
            })
            .collect(),
    }
}

/// Assessment from a behavioral profile and belief entries by history path.
pub fn assessment(
    ef: &ExtensiveForm,
    sigma: BehavioralProfile,
    mu: &[(&[&str], Q)],
) -> Assessment {
    let entries = mu
        .iter()
        .map(|(path, p)| (ef.history(path).expect("history exists"), p.clone()))
        .collect();
    Assessment::new(ef, sigma, entries).expect("valid assessment")
}

/// Pure strategy from (member path, action name) pairs.
pub fn pure(ef: &ExtensiveForm, player: usize, entries: &[(&[&str], &str)]) -> PureStrategy {
    PureStrategy {
        player,
        choice: entries
            .iter()
            .map(|(path, action)| {
                let set = iset(ef, path);
                let k = ef
                    .info_set(set)
                    .actions
                    .iter()
                    .position(|a| a == action)
                    .expect("action available");
                (set, k)
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// perfect-information trees
// ---------------------------------------------------------------------------

/// Three-player perfect-information game with a tie at the last mover,
/// hence two backward-induction solutions.
pub fn three_player_two_solutions() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(1, vec![("c", t(&[2, 1, 0])), ("d", t(&[0, 0, 2]))]),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("e", t(&[3, 1, 0])),
                            ("f", d(2, vec![("g", t(&[1, 2, 1])), ("h", t(&[0, 0, 1]))])),
                        ],
                    ),
                ),
            ],
        ),
        &[],
    )
    .unwrap()
}

/// Chain-store game with two sequential entrants. Payoffs are
/// (incumbent, first entrant, second entrant); the incumbent's payoff sums
/// its per-town profits.
pub fn chain_store() -> ExtensiveForm {
    let entry_subtree = |town1_cs: i64, town1_bw1: i64| -> Node {
        d(
            2,
            vec![
                (
                    "in",
                    d(
                        0,
                        vec![
                            ("fight", t(&[town1_cs, town1_bw1, 0])),
                            ("acc", t(&[town1_cs + 2, town1_bw1, 2])),
                        ],
                    ),
                ),
                ("out", t(&[town1_cs + 5, town1_bw1, 1])),
            ],
        )
    };
    ExtensiveForm::from_tree(
        vec!["CS".into(), "BW1".into(), "BW2".into()],
        d(
            1,
            vec![
                (
                    "in",
                    d(
                        0,
                        vec![
                            ("fight", entry_subtree(0, 0)),
                            ("acc", entry_subtree(2, 2)),
                        ],
                    ),
                ),
                ("out", entry_subtree(5, 1)),
            ],
        ),
        &[],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// imperfect-information trees
// ---------------------------------------------------------------------------

/// Three-player game with one non-minimal subgame; the unique
/// subgame-perfect equilibrium differs from one of the plain Nash profiles.
pub fn nested_subgames_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(
                        1,
                        vec![
                            ("c", d(2, vec![("g", t(&[1, 0, 0])), ("h", t(&[1, 0, 1]))])),
                            ("d", d(2, vec![("g", t(&[0, 2, 0])), ("h", t(&[2, 1, 2]))])),
                        ],
                    ),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            (
                                "e",
                                d(
                                    2,
                                    vec![
                                        (
                                            "A",
                                            d(
                                                0,
                                                vec![
                                                    (
                                                        "C",
                                                        d(
                                                            1,
                                                            vec![
                                                                ("E", t(&[1, 0, 0])),
                                                                ("F", t(&[1, 1, 1])),
                                                            ],
                                                        ),
                                                    ),
                                                    (
                                                        "D",
                                                        d(
                                                            1,
                                                            vec![
                                                                ("E", t(&[0, 2, 0])),
                                                                ("F", t(&[0, 0, 0])),
                                                            ],
                                                        ),
                                                    ),
                                                ],
                                            ),
                                        ),
                                        ("B", t(&[0, 0, 1])),
                                    ],
                                ),
                            ),
                            (
                                "f",
                                d(2, vec![("A", t(&[3, 2, 2])), ("B", t(&[0, 1, 0]))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[
            vec![vec!["a", "c"], vec!["a", "d"]],
            vec![vec!["b", "e"], vec!["b", "f"]],
            vec![vec!["b", "e", "A", "C"], vec!["b", "e", "A", "D"]],
        ],
    )
    .unwrap()
}

/// Three-player game with two minimal subgames hanging under an information
/// set that spans two branches; it has exactly two subgame-perfect
/// equilibria.
pub fn two_spe_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "L",
                    d(
                        1,
                        vec![
                            (
                                "U",
                                d(
                                    2,
                                    vec![
                                        (
                                            "a",
                                            d(
                                                0,
                                                vec![
                                                    (
                                                        "c",
                                                        d(
                                                            2,
                                                            vec![
                                                                ("g", t(&[0, 1, 0])),
                                                                ("h", t(&[3, 1, 2])),
                                                            ],
                                                        ),
                                                    ),
                                                    (
                                                        "d",
                                                        d(
                                                            2,
                                                            vec![
                                                                ("g", t(&[2, 1, 1])),
                                                                ("h", t(&[2, 1, 2])),
                                                            ],
                                                        ),
                                                    ),
                                                ],
                                            ),
                                        ),
                                        (
                                            "b",
                                            d(
                                                1,
                                                vec![
                                                    ("e", t(&[3, 2, 1])),
                                                    ("f", t(&[1, 0, 0])),
                                                ],
                                            ),
                                        ),
                                    ],
                                ),
                            ),
                            ("D", t(&[5, 1, 0])),
                        ],
                    ),
                ),
                (
                    "R",
                    d(2, vec![("a", t(&[5, 0, 0])), ("b", t(&[3, 2, 3]))]),
                ),
            ],
        ),
        &[
            // third player's top set spans the two branches
            vec![vec!["L", "U"], vec!["R"]],
            // her bottom set inside the left subgame
            vec![vec!["L", "U", "a", "c"], vec!["L", "U", "a", "d"]],
        ],
    )
    .unwrap()
}

/// Card-signalling game: the first mover's choice is reported truthfully or
/// not, the guesser cannot tell. No proper subgames.
pub fn no_subgame_card_game() -> ExtensiveForm {
    let guess = |correct_third: bool| -> Node {
        if correct_third {
            t(&[-1, -1, 2])
        } else {
            t(&[1, 1, -2])
        }
    };
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "B",
                    d(
                        1,
                        vec![
                            (
                                "sb",
                                d(2, vec![("gB", guess(true)), ("gR", guess(false))]),
                            ),
                            (
                                "sr",
                                d(2, vec![("gB", guess(true)), ("gR", guess(false))]),
                            ),
                        ],
                    ),
                ),
                (
                    "R",
                    d(
                        1,
                        vec![
                            (
                                "sb",
                                d(2, vec![("gB", guess(false)), ("gR", guess(true))]),
                            ),
                            (
                                "sr",
                                d(2, vec![("gB", guess(false)), ("gR", guess(true))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[
            vec![vec!["B", "sb"], vec!["R", "sb"]],
            vec![vec!["B", "sr"], vec!["R", "sr"]],
        ],
    )
    .unwrap()
}

/// Two-stage game whose both subgames only have mixed equilibria; the unique
/// subgame-perfect equilibrium mixes behind both branches.
pub fn mixed_spe_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "L",
                    d(
                        1,
                        vec![
                            (
                                "A",
                                d(2, vec![("C", t(&[1, 3, 1])), ("D", t(&[2, 0, 2]))]),
                            ),
                            (
                                "B",
                                d(2, vec![("C", t(&[2, 0, 3])), ("D", t(&[0, 1, 2]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "R",
                    d(
                        1,
                        vec![
                            (
                                "E",
                                d(2, vec![("G", t(&[2, 0, 3])), ("H", t(&[0, 1, 2]))]),
                            ),
                            (
                                "F",
                                d(2, vec![("G", t(&[1, 2, 1])), ("H", t(&[2, 0, 3]))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[
            vec![vec!["L", "A"], vec!["L", "B"]],
            vec![vec!["R", "E"], vec!["R", "F"]],
        ],
    )
    .unwrap()
}

/// Kuhn-conversion workout frame: the second mover cannot tell the first
/// mover's choice; the first mover moves again down one branch.
pub fn kuhn_frame() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(1, vec![("c", t(&[0, 0])), ("d", t(&[0, 0]))]),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("c", t(&[0, 0])),
                            (
                                "d",
                                d(0, vec![("e", t(&[0, 0])), ("f", t(&[0, 0]))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[vec![vec!["a"], vec!["b"]]],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// assessment workouts
// ---------------------------------------------------------------------------

/// Three-player tree with a singleton middle node and a two-history bottom
/// set; weak sequential equilibrium fails subgame perfection here.
pub fn wse_not_spe_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(1, vec![("f", t(&[1, 0, 0])), ("g", t(&[0, 1, 0]))]),
                ),
                (
                    "b",
                    d(1, vec![("f", t(&[2, 2, 0])), ("g", t(&[0, 1, 0]))]),
                ),
                (
                    "c",
                    d(
                        1,
                        vec![
                            (
                                "d",
                                d(2, vec![("h", t(&[1, 1, 3])), ("k", t(&[0, 0, 1]))]),
                            ),
                            (
                                "e",
                                d(2, vec![("h", t(&[1, 2, 0])), ("k", t(&[0, 0, 1]))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b"]],
            vec![vec!["c", "d"], vec!["c", "e"]],
        ],
    )
    .unwrap()
}

/// Two-player game where one-shot deviations look fine but a joint
/// continuation deviation pays: the second mover must change now and later.
pub fn continuation_deviation_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(
                        1,
                        vec![
                            ("c", t(&[1, 1])),
                            (
                                "d",
                                d(1, vec![("e", t(&[0, 0])), ("f", t(&[0, 2]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("c", t(&[0, 0])),
                            (
                                "d",
                                d(1, vec![("e", t(&[0, 1])), ("f", t(&[2, 0]))]),
                            ),
                        ],
                    ),
                ),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b"]],
            vec![vec!["a", "d"], vec!["b", "d"]],
        ],
    )
    .unwrap()
}

/// Three-player game with a three-history middle information set used for
/// sequential-value arithmetic.
pub fn three_node_belief_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "L",
                    d(
                        1,
                        vec![
                            (
                                "A",
                                d(2, vec![("c", t(&[4, 5, 5])), ("d", t(&[0, 0, 2]))]),
                            ),
                            ("B", t(&[1, 2, 0])),
                        ],
                    ),
                ),
                (
                    "M",
                    d(
                        1,
                        vec![
                            (
                                "A",
                                d(2, vec![("c", t(&[0, 3, 1])), ("d", t(&[0, 0, 2]))]),
                            ),
                            (
                                "B",
                                d(2, vec![("c", t(&[6, 4, 2])), ("d", t(&[0, 0, 2]))]),
                            ),
                        ],
                    ),
                ),
                ("R", t(&[3, 0, 0])),
            ],
        ),
        &[
            vec![vec!["L"], vec!["M"]],
            vec![
                vec!["L", "A"],
                vec!["M", "A"],
                vec!["M", "B"],
            ],
        ],
    )
    .unwrap()
}

/// Chance-rooted two-player signal game with a shared response set; supports
/// a family of weak sequential equilibria.
pub fn chance_signal_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        ch(vec![
            (
                "l",
                q(1, 4),
                d(
                    0,
                    vec![
                        ("A", t(&[1, 2])),
                        (
                            "B",
                            d(1, vec![("E", t(&[2, 0])), ("F", t(&[0, 3]))]),
                        ),
                    ],
                ),
            ),
            (
                "r",
                q(3, 4),
                d(
                    0,
                    vec![
                        (
                            "C",
                            d(1, vec![("E", t(&[3, 1])), ("F", t(&[0, 0]))]),
                        ),
                        ("D", t(&[2, 2])),
                    ],
                ),
            ),
        ]),
        &[vec![vec!["l", "B"], vec!["r", "C"]]],
    )
    .unwrap()
}

/// Even-chance variant of the signal game with four pure weak sequential
/// equilibria.
pub fn even_signal_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        ch(vec![
            (
                "l",
                q(1, 2),
                d(
                    0,
                    vec![
                        ("A", t(&[1, 0])),
                        (
                            "B",
                            d(1, vec![("E", t(&[1, 2])), ("F", t(&[0, 0]))]),
                        ),
                    ],
                ),
            ),
            (
                "r",
                q(1, 2),
                d(
                    0,
                    vec![
                        (
                            "C",
                            d(1, vec![("E", t(&[1, 0])), ("F", t(&[0, 0]))]),
                        ),
                        ("D", t(&[0, 0])),
                    ],
                ),
            ),
        ]),
        &[vec![vec!["l", "B"], vec!["r", "C"]]],
    )
    .unwrap()
}

/// Three-player game where one response is dominated at the information
/// set, killing a Nash profile at the weak-sequential level.
pub fn dominated_choice_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(2, vec![("c", t(&[2, 0, 1])), ("d", t(&[0, 0, 0]))]),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            (
                                "e",
                                d(2, vec![("c", t(&[2, 2, 1])), ("d", t(&[0, 0, 0]))]),
                            ),
                            ("f", t(&[2, 1, 0])),
                        ],
                    ),
                ),
            ],
        ),
        &[vec![vec!["a"], vec!["b", "e"]]],
    )
    .unwrap()
}

/// Three-player frame where an assessment with reversed beliefs across two
/// information sets is consistent at the plausibility level but fails choice
/// measurability.
pub fn belief_reversal_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(
                        1,
                        vec![
                            ("d", t(&[1, 1, 0])),
                            (
                                "e",
                                d(2, vec![("f", t(&[0, 0, 2])), ("g", t(&[1, 0, 1]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("d", t(&[0, 1, 0])),
                            (
                                "e",
                                d(2, vec![("f", t(&[3, 2, 1])), ("g", t(&[0, 2, 2]))]),
                            ),
                        ],
                    ),
                ),
                ("c", t(&[2, 1, 1])),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b"]],
            vec![vec!["a", "e"], vec!["b", "e"]],
        ],
    )
    .unwrap()
}

/// Same frame as `belief_reversal_game` with payoffs making parallel beliefs
/// sequentially rational: used for the uniform-ratio workouts.
pub fn parallel_beliefs_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(
                        1,
                        vec![
                            ("d", t(&[0, 1, 0])),
                            (
                                "e",
                                d(2, vec![("f", t(&[0, 0, 0])), ("g", t(&[0, 0, 1]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("d", t(&[0, 1, 0])),
                            (
                                "e",
                                d(2, vec![("f", t(&[0, 0, 0])), ("g", t(&[0, 0, 1]))]),
                            ),
                        ],
                    ),
                ),
                ("c", t(&[1, 1, 1])),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b"]],
            vec![vec!["a", "e"], vec!["b", "e"]],
        ],
    )
    .unwrap()
}

/// Crossing-roles frame: two outer players each act both before and after
/// the other branch's moves; carries a mixed perfect Bayesian equilibrium.
pub fn crossing_frame_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(
                        1,
                        vec![
                            (
                                "d",
                                d(2, vec![("f", t(&[1, 2, 0])), ("g", t(&[0, 2, 3]))]),
                            ),
                            (
                                "e",
                                d(2, vec![("f", t(&[0, 3, 1])), ("g", t(&[0, 3, 2]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "b",
                    d(
                        2,
                        vec![
                            (
                                "f",
                                d(1, vec![("d", t(&[3, 2, 1])), ("e", t(&[0, 0, 0]))]),
                            ),
                            (
                                "g",
                                d(1, vec![("d", t(&[1, 2, 0])), ("e", t(&[0, 1, 0]))]),
                            ),
                        ],
                    ),
                ),
                ("c", t(&[2, 2, 2])),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b", "f"], vec!["b", "g"]],
            vec![vec!["b"], vec!["a", "d"], vec!["a", "e"]],
        ],
    )
    .unwrap()
}

/// The canonical perfect Bayesian equilibrium of `crossing_frame_game`.
pub fn crossing_frame_assessment(ef: &ExtensiveForm) -> Assessment {
    let sigma = vec![
        pstrat(ef, 0, &[(&[], "c")]),
        pstrat(ef, 1, &[(&["a"], "d")]),
        bstrat(ef, 2, &[(&["b"], &[q(1, 3), q(2, 3)])]),
    ];
    assessment(
        ef,
        sigma,
        &[
            (&["a", "d"], q(1, 4)),
            (&["a", "e"], q(0, 1)),
            (&["b"], q(3, 4)),
            (&["a"], q(1, 4)),
            (&["b", "f"], q(1, 4)),
            (&["b", "g"], q(2, 4)),
        ],
    )
}

/// Four-player frame for the class-distribution workouts: a one-parameter
/// family of valid class distributions exists on the middle class.
pub fn wide_root_frame() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into(), "4".into()],
        d(
            0,
            vec![
                ("a", d(2, vec![("L", t(&[0; 4])), ("R", t(&[0; 4]))])),
                ("b", d(2, vec![("L", t(&[0; 4])), ("R", t(&[0; 4]))])),
                ("c", d(2, vec![("L", t(&[0; 4])), ("R", t(&[0; 4]))])),
                ("d", d(2, vec![("l", t(&[0; 4])), ("r", t(&[0; 4]))])),
                (
                    "e",
                    d(
                        2,
                        vec![
                            ("l", t(&[0; 4])),
                            (
                                "r",
                                d(3, vec![("C", t(&[0; 4])), ("D", t(&[0; 4]))]),
                            ),
                        ],
                    ),
                ),
                ("f", d(1, vec![("A", t(&[0; 4])), ("B", t(&[0; 4]))])),
            ],
        ),
        &[
            vec![vec!["a"], vec!["b"], vec!["c"]],
            vec![vec!["d"], vec!["e"]],
        ],
    )
    .unwrap()
}

/// The assessment carried by `wide_root_frame`.
pub fn wide_root_assessment(ef: &ExtensiveForm) -> Assessment {
    let sigma = vec![
        pstrat(ef, 0, &[(&[], "f")]),
        pstrat(ef, 1, &[(&["f"], "A")]),
        bstrat(
            ef,
            2,
            &[
                (&["a"], &[q(1, 2), q(1, 2)]),
                (&["d"], &[q(1, 5), q(4, 5)]),
            ],
        ),
        pstrat(ef, 3, &[(&["e", "r"], "D")]),
    ];
    assessment(
        ef,
        sigma,
        &[
            (&["a"], q(0, 1)),
            (&["b"], q(1, 3)),
            (&["c"], q(2, 3)),
            (&["d"], q(3, 4)),
            (&["e"], q(1, 4)),
        ],
    )
}

/// Four-level frame whose canonical order admits a choice-measurable
/// representation with uneven level gaps.
pub fn uneven_gap_frame() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        d(
            0,
            vec![
                ("a", t(&[1, 0])),
                (
                    "b",
                    d(1, vec![("e", t(&[2, 1])), ("f", t(&[0, 0]))]),
                ),
                (
                    "c",
                    d(1, vec![("e", t(&[0, 1])), ("f", t(&[3, 0]))]),
                ),
                ("d", t(&[0, 0])),
            ],
        ),
        &[vec![vec!["b"], vec!["c"]]],
    )
    .unwrap()
}

/// Deeper signal game used for the sequential-equilibrium workout: the
/// receiver's set has three histories fed through different routes.
pub fn three_route_game() -> ExtensiveForm {
    ExtensiveForm::from_tree(
        vec!["1".into(), "2".into(), "3".into()],
        d(
            0,
            vec![
                ("a", t(&[1, 0, 0])),
                (
                    "b",
                    d(
                        1,
                        vec![
                            ("T", t(&[0, 3, 0])),
                            (
                                "B",
                                d(2, vec![("L", t(&[0, 0, 1])), ("R", t(&[0, 0, 0]))]),
                            ),
                        ],
                    ),
                ),
                (
                    "c",
                    d(
                        1,
                        vec![
                            ("T", t(&[0, 0, 0])),
                            (
                                "B",
                                d(
                                    0,
                                    vec![
                                        ("e", t(&[1, 0, 0])),
                                        (
                                            "f",
                                            d(
                                                2,
                                                vec![
                                                    ("L", t(&[2, 3, 0])),
                                                    ("R", t(&[0, 0, 1])),
                                                ],
                                            ),
                                        ),
                                    ],
                                ),
                            ),
                        ],
                    ),
                ),
                (
                    "d",
                    d(2, vec![("L", t(&[0, 0, 1])), ("R", t(&[0, 0, 0]))]),
                ),
            ],
        ),
        &[
            vec![vec!["b"], vec!["c"]],
            vec![vec!["b", "B"], vec!["c", "B", "f"], vec!["d"]],
        ],
    )
    .unwrap()
}

/// The sequential equilibrium of `three_route_game`.
pub fn three_route_assessment(ef: &ExtensiveForm) -> Assessment {
    let sigma = vec![
        pstrat(ef, 0, &[(&[], "a"), (&["c", "B"], "f")]),
        pstrat(ef, 1, &[(&["b"], "T")]),
        pstrat(ef, 2, &[(&["d"], "L")]),
    ];
    assessment(
        ef,
        sigma,
        &[
            (&["b"], q(7, 10)),
            (&["c"], q(3, 10)),
            (&["b", "B"], q(7, 18)),
            (&["c", "B", "f"], q(3, 18)),
            (&["d"], q(8, 18)),
        ],
    )
}

/// The reference full-support prior validating the sequential equilibrium of
/// `three_route_game`.
pub fn three_route_reference_prior(ef: &ExtensiveForm) -> BTreeMap<usize, Q> {
    [
        (&[][..], q(9, 40)),
        (&["b"][..], q(7, 40)),
        (&["b", "B"][..], q(7, 40)),
        (&["c"][..], q(3, 40)),
        (&["c", "B"][..], q(3, 40)),
        (&["c", "B", "f"][..], q(3, 40)),
        (&["d"][..], q(8, 40)),
    ]
    .into_iter()
    .map(|(path, v)| (ef.history(path).unwrap(), v))
    .collect()
}

/// Reputation game with two entrants facing an incumbent of unknown temper;
/// second-round responses are already folded into the payoffs.
pub fn reputation_game(p: Q) -> ExtensiveForm {
    let one = qi(1);
    let town = |hot: bool| -> Node {
        // terminal payoffs: (incumbent, first entrant, second entrant)
        let (f_in, f_out, s_in, s_out, top_in, top_out) = if hot {
            (
                tq(&[(4, 1), (0, 1), (0, 1)]),
                tq(&[(7, 1), (0, 1), (1, 1)]),
                tq(&[(7, 2), (3, 2), (0, 1)]),
                tq(&[(13, 2), (3, 2), (1, 1)]),
                tq(&[(7, 1), (1, 1), (0, 1)]),
                tq(&[(10, 1), (1, 1), (1, 1)]),
            )
        } else {
            (
                tq(&[(3, 2), (0, 1), (3, 2)]),
                tq(&[(5, 1), (0, 1), (1, 1)]),
                tq(&[(3, 1), (3, 2), (3, 2)]),
                tq(&[(13, 2), (3, 2), (1, 1)]),
                tq(&[(13, 2), (1, 1), (3, 2)]),
                tq(&[(10, 1), (1, 1), (1, 1)]),
            )
        };
        d(
            1,
            vec![
                (
                    "in",
                    d(
                        0,
                        vec![
                            ("fight", d(2, vec![("in2", f_in), ("out2", f_out)])),
                            ("share", d(2, vec![("in2", s_in), ("out2", s_out)])),
                        ],
                    ),
                ),
                ("out", d(2, vec![("in2", top_in), ("out2", top_out)])),
            ],
        )
    };
    ExtensiveForm::from_tree(
        vec!["INC".into(), "PE1".into(), "PE2".into()],
        ch(vec![
            ("H", p.clone(), town(true)),
            ("R", &one - &p, town(false)),
        ]),
        &[
            vec![vec!["H", "out"], vec!["R", "out"]],
            vec![vec!["H", "in", "share"], vec!["R", "in", "share"]],
            vec![vec!["H", "in", "fight"], vec!["R", "in", "fight"]],
        ],
    )
    .unwrap()
}

/// The reputation assessment: both entrants stay out, the incumbent would
/// fight, the second entrant reads a fight as proof of a hothead.
pub fn reputation_assessment(ef: &ExtensiveForm, p: Q) -> Assessment {
    let one = qi(1);
    let sigma = vec![
        pstrat(
            ef,
            0,
            &[(&["H", "in"], "fight"), (&["R", "in"], "fight")],
        ),
        pstrat(ef, 1, &[(&["H"], "out"), (&["R"], "out")]),
        pstrat(
            ef,
            2,
            &[
                (&["H", "out"], "out2"),
                (&["H", "in", "share"], "in2"),
                (&["H", "in", "fight"], "out2"),
            ],
        ),
    ];
    assessment(
        ef,
        sigma,
        &[
            (&["H", "out"], p.clone()),
            (&["R", "out"], &one - &p),
            (&["H", "in", "share"], q(0, 1)),
            (&["R", "in", "share"], q(1, 1)),
            (&["H", "in", "fight"], q(1, 1)),
            (&["R", "in", "fight"], q(0, 1)),
        ],
    )
}

// ---------------------------------------------------------------------------
// incomplete-information scenarios and type spaces
// ---------------------------------------------------------------------------

fn two_state_structure(labels: (&str, &str), uninformed: (Q, Q)) -> EpistemicStructure {
    let (a, b) = labels;
    EpistemicStructure::new(
        vec![a.to_string(), b.to_string()],
        vec![
            vec![vec![a.to_string()], vec![b.to_string()]],
            vec![vec![a.to_string(), b.to_string()]],
        ],
        Some(vec![
            vec![
                vec![(a.to_string(), qi(1))],
                vec![(b.to_string(), qi(1))],
            ],
            vec![vec![
                (a.to_string(), uninformed.0),
                (b.to_string(), uninformed.1),
            ]],
        ]),
    )
    .unwrap()
}

fn payoff_table(entries: &[((&str, &str), (i64, i64))]) -> BTreeMap<Vec<String>, Vec<Q>> {
    entries
        .iter()
        .map(|&((s1, s2), (u1, u2))| {
            (
                vec![s1.to_string(), s2.to_string()],
                vec![qi(u1), qi(u2)],
            )
        })
        .collect()
}

/// One-sided scenario: the informed player's payoffs differ across the two
/// states; two separating pure Bayesian Nash equilibria.
pub fn one_sided_scenario() -> IncompleteScenario {
    IncompleteScenario {
        structure: two_state_structure(("alpha", "beta"), (q(2, 3), q(1, 3))),
        games: ScenarioGames::Strategic {
            strategies: vec![
                vec!["T".into(), "B".into()],
                vec!["L".into(), "R".into()],
            ],
            payoffs: vec![
                payoff_table(&[
                    (("T", "L"), (0, 3)),
                    (("T", "R"), (3, 9)),
                    (("B", "L"), (3, 3)),
                    (("B", "R"), (0, 0)),
                ]),
                payoff_table(&[
                    (("T", "L"), (6, 3)),
                    (("T", "R"), (0, 9)),
                    (("B", "L"), (3, 3)),
                    (("B", "R"), (3, 0)),
                ]),
            ],
        },
        true_state: 1,
    }
}

/// Chicken with a possibly reckless driver; unique pooling equilibrium.
pub fn chicken_scenario() -> IncompleteScenario {
    IncompleteScenario {
        structure: two_state_structure(("normal", "reckless"), (q(4, 5), q(1, 5))),
        games: ScenarioGames::Strategic {
            strategies: vec![
                vec!["s".into(), "ds".into()],
                vec!["s".into(), "ds".into()],
            ],
            payoffs: vec![
                payoff_table(&[
                    (("s", "s"), (85, 85)),
                    (("s", "ds"), (85, 100)),
                    (("ds", "s"), (100, 85)),
                    (("ds", "ds"), (0, 0)),
                ]),
                payoff_table(&[
                    (("s", "s"), (0, 85)),
                    (("s", "ds"), (0, 100)),
                    (("ds", "s"), (100, 85)),
                    (("ds", "ds"), (50, 0)),
                ]),
            ],
        },
        true_state: 0,
    }
}

/// Gift game (dynamic one-sided scenario): the sender knows her disposition,
/// the receiver observes only whether a gift arrives.
pub fn gift_scenario(p: Q) -> IncompleteScenario {
    let one = qi(1);
    let shape = ExtensiveForm::from_tree(
        vec!["1".into(), "2".into()],
        d(
            0,
            vec![
                (
                    "g",
                    d(1, vec![("a", t(&[0, 0])), ("r", t(&[0, 0]))]),
                ),
                ("ng", t(&[0, 0])),
            ],
        ),
        &[],
    )
    .unwrap();
    let table = |ga: (i64, i64), gr: (i64, i64)| -> BTreeMap<String, Vec<Q>> {
        [
            ("g.a".to_string(), vec![qi(ga.0), qi(ga.1)]),
            ("g.r".to_string(), vec![qi(gr.0), qi(gr.1)]),
            ("ng".to_string(), vec![qi(0), qi(0)]),
        ]
        .into_iter()
        .collect()
    };
    IncompleteScenario {
        structure: EpistemicStructure::new(
            vec!["friend".into(), "enemy".into()],
            vec![
                vec![vec!["friend".into()], vec!["enemy".into()]],
                vec![vec!["friend".into(), "enemy".into()]],
            ],
            Some(vec![
                vec![
                    vec![("friend".to_string(), qi(1))],
                    vec![("enemy".to_string(), qi(1))],
                ],
                vec![vec![
                    ("friend".to_string(), p.clone()),
                    ("enemy".to_string(), &one - &p),
                ]],
            ]),
        )
        .unwrap(),
        games: ScenarioGames::Dynamic {
            shape,
            payoffs: vec![table((1, 1), (-1, 0)), table((1, -1), (-1, 0))],
        },
        true_state: 0,
    }
}

/// Two-sided scenario over three states: both players face uncertainty; the
/// common prior is (2/4, 1/4, 1/4).
pub fn two_sided_scenario() -> IncompleteScenario {
    let g = payoff_table(&[
        (("A", "C"), (1, 3)),
        (("A", "D"), (0, 1)),
        (("B", "C"), (0, 0)),
        (("B", "D"), (0, 1)),
    ]);
    let g_prime = payoff_table(&[
        (("A", "C"), (0, 0)),
        (("A", "D"), (0, 0)),
        (("B", "C"), (0, 0)),
        (("B", "D"), (3, 1)),
    ]);
    IncompleteScenario {
        structure: EpistemicStructure::new(
            vec!["alpha".into(), "beta".into(), "gamma".into()],
            vec![
                vec![
                    vec!["alpha".into()],
                    vec!["beta".into(), "gamma".into()],
                ],
                vec![
                    vec!["alpha".into(), "beta".into()],
                    vec!["gamma".into()],
                ],
            ],
            Some(vec![
                vec![
                    vec![("alpha".to_string(), qi(1))],
                    vec![
                        ("beta".to_string(), q(1, 2)),
                        ("gamma".to_string(), q(1, 2)),
                    ],
                ],
                vec![
                    vec![
                        ("alpha".to_string(), q(2, 3)),
                        ("beta".to_string(), q(1, 3)),
                    ],
                    vec![("gamma".to_string(), qi(1))],
                ],
            ]),
        )
        .unwrap(),
        games: ScenarioGames::Strategic {
            strategies: vec![
                vec!["A".into(), "B".into()],
                vec!["C".into(), "D".into()],
            ],
            payoffs: vec![g.clone(), g, g_prime],
        },
        true_state: 0,
    }
}

/// Four-state two-player structure whose common prior exists only for one
/// belief parameter value (1/5 at the designated cell).
pub fn knife_edge_scenario(p: Q) -> IncompleteScenario {
    let one = qi(1);
    let zero_game = payoff_table(&[
        (("A", "C"), (0, 0)),
        (("A", "D"), (0, 0)),
        (("B", "C"), (0, 0)),
        (("B", "D"), (0, 0)),
    ]);
    IncompleteScenario {
        structure: EpistemicStructure::new(
            vec!["alpha".into(), "beta".into(), "gamma".into(), "delta".into()],
            vec![
                vec![
                    vec!["alpha".into(), "beta".into()],
                    vec!["gamma".into(), "delta".into()],
                ],
                vec![
                    vec!["beta".into(), "gamma".into()],
                    vec!["alpha".into(), "delta".into()],
                ],
            ],
            Some(vec![
                vec![
                    vec![
                        ("alpha".to_string(), q(1, 5)),
                        ("beta".to_string(), q(4, 5)),
                    ],
                    vec![
                        ("gamma".to_string(), q(2, 3)),
                        ("delta".to_string(), q(1, 3)),
                    ],
                ],
                vec![
                    vec![
                        ("beta".to_string(), q(1, 3)),
                        ("gamma".to_string(), q(2, 3)),
                    ],
                    vec![
                        ("alpha".to_string(), p.clone()),
                        ("delta".to_string(), &one - &p),
                    ],
                ],
            ]),
        )
        .unwrap(),
        games: ScenarioGames::Strategic {
            strategies: vec![
                vec!["A".into(), "B".into()],
                vec!["C".into(), "D".into()],
            ],
            payoffs: vec![zero_game.clone(), zero_game.clone(), zero_game.clone(), zero_game],
        },
        true_state: 0,
    }
}

fn umap(entries: &[((&str, &str), i64)]) -> BTreeMap<Vec<String>, Q> {
    entries
        .iter()
        .map(|&((a, b), u)| (vec![a.to_string(), b.to_string()], qi(u)))
        .collect()
}

/// Two-player type space (two sender types, three receiver types) with a
/// unique consistent prior that zeroes one profile.
pub fn five_profile_type_space() -> TypeSpace {
    let u1a = umap(&[(("A", "C"), 4), (("A", "D"), 1), (("B", "C"), 0), (("B", "D"), 2)]);
    let u1b = umap(&[(("A", "C"), 0), (("A", "D"), 0), (("B", "C"), 2), (("B", "D"), 1)]);
    let u2ab = umap(&[(("A", "C"), 2), (("A", "D"), 1), (("B", "C"), 2), (("B", "D"), 3)]);
    let u2c = umap(&[(("A", "C"), 0), (("A", "D"), 2), (("B", "C"), 2), (("B", "D"), 0)]);
    let relevant = vec![
        vec![0, 0],
        vec![0, 1],
        vec![1, 0],
        vec![1, 1],
        vec![1, 2],
    ];
    let mut utilities = BTreeMap::new();
    for t in &relevant {
        let u1 = if t[0] == 0 { u1a.clone() } else { u1b.clone() };
        let u2 = if t[1] == 2 { u2c.clone() } else { u2ab.clone() };
        utilities.insert(t.clone(), vec![u1, u2]);
    }
    TypeSpace {
        players: vec!["1".into(), "2".into()],
        types: vec![
            vec!["a".into(), "b".into()],
            vec!["a".into(), "b".into(), "c".into()],
        ],
        strategies: vec![
            vec!["A".into(), "B".into()],
            vec!["C".into(), "D".into()],
        ],
        relevant,
        utilities,
        beliefs: vec![
            vec![
                vec![(vec![0, 0], q(1, 4)), (vec![0, 1], q(3, 4))],
                vec![
                    (vec![1, 0], q(4, 13)),
                    (vec![1, 1], q(3, 13)),
                    (vec![1, 2], q(6, 13)),
                ],
            ],
            vec![
                vec![(vec![0, 0], q(1, 3)), (vec![1, 0], q(2, 3))],
                vec![(vec![0, 1], q(2, 3)), (vec![1, 1], q(1, 3))],
                vec![(vec![1, 2], qi(1))],
            ],
        ],
    }
}

/// Three-player type space over a four-profile relevant set; utilities may
/// depend on the whole profile.
pub fn three_player_type_space() -> TypeSpace {
    let profile_order = [
        ("A", "C", "E"),
        ("A", "D", "E"),
        ("B", "C", "E"),
        ("B", "D", "E"),
        ("A", "C", "F"),
        ("A", "D", "F"),
        ("B", "C", "F"),
        ("B", "D", "F"),
    ];
    let table = |vals: [i64; 8]| -> BTreeMap<Vec<String>, Q> {
        profile_order
            .iter()
            .zip(vals.iter())
            .map(|(&(a, b, c), &v)| {
                (
                    vec![a.to_string(), b.to_string(), c.to_string()],
                    qi(v),
                )
            })
            .collect()
    };
    let relevant = vec![
        vec![0, 0, 0],
        vec![1, 0, 1],
        vec![1, 1, 0],
        vec![1, 1, 1],
    ];
    let mut utilities = BTreeMap::new();
    utilities.insert(
        vec![0, 0, 0],
        vec![
            table([2, 2, 3, 0, 0, 0, 1, 1]),
            table([2, 4, 2, 0, 0, 1, 0, 2]),
            table([0, 2, 0, 0, 2, 0, 0, 0]),
        ],
    );
    let mid1 = vec![
        table([1, 2, 0, 0, 1, 0, 0, 1]),
        table([4, 1, 4, 1, 1, 0, 2, 0]),
        table([3, 2, 0, 1, 1, 2, 2, 0]),
    ];
    utilities.insert(vec![1, 1, 0], mid1.clone());
    utilities.insert(vec![1, 0, 1], mid1);
    utilities.insert(
        vec![1, 1, 1],
        vec![
            table([0, 0, 2, 1, 2, 0, 0, 1]),
            table([4, 3, 1, 2, 0, 1, 0, 2]),
            table([1, 2, 0, 1, 2, 0, 0, 1]),
        ],
    );
    TypeSpace {
        players: vec!["1".into(), "2".into(), "3".into()],
        types: vec![
            vec!["a".into(), "b".into()],
            vec!["a".into(), "b".into()],
            vec!["a".into(), "b".into()],
        ],
        strategies: vec![
            vec!["A".into(), "B".into()],
            vec!["C".into(), "D".into()],
            vec!["E".into(), "F".into()],
        ],
        relevant,
        utilities,
        beliefs: vec![
            vec![
                vec![(vec![0, 0, 0], qi(1))],
                vec![
                    (vec![1, 1, 0], q(2, 5)),
                    (vec![1, 0, 1], q(2, 5)),
                    (vec![1, 1, 1], q(1, 5)),
                ],
            ],
            vec![
                vec![
                    (vec![0, 0, 0], q(5, 7)),
                    (vec![1, 0, 1], q(2, 7)),
                ],
                vec![
                    (vec![1, 1, 0], q(2, 3)),
                    (vec![1, 1, 1], q(1, 3)),
                ],
            ],
            vec![
                vec![
                    (vec![0, 0, 0], q(5, 7)),
                    (vec![1, 1, 0], q(2, 7)),
                ],
                vec![
                    (vec![1, 0, 1], q(2, 3)),
                    (vec![1, 1, 1], q(1, 3)),
                ],
            ],
        ],
    }
}

// ---------------------------------------------------------------------------
// strategic-form fixtures shared across suites
// ---------------------------------------------------------------------------

pub fn pay(a: i64, b: i64) -> (Q, Q) {
    (qi(a), qi(b))
}

/// 2x2 game whose unique mixed equilibrium is ((1/5,4/5),(2/3,1/3)).
pub fn mixed_2x2() -> StrategicGame {
    StrategicGame::two_player(
        vec!["B".into(), "C".into()],
        vec!["E".into(), "F".into()],
        vec![
            vec![pay(4, 0), pay(2, 4)],
            vec![pay(3, 3), pay(4, 2)],
        ],
    )
}

/// 3x3 game solved by iterated strict dominance one strategy at a time.
pub fn strict_dominance_chain() -> StrategicGame {
    StrategicGame::two_player(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["d".into(), "e".into(), "f".into()],
        vec![
            vec![pay(8, 6), pay(0, 9), pay(3, 8)],
            vec![pay(3, 2), pay(2, 1), pay(4, 3)],
            vec![pay(2, 8), pay(1, 5), pay(3, 1)],
        ],
    )
}

/// 3x3 game where the first deletion needs a mixture with a constant strict
/// advantage; survivors are a single profile.
pub fn mixture_deletion_game() -> StrategicGame {
    StrategicGame::two_player(
        vec!["A".into(), "B".into(), "C".into()],
        vec!["D".into(), "E".into(), "F".into()],
        vec![
            vec![pay(4, 2), pay(4, 1), pay(0, 0)],
            vec![pay(2, 1), pay(2, 2), pay(2, 0)],
            vec![pay(2, 0), pay(2, 0), pay(0, 3)],
        ],
    )
}

/// 3x3 game whose mixture-dominance survivors are the four corner profiles.
pub fn ckr_workout_game() -> StrategicGame {
    StrategicGame::two_player(
        vec!["T".into(), "M".into(), "B".into()],
        vec!["L".into(), "C".into(), "R".into()],
        vec![
            vec![pay(4, 6), pay(3, 2), pay(8, 0)],
            vec![pay(0, 9), pay(0, 0), pay(4, 12)],
            vec![pay(8, 3), pay(2, 4), pay(0, 0)],
        ],
    )
}
