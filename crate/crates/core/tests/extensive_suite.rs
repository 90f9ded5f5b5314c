//! Tree-level solving: backward induction with ties, subgame detection,
//! subgame-perfect equilibrium assembly (pure and mixed), equilibrium
//! verification, and win/lose solving.

mod common;

use common::*;
use exactgt::extensive::*;
use exactgt::num::{q, qi};
use exactgt::strategic::pure_nash;
use std::collections::BTreeMap;

#[test]
fn three_player_backward_induction_ties() {
    let ef = three_player_two_solutions();
    let sols = backward_induction(&ef, 64).unwrap();
    assert_eq!(sols.len(), 2);
    let mut descriptions: Vec<Vec<String>> = sols
        .iter()
        .map(|prof| prof.iter().map(|s| s.describe(&ef)).collect())
        .collect();
    descriptions.sort();
    assert_eq!(
        descriptions,
        vec![
            vec!["a".to_string(), "c.f".to_string(), "g".to_string()],
            vec!["b".to_string(), "c.e".to_string(), "h".to_string()],
        ]
    );
    // every backward-induction solution is subgame perfect here
    let spes = spe(&ef, 64).unwrap();
    assert_eq!(spes.len(), 2);
}

#[test]
fn chain_store_unique_solution() {
    let ef = chain_store();
    let sols = backward_induction(&ef, 64).unwrap();
    assert_eq!(sols.len(), 1);
    let sol = &sols[0];
    // both entrants enter and the incumbent accommodates everywhere
    let bw1_root = iset(&ef, &[]);
    assert_eq!(ef.info_set(bw1_root).actions[sol[1].choice[&bw1_root]], "in");
    let cs_first = iset(&ef, &["in"]);
    assert_eq!(ef.info_set(cs_first).actions[sol[0].choice[&cs_first]], "acc");
    for town1 in ["out", "in.fight", "in.acc"] {
        let path: Vec<&str> = town1.split('.').collect();
        let bw2 = iset(&ef, &path);
        assert_eq!(ef.info_set(bw2).actions[sol[2].choice[&bw2]], "in");
        let mut cs_path = path.clone();
        cs_path.push("in");
        let cs2 = iset(&ef, &cs_path);
        assert_eq!(ef.info_set(cs2).actions[sol[0].choice[&cs2]], "acc");
    }
    // play: both enter, both accommodated
    let profile: Vec<_> = sol
        .iter()
        .map(|s| BehavioralStrategy::pure(&ef, s))
        .collect();
    let payoff = expected_payoffs_from(&ef, &profile, ROOT);
    assert_eq!(payoff, vec![qi(4), qi(2), qi(2)]);
}

#[test]
fn subgame_catalogue() {
    let ef = nested_subgames_game();
    let subs = subgames(&ef);
    let mut labels: Vec<(String, bool)> = subs
        .iter()
        .map(|&(r, minimal)| (ef.label(r), minimal))
        .collect();
    labels.sort();
    assert_eq!(
        labels,
        vec![
            ("a".to_string(), true),
            ("b".to_string(), false),
            ("b.e.A".to_string(), true),
        ]
    );

    let ef = two_spe_game();
    let mut labels: Vec<(String, bool)> = subgames(&ef)
        .iter()
        .map(|&(r, minimal)| (ef.label(r), minimal))
        .collect();
    labels.sort();
    assert_eq!(
        labels,
        vec![("L.U.a".to_string(), true), ("L.U.b".to_string(), true)]
    );

    let ef = no_subgame_card_game();
    assert!(subgames(&ef).is_empty());
}

#[test]
fn nested_subgames_unique_spe() {
    let ef = nested_subgames_game();
    let spes = spe(&ef, 64).unwrap();
    assert_eq!(spes.len(), 1);
    let profile = &spes[0];
    let expect = |path: &[&str], action: &str| {
        let set = iset(&ef, path);
        let player = ef.info_set(set).player;
        let k = ef
            .info_set(set)
            .actions
            .iter()
            .position(|a| a == action)
            .unwrap();
        assert_eq!(
            profile[player].mix[&set][k],
            qi(1),
            "expected {action} at {path:?}"
        );
    };
    expect(&[], "b");
    expect(&["b", "e", "A"], "C");
    expect(&["a"], "d");
    expect(&["b"], "f");
    expect(&["b", "e", "A", "C"], "F");
    expect(&["a", "c"], "h");
    expect(&["b", "e"], "A");
    assert!(is_spe(&ef, profile));

    // a Nash profile whose restriction to the deepest subgame fails
    let nash_not_spe = [pure(&ef, 0, &[(&[], "a"), (&["b", "e", "A"], "C")]),
        pure(
            &ef,
            1,
            &[(&["a"], "d"), (&["b"], "f"), (&["b", "e", "A", "C"], "E")],
        ),
        pure(&ef, 2, &[(&["a", "c"], "h"), (&["b", "e"], "B")])];
    let behavioral: Vec<_> = nash_not_spe
        .iter()
        .map(|s| BehavioralStrategy::pure(&ef, s))
        .collect();
    let (game, _) = to_strategic_form(&ef);
    let labels: Vec<String> = nash_not_spe.iter().map(|s| s.describe(&ef)).collect();
    assert!(pure_nash(&game).contains(&labels));
    assert!(!is_spe(&ef, &behavioral));
}

#[test]
fn spanning_set_two_spe() {
    let ef = two_spe_game();
    let spes = spe(&ef, 64).unwrap();
    assert_eq!(spes.len(), 2);
    let mut outcomes: Vec<String> = spes
        .iter()
        .map(|p| describe_profile(&ef, p))
        .collect();
    outcomes.sort();
    // first solution: L at the root, D at the second node, a at the top set
    assert!(outcomes[0].contains("L") && outcomes[0].contains("D") && outcomes[0].contains('a'));
    // second solution: R, U, b
    assert!(outcomes[1].contains("R") && outcomes[1].contains("U") && outcomes[1].contains('b'));
    // both keep c and h inside the subgames
    for o in &outcomes {
        assert!(o.contains('c'));
        assert!(o.contains('h'));
    }
    for p in &spes {
        assert!(is_spe(&ef, p));
    }
}

#[test]
fn card_game_halts_without_equilibrium() {
    // the guessing game has no pure Nash profile and three active players,
    // so the solver reports the unresolved game instead of guessing
    let ef = no_subgame_card_game();
    assert!(matches!(
        spe(&ef, 256),
        Err(EfError::UnresolvedSubgame(_))
    ));
}

#[test]
fn no_subgame_spe_equals_nash() {
    // with no proper subgames, the subgame-perfect profiles are exactly the
    // pure Nash profiles of the induced strategic form
    let ef = dominated_choice_game();
    assert!(subgames(&ef).is_empty());
    let spes = spe(&ef, 256).unwrap();
    let (game, _) = to_strategic_form(&ef);
    let nash = pure_nash(&game);
    let pure_spes: Vec<Vec<String>> = spes
        .iter()
        .filter_map(|prof| {
            let mut labels = Vec::new();
            for strat in prof {
                let mut parts = Vec::new();
                for (&set, probs) in &strat.mix {
                    let k = probs.iter().position(|p| p.is_integer() && *p == qi(1))?;
                    parts.push(ef.info_set(set).actions[k].clone());
                }
                labels.push(parts.join("."));
            }
            Some(labels)
        })
        .collect();
    for labels in &pure_spes {
        assert!(nash.contains(labels), "{labels:?} missing from Nash set");
    }
    assert_eq!(pure_spes.len(), nash.len());
}

#[test]
fn mixed_spe_assembly() {
    let ef = mixed_spe_game();
    let spes = spe(&ef, 64).unwrap();
    assert_eq!(spes.len(), 1);
    let profile = &spes[0];
    // left subgame: mixtures (1/2,1/2) and (1/4,3/4)
    let left_mover = iset(&ef, &["L", "A"]);
    let left_responder = iset(&ef, &["L"]);
    assert_eq!(
        profile[2].mix[&left_mover],
        vec![q(1, 4), q(3, 4)]
    );
    assert_eq!(
        profile[1].mix[&left_responder],
        vec![q(1, 2), q(1, 2)]
    );
    // right subgame: mixtures (2/3,1/3) and (1/3,2/3)
    let right_responder = iset(&ef, &["R"]);
    let right_mover = iset(&ef, &["R", "E"]);
    assert_eq!(
        profile[1].mix[&right_responder],
        vec![q(2, 3), q(1, 3)]
    );
    assert_eq!(
        profile[2].mix[&right_mover],
        vec![q(1, 3), q(2, 3)]
    );
    // root: the left subgame is worth 9/8 vs 1 on the right
    let root = iset(&ef, &[]);
    assert_eq!(profile[0].mix[&root], vec![qi(1), qi(0)]);
    let payoffs = {
        let value = expected_payoffs_from(&ef, profile, ROOT);
        (value[0].clone(), value[1].clone(), value[2].clone())
    };
    assert_eq!(payoffs.0, q(9, 8));
    assert_eq!(payoffs.1, q(3, 4));
    assert_eq!(payoffs.2, qi(2));
}

#[test]
fn kuhn_conversion_realization_equivalence() {
    let ef = kuhn_frame();
    let pures = pure_strategies(&ef, 0);
    let root_set = iset(&ef, &[]);
    let second_set = iset(&ef, &["b", "d"]);
    let find = |a: usize, e: usize| {
        pures
            .iter()
            .find(|s| s.choice[&root_set] == a && s.choice[&second_set] == e)
            .unwrap()
            .clone()
    };
    let mixed = ExtensiveMixed {
        player: 0,
        probs: vec![
            (find(0, 0), q(1, 12)),
            (find(0, 1), q(4, 12)),
            (find(1, 0), q(2, 12)),
            (find(1, 1), q(5, 12)),
        ],
    };
    let beh = behavioral_from_mixed(&ef, &mixed).unwrap();
    assert_eq!(beh.mix[&root_set], vec![q(5, 12), q(7, 12)]);
    assert_eq!(beh.mix[&second_set], vec![q(2, 7), q(5, 7)]);
    // equivalence against a grid of opponent behaviorals
    let opp_set = iset(&ef, &["a"]);
    for (n, d) in [(0i64, 1i64), (1, 3), (1, 2), (2, 3), (1, 1)] {
        let sigma2 = BehavioralStrategy {
            player: 1,
            mix: [(opp_set, vec![q(n, d), q(d - n, d)])].into_iter().collect(),
        };
        // mixed play: expand each pure strategy against sigma2
        let mut mixed_dist: BTreeMap<usize, exactgt::Q> = BTreeMap::new();
        for (s, p) in &mixed.probs {
            let prof = vec![BehavioralStrategy::pure(&ef, s), sigma2.clone()];
            for (z, pr) in outcome_distribution(&ef, &prof) {
                *mixed_dist.entry(z).or_insert_with(|| qi(0)) += p * pr;
            }
        }
        let beh_prof = vec![beh.clone(), sigma2.clone()];
        for (z, pr) in outcome_distribution(&ef, &beh_prof) {
            assert_eq!(mixed_dist[&z], pr, "terminal {}", ef.label(z));
        }
    }
}

#[test]
fn behavioral_from_mixed_rejects_imperfect_recall() {
    // one player forgets her own first move
    let ef = ExtensiveForm::from_tree(
        vec!["1".into()],
        d(
            0,
            vec![
                (
                    "a",
                    d(0, vec![("c", t(&[1])), ("d", t(&[0]))]),
                ),
                (
                    "b",
                    d(0, vec![("c", t(&[0])), ("d", t(&[1]))]),
                ),
            ],
        ),
        &[vec![vec!["a"], vec!["b"]]],
    )
    .unwrap();
    let pures = pure_strategies(&ef, 0);
    let mixed = ExtensiveMixed {
        player: 0,
        probs: vec![(pures[0].clone(), q(1, 2)), (pures[3].clone(), q(1, 2))],
    };
    assert!(matches!(
        behavioral_from_mixed(&ef, &mixed),
        Err(EfError::Invalid(_))
    ));
}

#[test]
fn zermelo_sum_game_cross_check() {
    for (target, pick) in [(6u64, 2u64), (8, 3), (10, 3), (9, 2)] {
        let (ef, outcomes) = sum_game_tree(target, pick);
        let tree_sol = solve_zermelo(&ef, &outcomes).unwrap();
        let dp = solve_sum_game(target, pick);
        let expected = if dp.winner == 0 {
            WldCategory::Player1Wins
        } else {
            WldCategory::Player2Wins
        };
        assert_eq!(tree_sol.category, expected, "target {target} pick {pick}");
        // the winning strategy survives exhaustive opponent play
        let winner = dp.winner;
        let strategy = if winner == 0 {
            &tree_sol.strategy1
        } else {
            &tree_sol.strategy2
        };
        assert!(winning_strategy_holds(&ef, &outcomes, winner, strategy));
    }
    // large instances by position solving
    let dp = solve_sum_game(100, 10);
    assert_eq!(dp.winner, 0);
    assert_eq!(dp.losing_positions, vec![1, 12, 23, 34, 45, 56, 67, 78, 89]);
    let dp = solve_sum_game(48, 7);
    assert_eq!(dp.winner, 1);
    // the mover loses exactly on the multiples of eight
    assert_eq!(dp.losing_positions, vec![0, 8, 16, 24, 32, 40]);
}

/// Exhaustive traversal: whatever the opponent does, the winner's strategy
/// reaches a terminal she wins.
fn winning_strategy_holds(
    ef: &ExtensiveForm,
    outcomes: &BTreeMap<HistoryId, WldOutcome>,
    winner: usize,
    strategy: &BTreeMap<usize, usize>,
) -> bool {
    fn walk(
        ef: &ExtensiveForm,
        outcomes: &BTreeMap<HistoryId, WldOutcome>,
        winner: usize,
        strategy: &BTreeMap<usize, usize>,
        h: HistoryId,
    ) -> bool {
        if ef.is_terminal(h) {
            return match outcomes[&h] {
                WldOutcome::Win1 => winner == 0,
                WldOutcome::Win2 => winner == 1,
                WldOutcome::Draw => false,
            };
        }
        match ef.owner(h).unwrap() {
            Owner::Player(p) if p == winner => {
                let k = strategy[&ef.info_set_of(h)];
                walk(ef, outcomes, winner, strategy, ef.child(h, k))
            }
            _ => (0..ef.children(h).len())
                .all(|k| walk(ef, outcomes, winner, strategy, ef.child(h, k))),
        }
    }
    walk(ef, outcomes, winner, strategy, ROOT)
}
