//! End-to-end checks of the text format and the command-line surface:
//! round-trip identity on the bundled corpus, diagnostics with locations,
//! deterministic graph emission, and process exit codes.

use exactgt_cli::dot;
use exactgt_cli::parser::{parse, print, Body};
use exactgt_cli::runner::{builtin_fixtures, run_fixtures};
use std::process::Command;

#[test]
fn round_trip_on_every_bundled_fixture() {
    for (name, text) in builtin_fixtures() {
        let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let canonical = print(&doc.body);
        let reparsed = parse(&canonical).unwrap_or_else(|e| panic!("{name} reparse: {e}"));
        let again = print(&reparsed.body);
        assert_eq!(canonical, again, "round trip drifted for {name}");
    }
}

#[test]
fn parse_errors_carry_locations() {
    let text = "kind: lottery\n[outcomes]\na b\n[probs]\n1/0 1\n";
    let e = parse(text).unwrap_err();
    assert_eq!(e.line, 5);
    assert!(e.to_string().contains("zero denominator"), "{e}");

    let text = "kind: strategic\n[players]\n1 2\n[strategies 1]\nA\n[strategies 2]\nB\n[payoffs]\nA B : 1\n";
    let e = parse(text).unwrap_err();
    // the incomplete table is reported at its section
    assert_eq!(e.line, 9);

    // probabilities that do not sum to one are rejected with a location
    let text = "kind: lottery\n[outcomes]\na b\n[probs]\n1/2 1/3\n";
    let e = parse(text).unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn dot_emission_is_deterministic() {
    let text = "kind: extensive\n[players]\n1\n[tree]\n. 1\n  go -> 1\n  stop -> 0\n";
    let doc = parse(text).unwrap();
    let Body::Extensive(x) = &doc.body else {
        panic!("expected extensive");
    };
    let a = dot::emit_tree(&x.ef);
    let b = dot::emit_tree(&x.ef);
    assert_eq!(a, b);
    // two edges, three nodes, no clusters
    assert_eq!(a.matches(" -> ").count(), 2);
    assert_eq!(a.matches("label=").count(), 5); // 3 nodes + 2 edges
    assert!(!a.contains("cluster"));

    // a transform-like tree with one chance root and an information set
    let text = "kind: extensive\n[players]\n1\n[tree]\n. chance\n  u @1/2 1\n    yes -> 1\n    no -> 0\n  v @1/2 1\n    yes -> 0\n    no -> 1\n[infoset]\nu v\n";
    let doc = parse(text).unwrap();
    let Body::Extensive(x) = &doc.body else {
        panic!("expected extensive");
    };
    let g = dot::emit_tree(&x.ef);
    assert!(g.contains("chance"));
    assert_eq!(g.matches("cluster").count(), 1);
    assert!(g.contains("(1/2)"));
}

#[test]
fn fixtures_runner_reports_failures() {
    let good = builtin_fixtures();
    let (_, ok) = run_fixtures(&good, 10_000);
    assert!(ok);
    let bad = vec![(
        "broken.fix".to_string(),
        "kind: strategic\n[players]\n1 2\n[strategies 1]\nA\n[strategies 2]\nB\n[payoffs]\nA B : 1 1\n[expect nash]\n(X,Y)\n".to_string(),
    )];
    let (report, ok) = run_fixtures(&bad, 10_000);
    assert!(!ok);
    assert!(report.contains("FAIL"));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exactgt"))
}

#[test]
fn exit_codes() {
    // usage error: unknown subcommand
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // validation failure on an imperfect-recall tree
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forgetful.game");
    std::fs::write(
        &path,
        "kind: extensive\n[players]\n1\n[tree]\n. 1\n  a 1\n    c -> 1\n    d -> 0\n  b 1\n    c -> 0\n    d -> 1\n[infoset]\na b\n",
    )
    .unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("perfect recall"), "{stderr}");

    // success path prints the report on stdout
    let path = dir.path().join("mp.game");
    std::fs::write(
        &path,
        "kind: strategic\n[players]\n1 2\n[strategies 1]\nH T\n[strategies 2]\nH T\n[payoffs]\nH H : 1 0\nH T : 0 1\nT H : 0 1\nT T : 1 0\n",
    )
    .unwrap();
    let out = bin().arg("nash").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "none");

    // bundled corpus passes
    let out = bin().arg("fixtures").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().all(|l| l.ends_with(": pass")));

    // fixture-dir override picks up failures
    let broken = dir.path().join("broken.fix");
    std::fs::write(
        &broken,
        "kind: lottery\n[outcomes]\n5\n[probs]\n1\n[expect ev]\n7\n",
    )
    .unwrap();
    let out = bin()
        .arg("fixtures")
        .arg("--fixture-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_commands_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    // mixed equilibrium
    let game = dir.path().join("mixed.game");
    std::fs::write(
        &game,
        "kind: strategic\n[players]\n1 2\n[strategies 1]\nB C\n[strategies 2]\nE F\n[payoffs]\nB E : 4 0\nB F : 2 4\nC E : 3 3\nC F : 4 2\n",
    )
    .unwrap();
    let out = bin().arg("mixed-nash").arg(&game).output().unwrap();
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "((B@1/5, C@4/5), (E@2/3, F@1/3))"
    );

    // dominance certificate
    let g58 = dir.path().join("g58.game");
    std::fs::write(
        &g58,
        "kind: strategic\n[players]\n1 2\n[strategies 1]\nA B C\n[strategies 2]\nD E\n[payoffs]\nA D : 0 0\nA E : 4 0\nB D : 1 0\nB E : 1 0\nC D : 2 0\nC E : 0 0\n",
    )
    .unwrap();
    let out = bin()
        .arg("dominate")
        .arg(&g58)
        .args(["--player", "1", "--strategy", "B"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("strictly dominated by the mixture (A@1/3, C@2/3)"),
        "{text}"
    );

    // knowledge and common knowledge
    let epi = dir.path().join("struct.know");
    std::fs::write(
        &epi,
        "kind: epistemic\n[states]\na b c d e\n[partition 1]\na b | c d e\n[expect]\n",
    )
    .ok();
    std::fs::write(
        &epi,
        "kind: epistemic\n[states]\na b c d e\n[partition 1]\na b | c d e\n",
    )
    .unwrap();
    let out = bin()
        .arg("know")
        .arg(&epi)
        .args(["--agent", "1", "--event", "a b d e"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "{a b}");

    // belief revision with a probabilistic prior
    let flat = dir.path().join("flat.know");
    std::fs::write(
        &flat,
        "kind: epistemic\n[states]\na b c d e g h k m\n[partition 1]\na b c d e g h k m\n",
    )
    .unwrap();
    let out = bin()
        .arg("revise")
        .arg(&flat)
        .args(["--order", "b g | c k m | d h | e | a"])
        .args(["--info", "a e"])
        .args(["--info", "d e k m"])
        .args(["--info", "b d e k"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("f({a e}) = {e}"), "{text}");
    assert!(text.contains("f({d e k m}) = {k m}"), "{text}");
    assert!(text.contains("f({b d e k}) = {b}"), "{text}");
    assert!(text.contains("f({a b c d e g h k m}) = {b g}"), "{text}");
    assert!(text.contains("arrow: holds"), "{text}");

    // harsanyi transform with conversions both ways
    let scenario_text = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/scenario_one_sided.fix"),
    )
    .unwrap();
    let scen = dir.path().join("scen.game");
    std::fs::write(&scen, &scenario_text).unwrap();
    let out = bin().arg("harsanyi").arg(&scen).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("nature: 2/3 1/3"), "{text}");
    assert!(text.contains("(T.B,R) separating"), "{text}");
    let out = bin().arg("totypes").arg(&scen).output().unwrap();
    let types_text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(types_text.starts_with("kind: typespace"));
    let ts = dir.path().join("ts.game");
    std::fs::write(&ts, &types_text).unwrap();
    let out = bin().arg("tostates").arg(&ts).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("kind: scenario"));
}
