use std::fs;
use std::process::{Command, Output};

use iia_core::construct::{build_named, NamedKind};
use iia_core::swf::ExplicitSwf;
use tempfile::tempdir;

fn iia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iia")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_prints_only_the_number() {
    for (args, want) in [
        (vec!["count", "q", "--states", "3", "--voters", "0"], "13\n"),
        (vec!["count", "q", "--states", "3", "--voters", "1"], "183\n"),
        (vec!["count", "p", "--states", "2", "--voters", "1"], "25\n"),
        (vec!["count", "r", "--states", "3", "--voters", "2"], "366\n"),
        (vec!["count", "bell", "--states", "6"], "4683\n"),
    ] {
        let o = iia(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), want, "{args:?}");
        assert!(o.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    for args in [
        vec!["count", "x", "--states", "3"],
        vec!["count", "r", "--states", "1", "--voters", "1"],
        vec!["enumerate", "--states", "3"],
        vec!["enumerate", "--states", "3", "--voters", "1", "--filter", "bogus"],
        vec!["check", "--in", "/nonexistent/file.json", "--axiom", "iia"],
        vec!["--threads", "0", "selftest"],
        vec!["frobnicate"],
    ] {
        let o = iia(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn budget_rejections_exit_3() {
    assert_eq!(iia(&["enumerate", "--states", "4", "--voters", "2"]).status.code(), Some(3));
    assert_eq!(iia(&["oracle", "--states", "3", "--voters", "2"]).status.code(), Some(3));
    assert_eq!(iia(&["count", "q", "--states", "3", "--voters", "50"]).status.code(), Some(3));
}

#[test]
fn oracle_modes() {
    let o = iia(&["oracle", "--states", "3", "--voters", "1", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "183 == 183\n");

    let o = iia(&["oracle", "--states", "2", "--voters", "2"]);
    assert_eq!(stdout(&o), "19683\n");

    let o = iia(&["oracle", "--states", "3", "--voters", "0", "--emit"]);
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 13);
    for line in lines {
        ExplicitSwf::from_json_str(&line).unwrap();
    }
}

#[test]
fn enumerate_stats_and_filters() {
    let o = iia(&["enumerate", "--states", "3", "--voters", "2", "--filter", "wpp", "--stats"]);
    assert_eq!(stdout(&o), "{\"total\":366,\"by_cleric\":{\"3\":366}}\n");
    let o = iia(&["enumerate", "--states", "3", "--voters", "1", "--filter", "cs"]);
    assert_eq!(stdout(&o).lines().count(), 27);
}

#[test]
fn check_reports_verdicts() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("ex1.json");
    let f = build_named(&NamedKind::Example1).unwrap().explicit().unwrap();
    fs::write(&path, f.to_json_string()).unwrap();
    let p = path.to_str().unwrap();

    let o = iia(&["check", "--in", p, "--axiom", "iia"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["axiom"], "iia");
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["kind"], "iia");

    let o = iia(&["check", "--in", p, "--axiom", "wpp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"axiom\":\"wpp\",\"holds\":true,\"witness\":null}\n");

    let o = iia(&["check", "--in", p, "--axiom", "dictatorial"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_pairwise_transitivity() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("ex2.json");
    let pw = match build_named(&NamedKind::Example2Pairwise).unwrap() {
        iia_core::construct::NamedFixture::Pairwise(pw) => pw,
        _ => unreachable!(),
    };
    fs::write(&path, pw.to_json_string()).unwrap();
    let o = iia(&["check", "--in", path.to_str().unwrap(), "--axiom", "transitive"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"]["kind"], "intransitive");
    assert_eq!(v["witness"]["profile"], serde_json::json!(["x=y=z", "x<y<z"]));
}

#[test]
fn decompose_then_reconstruct_is_byte_identical() {
    let dir = tempdir().unwrap();
    let cases = [
        NamedKind::VerbatimDictatorChain { states: 3, voters: 2 },
        NamedKind::NullSwf { states: 4, voters: 1 },
        NamedKind::ConstantOrder { order: "a1<a0=a2".into(), voters: 2 },
    ];
    for (i, kind) in cases.iter().enumerate() {
        let f = build_named(kind).unwrap().explicit().unwrap();
        let input = dir.path().join(format!("f{i}.json"));
        let desc = dir.path().join(format!("d{i}.json"));
        let back = dir.path().join(format!("b{i}.json"));
        fs::write(&input, format!("{}\n", f.to_json_string())).unwrap();
        let o = iia(&["decompose", "--in", input.to_str().unwrap(), "--out", desc.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let (states, voters) = (f.states().to_string(), f.voters().to_string());
        let o = iia(&[
            "reconstruct",
            "--in",
            desc.to_str().unwrap(),
            "--states",
            &states,
            "--voters",
            &voters,
            "--out",
            back.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(fs::read(&input).unwrap(), fs::read(&back).unwrap(), "{kind:?}");
    }
}

#[test]
fn decompose_rejects_non_iia() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("ex1.json");
    let f = build_named(&NamedKind::Example1).unwrap().explicit().unwrap();
    fs::write(&input, f.to_json_string()).unwrap();
    let out = dir.path().join("d.json");
    let o = iia(&["decompose", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}
