mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use structctl::parse_network;

use common::{fixture_path, random_connected};

fn structctl<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_structctl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fx(name: &str) -> String {
    fixture_path(name).display().to_string()
}

#[test]
fn analyze_exit_codes() {
    let o = structctl(["analyze", &fx("single_cactus.net")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("controllable: true\n"));
    assert!(text.contains("n_d: 1\n"));

    let o = structctl(["analyze", &fx("two_drivers.net")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("n_d: 2\n"));
    assert!(text.contains("unmatched: V6 V7\n"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.net");
    fs::write(&empty, "").unwrap();
    let o = structctl([Path::new("analyze"), &empty]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.net");
    fs::write(&bad, "state V1\nedge V1 V9\n").unwrap();
    let o = structctl([Path::new("analyze"), &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(structctl(["analyze"]).status.code(), Some(2));
}

#[test]
fn analyze_json_has_fixed_key_order() {
    let o = structctl(["--json", "analyze", &fx("two_drivers.net")]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["n_d"], 2);
    assert_eq!(v["unmatched"], serde_json::json!(["V6", "V7"]));
    let keys = [
        "\"n\"",
        "\"n_u\"",
        "\"m\"",
        "\"n_d\"",
        "\"unmatched\"",
        "\"drivers\"",
        "\"inaccessible\"",
        "\"dilation_s\"",
        "\"dilation_t\"",
        "\"controllable\"",
        "\"cactus_stems\"",
        "\"cactus_buds\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn plan_then_reanalyze() {
    let dir = tempfile::tempdir().unwrap();
    let post = dir.path().join("post.net");
    let o = structctl([
        Path::new("plan"),
        &fixture_path("two_drivers.net"),
        "-o".as_ref(),
        &post,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("add V2 V6 entanglement close-path\n"));
    assert!(text.contains("# added_edges: 3\n"));
    let o = structctl([Path::new("analyze"), &post]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("n_d: 1\n"));
    let dot = stdout(&structctl([Path::new("export-dot"), &post]));
    assert!(dot.contains("\"V2\" -> \"V6\" [style=dashed];"));

    let o = structctl(["plan", &fx("cycle.net")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# added_edges: 0\n"));
}

#[test]
fn stored_plan_applies_like_plan_output() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("p.plan");
    let direct = dir.path().join("direct.net");
    let net = fixture_path("two_drivers.net");
    let o = structctl([Path::new("plan"), &net, "-o".as_ref(), &direct]);
    fs::write(&plan, &o.stdout).unwrap();
    let o = structctl([Path::new("apply"), &net, &plan]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(&direct).unwrap());
    // a second application collides with the first
    let o = structctl([Path::new("apply"), &direct, &plan]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn random_twenty_vertex_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for i in 0..5 {
        let g = random_connected(&mut rng, 20, 0.05);
        let input = dir.path().join(format!("g{i}.net"));
        let post = dir.path().join(format!("g{i}.post.net"));
        fs::write(&input, g.to_text()).unwrap();
        let o = structctl([Path::new("plan"), &input, "-o".as_ref(), &post]);
        assert_eq!(o.status.code(), Some(0));
        let o = structctl([Path::new("analyze"), &post]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let o = structctl([Path::new("verify"), &post]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("rank: 20/20\n"));
        assert_eq!(
            parse_network(&fs::read_to_string(&post).unwrap())
                .unwrap()
                .n(),
            20
        );
    }
}

#[test]
fn plan_rejects_disconnected_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("split.net");
    fs::write(&f, "state A\nstate B\nstate C\nedge A B\n").unwrap();
    let o = structctl([Path::new("plan"), &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("{A B} {C}"));
}

#[test]
fn verify_outcomes() {
    let o = structctl(["verify", &fx("single_cactus.net")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "rank: 7/7\nfull_rank: true\ntrials: 3\nseed: 42\nfield_prime: 2147483647\n"
    );
    let o = structctl(["verify", &fx("star.net"), "--trials", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("rank: 2/3\n"));
    let o = structctl(["verify", &fx("cycle.net")]);
    assert_eq!(o.status.code(), Some(2));
    let o = structctl(["--json", "verify", &fx("star.net")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["full_rank"], false);
}

#[test]
fn export_dot_of_empty_graph() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.net");
    fs::write(&f, "# nothing\n").unwrap();
    let o = structctl([Path::new("export-dot"), &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "digraph G {\n}\n");
}

#[test]
fn every_command_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("p.plan");
    fs::write(&plan, stdout(&structctl(["plan", &fx("two_drivers.net")]))).unwrap();
    let plan = plan.display().to_string();
    let invocations: Vec<Vec<String>> = [
        vec!["analyze", "FX"],
        vec!["--json", "analyze", "FX"],
        vec!["plan", "FX"],
        vec!["--json", "plan", "FX"],
        vec!["apply", "FX", "PLAN"],
        vec!["verify", "FX", "--seed", "3"],
        vec!["--json", "verify", "FX"],
        vec!["export-dot", "FX"],
    ]
    .iter()
    .map(|args| {
        args.iter()
            .map(|a| match *a {
                "FX" => fx("two_drivers.net"),
                "PLAN" => plan.clone(),
                a => a.to_string(),
            })
            .collect()
    })
    .collect();
    for args in invocations {
        let a = structctl(&args);
        let b = structctl(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
        assert!(!a.stdout.is_empty(), "{args:?}");
    }
}
