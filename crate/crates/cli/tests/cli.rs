use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use citnet_core::analytics::{cluster, ClusterParams, Subnetwork};
use citnet_core::ingest::{self, write_wos, MatchOptions};
use citnet_core::synth::{corpus, workflow};
use citnet_core::{build_network, CitationNetwork, Publication};

fn citnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citnet")).args(args).env_remove("CITNET_SEED").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new(net: &CitationNetwork) -> Self {
        let dir = TempDir::new().unwrap();
        let (pubs, cites) = ingest::write_network(net);
        std::fs::write(dir.path().join("pubs.tsv"), pubs).unwrap();
        std::fs::write(dir.path().join("cites.tsv"), cites).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, command: &str, extra: &[&str]) -> Output {
        let pubs = self.path("pubs.tsv");
        let cites = self.path("cites.tsv");
        let mut args = vec![command, "-p", pubs.to_str().unwrap(), "-c", cites.to_str().unwrap()];
        args.extend_from_slice(extra);
        citnet(&args)
    }
}

fn net(pubs: &[(&str, i32)], edges: &[(&str, &str)]) -> CitationNetwork {
    let pubs = pubs.iter().map(|&(id, y)| Publication::new(id, format!("Author {id}"), y).with_title(format!("Title {id}"))).collect();
    let edges: Vec<(String, String)> = edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    build_network(pubs, &edges).unwrap().network
}

fn triangle() -> CitationNetwork {
    net(&[("A", 2000), ("B", 2001), ("C", 2002)], &[("C", "B"), ("B", "A"), ("C", "A")])
}

/// D cites B and C, both cite A, and D also cites A directly.
fn diamond() -> CitationNetwork {
    net(&[("A", 2000), ("B", 2001), ("C", 2001), ("D", 2002)], &[("D", "B"), ("D", "C"), ("B", "A"), ("C", "A"), ("D", "A")])
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split('\t').map(str::to_string).collect()).collect()
}

#[test]
fn reduce_keeps_the_two_essential_triangle_edges() {
    let f = Fixture::new(&triangle());
    let out = stdout(&f.run("reduce", &[]));
    assert_eq!(out, "citing_id\tcited_id\nB\tA\nC\tB\n");
    let removed = stdout(&f.run("reduce", &["--non-essential"]));
    assert_eq!(removed, "citing_id\tcited_id\nC\tA\n");
}

#[test]
fn longest_paths_on_the_diamond() {
    let f = Fixture::new(&diamond());
    let out: Value = serde_json::from_str(&stdout(&f.run("path", &["--from", "D", "--to", "A", "--kind", "longest"]))).unwrap();
    assert_eq!(out["length"], 2);
    assert_eq!(out["paths"], serde_json::json!([["D", "B", "A"], ["D", "C", "A"]]));
    let out: Value = serde_json::from_str(&stdout(&f.run("path", &["--from", "D", "--to", "A"]))).unwrap();
    assert_eq!(out["length"], 1);
    assert_eq!(out["paths"], serde_json::json!([["D", "A"]]));
    let out: Value = serde_json::from_str(&stdout(&f.run("path", &["--from", "A", "--to", "D"]))).unwrap();
    assert_eq!(out["reachable"], false);
}

#[test]
fn cores_and_components() {
    let f = Fixture::new(&net(
        &[("A", 2000), ("B", 2001), ("C", 2002), ("D", 2003), ("E", 2000), ("F", 2001)],
        &[("B", "A"), ("C", "A"), ("C", "B"), ("D", "A"), ("D", "B"), ("D", "C"), ("F", "E")],
    ));
    assert_eq!(stdout(&f.run("cores", &["--k", "3"])), "id\nA\nB\nC\nD\n");
    assert_eq!(stdout(&f.run("cores", &["--k", "4"])), "id\n");
    let comps = stdout(&f.run("components", &[]));
    assert_eq!(comps, "id\tcomponent\nA\t0\nB\t0\nC\t0\nD\t0\nE\t1\nF\t1\n");
}

#[test]
fn two_stage_clustering_through_a_script() {
    let fixture = workflow::workflow_fixture(19);
    let network = fixture.network;
    let f = Fixture::new(&network);

    let first = rows(&stdout(&f.run("cluster", &["--resolution", "5", "--seed", "3"])));
    let cluster_one: Vec<String> = first.iter().filter(|r| r[1] == "1").map(|r| r[0].clone()).collect();
    assert!(cluster_one.len() > 1 && cluster_one.len() < network.len());

    let script = f.write(
        "two_stage.toml",
        "[[step]]\naction = \"cluster\"\nresolution = 5.0\n\n[[step]]\naction = \"drill\"\nmode = \"by_group\"\ngroup = 1\n\n[[step]]\naction = \"cluster\"\nresolution = 1.0\n",
    );
    let out = rows(&stdout(&f.run("drill", &["--script", script.to_str().unwrap(), "--seed", "3"])));
    let members: Vec<String> = out.iter().map(|r| r[0].clone()).collect();
    assert_eq!(members, cluster_one);

    let ix = network.resolve_ids(&members).unwrap();
    let sub = Subnetwork::of_members(&network, ix);
    let params = ClusterParams { resolution: 1.0, seed: 3, ..ClusterParams::default() };
    let expected = cluster(sub.graph(), &params).unwrap();
    let got: Vec<Option<u32>> = out.iter().map(|r| r[4].parse().ok()).collect();
    assert_eq!(got, expected.clusters);
}

#[test]
fn workflow_script_matches_the_manifest() {
    let fixture = workflow::workflow_fixture(19);
    let f = Fixture::new(&fixture.network);
    let m = &fixture.manifest;
    let mut script = String::new();
    for p in workflow::SEARCH_PATTERNS {
        script.push_str(&format!("[[step]]\naction = \"search\"\npattern = \"{p}\"\n\n"));
    }
    script.push_str("[[step]]\naction = \"drill\"\nmode = \"by_marked\"\n\n[[step]]\naction = \"largest_component\"\n\n");
    script.push_str(&format!(
        "[[step]]\naction = \"expand\"\nadd_predecessors = true\nmin_relations = {}\n\n",
        workflow::PREDECESSOR_MIN
    ));
    let removals: Vec<String> = m.removals.iter().map(|r| format!("\"{r}\"")).collect();
    script.push_str(&format!("[[step]]\naction = \"remove\"\nids = [{}]\n\n", removals.join(", ")));
    script.push_str(&format!("[[step]]\naction = \"expand\"\nadd_successors = true\nmin_relations = {}\n", workflow::SUCCESSOR_MIN));
    let path = f.write("workflow.toml", &script);
    let out = rows(&stdout(&f.run("expand", &["--script", path.to_str().unwrap()])));
    let members: Vec<String> = out.iter().map(|r| r[0].clone()).collect();
    assert_eq!(members, m.with_successors);
    assert_eq!(members.len(), 572);
}

#[test]
fn load_writes_pair_files_and_the_matching_report() {
    let corpus = corpus::matching_corpus(400, 8);
    let dir = TempDir::new().unwrap();
    let wos = dir.path().join("export.txt");
    std::fs::write(&wos, write_wos(&corpus.records)).unwrap();
    let out_dir = dir.path().join("out");
    stdout(&citnet(&["load", "--wos", wos.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]));

    let lib = ingest::load_wos(&std::fs::read_to_string(&wos).unwrap(), &MatchOptions::default()).unwrap();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["matching"], serde_json::to_value(&lib.matching.report).unwrap());
    assert_eq!(report["citations"], lib.build.network.edge_count());
    let (pubs, cites) = ingest::write_network(&lib.build.network);
    assert_eq!(std::fs::read_to_string(out_dir.join("publications.tsv")).unwrap(), pubs);
    assert_eq!(std::fs::read_to_string(out_dir.join("citations.tsv")).unwrap(), cites);

    // Loading the written pair files reproduces them exactly.
    let again = dir.path().join("again");
    let p = out_dir.join("publications.tsv");
    let c = out_dir.join("citations.tsv");
    stdout(&citnet(&["load", "-p", p.to_str().unwrap(), "-c", c.to_str().unwrap(), "--out-dir", again.to_str().unwrap()]));
    assert_eq!(std::fs::read(again.join("publications.tsv")).unwrap(), pubs.as_bytes());
    assert_eq!(std::fs::read(again.join("citations.tsv")).unwrap(), cites.as_bytes());
}

#[test]
fn layout_writes_a_valid_frame_and_svg() {
    let fixture = workflow::workflow_fixture(19);
    let f = Fixture::new(&fixture.network);
    let svg = f.path("frame.svg");
    let out = stdout(&f.run("layout", &["--display-count", "25", "--transitive-reduction", "--svg", svg.to_str().unwrap()]));
    let frame: citnet_core::layout::LayoutFrame = serde_json::from_str(&out).unwrap();
    assert_eq!(frame.nodes.len(), 25);
    assert!(frame.violations(10).is_empty(), "{:?}", frame.violations(10));
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<circle").count(), 25);
}

fn outputs(f: &Fixture, env_seed: Option<&str>, args: &[&str], command: &str) -> Vec<u8> {
    let pubs = f.path("pubs.tsv");
    let cites = f.path("cites.tsv");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_citnet"));
    cmd.arg(command).args(["-p", pubs.to_str().unwrap(), "-c", cites.to_str().unwrap()]).args(args);
    match env_seed {
        Some(s) => cmd.env("CITNET_SEED", s),
        None => cmd.env_remove("CITNET_SEED"),
    };
    let out = cmd.output().unwrap();
    assert!(out.status.success());
    out.stdout
}

#[test]
fn outputs_are_byte_reproducible_and_seeded_from_the_environment() {
    let fixture = workflow::workflow_fixture(19);
    let f = Fixture::new(&fixture.network);
    for command in ["cluster", "layout"] {
        let a = outputs(&f, None, &["--seed", "11"], command);
        let b = outputs(&f, None, &["--seed", "11"], command);
        assert_eq!(a, b, "{command}");
        assert!(!a.contains(&b'\r'));
        let from_env = outputs(&f, Some("11"), &[], command);
        assert_eq!(a, from_env, "{command}");
        // An explicit flag wins over the environment.
        let flag_wins = outputs(&f, Some("99"), &["--seed", "11"], command);
        assert_eq!(a, flag_wins, "{command}");
    }
}

#[test]
fn help_is_available_for_every_subcommand() {
    let commands = ["load", "reduce", "cluster", "cores", "components", "path", "layout", "drill", "expand", "serve"];
    for c in commands {
        let out = citnet(&[c, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{c}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("Usage: citnet"), "{c}");
    }
    let out = citnet(&["cluster", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--resolution", "--min-cluster-size", "--policy", "--seed", "CITNET_SEED"] {
        assert!(text.contains(flag), "{flag}");
    }
    assert_eq!(citnet(&["--help"]).status.code(), Some(0));
}

fn error_line(out: &Output) -> String {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    text
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let f = Fixture::new(&diamond());
    // Usage.
    assert_eq!(citnet(&["reduce", "--bogus"]).status.code(), Some(1));
    assert_eq!(citnet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(citnet(&["reduce"]).status.code(), Some(1));
    let out = f.run("path", &["--from", "D", "--to", "Z"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(error_line(&out).starts_with("error: not-found: "));
    assert_eq!(f.run("cores", &["--k", "0"]).status.code(), Some(1));

    // Input format.
    let bad = f.write("bad.tsv", "id\tyear\nA\t2000\n");
    let cites = f.path("cites.tsv");
    let out = citnet(&["reduce", "-p", bad.to_str().unwrap(), "-c", cites.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_line(&out).starts_with("error: format: "));
    let missing = f.path("missing.tsv");
    assert_eq!(citnet(&["reduce", "-p", missing.to_str().unwrap(), "-c", cites.to_str().unwrap()]).status.code(), Some(2));
    let script = f.write("broken.toml", "[[step]]\naction = \"explode\"\n");
    let out = f.run("drill", &["--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_line(&out).starts_with("error: script: "));

    // Contract: drilling by marked publications with nothing marked.
    let script = f.write("empty.toml", "[[step]]\naction = \"drill\"\nmode = \"by_marked\"\n");
    let out = f.run("drill", &["--script", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(error_line(&out).starts_with("error: precondition: "));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let f = Fixture::new(&triangle());
    let target = f.path("reduced.tsv");
    let printed = stdout(&f.run("reduce", &[]));
    stdout(&f.run("reduce", &["-o", target.to_str().unwrap()]));
    assert_eq!(std::fs::read_to_string(Path::new(&target)).unwrap(), printed);
}
