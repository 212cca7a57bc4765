use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use citnet_core::analytics::{cluster, connected_components, core_publications, extreme_path, ClusterParams, PathQuery};
use citnet_core::dag::transitive_reduction;
use citnet_core::explore::Session;
use citnet_core::ingest::{self, MatchOptions, MatchReport};
use citnet_core::layout::{compose_frame, render_svg, LayoutParams};
use citnet_core::model::{BuildOutcome, DroppedEdge};
use citnet_core::CitationNetwork;

use crate::error::{CliError, CliResult};
use crate::{script, Command, CommonArgs, InputArgs, LayoutArgs, OutputArg, ScriptArgs};

struct Loaded {
    build: BuildOutcome,
    matching: Option<MatchReport>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn emit(out: &OutputArg, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}

fn load(input: &InputArgs) -> CliResult<Loaded> {
    if let (Some(p), Some(c)) = (&input.publications, &input.citations) {
        let build = ingest::load_pairs(&read(p)?, &read(c)?)?;
        return Ok(Loaded { build, matching: None });
    }
    if input.wos.is_empty() {
        return Err(CliError::Usage("give --publications and --citations, or --wos".into()));
    }
    let mut text = String::new();
    for path in &input.wos {
        text.push_str(&read(path)?);
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }
    let options = MatchOptions { incomplete_min_citations: input.incomplete_min_citations };
    let load = ingest::load_wos(&text, &options)?;
    Ok(Loaded { build: load.build, matching: Some(load.matching.report) })
}

fn network(input: &InputArgs) -> CliResult<CitationNetwork> {
    Ok(load(input)?.build.network)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Load(args) => {
            let loaded = load(&args.input)?;
            std::fs::create_dir_all(&args.out_dir)
                .map_err(|source| CliError::Write { path: args.out_dir.clone(), source })?;
            let (pubs, cites) = ingest::write_network(&loaded.build.network);
            write(&args.out_dir.join("publications.tsv"), &pubs)?;
            write(&args.out_dir.join("citations.tsv"), &cites)?;
            #[derive(Serialize)]
            struct Report<'a> {
                publications: usize,
                citations: usize,
                matching: &'a Option<MatchReport>,
                dropped: &'a [DroppedEdge],
            }
            let net = &loaded.build.network;
            let report = Report {
                publications: net.len(),
                citations: net.edge_count(),
                matching: &loaded.matching,
                dropped: &loaded.build.dropped,
            };
            write(&args.out_dir.join("report.json"), &json(&report))
        }
        Command::Reduce(args) => {
            let net = network(&args.common.input)?;
            let subset = transitive_reduction(net.graph())?;
            let mut out = String::from("citing_id\tcited_id\n");
            let mut rows: Vec<(&str, &str)> = if args.non_essential {
                subset.non_essential_edges().map(|(a, b)| (net.id(a), net.id(b))).collect()
            } else {
                subset.essential_edges().map(|(a, b)| (net.id(a), net.id(b))).collect()
            };
            rows.sort_unstable();
            for (a, b) in rows {
                let _ = writeln!(out, "{a}\t{b}");
            }
            emit(&args.common.out, &out)
        }
        Command::Cluster(args) => {
            let net = network(&args.common.input)?;
            let params = ClusterParams {
                resolution: args.resolution,
                min_cluster_size: args.min_cluster_size,
                policy: args.policy.into(),
                seed: args.seed.seed,
                random_starts: args.random_starts,
                iterations: args.iterations,
            };
            let partition = cluster(net.graph(), &params)?;
            let mut out = String::from("id\tcluster\n");
            for (ix, c) in partition.clusters.iter().enumerate() {
                let c = c.map(|c| c.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{}\t{c}", net.id(ix as u32));
            }
            emit(&args.common.out, &out)
        }
        Command::Cores(args) => {
            if args.k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let net = network(&args.common.input)?;
            let mut out = String::from("id\n");
            for ix in core_publications(net.graph(), args.k) {
                let _ = writeln!(out, "{}", net.id(ix));
            }
            emit(&args.common.out, &out)
        }
        Command::Components(args) => {
            let net = network(&args.input)?;
            let mut out = String::from("id\tcomponent\n");
            for (ix, c) in connected_components(net.graph()).iter().enumerate() {
                let _ = writeln!(out, "{}\t{c}", net.id(ix as u32));
            }
            emit(&args.out, &out)
        }
        Command::Path(args) => {
            let net = network(&args.common.input)?;
            let (from, to) = (net.require(&args.from)?, net.require(&args.to)?);
            #[derive(Serialize)]
            struct PathOut<'a> {
                kind: citnet_core::analytics::PathKind,
                reachable: bool,
                length: Option<usize>,
                paths: Vec<Vec<&'a str>>,
                truncated: bool,
            }
            let kind = args.kind.into();
            let out = match extreme_path(net.graph(), from, to, kind, args.max_paths)? {
                PathQuery::Found(set) => PathOut {
                    kind,
                    reachable: true,
                    length: Some(set.length),
                    paths: set.paths.iter().map(|p| p.iter().map(|&v| net.id(v)).collect()).collect(),
                    truncated: set.truncated,
                },
                PathQuery::Unreachable => PathOut { kind, reachable: false, length: None, paths: vec![], truncated: false },
            };
            emit(&args.common.out, &json(&out))
        }
        Command::Layout(args) => layout(args),
        Command::Drill(args) | Command::Expand(args) => pipeline(args),
        Command::Serve(args) => {
            let addr = std::net::SocketAddr::new(args.bind, args.port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Usage(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            runtime
                .block_on(citnet_service::serve(addr))
                .map_err(|e| CliError::Usage(format!("cannot serve on {addr}: {e}")))
        }
    }
}

fn session(common: &CommonArgs, script_path: Option<&Path>, seed: u64) -> CliResult<Session> {
    let mut session = Session::new(Arc::new(network(&common.input)?));
    if let Some(path) = script_path {
        script::run(&mut session, script::read(path)?, seed)?;
    }
    Ok(session)
}

fn layout(args: LayoutArgs) -> CliResult<()> {
    let session = session(&args.common, args.script.as_deref(), args.seed.seed)?;
    let d = LayoutParams::default();
    let params = LayoutParams {
        display_count: args.display_count.unwrap_or(d.display_count),
        max_per_layer: args.max_per_layer.unwrap_or(d.max_per_layer),
        grid_points: args.grid_points.unwrap_or(d.grid_points),
        min_separation: args.min_separation.unwrap_or(d.min_separation),
        alpha: args.alpha.unwrap_or(d.alpha),
        beta: args.beta.unwrap_or(d.beta),
        restarts: args.restarts.unwrap_or(d.restarts),
        use_transitive_reduction: args.transitive_reduction,
        score_within_view: args.score_within_view,
        seed: args.seed.seed,
        ..d
    };
    let frame = compose_frame(session.network(), session.current(), &params)?;
    if let Some(path) = &args.svg {
        write(path, &render_svg(&frame))?;
    }
    emit(&args.common.out, &json(&frame))
}

fn pipeline(args: ScriptArgs) -> CliResult<()> {
    let session = session(&args.common, Some(&args.script), args.seed.seed)?;
    let net = session.network();
    let view = session.current();
    let attrs = view.attributes();
    let mut out = String::from("id\tyear\tmarked\tselected\tgroup\n");
    for &ix in view.members() {
        let group = attrs.group(ix).map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{group}",
            net.id(ix),
            net.publication(ix).year,
            u8::from(attrs.is_marked(ix)),
            u8::from(attrs.is_selected(ix)),
        );
    }
    emit(&args.common.out, &out)
}

