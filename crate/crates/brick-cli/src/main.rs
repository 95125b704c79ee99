//! `brick`: subword complexes, brick polytopes and Cambrian structures of
//! finite Coxeter groups from the command line.
//!
//! Output is JSON (schema version 1) or DOT. Exit status is 0 on success,
//! 1 when a verification fails and 2 on bad input.

mod render;

use std::process::ExitCode;

use brick_core::brick::{
    brick_polytope, check_minkowski_sum, fiber_meet_join, increasing_flip_poset, kappa, kappa_fiber,
    matroid_certificate, minkowski_summand,
};
use brick_core::cambrian::ClusterCtx;
use brick_core::coxeter::classical::{
    classical_weight, classical_with_tally, one_line, parse_element, point_from_classical,
};
use brick_core::coxeter::{CoxeterSystem, Descriptor, Word};
use brick_core::exactnum::{Scalar, Vector};
use brick_core::subword::{greedy_tree, greedy_tree_dot, Facet, Sign, SubwordComplex};
use brick_core::suites::{all_passed, run_suite, SuiteInput, SUITE_NAMES};
use brick_core::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use render::Render;

#[derive(Parser, Debug)]
#[command(name = "brick", version, about = "Subword complexes and brick polytopes of finite Coxeter groups")]
struct Cli {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Finite type: A, B, C, D, E, F, G, H or I (dihedral).
    #[arg(long = "type", global = true)]
    kind: Option<String>,
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Dihedral order for type I.
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Group as JSON, e.g. `{"coxeter_matrix": [[1,3],[3,1]]}`.
    #[arg(long, global = true, conflicts_with = "kind")]
    group: Option<String>,
    /// Word as comma separated 1-based letters.
    #[arg(long, global = true, conflicts_with = "cluster")]
    word: Option<String>,
    /// Use the cluster word of the Coxeter element given by --c.
    #[arg(long, global = true, requires = "c")]
    cluster: bool,
    /// Coxeter element as a word in all generators.
    #[arg(long, global = true)]
    c: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Report vectors in classical coordinates where available.
    #[arg(long, global = true)]
    classical: bool,
    /// Print numbers as floats instead of exact strings.
    #[arg(long, global = true)]
    float: bool,
    /// Use all cores for the heavy loops.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the facets of the subword complex.
    Facets,
    /// Brick vectors with a witness covector for each vertex.
    Brick {
        /// Positive weight for each generator, e.g. `1,2,1/2`.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Increasing flip graph as DOT.
    Flipgraph,
    /// Greedy flip tree as DOT.
    GreedyTree {
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
    },
    /// The facet kappa(w) of an element.
    Kappa {
        /// `e`, a one-line permutation, a signed permutation or `word:1,2,1`.
        #[arg(long)]
        element: String,
    },
    /// The elements sent to a facet, with the meet and join of the fiber.
    Fiber {
        #[arg(long)]
        facet: String,
    },
    /// The increasing flip order.
    Poset {
        /// Print the Hasse diagram as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Minkowski summands with their matroid certificates.
    Minkowski,
    /// Clusters, sortable elements, noncrossing partitions and subspaces of
    /// every facet of the cluster word.
    Cluster {
        /// Print the Cambrian lattice as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Generalized associahedron from the permutahedron of a point.
    Assoc {
        /// Interior point, in classical coordinates with --classical and in
        /// fundamental weight coordinates otherwise.
        #[arg(long)]
        q: Option<String>,
    },
    /// Run an invariant suite.
    Verify {
        /// One of properties, greedy, minkowski, cambrian, catalan, all.
        #[arg(long)]
        suite: String,
    },
}

/// A failed run: bad input or a failed verification.
enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Output of a command, plus whether its own checks passed.
struct Output {
    body: Body,
    ok: bool,
}

enum Body {
    Json(Value),
    Text(String),
}

impl Output {
    fn json(v: Value) -> Self {
        Output { body: Body::Json(v), ok: true }
    }

    fn text(s: String) -> Self {
        Output { body: Body::Text(s), ok: true }
    }
}

#[allow(clippy::large_enum_variant)]
enum Source<'a> {
    Word(SubwordComplex<'a>),
    Cluster(ClusterCtx<'a>),
}

impl<'a> Source<'a> {
    fn ctx(&self) -> &SubwordComplex<'a> {
        match self {
            Source::Word(ctx) => ctx,
            Source::Cluster(cctx) => &cctx.ctx,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.output.parallel {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            match out.body {
                Body::Json(v) => println!("{}", serde_json::to_string_pretty(&v).expect("values serialize")),
                Body::Text(s) => print!("{s}"),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn build_group(args: &GroupArgs) -> Result<CoxeterSystem, Failure> {
    let desc = match (&args.group, &args.kind) {
        (Some(json), _) => Descriptor::parse_json(json)?,
        (None, Some(kind)) => {
            let rank = args.rank.ok_or_else(|| Failure::Input("--type needs --rank".into()))?;
            Descriptor::Named { kind: kind.clone(), rank, m: args.m }
        }
        (None, None) => return Err(Failure::Input("give the group with --type and --rank, or --group".into())),
    };
    Ok(CoxeterSystem::build(&desc)?)
}

fn coxeter_word(args: &GroupArgs) -> Result<Word, Failure> {
    let c = args.c.as_deref().ok_or_else(|| Failure::Input("this command needs --c".into()))?;
    Ok(Word::parse(c)?)
}

fn build_source<'a>(sys: &'a CoxeterSystem, args: &GroupArgs) -> Result<Source<'a>, Failure> {
    if let Some(w) = &args.word {
        return Ok(Source::Word(SubwordComplex::new(sys, &Word::parse(w)?)?));
    }
    if args.c.is_some() {
        return Ok(Source::Cluster(ClusterCtx::new(sys, &coxeter_word(args)?)?));
    }
    Err(Failure::Input("give a word with --word, or a Coxeter element with --cluster --c".into()))
}

fn cluster_ctx<'a>(source: &'a Source<'a>) -> Result<&'a ClusterCtx<'a>, Failure> {
    match source {
        Source::Cluster(cctx) => Ok(cctx),
        Source::Word(_) => Err(Failure::Input("this command needs a Coxeter element (--c)".into())),
    }
}

fn parse_numbers(s: &str) -> Result<Vec<Scalar>, Failure> {
    s.split(',')
        .map(|t| Scalar::parse_rational(t.trim()).ok_or_else(|| Failure::Input(format!("bad number `{}`", t.trim()))))
        .collect()
}

fn header(sys: &CoxeterSystem, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(1));
    m.insert("command".into(), json!(command));
    m.insert("group".into(), json!({ "name": sys.name(), "rank": sys.rank() }));
    m
}

fn word_fields(m: &mut serde_json::Map<String, Value>, source: &Source<'_>) {
    let ctx = source.ctx();
    m.insert("word".into(), json!(ctx.word().to_one_based()));
    m.insert("completed".into(), json!(ctx.was_completed()));
    if let Source::Cluster(cctx) = source {
        m.insert("c".into(), json!(cctx.c.to_one_based()));
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let sys = build_group(&cli.group)?;
    let r = Render { sys: &sys, float: cli.output.float, classical: cli.output.classical };
    let command = &cli.command;
    if let Command::Verify { suite } = command {
        return verify(&sys, &cli.group, suite);
    }
    let source = build_source(&sys, &cli.group)?;
    let ctx = source.ctx();
    match command {
        Command::Facets => {
            let mut m = header(&sys, "facets");
            word_fields(&mut m, &source);
            m.insert("num_facets".into(), json!(ctx.num_facets()));
            m.insert("facets".into(), Value::Array(ctx.facets().iter().map(|f| r.facet(f)).collect()));
            Ok(Output::json(Value::Object(m)))
        }
        Command::Brick { lambda } => brick(&r, &source, lambda.as_deref()),
        Command::Flipgraph => Ok(Output::text(ctx.flip_graph_dot())),
        Command::GreedyTree { sign } => {
            let sign: Sign = sign.parse()?;
            Ok(Output::text(greedy_tree_dot(ctx, &greedy_tree(ctx, sign))))
        }
        Command::Kappa { element } => {
            let w = parse_element(&sys, element)?;
            let facet = kappa(ctx, &w)?;
            let mut m = header(&sys, "kappa");
            word_fields(&mut m, &source);
            m.insert("element".into(), r.element(&w));
            m.insert("facet".into(), r.facet(&facet));
            Ok(Output::json(Value::Object(m)))
        }
        Command::Fiber { facet } => {
            let facet = Facet::parse(facet)?;
            let fiber = kappa_fiber(ctx, &facet)?;
            let bounds = fiber_meet_join(ctx, &facet)?;
            let mut m = header(&sys, "fiber");
            word_fields(&mut m, &source);
            m.insert("facet".into(), r.facet(&facet));
            m.insert("elements".into(), Value::Array(fiber.iter().map(|w| r.element(w)).collect()));
            m.insert("meet_set".into(), r.roots(&bounds.meet_set));
            m.insert("join_set".into(), r.roots(&bounds.join_set));
            m.insert("meet".into(), bounds.meet.as_ref().map_or(Value::Null, |w| r.element(w)));
            m.insert("join".into(), bounds.join.as_ref().map_or(Value::Null, |w| r.element(w)));
            Ok(Output::json(Value::Object(m)))
        }
        Command::Poset { dot } => {
            let poset = increasing_flip_poset(ctx)?;
            let label = |a: usize| ctx.facets()[a].label();
            if *dot {
                let mut out = String::from("digraph increasing_flip_order {\n  rankdir=BT;\n");
                for f in ctx.facets() {
                    out.push_str(&format!("  \"{}\";\n", f.label()));
                }
                for &(a, b) in &poset.covers {
                    out.push_str(&format!("  \"{}\" -> \"{}\";\n", label(a), label(b)));
                }
                out.push_str("}\n");
                return Ok(Output::text(out));
            }
            let mut m = header(&sys, "poset");
            word_fields(&mut m, &source);
            m.insert("size".into(), json!(poset.size));
            m.insert("min".into(), r.facet(&ctx.facets()[poset.min]));
            m.insert("max".into(), r.facet(&ctx.facets()[poset.max]));
            m.insert("num_flips".into(), json!(poset.flips.len()));
            let covers: Vec<Value> = poset
                .covers
                .iter()
                .map(|&(a, b)| json!([r.facet(&ctx.facets()[a]), r.facet(&ctx.facets()[b])]))
                .collect();
            m.insert("covers".into(), Value::Array(covers));
            m.insert("is_lattice".into(), json!(poset.is_lattice));
            Ok(Output::json(Value::Object(m)))
        }
        Command::Minkowski => minkowski(&r, &source),
        Command::Cluster { dot } => {
            let cctx = cluster_ctx(&source)?;
            if *dot {
                return Ok(Output::text(cctx.cambrian_lattice_dot()?));
            }
            cluster_table(&r, &source, cctx)
        }
        Command::Assoc { q } => assoc(&r, &source, q.as_deref(), cli.output.classical),
        Command::Verify { .. } => unreachable!("handled above"),
    }
}

fn brick(r: &Render<'_>, source: &Source<'_>, lambda: Option<&str>) -> Result<Output, Failure> {
    let ctx = source.ctx();
    let sys = r.sys;
    let lambda = lambda.map(parse_numbers).transpose()?;
    let poly = brick_polytope(ctx, lambda.as_deref())?;
    let vertices: Vec<Value> = ctx
        .facets()
        .iter()
        .zip(&poly.vertices)
        .zip(&poly.certificates)
        .map(|((f, v), cert)| {
            json!({
                "facet": r.facet(f),
                "brick_vector": r.vector_with(&v.coords, v.classical(sys)),
                "witness": r.scalars(&cert.witness.0),
                "margin": cert.margin.as_ref().map_or(Value::Null, |x| r.scalar(x)),
            })
        })
        .collect();
    let mut m = header(sys, "brick");
    word_fields(&mut m, source);
    m.insert(
        "coordinates".into(),
        json!(if r.classical && sys.classical_kind().is_some() { "classical" } else { "root" }),
    );
    m.insert("num_vertices".into(), json!(poly.num_distinct_vertices()));
    m.insert("certified".into(), json!(poly.is_certified()));
    m.insert("vertices".into(), Value::Array(vertices));
    if let Source::Cluster(cctx) = source {
        // facets of the prefix chain e, rho_1, ..., rho_N
        let chain = cctx.prefixes.iter().map(|p| kappa(ctx, p).map(|f| r.facet(&f))).collect::<Result<Vec<_>, _>>()?;
        m.insert("prefix_chain".into(), Value::Array(chain));
    }
    Ok(Output { body: Body::Json(Value::Object(m)), ok: poly.is_certified() })
}

fn minkowski(r: &Render<'_>, source: &Source<'_>) -> Result<Output, Failure> {
    let ctx = source.ctx();
    let sys = r.sys;
    let poly = brick_polytope(ctx, None)?;
    let summands = (0..ctx.len()).map(|k| minkowski_summand(ctx, k)).collect::<Result<Vec<_>, _>>()?;
    let mut ok = true;
    let records: Vec<Value> = summands
        .iter()
        .map(|s| {
            let cert = match matroid_certificate(sys, s) {
                Ok(c) => json!({ "squared_norm": r.scalar(&c.squared_norm), "edge_roots": r.roots(&c.edge_roots) }),
                Err(e) => {
                    ok = false;
                    json!({ "error": e.to_string() })
                }
            };
            json!({
                "position": s.position + 1,
                "letter": s.letter + 1,
                "dimension": s.dimension(),
                "points": s.points.iter().map(|p| r.weight(p, s.letter)).collect::<Vec<_>>(),
                "edges": s.edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "matroid_certificate": cert,
            })
        })
        .collect();
    let sum = check_minkowski_sum(ctx, &poly, &summands);
    ok &= sum.is_ok();
    let mut m = header(sys, "minkowski");
    word_fields(&mut m, source);
    m.insert("summands".into(), Value::Array(records));
    m.insert("maximizers_sum_to_vertices".into(), json!(sum.is_ok()));
    Ok(Output { body: Body::Json(Value::Object(m)), ok })
}

fn cluster_table(r: &Render<'_>, source: &Source<'_>, cctx: &ClusterCtx<'_>) -> Result<Output, Failure> {
    let sys = r.sys;
    let mut rows = Vec::new();
    for facet in cctx.ctx.facets() {
        let cluster = cctx.facet_to_cluster(facet)?;
        let sortable = cctx.facet_to_sortable(facet)?;
        let blocks = sys.c_sorting_blocks(&cctx.c, &sortable)?;
        let ncp = cctx.facet_to_ncp(facet)?;
        let subspace = cctx.ncp_to_subspace(&ncp);
        let back = cctx.subspace_to_facet(&subspace)?;
        if &back != facet {
            return Err(Failure::Verification(format!("subspace of {facet} returns {back}")));
        }
        let mut ncp_value = r.element(&ncp.element);
        ncp_value["reflection_length"] = json!(ncp.reflection_length);
        if let Some(p) = one_line(sys, &ncp.element) {
            ncp_value["cycles"] = json!(cycles(&p));
        }
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|s| s + 1).collect()).collect();
        let mut sortable_value = r.element(&sortable);
        sortable_value["blocks"] = json!(blocks);
        rows.push(json!({
            "facet": r.facet(facet),
            "cluster": r.roots(&cluster),
            "sortable": sortable_value,
            "ncp": ncp_value,
            "subspace": subspace.basis.iter().map(|v| r.vector(v)).collect::<Vec<_>>(),
        }));
    }
    let mut m = header(sys, "cluster");
    word_fields(&mut m, source);
    m.insert("num_facets".into(), json!(rows.len()));
    m.insert("facets".into(), Value::Array(rows));
    Ok(Output::json(Value::Object(m)))
}

/// Cycles of a permutation in one-line notation, each starting at its
/// smallest entry.
fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x] - 1;
        }
        out.push(cycle);
    }
    out
}

fn assoc(r: &Render<'_>, source: &Source<'_>, q: Option<&str>, classical: bool) -> Result<Output, Failure> {
    let cctx = cluster_ctx(source)?;
    let sys = r.sys;
    let q = match q {
        None => None,
        Some(text) => {
            let x = parse_numbers(text)?;
            if classical {
                Some(point_from_classical(sys, &x)?.0)
            } else {
                if x.len() != sys.rank() {
                    return Err(Failure::Input(format!("--q needs {} weight coordinates", sys.rank())));
                }
                let weights = sys.weights();
                Some(x.iter().zip(&weights).fold(Vector::zeros(sys.rank()), |acc, (c, w)| acc.add_scaled(c, w)))
            }
        }
    };
    let report = cctx.associahedron_by_removal(q.as_ref())?;
    let poly = brick_polytope(&cctx.ctx, Some(&report.lambda))?;
    let inequalities = report
        .kept
        .iter()
        .map(|h| {
            let normal = r.weight(&h.normal, h.generator);
            // the right hand side in the coordinates the normal is printed in
            let rhs = match (r.classical, classical_weight(sys, &h.normal, h.generator)) {
                (true, Some(ncl)) => {
                    let tight = poly
                        .vertices
                        .iter()
                        .find(|v| sys.inner(&h.normal, &v.coords) == h.rhs)
                        .ok_or_else(|| Failure::Verification("an inequality is tight on no vertex".into()))?;
                    let x = tight.classical(sys).expect("classical type");
                    r.scalar(&ncl.iter().zip(&x).map(|(a, b)| a * b).sum())
                }
                _ => r.scalar(&h.rhs),
            };
            Ok(json!({ "normal": normal, "rhs": rhs }))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut m = header(sys, "assoc");
    word_fields(&mut m, source);
    m.insert("q".into(), r.vector_with(&report.q, classical_with_tally(sys, &report.q, &report.lambda)));
    m.insert("lambda".into(), r.scalars(&report.lambda));
    m.insert("translation".into(), r.vector_with(&report.translation, report.translation_classical.clone()));
    m.insert("inequalities".into(), Value::Array(inequalities));
    m.insert("distinct_normals".into(), json!(report.distinct_normals));
    m.insert(
        "checks".into(),
        json!({
            "prefix_vertices_match": report.prefix_vertices_match,
            "vertices_satisfy": report.vertices_satisfy,
            "inequalities_tight": report.inequalities_tight,
            "normals_match_weights": report.normals_match_weights,
            "normals_match_polytope": report.normals_match_polytope,
        }),
    );
    m.insert("comparison".into(), json!(report.comparison));
    Ok(Output { body: Body::Json(Value::Object(m)), ok: report.comparison })
}

fn verify(sys: &CoxeterSystem, args: &GroupArgs, suite: &str) -> Result<Output, Failure> {
    let names: Vec<&str> = if suite == "all" { SUITE_NAMES.to_vec() } else { vec![suite] };
    let source = if args.word.is_some() || args.c.is_some() { Some(build_source(sys, args)?) } else { None };
    let input = match &source {
        Some(Source::Word(ctx)) => SuiteInput::Word(ctx),
        Some(Source::Cluster(cctx)) => SuiteInput::Cluster(cctx),
        None => SuiteInput::Group(sys),
    };
    let mut results = Vec::new();
    let mut ok = true;
    for name in names {
        let checks = match run_suite(name, &input) {
            Ok(checks) => checks,
            // `all` skips suites that do not apply to the input
            Err(Error::InvalidInput(_)) if suite == "all" && SUITE_NAMES.contains(&name) => continue,
            Err(e) => return Err(e.into()),
        };
        ok &= all_passed(&checks);
        results.push(json!({ "suite": name, "passed": all_passed(&checks), "checks": checks }));
    }
    let mut m = header(sys, "verify");
    if let Some(source) = &source {
        word_fields(&mut m, source);
    }
    m.insert("passed".into(), json!(ok));
    m.insert("suites".into(), Value::Array(results));
    Ok(Output { body: Body::Json(Value::Object(m)), ok })
}
