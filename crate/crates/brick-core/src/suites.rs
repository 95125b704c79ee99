//! Named invariant suites, shared by the command line `verify` command and
//! the integration tests. Each suite returns one [`Check`] per invariant; a
//! check fails with a short description of the first counterexample.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::brick::{
    brick_polytope, check_minkowski_sum, increasing_flip_poset, kappa_map, matroid_certificate, minkowski_summand,
    BrickPolytope,
};
use crate::cambrian::ClusterCtx;
use crate::coxeter::{CoxeterSystem, GroupElement, RootId, Word};
use crate::error::{Error, Result};
use crate::subword::{
    brute_force_facets, greedy_tree, negative_tree_recursive, positive_tree_recursive, Facet, Sign, SubwordComplex,
};

pub const SUITE_NAMES: &[&str] = &["properties", "greedy", "minkowski", "cambrian", "catalan"];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn from_outcome(name: &str, outcome: std::result::Result<(), String>) -> Self {
        match outcome {
            Ok(()) => Check { name: name.into(), passed: true, detail: String::new() },
            Err(detail) => Check { name: name.into(), passed: false, detail },
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Invariants of a subword complex, checked on every facet and flip:
/// complement roots, flips, window updates, brick vector differences,
/// the sign law, injectivity of root configurations and, when the group can
/// be enumerated, that chambers refine the normal cones.
pub fn word_properties(ctx: &SubwordComplex<'_>) -> Vec<Check> {
    let sys = ctx.sys();
    let mut out = vec![
        Check::from_outcome("complement roots are the positive roots", complement_roots(ctx)),
        Check::from_outcome("flips are involutions", flip_involution(ctx)),
        Check::from_outcome("window updates match recomputation", window_updates(ctx)),
        Check::from_outcome("sign law of roots against weights", sign_law(ctx)),
        Check::from_outcome("root configurations determine facets", configuration_injective(ctx)),
    ];
    if !ctx.is_realizing() {
        out.push(Check {
            name: "word is realizing".into(),
            passed: false,
            detail: format!("rank defect {}", ctx.rank_defect()),
        });
        return out;
    }
    out.push(Check::from_outcome("flip differences are positive multiples of the flipped root", flip_differences(ctx)));
    match brick_polytope(ctx, None) {
        Ok(poly) => {
            out.push(Check::from_outcome(
                "every vertex has a witness",
                ensure(poly.is_certified(), || "a witness covector fails".into()),
            ));
            if sys.ensure_enumerable().is_ok() {
                out.push(Check::from_outcome("chambers refine normal cones", chamber_refinement(ctx, &poly)));
            }
        }
        Err(e) => out.push(Check { name: "brick polytope".into(), passed: false, detail: e.to_string() }),
    }
    out
}

fn complement_roots(ctx: &SubwordComplex<'_>) -> Outcome {
    let all: Vec<RootId> = (0..ctx.sys().num_positive_roots()).collect();
    for facet in ctx.facets() {
        let roots = ctx.root_function(facet);
        let mut comp: Vec<RootId> = (0..ctx.len()).filter(|k| !facet.contains(*k)).map(|k| roots[k]).collect();
        comp.sort_unstable();
        ensure(comp == all, || format!("complement of {facet} misses or repeats a root"))?;
    }
    Ok(())
}

fn flip_involution(ctx: &SubwordComplex<'_>) -> Outcome {
    let sys = ctx.sys();
    for facet in ctx.facets() {
        let roots = ctx.root_function(facet);
        for &i in facet.positions() {
            let (next, j) = lift(ctx.flip(facet, i))?;
            ensure(ctx.is_facet(&next), || format!("flip of {facet} at {} is not a facet", i + 1))?;
            let back = lift(ctx.flip(&next, j))?;
            ensure(back == (facet.clone(), i), || format!("flip of {facet} at {} does not return", i + 1))?;
            ensure(sys.is_positive(roots[i]) == (i < j), || format!("direction of flip {facet} at {}", i + 1))?;
        }
    }
    Ok(())
}

fn window_updates(ctx: &SubwordComplex<'_>) -> Outcome {
    for facet in ctx.facets() {
        let roots = ctx.root_function(facet);
        let weights = ctx.weight_function(facet);
        for &i in facet.positions() {
            let (next, j) = lift(ctx.flip(facet, i))?;
            ensure(ctx.flip_roots(&roots, i, j) == ctx.root_function(&next), || {
                format!("root window update of {facet} at {}", i + 1)
            })?;
            ensure(ctx.flip_weights(&roots, &weights, i, j) == ctx.weight_function(&next), || {
                format!("weight window update of {facet} at {}", i + 1)
            })?;
        }
    }
    Ok(())
}

fn sign_law(ctx: &SubwordComplex<'_>) -> Outcome {
    let sys = ctx.sys();
    for facet in ctx.facets() {
        let roots = ctx.root_function(facet);
        let weights = ctx.weight_function(facet);
        for j in (0..ctx.len()).filter(|j| !facet.contains(*j)) {
            for (k, w) in weights.iter().enumerate() {
                let v = sys.inner(sys.root(roots[j]), w);
                let ok = if j >= k { !v.is_negative() } else { !v.is_positive() };
                ensure(ok, || format!("<r({facet},{}), w({facet},{})> has the wrong sign", j + 1, k + 1))?;
            }
        }
    }
    Ok(())
}

fn configuration_injective(ctx: &SubwordComplex<'_>) -> Outcome {
    let mut seen: HashMap<Vec<RootId>, &Facet> = HashMap::new();
    for facet in ctx.facets() {
        let mut conf = ctx.root_configuration(facet);
        conf.sort_unstable();
        if let Some(other) = seen.insert(conf, facet) {
            return Err(format!("{other} and {facet} share a root configuration"));
        }
    }
    Ok(())
}

fn flip_differences(ctx: &SubwordComplex<'_>) -> Outcome {
    let sys = ctx.sys();
    let poly = lift(brick_polytope(ctx, None))?;
    for (a, facet) in ctx.facets().iter().enumerate() {
        let roots = ctx.root_function(facet);
        for arc in &ctx.flip_graph()[a] {
            let d = &poly.vertices[a].coords - &poly.vertices[arc.target].coords;
            let ok = d.ratio_to(sys.root(roots[arc.i])).is_some_and(|c| c.is_positive());
            ensure(ok, || format!("B({facet}) - B({}) is not along r(I,{})", ctx.facets()[arc.target], arc.i + 1))?;
        }
    }
    Ok(())
}

/// Each chamber `w(C)` lies in the normal cone of `B(kappa(w))`: the
/// functional `<w(rho), .>` is maximized there, and the roots of `kappa(w)`
/// lie in `w(Phi+)`.
fn chamber_refinement(ctx: &SubwordComplex<'_>, poly: &BrickPolytope) -> Outcome {
    let sys = ctx.sys();
    let map = lift(kappa_map(ctx))?;
    let elements = lift(sys.elements())?;
    let rho = sys.rho();
    for (u, w) in elements.iter().enumerate() {
        let facet = &ctx.facets()[map[u]];
        let winv = w.inverse();
        ensure(ctx.root_configuration(facet).iter().all(|&r| sys.is_positive(winv.image(r))), || {
            format!("roots of kappa(w) = {facet} leave w(Phi+)")
        })?;
        let f = sys.covector_of(&sys.apply(w, &rho));
        let mine = f.dot(&poly.vertices[map[u]].coords);
        let best = poly.vertices.iter().map(|v| f.dot(&v.coords)).max().expect("nonempty");
        ensure(mine == best, || format!("B({facet}) does not maximize <w(rho), .>"))?;
    }
    Ok(())
}

/// Greedy facets and both greedy flip trees.
pub fn greedy_checks(ctx: &SubwordComplex<'_>) -> Vec<Check> {
    let mut out = Vec::new();
    let poset = increasing_flip_poset(ctx);
    out.push(Check::from_outcome(
        "greedy facets are the extremes of the increasing flip order",
        poset.as_ref().map_err(|e| e.to_string()).and_then(|p| {
            let (pi, gamma) = (ctx.greedy_facet(Sign::Positive), ctx.greedy_facet(Sign::Negative));
            ensure(ctx.facets()[p.min] == pi && ctx.facets()[p.max] == gamma, || {
                format!("extremes {} and {}", ctx.facets()[p.min], ctx.facets()[p.max])
            })
        }),
    ));
    for sign in [Sign::Positive, Sign::Negative] {
        out.push(Check::from_outcome(&format!("{sign} greedy tree spans the facets"), tree_spans(ctx, sign)));
        out.push(Check::from_outcome(&format!("{sign} greedy tree matches its recursion"), tree_recursion(ctx, sign)));
    }
    out.push(Check::from_outcome("increasing flips decrease a positive functional", monotone_flips(ctx)));
    out
}

fn tree_spans(ctx: &SubwordComplex<'_>, sign: Sign) -> Outcome {
    let tree = greedy_tree(ctx, sign);
    let size = ctx.num_facets();
    ensure(tree.arcs.len() + 1 == size, || format!("{} arcs on {size} facets", tree.arcs.len()))?;
    let mut adj = vec![Vec::new(); size];
    for &(a, b, _, _) in &tree.arcs {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; size];
    let mut stack = vec![tree.root];
    seen[tree.root] = true;
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    ensure(seen.iter().all(|&x| x), || "tree is not connected".into())
}

fn tree_recursion(ctx: &SubwordComplex<'_>, sign: Sign) -> Outcome {
    let sys = ctx.sys();
    let q = ctx.word().letters();
    let rec = match sign {
        Sign::Negative => negative_tree_recursive(sys, q, sys.longest_element()),
        Sign::Positive => positive_tree_recursive(sys, q, sys.longest_element()),
    };
    let rec = lift(rec)?;
    let tree = greedy_tree(ctx, sign);
    let ours: BTreeSet<(Facet, Facet)> =
        tree.arcs.iter().map(|&(a, b, _, _)| (ctx.facets()[a].clone(), ctx.facets()[b].clone())).collect();
    ensure(ours == rec, || "arc sets differ".into())
}

fn monotone_flips(ctx: &SubwordComplex<'_>) -> Outcome {
    if !ctx.is_realizing() {
        return Err("word is not realizing".into());
    }
    let poly = lift(brick_polytope(ctx, None))?;
    let f = ctx.sys().covector_of(&ctx.sys().rho());
    for (a, b, i, _) in ctx.increasing_flips() {
        let (x, y) = (f.dot(&poly.vertices[a].coords), f.dot(&poly.vertices[b].coords));
        ensure(x > y, || format!("flip of {} at {} does not decrease", ctx.facets()[a], i + 1))?;
    }
    Ok(())
}

/// Every summand is a Coxeter matroid polytope, and vertex witnesses pick
/// the summand points adding up to each brick vector.
pub fn minkowski_checks(ctx: &SubwordComplex<'_>) -> Vec<Check> {
    let sys = ctx.sys();
    let run = || -> std::result::Result<Vec<Check>, String> {
        let poly = lift(brick_polytope(ctx, None))?;
        let summands = (0..ctx.len()).map(|k| minkowski_summand(ctx, k)).collect::<Result<Vec<_>>>();
        let summands = lift(summands)?;
        let matroid = summands.iter().try_for_each(|s| lift(matroid_certificate(sys, s)).map(|_| ()));
        Ok(vec![
            Check::from_outcome("summands are Coxeter matroid polytopes", matroid),
            Check::from_outcome(
                "summand maximizers add up to the vertices",
                lift(check_minkowski_sum(ctx, &poly, &summands)),
            ),
        ])
    };
    run().unwrap_or_else(|e| vec![Check { name: "Minkowski decomposition".into(), passed: false, detail: e }])
}

/// The bijections between facets of the cluster word, clusters, sortable
/// elements, noncrossing partitions and subspaces, together with the
/// lattice, fan and associahedron comparisons.
pub fn cambrian_checks(cctx: &ClusterCtx<'_>) -> Vec<Check> {
    let ctx = &cctx.ctx;
    let mut out = vec![
        Check::from_outcome("facet count matches the subset oracle", {
            let brute = brute_force_facets(ctx);
            ensure(brute == ctx.facets(), || format!("{} by flips, {} by subsets", ctx.num_facets(), brute.len()))
        }),
        Check::from_outcome("clusters round trip", cluster_roundtrip(cctx)),
        Check::from_outcome("cluster pairing identity", cluster_pairing(cctx)),
        Check::from_outcome("sortable elements round trip", sortable_roundtrip(cctx)),
        Check::from_outcome("skip sets equal root configurations", skips(cctx)),
        Check::from_outcome("noncrossing partitions agree three ways", ncp_agreement(cctx)),
        Check::from_outcome("noncrossing subspaces round trip", subspace_roundtrip(cctx)),
        Check::from_outcome("singleton conditions agree", singletons(cctx)),
        Check::from_outcome(
            "weights are normal to the other roots",
            ensure(cctx.weight_normality(), || "a pairing is nonzero or not positive".into()),
        ),
    ];
    out.push(Check::from_outcome(
        "associahedron is the permutahedron with facets removed",
        lift(cctx.associahedron_by_removal(None)).and_then(|r| {
            ensure(r.comparison, || {
                format!(
                    "prefixes {} vertices {} tight {} normals {}/{}",
                    r.prefix_vertices_match,
                    r.vertices_satisfy,
                    r.inequalities_tight,
                    r.normals_match_weights,
                    r.normals_match_polytope
                )
            })
        }),
    ));
    match cctx.verify_cambrian() {
        Ok(r) => {
            out.push(Check::from_outcome(
                "increasing flip order is the Cambrian lattice",
                ensure(r.lattice_iso, || "orders differ".into()),
            ));
            out.push(Check::from_outcome(
                "kappa fibers are the Cambrian congruence classes",
                ensure(r.fan_iso, || "fibers differ".into()),
            ));
        }
        Err(e) => out.push(Check { name: "Cambrian lattice and fan".into(), passed: false, detail: e.to_string() }),
    }
    out
}

fn cluster_roundtrip(cctx: &ClusterCtx<'_>) -> Outcome {
    for facet in cctx.ctx.facets() {
        let cluster = lift(cctx.facet_to_cluster(facet))?;
        ensure(&lift(cctx.cluster_to_facet(&cluster))? == facet, || format!("cluster of {facet}"))?;
    }
    Ok(())
}

fn cluster_pairing(cctx: &ClusterCtx<'_>) -> Outcome {
    for facet in cctx.ctx.facets() {
        ensure(lift(cctx.cluster_root_conversion(facet))?.verified, || format!("pairing of {facet}"))?;
    }
    Ok(())
}

fn sortable_roundtrip(cctx: &ClusterCtx<'_>) -> Outcome {
    let sortables = lift(cctx.sortable_elements())?;
    ensure(sortables.len() == cctx.ctx.num_facets(), || {
        format!("{} sortable elements, {} facets", sortables.len(), cctx.ctx.num_facets())
    })?;
    for facet in cctx.ctx.facets() {
        let w = lift(cctx.facet_to_sortable(facet))?;
        let (back, sortable) = lift(cctx.sortable_to_facet(&w))?;
        ensure(sortable && &back == facet, || format!("sortable element of {facet}"))?;
    }
    Ok(())
}

fn skips(cctx: &ClusterCtx<'_>) -> Outcome {
    for w in lift(cctx.sortable_elements())? {
        let mut a = lift(cctx.skips_set(w))?;
        let (facet, _) = lift(cctx.sortable_to_facet(w))?;
        let mut b = cctx.ctx.root_configuration(&facet);
        a.sort_unstable();
        b.sort_unstable();
        ensure(a == b, || format!("skips of the sortable element of {facet}"))?;
    }
    Ok(())
}

fn ncp_agreement(cctx: &ClusterCtx<'_>) -> Outcome {
    for facet in cctx.ctx.facets() {
        let a = lift(cctx.facet_to_ncp(facet))?;
        let b = lift(cctx.cluster_to_ncp(&lift(cctx.facet_to_cluster(facet))?))?;
        let c = lift(cctx.sortable_to_ncp(&lift(cctx.facet_to_sortable(facet))?))?;
        ensure(a == b && b == c, || format!("noncrossing partitions of {facet}"))?;
    }
    Ok(())
}

fn subspace_roundtrip(cctx: &ClusterCtx<'_>) -> Outcome {
    for facet in cctx.ctx.facets() {
        let ncp = lift(cctx.facet_to_ncp(facet))?;
        let back = lift(cctx.subspace_to_facet(&cctx.ncp_to_subspace(&ncp)))?;
        ensure(&back == facet, || format!("subspace of {facet} gives {back}"))?;
    }
    Ok(())
}

fn singletons(cctx: &ClusterCtx<'_>) -> Outcome {
    let elements = lift(cctx.sys.elements())?;
    for w in elements {
        let r = lift(cctx.singleton_report(w))?;
        let c = r.conditions();
        ensure(c.iter().all(|&x| x == c[0]), || format!("conditions {c:?} at {}", r.facet))?;
    }
    Ok(())
}

/// All distinct Coxeter elements of a system, each as the reduced word
/// obtained from the lexicographically first ordering of the generators.
pub fn coxeter_elements(sys: &CoxeterSystem) -> Vec<Word> {
    let n = sys.rank();
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let word = Word::new(perm.clone());
        let w = sys.word_to_element(&word).expect("letters in range");
        if seen.insert(w) {
            out.push(word);
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

/// For every Coxeter element, the number of facets of the cluster word by
/// flips against the subset oracle. Returns the checks and the counts.
pub fn catalan_checks(sys: &CoxeterSystem) -> (Vec<Check>, Vec<(Word, usize)>) {
    let mut checks = Vec::new();
    let mut counts = Vec::new();
    for c in coxeter_elements(sys) {
        let name = format!("c = {c}: flip count matches the subset oracle");
        match ClusterCtx::new(sys, &c) {
            Ok(cctx) => {
                let flips = cctx.ctx.num_facets();
                let brute = brute_force_facets(&cctx.ctx).len();
                checks.push(Check::from_outcome(&name, ensure(flips == brute, || format!("{flips} vs {brute}"))));
                counts.push((c, flips));
            }
            Err(e) => checks.push(Check { name, passed: false, detail: e.to_string() }),
        }
    }
    let distinct: BTreeSet<usize> = counts.iter().map(|(_, k)| *k).collect();
    checks.push(Check::from_outcome(
        "count does not depend on the Coxeter element",
        ensure(distinct.len() <= 1, || format!("counts {distinct:?}")),
    ));
    (checks, counts)
}

/// What a suite runs on.
pub enum SuiteInput<'a> {
    Word(&'a SubwordComplex<'a>),
    Cluster(&'a ClusterCtx<'a>),
    Group(&'a CoxeterSystem),
}

/// Runs a suite by name.
pub fn run_suite(name: &str, input: &SuiteInput<'_>) -> Result<Vec<Check>> {
    let ctx = match input {
        SuiteInput::Word(ctx) => Some(*ctx),
        SuiteInput::Cluster(cctx) => Some(&cctx.ctx),
        SuiteInput::Group(_) => None,
    };
    let need_word =
        || ctx.ok_or_else(|| Error::InvalidInput(format!("suite `{name}` needs a word or a Coxeter element")));
    match name {
        "properties" => Ok(word_properties(need_word()?)),
        "greedy" => Ok(greedy_checks(need_word()?)),
        "minkowski" => Ok(minkowski_checks(need_word()?)),
        "cambrian" => match input {
            SuiteInput::Cluster(cctx) => Ok(cambrian_checks(cctx)),
            _ => Err(Error::InvalidInput("suite `cambrian` needs a Coxeter element".into())),
        },
        "catalan" => {
            let sys = match input {
                SuiteInput::Word(ctx) => ctx.sys(),
                SuiteInput::Cluster(cctx) => cctx.sys,
                SuiteInput::Group(sys) => sys,
            };
            Ok(catalan_checks(sys).0)
        }
        other => {
            Err(Error::InvalidInput(format!("unknown suite `{other}`; expected one of {}", SUITE_NAMES.join(", "))))
        }
    }
}
