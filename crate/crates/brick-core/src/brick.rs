//! Brick vectors and brick polytopes of realizing words.
//!
//! Vectors live in root coordinates. A covector is a plain coefficient
//! vector paired with root coordinates by the dot product; a point `x`
//! gives the covector `<x, .>` through [`CoxeterSystem::covector_of`].
//!
//! The map `kappa` sends `w` to the facet whose roots all lie in `w(Phi+)`.
//! Its fibers are read off inversion sets `inv(w) = Phi+ ∩ w(Phi-)`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::coxeter::classical::classical_with_tally;
use crate::coxeter::{CoxeterSystem, GroupElement, RootId};
use crate::error::{Error, Result};
use crate::exactnum::{rank_of, Matrix, Scalar, Vector};
use crate::subword::{Facet, Sign, SubwordComplex};

/// A brick vector with the per-generator weight totals needed for
/// classical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickVector {
    pub coords: Vector,
    pub tally: Vec<Scalar>,
}

impl BrickVector {
    pub fn weight_coords(&self, sys: &CoxeterSystem) -> Vector {
        sys.to_weight_coords(&self.coords)
    }

    pub fn classical(&self, sys: &CoxeterSystem) -> Option<Vec<Scalar>> {
        classical_with_tally(sys, &self.coords, &self.tally)
    }
}

fn scaling(sys: &CoxeterSystem, lambda: Option<&[Scalar]>) -> Result<Vec<Scalar>> {
    match lambda {
        None => Ok(vec![Scalar::one(); sys.rank()]),
        Some(l) if l.len() != sys.rank() => {
            Err(Error::InvalidInput(format!("expected {} weights, got {}", sys.rank(), l.len())))
        }
        Some(l) if l.iter().any(|x| !x.is_positive()) => Err(Error::NonPositiveWeight),
        Some(l) => Ok(l.to_vec()),
    }
}

fn tally(ctx: &SubwordComplex<'_>, lambda: &[Scalar]) -> Vec<Scalar> {
    let mut t = vec![Scalar::zero(); ctx.sys().rank()];
    for &s in ctx.word().letters() {
        t[s] = &t[s] + &lambda[s];
    }
    t
}

/// `sum_k lambda(q_k) w(I,k)`; `lambda` defaults to all ones.
pub fn brick_vector(ctx: &SubwordComplex<'_>, facet: &Facet, lambda: Option<&[Scalar]>) -> Result<BrickVector> {
    ctx.check_facet(facet)?;
    let lambda = scaling(ctx.sys(), lambda)?;
    Ok(brick_vector_unchecked(ctx, facet, &lambda))
}

fn brick_vector_unchecked(ctx: &SubwordComplex<'_>, facet: &Facet, lambda: &[Scalar]) -> BrickVector {
    let n = ctx.sys().rank();
    let coords = ctx
        .weight_function(facet)
        .iter()
        .zip(ctx.word().letters())
        .fold(Vector::zeros(n), |acc, (w, &s)| acc.add_scaled(&lambda[s], w));
    BrickVector { coords, tally: tally(ctx, lambda) }
}

/// Covector taking the value 1 on every root of the configuration.
pub fn witness_covector(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<Vector> {
    let sys = ctx.sys();
    let rows: Vec<Vec<Scalar>> = ctx.root_configuration(facet).iter().map(|&b| sys.root(b).0.clone()).collect();
    let m = Matrix::from_rows(rows);
    m.solve(&Vector(vec![Scalar::one(); ctx.facet_size()])).ok_or_else(|| Error::NotRealizing {
        rank: ctx.configuration_rank(facet),
        size: facet.len(),
        expected: sys.rank(),
    })
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub facet: usize,
    pub witness: Vector,
    /// `f(B(I)) - max_{J != I} f(B(J))`, positive when the check passes.
    pub margin: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub struct BrickPolytope {
    pub vertices: Vec<BrickVector>,
    pub certificates: Vec<Certificate>,
}

impl BrickPolytope {
    /// Every vertex strictly maximizes its witness.
    pub fn is_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.margin.as_ref().is_none_or(Scalar::is_positive))
    }

    pub fn num_distinct_vertices(&self) -> usize {
        self.vertices.iter().map(|v| &v.coords).collect::<HashSet<_>>().len()
    }
}

/// Brick vectors of all facets with one witness covector per vertex.
pub fn brick_polytope(ctx: &SubwordComplex<'_>, lambda: Option<&[Scalar]>) -> Result<BrickPolytope> {
    ctx.ensure_realizing()?;
    let lambda = scaling(ctx.sys(), lambda)?;
    let facets = ctx.facets();
    let vertices: Vec<BrickVector> = facets.par_iter().map(|f| brick_vector_unchecked(ctx, f, &lambda)).collect();
    let certificates = facets
        .par_iter()
        .enumerate()
        .map(|(a, f)| {
            let witness = witness_covector(ctx, f)?;
            let mine = witness.dot(&vertices[a].coords);
            let margin = (0..facets.len()).filter(|&b| b != a).map(|b| &mine - &witness.dot(&vertices[b].coords)).min();
            Ok(Certificate { facet: a, witness, margin })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BrickPolytope { vertices, certificates })
}

/// Flip edges as pairs of facet indices `a < b`.
pub fn polytope_edges(ctx: &SubwordComplex<'_>) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = ctx
        .flip_graph()
        .iter()
        .enumerate()
        .flat_map(|(a, arcs)| arcs.iter().filter(move |x| a < x.target).map(move |x| (a, x.target)))
        .collect();
    edges.sort_unstable();
    edges
}

/// Outer normal covector of the polytope facet attached to a position that
/// lies in some facets of the complex but not all.
#[derive(Clone, Debug)]
pub struct FacetNormal {
    pub position: usize,
    pub covector: Vector,
}

/// Facet normals of the brick polytope, one per vertex of the complex,
/// checked exactly against all brick vectors.
pub fn facet_normals(ctx: &SubwordComplex<'_>, poly: &BrickPolytope) -> Result<Vec<FacetNormal>> {
    let facets = ctx.facets();
    let n = ctx.sys().rank();
    let mut out = Vec::new();
    for k in 0..ctx.len() {
        let on: Vec<usize> = (0..facets.len()).filter(|&a| facets[a].contains(k)).collect();
        if on.is_empty() || on.len() == facets.len() {
            continue;
        }
        let base = &poly.vertices[on[0]].coords;
        let rows: Vec<Vec<Scalar>> = on.iter().map(|&a| (&poly.vertices[a].coords - base).0).collect();
        let kernel = Matrix::from_rows(rows).kernel();
        if kernel.len() != 1 {
            return Err(Error::Internal(format!("face of position {} has codimension {}", k + 1, kernel.len())));
        }
        let mut f = kernel.into_iter().next().expect("one vector");
        let top = f.dot(base);
        let off = (0..facets.len()).find(|a| !facets[*a].contains(k)).expect("not all facets");
        if f.dot(&poly.vertices[off].coords) > top {
            f = -&f;
        }
        let top = f.dot(base);
        for (a, v) in poly.vertices.iter().enumerate() {
            let val = f.dot(&v.coords);
            let ok = if facets[a].contains(k) { val == top } else { val < top };
            if !ok {
                return Err(Error::Internal(format!("position {} does not support a facet", k + 1)));
            }
        }
        debug_assert_eq!(f.dim(), n);
        out.push(FacetNormal { position: k, covector: f });
    }
    Ok(out)
}

/// A polyhedral cone by generators, optionally tiled by chambers `w(C)`.
#[derive(Clone, Debug)]
pub struct ConeDescription {
    pub generators: Vec<Vector>,
    pub chambers: Option<Vec<GroupElement>>,
}

impl ConeDescription {
    /// Membership for linearly independent generators.
    pub fn contains(&self, v: &Vector) -> bool {
        if self.generators.is_empty() {
            return v.is_zero();
        }
        let m = Matrix::from_columns(v.dim(), &self.generators);
        if rank_of(&m) != self.generators.len() {
            return false;
        }
        m.solve(v).is_some_and(|x| x.is_nonnegative())
    }
}

/// The cone spanned by the negated root configuration, which contains every
/// edge direction leaving the vertex `B(I)`.
pub fn vertex_cone(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<ConeDescription> {
    ctx.ensure_realizing()?;
    ctx.check_facet(facet)?;
    let sys = ctx.sys();
    let generators = ctx.root_configuration(facet).iter().map(|&b| -sys.root(b)).collect();
    Ok(ConeDescription { generators, chambers: None })
}

/// `kappa(w)`: flip the smallest position whose root is not in `w(Phi+)`
/// until there is none, starting from the positive greedy facet.
pub fn kappa(ctx: &SubwordComplex<'_>, w: &GroupElement) -> Result<Facet> {
    ctx.ensure_realizing()?;
    let sys = ctx.sys();
    let winv = w.inverse();
    let mut facet = ctx.greedy_facet(Sign::Positive);
    let mut roots = ctx.root_function(&facet);
    loop {
        let Some(i) = facet.positions().iter().copied().find(|&i| !sys.is_positive(winv.image(roots[i]))) else {
            return Ok(facet);
        };
        let (next, j) = ctx.flip_with_roots(&facet, &roots, i)?;
        roots = ctx.flip_roots(&roots, i, j);
        facet = next;
    }
}

/// Facet indices `kappa(w)` for every element, in the order of
/// [`CoxeterSystem::elements`], by walking the weak order with the local
/// rule: `kappa(ws)` is `kappa(w)` unless `w(alpha_s)` is one of its roots,
/// in which case that position is flipped.
pub fn kappa_map(ctx: &SubwordComplex<'_>) -> Result<Vec<usize>> {
    ctx.ensure_realizing()?;
    let sys = ctx.sys();
    let elements = sys.elements()?;
    let index: HashMap<&GroupElement, usize> = elements.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut out = vec![usize::MAX; elements.len()];
    let mut roots_cache: HashMap<usize, Vec<RootId>> = HashMap::new();
    let start = ctx.index_of(&ctx.greedy_facet(Sign::Positive))?;
    let e = index[&sys.identity()];
    out[e] = start;
    let mut queue = VecDeque::from([e]);
    while let Some(u) = queue.pop_front() {
        let w = &elements[u];
        let fi = out[u];
        for s in 0..sys.rank() {
            let ws = sys.right_mul_simple(w, s);
            let v = index[&ws];
            if out[v] != usize::MAX {
                continue;
            }
            let alpha = w.image(s);
            let facet = &ctx.facets()[fi];
            let roots = roots_cache.entry(fi).or_insert_with(|| ctx.root_function(facet));
            out[v] = match facet.positions().iter().find(|&&i| roots[i] == alpha) {
                None => fi,
                Some(&i) => ctx.flip_graph()[fi]
                    .iter()
                    .find(|arc| arc.i == i)
                    .map(|arc| arc.target)
                    .ok_or_else(|| Error::Internal("missing flip".into()))?,
            };
            queue.push_back(v);
        }
    }
    Ok(out)
}

fn signed_parts(ctx: &SubwordComplex<'_>, facet: &Facet) -> (Vec<RootId>, Vec<RootId>) {
    let sys = ctx.sys();
    let config = ctx.root_configuration(facet);
    let plus = config.iter().copied().filter(|&b| sys.is_positive(b)).collect();
    let minus = config.iter().copied().filter(|&b| !sys.is_positive(b)).map(|b| sys.negate(b)).collect();
    (plus, minus)
}

/// Elements `w` with `R-(I) ⊆ inv(w) ⊆ Phi+ \ R+(I)`, in the order of
/// [`CoxeterSystem::elements`].
pub fn kappa_fiber(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<Vec<GroupElement>> {
    ctx.check_facet(facet)?;
    let sys = ctx.sys();
    let elements = sys.elements()?;
    let roots = ctx.root_configuration(facet);
    Ok(elements
        .par_iter()
        .filter(|w| {
            let winv = w.inverse();
            roots.iter().all(|&r| sys.is_positive(winv.image(r)))
        })
        .cloned()
        .collect())
}

/// Whether `x` is a non-negative combination of `a` and `b`.
pub fn in_cone2(x: &Vector, a: &Vector, b: &Vector) -> bool {
    let m = Matrix::from_columns(x.dim(), &[a.clone(), b.clone()]);
    if rank_of(&m) == 2 {
        return m.solve(x).is_some_and(|c| c.is_nonnegative());
    }
    [a, b].iter().any(|g| x.ratio_to(g).is_some_and(|c| !c.is_negative()))
}

/// Closure of a set of positive roots (as a mask) under non-negative
/// combinations of pairs.
pub fn is_closed(sys: &CoxeterSystem, mask: &[bool]) -> bool {
    let members: Vec<RootId> = (0..mask.len()).filter(|&b| mask[b]).collect();
    for (x, &a) in members.iter().enumerate() {
        for &b in &members[x + 1..] {
            for g in 0..mask.len() {
                if !mask[g] && in_cone2(sys.root(g), sys.root(a), sys.root(b)) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_biclosed(sys: &CoxeterSystem, mask: &[bool]) -> bool {
    let complement: Vec<bool> = mask.iter().map(|x| !x).collect();
    is_closed(sys, mask) && is_closed(sys, &complement)
}

#[derive(Clone, Debug)]
pub struct FiberBounds {
    /// Intersection of the inversion sets of the fiber.
    pub meet_set: Vec<RootId>,
    /// Union of the inversion sets of the fiber.
    pub join_set: Vec<RootId>,
    pub meet: Option<GroupElement>,
    pub join: Option<GroupElement>,
}

/// The common lower and upper bounds of the inversion sets in the fiber of
/// `facet`, by growing the forced and forbidden roots until both are stable.
pub fn fiber_meet_join(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<FiberBounds> {
    ctx.ensure_realizing()?;
    ctx.check_facet(facet)?;
    let sys = ctx.sys();
    let big_n = sys.num_positive_roots();
    let (plus, minus) = signed_parts(ctx, facet);
    let mut forced = vec![false; big_n];
    let mut forbidden = vec![false; big_n];
    for b in minus {
        forced[b] = true;
    }
    for b in plus {
        forbidden[b] = true;
    }
    let grow = |own: &[bool], other: &[bool]| -> Vec<bool> {
        let own_ids: Vec<RootId> = (0..big_n).filter(|&b| own[b]).collect();
        let other_ids: Vec<RootId> = (0..big_n).filter(|&b| other[b]).collect();
        (0..big_n)
            .into_par_iter()
            .map(|x| {
                if own[x] {
                    return true;
                }
                let v = sys.root(x);
                let by_pairs = own_ids
                    .iter()
                    .enumerate()
                    .any(|(p, &a)| own_ids[p + 1..].iter().any(|&b| in_cone2(v, sys.root(a), sys.root(b))));
                by_pairs || own_ids.iter().any(|&g| other_ids.iter().any(|&b| in_cone2(v, sys.root(g), &-sys.root(b))))
            })
            .collect()
    };
    loop {
        let next_forced = grow(&forced, &forbidden);
        let next_forbidden = grow(&forbidden, &forced);
        if next_forced == forced && next_forbidden == forbidden {
            break;
        }
        forced = next_forced;
        forbidden = next_forbidden;
    }
    if (0..big_n).any(|b| forced[b] && forbidden[b]) {
        return Err(Error::Internal("forced and forbidden roots overlap".into()));
    }
    let meet_set: Vec<RootId> = (0..big_n).filter(|&b| forced[b]).collect();
    let join_set: Vec<RootId> = (0..big_n).filter(|&b| !forbidden[b]).collect();
    let join_mask: Vec<bool> = forbidden.iter().map(|x| !x).collect();
    let meet = if is_biclosed(sys, &forced) { sys.element_with_inversions(&meet_set) } else { None };
    let join = if is_biclosed(sys, &join_mask) { sys.element_with_inversions(&join_set) } else { None };
    Ok(FiberBounds { meet_set, join_set, meet, join })
}

type Bits = Vec<u64>;

fn bit(b: &Bits, k: usize) -> bool {
    b[k / 64] >> (k % 64) & 1 == 1
}

fn set_bit(b: &mut Bits, k: usize) {
    b[k / 64] |= 1 << (k % 64);
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Largest poset for which the lattice property is checked exhaustively.
pub const LATTICE_CHECK_LIMIT: usize = 2000;

/// The transitive closure of the increasing flips.
#[derive(Clone, Debug)]
pub struct IncreasingFlipPoset {
    pub size: usize,
    /// Increasing flips `(a, b)` between facet indices.
    pub flips: Vec<(usize, usize)>,
    /// Cover relations of the closure.
    pub covers: Vec<(usize, usize)>,
    pub min: usize,
    pub max: usize,
    /// `None` when the poset is too large for the exhaustive check.
    pub is_lattice: Option<bool>,
    up: Vec<Bits>,
    down: Vec<Bits>,
    topo_rank: Vec<usize>,
}

impl IncreasingFlipPoset {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        bit(&self.up[a], b)
    }

    fn extreme(&self, a: usize, b: usize, sets: &[Bits], upward: bool) -> Option<usize> {
        let common: Bits = sets[a].iter().zip(&sets[b]).map(|(x, y)| x & y).collect();
        let members = (0..self.size).filter(|&z| bit(&common, z));
        let z = if upward {
            members.min_by_key(|&z| self.topo_rank[z])?
        } else {
            members.max_by_key(|&z| self.topo_rank[z])?
        };
        subset(&common, &sets[z]).then_some(z)
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.extreme(a, b, &self.up, true)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.extreme(a, b, &self.down, false)
    }

    fn check_lattice(&self) -> bool {
        (0..self.size).all(|a| (a + 1..self.size).all(|b| self.join(a, b).is_some() && self.meet(a, b).is_some()))
    }
}

pub fn increasing_flip_poset(ctx: &SubwordComplex<'_>) -> Result<IncreasingFlipPoset> {
    let size = ctx.num_facets();
    let flips: Vec<(usize, usize)> = ctx.increasing_flips().iter().map(|&(a, b, _, _)| (a, b)).collect();
    let mut out_arcs = vec![Vec::new(); size];
    let mut indeg = vec![0usize; size];
    for &(a, b) in &flips {
        out_arcs[a].push(b);
        indeg[b] += 1;
    }
    let mut order = Vec::with_capacity(size);
    let mut ready: VecDeque<usize> = (0..size).filter(|&a| indeg[a] == 0).collect();
    while let Some(a) = ready.pop_front() {
        order.push(a);
        for &b in &out_arcs[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push_back(b);
            }
        }
    }
    if order.len() != size {
        return Err(Error::Internal("increasing flip graph has a cycle".into()));
    }
    let mut topo_rank = vec![0; size];
    for (r, &a) in order.iter().enumerate() {
        topo_rank[a] = r;
    }
    let words = size.div_ceil(64);
    let mut up = vec![vec![0u64; words]; size];
    for &a in order.iter().rev() {
        set_bit(&mut up[a], a);
        for &b in &out_arcs[a] {
            let (x, y) = if a < b {
                let (l, r) = up.split_at_mut(b);
                (&mut l[a], &r[0])
            } else {
                let (l, r) = up.split_at_mut(a);
                (&mut r[0], &l[b])
            };
            for (p, q) in x.iter_mut().zip(y) {
                *p |= q;
            }
        }
    }
    let mut down = vec![vec![0u64; words]; size];
    for a in 0..size {
        for b in 0..size {
            if bit(&up[a], b) {
                set_bit(&mut down[b], a);
            }
        }
    }
    let covers: Vec<(usize, usize)> =
        flips.iter().copied().filter(|&(a, b)| !out_arcs[a].iter().any(|&c| c != b && bit(&up[c], b))).collect();
    let sources: Vec<usize> = (0..size).filter(|&a| !flips.iter().any(|&(_, b)| b == a)).collect();
    let sinks: Vec<usize> = (0..size).filter(|&a| out_arcs[a].is_empty()).collect();
    if sources.len() != 1 || sinks.len() != 1 {
        return Err(Error::Internal("increasing flip graph needs one source and one sink".into()));
    }
    let mut poset = IncreasingFlipPoset {
        size,
        flips,
        covers,
        min: sources[0],
        max: sinks[0],
        is_lattice: None,
        up,
        down,
        topo_rank,
    };
    if size <= LATTICE_CHECK_LIMIT {
        poset.is_lattice = Some(poset.check_lattice());
    }
    Ok(poset)
}

/// Pairs `(kappa(w), kappa(ws))` over weak order covers `w < ws` whose
/// images differ.
pub fn weak_order_image_covers(ctx: &SubwordComplex<'_>) -> Result<BTreeSet<(usize, usize)>> {
    let sys = ctx.sys();
    let map = kappa_map(ctx)?;
    let elements = sys.elements()?;
    let index: HashMap<&GroupElement, usize> = elements.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut out = BTreeSet::new();
    for (u, w) in elements.iter().enumerate() {
        for s in 0..sys.rank() {
            if sys.is_right_descent(w, s) {
                continue;
            }
            let v = index[&sys.right_mul_simple(w, s)];
            if map[u] != map[v] {
                out.insert((map[u], map[v]));
            }
        }
    }
    Ok(out)
}

/// The normal cone of `B(I)` as the union of the chambers `w(C)` over the
/// fiber of `I`. Its generators are the dual basis of the root
/// configuration under the invariant form; every chamber is checked to lie
/// inside it.
pub fn normal_cone_chambers(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<ConeDescription> {
    ctx.ensure_realizing()?;
    let sys = ctx.sys();
    let chambers = kappa_fiber(ctx, facet)?;
    let config = ctx.root_configuration(facet);
    let rows: Vec<Vec<Scalar>> = config.iter().map(|&b| sys.covector_of(sys.root(b)).0).collect();
    let m = Matrix::from_rows(rows);
    let generators: Vec<Vector> =
        (0..config.len()).map(|i| m.solve(&Vector::unit(config.len(), i)).expect("realizing configuration")).collect();
    let weights = sys.weights();
    for w in &chambers {
        for om in &weights {
            let ray = sys.apply(w, om);
            let f = sys.covector_of(&ray);
            if config.iter().any(|&b| f.dot(sys.root(b)).is_negative()) {
                return Err(Error::Internal(format!("chamber ray {ray} leaves the normal cone of {facet}")));
            }
        }
    }
    Ok(ConeDescription { generators, chambers: Some(chambers) })
}

/// Extreme rays of the chambers of a cone, up to positive scaling.
pub fn chamber_rays(sys: &CoxeterSystem, chambers: &[GroupElement]) -> Vec<Vector> {
    let weights = sys.weights();
    let mut out: Vec<Vector> = Vec::new();
    for w in chambers {
        for om in &weights {
            let ray = sys.apply(w, om);
            if !out.iter().any(|r| ray.ratio_to(r).is_some_and(|c| c.is_positive())) {
                out.push(ray);
            }
        }
    }
    out
}

/// The polytope `conv{w(I,k) : I facet}` for one position `k`.
#[derive(Clone, Debug)]
pub struct MinkowskiSummand {
    pub position: usize,
    pub letter: usize,
    /// Distinct points, in order of first appearance over the facets.
    pub points: Vec<Vector>,
    /// For each facet, the index of its point.
    pub facet_point: Vec<usize>,
    /// Edges as pairs of point indices.
    pub edges: Vec<(usize, usize)>,
}

impl MinkowskiSummand {
    pub fn dimension(&self) -> usize {
        if self.points.len() < 2 {
            return 0;
        }
        let diffs: Vec<Vector> = self.points[1..].iter().map(|p| p - &self.points[0]).collect();
        rank_of(&Matrix::from_columns(self.points[0].dim(), &diffs))
    }
}

/// Summand of the brick polytope at position `k`. All its points lie on a
/// sphere, so each is a vertex; its edges are the flips that move the point.
pub fn minkowski_summand(ctx: &SubwordComplex<'_>, k: usize) -> Result<MinkowskiSummand> {
    ctx.ensure_realizing()?;
    if k >= ctx.len() {
        return Err(Error::InvalidInput(format!("position {} out of range 1..={}", k + 1, ctx.len())));
    }
    let mut points: Vec<Vector> = Vec::new();
    let mut lookup: HashMap<Vector, usize> = HashMap::new();
    let mut facet_point = Vec::with_capacity(ctx.num_facets());
    for facet in ctx.facets() {
        let p = ctx.weight(facet, k);
        let id = *lookup.entry(p.clone()).or_insert_with(|| {
            points.push(p);
            points.len() - 1
        });
        facet_point.push(id);
    }
    let edges: BTreeSet<(usize, usize)> = polytope_edges(ctx)
        .into_iter()
        .map(|(a, b)| (facet_point[a].min(facet_point[b]), facet_point[a].max(facet_point[b])))
        .filter(|(x, y)| x != y)
        .collect();
    Ok(MinkowskiSummand { position: k, letter: ctx.letter(k), points, facet_point, edges: edges.into_iter().collect() })
}

/// Evidence that a summand is a Coxeter matroid polytope: equal norms and
/// root-parallel edges.
#[derive(Clone, Debug)]
pub struct MatroidCertificate {
    pub squared_norm: Scalar,
    /// A positive root parallel to each edge.
    pub edge_roots: Vec<RootId>,
}

pub fn matroid_certificate(sys: &CoxeterSystem, summand: &MinkowskiSummand) -> Result<MatroidCertificate> {
    let squared_norm = sys.inner(&summand.points[0], &summand.points[0]);
    if summand.points.iter().any(|p| sys.inner(p, p) != squared_norm) {
        return Err(Error::Internal(format!("summand {} has points of different norms", summand.position + 1)));
    }
    let edge_roots = summand
        .edges
        .iter()
        .map(|&(a, b)| {
            let d = &summand.points[b] - &summand.points[a];
            (0..sys.num_positive_roots()).find(|&r| d.ratio_to(sys.root(r)).is_some()).ok_or_else(|| {
                Error::Internal(format!("edge {d} of summand {} is not along a root", summand.position + 1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatroidCertificate { squared_norm, edge_roots })
}

/// Checks that each vertex's witness selects, in every summand, the point
/// of that facet, and that those points add up to the brick vector.
pub fn check_minkowski_sum(
    ctx: &SubwordComplex<'_>,
    poly: &BrickPolytope,
    summands: &[MinkowskiSummand],
) -> Result<()> {
    let n = ctx.sys().rank();
    for cert in &poly.certificates {
        let a = cert.facet;
        let mut total = Vector::zeros(n);
        for s in summands {
            let mine = &s.points[s.facet_point[a]];
            let best = s.points.iter().map(|p| cert.witness.dot(p)).max().expect("nonempty summand");
            if cert.witness.dot(mine) != best {
                return Err(Error::Internal(format!(
                    "witness of {} does not pick its point in summand {}",
                    ctx.facets()[a],
                    s.position + 1
                )));
            }
            total = &total + mine;
        }
        if total != poly.vertices[a].coords {
            return Err(Error::Internal(format!("summands do not add up to the brick vector of {}", ctx.facets()[a])));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::classical::{classical_root, classical_weight, element_from_one_line, one_line};
    use crate::coxeter::Word;

    fn a3() -> CoxeterSystem {
        CoxeterSystem::named("A", 3).unwrap()
    }

    fn qex() -> Word {
        Word::from_one_based(&[2, 3, 1, 3, 2, 1, 2, 3, 1])
    }

    fn ints(v: &[Scalar]) -> Vec<i64> {
        v.iter()
            .map(|x| {
                let r = x.as_rational().expect("rational");
                assert!(r.is_integer(), "{x}");
                i64::try_from(r.to_integer()).unwrap()
            })
            .collect()
    }

    fn perm(sys: &CoxeterSystem, s: &str) -> GroupElement {
        let p: Vec<usize> = s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
        element_from_one_line(sys, &p).unwrap()
    }

    fn line(sys: &CoxeterSystem, w: &GroupElement) -> String {
        one_line(sys, w).unwrap().iter().map(|d| d.to_string()).collect()
    }

    #[test]
    fn toy_brick_vector() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let b = brick_vector(&ctx, &Facet::from_one_based(&[2, 3, 9]), None).unwrap();
        assert_eq!(ints(&b.classical(&sys).unwrap()), vec![1, 6, 5, 6]);
        let two: Vec<Scalar> = vec![Scalar::from_int(2); 3];
        let b2 = brick_vector(&ctx, &Facet::from_one_based(&[2, 3, 9]), Some(&two)).unwrap();
        assert_eq!(b2.coords, b.coords.scale(&Scalar::from_int(2)));
        let bad = vec![Scalar::one(), Scalar::zero(), Scalar::one()];
        assert!(matches!(
            brick_vector(&ctx, &Facet::from_one_based(&[2, 3, 9]), Some(&bad)),
            Err(Error::NonPositiveWeight)
        ));
    }

    #[test]
    fn toy_polytope_is_a_pentagonal_prism() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let poly = brick_polytope(&ctx, None).unwrap();
        assert!(poly.is_certified());
        assert_eq!(poly.num_distinct_vertices(), 10);
        assert_eq!(polytope_edges(&ctx).len(), 15);
        let normals = facet_normals(&ctx, &poly).unwrap();
        assert_eq!(normals.len(), 7);
        // two pentagons and five quadrilaterals
        let mut sizes: Vec<usize> =
            normals.iter().map(|nrm| ctx.facets().iter().filter(|f| f.contains(nrm.position)).count()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 4, 4, 4, 4, 5, 5]);
    }

    #[test]
    fn flips_move_bricks_along_roots() {
        let sys = a3();
        for q in [qex(), Word::from_one_based(&[1, 2, 3, 1, 2, 3, 1, 2, 1])] {
            let ctx = SubwordComplex::new(&sys, &q).unwrap();
            for facet in ctx.facets() {
                let b = brick_vector(&ctx, facet, None).unwrap().coords;
                let roots = ctx.root_function(facet);
                let weights = ctx.weight_function(facet);
                for &i in facet.positions() {
                    let (other, j) = ctx.flip(facet, i).unwrap();
                    let d = &b - &brick_vector(&ctx, &other, None).unwrap().coords;
                    let beta = sys.root(roots[i]);
                    let c = d.ratio_to(beta).unwrap();
                    assert!(c.is_positive());
                    if i < j {
                        // coroot pairings of the weights in the window
                        let two = Scalar::from_int(2);
                        let nn = sys.inner(beta, beta);
                        let expect: Scalar = (i + 1..=j).map(|k| &(&two * &sys.inner(beta, &weights[k])) / &nn).sum();
                        assert_eq!(c, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn sign_law_on_toy_word() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        for facet in ctx.facets() {
            let roots = ctx.root_function(facet);
            let weights = ctx.weight_function(facet);
            for j in (0..ctx.len()).filter(|j| !facet.contains(*j)) {
                for k in 0..ctx.len() {
                    let v = sys.inner(sys.root(roots[j]), &weights[k]);
                    if j >= k {
                        assert!(!v.is_negative());
                    } else {
                        assert!(!v.is_positive());
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_cones_contain_all_differences() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let poly = brick_polytope(&ctx, None).unwrap();
        for (a, facet) in ctx.facets().iter().enumerate() {
            let cone = vertex_cone(&ctx, facet).unwrap();
            for v in &poly.vertices {
                assert!(cone.contains(&(&v.coords - &poly.vertices[a].coords)));
            }
        }
        let cone = vertex_cone(&ctx, &Facet::from_one_based(&[2, 3, 9])).unwrap();
        let mut gens: Vec<Vec<i64>> = cone.generators.iter().map(|g| ints(&classical_root(&sys, g).unwrap())).collect();
        gens.sort();
        let mut expect = vec![vec![0, 1, 0, -1], vec![1, 0, -1, 0], vec![0, 0, -1, 1]];
        expect.sort();
        assert_eq!(gens, expect);
    }

    #[test]
    fn kappa_and_fibers_on_toy_word() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        assert_eq!(kappa(&ctx, &sys.identity()).unwrap(), Facet::from_one_based(&[2, 3, 5]));
        assert_eq!(kappa(&ctx, sys.longest_element()).unwrap(), Facet::from_one_based(&[4, 7, 9]));
        let target = Facet::from_one_based(&[2, 5, 6]);
        assert_eq!(kappa(&ctx, &perm(&sys, "2314")).unwrap(), target);
        let fiber: Vec<String> = kappa_fiber(&ctx, &target).unwrap().iter().map(|w| line(&sys, w)).collect();
        let mut sorted = fiber.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["2314", "3124", "3214"]);

        let map = kappa_map(&ctx).unwrap();
        let elements = sys.elements().unwrap();
        let mut hit = vec![0; ctx.num_facets()];
        for (u, w) in elements.iter().enumerate() {
            assert_eq!(ctx.facets()[map[u]], kappa(&ctx, w).unwrap());
            hit[map[u]] += 1;
        }
        assert!(hit.iter().all(|&h| h > 0));
        assert_eq!(hit.iter().sum::<usize>(), 24);
    }

    #[test]
    fn fibers_are_interval_closed() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let map = kappa_map(&ctx).unwrap();
        let elements = sys.elements().unwrap();
        for (a, u) in elements.iter().enumerate() {
            for (b, v) in elements.iter().enumerate() {
                if map[a] != map[b] || !sys.weak_leq(u, v) {
                    continue;
                }
                for (c, x) in elements.iter().enumerate() {
                    if sys.weak_leq(u, x) && sys.weak_leq(x, v) {
                        assert_eq!(map[c], map[a]);
                    }
                }
            }
        }
    }

    #[test]
    fn meet_and_join_of_fibers() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let bounds = fiber_meet_join(&ctx, &Facet::from_one_based(&[2, 5, 6])).unwrap();
        let cl = |ids: &[RootId]| -> Vec<Vec<i64>> {
            let mut v: Vec<Vec<i64>> = ids.iter().map(|&b| ints(&classical_root(&sys, sys.root(b)).unwrap())).collect();
            v.sort();
            v
        };
        assert_eq!(cl(&bounds.meet_set), vec![vec![-1, 0, 1, 0]]);
        assert_eq!(cl(&bounds.join_set), cl(&sys.inversion_root_set(&perm(&sys, "3214"))));
        assert!(bounds.meet.is_none());
        assert_eq!(line(&sys, bounds.join.as_ref().unwrap()), "3214");
        // against the enumerated fibers
        for facet in ctx.facets() {
            let fiber = kappa_fiber(&ctx, facet).unwrap();
            let sets: Vec<BTreeSet<RootId>> =
                fiber.iter().map(|w| sys.inversion_root_set(w).into_iter().collect()).collect();
            let inter: BTreeSet<RootId> = sets.iter().skip(1).fold(sets[0].clone(), |a, b| &a & b);
            let union: BTreeSet<RootId> = sets.iter().fold(BTreeSet::new(), |a, b| &a | b);
            let bounds = fiber_meet_join(&ctx, facet).unwrap();
            assert_eq!(bounds.meet_set, inter.iter().copied().collect::<Vec<_>>());
            assert_eq!(bounds.join_set, union.iter().copied().collect::<Vec<_>>());
            let has_meet = sets.iter().any(|s| s == &inter);
            assert_eq!(bounds.meet.is_some(), has_meet);
            let has_join = sets.iter().any(|s| s == &union);
            assert_eq!(bounds.join.is_some(), has_join);
        }
    }

    #[test]
    fn toy_poset() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let poset = increasing_flip_poset(&ctx).unwrap();
        assert_eq!(poset.size, 10);
        assert_eq!(ctx.facets()[poset.min], Facet::from_one_based(&[2, 3, 5]));
        assert_eq!(ctx.facets()[poset.max], Facet::from_one_based(&[4, 7, 9]));
        let flips: BTreeSet<(usize, usize)> = poset.flips.iter().copied().collect();
        assert_eq!(weak_order_image_covers(&ctx).unwrap(), flips);
        assert!(poset.is_lattice.is_some());
    }

    #[test]
    fn tamari_lattice() {
        let sys = a3();
        let q = Word::from_one_based(&[1, 2, 3, 1, 2, 3, 1, 2, 1]);
        let ctx = SubwordComplex::new(&sys, &q).unwrap();
        let poset = increasing_flip_poset(&ctx).unwrap();
        assert_eq!(poset.size, 14);
        assert_eq!(poset.is_lattice, Some(true));
        assert_eq!(poset.covers.len(), 21);
        let poly = brick_polytope(&ctx, None).unwrap();
        assert!(poly.is_certified());
        assert_eq!(poly.num_distinct_vertices(), 14);
    }

    #[test]
    fn lattice_check_detects_non_lattices() {
        // a crown a, b < c, d is not a lattice
        let words = 1;
        let mut up = vec![vec![0u64; words]; 6];
        let rel = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        for a in 0..6 {
            set_bit(&mut up[a], a);
        }
        for _ in 0..3 {
            for &(a, b) in &rel {
                let ub = up[b].clone();
                for (x, y) in up[a].iter_mut().zip(&ub) {
                    *x |= y;
                }
            }
        }
        let mut down = vec![vec![0u64; words]; 6];
        for a in 0..6 {
            for b in 0..6 {
                if bit(&up[a], b) {
                    set_bit(&mut down[b], a);
                }
            }
        }
        let poset = IncreasingFlipPoset {
            size: 6,
            flips: rel.to_vec(),
            covers: rel.to_vec(),
            min: 0,
            max: 5,
            is_lattice: None,
            up,
            down,
            topo_rank: (0..6).collect(),
        };
        assert!(!poset.check_lattice());
        assert_eq!(poset.join(1, 2), None);
        assert_eq!(poset.join(3, 4), Some(5));
        assert_eq!(poset.meet(3, 4), None);
    }

    #[test]
    fn normal_cones_are_chamber_unions() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let map = kappa_map(&ctx).unwrap();
        for (a, facet) in ctx.facets().iter().enumerate() {
            let cone = normal_cone_chambers(&ctx, facet).unwrap();
            let chambers = cone.chambers.as_ref().unwrap();
            assert_eq!(chambers.len(), map.iter().filter(|&&x| x == a).count());
            let rays = chamber_rays(&sys, chambers);
            // every generator is a ray of some chamber
            for g in &cone.generators {
                assert!(rays.iter().any(|r| r.ratio_to(g).is_some_and(|c| c.is_positive())));
            }
        }
        let start = normal_cone_chambers(&ctx, &Facet::from_one_based(&[2, 3, 5])).unwrap();
        assert!(start.chambers.unwrap().iter().any(|w| w.is_identity()));
    }

    #[test]
    fn toy_minkowski_summands() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let poly = brick_polytope(&ctx, None).unwrap();
        let summands: Vec<MinkowskiSummand> = (0..ctx.len()).map(|k| minkowski_summand(&ctx, k).unwrap()).collect();
        let shapes: Vec<usize> = summands.iter().map(|s| s.points.len()).collect();
        assert_eq!(shapes, vec![1, 1, 1, 2, 1, 2, 3, 1, 2]);
        let cl = |s: &MinkowskiSummand| -> Vec<Vec<i64>> {
            let mut v: Vec<Vec<i64>> =
                s.points.iter().map(|p| ints(&classical_weight(&sys, p, s.letter).unwrap())).collect();
            v.sort();
            v
        };
        assert_eq!(cl(&summands[3]), vec![vec![0, 0, 0, 1], vec![0, 1, 0, 0]]);
        assert_eq!(cl(&summands[5]), vec![vec![0, 1, 1, 1], vec![1, 1, 0, 1]]);
        assert_eq!(cl(&summands[8]), vec![vec![1, 1, 0, 1], vec![1, 1, 1, 0]]);
        assert_eq!(cl(&summands[6]), vec![vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 1, 0, 0]]);
        assert_eq!(summands[6].edges.len(), 3);
        assert_eq!(summands[6].dimension(), 2);
        for s in &summands {
            matroid_certificate(&sys, s).unwrap();
        }
        check_minkowski_sum(&ctx, &poly, &summands).unwrap();
    }

    #[test]
    fn duplicated_word() {
        // 1,2,1,3,2,1 with positions 1, 2, 4 doubled
        let sys = a3();
        let q = Word::from_one_based(&[1, 1, 2, 2, 1, 3, 3, 2, 1]);
        let ctx = SubwordComplex::new(&sys, &q).unwrap();
        let stars = [0usize, 2, 5];
        let facet = |eps: [usize; 3]| Facet::new((0..3).map(|t| stars[t] + eps[t]).collect());
        let base = brick_vector(&ctx, &facet([0, 0, 0]), None).unwrap().coords;
        let alphas: Vec<Vector> = stars.iter().map(|&p| sys.root(ctx.root(&facet([0, 0, 0]), p)).clone()).collect();
        for mask in 0..8usize {
            let eps = [mask & 1, (mask >> 1) & 1, (mask >> 2) & 1];
            let b = brick_vector(&ctx, &facet(eps), None).unwrap().coords;
            let expect = (0..3).fold(base.clone(), |acc, t| if eps[t] == 1 { &acc - &alphas[t] } else { acc });
            assert_eq!(b, expect);
        }
        let poly = brick_polytope(&ctx, None).unwrap();
        assert!(poly.is_certified());
        let poset = increasing_flip_poset(&ctx).unwrap();
        assert_eq!(poset.covers.len(), 12);
        assert_eq!(poset.is_lattice, Some(true));
        for (t, &p) in stars.iter().enumerate() {
            let s = minkowski_summand(&ctx, p + 1).unwrap();
            assert_eq!(s.points.len(), 2);
            assert_eq!(&(&s.points[1] - &s.points[0]).ratio_to(&alphas[t]).unwrap().abs(), &Scalar::one());
        }
        // same fiber iff inversion sets agree on the doubled roots
        let map = kappa_map(&ctx).unwrap();
        let elements = sys.elements().unwrap();
        let ids: Vec<RootId> = alphas.iter().map(|a| sys.root_id(a).unwrap()).collect();
        for (a, u) in elements.iter().enumerate() {
            for (b, v) in elements.iter().enumerate() {
                let iu: HashSet<RootId> = sys.inversion_root_set(u).into_iter().collect();
                let iv: HashSet<RootId> = sys.inversion_root_set(v).into_iter().collect();
                let agree = ids.iter().all(|r| iu.contains(r) == iv.contains(r));
                assert_eq!(map[a] == map[b], agree);
            }
        }
    }

    #[test]
    fn non_realizing_words_are_refused() {
        let sys = CoxeterSystem::named("A", 2).unwrap();
        let ctx = SubwordComplex::new(&sys, &Word::from_one_based(&[1, 2, 1, 2])).unwrap();
        assert!(matches!(brick_polytope(&ctx, None), Err(Error::NotRealizing { rank: 1, size: 1, expected: 2 })));
        assert!(kappa(&ctx, &sys.identity()).is_err());
    }

    #[test]
    fn element_from_inversions_roundtrip() {
        let sys = CoxeterSystem::named("B", 3).unwrap();
        for w in sys.elements().unwrap() {
            let inv = sys.inversion_root_set(w);
            assert_eq!(sys.element_with_inversions(&inv).as_ref(), Some(w));
            let mut mask = vec![false; sys.num_positive_roots()];
            for b in inv {
                mask[b] = true;
            }
            assert!(is_biclosed(&sys, &mask));
        }
    }
}
