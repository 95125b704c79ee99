//! Cluster complexes as subword complexes of `c w0(c)`.
//!
//! Here `w0(c)` is the c-sorting word of the longest element. Positions are
//! 0-based. The almost positive roots are listed along the word:
//! `-alpha_{c_i}` on the leading copy of `c`, then the inversion sequence
//! of `w0(c)`. A facet is sent to the roots at its positions (a cluster),
//! to the minimum of its fiber (a c-sortable element), and to the product
//! of the reflections in its negative roots (a noncrossing partition).

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::brick::{
    brick_polytope, brick_vector, facet_normals, fiber_meet_join, increasing_flip_poset, kappa, kappa_fiber, kappa_map,
};
use crate::coxeter::classical::classical_with_tally;
use crate::coxeter::{CoxeterSystem, GroupElement, Inequality, RootId, Word};
use crate::error::{Error, Result};
use crate::exactnum::{rank_of, Matrix, Scalar, Vector};
use crate::subword::{facet_from_roots, Facet, RootPart, SubwordComplex};

pub struct ClusterCtx<'a> {
    pub sys: &'a CoxeterSystem,
    pub c: Word,
    /// The c-sorting word of `w0`.
    pub w0_word: Word,
    pub cw0: Word,
    pub ctx: SubwordComplex<'a>,
    /// Almost positive root at each position of `cw0`.
    pub almost_positive: Vec<RootId>,
    /// `rho_p`, the product of the first `p` letters of `w0(c)`, for `0 <= p <= N`.
    pub prefixes: Vec<GroupElement>,
    /// `alpha_p = rho_{p-1}(alpha_{w_p})`, stored 0-based.
    pub alphas: Vec<RootId>,
    /// `omega_p = rho_{p-1}(omega_{w_p})`, stored 0-based.
    pub omegas: Vec<Vector>,
    /// Sum of the `omega_p`.
    pub theta: Vector,
    sortables: OnceLock<Vec<GroupElement>>,
}

/// A noncrossing partition and its reflection length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncrossingPartition {
    pub element: GroupElement,
    pub reflection_length: usize,
}

/// The fixed space of a noncrossing partition, by a basis in root
/// coordinates.
#[derive(Clone, Debug)]
pub struct NoncrossingSubspace {
    pub basis: Vec<Vector>,
}

/// The two root sequences attached to a facet `{i_1 < ... < i_n}` with `j`
/// positions on the leading copy of `c`.
#[derive(Clone, Debug)]
pub struct ClusterPairing {
    pub j: usize,
    /// Root configuration in position order.
    pub alphas: Vec<RootId>,
    /// Cluster roots in position order.
    pub betas: Vec<RootId>,
    /// `c` with the letters `s_{beta_1}, ..., s_{beta_j}` removed.
    pub c_prime: GroupElement,
    pub verified: bool,
}

/// The six singleton conditions for one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingletonReport {
    pub facet: Facet,
    pub fiber_size: usize,
    pub singleton_fiber: bool,
    pub roots_are_image_of_simple: bool,
    pub weights_are_image_of_fundamental: bool,
    pub vertex_on_permutahedron: bool,
    pub prefix_of_sorting_word: bool,
    pub complement_spells_sorting_word: bool,
}

impl SingletonReport {
    pub fn conditions(&self) -> [bool; 6] {
        [
            self.singleton_fiber,
            self.roots_are_image_of_simple,
            self.weights_are_image_of_fundamental,
            self.vertex_on_permutahedron,
            self.prefix_of_sorting_word,
            self.complement_spells_sorting_word,
        ]
    }

    pub fn is_singleton(&self) -> bool {
        self.singleton_fiber
    }
}

/// The generalized associahedron obtained from a permutahedron by dropping
/// inequalities, compared with the brick polytope of the cluster word.
#[derive(Clone, Debug)]
pub struct AssociahedronReport {
    pub q: Vector,
    pub lambda: Vec<Scalar>,
    pub translation: Vector,
    pub translation_classical: Option<Vec<Scalar>>,
    /// Kept permutahedron inequalities, translated.
    pub kept: Vec<Inequality>,
    pub distinct_normals: usize,
    pub prefix_vertices_match: bool,
    pub vertices_satisfy: bool,
    pub inequalities_tight: bool,
    pub normals_match_weights: bool,
    pub normals_match_polytope: bool,
    pub comparison: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CambrianCheck {
    pub lattice_iso: bool,
    pub fan_iso: bool,
}

impl<'a> ClusterCtx<'a> {
    pub fn new(sys: &'a CoxeterSystem, c: &Word) -> Result<Self> {
        sys.check_coxeter_word(c)?;
        let n = sys.rank();
        let w0_word = sys.c_sorting_word(c, sys.longest_element())?;
        let cw0 = c.concat(&w0_word);
        let ctx = SubwordComplex::new(sys, &cw0)?;
        if ctx.was_completed() {
            return Err(Error::Internal("cluster word does not reach w0".into()));
        }
        ctx.ensure_realizing()?;
        let leading = Facet((0..n).collect());
        let mut config = ctx.root_configuration(&leading);
        config.sort_unstable();
        if config != (0..n).map(|s| sys.simple_root_id(s)).collect::<Vec<_>>() {
            return Err(Error::Internal("leading facet does not carry the simple roots".into()));
        }
        let mut prefixes = vec![sys.identity()];
        let mut alphas = Vec::with_capacity(w0_word.len());
        let mut omegas = Vec::with_capacity(w0_word.len());
        for &s in w0_word.letters() {
            let rho = prefixes.last().expect("nonempty");
            alphas.push(rho.image(sys.simple_root_id(s)));
            omegas.push(sys.apply_weight(rho, s));
            prefixes.push(sys.right_mul_simple(rho, s));
        }
        let theta = omegas.iter().fold(Vector::zeros(n), |acc, w| &acc + w);
        let almost_positive =
            c.letters().iter().map(|&s| sys.negate(sys.simple_root_id(s))).chain(alphas.iter().copied()).collect();
        Ok(ClusterCtx {
            sys,
            c: c.clone(),
            w0_word,
            cw0,
            ctx,
            almost_positive,
            prefixes,
            alphas,
            omegas,
            theta,
            sortables: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.cw0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cw0.is_empty()
    }

    pub fn coxeter_element(&self) -> GroupElement {
        self.sys.word_to_element(&self.c).expect("checked word")
    }

    /// How often each generator occurs in `w0(c)`, scaled by `lambda`.
    pub fn theta_tally(&self, lambda: &[Scalar]) -> Vec<Scalar> {
        let mut t = vec![Scalar::zero(); self.sys.rank()];
        for &s in self.w0_word.letters() {
            t[s] = &t[s] + &lambda[s];
        }
        t
    }

    /// `sum_p lambda(w_p) omega_p`.
    pub fn scaled_theta(&self, lambda: &[Scalar]) -> Vector {
        self.omegas
            .iter()
            .zip(self.w0_word.letters())
            .fold(Vector::zeros(self.sys.rank()), |acc, (w, &s)| acc.add_scaled(&lambda[s], w))
    }

    // ---- clusters ----

    pub fn facet_to_cluster(&self, facet: &Facet) -> Result<Vec<RootId>> {
        self.ctx.check_facet(facet)?;
        Ok(facet.positions().iter().map(|&i| self.almost_positive[i]).collect())
    }

    pub fn cluster_to_facet(&self, cluster: &[RootId]) -> Result<Facet> {
        let mut positions = Vec::with_capacity(cluster.len());
        for &b in cluster {
            let p = self
                .almost_positive
                .iter()
                .position(|&x| x == b)
                .ok_or_else(|| Error::NotACluster(format!("root {} is not almost positive", b + 1)))?;
            positions.push(p);
        }
        let facet = Facet::new(positions);
        if facet.len() != cluster.len() || !self.ctx.is_facet(&facet) {
            return Err(Error::NotACluster(format!("positions {facet} do not form a facet")));
        }
        Ok(facet)
    }

    /// Checks the exchange between the root configuration and the cluster
    /// of a facet, and the reordering of their products.
    pub fn cluster_root_conversion(&self, facet: &Facet) -> Result<ClusterPairing> {
        let sys = self.sys;
        let n = sys.rank();
        let alphas = self.ctx.root_configuration(facet);
        let betas = self.facet_to_cluster(facet)?;
        let j = facet.positions().iter().filter(|&&i| i < n).count();
        let mut verified = true;
        for p in j..n {
            let a = betas[p + 1..].iter().fold(betas[p], |r, &b| sys.reflect_root(b, r));
            let b = alphas[p + 1..].iter().fold(alphas[p], |r, &a| sys.reflect_root(a, r));
            verified &= sys.negate(a) == alphas[p] && sys.negate(b) == betas[p];
        }
        let removed: HashSet<usize> = facet.positions()[..j].iter().map(|&i| self.c.letters()[i]).collect();
        let c_prime = self
            .c
            .letters()
            .iter()
            .filter(|s| !removed.contains(s))
            .fold(sys.identity(), |acc, &s| sys.right_mul_simple(&acc, s));
        let left = sys.reflection_product(&alphas[j..]);
        let rev: Vec<RootId> = betas[j..].iter().rev().copied().collect();
        let right = sys.reflection_product(&rev);
        verified &= left == c_prime && right == c_prime;
        Ok(ClusterPairing { j, alphas, betas, c_prime, verified })
    }

    // ---- sortable elements ----

    /// The c-sortable elements, in the order of [`CoxeterSystem::elements`].
    pub fn sortable_elements(&self) -> Result<&[GroupElement]> {
        if let Some(v) = self.sortables.get() {
            return Ok(v);
        }
        let mut out = Vec::new();
        for w in self.sys.elements()? {
            if self.sys.is_c_sortable(&self.c, w)? {
                out.push(w.clone());
            }
        }
        Ok(self.sortables.get_or_init(|| out))
    }

    /// The minimum of the fiber of `facet`, which is c-sortable.
    pub fn facet_to_sortable(&self, facet: &Facet) -> Result<GroupElement> {
        let bounds = fiber_meet_join(&self.ctx, facet)?;
        let w = bounds.meet.ok_or_else(|| Error::Internal(format!("fiber of {facet} has no minimum")))?;
        if !self.sys.is_c_sortable(&self.c, &w)? {
            return Err(Error::Internal(format!("fiber minimum of {facet} is not sortable")));
        }
        Ok(w)
    }

    /// `kappa(w)`, together with whether `w` was c-sortable.
    pub fn sortable_to_facet(&self, w: &GroupElement) -> Result<(Facet, bool)> {
        let sortable = self.sys.is_c_sortable(&self.c, w)?;
        Ok((kappa(&self.ctx, w)?, sortable))
    }

    /// The roots skipped by the sorting word of a sortable element, by
    /// recursion on length and rank.
    pub fn skips_set(&self, w: &GroupElement) -> Result<Vec<RootId>> {
        if !self.sys.is_c_sortable(&self.c, w)? {
            return Err(Error::NotSortable);
        }
        let word = self.sys.reduced_word(w);
        skips(self.sys, &self.c, &word)?
            .iter()
            .map(|v| self.sys.root_id(v).ok_or_else(|| Error::Internal("skip is not a root".into())))
            .collect()
    }

    // ---- noncrossing partitions ----

    fn noncrossing(&self, element: GroupElement) -> Result<NoncrossingPartition> {
        let sys = self.sys;
        let reflection_length = sys.fixed_space_codim(&element);
        let rest = element.inverse().compose(&self.coxeter_element());
        if reflection_length + sys.fixed_space_codim(&rest) != sys.rank() {
            return Err(Error::NotNoncrossing(sys.reduced_word(&element).to_string()));
        }
        Ok(NoncrossingPartition { element, reflection_length })
    }

    /// Positions of `facet` whose root is negative.
    pub fn upper_positions(&self, facet: &Facet) -> Vec<usize> {
        let roots = self.ctx.root_function(facet);
        facet.positions().iter().copied().filter(|&i| !self.sys.is_positive(roots[i])).collect()
    }

    pub fn facet_to_ncp(&self, facet: &Facet) -> Result<NoncrossingPartition> {
        self.ctx.check_facet(facet)?;
        let roots = self.ctx.root_function(facet);
        let upper: Vec<RootId> = self.upper_positions(facet).iter().map(|&i| roots[i]).collect();
        self.noncrossing(self.sys.reflection_product(&upper))
    }

    /// Product of the reflections in the upper roots of a cluster, from
    /// right to left along the cluster order.
    pub fn cluster_to_ncp(&self, cluster: &[RootId]) -> Result<NoncrossingPartition> {
        let facet = self.cluster_to_facet(cluster)?;
        let mut upper: Vec<RootId> = self.upper_positions(&facet).iter().map(|&i| self.almost_positive[i]).collect();
        upper.reverse();
        self.noncrossing(self.sys.reflection_product(&upper))
    }

    /// Product of the cover reflections of a sortable element, ordered along
    /// its sorting word.
    pub fn sortable_to_ncp(&self, w: &GroupElement) -> Result<NoncrossingPartition> {
        if !self.sys.is_c_sortable(&self.c, w)? {
            return Err(Error::NotSortable);
        }
        let covers = self.sys.cover_reflections(w, Some(&self.c))?;
        self.noncrossing(self.sys.reflection_product(&covers))
    }

    pub fn ncp_to_subspace(&self, w: &NoncrossingPartition) -> NoncrossingSubspace {
        NoncrossingSubspace { basis: self.sys.fixed_space(&w.element) }
    }

    /// Inverse of the fixed space map composed with the facet map, by
    /// recursion on the last letter of the cluster word.
    pub fn subspace_to_facet(&self, subspace: &NoncrossingSubspace) -> Result<Facet> {
        let sys = self.sys;
        let n = sys.rank();
        let not_nc = || Error::NotNoncrossing("subspace".into());
        if subspace.basis.iter().any(|v| v.dim() != n) {
            return Err(Error::InvalidInput(format!("subspace vectors must have dimension {n}")));
        }
        let dim = span_dim(n, &subspace.basis);
        if dim != subspace.basis.len() {
            return Err(Error::InvalidInput("subspace basis is dependent".into()));
        }
        let upper = ncs_upper_roots(sys, &self.c, &subspace.basis, fuel(sys))?;
        let ids: Vec<RootId> = upper.iter().map(|v| sys.root_id(v)).collect::<Option<_>>().ok_or_else(not_nc)?;
        let facet = facet_from_roots(&self.ctx, &ids, RootPart::Negative).map_err(|_| not_nc())?;
        let back = self.ncp_to_subspace(&self.facet_to_ncp(&facet)?);
        if !same_span(n, &back.basis, &subspace.basis) {
            return Err(not_nc());
        }
        Ok(facet)
    }

    // ---- Cambrian lattice and fan ----

    /// The largest c-sortable element below `w` in weak order.
    pub fn pi_down(&self, w: &GroupElement) -> Result<GroupElement> {
        let sys = self.sys;
        let below: Vec<&GroupElement> = self.sortable_elements()?.iter().filter(|v| sys.weak_leq(v, w)).collect();
        let top = below
            .iter()
            .copied()
            .max_by_key(|v| sys.length(v))
            .ok_or_else(|| Error::Internal("no sortable element below".into()))?;
        if !below.iter().all(|v| sys.weak_leq(v, top)) {
            return Err(Error::Internal("sortable elements below have no maximum".into()));
        }
        Ok(top.clone())
    }

    pub fn singleton_report(&self, w: &GroupElement) -> Result<SingletonReport> {
        let sys = self.sys;
        let n = sys.rank();
        let facet = kappa(&self.ctx, w)?;
        let fiber_size = kappa_fiber(&self.ctx, &facet)?.len();

        let mut roots = self.ctx.root_configuration(&facet);
        roots.sort_unstable();
        let mut images: Vec<RootId> = (0..n).map(|s| w.image(sys.simple_root_id(s))).collect();
        images.sort_unstable();

        let weights: Vec<Vector> = facet.positions().iter().map(|&i| self.ctx.weight(&facet, i)).collect();
        let wanted: Vec<Vector> = (0..n).map(|s| sys.apply_weight(w, s)).collect();
        let weights_ok = weights.iter().all(|x| wanted.contains(x)) && wanted.iter().all(|x| weights.contains(x));

        let q = sys.weights().iter().fold(Vector::zeros(n), |acc, x| &acc + x);
        let vertex = brick_vector(&self.ctx, &facet, None)?.coords == &self.theta + &sys.apply(w, &q);

        let complement = Word((0..self.len()).filter(|&k| !facet.contains(k)).map(|k| self.cw0.letters()[k]).collect());
        let report = SingletonReport {
            fiber_size,
            singleton_fiber: fiber_size == 1,
            roots_are_image_of_simple: roots == images,
            weights_are_image_of_fundamental: weights_ok,
            vertex_on_permutahedron: vertex,
            prefix_of_sorting_word: self.is_heap_prefix(w),
            complement_spells_sorting_word: crate::coxeter::commutation_matching(sys, &complement, &self.w0_word)
                .is_some(),
            facet,
        };
        let c = report.conditions();
        if c.iter().any(|&x| x != c[0]) {
            return Err(Error::Internal(format!("singleton conditions disagree: {c:?}")));
        }
        Ok(report)
    }

    /// Whether the inversion positions of `w` form a lower set of the heap
    /// of `w0(c)`, i.e. a reduced word of `w` is a prefix of a word
    /// commutation equivalent to `w0(c)`.
    fn is_heap_prefix(&self, w: &GroupElement) -> bool {
        let inv: HashSet<RootId> = self.sys.inversion_root_set(w).into_iter().collect();
        let letters = self.w0_word.letters();
        let m = self.sys.coxeter_matrix();
        let member: Vec<bool> = self.alphas.iter().map(|a| inv.contains(a)).collect();
        (0..letters.len())
            .filter(|&b| member[b])
            .all(|b| (0..b).all(|a| member[a] || (letters[a] != letters[b] && m[letters[a]][letters[b]] == 2)))
    }

    /// Permutahedron facets through some `rho_p(q)`, translated by the
    /// scaled `theta`, compared with the brick polytope for the scaling
    /// read off `q`.
    pub fn associahedron_by_removal(&self, q: Option<&Vector>) -> Result<AssociahedronReport> {
        let sys = self.sys;
        let n = sys.rank();
        let q = match q {
            Some(q) => q.clone(),
            None => sys.weights().iter().fold(Vector::zeros(n), |acc, x| &acc + x),
        };
        if !sys.is_interior(&q) {
            return Err(Error::NotInterior);
        }
        let lambda = sys.to_weight_coords(&q).0;
        let perm = sys.permutahedron(&q)?;
        let translation = self.scaled_theta(&lambda);
        let translation_classical = classical_with_tally(sys, &translation, &self.theta_tally(&lambda));
        let prefix_points: Vec<Vector> = self.prefixes.iter().map(|r| sys.apply(r, &q)).collect();
        let kept: Vec<Inequality> = perm
            .inequalities
            .iter()
            .filter(|h| prefix_points.iter().any(|x| sys.inner(&h.normal, x) == h.rhs))
            .map(|h| Inequality { rhs: &h.rhs + &sys.inner(&h.normal, &translation), ..h.clone() })
            .collect();

        let poly = brick_polytope(&self.ctx, Some(&lambda))?;
        let mut prefix_vertices_match = true;
        for (r, x) in self.prefixes.iter().zip(&prefix_points) {
            let facet = kappa(&self.ctx, r)?;
            let b = &poly.vertices[self.ctx.index_of(&facet)?].coords;
            prefix_vertices_match &= *b == &translation + x;
        }
        let vertices_satisfy =
            kept.iter().all(|h| poly.vertices.iter().all(|v| sys.inner(&h.normal, &v.coords) <= h.rhs));
        let inequalities_tight =
            kept.iter().all(|h| poly.vertices.iter().filter(|v| sys.inner(&h.normal, &v.coords) == h.rhs).count() >= n);

        let kept_normals: Vec<Vector> = dedup_rays(kept.iter().map(|h| h.normal.clone()));
        let w0 = sys.longest_element();
        let mut expected: Vec<Vector> = self.omegas.clone();
        expected.extend((0..n).map(|s| sys.apply_weight(w0, s)));
        let expected = dedup_rays(expected.into_iter());
        let normals_match_weights = same_rays(&kept_normals, &expected);
        let poly_normals = dedup_rays(facet_normals(&self.ctx, &poly)?.into_iter().map(|f| f.covector));
        let kept_covectors: Vec<Vector> = kept_normals.iter().map(|v| sys.covector_of(v)).collect();
        let normals_match_polytope = same_rays(&kept_covectors, &poly_normals);

        let comparison = prefix_vertices_match
            && vertices_satisfy
            && inequalities_tight
            && normals_match_weights
            && normals_match_polytope;
        Ok(AssociahedronReport {
            q,
            lambda,
            translation,
            translation_classical,
            distinct_normals: kept_normals.len(),
            kept,
            prefix_vertices_match,
            vertices_satisfy,
            inequalities_tight,
            normals_match_weights,
            normals_match_polytope,
            comparison,
        })
    }

    /// For every facet `I` and `i` in `I`: `<w(I,i), r(I,j)>` vanishes for
    /// the other `j` in `I` and is positive for `j = i`.
    pub fn weight_normality(&self) -> bool {
        let sys = self.sys;
        self.ctx.facets().iter().all(|facet| {
            let roots = self.ctx.root_function(facet);
            let weights = self.ctx.weight_function(facet);
            facet.positions().iter().all(|&i| {
                facet.positions().iter().all(|&j| {
                    let x = sys.inner(&weights[i], sys.root(roots[j]));
                    if i == j {
                        x.is_positive()
                    } else {
                        x.is_zero()
                    }
                })
            })
        })
    }

    /// Compares the increasing flip order with weak order on sortable
    /// elements, and the fibers of `kappa` with those of `pi_down`.
    pub fn verify_cambrian(&self) -> Result<CambrianCheck> {
        let sys = self.sys;
        let elements = sys.elements()?;
        let index: HashMap<&GroupElement, usize> = elements.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let kmap = kappa_map(&self.ctx)?;
        let sortables = self.sortable_elements()?;
        let images: Vec<usize> = sortables.iter().map(|v| kmap[index[v]]).collect();
        let distinct: HashSet<usize> = images.iter().copied().collect();
        let bijective = distinct.len() == images.len() && images.len() == self.ctx.num_facets();

        let poset = increasing_flip_poset(&self.ctx)?;
        let inversions: Vec<HashSet<RootId>> =
            sortables.iter().map(|v| sys.inversion_root_set(v).into_iter().collect()).collect();
        let mut lattice_iso = bijective;
        for a in 0..sortables.len() {
            for b in 0..sortables.len() {
                let weak = inversions[a].is_subset(&inversions[b]);
                lattice_iso &= weak == poset.leq(images[a], images[b]);
            }
        }

        let all_inversions: Vec<HashSet<RootId>> =
            elements.iter().map(|w| sys.inversion_root_set(w).into_iter().collect()).collect();
        let mut fan_iso = bijective;
        for (u, inv) in all_inversions.iter().enumerate() {
            let below: Vec<usize> = (0..sortables.len()).filter(|&a| inversions[a].is_subset(inv)).collect();
            let Some(&top) = below.iter().max_by_key(|&&a| inversions[a].len()) else {
                fan_iso = false;
                continue;
            };
            let unique = below.iter().all(|&a| inversions[a].is_subset(&inversions[top]));
            fan_iso &= unique && images[top] == kmap[u];
        }
        Ok(CambrianCheck { lattice_iso, fan_iso })
    }

    /// The Cambrian lattice as a Graphviz digraph on facets, labelled by the
    /// sorting words of the sortable elements.
    pub fn cambrian_lattice_dot(&self) -> Result<String> {
        let poset = increasing_flip_poset(&self.ctx)?;
        let mut out = String::from("digraph cambrian {\n  rankdir=BT;\n");
        for (k, facet) in self.ctx.facets().iter().enumerate() {
            let v = self.facet_to_sortable(facet)?;
            let blocks = self.sys.c_sorting_blocks(&self.c, &v)?;
            let label: Vec<String> =
                blocks.iter().map(|b| b.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join("")).collect();
            let label = if label.is_empty() { "e".to_string() } else { label.join("|") };
            out.push_str(&format!("  {k} [label=\"{label}\\n{}\"];\n", facet.label()));
        }
        for &(a, b) in &poset.covers {
            out.push_str(&format!("  {a} -> {b};\n"));
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn span_dim(n: usize, vs: &[Vector]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rank_of(&Matrix::from_columns(n, vs))
    }
}

fn same_span(n: usize, a: &[Vector], b: &[Vector]) -> bool {
    let both: Vec<Vector> = a.iter().chain(b).cloned().collect();
    let d = span_dim(n, &both);
    d == span_dim(n, a) && d == span_dim(n, b)
}

fn dedup_rays(vs: impl Iterator<Item = Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        if !out.iter().any(|r| v.ratio_to(r).is_some_and(|c| c.is_positive())) {
            out.push(v);
        }
    }
    out
}

fn same_rays(a: &[Vector], b: &[Vector]) -> bool {
    let has = |set: &[Vector], v: &Vector| set.iter().any(|r| v.ratio_to(r).is_some_and(|c| c.is_positive()));
    a.len() == b.len() && a.iter().all(|v| has(b, v))
}

/// Generators connected to `s` in the Coxeter graph.
fn component_of(sys: &CoxeterSystem, s: usize) -> Vec<usize> {
    let m = sys.coxeter_matrix();
    let mut seen = vec![s];
    let mut k = 0;
    while k < seen.len() {
        let a = seen[k];
        for t in 0..sys.rank() {
            if m[a][t] > 2 && !seen.contains(&t) {
                seen.push(t);
            }
        }
        k += 1;
    }
    seen.sort_unstable();
    seen
}

/// A maximal independent subfamily.
fn independent(vs: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        out.push(v.clone());
        if span_dim(v.dim(), &out) < out.len() {
            out.pop();
        }
    }
    out
}

/// Generator `t` with `w0 s w0 = t`.
fn psi(sys: &CoxeterSystem, s: usize) -> usize {
    let b = sys.negate(sys.longest_element().image(sys.simple_root_id(s)));
    (0..sys.rank()).find(|&t| sys.simple_root_id(t) == b).expect("w0 permutes the simple roots up to sign")
}

fn fuel(sys: &CoxeterSystem) -> usize {
    4 * (sys.rank() + sys.num_positive_roots()) + 1
}

fn embed(n: usize, subset: &[usize], v: &Vector) -> Vector {
    let mut out = Vector::zeros(n);
    for (i, &s) in subset.iter().enumerate() {
        out[s] = v[i].clone();
    }
    out
}

fn parabolic_word(subset: &[usize], letters: impl Iterator<Item = usize>) -> Word {
    Word(letters.map(|s| subset.iter().position(|&t| t == s).expect("letter in subset")).collect())
}

/// The skipped roots of the element spelled by `word`, whose first letter
/// in `c` decides the recursion.
fn skips(sys: &CoxeterSystem, c: &Word, word: &Word) -> Result<Vec<Vector>> {
    let n = sys.rank();
    if n == 0 {
        return Ok(Vec::new());
    }
    let w = sys.word_to_element(word)?;
    let s = c.letters()[0];
    let rest: Vec<usize> = c.letters()[1..].to_vec();
    if sys.is_left_descent(&w, s) {
        let sw = sys.left_mul_simple(s, &w);
        let rotated = Word(rest.iter().copied().chain([s]).collect());
        let inner = skips(sys, &rotated, &sys.reduced_word(&sw))?;
        let g = sys.simple_reflection(s);
        Ok(inner.iter().map(|v| sys.apply(g, v)).collect())
    } else {
        let subset: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let reduced = sys.reduced_word(&w);
        if reduced.letters().contains(&s) {
            return Err(Error::NotSortable);
        }
        let sub = sys.standard_parabolic(&subset)?;
        let sub_c = parabolic_word(&subset, rest.iter().copied());
        let sub_word = parabolic_word(&subset, reduced.letters().iter().copied());
        let mut out: Vec<Vector> = skips(&sub, &sub_c, &sub_word)?.iter().map(|v| embed(n, &subset, v)).collect();
        out.push(sys.root(sys.simple_root_id(s)).clone());
        Ok(out)
    }
}

/// Negative roots (as vectors) of the root configuration of the facet of
/// `c w0(c)` attached to the noncrossing subspace spanned by `basis`.
fn ncs_upper_roots(sys: &CoxeterSystem, c: &Word, basis: &[Vector], fuel_left: usize) -> Result<Vec<Vector>> {
    let n = sys.rank();
    if basis.len() == n {
        return Ok(Vec::new());
    }
    if fuel_left == 0 {
        return Err(Error::NotNoncrossing("subspace".into()));
    }
    let w0c = sys.c_sorting_word(c, sys.longest_element())?;
    let last = *w0c.letters().last().expect("positive rank");
    let s = psi(sys, last);
    let at = c.letters().iter().position(|&t| t == s).expect("c has every letter");
    let m = sys.coxeter_matrix();
    if c.letters()[at + 1..].iter().any(|&t| m[s][t] != 2) {
        return Err(Error::Internal(format!("letter {} cannot be moved to the end of {c}", s + 1)));
    }
    let component = component_of(sys, s);
    if component.len() < n
        && span_dim(n, &[basis, &component.iter().map(|&t| Vector::unit(n, t)).collect::<Vec<_>>()].concat())
            == basis.len()
    {
        // Nothing happens on the component of s: drop it.
        let others: Vec<usize> = (0..n).filter(|t| !component.contains(t)).collect();
        let sub = sys.standard_parabolic(&others)?;
        let restricted: Vec<Vector> =
            basis.iter().map(|v| Vector(others.iter().map(|&t| v[t].clone()).collect())).collect();
        let sub_c = parabolic_word(&others, c.letters().iter().copied().filter(|t| others.contains(t)));
        let inner = ncs_upper_roots(&sub, &sub_c, &independent(&restricted), fuel(&sub))?;
        return Ok(inner.iter().map(|v| embed(n, &others, v)).collect());
    }
    let rest: Vec<usize> = c.letters().iter().copied().filter(|&t| t != s).collect();
    let alpha_s = sys.root(sys.simple_root_id(s));
    if basis.iter().all(|v| sys.inner(v, alpha_s).is_zero()) {
        // The last position is upper with root -alpha_s; the others come
        // from the parabolic subgroup without s, applied to the projection
        // of the subspace along omega_s.
        let subset: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let sub = sys.standard_parabolic(&subset)?;
        let omega = sys.weight(s);
        let norm = sys.inner(&omega, &omega).inv().expect("nonzero weight");
        let projected: Vec<Vector> = basis
            .iter()
            .map(|v| {
                let p = v.add_scaled(&-(&sys.inner(v, &omega) * &norm), &omega);
                debug_assert!(p[s].is_zero());
                Vector(subset.iter().map(|&t| p[t].clone()).collect())
            })
            .collect();
        let sub_c = parabolic_word(&subset, rest.iter().copied());
        let inner = ncs_upper_roots(&sub, &sub_c, &projected, fuel(&sub))?;
        let mut out: Vec<Vector> = inner.iter().map(|v| embed(n, &subset, v)).collect();
        out.push(-alpha_s);
        Ok(out)
    } else {
        // Conjugate by s: c becomes s c s.
        let g = sys.simple_reflection(s);
        let moved: Vec<Vector> = basis.iter().map(|v| sys.apply(g, v)).collect();
        let rotated = Word([s].into_iter().chain(rest).collect());
        let inner = ncs_upper_roots(sys, &rotated, &moved, fuel_left - 1)?;
        Ok(inner.iter().map(|v| sys.apply(g, v)).collect())
    }
}
