use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use super::facet::Facet;
use super::greedy::{positive_greedy, Sign};
use crate::coxeter::{CoxeterSystem, GroupElement, RootId, Word};
use crate::error::{Error, Result};
use crate::exactnum::{rank_of, Matrix, Scalar, Vector};

/// One flip out of a facet: position `i` leaves, position `j` enters, and
/// the result is facet number `target` of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipArc {
    pub i: usize,
    pub j: usize,
    pub target: usize,
}

struct FlipGraph {
    facets: Vec<Facet>,
    index: HashMap<Facet, usize>,
    arcs: Vec<Vec<FlipArc>>,
}

/// The subword complex of a word whose Demazure product is the longest
/// element.
///
/// Words with a smaller Demazure product are completed on construction by
/// the canonical reduced word of the missing factor; everything below
/// (positions, greedy indices, brick vectors) refers to the completed word.
pub struct SubwordComplex<'a> {
    sys: &'a CoxeterSystem,
    word: Word,
    input_len: usize,
    graph: OnceLock<FlipGraph>,
}

impl<'a> SubwordComplex<'a> {
    pub fn new(sys: &'a CoxeterSystem, q: &Word) -> Result<Self> {
        let delta = sys.demazure_product(q)?;
        let mut word = q.clone();
        if &delta != sys.longest_element() {
            let missing = delta.inverse().compose(sys.longest_element());
            word = word.concat(&sys.reduced_word(&missing));
        }
        Ok(SubwordComplex { sys, word, input_len: q.len(), graph: OnceLock::new() })
    }

    pub fn sys(&self) -> &'a CoxeterSystem {
        self.sys
    }

    /// The completed word.
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letter(&self, k: usize) -> usize {
        self.word.0[k]
    }

    /// Letters appended to make the Demazure product the longest element.
    pub fn completion(&self) -> Word {
        Word(self.word.0[self.input_len..].to_vec())
    }

    pub fn was_completed(&self) -> bool {
        self.word.len() > self.input_len
    }

    /// Number of positions in every facet.
    pub fn facet_size(&self) -> usize {
        self.len() - self.sys.num_positive_roots()
    }

    /// Whether the complement of `facet` is a reduced word for `w0`.
    pub fn is_facet(&self, facet: &Facet) -> bool {
        let m = self.len();
        if facet.len() != self.facet_size() || facet.positions().iter().any(|&p| p >= m) {
            return false;
        }
        let mask = facet.mask(m);
        let mut perm = self.sys.identity().perm().to_vec();
        let mut len = 0;
        for (k, &s) in self.word.letters().iter().enumerate() {
            if !mask[k] {
                if !self.sys.is_positive(perm[s] as usize) {
                    return false;
                }
                self.sys.right_mul_simple_in_place(&mut perm, s);
                len += 1;
            }
        }
        len == self.sys.num_positive_roots() && perm == self.sys.longest_element().perm()
    }

    pub fn check_facet(&self, facet: &Facet) -> Result<()> {
        if self.is_facet(facet) {
            Ok(())
        } else {
            Err(Error::NotAFacet(facet.to_string()))
        }
    }

    /// `sigma_I^{[1,k]}` for `k = 0..=m`: products of the letters outside
    /// the facet among the first `k` positions.
    pub fn prefix_products(&self, facet: &Facet) -> Vec<GroupElement> {
        let mask = facet.mask(self.len());
        let mut perm = self.sys.identity().perm().to_vec();
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(GroupElement::from_perm(perm.clone()));
        for (k, &s) in self.word.letters().iter().enumerate() {
            if !mask[k] {
                self.sys.right_mul_simple_in_place(&mut perm, s);
            }
            out.push(GroupElement::from_perm(perm.clone()));
        }
        out
    }

    /// The root function `k -> sigma_I^{[1,k-1]}(alpha_{q_k})` on all positions.
    pub fn root_function(&self, facet: &Facet) -> Vec<RootId> {
        let mask = facet.mask(self.len());
        let mut perm = self.sys.identity().perm().to_vec();
        let mut out = Vec::with_capacity(self.len());
        for (k, &s) in self.word.letters().iter().enumerate() {
            out.push(perm[s] as RootId);
            if !mask[k] {
                self.sys.right_mul_simple_in_place(&mut perm, s);
            }
        }
        out
    }

    pub fn root(&self, facet: &Facet, k: usize) -> RootId {
        self.root_function(facet)[k]
    }

    /// Roots of the facet's positions, in the order of the facet.
    pub fn root_configuration(&self, facet: &Facet) -> Vec<RootId> {
        let r = self.root_function(facet);
        facet.positions().iter().map(|&i| r[i]).collect()
    }

    /// The weight function `k -> sigma_I^{[1,k-1]}(omega_{q_k})`.
    pub fn weight_function(&self, facet: &Facet) -> Vec<Vector> {
        let weights = self.sys.weights();
        let prefixes = self.prefix_products(facet);
        self.word.letters().iter().enumerate().map(|(k, &s)| self.sys.apply(&prefixes[k], &weights[s])).collect()
    }

    pub fn weight(&self, facet: &Facet, k: usize) -> Vector {
        let prefixes = self.prefix_products(facet);
        self.sys.apply(&prefixes[k], &self.sys.weight(self.letter(k)))
    }

    /// Flips position `i` out of `facet`; returns the new facet and the
    /// entering position.
    pub fn flip(&self, facet: &Facet, i: usize) -> Result<(Facet, usize)> {
        let roots = self.root_function(facet);
        self.flip_with_roots(facet, &roots, i)
    }

    /// Like [`Self::flip`] with the root function of `facet` precomputed.
    pub fn flip_with_roots(&self, facet: &Facet, roots: &[RootId], i: usize) -> Result<(Facet, usize)> {
        if !facet.contains(i) {
            return Err(Error::PositionNotInFacet(i + 1));
        }
        let target = self.sys.positive_part(roots[i]);
        let mask = facet.mask(self.len());
        let j = (0..self.len())
            .find(|&k| !mask[k] && roots[k] == target)
            .ok_or_else(|| Error::NotAFacet(facet.to_string()))?;
        Ok((facet.exchange(i, j), j))
    }

    /// Root function of the flipped facet, obtained from that of `facet` by
    /// reflecting the window between the exchanged positions.
    pub fn flip_roots(&self, roots: &[RootId], i: usize, j: usize) -> Vec<RootId> {
        let beta = roots[i];
        let (lo, hi) = (i.min(j), i.max(j));
        roots
            .iter()
            .enumerate()
            .map(|(k, &r)| if lo < k && k <= hi { self.sys.reflect_root(beta, r) } else { r })
            .collect()
    }

    /// Weight function of the flipped facet by the same window rule.
    pub fn flip_weights(&self, roots: &[RootId], weights: &[Vector], i: usize, j: usize) -> Vec<Vector> {
        let reflection = self.sys.reflection(roots[i]);
        let (lo, hi) = (i.min(j), i.max(j));
        weights
            .iter()
            .enumerate()
            .map(|(k, w)| if lo < k && k <= hi { self.sys.apply(reflection, w) } else { w.clone() })
            .collect()
    }

    fn graph(&self) -> &FlipGraph {
        // (flipped position, new position, target facet)
        type RawArc = (usize, usize, Facet);
        self.graph.get_or_init(|| {
            let start = positive_greedy(self.sys, self.word.letters(), self.sys.longest_element())
                .expect("the longest element is a subword of the completed word");
            let mut seen: HashSet<Facet> = HashSet::from([start.clone()]);
            let mut queue = VecDeque::from([start]);
            let mut raw: Vec<(Facet, Vec<RawArc>)> = Vec::new();
            while let Some(facet) = queue.pop_front() {
                let roots = self.root_function(&facet);
                let mut arcs = Vec::with_capacity(facet.len());
                for &i in facet.positions() {
                    let (next, j) = self.flip_with_roots(&facet, &roots, i).expect("facets flip");
                    if seen.insert(next.clone()) {
                        queue.push_back(next.clone());
                    }
                    arcs.push((i, j, next));
                }
                raw.push((facet, arcs));
            }
            raw.sort_by(|a, b| a.0.cmp(&b.0));
            let facets: Vec<Facet> = raw.iter().map(|(f, _)| f.clone()).collect();
            let index: HashMap<Facet, usize> = facets.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect();
            let arcs = raw
                .into_iter()
                .map(|(_, arcs)| arcs.into_iter().map(|(i, j, f)| FlipArc { i, j, target: index[&f] }).collect())
                .collect();
            FlipGraph { facets, index, arcs }
        })
    }

    /// All facets in lexicographic order, found by breadth-first search over
    /// flips from the positive greedy facet.
    pub fn facets(&self) -> &[Facet] {
        &self.graph().facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets().len()
    }

    pub fn facet_index(&self, facet: &Facet) -> Option<usize> {
        self.graph().index.get(facet).copied()
    }

    pub fn index_of(&self, facet: &Facet) -> Result<usize> {
        self.facet_index(facet).ok_or_else(|| Error::NotAFacet(facet.to_string()))
    }

    /// Flips out of each facet, indexed like [`Self::facets`].
    pub fn flip_graph(&self) -> &[Vec<FlipArc>] {
        &self.graph().arcs
    }

    /// Arcs `(I, J, i, j)` of flips with `i < j`, as facet indices.
    pub fn increasing_flips(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, arcs) in self.flip_graph().iter().enumerate() {
            for arc in arcs {
                if arc.i < arc.j {
                    out.push((a, arc.target, arc.i, arc.j));
                }
            }
        }
        out
    }

    /// Rank of the root configuration of one facet. By the basis
    /// dichotomy it does not depend on the facet.
    pub fn configuration_rank(&self, facet: &Facet) -> usize {
        let cols: Vec<Vector> = self.root_configuration(facet).iter().map(|&b| self.sys.root(b).clone()).collect();
        if cols.is_empty() {
            return 0;
        }
        rank_of(&Matrix::from_columns(self.sys.rank(), &cols))
    }

    /// Whether root configurations are bases of the ambient space.
    pub fn is_realizing(&self) -> bool {
        self.ensure_realizing().is_ok()
    }

    /// `n` minus the rank of a root configuration.
    pub fn rank_defect(&self) -> usize {
        let facet = &self.facets()[0];
        self.sys.rank() - self.configuration_rank(facet)
    }

    pub fn ensure_realizing(&self) -> Result<()> {
        let facet = &self.facets()[0];
        let rank = self.configuration_rank(facet);
        if facet.len() != self.sys.rank() || rank != self.sys.rank() {
            return Err(Error::NotRealizing { rank, size: facet.len(), expected: self.sys.rank() });
        }
        Ok(())
    }

    /// Facets whose root configuration lies in the closed halfspace
    /// `f >= 0`, for a covector `f` in the dual of root coordinates.
    pub fn halfspace_facets(&self, f: &Vector) -> Vec<Facet> {
        self.facets()
            .iter()
            .filter(|facet| self.root_configuration(facet).iter().all(|&b| !f.dot(self.sys.root(b)).is_negative()))
            .cloned()
            .collect()
    }

    /// Value of a covector on a root.
    pub fn evaluate(&self, f: &Vector, root: RootId) -> Scalar {
        f.dot(self.sys.root(root))
    }

    /// The greedy facet of the given sign: source (`+`) or sink (`-`) of
    /// the increasing flip graph.
    pub fn greedy_facet(&self, sign: Sign) -> Facet {
        super::greedy::greedy_facet(self.sys, self.word.letters(), self.sys.longest_element(), sign)
            .expect("the longest element is a subword of the completed word")
    }

    /// Graphviz rendering of the increasing flip graph.
    pub fn flip_graph_dot(&self) -> String {
        let mut out = String::from("digraph flips {\n");
        for facet in self.facets() {
            out.push_str(&format!("  \"{}\";\n", facet.label()));
        }
        for (a, b, i, j) in self.increasing_flips() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}→{}\"];\n",
                self.facets()[a].label(),
                self.facets()[b].label(),
                i + 1,
                j + 1
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// All facets by testing every subset of the right size. Exponential; kept
/// as an oracle for small words.
pub fn brute_force_facets(ctx: &SubwordComplex<'_>) -> Vec<Facet> {
    let m = ctx.len();
    let k = ctx.facet_size();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(ctx: &SubwordComplex<'_>, start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Facet>) {
        if cur.len() == k {
            let f = Facet(cur.clone());
            if ctx.is_facet(&f) {
                out.push(f);
            }
            return;
        }
        for p in start..m {
            if m - p < k - cur.len() {
                break;
            }
            cur.push(p);
            rec(ctx, p + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(ctx, 0, m, k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::classical::{classical_root, classical_weight};

    fn a3() -> CoxeterSystem {
        CoxeterSystem::named("A", 3).unwrap()
    }

    fn qex() -> Word {
        Word::from_one_based(&[2, 3, 1, 3, 2, 1, 2, 3, 1])
    }

    fn classical(sys: &CoxeterSystem, b: RootId) -> Vec<i64> {
        classical_root(sys, sys.root(b)).unwrap().iter().map(|x| x.to_f64() as i64).collect()
    }

    #[test]
    fn toy_word_facets() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        assert!(!ctx.was_completed());
        assert_eq!(ctx.facet_size(), 3);
        let expect: Vec<Facet> = [
            [2, 3, 5],
            [2, 3, 9],
            [2, 5, 6],
            [2, 6, 7],
            [2, 7, 9],
            [3, 4, 5],
            [3, 4, 9],
            [4, 5, 6],
            [4, 6, 7],
            [4, 7, 9],
        ]
        .iter()
        .map(|f| Facet::from_one_based(f))
        .collect();
        assert_eq!(ctx.facets(), &expect[..]);
        assert_eq!(brute_force_facets(&ctx), expect);
    }

    #[test]
    fn toy_word_roots_and_weights() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let f = Facet::from_one_based(&[2, 3, 9]);
        let r = ctx.root_function(&f);
        assert_eq!(classical(&sys, r[1]), vec![0, -1, 0, 1]);
        assert_eq!(classical(&sys, r[6]), vec![-1, 0, 1, 0]);
        let conf: Vec<Vec<i64>> = ctx.root_configuration(&f).iter().map(|&b| classical(&sys, b)).collect();
        assert_eq!(conf, vec![vec![0, -1, 0, 1], vec![-1, 0, 1, 0], vec![0, 0, 1, -1]]);
        let w = ctx.weight_function(&f);
        let as_ints = |v: &Vector, s: usize| -> Vec<i64> {
            classical_weight(&sys, v, s).unwrap().iter().map(|x| x.to_f64() as i64).collect()
        };
        assert_eq!(as_ints(&w[1], ctx.letter(1)), vec![0, 0, 0, 1]);
        assert_eq!(as_ints(&w[6], ctx.letter(6)), vec![0, 1, 1, 0]);
        assert_eq!(w[0], sys.weight(ctx.letter(0)));
    }

    #[test]
    fn completion_and_trivial_words() {
        let sys = CoxeterSystem::named("A", 2).unwrap();
        let ctx = SubwordComplex::new(&sys, &Word::from_one_based(&[1])).unwrap();
        assert!(ctx.was_completed());
        assert_eq!(sys.demazure_product(ctx.word()).unwrap(), *sys.longest_element());
        let a = a3();
        let ctx = SubwordComplex::new(&a, a.w0_word()).unwrap();
        assert_eq!(ctx.facet_size(), 0);
        assert_eq!(ctx.facets(), &[Facet::default()]);
        assert!(SubwordComplex::new(&a, &Word::from_one_based(&[4])).is_err());
    }

    #[test]
    fn flips_are_involutions_with_window_updates() {
        let sys = a3();
        for q in [qex(), Word::from_one_based(&[1, 2, 3, 1, 2, 3, 1, 2, 1])] {
            let ctx = SubwordComplex::new(&sys, &q).unwrap();
            for facet in ctx.facets() {
                let roots = ctx.root_function(facet);
                let weights = ctx.weight_function(facet);
                // complement roots are exactly the positive roots
                let mut comp: Vec<RootId> = (0..ctx.len()).filter(|k| !facet.contains(*k)).map(|k| roots[k]).collect();
                comp.sort_unstable();
                assert_eq!(comp, (0..sys.num_positive_roots()).collect::<Vec<_>>());
                for &i in facet.positions() {
                    let (next, j) = ctx.flip(facet, i).unwrap();
                    assert!(ctx.is_facet(&next));
                    assert_eq!(ctx.flip(&next, j).unwrap(), (facet.clone(), i));
                    assert_eq!(sys.is_positive(roots[i]), i < j);
                    assert_eq!(ctx.flip_roots(&roots, i, j), ctx.root_function(&next));
                    assert_eq!(ctx.flip_weights(&roots, &weights, i, j), ctx.weight_function(&next));
                }
            }
        }
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let (f, j) = ctx.flip(&Facet::from_one_based(&[2, 3, 5]), 4).unwrap();
        assert_eq!((f, j), (Facet::from_one_based(&[2, 3, 9]), 8));
        assert!(matches!(ctx.flip(&Facet::from_one_based(&[2, 3, 5]), 0), Err(Error::PositionNotInFacet(1))));
    }

    #[test]
    fn realizing_words() {
        let sys = a3();
        assert!(SubwordComplex::new(&sys, &qex()).unwrap().is_realizing());
        let a2 = CoxeterSystem::named("A", 2).unwrap();
        let ctx = SubwordComplex::new(&a2, &Word::from_one_based(&[1, 2, 1, 2])).unwrap();
        assert!(!ctx.is_realizing());
        assert_eq!(ctx.rank_defect(), 1);
        assert!(matches!(ctx.ensure_realizing(), Err(Error::NotRealizing { rank: 1, size: 1, expected: 2 })));
    }

    #[test]
    fn halfspaces() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let f = sys.fundamental_covector();
        assert_eq!(ctx.halfspace_facets(&f), vec![Facet::from_one_based(&[2, 3, 5])]);
        assert_eq!(ctx.halfspace_facets(&-&f), vec![Facet::from_one_based(&[4, 7, 9])]);
        assert_eq!(ctx.halfspace_facets(&Vector::zeros(3)).len(), 10);
        // non-generic functionals cut out faces: all facets containing a common set
        for v in [[1i64, 0, 0], [0, 1, -1], [1, -1, 0], [0, 0, 1], [2, -1, 1]] {
            let f = Vector::from_ints(&v);
            let faces = ctx.halfspace_facets(&f);
            assert!(!faces.is_empty());
            let common: Vec<usize> =
                faces[0].positions().iter().copied().filter(|p| faces.iter().all(|g| g.contains(*p))).collect();
            let containing: Vec<Facet> =
                ctx.facets().iter().filter(|g| common.iter().all(|p| g.contains(*p))).cloned().collect();
            assert_eq!(faces, containing);
        }
    }

    #[test]
    fn root_configuration_characterizes_facets() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let mut seen = HashSet::new();
        for facet in ctx.facets() {
            let mut conf = ctx.root_configuration(facet);
            conf.sort_unstable();
            assert!(seen.insert(conf));
        }
    }

    #[test]
    fn flip_graph_is_regular_and_dot_renders() {
        let sys = a3();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        assert!(ctx.flip_graph().iter().all(|arcs| arcs.len() == 3));
        assert_eq!(ctx.increasing_flips().len(), 15);
        let dot = ctx.flip_graph_dot();
        assert!(dot.contains("\"2,3,5\" -> \"2,3,9\" [label=\"5→9\"]"));
    }
}
