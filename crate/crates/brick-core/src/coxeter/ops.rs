use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::element::{GroupElement, RootId, Word};
use super::system::CoxeterSystem;
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Scalar, Vector};

impl CoxeterSystem {
    /// Demazure product: fold the word, keeping a letter only when it
    /// increases the length.
    pub fn demazure_product(&self, q: &Word) -> Result<GroupElement> {
        self.check_word(q)?;
        let mut w = self.identity();
        for &s in q.letters() {
            if self.is_positive(w.image(s)) {
                w = self.right_mul_simple(&w, s);
            }
        }
        Ok(w)
    }

    /// Inversion set ordered along a reduced word: `alpha_{w1}, w1(alpha_{w2}), ...`.
    /// Without a word, the canonical reduced word is used.
    pub fn inversion_set(&self, w: &GroupElement, word: Option<&Word>) -> Vec<RootId> {
        let owned;
        let word = match word {
            Some(x) => x,
            None => {
                owned = self.reduced_word(w);
                &owned
            }
        };
        let mut u = self.identity();
        let mut out = Vec::with_capacity(word.len());
        for &s in word.letters() {
            out.push(u.image(s));
            u = self.right_mul_simple(&u, s);
        }
        debug_assert_eq!(&u, w, "word does not spell the element");
        out
    }

    /// `Phi+ ∩ w(Phi-)` as a sorted list of positive root ids.
    pub fn inversion_root_set(&self, w: &GroupElement) -> Vec<RootId> {
        let winv = w.inverse();
        (0..self.num_positive_roots()).filter(|&b| !self.is_positive(winv.image(b))).collect()
    }

    /// The element whose inversion set is `set`, if there is one. Peels a
    /// simple root off the set and conjugates the rest by it.
    pub fn element_with_inversions(&self, set: &[RootId]) -> Option<GroupElement> {
        let mut rest: HashSet<RootId> = set.iter().copied().collect();
        if rest.iter().any(|&b| !self.is_positive(b)) {
            return None;
        }
        let mut letters = Vec::new();
        while !rest.is_empty() {
            let s = (0..self.rank()).find(|&s| rest.contains(&self.simple_root_id(s)))?;
            rest.remove(&self.simple_root_id(s));
            let g = self.simple_reflection(s);
            let next: HashSet<RootId> = rest.iter().map(|&b| g.image(b)).collect();
            if next.iter().any(|&b| !self.is_positive(b)) {
                return None;
            }
            rest = next;
            letters.push(s);
        }
        let w = self.word_to_element(&Word(letters)).ok()?;
        let mut want: Vec<RootId> = set.to_vec();
        want.sort_unstable();
        want.dedup();
        (self.inversion_root_set(&w) == want).then_some(w)
    }

    /// Right weak order: `u <= w` iff `inv(u) ⊆ inv(w)`.
    pub fn weak_leq(&self, u: &GroupElement, w: &GroupElement) -> bool {
        let iw: HashSet<RootId> = self.inversion_root_set(w).into_iter().collect();
        self.inversion_root_set(u).iter().all(|b| iw.contains(b))
    }

    /// Checks that `c` lists every generator exactly once.
    pub fn check_coxeter_word(&self, c: &Word) -> Result<()> {
        let mut seen = vec![false; self.rank()];
        if c.len() != self.rank() {
            return Err(Error::NotCoxeterElement(c.to_string()));
        }
        for &s in c.letters() {
            if s >= self.rank() || seen[s] {
                return Err(Error::NotCoxeterElement(c.to_string()));
            }
            seen[s] = true;
        }
        Ok(())
    }

    /// Sorting word of `w` split into its passes through `c`.
    pub fn c_sorting_blocks(&self, c: &Word, w: &GroupElement) -> Result<Vec<Vec<usize>>> {
        self.check_coxeter_word(c)?;
        let mut u = w.clone();
        let mut blocks = Vec::new();
        while !u.is_identity() {
            let mut block = Vec::new();
            for &s in c.letters() {
                if self.is_left_descent(&u, s) {
                    block.push(s);
                    u = self.left_mul_simple(s, &u);
                }
            }
            if block.is_empty() {
                return Err(Error::Internal("sorting pass made no progress".into()));
            }
            blocks.push(block);
        }
        Ok(blocks)
    }

    /// The lexicographically first reduced subword of `c^∞` spelling `w`.
    pub fn c_sorting_word(&self, c: &Word, w: &GroupElement) -> Result<Word> {
        Ok(Word(self.c_sorting_blocks(c, w)?.into_iter().flatten().collect()))
    }

    /// Whether the supports of the sorting passes are nested.
    pub fn is_c_sortable(&self, c: &Word, w: &GroupElement) -> Result<bool> {
        let blocks = self.c_sorting_blocks(c, w)?;
        let supports: Vec<HashSet<usize>> = blocks.iter().map(|b| b.iter().copied().collect()).collect();
        Ok(supports.windows(2).all(|p| p[1].is_subset(&p[0])))
    }

    /// Cover reflections `t` with `tw = ws < w`, given by their positive
    /// roots. With a Coxeter element they are ordered along the inversion
    /// sequence of the c-sorting word; otherwise by root id.
    pub fn cover_reflections(&self, w: &GroupElement, c: Option<&Word>) -> Result<Vec<RootId>> {
        let mut covers: Vec<RootId> =
            (0..self.rank()).filter(|&s| self.is_right_descent(w, s)).map(|s| self.negate(w.image(s))).collect();
        match c {
            Some(c) => {
                let word = self.c_sorting_word(c, w)?;
                let order = self.inversion_set(w, Some(&word));
                covers.sort_by_key(|b| order.iter().position(|x| x == b).expect("cover root is an inversion"));
            }
            None => covers.sort_unstable(),
        }
        Ok(covers)
    }

    /// Product of reflections, left to right.
    pub fn reflection_product(&self, roots: &[RootId]) -> GroupElement {
        roots.iter().fold(self.identity(), |acc, &b| acc.compose(self.reflection(b)))
    }

    /// Reflection length by breadth-first search over products of
    /// reflections. Needs an enumerable group.
    pub fn reflection_length(&self, w: &GroupElement) -> Result<usize> {
        self.ensure_enumerable()?;
        let table = self.reflection_lengths.get_or_init(|| {
            let mut dist = HashMap::new();
            let e = self.identity();
            dist.insert(e.clone(), 0usize);
            let mut queue = VecDeque::from([e]);
            while let Some(u) = queue.pop_front() {
                let d = dist[&u];
                for b in 0..self.num_positive_roots() {
                    let v = u.compose(self.reflection(b));
                    if !dist.contains_key(&v) {
                        dist.insert(v.clone(), d + 1);
                        queue.push_back(v);
                    }
                }
            }
            dist
        });
        table.get(w).copied().ok_or_else(|| Error::Internal("element missing from reflection-length table".into()))
    }

    /// Codimension of the fixed space, which equals the reflection length in
    /// a finite reflection group.
    pub fn fixed_space_codim(&self, w: &GroupElement) -> usize {
        self.rank() - self.fixed_space(w).len()
    }

    /// Basis of `ker(w - id)` in root coordinates.
    pub fn fixed_space(&self, w: &GroupElement) -> Vec<Vector> {
        self.matrix(w).sub(&Matrix::identity(self.rank())).kernel()
    }

    /// `l_R(w) + l_R(w^{-1} c) = n`.
    pub fn is_noncrossing_partition(&self, c: &Word, w: &GroupElement) -> Result<bool> {
        self.check_coxeter_word(c)?;
        let ce = self.word_to_element(c)?;
        let rest = w.inverse().compose(&ce);
        Ok(self.reflection_length(w)? + self.reflection_length(&rest)? == self.rank())
    }

    /// Whether `q` is strictly inside the fundamental chamber.
    pub fn is_interior(&self, q: &Vector) -> bool {
        q.dim() == self.rank() && self.to_weight_coords(q).iter().all(Scalar::is_positive)
    }

    /// V- and H-description of the permutahedron of a point interior to the
    /// fundamental chamber.
    pub fn permutahedron(&self, q: &Vector) -> Result<Permutahedron> {
        if !self.is_interior(q) {
            return Err(Error::NotInterior);
        }
        let elements = self.elements()?;
        let vertices: Vec<(GroupElement, Vector)> = elements.iter().map(|w| (w.clone(), self.apply(w, q))).collect();
        let mut seen = HashSet::new();
        let mut inequalities = Vec::new();
        for w in elements {
            for s in 0..self.rank() {
                let normal = self.apply_weight(w, s);
                if seen.insert(normal.clone()) {
                    let rhs = self.inner(&self.weight(s), q);
                    inequalities.push(Inequality { normal, rhs, generator: s, element: w.clone() });
                }
            }
        }
        Ok(Permutahedron { vertices, inequalities })
    }
}

/// A facet inequality `<normal, x> <= rhs` of a permutahedron, attached to
/// the pair `(element, generator)` that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub normal: Vector,
    pub rhs: Scalar,
    pub generator: usize,
    pub element: GroupElement,
}

#[derive(Clone, Debug)]
pub struct Permutahedron {
    pub vertices: Vec<(GroupElement, Vector)>,
    pub inequalities: Vec<Inequality>,
}

#[derive(Serialize)]
pub struct InequalityRecord {
    pub normal: Vector,
    pub rhs: Scalar,
}

/// Positions of `a` matched with positions of `b` when the two words differ
/// by commutations of adjacent commuting letters: the `i`-th occurrence of a
/// letter goes to its `i`-th occurrence. `None` when the words are not
/// commutation equivalent.
pub fn commutation_matching(sys: &CoxeterSystem, a: &Word, b: &Word) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let n = sys.rank();
    let m = sys.coxeter_matrix();
    // Same restriction to every pair of non-commuting letters.
    for s in 0..n {
        for t in s..n {
            if s != t && m[s][t] == 2 {
                continue;
            }
            let ra: Vec<usize> = a.letters().iter().copied().filter(|&x| x == s || x == t).collect();
            let rb: Vec<usize> = b.letters().iter().copied().filter(|&x| x == s || x == t).collect();
            if ra != rb {
                return None;
            }
        }
    }
    let mut occ: HashMap<usize, VecDeque<usize>> = HashMap::new();
    for (i, &l) in b.letters().iter().enumerate() {
        occ.entry(l).or_default().push_back(i);
    }
    Some(a.letters().iter().map(|l| occ.get_mut(l).and_then(VecDeque::pop_front).expect("same content")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::classical::{element_from_one_line, one_line};

    fn a3() -> CoxeterSystem {
        CoxeterSystem::named("A", 3).unwrap()
    }

    #[test]
    fn demazure_examples() {
        let sys = a3();
        assert!(sys.demazure_product(&Word::empty()).unwrap().is_identity());
        let d = sys.demazure_product(&Word::from_one_based(&[1, 1])).unwrap();
        assert_eq!(&d, sys.simple_reflection(0));
        let qex = Word::from_one_based(&[2, 3, 1, 3, 2, 1, 2, 3, 1]);
        assert_eq!(&sys.demazure_product(&qex).unwrap(), sys.longest_element());
    }

    #[test]
    fn demazure_of_shuffled_w0_word_with_junk() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (k, r) in [("A", 3), ("B", 3), ("H", 3)] {
            let sys = CoxeterSystem::named(k, r).unwrap();
            for _ in 0..20 {
                let mut letters = sys.w0_word().letters().to_vec();
                for _ in 0..rng.gen_range(0..5) {
                    let pos = rng.gen_range(0..=letters.len());
                    letters.insert(pos, rng.gen_range(0..r));
                }
                assert_eq!(&sys.demazure_product(&Word(letters)).unwrap(), sys.longest_element());
            }
        }
    }

    #[test]
    fn paper_lengths_and_inversions() {
        let sys = a3();
        let w = element_from_one_line(&sys, &[2, 4, 3, 1]).unwrap();
        assert_eq!(sys.length(&w), 4);
        assert_eq!(sys.length(sys.longest_element()), 6);
        assert!(sys.inversion_set(&sys.identity(), None).is_empty());
    }

    #[test]
    fn weak_order_is_inversion_containment() {
        let sys = a3();
        let els = sys.elements().unwrap();
        // oracle: reachability through covers w -> ws with length + 1
        let index: HashMap<&GroupElement, usize> = els.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let k = els.len();
        let mut reach = vec![vec![false; k]; k];
        for i in (0..k).rev() {
            reach[i][i] = true;
            for s in 0..3 {
                let ws = sys.right_mul_simple(&els[i], s);
                if sys.length(&ws) > sys.length(&els[i]) {
                    let j = index[&ws];
                    for x in 0..k {
                        if reach[j][x] {
                            reach[i][x] = true;
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                assert_eq!(reach[i][j], sys.weak_leq(&els[i], &els[j]));
            }
        }
    }

    #[test]
    fn sorting_words() {
        let sys = a3();
        let c = Word::from_one_based(&[1, 2, 3]);
        let w0 = sys.longest_element().clone();
        assert_eq!(sys.c_sorting_word(&c, &w0).unwrap(), Word::from_one_based(&[1, 2, 3, 1, 2, 1]));
        assert!(sys.c_sorting_word(&c, &sys.identity()).unwrap().is_empty());
        let w = element_from_one_line(&sys, &[2, 4, 3, 1]).unwrap();
        assert_eq!(sys.c_sorting_blocks(&c, &w).unwrap(), vec![vec![0, 1, 2], vec![1]]);
        assert!(sys.is_c_sortable(&c, &w).unwrap());
        let u = element_from_one_line(&sys, &[3, 4, 1, 2]).unwrap();
        assert_eq!(sys.c_sorting_blocks(&c, &u).unwrap(), vec![vec![1, 2], vec![0, 1]]);
        assert!(!sys.is_c_sortable(&c, &u).unwrap());
        assert!(sys.is_c_sortable(&c, &sys.identity()).unwrap());
        assert!(sys.c_sorting_word(&Word::from_one_based(&[1, 2]), &w).is_err());
    }

    #[test]
    fn sorting_words_are_reduced_subwords_and_sortability_is_word_independent() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        // 1,3,2 and 3,1,2 are the same Coxeter element.
        let c1 = Word::from_one_based(&[1, 3, 2]);
        let c2 = Word::from_one_based(&[3, 1, 2]);
        for w in sys.elements().unwrap() {
            let word = sys.c_sorting_word(&c1, w).unwrap();
            assert_eq!(word.len(), sys.length(w));
            assert_eq!(&sys.word_to_element(&word).unwrap(), w);
            assert_eq!(sys.is_c_sortable(&c1, w).unwrap(), sys.is_c_sortable(&c2, w).unwrap());
        }
    }

    #[test]
    fn cover_reflection_examples() {
        let sys = a3();
        let c = Word::from_one_based(&[1, 2, 3]);
        assert!(sys.cover_reflections(&sys.identity(), Some(&c)).unwrap().is_empty());
        let w = element_from_one_line(&sys, &[2, 4, 3, 1]).unwrap();
        let covers = sys.cover_reflections(&w, Some(&c)).unwrap();
        let prod = sys.reflection_product(&covers);
        assert_eq!(one_line(&sys, &prod).unwrap(), vec![3, 2, 4, 1]);
        // w0: the product of its cover reflections is the Coxeter element
        let w0 = sys.longest_element().clone();
        let covers = sys.cover_reflections(&w0, Some(&c)).unwrap();
        assert_eq!(sys.reflection_product(&covers), sys.word_to_element(&c).unwrap());
    }

    #[test]
    fn reflection_lengths() {
        let sys = a3();
        assert_eq!(sys.reflection_length(&sys.identity()).unwrap(), 0);
        let c = Word::from_one_based(&[1, 2, 3]);
        let ce = sys.word_to_element(&c).unwrap();
        assert_eq!(sys.reflection_length(&ce).unwrap(), 3);
        assert!(sys.is_noncrossing_partition(&c, &sys.identity()).unwrap());
        let w = element_from_one_line(&sys, &[3, 2, 4, 1]).unwrap();
        assert!(sys.is_noncrossing_partition(&c, &w).unwrap());
        assert_eq!(sys.reflection_length(&w).unwrap(), 2);
        // cycle-type oracle: n + 1 minus the number of cycles
        for w in sys.elements().unwrap() {
            let p = one_line(&sys, w).unwrap();
            let mut seen = [false; 4];
            let mut cycles = 0;
            for i in 0..4 {
                if !seen[i] {
                    cycles += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = p[j] - 1;
                    }
                }
            }
            assert_eq!(sys.reflection_length(w).unwrap(), 4 - cycles);
            assert_eq!(sys.fixed_space_codim(w), 4 - cycles);
        }
    }

    #[test]
    fn permutahedron_of_a3() {
        let sys = a3();
        let q = sys.rho();
        let p = sys.permutahedron(&q).unwrap();
        assert_eq!(p.vertices.len(), 24);
        assert_eq!(p.inequalities.len(), 14);
        for (w, v) in &p.vertices {
            for s in 0..3 {
                assert_eq!(sys.inner(&sys.apply_weight(w, s), v), sys.inner(&sys.weight(s), &q));
            }
        }
        assert!(matches!(sys.permutahedron(&sys.weight(0)), Err(Error::NotInterior)));
    }

    #[test]
    fn commutation_classes() {
        let sys = a3();
        let a = Word::from_one_based(&[1, 3, 2]);
        let b = Word::from_one_based(&[3, 1, 2]);
        assert_eq!(commutation_matching(&sys, &a, &b), Some(vec![1, 0, 2]));
        assert!(commutation_matching(&sys, &Word::from_one_based(&[1, 2]), &Word::from_one_based(&[2, 1])).is_none());
    }
}
