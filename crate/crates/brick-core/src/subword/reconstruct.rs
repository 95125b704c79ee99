//! Facets from root configurations, and restriction to the reflection
//! subgroup spanned by a root configuration.

use std::collections::HashMap;

use super::complex::SubwordComplex;
use super::facet::Facet;
use crate::coxeter::{CoxeterSystem, RootId, Word, ROOT_CAP};
use crate::error::{Error, Result};
use crate::exactnum::{rank_of, Matrix, Scalar, Vector};

/// Which part of a root configuration is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootPart {
    All,
    Positive,
    Negative,
}

fn multiset(roots: &[RootId]) -> HashMap<RootId, usize> {
    let mut out = HashMap::new();
    for &r in roots {
        *out.entry(r).or_insert(0) += 1;
    }
    out
}

fn take(bag: &mut HashMap<RootId, usize>, r: RootId) -> bool {
    match bag.get_mut(&r) {
        Some(c) if *c > 0 => {
            *c -= 1;
            true
        }
        _ => false,
    }
}

/// Recovers the facet whose root configuration (or its positive or
/// negative part) is the multiset `roots`.
pub fn facet_from_roots(ctx: &SubwordComplex<'_>, roots: &[RootId], part: RootPart) -> Result<Facet> {
    let sys = ctx.sys();
    let q = ctx.word().letters();
    let m = q.len();
    let mut bag = multiset(roots);
    let mut facet = Vec::new();
    match part {
        RootPart::All | RootPart::Positive => {
            let mut perm = sys.identity().perm().to_vec();
            for (k, &s) in q.iter().enumerate() {
                let beta = perm[s] as RootId;
                let forced = part == RootPart::Positive && !sys.is_positive(beta);
                if forced || take(&mut bag, beta) {
                    facet.push(k);
                } else {
                    sys.right_mul_simple_in_place(&mut perm, s);
                }
            }
        }
        RootPart::Negative => {
            // tau is the product of the letters outside the facet to the
            // right of k; the candidate root is w0 tau^{-1}(alpha_{q_k}).
            let w0 = sys.longest_element();
            let mut tau = sys.identity();
            for k in (0..m).rev() {
                let s = q[k];
                let beta = w0.image(tau.inverse().image(sys.simple_root_id(s)));
                if sys.is_positive(beta) || take(&mut bag, beta) {
                    facet.push(k);
                } else {
                    tau = sys.left_mul_simple(s, &tau);
                }
            }
            facet.reverse();
        }
    }
    let facet = Facet(facet);
    if bag.values().any(|&c| c > 0) || !ctx.is_facet(&facet) {
        return Err(Error::NotRootConfiguration);
    }
    let got: Vec<RootId> = ctx
        .root_configuration(&facet)
        .into_iter()
        .filter(|&r| match part {
            RootPart::All => true,
            RootPart::Positive => sys.is_positive(r),
            RootPart::Negative => !sys.is_positive(r),
        })
        .collect();
    if multiset(&got) != multiset(roots) {
        return Err(Error::NotRootConfiguration);
    }
    Ok(facet)
}

/// A subword complex over the reflection subgroup whose roots are those of
/// `sys` in the span of a root configuration.
#[derive(Debug)]
pub struct ParabolicRestriction {
    pub system: CoxeterSystem,
    pub word: Word,
    /// Positions of the original word kept in `word`, in order.
    pub positions: Vec<usize>,
    /// Simple roots of the subgroup, as roots of the original system.
    pub simple_roots: Vec<RootId>,
    /// The image of the restricted facet.
    pub facet: Facet,
}

impl ParabolicRestriction {
    /// A vector in the root coordinates of the subgroup, written in those
    /// of the original system.
    pub fn embed(&self, sys: &CoxeterSystem, v: &Vector) -> Vector {
        self.simple_roots
            .iter()
            .enumerate()
            .fold(Vector::zeros(sys.rank()), |acc, (t, &b)| acc.add_scaled(&v[t], sys.root(b)))
    }

    pub fn embed_root(&self, sys: &CoxeterSystem, root: RootId) -> RootId {
        sys.root_id(&self.embed(sys, self.system.root(root))).expect("subgroup roots are roots")
    }

    /// Image of a facet of the original complex containing the positions
    /// of `facet` outside the kept ones, if it has that form.
    pub fn restrict_facet(&self, outer: &Facet, facet: &Facet) -> Option<Facet> {
        let outside = |f: &Facet| -> Vec<usize> {
            f.positions().iter().copied().filter(|p| self.positions.binary_search(p).is_err()).collect()
        };
        if outside(outer) != outside(facet) {
            return None;
        }
        Some(Facet(facet.positions().iter().filter_map(|p| self.positions.binary_search(p).ok()).collect()))
    }
}

/// Restricts the complex around `facet` to the reflection subgroup spanned
/// by its roots.
pub fn parabolic_restriction(ctx: &SubwordComplex<'_>, facet: &Facet) -> Result<ParabolicRestriction> {
    ctx.check_facet(facet)?;
    let sys = ctx.sys();
    let config = ctx.root_configuration(facet);
    let cols: Vec<Vector> = config.iter().map(|&b| sys.root(b).clone()).collect();
    let basis_rank = if cols.is_empty() { 0 } else { rank_of(&Matrix::from_columns(sys.rank(), &cols)) };
    if basis_rank != config.len() {
        return Err(Error::DependentConfiguration);
    }
    let in_span = |b: RootId| -> bool {
        let mut with = cols.clone();
        with.push(sys.root(b).clone());
        rank_of(&Matrix::from_columns(sys.rank(), &with)) == basis_rank
    };
    let sub_positive: Vec<RootId> = (0..sys.num_positive_roots()).filter(|&b| in_span(b)).collect();
    let simple_roots: Vec<RootId> = sub_positive
        .iter()
        .copied()
        .filter(|&b| {
            let s = sys.reflection(b);
            sub_positive.iter().all(|&g| g == b || sys.is_positive(s.image(g)))
        })
        .collect();
    if simple_roots.len() != basis_rank {
        return Err(Error::Internal("reflection subgroup has the wrong rank".into()));
    }

    let roots = ctx.root_function(facet);
    let mask = facet.mask(ctx.len());
    let mut sigma = sys.identity();
    let mut positions = Vec::new();
    let mut letters = Vec::new();
    let mut sub_facet = Vec::new();
    for (k, &r) in roots.iter().enumerate() {
        if !in_span(sys.positive_part(r)) {
            continue;
        }
        let pulled = sigma.inverse().image(r);
        let t = simple_roots
            .iter()
            .position(|&b| b == pulled)
            .ok_or_else(|| Error::Internal("restricted root is not simple".into()))?;
        if mask[k] {
            sub_facet.push(positions.len());
        } else {
            sigma = sigma.compose(sys.reflection(simple_roots[t]));
        }
        positions.push(k);
        letters.push(t);
    }
    let r = simple_roots.len();
    let mut coxeter = vec![vec![1u32; r]; r];
    let mut cartan = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let (x, y) = (sys.root(simple_roots[a]), sys.root(simple_roots[b]));
            let two = Scalar::from_int(2);
            cartan[(a, b)] = &(&two * &sys.inner(x, y)) * &sys.inner(x, x).inv().expect("roots are nonzero");
            if a != b {
                coxeter[a][b] = element_order(sys, simple_roots[a], simple_roots[b]);
            }
        }
    }
    let labels: Vec<String> = simple_roots.iter().map(|b| (b + 1).to_string()).collect();
    let system = CoxeterSystem::from_cartan(
        format!("{}<{}>", sys.name(), labels.join(",")),
        coxeter,
        cartan,
        sys.field(),
        None,
        ROOT_CAP,
    )?;
    Ok(ParabolicRestriction { system, word: Word(letters), positions, simple_roots, facet: Facet(sub_facet) })
}

fn element_order(sys: &CoxeterSystem, a: RootId, b: RootId) -> u32 {
    let g = sys.mul(sys.reflection(a), sys.reflection(b));
    let mut p = g.clone();
    let mut k = 1;
    while !p.is_identity() {
        p = sys.mul(&p, &g);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subword::brute_force_facets;
    use rand::{Rng, SeedableRng};

    fn qex() -> Word {
        Word::from_one_based(&[2, 3, 1, 3, 2, 1, 2, 3, 1])
    }

    #[test]
    fn toy_reconstruction() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        let target = Facet::from_one_based(&[2, 3, 9]);
        let roots = ctx.root_configuration(&target);
        assert_eq!(facet_from_roots(&ctx, &roots, RootPart::All).unwrap(), target);
        for facet in ctx.facets() {
            let r = ctx.root_configuration(facet);
            for part in [RootPart::All, RootPart::Positive, RootPart::Negative] {
                let sel: Vec<RootId> = r
                    .iter()
                    .copied()
                    .filter(|&b| match part {
                        RootPart::All => true,
                        RootPart::Positive => sys.is_positive(b),
                        RootPart::Negative => !sys.is_positive(b),
                    })
                    .collect();
                assert_eq!(&facet_from_roots(&ctx, &sel, part).unwrap(), facet, "{facet} {part:?}");
            }
        }
        let bogus = vec![sys.negate(0), sys.negate(1), sys.negate(2)];
        assert!(matches!(facet_from_roots(&ctx, &bogus, RootPart::All), Err(Error::NotRootConfiguration)));
    }

    #[test]
    fn simple_roots_give_prefix_in_cluster_words() {
        for (kind, rank, c) in [("A", 3, vec![1, 2, 3]), ("B", 3, vec![2, 1, 3]), ("H", 3, vec![3, 2, 1])] {
            let sys = CoxeterSystem::named(kind, rank).unwrap();
            let c = Word::from_one_based(&c);
            let w0c = sys.c_sorting_word(&c, sys.longest_element()).unwrap();
            let ctx = SubwordComplex::new(&sys, &c.concat(&w0c)).unwrap();
            let delta: Vec<RootId> = (0..rank).map(|s| sys.simple_root_id(s)).collect();
            let f = facet_from_roots(&ctx, &delta, RootPart::All).unwrap();
            assert_eq!(f, Facet((0..rank).collect()));
        }
    }

    #[test]
    fn restriction_of_non_realizing_word() {
        let sys = CoxeterSystem::named("A", 2).unwrap();
        let ctx = SubwordComplex::new(&sys, &Word::from_one_based(&[1, 2, 1, 2])).unwrap();
        let res = parabolic_restriction(&ctx, &Facet::from_one_based(&[1])).unwrap();
        assert_eq!(res.positions, vec![0, 3]);
        assert_eq!(res.word, Word::from_one_based(&[1, 1]));
        assert_eq!(res.system.rank(), 1);
        // [1,1] is not reduced in rank one
        assert!(!res.system.is_reduced(&res.word).unwrap());
        let sub = SubwordComplex::new(&res.system, &res.word).unwrap();
        assert_eq!(sub.num_facets(), 2);
    }

    #[test]
    fn restriction_of_realizing_word_is_identity() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        let ctx = SubwordComplex::new(&sys, &qex()).unwrap();
        for facet in ctx.facets() {
            let res = parabolic_restriction(&ctx, facet).unwrap();
            assert_eq!(res.word, qex());
            assert_eq!(&res.facet, facet);
            assert_eq!(res.simple_roots, vec![0, 1, 2]);
        }
    }

    fn check_restriction(ctx: &SubwordComplex<'_>, facet: &Facet) {
        let sys = ctx.sys();
        let res = parabolic_restriction(ctx, facet).unwrap();
        let sub = SubwordComplex::new(&res.system, &res.word).unwrap();
        assert!(!sub.was_completed());
        // roots agree through the embedding
        let outer = ctx.root_function(facet);
        let inner = sub.root_function(&res.facet);
        for (k2, &k) in res.positions.iter().enumerate() {
            assert_eq!(res.embed_root(sys, inner[k2]), outer[k]);
        }
        // facets of the original complex agreeing with `facet` off the kept
        // positions correspond to the facets of the restriction
        let mut image: Vec<Facet> =
            brute_force_facets(ctx).iter().filter_map(|f| res.restrict_facet(facet, f)).collect();
        image.sort();
        let mut sub_facets = brute_force_facets(&sub);
        sub_facets.sort();
        assert_eq!(image, sub_facets);
    }

    #[test]
    fn restriction_preserves_facets_on_random_words() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 20 {
            let q: Vec<usize> = (0..rng.gen_range(6..11)).map(|_| rng.gen_range(0..3)).collect();
            let ctx = SubwordComplex::new(&sys, &Word(q)).unwrap();
            if ctx.is_realizing() {
                continue;
            }
            let facet = ctx.facets()[rng.gen_range(0..ctx.num_facets())].clone();
            match parabolic_restriction(&ctx, &facet) {
                Ok(_) => {
                    check_restriction(&ctx, &facet);
                    checked += 1;
                }
                Err(Error::DependentConfiguration) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}
