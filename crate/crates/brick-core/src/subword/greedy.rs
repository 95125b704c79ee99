//! Greedy facets, greedy indices and the greedy flip trees.
//!
//! These work for a word and an arbitrary element `rho`: the facets of
//! `K(Q, rho)` are the position sets whose complement is a reduced word for
//! `rho`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::complex::SubwordComplex;
use super::facet::Facet;
use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "pos" | "positive" => Ok(Sign::Positive),
            "-" | "neg" | "negative" => Ok(Sign::Negative),
            other => Err(Error::InvalidInput(format!("sign must be + or -, got `{other}`"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

/// Negative greedy facet of `K(q, rho)`: sweep left to right and keep a
/// letter in the reduced word whenever it is a left descent of what
/// remains of `rho`.
pub fn negative_greedy(sys: &CoxeterSystem, q: &[usize], rho: &GroupElement) -> Result<Facet> {
    let mut rest = rho.clone();
    let mut facet = Vec::new();
    for (k, &s) in q.iter().enumerate() {
        if sys.is_left_descent(&rest, s) {
            rest = sys.left_mul_simple(s, &rest);
        } else {
            facet.push(k);
        }
    }
    if !rest.is_identity() {
        return Err(Error::NotRepresentable);
    }
    Ok(Facet(facet))
}

/// Positive greedy facet, the mirror image of the negative greedy facet of
/// the reversed word and `rho^{-1}`.
pub fn positive_greedy(sys: &CoxeterSystem, q: &[usize], rho: &GroupElement) -> Result<Facet> {
    let rev: Vec<usize> = q.iter().rev().copied().collect();
    let g = negative_greedy(sys, &rev, &rho.inverse())?;
    let m = q.len();
    Ok(Facet::new(g.positions().iter().map(|&p| m - 1 - p).collect()))
}

pub fn greedy_facet(sys: &CoxeterSystem, q: &[usize], rho: &GroupElement, sign: Sign) -> Result<Facet> {
    match sign {
        Sign::Positive => positive_greedy(sys, q, rho),
        Sign::Negative => negative_greedy(sys, q, rho),
    }
}

/// Whether `rho` has a reduced word among the subwords of `q`.
pub fn is_representable(sys: &CoxeterSystem, q: &[usize], rho: &GroupElement) -> bool {
    negative_greedy(sys, q, rho).is_ok()
}

/// Greedy index of a facet of `K(q, rho)`, as a 1-based position.
///
/// Negative: the largest `x` such that `I ∩ [x]` is the negative greedy
/// facet of the prefix `q_1..q_x` for the product of its letters outside
/// `I`. Positive: the smallest `y` in `[1, m+1]` such that the part of `I`
/// from `y` on is the positive greedy facet of the suffix `q_y..q_m` for
/// the product of its letters outside `I`.
pub fn greedy_index(sys: &CoxeterSystem, q: &[usize], facet: &Facet, sign: Sign) -> usize {
    let m = q.len();
    let mask = facet.mask(m);
    match sign {
        Sign::Negative => {
            let mut prefixes = Vec::with_capacity(m + 1);
            let mut sigma = sys.identity();
            prefixes.push(sigma.clone());
            for (k, &s) in q.iter().enumerate() {
                if !mask[k] {
                    sigma = sys.right_mul_simple(&sigma, s);
                }
                prefixes.push(sigma.clone());
            }
            (1..=m)
                .rev()
                .find(|&x| {
                    let part = Facet(facet.positions().iter().copied().filter(|&p| p < x).collect());
                    negative_greedy(sys, &q[..x], &prefixes[x]).is_ok_and(|g| g == part)
                })
                .unwrap_or(0)
        }
        Sign::Positive => {
            let mut suffixes = vec![sys.identity(); m + 1];
            for k in (0..m).rev() {
                suffixes[k] =
                    if mask[k] { suffixes[k + 1].clone() } else { sys.left_mul_simple(q[k], &suffixes[k + 1]) };
            }
            let y0 = (0..=m)
                .find(|&y| {
                    let part = Facet(facet.positions().iter().filter(|&&p| p >= y).map(|&p| p - y).collect());
                    positive_greedy(sys, &q[y..], &suffixes[y]).is_ok_and(|g| g == part)
                })
                .unwrap_or(m);
            y0 + 1
        }
    }
}

/// A greedy flip tree: arcs `(I, J, i, j)` between facet indices with
/// `I \ i = J \ j` and `i < j` (0-based positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTree {
    pub sign: Sign,
    pub root: usize,
    pub indices: Vec<usize>,
    pub arcs: Vec<(usize, usize, usize, usize)>,
}

/// Greedy flip tree of the complex from the index characterisation.
pub fn greedy_tree(ctx: &SubwordComplex<'_>, sign: Sign) -> GreedyTree {
    let sys = ctx.sys();
    let q = ctx.word().letters();
    let indices: Vec<usize> = ctx.facets().iter().map(|f| greedy_index(sys, q, f, sign)).collect();
    let mut arcs = Vec::new();
    for (a, flips) in ctx.flip_graph().iter().enumerate() {
        for arc in flips {
            if arc.i >= arc.j {
                continue;
            }
            let b = arc.target;
            let keep = match sign {
                Sign::Negative => arc.j < indices[b],
                Sign::Positive => indices[a] <= arc.i + 1,
            };
            if keep {
                arcs.push((a, b, arc.i, arc.j));
            }
        }
    }
    arcs.sort_unstable();
    let root = ctx.index_of(&ctx.greedy_facet(sign)).expect("greedy facet is a facet");
    GreedyTree { sign, root, indices, arcs }
}

/// Arcs of the negative greedy flip tree of `K(q, rho)` built by erasing
/// letters from the right, as pairs of facets. Kept as a cross-check.
pub fn negative_tree_recursive(
    sys: &CoxeterSystem,
    q: &[usize],
    rho: &GroupElement,
) -> Result<BTreeSet<(Facet, Facet)>> {
    if !is_representable(sys, q, rho) {
        return Err(Error::NotRepresentable);
    }
    let mut arcs = BTreeSet::new();
    rec(sys, q, rho, &mut arcs);
    Ok(arcs)
}

fn rec(sys: &CoxeterSystem, q: &[usize], rho: &GroupElement, arcs: &mut BTreeSet<(Facet, Facet)>) {
    let Some((&s, head)) = q.split_last() else { return };
    let m = q.len() - 1;
    let rho_s = sys.right_mul_simple(rho, s);
    let without = sys.is_right_descent(rho, s) && is_representable(sys, head, &rho_s);
    let with = is_representable(sys, head, rho);
    if without {
        rec(sys, head, &rho_s, arcs);
    }
    if with {
        let mut sub = BTreeSet::new();
        rec(sys, head, rho, &mut sub);
        for (a, b) in sub {
            arcs.insert((a.exchange(usize::MAX, m), b.exchange(usize::MAX, m)));
        }
    }
    if without && with {
        let from = negative_greedy(sys, head, &rho_s).expect("representable");
        let to = negative_greedy(sys, head, rho).expect("representable");
        arcs.insert((from, to.exchange(usize::MAX, m)));
    }
}

/// Positive greedy tree by mirroring the negative one of the reversed word.
pub fn positive_tree_recursive(
    sys: &CoxeterSystem,
    q: &[usize],
    rho: &GroupElement,
) -> Result<BTreeSet<(Facet, Facet)>> {
    let rev: Vec<usize> = q.iter().rev().copied().collect();
    let m = q.len();
    let mirror = |f: &Facet| Facet::new(f.positions().iter().map(|&p| m - 1 - p).collect());
    Ok(negative_tree_recursive(sys, &rev, &rho.inverse())?.iter().map(|(a, b)| (mirror(b), mirror(a))).collect())
}

/// Graphviz rendering of a greedy tree; nodes carry their greedy index.
pub fn greedy_tree_dot(ctx: &SubwordComplex<'_>, tree: &GreedyTree) -> String {
    let name = match tree.sign {
        Sign::Positive => "positive_greedy_tree",
        Sign::Negative => "negative_greedy_tree",
    };
    let mut out = format!("digraph {name} {{\n");
    for (k, facet) in ctx.facets().iter().enumerate() {
        let shape = if k == tree.root { ", shape=box" } else { "" };
        out.push_str(&format!("  \"{}\" [xlabel=\"{}\"{shape}];\n", facet.label(), tree.indices[k]));
    }
    for &(a, b, i, j) in &tree.arcs {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}→{}\"];\n",
            ctx.facets()[a].label(),
            ctx.facets()[b].label(),
            i + 1,
            j + 1
        ));
    }
    out.push_str("}\n");
    out
}
