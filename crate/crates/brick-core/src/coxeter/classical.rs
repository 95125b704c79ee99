//! Classical coordinates for types A and B.
//!
//! Type A_n lives in `R^{n+1}` with `alpha_p = e_{p+1} - e_p` and
//! `omega_p = e_{p+1} + ... + e_{n+1}`. These weights are not orthogonal to
//! `(1,...,1)`, so a vector made of weights carries an extra multiple of the
//! all-ones vector that depends only on how many weights of each kind were
//! added. Callers pass that tally explicitly.

use super::element::{GroupElement, Word};
use super::system::CoxeterSystem;
use super::types::ClassicalKind;
use crate::error::{Error, Result};
use crate::exactnum::{Scalar, Vector};

/// Classical image of a vector of the root span (no weight tally).
pub fn classical_root(sys: &CoxeterSystem, v: &Vector) -> Option<Vec<Scalar>> {
    classical_with_tally(sys, v, &vec![Scalar::zero(); sys.rank()])
}

/// Classical image of `v`, where `v` is a sum of weights in which the orbit
/// of `omega_s` contributes `tally[s]` in total.
pub fn classical_with_tally(sys: &CoxeterSystem, v: &Vector, tally: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = sys.rank();
    match sys.classical_kind()? {
        ClassicalKind::A => {
            let mut x = vec![Scalar::zero(); n + 1];
            for p in 0..n {
                x[p + 1] = &x[p + 1] + &v[p];
                x[p] = &x[p] - &v[p];
            }
            let shift: Scalar = (0..n).map(|s| &tally[s] * &Scalar::from_ratio((n - s) as i64, (n + 1) as i64)).sum();
            Some(x.into_iter().map(|c| c + &shift).collect())
        }
        ClassicalKind::B => {
            let mut x = vec![Scalar::zero(); n];
            x[0] = v[0].clone();
            for p in 1..n {
                x[p] = &x[p] + &v[p];
                x[p - 1] = &x[p - 1] - &v[p];
            }
            Some(x)
        }
    }
}

/// Classical image of a single weight `w(omega_s)`.
pub fn classical_weight(sys: &CoxeterSystem, v: &Vector, s: usize) -> Option<Vec<Scalar>> {
    let mut tally = vec![Scalar::zero(); sys.rank()];
    tally[s] = Scalar::one();
    classical_with_tally(sys, v, &tally)
}

/// Reads a classical point as a combination of fundamental weights and
/// returns it in root coordinates together with the weight tally.
pub fn point_from_classical(sys: &CoxeterSystem, x: &[Scalar]) -> Result<(Vector, Vec<Scalar>)> {
    let n = sys.rank();
    match sys.classical_kind() {
        Some(ClassicalKind::A) if x.len() == n + 1 => {
            let lambda: Vec<Scalar> = (0..n).map(|s| &x[s + 1] - &x[s]).collect();
            let v = lambda.iter().enumerate().fold(Vector::zeros(n), |acc, (s, l)| acc.add_scaled(l, &sys.weight(s)));
            // the classical image of sum(lambda_s omega_s) has first coordinate 0
            if !x[0].is_zero() {
                return Err(Error::InvalidInput("type A points are read with first coordinate 0".into()));
            }
            Ok((v, lambda))
        }
        Some(ClassicalKind::B) if x.len() == n => {
            // alpha_1 = e_1, alpha_{p+1} = e_{p+1} - e_p; so e_p = alpha_1 + ... + alpha_p
            let mut v = Vector::zeros(n);
            for (p, c) in x.iter().enumerate() {
                for q in 0..=p {
                    v[q] = &v[q] + c;
                }
            }
            let lambda = sys.to_weight_coords(&v).0;
            Ok((v, lambda))
        }
        _ => Err(Error::InvalidInput(format!("no classical coordinates of dimension {} for {}", x.len(), sys.name()))),
    }
}

/// One-line notation `w(1) ... w(n+1)` of a type A element.
pub fn one_line(sys: &CoxeterSystem, w: &GroupElement) -> Option<Vec<usize>> {
    if sys.classical_kind()? != ClassicalKind::A {
        return None;
    }
    let word = sys.reduced_word(w);
    let mut p: Vec<usize> = (1..=sys.rank() + 1).collect();
    // w = s_{a1} ... s_{ak}: apply the rightmost letter first to positions.
    for &s in word.letters().iter() {
        p.swap(s, s + 1);
    }
    Some(p)
}

/// Type A element from its one-line notation.
pub fn element_from_one_line(sys: &CoxeterSystem, perm: &[usize]) -> Result<GroupElement> {
    let n = sys.rank();
    if sys.classical_kind() != Some(ClassicalKind::A) || perm.len() != n + 1 {
        return Err(Error::InvalidInput(format!("not a one-line permutation for {}", sys.name())));
    }
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n + 1).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
    }
    // Bubble sort by right descents: p = w, p * s_i swaps positions i, i+1.
    let mut p = perm.to_vec();
    let mut letters = Vec::new();
    while let Some(i) = (0..n).find(|&i| p[i] > p[i + 1]) {
        p.swap(i, i + 1);
        letters.push(i);
    }
    letters.reverse();
    sys.word_to_element(&Word(letters))
}

/// Signed permutation `w(e_i) = sign * e_{|p_i|}` of a type B element.
pub fn signed_permutation(sys: &CoxeterSystem, w: &GroupElement) -> Option<Vec<i64>> {
    if sys.classical_kind()? != ClassicalKind::B {
        return None;
    }
    let n = sys.rank();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = Vector::zeros(n);
        for q in 0..=i {
            e[q] = Scalar::one();
        }
        let img = classical_root(sys, &sys.apply(w, &e))?;
        let j = img.iter().position(|x| !x.is_zero())?;
        out.push(if img[j].is_positive() { j as i64 + 1 } else { -(j as i64 + 1) });
    }
    Some(out)
}

/// Text form of an element: one-line for type A, signed permutation for
/// type B, otherwise the canonical reduced word.
pub fn describe_element(sys: &CoxeterSystem, w: &GroupElement) -> String {
    if let Some(p) = one_line(sys, w) {
        return p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
    }
    if let Some(p) = signed_permutation(sys, w) {
        return p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    }
    let word = sys.reduced_word(w);
    if word.is_empty() {
        "e".into()
    } else {
        format!("[{word}]")
    }
}

/// Parses an element: `e`, a one-line permutation (type A, digits or comma
/// separated), a signed permutation (type B, comma separated), or a word
/// written `word:1,2,1`.
pub fn parse_element(sys: &CoxeterSystem, s: &str) -> Result<GroupElement> {
    let s = s.trim();
    if s == "e" {
        return Ok(sys.identity());
    }
    if let Some(rest) = s.strip_prefix("word:") {
        return sys.word_to_element(&Word::parse(rest)?);
    }
    let parts: Vec<i64> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad element `{s}`"))))
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|ch| ch.to_digit(10).map(i64::from).ok_or_else(|| Error::InvalidInput(format!("bad element `{s}`"))))
            .collect::<Result<_>>()?
    };
    match sys.classical_kind() {
        Some(ClassicalKind::A) => {
            let p: Vec<usize> = parts
                .iter()
                .map(|&x| usize::try_from(x).map_err(|_| Error::InvalidInput(format!("bad element `{s}`"))))
                .collect::<Result<_>>()?;
            element_from_one_line(sys, &p)
        }
        Some(ClassicalKind::B) => {
            let elements = sys.elements()?;
            elements
                .iter()
                .find(|w| signed_permutation(sys, w).as_deref() == Some(&parts[..]))
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("`{s}` is not a signed permutation")))
        }
        None => Err(Error::InvalidInput(format!("elements of {} must be given as word:..", sys.name()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_conventions() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        // alpha_p = e_{p+1} - e_p, omega_p = sum_{q > p} e_q
        for p in 0..3 {
            let r = classical_root(&sys, &Vector::unit(3, p)).unwrap();
            let mut expect = vec![Scalar::zero(); 4];
            expect[p + 1] = Scalar::one();
            expect[p] = Scalar::from_int(-1);
            assert_eq!(r, expect);
            let w = classical_weight(&sys, &sys.weight(p), p).unwrap();
            let expect: Vec<Scalar> = (0..4).map(|q| Scalar::from_int(i64::from(q > p))).collect();
            assert_eq!(w, expect);
        }
    }

    #[test]
    fn one_line_roundtrip() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        for w in sys.elements().unwrap() {
            let p = one_line(&sys, w).unwrap();
            assert_eq!(&element_from_one_line(&sys, &p).unwrap(), w);
        }
        // w(e_i) = e_{w(i)}: tau_1 = 2134 sends alpha_2 = e3 - e2 to e3 - e1.
        let t1 = sys.simple_reflection(0);
        assert_eq!(one_line(&sys, t1).unwrap(), vec![2, 1, 3, 4]);
        let w = element_from_one_line(&sys, &[3, 2, 1, 4]).unwrap();
        let inv: Vec<Vec<Scalar>> =
            sys.inversion_root_set(&w).into_iter().map(|b| classical_root(&sys, sys.root(b)).unwrap()).collect();
        assert_eq!(inv.len(), 3);
        assert!(element_from_one_line(&sys, &[1, 1, 2, 3]).is_err());
    }

    #[test]
    fn type_b_signed_permutations() {
        let sys = CoxeterSystem::named("B", 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for w in sys.elements().unwrap() {
            let p = signed_permutation(&sys, w).unwrap();
            let mut abs: Vec<i64> = p.iter().map(|x| x.abs()).collect();
            abs.sort_unstable();
            assert_eq!(abs, vec![1, 2, 3]);
            assert!(seen.insert(p));
        }
        assert_eq!(signed_permutation(&sys, sys.simple_reflection(0)).unwrap(), vec![-1, 2, 3]);
        let w = parse_element(&sys, "-1,2,3").unwrap();
        assert_eq!(&w, sys.simple_reflection(0));
    }

    #[test]
    fn parse_elements() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        assert!(parse_element(&sys, "e").unwrap().is_identity());
        assert_eq!(parse_element(&sys, "2134").unwrap(), parse_element(&sys, "word:1").unwrap());
        assert_eq!(parse_element(&sys, "2,1,3,4").unwrap(), parse_element(&sys, "word:1").unwrap());
        assert!(parse_element(&sys, "21x4").is_err());
        let h3 = CoxeterSystem::named("H", 3).unwrap();
        assert!(parse_element(&h3, "123").is_err());
        assert_eq!(describe_element(&h3, &parse_element(&h3, "word:1,2").unwrap()), "[1,2]");
    }

    #[test]
    fn classical_points() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        let x: Vec<Scalar> = [0, 1, 2, 3].iter().map(|&v| Scalar::from_int(v)).collect();
        let (q, lambda) = point_from_classical(&sys, &x).unwrap();
        assert_eq!(q, sys.rho());
        assert!(lambda.iter().all(Scalar::is_one));
    }
}
