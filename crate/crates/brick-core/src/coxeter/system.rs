use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use super::element::{GroupElement, RootId, Word};
use super::types::{cartan_matrix, type_data, ClassicalKind, Descriptor};
use crate::error::{Error, Result};
use crate::exactnum::{Field, Matrix, Scalar, Vector};

/// Default bound on the group order for operations that enumerate `W`.
pub const DEFAULT_GROUP_CAP: u128 = 100_000;
/// Bound on the number of positive roots before declaring a system infinite.
pub const ROOT_CAP: usize = 1_000_000;

/// A finite Coxeter system with its root system in root coordinates.
///
/// Conventions: `s(alpha_t) = alpha_t - a_st alpha_s`, the weight `omega_t`
/// is column `t` of the inverse Cartan matrix, and the invariant inner
/// product is `<alpha_s, alpha_t> = d_s a_st`.
pub struct CoxeterSystem {
    name: String,
    rank: usize,
    coxeter: Vec<Vec<u32>>,
    field: &'static Field,
    cartan: Matrix,
    symmetrizer: Vec<Scalar>,
    gram: Matrix,
    weights: Matrix,
    roots: Vec<Vector>,
    root_lookup: HashMap<Vector, RootId>,
    simple: Vec<GroupElement>,
    reflections: Vec<GroupElement>,
    w0: GroupElement,
    w0_word: Word,
    classical: Option<ClassicalKind>,
    group_cap: u128,
    order: OnceLock<u128>,
    pub(crate) elements: OnceLock<Vec<GroupElement>>,
    pub(crate) reflection_lengths: OnceLock<HashMap<GroupElement, usize>>,
}

impl std::fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("num_positive_roots", &self.num_positive_roots())
            .finish()
    }
}

fn cap_from_env() -> u128 {
    std::env::var("BRICK_GROUP_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_GROUP_CAP)
}

impl CoxeterSystem {
    /// Builds a system from a named type or an explicit Coxeter matrix.
    pub fn build(desc: &Descriptor) -> Result<Self> {
        Self::build_with_root_cap(desc, ROOT_CAP)
    }

    pub fn named(kind: &str, rank: usize) -> Result<Self> {
        Self::build(&Descriptor::named(kind, rank))
    }

    pub fn from_coxeter_matrix(m: Vec<Vec<u32>>) -> Result<Self> {
        Self::build(&Descriptor::Matrix { coxeter_matrix: m })
    }

    pub fn build_with_root_cap(desc: &Descriptor, root_cap: usize) -> Result<Self> {
        let td = type_data(desc)?;
        let (cartan, field) = cartan_matrix(&td.coxeter, &td.overrides)?;
        Self::from_cartan(td.name, td.coxeter, cartan, field, td.classical, root_cap)
    }

    /// Builds the system of a Cartan matrix; used for reflection subgroups
    /// whose simple roots are not standard.
    pub(crate) fn from_cartan(
        name: String,
        coxeter: Vec<Vec<u32>>,
        cartan: Matrix,
        field: &'static Field,
        classical: Option<ClassicalKind>,
        root_cap: usize,
    ) -> Result<Self> {
        let n = cartan.rows();
        let symmetrizer = symmetrizer(&cartan)?;
        let mut gram = Matrix::zeros(n, n);
        for s in 0..n {
            for t in 0..n {
                gram[(s, t)] = &symmetrizer[s] * &cartan[(s, t)];
            }
        }
        if gram != gram.transpose() {
            return Err(Error::InvalidCoxeterMatrix("Cartan matrix is not symmetrizable".into()));
        }
        // A finite reflection group has a positive definite invariant form.
        for k in 1..=n {
            let mut minor = Matrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    minor[(i, j)] = gram[(i, j)].clone();
                }
            }
            if !minor.determinant().is_positive() {
                return Err(Error::NotFinite(format!("the invariant form of {name} is not positive definite")));
            }
        }
        let weights =
            cartan.inverse().ok_or_else(|| Error::NotFinite(format!("Cartan matrix of {name} is singular")))?;
        let positive = enumerate_positive_roots(&cartan, root_cap)
            .ok_or_else(|| Error::NotFinite(format!("more than {root_cap} positive roots")))?;
        let big_n = positive.len();
        if 2 * big_n > u16::MAX as usize {
            return Err(Error::InvalidInput(format!("{name} has too many roots for this representation")));
        }
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|v| -v));
        let root_lookup: HashMap<Vector, RootId> = roots.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();

        let simple: Vec<GroupElement> = (0..n)
            .map(|s| {
                let perm = roots
                    .iter()
                    .map(|v| {
                        let img = reflect_simple(&cartan, s, v);
                        *root_lookup.get(&img).expect("simple reflections permute the roots") as u16
                    })
                    .collect();
                GroupElement::from_perm(perm)
            })
            .collect();

        // s_beta = s t s_{beta'} t for beta = t(beta') of smaller height.
        let mut reflections: Vec<Option<GroupElement>> = vec![None; big_n];
        for (s, g) in simple.iter().enumerate() {
            reflections[s] = Some(g.clone());
        }
        for b in n..big_n {
            let beta = &roots[b];
            let t = (0..n)
                .find(|&t| coroot_pairing(&cartan, t, beta).is_positive())
                .expect("a non-simple positive root pairs positively with some simple coroot");
            let prev = simple[t].image(b);
            debug_assert!(prev < b, "roots are sorted by height");
            let r = reflections[prev].as_ref().expect("lower roots done first");
            reflections[b] = Some(simple[t].compose(r).compose(&simple[t]));
        }
        let reflections: Vec<GroupElement> = reflections.into_iter().map(|r| r.expect("all set")).collect();

        let mut sys = CoxeterSystem {
            name,
            rank: n,
            coxeter,
            field,
            cartan,
            symmetrizer,
            gram,
            weights,
            roots,
            root_lookup,
            simple,
            reflections,
            w0: GroupElement::identity(2 * big_n),
            w0_word: Word::empty(),
            classical,
            group_cap: cap_from_env(),
            order: OnceLock::new(),
            elements: OnceLock::new(),
            reflection_lengths: OnceLock::new(),
        };
        let (w0, w0_word) = sys.longest_by_ascent();
        sys.w0 = w0;
        sys.w0_word = w0_word;
        sys.check_invariants()?;
        Ok(sys)
    }

    fn longest_by_ascent(&self) -> (GroupElement, Word) {
        let mut w = self.identity();
        let mut word = Vec::new();
        while let Some(s) = (0..self.rank).find(|&s| self.is_positive(w.image(s))) {
            w = self.right_mul_simple(&w, s);
            word.push(s);
        }
        (w, Word(word))
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.rank;
        if self.length(&self.w0) != self.num_positive_roots() {
            return Err(Error::Internal("length of w0 differs from N".into()));
        }
        for s in 0..n {
            for t in 0..n {
                // s(alpha_t) = alpha_t - a_st alpha_s
                let lhs = self.root(self.simple[s].image(t)).clone();
                let rhs = Vector::unit(n, t).add_scaled(&-&self.cartan[(s, t)], &Vector::unit(n, s));
                if lhs != rhs {
                    return Err(Error::Internal(format!("simple reflection {s} acts wrongly on root {t}")));
                }
                // s(omega_t) = omega_t - delta_st alpha_s
                let w = self.apply(&self.simple[s], &self.weight(t));
                let mut expect = self.weight(t);
                if s == t {
                    expect = &expect - &Vector::unit(n, s);
                }
                if w != expect {
                    return Err(Error::Internal(format!("simple reflection {s} acts wrongly on weight {t}")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn cartan(&self) -> &Matrix {
        &self.cartan
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Symmetrizing factors `d_s` with `<alpha_s, alpha_s> = 2 d_s`.
    pub fn symmetrizer(&self) -> &[Scalar] {
        &self.symmetrizer
    }

    /// Inverse Cartan matrix; its columns are the fundamental weights.
    pub fn weight_matrix(&self) -> &Matrix {
        &self.weights
    }

    pub fn classical_kind(&self) -> Option<ClassicalKind> {
        self.classical
    }

    pub fn group_cap(&self) -> u128 {
        self.group_cap
    }

    /// Overrides the enumeration cap (the environment variable
    /// `BRICK_GROUP_CAP` sets the default).
    pub fn set_group_cap(&mut self, cap: u128) {
        self.group_cap = cap;
    }

    /// `N`, the number of positive roots.
    pub fn num_positive_roots(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root(&self, id: RootId) -> &Vector {
        &self.roots[id]
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn root_id(&self, v: &Vector) -> Option<RootId> {
        self.root_lookup.get(v).copied()
    }

    pub fn simple_root_id(&self, s: usize) -> RootId {
        s
    }

    pub fn is_positive(&self, id: RootId) -> bool {
        id < self.num_positive_roots()
    }

    pub fn negate(&self, id: RootId) -> RootId {
        let big_n = self.num_positive_roots();
        if id < big_n {
            id + big_n
        } else {
            id - big_n
        }
    }

    /// The positive root among `{id, -id}`.
    pub fn positive_part(&self, id: RootId) -> RootId {
        id % self.num_positive_roots()
    }

    pub fn weight(&self, s: usize) -> Vector {
        self.weights.column(s)
    }

    pub fn weights(&self) -> Vec<Vector> {
        (0..self.rank).map(|s| self.weight(s)).collect()
    }

    /// Invariant inner product of two vectors in root coordinates.
    pub fn inner(&self, x: &Vector, y: &Vector) -> Scalar {
        self.gram.mul_vec(y).dot(x)
    }

    /// Coordinates in the weight basis of a vector given in root coordinates.
    pub fn to_weight_coords(&self, v: &Vector) -> Vector {
        self.cartan.mul_vec(v)
    }

    /// Covector `f_s = <alpha_s, x>` attached to a vector `x`.
    pub fn covector_of(&self, x: &Vector) -> Vector {
        self.gram.mul_vec(x)
    }

    /// Covector taking the value 1 on every simple root, interior to the
    /// fundamental chamber.
    pub fn fundamental_covector(&self) -> Vector {
        Vector(vec![Scalar::one(); self.rank])
    }

    /// Sum of the fundamental weights.
    pub fn rho(&self) -> Vector {
        self.weights().iter().fold(Vector::zeros(self.rank), |a, b| &a + b)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.num_roots())
    }

    pub fn simple_reflection(&self, s: usize) -> &GroupElement {
        &self.simple[s]
    }

    /// Reflection in the hyperplane orthogonal to a root.
    pub fn reflection(&self, root: RootId) -> &GroupElement {
        &self.reflections[self.positive_part(root)]
    }

    /// `s_beta(gamma)` as root ids.
    #[inline]
    pub fn reflect_root(&self, beta: RootId, gamma: RootId) -> RootId {
        self.reflections[self.positive_part(beta)].image(gamma)
    }

    pub fn longest_element(&self) -> &GroupElement {
        &self.w0
    }

    pub fn w0_word(&self) -> &Word {
        &self.w0_word
    }

    pub fn mul(&self, u: &GroupElement, v: &GroupElement) -> GroupElement {
        u.compose(v)
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        w.inverse()
    }

    pub fn right_mul_simple(&self, w: &GroupElement, s: usize) -> GroupElement {
        w.compose(&self.simple[s])
    }

    /// Replaces the permutation `perm` of `w` by that of `w s` without
    /// allocating: `(w s)(b) = w(s(b))` swaps the entries `b` and `s(b)`.
    pub(crate) fn right_mul_simple_in_place(&self, perm: &mut [u16], s: usize) {
        for (b, &img) in self.simple[s].perm().iter().enumerate() {
            if b < img as usize {
                perm.swap(b, img as usize);
            }
        }
    }

    pub fn left_mul_simple(&self, s: usize, w: &GroupElement) -> GroupElement {
        self.simple[s].compose(w)
    }

    /// Linear action on a vector in root coordinates.
    pub fn apply(&self, w: &GroupElement, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.rank);
        for (t, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add_scaled(c, self.root(w.image(t)));
            }
        }
        out
    }

    /// `w(omega_s)` in root coordinates.
    pub fn apply_weight(&self, w: &GroupElement, s: usize) -> Vector {
        self.apply(w, &self.weight(s))
    }

    /// Matrix of `w` on root coordinates: column `t` is `w(alpha_t)`.
    pub fn matrix(&self, w: &GroupElement) -> Matrix {
        let cols: Vec<Vector> = (0..self.rank).map(|t| self.root(w.image(t)).clone()).collect();
        Matrix::from_columns(self.rank, &cols)
    }

    pub fn check_letter(&self, s: usize) -> Result<()> {
        if s >= self.rank {
            return Err(Error::LetterOutOfRange { letter: s + 1, rank: self.rank });
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&s| self.check_letter(s))
    }

    /// Product of the simple reflections of a word, in word order.
    pub fn word_to_element(&self, w: &Word) -> Result<GroupElement> {
        self.check_word(w)?;
        Ok(w.letters().iter().fold(self.identity(), |acc, &s| self.right_mul_simple(&acc, s)))
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, w: &GroupElement) -> usize {
        let big_n = self.num_positive_roots();
        w.perm()[..big_n].iter().filter(|&&b| b as usize >= big_n).count()
    }

    pub fn is_right_descent(&self, w: &GroupElement, s: usize) -> bool {
        !self.is_positive(w.image(s))
    }

    pub fn is_left_descent(&self, w: &GroupElement, s: usize) -> bool {
        // w^{-1}(alpha_s) is negative iff alpha_s is the image of a negative root.
        let pre = w.perm().iter().position(|&b| b as usize == s).expect("permutation");
        !self.is_positive(pre)
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self, w: &GroupElement) -> Word {
        let mut u = w.clone();
        let mut out = Vec::new();
        while let Some(s) = (0..self.rank).find(|&s| self.is_left_descent(&u, s)) {
            out.push(s);
            u = self.left_mul_simple(s, &u);
        }
        Word(out)
    }

    /// Whether the word is a reduced expression.
    pub fn is_reduced(&self, w: &Word) -> Result<bool> {
        let e = self.word_to_element(w)?;
        Ok(self.length(&e) == w.len())
    }

    /// Order of the group, by the orbit-stabiliser recursion on fundamental
    /// weights along a chain of standard parabolic subgroups.
    pub fn group_order(&self) -> u128 {
        *self.order.get_or_init(|| {
            let mut total: u128 = 1;
            for j in (0..self.rank).rev() {
                // orbit of omega_j under W_{0..=j}
                let start = self.weight(j);
                let mut seen: std::collections::HashSet<Vector> = std::collections::HashSet::new();
                seen.insert(start.clone());
                let mut queue = VecDeque::from([start]);
                while let Some(v) = queue.pop_front() {
                    for s in 0..=j {
                        let img = reflect_simple(&self.cartan, s, &v);
                        if seen.insert(img.clone()) {
                            queue.push_back(img);
                        }
                    }
                }
                total *= seen.len() as u128;
            }
            total
        })
    }

    /// Fails with [`Error::GroupTooLarge`] when `|W|` exceeds the cap.
    pub fn ensure_enumerable(&self) -> Result<()> {
        let order = self.group_order();
        if order > self.group_cap {
            return Err(Error::GroupTooLarge { order, cap: self.group_cap });
        }
        Ok(())
    }

    /// All group elements sorted by length, then by root permutation.
    pub fn elements(&self) -> Result<&[GroupElement]> {
        self.ensure_enumerable()?;
        Ok(self.elements.get_or_init(|| {
            let e = self.identity();
            let mut seen = std::collections::HashSet::new();
            seen.insert(e.clone());
            let mut queue = VecDeque::from([e]);
            while let Some(w) = queue.pop_front() {
                for s in 0..self.rank {
                    let ws = self.right_mul_simple(&w, s);
                    if seen.insert(ws.clone()) {
                        queue.push_back(ws);
                    }
                }
            }
            let mut all: Vec<(usize, GroupElement)> = seen.into_iter().map(|w| (self.length(&w), w)).collect();
            all.sort();
            all.into_iter().map(|(_, w)| w).collect()
        }))
    }

    /// The system restricted to the generators in `subset`, embedded through
    /// the coordinates of `subset`.
    pub fn standard_parabolic(&self, subset: &[usize]) -> Result<CoxeterSystem> {
        let k = subset.len();
        let mut cox = vec![vec![1u32; k]; k];
        let mut cartan = Matrix::zeros(k, k);
        for (i, &s) in subset.iter().enumerate() {
            for (j, &t) in subset.iter().enumerate() {
                cox[i][j] = self.coxeter[s][t];
                cartan[(i, j)] = self.cartan[(s, t)].clone();
            }
        }
        let labels: Vec<String> = subset.iter().map(|s| (s + 1).to_string()).collect();
        CoxeterSystem::from_cartan(
            format!("{}[{}]", self.name, labels.join(",")),
            cox,
            cartan,
            self.field,
            None,
            ROOT_CAP,
        )
    }
}

/// `<alpha_s^vee, v>` for `v` in root coordinates.
pub(crate) fn coroot_pairing(cartan: &Matrix, s: usize, v: &Vector) -> Scalar {
    (0..cartan.cols()).filter(|&t| !v[t].is_zero() && !cartan[(s, t)].is_zero()).map(|t| &cartan[(s, t)] * &v[t]).sum()
}

pub(crate) fn reflect_simple(cartan: &Matrix, s: usize, v: &Vector) -> Vector {
    let c = coroot_pairing(cartan, s, v);
    let mut out = v.clone();
    out[s] = &out[s] - &c;
    out
}

fn symmetrizer(cartan: &Matrix) -> Result<Vec<Scalar>> {
    let n = cartan.rows();
    let mut d: Vec<Option<Scalar>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Scalar::one());
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for t in 0..n {
                if t == s || cartan[(s, t)].is_zero() {
                    continue;
                }
                if cartan[(t, s)].is_zero() {
                    return Err(Error::InvalidCoxeterMatrix("Cartan matrix has a one-sided zero".into()));
                }
                let ds = d[s].clone().expect("visited");
                let dt = &ds * &cartan[(s, t)] / &cartan[(t, s)];
                match &d[t] {
                    None => {
                        d[t] = Some(dt);
                        stack.push(t);
                    }
                    Some(old) if *old != dt => {
                        return Err(Error::InvalidCoxeterMatrix("Cartan matrix is not symmetrizable".into()));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(d.into_iter().map(|x| x.expect("all visited")).collect())
}

/// Positive roots: simple roots first, then by height and reverse
/// lexicographic coordinates.
fn enumerate_positive_roots(cartan: &Matrix, cap: usize) -> Option<Vec<Vector>> {
    let n = cartan.rows();
    let simple: Vec<Vector> = (0..n).map(|s| Vector::unit(n, s)).collect();
    let mut seen: std::collections::HashSet<Vector> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vector> = simple.iter().cloned().collect();
    let mut others = Vec::new();
    while let Some(v) = queue.pop_front() {
        for s in 0..n {
            if v == simple[s] {
                continue;
            }
            let img = reflect_simple(cartan, s, &v);
            if !img.is_nonnegative() {
                continue;
            }
            if seen.insert(img.clone()) {
                if seen.len() > cap {
                    return None;
                }
                others.push(img.clone());
                queue.push_back(img);
            }
        }
    }
    let mut keyed: Vec<(Scalar, Vector)> = others.into_iter().map(|v| (v.iter().cloned().sum::<Scalar>(), v)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    let mut out = simple;
    out.extend(keyed.into_iter().map(|(_, v)| v));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_counts() {
        for (k, r, big_n, order) in [
            ("A", 3, 6, 24u128),
            ("B", 3, 9, 48),
            ("C", 3, 9, 48),
            ("D", 4, 12, 192),
            ("H", 3, 15, 120),
            ("F", 4, 24, 1152),
            ("G", 2, 6, 12),
            ("A", 4, 10, 120),
            ("H", 4, 60, 14400),
            ("E", 6, 36, 51840),
        ] {
            let sys = CoxeterSystem::named(k, r).unwrap();
            assert_eq!(sys.num_positive_roots(), big_n, "{k}{r}");
            assert_eq!(sys.group_order(), order, "{k}{r}");
            assert_eq!(sys.length(sys.longest_element()), big_n);
        }
    }

    #[test]
    fn big_exceptional_orders() {
        let e8 = CoxeterSystem::named("E", 8).unwrap();
        assert_eq!(e8.num_positive_roots(), 120);
        assert_eq!(e8.group_order(), 696_729_600);
        assert!(matches!(e8.elements(), Err(Error::GroupTooLarge { .. })));
        let e7 = CoxeterSystem::named("E", 7).unwrap();
        assert_eq!(e7.group_order(), 2_903_040);
    }

    #[test]
    fn h3_lives_in_golden_field() {
        let sys = CoxeterSystem::named("H", 3).unwrap();
        assert_eq!(sys.field().m(), 5);
        // independent oracle: count orbit of simple roots numerically
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for r in sys.roots() {
            let f = r.to_f64();
            if f.iter().all(|x| *x >= -1e-12)
                && !pts.iter().any(|p| p.iter().zip(&f).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                pts.push(f);
            }
        }
        assert_eq!(pts.len(), 15);
    }

    #[test]
    fn dihedral_groups() {
        for m in [5u32, 7, 8, 12] {
            let sys = CoxeterSystem::build(&Descriptor::dihedral(m)).unwrap();
            assert_eq!(sys.num_positive_roots(), m as usize);
            assert_eq!(sys.group_order(), 2 * m as u128);
        }
    }

    #[test]
    fn explicit_matrix_and_infinite_types() {
        let a3 = CoxeterSystem::from_coxeter_matrix(vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]]).unwrap();
        assert_eq!(a3.num_positive_roots(), 6);
        let affine = CoxeterSystem::from_coxeter_matrix(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]);
        assert!(matches!(affine, Err(Error::NotFinite(_))));
        let bad = CoxeterSystem::from_coxeter_matrix(vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::InvalidCoxeterMatrix(_))));
    }

    #[test]
    fn root_cap_also_detects_infinite_types() {
        // The positive-definiteness check fires first; the enumeration cap is a
        // second guard exercised directly here.
        let cartan = Matrix::from_int_rows(&[vec![2, -2], vec![-2, 2]]);
        assert!(enumerate_positive_roots(&cartan, 1000).is_none());
    }

    #[test]
    fn words_and_lengths() {
        let sys = CoxeterSystem::named("A", 3).unwrap();
        assert!(sys.word_to_element(&Word::empty()).unwrap().is_identity());
        assert!(sys.word_to_element(&Word::from_one_based(&[1, 1])).unwrap().is_identity());
        let w0 = sys.word_to_element(sys.w0_word()).unwrap();
        assert!((0..6).all(|b| !sys.is_positive(w0.image(b))));
        assert!(sys.word_to_element(&Word::from_one_based(&[4])).is_err());
        for w in sys.elements().unwrap() {
            let word = sys.reduced_word(w);
            assert_eq!(word.len(), sys.length(w));
            assert_eq!(&sys.word_to_element(&word).unwrap(), w);
        }
    }

    #[test]
    fn length_changes_by_one() {
        for (k, r) in [("A", 2), ("A", 3), ("B", 3), ("H", 3)] {
            let sys = CoxeterSystem::named(k, r).unwrap();
            for w in sys.elements().unwrap() {
                for s in 0..r {
                    let ws = sys.right_mul_simple(w, s);
                    let expected = if sys.is_positive(w.image(s)) { sys.length(w) + 1 } else { sys.length(w) - 1 };
                    assert_eq!(sys.length(&ws), expected);
                }
            }
        }
    }

    #[test]
    fn matrix_action_matches_permutation() {
        let sys = CoxeterSystem::named("B", 3).unwrap();
        let w = sys.word_to_element(&Word::from_one_based(&[1, 2, 3, 1])).unwrap();
        let m = sys.matrix(&w);
        for (b, r) in sys.roots().iter().enumerate() {
            assert_eq!(&m.mul_vec(r), sys.root(w.image(b)));
        }
        // orthogonality of the action
        let x = sys.weight(0);
        let y = sys.weight(2);
        assert_eq!(sys.inner(&sys.apply(&w, &x), &sys.apply(&w, &y)), sys.inner(&x, &y));
    }

    #[test]
    fn weights_are_dual_to_roots() {
        let sys = CoxeterSystem::named("G", 2).unwrap();
        for s in 0..2 {
            for t in 0..2 {
                let v = sys.inner(&Vector::unit(2, s), &sys.weight(t));
                let expect = if s == t { sys.symmetrizer()[s].clone() } else { Scalar::zero() };
                assert_eq!(v, expect);
            }
        }
    }
}
