//! Number fields `Q(2cos(pi/L))` and their exact embedding into the reals.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real number field `Q(theta)` with `theta = 2cos(pi/L)`.
///
/// `L = 1` stands for the rationals. Fields are interned, so two fields are
/// equal exactly when their `L` agree.
#[derive(Debug)]
pub struct Field {
    m: u32,
    /// Monic minimal polynomial of theta, lowest degree first.
    min_poly: Vec<BigRational>,
    approx: f64,
    lo: BigRational,
    hi: BigRational,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for Field {}

impl Field {
    /// The `L` in `theta = 2cos(pi/L)`; 1 for the rationals.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn min_poly(&self) -> &[BigRational] {
        &self.min_poly
    }

    /// Floating point value of the generator.
    pub fn generator_approx(&self) -> f64 {
        self.approx
    }

    /// Rational interval `(lo, hi)` containing the generator and no other
    /// root of the minimal polynomial.
    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub(crate) fn eval_min_poly(&self, x: &BigRational) -> BigRational {
        eval_poly(&self.min_poly, x)
    }
}

/// The field of rational numbers.
pub fn rationals() -> &'static Field {
    field_for(1).expect("the rational field always exists")
}

/// Interned field `Q(2cos(pi/m))`. Values of `m` whose generator is rational
/// (1, 2, 3) collapse to the rationals.
pub fn field_for(m: u32) -> Result<&'static Field> {
    if m == 0 {
        return Err(Error::InvalidCoxeterMatrix("field parameter must be positive".into()));
    }
    let m = if m <= 3 { 1 } else { m };
    static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static Field>>> = OnceLock::new();
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = registry.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = guard.get(&m) {
        return Ok(f);
    }
    let field: &'static Field = Box::leak(Box::new(build_field(m)?));
    guard.insert(m, field);
    Ok(field)
}

/// Whether `2cos(pi/m)` enters a Cartan matrix as an irrational number. The
/// values 2, 3, 4, 6 are handled by the integer crystallographic entries.
pub fn needs_extension(m: u32) -> bool {
    m == 5 || m >= 7
}

/// Smallest field of the family holding `2cos(pi/m)` for every entry that
/// needs an extension; the rationals when all entries lie in {2,3,4,6}.
pub fn make_field(entries: &[u32]) -> Result<&'static Field> {
    let mut l: u32 = 1;
    for &m in entries {
        if m < 2 {
            return Err(Error::InvalidCoxeterMatrix(format!("Coxeter entry {m} is below 2")));
        }
        if needs_extension(m) {
            l = l.lcm(&m);
        }
    }
    field_for(l)
}

fn build_field(m: u32) -> Result<Field> {
    if m == 1 {
        return Ok(Field {
            m,
            min_poly: vec![BigRational::zero(), BigRational::one()],
            approx: 0.0,
            lo: BigRational::zero(),
            hi: BigRational::zero(),
        });
    }
    let min_poly = chebyshev_min_poly(m);
    let approx = 2.0 * (std::f64::consts::PI / m as f64).cos();
    let check = eval_f64(&min_poly, approx);
    if check.abs() > 1e-9 * (1.0 + approx.abs()).powi(min_poly.len() as i32) {
        return Err(Error::Internal(format!("minimal polynomial for 2cos(pi/{m}) fails the numeric check ({check})")));
    }
    let eps = 1e-9;
    let lo = BigRational::from_float(approx - eps).expect("finite");
    let hi = BigRational::from_float(approx + eps).expect("finite");
    let (plo, phi) = (eval_poly(&min_poly, &lo), eval_poly(&min_poly, &hi));
    if (plo.signum() * phi.signum()) != -BigRational::one() {
        return Err(Error::Internal(format!("could not isolate 2cos(pi/{m})")));
    }
    Ok(Field { m, min_poly, approx, lo, hi })
}

/// Integer polynomial helpers, lowest degree first.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dl = den.len();
    let lead = &den[dl - 1];
    let mut quo = vec![BigInt::zero(); num.len() + 1 - dl];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + dl - 1] / lead;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quo
}

fn cyclotomic(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic(d, memo);
            p = poly_div_exact(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

/// Minimal polynomial of `2cos(pi/m)`, obtained from the palindromic
/// cyclotomic polynomial of order `2m` by the substitution `x = z + 1/z`.
pub(crate) fn chebyshev_min_poly(m: u32) -> Vec<BigRational> {
    let mut memo = HashMap::new();
    let phi = cyclotomic(2 * m, &mut memo);
    let d = (phi.len() - 1) / 2;
    // D_k(x) = z^k + z^-k as polynomials in x.
    let mut dk: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for k in 2..=d {
        let mut next = vec![BigInt::zero(); k + 1];
        for (i, c) in dk[k - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in dk[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        dk.push(next);
    }
    let mut out = vec![BigInt::zero(); d + 1];
    out[0] += &phi[d];
    for k in 1..=d {
        for (i, c) in dk[k].iter().enumerate() {
            out[i] += &phi[d + k] * c;
        }
    }
    out.into_iter().map(BigRational::from_integer).collect()
}

pub(crate) fn eval_poly(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_f64(p: &[BigRational], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// Chebyshev-type values `2cos(k pi / m)` expressed in the power basis of
/// `theta = 2cos(pi/m)`; returns the coefficient list of `D_k(theta)`.
pub(crate) fn chebyshev_value(k: u32) -> Vec<BigRational> {
    let mut prev: Vec<BigRational> = vec![BigRational::from_integer(2.into())];
    let mut cur: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()];
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let mut next = vec![BigRational::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &[BigRational]) -> Vec<i64> {
        p.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn crystallographic_entries_stay_rational() {
        assert!(make_field(&[2, 3, 4, 6]).unwrap().is_rational());
        assert!(make_field(&[]).unwrap().is_rational());
    }

    #[test]
    fn golden_ratio_field() {
        let f = make_field(&[2, 3, 5]).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(ints(f.min_poly()), vec![-1, -1, 1]);
        let t = f.generator_approx();
        assert!((t * t - t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heptagon_field() {
        let f = field_for(7).unwrap();
        assert_eq!(ints(f.min_poly()), vec![1, -2, -1, 1]);
    }

    #[test]
    fn min_poly_matches_chebyshev_factor_oracle() {
        // Independent oracle: the polynomial has 2cos(k pi/m) as roots for
        // every odd k coprime to m, and no others.
        for m in [5u32, 7, 8, 9, 10, 12, 15] {
            let f = field_for(m).unwrap();
            let roots: Vec<f64> = (1..2 * m)
                .step_by(2)
                .filter(|k| k.gcd(&(2 * m)) == 1 && *k < m)
                .map(|k| 2.0 * (std::f64::consts::PI * k as f64 / m as f64).cos())
                .collect();
            assert_eq!(roots.len(), f.degree(), "degree for m={m}");
            for r in roots {
                assert!(eval_f64(f.min_poly(), r).abs() < 1e-9, "root for m={m}");
            }
        }
    }

    #[test]
    fn lcm_of_irrational_entries() {
        assert_eq!(make_field(&[5, 3]).unwrap().m(), 5);
        assert_eq!(make_field(&[5, 7]).unwrap().m(), 35);
        assert_eq!(make_field(&[8, 4]).unwrap().m(), 8);
    }

    #[test]
    fn invalid_entry() {
        assert!(make_field(&[1]).is_err());
    }

    #[test]
    fn chebyshev_values() {
        // D_2(x) = x^2 - 2
        assert_eq!(ints(&chebyshev_value(2)), vec![-2, 0, 1]);
        assert_eq!(ints(&chebyshev_value(3)), vec![0, -3, 0, 1]);
    }
}
