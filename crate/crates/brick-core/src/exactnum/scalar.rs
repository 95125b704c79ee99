use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::field::{eval_poly, field_for, rationals, Field};

/// Exact element of `Q` or of `Q(2cos(pi/L))`.
///
/// Rational values are always stored over the rational field, so equality and
/// hashing are structural.
#[derive(Clone)]
pub struct Scalar {
    field: &'static Field,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { field: rationals(), coeffs: vec![r] }
    }

    /// Element `sum_i coeffs[i] * theta^i` of `field`. Coefficient lists longer
    /// than the degree are reduced modulo the minimal polynomial.
    pub fn from_coeffs(field: &'static Field, coeffs: Vec<BigRational>) -> Self {
        let mut s = Scalar { field, coeffs };
        s.normalize();
        s
    }

    /// The generator `2cos(pi/L)` of `field`.
    pub fn generator(field: &'static Field) -> Self {
        if field.is_rational() {
            return Self::zero();
        }
        Self::from_coeffs(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// Parses `"p"`, `"p/q"` or a decimal literal as a rational.
    pub fn parse_rational(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(Self::from_rational(BigRational::new(p, q)));
        }
        if let Some((a, b)) = s.split_once('.') {
            let neg = a.starts_with('-');
            let int: BigInt = if a.is_empty() || a == "-" { BigInt::zero() } else { a.parse().ok()? };
            if b.is_empty() || !b.bytes().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let frac: BigInt = b.parse().ok()?;
            let den = num_traits::pow(BigInt::from(10), b.len());
            let frac = BigRational::new(frac, den);
            let v = if neg { BigRational::from_integer(int) - frac } else { BigRational::from_integer(int) + frac };
            return Some(Self::from_rational(v));
        }
        s.parse::<BigInt>().ok().map(|v| Self::from_rational(BigRational::from_integer(v)))
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    fn normalize(&mut self) {
        let d = self.field.degree();
        if self.coeffs.len() > d && d > 1 {
            let p = self.field.min_poly();
            for top in (d..self.coeffs.len()).rev() {
                let c = std::mem::take(&mut self.coeffs[top]);
                if c.is_zero() {
                    continue;
                }
                for (i, pc) in p.iter().enumerate().take(d) {
                    self.coeffs[top - d + i] -= &c * pc;
                }
            }
            self.coeffs.truncate(d);
        }
        if d > 1 {
            self.coeffs.resize(d, BigRational::zero());
            if self.coeffs[1..].iter().all(Zero::is_zero) {
                self.coeffs.truncate(1);
                self.field = rationals();
            }
        } else if self.coeffs.is_empty() {
            self.coeffs.push(BigRational::zero());
        } else {
            // The rational field has generator 0.
            self.coeffs.truncate(1);
            self.field = rationals();
        }
    }

    fn common_field(&self, other: &Scalar) -> &'static Field {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => rationals(),
            (false, true) => self.field,
            (true, false) => other.field,
            (false, false) => {
                assert!(
                    self.field == other.field,
                    "mixing scalars from Q(2cos(pi/{})) and Q(2cos(pi/{}))",
                    self.field.m(),
                    other.field.m()
                );
                self.field
            }
        }
    }

    fn padded(&self, d: usize) -> Vec<BigRational> {
        let mut v = self.coeffs.clone();
        v.resize(d.max(1), BigRational::zero());
        v
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        if self.is_rational() && other.is_rational() {
            return Scalar::from_rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let f = self.common_field(other);
        let d = f.degree();
        let mut a = self.padded(d);
        for (x, y) in a.iter_mut().zip(other.padded(d)) {
            *x += y;
        }
        Scalar::from_coeffs(f, a)
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_rational() && other.is_rational() {
            return Scalar::from_rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if self.is_rational() || other.is_rational() {
            let (r, e) = if self.is_rational() { (self, other) } else { (other, self) };
            let c = &r.coeffs[0];
            return Scalar::from_coeffs(e.field, e.coeffs.iter().map(|x| x * c).collect());
        }
        let f = self.common_field(other);
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Scalar::from_coeffs(f, prod)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Scalar::from_rational(self.coeffs[0].recip()));
        }
        // Solve (self * x) = 1 through the multiplication matrix.
        let f = self.field;
        let d = f.degree();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut basis = vec![BigRational::zero(); d];
            basis[j] = BigRational::one();
            let prod = self.mul_ref(&Scalar::from_coeffs(f, basis));
            cols.push(prod.padded(d));
        }
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let pivot = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &pivot;
            }
            for r in 0..d {
                if r != c && !a[r][c].is_zero() {
                    let factor = a[r][c].clone();
                    let pivot_row = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x -= &factor * y;
                    }
                }
            }
        }
        Some(Scalar::from_coeffs(f, a.into_iter().map(|r| r[d].clone()).collect()))
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_rational() {
            let c = &self.coeffs[0];
            return if c.is_zero() {
                0
            } else if c.is_positive() {
                1
            } else {
                -1
            };
        }
        // Fast path: floating evaluation with a generous error bound.
        let t = self.field.generator_approx();
        let mut val = 0.0f64;
        let mut mag = 0.0f64;
        let mut pw = 1.0f64;
        let mut finite = true;
        for c in &self.coeffs {
            match c.to_f64() {
                Some(x) if x.is_finite() => {
                    val += x * pw;
                    mag += x.abs() * pw;
                }
                _ => finite = false,
            }
            pw *= t;
        }
        if finite && val.abs() > 1e-9 * mag + 1e-300 {
            return if val > 0.0 { 1 } else { -1 };
        }
        self.exact_signum()
    }

    fn exact_signum(&self) -> i32 {
        let (lo0, hi0) = self.field.isolating_interval();
        let mut lo = lo0.clone();
        let mut hi = hi0.clone();
        let sign_lo = self.field.eval_min_poly(&lo).signum();
        loop {
            let (a, b) = self.interval_eval(&lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            let pm = self.field.eval_min_poly(&mid);
            if pm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Bounds of the polynomial value over `[lo, hi]` with `0 < lo`.
    fn interval_eval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut plo = BigRational::one();
        let mut phi = BigRational::one();
        for c in &self.coeffs {
            if c.is_positive() {
                a += c * &plo;
                b += c * &phi;
            } else {
                a += c * &phi;
                b += c * &plo;
            }
            plo *= lo;
            phi *= hi;
        }
        (a, b)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let t = self.field.generator_approx();
        let mut pw = 1.0;
        let mut acc = 0.0;
        for c in &self.coeffs {
            acc += c.to_f64().unwrap_or(f64::NAN) * pw;
            pw *= t;
        }
        acc
    }

    /// Value of this element under `theta -> x` for a rational `x` (used by
    /// tests comparing against independent evaluations).
    pub fn eval_at(&self, x: &BigRational) -> BigRational {
        eval_poly(&self.coeffs, x)
    }

    /// `2cos(k*pi/L)` inside the field of parameter `L`.
    pub fn two_cos(field: &'static Field, k: u32) -> Scalar {
        if field.is_rational() {
            let v = (2.0 * (std::f64::consts::PI * k as f64).cos()).round() as i64;
            return Scalar::from_int(v);
        }
        Scalar::from_coeffs(field, super::field::chebyshev_value(k))
    }

    /// `2cos(pi/m)` in the field of parameter `l`, which must be a multiple of `m`.
    pub fn two_cos_pi_over(m: u32, l: u32) -> crate::error::Result<Scalar> {
        assert!(l.is_multiple_of(m), "{m} does not divide {l}");
        let f = field_for(l)?;
        Ok(Self::two_cos(f, l / m))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.is_rational() || self.field == other.field)
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.coeffs[0].cmp(&other.coeffs[0]);
        }
        (self - other).signum().cmp(&0)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t{}", self.field.m())?,
                _ => write!(f, "({c})*t{}^{i}", self.field.m())?,
            }
        }
        Ok(())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_rational() {
            return serializer.serialize_str(&self.coeffs[0].to_string());
        }
        #[derive(Serialize)]
        struct FieldTag {
            m: u32,
        }
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("field", &FieldTag { m: self.field.m() })?;
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&-b));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.mul_ref(&b.inv().expect("division by zero")));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(&-rhs);
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::field::field_for;
    use proptest::prelude::*;

    fn golden() -> Scalar {
        Scalar::generator(field_for(5).unwrap())
    }

    #[test]
    fn golden_ratio_identity() {
        let t = golden();
        let v = &t * &t - &t - Scalar::one();
        assert!(v.is_zero());
        assert_eq!(v.signum(), 0);
    }

    #[test]
    fn rational_collapse() {
        let t = golden();
        let v = &t - &t + Scalar::from_int(3);
        assert!(v.is_rational());
        assert_eq!(v, Scalar::from_int(3));
    }

    #[test]
    fn heptagon_inverse() {
        let f = field_for(7).unwrap();
        let t = Scalar::generator(f);
        let x = &t * &t - Scalar::from_int(2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn near_cancellation_sign() {
        // theta ~ 1.6180339887498949 for m = 5; 1618033988749895/10^15 is slightly above.
        let t = golden();
        let r = Scalar::from_ratio(1618033988749895, 1_000_000_000_000_000);
        assert_eq!((&t - &r).signum(), -1);
        let r2 = Scalar::from_ratio(1618033988749894, 1_000_000_000_000_000);
        assert_eq!((&t - &r2).signum(), 1);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(Scalar::parse_rational("3/6").unwrap(), Scalar::from_ratio(1, 2));
        assert_eq!(Scalar::parse_rational("-1.25").unwrap(), Scalar::from_ratio(-5, 4));
        assert_eq!(Scalar::parse_rational("7").unwrap(), Scalar::from_int(7));
        assert!(Scalar::parse_rational("1/0").is_none());
        assert!(Scalar::parse_rational("x").is_none());
    }

    #[test]
    fn serialization() {
        assert_eq!(serde_json::to_string(&Scalar::from_ratio(-2, 4)).unwrap(), "\"-1/2\"");
        let s = serde_json::to_string(&golden()).unwrap();
        assert_eq!(s, r#"{"field":{"m":5},"coeffs":["0","1"]}"#);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (prop::bool::ANY, prop::collection::vec((-20i64..20, 1i64..6), 3)).prop_map(|(ext, v)| {
            let f = if ext { field_for(7).unwrap() } else { rationals() };
            let coeffs = v.into_iter().map(|(p, q)| BigRational::new(p.into(), q.into())).collect();
            Scalar::from_coeffs(f, coeffs)
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn sign_is_multiplicative(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a * &b).signum(), a.signum() * b.signum());
            prop_assert_eq!(a.signum() == 0, a.is_zero());
            let approx = a.to_f64();
            if approx.abs() > 1e-6 {
                prop_assert_eq!(a.signum(), if approx > 0.0 { 1 } else { -1 });
            }
        }
    }
}
