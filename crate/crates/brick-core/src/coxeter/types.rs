//! Named finite types and the Cartan matrices attached to Coxeter matrices.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactnum::{make_field, needs_extension, Field, Matrix, Scalar};

/// Which classical coordinate adapter applies to a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    /// `alpha_p = e_{p+1} - e_p` in `R^{n+1}`.
    A,
    /// `alpha_1 = e_1`, `alpha_{p+1} = e_{p+1} - e_p` in `R^n`.
    B,
}

/// How to describe a finite Coxeter system.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Descriptor {
    Named {
        #[serde(rename = "type")]
        kind: String,
        rank: usize,
        #[serde(default)]
        m: Option<u32>,
    },
    Matrix {
        coxeter_matrix: Vec<Vec<u32>>,
    },
}

impl Descriptor {
    pub fn named(kind: &str, rank: usize) -> Self {
        Descriptor::Named { kind: kind.to_string(), rank, m: None }
    }

    pub fn dihedral(m: u32) -> Self {
        Descriptor::Named { kind: "I".into(), rank: 2, m: Some(m) }
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad group descriptor: {e}")))
    }
}

pub(crate) struct TypeData {
    pub name: String,
    pub coxeter: Vec<Vec<u32>>,
    /// Entries `(s, t, a_st)` overriding the default Cartan entries.
    pub overrides: Vec<(usize, usize, i64)>,
    pub classical: Option<ClassicalKind>,
}

fn chain(n: usize) -> Vec<Vec<u32>> {
    let mut m = vec![vec![2u32; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for i in 0..n.saturating_sub(1) {
        m[i][i + 1] = 3;
        m[i + 1][i] = 3;
    }
    m
}

fn set(m: &mut [Vec<u32>], i: usize, j: usize, v: u32) {
    m[i][j] = v;
    m[j][i] = v;
}

pub(crate) fn type_data(desc: &Descriptor) -> Result<TypeData> {
    match desc {
        Descriptor::Matrix { coxeter_matrix } => Ok(TypeData {
            name: "custom".into(),
            coxeter: coxeter_matrix.clone(),
            overrides: Vec::new(),
            classical: None,
        }),
        Descriptor::Named { kind, rank, m } => named(kind, *rank, *m),
    }
}

fn named(kind: &str, n: usize, dihedral: Option<u32>) -> Result<TypeData> {
    let bad = || Error::UnknownType(format!("{kind}{n}"));
    let k = kind.trim().to_ascii_uppercase();
    let (name, coxeter, overrides, classical) = match k.as_str() {
        "A" if n >= 1 => (format!("A{n}"), chain(n), vec![], Some(ClassicalKind::A)),
        "B" if n >= 2 => {
            let mut m = chain(n);
            set(&mut m, 0, 1, 4);
            (format!("B{n}"), m, vec![(0, 1, -2), (1, 0, -1)], Some(ClassicalKind::B))
        }
        "C" if n >= 2 => {
            let mut m = chain(n);
            set(&mut m, 0, 1, 4);
            (format!("C{n}"), m, vec![(0, 1, -1), (1, 0, -2)], None)
        }
        "D" if n >= 4 => {
            let mut m = chain(n);
            set(&mut m, n - 2, n - 1, 2);
            set(&mut m, n - 3, n - 1, 3);
            (format!("D{n}"), m, vec![], None)
        }
        "E" if (6..=8).contains(&n) => {
            let mut m = vec![vec![2u32; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            set(&mut m, 0, 2, 3);
            set(&mut m, 1, 3, 3);
            for i in 2..n - 1 {
                set(&mut m, i, i + 1, 3);
            }
            (format!("E{n}"), m, vec![], None)
        }
        "F" if n == 4 => {
            let mut m = chain(4);
            set(&mut m, 1, 2, 4);
            ("F4".to_string(), m, vec![(1, 2, -2), (2, 1, -1)], None)
        }
        "G" if n == 2 => {
            let mut m = chain(2);
            set(&mut m, 0, 1, 6);
            ("G2".to_string(), m, vec![(0, 1, -1), (1, 0, -3)], None)
        }
        "H" if n == 3 || n == 4 => {
            let mut m = chain(n);
            set(&mut m, 0, 1, 5);
            (format!("H{n}"), m, vec![], None)
        }
        "I" if n == 2 => {
            let mv = dihedral.ok_or_else(|| Error::InvalidInput("type I needs the parameter m".into()))?;
            if mv < 2 {
                return Err(Error::InvalidCoxeterMatrix(format!("I2({mv})")));
            }
            let mut m = chain(2);
            set(&mut m, 0, 1, mv);
            (format!("I2({mv})"), m, vec![], None)
        }
        _ => return Err(bad()),
    };
    Ok(TypeData { name, coxeter, overrides, classical })
}

/// Validates a Coxeter matrix and returns the Cartan matrix and its field.
///
/// Entries 3, 4, 6 use the integer crystallographic values (the smaller index
/// carries the long coefficient for 4 and 6 unless overridden); 5 and entries
/// from 7 on use the symmetric value `-2cos(pi/m)`.
pub(crate) fn cartan_matrix(
    coxeter: &[Vec<u32>],
    overrides: &[(usize, usize, i64)],
) -> Result<(Matrix, &'static Field)> {
    let n = coxeter.len();
    if n == 0 {
        return Err(Error::InvalidCoxeterMatrix("rank must be positive".into()));
    }
    let mut entries = Vec::new();
    for (i, row) in coxeter.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCoxeterMatrix("matrix is not square".into()));
        }
        for (j, &m) in row.iter().enumerate() {
            if i == j {
                if m != 1 {
                    return Err(Error::InvalidCoxeterMatrix(format!(
                        "diagonal entry ({}, {}) is {m}, expected 1",
                        i + 1,
                        j + 1
                    )));
                }
            } else {
                if m < 2 {
                    return Err(Error::InvalidCoxeterMatrix(format!("entry ({}, {}) is {m} < 2", i + 1, j + 1)));
                }
                if coxeter[j][i] != m {
                    return Err(Error::InvalidCoxeterMatrix("matrix is not symmetric".into()));
                }
                entries.push(m);
            }
        }
    }
    let field = make_field(&entries)?;
    let mut a = Matrix::zeros(n, n);
    for s in 0..n {
        for t in 0..n {
            a[(s, t)] = if s == t {
                Scalar::from_int(2)
            } else {
                let m = coxeter[s][t];
                match m {
                    2 => Scalar::zero(),
                    3 => Scalar::from_int(-1),
                    4 => Scalar::from_int(if s < t { -2 } else { -1 }),
                    6 => Scalar::from_int(if s < t { -3 } else { -1 }),
                    _ => {
                        debug_assert!(needs_extension(m));
                        -Scalar::two_cos_pi_over(m, field.m())?
                    }
                }
            };
        }
    }
    for &(s, t, v) in overrides {
        a[(s, t)] = Scalar::from_int(v);
    }
    Ok((a, field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_json() {
        let d = Descriptor::parse_json(r#"{"type":"A","rank":3}"#).unwrap();
        assert_eq!(d, Descriptor::named("A", 3));
        let d = Descriptor::parse_json(r#"{"coxeter_matrix":[[1,3],[3,1]]}"#).unwrap();
        assert!(matches!(d, Descriptor::Matrix { .. }));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(cartan_matrix(&[vec![1, 1], vec![1, 1]], &[]).is_err());
        assert!(cartan_matrix(&[vec![2, 3], vec![3, 1]], &[]).is_err());
        assert!(cartan_matrix(&[vec![1, 3], vec![4, 1]], &[]).is_err());
    }

    #[test]
    fn h3_cartan_is_symmetric() {
        let td = named("H", 3, None).unwrap();
        let (a, f) = cartan_matrix(&td.coxeter, &td.overrides).unwrap();
        assert_eq!(f.m(), 5);
        assert_eq!(a, a.transpose());
        // a_12 a_21 = 4cos^2(pi/5) = theta^2 = theta + 1
        let prod = &a[(0, 1)] * &a[(1, 0)];
        assert_eq!(prod, Scalar::generator(f) + Scalar::one());
    }

    #[test]
    fn unknown_types() {
        assert!(named("A", 0, None).is_err());
        assert!(named("E", 5, None).is_err());
        assert!(named("Z", 3, None).is_err());
        assert!(named("I", 2, None).is_err());
    }
}
