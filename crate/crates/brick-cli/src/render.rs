//! JSON rendering of exact values. Numbers are `"p/q"` strings unless the
//! float view is requested; vectors switch to classical coordinates when
//! asked for and available.

use brick_core::coxeter::classical::{classical_root, classical_weight, describe_element};
use brick_core::coxeter::{CoxeterSystem, GroupElement, RootId};
use brick_core::exactnum::{Scalar, Vector};
use brick_core::subword::Facet;
use serde_json::{json, Value};

pub struct Render<'a> {
    pub sys: &'a CoxeterSystem,
    pub float: bool,
    pub classical: bool,
}

impl Render<'_> {
    pub fn scalar(&self, x: &Scalar) -> Value {
        if self.float {
            return serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number);
        }
        serde_json::to_value(x).expect("scalars serialize")
    }

    pub fn scalars(&self, xs: &[Scalar]) -> Value {
        Value::Array(xs.iter().map(|x| self.scalar(x)).collect())
    }

    /// A vector in the root span.
    pub fn vector(&self, v: &Vector) -> Value {
        match self.classical.then(|| classical_root(self.sys, v)).flatten() {
            Some(x) => self.scalars(&x),
            None => self.scalars(&v.0),
        }
    }

    /// A vector given with its classical form, when one was computed.
    pub fn vector_with(&self, v: &Vector, classical: Option<Vec<Scalar>>) -> Value {
        match classical.filter(|_| self.classical) {
            Some(x) => self.scalars(&x),
            None => self.scalars(&v.0),
        }
    }

    /// An image `w(omega_s)` of a fundamental weight.
    pub fn weight(&self, v: &Vector, s: usize) -> Value {
        let classical = self.classical.then(|| classical_weight(self.sys, v, s)).flatten();
        self.vector_with(v, classical)
    }

    pub fn root(&self, id: RootId) -> Value {
        self.vector(self.sys.root(id))
    }

    pub fn roots(&self, ids: &[RootId]) -> Value {
        Value::Array(ids.iter().map(|&b| self.root(b)).collect())
    }

    pub fn element(&self, w: &GroupElement) -> Value {
        json!({
            "element": describe_element(self.sys, w),
            "word": self.sys.reduced_word(w).to_one_based(),
        })
    }

    pub fn facet(&self, f: &Facet) -> Value {
        json!(f.to_one_based())
    }
}
