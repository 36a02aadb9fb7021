//! JSON ideal specifications:
//! `{"name", "g", "star", "generators", "resolved", "resolvent", "basepoint": {"m", "matrices"}}`
//! with an optional `"n"` realization-dimension bound.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{IdealError, Parts, RRIdeal};
use crate::matrix::MatrixExact;
use crate::ncpoly::Letter;
use crate::ratexpr::{parse_expression, parse_polynomial};
use crate::realization::{compile, Basepoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasepointSpec {
    pub m: usize,
    pub matrices: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealSpec {
    pub name: String,
    pub g: usize,
    #[serde(default)]
    pub star: bool,
    pub generators: Vec<String>,
    pub resolved: Vec<String>,
    pub resolvent: BTreeMap<String, String>,
    pub basepoint: BasepointSpec,
    #[serde(default)]
    pub n: Option<usize>,
}

fn spec_err(msg: impl Into<String>) -> IdealError {
    IdealError::Spec(msg.into())
}

fn letter(text: &str, g: usize) -> Result<Letter, IdealError> {
    let l = Letter::parse(text).ok_or_else(|| spec_err(format!("bad letter `{text}`")))?;
    if l.index as usize > g {
        return Err(spec_err(format!("letter {l} outside alphabet of size {g}")));
    }
    Ok(l)
}

impl IdealSpec {
    pub fn from_json(text: &str) -> Result<Self, IdealError> {
        serde_json::from_str(text).map_err(|e| spec_err(e.to_string()))
    }

    pub fn build(&self) -> Result<RRIdeal, IdealError> {
        let g = self.g;
        if g == 0 {
            return Err(spec_err("g must be at least 1"));
        }
        let generators = self
            .generators
            .iter()
            .map(|t| parse_polynomial(t, g).map_err(|e| spec_err(format!("generator `{t}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let m = self.basepoint.m;
        let mut pairs = Vec::new();
        for (name, value) in &self.basepoint.matrices {
            let l = letter(name, g)?;
            let a = MatrixExact::from_json(value).map_err(|e| spec_err(format!("matrix for {name}: {e}")))?;
            if a.shape() != (m, m) {
                return Err(spec_err(format!("matrix for {name} is not {m}x{m}")));
            }
            pairs.push((l, a));
        }
        pairs.sort_by_key(|(l, _)| *l);
        let free: BTreeSet<Letter> = pairs.iter().map(|(l, _)| *l).collect();
        let resolved = self.resolved.iter().map(|t| letter(t, g)).collect::<Result<Vec<_>, _>>()?;
        if let Some(both) = resolved.iter().find(|l| free.contains(l)) {
            return Err(spec_err(format!("{both} is both resolved and bound by the base point")));
        }
        let mut resolvent = Vec::new();
        for l in &resolved {
            let text = self
                .resolvent
                .iter()
                .find(|(k, _)| Letter::parse(k) == Some(*l))
                .map(|(_, v)| v)
                .ok_or_else(|| spec_err(format!("no resolvent for {l}")))?;
            let e = parse_expression(text, g).map_err(|err| spec_err(format!("resolvent of {l}: {err}")))?;
            resolvent.push((*l, e));
        }
        if self.resolvent.len() != resolved.len() {
            return Err(spec_err("resolvent keys must match the resolved letters"));
        }
        let basepoint = Basepoint::new(pairs).map_err(|e| spec_err(e.to_string()))?;
        let n = match self.n {
            Some(n) => n,
            None => default_dimension(&resolvent, &basepoint)?,
        };
        RRIdeal::build(Parts {
            name: self.name.clone(),
            kind: None,
            g,
            family_g: g,
            star: self.star,
            generators,
            resolvent,
            basepoint,
            n,
            leaves: None,
        })
    }
}

/// Largest realization dimension among the resolvent entries: the compiled
/// dimension, or the minimal one when `m = 1`.
fn default_dimension(
    resolvent: &[(Letter, crate::ratexpr::RatExpr)],
    bp: &std::sync::Arc<Basepoint>,
) -> Result<usize, IdealError> {
    let mut n = 1;
    for (_, e) in resolvent {
        if resolvent_letters_bound(e, bp) {
            let rep = compile(e, bp)?;
            let dim = if bp.m() == 1 { rep.minimize_scalar().1 } else { rep.dim() };
            n = n.max(dim);
        }
    }
    Ok(n)
}

fn resolvent_letters_bound(e: &crate::ratexpr::RatExpr, bp: &Basepoint) -> bool {
    e.letters().iter().all(|l| bp.index_of(*l).is_some())
}

/// Parses and validates a JSON ideal specification.
pub fn custom_ideal(text: &str) -> Result<RRIdeal, IdealError> {
    IdealSpec::from_json(text)?.build()
}
