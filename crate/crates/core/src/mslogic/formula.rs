//! Abstract syntax of monadic second-order formulas with a parity atom.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Vertex,
    Set,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Vertex => "vertex",
            Kind::Set => "set",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub kind: Kind,
}

impl Var {
    pub fn vertex(name: impl Into<String>) -> Var {
        Var { name: name.into(), kind: Kind::Vertex }
    }

    pub fn set(name: impl Into<String>) -> Var {
        Var { name: name.into(), kind: Kind::Set }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// x = y on vertex variables.
    VarEq(String, String),
    /// x ∈ X.
    Member(String, String),
    Adj(String, String),
    /// |X| is even.
    Even(String),
    Not(Box<Formula>),
    /// Conjunction; the empty conjunction is true.
    And(Vec<Formula>),
    /// Disjunction; the empty disjunction is false.
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::VarEq(x.into(), y.into())
}

pub fn elem(x: &str, set: &str) -> Formula {
    Formula::Member(x.into(), set.into())
}

pub fn adj(x: &str, y: &str) -> Formula {
    Formula::Adj(x.into(), y.into())
}

pub fn even(set: &str) -> Formula {
    Formula::Even(set.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: Vec<Formula>) -> Formula {
    Formula::And(fs)
}

pub fn or(fs: Vec<Formula>) -> Formula {
    Formula::Or(fs)
}

/// a ⇒ b, written ¬a ∨ b.
pub fn implies(a: Formula, b: Formula) -> Formula {
    or(vec![not(a), b])
}

/// a ⇔ b, written (a ⇒ b) ∧ (b ⇒ a).
pub fn iff(a: Formula, b: Formula) -> Formula {
    and(vec![implies(a.clone(), b.clone()), implies(b, a)])
}

pub fn exists_vertex(x: &str, f: Formula) -> Formula {
    Formula::Exists(Var::vertex(x), Box::new(f))
}

pub fn forall_vertex(x: &str, f: Formula) -> Formula {
    Formula::Forall(Var::vertex(x), Box::new(f))
}

pub fn exists_set(x: &str, f: Formula) -> Formula {
    Formula::Exists(Var::set(x), Box::new(f))
}

pub fn forall_set(x: &str, f: Formula) -> Formula {
    Formula::Forall(Var::set(x), Box::new(f))
}

impl Formula {
    /// Free variables with their kinds; fails if one name is used with both kinds.
    pub fn free_vars(&self) -> Result<BTreeMap<String, Kind>> {
        let mut free = BTreeMap::new();
        self.collect_free(&mut Vec::new(), &mut free)?;
        Ok(free)
    }

    fn collect_free(&self, bound: &mut Vec<Var>, free: &mut BTreeMap<String, Kind>) -> Result<()> {
        let mut use_var = |name: &str, kind: Kind| -> Result<()> {
            let found = bound.iter().rev().find(|v| v.name == name).map(|v| v.kind);
            let actual = match found {
                Some(k) => k,
                None => *free.entry(name.to_string()).or_insert(kind),
            };
            if actual != kind {
                return Err(Error::KindMismatch {
                    name: name.to_string(),
                    expected: kind.name(),
                    found: actual.name(),
                });
            }
            Ok(())
        };
        match self {
            Formula::VarEq(x, y) | Formula::Adj(x, y) => {
                use_var(x, Kind::Vertex)?;
                use_var(y, Kind::Vertex)
            }
            Formula::Member(x, s) => {
                use_var(x, Kind::Vertex)?;
                use_var(s, Kind::Set)
            }
            Formula::Even(s) => use_var(s, Kind::Set),
            Formula::Not(f) => f.collect_free(bound, free),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.collect_free(bound, free)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                let r = f.collect_free(bound, free);
                bound.pop();
                r
            }
        }
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::VarEq(..) | Formula::Member(..) | Formula::Adj(..) | Formula::Even(_) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::VarEq(..) | Formula::Member(..) | Formula::Adj(..) | Formula::Even(_) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut out);
        out
    }

    fn visit_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::VarEq(x, y) | Formula::Adj(x, y) | Formula::Member(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Even(s) => {
                out.insert(s.clone());
            }
            Formula::Not(f) => f.visit_names(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit_names(out)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                out.insert(v.name.clone());
                f.visit_names(out);
            }
        }
    }

    /// Simultaneous capture-avoiding renaming of free variables. A binder
    /// whose name would capture a replacement is renamed with a fresh suffix.
    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Formula {
        let r = |x: &String| map.get(x).cloned().unwrap_or_else(|| x.clone());
        match self {
            Formula::VarEq(x, y) => Formula::VarEq(r(x), r(y)),
            Formula::Member(x, s) => Formula::Member(r(x), r(s)),
            Formula::Adj(x, y) => Formula::Adj(r(x), r(y)),
            Formula::Even(s) => Formula::Even(r(s)),
            Formula::Not(f) => not(f.substitute(map)),
            Formula::And(fs) => and(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Or(fs) => or(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut inner = map.clone();
                inner.remove(&v.name);
                let body_free = f.free_names();
                let captures = inner
                    .iter()
                    .any(|(k, val)| *val == v.name && body_free.contains(k));
                let (var, body) = if captures {
                    let mut avoid = f.all_names();
                    avoid.extend(inner.keys().cloned());
                    avoid.extend(inner.values().cloned());
                    let fresh = fresh_name(&v.name, &avoid);
                    let renamed = f.substitute(&BTreeMap::from([(v.name.clone(), fresh.clone())]));
                    (Var { name: fresh, kind: v.kind }, renamed.substitute(&inner))
                } else {
                    (v.clone(), f.substitute(&inner))
                };
                match self {
                    Formula::Exists(..) => Formula::Exists(var, Box::new(body)),
                    _ => Formula::Forall(var, Box::new(body)),
                }
            }
        }
    }

    /// Free variable names, ignoring kinds.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_names(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_names(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |x: &String| {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        };
        match self {
            Formula::VarEq(x, y) | Formula::Adj(x, y) | Formula::Member(x, y) => {
                add(x);
                add(y);
            }
            Formula::Even(s) => add(s),
            Formula::Not(f) => f.collect_free_names(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free_names(bound, out)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.name.clone());
                f.collect_free_names(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces every `adj(x, y)` atom by `f(x, y)`.
    pub fn map_adj(&self, f: &dyn Fn(&str, &str) -> Formula) -> Formula {
        match self {
            Formula::Adj(x, y) => f(x, y),
            Formula::VarEq(..) | Formula::Member(..) | Formula::Even(_) => self.clone(),
            Formula::Not(g) => not(g.map_adj(f)),
            Formula::And(gs) => and(gs.iter().map(|g| g.map_adj(f)).collect()),
            Formula::Or(gs) => or(gs.iter().map(|g| g.map_adj(f)).collect()),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_adj(f))),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_adj(f))),
        }
    }
}

/// `base` followed by the smallest counter not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded counter")
}

impl fmt::Display for Formula {
    /// Standard logical notation: ∀x:(…), ∃X:(…), ¬, ∧, ∨, x∈X, adj(x,y), Even(X).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::VarEq(x, y) => write!(f, "{x}={y}"),
            Formula::Member(x, s) => write!(f, "{x}∈{s}"),
            Formula::Adj(x, y) => write!(f, "adj({x},{y})"),
            Formula::Even(s) => write!(f, "Even({s})"),
            Formula::Not(g) => write!(f, "¬{g}"),
            Formula::And(gs) | Formula::Or(gs) => {
                let (op, empty) = if matches!(self, Formula::And(_)) { ("∧", "⊤") } else { ("∨", "⊥") };
                if gs.is_empty() {
                    return write!(f, "{empty}");
                }
                write!(f, "(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(v, g) => write!(f, "∃{}:{g}", v.name),
            Formula::Forall(v, g) => write!(f, "∀{}:{g}", v.name),
        }
    }
}

/// Value of a free variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Vertex(Vertex),
    Set(BTreeSet<Vertex>),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Vertex(_) => Kind::Vertex,
            Value::Set(_) => Kind::Set,
        }
    }
}

/// Assignment of values to named variables; as JSON, numbers are vertices and arrays are sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with_vertex(mut self, name: &str, v: Vertex) -> Assignment {
        self.0.insert(name.to_string(), Value::Vertex(v));
        self
    }

    pub fn with_set<I: IntoIterator<Item = Vertex>>(mut self, name: &str, s: I) -> Assignment {
        self.0.insert(name.to_string(), Value::Set(s.into_iter().collect()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        match self.0.get(name) {
            Some(Value::Vertex(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn set(&self, name: &str) -> Option<&BTreeSet<Vertex>> {
        match self.0.get(name) {
            Some(Value::Set(s)) => Some(s),
            _ => None,
        }
    }

    /// Checks that every value lies in V(g) or its power set.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        for (name, val) in &self.0 {
            let ok = match val {
                Value::Vertex(v) => g.contains(*v),
                Value::Set(s) => s.iter().all(|v| g.contains(*v)),
            };
            if !ok {
                return Err(Error::InvalidAssignment(format!(
                    "value of `{name}` mentions a vertex outside the graph"
                )));
            }
        }
        Ok(())
    }
}
