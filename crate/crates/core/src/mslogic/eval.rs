//! Brute-force semantics for formulas.
//!
//! Formulas are compiled into a [`Program`]: a hash-consed DAG in which each
//! run of like quantifiers becomes one existential chain over a list of
//! conjuncts (universal chains are negated existential chains). Each conjunct
//! is tested as soon as the last chain variable it mentions is bound. An
//! [`Evaluator`] runs a program on one graph and memoizes chains that bind a
//! set variable, keyed by the values of their free variables. When a group of
//! conjuncts mentions only chain variables, their satisfying tuples are listed
//! once per graph and reused on every later visit.
//!
//! Vertex variables hold positions in the graph, set variables hold position
//! masks, and enumeration runs in ascending order of both, which is the
//! lexicographic order used by selection.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::formula::{Assignment, Formula, Kind, Value, Var};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

/// Default cap on |V| for set-quantifier enumeration.
pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 8;

/// Largest graph any evaluator accepts, whatever limit is requested.
const HARD_LIMIT: usize = 20;

type NodeId = u32;
type Slot = u32;
type Key = SmallVec<[u64; 8]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Eq(Slot, Slot),
    In(Slot, Slot),
    Adj(Slot, Slot),
    Even(Slot),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Exists(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ChainKey {
    vars: Vec<(Slot, Kind)>,
    conjuncts: Vec<NodeId>,
    open: bool,
}

#[derive(Clone, Debug)]
struct ChainVar {
    slot: Slot,
    kind: Kind,
    /// Some conjunct mentions the variable.
    used: bool,
}

#[derive(Clone, Debug)]
struct Listing {
    /// Chain over the prefix variables whose conjuncts are the closed ones.
    chain: u32,
    prefix: usize,
    /// Remaining conjuncts that only mention prefix variables.
    after: Vec<NodeId>,
}

#[derive(Clone, Debug)]
struct Chain {
    vars: Vec<ChainVar>,
    /// Conjuncts without chain variables.
    pre: Vec<NodeId>,
    /// levels[i]: conjuncts whose last chain variable is vars[i].
    levels: Vec<Vec<NodeId>>,
    listing: Option<Listing>,
    free: Vec<Slot>,
    memo: bool,
    /// Enumerate every value of unused variables (selection and listing).
    open: bool,
}

/// A compiled formula with its free variables in name order.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: NodeId,
    free: Vec<(Var, Slot)>,
}

impl Compiled {
    pub fn free_vars(&self) -> impl Iterator<Item = &Var> {
        self.free.iter().map(|(v, _)| v)
    }
}

/// A formula with some free variables left open for enumeration.
#[derive(Clone, Debug)]
pub struct OpenQuery {
    chain: u32,
    open: Vec<(Var, Slot)>,
    fixed: Vec<(Var, Slot)>,
}

/// Arena of hash-consed compiled nodes shared by any number of formulas.
#[derive(Debug, Default)]
pub struct Program {
    nodes: Vec<Node>,
    free: Vec<Vec<Slot>>,
    /// 0 for atoms, 1 for quantifier-free composites, 2 once a chain is inside.
    cost: Vec<u8>,
    interned: FxHashMap<Node, NodeId>,
    chains: Vec<Chain>,
    chain_index: FxHashMap<ChainKey, u32>,
    slots: FxHashMap<(String, Kind), Slot>,
}

fn union(a: &[Slot], b: &[Slot]) -> Vec<Slot> {
    let mut v: Vec<Slot> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Disjuncts of `f` with nested disjunctions flattened.
fn flat_or(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Or(ds) => ds.iter().flat_map(flat_or).collect(),
        _ => vec![f],
    }
}

impl Program {
    pub fn new() -> Program {
        Program::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn slot(&mut self, name: &str, kind: Kind) -> Slot {
        let next = self.slots.len() as Slot;
        *self.slots.entry((name.to_string(), kind)).or_insert(next)
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let (free, cost) = match &node {
            Node::Const(_) => (vec![], 0),
            Node::Eq(a, b) | Node::In(a, b) | Node::Adj(a, b) => (union(&[*a], &[*b]), 0),
            Node::Even(s) => (vec![*s], 0),
            Node::Not(c) => (self.free[*c as usize].clone(), self.cost[*c as usize].max(1)),
            Node::And(cs) | Node::Or(cs) => {
                let mut f = Vec::new();
                let mut k = 1;
                for &c in cs {
                    f = union(&f, &self.free[c as usize]);
                    k = k.max(self.cost[c as usize]);
                }
                (f, k)
            }
            Node::Exists(ci) => (self.chains[*ci as usize].free.clone(), 2),
        };
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.free.push(free);
        self.cost.push(cost);
        self.interned.insert(node, id);
        id
    }

    fn constant(&self, id: NodeId) -> Option<bool> {
        match self.nodes[id as usize] {
            Node::Const(b) => Some(b),
            _ => None,
        }
    }

    fn neg(&mut self, id: NodeId) -> NodeId {
        match self.nodes[id as usize] {
            Node::Not(c) => c,
            Node::Const(b) => self.intern(Node::Const(!b)),
            _ => self.intern(Node::Not(id)),
        }
    }

    /// Conjuncts of a compiled node, nested conjunctions flattened.
    fn conjuncts_of(&self, id: NodeId, out: &mut Vec<NodeId>) {
        match &self.nodes[id as usize] {
            Node::And(cs) => cs.iter().for_each(|&c| self.conjuncts_of(c, out)),
            _ => out.push(id),
        }
    }

    fn sort_by_cost(&self, ids: &mut [NodeId]) {
        ids.sort_by_key(|&i| self.cost[i as usize]);
    }

    fn mk_junction(&mut self, is_and: bool, parts: Vec<NodeId>) -> NodeId {
        let mut flat = Vec::new();
        for p in parts {
            match (&self.nodes[p as usize], is_and) {
                (Node::And(cs), true) | (Node::Or(cs), false) => flat.extend(cs.iter().copied()),
                (Node::Const(b), _) if *b == is_and => {}
                (Node::Const(_), _) => return self.intern(Node::Const(!is_and)),
                _ => flat.push(p),
            }
        }
        let mut seen = BTreeSet::new();
        flat.retain(|x| seen.insert(*x));
        self.sort_by_cost(&mut flat);
        match flat.len() {
            0 => self.intern(Node::Const(is_and)),
            1 => flat[0],
            _ => self.intern(if is_and { Node::And(flat) } else { Node::Or(flat) }),
        }
    }

    fn compile_node(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::VarEq(x, y) => {
                let (a, b) = (self.slot(x, Kind::Vertex), self.slot(y, Kind::Vertex));
                self.intern(Node::Eq(a, b))
            }
            Formula::Member(x, s) => {
                let (a, b) = (self.slot(x, Kind::Vertex), self.slot(s, Kind::Set));
                self.intern(Node::In(a, b))
            }
            Formula::Adj(x, y) => {
                let (a, b) = (self.slot(x, Kind::Vertex), self.slot(y, Kind::Vertex));
                self.intern(Node::Adj(a, b))
            }
            Formula::Even(s) => {
                let a = self.slot(s, Kind::Set);
                self.intern(Node::Even(a))
            }
            Formula::Not(g) => {
                let c = self.compile_node(g);
                self.neg(c)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let parts = gs.iter().map(|g| self.compile_node(g)).collect();
                self.mk_junction(matches!(f, Formula::And(_)), parts)
            }
            Formula::Exists(..) | Formula::Forall(..) => {
                let is_exists = matches!(f, Formula::Exists(..));
                let mut vars: Vec<Var> = Vec::new();
                let mut body = f;
                loop {
                    match (body, is_exists) {
                        (Formula::Exists(v, b), true) | (Formula::Forall(v, b), false)
                            if !vars.iter().any(|w| w.name == v.name) =>
                        {
                            vars.push(v.clone());
                            body = b;
                        }
                        _ => break,
                    }
                }
                let vs: Vec<(Slot, Kind)> = vars.iter().map(|v| (self.slot(&v.name, v.kind), v.kind)).collect();
                if is_exists {
                    let b = self.compile_node(body);
                    let mut cs = Vec::new();
                    self.conjuncts_of(b, &mut cs);
                    self.exists_chain(vs, cs, false)
                } else {
                    self.forall_chain(&vs, body)
                }
            }
        }
    }

    /// ∀vars: body, split over conjunctions and compiled as ¬∃vars: ¬body.
    fn forall_chain(&mut self, vars: &[(Slot, Kind)], body: &Formula) -> NodeId {
        if let Formula::And(cs) = body {
            let parts = cs.iter().map(|c| self.forall_chain(vars, c)).collect();
            return self.mk_junction(true, parts);
        }
        let ds = flat_or(body);
        let ands: Vec<usize> = (0..ds.len()).filter(|&i| matches!(ds[i], Formula::And(_))).collect();
        if ands.len() == 1 && ds.len() > 1 {
            // ∀(p ∨ (a ∧ b)) = ∀(p ∨ a) ∧ ∀(p ∨ b).
            let Formula::And(cs) = ds[ands[0]] else { unreachable!() };
            let others: Vec<Formula> = (0..ds.len()).filter(|&i| i != ands[0]).map(|i| ds[i].clone()).collect();
            let parts = cs
                .iter()
                .map(|c| {
                    let mut d = others.clone();
                    d.push(c.clone());
                    self.forall_chain(vars, &Formula::Or(d))
                })
                .collect();
            return self.mk_junction(true, parts);
        }
        let mut cs = Vec::new();
        for d in ds {
            let c = match d {
                Formula::Not(e) => self.compile_node(e),
                _ => {
                    let x = self.compile_node(d);
                    self.neg(x)
                }
            };
            self.conjuncts_of(c, &mut cs);
        }
        let ex = self.exists_chain(vars.to_vec(), cs, false);
        self.neg(ex)
    }

    fn exists_chain(&mut self, vars: Vec<(Slot, Kind)>, conjuncts: Vec<NodeId>, open: bool) -> NodeId {
        let mut cs = Vec::new();
        for c in conjuncts {
            match self.constant(c) {
                Some(true) => {}
                Some(false) if !open => return self.intern(Node::Const(false)),
                _ => cs.push(c),
            }
        }
        let mut seen = BTreeSet::new();
        cs.retain(|x| seen.insert(*x));
        let ci = self.chain(vars, cs, open, !open);
        self.intern(Node::Exists(ci))
    }

    fn chain(&mut self, vars: Vec<(Slot, Kind)>, conjuncts: Vec<NodeId>, open: bool, allow_listing: bool) -> u32 {
        let key = ChainKey { vars: vars.clone(), conjuncts: conjuncts.clone(), open };
        if let Some(&ci) = self.chain_index.get(&key) {
            return ci;
        }
        let index_of = |s: Slot| vars.iter().position(|v| v.0 == s);
        let mut pre = Vec::new();
        let mut levels = vec![Vec::new(); vars.len()];
        let mut used = vec![false; vars.len()];
        let mut free = Vec::new();
        let mut level_of = Vec::new();
        for &c in &conjuncts {
            let mut last = None;
            for &s in &self.free[c as usize] {
                match index_of(s) {
                    Some(i) => {
                        used[i] = true;
                        last = last.max(Some(i));
                    }
                    None => free = union(&free, &[s]),
                }
            }
            level_of.push(last);
            match last {
                Some(i) => levels[i].push(c),
                None => pre.push(c),
            }
        }
        let closed: Vec<usize> = (0..conjuncts.len())
            .filter(|&k| level_of[k].is_some() && self.free[conjuncts[k] as usize].iter().all(|&s| index_of(s).is_some()))
            .collect();
        let mut listing = None;
        if allow_listing && closed.iter().any(|&k| self.cost[conjuncts[k] as usize] == 2) {
            let prefix = closed.iter().map(|&k| level_of[k].unwrap()).max().unwrap() + 1;
            let closed_ids: Vec<NodeId> = closed.iter().map(|&k| conjuncts[k]).collect();
            let mut after: Vec<NodeId> = (0..conjuncts.len())
                .filter(|k| !closed.contains(k) && level_of[*k].is_some_and(|l| l < prefix))
                .map(|k| conjuncts[k])
                .collect();
            self.sort_by_cost(&mut after);
            let sub = self.chain(vars[..prefix].to_vec(), closed_ids, true, false);
            listing = Some(Listing { chain: sub, prefix, after });
            for level in levels.iter_mut().take(prefix) {
                level.clear();
            }
        }
        for level in levels.iter_mut() {
            self.sort_by_cost(level);
        }
        self.sort_by_cost(&mut pre);
        let chain = Chain {
            vars: vars
                .iter()
                .zip(&used)
                .map(|(&(slot, kind), &used)| ChainVar { slot, kind, used })
                .collect(),
            pre,
            levels,
            listing,
            free,
            memo: !open && vars.iter().any(|v| v.1 == Kind::Set),
            open,
        };
        let ci = self.chains.len() as u32;
        self.chains.push(chain);
        self.chain_index.insert(key, ci);
        ci
    }

    /// Compiles a formula after checking that its variables are used consistently.
    pub fn compile(&mut self, f: &Formula) -> Result<Compiled> {
        let free = f.free_vars()?;
        let root = self.compile_node(f);
        let free = free
            .into_iter()
            .map(|(name, kind)| {
                let s = self.slot(&name, kind);
                (Var { name, kind }, s)
            })
            .collect();
        Ok(Compiled { root, free })
    }

    /// Compiles `f` for enumeration over the free variables in `open`, which
    /// are bound in name order; the remaining free variables must be supplied.
    pub fn compile_open(&mut self, f: &Formula, open: &BTreeSet<String>) -> Result<OpenQuery> {
        let free = f.free_vars()?;
        if let Some(name) = open.iter().find(|n| !free.contains_key(*n)) {
            return Err(Error::InvalidAssignment(format!("`{name}` is not a free variable")));
        }
        let mut open_vars = Vec::new();
        let mut fixed = Vec::new();
        for (name, kind) in free {
            let s = self.slot(&name, kind);
            let entry = (Var { name: name.clone(), kind }, s);
            if open.contains(&name) {
                open_vars.push(entry);
            } else {
                fixed.push(entry);
            }
        }
        let root = self.compile_node(f);
        let mut cs = Vec::new();
        self.conjuncts_of(root, &mut cs);
        let vars = open_vars.iter().map(|(v, s)| (*s, v.kind)).collect();
        let chain = self.chain(vars, cs, true, false);
        Ok(OpenQuery { chain, open: open_vars, fixed })
    }
}

fn decode(labels: &[u32], kind: Kind, x: u64) -> Value {
    match kind {
        Kind::Vertex => Value::Vertex(labels[x as usize]),
        Kind::Set => Value::Set(bits(x).map(|p| labels[p]).collect()),
    }
}

/// Runs compiled formulas on one graph.
pub struct Evaluator<'p> {
    prog: &'p Program,
    graph: Graph,
    n: usize,
    labels: Vec<u32>,
    rows: Vec<u64>,
    slots: Vec<u64>,
    memo: Vec<FxHashMap<Key, bool>>,
    listings: Vec<Option<Rc<Vec<u64>>>>,
}

impl<'p> Evaluator<'p> {
    pub fn new(prog: &'p Program, g: &Graph) -> Result<Evaluator<'p>> {
        Evaluator::with_limit(prog, g, DEFAULT_BRUTEFORCE_LIMIT)
    }

    pub fn with_limit(prog: &'p Program, g: &Graph, limit: usize) -> Result<Evaluator<'p>> {
        let limit = limit.min(HARD_LIMIT);
        if g.len() > limit {
            return Err(Error::LimitExceeded {
                what: "brute-force evaluation vertex count",
                actual: g.len(),
                limit,
            });
        }
        Ok(Evaluator {
            prog,
            graph: g.clone(),
            n: g.len(),
            labels: g.vertices().to_vec(),
            rows: g.rows().to_vec(),
            slots: vec![0; prog.slots.len()],
            memo: vec![FxHashMap::default(); prog.chains.len()],
            listings: vec![None; prog.chains.len()],
        })
    }

    /// The graph this evaluator runs on.
    pub fn graph(&self) -> Graph {
        self.graph.clone()
    }

    fn encode(&self, var: &Var, val: &Value) -> Result<u64> {
        if val.kind() != var.kind {
            return Err(Error::KindMismatch {
                name: var.name.clone(),
                expected: var.kind.name(),
                found: val.kind().name(),
            });
        }
        let pos = |v: u32| {
            self.labels
                .binary_search(&v)
                .map_err(|_| Error::InvalidAssignment(format!("`{}` mentions vertex {v} outside the graph", var.name)))
        };
        match val {
            Value::Vertex(v) => Ok(pos(*v)? as u64),
            Value::Set(s) => s.iter().try_fold(0u64, |m, &v| Ok(m | 1 << pos(v)?)),
        }
    }

    fn bind(&mut self, vars: &[(Var, Slot)], a: &Assignment, exact: bool) -> Result<()> {
        for (var, slot) in vars {
            let val = a.get(&var.name).ok_or_else(|| Error::UnboundVariable(var.name.clone()))?;
            self.slots[*slot as usize] = self.encode(var, val)?;
        }
        if exact && a.0.len() != vars.len() {
            let extra = a.0.keys().find(|k| !vars.iter().any(|(v, _)| &v.name == *k));
            return Err(Error::InvalidAssignment(format!(
                "`{}` is not a free variable of the formula",
                extra.map_or("?", String::as_str)
            )));
        }
        Ok(())
    }

    /// Truth value of `c` under `a`, which must assign exactly its free variables.
    pub fn evaluate(&mut self, c: &Compiled, a: &Assignment) -> Result<bool> {
        self.bind(&c.free, a, true)?;
        Ok(self.eval(c.root))
    }

    /// Calls `f` on each satisfying completion of `fixed`, in lexicographic
    /// order of the open variables (by name; vertices by label, sets by
    /// ascending bitmask over the sorted labels). `f` returns true to stop.
    pub fn for_each<F: FnMut(Assignment) -> bool>(&mut self, q: &OpenQuery, fixed: &Assignment, mut f: F) -> Result<()> {
        self.bind(&q.fixed, fixed, false)?;
        if let Some(k) = fixed.0.keys().find(|k| !q.fixed.iter().any(|(v, _)| &v.name == *k)) {
            return Err(Error::InvalidAssignment(format!("`{k}` is not a fixed free variable")));
        }
        let open: Vec<(Var, usize)> = q.open.iter().map(|(v, s)| (v.clone(), *s as usize)).collect();
        let labels = self.labels.clone();
        self.run_chain(q.chain, &mut |slots| {
            let mut a = fixed.clone();
            for (var, s) in &open {
                a.0.insert(var.name.clone(), decode(&labels, var.kind, slots[*s]));
            }
            f(a)
        });
        Ok(())
    }

    /// First satisfying completion in lexicographic order.
    pub fn select(&mut self, q: &OpenQuery, fixed: &Assignment) -> Result<Option<Assignment>> {
        self.bind(&q.fixed, fixed, false)?;
        let open: Vec<(Var, usize)> = q.open.iter().map(|(v, s)| (v.clone(), *s as usize)).collect();
        let mut first: Option<Vec<u64>> = None;
        self.run_chain(q.chain, &mut |slots| {
            first = Some(open.iter().map(|(_, s)| slots[*s]).collect());
            true
        });
        Ok(first.map(|vals| {
            let mut a = fixed.clone();
            for ((var, _), x) in open.iter().zip(vals) {
                a.0.insert(var.name.clone(), decode(&self.labels, var.kind, x));
            }
            a
        }))
    }

    fn eval(&mut self, id: NodeId) -> bool {
        let prog = self.prog;
        match &prog.nodes[id as usize] {
            Node::Const(b) => *b,
            Node::Eq(a, b) => self.slots[*a as usize] == self.slots[*b as usize],
            Node::In(x, s) => self.slots[*s as usize] >> self.slots[*x as usize] & 1 == 1,
            Node::Adj(a, b) => self.rows[self.slots[*a as usize] as usize] >> self.slots[*b as usize] & 1 == 1,
            Node::Even(s) => self.slots[*s as usize].count_ones() % 2 == 0,
            Node::Not(c) => !self.eval(*c),
            Node::And(cs) => cs.iter().all(|&c| self.eval(c)),
            Node::Or(cs) => cs.iter().any(|&c| self.eval(c)),
            Node::Exists(ci) => self.eval_chain(*ci),
        }
    }

    fn eval_chain(&mut self, ci: u32) -> bool {
        let c = &self.prog.chains[ci as usize];
        let key: Option<Key> = c.memo.then(|| c.free.iter().map(|&s| self.slots[s as usize]).collect());
        if let Some(k) = &key {
            if let Some(&b) = self.memo[ci as usize].get(k) {
                return b;
            }
        }
        let saved: Key = c.vars.iter().map(|v| self.slots[v.slot as usize]).collect();
        let r = self.run_chain(ci, &mut |_| true);
        for (v, x) in c.vars.iter().zip(saved) {
            self.slots[v.slot as usize] = x;
        }
        if let Some(k) = key {
            self.memo[ci as usize].insert(k, r);
        }
        r
    }

    fn listing(&mut self, ci: u32) -> Rc<Vec<u64>> {
        if let Some(l) = &self.listings[ci as usize] {
            return l.clone();
        }
        let c = &self.prog.chains[ci as usize];
        let saved: Key = c.vars.iter().map(|v| self.slots[v.slot as usize]).collect();
        let idx: Vec<usize> = c.vars.iter().map(|v| v.slot as usize).collect();
        let mut out = Vec::new();
        self.run_chain(ci, &mut |slots| {
            out.extend(idx.iter().map(|&i| slots[i]));
            false
        });
        for (v, x) in c.vars.iter().zip(saved) {
            self.slots[v.slot as usize] = x;
        }
        let out = Rc::new(out);
        self.listings[ci as usize] = Some(out.clone());
        out
    }

    /// Enumerates satisfying bindings of the chain; true if `f` asked to stop.
    fn run_chain(&mut self, ci: u32, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        let prog = self.prog;
        let c = &prog.chains[ci as usize];
        for &k in &c.pre {
            if !self.eval(k) {
                return false;
            }
        }
        match &c.listing {
            Some(l) => {
                let tuples = self.listing(l.chain);
                for t in tuples.chunks(l.prefix) {
                    for (v, &x) in c.vars.iter().zip(t) {
                        self.slots[v.slot as usize] = x;
                    }
                    if l.after.iter().all(|&k| self.eval(k)) && self.descend(c, l.prefix, f) {
                        return true;
                    }
                }
                false
            }
            None => self.descend(c, 0, f),
        }
    }

    fn descend(&mut self, c: &'p Chain, i: usize, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        let Some(v) = c.vars.get(i) else {
            return f(&self.slots);
        };
        let dom: u64 = match v.kind {
            Kind::Vertex => self.n as u64,
            Kind::Set => 1 << self.n,
        };
        if !v.used && !c.open {
            // The variable is irrelevant; only the domain being nonempty matters.
            if dom == 0 {
                return false;
            }
            self.slots[v.slot as usize] = 0;
            return self.descend(c, i + 1, f);
        }
        for x in 0..dom {
            self.slots[v.slot as usize] = x;
            if c.levels[i].iter().all(|&k| self.eval(k)) && self.descend(c, i + 1, f) {
                return true;
            }
        }
        false
    }
}

/// Whether `g` satisfies `f` under `a`.
pub fn evaluate(g: &Graph, f: &Formula, a: &Assignment) -> Result<bool> {
    let mut prog = Program::new();
    let c = prog.compile(f)?;
    Evaluator::new(&prog, g)?.evaluate(&c, a)
}

fn open_names(f: &Formula, partial: &Assignment) -> Result<BTreeSet<String>> {
    Ok(f.free_vars()?
        .into_keys()
        .filter(|n| partial.get(n).is_none())
        .collect())
}

/// Lexicographically first assignment extending `partial` that satisfies `f`.
pub fn selection_bruteforce(g: &Graph, f: &Formula, partial: &Assignment) -> Result<Option<Assignment>> {
    let mut prog = Program::new();
    let q = prog.compile_open(f, &open_names(f, partial)?)?;
    let mut ev = Evaluator::new(&prog, g)?;
    ev.select(&q, partial)
}

/// Every satisfying extension of `partial`, in lexicographic order.
pub fn list_bruteforce(g: &Graph, f: &Formula, partial: &Assignment) -> Result<Vec<Assignment>> {
    let mut prog = Program::new();
    let q = prog.compile_open(f, &open_names(f, partial)?)?;
    let mut out = Vec::new();
    Evaluator::new(&prog, g)?.for_each(&q, partial, |a| {
        out.push(a);
        false
    })?;
    Ok(out)
}

pub fn count_bruteforce(g: &Graph, f: &Formula, partial: &Assignment) -> Result<u64> {
    let mut prog = Program::new();
    let q = prog.compile_open(f, &open_names(f, partial)?)?;
    let mut n = 0u64;
    Evaluator::new(&prog, g)?.for_each(&q, partial, |_| {
        n += 1;
        false
    })?;
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

/// Satisfying extension of `partial` with the smallest or largest set bound
/// to `var`; ties go to the lexicographically first.
pub fn optimize_bruteforce(
    g: &Graph,
    f: &Formula,
    partial: &Assignment,
    var: &str,
    goal: Goal,
) -> Result<Option<Assignment>> {
    if f.free_vars()?.get(var) != Some(&Kind::Set) {
        return Err(Error::InvalidArgument(format!("`{var}` is not a free set variable")));
    }
    let mut best: Option<(usize, Assignment)> = None;
    for a in list_bruteforce(g, f, partial)? {
        let size = a.set(var).map_or(0, BTreeSet::len);
        let better = match (&best, goal) {
            (None, _) => true,
            (Some((b, _)), Goal::Minimize) => size < *b,
            (Some((b, _)), Goal::Maximize) => size > *b,
        };
        if better {
            best = Some((size, a));
        }
    }
    Ok(best.map(|(_, a)| a))
}

/// Straightforward recursive semantics, used to cross-check the compiled evaluator.
pub fn evaluate_naive(g: &Graph, f: &Formula, a: &Assignment) -> Result<bool> {
    f.free_vars()?;
    a.check_against(g)?;
    let mut env: BTreeMap<String, Value> = a.0.clone();
    naive(g, f, &mut env)
}

fn naive(g: &Graph, f: &Formula, env: &mut BTreeMap<String, Value>) -> Result<bool> {
    let vertex = |env: &BTreeMap<String, Value>, x: &str| match env.get(x) {
        Some(Value::Vertex(v)) => Ok(*v),
        Some(_) => Err(Error::KindMismatch { name: x.into(), expected: "vertex", found: "set" }),
        None => Err(Error::UnboundVariable(x.into())),
    };
    let set = |env: &BTreeMap<String, Value>, x: &str| match env.get(x) {
        Some(Value::Set(s)) => Ok(s.clone()),
        Some(_) => Err(Error::KindMismatch { name: x.into(), expected: "set", found: "vertex" }),
        None => Err(Error::UnboundVariable(x.into())),
    };
    Ok(match f {
        Formula::VarEq(x, y) => vertex(env, x)? == vertex(env, y)?,
        Formula::Member(x, s) => set(env, s)?.contains(&vertex(env, x)?),
        Formula::Adj(x, y) => g.has_edge(vertex(env, x)?, vertex(env, y)?),
        Formula::Even(s) => set(env, s)?.len() % 2 == 0,
        Formula::Not(h) => !naive(g, h, env)?,
        Formula::And(hs) => {
            for h in hs {
                if !naive(g, h, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(hs) => {
            for h in hs {
                if naive(g, h, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(v, h) | Formula::Forall(v, h) => {
            let want = matches!(f, Formula::Exists(..));
            let values: Vec<Value> = match v.kind {
                Kind::Vertex => g.vertices().iter().map(|&x| Value::Vertex(x)).collect(),
                Kind::Set => (0..1u64 << g.len()).map(|m| Value::Set(g.labels_of(m))).collect(),
            };
            let old = env.get(&v.name).cloned();
            let mut result = !want;
            for val in values {
                env.insert(v.name.clone(), val);
                if naive(g, h, env)? == want {
                    result = want;
                    break;
                }
            }
            match old {
                Some(o) => env.insert(v.name.clone(), o),
                None => env.remove(&v.name),
            };
            result
        }
    })
}
