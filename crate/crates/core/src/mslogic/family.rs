//! The formulas that express isotropic-system membership, Eulerian vectors
//! and the adjacency of the graph an Eulerian vector describes, plus the
//! vertex-minor formulas assembled from them.
//!
//! Each formula is built once over canonical parameter names and instantiated
//! by capture-avoiding renaming, so two instances with the same arguments are
//! structurally identical.

use std::collections::{BTreeMap, BTreeSet};

use super::formula::*;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Names of the free set variables holding an Eulerian vector.
pub const EULERIAN_VARS: [&str; 3] = ["Xe", "Ye", "Ze"];

/// Free variable standing for target vertex `v` in the vertex-minor formulas.
pub fn vertex_var(v: Vertex) -> String {
    format!("x{v}")
}

fn instantiate(template: Formula, params: &[&str], args: &[&str]) -> Formula {
    assert_eq!(params.len(), args.len(), "arity mismatch");
    let map: BTreeMap<String, String> = params
        .iter()
        .zip(args)
        .filter(|(p, a)| p != a)
        .map(|(p, a)| (p.to_string(), a.to_string()))
        .collect();
    if map.is_empty() {
        template
    } else {
        template.substitute(&map)
    }
}

fn in_any(v: &str, x: &str, y: &str, z: &str) -> Formula {
    or(vec![elem(v, x), elem(v, y), elem(v, z)])
}

/// a ⊆ b, as ∀x:(x∈a ⇒ x∈b).
pub fn subset(a: &str, b: &str) -> Formula {
    let x = fresh_name("x", &BTreeSet::from([a.to_string(), b.to_string()]));
    forall_vertex(&x, implies(elem(&x, a), elem(&x, b)))
}

pub fn disjoint(x: &str, y: &str, z: &str) -> Formula {
    let t = forall_vertex(
        "x",
        and(vec![
            not(and(vec![elem("x", "X"), elem("x", "Y")])),
            not(and(vec![elem("x", "X"), elem("x", "Z")])),
            not(and(vec![elem("x", "Y"), elem("x", "Z")])),
        ]),
    );
    instantiate(t, &["X", "Y", "Z"], &[x, y, z])
}

/// (x, y, z) is a tripartition of V.
pub fn part(x: &str, y: &str, z: &str) -> Formula {
    let t = and(vec![forall_vertex("x", in_any("x", "X", "Y", "Z")), disjoint("X", "Y", "Z")]);
    instantiate(t, &["X", "Y", "Z"], &[x, y, z])
}

/// |N_v ∩ Q| is even.
pub fn even_inter(q: &str, v: &str) -> Formula {
    let t = forall_set(
        "R",
        implies(
            forall_vertex("u", iff(elem("u", "R"), and(vec![adj("u", "v"), elem("u", "Q")]))),
            even("R"),
        ),
    );
    instantiate(t, &["Q", "v"], &[q, v])
}

/// (x, y, z) is a vector of the isotropic system of the graph.
pub fn member(x: &str, y: &str, z: &str) -> Formula {
    let ei = even_inter("Q", "v");
    let in_q = elem("v", "Q");
    let t = and(vec![
        disjoint("X", "Y", "Z"),
        exists_set(
            "Q",
            forall_vertex(
                "v",
                and(vec![
                    implies(and(vec![not(in_q.clone()), not(ei.clone())]), elem("v", "X")),
                    implies(and(vec![in_q.clone(), ei.clone()]), elem("v", "Y")),
                    implies(and(vec![in_q.clone(), not(ei.clone())]), elem("v", "Z")),
                    implies(and(vec![not(in_q), ei]), not(in_any("v", "X", "Y", "Z"))),
                ]),
            ),
        ),
    ]);
    instantiate(t, &["X", "Y", "Z"], &[x, y, z])
}

/// (xe, ye, ze) is an Eulerian vector.
pub fn eul(xe: &str, ye: &str, ze: &str) -> Formula {
    let t = and(vec![
        part("Xe", "Ye", "Ze"),
        forall_set(
            "X",
            forall_set(
                "Y",
                forall_set(
                    "Z",
                    implies(
                        and(vec![
                            subset("X", "Xe"),
                            subset("Y", "Ye"),
                            subset("Z", "Ze"),
                            member("X", "Y", "Z"),
                        ]),
                        forall_vertex("v", not(in_any("v", "X", "Y", "Z"))),
                    ),
                ),
            ),
        ),
    ]);
    instantiate(t, &EULERIAN_VARS, &[xe, ye, ze])
}

/// (x, y, z) is the base vector of v with respect to the Eulerian vector.
pub fn base(x: &str, y: &str, z: &str, xe: &str, ye: &str, ze: &str, v: &str) -> Formula {
    let t = and(vec![
        member("X", "Y", "Z"),
        in_any("v", "X", "Y", "Z"),
        forall_vertex(
            "u",
            implies(
                not(eq("v", "u")),
                and(vec![
                    implies(elem("u", "X"), elem("u", "Xe")),
                    implies(elem("u", "Y"), elem("u", "Ye")),
                    implies(elem("u", "Z"), elem("u", "Ze")),
                ]),
            ),
        ),
    ]);
    instantiate(t, &["X", "Y", "Z", "Xe", "Ye", "Ze", "v"], &[x, y, z, xe, ye, ze, v])
}

/// (u, v) is an edge of the graph the Eulerian vector describes.
pub fn adj_formula(u: &str, v: &str, xe: &str, ye: &str, ze: &str) -> Formula {
    let t = and(vec![
        not(eq("u", "v")),
        exists_set(
            "X",
            exists_set(
                "Y",
                exists_set(
                    "Z",
                    and(vec![base("X", "Y", "Z", "Xe", "Ye", "Ze", "v"), in_any("u", "X", "Y", "Z")]),
                ),
            ),
        ),
    ]);
    instantiate(t, &["u", "v", "Xe", "Ye", "Ze"], &[u, v, xe, ye, ze])
}

/// A member of the built-in family with its parameters in order.
#[derive(Clone, Debug)]
pub struct NamedFormula {
    pub name: &'static str,
    pub params: Vec<Var>,
    pub formula: Formula,
}

/// Disjoint, Part, EvenInter, Member, Eul, Base and Adj over their canonical parameters.
pub fn build_formula_family() -> Vec<NamedFormula> {
    let sets = |ns: &[&str]| ns.iter().map(|n| Var::set(*n)).collect::<Vec<_>>();
    let xyz = sets(&["X", "Y", "Z"]);
    let e = sets(&EULERIAN_VARS);
    vec![
        NamedFormula { name: "Disjoint", params: xyz.clone(), formula: disjoint("X", "Y", "Z") },
        NamedFormula { name: "Part", params: xyz.clone(), formula: part("X", "Y", "Z") },
        NamedFormula {
            name: "EvenInter",
            params: vec![Var::set("Q"), Var::vertex("v")],
            formula: even_inter("Q", "v"),
        },
        NamedFormula { name: "Member", params: xyz.clone(), formula: member("X", "Y", "Z") },
        NamedFormula { name: "Eul", params: e.clone(), formula: eul("Xe", "Ye", "Ze") },
        NamedFormula {
            name: "Base",
            params: [xyz, e.clone(), vec![Var::vertex("v")]].concat(),
            formula: base("X", "Y", "Z", "Xe", "Ye", "Ze", "v"),
        },
        NamedFormula {
            name: "Adj",
            params: [vec![Var::vertex("u"), Var::vertex("v")], e].concat(),
            formula: adj_formula("u", "v", "Xe", "Ye", "Ze"),
        },
    ]
}

/// Looks up a family member by name, ignoring case.
pub fn family_formula(name: &str) -> Option<NamedFormula> {
    build_formula_family().into_iter().find(|f| f.name.eq_ignore_ascii_case(name))
}

/// Adjacency and non-adjacency constraints pinning the induced subgraph on V(h).
fn induced_constraints(h: &Graph) -> Vec<Formula> {
    let vs = h.vertices();
    let [xe, ye, ze] = EULERIAN_VARS;
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            let f = adj_formula(&vertex_var(a), &vertex_var(b), xe, ye, ze);
            out.push(if h.has_edge(a, b) { f } else { not(f) });
        }
    }
    out
}

/// Eulerian vector whose graph induces h on V(h); free variables `x{label}`
/// for the target vertices and the three Eulerian set variables.
pub fn build_vm_prime_formula(h: &Graph) -> Formula {
    let [xe, ye, ze] = EULERIAN_VARS;
    let mut cs = vec![eul(xe, ye, ze)];
    cs.extend(induced_constraints(h));
    and(cs)
}

/// Holds under the identity assignment `x{v} ↦ v` iff h is a vertex-minor.
pub fn build_vm_formula(h: &Graph) -> Formula {
    let [xe, ye, ze] = EULERIAN_VARS;
    exists_set(xe, exists_set(ye, exists_set(ze, build_vm_prime_formula(h))))
}

/// The assignment `x{v} ↦ v` for every target vertex.
pub fn identity_assignment(h: &Graph) -> Assignment {
    h.vertices()
        .iter()
        .fold(Assignment::new(), |a, &v| a.with_vertex(&vertex_var(v), v))
}

/// Renames every binder called `name` to a fresh name.
fn rename_binders(f: &Formula, name: &str, avoid: &BTreeSet<String>) -> Formula {
    match f {
        Formula::Not(g) => not(rename_binders(g, name, avoid)),
        Formula::And(gs) => and(gs.iter().map(|g| rename_binders(g, name, avoid)).collect()),
        Formula::Or(gs) => or(gs.iter().map(|g| rename_binders(g, name, avoid)).collect()),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = rename_binders(g, name, avoid);
            let (var, body) = if v.name == name {
                let fresh = fresh_name(name, avoid);
                let body = body.substitute(&BTreeMap::from([(name.to_string(), fresh.clone())]));
                (Var { name: fresh, kind: v.kind }, body)
            } else {
                (v.clone(), body)
            };
            match f {
                Formula::Exists(..) => Formula::Exists(var, Box::new(body)),
                _ => Formula::Forall(var, Box::new(body)),
            }
        }
        _ => f.clone(),
    }
}

/// Restricts every quantifier of `f` to the set variable `set`: vertex
/// quantifiers to its members, set quantifiers to its subsets. Bound
/// variables named `set` are renamed first; a free occurrence is an error.
pub fn relativize(f: &Formula, set: &str) -> Result<Formula> {
    if f.free_names().contains(set) {
        return Err(Error::InvalidArgument(format!("`{set}` is already free in the formula")));
    }
    let mut avoid = f.all_names();
    avoid.insert(set.to_string());
    let f = rename_binders(f, set, &avoid);
    Ok(relativize_inner(&f, set))
}

fn relativize_inner(f: &Formula, set: &str) -> Formula {
    match f {
        Formula::Not(g) => not(relativize_inner(g, set)),
        Formula::And(gs) => and(gs.iter().map(|g| relativize_inner(g, set)).collect()),
        Formula::Or(gs) => or(gs.iter().map(|g| relativize_inner(g, set)).collect()),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let guard = match v.kind {
                Kind::Vertex => elem(&v.name, set),
                Kind::Set => subset(&v.name, set),
            };
            let body = relativize_inner(g, set);
            match f {
                Formula::Exists(..) => Formula::Exists(v.clone(), Box::new(and(vec![guard, body]))),
                _ => Formula::Forall(v.clone(), Box::new(implies(guard, body))),
            }
        }
        _ => f.clone(),
    }
}

/// Holds for X ↦ U iff some vertex-minor on U satisfies the sentence `phi`.
pub fn build_prop_vm(phi: &Formula) -> Result<Formula> {
    let free = phi.free_vars()?;
    if let Some(name) = free.keys().next() {
        return Err(Error::InvalidArgument(format!("expected a sentence, `{name}` is free")));
    }
    let relative = relativize(phi, "X")?;
    let mut avoid = relative.all_names();
    avoid.insert("X".into());
    let pick = |base: &str, avoid: &mut BTreeSet<String>| {
        let n = if avoid.contains(base) { fresh_name(base, avoid) } else { base.to_string() };
        avoid.insert(n.clone());
        n
    };
    let xe = pick("Xe", &mut avoid);
    let ye = pick("Ye", &mut avoid);
    let ze = pick("Ze", &mut avoid);
    let body = relative.map_adj(&|x, y| adj_formula(x, y, &xe, &ye, &ze));
    Ok(exists_set(&xe, exists_set(&ye, exists_set(&ze, and(vec![eul(&xe, &ye, &ze), body])))))
}

/// The graph is complete: ∀x,y:(¬x=y ⇒ adj(x,y)).
pub fn complete_sentence() -> Formula {
    forall_vertex("x", forall_vertex("y", implies(not(eq("x", "y")), adj("x", "y"))))
}

/// Holds for X ↦ U iff the complete graph on U is a vertex-minor.
pub fn build_complete_vm() -> Formula {
    build_prop_vm(&complete_sentence()).expect("the completeness formula is a sentence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mslogic::eval::{evaluate, Evaluator, Program};

    #[test]
    fn quantifier_rank_table() {
        let ranks: Vec<(&str, usize)> = build_formula_family()
            .iter()
            .map(|f| (f.name, f.formula.quantifier_rank()))
            .collect();
        assert_eq!(
            ranks,
            vec![("Disjoint", 1), ("Part", 1), ("EvenInter", 2), ("Member", 4), ("Eul", 7), ("Base", 4), ("Adj", 7)]
        );
        for h in [Graph::path(&[1, 2, 3]).unwrap(), Graph::edgeless([4]).unwrap()] {
            assert_eq!(build_vm_formula(&h).quantifier_rank(), 10);
        }
    }

    #[test]
    fn parameters_are_the_free_variables() {
        for f in build_formula_family() {
            let free = f.formula.free_vars().unwrap();
            let params: BTreeMap<String, Kind> = f.params.iter().map(|v| (v.name.clone(), v.kind)).collect();
            assert_eq!(free, params, "{}", f.name);
        }
        let h = Graph::path(&[2, 5, 7]).unwrap();
        let names: Vec<String> = build_vm_formula(&h).free_vars().unwrap().into_keys().collect();
        assert_eq!(names, vec!["x2", "x5", "x7"]);
    }

    #[test]
    fn vm_formula_size_is_quadratic() {
        let sizes: Vec<usize> = (1..=6)
            .map(|k| build_vm_formula(&Graph::edgeless(0..k).unwrap()).size())
            .collect();
        let per_pair = sizes[5] - sizes[4];
        // Each pair of target vertices contributes one constant-size conjunct.
        assert_eq!(sizes[4] - sizes[3], per_pair * 4 / 5);
    }

    #[test]
    fn instances_share_structure() {
        assert_eq!(member("X", "Y", "Z"), member("X", "Y", "Z"));
        let a = adj_formula("x1", "x2", "Xe", "Ye", "Ze");
        let b = adj_formula("x1", "x2", "Xe", "Ye", "Ze");
        assert_eq!(a, b);
        // Renaming into a bound name of the template does not capture.
        let c = adj_formula("X", "v", "Xe", "Ye", "Ze");
        assert_eq!(c.free_vars().unwrap().len(), 5);
    }

    #[test]
    fn partition_examples() {
        let g = Graph::cycle(&[0, 1, 2, 3]).unwrap();
        let all = Assignment::new().with_set("X", 0..4).with_set("Y", []).with_set("Z", []);
        assert!(evaluate(&g, &disjoint("X", "Y", "Z"), &all).unwrap());
        assert!(evaluate(&g, &part("X", "Y", "Z"), &all).unwrap());
        let overlap = Assignment::new().with_set("X", [0, 1]).with_set("Y", [1, 2, 3]).with_set("Z", []);
        assert!(!evaluate(&g, &part("X", "Y", "Z"), &overlap).unwrap());
        let missing = Assignment::new().with_set("X", [0]).with_set("Y", [1]).with_set("Z", [2]);
        assert!(evaluate(&g, &disjoint("X", "Y", "Z"), &missing).unwrap());
        assert!(!evaluate(&g, &part("X", "Y", "Z"), &missing).unwrap());
    }

    #[test]
    fn even_inter_counts_neighbors_in_q() {
        let g = Graph::star(0, &[1, 2, 3]).unwrap();
        let f = even_inter("Q", "v");
        for q in 0u64..16 {
            let set: Vec<u32> = (0..4).filter(|i| q >> i & 1 == 1).collect();
            for v in 0..4 {
                let a = Assignment::new().with_set("Q", set.clone()).with_vertex("v", v);
                let count = g.neighbors(v).unwrap().iter().filter(|u| set.contains(u)).count();
                assert_eq!(evaluate(&g, &f, &a).unwrap(), count % 2 == 0);
            }
        }
    }

    #[test]
    fn relativize_scopes() {
        let f = forall_vertex("x", adj("x", "x"));
        assert_eq!(relativize(&f, "S").unwrap(), forall_vertex("x", implies(elem("x", "S"), adj("x", "x"))));
        let e = exists_set("Y", even("Y"));
        let r = relativize(&e, "S").unwrap();
        assert_eq!(r, exists_set("Y", and(vec![subset("Y", "S"), even("Y")])));
        // A binder with the relativizing name is renamed away.
        let clash = exists_set("S", even("S"));
        let r = relativize(&clash, "S").unwrap();
        assert_eq!(r, exists_set("S1", and(vec![subset("S1", "S"), even("S1")])));
        assert!(relativize(&even("S"), "S").is_err());
        // Degenerate sentence: every vertex in S has a self-loop, true iff S is empty.
        let g = Graph::path(&[1, 2]).unwrap();
        let rel = relativize(&f, "S").unwrap();
        assert!(evaluate(&g, &rel, &Assignment::new().with_set("S", [])).unwrap());
        assert!(!evaluate(&g, &rel, &Assignment::new().with_set("S", [1])).unwrap());
    }

    #[test]
    fn complete_vm_matches_merged_form() {
        let [xe, ye, ze] = EULERIAN_VARS;
        let merged = forall_vertex(
            "x",
            forall_vertex(
                "y",
                implies(
                    and(vec![elem("x", "X"), elem("y", "X"), not(eq("x", "y"))]),
                    adj_formula("x", "y", xe, ye, ze),
                ),
            ),
        );
        let merged_form = exists_set(xe, exists_set(ye, exists_set(ze, and(vec![eul(xe, ye, ze), merged]))));
        let ours = build_complete_vm();
        let mut prog = Program::new();
        let a = prog.compile(&ours).unwrap();
        let b = prog.compile(&merged_form).unwrap();
        for g in [
            Graph::path(&[0, 1, 2, 3]).unwrap(),
            Graph::cycle(&[0, 1, 2, 3]).unwrap(),
            Graph::from_edge_list(&[(0, 1), (2, 3)]).unwrap(),
        ] {
            let mut ev = Evaluator::new(&prog, &g).unwrap();
            for m in 0u32..16 {
                let s: Vec<u32> = (0..4).filter(|i| m >> i & 1 == 1).collect();
                let asg = Assignment::new().with_set("X", s);
                assert_eq!(ev.evaluate(&a, &asg).unwrap(), ev.evaluate(&b, &asg).unwrap());
            }
        }
    }

    #[test]
    fn prop_vm_rejects_open_formulas() {
        assert!(build_prop_vm(&adj("x", "y")).is_err());
        let f = build_prop_vm(&exists_vertex("Xe", adj("Xe", "Xe"))).unwrap();
        let free: Vec<String> = f.free_vars().unwrap().into_keys().collect();
        assert_eq!(free, vec!["X"]);
    }
}
