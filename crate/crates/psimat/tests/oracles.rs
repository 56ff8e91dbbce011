//! Brute-force oracles for small derived values, and property tests.

use std::collections::BTreeSet;

use proptest::prelude::*;

use psimat::axioms::{check_axioms, SetSystemPair};
use psimat::corpus;
use psimat::games::induced_matroid;
use psimat::gf::{Field, Subspace, Vector};
use psimat::graphs::Graph;
use psimat::matroid::Matroid;
use psimat::sets::{bits, Mask};
use psimat::tom::{delta_glue, PsiCondition};

fn complete(n: usize) -> Graph {
    let mut g = Graph::new(format!("K{n}"));
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(&i.to_string(), &j.to_string(), None).unwrap();
        }
    }
    g
}

fn bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(format!("K{a}{b}"));
    for i in 0..a {
        for j in 0..b {
            g.add_edge(&format!("x{i}"), &format!("y{j}"), None).unwrap();
        }
    }
    g
}

/// Edge sets that are connected and 2-regular, by checking every subset.
fn brute_cycles(g: &Graph) -> BTreeSet<Mask> {
    let es = g.edges();
    let mut out = BTreeSet::new();
    for s in 1u64..(1 << es.len()) {
        let chosen: Vec<_> = bits(s).map(|i| &es[i]).collect();
        let mut deg = std::collections::BTreeMap::<&str, usize>::new();
        for e in &chosen {
            *deg.entry(&e.u).or_default() += 1;
            *deg.entry(&e.v).or_default() += 1;
        }
        if deg.values().any(|&d| d != 2) {
            continue;
        }
        let verts: BTreeSet<String> = deg.keys().map(|v| v.to_string()).collect();
        let mut h = Graph::new("h");
        for e in &chosen {
            h.add_edge(&e.u, &e.v, Some(&e.label)).unwrap();
        }
        if h.induced(&verts).is_connected() {
            out.insert(s);
        }
    }
    out
}

/// Minimal nonempty edge cuts δ(X), by checking every vertex subset.
fn brute_bonds(g: &Graph) -> BTreeSet<Mask> {
    let vs: Vec<&String> = g.vertices().iter().collect();
    let es = g.edges();
    let mut cuts = BTreeSet::new();
    for x in 1u64..(1 << vs.len()) - 1 {
        let inside = |v: &str| vs.iter().position(|w| *w == v).map(|i| x >> i & 1 == 1).unwrap();
        let cut = es
            .iter()
            .enumerate()
            .filter(|(_, e)| inside(&e.u) != inside(&e.v))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if cut != 0 {
            cuts.insert(cut);
        }
    }
    cuts.iter()
        .copied()
        .filter(|&c| !cuts.iter().any(|&d| d != c && d & c == d))
        .collect()
}

#[test]
fn cycles_and_bonds_match_brute_force() {
    // Frozen from the brute-force oracle.
    let expected = [("K4", 7, 7), ("K5", 37, 15), ("K23", 3, 11), ("K33", 15, 24)];
    let graphs = [complete(4), complete(5), bipartite(2, 3), bipartite(3, 3)];
    for (g, (name, nc, nb)) in graphs.iter().zip(expected) {
        let (_, cycles) = g.cycles().unwrap();
        let (_, bonds) = g.bonds().unwrap();
        let cycles: BTreeSet<Mask> = cycles.into_iter().collect();
        let bonds: BTreeSet<Mask> = bonds.into_iter().collect();
        assert_eq!(cycles, brute_cycles(g), "{name}");
        assert_eq!(bonds, brute_bonds(g), "{name}");
        assert_eq!((cycles.len(), bonds.len()), (nc, nb), "{name}");
    }
}

#[test]
fn spanning_tree_counts() {
    // Cayley: n^(n-2).
    assert_eq!(complete(4).spanning_trees().unwrap().len(), 16);
    assert_eq!(complete(5).spanning_trees().unwrap().len(), 125);
    assert_eq!(bipartite(2, 3).spanning_trees().unwrap().len(), 12);
}

#[test]
fn cycle_matroid_bases_are_spanning_trees() {
    for g in [complete(4), bipartite(2, 3)] {
        let m = g.cycle_matroid().unwrap();
        let bases: BTreeSet<Mask> = m.bases().into_iter().collect();
        let trees: BTreeSet<Mask> = g
            .spanning_trees()
            .unwrap()
            .iter()
            .map(|es| es.iter().fold(0, |m, &i| m | 1 << i))
            .collect();
        assert_eq!(bases, trees, "{}", g.name);
    }
}

#[test]
fn fork_induces_one_circuit_when_all_ends_count() {
    let fork = corpus::presentations().into_iter().find(|p| p.name == "fork").unwrap();
    let all = induced_matroid(&fork.with_psi(&PsiCondition::All).unwrap()).unwrap();
    assert_eq!(all.circuit_sets(), vec![BTreeSet::from(["a".to_string(), "b".to_string()])]);
    let none = induced_matroid(&fork.with_psi(&PsiCondition::None).unwrap()).unwrap();
    assert!(none.circuits().is_empty());
    assert_eq!(none.cocircuits().len(), 2);
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::GF2), Just(Field::GF3)]
}

fn subspace(labels: Vec<String>) -> impl Strategy<Value = Subspace> {
    let n = labels.len();
    (field(), prop::collection::vec(prop::collection::vec(0i64..3, n), 0..=n)).prop_map(move |(f, rows)| {
        let vs: Vec<Vector> = rows
            .iter()
            .map(|r| Vector::new(f, labels.iter().cloned().zip(r.iter().copied())))
            .collect();
        Subspace::rref(f, labels.iter().cloned(), &vs).unwrap()
    })
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_represents_the_dual(u in (1usize..=6).prop_flat_map(|n| subspace(labels("e", n)))) {
        let m = Matroid::from_representation(&u).unwrap();
        let d = Matroid::from_representation(&u.complement()).unwrap();
        let md = m.dual();
        prop_assert_eq!(md.circuits(), d.circuits());
        prop_assert!(check_axioms(&SetSystemPair::of_matroid(&m)).unwrap().all_pass());
    }

    #[test]
    fn glue_commutes_with_duality(
        (u1, u2) in (0usize..=2, 1usize..=3, 1usize..=3).prop_flat_map(|(k, a, b)| {
            let e1: Vec<String> = labels("s", k).into_iter().chain(labels("a", a)).collect();
            let e2: Vec<String> = labels("s", k).into_iter().chain(labels("b", b)).collect();
            (subspace(e1), subspace(e2))
        })
    ) {
        prop_assume!(u1.field() == u2.field());
        let lhs = Matroid::from_representation(&delta_glue(&u1, &u2).unwrap()).unwrap().dual();
        let rhs = Matroid::from_representation(&delta_glue(&u1.complement(), &u2.complement()).unwrap()).unwrap();
        prop_assert_eq!(lhs.circuits(), rhs.circuits());
    }
}
