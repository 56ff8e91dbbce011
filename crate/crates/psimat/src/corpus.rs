//! The fixed instances the self-test runs over: small matroids, regular
//! presentations with at most four real edges, represented finite trees and
//! width-2 tree structures.

use std::collections::BTreeSet;

use crate::games::{tgame_psi, TgamePsi};
use crate::gf::{Field, Subspace, Vector};
use crate::graphs::{binary_representation, degree_tree, gen_t2_k3, gen_t_k2, ladder, t_k2_structure, Graph, TreeStructure};
use crate::matroid::{uniform, Matroid};
use crate::tom::{
    CoreState, Loc, PrefixNode, PsiCondition, TomNode, Transition, TreeOfMatroids, TreePresentation, TreeRepresentation,
};

fn graph(name: &str, edges: &[(&str, &str)]) -> Graph {
    let mut g = Graph::new(name);
    for (u, v) in edges {
        g.add_edge(u, v, None).expect("corpus graphs are simple");
    }
    g
}

fn rows(field: Field, labels: &[&str], rows: &[&[i64]]) -> Subspace {
    let vs: Vec<Vector> = rows
        .iter()
        .map(|r| Vector::new(field, labels.iter().copied().zip(r.iter().copied())))
        .collect();
    Subspace::rref(field, labels.iter().copied(), &vs).expect("corpus rows fit their labels")
}

/// At least twenty named matroids on at most seven elements.
pub fn matroids() -> Vec<(String, Matroid)> {
    let letters = ["a", "b", "c", "d", "e", "f"];
    let mut out = Vec::new();
    for (r, n) in [(0, 1), (1, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4), (2, 5), (3, 5), (3, 6)] {
        out.push((format!("U{r}{n}"), uniform(r, letters[..n].iter().copied()).expect("r ≤ n")));
    }
    let graphs = [
        graph("K3", &[("1", "2"), ("2", "3"), ("3", "1")]),
        graph("C4", &[("1", "2"), ("2", "3"), ("3", "4"), ("4", "1")]),
        graph("C5", &[("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1")]),
        graph("P4", &[("1", "2"), ("2", "3"), ("3", "4")]),
        graph("paw", &[("1", "2"), ("2", "3"), ("3", "1"), ("3", "4")]),
        graph("diamond", &[("1", "2"), ("2", "3"), ("3", "1"), ("1", "4"), ("2", "4")]),
        graph("K4", &[("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")]),
        graph("bowtie", &[("1", "2"), ("2", "3"), ("3", "1"), ("3", "4"), ("4", "5"), ("5", "3")]),
        graph("K23", &[("a", "1"), ("a", "2"), ("a", "3"), ("b", "1"), ("b", "2"), ("b", "3")]),
    ];
    for g in graphs {
        out.push((format!("M({})", g.name), g.cycle_matroid().expect("small graph")));
    }
    let reps = [
        ("bin6", rows(Field::GF2, &letters, &[&[1, 1, 0, 1, 0, 0], &[0, 1, 1, 0, 1, 0], &[1, 0, 1, 0, 0, 1]])),
        ("tern4", rows(Field::GF3, &letters[..4], &[&[1, 0, 1, 1], &[0, 1, 1, 2]])),
        ("tern5", rows(Field::GF3, &letters[..5], &[&[1, 0, 1, 1, 1], &[0, 1, 1, 2, 0]])),
        ("tern6", rows(Field::GF3, &letters, &[&[1, 0, 0, 1, 1, 1], &[0, 1, 0, 1, 2, 0], &[0, 0, 1, 1, 0, 2]])),
    ];
    for (name, u) in reps {
        out.push((name.to_string(), Matroid::from_representation(&u).expect("small representation")));
    }
    out
}

/// U_{2,3} as the span of the all-ones vector.
fn triangle(field: Field, labels: [&str; 3]) -> (Matroid, Subspace) {
    let u = rows(field, &labels, &[&[1, 1, 1]]);
    (Matroid::from_representation(&u).expect("triangle"), u)
}

/// U_{1,2}: the two labels are parallel.
fn pair(field: Field, labels: [&str; 2]) -> (Matroid, Subspace) {
    let u = rows(field, &labels, &[&[1, -1]]);
    (Matroid::from_representation(&u).expect("parallel pair"), u)
}

/// U_{1,3} over GF(2).
fn rank_one_triangle(labels: [&str; 3]) -> (Matroid, Subspace) {
    let u = rows(Field::GF2, &labels, &[&[1, 1, 0], &[1, 0, 1]]);
    (Matroid::from_representation(&u).expect("rank one triangle"), u)
}

fn prefix(name: &str, (matroid, rep): (Matroid, Subspace)) -> PrefixNode {
    PrefixNode {
        name: name.into(),
        matroid,
        rep: Some(rep),
    }
}

fn core(name: &str, (matroid, rep): (Matroid, Subspace)) -> CoreState {
    CoreState {
        name: name.into(),
        matroid,
        rep: Some(rep),
        incoming: ["in".to_string()].into(),
    }
}

fn tr(name: &str, source: Loc, target: usize, from: &str) -> Transition {
    Transition {
        name: name.into(),
        source,
        target,
        map: [(from.to_string(), "in".to_string())].into(),
        priority: 0,
    }
}

fn real(labels: &[&str]) -> BTreeSet<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// Regular presentations with one to four real edges, all represented.
pub fn presentations() -> Vec<TreePresentation> {
    let f2 = Field::GF2;
    let f3 = Field::GF3;
    let fork = TreePresentation::new(
        "fork",
        vec![prefix("root", triangle(f2, ["a", "b", "p"]))],
        vec![core("fork", triangle(f2, ["in", "l", "r"]))],
        vec![
            tr("0", Loc::Prefix(0), 0, "p"),
            tr("l", Loc::Core(0), 0, "l"),
            tr("r", Loc::Core(0), 0, "r"),
        ],
        real(&["a", "b"]),
    );
    let ray = TreePresentation::new(
        "ray",
        vec![prefix("root", pair(f2, ["a", "p"]))],
        vec![core("link", pair(f2, ["in", "out"]))],
        vec![tr("go", Loc::Prefix(0), 0, "p"), tr("go", Loc::Core(0), 0, "out")],
        real(&["a"]),
    );
    let chain = TreePresentation::new(
        "chain",
        vec![prefix("root", rank_one_triangle(["a", "b", "p"]))],
        vec![core("link", pair(f2, ["in", "out"]))],
        vec![tr("go", Loc::Prefix(0), 0, "p"), tr("go", Loc::Core(0), 0, "out")],
        real(&["a", "b"]),
    );
    let left = rows(f3, &["a", "b", "s", "p"], &[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
    let wide = TreePresentation::new(
        "wide",
        vec![
            prefix("left", (Matroid::from_representation(&left).expect("U24"), left)),
            prefix("right", triangle(f3, ["s", "d", "q"])),
        ],
        vec![core("tri", triangle(f3, ["in", "l", "r"]))],
        vec![
            tr("p", Loc::Prefix(0), 0, "p"),
            tr("q", Loc::Prefix(1), 0, "q"),
            tr("l", Loc::Core(0), 0, "l"),
            tr("r", Loc::Core(0), 0, "r"),
        ],
        real(&["a", "b", "d"]),
    );
    let (tree, rep) = glued_triangles();
    let glued = TreePresentation::from_tree("glued", &tree, Some(&rep));
    let mut out = vec![tgame_psi(TgamePsi::All)];
    out.extend([fork, ray, chain, wide, glued].into_iter().map(|p| p.expect("corpus presentations are valid")));
    out
}

/// Four Ψ-conditions per presentation: all ends, none, and Büchi and
/// co-Büchi on its first transition (T^game uses its own sets).
pub fn psi_conditions(p: &TreePresentation) -> Vec<(String, TreePresentation)> {
    if p.name == "tgame" {
        return [
            ("all", TgamePsi::All),
            ("none", TgamePsi::None),
            ("buchi", TgamePsi::Buchi),
            ("cobuchi", TgamePsi::CoBuchi),
        ]
        .into_iter()
        .map(|(n, psi)| (n.to_string(), tgame_psi(psi)))
        .collect();
    }
    let first: BTreeSet<String> = (!p.transitions().is_empty())
        .then(|| p.transition_id(0))
        .into_iter()
        .collect();
    [
        ("all", PsiCondition::All),
        ("none", PsiCondition::None),
        ("buchi", PsiCondition::Buchi(first.clone())),
        ("cobuchi", PsiCondition::CoBuchi(first)),
    ]
    .into_iter()
    .map(|(n, c)| (n.to_string(), p.with_psi(&c).expect("ids come from the presentation")))
    .collect()
}

fn glued_triangles() -> (TreeOfMatroids, TreeRepresentation) {
    let (m1, u1) = triangle(Field::GF2, ["a", "b", "e"]);
    let (m2, u2) = triangle(Field::GF2, ["c", "d", "e"]);
    let tree = TreeOfMatroids::new(
        vec![
            TomNode {
                name: "left".into(),
                matroid: m1,
            },
            TomNode {
                name: "right".into(),
                matroid: m2,
            },
        ],
        vec![(0, 1)],
        BTreeSet::new(),
    )
    .expect("two triangles");
    let rep = TreeRepresentation::new(&tree, vec![u1, u2]).expect("cycle spaces");
    (tree, rep)
}

fn ternary_pair() -> (TreeOfMatroids, TreeRepresentation) {
    let u1 = rows(Field::GF3, &["a", "b", "c", "x"], &[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
    let u2 = rows(Field::GF3, &["x", "d", "e", "f"], &[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
    let node = |name: &str, u: &Subspace| TomNode {
        name: name.into(),
        matroid: Matroid::from_representation(u).expect("U24"),
    };
    let tree = TreeOfMatroids::new(vec![node("left", &u1), node("right", &u2)], vec![(0, 1)], BTreeSet::new())
        .expect("two nodes");
    let rep = TreeRepresentation::new(&tree, vec![u1, u2]).expect("ternary spaces");
    (tree, rep)
}

/// Represented finite trees with at most five nodes.
pub fn trees() -> Vec<(String, TreeOfMatroids, TreeRepresentation)> {
    let mut out = Vec::new();
    let (t, r) = glued_triangles();
    out.push(("glued".to_string(), t, r));
    let (t, r) = ternary_pair();
    out.push(("ternary".to_string(), t, r));
    for n in 2..=4 {
        let (g, ts) = ladder(n);
        let (t, r) = binary_representation(&g, &ts).expect("ladder torsos");
        out.push((format!("ladder{n}"), t, r));
    }
    let (g, ts) = gen_t2_k3(1).expect("depth 1");
    let (t, r) = binary_representation(&g, &ts).expect("t2k3 torsos");
    out.push(("t2k3-1".to_string(), t, r));
    out
}

/// Finite graphs with tree structures of width 2.
pub fn width2_instances() -> Vec<(String, Graph, TreeStructure)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        let (g, ts) = ladder(n);
        out.push((g.name.clone(), g, ts));
    }
    let (g, ts) = gen_t2_k3(1).expect("depth 1");
    out.push((g.name.clone(), g, ts));
    let t = degree_tree(2);
    let g = gen_t_k2(&t, "v2", 1).expect("degree tree");
    let ts = t_k2_structure(&t, &g).expect("rung classes");
    out.push((g.name.clone(), g, ts));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes() {
        assert!(matroids().len() >= 20);
        let ps = presentations();
        assert!(ps.iter().all(|p| p.ground().len() <= 4));
        assert!(ps.iter().all(|p| psi_conditions(p).len() == 4));
        assert!(trees().iter().all(|(_, t, _)| t.len() <= 5));
        assert!(width2_instances().len() >= 5);
    }
}
