//! Generators for the example families: ladders, T×K₂, the 3-coloured
//! binary tree and T₂×K₃ with its width-2 tree structure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::structure::{Class, TreeStructure};
use super::Graph;
use crate::error::{Error, Result};

/// The ladder with `n` rungs `a_i b_i`, one class per rung.
pub fn ladder(n: usize) -> (Graph, TreeStructure) {
    let mut g = Graph::new(format!("ladder{n}"));
    for i in 1..=n {
        g.add_edge(&format!("a{i}"), &format!("b{i}"), None).expect("fresh rung");
        if i > 1 {
            for s in ["a", "b"] {
                g.add_edge(&format!("{s}{}", i - 1), &format!("{s}{i}"), None).expect("fresh stringer");
            }
        }
    }
    let classes = (1..=n)
        .map(|i| Class {
            name: format!("r{i}"),
            vertices: [format!("a{i}"), format!("b{i}")].into(),
        })
        .collect();
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    let ts = TreeStructure::new(&g, classes, edges).expect("ladder classes form a path");
    (g, ts)
}

/// Vertices of `tree` within `depth` of `root`, by breadth-first search.
fn ball(tree: &Graph, root: &str, depth: usize) -> BTreeSet<String> {
    let mut dist = BTreeMap::from([(root.to_string(), 0usize)]);
    let mut queue = VecDeque::from([root.to_string()]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == depth {
            continue;
        }
        for w in tree.neighbours(&v) {
            if !dist.contains_key(w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w.clone());
            }
        }
    }
    dist.into_keys().collect()
}

/// T×K₂ on the ball of radius `depth` around `root`: copies `v` and `v'`,
/// rungs `v-v'`.
pub fn gen_t_k2(tree: &Graph, root: &str, depth: usize) -> Result<Graph> {
    if !tree.vertices().contains(root) {
        return Err(Error::input(format!("root {root} is not a vertex")));
    }
    if !tree.is_connected() || tree.edges().len() + 1 != tree.vertices().len() {
        return Err(Error::input("T×K₂ needs a tree"));
    }
    let keep = ball(tree, root, depth);
    let t = tree.induced(&keep);
    let mut g = Graph::new(format!("{}xK2", tree.name));
    for v in t.vertices() {
        g.add_edge(v, &format!("{v}'"), None)?;
    }
    for e in t.edges() {
        g.add_edge(&e.u, &e.v, None)?;
        g.add_edge(&format!("{}'", e.u), &format!("{}'", e.v), None)?;
    }
    Ok(g)
}

/// The classes {v, v'} of a graph made by [`gen_t_k2`], arranged like `tree`.
pub fn t_k2_structure(tree: &Graph, g: &Graph) -> Result<TreeStructure> {
    let kept: Vec<&String> = tree.vertices().iter().filter(|v| g.vertices().contains(*v)).collect();
    let index: BTreeMap<&String, usize> = kept.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let classes = kept
        .iter()
        .map(|v| Class {
            name: v.to_string(),
            vertices: [v.to_string(), format!("{v}'")].into(),
        })
        .collect();
    let edges = tree
        .edges()
        .iter()
        .filter_map(|e| Some((*index.get(&e.u)?, *index.get(&e.v)?)))
        .collect();
    TreeStructure::new(g, classes, edges)
}

/// The tree with one vertex of each degree n ≥ 2: a spine v2 v3 v4 …
/// where v2 carries one leaf and v_n (n ≥ 3) carries n − 2 leaves, cut off
/// at distance `depth` from v2.
pub fn degree_tree(depth: usize) -> Graph {
    let mut t = Graph::new("degtree");
    t.add_vertex("v2");
    for n in 2..=depth + 2 {
        let v = format!("v{n}");
        if n > 2 {
            t.add_edge(&format!("v{}", n - 1), &v, None).expect("fresh spine edge");
        }
        // Leaves of v_n sit at distance n − 1 from v2.
        if n - 1 <= depth {
            let leaves = if n == 2 { 1 } else { n - 2 };
            for j in 1..=leaves {
                t.add_edge(&v, &format!("l{n}_{j}"), None).expect("fresh leaf");
            }
        }
    }
    t
}

/// Node names of T₂: `r` followed by the binary word.
fn t2_nodes(depth: usize) -> Vec<String> {
    let mut out = vec!["r".to_string()];
    let mut frontier = vec!["r".to_string()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for b in ['0', '1'] {
                next.push(format!("{s}{b}"));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Edge colours of T₂ up to `depth`, keyed by the child end of each edge.
pub type Coloring = BTreeMap<String, u8>;

fn word_len(s: &str) -> usize {
    s.len() - 1
}

/// Root edges get colour 0; below an odd-length node the two other colours,
/// below a nonempty even-length node the parent edge's colour again.
pub fn gen_coloring(depth: usize) -> Coloring {
    let mut c = Coloring::new();
    for s in t2_nodes(depth) {
        if word_len(&s) == depth {
            continue;
        }
        let kids = [format!("{s}0"), format!("{s}1")];
        if word_len(&s) == 0 {
            for k in kids {
                c.insert(k, 0);
            }
        } else {
            let up = c[&s];
            if word_len(&s) % 2 == 1 {
                let others: Vec<u8> = (0..3).filter(|&x| x != up).collect();
                for (k, col) in kids.into_iter().zip(others) {
                    c.insert(k, col);
                }
            } else {
                for k in kids {
                    c.insert(k, up);
                }
            }
        }
    }
    c
}

/// Every odd-length node with all edges present sees 3 colours, every
/// even-length one sees 1.
pub fn coloring_is_valid(c: &Coloring, depth: usize) -> bool {
    t2_nodes(depth).iter().filter(|s| word_len(s) < depth).all(|s| {
        let mut seen: BTreeSet<u8> = [format!("{s}0"), format!("{s}1")].iter().filter_map(|k| c.get(k).copied()).collect();
        if let Some(&up) = c.get(s) {
            seen.insert(up);
        }
        let want = if word_len(s) % 2 == 1 { 3 } else { 1 };
        seen.len() == want
    })
}

/// T₂×K₃ to `depth` minus the edges e × {c(e)}, with classes {s}×V(K₃).
pub fn gen_t2_k3(depth: usize) -> Result<(Graph, TreeStructure)> {
    if depth == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    let c = gen_coloring(depth);
    let nodes = t2_nodes(depth);
    let mut g = Graph::new(format!("t2k3-{depth}"));
    let vx = |s: &str, i: u8| format!("{s}.{i}");
    for s in &nodes {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            g.add_edge(&vx(s, i), &vx(s, j), None)?;
        }
    }
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (child, &col) in &c {
        let parent = &child[..child.len() - 1];
        for i in (0..3).filter(|&i| i != col) {
            g.add_edge(&vx(parent, i), &vx(child, i), None)?;
        }
        edges.push((index[parent], index[child.as_str()]));
    }
    let classes = nodes
        .iter()
        .map(|s| Class {
            name: s.clone(),
            vertices: (0..3).map(|i| vx(s, i)).collect(),
        })
        .collect();
    let ts = TreeStructure::new(&g, classes, edges)?;
    Ok((g, ts))
}

/// No bond of `torso` contains more than `k` of the `dummies` edges.
pub fn bond_dummy_bound(torso: &Graph, dummies: &BTreeSet<String>, k: usize) -> Result<bool> {
    let (ground, bonds) = torso.bonds()?;
    let mask = ground.mask(dummies.iter().filter(|l| ground.index(l).is_some()))?;
    Ok(bonds.iter().all(|b| (b & mask).count_ones() as usize <= k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_at_depth_three() {
        let c = gen_coloring(3);
        assert_eq!(c.len(), 14);
        assert!(coloring_is_valid(&c, 3));
        let mut bad = c.clone();
        bad.insert("r00".into(), 0);
        assert!(!coloring_is_valid(&bad, 3));
    }

    #[test]
    fn single_edge_times_k2_is_c4() {
        let mut t = Graph::new("k2");
        t.add_edge("a", "b", None).unwrap();
        let g = gen_t_k2(&t, "a", 1).unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.cycles().unwrap().1.len(), 1);
        assert!(g.vertices().iter().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn t_k2_classes_have_width_two() {
        let t = degree_tree(2);
        let g = gen_t_k2(&t, "v2", 1).unwrap();
        let ts = t_k2_structure(&t, &g).unwrap();
        assert!(ts.is_width2());
        assert!(crate::graphs::compare_with_subdivision(&g, &ts).unwrap().agree());
    }

    #[test]
    fn degree_tree_degrees() {
        let t = degree_tree(8);
        for n in 2..=9 {
            assert_eq!(t.degree(&format!("v{n}")), n, "v{n}");
        }
    }

    #[test]
    fn ladder_shape() {
        let (g, ts) = ladder(4);
        assert_eq!(g.edges().len(), 10);
        assert!(ts.is_width2());
    }

    #[test]
    fn ladder_torso_bonds_meet_two_dummy_edges() {
        let (g, ts) = ladder(3);
        let t = crate::graphs::torso(&g, &ts, 1).unwrap();
        let dummies: BTreeSet<String> = t.edges().iter().filter(|e| e.label.starts_with("d:")).map(|e| e.label.clone()).collect();
        assert!(bond_dummy_bound(&t, &dummies, 2).unwrap());
        assert!(!bond_dummy_bound(&t, &dummies, 1).unwrap());
    }
}
