//! Normal spanning trees, tree structures, torsos and the tree of matroids
//! they give.

use std::collections::{BTreeMap, BTreeSet};

use super::Graph;
use crate::error::{Error, Result};
use crate::gf::Subspace;
use crate::tom::{TomNode, TreeOfMatroids, TreeRepresentation};

/// Ground-set cap for torso and subdivided-graph cycle matroids.
pub const TORSO_CAP: usize = 20;

/// A rooted spanning tree with its tree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForestOrder {
    pub root: String,
    parent: BTreeMap<String, Option<String>>,
    depth: BTreeMap<String, usize>,
    normal: bool,
}

impl RootedForestOrder {
    /// `parent` must describe a tree on the vertices of `g` rooted at `root`.
    pub fn new(g: &Graph, root: &str, parent: BTreeMap<String, Option<String>>) -> Result<Self> {
        if parent.keys().ne(g.vertices().iter()) {
            return Err(Error::input("parent map must cover exactly the vertices"));
        }
        let mut depth = BTreeMap::new();
        for v in parent.keys() {
            let mut d = 0;
            let mut x = v;
            while let Some(Some(p)) = parent.get(x) {
                if g.edge_between(x, p).is_none() {
                    return Err(Error::input(format!("tree edge {x} {p} is not a graph edge")));
                }
                d += 1;
                if d > parent.len() {
                    return Err(Error::input("parent map has a cycle"));
                }
                x = p;
            }
            if x != root {
                return Err(Error::input(format!("{v} does not reach the root {root}")));
            }
            depth.insert(v.clone(), d);
        }
        let mut order = RootedForestOrder {
            root: root.to_string(),
            parent,
            depth,
            normal: false,
        };
        order.normal = g.edges().iter().all(|e| order.comparable(&e.u, &e.v));
        Ok(order)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn parent(&self, v: &str) -> Option<&str> {
        self.parent.get(v).and_then(|p| p.as_deref())
    }

    pub fn depth(&self, v: &str) -> usize {
        self.depth[v]
    }

    /// a ≤ b: a lies on the tree path from the root to b.
    pub fn le(&self, a: &str, b: &str) -> bool {
        let mut x = b;
        loop {
            if x == a {
                return true;
            }
            match self.parent(x) {
                Some(p) => x = p,
                None => return false,
            }
        }
    }

    pub fn comparable(&self, a: &str, b: &str) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn down_closure(&self, x: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for v in x {
            let mut y = Some(v.as_str());
            while let Some(a) = y {
                if !out.insert(a.to_string()) {
                    break;
                }
                y = self.parent(a);
            }
        }
        out
    }

    /// Minimal vertices outside `x`.
    pub fn delta(&self, x: &BTreeSet<String>) -> BTreeSet<String> {
        self.parent
            .keys()
            .filter(|v| !x.contains(*v))
            .filter(|v| {
                let mut y = self.parent(v);
                while let Some(a) = y {
                    if !x.contains(a) {
                        return false;
                    }
                    y = self.parent(a);
                }
                true
            })
            .cloned()
            .collect()
    }

    /// The spanning tree as a graph on `g`'s vertices.
    pub fn tree(&self, g: &Graph) -> Graph {
        let mut t = Graph::new(format!("{}-nst", g.name));
        for v in g.vertices() {
            t.add_vertex(v.clone());
        }
        for (v, p) in &self.parent {
            if let Some(p) = p {
                let e = g.edge_between(v, p).expect("validated tree edge");
                t.add_edge(&e.u, &e.v, Some(&e.label)).expect("tree edges are simple");
            }
        }
        t
    }
}

/// Depth-first search with neighbours in label order.
pub fn normal_spanning_tree(g: &Graph, root: &str) -> Result<RootedForestOrder> {
    if !g.vertices().contains(root) {
        return Err(Error::input(format!("root {root} is not a vertex")));
    }
    if !g.is_connected() {
        return Err(Error::input("a normal spanning tree needs a connected graph"));
    }
    let mut parent: BTreeMap<String, Option<String>> = BTreeMap::from([(root.to_string(), None)]);
    let mut stack: Vec<(String, Vec<String>)> = vec![(root.to_string(), g.neighbours(root).rev().cloned().collect())];
    while let Some((v, pending)) = stack.last_mut() {
        match pending.pop() {
            Some(w) if !parent.contains_key(&w) => {
                parent.insert(w.clone(), Some(v.clone()));
                let next: Vec<String> = g.neighbours(&w).rev().cloned().collect();
                stack.push((w, next));
            }
            Some(_) => {}
            None => {
                stack.pop();
            }
        }
    }
    let order = RootedForestOrder::new(g, root, parent)?;
    if !order.is_normal() {
        return Err(Error::invariant("depth-first tree is not normal"));
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub name: String,
    pub vertices: BTreeSet<String>,
}

/// A partition of V(G) into connected classes arranged in a tree, with
/// classes adjacent exactly when some graph edge joins them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStructure {
    classes: Vec<Class>,
    edges: Vec<(usize, usize)>,
    class_of: BTreeMap<String, usize>,
    /// Edge labels of G between adjacent classes, keyed with a < b.
    between: BTreeMap<(usize, usize), Vec<String>>,
}

impl TreeStructure {
    pub fn new(g: &Graph, classes: Vec<Class>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = classes.len();
        let names: BTreeSet<&String> = classes.iter().map(|c| &c.name).collect();
        if names.len() != n {
            return Err(Error::input("class names must be distinct"));
        }
        let mut class_of = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            if c.vertices.is_empty() {
                return Err(Error::input(format!("class {} is empty", c.name)));
            }
            for v in &c.vertices {
                if !g.vertices().contains(v) {
                    return Err(Error::input(format!("class {} has unknown vertex {v}", c.name)));
                }
                if class_of.insert(v.clone(), i).is_some() {
                    return Err(Error::input(format!("vertex {v} lies in two classes")));
                }
            }
            if !g.induced(&c.vertices).is_connected() {
                return Err(Error::input(format!("class {} is not connected", c.name)));
            }
        }
        if let Some(v) = g.vertices().iter().find(|v| !class_of.contains_key(*v)) {
            return Err(Error::input(format!("vertex {v} lies in no class")));
        }
        let mut tree = Graph::new("classes");
        for c in &classes {
            tree.add_vertex(c.name.clone());
        }
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::input(format!("tree edge ({a},{b}) names no class")));
            }
            tree.add_edge(&classes[a].name, &classes[b].name, None)?;
        }
        if n > 0 && (tree.edges().len() != n - 1 || !tree.is_connected()) {
            return Err(Error::input("class adjacency is not a tree"));
        }
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let tree_pairs: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| key(a, b)).collect();
        let mut between: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for e in g.edges() {
            let (a, b) = (class_of[&e.u], class_of[&e.v]);
            if a == b {
                continue;
            }
            if !tree_pairs.contains(&key(a, b)) {
                return Err(Error::input(format!(
                    "edge {} joins classes {} and {} which are not adjacent",
                    e.label, classes[a].name, classes[b].name
                )));
            }
            between.entry(key(a, b)).or_default().push(e.label.clone());
        }
        if let Some(&(a, b)) = tree_pairs.iter().find(|p| !between.contains_key(p)) {
            return Err(Error::input(format!(
                "classes {} and {} are adjacent but no edge joins them",
                classes[a].name, classes[b].name
            )));
        }
        Ok(TreeStructure {
            classes,
            edges,
            class_of,
            between,
        })
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn class_of(&self, v: &str) -> Option<usize> {
        self.class_of.get(v).copied()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Labels of the graph edges joining classes `a` and `b`.
    pub fn between(&self, a: usize, b: usize) -> &[String] {
        self.between.get(&(a.min(b), a.max(b))).map_or(&[], Vec::as_slice)
    }

    pub fn is_width2(&self) -> bool {
        self.between.values().all(|v| v.len() == 2)
    }
}

/// The tree structure from a normal spanning tree, by the layered recursion
/// V_{n+1} = N(V_n)↓ ∪ δ(V_n).
pub fn tree_structure_from_nst(g: &Graph, f: &RootedForestOrder) -> Result<TreeStructure> {
    if !f.is_normal() {
        return Err(Error::input("the rooted tree is not normal"));
    }
    let mut layer: BTreeSet<String> = BTreeSet::new();
    let mut classes: Vec<Class> = Vec::new();
    while layer.len() < g.vertices().len() {
        let mut nbhd = layer.clone();
        for v in &layer {
            nbhd.extend(g.neighbours(v).cloned());
        }
        let delta = f.delta(&layer);
        let mut next = f.down_closure(&nbhd);
        next.extend(delta.iter().cloned());
        for v in &delta {
            classes.push(Class {
                name: v.clone(),
                vertices: next.iter().filter(|w| f.le(v, w)).cloned().collect(),
            });
        }
        layer = next;
    }
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        for v in &c.vertices {
            owner.insert(v, i);
        }
    }
    let edges: Vec<(usize, usize)> = classes
        .iter()
        .filter_map(|c| f.parent(&c.name).map(|p| (owner[p], index[c.name.as_str()])))
        .collect();
    TreeStructure::new(g, classes, edges).map_err(|e| Error::invariant(format!("recursion output: {e}")))
}

pub(crate) fn dummy_vertex(edge: &str) -> String {
    format!("~{edge}")
}

pub(crate) fn half_edge(edge: &str, end: &str) -> String {
    format!("{edge}/{end}")
}

pub(crate) fn dummy_edge(e: &str, f: &str) -> String {
    let (a, b) = if e < f { (e, f) } else { (f, e) };
    format!("d:{a}:{b}")
}

/// τ(t): the class, a dummy vertex per leaving edge, and a clique on the
/// dummies of each neighbouring class.
pub fn torso(g: &Graph, ts: &TreeStructure, t: usize) -> Result<Graph> {
    let class = ts
        .classes()
        .get(t)
        .ok_or_else(|| Error::input(format!("class index {t} is out of range")))?;
    let mut out = Graph::new(format!("torso-{}", class.name));
    for v in &class.vertices {
        out.add_vertex(v.clone());
    }
    let mut toward: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for e in g.edges() {
        let (cu, cv) = (ts.class_of(&e.u), ts.class_of(&e.v));
        match (cu == Some(t), cv == Some(t)) {
            (true, true) => out.add_edge(&e.u, &e.v, Some(&e.label))?,
            (true, false) | (false, true) => {
                let (inner, other) = if cu == Some(t) { (&e.u, cv) } else { (&e.v, cu) };
                let d = dummy_vertex(&e.label);
                out.add_edge(inner, &d, Some(&half_edge(&e.label, inner)))?;
                toward.entry(other.expect("validated partition")).or_default().push(e.label.clone());
            }
            (false, false) => {}
        }
    }
    for leavers in toward.values() {
        for (i, e) in leavers.iter().enumerate() {
            for f in &leavers[i + 1..] {
                out.add_edge(&dummy_vertex(e), &dummy_vertex(f), Some(&dummy_edge(e, f)))?;
            }
        }
    }
    Ok(out)
}

fn torsos(g: &Graph, ts: &TreeStructure) -> Result<Vec<Graph>> {
    (0..ts.classes().len()).map(|t| torso(g, ts, t)).collect()
}

/// 𝒯(G,T): graphic matroids of the torsos on the class tree.
pub fn tree_of_matroids(g: &Graph, ts: &TreeStructure) -> Result<TreeOfMatroids> {
    let nodes = torsos(g, ts)?
        .into_iter()
        .zip(ts.classes())
        .map(|(tg, c)| {
            Ok(TomNode {
                name: c.name.clone(),
                matroid: tg.cycle_matroid_capped(TORSO_CAP)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TreeOfMatroids::new(nodes, ts.edges().to_vec(), BTreeSet::new())
}

/// 𝒯(G,T) with each node represented by its torso's cycle space over GF(2).
pub fn binary_representation(g: &Graph, ts: &TreeStructure) -> Result<(TreeOfMatroids, TreeRepresentation)> {
    let tree = tree_of_matroids(g, ts)?;
    let spaces = torsos(g, ts)?
        .iter()
        .map(Graph::cycle_space)
        .collect::<Result<Vec<Subspace>>>()?;
    let rep = TreeRepresentation::new(&tree, spaces)?;
    Ok((tree, rep))
}

/// G′: every edge between classes split by a new vertex, which joins the
/// class of the edge's first endpoint.
pub fn subdivide_interfaces(g: &Graph, ts: &TreeStructure) -> Result<(Graph, TreeStructure)> {
    let mut out = Graph::new(format!("{}-sub", g.name));
    for v in g.vertices() {
        out.add_vertex(v.clone());
    }
    let mut classes = ts.classes().to_vec();
    for e in g.edges() {
        let (cu, cv) = (ts.class_of(&e.u), ts.class_of(&e.v));
        if cu == cv {
            out.add_edge(&e.u, &e.v, Some(&e.label))?;
        } else {
            let d = dummy_vertex(&e.label);
            out.add_edge(&e.u, &d, Some(&half_edge(&e.label, &e.u)))?;
            out.add_edge(&e.v, &d, Some(&half_edge(&e.label, &e.v)))?;
            classes[cu.expect("validated partition")].vertices.insert(d);
        }
    }
    let sub = TreeStructure::new(&out, classes, ts.edges().to_vec())?;
    Ok((out, sub))
}

/// Circuit and bond counts of G′ next to the enumeration over 𝒯(G,T).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionComparison {
    pub circuits: usize,
    pub bonds: usize,
    pub circuits_equal: bool,
    pub bonds_equal: bool,
}

impl SubdivisionComparison {
    pub fn agree(&self) -> bool {
        self.circuits_equal && self.bonds_equal
    }
}

/// Compares cycles and bonds of G′ with minimal precircuit sets of 𝒯(G,T)
/// and of its dual (width 2 only).
pub fn compare_with_subdivision(g: &Graph, ts: &TreeStructure) -> Result<SubdivisionComparison> {
    if !ts.is_width2() {
        return Err(Error::input("the comparison needs a tree structure of width 2"));
    }
    let (sub, _) = subdivide_interfaces(g, ts)?;
    let tree = tree_of_matroids(g, ts)?;
    let (ground, mut cycles) = sub.cycles()?;
    let (_, mut bonds) = sub.bonds()?;
    if ground != *tree.ground() {
        return Err(Error::invariant("G′ and the tree of matroids have different ground sets"));
    }
    let (_, mut circuits) = tree.enumerate_circuits()?;
    let (_, mut cocircuits) = tree.dual().enumerate_circuits()?;
    for list in [&mut cycles, &mut bonds, &mut circuits, &mut cocircuits] {
        list.sort_unstable();
    }
    Ok(SubdivisionComparison {
        circuits: cycles.len(),
        bonds: bonds.len(),
        circuits_equal: cycles == circuits,
        bonds_equal: bonds == cocircuits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_t2_k3, ladder};

    fn graph(edges: &[(&str, &str)]) -> Graph {
        let mut g = Graph::new("g");
        for (u, v) in edges {
            g.add_edge(u, v, None).unwrap();
        }
        g
    }

    fn names(ts: &TreeStructure) -> Vec<BTreeSet<String>> {
        ts.classes().iter().map(|c| c.vertices.clone()).collect()
    }

    #[test]
    fn path_nst_and_classes() {
        let g = graph(&[("v1", "v2"), ("v2", "v3"), ("v3", "v4")]);
        let f = normal_spanning_tree(&g, "v1").unwrap();
        assert_eq!(f.depth("v4"), 3);
        let ts = tree_structure_from_nst(&g, &f).unwrap();
        let expect: Vec<BTreeSet<String>> = ["v1", "v2", "v3", "v4"].iter().map(|v| [v.to_string()].into()).collect();
        assert_eq!(names(&ts), expect);
        assert_eq!(ts.edges().len(), 3);
    }

    #[test]
    fn single_vertex_is_one_class() {
        let mut g = Graph::new("one");
        g.add_vertex("a");
        let ts = tree_structure_from_nst(&g, &normal_spanning_tree(&g, "a").unwrap()).unwrap();
        assert_eq!(ts.classes().len(), 1);
    }

    #[test]
    fn k4_and_c4_dfs_trees_are_normal_paths() {
        let k4 = graph(&[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        let f = normal_spanning_tree(&k4, "a").unwrap();
        assert_eq!(k4.vertices().iter().map(|v| f.depth(v)).max(), Some(3));
        assert!(k4.edges().iter().all(|e| f.comparable(&e.u, &e.v)));
        tree_structure_from_nst(&k4, &f).unwrap();
        let c4 = graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let f = normal_spanning_tree(&c4, "a").unwrap();
        assert!(f.comparable("a", "d"));
        assert_eq!(f.depth("d"), 3);
    }

    #[test]
    fn bfs_star_tree_of_c4_is_not_normal() {
        let c4 = graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let parent = [("a", None), ("b", Some("a")), ("d", Some("a")), ("c", Some("b"))]
            .into_iter()
            .map(|(v, p)| (v.to_string(), p.map(str::to_string)))
            .collect();
        let f = RootedForestOrder::new(&c4, "a", parent).unwrap();
        assert!(!f.is_normal());
        assert!(tree_structure_from_nst(&c4, &f).is_err());
    }

    #[test]
    fn ladder_middle_torso_has_three_cycles() {
        let (g, ts) = ladder(3);
        assert!(ts.is_width2());
        let t = torso(&g, &ts, 1).unwrap();
        assert_eq!(t.vertices().len(), 6);
        assert_eq!(t.cycles().unwrap().1.len(), 3);
        let leaf = torso(&g, &ts, 0).unwrap();
        assert_eq!(leaf.edges().iter().filter(|e| e.label.starts_with("d:")).count(), 1);
        let tree = tree_of_matroids(&g, &ts).unwrap();
        assert!(tree.is_overlap1());
        assert_eq!(tree.nodes()[1].matroid.circuits().len(), 3);
    }

    #[test]
    fn class_without_leaving_edges_is_induced_subgraph() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let ts = TreeStructure::new(
            &g,
            vec![Class {
                name: "all".into(),
                vertices: g.vertices().clone(),
            }],
            vec![],
        )
        .unwrap();
        let t = torso(&g, &ts, 0).unwrap();
        assert_eq!(t.edges(), g.edges());
        assert_eq!(t.vertices(), g.vertices());
        let tree = tree_of_matroids(&g, &ts).unwrap();
        assert_eq!(tree.nodes()[0].matroid, g.cycle_matroid().unwrap());
    }

    #[test]
    fn three_stringers_have_overlap_three() {
        let g = graph(&[
            ("a1", "a2"),
            ("a2", "a3"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("a1", "b1"),
            ("a2", "b2"),
            ("a3", "b3"),
        ]);
        let class = |n: &str, vs: &[&str]| Class {
            name: n.into(),
            vertices: vs.iter().map(|s| s.to_string()).collect(),
        };
        let ts = TreeStructure::new(&g, vec![class("a", &["a1", "a2", "a3"]), class("b", &["b1", "b2", "b3"])], vec![(0, 1)])
            .unwrap();
        assert!(!ts.is_width2());
        let tree = tree_of_matroids(&g, &ts).unwrap();
        assert!(!tree.is_overlap1());
        assert_eq!(tree.interface(0, 1).len(), 3);
    }

    #[test]
    fn subdivision_adds_one_vertex_per_cross_edge() {
        let (g, ts) = ladder(3);
        let (sub, sts) = subdivide_interfaces(&g, &ts).unwrap();
        let cross = 4;
        assert_eq!(sub.edges().len(), g.edges().len() + cross);
        assert_eq!(sub.vertices().len(), g.vertices().len() + cross);
        assert_eq!(sts.classes().len(), 3);
    }

    #[test]
    fn t2_k3_structure_has_width_two() {
        let (g, ts) = gen_t2_k3(2).unwrap();
        assert_eq!(ts.classes().len(), 7);
        assert!(ts.is_width2());
        assert!(g.is_connected());
    }

    #[test]
    fn subdivided_ladders_match_the_tree() {
        for n in 2..=4 {
            let (g, ts) = ladder(n);
            let cmp = compare_with_subdivision(&g, &ts).unwrap();
            assert!(cmp.agree(), "ladder {n}: {cmp:?}");
        }
        let (g, ts) = gen_t2_k3(1).unwrap();
        assert!(compare_with_subdivision(&g, &ts).unwrap().agree());
    }

    #[test]
    fn binary_representation_matches_torsos() {
        let (g, ts) = ladder(3);
        let (tree, rep) = binary_representation(&g, &ts).unwrap();
        assert_eq!(rep.spaces.len(), tree.len());
    }
}
