//! Finite simple graphs, their cycles and bonds, tree structures and torsos,
//! the undomination graph, and generators for the example families.

mod generators;
mod structure;
mod undominate;

pub use generators::{
    bond_dummy_bound, coloring_is_valid, degree_tree, gen_coloring, gen_t2_k3, gen_t_k2, ladder, t_k2_structure,
    Coloring,
};
pub use structure::{
    binary_representation, normal_spanning_tree, subdivide_interfaces, torso, tree_of_matroids,
    tree_structure_from_nst, compare_with_subdivision, Class, SubdivisionComparison, RootedForestOrder, TreeStructure, TORSO_CAP,
};
pub use undominate::{
    connected_graphs_up_to_iso, random_trail, repeats_edge, separation_holds, undomination_graph, walk_g, walk_u,
    SeparationFailure, UVertex, UndominationGraph,
};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{check_cap, Error, Result};
use crate::gf::{Field, Subspace, Vector};
use crate::matroid::Matroid;
use crate::sets::{bit, Ground, Mask};

/// Cap on vertex count for bond enumeration (vertex bitmasks).
pub const VERTEX_CAP: usize = 64;

/// Cap on enumerated cycles or bonds.
pub const CYCLE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: String,
    pub v: String,
    pub label: String,
}

impl Edge {
    pub fn other(&self, x: &str) -> &str {
        if self.u == x {
            &self.v
        } else {
            &self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    pub name: String,
    vertices: BTreeSet<String>,
    edges: Vec<Edge>,
    adj: BTreeMap<String, BTreeMap<String, usize>>,
}

impl Graph {
    pub fn new(name: impl Into<String>) -> Self {
        Graph {
            name: name.into(),
            ..Graph::default()
        }
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) {
        let v = v.into();
        self.adj.entry(v.clone()).or_default();
        self.vertices.insert(v);
    }

    /// Adds an edge labelled `u-v` unless a label is given.
    pub fn add_edge(&mut self, u: &str, v: &str, label: Option<&str>) -> Result<()> {
        if u == v {
            return Err(Error::input(format!("loop at {u}")));
        }
        if self.edge_between(u, v).is_some() {
            return Err(Error::input(format!("parallel edge {u} {v}")));
        }
        let label = label.map_or_else(|| format!("{u}-{v}"), str::to_string);
        if self.edges.iter().any(|e| e.label == label) {
            return Err(Error::input(format!("edge label {label} is used twice")));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        let i = self.edges.len();
        self.adj.get_mut(u).expect("added").insert(v.to_string(), i);
        self.adj.get_mut(v).expect("added").insert(u.to_string(), i);
        self.edges.push(Edge {
            u: u.to_string(),
            v: v.to_string(),
            label,
        });
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<String> {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_between(&self, u: &str, v: &str) -> Option<&Edge> {
        self.adj.get(u)?.get(v).map(|&i| &self.edges[i])
    }

    pub fn neighbours(&self, v: &str) -> impl DoubleEndedIterator<Item = &String> {
        self.adj.get(v).into_iter().flat_map(|m| m.keys())
    }

    pub fn degree(&self, v: &str) -> usize {
        self.adj.get(v).map_or(0, BTreeMap::len)
    }

    /// Edge labels as a ground set.
    pub fn edge_ground(&self) -> Result<Ground> {
        Ground::new(self.edges.iter().map(|e| e.label.clone()))
    }

    /// The subgraph spanned by `keep` vertices.
    pub fn induced(&self, keep: &BTreeSet<String>) -> Graph {
        let mut g = Graph::new(self.name.clone());
        for v in keep {
            g.add_vertex(v.clone());
        }
        for e in &self.edges {
            if keep.contains(&e.u) && keep.contains(&e.v) {
                g.add_edge(&e.u, &e.v, Some(&e.label)).expect("subgraph of a simple graph");
            }
        }
        g
    }

    /// Connected components of the graph minus `removed`.
    pub fn components_without(&self, removed: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
        let mut seen: BTreeSet<&String> = BTreeSet::new();
        let mut out = Vec::new();
        for s in &self.vertices {
            if removed.contains(s) || seen.contains(s) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(v) = stack.pop() {
                comp.insert(v.clone());
                for w in self.neighbours(v) {
                    if !removed.contains(w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&BTreeSet::new()).len() <= 1
    }

    /// Edge sets of all cycles.
    pub fn cycles(&self) -> Result<(Ground, Vec<Mask>)> {
        let ground = self.edge_ground()?;
        let eidx: Vec<usize> = self
            .edges
            .iter()
            .map(|e| ground.index(&e.label).expect("edge label"))
            .collect();
        let verts: Vec<&String> = self.vertices.iter().collect();
        let pos: BTreeMap<&String, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let nbrs: Vec<Vec<(usize, usize)>> = verts
            .iter()
            .map(|v| {
                self.adj[*v]
                    .iter()
                    .map(|(w, &ei)| (pos[w], eidx[ei]))
                    .collect()
            })
            .collect();
        let mut found = BTreeSet::new();
        for s in 0..verts.len() {
            let mut on_path = vec![false; verts.len()];
            on_path[s] = true;
            cycle_search(&nbrs, s, s, 0, 0, &mut on_path, &mut found)?;
        }
        Ok((ground, found.into_iter().collect()))
    }

    /// Edge sets of all bonds (cuts between two connected sides).
    pub fn bonds(&self) -> Result<(Ground, Vec<Mask>)> {
        let ground = self.edge_ground()?;
        let n = self.vertices.len();
        check_cap("vertices for bond enumeration", n, VERTEX_CAP)?;
        if n < 2 || !self.is_connected() {
            return Err(Error::input("bond enumeration needs a connected graph with an edge"));
        }
        let verts: Vec<&String> = self.vertices.iter().collect();
        let pos: BTreeMap<&String, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let nbr: Vec<Mask> = verts
            .iter()
            .map(|v| self.neighbours(v).fold(0, |m, w| m | bit(pos[w])))
            .collect();
        let all = crate::sets::full(n);
        let mut found = Vec::new();
        let mut visit = |s: Mask| -> Result<()> {
            if s != all && connected_mask(&nbr, all & !s) {
                let cut = self
                    .edges
                    .iter()
                    .filter(|e| (s & bit(pos[&e.u]) != 0) != (s & bit(pos[&e.v]) != 0))
                    .fold(0, |m, e| m | bit(ground.index(&e.label).expect("edge label")));
                found.push(cut);
                check_cap("bond count", found.len(), CYCLE_CAP)?;
            }
            Ok(())
        };
        connected_sets(&nbr, 1, nbr[0] & !1, 1, &mut visit)?;
        found.sort_unstable();
        found.dedup();
        Ok((ground, found))
    }

    pub fn cycle_matroid(&self) -> Result<Matroid> {
        self.cycle_matroid_capped(crate::matroid::DEFAULT_CAP)
    }

    pub fn cycle_matroid_capped(&self, cap: usize) -> Result<Matroid> {
        let (ground, cycles) = self.cycles()?;
        Ok(Matroid::from_circuits_capped(ground, cycles, cap)?.with_graph_provenance(self.name.clone()))
    }

    /// Number of 4-cycles through the edge with this label.
    pub fn four_cycles_through(&self, label: &str) -> Result<usize> {
        let e = self
            .edges
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::input(format!("no edge labelled {label}")))?;
        let mut count = 0;
        for x in self.neighbours(&e.u).filter(|x| **x != e.v) {
            count += self
                .neighbours(&e.v)
                .filter(|y| **y != e.u && *y != x && self.edge_between(x, y).is_some())
                .count();
        }
        Ok(count)
    }

    /// The cycle space over GF(2), from fundamental cycles of a spanning forest.
    pub fn cycle_space(&self) -> Result<Subspace> {
        let f = Field::GF2;
        let labels: Vec<String> = self.edges.iter().map(|e| e.label.clone()).collect();
        let mut parent: BTreeMap<&String, (&String, usize)> = BTreeMap::new();
        let mut depth: BTreeMap<&String, usize> = BTreeMap::new();
        let mut tree_edges = BTreeSet::new();
        for root in &self.vertices {
            if depth.contains_key(root) {
                continue;
            }
            depth.insert(root, 0);
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for (w, &ei) in &self.adj[v] {
                    if !depth.contains_key(w) {
                        depth.insert(w, depth[v] + 1);
                        parent.insert(w, (v, ei));
                        tree_edges.insert(ei);
                        stack.push(w);
                    }
                }
            }
        }
        let mut rows = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if tree_edges.contains(&i) {
                continue;
            }
            let mut v = Vector::new(f, [(e.label.as_str(), 1)]);
            let (mut a, mut b) = (&e.u, &e.v);
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (p, ei) = parent[a];
                v.set(self.edges[ei].label.clone(), 1);
                a = p;
            }
            rows.push(v);
        }
        Subspace::rref(f, labels, &rows)
    }

    /// All spanning trees as edge-index lists (small graphs only).
    pub fn spanning_trees(&self) -> Result<Vec<Vec<usize>>> {
        let m = self.edges.len();
        check_cap("edges for spanning tree enumeration", m, 24)?;
        let n = self.vertices.len();
        if n == 0 {
            return Ok(vec![]);
        }
        let verts: Vec<&String> = self.vertices.iter().collect();
        let pos: BTreeMap<&String, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        fn rec(
            g: &Graph,
            pos: &BTreeMap<&String, usize>,
            next: usize,
            need: usize,
            chosen: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if chosen.len() == need {
                let mut uf: Vec<usize> = (0..pos.len()).collect();
                fn find(uf: &mut [usize], x: usize) -> usize {
                    if uf[x] != x {
                        let r = find(uf, uf[x]);
                        uf[x] = r;
                    }
                    uf[x]
                }
                for &i in chosen.iter() {
                    let (a, b) = (find(&mut uf, pos[&g.edges[i].u]), find(&mut uf, pos[&g.edges[i].v]));
                    if a == b {
                        return;
                    }
                    uf[a] = b;
                }
                out.push(chosen.clone());
                return;
            }
            if g.edges.len() - next < need - chosen.len() {
                return;
            }
            chosen.push(next);
            rec(g, pos, next + 1, need, chosen, out);
            chosen.pop();
            rec(g, pos, next + 1, need, chosen, out);
        }
        rec(self, &pos, 0, n - 1, &mut chosen, &mut out);
        Ok(out)
    }

    /// The subgraph on all vertices with only the listed edges.
    pub fn spanning_subgraph(&self, edges: &[usize]) -> Graph {
        let mut g = Graph::new(format!("{}-tree", self.name));
        for v in &self.vertices {
            g.add_vertex(v.clone());
        }
        for &i in edges {
            let e = &self.edges[i];
            g.add_edge(&e.u, &e.v, Some(&e.label)).expect("subgraph of a simple graph");
        }
        g
    }
}

/// Extends a path from `start` through `v`; cycles are recorded when the path
/// returns to `start`, using only vertices above `start`.
fn cycle_search(
    nbrs: &[Vec<(usize, usize)>],
    start: usize,
    v: usize,
    len: usize,
    edges: Mask,
    on_path: &mut [bool],
    found: &mut BTreeSet<Mask>,
) -> Result<()> {
    for &(w, e) in &nbrs[v] {
        if edges & bit(e) != 0 {
            continue;
        }
        if w == start && len >= 2 {
            found.insert(edges | bit(e));
            check_cap("cycle count", found.len(), CYCLE_CAP)?;
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            cycle_search(nbrs, start, w, len + 1, edges | bit(e), on_path, found)?;
            on_path[w] = false;
        }
    }
    Ok(())
}

fn connected_mask(nbr: &[Mask], set: Mask) -> bool {
    if set == 0 {
        return false;
    }
    let mut seen = set & set.wrapping_neg();
    loop {
        let grow = crate::sets::bits(seen).fold(seen, |m, v| m | (nbr[v] & set));
        if grow == seen {
            return seen == set;
        }
        seen = grow;
    }
}

/// Visits every connected vertex set containing `s`'s seed exactly once,
/// branching on each candidate: include it, or ban it for good.
fn connected_sets(
    nbr: &[Mask],
    s: Mask,
    cand: Mask,
    banned: Mask,
    visit: &mut dyn FnMut(Mask) -> Result<()>,
) -> Result<()> {
    visit(s)?;
    let mut rest = cand;
    let mut banned = banned;
    while rest != 0 {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let grown = s | bit(w);
        let next = (rest | nbr[w]) & !grown & !banned;
        connected_sets(nbr, grown, next, banned | bit(w), visit)?;
        banned |= bit(w);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn graph(edges: &[(&str, &str)]) -> Graph {
        let mut g = Graph::new("g");
        for (u, v) in edges {
            g.add_edge(u, v, None).unwrap();
        }
        g
    }

    fn k4() -> Graph {
        graph(&[("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")])
    }

    #[test]
    fn k4_cycles_and_bonds() {
        let g = k4();
        assert_eq!(g.cycles().unwrap().1.len(), 7);
        assert_eq!(g.bonds().unwrap().1.len(), 7);
        let m = g.cycle_matroid().unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.cocircuits().len(), 7);
        assert_eq!(Matroid::from_representation(&g.cycle_space().unwrap()).unwrap(), m);
        assert_eq!(g.spanning_trees().unwrap().len(), 16);
    }

    #[test]
    fn rejects_non_simple() {
        let mut g = graph(&[("a", "b")]);
        assert!(g.add_edge("b", "a", None).is_err());
        assert!(g.add_edge("a", "a", None).is_err());
    }

    #[test]
    fn path_has_no_cycles_and_every_edge_is_a_bond() {
        let g = graph(&[("a", "b"), ("b", "c")]);
        assert!(g.cycles().unwrap().1.is_empty());
        assert_eq!(g.bonds().unwrap().1, vec![0b01, 0b10]);
    }
}
