//! The undomination graph U(G,T) on V(G)×V(T), the walk maps between G and
//! U, and the X×X separation check.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{check_cap, Error, Result};

/// Cap on vertices for the exhaustive separation check (2^n separators).
pub const SEPARATION_CAP: usize = 12;

/// A vertex (v, t) of U.
pub type UVertex = (String, String);

fn name(v: &str, t: &str) -> String {
    format!("{v}@{t}")
}

#[derive(Debug, Clone)]
pub struct UndominationGraph {
    pub graph: Graph,
    /// G-edges (v,v′)(v′,v), one per edge vv′ of G.
    pub g_edges: Vec<(UVertex, UVertex)>,
    pub t_edges: usize,
}

impl UndominationGraph {
    /// Each vertex of U meets at most one G-edge.
    pub fn g_edges_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.g_edges.iter().all(|(a, b)| seen.insert(a.clone()) && seen.insert(b.clone()))
    }
}

fn check_spanning_tree(g: &Graph, t: &Graph) -> Result<()> {
    if t.vertices() != g.vertices() {
        return Err(Error::input("T must span the vertices of G"));
    }
    if !t.is_connected() || t.edges().len() + 1 != t.vertices().len() {
        return Err(Error::input("T must be a tree"));
    }
    if let Some(e) = t.edges().iter().find(|e| g.edge_between(&e.u, &e.v).is_none()) {
        return Err(Error::input(format!("tree edge {} {} is not in G", e.u, e.v)));
    }
    Ok(())
}

pub fn undomination_graph(g: &Graph, t: &Graph) -> Result<UndominationGraph> {
    check_spanning_tree(g, t)?;
    let mut u = Graph::new(format!("U({},{})", g.name, t.name));
    for v in g.vertices() {
        for x in t.vertices() {
            u.add_vertex(name(v, x));
        }
    }
    let mut t_edges = 0;
    for v in g.vertices() {
        for e in t.edges() {
            u.add_edge(&name(v, &e.u), &name(v, &e.v), Some(&format!("T:{v}:{}", e.label)))?;
            t_edges += 1;
        }
    }
    let mut g_edges = Vec::new();
    for e in g.edges() {
        u.add_edge(&name(&e.u, &e.v), &name(&e.v, &e.u), Some(&format!("G:{}", e.label)))?;
        g_edges.push(((e.u.clone(), e.v.clone()), (e.v.clone(), e.u.clone())));
    }
    Ok(UndominationGraph {
        graph: u,
        g_edges,
        t_edges,
    })
}

/// The vertex path from `a` to `b` in the tree `t`.
fn tree_path(t: &Graph, a: &str, b: &str) -> Result<Vec<String>> {
    let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for w in t.neighbours(v) {
            if seen.insert(w.as_str()) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    if !seen.contains(b) {
        return Err(Error::input(format!("{b} is not reachable from {a} in T")));
    }
    let mut path = vec![b.to_string()];
    let mut x = b;
    while x != a {
        x = prev[x];
        path.push(x.to_string());
    }
    path.reverse();
    Ok(path)
}

fn check_walk(g: &Graph, p: &[String]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::input("a walk needs a vertex"));
    }
    if let Some(v) = p.iter().find(|v| !g.vertices().contains(*v)) {
        return Err(Error::input(format!("walk vertex {v} is not in G")));
    }
    if let Some(w) = p.windows(2).find(|w| g.edge_between(&w[0], &w[1]).is_none()) {
        return Err(Error::input(format!("walk step {} {} is not an edge", w[0], w[1])));
    }
    Ok(())
}

/// True if the walk traverses some edge twice; the round trip between walk
/// maps is only guaranteed otherwise.
pub fn repeats_edge(p: &[String]) -> bool {
    let mut seen = BTreeSet::new();
    p.windows(2).any(|w| !seen.insert(edge_key(&w[0], &w[1])))
}

/// u_{t,t′}(P): along each vertex p_i, the T-path between the neighbouring
/// walk vertices (t and t′ at the ends), joined by the G-edges of P.
pub fn walk_u(g: &Graph, t: &Graph, p: &[String], t0: &str, t1: &str) -> Result<Vec<UVertex>> {
    check_spanning_tree(g, t)?;
    check_walk(g, p)?;
    let n = p.len();
    let mut out = Vec::new();
    for i in 0..n {
        let from = if i == 0 { t0 } else { &p[i - 1] };
        let to = if i + 1 == n { t1 } else { &p[i + 1] };
        for x in tree_path(t, from, to)? {
            out.push((p[i].clone(), x));
        }
    }
    Ok(out)
}

/// g(P_U): the walk in G traced by the G-edges of a walk in U.
pub fn walk_g(g: &Graph, t: &Graph, pu: &[UVertex]) -> Result<Vec<String>> {
    let Some(first) = pu.first() else {
        return Err(Error::input("a walk needs a vertex"));
    };
    let mut out = vec![first.0.clone()];
    for w in pu.windows(2) {
        let ((a, b), (c, d)) = (&w[0], &w[1]);
        if a == c {
            if t.edge_between(b, d).is_none() {
                return Err(Error::input(format!("step ({a},{b}) ({c},{d}) is not a U-edge")));
            }
        } else if c == b && d == a && g.edge_between(a, b).is_some() {
            out.push(c.clone());
        } else {
            return Err(Error::input(format!("step ({a},{b}) ({c},{d}) is not a U-edge")));
        }
    }
    Ok(out)
}

fn edge_key(a: &str, b: &str) -> (String, String) {
    (a.min(b).to_string(), a.max(b).to_string())
}

/// A random walk that never repeats an edge, with at most `max_len` steps.
pub fn random_trail<R: Rng>(g: &Graph, rng: &mut R, max_len: usize) -> Vec<String> {
    let verts: Vec<&String> = g.vertices().iter().collect();
    let mut p = vec![(*verts.choose(rng).expect("nonempty graph")).clone()];
    let len = rng.gen_range(0..=max_len);
    let mut used = BTreeSet::new();
    for _ in 0..len {
        let v = p.last().expect("nonempty").clone();
        let options: Vec<&String> = g.neighbours(&v).filter(|w| !used.contains(&edge_key(&v, w))).collect();
        let Some(&w) = options.choose(rng) else { break };
        used.insert(edge_key(&v, w));
        p.push(w.clone());
    }
    p
}

/// A separator X, vertices v and v′ it separates in G, and vertices (v,t),
/// (v′,t′) it fails to separate in U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationFailure {
    pub x: BTreeSet<String>,
    pub a: UVertex,
    pub b: UVertex,
}

/// Checks for every X ⊆ V(G) that components of U − X×X never mix vertices
/// whose first coordinates lie in different components of G − X.
pub fn separation_holds(g: &Graph, t: &Graph) -> Result<Option<SeparationFailure>> {
    check_spanning_tree(g, t)?;
    let n = g.vertices().len();
    check_cap("vertices for the separation check", n, SEPARATION_CAP)?;
    let verts: Vec<&String> = g.vertices().iter().collect();
    let pos: BTreeMap<&String, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let gadj: Vec<Vec<usize>> = verts.iter().map(|v| g.neighbours(v).map(|w| pos[w]).collect()).collect();
    // U vertex (v, x) has index v * n + x.
    let mut uadj: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for v in 0..n {
        for e in t.edges() {
            let (a, b) = (v * n + pos[&e.u], v * n + pos[&e.v]);
            uadj[a].push(b);
            uadj[b].push(a);
        }
    }
    for e in g.edges() {
        let (a, b) = (pos[&e.u], pos[&e.v]);
        uadj[a * n + b].push(b * n + a);
        uadj[b * n + a].push(a * n + b);
    }
    let mut gcomp = vec![usize::MAX; n];
    let mut ucomp = vec![usize::MAX; n * n];
    for x in 0u64..(1 << n) {
        let in_x = |v: usize| x & (1 << v) != 0;
        gcomp.fill(usize::MAX);
        let mut count = 0;
        for s in (0..n).filter(|&s| !in_x(s)) {
            if gcomp[s] != usize::MAX {
                continue;
            }
            gcomp[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &gadj[v] {
                    if !in_x(w) && gcomp[w] == usize::MAX {
                        gcomp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        if count < 2 {
            continue;
        }
        let removed = |u: usize| in_x(u / n) && in_x(u % n);
        ucomp.fill(usize::MAX);
        for s in (0..n * n).filter(|&s| !removed(s)) {
            if ucomp[s] != usize::MAX {
                continue;
            }
            ucomp[s] = s;
            // The first vertex seen whose G-coordinate avoids X.
            let mut anchor: Option<usize> = (!in_x(s / n)).then_some(s);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                if !in_x(u / n) {
                    match anchor {
                        Some(a) if gcomp[a / n] != gcomp[u / n] => {
                            let label = |i: usize| (verts[i / n].clone(), verts[i % n].clone());
                            return Ok(Some(SeparationFailure {
                                x: (0..n).filter(|&v| in_x(v)).map(|v| verts[v].clone()).collect(),
                                a: label(a),
                                b: label(u),
                            }));
                        }
                        None => anchor = Some(u),
                        _ => {}
                    }
                }
                for &w in &uadj[u] {
                    if !removed(w) && ucomp[w] == usize::MAX {
                        ucomp[w] = s;
                        stack.push(w);
                    }
                }
            }
        }
    }
    Ok(None)
}

/// One connected graph on vertices 0..n per isomorphism class.
pub fn connected_graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    check_cap("vertices for graph enumeration", n, 7)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(a, b)| index[&(p[a].min(p[b]), p[a].max(p[b]))])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    'mask: for m in 0u32..(1 << pairs.len()) {
        for map in &maps {
            let image = (0..pairs.len()).filter(|&i| m & (1 << i) != 0).fold(0u32, |acc, i| acc | (1 << map[i]));
            if image < m {
                continue 'mask;
            }
        }
        let mut g = Graph::new(format!("n{n}m{m}"));
        for v in 0..n {
            g.add_vertex(v.to_string());
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if m & (1 << i) != 0 {
                g.add_edge(&a.to_string(), &b.to_string(), None)?;
            }
        }
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        let mut g = Graph::new(format!("P{n}"));
        for i in 1..n {
            g.add_edge(&format!("p{i}"), &format!("p{}", i + 1), None).unwrap();
        }
        g
    }

    fn walk(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn path_three_counts() {
        let g = path(3);
        let u = undomination_graph(&g, &g).unwrap();
        assert_eq!(u.graph.vertices().len(), 9);
        assert_eq!(u.g_edges.len(), 2);
        assert_eq!(u.t_edges, 6);
        assert!(u.g_edges_disjoint());
    }

    #[test]
    fn single_edge_round_trip() {
        let g = path(2);
        let p = walk(&["p1", "p2"]);
        for t0 in ["p1", "p2"] {
            for t1 in ["p1", "p2"] {
                let pu = walk_u(&g, &g, &p, t0, t1).unwrap();
                assert_eq!(walk_g(&g, &g, &pu).unwrap(), p);
            }
        }
    }

    #[test]
    fn length_three_walk_in_p4() {
        let g = path(4);
        let p = walk(&["p1", "p2", "p3", "p4"]);
        let pu = walk_u(&g, &g, &p, "p4", "p1").unwrap();
        assert_eq!(pu.first(), Some(&("p1".to_string(), "p4".to_string())));
        assert_eq!(pu.last(), Some(&("p4".to_string(), "p1".to_string())));
        assert_eq!(walk_g(&g, &g, &pu).unwrap(), p);
        assert_eq!(walk_u(&g, &g, &p, "p4", "p1").unwrap(), pu);
    }

    #[test]
    fn random_trails_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = Graph::new("k4");
        for (a, b) in [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")] {
            g.add_edge(a, b, None).unwrap();
        }
        let t = g.spanning_subgraph(&[0, 1, 2]);
        for _ in 0..50 {
            let p = random_trail(&g, &mut rng, 6);
            assert!(!repeats_edge(&p));
            let pu = walk_u(&g, &t, &p, "b", "c").unwrap();
            assert_eq!(walk_g(&g, &t, &pu).unwrap(), p);
        }
    }

    #[test]
    fn non_edges_are_rejected() {
        let g = path(3);
        assert!(walk_u(&g, &g, &walk(&["p1", "p3"]), "p1", "p1").is_err());
        let bad = vec![("p1".to_string(), "p1".to_string()), ("p2".to_string(), "p2".to_string())];
        assert!(walk_g(&g, &g, &bad).is_err());
    }

    #[test]
    fn separation_on_small_graphs() {
        for g in connected_graphs_up_to_iso(4).unwrap() {
            for tr in g.spanning_trees().unwrap() {
                assert_eq!(separation_holds(&g, &g.spanning_subgraph(&tr)).unwrap(), None);
            }
        }
    }

    #[test]
    fn graph_counts_up_to_iso() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }
}
