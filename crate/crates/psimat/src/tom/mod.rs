//! Trees of matroids: explicit finite trees, their precircuits, represented
//! trees with vector families, and finitely presented regular trees.

mod presentation;

pub use presentation::{
    CoreState, Loc, PrefixNode, PsiCondition, TreePresentation, Transition, Unfolding, UnfoldOrigin,
};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{check_cap, Error, Result};
use crate::gf::{sum_intersect, Field, FieldElement, Subspace, Vector};
use crate::matroid::Matroid;
use crate::sets::{bit, is_subset, minimal_nonempty, Ground, Mask};

/// Cap on node count for precircuit enumeration.
pub const NODE_CAP: usize = 64;

/// Cap on the number of precircuits collected during enumeration.
pub const PRECIRCUIT_CAP: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TomNode {
    pub name: String,
    pub matroid: Matroid,
}

/// How a node-local element sits in the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Real(usize),
    Dummy(usize),
    Dangling,
}

/// A finite tree of finite matroids. Adjacent nodes share their interface
/// labels; labels on exactly one node are real edges unless marked dangling
/// (an interface whose other side was cut off by truncation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOfMatroids {
    nodes: Vec<TomNode>,
    adj: Vec<Vec<usize>>,
    dangling: BTreeSet<String>,
    ground: Ground,
}

impl TreeOfMatroids {
    /// Builds a tree whose edges are exactly the node pairs sharing a label.
    pub fn from_shared_labels(nodes: Vec<TomNode>, dangling: BTreeSet<String>) -> Result<Self> {
        let owners = label_owners(&nodes)?;
        let mut edges = BTreeSet::new();
        for ns in owners.values() {
            if let [a, b] = ns[..] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        Self::new(nodes, edges.into_iter().collect(), dangling)
    }

    pub fn new(nodes: Vec<TomNode>, edges: Vec<(usize, usize)>, dangling: BTreeSet<String>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::input("a tree of matroids needs a node"));
        }
        let names: BTreeSet<&String> = nodes.iter().map(|t| &t.name).collect();
        if names.len() != n {
            return Err(Error::input("node names must be distinct"));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::input(format!("bad tree edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edge_count != n - 1 || !connected(&adj, &(0..n).collect::<Vec<_>>()) {
            return Err(Error::input("node adjacency is not a tree"));
        }
        let owners = label_owners(&nodes)?;
        let mut real = Vec::new();
        for (label, ns) in &owners {
            match ns[..] {
                [_] => {
                    if !dangling.contains(label) {
                        real.push(label.clone());
                    }
                }
                [a, b] => {
                    if !adj[a].contains(&b) {
                        return Err(Error::input(format!(
                            "label {label} is shared by non-adjacent nodes {} and {}",
                            nodes[a].name, nodes[b].name
                        )));
                    }
                    if dangling.contains(label) {
                        return Err(Error::input(format!("dangling label {label} is shared")));
                    }
                }
                _ => unreachable!(),
            }
        }
        if let Some(l) = dangling.iter().find(|l| !owners.contains_key(*l)) {
            return Err(Error::input(format!("dangling label {l} is on no node")));
        }
        Ok(TreeOfMatroids {
            nodes,
            adj,
            dangling,
            ground: Ground::new(real)?,
        })
    }

    pub fn single(name: impl Into<String>, matroid: Matroid) -> Self {
        Self::new(
            vec![TomNode {
                name: name.into(),
                matroid,
            }],
            vec![],
            BTreeSet::new(),
        )
        .expect("single node tree")
    }

    pub fn nodes(&self) -> &[TomNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbours(&self, t: usize) -> &[usize] {
        &self.adj[t]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn dangling(&self) -> &BTreeSet<String> {
        &self.dangling
    }

    /// The real (non-dummy) edges E(𝒯).
    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|t| t.name == name)
    }

    pub fn interface(&self, a: usize, b: usize) -> BTreeSet<String> {
        let la: BTreeSet<&String> = self.nodes[a].matroid.ground().labels().iter().collect();
        self.nodes[b]
            .matroid
            .ground()
            .labels()
            .iter()
            .filter(|l| la.contains(l))
            .cloned()
            .collect()
    }

    pub fn is_overlap1(&self) -> bool {
        self.edges().iter().all(|&(a, b)| self.interface(a, b).len() == 1)
    }

    fn slots(&self, t: usize) -> Vec<Slot> {
        let g = self.nodes[t].matroid.ground();
        g.labels()
            .iter()
            .map(|l| {
                if let Some(i) = self.ground.index(l) {
                    Slot::Real(i)
                } else if self.dangling.contains(l) {
                    Slot::Dangling
                } else {
                    let nb = self.adj[t]
                        .iter()
                        .copied()
                        .find(|&u| self.nodes[u].matroid.ground().index(l).is_some())
                        .expect("shared label has a neighbour");
                    Slot::Dummy(nb)
                }
            })
            .collect()
    }

    /// Maps a node-local mask onto E(𝒯).
    pub fn real_part(&self, t: usize, local: Mask) -> Mask {
        self.slots(t)
            .iter()
            .enumerate()
            .filter(|(i, _)| local & bit(*i) != 0)
            .fold(0, |m, (_, s)| match s {
                Slot::Real(g) => m | bit(*g),
                _ => m,
            })
    }

    pub fn dual(&self) -> TreeOfMatroids {
        TreeOfMatroids {
            nodes: self
                .nodes
                .iter()
                .map(|t| TomNode {
                    name: t.name.clone(),
                    matroid: t.matroid.dual(),
                })
                .collect(),
            adj: self.adj.clone(),
            dangling: self.dangling.clone(),
            ground: self.ground.clone(),
        }
    }

    /// Node-wise minor; both sets must consist of real edges.
    pub fn minor(&self, contract: &BTreeSet<String>, delete: &BTreeSet<String>) -> Result<TreeOfMatroids> {
        if let Some(l) = contract.intersection(delete).next() {
            return Err(Error::input(format!("{l} is both contracted and deleted")));
        }
        if let Some(l) = contract.iter().chain(delete).find(|l| self.ground.index(l).is_none()) {
            return Err(Error::input(format!("{l} is not a real edge of the tree")));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|t| {
                let g = t.matroid.ground();
                let c = g.mask(contract.iter().filter(|l| g.index(l).is_some()))?;
                let d = g.mask(delete.iter().filter(|l| g.index(l).is_some()))?;
                Ok(TomNode {
                    name: t.name.clone(),
                    matroid: t.matroid.minor(c, d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(nodes, self.edges(), self.dangling.clone())
    }

    pub fn contract(&self, set: &BTreeSet<String>) -> Result<TreeOfMatroids> {
        self.minor(set, &BTreeSet::new())
    }

    pub fn delete(&self, set: &BTreeSet<String>) -> Result<TreeOfMatroids> {
        self.minor(&BTreeSet::new(), set)
    }

    /// The subtree on `keep` (which must be connected); interfaces to removed
    /// nodes become dangling.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Result<TreeOfMatroids> {
        let order: Vec<usize> = keep.iter().copied().collect();
        if order.is_empty() || !connected(&self.adj, &order) {
            return Err(Error::input("restriction must be a nonempty connected node set"));
        }
        let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut dangling: BTreeSet<String> = order
            .iter()
            .flat_map(|&t| self.nodes[t].matroid.ground().labels())
            .filter(|l| self.dangling.contains(*l))
            .cloned()
            .collect();
        for &t in &order {
            for &u in &self.adj[t] {
                if !keep.contains(&u) {
                    dangling.extend(self.interface(t, u));
                }
            }
        }
        let nodes = order.iter().map(|&t| self.nodes[t].clone()).collect();
        let edges = self
            .edges()
            .into_iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|(a, b)| (index[&a], index[&b]))
            .collect();
        Self::new(nodes, edges, dangling)
    }

    /// Underlying sets of all precircuits, each listed once. Dangling labels
    /// never occur in the chosen circuits.
    pub fn precircuit_sets(&self) -> Result<Vec<Mask>> {
        check_cap("tree node count", self.len(), NODE_CAP)?;
        let slots: Vec<Vec<Slot>> = (0..self.len()).map(|t| self.slots(t)).collect();
        let mut all = BTreeSet::new();
        for top in 0..self.len() {
            for m in self.grow(&slots, top, None)? {
                all.insert(m);
            }
            check_cap("precircuit count", all.len(), PRECIRCUIT_CAP)?;
        }
        Ok(all.into_iter().collect())
    }

    /// Underlying sets of precircuits containing `t` whose subtree lies on
    /// t's side away from `parent`; `parent ∈ C` iff `parent` is `Some`.
    fn grow(&self, slots: &[Vec<Slot>], t: usize, parent: Option<usize>) -> Result<BTreeSet<Mask>> {
        let mut out = BTreeSet::new();
        let sl = &slots[t];
        for &o in self.nodes[t].matroid.circuits() {
            let mut ok = true;
            let mut real = 0;
            let mut children = Vec::new();
            for (i, s) in sl.iter().enumerate() {
                let inside = o & bit(i) != 0;
                match *s {
                    Slot::Real(g) if inside => real |= bit(g),
                    Slot::Dangling if inside => ok = false,
                    Slot::Dummy(u) => {
                        if Some(u) == parent {
                            ok &= inside;
                        } else if inside {
                            children.push(u);
                        }
                    }
                    _ => {}
                }
            }
            if !ok {
                continue;
            }
            let mut acc: BTreeSet<Mask> = [real].into_iter().collect();
            for &c in &children {
                let sub = self.grow(slots, c, Some(t))?;
                let mut next = BTreeSet::new();
                for &a in &acc {
                    for &b in &sub {
                        next.insert(a | b);
                    }
                }
                check_cap("precircuit count", next.len(), PRECIRCUIT_CAP)?;
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            out.extend(acc);
        }
        Ok(out)
    }

    /// All nonempty underlying sets of precircuits and the minimal ones.
    pub fn enumerate_circuits(&self) -> Result<(Vec<Mask>, Vec<Mask>)> {
        if !self.is_overlap1() {
            return Err(Error::input("precircuit enumeration needs overlap 1"));
        }
        let sets: Vec<Mask> = self.precircuit_sets()?.into_iter().filter(|&m| m != 0).collect();
        let minimal = minimal_nonempty(&sets);
        Ok((sets, minimal))
    }

    pub fn validate_precircuit(&self, p: &PreCircuit) -> PrecircuitVerdict {
        let mut problems = Vec::new();
        let mut nodes = BTreeSet::new();
        for name in p.o.keys() {
            match self.node_index(name) {
                Some(t) => {
                    nodes.insert(t);
                }
                None => problems.push(Violation::UnknownNode(name.clone())),
            }
        }
        if p.o.is_empty() {
            problems.push(Violation::Empty);
        } else if !connected(&self.adj, &nodes.iter().copied().collect::<Vec<_>>()) {
            problems.push(Violation::Disconnected);
        }
        let mut underlying = BTreeSet::new();
        for &t in &nodes {
            let node = &self.nodes[t];
            let g = node.matroid.ground();
            let o = &p.o[&node.name];
            let mask = match g.mask(o.iter()) {
                Ok(m) if node.matroid.is_circuit(m) => m,
                _ => {
                    problems.push(Violation::NotCircuit(node.name.clone()));
                    continue;
                }
            };
            underlying.extend(self.ground.set(self.real_part(t, mask)));
            for &u in &self.adj[t] {
                for label in self.interface(t, u) {
                    let in_o = o.contains(&label);
                    if in_o != nodes.contains(&u) {
                        problems.push(Violation::Biconditional {
                            node: node.name.clone(),
                            neighbour: self.nodes[u].name.clone(),
                            label,
                        });
                    }
                }
            }
        }
        PrecircuitVerdict {
            problems,
            underlying,
        }
    }
}

fn label_owners(nodes: &[TomNode]) -> Result<BTreeMap<String, Vec<usize>>> {
    let mut owners: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, t) in nodes.iter().enumerate() {
        for l in t.matroid.ground().labels() {
            owners.entry(l.clone()).or_default().push(i);
        }
    }
    if let Some((l, _)) = owners.iter().find(|(_, v)| v.len() > 2) {
        return Err(Error::input(format!("label {l} lies on more than two nodes")));
    }
    Ok(owners)
}

fn connected(adj: &[Vec<usize>], nodes: &[usize]) -> bool {
    let Some(&start) = nodes.first() else {
        return true;
    };
    let set: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        for &u in &adj[t] {
            if set.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == set.len()
}

/// A precircuit: a node set with one circuit (as labels) per node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreCircuit {
    pub o: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    Disconnected,
    UnknownNode(String),
    NotCircuit(String),
    Biconditional {
        node: String,
        neighbour: String,
        label: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecircuitVerdict {
    pub problems: Vec<Violation>,
    pub underlying: BTreeSet<String>,
}

impl PrecircuitVerdict {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// The △-glue (U1 + U2) ∩ k^{E1 △ E2}.
pub fn delta_glue(u1: &Subspace, u2: &Subspace) -> Result<Subspace> {
    let e1: BTreeSet<String> = u1.ambient().iter().cloned().collect();
    let e2: BTreeSet<String> = u2.ambient().iter().cloned().collect();
    let sym: BTreeSet<String> = e1.symmetric_difference(&e2).cloned().collect();
    sum_intersect(u1, u2, &sym)
}

/// One subspace per node with M(V(t)) = M(t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRepresentation {
    pub field: Field,
    pub spaces: Vec<Subspace>,
}

impl TreeRepresentation {
    pub fn new(tree: &TreeOfMatroids, spaces: Vec<Subspace>) -> Result<Self> {
        if spaces.len() != tree.len() {
            return Err(Error::input("one subspace per node is required"));
        }
        let field = spaces[0].field();
        for (t, u) in tree.nodes().iter().zip(&spaces) {
            if u.field() != field {
                return Err(Error::input("representation mixes fields"));
            }
            if Matroid::from_representation(u)? != t.matroid {
                return Err(Error::input(format!(
                    "subspace at {} does not represent its matroid",
                    t.name
                )));
            }
        }
        Ok(TreeRepresentation { field, spaces })
    }

    pub fn dual(&self) -> TreeRepresentation {
        TreeRepresentation {
            field: self.field,
            spaces: self.spaces.iter().map(Subspace::complement).collect(),
        }
    }
}

/// One vector per node (aligned with the tree's node order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiVector {
    pub vectors: Vec<Vector>,
    pub depth: Option<usize>,
}

impl PsiVector {
    pub fn check(&self, tree: &TreeOfMatroids, rep: &TreeRepresentation) -> Result<()> {
        if self.vectors.len() != tree.len() {
            return Err(Error::input("one vector per node is required"));
        }
        for (t, (v, u)) in self.vectors.iter().zip(&rep.spaces).enumerate() {
            if !u.contains(v) {
                return Err(Error::input(format!(
                    "vector {v} is not in V({})",
                    tree.nodes()[t].name
                )));
            }
        }
        for (a, b) in tree.edges() {
            for l in tree.interface(a, b) {
                if self.vectors[a].get(&l) != self.vectors[b].get(&l) {
                    return Err(Error::input(format!("vectors disagree on interface label {l}")));
                }
            }
        }
        Ok(())
    }

    pub fn support(&self, tree: &TreeOfMatroids) -> BTreeSet<String> {
        self.vectors
            .iter()
            .flat_map(|v| v.support())
            .filter(|l| tree.ground().index(l).is_some())
            .collect()
    }
}

/// Every interface-matching vector family of a represented finite tree.
pub fn psi_vectors(tree: &TreeOfMatroids, rep: &TreeRepresentation, cap: usize) -> Result<Vec<PsiVector>> {
    let n = tree.len();
    // Breadth-first order from node 0 with parents.
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        for &u in tree.neighbours(t) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = t;
                order.push(u);
            }
        }
        i += 1;
    }
    let all: Vec<Vec<Vector>> = rep.spaces.iter().map(Subspace::vectors).collect();
    let mut partial: Vec<Vec<Option<Vector>>> = vec![vec![None; n]];
    for &t in &order {
        let mut next = Vec::new();
        for fam in &partial {
            for v in &all[t] {
                let fits = t == 0 || {
                    let p = parent[t];
                    let pv = fam[p].as_ref().expect("parent chosen");
                    tree.interface(p, t).iter().all(|l| pv.get(l) == v.get(l))
                };
                if fits {
                    let mut f = fam.clone();
                    f[t] = Some(v.clone());
                    next.push(f);
                }
            }
        }
        check_cap("vector family count", next.len(), cap)?;
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|f| PsiVector {
            vectors: f.into_iter().map(|v| v.expect("assigned")).collect(),
            depth: None,
        })
        .collect())
}

/// Σ over real edges of v̂ ŵ, where ŵ carries the sign (-1)^{d(t)} for the
/// distance d(t) from `root`.
pub fn hat_pairing_from(
    tree: &TreeOfMatroids,
    rep: &TreeRepresentation,
    v: &PsiVector,
    w: &PsiVector,
    root: usize,
) -> Result<FieldElement> {
    v.check(tree, rep)?;
    w.check(tree, &rep.dual())?;
    for (t, (a, b)) in v.vectors.iter().zip(&w.vectors).enumerate() {
        if let Some(l) = tree
            .dangling()
            .iter()
            .find(|l| a.get(l) != 0 || b.get(l) != 0)
        {
            return Err(Error::input(format!(
                "boundary label {l} at {} is nonzero; pairing undefined",
                tree.nodes()[t].name
            )));
        }
    }
    let f = rep.field;
    let dist = distances(tree, root);
    let mut total = 0u8;
    for (t, node) in tree.nodes().iter().enumerate() {
        for l in node.matroid.ground().labels() {
            if tree.ground().index(l).is_none() {
                continue;
            }
            let mut term = f.mul(v.vectors[t].get(l), w.vectors[t].get(l));
            if dist[t] % 2 == 1 {
                term = f.neg(term);
            }
            total = f.add(total, term);
        }
    }
    Ok(f.element(total))
}

pub fn hat_pairing(
    tree: &TreeOfMatroids,
    rep: &TreeRepresentation,
    v: &PsiVector,
    w: &PsiVector,
) -> Result<FieldElement> {
    hat_pairing_from(tree, rep, v, w, 0)
}

fn distances(tree: &TreeOfMatroids, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; tree.len()];
    dist[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        for &u in tree.neighbours(t) {
            if dist[u] == usize::MAX {
                dist[u] = dist[t] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Whether any precircuit set of the tree meets a precircuit set of its dual
/// in exactly one element; returns such a pair.
pub fn single_meeting(tree: &TreeOfMatroids) -> Result<Option<(Mask, Mask)>> {
    let c = tree.precircuit_sets()?;
    let d = tree.dual().precircuit_sets()?;
    Ok(c.iter()
        .flat_map(|&a| d.iter().map(move |&b| (a, b)))
        .find(|(a, b)| (a & b).count_ones() == 1))
}

/// Whether `m` is contained in the union `within`.
pub fn inside(m: Mask, within: Mask) -> bool {
    is_subset(m, within)
}

/// Real-edge masks of a list of labelled sets.
pub fn masks_of(ground: &Ground, sets: &[BTreeSet<String>]) -> Result<Vec<Mask>> {
    sets.iter().map(|s| ground.mask(s.iter())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    fn triangle(name: &str, labels: [&str; 3]) -> TomNode {
        TomNode {
            name: name.into(),
            matroid: uniform(2, labels).unwrap(),
        }
    }

    fn glued() -> TreeOfMatroids {
        TreeOfMatroids::from_shared_labels(
            vec![triangle("s", ["e", "a", "b"]), triangle("t", ["e", "c", "d"])],
            BTreeSet::new(),
        )
        .unwrap()
    }

    #[test]
    fn glued_triangles_have_one_circuit() {
        let t = glued();
        assert!(t.is_overlap1());
        let (all, minimal) = t.enumerate_circuits().unwrap();
        assert_eq!(all, vec![0b1111]);
        assert_eq!(minimal, all);
        assert_eq!(t.ground().labels(), &["a", "b", "c", "d"]);
    }

    #[test]
    fn chain_of_three_triangles() {
        let t = TreeOfMatroids::from_shared_labels(
            vec![
                triangle("r", ["a", "b", "x"]),
                triangle("s", ["x", "c", "y"]),
                triangle("t", ["y", "d", "e"]),
            ],
            BTreeSet::new(),
        )
        .unwrap();
        let (all, _) = t.enumerate_circuits().unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].count_ones(), 5);
    }

    #[test]
    fn single_node_circuits() {
        let m = uniform(1, ["a", "b", "c"]).unwrap();
        let t = TreeOfMatroids::single("only", m.clone());
        assert_eq!(t.enumerate_circuits().unwrap().1, m.circuits());
    }

    #[test]
    fn dual_is_nodewise() {
        let t = glued();
        let d = t.dual();
        assert_eq!(d.nodes()[0].matroid, uniform(1, ["e", "a", "b"]).unwrap());
        assert_eq!(d.dual(), t);
    }

    #[test]
    fn minors_reject_dummies() {
        let t = glued();
        let e: BTreeSet<String> = ["e".to_string()].into();
        assert!(t.contract(&e).is_err());
        let a: BTreeSet<String> = ["a".to_string()].into();
        assert_eq!(t.contract(&a).unwrap().dual(), t.dual().delete(&a).unwrap());
    }

    #[test]
    fn validate_precircuit_examples() {
        let t = glued();
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        let good = PreCircuit {
            o: [("s".to_string(), set(&["e", "a", "b"])), ("t".to_string(), set(&["e", "c", "d"]))]
                .into(),
        };
        let v = t.validate_precircuit(&good);
        assert!(v.is_valid());
        assert_eq!(v.underlying, set(&["a", "b", "c", "d"]));
        let bad = PreCircuit {
            o: [("s".to_string(), set(&["e", "a", "b"]))].into(),
        };
        assert!(matches!(
            t.validate_precircuit(&bad).problems[..],
            [Violation::Biconditional { .. }]
        ));
        assert_eq!(
            t.validate_precircuit(&PreCircuit::default()).problems,
            vec![Violation::Empty]
        );
    }

    #[test]
    fn glue_of_triangles_is_c4() {
        let f = Field::GF2;
        let u1 = Subspace::rref(f, ["e", "a", "b"], &[Vector::new(f, [("e", 1), ("a", 1), ("b", 1)])])
            .unwrap();
        let u2 = Subspace::rref(f, ["e", "c", "d"], &[Vector::new(f, [("e", 1), ("c", 1), ("d", 1)])])
            .unwrap();
        let g = delta_glue(&u1, &u2).unwrap();
        let m = Matroid::from_representation(&g).unwrap();
        assert_eq!(m, uniform(3, ["a", "b", "c", "d"]).unwrap());
    }
}
