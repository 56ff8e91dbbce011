//! Regular trees of matroids given by a finite prefix tree and a finite core
//! automaton, plus truncated unfoldings.

use std::collections::{BTreeMap, BTreeSet};

use super::{TomNode, TreeOfMatroids, TreeRepresentation};
use crate::error::{check_cap, Error, Result};
use crate::gf::Subspace;
use crate::matroid::Matroid;
use crate::sets::Ground;

/// Cap on the number of nodes an unfolding may create.
pub const UNFOLD_CAP: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Loc {
    Prefix(usize),
    Core(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixNode {
    pub name: String,
    pub matroid: Matroid,
    pub rep: Option<Subspace>,
}

/// A core state; `incoming` are the labels glued to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreState {
    pub name: String,
    pub matroid: Matroid,
    pub rep: Option<Subspace>,
    pub incoming: BTreeSet<String>,
}

/// A child edge from `source` to core state `target`; `map` sends source
/// labels onto the target's incoming labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub source: Loc,
    pub target: usize,
    pub map: BTreeMap<String, String>,
    pub priority: u32,
}

/// Which rays of the unfolding lie in Ψ, phrased on transition ids
/// (`source:name`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsiCondition {
    All,
    None,
    /// Rays using one of these transitions infinitely often.
    Buchi(BTreeSet<String>),
    /// Rays using these transitions only finitely often.
    CoBuchi(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePresentation {
    pub name: String,
    prefix: Vec<PrefixNode>,
    core: Vec<CoreState>,
    transitions: Vec<Transition>,
    real: Ground,
    prefix_adj: Vec<Vec<usize>>,
}

impl TreePresentation {
    pub fn new(
        name: impl Into<String>,
        prefix: Vec<PrefixNode>,
        core: Vec<CoreState>,
        transitions: Vec<Transition>,
        real: BTreeSet<String>,
    ) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::input("a presentation needs a prefix node"));
        }
        let names: BTreeSet<&String> = prefix.iter().map(|p| &p.name).chain(core.iter().map(|c| &c.name)).collect();
        if names.len() != prefix.len() + core.len() {
            return Err(Error::input("prefix and core names must be distinct"));
        }
        for p in &prefix {
            check_rep(&p.name, &p.matroid, p.rep.as_ref())?;
        }
        for c in &core {
            check_rep(&c.name, &c.matroid, c.rep.as_ref())?;
            if let Some(l) = c.incoming.iter().find(|l| c.matroid.ground().index(l).is_none()) {
                return Err(Error::input(format!("incoming label {l} is not on state {}", c.name)));
            }
        }
        // Prefix tree from shared labels.
        let mut owners: BTreeMap<&String, Vec<usize>> = BTreeMap::new();
        for (i, p) in prefix.iter().enumerate() {
            for l in p.matroid.ground().labels() {
                owners.entry(l).or_default().push(i);
            }
        }
        let mut prefix_adj = vec![Vec::new(); prefix.len()];
        for (l, ns) in &owners {
            match ns[..] {
                [_] => {}
                [a, b] => {
                    if real.contains(*l) {
                        return Err(Error::input(format!("real edge {l} is shared by two prefix nodes")));
                    }
                    if !prefix_adj[a].contains(&b) {
                        prefix_adj[a].push(b);
                        prefix_adj[b].push(a);
                    }
                }
                _ => return Err(Error::input(format!("label {l} lies on more than two prefix nodes"))),
            }
        }
        let adj_edges: usize = prefix_adj.iter().map(Vec::len).sum::<usize>() / 2;
        let dummy: Vec<TomNode> = prefix
            .iter()
            .map(|p| TomNode {
                name: p.name.clone(),
                matroid: p.matroid.clone(),
            })
            .collect();
        if adj_edges + 1 != prefix.len() || TreeOfMatroids::from_shared_labels(dummy, BTreeSet::new()).is_err() {
            return Err(Error::input("prefix nodes do not form a tree"));
        }
        if let Some(l) = real.iter().find(|l| !owners.contains_key(l)) {
            return Err(Error::input(format!("real edge {l} is on no prefix node")));
        }
        // Transitions.
        let mut used: BTreeSet<(Loc, String)> = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for t in &transitions {
            let (src_name, src_ground) = match t.source {
                Loc::Prefix(i) if i < prefix.len() => (&prefix[i].name, prefix[i].matroid.ground()),
                Loc::Core(s) if s < core.len() => (&core[s].name, core[s].matroid.ground()),
                _ => return Err(Error::input(format!("transition {} has a bad source", t.name))),
            };
            if !ids.insert(format!("{src_name}:{}", t.name)) {
                return Err(Error::input(format!("transition {src_name}:{} is listed twice", t.name)));
            }
            let target = core
                .get(t.target)
                .ok_or_else(|| Error::input(format!("transition {} has a bad target", t.name)))?;
            let image: BTreeSet<&String> = t.map.values().collect();
            if image.len() != t.map.len() || !image.iter().copied().eq(target.incoming.iter()) {
                return Err(Error::input(format!(
                    "transition {src_name}:{} must map onto the incoming labels of {}",
                    t.name, target.name
                )));
            }
            for a in t.map.keys() {
                if src_ground.index(a).is_none() {
                    return Err(Error::input(format!("label {a} is not on {src_name}")));
                }
                let bad = match t.source {
                    Loc::Prefix(_) => real.contains(a) || owners[a].len() > 1,
                    Loc::Core(s) => core[s].incoming.contains(a),
                };
                if bad || !used.insert((t.source, a.clone())) {
                    return Err(Error::input(format!("label {a} on {src_name} cannot start transition {}", t.name)));
                }
            }
        }
        for (i, p) in prefix.iter().enumerate() {
            for l in p.matroid.ground().labels() {
                if owners[l].len() == 1 && !real.contains(l) && !used.contains(&(Loc::Prefix(i), l.clone())) {
                    return Err(Error::input(format!("label {l} on {} is neither real nor an interface", p.name)));
                }
            }
        }
        for (s, c) in core.iter().enumerate() {
            for l in c.matroid.ground().labels() {
                if !c.incoming.contains(l) && !used.contains(&(Loc::Core(s), l.clone())) {
                    return Err(Error::input(format!("label {l} on core state {} starts no transition", c.name)));
                }
            }
        }
        Ok(TreePresentation {
            name: name.into(),
            prefix,
            core,
            transitions,
            real: Ground::new(real)?,
            prefix_adj,
        })
    }

    /// A finite tree viewed as a presentation with an empty core.
    pub fn from_tree(name: impl Into<String>, tree: &TreeOfMatroids, rep: Option<&TreeRepresentation>) -> Result<Self> {
        if !tree.dangling().is_empty() {
            return Err(Error::input("a truncated tree cannot serve as a presentation"));
        }
        let prefix = tree
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, t)| PrefixNode {
                name: t.name.clone(),
                matroid: t.matroid.clone(),
                rep: rep.map(|r| r.spaces[i].clone()),
            })
            .collect();
        Self::new(name, prefix, vec![], vec![], tree.ground().labels().iter().cloned().collect())
    }

    pub fn prefix(&self) -> &[PrefixNode] {
        &self.prefix
    }

    pub fn core(&self) -> &[CoreState] {
        &self.core
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// The real edges, all of which sit on prefix nodes.
    pub fn ground(&self) -> &Ground {
        &self.real
    }

    pub fn prefix_neighbours(&self, i: usize) -> &[usize] {
        &self.prefix_adj[i]
    }

    pub fn prefix_interface(&self, a: usize, b: usize) -> BTreeSet<String> {
        let gb = self.prefix[b].matroid.ground();
        self.prefix[a]
            .matroid
            .ground()
            .labels()
            .iter()
            .filter(|l| gb.index(l).is_some())
            .cloned()
            .collect()
    }

    pub fn loc_name(&self, loc: Loc) -> &str {
        match loc {
            Loc::Prefix(i) => &self.prefix[i].name,
            Loc::Core(s) => &self.core[s].name,
        }
    }

    pub fn loc_by_name(&self, name: &str) -> Option<Loc> {
        self.prefix
            .iter()
            .position(|p| p.name == name)
            .map(Loc::Prefix)
            .or_else(|| self.core.iter().position(|c| c.name == name).map(Loc::Core))
    }

    pub fn matroid(&self, loc: Loc) -> &Matroid {
        match loc {
            Loc::Prefix(i) => &self.prefix[i].matroid,
            Loc::Core(s) => &self.core[s].matroid,
        }
    }

    pub fn rep(&self, loc: Loc) -> Option<&Subspace> {
        match loc {
            Loc::Prefix(i) => self.prefix[i].rep.as_ref(),
            Loc::Core(s) => self.core[s].rep.as_ref(),
        }
    }

    pub fn is_represented(&self) -> bool {
        self.prefix.iter().all(|p| p.rep.is_some()) && self.core.iter().all(|c| c.rep.is_some())
    }

    pub fn locs(&self) -> impl Iterator<Item = Loc> {
        (0..self.prefix.len())
            .map(Loc::Prefix)
            .chain((0..self.core.len()).map(Loc::Core))
    }

    /// Transitions leaving `loc`, with their indices.
    pub fn transitions_from(&self, loc: Loc) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions.iter().enumerate().filter(move |(_, t)| t.source == loc)
    }

    pub fn transition_id(&self, k: usize) -> String {
        let t = &self.transitions[k];
        format!("{}:{}", self.loc_name(t.source), t.name)
    }

    pub fn transition_by_id(&self, id: &str) -> Option<usize> {
        (0..self.transitions.len()).find(|&k| self.transition_id(k) == id)
    }

    pub fn is_overlap1(&self) -> bool {
        self.transitions.iter().all(|t| t.map.len() == 1)
            && (0..self.prefix.len()).all(|a| {
                self.prefix_adj[a]
                    .iter()
                    .all(|&b| self.prefix_interface(a, b).len() == 1)
            })
    }

    /// Node-wise dual with complemented representations; priorities are kept.
    pub fn dual(&self) -> TreePresentation {
        let mut d = self.clone();
        for p in &mut d.prefix {
            p.matroid = p.matroid.dual();
            p.rep = p.rep.as_ref().map(Subspace::complement);
        }
        for c in &mut d.core {
            c.matroid = c.matroid.dual();
            c.rep = c.rep.as_ref().map(Subspace::complement);
        }
        d
    }

    /// The same presentation with the complementary ray condition.
    pub fn complement_psi(&self) -> TreePresentation {
        let mut d = self.clone();
        for t in &mut d.transitions {
            t.priority += 1;
        }
        d
    }

    /// Encodes a Ψ condition as transition priorities.
    pub fn with_psi(&self, psi: &PsiCondition) -> Result<TreePresentation> {
        let ids = |set: &BTreeSet<String>| -> Result<BTreeSet<usize>> {
            set.iter()
                .map(|id| {
                    self.transition_by_id(id)
                        .ok_or_else(|| Error::input(format!("unknown transition {id}")))
                })
                .collect()
        };
        let mut out = self.clone();
        let priority: Box<dyn Fn(usize) -> u32> = match psi {
            PsiCondition::All => Box::new(|_| 0),
            PsiCondition::None => Box::new(|_| 1),
            PsiCondition::Buchi(s) => {
                let s = ids(s)?;
                Box::new(move |k| if s.contains(&k) { 2 } else { 1 })
            }
            PsiCondition::CoBuchi(s) => {
                let s = ids(s)?;
                Box::new(move |k| if s.contains(&k) { 1 } else { 0 })
            }
        };
        for (k, t) in out.transitions.iter_mut().enumerate() {
            t.priority = priority(k);
        }
        Ok(out)
    }

    /// The tree of matroids unfolded to core depth `depth`; interfaces of the
    /// deepest instances are left dangling.
    pub fn unfold(&self, depth: usize) -> Result<Unfolding> {
        let mut nodes: Vec<TomNode> = Vec::new();
        let mut spaces: Vec<Option<Subspace>> = Vec::new();
        let mut origin = Vec::new();
        let mut labels: Vec<BTreeMap<String, String>> = Vec::new();
        let mut dangling = BTreeSet::new();
        for (i, p) in self.prefix.iter().enumerate() {
            let map: BTreeMap<String, String> = p
                .matroid
                .ground()
                .labels()
                .iter()
                .map(|l| (l.clone(), l.clone()))
                .collect();
            nodes.push(TomNode {
                name: p.name.clone(),
                matroid: p.matroid.clone(),
            });
            spaces.push(p.rep.clone());
            origin.push(UnfoldOrigin::Prefix(i));
            labels.push(map);
        }
        let mut frontier: Vec<usize> = (0..self.prefix.len()).collect();
        for level in 1..=depth + 1 {
            let mut next = Vec::new();
            for &parent in &frontier {
                let loc = origin[parent].loc();
                for (k, t) in self.transitions_from(loc) {
                    if level > depth {
                        dangling.extend(t.map.keys().map(|a| labels[parent][a].clone()));
                        continue;
                    }
                    let state = &self.core[t.target];
                    let name = format!("{}/{}", nodes[parent].name, t.name);
                    let back: BTreeMap<&String, &String> = t.map.iter().map(|(a, x)| (x, a)).collect();
                    let map: BTreeMap<String, String> = state
                        .matroid
                        .ground()
                        .labels()
                        .iter()
                        .map(|l| {
                            let g = match back.get(l) {
                                Some(a) => labels[parent][*a].clone(),
                                None => format!("{name}.{l}"),
                            };
                            (l.clone(), g)
                        })
                        .collect();
                    nodes.push(TomNode {
                        name,
                        matroid: relabel_matroid(&state.matroid, &map)?,
                    });
                    spaces.push(state.rep.as_ref().map(|u| u.relabel(&map)).transpose()?);
                    origin.push(UnfoldOrigin::Core {
                        state: t.target,
                        via: k,
                        parent,
                        level,
                    });
                    labels.push(map);
                    next.push(nodes.len() - 1);
                    check_cap("unfolding node count", nodes.len(), UNFOLD_CAP)?;
                }
            }
            frontier = next;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for a in 0..self.prefix.len() {
            edges.extend(self.prefix_adj[a].iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        for (i, o) in origin.iter().enumerate() {
            if let UnfoldOrigin::Core { parent, .. } = o {
                edges.push((*parent, i));
            }
        }
        let tree = TreeOfMatroids::new(nodes, edges, dangling)?;
        let reps = match spaces.into_iter().collect::<Option<Vec<_>>>() {
            Some(s) => Some(TreeRepresentation::new(&tree, s)?),
            None => None,
        };
        Ok(Unfolding {
            tree,
            reps,
            origin,
            labels,
            depth,
        })
    }
}

fn check_rep(name: &str, m: &Matroid, rep: Option<&Subspace>) -> Result<()> {
    if let Some(u) = rep {
        if Matroid::from_representation(u)? != *m {
            return Err(Error::input(format!("representation at {name} does not match its matroid")));
        }
    }
    Ok(())
}

fn relabel_matroid(m: &Matroid, map: &BTreeMap<String, String>) -> Result<Matroid> {
    let g = m.ground();
    let ground: Vec<&String> = g.labels().iter().map(|l| &map[l]).collect();
    let circuits: Vec<Vec<&String>> = m
        .circuits()
        .iter()
        .map(|&c| g.list(c).iter().map(|l| &map[l]).collect())
        .collect();
    Matroid::from_circuit_sets(ground, circuits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnfoldOrigin {
    Prefix(usize),
    Core {
        state: usize,
        via: usize,
        parent: usize,
        level: usize,
    },
}

impl UnfoldOrigin {
    pub fn loc(self) -> Loc {
        match self {
            UnfoldOrigin::Prefix(i) => Loc::Prefix(i),
            UnfoldOrigin::Core { state, .. } => Loc::Core(state),
        }
    }

    pub fn level(self) -> usize {
        match self {
            UnfoldOrigin::Prefix(_) => 0,
            UnfoldOrigin::Core { level, .. } => level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unfolding {
    pub tree: TreeOfMatroids,
    pub reps: Option<TreeRepresentation>,
    pub origin: Vec<UnfoldOrigin>,
    /// Per node: local label to global label.
    pub labels: Vec<BTreeMap<String, String>>,
    pub depth: usize,
}

impl Unfolding {
    /// Cuts the unfolding back to a smaller core depth.
    pub fn truncate(&self, depth: usize) -> Result<TreeOfMatroids> {
        let keep = self
            .origin
            .iter()
            .enumerate()
            .filter(|(_, o)| o.level() <= depth)
            .map(|(i, _)| i)
            .collect();
        self.tree.restrict(&keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    /// A root triangle with an infinite chain of parallel pairs below it.
    fn chain() -> TreePresentation {
        let root = PrefixNode {
            name: "root".into(),
            matroid: uniform(2, ["a", "b", "x"]).unwrap(),
            rep: None,
        };
        let s = CoreState {
            name: "s".into(),
            matroid: uniform(1, ["in", "out"]).unwrap(),
            rep: None,
            incoming: ["in".to_string()].into(),
        };
        let tr = |name: &str, source, from: &str| Transition {
            name: name.into(),
            source,
            target: 0,
            map: [(from.to_string(), "in".to_string())].into(),
            priority: 0,
        };
        TreePresentation::new(
            "chain",
            vec![root],
            vec![s],
            vec![tr("go", Loc::Prefix(0), "x"), tr("go", Loc::Core(0), "out")],
            ["a".to_string(), "b".to_string()].into(),
        )
        .unwrap()
    }

    #[test]
    fn unfolding_shapes() {
        let p = chain();
        let u = p.unfold(3).unwrap();
        assert_eq!(u.tree.len(), 4);
        assert_eq!(u.tree.ground().labels(), &["a", "b"]);
        assert_eq!(u.tree.dangling().len(), 1);
        assert!(u.tree.dangling().contains("root/go/go/go.out"));
    }

    #[test]
    fn truncation_matches_shallower_unfolding() {
        let p = chain();
        let deep = p.unfold(4).unwrap();
        for d in 0..4 {
            assert_eq!(deep.truncate(d).unwrap(), p.unfold(d).unwrap().tree);
        }
    }

    #[test]
    fn rejects_unused_core_label() {
        let root = PrefixNode {
            name: "root".into(),
            matroid: uniform(1, ["a", "x"]).unwrap(),
            rep: None,
        };
        let s = CoreState {
            name: "s".into(),
            matroid: uniform(1, ["in", "z"]).unwrap(),
            rep: None,
            incoming: ["in".to_string()].into(),
        };
        let t = Transition {
            name: "0".into(),
            source: Loc::Prefix(0),
            target: 0,
            map: [("x".to_string(), "in".to_string())].into(),
            priority: 0,
        };
        assert!(TreePresentation::new("bad", vec![root], vec![s], vec![t], ["a".to_string()].into()).is_err());
    }

    #[test]
    fn psi_encodings() {
        let p = chain();
        let b = p.with_psi(&PsiCondition::Buchi(["s:go".to_string()].into())).unwrap();
        assert_eq!(b.transitions()[1].priority, 2);
        assert_eq!(b.transitions()[0].priority, 1);
        assert_eq!(b.complement_psi().transitions()[1].priority, 3);
        assert!(p.with_psi(&PsiCondition::Buchi(["nope".to_string()].into())).is_err());
    }
}
