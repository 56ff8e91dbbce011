//! Reading Sarah's positional strategies back as precircuits and vector
//! families of a truncated unfolding.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{Entry, ParityArena, Payload, Play, Player, Strategy};
use crate::error::{check_cap, Error, Result};
use crate::gf::{in_span, Vector};
use crate::tom::{Loc, PreCircuit, PsiVector, TreePresentation, UnfoldOrigin, Unfolding};

/// Cap on the number of play prefixes summed during materialization.
pub const PLAY_CAP: usize = 1 << 16;

/// One row of a strategy automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyLine {
    pub at: String,
    pub entry: String,
    pub challenge: String,
    pub play: String,
}

fn entry_text(p: &TreePresentation, entry: Entry) -> String {
    match entry {
        Entry::Start => "start".into(),
        Entry::Prefix(j) => format!("from {}", p.prefix()[j].name),
        Entry::Transition(k) => format!("via {}", p.transition_id(k)),
    }
}

fn play_text(p: &TreePresentation, loc: Loc, play: &Play) -> String {
    match play {
        Play::Circuit(o) => p.matroid(loc).ground().show(*o).to_string(),
        Play::Vector(v) => v.to_string(),
    }
}

/// Sarah positions reachable under her strategy from the initial position.
fn reachable(arena: &ParityArena, s: &Strategy) -> Result<Vec<usize>> {
    let v0 = arena.initial();
    if s.winner[v0] != Player::Sarah {
        return Err(Error::input("Sarah does not win the initial position"));
    }
    let mut seen = BTreeSet::from([v0]);
    let mut stack = vec![v0];
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        let Some(c) = s.choice[v] else {
            return Err(Error::invariant(format!("no strategy choice at winning position {v}")));
        };
        for &w in arena.moves(c) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The strategy automaton: Sarah's choice at every reachable position.
pub fn strategy_lines(p: &TreePresentation, arena: &ParityArena, s: &Strategy) -> Result<Vec<StrategyLine>> {
    reachable(arena, s)?
        .into_iter()
        .map(|v| {
            let Payload::SarahTurn { loc, entry, challenge } = &arena.positions()[v].payload else {
                return Err(Error::invariant("strategy reaches a non-Sarah position"));
            };
            let c = s.choice[v].expect("checked by reachable");
            let Payload::ColinTurn { play, .. } = &arena.positions()[c].payload else {
                return Err(Error::invariant("Sarah's choice is not a Colin position"));
            };
            Ok(StrategyLine {
                at: p.loc_name(*loc).to_string(),
                entry: entry_text(p, *entry),
                challenge: challenge.to_string(),
                play: play_text(p, *loc, play),
            })
        })
        .collect()
}

/// Node of the unfolding reached from `node` by entering `loc` via `entry`.
fn step(children: &HashMap<(usize, usize), usize>, node: usize, loc: Loc, entry: Entry) -> Option<usize> {
    match (entry, loc) {
        (Entry::Transition(k), _) => children.get(&(node, k)).copied(),
        (_, Loc::Prefix(i)) => Some(i),
        _ => None,
    }
}

fn child_index(unf: &Unfolding) -> HashMap<(usize, usize), usize> {
    unf.origin
        .iter()
        .enumerate()
        .filter_map(|(i, o)| match *o {
            UnfoldOrigin::Core { via, parent, .. } => Some(((parent, via), i)),
            UnfoldOrigin::Prefix(_) => None,
        })
        .collect()
}

fn sarah_payload(arena: &ParityArena, v: usize) -> (Loc, Entry) {
    match &arena.positions()[v].payload {
        Payload::SarahTurn { loc, entry, .. } => (*loc, *entry),
        _ => panic!("position {v} is not a Sarah turn"),
    }
}

/// Follows Sarah's strategy through the unfolding to core depth `depth`,
/// recording her circuit at each node reached.
pub fn materialize_precircuit(
    p: &TreePresentation,
    arena: &ParityArena,
    s: &Strategy,
    depth: usize,
) -> Result<(Unfolding, PreCircuit)> {
    reachable(arena, s)?;
    let unf = p.unfold(depth)?;
    let children = child_index(&unf);
    let (loc0, _) = sarah_payload(arena, arena.initial());
    let start = step(&children, 0, loc0, Entry::Start).expect("start is a prefix node");
    let mut pre = PreCircuit::default();
    let mut stack = vec![(start, arena.initial())];
    while let Some((node, v)) = stack.pop() {
        let c = s.choice[v].expect("reachable positions have choices");
        let Payload::ColinTurn {
            loc,
            play: Play::Circuit(o),
            ..
        } = &arena.positions()[c].payload
        else {
            return Err(Error::input("precircuits come from the circuit arena"));
        };
        let local = p.matroid(*loc).ground().list(*o);
        let global: BTreeSet<String> = local.iter().map(|l| unf.labels[node][l].clone()).collect();
        pre.o.insert(unf.tree.nodes()[node].name.clone(), global);
        for &w in arena.moves(c) {
            let (wl, we) = sarah_payload(arena, w);
            if let Some(next) = step(&children, node, wl, we) {
                stack.push((next, w));
            }
        }
    }
    Ok((unf, pre))
}

/// Assembles the weighted sum over Sarah's plays of her vectors, node by
/// node, to core depth `depth`, and checks the result is interface-matching.
pub fn materialize_vector(
    p: &TreePresentation,
    arena: &ParityArena,
    s: &Strategy,
    depth: usize,
) -> Result<(Unfolding, PsiVector)> {
    reachable(arena, s)?;
    let unf = p.unfold(depth)?;
    let Some(rep) = unf.reps.clone() else {
        return Err(Error::input("vector materialization needs a representation"));
    };
    let field = rep.field;
    let children = child_index(&unf);
    let global = |node: usize, v: &Vector| v.relabel(&unf.labels[node]);
    let colin_vector = |c: usize| match &arena.positions()[c].payload {
        Payload::ColinTurn {
            play: Play::Vector(v), ..
        } => Ok(v.clone()),
        _ => Err(Error::input("vectors come from the representable arena")),
    };
    let mut sums: Vec<Vector> = vec![Vector::zero(field); unf.tree.len()];
    let (loc0, _) = sarah_payload(arena, arena.initial());
    let start = step(&children, 0, loc0, Entry::Start).expect("start is a prefix node");
    let c0 = s.choice[arena.initial()].expect("reachable");
    // Each item is a play prefix: node, Colin position after Sarah's move,
    // her vector in global labels, and the product of coefficients so far.
    let mut stack = vec![(start, c0, global(start, &colin_vector(c0)?), 1u8)];
    let mut plays = 0usize;
    while let Some((node, c, r, coef)) = stack.pop() {
        plays += 1;
        check_cap("materialized plays", plays, PLAY_CAP)?;
        sums[node] = sums[node].add(&r.scale(coef));
        let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &w in arena.moves(c) {
            let (wl, we) = sarah_payload(arena, w);
            let Some(next) = step(&children, node, wl, we) else {
                continue;
            };
            let cw = s.choice[w].ok_or_else(|| Error::invariant("strategy leaves Sarah's region"))?;
            groups.entry(next).or_default().insert(cw);
        }
        for (next, options) in groups {
            let iface = unf.tree.interface(node, next);
            let options: Vec<usize> = options.into_iter().collect();
            let vs: Vec<Vector> = options
                .iter()
                .map(|&cw| Ok(global(next, &colin_vector(cw)?)))
                .collect::<Result<_>>()?;
            let restricted: Vec<Vector> = vs.iter().map(|v| v.restrict(&iface)).collect();
            let lambda = in_span(&r.restrict(&iface), &restricted).ok_or_else(|| {
                Error::invariant(format!(
                    "restriction at {} is outside the span of Sarah's replies",
                    unf.tree.nodes()[next].name
                ))
            })?;
            for ((cw, v), l) in options.iter().zip(vs).zip(lambda) {
                if l != 0 {
                    stack.push((next, *cw, v, field.mul(coef, l)));
                }
            }
        }
    }
    let psi = PsiVector {
        vectors: sums,
        depth: Some(depth),
    };
    psi.check(&unf.tree, &rep).map_err(|e| Error::invariant(format!("materialized family: {e}")))?;
    Ok((unf, psi))
}

/// Compares a circuit arena with a representable arena of the same
/// presentation (binary, interfaces of size 1): Sarah positions must match
/// by node and entry, and at each the minimal sets of Colin replies agree.
pub fn arena_bisimilar(circuit: &ParityArena, rep: &ParityArena) -> bool {
    let sarah_keys = |a: &ParityArena| -> BTreeMap<(Loc, Entry), usize> {
        (0..a.len())
            .filter_map(|v| match &a.positions()[v].payload {
                Payload::SarahTurn { loc, entry, .. } => Some(((*loc, *entry), v)),
                _ => None,
            })
            .collect()
    };
    let k1 = sarah_keys(circuit);
    let k2 = sarah_keys(rep);
    if k1.len() != k2.len() || !k1.keys().eq(k2.keys()) {
        return false;
    }
    let minimal_replies = |a: &ParityArena, v: usize| -> BTreeSet<BTreeSet<(Loc, Entry)>> {
        let sets: Vec<BTreeSet<(Loc, Entry)>> = a
            .moves(v)
            .iter()
            .map(|&c| a.moves(c).iter().map(|&w| sarah_payload(a, w)).collect())
            .collect();
        sets.iter()
            .filter(|s| !sets.iter().any(|t| t.is_subset(s) && t != *s))
            .cloned()
            .collect()
    };
    k1.iter().all(|(key, &v1)| {
        let v2 = k2[key];
        circuit.priority(v1) == rep.priority(v2) && minimal_replies(circuit, v1) == minimal_replies(rep, v2)
    })
}
