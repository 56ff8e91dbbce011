//! Arena construction for the circuit game (overlap 1) and the representable
//! circuit game.

use std::collections::{BTreeSet, HashMap};

use super::{Entry, ParityArena, Payload, Play, Player, Position};
use crate::error::{check_cap, Error, Result};
use crate::gf::{Field, Vector};
use crate::sets::{bit, Ground, Mask};
use crate::tom::{Loc, TreePresentation};

/// Cap on arena positions.
pub const ARENA_CAP: usize = 1 << 16;

/// A split E = {e} ∪ P_C ∪ P_D of the real edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub e: String,
    pub pc: BTreeSet<String>,
    pub pd: BTreeSet<String>,
}

impl Partition {
    pub fn new(ground: &Ground, e: &str, pc: BTreeSet<String>, pd: BTreeSet<String>) -> Result<Self> {
        if ground.index(e).is_none() {
            return Err(Error::input(format!("{e} is not a real edge")));
        }
        let mut seen = BTreeSet::from([e.to_string()]);
        for l in pc.iter().chain(&pd) {
            if ground.index(l).is_none() {
                return Err(Error::input(format!("{l} is not a real edge")));
            }
            if !seen.insert(l.clone()) {
                return Err(Error::input(format!("{l} appears twice in the partition")));
            }
        }
        if seen.len() != ground.len() {
            let missing: Vec<&String> = ground.labels().iter().filter(|l| !seen.contains(*l)).collect();
            return Err(Error::input(format!("partition misses {missing:?}")));
        }
        Ok(Partition {
            e: e.to_string(),
            pc,
            pd,
        })
    }

    /// e, P_C = S − e, P_D = E ∖ S.
    pub fn of_set(ground: &Ground, e: usize, s: Mask) -> Self {
        Partition {
            e: ground.label(e).to_string(),
            pc: ground.set(s & !bit(e)),
            pd: ground.set(ground.all() & !s),
        }
    }

    pub fn swapped(&self) -> Partition {
        Partition {
            e: self.e.clone(),
            pc: self.pd.clone(),
            pd: self.pc.clone(),
        }
    }
}

/// A neighbour further from the start: the Sarah entry it leads to and the
/// shared labels as (local here, local there).
struct Onward {
    loc: Loc,
    entry: Entry,
    labels: Vec<(String, String)>,
}

fn onward(p: &TreePresentation, loc: Loc, entry: Entry) -> Vec<Onward> {
    let mut out = Vec::new();
    if let Loc::Prefix(i) = loc {
        for &j in p.prefix_neighbours(i) {
            if entry == Entry::Prefix(j) {
                continue;
            }
            out.push(Onward {
                loc: Loc::Prefix(j),
                entry: Entry::Prefix(i),
                labels: p.prefix_interface(i, j).into_iter().map(|l| (l.clone(), l)).collect(),
            });
        }
    }
    for (k, t) in p.transitions_from(loc) {
        out.push(Onward {
            loc: Loc::Core(t.target),
            entry: Entry::Transition(k),
            labels: t.map.iter().map(|(a, x)| (a.clone(), x.clone())).collect(),
        });
    }
    out
}

fn start_loc(p: &TreePresentation, part: &Partition) -> Result<Loc> {
    Partition::new(p.ground(), &part.e, part.pc.clone(), part.pd.clone())?;
    (0..p.prefix().len())
        .find(|&i| p.prefix()[i].matroid.ground().index(&part.e).is_some())
        .map(Loc::Prefix)
        .ok_or_else(|| Error::input(format!("{} lies on no prefix node", part.e)))
}

fn entry_priority(p: &TreePresentation, entry: Entry) -> u32 {
    match entry {
        Entry::Transition(k) => p.transitions()[k].priority,
        _ => 0,
    }
}

struct Builder {
    index: HashMap<Payload, usize>,
    positions: Vec<Position>,
    moves: Vec<Vec<usize>>,
    pending: Vec<usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            index: HashMap::new(),
            positions: Vec::new(),
            moves: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn intern(&mut self, owner: Player, priority: u32, payload: Payload) -> Result<usize> {
        if let Some(&i) = self.index.get(&payload) {
            return Ok(i);
        }
        let i = self.positions.len();
        check_cap("arena positions", i + 1, ARENA_CAP)?;
        self.index.insert(payload.clone(), i);
        self.positions.push(Position {
            owner,
            priority,
            payload,
        });
        self.moves.push(Vec::new());
        self.pending.push(i);
        Ok(i)
    }

    fn finish(self) -> Result<ParityArena> {
        ParityArena::new(self.positions, self.moves, 0)
    }
}

/// The circuit game for a presentation of overlap 1.
pub fn build_arena_overlap1(p: &TreePresentation, part: &Partition) -> Result<ParityArena> {
    if !p.is_overlap1() {
        return Err(Error::input("the circuit game needs overlap 1"));
    }
    let t0 = start_loc(p, part)?;
    let field = Field::GF2;
    let mut b = Builder::new();
    b.intern(
        Player::Sarah,
        0,
        Payload::SarahTurn {
            loc: t0,
            entry: Entry::Start,
            challenge: Vector::new(field, [(part.e.as_str(), 1)]),
        },
    )?;
    while let Some(v) = b.pending.pop() {
        let payload = b.positions[v].payload.clone();
        let mut targets = Vec::new();
        match payload {
            Payload::SarahTurn { loc, entry, challenge } => {
                let m = p.matroid(loc);
                let g = m.ground();
                let need = g.mask(challenge.support())?;
                let banned = g.mask(part.pd.iter().filter(|l| g.index(l).is_some()))?;
                for &o in m.circuits() {
                    if o & need == need && o & banned == 0 {
                        targets.push(b.intern(
                            Player::Colin,
                            0,
                            Payload::ColinTurn {
                                loc,
                                entry,
                                play: Play::Circuit(o),
                            },
                        )?);
                    }
                }
            }
            Payload::ColinTurn {
                loc,
                entry,
                play: Play::Circuit(o),
            } => {
                let g = p.matroid(loc).ground();
                for n in onward(p, loc, entry) {
                    let (here, there) = &n.labels[0];
                    if o & bit(g.index(here).expect("interface label")) != 0 {
                        targets.push(b.intern(
                            Player::Sarah,
                            entry_priority(p, n.entry),
                            Payload::SarahTurn {
                                loc: n.loc,
                                entry: n.entry,
                                challenge: Vector::new(field, [(there.as_str(), 1)]),
                            },
                        )?);
                    }
                }
            }
            _ => unreachable!("circuit arena payloads"),
        }
        targets.sort_unstable();
        targets.dedup();
        b.moves[v] = targets;
    }
    b.finish()
}

/// Every vector of k^labels with a nonzero pairing against `v`.
fn challenges(field: Field, labels: &[(String, String)], v: &Vector) -> Vec<Vector> {
    let q = field.size();
    let n = labels.len();
    let total = q.pow(n as u32);
    (1..total)
        .filter_map(|mut code| {
            let mut x = Vector::zero(field);
            let mut dot = 0u8;
            for (here, there) in labels {
                let c = (code % q) as u8;
                code /= q;
                dot = field.add(dot, field.mul(c, v.get(here)));
                x.set(there.clone(), c);
            }
            (dot != 0).then_some(x)
        })
        .collect()
}

/// The representable circuit game; every node must carry a representation.
pub fn build_arena_representable(p: &TreePresentation, part: &Partition) -> Result<ParityArena> {
    if !p.is_represented() {
        return Err(Error::input("the representable game needs a representation at every node"));
    }
    let t0 = start_loc(p, part)?;
    let field = p.rep(t0).expect("represented").field();
    if p.locs().any(|l| p.rep(l).expect("represented").field() != field) {
        return Err(Error::input("representation mixes fields"));
    }
    let vectors: HashMap<Loc, Vec<Vector>> = p
        .locs()
        .map(|l| (l, p.rep(l).expect("represented").vectors()))
        .collect();
    let mut b = Builder::new();
    b.intern(
        Player::Sarah,
        0,
        Payload::SarahTurn {
            loc: t0,
            entry: Entry::Start,
            challenge: Vector::new(field, [(part.e.as_str(), 1)]),
        },
    )?;
    while let Some(v) = b.pending.pop() {
        let payload = b.positions[v].payload.clone();
        let mut targets = Vec::new();
        match payload {
            Payload::SarahTurn { loc, entry, challenge } => {
                for w in &vectors[&loc] {
                    if part.pd.iter().any(|l| w.get(l) != 0) || w.dot(&challenge) == 0 {
                        continue;
                    }
                    targets.push(b.intern(
                        Player::Colin,
                        0,
                        Payload::ColinTurn {
                            loc,
                            entry,
                            play: Play::Vector(w.clone()),
                        },
                    )?);
                }
            }
            Payload::ColinTurn {
                loc,
                entry,
                play: Play::Vector(w),
            } => {
                for n in onward(p, loc, entry) {
                    for x in challenges(field, &n.labels, &w) {
                        targets.push(b.intern(
                            Player::Sarah,
                            entry_priority(p, n.entry),
                            Payload::SarahTurn {
                                loc: n.loc,
                                entry: n.entry,
                                challenge: x,
                            },
                        )?);
                    }
                }
            }
            _ => unreachable!("representable arena payloads"),
        }
        targets.sort_unstable();
        targets.dedup();
        b.moves[v] = targets;
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::solve;
    use crate::matroid::Matroid;
    use crate::tom::TreeOfMatroids;

    #[test]
    fn no_circuit_through_e_is_a_dead_end() {
        let m = Matroid::free(Ground::new(["a", "b"]).unwrap());
        let p = TreePresentation::from_tree("free", &TreeOfMatroids::single("n", m), None).unwrap();
        let part = Partition::new(p.ground(), "a", ["b".to_string()].into(), BTreeSet::new()).unwrap();
        let a = build_arena_overlap1(&p, &part).unwrap();
        assert!(a.moves(a.initial()).is_empty());
        assert_eq!(solve(&a).winner[a.initial()], Player::Colin);
    }

    #[test]
    fn partitions_are_validated() {
        let g = Ground::new(["a", "b"]).unwrap();
        assert!(Partition::new(&g, "a", BTreeSet::new(), BTreeSet::new()).is_err());
        assert!(Partition::new(&g, "a", ["b".to_string()].into(), ["b".to_string()].into()).is_err());
        let p = Partition::of_set(&g, 0, 0b01);
        assert_eq!(p.pd, ["b".to_string()].into());
    }
}
