//! Circuit games on regular trees of matroids, compiled to finite parity
//! arenas (max-parity; Sarah is the even player).

mod build;
mod induced;
mod oracle;
mod tgame;
mod witness;

pub use build::{build_arena_overlap1, build_arena_representable, Partition, ARENA_CAP};
pub use induced::{
    duality_check, induced_matroid, induced_matroid_capped, psi_circuit_exists, winning_sets, DualityReport,
    GameKind, GameVerdict, INDUCED_CAP,
};
pub use oracle::{random_arena, solve_fixpoint};
pub use tgame::{tgame, tgame_psi, TgamePsi};
pub use witness::{arena_bisimilar, materialize_precircuit, materialize_vector, strategy_lines, StrategyLine};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Vector;
use crate::sets::Mask;
use crate::tom::Loc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    Sarah,
    Colin,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Sarah => Player::Colin,
            Player::Colin => Player::Sarah,
        }
    }

    /// The player favoured by a priority under the max-parity convention.
    pub fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Sarah
        } else {
            Player::Colin
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Sarah => "Sarah",
            Player::Colin => "Colin",
        })
    }
}

/// How the current node was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entry {
    Start,
    /// From the given prefix node.
    Prefix(usize),
    /// Along the given transition.
    Transition(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Play {
    Circuit(Mask),
    Vector(Vector),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Abstract,
    /// `challenge` is the current challenge over the node's local labels.
    SarahTurn { loc: Loc, entry: Entry, challenge: Vector },
    ColinTurn { loc: Loc, entry: Entry, play: Play },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    pub owner: Player,
    pub priority: u32,
    pub payload: Payload,
}

/// A finite parity arena. A position without moves is lost by its owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityArena {
    positions: Vec<Position>,
    moves: Vec<Vec<usize>>,
    initial: usize,
}

impl ParityArena {
    pub fn new(positions: Vec<Position>, moves: Vec<Vec<usize>>, initial: usize) -> Result<Self> {
        let n = positions.len();
        if moves.len() != n || initial >= n {
            return Err(Error::input("arena moves or initial position out of range"));
        }
        if moves.iter().flatten().any(|&w| w >= n) {
            return Err(Error::input("arena move targets an unknown position"));
        }
        Ok(ParityArena {
            positions,
            moves,
            initial,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn moves(&self, v: usize) -> &[usize] {
        &self.moves[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn owner(&self, v: usize) -> Player {
        self.positions[v].owner
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.positions[v].priority
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, ms) in self.moves.iter().enumerate() {
            for &w in ms {
                pred[w].push(v);
            }
        }
        pred
    }
}

/// Winners for every position and a positional choice for each position
/// owned by the player who wins there (`None` at dead ends).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub winner: Vec<Player>,
    pub choice: Vec<Option<usize>>,
}

impl Strategy {
    pub fn region(&self, p: Player) -> BTreeSet<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }
}

/// Zielonka's recursive algorithm.
pub fn solve(arena: &ParityArena) -> Strategy {
    let n = arena.len();
    let pred = arena.predecessors();
    let mut winner = vec![Player::Sarah; n];
    let mut choice = vec![None; n];
    // Dead ends are lost by their owner; whatever can be forced into them is
    // settled before the recursion, which then sees no dead ends.
    let mut live = vec![true; n];
    loop {
        let mut changed = false;
        for p in [Player::Sarah, Player::Colin] {
            let stuck: Vec<usize> = (0..n)
                .filter(|&v| live[v] && arena.owner(v) == p && arena.moves(v).iter().all(|&w| !live[w]))
                .collect();
            if stuck.is_empty() {
                continue;
            }
            let won_by = p.opponent();
            for v in attractor(arena, &pred, &live, &stuck, won_by, &mut choice) {
                live[v] = false;
                winner[v] = won_by;
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    zielonka(arena, &pred, live, &mut winner, &mut choice);
    for v in 0..n {
        if winner[v] != arena.owner(v) {
            choice[v] = None;
        }
    }
    Strategy { winner, choice }
}

/// Attractor of `target` for `p` inside `sub`, recording attracting moves.
fn attractor(
    arena: &ParityArena,
    pred: &[Vec<usize>],
    sub: &[bool],
    target: &[usize],
    p: Player,
    choice: &mut [Option<usize>],
) -> Vec<usize> {
    let n = arena.len();
    let mut inside = vec![false; n];
    let mut count: Vec<usize> = (0..n)
        .map(|v| arena.moves(v).iter().filter(|&&w| sub[w]).count())
        .collect();
    let mut queue = Vec::new();
    for &t in target {
        if sub[t] && !inside[t] {
            inside[t] = true;
            queue.push(t);
        }
    }
    let mut i = 0;
    while i < queue.len() {
        let w = queue[i];
        i += 1;
        for &v in &pred[w] {
            if !sub[v] || inside[v] {
                continue;
            }
            if arena.owner(v) == p {
                inside[v] = true;
                choice[v] = Some(w);
                queue.push(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    inside[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    queue
}

fn zielonka(
    arena: &ParityArena,
    pred: &[Vec<usize>],
    sub: Vec<bool>,
    winner: &mut [Player],
    choice: &mut [Option<usize>],
) {
    let nodes: Vec<usize> = (0..arena.len()).filter(|&v| sub[v]).collect();
    let Some(d) = nodes.iter().map(|&v| arena.priority(v)).max() else {
        return;
    };
    let p = Player::of_priority(d);
    let top: Vec<usize> = nodes.iter().copied().filter(|&v| arena.priority(v) == d).collect();
    let a = attractor(arena, pred, &sub, &top, p, choice);
    let mut rest = sub.clone();
    for &v in &a {
        rest[v] = false;
    }
    zielonka(arena, pred, rest.clone(), winner, choice);
    let opp_won: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|&v| rest[v] && winner[v] == p.opponent())
        .collect();
    if opp_won.is_empty() {
        for &v in &nodes {
            winner[v] = p;
        }
        for &v in &top {
            if arena.owner(v) == p {
                choice[v] = arena.moves(v).iter().copied().find(|&w| sub[w]);
            }
        }
        return;
    }
    let b = attractor(arena, pred, &sub, &opp_won, p.opponent(), choice);
    let mut rest2 = sub;
    for &v in &b {
        rest2[v] = false;
        winner[v] = p.opponent();
    }
    zielonka(arena, pred, rest2, winner, choice);
}

/// Checks that the choice maps keep each player inside their region and
/// that every cycle the winner can be forced around has the winner's parity.
pub fn verify_strategy(arena: &ParityArena, s: &Strategy) -> Result<()> {
    let n = arena.len();
    if s.winner.len() != n || s.choice.len() != n {
        return Err(Error::invariant("strategy size does not match the arena"));
    }
    for p in [Player::Sarah, Player::Colin] {
        // Successor graph of p's region with p's choices fixed.
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            if s.winner[v] != p {
                continue;
            }
            if arena.owner(v) == p {
                match s.choice[v] {
                    Some(w) if arena.moves(v).contains(&w) && s.winner[w] == p => succ[v].push(w),
                    _ => {
                        return Err(Error::invariant(format!(
                            "position {v}: {p} has no choice staying in the region"
                        )))
                    }
                }
            } else {
                if let Some(&w) = arena.moves(v).iter().find(|&&w| s.winner[w] != p) {
                    return Err(Error::invariant(format!(
                        "position {v}: opponent escapes {p}'s region to {w}"
                    )));
                }
                succ[v].extend_from_slice(arena.moves(v));
            }
        }
        // Any cycle whose top priority favours the opponent refutes the strategy.
        for v in 0..n {
            let q = arena.priority(v);
            if s.winner[v] != p || Player::of_priority(q) == p {
                continue;
            }
            if on_cycle_below(&succ, arena, v, q) {
                return Err(Error::invariant(format!(
                    "{p}'s strategy allows a cycle through {v} with top priority {q}"
                )));
            }
        }
    }
    Ok(())
}

/// Whether `v` lies on a cycle through positions of priority at most `q`.
pub(crate) fn on_cycle_below(succ: &[Vec<usize>], arena: &ParityArena, v: usize, q: u32) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<usize> = succ[v].clone();
    while let Some(u) = stack.pop() {
        if arena.priority(u) > q {
            continue;
        }
        if u == v {
            return true;
        }
        if !seen[u] {
            seen[u] = true;
            stack.extend_from_slice(&succ[u]);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abstract_arena(shape: &[(Player, u32, &[usize])]) -> ParityArena {
        ParityArena::new(
            shape.iter()
                .map(|&(owner, priority, _)| Position {
                    owner,
                    priority,
                    payload: Payload::Abstract,
                })
                .collect(),
            shape.iter().map(|(_, _, m)| m.to_vec()).collect(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn dead_end_is_lost() {
        let a = abstract_arena(&[(Player::Sarah, 0, &[])]);
        assert_eq!(solve(&a).winner, vec![Player::Colin]);
    }

    #[test]
    fn even_two_cycle() {
        let a = abstract_arena(&[(Player::Sarah, 0, &[1]), (Player::Colin, 0, &[0])]);
        let s = solve(&a);
        assert_eq!(s.winner, vec![Player::Sarah; 2]);
        verify_strategy(&a, &s).unwrap();
    }

    #[test]
    fn sarah_picks_the_even_loop() {
        let a = abstract_arena(&[
            (Player::Sarah, 0, &[1, 2]),
            (Player::Colin, 1, &[1]),
            (Player::Colin, 2, &[2]),
        ]);
        let s = solve(&a);
        assert_eq!(s.winner, vec![Player::Sarah, Player::Colin, Player::Sarah]);
        assert_eq!(s.choice[0], Some(2));
        verify_strategy(&a, &s).unwrap();
    }

    #[test]
    fn colin_stuck_loses() {
        let a = abstract_arena(&[(Player::Sarah, 1, &[1]), (Player::Colin, 1, &[])]);
        let s = solve(&a);
        assert_eq!(s.winner, vec![Player::Sarah, Player::Sarah]);
        assert_eq!(s.choice[0], Some(1));
    }
}
