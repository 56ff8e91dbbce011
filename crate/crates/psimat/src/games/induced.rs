//! Game verdicts with witnesses, the duality check, and the induced matroid
//! on the real edges.

use std::collections::BTreeSet;

use serde::Serialize;

use super::build::{build_arena_overlap1, build_arena_representable, Partition};
use super::witness::{materialize_precircuit, materialize_vector, strategy_lines, StrategyLine};
use super::{solve, verify_strategy, ParityArena, Player, Strategy};
use crate::axioms::{check_axioms, reconstruct, SetSystemPair};
use crate::error::{check_cap, Error, Result};
use crate::matroid::Matroid;
use crate::sets::{bits, minimal_nonempty, Mask};
use crate::tom::TreePresentation;

/// Cap on real edges for the induced matroid (2^|E|·|E| game solves).
pub const INDUCED_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GameKind {
    /// Circuits of the node matroids (overlap 1).
    Circuit,
    /// Vectors of the node representations.
    Representable,
}

impl GameKind {
    /// Circuit games when the presentation has overlap 1, else vectors.
    pub fn for_presentation(p: &TreePresentation) -> Result<GameKind> {
        if p.is_overlap1() {
            Ok(GameKind::Circuit)
        } else if p.is_represented() {
            Ok(GameKind::Representable)
        } else {
            Err(Error::input(
                "games need overlap 1 or a representation at every node",
            ))
        }
    }

    fn build(self, p: &TreePresentation, part: &Partition) -> Result<ParityArena> {
        match self {
            GameKind::Circuit => build_arena_overlap1(p, part),
            GameKind::Representable => build_arena_representable(p, part),
        }
    }
}

/// A witness materialized at one depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub depth: usize,
    pub set: BTreeSet<String>,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameVerdict {
    pub winner: Player,
    pub positions: usize,
    /// True when the witness comes from the dual game (a cocircuit).
    pub dual: bool,
    pub automaton: Vec<StrategyLine>,
    pub witnesses: Vec<WitnessCheck>,
}

fn solved(kind: GameKind, p: &TreePresentation, part: &Partition) -> Result<(ParityArena, Strategy)> {
    let arena = kind.build(p, part)?;
    let s = solve(&arena);
    verify_strategy(&arena, &s)?;
    Ok((arena, s))
}

/// The winning side's witness checked at each depth up to `max_depth`.
fn witnesses(
    kind: GameKind,
    p: &TreePresentation,
    part: &Partition,
    arena: &ParityArena,
    s: &Strategy,
    max_depth: usize,
) -> Result<Vec<WitnessCheck>> {
    let allowed: BTreeSet<&String> = part.pc.iter().chain([&part.e]).collect();
    (0..=max_depth)
        .map(|depth| {
            let (set, valid) = match kind {
                GameKind::Circuit => {
                    let (unf, pre) = materialize_precircuit(p, arena, s, depth)?;
                    let verdict = unf.tree.validate_precircuit(&pre);
                    (verdict.underlying.clone(), verdict.is_valid())
                }
                GameKind::Representable => {
                    let (unf, psi) = materialize_vector(p, arena, s, depth)?;
                    (psi.support(&unf.tree), true)
                }
            };
            let valid = valid && set.contains(&part.e) && set.iter().all(|l| allowed.contains(l));
            Ok(WitnessCheck { depth, set, valid })
        })
        .collect()
}

/// Decides whether a Ψ-circuit (or Ψ-vector) through e lies inside
/// {e} ∪ P_C; when Colin wins, the witness is a Ψᶜ-cocircuit inside
/// {e} ∪ P_D read off the dual game.
pub fn psi_circuit_exists(
    p: &TreePresentation,
    part: &Partition,
    kind: GameKind,
    max_depth: usize,
) -> Result<GameVerdict> {
    let (arena, s) = solved(kind, p, part)?;
    let winner = s.winner[arena.initial()];
    if winner == Player::Sarah {
        return Ok(GameVerdict {
            winner,
            positions: arena.len(),
            dual: false,
            automaton: strategy_lines(p, &arena, &s)?,
            witnesses: witnesses(kind, p, part, &arena, &s, max_depth)?,
        });
    }
    let dp = p.dual().complement_psi();
    let dpart = part.swapped();
    let (darena, ds) = solved(kind, &dp, &dpart)?;
    if ds.winner[darena.initial()] != Player::Sarah {
        return Err(Error::invariant(format!(
            "Colin wins the circuit game for {} but not the cocircuit game",
            part.e
        )));
    }
    Ok(GameVerdict {
        winner,
        positions: arena.len(),
        dual: true,
        automaton: strategy_lines(&dp, &darena, &ds)?,
        witnesses: witnesses(kind, &dp, &dpart, &darena, &ds, max_depth)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub colin_wins_game: bool,
    /// Colin in the cocircuit game is the circuit player of the dual game.
    pub colin_wins_cogame: bool,
    pub positions: usize,
    pub dual_positions: usize,
}

impl DualityReport {
    pub fn agree(&self) -> bool {
        self.colin_wins_game == self.colin_wins_cogame
    }
}

/// Solves the game and its cocircuit game independently and compares
/// Colin's status.
pub fn duality_check(p: &TreePresentation, part: &Partition, kind: GameKind) -> Result<DualityReport> {
    let (a, s) = solved(kind, p, part)?;
    let dp = p.dual().complement_psi();
    let (da, ds) = solved(kind, &dp, &part.swapped())?;
    let report = DualityReport {
        colin_wins_game: s.winner[a.initial()] == Player::Colin,
        colin_wins_cogame: ds.winner[da.initial()] == Player::Sarah,
        positions: a.len(),
        dual_positions: da.len(),
    };
    if !report.agree() {
        return Err(Error::invariant(format!(
            "game and cocircuit game disagree for {} (Colin wins game: {}, cogame: {})",
            part.e, report.colin_wins_game, report.colin_wins_cogame
        )));
    }
    Ok(report)
}

/// All S with some e ∈ S such that the circuit player wins from e inside S,
/// reduced to the minimal ones.
pub fn winning_sets(p: &TreePresentation, kind: GameKind) -> Result<Vec<Mask>> {
    let g = p.ground();
    let mut wins = Vec::new();
    for s in 1..=g.all() {
        for e in bits(s) {
            let (a, st) = solved(kind, p, &Partition::of_set(g, e, s))?;
            if st.winner[a.initial()] == Player::Sarah {
                wins.push(s);
                break;
            }
        }
    }
    Ok(minimal_nonempty(&wins))
}

pub fn induced_matroid(p: &TreePresentation) -> Result<Matroid> {
    induced_matroid_capped(p, INDUCED_CAP)
}

/// Circuits from the circuit games, cocircuits from the cocircuit games; the
/// pair must satisfy all eight axioms.
pub fn induced_matroid_capped(p: &TreePresentation, cap: usize) -> Result<Matroid> {
    check_cap("real edges for the induced matroid", p.ground().len(), cap)?;
    let kind = GameKind::for_presentation(p)?;
    let circuits = winning_sets(p, kind)?;
    let cocircuits = winning_sets(&p.dual().complement_psi(), kind)?;
    let pair = SetSystemPair::new(p.ground().clone(), circuits, cocircuits)?;
    let report = check_axioms(&pair)?;
    if !report.all_pass() {
        return Err(Error::invariant(format!("induced circuits and cocircuits: {report}")));
    }
    reconstruct(&pair)
}
