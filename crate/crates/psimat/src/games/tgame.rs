//! The binary game tree of matroids: rank-1 uniform triangles at even depth,
//! rank-2 uniform triangles at odd depth, and one real edge `d0` at the root.

use std::collections::BTreeSet;

use crate::gf::{Field, Subspace, Vector};
use crate::matroid::{uniform, Matroid};
use crate::tom::{CoreState, Loc, PrefixNode, PsiCondition, TreePresentation, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgamePsi {
    All,
    None,
    /// A 0-move out of an even-depth node infinitely often.
    Buchi,
    /// Eventually no 0-move into an even-depth node.
    CoBuchi,
    /// Eventually no 0-move out of an even-depth node.
    CoBuchiEvenSource,
}

fn even_space(labels: [&str; 3]) -> Subspace {
    let f = Field::GF2;
    Subspace::rref(
        f,
        labels,
        &[
            Vector::new(f, [(labels[0], 1), (labels[1], 1)]),
            Vector::new(f, [(labels[0], 1), (labels[2], 1)]),
        ],
    )
    .expect("even-weight space")
}

fn ones_space(labels: [&str; 3]) -> Subspace {
    let f = Field::GF2;
    Subspace::rref(f, labels, &[Vector::new(f, labels.map(|l| (l, 1)))]).expect("all-ones space")
}

fn node(r: usize, labels: [&str; 3]) -> (Matroid, Subspace) {
    let m = uniform(r, labels).expect("uniform triangle");
    let u = if r == 1 { even_space(labels) } else { ones_space(labels) };
    (m, u)
}

/// The presentation with all priorities 0 and binary representations.
pub fn tgame() -> TreePresentation {
    let (rm, ru) = node(1, ["d0", "x0", "x1"]);
    let (om, ou) = node(2, ["in", "c0", "c1"]);
    let (em, eu) = node(1, ["in", "c0", "c1"]);
    let incoming: BTreeSet<String> = ["in".to_string()].into();
    let tr = |name: &str, source, target, from: &str| Transition {
        name: name.into(),
        source,
        target,
        map: [(from.to_string(), "in".to_string())].into(),
        priority: 0,
    };
    let (odd, even) = (0, 1);
    TreePresentation::new(
        "tgame",
        vec![PrefixNode {
            name: "root".into(),
            matroid: rm,
            rep: Some(ru),
        }],
        vec![
            CoreState {
                name: "odd".into(),
                matroid: om,
                rep: Some(ou),
                incoming: incoming.clone(),
            },
            CoreState {
                name: "even".into(),
                matroid: em,
                rep: Some(eu),
                incoming,
            },
        ],
        vec![
            tr("0", Loc::Prefix(0), odd, "x0"),
            tr("1", Loc::Prefix(0), odd, "x1"),
            tr("0", Loc::Core(odd), even, "c0"),
            tr("1", Loc::Core(odd), even, "c1"),
            tr("0", Loc::Core(even), odd, "c0"),
            tr("1", Loc::Core(even), odd, "c1"),
        ],
        ["d0".to_string()].into(),
    )
    .expect("tgame presentation is valid")
}

pub fn tgame_psi(psi: TgamePsi) -> TreePresentation {
    let ids = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let cond = match psi {
        TgamePsi::All => PsiCondition::All,
        TgamePsi::None => PsiCondition::None,
        TgamePsi::Buchi => PsiCondition::Buchi(ids(&["root:0", "even:0"])),
        TgamePsi::CoBuchi => PsiCondition::CoBuchi(ids(&["odd:0"])),
        TgamePsi::CoBuchiEvenSource => PsiCondition::CoBuchi(ids(&["root:0", "even:0"])),
    };
    tgame().with_psi(&cond).expect("tgame transition ids")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{
        arena_bisimilar, build_arena_overlap1, build_arena_representable, duality_check, induced_matroid,
        psi_circuit_exists, solve, GameKind, Partition, Payload, Play, Player,
    };
    use crate::sets::Ground;

    fn d0() -> Partition {
        Partition::new(&Ground::new(["d0"]).unwrap(), "d0", BTreeSet::new(), BTreeSet::new()).unwrap()
    }

    fn winner(psi: TgamePsi, kind: GameKind) -> Player {
        psi_circuit_exists(&tgame_psi(psi), &d0(), kind, 0).unwrap().winner
    }

    #[test]
    fn arena_shape() {
        let a = build_arena_overlap1(&tgame(), &d0()).unwrap();
        let mut states = BTreeSet::new();
        for (v, pos) in a.positions().iter().enumerate() {
            if let Payload::SarahTurn { loc: Loc::Core(s), .. } = pos.payload {
                states.insert(s);
                let expected = if s == 0 { 1 } else { 2 };
                assert_eq!(a.moves(v).len(), expected);
            }
        }
        assert_eq!(states.len(), 2);
        assert_eq!(tgame().core()[1].matroid.circuits().len(), 3);
    }

    #[test]
    fn winners_by_condition() {
        for kind in [GameKind::Circuit, GameKind::Representable] {
            assert_eq!(winner(TgamePsi::All, kind), Player::Sarah);
            assert_eq!(winner(TgamePsi::None, kind), Player::Colin);
            assert_eq!(winner(TgamePsi::Buchi, kind), Player::Sarah);
            assert_eq!(winner(TgamePsi::CoBuchi, kind), Player::Colin);
            assert_eq!(winner(TgamePsi::CoBuchiEvenSource, kind), Player::Sarah);
        }
    }

    #[test]
    fn witnesses_validate_to_depth_eight() {
        for psi in [TgamePsi::All, TgamePsi::None, TgamePsi::Buchi, TgamePsi::CoBuchi] {
            for kind in [GameKind::Circuit, GameKind::Representable] {
                let v = psi_circuit_exists(&tgame_psi(psi), &d0(), kind, 8).unwrap();
                assert_eq!(v.dual, v.winner == Player::Colin);
                assert!(v.witnesses.iter().all(|w| w.valid), "{psi:?} {kind:?}");
                assert!(v.witnesses.iter().all(|w| w.set == ["d0".to_string()].into()));
            }
        }
    }

    #[test]
    fn loop_and_coloop() {
        let all = induced_matroid(&tgame_psi(TgamePsi::All)).unwrap();
        assert_eq!(all.circuits(), &[1]);
        let none = induced_matroid(&tgame_psi(TgamePsi::None)).unwrap();
        assert_eq!(none.cocircuits(), &[1]);
    }

    #[test]
    fn representable_arena_matches() {
        for psi in [TgamePsi::All, TgamePsi::Buchi, TgamePsi::CoBuchi] {
            let p = tgame_psi(psi);
            let a = build_arena_overlap1(&p, &d0()).unwrap();
            let b = build_arena_representable(&p, &d0()).unwrap();
            assert!(arena_bisimilar(&a, &b));
            assert_eq!(solve(&a).winner[0], solve(&b).winner[0]);
            duality_check(&p, &d0(), GameKind::Circuit).unwrap();
            duality_check(&p, &d0(), GameKind::Representable).unwrap();
        }
    }

    #[test]
    fn odd_state_plays_its_only_circuit() {
        let a = build_arena_overlap1(&tgame(), &d0()).unwrap();
        let odd_plays: BTreeSet<_> = a
            .positions()
            .iter()
            .filter_map(|p| match &p.payload {
                Payload::ColinTurn {
                    loc: Loc::Core(0),
                    play: Play::Circuit(o),
                    ..
                } => Some(*o),
                _ => None,
            })
            .collect();
        assert_eq!(odd_plays, [0b111].into());
    }
}
