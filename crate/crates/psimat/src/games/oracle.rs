//! A slow independent parity solver (nested fixpoints over bitsets) and a
//! random arena generator for cross-checking.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ParityArena, Payload, Player, Position};
use crate::error::{check_cap, Result};
use crate::sets::{bit, full, Mask};

/// Sarah's region as νX_d μX_{d-1} … CPre(∪ P_i ∩ X_i), with ν at even i.
pub fn solve_fixpoint(arena: &ParityArena) -> Result<Vec<Player>> {
    let n = arena.len();
    check_cap("oracle arena size", n, 64)?;
    let d = (0..n).map(|v| arena.priority(v)).max().unwrap_or(0) as usize;
    let mut by_priority = vec![0 as Mask; d + 1];
    let mut sarah = 0;
    let mut succ = vec![0 as Mask; n];
    for v in 0..n {
        by_priority[arena.priority(v) as usize] |= bit(v);
        if arena.owner(v) == Player::Sarah {
            sarah |= bit(v);
        }
        succ[v] = arena.moves(v).iter().fold(0, |m, &w| m | bit(w));
    }
    let cpre = |s: Mask| -> Mask {
        (0..n).fold(0, |m, v| {
            let ok = if sarah & bit(v) != 0 {
                succ[v] & s != 0
            } else {
                succ[v] & !s == 0
            };
            if ok {
                m | bit(v)
            } else {
                m
            }
        })
    };
    let mut xs = vec![0 as Mask; d + 1];
    let w = nest(d as isize, &mut xs, &by_priority, full(n), &cpre);
    Ok((0..n)
        .map(|v| if w & bit(v) != 0 { Player::Sarah } else { Player::Colin })
        .collect())
}

fn nest(i: isize, xs: &mut [Mask], by_priority: &[Mask], all: Mask, cpre: &dyn Fn(Mask) -> Mask) -> Mask {
    if i < 0 {
        let target = xs
            .iter()
            .zip(by_priority)
            .fold(0, |m, (x, p)| m | (x & p));
        return cpre(target);
    }
    let i = i as usize;
    xs[i] = if i % 2 == 0 { all } else { 0 };
    loop {
        let next = nest(i as isize - 1, xs, by_priority, all, cpre);
        if next == xs[i] {
            return next;
        }
        xs[i] = next;
    }
}

/// A random arena; positions may be dead ends.
pub fn random_arena<R: Rng>(rng: &mut R, n: usize, max_priority: u32, max_out: usize) -> ParityArena {
    let positions = (0..n)
        .map(|_| Position {
            owner: if rng.gen_bool(0.5) { Player::Sarah } else { Player::Colin },
            priority: rng.gen_range(0..=max_priority),
            payload: Payload::Abstract,
        })
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let moves = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=max_out.min(n));
            let mut m: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
            m.sort_unstable();
            m
        })
        .collect();
    ParityArena::new(positions, moves, 0).expect("generated arena is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{solve, verify_strategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_zielonka() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let a = random_arena(&mut rng, 8, 4, 3);
            let s = solve(&a);
            assert_eq!(s.winner, solve_fixpoint(&a).unwrap());
            verify_strategy(&a, &s).unwrap();
        }
    }
}
