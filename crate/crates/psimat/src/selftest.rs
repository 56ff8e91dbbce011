//! The twelve acceptance criteria, runnable from the CLI and from the
//! acceptance test. Each criterion is timed against its own limit.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{base_extend, check_axioms, reconstruct, Axiom, SetSystemPair};
use crate::corpus;
use crate::games::{
    build_arena_overlap1, build_arena_representable, duality_check, induced_matroid, psi_circuit_exists,
    random_arena, solve, solve_fixpoint, tgame_psi, verify_strategy, GameKind, Partition, Player, TgamePsi,
};
use crate::gf::{Field, Subspace, Vector};
use crate::graphs::{
    compare_with_subdivision, connected_graphs_up_to_iso, degree_tree, gen_t_k2, random_trail, repeats_edge,
    separation_holds, walk_g, walk_u, Graph,
};
use crate::matroid::Matroid;
use crate::sets::{bit, bits, is_subset, submasks, Ground, Mask};
use crate::tom::{delta_glue, hat_pairing, psi_vectors, single_meeting, TreePresentation};

pub const CRITERIA: usize = 12;

/// Cap on vector families per tree in the pairing criterion.
const FAMILY_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(rename = "elapsed_ms")]
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
    #[serde(rename = "limit_s")]
    #[serde(serialize_with = "secs")]
    pub limit: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_secs())
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2}s / {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

type Outcome = std::result::Result<String, String>;

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

struct Criterion {
    name: &'static str,
    limit_secs: u64,
    run: fn() -> Outcome,
}

const TABLE: [Criterion; CRITERIA] = [
    Criterion { name: "axiom round trip", limit_secs: 10, run: axiom_round_trip },
    Criterion { name: "O1 and O2 imply O3 and O3*", limit_secs: 60, run: o3_from_o1_o2 },
    Criterion { name: "base construction", limit_secs: 60, run: base_construction },
    Criterion { name: "determinacy and game duality", limit_secs: 120, run: determinacy_and_duality },
    Criterion { name: "solver oracle equivalence", limit_secs: 30, run: solver_oracle },
    Criterion { name: "T^game facts", limit_secs: 5, run: tgame_facts },
    Criterion { name: "subdivision circuits and bonds", limit_secs: 30, run: subdivision },
    Criterion { name: "delta glue", limit_secs: 30, run: glue },
    Criterion { name: "orthogonality pairings", limit_secs: 30, run: pairings },
    Criterion { name: "T x K2 4-cycle fingerprint", limit_secs: 10, run: fingerprint },
    Criterion { name: "undomination laws", limit_secs: 60, run: undomination },
    Criterion { name: "induced matroid coherence", limit_secs: 120, run: induced_coherence },
];

/// Runs criterion `id` (1-based). Returns `None` for an unknown id.
pub fn run(id: usize) -> Option<CriterionResult> {
    let c = TABLE.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let outcome = (c.run)();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(c.limit_secs);
    let (ok, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let detail = if ok && elapsed > limit {
        format!("{detail}; over the time limit")
    } else {
        detail
    };
    Some(CriterionResult {
        id,
        name: c.name,
        passed: ok && elapsed <= limit,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA).filter_map(run).collect()
}

fn same_matroid(a: &Matroid, b: &Matroid) -> bool {
    a.ground() == b.ground() && a.circuits() == b.circuits() && a.cocircuits() == b.cocircuits()
}

fn axiom_round_trip() -> Outcome {
    let ms = corpus::matroids();
    for (name, m) in &ms {
        let pair = SetSystemPair::of_matroid(m);
        let report = check_axioms(&pair).map_err(err)?;
        if !report.all_pass() {
            return fail(format!("{name}: only {}/8 axioms pass", report.passed()));
        }
        let back = reconstruct(&pair).map_err(err)?;
        if !same_matroid(m, &back) {
            return fail(format!("{name}: reconstruct changed the matroid"));
        }
    }
    Ok(format!("{} matroids pass 8/8 and reconstruct exactly", ms.len()))
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// A random subspace of k^`ambient` spanned by up to `ambient.len()` random rows.
fn random_subspace<R: Rng>(rng: &mut R, field: Field, ambient: &[String]) -> Subspace {
    let k = rng.gen_range(0..=ambient.len());
    let rows: Vec<Vector> = (0..k)
        .map(|_| {
            Vector::new(
                field,
                ambient.iter().map(|l| (l.clone(), rng.gen_range(0..field.size()) as i64)),
            )
        })
        .collect();
    Subspace::rref(field, ambient.iter().cloned(), &rows).expect("rows live on the ambient labels")
}

fn random_field<R: Rng>(rng: &mut R) -> Field {
    if rng.gen_bool(0.5) {
        Field::GF2
    } else {
        Field::GF3
    }
}

fn random_family<R: Rng>(rng: &mut R, n: usize) -> Vec<Mask> {
    let k = rng.gen_range(0..=6);
    (0..k).map(|_| rng.gen_range(1..=((1u64 << n) - 1))).collect()
}

fn random_matroid_pair<R: Rng>(rng: &mut R, n: usize) -> (Vec<Mask>, Vec<Mask>) {
    let field = random_field(rng);
    let u = random_subspace(rng, field, &labels(n));
    let m = Matroid::from_representation(&u).expect("small representation");
    (m.circuits().to_vec(), m.cocircuits().to_vec())
}

/// Pure noise, exact matroid pairs, and matroid pairs with one set added,
/// dropped or moved.
fn random_system<R: Rng>(rng: &mut R) -> SetSystemPair {
    let n = rng.gen_range(1..=6);
    let (mut c, mut d) = match rng.gen_range(0..3) {
        0 => (random_family(rng, n), random_family(rng, n)),
        _ => random_matroid_pair(rng, n),
    };
    if rng.gen_bool(0.5) {
        let side = if rng.gen_bool(0.5) { &mut c } else { &mut d };
        match rng.gen_range(0..3) {
            0 if !side.is_empty() => {
                let i = rng.gen_range(0..side.len());
                side.remove(i);
            }
            1 => side.push(rng.gen_range(1..=((1u64 << n) - 1))),
            _ => {
                if let Some(x) = side.choose_mut(rng) {
                    *x ^= bit(rng.gen_range(0..n));
                    if *x == 0 {
                        *x = 1;
                    }
                }
            }
        }
    }
    SetSystemPair::new(Ground::new(labels(n)).expect("distinct labels"), c, d).expect("masks fit the ground")
}

fn o3_from_o1_o2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut premises = 0;
    for i in 0..1000 {
        let s = random_system(&mut rng);
        let r = check_axioms(&s).map_err(err)?;
        if r.holds(Axiom::O1) && r.holds(Axiom::O2) {
            premises += 1;
            if !(r.holds(Axiom::O3) && r.holds(Axiom::O3Star)) {
                return fail(format!("system {i}: O1 and O2 hold but O3 or O3* fails"));
            }
        }
    }
    Ok(format!("1000 systems, {premises} satisfy O1 and O2, no counterexample"))
}

/// Every permutation of `xs`, by Heap's algorithm.
fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(xs.len(), &mut xs.to_vec(), &mut out);
    out
}

fn base_construction() -> Outcome {
    let mut runs = 0usize;
    for (name, m) in corpus::matroids() {
        let n = m.len();
        let all = m.ground().all();
        let indep: Vec<bool> = (0..=all)
            .map(|s| !m.circuits().iter().any(|&c| is_subset(c, s)))
            .collect();
        let pair = SetSystemPair::of_matroid(&m);
        for x in submasks(all).filter(|x| x.count_ones() <= 5) {
            let orders = permutations(&bits(x).collect::<Vec<_>>());
            for i in submasks(x).filter(|&i| indep[i as usize]) {
                for order in &orders {
                    let b = base_extend(&pair, i, x, order).map_err(err)?;
                    let j = b.independent;
                    let maximal = (0..n).filter(|&e| x & bit(e) != 0 && j & bit(e) == 0).all(|e| !indep[(j | bit(e)) as usize]);
                    if !(is_subset(i, j) && is_subset(j, x) && indep[j as usize] && maximal) {
                        return fail(format!(
                            "{name}: I = {}, X = {}, order {order:?} gave {}",
                            m.ground().show(i),
                            m.ground().show(x),
                            m.ground().show(j)
                        ));
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} runs, all maximal independent"))
}

fn kinds(p: &TreePresentation) -> Vec<GameKind> {
    let mut out = Vec::new();
    if p.is_overlap1() {
        out.push(GameKind::Circuit);
    }
    if p.is_represented() {
        out.push(GameKind::Representable);
    }
    out
}

fn determinacy_and_duality() -> Outcome {
    let mut cases = 0usize;
    for base in corpus::presentations() {
        for (psi, p) in corpus::psi_conditions(&base) {
            let g = p.ground().clone();
            for kind in kinds(&p) {
                for s in 1..=g.all() {
                    for e in bits(s) {
                        let part = Partition::of_set(&g, e, s);
                        let arena = match kind {
                            GameKind::Circuit => build_arena_overlap1(&p, &part),
                            GameKind::Representable => build_arena_representable(&p, &part),
                        }
                        .map_err(err)?;
                        let strategy = solve(&arena);
                        verify_strategy(&arena, &strategy)
                            .map_err(|e| format!("{} {psi} {kind:?} {}: {e}", p.name, part.e))?;
                        duality_check(&p, &part, kind).map_err(|e| format!("{} {psi} {kind:?}: {e}", p.name))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} games determined, game and cocircuit game agree in all"))
}

fn solver_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..1000 {
        let n = rng.gen_range(1..=10);
        let a = random_arena(&mut rng, n, 4, 3);
        let s = solve(&a);
        let oracle = solve_fixpoint(&a).map_err(err)?;
        if s.winner != oracle {
            return fail(format!("arena {i}: Zielonka and the fixpoint solver disagree"));
        }
        verify_strategy(&a, &s).map_err(|e| format!("arena {i}: {e}"))?;
    }
    Ok("1000 arenas, winners agree position by position".into())
}

fn tgame_facts() -> Outcome {
    let d0 = Partition::new(&Ground::new(["d0"]).map_err(err)?, "d0", BTreeSet::new(), BTreeSet::new()).map_err(err)?;
    let all = induced_matroid(&tgame_psi(TgamePsi::All)).map_err(err)?;
    if all.circuits() != [1] {
        return fail("Ψ = all ends: d0 is not a loop");
    }
    let none = induced_matroid(&tgame_psi(TgamePsi::None)).map_err(err)?;
    if none.cocircuits() != [1] {
        return fail("Ψ = no ends: d0 is not a coloop");
    }
    for (psi, want) in [(TgamePsi::Buchi, Player::Sarah), (TgamePsi::CoBuchi, Player::Colin)] {
        for kind in [GameKind::Circuit, GameKind::Representable] {
            let v = psi_circuit_exists(&tgame_psi(psi), &d0, kind, 8).map_err(err)?;
            if v.winner != want {
                return fail(format!("{psi:?} {kind:?}: {:?} wins", v.winner));
            }
            let depths: BTreeSet<usize> = v.witnesses.iter().filter(|w| w.valid).map(|w| w.depth).collect();
            if !(1..=8).all(|d| depths.contains(&d)) || v.witnesses.iter().any(|w| !w.valid) {
                return fail(format!("{psi:?} {kind:?}: witness fails at some depth in 1..8"));
            }
        }
    }
    Ok("loop, coloop, Büchi to Sarah, co-Büchi to Colin, witnesses valid at depths 1-8".into())
}

fn subdivision() -> Outcome {
    let instances = corpus::width2_instances();
    for (name, g, ts) in &instances {
        let c = compare_with_subdivision(g, ts).map_err(err)?;
        if !c.circuits_equal {
            return fail(format!("{name}: circuits differ"));
        }
        if !c.bonds_equal {
            return fail(format!("{name}: bonds differ"));
        }
    }
    Ok(format!("{} width-2 instances, circuits and bonds equal", instances.len()))
}

fn k3_glue_is_c4() -> std::result::Result<(), String> {
    let f = Field::GF2;
    let tri = |ls: [&str; 3]| Subspace::rref(f, ls, &[Vector::new(f, ls.map(|l| (l, 1)))]).map_err(err);
    let glued = delta_glue(&tri(["a", "b", "e"])?, &tri(["c", "d", "e"])?).map_err(err)?;
    let mut c4 = Graph::new("C4");
    for (u, v, l) in [("1", "2", "a"), ("2", "3", "b"), ("3", "4", "c"), ("4", "1", "d")] {
        c4.add_edge(u, v, Some(l)).map_err(err)?;
    }
    let want = c4.cycle_matroid().map_err(err)?;
    if !same_matroid(&Matroid::from_representation(&glued).map_err(err)?, &want) {
        return fail("M(K3) △ M(K3) is not M(C4)");
    }
    Ok(())
}

fn glue() -> Outcome {
    k3_glue_is_c4()?;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..200 {
        let field = random_field(&mut rng);
        let shared = rng.gen_range(0..=2);
        let own1 = rng.gen_range(1..=3);
        let own2 = rng.gen_range(1..=3);
        let common: Vec<String> = (0..shared).map(|j| format!("s{j}")).collect();
        let e1: Vec<String> = common.iter().cloned().chain((0..own1).map(|j| format!("a{j}"))).collect();
        let e2: Vec<String> = common.iter().cloned().chain((0..own2).map(|j| format!("b{j}"))).collect();
        let u1 = random_subspace(&mut rng, field, &e1);
        let u2 = random_subspace(&mut rng, field, &e2);
        let lhs = Matroid::from_representation(&delta_glue(&u1, &u2).map_err(err)?).map_err(err)?.dual();
        let rhs = Matroid::from_representation(&delta_glue(&u1.complement(), &u2.complement()).map_err(err)?)
            .map_err(err)?;
        if !same_matroid(&lhs, &rhs) {
            return fail(format!("pair {i} over GF({}): the duality law fails", field.p()));
        }
    }
    Ok("M(K3) △ M(K3) = M(C4); duality law holds on 200 random pairs".into())
}

fn pairings() -> Outcome {
    let trees = corpus::trees();
    let mut pairs = 0usize;
    for (name, tree, rep) in &trees {
        let vs = psi_vectors(tree, rep, FAMILY_CAP).map_err(err)?;
        let ws = psi_vectors(tree, &rep.dual(), FAMILY_CAP).map_err(err)?;
        for v in &vs {
            for w in &ws {
                if !hat_pairing(tree, rep, v, w).map_err(err)?.is_zero() {
                    return fail(format!("{name}: a pairing is nonzero"));
                }
                pairs += 1;
            }
        }
        if let Some((c, d)) = single_meeting(tree).map_err(err)? {
            let g = tree.ground();
            return fail(format!("{name}: {} and {} meet once", g.show(c), g.show(d)));
        }
    }
    Ok(format!("{} trees, {pairs} pairings zero, no single meetings", trees.len()))
}

fn fingerprint() -> Outcome {
    let t = degree_tree(8);
    let g = gen_t_k2(&t, "v2", 8).map_err(err)?;
    for n in 2..=5 {
        let count = g.four_cycles_through(&format!("v{n}-v{n}'")).map_err(err)?;
        if count != n {
            return fail(format!("rung v{n}v{n}' lies in {count} 4-cycles"));
        }
    }
    let mut others = 0;
    for e in g.edges().iter().filter(|e| e.v != format!("{}'", e.u)) {
        let count = g.four_cycles_through(&e.label).map_err(err)?;
        if count != 1 {
            return fail(format!("edge {} lies in {count} 4-cycles", e.label));
        }
        others += 1;
    }
    Ok(format!("rungs v2..v5 in 2..5 4-cycles, {others} other edges in exactly 1"))
}

fn undomination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut graphs = Vec::new();
    for n in 1..=6 {
        graphs.extend(connected_graphs_up_to_iso(n).map_err(err)?);
    }
    let mut pairs = 0usize;
    let mut trees_of = Vec::new();
    for g in &graphs {
        let trees: Vec<Graph> = g.spanning_trees().map_err(err)?.iter().map(|es| g.spanning_subgraph(es)).collect();
        for t in &trees {
            if let Some(f) = separation_holds(g, t).map_err(err)? {
                return fail(format!("{}: X = {:?} separates {:?} from {:?}", g.name, f.x, f.a, f.b));
            }
            pairs += 1;
        }
        trees_of.push(trees);
    }
    let walkable: Vec<usize> = (0..graphs.len()).filter(|&i| graphs[i].vertices().len() >= 2).collect();
    for k in 0..500 {
        let i = *walkable.choose(&mut rng).expect("graphs with edges exist");
        let (g, t) = (&graphs[i], trees_of[i].choose(&mut rng).expect("connected graphs have spanning trees"));
        let p = random_trail(g, &mut rng, 8);
        if repeats_edge(&p) {
            return fail(format!("trail {k} repeats an edge"));
        }
        let verts: Vec<&String> = g.vertices().iter().collect();
        let t0 = verts.choose(&mut rng).expect("nonempty");
        let t1 = verts.choose(&mut rng).expect("nonempty");
        let pu = walk_u(g, t, &p, t0, t1).map_err(err)?;
        if walk_g(g, t, &pu).map_err(err)? != p {
            return fail(format!("trail {k} on {}: g(u(P)) differs from P", g.name));
        }
    }
    Ok(format!(
        "500 trails round trip; separation holds for {} graphs and {pairs} spanning trees",
        graphs.len()
    ))
}

fn induced_coherence() -> Outcome {
    let mut count = 0usize;
    for base in corpus::presentations() {
        for (psi, p) in corpus::psi_conditions(&base) {
            let m = induced_matroid(&p).map_err(|e| format!("{} {psi}: {e}", p.name))?;
            let r = check_axioms(&SetSystemPair::of_matroid(&m)).map_err(err)?;
            if !r.all_pass() {
                return fail(format!("{} {psi}: {}/8 axioms", p.name, r.passed()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} induced matroids pass 8/8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_three() {
        let ps = permutations(&[1, 2, 3]);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().collect::<BTreeSet<_>>().len(), 6);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(0).is_none());
        assert!(run(13).is_none());
    }

    #[test]
    fn quick_criteria_pass() {
        for id in [5, 6, 10] {
            let r = run(id).unwrap();
            assert!(r.passed, "{r}");
        }
    }
}
