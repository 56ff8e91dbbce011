//! The orthogonality axioms for a pair of set systems (𝒞, 𝒟), reconstruction
//! of the matroid they determine, and the recursive base-extension procedure.

use std::fmt;

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::matroid::Matroid;
use crate::sets::{bit, bits, canonical, is_subset, minimal_nonempty, submasks, Ground, Mask};

pub const AXIOM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystemPair {
    pub ground: Ground,
    pub c: Vec<Mask>,
    pub d: Vec<Mask>,
}

impl SetSystemPair {
    pub fn new(ground: Ground, c: Vec<Mask>, d: Vec<Mask>) -> Result<Self> {
        let all = ground.all();
        if c.iter().chain(&d).any(|&m| !is_subset(m, all)) {
            return Err(Error::input("set system member leaves the ground set"));
        }
        Ok(SetSystemPair {
            ground,
            c: canonical(c),
            d: canonical(d),
        })
    }

    pub fn of_matroid(m: &Matroid) -> Self {
        SetSystemPair {
            ground: m.ground().clone(),
            c: m.circuits().to_vec(),
            d: m.cocircuits().to_vec(),
        }
    }

    /// The same pair with the roles of 𝒞 and 𝒟 exchanged.
    pub fn swapped(&self) -> Self {
        SetSystemPair {
            ground: self.ground.clone(),
            c: self.d.clone(),
            d: self.c.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    C1,
    C2,
    C1Star,
    C2Star,
    O1,
    O2,
    O3,
    O3Star,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::C1,
        Axiom::C2,
        Axiom::C1Star,
        Axiom::C2Star,
        Axiom::O1,
        Axiom::O2,
        Axiom::O3,
        Axiom::O3Star,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::C1 => "(C1)",
            Axiom::C2 => "(C2)",
            Axiom::C1Star => "(C1*)",
            Axiom::C2Star => "(C2*)",
            Axiom::O1 => "(O1)",
            Axiom::O2 => "(O2)",
            Axiom::O3 => "(O3)",
            Axiom::O3Star => "(O3*)",
        };
        f.write_str(s)
    }
}

/// Concrete data reproducing an axiom failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    EmptyMember,
    Nested { inner: Mask, outer: Mask },
    SingleMeet { c: Mask, d: Mask },
    Partition { e: usize, pc: Mask, pd: Mask },
    NoMinimal { member: Mask, e: usize, x: Mask },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub ground: Ground,
    pub verdicts: Vec<(Axiom, Option<Witness>)>,
}

impl AxiomReport {
    pub fn passed(&self) -> usize {
        self.verdicts.iter().filter(|(_, w)| w.is_none()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.verdicts.len()
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.verdicts
            .iter()
            .any(|(a, w)| *a == axiom && w.is_none())
    }

    pub fn witness(&self, axiom: Axiom) -> Option<&Witness> {
        self.verdicts
            .iter()
            .find(|(a, _)| *a == axiom)
            .and_then(|(_, w)| w.as_ref())
    }

    pub fn describe(&self, w: &Witness) -> String {
        let g = &self.ground;
        match w {
            Witness::EmptyMember => "the empty set is a member".into(),
            Witness::Nested { inner, outer } => {
                format!("{} is inside {}", g.show(*inner), g.show(*outer))
            }
            Witness::SingleMeet { c, d } => {
                format!("C={} meets D={} once", g.show(*c), g.show(*d))
            }
            Witness::Partition { e, pc, pd } => format!(
                "e={} P_C={} P_D={}",
                g.label(*e),
                g.show(*pc),
                g.show(*pd)
            ),
            Witness::NoMinimal { member, e, x } => format!(
                "member={} e={} X={}",
                g.show(*member),
                g.label(*e),
                g.show(*x)
            ),
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, w) in &self.verdicts {
            match w {
                None => writeln!(f, "{a}: pass")?,
                Some(w) => writeln!(f, "{a}: FAIL {}", self.describe(w))?,
            }
        }
        if self.all_pass() {
            write!(f, "PASS (8/8)")
        } else {
            write!(f, "FAIL ({}/8)", self.passed())
        }
    }
}

fn nested(sets: &[Mask]) -> Option<Witness> {
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            if i != j && is_subset(a, b) {
                return Some(Witness::Nested { inner: a, outer: b });
            }
        }
    }
    None
}

fn single_meet(c: &[Mask], d: &[Mask]) -> Option<Witness> {
    c.iter().find_map(|&x| {
        d.iter()
            .find(|&&y| (x & y).count_ones() == 1)
            .map(|&y| Witness::SingleMeet { c: x, d: y })
    })
}

/// Whether some member through `e` lies inside `within`.
fn through(sets: &[Mask], e: usize, within: Mask) -> bool {
    sets.iter()
        .any(|&m| m & bit(e) != 0 && is_subset(m, within))
}

fn o2_failure(n: usize, c: &[Mask], d: &[Mask]) -> Option<Witness> {
    let all = crate::sets::full(n);
    for e in 0..n {
        let rest = all & !bit(e);
        for pc in submasks(rest) {
            let pd = rest & !pc;
            if !through(c, e, pc | bit(e)) && !through(d, e, pd | bit(e)) {
                return Some(Witness::Partition { e, pc, pd });
            }
        }
    }
    None
}

fn o3_failure(n: usize, sets: &[Mask]) -> Option<Witness> {
    let all = crate::sets::full(n);
    for &member in sets {
        for e in bits(member) {
            let through_e: Vec<Mask> = sets.iter().copied().filter(|&m| m & bit(e) != 0).collect();
            for x in submasks(all) {
                let cands: Vec<Mask> = through_e
                    .iter()
                    .copied()
                    .filter(|&m| is_subset(m, x | member))
                    .collect();
                let has_minimal = cands.iter().any(|&m| {
                    let diff = m & !x;
                    !cands.iter().any(|&o| {
                        let od = o & !x;
                        od != diff && is_subset(od, diff)
                    })
                });
                if !has_minimal {
                    return Some(Witness::NoMinimal { member, e, x });
                }
            }
        }
    }
    None
}

pub fn check_axioms(s: &SetSystemPair) -> Result<AxiomReport> {
    check_axioms_capped(s, AXIOM_CAP)
}

pub fn check_axioms_capped(s: &SetSystemPair, cap: usize) -> Result<AxiomReport> {
    let n = s.ground.len();
    check_cap("axiom check ground set", n, cap)?;
    let empty = |sets: &[Mask]| sets.contains(&0).then_some(Witness::EmptyMember);
    let verdicts = vec![
        (Axiom::C1, empty(&s.c)),
        (Axiom::C2, nested(&s.c)),
        (Axiom::C1Star, empty(&s.d)),
        (Axiom::C2Star, nested(&s.d)),
        (Axiom::O1, single_meet(&s.c, &s.d)),
        (Axiom::O2, o2_failure(n, &s.c, &s.d)),
        (Axiom::O3, o3_failure(n, &s.c)),
        (Axiom::O3Star, o3_failure(n, &s.d)),
    ];
    Ok(AxiomReport {
        ground: s.ground.clone(),
        verdicts,
    })
}

/// Re-checks a failure witness against the pair; `true` when it still fails.
pub fn replay(s: &SetSystemPair, axiom: Axiom, w: &Witness) -> bool {
    let own = match axiom {
        Axiom::C1 | Axiom::C2 | Axiom::O3 => &s.c,
        _ => &s.d,
    };
    match (axiom, w) {
        (Axiom::C1 | Axiom::C1Star, Witness::EmptyMember) => own.contains(&0),
        (Axiom::C2 | Axiom::C2Star, Witness::Nested { inner, outer }) => {
            inner != outer && own.contains(inner) && own.contains(outer) && is_subset(*inner, *outer)
        }
        (Axiom::O1, Witness::SingleMeet { c, d }) => {
            s.c.contains(c) && s.d.contains(d) && (c & d).count_ones() == 1
        }
        (Axiom::O2, Witness::Partition { e, pc, pd }) => {
            let all = s.ground.all();
            pc & pd == 0
                && (pc | pd | bit(*e)) == all
                && (pc | pd) & bit(*e) == 0
                && !through(&s.c, *e, pc | bit(*e))
                && !through(&s.d, *e, pd | bit(*e))
        }
        (Axiom::O3 | Axiom::O3Star, Witness::NoMinimal { member, e, x }) => {
            own.contains(member)
                && member & bit(*e) != 0
                && o3_failure_at(own, *member, *e, *x)
        }
        _ => false,
    }
}

fn o3_failure_at(sets: &[Mask], member: Mask, e: usize, x: Mask) -> bool {
    let cands: Vec<Mask> = sets
        .iter()
        .copied()
        .filter(|&m| m & bit(e) != 0 && is_subset(m, x | member))
        .collect();
    !cands.iter().any(|&m| {
        let diff = m & !x;
        !cands.iter().any(|&o| {
            let od = o & !x;
            od != diff && is_subset(od, diff)
        })
    })
}

/// Sets meeting no member of `c` in exactly one element.
pub fn perp(n: usize, c: &[Mask]) -> Vec<Mask> {
    canonical(submasks(crate::sets::full(n))
        .filter(|&s| c.iter().all(|&m| (m & s).count_ones() != 1))
        .collect())
}

/// Circuit elimination in its X-indexed form, checked for every X ⊆ o.
/// Returns a failing `(o, X, union of the family, z)` if there is one.
pub fn elimination_failure(c: &[Mask]) -> Option<(Mask, Mask, Mask, usize)> {
    for &o in c {
        for x in submasks(o) {
            // All unions of families {o_x} with o_x ∩ X = {x}.
            let mut unions: Vec<Mask> = vec![0];
            for xe in bits(x) {
                let choices: Vec<Mask> = c.iter().copied().filter(|&m| m & x == bit(xe)).collect();
                let mut next: Vec<Mask> = unions
                    .iter()
                    .flat_map(|&u| choices.iter().map(move |&ch| u | ch))
                    .collect();
                next.sort_unstable();
                next.dedup();
                unions = next;
                if unions.is_empty() {
                    break;
                }
            }
            for &u in &unions {
                for z in bits(o & !u) {
                    if !through(c, z, (o | u) & !x) {
                        return Some((o, x, u, z));
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EliminationAgreement {
    pub o2_holds: bool,
    pub elimination_holds: bool,
}

impl EliminationAgreement {
    pub fn agree(&self) -> bool {
        self.o2_holds == self.elimination_holds
    }
}

/// Tests (O2) for (𝒞, 𝒞^⊥) and circuit elimination for 𝒞 independently.
pub fn check_o2_via_elimination(ground: &Ground, c: &[Mask]) -> Result<EliminationAgreement> {
    let n = ground.len();
    check_cap("elimination check ground set", n, AXIOM_CAP)?;
    let d = perp(n, c);
    Ok(EliminationAgreement {
        o2_holds: o2_failure(n, c, &d).is_none(),
        elimination_holds: elimination_failure(c).is_none(),
    })
}

/// The matroid whose circuits are the minimal nonempty members of 𝒞.
pub fn reconstruct(s: &SetSystemPair) -> Result<Matroid> {
    let report = check_axioms(s)?;
    for a in [Axiom::O1, Axiom::O2, Axiom::O3, Axiom::O3Star] {
        if let Some(w) = report.witness(a) {
            return Err(Error::Axiom {
                axiom: a.to_string(),
                witness: report.describe(w),
            });
        }
    }
    let circuits = minimal_nonempty(&s.c);
    let m = Matroid::from_circuits(s.ground.clone(), circuits)
        .map_err(|e| Error::invariant(format!("minimal members are not circuits: {e}")))?;
    let scrawl = |sets: &[Mask], mat: &Matroid| sets.iter().all(|&x| mat.is_scrawl(x).is_some());
    let dual = m.dual();
    let contains_all = |big: &[Mask], small: &[Mask]| small.iter().all(|x| big.contains(x));
    if !contains_all(&s.c, m.circuits()) || !scrawl(&s.c, &m) {
        return Err(Error::invariant("circuits are not sandwiched by 𝒞"));
    }
    if !contains_all(&s.d, dual.circuits()) || !scrawl(&s.d, &dual) {
        return Err(Error::invariant("cocircuits are not sandwiched by 𝒟"));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    /// A member of 𝒞 through e lies in I + e; e goes to J.
    Spanned,
    /// e goes to I and a member of 𝒟 is added to J.
    Independent,
    /// e was already in J; a member of 𝒞 is added to I.
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub element: usize,
    pub kind: StepKind,
    pub chosen: Option<Mask>,
    pub i: Mask,
    pub j: Mask,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseExtension {
    pub independent: Mask,
    pub rest: Mask,
    pub steps: Vec<Step>,
}

/// Lexicographic comparison of sets as sorted element lists.
fn lex_key(m: Mask) -> Vec<usize> {
    bits(m).collect()
}

/// Among `cands`, those minimising `m - base` for inclusion; lexicographically least.
fn pick_minimal(cands: &[Mask], base: Mask) -> Option<Mask> {
    let minimal: Vec<Mask> = cands
        .iter()
        .copied()
        .filter(|&m| {
            let diff = m & !base;
            !cands.iter().any(|&o| {
                let od = o & !base;
                od != diff && is_subset(od, diff)
            })
        })
        .collect();
    minimal.into_iter().min_by_key(|&m| lex_key(m))
}

/// Runs the recursive I/J construction over `order`, an enumeration of X.
/// The caller is responsible for the axioms holding; violations surface as
/// invariant errors when a required member cannot be found.
pub fn base_extend(s: &SetSystemPair, i: Mask, x: Mask, order: &[usize]) -> Result<BaseExtension> {
    let all = s.ground.all();
    if !is_subset(i, x) || !is_subset(x, all) {
        return Err(Error::input("need I ⊆ X ⊆ E"));
    }
    let order_mask = order.iter().fold(0, |m, &e| m | bit(e));
    if order_mask != x || order.len() != x.count_ones() as usize {
        return Err(Error::input("the order must list each element of X once"));
    }
    let cmin = minimal_nonempty(&s.c);
    if cmin.iter().any(|&c| is_subset(c, i)) {
        return Err(Error::input(format!("{} is not independent", s.ground.show(i))));
    }
    let mut cur_i = i;
    let mut cur_j = all & !x;
    let mut steps = Vec::with_capacity(order.len());
    for &e in order {
        let eb = bit(e);
        let (kind, chosen) = if through(&s.c, e, cur_i | eb) {
            cur_j |= eb;
            (StepKind::Spanned, None)
        } else if cur_j & eb == 0 {
            let cands: Vec<Mask> = s
                .d
                .iter()
                .copied()
                .filter(|&d| d & eb != 0 && is_subset(d, (all & !cur_i) | eb))
                .collect();
            let d = pick_minimal(&cands, cur_j).ok_or_else(|| {
                Error::invariant(format!("no member of 𝒟 through {}", s.ground.label(e)))
            })?;
            cur_i |= eb;
            cur_j = (cur_j | d) & !eb;
            (StepKind::Independent, Some(d))
        } else {
            let cands: Vec<Mask> = s
                .c
                .iter()
                .copied()
                .filter(|&c| c & eb != 0 && is_subset(c, all & !(cur_j & !eb)))
                .collect();
            let c = pick_minimal(&cands, cur_i).ok_or_else(|| {
                Error::invariant(format!("no member of 𝒞 through {}", s.ground.label(e)))
            })?;
            cur_i = (cur_i | c) & !eb;
            (StepKind::Blocked, Some(c))
        };
        if cur_i & cur_j != 0 {
            return Err(Error::invariant("I and J overlap"));
        }
        steps.push(Step {
            element: e,
            kind,
            chosen,
            i: cur_i,
            j: cur_j,
        });
    }
    let independent = cur_i;
    let maximal = bits(x & !independent).all(|y| cmin.iter().any(|&c| is_subset(c, independent | bit(y))));
    let indep = !cmin.iter().any(|&c| is_subset(c, independent));
    if !is_subset(independent, x) || !indep || !maximal {
        return Err(Error::invariant(format!(
            "{} is not a maximal independent subset of {}",
            s.ground.show(independent),
            s.ground.show(x)
        )));
    }
    Ok(BaseExtension {
        independent,
        rest: cur_j & x,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    fn pair(labels: &[&str], c: &[&[&str]], d: &[&[&str]]) -> SetSystemPair {
        let g = Ground::new(labels.iter().copied()).unwrap();
        let cm = c.iter().map(|s| g.mask(s.iter()).unwrap()).collect();
        let dm = d.iter().map(|s| g.mask(s.iter()).unwrap()).collect();
        SetSystemPair::new(g, cm, dm).unwrap()
    }

    #[test]
    fn single_pair_passes() {
        let s = pair(&["a", "b"], &[&["a", "b"]], &[&["a", "b"]]);
        assert!(check_axioms(&s).unwrap().all_pass());
    }

    #[test]
    fn empty_systems_fail_o2_with_replayable_witness() {
        let s = pair(&["a"], &[], &[]);
        let r = check_axioms(&s).unwrap();
        let w = r.witness(Axiom::O2).unwrap().clone();
        assert_eq!(w, Witness::Partition { e: 0, pc: 0, pd: 0 });
        assert!(replay(&s, Axiom::O2, &w));
        assert_eq!(r.passed(), 7);
    }

    #[test]
    fn reconstruct_u23() {
        let u = uniform(2, ["a", "b", "c"]).unwrap();
        let s = SetSystemPair::of_matroid(&u);
        assert_eq!(reconstruct(&s).unwrap(), u);
        let empty = SetSystemPair::new(Ground::default(), vec![], vec![]).unwrap();
        assert_eq!(reconstruct(&empty).unwrap().len(), 0);
    }

    #[test]
    fn base_extend_u23() {
        let u = uniform(2, ["a", "b", "c"]).unwrap();
        let s = SetSystemPair::of_matroid(&u);
        // Lexicographic tie-breaking picks D = {a,b} for a, which puts b in J
        // and pulls c into I.
        let r = base_extend(&s, 0, 0b111, &[0, 1, 2]).unwrap();
        assert_eq!(r.independent, 0b101);
        assert!(u.is_base(r.independent));
        let r = base_extend(&s, 0b011, 0b111, &[2, 0, 1]).unwrap();
        assert_eq!(r.independent, 0b011);
    }

    #[test]
    fn elimination_agreement_examples() {
        let g = Ground::new(["a", "b", "c"]).unwrap();
        let ok = check_o2_via_elimination(&g, &[0b111]).unwrap();
        assert!(ok.o2_holds && ok.elimination_holds);
        let bad = check_o2_via_elimination(&g, &[0b011, 0b110]).unwrap();
        assert!(!bad.o2_holds && !bad.elimination_holds);
        let none = check_o2_via_elimination(&Ground::default(), &[]).unwrap();
        assert!(none.o2_holds && none.elimination_holds);
    }
}
