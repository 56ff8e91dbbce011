//! Finite matroids stored as explicit circuit and cocircuit lists.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{check_cap, Error, Result};
use crate::gf::{sum_intersect, Subspace};
use crate::sets::{bit, bits, canonical, is_subset, minimal_nonempty, submasks, Ground, Mask};

/// Default cap on ground-set size for exponential enumerations.
pub const DEFAULT_CAP: usize = 16;

/// Cap on the number of vectors enumerated from a representation.
pub const VECTOR_CAP: usize = 1 << 20;

#[derive(Debug, Clone)]
pub enum Provenance {
    Explicit,
    Graphic { graph: String },
    Represented(Subspace),
}

#[derive(Debug, Clone)]
pub struct Matroid {
    ground: Ground,
    circuits: Vec<Mask>,
    cocircuits: Vec<Mask>,
    rank: usize,
    provenance: Provenance,
}

/// Two matroids are equal when they have the same ground set and circuits.
impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.circuits == other.circuits
    }
}

impl Eq for Matroid {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fundamental {
    Circuit(Mask),
    Cocircuit(Mask),
}

/// A union of circuits together with circuits covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scrawl {
    pub edges: Mask,
    pub witness: Vec<Mask>,
}

/// `rank[m]` for every subset `m` of an `n`-element ground set.
fn rank_table(n: usize, circuits: &[Mask]) -> Vec<u8> {
    let size = 1usize << n;
    let mut is_circuit = vec![false; size];
    for &c in circuits {
        is_circuit[c as usize] = true;
    }
    let mut dependent = vec![false; size];
    let mut rank = vec![0u8; size];
    for m in 1..size {
        let dep = is_circuit[m] || bits(m as Mask).any(|i| dependent[m & !(1 << i)]);
        dependent[m] = dep;
        rank[m] = if dep {
            bits(m as Mask)
                .map(|i| rank[m & !(1 << i)])
                .max()
                .unwrap_or(0)
        } else {
            m.count_ones() as u8
        };
    }
    rank
}

/// Minimal sets meeting every base, i.e. minimal `d` with r(E - d) < r(E).
fn cocircuits_from_ranks(n: usize, rank: &[u8]) -> Vec<Mask> {
    let all = crate::sets::full(n);
    let r = rank[all as usize];
    let size = 1usize << n;
    let meets_all = |d: usize| rank[(all & !(d as Mask)) as usize] < r;
    let found: Vec<Mask> = (1..size)
        .filter(|&d| meets_all(d) && bits(d as Mask).all(|i| !meets_all(d & !(1 << i))))
        .map(|d| d as Mask)
        .collect();
    canonical(found)
}

fn circuits_through(circuits: &[Mask], z: usize, within: Mask) -> bool {
    circuits
        .iter()
        .any(|&c| c & bit(z) != 0 && is_subset(c, within))
}

/// Checks (C1), (C2), classical elimination, and elimination indexed by |X| <= 2.
fn validate(ground: &Ground, circuits: &[Mask]) -> Result<()> {
    let show = |m| ground.show(m).to_string();
    if circuits.contains(&0) {
        return Err(Error::Axiom {
            axiom: "(C1)".into(),
            witness: "the empty set is a circuit".into(),
        });
    }
    for (i, &a) in circuits.iter().enumerate() {
        for &b in &circuits[i + 1..] {
            if is_subset(a, b) || is_subset(b, a) {
                return Err(Error::Axiom {
                    axiom: "(C2)".into(),
                    witness: format!("{} and {} are nested", show(a), show(b)),
                });
            }
        }
    }
    for (i, &a) in circuits.iter().enumerate() {
        for &b in &circuits[i + 1..] {
            for e in bits(a & b) {
                let within = (a | b) & !bit(e);
                if !circuits.iter().any(|&c| is_subset(c, within)) {
                    return Err(Error::Axiom {
                        axiom: "(C3)".into(),
                        witness: format!(
                            "no circuit inside ({} ∪ {}) - {}",
                            show(a),
                            show(b),
                            ground.label(e)
                        ),
                    });
                }
            }
        }
    }
    let elim_err = |o: Mask, x: Mask, us: Mask, z: usize| Error::Axiom {
        axiom: "(C3)".into(),
        witness: format!(
            "o={} X={} family union {}: no circuit through {} avoiding X",
            show(o),
            show(x),
            show(us),
            ground.label(z)
        ),
    };
    for &o in circuits {
        for x in bits(o) {
            for &ox in circuits.iter().filter(|&&c| c & bit(x) != 0) {
                for z in bits(o & !ox) {
                    if !circuits_through(circuits, z, (o | ox) & !bit(x)) {
                        return Err(elim_err(o, bit(x), ox, z));
                    }
                }
            }
            for y in bits(o).filter(|&y| y > x) {
                let xy = bit(x) | bit(y);
                let fam_x = circuits.iter().filter(|&&c| c & xy == bit(x));
                for &ox in fam_x {
                    for &oy in circuits.iter().filter(|&&c| c & xy == bit(y)) {
                        let union = ox | oy;
                        for z in bits(o & !union) {
                            if !circuits_through(circuits, z, (o | union) & !xy) {
                                return Err(elim_err(o, xy, union, z));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

impl Matroid {
    /// Builds from a list of circuits known to form a matroid.
    fn build(ground: Ground, circuits: Vec<Mask>, provenance: Provenance, cap: usize) -> Result<Self> {
        check_cap("matroid ground set", ground.len(), cap)?;
        let circuits = canonical(circuits);
        let ranks = rank_table(ground.len(), &circuits);
        let cocircuits = cocircuits_from_ranks(ground.len(), &ranks);
        let rank = ranks[ground.all() as usize] as usize;
        Ok(Matroid {
            ground,
            circuits,
            cocircuits,
            rank,
            provenance,
        })
    }

    pub fn from_circuits(ground: Ground, circuits: Vec<Mask>) -> Result<Self> {
        Self::from_circuits_capped(ground, circuits, DEFAULT_CAP)
    }

    pub fn from_circuits_capped(ground: Ground, circuits: Vec<Mask>, cap: usize) -> Result<Self> {
        check_cap("matroid ground set", ground.len(), cap)?;
        if let Some(&c) = circuits.iter().find(|&&c| !is_subset(c, ground.all())) {
            return Err(Error::input(format!("circuit mask {c:#b} leaves the ground set")));
        }
        let circuits = canonical(circuits);
        validate(&ground, &circuits)?;
        Self::build(ground, circuits, Provenance::Explicit, cap)
    }

    /// Builds from label sets.
    pub fn from_circuit_sets<I, S, C>(ground: I, circuits: C) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator,
        C::Item: IntoIterator,
        <C::Item as IntoIterator>::Item: AsRef<str>,
    {
        let ground = Ground::new(ground)?;
        let masks = circuits
            .into_iter()
            .map(|c| ground.mask(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_circuits(ground, masks)
    }

    pub fn from_representation(u: &Subspace) -> Result<Self> {
        Self::from_representation_capped(u, DEFAULT_CAP)
    }

    pub fn from_representation_capped(u: &Subspace, cap: usize) -> Result<Self> {
        check_cap("represented ground set", u.ambient().len(), cap)?;
        let count = u.field().size().checked_pow(u.dim() as u32).unwrap_or(usize::MAX);
        check_cap("represented vector count", count, VECTOR_CAP)?;
        let ground = Ground::new(u.ambient().iter().cloned())?;
        let supports: Vec<Mask> = u
            .dense_vectors()
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .fold(0, |m, (i, _)| m | bit(i))
            })
            .collect();
        let circuits = minimal_nonempty(&supports);
        Self::build(ground, circuits, Provenance::Represented(u.clone()), cap)
    }

    /// Marks the matroid as the cycle matroid of the named graph.
    pub fn with_graph_provenance(mut self, graph: impl Into<String>) -> Self {
        self.provenance = Provenance::Graphic {
            graph: graph.into(),
        };
        self
    }

    pub fn free(ground: Ground) -> Self {
        Self::build(ground, Vec::new(), Provenance::Explicit, usize::MAX).expect("free matroid")
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn circuits(&self) -> &[Mask] {
        &self.circuits
    }

    pub fn cocircuits(&self) -> &[Mask] {
        &self.cocircuits
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn circuit_sets(&self) -> Vec<BTreeSet<String>> {
        self.circuits.iter().map(|&c| self.ground.set(c)).collect()
    }

    pub fn cocircuit_sets(&self) -> Vec<BTreeSet<String>> {
        self.cocircuits.iter().map(|&c| self.ground.set(c)).collect()
    }

    pub fn is_circuit(&self, m: Mask) -> bool {
        self.circuits.binary_search_by_key(&(m.count_ones(), m), |&c| (c.count_ones(), c)).is_ok()
    }

    pub fn is_cocircuit(&self, m: Mask) -> bool {
        self.cocircuits
            .binary_search_by_key(&(m.count_ones(), m), |&c| (c.count_ones(), c))
            .is_ok()
    }

    pub fn is_independent(&self, m: Mask) -> bool {
        !self.circuits.iter().any(|&c| is_subset(c, m))
    }

    /// Rank of a subset by greedy extension.
    pub fn rank_of(&self, m: Mask) -> usize {
        bits(m)
            .fold(0 as Mask, |acc, i| {
                if self.is_independent(acc | bit(i)) {
                    acc | bit(i)
                } else {
                    acc
                }
            })
            .count_ones() as usize
    }

    /// Extends an independent set greedily to a base.
    pub fn extend_to_base(&self, independent: Mask) -> Mask {
        (0..self.len()).fold(independent, |acc, i| {
            if acc & bit(i) == 0 && self.is_independent(acc | bit(i)) {
                acc | bit(i)
            } else {
                acc
            }
        })
    }

    pub fn bases(&self) -> Vec<Mask> {
        submasks(self.ground.all())
            .filter(|&m| m.count_ones() as usize == self.rank && self.is_independent(m))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn is_base(&self, m: Mask) -> bool {
        m.count_ones() as usize == self.rank && self.is_independent(m)
    }

    pub fn dual(&self) -> Matroid {
        let provenance = match &self.provenance {
            Provenance::Represented(u) => Provenance::Represented(u.complement()),
            _ => Provenance::Explicit,
        };
        Matroid {
            ground: self.ground.clone(),
            circuits: self.cocircuits.clone(),
            cocircuits: self.circuits.clone(),
            rank: self.len() - self.rank,
            provenance,
        }
    }

    /// The minor M / contract \ delete.
    pub fn minor(&self, contract: Mask, delete: Mask) -> Result<Matroid> {
        let all = self.ground.all();
        if contract & delete != 0 {
            return Err(Error::input(format!(
                "contract and delete overlap in {}",
                self.ground.show(contract & delete)
            )));
        }
        if !is_subset(contract | delete, all) {
            return Err(Error::input("minor sets leave the ground set"));
        }
        let keep = all & !(contract | delete);
        let kept: Vec<usize> = bits(keep).collect();
        let ground = Ground::new(kept.iter().map(|&i| self.ground.label(i).to_string()))?;
        let remap = |m: Mask| {
            kept.iter()
                .enumerate()
                .filter(|(_, &i)| m & bit(i) != 0)
                .fold(0, |acc, (j, _)| acc | bit(j))
        };
        let candidates: Vec<Mask> = self
            .circuits
            .iter()
            .filter(|&&o| o & delete == 0)
            .map(|&o| remap(o & !contract))
            .collect();
        let circuits = minimal_nonempty(&candidates);
        let provenance = match &self.provenance {
            Provenance::Represented(u) => {
                let outside: BTreeSet<String> = self.ground.set(all & !delete);
                let zero = Subspace::zero(u.field(), u.ambient().iter().cloned());
                let restricted = sum_intersect(u, &zero, &outside)?;
                Provenance::Represented(restricted.project(&self.ground.set(keep))?)
            }
            _ => Provenance::Explicit,
        };
        Self::build(ground, circuits, provenance, usize::MAX)
    }

    pub fn minor_by_labels<'a>(
        &self,
        contract: impl IntoIterator<Item = &'a str>,
        delete: impl IntoIterator<Item = &'a str>,
    ) -> Result<Matroid> {
        let c = self.ground.mask(contract)?;
        let d = self.ground.mask(delete)?;
        self.minor(c, d)
    }

    /// The fundamental circuit of `e` (when `e` is outside `base`) or the
    /// fundamental cocircuit of `e` (when `e` is in `base`).
    pub fn fundamental(&self, base: Mask, e: usize) -> Result<Fundamental> {
        if !self.is_base(base) {
            return Err(Error::input(format!("{} is not a base", self.ground.show(base))));
        }
        if e >= self.len() {
            return Err(Error::input("element outside the ground set"));
        }
        if base & bit(e) == 0 {
            let within = base | bit(e);
            self.circuits
                .iter()
                .find(|&&c| c & bit(e) != 0 && is_subset(c, within))
                .map(|&c| Fundamental::Circuit(c))
                .ok_or_else(|| Error::invariant("no fundamental circuit"))
        } else {
            let within = (self.ground.all() & !base) | bit(e);
            self.cocircuits
                .iter()
                .find(|&&d| d & bit(e) != 0 && is_subset(d, within))
                .map(|&d| Fundamental::Cocircuit(d))
                .ok_or_else(|| Error::invariant("no fundamental cocircuit"))
        }
    }

    /// `Some` with a circuit cover when `w` is a union of circuits.
    pub fn is_scrawl(&self, w: Mask) -> Option<Scrawl> {
        let witness: Vec<Mask> = self
            .circuits
            .iter()
            .copied()
            .filter(|&c| is_subset(c, w))
            .collect();
        let union = witness.iter().fold(0, |a, &c| a | c);
        // Keep only circuits that add new elements so the witness stays short.
        (union == w).then(|| {
            let mut cover = Vec::new();
            let mut covered = 0;
            for c in witness {
                if c & !covered != 0 {
                    covered |= c;
                    cover.push(c);
                }
            }
            Scrawl {
                edges: w,
                witness: cover,
            }
        })
    }

    /// A cocircuit meeting the circuit `o` exactly in `{e, f}`.
    pub fn separating_cocircuit(&self, o: Mask, e: usize, f: usize) -> Result<Mask> {
        if !self.is_circuit(o) {
            return Err(Error::input(format!("{} is not a circuit", self.ground.show(o))));
        }
        let ef = bit(e) | bit(f);
        if e == f || !is_subset(ef, o) {
            return Err(Error::input("e and f must be distinct elements of the circuit"));
        }
        self.cocircuits
            .iter()
            .copied()
            .find(|&b| b & o == ef)
            .ok_or_else(|| Error::invariant("no separating cocircuit"))
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ground: {}", self.ground.labels().join(" "))?;
        writeln!(f, "rank: {}", self.rank)?;
        for &c in &self.circuits {
            writeln!(f, "circuit: {}", self.ground.list(c).join(" "))?;
        }
        for &c in &self.cocircuits {
            writeln!(f, "cocircuit: {}", self.ground.list(c).join(" "))?;
        }
        Ok(())
    }
}

/// Uniform matroid U_{r,n} on the given labels.
pub fn uniform<S: Into<String>>(r: usize, labels: impl IntoIterator<Item = S>) -> Result<Matroid> {
    let ground = Ground::new(labels)?;
    let n = ground.len();
    if r > n {
        return Err(Error::input(format!("U_{{{r},{n}}} has rank above its size")));
    }
    let circuits: Vec<Mask> = submasks(ground.all())
        .filter(|m| m.count_ones() as usize == r + 1)
        .collect();
    Matroid::build(ground, circuits, Provenance::Explicit, DEFAULT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Field, Vector};

    fn k4_edges() -> Vec<&'static str> {
        vec!["12", "13", "14", "23", "24", "34"]
    }

    fn k4() -> Matroid {
        let tri = [["12", "13", "23"], ["12", "14", "24"], ["13", "14", "34"], ["23", "24", "34"]];
        let quad = [["12", "24", "34", "13"], ["12", "23", "34", "14"], ["13", "23", "24", "14"]];
        let mut cs: Vec<Vec<&str>> = tri.iter().map(|t| t.to_vec()).collect();
        cs.extend(quad.iter().map(|q| q.to_vec()));
        Matroid::from_circuit_sets(k4_edges(), cs).unwrap()
    }

    #[test]
    fn u23_cocircuits_are_pairs() {
        let m = Matroid::from_circuit_sets(["a", "b", "c"], [["a", "b", "c"]]).unwrap();
        let pairs: Vec<Mask> = vec![0b011, 0b101, 0b110];
        assert_eq!(m.cocircuits(), pairs.as_slice());
        assert_eq!(m.rank(), 2);
        assert_eq!(m.dual(), uniform(1, ["a", "b", "c"]).unwrap());
    }

    #[test]
    fn free_and_rejections() {
        let free = Matroid::from_circuit_sets(["a"], Vec::<Vec<&str>>::new()).unwrap();
        assert_eq!(free.cocircuits(), &[0b1]);
        let bad = Matroid::from_circuit_sets(["a", "b"], [vec!["a"], vec!["a", "b"]]);
        match bad {
            Err(Error::Axiom { axiom, .. }) => assert_eq!(axiom, "(C2)"),
            other => panic!("{other:?}"),
        }
        let bad = Matroid::from_circuit_sets(["a", "b", "c"], [vec!["a", "b"], vec!["b", "c"]]);
        assert!(matches!(bad, Err(Error::Axiom { .. })));
    }

    #[test]
    fn representation_examples() {
        let f = Field::GF2;
        let u = Subspace::rref(f, ["a", "b", "c"], &[Vector::new(f, [("a", 1), ("b", 1), ("c", 1)])])
            .unwrap();
        let m = Matroid::from_representation(&u).unwrap();
        assert_eq!(m.circuits(), &[0b111]);
        let z = Matroid::from_representation(&Subspace::zero(f, ["a", "b"])).unwrap();
        assert!(z.circuits().is_empty());
    }

    #[test]
    fn k4_dual_has_seven_bonds() {
        let m = k4();
        assert_eq!(m.circuits().len(), 7);
        assert_eq!(m.dual().circuits().len(), 7);
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn k4_fundamental_circuit() {
        let m = k4();
        let g = m.ground().clone();
        let star = g.mask(["12", "13", "14"]).unwrap();
        let e = g.index("23").unwrap();
        assert_eq!(
            m.fundamental(star, e).unwrap(),
            Fundamental::Circuit(g.mask(["12", "13", "23"]).unwrap())
        );
        assert!(m.fundamental(g.mask(["12", "13"]).unwrap(), e).is_err());
    }

    #[test]
    fn k4_separating_cocircuit_is_star() {
        let m = k4();
        let g = m.ground().clone();
        let o = g.mask(["12", "13", "23"]).unwrap();
        let b = m
            .separating_cocircuit(o, g.index("12").unwrap(), g.index("13").unwrap())
            .unwrap();
        assert_eq!(b, g.mask(["12", "13", "14"]).unwrap());
    }

    #[test]
    fn k4_scrawls() {
        let m = k4();
        let all = m.ground().all();
        let s = m.is_scrawl(all).unwrap();
        assert_eq!(s.witness.iter().fold(0, |a, &c| a | c), all);
        assert!(m.is_scrawl(0).is_some());
        assert!(m.is_scrawl(0b1).is_none());
    }

    #[test]
    fn k4_contract_edge_gives_parallel_pair() {
        let m = k4();
        let c = m.minor_by_labels(["12"], []).unwrap();
        assert!(c.circuits().iter().any(|c| c.count_ones() == 2));
        assert_eq!(m.minor(0, 0).unwrap(), m);
        assert!(m.minor(0b1, 0b1).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let labels: Vec<String> = (0..17).map(|i| format!("e{i:02}")).collect();
        let r = Matroid::from_circuit_sets(labels, Vec::<Vec<&str>>::new());
        assert!(matches!(r, Err(Error::Resource { .. })));
    }
}
