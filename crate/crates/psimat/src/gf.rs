//! Exact linear algebra over prime fields GF(p).
//!
//! Subspaces keep their ambient coordinate labels in lexicographic order and
//! store a reduced row-echelon basis, so equal subspaces compare equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A prime field GF(p) with 2 <= p <= 251.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Field {
    p: u8,
}

impl Field {
    pub const GF2: Field = Field { p: 2 };
    pub const GF3: Field = Field { p: 3 };

    pub fn new(p: u32) -> Result<Self> {
        if !(2..=251).contains(&p) || !is_prime(p) {
            return Err(Error::input(format!("GF({p}) is not a supported prime field")));
        }
        Ok(Field { p: p as u8 })
    }

    pub fn p(self) -> u8 {
        self.p
    }

    pub fn size(self) -> usize {
        self.p as usize
    }

    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    pub fn neg(self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        // Fermat: a^(p-2)
        let mut result = 1u8;
        let mut base = a;
        let mut exp = self.p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    pub fn element(self, value: u8) -> FieldElement {
        FieldElement {
            value: value % self.p,
            p: self.p,
        }
    }

    /// Dot product of two dense vectors.
    pub fn dot(self, a: &[u8], b: &[u8]) -> u8 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldElement {
    pub value: u8,
    pub p: u8,
}

impl FieldElement {
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A sparse vector keyed by element label. Zero coordinates are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: Field,
    coords: BTreeMap<String, u8>,
}

impl Vector {
    pub fn zero(field: Field) -> Self {
        Vector {
            field,
            coords: BTreeMap::new(),
        }
    }

    pub fn new<I, S>(field: Field, coords: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut v = Vector::zero(field);
        for (label, x) in coords {
            v.set(label, field.reduce(x));
        }
        v
    }

    /// Builds a vector from dense residues listed in `ambient` order.
    pub fn from_dense(field: Field, ambient: &[String], values: &[u8]) -> Self {
        let coords = ambient
            .iter()
            .zip(values)
            .filter(|(_, &x)| x % field.p != 0)
            .map(|(l, &x)| (l.clone(), x % field.p))
            .collect();
        Vector { field, coords }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, label: &str) -> u8 {
        self.coords.get(label).copied().unwrap_or(0)
    }

    pub fn set(&mut self, label: impl Into<String>, value: u8) {
        let label = label.into();
        let value = value % self.field.p;
        if value == 0 {
            self.coords.remove(&label);
        } else {
            self.coords.insert(label, value);
        }
    }

    pub fn coords(&self) -> &BTreeMap<String, u8> {
        &self.coords
    }

    pub fn support(&self) -> BTreeSet<String> {
        self.coords.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_dense(&self, ambient: &[String]) -> Vec<u8> {
        ambient.iter().map(|l| self.get(l)).collect()
    }

    pub fn restrict<'a>(&self, labels: impl IntoIterator<Item = &'a String>) -> Vector {
        let mut out = Vector::zero(self.field);
        for l in labels {
            out.set(l.clone(), self.get(l));
        }
        out
    }

    pub fn dot(&self, other: &Vector) -> u8 {
        self.coords.iter().fold(0, |acc, (l, &x)| {
            self.field.add(acc, self.field.mul(x, other.get(l)))
        })
    }

    pub fn scale(&self, c: u8) -> Vector {
        let mut out = Vector::zero(self.field);
        for (l, &x) in &self.coords {
            out.set(l.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        for (l, &x) in &other.coords {
            out.set(l.clone(), self.field.add(out.get(l), x));
        }
        out
    }

    /// Renames coordinates through `map`; labels missing from the map are dropped.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Vector {
        let mut out = Vector::zero(self.field);
        for (l, &x) in &self.coords {
            if let Some(to) = map.get(l) {
                out.set(to.clone(), x);
            }
        }
        out
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (l, x)) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}:{x}")?;
        }
        write!(f, ")")
    }
}

/// Row-reduces `rows` in place, choosing pivots in the column order `cols`.
/// Returns the pivot column of each surviving row; zero rows are removed.
fn echelon(field: Field, rows: &mut Vec<Vec<u8>>, cols: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in cols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..rows[i].len() {
                    let d = field.mul(f, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A subspace of k^E for an explicit, lexicographically ordered ground set E.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: Vec<String>,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    fn sorted_ambient<I, S>(ambient: I) -> Result<Vec<String>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = ambient.into_iter().map(Into::into).collect();
        Ok(set.into_iter().collect())
    }

    fn from_dense_rows(field: Field, ambient: Vec<String>, mut rows: Vec<Vec<u8>>) -> Self {
        let cols: Vec<usize> = (0..ambient.len()).collect();
        echelon(field, &mut rows, &cols);
        Subspace {
            field,
            ambient,
            basis: rows,
        }
    }

    /// Canonical reduced row-echelon basis of the span of `rows`.
    pub fn rref<I, S>(field: Field, ambient: I, rows: &[Vector]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ambient = Self::sorted_ambient(ambient)?;
        let index: BTreeSet<&String> = ambient.iter().collect();
        let mut dense = Vec::with_capacity(rows.len());
        for row in rows {
            if row.field != field {
                return Err(Error::input(format!(
                    "vector over {} in a subspace over {field}",
                    row.field
                )));
            }
            if let Some(l) = row.coords.keys().find(|l| !index.contains(l)) {
                return Err(Error::input(format!("label {l} is not in the ambient set")));
            }
            dense.push(row.to_dense(&ambient));
        }
        Ok(Self::from_dense_rows(field, ambient, dense))
    }

    pub fn zero<I, S>(field: Field, ambient: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ambient = Self::sorted_ambient(ambient).expect("labels");
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full<I, S>(field: Field, ambient: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ambient = Self::sorted_ambient(ambient).expect("labels");
        let n = ambient.len();
        let basis = (0..n)
            .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
            .collect();
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> &[String] {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dense_basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.basis
            .iter()
            .map(|r| Vector::from_dense(self.field, &self.ambient, r))
            .collect()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect()
    }

    /// The orthogonal complement with respect to the standard bilinear form.
    pub fn complement(&self) -> Subspace {
        let n = self.ambient.len();
        let pivots = self.pivots();
        let rows = (0..n)
            .filter(|j| !pivots.contains(j))
            .map(|j| {
                let mut w = vec![0u8; n];
                w[j] = 1;
                for (row, &p) in self.basis.iter().zip(&pivots) {
                    w[p] = self.field.neg(row[j]);
                }
                w
            })
            .collect();
        Self::from_dense_rows(self.field, self.ambient.clone(), rows)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        if v.field != self.field || v.coords.keys().any(|l| self.ambient.binary_search(l).is_err())
        {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_dense(&self.ambient));
        let cols: Vec<usize> = (0..self.ambient.len()).collect();
        echelon(self.field, &mut rows, &cols).len() == self.dim()
    }

    /// All |k|^dim vectors of the subspace in dense form, in a fixed order.
    pub fn dense_vectors(&self) -> Vec<Vec<u8>> {
        let n = self.ambient.len();
        let q = self.field.size();
        let mut out = vec![vec![0u8; n]];
        for row in &self.basis {
            let mut next = Vec::with_capacity(out.len() * q);
            for v in &out {
                for c in 0..q as u8 {
                    let w: Vec<u8> = v
                        .iter()
                        .zip(row)
                        .map(|(&a, &b)| self.field.add(a, self.field.mul(c, b)))
                        .collect();
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.dense_vectors()
            .iter()
            .map(|v| Vector::from_dense(self.field, &self.ambient, v))
            .collect()
    }

    /// Re-expresses the subspace over a larger ambient set, padding with zeros.
    pub fn embed<I, S>(&self, ambient: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut all: BTreeSet<String> = ambient.into_iter().map(Into::into).collect();
        all.extend(self.ambient.iter().cloned());
        Subspace::rref(self.field, all, &self.basis())
    }

    /// The projection onto the coordinates in `labels` (which must lie in the ambient set).
    pub fn project(&self, labels: &BTreeSet<String>) -> Result<Subspace> {
        if let Some(l) = labels.iter().find(|l| self.ambient.binary_search(l).is_err()) {
            return Err(Error::input(format!("label {l} is not in the ambient set")));
        }
        let rows: Vec<Vector> = self.basis().iter().map(|v| v.restrict(labels)).collect();
        Subspace::rref(self.field, labels.iter().cloned(), &rows)
    }

    /// Applies a label bijection to the ambient set.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Subspace> {
        let ambient: Vec<String> = self
            .ambient
            .iter()
            .map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
            .collect();
        let distinct: BTreeSet<&String> = ambient.iter().collect();
        if distinct.len() != ambient.len() {
            return Err(Error::input("relabelling is not injective"));
        }
        let rows: Vec<Vector> = self
            .basis
            .iter()
            .map(|r| Vector::from_dense(self.field, &ambient, r))
            .collect();
        Subspace::rref(self.field, ambient.clone(), &rows)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on [{}] dim {}", self.field, self.ambient.join(" "), self.dim())?;
        for row in &self.basis {
            let s: Vec<String> = row.iter().map(u8::to_string).collect();
            write!(f, "\n  {}", s.join(" "))?;
        }
        Ok(())
    }
}

/// Returns coefficients `lambda` with `sum lambda_i * xs[i] = y` when `y` lies in the span.
pub fn in_span(y: &Vector, xs: &[Vector]) -> Option<Vec<u8>> {
    let field = y.field;
    let labels: BTreeSet<String> = xs
        .iter()
        .flat_map(|x| x.coords.keys().cloned())
        .chain(y.coords.keys().cloned())
        .collect();
    let ambient: Vec<String> = labels.into_iter().collect();
    let n = ambient.len();
    let k = xs.len();
    // Rows are [x_i | e_i]; reducing on the first n columns records how each
    // reduced row is combined from the inputs.
    let mut rows: Vec<Vec<u8>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = x.to_dense(&ambient);
            r.extend((0..k).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    let pivots = echelon(field, &mut rows, &cols);
    let mut residual = y.to_dense(&ambient);
    let mut lambda = vec![0u8; k];
    for (row, &p) in rows.iter().zip(&pivots) {
        let c = residual[p];
        if c == 0 {
            continue;
        }
        for j in 0..n {
            residual[j] = field.sub(residual[j], field.mul(c, row[j]));
        }
        for j in 0..k {
            lambda[j] = field.add(lambda[j], field.mul(c, row[n + j]));
        }
    }
    residual.iter().all(|&x| x == 0).then_some(lambda)
}

/// Canonical basis of (U1 + U2) ∩ k^S, returned over the ambient set S.
pub fn sum_intersect(u1: &Subspace, u2: &Subspace, s: &BTreeSet<String>) -> Result<Subspace> {
    if u1.field != u2.field {
        return Err(Error::input(format!(
            "field mismatch: {} and {}",
            u1.field, u2.field
        )));
    }
    let field = u1.field;
    let ambient: Vec<String> = u1
        .ambient
        .iter()
        .chain(&u2.ambient)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if let Some(l) = s.iter().find(|l| ambient.binary_search(l).is_err()) {
        return Err(Error::input(format!("label {l} is outside both ambient sets")));
    }
    let mut rows: Vec<Vec<u8>> = u1
        .basis()
        .iter()
        .chain(u2.basis().iter())
        .map(|v| v.to_dense(&ambient))
        .collect();
    // Eliminate the columns outside S first: rows left with a pivot in S are
    // then zero outside S and span the intersection.
    let outside: Vec<usize> = (0..ambient.len()).filter(|&i| !s.contains(&ambient[i])).collect();
    let inside: Vec<usize> = (0..ambient.len()).filter(|&i| s.contains(&ambient[i])).collect();
    let order: Vec<usize> = outside.iter().chain(&inside).copied().collect();
    let pivots = echelon(field, &mut rows, &order);
    let kept: Vec<Vector> = rows
        .iter()
        .zip(&pivots)
        .filter(|(_, p)| s.contains(&ambient[**p]))
        .map(|(r, _)| Vector::from_dense(field, &ambient, r))
        .collect();
    Subspace::rref(field, s.iter().cloned(), &kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Vec<String> {
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    fn v(field: Field, vals: &[i64]) -> Vector {
        Vector::new(field, abc().into_iter().zip(vals.iter().copied()))
    }

    #[test]
    fn field_inverse() {
        let f = Field::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert!(Field::new(4).is_err());
        assert!(Field::new(257).is_err());
        assert!(Field::new(251).is_ok());
    }

    #[test]
    fn rref_examples() {
        let f = Field::GF2;
        let id = Subspace::rref(f, abc(), &[v(f, &[1, 0, 0]), v(f, &[0, 1, 0]), v(f, &[0, 0, 1])])
            .unwrap();
        assert_eq!(id, Subspace::full(f, abc()));
        let u = Subspace::rref(f, abc(), &[v(f, &[1, 1, 0]), v(f, &[0, 1, 1])]).unwrap();
        assert_eq!(u.dense_basis(), &[vec![1, 0, 1], vec![0, 1, 1]]);
        let z = Subspace::rref(f, abc(), &[v(f, &[0, 0, 0])]).unwrap();
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn rref_rejects_mismatch() {
        let u = Subspace::rref(Field::GF2, abc(), &[v(Field::GF3, &[1, 0, 0])]);
        assert!(matches!(u, Err(Error::Input(_))));
        let w = Vector::new(Field::GF2, [("z", 1)]);
        assert!(Subspace::rref(Field::GF2, abc(), &[w]).is_err());
    }

    #[test]
    fn complement_examples() {
        let f = Field::GF2;
        let u = Subspace::rref(f, abc(), &[v(f, &[1, 1, 0]), v(f, &[0, 1, 1])]).unwrap();
        assert_eq!(u.complement().dense_basis(), &[vec![1, 1, 1]]);
        assert_eq!(Subspace::full(f, abc()).complement().dim(), 0);
        let g3 = Field::GF3;
        let z = Subspace::zero(g3, ["a", "b"]);
        assert_eq!(z.complement(), Subspace::full(g3, ["a", "b"]));
    }

    #[test]
    fn in_span_examples() {
        let f = Field::GF2;
        let xs = [v(f, &[1, 1, 0]), v(f, &[0, 1, 1])];
        assert_eq!(in_span(&v(f, &[1, 0, 1]), &xs), Some(vec![1, 1]));
        assert_eq!(in_span(&v(f, &[1, 1, 1]), &xs), None);
        assert_eq!(in_span(&Vector::zero(f), &xs), Some(vec![0, 0]));
    }

    #[test]
    fn sum_intersect_example() {
        let f = Field::GF2;
        let u1 = Subspace::rref(f, ["e", "a", "b"], &[Vector::new(f, [("e", 1), ("a", 1), ("b", 1)])])
            .unwrap();
        let u2 = Subspace::rref(f, ["e", "c", "d"], &[Vector::new(f, [("e", 1), ("c", 1), ("d", 1)])])
            .unwrap();
        let s: BTreeSet<String> = ["a", "b", "c", "d"].iter().map(|x| x.to_string()).collect();
        let w = sum_intersect(&u1, &u2, &s).unwrap();
        assert_eq!(w.dense_basis(), &[vec![1, 1, 1, 1]]);
    }
}
