use std::collections::{BTreeMap, HashMap};

use super::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize, one: Scalar) -> Self {
        SparseVec { entries: vec![(index, one)] }
    }

    /// Builds from unordered entries, summing duplicates and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in entries {
            accumulate(&mut map, i, &v);
        }
        Self::from_map(map)
    }

    pub(crate) fn from_map(map: BTreeMap<usize, Scalar>) -> Self {
        SparseVec { entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect() }
    }

    pub fn to_dense(&self, field: Field, len: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&index, |(i, _)| *i).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn scale(&self, s: &Scalar) -> SparseVec {
        if s.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * s)).collect() }
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Scalar, other: &SparseVec) -> SparseVec {
        if s.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, s * y));
                        b.next();
                    } else {
                        let v = x + &(s * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, s * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot_dense(&self, dense: &[Scalar], field: Field) -> Scalar {
        let mut acc = field.zero();
        for (i, v) in &self.entries {
            if !dense[*i].is_zero() {
                acc += &(v * &dense[*i]);
            }
        }
        acc
    }
}

pub(crate) fn accumulate(map: &mut BTreeMap<usize, Scalar>, index: usize, v: &Scalar) {
    if v.is_zero() {
        return;
    }
    match map.get_mut(&index) {
        Some(x) => {
            *x += v;
            if x.is_zero() {
                map.remove(&index);
            }
        }
        None => {
            map.insert(index, v.clone());
        }
    }
}

/// Incrementally built echelon basis of a span of sparse vectors.
///
/// Every stored row is monic at its pivot and has zeros at all other pivots,
/// so reduction leaves a remainder supported off the pivot set. With
/// tracking enabled, each row also records its expression in terms of the
/// inserted inputs, which turns dependent inputs into kernel vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
    tracking: bool,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: Vec::new(), combos: Vec::new(), pivot_row: HashMap::new(), tracking: false, inserted: 0 }
    }

    pub fn tracked(field: Field) -> Self {
        Echelon { tracking: true, ..Self::new(field) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.pivot_row.contains_key(&index)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().expect("nonzero row").0)
    }

    fn reduce_with(&self, v: &SparseVec, mut combo: Option<&mut BTreeMap<usize, Scalar>>) -> SparseVec {
        let mut map: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = map.range(cursor..).find(|(k, _)| self.pivot_row.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, coef)) = next else { break };
            let r = self.pivot_row[&k];
            for (i, x) in self.rows[r].iter() {
                accumulate(&mut map, *i, &-(&coef * x));
            }
            if let Some(c) = combo.as_deref_mut() {
                for (i, x) in self.combos[r].iter() {
                    accumulate(c, *i, &-(&coef * x));
                }
            }
            cursor = k + 1;
        }
        SparseVec::from_map(map)
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with(v, None)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`. Returns `true` if it enlarged the span.
    pub fn push(&mut self, v: &SparseVec) -> bool {
        self.push_tracked(v).is_none()
    }

    /// Inserts `v` as input number `self.inserted`. When `v` is dependent on
    /// earlier inputs, returns the dependency `sum_i c_i input_i = 0` (with
    /// tracking enabled; otherwise an empty vector).
    pub fn push_tracked(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let id = self.inserted;
        self.inserted += 1;
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        if self.tracking {
            combo.insert(id, self.field.one());
        }
        let rem = self.reduce_with(v, self.tracking.then_some(&mut combo));
        if rem.is_zero() {
            return Some(SparseVec::from_map(combo));
        }
        let (pivot, lead) = rem.leading().cloned().expect("nonzero remainder");
        let inv = lead.inv().expect("nonzero leading entry");
        let row = rem.scale(&inv);
        let combo = SparseVec::from_map(combo).scale(&inv);
        // Clear the new pivot from existing rows to stay fully reduced.
        for r in 0..self.rows.len() {
            if let Some(c) = self.rows[r].get(pivot).cloned() {
                let neg = -&c;
                self.rows[r] = self.rows[r].axpy(&neg, &row);
                if self.tracking {
                    self.combos[r] = self.combos[r].axpy(&neg, &combo);
                }
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(row);
        self.combos.push(combo);
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sv(xs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(xs.iter().map(|&(i, x)| (i, Q.from_i64(x))))
    }

    #[test]
    fn axpy_cancels() {
        let a = sv(&[(0, 1), (3, 2)]);
        let b = sv(&[(3, 1), (5, 1)]);
        assert_eq!(a.axpy(&Q.from_i64(-2), &b), sv(&[(0, 1), (5, -2)]));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new(Q);
        assert!(e.push(&sv(&[(0, 1), (1, 1)])));
        assert!(e.push(&sv(&[(1, 1), (2, 1)])));
        assert!(!e.push(&sv(&[(0, 1), (2, -1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&sv(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn tracked_dependencies_are_kernel_vectors() {
        let inputs = [sv(&[(0, 1), (1, 1)]), sv(&[(1, 1), (2, 1)]), sv(&[(0, 1), (2, -1)])];
        let mut e = Echelon::tracked(Q);
        let mut deps = Vec::new();
        for v in &inputs {
            if let Some(d) = e.push_tracked(v) {
                deps.push(d);
            }
        }
        assert_eq!(deps.len(), 1);
        let mut total = SparseVec::new();
        for (i, c) in deps[0].iter() {
            total = total.axpy(c, &inputs[*i]);
        }
        assert!(total.is_zero());
    }
}
