use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::lens::HomotopyClass;

/// Per-class graded dimensions over the rationals. Absent entries are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedTable {
    entries: BTreeMap<(HomotopyClass, Rational), u64>,
}

/// One row of a [`GradedTable`] in serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub class: HomotopyClass,
    pub degree: Rational,
    pub dim: u64,
}

impl GradedTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `dim` to the entry at `(class, degree)`; zero is ignored.
    pub fn add(&mut self, class: HomotopyClass, degree: Rational, dim: u64) {
        if dim > 0 {
            *self.entries.entry((class, degree)).or_insert(0) += dim;
        }
    }

    pub fn dim(&self, class: HomotopyClass, degree: &Rational) -> u64 {
        self.entries
            .get(&(class, degree.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Degrees carrying a nonzero entry in `class`, ascending.
    pub fn degrees(&self, class: HomotopyClass) -> Vec<Rational> {
        self.entries
            .keys()
            .filter(|(c, _)| *c == class)
            .map(|(_, d)| d.clone())
            .collect()
    }

    pub fn classes(&self) -> Vec<HomotopyClass> {
        let mut out: Vec<_> = self.entries.keys().map(|(c, _)| *c).collect();
        out.dedup();
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = TableRow> + '_ {
        self.entries.iter().map(|((class, degree), &dim)| TableRow {
            class: *class,
            degree: degree.clone(),
            dim,
        })
    }

    /// Returns a copy with every class label passed through `f`.
    pub fn relabeled(&self, f: impl Fn(HomotopyClass) -> HomotopyClass) -> GradedTable {
        let mut out = GradedTable::new();
        for ((c, d), &dim) in &self.entries {
            out.add(f(*c), d.clone(), dim);
        }
        out
    }

    pub fn merge(&mut self, other: &GradedTable) {
        for ((c, d), &dim) in &other.entries {
            self.add(*c, d.clone(), dim);
        }
    }
}

impl Serialize for GradedTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for row in self.rows() {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}
