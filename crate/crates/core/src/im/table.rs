use std::collections::BTreeMap;
use std::fmt;

use crate::algebroid::{BundleDerivation, Section};
use crate::defcomplex::perm::{for_each_permutation, sort_with_sign};
use crate::symexpr::{PolyMatrix, Polynomial};

/// Values a [`AltTable`] can hold: a module over polynomials.
pub trait TableValue: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_poly(&self, f: &Polynomial) -> Self;
}

impl TableValue for BundleDerivation {
    fn is_zero(&self) -> bool {
        BundleDerivation::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        BundleDerivation::add(self, other)
    }
    fn neg(&self) -> Self {
        BundleDerivation::neg(self)
    }
    fn mul_poly(&self, f: &Polynomial) -> Self {
        BundleDerivation::mul_poly(self, f)
    }
}

impl TableValue for PolyMatrix {
    fn is_zero(&self) -> bool {
        PolyMatrix::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PolyMatrix::add(self, other)
    }
    fn neg(&self) -> Self {
        PolyMatrix::neg(self)
    }
    fn mul_poly(&self, f: &Polynomial) -> Self {
        PolyMatrix::mul_poly(self, f)
    }
}

/// A skew-symmetric, function-multilinear map on a frame, stored by its
/// values on increasing index tuples. Zero entries are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct AltTable<T> {
    arity: usize,
    zero: T,
    entries: BTreeMap<Vec<usize>, T>,
}

impl<T: TableValue> AltTable<T> {
    pub fn new(arity: usize, zero: T) -> Self {
        AltTable {
            arity,
            zero,
            entries: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn zero_value(&self) -> &T {
        &self.zero
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, T> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `v` at `idx`, reordering with the permutation sign.
    pub fn insert(&mut self, idx: &[usize], v: T) {
        assert_eq!(idx.len(), self.arity, "table arity");
        let Some((sorted, odd)) = sort_with_sign(idx) else {
            return;
        };
        let v = if odd { v.neg() } else { v };
        let cur = self.entries.remove(&sorted).map_or(v.clone(), |c| c.add(&v));
        if !cur.is_zero() {
            self.entries.insert(sorted, cur);
        }
    }

    pub fn get(&self, idx: &[usize]) -> T {
        match sort_with_sign(idx) {
            None => self.zero.clone(),
            Some((sorted, odd)) => match self.entries.get(&sorted) {
                None => self.zero.clone(),
                Some(v) if odd => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    /// `Σ Π s_j^{α_j} table(α)` over all orderings of the stored tuples.
    pub fn eval(&self, args: &[Section]) -> T {
        assert_eq!(args.len(), self.arity, "table arity");
        let mut acc = self.zero.clone();
        for (idx, v) in &self.entries {
            for_each_permutation(idx, |perm, odd| {
                let mut coeff: Option<Polynomial> = None;
                for (a, &al) in args.iter().zip(perm) {
                    let f = a.coeff(al);
                    if f.is_zero() {
                        return;
                    }
                    coeff = Some(match coeff {
                        None => f.clone(),
                        Some(c) => &c * f,
                    });
                }
                let t = match coeff {
                    None => v.clone(),
                    Some(c) => v.mul_poly(&c),
                };
                acc = if odd { acc.add(&t.neg()) } else { acc.add(&t) };
            });
        }
        acc
    }
}
