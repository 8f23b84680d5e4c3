//! Finite integer domains stored as one flat bitset for all variables.
//!
//! Values are positive integers `1..=max_value`. Bit 0 of every domain is
//! never set. Cloning a [`DomainSet`] is a single allocation, which keeps
//! search nodes cheap.

use std::fmt;

use crate::error::{Error, Result};
use crate::{Value, Var};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DomainSet {
    num_vars: usize,
    max_value: Value,
    words_per_var: usize,
    bits: Vec<u64>,
}

impl DomainSet {
    /// All domains empty.
    pub fn empty(num_vars: usize, max_value: Value) -> Self {
        let words_per_var = (max_value + 1).div_ceil(WORD_BITS);
        DomainSet { num_vars, max_value, words_per_var, bits: vec![0; num_vars * words_per_var] }
    }

    /// Every variable ranges over `1..=max_value`.
    pub fn full(num_vars: usize, max_value: Value) -> Self {
        let mut d = DomainSet::empty(num_vars, max_value);
        for var in 0..num_vars {
            for v in 1..=max_value {
                d.insert(var, v);
            }
        }
        d
    }

    pub fn from_lists<L: AsRef<[Value]>>(max_value: Value, lists: &[L]) -> Result<Self> {
        let mut d = DomainSet::empty(lists.len(), max_value);
        for (var, list) in lists.iter().enumerate() {
            for &v in list.as_ref() {
                if v == 0 || v > max_value {
                    return Err(Error::ValueOutOfRange { value: v, max: max_value });
                }
                d.insert(var, v);
            }
        }
        Ok(d)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_value(&self) -> Value {
        self.max_value
    }

    #[inline]
    fn words(&self, var: Var) -> &[u64] {
        let start = var * self.words_per_var;
        &self.bits[start..start + self.words_per_var]
    }

    #[inline]
    pub fn contains(&self, var: Var, value: Value) -> bool {
        if value == 0 || value > self.max_value {
            return false;
        }
        let w = self.bits[var * self.words_per_var + value / WORD_BITS];
        w & (1u64 << (value % WORD_BITS)) != 0
    }

    /// Only for building initial domains; propagation never re-adds values.
    pub(crate) fn insert(&mut self, var: Var, value: Value) {
        self.bits[var * self.words_per_var + value / WORD_BITS] |= 1u64 << (value % WORD_BITS);
    }

    /// Removes `value`; returns whether it was present.
    #[inline]
    pub fn remove(&mut self, var: Var, value: Value) -> bool {
        if !self.contains(var, value) {
            return false;
        }
        self.bits[var * self.words_per_var + value / WORD_BITS] &= !(1u64 << (value % WORD_BITS));
        true
    }

    /// Restricts `var` to `{value}`, returning the removed values.
    pub fn assign(&mut self, var: Var, value: Value) -> Vec<Value> {
        let removed: Vec<Value> = self.values(var).filter(|&v| v != value).collect();
        for &v in &removed {
            self.remove(var, v);
        }
        removed
    }

    pub fn size(&self, var: Var) -> usize {
        self.words(var).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self, var: Var) -> bool {
        self.words(var).iter().all(|&w| w == 0)
    }

    pub fn first_empty(&self) -> Option<Var> {
        (0..self.num_vars).find(|&var| self.is_empty(var))
    }

    pub fn min(&self, var: Var) -> Option<Value> {
        self.values(var).next()
    }

    pub fn max(&self, var: Var) -> Option<Value> {
        let words = self.words(var);
        for (i, &w) in words.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// The value of a singleton domain.
    pub fn fixed_value(&self, var: Var) -> Option<Value> {
        let mut it = self.values(var);
        match (it.next(), it.next()) {
            (Some(v), None) => Some(v),
            _ => None,
        }
    }

    pub fn values(&self, var: Var) -> Values<'_> {
        let words = self.words(var);
        Values { words, index: 0, current: words.first().copied().unwrap_or(0) }
    }

    pub fn to_lists(&self) -> Vec<Vec<Value>> {
        (0..self.num_vars).map(|var| self.values(var).collect()).collect()
    }

    /// Domain-wise inclusion.
    pub fn is_subset_of(&self, other: &DomainSet) -> bool {
        self.num_vars == other.num_vars
            && (0..self.num_vars).all(|var| self.values(var).all(|v| other.contains(var, v)))
    }

    /// Product of domain sizes over `vars`, saturating.
    pub fn search_space(&self, vars: impl IntoIterator<Item = Var>) -> u128 {
        vars.into_iter().fold(1u128, |acc, var| acc.saturating_mul(self.size(var) as u128))
    }

    /// `(var, value)` pairs present here but absent from `later`.
    pub fn removed_in(&self, later: &DomainSet) -> Vec<(Var, Value)> {
        let mut out = Vec::new();
        for var in 0..self.num_vars {
            for v in self.values(var) {
                if !later.contains(var, v) {
                    out.push((var, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for DomainSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_lists()).finish()
    }
}

pub struct Values<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Values<'_> {
    type Item = Value;

    fn next(&mut self) -> Option<Value> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// A partial map from variables to values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<Value>>,
}

impl Assignment {
    pub fn empty(num_vars: usize) -> Self {
        Assignment { values: vec![None; num_vars] }
    }

    pub fn total(values: &[Value]) -> Self {
        Assignment { values: values.iter().map(|&v| Some(v)).collect() }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, var: Var) -> Option<Value> {
        self.values.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: Value) {
        self.values[var] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        self.values[var] = None;
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Var, Value)> + '_ {
        self.values.iter().enumerate().filter_map(|(var, v)| v.map(|v| (var, v)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first_unassigned(&self) -> Option<Var> {
        self.values.iter().position(Option::is_none)
    }

    /// The value vector, if every variable is assigned.
    pub fn to_total(&self) -> Option<Vec<Value>> {
        self.values.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_ops_across_word_boundary() {
        let mut d = DomainSet::from_lists(130, &[vec![1, 63, 64, 65, 128, 130]]).unwrap();
        assert_eq!(d.size(0), 6);
        assert_eq!(d.min(0), Some(1));
        assert_eq!(d.max(0), Some(130));
        assert_eq!(d.values(0).collect::<Vec<_>>(), vec![1, 63, 64, 65, 128, 130]);
        assert!(d.remove(0, 64));
        assert!(!d.remove(0, 64));
        assert!(!d.contains(0, 64));
        assert!(!d.contains(0, 0));
        assert!(!d.contains(0, 131));
        let removed = d.assign(0, 65);
        assert_eq!(removed, vec![1, 63, 128, 130]);
        assert_eq!(d.fixed_value(0), Some(65));
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(DomainSet::from_lists(3, &[vec![0]]).is_err());
        assert!(DomainSet::from_lists(3, &[vec![4]]).is_err());
    }

    #[test]
    fn empty_domain_detection() {
        let mut d = DomainSet::full(2, 2);
        assert_eq!(d.first_empty(), None);
        d.remove(1, 1);
        d.remove(1, 2);
        assert_eq!(d.first_empty(), Some(1));
        assert_eq!(d.max(1), None);
    }

    #[test]
    fn partial_assignment_accessors() {
        let mut a = Assignment::empty(3);
        a.set(1, 4);
        assert_eq!(a.len(), 1);
        assert_eq!(a.first_unassigned(), Some(0));
        assert_eq!(a.to_total(), None);
        a.set(0, 1);
        a.set(2, 2);
        assert_eq!(a.to_total(), Some(vec![1, 4, 2]));
    }
}
