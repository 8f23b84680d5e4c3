//! GAC for `X ≤lex σ(X)` where σ acts on values.
//!
//! Position `i` compares `Xᵢ` with `σ(Xᵢ)`, so each position is decided by
//! one variable alone. A value of `Xᵢ` is either a fixed point of σ (`eq`),
//! smaller than its image (`lt`) or larger (`gt`). An assignment satisfies
//! the constraint iff its first non-`eq` position is `lt`, or there is none.

use crate::domain::DomainSet;
use crate::perm::Permutation;
use crate::{Value, Var};

use super::remove_all;

pub(super) fn filter(perm: &Permutation, scope: &[Var], d: &DomainSet) -> Vec<(Var, Value)> {
    let n = scope.len();
    if scope.iter().any(|&var| d.is_empty(var)) {
        return remove_all(scope, d);
    }
    let mut has_eq = vec![false; n];
    let mut has_lt = vec![false; n];
    for (i, &var) in scope.iter().enumerate() {
        for v in d.values(var) {
            let image = perm.apply(v);
            has_eq[i] |= image == v;
            has_lt[i] |= v < image;
        }
    }
    // suffix_ok[i]: positions i.. can be completed consistently.
    let mut suffix_ok = vec![true; n + 1];
    for i in (0..n).rev() {
        suffix_ok[i] = has_lt[i] || (has_eq[i] && suffix_ok[i + 1]);
    }
    if !suffix_ok[0] {
        return remove_all(scope, d);
    }

    // Position i is reached with every earlier position at a fixed point.
    // Once some position can take an `lt` value the rest is free; the first
    // position without a fixed point has an `lt` value since suffix_ok[0].
    let mut removals = Vec::new();
    for (i, &var) in scope.iter().enumerate() {
        for v in d.values(var) {
            let image = perm.apply(v);
            let supported = v < image || (v == image && suffix_ok[i + 1]);
            if !supported {
                removals.push((var, v));
            }
        }
        if has_lt[i] {
            break;
        }
    }
    removals
}
