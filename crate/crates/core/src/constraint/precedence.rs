//! GAC for value precedence over one class `c₀ < c₁ < … < c_{k-1}`.
//!
//! A prefix satisfying the constraint has used exactly `{c₀, …, c_{t-1}}` of
//! the class for some `t`, so `t ∈ 0..=k` is the whole state. At a position,
//! a value outside the class or an already used class value keeps `t`, the
//! value `c_t` moves to `t + 1`, anything else is forbidden. A forward sweep
//! computes reachable states, a backward sweep computes states from which
//! the suffix can be completed, and a value is supported iff one of its
//! transitions links the two. Cost is `O(n·(k + d))` for `n` positions and
//! domains of size at most `d`.

use crate::domain::DomainSet;
use crate::{Value, Var};

use super::remove_all;

/// First-occurrence semantics, literally: for all `j < k` in the class,
/// `min{i | Xᵢ = j ∨ i = n+1} < min{i | Xᵢ = k ∨ i = n+2}`.
pub fn precedence_holds(class: &[Value], xs: &[Value]) -> bool {
    let n = xs.len();
    let first = |value: Value, default: usize| xs.iter().position(|&x| x == value).map_or(default, |i| i + 1);
    class.iter().enumerate().all(|(a, &j)| class[a + 1..].iter().all(|&k| first(j, n + 1) < first(k, n + 2)))
}

pub(super) fn filter(class: &[Value], scope: &[Var], d: &DomainSet) -> Vec<(Var, Value)> {
    let n = scope.len();
    let k = class.len();
    if k == 0 {
        return Vec::new();
    }
    if scope.iter().any(|&var| d.is_empty(var)) {
        return remove_all(scope, d);
    }
    let mut class_index = vec![usize::MAX; d.max_value() + 1];
    for (s, &v) in class.iter().enumerate() {
        if v <= d.max_value() {
            class_index[v] = s;
        }
    }
    let width = k + 1;

    // Per position: can it keep the state t? Keeping t needs a value outside
    // the class or a class value with index < t.
    let mut free = vec![false; n];
    let mut min_class = vec![k; n];
    for (i, &var) in scope.iter().enumerate() {
        for v in d.values(var) {
            match class_index[v] {
                usize::MAX => free[i] = true,
                s => min_class[i] = min_class[i].min(s),
            }
        }
    }
    let stays = |i: usize, t: usize| free[i] || min_class[i] < t;
    let advances = |i: usize, t: usize| t < k && d.contains(scope[i], class[t]);

    // reach[i*width + t]: state t reachable before position i.
    let mut reach = vec![false; (n + 1) * width];
    reach[0] = true;
    for i in 0..n {
        for t in 0..=k {
            if !reach[i * width + t] {
                continue;
            }
            if stays(i, t) {
                reach[(i + 1) * width + t] = true;
            }
            if advances(i, t) {
                reach[(i + 1) * width + t + 1] = true;
            }
        }
    }
    // complete[i*width + t]: from state t before position i, the suffix can
    // be assigned.
    let mut complete = vec![false; (n + 1) * width];
    for t in 0..=k {
        complete[n * width + t] = true;
    }
    for i in (0..n).rev() {
        for t in 0..=k {
            complete[i * width + t] =
                (stays(i, t) && complete[(i + 1) * width + t]) || (advances(i, t) && complete[(i + 1) * width + t + 1]);
        }
    }
    if !complete[0] {
        return remove_all(scope, d);
    }

    let mut removals = Vec::new();
    for (i, &var) in scope.iter().enumerate() {
        let before = &reach[i * width..(i + 1) * width];
        let after = &complete[(i + 1) * width..(i + 2) * width];
        // Largest state that is reachable and stays completable through a
        // "keep" transition at this position.
        let best_keep = (0..=k).rev().find(|&t| before[t] && after[t]);
        for v in d.values(var) {
            let supported = match class_index[v] {
                usize::MAX => best_keep.is_some(),
                s => best_keep.is_some_and(|t| t > s) || (before[s] && after[s + 1]),
            };
            if !supported {
                removals.push((var, v));
            }
        }
    }
    removals
}
