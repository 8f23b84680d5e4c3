//! Arc consistency for the binary channelling and ordering constraints.

use crate::domain::DomainSet;
use crate::{Value, Var};

use super::{remove_all, Parity};

fn either_empty(a: Var, b: Var, d: &DomainSet) -> bool {
    d.is_empty(a) || d.is_empty(b)
}

/// `x = value → z ≤ bound`
pub(super) fn imp_eq_leq(x: Var, value: Value, z: Var, bound: Value, d: &DomainSet) -> Vec<(Var, Value)> {
    if either_empty(x, z, d) {
        return remove_all(&[x, z], d);
    }
    let mut out = Vec::new();
    if d.contains(x, value) && d.min(z).is_some_and(|zmin| zmin > bound) {
        out.push((x, value));
    }
    if d.fixed_value(x) == Some(value) {
        out.extend(d.values(z).filter(|&w| w > bound).map(|w| (z, w)));
    }
    out
}

/// `z = index → x = value`
pub(super) fn imp_eq_eq(z: Var, index: Value, x: Var, value: Value, d: &DomainSet) -> Vec<(Var, Value)> {
    if either_empty(x, z, d) {
        return remove_all(&[x, z], d);
    }
    let mut out = Vec::new();
    if d.contains(z, index) && !d.contains(x, value) {
        out.push((z, index));
    }
    if d.fixed_value(z) == Some(index) {
        out.extend(d.values(x).filter(|&w| w != value).map(|w| (x, w)));
    }
    out
}

/// `lhs < rhs`
pub(super) fn strict_less(lhs: Var, rhs: Var, d: &DomainSet) -> Vec<(Var, Value)> {
    if either_empty(lhs, rhs, d) {
        return remove_all(&[lhs, rhs], d);
    }
    let rmax = d.max(rhs).unwrap();
    let lmin = d.min(lhs).unwrap();
    let mut out: Vec<(Var, Value)> = d.values(lhs).filter(|&v| v >= rmax).map(|v| (lhs, v)).collect();
    out.extend(d.values(rhs).filter(|&w| w <= lmin).map(|w| (rhs, w)));
    out
}

/// `parity(cond) = cond_parity → parity(target) = target_parity`
pub(super) fn parity_link(
    cond: Var,
    cond_parity: Parity,
    target: Var,
    target_parity: Parity,
    d: &DomainSet,
) -> Vec<(Var, Value)> {
    if either_empty(cond, target, d) {
        return remove_all(&[cond, target], d);
    }
    let mut out = Vec::new();
    if !d.values(target).any(|t| target_parity.matches(t)) {
        out.extend(d.values(cond).filter(|&c| cond_parity.matches(c)).map(|c| (cond, c)));
    }
    if d.values(cond).all(|c| cond_parity.matches(c)) {
        out.extend(d.values(target).filter(|&t| !target_parity.matches(t)).map(|t| (target, t)));
    }
    out
}
