use crate::domain::DomainSet;
use crate::{Value, Var};

use super::remove_all;

/// GAC for `∨ Xᵢ = value`: fail when no variable can take `value`, force
/// the only one that can.
pub(super) fn filter(value: Value, scope: &[Var], d: &DomainSet) -> Vec<(Var, Value)> {
    if scope.iter().any(|&var| d.is_empty(var)) {
        return remove_all(scope, d);
    }
    let mut holders = scope.iter().filter(|&&var| d.contains(var, value));
    match (holders.next(), holders.next()) {
        (None, _) => remove_all(scope, d),
        (Some(&var), None) => d.values(var).filter(|&v| v != value).map(|v| (var, v)).collect(),
        _ => Vec::new(),
    }
}
