use std::fmt;

use crate::error::{Error, Result};
use crate::Value;

/// A bijection on the values `1..=m`. Values above `m` are fixed points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // image[v] for v in 0..=m; image[0] == 0.
    image: Vec<Value>,
}

impl Permutation {
    pub fn identity(m: Value) -> Self {
        Permutation { image: (0..=m).collect() }
    }

    /// Swaps `a` and `b`, identity elsewhere.
    pub fn transposition(m: Value, a: Value, b: Value) -> Self {
        let mut p = Permutation::identity(m.max(a).max(b));
        p.image.swap(a, b);
        p
    }

    /// From the image list `[σ(1), …, σ(m)]`.
    pub fn from_images(images: &[Value]) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &v in images {
            if v == 0 || v > m {
                return Err(Error::ValueOutOfRange { value: v, max: m });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPartition(format!("permutation repeats value {v}")));
            }
        }
        let mut image = Vec::with_capacity(m + 1);
        image.push(0);
        image.extend_from_slice(images);
        Ok(Permutation { image })
    }

    pub fn degree(&self) -> Value {
        self.image.len() - 1
    }

    #[inline]
    pub fn apply(&self, v: Value) -> Value {
        self.image.get(v).copied().unwrap_or(v)
    }

    pub fn images(&self) -> &[Value] {
        &self.image[1..]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let m = self.degree().max(other.degree());
        Permutation { image: (0..=m).map(|v| self.apply(other.apply(v))).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w] = v;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w)
    }

    /// Same action on all values, ignoring trailing fixed points.
    pub fn same_action(&self, other: &Permutation) -> bool {
        let m = self.degree().max(other.degree());
        (1..=m).all(|v| self.apply(v) == other.apply(v))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, e.g. (1 2)(4 5)
        let m = self.degree();
        let mut seen = vec![false; m + 1];
        let mut wrote = false;
        for start in 1..=m {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut v = start;
            let mut first = true;
            while !seen[v] {
                seen[v] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
                first = false;
                v = self.apply(v);
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy() -> impl Strategy<Value = Permutation> {
        (1usize..7).prop_flat_map(|m| {
            Just((1..=m).collect::<Vec<_>>()).prop_shuffle().prop_map(|imgs| Permutation::from_images(&imgs).unwrap())
        })
    }

    #[test]
    fn transposition_swaps_only_its_pair() {
        let t = Permutation::transposition(5, 2, 4);
        assert_eq!((1..=6).map(|v| t.apply(v)).collect::<Vec<_>>(), vec![1, 4, 3, 2, 5, 6]);
        assert_eq!(format!("{t:?}"), "(2 4)");
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_images(&[1, 3]).is_err());
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(p in perm_strategy()) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn composition_is_associative(a in perm_strategy(), b in perm_strategy(), c in perm_strategy()) {
            prop_assert!(a.compose(&b).compose(&c).same_action(&a.compose(&b.compose(&c))));
        }
    }
}
