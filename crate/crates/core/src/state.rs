//! Partial states: finite maps from variable indices to domain value indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Set of state variable indices, kept sorted.
pub type VarSet = BTreeSet<usize>;

/// An assignment of domain values to a subset of the state variables.
///
/// Values are indices into the variable's domain. The empty map is the bottom element
/// that every partial state is consistent with.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialState {
    entries: BTreeMap<usize, usize>,
}

impl PartialState {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Full state from a value per variable, variable `i` taking `values[i]`.
    pub fn full(values: &[usize]) -> Self {
        values.iter().copied().enumerate().collect()
    }

    pub fn get(&self, var: usize) -> Option<usize> {
        self.entries.get(&var).copied()
    }

    pub fn insert(&mut self, var: usize, value: usize) {
        self.entries.insert(var, value);
    }

    pub fn with(mut self, var: usize, value: usize) -> Self {
        self.insert(var, value);
        self
    }

    pub fn domain(&self) -> VarSet {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.entries.contains_key(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// `x|_Y`: keeps the entries whose variable is in `vars`.
    pub fn restrict(&self, vars: &VarSet) -> PartialState {
        self.iter().filter(|(k, _)| vars.contains(k)).collect()
    }

    /// `self ⊑ t`: the restriction of `self` to `dom(t)` equals `t`.
    pub fn consistent_with(&self, t: &PartialState) -> bool {
        t.iter().all(|(k, v)| self.get(k) == Some(v))
    }

    /// `self ++ t`: `t` takes precedence on shared variables.
    pub fn overridden_by(&self, t: &PartialState) -> PartialState {
        let mut out = self.clone();
        for (k, v) in t.iter() {
            out.insert(k, v);
        }
        out
    }

    pub fn is_full(&self, n: usize) -> bool {
        self.entries.len() == n && self.entries.keys().all(|&k| k < n)
    }

    /// Values of a full state over `0..n`, or `None` if a variable is missing.
    pub fn to_dense(&self, n: usize) -> Option<Vec<usize>> {
        (0..n).map(|i| self.get(i)).collect()
    }
}

impl FromIterator<(usize, usize)> for PartialState {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        PartialState { entries: iter.into_iter().collect() }
    }
}

impl fmt::Display for PartialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, (k, v)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("]")
    }
}

/// Free-standing form of [`PartialState::restrict`].
pub fn restrict(x: &PartialState, vars: &VarSet) -> PartialState {
    x.restrict(vars)
}

/// Free-standing form of [`PartialState::consistent_with`].
pub fn consistent(x: &PartialState, t: &PartialState) -> bool {
    x.consistent_with(t)
}

/// Odometer over the assignments to a list of variables in mixed-radix order,
/// first variable most significant.
#[derive(Debug, Clone)]
pub struct Odometer {
    radices: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub fn new(radices: Vec<usize>) -> Self {
        let done = radices.contains(&0);
        let digits = vec![0; radices.len()];
        Odometer { radices, digits, done }
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Advances to the next assignment; returns false after the last one.
    pub fn advance(&mut self) -> bool {
        for pos in (0..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.radices[pos] {
                return true;
            }
            self.digits[pos] = 0;
        }
        self.done = true;
        false
    }
}

/// All partial states with domain exactly `vars`, in mixed-radix order with the lowest
/// variable index most significant. `domain_sizes[i]` is `|X_i|`.
pub fn assignments(domain_sizes: &[usize], vars: &VarSet) -> Vec<PartialState> {
    let vars: Vec<usize> = vars.iter().copied().collect();
    let mut odo = Odometer::new(vars.iter().map(|&v| domain_sizes[v]).collect());
    let mut out = Vec::new();
    while !odo.is_done() {
        out.push(vars.iter().copied().zip(odo.digits().iter().copied()).collect());
        odo.advance();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: usize = 0;
    const B: usize = 1;

    fn vs(v: &[usize]) -> VarSet {
        v.iter().copied().collect()
    }

    fn s() -> PartialState {
        PartialState::empty().with(1, W).with(3, B)
    }

    #[test]
    fn restriction() {
        assert_eq!(s().restrict(&vs(&[1])), PartialState::empty().with(1, W));
        assert_eq!(s().restrict(&vs(&[])), PartialState::empty());
        assert_eq!(s().restrict(&vs(&[2, 3])), PartialState::empty().with(3, B));
    }

    #[test]
    fn consistency_examples() {
        assert!(consistent(&s(), &PartialState::empty().with(1, W)));
        assert!(!consistent(&s(), &PartialState::empty().with(2, B)));
        assert!(consistent(&s(), &PartialState::empty()));
    }

    #[test]
    fn assignment_order() {
        let d = [2, 2, 2];
        assert_eq!(assignments(&d, &vs(&[])), vec![PartialState::empty()]);
        assert_eq!(
            assignments(&d, &vs(&[0])),
            vec![PartialState::empty().with(0, 0), PartialState::empty().with(0, 1)]
        );
        let got: Vec<(usize, usize)> =
            assignments(&d, &vs(&[0, 2])).iter().map(|a| (a.get(0).unwrap(), a.get(2).unwrap())).collect();
        assert_eq!(got, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn override_prefers_right() {
        let x = PartialState::empty().with(0, 0).with(1, 1);
        let t = PartialState::empty().with(1, 0).with(2, 1);
        assert_eq!(x.overridden_by(&t), PartialState::empty().with(0, 0).with(1, 0).with(2, 1));
    }
}
