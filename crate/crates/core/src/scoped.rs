//! Scoped functions stored as dense tables over the assignments to their scope.

use crate::state::{Odometer, PartialState, VarSet};

/// A function whose value depends only on the variables in `scope`.
///
/// The table holds one value per assignment to the scope in mixed-radix order, the lowest
/// variable index being the most significant digit. An empty scope has a single entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScopedFn<V> {
    scope: Vec<usize>,
    radices: Vec<usize>,
    table: Vec<V>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("scope {0:?} is not strictly increasing")]
    UnsortedScope(Vec<usize>),
    #[error("scope has {scope} variables but {radices} domain sizes")]
    RadixCount { scope: usize, radices: usize },
    #[error("table has {actual} entries, expected {expected}")]
    TableLength { expected: usize, actual: usize },
}

impl<V> ScopedFn<V> {
    pub fn new(scope: Vec<usize>, radices: Vec<usize>, table: Vec<V>) -> Result<Self, ShapeError> {
        if scope.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ShapeError::UnsortedScope(scope));
        }
        if scope.len() != radices.len() {
            return Err(ShapeError::RadixCount { scope: scope.len(), radices: radices.len() });
        }
        let expected = radices.iter().product::<usize>();
        if table.len() != expected {
            return Err(ShapeError::TableLength { expected, actual: table.len() });
        }
        Ok(ScopedFn { scope, radices, table })
    }

    pub fn constant(value: V) -> Self {
        ScopedFn { scope: Vec::new(), radices: Vec::new(), table: vec![value] }
    }

    /// Tabulates `f` over every assignment to `scope`, in table order.
    pub fn from_fn(domain_sizes: &[usize], scope: &VarSet, mut f: impl FnMut(&PartialState) -> V) -> Self {
        let scope: Vec<usize> = scope.iter().copied().collect();
        Self::from_digits(domain_sizes, scope.clone(), |digits| {
            let x: PartialState = scope.iter().copied().zip(digits.iter().copied()).collect();
            f(&x)
        })
    }

    /// Tabulates `f` over the digit vectors of `scope` (sorted, unique).
    pub fn from_digits(domain_sizes: &[usize], scope: Vec<usize>, mut f: impl FnMut(&[usize]) -> V) -> Self {
        let radices: Vec<usize> = scope.iter().map(|&v| domain_sizes[v]).collect();
        let mut table = Vec::with_capacity(radices.iter().product());
        let mut odo = Odometer::new(radices.clone());
        while !odo.is_done() {
            table.push(f(odo.digits()));
            odo.advance();
        }
        ScopedFn { scope, radices, table }
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn scope_set(&self) -> VarSet {
        self.scope.iter().copied().collect()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn table(&self) -> &[V] {
        &self.table
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.scope.binary_search(&var).is_ok()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.scope.len()];
        for k in (0..self.scope.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.radices[k + 1];
        }
        strides
    }

    /// Stride of each variable of `vars` in this table (0 for variables outside the
    /// scope). `vars` must cover the scope.
    pub fn strides_in(&self, vars: &[usize]) -> Vec<usize> {
        let own = self.strides();
        vars.iter()
            .map(|v| match self.scope.binary_search(v) {
                Ok(k) => own[k],
                Err(_) => 0,
            })
            .collect()
    }

    /// Table index for the assignment returned by `lookup`; `None` if a scope variable is
    /// unassigned or out of its domain.
    pub fn index_with(&self, lookup: impl Fn(usize) -> Option<usize>) -> Option<usize> {
        let mut idx = 0;
        for (k, &var) in self.scope.iter().enumerate() {
            let v = lookup(var)?;
            if v >= self.radices[k] {
                return None;
            }
            idx = idx * self.radices[k] + v;
        }
        Some(idx)
    }

    /// Value at a partial state covering the scope.
    pub fn eval(&self, x: &PartialState) -> Option<&V> {
        self.index_with(|v| x.get(v)).map(|i| &self.table[i])
    }

    /// Value at a full state given as one value per variable.
    pub fn eval_dense(&self, values: &[usize]) -> &V {
        let idx = self.scope.iter().zip(&self.radices).fold(0, |acc, (&var, &r)| acc * r + values[var]);
        &self.table[idx]
    }

    pub fn map<U>(&self, f: impl FnMut(&V) -> U) -> ScopedFn<U> {
        ScopedFn { scope: self.scope.clone(), radices: self.radices.clone(), table: self.table.iter().map(f).collect() }
    }

    pub fn into_table(self) -> Vec<V> {
        self.table
    }
}

impl<V: Clone> ScopedFn<V> {
    /// Fixes the variables of `t` that lie in the scope; the result has scope
    /// `scope − dom(t)`.
    pub fn instantiate(&self, t: &PartialState) -> ScopedFn<V> {
        if !self.scope.iter().any(|&v| t.contains(v)) {
            return self.clone();
        }
        let mut scope = Vec::new();
        let mut radices = Vec::new();
        for (k, &v) in self.scope.iter().enumerate() {
            if !t.contains(v) {
                scope.push(v);
                radices.push(self.radices[k]);
            }
        }
        let sizes: Vec<(usize, usize)> = scope.iter().copied().zip(radices.iter().copied()).collect();
        let mut table = Vec::with_capacity(radices.iter().product());
        let mut odo = Odometer::new(radices.clone());
        while !odo.is_done() {
            let digits = odo.digits();
            let idx = self
                .index_with(|var| match t.get(var) {
                    Some(v) => Some(v),
                    None => sizes.iter().position(|&(s, _)| s == var).map(|p| digits[p]),
                })
                .expect("instantiation covers the scope");
            table.push(self.table[idx].clone());
            odo.advance();
        }
        ScopedFn { scope, radices, table }
    }

    /// Pointwise combination over the union of both scopes.
    pub fn combine<U, W>(
        &self,
        other: &ScopedFn<U>,
        domain_sizes: &[usize],
        mut f: impl FnMut(&V, &U) -> W,
    ) -> ScopedFn<W> {
        let scope: Vec<usize> = self.scope_set().union(&other.scope_set()).copied().collect();
        let sa = self.strides_in(&scope);
        let sb = other.strides_in(&scope);
        ScopedFn::from_digits(domain_sizes, scope, |d| {
            let ia: usize = d.iter().zip(&sa).map(|(x, s)| x * s).sum();
            let ib: usize = d.iter().zip(&sb).map(|(x, s)| x * s).sum();
            f(&self.table[ia], &other.table[ib])
        })
    }
}

/// Free-standing form of [`ScopedFn::instantiate`].
pub fn instantiate<V: Clone>(f: &ScopedFn<V>, t: &PartialState) -> ScopedFn<V> {
    f.instantiate(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ScopedFn<i64> {
        // scope {1,2}, domains 2 and 3
        ScopedFn::new(vec![1, 2], vec![2, 3], vec![10, 11, 12, 20, 21, 22]).unwrap()
    }

    #[test]
    fn shape_checks() {
        assert!(ScopedFn::new(vec![2, 1], vec![2, 2], vec![0; 4]).is_err());
        assert!(ScopedFn::new(vec![1], vec![2], vec![0; 3]).is_err());
        assert_eq!(ScopedFn::constant(5).table().len(), 1);
    }

    #[test]
    fn eval_mixed_radix() {
        let f = sample();
        let x = PartialState::empty().with(0, 1).with(1, 1).with(2, 2);
        assert_eq!(f.eval(&x), Some(&22));
        assert_eq!(f.eval(&PartialState::empty().with(1, 0)), None);
        assert_eq!(*f.eval_dense(&[0, 0, 1]), 11);
    }

    #[test]
    fn instantiate_examples() {
        let f = sample();
        let t = PartialState::empty().with(1, 1);
        let g = f.instantiate(&t);
        assert_eq!(g.scope(), &[2]);
        assert_eq!(g.eval(&PartialState::empty().with(2, 1)), Some(&21));
        assert_eq!(f.instantiate(&PartialState::empty()), f);

        let h = ScopedFn::new(vec![0], vec![2], vec![4, 7]).unwrap();
        let c = h.instantiate(&PartialState::empty().with(0, 1));
        assert!(c.scope().is_empty());
        assert_eq!(c.table(), &[7]);
    }

    #[test]
    fn combine_over_union() {
        let a = ScopedFn::new(vec![0], vec![2], vec![1, 3]).unwrap();
        let b = ScopedFn::new(vec![1], vec![2], vec![10, 20]).unwrap();
        let s = a.combine(&b, &[2, 2], |x, y| x + y);
        assert_eq!(s.scope(), &[0, 1]);
        assert_eq!(s.table(), &[11, 21, 13, 23]);
    }

    fn arb_fn() -> impl Strategy<Value = (Vec<usize>, ScopedFn<i32>)> {
        (prop::collection::vec(1usize..4, 4), prop::collection::btree_set(0usize..4, 0..4)).prop_flat_map(
            |(doms, scope)| {
                let scope: Vec<usize> = scope.into_iter().collect();
                let radices: Vec<usize> = scope.iter().map(|&v| doms[v]).collect();
                let len = radices.iter().product::<usize>();
                prop::collection::vec(-50i32..50, len).prop_map(move |table| {
                    (doms.clone(), ScopedFn::new(scope.clone(), radices.clone(), table).unwrap())
                })
            },
        )
    }

    fn arb_full(doms: &[usize], seed: &[usize]) -> Vec<usize> {
        doms.iter().zip(seed).map(|(d, s)| s % d).collect()
    }

    proptest! {
        #[test]
        fn scope_soundness((doms, f) in arb_fn(), a in prop::collection::vec(0usize..12, 4), b in prop::collection::vec(0usize..12, 4)) {
            let x = arb_full(&doms, &a);
            let mut y = arb_full(&doms, &b);
            for &v in f.scope() { y[v] = x[v]; }
            prop_assert_eq!(f.eval_dense(&x), f.eval_dense(&y));
        }

        #[test]
        fn instantiate_composes((doms, f) in arb_fn(), seed in prop::collection::vec(0usize..12, 4), split in 0usize..16) {
            let full = arb_full(&doms, &seed);
            let t: PartialState = (0..4).filter(|v| split & (1 << v) != 0).map(|v| (v, full[v])).collect();
            let t2: PartialState = (0..4).filter(|v| split & (1 << v) == 0 && v % 2 == 0).map(|v| (v, full[v])).collect();
            let twice = f.instantiate(&t).instantiate(&t2);
            let once = f.instantiate(&t2.overridden_by(&t));
            prop_assert_eq!(twice, once);
        }
    }
}
