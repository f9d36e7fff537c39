//! Exact linear systems over a field.
//!
//! Systems are stored as sparse rows over a registry of named unknowns and solved by
//! Gauss-Jordan elimination into reduced row echelon form. Pivot columns are chosen
//! left to right (lowest unknown index first) and, within a column, the lowest
//! remaining row wins. With exact scalars the particular solution and the kernel
//! basis are therefore fully reproducible.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row references unknown #{index}, but only {count} unknowns are registered")]
    UnknownIndex { index: usize, count: usize },
    #[error("no unknown named `{0}`")]
    UnknownName(String),
    #[error("assignment has {got} entries, system has {expected} unknowns")]
    DimensionMismatch { expected: usize, got: usize },
}

/// One equation `sum coeffs[j] * x_j = rhs`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Row<S> {
    coeffs: BTreeMap<usize, S>,
    rhs: S,
}

impl<S: Scalar> Row<S> {
    pub fn coeffs(&self) -> &BTreeMap<usize, S> {
        &self.coeffs
    }

    pub fn rhs(&self) -> &S {
        &self.rhs
    }

    fn eval(&self, values: &[S]) -> S {
        self.coeffs.iter().fold(S::zero(), |acc, (&j, c)| {
            acc + c.clone() * values[j].clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinSystem<S> {
    unknowns: Vec<String>,
    rows: Vec<Row<S>>,
}

impl<S: Scalar> LinSystem<S> {
    pub fn new<I, N>(unknowns: I) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<String>,
    {
        Self {
            unknowns: unknowns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[Row<S>] {
        &self.rows
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u == name)
    }

    /// Adds a row; repeated indices are summed and zero coefficients dropped.
    pub fn push_row<I>(&mut self, coeffs: I, rhs: S) -> Result<(), LinalgError>
    where
        I: IntoIterator<Item = (usize, S)>,
    {
        let count = self.unknowns.len();
        let mut map: BTreeMap<usize, S> = BTreeMap::new();
        for (index, c) in coeffs {
            if index >= count {
                return Err(LinalgError::UnknownIndex { index, count });
            }
            let slot = map.entry(index).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        self.rows.push(Row { coeffs: map, rhs });
        Ok(())
    }

    pub fn push_named_row(&mut self, coeffs: &[(&str, S)], rhs: S) -> Result<(), LinalgError> {
        let mut indexed = Vec::with_capacity(coeffs.len());
        for (name, c) in coeffs {
            let index = self
                .index_of(name)
                .ok_or_else(|| LinalgError::UnknownName((*name).to_string()))?;
            indexed.push((index, c.clone()));
        }
        self.push_row(indexed, rhs)
    }

    /// `true` iff `values` satisfies every row exactly.
    pub fn is_satisfied_by(&self, values: &[S]) -> Result<bool, LinalgError> {
        self.check_len(values)?;
        Ok(self.rows.iter().all(|r| r.eval(values) == r.rhs))
    }

    /// `true` iff `values` satisfies the homogeneous system.
    pub fn is_homogeneous_solution(&self, values: &[S]) -> Result<bool, LinalgError> {
        self.check_len(values)?;
        Ok(self.rows.iter().all(|r| r.eval(values).is_zero()))
    }

    fn check_len(&self, values: &[S]) -> Result<(), LinalgError> {
        if values.len() != self.unknowns.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.unknowns.len(),
                got: values.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Inconsistent,
    Solved,
}

/// Affine solution set `particular + span(kernel_basis)`.
///
/// For an inconsistent system `particular` is empty and `kernel_basis` holds the
/// kernel of the homogeneous part (still meaningful for diagnostics).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpace<S> {
    pub status: SolveStatus,
    pub particular: Vec<S>,
    pub kernel_basis: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl<S: Scalar> SolutionSpace<S> {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Unknowns equal to zero in every solution (particular and all kernel
    /// directions vanish there).
    pub fn forced_zero(&self) -> Vec<usize> {
        let n = self.pivots.len() + self.free.len();
        (0..n)
            .filter(|&j| {
                self.particular.get(j).is_none_or(|v| v.is_zero())
                    && self.kernel_basis.iter().all(|k| k[j].is_zero())
            })
            .collect()
    }

    /// `particular + sum weights[i] * kernel_basis[i]`.
    pub fn point(&self, weights: &[S]) -> Vec<S> {
        let mut v = self.particular.clone();
        for (w, k) in weights.iter().zip(&self.kernel_basis) {
            for (vj, kj) in v.iter_mut().zip(k) {
                *vj = vj.clone() + w.clone() * kj.clone();
            }
        }
        v
    }
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn solve<S: Scalar>(system: &LinSystem<S>) -> SolutionSpace<S> {
    let n = system.num_unknowns();
    let mut rows: Vec<Row<S>> = system.rows.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;

    for col in 0..n {
        let Some(found) = (next..rows.len()).find(|&r| rows[r].coeffs.contains_key(&col)) else {
            continue;
        };
        rows.swap(next, found);

        let lead = rows[next].coeffs[&col].clone();
        if !lead.is_one() {
            let inv = S::one() / lead;
            for c in rows[next].coeffs.values_mut() {
                *c = c.clone() * inv.clone();
            }
            rows[next].rhs = rows[next].rhs.clone() * inv;
        }

        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next {
                continue;
            }
            let Some(factor) = row.coeffs.get(&col).cloned() else {
                continue;
            };
            for (&j, pc) in &pivot_row.coeffs {
                let entry = row.coeffs.entry(j).or_insert_with(S::zero);
                *entry = entry.clone() - factor.clone() * pc.clone();
                if entry.is_zero() {
                    row.coeffs.remove(&j);
                }
            }
            row.rhs = row.rhs.clone() - factor * pivot_row.rhs.clone();
        }

        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }

    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let inconsistent = rows[next..].iter().any(|r| !r.rhs.is_zero());

    let kernel_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(); n];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                if let Some(c) = rows[r].coeffs.get(&f) {
                    v[p] = -c.clone();
                }
            }
            v
        })
        .collect();

    if inconsistent {
        return SolutionSpace {
            status: SolveStatus::Inconsistent,
            particular: Vec::new(),
            kernel_basis,
            pivots,
            free,
        };
    }

    let mut particular = vec![S::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = rows[r].rhs.clone();
    }

    SolutionSpace {
        status: SolveStatus::Solved,
        particular,
        kernel_basis,
        pivots,
        free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Coefficient;
    use proptest::prelude::*;

    fn q(n: i64) -> Coefficient {
        Coefficient::from_int(n as i128)
    }

    #[test]
    fn two_by_two() {
        let mut sys = LinSystem::new(["x", "y"]);
        sys.push_named_row(&[("x", q(1)), ("y", q(1))], q(2))
            .unwrap();
        sys.push_named_row(&[("x", q(1)), ("y", q(-1))], q(0))
            .unwrap();
        let sol = solve(&sys);
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_eq!(sol.particular, vec![q(1), q(1)]);
        assert!(sol.kernel_basis.is_empty());
    }

    #[test]
    fn contradictory_rows() {
        let mut sys = LinSystem::new(["x"]);
        sys.push_named_row(&[("x", q(1))], q(1)).unwrap();
        sys.push_named_row(&[("x", q(1))], q(2)).unwrap();
        assert_eq!(solve(&sys).status, SolveStatus::Inconsistent);
    }

    #[test]
    fn undeclared_unknown_rejected() {
        let mut sys: LinSystem<Coefficient> = LinSystem::new(["x"]);
        assert_eq!(
            sys.push_row([(3, q(1))], q(0)),
            Err(LinalgError::UnknownIndex { index: 3, count: 1 })
        );
        assert!(matches!(
            sys.push_named_row(&[("y", q(1))], q(0)),
            Err(LinalgError::UnknownName(_))
        ));
    }

    #[test]
    fn kernel_is_reduced_and_ordered() {
        // x + 2y - z = 0 over (x, y, z): pivot x, free y then z.
        let mut sys = LinSystem::new(["x", "y", "z"]);
        sys.push_named_row(&[("x", q(1)), ("y", q(2)), ("z", q(-1))], q(0))
            .unwrap();
        let sol = solve(&sys);
        assert_eq!(sol.pivots, vec![0]);
        assert_eq!(sol.free, vec![1, 2]);
        assert_eq!(
            sol.kernel_basis,
            vec![vec![q(-2), q(1), q(0)], vec![q(1), q(0), q(1)]]
        );
        assert_eq!(sol.particular, vec![q(0), q(0), q(0)]);
    }

    #[test]
    fn empty_system() {
        let sys: LinSystem<Coefficient> = LinSystem::new(["a", "b"]);
        let sol = solve(&sys);
        assert!(sol.is_solved());
        assert_eq!(sol.nullity(), 2);
        assert!(sol.forced_zero().is_empty());
    }

    #[test]
    fn forced_zero_set() {
        let mut sys = LinSystem::new(["a", "b", "c"]);
        sys.push_named_row(&[("a", q(1))], q(0)).unwrap();
        sys.push_named_row(&[("b", q(1)), ("c", q(1))], q(0))
            .unwrap();
        assert_eq!(solve(&sys).forced_zero(), vec![0]);
    }

    fn arb_system() -> impl Strategy<Value = LinSystem<Coefficient>> {
        let row = (proptest::collection::vec(-3i64..=3, 5), -4i64..=4);
        proptest::collection::vec(row, 0..7).prop_map(|rows| {
            let mut sys = LinSystem::new(["u0", "u1", "u2", "u3", "u4"]);
            for (coeffs, rhs) in rows {
                sys.push_row(
                    coeffs.into_iter().enumerate().map(|(j, c)| (j, q(c))),
                    q(rhs),
                )
                .unwrap();
            }
            sys
        })
    }

    proptest! {
        #[test]
        fn solutions_satisfy_system(sys in arb_system(), w in proptest::collection::vec(-5i64..5, 5)) {
            let sol = solve(&sys);
            prop_assert_eq!(sol.rank() + sol.nullity(), sys.num_unknowns());
            for k in &sol.kernel_basis {
                prop_assert!(sys.is_homogeneous_solution(k).unwrap());
            }
            if sol.is_solved() {
                prop_assert!(sys.is_satisfied_by(&sol.particular).unwrap());
                let weights: Vec<_> = w.into_iter().take(sol.nullity()).map(q).collect();
                prop_assert!(sys.is_satisfied_by(&sol.point(&weights)).unwrap());
            }
            prop_assert_eq!(solve(&sys), sol);
        }
    }
}
