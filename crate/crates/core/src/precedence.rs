//! Dense precedence matrix: cell `(i, j)` is set iff task `i` immediately
//! precedes task `j`. Assigning a task deletes its row, so a task becomes
//! schedulable once its column is empty.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::model::{Instance, TaskId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl PrecedenceMatrix {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (TaskId, TaskId)>) -> Self {
        let mut cells = vec![false; n * n];
        for (i, j) in edges {
            cells[(i - 1) * n + (j - 1)] = true;
        }
        Self { n, cells }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// 1-based cell lookup.
    pub fn get(&self, row: TaskId, col: TaskId) -> bool {
        self.cells[(row - 1) * self.n + (col - 1)]
    }

    pub fn edges(&self) -> BTreeSet<(TaskId, TaskId)> {
        let mut out = BTreeSet::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if self.get(i, j) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    pub fn predecessors(&self, col: TaskId) -> impl Iterator<Item = TaskId> + '_ {
        (1..=self.n).filter(move |&i| self.get(i, col))
    }

    /// Unassigned tasks whose column is all zero once the rows of `removed` are deleted.
    pub fn schedulable(&self, removed: &BTreeSet<TaskId>) -> BTreeSet<TaskId> {
        let mut mask = vec![false; self.n];
        for &id in removed {
            mask[id - 1] = true;
        }
        self.schedulable_mask(&mask).collect()
    }

    /// Same as [`schedulable`](Self::schedulable) over a removed-flag slice indexed by `id - 1`.
    pub fn schedulable_mask<'a>(&'a self, removed: &'a [bool]) -> impl Iterator<Item = TaskId> + 'a {
        (1..=self.n).filter(move |&j| !removed[j - 1] && self.predecessors(j).all(|i| removed[i - 1]))
    }

    /// Kahn's order, always releasing the lowest ready id first.
    pub fn topological_order(&self) -> Vec<TaskId> {
        let mut indegree: Vec<usize> = (1..=self.n).map(|j| self.predecessors(j).count()).collect();
        let mut ready: BinaryHeap<Reverse<TaskId>> = (1..=self.n)
            .filter(|&j| indegree[j - 1] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for j in 1..=self.n {
                if self.get(i, j) {
                    indegree[j - 1] -= 1;
                    if indegree[j - 1] == 0 {
                        ready.push(Reverse(j));
                    }
                }
            }
        }
        order
    }
}

pub fn build_matrix(instance: &Instance) -> PrecedenceMatrix {
    PrecedenceMatrix::from_edges(instance.task_count(), instance.edges.iter().copied())
}

/// Rows and columns labelled by task id; zeros print blank.
impl fmt::Display for PrecedenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.n.to_string().len().max(1) + 1;
        write!(f, "{:>w$}", "")?;
        for j in 1..=self.n {
            write!(f, "{j:>w$}")?;
        }
        writeln!(f)?;
        for i in 1..=self.n {
            write!(f, "{i:>w$}")?;
            for j in 1..=self.n {
                let c = if self.get(i, j) { "1" } else { "" };
                write!(f, "{c:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hoffman_edges() -> Vec<(TaskId, TaskId)> {
        vec![(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (4, 6), (4, 7), (5, 8), (6, 9), (7, 9), (8, 9)]
    }

    #[test]
    fn hoffman_matrix_rows() {
        let m = PrecedenceMatrix::from_edges(9, hoffman_edges());
        let row = |i| (1..=9).filter(|&j| m.get(i, j)).collect::<Vec<_>>();
        assert_eq!(row(1), vec![2, 3]);
        assert_eq!(row(4), vec![5, 6, 7]);
        assert_eq!(row(9), Vec::<usize>::new());
        assert!((1..=9).all(|i| !m.get(i, i)));
        assert_eq!(m.edges(), hoffman_edges().into_iter().collect());
    }

    #[test]
    fn trivial_matrices() {
        let one = PrecedenceMatrix::from_edges(1, []);
        assert!(!one.get(1, 1));
        let chain = PrecedenceMatrix::from_edges(3, [(1, 2), (2, 3)]);
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(chain.get(i, j), j == i + 1);
            }
        }
        assert_eq!(chain.topological_order(), vec![1, 2, 3]);
        assert_eq!(PrecedenceMatrix::from_edges(2, []).topological_order(), vec![1, 2]);
    }

    #[test]
    fn schedulable_examples() {
        let m = PrecedenceMatrix::from_edges(9, hoffman_edges());
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(m.schedulable(&set(&[])), set(&[1]));
        assert_eq!(m.schedulable(&set(&[1])), set(&[2, 3]));
        assert_eq!(m.schedulable(&set(&[1, 2, 3, 4, 5, 6, 7, 8])), set(&[9]));
        assert_eq!(m.schedulable(&set(&[1, 3])), set(&[2]));
    }

    #[test]
    fn hoffman_topological_order() {
        let m = PrecedenceMatrix::from_edges(9, hoffman_edges());
        assert_eq!(m.topological_order(), (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn display_has_blank_zeros() {
        let m = PrecedenceMatrix::from_edges(3, [(1, 2), (1, 3)]);
        assert_eq!(m.to_string(), "   1 2 3\n 1   1 1\n 2      \n 3      \n");
    }
}
