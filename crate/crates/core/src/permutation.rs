//! Permutations of {1..n} with the matrix convention `P e_i = e_{pi(i)}`.
//!
//! Storage is 0-based; one-line notation in text output is 1-based.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Build from a 0-based map `i -> map[i]`; must be a bijection of 0..n.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::NotABijection);
            }
            seen[j] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Adjacent transposition swapping positions k and k+1 (0-based).
    pub fn transposition(n: usize, k: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(k, k + 1);
        Permutation { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// 0-based image of index i.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Composition matching `P_{pq} = P_p P_q`: `(p.compose(q))(i) = p(q(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    /// Permuted copy of `v`: output[i] = v[pi(i)].
    pub fn permute<T: Copy>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(self.n(), v.len());
        self.map.iter().map(|&i| v[i]).collect()
    }

    /// Dense matrix with `P e_i = e_{pi(i)}`, i.e. entry (pi(i), i) = 1.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[self.map[i]][i] = 1.0;
        }
        m
    }

    /// Swap the images at positions k and k+1 (compose on the right with
    /// the adjacent transposition).
    pub(crate) fn swap_adjacent(&mut self, k: usize) {
        self.map.swap(k, k + 1);
    }
}

impl std::fmt::Display for Permutation {
    /// One-line notation, 1-based: "2 1 3".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, &j) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", j + 1)?;
        }
        Ok(())
    }
}
