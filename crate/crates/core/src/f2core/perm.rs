use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::BitMatrix;
use crate::error::{Error, Result};

/// A bijection on `0..n`, stored as its image array.
///
/// The matrix convention is `as_matrix(π)[π(i)][i] = 1`, so composition
/// matches matrix multiplication and `H·as_matrix(π)` has column `j` equal
/// to column `π(j)` of `H`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Invalid(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 0-indexed disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::Invalid(format!(
                        "bad or repeated point {a} in cycles"
                    )));
                }
                touched[a] = true;
                images[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parses 1-indexed cycle notation such as `(15)(34)` or `(1,10)(2,3)`.
    ///
    /// Without commas or spaces inside a cycle, every digit is one point.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = open[..close].trim();
            rest = open[close + 1..].trim_start();
            if body.is_empty() {
                continue;
            }
            let points: Vec<usize> = if body.contains([',', ' ']) {
                body.split([',', ' '])
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad point {c:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if points.contains(&0) {
                return Err(Error::Parse("cycle notation is 1-indexed".into()));
            }
            cycles.push(points.into_iter().map(|p| p - 1).collect::<Vec<_>>());
        }
        Self::from_cycles(n, &cycles)
    }

    /// Disjoint non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// 1-indexed cycle notation; comma-separated once any point exceeds 9.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        let sep = if self.len() > 9 { "," } else { "" };
        cycles
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                format!("({})", pts.join(sep))
            })
            .collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn as_matrix(&self) -> BitMatrix {
        let n = self.len();
        let mut m = BitMatrix::zeros(n, n);
        for (i, &x) in self.images.iter().enumerate() {
            m.set(x, i, true);
        }
        m
    }

    /// Acts on `(i, j) ↦ i·other.len() + j` as `(self(i), other(j))`.
    pub fn kron(&self, other: &Permutation) -> Permutation {
        let nb = other.len();
        let mut images = Vec::with_capacity(self.len() * nb);
        for i in 0..self.len() {
            for j in 0..nb {
                images.push(self.images[i] * nb + other.images[j]);
            }
        }
        Permutation { images }
    }

    /// Concatenation acting blockwise.
    pub fn direct_sum(parts: &[&Permutation]) -> Permutation {
        let mut images = Vec::new();
        let mut off = 0;
        for p in parts {
            images.extend(p.images.iter().map(|&x| x + off));
            off += p.len();
        }
        Permutation { images }
    }

    /// Column permutation: result column `j` is column `self(j)` of `m`.
    pub fn permute_columns(&self, m: &BitMatrix) -> BitMatrix {
        assert_eq!(
            m.cols(),
            self.len(),
            "permutation does not match column count"
        );
        BitMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, self.images[j]))
    }

    /// Order of the permutation in its cyclic group.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.len(), self.to_cycle_string())
    }
}
