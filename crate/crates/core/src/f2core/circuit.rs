//! Invertible F2 matrices as SWAP/CNOT circuits.

use serde::{Deserialize, Serialize};

use super::matrix::BitMatrix;
use crate::error::{Error, Result};

/// An elementary invertible matrix.
///
/// `Cnot { control: a, target: b }` is `I + e_a e_bᵀ`: multiplying on the
/// left adds row `b` into row `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Swap(usize, usize),
    Cnot { control: usize, target: usize },
}

impl Step {
    pub fn matrix(&self, n: usize) -> BitMatrix {
        let mut m = BitMatrix::identity(n);
        self.apply_left(&mut m);
        m
    }

    /// `m ← step · m`.
    pub fn apply_left(&self, m: &mut BitMatrix) {
        match *self {
            Step::Swap(a, b) => {
                let (ra, rb) = (m.row(a), m.row(b));
                m.row_words_mut(a).copy_from_slice(rb.words());
                m.row_words_mut(b).copy_from_slice(ra.words());
            }
            Step::Cnot { control, target } => {
                let src = m.row(target);
                for (x, y) in m.row_words_mut(control).iter_mut().zip(src.words()) {
                    *x ^= y;
                }
            }
        }
    }

    pub fn transpose(&self) -> Step {
        match *self {
            Step::Swap(a, b) => Step::Swap(a, b),
            Step::Cnot { control, target } => Step::Cnot {
                control: target,
                target: control,
            },
        }
    }

    fn map(&self, f: impl Fn(usize) -> usize) -> Step {
        match *self {
            Step::Swap(a, b) => Step::Swap(f(a), f(b)),
            Step::Cnot { control, target } => Step::Cnot {
                control: f(control),
                target: f(target),
            },
        }
    }

    fn commutes_with(&self, other: &Step) -> bool {
        match (self, other) {
            (
                Step::Cnot {
                    control: c1,
                    target: t1,
                },
                Step::Cnot {
                    control: c2,
                    target: t2,
                },
            ) => c1 != t2 && c2 != t1,
            _ => {
                let q = |s: &Step| match *s {
                    Step::Swap(a, b) => [a, b],
                    Step::Cnot { control, target } => [control, target],
                };
                let (a, b) = (q(self), q(other));
                a.iter().all(|x| !b.contains(x))
            }
        }
    }
}

/// An invertible matrix with a step list whose ordered product is the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertibleCircuit {
    pub matrix: BitMatrix,
    pub steps: Vec<Step>,
    /// Layer index of each step in the greedy schedule.
    pub layers: Vec<usize>,
    pub depth: usize,
}

/// Greedy earliest-layer schedule: a step goes one layer after the latest
/// earlier step it does not commute with. CNOTs sharing only a control, or
/// only a target, commute and may share a layer.
fn schedule(steps: &[Step]) -> (Vec<usize>, usize) {
    let mut layers: Vec<usize> = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let layer = (0..i)
            .filter(|&j| !steps[j].commutes_with(s))
            .map(|j| layers[j] + 1)
            .max()
            .unwrap_or(0);
        layers.push(layer);
    }
    let depth = layers.iter().map(|l| l + 1).max().unwrap_or(0);
    (layers, depth)
}

impl InvertibleCircuit {
    pub fn from_steps(n: usize, steps: Vec<Step>) -> Self {
        let matrix = replay(n, &steps);
        let (layers, depth) = schedule(&steps);
        InvertibleCircuit {
            matrix,
            steps,
            layers,
            depth,
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// Circuit for `M^{-T}`: the same steps with CNOT roles exchanged.
    pub fn inverse_transpose(&self) -> InvertibleCircuit {
        let steps = self.steps.iter().map(Step::transpose).collect();
        InvertibleCircuit::from_steps(self.size(), steps)
    }

    /// Circuit for `M ⊗ I_r` (`left = true`) or `I_r ⊗ M`. Copies of one
    /// step act on disjoint rows, so the depth is unchanged.
    pub fn kron_identity(&self, r: usize, left: bool) -> InvertibleCircuit {
        let n = self.size();
        let mut steps = Vec::with_capacity(self.steps.len() * r);
        for s in &self.steps {
            for i in 0..r {
                steps.push(if left {
                    s.map(|a| a * r + i)
                } else {
                    s.map(|a| i * n + a)
                });
            }
        }
        InvertibleCircuit::from_steps(n * r, steps)
    }
}

/// Ordered product of the step matrices.
pub fn replay(n: usize, steps: &[Step]) -> BitMatrix {
    let mut m = BitMatrix::identity(n);
    for s in steps.iter().rev() {
        s.apply_left(&mut m);
    }
    m
}

/// Gauss–Jordan reduction of `m` to the identity; the recorded row
/// operations, read in order, multiply back to `m`. At most `n` swaps and
/// `n(n−1)` CNOTs.
pub fn decompose(m: &BitMatrix) -> Result<InvertibleCircuit> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::Dimension(format!(
            "cannot decompose a {}x{} matrix",
            n,
            m.cols()
        )));
    }
    let mut a = m.clone();
    let mut steps = Vec::new();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| a.get(r, c))
            .ok_or_else(|| Error::Invalid("matrix is singular".into()))?;
        if p != c {
            let s = Step::Swap(c, p);
            s.apply_left(&mut a);
            steps.push(s);
        }
        for r in 0..n {
            if r != c && a.get(r, c) {
                let s = Step::Cnot {
                    control: r,
                    target: c,
                };
                s.apply_left(&mut a);
                steps.push(s);
            }
        }
    }
    Ok(InvertibleCircuit::from_steps(n, steps))
}
