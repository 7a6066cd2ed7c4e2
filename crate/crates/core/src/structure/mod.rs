//! Outcome equivalence, relabeling and extremality.

mod extreme;

pub use extreme::{is_extreme, rank1_extreme_via_independence, ExtremalityReport};

use crate::error::{Error, Result};
use crate::matcore::{trace_inner, ComplexMatrix};
use crate::povm::DiscretePovm;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// A partition of outcome indices with the merged effect of every class.
#[derive(Debug, Clone)]
pub struct OutcomePartition<T: Scalar> {
    /// Disjoint, each sorted ascending, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// `M([x]) = sum_{j in class} M_j`.
    pub class_effects: Vec<ComplexMatrix<T>>,
    /// `tr M([x])`; for a rank-1 class this is the weight `p` in `M([x]) = p |d><d|`.
    pub class_weights: Vec<T>,
}

impl<T: Scalar> OutcomePartition<T> {
    /// Partition given by explicit classes; validated against `m`.
    pub fn from_classes(m: &DiscretePovm<T>, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = m.len();
        let mut seen = vec![false; n];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::BadPartition("empty class".into()));
            }
            for &k in class {
                if k >= n {
                    return Err(Error::BadPartition(format!("outcome index {k} out of range")));
                }
                if seen[k] {
                    return Err(Error::BadPartition(format!("outcome {k} appears twice")));
                }
                seen[k] = true;
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::BadPartition(format!("outcome {k} not covered")));
        }
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        let class_effects: Vec<_> = classes.iter().map(|c| m.effect_of(c)).collect();
        let class_weights = class_effects.iter().map(ComplexMatrix::trace_re).collect();
        Ok(Self { classes, class_effects, class_weights })
    }

    pub fn singletons(m: &DiscretePovm<T>) -> Self {
        Self::from_classes(m, (0..m.len()).map(|k| vec![k]).collect()).expect("singletons partition")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of each outcome.
    pub fn class_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (c, members) in self.classes.iter().enumerate() {
            for &k in members {
                out[k] = c;
            }
        }
        out
    }

    /// Outcome labels of each class.
    pub fn labelled(&self, m: &DiscretePovm<T>) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&k| m.labels()[k].clone()).collect())
            .collect()
    }
}

/// Relative Cauchy-Schwarz defect `1 - tr[AB]^2 / (tr[A^2] tr[B^2])`.
///
/// Zero exactly when two rank-1 PSD matrices are proportional.
pub fn proportionality_defect<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    let ab = trace_inner(a, b);
    let aa = trace_inner(a, a);
    let bb = trace_inner(b, b);
    if aa <= T::zero() || bb <= T::zero() {
        return T::one();
    }
    (T::one() - ab * ab / (aa * bb)).max(T::zero())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so the representative is the first outcome
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups outcomes of a rank-1 POVM whose effects are positive multiples of
/// one another.
pub fn equivalence_classes<T: Scalar>(
    m: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<OutcomePartition<T>> {
    if !m.is_rank_one(tol)? {
        return Err(Error::NotRankOne);
    }
    let n = m.len();
    let cut = T::of(tol.proportional);
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if proportionality_defect(m.effect(i), m.effect(j)) <= cut {
                uf.union(i, j);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class = vec![usize::MAX; n];
    for k in 0..n {
        let r = uf.find(k);
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[root_class[r]].push(k);
    }
    for class in &classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                if proportionality_defect(m.effect(i), m.effect(j)) > cut {
                    return Err(Error::NonTransitiveClass(i, j));
                }
            }
        }
    }
    OutcomePartition::from_classes(m, classes)
}

/// POVM over the classes of `partition`, with merged effects and labels
/// joined by `+`.
pub fn relabel<T: Scalar>(
    m: &DiscretePovm<T>,
    partition: &OutcomePartition<T>,
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    let checked = OutcomePartition::from_classes(m, partition.classes.clone())?;
    let labels = checked.labelled(m).into_iter().map(|ls| ls.join("+")).collect();
    DiscretePovm::with_labels(labels, checked.class_effects, tol)
}
