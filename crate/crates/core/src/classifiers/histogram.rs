use super::{Classifier, CountRule, WeightFunction};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Cells deeper than this are never split; it only triggers when more than
/// `k` training points share (numerically) one location.
const MAX_DEPTH: usize = 60;
const MAX_DIM: usize = 16;
pub const ROOT_INFLATION: f64 = 1.0 + 1e-9;

/// How the root cube is placed.
#[derive(Debug, Clone, PartialEq)]
pub enum RootRule {
    /// Min corner at the per-dimension data minimum, side equal to the
    /// largest extent inflated by `1e-9` so every point is strictly inside.
    DataBounds,
    /// Explicit min corner and side; every training point must fall inside.
    Fixed { lo: Vec<f64>, side: f64 },
}

/// Axis-aligned half-open cube `[lo, lo + side)` with the leaf's prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub lo: Vec<f64>,
    pub side: f64,
    pub label: Label,
    pub count: usize,
}

impl Cell {
    pub fn hi(&self) -> Vec<f64> {
        self.lo.iter().map(|l| l + self.side).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().map(|l| l + self.side / 2.0).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.lo)
            .all(|(&v, &l)| v >= l && v < l + self.side)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Internal { first_child: usize },
    Leaf { members: Vec<usize>, vote: f64 },
}

#[derive(Debug, Clone)]
struct TreeNode {
    lo: Vec<f64>,
    side: f64,
    node: Node,
}

/// Recursive-partition histogram: a cube holding more than `k` training
/// points is split into `2^d` equal children until no leaf exceeds `k`.
/// Points outside the root cube are labeled `-1`.
#[derive(Debug, Clone)]
pub struct HistogramModel {
    data: Dataset,
    k: usize,
    nodes: Vec<TreeNode>,
}

impl HistogramModel {
    pub fn train(ds: &Dataset, k: CountRule, root: RootRule) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dim = ds.dim();
        if dim > MAX_DIM {
            return Err(Error::Unsupported(format!(
                "histogram splits into 2^d cells; d = {dim} exceeds {MAX_DIM}"
            )));
        }
        let k = k.resolve(ds.len());
        let (lo, side) = match root {
            RootRule::DataBounds => data_cube(ds),
            RootRule::Fixed { lo, side } => {
                if lo.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: lo.len(),
                    });
                }
                if !(side > 0.0 && side.is_finite()) {
                    return Err(Error::param("root_side", "must be a finite positive number"));
                }
                (lo, side)
            }
        };
        let inside = |p: &[f64]| p.iter().zip(&lo).all(|(&v, &l)| v >= l && v < l + side);
        if let Some(i) = (0..ds.len()).find(|&i| !inside(ds.point(i))) {
            return Err(Error::param(
                "root",
                format!("training point {i} lies outside the root cube"),
            ));
        }

        let mut nodes = vec![TreeNode {
            lo,
            side,
            node: Node::Leaf {
                members: (0..ds.len()).collect(),
                vote: 0.0,
            },
        }];
        // (node index, depth)
        let mut stack = vec![(0usize, 0usize)];
        let fanout = 1usize << dim;
        while let Some((idx, depth)) = stack.pop() {
            let members = match &mut nodes[idx].node {
                Node::Leaf { members, .. } if members.len() > k && depth < MAX_DEPTH => {
                    std::mem::take(members)
                }
                Node::Leaf { members, vote } => {
                    *vote = members.iter().map(|&i| ds.label(i).sign()).sum();
                    continue;
                }
                Node::Internal { .. } => unreachable!("internal nodes are never revisited"),
            };
            let half = nodes[idx].side / 2.0;
            let parent_lo = nodes[idx].lo.clone();
            let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); fanout];
            for i in members {
                buckets[child_slot(&parent_lo, half, ds.point(i))].push(i);
            }
            let first_child = nodes.len();
            for (slot, bucket) in buckets.into_iter().enumerate() {
                let lo = (0..dim)
                    .map(|j| {
                        if slot >> j & 1 == 1 {
                            parent_lo[j] + half
                        } else {
                            parent_lo[j]
                        }
                    })
                    .collect();
                nodes.push(TreeNode {
                    lo,
                    side: half,
                    node: Node::Leaf {
                        members: bucket,
                        vote: 0.0,
                    },
                });
                stack.push((first_child + slot, depth + 1));
            }
            nodes[idx].node = Node::Internal { first_child };
        }
        Ok(HistogramModel {
            data: ds.clone(),
            k,
            nodes,
        })
    }

    pub fn threshold(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> (&[f64], f64) {
        (&self.nodes[0].lo, self.nodes[0].side)
    }

    pub fn in_root(&self, x: &[f64]) -> bool {
        let (lo, side) = self.root();
        x.iter().zip(lo).all(|(&v, &l)| v >= l && v < l + side)
    }

    /// Index of the leaf containing `x`, or `None` outside the root.
    fn leaf_of(&self, x: &[f64]) -> Option<usize> {
        if !self.in_root(x) {
            return None;
        }
        let mut idx = 0;
        loop {
            let n = &self.nodes[idx];
            match n.node {
                Node::Leaf { .. } => return Some(idx),
                Node::Internal { first_child } => {
                    idx = first_child + child_slot(&n.lo, n.side / 2.0, x);
                }
            }
        }
    }

    /// All leaves in depth-first order, each with its predicted label.
    pub fn leaf_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        let fanout = 1usize << self.data.dim();
        while let Some(idx) = stack.pop() {
            let n = &self.nodes[idx];
            match &n.node {
                Node::Leaf { members, vote } => out.push(Cell {
                    lo: n.lo.clone(),
                    side: n.side,
                    label: Label::from_vote(*vote),
                    count: members.len(),
                }),
                Node::Internal { first_child } => {
                    stack.extend((0..fanout).rev().map(|s| first_child + s));
                }
            }
        }
        out
    }
}

fn child_slot(lo: &[f64], half: f64, x: &[f64]) -> usize {
    let mut slot = 0;
    for j in 0..lo.len() {
        if x[j] >= lo[j] + half {
            slot |= 1 << j;
        }
    }
    slot
}

fn data_cube(ds: &Dataset) -> (Vec<f64>, f64) {
    let dim = ds.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for (p, _) in ds.iter() {
        for j in 0..dim {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let extent = (0..dim).map(|j| hi[j] - lo[j]).fold(0.0, f64::max);
    let mut side = if extent > 0.0 { extent * ROOT_INFLATION } else { 1.0 };
    // guard against rounding when |lo| dwarfs the extent
    while (0..dim).any(|j| hi[j] >= lo[j] + side) {
        side *= 1.0 + 1e-6;
    }
    (lo, side)
}

impl Classifier for HistogramModel {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        self.data.check_dim(x)?;
        Ok(match self.leaf_of(x) {
            None => Label::Neg,
            Some(idx) => match &self.nodes[idx].node {
                Node::Leaf { vote, .. } => Label::from_vote(*vote),
                Node::Internal { .. } => unreachable!(),
            },
        })
    }
}

impl WeightFunction for HistogramModel {
    fn training(&self) -> &Dataset {
        &self.data
    }

    /// Uniform over the training points sharing `x`'s leaf; all zeros when
    /// `x` is outside the root or its leaf is empty.
    fn weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.data.check_dim(x)?;
        let mut w = vec![0.0; self.data.len()];
        if let Some(idx) = self.leaf_of(x) {
            if let Node::Leaf { members, .. } = &self.nodes[idx].node {
                let share = 1.0 / members.len() as f64;
                for &i in members {
                    w[i] = share;
                }
            }
        }
        Ok(w)
    }
}
