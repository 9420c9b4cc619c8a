use serde::{Deserialize, Serialize};

use super::EvalError;

pub const MIN_TREE_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub depth: usize,
    #[serde(skip)]
    pub indices: Vec<usize>,
    pub samples: usize,
    pub sample_fraction: f64,
    /// Mean target of the node's samples.
    pub value: f64,
    pub mse: f64,
    pub feature: Option<usize>,
    /// Samples with `x[feature] <= cutoff` go left.
    pub cutoff: Option<f64>,
    /// Drop in summed squared error achieved by the split.
    pub gain: f64,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    /// Breadth-first, root at index 0.
    pub nodes: Vec<TreeNode>,
    /// Per-feature share of the total gain; all zero for a single leaf.
    pub importances: Vec<f64>,
}

impl RegressionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut n = &self.nodes[0];
        while let (Some(f), Some(c), Some(l), Some(r)) = (n.feature, n.cutoff, n.left, n.right) {
            n = &self.nodes[if x[f] <= c { l } else { r }];
        }
        n.value
    }
}

fn sse(target: &[f64], idx: &[usize]) -> (f64, f64) {
    let n = idx.len() as f64;
    let mean = idx.iter().map(|&i| target[i]).sum::<f64>() / n;
    let sse = idx.iter().map(|&i| (target[i] - mean).powi(2)).sum::<f64>();
    (mean, sse)
}

/// Best `(feature, cutoff, gain)` over all features and midpoints between distinct values.
fn best_split(features: &[Vec<f64>], target: &[f64], idx: &[usize], parent_sse: f64) -> Option<(usize, f64, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    let n_features = features[idx[0]].len();
    let mut order = idx.to_vec();
    for f in 0..n_features {
        order.sort_by(|&a, &b| features[a][f].total_cmp(&features[b][f]));
        let total: f64 = order.iter().map(|&i| target[i]).sum();
        let total_sq: f64 = order.iter().map(|&i| target[i] * target[i]).sum();
        let (mut sum, mut sq) = (0.0, 0.0);
        for k in 0..order.len() - 1 {
            let y = target[order[k]];
            sum += y;
            sq += y * y;
            let (a, b) = (features[order[k]][f], features[order[k + 1]][f]);
            if a == b {
                continue;
            }
            let nl = (k + 1) as f64;
            let nr = (order.len() - k - 1) as f64;
            let left = sq - sum * sum / nl;
            let right = (total_sq - sq) - (total - sum).powi(2) / nr;
            let gain = parent_sse - left.max(0.0) - right.max(0.0);
            if best.is_none_or(|(_, _, g)| gain > g) {
                best = Some((f, (a + b) / 2.0, gain));
            }
        }
    }
    best
}

/// CART regression tree grown to `max_depth` by squared-error reduction.
pub fn tree_importance(features: &[Vec<f64>], target: &[f64], max_depth: usize) -> Result<RegressionTree, EvalError> {
    if features.len() != target.len() {
        return Err(EvalError::LengthMismatch(features.len(), target.len()));
    }
    if target.len() < MIN_TREE_SAMPLES {
        return Err(EvalError::TooFewSamples { needed: MIN_TREE_SAMPLES, got: target.len() });
    }
    let width = features[0].len();
    if let Some(bad) = features.iter().find(|r| r.len() != width) {
        return Err(EvalError::LengthMismatch(width, bad.len()));
    }
    if let Some(&bad) = target.iter().chain(features.iter().flatten()).find(|v| !v.is_finite()) {
        return Err(EvalError::InvalidValue(bad));
    }

    let total = target.len() as f64;
    let mut nodes = Vec::new();
    let mut importances = vec![0.0; width];
    let mut queue = std::collections::VecDeque::from([(0usize, (0..target.len()).collect::<Vec<_>>())]);
    while let Some((depth, idx)) = queue.pop_front() {
        let (mean, node_sse) = sse(target, &idx);
        let id = nodes.len();
        nodes.push(TreeNode {
            depth,
            samples: idx.len(),
            sample_fraction: idx.len() as f64 / total,
            value: mean,
            mse: node_sse / idx.len() as f64,
            feature: None,
            cutoff: None,
            gain: 0.0,
            left: None,
            right: None,
            indices: idx,
        });
        if depth >= max_depth || nodes[id].samples < 2 || node_sse <= 1e-12 {
            continue;
        }
        let Some((f, cutoff, gain)) = best_split(features, target, &nodes[id].indices, node_sse) else {
            continue;
        };
        if gain <= 1e-12 {
            continue;
        }
        let (l, r): (Vec<usize>, Vec<usize>) = nodes[id].indices.iter().partition(|&&i| features[i][f] <= cutoff);
        let node = &mut nodes[id];
        node.feature = Some(f);
        node.cutoff = Some(cutoff);
        node.gain = gain;
        importances[f] += gain;
        // Children are numbered in the order they will be pushed.
        let next = id + 1 + queue.len();
        node.left = Some(next);
        node.right = Some(next + 1);
        queue.push_back((depth + 1, l));
        queue.push_back((depth + 1, r));
    }
    let sum: f64 = importances.iter().sum();
    if sum > 0.0 {
        importances.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(RegressionTree { nodes, importances })
}
