use alloc::collections::VecDeque;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterLabel {
    Id(usize),
    Noise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    /// Ascending indices into the input point list.
    pub member_indices: Vec<usize>,
    pub label: ClusterLabel,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.member_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_indices.is_empty()
    }

    pub fn is_noise(&self) -> bool {
        self.label == ClusterLabel::Noise
    }
}

fn neighborhoods(points: &[Point], eps: f64) -> Vec<Vec<usize>> {
    let eps2 = eps * eps;
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .enumerate()
                .filter(|(_, q)| {
                    let (dx, dy) = (p.x - q.x, p.y - q.y);
                    dx * dx + dy * dy <= eps2
                })
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// Per-point labels. Clusters are numbered in discovery order while points
/// are visited by index; a border point keeps the first cluster that reaches it.
pub fn dbscan_labels(points: &[Point], eps: f64, min_samples: usize) -> Vec<ClusterLabel> {
    let nbrs = neighborhoods(points, eps);
    let is_core = |i: usize| nbrs[i].len() >= min_samples;
    let mut labels: Vec<Option<ClusterLabel>> = alloc::vec![None; points.len()];
    let mut next = 0;

    for i in 0..points.len() {
        if labels[i].is_some() {
            continue;
        }
        if !is_core(i) {
            labels[i] = Some(ClusterLabel::Noise);
            continue;
        }
        let id = ClusterLabel::Id(next);
        next += 1;
        labels[i] = Some(id);
        let mut queue: VecDeque<usize> = nbrs[i].iter().copied().collect();
        while let Some(j) = queue.pop_front() {
            match labels[j] {
                Some(ClusterLabel::Noise) => labels[j] = Some(id),
                Some(_) => continue,
                None => {
                    labels[j] = Some(id);
                    if is_core(j) {
                        queue.extend(nbrs[j].iter().copied());
                    }
                }
            }
        }
    }
    labels.into_iter().map(|l| l.unwrap_or(ClusterLabel::Noise)).collect()
}

/// DBSCAN with Euclidean distance. A point is core when at least
/// `min_samples` points, itself included, lie within `eps`. Clusters come in
/// discovery order, followed by one noise group when any point is noise.
pub fn dbscan(points: &[Point], eps: f64, min_samples: usize) -> Vec<Cluster> {
    let labels = dbscan_labels(points, eps, min_samples);
    let n_clusters = labels
        .iter()
        .filter_map(|l| match l {
            ClusterLabel::Id(k) => Some(k + 1),
            ClusterLabel::Noise => None,
        })
        .max()
        .unwrap_or(0);
    let mut clusters: Vec<Cluster> =
        (0..n_clusters).map(|k| Cluster { member_indices: Vec::new(), label: ClusterLabel::Id(k) }).collect();
    let mut noise = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match l {
            ClusterLabel::Id(k) => clusters[*k].member_indices.push(i),
            ClusterLabel::Noise => noise.push(i),
        }
    }
    if !noise.is_empty() {
        clusters.push(Cluster { member_indices: noise, label: ClusterLabel::Noise });
    }
    clusters
}
