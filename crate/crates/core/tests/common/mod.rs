#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use labeleval_core::model::Point;
use num_rational::Ratio;

/// Precision, recall and F1 in exact arithmetic.
pub fn rational_scores(tp: i64, detected: i64, truth: i64) -> (Ratio<i64>, Ratio<i64>, Ratio<i64>) {
    let zero = Ratio::from_integer(0);
    let p = if detected == 0 { zero } else { Ratio::new(tp, detected) };
    let r = Ratio::new(tp, truth);
    let f = if p + r == zero { zero } else { Ratio::from_integer(2) * p * r / (p + r) };
    (p, r, f)
}

pub fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// |D ∩ G| as multisets.
pub fn multiset_tp(detected: &[String], truth: &[String]) -> usize {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for d in detected {
        counts.entry(d).or_default().0 += 1;
    }
    for g in truth {
        counts.entry(g).or_default().1 += 1;
    }
    counts.values().map(|(a, b)| a.min(b)).sum()
}

/// Full-table edit distance over code points.
pub fn levenshtein_table(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = i;
    }
    t[0] = (0..=b.len()).collect();
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = t[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t[a.len()][b.len()]
}

/// Maximum one-to-one matching size over pairs within `max_dist` (augmenting paths).
pub fn max_matching(detected: &[String], truth: &[String], max_dist: usize) -> usize {
    let adj: Vec<Vec<usize>> = detected
        .iter()
        .map(|d| (0..truth.len()).filter(|&g| levenshtein_table(d, &truth[g]) <= max_dist).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; truth.len()];
    fn augment(d: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &g in &adj[d] {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            if owner[g].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[g] = Some(d);
                return true;
            }
        }
        false
    }
    (0..detected.len()).filter(|&d| augment(d, &adj, &mut vec![false; truth.len()], &mut owner)).count()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Reference DBSCAN: cores joined by union-find over all pairs; clusters ranked
/// by their lowest core index; a border point joins the best-ranked cluster
/// among its core neighbours. Returns one label per point, `None` for noise.
pub fn naive_dbscan(points: &[Point], eps: f64, min_samples: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let close = |i: usize, j: usize| {
        let (dx, dy) = (points[i].x - points[j].x, points[i].y - points[j].y);
        dx * dx + dy * dy <= eps * eps
    };
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| close(i, j)).count() >= min_samples).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if core[i] && core[j] && close(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // lowest index in each set is its root, so roots already rank clusters
    let mut label = vec![None; n];
    for i in 0..n {
        if core[i] {
            label[i] = Some(find(&mut parent, i));
        }
    }
    for i in 0..n {
        if !core[i] {
            label[i] = (0..n).filter(|&j| core[j] && close(i, j)).map(|j| find(&mut parent, j)).min();
        }
    }
    label
}

/// Partition as a set of sets; each noise point is its own class.
pub fn partition(labels: &[Option<usize>]) -> BTreeSet<BTreeSet<usize>> {
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut out = BTreeSet::new();
    for (i, l) in labels.iter().enumerate() {
        match l {
            Some(c) => {
                groups.entry(*c).or_default().insert(i);
            }
            None => {
                out.insert(BTreeSet::from([i]));
            }
        }
    }
    out.extend(groups.into_values());
    out
}

pub fn dbscan_as_labels(points: &[Point], eps: f64, min_samples: usize) -> Vec<Option<usize>> {
    use labeleval_core::clustering::{dbscan_labels, ClusterLabel};
    dbscan_labels(points, eps, min_samples)
        .into_iter()
        .map(|l| match l {
            ClusterLabel::Id(c) => Some(c),
            ClusterLabel::Noise => None,
        })
        .collect()
}

pub fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}
