//! Independent reference computations for integration tests. Nothing here
//! calls into the library's probability code.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponential-mechanism row: weights `exp(-alpha·d/2)`, normalized.
pub fn em_row(dist: &[Vec<f64>], alpha: f64, v: usize) -> Vec<f64> {
    let w: Vec<f64> = dist[v].iter().map(|&d| (-alpha * d / 2.0).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn em_table(dist: &[Vec<f64>], alpha: f64) -> Vec<Vec<f64>> {
    (0..dist.len()).map(|v| em_row(dist, alpha, v)).collect()
}

pub fn ordinal(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| (i as f64 - j as f64).abs()).collect()).collect()
}

pub fn uniform(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect()
}

/// Shortest-path closure of random positive edge weights: always a metric.
pub fn random_metric(n: usize, r: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = r.random_range(0.1..10.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Number of axiom failures (non-negativity, identity, symmetry, triangle).
pub fn axiom_failures(d: &[Vec<f64>], tol: f64) -> usize {
    let n = d.len();
    let mut bad = 0;
    for i in 0..n {
        for j in 0..n {
            if d[i][j] < 0.0 {
                bad += 1;
            }
            if (i == j) != (d[i][j] <= tol) {
                bad += 1;
            }
            if (d[i][j] - d[j][i]).abs() > tol {
                bad += 1;
            }
            for k in 0..n {
                if d[i][k] > d[i][j] + d[j][k] + tol {
                    bad += 1;
                }
            }
        }
    }
    bad
}

/// `Pr[output = s]` for the truncate/pad sequence randomizer, walking the
/// algorithm position by position.
pub fn sequence_output_prob(
    x: &[usize],
    s: &[usize],
    em: &[Vec<f64>],
    halt: f64,
    gen: f64,
    max_len: usize,
) -> f64 {
    fn step(i: usize, x: &[usize], s: &[usize], em: &[Vec<f64>], halt: f64, gen: f64, max_len: usize) -> f64 {
        if i == max_len {
            return if s.len() == max_len { 1.0 } else { 0.0 };
        }
        let ended = if s.len() == i { 1.0 } else { 0.0 };
        let next = if s.len() > i {
            step(i + 1, x, s, em, halt, gen, max_len)
        } else {
            0.0
        };
        if i < x.len() {
            let emit = if s.len() > i { em[x[i]][s[i]] } else { 0.0 };
            halt * ended + (1.0 - halt) * emit * next
        } else {
            let emit = if s.len() > i { 1.0 / em.len() as f64 } else { 0.0 };
            (1.0 - gen) * ended + gen * emit * next
        }
    }
    step(0, x, s, em, halt, gen, max_len)
}

/// Output-length distribution by summing over the halting/generation events.
pub fn sequence_length_pmf(input_len: usize, halt: f64, gen: f64, max_len: usize) -> Vec<f64> {
    let mut pmf = vec![0.0; max_len + 1];
    // probability of still running at position i
    let mut alive = 1.0;
    for i in 0..max_len {
        let stop = if i < input_len { halt } else { 1.0 - gen };
        pmf[i] += alive * stop;
        alive *= 1.0 - stop;
    }
    pmf[max_len] += alive;
    pmf
}

/// Every sequence over `0..m` of length `0..=max_len`.
pub fn all_sequences(m: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for v in 0..m {
                let mut t: Vec<usize> = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All sequences of exactly `len` over `0..m`.
pub fn sequences_of_len(m: usize, len: usize) -> Vec<Vec<usize>> {
    all_sequences(m, len).into_iter().filter(|s| s.len() == len).collect()
}

/// Kendall-tau by enumerating ordered pairs; tied pairs score zero.
pub fn kendall_pairs(t: &[f64], e: &[f64], items: &[usize]) -> f64 {
    let k = items.len();
    let mut s = 0.0;
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let (i, j) = (items[a], items[b]);
            let sign = |x: f64| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
            s += sign(t[i] - t[j]) * sign(e[i] - e[j]);
        }
    }
    // each unordered pair seen twice
    s / 2.0 / (k * (k - 1) / 2) as f64
}
