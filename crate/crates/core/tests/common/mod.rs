//! Brute-force reference implementations shared by the integration tests.
//! Each one is written from the definitions, not from the library code.

#![allow(dead_code)]

use std::collections::HashMap;

/// Every candidate key in one message: unigrams, bigrams, and ordered pairs
/// of 1- or 2-token parts with at least one token between them. Tokens are
/// assumed to be plain words (no punctuation, no mentions, no function-word
/// filtering).
pub fn brute_candidates(tokens: &[String]) -> Vec<String> {
    let n = tokens.len();
    let mut out = Vec::new();
    for t in tokens {
        out.push(format!("uni:{t}"));
    }
    for i in 0..n.saturating_sub(1) {
        out.push(format!("bi:{} {}", tokens[i], tokens[i + 1]));
    }
    let part = |start: usize, len: usize| tokens[start..start + len].join(" ");
    for a_start in 0..n {
        for a_len in 1..=2 {
            if a_start + a_len > n {
                continue;
            }
            for b_start in a_start + a_len + 1..n {
                for b_len in 1..=2 {
                    if b_start + b_len > n {
                        continue;
                    }
                    out.push(format!(
                        "pair:{}---{}",
                        part(a_start, a_len),
                        part(b_start, b_len)
                    ));
                }
            }
        }
    }
    out
}

/// Term → (score) for every term with at least `min_count` occurrences.
/// `positive` marks each message's class.
pub fn brute_pmi(
    corpus: &[(Vec<String>, bool)],
    min_count: u64,
    alpha: f64,
) -> HashMap<String, f64> {
    let mut freq: HashMap<String, (u64, u64)> = HashMap::new();
    let (mut n_pos, mut n_neg) = (0u64, 0u64);
    for (tokens, positive) in corpus {
        for key in brute_candidates(tokens) {
            let e = freq.entry(key).or_default();
            if *positive {
                e.0 += 1;
                n_pos += 1;
            } else {
                e.1 += 1;
                n_neg += 1;
            }
        }
    }
    let eps = alpha / freq.len().max(1) as f64;
    let rate = |f: u64, n: u64| if n == 0 { 0.0 } else { f as f64 / n as f64 };
    freq.iter()
        .filter(|(_, (p, n))| p + n >= min_count)
        .map(|(k, &(p, n))| {
            let score = (rate(p, n_pos) + eps).log2() - (rate(n, n_neg) + eps).log2();
            (k.clone(), score)
        })
        .collect()
}

/// Exact minimiser of `0.5 * |(w, b)|^2 + c * sum hinge(1 - y (w.x + b))`
/// by enumeration. At the optimum every point is on the margin, violating,
/// or satisfied; for each such split (margin rows linearly independent) the
/// candidate is the point of the margin hyperplanes closest to
/// `c * sum_violating y x`. Every candidate is a feasible point and the
/// optimum is one of them, so the candidate with the least objective is the
/// solution. Returns `(w, b)`.
pub fn svm_primal_oracle(xs: &[Vec<f64>], y: &[f64], c: f64) -> (Vec<f64>, f64) {
    let n = xs.len();
    let aug: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| x.iter().copied().chain([1.0]).collect())
        .collect();
    let m = aug.first().map_or(1, Vec::len);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let objective = |w: &[f64]| {
        0.5 * dot(w, w)
            + c * (0..n)
                .map(|i| (1.0 - y[i] * dot(&aug[i], w)).max(0.0))
                .sum::<f64>()
    };
    let mut best = vec![0.0; m];
    let mut best_obj = objective(&best);
    let mut role = vec![0u8; n]; // 0 satisfied, 1 violating, 2 margin
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut k = code;
        for r in role.iter_mut() {
            *r = (k % 3) as u8;
            k /= 3;
        }
        let margin: Vec<usize> = (0..n).filter(|&i| role[i] == 2).collect();
        if margin.len() > m {
            continue;
        }
        let mut u = vec![0.0; m];
        for i in (0..n).filter(|&i| role[i] == 1) {
            for (uj, xj) in u.iter_mut().zip(&aug[i]) {
                *uj += c * y[i] * xj;
            }
        }
        // solve (A A^T) lambda = y_M - A u, then w = u + A^T lambda
        let g: Vec<Vec<f64>> = margin
            .iter()
            .map(|&i| margin.iter().map(|&j| dot(&aug[i], &aug[j])).collect())
            .collect();
        let rhs: Vec<f64> = margin.iter().map(|&i| y[i] - dot(&aug[i], &u)).collect();
        let Some(lambda) = solve_linear(g, rhs) else {
            continue;
        };
        let mut w = u;
        for (l, &i) in lambda.iter().zip(&margin) {
            for (wj, xj) in w.iter_mut().zip(&aug[i]) {
                *wj += l * xj;
            }
        }
        let obj = objective(&w);
        if obj < best_obj {
            best_obj = obj;
            best = w;
        }
    }
    let b = best.pop().unwrap_or(0.0);
    (best, b)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-10 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (offset, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[col + 1 + offset] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Token `j` is negated iff some earlier token is a negation cue and no
/// clause-closing token appears after that cue up to and including `j`.
pub fn brute_negation_mask(
    tokens: &[&str],
    is_cue: impl Fn(&str) -> bool,
    closes: impl Fn(&str) -> bool,
) -> Vec<bool> {
    (0..tokens.len())
        .map(|j| {
            !closes(tokens[j])
                && (0..j).any(|i| is_cue(tokens[i]) && !(i + 1..=j).any(|k| closes(tokens[k])))
        })
        .collect()
}
