//! Reference implementations that share no code with the library.
#![allow(dead_code)]

/// Shortest cycle length and number of distinct shortest cycles of a
/// bipartite graph, by depth-limited enumeration of simple cycles.
/// Variables are nodes `0..n_var`, checks follow.
pub fn brute_girth(n_var: usize, n_check: usize, edges: &[(usize, usize)]) -> Option<(u32, u64)> {
    let n = n_var + n_check;
    let mut adj = vec![Vec::new(); n];
    for &(v, c) in edges {
        if !adj[v].contains(&(n_var + c)) {
            adj[v].push(n_var + c);
            adj[n_var + c].push(v);
        }
    }
    let mut len = 4;
    while len <= n {
        let mut count = 0u64;
        for start in 0..n {
            let mut on_path = vec![false; n];
            on_path[start] = true;
            count += walk(&adj, start, start, 1, len, &mut on_path);
        }
        if count > 0 {
            // Each cycle is found once per direction from its lowest node.
            return Some((len as u32, count / 2));
        }
        len += 2;
    }
    None
}

/// Simple paths from `start` (the lowest node on the cycle) back to it.
fn walk(adj: &[Vec<usize>], start: usize, u: usize, depth: usize, len: usize, on_path: &mut [bool]) -> u64 {
    let mut found = 0;
    for &w in &adj[u] {
        if w == start && depth == len {
            found += 1;
        } else if w > start && !on_path[w] && depth < len {
            on_path[w] = true;
            found += walk(adj, start, w, depth + 1, len, on_path);
            on_path[w] = false;
        }
    }
    found
}

/// Codeword closest in correlation to `llr` among all words with zero
/// syndrome under `h` (dense rows).
pub fn ml_decode(h: &[Vec<u8>], llr: &[f64]) -> Vec<u8> {
    let n = llr.len();
    let mut best = (f64::NEG_INFINITY, vec![0; n]);
    for word in 0u32..(1 << n) {
        let c: Vec<u8> = (0..n).map(|i| ((word >> i) & 1) as u8).collect();
        let ok = h
            .iter()
            .all(|row| row.iter().zip(&c).map(|(a, b)| a & b).sum::<u8>() % 2 == 0);
        if !ok {
            continue;
        }
        let score: f64 = c
            .iter()
            .zip(llr)
            .map(|(&b, &l)| if b == 0 { l } else { -l })
            .sum();
        if score > best.0 {
            best = (score, c);
        }
    }
    best.1
}

pub fn syndrome_is_zero(h: &[Vec<u8>], c: &[u8]) -> bool {
    h.iter()
        .all(|row| row.iter().zip(c).filter(|(a, b)| **a == 1 && **b == 1).count() % 2 == 0)
}

/// Upper-tail standard normal probability by Simpson's rule on the density.
pub fn normal_tail(x: f64) -> f64 {
    let (a, b) = (x, x + 40.0);
    let n = 200_000;
    let h = (b - a) / n as f64;
    let f = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}
