//! Floating-point lattice reduction and short-vector enumeration for small
//! dimensions. Results are candidates only; callers re-check exactly.

/// Outcome of a bounded enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Nonzero vectors `x` with `xᵀGx ≤ bound`, one of each `±x` pair, sorted by
    /// form value then lexicographically.
    pub vectors: Vec<Vec<i64>>,
    /// Whether the search hit the candidate limit before finishing.
    pub truncated: bool,
    /// Candidates (enumeration leaves) examined.
    pub visited: usize,
}

fn quad_form(g: &[Vec<f64>], x: &[i64]) -> f64 {
    let n = g.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += g[i][j] * x[i] as f64 * x[j] as f64;
        }
    }
    s
}

/// LLL (δ = 0.99) on a positive definite Gram matrix. Returns the unimodular
/// transform `U` (rows are the new basis in old coordinates).
pub fn lll_gram(g: &[Vec<f64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let gram = |u: &Vec<Vec<i64>>, i: usize, j: usize| -> f64 {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += u[i][a] as f64 * g[a][b] * u[j][b] as f64;
            }
        }
        s
    };
    let gso = |u: &Vec<Vec<i64>>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bstar = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = gram(u, i, j);
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                }
                mu[i][j] = s / bstar[j];
            }
            let mut s = gram(u, i, i);
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bstar[k];
            }
            bstar[i] = s;
        }
        (mu, bstar)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&u);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i64;
                for c in 0..n {
                    u[k][c] -= r * u[j][c];
                }
            }
        }
        let (mu, bstar) = gso(&u);
        if bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            u.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    u
}

/// All nonzero `x ∈ Zⁿ` with `xᵀGx ≤ bound`, up to sign, by Fincke-Pohst on the
/// LLL-reduced form. Stops after `limit` candidates and flags truncation.
pub fn short_vectors(g: &[Vec<f64>], bound: f64, limit: usize) -> Enumeration {
    let n = g.len();
    let u = lll_gram(g);
    // reduced Gram
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += u[i][a] as f64 * g[a][b] * u[j][b] as f64;
                }
            }
            h[i][j] = s;
        }
    }
    // xᵀHx = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q = h.clone();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let slack = bound * 1e-9 + 1e-9;
    let b = bound + slack;
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut truncated = false;
    let mut y = vec![0i64; n];
    let mut visited = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        rem: f64,
        q: &[Vec<f64>],
        y: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        visited: &mut usize,
        limit: usize,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        let n = q.len();
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * y[j] as f64).sum::<f64>();
        let r = (rem / q[i][i]).max(0.0).sqrt();
        let lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        for v in lo..=hi {
            y[i] = v;
            let t = v as f64 - c;
            let left = rem - q[i][i] * t * t;
            if left < -1e-9 {
                continue;
            }
            if i == 0 {
                *visited += 1;
                if *visited > limit {
                    *truncated = true;
                    return;
                }
                if y.iter().any(|&z| z != 0) {
                    out.push(y.clone());
                }
            } else {
                rec(i - 1, left, q, y, out, visited, limit, truncated);
                if *truncated {
                    return;
                }
            }
        }
        y[i] = 0;
    }
    rec(n - 1, b, &q, &mut y, &mut found, &mut visited, limit, &mut truncated);
    let mut vectors: Vec<Vec<i64>> = found
        .into_iter()
        .map(|yv| (0..n).map(|c| (0..n).map(|i| yv[i] * u[i][c]).sum()).collect::<Vec<i64>>())
        .filter(|x: &Vec<i64>| x.iter().find(|&&z| z != 0).is_some_and(|&z| z > 0))
        .collect();
    vectors.sort_by(|a, b| quad_form(g, a).total_cmp(&quad_form(g, b)).then_with(|| a.cmp(b)));
    vectors.dedup();
    Enumeration { vectors, truncated, visited: visited.min(limit) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &[Vec<f64>], bound: f64, r: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let x = vec![a, b, c];
                    if x.iter().find(|&&z| z != 0).is_some_and(|&z| z > 0) && quad_form(g, &x) <= bound + 1e-9 {
                        out.push(x);
                    }
                }
            }
        }
        out.sort_by(|a, b| quad_form(g, a).total_cmp(&quad_form(g, b)).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn matches_brute_force_on_skewed_form() {
        // basis (1,0,0), (7,1,0), (3,5,1) of the standard form
        let b = [[1.0, 0.0, 0.0], [7.0, 1.0, 0.0], [3.0, 5.0, 1.0]];
        let g: Vec<Vec<f64>> =
            (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| b[i][k] * b[j][k]).sum()).collect()).collect();
        let e = short_vectors(&g, 6.0, 100_000);
        assert!(!e.truncated);
        assert_eq!(e.vectors, brute(&g, 6.0, 80));
    }

    #[test]
    fn truncation_is_reported() {
        let g = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!(short_vectors(&g, 100.0, 10).truncated);
    }
}
