//! Gauss–Legendre panels with cumulative (indefinite) integration.

use std::f64::consts::PI;

/// Legendre polynomials `P_0..=P_n` at `x`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        p[k] = ((2 * k - 1) as f64 * x * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

/// An `q`-point rule on `[-1, 1]` plus the matrix `S[i][j] = int_{-1}^{x_i} l_j`,
/// where `l_j` is the Lagrange basis polynomial of node `j`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub cumulative: Vec<Vec<f64>>,
}

impl GaussLegendre {
    pub fn new(q: usize) -> Self {
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        for i in 0..q {
            let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
            for _ in 0..100 {
                let p = legendre_all(q, x);
                let dp = q as f64 * (x * p[q] - p[q - 1]) / (x * x - 1.0);
                let dx = p[q] / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let p = legendre_all(q, x);
            let dp = q as f64 * (x * p[q] - p[q - 1]) / (x * x - 1.0);
            nodes[q - 1 - i] = x;
            weights[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        // l_j = sum_n (2n+1)/2 w_j P_n(x_j) P_n and int_{-1}^{x} P_n = (P_{n+1} - P_{n-1})(x) / (2n+1).
        let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(q, x)).collect();
        let mut cumulative = vec![vec![0.0; q]; q];
        for i in 0..q {
            let pi = &at_nodes[i];
            for j in 0..q {
                let pj = &at_nodes[j];
                let mut s = 0.5 * (nodes[i] + 1.0);
                for n in 1..q {
                    s += 0.5 * pj[n] * (pi[n + 1] - pi[n - 1]);
                }
                cumulative[i][j] = weights[j] * s;
            }
        }
        Self { nodes, weights, cumulative }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Nodes of a panel decomposition of an interval, with both the abscissa `t` and
/// the distance `d` to the right end of the whole interval stored exactly.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    pub rule: GaussLegendre,
    /// `(left, right)` per panel.
    pub panels: Vec<(f64, f64)>,
    /// Abscissae, panel-major.
    pub t: Vec<f64>,
    /// `end - t`, computed without cancellation.
    pub d: Vec<f64>,
}

impl PanelGrid {
    /// Panels from consecutive breakpoints; `end` is the point distances are measured to.
    pub fn new(rule: GaussLegendre, breaks: &[f64], end: f64) -> Self {
        let panels: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
        let mut t = Vec::with_capacity(panels.len() * rule.len());
        let mut d = Vec::with_capacity(panels.len() * rule.len());
        for &(a, b) in &panels {
            let h = b - a;
            for &x in &rule.nodes {
                t.push(a + 0.5 * h * (1.0 + x));
                d.push((end - b) + 0.5 * h * (1.0 - x));
            }
        }
        Self { rule, panels, t, d }
    }

    /// `[0, X]` split at `X (1 - 2^{-m})` for `m = 1..=levels`, resolving endpoint singularities at `X`.
    pub fn graded(x: f64, levels: u32, q: usize) -> Self {
        let rule = GaussLegendre::new(q);
        let mut breaks = vec![0.0];
        breaks.extend((1..=levels).map(|m| x - x * 0.5f64.powi(m as i32)));
        let mut grid = Self::new(rule, &breaks, x);
        // distances are exact multiples of X
        let q = grid.rule.len();
        for (p, _) in grid.panels.iter().enumerate() {
            let right = x * 0.5f64.powi(p as i32 + 1);
            let h = if p == 0 { 0.5 * x } else { right };
            for (i, &node) in grid.rule.nodes.iter().enumerate() {
                grid.d[p * q + i] = right + 0.5 * h * (1.0 - node);
            }
        }
        grid
    }

    /// Uniform panels of width at most `h` covering `[a, b]`.
    pub fn uniform(a: f64, b: f64, h: f64, q: usize) -> Self {
        let n = ((b - a) / h).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
        Self::new(GaussLegendre::new(q), &breaks, b)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Right end of the covered range.
    pub fn end(&self) -> f64 {
        self.panels.last().map_or(0.0, |p| p.1)
    }

    /// `F(t_i) = F(start) + int_start^{t_i} g` at every node, plus the total over all panels.
    pub fn cumulative(&self, g: &[f64], start: f64) -> (Vec<f64>, f64) {
        let q = self.rule.len();
        let mut out = vec![0.0; g.len()];
        let mut base = start;
        for (p, &(a, b)) in self.panels.iter().enumerate() {
            let half = 0.5 * (b - a);
            let gp = &g[p * q..(p + 1) * q];
            for i in 0..q {
                let s: f64 = self.rule.cumulative[i].iter().zip(gp).map(|(w, v)| w * v).sum();
                out[p * q + i] = base + half * s;
            }
            base += half * self.rule.weights.iter().zip(gp).map(|(w, v)| w * v).sum::<f64>();
        }
        (out, base)
    }

    pub fn integrate(&self, g: &[f64]) -> f64 {
        self.cumulative(g, 0.0).1
    }
}
