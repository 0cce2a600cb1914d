//! Felsenstein pruning for the symmetric two-state model with analytic
//! derivatives in edge lengths.
//!
//! Transition probabilities over an edge of weight `λ` (`μ = 1 − λ`) are
//! `P(same) = 1 − λ/2` and `P(diff) = λ/2`, so weight-one edges give exact
//! independence. In lengths, `dP(same)/dℓ = −μ/2 = −dP(diff)/dℓ` and the
//! second derivatives flip sign again.

use nalgebra::DMatrix;

use crate::forest::{Forest, Wald};

/// Transition matrix `[p00, p01, p10, p11]`.
type Trans = [f64; 4];

fn trans(lambda: f64) -> Trans {
    let d = 0.5 * lambda;
    [1.0 - d, d, d, 1.0 - d]
}

fn dtrans(lambda: f64) -> Trans {
    let h = 0.5 * (1.0 - lambda);
    [-h, h, h, -h]
}

fn d2trans(lambda: f64) -> Trans {
    let h = 0.5 * (1.0 - lambda);
    [h, -h, -h, h]
}

/// Rooted form of a forest. Every component hangs from a virtual root by a
/// weight-one link, which makes the components independent without special
/// cases.
#[derive(Debug, Clone)]
pub struct Pruner {
    n_leaves: usize,
    n_params: usize,
    children: Vec<Vec<usize>>,
    leaf: Vec<Option<usize>>,
    /// Parameter of the edge above each node; `None` for virtual links.
    param: Vec<Option<usize>>,
    node_of_param: Vec<usize>,
    /// Children before parents; the virtual root is last.
    order: Vec<usize>,
}

impl Pruner {
    /// One parameter per forest edge, in edge order.
    pub fn from_forest(f: &Forest) -> Pruner {
        let idx: Vec<usize> = (0..f.edges().len()).collect();
        Pruner::with_params(f, &idx, f.edges().len())
    }

    /// One parameter per split of the wald.
    pub fn for_wald(w: &Wald) -> Pruner {
        let (f, idx) = w.to_forest_indexed();
        Pruner::with_params(&f, &idx, w.lambda().len())
    }

    /// `edge_param[e]` is the parameter index of forest edge `e`; each
    /// parameter must be used by exactly one edge.
    pub fn with_params(f: &Forest, edge_param: &[usize], n_params: usize) -> Pruner {
        let nv = f.n_vertices();
        let root = nv;
        let adj = f.adjacency();
        let mut parent_param = vec![None; nv + 1];
        let mut children = vec![Vec::new(); nv + 1];
        let mut seen = vec![false; nv];
        let mut order = Vec::with_capacity(nv + 1);
        for start in 0..nv {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            children[root].push(start);
            let mut pre = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        children[v].push(w);
                        parent_param[w] = Some(edge_param[e]);
                        stack.push(w);
                        pre.push(w);
                    }
                }
            }
            order.extend(pre.into_iter().rev());
        }
        order.push(root);
        let mut node_of_param = vec![usize::MAX; n_params];
        for (v, p) in parent_param.iter().enumerate() {
            if let Some(p) = p {
                node_of_param[*p] = v;
            }
        }
        let leaf = (0..=nv).map(|v| (v < f.n_leaves()).then_some(v)).collect();
        Pruner {
            n_leaves: f.n_leaves(),
            n_params,
            children,
            leaf,
            param: parent_param,
            node_of_param,
            order,
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    fn transitions(&self, lambda: &[f64]) -> Vec<Trans> {
        self.param.iter().map(|p| trans(p.map_or(1.0, |i| lambda[i]))).collect()
    }

    fn indicator(&self, v: usize, s: u64) -> [f64; 2] {
        match self.leaf[v] {
            Some(u) if s >> u & 1 == 1 => [0.0, 1.0],
            Some(_) => [1.0, 0.0],
            None => [1.0, 1.0],
        }
    }

    /// Conditional likelihoods below each node and messages sent up each edge.
    fn upward(&self, t: &[Trans], s: u64) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
        let m = self.order.len();
        let mut up = vec![[0.0; 2]; m];
        let mut msg = vec![[0.0; 2]; m];
        for &v in &self.order {
            let mut u = self.indicator(v, s);
            for &c in &self.children[v] {
                u[0] *= msg[c][0];
                u[1] *= msg[c][1];
            }
            up[v] = u;
            let p = &t[v];
            msg[v] = [p[0] * u[0] + p[1] * u[1], p[2] * u[0] + p[3] * u[1]];
        }
        (up, msg)
    }

    /// For each non-root node, everything outside its subtree and its edge as
    /// a function of the parent's state.
    fn outside(&self, t: &[Trans], s: u64, msg: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let m = self.order.len();
        let mut top = vec![[0.0; 2]; m];
        let mut excl = vec![[0.0; 2]; m];
        let root = *self.order.last().unwrap();
        top[root] = [0.5, 0.5];
        for &a in self.order.iter().rev() {
            let ind = self.indicator(a, s);
            let base = [top[a][0] * ind[0], top[a][1] * ind[1]];
            let ch = &self.children[a];
            for (k, &c) in ch.iter().enumerate() {
                let mut e = base;
                for (k2, &c2) in ch.iter().enumerate() {
                    if k2 != k {
                        e[0] *= msg[c2][0];
                        e[1] *= msg[c2][1];
                    }
                }
                excl[c] = e;
                let p = &t[c];
                top[c] = [e[0] * p[0] + e[1] * p[2], e[0] * p[1] + e[1] * p[3]];
            }
        }
        excl
    }

    fn contract(e: &[f64; 2], p: &Trans, u: &[f64; 2]) -> f64 {
        e[0] * (p[0] * u[0] + p[1] * u[1]) + e[1] * (p[2] * u[0] + p[3] * u[1])
    }

    /// `p(s)` for character `s` (leaf `u` at bit `u`).
    pub fn prob(&self, lambda: &[f64], s: u64) -> f64 {
        let t = self.transitions(lambda);
        let (up, _) = self.upward(&t, s);
        let r = *self.order.last().unwrap();
        0.5 * (up[r][0] + up[r][1])
    }

    fn grad_with(&self, t: &[Trans], lambda: &[f64], s: u64, grad: &mut [f64]) -> f64 {
        let (up, msg) = self.upward(t, s);
        let excl = self.outside(t, s, &msg);
        for (i, g) in grad.iter_mut().enumerate() {
            let v = self.node_of_param[i];
            *g = Self::contract(&excl[v], &dtrans(lambda[i]), &up[v]);
        }
        let r = *self.order.last().unwrap();
        0.5 * (up[r][0] + up[r][1])
    }

    /// `p(s)` and `∂p/∂ℓ_i` for every parameter.
    pub fn prob_grad(&self, lambda: &[f64], s: u64, grad: &mut [f64]) -> f64 {
        let t = self.transitions(lambda);
        self.grad_with(&t, lambda, s, grad)
    }

    /// `p(s)`, the gradient and the Hessian in edge lengths. Off-diagonal
    /// entries come from rerunning the gradient pass with one transition
    /// matrix replaced by its derivative.
    pub fn prob_hess(&self, lambda: &[f64], s: u64, grad: &mut [f64], hess: &mut DMatrix<f64>) -> f64 {
        let t = self.transitions(lambda);
        let p = self.grad_with(&t, lambda, s, grad);
        let np = self.n_params;
        let mut row = vec![0.0; np];
        let (up, msg) = self.upward(&t, s);
        let excl = self.outside(&t, s, &msg);
        for i in 0..np {
            let v = self.node_of_param[i];
            hess[(i, i)] = Self::contract(&excl[v], &d2trans(lambda[i]), &up[v]);
        }
        for i in 0..np {
            let mut ti = t.clone();
            ti[self.node_of_param[i]] = dtrans(lambda[i]);
            self.grad_with(&ti, lambda, s, &mut row);
            for j in (i + 1)..np {
                hess[(i, j)] = row[j];
                hess[(j, i)] = row[j];
            }
        }
        p
    }
}
