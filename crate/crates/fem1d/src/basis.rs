/// Lagrange basis on the reference cell [0, 1] with equispaced nodes a/p.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(p: usize) -> Self {
        Self { nodes: (0..=p).map(|a| a as f64 / p as f64).collect() }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn value(&self, a: usize, xi: f64) -> f64 {
        let xa = self.nodes[a];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, &xb)| (xi - xb) / (xa - xb))
            .product()
    }

    /// d/dξ of the a-th basis function.
    pub fn derivative(&self, a: usize, xi: f64) -> f64 {
        let xa = self.nodes[a];
        let mut sum = 0.0;
        for (l, &xl) in self.nodes.iter().enumerate() {
            if l == a {
                continue;
            }
            let mut term = 1.0 / (xa - xl);
            for (b, &xb) in self.nodes.iter().enumerate() {
                if b != a && b != l {
                    term *= (xi - xb) / (xa - xb);
                }
            }
            sum += term;
        }
        sum
    }
}
