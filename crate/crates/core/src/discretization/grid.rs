use crate::error::{Error, Result};

/// Strictly increasing nodes `x_0 < … < x_N` of a 1D mesh with `N` cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
}

impl Grid1D {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidGrid("need at least one cell".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "nodes must be finite and strictly increasing".into(),
            ));
        }
        Ok(Grid1D { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn dx(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn min_dx(&self) -> f64 {
        self.widths().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Grid whose cells are unions of adjacent pairs: `x_{H,i} = x_{h,2i}`.
    pub fn coarsen(&self) -> Result<Grid1D> {
        let n = self.n_cells();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("cannot coarsen {n} cells")));
        }
        Ok(Grid1D {
            nodes: self.nodes.iter().step_by(2).copied().collect(),
        })
    }
}

/// `x_i = a + i (b − a)/N`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Grid1D> {
    if n == 0 || !(b > a) {
        return Err(Error::InvalidGrid(format!("uniform grid on [{a}, {b}] with {n} cells")));
    }
    let h = (b - a) / n as f64;
    let mut nodes: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
    nodes[n] = b;
    Grid1D::from_nodes(nodes)
}

/// Unit-length mesh clustered at both ends:
/// `x_i = a + (asinh(−5 + 10i/N) − asinh(−5)) / (asinh(5) − asinh(−5))`.
pub fn asinh_grid(a: f64, n: usize) -> Result<Grid1D> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!("asinh grid needs an even N ≥ 2, got {n}")));
    }
    let lo = (-5.0f64).asinh();
    let span = 5.0f64.asinh() - lo;
    let mut nodes: Vec<f64> = (0..=n)
        .map(|i| a + ((-5.0 + 10.0 * i as f64 / n as f64).asinh() - lo) / span)
        .collect();
    nodes[0] = a;
    nodes[n] = a + 1.0;
    nodes[n / 2] = a + 0.5;
    Grid1D::from_nodes(nodes)
}
