//! Dense symmetric positive-definite solves for the small normal equations
//! of the propensity fit.

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    /// Adds `w * v v^T` to the lower triangle.
    pub fn rank_one_lower(&mut self, w: f64, v: &[f64]) {
        for i in 0..self.n {
            let wi = w * v[i];
            let row = &mut self.data[i * self.n..i * self.n + i + 1];
            for (r, vj) in row.iter_mut().zip(v) {
                *r += wi * vj;
            }
        }
    }

    /// Copies the lower triangle to the upper one.
    pub fn symmetrize_from_lower(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                self.data[j * self.n + i] = self.data[i * self.n + j];
            }
        }
    }

    /// Cholesky factorization `A = L L^T`. Returns `None` when a pivot falls
    /// below `rel_tol` times the corresponding original diagonal entry.
    pub fn cholesky(&self, rel_tol: f64) -> Option<Cholesky> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > rel_tol * self.get(j, j).abs()) || d <= 0.0 {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(Cholesky { n, l })
    }
}

#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l[i * n + k] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.l[k * n + i] * y[k];
            }
            y[i] /= self.l[i * n + i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_spd_system() {
        // A = [[4,2,0],[2,5,1],[0,1,3]], x = (1,-1,2) => b = (2,-1,5)
        let mut a = SymMatrix::zeros(3);
        for (i, row) in [[4.0, 2.0, 0.0], [2.0, 5.0, 1.0], [0.0, 1.0, 3.0]].iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                a.add(i, j, *v);
            }
        }
        let x = a.cholesky(1e-12).unwrap().solve(&[2.0, -1.0, 5.0]);
        for (got, want) in x.iter().zip([1.0, -1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_singular() {
        let mut a = SymMatrix::zeros(2);
        a.rank_one_lower(1.0, &[1.0, 2.0]);
        a.symmetrize_from_lower();
        assert!(a.cholesky(1e-10).is_none());
    }
}
