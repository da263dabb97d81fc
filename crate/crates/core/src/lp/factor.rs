//! Sparse LU factorization of a simplex basis with product-form updates.
//!
//! Columns are eliminated left-looking in order of increasing density; the
//! pivot row is chosen among entries within a threshold of the column
//! maximum, preferring sparse rows. Basis changes between refactorizations
//! are appended as eta columns.

use crate::error::{Error, Result};

const THRESHOLD: f64 = 0.1;
const SINGULAR: f64 = 1e-11;
const DROP: f64 = 1e-14;

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub(super) struct Factor {
    m: usize,
    pivot_row: Vec<usize>,
    pivot_pos: Vec<usize>,
    step_of_row: Vec<usize>,
    diag: Vec<f64>,
    /// Above-diagonal entries of U by column: (earlier step, value).
    u_cols: Vec<Vec<(usize, f64)>>,
    /// Below-diagonal multipliers of L by column: (row, value).
    l_cols: Vec<Vec<(usize, f64)>>,
    etas: Vec<Eta>,
}

impl Factor {
    /// Factorizes the `m x m` matrix whose column at position `k` is
    /// `columns[k]` (sparse `(row, value)` lists).
    pub(super) fn new(m: usize, columns: &[&[(usize, f64)]]) -> Result<Self> {
        debug_assert_eq!(columns.len(), m);
        let mut row_count = vec![0usize; m];
        for col in columns {
            for &(r, _) in *col {
                row_count[r] += 1;
            }
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&k| columns[k].len());

        let mut f = Factor {
            m,
            pivot_row: Vec::with_capacity(m),
            pivot_pos: Vec::with_capacity(m),
            step_of_row: vec![usize::MAX; m],
            diag: Vec::with_capacity(m),
            u_cols: Vec::with_capacity(m),
            l_cols: Vec::with_capacity(m),
            etas: Vec::new(),
        };
        let mut work = vec![0.0; m];
        let mut touched = vec![false; m];
        let mut nz: Vec<usize> = Vec::new();

        for (step, &pos) in order.iter().enumerate() {
            for &(r, v) in columns[pos] {
                work[r] += v;
                if !touched[r] {
                    touched[r] = true;
                    nz.push(r);
                }
            }
            let mut u = Vec::new();
            for t in 0..step {
                let z = work[f.pivot_row[t]];
                if z == 0.0 {
                    continue;
                }
                u.push((t, z));
                for &(r, l) in &f.l_cols[t] {
                    work[r] -= l * z;
                    if !touched[r] {
                        touched[r] = true;
                        nz.push(r);
                    }
                }
            }
            let max_abs = nz
                .iter()
                .filter(|&&r| f.step_of_row[r] == usize::MAX)
                .map(|&r| work[r].abs())
                .fold(0.0, f64::max);
            if max_abs < SINGULAR {
                return Err(Error::Numerical("singular basis".into()));
            }
            let pivot = nz
                .iter()
                .copied()
                .filter(|&r| f.step_of_row[r] == usize::MAX && work[r].abs() >= THRESHOLD * max_abs)
                .min_by(|&a, &b| {
                    row_count[a]
                        .cmp(&row_count[b])
                        .then(work[b].abs().total_cmp(&work[a].abs()))
                        .then(a.cmp(&b))
                })
                .expect("threshold admits the maximum");
            let d = work[pivot];
            let l = nz
                .iter()
                .copied()
                .filter(|&r| r != pivot && f.step_of_row[r] == usize::MAX && work[r].abs() > DROP)
                .map(|r| (r, work[r] / d))
                .collect();
            f.step_of_row[pivot] = step;
            f.pivot_row.push(pivot);
            f.pivot_pos.push(pos);
            f.diag.push(d);
            f.u_cols.push(u);
            f.l_cols.push(l);
            for r in nz.drain(..) {
                work[r] = 0.0;
                touched[r] = false;
            }
        }
        Ok(f)
    }

    pub(super) fn updates(&self) -> usize {
        self.etas.len()
    }

    /// Records that the column at basis position `pos` was replaced by a
    /// column whose solve against the previous basis is `alpha`.
    pub(super) fn update(&mut self, pos: usize, alpha: &[f64]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &a)| i != pos && a.abs() > DROP)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta {
            pos,
            pivot: alpha[pos],
            entries,
        });
    }

    /// Solves `B x = v` for `v` indexed by row; result indexed by position.
    pub(super) fn ftran(&self, mut v: Vec<f64>) -> Vec<f64> {
        for s in 0..self.m {
            let z = v[self.pivot_row[s]];
            if z != 0.0 {
                for &(r, l) in &self.l_cols[s] {
                    v[r] -= l * z;
                }
            }
        }
        let mut z: Vec<f64> = self.pivot_row.iter().map(|&r| v[r]).collect();
        for s in (0..self.m).rev() {
            let w = z[s] / self.diag[s];
            z[s] = w;
            if w != 0.0 {
                for &(t, u) in &self.u_cols[s] {
                    z[t] -= u * w;
                }
            }
        }
        let mut out = v;
        for (s, &pos) in self.pivot_pos.iter().enumerate() {
            out[pos] = z[s];
        }
        for eta in &self.etas {
            let xp = out[eta.pos] / eta.pivot;
            out[eta.pos] = xp;
            if xp != 0.0 {
                for &(i, a) in &eta.entries {
                    out[i] -= a * xp;
                }
            }
        }
        out
    }

    /// Solves `B^T y = c` for `c` indexed by position; result indexed by row.
    pub(super) fn btran(&self, mut c: Vec<f64>) -> Vec<f64> {
        for eta in self.etas.iter().rev() {
            let s: f64 = eta.entries.iter().map(|&(i, a)| a * c[i]).sum();
            c[eta.pos] = (c[eta.pos] - s) / eta.pivot;
        }
        let mut g = vec![0.0; self.m];
        for s in 0..self.m {
            let acc: f64 = self.u_cols[s].iter().map(|&(t, u)| u * g[t]).sum();
            g[s] = (c[self.pivot_pos[s]] - acc) / self.diag[s];
        }
        for s in (0..self.m).rev() {
            let acc: f64 = self.l_cols[s].iter().map(|&(r, l)| l * g[self.step_of_row[r]]).sum();
            g[s] -= acc;
        }
        let mut out = c;
        for (s, &r) in self.pivot_row.iter().enumerate() {
            out[r] = g[s];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(cols: &[Vec<(usize, f64)>], x: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (k, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                out[r] += v * x[k];
            }
        }
        out
    }

    fn dense_mul_t(cols: &[Vec<(usize, f64)>], y: &[f64]) -> Vec<f64> {
        cols.iter()
            .map(|col| col.iter().map(|&(r, v)| v * y[r]).sum())
            .collect()
    }

    fn sample() -> Vec<Vec<(usize, f64)>> {
        vec![
            vec![(0, 2.0), (2, 1.0)],
            vec![(1, -1.0)],
            vec![(0, 1.0), (1, 3.0), (2, 4.0)],
        ]
    }

    #[test]
    fn solves_match_products() {
        let cols = sample();
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        let f = Factor::new(3, &refs).unwrap();
        let v = vec![1.0, -2.0, 0.5];
        let x = f.ftran(v.clone());
        let back = dense_mul(&cols, &x, 3);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        let y = f.btran(v.clone());
        let back = dense_mul_t(&cols, &y);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_updates_track_column_replacement() {
        let mut cols = sample();
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        let mut f = Factor::new(3, &refs).unwrap();
        let new_col = vec![(0, 1.0), (1, 1.0), (2, 1.0)];
        let mut dense = vec![0.0; 3];
        for &(r, v) in &new_col {
            dense[r] = v;
        }
        let alpha = f.ftran(dense);
        f.update(1, &alpha);
        cols[1] = new_col;
        let v = vec![0.3, 0.7, -1.1];
        let x = f.ftran(v.clone());
        let back = dense_mul(&cols, &x, 3);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        let y = f.btran(v.clone());
        let back = dense_mul_t(&cols, &y);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(f.updates(), 1);
    }

    #[test]
    fn singular_basis_is_detected() {
        let cols = [vec![(0, 1.0), (1, 1.0)], vec![(0, 2.0), (1, 2.0)]];
        let refs: Vec<&[(usize, f64)]> = cols.iter().map(|c| c.as_slice()).collect();
        assert!(Factor::new(2, &refs).is_err());
    }
}
