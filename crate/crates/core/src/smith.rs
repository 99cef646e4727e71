//! Kernels of matrices over a Galois ring by Smith-style elimination.
//!
//! Rows are reduced below each pivot and columns are cleared to the right of
//! it, with the column operations accumulated in a unimodular matrix V. The
//! reduced matrix is then diagonal with entries p^{v_s}, so the kernel is
//! spanned by the columns of V past the rank plus p^{r−v_s}·V[:, s].

use crate::error::{Error, Result};
use crate::ring::{Elem, GaloisRing};

/// Dense row-major matrix over a Galois ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn apply(&self, ring: &GaloisRing, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &x)| ring.add(acc, ring.mul(a, x)))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

/// dst ← dst − q·src over the slice pair.
fn axpy(ring: &GaloisRing, dst: &mut [Elem], q: Elem, src: &[Elem]) {
    let mq = ring.neg(q);
    match ring.mul_row(mq) {
        Some(row) => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ring.add(*d, Elem(row[s.0 as usize] as u32));
            }
        }
        None => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ring.add(*d, ring.mul(mq, s));
            }
        }
    }
}

/// Generators of {v : A·v = 0}.
pub fn kernel_basis(ring: &GaloisRing, a: &Matrix) -> Vec<Vec<Elem>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut a = a.clone();
    // V is stored transposed so that column operations become row operations
    let mut vt = Matrix::zeros(cols, cols);
    for i in 0..cols {
        vt.set(i, i, ring.one_elem());
    }
    let mut diag = Vec::new();
    for s in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for i in s..rows {
            for j in s..cols {
                let x = a.get(i, j);
                if x == Elem::ZERO {
                    continue;
                }
                let v = ring.val(x);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, pr, pc)) = best else { break };
        a.swap_rows(s, pr);
        a.swap_cols(s, pc);
        vt.swap_rows(s, pc);

        let (_, w) = ring.split_unit(a.get(s, s));
        let w_inv = ring.unit_inverse(w).expect("unit part");
        for j in s..cols {
            let x = a.get(s, j);
            a.set(s, j, ring.mul(w_inv, x));
        }
        let pivot_row: Vec<Elem> = a.row(s)[s..].to_vec();
        for i in s + 1..rows {
            let x = a.get(i, s);
            if x == Elem::ZERO {
                continue;
            }
            let q = ring.div_p_pow(x, v);
            let start = i * cols + s;
            axpy(ring, &mut a.data[start..start + cols - s], q, &pivot_row);
        }
        let (head, tail) = vt.data.split_at_mut((s + 1) * cols);
        let vs = &head[s * cols..];
        for j in s + 1..cols {
            let x = a.get(s, j);
            if x == Elem::ZERO {
                continue;
            }
            let q = ring.div_p_pow(x, v);
            let off = (j - s - 1) * cols;
            axpy(ring, &mut tail[off..off + cols], q, vs);
            a.set(s, j, Elem::ZERO);
        }
        diag.push(v);
    }
    let rank = diag.len();
    let mut gens: Vec<Vec<Elem>> = (rank..cols).map(|c| vt.row(c).to_vec()).collect();
    for (s, &v) in diag.iter().enumerate() {
        if v > 0 {
            let k = ring.r() - v;
            gens.push(vt.row(s).iter().map(|&x| ring.mul_p_pow(x, k)).collect());
        }
    }
    gens
}

/// Scales `v` so its first unit coordinate becomes 1; no-op without units.
pub fn normalize(ring: &GaloisRing, v: &mut [Elem]) {
    if let Some(&u) = v.iter().find(|&&x| ring.is_unit_elem(x)) {
        let inv = ring.unit_inverse(u).expect("unit");
        for x in v.iter_mut() {
            *x = ring.mul(inv, *x);
        }
    }
}

/// A nonzero kernel vector, preferring one with a unit coordinate; a vector
/// lying in (p^c) is divided by p^c when the quotient is still a solution.
pub fn smith_solve_homogeneous(ring: &GaloisRing, a: &Matrix) -> Result<Vec<Elem>> {
    let gens = kernel_basis(ring, a);
    let mut v = match gens
        .iter()
        .find(|g| g.iter().any(|&x| ring.is_unit_elem(x)))
    {
        Some(g) => g.clone(),
        None => {
            let g = gens
                .into_iter()
                .find(|g| g.iter().any(|&x| x != Elem::ZERO))
                .ok_or(Error::NoNonzeroSolution)?;
            let c = g.iter().map(|&x| ring.val(x)).min().unwrap_or(0);
            let reduced: Vec<Elem> = g.iter().map(|&x| ring.div_p_pow(x, c)).collect();
            if a.apply(ring, &reduced).iter().all(|&x| x == Elem::ZERO) {
                reduced
            } else {
                g
            }
        }
    };
    normalize(ring, &mut v);
    debug_assert!(a.apply(ring, &v).iter().all(|&x| x == Elem::ZERO));
    Ok(v)
}
