//! Dense linear algebra over `F_q` (row-vector convention) and exact
//! rational elimination.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gf::{Field, Fq};

/// Dense row-major matrix over some `F_q`; the field is passed to each operation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::scalar(n, 1)
    }

    pub fn scalar(n: usize, s: Fq) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Fq>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Fq] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * o.cols..(i + 1) * o.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *x = f.add(*x, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &Field, s: Fq) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    /// Apply a map entrywise (e.g. a field automorphism).
    pub fn map(&self, g: impl Fn(Fq) -> Fq) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| g(a)).collect() }
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// `Some(s)` when the matrix is `s·I`.
    pub fn scalar_value(&self) -> Option<Fq> {
        if !self.is_square() {
            return None;
        }
        let s = if self.rows == 0 { 1 } else { self.get(0, 0) };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { s } else { 0 };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, Fq)> {
        self.data.iter().enumerate().find(|(_, &v)| v != 0).map(|(i, &v)| (i, v))
    }

    /// Whether `self = s·o` for some scalar `s`; returns `s`.
    pub fn scalar_ratio(&self, f: &Field, o: &Mat) -> Option<Fq> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return None;
        }
        let (idx, v) = o.first_nonzero()?;
        let s = f.div(self.data[idx], v);
        for (&a, &b) in self.data.iter().zip(&o.data) {
            if a != f.mul(s, b) {
                return None;
            }
        }
        Some(s)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            self.swap_rows(p, r);
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..self.cols {
                    let v = self.get(r, j);
                    if v != 0 {
                        let w = self.get(i, j);
                        self.set(i, j, f.add(w, f.mul(nf, v)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Basis of `{x : self·x = 0}` (column vectors, returned as `Vec`s).
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let piv = m.rref(f);
        let mut is_piv = vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &p) in piv.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{v : v·self = 0}`.
    pub fn left_nullspace(&self, f: &Field) -> Vec<Vec<Fq>> {
        self.transpose().nullspace(f)
    }

    pub fn nullity(&self, f: &Field) -> usize {
        self.cols - self.rank(f)
    }

    /// Characteristic polynomial `det(xI - A)`, constant term first, via
    /// reduction to Hessenberg form.
    pub fn charpoly(&self, f: &Field) -> Vec<Fq> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else { continue };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let pivot_inv = f.inv(h.get(m, m - 1));
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), pivot_inv);
                if u == 0 {
                    continue;
                }
                let nu = f.neg(u);
                for j in 0..n {
                    let v = h.get(m, j);
                    if v != 0 {
                        let w = h.get(i, j);
                        h.set(i, j, f.add(w, f.mul(nu, v)));
                    }
                }
                for r in 0..n {
                    let v = h.get(r, i);
                    if v != 0 {
                        let w = h.get(r, m);
                        h.set(r, m, f.add(w, f.mul(u, v)));
                    }
                }
            }
        }
        // p[k] = charpoly of the leading k×k block
        let mut p: Vec<Vec<Fq>> = vec![vec![1]];
        for k in 1..=n {
            let hkk = h.get(k - 1, k - 1);
            let prev = &p[k - 1];
            let mut next = vec![0; k + 1];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], c);
                next[d] = f.sub(next[d], f.mul(hkk, c));
            }
            let mut t = 1;
            for i in 1..k {
                t = f.mul(t, h.get(k - i, k - i - 1));
                if t == 0 {
                    break;
                }
                let coeff = f.mul(t, h.get(k - i - 1, k - 1));
                if coeff != 0 {
                    for (d, &c) in p[k - i - 1].iter().enumerate() {
                        next[d] = f.sub(next[d], f.mul(coeff, c));
                    }
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// `poly(A)` by Horner's rule; `poly` has constant term first.
    pub fn eval_poly(&self, f: &Field, poly: &[Fq]) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zeros(n, n);
        for &c in poly.iter().rev() {
            acc = acc.mul(f, self);
            for i in 0..n {
                let v = acc.get(i, i);
                acc.set(i, i, f.add(v, c));
            }
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j));
            }
        }
        m
    }
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Fq], a: &Mat) -> Vec<Fq> {
    assert_eq!(v.len(), a.rows);
    let mut out = vec![0; a.cols];
    for (k, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(a.row(k)) {
            if b != 0 {
                *o = f.add(*o, f.mul(x, b));
            }
        }
    }
    out
}

/// Roots of a polynomial (constant term first) lying in `f`, by scanning.
pub fn poly_roots(f: &Field, poly: &[Fq]) -> Vec<Fq> {
    (0..f.size())
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0)
        .collect()
}

/// Incrementally maintained subspace in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the pivots.
    pub fn reduce(&self, f: &Field, v: &[Fq]) -> Vec<Fq> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, f: &Field, v: &[Fq]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns whether the rank grew.
    pub fn insert(&mut self, f: &Field, v: &[Fq]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in row.iter_mut().zip(&w) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }

    /// Coordinates of `v ∈ span` in the echelon basis.
    pub fn coordinates(&self, v: &[Fq]) -> Vec<Fq> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    pub fn to_mat(&self) -> Mat {
        if self.rows.is_empty() {
            return Mat::zeros(0, self.dim);
        }
        Mat::from_rows(&self.rows)
    }
}

/// Closure of `seeds` under right multiplication by `gens`.
pub fn spin(f: &Field, gens: &[Mat], seeds: &[Vec<Fq>], dim: usize) -> Echelon {
    let mut e = Echelon::new(dim);
    let mut queue: Vec<Vec<Fq>> = Vec::new();
    for s in seeds {
        if e.insert(f, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = vec_mat(f, &v, g);
            if e.insert(f, &w) {
                queue.push(w);
            }
            if e.rank() == dim {
                return e;
            }
        }
    }
    e
}

/// Action matrices of `gens` on the invariant subspace `sub` and on the
/// quotient, in echelon coordinates.
pub fn sub_and_quotient(f: &Field, gens: &[Mat], sub: &Echelon) -> (Vec<Mat>, Vec<Mat>) {
    let n = sub.ambient_dim();
    let k = sub.rank();
    let is_piv: Vec<bool> = (0..n).map(|c| sub.pivots().contains(&c)).collect();
    let non_piv: Vec<usize> = (0..n).filter(|&c| !is_piv[c]).collect();
    let mut subs = Vec::with_capacity(gens.len());
    let mut quots = Vec::with_capacity(gens.len());
    for g in gens {
        let mut sm = Mat::zeros(k, k);
        for (i, b) in sub.basis().iter().enumerate() {
            let img = vec_mat(f, b, g);
            for (j, c) in sub.coordinates(&img).into_iter().enumerate() {
                sm.set(i, j, c);
            }
        }
        let mut qm = Mat::zeros(n - k, n - k);
        for (i, &c) in non_piv.iter().enumerate() {
            let mut e = vec![0; n];
            e[c] = 1;
            let img = sub.reduce(f, &vec_mat(f, &e, g));
            for (j, &d) in non_piv.iter().enumerate() {
                qm.set(i, j, img[d]);
            }
        }
        subs.push(sm);
        quots.push(qm);
    }
    (subs, quots)
}

/// Basis of `{X : A_s X = X B_s for all s}` for square `A_s` (`n×n`) and `B_s` (`k×k`).
pub fn intertwiners(f: &Field, a: &[Mat], b: &[Mat]) -> Vec<Mat> {
    let n = a.first().map_or(0, |m| m.rows);
    let k = b.first().map_or(0, |m| m.rows);
    // unknown X[p][q] sits in column p*k + q; one equation per (s, i, j)
    let mut eq = Mat::zeros(a.len() * n * k, n * k);
    for (s, (am, bm)) in a.iter().zip(b).enumerate() {
        for i in 0..n {
            for j in 0..k {
                let r = (s * n + i) * k + j;
                for p in 0..n {
                    let c = am.get(i, p);
                    if c != 0 {
                        let col = p * k + j;
                        eq.set(r, col, f.add(eq.get(r, col), c));
                    }
                }
                for q in 0..k {
                    let c = bm.get(q, j);
                    if c != 0 {
                        let col = i * k + q;
                        eq.set(r, col, f.sub(eq.get(r, col), c));
                    }
                }
            }
        }
    }
    if a.is_empty() {
        return (0..n * k)
            .map(|c| {
                let mut m = Mat::zeros(n, k);
                m.set(c / k, c % k, 1);
                m
            })
            .collect();
    }
    eq.nullspace(f).into_iter().map(|v| Mat::from_vec(n, k, v)).collect()
}

/// Solve `A x = b` over `Q`; returns one solution or `None`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..=cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][cols].clone();
    }
    Some(x)
}
