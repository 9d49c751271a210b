//! Exact linear algebra over the integers and prime fields.
//!
//! Integer matrices use arbitrary-precision entries throughout; divided-power
//! coefficients and minor gcds overflow machine words already at moderate
//! highest weights. Normal forms are computed by elementary operations with
//! pivots chosen by minimal absolute value, which is entirely adequate at the
//! matrix sizes this crate works with (a few hundred rows).

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub type Int = BigInt;

/// Dense row-major integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            entries.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            entries: data.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Int> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c) + a * b;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix-vector product `m * v` with `v` a column vector.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Int::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = Int::zero();
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc += a * &v[c];
                }
            }
            out[r] = acc;
        }
        out
    }

    /// Divides every entry by `d` exactly; panics if any entry is not divisible.
    pub fn div_exact(&self, d: &Int) -> IntMatrix {
        assert!(!d.is_zero());
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| {
                    let (q, r) = e.div_rem(d);
                    assert!(r.is_zero(), "non-exact division by {d}");
                    q
                })
                .collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = (0..n).map(|r| self.row_vec(r)).collect();
        let mut sign = 1i64;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero());
                    a[i][j] = q;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact inverse as `(adj, det)` with `self * adj == det * I`.
    /// Fails when the determinant is zero.
    pub fn inverse_exact(&self) -> Result<(IntMatrix, Int)> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DegenerateGram);
        }
        // Rational Gauss-Jordan on [self | I], cleared to integers at the end.
        use num_rational::BigRational;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..2 * n)
                    .map(|c| {
                        if c < n {
                            BigRational::from(self.get(r, c).clone())
                        } else if c - n == r {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug[r][col].is_zero())
                .expect("nonsingular by det check");
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for c in col..2 * n {
                aug[col][c] = &aug[col][c] / &p;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..2 * n {
                        let v = &aug[r][c] - &f * &aug[col][c];
                        aug[r][c] = v;
                    }
                }
            }
        }
        let mut adj = IntMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                let v = &aug[r][n + c] * BigRational::from(det.clone());
                assert!(v.is_integer(), "adjugate entry not integral");
                adj.set(r, c, v.to_integer());
            }
        }
        Ok((adj, det))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // Entries as decimal strings: values exceed 53-bit floats.
        #[derive(Serialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<String>,
        }
        Repr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows * repr.cols {
            return Err(D::Error::custom("entry count does not match dimensions"));
        }
        let entries = repr
            .entries
            .iter()
            .map(|s| s.parse::<Int>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: repr.rows,
            cols: repr.cols,
            entries,
        })
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u` unimodular,
/// `u * m == h`, pivot entries positive, entries above each pivot reduced to
/// `[0, pivot)`, zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_row = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        // Eliminate below `pivot_row` in this column by gcd row operations.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h.get(r, col).is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if h.get(r, col).abs() < h.get(b, col).abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            swap_rows(&mut h, &mut u, pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = floor_div(h.get(r, col), h.get(pivot_row, col));
                if !q.is_zero() {
                    row_axpy(&mut h, &mut u, r, pivot_row, &-q);
                }
                if !h.get(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows && !h.get(pivot_row, col).is_zero() {
            if h.get(pivot_row, col).is_negative() {
                negate_row(&mut h, &mut u, pivot_row);
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }
    }
    // Reduce entries above each pivot.
    for &(pr, pc) in &pivots {
        for r in 0..pr {
            let q = floor_div(h.get(r, pc), h.get(pr, pc));
            if !q.is_zero() {
                row_axpy(&mut h, &mut u, r, pr, &-q);
            }
        }
    }
    (h, u)
}

fn swap_rows(h: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..h.cols() {
        let (x, y) = (h.get(a, c).clone(), h.get(b, c).clone());
        h.set(a, c, y);
        h.set(b, c, x);
    }
    for c in 0..u.cols() {
        let (x, y) = (u.get(a, c).clone(), u.get(b, c).clone());
        u.set(a, c, y);
        u.set(b, c, x);
    }
}

/// `row[dst] += f * row[src]` applied to both matrices.
fn row_axpy(h: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, f: &Int) {
    for c in 0..h.cols() {
        let v = h.get(dst, c) + f * h.get(src, c);
        h.set(dst, c, v);
    }
    for c in 0..u.cols() {
        let v = u.get(dst, c) + f * u.get(src, c);
        u.set(dst, c, v);
    }
}

fn negate_row(h: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for c in 0..h.cols() {
        let v = -h.get(r, c);
        h.set(r, c, v);
    }
    for c in 0..u.cols() {
        let v = -u.get(r, c);
        u.set(r, c, v);
    }
}

fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// Nonzero invariant factors of `m` in divisibility order (d1 | d2 | ...).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<Int> {
    let mut a: Vec<Vec<Int>> = (0..m.rows()).map(|r| m.row_vec(r)).collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut invariants: Vec<Int> = Vec::new();
    let mut top = 0usize;
    'outer: while top < rows && top < cols {
        // Find a nonzero pivot of minimal absolute value in the working block.
        let mut piv: Option<(usize, usize)> = None;
        for r in top..rows {
            for c in top..cols {
                if !a[r][c].is_zero() {
                    piv = match piv {
                        None => Some((r, c)),
                        Some((pr, pc)) => {
                            if a[r][c].abs() < a[pr][pc].abs() {
                                Some((r, c))
                            } else {
                                Some((pr, pc))
                            }
                        }
                    };
                }
            }
        }
        let Some((pr, pc)) = piv else { break 'outer };
        a.swap(top, pr);
        for row in a.iter_mut() {
            row.swap(top, pc);
        }
        loop {
            let mut clean = true;
            for r in top + 1..rows {
                if a[r][top].is_zero() {
                    continue;
                }
                let q = a[r][top].div_floor(&a[top][top]);
                if !q.is_zero() {
                    for c in top..cols {
                        let v = &a[r][c] - &q * &a[top][c];
                        a[r][c] = v;
                    }
                }
                if !a[r][top].is_zero() {
                    // Remainder smaller than pivot: promote it.
                    a.swap(top, r);
                    clean = false;
                }
            }
            for c in top + 1..cols {
                if a[top][c].is_zero() {
                    continue;
                }
                let q = a[top][c].div_floor(&a[top][top]);
                if !q.is_zero() {
                    for r in top..rows {
                        let v = &a[r][c] - &q * &a[r][top];
                        a[r][c] = v;
                    }
                }
                if !a[top][c].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(top, c);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        // The pivot must divide every remaining entry; if not, fold the
        // offending row in and restart elimination on this block.
        let mut fixed = true;
        'scan: for r in top + 1..rows {
            for c in top + 1..cols {
                if !(&a[r][c] % &a[top][top]).is_zero() {
                    for cc in top..cols {
                        let v = &a[top][cc] + &a[r][cc];
                        a[top][cc] = v;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue 'outer;
        }
        invariants.push(a[top][top].abs());
        top += 1;
    }
    invariants
}

/// Primality by trial division; the primes used in this crate are tiny.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense matrix over the prime field F_p with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(p: u64, rows: usize, cols: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ModMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn from_int_matrix(m: &IntMatrix, p: u64) -> Result<Self> {
        let mut out = ModMatrix::new(p, m.rows(), m.cols())?;
        let pp = Int::from(p);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c).mod_floor(&pp);
                out.set(r, c, u64::try_from(&v).expect("residue fits"));
            }
        }
        Ok(out)
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for v in r {
                entries.push(v % p);
            }
        }
        Ok(ModMatrix {
            p,
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat inverse; p is prime and tiny.
        mod_pow(a, self.p - 2, self.p)
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for cc in 0..self.cols {
                let (x, y) = (self.get(r, cc), self.get(pr, cc));
                self.set(r, cc, y);
                self.set(pr, cc, x);
            }
            let inv = self.inv(self.get(r, c));
            for cc in 0..self.cols {
                let v = self.get(r, cc) * inv % self.p;
                self.set(r, cc, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for cc in 0..self.cols {
                        let v =
                            (self.get(i, cc) + (self.p - f) * self.get(r, cc) % self.p) % self.p;
                        self.set(i, cc, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space `{v : self * v == 0}`, one vector per
    /// free column, in reduced echelon form (deterministic).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                let coeff = m.get(ri, free);
                if coeff != 0 {
                    v[pc] = self.p - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Canonical basis (RREF rows) of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
    }

    /// Solves `x * self == v` if possible, returning the coefficient vector.
    pub fn solve_left(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.cols);
        // Row-reduce [self | I] to express v in terms of the rows.
        let mut aug = ModMatrix::new(self.p, self.rows, self.cols + self.rows).unwrap();
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols + r, 1);
        }
        let mut r = 0usize;
        let mut pivots = Vec::new();
        for c in 0..self.cols {
            if r == aug.rows {
                break;
            }
            let Some(pr) = (r..aug.rows).find(|&i| aug.get(i, c) != 0) else {
                continue;
            };
            for cc in 0..aug.cols {
                let (x, y) = (aug.get(r, cc), aug.get(pr, cc));
                aug.set(r, cc, y);
                aug.set(pr, cc, x);
            }
            let inv = aug.inv(aug.get(r, c));
            for cc in 0..aug.cols {
                let val = aug.get(r, cc) * inv % self.p;
                aug.set(r, cc, val);
            }
            for i in 0..aug.rows {
                if i != r && aug.get(i, c) != 0 {
                    let f = aug.get(i, c);
                    for cc in 0..aug.cols {
                        let val =
                            (aug.get(i, cc) + (self.p - f) * aug.get(r, cc) % self.p) % self.p;
                        aug.set(i, cc, val);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Combine pivot rows to match v.
        let mut coeffs = vec![0u64; self.rows];
        let mut residue = v.to_vec();
        for (ri, &pc) in pivots.iter().enumerate() {
            let f = residue[pc] % self.p;
            if f != 0 {
                for c in 0..self.cols {
                    residue[c] = (residue[c] + (self.p - f) * aug.get(ri, c) % self.p) % self.p;
                }
                for rr in 0..self.rows {
                    coeffs[rr] =
                        (coeffs[rr] + f * aug.get(ri, self.cols + rr) % self.p) % self.p;
                }
            }
        }
        if residue.iter().all(|&x| x == 0) {
            Some(coeffs)
        } else {
            None
        }
    }
}

pub fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Rank of `m` reduced modulo the prime `p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    Ok(ModMatrix::from_int_matrix(m, p)?.rank())
}

/// Basis of the right null space of `m` over F_p.
pub fn kernel_mod_p(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    Ok(ModMatrix::from_int_matrix(m, p)?.kernel())
}

/// Intersection of subspaces of F_p^n, each given by a spanning set of rows.
/// Computed by iterated kernels of stacked dual constraints: the annihilator
/// of each span is joined, and the kernel of the joint constraint matrix is
/// the intersection.
pub fn intersect_mod_p(spans: &[Vec<Vec<u64>>], p: u64) -> Result<Vec<Vec<u64>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let dim = spans
        .first()
        .and_then(|s| s.first())
        .map(|v| v.len())
        .ok_or_else(|| Error::DimensionMismatch("empty span list".into()))?;
    let mut constraints: Vec<Vec<u64>> = Vec::new();
    for span in spans {
        for v in span {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "span vector length {} != ambient {}",
                    v.len(),
                    dim
                )));
            }
        }
        // Annihilator: kernel of the span matrix (column vectors x with
        // span * x = 0), added as rows of the constraint matrix.
        let m = ModMatrix::from_rows(p, span.clone())?;
        for ann in m.kernel() {
            constraints.push(ann);
        }
    }
    if constraints.is_empty() {
        // No constraints: intersection is the (common) full span.
        let m = ModMatrix::from_rows(p, spans[0].clone())?;
        return Ok(m.row_space_basis());
    }
    let cm = ModMatrix::from_rows(p, constraints)?;
    let raw = cm.kernel();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let m = ModMatrix::from_rows(p, raw)?;
    Ok(m.row_space_basis())
}
