//! Type-A Schur modules: Young diagrams, fillings, exchange-relation
//! straightening onto the tableau basis, the symmetrizer scalar, the induced
//! bilinear form, and the cross-check against the lattice pipeline.
//!
//! Conventions: a diagram is stored by its column lengths in decreasing
//! order, a filling stores each column top to bottom, and the column word
//! reads columns left to right, each bottom to top. Canonical fillings have
//! strictly increasing columns; a Young tableau additionally has weakly
//! increasing rows.

use crate::chevalley_ops::{Ambient, AmbientKind};
use crate::exact_linalg::{Int, IntMatrix};
use crate::root_data::{DiagramType, Weight};
use crate::{Caps, Error, Result};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

/// Young diagram stored as column lengths in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungDiagram {
    pub cols: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(mut cols: Vec<usize>) -> Self {
        cols.sort_unstable_by(|a, b| b.cmp(a));
        cols.retain(|&c| c > 0);
        YoungDiagram { cols }
    }

    /// Conjugate reading: row lengths, longest first.
    pub fn rows(&self) -> Vec<usize> {
        let height = self.cols.first().copied().unwrap_or(0);
        (0..height)
            .map(|r| self.cols.iter().filter(|&&c| c > r).count())
            .collect()
    }

    pub fn from_rows(rows: &[usize]) -> Self {
        let width = rows.first().copied().unwrap_or(0);
        YoungDiagram::new(
            (0..width)
                .map(|c| rows.iter().filter(|&&r| r > c).count())
                .collect(),
        )
    }

    pub fn boxes(&self) -> usize {
        self.cols.iter().sum()
    }
}

/// The diagram of a dominant weight: one column of length k per unit of the
/// k-th coefficient.
pub fn diagram_from_weight(lambda: &Weight) -> Result<YoungDiagram> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let mut cols = Vec::new();
    for (i, &c) in lambda.0.iter().enumerate().rev() {
        for _ in 0..c {
            cols.push(i + 1);
        }
    }
    Ok(YoungDiagram::new(cols))
}

/// A filling of a Young diagram; columns listed left to right, entries top
/// to bottom, values 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filling {
    pub cols: Vec<Vec<u8>>,
}

impl Filling {
    pub fn shape(&self) -> YoungDiagram {
        YoungDiagram {
            cols: self.cols.iter().map(|c| c.len()).collect(),
        }
    }

    /// Column word: columns left to right, each bottom to top.
    pub fn column_word(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for col in &self.cols {
            out.extend(col.iter().rev());
        }
        out
    }

    pub fn from_column_word(shape: &YoungDiagram, word: &[u8]) -> Self {
        assert_eq!(word.len(), shape.boxes());
        let mut cols = Vec::new();
        let mut pos = 0usize;
        for &len in &shape.cols {
            let mut col: Vec<u8> = word[pos..pos + len].to_vec();
            col.reverse();
            cols.push(col);
            pos += len;
        }
        Filling { cols }
    }

    /// Sorts each column, tracking the sign of the permutation; None when a
    /// column contains a repeated entry (the alternating relation kills it).
    pub fn canonicalize(&self) -> Option<(Filling, i64)> {
        let mut sign = 1i64;
        let mut cols = Vec::with_capacity(self.cols.len());
        for col in &self.cols {
            let mut idx: Vec<usize> = (0..col.len()).collect();
            idx.sort_by_key(|&i| col[i]);
            let sorted: Vec<u8> = idx.iter().map(|&i| col[i]).collect();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            sign *= perm_sign(&idx);
            cols.push(sorted);
        }
        Some((Filling { cols }, sign))
    }

    pub fn is_canonical(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.windows(2).all(|w| w[0] < w[1]))
    }

    /// Rows weakly increase and columns strictly increase.
    pub fn is_tableau(&self) -> bool {
        if !self.is_canonical() {
            return false;
        }
        for c in 0..self.cols.len().saturating_sub(1) {
            let (left, right) = (&self.cols[c], &self.cols[c + 1]);
            for r in 0..right.len() {
                if left[r] > right[r] {
                    return false;
                }
            }
        }
        true
    }

    /// Number of occurrences of each value 1..=m.
    pub fn content(&self, m: usize) -> Vec<usize> {
        let mut t = vec![0usize; m];
        for col in &self.cols {
            for &e in col {
                t[(e - 1) as usize] += 1;
            }
        }
        t
    }
}

impl fmt::Display for Filling {
    /// Row-wise format: `1 1 / 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let height = self.cols.first().map_or(0, |c| c.len());
        let mut rows = Vec::new();
        for r in 0..height {
            let row: Vec<String> = self
                .cols
                .iter()
                .filter(|c| c.len() > r)
                .map(|c| c[r].to_string())
                .collect();
            rows.push(row.join(" "));
        }
        write!(f, "{}", rows.join(" / "))
    }
}

fn perm_sign(idx: &[usize]) -> i64 {
    let mut seen = vec![false; idx.len()];
    let mut sign = 1i64;
    for start in 0..idx.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = idx[cur];
            len += 1;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    sign
}

/// Sparse integer combination of canonical fillings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchurVector {
    pub terms: BTreeMap<Filling, Int>,
}

impl SchurVector {
    pub fn zero() -> Self {
        SchurVector::default()
    }

    pub fn single(f: Filling, c: Int) -> Self {
        let mut v = SchurVector::zero();
        v.add_term(f, c);
        v
    }

    pub fn add_term(&mut self, f: Filling, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(f).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SchurVector, c: &Int) {
        for (f, v) in &other.terms {
            self.add_term(f.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for SchurVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (filling, c) in &self.terms {
            let word: Vec<String> = filling.column_word().iter().map(u8::to_string).collect();
            if first {
                write!(f, "{c} a({})", word.join(","))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {} a({})", -c.clone(), word.join(","))?;
            } else {
                write!(f, " + {c} a({})", word.join(","))?;
            }
        }
        Ok(())
    }
}

/// The terms of one exchange relation: the fixed boxes are the top `s` boxes
/// of column `right`, exchanged against every `s`-subset of column `left`,
/// preserving relative order. The relation states that the input filling
/// equals the sum of the returned fillings (before canonicalization).
pub fn exchange_terms(f: &Filling, left: usize, right: usize, s: usize) -> Vec<Filling> {
    let lcol = &f.cols[left];
    let rcol = &f.cols[right];
    assert!(s >= 1 && s <= rcol.len() && s <= lcol.len());
    let moved: Vec<u8> = rcol[..s].to_vec();
    let mut out = Vec::new();
    for subset in subsets_of(lcol.len(), s) {
        let mut newl = lcol.clone();
        let mut extracted = Vec::with_capacity(s);
        for (t, &pos) in subset.iter().enumerate() {
            extracted.push(newl[pos]);
            newl[pos] = moved[t];
        }
        let mut newr = rcol.clone();
        newr[..s].copy_from_slice(&extracted);
        let mut cols = f.cols.clone();
        cols[left] = newl;
        cols[right] = newr;
        out.push(Filling { cols });
    }
    out
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Memoized straightening context; one instance per shape is enough.
#[derive(Default)]
pub struct Straightener {
    memo: HashMap<Filling, SchurVector>,
    in_progress: HashSet<Filling>,
}

impl Straightener {
    pub fn new() -> Self {
        Straightener::default()
    }

    /// Rewrites a filling into the tableau basis. The result is supported on
    /// Young tableaux only and the procedure is idempotent on its image.
    pub fn straighten(&mut self, f: &Filling) -> SchurVector {
        match f.canonicalize() {
            None => SchurVector::zero(),
            Some((canon, sign)) => {
                let v = self.straighten_canonical(&canon);
                let mut out = SchurVector::zero();
                out.add_scaled(&v, &Int::from(sign));
                out
            }
        }
    }

    pub fn straighten_vector(&mut self, v: &SchurVector) -> SchurVector {
        let mut out = SchurVector::zero();
        for (f, c) in &v.terms {
            let s = self.straighten(f);
            out.add_scaled(&s, c);
        }
        out
    }

    fn straighten_canonical(&mut self, f: &Filling) -> SchurVector {
        if let Some(v) = self.memo.get(f) {
            return v.clone();
        }
        // Leftmost column pair, topmost row violating weak row increase.
        let mut violation: Option<(usize, usize)> = None;
        'find: for c in 0..f.cols.len().saturating_sub(1) {
            for r in 0..f.cols[c + 1].len() {
                if f.cols[c][r] > f.cols[c + 1][r] {
                    violation = Some((c, r));
                    break 'find;
                }
            }
        }
        let Some((c, r)) = violation else {
            let v = SchurVector::single(f.clone(), Int::one());
            self.memo.insert(f.clone(), v.clone());
            return v;
        };
        assert!(
            self.in_progress.insert(f.clone()),
            "straightening cycle at {f}"
        );
        // Exchange the violating prefix (rows 0..=r of the right column).
        let mut acc = SchurVector::zero();
        for y in exchange_terms(f, c, c + 1, r + 1) {
            if let Some((canon, sign)) = y.canonicalize() {
                let v = self.straighten_canonical(&canon);
                acc.add_scaled(&v, &Int::from(sign));
            }
        }
        self.in_progress.remove(f);
        self.memo.insert(f.clone(), acc.clone());
        acc
    }
}

/// One-shot straightening with a fresh memo table.
pub fn straighten(f: &Filling) -> SchurVector {
    Straightener::new().straighten(f)
}

/// All Young tableaux of the given shape with entries in 1..=m, in
/// lexicographic column-word order. Empty when m is smaller than the longest
/// column.
pub fn tableau_basis(shape: &YoungDiagram, m: usize) -> Vec<Filling> {
    let mut out = Vec::new();
    let ncols = shape.cols.len();
    if ncols == 0 {
        return vec![Filling { cols: vec![] }];
    }
    let mut cols: Vec<Vec<u8>> = Vec::new();
    fn rec(shape: &YoungDiagram, m: usize, cols: &mut Vec<Vec<u8>>, out: &mut Vec<Filling>) {
        let c = cols.len();
        if c == shape.cols.len() {
            out.push(Filling { cols: cols.clone() });
            return;
        }
        let len = shape.cols[c];
        let mut col = vec![0u8; len];
        fn fill(
            shape: &YoungDiagram,
            m: usize,
            cols: &mut Vec<Vec<u8>>,
            col: &mut Vec<u8>,
            r: usize,
            out: &mut Vec<Filling>,
        ) {
            let c = cols.len();
            if r == col.len() {
                cols.push(col.clone());
                rec(shape, m, cols, out);
                cols.pop();
                return;
            }
            let min_col = if r == 0 { 1 } else { col[r - 1] + 1 };
            let min_row = if c == 0 { 1 } else { cols[c - 1][r] };
            let lo = min_col.max(min_row);
            for e in lo..=(m as u8) {
                col[r] = e;
                fill(shape, m, cols, col, r + 1, out);
            }
        }
        fill(shape, m, cols, &mut col, 0, out);
    }
    rec(shape, m, &mut cols, &mut out);
    out.sort_by_key(|f| f.column_word());
    out
}

// ---------------------------------------------------------------------------
// Symmetric-group machinery for the symmetrizer scalar and the induced form.
// ---------------------------------------------------------------------------

type Perm = Vec<u8>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v as usize] = i as u8;
    }
    out
}

fn perm_sign_u8(p: &Perm) -> i64 {
    let idx: Vec<usize> = p.iter().map(|&v| v as usize).collect();
    perm_sign(&idx)
}

/// Word positions of each column (the numbering follows the column word).
fn column_blocks(shape: &YoungDiagram) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for &len in &shape.cols {
        out.push((pos..pos + len).collect());
        pos += len;
    }
    out
}

/// Word positions of each row. In the column word, column c occupies
/// positions bottom to top, so the box in row r (0-based from the top) of
/// column c sits at offset (len_c - 1 - r).
fn row_blocks(shape: &YoungDiagram) -> Vec<Vec<usize>> {
    let height = shape.cols.first().copied().unwrap_or(0);
    let mut out = vec![Vec::new(); height];
    let mut pos = 0usize;
    for &len in &shape.cols {
        for r in 0..len {
            out[r].push(pos + len - 1 - r);
        }
        pos += len;
    }
    out
}

/// All permutations fixing each block setwise, as full permutations of d.
fn block_subgroup(d: usize, blocks: &[Vec<usize>]) -> Vec<Perm> {
    let mut result: Vec<Perm> = vec![(0..d as u8).collect()];
    for block in blocks {
        let perms = all_perms(block.len());
        let mut next = Vec::with_capacity(result.len() * perms.len());
        for base in &result {
            for p in &perms {
                let mut q = base.clone();
                for (t, &src) in p.iter().enumerate() {
                    q[block[t]] = base[block[src as usize]];
                }
                next.push(q);
            }
        }
        result = next;
    }
    result
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..n as u8).collect();
    fn heap(k: usize, cur: &mut Perm, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Precomputed data for symmetrizer computations on one shape.
pub struct ShapeContext {
    pub shape: YoungDiagram,
    pub d: usize,
    col_group: Vec<Perm>,
    /// Support of the symmetrizer: products (column element) * (row element)
    /// with the column sign. The products are pairwise distinct.
    symmetrizer: HashMap<Perm, i64>,
}

impl ShapeContext {
    pub fn new(shape: &YoungDiagram, caps: &Caps) -> Result<Self> {
        let d = shape.boxes();
        if d > caps.max_boxes {
            return Err(Error::CapExceeded {
                what: "diagram boxes".into(),
                needed: d,
                cap: caps.max_boxes,
            });
        }
        let col_group = block_subgroup(d, &column_blocks(shape));
        let row_group = block_subgroup(d, &row_blocks(shape));
        let mut symmetrizer = HashMap::with_capacity(col_group.len() * row_group.len());
        for g in &col_group {
            let sg = perm_sign_u8(g);
            for r in &row_group {
                let prod = compose(g, r);
                let prev = symmetrizer.insert(prod, sg);
                assert!(prev.is_none(), "column-row factorizations are unique");
            }
        }
        Ok(ShapeContext {
            shape: shape.clone(),
            d,
            col_group,
            symmetrizer,
        })
    }

    /// The scalar k with (symmetrizer)^2 = k * symmetrizer, read off as the
    /// coefficient of the identity: sum over the support of c_g * c_{g^-1}.
    pub fn k_lambda(&self) -> Int {
        let mut acc = Int::zero();
        for (g, &c) in &self.symmetrizer {
            if let Some(&c2) = self.symmetrizer.get(&invert(g)) {
                acc += Int::from(c) * Int::from(c2);
            }
        }
        acc
    }

    /// The induced form on basis vectors indexed by fillings, for the
    /// orthonormal natural form: a signed count over the triple sum
    /// (column) x (row) x (column) of permutations carrying one filling to
    /// the other.
    pub fn form(&self, s: &Filling, t: &Filling) -> Int {
        let sw = s.column_word();
        let tw = t.column_word();
        assert_eq!(sw.len(), self.d);
        assert_eq!(tw.len(), self.d);
        // map from the word s o sigma (sigma in the symmetrizer support) to the
        // accumulated coefficient; then sum over the trailing column factor.
        let mut map: HashMap<Vec<u8>, Int> = HashMap::new();
        for (sigma, &c) in &self.symmetrizer {
            let key: Vec<u8> = sigma.iter().map(|&i| sw[i as usize]).collect();
            *map.entry(key).or_insert_with(Int::zero) += Int::from(c);
        }
        let mut acc = Int::zero();
        for gt in &self.col_group {
            let sgn = perm_sign_u8(gt);
            let ginv = invert(gt);
            let key: Vec<u8> = ginv.iter().map(|&i| tw[i as usize]).collect();
            if let Some(v) = map.get(&key) {
                acc += v * Int::from(sgn);
            }
        }
        acc
    }

    /// Gram matrix of the induced form on a list of fillings.
    pub fn form_gram(&self, basis: &[Filling]) -> IntMatrix {
        let mut z = IntMatrix::zero(basis.len(), basis.len());
        for (i, s) in basis.iter().enumerate() {
            let sw = s.column_word();
            let mut map: HashMap<Vec<u8>, Int> = HashMap::new();
            for (sigma, &c) in &self.symmetrizer {
                let key: Vec<u8> = sigma.iter().map(|&i| sw[i as usize]).collect();
                *map.entry(key).or_insert_with(Int::zero) += Int::from(c);
            }
            for (j, t) in basis.iter().enumerate() {
                let tw = t.column_word();
                let mut acc = Int::zero();
                for gt in &self.col_group {
                    let sgn = perm_sign_u8(gt);
                    let ginv = invert(gt);
                    let key: Vec<u8> = ginv.iter().map(|&i| tw[i as usize]).collect();
                    if let Some(v) = map.get(&key) {
                        acc += v * Int::from(sgn);
                    }
                }
                z.set(i, j, acc);
            }
        }
        z
    }
}

/// The symmetrizer scalar of a diagram.
pub fn k_lambda(shape: &YoungDiagram, caps: &Caps) -> Result<Int> {
    Ok(ShapeContext::new(shape, caps)?.k_lambda())
}

/// The induced form on two fillings of the same shape (orthonormal natural
/// form), by direct triple-sum evaluation.
pub fn schur_form(s: &Filling, t: &Filling, caps: &Caps) -> Result<Int> {
    let shape = s.shape();
    if shape != t.shape() {
        return Err(Error::DimensionMismatch("fillings of different shapes".into()));
    }
    Ok(ShapeContext::new(&shape, caps)?.form(s, t))
}

// ---------------------------------------------------------------------------
// The tableau-coordinate module model.
// ---------------------------------------------------------------------------

/// Derivation action of the elementary operator sending value `from` to
/// value `to` on a filling basis vector, straightened into the tableau basis.
fn elementary_action(
    st: &mut Straightener,
    f: &Filling,
    to: u8,
    from: u8,
) -> SchurVector {
    let mut acc = SchurVector::zero();
    for (c, col) in f.cols.iter().enumerate() {
        for (r, &e) in col.iter().enumerate() {
            if e == from {
                let mut cols = f.cols.clone();
                cols[c][r] = to;
                let v = st.straighten(&Filling { cols });
                acc.add_scaled(&v, &Int::one());
            }
        }
    }
    acc
}

/// Builds the tableau-coordinate module of a dominant type-A weight: basis
/// indexed by Young tableaux with entries in 1..=rank+1, integral operator
/// matrices obtained by derivation plus straightening, and (when the box
/// count is within the group-ring cap) the raw symmetrizer Gram with its
/// normalization scalar.
pub fn tableau_ambient(rank: usize, lambda: &Weight, caps: &Caps) -> Result<Ambient> {
    if lambda.rank() != rank {
        return Err(Error::DimensionMismatch(format!(
            "weight rank {} vs diagram rank {}",
            lambda.rank(),
            rank
        )));
    }
    let rs = crate::root_data::build_root_system(DiagramType::A, rank)?;
    let nm = crate::chevalley_ops::natural_module(DiagramType::A, rank)?;
    let shape = diagram_from_weight(lambda)?;
    let m = rank + 1;
    let basis_raw = tableau_basis(&shape, m);
    if basis_raw.is_empty() {
        return Err(Error::InvalidDegrees {
            dtype: 'A',
            rank,
            kset: shape.cols.clone(),
            reason: "diagram has columns longer than rank+1".into(),
        });
    }
    if basis_raw.len() > caps.max_ambient {
        return Err(Error::CapExceeded {
            what: "ambient dimension".into(),
            needed: basis_raw.len(),
            cap: caps.max_ambient,
        });
    }

    let weight_of = |f: &Filling| -> Weight {
        let content = f.content(m);
        let mut w = vec![0i64; rank];
        for (i, &t) in content.iter().enumerate() {
            for j in 0..rank {
                w[j] += t as i64 * nm.weights[i].0[j];
            }
        }
        Weight(w)
    };

    let mut decorated: Vec<(i64, Vec<u8>, Filling)> = basis_raw
        .into_iter()
        .map(|f| {
            let w = weight_of(&f);
            let drop = rs
                .drop_height(lambda, &w)
                .expect("tableau weight lies under lambda");
            let word = f.column_word();
            (drop, word, f)
        })
        .collect();
    decorated.sort();
    let basis: Vec<Filling> = decorated.iter().map(|(_, _, f)| f.clone()).collect();
    let drops: Vec<i64> = decorated.iter().map(|(d, _, _)| *d).collect();
    let weights: Vec<Weight> = basis.iter().map(&weight_of).collect();
    assert_eq!(drops[0], 0, "highest tableau sorts first");
    assert_eq!(drops.iter().filter(|&&d| d == 0).count(), 1);
    let index: HashMap<Filling, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();

    let dim = basis.len();
    let mut st = Straightener::new();
    let mut op_matrix = |to: u8, from: u8| -> IntMatrix {
        let mut mat = IntMatrix::zero(dim, dim);
        for (col_idx, f) in basis.iter().enumerate() {
            let image = elementary_action(&mut st, f, to, from);
            for (g, c) in &image.terms {
                let row = *index
                    .get(g)
                    .expect("straightened image stays in the tableau basis");
                let v = mat.get(row, col_idx) + c;
                mat.set(row, col_idx, v);
            }
        }
        mat
    };

    // Positive roots of A_n are eps_i - eps_j with i < j; the raising
    // operator replaces value j by value i.
    let mut x_ops = Vec::new();
    let mut y_ops = Vec::new();
    for coords in &rs.positive_roots {
        let i = coords.iter().position(|&c| c != 0).unwrap();
        let j = coords.iter().rposition(|&c| c != 0).unwrap() + 1;
        let (from, to) = ((j + 1) as u8, (i + 1) as u8);
        x_ops.push(op_matrix(to, from));
        y_ops.push(op_matrix(from, to));
    }

    let tableau_form = if shape.boxes() <= caps.max_boxes {
        let ctx = ShapeContext::new(&shape, caps)?;
        Some((ctx.form_gram(&basis), ctx.k_lambda()))
    } else {
        None
    };

    let labels: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
    Ok(Ambient {
        rs,
        kind: AmbientKind::Tableau {
            shape_cols: shape.cols.clone(),
        },
        dim,
        labels,
        weights,
        drops,
        x_ops,
        y_ops,
        lambda: lambda.clone(),
        vplus: 0,
        zeta_wedge: None,
        orthonormal: false,
        tableau_form,
        basis_tuples: None,
    })
}

// ---------------------------------------------------------------------------
// Cross-check against the lattice pipeline.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SchurPrimeEntry {
    #[serde(rename = "dimL_schur")]
    pub dim_l_schur: usize,
    #[serde(rename = "dimL_weyl")]
    pub dim_l_weyl: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchurReport {
    pub shape_rows: Vec<usize>,
    pub m: usize,
    pub dim: usize,
    pub k_lambda: String,
    /// Smith invariants of the normalized symmetrizer Gram on the minimal
    /// lattice, run-length encoded.
    pub snf: String,
    pub weyl_dim: usize,
    pub snf_weyl: String,
    pub invariants_match: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
    pub highest_tableau_norm_is_k: bool,
    pub primes: BTreeMap<String, SchurPrimeEntry>,
}

/// Builds the module twice, through the symmetrizer form and through the
/// contravariance recursion, and compares ranks, Smith invariants, and
/// modular dimensions.
///
/// The symmetrizer route computes the raw induced form on the tableau basis,
/// restricts it to the minimal lattice, and divides by the normalization
/// scalar, verifying integrality of the quotient. The lattice route is the
/// generic pipeline: for multiplicity-free weights it runs in the
/// wedge-tensor model, otherwise in the tableau model (where the recursion
/// is still independent of the symmetrizer evaluation).
pub fn schur_vs_weyl_check(
    rank: usize,
    lambda: &Weight,
    primes: &[u64],
    caps: &Caps,
) -> Result<SchurReport> {
    let shape = diagram_from_weight(lambda)?;
    let m = rank + 1;
    let ctx = ShapeContext::new(&shape, caps)?;
    let k = ctx.k_lambda();

    // Symmetrizer route.
    let tab_ambient = tableau_ambient(rank, lambda, caps)?;
    let tab_lattice = crate::weyl_module::generate_lattice(&tab_ambient, caps)?;
    let (z, _) = tab_ambient
        .tableau_form
        .as_ref()
        .expect("shape within box cap");
    let raw = tab_lattice.basis.mul(z).mul(&tab_lattice.basis.transpose());
    // Integrality of the normalized form on the minimal lattice is a
    // theorem; div_exact re-verifies it entry by entry.
    let schur_gram = raw.div_exact(&k);
    let schur_smith = crate::exact_linalg::smith_normal_form(&schur_gram);

    // Highest-tableau normalization.
    let highest = tab_ambient_basis_highest(&tab_ambient);
    let diag = ctx.form(&highest, &highest);
    let highest_ok = diag == k && {
        // Off-diagonal entries against the highest tableau vanish.
        let basis = tableau_basis(&shape, m);
        basis
            .iter()
            .filter(|t| **t != highest)
            .all(|t| ctx.form(&highest, t).is_zero())
    };

    // Lattice route.
    let multiplicity_free = lambda.0.iter().all(|&c| c <= 1);
    let (weyl_lattice_rank, weyl_smith, weyl_gram) = if multiplicity_free {
        let nodes: Vec<usize> = lambda
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i + 1)
            .collect();
        let amb = crate::chevalley_ops::wedge_tensor_ambient(DiagramType::A, rank, &nodes, caps)?;
        let lat = crate::weyl_module::generate_lattice(&amb, caps)?;
        let gram = crate::weyl_module::contravariant_gram(&lat);
        let smith = gram.smith_invariants().to_vec();
        (lat.rank(), smith, gram)
    } else {
        let gram = crate::weyl_module::contravariant_gram(&tab_lattice);
        let smith = gram.smith_invariants().to_vec();
        (tab_lattice.rank(), smith, gram)
    };

    let invariants_match = schur_smith == weyl_smith && tab_lattice.rank() == weyl_lattice_rank;
    let mismatch = if invariants_match {
        None
    } else {
        let detail = schur_smith
            .iter()
            .zip(&weyl_smith)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| format!("invariant {i}: {a} vs {b}"))
            .unwrap_or_else(|| {
                format!(
                    "rank {} vs {} or invariant count {} vs {}",
                    tab_lattice.rank(),
                    weyl_lattice_rank,
                    schur_smith.len(),
                    weyl_smith.len()
                )
            });
        Some(detail)
    };

    let mut primes_out = BTreeMap::new();
    for &p in primes {
        let ds = crate::exact_linalg::rank_mod_p(&schur_gram, p)?;
        let dw = crate::weyl_module::modular_dim(&weyl_gram, p)?;
        primes_out.insert(
            p.to_string(),
            SchurPrimeEntry {
                dim_l_schur: ds,
                dim_l_weyl: dw,
            },
        );
    }

    Ok(SchurReport {
        shape_rows: shape.rows(),
        m,
        dim: tab_lattice.rank(),
        k_lambda: k.to_string(),
        snf: crate::weyl_module::smith_string(&schur_smith),
        weyl_dim: weyl_lattice_rank,
        snf_weyl: crate::weyl_module::smith_string(&weyl_smith),
        invariants_match,
        mismatch,
        highest_tableau_norm_is_k: highest_ok,
        primes: primes_out,
    })
}

fn tab_ambient_basis_highest(ambient: &Ambient) -> Filling {
    // The highest tableau has row r filled with r+1; reconstruct it from the
    // ambient shape.
    let AmbientKind::Tableau { shape_cols } = &ambient.kind else {
        panic!("tableau ambient expected");
    };
    let cols: Vec<Vec<u8>> = shape_cols
        .iter()
        .map(|&len| (1..=len as u8).collect())
        .collect();
    Filling { cols }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filling(cols: Vec<Vec<u8>>) -> Filling {
        Filling { cols }
    }

    #[test]
    fn diagram_from_weights() {
        let d = diagram_from_weight(&Weight(vec![1, 1])).unwrap();
        assert_eq!(d.cols, vec![2, 1]);
        assert_eq!(d.rows(), vec![2, 1]);
        let d = diagram_from_weight(&Weight(vec![0, 0, 1])).unwrap();
        assert_eq!(d.cols, vec![3]);
        let d = diagram_from_weight(&Weight(vec![2, 0])).unwrap();
        assert_eq!(d.cols, vec![1, 1]);
        assert!(diagram_from_weight(&Weight(vec![-1, 2])).is_err());
    }

    #[test]
    fn five_box_exchange_matches_signed_expansion() {
        // Filling with column word (v1..v5) = (1,2,3,4,5): columns of
        // lengths 3 and 2; exchanging the full right column against 2-subsets
        // of the left column yields three signed terms after sorting.
        let shape = YoungDiagram::new(vec![3, 2]);
        let x = Filling::from_column_word(&shape, &[1, 2, 3, 4, 5]);
        let terms = exchange_terms(&x, 0, 1, 2);
        assert_eq!(terms.len(), 3);
        let mut canon: Vec<(Vec<u8>, i64)> = terms
            .iter()
            .map(|t| {
                let (c, s) = t.canonicalize().unwrap();
                (c.column_word(), s)
            })
            .collect();
        canon.sort();
        // Signed terms in canonical (column-sorted) form: the three terms
        // carry signs +, -, + exactly as in the defining expansion.
        assert_eq!(
            canon,
            vec![
                (vec![5, 4, 1, 3, 2], 1),
                (vec![5, 4, 2, 3, 1], -1),
                (vec![5, 4, 3, 2, 1], 1),
            ]
        );
    }

    #[test]
    fn straighten_basics() {
        // Repeated entry in a column: zero.
        let f = filling(vec![vec![1, 1], vec![2]]);
        assert!(straighten(&f).is_zero());
        // A standard tableau straightens to itself.
        let t = filling(vec![vec![1, 2], vec![1]]);
        let v = straighten(&t);
        assert_eq!(v.terms.len(), 1);
        assert_eq!(v.terms[&t], Int::one());
        // Column transposition negates.
        let swapped = filling(vec![vec![2, 1], vec![1]]);
        let vs = straighten(&swapped);
        assert_eq!(vs.terms[&t], Int::from(-1));
    }

    #[test]
    fn straighten_plucker() {
        // Column words (shape 2,2): a(14|23) = a(13|24) - a(12|34) in sorted
        // column form.
        let f = filling(vec![vec![1, 4], vec![2, 3]]);
        let v = straighten(&f);
        let t1 = filling(vec![vec![1, 3], vec![2, 4]]);
        let t2 = filling(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(v.terms.len(), 2);
        assert_eq!(v.terms[&t1], Int::one());
        assert_eq!(v.terms[&t2], Int::from(-1));
    }

    #[test]
    fn straighten_idempotent_small_sweep() {
        // Exhaustive idempotence on small shapes.
        for cols in [vec![2, 1], vec![2, 2], vec![1, 1, 1], vec![3, 1]] {
            let shape = YoungDiagram::new(cols);
            let d = shape.boxes();
            let m = 3u8;
            let mut st = Straightener::new();
            let mut word = vec![1u8; d];
            loop {
                let f = Filling::from_column_word(&shape, &word);
                let v = st.straighten(&f);
                for (t, _) in &v.terms {
                    assert!(t.is_tableau(), "non-tableau {t} in straightened output");
                }
                let again = st.straighten_vector(&v);
                assert_eq!(again, v, "straightening not idempotent on {f}");
                // next word
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    if word[i] < m {
                        word[i] += 1;
                        break;
                    }
                    word[i] = 1;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
        }
    }

    #[test]
    fn tableau_counts() {
        let shape = YoungDiagram::new(vec![2, 1]);
        assert_eq!(tableau_basis(&shape, 3).len(), 8);
        let col3 = YoungDiagram::new(vec![3]);
        assert_eq!(tableau_basis(&col3, 4).len(), 4);
        let row2 = YoungDiagram::new(vec![1, 1]);
        assert_eq!(tableau_basis(&row2, 2).len(), 3);
        // m below the longest column: empty.
        assert!(tableau_basis(&col3, 2).is_empty());
    }

    /// Dense group-ring brute force: multiply the symmetrizer by itself and
    /// read off the proportionality scalar on the full support.
    fn k_lambda_bruteforce(shape: &YoungDiagram) -> Int {
        let d = shape.boxes();
        let col = block_subgroup(d, &column_blocks(shape));
        let row = block_subgroup(d, &row_blocks(shape));
        let mut sigma: HashMap<Perm, Int> = HashMap::new();
        for g in &col {
            let s = perm_sign_u8(g);
            for r in &row {
                *sigma.entry(compose(g, r)).or_insert_with(Int::zero) += Int::from(s);
            }
        }
        let mut square: HashMap<Perm, Int> = HashMap::new();
        for (g, c) in &sigma {
            for (h, e) in &sigma {
                *square.entry(compose(g, h)).or_insert_with(Int::zero) += c * e;
            }
        }
        // square == k * sigma; find k from any nonzero sigma coefficient and
        // verify proportionality.
        let (g0, c0) = sigma.iter().find(|(_, c)| !c.is_zero()).unwrap();
        let k = square.get(g0).cloned().unwrap_or_else(Int::zero) / c0;
        for (g, c) in &sigma {
            let sq = square.get(g).cloned().unwrap_or_else(Int::zero);
            assert_eq!(sq, c * &k);
        }
        k
    }

    #[test]
    fn k_lambda_values() {
        let caps = Caps::default();
        for (cols, want) in [
            (vec![3], 6i64),
            (vec![1, 1, 1], 6),
            (vec![2, 1], 3),
            (vec![2, 2], 12),
        ] {
            let shape = YoungDiagram::new(cols);
            let k = k_lambda(&shape, &caps).unwrap();
            assert_eq!(k, Int::from(want));
            assert_eq!(k, k_lambda_bruteforce(&shape));
        }
        let too_big = YoungDiagram::new(vec![3, 3, 3]);
        assert!(k_lambda(&too_big, &caps).is_err());
    }

    #[test]
    fn form_highest_tableau() {
        let caps = Caps::default();
        let shape = YoungDiagram::new(vec![2, 1]);
        let highest = filling(vec![vec![1, 2], vec![1]]);
        let k = k_lambda(&shape, &caps).unwrap();
        assert_eq!(schur_form(&highest, &highest, &caps).unwrap(), k);
        for t in tableau_basis(&shape, 3) {
            if t != highest {
                assert!(schur_form(&highest, &t, &caps).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn schur_weyl_adjoint() {
        let caps = Caps::default();
        let report = schur_vs_weyl_check(2, &Weight(vec![1, 1]), &[2, 3], &caps).unwrap();
        assert_eq!(report.dim, 8);
        assert_eq!(report.weyl_dim, 8);
        assert!(report.invariants_match);
        assert_eq!(report.k_lambda, "3");
        assert_eq!(report.snf, "1^7,3");
        assert!(report.highest_tableau_norm_is_k);
        assert_eq!(report.primes["3"].dim_l_schur, 7);
        assert_eq!(report.primes["3"].dim_l_weyl, 7);
        assert_eq!(report.primes["2"].dim_l_schur, 8);
    }

    #[test]
    fn schur_weyl_sl2_cubic() {
        let caps = Caps::default();
        let report = schur_vs_weyl_check(1, &Weight(vec![3]), &[2, 3], &caps).unwrap();
        assert_eq!(report.dim, 4);
        assert!(report.invariants_match);
        assert_eq!(report.snf, "1^2,3^2");
    }

    #[test]
    fn schur_weyl_minuscule_columns() {
        let caps = Caps::default();
        for k in 1..=3usize {
            let mut lam = vec![0i64; 3];
            lam[k - 1] = 1;
            let report = schur_vs_weyl_check(3, &Weight(lam), &[2, 3], &caps).unwrap();
            assert!(report.invariants_match, "column {k}");
            let want: usize = binom(4, k);
            assert_eq!(report.dim, want);
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn action_commutes_with_straightening() {
        // Acting then straightening equals straightening then acting, on a
        // sweep of fillings for the rank-2 diagram.
        let shape = YoungDiagram::new(vec![2, 1]);
        let mut st = Straightener::new();
        let mut word = vec![1u8; 3];
        loop {
            let f = Filling::from_column_word(&shape, &word);
            for (to, from) in [(1u8, 2u8), (2, 3), (1, 3), (2, 1), (3, 2), (3, 1)] {
                // act on the raw filling then straighten
                let mut raw = SchurVector::zero();
                for (c, col) in f.cols.iter().enumerate() {
                    for (r, &e) in col.iter().enumerate() {
                        if e == from {
                            let mut cols = f.cols.clone();
                            cols[c][r] = to;
                            raw.add_term(Filling { cols }, Int::one());
                        }
                    }
                }
                let route1 = st.straighten_vector(&raw);
                // straighten then act term by term
                let sf = st.straighten(&f);
                let mut route2 = SchurVector::zero();
                for (t, c) in &sf.terms {
                    let img = elementary_action(&mut st, t, to, from);
                    route2.add_scaled(&img, c);
                }
                assert_eq!(route1, route2, "operators commute with straightening");
            }
            let mut i = 0;
            loop {
                if i == 3 {
                    break;
                }
                if word[i] < 3 {
                    word[i] += 1;
                    break;
                }
                word[i] = 1;
                i += 1;
            }
            if i == 3 {
                break;
            }
        }
    }
}
