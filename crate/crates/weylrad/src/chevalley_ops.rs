//! Concrete Chevalley bases acting on the natural modules of types A, B, C, D
//! and on tensor products of exterior powers of those modules.
//!
//! Root vectors are integer matrices. For C and D the negative root vector is
//! the transpose of the positive one; for B it is the transpose twisted by the
//! diagonal matrix diag(2, 1, ..., 1); for A it is the plain transpose. The
//! whole basis is verified at construction time: simple commutators produce
//! the coroots, structure constants have the prescribed magnitudes, the
//! generators annihilate the defining bilinear form, and every divided power
//! is integral.

use crate::exact_linalg::{Int, IntMatrix};
use crate::root_data::{DiagramType, RootSystem, Weight};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// A positive root index paired with a sign selecting X (raising) or Y
/// (lowering).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignedRoot {
    Positive(usize),
    Negative(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpLabel {
    /// Raising operator for the positive root with this index.
    X(usize),
    /// Lowering operator for the positive root with this index.
    Y(usize),
    /// Coroot operator for the simple root with this index (0-based).
    H(usize),
}

/// A Chevalley basis element realized as an integer matrix on the natural
/// module.
#[derive(Debug, Clone)]
pub struct ChevalleyOperator {
    pub label: OpLabel,
    pub matrix: IntMatrix,
}

/// Natural module with its defining form and the full set of root operators.
#[derive(Debug, Clone)]
pub struct NaturalModule {
    pub diagram_type: DiagramType,
    pub rank: usize,
    pub dim: usize,
    /// Defining bilinear form: identity for type A (orthonormal basis), the
    /// standard block forms for B, C, D.
    pub zeta: IntMatrix,
    pub basis_labels: Vec<String>,
    pub x_ops: Vec<IntMatrix>,
    pub y_ops: Vec<IntMatrix>,
    /// Simple coroot operators, diagonal on the natural basis.
    pub h_ops: Vec<IntMatrix>,
    /// Weight of each natural basis vector in fundamental coordinates.
    pub weights: Vec<Weight>,
}

fn elementary(dim: usize, r: usize, c: usize, v: i64) -> IntMatrix {
    let mut m = IntMatrix::zero(dim, dim);
    m.set(r, c, Int::from(v));
    m
}

fn madd(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = a.clone();
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let v = out.get(r, c) + b.get(r, c);
            out.set(r, c, v);
        }
    }
    out
}

fn commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.mul(b).sub(&b.mul(a))
}

/// Epsilon-space form of a positive root given in simple-root coordinates.
/// Returns coefficients on (epsilon_1, ..., epsilon_m).
fn epsilon_form(t: DiagramType, rank: usize, coords: &[i64]) -> Vec<i64> {
    let m = match t {
        DiagramType::A => rank + 1,
        _ => rank,
    };
    let mut v = vec![0i64; m];
    for (i, &c) in coords.iter().enumerate() {
        match t {
            DiagramType::A => {
                v[i] += c;
                v[i + 1] -= c;
            }
            DiagramType::B => {
                if i + 1 < rank {
                    v[i] += c;
                    v[i + 1] -= c;
                } else {
                    v[rank - 1] += c;
                }
            }
            DiagramType::C => {
                if i + 1 < rank {
                    v[i] += c;
                    v[i + 1] -= c;
                } else {
                    v[rank - 1] += 2 * c;
                }
            }
            DiagramType::D => {
                if i + 1 < rank {
                    v[i] += c;
                    v[i + 1] -= c;
                } else {
                    v[rank - 2] += c;
                    v[rank - 1] += c;
                }
            }
            DiagramType::E => unreachable!("no natural module for type E"),
        }
    }
    v
}

/// Builds the natural module with the standard basis and form.
pub fn natural_module(diagram_type: DiagramType, rank: usize) -> Result<NaturalModule> {
    let rs = crate::root_data::build_root_system(diagram_type, rank)?;
    if diagram_type == DiagramType::E {
        return Err(Error::UnsupportedDiagram { dtype: 'E', rank });
    }
    let n = rank;
    let (dim, zeta, labels): (usize, IntMatrix, Vec<String>) = match diagram_type {
        DiagramType::A => {
            let d = n + 1;
            (
                d,
                IntMatrix::identity(d),
                (1..=d).map(|i| format!("a{i}")).collect(),
            )
        }
        DiagramType::B => {
            let d = 2 * n + 1;
            let mut z = IntMatrix::zero(d, d);
            z.set(0, 0, Int::from(2));
            for i in 1..=n {
                z.set(i, n + i, Int::one());
                z.set(n + i, i, Int::one());
            }
            (d, z, (0..d).map(|i| format!("a{i}")).collect())
        }
        DiagramType::C => {
            let d = 2 * n;
            let mut z = IntMatrix::zero(d, d);
            for i in 0..n {
                z.set(i, n + i, Int::one());
                z.set(n + i, i, Int::from(-1));
            }
            (d, z, (1..=d).map(|i| format!("a{i}")).collect())
        }
        DiagramType::D => {
            let d = 2 * n;
            let mut z = IntMatrix::zero(d, d);
            for i in 0..n {
                z.set(i, n + i, Int::one());
                z.set(n + i, i, Int::one());
            }
            (d, z, (1..=d).map(|i| format!("a{i}")).collect())
        }
        DiagramType::E => unreachable!(),
    };

    let mut x_ops = Vec::with_capacity(rs.positive_roots.len());
    for coords in &rs.positive_roots {
        let eps = epsilon_form(diagram_type, rank, coords);
        let x = match diagram_type {
            DiagramType::A => {
                let i = eps.iter().position(|&v| v == 1).unwrap();
                let j = eps.iter().position(|&v| v == -1).unwrap();
                elementary(dim, i, j, 1)
            }
            DiagramType::C => {
                if let Some(i) = eps.iter().position(|&v| v == 2) {
                    elementary(dim, i, n + i, 1)
                } else if let Some(j) = eps.iter().position(|&v| v == -1) {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    madd(
                        &elementary(dim, i, j, 1),
                        &elementary(dim, n + j, n + i, -1),
                    )
                } else {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    let j = (i + 1..n).find(|&t| eps[t] == 1).unwrap();
                    madd(&elementary(dim, i, n + j, 1), &elementary(dim, j, n + i, 1))
                }
            }
            DiagramType::D => {
                if let Some(j) = eps.iter().position(|&v| v == -1) {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    madd(
                        &elementary(dim, i, j, 1),
                        &elementary(dim, n + j, n + i, -1),
                    )
                } else {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    let j = (i + 1..n).find(|&t| eps[t] == 1).unwrap();
                    madd(
                        &elementary(dim, i, n + j, 1),
                        &elementary(dim, j, n + i, -1),
                    )
                }
            }
            DiagramType::B => {
                // basis index 0 is a_0; e_i at i+1, f_i at n+i+1 (i 0-based)
                if eps.iter().map(|v| v.abs()).sum::<i64>() == 1 {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    madd(
                        &elementary(dim, i + 1, 0, 2),
                        &elementary(dim, 0, n + i + 1, -1),
                    )
                } else if let Some(j) = eps.iter().position(|&v| v == -1) {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    madd(
                        &elementary(dim, i + 1, j + 1, 1),
                        &elementary(dim, n + j + 1, n + i + 1, -1),
                    )
                } else {
                    let i = eps.iter().position(|&v| v == 1).unwrap();
                    let j = (i + 1..n).find(|&t| eps[t] == 1).unwrap();
                    madd(
                        &elementary(dim, i + 1, n + j + 1, 1),
                        &elementary(dim, j + 1, n + i + 1, -1),
                    )
                }
            }
            DiagramType::E => unreachable!(),
        };
        x_ops.push(x);
    }

    let twist = |m: &IntMatrix| -> IntMatrix {
        match diagram_type {
            DiagramType::B => {
                // h^{-1} m^T h with h = diag(2, 1, ..., 1); integrality of the
                // result is asserted by div_exact.
                let mut t = m.transpose();
                for c in 0..dim {
                    let v = t.get(0, c).clone();
                    let (q, r) = num_integer::Integer::div_rem(&v, &Int::from(2));
                    assert!(r.is_zero(), "B-type transpose twist not integral");
                    t.set(0, c, q);
                }
                for r in 0..dim {
                    let v = t.get(r, 0) * Int::from(2);
                    t.set(r, 0, v);
                }
                t
            }
            _ => m.transpose(),
        }
    };
    let y_ops: Vec<IntMatrix> = x_ops.iter().map(&twist).collect();

    // Simple coroots from the simple commutators.
    let simple_indices: Vec<usize> = (0..rank)
        .map(|i| {
            rs.positive_roots
                .iter()
                .position(|c| {
                    c.iter().enumerate().all(|(t, &v)| v == i64::from(t == i))
                })
                .expect("simple root present")
        })
        .collect();
    let h_ops: Vec<IntMatrix> = simple_indices
        .iter()
        .map(|&ri| commutator(&x_ops[ri], &y_ops[ri]))
        .collect();

    // Natural weights read off the diagonal coroot action.
    let mut weights = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut coeffs = Vec::with_capacity(rank);
        for h in &h_ops {
            for r in 0..dim {
                if r != b {
                    assert!(h.get(r, b).is_zero(), "coroot operator not diagonal");
                }
            }
            let v = h.get(b, b);
            coeffs.push(i64::try_from(v).expect("small eigenvalue"));
        }
        weights.push(Weight(coeffs));
    }

    let module = NaturalModule {
        diagram_type,
        rank,
        dim,
        zeta,
        basis_labels: labels,
        x_ops,
        y_ops,
        h_ops,
        weights,
    };
    verify_basis(&module, &rs);
    Ok(module)
}

/// Construction-time verification of the Chevalley-basis axioms.
fn verify_basis(nm: &NaturalModule, rs: &RootSystem) {

    // Form compatibility: zeta(Xu, v) + zeta(u, Xv) = 0.
    for ops in [&nm.x_ops, &nm.y_ops] {
        for m in ops.iter() {
            let lhs = madd(&nm.zeta.mul(m), &m.transpose().mul(&nm.zeta));
            if nm.diagram_type != DiagramType::A {
                assert!(lhs.is_zero(), "generator does not annihilate the form");
            }
        }
    }
    // Root-operator weight shifts: H_t X_alpha - X_alpha H_t = alpha(H_t) X_alpha.
    for (ri, coords) in rs.positive_roots.iter().enumerate() {
        let alpha_w = rs.root_to_weight(coords);
        for (t, h) in nm.h_ops.iter().enumerate() {
            let comm = commutator(h, &nm.x_ops[ri]);
            let mut expected = IntMatrix::zero(nm.dim, nm.dim);
            for r in 0..nm.dim {
                for c in 0..nm.dim {
                    expected.set(r, c, nm.x_ops[ri].get(r, c) * Int::from(alpha_w.0[t]));
                }
            }
            assert_eq!(comm, expected, "weight shift failed for root {ri}");
        }
    }
    // Structure constants: for all signed pairs, the commutator is zero, a
    // coroot, or +-(p+1) times the root vector of the sum, p the chain length.
    let signed: Vec<(Vec<i64>, &IntMatrix)> = rs
        .positive_roots
        .iter()
        .zip(&nm.x_ops)
        .map(|(c, m)| (c.clone(), m))
        .chain(
            rs.positive_roots
                .iter()
                .zip(&nm.y_ops)
                .map(|(c, m)| (c.iter().map(|&v| -v).collect(), m)),
        )
        .collect();
    let index: HashMap<Vec<i64>, &IntMatrix> =
        signed.iter().map(|(c, m)| (c.clone(), *m)).collect();
    for (ca, ma) in &signed {
        for (cb, mb) in &signed {
            let sum: Vec<i64> = ca.iter().zip(cb).map(|(&a, &b)| a + b).collect();
            let comm = commutator(ma, mb);
            if sum.iter().all(|&v| v == 0) {
                // Coroot: diagonal with eigenvalues <mu, alpha-check>.
                for r in 0..nm.dim {
                    for c in 0..nm.dim {
                        if r != c {
                            assert!(comm.get(r, c).is_zero());
                        }
                    }
                }
                continue;
            }
            match index.get(&sum) {
                None => assert!(
                    comm.is_zero(),
                    "commutator must vanish when the sum is not a root"
                ),
                Some(msum) => {
                    // p = chain length: max k with cb - k*ca a root.
                    let mut p = 0i64;
                    loop {
                        let probe: Vec<i64> = cb
                            .iter()
                            .zip(ca)
                            .map(|(&b, &a)| b - (p + 1) * a)
                            .collect();
                        let is_rt = rs.is_root(&probe)
                            || rs.is_root(&probe.iter().map(|&v| -v).collect::<Vec<_>>());
                        if is_rt {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    // Find scalar ratio.
                    let mut ratio: Option<Int> = None;
                    'scan: for r in 0..nm.dim {
                        for c in 0..nm.dim {
                            if !msum.get(r, c).is_zero() {
                                let (q, rem) = num_integer::Integer::div_rem(
                                    comm.get(r, c),
                                    msum.get(r, c),
                                );
                                assert!(rem.is_zero());
                                ratio = Some(q);
                                break 'scan;
                            }
                        }
                    }
                    let n = ratio.expect("nonzero root vector");
                    let mut expected = IntMatrix::zero(nm.dim, nm.dim);
                    for r in 0..nm.dim {
                        for c in 0..nm.dim {
                            expected.set(r, c, msum.get(r, c) * &n);
                        }
                    }
                    assert_eq!(comm, expected, "commutator not proportional");
                    assert_eq!(
                        n.abs(),
                        Int::from(p + 1),
                        "structure constant magnitude for {ca:?} + {cb:?}"
                    );
                }
            }
        }
    }
    // Divided powers on the natural module are integral.
    for m in nm.x_ops.iter().chain(&nm.y_ops) {
        let mut pow = m.clone();
        let mut a = 1i64;
        while !pow.is_zero() {
            a += 1;
            pow = pow.mul(m).div_exact(&Int::from(a));
        }
        assert!(a as usize <= nm.dim + 1);
    }
}

/// The set of Chevalley generators of the natural module as labeled
/// operators.
pub fn chevalley_generators(diagram_type: DiagramType, rank: usize) -> Result<Vec<ChevalleyOperator>> {
    let nm = natural_module(diagram_type, rank)?;
    let mut out = Vec::new();
    for (i, m) in nm.x_ops.iter().enumerate() {
        out.push(ChevalleyOperator {
            label: OpLabel::X(i),
            matrix: m.clone(),
        });
    }
    for (i, m) in nm.y_ops.iter().enumerate() {
        out.push(ChevalleyOperator {
            label: OpLabel::Y(i),
            matrix: m.clone(),
        });
    }
    for (i, m) in nm.h_ops.iter().enumerate() {
        out.push(ChevalleyOperator {
            label: OpLabel::H(i),
            matrix: m.clone(),
        });
    }
    Ok(out)
}

/// The anti-automorphism swapping raising and lowering operators and fixing
/// the coroots. On natural-module matrices this is the transpose for types
/// A, C, D and the diag(2,1,...,1)-twisted transpose for type B.
pub fn tau(nm: &NaturalModule, op: &ChevalleyOperator) -> ChevalleyOperator {
    let label = match op.label {
        OpLabel::X(i) => OpLabel::Y(i),
        OpLabel::Y(i) => OpLabel::X(i),
        OpLabel::H(i) => OpLabel::H(i),
    };
    let matrix = match label {
        OpLabel::X(i) => nm.x_ops[i].clone(),
        OpLabel::Y(i) => nm.y_ops[i].clone(),
        OpLabel::H(i) => nm.h_ops[i].clone(),
    };
    ChevalleyOperator { label, matrix }
}

/// How an ambient module was built.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum AmbientKind {
    /// Tensor product of exterior powers of the natural module, degrees
    /// listed in decreasing order.
    WedgeTensor { degrees: Vec<usize> },
    /// Tableau-coordinate model of a type-A module of arbitrary dominant
    /// highest weight (provided by the schur module).
    Tableau { shape_cols: Vec<usize> },
}

/// A finite-dimensional module with integral operator matrices for every
/// positive root, ordered compatibly with weight drops.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub rs: RootSystem,
    pub kind: AmbientKind,
    pub dim: usize,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    /// Height of lambda minus the basis weight; basis sorted by (drop, label).
    pub drops: Vec<i64>,
    pub x_ops: Vec<IntMatrix>,
    pub y_ops: Vec<IntMatrix>,
    pub lambda: Weight,
    /// Index of the highest weight vector (always 0 after sorting).
    pub vplus: usize,
    /// Gram matrix of the determinant form induced by the natural form, for
    /// single-degree wedge ambients of types B, C, D.
    pub zeta_wedge: Option<IntMatrix>,
    /// True when the ambient basis is orthonormal for the contravariant form
    /// (type A wedge-tensor ambients).
    pub orthonormal: bool,
    /// For tableau ambients: Gram of the raw symmetrizer form on the basis
    /// together with the normalization scalar.
    pub tableau_form: Option<(IntMatrix, Int)>,
    /// For wedge-tensor ambients: the structured basis labels, one sorted
    /// index subset per tensor factor, in basis order.
    pub basis_tuples: Option<Vec<Vec<Vec<u8>>>>,
}

impl Ambient {
    pub fn op(&self, root: SignedRoot) -> &IntMatrix {
        match root {
            SignedRoot::Positive(i) => &self.x_ops[i],
            SignedRoot::Negative(i) => &self.y_ops[i],
        }
    }

    /// Applies the divided power op^a / a! to an ambient vector, asserting
    /// integrality at every step.
    pub fn divided_power_apply(&self, root: SignedRoot, a: usize, v: &[Int]) -> Vec<Int> {
        let m = self.op(root);
        let mut w = v.to_vec();
        for i in 1..=a {
            w = m.mul_vec(&w);
            let d = Int::from(i as i64);
            for entry in &mut w {
                let (q, r) = num_integer::Integer::div_rem(&*entry, &d);
                assert!(
                    r.is_zero(),
                    "non-integral divided power: operator {root:?}, step {i}"
                );
                *entry = q;
            }
        }
        w
    }

    /// Divided-power matrices op^(0), op^(1), ..., up to the nilpotency
    /// degree on this ambient.
    pub fn divided_power_matrices(&self, root: SignedRoot) -> Vec<IntMatrix> {
        let m = self.op(root);
        let mut out = vec![IntMatrix::identity(self.dim)];
        let mut cur = m.clone();
        let mut a = 1i64;
        while !cur.is_zero() {
            out.push(cur.clone());
            a += 1;
            cur = cur.mul(m).div_exact(&Int::from(a));
        }
        out
    }

    /// One-parameter group element sum_a t^a op^(a) as an integer matrix.
    pub fn one_param_int(&self, root: SignedRoot, t: i64) -> IntMatrix {
        let powers = self.divided_power_matrices(root);
        let mut out = IntMatrix::zero(self.dim, self.dim);
        let mut tp = Int::one();
        for m in &powers {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    if !m.get(r, c).is_zero() {
                        let v = out.get(r, c) + m.get(r, c) * &tp;
                        out.set(r, c, v);
                    }
                }
            }
            tp *= Int::from(t);
        }
        out
    }

    /// Group element x_alpha(t) acting on a vector over F_p.
    pub fn group_element_apply(
        &self,
        root: SignedRoot,
        t: u64,
        p: u64,
        v: &[u64],
    ) -> Result<Vec<u64>> {
        if !crate::exact_linalg::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let powers = self.divided_power_matrices(root);
        let pint = Int::from(p);
        let mut out = vec![0u64; self.dim];
        let mut tp = 1u64;
        for m in &powers {
            for (r, o) in out.iter_mut().enumerate() {
                let mut acc = 0u64;
                for c in 0..self.dim {
                    let e = num_integer::Integer::mod_floor(m.get(r, c), &pint);
                    let e64 = u64::try_from(&e).unwrap();
                    acc = (acc + e64 * (v[c] % p)) % p;
                }
                *o = (*o + acc * tp) % p;
            }
            tp = tp * (t % p) % p;
        }
        Ok(out)
    }

    /// The element n_i = x_i(1) y_i(-1) x_i(1) for a simple root, as an
    /// integer matrix; it preserves any minimal admissible lattice.
    pub fn weyl_generator_int(&self, simple: usize) -> IntMatrix {
        let ri = self
            .rs
            .positive_roots
            .iter()
            .position(|c| c.iter().enumerate().all(|(t, &v)| v == i64::from(t == simple)))
            .expect("simple root index");
        let x1 = self.one_param_int(SignedRoot::Positive(ri), 1);
        let ym1 = self.one_param_int(SignedRoot::Negative(ri), -1);
        x1.mul(&ym1).mul(&x1)
    }
}

/// Sorted-subset wedge label; entries are 0-based natural basis indices.
type WedgeLabel = Vec<Vec<u8>>;

fn subsets(m: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i as u8);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Inserts `elem` into the sorted set `s` (replacing position `pos` removed),
/// returning the sorted result and the sign of the permutation, or None when
/// the element already occurs.
fn wedge_replace(s: &[u8], pos: usize, elem: u8) -> Option<(Vec<u8>, i64)> {
    let mut rest: Vec<u8> = Vec::with_capacity(s.len());
    for (i, &e) in s.iter().enumerate() {
        if i != pos {
            if e == elem {
                return None;
            }
            rest.push(e);
        }
    }
    // Sign: moving the new element from slot `pos` to its sorted slot.
    let target = rest.iter().filter(|&&e| e < elem).count();
    let before = pos;
    let swaps = (target as i64 - before as i64).abs();
    let sign = if swaps % 2 == 0 { 1 } else { -1 };
    rest.insert(target, elem);
    Some((rest, sign))
}

/// Builds the ambient module: the tensor product over the degree list of
/// exterior powers of the natural module, with basis sorted by weight drop
/// and label. Degrees are sorted into decreasing order.
pub fn wedge_tensor_ambient(
    diagram_type: DiagramType,
    rank: usize,
    degrees_in: &[usize],
    caps: &crate::Caps,
) -> Result<Ambient> {
    let rs = crate::root_data::build_root_system(diagram_type, rank)?;
    let nm = natural_module(diagram_type, rank)?;
    let mut degrees: Vec<usize> = degrees_in.to_vec();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    if degrees.is_empty() {
        return Err(Error::InvalidDegrees {
            dtype: diagram_type.letter(),
            rank,
            kset: degrees,
            reason: "empty degree list".into(),
        });
    }
    // Degree ranges for which the wedge of the standard flag is a highest
    // weight vector of the fundamental-weight sum: any subset for A, single
    // k < n for B, k <= n for C, k <= n-2 for D.
    let degree_ok = |k: usize| -> bool {
        k >= 1
            && match diagram_type {
                DiagramType::A => k <= rank,
                DiagramType::B => k < rank,
                DiagramType::C => k <= rank,
                DiagramType::D => k + 2 <= rank,
                DiagramType::E => false,
            }
    };
    let distinct = degrees.windows(2).all(|w| w[0] != w[1]);
    if !degrees.iter().copied().all(degree_ok)
        || !distinct
        || (diagram_type != DiagramType::A && degrees.len() != 1)
    {
        return Err(Error::InvalidDegrees {
            dtype: diagram_type.letter(),
            rank,
            kset: degrees,
            reason: "degrees must be distinct nodes of the diagram supporting a wedge model"
                .into(),
        });
    }

    let factor_bases: Vec<Vec<Vec<u8>>> = degrees.iter().map(|&k| subsets(nm.dim, k)).collect();
    let total: usize = factor_bases.iter().map(|b| b.len()).product();
    if total > caps.max_ambient {
        return Err(Error::CapExceeded {
            what: "ambient dimension".into(),
            needed: total,
            cap: caps.max_ambient,
        });
    }

    // Enumerate all tuples.
    let mut tuples: Vec<WedgeLabel> = vec![Vec::new()];
    for fb in &factor_bases {
        let mut next = Vec::with_capacity(tuples.len() * fb.len());
        for t in &tuples {
            for s in fb {
                let mut t2 = t.clone();
                t2.push(s.clone());
                next.push(t2);
            }
        }
        tuples = next;
    }

    let weight_of = |t: &WedgeLabel| -> Weight {
        let mut w = vec![0i64; rank];
        for s in t {
            for &e in s {
                for (j, &c) in nm.weights[e as usize].0.iter().enumerate() {
                    w[j] += c;
                }
            }
        }
        Weight(w)
    };

    // The standard isotropic flag: for type B the natural index 0 holds the
    // weight-zero vector, so the flag starts at index 1.
    let first = if diagram_type == DiagramType::B { 1u8 } else { 0u8 };
    let vplus_label: WedgeLabel = degrees
        .iter()
        .map(|&k| (first..first + k as u8).collect::<Vec<u8>>())
        .collect();
    let lambda = weight_of(&vplus_label);
    debug_assert_eq!(lambda, Weight::lambda_k(rank, &degrees));

    let mut decorated: Vec<(i64, WedgeLabel)> = tuples
        .into_iter()
        .map(|t| {
            let w = weight_of(&t);
            let drop = rs
                .drop_height(&lambda, &w)
                .expect("ambient weight in the root-lattice coset of lambda");
            (drop, t)
        })
        .collect();
    decorated.sort();
    let labels_sorted: Vec<WedgeLabel> = decorated.iter().map(|(_, t)| t.clone()).collect();
    let drops: Vec<i64> = decorated.iter().map(|(d, _)| *d).collect();
    let weights: Vec<Weight> = labels_sorted.iter().map(&weight_of).collect();
    let index: HashMap<WedgeLabel, usize> = labels_sorted
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let vplus = index[&vplus_label];
    assert_eq!(vplus, 0, "highest weight vector must sort first");
    assert_eq!(
        drops.iter().filter(|&&d| d == 0).count(),
        1,
        "top weight space of the ambient must be one-dimensional"
    );

    // Derivation action of a natural operator on the ambient basis.
    let derive = |nat: &IntMatrix| -> IntMatrix {
        let mut out = IntMatrix::zero(total, total);
        for (col, t) in labels_sorted.iter().enumerate() {
            for (f, s) in t.iter().enumerate() {
                for (pos, &e) in s.iter().enumerate() {
                    for r in 0..nm.dim {
                        let coeff = nat.get(r, e as usize);
                        if coeff.is_zero() {
                            continue;
                        }
                        if let Some((s2, sign)) = wedge_replace(s, pos, r as u8) {
                            let mut t2 = t.clone();
                            t2[f] = s2;
                            let row = index[&t2];
                            let v = out.get(row, col) + coeff * Int::from(sign);
                            out.set(row, col, v);
                        }
                    }
                }
            }
        }
        out
    };

    let x_ops: Vec<IntMatrix> = nm.x_ops.iter().map(&derive).collect();
    let y_ops: Vec<IntMatrix> = nm.y_ops.iter().map(&derive).collect();

    // Determinant form on a single-degree wedge ambient for B, C, D.
    let zeta_wedge = if diagram_type != DiagramType::A && degrees.len() == 1 {
        let k = degrees[0];
        let mut z = IntMatrix::zero(total, total);
        for (i, ti) in labels_sorted.iter().enumerate() {
            for (j, tj) in labels_sorted.iter().enumerate() {
                let si = &ti[0];
                let sj = &tj[0];
                let mut sub = IntMatrix::zero(k, k);
                for (r, &er) in si.iter().enumerate() {
                    for (c, &ec) in sj.iter().enumerate() {
                        sub.set(r, c, nm.zeta.get(er as usize, ec as usize).clone());
                    }
                }
                z.set(i, j, sub.det());
            }
        }
        Some(z)
    } else {
        None
    };

    let labels: Vec<String> = labels_sorted
        .iter()
        .map(|t| {
            t.iter()
                .map(|s| {
                    let names: Vec<&str> =
                        s.iter().map(|&e| nm.basis_labels[e as usize].as_str()).collect();
                    names.join("^")
                })
                .collect::<Vec<_>>()
                .join(" (x) ")
        })
        .collect();

    Ok(Ambient {
        rs,
        kind: AmbientKind::WedgeTensor { degrees },
        dim: total,
        labels,
        weights,
        drops,
        x_ops,
        y_ops,
        lambda,
        vplus,
        zeta_wedge,
        orthonormal: diagram_type == DiagramType::A,
        tableau_form: None,
        basis_tuples: Some(labels_sorted),
    })
}
