//! Minimal admissible lattices inside ambient modules, the contravariant
//! bilinear form on them, and its modular invariants.
//!
//! The lattice is the span of all ordered divided-power monomials in the
//! lowering operators applied to the highest weight vector; the spanning set
//! is reduced to a Hermite basis and the reduction matrix doubles as the
//! provenance record. The form is evaluated by the contravariance recursion:
//! pairing two monomial images reduces, by moving one monomial across the
//! form as raising operators, to reading off the highest-weight coefficient.

use crate::chevalley_ops::{Ambient, SignedRoot};
use crate::exact_linalg::{
    hermite_normal_form, kernel_mod_p, rank_mod_p, smith_normal_form, Int, IntMatrix, ModMatrix,
};
use crate::root_data::{RootSystem, Weight};
use crate::{Caps, Error, Result};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact dimension of the irreducible module of the given dominant highest
/// weight over a field of characteristic zero, by the product formula over
/// positive roots, evaluated with exact integer arithmetic.
pub fn weyl_dim_formula(rs: &RootSystem, lambda: &Weight) -> Result<Int> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let mut num = Int::one();
    let mut den = Int::one();
    for c in &rs.positive_roots {
        let mut a = 0i64;
        let mut b = 0i64;
        for (j, &cj) in c.iter().enumerate() {
            a += cj * (lambda.0[j] + 1) * rs.norm2[j];
            b += cj * rs.norm2[j];
        }
        num *= Int::from(a);
        den *= Int::from(b);
    }
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    assert!(r.is_zero(), "dimension formula must divide exactly");
    Ok(q)
}

/// Ordered divided-power monomial in the lowering operators: pairs of
/// (positive-root index, power), applied left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<(usize, usize)>);

impl Monomial {
    pub fn describe(&self, rs: &RootSystem) -> String {
        if self.0.is_empty() {
            return "v+".to_string();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(ri, a)| format!("Y{:?}^({})", rs.positive_roots[ri], a))
            .collect();
        format!("{} v+", parts.join(" "))
    }
}

/// The highest weight vector of an ambient module as an explicit vector.
pub fn highest_weight_vector(ambient: &Ambient) -> Vec<Int> {
    let mut v = vec![Int::zero(); ambient.dim];
    v[ambient.vplus] = Int::one();
    v
}

/// A free Z-module given by a Hermite row basis inside an ambient module,
/// together with the monomial spanning set that produced it.
#[derive(Debug, Clone)]
pub struct LatticeModule {
    pub ambient: Ambient,
    /// Hermite-form rows, sorted by weight drop then ambient index.
    pub basis: IntMatrix,
    pub weights: Vec<Weight>,
    /// Monomial witnesses: ambient vectors of the spanning monomials.
    pub gens: Vec<(Monomial, Vec<Int>)>,
    /// basis = transform * (stacked generator vectors).
    pub transform: IntMatrix,
}

impl LatticeModule {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of an ambient vector in the lattice basis, or None when
    /// the vector is not in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut rem = v.to_vec();
        let mut out = vec![Int::zero(); self.basis.rows()];
        for r in 0..self.basis.rows() {
            let pivot = (0..self.basis.cols()).find(|&c| !self.basis.get(r, c).is_zero())?;
            if rem[pivot].is_zero() {
                continue;
            }
            let (q, rr) = num_integer::Integer::div_rem(&rem[pivot], self.basis.get(r, pivot));
            if !rr.is_zero() {
                return None;
            }
            for c in 0..self.basis.cols() {
                let v = &rem[c] - &q * self.basis.get(r, c);
                rem[c] = v;
            }
            out[r] = q;
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }

    /// Lattice basis reduced modulo p, as rows over F_p.
    pub fn basis_mod_p(&self, p: u64) -> Result<ModMatrix> {
        ModMatrix::from_int_matrix(&self.basis, p)
    }
}

/// Generates the minimal lattice: the integral span of all ordered
/// divided-power monomials in the lowering operators applied to the highest
/// weight vector. Monomials run over the positive roots in increasing
/// height-then-lex order; branches are pruned as soon as the partial image
/// vanishes. The result is Hermite-reduced and verified to be a fixed point
/// of closure under every raising and lowering divided power.
pub fn generate_lattice(ambient: &Ambient, caps: &Caps) -> Result<LatticeModule> {
    if ambient.dim > caps.max_ambient {
        return Err(Error::CapExceeded {
            what: "ambient dimension".into(),
            needed: ambient.dim,
            cap: caps.max_ambient,
        });
    }
    let max_drop = ambient.drops.iter().copied().max().unwrap_or(0);
    let heights: Vec<i64> = ambient
        .rs
        .positive_roots
        .iter()
        .map(|c| c.iter().sum())
        .collect();
    let vplus = highest_weight_vector(ambient);

    // Enumeration frames: next root index, monomial so far, its image, and
    // the accumulated weight drop.
    type Frame = (usize, Vec<(usize, usize)>, Vec<Int>, i64);
    let mut gens: Vec<(Monomial, Vec<Int>)> = Vec::new();
    let mut stack: Vec<Frame> = vec![(0, Vec::new(), vplus, 0)];
    while let Some((root_idx, monomial, vec, drop)) = stack.pop() {
        gens.push((Monomial(monomial.clone()), vec.clone()));
        if root_idx >= ambient.rs.positive_roots.len() {
            continue;
        }
        // Continue without this root.
        stack.push((root_idx + 1, monomial.clone(), vec.clone(), drop));
        // Apply increasing divided powers of this root.
        let mut w = vec;
        let mut a = 0usize;
        loop {
            a += 1;
            let new_drop = drop + a as i64 * heights[root_idx];
            if new_drop > max_drop {
                break;
            }
            w = ambient.divided_power_apply(SignedRoot::Negative(root_idx), 1, &w);
            // w now holds op^a/a! applied: dividing the running vector by a
            // at each step realizes the divided power incrementally.
            let mut scaled = w.clone();
            let d = Int::from(a as i64);
            let mut ok = true;
            for e in &mut scaled {
                let (q, r) = num_integer::Integer::div_rem(&*e, &d);
                if !r.is_zero() {
                    ok = false;
                    break;
                }
                *e = q;
            }
            assert!(ok, "divided power must stay integral");
            w = scaled;
            if w.iter().all(|x| x.is_zero()) {
                break;
            }
            let mut m2 = monomial.clone();
            m2.push((root_idx, a));
            stack.push((root_idx + 1, m2, w.clone(), new_drop));
        }
    }

    // Drop duplicate of the empty monomial pushed once per subtree root.
    let mut seen_vecs: Vec<(Monomial, Vec<Int>)> = Vec::new();
    let mut seen_keys = std::collections::HashSet::new();
    for (m, v) in gens {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let key: Vec<String> = m.0.iter().map(|&(r, a)| format!("{r}.{a}")).collect();
        if seen_keys.insert(key.join("/")) {
            seen_vecs.push((m, v));
        }
    }
    let gens = seen_vecs;

    let stacked = IntMatrix::from_rows(gens.iter().map(|(_, v)| v.clone()).collect());
    let (h, u) = hermite_normal_form(&stacked);
    let rank = (0..h.rows())
        .take_while(|&r| (0..h.cols()).any(|c| !h.get(r, c).is_zero()))
        .count();
    if rank > caps.max_lattice {
        return Err(Error::CapExceeded {
            what: "lattice rank".into(),
            needed: rank,
            cap: caps.max_lattice,
        });
    }
    let basis = IntMatrix::from_rows((0..rank).map(|r| h.row_vec(r)).collect());
    let transform = IntMatrix::from_rows((0..rank).map(|r| u.row_vec(r)).collect());

    // Expected rank from the dimension formula.
    let expected = weyl_dim_formula(&ambient.rs, &ambient.lambda)?;
    assert_eq!(
        Int::from(rank),
        expected,
        "lattice rank must equal the characteristic-zero dimension"
    );

    // Weight homogeneity of the basis rows and the top weight space.
    let mut weights = Vec::with_capacity(rank);
    for r in 0..rank {
        let support: Vec<usize> = (0..basis.cols())
            .filter(|&c| !basis.get(r, c).is_zero())
            .collect();
        let w = ambient.weights[support[0]].clone();
        for &c in &support[1..] {
            assert_eq!(ambient.weights[c], w, "basis row crosses weight blocks");
        }
        weights.push(w);
    }
    assert_eq!(weights[0], ambient.lambda);
    assert_eq!(
        weights.iter().filter(|w| **w == ambient.lambda).count(),
        1,
        "top weight space must be one-dimensional"
    );
    {
        // Row 0 is the highest weight vector itself.
        let mut e0 = vec![Int::zero(); ambient.dim];
        e0[0] = Int::one();
        assert_eq!(basis.row_vec(0), e0);
    }

    let lattice = LatticeModule {
        ambient: ambient.clone(),
        basis,
        weights,
        gens,
        transform,
    };
    verify_closure(&lattice);
    Ok(lattice)
}

/// Checks that the lattice is stable under every raising and lowering
/// divided power: the defining fixed-point property of the construction.
fn verify_closure(lat: &LatticeModule) {
    let nroots = lat.ambient.rs.positive_roots.len();
    for r in 0..lat.basis.rows() {
        let v = lat.basis.row_vec(r);
        for ri in 0..nroots {
            for root in [SignedRoot::Positive(ri), SignedRoot::Negative(ri)] {
                let mut w = v.clone();
                let mut a = 0usize;
                loop {
                    a += 1;
                    w = lat.ambient.op(root).mul_vec(&w);
                    let d = Int::from(a as i64);
                    for e in &mut w {
                        let (q, rem) = num_integer::Integer::div_rem(&*e, &d);
                        assert!(rem.is_zero(), "non-integral divided power in closure");
                        *e = q;
                    }
                    if w.iter().all(|x| x.is_zero()) {
                        break;
                    }
                    assert!(
                        lat.contains(&w),
                        "lattice not closed under divided power {root:?}^({a})"
                    );
                }
            }
        }
    }
}

/// Symmetric integer Gram matrix of the contravariant form on a lattice
/// basis, with Smith invariants computed on demand.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub matrix: IntMatrix,
    smith: std::sync::OnceLock<Vec<Int>>,
}

impl GramMatrix {
    pub fn new(matrix: IntMatrix) -> Self {
        GramMatrix {
            matrix,
            smith: std::sync::OnceLock::new(),
        }
    }

    pub fn smith_invariants(&self) -> &[Int] {
        self.smith.get_or_init(|| smith_normal_form(&self.matrix))
    }

    pub fn det(&self) -> Int {
        self.matrix.det()
    }
}

/// Pairing of two lowering monomial images under the contravariant form:
/// move the first monomial across the form as raising divided powers and
/// read off the highest-weight coefficient.
fn pair_monomials(ambient: &Ambient, mi: &Monomial, vj: &[Int]) -> Int {
    let mut w = vj.to_vec();
    for &(ri, a) in mi.0.iter().rev() {
        w = ambient.divided_power_apply(SignedRoot::Positive(ri), a, &w);
        if w.iter().all(|x| x.is_zero()) {
            return Int::zero();
        }
    }
    w[0].clone()
}

/// Computes the Gram matrix of the contravariant form on the lattice basis.
///
/// The pairing is evaluated on the monomial generators (distinct-weight
/// pairs vanish and are skipped) and transported to the Hermite basis by the
/// reduction transform. For orthonormal ambients the result is checked
/// against the ambient-form route, which reduces to the inner products of
/// the basis rows; for tableau ambients carrying a symmetrizer form, against
/// the normalized symmetrizer Gram.
pub fn contravariant_gram(lat: &LatticeModule) -> GramMatrix {
    let ambient = &lat.ambient;
    let gens = &lat.gens;
    let n = gens.len();
    let gen_weight: Vec<Weight> = gens
        .iter()
        .map(|(_, v)| {
            let c = (0..v.len()).find(|&c| !v[c].is_zero()).expect("nonzero gen");
            ambient.weights[c].clone()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| gen_weight[i] == gen_weight[j])
        .collect();
    let vals: Vec<((usize, usize), Int)> = pairs
        .par_iter()
        .map(|&(i, j)| ((i, j), pair_monomials(ambient, &gens[i].0, &gens[j].1)))
        .collect();
    let mut w = IntMatrix::zero(n, n);
    for ((i, j), v) in vals {
        w.set(i, j, v.clone());
        w.set(j, i, v);
    }
    let gram = lat.transform.mul(&w).mul(&lat.transform.transpose());
    assert!(gram.is_symmetric(), "contravariant form must be symmetric");
    assert_eq!(*gram.get(0, 0), Int::one(), "top pairing must be 1");
    // Weight-block orthogonality is structural.
    for i in 0..gram.rows() {
        for j in 0..i {
            if lat.weights[i] != lat.weights[j] {
                assert!(gram.get(i, j).is_zero(), "distinct weights must be orthogonal");
            }
        }
    }
    // Independent ambient-form routes.
    if ambient.orthonormal {
        let alt = lat.basis.mul(&lat.basis.transpose());
        assert_eq!(gram, alt, "recursion and orthonormal ambient form disagree");
    }
    if let Some((z, k)) = &ambient.tableau_form {
        let alt = lat.basis.mul(z).mul(&lat.basis.transpose());
        let alt = alt.div_exact(k);
        assert_eq!(gram, alt, "recursion and symmetrizer form disagree");
    }
    GramMatrix::new(gram)
}

/// Dimension of the irreducible head over F_p: the rank of the Gram matrix
/// modulo p.
pub fn modular_dim(gram: &GramMatrix, p: u64) -> Result<usize> {
    rank_mod_p(&gram.matrix, p)
}

/// Basis of the radical of the form modulo p, in lattice coordinates.
/// For wedge ambients of types B, C, D the kernel of the induced determinant
/// form restricted to the lattice must agree; this double-entry check is
/// skipped for type B in characteristic 2, where the natural form
/// degenerates.
pub fn radical_mod_p(lat: &LatticeModule, gram: &GramMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    let ker = kernel_mod_p(&gram.matrix, p)?;
    let canonical = if ker.is_empty() {
        Vec::new()
    } else {
        ModMatrix::from_rows(p, ker)?.row_space_basis()
    };
    if let Some(zw) = &lat.ambient.zeta_wedge {
        let degenerate_b2 =
            lat.ambient.rs.diagram_type == crate::root_data::DiagramType::B && p == 2;
        if !degenerate_b2 {
            let restricted = lat.basis.mul(zw).mul(&lat.basis.transpose());
            let ker2 = kernel_mod_p(&restricted, p)?;
            let canonical2 = if ker2.is_empty() {
                Vec::new()
            } else {
                ModMatrix::from_rows(p, ker2)?.row_space_basis()
            };
            assert_eq!(
                canonical, canonical2,
                "determinant-form radical must match the contravariant radical"
            );
        }
    }
    Ok(canonical)
}

/// Basis of the dual lattice in ambient coordinates, returned as a numerator
/// matrix together with the common denominator (the determinant of the
/// Gram matrix). Rows are denominator * dual basis vector.
pub fn dual_lattice(lat: &LatticeModule, gram: &GramMatrix) -> Result<(IntMatrix, Int)> {
    let (adj, det) = gram.matrix.inverse_exact()?;
    let numerators = adj.mul(&lat.basis);
    Ok((numerators, det))
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeEntry {
    #[serde(rename = "dimL")]
    pub dim_l: usize,
    pub radical_dim: usize,
}

/// Summary of a Weyl-module computation, serialized with a fixed field
/// order for byte-stable output.
#[derive(Debug, Clone, Serialize)]
pub struct WeylModuleReport {
    #[serde(rename = "type")]
    pub diagram_type: String,
    pub rank: usize,
    #[serde(rename = "K")]
    pub kset: Vec<usize>,
    pub dim: usize,
    pub smith: Vec<String>,
    pub primes: BTreeMap<String, PrimeEntry>,
    pub minuscule: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Runs the full pipeline for a fundamental-weight-sum module given by a
/// node multiset (repeated nodes are only meaningful in type A, where the
/// tableau model is used).
pub fn build_weyl_report(
    dtype: crate::root_data::DiagramType,
    rank: usize,
    nodes: &[usize],
    primes: &[u64],
    caps: &Caps,
) -> Result<WeylModuleReport> {
    let (ambient, lattice) = build_lattice_for_nodes(dtype, rank, nodes, caps)?;
    let gram = contravariant_gram(&lattice);
    report_from_parts(dtype, rank, nodes, &ambient, &lattice, &gram, primes)
}

/// Chooses the ambient model: wedge-tensor for distinct node sets, the
/// type-A tableau model when nodes repeat.
pub fn build_lattice_for_nodes(
    dtype: crate::root_data::DiagramType,
    rank: usize,
    nodes: &[usize],
    caps: &Caps,
) -> Result<(Ambient, LatticeModule)> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
    let ambient = if distinct && dtype != crate::root_data::DiagramType::E {
        crate::chevalley_ops::wedge_tensor_ambient(dtype, rank, &sorted, caps)?
    } else if dtype == crate::root_data::DiagramType::A {
        let mut lambda = vec![0i64; rank];
        for &k in nodes {
            if k == 0 || k > rank {
                return Err(Error::NodeOutOfRange { node: k, rank });
            }
            lambda[k - 1] += 1;
        }
        crate::schur::tableau_ambient(rank, &Weight(lambda), caps)?
    } else {
        return Err(Error::InvalidDegrees {
            dtype: dtype.letter(),
            rank,
            kset: nodes.to_vec(),
            reason: "repeated nodes are only supported in type A".into(),
        });
    };
    let lattice = generate_lattice(&ambient, caps)?;
    Ok((ambient, lattice))
}

pub fn report_from_parts(
    dtype: crate::root_data::DiagramType,
    rank: usize,
    nodes: &[usize],
    ambient: &Ambient,
    lattice: &LatticeModule,
    gram: &GramMatrix,
    primes: &[u64],
) -> Result<WeylModuleReport> {
    let rs = &ambient.rs;
    let mut primes_out = BTreeMap::new();
    let mut warnings = Vec::new();
    for &p in primes {
        let dim_l = modular_dim(gram, p)?;
        let rad = radical_mod_p(lattice, gram, p)?;
        if dtype == crate::root_data::DiagramType::B && p == 2 {
            warnings.push("char-2 B_n: form degenerate".to_string());
        }
        primes_out.insert(
            p.to_string(),
            PrimeEntry {
                dim_l,
                radical_dim: rad.len(),
            },
        );
    }
    let orbit = crate::root_data::weyl_orbit(rs, &ambient.lambda);
    let minuscule = Int::from(orbit.len()) == Int::from(lattice.rank());
    let mut kset = nodes.to_vec();
    kset.sort_unstable();
    Ok(WeylModuleReport {
        diagram_type: dtype.letter().to_string(),
        rank,
        kset,
        dim: lattice.rank(),
        smith: gram
            .smith_invariants()
            .iter()
            .map(|d| d.to_string())
            .collect(),
        primes: primes_out,
        minuscule,
        warnings,
    })
}

/// Run-length rendering of an invariant-factor list, e.g. "1^7,3".
pub fn smith_string(invariants: &[Int]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0usize;
    while i < invariants.len() {
        let mut j = i;
        while j < invariants.len() && invariants[j] == invariants[i] {
            j += 1;
        }
        let count = j - i;
        if count == 1 {
            parts.push(invariants[i].to_string());
        } else {
            parts.push(format!("{}^{}", invariants[i], count));
        }
        i = j;
    }
    parts.join(",")
}
