//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing its time budget. Expected values are either forced small
//! cases, literals from the reference material, or recomputed here by
//! independent oracles (Lucas counts, hook contents, dense group-ring
//! arithmetic, brute-force enumeration).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};
use weylrad::chevalley_ops::{wedge_tensor_ambient, SignedRoot};
use weylrad::exact_linalg::{IntMatrix, ModMatrix};
use weylrad::geometry;
use weylrad::root_data::{build_root_system, DiagramType, Weight};
use weylrad::schur;
use weylrad::weyl_module::{
    build_lattice_for_nodes, contravariant_gram, dual_lattice, generate_lattice, modular_dim,
    radical_mod_p, weyl_dim_formula,
};
use weylrad::Caps;

fn run_criterion<F: FnOnce() + std::panic::UnwindSafe>(name: &str, budget: Duration, body: F) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(body);
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) => {
            println!("ACCEPTANCE {name}: PASS ({elapsed:.2?})");
            assert!(
                elapsed <= budget,
                "{name} exceeded its budget: {elapsed:?} > {budget:?}"
            );
        }
        Err(e) => {
            println!("ACCEPTANCE {name}: FAIL ({elapsed:.2?})");
            std::panic::resume_unwind(e);
        }
    }
}

fn binom(m: usize, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from((m - i) as i64);
        den *= BigInt::from((i + 1) as i64);
    }
    num / den
}

#[test]
fn criterion_01_sl2_gram_ladder() {
    run_criterion("1 sl2 Gram ladder", Duration::from_secs(1), || {
        let caps = Caps {
            max_boxes: 0, // group-ring route not needed here
            ..Caps::default()
        };
        for m in 0..=12usize {
            let ambient = schur::tableau_ambient(1, &Weight(vec![m as i64]), &caps).unwrap();
            let lattice = generate_lattice(&ambient, &caps).unwrap();
            assert_eq!(lattice.rank(), m + 1);
            let gram = contravariant_gram(&lattice);
            for i in 0..=m {
                for j in 0..=m {
                    let want = if i == j { binom(m, i) } else { BigInt::zero() };
                    assert_eq!(*gram.matrix.get(i, j), want, "m={m} ({i},{j})");
                }
            }
            // The dual lattice recovers the unit vectors: basis = binom * dual.
            let (dual_num, den) = dual_lattice(&lattice, &gram).unwrap();
            let det: BigInt = (0..=m).map(|i| binom(m, i)).product();
            assert_eq!(den.abs(), det.abs());
            for i in 0..=m {
                for c in 0..=m {
                    let want = if i == c { den.clone() } else { BigInt::zero() };
                    assert_eq!(*dual_num.get(i, c), want);
                }
            }
        }
    });
}

/// Independent oracle: the number of i in 0..=m with C(m, i) nonzero mod p
/// is the product over base-p digits d of (d + 1).
fn lucas_nonzero_count(mut m: u64, p: u64) -> usize {
    let mut acc = 1usize;
    while m > 0 {
        acc *= (m % p + 1) as usize;
        m /= p;
    }
    acc
}

#[test]
fn criterion_02_sl2_modular_dimensions() {
    run_criterion("2 sl2 modular dimensions", Duration::from_secs(1), || {
        let caps = Caps {
            max_boxes: 0,
            ..Caps::default()
        };
        for m in 0..=20u64 {
            let ambient = schur::tableau_ambient(1, &Weight(vec![m as i64]), &caps).unwrap();
            let lattice = generate_lattice(&ambient, &caps).unwrap();
            let gram = contravariant_gram(&lattice);
            for p in [2u64, 3, 5, 7] {
                assert_eq!(
                    modular_dim(&gram, p).unwrap(),
                    lucas_nonzero_count(m, p),
                    "m={m} p={p}"
                );
            }
        }
    });
}

/// The reference 8x8 Gram matrix of the rank-2 adjoint module, in the basis
/// order (three raising vectors, two coroots, three lowering vectors).
fn reference_adjoint_gram() -> IntMatrix {
    IntMatrix::from_i64(
        8,
        8,
        &[
            1, 0, 0, 0, 0, 0, 0, 0, //
            0, 1, 0, 0, 0, 0, 0, 0, //
            0, 0, 1, 0, 0, 0, 0, 0, //
            0, 0, 0, 2, -1, 0, 0, 0, //
            0, 0, 0, -1, 2, 0, 0, 0, //
            0, 0, 0, 0, 0, 1, 0, 0, //
            0, 0, 0, 0, 0, 0, 1, 0, //
            0, 0, 0, 0, 0, 0, 0, 1,
        ],
    )
}

#[test]
fn criterion_03_a2_adjoint() {
    run_criterion("3 A2 adjoint module", Duration::from_secs(1), || {
        let caps = Caps::default();
        let ambient = wedge_tensor_ambient(DiagramType::A, 2, &[1, 2], &caps).unwrap();
        let lattice = generate_lattice(&ambient, &caps).unwrap();
        assert_eq!(lattice.rank(), 8);
        let gram = contravariant_gram(&lattice);
        // Basis permutation: our order is (highest root vector; the two
        // other raising levels; the coroot block; the two lowering levels;
        // lowest). The reference lists raising vectors first, then coroots,
        // then lowering vectors; the permutation below maps our row i to
        // reference row perm[i]. The coroot block is fixed setwise, so the
        // permuted reference matrix is well-defined.
        let perm: [usize; 8] = [1, 2, 0, 3, 4, 5, 7, 6];
        let reference = reference_adjoint_gram();
        let mut permuted = IntMatrix::zero(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                permuted.set(i, j, reference.get(perm[i], perm[j]).clone());
            }
        }
        assert_eq!(gram.matrix, permuted, "Gram equals the reference matrix");
        let smith = gram.smith_invariants();
        let want: Vec<BigInt> = (0..7)
            .map(|_| BigInt::one())
            .chain([BigInt::from(3)])
            .collect();
        assert_eq!(smith, &want[..]);
        for p in [2u64, 5, 7, 11, 13] {
            assert_eq!(modular_dim(&gram, p).unwrap(), 8, "p={p}");
        }
        assert_eq!(modular_dim(&gram, 3).unwrap(), 7);
        // Radical at p=3 is spanned by the difference of the two coroot
        // lattice vectors, i.e. 2 * (Y_a2 Y_a1 v+) - Y_theta v+.
        let rs = &ambient.rs;
        let idx = |c: &[i64]| {
            rs.positive_roots
                .iter()
                .position(|r| r == &c.to_vec())
                .unwrap()
        };
        let vplus = weylrad::weyl_module::highest_weight_vector(&ambient);
        let g1 = {
            let v = ambient.divided_power_apply(SignedRoot::Negative(idx(&[1, 0])), 1, &vplus);
            ambient.divided_power_apply(SignedRoot::Negative(idx(&[0, 1])), 1, &v)
        };
        let g2 = ambient.divided_power_apply(SignedRoot::Negative(idx(&[1, 1])), 1, &vplus);
        let w: Vec<BigInt> = g1
            .iter()
            .zip(&g2)
            .map(|(a, b)| a * BigInt::from(2) - b)
            .collect();
        let coords = lattice.coords(&w).unwrap();
        let coords_mod: Vec<u64> = coords
            .iter()
            .map(|c| {
                u64::try_from(&num_integer::Integer::mod_floor(c, &BigInt::from(3))).unwrap()
            })
            .collect();
        let rad = radical_mod_p(&lattice, &gram, 3).unwrap();
        assert_eq!(rad.len(), 1);
        let canon = ModMatrix::from_rows(3, vec![coords_mod])
            .unwrap()
            .row_space_basis();
        assert_eq!(canon, rad);
    });
}

#[test]
fn criterion_04_minuscule_suite() {
    run_criterion("4 minuscule suite", Duration::from_secs(5), || {
        let caps = Caps::default();
        let mut cases: Vec<(DiagramType, usize, usize, usize)> = Vec::new();
        for n in 1..=4usize {
            for k in 1..=n {
                let dim = usize::try_from(binom(n + 1, k)).unwrap();
                cases.push((DiagramType::A, n, k, dim));
            }
        }
        cases.push((DiagramType::C, 2, 1, 4));
        cases.push((DiagramType::C, 3, 1, 6));
        cases.push((DiagramType::D, 3, 1, 6));
        for (t, n, k, dim) in cases {
            let ambient = wedge_tensor_ambient(t, n, &[k], &caps).unwrap();
            let lattice = generate_lattice(&ambient, &caps).unwrap();
            assert_eq!(lattice.rank(), dim, "{}{} k={}", t.letter(), n, k);
            let gram = contravariant_gram(&lattice);
            assert_eq!(
                gram.matrix,
                IntMatrix::identity(dim),
                "{}{} k={} Gram",
                t.letter(),
                n,
                k
            );
            for p in [2u64, 3, 5, 7] {
                assert!(radical_mod_p(&lattice, &gram, p).unwrap().is_empty());
            }
            // The node really is minuscule for these diagrams.
            let rs = build_root_system(t, n).unwrap();
            assert!(weylrad::root_data::is_minuscule(&rs, k).unwrap());
        }
    });
}

#[test]
fn criterion_05_c2_symplectic_grassmannian() {
    run_criterion("5 C2 symplectic Grassmannian", Duration::from_secs(2), || {
        let caps = Caps::default();
        let rs = build_root_system(DiagramType::C, 2).unwrap();
        let oracle = weyl_dim_formula(&rs, &Weight::fundamental(2, 2)).unwrap();
        assert_eq!(oracle, BigInt::from(5));
        let ambient = wedge_tensor_ambient(DiagramType::C, 2, &[2], &caps).unwrap();
        let lattice = generate_lattice(&ambient, &caps).unwrap();
        assert_eq!(BigInt::from(lattice.rank()), oracle);
        let gram = contravariant_gram(&lattice);
        assert_eq!(modular_dim(&gram, 2).unwrap(), 4);
        assert_eq!(modular_dim(&gram, 3).unwrap(), 5);
        // Cross-route: counts of Smith invariants coprime to p.
        let smith = gram.smith_invariants();
        for (p, want) in [(2u64, 4usize), (3, 5)] {
            let coprime = smith
                .iter()
                .filter(|d| !((*d) % BigInt::from(p)).is_zero())
                .count();
            assert_eq!(coprime, want);
        }
    });
}

/// Independent oracle for tableau counts: product over boxes of
/// (m + col - row) / hook(box), evaluated exactly.
fn hook_content_count(rows: &[usize], m: usize) -> BigInt {
    let width = rows.first().copied().unwrap_or(0);
    let cols: Vec<usize> = (0..width)
        .map(|c| rows.iter().filter(|&&r| r > c).count())
        .collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (r, &rl) in rows.iter().enumerate() {
        for c in 0..rl {
            num *= BigInt::from(m as i64 + c as i64 - r as i64);
            let hook = (rl - c) + (cols[c] - r) - 1;
            den *= BigInt::from(hook as i64);
        }
    }
    let (q, rem) = num_integer::Integer::div_rem(&num, &den);
    assert!(rem.is_zero());
    q
}

/// Dense group-ring oracle for the symmetrizer scalar: square the
/// symmetrizer as a full map perm -> coefficient and read off the ratio.
fn k_lambda_bruteforce(rows: &[usize]) -> BigInt {
    let width = rows.first().copied().unwrap_or(0);
    let cols: Vec<usize> = (0..width)
        .map(|c| rows.iter().filter(|&&r| r > c).count())
        .collect();
    let d: usize = cols.iter().sum();
    // Word positions per column (bottom to top), rows derived.
    let mut col_blocks = Vec::new();
    let mut row_blocks: Vec<Vec<usize>> = vec![Vec::new(); width.max(1)];
    let mut row_blocks_real: Vec<Vec<usize>> = vec![Vec::new(); cols.first().copied().unwrap_or(0)];
    let mut pos = 0usize;
    for &len in &cols {
        col_blocks.push((pos..pos + len).collect::<Vec<_>>());
        for r in 0..len {
            row_blocks_real[r].push(pos + len - 1 - r);
        }
        pos += len;
    }
    row_blocks.clear();
    row_blocks.extend(row_blocks_real);
    let perms_of = |block: &[usize]| -> Vec<Vec<u8>> {
        let out: Vec<Vec<u8>> = vec![(0..d as u8).collect()];
        let sub = permutations(block.len());
        let mut next = Vec::new();
        for base in &out {
            for p in &sub {
                let mut q = base.clone();
                for (t, &src) in p.iter().enumerate() {
                    q[block[t]] = base[block[src as usize]];
                }
                next.push(q);
            }
        }
        next
    };
    let expand = |blocks: &[Vec<usize>]| -> Vec<Vec<u8>> {
        let mut group: Vec<Vec<u8>> = vec![(0..d as u8).collect()];
        for b in blocks {
            let mut next = Vec::new();
            for g in &group {
                for q in perms_of(b) {
                    next.push(compose_u8(g, &q));
                }
            }
            group = next;
        }
        group.sort();
        group.dedup();
        group
    };
    let col_group = expand(&col_blocks);
    let row_group = expand(&row_blocks);
    let mut sigma: HashMap<Vec<u8>, BigInt> = HashMap::new();
    for g in &col_group {
        let s = sign_u8(g);
        for r in &row_group {
            *sigma.entry(compose_u8(g, r)).or_insert_with(BigInt::zero) += BigInt::from(s);
        }
    }
    let mut square: HashMap<Vec<u8>, BigInt> = HashMap::new();
    for (g, c) in &sigma {
        for (h, e) in &sigma {
            *square.entry(compose_u8(g, h)).or_insert_with(BigInt::zero) += c * e;
        }
    }
    let (g0, c0) = sigma.iter().find(|(_, c)| !c.is_zero()).unwrap();
    let k = square.get(g0).cloned().unwrap_or_else(BigInt::zero) / c0;
    for (g, c) in &sigma {
        let sq = square.get(g).cloned().unwrap_or_else(BigInt::zero);
        assert_eq!(sq, c * &k, "symmetrizer square not proportional");
    }
    k
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    fn heap(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

fn compose_u8(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn sign_u8(p: &[u8]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i64;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut cur = s;
        while !seen[cur] {
            seen[cur] = true;
            cur = p[cur] as usize;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[test]
fn criterion_06_schur_cross_check() {
    run_criterion("6 Schur cross-check", Duration::from_secs(10), || {
        let caps = Caps::default();
        // (shape rows, m)
        let cases: Vec<(Vec<usize>, usize)> = vec![
            (vec![2, 1], 3),
            (vec![1], 4),
            (vec![1, 1], 4),
            (vec![1, 1, 1], 4),
            (vec![2], 2),
        ];
        for (rows, m) in cases {
            let rank = m - 1;
            let shape = schur::YoungDiagram::from_rows(&rows);
            let count = schur::tableau_basis(&shape, m).len();
            assert_eq!(
                BigInt::from(count),
                hook_content_count(&rows, m),
                "count for rows {rows:?}"
            );
            let k = schur::k_lambda(&shape, &caps).unwrap();
            assert_eq!(k, k_lambda_bruteforce(&rows), "k for rows {rows:?}");
            let mut lambda = vec![0i64; rank];
            for &c in &shape.cols {
                lambda[c - 1] += 1;
            }
            let report =
                schur::schur_vs_weyl_check(rank, &Weight(lambda), &[2, 3, 5], &caps).unwrap();
            assert!(report.invariants_match, "rows {rows:?}: {:?}", report.mismatch);
            assert!(report.highest_tableau_norm_is_k, "rows {rows:?}");
            for (p, entry) in &report.primes {
                assert_eq!(
                    entry.dim_l_schur, entry.dim_l_weyl,
                    "rows {rows:?} at p={p}"
                );
            }
        }
        // The flagship case pins the exact invariant list.
        let report = schur::schur_vs_weyl_check(2, &Weight(vec![1, 1]), &[2, 3], &caps).unwrap();
        assert_eq!(report.snf, "1^7,3");
        assert_eq!(report.k_lambda, "3");
    });
}

struct GeometryArtifacts {
    sp: geometry::ShadowSpace,
    lattice: weylrad::weyl_module::LatticeModule,
    gram: weylrad::weyl_module::GramMatrix,
    emb: geometry::GeometricEmbedding,
    data: geometry::HyperplaneData,
}

fn build_geometry(
    t: DiagramType,
    rank: usize,
    kset: &[usize],
    p: u64,
    caps: &Caps,
) -> GeometryArtifacts {
    let sp = geometry::build_shadow_space(t, rank, kset, p, caps).unwrap();
    let dual_ks = geometry::dual_kset(t, rank, &sp.descriptor.kset).unwrap();
    let dual = if dual_ks == sp.descriptor.kset {
        sp.clone()
    } else {
        geometry::build_shadow_space(t, rank, &dual_ks, p, caps).unwrap()
    };
    let (_, lattice) = build_lattice_for_nodes(t, rank, &sp.descriptor.kset, caps).unwrap();
    let gram = contravariant_gram(&lattice);
    let emb = geometry::build_embedding(&sp, &lattice).unwrap();
    let data = geometry::hyperplane_data(&sp, &emb, &dual).unwrap();
    GeometryArtifacts {
        sp,
        lattice,
        gram,
        emb,
        data,
    }
}

#[test]
fn criterion_07_geometry_theorems() {
    run_criterion("7 geometry Theorem A/B", Duration::from_secs(60), || {
        let caps = Caps::default();
        let cases: Vec<(DiagramType, usize, Vec<usize>)> = vec![
            (DiagramType::A, 2, vec![1, 2]),
            (DiagramType::A, 2, vec![1]),
            (DiagramType::A, 3, vec![2]),
            (DiagramType::C, 2, vec![1]),
            (DiagramType::C, 2, vec![2]),
        ];
        for (t, rank, kset) in &cases {
            for p in [2u64, 3] {
                let art = build_geometry(*t, *rank, kset, p, &caps);
                let pol = geometry::check_polarized(&art.sp, &art.emb, &art.data);
                assert!(
                    pol.polarized && pol.induced == pol.dual_points,
                    "{}{} K={kset:?} p={p}: {:?}",
                    t.letter(),
                    rank,
                    pol.failures
                );
                let radical = geometry::polar_radical_geometric(&art.sp, &art.data).unwrap();
                assert!(
                    geometry::radicals_match(&radical, &art.emb, &art.lattice, &art.gram, p).unwrap(),
                    "{}{} K={kset:?} p={p}: radical mismatch",
                    t.letter(),
                    rank
                );
                for h in &art.data.point_sets {
                    assert!(
                        geometry::complement_connected(&art.sp, h),
                        "{}{} K={kset:?} p={p}: disconnected complement",
                        t.letter(),
                        rank
                    );
                }
                if *t == DiagramType::A && kset == &vec![1, 2] {
                    let (want_rad, want_quot) = if p == 3 { (1, 7) } else { (0, 8) };
                    assert_eq!(radical.len(), want_rad);
                    match geometry::quotient_embedding(&art.emb, &radical) {
                        geometry::QuotientOutcome::Quotient(q) => {
                            assert_eq!(q.target_dim, want_quot);
                            // The quotient is polarized again.
                            let spans: Vec<Vec<Vec<u64>>> = art
                                .data
                                .point_sets
                                .iter()
                                .map(|set| {
                                    let rows: Vec<Vec<u64>> =
                                        set.iter().map(|&i| q.images[i].clone()).collect();
                                    ModMatrix::from_rows(p, rows).unwrap().row_space_basis()
                                })
                                .collect();
                            let qdata = geometry::HyperplaneData {
                                point_sets: art.data.point_sets.clone(),
                                spans,
                            };
                            let qpol = geometry::check_polarized(&art.sp, &q, &qdata);
                            assert!(qpol.polarized);
                        }
                        geometry::QuotientOutcome::Violation(w) => {
                            panic!("radical quotient failed: {w}")
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_08_residual_polarization() {
    run_criterion("8 residual polarization", Duration::from_secs(60), || {
        let caps = Caps::default();
        let art = build_geometry(DiagramType::A, 3, &[2], 2, &caps);
        // Every point-residue (type-1 and type-3 elements) restriction is
        // polarized; the embedding is radical-free, so it is already the
        // minimal quotient and the residue radicals must vanish.
        let radical = geometry::polar_radical_geometric(&art.sp, &art.data).unwrap();
        assert!(radical.is_empty());
        for t in [1usize, 3] {
            let mut count = 0usize;
            for sub in enumerate_projective_subspaces(4, t, 2) {
                let flag = vec![(t, sub)];
                let report =
                    geometry::residue_check(&art.sp, &art.emb, &art.data, &flag).unwrap();
                assert!(report.polarized, "residue type {t} not polarized");
                assert_eq!(report.radical_dim, 0, "residue type {t} radical");
                count += 1;
            }
            assert_eq!(count, 15, "type-{t} elements of the rank-3 space over F2");
        }
        // The flag geometry with a nontrivial radical: residues of the
        // minimal quotient have trivial polar radical as well.
        let art2 = build_geometry(DiagramType::A, 2, &[1, 2], 3, &caps);
        let radical2 = geometry::polar_radical_geometric(&art2.sp, &art2.data).unwrap();
        assert_eq!(radical2.len(), 1);
        let geometry::QuotientOutcome::Quotient(q) =
            geometry::quotient_embedding(&art2.emb, &radical2)
        else {
            panic!("radical subspace must factor");
        };
        let spans: Vec<Vec<Vec<u64>>> = art2
            .data
            .point_sets
            .iter()
            .map(|set| {
                let rows: Vec<Vec<u64>> = set.iter().map(|&i| q.images[i].clone()).collect();
                ModMatrix::from_rows(3, rows).unwrap().row_space_basis()
            })
            .collect();
        let qdata = geometry::HyperplaneData {
            point_sets: art2.data.point_sets.clone(),
            spans,
        };
        for t in [1usize, 2] {
            for sub in enumerate_projective_subspaces(3, t, 3) {
                let flag = vec![(t, sub)];
                let pts = geometry::residue_points(&art2.sp, &flag);
                if pts.len() < 2 {
                    continue;
                }
                let report = geometry::residue_check(&art2.sp, &q, &qdata, &flag).unwrap();
                assert!(report.polarized);
                assert_eq!(report.radical_dim, 0, "minimal quotient residue radical");
            }
        }
    });
}

/// Enumerates k-subspaces of F_p^m in echelon form (projective geometry
/// only; used to drive residue flags).
fn enumerate_projective_subspaces(m: usize, k: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let sp = geometry::build_shadow_space(
        DiagramType::A,
        m - 1,
        &[k],
        p,
        &Caps::default(),
    )
    .unwrap();
    sp.points.into_iter().map(|pt| pt.parts[0].clone()).collect()
}

#[test]
fn criterion_09_opposition_maps() {
    run_criterion("9 opposition maps", Duration::from_secs(5), || {
        let check = |t: DiagramType, n: usize, expect: &dyn Fn(usize) -> usize| {
            let rs = build_root_system(t, n).unwrap();
            let all: Vec<usize> = (1..=n).collect();
            let opp = weylrad::root_data::opposition_map(&rs, &all).unwrap();
            // Conjugation oracle: w0 s_j w0^{-1} equals s_{opp(j)} as a
            // matrix on the weight lattice.
            let w0 = weylrad::root_data::longest_element(&rs, &all).unwrap();
            let w0inv = weylrad::root_data::WeylElement {
                word: w0.word.iter().rev().copied().collect(),
            };
            for j in 1..=n {
                assert_eq!(opp[&j], expect(j), "{}{} node {}", t.letter(), n, j);
                let i = opp[&j];
                for basis in 1..=n {
                    let mu = Weight::fundamental(n, basis);
                    let conj = rs.apply_to_weight(
                        &w0,
                        &rs.reflect_weight(&rs.apply_to_weight(&w0inv, &mu), j),
                    );
                    assert_eq!(conj, rs.reflect_weight(&mu, i), "conjugation oracle");
                }
            }
        };
        for n in 1..=4usize {
            check(DiagramType::A, n, &|k| n + 1 - k);
        }
        for n in 2..=4usize {
            check(DiagramType::C, n, &|k| k);
        }
        check(DiagramType::D, 3, &|k| match k {
            2 => 3,
            3 => 2,
            other => other,
        });
        check(DiagramType::E, 6, &|k| match k {
            1 => 6,
            6 => 1,
            3 => 5,
            5 => 3,
            other => other,
        });
    });
}

#[test]
fn criterion_10_invariant_suites() {
    run_criterion("10 invariant suites", Duration::from_secs(120), || {
        let caps = Caps::default();
        // Lattices exercised by the other criteria.
        let lattice_cases: Vec<(DiagramType, usize, Vec<usize>)> = vec![
            (DiagramType::A, 2, vec![1, 2]),
            (DiagramType::A, 3, vec![2]),
            (DiagramType::C, 2, vec![2]),
            (DiagramType::C, 2, vec![1]),
            (DiagramType::C, 3, vec![1]),
            (DiagramType::D, 3, vec![1]),
            (DiagramType::B, 2, vec![1]),
        ];
        for (t, n, kset) in &lattice_cases {
            let ambient = wedge_tensor_ambient(*t, *n, kset, &caps).unwrap();
            let lattice = generate_lattice(&ambient, &caps).unwrap();
            let gram = contravariant_gram(&lattice);
            // Contravariance as a matrix identity for divided powers.
            for ri in 0..ambient.rs.positive_roots.len() {
                for a in 1..=2usize {
                    let act = |root: SignedRoot| -> Option<IntMatrix> {
                        let mut rows = Vec::new();
                        for r in 0..lattice.basis.rows() {
                            let img =
                                ambient.divided_power_apply(root, a, &lattice.basis.row_vec(r));
                            rows.push(lattice.coords(&img)?);
                        }
                        Some(IntMatrix::from_rows(rows))
                    };
                    let my = act(SignedRoot::Negative(ri)).expect("closure");
                    let mx = act(SignedRoot::Positive(ri)).expect("closure");
                    assert_eq!(
                        my.mul(&gram.matrix),
                        gram.matrix.mul(&mx.transpose()),
                        "contravariance {}{} root {}",
                        t.letter(),
                        n,
                        ri
                    );
                }
            }
            // Weight-block orthogonality.
            for i in 0..lattice.rank() {
                for j in 0..i {
                    if lattice.weights[i] != lattice.weights[j] {
                        assert!(gram.matrix.get(i, j).is_zero());
                    }
                }
            }
            // Fundamental reflection representatives are isometries mod p.
            for p in [2u64, 3, 5] {
                let gram_mod = ModMatrix::from_int_matrix(&gram.matrix, p).unwrap();
                for simple in 0..*n {
                    let nmat = ambient.weyl_generator_int(simple);
                    let image = lattice.basis.mul(&nmat.transpose());
                    let rows: Vec<Vec<BigInt>> = (0..image.rows())
                        .map(|r| lattice.coords(&image.row_vec(r)).expect("stable"))
                        .collect();
                    let c = IntMatrix::from_rows(rows);
                    let conj = c.mul(&gram.matrix).mul(&c.transpose());
                    let conj_mod = ModMatrix::from_int_matrix(&conj, p).unwrap();
                    assert_eq!(conj_mod, gram_mod, "isometry mod {p}");
                }
            }
            // Two routes to the modular dimension agree for p <= 13.
            let smith = gram.smith_invariants();
            for p in [2u64, 3, 5, 7, 11, 13] {
                let by_rank = modular_dim(&gram, p).unwrap();
                let by_smith = smith
                    .iter()
                    .filter(|d| !((*d) % BigInt::from(p)).is_zero())
                    .count();
                assert_eq!(by_rank, by_smith);
            }
        }
        // Straightening is a projection: exhaustive over all fillings with
        // at most 6 boxes and entries up to 4.
        let shapes: Vec<Vec<usize>> = partitions_up_to(6, 4);
        for cols in shapes {
            let shape = schur::YoungDiagram::new(cols.clone());
            let d = shape.boxes();
            let mut st = schur::Straightener::new();
            let mut word = vec![1u8; d];
            loop {
                let f = schur::Filling::from_column_word(&shape, &word);
                let v = st.straighten(&f);
                for t in v.terms.keys() {
                    assert!(t.is_tableau());
                }
                let again = st.straighten_vector(&v);
                assert_eq!(again, v, "idempotence on {f}");
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    if word[i] < 4 {
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
        // Hyperplane axiom on the geometries of criterion 7 at p = 2.
        for (t, rank, kset) in [
            (DiagramType::A, 2, vec![1, 2]),
            (DiagramType::C, 2, vec![1]),
            (DiagramType::C, 2, vec![2]),
        ] {
            let art = build_geometry(t, rank, &kset, 2, &caps);
            for set in &art.data.point_sets {
                let inset: BTreeSet<usize> = set.iter().copied().collect();
                for line in &art.sp.lines {
                    let cnt = line.points.iter().filter(|q| inset.contains(q)).count();
                    assert!(
                        cnt == 1 || cnt == line.points.len(),
                        "hyperplane axiom {}{}",
                        t.letter(),
                        rank
                    );
                }
            }
        }
    });
}

/// All column-length multisets with at most `total` boxes and parts at most
/// `maxpart` (nonempty).
fn partitions_up_to(total: usize, maxpart: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(remaining: usize, maxpart: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        let cap = cur.last().copied().unwrap_or(maxpart);
        for part in (1..=cap.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, maxpart, cur, out);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    rec(total, maxpart, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}
