//! Modular invariants of wedge modules for the polar types. The expected
//! values follow the classical patterns: the symplectic degree-2 module
//! loses a one-dimensional radical exactly when the characteristic divides
//! the rank; the orthogonal degree-2 (adjoint) modules lose their center in
//! characteristic 2; the odd orthogonal natural module loses its nucleus in
//! characteristic 2. The singular-form radical cross-check runs inside
//! radical_mod_p on every case here.

use weylrad::chevalley_ops::wedge_tensor_ambient;
use weylrad::root_data::DiagramType;
use weylrad::weyl_module::{contravariant_gram, generate_lattice, modular_dim, radical_mod_p};
use weylrad::Caps;

fn case(t: DiagramType, n: usize, k: usize) -> (usize, Vec<(u64, usize, usize)>) {
    let caps = Caps::default();
    let amb = wedge_tensor_ambient(t, n, &[k], &caps).unwrap();
    let lat = generate_lattice(&amb, &caps).unwrap();
    let gram = contravariant_gram(&lat);
    let per_prime = [2u64, 3, 5, 7]
        .iter()
        .map(|&p| {
            (
                p,
                modular_dim(&gram, p).unwrap(),
                radical_mod_p(&lat, &gram, p).unwrap().len(),
            )
        })
        .collect();
    (lat.rank(), per_prime)
}

#[test]
fn symplectic_degree_two_radical_iff_p_divides_rank() {
    for (n, dim) in [(2usize, 5usize), (3, 14), (4, 27)] {
        let (rank, primes) = case(DiagramType::C, n, 2);
        assert_eq!(rank, dim);
        for (p, dim_l, rad) in primes {
            let drops = (n as u64).is_multiple_of(p);
            assert_eq!(rad, usize::from(drops), "C{n} p={p}");
            assert_eq!(dim_l, dim - usize::from(drops), "C{n} p={p}");
        }
    }
}

#[test]
fn orthogonal_adjoints_lose_center_in_char_two() {
    let (rank, primes) = case(DiagramType::B, 3, 2);
    assert_eq!(rank, 21);
    for (p, dim_l, rad) in primes {
        let want_rad = if p == 2 { 7 } else { 0 };
        assert_eq!(rad, want_rad, "B3 p={p}");
        assert_eq!(dim_l, 21 - want_rad);
    }
    let (rank, primes) = case(DiagramType::D, 4, 2);
    assert_eq!(rank, 28);
    for (p, dim_l, rad) in primes {
        let want_rad = if p == 2 { 2 } else { 0 };
        assert_eq!(rad, want_rad, "D4 p={p}");
        assert_eq!(dim_l, 28 - want_rad);
    }
}

#[test]
fn odd_orthogonal_natural_loses_nucleus_in_char_two() {
    for n in [2usize, 3] {
        let (rank, primes) = case(DiagramType::B, n, 1);
        assert_eq!(rank, 2 * n + 1);
        for (p, dim_l, rad) in primes {
            let want_rad = usize::from(p == 2);
            assert_eq!(rad, want_rad, "B{n} p={p}");
            assert_eq!(dim_l, 2 * n + 1 - want_rad);
        }
    }
}
