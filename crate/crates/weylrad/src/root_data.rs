//! Root systems, weights and Weyl-group machinery for the classical diagrams
//! A, B, C, D, with Cartan data additionally for E6 and E7 so that opposition
//! maps can be queried there.
//!
//! Roots are stored as integer vectors in the simple-root basis and weights as
//! integer vectors in the fundamental-weight basis; conversion goes through
//! the Cartan matrix, keeping all arithmetic exact. Node labels follow the
//! standard Bourbaki numbering.

use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum DiagramType {
    A,
    B,
    C,
    D,
    E,
}

impl DiagramType {
    pub fn letter(self) -> char {
        match self {
            DiagramType::A => 'A',
            DiagramType::B => 'B',
            DiagramType::C => 'C',
            DiagramType::D => 'D',
            DiagramType::E => 'E',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(DiagramType::A),
            'B' => Some(DiagramType::B),
            'C' => Some(DiagramType::C),
            'D' => Some(DiagramType::D),
            'E' => Some(DiagramType::E),
            _ => None,
        }
    }
}

/// Integer weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, node: usize) -> Self {
        let mut c = vec![0; rank];
        c[node - 1] = 1;
        Weight(c)
    }

    /// lambda_K = sum of the fundamental weights indexed by `nodes` (1-based).
    pub fn lambda_k(rank: usize, nodes: &[usize]) -> Self {
        let mut c = vec![0; rank];
        for &k in nodes {
            c[k - 1] += 1;
        }
        Weight(c)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

/// A Weyl-group element as a word in simple reflections, applied left to
/// right: the first letter acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>, // 1-based simple-reflection indices
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Root system with Cartan matrix, positive roots and simple-root norms.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub diagram_type: DiagramType,
    pub rank: usize,
    /// `cartan[i][j]` = value of the simple root alpha_i on the coroot H_j.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in the simple-root basis, sorted by height then lex.
    pub positive_roots: Vec<Vec<i64>>,
    /// Squared lengths of the simple roots (short roots normalized to 2).
    pub norm2: Vec<i64>,
    root_set: BTreeSet<Vec<i64>>,
}

pub fn build_root_system(diagram_type: DiagramType, rank: usize) -> Result<RootSystem> {
    let supported = match diagram_type {
        DiagramType::A => rank >= 1,
        DiagramType::B | DiagramType::C => rank >= 2,
        DiagramType::D => rank >= 3,
        DiagramType::E => rank == 6 || rank == 7,
    };
    if !supported {
        return Err(Error::UnsupportedDiagram {
            dtype: diagram_type.letter(),
            rank,
        });
    }
    let cartan = cartan_matrix(diagram_type, rank);
    let norm2 = simple_norms(diagram_type, rank);
    // Symmetrizability check: a_ij * norm2_j == a_ji * norm2_i.
    for i in 0..rank {
        assert_eq!(cartan[i][i], 2);
        for j in 0..rank {
            if i != j {
                assert!(cartan[i][j] <= 0);
                assert_eq!(cartan[i][j] * norm2[j], cartan[j][i] * norm2[i]);
            }
        }
    }
    // Close the simple roots under simple reflections.
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..rank {
        let mut c = vec![0i64; rank];
        c[i] = 1;
        all.insert(c.clone());
        queue.push_back(c);
    }
    while let Some(c) = queue.pop_front() {
        for i in 0..rank {
            let img = reflect_root(&cartan, &c, i);
            if all.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    let mut positive: Vec<Vec<i64>> = all
        .iter()
        .filter(|c| c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    for c in &all {
        let nonneg = c.iter().all(|&x| x >= 0);
        let nonpos = c.iter().all(|&x| x <= 0);
        assert!(nonneg || nonpos, "root with mixed signs: {c:?}");
    }
    positive.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
    let expected = expected_positive_count(diagram_type, rank);
    assert_eq!(
        positive.len(),
        expected,
        "positive root count for {}{}",
        diagram_type.letter(),
        rank
    );
    Ok(RootSystem {
        diagram_type,
        rank,
        cartan,
        positive_roots: positive,
        norm2,
        root_set: all,
    })
}

fn expected_positive_count(t: DiagramType, n: usize) -> usize {
    match t {
        DiagramType::A => n * (n + 1) / 2,
        DiagramType::B | DiagramType::C => n * n,
        DiagramType::D => n * (n - 1),
        DiagramType::E => match n {
            6 => 36,
            7 => 63,
            _ => unreachable!(),
        },
    }
}

fn cartan_matrix(t: DiagramType, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    fn bond(a: &mut [Vec<i64>], i: usize, j: usize) {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    match t {
        DiagramType::A => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
        }
        DiagramType::B => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
            // alpha_n short: its coroot pairs with alpha_{n-1} as -2.
            a[n - 2][n - 1] = -2;
            a[n - 1][n - 2] = -1;
        }
        DiagramType::C => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
            a[n - 2][n - 1] = -1;
            a[n - 1][n - 2] = -2;
        }
        DiagramType::D => {
            for i in 0..n.saturating_sub(2) {
                bond(&mut a, i, i + 1);
            }
            // Fork: both end nodes attach to node n-2.
            if n >= 3 {
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                bond(&mut a, n - 3, n - 1);
            }
        }
        DiagramType::E => {
            // Bourbaki: chain 1-3-4-5-6(-7), node 2 attached to node 4.
            let chain: Vec<usize> = match n {
                6 => vec![0, 2, 3, 4, 5],
                7 => vec![0, 2, 3, 4, 5, 6],
                _ => unreachable!(),
            };
            for w in chain.windows(2) {
                bond(&mut a, w[0], w[1]);
            }
            bond(&mut a, 1, 3);
        }
    }
    a
}

fn simple_norms(t: DiagramType, n: usize) -> Vec<i64> {
    match t {
        DiagramType::A | DiagramType::D | DiagramType::E => vec![2; n],
        DiagramType::B => {
            let mut v = vec![4; n];
            v[n - 1] = 2;
            v
        }
        DiagramType::C => {
            let mut v = vec![2; n];
            v[n - 1] = 4;
            v
        }
    }
}

/// Simple reflection s_i on a root in simple-root coordinates.
fn reflect_root(cartan: &[Vec<i64>], c: &[i64], i: usize) -> Vec<i64> {
    // alpha(H_i) = sum_j c_j * cartan[j][i]
    let pairing: i64 = c.iter().zip(cartan).map(|(&cj, row)| cj * row[i]).sum();
    let mut out = c.to_vec();
    out[i] -= pairing;
    out
}

impl RootSystem {
    /// Simple reflection s_i (1-based) on a weight in fundamental coordinates.
    pub fn reflect_weight(&self, w: &Weight, i: usize) -> Weight {
        let idx = i - 1;
        let coeff = w.0[idx];
        let mut out = w.0.clone();
        for j in 0..self.rank {
            out[j] -= coeff * self.cartan[idx][j];
        }
        Weight(out)
    }

    /// Applies a Weyl word to a weight, first letter first.
    pub fn apply_to_weight(&self, w: &WeylElement, mu: &Weight) -> Weight {
        let mut cur = mu.clone();
        for &i in &w.word {
            cur = self.reflect_weight(&cur, i);
        }
        cur
    }

    /// Applies a Weyl word to a root in simple-root coordinates.
    pub fn apply_to_root(&self, w: &WeylElement, c: &[i64]) -> Vec<i64> {
        let mut cur = c.to_vec();
        for &i in &w.word {
            cur = reflect_root(&self.cartan, &cur, i - 1);
        }
        cur
    }

    /// Matrix of the Weyl element on the weight lattice in fundamental
    /// coordinates; row j is the image of the j-th fundamental weight.
    pub fn weight_matrix(&self, w: &WeylElement) -> Vec<Vec<i64>> {
        (1..=self.rank)
            .map(|j| self.apply_to_weight(w, &Weight::fundamental(self.rank, j)).0)
            .collect()
    }

    pub fn is_root(&self, c: &[i64]) -> bool {
        self.root_set.contains(c)
    }

    /// Fundamental coordinates of a vector given in simple-root coordinates.
    pub fn root_to_weight(&self, c: &[i64]) -> Weight {
        let mut out = vec![0i64; self.rank];
        for (i, &ci) in c.iter().enumerate() {
            for j in 0..self.rank {
                out[j] += ci * self.cartan[i][j];
            }
        }
        Weight(out)
    }

    /// Simple-root coordinates of `lambda - mu`, or None when the difference
    /// is not in the root lattice.
    pub fn weight_diff_in_roots(&self, lambda: &Weight, mu: &Weight) -> Option<Vec<i64>> {
        // Solve c * cartan = lambda - mu over the integers by elimination on
        // a copy of the Cartan matrix (small, exact rational arithmetic).
        use num_rational::BigRational;
        use num_traits::{Signed, Zero};
        let n = self.rank;
        let rhs: Vec<i64> = (0..n).map(|j| lambda.0[j] - mu.0[j]).collect();
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.cartan[j][i].into()))
                    .chain([BigRational::from_integer(rhs[i].into())])
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for c in col..=n {
                aug[col][c] = &aug[col][c] / &p;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=n {
                        let v = &aug[r][c] - &f * &aug[col][c];
                        aug[r][c] = v;
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        for row in aug.iter().take(n) {
            let v = &row[n];
            if !v.is_integer() {
                return None;
            }
            let i = v.to_integer();
            if i.abs() > num_bigint::BigInt::from(i64::MAX) {
                return None;
            }
            out.push(i64::try_from(i).ok()?);
        }
        Some(out)
    }

    /// Height of `lambda - mu` in the root lattice (sum of simple-root
    /// coordinates); None when the difference is not in the root lattice.
    pub fn drop_height(&self, lambda: &Weight, mu: &Weight) -> Option<i64> {
        self.weight_diff_in_roots(lambda, mu)
            .map(|c| c.iter().sum())
    }

    /// Positive roots supported on the node subset `j` (1-based indices).
    pub fn positive_roots_on(&self, j: &[usize]) -> Vec<Vec<i64>> {
        let in_j: Vec<bool> = {
            let mut v = vec![false; self.rank];
            for &node in j {
                v[node - 1] = true;
            }
            v
        };
        self.positive_roots
            .iter()
            .filter(|c| c.iter().enumerate().all(|(i, &x)| x == 0 || in_j[i]))
            .cloned()
            .collect()
    }
}

/// Longest element of the parabolic Weyl subgroup generated by the simple
/// reflections in `j` (1-based node indices).
///
/// Greedy descent on the sum of fundamental weights of `j`: while some node
/// of `j` pairs positively, reflect there. The accumulated word is reduced
/// and sends every positive root supported on `j` to a negative root.
pub fn longest_element(rs: &RootSystem, j: &[usize]) -> Result<WeylElement> {
    if j.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &node in j {
        if node == 0 || node > rs.rank {
            return Err(Error::NodeOutOfRange {
                node,
                rank: rs.rank,
            });
        }
    }
    let mut mu = Weight::lambda_k(rs.rank, &dedup(j));
    let mut word = Vec::new();
    while let Some(&i) = j.iter().find(|&&i| mu.0[i - 1] > 0) {
        mu = rs.reflect_weight(&mu, i);
        word.push(i);
    }
    let w = WeylElement { word };
    debug_assert_eq!(w.len(), rs.positive_roots_on(&dedup(j)).len());
    Ok(w)
}

fn dedup(j: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = j.iter().copied().collect();
    set.into_iter().collect()
}

/// The involution i -> j on the node set `j_nodes` induced by conjugating
/// simple reflections with the longest word of the parabolic subgroup:
/// w_J maps alpha_j to -alpha_{sigma(j)}.
pub fn opposition_map(rs: &RootSystem, j_nodes: &[usize]) -> Result<HashMap<usize, usize>> {
    let nodes = dedup(j_nodes);
    let w = longest_element(rs, &nodes)?;
    let mut map = HashMap::new();
    for &jn in &nodes {
        let mut alpha = vec![0i64; rs.rank];
        alpha[jn - 1] = 1;
        let image = rs.apply_to_root(&w, &alpha);
        let neg: Vec<i64> = image.iter().map(|&x| -x).collect();
        let target = (0..rs.rank).find(|&i| {
            let mut e = vec![0i64; rs.rank];
            e[i] = 1;
            e == neg
        });
        let Some(i) = target else {
            panic!("longest word did not map simple root {jn} to a negative simple root");
        };
        map.insert(jn, i + 1);
    }
    // Involution and diagram-automorphism checks.
    for (&a, &b) in &map {
        assert_eq!(map[&b], a, "opposition not involutive at {a}");
        for (&c, &d) in &map {
            assert_eq!(
                rs.cartan[a - 1][c - 1],
                rs.cartan[b - 1][d - 1],
                "opposition does not preserve the Cartan matrix"
            );
        }
    }
    Ok(map)
}

/// Orbit of a weight under the Weyl group, by breadth-first closure under
/// simple reflections with a canonical set representation.
pub fn weyl_orbit(rs: &RootSystem, lambda: &Weight) -> BTreeSet<Weight> {
    let mut orbit: BTreeSet<Weight> = BTreeSet::new();
    let mut queue = VecDeque::new();
    orbit.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(mu) = queue.pop_front() {
        for i in 1..=rs.rank {
            let img = rs.reflect_weight(&mu, i);
            if orbit.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    orbit
}

/// A fundamental weight is minuscule when the full weight set of the
/// irreducible module is a single Weyl orbit, i.e. the orbit size equals the
/// Weyl dimension.
pub fn is_minuscule(rs: &RootSystem, k: usize) -> Result<bool> {
    if k == 0 || k > rs.rank {
        return Err(Error::NodeOutOfRange {
            node: k,
            rank: rs.rank,
        });
    }
    let lambda = Weight::fundamental(rs.rank, k);
    let orbit = weyl_orbit(rs, &lambda);
    let dim = crate::weyl_module::weyl_dim_formula(rs, &lambda)?;
    Ok(num_bigint::BigInt::from(orbit.len()) == dim)
}
