//! Irreducible crystallographic root data with exact lattice arithmetic.
//!
//! Characters live in the simple-root basis, cocharacters in the simple-coroot
//! basis; both are plain integer (or rational) coordinate vectors. The Cartan
//! matrix is stored as `cartan[i][j] = <alpha_j, alpha_i^vee>`, so row `i`
//! pairs every simple root against the `i`-th simple coroot and the reflection
//! `s_i` acts on a character `x` by `x - (C x)_i e_i`.
//!
//! Root lists are ordered canonically: positive roots graded by height and
//! lexicographically within a height level, followed by their negatives in the
//! same order. Every permutation encoding of a Weyl element in this crate
//! refers to that fixed order.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// An irreducible Cartan type, Bourbaki node labeling (0-based internally).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

/// Constructions are capped at rank 8; everything the sweeps certify lives
/// there, and the E-series does not extend past it anyway.
pub const MAX_RANK: usize = 8;

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok || rank > MAX_RANK {
            return Err(Error::InvalidCartanType { series: series.letter(), rank });
        }
        Ok(CartanType { series, rank })
    }

    /// Parses a bare type string like "A3" or "E8" (no twist prefix).
    pub fn parse(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::ParseType(s.to_string()))?;
        let series = match letter {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(Error::ParseType(s.to_string())),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::ParseType(s.to_string()))?;
        CartanType::new(series, rank)
    }

    /// All irreducible types up to the given rank, in a fixed order
    /// (A1..A8, B2..B8, C2..C8, D4..D8, E6..E8, F4, G2 for max_rank = 8).
    pub fn all_up_to_rank(max_rank: usize) -> Vec<CartanType> {
        let mut out = Vec::new();
        let mut push_range = |series: Series, lo: usize| {
            for r in lo..=max_rank.min(MAX_RANK) {
                if let Ok(ct) = CartanType::new(series, r) {
                    out.push(ct);
                }
            }
        };
        push_range(Series::A, 1);
        push_range(Series::B, 2);
        push_range(Series::C, 2);
        push_range(Series::D, 4);
        push_range(Series::E, 6);
        push_range(Series::F, 4);
        push_range(Series::G, 2);
        out
    }

    /// Cartan matrix with `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        // (i, j, <alpha_j, alpha_i^vee>, <alpha_i, alpha_j^vee>) per edge
        let mut bond = |c: &mut Vec<Vec<i64>>, i: usize, j: usize, ij: i64, ji: i64| {
            c[i][j] = ij;
            c[j][i] = ji;
        };
        match self.series {
            Series::A => {
                for i in 0..n - 1 {
                    bond(&mut c, i, i + 1, -1, -1);
                }
            }
            Series::B => {
                // last node short: <alpha_n, alpha_{n-1}^vee> = -1, <alpha_{n-1}, alpha_n^vee> = -2
                for i in 0..n - 2 {
                    bond(&mut c, i, i + 1, -1, -1);
                }
                bond(&mut c, n - 2, n - 1, -1, -2);
            }
            Series::C => {
                // last node long
                for i in 0..n - 2 {
                    bond(&mut c, i, i + 1, -1, -1);
                }
                bond(&mut c, n - 2, n - 1, -2, -1);
            }
            Series::D => {
                for i in 0..n - 3 {
                    bond(&mut c, i, i + 1, -1, -1);
                }
                bond(&mut c, n - 3, n - 2, -1, -1);
                bond(&mut c, n - 3, n - 1, -1, -1);
            }
            Series::E => {
                // Bourbaki: chain 1-3-4-5(-6-7-8), node 2 hangs off node 4.
                bond(&mut c, 0, 2, -1, -1);
                bond(&mut c, 1, 3, -1, -1);
                for i in 2..n - 1 {
                    bond(&mut c, i, i + 1, -1, -1);
                }
            }
            Series::F => {
                // alpha_1, alpha_2 long; alpha_3, alpha_4 short.
                bond(&mut c, 0, 1, -1, -1);
                bond(&mut c, 1, 2, -1, -2);
                bond(&mut c, 2, 3, -1, -1);
            }
            Series::G => {
                // alpha_1 short, alpha_2 long.
                bond(&mut c, 0, 1, -3, -1);
            }
        }
        c
    }

    /// |W| by the classical order formulas.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.series {
            Series::A => fact(n + 1),
            Series::B | Series::C => (1u128 << n) * fact(n),
            Series::D => (1u128 << (n - 1)) * fact(n),
            Series::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Series::F => 1_152,
            Series::G => 12,
        }
    }

    /// |Phi| by the classical count formulas, used as an independent check on
    /// the closure construction.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n * (n + 1),
            Series::B | Series::C => 2 * n * n,
            Series::D => 2 * n * (n - 1),
            Series::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Series::F => 48,
            Series::G => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

/// An irreducible root datum: the full root list in the simple-root basis,
/// the canonical root order, the highest root and the fundamental coweights.
#[derive(Debug)]
pub struct RootDatum {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
    positive_count: usize,
    simple_indices: Vec<usize>,
    highest_root: Vec<i64>,
    fundamental_coweights: Vec<Vec<BigRational>>,
    /// Permutation of the root list induced by each simple reflection.
    simple_perms: Vec<Vec<u32>>,
    fingerprint: u64,
}

/// Builds the root datum for a valid type. Closure runs height by height:
/// `beta + alpha_i` is a root iff `p - <beta, alpha_i^vee> > 0`, where `p` is
/// the largest `k` with `beta - k alpha_i` a root.
pub fn build_root_system(cartan_type: CartanType) -> Arc<RootDatum> {
    Arc::new(RootDatum::new(cartan_type))
}

impl RootDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        let n = cartan_type.rank;
        let cartan = cartan_type.cartan_matrix();

        let pair_with_coroot = |beta: &[i64], i: usize| -> i64 {
            (0..n).map(|j| cartan[i][j] * beta[j]).sum()
        };

        let mut levels: Vec<Vec<Vec<i64>>> = Vec::new();
        let mut known: HashMap<Vec<i64>, usize> = HashMap::new(); // root -> height
        let mut simples: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                v
            })
            .collect();
        simples.sort();
        for s in &simples {
            known.insert(s.clone(), 1);
        }
        levels.push(simples);

        loop {
            let last = levels.last().unwrap().clone();
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &last {
                for i in 0..n {
                    // p = how far the alpha_i-string extends below beta
                    let mut p = 0i64;
                    loop {
                        let mut probe = beta.clone();
                        probe[i] -= p + 1;
                        if probe.iter().all(|&x| x == 0) || !known.contains_key(&probe) {
                            break;
                        }
                        p += 1;
                    }
                    if p - pair_with_coroot(beta, i) > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) && !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            let h = levels.len() + 1;
            for r in &next {
                known.insert(r.clone(), h);
            }
            levels.push(next);
        }

        let top = levels.last().unwrap();
        assert_eq!(top.len(), 1, "irreducible systems have a unique highest root");
        let highest_root = top[0].clone();

        let positives: Vec<Vec<i64>> = levels.into_iter().flatten().collect();
        let positive_count = positives.len();
        assert_eq!(2 * positive_count, cartan_type.root_count());

        let mut roots = positives.clone();
        roots.extend(positives.iter().map(|r| r.iter().map(|&x| -x).collect()));
        let root_index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

        let simple_indices: Vec<usize> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                root_index[&v]
            })
            .collect();

        // Fundamental coweights: solve C^T m = e_j; row j of C^{-1}.
        let c_rat = linalg::from_int_rows(&cartan);
        let c_inv = linalg::invert(&c_rat).expect("Cartan matrices are invertible");
        let fundamental_coweights: Vec<Vec<BigRational>> = (0..n).map(|j| c_inv[j].clone()).collect();

        let simple_perms: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                roots
                    .iter()
                    .map(|beta| {
                        let mut img = beta.clone();
                        img[i] -= pair_with_coroot(beta, i);
                        root_index[&img] as u32
                    })
                    .collect()
            })
            .collect();

        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        cartan_type.hash(&mut hasher);
        cartan.hash(&mut hasher);
        let fingerprint = hasher.finish();

        RootDatum {
            cartan_type,
            cartan,
            roots,
            root_index,
            positive_count,
            simple_indices,
            highest_root,
            fundamental_coweights,
            simple_perms,
            fingerprint,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.positive_count
    }

    /// Index of -beta given the index of beta.
    pub fn negation(&self, idx: usize) -> usize {
        if idx < self.positive_count {
            idx + self.positive_count
        } else {
            idx - self.positive_count
        }
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Index of alpha_i in the root list.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.simple_indices[i]
    }

    pub fn simple_perm(&self, i: usize) -> &[u32] {
        &self.simple_perms[i]
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    /// Fundamental coweights in the simple-coroot basis (dual basis to Delta).
    pub fn fundamental_coweights(&self) -> &[Vec<BigRational>] {
        &self.fundamental_coweights
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `<beta, alpha_i^vee>` for an integer character vector.
    pub fn pair_with_simple_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| self.cartan[i][j] * beta[j]).sum()
    }

    /// The perfect pairing: chi in the simple-root basis, nu in the
    /// simple-coroot basis. `<alpha_i, alpha_j^vee> = cartan[j][i]`.
    pub fn pairing(&self, chi: &[BigRational], nu: &[BigRational]) -> Result<BigRational> {
        let n = self.rank();
        if chi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: chi.len() });
        }
        if nu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: nu.len() });
        }
        let mut acc = BigRational::zero();
        for (i, x) in chi.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nu.iter().enumerate() {
                if !y.is_zero() {
                    acc += x * y * linalg::rat(self.cartan[j][i]);
                }
            }
        }
        Ok(acc)
    }

    /// Pairing of integer vectors; same bases as [`RootDatum::pairing`].
    pub fn pairing_int(&self, chi: &[i64], nu: &[i64]) -> Result<i64> {
        let n = self.rank();
        if chi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: chi.len() });
        }
        if nu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: nu.len() });
        }
        let mut acc = 0i64;
        for (i, &x) in chi.iter().enumerate() {
            for (j, &y) in nu.iter().enumerate() {
                acc += x * y * self.cartan[j][i];
            }
        }
        Ok(acc)
    }

    /// Pairing matrix `P[i][j] = <alpha_i, alpha_j^vee>` as rationals.
    pub fn pairing_matrix(&self) -> Mat {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| linalg::rat(self.cartan[j][i])).collect()).collect()
    }

    /// The constant M: the largest pairing of the highest root against a
    /// fundamental coweight, equivalently its largest simple-root coefficient.
    pub fn m_constant(&self) -> u64 {
        *self.highest_root.iter().max().unwrap() as u64
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
    }
}
impl Eq for RootDatum {}

/// The M values printed in the q-bound table, for the types where the source
/// lists them; `None` for the D series (derived only).
pub fn published_m_constant(ct: CartanType) -> Option<u64> {
    match ct.series {
        Series::A => Some(1),
        Series::B | Series::C => Some(2),
        Series::D => None,
        Series::E => Some(match ct.rank {
            6 => 3,
            7 => 4,
            _ => 6,
        }),
        Series::F => Some(4),
        Series::G => Some(3),
    }
}
