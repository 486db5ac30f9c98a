//! Weyl group engine.
//!
//! Elements are stored as permutations of the fixed root list together with a
//! cached canonical reduced word. Equality and composition are O(|Phi|), and
//! no operation here ever needs to enumerate the full group, which is what
//! keeps E7/E8 sweeps feasible. Full enumeration is available (and used for
//! the exhaustive rank <= 4 sweeps) behind an explicit size limit.
//!
//! The canonical word is recovered greedily by peeling right descents,
//! smallest simple index first; that makes words, and everything serialized
//! from them, reproducible across runs.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::RootDatum;

/// A Weyl group element: permutation of the root list (acting on the left),
/// with its length and canonical reduced word cached.
#[derive(Clone)]
pub struct WeylElt {
    datum: Arc<RootDatum>,
    perm: Vec<u32>,
    word: Vec<u8>,
    length: u32,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.datum.fingerprint() == other.datum.fingerprint() && self.perm == other.perm
    }
}
impl Eq for WeylElt {}

impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

/// Canonical order: by length, then by canonical word. The canonical word
/// determines the element, so this is a total order consistent with equality.
impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.length, &self.word).cmp(&(other.length, &other.word))
    }
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            let parts: Vec<String> = self.word.iter().map(|&i| format!("s{}", i + 1)).collect();
            write!(f, "{}", parts.join(""))
        }
    }
}

impl Serialize for WeylElt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("WeylElt", 2)?;
        s.serialize_field("word", &self.word_one_based())?;
        s.serialize_field("length", &self.length)?;
        s.end()
    }
}

pub(crate) fn identity_perm(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// perm of u.v, where elements act on the left: (uv)(beta) = u(v(beta)).
pub(crate) fn compose_perms(u: &[u32], v: &[u32]) -> Vec<u32> {
    v.iter().map(|&k| u[k as usize]).collect()
}

pub(crate) fn invert_perm(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &img) in p.iter().enumerate() {
        inv[img as usize] = i as u32;
    }
    inv
}

/// Length = number of positive roots sent negative.
pub(crate) fn perm_length(rd: &RootDatum, perm: &[u32]) -> u32 {
    (0..rd.positive_count()).filter(|&i| !rd.is_positive(perm[i] as usize)).count() as u32
}

/// Canonical reduced word by right-descent peeling, smallest index first.
pub(crate) fn canonical_word(rd: &RootDatum, perm: &[u32]) -> Vec<u8> {
    let mut w = perm.to_vec();
    let mut stack = Vec::new();
    loop {
        let descent = (0..rd.rank()).find(|&i| !rd.is_positive(w[rd.simple_root_index(i)] as usize));
        match descent {
            Some(i) => {
                w = compose_perms(&w, rd.simple_perm(i));
                stack.push(i as u8);
            }
            None => break,
        }
    }
    debug_assert!(w == identity_perm(rd.num_roots()));
    stack.reverse();
    stack
}

impl WeylElt {
    pub fn identity(rd: &Arc<RootDatum>) -> Self {
        WeylElt {
            datum: rd.clone(),
            perm: identity_perm(rd.num_roots()),
            word: Vec::new(),
            length: 0,
        }
    }

    pub fn simple(rd: &Arc<RootDatum>, i: usize) -> Self {
        assert!(i < rd.rank());
        WeylElt {
            datum: rd.clone(),
            perm: rd.simple_perm(i).to_vec(),
            word: vec![i as u8],
            length: 1,
        }
    }

    pub(crate) fn from_perm(rd: &Arc<RootDatum>, perm: Vec<u32>) -> Self {
        let word = canonical_word(rd, &perm);
        let length = word.len() as u32;
        debug_assert_eq!(length, perm_length(rd, &perm));
        WeylElt { datum: rd.clone(), perm, word, length }
    }

    /// Product of simple reflections, 0-based indices. The cached word is the
    /// canonical one, not the supplied word.
    pub fn from_word(rd: &Arc<RootDatum>, word: &[usize]) -> Result<Self> {
        let mut perm = identity_perm(rd.num_roots());
        for &i in word {
            if i >= rd.rank() {
                return Err(Error::DimensionMismatch { expected: rd.rank(), got: i + 1 });
            }
            perm = compose_perms(&perm, rd.simple_perm(i));
        }
        Ok(WeylElt::from_perm(rd, perm))
    }

    /// Like [`WeylElt::from_word`] but caches the supplied word verbatim,
    /// without reducing it. Exists so callers can exercise the not-reduced
    /// error path of the cell-product recursion.
    pub fn from_word_verbatim(rd: &Arc<RootDatum>, word: &[usize]) -> Result<Self> {
        let mut elt = WeylElt::from_word(rd, word)?;
        elt.word = word.iter().map(|&i| i as u8).collect();
        Ok(elt)
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Canonical reduced word, 0-based.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Reduced word with 1-based indices, the serialization convention.
    pub fn word_one_based(&self) -> Vec<usize> {
        self.word.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// Image of a root index under the element.
    pub fn apply_root(&self, idx: usize) -> usize {
        self.perm[idx] as usize
    }

    pub fn multiply(&self, other: &WeylElt) -> Result<WeylElt> {
        if self.datum.fingerprint() != other.datum.fingerprint() {
            return Err(Error::MismatchedRootData);
        }
        Ok(WeylElt::from_perm(&self.datum, compose_perms(&self.perm, &other.perm)))
    }

    pub fn inverse(&self) -> WeylElt {
        WeylElt::from_perm(&self.datum, invert_perm(&self.perm))
    }

    /// Minimal J with w in W_J; word-independent, read off the canonical word.
    pub fn support(&self) -> BTreeSet<usize> {
        self.word.iter().map(|&i| i as usize).collect()
    }

    /// Second word-extraction strategy (left-descent peeling), used to check
    /// that support does not depend on the choice of reduced word.
    pub fn word_by_left_descents(&self) -> Vec<u8> {
        let rd = &self.datum;
        let mut inv = invert_perm(&self.perm);
        let mut word = Vec::new();
        loop {
            // i is a left descent iff w^{-1}(alpha_i) < 0
            let descent =
                (0..rd.rank()).find(|&i| !rd.is_positive(inv[rd.simple_root_index(i)] as usize));
            match descent {
                Some(i) => {
                    // w <- s_i w, so w^{-1} <- w^{-1} s_i
                    inv = compose_perms(&inv, rd.simple_perm(i));
                    word.push(i as u8);
                }
                None => break,
            }
        }
        word
    }

    /// Exact action on a character vector (simple-root basis).
    pub fn act_on_character(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.datum.rank();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let cartan = self.datum.cartan();
        let mut x = v.to_vec();
        // w = s_{i_1} ... s_{i_k}; apply the rightmost letter first.
        for &i in self.word.iter().rev() {
            let i = i as usize;
            let mut pair = BigRational::zero();
            for (j, xj) in x.iter().enumerate() {
                if !xj.is_zero() {
                    pair += xj * crate::linalg::rat(cartan[i][j]);
                }
            }
            x[i] -= pair;
        }
        Ok(x)
    }

    /// Exact action on a cocharacter vector (simple-coroot basis).
    pub fn act_on_cocharacter(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.datum.rank();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let cartan = self.datum.cartan();
        let mut x = v.to_vec();
        for &i in self.word.iter().rev() {
            let i = i as usize;
            // s_i(nu) = nu - <alpha_i, nu> alpha_i^vee; <alpha_i, nu> = (C^T x)_i
            let mut pair = BigRational::zero();
            for (j, xj) in x.iter().enumerate() {
                if !xj.is_zero() {
                    pair += xj * crate::linalg::rat(cartan[j][i]);
                }
            }
            x[i] -= pair;
        }
        Ok(x)
    }

    /// Integer action on a character vector.
    pub fn act_on_root_vector(&self, v: &[i64]) -> Result<Vec<i64>> {
        let rats: Vec<BigRational> = v.iter().map(|&x| crate::linalg::rat(x)).collect();
        let img = self.act_on_character(&rats)?;
        Ok(img
            .iter()
            .map(|x| {
                use num_traits::ToPrimitive;
                x.to_integer().to_i64().expect("root coordinates fit i64")
            })
            .collect())
    }
}

/// Longest element of the standard parabolic W_J (J = simple indices). Greedy
/// ascent: repeatedly append any s_j (j in J) that increases the length; the
/// unique fixed point of that loop inside W_J is its longest element.
pub fn longest_element(rd: &Arc<RootDatum>, subset: &[usize]) -> WeylElt {
    let mut perm = identity_perm(rd.num_roots());
    loop {
        let asc = subset
            .iter()
            .copied()
            .find(|&j| rd.is_positive(perm[rd.simple_root_index(j)] as usize));
        match asc {
            Some(j) => perm = compose_perms(&perm, rd.simple_perm(j)),
            None => break,
        }
    }
    WeylElt::from_perm(rd, perm)
}

/// Longest element of the full group.
pub fn longest_element_full(rd: &Arc<RootDatum>) -> WeylElt {
    let all: Vec<usize> = (0..rd.rank()).collect();
    longest_element(rd, &all)
}

/// Enumerates the whole Weyl group by breadth-first closure, in a
/// deterministic order. Refuses groups larger than `limit`.
pub fn enumerate_group(rd: &Arc<RootDatum>, limit: u128) -> Result<Vec<WeylElt>> {
    let order = rd.cartan_type().weyl_order();
    if order > limit {
        return Err(Error::GroupTooLarge { order, limit });
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    let id = identity_perm(rd.num_roots());
    seen.insert(id.clone());
    queue.push_back(id);
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        out.push(p.clone());
        for i in 0..rd.rank() {
            let next = compose_perms(&p, rd.simple_perm(i));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    assert_eq!(out.len() as u128, order);
    let mut elts: Vec<WeylElt> = out.into_iter().map(|p| WeylElt::from_perm(rd, p)).collect();
    elts.sort();
    Ok(elts)
}

/// Which argument of the cell product carries the reduced word the recursion
/// peels: `Left` peels x in U(x,y), `Right` peels y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Perm plus inverse plus length; the internal working state of the cell
/// recursion, so that descent tests stay O(1) and no words are recomputed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct RawElt {
    pub perm: Vec<u32>,
    pub inv: Vec<u32>,
    pub len: u32,
}

impl RawElt {
    pub fn from_elt(w: &WeylElt) -> Self {
        RawElt { perm: w.perm.clone(), inv: invert_perm(&w.perm), len: w.length }
    }

    /// s_i . w, with the length moving by exactly one.
    pub fn left_mul_simple(&self, rd: &RootDatum, i: usize) -> RawElt {
        let sp = rd.simple_perm(i);
        let perm: Vec<u32> = self.perm.iter().map(|&k| sp[k as usize]).collect();
        let inv: Vec<u32> = sp.iter().map(|&k| self.inv[k as usize]).collect();
        let up = rd.is_positive(self.inv[rd.simple_root_index(i)] as usize);
        RawElt { perm, inv, len: if up { self.len + 1 } else { self.len - 1 } }
    }

    /// w . s_i.
    pub fn right_mul_simple(&self, rd: &RootDatum, i: usize) -> RawElt {
        let sp = rd.simple_perm(i);
        let perm: Vec<u32> = sp.iter().map(|&k| self.perm[k as usize]).collect();
        let inv: Vec<u32> = self.inv.iter().map(|&k| sp[k as usize]).collect();
        let up = rd.is_positive(self.perm[rd.simple_root_index(i)] as usize);
        RawElt { perm, inv, len: if up { self.len + 1 } else { self.len - 1 } }
    }

    /// Does left multiplication by s_i go up in length?
    pub fn left_ascent(&self, rd: &RootDatum, i: usize) -> bool {
        rd.is_positive(self.inv[rd.simple_root_index(i)] as usize)
    }

    pub fn right_ascent(&self, rd: &RootDatum, i: usize) -> bool {
        rd.is_positive(self.perm[rd.simple_root_index(i)] as usize)
    }
}

/// Set of cells met by the double-coset product, at the perm level.
/// One step of the BN-pair recursion: BsB.BuB = BsuB if l(su) > l(u),
/// else BsuB u BuB (and mirrored on the right).
pub(crate) fn cell_product_raw(
    rd: &RootDatum,
    x: &WeylElt,
    y: &WeylElt,
    side: Side,
) -> Result<Vec<RawElt>> {
    let (peeled, anchor) = match side {
        Side::Left => (x, y),
        Side::Right => (y, x),
    };
    // The peeled argument's cached word must be reduced.
    if peeled.word.len() != peeled.length as usize {
        return Err(Error::WordNotReduced {
            word_len: peeled.word.len(),
            length: peeled.length as usize,
        });
    }
    let mut current: HashMap<Vec<u32>, RawElt> = HashMap::new();
    let start = RawElt::from_elt(anchor);
    current.insert(start.perm.clone(), start);
    let letters: Vec<u8> = match side {
        // U(s.x', y) = step_s(U(x', y)): peel x's word right to left.
        Side::Left => peeled.word.iter().rev().copied().collect(),
        // V(x, y'.s) = step_s(V(x, y')): peel y's word left to right.
        Side::Right => peeled.word.to_vec(),
    };
    for &i in &letters {
        let i = i as usize;
        let mut next: HashMap<Vec<u32>, RawElt> = HashMap::new();
        for u in current.values() {
            let (asc, moved) = match side {
                Side::Left => (u.left_ascent(rd, i), u.left_mul_simple(rd, i)),
                Side::Right => (u.right_ascent(rd, i), u.right_mul_simple(rd, i)),
            };
            next.entry(moved.perm.clone()).or_insert(moved);
            if !asc {
                next.entry(u.perm.clone()).or_insert_with(|| u.clone());
            }
        }
        current = next;
    }
    Ok(current.into_values().collect())
}

/// The set U(x,y) (side = Left) or V(x,y) (side = Right) of Weyl labels u with
/// BuB contained in BxB.ByB, computed by the BN-pair recursion. Both sides
/// compute the same mathematical set; the side selects which argument's
/// reduced word drives the recursion.
pub fn cell_product_set(x: &WeylElt, y: &WeylElt, side: Side) -> Result<Vec<WeylElt>> {
    if x.datum.fingerprint() != y.datum.fingerprint() {
        return Err(Error::MismatchedRootData);
    }
    let raw = cell_product_raw(&x.datum, x, y, side)?;
    let mut out: Vec<WeylElt> =
        raw.into_iter().map(|r| WeylElt::from_perm(&x.datum, r.perm)).collect();
    out.sort();
    Ok(out)
}
