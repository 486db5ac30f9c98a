//! Diagram automorphisms, twisted Coxeter elements and the Frobenius
//! F = q.c.sigma on the character lattice.
//!
//! The good twisted Coxeter element is found by exhaustive search with a
//! direct length-additivity check on the partial twisted products, rather
//! than through the complex eigenvector construction: the search space is at
//! most r! products per type, everything stays in exact arithmetic, and the
//! result comes out certified instead of constructed.
//!
//! Two different Frobenius actions on W appear, mirroring the two tori in
//! play. The quasi-split form acts on W as the diagram automorphism sigma
//! itself (that is the action under which twisted Coxeter elements form one
//! cyclic-shift class); the Coxeter-torus form acts as w -> c sigma(w) c^{-1}
//! (that is the action whose fixed points W^F the cell machinery consumes).

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result, ScanRow};
use crate::linalg::{self, Mat};
use crate::rootsys::{CartanType, RootDatum, Series};
use crate::weylcore::{self, WeylElt};

/// A symmetry of the Dynkin diagram: a permutation of the simple indices
/// preserving the Cartan matrix.
#[derive(Clone)]
pub struct DiagramAut {
    datum: Arc<RootDatum>,
    perm: Vec<usize>,
    order: usize,
    /// Induced permutation of the root list.
    root_perm: Vec<u32>,
}

impl DiagramAut {
    pub fn identity(rd: &Arc<RootDatum>) -> Self {
        DiagramAut {
            datum: rd.clone(),
            perm: (0..rd.rank()).collect(),
            order: 1,
            root_perm: weylcore::identity_perm(rd.num_roots()),
        }
    }

    pub fn from_node_perm(rd: &Arc<RootDatum>, perm: Vec<usize>) -> Result<Self> {
        let n = rd.rank();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || seen[i] {
                return Err(Error::NotDiagramAutomorphism);
            }
            seen[i] = true;
        }
        let cartan = rd.cartan();
        for i in 0..n {
            for j in 0..n {
                if cartan[perm[i]][perm[j]] != cartan[i][j] {
                    return Err(Error::NotDiagramAutomorphism);
                }
            }
        }
        // multiplicative order of the node permutation
        let mut order = 1;
        let mut p: Vec<usize> = perm.clone();
        while p.iter().enumerate().any(|(i, &x)| i != x) {
            p = p.iter().map(|&x| perm[x]).collect();
            order += 1;
        }
        // induced root permutation: sigma(sum x_i alpha_i) = sum x_i alpha_{perm(i)}
        let root_perm = rd
            .roots()
            .iter()
            .map(|beta| {
                let mut img = vec![0i64; n];
                for (i, &x) in beta.iter().enumerate() {
                    img[perm[i]] = x;
                }
                rd.root_index(&img).expect("diagram automorphisms permute roots") as u32
            })
            .collect();
        Ok(DiagramAut { datum: rd.clone(), perm, order, root_perm })
    }

    /// The standard automorphism of the requested order: identity; the A_n /
    /// D_n / E_6 involutions; triality on D_4.
    pub fn standard(rd: &Arc<RootDatum>, order: usize) -> Result<Self> {
        let ct = rd.cartan_type();
        let n = ct.rank;
        let type_str = ct.to_string();
        let perm: Vec<usize> = match (order, ct.series) {
            (1, _) => (0..n).collect(),
            (2, Series::A) if n >= 2 => (0..n).map(|i| n - 1 - i).collect(),
            (2, Series::D) => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                p
            }
            (2, Series::E) if n == 6 => vec![5, 1, 4, 3, 2, 0],
            (3, Series::D) if n == 4 => vec![2, 1, 3, 0],
            _ => return Err(Error::UnsupportedTwist { type_str, twist: order }),
        };
        let aut = DiagramAut::from_node_perm(rd, perm)?;
        if aut.order != order {
            return Err(Error::UnsupportedTwist { type_str, twist: order });
        }
        Ok(aut)
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn node_perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn root_perm(&self) -> &[u32] {
        &self.root_perm
    }

    /// sigma(w) as a group automorphism: sigma o w o sigma^{-1} on roots.
    pub fn apply(&self, w: &WeylElt) -> WeylElt {
        let inv = weylcore::invert_perm(&self.root_perm);
        let conj = weylcore::compose_perms(
            &self.root_perm,
            &weylcore::compose_perms(w.perm(), &inv),
        );
        weylcore_elt(&self.datum, conj)
    }

    /// Raw root-permutation of sigma^k(w) given w's root permutation.
    pub(crate) fn conjugate_perm(&self, wperm: &[u32], k: usize) -> Vec<u32> {
        let mut spow = weylcore::identity_perm(self.datum.num_roots());
        for _ in 0..k % self.order {
            spow = weylcore::compose_perms(&self.root_perm, &spow);
        }
        let sinv = weylcore::invert_perm(&spow);
        weylcore::compose_perms(&spow, &weylcore::compose_perms(wperm, &sinv))
    }

    /// Action on a character vector: coordinate permutation.
    pub fn apply_character(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.datum.rank();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = x.clone();
        }
        Ok(out)
    }
}

fn weylcore_elt(rd: &Arc<RootDatum>, perm: Vec<u32>) -> WeylElt {
    WeylElt::from_perm(rd, perm)
}

/// The sigma-orbits on the simple indices, each sorted, ordered by minimum.
pub fn sigma_orbits(aut: &DiagramAut) -> Vec<Vec<usize>> {
    let n = aut.datum.rank();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(cur);
            cur = aut.perm[cur];
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// All twisted Coxeter elements: products of exactly one simple reflection
/// per sigma-orbit, over every choice of representative and every ordering,
/// deduplicated as group elements. Sorted canonically.
pub fn twisted_coxeter_elements(rd: &Arc<RootDatum>, sigma: &DiagramAut) -> Vec<WeylElt> {
    let orbits = sigma_orbits(sigma);
    let r = orbits.len();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out: Vec<WeylElt> = Vec::new();
    for reps in orbits.iter().map(|o| o.iter().copied()).multi_cartesian_product() {
        for perm_order in reps.iter().copied().permutations(r) {
            let mut p = weylcore::identity_perm(rd.num_roots());
            for i in perm_order {
                p = weylcore::compose_perms(&p, rd.simple_perm(i));
            }
            if seen.insert(p.clone()) {
                out.push(weylcore_elt(rd, p));
            }
        }
    }
    out.sort();
    out
}

/// Multiplicative order of the composite map c.sigma on the lattice (the
/// roots span, so the order on the root list is the order on the lattice).
pub fn coxeter_number(c: &WeylElt, sigma: &DiagramAut) -> usize {
    let tau = weylcore::compose_perms(c.perm(), sigma.root_perm());
    let id = weylcore::identity_perm(tau.len());
    let mut p = tau.clone();
    let mut h = 1;
    while p != id {
        p = weylcore::compose_perms(&tau, &p);
        h += 1;
        assert!(h <= 1000, "order of c.sigma did not terminate");
    }
    h
}

/// The length certificate of a good pair: the observed lengths of the
/// partial twisted products for 0 <= i <= h/2, which must be 0, l(c),
/// 2 l(c), ...
#[derive(Debug, Clone, Serialize)]
pub struct GoodPairCertificate {
    pub c_word: Vec<usize>,
    pub h: usize,
    pub partial_lengths: Vec<usize>,
}

/// A twisted Frobenius F = q.c.sigma with c a certified good twisted Coxeter
/// element. `q = None` means symbolic: every polynomial-identity operation
/// works; the regularity table requires a concrete q.
pub struct TwistedFrob {
    datum: Arc<RootDatum>,
    sigma: DiagramAut,
    c: WeylElt,
    h: usize,
    q: Option<u64>,
    certificate: GoodPairCertificate,
}

/// Exhaustive search over the twisted Coxeter elements for one whose partial
/// twisted products c sigma(c) ... sigma^{i-1}(c) have length exactly i.l(c)
/// for all 0 <= i <= h/2. Candidates are scanned in canonical order, so the
/// result is reproducible. Failure would contradict the existence result and
/// returns the full scan as a typed error.
pub fn good_pair_search(rd: &Arc<RootDatum>, sigma: &DiagramAut) -> Result<TwistedFrob> {
    let candidates = twisted_coxeter_elements(rd, sigma);
    let mut scan = Vec::new();
    let mut found: Option<(WeylElt, usize, Vec<usize>)> = None;
    for c in &candidates {
        let h = coxeter_number(c, sigma);
        let r = c.length();
        // sigma^j(c) as raw permutations, reused across the partial products
        let sig_c: Vec<Vec<u32>> =
            (0..sigma.order()).map(|j| sigma.conjugate_perm(c.perm(), j)).collect();
        let mut partial = weylcore::identity_perm(rd.num_roots());
        let mut lengths = vec![0usize];
        let mut good = true;
        for i in 1..=h / 2 {
            partial = weylcore::compose_perms(&partial, &sig_c[(i - 1) % sigma.order()]);
            let len = weylcore::perm_length(rd, &partial) as usize;
            lengths.push(len);
            if len != i * r {
                good = false;
                break;
            }
        }
        if good {
            found = Some((c.clone(), h, lengths));
            break;
        }
        scan.push(ScanRow { c_word: c.word_one_based(), partial_lengths: lengths });
    }
    match found {
        Some((c, h, partial_lengths)) => {
            let certificate =
                GoodPairCertificate { c_word: c.word_one_based(), h, partial_lengths };
            Ok(TwistedFrob { datum: rd.clone(), sigma: sigma.clone(), c, h, q: None, certificate })
        }
        None => Err(Error::GoodPairSearchFailed { scan }),
    }
}

impl TwistedFrob {
    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn sigma(&self) -> &DiagramAut {
        &self.sigma
    }

    pub fn coxeter_element(&self) -> &WeylElt {
        &self.c
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn q(&self) -> Option<u64> {
        self.q
    }

    pub fn certificate(&self) -> &GoodPairCertificate {
        &self.certificate
    }

    pub fn with_q(mut self, q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::QTooSmall { q });
        }
        self.q = Some(q);
        Ok(self)
    }

    fn q_value(&self) -> Result<u64> {
        self.q.ok_or(Error::QRequired)
    }

    /// c_k = (c sigma)^k sigma^{-k}, for any integer k; depends only on
    /// k mod h. Computed by the telescoping product c sigma(c) ...
    /// sigma^{k-1}(c).
    pub fn c_power(&self, k: i64) -> WeylElt {
        let k = k.rem_euclid(self.h as i64) as usize;
        let mut p = weylcore::identity_perm(self.datum.num_roots());
        for i in 0..k {
            let s = self.sigma.conjugate_perm(self.c.perm(), i % self.sigma.order());
            p = weylcore::compose_perms(&p, &s);
        }
        weylcore_elt(&self.datum, p)
    }

    /// The Frobenius action on W: w -> c sigma(w) c^{-1}.
    pub fn frobenius_on_weyl(&self, w: &WeylElt) -> WeylElt {
        let sw = self.sigma.conjugate_perm(w.perm(), 1);
        let cinv = weylcore::invert_perm(self.c.perm());
        let p = weylcore::compose_perms(
            self.c.perm(),
            &weylcore::compose_perms(&sw, &cinv),
        );
        weylcore_elt(&self.datum, p)
    }

    /// True iff the h/2-fold twisted product equals the longest element.
    /// Requires h even.
    pub fn w0_identity_check(&self) -> Result<bool> {
        if self.h % 2 != 0 {
            return Err(Error::OddCoxeterNumber { h: self.h });
        }
        let half = self.c_power(self.h as i64 / 2);
        Ok(half == weylcore::longest_element_full(&self.datum))
    }

    /// Matrix of tau = c.sigma on the character lattice (simple-root basis);
    /// column j holds the coordinates of tau(alpha_j).
    pub fn tau_matrix(&self) -> Mat {
        let rd = &self.datum;
        let n = rd.rank();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for j in 0..n {
            let idx = rd.simple_root_index(j);
            let img = self.c.perm()[self.sigma.root_perm()[idx] as usize] as usize;
            for (i, &x) in rd.roots()[img].iter().enumerate() {
                m[i][j] = linalg::rat(x);
            }
        }
        m
    }

    /// F = q . (matrix of c sigma) on the character lattice. Requires q >= 2.
    pub fn frob_matrix(&self) -> Result<Mat> {
        let q = self.q_value()?;
        Ok(linalg::scalar_mul(&linalg::rat(q as i64), &self.tau_matrix()))
    }

    /// F on the cocharacter lattice (simple-coroot basis), the adjoint of the
    /// character action: <F chi, nu> = <chi, F nu>.
    pub fn frob_matrix_cocharacter(&self) -> Result<Mat> {
        let f = self.frob_matrix()?;
        let p = self.datum.pairing_matrix();
        let p_inv = linalg::invert(&p)?;
        Ok(linalg::mat_mul(&p_inv, &linalg::mat_mul(&linalg::transpose(&f), &p)))
    }

    /// (F-1)^{-1} on the character lattice via the geometric-series identity
    /// (F-1)^{-1} = (q^h - 1)^{-1} (1 + F + ... + F^{h-1}), cross-checked
    /// entry-for-entry against direct Gauss-Jordan inversion.
    pub fn frob_minus_one_inverse(&self) -> Result<Mat> {
        let by_sum = self.frob_minus_one_inverse_summation()?;
        let direct = self.frob_minus_one_inverse_direct()?;
        if by_sum != direct {
            return Err(Error::InverseFormulaMismatch);
        }
        Ok(by_sum)
    }

    pub fn frob_minus_one_inverse_summation(&self) -> Result<Mat> {
        let q = self.q_value()?;
        let f = self.frob_matrix()?;
        let n = self.datum.rank();
        let mut sum = linalg::identity(n);
        let mut power = linalg::identity(n);
        for _ in 1..self.h {
            power = linalg::mat_mul(&f, &power);
            sum = linalg::mat_add(&sum, &power);
        }
        let qh = BigRational::from_integer(num_bigint::BigInt::from(q).pow(self.h as u32))
            - BigRational::one();
        Ok(linalg::scalar_mul(&(BigRational::one() / qh), &sum))
    }

    pub fn frob_minus_one_inverse_direct(&self) -> Result<Mat> {
        let f = self.frob_matrix()?;
        let n = self.datum.rank();
        linalg::invert(&linalg::mat_sub(&f, &linalg::identity(n)))
    }

    /// The primitive integral cocharacter mu with F(mu) - mu a rational
    /// multiple of chi: the primitive vector on the line (F-1)^{-1} Q.chi,
    /// sign fixed by the first nonzero coordinate.
    pub fn h_chi_direction(&self, chi: &[i64]) -> Result<Vec<i64>> {
        let n = self.datum.rank();
        if chi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: chi.len() });
        }
        if chi.iter().all(|&x| x == 0) {
            return Err(Error::ZeroCocharacter);
        }
        let f_co = self.frob_matrix_cocharacter()?;
        let fm1 = linalg::mat_sub(&f_co, &linalg::identity(n));
        let inv = linalg::invert(&fm1)?;
        let chi_rat: Vec<BigRational> = chi.iter().map(|&x| linalg::rat(x)).collect();
        let mu_line = linalg::mat_vec(&inv, &chi_rat);
        let mu = linalg::primitive_integer_vector(&mu_line).ok_or(Error::ZeroCocharacter)?;
        let mu_i64: Vec<i64> = mu
            .iter()
            .map(|x| {
                use num_traits::ToPrimitive;
                x.to_i64().expect("primitive cocharacter fits i64")
            })
            .collect();
        debug_assert!(self.verify_h_chi(&mu_i64, chi).unwrap_or(false));
        Ok(mu_i64)
    }

    /// Checks F(mu) - mu in Q.chi exactly.
    pub fn verify_h_chi(&self, mu: &[i64], chi: &[i64]) -> Result<bool> {
        let f_co = self.frob_matrix_cocharacter()?;
        let mu_rat: Vec<BigRational> = mu.iter().map(|&x| linalg::rat(x)).collect();
        let img = linalg::mat_vec(&f_co, &mu_rat);
        let diff: Vec<BigRational> =
            img.iter().zip(&mu_rat).map(|(a, b)| a - b).collect();
        // diff must be proportional to chi: all 2x2 minors vanish
        let chi_rat: Vec<BigRational> = chi.iter().map(|&x| linalg::rat(x)).collect();
        for i in 0..diff.len() {
            for j in i + 1..diff.len() {
                if &diff[i] * &chi_rat[j] != &diff[j] * &chi_rat[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Orbit length of every root under tau = c.sigma.
    pub fn tau_orbit_sizes(&self) -> TauOrbits {
        let rd = &self.datum;
        let tau = weylcore::compose_perms(self.c.perm(), self.sigma.root_perm());
        let mut sizes = vec![0usize; rd.num_roots()];
        let mut seen = vec![false; rd.num_roots()];
        let mut orbit_count = 0;
        for start in 0..rd.num_roots() {
            if seen[start] {
                continue;
            }
            orbit_count += 1;
            let mut orbit = vec![start];
            let mut cur = tau[start] as usize;
            while cur != start {
                orbit.push(cur);
                cur = tau[cur] as usize;
            }
            for &i in &orbit {
                seen[i] = true;
                sizes[i] = orbit.len();
            }
        }
        let all_h = sizes.iter().all(|&s| s == self.h);
        TauOrbits { sizes, orbit_count, all_equal_h: all_h }
    }

    /// The exact table <(F-1)^{-1} gamma, alpha^*> over all roots gamma and
    /// all fundamental coweights alpha^*. Since the coweights are dual to the
    /// simple roots, row gamma of the table is just the coordinate vector of
    /// (F-1)^{-1} gamma. Verdict: every entry nonzero.
    pub fn regularity_certificate(&self) -> Result<RegularityCertificate> {
        let q = self.q_value()?;
        let n_inv = self.frob_minus_one_inverse()?;
        let rd = &self.datum;
        let mut entries = Vec::with_capacity(rd.num_roots());
        let mut witness = None;
        for (gi, gamma) in rd.roots().iter().enumerate() {
            let g: Vec<BigRational> = gamma.iter().map(|&x| linalg::rat(x)).collect();
            let row = linalg::mat_vec(&n_inv, &g);
            if witness.is_none() {
                if let Some(j) = row.iter().position(|x| x.is_zero()) {
                    witness = Some((gi, j));
                }
            }
            entries.push(row);
        }
        Ok(RegularityCertificate { q, verdict: witness.is_none(), witness, entries })
    }
}

#[derive(Debug)]
pub struct TauOrbits {
    /// Orbit length per root index.
    pub sizes: Vec<usize>,
    pub orbit_count: usize,
    pub all_equal_h: bool,
}

#[derive(Debug)]
pub struct RegularityCertificate {
    pub q: u64,
    /// entries[gamma][j] = <(F-1)^{-1} gamma, alpha_j^*>
    pub entries: Vec<Vec<BigRational>>,
    pub verdict: bool,
    /// First vanishing entry, if any: (root index, simple index).
    pub witness: Option<(usize, usize)>,
}

/// The F-cyclic-shift graph on twisted Coxeter elements: w = w1 w2 shifts to
/// w2 F(w1) whenever lengths stay additive. `f` is the automorphism of W the
/// shift applies to the left factor; for the quasi-split Frobenius this is
/// the diagram automorphism itself.
pub struct ShiftGraph {
    pub vertices: Vec<WeylElt>,
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
}

pub fn cyclic_shift_connectivity(
    rd: &Arc<RootDatum>,
    sigma: &DiagramAut,
    f: &dyn Fn(&WeylElt) -> WeylElt,
) -> ShiftGraph {
    let vertices = twisted_coxeter_elements(rd, sigma);
    let index: HashMap<&WeylElt, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut edges = HashSet::new();
    for (vi, w) in vertices.iter().enumerate() {
        for word in all_reduced_words(w) {
            for cut in 0..=word.len() {
                let w1 = WeylElt::from_word(rd, &word[..cut].iter().map(|&i| i as usize).collect::<Vec<_>>())
                    .expect("valid letters");
                let w2 = WeylElt::from_word(rd, &word[cut..].iter().map(|&i| i as usize).collect::<Vec<_>>())
                    .expect("valid letters");
                let shifted = w2.multiply(&f(&w1)).expect("same datum");
                if shifted.length() != w.length() {
                    continue;
                }
                if let Some(&ti) = index.get(&shifted) {
                    edges.insert((vi.min(ti), vi.max(ti)));
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
    edges.sort_unstable();
    let connected = is_connected(vertices.len(), &edges);
    ShiftGraph { vertices, edges, connected }
}

/// All reduced words of w, by recursive right-descent peeling.
pub fn all_reduced_words(w: &WeylElt) -> Vec<Vec<u8>> {
    fn go(rd: &RootDatum, perm: &[u32], acc: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let mut any = false;
        for i in 0..rd.rank() {
            if !rd.is_positive(perm[rd.simple_root_index(i)] as usize) {
                any = true;
                let shorter = weylcore::compose_perms(perm, rd.simple_perm(i));
                acc.push(i as u8);
                go(rd, &shorter, acc, out);
                acc.pop();
            }
        }
        if !any {
            let mut word: Vec<u8> = acc.clone();
            word.reverse();
            out.push(word);
        }
    }
    let mut out = Vec::new();
    go(w.datum(), w.perm(), &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}

/// Parses a full type string with optional twist prefix: "A3", "2A4", "3D4".
pub fn parse_type_string(s: &str) -> Result<(CartanType, usize)> {
    let (twist, rest) = match s.chars().next() {
        Some('2') => (2, &s[1..]),
        Some('3') => (3, &s[1..]),
        _ => (1, s),
    };
    let ct = CartanType::parse(rest)?;
    Ok((ct, twist))
}

/// Admissible twist orders for a type: 1 always; 2 for A_n (n >= 2), D_n,
/// E_6; additionally 3 for D_4.
pub fn admissible_twists(ct: CartanType) -> Vec<usize> {
    let mut out = vec![1];
    match ct.series {
        Series::A if ct.rank >= 2 => out.push(2),
        Series::D => {
            out.push(2);
            if ct.rank == 4 {
                out.push(3);
            }
        }
        Series::E if ct.rank == 6 => out.push(2),
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;
    use crate::weylcore::longest_element_full;

    fn setup(name: &str) -> (Arc<RootDatum>, DiagramAut) {
        let (ct, twist) = parse_type_string(name).unwrap();
        let rd = build_root_system(ct);
        let sigma = DiagramAut::standard(&rd, twist).unwrap();
        (rd, sigma)
    }

    #[test]
    fn diagram_aut_validation() {
        let (rd, _) = setup("B2");
        // swapping the B2 nodes does not preserve the Cartan matrix
        assert!(matches!(
            DiagramAut::from_node_perm(&rd, vec![1, 0]),
            Err(Error::NotDiagramAutomorphism)
        ));
        assert!(DiagramAut::standard(&rd, 2).is_err());
        let (a1, _) = setup("A1");
        assert!(DiagramAut::standard(&a1, 2).is_err());
        let (d4, _) = setup("D4");
        assert_eq!(DiagramAut::standard(&d4, 3).unwrap().order(), 3);
        assert_eq!(DiagramAut::standard(&d4, 2).unwrap().order(), 2);
        let (e6, _) = setup("E6");
        assert_eq!(DiagramAut::standard(&e6, 2).unwrap().order(), 2);
    }

    #[test]
    fn twisted_coxeter_enumeration() {
        let (a1, id) = setup("A1");
        let set = twisted_coxeter_elements(&a1, &id);
        assert_eq!(set, vec![WeylElt::simple(&a1, 0)]);

        let (a2, id) = setup("A2");
        let set = twisted_coxeter_elements(&a2, &id);
        assert_eq!(set.len(), 2);

        // 6 orderings collapse to 4 distinct elements (acyclic orientations
        // of the A3 diagram)
        let (a3, id) = setup("A3");
        assert_eq!(twisted_coxeter_elements(&a3, &id).len(), 4);

        // twisted A3: one representative from {1,3}, one from {2}
        let (a3t, s) = setup("2A3");
        let set = twisted_coxeter_elements(&a3t, &s);
        assert_eq!(set.len(), 4);
        for w in &set {
            assert_eq!(w.length(), 2);
        }
    }

    #[test]
    fn coxeter_numbers_split() {
        for (name, h) in [("A2", 3), ("B2", 4), ("G2", 6), ("A1", 2), ("F4", 12), ("D4", 6)] {
            let (rd, id) = setup(name);
            let tf = good_pair_search(&rd, &id).unwrap();
            assert_eq!(tf.h(), h, "{name}");
        }
    }

    #[test]
    fn coxeter_numbers_twisted() {
        for (name, h) in [("2A2", 6), ("2A3", 6), ("2A4", 10), ("3D4", 12), ("2E6", 18), ("2D4", 8)] {
            let (rd, s) = setup(name);
            let tf = good_pair_search(&rd, &s).unwrap();
            assert_eq!(tf.h(), h, "{name}");
        }
    }

    #[test]
    fn good_pair_b2_partial_lengths() {
        let (rd, id) = setup("B2");
        let tf = good_pair_search(&rd, &id).unwrap();
        assert_eq!(tf.certificate().partial_lengths, vec![0, 2, 4]);
        assert_eq!(tf.coxeter_element(), &WeylElt::from_word(&rd, &[0, 1]).unwrap());
        assert!(tf.w0_identity_check().unwrap());
    }

    #[test]
    fn good_pair_a2_half_open() {
        let (rd, id) = setup("A2");
        let tf = good_pair_search(&rd, &id).unwrap();
        // h = 3, so only i <= 1 is checked
        assert_eq!(tf.certificate().partial_lengths, vec![0, 2]);
        assert!(matches!(tf.w0_identity_check(), Err(Error::OddCoxeterNumber { h: 3 })));
    }

    #[test]
    fn w0_identity_g2() {
        let (rd, id) = setup("G2");
        let tf = good_pair_search(&rd, &id).unwrap();
        assert_eq!(tf.h(), 6);
        assert!(tf.w0_identity_check().unwrap());
        assert_eq!(tf.c_power(3), longest_element_full(&rd));
    }

    #[test]
    fn c_power_telescopes() {
        let (rd, s) = setup("2A4");
        let tf = good_pair_search(&rd, &s).unwrap();
        assert!(tf.c_power(0).is_identity());
        for k in 0..tf.h() as i64 {
            let step = s.apply(tf.coxeter_element());
            let step = if k % 2 == 0 { tf.coxeter_element().clone() } else { step };
            let lhs = tf.c_power(k + 1);
            let rhs = tf.c_power(k).multiply(&step).unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
        }
        let _ = rd;
    }

    #[test]
    fn c_power_split_is_plain_power() {
        let (rd, id) = setup("B2");
        let tf = good_pair_search(&rd, &id).unwrap();
        let c = tf.coxeter_element();
        let mut acc = WeylElt::identity(&rd);
        for k in 0..4 {
            assert_eq!(tf.c_power(k), acc);
            acc = acc.multiply(c).unwrap();
        }
        assert_eq!(tf.c_power(-1), c.inverse());
    }

    #[test]
    fn frob_matrix_a1() {
        let (rd, id) = setup("A1");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(2).unwrap();
        let f = tf.frob_matrix().unwrap();
        assert_eq!(f, vec![vec![linalg::rat(-2)]]);
        let inv = tf.frob_minus_one_inverse().unwrap();
        assert_eq!(inv[0][0], BigRational::new((-1).into(), 3.into()));
    }

    #[test]
    fn frob_power_h_is_scalar() {
        for name in ["A2", "B2", "2A3", "G2"] {
            let (rd, s) = setup(name);
            let tf = good_pair_search(&rd, &s).unwrap().with_q(3).unwrap();
            let f = tf.frob_matrix().unwrap();
            let mut p = linalg::identity(rd.rank());
            for _ in 0..tf.h() {
                p = linalg::mat_mul(&f, &p);
            }
            let qh = BigRational::from_integer(num_bigint::BigInt::from(3).pow(tf.h() as u32));
            assert_eq!(p, linalg::scalar_mul(&qh, &linalg::identity(rd.rank())), "{name}");
        }
    }

    #[test]
    fn frob_adjoint_between_lattices() {
        let (rd, s) = setup("2A3");
        let tf = good_pair_search(&rd, &s).unwrap().with_q(2).unwrap();
        let f = tf.frob_matrix().unwrap();
        let f_co = tf.frob_matrix_cocharacter().unwrap();
        let chi: Vec<BigRational> = vec![linalg::rat(1), linalg::rat(-2), linalg::rat(5)];
        let nu: Vec<BigRational> = vec![linalg::rat(3), linalg::rat(1), linalg::rat(-1)];
        let lhs = rd.pairing(&linalg::mat_vec(&f, &chi), &nu).unwrap();
        let rhs = rd.pairing(&chi, &linalg::mat_vec(&f_co, &nu)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn frob_inverse_routes_agree_b2_q3() {
        let (rd, id) = setup("B2");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(3).unwrap();
        assert_eq!(
            tf.frob_minus_one_inverse_summation().unwrap(),
            tf.frob_minus_one_inverse_direct().unwrap()
        );
        // (F-1)(F-1)^{-1} = 1
        let f = tf.frob_matrix().unwrap();
        let fm1 = linalg::mat_sub(&f, &linalg::identity(2));
        let inv = tf.frob_minus_one_inverse().unwrap();
        assert_eq!(linalg::mat_mul(&fm1, &inv), linalg::identity(2));
    }

    #[test]
    fn symbolic_q_is_rejected_where_required() {
        let (rd, id) = setup("A2");
        let tf = good_pair_search(&rd, &id).unwrap();
        assert!(matches!(tf.frob_matrix(), Err(Error::QRequired)));
        assert!(matches!(tf.regularity_certificate(), Err(Error::QRequired)));
        let bad = good_pair_search(&rd, &id).unwrap().with_q(1);
        assert!(matches!(bad, Err(Error::QTooSmall { q: 1 })));
    }

    #[test]
    fn h_chi_direction_a1() {
        let (rd, id) = setup("A1");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(2).unwrap();
        // chi = alpha_1^vee: mu = alpha_1^vee works since F mu - mu = -(q+1) mu
        assert_eq!(tf.h_chi_direction(&[1]).unwrap(), vec![1]);
        assert!(matches!(tf.h_chi_direction(&[0]), Err(Error::ZeroCocharacter)));
    }

    #[test]
    fn h_chi_scaling_invariance() {
        let (rd, id) = setup("B2");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(3).unwrap();
        let mu1 = tf.h_chi_direction(&[1, -2]).unwrap();
        let mu2 = tf.h_chi_direction(&[2, -4]).unwrap();
        assert_eq!(mu1, mu2);
        assert!(tf.verify_h_chi(&mu1, &[1, -2]).unwrap());
    }

    #[test]
    fn regularity_a1_and_a2() {
        let (rd, id) = setup("A1");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(2).unwrap();
        let cert = tf.regularity_certificate().unwrap();
        assert!(cert.verdict);
        // gamma = alpha_1: <(F-1)^{-1} alpha_1, alpha_1^*> = -1/3
        assert_eq!(cert.entries[0][0], BigRational::new((-1).into(), 3.into()));

        let (rd, id) = setup("A2");
        let tf = good_pair_search(&rd, &id).unwrap().with_q(2).unwrap();
        let cert = tf.regularity_certificate().unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.entries.len(), 6);
    }

    #[test]
    fn tau_orbit_sizes_small() {
        let (rd, id) = setup("A2");
        let tf = good_pair_search(&rd, &id).unwrap();
        let orbits = tf.tau_orbit_sizes();
        assert!(orbits.all_equal_h);
        assert_eq!(orbits.orbit_count, 2);

        let (rd, id) = setup("B2");
        let tf = good_pair_search(&rd, &id).unwrap();
        let orbits = tf.tau_orbit_sizes();
        assert!(orbits.all_equal_h);
        assert_eq!(orbits.orbit_count, 2);
        assert!(orbits.sizes.iter().all(|&s| s == 4));
        let _ = rd;
    }

    #[test]
    fn shift_graph_examples() {
        let (a1, id) = setup("A1");
        let g = cyclic_shift_connectivity(&a1, &id, &|w| id.apply(w));
        assert_eq!(g.vertices.len(), 1);
        assert!(g.connected);

        let (a2, id) = setup("A2");
        let g = cyclic_shift_connectivity(&a2, &id, &|w| id.apply(w));
        assert_eq!(g.vertices.len(), 2);
        assert!(g.connected);

        let (a3, id) = setup("A3");
        let g = cyclic_shift_connectivity(&a3, &id, &|w| id.apply(w));
        assert_eq!(g.vertices.len(), 4);
        assert!(g.connected);
    }

    #[test]
    fn reduced_word_enumeration() {
        let (a2, _) = setup("A2");
        let w0 = longest_element_full(&a2);
        let words = all_reduced_words(&w0);
        assert_eq!(words, vec![vec![0, 1, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn parse_twisted_type_strings() {
        assert_eq!(parse_type_string("2A4").unwrap(), (CartanType::parse("A4").unwrap(), 2));
        assert_eq!(parse_type_string("3D4").unwrap(), (CartanType::parse("D4").unwrap(), 3));
        assert_eq!(parse_type_string("E8").unwrap(), (CartanType::parse("E8").unwrap(), 1));
        assert!(parse_type_string("4D4").is_err());
        assert!(parse_type_string("2B2").is_err() || {
            // parse succeeds structurally; the automorphism build must fail
            let (ct, tw) = parse_type_string("2B2").unwrap();
            DiagramAut::standard(&build_root_system(ct), tw).is_err()
        });
    }
}
