//! Cell combinatorics over a fixed twisted Frobenius: W^F and its elements
//! c_k, root sets of the unipotent intersections, the proper-Levi test, the
//! non-emptiness classifier on double cosets, and the exceptional-pair scan.
//!
//! The classifier certifies the implication "double-coset criterion holds
//! => v is F-fixed or the intersection roots span a proper subspace". A Levi
//! subgroup containing the torus is cut out by a rational subspace, so
//! containment in a proper one is exactly a span-rank question.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg;
use crate::rootsys::RootDatum;
use crate::twistfrob::TwistedFrob;
use crate::weylcore::{cell_product_set, Side, WeylElt};

/// A cell index: the pair (v, a) with a taken mod h.
#[derive(Debug, Clone)]
pub struct CellKey {
    pub v: WeylElt,
    pub a: usize,
}

impl CellKey {
    pub fn new(tf: &TwistedFrob, v: WeylElt, a: i64) -> Self {
        CellKey { v, a: a.rem_euclid(tf.h() as i64) as usize }
    }
}

/// Witness for a nonempty double-coset criterion: the common cell u together
/// with subword subsets realizing it on both sides, when they exist. The
/// subsets are recorded as simple indices (0-based) selected from the fixed
/// reduced word of c, resp. sigma^a(c).
#[derive(Debug, Clone, Serialize)]
pub struct CommonCellWitness {
    pub u: WeylElt,
    pub left_subset: Option<Vec<usize>>,
    pub right_subset: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifierVerdict {
    /// The double-coset criterion: the two cell-product sets intersect.
    pub nonempty_possible: bool,
    pub in_wf: bool,
    pub proper_levi: bool,
    /// Root indices of v^{-1}(Phi^+) intersected with c_a(Phi^+).
    pub intersection_roots: Vec<usize>,
    pub witness: Option<CommonCellWitness>,
}

impl ClassifierVerdict {
    /// The implication the classifier certifies; false is a violation.
    pub fn holds(&self) -> bool {
        !self.nonempty_possible || self.in_wf || self.proper_levi
    }
}

/// The elements c_k for 0 <= k < h with sigma^k = 1, deduplicated in k-order.
/// These exhaust the F-fixed points of W (checked elementwise here, and
/// against brute-force enumeration in the rank <= 4 sweeps).
pub fn wf_elements_with_k(tf: &TwistedFrob) -> Vec<(usize, WeylElt)> {
    let ord = tf.sigma().order();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in (0..tf.h()).step_by(ord) {
        let ck = tf.c_power(k as i64);
        debug_assert_eq!(tf.frobenius_on_weyl(&ck), ck, "c_{k} must be F-fixed");
        if seen.insert(ck.perm().to_vec()) {
            out.push((k, ck));
        }
    }
    out
}

pub fn wf_elements(tf: &TwistedFrob) -> Vec<WeylElt> {
    wf_elements_with_k(tf).into_iter().map(|(_, w)| w).collect()
}

/// Checks every claimed member is actually fixed by w -> c sigma(w) c^{-1}.
pub fn verify_wf_fixed(tf: &TwistedFrob) -> bool {
    wf_elements(tf).iter().all(|w| &tf.frobenius_on_weyl(w) == w)
}

/// Root indices of v^{-1}(Phi^+) n d(Phi^+), d = c_a.
pub fn intersection_roots(tf: &TwistedFrob, key: &CellKey) -> Vec<usize> {
    let rd = tf.datum();
    let d = tf.c_power(key.a as i64);
    let v_inv = key.v.inverse();
    let lhs: HashSet<usize> = (0..rd.positive_count()).map(|i| v_inv.apply_root(i)).collect();
    let mut out: Vec<usize> = (0..rd.positive_count())
        .map(|i| d.apply_root(i))
        .filter(|i| lhs.contains(i))
        .collect();
    out.sort_unstable();
    out
}

/// True iff the Q-span of the given roots has dimension strictly below the
/// rank, i.e. the roots fit inside a proper Levi containing the torus.
pub fn proper_levi_test(rd: &RootDatum, root_indices: &[usize]) -> bool {
    let rows: Vec<Vec<i64>> = root_indices.iter().map(|&i| rd.roots()[i].clone()).collect();
    linalg::rank_int(&rows) < rd.rank()
}

/// The double-coset criterion for the cell (v, a): do the cell sets of
/// B.c.B.sigma(vd).B and B.vd.B.sigma^a(c).B meet? The left product peels
/// the reduced word of c, the right product the reduced word of sigma^a(c).
pub fn sigma_nonempty_test(
    tf: &TwistedFrob,
    key: &CellKey,
) -> Result<(bool, Option<CommonCellWitness>)> {
    let sigma = tf.sigma();
    let c = tf.coxeter_element();
    let d = tf.c_power(key.a as i64);
    let vd = key.v.multiply(&d)?;
    let sigma_vd = sigma.apply(&vd);
    let sigma_a_c = apply_sigma_power(tf, c, key.a);

    let left = cell_product_set(c, &sigma_vd, Side::Left)?;
    let right = cell_product_set(&vd, &sigma_a_c, Side::Right)?;

    let right_set: HashSet<&WeylElt> = right.iter().collect();
    let common: Option<&WeylElt> = left.iter().find(|u| right_set.contains(u));
    match common {
        None => Ok((false, None)),
        Some(u) => {
            let left_subset = find_subword_factor(c, &sigma_vd, u, true);
            let right_subset = find_subword_factor(&sigma_a_c, &vd, u, false);
            Ok((
                true,
                Some(CommonCellWitness { u: u.clone(), left_subset, right_subset }),
            ))
        }
    }
}

pub(crate) fn apply_sigma_power(tf: &TwistedFrob, w: &WeylElt, a: usize) -> WeylElt {
    let mut out = w.clone();
    for _ in 0..a % tf.sigma().order() {
        out = tf.sigma().apply(&out);
    }
    out
}

/// Searches subsets I of the positions of c's reduced word for one with
/// c_I . other = u (prefix = true) or other . c_I = u (prefix = false).
/// Returns the selected simple indices. Subsets are scanned in increasing
/// bitmask order, so the reported witness is deterministic.
fn find_subword_factor(
    c: &WeylElt,
    other: &WeylElt,
    u: &WeylElt,
    prefix: bool,
) -> Option<Vec<usize>> {
    let rd = c.datum();
    let word = c.word();
    let r = word.len();
    for mask in 0u32..(1 << r) {
        let letters: Vec<usize> = (0..r)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| word[i] as usize)
            .collect();
        let c_i = WeylElt::from_word(rd, &letters).expect("letters are valid");
        let prod = if prefix { c_i.multiply(other) } else { other.multiply(&c_i) }
            .expect("same datum");
        if &prod == u {
            return Some(letters);
        }
    }
    None
}

/// Full classification of one cell.
pub fn classify_cell(tf: &TwistedFrob, key: &CellKey, wf: &HashSet<Vec<u32>>) -> Result<ClassifierVerdict> {
    let (nonempty_possible, witness) = sigma_nonempty_test(tf, key)?;
    let in_wf = wf.contains(key.v.perm());
    let roots = intersection_roots(tf, key);
    let proper_levi = proper_levi_test(tf.datum(), &roots);
    Ok(ClassifierVerdict { nonempty_possible, in_wf, proper_levi, intersection_roots: roots, witness })
}

#[derive(Debug, Serialize)]
pub struct Prop61Report {
    pub a: usize,
    pub checked: usize,
    /// Indices into the supplied v-list whose verdicts violate the
    /// implication. Expected empty.
    pub violators: Vec<usize>,
    pub verdicts: Vec<ClassifierVerdict>,
}

/// Classifies every v in the list against the fixed residue a, in parallel,
/// with deterministic output order.
pub fn prop61_verify(tf: &TwistedFrob, a: usize, v_list: &[WeylElt]) -> Result<Prop61Report> {
    let wf: HashSet<Vec<u32>> =
        wf_elements(tf).iter().map(|w| w.perm().to_vec()).collect();
    let verdicts: Result<Vec<ClassifierVerdict>> = v_list
        .par_iter()
        .map(|v| classify_cell(tf, &CellKey::new(tf, v.clone(), a as i64), &wf))
        .collect();
    let verdicts = verdicts?;
    let violators: Vec<usize> =
        verdicts.iter().enumerate().filter(|(_, c)| !c.holds()).map(|(i, _)| i).collect();
    Ok(Prop61Report { a, checked: v_list.len(), violators, verdicts })
}

/// One flagged pair of the exceptional-pair scan, with the classification
/// the flag is required to satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma64Flag {
    pub k: usize,
    pub l: usize,
    pub sigma_trivial: bool,
    /// c_{k+a} equals the longest element, i.e. v = w0 c^{-a}.
    pub v_is_w0_countertwist: bool,
    /// k = l + 1 mod h, i.e. v = w c.
    pub v_is_wc: bool,
}

impl Lemma64Flag {
    pub fn conclusion_holds(&self) -> bool {
        self.sigma_trivial && self.v_is_w0_countertwist && self.v_is_wc
    }
}

#[derive(Debug, Serialize)]
pub struct Lemma64Report {
    pub a: usize,
    pub pairs_checked: usize,
    pub flags: Vec<Lemma64Flag>,
    /// True iff every flagged pair satisfies the full conclusion.
    pub verdict: bool,
}

/// Scans all ordered pairs v = c_k, w = c_l in W^F with v != w and evaluates
/// both double-coset conditions
///   (B c_{l+a+1} B sigma^a(c^{-1}) B) n (B c_{k+a} B) != 0   and
///   (B c_{l+a+1} B) n (B c_{k+a} B sigma^a(c) B) != 0.
/// A pair is flagged when both hold; every flag must then have sigma trivial,
/// c_{k+a} = w0 and k = l + 1.
pub fn lemma64_scan(tf: &TwistedFrob, a: usize) -> Result<Lemma64Report> {
    let members = wf_elements_with_k(tf);
    let sigma_a_c = apply_sigma_power(tf, tf.coxeter_element(), a);
    let sigma_a_c_inv = sigma_a_c.inverse();
    let w0 = crate::weylcore::longest_element_full(tf.datum());
    let h = tf.h() as i64;

    let mut flags = Vec::new();
    let mut pairs_checked = 0;
    for &(k, ref v) in &members {
        for &(l, ref w) in &members {
            if v == w {
                continue;
            }
            pairs_checked += 1;
            let c_ka = tf.c_power(k as i64 + a as i64);
            let c_la1 = tf.c_power(l as i64 + a as i64 + 1);
            // both peels run on the right argument, whose reduced word has
            // length l(c)
            let set1 = cell_product_set(&c_la1, &sigma_a_c_inv, Side::Right)?;
            let cond1 = set1.contains(&c_ka);
            if !cond1 {
                continue;
            }
            let set2 = cell_product_set(&c_ka, &sigma_a_c, Side::Right)?;
            let cond2 = set2.contains(&c_la1);
            if !cond2 {
                continue;
            }
            flags.push(Lemma64Flag {
                k,
                l,
                sigma_trivial: tf.sigma().is_identity(),
                v_is_w0_countertwist: c_ka == w0,
                v_is_wc: (k as i64 - l as i64).rem_euclid(h) == 1,
            });
        }
    }
    let verdict = flags.iter().all(|f| f.conclusion_holds());
    Ok(Lemma64Report { a, pairs_checked, flags, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanType};
    use crate::twistfrob::{good_pair_search, parse_type_string, DiagramAut};
    use crate::weylcore::{enumerate_group, longest_element_full, WeylElt};

    fn frob(name: &str) -> TwistedFrob {
        let (ct, twist) = parse_type_string(name).unwrap();
        let rd = build_root_system(ct);
        let sigma = DiagramAut::standard(&rd, twist).unwrap();
        good_pair_search(&rd, &sigma).unwrap()
    }

    #[test]
    fn wf_elements_a2_b2() {
        let tf = frob("A2");
        let wf = wf_elements(&tf);
        assert_eq!(wf.len(), 3); // e, c, c^2
        assert!(verify_wf_fixed(&tf));

        let tf = frob("B2");
        let wf = wf_elements(&tf);
        assert_eq!(wf.len(), 4);
        assert!(wf.contains(&longest_element_full(tf.datum())));
    }

    #[test]
    fn wf_elements_twisted_a2() {
        let tf = frob("2A2");
        // h = 6, sigma order 2: only even k qualify
        let withk = wf_elements_with_k(&tf);
        assert!(withk.iter().all(|(k, _)| k % 2 == 0));
        assert!(verify_wf_fixed(&tf));
    }

    #[test]
    fn wf_matches_bruteforce_fixed_points() {
        for name in ["A2", "B2", "A3", "2A3", "G2"] {
            let tf = frob(name);
            let group = enumerate_group(tf.datum(), 100_000).unwrap();
            let mut fixed: Vec<WeylElt> =
                group.into_iter().filter(|w| &tf.frobenius_on_weyl(w) == w).collect();
            fixed.sort();
            let mut claimed = wf_elements(&tf);
            claimed.sort();
            assert_eq!(fixed, claimed, "{name}");
        }
    }

    #[test]
    fn intersection_roots_examples() {
        let tf = frob("A2");
        let rd = tf.datum();
        let e = WeylElt::identity(rd);
        // v = e, a = 0: all of Phi^+
        let all = intersection_roots(&tf, &CellKey::new(&tf, e.clone(), 0));
        assert_eq!(all, (0..3).collect::<Vec<_>>());
        // v = s1, a = 0: {alpha_2, alpha_1 + alpha_2}
        let s1 = WeylElt::simple(rd, 0);
        let got = intersection_roots(&tf, &CellKey::new(&tf, s1, 0));
        let expect: Vec<usize> =
            vec![rd.root_index(&[0, 1]).unwrap(), rd.root_index(&[1, 1]).unwrap()];
        assert_eq!(got, {
            let mut e = expect;
            e.sort_unstable();
            e
        });
        // v = w0, a = 0: empty
        let w0 = longest_element_full(rd);
        assert!(intersection_roots(&tf, &CellKey::new(&tf, w0, 0)).is_empty());
    }

    #[test]
    fn intersection_full_iff_vd_trivial() {
        let tf = frob("B2");
        let rd = tf.datum();
        for a in 0..tf.h() {
            for v in enumerate_group(rd, 100).unwrap() {
                let key = CellKey::new(&tf, v.clone(), a as i64);
                let n = intersection_roots(&tf, &key).len();
                assert!(n <= rd.positive_count());
                let vd = v.multiply(&tf.c_power(a as i64)).unwrap();
                assert_eq!(n == rd.positive_count(), vd.is_identity());
            }
        }
    }

    #[test]
    fn proper_levi_examples() {
        let a2 = build_root_system(CartanType::parse("A2").unwrap());
        assert!(proper_levi_test(&a2, &[]));
        // {alpha_2, alpha_1+alpha_2} spans rank 2: not proper
        let i1 = a2.root_index(&[0, 1]).unwrap();
        let i2 = a2.root_index(&[1, 1]).unwrap();
        assert!(!proper_levi_test(&a2, &[i1, i2]));

        let a3 = build_root_system(CartanType::parse("A3").unwrap());
        let j1 = a3.root_index(&[1, 0, 0]).unwrap();
        let j3 = a3.root_index(&[0, 0, 1]).unwrap();
        assert!(proper_levi_test(&a3, &[j1, j3]));
    }

    #[test]
    fn sigma_nonempty_hand_examples() {
        let tf = frob("A2");
        let rd = tf.datum();
        // v = e, a = 0: both sides contain c
        let key = CellKey::new(&tf, WeylElt::identity(rd), 0);
        let (ok, wit) = sigma_nonempty_test(&tf, &key).unwrap();
        assert!(ok);
        let wit = wit.unwrap();
        assert!(wit.left_subset.is_some() && wit.right_subset.is_some());

        // v = s1, a = 0: left {s1 s2 s1}, right {s2, s1 s2}: disjoint
        let key = CellKey::new(&tf, WeylElt::simple(rd, 0), 0);
        let (ok, wit) = sigma_nonempty_test(&tf, &key).unwrap();
        assert!(!ok);
        assert!(wit.is_none());

        // B2: v = w0 is F-fixed and passes
        let tf = frob("B2");
        let key = CellKey::new(&tf, longest_element_full(tf.datum()), 0);
        let (ok, _) = sigma_nonempty_test(&tf, &key).unwrap();
        assert!(ok);
    }

    #[test]
    fn witness_factorizations_are_consistent() {
        let tf = frob("B2");
        let rd = tf.datum();
        let wf: std::collections::HashSet<Vec<u32>> =
            wf_elements(&tf).iter().map(|w| w.perm().to_vec()).collect();
        for a in 0..tf.h() {
            for v in enumerate_group(rd, 100).unwrap() {
                let key = CellKey::new(&tf, v.clone(), a as i64);
                let verdict = classify_cell(&tf, &key, &wf).unwrap();
                if let Some(w) = &verdict.witness {
                    // replay both factorizations
                    let d = tf.c_power(a as i64);
                    let vd = v.multiply(&d).unwrap();
                    if let Some(ls) = &w.left_subset {
                        let ci = WeylElt::from_word(rd, ls).unwrap();
                        let svd = tf.sigma().apply(&vd);
                        assert_eq!(ci.multiply(&svd).unwrap(), w.u);
                    }
                    if let Some(rs) = &w.right_subset {
                        let cj = WeylElt::from_word(rd, rs).unwrap();
                        let sac = apply_sigma_power(&tf, &cj, a);
                        assert_eq!(vd.multiply(&sac).unwrap(), w.u);
                    }
                }
            }
        }
    }

    #[test]
    fn prop61_exhaustive_a2_b2() {
        for name in ["A2", "B2"] {
            let tf = frob(name);
            let group = enumerate_group(tf.datum(), 100).unwrap();
            for a in 0..tf.h() {
                let report = prop61_verify(&tf, a, &group).unwrap();
                assert!(report.violators.is_empty(), "{name} a={a}");
            }
        }
    }

    #[test]
    fn lemma64_a2_no_flags() {
        // w0 has odd length 3 in A2 while powers of c have even length, so
        // c^{k+a} = w0 is impossible and nothing may be flagged
        let tf = frob("A2");
        for a in 0..tf.h() {
            let report = lemma64_scan(&tf, a).unwrap();
            assert!(report.flags.is_empty(), "a = {a}");
            assert!(report.verdict);
        }
    }

    #[test]
    fn lemma64_b2_flags_exactly_w0_shift() {
        let tf = frob("B2");
        let report = lemma64_scan(&tf, 0).unwrap();
        assert_eq!(report.flags.len(), 1);
        let f = &report.flags[0];
        assert_eq!((f.k, f.l), (2, 1));
        assert!(f.conclusion_holds());
        assert!(report.verdict);
    }

    #[test]
    fn lemma64_twisted_never_flags() {
        let tf = frob("2A2");
        for a in 0..tf.h() {
            let report = lemma64_scan(&tf, a).unwrap();
            assert!(report.flags.is_empty(), "a = {a}");
        }
    }
}
