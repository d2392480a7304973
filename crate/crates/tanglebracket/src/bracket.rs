//! Kauffman bracket state sums: the exponential-time oracle over all 2^c
//! smoothings, link brackets, the writhe-normalized Kauffman polynomial,
//! and closure brackets of invariant vectors.
//!
//! At each crossing the a-smoothing is the one obtained by rotating the
//! over-strand counterclockwise onto the under-strand: for a letter of sign
//! +1 that is the vertical (identity) smoothing, for sign -1 the horizontal
//! cup-cap. Every closed circle beyond the first contributes
//! delta = -a^2 - a^-2; a lone circle has bracket 1.

use thiserror::Error;

use crate::diagram::{DiagramError, PlanarDiagram};
use crate::laurent::LaurentPoly;
use crate::tl::{enumerate_matchings, Matching, TlError};

/// Default cap on state enumeration (2^20 states).
pub const DEFAULT_STATE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("state sum over {crossings} crossings exceeds the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("tangle state sum needs 4 or 6 open endpoints, found {0}")]
    WrongEndpointCount(usize),
    #[error("link bracket needs a closed diagram; found {0} open endpoints")]
    OpenDiagram(usize),
    #[error("closure index {index} out of range for a basis of {size}")]
    BadClosureIndex { index: usize, size: usize },
    #[error("vector length {len} does not match basis size {size}")]
    VectorSizeMismatch { len: usize, size: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Tl(#[from] TlError),
}

/// Laurent coefficients of a tangle bracket over the matching basis:
/// (f, g) for 2-tangles, (f_1..f_5) for 3-tangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketVector {
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl BracketVector {
    pub fn new(n: usize, entries: Vec<LaurentPoly>) -> Self {
        debug_assert_eq!(entries.len(), crate::tl::catalan(n));
        BracketVector { n, entries }
    }

    /// The basis vector with a 1 at (1-based) index i.
    pub fn basis(n: usize, i: usize) -> Self {
        let size = crate::tl::catalan(n);
        let mut entries = vec![LaurentPoly::zero(); size];
        entries[i - 1] = LaurentPoly::one();
        BracketVector { n, entries }
    }

    pub fn pairs_n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    /// Entry at 1-based basis index.
    pub fn entry(&self, i: usize) -> &LaurentPoly {
        &self.entries[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn scale(&self, factor: &LaurentPoly) -> Self {
        BracketVector {
            n: self.n,
            entries: self.entries.iter().map(|p| p.mul(factor)).collect(),
        }
    }
}

/// Scratch union-find over edge ids, reused across the 2^c states.
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(size: usize) -> Self {
        Dsu {
            parent: vec![0; size],
        }
    }
    fn reset(&mut self, size: usize) {
        self.parent.clear();
        self.parent.extend(0..size as u32);
    }
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut p = x;
        while self.parent[p as usize] != r {
            let next = self.parent[p as usize];
            self.parent[p as usize] = r;
            p = next;
        }
        r
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

fn check_cap(crossings: usize, cap: usize) -> Result<(), BracketError> {
    if crossings > cap {
        Err(BracketError::TooManyCrossings { crossings, cap })
    } else {
        Ok(())
    }
}

/// delta^0 .. delta^max, built incrementally.
fn delta_table(max: usize) -> Vec<LaurentPoly> {
    let mut table = Vec::with_capacity(max + 1);
    table.push(LaurentPoly::one());
    for k in 1..=max {
        table.push(table[k - 1].mul(&LaurentPoly::delta()));
    }
    table
}

/// Smooths every crossing according to the bits of `state` (bit set =
/// a-smoothing) and reports (circle count, representative root per open
/// boundary position).
fn resolve_state(
    d: &PlanarDiagram,
    state: u64,
    dsu: &mut Dsu,
    boundary_roots: &mut Vec<u32>,
) -> usize {
    dsu.reset(d.edge_count());
    for (ci, c) in d.crossings().iter().enumerate() {
        let pick_a = state & (1u64 << ci) != 0;
        // vertical smoothing joins (SW,NW) and (SE,NE); horizontal joins
        // (SW,SE) and (NE,NW)
        let vertical = pick_a == c.over_nw_se;
        if vertical {
            dsu.union(c.slots[0] as u32, c.slots[3] as u32);
            dsu.union(c.slots[1] as u32, c.slots[2] as u32);
        } else {
            dsu.union(c.slots[0] as u32, c.slots[1] as u32);
            dsu.union(c.slots[2] as u32, c.slots[3] as u32);
        }
    }
    boundary_roots.clear();
    for &e in d.endpoints() {
        boundary_roots.push(dsu.find(e as u32));
    }
    // circles: classes that contain no boundary endpoint
    let mut circles = 0;
    for e in 0..d.edge_count() as u32 {
        if dsu.find(e) == e && !boundary_roots.contains(&e) {
            circles += 1;
        }
    }
    circles + d.free_loops()
}

/// Brute-force bracket vector of an open tangle diagram with 4 or 6
/// endpoints, summing over all 2^c smoothings.
pub fn state_sum_tangle(d: &PlanarDiagram) -> Result<BracketVector, BracketError> {
    state_sum_tangle_capped(d, DEFAULT_STATE_CAP)
}

pub fn state_sum_tangle_capped(
    d: &PlanarDiagram,
    cap: usize,
) -> Result<BracketVector, BracketError> {
    let points = d.endpoints().len();
    if points != 4 && points != 6 {
        return Err(BracketError::WrongEndpointCount(points));
    }
    let n = points / 2;
    let c = d.crossing_count();
    check_cap(c, cap)?;
    let basis = enumerate_matchings(n)?;
    let basis_partners: Vec<Vec<u8>> = basis
        .iter()
        .map(|m| (1..=points as u8).map(|p| m.partner_of(p)).collect())
        .collect();
    // dense coefficient accumulators: per-state terms are added without
    // allocating polynomials in the hot loop
    let max_circles = d.edge_count() + d.free_loops() + 1;
    let deltas = delta_table(max_circles);
    let bound = c as i64 + 2 * max_circles as i64;
    let width = (2 * bound + 1) as usize;
    let mut acc: Vec<Vec<i128>> = vec![vec![0; width]; basis.len()];
    let mut dsu = Dsu::new(d.edge_count());
    let mut roots = Vec::with_capacity(points);
    let mut partner = [0u8; 8];
    for state in 0..(1u64 << c) {
        let circles = resolve_state(d, state, &mut dsu, &mut roots);
        // pair boundary positions by smoothing class
        for p in 0..points {
            if partner[p] != 0 {
                continue;
            }
            for q in p + 1..points {
                if roots[q] == roots[p] {
                    partner[p] = q as u8 + 1;
                    partner[q] = p as u8 + 1;
                    break;
                }
            }
        }
        let idx = basis_partners
            .iter()
            .position(|bp| bp[..] == partner[..points])
            .expect("smoothing of a planar diagram is a noncrossing matching");
        partner[..points].iter_mut().for_each(|x| *x = 0);
        let a_count = state.count_ones() as i64;
        let exponent = 2 * a_count - c as i64;
        let buf = &mut acc[idx];
        for &(de, dc) in deltas[circles].terms() {
            let slot = (exponent + de + bound) as usize;
            buf[slot] = buf[slot].checked_add(dc).expect("coefficient overflow");
        }
    }
    let entries = acc
        .into_iter()
        .map(|buf| {
            LaurentPoly::from_terms(
                buf.into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .map(|(i, v)| (i as i64 - bound, v)),
            )
        })
        .collect();
    Ok(BracketVector { n, entries })
}

/// Brute-force bracket of a closed link diagram.
pub fn state_sum_link(d: &PlanarDiagram) -> Result<LaurentPoly, BracketError> {
    state_sum_link_capped(d, DEFAULT_STATE_CAP)
}

pub fn state_sum_link_capped(d: &PlanarDiagram, cap: usize) -> Result<LaurentPoly, BracketError> {
    if !d.is_closed() {
        return Err(BracketError::OpenDiagram(d.endpoints().len()));
    }
    let c = d.crossing_count();
    check_cap(c, cap)?;
    if c == 0 && d.free_loops() == 0 {
        return Ok(LaurentPoly::one());
    }
    let max_circles = d.edge_count() + d.free_loops() + 1;
    let deltas = delta_table(max_circles);
    let bound = c as i64 + 2 * max_circles as i64;
    let width = (2 * bound + 1) as usize;
    let mut acc = vec![0i128; width];
    let mut dsu = Dsu::new(d.edge_count());
    let mut roots = Vec::new();
    for state in 0..(1u64 << c) {
        let circles = resolve_state(d, state, &mut dsu, &mut roots);
        let a_count = state.count_ones() as i64;
        let exponent = 2 * a_count - c as i64;
        for &(de, dc) in deltas[circles - 1].terms() {
            let slot = (exponent + de + bound) as usize;
            acc[slot] = acc[slot].checked_add(dc).expect("coefficient overflow");
        }
    }
    Ok(LaurentPoly::from_terms(
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| *v != 0)
            .map(|(i, v)| (i as i64 - bound, v)),
    ))
}

/// The Kauffman polynomial X(a) = (-a^-3)^w(L) <L> under the canonical
/// orientation.
pub fn kauffman_polynomial(d: &PlanarDiagram) -> Result<LaurentPoly, BracketError> {
    kauffman_polynomial_capped(d, DEFAULT_STATE_CAP)
}

pub fn kauffman_polynomial_capped(
    d: &PlanarDiagram,
    cap: usize,
) -> Result<LaurentPoly, BracketError> {
    let w = d.writhe()?;
    Ok(LaurentPoly::unit_pow(w).mul(&state_sum_link_capped(d, cap)?))
}

/// Bracket of the closure obtained by capping a tangle with basis matching
/// i: sum_j v_j delta^(circles(j, i) - 1). Equals the state sum of the
/// closed diagram.
pub fn closure_bracket(v: &BracketVector, i: usize) -> Result<LaurentPoly, BracketError> {
    let basis = enumerate_matchings(v.n)?;
    if i == 0 || i > basis.len() {
        return Err(BracketError::BadClosureIndex {
            index: i,
            size: basis.len(),
        });
    }
    if v.entries.len() != basis.len() {
        return Err(BracketError::VectorSizeMismatch {
            len: v.entries.len(),
            size: basis.len(),
        });
    }
    let cap: &Matching = &basis[i - 1];
    let mut acc = LaurentPoly::zero();
    for (j, coeff) in v.entries.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let circles = basis[j].cap_pairing(cap)?;
        acc = acc.add(&coeff.mul(&LaurentPoly::delta_pow(circles - 1)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{BraidWord, Mode};
    use crate::diagram::PlatTangle;
    use crate::tl::word_matrix;

    fn poly(terms: &[(i64, i128)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn plat(word: &str, mode: Mode, bottom: usize) -> PlatTangle {
        PlatTangle::new(BraidWord::parse(word, mode).unwrap(), bottom).unwrap()
    }

    #[test]
    fn empty_tangle_vectors() {
        let d = PlanarDiagram::build_plat(&plat("e", Mode::B4Standard, 2)).unwrap();
        let v = state_sum_tangle(&d).unwrap();
        assert_eq!(v.entries(), &[LaurentPoly::zero(), LaurentPoly::one()]);
        let d = PlanarDiagram::build_plat(&plat("e", Mode::B6, 3)).unwrap();
        let v = state_sum_tangle(&d).unwrap();
        assert_eq!(v.entry(3), &LaurentPoly::one());
        assert_eq!(v.entries().iter().filter(|p| p.is_zero()).count(), 4);
    }

    #[test]
    fn single_crossing_tangle() {
        let d = PlanarDiagram::build_plat(&plat("s1", Mode::B4Standard, 2)).unwrap();
        let v = state_sum_tangle(&d).unwrap();
        assert_eq!(v.entries(), &[poly(&[(-1, 1)]), poly(&[(1, 1)])]);
        let d = PlanarDiagram::build_plat(&plat("s1^-1", Mode::B4Standard, 2)).unwrap();
        let v = state_sum_tangle(&d).unwrap();
        assert_eq!(v.entries(), &[poly(&[(1, 1)]), poly(&[(-1, 1)])]);
    }

    #[test]
    fn unknot_and_unlinks() {
        let circle = PlanarDiagram::close(&plat("e", Mode::B6, 3), 1).unwrap();
        assert_eq!(state_sum_link(&circle).unwrap(), LaurentPoly::one());
        let two = PlanarDiagram::close(&plat("e", Mode::B4Standard, 2), 2).unwrap();
        assert_eq!(state_sum_link(&two).unwrap(), LaurentPoly::delta());
    }

    #[test]
    fn hopf_link_bracket() {
        let d = PlanarDiagram::close(&plat("s1 s1", Mode::B4Standard, 2), 2).unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(state_sum_link(&d).unwrap(), poly(&[(4, -1), (-4, -1)]));
    }

    #[test]
    fn kinked_unknot_normalizes() {
        // s1 over the (1,2) cap of bottom 3 is a kink; the 0_1-closure
        // threads all three caps into one circle. X = 1 for either handedness.
        for word in ["s1", "s1^-1"] {
            let d = PlanarDiagram::close(&plat(word, Mode::B6, 3), 1).unwrap();
            assert_eq!(d.component_count(), 1);
            assert_eq!(kauffman_polynomial(&d).unwrap(), LaurentPoly::one());
        }
        // kinked circle beside a split circle: X = delta
        let d = PlanarDiagram::close(&plat("s2", Mode::B4Standard, 2), 2).unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(kauffman_polynomial(&d).unwrap(), LaurentPoly::delta());
    }

    #[test]
    fn trefoil_span_is_twelve() {
        let d = PlanarDiagram::close(&plat("s1 s2^-1 s1", Mode::B4Standard, 2), 2).unwrap();
        let x = kauffman_polynomial(&d).unwrap();
        assert_eq!(x.span().unwrap(), 12);
    }

    #[test]
    fn closure_bracket_matches_state_sum() {
        let words = ["e", "s1 s2^-1", "s2 s4 s2", "s1^-1 s5 s3^-1 s1", "s6 s2^-1"];
        for word in words {
            for bottom in 1..=5 {
                let p = plat(word, Mode::B6Extended, bottom);
                let open = PlanarDiagram::build_plat(&p).unwrap();
                let v = state_sum_tangle(&open).unwrap();
                for i in 1..=5 {
                    let closed = PlanarDiagram::close(&p, i).unwrap();
                    assert_eq!(
                        closure_bracket(&v, i).unwrap(),
                        state_sum_link(&closed).unwrap(),
                        "word {word} bottom {bottom} closure {i}"
                    );
                }
            }
        }
        let v = BracketVector::basis(3, 3);
        assert_eq!(
            closure_bracket(&v, 3).unwrap(),
            LaurentPoly::delta_pow(2)
        );
    }

    #[test]
    fn oracle_matches_matrix_on_small_words() {
        for word in ["e", "s1", "s2^-1 s1", "s1 s2 s1", "s1^-1 s2^-1 s1^-1 s2"] {
            let w = BraidWord::parse(word, Mode::B4Standard).unwrap();
            let col = word_matrix(&w, 2).unwrap().column(1);
            let d =
                PlanarDiagram::build_plat(&PlatTangle::four_plat(w).unwrap()).unwrap();
            let v = state_sum_tangle(&d).unwrap();
            assert_eq!(v.entries(), &col[..], "word {word}");
        }
        for word in ["e", "s3", "s6^-1", "s1 s4^-1", "s2 s6 s2^-1"] {
            let w = BraidWord::parse(word, Mode::B6Extended).unwrap();
            let m = word_matrix(&w, 3).unwrap();
            for bottom in 1..=5usize {
                let col = m.column(bottom - 1);
                let p = PlatTangle::new(w.clone(), bottom).unwrap();
                let d = PlanarDiagram::build_plat(&p).unwrap();
                let v = state_sum_tangle(&d).unwrap();
                assert_eq!(v.entries(), &col[..], "word {word} bottom {bottom}");
            }
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let w = BraidWord::parse("s1^25", Mode::B4Standard).unwrap();
        let d = PlanarDiagram::build_plat(&PlatTangle::four_plat(w).unwrap()).unwrap();
        assert!(matches!(
            state_sum_tangle(&d),
            Err(BracketError::TooManyCrossings { crossings: 25, .. })
        ));
    }

    #[test]
    fn split_union_multiplicativity() {
        // a split circle beside a trefoil multiplies the bracket by delta
        let trefoil = PlanarDiagram::close(&plat("s1 s2^-1 s1", Mode::B4Standard, 2), 2).unwrap();
        let tangle = plat("s2 s3^-1 s2", Mode::B6, 3);
        let with_circle = PlanarDiagram::close(&tangle, 3).unwrap();
        // s2 s3^-1 s2 on bottom 3 leaves the (5,6) strand untouched: its
        // closure is trefoil plus a split circle
        assert_eq!(with_circle.component_count(), 2);
        assert_eq!(
            state_sum_link(&with_circle).unwrap(),
            state_sum_link(&trefoil).unwrap().mul(&LaurentPoly::delta())
        );
    }
}
