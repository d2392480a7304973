//! Crossingless matchings of 2n boundary points and the Temperley-Lieb
//! transfer action of braid generators on them.
//!
//! The basis order is calibrated, not arbitrary:
//!
//! * n = 2: index 1 is T_0 = {(1,4),(2,3)}, index 2 is T_infinity =
//!   {(1,2),(3,4)}. With the B4-standard reindexing (word letter i twists
//!   points i+1, i+2) this reproduces the printed 2x2 matrices A_1, A_2
//!   exactly.
//! * n = 3: index 3 is the standard plat bottom {(1,2),(3,4),(5,6)} and
//!   index 1 is {(1,6),(2,3),(4,5)} (the only other matching not reachable
//!   from index 3 by a single cup-cap). Indices 2, 4, 5 are fixed by the
//!   worked 6-plat example; see `BASIS_3`.
//!
//! A braid letter expands as sigma^+ = a*id + a^-1*e and
//! sigma^- = a^-1*id + a*e, each closed loop contributing
//! delta = -a^2 - a^-2.

use std::fmt;

use thiserror::Error;

use crate::braid::{BraidLetter, BraidWord, Mode};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TlError {
    #[error("strand-pair count {0} outside the supported range 1..=6")]
    PairCountOutOfRange(usize),
    #[error("cup-cap position {pos} invalid for {points} boundary points")]
    BadPosition { pos: u8, points: u8 },
    #[error("matching size mismatch: {0} vs {1} points")]
    SizeMismatch(u8, u8),
    #[error("letter {index} (geometric {geometric}) invalid for {points} points")]
    BadLetter { index: u8, geometric: u8, points: u8 },
    #[error("word mode {0} does not act on {1} strand pairs")]
    WordSizeMismatch(Mode, usize),
}

/// A crossingless perfect matching of the boundary points 1..=2n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    /// partner[p] for p in 1..=2n; slot 0 unused.
    partner: Vec<u8>,
}

impl Matching {
    /// Builds a matching from pairs; validates perfectness and the
    /// noncrossing condition.
    pub fn from_pairs(n: usize, pairs: &[(u8, u8)]) -> Self {
        let points = 2 * n as u8;
        let mut partner = vec![0u8; points as usize + 1];
        assert_eq!(pairs.len(), n, "need exactly n pairs");
        for &(x, y) in pairs {
            assert!(x >= 1 && x <= points && y >= 1 && y <= points && x != y);
            assert!(partner[x as usize] == 0 && partner[y as usize] == 0);
            partner[x as usize] = y;
            partner[y as usize] = x;
        }
        let m = Matching { partner };
        debug_assert!(m.is_noncrossing());
        m
    }

    pub fn points(&self) -> u8 {
        (self.partner.len() - 1) as u8
    }

    pub fn partner_of(&self, p: u8) -> u8 {
        self.partner[p as usize]
    }

    /// Pairs (x, y) with x < y, sorted by x.
    pub fn pairs(&self) -> Vec<(u8, u8)> {
        (1..=self.points())
            .filter(|&p| p < self.partner_of(p))
            .map(|p| (p, self.partner_of(p)))
            .collect()
    }

    fn is_noncrossing(&self) -> bool {
        let pairs = self.pairs();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i + 1..] {
                if a < c && c < b && b < d {
                    return false;
                }
            }
        }
        true
    }

    /// Applies the cup-cap e_i: points (i, i+1 cyclically) get paired; the
    /// former partners of those points become paired. Returns the new
    /// matching and the number of closed loops produced (1 when i, i+1 were
    /// already mutual partners, else 0).
    pub fn apply_cupcap(&self, i: u8) -> Result<(Matching, usize), TlError> {
        let points = self.points();
        if i < 1 || i > points {
            return Err(TlError::BadPosition { pos: i, points });
        }
        let j = i % points + 1;
        if self.partner_of(i) == j {
            return Ok((self.clone(), 1));
        }
        let a = self.partner_of(i);
        let b = self.partner_of(j);
        let mut partner = self.partner.clone();
        partner[i as usize] = j;
        partner[j as usize] = i;
        partner[a as usize] = b;
        partner[b as usize] = a;
        Ok((Matching { partner }, 0))
    }

    /// Number of circles formed by gluing `other` onto the mirror image of
    /// `self` along the 2n boundary points.
    pub fn cap_pairing(&self, other: &Matching) -> Result<usize, TlError> {
        if self.points() != other.points() {
            return Err(TlError::SizeMismatch(self.points(), other.points()));
        }
        let points = self.points();
        let mut seen = vec![false; points as usize + 1];
        let mut circles = 0;
        for start in 1..=points {
            if seen[start as usize] {
                continue;
            }
            circles += 1;
            let mut p = start;
            loop {
                seen[p as usize] = true;
                let q = self.partner_of(p);
                seen[q as usize] = true;
                p = other.partner_of(q);
                if p == start {
                    break;
                }
            }
        }
        Ok(circles)
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.pairs();
        write!(f, "{{")?;
        for (i, (a, b)) in pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Catalan number C_n, the bracket basis size.
pub fn catalan(n: usize) -> usize {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as usize
}

/// Basis order for n = 2: [T_0, T_infinity].
const BASIS_2: [[(u8, u8); 2]; 2] = [[(1, 4), (2, 3)], [(1, 2), (3, 4)]];

/// Basis order for n = 3: the five trivial tangles 0_1..0_5.
///
/// Index 3 is pinned by the standard plat bottom, index 1 by the
/// one-crossing vector family (it is the unique other matching at cup-cap
/// distance > 1 from index 3), and 2/4/5 by reproducing the worked 6-plat
/// example vector exactly.
const BASIS_3: [[(u8, u8); 3]; 5] = [
    [(1, 6), (2, 3), (4, 5)],
    [(1, 4), (2, 3), (5, 6)],
    [(1, 2), (3, 4), (5, 6)],
    [(1, 2), (3, 6), (4, 5)],
    [(1, 6), (2, 5), (3, 4)],
];

fn lex_matchings(n: usize) -> Vec<Matching> {
    // all noncrossing matchings on 1..=2n, sorted by their pair lists
    fn rec(points: &[u8], acc: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if points.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = points[0];
        for k in (1..points.len()).step_by(2) {
            acc.push((first, points[k]));
            let inside: Vec<u8> = points[1..k].to_vec();
            let outside: Vec<u8> = points[k + 1..].to_vec();
            let mut inner_out = Vec::new();
            rec(&inside, &mut Vec::new(), &mut inner_out);
            for inner in inner_out {
                let saved = acc.len();
                acc.extend(inner);
                rec(&outside, acc, out);
                acc.truncate(saved);
            }
            acc.pop();
        }
    }
    let points: Vec<u8> = (1..=2 * n as u8).collect();
    let mut raw = Vec::new();
    rec(&points, &mut Vec::new(), &mut raw);
    let mut matchings: Vec<Matching> = raw
        .into_iter()
        .map(|pairs| Matching::from_pairs(n, &pairs))
        .collect();
    matchings.sort_by_key(|m| m.pairs());
    matchings.dedup();
    matchings
}

/// All C_n crossingless matchings of 2n points in the documented basis
/// order. Supported for 1 <= n <= 6.
pub fn enumerate_matchings(n: usize) -> Result<Vec<Matching>, TlError> {
    if !(1..=6).contains(&n) {
        return Err(TlError::PairCountOutOfRange(n));
    }
    static BASES: std::sync::OnceLock<Vec<Vec<Matching>>> = std::sync::OnceLock::new();
    let all = BASES.get_or_init(|| {
        (1..=6)
            .map(|n| match n {
                2 => BASIS_2
                    .iter()
                    .map(|pairs| Matching::from_pairs(2, pairs))
                    .collect(),
                3 => BASIS_3
                    .iter()
                    .map(|pairs| Matching::from_pairs(3, pairs))
                    .collect(),
                _ => lex_matchings(n),
            })
            .collect()
    });
    Ok(all[n - 1].clone())
}

/// 1-based index of a matching in the basis order.
pub fn basis_index(basis: &[Matching], m: &Matching) -> Option<usize> {
    basis.iter().position(|b| b == m).map(|i| i + 1)
}

/// A C_n x C_n matrix over the Laurent ring; column j holds the image of
/// basis matching j.
#[derive(Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    n: usize,
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl TransferMatrix {
    pub fn identity(n: usize) -> Result<Self, TlError> {
        if n == 0 || n > 6 {
            return Err(TlError::PairCountOutOfRange(n));
        }
        let dim = catalan(n);
        let mut entries = vec![LaurentPoly::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = LaurentPoly::one();
        }
        Ok(TransferMatrix { n, dim, entries })
    }

    pub fn pairs_n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.dim + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: LaurentPoly) {
        self.entries[row * self.dim + col] = value;
    }

    /// Column j, 0-based.
    pub fn column(&self, col: usize) -> Vec<LaurentPoly> {
        (0..self.dim).map(|r| self.entry(r, col).clone()).collect()
    }

    pub fn mul(&self, rhs: &TransferMatrix) -> TransferMatrix {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let mut entries = vec![LaurentPoly::zero(); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = rhs.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * dim + j] = entries[i * dim + j].add(&a.mul(b));
                }
            }
        }
        TransferMatrix {
            n: self.n,
            dim,
            entries,
        }
    }

    /// Matrix-vector product against a coefficient column.
    pub fn apply(&self, vec: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(vec.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = LaurentPoly::zero();
                for (j, v) in vec.iter().enumerate() {
                    if !v.is_zero() && !self.entry(i, j).is_zero() {
                        acc = acc.add(&self.entry(i, j).mul(v));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LaurentPoly]> {
        self.entries.chunks(self.dim)
    }
}

impl fmt::Debug for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in self.rows() {
            write!(f, "  [")?;
            for (j, p) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Geometric cup-cap position of a word-level letter at strand-pair count n.
/// The B4-standard alphabet is shifted by one; 6-plat letters act at their
/// own index, with index 2n meaning the wrap-around position.
fn geometric_index(letter: BraidLetter, n: usize) -> u8 {
    if n == 2 {
        letter.index + 1
    } else {
        letter.index
    }
}

/// Transfer matrix of a single braid letter on the matching basis.
pub fn transfer_matrix(letter: BraidLetter, n: usize) -> Result<TransferMatrix, TlError> {
    let basis = enumerate_matchings(n)?;
    let points = 2 * n as u8;
    let geo = geometric_index(letter, n);
    if geo < 1 || geo > points {
        return Err(TlError::BadLetter {
            index: letter.index,
            geometric: geo,
            points,
        });
    }
    let dim = basis.len();
    let mut mat = TransferMatrix {
        n,
        dim,
        entries: vec![LaurentPoly::zero(); dim * dim],
    };
    // sigma^+ = a*id + a^-1*e, sigma^- = a^-1*id + a*e
    let (id_coeff, e_coeff) = if letter.sign > 0 {
        (LaurentPoly::monomial(1, 1), LaurentPoly::monomial(-1, 1))
    } else {
        (LaurentPoly::monomial(-1, 1), LaurentPoly::monomial(1, 1))
    };
    for (col, m) in basis.iter().enumerate() {
        let (image, loops) = m.apply_cupcap(geo)?;
        let row = basis.iter().position(|b| b == &image).unwrap();
        let mut contribution = e_coeff.clone();
        for _ in 0..loops {
            contribution = contribution.mul(&LaurentPoly::delta());
        }
        mat.set_entry(col, col, mat.entry(col, col).add(&id_coeff));
        mat.set_entry(row, col, mat.entry(row, col).add(&contribution));
    }
    Ok(mat)
}

/// Ordered product of per-letter transfer matrices in the word's
/// application order (first letter leftmost).
pub fn word_matrix(word: &BraidWord, n: usize) -> Result<TransferMatrix, TlError> {
    if word.mode.pairs() != n {
        return Err(TlError::WordSizeMismatch(word.mode, n));
    }
    let mut acc = TransferMatrix::identity(n)?;
    for &letter in &word.letters {
        acc = acc.mul(&transfer_matrix(letter, n)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Mode;
    use std::collections::BTreeSet;

    fn poly(terms: &[(i64, i128)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn letter(index: u8, sign: i8) -> BraidLetter {
        BraidLetter::new(index, sign)
    }

    #[test]
    fn matching_counts_are_catalan() {
        for n in 1..=6 {
            assert_eq!(enumerate_matchings(n).unwrap().len(), catalan(n));
        }
        assert_eq!(catalan(3), 5);
        assert!(enumerate_matchings(0).is_err());
        assert!(enumerate_matchings(7).is_err());
    }

    #[test]
    fn calibrated_bases_cover_all_matchings() {
        for n in [2usize, 3] {
            let calibrated: BTreeSet<_> = enumerate_matchings(n).unwrap().into_iter().collect();
            let lex: BTreeSet<_> = lex_matchings(n).into_iter().collect();
            assert_eq!(calibrated, lex);
        }
        assert_eq!(
            enumerate_matchings(1).unwrap(),
            vec![Matching::from_pairs(1, &[(1, 2)])]
        );
    }

    #[test]
    fn cupcap_examples() {
        let t_inf = Matching::from_pairs(2, &[(1, 2), (3, 4)]);
        let t_0 = Matching::from_pairs(2, &[(1, 4), (2, 3)]);
        assert_eq!(t_inf.apply_cupcap(1).unwrap(), (t_inf.clone(), 1));
        assert_eq!(t_inf.apply_cupcap(2).unwrap(), (t_0.clone(), 0));
        let bottom = Matching::from_pairs(3, &[(1, 2), (3, 4), (5, 6)]);
        let wrapped = Matching::from_pairs(3, &[(1, 6), (2, 5), (3, 4)]);
        assert_eq!(bottom.apply_cupcap(6).unwrap(), (wrapped, 0));
        assert!(bottom.apply_cupcap(7).is_err());
    }

    #[test]
    fn cap_pairing_examples() {
        let basis = enumerate_matchings(3).unwrap();
        let m3 = &basis[2];
        assert_eq!(m3.cap_pairing(m3).unwrap(), 3);
        let t_0 = Matching::from_pairs(2, &[(1, 4), (2, 3)]);
        let t_inf = Matching::from_pairs(2, &[(1, 2), (3, 4)]);
        assert_eq!(t_0.cap_pairing(&t_inf).unwrap(), 1);
        for m in &basis {
            assert_eq!(m.cap_pairing(m).unwrap(), 3);
        }
        assert!(t_0.cap_pairing(m3).is_err());
    }

    #[test]
    fn printed_matrices_reproduced() {
        // A_1 = [[-a^-3, a^-1], [0, a]]
        let a1 = transfer_matrix(letter(1, 1), 2).unwrap();
        assert_eq!(a1.entry(0, 0), &poly(&[(-3, -1)]));
        assert_eq!(a1.entry(0, 1), &poly(&[(-1, 1)]));
        assert_eq!(a1.entry(1, 0), &LaurentPoly::zero());
        assert_eq!(a1.entry(1, 1), &poly(&[(1, 1)]));
        // A_2 = [[a, 0], [a^-1, -a^-3]]
        let a2 = transfer_matrix(letter(2, 1), 2).unwrap();
        assert_eq!(a2.entry(0, 0), &poly(&[(1, 1)]));
        assert_eq!(a2.entry(0, 1), &LaurentPoly::zero());
        assert_eq!(a2.entry(1, 0), &poly(&[(-1, 1)]));
        assert_eq!(a2.entry(1, 1), &poly(&[(-3, -1)]));
    }

    #[test]
    fn word_matrix_examples() {
        // s2^-1 s1 at n=2: second column must be (a^-2, 1 - a^4)
        let w = BraidWord::parse("s2^-1 s1", Mode::B4Standard).unwrap();
        let m = word_matrix(&w, 2).unwrap();
        assert_eq!(m.column(1), vec![poly(&[(-2, 1)]), poly(&[(0, 1), (4, -1)])]);
        // inverse pairs give the identity
        let w = BraidWord::parse("s1 s1^-1", Mode::B4Standard).unwrap();
        assert_eq!(word_matrix(&w, 2).unwrap(), TransferMatrix::identity(2).unwrap());
        // empty word gives the identity at n=3
        let e = BraidWord::empty(Mode::B6);
        assert_eq!(word_matrix(&e, 3).unwrap(), TransferMatrix::identity(3).unwrap());
    }

    #[test]
    fn braid_and_tl_relations() {
        for n in [2usize, 3] {
            let mode = if n == 2 { Mode::B4Standard } else { Mode::B6 };
            let gens = if n == 2 { 1..=1 } else { 1..=4u8 };
            for i in gens {
                let aba = BraidWord::parse(&format!("s{i} s{} s{i}", i + 1), mode).unwrap();
                let bab = BraidWord::parse(&format!("s{} s{i} s{}", i + 1, i + 1), mode).unwrap();
                assert_eq!(word_matrix(&aba, n).unwrap(), word_matrix(&bab, n).unwrap());
            }
        }
        // far commutation at n=3
        for (i, j) in [(1u8, 3u8), (1, 4), (2, 4), (2, 5), (3, 5)] {
            let ij = BraidWord::parse(&format!("s{i} s{j}"), Mode::B6).unwrap();
            let ji = BraidWord::parse(&format!("s{j} s{i}"), Mode::B6).unwrap();
            assert_eq!(word_matrix(&ij, 3).unwrap(), word_matrix(&ji, 3).unwrap());
        }
        // inverses at n=3, including the wrap-around generator
        for i in 1..=6u8 {
            let w = BraidWord::parse(&format!("s{i} s{i}^-1"), Mode::B6Extended).unwrap();
            assert_eq!(word_matrix(&w, 3).unwrap(), TransferMatrix::identity(3).unwrap());
        }
    }

    #[test]
    fn tl_relations_on_matchings() {
        // e_i e_{i+1} e_i = e_i and e_i^2 = delta e_i, tracked as
        // (matching, loop count) pairs over every basis element.
        let basis = enumerate_matchings(3).unwrap();
        for m in &basis {
            for i in 1..=6u8 {
                let j = i % 6 + 1;
                let (m1, l1) = m.apply_cupcap(i).unwrap();
                let (m2, l2) = m1.apply_cupcap(j).unwrap();
                let (m3, l3) = m2.apply_cupcap(i).unwrap();
                assert_eq!((m3, l1 + l2 + l3), (m.apply_cupcap(i).unwrap().0, l1));
                let (m4, l4) = m1.apply_cupcap(i).unwrap();
                assert_eq!(m4, m1);
                assert_eq!(l4, 1);
            }
        }
    }
}
