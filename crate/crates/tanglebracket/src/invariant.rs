//! Bracket invariants of plat tangles: coefficient vectors, the closed form
//! for powers of the lower-triangular generator matrix, normalization up to
//! the unit (-a^-3)^k, equivalence decisions, the continued-fraction
//! cross-oracle for 2-tangles, and the exhaustive collision search.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{BraidLetter, BraidWord, Mode};
use crate::bracket::{self, BracketError, BracketVector};
use crate::diagram::{DiagramError, PlanarDiagram, PlatTangle};
use crate::laurent::LaurentPoly;
use crate::tl::{self, enumerate_matchings, Matching, TlError, TransferMatrix};

/// Largest collision-search bound accepted (matrix-path budget).
pub const SEARCH_BOUND_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("expected a B4-standard word, got mode {0}")]
    NotFourPlat(Mode),
    #[error("expected a 6-plat word, got mode {0}")]
    NotSixPlat(Mode),
    #[error("the zero vector has no canonical representative")]
    ZeroVector,
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("conway fraction is defined for alternating words only")]
    NotAlternating,
    #[error("closed form for A_2^m excludes m = 0")]
    ZeroPower,
    #[error("search bound {bound} exceeds the configured limit {limit}")]
    BoundTooLarge { bound: usize, limit: usize },
    #[error(transparent)]
    Tl(#[from] TlError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Which computation path to use for a bracket vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Matrix,
    Oracle,
}

/// Coefficient pair (f, g) of a 2-tangle over (T_0, T_infinity).
pub fn vector_2tangle(word: &BraidWord, method: Method) -> Result<BracketVector, InvariantError> {
    if word.mode != Mode::B4Standard {
        return Err(InvariantError::NotFourPlat(word.mode));
    }
    match method {
        Method::Matrix => {
            let m = tl::word_matrix(word, 2)?;
            Ok(BracketVector::new(2, m.column(1)))
        }
        Method::Oracle => {
            let plat = PlatTangle::four_plat(word.clone())?;
            let d = PlanarDiagram::build_plat(&plat)?;
            Ok(bracket::state_sum_tangle(&d)?)
        }
    }
}

/// Five-entry coefficient vector of a 6-plat tangle over 0_1..0_5.
pub fn vector_3tangle(plat: &PlatTangle, method: Method) -> Result<BracketVector, InvariantError> {
    if plat.word.mode == Mode::B4Standard {
        return Err(InvariantError::NotSixPlat(plat.word.mode));
    }
    match method {
        Method::Matrix => {
            let m = tl::word_matrix(&plat.word, 3)?;
            Ok(BracketVector::new(3, m.column(plat.bottom - 1)))
        }
        Method::Oracle => {
            let d = PlanarDiagram::build_plat(plat)?;
            Ok(bracket::state_sum_tangle(&d)?)
        }
    }
}

/// Closed form for A_2^m, m != 0:
/// [[a^m, 0], [(a^(m+2) + (-1)^(m+1) a^(2-3m)) / (1 + a^4), (-1)^m a^(-3m)]].
/// The division is always exact in the Laurent ring.
pub fn a2_power(m: i64) -> Result<TransferMatrix, InvariantError> {
    if m == 0 {
        return Err(InvariantError::ZeroPower);
    }
    let mut mat = TransferMatrix::identity(2)?;
    mat.set_entry(0, 0, LaurentPoly::monomial(m, 1));
    mat.set_entry(0, 1, LaurentPoly::zero());
    let sign_m = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    mat.set_entry(1, 1, LaurentPoly::monomial(-3 * m, sign_m));
    let numerator =
        LaurentPoly::monomial(m + 2, 1).add(&LaurentPoly::monomial(2 - 3 * m, -sign_m));
    let denominator = LaurentPoly::from_terms([(0, 1), (4, 1)]);
    let b21 = numerator
        .div_exact(&denominator)
        .expect("the closed-form numerator is always divisible by 1 + a^4");
    mat.set_entry(1, 0, b21);
    Ok(mat)
}

/// A bracket vector normalized within its (-a^-3)^k orbit: the minimal
/// exponent of the first nonzero entry lies in {0, 1, 2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalInvariant {
    pub vector: BracketVector,
    /// The exponent k applied during normalization.
    pub unit_shift: i64,
}

/// Multiplies by the unique (-a^-3)^k that places the first nonzero entry's
/// minimal exponent in {0, 1, 2}. Idempotent.
pub fn canonicalize(v: &BracketVector) -> Result<CanonicalInvariant, InvariantError> {
    let first = v
        .entries()
        .iter()
        .find(|p| !p.is_zero())
        .ok_or(InvariantError::ZeroVector)?;
    let (_, min_exp) = first.degree_bounds().expect("nonzero entry");
    let k = min_exp.div_euclid(3);
    Ok(CanonicalInvariant {
        vector: v.scale(&LaurentPoly::unit_pow(k)),
        unit_shift: k,
    })
}

/// Finds the k with `v = (-a^-3)^k u`, entrywise with a single shared k.
pub fn equivalent(v: &BracketVector, u: &BracketVector) -> Result<Option<i64>, InvariantError> {
    if v.entries().len() != u.entries().len() {
        return Err(InvariantError::LengthMismatch(
            v.entries().len(),
            u.entries().len(),
        ));
    }
    let mut shared: Option<i64> = None;
    for (p, q) in v.entries().iter().zip(u.entries()) {
        match (p.is_zero(), q.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return Ok(None),
            (false, false) => {}
        }
        match p.unit_quotient(q) {
            None => return Ok(None),
            Some(k) => match shared {
                None => shared = Some(k),
                Some(k0) if k0 == k => {}
                Some(_) => return Ok(None),
            },
        }
    }
    Ok(Some(shared.unwrap_or(0)))
}

/// True when the 2-tangle vector is a unit multiple of (0, 1), the
/// T_infinity vector.
pub fn is_trivial_infinity(v: &BracketVector) -> bool {
    v.pairs_n() == 2
        && equivalent(v, &BracketVector::basis(2, 2))
            .map(|k| k.is_some())
            .unwrap_or(false)
}

/// An extended rational p/q with a single point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtRational {
    num: i64,
    den: i64,
}

impl ExtRational {
    pub fn infinity() -> Self {
        ExtRational { num: 1, den: 0 }
    }

    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return ExtRational {
                num: if num == 0 { 0 } else { 1 },
                den: 0,
            };
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let s = if den < 0 { -1 } else { 1 };
        ExtRational {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    /// c + 1/x, the continued-fraction step.
    fn cf_step(&self, c: i64) -> ExtRational {
        ExtRational::new(c * self.num + self.den, self.num)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0 {
            write!(f, "inf")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Conway fraction of an alternating B4-standard word, used as an
/// independent classification oracle for 2-tangles.
///
/// Convention (frozen after validating perfect agreement with invariant
/// equivalence on all alternating words through 6 crossings): trailing
/// sigma_2 runs are kink twists on the bottom caps and are stripped; the
/// remaining word is read top-to-bottom as a continued fraction
/// [c_1, c_2, ...] = c_1 + 1/(c_2 + 1/(...)), where a sigma_1 run of signed
/// length e contributes e, a sigma_2 run contributes -e, and a leading
/// sigma_2 run gets an implicit 0 entry in front. The empty word is the
/// bottom caps themselves: infinity.
pub fn conway_fraction(word: &BraidWord) -> Result<ExtRational, InvariantError> {
    if word.mode != Mode::B4Standard {
        return Err(InvariantError::NotFourPlat(word.mode));
    }
    if !word.sign_class().is_alternating() {
        return Err(InvariantError::NotAlternating);
    }
    // collapse into maximal runs of a single generator
    let mut runs: Vec<(u8, i64)> = Vec::new();
    for l in &word.letters {
        match runs.last_mut() {
            Some((idx, e)) if *idx == l.index => *e += l.sign as i64,
            _ => runs.push((l.index, l.sign as i64)),
        }
    }
    // trailing sigma_2 twists act on the capped pair: first Reidemeister kinks
    while matches!(runs.last(), Some((2, _))) {
        runs.pop();
    }
    let mut entries: Vec<i64> = Vec::new();
    if matches!(runs.first(), Some((2, _))) {
        entries.push(0);
    }
    for (idx, e) in &runs {
        entries.push(if *idx == 1 { *e } else { -*e });
    }
    let mut x = ExtRational::infinity();
    for &c in entries.iter().rev() {
        x = x.cf_step(c);
    }
    Ok(x)
}

/// The committed worked-example presentation: an alternating extended
/// 6-plat word over the standard bottom whose five vector entries are pinned
/// exactly. It is what froze the labeling of basis slots 2, 4 and 5.
pub const WORKED_EXAMPLE_WORD: &str = "s2 s3^-1 s2 s4 s3^-1 s6";
pub const WORKED_EXAMPLE_BOTTOM: usize = 3;

/// The frozen expected vector of the worked example.
pub fn worked_example_vector() -> BracketVector {
    BracketVector::new(
        3,
        vec![
            LaurentPoly::from_terms([(-6, -1), (-2, 3), (2, -3), (6, 1)]),
            LaurentPoly::from_terms([(0, 1), (4, -2), (8, 1)]),
            LaurentPoly::from_terms([(6, -2), (10, 1)]),
            LaurentPoly::from_terms([(4, -1)]),
            LaurentPoly::from_terms([(0, 1), (4, -2), (8, 1)]),
        ],
    )
}

// ---------------------------------------------------------------------------
// Collision search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchFilter {
    ReducedAlternating,
    All,
}

impl fmt::Display for SearchFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchFilter::ReducedAlternating => write!(f, "reduced-alternating"),
            SearchFilter::All => write!(f, "all"),
        }
    }
}

/// One enumerated plat in a collision class.
#[derive(Debug, Clone, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassMember {
    pub word: String,
    pub bottom: usize,
    pub crossings: usize,
}

/// A group of enumerated plats sharing one canonical invariant.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    /// Canonical vector entries, rendered as polynomial strings.
    pub canonical: Vec<String>,
    #[serde(rename = "words")]
    pub members: Vec<ClassMember>,
    /// True when some members are not connected by the word-move closure.
    pub suspect: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionReport {
    pub bound: usize,
    pub filter: String,
    pub suspect_count: usize,
    pub classes: Vec<ClassReport>,
}

impl CollisionReport {
    pub fn suspects(&self) -> impl Iterator<Item = &ClassReport> {
        self.classes.iter().filter(|c| c.suspect)
    }
}

/// Letters allowed in each alternating sign class over the extended 6-plat
/// alphabet.
pub(crate) fn class_alphabet(positive: bool) -> Vec<BraidLetter> {
    (1..=6u8)
        .map(|i| {
            let odd = i % 2 == 1;
            let sign = if odd == positive { 1 } else { -1 };
            BraidLetter::new(i, sign)
        })
        .collect()
}

pub(crate) fn full_alphabet() -> Vec<BraidLetter> {
    (1..=6u8)
        .flat_map(|i| [BraidLetter::new(i, 1), BraidLetter::new(i, -1)])
        .collect()
}

/// Cyclic twist pair of an extended 6-plat letter.
fn twist_pair(index: u8) -> (u8, u8) {
    (index, index % 6 + 1)
}

fn pairs_disjoint(i: u8, j: u8) -> bool {
    let (a1, a2) = twist_pair(i);
    let (b1, b2) = twist_pair(j);
    a1 != b1 && a1 != b2 && a2 != b1 && a2 != b2
}

fn pairs_adjacent(i: u8, j: u8) -> bool {
    if i == j {
        return false;
    }
    let (a1, a2) = twist_pair(i);
    let (b1, b2) = twist_pair(j);
    let shared = [a1, a2]
        .iter()
        .filter(|p| **p == b1 || **p == b2)
        .count();
    shared == 1
}

/// All (letter, bottom) presentations of the same reduced one-crossing
/// tangle as `letter` over cap `bottom`: sliding the crossing to the other
/// cup-cap with the same image, or re-seating it against the image cap with
/// the opposite sign. Sound by the classification of one-crossing reduced
/// alternating tangles.
fn reseat_family(
    letter: BraidLetter,
    bottom: usize,
    basis: &[Matching],
) -> Vec<(BraidLetter, usize)> {
    let m = &basis[bottom - 1];
    let (image, loops) = m.apply_cupcap(letter.index).expect("valid position");
    if loops == 1 {
        return Vec::new();
    }
    let image_idx = basis.iter().position(|b| b == &image).unwrap() + 1;
    let mut out = Vec::new();
    for l in 1..=6u8 {
        let (m2, loops2) = m.apply_cupcap(l).expect("valid position");
        if loops2 == 0 && m2 == image {
            out.push((BraidLetter::new(l, letter.sign), bottom));
        }
        let (m3, loops3) = basis[image_idx - 1].apply_cupcap(l).expect("valid position");
        if loops3 == 0 && &m3 == m {
            out.push((BraidLetter::new(l, -letter.sign), image_idx));
        }
    }
    out
}

type SearchState = (Vec<BraidLetter>, usize);

fn free_reduce_letters(letters: &[BraidLetter]) -> Vec<BraidLetter> {
    let mut stack: Vec<BraidLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match stack.last() {
            Some(&top) if top.index == l.index && top.sign == -l.sign => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    stack
}

/// Sound tangle-preserving moves on a plat word: far commutation, braid
/// relation triples (same sign, cyclically adjacent generators), trailing
/// cap kinks (insert or delete), and trailing crossing re-seats. States are
/// kept freely reduced.
fn move_neighbors(
    state: &SearchState,
    basis: &[Matching],
    max_len: usize,
    out: &mut Vec<SearchState>,
) {
    let (letters, bottom) = state;
    out.clear();
    // far commutation
    for i in 0..letters.len().saturating_sub(1) {
        let (a, b) = (letters[i], letters[i + 1]);
        if pairs_disjoint(a.index, b.index) {
            let mut next = letters.clone();
            next.swap(i, i + 1);
            out.push((free_reduce_letters(&next), *bottom));
        }
    }
    // braid relations: x y x -> y x y for adjacent generators, same sign,
    // and the conjugated form x y x^-1 -> y^-x-sign x y^x-sign
    for i in 0..letters.len().saturating_sub(2) {
        let (x, y, z) = (letters[i], letters[i + 1], letters[i + 2]);
        if !pairs_adjacent(x.index, y.index) || x.index != z.index {
            continue;
        }
        if x == z && x.sign == y.sign {
            let mut next = letters.clone();
            next[i] = y;
            next[i + 1] = x;
            next[i + 2] = y;
            out.push((free_reduce_letters(&next), *bottom));
        } else if x.sign == -z.sign {
            let mut next = letters.clone();
            next[i] = BraidLetter::new(y.index, -x.sign);
            next[i + 1] = BraidLetter::new(x.index, y.sign);
            next[i + 2] = BraidLetter::new(y.index, x.sign);
            out.push((free_reduce_letters(&next), *bottom));
        }
    }
    let cap = &basis[*bottom - 1];
    // trailing kink deletion
    if let Some(&last) = letters.last() {
        let (_, loops) = cap.apply_cupcap(last.index).expect("valid position");
        if loops == 1 {
            out.push((letters[..letters.len() - 1].to_vec(), *bottom));
        } else {
            // trailing crossing re-seat (possibly changing the bottom)
            for (l, new_bottom) in reseat_family(last, *bottom, basis) {
                if (l, new_bottom) != (last, *bottom) {
                    let mut next = letters.clone();
                    *next.last_mut().unwrap() = l;
                    out.push((free_reduce_letters(&next), new_bottom));
                }
            }
        }
    }
    // trailing kink insertion
    if letters.len() < max_len {
        for l in 1..=6u8 {
            let (_, loops) = cap.apply_cupcap(l).expect("valid position");
            if loops == 1 {
                for sign in [1i8, -1] {
                    let mut next = letters.clone();
                    next.push(BraidLetter::new(l, sign));
                    out.push((free_reduce_letters(&next), *bottom));
                }
            }
        }
    }
}

/// Splits a class's members into connected components under the word-move
/// closure. Returns the number of components among the members.
fn move_components(
    members: &[(Vec<BraidLetter>, usize)],
    basis: &[Matching],
    bound: usize,
) -> usize {
    const DIRECT_BUDGET: usize = 30_000;
    let max_len = bound + 2;
    let member_index: HashMap<&SearchState, usize> =
        members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut component = vec![usize::MAX; members.len()];
    let mut components: Vec<usize> = Vec::new();
    let mut scratch = Vec::new();
    // first pass: direct breadth-first closure over the members themselves
    for start in 0..members.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        components.push(start);
        component[start] = id;
        let mut pending = component.iter().filter(|c| **c == usize::MAX).count();
        if pending == 0 {
            break;
        }
        let mut seen: HashMap<SearchState, ()> = HashMap::new();
        let mut queue: VecDeque<SearchState> = VecDeque::new();
        seen.insert(members[start].clone(), ());
        queue.push_back(members[start].clone());
        'bfs: while let Some(state) = queue.pop_front() {
            if seen.len() > DIRECT_BUDGET {
                break;
            }
            move_neighbors(&state, basis, max_len, &mut scratch);
            for next in scratch.drain(..) {
                if seen.contains_key(&next) {
                    continue;
                }
                if let Some(&mi) = member_index.get(&next) {
                    if component[mi] == usize::MAX {
                        component[mi] = id;
                        pending -= 1;
                        if pending == 0 {
                            break 'bfs;
                        }
                    }
                }
                seen.insert(next.clone(), ());
                queue.push_back(next.clone());
            }
        }
    }
    if components.len() == 1 {
        return 1;
    }
    // second pass: connect leftover components by contracting the composite
    // word w_a^-1 w_b over bottom_b down to the trivial cap of bottom_a
    let mut merged: Vec<usize> = (0..components.len()).collect();
    fn find(merged: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while merged[r] != r {
            r = merged[r];
        }
        merged[x] = r;
        r
    }
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            if find(&mut merged, i) == find(&mut merged, j) {
                continue;
            }
            if composite_connected(&members[components[i]], &members[components[j]], basis) {
                let (ri, rj) = (find(&mut merged, i), find(&mut merged, j));
                merged[ri] = rj;
            }
        }
    }
    (0..components.len())
        .filter(|&i| find(&mut merged, i) == i)
        .count()
}

/// Certifies that two presentations carry the same tangle by reducing the
/// composite word a^-1 b over b's bottom to the trivial cap of a's bottom
/// through the sound word moves. One-sided: a failed search proves nothing.
fn composite_connected(a: &SearchState, b: &SearchState, basis: &[Matching]) -> bool {
    const BUDGET: usize = 400_000;
    let mut letters: Vec<BraidLetter> = a.0.iter().rev().map(|l| l.inverse()).collect();
    letters.extend(b.0.iter().copied());
    let start: SearchState = (free_reduce_letters(&letters), b.1);
    let target: SearchState = (Vec::new(), a.1);
    if start == target {
        return true;
    }
    let max_len = start.0.len() + 2;
    let mut seen: HashMap<SearchState, ()> = HashMap::new();
    let mut queue: VecDeque<SearchState> = VecDeque::new();
    let mut scratch = Vec::new();
    seen.insert(start.clone(), ());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        if seen.len() > BUDGET {
            return false;
        }
        move_neighbors(&state, basis, max_len, &mut scratch);
        for next in scratch.drain(..) {
            if next == target {
                return true;
            }
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                queue.push_back(next.clone());
            }
        }
    }
    false
}

/// Key for grouping by canonical invariant: stable rendering of the entries.
fn canonical_key(v: &BracketVector) -> String {
    let mut key = String::new();
    for p in v.entries() {
        key.push_str(&p.to_string());
        key.push('|');
    }
    key
}

/// Enumerates freely reduced extended 6-plat words through `max_crossings`
/// over all bottoms, groups them by canonical invariant, and checks each
/// group for connectivity under the word-move closure. Groups whose members
/// fall into more than one move component are flagged suspect.
pub fn search_collisions(
    max_crossings: usize,
    filter: SearchFilter,
) -> Result<CollisionReport, InvariantError> {
    if max_crossings > SEARCH_BOUND_LIMIT {
        return Err(InvariantError::BoundTooLarge {
            bound: max_crossings,
            limit: SEARCH_BOUND_LIMIT,
        });
    }
    let basis = enumerate_matchings(3)?;
    let letter_mats: HashMap<(u8, i8), TransferMatrix> = full_alphabet()
        .into_iter()
        .map(|l| ((l.index, l.sign), tl::transfer_matrix(l, 3).unwrap()))
        .collect();

    // DFS over freely reduced words of one alphabet, sharing prefix products
    struct Dfs<'a> {
        alphabet: &'a [BraidLetter],
        letter_mats: &'a HashMap<(u8, i8), TransferMatrix>,
        basis: &'a [Matching],
        filter: SearchFilter,
        bound: usize,
        hits: Vec<(Vec<BraidLetter>, usize, BracketVector)>,
    }
    impl Dfs<'_> {
        fn record(&mut self, word: &[BraidLetter], matrix: &TransferMatrix) {
            for bottom in 1..=self.basis.len() {
                if self.filter == SearchFilter::ReducedAlternating {
                    let braid = BraidWord {
                        mode: Mode::B6Extended,
                        letters: word.to_vec(),
                    };
                    let plat = PlatTangle::new(braid, bottom).expect("valid bottom");
                    let d = PlanarDiagram::build_plat(&plat).expect("buildable");
                    if !d.is_alternating() || !d.is_reduced() {
                        continue;
                    }
                }
                let vector = BracketVector::new(3, matrix.column(bottom - 1));
                self.hits.push((word.to_vec(), bottom, vector));
            }
        }
        fn walk(&mut self, word: &mut Vec<BraidLetter>, matrix: TransferMatrix) {
            self.record(word, &matrix);
            if word.len() == self.bound {
                return;
            }
            for i in 0..self.alphabet.len() {
                let l = self.alphabet[i];
                if let Some(&last) = word.last() {
                    if last.index == l.index && last.sign == -l.sign {
                        continue;
                    }
                }
                let next = matrix.mul(&self.letter_mats[&(l.index, l.sign)]);
                word.push(l);
                self.walk(word, next);
                word.pop();
            }
        }
    }

    let alphabets: Vec<(Vec<BraidLetter>, bool)> = match filter {
        SearchFilter::ReducedAlternating => vec![
            (class_alphabet(true), true),
            (class_alphabet(false), false),
        ],
        SearchFilter::All => vec![(full_alphabet(), true)],
    };
    // the empty word belongs to both sign classes; enumerate it once
    let mut all_hits: Vec<(Vec<BraidLetter>, usize, BracketVector)> = Vec::new();
    for (ai, (alphabet, _)) in alphabets.iter().enumerate() {
        let branch_hits: Vec<_> = alphabet
            .par_iter()
            .map(|&first| {
                let mut dfs = Dfs {
                    alphabet,
                    letter_mats: &letter_mats,
                    basis: &basis,
                    filter,
                    bound: max_crossings,
                    hits: Vec::new(),
                };
                if max_crossings > 0 {
                    let m = letter_mats[&(first.index, first.sign)].clone();
                    let mut word = vec![first];
                    dfs.walk(&mut word, m);
                }
                dfs.hits
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        all_hits.extend(branch_hits);
        if ai == 0 {
            let mut dfs = Dfs {
                alphabet,
                letter_mats: &letter_mats,
                basis: &basis,
                filter,
                bound: max_crossings,
                hits: Vec::new(),
            };
            dfs.record(&[], &TransferMatrix::identity(3)?);
            all_hits.extend(dfs.hits);
        }
    }

    // group by canonical invariant
    let mut groups: BTreeMap<String, (BracketVector, Vec<(Vec<BraidLetter>, usize)>)> =
        BTreeMap::new();
    for (letters, bottom, vector) in all_hits {
        let canon = canonicalize(&vector)?;
        let key = canonical_key(&canon.vector);
        groups
            .entry(key)
            .or_insert_with(|| (canon.vector.clone(), Vec::new()))
            .1
            .push((letters, bottom));
    }

    let mut classes: Vec<ClassReport> = groups
        .into_iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(_, (canonical, members))| {
            let mut members = members.clone();
            members.sort_by_key(|(letters, bottom)| (letters.len(), letters.clone().iter().map(|l| (l.index, l.sign)).collect::<Vec<_>>(), *bottom));
            members.dedup();
            let suspect =
                members.len() > 1 && move_components(&members, &basis, max_crossings) > 1;
            let member_reports = members
                .iter()
                .map(|(letters, bottom)| {
                    let word = BraidWord {
                        mode: Mode::B6Extended,
                        letters: letters.clone(),
                    };
                    ClassMember {
                        word: word.to_string(),
                        bottom: *bottom,
                        crossings: letters.len(),
                    }
                })
                .collect();
            ClassReport {
                canonical: canonical.entries().iter().map(|p| p.to_string()).collect(),
                members: member_reports,
                suspect,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    let suspect_count = classes.iter().filter(|c| c.suspect).count();
    Ok(CollisionReport {
        bound: max_crossings,
        filter: filter.to_string(),
        suspect_count,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Mode;

    fn poly(terms: &[(i64, i128)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn b4(text: &str) -> BraidWord {
        BraidWord::parse(text, Mode::B4Standard).unwrap()
    }

    #[test]
    fn two_tangle_vectors() {
        let e = vector_2tangle(&b4("e"), Method::Matrix).unwrap();
        assert_eq!(e.entries(), &[LaurentPoly::zero(), LaurentPoly::one()]);
        let s1 = vector_2tangle(&b4("s1"), Method::Matrix).unwrap();
        assert_eq!(s1.entries(), &[poly(&[(-1, 1)]), poly(&[(1, 1)])]);
        let w = vector_2tangle(&b4("s2^-1 s1"), Method::Matrix).unwrap();
        assert_eq!(w.entries(), &[poly(&[(-2, 1)]), poly(&[(0, 1), (4, -1)])]);
        for text in ["e", "s1", "s2^-1 s1"] {
            assert_eq!(
                vector_2tangle(&b4(text), Method::Matrix).unwrap(),
                vector_2tangle(&b4(text), Method::Oracle).unwrap()
            );
        }
    }

    #[test]
    fn a2_power_examples() {
        let m1 = a2_power(1).unwrap();
        assert_eq!(m1.entry(0, 0), &poly(&[(1, 1)]));
        assert_eq!(m1.entry(1, 0), &poly(&[(-1, 1)]));
        assert_eq!(m1.entry(1, 1), &poly(&[(-3, -1)]));
        let m2 = a2_power(2).unwrap();
        assert_eq!(m2.entry(0, 0), &poly(&[(2, 1)]));
        assert_eq!(m2.entry(1, 0), &poly(&[(0, 1), (-4, -1)]));
        assert_eq!(m2.entry(1, 1), &poly(&[(-6, 1)]));
        let minus = a2_power(-1).unwrap();
        assert_eq!(minus.entry(0, 0), &poly(&[(-1, 1)]));
        assert_eq!(minus.entry(1, 0), &poly(&[(1, 1)]));
        assert_eq!(minus.entry(1, 1), &poly(&[(3, -1)]));
        assert!(a2_power(0).is_err());
    }

    #[test]
    fn a2_power_matches_iterated_product() {
        for m in -12i64..=12 {
            if m == 0 {
                continue;
            }
            let text = format!("s2^{m}");
            let word = b4(&text);
            let product = tl::word_matrix(&word, 2).unwrap();
            assert_eq!(a2_power(m).unwrap(), product, "m = {m}");
        }
    }

    #[test]
    fn canonicalize_examples() {
        let v = BracketVector::basis(2, 2);
        let c = canonicalize(&v).unwrap();
        assert_eq!(c.vector, v);
        assert_eq!(c.unit_shift, 0);
        // (0, -a^-3) normalizes back to (0, 1) by applying k = -1
        let shifted = v.scale(&LaurentPoly::unit_pow(1));
        let c2 = canonicalize(&shifted).unwrap();
        assert_eq!(c2.vector, v);
        assert_eq!(c2.unit_shift, -1);
        let c3 = canonicalize(&v.scale(&LaurentPoly::unit_pow(-1))).unwrap();
        assert_eq!(c3.vector, v);
        assert_eq!(c3.unit_shift, 1);
        assert!(canonicalize(&BracketVector::new(2, vec![LaurentPoly::zero(); 2])).is_err());
        // canonical representative is idempotent
        let c4 = canonicalize(&c2.vector).unwrap();
        assert_eq!(c4.vector, c2.vector);
        assert_eq!(c4.unit_shift, 0);
    }

    #[test]
    fn equivalence_examples() {
        let v = vector_2tangle(&b4("s2^-1 s1"), Method::Matrix).unwrap();
        assert_eq!(equivalent(&v, &v).unwrap(), Some(0));
        let shifted = v.scale(&LaurentPoly::unit_pow(1));
        assert_eq!(equivalent(&shifted, &v).unwrap(), Some(1));
        let other = vector_2tangle(&b4("s1"), Method::Matrix).unwrap();
        assert_eq!(equivalent(&v, &other).unwrap(), None);
        assert!(equivalent(&v, &BracketVector::basis(3, 3)).is_err());
    }

    #[test]
    fn triviality_examples() {
        assert!(is_trivial_infinity(&BracketVector::new(
            2,
            vec![LaurentPoly::zero(), poly(&[(-6, 1)])]
        )));
        assert!(!is_trivial_infinity(
            &vector_2tangle(&b4("s1"), Method::Matrix).unwrap()
        ));
        assert!(!is_trivial_infinity(
            &vector_2tangle(&b4("s2^-1 s1"), Method::Matrix).unwrap()
        ));
    }

    #[test]
    fn conway_examples() {
        assert_eq!(conway_fraction(&b4("e")).unwrap(), ExtRational::infinity());
        for n in 1..=6i64 {
            let f = conway_fraction(&b4(&format!("s1^{n}"))).unwrap();
            assert_eq!(f, ExtRational::new(n, 1));
        }
        let f1 = conway_fraction(&b4("s2^-1 s1")).unwrap();
        assert_ne!(f1, conway_fraction(&b4("s1")).unwrap());
        // trailing sigma_2 twists are bottom kinks
        assert_eq!(
            conway_fraction(&b4("s2^-1")).unwrap(),
            ExtRational::infinity()
        );
        assert_eq!(
            conway_fraction(&b4("s1 s2^-1 s1")).unwrap(),
            ExtRational::new(3, 2)
        );
        assert!(conway_fraction(&b4("s1 s2")).is_err());
    }

    #[test]
    fn search_bound_zero_gives_trivial_singletons() {
        let report = search_collisions(0, SearchFilter::ReducedAlternating).unwrap();
        assert_eq!(report.classes.len(), 5);
        assert!(report.classes.iter().all(|c| c.members.len() == 1));
        assert_eq!(report.suspect_count, 0);
        assert!(search_collisions(SEARCH_BOUND_LIMIT + 1, SearchFilter::All).is_err());
    }

    #[test]
    fn one_crossing_words_collapse_by_reseating() {
        let report = search_collisions(1, SearchFilter::ReducedAlternating).unwrap();
        assert_eq!(
            report.suspect_count,
            0,
            "suspects: {:?}",
            report.suspects().collect::<Vec<_>>()
        );
        // exactly 5 trivial classes and 12 one-crossing classes
        assert_eq!(report.classes.len(), 17);
    }
}
