//! Self-verification suite: the nine checks the `verify` CLI subcommand and
//! the acceptance test target both run, one result row per criterion.
//!
//! Every tolerance here is exactness: all arithmetic is integer Laurent
//! arithmetic, so checks compare values bit for bit. Sweeps enumerate the
//! full stated ranges; nothing is sampled down.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{BraidLetter, BraidWord, Mode};
use crate::bracket::{self, BracketVector};
use crate::diagram::{PlanarDiagram, PlatTangle};
use crate::invariant::{
    self, a2_power, conway_fraction, equivalent, search_collisions, vector_2tangle,
    vector_3tangle, Method, SearchFilter,
};
use crate::laurent::LaurentPoly;
use crate::tl::{enumerate_matchings, transfer_matrix, word_matrix, TransferMatrix};

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let start = Instant::now();
    let (passed, details) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name,
        passed,
        details,
        millis: start.elapsed().as_millis(),
    }
}

fn poly(terms: &[(i64, i128)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

/// Check 1: the 2x2 generator matrices match their printed values entry for
/// entry, and the closed form for A_2^m agrees with the iterated product for
/// every m in [-12, 12] except 0.
pub fn check_printed_matrices() -> CheckResult {
    run_check("printed-matrix fidelity", || {
        let a1 = transfer_matrix(BraidLetter::new(1, 1), 2).map_err(|e| e.to_string())?;
        let a1_expected = [
            [poly(&[(-3, -1)]), poly(&[(-1, 1)])],
            [LaurentPoly::zero(), poly(&[(1, 1)])],
        ];
        let a2 = transfer_matrix(BraidLetter::new(2, 1), 2).map_err(|e| e.to_string())?;
        let a2_expected = [
            [poly(&[(1, 1)]), LaurentPoly::zero()],
            [poly(&[(-1, 1)]), poly(&[(-3, -1)])],
        ];
        for (mat, expected, name) in [(&a1, &a1_expected, "A_1"), (&a2, &a2_expected, "A_2")] {
            for r in 0..2 {
                for c in 0..2 {
                    if mat.entry(r, c) != &expected[r][c] {
                        return Err(format!("{name}[{r}][{c}] = {}", mat.entry(r, c)));
                    }
                }
            }
        }
        for m in -12i64..=12 {
            if m == 0 {
                continue;
            }
            let closed = a2_power(m).map_err(|e| e.to_string())?;
            let word = BraidWord::parse(&format!("s2^{m}"), Mode::B4Standard)
                .map_err(|e| e.to_string())?;
            let product = word_matrix(&word, 2).map_err(|e| e.to_string())?;
            if closed != product {
                return Err(format!("closed form disagrees with product at m = {m}"));
            }
        }
        Ok("A_1, A_2 exact; closed form = product for m in [-12,12]\\{0}".into())
    })
}

/// Check 2: the committed worked-example word reproduces its pinned vector
/// exactly on both computation paths, the empty word over the standard
/// bottom gives the third basis vector, and the two are inequivalent under
/// every unit power.
pub fn check_worked_example() -> CheckResult {
    run_check("worked-example vector", || {
        let word = BraidWord::parse(invariant::WORKED_EXAMPLE_WORD, Mode::B6Extended)
            .map_err(|e| e.to_string())?;
        let plat = PlatTangle::new(word, invariant::WORKED_EXAMPLE_BOTTOM)
            .map_err(|e| e.to_string())?;
        let expected = invariant::worked_example_vector();
        for method in [Method::Matrix, Method::Oracle] {
            let v = vector_3tangle(&plat, method).map_err(|e| e.to_string())?;
            if v != expected {
                return Err(format!("{method:?} path gives {:?}", v.entries()));
            }
        }
        let empty = PlatTangle::new(BraidWord::empty(Mode::B6), 3).map_err(|e| e.to_string())?;
        for method in [Method::Matrix, Method::Oracle] {
            let v = vector_3tangle(&empty, method).map_err(|e| e.to_string())?;
            if v != BracketVector::basis(3, 3) {
                return Err(format!("empty word at bottom 3 gives {:?}", v.entries()));
            }
        }
        match equivalent(&BracketVector::basis(3, 3), &expected).map_err(|e| e.to_string())? {
            None => Ok(format!(
                "word {} at bottom {} matches on both paths; trivial tangle inequivalent",
                invariant::WORKED_EXAMPLE_WORD,
                invariant::WORKED_EXAMPLE_BOTTOM
            )),
            Some(k) => Err(format!("trivial tangle equivalent with k = {k}")),
        }
    })
}

fn b4_alphabet() -> Vec<BraidLetter> {
    vec![
        BraidLetter::new(1, 1),
        BraidLetter::new(1, -1),
        BraidLetter::new(2, 1),
        BraidLetter::new(2, -1),
    ]
}

/// Check 3: the transfer-matrix path equals the brute-force state sum for
/// every 4-plat word through length 8 and every extended 6-plat word through
/// length 6 over all five bottoms.
pub fn check_oracle_equivalence() -> CheckResult {
    run_check("oracle equivalence sweep", || {
        // 4-plats: DFS over all words, sharing matrix prefixes
        struct B4Dfs {
            letters: Vec<(BraidLetter, TransferMatrix)>,
            checked: u64,
        }
        impl B4Dfs {
            fn walk(
                &mut self,
                word: &mut Vec<BraidLetter>,
                m: &TransferMatrix,
                depth: usize,
            ) -> Result<(), String> {
                let braid = BraidWord {
                    mode: Mode::B4Standard,
                    letters: word.clone(),
                };
                let text = braid.to_string();
                let plat = PlatTangle::four_plat(braid).map_err(|e| e.to_string())?;
                let d = PlanarDiagram::build_plat(&plat).map_err(|e| e.to_string())?;
                let oracle = bracket::state_sum_tangle(&d).map_err(|e| e.to_string())?;
                if oracle.entries() != &m.column(1)[..] {
                    return Err(format!("4-plat mismatch at word {text}"));
                }
                self.checked += 1;
                if depth == 0 {
                    return Ok(());
                }
                for i in 0..self.letters.len() {
                    let (l, lm) = (self.letters[i].0, &self.letters[i].1);
                    let next = m.mul(lm);
                    word.push(l);
                    self.walk(word, &next, depth - 1)?;
                    word.pop();
                }
                Ok(())
            }
        }
        let mut b4 = B4Dfs {
            letters: b4_alphabet()
                .into_iter()
                .map(|l| (l, transfer_matrix(l, 2).unwrap()))
                .collect(),
            checked: 0,
        };
        let identity = TransferMatrix::identity(2).map_err(|e| e.to_string())?;
        b4.walk(&mut Vec::new(), &identity, 8)?;

        // extended 6-plats over all bottoms
        struct B6Dfs {
            letters: Vec<(BraidLetter, TransferMatrix)>,
            checked: u64,
        }
        impl B6Dfs {
            fn walk(
                &mut self,
                word: &mut Vec<BraidLetter>,
                m: &TransferMatrix,
                depth: usize,
            ) -> Result<(), String> {
                let braid = BraidWord {
                    mode: Mode::B6Extended,
                    letters: word.clone(),
                };
                for bottom in 1..=5usize {
                    let plat =
                        PlatTangle::new(braid.clone(), bottom).map_err(|e| e.to_string())?;
                    let d = PlanarDiagram::build_plat(&plat).map_err(|e| e.to_string())?;
                    let oracle = bracket::state_sum_tangle(&d).map_err(|e| e.to_string())?;
                    if oracle.entries() != &m.column(bottom - 1)[..] {
                        return Err(format!("6-plat mismatch at word {braid} bottom {bottom}"));
                    }
                    self.checked += 1;
                }
                if depth == 0 {
                    return Ok(());
                }
                for i in 0..self.letters.len() {
                    let (l, lm) = (self.letters[i].0, &self.letters[i].1);
                    let next = m.mul(lm);
                    word.push(l);
                    self.walk(word, &next, depth - 1)?;
                    word.pop();
                }
                Ok(())
            }
        }
        let mut b6 = B6Dfs {
            letters: invariant::full_alphabet()
                .into_iter()
                .map(|l| (l, transfer_matrix(l, 3).unwrap()))
                .collect(),
            checked: 0,
        };
        let identity = TransferMatrix::identity(3).map_err(|e| e.to_string())?;
        b6.walk(&mut Vec::new(), &identity, 6)?;
        Ok(format!(
            "{} 4-plat words and {} 6-plat tangles agree on both paths",
            b4.checked, b6.checked
        ))
    })
}

/// Check 4: braid relations, far commutation and inverse cancellation hold
/// as matrix identities at both sizes, and inserting a randomized trailing
/// kink multiplies the closure bracket by exactly -a^(-3s).
pub fn check_regular_isotopy() -> CheckResult {
    run_check("regular-isotopy suite", || {
        // braid relations at n = 2
        for (lhs, rhs) in [("s1 s2 s1", "s2 s1 s2")] {
            let l = word_matrix(&BraidWord::parse(lhs, Mode::B4Standard).unwrap(), 2)
                .map_err(|e| e.to_string())?;
            let r = word_matrix(&BraidWord::parse(rhs, Mode::B4Standard).unwrap(), 2)
                .map_err(|e| e.to_string())?;
            if l != r {
                return Err(format!("braid relation fails: {lhs} vs {rhs}"));
            }
        }
        // braid relations at n = 3, including the cyclic pairs
        for i in 1..=6u8 {
            let j = i % 6 + 1;
            for sign in ["", "^-1"] {
                let lhs = format!("s{i}{sign} s{j}{sign} s{i}{sign}");
                let rhs = format!("s{j}{sign} s{i}{sign} s{j}{sign}");
                let l = word_matrix(&BraidWord::parse(&lhs, Mode::B6Extended).unwrap(), 3)
                    .map_err(|e| e.to_string())?;
                let r = word_matrix(&BraidWord::parse(&rhs, Mode::B6Extended).unwrap(), 3)
                    .map_err(|e| e.to_string())?;
                if l != r {
                    return Err(format!("braid relation fails: {lhs} vs {rhs}"));
                }
            }
        }
        // far commutation for every disjoint generator pair at n = 3
        for i in 1..=6u8 {
            for j in 1..=6u8 {
                let (a1, a2) = (i, i % 6 + 1);
                let (b1, b2) = (j, j % 6 + 1);
                if [a1, a2].iter().any(|p| *p == b1 || *p == b2) {
                    continue;
                }
                let ij = word_matrix(
                    &BraidWord::parse(&format!("s{i} s{j}"), Mode::B6Extended).unwrap(),
                    3,
                )
                .map_err(|e| e.to_string())?;
                let ji = word_matrix(
                    &BraidWord::parse(&format!("s{j} s{i}"), Mode::B6Extended).unwrap(),
                    3,
                )
                .map_err(|e| e.to_string())?;
                if ij != ji {
                    return Err(format!("far commutation fails: s{i} s{j}"));
                }
            }
        }
        // inverse cancellation
        for (mode, n, count) in [(Mode::B4Standard, 2usize, 2u8), (Mode::B6Extended, 3, 6)] {
            let identity = TransferMatrix::identity(n).map_err(|e| e.to_string())?;
            for i in 1..=count {
                let w = BraidWord::parse(&format!("s{i} s{i}^-1"), mode).unwrap();
                if word_matrix(&w, n).map_err(|e| e.to_string())? != identity {
                    return Err(format!("inverse cancellation fails at n={n}, i={i}"));
                }
            }
        }
        // 100 randomized trailing kink insertions on closed 6-plats
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a6e);
        let alphabet = invariant::full_alphabet();
        let basis = enumerate_matchings(3).map_err(|e| e.to_string())?;
        for trial in 0..100 {
            let len = rng.gen_range(0..=5);
            let letters: Vec<BraidLetter> = (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect();
            let bottom = rng.gen_range(1..=5usize);
            let closure = rng.gen_range(1..=5usize);
            let word = BraidWord {
                mode: Mode::B6Extended,
                letters: letters.clone(),
            };
            let plat = PlatTangle::new(word, bottom).map_err(|e| e.to_string())?;
            let base = bracket::state_sum_link(
                &PlanarDiagram::close(&plat, closure).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            // appending a letter that twists a capped pair is a kink
            let cap = &basis[bottom - 1];
            let loop_positions: Vec<u8> = (1..=6u8)
                .filter(|&k| cap.apply_cupcap(k).unwrap().1 == 1)
                .collect();
            let k = loop_positions[rng.gen_range(0..loop_positions.len())];
            let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut kinked = letters.clone();
            kinked.push(BraidLetter::new(k, sign));
            let word = BraidWord {
                mode: Mode::B6Extended,
                letters: kinked,
            };
            let plat = PlatTangle::new(word, bottom).map_err(|e| e.to_string())?;
            let with_kink = bracket::state_sum_link(
                &PlanarDiagram::close(&plat, closure).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            let factor = LaurentPoly::unit_pow(sign as i64);
            if with_kink != base.mul(&factor) {
                return Err(format!("kink factor fails at trial {trial}"));
            }
        }
        Ok("matrix identities hold; 100 kink insertions scale by -a^(+-3)".into())
    })
}

/// Check 5: every single-crossing extended 6-plat, over every bottom and
/// every closure, has Kauffman polynomial exactly delta^(t-1).
pub fn check_single_crossing_closures() -> CheckResult {
    run_check("one-crossing closures", || {
        let mut checked = 0usize;
        for letter in invariant::full_alphabet() {
            for bottom in 1..=5usize {
                let word = BraidWord {
                    mode: Mode::B6Extended,
                    letters: vec![letter],
                };
                let plat = PlatTangle::new(word, bottom).map_err(|e| e.to_string())?;
                for closure in 1..=5usize {
                    let d = PlanarDiagram::close(&plat, closure).map_err(|e| e.to_string())?;
                    let t = d.component_count();
                    let x = bracket::kauffman_polynomial(&d).map_err(|e| e.to_string())?;
                    if x != LaurentPoly::delta_pow(t - 1) {
                        return Err(format!(
                            "s{}^{} bottom {bottom} closure {closure}: X = {x}, t = {t}",
                            letter.index, letter.sign
                        ));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} single-crossing closures equal delta^(t-1)"))
    })
}

/// Shared sweep for checks 6 and 7: enumerate reduced alternating extended
/// 6-plat tangles with 2..=5 crossings; every one must admit a reduced
/// alternating closure, and every connected reduced alternating closure must
/// have span(X) = 4 * crossings.
fn closure_sweep() -> Result<(String, String), String> {
    let mut tangles = 0usize;
    let mut closure_fails: Vec<String> = Vec::new();
    let mut span_checked = 0usize;
    let mut span_fails: Vec<String> = Vec::new();
    for positive in [true, false] {
        let alphabet = invariant::class_alphabet(positive);
        for len in 2..=5usize {
            let mut idx = vec![0usize; len];
            loop {
                let letters: Vec<BraidLetter> = idx.iter().map(|&i| alphabet[i]).collect();
                let word = BraidWord {
                    mode: Mode::B6Extended,
                    letters,
                };
                for bottom in 1..=5usize {
                    let plat = PlatTangle::new(word.clone(), bottom).map_err(|e| e.to_string())?;
                    let open = PlanarDiagram::build_plat(&plat).map_err(|e| e.to_string())?;
                    if !open.is_alternating() || !open.is_reduced() {
                        continue;
                    }
                    tangles += 1;
                    let mut found = false;
                    for closure in 1..=5usize {
                        let closed =
                            PlanarDiagram::close(&plat, closure).map_err(|e| e.to_string())?;
                        if !closed.is_alternating() || !closed.is_reduced() {
                            continue;
                        }
                        found = true;
                        if closed.is_connected() {
                            let x = bracket::kauffman_polynomial(&closed)
                                .map_err(|e| e.to_string())?;
                            let span = x.span().map_err(|e| e.to_string())?;
                            span_checked += 1;
                            if span != 4 * len as i64 {
                                span_fails.push(format!(
                                    "{word} bottom {bottom} closure {closure}: span {span} != {}",
                                    4 * len
                                ));
                            }
                        }
                    }
                    if !found {
                        closure_fails.push(format!("{word} bottom {bottom}"));
                    }
                }
                // odometer over the alphabet
                let mut k = 0;
                while k < len {
                    idx[k] += 1;
                    if idx[k] < alphabet.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == len {
                    break;
                }
            }
        }
    }
    let closure_summary = if closure_fails.is_empty() {
        Ok(format!(
            "{tangles} reduced alternating tangles all admit a reduced alternating closure"
        ))
    } else {
        Err(format!(
            "{} tangles without reduced alternating closure, e.g. {}",
            closure_fails.len(),
            closure_fails[0]
        ))
    };
    let span_summary = if span_fails.is_empty() {
        Ok(format!(
            "{span_checked} connected reduced alternating closures have span = 4c"
        ))
    } else {
        Err(format!(
            "{} span mismatches, e.g. {}",
            span_fails.len(),
            span_fails[0]
        ))
    };
    match (closure_summary, span_summary) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        (Err(a), _) => Err(a),
        (_, Err(b)) => Err(b),
    }
}

pub fn check_closure_existence_and_spans() -> (CheckResult, CheckResult) {
    let start = Instant::now();
    let outcome = closure_sweep();
    let millis = start.elapsed().as_millis();
    match outcome {
        Ok((a, b)) => (
            CheckResult {
                name: "closure existence sweep",
                passed: true,
                details: a,
                millis,
            },
            CheckResult {
                name: "span equals 4x crossings",
                passed: true,
                details: b,
                millis: 0,
            },
        ),
        Err(msg) => (
            CheckResult {
                name: "closure existence sweep",
                passed: false,
                details: msg.clone(),
                millis,
            },
            CheckResult {
                name: "span equals 4x crossings",
                passed: false,
                details: msg,
                millis: 0,
            },
        ),
    }
}

/// Check 8: on every alternating 4-plat word through 6 crossings, invariant
/// equivalence classes coincide exactly with continued-fraction classes.
pub fn check_two_tangle_classification() -> CheckResult {
    run_check("two-tangle classification", || {
        let mut entries: Vec<(String, BracketVector, invariant::ExtRational)> = Vec::new();
        for positive in [true, false] {
            let alphabet = if positive {
                [BraidLetter::new(1, 1), BraidLetter::new(2, -1)]
            } else {
                [BraidLetter::new(1, -1), BraidLetter::new(2, 1)]
            };
            for len in 0..=6usize {
                if len == 0 && !positive {
                    continue;
                }
                let mut idx = vec![0usize; len];
                loop {
                    let letters: Vec<BraidLetter> = idx.iter().map(|&i| alphabet[i]).collect();
                    let word = BraidWord {
                        mode: Mode::B4Standard,
                        letters,
                    };
                    let v = vector_2tangle(&word, Method::Matrix).map_err(|e| e.to_string())?;
                    let f = conway_fraction(&word).map_err(|e| e.to_string())?;
                    entries.push((word.to_string(), v, f));
                    if len == 0 {
                        break;
                    }
                    let mut k = 0;
                    while k < len {
                        idx[k] += 1;
                        if idx[k] < alphabet.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == len {
                        break;
                    }
                }
            }
        }
        let mut mismatches = 0usize;
        let mut example = String::new();
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let inv_eq = equivalent(&entries[i].1, &entries[j].1)
                    .map_err(|e| e.to_string())?
                    .is_some();
                let frac_eq = entries[i].2 == entries[j].2;
                if inv_eq != frac_eq {
                    mismatches += 1;
                    if example.is_empty() {
                        example = format!(
                            "{} vs {}: invariant {} fraction {}",
                            entries[i].0, entries[j].0, inv_eq, frac_eq
                        );
                    }
                }
            }
        }
        if mismatches == 0 {
            Ok(format!(
                "{} alternating 4-plat words: invariant and fraction classes coincide",
                entries.len()
            ))
        } else {
            Err(format!("{mismatches} class mismatches, e.g. {example}"))
        }
    })
}

/// Check 9: the collision search at bound 5 over reduced alternating words
/// reports an empty suspect list after the word-move closure.
pub fn check_collision_search() -> CheckResult {
    run_check("collision search", || {
        let report =
            search_collisions(5, SearchFilter::ReducedAlternating).map_err(|e| e.to_string())?;
        if report.suspect_count == 0 {
            let members: usize = report.classes.iter().map(|c| c.members.len()).sum();
            Ok(format!(
                "{} classes over {} presentations, no suspects",
                report.classes.len(),
                members
            ))
        } else {
            let mut lines = Vec::new();
            for class in report.suspects().take(3) {
                let words: Vec<String> = class
                    .members
                    .iter()
                    .map(|m| format!("{}@{}", m.word, m.bottom))
                    .collect();
                lines.push(words.join(", "));
            }
            Err(format!(
                "{} suspect classes, e.g. [{}]",
                report.suspect_count,
                lines.join(" | ")
            ))
        }
    })
}

/// Runs every acceptance check in order.
pub fn run_all() -> Vec<CheckResult> {
    let mut results = vec![
        check_printed_matrices(),
        check_worked_example(),
        check_oracle_equivalence(),
        check_regular_isotopy(),
        check_single_crossing_closures(),
    ];
    let (existence, spans) = check_closure_existence_and_spans();
    results.push(existence);
    results.push(spans);
    results.push(check_two_tangle_classification());
    results.push(check_collision_search());
    results
}

/// Negative control used by tests: the mirrored generator matrix must not
/// pass the printed-matrix comparison.
pub fn mirrored_a1_differs() -> bool {
    let mirrored = transfer_matrix(BraidLetter::new(1, -1), 2).unwrap();
    let a1 = transfer_matrix(BraidLetter::new(1, 1), 2).unwrap();
    mirrored != a1
        && mirrored.entry(0, 0) != &poly(&[(-3, -1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for result in [
            check_printed_matrices(),
            check_worked_example(),
            check_single_crossing_closures(),
        ] {
            assert!(result.passed, "{}: {}", result.name, result.details);
        }
    }

    #[test]
    fn corrupted_smoothing_is_caught() {
        assert!(mirrored_a1_differs());
    }
}
