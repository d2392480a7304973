// quick extrapolation benchmark for the acceptance sweeps (dev scratch)
use std::time::Instant;

use tanglebracket::braid::{BraidLetter, BraidWord, Mode};
use tanglebracket::bracket;
use tanglebracket::diagram::{PlanarDiagram, PlatTangle};
use tanglebracket::tl::{transfer_matrix, TransferMatrix};

fn main() {
    let letters: Vec<(BraidLetter, TransferMatrix)> = (1..=6u8)
        .flat_map(|i| [BraidLetter::new(i, 1), BraidLetter::new(i, -1)])
        .map(|l| (l, transfer_matrix(l, 3).unwrap()))
        .collect();
    for depth in [3usize, 4] {
        let t0 = Instant::now();
        let mut count = 0u64;
        for len in 0..=depth {
            let mut idx = vec![0usize; len];
            loop {
                let ls: Vec<BraidLetter> = idx.iter().map(|&i| letters[i].0).collect();
                let braid = BraidWord {
                    mode: Mode::B6Extended,
                    letters: ls,
                };
                for bottom in 1..=5usize {
                    let plat = PlatTangle::new(braid.clone(), bottom).unwrap();
                    let d = PlanarDiagram::build_plat(&plat).unwrap();
                    let v = bracket::state_sum_tangle(&d).unwrap();
                    std::hint::black_box(v);
                    count += 1;
                }
                if len == 0 {
                    break;
                }
                let mut k = 0;
                while k < len {
                    idx[k] += 1;
                    if idx[k] < 12 {
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
        println!(
            "oracle-only depth {depth}: {count} tangles in {:?} ({:.1} us each)",
            t0.elapsed(),
            t0.elapsed().as_micros() as f64 / count as f64
        );
    }
    struct Dfs<'a> {
        letters: &'a [(BraidLetter, TransferMatrix)],
        nodes: u64,
    }
    impl Dfs<'_> {
        fn walk(&mut self, m: &TransferMatrix, depth: usize) {
            self.nodes += 1;
            if depth == 0 {
                return;
            }
            for i in 0..self.letters.len() {
                let next = m.mul(&self.letters[i].1);
                self.walk(&next, depth - 1);
            }
        }
    }
    for depth in [4usize, 5] {
        let t0 = Instant::now();
        let mut dfs = Dfs {
            letters: &letters,
            nodes: 0,
        };
        dfs.walk(&TransferMatrix::identity(3).unwrap(), depth);
        println!(
            "matrix DFS depth {depth}: {} nodes in {:?} ({:.1} us/node)",
            dfs.nodes,
            t0.elapsed(),
            t0.elapsed().as_micros() as f64 / dfs.nodes as f64
        );
    }
}
