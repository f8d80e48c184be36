use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wang_entropy::census::canonical_classes;
use wang_entropy::matrix::TransferMatrix;
use wang_entropy::tile::{Tile, TileSet};
use wang_entropy::transfer::{
    brute_force_gamma, connecting_operator, gamma, psi_word, word_of_psi, Direction,
};

fn b6() -> TileSet {
    TileSet::from_psis(&[1, 6, 7, 10, 11, 16])
}

fn b8() -> TileSet {
    TileSet::from_psis(&[1, 4, 6, 7, 10, 11, 13, 16])
}

fn random_sets(seed: u64, count: usize) -> Vec<TileSet> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| TileSet::from_mask(rng.gen())).collect()
}

#[test]
fn gamma_matches_backtracking_on_random_sets() {
    for set in random_sets(7, 200) {
        for p in 2..=4 {
            for q in 2..=4 {
                assert_eq!(
                    gamma(set, p, q).unwrap(),
                    brute_force_gamma(set, p, q).unwrap(),
                    "{set} {p}x{q}"
                );
            }
        }
    }
}

#[test]
fn gamma_matches_backtracking_on_vertex_models() {
    for set in [b6(), b8()] {
        for p in 2..=5 {
            for q in 2..=5 {
                assert_eq!(
                    gamma(set, p, q).unwrap(),
                    brute_force_gamma(set, p, q).unwrap()
                );
            }
        }
    }
}

#[test]
fn gamma_matches_backtracking_on_small_classes() {
    let small: Vec<TileSet> = canonical_classes()
        .into_iter()
        .filter(|s| s.len() <= 2)
        .collect();
    assert!(!small.is_empty());
    for set in small {
        for p in 2..=5 {
            for q in 2..=5 {
                assert_eq!(
                    gamma(set, p, q).unwrap(),
                    brute_force_gamma(set, p, q).unwrap()
                );
            }
        }
    }
}

/// Counts strips of `m` tiles directly. A horizontal strip runs left to
/// right between boundary colors `(a1, a2)` and is indexed by its bottom and
/// top words; a vertical strip runs bottom to top and is indexed by its left
/// and right words.
fn strip_counts(set: TileSet, m: usize, alpha: u8, direction: Direction) -> TransferMatrix {
    let (a1, a2) = ((alpha - 1) >> 1, (alpha - 1) & 1);
    let tiles: Vec<Tile> = set.iter().collect();
    let mut out = TransferMatrix::zeros(1 << m);
    let mut stack: Vec<Vec<Tile>> = vec![Vec::new()];
    while let Some(strip) = stack.pop() {
        if strip.len() == m {
            let (end, lower, upper): (u8, Vec<u8>, Vec<u8>) = match direction {
                Direction::Horizontal => (
                    strip[m - 1].right(),
                    strip.iter().map(|t| t.bottom()).collect(),
                    strip.iter().map(|t| t.top()).collect(),
                ),
                Direction::Vertical => (
                    strip[m - 1].top(),
                    strip.iter().map(|t| t.left()).collect(),
                    strip.iter().map(|t| t.right()).collect(),
                ),
            };
            if end == a2 {
                let (i, j) = (psi_word(&lower) - 1, psi_word(&upper) - 1);
                out.set(i, j, out.get(i, j) + 1);
            }
            continue;
        }
        let need = match (strip.last(), direction) {
            (None, _) => a1,
            (Some(t), Direction::Horizontal) => t.right(),
            (Some(t), Direction::Vertical) => t.top(),
        };
        for &t in &tiles {
            let start = match direction {
                Direction::Horizontal => t.left(),
                Direction::Vertical => t.bottom(),
            };
            if start == need {
                let mut next = strip.clone();
                next.push(t);
                stack.push(next);
            }
        }
    }
    out
}

#[test]
fn connecting_operators_match_strip_enumeration() {
    let mut sets = random_sets(11, 40);
    sets.extend([b6(), b8(), TileSet::FULL, TileSet::EMPTY]);
    for set in sets {
        for m in 1..=4 {
            for alpha in 1..=4 {
                for direction in Direction::BOTH {
                    assert_eq!(
                        connecting_operator(set, m, alpha, direction).unwrap(),
                        strip_counts(set, m, alpha, direction),
                        "{set} m={m} alpha={alpha} {direction}"
                    );
                }
            }
        }
    }
}

#[test]
fn word_index_round_trips() {
    for len in 1..=10 {
        for psi in 1..=(1usize << len) {
            let word = word_of_psi(psi, len);
            assert_eq!(word.len(), len);
            assert_eq!(psi_word(&word), psi);
        }
    }
    assert_eq!(psi_word(&[0, 0, 0, 0]), 1);
    assert_eq!(psi_word(&[1, 0, 0, 1]), 10);
    for tile in Tile::all() {
        let (b, l, t, r) = tile.edges();
        assert_eq!(psi_word(&[b, l, t, r]), tile.psi() as usize);
    }
}
