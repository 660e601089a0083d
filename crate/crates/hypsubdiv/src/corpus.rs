//! Deterministic test corpora: seeded random metric trees and seeded
//! simplex samples over group balls, always including the degenerate and
//! max-diameter cases alongside random walks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::{GroupContext, GroupElement};
use crate::tree::MetricTree;

/// A seeded random rooted tree with integer edge lengths. `budget` caps the
/// total edge length, which also caps the net size at budget + 1 (on
/// integer trees the net keeps every unit candidate). Deterministic in
/// (seed, budget).
pub fn random_tree(seed: u64, budget: u32) -> MetricTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = MetricTree::single_vertex();
    let mut spent = 0u32;
    while spent < budget {
        let len = rng.gen_range(1..=3u32).min(budget - spent);
        let attach = rng.gen_range(0..tree.vertex_count() as u32);
        tree.add_leaf(attach, BigRational::from_integer(BigInt::from(len)))
            .expect("positive length");
        spent += len;
    }
    tree
}

/// A seeded random walk of the given length from the identity, staying
/// inside the ball.
pub fn random_element(ctx: &GroupContext, rng: &mut ChaCha8Rng, length: u32) -> GroupElement {
    let mut current = ctx.identity();
    for _ in 0..length {
        let neighbors: Vec<GroupElement> = ctx
            .neighbors(&current)
            .into_iter()
            .flatten()
            .filter(|n| ctx.word_length(n) <= ctx.ball_radius())
            .collect();
        if neighbors.is_empty() {
            break;
        }
        current = neighbors[rng.gen_range(0..neighbors.len())].clone();
    }
    current
}

/// Seeded corpus of dimension-`dim` simplices: random bounded walks, with
/// one fully degenerate simplex and one max-diameter simplex always
/// included first. Every vertex stays within `max_word` of the identity so
/// hulls and distances resolve inside the ball.
pub fn group_simplices(
    ctx: &GroupContext,
    dim: usize,
    count: usize,
    max_word: u32,
    seed: u64,
) -> Result<Vec<Vec<GroupElement>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    // degenerate: the identity repeated
    out.push(vec![ctx.identity(); dim + 1]);
    // max-diameter: identity plus points on a straight power of the first
    // generator, the farthest at exactly max_word
    let mut extreme = vec![ctx.identity()];
    for k in 1..=dim {
        let reach = max_word * k as u32 / dim as u32;
        let word: Vec<crate::words::Letter> = vec![1; reach as usize];
        extreme.push(ctx.normal_form(&word)?);
    }
    out.push(extreme);
    while out.len() < count {
        let mut simplex = Vec::with_capacity(dim + 1);
        for _ in 0..=dim {
            let length = rng.gen_range(0..=max_word);
            simplex.push(random_element(ctx, &mut rng, length));
        }
        out.push(simplex);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::select_net;

    #[test]
    fn random_tree_is_deterministic_and_bounded() {
        let a = random_tree(7, 20);
        let b = random_tree(7, 20);
        assert_eq!(a.to_json_value(), b.to_json_value());
        let c = random_tree(8, 20);
        assert_ne!(a.to_json_value(), c.to_json_value());
        let mut t = random_tree(7, 39);
        let net = select_net(&mut t).unwrap();
        assert!(net.len() <= 40);
    }

    #[test]
    fn group_corpus_shape() {
        let ctx = GroupContext::free_group(&['a', 'b'], 6).unwrap();
        let sims = group_simplices(&ctx, 2, 10, 4, 99).unwrap();
        assert_eq!(sims.len(), 10);
        // degenerate first, then a max-diameter representative
        assert!(sims[0].iter().all(|v| v.is_identity()));
        assert_eq!(ctx.diameter(&sims[1]).unwrap(), 4);
        for s in &sims {
            assert_eq!(s.len(), 3);
            for v in s {
                assert!(ctx.word_length(v) <= 4);
            }
        }
        // determinism in the seed
        let again = group_simplices(&ctx, 2, 10, 4, 99).unwrap();
        assert_eq!(sims, again);
    }
}
