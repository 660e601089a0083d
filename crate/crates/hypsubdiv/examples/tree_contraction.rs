//! Norm-bounded contraction of a metric tree's Rips complex.
//!
//! Selects a 1-separated net in a random metric tree, builds the chain
//! contraction h of the Rips complex at radius 2, and exhaustively verifies
//! on every tuple through dimension 2: the contraction identity
//! d h + h d = id (augmented in degree 0), support containment in the convex
//! hull, and the effectivity bound l1(h(sigma)) < e(r, i). The constants
//! e(r, i) follow the recursion e(r, 1) = r + 1, e(r, i) = e(r, i-1)(i+1)+1.
//!
//! Run with: cargo run --example tree_contraction

use hypsubdiv::contraction::{e_constant, verify_contraction, ContractionOperator};
use hypsubdiv::corpus::random_tree;
use hypsubdiv::ratio::rat_u;
use hypsubdiv::tree::select_net;
use hypsubdiv::Result;

fn main() -> Result<()> {
    // pinned constants table
    for (r, i, expected) in [(2u64, 1usize, 3i64), (2, 2, 10), (1, 2, 7), (2, 3, 41)] {
        let e = e_constant(&rat_u(r), i);
        println!("e({r}, {i}) = {e}");
        assert_eq!(e, expected.into());
    }

    for seed in [1u64, 7, 23] {
        let mut tree = random_tree(seed, 18);
        let net = select_net(&mut tree)?;
        let op = ContractionOperator::new(&tree, &net, rat_u(2))?;
        let report = verify_contraction(&op, 2)?;
        println!(
            "seed {seed}: tree {} vertices, net {} points, checked {:?} simplices, max norms {:?}",
            tree.vertex_count(),
            op.net().len(),
            report.checked,
            report.max_norm.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
        );
        for w in &report.witnesses {
            println!("  FAILED dim {} simplex {:?}: {}", w.dim, w.simplex, w.failure);
        }
        assert!(report.passed());
        // h raises degree: input dimension i >= 1 is bounded by e(r, i + 1);
        // degree 0 outputs run to the basepoint and are bounded by the tree
        // depth instead
        for (i, max) in report.max_norm.iter().enumerate().skip(1) {
            let bound = e_constant(op.radius(), i + 1);
            assert!(num_bigint::BigInt::from(max.clone()) < bound);
        }
    }
    println!("contraction identity, support, and norm bounds hold exhaustively");
    println!("ok");
    Ok(())
}
