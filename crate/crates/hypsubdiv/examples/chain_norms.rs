//! Chains in the homogeneous resolution: boundary, norms, and the group
//! action.
//!
//! Builds small integral chains over F2, checks d(d(c)) = 0 exactly,
//! compares the l1 norm to the diameter-weighted Sobolev norm, verifies the
//! diagonal left action is an isometry for both, tests membership in a Rips
//! complex, and round-trips a chain through its JSON rendering.
//!
//! Run with: cargo run --example chain_norms

use hypsubdiv::chain::{self, Chain};
use hypsubdiv::group::GroupContext;
use hypsubdiv::ratio::rat_u;
use hypsubdiv::Result;
use num_bigint::BigInt;

fn main() -> Result<()> {
    let ctx = GroupContext::free_group(&['a', 'b'], 8)?;
    let el = |s: &str| ctx.parse_element(s);

    let mut c = Chain::from_simplex(vec![ctx.identity(), el("ab")?, el("aB")?])?;
    c.add_term(vec![el("a")?, el("ab")?, el("abb")?], BigInt::from(-2));
    println!("chain with {} terms, dim {}", c.term_count(), c.dim());

    let d = c.boundary()?;
    let dd = d.boundary()?;
    println!("l1(c) = {}, l1(dc) = {}, l1(ddc) = {}", c.l1_norm(), d.l1_norm(), dd.l1_norm());
    assert!(dd.is_zero());

    // Sobolev norm weights each simplex by 1 + diameter
    let l1 = c.l1_norm();
    let sobolev = chain::sobolev_norm(&ctx, &c)?;
    println!("l1 = {l1}, sobolev = {sobolev}");
    assert_eq!(l1.to_string(), "3");
    assert_eq!(sobolev.to_string(), "9"); // 1*(1+2) + 2*(1+2)

    // the diagonal action translates every vertex and preserves both norms
    let g = el("bbA")?;
    let moved = chain::act(&ctx, &g, &c)?;
    assert_eq!(moved.l1_norm(), l1);
    assert_eq!(chain::sobolev_norm(&ctx, &moved)?, sobolev);
    // and it commutes with the boundary
    assert_eq!(moved.boundary()?, chain::act(&ctx, &g, &d)?);
    println!("action by {} is a norm-preserving chain map", ctx.format_element(&g));

    // Rips membership: this chain has diameter 2, so r = 2 admits it, r = 1
    // does not
    assert!(chain::rips_check(&ctx, &c, &rat_u(2))?);
    assert!(!chain::rips_check(&ctx, &c, &rat_u(1))?);
    let diam = chain::group_diameter(&ctx, &c)?;
    println!("support diameter = {diam:?}");
    assert_eq!(diam, Some(2));

    // canonical JSON round trip
    let text = chain::chain_to_json(&ctx, &c);
    let back = chain::chain_from_json(&ctx, &text)?;
    assert_eq!(back, c);
    println!("JSON round trip preserves the chain exactly");
    println!("ok");
    Ok(())
}
