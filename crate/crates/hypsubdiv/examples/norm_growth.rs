//! Linear growth of subdivision cost in simplex diameter.
//!
//! In degree 1 the subdivision of an edge of length L is exactly its L
//! geodesic steps, so the ratio to the Sobolev norm 1 + L stays strictly
//! below 1. In higher degrees the measured ratio stays far below the
//! a-priori cascade bound K_i. This example prints the full degree-1 table
//! on F2 and a bucketed degree-2 table, then checks both bounds.
//!
//! Run with: cargo run --example norm_growth

use hypsubdiv::chain::{sobolev_norm, Chain};
use hypsubdiv::corpus::group_simplices;
use hypsubdiv::group::GroupContext;
use hypsubdiv::ratio::rat_u;
use hypsubdiv::subdivision::{cascade_bound, SubdivisionMap};
use hypsubdiv::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

fn main() -> Result<()> {
    let ctx = GroupContext::free_group(&['a', 'b'], 16)?;

    println!("== degree 1: one simplex per step, ratio < 1 ==");
    let map = SubdivisionMap::new(&ctx, 1);
    for len in 1..=16u32 {
        // a straight word of exact length: a^len alternating with b to stay reduced
        let word: String = (0..len).map(|k| if k % 2 == 0 { 'a' } else { 'b' }).collect();
        let g = ctx.parse_element(&word)?;
        assert_eq!(ctx.word_length(&g), len);
        let sigma = vec![ctx.identity(), g];
        let f = map.subdivide(&sigma, 1)?;
        let l1 = f.l1_norm();
        let sobolev = sobolev_norm(&ctx, &Chain::from_simplex(sigma)?)?;
        println!("L = {len:>2}: l1 = {l1:>3}, sobolev = {sobolev:>3}, ratio = {len}/{sobolev}");
        assert_eq!(l1, len.into());
        assert_eq!(sobolev, (len + 1).into());
    }
    println!("ratio L / (L + 1) <= 1 on every row");

    println!("\n== degree 2: measured ratios against the cascade bound ==");
    let map = SubdivisionMap::new(&ctx, 2);
    let corpus = group_simplices(&ctx, 2, 60, 4, 11)?;
    let mut buckets: BTreeMap<u32, (usize, BigInt, BigRational)> = BTreeMap::new();
    for sigma in &corpus {
        let f = map.subdivide(sigma, 2)?;
        let l1 = BigInt::from(f.l1_norm());
        let sobolev = sobolev_norm(&ctx, &Chain::from_simplex(sigma.clone())?)?;
        let ratio = BigRational::new(l1.clone(), BigInt::from(sobolev));
        let d = ctx.diameter(sigma)?;
        let entry = buckets.entry(d).or_insert((0, BigInt::zero(), BigRational::zero()));
        entry.0 += 1;
        entry.1 = entry.1.clone().max(l1);
        entry.2 = entry.2.clone().max(ratio);
    }
    let bound = cascade_bound(2);
    println!("cascade bound K_2 = {bound}");
    for (d, (count, max_l1, max_ratio)) in &buckets {
        println!(
            "diameter {d}: {count:>2} samples, max l1 = {max_l1:>3}, max ratio = {max_ratio}",
        );
        assert!(*max_ratio <= BigRational::from_integer(bound.clone()));
    }
    // growth is linear: max l1 within each bucket is bounded by K_2 * (1 + d) * 3
    for (d, (_, max_l1, _)) in &buckets {
        assert!(
            BigRational::from_integer(max_l1.clone())
                <= BigRational::from_integer(bound.clone()) * rat_u(u64::from(d + 1)) * rat_u(3)
        );
    }
    println!("all degree-2 ratios sit below K_2; cost grows linearly with diameter");
    println!("ok");
    Ok(())
}
