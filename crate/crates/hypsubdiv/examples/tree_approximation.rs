//! Approximating geodesic hulls by metric trees.
//!
//! For tuples in a free group the approximation is exact: the measured
//! distortion is zero and the hull embeds isometrically. For the genus-2
//! surface group the distortion obeys the a-priori bound 4*delta + 3*c0,
//! where c0 is the distortion of the first gluing stage. Both facts are
//! measured here with exact rational arithmetic, along with the quality of
//! the selected net.
//!
//! Run with: cargo run --example tree_approximation

use hypsubdiv::approx::build_correspondence;
use hypsubdiv::group::GroupContext;
use hypsubdiv::ratio::{self, rat_u};
use hypsubdiv::tree::verify_net;
use hypsubdiv::Result;
use num_traits::Zero;

fn main() -> Result<()> {
    let f2 = GroupContext::free_group(&['a', 'b'], 10)?;
    println!("== F2: trees are exact ==");
    for tuple_text in [vec!["", "abab"], vec!["", "ab", "aB", "bbb"], vec!["b", "A", "aa", "bab", "BA"]] {
        let tuple: Vec<_> = tuple_text
            .iter()
            .map(|s| f2.parse_element(s))
            .collect::<Result<_>>()?;
        let corr = build_correspondence(&f2, &tuple)?;
        println!(
            "tuple {:?}: hull {} vertices, tree {} vertices, distortion {}, tolerance {}",
            tuple_text,
            corr.hull.len(),
            corr.tree.vertex_count(),
            ratio::format_rational(&corr.distortion),
            ratio::format_rational(&corr.c),
        );
        // a tree approximated by a tree: every measurement collapses to zero
        assert!(corr.base_distortion.is_zero());
        assert!(corr.distortion.is_zero());
        assert!(corr.c.is_zero());
        // f preserves all pairwise distances exactly
        for u in &corr.hull {
            for v in &corr.hull {
                let dg = rat_u(u64::from(f2.distance(u, v)?));
                let dt = corr.tree.distance(corr.f[u], corr.f[v]);
                assert_eq!(dg, dt);
            }
        }
    }
    println!("hull embeds isometrically in every case");

    println!("\n== genus-2 surface group: bounded distortion ==");
    let surface = GroupContext::genus2(6)?;
    let four_delta = rat_u(4) * surface.delta();
    for tuple_text in [vec!["", "ab", "abab"], vec!["", "ba", "dc"], vec!["", "ab", "cd", "aBc"]] {
        let tuple: Vec<_> = tuple_text
            .iter()
            .map(|s| surface.parse_element(s))
            .collect::<Result<_>>()?;
        let corr = build_correspondence(&surface, &tuple)?;
        let bound = &four_delta + rat_u(3) * &corr.base_distortion;
        println!(
            "tuple {:?}: distortion {} <= bound {} (stage-1 c0 = {})",
            tuple_text,
            ratio::format_rational(&corr.distortion),
            ratio::format_rational(&bound),
            ratio::format_rational(&corr.base_distortion),
        );
        assert!(corr.distortion <= bound);

        // the net is 1-separated, covers the tree, and respects hull size
        let quality = verify_net(&corr.tree, &corr.net)?;
        if let Some(sep) = &quality.min_separation {
            assert!(*sep >= rat_u(1));
        }
        assert!(quality.max_gap <= rat_u(2));
        println!(
            "  net: {} points, min separation {:?}, covering radius {}",
            corr.net.len(),
            quality.min_separation.as_ref().map(ratio::format_rational),
            ratio::format_rational(&quality.max_covering_radius),
        );
    }
    println!("ok");
    Ok(())
}
