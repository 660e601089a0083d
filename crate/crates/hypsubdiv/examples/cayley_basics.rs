//! Groups, normal forms, balls, and canonical geodesics.
//!
//! Builds the free group F2 and the genus-2 surface group, multiplies and
//! inverts a few elements through their ShortLex normal forms, compares the
//! enumerated sphere sizes against the closed form for F2, walks a canonical
//! geodesic, and estimates the hyperbolicity constant empirically.
//!
//! Run with: cargo run --example cayley_basics

use hypsubdiv::group::GroupContext;
use hypsubdiv::ratio;
use hypsubdiv::Result;

fn main() -> Result<()> {
    let f2 = GroupContext::free_group(&['a', 'b'], 8)?;
    println!("== F2 (free backend, ball radius 8) ==");

    let x = f2.parse_element("abA")?;
    let y = f2.parse_element("aB")?;
    let xy = f2.multiply(&x, &y)?;
    let x_inv = f2.inverse(&x)?;
    println!("abA * aB = {}", f2.format_element(&xy));
    println!("(abA)^-1 = {}", f2.format_element(&x_inv));
    assert_eq!(f2.format_element(&xy), "a"); // abA . aB frees down to a
    assert_eq!(f2.format_element(&x_inv), "aBA");
    assert!(f2.multiply(&x, &x_inv)?.is_identity());

    // free-rank-2 spheres: 1, then 4 * 3^(k-1)
    let spheres = f2.sphere_sizes();
    println!("sphere sizes: {:?}", spheres.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    assert_eq!(spheres[1].to_string(), "4");
    assert_eq!(spheres[4].to_string(), "108");

    let g = f2.parse_element("aabAB")?;
    let geo = f2.geodesic(&f2.identity(), &g)?;
    let rendered: Vec<String> = geo.iter().map(|v| f2.format_element(v)).collect();
    println!("canonical geodesic e -> aabAB: {rendered:?}");
    assert_eq!(geo.len() as u32, f2.word_length(&g) + 1);

    // the chosen family is equivariant: translating a based geodesic by g
    // gives the chosen geodesic between the translates
    let h = f2.parse_element("ba")?;
    let translated: Vec<_> = geo
        .iter()
        .map(|v| f2.multiply(&h, v))
        .collect::<Result<_>>()?;
    assert_eq!(f2.geodesic(&h, &f2.multiply(&h, &g)?)?, translated);
    println!("geodesic family is equivariant under left translation");

    println!("\n== genus-2 surface group (Dehn backend, ball radius 4) ==");
    let surface = GroupContext::genus2(4)?;
    let p = surface.presentation();
    println!(
        "generators {:?}, relator {}",
        p.generators.iter().collect::<String>(),
        hypsubdiv::words::format_word(&p.relators[0], &p.generators),
    );
    // the relator collapses: abAB and dcDC = (cdCD)^-1 are the same element,
    // so they share one ShortLex normal form
    let r1 = surface.parse_element("abAB")?;
    let r2 = surface.parse_element("dcDC")?;
    println!(
        "abAB normalizes to {}, dcDC to {}",
        surface.format_element(&r1),
        surface.format_element(&r2)
    );
    assert_eq!(r1, r2);
    assert!(surface.multiply(&r1, &surface.inverse(&r2)?)?.is_identity());
    assert_eq!(surface.word_length(&r1), 4);

    let ball = surface.ball_size();
    println!("ball size at radius 4: {ball}");
    // small balls of the surface group are still tree-like; curvature only
    // shows at the relator scale, so the tiny sample measures 0 while the
    // pipeline runs with the configured constant
    let delta = surface.estimate_delta(1)?;
    println!(
        "measured thin-triangle constant at sample radius 1: {} (configured {})",
        ratio::format_rational(&delta),
        ratio::format_rational(surface.delta()),
    );
    assert!(delta <= *surface.delta());
    println!("ok");
    Ok(())
}
