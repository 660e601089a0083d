//! Tree approximation of geodesic hulls: Gromov-product gluing of based
//! geodesics into a metric simplicial tree, extension to the whole hull by
//! clamped projection, and the rough-isometry correspondence (phi, psi)
//! between hull vertices and a separated net, with all tolerances measured
//! exactly rather than taken from a formula.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElement};
use crate::ratio;
use crate::tree::{select_net, verify_net, MetricTree};

fn rat(n: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// (x|y)_base = (d(base,x) + d(base,y) - d(x,y)) / 2, a half-integer.
pub fn gromov_product(
    ctx: &GroupContext,
    x: &GroupElement,
    y: &GroupElement,
    base: &GroupElement,
) -> Result<BigRational> {
    let dx = ctx.distance(base, x)?;
    let dy = ctx.distance(base, y)?;
    let dxy = ctx.distance(x, y)?;
    Ok(BigRational::new(
        BigInt::from(dx + dy) - BigInt::from(dxy),
        BigInt::from(2),
    ))
}

/// A metric simplicial tree approximating the geodesic hull of a tuple,
/// together with the vertex map f and its exactly measured distortions.
pub struct TreeApproximation {
    pub tree: MetricTree,
    /// hull vertex -> tree vertex (every image is made a vertex)
    pub f: BTreeMap<GroupElement, u32>,
    /// hull vertices, ShortLex-sorted
    pub hull: Vec<GroupElement>,
    /// measured distortion over based-geodesic (stage 1) vertex pairs
    pub base_distortion: BigRational,
    /// measured distortion over all hull vertex pairs
    pub distortion: BigRational,
}

/// Build the approximation tree for the hull of `points` based at
/// `points[0]`.
///
/// Stage 1 glues the based geodesics: the branch for points[i] runs along
/// the existing branch of the argmax Gromov product for its first t_i units
/// (ties to the ShortLex-least earlier point) and continues as a new edge;
/// the k-th vertex of the based geodesic maps to the point at distance k,
/// first assignment winning. Stage 2 maps each remaining hull vertex x via
/// the lexicographically least index pair (a, b) whose geodesic contains x,
/// to the point of [f(y_a), f(y_b)] at arc distance clamp(d(x, y_a), 0,
/// d(f(y_a), f(y_b))); both clamp constraints are re-checked against the
/// stage-1 distortion and any excess is a diagnostic error, never silent.
pub fn approximate_by_tree(
    ctx: &GroupContext,
    points: &[GroupElement],
) -> Result<TreeApproximation> {
    if points.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let base = &points[0];
    let mut tree = MetricTree::single_vertex();
    let mut f: BTreeMap<GroupElement, u32> = BTreeMap::new();
    // translate so y_0 maps to the root, matching based geodesics w_{y0, yi}
    f.insert(base.clone(), tree.root());
    // stage 1: glue based geodesics in input order
    let mut branch_end: Vec<u32> = vec![tree.root()];
    for i in 1..points.len() {
        let d_i = ctx.distance(base, &points[i])?;
        let mut t_i = BigRational::zero();
        let mut toward = tree.root();
        let mut best: Option<&GroupElement> = None;
        for j in 1..i {
            let p = gromov_product(ctx, &points[j], &points[i], base)?;
            let better = match (&p.cmp(&t_i), &best) {
                (std::cmp::Ordering::Greater, _) => true,
                (std::cmp::Ordering::Equal, Some(b)) => {
                    points[j].shortlex_cmp(b) == std::cmp::Ordering::Less
                }
                _ => false,
            };
            if better || best.is_none() && p > t_i {
                t_i = p;
                toward = branch_end[j];
                best = Some(&points[j]);
            }
        }
        let end = if rat(d_i) == t_i && !t_i.is_zero() {
            // the whole segment runs along the existing branch
            let p = tree.point_along(tree.root(), toward, &t_i)?;
            tree.ensure_vertex(&p)?
        } else if d_i == 0 {
            tree.root()
        } else {
            let p = tree.point_along(tree.root(), toward, &t_i)?;
            let attach = tree.ensure_vertex(&p)?;
            let (leaf, _) = tree.add_leaf(attach, rat(d_i) - &t_i)?;
            leaf
        };
        branch_end.push(end);
        let geodesic = ctx.based_geodesic(&ctx.multiply(&ctx.inverse(base)?, &points[i])?)?;
        for (k, step) in geodesic.iter().enumerate() {
            let vertex = ctx.multiply(base, step)?;
            if f.contains_key(&vertex) {
                continue;
            }
            let p = tree.point_along(tree.root(), end, &rat(k as u32))?;
            let id = tree.ensure_vertex(&p)?;
            f.insert(vertex, id);
        }
    }
    let stage1: Vec<GroupElement> = f.keys().cloned().collect();
    let base_distortion = measure_distortion(ctx, &tree, &f, &stage1)?;
    // stage 2: clamp remaining hull vertices onto [f(y_a), f(y_b)]
    let hull = ctx.geodesic_hull(points)?;
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            let fa = f[&points[a]];
            let fb = f[&points[b]];
            let span = tree.distance(fa, fb);
            let geodesic = ctx.geodesic(&points[a], &points[b])?;
            for x in &geodesic {
                if f.contains_key(x) {
                    continue;
                }
                let da = rat(ctx.distance(x, &points[a])?);
                let db = rat(ctx.distance(x, &points[b])?);
                let arc = da.clone().min(span.clone());
                let z = tree.point_along(fa, fb, &arc)?;
                let za = tree.distance_point(&z, fa);
                let zb = tree.distance_point(&z, fb);
                if (za - &da).abs() > base_distortion || (zb - &db).abs() > base_distortion {
                    return Err(Error::TreeApproximationDiagnostic {
                        detail: format!(
                            "clamped image of {} violates the stage-1 tolerance {}",
                            ctx.format_element(x),
                            ratio::format_rational(&base_distortion)
                        ),
                    });
                }
                let id = tree.ensure_vertex(&z)?;
                f.insert(x.clone(), id);
            }
        }
    }
    debug_assert!(hull.iter().all(|x| f.contains_key(x)));
    let distortion = measure_distortion(ctx, &tree, &f, &hull)?;
    Ok(TreeApproximation {
        tree,
        f,
        hull,
        base_distortion,
        distortion,
    })
}

fn measure_distortion(
    ctx: &GroupContext,
    tree: &MetricTree,
    f: &BTreeMap<GroupElement, u32>,
    vertices: &[GroupElement],
) -> Result<BigRational> {
    let mut worst = BigRational::zero();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let dg = rat(ctx.distance(&vertices[i], &vertices[j])?);
            let dt = tree.distance(f[&vertices[i]], f[&vertices[j]]);
            let gap = (dg - dt).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(worst)
}

/// The rough-isometry correspondence between the hull of a tuple and the
/// separated net of its approximation tree. `c` is the exactly measured
/// tolerance dominating the distortion of f, phi, and psi and both
/// composite displacements.
pub struct Correspondence {
    pub points: Vec<GroupElement>,
    /// generator symbols, for rendering words in diagnostics
    pub generators: Vec<char>,
    pub tree: MetricTree,
    /// hull vertex -> tree vertex
    pub f: BTreeMap<GroupElement, u32>,
    /// net vertices in selection order; index 0 is the root
    pub net: Vec<u32>,
    /// hull vertex -> net index of the nearest net point to its f-image
    pub phi: BTreeMap<GroupElement, usize>,
    /// net index -> hull vertex whose f-image is nearest
    pub psi: Vec<GroupElement>,
    /// hull vertices, ShortLex-sorted
    pub hull: Vec<GroupElement>,
    /// stage-1 measured distortion of f
    pub base_distortion: BigRational,
    /// full measured distortion of f over hull pairs
    pub distortion: BigRational,
    /// measured correspondence tolerance
    pub c: BigRational,
}

impl Correspondence {
    /// Net index assigned to a hull vertex.
    pub fn phi(&self, x: &GroupElement) -> Result<usize> {
        self.phi.get(x).copied().ok_or_else(|| Error::VertexNotInHull {
            word: crate::words::format_word(x.word(), &self.generators),
        })
    }

    /// Hull vertex assigned to a net index.
    pub fn psi(&self, v: usize) -> &GroupElement {
        &self.psi[v]
    }

    /// The retraction psi(phi(x)) used by the subdivision prism.
    pub fn rho(&self, x: &GroupElement) -> Result<GroupElement> {
        Ok(self.psi[self.phi(x)?].clone())
    }

    /// Serialize tree, net, and f per the tree JSON format, with exact
    /// rationals as strings.
    pub fn to_json_value(&self, ctx: &GroupContext) -> serde_json::Value {
        let mut v = self.tree.to_json_value();
        v["net"] = serde_json::json!(self.net);
        let fmap: BTreeMap<String, u32> = self
            .f
            .iter()
            .map(|(x, id)| (ctx.format_element(x), *id))
            .collect();
        v["f"] = serde_json::json!(fmap);
        v
    }
}

/// Build the full correspondence for a tuple: approximation tree, net,
/// nearest-point maps phi and psi, and the measured tolerance c.
pub fn build_correspondence(
    ctx: &GroupContext,
    points: &[GroupElement],
) -> Result<Correspondence> {
    let approx = approximate_by_tree(ctx, points)?;
    let TreeApproximation {
        mut tree,
        f,
        hull,
        base_distortion,
        distortion,
    } = approx;
    let net = select_net(&mut tree)?;
    let quality = verify_net(&tree, &net)?;
    if let Some(sep) = &quality.min_separation {
        if *sep < rat(1) {
            return Err(Error::Internal {
                detail: format!("net separation {} below 1", ratio::format_rational(sep)),
            });
        }
    }
    if quality.max_covering_radius > rat(3) || quality.max_gap > rat(2) {
        return Err(Error::Internal {
            detail: format!(
                "net density {} or gap {} out of bounds",
                ratio::format_rational(&quality.max_covering_radius),
                ratio::format_rational(&quality.max_gap)
            ),
        });
    }
    // phi: nearest net point to f(x), ties to the least net index
    let mut phi: BTreeMap<GroupElement, usize> = BTreeMap::new();
    for x in &hull {
        let fx = f[x];
        let mut best = 0usize;
        let mut best_d = tree.distance(fx, net[0]);
        for (k, &v) in net.iter().enumerate().skip(1) {
            let d = tree.distance(fx, v);
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        phi.insert(x.clone(), best);
    }
    // psi: hull vertex with nearest f-image, ties ShortLex-least; hull is
    // ShortLex-sorted so the first strict minimum wins
    let mut psi: Vec<GroupElement> = Vec::with_capacity(net.len());
    for &v in &net {
        let mut best = &hull[0];
        let mut best_d = tree.distance(f[&hull[0]], v);
        for x in &hull[1..] {
            let d = tree.distance(f[x], v);
            if d < best_d {
                best = x;
                best_d = d;
            }
        }
        psi.push(best.clone());
    }
    // measured tolerance: distortion of f, phi, psi, and both displacements
    let mut c = distortion.clone();
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            let dg = rat(ctx.distance(&hull[i], &hull[j])?);
            let dt = tree.distance(net[phi[&hull[i]]], net[phi[&hull[j]]]);
            c = c.max((dg - dt).abs());
        }
    }
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let dt = tree.distance(net[i], net[j]);
            let dg = rat(ctx.distance(&psi[i], &psi[j])?);
            c = c.max((dt - dg).abs());
        }
    }
    for (k, &v) in net.iter().enumerate() {
        // phi(psi(v)) vs v in the tree
        let roundtrip = net[phi[&psi[k]]];
        c = c.max(tree.distance(roundtrip, v));
    }
    for x in &hull {
        // psi(phi(x)) vs x in the group
        let roundtrip = &psi[phi[x]];
        c = c.max(rat(ctx.distance(roundtrip, x)?));
    }
    Ok(Correspondence {
        points: points.to_vec(),
        generators: ctx.presentation().generators.clone(),
        tree,
        f,
        net,
        phi,
        psi,
        hull,
        base_distortion,
        distortion,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;

    fn f2() -> GroupContext {
        GroupContext::free_group(&['a', 'b'], 8).unwrap()
    }

    fn el(ctx: &GroupContext, s: &str) -> GroupElement {
        ctx.parse_element(s).unwrap()
    }

    #[test]
    fn gromov_product_examples() {
        let ctx = f2();
        let e = ctx.identity();
        let a = el(&ctx, "a");
        let b = el(&ctx, "b");
        let ab = el(&ctx, "ab");
        let abb = el(&ctx, "abb");
        assert_eq!(gromov_product(&ctx, &a, &a, &e).unwrap(), rat(1));
        assert_eq!(gromov_product(&ctx, &a, &b, &e).unwrap(), rat(0));
        assert_eq!(gromov_product(&ctx, &ab, &abb, &e).unwrap(), rat(2));
        // product from a non-identity base
        let ba = el(&ctx, "ba");
        assert_eq!(gromov_product(&ctx, &a, &ba, &e).unwrap(), rat(0));
        assert_eq!(gromov_product(&ctx, &e, &ba, &a).unwrap(), rat(1));
    }

    #[test]
    fn singleton_tuple_gives_single_vertex() {
        let ctx = f2();
        let approx = approximate_by_tree(&ctx, &[ctx.identity()]).unwrap();
        assert_eq!(approx.tree.vertex_count(), 1);
        assert!(approx.distortion.is_zero());
        assert_eq!(approx.hull.len(), 1);
        assert!(approximate_by_tree(&ctx, &[]).is_err());
    }

    #[test]
    fn free_group_tree_is_exact() {
        let ctx = f2();
        let points = vec![ctx.identity(), el(&ctx, "aa"), el(&ctx, "b")];
        let approx = approximate_by_tree(&ctx, &points).unwrap();
        assert!(approx.distortion.is_zero());
        assert!(approx.base_distortion.is_zero());
        assert_eq!(approx.hull.len(), 4);
        // tripod: d(aa, b) = 3 realized in the tree
        let faa = approx.f[&el(&ctx, "aa")];
        let fb = approx.f[&el(&ctx, "b")];
        assert_eq!(approx.tree.distance(faa, fb), rat(3));
        // f is injective on the hull in the free group
        let mut ids: Vec<u32> = approx.hull.iter().map(|x| approx.f[x]).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), approx.hull.len());
    }

    #[test]
    fn shared_prefixes_glue_along_one_branch() {
        let ctx = f2();
        let points = vec![ctx.identity(), el(&ctx, "aab"), el(&ctx, "aaB")];
        let approx = approximate_by_tree(&ctx, &points).unwrap();
        assert!(approx.distortion.is_zero());
        // hull is the tripod with center aa: e, a, aa, aab, aaB
        assert_eq!(approx.hull.len(), 5);
        let center = approx.f[&el(&ctx, "aa")];
        assert_eq!(approx.tree.distance(approx.tree.root(), center), rat(2));
        assert_eq!(
            approx.tree.distance(approx.f[&el(&ctx, "aab")], approx.f[&el(&ctx, "aaB")]),
            rat(2)
        );
    }

    #[test]
    fn stage_two_covers_cross_geodesics() {
        let ctx = f2();
        // hull of (e, ab, ba) includes vertices on w_{ab,ba} not on based ones
        let points = vec![ctx.identity(), el(&ctx, "ab"), el(&ctx, "ba")];
        let approx = approximate_by_tree(&ctx, &points).unwrap();
        for x in &approx.hull {
            assert!(approx.f.contains_key(x));
        }
        assert!(approx.distortion.is_zero());
    }

    #[test]
    fn surface_group_distortion_is_bounded() {
        let ctx = crate::group::GroupContext::genus2(4).unwrap();
        let points = vec![ctx.identity(), el(&ctx, "ab"), el(&ctx, "ba")];
        let approx = approximate_by_tree(&ctx, &points).unwrap();
        // c' <= 4 * delta + 3 * c0 with configured delta
        let bound = rat(4) * ctx.delta() + rat(3) * &approx.base_distortion;
        assert!(approx.distortion <= bound);
    }

    #[test]
    fn correspondence_on_singleton() {
        let ctx = f2();
        let corr = build_correspondence(&ctx, &[ctx.identity()]).unwrap();
        assert_eq!(corr.net.len(), 1);
        assert!(corr.c.is_zero());
        assert_eq!(corr.phi(&ctx.identity()).unwrap(), 0);
        assert_eq!(corr.psi(0), &ctx.identity());
        assert!(corr.phi(&el(&ctx, "a")).is_err());
    }

    #[test]
    fn correspondence_on_free_segment() {
        let ctx = f2();
        let points = vec![ctx.identity(), el(&ctx, "aaaa")];
        let corr = build_correspondence(&ctx, &points).unwrap();
        // unit-spaced net equals the hull image: rounding only
        assert_eq!(corr.net.len(), 5);
        assert!(corr.c <= rat(1));
        // net index 0 is the root and corresponds to the basepoint
        assert_eq!(corr.phi(&ctx.identity()).unwrap(), 0);
        assert_eq!(corr.psi(0), &ctx.identity());
        for x in &corr.hull {
            let d = ctx.distance(&corr.rho(x).unwrap(), x).unwrap();
            assert!(rat(d) <= corr.c);
        }
    }

    #[test]
    fn correspondence_tolerance_dominates_everything() {
        let ctx = f2();
        let points = vec![ctx.identity(), el(&ctx, "ab"), el(&ctx, "BA"), el(&ctx, "bb")];
        let corr = build_correspondence(&ctx, &points).unwrap();
        assert!(corr.c <= rat(1));
        for x in &corr.hull {
            let rho = corr.rho(x).unwrap();
            assert!(rat(ctx.distance(&rho, x).unwrap()) <= corr.c);
        }
        for (k, &v) in corr.net.iter().enumerate() {
            let back = corr.net[corr.phi(corr.psi(k)).unwrap()];
            assert!(corr.tree.distance(back, v) <= corr.c);
        }
        // tree JSON shape
        let v = corr.to_json_value(&ctx);
        assert!(v["vertices"].as_u64().unwrap() >= corr.net.len() as u64);
        assert_eq!(v["root"], 0);
        assert!(v["f"]["ab"].is_number());
    }
}
