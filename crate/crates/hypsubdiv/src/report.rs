//! Run manifests and canonical JSON reports.
//!
//! A manifest pins everything a batch run depends on: the group
//! fingerprint, the radius schedule, the measured tolerances and norm
//! ratios, the corpus description, and the seed. Reports embed their
//! manifest and serialize through one canonical writer (sorted keys, exact
//! integers and rationals as strings, trailing newline), so two runs with
//! identical manifests produce byte-identical files.

use num_bigint::BigUint;
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::group::GroupPresentation;
use crate::ratio;
use crate::subdivision::Certificate;
use crate::words;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical serialization: pretty JSON with lexicographically sorted keys
/// (the default map representation) and a trailing newline.
pub fn canonical_to_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializing a built value cannot fail");
    s.push('\n');
    s
}

/// Content fingerprint of a presentation, independent of the file
/// formatting it was loaded from.
pub fn presentation_fingerprint(p: &GroupPresentation) -> String {
    let canonical = serde_json::json!({
        "generators": p.generators.iter().map(char::to_string).collect::<Vec<_>>(),
        "relators": p.relators.iter().map(|r| words::format_word(r, &p.generators)).collect::<Vec<_>>(),
        "backend": match p.backend {
            crate::group::Backend::FreeReduction => "free",
            crate::group::Backend::DehnSmallCancellation => "dehn",
        },
        "ball_radius": p.ball_radius,
        "delta": ratio::format_rational(&p.delta),
    });
    sha256_hex(canonical_to_string(&canonical).as_bytes())
}

/// Everything a batch run depends on. Identical manifests yield
/// byte-identical reports.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub group_label: String,
    pub group_hash: String,
    pub schedule: Vec<BigRational>,
    pub tolerances: Vec<BigRational>,
    pub corpus: String,
    pub seed: u64,
    pub norm_ratios: Vec<BigRational>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn to_json_value(&self) -> serde_json::Value {
        let fmt = |v: &[BigRational]| -> Vec<String> { v.iter().map(ratio::format_rational).collect() };
        serde_json::json!({
            "group": self.group_label,
            "group_hash": self.group_hash,
            "schedule": fmt(&self.schedule),
            "tolerances": fmt(&self.tolerances),
            "corpus": self.corpus,
            "seed": self.seed,
            "norm_ratios": fmt(&self.norm_ratios),
            "tool_version": self.tool_version,
        })
    }
}

/// Certification report: the manifest, every certificate ordered by
/// dimension then simplex serialization, and a per-dimension summary.
pub fn certify_report(manifest: &RunManifest, certificates: &[Certificate]) -> serde_json::Value {
    let mut certs: Vec<&Certificate> = certificates.iter().collect();
    certs.sort_by(|a, b| (a.dim, &a.simplex).cmp(&(b.dim, &b.simplex)));
    let mut dims: Vec<usize> = certs.iter().map(|c| c.dim).collect();
    dims.dedup();
    let per_dimension: Vec<serde_json::Value> = dims
        .iter()
        .map(|&d| {
            let of_dim: Vec<&&Certificate> = certs.iter().filter(|c| c.dim == d).collect();
            serde_json::json!({
                "dim": d,
                "count": of_dim.len(),
                "passed": of_dim.iter().filter(|c| c.pass()).count(),
                "max_output_l1": of_dim.iter().map(|c| c.output_l1.clone()).max().unwrap_or_default().to_string(),
            })
        })
        .collect();
    let passed = certs.iter().filter(|c| c.pass()).count();
    serde_json::json!({
        "manifest": manifest.to_json_value(),
        "certificates": certs.iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
        "summary": {
            "total": certs.len(),
            "passed": passed,
            "failed": certs.len() - passed,
            "per_dimension": per_dimension,
            "pass": passed == certs.len(),
        },
    })
}

/// One norm-growth table row: simplices of one dimension and diameter
/// bucket, with exact mean and max output norms and the worst ratio to the
/// Sobolev norm.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub dim: usize,
    pub diameter: u32,
    pub count: usize,
    pub mean_l1: BigRational,
    pub max_l1: BigUint,
    pub max_ratio: BigRational,
}

pub fn bench_report(manifest: &RunManifest, rows: &[BenchRow]) -> serde_json::Value {
    serde_json::json!({
        "manifest": manifest.to_json_value(),
        "rows": rows.iter().map(|r| serde_json::json!({
            "dim": r.dim,
            "diameter": r.diameter,
            "count": r.count,
            "mean_l1": ratio::format_rational(&r.mean_l1),
            "max_l1": r.max_l1.to_string(),
            "max_ratio": ratio::format_rational(&r.max_ratio),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;
    use crate::subdivision::SubdivisionMap;

    #[test]
    fn fingerprint_is_stable_and_format_independent() {
        let a = GroupContext::free_group(&['a', 'b'], 6).unwrap();
        let b = GroupContext::free_group(&['a', 'b'], 6).unwrap();
        assert_eq!(
            presentation_fingerprint(a.presentation()),
            presentation_fingerprint(b.presentation())
        );
        let c = GroupContext::free_group(&['a', 'b'], 7).unwrap();
        assert_ne!(
            presentation_fingerprint(a.presentation()),
            presentation_fingerprint(c.presentation())
        );
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let build = || {
            let ctx = GroupContext::free_group(&['a', 'b'], 8).unwrap();
            let map = SubdivisionMap::new(&ctx, 2);
            let sigmas = [
                vec![ctx.identity(), ctx.parse_element("ab").unwrap()],
                vec![
                    ctx.identity(),
                    ctx.parse_element("a").unwrap(),
                    ctx.parse_element("bb").unwrap(),
                ],
            ];
            for s in &sigmas {
                map.subdivide(s, s.len() - 1).unwrap();
            }
            let certs: Vec<_> = sigmas
                .iter()
                .map(|s| map.certify(s, s.len() - 1).unwrap())
                .collect();
            let manifest = RunManifest {
                group_label: "f2".into(),
                group_hash: presentation_fingerprint(ctx.presentation()),
                schedule: map.radii(),
                tolerances: map.tolerances(),
                corpus: "unit test corpus".into(),
                seed: 7,
                norm_ratios: map.ratios(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
            };
            canonical_to_string(&certify_report(&manifest, &certs))
        };
        let first = build();
        let second = build();
        assert_eq!(first, second);
        assert!(first.ends_with('\n'));
    }
}
