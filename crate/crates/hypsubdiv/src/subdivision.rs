//! Inductive subdivision chain map with per-simplex certificates.
//!
//! `f_0` is the identity on vertices and `f_1` sends an edge to the sum of
//! unit edges along the canonical geodesic between its endpoints. For
//! `i >= 2` a based simplex `sigma = (e, g_1, ..., g_i)` is subdivided
//! through the tree approximation of its geodesic hull:
//!
//! ```text
//! f_i(sigma) = psi h^T phi (f_{i-1} d sigma) - h^sigma (f_{i-1} d sigma)
//! ```
//!
//! where `h^T` is the norm-bounded contraction of the net of the hull's
//! approximating tree and `h^sigma` is the prism homotopy between the
//! identity and the round trip `rho = psi phi`. A general simplex is
//! translated to based position by its leading vertex and back, so the map
//! is `ZG`-equivariant by construction.
//!
//! Values are memoized per based simplex. Every memo insert re-verifies,
//! exactly: the chain map identity `d f_i = f_{i-1} d`, membership of the
//! output in the Rips complex at the scheduled radius `r(i)`, and support
//! containment in the geodesic hull of the input. A violation of the radius
//! schedule is a bug in the schedule itself and surfaces loudly as
//! [`Error::RadiusScheduleExceeded`]; it is never clamped.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::approx::build_correspondence;
use crate::chain::{self, Chain};
use crate::contraction::{e_constant, ContractionOperator};
use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElement};
use crate::ratio;

/// Identity on vertices: a 0-simplex subdivides to itself.
pub fn subdivide_f0(sigma: &[GroupElement]) -> Result<Chain<GroupElement>> {
    if sigma.len() != 1 {
        return Err(Error::WrongDimension {
            expected: 0,
            got: sigma.len().saturating_sub(1),
        });
    }
    Chain::from_simplex(sigma.to_vec())
}

/// Edge subdivision: the sum of unit edges along the canonical geodesic
/// from `sigma[0]` to `sigma[1]`. A degenerate edge `(x, x)` is returned
/// unchanged so that the chain map identity holds on degenerate input.
pub fn subdivide_f1(ctx: &GroupContext, sigma: &[GroupElement]) -> Result<Chain<GroupElement>> {
    if sigma.len() != 2 {
        return Err(Error::WrongDimension {
            expected: 1,
            got: sigma.len().saturating_sub(1),
        });
    }
    if sigma[0] == sigma[1] {
        return Chain::from_simplex(sigma.to_vec());
    }
    let path = ctx.geodesic(&sigma[0], &sigma[1])?;
    let mut out = Chain::zero(1);
    for pair in path.windows(2) {
        out.add_term(vec![pair[0].clone(), pair[1].clone()], BigInt::one());
    }
    Ok(out)
}

/// Prism homotopy between the identity and a vertex round trip `rho`:
///
/// ```text
/// h_n(g_0, ..., g_n) = sum_k (-1)^k (g_0, ..., g_k, rho(g_k), ..., rho(g_n))
/// ```
///
/// extended linearly. Satisfies `d h + h d = rho_* - id` on chains whose
/// vertices `rho` covers; an uncovered vertex is reported by `rho` itself.
pub fn prism_homotopy(
    mut rho: impl FnMut(&GroupElement) -> Result<GroupElement>,
    c: &Chain<GroupElement>,
) -> Result<Chain<GroupElement>> {
    let n = c.dim();
    let mut out = Chain::zero(n + 1);
    for (simplex, coeff) in c.iter() {
        let images: Vec<GroupElement> = simplex.iter().map(&mut rho).collect::<Result<_>>()?;
        let mut sign = BigInt::one();
        for k in 0..=n {
            let mut tuple = Vec::with_capacity(n + 2);
            tuple.extend_from_slice(&simplex[..=k]);
            tuple.extend_from_slice(&images[k..]);
            out.add_term(tuple, coeff * &sign);
            sign = -sign;
        }
    }
    Ok(out)
}

/// Radius schedule `r(0) = r(1) = 1`, `r(i+1) = r(i) + 2 c(i) + 12`, where
/// `c(i)` is the measured correspondence tolerance slot for dimension
/// `i + 1` simplices (missing slots count as zero). The `+12` margin is
/// unconditional, so with all tolerances zero the schedule runs
/// `1, 1, 13, 25, ...`.
pub fn radius_schedule(tolerances: &[BigRational], max_dim: usize) -> Vec<BigRational> {
    let mut radii = vec![BigRational::one()];
    if max_dim == 0 {
        return radii;
    }
    radii.push(BigRational::one());
    for i in 1..max_dim {
        let c = tolerances.get(i).cloned().unwrap_or_else(BigRational::zero);
        let next = &radii[i] + c * ratio::rat_u(2) + ratio::rat_u(12);
        radii.push(next);
    }
    radii
}

/// Closed-form norm cascade `K_1 = 1`,
/// `K_i = (e(i-1, i) + i) * K_{i-1} * (i + 1)`; the hard ceiling the
/// measured per-dimension norm ratios are compared against.
pub fn cascade_bound(i: usize) -> BigInt {
    assert!(i >= 1, "cascade bound starts at dimension 1");
    let mut k = BigInt::one();
    for j in 2..=i {
        let e = e_constant(&ratio::rat_u(j as u64 - 1), j);
        k = (e + BigInt::from(j)) * k * BigInt::from(j + 1);
    }
    k
}

/// Snapshot of a subdivision run's measured state: the radius schedule, the
/// per-dimension correspondence tolerances that produced it, and the
/// per-dimension max norm ratios `||f_i sigma||_1 / ||sigma||_{1,1}`.
#[derive(Debug, Clone)]
pub struct SubdivisionParams {
    pub max_dim: usize,
    pub radii: Vec<BigRational>,
    pub tolerances: Vec<BigRational>,
    pub ratios: Vec<BigRational>,
}

impl SubdivisionParams {
    pub fn to_json_value(&self) -> serde_json::Value {
        let fmt = |v: &[BigRational]| -> Vec<String> { v.iter().map(ratio::format_rational).collect() };
        serde_json::json!({
            "max_dim": self.max_dim,
            "radii": fmt(&self.radii),
            "tolerances": fmt(&self.tolerances),
            "norm_ratios": fmt(&self.ratios),
        })
    }
}

/// Per-simplex verification record. `pass` requires an exactly zero chain
/// map residual, the scheduled diameter bound, support containment, and the
/// output norm under the cascade-shaped bound with the measured ratio.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Input simplex, rendered as words.
    pub simplex: Vec<String>,
    pub dim: usize,
    /// `||d f_i(sigma) - f_{i-1}(d sigma)||_1`; must be zero.
    pub chain_map_residual_norm: BigUint,
    pub output_l1: BigUint,
    /// `||sigma||_{1,1} = 1 + diam(sigma)`.
    pub input_sobolev: BigUint,
    /// Every output simplex has diameter at most `r(dim)`.
    pub diam_bound_ok: bool,
    /// Output support lies in the geodesic hull of the input vertices.
    pub support_ok: bool,
    /// `floor((e(i-1, i) + i) * ratio_{i-1} * (i + 1) * ||sigma||_{1,1})`
    /// with `ratio_{i-1}` the measured per-run max at dimension `i - 1`;
    /// for `i <= 1` the factor is 1.
    pub norm_bound: BigInt,
    /// Radius schedule the certificate was checked against.
    pub schedule: Vec<BigRational>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.chain_map_residual_norm.is_zero()
            && self.diam_bound_ok
            && self.support_ok
            && BigInt::from(self.output_l1.clone()) <= self.norm_bound
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "simplex": self.simplex,
            "dimension": self.dim,
            "chain_map_residual_norm": self.chain_map_residual_norm.to_string(),
            "output_l1": self.output_l1.to_string(),
            "input_sobolev": self.input_sobolev.to_string(),
            "diam_bound_ok": self.diam_bound_ok,
            "support_ok": self.support_ok,
            "norm_bound": self.norm_bound.to_string(),
            "schedule": self.schedule.iter().map(ratio::format_rational).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

/// Memoizing evaluator for the subdivision maps `f_0, ..., f_{max_dim}`.
///
/// Values are cached on based simplices only; general input is translated
/// by the inverse of its leading vertex. The measured tolerance slot for
/// dimension `i` simplices is `tolerances[i - 1]`, feeding the schedule
/// term `r(i) -> r(i + 1)`; it is updated before the contraction for the
/// current simplex runs, so the Rips check at insert always sees a schedule
/// at least as large as the bound the construction proves.
pub struct SubdivisionMap<'a> {
    ctx: &'a GroupContext,
    max_dim: usize,
    memo: Mutex<BTreeMap<Vec<GroupElement>, Chain<GroupElement>>>,
    tolerances: Mutex<Vec<BigRational>>,
    ratios: Mutex<Vec<BigRational>>,
}

impl<'a> SubdivisionMap<'a> {
    pub fn new(ctx: &'a GroupContext, max_dim: usize) -> SubdivisionMap<'a> {
        SubdivisionMap {
            ctx,
            max_dim,
            memo: Mutex::new(BTreeMap::new()),
            tolerances: Mutex::new(vec![BigRational::zero(); max_dim]),
            ratios: Mutex::new(vec![BigRational::zero(); max_dim + 1]),
        }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Measured per-dimension correspondence tolerances (slot `i` collects
    /// dimension `i + 1` simplices; slot 0 is always zero because `f_1`
    /// builds no correspondence).
    pub fn tolerances(&self) -> Vec<BigRational> {
        self.tolerances.lock().unwrap().clone()
    }

    /// Current radius schedule `r(0), ..., r(max_dim)` from the measured
    /// tolerances.
    pub fn radii(&self) -> Vec<BigRational> {
        radius_schedule(&self.tolerances(), self.max_dim)
    }

    /// Measured per-dimension max norm ratios `||f_i|| / ||.||_{1,1}`.
    pub fn ratios(&self) -> Vec<BigRational> {
        self.ratios.lock().unwrap().clone()
    }

    pub fn params(&self) -> SubdivisionParams {
        SubdivisionParams {
            max_dim: self.max_dim,
            radii: self.radii(),
            tolerances: self.tolerances(),
            ratios: self.ratios(),
        }
    }

    /// `f_i(sigma)` for a simplex given as its vertex tuple.
    pub fn subdivide(&self, sigma: &[GroupElement], i: usize) -> Result<Chain<GroupElement>> {
        if sigma.len() != i + 1 {
            return Err(Error::WrongDimension {
                expected: i,
                got: sigma.len().saturating_sub(1),
            });
        }
        if i > self.max_dim {
            return Err(Error::InvalidInput {
                reason: format!("dimension {i} exceeds the configured max_dim {}", self.max_dim),
            });
        }
        let g0 = sigma[0].clone();
        if g0 == self.ctx.identity() {
            return self.f_based(sigma);
        }
        let inv = self.ctx.inverse(&g0)?;
        let based: Vec<GroupElement> = sigma
            .iter()
            .map(|g| self.ctx.multiply(&inv, g))
            .collect::<Result<_>>()?;
        let f = self.f_based(&based)?;
        chain::act(self.ctx, &g0, &f)
    }

    /// Linear extension of `subdivide` to a chain.
    pub fn apply(&self, c: &Chain<GroupElement>) -> Result<Chain<GroupElement>> {
        let mut out = Chain::zero(c.dim());
        for (simplex, coeff) in c.iter() {
            let f = self.subdivide(simplex, simplex.len() - 1)?;
            out = out.add(&f.scale(coeff));
        }
        Ok(out)
    }

    fn f_based(&self, based: &[GroupElement]) -> Result<Chain<GroupElement>> {
        if let Some(hit) = self.memo.lock().unwrap().get(based) {
            return Ok(hit.clone());
        }
        let dim = based.len() - 1;
        let f = match dim {
            0 => subdivide_f0(based)?,
            1 => {
                let f = subdivide_f1(self.ctx, based)?;
                self.verify_insert(based, &f, &Chain::from_simplex(based.to_vec())?.boundary()?)?;
                f
            }
            _ => {
                let w = self.apply(&Chain::from_simplex(based.to_vec())?.boundary()?)?;
                let corr = build_correspondence(self.ctx, based)?;
                {
                    let mut slots = self.tolerances.lock().unwrap();
                    if corr.c > slots[dim - 1] {
                        slots[dim - 1] = corr.c.clone();
                    }
                }
                let radius = self.radii()[dim - 1].clone() + corr.c.clone();
                let phi_w = w.map_vertices(|g| corr.phi(g))?;
                let op = ContractionOperator::new(&corr.tree, &corr.net, radius)?;
                let h = op.apply_h(&phi_w, dim - 1)?;
                let psi_h = h.map_vertices(|k| Ok(corr.psi(*k).clone()))?;
                let prism = prism_homotopy(|g| corr.rho(g), &w)?;
                let f = psi_h.sub(&prism);
                self.verify_insert(based, &f, &w)?;
                f
            }
        };
        let sobolev = chain::sobolev_norm(self.ctx, &Chain::from_simplex(based.to_vec())?)?;
        let measured = BigRational::new(BigInt::from(f.l1_norm()), BigInt::from(sobolev));
        {
            let mut slots = self.ratios.lock().unwrap();
            if measured > slots[dim] {
                slots[dim] = measured;
            }
        }
        self.memo
            .lock()
            .unwrap()
            .insert(based.to_vec(), f.clone());
        Ok(f)
    }

    /// Memo insert checks: exact chain map identity, Rips membership at the
    /// scheduled radius, and support containment in the geodesic hull.
    fn verify_insert(
        &self,
        based: &[GroupElement],
        f: &Chain<GroupElement>,
        w: &Chain<GroupElement>,
    ) -> Result<()> {
        let dim = based.len() - 1;
        let residual = f.boundary()?.sub(w);
        if !residual.is_zero() {
            return Err(Error::Internal {
                detail: format!(
                    "chain map identity failed at dimension {dim}: residual l1 norm {}",
                    residual.l1_norm()
                ),
            });
        }
        let r = self.radii()[dim].clone();
        if !chain::rips_check(self.ctx, f, &r)? {
            let diam = chain::group_diameter(self.ctx, f)?.unwrap_or(0);
            return Err(Error::RadiusScheduleExceeded {
                dim,
                detail: format!(
                    "output diameter {diam} exceeds scheduled radius {}",
                    ratio::format_rational(&r)
                ),
            });
        }
        let hull: BTreeSet<GroupElement> = self.ctx.geodesic_hull(based)?.into_iter().collect();
        for g in f.support() {
            if !hull.contains(&g) {
                return Err(Error::Internal {
                    detail: format!(
                        "support of f_{dim} escapes the geodesic hull at {:?}",
                        self.ctx.format_element(&g)
                    ),
                });
            }
        }
        Ok(())
    }

    /// Subdivide and verify one simplex, reporting every measured quantity.
    /// The norm bound uses the per-run max ratio measured so far at
    /// dimension `i - 1`, so certificates are meaningful after the corpus
    /// they belong to has been subdivided.
    pub fn certify(&self, sigma: &[GroupElement], i: usize) -> Result<Certificate> {
        let f = self.subdivide(sigma, i)?;
        let residual = if i == 0 {
            BigUint::zero()
        } else {
            let w = self.apply(&Chain::from_simplex(sigma.to_vec())?.boundary()?)?;
            f.boundary()?.sub(&w).l1_norm()
        };
        let input_sobolev = chain::sobolev_norm(self.ctx, &Chain::from_simplex(sigma.to_vec())?)?;
        let schedule = self.radii();
        let diam_bound_ok = chain::rips_check(self.ctx, &f, &schedule[i])?;
        let hull: BTreeSet<GroupElement> = self.ctx.geodesic_hull(sigma)?.into_iter().collect();
        let support_ok = f.support().iter().all(|g| hull.contains(g));
        let factor = if i <= 1 {
            BigRational::one()
        } else {
            let ratio_prev = self.ratios()[i - 1].clone();
            let e = e_constant(&ratio::rat_u(i as u64 - 1), i);
            BigRational::from(e + BigInt::from(i)) * ratio_prev * ratio::rat_u(i as u64 + 1)
        };
        let norm_bound = ratio::floor_int(&(factor * BigRational::from(BigInt::from(input_sobolev.clone()))));
        Ok(Certificate {
            simplex: sigma.iter().map(|g| self.ctx.format_element(g)).collect(),
            dim: i,
            chain_map_residual_norm: residual,
            output_l1: f.l1_norm(),
            input_sobolev,
            diam_bound_ok,
            support_ok,
            norm_bound,
            schedule,
        })
    }
}
