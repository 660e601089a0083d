//! Exact integral homology of finite Rips complexes via Smith normal form,
//! plus a lazy bounded-homotopy builder on group chains. Both serve as
//! independent oracles for the explicit contraction and subdivision maps:
//! the augmented homology of a tree net must vanish in every degree the
//! contraction reaches, and the homotopy builder must certify `f_* ~ id`
//! degree by degree with exactly zero residual.
//!
//! Homology runs on finite nets only and is labeled empirical: a finite
//! ball has boundary effects, so no acyclicity conclusion about the whole
//! group is drawn from it.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::{self, Chain};
use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElement};
use crate::ratio;

/// Per-dimension ordered simplex lists over a finite vertex set, closed
/// under faces, every simplex of diameter at most `radius`. Simplices are
/// vertex-index tuples; the canonical constructor emits strictly increasing
/// tuples (the normalized Rips complex), but hand-built bases may include
/// degenerate tuples and the boundary matrix cancels them correctly.
#[derive(Debug, Clone)]
pub struct FiniteComplexBasis {
    pub radius: BigRational,
    pub vertex_count: usize,
    /// `dims[n]` lists the n-simplices; slots may be empty but must exist
    /// for every dimension a homology query touches.
    pub dims: Vec<Vec<Vec<usize>>>,
}

/// Rips basis at radius `r` over vertices `0..count` with the supplied
/// metric: all strictly increasing tuples of pairwise distance at most `r`,
/// in lexicographic order, through dimension `max_dim` inclusive.
pub fn rips_basis(
    count: usize,
    mut dist: impl FnMut(usize, usize) -> Result<BigRational>,
    r: &BigRational,
    max_dim: usize,
) -> Result<FiniteComplexBasis> {
    let mut close = vec![vec![false; count]; count];
    for i in 0..count {
        for j in (i + 1)..count {
            let d = dist(i, j)?;
            if d <= *r {
                close[i][j] = true;
            }
        }
    }
    let mut dims: Vec<Vec<Vec<usize>>> = vec![(0..count).map(|v| vec![v]).collect()];
    for _ in 1..=max_dim {
        let prev = dims.last().unwrap();
        let mut next = Vec::new();
        for simplex in prev {
            let last = *simplex.last().unwrap();
            for w in (last + 1)..count {
                if simplex.iter().all(|&v| close[v][w]) {
                    let mut ext = simplex.clone();
                    ext.push(w);
                    next.push(ext);
                }
            }
        }
        dims.push(next);
    }
    Ok(FiniteComplexBasis {
        radius: r.clone(),
        vertex_count: count,
        dims,
    })
}

/// Dense arbitrary-precision integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IntegerMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntegerMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn add_assign(&mut self, i: usize, j: usize, v: &BigInt) {
        let cell = &mut self.data[i * self.cols + j];
        *cell = &*cell + v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[i] -= q * row[t]`.
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(t, j) * q;
            let cell = &mut self.data[i * self.cols + j];
            *cell = &*cell - v;
        }
    }

    /// `col[j] -= q * col[t]`.
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, t) * q;
            let cell = &mut self.data[i * self.cols + j];
            *cell = &*cell - v;
        }
    }

    /// `row[t] += row[i]`.
    fn row_add(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j).clone();
            self.add_assign(t, j, &v);
        }
    }

    /// Least-absolute-value nonzero entry of the trailing submatrix at `t`,
    /// ties broken row-major.
    fn min_abs_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                match &best {
                    Some((_, _, b)) if *b <= a => {}
                    _ => best = Some((i, j, a)),
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Matrix of the differential `d_n` in the given bases: rows indexed by the
/// (n-1)-simplices, columns by the n-simplices, entries the signed face
/// incidences with degenerate faces cancelled.
pub fn boundary_matrix(basis: &FiniteComplexBasis, n: usize) -> Result<IntegerMatrix> {
    if n == 0 || n >= basis.dims.len() {
        return Err(Error::InvalidInput {
            reason: format!(
                "boundary matrix needs 1 <= n < {} dimensions, got n = {n}",
                basis.dims.len()
            ),
        });
    }
    let rows_basis = &basis.dims[n - 1];
    let cols_basis = &basis.dims[n];
    let index: BTreeMap<&[usize], usize> = rows_basis
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut m = IntegerMatrix::zero(rows_basis.len(), cols_basis.len());
    for (col, simplex) in cols_basis.iter().enumerate() {
        let mut sign = BigInt::one();
        for k in 0..simplex.len() {
            let mut face = simplex.clone();
            face.remove(k);
            let row = *index
                .get(face.as_slice())
                .ok_or_else(|| Error::BasisNotClosed {
                    simplex: format!("{simplex:?}"),
                    face: format!("{face:?}"),
                    dim: n,
                })?;
            m.add_assign(row, col, &sign);
            sign = -sign;
        }
    }
    Ok(m)
}

/// Smith normal form by integer-preserving row and column operations:
/// pivot is the least-absolute-value entry (ties row-major), Euclidean
/// reduction of its row and column, then a divisibility sweep so the
/// diagonal divides everything after it. Returns the elementary divisors
/// `d_1 | d_2 | ...` (all positive, including any 1s) and the rank.
pub fn smith_normal_form(m: &IntegerMatrix) -> (Vec<BigInt>, usize) {
    let mut m = m.clone();
    let mut t = 0;
    while let Some((pi, pj)) = m.min_abs_entry(t) {
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        loop {
            // Euclidean cleanup of column t and row t; a nonzero remainder
            // becomes the new, strictly smaller pivot.
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in (t + 1)..m.rows {
                    if !m.get(i, t).is_zero() {
                        let q = m.get(i, t) / m.get(t, t);
                        m.row_sub(i, t, &q);
                        if !m.get(i, t).is_zero() {
                            m.swap_rows(i, t);
                            dirty = true;
                        }
                    }
                }
                for j in (t + 1)..m.cols {
                    if !m.get(t, j).is_zero() {
                        let q = m.get(t, j) / m.get(t, t);
                        m.col_sub(j, t, &q);
                        if !m.get(t, j).is_zero() {
                            m.swap_cols(j, t);
                            dirty = true;
                        }
                    }
                }
            }
            // Divisibility sweep: fold a bad row into row t and reduce again.
            let pivot = m.get(t, t).clone();
            let bad = ((t + 1)..m.rows).find(|&i| {
                ((t + 1)..m.cols).any(|j| !(m.get(i, j) % &pivot).is_zero())
            });
            match bad {
                Some(i) => m.row_add(t, i),
                None => break,
            }
        }
        t += 1;
    }
    let divisors = (0..t).map(|k| m.get(k, k).abs()).collect();
    (divisors, t)
}

/// One homology group: free rank and torsion divisors (each > 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub dim: usize,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

/// SNF homology of the (optionally augmented) complex in degrees
/// `0..=up_to_dim`. The basis must carry simplex lists through dimension
/// `up_to_dim + 1`, possibly empty. Augmentation is an explicit row of
/// ones below `d_1` rather than reduced-chain preprocessing.
pub fn homology(
    basis: &FiniteComplexBasis,
    up_to_dim: usize,
    augmented: bool,
) -> Result<Vec<HomologyGroup>> {
    if basis.dims.len() < up_to_dim + 2 {
        return Err(Error::InvalidInput {
            reason: format!(
                "homology through degree {up_to_dim} needs simplex lists through dimension {}, basis has {}",
                up_to_dim + 1,
                basis.dims.len().saturating_sub(1)
            ),
        });
    }
    let mut out = Vec::new();
    let mut rank_dn = if augmented {
        // d_0 is the augmentation row of ones; rank 1 on a nonempty net.
        usize::from(!basis.dims[0].is_empty())
    } else {
        0
    };
    for n in 0..=up_to_dim {
        let d_next = boundary_matrix(basis, n + 1)?;
        let (divisors, rank_next) = smith_normal_form(&d_next);
        let dim_cn = basis.dims[n].len();
        let betti = dim_cn
            .checked_sub(rank_dn + rank_next)
            .ok_or_else(|| Error::Internal {
                detail: format!(
                    "negative betti number at dimension {n}: dim {dim_cn}, ranks {rank_dn} + {rank_next}"
                ),
            })?;
        let torsion: Vec<BigInt> = divisors.into_iter().filter(|d| !d.is_one()).collect();
        out.push(HomologyGroup { dim: n, betti, torsion });
        rank_dn = rank_next;
    }
    Ok(out)
}

pub fn homology_to_json(basis: &FiniteComplexBasis, groups: &[HomologyGroup], augmented: bool) -> serde_json::Value {
    serde_json::json!({
        "radius": ratio::format_rational(&basis.radius),
        "augmented": augmented,
        "vertices": basis.vertex_count,
        "simplex_counts": basis.dims.iter().map(Vec::len).collect::<Vec<_>>(),
        "homology": groups.iter().map(|g| serde_json::json!({
            "dim": g.dim,
            "betti": g.betti,
            "torsion": g.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "note": "empirical, finite net",
    })
}

/// Lazy chain homotopy between an equivariant chain self-map `phi` of the
/// homogeneous complex and the identity:
///
/// ```text
/// h_0(g) = g . x                with d x = phi_0(e) - e
/// h_k(e, gs) = cone_e((phi_k - id - h_{k-1} d)(e, gs))
/// ```
///
/// extended `ZG`-linearly through the leading vertex. The complex is
/// infinite-rank, so `h` exists only as a procedure on requested
/// simplices; every evaluation re-checks the defining identity
/// `d h_k + h_{k-1} d = phi_k - id` exactly and reports the witness on
/// failure, which is how a non-chain-map `phi` surfaces.
pub struct HomotopyBuilder<'a, F>
where
    F: Fn(&[GroupElement], usize) -> Result<Chain<GroupElement>>,
{
    ctx: &'a GroupContext,
    phi: F,
    base_correction: Chain<GroupElement>,
    memo: Mutex<BTreeMap<Vec<GroupElement>, Chain<GroupElement>>>,
}

impl<'a, F> HomotopyBuilder<'a, F>
where
    F: Fn(&[GroupElement], usize) -> Result<Chain<GroupElement>>,
{
    /// `base_correction` is the 1-chain `x` with `d x = phi_0(e) - e`; its
    /// defining property is checked here once.
    pub fn new(ctx: &'a GroupContext, phi: F, base_correction: Chain<GroupElement>) -> Result<Self> {
        let e = ctx.identity();
        let phi_e = phi(std::slice::from_ref(&e), 0)?;
        let want = phi_e.sub(&Chain::from_simplex(vec![e])?);
        let got = if base_correction.is_zero() {
            Chain::zero(0)
        } else {
            base_correction.boundary()?
        };
        if got != want {
            return Err(Error::HomotopyIdentityFailed {
                witness: "base correction x does not satisfy dx = phi_0(e) - e".to_string(),
            });
        }
        Ok(HomotopyBuilder {
            ctx,
            phi,
            base_correction,
            memo: Mutex::new(BTreeMap::new()),
        })
    }

    /// `h_k` on a single simplex given as its vertex tuple; output has
    /// dimension `k + 1`.
    pub fn evaluate(&self, simplex: &[GroupElement], k: usize) -> Result<Chain<GroupElement>> {
        if simplex.len() != k + 1 {
            return Err(Error::WrongDimension {
                expected: k,
                got: simplex.len().saturating_sub(1),
            });
        }
        let g0 = simplex[0].clone();
        if g0 == self.ctx.identity() {
            return self.h_based(simplex);
        }
        let inv = self.ctx.inverse(&g0)?;
        let based: Vec<GroupElement> = simplex
            .iter()
            .map(|g| self.ctx.multiply(&inv, g))
            .collect::<Result<_>>()?;
        // Equivariance of phi is a precondition; sample it at every
        // translated evaluation.
        let phi_direct = (self.phi)(simplex, k)?;
        let phi_translated = chain::act(self.ctx, &g0, &(self.phi)(&based, k)?)?;
        if phi_direct != phi_translated {
            return Err(Error::HomotopyIdentityFailed {
                witness: format!(
                    "phi is not equivariant at {:?}",
                    simplex.iter().map(|g| self.ctx.format_element(g)).collect::<Vec<_>>()
                ),
            });
        }
        let h = self.h_based(&based)?;
        chain::act(self.ctx, &g0, &h)
    }

    /// Linear extension of `evaluate` to a chain.
    pub fn apply(&self, c: &Chain<GroupElement>) -> Result<Chain<GroupElement>> {
        let mut out = Chain::zero(c.dim() + 1);
        for (simplex, coeff) in c.iter() {
            let h = self.evaluate(simplex, simplex.len() - 1)?;
            out = out.add(&h.scale(coeff));
        }
        Ok(out)
    }

    fn h_based(&self, based: &[GroupElement]) -> Result<Chain<GroupElement>> {
        if let Some(hit) = self.memo.lock().unwrap().get(based) {
            return Ok(hit.clone());
        }
        let k = based.len() - 1;
        let sigma = Chain::from_simplex(based.to_vec())?;
        let phi_sigma = (self.phi)(based, k)?;
        let h = if k == 0 {
            // h_0(e) = x; translation supplies h_0(g) = g.x.
            self.base_correction.clone()
        } else {
            let defect = phi_sigma
                .sub(&sigma)
                .sub(&self.apply(&sigma.boundary()?)?);
            defect.cone(&self.ctx.identity())
        };
        // Defining identity, exact: d h_k + h_{k-1} d = phi_k - id.
        let lhs = if h.is_zero() {
            Chain::zero(k)
        } else {
            h.boundary()?
        };
        let lhs = if k == 0 {
            lhs
        } else {
            lhs.add(&self.apply(&sigma.boundary()?)?)
        };
        let rhs = phi_sigma.sub(&sigma);
        if lhs != rhs {
            return Err(Error::HomotopyIdentityFailed {
                witness: format!(
                    "d h_{k} + h_{} d != phi - id at {:?}",
                    k.saturating_sub(1),
                    based.iter().map(|g| self.ctx.format_element(g)).collect::<Vec<_>>()
                ),
            });
        }
        self.memo.lock().unwrap().insert(based.to_vec(), h.clone());
        Ok(h)
    }
}
