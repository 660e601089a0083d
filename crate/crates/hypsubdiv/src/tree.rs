//! Finite rooted metric simplicial trees with exact rational edge lengths:
//! path metric, convex hulls, deterministic edge subdivision, and the
//! separated dense net used by the chain contraction.
//!
//! Every tree is rooted at vertex 0. Edges are directed away from the root
//! and identified by dense ids. Subdividing an edge keeps the original id on
//! the half nearer the root and appends the far half as a new edge, so ids
//! order the tree stably across refinement; net selection and serialization
//! depend on that discipline for determinism.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio;

/// A point of the geometric realization: a vertex, or an interior point of an
/// edge at a positive offset from the edge's near-root endpoint. Endpoint
/// offsets are always normalized to vertex form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreePoint {
    Vertex(u32),
    Interior { edge: u32, offset: BigRational },
}

/// Rooted metric tree; vertex 0 is the root.
pub struct MetricTree {
    parent: Vec<Option<u32>>,
    parent_edge: Vec<Option<u32>>,
    depth: Vec<BigRational>,
    edge_child: Vec<u32>,
    edge_len: Vec<BigRational>,
}

impl MetricTree {
    /// The one-vertex tree.
    pub fn single_vertex() -> MetricTree {
        MetricTree {
            parent: vec![None],
            parent_edge: vec![None],
            depth: vec![BigRational::zero()],
            edge_child: Vec::new(),
            edge_len: Vec::new(),
        }
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_child.len()
    }

    pub fn depth(&self, v: u32) -> &BigRational {
        &self.depth[v as usize]
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        self.parent[v as usize]
    }

    /// Endpoints and length of an edge as (near-root vertex, far vertex, len).
    pub fn edge(&self, e: u32) -> (u32, u32, &BigRational) {
        let child = self.edge_child[e as usize];
        (
            self.parent[child as usize].expect("edge child has a parent"),
            child,
            &self.edge_len[e as usize],
        )
    }

    /// Attach a new leaf below `v` by an edge of the given positive length.
    /// Returns (new vertex id, new edge id).
    pub fn add_leaf(&mut self, v: u32, len: BigRational) -> Result<(u32, u32)> {
        if len <= BigRational::zero() {
            return Err(Error::MetricInvalid {
                reason: format!("edge length {} is not positive", ratio::format_rational(&len)),
            });
        }
        let id = self.parent.len() as u32;
        let eid = self.edge_child.len() as u32;
        self.depth.push(self.depth[v as usize].clone() + &len);
        self.parent.push(Some(v));
        self.parent_edge.push(Some(eid));
        self.edge_child.push(id);
        self.edge_len.push(len);
        Ok((id, eid))
    }

    /// Make the given point a vertex, subdividing its edge if interior. The
    /// near-root half keeps the original edge id; the far half is appended.
    pub fn ensure_vertex(&mut self, p: &TreePoint) -> Result<u32> {
        match p {
            TreePoint::Vertex(v) => Ok(*v),
            TreePoint::Interior { edge, offset } => {
                let e = *edge as usize;
                let len = self.edge_len[e].clone();
                if offset <= &BigRational::zero() || offset >= &len {
                    return Err(Error::MetricInvalid {
                        reason: format!(
                            "offset {} outside the interior of an edge of length {}",
                            ratio::format_rational(offset),
                            ratio::format_rational(&len)
                        ),
                    });
                }
                let child = self.edge_child[e];
                let near = self.parent[child as usize].expect("edge child has a parent");
                let mid = self.parent.len() as u32;
                let far_edge = self.edge_child.len() as u32;
                self.depth
                    .push(self.depth[near as usize].clone() + offset);
                self.parent.push(Some(near));
                self.parent_edge.push(Some(*edge));
                // near half keeps the id, far half is appended
                self.edge_len[e] = offset.clone();
                self.edge_child[e] = mid;
                self.edge_child.push(child);
                self.edge_len.push(len - offset);
                self.parent[child as usize] = Some(mid);
                self.parent_edge[child as usize] = Some(far_edge);
                Ok(mid)
            }
        }
    }

    /// Nearest common ancestor; exists since the tree is connected.
    pub fn meet(&self, mut u: u32, mut v: u32) -> u32 {
        while u != v {
            if self.depth[u as usize] < self.depth[v as usize] {
                std::mem::swap(&mut u, &mut v);
            }
            u = self.parent[u as usize].expect("non-root vertex has a parent");
        }
        u
    }

    /// Exact path distance between vertices.
    pub fn distance(&self, u: u32, v: u32) -> BigRational {
        let m = self.meet(u, v);
        self.depth[u as usize].clone() + &self.depth[v as usize]
            - BigRational::from_integer(BigInt::from(2)) * &self.depth[m as usize]
    }

    /// Distance from an arbitrary point to a vertex.
    pub fn distance_point(&self, p: &TreePoint, x: u32) -> BigRational {
        match p {
            TreePoint::Vertex(v) => self.distance(*v, x),
            TreePoint::Interior { edge, offset } => {
                let (near, far, len) = self.edge(*edge);
                let via_near = offset.clone() + self.distance(near, x);
                let via_far = (len.clone() - offset) + self.distance(far, x);
                via_near.min(via_far)
            }
        }
    }

    /// Distance between two arbitrary points.
    pub fn distance_points(&self, p: &TreePoint, q: &TreePoint) -> BigRational {
        match q {
            TreePoint::Vertex(x) => self.distance_point(p, *x),
            TreePoint::Interior { edge, offset } => {
                if let TreePoint::Interior { edge: pe, offset: po } = p {
                    if pe == edge {
                        return (offset.clone() - po).abs();
                    }
                }
                let (near, far, len) = self.edge(*edge);
                let via_near = offset.clone() + self.distance_point(p, near);
                let via_far = (len.clone() - offset) + self.distance_point(p, far);
                via_near.min(via_far)
            }
        }
    }

    /// Max pairwise distance over a tuple of vertices; 0 for a single vertex.
    pub fn diameter(&self, simplex: &[u32]) -> Result<BigRational> {
        if simplex.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let mut best = BigRational::zero();
        for i in 0..simplex.len() {
            for j in (i + 1)..simplex.len() {
                let d = self.distance(simplex[i], simplex[j]);
                if d > best {
                    best = d;
                }
            }
        }
        Ok(best)
    }

    /// Vertices of the geodesic [u, v] in path order.
    pub fn path_vertices(&self, u: u32, v: u32) -> Vec<u32> {
        let m = self.meet(u, v);
        let mut up = Vec::new();
        let mut x = u;
        while x != m {
            up.push(x);
            x = self.parent[x as usize].expect("non-root vertex has a parent");
        }
        up.push(m);
        let mut down = Vec::new();
        let mut y = v;
        while y != m {
            down.push(y);
            y = self.parent[y as usize].expect("non-root vertex has a parent");
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// The point at distance `t` from `u` along the geodesic [u, v].
    pub fn point_along(&self, u: u32, v: u32, t: &BigRational) -> Result<TreePoint> {
        if t < &BigRational::zero() || t > &self.distance(u, v) {
            return Err(Error::MetricInvalid {
                reason: format!(
                    "arc length {} outside geodesic of length {}",
                    ratio::format_rational(t),
                    ratio::format_rational(&self.distance(u, v))
                ),
            });
        }
        let path = self.path_vertices(u, v);
        let mut remaining = t.clone();
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let step = self.distance(a, b);
            if remaining.is_zero() {
                return Ok(TreePoint::Vertex(a));
            }
            if remaining < step {
                // a and b are adjacent: one is the parent of the other
                let (edge, offset) = if self.parent[b as usize] == Some(a) {
                    let e = self.parent_edge[b as usize].expect("child has parent edge");
                    (e, remaining)
                } else {
                    let e = self.parent_edge[a as usize].expect("child has parent edge");
                    (e, step - remaining)
                };
                return Ok(TreePoint::Interior { edge, offset });
            }
            remaining -= step;
        }
        Ok(TreePoint::Vertex(*path.last().expect("path is nonempty")))
    }

    /// Vertex set of the minimal subtree spanning the given vertices (union
    /// of pairwise geodesics).
    pub fn conv_hull(&self, points: &[u32]) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for &p in points {
            out.insert(p);
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                for v in self.path_vertices(points[i], points[j]) {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// Serialize as `{"vertices": N, "root": 0, "edges": [[u, v, "len"]]}`
    /// with exact rationals; edge order is id order.
    pub fn to_json_value(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = (0..self.edge_count() as u32)
            .map(|e| {
                let (u, v, len) = self.edge(e);
                serde_json::json!([u, v, ratio::format_rational(len)])
            })
            .collect();
        serde_json::json!({
            "vertices": self.vertex_count(),
            "root": 0,
            "edges": edges,
        })
    }
}

/// Quality measurements of a net, from exhaustive enumeration.
pub struct NetQuality {
    /// least pairwise distance (undefined for nets of size < 2)
    pub min_separation: Option<BigRational>,
    /// greatest distance from any tree point to the net
    pub max_covering_radius: BigRational,
    /// greatest gap between consecutive net vertices along any net-pair geodesic
    pub max_gap: BigRational,
}

/// Select the net V: the root, then per-edge candidates at unit spacing from
/// the near-root endpoint (both endpoints included), kept greedily in
/// (edge id, offset) order iff at distance >= 1 from everything kept. Edges
/// are then subdivided so the net consists of vertices; returned in keep
/// order, so index 0 is the root.
///
/// The construction discipline (half-integer lengths, near-root halves keep
/// their edge ids) makes the result 1-separated, 1-dense, with gaps <= 2
/// between consecutive net vertices along any geodesic; those guarantees are
/// re-verified exhaustively by [`verify_net`] rather than assumed.
pub fn select_net(tree: &mut MetricTree) -> Result<Vec<u32>> {
    let one = BigRational::one();
    let mut kept: Vec<TreePoint> = vec![TreePoint::Vertex(tree.root())];
    for e in 0..tree.edge_count() as u32 {
        let (near, far, len) = tree.edge(e);
        let len = len.clone();
        let mut candidates: Vec<TreePoint> = Vec::new();
        candidates.push(TreePoint::Vertex(near));
        let mut o = BigRational::one();
        while o < len {
            candidates.push(TreePoint::Interior {
                edge: e,
                offset: o.clone(),
            });
            o += &one;
        }
        candidates.push(TreePoint::Vertex(far));
        for cand in candidates {
            let ok = kept
                .iter()
                .all(|k| tree.distance_points(k, &cand) >= one);
            if ok {
                kept.push(cand);
            }
        }
    }
    // Interior picks reference pre-subdivision edge ids; process in reverse
    // keep order so earlier offsets stay valid (the near half keeps its id
    // and its offsets, later offsets move to appended edges untouched here).
    let mut ids = vec![0u32; kept.len()];
    for (i, p) in kept.iter().enumerate().rev() {
        ids[i] = tree.ensure_vertex(p)?;
    }
    Ok(ids)
}

/// Exhaustively measure separation, covering radius, and along-geodesic gaps
/// of a net of vertices.
pub fn verify_net(tree: &MetricTree, net: &[u32]) -> Result<NetQuality> {
    if net.is_empty() {
        return Err(Error::MetricInvalid {
            reason: "empty net".into(),
        });
    }
    let netset: BTreeSet<u32> = net.iter().copied().collect();
    let mut min_separation: Option<BigRational> = None;
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let d = tree.distance(net[i], net[j]);
            min_separation = Some(match min_separation {
                None => d,
                Some(m) => m.min(d),
            });
        }
    }
    // covering radius: per vertex the distance to the nearest net vertex; on
    // an edge (u, v) of length L the interior maximum is bounded by
    // (g(u) + g(v) + L) / 2 since the nearest-net function is 1-Lipschitz.
    let g = |x: u32| -> BigRational {
        net.iter()
            .map(|&n| tree.distance(n, x))
            .min()
            .expect("net is nonempty")
    };
    let mut cover = BigRational::zero();
    for v in 0..tree.vertex_count() as u32 {
        cover = cover.max(g(v));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for e in 0..tree.edge_count() as u32 {
        let (u, v, len) = tree.edge(e);
        cover = cover.max((g(u) + g(v) + len) / &two);
    }
    // gaps: along every net-pair geodesic, consecutive net vertices
    let mut max_gap = BigRational::zero();
    for i in 0..net.len() {
        for j in (i + 1)..net.len() {
            let path = tree.path_vertices(net[i], net[j]);
            let mut last = net[i];
            for &x in &path {
                if netset.contains(&x) {
                    max_gap = max_gap.max(tree.distance(last, x));
                    last = x;
                }
            }
        }
    }
    Ok(NetQuality {
        min_separation,
        max_covering_radius: cover,
        max_gap,
    })
}
