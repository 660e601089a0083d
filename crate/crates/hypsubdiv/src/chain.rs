//! Sparse integer chains on ordered vertex tuples: the homogeneous complex
//! C_n, its differential, norms, group action, Rips membership, cones,
//! support, and augmentation.
//!
//! Basis simplices are tuples of n+1 vertices. Tuples with repeated vertices
//! are honest basis elements and are never normalized away: every downstream
//! identity is asserted verbatim on this basis. Coefficients are
//! arbitrary-precision integers; all norm and identity checks are exact.
//!
//! The type is generic over the vertex type so the same algebra serves group
//! chains and tree chains; group-metric operations take the context
//! explicitly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElement};

/// A sparse chain of fixed dimension: a finite integer combination of
/// (dim + 1)-tuples. Terms iterate in the vertex type's lexicographic tuple
/// order, which for group elements collates by the presentation's alphabet
/// (each inverse immediately after its generator); serialization is bit-exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain<V: Ord + Clone> {
    dim: usize,
    terms: BTreeMap<Vec<V>, BigInt>,
}

impl<V: Ord + Clone> Chain<V> {
    pub fn zero(dim: usize) -> Chain<V> {
        Chain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The chain 1·tuple.
    pub fn from_simplex(tuple: Vec<V>) -> Result<Chain<V>> {
        if tuple.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let mut c = Chain::zero(tuple.len() - 1);
        c.add_term(tuple, BigInt::one());
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored basis simplices.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<V>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, simplex: &[V]) -> BigInt {
        self.terms.get(simplex).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Add coeff·simplex, merging and dropping zeros. The tuple length must
    /// match the chain dimension; a mismatch is a caller bug.
    pub fn add_term(&mut self, simplex: Vec<V>, coeff: BigInt) {
        assert_eq!(
            simplex.len(),
            self.dim + 1,
            "term arity does not match chain dimension"
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(simplex) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Chain<V>) -> Chain<V> {
        assert_eq!(self.dim, other.dim, "chain dimensions differ");
        let mut out = self.clone();
        for (s, a) in &other.terms {
            out.add_term(s.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain<V>) -> Chain<V> {
        assert_eq!(self.dim, other.dim, "chain dimensions differ");
        let mut out = self.clone();
        for (s, a) in &other.terms {
            out.add_term(s.clone(), -a.clone());
        }
        out
    }

    pub fn neg(&self) -> Chain<V> {
        Chain {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(s, a)| (s.clone(), -a.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Chain<V> {
        if k.is_zero() {
            return Chain::zero(self.dim);
        }
        Chain {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(s, a)| (s.clone(), a * k))
                .collect(),
        }
    }

    /// Alternating face sum d(v_0..v_n) = Σ_i (-1)^i (v_0..v̂_i..v_n),
    /// extended linearly. Dimension 0 has no boundary here; its analogue is
    /// [`Chain::augmentation`].
    pub fn boundary(&self) -> Result<Chain<V>> {
        if self.dim == 0 {
            return Err(Error::DimensionZero);
        }
        let mut out = Chain::zero(self.dim - 1);
        for (s, a) in &self.terms {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let coeff = if i % 2 == 0 { a.clone() } else { -a.clone() };
                out.add_term(face, coeff);
            }
        }
        Ok(out)
    }

    /// Sum of coefficients of a dimension-0 chain (the map sending every
    /// vertex to 1).
    pub fn augmentation(&self) -> Result<BigInt> {
        if self.dim != 0 {
            return Err(Error::WrongDimension {
                expected: 0,
                got: self.dim,
            });
        }
        Ok(self.terms.values().sum())
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> BigUint {
        self.terms
            .values()
            .map(|a| a.abs().to_biguint().expect("abs is nonnegative"))
            .sum()
    }

    /// All vertices appearing in stored simplices.
    pub fn support(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        for s in self.terms.keys() {
            for v in s {
                out.insert(v.clone());
            }
        }
        out
    }

    /// Prepend v to every simplex; raises dimension by 1 and preserves the
    /// ℓ¹ norm termwise.
    pub fn cone(&self, v: &V) -> Chain<V> {
        let mut out = Chain::zero(self.dim + 1);
        for (s, a) in &self.terms {
            let mut t = Vec::with_capacity(s.len() + 1);
            t.push(v.clone());
            t.extend_from_slice(s);
            out.add_term(t, a.clone());
        }
        out
    }

    /// Apply a vertex map to every simplex, merging any collisions.
    pub fn map_vertices<W: Ord + Clone>(
        &self,
        mut f: impl FnMut(&V) -> Result<W>,
    ) -> Result<Chain<W>> {
        let mut out = Chain::zero(self.dim);
        for (s, a) in &self.terms {
            let t: Result<Vec<W>> = s.iter().map(&mut f).collect();
            out.add_term(t?, a.clone());
        }
        Ok(out)
    }

    /// Max simplex diameter under the supplied tuple-diameter function;
    /// `None` for the zero chain.
    pub fn max_diameter<M: Ord>(
        &self,
        mut diam: impl FnMut(&[V]) -> Result<M>,
    ) -> Result<Option<M>> {
        let mut best: Option<M> = None;
        for s in self.terms.keys() {
            let d = diam(s)?;
            best = Some(match best {
                None => d,
                Some(b) => b.max(d),
            });
        }
        Ok(best)
    }
}

/// Σ |a_σ| · (1 + diam σ) over the group metric.
pub fn sobolev_norm(ctx: &GroupContext, c: &Chain<GroupElement>) -> Result<BigUint> {
    let mut out = BigUint::zero();
    for (s, a) in c.iter() {
        let d = ctx.diameter(s)?;
        out += a.abs().to_biguint().expect("abs is nonnegative") * BigUint::from(d as u64 + 1);
    }
    Ok(out)
}

/// Diagonal left action: translate every vertex by g, coefficients unchanged.
pub fn act(ctx: &GroupContext, g: &GroupElement, c: &Chain<GroupElement>) -> Result<Chain<GroupElement>> {
    c.map_vertices(|v| ctx.multiply(g, v))
}

/// True iff every simplex of c has group-metric diameter at most r.
pub fn rips_check(ctx: &GroupContext, c: &Chain<GroupElement>, r: &BigRational) -> Result<bool> {
    for (s, _) in c.iter() {
        let d = ctx.diameter(s)?;
        if &BigRational::from_integer(BigInt::from(d)) > r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest simplex diameter in c, or `None` for the zero chain.
pub fn group_diameter(ctx: &GroupContext, c: &Chain<GroupElement>) -> Result<Option<u32>> {
    c.max_diameter(|s| ctx.diameter(s))
}

#[derive(serde::Serialize, serde::Deserialize)]
struct TermFile {
    simplex: Vec<String>,
    coeff: serde_json::Number,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ChainFile {
    dim: usize,
    terms: Vec<TermFile>,
}

/// Serialize a group chain: `{"dim": n, "terms": [{"simplex": [...],
/// "coeff": ...}]}` with simplices in canonical order, arbitrary-precision
/// integer coefficients, and no zero terms. Bit-exact across runs.
pub fn chain_to_json(ctx: &GroupContext, c: &Chain<GroupElement>) -> String {
    let file = ChainFile {
        dim: c.dim(),
        terms: c
            .iter()
            .map(|(s, a)| TermFile {
                simplex: s.iter().map(|v| ctx.format_element(v)).collect(),
                coeff: a
                    .to_string()
                    .parse()
                    .expect("integer literal parses as JSON number"),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("chain serializes")
}

/// Parse the chain JSON format; every simplex must match the declared
/// dimension and every vertex must normalize into the ball.
pub fn chain_from_json(ctx: &GroupContext, text: &str) -> Result<Chain<GroupElement>> {
    let file: ChainFile = serde_json::from_str(text).map_err(|e| Error::Json {
        path: "chain".into(),
        message: e.to_string(),
    })?;
    let mut c = Chain::zero(file.dim);
    for t in file.terms {
        if t.simplex.len() != file.dim + 1 {
            return Err(Error::WrongDimension {
                expected: file.dim,
                got: t.simplex.len().saturating_sub(1),
            });
        }
        let tuple: Result<Vec<GroupElement>> =
            t.simplex.iter().map(|w| ctx.parse_element(w)).collect();
        let coeff: BigInt = t.coeff.to_string().parse().map_err(|_| Error::Json {
            path: "chain".into(),
            message: format!("coefficient {} is not an integer", t.coeff),
        })?;
        c.add_term(tuple?, coeff);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_context, GroupPresentation};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn f2() -> &'static GroupContext {
        static CTX: OnceLock<GroupContext> = OnceLock::new();
        CTX.get_or_init(|| build_context(GroupPresentation::free(&['a', 'b'], 8)).unwrap())
    }

    fn el(s: &str) -> GroupElement {
        f2().parse_element(s).unwrap()
    }

    fn simp(words: &[&str]) -> Vec<GroupElement> {
        words.iter().map(|w| el(w)).collect()
    }

    #[test]
    fn boundary_of_triangle() {
        let c = Chain::from_simplex(simp(&["", "a", "ab"])).unwrap();
        let d = c.boundary().unwrap();
        let mut expect = Chain::zero(1);
        expect.add_term(simp(&["a", "ab"]), BigInt::from(1));
        expect.add_term(simp(&["", "ab"]), BigInt::from(-1));
        expect.add_term(simp(&["", "a"]), BigInt::from(1));
        assert_eq!(d, expect);
    }

    #[test]
    fn boundary_of_degenerate_edge_cancels() {
        let c = Chain::from_simplex(simp(&["", ""])).unwrap();
        assert!(c.boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_squared_is_zero() {
        let c = Chain::from_simplex(simp(&["", "a", "ab", "b"])).unwrap();
        assert!(c.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_of_vertex_is_dimension_error() {
        let c = Chain::from_simplex(simp(&[""])).unwrap();
        assert!(matches!(c.boundary(), Err(Error::DimensionZero)));
    }

    #[test]
    fn l1_norm_examples() {
        assert_eq!(Chain::<GroupElement>::zero(1).l1_norm(), BigUint::zero());
        let mut c = Chain::zero(1);
        c.add_term(simp(&["", "a"]), BigInt::from(3));
        c.add_term(simp(&["", "b"]), BigInt::from(-2));
        assert_eq!(c.l1_norm(), BigUint::from(5u32));
        // n+1 faces with distinct tuples, coefficients +-1
        let s = Chain::from_simplex(simp(&["", "a", "ab", "aba"])).unwrap();
        assert_eq!(s.boundary().unwrap().l1_norm(), BigUint::from(4u32));
    }

    #[test]
    fn sobolev_norm_examples() {
        let c = Chain::from_simplex(simp(&["", ""])).unwrap();
        assert_eq!(sobolev_norm(f2(), &c).unwrap(), BigUint::from(1u32));
        let c = Chain::from_simplex(simp(&["", "aaaaa"])).unwrap();
        assert_eq!(sobolev_norm(f2(), &c).unwrap(), BigUint::from(6u32));
        let mut c = Chain::zero(1);
        c.add_term(simp(&["", "a"]), BigInt::from(2));
        c.add_term(simp(&["", "bb"]), BigInt::from(1));
        assert_eq!(sobolev_norm(f2(), &c).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn act_examples() {
        let c = Chain::from_simplex(simp(&["", "b"])).unwrap();
        let moved = act(f2(), &el("a"), &c).unwrap();
        assert_eq!(moved, Chain::from_simplex(simp(&["a", "ab"])).unwrap());
        let back = act(f2(), &f2().identity(), &c).unwrap();
        assert_eq!(back, c);
        // translation off the edge of the ball is a hard error
        let far = Chain::from_simplex(simp(&["aaaaaaaa"])).unwrap();
        assert!(act(f2(), &el("a"), &far).is_err());
    }

    #[test]
    fn rips_examples() {
        let r2 = BigRational::from_integer(BigInt::from(2));
        assert!(rips_check(f2(), &Chain::zero(3), &r2).unwrap());
        let c = Chain::from_simplex(simp(&["", "aaa"])).unwrap();
        assert!(!rips_check(f2(), &c, &r2).unwrap());
        let c = Chain::from_simplex(simp(&["", "a", "ab"])).unwrap();
        assert!(rips_check(f2(), &c, &r2).unwrap());
    }

    #[test]
    fn cone_identity_on_edge() {
        let v = el("b");
        let sigma = Chain::from_simplex(simp(&["a", "ab"])).unwrap();
        let lhs = sigma.cone(&v).boundary().unwrap();
        let rhs = sigma.sub(&sigma.boundary().unwrap().cone(&v));
        assert_eq!(lhs, rhs);
        assert!(Chain::<GroupElement>::zero(1).cone(&v).is_zero());
    }

    #[test]
    fn support_and_augmentation() {
        let mut c = Chain::zero(1);
        c.add_term(simp(&["", "a"]), BigInt::from(2));
        c.add_term(simp(&["a", "b"]), BigInt::from(-1));
        let sup = c.support();
        assert_eq!(sup.len(), 3);
        assert!(sup.contains(&el("")) && sup.contains(&el("a")) && sup.contains(&el("b")));

        let mut z = Chain::zero(0);
        z.add_term(simp(&[""]), BigInt::from(3));
        z.add_term(simp(&["a"]), BigInt::from(-3));
        assert_eq!(z.augmentation().unwrap(), BigInt::zero());
        assert!(matches!(
            c.augmentation(),
            Err(Error::WrongDimension { expected: 0, got: 1 })
        ));
        assert_eq!(c.boundary().unwrap().augmentation().unwrap(), BigInt::zero());
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let mut c = Chain::zero(0);
        c.add_term(simp(&["a"]), BigInt::from(5));
        c.add_term(simp(&["a"]), BigInt::from(-5));
        assert!(c.is_zero());
        assert_eq!(c.term_count(), 0);
    }

    #[test]
    fn chain_json_round_trip_is_bit_exact() {
        let mut c = Chain::zero(1);
        c.add_term(simp(&["", "a"]), BigInt::from(3));
        c.add_term(
            simp(&["a", "ab"]),
            "123456789012345678901234567890".parse().unwrap(),
        );
        c.add_term(simp(&["A", "b"]), BigInt::from(-7));
        let text = chain_to_json(f2(), &c);
        let parsed = chain_from_json(f2(), &text).unwrap();
        assert_eq!(parsed, c);
        assert_eq!(chain_to_json(f2(), &parsed), text);
        assert!(text.contains("123456789012345678901234567890"));
    }

    #[test]
    fn chain_json_rejects_arity_mismatch() {
        let text = r#"{ "dim": 1, "terms": [ { "simplex": ["a"], "coeff": 1 } ] }"#;
        assert!(chain_from_json(f2(), text).is_err());
        let text = r#"{ "dim": 0, "terms": [ { "simplex": ["a"], "coeff": 1.5 } ] }"#;
        assert!(chain_from_json(f2(), text).is_err());
    }

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        // words of length <= 3 in the radius-8 ball
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..=3)
            .prop_map(|w| f2().normal_form(&w).unwrap())
    }

    fn arb_chain(dim: usize) -> impl Strategy<Value = Chain<GroupElement>> {
        proptest::collection::vec(
            (proptest::collection::vec(arb_element(), dim + 1), -4i64..=4),
            0..6,
        )
        .prop_map(move |terms| {
            let mut c = Chain::zero(dim);
            for (s, a) in terms {
                c.add_term(s, BigInt::from(a));
            }
            c
        })
    }

    proptest! {
        #[test]
        fn prop_boundary_squared_zero(c in (1usize..=4).prop_flat_map(arb_chain)) {
            let d = c.boundary().unwrap();
            if d.dim() >= 1 {
                prop_assert!(d.boundary().unwrap().is_zero());
            }
        }

        #[test]
        fn prop_boundary_norm_bound(c in arb_chain(3)) {
            let d = c.boundary().unwrap();
            prop_assert!(d.l1_norm() <= c.l1_norm() * BigUint::from(4u32));
        }

        #[test]
        fn prop_sobolev_dominates_l1(c in arb_chain(2)) {
            prop_assert!(sobolev_norm(f2(), &c).unwrap() >= c.l1_norm());
        }

        #[test]
        fn prop_act_is_isometry_and_chain_map(c in arb_chain(2), g in arb_element()) {
            let moved = act(f2(), &g, &c).unwrap();
            prop_assert_eq!(moved.l1_norm(), c.l1_norm());
            prop_assert_eq!(
                sobolev_norm(f2(), &moved).unwrap(),
                sobolev_norm(f2(), &c).unwrap()
            );
            prop_assert_eq!(
                moved.boundary().unwrap(),
                act(f2(), &g, &c.boundary().unwrap()).unwrap()
            );
        }

        #[test]
        fn prop_rips_closed_under_boundary(c in arb_chain(2), r in 0i64..=4) {
            let r = BigRational::from_integer(BigInt::from(r));
            if rips_check(f2(), &c, &r).unwrap() {
                prop_assert!(rips_check(f2(), &c.boundary().unwrap(), &r).unwrap());
            }
        }
    }
}
