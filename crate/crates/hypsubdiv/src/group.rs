//! Group engine: finite presentations, ShortLex normal forms, Cayley-ball
//! machinery, and the canonical equivariant geodesic family.
//!
//! Two backends are supported. `free` treats the presentation as a free group:
//! free reduction is a complete normal form and no ball table is materialized,
//! so operations scale to large radii. `dehn` handles C'(1/6) small-cancellation
//! presentations: Dehn's algorithm decides the word problem exactly, and the
//! ball of the configured radius is enumerated by BFS with collision detection,
//! assigning every element its ShortLex-least geodesic word.
//!
//! All operations respect the declared ball: a result whose normal form is
//! longer than `ball_radius` is reported as `OutOfBall`, never truncated.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio;
use crate::words::{self, Letter};

pub const DEFAULT_BALL_CAP: usize = 4_000_000;

/// Normal-form backend.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Backend {
    #[serde(rename = "free")]
    FreeReduction,
    #[serde(rename = "dehn")]
    DehnSmallCancellation,
}

/// A finite presentation together with the ball parameters used downstream.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    /// Generator symbols: distinct lowercase ASCII letters; the inverse of a
    /// generator serializes as the uppercase form.
    pub generators: Vec<char>,
    /// Relators as cyclically reduced words.
    pub relators: Vec<Vec<Letter>>,
    pub backend: Backend,
    pub ball_radius: u32,
    /// Hyperbolicity constant used by validation bounds; user supplied or
    /// estimated, not certified.
    pub delta: BigRational,
    /// Cap on eager ball enumeration.
    pub ball_cap: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Int(i64),
    Str(String),
}

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
    backend: Backend,
    ball_radius: u32,
    #[serde(default)]
    delta: Option<NumberOrString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ball_cap: Option<usize>,
}

impl GroupPresentation {
    /// Free group on the given single-letter generators.
    pub fn free(symbols: &[char], ball_radius: u32) -> GroupPresentation {
        GroupPresentation {
            generators: symbols.to_vec(),
            relators: Vec::new(),
            backend: Backend::FreeReduction,
            ball_radius,
            delta: BigRational::zero(),
            ball_cap: DEFAULT_BALL_CAP,
        }
    }

    /// Parse the JSON presentation format.
    pub fn from_json(text: &str) -> Result<GroupPresentation> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: PresentationFile =
            serde_path_to_error::deserialize(de).map_err(|e| Error::Json {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        let mut generators = Vec::new();
        for (i, g) in file.generators.iter().enumerate() {
            let mut chars = g.chars();
            let c = chars.next().ok_or_else(|| Error::PresentationInvalid {
                reason: format!("generators[{i}] is empty"),
            })?;
            if chars.next().is_some() || !c.is_ascii_lowercase() {
                return Err(Error::PresentationInvalid {
                    reason: format!(
                        "generators[{i}] = {g:?}: generators must be single lowercase ASCII letters"
                    ),
                });
            }
            generators.push(c);
        }
        let mut relators = Vec::new();
        for (i, r) in file.relators.iter().enumerate() {
            let w = words::parse_word(r, &generators).map_err(|e| Error::PresentationInvalid {
                reason: format!("relators[{i}]: {e}"),
            })?;
            relators.push(w);
        }
        let delta = match file.delta {
            None => BigRational::zero(),
            Some(NumberOrString::Int(n)) => BigRational::from_integer(BigInt::from(n)),
            Some(NumberOrString::Str(s)) => ratio::parse_rational(&s)?,
        };
        Ok(GroupPresentation {
            generators,
            relators,
            backend: file.backend,
            ball_radius: file.ball_radius,
            delta,
            ball_cap: file.ball_cap.unwrap_or(DEFAULT_BALL_CAP),
        })
    }

    pub fn to_json(&self) -> String {
        let file = PresentationFile {
            generators: self.generators.iter().map(|c| c.to_string()).collect(),
            relators: self
                .relators
                .iter()
                .map(|r| words::format_word(r, &self.generators))
                .collect(),
            backend: self.backend,
            ball_radius: self.ball_radius,
            delta: Some(NumberOrString::Str(ratio::format_rational(&self.delta))),
            ball_cap: if self.ball_cap == DEFAULT_BALL_CAP {
                None
            } else {
                Some(self.ball_cap)
            },
        };
        serde_json::to_string_pretty(&file).expect("presentation serializes")
    }

    fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::PresentationInvalid {
                reason: "at least one generator is required".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for &c in &self.generators {
            if !c.is_ascii_lowercase() {
                return Err(Error::PresentationInvalid {
                    reason: format!("generator {c:?} is not a lowercase ASCII letter"),
                });
            }
            if !seen.insert(c) {
                return Err(Error::PresentationInvalid {
                    reason: format!("duplicate generator {c:?}"),
                });
            }
        }
        if self.ball_radius == 0 {
            return Err(Error::PresentationInvalid {
                reason: "ball_radius must be at least 1".into(),
            });
        }
        if self.delta < BigRational::zero() {
            return Err(Error::PresentationInvalid {
                reason: "delta must be nonnegative".into(),
            });
        }
        match self.backend {
            Backend::FreeReduction => {
                if !self.relators.is_empty() {
                    return Err(Error::PresentationInvalid {
                        reason: "the free backend requires an empty relator list".into(),
                    });
                }
            }
            Backend::DehnSmallCancellation => {
                if self.relators.is_empty() {
                    return Err(Error::PresentationInvalid {
                        reason: "the dehn backend requires at least one relator".into(),
                    });
                }
                for (i, r) in self.relators.iter().enumerate() {
                    if r.is_empty() {
                        return Err(Error::PresentationInvalid {
                            reason: format!("relators[{i}] is empty"),
                        });
                    }
                    if !words::is_cyclically_reduced(r) {
                        return Err(Error::PresentationInvalid {
                            reason: format!(
                                "relators[{i}] = {:?} is not cyclically reduced",
                                words::format_word(r, &self.generators)
                            ),
                        });
                    }
                    if is_proper_power(r) {
                        return Err(Error::PresentationInvalid {
                            reason: format!(
                                "relators[{i}] = {:?} is a proper power",
                                words::format_word(r, &self.generators)
                            ),
                        });
                    }
                }
                check_sixth_condition(&self.relators, &self.generators)?;
            }
        }
        Ok(())
    }
}

fn is_proper_power(w: &[Letter]) -> bool {
    let n = w.len();
    for period in 1..n {
        if n % period == 0 && (period..n).all(|i| w[i] == w[i - period]) {
            return true;
        }
    }
    false
}

/// All cyclic rotations of the relators and their inverses, deduplicated.
fn symmetrize(relators: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let mut set = BTreeSet::new();
    for r in relators {
        for base in [r.clone(), words::invert(r)] {
            for shift in 0..base.len() {
                let mut w = base[shift..].to_vec();
                w.extend_from_slice(&base[..shift]);
                set.insert(w);
            }
        }
    }
    set.into_iter().collect()
}

/// C'(1/6) metric small-cancellation condition: every piece (a common prefix
/// of two distinct symmetrized relators) is strictly shorter than 1/6 of each
/// relator containing it.
fn check_sixth_condition(relators: &[Vec<Letter>], symbols: &[char]) -> Result<()> {
    let rstar = symmetrize(relators);
    for (i, w1) in rstar.iter().enumerate() {
        for (j, w2) in rstar.iter().enumerate() {
            if i == j {
                continue;
            }
            let cp = w1
                .iter()
                .zip(w2.iter())
                .take_while(|(a, b)| a == b)
                .count();
            if 6 * cp >= w1.len() {
                return Err(Error::PresentationInvalid {
                    reason: format!(
                        "presentation is not C'(1/6): piece {:?} has length {} against relator length {}",
                        words::format_word(&w1[..cp], symbols),
                        cp,
                        w1.len()
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Dehn's algorithm for a fixed symmetrized relator set: repeatedly replace a
/// subword that is more than half of a symmetrized relator by the inverse of
/// the complementary part (leftmost occurrence first, then pattern order).
/// Decides the word problem exactly for C'(1/6) presentations.
struct DehnMachine {
    patterns: Vec<(Vec<Letter>, Vec<Letter>)>,
}

impl DehnMachine {
    fn new(relators: &[Vec<Letter>]) -> DehnMachine {
        let mut patterns = BTreeSet::new();
        for w in symmetrize(relators) {
            let m = w.len() / 2 + 1;
            if m <= w.len() {
                patterns.insert((w[..m].to_vec(), words::invert(&w[m..])));
            }
        }
        DehnMachine {
            patterns: patterns.into_iter().collect(),
        }
    }

    fn reduce(&self, word: &[Letter]) -> Vec<Letter> {
        let mut w = words::free_reduce(word);
        'outer: loop {
            for start in 0..w.len() {
                for (pat, rep) in &self.patterns {
                    if start + pat.len() <= w.len() && w[start..start + pat.len()] == pat[..] {
                        let mut nw = w[..start].to_vec();
                        nw.extend_from_slice(rep);
                        nw.extend_from_slice(&w[start + pat.len()..]);
                        w = words::free_reduce(&nw);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    fn is_identity(&self, word: &[Letter]) -> bool {
        self.reduce(word).is_empty()
    }

    fn equal(&self, u: &[Letter], v: &[Letter]) -> bool {
        self.is_identity(&words::concat_reduce(u, &words::invert(v)))
    }
}

fn abelianization(w: &[Letter], ngens: usize) -> Vec<i32> {
    let mut out = vec![0i32; ngens];
    for &l in w {
        if words::is_inverse(l) {
            out[words::gen_index(l)] -= 1;
        } else {
            out[words::gen_index(l)] += 1;
        }
    }
    out
}

/// A representation of the presented group in SL(2, F_p), found by seeded
/// random search over generator images and verified on every relator. Used
/// only as a bucketing fingerprint to keep element-equality scans short;
/// equality itself is always decided by Dehn's algorithm.
struct Sl2Rep {
    p: u64,
    gens: Vec<[u64; 4]>,
}

fn sl2_mul(p: u64, x: [u64; 4], y: [u64; 4]) -> [u64; 4] {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

fn sl2_inv(p: u64, x: [u64; 4]) -> [u64; 4] {
    // det = 1, so the inverse is the adjugate.
    [x[3], (p - x[1]) % p, (p - x[2]) % p, x[0]]
}

fn mod_pow(p: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Sl2Rep {
    fn eval(&self, w: &[Letter]) -> [u64; 4] {
        let mut m = [1, 0, 0, 1];
        for &l in w {
            let g = self.gens[words::gen_index(l)];
            let g = if words::is_inverse(l) {
                sl2_inv(self.p, g)
            } else {
                g
            };
            m = sl2_mul(self.p, m, g);
        }
        m
    }

    /// Deterministic bounded search for generator images satisfying all
    /// relators. Returns `None` when the budget runs out; callers fall back
    /// to coarser bucketing, which changes speed and nothing else.
    fn search(relators: &[Vec<Letter>], ngens: usize) -> Option<Sl2Rep> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_ba11);
        for p in [11u64, 13, 17, 19, 23] {
            'attempt: for _ in 0..40_000 {
                let mut gens = Vec::with_capacity(ngens);
                for _ in 0..ngens {
                    // random (a, b, c) with a invertible; d solves det = 1
                    let a = rng.gen_range(1..p);
                    let b = rng.gen_range(0..p);
                    let c = rng.gen_range(0..p);
                    let d = (1 + b * c % p) % p * mod_pow(p, a, p - 2) % p;
                    gens.push([a, b, c, d]);
                }
                let rep = Sl2Rep { p, gens };
                for r in relators {
                    if rep.eval(r) != [1, 0, 0, 1] {
                        continue 'attempt;
                    }
                }
                return Some(rep);
            }
        }
        None
    }
}

fn letter_of_rank(rank: usize) -> Letter {
    let gen = (rank / 2 + 1) as Letter;
    if rank % 2 == 0 {
        gen
    } else {
        -gen
    }
}

/// Eagerly enumerated ball for the Dehn backend: every element of word length
/// at most the radius, keyed by its ShortLex-least geodesic word. Ids are
/// dense and follow ShortLex discovery order.
struct BallTable {
    words_: Vec<Vec<Letter>>,
    word_to_id: HashMap<Vec<Letter>, u32>,
    adjacency: Vec<Vec<Option<u32>>>,
    buckets: HashMap<(Vec<i32>, [u64; 4]), Vec<u32>>,
    sphere_sizes: Vec<usize>,
    bipartite: bool,
    ngens: usize,
    dehn: DehnMachine,
    sl2: Option<Sl2Rep>,
}

impl BallTable {
    /// Bucket key: invariants of the group element, computable from any
    /// spelling (abelianization image plus the SL(2, F_p) image when a
    /// representation was found).
    fn bucket_key(&self, w: &[Letter]) -> (Vec<i32>, [u64; 4]) {
        let fp = match &self.sl2 {
            Some(rep) => rep.eval(w),
            None => [0; 4],
        };
        (abelianization(w, self.ngens), fp)
    }

    /// Locate the element represented by an arbitrary word, if it lies in the
    /// ball. Exact: Dehn reduction plus invariant-bucketed equality checks,
    /// each decided by Dehn's algorithm.
    fn resolve(&self, raw: &[Letter]) -> Option<u32> {
        let w0 = words::free_reduce(raw);
        if let Some(&id) = self.word_to_id.get(&w0) {
            return Some(id);
        }
        let w = self.dehn.reduce(&w0);
        if let Some(&id) = self.word_to_id.get(&w) {
            return Some(id);
        }
        let bucket = self.buckets.get(&self.bucket_key(&w))?;
        for &id in bucket {
            let cand = &self.words_[id as usize];
            if self.bipartite && (cand.len() + w.len()) % 2 != 0 {
                continue;
            }
            if self.dehn.equal(&w, cand) {
                return Some(id);
            }
        }
        None
    }

    fn build(pres: &GroupPresentation) -> Result<BallTable> {
        let ngens = pres.generators.len();
        let nletters = 2 * ngens;
        let radius = pres.ball_radius;
        let mut t = BallTable {
            words_: vec![Vec::new()],
            word_to_id: HashMap::from([(Vec::new(), 0u32)]),
            adjacency: vec![vec![None; nletters]],
            buckets: HashMap::new(),
            sphere_sizes: vec![1],
            bipartite: pres.relators.iter().all(|r| r.len() % 2 == 0),
            ngens,
            dehn: DehnMachine::new(&pres.relators),
            sl2: Sl2Rep::search(&pres.relators, ngens),
        };
        let root_key = t.bucket_key(&[]);
        t.buckets.insert(root_key, vec![0u32]);
        let mut level: Vec<u32> = vec![0];
        for d in 0..=radius {
            let mut next: Vec<u32> = Vec::new();
            for &x in &level {
                for li in 0..nletters {
                    let c = words::concat_reduce(
                        &t.words_[x as usize],
                        &[letter_of_rank(li)],
                    );
                    let id = match t.resolve(&c) {
                        Some(id) => Some(id),
                        None if d < radius => {
                            // Unresolved means: not equal to any enumerated
                            // element, hence a fresh element at depth d + 1
                            // whose ShortLex-least geodesic word is c itself.
                            if c.len() != (d + 1) as usize {
                                return Err(Error::Internal {
                                    detail: format!(
                                        "ball BFS: unresolved candidate of length {} at level {}",
                                        c.len(),
                                        d
                                    ),
                                });
                            }
                            if t.words_.len() >= pres.ball_cap {
                                return Err(Error::BallTooLarge { cap: pres.ball_cap });
                            }
                            let id = t.words_.len() as u32;
                            t.word_to_id.insert(c.clone(), id);
                            let key = t.bucket_key(&c);
                            t.buckets.entry(key).or_default().push(id);
                            t.words_.push(c);
                            t.adjacency.push(vec![None; nletters]);
                            next.push(id);
                            Some(id)
                        }
                        None => None,
                    };
                    t.adjacency[x as usize][li] = id;
                }
            }
            if d < radius {
                t.sphere_sizes.push(next.len());
                level = next;
            }
        }
        Ok(t)
    }
}

enum Engine {
    Free,
    Dehn(BallTable),
}

/// A group element in ShortLex normal form for its context.
///
/// Ordering is lexicographic on (generator index, inverse flag) pairs with
/// shorter prefixes first; this is the canonical order used for chain
/// serialization. ShortLex comparisons (length first) are exposed separately.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    word: Vec<Letter>,
}

impl GroupElement {
    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn shortlex_cmp(&self, other: &GroupElement) -> std::cmp::Ordering {
        words::shortlex_cmp(&self.word, &other.word)
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .iter()
            .map(|&l| words::rank(l))
            .cmp(other.word.iter().map(|&l| words::rank(l)))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Immutable context for one presentation: normal forms, ball access, the
/// canonical geodesic family, hulls, and a thin-triangle estimator. Safe for
/// concurrent readers; the internal caches are mutex-guarded memo tables that
/// never change observable results.
pub struct GroupContext {
    presentation: GroupPresentation,
    engine: Engine,
    dist_memo: Mutex<HashMap<(u32, u32), Option<u32>>>,
    diam_cache: Mutex<HashMap<Vec<GroupElement>, Option<u32>>>,
}

/// Validate a presentation and construct its context. For the Dehn backend
/// this enumerates the ball of the configured radius by BFS (erroring with
/// `BallTooLarge` past the cap); the free backend is lazy and allocates
/// nothing.
pub fn build_context(presentation: GroupPresentation) -> Result<GroupContext> {
    presentation.validate()?;
    let engine = match presentation.backend {
        Backend::FreeReduction => Engine::Free,
        Backend::DehnSmallCancellation => Engine::Dehn(BallTable::build(&presentation)?),
    };
    Ok(GroupContext {
        presentation,
        engine,
        dist_memo: Mutex::new(HashMap::new()),
        diam_cache: Mutex::new(HashMap::new()),
    })
}

impl GroupContext {
    /// The free group on the given symbols with a lazily enumerated ball.
    pub fn free_group(symbols: &[char], radius: u32) -> Result<GroupContext> {
        build_context(GroupPresentation::free(symbols, radius))
    }

    /// The genus-2 surface group on a, b, c, d with its single length-8
    /// relator, Dehn backend, and the measured thinness constant 2.
    pub fn genus2(radius: u32) -> Result<GroupContext> {
        let mut p = GroupPresentation::free(&['a', 'b', 'c', 'd'], radius);
        p.backend = Backend::DehnSmallCancellation;
        p.relators = vec![words::parse_word("abABcdCD", &p.generators)?];
        p.delta = BigRational::from_integer(BigInt::from(2));
        build_context(p)
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn ball_radius(&self) -> u32 {
        self.presentation.ball_radius
    }

    pub fn delta(&self) -> &BigRational {
        &self.presentation.delta
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { word: Vec::new() }
    }

    /// Normal form of an arbitrary word; `OutOfBall` when the element lies
    /// outside the configured radius.
    pub fn normal_form(&self, raw: &[Letter]) -> Result<GroupElement> {
        match &self.engine {
            Engine::Free => {
                let w = words::free_reduce(raw);
                if w.len() > self.presentation.ball_radius as usize {
                    Err(self.out_of_ball(&w))
                } else {
                    Ok(GroupElement { word: w })
                }
            }
            Engine::Dehn(t) => match t.resolve(raw) {
                Some(id) => Ok(GroupElement {
                    word: t.words_[id as usize].clone(),
                }),
                None => Err(self.out_of_ball(&words::free_reduce(raw))),
            },
        }
    }

    fn out_of_ball(&self, word: &[Letter]) -> Error {
        Error::OutOfBall {
            word: words::format_word(word, &self.presentation.generators),
            radius: self.presentation.ball_radius,
        }
    }

    /// Parse a serialized word into an element of the ball.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let raw = words::parse_word(s, &self.presentation.generators)?;
        self.normal_form(&raw)
    }

    pub fn format_element(&self, e: &GroupElement) -> String {
        words::format_word(&e.word, &self.presentation.generators)
    }

    /// Group multiplication; `OutOfBall` when the product leaves the ball.
    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.normal_form(&words::concat_reduce(&x.word, &y.word))
    }

    /// Group inverse; never leaves the ball (inverses preserve word length).
    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        self.normal_form(&words::invert(&x.word))
    }

    /// Word length of the normal form, i.e. distance to the identity.
    pub fn word_length(&self, x: &GroupElement) -> u32 {
        x.word.len() as u32
    }

    /// Word metric distance, when x^-1 y lies in the ball.
    pub fn distance(&self, x: &GroupElement, y: &GroupElement) -> Result<u32> {
        self.distance_opt(x, y).ok_or_else(|| {
            self.out_of_ball(&words::concat_reduce(
                &words::invert(&x.word),
                &y.word,
            ))
        })
    }

    /// Distance, or `None` when x^-1 y lies outside the ball.
    pub fn distance_opt(&self, x: &GroupElement, y: &GroupElement) -> Option<u32> {
        match &self.engine {
            Engine::Free => {
                let w = words::concat_reduce(&words::invert(&x.word), &y.word);
                if w.len() > self.presentation.ball_radius as usize {
                    None
                } else {
                    Some(w.len() as u32)
                }
            }
            Engine::Dehn(t) => {
                let ix = *t.word_to_id.get(&x.word)?;
                let iy = *t.word_to_id.get(&y.word)?;
                if ix == iy {
                    return Some(0);
                }
                if let Some(&hit) = self.dist_memo.lock().unwrap().get(&(ix, iy)) {
                    return hit;
                }
                let prod = words::concat_reduce(&words::invert(&x.word), &y.word);
                let d = t.resolve(&prod).map(|id| t.words_[id as usize].len() as u32);
                self.dist_memo.lock().unwrap().insert((ix, iy), d);
                d
            }
        }
    }

    /// Max pairwise distance over a tuple; 0 for a single distinct element.
    /// Cached per tuple for the lifetime of the context.
    pub fn diameter(&self, simplex: &[GroupElement]) -> Result<u32> {
        if simplex.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if simplex.len() > 1 {
            if let Some(hit) = self.diam_cache.lock().unwrap().get(simplex) {
                return match hit {
                    Some(d) => Ok(*d),
                    None => Err(self.out_of_ball(&[])),
                };
            }
        }
        let mut best = 0u32;
        let mut oob = false;
        'outer: for i in 0..simplex.len() {
            for j in (i + 1)..simplex.len() {
                match self.distance_opt(&simplex[i], &simplex[j]) {
                    Some(d) => best = best.max(d),
                    None => {
                        oob = true;
                        break 'outer;
                    }
                }
            }
        }
        if simplex.len() > 1 {
            self.diam_cache
                .lock()
                .unwrap()
                .insert(simplex.to_vec(), if oob { None } else { Some(best) });
        }
        if oob {
            Err(self.out_of_ball(&[]))
        } else {
            Ok(best)
        }
    }

    /// Neighbors of x in the Cayley graph, in alphabet order; `None` entries
    /// are neighbors outside the ball.
    pub fn neighbors(&self, x: &GroupElement) -> Vec<Option<GroupElement>> {
        let nletters = 2 * self.presentation.generators.len();
        match &self.engine {
            Engine::Free => (0..nletters)
                .map(|li| {
                    let w = words::concat_reduce(&x.word, &[letter_of_rank(li)]);
                    if w.len() > self.presentation.ball_radius as usize {
                        None
                    } else {
                        Some(GroupElement { word: w })
                    }
                })
                .collect(),
            Engine::Dehn(t) => match t.word_to_id.get(&x.word) {
                Some(&id) => t.adjacency[id as usize]
                    .iter()
                    .map(|n| {
                        n.map(|nid| GroupElement {
                            word: t.words_[nid as usize].clone(),
                        })
                    })
                    .collect(),
                None => vec![None; nletters],
            },
        }
    }

    /// The canonical based geodesic w_{e,x} = [e, v_1, ..., v_d = x]: each step
    /// moves to the ShortLex-least neighbor strictly closer to x. Deterministic
    /// and equivariant by construction of the translated family.
    pub fn based_geodesic(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        if x.word.len() > self.presentation.ball_radius as usize {
            return Err(self.out_of_ball(&x.word));
        }
        let total = x.word.len() as u32;
        let mut path = vec![self.identity()];
        let mut cur = self.identity();
        let mut remaining = total;
        while remaining > 0 {
            let mut best: Option<GroupElement> = None;
            for cand in self.neighbors(&cur).into_iter().flatten() {
                // Candidates outside the ball cannot be strictly closer, and
                // unresolvable distances exceed the ball radius, hence are
                // not strictly closer either; both are skipped soundly.
                if let Some(d) = self.distance_opt(&cand, x) {
                    if d + 1 == remaining {
                        best = match best {
                            None => Some(cand),
                            Some(b) => {
                                if cand.shortlex_cmp(&b) == std::cmp::Ordering::Less {
                                    Some(cand)
                                } else {
                                    Some(b)
                                }
                            }
                        };
                    }
                }
            }
            let step = best.ok_or_else(|| Error::Internal {
                detail: format!(
                    "based geodesic toward {:?} stalled at {:?}",
                    self.format_element(x),
                    self.format_element(&cur)
                ),
            })?;
            path.push(step.clone());
            cur = step;
            remaining -= 1;
        }
        Ok(path)
    }

    /// The canonical geodesic w_{x,y} = x . w_{e, x^-1 y}. Errors `OutOfBall`
    /// when an endpoint, x^-1 y, or a translated vertex leaves the ball.
    pub fn geodesic(&self, x: &GroupElement, y: &GroupElement) -> Result<Vec<GroupElement>> {
        let xin = self.inverse(x)?;
        let based = self.based_geodesic(&self.multiply(&xin, y)?)?;
        based.iter().map(|v| self.multiply(x, v)).collect()
    }

    /// Geodesic hull [Y]: the union of the vertices of w_{y_i, y_j} over index
    /// pairs i < j (a singleton tuple yields itself). Sorted ShortLex, deduped.
    pub fn geodesic_hull(&self, tuple: &[GroupElement]) -> Result<Vec<GroupElement>> {
        if tuple.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let mut set = BTreeSet::new();
        if tuple.len() == 1 {
            set.insert(tuple[0].clone());
        }
        for i in 0..tuple.len() {
            for j in (i + 1)..tuple.len() {
                for v in self.geodesic(&tuple[i], &tuple[j])? {
                    set.insert(v);
                }
            }
        }
        let mut out: Vec<GroupElement> = set.into_iter().collect();
        out.sort_by(|a, b| a.shortlex_cmp(b));
        Ok(out)
    }

    /// Enumerate the ball in ShortLex order (spheres in BFS level order).
    /// Errors `BallTooLarge` past the configured cap.
    pub fn enumerate_ball(&self) -> Result<Vec<GroupElement>> {
        match &self.engine {
            Engine::Dehn(t) => Ok(t
                .words_
                .iter()
                .map(|w| GroupElement { word: w.clone() })
                .collect()),
            Engine::Free => {
                let mut out = vec![self.identity()];
                let mut level = vec![self.identity()];
                for _ in 0..self.presentation.ball_radius {
                    let mut next = Vec::new();
                    for x in &level {
                        for li in 0..2 * self.presentation.generators.len() {
                            let l = letter_of_rank(li);
                            if x.word.last() == Some(&-l) {
                                continue;
                            }
                            let mut w = x.word.clone();
                            w.push(l);
                            next.push(GroupElement { word: w });
                        }
                    }
                    if out.len() + next.len() > self.presentation.ball_cap {
                        return Err(Error::BallTooLarge {
                            cap: self.presentation.ball_cap,
                        });
                    }
                    out.extend(next.iter().cloned());
                    level = next;
                }
                Ok(out)
            }
        }
    }

    /// Sphere sizes |S(0)|, ..., |S(radius)|. For the free backend these are
    /// computed by the closed formula; for the Dehn backend they are the BFS
    /// level counts.
    pub fn sphere_sizes(&self) -> Vec<BigUint> {
        match &self.engine {
            Engine::Dehn(t) => t.sphere_sizes.iter().map(|&n| BigUint::from(n)).collect(),
            Engine::Free => {
                let k = self.presentation.generators.len() as u64;
                let mut out = vec![BigUint::from(1u32)];
                if self.presentation.ball_radius >= 1 {
                    let mut sphere = BigUint::from(2 * k);
                    out.push(sphere.clone());
                    for _ in 2..=self.presentation.ball_radius {
                        sphere *= BigUint::from(2 * k - 1);
                        out.push(sphere.clone());
                    }
                }
                out
            }
        }
    }

    /// Total ball size as an exact integer.
    pub fn ball_size(&self) -> BigUint {
        self.sphere_sizes().iter().sum()
    }

    /// Lower-bound estimate of the hyperbolicity constant: the max over all
    /// geodesic triangles with vertices in the sample ball (canonical family,
    /// sides over index-ordered pairs) of the least eps such that each side
    /// lies in the eps-neighborhood of the union of the other two.
    ///
    /// Requires 2 * sample_radius <= ball_radius so translated triangles stay
    /// computable. Exhaustive; intended for small sample radii.
    pub fn estimate_delta(&self, sample_radius: u32) -> Result<BigRational> {
        if 2 * sample_radius > self.presentation.ball_radius {
            return Err(Error::InvalidInput {
                reason: format!(
                    "estimate_delta requires 2 * sample_radius <= ball_radius ({} > {})",
                    2 * sample_radius,
                    self.presentation.ball_radius
                ),
            });
        }
        let sample: Vec<GroupElement> = match &self.engine {
            Engine::Dehn(t) => t
                .words_
                .iter()
                .filter(|w| w.len() <= sample_radius as usize)
                .map(|w| GroupElement { word: w.clone() })
                .collect(),
            Engine::Free => {
                let mut p = self.presentation.clone();
                p.ball_radius = sample_radius;
                build_context(p)?.enumerate_ball()?
            }
        };
        let mut memo: HashMap<(Vec<Letter>, Vec<Letter>), u32> = HashMap::new();
        let mut best = 0u32;
        for i in 0..sample.len() {
            for j in i..sample.len() {
                for k in j..sample.len() {
                    let x = &sample[i];
                    let xin = self.inverse(x)?;
                    let u = self.multiply(&xin, &sample[j])?;
                    let v = self.multiply(&xin, &sample[k])?;
                    let key = (u.word.clone(), v.word.clone());
                    let eps = match memo.get(&key) {
                        Some(&e) => e,
                        None => {
                            let e = self.triangle_eps(&u, &v)?;
                            memo.insert(key, e);
                            e
                        }
                    };
                    best = best.max(eps);
                }
            }
        }
        Ok(BigRational::from_integer(BigInt::from(best)))
    }

    /// Thinness of the based triangle (e, u, v).
    fn triangle_eps(&self, u: &GroupElement, v: &GroupElement) -> Result<u32> {
        let side_a = self.based_geodesic(u)?;
        let side_b = self.based_geodesic(v)?;
        let side_c = self.geodesic(u, v)?;
        let sides = [&side_a, &side_b, &side_c];
        let mut eps = 0u32;
        for s in 0..3 {
            let others: Vec<&GroupElement> = (0..3)
                .filter(|&t| t != s)
                .flat_map(|t| sides[t].iter())
                .collect();
            for p in sides[s] {
                let mut nearest = u32::MAX;
                for q in &others {
                    if let Some(d) = self.distance_opt(p, q) {
                        nearest = nearest.min(d);
                        if nearest == 0 {
                            break;
                        }
                    }
                }
                if nearest == u32::MAX {
                    return Err(Error::Internal {
                        detail: "triangle thinness: no reachable point on opposite sides".into(),
                    });
                }
                eps = eps.max(nearest);
            }
        }
        Ok(eps)
    }
}
