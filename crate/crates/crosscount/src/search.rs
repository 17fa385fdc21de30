//! Randomized search over odd/odd polygon pairs, an independent monitor for
//! the conjectured crossing bound, reproducible corpora, and the extraction
//! pipeline that turns many disjointness components into seven segments in
//! a rigid configuration.

use std::cell::Cell;
use std::cmp::Reverse;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disjointness::{graph_unchecked, DisjointnessGraph, Side};
use crate::geom::{check_general_position, cross, is_avoiding, orientation, segments_intersect, stabs, GpViolation, Orientation, Point, Role};
use crate::io::{exact_polygon, PairFile};
use crate::polygon::{crossing_total_unchecked, validate_simple};
use crate::ramsey::{es_number, is_transitive_order, lines_form, longest_line_cup_and_cap, longest_monotone, transitive_subtournament, CupCapKind, Line, Tournament};
use crate::structure::{find_associated_pair, verify_associated_pair, AssociatedPair};
use crate::{Point2, Polygon, Rational, Segment2};

/// Denominators of generated coordinates. Primes keep accidental
/// collinearities rare; general position is still checked exactly.
pub const GRID_DENOMINATORS: [i64; 7] = [1, 2, 3, 5, 7, 11, 13];
/// Rejection-sampling attempts before giving up.
pub const MAX_TRIES: usize = 10_000;
pub const DEFAULT_GRID_BOUND: i64 = 10;
/// Steps without improvement before the current instance is replaced.
pub const DEFAULT_KICK_AFTER: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("polygons need at least 3 sides (m={m}, n={n})")]
    TooFewSides { m: usize, n: usize },
    #[error("both polygons must have an odd number of sides (m={m}, n={n})")]
    ParityError { m: usize, n: usize },
    #[error("grid bound must be positive, got {0}")]
    BadGrid(i64),
    #[error("no valid instance after {tries} attempts")]
    GiveUp { tries: usize },
    #[error("general position violated: {0}")]
    GeneralPosition(GpViolation),
    #[error("state file is inconsistent: {0}")]
    BadState(String),
    #[error("{0}")]
    Io(String),
}

fn check_sizes(m: usize, n: usize, odd: bool) -> Result<(), SearchError> {
    if m < 3 || n < 3 {
        return Err(SearchError::TooFewSides { m, n });
    }
    if odd && (m.is_multiple_of(2) || n.is_multiple_of(2)) {
        return Err(SearchError::ParityError { m, n });
    }
    Ok(())
}

/// `mn − max(m, n)`: no odd/odd pair can exceed it.
pub fn parity_bound(m: usize, n: usize) -> usize {
    m * n - m.max(n)
}

/// `mn − (m + n) + 3`, the conjectured maximum for odd/odd pairs.
pub fn conjectured_bound(m: usize, n: usize) -> usize {
    m * n + 3 - (m + n)
}

fn grid_value(rng: &mut ChaCha8Rng, center: Option<&Rational>, grid_bound: i64) -> Rational {
    let d = *GRID_DENOMINATORS.choose(rng).expect("non-empty");
    let limit = grid_bound * d;
    let k = match center {
        None => rng.gen_range(-limit..=limit),
        Some(c) => {
            let radius = (grid_bound / 4).max(1) * d;
            let base = (c * Rational::from_integer(d.into())).floor().to_integer().to_i64().unwrap_or(0);
            (base + rng.gen_range(-radius..=radius)).clamp(-limit, limit)
        }
    };
    Rational::new(k.into(), d.into())
}

fn grid_point(rng: &mut ChaCha8Rng, near: Option<&Point2>, grid_bound: i64) -> Point2 {
    Point::new(grid_value(rng, near.map(|p| &p.x), grid_bound), grid_value(rng, near.map(|p| &p.y), grid_bound))
}

/// Random points sorted by angle around their centroid: a star-shaped
/// polygon whenever the result is simple.
fn random_polygon(k: usize, grid_bound: i64, rng: &mut ChaCha8Rng) -> Option<Polygon> {
    let pts: Vec<Point2> = (0..k).map(|_| grid_point(rng, None, grid_bound)).collect();
    let scale = Rational::from_integer(BigInt::from(k));
    let c = Point::new(
        pts.iter().map(|p| p.x.clone()).sum::<Rational>() / scale.clone(),
        pts.iter().map(|p| p.y.clone()).sum::<Rational>() / scale,
    );
    let half = |v: &Point2| if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) { 0 } else { 1 };
    let mut rel: Vec<(Point2, Point2)> = pts.into_iter().map(|p| (p.minus(&c), p)).collect();
    rel.sort_by(|(u, _), (v, _)| half(u).cmp(&half(v)).then_with(|| Rational::zero().cmp(&cross(u, v))));
    validate_simple(rel.into_iter().map(|(_, p)| p).collect()).ok()
}

fn random_pair(m: usize, n: usize, grid_bound: i64, rng: &mut ChaCha8Rng) -> Result<(Polygon, Polygon), SearchError> {
    for _ in 0..MAX_TRIES {
        let (Some(p), Some(q)) = (random_polygon(m, grid_bound, rng), random_polygon(n, grid_bound, rng)) else { continue };
        if check_general_position(&p, &q).is_ok() {
            return Ok((p, q));
        }
    }
    Err(SearchError::GiveUp { tries: MAX_TRIES })
}

/// A simple pair in general position with coordinates `k/d`, `|k/d| ≤
/// grid_bound`, `d` from [`GRID_DENOMINATORS`]. Deterministic per seed.
pub fn random_instance(m: usize, n: usize, grid_bound: i64, seed: u64) -> Result<(Polygon, Polygon), SearchError> {
    check_sizes(m, n, false)?;
    if grid_bound <= 0 {
        return Err(SearchError::BadGrid(grid_bound));
    }
    random_pair(m, n, grid_bound, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(rename = "P", with = "exact_polygon")]
    pub p: Polygon,
    #[serde(rename = "Q", with = "exact_polygon")]
    pub q: Polygon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub grid_bound: i64,
    pub kick_after: u64,
}

impl SearchConfig {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        SearchConfig { m, n, seed, grid_bound: DEFAULT_GRID_BOUND, kick_after: DEFAULT_KICK_AFTER }
    }
}

/// Resumable hill-climbing state. `best`/`score` is the best instance seen,
/// `current` the instance being perturbed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchState {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub grid_bound: i64,
    pub kick_after: u64,
    pub step: u64,
    pub score: usize,
    pub best: Instance,
    pub best_history: Vec<(u64, usize)>,
    pub current_score: usize,
    pub current: Instance,
    pub stagnant: u64,
    pub kicks: u64,
    /// Position in the ChaCha stream, as a decimal string.
    pub rng_word_pos: String,
}

impl SearchState {
    pub fn start(config: &SearchConfig) -> Result<Self, SearchError> {
        let SearchConfig { m, n, seed, grid_bound, kick_after } = *config;
        check_sizes(m, n, true)?;
        if grid_bound <= 0 {
            return Err(SearchError::BadGrid(grid_bound));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = random_pair(m, n, grid_bound, &mut rng)?;
        let score = crossing_total_unchecked(&p, &q);
        let inst = Instance { p, q };
        Ok(SearchState {
            seed,
            m,
            n,
            grid_bound,
            kick_after,
            step: 0,
            score,
            best: inst.clone(),
            best_history: vec![(0, score)],
            current_score: score,
            current: inst,
            stagnant: 0,
            kicks: 0,
            rng_word_pos: rng.get_word_pos().to_string(),
        })
    }

    fn rng(&self) -> Result<ChaCha8Rng, SearchError> {
        let pos: u128 = self.rng_word_pos.parse().map_err(|_| SearchError::BadState(format!("rng_word_pos {:?}", self.rng_word_pos)))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_word_pos(pos);
        Ok(rng)
    }

    pub fn at_parity_bound(&self) -> bool {
        self.score >= parity_bound(self.m, self.n)
    }

    /// Runs until `step == budget` or the parity bound is reached.
    pub fn advance(&mut self, budget: u64) -> Result<(), SearchError> {
        let mut rng = self.rng()?;
        while self.step < budget && !self.at_parity_bound() {
            self.one_step(&mut rng);
        }
        self.rng_word_pos = rng.get_word_pos().to_string();
        Ok(())
    }

    fn one_step(&mut self, rng: &mut ChaCha8Rng) {
        self.step += 1;
        if self.stagnant >= self.kick_after {
            self.stagnant = 0;
            self.kicks += 1;
            if let Ok((p, q)) = random_pair(self.m, self.n, self.grid_bound, rng) {
                self.current_score = crossing_total_unchecked(&p, &q);
                self.current = Instance { p, q };
                self.record();
            }
            return;
        }
        let which = rng.gen_range(0..self.m + self.n);
        let (target, other, idx) = if which < self.m {
            (&self.current.p, &self.current.q, which)
        } else {
            (&self.current.q, &self.current.p, which - self.m)
        };
        let mut verts = target.vertices().to_vec();
        verts[idx] = grid_point(rng, Some(&verts[idx]), self.grid_bound);
        let Ok(moved) = validate_simple(verts) else {
            self.stagnant += 1;
            return;
        };
        let (p, q) = if which < self.m { (moved, other.clone()) } else { (other.clone(), moved) };
        if check_general_position(&p, &q).is_err() {
            self.stagnant += 1;
            return;
        }
        let score = crossing_total_unchecked(&p, &q);
        if score < self.current_score {
            self.stagnant += 1;
            return;
        }
        if score > self.current_score {
            self.stagnant = 0;
        } else {
            self.stagnant += 1;
        }
        self.current_score = score;
        self.current = Instance { p, q };
        self.record();
    }

    fn record(&mut self) {
        if self.current_score > self.score {
            self.score = self.current_score;
            self.best = self.current.clone();
            self.best_history.push((self.step, self.score));
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let state: SearchState = serde_json::from_str(text).map_err(|e| SearchError::BadState(e.to_string()))?;
        state.rng()?;
        let recount = |i: &Instance| crossing_total_unchecked(&i.p, &i.q);
        if recount(&state.best) != state.score || recount(&state.current) != state.current_score {
            return Err(SearchError::BadState("stored scores do not match the instances".into()));
        }
        for inst in [&state.best, &state.current] {
            check_general_position(&inst.p, &inst.q).map_err(SearchError::GeneralPosition)?;
            if inst.p.len() != state.m || inst.q.len() != state.n {
                return Err(SearchError::BadState("instance sizes differ from m, n".into()));
            }
        }
        Ok(state)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SearchError> {
        write_file(path.as_ref(), &self.to_json())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SearchError> {
        Self::from_json(&read_file(path.as_ref())?)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), SearchError> {
    fs::write(path, text).map_err(|e| SearchError::Io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, SearchError> {
    fs::read_to_string(path).map_err(|e| SearchError::Io(format!("{}: {e}", path.display())))
}

/// Hill climbing with plateau moves and restart kicks; stops early at the
/// parity bound.
pub fn maximize_crossings(m: usize, n: usize, budget: u64, seed: u64) -> Result<SearchState, SearchError> {
    maximize_with(&SearchConfig::new(m, n, seed), budget)
}

pub fn maximize_with(config: &SearchConfig, budget: u64) -> Result<SearchState, SearchError> {
    let mut state = SearchState::start(config)?;
    state.advance(budget)?;
    Ok(state)
}

/// Independent runs in parallel; the best score wins, ties go to the lowest
/// seed.
pub fn maximize_many(config: &SearchConfig, seeds: &[u64], budget: u64) -> Result<SearchState, SearchError> {
    let runs: Vec<SearchState> =
        seeds.par_iter().map(|&seed| maximize_with(&SearchConfig { seed, ..*config }, budget)).collect::<Result<_, _>>()?;
    runs.into_iter().max_by_key(|s| (s.score, Reverse(s.seed))).ok_or(SearchError::BadState("no seeds given".into()))
}

/// Crossing count re-derived from orientation signs alone, sharing no code
/// with the main counter.
pub fn recount(p: &Polygon, q: &Polygon) -> usize {
    let opposite = |a: Orientation, b: Orientation| a.sign() * b.sign() < 0;
    let mut total = 0;
    for s in p.sides() {
        for t in q.sides() {
            let o1 = orientation(s.a(), s.b(), t.a());
            let o2 = orientation(s.a(), s.b(), t.b());
            let o3 = orientation(t.a(), t.b(), s.a());
            let o4 = orientation(t.a(), t.b(), s.b());
            if opposite(o1, o2) && opposite(o3, o4) {
                total += 1;
            }
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MonitorVerdict {
    WithinBound { score: usize, bound: usize },
    /// Survived the recount; needs human review before anyone believes it.
    CandidateCounterexample { recounted: usize, bound: usize, instance: String },
    /// The claimed score did not survive the recount.
    RejectedClaim { claimed: usize, recounted: usize },
}

impl MonitorVerdict {
    pub fn is_within_bound(&self) -> bool {
        matches!(self, MonitorVerdict::WithinBound { .. })
    }
}

pub fn monitor_instance(p: &Polygon, q: &Polygon, claimed: usize) -> Result<MonitorVerdict, SearchError> {
    let (m, n) = (p.len(), q.len());
    check_sizes(m, n, true)?;
    let bound = conjectured_bound(m, n);
    let recounted = recount(p, q);
    if recounted != claimed {
        return Ok(MonitorVerdict::RejectedClaim { claimed, recounted });
    }
    if recounted <= bound {
        return Ok(MonitorVerdict::WithinBound { score: recounted, bound });
    }
    let instance = PairFile::new(p.clone(), q.clone()).to_json();
    Ok(MonitorVerdict::CandidateCounterexample { recounted, bound, instance })
}

pub fn conjecture_monitor(state: &SearchState) -> Result<MonitorVerdict, SearchError> {
    monitor_instance(&state.best.p, &state.best.q, state.score)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub count: usize,
    pub m_range: RangeInclusive<usize>,
    pub n_range: RangeInclusive<usize>,
    pub seed: u64,
    pub grid_bound: i64,
    /// Hill-climbing steps applied to every other entry, pushing those
    /// towards many components.
    pub climb_steps: u64,
}

impl CorpusSpec {
    pub fn new(count: usize, m_range: RangeInclusive<usize>, n_range: RangeInclusive<usize>, seed: u64) -> Self {
        CorpusSpec { count, m_range, n_range, seed, grid_bound: DEFAULT_GRID_BOUND, climb_steps: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: usize,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub climbed: bool,
    pub crossings: usize,
    #[serde(flatten)]
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub format_version: u32,
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
}

fn odd_in(range: &RangeInclusive<usize>) -> Vec<usize> {
    range.clone().filter(|k| k % 2 == 1 && *k >= 3).collect()
}

/// Hill climb on (components, crossings), so that corpus entries exercise
/// the lemmas that need several components.
fn climb_components(mut p: Polygon, mut q: Polygon, grid_bound: i64, steps: u64, rng: &mut ChaCha8Rng) -> (Polygon, Polygon) {
    let key = |p: &Polygon, q: &Polygon| {
        let g = graph_unchecked(p, q);
        let largest = g.components().iter().map(Vec::len).max().unwrap_or(0);
        (g.component_count(), Reverse(largest), crossing_total_unchecked(p, q))
    };
    let mut best = key(&p, &q);
    let (m, n) = (p.len(), q.len());
    for _ in 0..steps {
        let which = rng.gen_range(0..m + n);
        let (target, idx) = if which < m { (&p, which) } else { (&q, which - m) };
        let mut verts = target.vertices().to_vec();
        verts[idx] = grid_point(rng, Some(&verts[idx]), grid_bound);
        let Ok(moved) = validate_simple(verts) else { continue };
        let (np, nq) = if which < m { (moved, q.clone()) } else { (p.clone(), moved) };
        if check_general_position(&np, &nq).is_err() {
            continue;
        }
        let k = key(&np, &nq);
        if k >= best {
            best = k;
            (p, q) = (np, nq);
        }
    }
    (p, q)
}

/// Deterministic corpus of odd/odd instances in general position.
pub fn build_corpus(spec: &CorpusSpec) -> Result<Corpus, SearchError> {
    let (ms, ns) = (odd_in(&spec.m_range), odd_in(&spec.n_range));
    if ms.is_empty() || ns.is_empty() {
        return Err(SearchError::ParityError { m: *spec.m_range.start(), n: *spec.n_range.start() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let plan: Vec<(usize, usize, usize, u64)> =
        (0..spec.count).map(|id| (id, *ms.choose(&mut rng).unwrap(), *ns.choose(&mut rng).unwrap(), rng.gen())).collect();
    let entries = plan
        .into_par_iter()
        .map(|(id, m, n, seed)| {
            let climbed = id % 2 == 1 && spec.climb_steps > 0;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, q) = random_pair(m, n, spec.grid_bound, &mut rng)?;
            let (p, q) = if climbed { climb_components(p, q, spec.grid_bound, spec.climb_steps, &mut rng) } else { (p, q) };
            let crossings = crossing_total_unchecked(&p, &q);
            Ok(CorpusEntry { id, m, n, seed, climbed, crossings, instance: Instance { p, q } })
        })
        .collect::<Result<Vec<_>, SearchError>>()?;
    Ok(Corpus { format_version: crate::io::FORMAT_VERSION, seed: spec.seed, entries })
}

impl Corpus {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let corpus: Corpus = serde_json::from_str(text).map_err(|e| SearchError::BadState(e.to_string()))?;
        if corpus.format_version != crate::io::FORMAT_VERSION {
            return Err(SearchError::BadState(format!("format version {}", corpus.format_version)));
        }
        Ok(corpus)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<PathBuf, SearchError> {
        write_file(path.as_ref(), &self.to_json())?;
        Ok(path.as_ref().to_path_buf())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SearchError> {
        Self::from_json(&read_file(path.as_ref())?)
    }
}

/// The constants of the extraction argument, as exact decimal strings or
/// closed forms where the value has astronomically many digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constants {
    pub c6: String,
    pub c5: String,
    pub c4: String,
    pub c3: String,
    pub c2: String,
    pub c1: String,
}

pub fn constants() -> Constants {
    let c6 = 6usize;
    let c5 = c6 * c6 + 1;
    let c4 = es_number(c5, c5).expect("c5 ≥ 2") + 1u8;
    let exponent = &c4 - 1u8;
    Constants {
        c6: c6.to_string(),
        c5: c5.to_string(),
        c4: c4.to_string(),
        c3: format!("2^{exponent}"),
        c2: format!("2^{exponent} + 5"),
        c1: format!("8 * (2^{exponent} + 5)"),
    }
}

/// Desk-scale stand-ins for the constants, used as loop bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineParams {
    /// At most this many components seed the first stage.
    pub target_components: usize,
    /// Length of the line cup or cap kept.
    pub cup_size: usize,
    /// Length of the final monotone-slope run kept.
    pub monotone_len: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams { target_components: usize::MAX, cup_size: 37, monotone_len: 7 }
    }
}

pub const STAGE_NAMES: [&str; 11] = [
    "components",
    "component_pairs",
    "thinned_on_q",
    "associated",
    "thinned_on_p",
    "hooking_majority",
    "star_filter",
    "non_avoiding_clique",
    "transitive_tournament",
    "line_cup_cap",
    "monotone_slopes",
];

/// Seven sides, pairwise disjoint and non-avoiding, each stabbing all later
/// ones, whose lines form a cup or cap and whose slopes are monotone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SevenConfig {
    pub role: Role,
    /// Side indices in stabbing order.
    pub sides: Vec<usize>,
    pub kind: CupCapKind,
    pub decreasing_slopes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub m: usize,
    pub n: usize,
    pub stage_names: Vec<&'static str>,
    pub stage_sizes: Vec<usize>,
    /// Polygon whose sides survive past the hooking-majority stage.
    pub primary_role: Role,
    pub star_centre: Option<usize>,
    pub red_removed: usize,
    /// Shear `x ↦ x + k·y` applied before building lines, 0 if none.
    pub shear: i64,
    pub stabbing_order: Vec<usize>,
    pub cup_cap_kind: Option<CupCapKind>,
    pub cup_cap_sides: Vec<usize>,
    pub monotone_sides: Vec<usize>,
    pub seven_config: Option<SevenConfig>,
    pub certificates_checked: usize,
    pub failures: Vec<String>,
    pub constants: Constants,
}

impl PipelineReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Pair of consecutive sides of the primary polygon: primary side and its
/// companion, plus the associated pair with the first role on `Q`.
#[derive(Clone)]
struct Candidate {
    q_primary: usize,
    q_companion: usize,
    ap: AssociatedPair<Rational>,
}

/// Sides `{a, b}` of a cycle of length `len` that are consecutive; start
/// index of the pair in cyclic order.
fn cyclic_start(a: usize, b: usize, len: usize) -> usize {
    if b == (a + 1) % len {
        a
    } else {
        b
    }
}

/// Keeps every second pair in cyclic order, then drops any survivor that
/// still shares a side with an earlier one (the wrap-around case).
fn thin<X: Clone>(items: Vec<X>, sides: impl Fn(&X) -> (usize, usize), len: usize) -> Vec<X> {
    let mut sorted = items;
    sorted.sort_by_key(|x| {
        let (a, b) = sides(x);
        cyclic_start(a, b, len)
    });
    let mut used = vec![false; len];
    let mut out = Vec::new();
    for x in sorted.into_iter().step_by(2) {
        let (a, b) = sides(&x);
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            out.push(x);
        }
    }
    out
}

struct Ctx<'a> {
    p: &'a Polygon,
    q: &'a Polygon,
    g: &'a DisjointnessGraph,
    report: PipelineReport,
}

impl Ctx<'_> {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.report.certificates_checked += 1;
        if !ok {
            self.report.failures.push(what());
        }
    }

    fn push(&mut self, size: usize) {
        self.report.stage_sizes.push(size);
    }
}

/// Runs the extraction stages as far as the instance allows, recording how
/// many objects survive each and re-verifying every certificate.
pub fn pipeline_extract(p: &Polygon, q: &Polygon, params: &PipelineParams) -> Result<PipelineReport, SearchError> {
    let (m, n) = (p.len(), q.len());
    check_sizes(m, n, true)?;
    check_general_position(p, q).map_err(SearchError::GeneralPosition)?;
    let g = graph_unchecked(p, q);
    let report = PipelineReport {
        m,
        n,
        stage_names: STAGE_NAMES.to_vec(),
        stage_sizes: Vec::new(),
        primary_role: Role::Q,
        star_centre: None,
        red_removed: 0,
        shear: 0,
        stabbing_order: Vec::new(),
        cup_cap_kind: None,
        cup_cap_sides: Vec::new(),
        monotone_sides: Vec::new(),
        seven_config: None,
        certificates_checked: 0,
        failures: Vec::new(),
        constants: constants(),
    };
    let mut ctx = Ctx { p, q, g: &g, report };
    run_stages(&mut ctx, params);
    while ctx.report.stage_sizes.len() < STAGE_NAMES.len() {
        ctx.push(0);
    }
    Ok(ctx.report)
}

fn run_stages(ctx: &mut Ctx<'_>, params: &PipelineParams) {
    let (p, q, g) = (ctx.p, ctx.q, ctx.g);
    let (m, n) = (p.len(), q.len());
    let comp_q = |i: usize| g.component(Side::q(i % n));
    let comp_p = |i: usize| g.component(Side::p(i % m));
    ctx.push(g.component_count());

    // One consecutive pair of Q per component, primary side in it.
    let mut labels: Vec<usize> = (0..n).map(comp_q).collect();
    labels.sort_unstable();
    labels.dedup();
    let seeds: Vec<usize> = labels
        .into_iter()
        .filter_map(|j| (0..n).find(|&i| comp_q(i) == j && comp_q(i + 1) != j))
        .take(params.target_components)
        .collect();
    ctx.push(seeds.len());

    let thinned = thin(seeds, |&i| (i, (i + 1) % n), n);
    ctx.push(thinned.len());

    let swapped = g.swapped();
    let mut cands = Vec::new();
    for &i in &thinned {
        match find_associated_pair(q, i, p, &swapped) {
            Ok(ap) => {
                ctx.check(verify_associated_pair(&ap, q, p), || format!("associated pair of q{i} fails its recheck"));
                cands.push(Candidate { q_primary: i, q_companion: (i + 1) % n, ap });
            }
            Err(e) => ctx.report.failures.push(format!("no associated pair for q{i}, q{}: {e}", (i + 1) % n)),
        }
    }
    ctx.push(cands.len());

    let cands = thin(cands, |c| (c.ap.q_index, c.ap.q_partner(m)), m);
    ctx.push(cands.len());

    // With Q first, hooking_p means the Q pair hooks; hooking_q means the
    // associated P pair does.
    let q_hooking = cands.iter().filter(|c| c.ap.hooking_p).count();
    let p_hooking = cands.iter().filter(|c| c.ap.hooking_q).count();
    let (role, pairs): (Role, Vec<(usize, usize)>) = if q_hooking >= p_hooking {
        (Role::Q, cands.iter().filter(|c| c.ap.hooking_p).map(|c| (c.q_primary, c.q_companion)).collect())
    } else {
        (Role::P, cands.iter().filter(|c| c.ap.hooking_q).map(|c| (c.ap.q_index, c.ap.q_partner(m))).collect())
    };
    ctx.report.primary_role = role;
    ctx.push(pairs.len());

    let (poly, comp): (&Polygon, &dyn Fn(usize) -> usize) = match role {
        Role::Q => (q, &comp_q),
        _ => (p, &comp_p),
    };
    let edges: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (comp(a), comp(b))).collect();
    for (x, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[x + 1..] {
            let distinct = a != c && a != d && b != c && b != d;
            ctx.check(!distinct, || format!("hooking pairs on components {a}-{b} and {c}-{d} are disjoint edges"));
        }
    }
    let mut incidence: Vec<(usize, Reverse<usize>)> = Vec::new();
    for &(a, b) in &edges {
        for v in [a, b] {
            match incidence.iter_mut().find(|(_, Reverse(l))| *l == v) {
                Some((count, _)) => *count += 1,
                None => incidence.push((1, Reverse(v))),
            }
        }
    }
    let centre = incidence.iter().max().map(|&(_, Reverse(v))| v);
    ctx.report.star_centre = centre;
    let star: Vec<usize> = match centre {
        Some(v) if pairs.len() > 1 => pairs.iter().filter(|&&(a, b)| comp(a) != v && comp(b) == v).map(|&(a, _)| a).collect(),
        _ => Vec::new(),
    };
    ctx.push(star.len());
    let sides = poly.sides();

    // Red edges join avoiding or consecutive sides; removing both ends of
    // a red edge twice must clear them all.
    let red = |a: usize, b: usize| poly.consecutive(a, b) || is_avoiding(&sides[a], &sides[b]);
    let mut clique = star;
    clique.sort_unstable();
    let mut removed = 0;
    loop {
        let hit = clique.iter().enumerate().find_map(|(x, &a)| clique[x + 1..].iter().find(|&&b| red(a, b)).map(|&b| (a, b)));
        let Some((a, b)) = hit else { break };
        clique.retain(|&s| s != a && s != b);
        removed += 2;
    }
    ctx.report.red_removed = removed;
    ctx.check(removed <= 4, || format!("{removed} sides removed for red edges; a red matching of size three exists"));
    for (x, &a) in clique.iter().enumerate() {
        for &b in &clique[x + 1..] {
            let ok = !red(a, b) && !segments_intersect(&sides[a], &sides[b]);
            ctx.check(ok, || format!("sides {a} and {b} are not disjoint and non-avoiding"));
        }
    }
    ctx.push(clique.len());

    let k = clique.len();
    let stab_failed = Cell::new(false);
    let t = Tournament::from_fn(k, |x, y| {
        stabs(&sides[clique[x]], &sides[clique[y]]).unwrap_or_else(|_| {
            stab_failed.set(true);
            false
        })
    });
    ctx.check(!stab_failed.get(), || "stabbing undefined between two clique sides".into());
    let order = transitive_subtournament(&t);
    let transitive = is_transitive_order(&t, &order)
        && order.windows(2).all(|w| stabs(&sides[clique[w[0]]], &sides[clique[w[1]]]) == Ok(true));
    ctx.check(transitive, || "stabbing order is not transitive".into());
    let order: Vec<usize> = order.into_iter().map(|x| clique[x]).collect();
    ctx.report.stabbing_order = order.clone();
    ctx.push(order.len());
    if order.is_empty() {
        return;
    }

    let shear = (0i64..).find(|&s| order.iter().all(|&i| sheared(&sides[i], s).is_some())).unwrap();
    ctx.report.shear = shear;
    let lines: Vec<Line<Rational>> = order.iter().map(|&i| sheared(&sides[i], shear).unwrap()).collect();
    let (cup, cap) = match longest_line_cup_and_cap(&lines) {
        Ok(cc) => cc,
        Err(e) => {
            ctx.report.failures.push(format!("lines through the ordered sides are degenerate: {e}"));
            return;
        }
    };
    let (kind, chain) = if cup.len() >= cap.len() { (CupCapKind::Cup, cup) } else { (CupCapKind::Cap, cap) };
    let chain: Vec<usize> = chain.into_iter().take(params.cup_size).collect();
    ctx.check(lines_form(kind, &lines, &chain), || format!("lines do not form a {kind:?}"));
    ctx.report.cup_cap_kind = Some(kind);
    ctx.report.cup_cap_sides = chain.iter().map(|&x| order[x]).collect();
    ctx.push(chain.len());

    // Chain positions index `order`, which is already the stabbing order.
    let mut by_stab = chain.clone();
    by_stab.sort_unstable();
    let slopes: Vec<Rational> = by_stab.iter().map(|&x| lines[x].slope.clone()).collect();
    let mono = longest_monotone(&slopes).expect("slopes of a cup are distinct");
    let decreasing = mono.decreasing.len() >= mono.increasing.len();
    let run: Vec<usize> = if decreasing { mono.decreasing } else { mono.increasing }
        .into_iter()
        .take(params.monotone_len)
        .map(|k| by_stab[k])
        .collect();
    let monotone = run.windows(2).all(|w| {
        let (a, b) = (&lines[w[0]].slope, &lines[w[1]].slope);
        if decreasing { a > b } else { a < b }
    });
    ctx.check(monotone, || "slope run is not monotone".into());
    ctx.report.monotone_sides = run.iter().map(|&x| order[x]).collect();
    ctx.push(run.len());

    if run.len() >= 7 {
        let seven: Vec<usize> = run[..7].to_vec();
        let mut by_slope = seven.clone();
        by_slope.sort_by(|&a, &b| lines[a].slope.cmp(&lines[b].slope));
        let stab_ok = seven.iter().enumerate().all(|(x, &a)| seven[x + 1..].iter().all(|&b| stabs(&sides[order[a]], &sides[order[b]]) == Ok(true)));
        ctx.check(stab_ok && lines_form(kind, &lines, &by_slope), || "seven-segment configuration fails its recheck".into());
        ctx.report.seven_config =
            Some(SevenConfig { role, sides: seven.iter().map(|&x| order[x]).collect(), kind, decreasing_slopes: decreasing });
    }
}

/// Line through a segment after the shear `(x, y) ↦ (x + k·y, y)`, or
/// `None` if it is vertical.
fn sheared(s: &Segment2, k: i64) -> Option<Line<Rational>> {
    let k = Rational::from_integer(k.into());
    let map = |v: &Point2| Point::new(v.x.clone() + k.clone() * v.y.clone(), v.y.clone());
    let (a, b) = (map(s.a()), map(s.b()));
    if a.x == b.x {
        return None;
    }
    let slope = (b.y.clone() - a.y.clone()) / (b.x.clone() - a.x.clone());
    let intercept = a.y.clone() - slope.clone() * a.x.clone();
    Some(Line::new(slope, intercept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_extremal, ConstructionSpec};
    use crate::polygon::crossing_count;

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        let (p, q) = random_instance(3, 3, 10, 1).unwrap();
        assert!(check_general_position(&p, &q).is_ok());
        assert_eq!(random_instance(3, 3, 10, 1).unwrap(), (p, q));
        assert_ne!(random_instance(5, 7, 10, 2).unwrap(), random_instance(5, 7, 10, 3).unwrap());
        assert_eq!(random_instance(2, 3, 10, 1), Err(SearchError::TooFewSides { m: 2, n: 3 }));
    }

    #[test]
    fn star_of_david_is_reached() {
        let state = maximize_crossings(3, 3, 100_000, 1).unwrap();
        assert_eq!(state.score, 6);
        assert_eq!(crossing_count(&state.best.p, &state.best.q).unwrap().total, 6);
        assert!(conjecture_monitor(&state).unwrap().is_within_bound());
    }

    #[test]
    fn resuming_matches_an_uninterrupted_run() {
        let config = SearchConfig { kick_after: 50, ..SearchConfig::new(5, 5, 9) };
        let whole = maximize_with(&config, 400).unwrap();
        let mut half = maximize_with(&config, 150).unwrap();
        half = SearchState::from_json(&half.to_json()).unwrap();
        half.advance(400).unwrap();
        assert_eq!(half, whole);
    }

    #[test]
    fn tampered_claims_are_rejected() {
        let (p, q) = build_extremal(&ConstructionSpec::infer(5, 5).unwrap()).unwrap();
        assert_eq!(monitor_instance(&p, &q, 18).unwrap(), MonitorVerdict::WithinBound { score: 18, bound: 18 });
        assert_eq!(monitor_instance(&p, &q, 21).unwrap(), MonitorVerdict::RejectedClaim { claimed: 21, recounted: 18 });
    }

    #[test]
    fn constants_echo() {
        let c = constants();
        assert_eq!(c.c5, "37");
        assert_eq!(c.c4, "112186277816662845433");
        assert_eq!(c.c3, "2^112186277816662845432");
    }

    #[test]
    fn thinning_drops_wrapping_overlap() {
        // Pairs starting at 0, 1, 2 on a triangle: keep 0 and 2, but 2 wraps
        // onto side 0.
        assert_eq!(thin(vec![0, 1, 2], |&i| (i, (i + 1) % 3), 3), vec![0]);
        assert_eq!(thin(vec![4, 0, 2], |&i| (i, (i + 1) % 6), 6), vec![0, 4]);
    }

    #[test]
    fn single_component_pipeline() {
        let (p, q) = random_instance(3, 3, 10, 4).unwrap();
        let g = graph_unchecked(&p, &q);
        let r = pipeline_extract(&p, &q, &PipelineParams::default()).unwrap();
        assert_eq!(r.stage_sizes[0], g.component_count());
        assert_eq!(r.stage_sizes.len(), STAGE_NAMES.len());
        assert!(r.stage_sizes.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.verified(), "{:?}", r.failures);
    }
}
