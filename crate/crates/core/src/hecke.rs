//! (p, q)-Hecke orbits on positive definite matrices: the S-unit gap search and
//! a bidirectional beam search over words in `GL_g^τ(ℤ[1/pq])`.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::moduli::{normal_form_matrix, RealType};

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SUnitConfig {
    pub p: u64,
    pub q: u64,
    pub exponent_bound: u32,
}

impl SUnitConfig {
    pub fn new(p: u64, q: u64, exponent_bound: u32) -> Result<Self> {
        for x in [p, q] {
            if x == 2 || !is_prime(x) {
                return Err(Error::InvalidConfig(format!("{x} is not an odd prime")));
            }
        }
        if p == q {
            return Err(Error::InvalidConfig("p and q must be distinct".into()));
        }
        Ok(Self { p, q, exponent_bound })
    }

    fn unit(&self, n: i64, m: i64) -> BigRational {
        pow(self.p, n) * pow(self.q, m)
    }

    /// Whether `x` is `±p^a q^b`.
    pub fn is_s_unit(&self, x: &BigRational) -> bool {
        if x.is_zero() {
            return false;
        }
        let strip = |mut v: BigInt| {
            for pr in [self.p, self.q] {
                let pb = BigInt::from(pr);
                while (&v % &pb).is_zero() {
                    v /= &pb;
                }
            }
            v.abs().is_one()
        };
        strip(x.numer().clone()) && strip(x.denom().clone())
    }

    /// Whether every denominator is a product of `p` and `q`.
    pub fn is_s_integral(&self, x: &BigRational) -> bool {
        let mut d = x.denom().clone();
        for pr in [self.p, self.q] {
            let pb = BigInt::from(pr);
            while (&d % &pb).is_zero() {
                d /= &pb;
            }
        }
        d.is_one()
    }
}

fn pow(base: u64, e: i64) -> BigRational {
    let b = BigInt::from(base).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

/// Closest `p^n q^m` to the target over `|n|, |m| ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SUnitGap {
    pub n: i64,
    pub m: i64,
    pub value: BigRational,
    pub distance: BigRational,
    pub within_tolerance: bool,
}

/// Exhaustive exact search; ties go to the lexicographically smallest `(n, m)`.
pub fn sunit_gap(cfg: &SUnitConfig, target: &BigRational, tolerance: &BigRational) -> Result<SUnitGap> {
    if !target.is_positive() {
        return Err(Error::InvalidConfig("target must be positive".into()));
    }
    if !tolerance.is_positive() {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    let b = cfg.exponent_bound as i64;
    let mut best: Option<(BigRational, i64, i64, BigRational)> = None;
    for n in -b..=b {
        for m in -b..=b {
            let v = cfg.unit(n, m);
            let d = (&v - target).abs();
            if best.as_ref().map_or(true, |(bd, ..)| d < *bd) {
                best = Some((d, n, m, v));
            }
        }
    }
    let (distance, n, m, value) = best.expect("the search box is nonempty");
    Ok(SUnitGap {
        n,
        m,
        within_tolerance: &distance < tolerance,
        value,
        distance,
    })
}

/// A named element of `GL_g(ℤ[1/pq])` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub matrix: RatMatrix,
    pub inverse: RatMatrix,
}

fn mod2(x: &BigRational) -> Option<u8> {
    if x.denom().is_even() {
        return None;
    }
    Some(u8::from(x.numer().is_odd()))
}

/// `TᵗM(τ)T ≡ M(τ) mod 2` for `T` with odd denominators.
pub fn preserves_type(t: &RatMatrix, ty: &RealType) -> Result<bool> {
    let m = normal_form_matrix(ty)?.to_rational();
    let lhs = &(&t.transpose() * &m) * t;
    for (a, b) in lhs.entries().iter().zip(m.entries()) {
        match (mod2(a), mod2(b)) {
            (Some(x), Some(y)) if x == y => {}
            (Some(_), Some(_)) => return Ok(false),
            _ => return Err(Error::InvalidConfig("even denominator".into())),
        }
    }
    Ok(true)
}

fn elementary(g: usize, i: usize, j: usize, c: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(g);
    m.set(i, j, BigRational::from_integer(BigInt::from(c)));
    m
}

fn scaling(g: usize, x: BigRational) -> RatMatrix {
    let mut m = RatMatrix::identity(g);
    m.set(0, 0, x);
    m
}

/// Elementary matrices `I + cE_ij` (`c ∈ {±1, ±2}`) preserving the type, the
/// scalings `diag(x, 1, …, 1)` for `x ∈ {p^{±1}, q^{±1}, -1}`. No claim is made
/// that these generate the whole group.
pub fn gl_tau_s_generators(ty: &RealType, cfg: &SUnitConfig) -> Result<Vec<Generator>> {
    let g = ty.g;
    let mut out = Vec::new();
    for i in 0..g {
        for j in 0..g {
            if i == j {
                continue;
            }
            for c in [1i64, -1, 2, -2] {
                let m = elementary(g, i, j, c);
                if preserves_type(&m, ty)? {
                    out.push(Generator {
                        name: format!("E{i}{j}({c})"),
                        matrix: m,
                        inverse: elementary(g, i, j, -c),
                    });
                }
            }
        }
    }
    for (name, x) in [
        (format!("D({})", cfg.p), pow(cfg.p, 1)),
        (format!("D(1/{})", cfg.p), pow(cfg.p, -1)),
        (format!("D({})", cfg.q), pow(cfg.q, 1)),
        (format!("D(1/{})", cfg.q), pow(cfg.q, -1)),
        ("D(-1)".to_string(), -BigRational::one()),
    ] {
        let inv = x.recip();
        out.push(Generator {
            name,
            matrix: scaling(g, x),
            inverse: scaling(g, inv),
        });
    }
    for gen in &out {
        if !preserves_type(&gen.matrix, ty)? {
            return Err(Error::Postcondition(format!("{} leaves the type class", gen.name)));
        }
    }
    Ok(out)
}

/// Run-length encoded word `(generator index, repetitions)`.
pub type Word = Vec<(usize, u32)>;

fn compress(letters: &[usize]) -> Word {
    let mut out: Word = Vec::new();
    for &l in letters {
        match out.last_mut() {
            Some((g, e)) if *g == l => *e += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSample {
    pub word: Word,
    pub matrix: RatMatrix,
    pub image: RatMatrix,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResult {
    pub best: OrbitSample,
    /// Best distance after each search level, merged over restarts.
    pub trace: Vec<f64>,
    pub expansions: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub beam_width: usize,
    pub max_depth: usize,
    pub restarts: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            beam_width: 1024,
            max_depth: 8,
            restarts: 4,
        }
    }
}

fn to_f64_matrix(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64())
}

fn matrix_log(m: &RatMatrix) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(to_f64_matrix(m));
    let logs = eig.eigenvalues.map(|x| x.max(f64::MIN_POSITIVE).ln());
    &eig.eigenvectors * DMatrix::from_diagonal(&logs) * eig.eigenvectors.transpose()
}

/// Log-Euclidean distance `‖log A − log B‖_F`.
pub fn log_euclidean_distance(a: &RatMatrix, b: &RatMatrix) -> f64 {
    (matrix_log(a) - matrix_log(b)).norm()
}

fn act(t: &RatMatrix, n: &RatMatrix) -> RatMatrix {
    &(&t.transpose() * n) * t
}

#[derive(Clone)]
struct Node {
    letters: Vec<usize>,
    image: RatMatrix,
    distance: f64,
}

fn shortlex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn node_order(a: &Node, b: &Node) -> Ordering {
    a.distance
        .total_cmp(&b.distance)
        .then_with(|| shortlex(&a.letters, &b.letters))
}

struct Run {
    best_letters: Vec<usize>,
    best_distance: f64,
    exact: bool,
    trace: Vec<f64>,
    expansions: u64,
}

/// One bidirectional beam search: forward from `start`, backward from `target`
/// with inverse generators, meeting on exactly equal images.
fn beam_run(
    gens: &[Generator],
    start: &RatMatrix,
    target: &RatMatrix,
    prefix: &[usize],
    budget: u64,
    params: &SearchParams,
) -> Run {
    let log_target = matrix_log(target);
    let log_start = matrix_log(start);
    let dist_to_target = |m: &RatMatrix| (matrix_log(m) - &log_target).norm();
    let dist_to_start = |m: &RatMatrix| (matrix_log(m) - &log_start).norm();

    let mut origin = start.clone();
    for &l in prefix {
        origin = act(&gens[l].matrix, &origin);
    }
    let root = Node {
        letters: prefix.to_vec(),
        distance: dist_to_target(&origin),
        image: origin,
    };
    let back_root = Node {
        letters: Vec::new(),
        image: target.clone(),
        distance: dist_to_start(target),
    };

    let mut fwd_seen: HashMap<RatMatrix, Vec<usize>> = HashMap::new();
    let mut bwd_seen: HashMap<RatMatrix, Vec<usize>> = HashMap::new();
    fwd_seen.insert(root.image.clone(), root.letters.clone());
    bwd_seen.insert(back_root.image.clone(), Vec::new());

    let mut run = Run {
        best_letters: root.letters.clone(),
        best_distance: root.distance,
        exact: false,
        trace: vec![root.distance],
        expansions: 0,
    };
    let meet = |f: &[usize], b: &[usize], run: &mut Run| {
        let mut letters = f.to_vec();
        letters.extend(b.iter().rev());
        if !run.exact || shortlex(&letters, &run.best_letters) == Ordering::Less {
            run.best_letters = letters;
            run.best_distance = 0.0;
            run.exact = true;
        }
    };
    if let Some(b) = bwd_seen.get(&root.image) {
        let b = b.clone();
        meet(&root.letters, &b, &mut run);
    }

    let mut fwd = vec![root];
    let mut bwd = vec![back_root];
    for _ in 0..params.max_depth {
        if run.exact || run.expansions >= budget {
            break;
        }
        let mut next = Vec::new();
        'outer: for node in &fwd {
            for (k, gen) in gens.iter().enumerate() {
                if run.expansions >= budget {
                    break 'outer;
                }
                run.expansions += 1;
                let image = act(&gen.matrix, &node.image);
                if fwd_seen.contains_key(&image) {
                    continue;
                }
                let mut letters = node.letters.clone();
                letters.push(k);
                if let Some(b) = bwd_seen.get(&image) {
                    let b = b.clone();
                    meet(&letters, &b, &mut run);
                }
                fwd_seen.insert(image.clone(), letters.clone());
                let distance = dist_to_target(&image);
                if !run.exact && distance < run.best_distance {
                    run.best_distance = distance;
                    run.best_letters = letters.clone();
                }
                next.push(Node {
                    letters,
                    image,
                    distance,
                });
            }
        }
        next.sort_by(node_order);
        next.truncate(params.beam_width);
        fwd = next;
        run.trace.push(run.best_distance);
        if run.exact || run.expansions >= budget {
            break;
        }

        let mut next = Vec::new();
        'outer_b: for node in &bwd {
            for (k, gen) in gens.iter().enumerate() {
                if run.expansions >= budget {
                    break 'outer_b;
                }
                run.expansions += 1;
                let image = act(&gen.inverse, &node.image);
                if bwd_seen.contains_key(&image) {
                    continue;
                }
                let mut letters = node.letters.clone();
                letters.push(k);
                if let Some(f) = fwd_seen.get(&image) {
                    let f = f.clone();
                    meet(&f, &letters, &mut run);
                }
                bwd_seen.insert(image.clone(), letters.clone());
                let distance = dist_to_start(&image);
                next.push(Node {
                    letters,
                    image,
                    distance,
                });
            }
        }
        next.sort_by(node_order);
        next.truncate(params.beam_width);
        bwd = next;
        if run.exact {
            run.trace.push(0.0);
        }
    }
    run
}

fn word_matrix(gens: &[Generator], letters: &[usize], g: usize) -> RatMatrix {
    letters
        .iter()
        .fold(RatMatrix::identity(g), |acc, &l| &acc * &gens[l].matrix)
}

fn check_inputs(ty: &RealType, start: &RatMatrix, target: &RatMatrix) -> Result<()> {
    for (name, m) in [("start", start), ("target", target)] {
        if m.rows() != ty.g || m.cols() != ty.g {
            return Err(Error::Dimension(format!(
                "{name} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                ty.g,
                ty.g
            )));
        }
        if !m.is_positive_definite() {
            return Err(Error::InvalidConfig(format!("{name} is not positive definite")));
        }
    }
    Ok(())
}

/// Searches the orbit of `start` for a point close to `target`.
///
/// Restart `r` begins from a random prefix drawn from `ChaCha8Rng` seeded with
/// `seed + r` (restart 0 has no prefix). The budget counts generator
/// applications and is split evenly across restarts. Results are merged by
/// distance, then shortlex order of the word.
pub fn orbit_approach(
    ty: &RealType,
    cfg: &SUnitConfig,
    start: &RatMatrix,
    target: &RatMatrix,
    budget: u64,
    seed: u64,
    params: &SearchParams,
) -> Result<OrbitResult> {
    check_inputs(ty, start, target)?;
    let gens = gl_tau_s_generators(ty, cfg)?;
    let restarts = params.restarts.max(1);
    let share = budget / restarts as u64;
    let runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let prefix: Vec<usize> = if r == 0 {
                Vec::new()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                let len = rng.gen_range(1..=3);
                (0..len).map(|_| rng.gen_range(0..gens.len())).collect()
            };
            beam_run(&gens, start, target, &prefix, share, params)
        })
        .collect();

    let expansions = runs.iter().map(|r| r.expansions).sum();
    let depth = runs.iter().map(|r| r.trace.len()).max().unwrap_or(0);
    let mut trace = Vec::with_capacity(depth);
    let mut running = f64::INFINITY;
    for level in 0..depth {
        for r in &runs {
            let v = r.trace.get(level).or(r.trace.last()).copied().unwrap_or(f64::INFINITY);
            running = running.min(v);
        }
        trace.push(running);
    }
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            b.exact
                .cmp(&a.exact)
                .then_with(|| a.best_distance.total_cmp(&b.best_distance))
                .then_with(|| shortlex(&a.best_letters, &b.best_letters))
        })
        .expect("at least one restart");
    let matrix = word_matrix(&gens, &best.best_letters, ty.g);
    let image = act(&matrix, start);
    let distance = if &image == target {
        0.0
    } else {
        log_euclidean_distance(&image, target)
    };
    let sample = OrbitSample {
        word: compress(&best.best_letters),
        matrix,
        image,
        distance,
    };
    validate_sample(&sample, ty, cfg)?;
    if let Some(last) = trace.last_mut() {
        *last = last.min(distance);
    }
    Ok(OrbitResult {
        best: sample,
        trace,
        expansions,
    })
}

/// Exact invariants of an orbit sample: symmetric positive definite image,
/// S-unit determinant, S-integral entries, and type preservation.
pub fn validate_sample(s: &OrbitSample, ty: &RealType, cfg: &SUnitConfig) -> Result<()> {
    if !s.image.is_positive_definite() {
        return Err(Error::Postcondition("orbit image is not positive definite".into()));
    }
    if !cfg.is_s_unit(&s.matrix.det()) {
        return Err(Error::Postcondition("word determinant is not an S-unit".into()));
    }
    if !s.matrix.entries().iter().all(|x| cfg.is_s_integral(x)) {
        return Err(Error::Postcondition("word has a non-S-integral entry".into()));
    }
    if !preserves_type(&s.matrix, ty)? {
        return Err(Error::Postcondition("word leaves the type class".into()));
    }
    Ok(())
}

/// Expands a run-length word into a matrix.
pub fn evaluate_word(gens: &[Generator], word: &Word, g: usize) -> RatMatrix {
    let letters: Vec<usize> = word
        .iter()
        .flat_map(|&(l, e)| std::iter::repeat(l).take(e as usize))
        .collect();
    word_matrix(gens, &letters, g)
}

/// `(n, m)` with `p^n q^m` closest to `√c`: the `g = 1` orbit of `N` is `{p^{2n} q^{2m} N}`.
pub fn scalar_orbit_gap(cfg: &SUnitConfig, ratio: &BigRational) -> Result<(i64, i64, f64)> {
    let b = cfg.exponent_bound as i64;
    let r = ratio
        .to_f64()
        .ok_or_else(|| Error::InvalidConfig("ratio out of range".into()))?
        .ln();
    let (lp, lq) = ((cfg.p as f64).ln(), (cfg.q as f64).ln());
    let mut best = (0, 0, f64::INFINITY);
    for n in -b..=b {
        for m in -b..=b {
            let d = (2.0 * (n as f64 * lp + m as f64 * lq) - r).abs();
            if d < best.2 {
                best = (n, m, d);
            }
        }
    }
    Ok(best)
}
