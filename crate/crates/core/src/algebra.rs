//! Cartan data, affine weights, and the affine Weyl machinery.
//!
//! Weights are always handled in the Dynkin-label basis.  A finite weight of a
//! rank-`r` algebra is the vector of labels `(λ1, …, λr)`; its affine extension
//! at level `k` prepends the zeroth label `λ0 = k − Σ λi a∨i`, where `a∨i` are
//! the comarks.  Simple reflections act linearly on label vectors through the
//! rows of the (affine) Cartan matrix, which is all that is needed for the
//! shifted Weyl folding at the heart of the Kac-Walton algorithm.

use crate::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

/// Identifier for the supported algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraId {
    /// su(n), n ≥ 2 (the A series).
    Su(usize),
    /// sp(4) = C2.
    Sp4,
    /// G2; only its Cartan data and Weyl machinery are exposed.
    G2,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::Su(n) => write!(f, "su{n}"),
            AlgebraId::Sp4 => write!(f, "sp4"),
            AlgebraId::G2 => write!(f, "g2"),
        }
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "sp4" {
            return Ok(AlgebraId::Sp4);
        }
        if s == "g2" {
            return Ok(AlgebraId::G2);
        }
        if let Some(num) = s.strip_prefix("su") {
            if let Ok(n) = num.parse::<usize>() {
                if n >= 2 {
                    return Ok(AlgebraId::Su(n));
                }
            }
        }
        Err(Error::UnknownAlgebra(s))
    }
}

/// A finite weight in Dynkin labels `(λ1, …, λr)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    /// Sum of the Dynkin labels.
    pub fn label_sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// True when every label vanishes.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An affine weight in Dynkin labels `[λ0, λ1, …, λr]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeight(pub Vec<i64>);

impl AffineWeight {
    /// The level `Σ λi a∨i` (including the zeroth label).
    pub fn level(&self, alg: &AlgebraData) -> i64 {
        self.0.iter().zip(&alg.comarks).map(|(l, a)| l * a).sum()
    }

    /// The finite part `(λ1, …, λr)`.
    pub fn finite(&self) -> Weight {
        Weight(self.0[1..].to_vec())
    }
}

impl fmt::Debug for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Immutable Cartan data for one algebra.
#[derive(Clone, Debug)]
pub struct AlgebraData {
    /// Which algebra this is.
    pub id: AlgebraId,
    /// Rank of the finite algebra.
    pub rank: usize,
    /// Finite Cartan matrix `A[i][j]`, indices `0..rank` standing for `α1..αr`.
    pub cartan: Vec<Vec<i64>>,
    /// Affine Cartan matrix, indices `0..=rank` standing for `α0..αr`.
    pub affine_cartan: Vec<Vec<i64>>,
    /// Comarks `(a∨0, …, a∨r)`; `a∨0 = 1`.
    pub comarks: Vec<i64>,
    /// Dual Coxeter number `g = Σ a∨i`.
    pub dual_coxeter: i64,
    /// Quadratic form matrix `(ωi, ωj)` on fundamental weights, normalized so
    /// that long roots have squared length 2.
    pub qform: Vec<Vec<Rational64>>,
}

/// Build the Cartan data for `id`.
pub fn build_algebra(id: AlgebraId) -> AlgebraData {
    match id {
        AlgebraId::Su(n) => build_su(n),
        AlgebraId::Sp4 => build_sp4(),
        AlgebraId::G2 => build_g2(),
    }
}

fn build_su(n: usize) -> AlgebraData {
    assert!(n >= 2, "su(n) needs n >= 2");
    let r = n - 1;
    let mut cartan = vec![vec![0i64; r]; r];
    for i in 0..r {
        cartan[i][i] = 2;
        if i + 1 < r {
            cartan[i][i + 1] = -1;
            cartan[i + 1][i] = -1;
        }
    }
    let m = r + 1;
    let mut affine = vec![vec![0i64; m]; m];
    for i in 0..m {
        affine[i][i] = 2;
        let next = (i + 1) % m;
        let prev = (i + m - 1) % m;
        affine[i][next] += -1;
        affine[i][prev] += -1;
    }
    // For su(2) the two affine nodes are doubly linked.
    // (The wrap-around above already yields -2 off-diagonals when m == 2.)
    let qform = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let (i, j) = (i as i64 + 1, j as i64 + 1);
                    Rational64::new(i.min(j) * n as i64 - i * j, n as i64)
                })
                .collect()
        })
        .collect();
    AlgebraData {
        id: AlgebraId::Su(n),
        rank: r,
        cartan,
        affine_cartan: affine,
        comarks: vec![1; m],
        dual_coxeter: n as i64,
        qform,
    }
}

fn build_sp4() -> AlgebraData {
    AlgebraData {
        id: AlgebraId::Sp4,
        rank: 2,
        cartan: vec![vec![2, -1], vec![-2, 2]],
        affine_cartan: vec![vec![2, -2, 0], vec![-1, 2, -1], vec![0, -2, 2]],
        comarks: vec![1, 1, 1],
        dual_coxeter: 3,
        qform: vec![
            vec![Rational64::new(1, 2), Rational64::new(1, 2)],
            vec![Rational64::new(1, 2), Rational64::new(1, 1)],
        ],
    }
}

fn build_g2() -> AlgebraData {
    AlgebraData {
        id: AlgebraId::G2,
        rank: 2,
        cartan: vec![vec![2, -3], vec![-1, 2]],
        affine_cartan: vec![vec![2, -1, 0], vec![-1, 2, -3], vec![0, -1, 2]],
        comarks: vec![1, 2, 1],
        dual_coxeter: 4,
        qform: vec![
            vec![Rational64::new(2, 1), Rational64::new(1, 1)],
            vec![Rational64::new(1, 1), Rational64::new(2, 3)],
        ],
    }
}

impl AlgebraData {
    /// The finite Weyl vector `ρ = (1, …, 1)`.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Level of a finite weight, `Σ λi a∨i`.
    pub fn finite_level(&self, w: &Weight) -> i64 {
        w.0.iter().zip(&self.comarks[1..]).map(|(l, a)| l * a).sum()
    }

    /// Affine extension `[k − Σ λi a∨i, λ1, …, λr]` of a finite weight.
    pub fn affine_extend(&self, w: &Weight, k: i64) -> AffineWeight {
        assert_eq!(w.0.len(), self.rank, "weight has wrong rank");
        let mut labels = Vec::with_capacity(self.rank + 1);
        labels.push(k - self.finite_level(w));
        labels.extend_from_slice(&w.0);
        AffineWeight(labels)
    }

    /// All level-`k` integrable affine weights, in lexicographic order of
    /// their finite labels.
    pub fn integrable_weights(&self, k: i64) -> Vec<AffineWeight> {
        let mut out = Vec::new();
        let mut labels = vec![0i64; self.rank];
        self.integrable_rec(k, 0, &mut labels, &mut out);
        out
    }

    fn integrable_rec(&self, k: i64, i: usize, labels: &mut Vec<i64>, out: &mut Vec<AffineWeight>) {
        if i == self.rank {
            out.push(self.affine_extend(&Weight(labels.clone()), k));
            return;
        }
        let used: i64 = labels[..i].iter().zip(&self.comarks[1..]).map(|(l, a)| l * a).sum();
        let room = (k - used) / self.comarks[i + 1];
        for v in 0..=room.max(-1) {
            labels[i] = v;
            self.integrable_rec(k, i + 1, labels, out);
        }
        labels[i] = 0;
    }

    /// Reflect finite Dynkin labels by the simple reflection `s_{i+1}`
    /// (`i` is a 0-based index into the finite labels).
    pub fn finite_reflect(&self, labels: &[i64], i: usize) -> Vec<i64> {
        let c = labels[i];
        labels
            .iter()
            .enumerate()
            .map(|(j, &l)| l - c * self.cartan[i][j])
            .collect()
    }

    /// Reflect affine Dynkin labels by `s_i`, `i ∈ 0..=rank`.
    pub fn affine_reflect(&self, labels: &[i64], i: usize) -> Vec<i64> {
        let c = labels[i];
        labels
            .iter()
            .enumerate()
            .map(|(j, &l)| l - c * self.affine_cartan[i][j])
            .collect()
    }

    /// Inner product `(λ, μ)` of two finite weights via the quadratic form.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rational64 {
        let mut acc = Rational64::new(0, 1);
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += self.qform[i][j] * Rational64::from_integer(a[i]) * Rational64::from_integer(b[j]);
            }
        }
        acc
    }
}

/// Outcome of folding a shifted affine weight into the dominant chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Folded {
    /// The weight is conjugate to a dominant one under the shifted action;
    /// `sign` is the sign of the Weyl element used.
    Dominant { weight: AffineWeight, sign: i64 },
    /// The shifted weight lies on a chamber wall and contributes nothing.
    OnWall,
}

/// Fold `w` into the dominant sector under the shifted affine Weyl action.
///
/// Repeatedly reflects by the simple reflection whose shifted label is the
/// most negative (lowest index on ties) until all shifted labels are
/// positive, or detects a vanishing shifted label.
pub fn shifted_make_dominant(alg: &AlgebraData, w: &AffineWeight) -> Result<Folded> {
    let mut shifted: Vec<i64> = w.0.iter().map(|&l| l + 1).collect();
    let mut sign = 1i64;
    let level = w.level(alg);
    let cap = 10 * (level.abs() + alg.dual_coxeter) * (alg.rank as i64 + 1);
    for _ in 0..=cap.max(16) {
        if shifted.iter().any(|&l| l == 0) {
            return Ok(Folded::OnWall);
        }
        let (mut idx, mut min) = (usize::MAX, 0i64);
        for (i, &l) in shifted.iter().enumerate() {
            if l < min {
                min = l;
                idx = i;
            }
        }
        if idx == usize::MAX {
            let labels: Vec<i64> = shifted.iter().map(|&l| l - 1).collect();
            return Ok(Folded::Dominant { weight: AffineWeight(labels), sign });
        }
        shifted = alg.affine_reflect(&shifted, idx);
        sign = -sign;
    }
    Err(Error::FoldDivergence)
}

/// Apply the basic outer automorphism `a` to an affine weight `times` times.
///
/// For su(N)-hat `a` cyclically rotates the labels,
/// `a[λ0, …, λ_{N−1}] = [λ_{N−1}, λ0, …, λ_{N−2}]`; for sp(4)-hat it
/// reverses them, `a[λ0, λ1, λ2] = [λ2, λ1, λ0]`.
pub fn outer_apply(alg: &AlgebraData, w: &AffineWeight, times: usize) -> AffineWeight {
    let mut labels = w.0.clone();
    for _ in 0..times % outer_order(alg) {
        labels = match alg.id {
            AlgebraId::Su(_) => {
                let mut v = vec![*labels.last().unwrap()];
                v.extend_from_slice(&labels[..labels.len() - 1]);
                v
            }
            AlgebraId::Sp4 => {
                let mut v = labels.clone();
                v.reverse();
                v
            }
            AlgebraId::G2 => labels.clone(),
        };
    }
    AffineWeight(labels)
}

/// Order of the outer automorphism group (`N` for su(N)-hat, 2 for sp(4)-hat).
pub fn outer_order(alg: &AlgebraData) -> usize {
    match alg.id {
        AlgebraId::Su(n) => n,
        AlgebraId::Sp4 => 2,
        AlgebraId::G2 => 1,
    }
}

/// An element of the (affine or finite) Weyl group with cached data.
#[derive(Clone, Debug)]
pub struct WeylElement {
    /// A reduced word in the simple reflections (applied right to left).
    pub word: Vec<usize>,
    /// Matrix acting on Dynkin-label vectors: `labels ↦ action · labels`.
    pub action: Vec<Vec<i64>>,
    /// Sign `(−1)^{length}`.
    pub sign: i64,
}

impl WeylElement {
    /// Apply the cached linear action to a label vector.
    pub fn apply(&self, labels: &[i64]) -> Vec<i64> {
        self.action
            .iter()
            .map(|row| row.iter().zip(labels).map(|(m, l)| m * l).sum())
            .collect()
    }

    /// Apply the shifted action `w · λ = w(λ + ρ) − ρ`.
    pub fn apply_shifted(&self, labels: &[i64]) -> Vec<i64> {
        let shifted: Vec<i64> = labels.iter().map(|&l| l + 1).collect();
        self.apply(&shifted).into_iter().map(|l| l - 1).collect()
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Matrix of `s_i` acting on label vectors: `(s_i λ)_j = λ_j − λ_i A[i][j]`.
fn reflection_matrix(cartan: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut m = identity_matrix(n);
    for (j, row) in m.iter_mut().enumerate() {
        row[i] -= cartan[i][j];
    }
    m
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let v = a[i][k];
            if v != 0 {
                for j in 0..n {
                    out[i][j] += v * b[k][j];
                }
            }
        }
    }
    out
}

/// Enumerate the full finite Weyl group as label-action elements.
pub fn finite_weyl_elements(alg: &AlgebraData) -> Vec<WeylElement> {
    let gens: Vec<Vec<Vec<i64>>> = (0..alg.rank).map(|i| reflection_matrix(&alg.cartan, i)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = WeylElement { word: vec![], action: identity_matrix(alg.rank), sign: 1 };
    seen.insert(id.action.clone());
    queue.push_back(id.clone());
    out.push(id);
    while let Some(el) = queue.pop_front() {
        for (i, g) in gens.iter().enumerate() {
            let action = mat_mul(g, &el.action);
            if seen.insert(action.clone()) {
                let mut word = vec![i];
                word.extend_from_slice(&el.word);
                let next = WeylElement { word, action, sign: -el.sign };
                queue.push_back(next.clone());
                out.push(next);
            }
        }
    }
    out
}

/// Matrix of `s_i` acting on coroot coefficient vectors (simple-coroot basis):
/// only coordinate `i` changes, `c_i ↦ c_i − Σ_j A[i][j] c_j`.
fn coroot_reflection_matrix(cartan: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut m = identity_matrix(n);
    for j in 0..n {
        m[i][j] -= cartan[i][j];
    }
    m
}

/// Compute the finite subset of the affine Weyl group relevant to fusion.
///
/// These are the elements `w` mapping the set
/// `{2α∨0 + α∨1 + … + α∨r, α∨1, …, α∨r}` into the positive real coroots.
/// Elements are returned sorted by length, then word, with reduced words and
/// cached label actions.
pub fn compute_wf(alg: &AlgebraData) -> Vec<WeylElement> {
    let m = alg.rank + 1;
    let label_gens: Vec<_> = (0..m).map(|i| reflection_matrix(&alg.affine_cartan, i)).collect();
    let coroot_gens: Vec<_> = (0..m).map(|i| coroot_reflection_matrix(&alg.affine_cartan, i)).collect();

    // Criterion test vectors in coroot coordinates.  The first probe is
    // `2α∨0 + θ∨ = α∨0 + c`, i.e. the comark-weighted sum (which reduces to
    // `2α∨0 + α∨1 + … + α∨r` whenever all comarks are 1).
    let mut probes = vec![{
        let mut v = alg.comarks.clone();
        v[0] = 2;
        v
    }];
    for i in 1..m {
        let mut v = vec![0i64; m];
        v[i] = 1;
        probes.push(v);
    }
    let satisfies = |coroot: &[Vec<i64>]| {
        probes.iter().all(|p| {
            let image: Vec<i64> = coroot.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect();
            image.iter().all(|&c| c >= 0)
        })
    };

    // Breadth-first search over the (infinite) affine Weyl group, stopping a
    // few layers after the last criterion hit.  The relevant elements are
    // short (length ≤ 4 for every supported algebra).
    let mut seen: HashMap<Vec<Vec<i64>>, ()> = HashMap::new();
    let mut layer = vec![(Vec::<usize>::new(), identity_matrix(m), identity_matrix(m))];
    seen.insert(identity_matrix(m), ());
    let mut found = Vec::new();
    if satisfies(&layer[0].2) {
        found.push(WeylElement { word: vec![], action: identity_matrix(m), sign: 1 });
    }
    let mut last_hit = 0usize;
    let mut len = 0usize;
    while !layer.is_empty() && len < 12 && len < last_hit + 4 {
        len += 1;
        let mut next = Vec::new();
        for (word, action, coroot) in &layer {
            for i in 0..m {
                let a = mat_mul(&label_gens[i], action);
                if seen.contains_key(&a) {
                    continue;
                }
                let c = mat_mul(&coroot_gens[i], coroot);
                seen.insert(a.clone(), ());
                let mut w = vec![i];
                w.extend_from_slice(word);
                if satisfies(&c) {
                    last_hit = len;
                    found.push(WeylElement {
                        word: w.clone(),
                        action: a.clone(),
                        sign: if len % 2 == 0 { 1 } else { -1 },
                    });
                }
                next.push((w, a, c));
            }
        }
        layer = next;
    }
    found.sort_by(|x, y| (x.word.len(), &x.word).cmp(&(y.word.len(), &y.word)));
    found
}

/// Brute-force determination of the fusion-relevant Weyl elements.
///
/// Folds the level-`k` affine extension of every finite dominant weight of
/// level at most `2k` (the region occupied by tensor-product weights of two
/// level-`k` representations) and collects the distinct group elements that
/// perform the folding.  For `k` large enough this reproduces the criterion
/// set computed by [`compute_wf`]; it serves as an independent oracle.
pub fn wf_bruteforce(alg: &AlgebraData, k: i64) -> Vec<Vec<Vec<i64>>> {
    let m = alg.rank + 1;
    let gens: Vec<_> = (0..m).map(|i| reflection_matrix(&alg.affine_cartan, i)).collect();
    let mut out: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut labels = vec![0i64; alg.rank];
    let mut stack = vec![(0usize, 0i64)];
    // Enumerate finite dominant weights of level ≤ 2k.
    fn rec(
        alg: &AlgebraData,
        gens: &[Vec<Vec<i64>>],
        k: i64,
        i: usize,
        labels: &mut Vec<i64>,
        out: &mut HashSet<Vec<Vec<i64>>>,
    ) {
        if i == alg.rank {
            let aw = alg.affine_extend(&Weight(labels.clone()), k);
            // Fold while accumulating the group element.
            let mut shifted: Vec<i64> = aw.0.iter().map(|&l| l + 1).collect();
            let mut acc = identity_matrix(alg.rank + 1);
            loop {
                if shifted.iter().any(|&l| l == 0) {
                    return;
                }
                let mut idx = usize::MAX;
                let mut min = 0i64;
                for (j, &l) in shifted.iter().enumerate() {
                    if l < min {
                        min = l;
                        idx = j;
                    }
                }
                if idx == usize::MAX {
                    out.insert(acc);
                    return;
                }
                shifted = alg.affine_reflect(&shifted, idx);
                acc = mat_mul(&gens[idx], &acc);
            }
        }
        let used: i64 = labels[..i].iter().zip(&alg.comarks[1..]).map(|(l, a)| l * a).sum();
        let room = (2 * k - used) / alg.comarks[i + 1];
        for v in 0..=room.max(-1) {
            labels[i] = v;
            rec(alg, gens, k, i + 1, labels, out);
        }
        labels[i] = 0;
    }
    rec(alg, &gens, k, 0, &mut labels, &mut out);
    let _ = &mut stack;
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    v
}
