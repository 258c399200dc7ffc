//! Finite tensor-product multiplicities.
//!
//! Three independent routes are provided:
//!
//! - Littlewood-Richardson (LR) skew-tableau enumeration for su(N), in the
//!   variables `n_{ij}` = number of entries `i` in row `j` ([`lr_tensor`]);
//! - enumeration of the Berenstein-Zelevinsky (BZ) inequality system for
//!   sp(4) in the variables `p, q, s1 = r1/2, s2 = r2/2` ([`sp4_tensor`]);
//! - a generic Racah-Speiser oracle built from Freudenthal weight
//!   multiplicities and shifted finite Weyl folding
//!   ([`racah_speiser_tensor`]), used to cross-check the first two.
//!
//! The LR inequality system is *generated* from the column-strictness and
//! lattice-word conditions for any N ([`lr_rows`]); unit tests pin the
//! generated systems for N = 3, 4 to the known minimal row lists so the
//! variable convention cannot drift.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::algebra::{AlgebraData, AlgebraId, Weight};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Partition <-> Dynkin conversions for su(N)
// ---------------------------------------------------------------------------

/// Partition rows `(row_1, …, row_{N−1})` of an su(N) dominant weight:
/// `row_i = λ_i + λ_{i+1} + … + λ_{N−1}`.
pub fn dynkin_to_rows(lambda: &Weight) -> Vec<i64> {
    let r = lambda.0.len();
    let mut rows = vec![0i64; r];
    let mut acc = 0;
    for i in (0..r).rev() {
        acc += lambda.0[i];
        rows[i] = acc;
    }
    rows
}

/// Dynkin labels of a weakly decreasing row list; rows beyond the first
/// `N−1` are full columns and are dropped (`rows.len() = N` is allowed).
pub fn rows_to_dynkin(rows: &[i64], n: usize) -> Option<Weight> {
    let mut padded = rows.to_vec();
    padded.resize(n, 0);
    let mut labels = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let d = padded[i] - padded[i + 1];
        if d < 0 {
            return None;
        }
        labels.push(d);
    }
    Some(Weight(labels))
}

// ---------------------------------------------------------------------------
// Littlewood-Richardson enumeration for su(N)
// ---------------------------------------------------------------------------

/// Ordered list of the LR variable index pairs `(i, j)` for su(N):
/// entry `i ∈ 1..N−1` may sit in rows `j ∈ i..N`.
pub fn lr_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in i..=n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Names of the LR variables, `n11, n12, …`, in [`lr_pairs`] order.
pub fn lr_var_names(n: usize) -> Vec<String> {
    lr_pairs(n).iter().map(|(i, j)| format!("n{i}{j}")).collect()
}

/// One assignment of the LR variables for a fixed first weight λ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LrVariables {
    /// N of su(N).
    pub n: usize,
    /// First weight of the coupling.
    pub lambda: Weight,
    /// Values `n_{ij}` in [`lr_pairs`] order.
    pub values: Vec<i64>,
}

impl LrVariables {
    fn value(&self, i: usize, j: usize) -> i64 {
        let pos = lr_pairs(self.n).iter().position(|&p| p == (i, j)).unwrap();
        self.values[pos]
    }

    /// Second weight: its partition row `i` is `Σ_j n_{ij}`.
    pub fn mu(&self) -> Weight {
        let rows: Vec<i64> = (1..self.n)
            .map(|i| (i..=self.n).map(|j| self.value(i, j)).sum())
            .collect();
        rows_to_dynkin(&rows, self.n).expect("mu rows weakly decreasing")
    }

    /// Product-side weight: its partition row `j` is the λ row plus the
    /// entries placed in row `j`; full columns are dropped.
    pub fn nu(&self) -> Weight {
        rows_to_dynkin(&self.nu_rows(), self.n).expect("nu rows weakly decreasing")
    }

    /// Raw product-side partition rows, length N (row N counts full columns).
    pub fn nu_rows(&self) -> Vec<i64> {
        let lrows = dynkin_to_rows(&self.lambda);
        (1..=self.n)
            .map(|j| {
                let base = if j <= self.n - 1 { lrows[j - 1] } else { 0 };
                base + (1..=j.min(self.n - 1)).map(|i| self.value(i, j)).sum::<i64>()
            })
            .collect()
    }

    /// The coupling `(λ, μ, ν)` described by this assignment.
    pub fn triple(&self) -> (Weight, Weight, Weight) {
        (self.lambda.clone(), self.mu(), self.nu())
    }

    /// Number of columns of the product-side tableau, `Σ λ_i + n_{11}`.
    pub fn columns(&self) -> i64 {
        self.lambda.label_sum() + self.value(1, 1)
    }
}

/// The minimal LR inequality row list for su(N) over the variables
/// `(λ1, …, λ_{N−1}, n11, n12, …)`: column-strictness rows for `i < j` and
/// lattice-word rows for `i ≤ N−2`. Nonnegativity of the `n_{ij}` is implicit
/// except that `n_{ii}` with `i ≤ N−2` is implied by the listed rows.
///
/// Returns `(variable names, rows)`; each row `c` means `c·x ≥ 0`.
pub fn lr_rows(n: usize) -> (Vec<String>, Vec<Vec<i64>>) {
    let pairs = lr_pairs(n);
    let mut names: Vec<String> = (1..n).map(|i| format!("l{i}")).collect();
    names.extend(lr_var_names(n));
    let nvars = names.len();
    let pos = |i: usize, j: usize| n - 1 + pairs.iter().position(|&p| p == (i, j)).unwrap();
    let mut rows = Vec::new();
    // Column-strictness: after placing entries ≤ i, row j must not outgrow
    // row j−1 after entries ≤ i−1 (λ rows in terms of Dynkin labels:
    // row_m = λ_m + … + λ_{N−1}).
    for j in 2..=n {
        for i in 1..j.min(n) {
            let mut row = vec![0i64; nvars];
            for m in (j - 1)..n {
                row[m - 1] += 1; // + λ row j−1
            }
            if j <= n - 1 {
                for m in j..n {
                    row[m - 1] -= 1; // − λ row j
                }
            }
            for ip in 1..i {
                if ip <= j - 1 {
                    row[pos(ip, j - 1)] += 1;
                }
            }
            for ip in 1..=i {
                row[pos(ip, j)] -= 1;
            }
            rows.push(row);
        }
    }
    // Lattice-word rows: prefix counts of entry i dominate those of i+1.
    for i in 1..n - 1 {
        for j in i..n {
            let mut row = vec![0i64; nvars];
            for jp in i..=j {
                row[pos(i, jp)] += 1;
            }
            for jp in (i + 1)..=(j + 1) {
                row[pos(i + 1, jp)] -= 1;
            }
            rows.push(row);
        }
    }
    (names, rows)
}

/// All LR assignments for `λ ⊗ μ` in su(N), in lexicographic order of the
/// variable vector.
pub fn lr_solutions(n: usize, lambda: &Weight, mu: &Weight) -> Vec<LrVariables> {
    assert_eq!(lambda.0.len(), n - 1);
    assert_eq!(mu.0.len(), n - 1);
    let pairs = lr_pairs(n);
    let lrows = dynkin_to_rows(lambda);
    let mrows = dynkin_to_rows(mu);
    let mut values = vec![0i64; pairs.len()];
    let mut out = Vec::new();
    lr_dfs(n, &pairs, &lrows, &mrows, 0, &mut values, &mut out);
    out.into_iter()
        .map(|values| LrVariables { n, lambda: lambda.clone(), values })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn lr_dfs(
    n: usize,
    pairs: &[(usize, usize)],
    lrows: &[i64],
    mrows: &[i64],
    idx: usize,
    values: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if idx == pairs.len() {
        out.push(values.clone());
        return;
    }
    let (i, j) = pairs[idx];
    let val = |ii: usize, jj: usize, values: &[i64]| -> i64 {
        values[pairs.iter().position(|&p| p == (ii, jj)).unwrap()]
    };
    // Remaining budget for entry i (row sums must equal μ's partition rows).
    let used: i64 = (i..j).map(|jp| val(i, jp, values)).sum();
    let budget = mrows[i - 1] - used;
    // Column-strictness cap for rows below the first.
    let cap_strict = if j >= 2 {
        let above = if j - 1 <= n - 1 { lrows[j - 2] } else { 0 }
            + (1..i.min(j)).map(|ip| val(ip, j - 1, values)).sum::<i64>();
        let here = if j <= n - 1 { lrows[j - 1] } else { 0 }
            + (1..i).map(|ip| val(ip, j, values)).sum::<i64>();
        above - here
    } else {
        i64::MAX
    };
    // Lattice-word cap: prefix counts of entry i must not exceed those of
    // entry i−1 one row up.
    let cap_lattice = if i >= 2 {
        let upper: i64 = ((i - 1)..j).map(|jp| val(i - 1, jp, values)).sum();
        let mine: i64 = (i..j).map(|jp| val(i, jp, values)).sum();
        upper - mine
    } else {
        i64::MAX
    };
    let hi = budget.min(cap_strict).min(cap_lattice);
    // The last row available to entry i must absorb the whole remaining
    // budget; otherwise every count from 0 up to the cap branches.
    let lo = if j == n { budget } else { 0 };
    if lo > hi {
        return;
    }
    for v in lo..=hi {
        values[idx] = v;
        lr_dfs(n, pairs, lrows, mrows, idx + 1, values, out);
    }
    values[idx] = 0;
}

/// Tensor-product decomposition of `λ ⊗ μ` in su(N) by LR enumeration.
pub fn lr_tensor(n: usize, lambda: &Weight, mu: &Weight) -> BTreeMap<Weight, i64> {
    let mut map = BTreeMap::new();
    for sol in lr_solutions(n, lambda, mu) {
        *map.entry(sol.nu()).or_insert(0) += 1;
    }
    map
}

/// LR multiplicity of `ν` in `λ ⊗ μ` for su(N).
pub fn lr_multiplicity(n: usize, lambda: &Weight, mu: &Weight, nu: &Weight) -> i64 {
    lr_solutions(n, lambda, mu).iter().filter(|s| &s.nu() == nu).count() as i64
}

// ---------------------------------------------------------------------------
// Berenstein-Zelevinsky enumeration for sp(4)
// ---------------------------------------------------------------------------

/// One solution of the sp(4) BZ system. The doubled variables `r_i = 2 s_i`
/// are kept halved so every lattice stays integral.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpCouplingVector {
    /// First weight `(λ1, λ2)`.
    pub lambda: Weight,
    /// Second weight `(μ1, μ2)`.
    pub mu: Weight,
    /// BZ variables.
    pub p: i64,
    /// BZ variable `q`.
    pub q: i64,
    /// `s1 = r1 / 2`.
    pub s1: i64,
    /// `s2 = r2 / 2`.
    pub s2: i64,
}

impl SpCouplingVector {
    /// The eight BZ inequalities, each returned as a slack value (≥ 0 iff
    /// satisfied).
    pub fn bz_slacks(&self) -> [i64; 8] {
        let (l1, l2) = (self.lambda.0[0], self.lambda.0[1]);
        let (m1, m2) = (self.mu.0[0], self.mu.0[1]);
        let (p, q, s1, s2) = (self.p, self.q, self.s1, self.s2);
        [
            l1 - p,
            l2 - s1,
            l2 - s1 - q + p,
            l2 - s2 - q + p,
            m1 - q,
            m1 - q - 2 * s1 + 2 * s2,
            m1 - p - 2 * s1 + 2 * s2,
            m2 - s2,
        ]
    }

    /// Whether all BZ inequalities and sign constraints hold.
    pub fn is_valid(&self) -> bool {
        self.p >= 0
            && self.q >= 0
            && self.s1 >= 0
            && self.s2 >= 0
            && self.bz_slacks().iter().all(|&s| s >= 0)
    }

    /// Product-side weight: `ν1 = 2s2 − 2s1 − 2p + λ1 + μ1`,
    /// `ν2 = p − q − 2s2 + λ2 + μ2`.
    pub fn nu(&self) -> Weight {
        let nu1 = 2 * self.s2 - 2 * self.s1 - 2 * self.p + self.lambda.0[0] + self.mu.0[0];
        let nu2 = self.p - self.q - 2 * self.s2 + self.lambda.0[1] + self.mu.0[1];
        Weight(vec![nu1, nu2])
    }
}

/// All BZ solutions for `λ ⊗ μ` in sp(4), lexicographic in `(p, q, s1, s2)`.
pub fn sp4_solutions(lambda: &Weight, mu: &Weight) -> Vec<SpCouplingVector> {
    assert_eq!(lambda.0.len(), 2);
    assert_eq!(mu.0.len(), 2);
    let mut out = Vec::new();
    for p in 0..=lambda.0[0] {
        for q in 0..=mu.0[0] {
            for s1 in 0..=lambda.0[1] {
                for s2 in 0..=mu.0[1] {
                    let v = SpCouplingVector {
                        lambda: lambda.clone(),
                        mu: mu.clone(),
                        p,
                        q,
                        s1,
                        s2,
                    };
                    if v.is_valid() {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Tensor-product decomposition of `λ ⊗ μ` in sp(4) by BZ enumeration.
pub fn sp4_tensor(lambda: &Weight, mu: &Weight) -> BTreeMap<Weight, i64> {
    let mut map = BTreeMap::new();
    for sol in sp4_solutions(lambda, mu) {
        *map.entry(sol.nu()).or_insert(0) += 1;
    }
    map
}

/// Diamond coordinates equivalent to one BZ solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpDiamond {
    /// Corner variables `a1..a8`.
    pub a: [i64; 8],
    /// Halved doubled variables.
    pub s1: i64,
    /// `s2 = r2 / 2`.
    pub s2: i64,
    /// The six Dynkin labels `(λ1, λ2, μ1, μ2, ν1, ν2)`.
    pub labels: [i64; 6],
}

/// Solve the diamond equalities for a BZ solution. All `a_i` come out
/// nonnegative whenever the BZ inequalities hold.
pub fn sp_diamond_from_vector(v: &SpCouplingVector) -> Result<SpDiamond> {
    let (l1, l2) = (v.lambda.0[0], v.lambda.0[1]);
    let (m1, m2) = (v.mu.0[0], v.mu.0[1]);
    let nu = v.nu();
    let (n1, n2) = (nu.0[0], nu.0[1]);
    let a1 = l1 - v.p;
    let a2 = l2 - v.s1;
    let a5 = m1 - v.q;
    let a8 = m2 - v.s2;
    let a7 = n1 - a1;
    let a4 = n2 - a8;
    let a3 = a2 + v.p - v.q;
    let a6 = a5 + 2 * v.s2 - 2 * v.s1;
    let a = [a1, a2, a3, a4, a5, a6, a7, a8];
    if a.iter().any(|&x| x < 0) {
        return Err(Error::Invariant(format!(
            "diamond corner negative for BZ solution {v:?}: {a:?}"
        )));
    }
    // The two consistency equalities not used in the solve.
    if a3 + v.s1 != a4 + v.s2 || a6 + v.q != a7 + v.p {
        return Err(Error::Invariant(format!(
            "diamond equalities violated for BZ solution {v:?}"
        )));
    }
    Ok(SpDiamond {
        a,
        s1: v.s1,
        s2: v.s2,
        labels: [l1, l2, m1, m2, n1, n2],
    })
}

// ---------------------------------------------------------------------------
// Racah-Speiser oracle
// ---------------------------------------------------------------------------

/// Positive roots of the finite algebra in Dynkin-label coordinates.
pub fn positive_roots(alg: &AlgebraData) -> Vec<Vec<i64>> {
    let r = alg.rank;
    // Collect the full root system as the closure of the simple roots under
    // simple reflections, then keep the roots whose expansion in simple
    // roots is nonnegative.
    let simple: Vec<Vec<i64>> = (0..r).map(|i| alg.cartan[i].clone()).collect();
    let mut all: Vec<Vec<i64>> = simple.clone();
    let mut frontier = simple.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for root in &frontier {
            for i in 0..r {
                let img = alg.finite_reflect(root, i);
                if !all.contains(&img) {
                    all.push(img.clone());
                    next.push(img);
                }
            }
        }
        frontier = next;
    }
    // Expansion coefficients: d = Aᵀ c, so c = (Aᵀ)⁻¹ d; positivity is
    // equivalent to a positive first nonzero coefficient, but all-nonneg is
    // what we check.
    let at: Vec<Vec<Rational64>> = (0..r)
        .map(|i| (0..r).map(|j| Rational64::from_integer(alg.cartan[j][i])).collect())
        .collect();
    let inv = invert_rational(&at);
    let mut pos: Vec<Vec<i64>> = all
        .into_iter()
        .filter(|root| {
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| inv[i][j] * Rational64::from_integer(root[j]))
                        .sum::<Rational64>()
                })
                .all(|c| c >= Rational64::zero())
        })
        .collect();
    pos.sort();
    pos
}

fn invert_rational(m: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m.to_vec();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational64::from_integer(1)
                    } else {
                        Rational64::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&row| !a[row][col].is_zero()).expect("singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col];
                for j in 0..n {
                    let acj = a[col][j];
                    let icj = inv[col][j];
                    a[row][j] -= f * acj;
                    inv[row][j] -= f * icj;
                }
            }
        }
    }
    inv
}

/// Full weight system of the irrep with highest weight `mu`: pairs
/// `(weight, multiplicity)` covering every Weyl image.
pub fn weight_system(alg: &AlgebraData, mu: &Weight) -> Result<Vec<(Vec<i64>, i64)>> {
    let pos = positive_roots(alg);
    // Dominant weights of the irrep: BFS downward by positive roots.
    let mut dominant: Vec<Vec<i64>> = vec![mu.0.clone()];
    let mut frontier: Vec<Vec<i64>> = vec![mu.0.clone()];
    let cap = 200_000usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for root in &pos {
                let cand: Vec<i64> = w.iter().zip(root).map(|(a, b)| a - b).collect();
                // Keep dominant candidates; non-dominant intermediates are
                // reachable through another chain of subtractions whenever
                // they support a dominant weight below, because the dominant
                // weights of an irrep form a saturated set.
                if cand.iter().all(|&x| x >= 0) && !dominant.contains(&cand) {
                    dominant.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        if dominant.len() > cap {
            return Err(Error::Invariant("weight system too large".into()));
        }
        frontier = next;
    }
    // Sort by decreasing height (inner product with ρ) so Freudenthal can
    // run top-down.
    let rho = alg.rho();
    dominant.sort_by_key(|w| {
        let h = alg.inner(w, &rho.0);
        std::cmp::Reverse((*h.numer() * 840 / *h.denom(), w.clone()))
    });
    // Freudenthal recursion for dominant multiplicities. We need, for a
    // dominant weight w and each positive root α, the multiplicities of
    // w + tα; those weights may be non-dominant, so multiplicities are
    // looked up by folding with the plain (unshifted) Weyl action.
    let mut mult: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    mult.insert(mu.0.clone(), 1);
    let lookup = |mult: &BTreeMap<Vec<i64>, i64>, alg: &AlgebraData, w: &[i64]| -> i64 {
        let mut cur = w.to_vec();
        for _ in 0..10_000 {
            if let Some(i) = (0..alg.rank).find(|&i| cur[i] < 0) {
                cur = alg.finite_reflect(&cur, i);
            } else {
                return *mult.get(&cur).unwrap_or(&0);
            }
        }
        0
    };
    let mup_norm = {
        let shifted: Vec<i64> = mu.0.iter().zip(&rho.0).map(|(a, b)| a + b).collect();
        alg.inner(&shifted, &shifted)
    };
    for w in dominant.iter().skip(1) {
        let shifted: Vec<i64> = w.iter().zip(&rho.0).map(|(a, b)| a + b).collect();
        let denom = mup_norm - alg.inner(&shifted, &shifted);
        let mut num = Rational64::zero();
        for root in &pos {
            let mut t = 1i64;
            loop {
                let up: Vec<i64> = w.iter().zip(root).map(|(a, b)| a + t * b).collect();
                let m = lookup(&mult, alg, &up);
                if m == 0 {
                    // Weight strings are unbroken, so the first zero above w
                    // ends the string in this direction.
                    break;
                }
                num += Rational64::from_integer(2 * m) * alg.inner(&up, root);
                t += 1;
            }
        }
        let m = num / denom;
        debug_assert!(m.is_integer() && *m.numer() >= 0);
        mult.insert(w.clone(), *m.numer());
    }
    // Expand dominant weights into their Weyl orbits.
    let mut out = Vec::new();
    for w in &dominant {
        let m = mult[w];
        let mut orbit: Vec<Vec<i64>> = vec![w.clone()];
        let mut frontier = vec![w.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for i in 0..alg.rank {
                    let img = alg.finite_reflect(x, i);
                    if !orbit.contains(&img) {
                        orbit.push(img.clone());
                        next.push(img);
                    }
                }
            }
            frontier = next;
        }
        for x in orbit {
            out.push((x, m));
        }
    }
    Ok(out)
}

/// Fold finite Dynkin labels into the dominant chamber with the shifted
/// action; returns `None` when the shifted weight sits on a wall.
pub fn finite_shifted_fold(alg: &AlgebraData, labels: &[i64]) -> Option<(Weight, i64)> {
    let mut cur = labels.to_vec();
    let mut sign = 1i64;
    for _ in 0..10_000 {
        if cur.contains(&-1) {
            return None;
        }
        match (0..alg.rank).filter(|&i| cur[i] < 0).min_by_key(|&i| cur[i]) {
            None => return Some((Weight(cur), sign)),
            Some(i) => {
                // Shifted reflection: s_i·λ = s_i(λ+ρ) − ρ.
                let shifted: Vec<i64> = cur.iter().map(|&x| x + 1).collect();
                let img = alg.finite_reflect(&shifted, i);
                cur = img.iter().map(|&x| x - 1).collect();
                sign = -sign;
            }
        }
    }
    unreachable!("finite shifted folding did not terminate");
}

/// Racah-Speiser tensor-product decomposition: expand the weight system of
/// `mu`, shift by `λ`, and fold with signs.
pub fn racah_speiser_tensor(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, i64>> {
    let mut map: BTreeMap<Weight, i64> = BTreeMap::new();
    for (xi, m) in weight_system(alg, mu)? {
        let cand: Vec<i64> = lambda.0.iter().zip(&xi).map(|(a, b)| a + b).collect();
        if let Some((w, sign)) = finite_shifted_fold(alg, &cand) {
            *map.entry(w).or_insert(0) += sign * m;
        }
    }
    map.retain(|_, v| *v != 0);
    if map.values().any(|&v| v < 0) {
        return Err(Error::Invariant("negative tensor multiplicity".into()));
    }
    Ok(map)
}

/// Tensor product by the per-algebra combinatorial route (LR for su(N),
/// BZ for sp(4)).
pub fn tensor_product(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, i64>> {
    match alg.id {
        AlgebraId::Su(n) => Ok(lr_tensor(n, lambda, mu)),
        AlgebraId::Sp4 => Ok(sp4_tensor(lambda, mu)),
        AlgebraId::G2 => Err(Error::Unsupported {
            op: "tensor_product",
            alg: alg.id.to_string(),
        }),
    }
}

/// Dimension of the irrep with highest weight `mu` (by weight-system count);
/// used as an oracle consistency check in tests.
pub fn dimension(alg: &AlgebraData, mu: &Weight) -> Result<i64> {
    Ok(weight_system(alg, mu)?.iter().map(|(_, m)| m).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use itertools::Itertools;

    fn su(n: usize) -> AlgebraData {
        build_algebra(AlgebraId::Su(n))
    }

    fn w(labels: &[i64]) -> Weight {
        Weight(labels.to_vec())
    }

    #[test]
    fn partition_roundtrip() {
        let lam = w(&[2, 1, 3]);
        assert_eq!(dynkin_to_rows(&lam), vec![6, 4, 3]);
        assert_eq!(rows_to_dynkin(&[6, 4, 3, 0], 4).unwrap(), lam);
        // Full columns are dropped.
        assert_eq!(rows_to_dynkin(&[3, 2, 1], 3).unwrap(), w(&[1, 1]));
    }

    #[test]
    fn generated_lr_rows_match_known_lists() {
        // su(3): the five standard LR rows over (l1, l2, n11, n12, n13, n22, n23).
        let (names, rows) = lr_rows(3);
        assert_eq!(names, vec!["l1", "l2", "n11", "n12", "n13", "n22", "n23"]);
        let expect3 = vec![
            // λ1 ≥ n12, λ2 ≥ n13, λ2 + n12 ≥ n13 + n23
            vec![1, 0, 0, -1, 0, 0, 0],
            vec![0, 1, 0, 0, -1, 0, 0],
            vec![0, 1, 0, 1, -1, 0, -1],
            // n11 ≥ n22, n11 + n12 ≥ n22 + n23
            vec![0, 0, 1, 0, 0, -1, 0],
            vec![0, 0, 1, 1, 0, -1, -1],
        ];
        assert_eq!(rows.iter().sorted().collect_vec(), expect3.iter().sorted().collect_vec());

        // su(4): the eleven standard rows.
        let (names, rows) = lr_rows(4);
        assert_eq!(
            names,
            vec!["l1", "l2", "l3", "n11", "n12", "n13", "n14", "n22", "n23", "n24", "n33", "n34"]
        );
        let expect4 = vec![
            // Column-strictness block.
            vec![1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0], // λ1 ≥ n12
            vec![0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0], // λ2 ≥ n13
            vec![0, 1, 0, 0, 1, -1, 0, 0, -1, 0, 0, 0], // λ2+n12 ≥ n13+n23
            vec![0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0], // λ3 ≥ n14
            vec![0, 0, 1, 0, 0, 1, -1, 0, 0, -1, 0, 0], // λ3+n13 ≥ n14+n24
            vec![0, 0, 1, 0, 0, 1, -1, 0, 1, -1, 0, -1], // λ3+n13+n23 ≥ n14+n24+n34
            // Lattice-word block.
            vec![0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 0], // n11 ≥ n22
            vec![0, 0, 0, 1, 1, 0, 0, -1, -1, 0, 0, 0], // n11+n12 ≥ n22+n23
            vec![0, 0, 0, 1, 1, 1, 0, -1, -1, -1, 0, 0], // n11+n12+n13 ≥ n22+n23+n24
            vec![0, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0], // n22 ≥ n33
            vec![0, 0, 0, 0, 0, 0, 0, 1, 1, 0, -1, -1], // n22+n23 ≥ n33+n34
        ];
        assert_eq!(rows.iter().sorted().collect_vec(), expect4.iter().sorted().collect_vec());
    }

    #[test]
    fn lr_solutions_satisfy_generated_rows() {
        // Every enumerated solution satisfies the minimal row list, and
        // conversely every small lattice point of the row list with correct
        // row sums is enumerated.
        for n in [2usize, 3, 4] {
            let (_, rows) = lr_rows(n);
            let lam = w(&vec![1; n - 1]);
            let mu = w(&vec![1; n - 1]);
            let sols = lr_solutions(n, &lam, &mu);
            assert!(!sols.is_empty());
            for sol in &sols {
                let mut x: Vec<i64> = lam.0.clone();
                x.extend(&sol.values);
                for row in &rows {
                    let dot: i64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                    assert!(dot >= 0, "violated row {row:?} by {sol:?}");
                }
                assert_eq!(sol.mu(), mu);
            }
        }
    }

    #[test]
    fn lr_known_small_products() {
        // su(2): 2 ⊗ 2 = 1 ⊕ 3.
        assert_eq!(
            lr_tensor(2, &w(&[1]), &w(&[1])),
            BTreeMap::from([(w(&[0]), 1), (w(&[2]), 1)])
        );
        // su(3): 3 ⊗ 3̄ = 1 ⊕ 8.
        assert_eq!(
            lr_tensor(3, &w(&[1, 0]), &w(&[0, 1])),
            BTreeMap::from([(w(&[0, 0]), 1), (w(&[1, 1]), 1)])
        );
        // su(3): 8 ⊗ 8 contains the adjoint twice.
        assert_eq!(lr_multiplicity(3, &w(&[1, 1]), &w(&[1, 1]), &w(&[1, 1])), 2);
        // su(4): 15 ⊗ 15 contains the adjoint twice.
        assert_eq!(
            lr_multiplicity(4, &w(&[1, 0, 1]), &w(&[1, 0, 1]), &w(&[1, 0, 1])),
            2
        );
    }

    #[test]
    fn lr_to_triple_examples() {
        // su(3), λ=(1,0), n12=n23=1: the coupling (1,0) ⊗ (0,1) ⊃ (0,0).
        let sol = LrVariables {
            n: 3,
            lambda: w(&[1, 0]),
            values: vec![0, 1, 0, 0, 1], // (n11, n12, n13, n22, n23)
        };
        assert_eq!(sol.triple(), (w(&[1, 0]), w(&[0, 1]), w(&[0, 0])));
        // su(2), all n = 0, λ=(1): (1) ⊗ (0) ⊃ (1).
        let sol = LrVariables { n: 2, lambda: w(&[1]), values: vec![0, 0] };
        assert_eq!(sol.triple(), (w(&[1]), w(&[0]), w(&[1])));
        // su(4), n11=n22=n33=1: (0,0,0) ⊗ (0,0,1) ⊃ (0,0,1) after dropping
        // the full column.
        let sol = LrVariables {
            n: 4,
            lambda: w(&[0, 0, 0]),
            values: vec![1, 0, 0, 0, 1, 0, 0, 1, 0], // n11, …, n34
        };
        assert_eq!(sol.triple(), (w(&[0, 0, 0]), w(&[0, 0, 1]), w(&[0, 0, 1])));
    }

    #[test]
    fn sp4_known_products() {
        // (1,0) ⊗ (1,0) = (0,0) ⊕ (0,1) ⊕ (2,0).
        assert_eq!(
            sp4_tensor(&w(&[1, 0]), &w(&[1, 0])),
            BTreeMap::from([(w(&[0, 0]), 1), (w(&[0, 1]), 1), (w(&[2, 0]), 1)])
        );
        // (1,1) ⊗ (1,1): the eight-term decomposition.
        assert_eq!(
            sp4_tensor(&w(&[1, 1]), &w(&[1, 1])),
            BTreeMap::from([
                (w(&[0, 0]), 1),
                (w(&[0, 1]), 1),
                (w(&[2, 0]), 2),
                (w(&[0, 2]), 1),
                (w(&[0, 3]), 1),
                (w(&[2, 1]), 2),
                (w(&[2, 2]), 1),
                (w(&[4, 0]), 1),
            ])
        );
        // (0,0) ⊗ (0,0): the single all-zero solution.
        let sols = sp4_solutions(&w(&[0, 0]), &w(&[0, 0]));
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].nu(), w(&[0, 0]));
    }

    #[test]
    fn diamonds_solve_for_all_small_products() {
        for l1 in 0..=2 {
            for l2 in 0..=2 {
                for m1 in 0..=2 {
                    for m2 in 0..=2 {
                        for v in sp4_solutions(&w(&[l1, l2]), &w(&[m1, m2])) {
                            let d = sp_diamond_from_vector(&v).expect("diamond");
                            assert_eq!(d.labels[0], l1);
                            assert_eq!(d.a[0], l1 - v.p);
                        }
                    }
                }
            }
        }
        // All-zero vector gives the all-zero diamond.
        let v = sp4_solutions(&w(&[0, 0]), &w(&[0, 0])).remove(0);
        assert_eq!(sp_diamond_from_vector(&v).unwrap().a, [0; 8]);
    }

    #[test]
    fn positive_root_counts_and_dimensions() {
        assert_eq!(positive_roots(&su(2)).len(), 1);
        assert_eq!(positive_roots(&su(3)).len(), 3);
        assert_eq!(positive_roots(&su(4)).len(), 6);
        assert_eq!(positive_roots(&build_algebra(AlgebraId::Sp4)).len(), 4);
        let sp4 = build_algebra(AlgebraId::Sp4);
        assert_eq!(dimension(&su(3), &w(&[1, 1])).unwrap(), 8);
        assert_eq!(dimension(&su(4), &w(&[1, 0, 1])).unwrap(), 15);
        assert_eq!(dimension(&sp4, &w(&[1, 0])).unwrap(), 4);
        assert_eq!(dimension(&sp4, &w(&[0, 1])).unwrap(), 5);
        assert_eq!(dimension(&sp4, &w(&[1, 1])).unwrap(), 16);
    }

    #[test]
    fn racah_speiser_matches_combinatorial_routes() {
        // su(N) boxes: all pairs with labels ≤ 2 (N = 2, 3) and a spot check
        // for N = 4; the acceptance suite sweeps wider boxes.
        for n in [2usize, 3] {
            let alg = su(n);
            let labels: Vec<Vec<i64>> = (0..n - 1)
                .map(|_| (0..=2i64).collect::<Vec<_>>())
                .multi_cartesian_product()
                .collect();
            for a in &labels {
                for b in &labels {
                    let lam = w(a);
                    let mu = w(b);
                    assert_eq!(
                        lr_tensor(n, &lam, &mu),
                        racah_speiser_tensor(&alg, &lam, &mu).unwrap(),
                        "su({n}) {lam:?} ⊗ {mu:?}"
                    );
                }
            }
        }
        let alg = su(4);
        for (a, b) in [([1, 0, 1], [1, 0, 1]), ([2, 1, 0], [0, 1, 2]), ([1, 1, 1], [1, 0, 0])] {
            let lam = w(&a);
            let mu = w(&b);
            assert_eq!(
                lr_tensor(4, &lam, &mu),
                racah_speiser_tensor(&alg, &lam, &mu).unwrap()
            );
        }
        // sp(4) box: labels ≤ 2.
        let sp4 = build_algebra(AlgebraId::Sp4);
        for l1 in 0..=2 {
            for l2 in 0..=2 {
                for m1 in 0..=2 {
                    for m2 in 0..=2 {
                        let lam = w(&[l1, l2]);
                        let mu = w(&[m1, m2]);
                        assert_eq!(
                            sp4_tensor(&lam, &mu),
                            racah_speiser_tensor(&sp4, &lam, &mu).unwrap(),
                            "sp4 {lam:?} ⊗ {mu:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_symmetry_and_conjugation() {
        // N_{λμ}^ν = N_{μλ}^ν and, for su(N), invariance under label reversal.
        let labels: Vec<Vec<i64>> = (0..2)
            .map(|_| (0..=2i64).collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect();
        for a in &labels {
            for b in &labels {
                let (lam, mu) = (w(a), w(b));
                let fwd = lr_tensor(3, &lam, &mu);
                assert_eq!(fwd, lr_tensor(3, &mu, &lam));
                let conj = |x: &Weight| Weight(x.0.iter().rev().copied().collect());
                let mut conj_map = BTreeMap::new();
                for (nu, m) in lr_tensor(3, &conj(&lam), &conj(&mu)) {
                    conj_map.insert(conj(&nu), m);
                }
                assert_eq!(fwd, conj_map);
            }
        }
    }
}
