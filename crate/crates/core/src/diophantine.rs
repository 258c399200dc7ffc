//! Hilbert bases of homogeneous linear Diophantine systems and the
//! Farkas-lemma dualization that recovers an inequality system from the
//! exponent matrix of its elementary couplings.
//!
//! The workhorse is an incremental completion procedure
//! ([`minimal_equality_solutions`]): equations are imposed one at a time,
//! each reducing to a single equation over the current generators whose
//! minimal solutions are enumerated directly (with Lambert's bound on the
//! 1-norms of the two sides). Inequality systems adjoin a slack variable
//! per cut ([`hilbert_basis`]); the dual direction ([`farkas_dual`])
//! works in the lattice of exponent vectors `α = uᵀV` and maps each
//! minimal `α` back to its integer row vector `u`.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::{Error, Result};

/// Nonnegative exponent vector over a fixed variable ordering; the common
/// currency for elementary couplings, V-matrix columns, and lattice points.
pub type CouplingVector = Vec<i64>;

/// Cap on the completion frontier before [`Error::FrontierOverflow`].
pub const FRONTIER_CAP: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Inequality systems
// ---------------------------------------------------------------------------

/// A homogeneous system of inequalities `row · x ≥ 0` over named,
/// nonnegative variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    /// Ordered variable names.
    pub vars: Vec<String>,
    /// Coefficient rows; `c ∈ rows` means `c · x ≥ 0`.
    pub rows: Vec<Vec<i64>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divide a row by the gcd of its entries (zero rows are left alone).
pub fn reduce_row(row: &[i64]) -> Vec<i64> {
    let g = row.iter().fold(0, |acc, &x| gcd(acc, x));
    if g <= 1 {
        row.to_vec()
    } else {
        row.iter().map(|x| x / g).collect()
    }
}

impl InequalitySystem {
    /// Build a system, dropping exact duplicate rows.
    pub fn new(vars: Vec<String>, rows: Vec<Vec<i64>>) -> Self {
        let mut sys = InequalitySystem { vars, rows };
        sys.rows = sys.rows.iter().map(|r| reduce_row(r)).unique().collect();
        sys
    }

    /// Content-reduced rows in sorted order, for set comparison.
    pub fn canonical_rows(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|r| reduce_row(r)).unique().sorted().collect()
    }

    /// Whether `x` satisfies every row (sign constraints included).
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.iter().all(|&v| v >= 0)
            && self
                .rows
                .iter()
                .all(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() >= 0)
    }

    /// Parse the plain-text fixture format: a `vars:` header followed by one
    /// inequality per line, e.g. `k - l1 - 2*n11 >= n12`. Both sides may
    /// carry terms; everything is moved to the left of `>= 0`. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vars: Vec<String> = Vec::new();
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                vars = rest.split_whitespace().map(str::to_string).collect();
                continue;
            }
            if vars.is_empty() {
                return Err(Error::Parse("missing `vars:` header".into()));
            }
            let (lhs, rhs) = line
                .split_once(">=")
                .ok_or_else(|| Error::Parse(format!("no `>=` in row `{line}`")))?;
            let mut row = vec![0i64; vars.len()];
            parse_side(lhs, 1, &vars, &mut row)?;
            parse_side(rhs, -1, &vars, &mut row)?;
            rows.push(row);
        }
        Ok(InequalitySystem::new(vars, rows))
    }

    /// Render in the fixture format accepted by [`InequalitySystem::parse`].
    pub fn render(&self) -> String {
        let mut out = format!("vars: {}\n", self.vars.join(" "));
        for row in &self.rows {
            let mut line = String::new();
            for (c, v) in row.iter().zip(&self.vars) {
                match *c {
                    0 => {}
                    1 => line.push_str(&format!(" + {v}")),
                    -1 => line.push_str(&format!(" - {v}")),
                    c if c > 0 => line.push_str(&format!(" + {c}*{v}")),
                    c => line.push_str(&format!(" - {}*{v}", -c)),
                }
            }
            if line.is_empty() {
                line = " 0".into();
            }
            out.push_str(line.trim_start_matches(" +").trim_start());
            out.push_str(" >= 0\n");
        }
        out
    }
}

fn parse_side(side: &str, sign: i64, vars: &[String], row: &mut [i64]) -> Result<()> {
    // Tokenize into signed terms: optional coefficient, `*`, variable, or a
    // bare integer (only `0` is meaningful in a homogeneous row).
    let cleaned = side.replace('-', " - ").replace('+', " + ");
    let tokens: Vec<&str> = cleaned.split_whitespace().collect();
    let mut term_sign = 1i64;
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i] {
            "+" => term_sign = 1,
            "-" => term_sign = -1,
            tok => {
                let (coeff, var) = match tok.split_once('*') {
                    Some((c, v)) => (
                        c.parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?,
                        v,
                    ),
                    None => match tok.parse::<i64>() {
                        Ok(0) => {
                            i += 1;
                            term_sign = 1;
                            continue;
                        }
                        Ok(n) => {
                            return Err(Error::Parse(format!(
                                "non-zero constant {n} in homogeneous row"
                            )))
                        }
                        Err(_) => (1, tok),
                    },
                };
                let idx = vars
                    .iter()
                    .position(|v| v == var)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{var}`")))?;
                row[idx] += sign * term_sign * coeff;
                term_sign = 1;
            }
        }
        i += 1;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exponent matrices
// ---------------------------------------------------------------------------

/// The matrix `V` whose columns are elementary-coupling exponent vectors
/// over a named variable ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    /// Row labels (variable names, level variable first).
    pub row_names: Vec<String>,
    /// One exponent vector per elementary coupling.
    pub columns: Vec<CouplingVector>,
}

impl ExponentMatrix {
    /// `V a` for a nonnegative combination `a` of columns.
    pub fn apply(&self, a: &[i64]) -> CouplingVector {
        let mut x = vec![0i64; self.row_names.len()];
        for (col, &c) in self.columns.iter().zip(a) {
            for (xi, vi) in x.iter_mut().zip(col) {
                *xi += c * vi;
            }
        }
        x
    }
}

// ---------------------------------------------------------------------------
// Single-equation minimal solutions
// ---------------------------------------------------------------------------

/// Minimal nonzero solutions of the single homogeneous equation
/// `Σ values_i · a_i = 0` over `ℕ^g`.
///
/// Zero-coefficient indices contribute their unit vectors; mixed solutions
/// balance a positive against a negative side and, by Lambert's bound, a
/// minimal solution has positive-side 1-norm at most `max |negative value|`
/// and negative-side 1-norm at most `max positive value`. Solutions are
/// enumerated per coefficient-value pattern (minimality is decided by the
/// pattern alone) and expanded over the concrete index sets.
fn single_equation_minimal(values: &[i64]) -> Result<Vec<Vec<i64>>> {
    let g = values.len();
    let unit = |i: usize| {
        let mut e = vec![0i64; g];
        e[i] = 1;
        e
    };
    let mut out: Vec<Vec<i64>> =
        (0..g).filter(|&i| values[i] == 0).map(unit).collect();
    let mut pos: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut neg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &v) in values.iter().enumerate() {
        match v.cmp(&0) {
            std::cmp::Ordering::Greater => pos.entry(v).or_default().push(i),
            std::cmp::Ordering::Less => neg.entry(-v).or_default().push(i),
            std::cmp::Ordering::Equal => {}
        }
    }
    if pos.is_empty() || neg.is_empty() {
        return Ok(out);
    }
    let pvals: Vec<i64> = pos.keys().copied().collect();
    let qvals: Vec<i64> = neg.keys().copied().collect();
    let amax = *qvals.iter().max().unwrap();
    let bmax = *pvals.iter().max().unwrap();
    let apatterns = bounded_patterns(pvals.len(), amax);
    let bpatterns = bounded_patterns(qvals.len(), bmax);
    let weight = |counts: &[i64], vals: &[i64]| -> i64 { dot(counts, vals) };
    for ca in &apatterns {
        let pa = weight(ca, &pvals);
        if pa == 0 {
            continue;
        }
        for cb in &bpatterns {
            if weight(cb, &qvals) != pa {
                continue;
            }
            if has_balanced_strict_subpattern(ca, cb, &pvals, &qvals) {
                continue;
            }
            // Expand the pattern over concrete indices: each value class
            // distributes its count over its index set in every way.
            let adists = class_distributions(ca, &pvals, &pos);
            let bdists = class_distributions(cb, &qvals, &neg);
            if out.len() + adists.len() * bdists.len() > FRONTIER_CAP {
                return Err(Error::FrontierOverflow(out.len() + adists.len() * bdists.len()));
            }
            for da in &adists {
                for db in &bdists {
                    let mut a = vec![0i64; g];
                    for &(i, c) in da.iter().chain(db) {
                        a[i] = c;
                    }
                    out.push(a);
                }
            }
        }
    }
    Ok(out)
}

/// All count vectors of the given length with entry sum ≤ `cap`.
fn bounded_patterns(len: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                let used: i64 = p.iter().sum();
                (0..=(cap - used)).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Whether a nonzero strict sub-pattern of `(ca, cb)` is itself balanced;
/// if so the pattern's expansions are never minimal.
fn has_balanced_strict_subpattern(
    ca: &[i64],
    cb: &[i64],
    pvals: &[i64],
    qvals: &[i64],
) -> bool {
    let mut subs = vec![(vec![], 0i64)];
    for (i, &c) in ca.iter().enumerate() {
        subs = subs
            .into_iter()
            .flat_map(|(p, w): (Vec<i64>, i64)| {
                (0..=c).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    (q, w + x * pvals[i])
                })
            })
            .collect();
    }
    for (pa, wa) in subs {
        let mut bsubs = vec![(vec![], 0i64)];
        for (i, &c) in cb.iter().enumerate() {
            bsubs = bsubs
                .into_iter()
                .flat_map(|(p, w): (Vec<i64>, i64)| {
                    (0..=c).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        (q, w + x * qvals[i])
                    })
                })
                .collect();
        }
        for (pb, wb) in bsubs {
            if wa != wb {
                continue;
            }
            let zero = wa == 0 && pa.iter().all(|&x| x == 0) && pb.iter().all(|&x| x == 0);
            let full = pa == ca && pb == cb;
            if !zero && !full {
                return true;
            }
        }
    }
    false
}

/// Expand per-value counts into concrete `(index, count)` assignments: for
/// each value class, every multiset of its indices with the class count.
fn class_distributions(
    counts: &[i64],
    vals: &[i64],
    classes: &BTreeMap<i64, Vec<usize>>,
) -> Vec<Vec<(usize, i64)>> {
    let mut out: Vec<Vec<(usize, i64)>> = vec![vec![]];
    for (ci, &v) in vals.iter().enumerate() {
        let c = counts[ci];
        if c == 0 {
            continue;
        }
        let idxs = &classes[&v];
        let splits = count_splits(c, idxs.len());
        out = out
            .into_iter()
            .flat_map(|base| {
                splits.iter().map(move |split| {
                    let mut b = base.clone();
                    for (&i, &cnt) in idxs.iter().zip(split) {
                        if cnt > 0 {
                            b.push((i, cnt));
                        }
                    }
                    b
                })
            })
            .collect();
    }
    out
}

/// All ways to split `total` into `slots` nonnegative parts.
fn count_splits(total: i64, slots: usize) -> Vec<Vec<i64>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in count_splits(total - first, slots - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Minimal nonnegative solutions of the homogeneous equality system
/// `A z = 0` (the Hilbert basis of its solution monoid). The system is
/// processed one equation at a time: the current generators reduce the next
/// equation to a single equation over their coefficients, whose minimal
/// solutions map onto a generating set that is then cut down to the
/// pointwise-minimal vectors (which, for equality monoids, are exactly the
/// irreducible elements).
pub fn minimal_equality_solutions(a: &[Vec<i64>], nvars: usize) -> Result<Vec<Vec<i64>>> {
    let mut gens: Vec<Vec<i64>> = (0..nvars)
        .map(|i| {
            let mut e = vec![0i64; nvars];
            e[i] = 1;
            e
        })
        .collect();
    for row in a {
        let values: Vec<i64> = gens.iter().map(|g| dot(row, g)).collect();
        if values.iter().all(|&v| v == 0) {
            continue;
        }
        let mut cands: Vec<Vec<i64>> = Vec::new();
        for sol in single_equation_minimal(&values)? {
            let mut x = vec![0i64; nvars];
            for (coef, g) in sol.iter().zip(&gens) {
                if *coef != 0 {
                    for (xi, gi) in x.iter_mut().zip(g) {
                        *xi += coef * gi;
                    }
                }
            }
            cands.push(x);
        }
        gens = reduce_to_pointwise_minimal(cands);
    }
    gens.sort();
    Ok(gens)
}

/// Keep exactly the pointwise-minimal vectors of a candidate set
/// (processing by increasing 1-norm, so every dropped vector has a kept
/// witness below it).
fn reduce_to_pointwise_minimal(cands: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut list: Vec<Vec<i64>> = cands.into_iter().unique().collect();
    list.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for x in list {
        if !kept.iter().any(|y| y.iter().zip(&x).all(|(a, b)| a <= b)) {
            kept.push(x);
        }
    }
    kept
}

/// Minimal solutions (the Hilbert basis) of the single inequality
/// `Σ values_i · a_i ≥ 0` over `ℕ^g`: the surplus becomes a slack variable
/// in a single equation, and the slack coordinate is projected away.
fn single_inequality_basis(values: &[i64]) -> Result<Vec<Vec<i64>>> {
    let mut vals = values.to_vec();
    vals.push(-1);
    let sols = single_equation_minimal(&vals)?;
    Ok(sols
        .into_iter()
        .map(|mut a| {
            a.pop();
            a
        })
        .filter(|a| a.iter().any(|&v| v != 0))
        .unique()
        .collect())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Remove generators that are sums of another generator and a monoid
/// element (membership is directly checkable: nonnegative and all
/// processed rows satisfied). Candidates are processed by increasing
/// 1-norm; any reducible candidate decomposes through an irreducible of
/// strictly smaller norm, so checking against the kept set suffices. The
/// survivors are exactly the irreducible elements.
fn reduce_generators(cands: Vec<Vec<i64>>, processed: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let member = |z: &[i64]| -> bool {
        z.iter().all(|&v| v >= 0)
            && z.iter().any(|&v| v != 0)
            && processed.iter().all(|r| dot(r, z) >= 0)
    };
    let mut list: Vec<Vec<i64>> = cands.into_iter().unique().collect();
    list.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for x in list {
        let reducible = kept.iter().any(|y| {
            let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            member(&diff)
        });
        if !reducible {
            kept.push(x);
        }
    }
    kept
}

/// Hilbert basis of `{x ≥ 0 : row · x ≥ 0 for every row}`. The system is
/// cut one halfspace at a time: the solutions over the current generators
/// form a one-inequality system whose minimal-solution basis (with the
/// surplus as slack variable) maps onto a generating set of the cut
/// monoid, which is then reduced to its irreducible elements. Minimality
/// of a lattice point forces minimality of every representation, so no
/// basis element is ever lost by the cut.
pub fn hilbert_basis(sys: &InequalitySystem) -> Result<Vec<CouplingVector>> {
    let n = sys.vars.len();
    let mut gens: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut processed: Vec<Vec<i64>> = Vec::new();
    for row in &sys.rows {
        let values: Vec<i64> = gens.iter().map(|g| dot(row, g)).collect();
        processed.push(row.clone());
        if values.iter().all(|&v| v >= 0) {
            continue; // every generator satisfies the row; the monoid is unchanged
        }
        let mut cut: Vec<Vec<i64>> = Vec::new();
        for a in single_inequality_basis(&values)? {
            let mut x = vec![0i64; n];
            for (coef, g) in a.iter().zip(&gens) {
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi += coef * gi;
                }
            }
            cut.push(x);
        }
        gens = reduce_generators(cut, &processed);
    }
    Ok(gens.into_iter().sorted().collect())
}

// ---------------------------------------------------------------------------
// Farkas dualization
// ---------------------------------------------------------------------------

/// A fundamental solution of `uᵀV = αᵀ` with `u` integer and `α ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSolution {
    /// Free-sign row vector.
    pub u: Vec<i64>,
    /// Nonnegative exponent part, `uᵀV`.
    pub alpha: Vec<i64>,
}

/// Fundamental solutions of `uᵀV = αᵀ, u ∈ ℤ^m, α ∈ ℕ^n`.
///
/// Because `V` has full row rank, `u ↦ α = uᵀV` identifies the solution
/// set with the lattice points of the row space of `V` that lie in the
/// nonnegative orthant — a pointed monoid cut out by the column relations
/// `B α = 0` (`B` a rational kernel basis of the columns). Its minimal
/// elements are found by incremental completion in α-space; each is
/// mapped back to `u` by solving `uᵀV = α`. When the row lattice is not
/// saturated in ℤⁿ, divisibility congruences derived from the Smith
/// normal form of `V` are imposed alongside the column relations, so
/// every minimal α is guaranteed an integer preimage.
pub fn fundamental_dual_solutions(v: &ExponentMatrix) -> Result<Vec<DualSolution>> {
    let m = v.row_names.len();
    let n = v.columns.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Matrix with rows indexed by variables, columns by couplings.
    let mat: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..n).map(|c| v.columns[c][i]).collect())
        .collect();
    let kernel = rational_nullspace(&mat);
    let solver = match RowSolver::new(&mat) {
        Some(s) => s,
        None => {
            return Err(Error::Invariant(
                "degenerate exponent matrix: rows are linearly dependent".into(),
            ))
        }
    };
    // Congruences cutting the saturation down to the row lattice itself:
    // with U·mat·W = D diagonal (W unimodular), α lies in the integer row
    // span iff dᵢ divides (α·W)ᵢ for every invariant factor dᵢ > 1. Each
    // congruence becomes an equation via a free-sign slack pair.
    let (diag, w) = smith_column_transform(&mat);
    let congruences: Vec<(Vec<i64>, i64)> = diag
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d.abs() > 1)
        .map(|(i, &d)| {
            let f: Vec<i64> = (0..n).map(|j| w[j][i]).collect();
            (f, d.abs())
        })
        .collect();
    let nv = n + 2 * congruences.len();
    let mut eqs: Vec<Vec<i64>> = kernel
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.resize(nv, 0);
            row
        })
        .collect();
    for (ci, (f, d)) in congruences.iter().enumerate() {
        let mut row = f.clone();
        row.resize(nv, 0);
        row[n + 2 * ci] = -d;
        row[n + 2 * ci + 1] = *d;
        eqs.push(row);
    }
    let lifted = minimal_equality_solutions(&eqs, nv)?;
    let cands: Vec<Vec<i64>> = lifted
        .into_iter()
        .map(|z| z[..n].to_vec())
        .filter(|a| a.iter().any(|&x| x != 0))
        .unique()
        .collect();
    // The projections generate the lattice-point monoid; keep its minimal
    // elements (membership of a difference is directly checkable).
    let in_monoid = |z: &[i64]| -> bool {
        z.iter().all(|&x| x >= 0)
            && z.iter().any(|&x| x != 0)
            && kernel.iter().all(|r| dot(r, z) == 0)
            && congruences.iter().all(|(f, d)| dot(f, z) % d == 0)
    };
    let mut list = cands;
    list.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    let mut alphas: Vec<Vec<i64>> = Vec::new();
    for x in list {
        let reducible = alphas.iter().any(|y| {
            let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            in_monoid(&diff)
        });
        if !reducible {
            alphas.push(x);
        }
    }
    let mut out = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        match solver.solve(&alpha) {
            Some(u) => out.push(DualSolution { u, alpha }),
            None => {
                return Err(Error::Invariant(
                    "dual exponent vector has no integer preimage".into(),
                ))
            }
        }
    }
    out.sort_by(|a, b| (&a.alpha, &a.u).cmp(&(&b.alpha, &b.u)));
    Ok(out)
}

/// Diagonalization `U·mat·W = D` by integer row and column operations;
/// returns the diagonal entries and the accumulated column transform `W`
/// (unimodular). Only `W` and the diagonal are needed, so `U` is not kept.
fn smith_column_transform(mat: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let m = mat.len();
    let n = if m == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<i128>> =
        mat.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut w: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let r = m.min(n);
    for t in 0..r {
        loop {
            // Move the smallest-magnitude nonzero of the trailing block
            // to the pivot position.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                for row in w.iter_mut() {
                    row.swap(t, bj);
                }
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in (t + 1)..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in (t + 1)..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in w.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                break;
            }
        }
    }
    let diag: Vec<i64> = (0..r).map(|t| a[t][t] as i64).collect();
    let w64: Vec<Vec<i64>> = w
        .iter()
        .map(|row| row.iter().map(|&x| x as i64).collect())
        .collect();
    (diag, w64)
}

/// Exact rational null space of `mat · β = 0`, cleared to integer rows.
fn rational_nullspace(mat: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<i128>> =
        mat.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if let Some(p) = (r..rows).find(|&i| a[i][c] != 0) {
            a.swap(r, p);
            // Fraction-free elimination below and above row r.
            for i in 0..rows {
                if i != r && a[i][c] != 0 {
                    let (num, den) = (a[i][c], a[r][c]);
                    for j in 0..cols {
                        a[i][j] = a[i][j] * den - a[r][j] * num;
                    }
                    let g = a[i].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                    if g > 1 {
                        for x in a[i].iter_mut() {
                            *x /= g;
                        }
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free_cols {
        // β_f = 1, pivot entries solved back; denominators cleared at the
        // end. Each β_j is a reduced fraction (num, den).
        let mut beta: Vec<(i128, i128)> = vec![(0, 1); cols];
        beta[f] = (1, 1);
        // Solve each pivot row: a[ri][pc]·β_pc + Σ_{j>pc} a[ri][j]·β_j = 0.
        for (ri, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut num = 0i128;
            let mut den = 1i128;
            for j in (pc + 1)..cols {
                let (bn, bd) = beta[j];
                if bn != 0 && a[ri][j] != 0 {
                    // num/den += a[ri][j] * bn/bd
                    num = num * bd + a[ri][j] * bn * den;
                    den *= bd;
                    let g = gcd128(num, den);
                    if g > 1 {
                        num /= g;
                        den /= g;
                    }
                }
            }
            // β_pc = -(num/den)/a[ri][pc]
            let mut bn = -num;
            let mut bd = den * a[ri][pc];
            if bd < 0 {
                bn = -bn;
                bd = -bd;
            }
            let g = gcd128(bn, bd);
            if g > 1 {
                bn /= g;
                bd /= g;
            }
            beta[pc] = (bn, bd);
        }
        let lcm = beta.iter().fold(1i128, |acc, &(_, d)| {
            let g = gcd128(acc, d);
            acc / g * d
        });
        let mut row: Vec<i64> = beta.iter().map(|&(n, d)| (n * (lcm / d)) as i64).collect();
        let g = row.iter().fold(0i64, |acc, &x| gcd(acc, x));
        if g > 1 {
            row = row.iter().map(|x| x / g).collect();
        }
        basis.push(row);
    }
    basis
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Solves `uᵀ · mat_sub = α_sub` through a precomputed invertible square
/// subsystem (Cramer), verifying the full system and integrality.
struct RowSolver {
    mat: Vec<Vec<i64>>,
    picked: Vec<usize>,
    det: i128,
    adj: Vec<Vec<i128>>,
}

impl RowSolver {
    /// Pick `m` independent columns and precompute the adjugate of the
    /// square submatrix; `None` when the rows are dependent.
    fn new(mat: &[Vec<i64>]) -> Option<RowSolver> {
        let m = mat.len();
        let cols = if m == 0 { 0 } else { mat[0].len() };
        // Greedy independent-column selection by rank growth.
        let mut picked: Vec<usize> = Vec::new();
        for c in 0..cols {
            if picked.len() == m {
                break;
            }
            let mut trial = picked.clone();
            trial.push(c);
            if submatrix_rank(mat, &trial) == trial.len() {
                picked = trial;
            }
        }
        if picked.len() < m {
            return None;
        }
        let sq: Vec<Vec<i128>> = (0..m)
            .map(|i| picked.iter().map(|&c| mat[i][c] as i128).collect())
            .collect();
        let det = determinant(&sq);
        if det == 0 {
            return None;
        }
        // Adjugate via cofactors (m ≤ 13: fine).
        let mut adj = vec![vec![0i128; m]; m];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let minor: Vec<Vec<i128>> = (0..m)
                    .filter(|&r| r != j)
                    .map(|r| (0..m).filter(|&c| c != i).map(|c| sq[r][c]).collect())
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                *x = sign * determinant(&minor);
            }
        }
        Some(RowSolver { mat: mat.to_vec(), picked, det, adj })
    }

    /// Integer `u` with `uᵀ·mat = α`, or `None` when no integer (or no
    /// consistent) solution exists.
    fn solve(&self, alpha: &[i64]) -> Option<Vec<i64>> {
        let m = self.mat.len();
        let sub: Vec<i128> = self.picked.iter().map(|&c| alpha[c] as i128).collect();
        let mut u = Vec::with_capacity(m);
        for i in 0..m {
            // `uᵀ·sq = subᵀ` means `sqᵀ·u = sub`, so apply the adjugate
            // transposed.
            let num: i128 = (0..m).map(|j| self.adj[j][i] * sub[j]).sum();
            if num % self.det != 0 {
                return None;
            }
            u.push((num / self.det) as i64);
        }
        // Verify every column, not just the picked ones.
        let ok = (0..alpha.len()).all(|c| {
            (0..m).map(|i| u[i] * self.mat[i][c]).sum::<i64>() == alpha[c]
        });
        ok.then_some(u)
    }
}

fn submatrix_rank(mat: &[Vec<i64>], cols: &[usize]) -> usize {
    let m = mat.len();
    let mut a: Vec<Vec<i128>> = (0..m)
        .map(|i| cols.iter().map(|&c| mat[i][c] as i128).collect())
        .collect();
    let ncols = cols.len();
    let mut rank = 0usize;
    for c in 0..ncols {
        if let Some(p) = (rank..m).find(|&i| a[i][c] != 0) {
            a.swap(rank, p);
            for i in (rank + 1)..m {
                if a[i][c] != 0 {
                    let (num, den) = (a[i][c], a[rank][c]);
                    for j in 0..ncols {
                        a[i][j] = a[i][j] * den - a[rank][j] * num;
                    }
                    let g = a[i].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                    if g > 1 {
                        for x in a[i].iter_mut() {
                            *x /= g;
                        }
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

fn determinant(a: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination.
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Recover the inequality system generated by the columns of `V`: the
/// `u`-parts of the fundamental dual solutions, content-reduced.
pub fn farkas_dual(v: &ExponentMatrix) -> Result<InequalitySystem> {
    let rows = fundamental_dual_solutions(v)?
        .into_iter()
        .map(|d| d.u)
        .collect();
    Ok(InequalitySystem::new(v.row_names.clone(), rows))
}

/// All decompositions `a ≥ 0` with `V a = x`. Every column must have a
/// positive entry in some row where `x` is positive-bounded, which makes
/// the search finite (in the fusion setting the level row does this).
pub fn decompose(x: &[i64], v: &ExponentMatrix) -> Vec<Vec<i64>> {
    fn rec(
        x: &[i64],
        v: &ExponentMatrix,
        j: usize,
        acc: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if x.iter().any(|&e| e < 0) {
            return;
        }
        if j == v.columns.len() {
            if x.iter().all(|&e| e == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let col = &v.columns[j];
        let max = col
            .iter()
            .zip(x)
            .filter(|(c, _)| **c > 0)
            .map(|(c, e)| e / c)
            .min()
            .unwrap_or(0);
        for c in 0..=max {
            let rem: Vec<i64> = x.iter().zip(col).map(|(e, v)| e - c * v).collect();
            acc.push(c);
            rec(&rem, v, j + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(x, v, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Verify that `hilbert_basis(farkas_dual(V))` returns exactly the columns
/// of `V`.
pub fn roundtrip_check(v: &ExponentMatrix) -> Result<bool> {
    let basis = hilbert_basis(&farkas_dual(v)?)?;
    let cols: Vec<CouplingVector> = v.columns.iter().cloned().sorted().collect();
    Ok(basis == cols)
}
