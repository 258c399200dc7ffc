//! Elementary-coupling catalogs, outer-automorphism generation of fusion
//! elementary couplings, fusion bases, closed-form and tableau threshold
//! rules, and fusion-coefficient counting by lattice-point enumeration.
//!
//! Everything is organized around one exponent lattice per algebra: a
//! coupling at level `k` is the vector `(k, Dynkin labels of λ, LR/BZ
//! variables)`. The elementary couplings are the Hilbert-basis generators
//! of that lattice's solution monoid, the fusion basis is the dual
//! inequality description, and threshold levels are read off the
//! `k`-carrying rows.

use std::collections::BTreeSet;

use crate::algebra::{outer_apply, outer_order, AlgebraData, AlgebraId, Weight};
use crate::diophantine::{
    decompose, farkas_dual, CouplingVector, ExponentMatrix, InequalitySystem,
};
use crate::fusion::threshold_bruteforce;
use crate::tensor::{lr_rows, lr_solutions, lr_var_names, sp4_solutions, LrVariables,
    SpCouplingVector};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// One elementary coupling: a named triple with its threshold level and its
/// exponent vector over the algebra's fusion variable ordering (`k` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryCoupling {
    /// Catalog name (`E7`, `B3`, `Dp1`, `F`, …).
    pub name: String,
    /// First weight.
    pub lambda: Weight,
    /// Second weight.
    pub mu: Weight,
    /// Product-side weight.
    pub nu: Weight,
    /// Threshold level; equals the vector's `k` entry.
    pub k0: i64,
    /// Exponent vector `(k, λ labels, LR/BZ variables)`.
    pub vector: CouplingVector,
}

impl ElementaryCoupling {
    /// The vector without the level entry.
    pub fn finite_vector(&self) -> Vec<i64> {
        self.vector[1..].to_vec()
    }
}

/// The inequality description of an algebra's fusion lattice: the tensor
/// subsystem (LR or BZ rows) together with the level-carrying rows, stored
/// as the full fundamental dual system.
#[derive(Clone, Debug)]
pub struct FusionBasis {
    /// Which algebra.
    pub alg: AlgebraId,
    /// All fundamental rows (`k`-rows, tensor rows, positivity rows).
    pub system: InequalitySystem,
}

impl FusionBasis {
    /// The rows with a positive `k` coefficient.
    pub fn k_rows(&self) -> Vec<Vec<i64>> {
        self.system.rows.iter().filter(|r| r[0] > 0).cloned().collect()
    }
}

/// A multiplicative relation between elementary couplings: two formal
/// products with identical exponent-vector sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syzygy {
    /// Left side, `(coupling name, power)`.
    pub left: Vec<(String, u32)>,
    /// Right side.
    pub right: Vec<(String, u32)>,
}

// ---------------------------------------------------------------------------
// Variable orderings
// ---------------------------------------------------------------------------

/// Fusion variable names, `k` first: `(k, l1, …, n11, …)` for su(N) and
/// `(k, l1, l2, m1, m2, s1, s2, p, q)` for sp(4), with `s_i = r_i / 2`.
pub fn variable_names(alg: AlgebraId) -> Result<Vec<String>> {
    let mut names = vec!["k".to_string()];
    names.extend(finite_variable_names(alg)?);
    Ok(names)
}

/// The fusion variable names without `k`.
pub fn finite_variable_names(alg: AlgebraId) -> Result<Vec<String>> {
    match alg {
        AlgebraId::Su(n) if (2..=4).contains(&n) => {
            let mut names: Vec<String> = (1..n).map(|i| format!("l{i}")).collect();
            names.extend(lr_var_names(n));
            Ok(names)
        }
        AlgebraId::Sp4 => Ok(["l1", "l2", "m1", "m2", "s1", "s2", "p", "q"]
            .iter()
            .map(|s| s.to_string())
            .collect()),
        _ => Err(Error::Unsupported {
            op: "coupling catalog".into(),
            alg: alg.to_string(),
        }),
    }
}

/// The finite-variable assignment of one su(N) LR solution:
/// `(λ labels, n values)`.
pub fn su_assignment(sol: &LrVariables) -> Vec<i64> {
    let mut v = sol.lambda.0.clone();
    v.extend(sol.values.iter().copied());
    v
}

/// The finite-variable assignment of one sp(4) BZ solution:
/// `(l1, l2, m1, m2, s1, s2, p, q)`.
pub fn sp_assignment(sol: &SpCouplingVector) -> Vec<i64> {
    vec![
        sol.lambda.0[0],
        sol.lambda.0[1],
        sol.mu.0[0],
        sol.mu.0[1],
        sol.s1,
        sol.s2,
        sol.p,
        sol.q,
    ]
}

/// All finite-variable assignments realizing the coupling `(λ, μ, ν)`.
pub fn coupling_solutions(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
) -> Result<Vec<Vec<i64>>> {
    match alg.id {
        AlgebraId::Su(n) => Ok(lr_solutions(n, lambda, mu)
            .into_iter()
            .filter(|s| &s.nu() == nu)
            .map(|s| su_assignment(&s))
            .collect()),
        AlgebraId::Sp4 => Ok(sp4_solutions(lambda, mu)
            .into_iter()
            .filter(|s| &s.nu() == nu)
            .map(|s| sp_assignment(&s))
            .collect()),
        _ => Err(Error::Unsupported {
            op: "coupling enumeration".into(),
            alg: alg.id.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

fn coupling(
    name: &str,
    lambda: &[i64],
    mu: &[i64],
    nu: &[i64],
    vector: &[i64],
) -> ElementaryCoupling {
    ElementaryCoupling {
        name: name.to_string(),
        lambda: Weight(lambda.to_vec()),
        mu: Weight(mu.to_vec()),
        nu: Weight(nu.to_vec()),
        k0: vector[0],
        vector: vector.to_vec(),
    }
}

/// The complete catalog of fusion elementary couplings. Counts: su(2) 4,
/// su(3) 9, sp(4) 13, su(4) 20.
pub fn fusion_elementaries(alg: AlgebraId) -> Result<Vec<ElementaryCoupling>> {
    let c = coupling;
    match alg {
        AlgebraId::Su(2) => Ok(vec![
            c("E0", &[0], &[0], &[0], &[1, 0, 0, 0]),
            c("E1", &[1], &[1], &[0], &[1, 1, 0, 1]),
            c("E2", &[1], &[0], &[1], &[1, 1, 0, 0]),
            c("E3", &[0], &[1], &[1], &[1, 0, 1, 0]),
        ]),
        AlgebraId::Su(3) => Ok(vec![
            c("E0", &[0, 0], &[0, 0], &[0, 0], &[1, 0, 0, 0, 0, 0, 0, 0]),
            c("E1", &[1, 0], &[0, 1], &[0, 0], &[1, 1, 0, 0, 1, 0, 0, 1]),
            c("E2", &[1, 0], &[0, 0], &[1, 0], &[1, 1, 0, 0, 0, 0, 0, 0]),
            c("E3", &[0, 0], &[1, 0], &[1, 0], &[1, 0, 0, 1, 0, 0, 0, 0]),
            c("E4", &[0, 1], &[1, 0], &[0, 0], &[1, 0, 1, 0, 0, 1, 0, 0]),
            c("E5", &[0, 1], &[0, 0], &[0, 1], &[1, 0, 1, 0, 0, 0, 0, 0]),
            c("E6", &[0, 0], &[0, 1], &[0, 1], &[1, 0, 0, 1, 0, 0, 1, 0]),
            c("E7", &[1, 0], &[1, 0], &[0, 1], &[1, 1, 0, 0, 1, 0, 0, 0]),
            c("E8", &[0, 1], &[0, 1], &[1, 0], &[1, 0, 1, 1, 0, 0, 0, 1]),
        ]),
        AlgebraId::Sp4 => Ok(vec![
            c("E0", &[0, 0], &[0, 0], &[0, 0], &[1, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("A1", &[0, 0], &[1, 0], &[1, 0], &[1, 0, 0, 1, 0, 0, 0, 0, 0]),
            c("A2", &[1, 0], &[0, 0], &[1, 0], &[1, 1, 0, 0, 0, 0, 0, 0, 0]),
            c("A3", &[1, 0], &[1, 0], &[0, 0], &[1, 1, 0, 1, 0, 0, 0, 1, 1]),
            c("B1", &[0, 0], &[0, 1], &[0, 1], &[1, 0, 0, 0, 1, 0, 0, 0, 0]),
            c("B2", &[0, 1], &[0, 0], &[0, 1], &[1, 0, 1, 0, 0, 0, 0, 0, 0]),
            c("B3", &[0, 1], &[0, 1], &[0, 0], &[1, 0, 1, 0, 1, 1, 1, 0, 0]),
            c("C1", &[0, 1], &[1, 0], &[1, 0], &[1, 0, 1, 1, 0, 0, 0, 0, 1]),
            c("C2", &[1, 0], &[0, 1], &[1, 0], &[1, 1, 0, 0, 1, 0, 1, 1, 0]),
            c("C3", &[1, 0], &[1, 0], &[0, 1], &[1, 1, 0, 1, 0, 0, 0, 1, 0]),
            c("D1", &[2, 0], &[0, 1], &[0, 1], &[2, 2, 0, 0, 1, 0, 1, 2, 0]),
            c("D2", &[0, 1], &[2, 0], &[0, 1], &[2, 0, 1, 2, 0, 1, 0, 0, 0]),
            c("D3", &[0, 1], &[0, 1], &[2, 0], &[2, 0, 1, 0, 1, 0, 1, 0, 0]),
        ]),
        AlgebraId::Su(4) => Ok(vec![
            c("E0", &[0; 3], &[0; 3], &[0; 3], &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("A1", &[0, 0, 0], &[0, 0, 1], &[0, 0, 1], &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0]),
            c("A2", &[0, 0, 1], &[1, 0, 0], &[0, 0, 0], &[1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
            c("A3", &[1, 0, 0], &[0, 0, 0], &[1, 0, 0], &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("B1", &[0, 0, 0], &[0, 1, 0], &[0, 1, 0], &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0]),
            c("B2", &[0, 1, 0], &[0, 1, 0], &[0, 0, 0], &[1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0]),
            c("B3", &[0, 1, 0], &[0, 0, 0], &[0, 1, 0], &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("C1", &[0, 0, 0], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("C2", &[1, 0, 0], &[0, 0, 1], &[0, 0, 0], &[1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1]),
            c("C3", &[0, 0, 1], &[0, 0, 0], &[0, 0, 1], &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            c("Dp1", &[0, 1, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
            c("Dp2", &[1, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]),
            c("Dp3", &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]),
            c("D1", &[0, 1, 0], &[0, 0, 1], &[1, 0, 0], &[1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1]),
            c("D2", &[0, 0, 1], &[0, 0, 1], &[0, 1, 0], &[1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1]),
            c("D3", &[0, 0, 1], &[0, 1, 0], &[1, 0, 0], &[1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0]),
            c("E1", &[1, 0, 1], &[0, 1, 0], &[0, 1, 0], &[2, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0]),
            c("E2", &[0, 1, 0], &[0, 1, 0], &[1, 0, 1], &[2, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0]),
            c("E3", &[0, 1, 0], &[1, 0, 1], &[0, 1, 0], &[2, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1]),
            c("F", &[1, 0, 1], &[1, 0, 1], &[1, 0, 1], &[2, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1]),
        ]),
        _ => Err(Error::Unsupported {
            op: "coupling catalog".into(),
            alg: alg.to_string(),
        }),
    }
}

/// The tensor-product elementary couplings: the fusion catalog without the
/// pure level raiser `E0` and without couplings whose finite part is a
/// product of others (`F = C1·C2·C3` at the tensor level). Vectors omit the
/// `k` entry; `k0` keeps the fusion threshold.
pub fn tensor_elementaries(alg: AlgebraId) -> Result<Vec<ElementaryCoupling>> {
    Ok(fusion_elementaries(alg)?
        .into_iter()
        .filter(|c| c.name != "E0" && c.name != "F")
        .collect())
}

/// The exponent matrix `V` whose columns are the fusion elementary vectors.
pub fn exponent_matrix(alg: AlgebraId) -> Result<ExponentMatrix> {
    Ok(ExponentMatrix {
        row_names: variable_names(alg)?,
        columns: fusion_elementaries(alg)?.into_iter().map(|c| c.vector).collect(),
    })
}

// ---------------------------------------------------------------------------
// Inequality systems
// ---------------------------------------------------------------------------

/// The finite (tensor-product) inequality system: LR rows for su(N), BZ
/// rows for sp(4), over the finite variable ordering.
pub fn tensor_system(alg: AlgebraId) -> Result<InequalitySystem> {
    match alg {
        AlgebraId::Su(n) if (2..=4).contains(&n) => {
            let (names, rows) = lr_rows(n);
            Ok(InequalitySystem::new(names, rows))
        }
        AlgebraId::Sp4 => Ok(InequalitySystem::new(
            finite_variable_names(alg)?,
            vec![
                // λ1 ≥ p, λ2 ≥ s1, λ2 ≥ s1+q−p, λ2 ≥ s2+q−p,
                // μ1 ≥ q, μ1 ≥ q+2s1−2s2, μ1 ≥ p+2s1−2s2, μ2 ≥ s2.
                vec![1, 0, 0, 0, 0, 0, -1, 0],
                vec![0, 1, 0, 0, -1, 0, 0, 0],
                vec![0, 1, 0, 0, -1, 0, 1, -1],
                vec![0, 1, 0, 0, 0, -1, 1, -1],
                vec![0, 0, 1, 0, 0, 0, 0, -1],
                vec![0, 0, 1, 0, -2, 2, 0, -1],
                vec![0, 0, 1, 0, -2, 2, -1, 0],
                vec![0, 0, 0, 1, 0, -1, 0, 0],
            ],
        )),
        _ => Err(Error::Unsupported {
            op: "tensor system".into(),
            alg: alg.to_string(),
        }),
    }
}

/// The fusion basis: the complete fundamental inequality system over
/// `(k, finite variables)`. Row counts: su(2) 4, su(3) 12, sp(4) 17,
/// su(4) 28.
pub fn fusion_basis(alg: AlgebraId) -> Result<FusionBasis> {
    let vars = variable_names(alg)?;
    let nvars = vars.len();
    let unit = |name: &str| -> Vec<i64> {
        let mut r = vec![0i64; nvars];
        r[vars.iter().position(|v| v == name).unwrap()] = 1;
        r
    };
    let mut rows: Vec<Vec<i64>> = Vec::new();
    // Level-carrying rows.
    match alg {
        AlgebraId::Su(2) => {
            rows.push(vec![1, -1, -1, 0]); // k ≥ λ1 + n11
        }
        AlgebraId::Su(3) => {
            rows.push(vec![1, -1, -1, 0, 0, 0, -1, 0]); // k ≥ λ1+λ2+n22
            rows.push(vec![1, -1, -1, -1, 0, 0, 0, 1]); // k ≥ λ1+λ2+n11−n23
            rows.push(vec![1, -1, 0, -1, 0, -1, 0, 0]); // k ≥ λ1+n11+n13
        }
        AlgebraId::Sp4 => {
            // Vars (k, l1, l2, m1, m2, s1, s2, p, q).
            rows.push(vec![1, -1, -1, 0, -1, -1, 2, 0, 0]); // k ≥ λ1+λ2+μ2+s1−2s2
            rows.push(vec![1, -1, -1, 0, -1, 0, 1, 0, 0]); // k ≥ λ1+λ2+μ2−s2
            rows.push(vec![1, -1, 0, -1, -1, 0, 0, 1, 0]); // k ≥ λ1+μ1+μ2−p
            rows.push(vec![1, -1, -1, -1, -1, 1, 0, 1, 1]); // k ≥ λ1+λ2+μ1+μ2−p−q−s1
        }
        AlgebraId::Su(4) => {
            // Vars (k, l1, l2, l3, n11, n12, n13, n14, n22, n23, n24, n33, n34).
            rows.push(vec![1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0]); // λ1+λ2+λ3+n33
            rows.push(vec![1, -1, -1, 0, -1, 0, 0, -1, 0, 0, 0, 0, 1]); // λ1+λ2+n11+n14−n34
            rows.push(vec![1, -1, 0, 0, -1, 0, -1, -1, 0, 0, 0, 0, 0]); // λ1+n11+n13+n14
            rows.push(vec![1, -1, -1, -1, 0, 0, 0, 0, -1, 0, 0, 0, 1]); // λ1+λ2+λ3+n22−n34
            rows.push(vec![1, -1, -1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0]); // λ1+λ2+n14+n22
            rows.push(vec![1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 1, 0, 1]); // λ1+λ2+λ3+n11−n24−n34
            rows.push(vec![1, -1, -1, -1, 0, 1, 0, 0, -1, -1, 0, 0, 1]); // λ1+λ2+λ3−n12+n22+n23−n34
            rows.push(vec![1, -1, -1, 0, 0, 0, 1, -1, -1, 0, -1, 0, 0]); // λ1+λ2+n14−n13+n22+n24
            rows.push(vec![1, -1, -1, 0, -1, 0, 0, -1, 0, 1, 0, 0, 0]); // λ1+λ2+n11+n14−n23
            rows.push(vec![2, -2, -2, -1, -1, 0, 0, -1, -1, 0, 0, 0, 1]); // doubled row
        }
        _ => {
            return Err(Error::Unsupported {
                op: "fusion basis".into(),
                alg: alg.to_string(),
            })
        }
    }
    // Tensor subsystem rows, padded with a zero k column.
    for row in tensor_system(alg)?.rows {
        let mut r = vec![0i64];
        r.extend(row);
        rows.push(r);
    }
    // Positivity rows that are themselves fundamental.
    let positives: &[&str] = match alg {
        AlgebraId::Su(2) => &["n11", "n12"],
        AlgebraId::Su(3) => &["n12", "n13", "n22", "n23"],
        AlgebraId::Sp4 => &["s1", "s2", "p", "q"],
        AlgebraId::Su(4) => &["n12", "n13", "n14", "n23", "n24", "n33", "n34"],
        _ => unreachable!(),
    };
    for name in positives {
        rows.push(unit(name));
    }
    // sp(4) carries one additional fundamental row implied by the others.
    if alg == AlgebraId::Sp4 {
        rows.push(vec![0, 0, 0, 1, 0, -1, 1, 0, -1]); // μ1 − q − s1 + s2 ≥ 0
    }
    Ok(FusionBasis {
        alg,
        system: InequalitySystem::new(vars, rows),
    })
}

/// Assert that the hard-coded fusion basis equals `farkas_dual(V)` up to
/// canonicalization, returning the basis.
pub fn verified_fusion_basis(alg: AlgebraId) -> Result<FusionBasis> {
    let basis = fusion_basis(alg)?;
    let derived = farkas_dual(&exponent_matrix(alg)?)?;
    if basis.system.canonical_rows() != derived.canonical_rows() {
        return Err(Error::Invariant(format!(
            "fusion basis for {alg} differs from the Farkas dual of its V matrix"
        )));
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Threshold level of one coupling solution (finite-variable assignment):
/// the smallest `k` satisfying every level-carrying row of the fusion
/// basis. The su(4) doubled row rounds up.
pub fn threshold_closed_form(alg: AlgebraId, assignment: &[i64]) -> Result<i64> {
    let basis = fusion_basis(alg)?;
    let mut k0 = 0i64;
    for row in basis.k_rows() {
        let rhs: i64 = row[1..].iter().zip(assignment).map(|(c, x)| -c * x).sum();
        k0 = k0.max(ceil_div(rhs, row[0]));
    }
    Ok(k0)
}

/// Threshold level of an su(N) LR solution by the tableau rule: the number
/// of columns of the product tableau minus the maximal number of removable
/// composite tableaux (`E8` for su(3); `D1`, `D2`, `D3`, `C1C2C3` for
/// su(4)), where a removal is allowed when the remaining configuration
/// still satisfies the LR system.
pub fn threshold_tableau_rule(sol: &LrVariables) -> Result<i64> {
    let n = sol.n;
    let removables: Vec<Vec<i64>> = match n {
        2 => vec![],
        // (l1, l2, n11, n12, n13, n22, n23)
        3 => vec![vec![0, 1, 1, 0, 0, 0, 1]],
        // (l1, l2, l3, n11, n12, n13, n14, n22, n23, n24, n33, n34)
        4 => vec![
            vec![0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1], // D1
            vec![0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1], // D2
            vec![0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0], // D3
            vec![1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1], // C1·C2·C3
        ],
        _ => {
            return Err(Error::Unsupported {
                op: "tableau threshold rule".into(),
                alg: format!("su({n})"),
            })
        }
    };
    let sys = tensor_system(AlgebraId::Su(n))?;
    let assignment = su_assignment(sol);
    Ok(sol.columns() - max_removals(&assignment, &removables, &sys))
}

/// Greatest total number of removable composite vectors such that the
/// final configuration satisfies `sys`, by exhaustive search.
fn max_removals(assignment: &[i64], removables: &[Vec<i64>], sys: &InequalitySystem) -> i64 {
    // A removal chain only counts if its final configuration satisfies the
    // system; intermediate configurations may violate it.
    fn rec(x: &[i64], removables: &[Vec<i64>], sys: &InequalitySystem, from: usize) -> i64 {
        let mut best = 0;
        for (j, r) in removables.iter().enumerate().skip(from) {
            let nx: Vec<i64> = x.iter().zip(r).map(|(a, b)| a - b).collect();
            if nx.iter().all(|&v| v >= 0) {
                let sub = rec(&nx, removables, sys, j);
                if sub + 1 > best && (sub > 0 || sys.satisfied_by(&nx)) {
                    best = sub + 1;
                }
            }
        }
        best
    }
    rec(assignment, removables, sys, 0)
}

// ---------------------------------------------------------------------------
// Counting by the basis
// ---------------------------------------------------------------------------

/// Fusion coefficient `N^{(k)}_{λμ}{}^ν` as the number of lattice points:
/// coupling-solution assignments of the triple that satisfy the full
/// fusion basis at level `k`.
pub fn count_by_basis(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
    k: i64,
) -> Result<i64> {
    let basis = fusion_basis(alg.id)?;
    let mut count = 0;
    for assignment in coupling_solutions(alg, lambda, mu, nu)? {
        let mut full = vec![k];
        full.extend(assignment);
        if basis.system.satisfied_by(&full) {
            count += 1;
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Outer-automorphism closure
// ---------------------------------------------------------------------------

/// Per-solution threshold used during closure: tableau rule for su(N),
/// brute force for sp(4) (whose image triples are multiplicity-free).
fn solution_threshold(alg: &AlgebraData, assignment: &[i64]) -> Result<i64> {
    match alg.id {
        AlgebraId::Su(n) => {
            let sol = LrVariables {
                n,
                lambda: Weight(assignment[..n - 1].to_vec()),
                values: assignment[n - 1..].to_vec(),
            };
            threshold_tableau_rule(&sol)
        }
        AlgebraId::Sp4 => {
            let sol = SpCouplingVector {
                lambda: Weight(assignment[0..2].to_vec()),
                mu: Weight(assignment[2..4].to_vec()),
                s1: assignment[4],
                s2: assignment[5],
                p: assignment[6],
                q: assignment[7],
            };
            let rec = threshold_bruteforce(alg, &sol.lambda, &sol.mu, &sol.nu())?;
            if rec.thresholds.len() != 1 {
                return Err(Error::Invariant(
                    "sp(4) closure met a coupling with multiplicity > 1".into(),
                ));
            }
            Ok(rec.thresholds[0])
        }
        _ => Err(Error::Unsupported {
            op: "solution threshold".into(),
            alg: alg.id.to_string(),
        }),
    }
}

/// Derive the fusion elementary couplings independently of the catalog:
/// affine-extend each tensor elementary at its threshold, add the pure
/// level raiser, then close under all pairs `(Aᵖ, Aᵠ)` of outer
/// automorphisms acting as `A^{p+q}` on the product side. Image couplings
/// that decompose over the known set are discarded; the rest are new
/// elementaries. Errors if the closure does not stabilize.
pub fn derive_fusion_elementaries(alg: &AlgebraData) -> Result<Vec<CouplingVector>> {
    let nvars = variable_names(alg.id)?.len();
    let mut e0 = vec![0i64; nvars];
    e0[0] = 1;
    let mut vectors: BTreeSet<CouplingVector> = BTreeSet::new();
    vectors.insert(e0);
    // Seeds: tensor elementaries at their own thresholds.
    for t in tensor_elementaries(alg.id)? {
        let k0 = solution_threshold(alg, &t.finite_vector())?;
        let mut v = vec![k0];
        v.extend(t.finite_vector());
        vectors.insert(v);
    }
    let order = outer_order(alg);
    for _round in 0..8 {
        let matrix = ExponentMatrix {
            row_names: variable_names(alg.id)?,
            columns: vectors.iter().cloned().collect(),
        };
        let mut added = Vec::new();
        let triples: Vec<(i64, Weight, Weight, Weight)> = vectors
            .iter()
            .map(|v| triple_of_vector(alg, v))
            .collect::<Result<_>>()?;
        for (level, lambda, mu, nu) in triples {
            for p in 0..order {
                for q in 0..order {
                    if p == 0 && q == 0 {
                        continue;
                    }
                    let il = outer_apply(alg, &alg.affine_extend(&lambda, level), p).finite();
                    let im = outer_apply(alg, &alg.affine_extend(&mu, level), q).finite();
                    let iv = outer_apply(alg, &alg.affine_extend(&nu, level), (p + q) % order)
                        .finite();
                    for assignment in coupling_solutions(alg, &il, &im, &iv)? {
                        let k0 = solution_threshold(alg, &assignment)?;
                        if k0 > level {
                            continue; // not the image of a level-`level` coupling
                        }
                        let mut v = vec![k0];
                        v.extend(assignment);
                        if vectors.contains(&v) || !decompose(&v, &matrix).is_empty() {
                            continue;
                        }
                        added.push(v);
                    }
                }
            }
        }
        if added.is_empty() {
            return Ok(vectors.into_iter().collect());
        }
        vectors.extend(added);
    }
    Err(Error::Invariant(format!(
        "outer-automorphism closure for {} did not stabilize",
        alg.id
    )))
}

/// Reconstruct `(k, λ, μ, ν)` from an exponent vector.
fn triple_of_vector(alg: &AlgebraData, v: &CouplingVector) -> Result<(i64, Weight, Weight, Weight)> {
    let a = &v[1..];
    match alg.id {
        AlgebraId::Su(n) => {
            let sol = LrVariables {
                n,
                lambda: Weight(a[..n - 1].to_vec()),
                values: a[n - 1..].to_vec(),
            };
            let (l, m, nu) = sol.triple();
            Ok((v[0], l, m, nu))
        }
        AlgebraId::Sp4 => {
            let sol = SpCouplingVector {
                lambda: Weight(a[0..2].to_vec()),
                mu: Weight(a[2..4].to_vec()),
                s1: a[4],
                s2: a[5],
                p: a[6],
                q: a[7],
            };
            Ok((v[0], sol.lambda.clone(), sol.mu.clone(), sol.nu()))
        }
        _ => Err(Error::Unsupported {
            op: "vector triple".into(),
            alg: alg.id.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Syzygies
// ---------------------------------------------------------------------------

fn syzygy(left: &[(&str, u32)], right: &[(&str, u32)]) -> Syzygy {
    Syzygy {
        left: left.iter().map(|&(n, p)| (n.to_string(), p)).collect(),
        right: right.iter().map(|&(n, p)| (n.to_string(), p)).collect(),
    }
}

/// Vector sum of one side of a syzygy.
pub fn syzygy_side_vector(
    side: &[(String, u32)],
    catalog: &[ElementaryCoupling],
) -> Result<CouplingVector> {
    let nvars = catalog[0].vector.len();
    let mut sum = vec![0i64; nvars];
    for (name, power) in side {
        let c = catalog
            .iter()
            .find(|c| &c.name == name)
            .ok_or_else(|| Error::Invariant(format!("unknown coupling {name} in syzygy")))?;
        for (s, v) in sum.iter_mut().zip(&c.vector) {
            *s += i64::from(*power) * v;
        }
    }
    Ok(sum)
}

/// The generating relations between fusion elementary couplings, each
/// verified as an exact exponent-vector identity.
pub fn syzygies(alg: AlgebraId) -> Result<Vec<Syzygy>> {
    let list = match alg {
        AlgebraId::Su(2) => vec![],
        AlgebraId::Su(3) => vec![syzygy(
            &[("E1", 1), ("E3", 1), ("E5", 1)],
            &[("E0", 1), ("E7", 1), ("E8", 1)],
        )],
        AlgebraId::Sp4 => vec![
            syzygy(&[("A1", 2), ("B2", 1), ("B3", 1)], &[("D2", 1), ("D3", 1)]),
            syzygy(&[("E0", 1), ("C1", 2), ("D1", 1)], &[("A3", 2), ("B2", 1), ("D3", 1)]),
            syzygy(&[("E0", 1), ("B2", 1), ("C2", 2)], &[("D1", 1), ("D3", 1)]),
            syzygy(&[("E0", 1), ("C3", 2), ("D3", 1)], &[("A1", 2), ("B2", 1), ("D1", 1)]),
            syzygy(&[("E0", 1), ("C1", 1), ("C2", 1)], &[("A3", 1), ("D3", 1)]),
            syzygy(&[("E0", 1), ("C2", 1), ("C3", 1)], &[("A1", 1), ("D1", 1)]),
            syzygy(&[("E0", 1), ("C3", 1), ("C1", 1)], &[("A1", 1), ("A3", 1), ("B2", 1)]),
            syzygy(&[("D1", 1), ("D2", 1)], &[("E0", 1), ("B3", 1), ("C3", 2)]),
            syzygy(&[("C1", 1), ("D1", 1)], &[("A3", 1), ("B2", 1), ("C2", 1)]),
            syzygy(&[("C2", 1), ("D2", 1)], &[("A1", 1), ("B3", 1), ("C3", 1)]),
            syzygy(&[("C3", 1), ("D3", 1)], &[("A1", 1), ("B2", 1), ("C2", 1)]),
        ],
        AlgebraId::Su(4) => {
            let mut list =
                vec![syzygy(&[("E0", 1), ("F", 1)], &[("C1", 1), ("C2", 1), ("C3", 1)])];
            // Cyclic families over (i, j, k) ∈ {(1,2,3), (2,3,1), (3,1,2)}.
            for (i, j, k) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
                let n = |stem: &str, idx: usize| format!("{stem}{idx}");
                let s = |pairs: Vec<(String, u32)>| pairs;
                let mk = |l: Vec<(String, u32)>, r: Vec<(String, u32)>| Syzygy { left: l, right: r };
                list.push(mk(
                    s(vec![("E0".into(), 1), (n("Dp", j), 1), (n("D", k), 1)]),
                    s(vec![(n("C", i), 1), (n("E", i), 1)]),
                ));
                list.push(mk(
                    s(vec![("E0".into(), 1), (n("D", j), 1), (n("Dp", k), 1)]),
                    s(vec![(n("B", i), 1), (n("C", j), 1), (n("C", k), 1)]),
                ));
                list.push(mk(
                    s(vec![(n("E", i), 1), (n("E", j), 1)]),
                    s(vec![("E0".into(), 1), (n("B", k), 1), (n("D", k), 1), (n("Dp", k), 1)]),
                ));
                list.push(mk(
                    s(vec![(n("D", i), 1), (n("E", i), 1)]),
                    s(vec![(n("C", j), 1), (n("B", k), 1), (n("D", k), 1)]),
                ));
                list.push(mk(
                    s(vec![(n("Dp", i), 1), (n("E", i), 1)]),
                    s(vec![(n("B", j), 1), (n("Dp", j), 1), (n("C", k), 1)]),
                ));
            }
            list
        }
        _ => {
            return Err(Error::Unsupported {
                op: "syzygies".into(),
                alg: alg.to_string(),
            })
        }
    };
    let catalog = fusion_elementaries(alg)?;
    for s in &list {
        let l = syzygy_side_vector(&s.left, &catalog)?;
        let r = syzygy_side_vector(&s.right, &catalog)?;
        if l != r {
            return Err(Error::Invariant(format!(
                "syzygy {:?} = {:?} fails the vector identity",
                s.left, s.right
            )));
        }
    }
    Ok(list)
}
