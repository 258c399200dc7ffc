//! Fusion coefficients and threshold levels.
//!
//! Two independent routes to the fusion coefficients of an affine algebra at
//! level `k`:
//!
//! - [`kac_walton_fusion`]: compute the finite tensor product, extend every
//!   summand to an affine weight at level `k`, and fold non-integrable
//!   weights back into the dominant chamber with signed shifted affine
//!   reflections;
//! - [`VerlindeTable`]: numerical evaluation of the Verlinde formula from
//!   the unnormalized modular S-matrix (a finite Weyl sum of phases).
//!
//! [`threshold_bruteforce`] recovers the threshold multiset of a triple —
//! the sorted levels at which its fusion coefficient increments — by
//! scanning levels until the coefficient stabilizes at the tensor-product
//! multiplicity.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{
    finite_weyl_elements, outer_apply, outer_order, shifted_make_dominant,
    AlgebraData, Folded, Weight,
};
use crate::tensor::tensor_product;
use crate::{Error, Result};

/// A fusion decomposition at a fixed level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionResult {
    /// The level the fusion was computed at.
    pub level: i64,
    /// Multiplicity of each dominant product weight.
    pub map: BTreeMap<Weight, i64>,
}

impl FusionResult {
    /// Multiplicity of one product weight (zero when absent).
    pub fn coefficient(&self, nu: &Weight) -> i64 {
        *self.map.get(nu).unwrap_or(&0)
    }
}

/// Threshold multiset of one coupling `(λ, μ, ν)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdRecord {
    /// The coupling.
    pub lambda: Weight,
    /// Second weight.
    pub mu: Weight,
    /// Product-side weight.
    pub nu: Weight,
    /// Sorted threshold levels `k0⁽¹⁾ ≤ k0⁽²⁾ ≤ …`, one per unit of the
    /// tensor-product multiplicity.
    pub thresholds: Vec<i64>,
}

fn check_integrable(alg: &AlgebraData, w: &Weight, k: i64) -> Result<()> {
    if w.0.len() != alg.rank || w.0.iter().any(|&l| l < 0) || alg.finite_level(w) > k {
        return Err(Error::InvalidWeight(format!(
            "{w} is not integrable for {} at level {k}",
            alg.id
        )));
    }
    Ok(())
}

/// Fusion of `λ̂ × μ̂` at level `k` by the Kac-Walton algorithm.
pub fn kac_walton_fusion(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    k: i64,
) -> Result<FusionResult> {
    check_integrable(alg, lambda, k)?;
    check_integrable(alg, mu, k)?;
    let mut map: BTreeMap<Weight, i64> = BTreeMap::new();
    for (xi, mult) in tensor_product(alg, lambda, mu)? {
        let affine = alg.affine_extend(&xi, k);
        match shifted_make_dominant(alg, &affine)? {
            Folded::OnWall => {}
            Folded::Dominant { weight, sign } => {
                *map.entry(weight.finite()).or_insert(0) += sign * mult;
            }
        }
    }
    map.retain(|_, v| *v != 0);
    if map.values().any(|&v| v < 0) {
        return Err(Error::Invariant(format!(
            "negative fusion coefficient in {lambda} × {mu} at level {k}"
        )));
    }
    Ok(FusionResult { level: k, map })
}

/// Threshold multiset of `(λ, μ, ν)`: level `k0⁽ⁱ⁾` is the smallest `k`
/// with fusion coefficient ≥ i. The scan asserts that the coefficient
/// stabilizes at the tensor multiplicity by `k = level(λ) + level(μ)`.
pub fn threshold_bruteforce(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
) -> Result<ThresholdRecord> {
    let tensor_mult = *tensor_product(alg, lambda, mu)?.get(nu).unwrap_or(&0);
    let start = alg
        .finite_level(lambda)
        .max(alg.finite_level(mu))
        .max(alg.finite_level(nu));
    let stop = alg.finite_level(lambda) + alg.finite_level(mu);
    let mut thresholds = Vec::with_capacity(tensor_mult as usize);
    let mut seen = 0i64;
    for k in start..=stop {
        let c = kac_walton_fusion(alg, lambda, mu, k)?.coefficient(nu);
        if c < seen {
            return Err(Error::Invariant(format!(
                "fusion coefficient of {lambda} × {mu} ⊃ {nu} decreased at level {k}"
            )));
        }
        for _ in seen..c {
            thresholds.push(k);
        }
        seen = c;
    }
    if seen != tensor_mult {
        return Err(Error::Invariant(format!(
            "fusion of {lambda} × {mu} ⊃ {nu} did not stabilize at the tensor multiplicity"
        )));
    }
    Ok(ThresholdRecord {
        lambda: lambda.clone(),
        mu: mu.clone(),
        nu: nu.clone(),
        thresholds,
    })
}

/// Cached numerical Verlinde data for one algebra and level: the
/// unnormalized S-matrix `S̃_{λσ} = Σ_w ε(w) e^{−2πi (w(λ+ρ), σ+ρ)/(k+g)}`
/// over all pairs of integrable weights.
pub struct VerlindeTable {
    weights: Vec<Weight>,
    /// `s[λ][σ]` indexed by positions in `weights`.
    s: Vec<Vec<Complex64>>,
}

/// Tolerance for rounding Verlinde sums to integers.
pub const VERLINDE_TOLERANCE: f64 = 1e-6;

impl VerlindeTable {
    /// Build the table for `alg` at level `k`.
    pub fn new(alg: &AlgebraData, k: i64) -> Self {
        let weights: Vec<Weight> = alg
            .integrable_weights(k)
            .into_iter()
            .map(|w| w.finite())
            .collect();
        let weyl = finite_weyl_elements(alg);
        let rho = alg.rho();
        let kappa = (k + alg.dual_coxeter) as f64;
        let shifted: Vec<Vec<i64>> = weights
            .iter()
            .map(|w| w.0.iter().zip(&rho.0).map(|(a, b)| a + b).collect())
            .collect();
        let s = shifted
            .iter()
            .map(|a| {
                shifted
                    .iter()
                    .map(|b| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for w in &weyl {
                            let img = w.apply(a);
                            let ip = alg.inner(&img, b);
                            let phase = -2.0 * PI * (*ip.numer() as f64)
                                / (*ip.denom() as f64)
                                / kappa;
                            acc += (w.sign as f64) * Complex64::new(phase.cos(), phase.sin());
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        VerlindeTable { weights, s }
    }

    fn index(&self, w: &Weight) -> Result<usize> {
        self.weights
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| Error::InvalidWeight(format!("{w} is not integrable at this level")))
    }

    /// Fusion coefficient `𝒩_{λμ}^ν` at this table's level. The global
    /// S-matrix normalization cancels: with `χ_λ(σ) = S̃_{λσ}/S̃_{0σ}`,
    /// the coefficient is `Σ_σ |S̃_{0σ}|² χ_λ χ_μ χ̄_ν / Σ_τ |S̃_{0τ}|²`.
    pub fn coefficient(&self, lambda: &Weight, mu: &Weight, nu: &Weight) -> Result<i64> {
        let (il, im, inu) = (self.index(lambda)?, self.index(mu)?, self.index(nu)?);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0f64;
        for sigma in 0..self.weights.len() {
            let s0 = self.s[0][sigma];
            num += self.s[il][sigma] * self.s[im][sigma] * self.s[inu][sigma].conj() / s0;
            den += s0.norm_sqr();
        }
        let value = num / den;
        let rounded = value.re.round();
        if (value.re - rounded).abs() >= VERLINDE_TOLERANCE || value.im.abs() >= VERLINDE_TOLERANCE
        {
            return Err(Error::Invariant(format!(
                "Verlinde sum {value} is not within tolerance of an integer"
            )));
        }
        Ok(rounded as i64)
    }
}

/// One-shot Verlinde fusion coefficient (builds a fresh table; sweeps
/// should reuse [`VerlindeTable`]).
pub fn verlinde_fusion(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
    k: i64,
) -> Result<i64> {
    check_integrable(alg, lambda, k)?;
    check_integrable(alg, mu, k)?;
    // A product weight that is not integrable at this level cannot appear.
    if check_integrable(alg, nu, k).is_err() {
        return Ok(0);
    }
    VerlindeTable::new(alg, k).coefficient(lambda, mu, nu)
}

/// Check invariance of the fusion coefficient under the outer-automorphism
/// action `(λ̂, μ̂; ν̂) → (Aλ̂, A′μ̂; AA′ν̂)` via Kac-Walton.
pub fn outer_invariance_check(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
    k: i64,
    a_power: usize,
    ap_power: usize,
) -> Result<bool> {
    let base = kac_walton_fusion(alg, lambda, mu, k)?.coefficient(nu);
    let order = outer_order(alg);
    let act = |w: &Weight, times: usize| -> Weight {
        outer_apply(alg, &alg.affine_extend(w, k), times % order).finite()
    };
    let la = act(lambda, a_power);
    let ma = act(mu, ap_power);
    let na = act(nu, a_power + ap_power);
    let image = kac_walton_fusion(alg, &la, &ma, k)?.coefficient(&na);
    Ok(base == image)
}

/// Render a tensor decomposition with threshold subscripts, e.g.
/// `(2,0)_2 ⊕ (2,0)_3`; used by the CLI and by acceptance checks.
pub fn threshold_expansion(
    alg: &AlgebraData,
    lambda: &Weight,
    mu: &Weight,
) -> Result<Vec<(Weight, i64)>> {
    let mut out = Vec::new();
    for (nu, _) in tensor_product(alg, lambda, mu)? {
        for k0 in threshold_bruteforce(alg, lambda, mu, &nu)?.thresholds {
            out.push((nu.clone(), k0));
        }
    }
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, AlgebraId};

    fn w(labels: &[i64]) -> Weight {
        Weight(labels.to_vec())
    }

    fn alg(id: AlgebraId) -> AlgebraData {
        build_algebra(id)
    }

    #[test]
    fn sp4_level2_adjointish_fusion() {
        // [0,1,1] × [0,1,1] = [2,0,0] ⊕ [1,0,1] ⊕ [0,2,0] at level 2.
        let sp4 = alg(AlgebraId::Sp4);
        let f = kac_walton_fusion(&sp4, &w(&[1, 1]), &w(&[1, 1]), 2).unwrap();
        assert_eq!(
            f.map,
            BTreeMap::from([(w(&[0, 0]), 1), (w(&[0, 1]), 1), (w(&[2, 0]), 1)])
        );
    }

    #[test]
    fn identity_fusion() {
        let su3 = alg(AlgebraId::Su(3));
        let f = kac_walton_fusion(&su3, &w(&[2, 1]), &w(&[0, 0]), 3).unwrap();
        assert_eq!(f.map, BTreeMap::from([(w(&[2, 1]), 1)]));
    }

    #[test]
    fn sp4_threshold_expansion() {
        // (1,1) ⊗ (1,1) with threshold subscripts:
        // (0,0)₂ (0,1)₂ (2,0)₂ (0,2)₃ (0,3)₃ (2,0)₃ (2,1)₃ ×2 (2,2)₄ (4,0)₄.
        let sp4 = alg(AlgebraId::Sp4);
        let exp = threshold_expansion(&sp4, &w(&[1, 1]), &w(&[1, 1])).unwrap();
        let expect = vec![
            (w(&[0, 0]), 2),
            (w(&[0, 1]), 2),
            (w(&[2, 0]), 2),
            (w(&[0, 2]), 3),
            (w(&[0, 3]), 3),
            (w(&[2, 0]), 3),
            (w(&[2, 1]), 3),
            (w(&[2, 1]), 3),
            (w(&[2, 2]), 4),
            (w(&[4, 0]), 4),
        ];
        assert_eq!(exp, expect);
    }

    #[test]
    fn threshold_records() {
        let sp4 = alg(AlgebraId::Sp4);
        let rec = threshold_bruteforce(&sp4, &w(&[1, 1]), &w(&[1, 1]), &w(&[2, 0])).unwrap();
        assert_eq!(rec.thresholds, vec![2, 3]);
        let rec = threshold_bruteforce(&sp4, &w(&[1, 1]), &w(&[1, 1]), &w(&[4, 0])).unwrap();
        assert_eq!(rec.thresholds, vec![4]);
        let su2 = alg(AlgebraId::Su(2));
        let rec = threshold_bruteforce(&su2, &w(&[1]), &w(&[1]), &w(&[0])).unwrap();
        assert_eq!(rec.thresholds, vec![1]);
    }

    #[test]
    fn su2_closed_form() {
        // 𝒩^{(k)} = N^{ν} − N^{2k+2−ν} for su(2), where N is the tensor
        // coefficient; swept over a box of labels and levels.
        let su2 = alg(AlgebraId::Su(2));
        let tensor_coeff = |l: i64, m: i64, n: i64| -> i64 {
            // su(2) tensor: |l−m| ≤ n ≤ l+m, same parity.
            i64::from(n >= (l - m).abs() && n <= l + m && (l + m - n) % 2 == 0)
        };
        for k in 0..=6 {
            for l in 0..=k {
                for m in 0..=k {
                    let f = kac_walton_fusion(&su2, &w(&[l]), &w(&[m]), k).unwrap();
                    for n in 0..=k {
                        let expect = tensor_coeff(l, m, n) - tensor_coeff(l, m, 2 * k + 2 - n);
                        assert_eq!(f.coefficient(&w(&[n])), expect, "k={k} l={l} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn verlinde_matches_kac_walton_small() {
        // Unit-test-sized sweep; the acceptance suite covers the full boxes.
        for (id, kmax) in [
            (AlgebraId::Su(2), 3),
            (AlgebraId::Su(3), 2),
            (AlgebraId::Sp4, 2),
        ] {
            let a = alg(id);
            for k in 0..=kmax {
                let table = VerlindeTable::new(&a, k);
                let weights: Vec<Weight> =
                    a.integrable_weights(k).iter().map(|x| x.finite()).collect();
                for lam in &weights {
                    for mu in &weights {
                        let kw = kac_walton_fusion(&a, lam, mu, k).unwrap();
                        for nu in &weights {
                            assert_eq!(
                                table.coefficient(lam, mu, nu).unwrap(),
                                kw.coefficient(nu),
                                "{id:?} k={k} {lam:?}×{mu:?}⊃{nu:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn verlinde_spot_checks() {
        let sp4 = alg(AlgebraId::Sp4);
        // (1,1) × (1,1) ⊃ (2,2) first appears at level 4.
        assert_eq!(
            verlinde_fusion(&sp4, &w(&[1, 1]), &w(&[1, 1]), &w(&[2, 2]), 3).unwrap(),
            0
        );
        assert_eq!(
            verlinde_fusion(&sp4, &w(&[1, 1]), &w(&[1, 1]), &w(&[2, 2]), 4).unwrap(),
            1
        );
        let su2 = alg(AlgebraId::Su(2));
        assert_eq!(verlinde_fusion(&su2, &w(&[1]), &w(&[1]), &w(&[0]), 1).unwrap(), 1);
        assert_eq!(verlinde_fusion(&su2, &w(&[0]), &w(&[0]), &w(&[0]), 2).unwrap(), 1);
    }

    #[test]
    fn outer_invariance() {
        let sp4 = alg(AlgebraId::Sp4);
        for (ap, app) in [(0, 0), (1, 1), (1, 0), (0, 1)] {
            assert!(outer_invariance_check(
                &sp4,
                &w(&[1, 1]),
                &w(&[1, 1]),
                &w(&[0, 0]),
                2,
                ap,
                app
            )
            .unwrap());
        }
        // The (a,1) image of the level-2 fusion: [1,1,0] × [0,1,1] contains
        // [0,0,2], [1,0,1], [0,2,0].
        let f = kac_walton_fusion(&sp4, &w(&[1, 0]), &w(&[1, 1]), 2).unwrap();
        assert_eq!(
            f.map,
            BTreeMap::from([(w(&[0, 2]), 1), (w(&[0, 1]), 1), (w(&[2, 0]), 1)])
        );
    }

    #[test]
    fn monotone_and_stabilizing() {
        let su3 = alg(AlgebraId::Su(3));
        let lam = w(&[1, 1]);
        let (tensor, stab) = (
            tensor_product(&su3, &lam, &lam).unwrap(),
            alg(AlgebraId::Su(3)).finite_level(&lam) * 2,
        );
        let mut prev: Option<FusionResult> = None;
        for k in 2..=stab {
            let f = kac_walton_fusion(&su3, &lam, &lam, k).unwrap();
            if let Some(p) = &prev {
                for (nu, m) in &p.map {
                    assert!(f.coefficient(nu) >= *m);
                }
            }
            prev = Some(f);
        }
        assert_eq!(prev.unwrap().map, tensor);
    }
}
