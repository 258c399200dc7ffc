//! Command-line front end: compute fusions, print fusion bases, and run
//! the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error (including
//! invalid weights), 3 internal invariant breach.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use fusionkit::algebra::{build_algebra, compute_wf, AlgebraData, AlgebraId, Weight};
use fusionkit::basisgen::{
    count_by_basis, derive_fusion_elementaries, fusion_elementaries, syzygies,
    syzygy_side_vector, threshold_closed_form, verified_fusion_basis,
};
use fusionkit::diophantine::{hilbert_basis, roundtrip_check};
use fusionkit::fusion::{
    kac_walton_fusion, threshold_bruteforce, threshold_expansion, VerlindeTable,
};
use fusionkit::series::{
    coupling_count, f_tilde_series, g_rational, g_table, g_tilde_rational, g_tilde_value,
    sp4_level_gf, su2_fusion_gf, su2_fusion_pipeline, su3_fusion_composition, su4_level_gf,
};
use fusionkit::{basisgen::exponent_matrix, Error};

#[derive(Parser)]
#[command(name = "fusionkit", version, about = "Affine fusion rules: Kac-Walton, Verlinde, and fusion-basis counting")]
struct Cli {
    /// Output format for results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fuse two integrable weights at a level, with threshold subscripts.
    Fuse {
        /// Algebra tag: su2, su3, su4, or sp4.
        #[arg(long)]
        alg: String,
        /// Level.
        #[arg(short)]
        k: i64,
        /// First weight, comma-separated finite Dynkin labels.
        #[arg(long)]
        lhs: String,
        /// Second weight.
        #[arg(long)]
        rhs: String,
    },
    /// Print the fusion basis, elementary couplings, and syzygies.
    Basis {
        /// Algebra tag: su2, su3, su4, or sp4.
        #[arg(long)]
        alg: String,
    },
    /// Run a verification suite.
    Verify {
        /// Suite: oracles, thresholds, bases, series, duality, or all.
        suite: Suite,
        /// Truncation order for the series suite.
        #[arg(long, default_value_t = 3)]
        order: i64,
        /// Reduced bounds (full run of `all` stays under a few minutes
        /// anyway; `--quick` trims the oracle sweeps further).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracles,
    Thresholds,
    Bases,
    Series,
    Duality,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::InvalidWeight(_) | Error::UnknownAlgebra(_) | Error::Parse(_)) => {
                    ExitCode::from(2)
                }
                Some(Error::Unsupported { .. }) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.cmd {
        Cmd::Fuse { alg, k, lhs, rhs } => cmd_fuse(cli.format, alg, *k, lhs, rhs),
        Cmd::Basis { alg } => cmd_basis(cli.format, alg),
        Cmd::Verify { suite, order, quick } => cmd_verify(cli.format, *suite, *order, *quick),
    }
}

fn parse_algebra(tag: &str) -> Result<AlgebraId, Error> {
    match tag {
        "su2" => Ok(AlgebraId::Su(2)),
        "su3" => Ok(AlgebraId::Su(3)),
        "su4" => Ok(AlgebraId::Su(4)),
        "sp4" => Ok(AlgebraId::Sp4),
        // g2 has Weyl-folding data in the library but no coupling catalog,
        // so the CLI front end rejects it as unsupported.
        "g2" => Err(Error::Unsupported { op: "cli", alg: "g2".into() }),
        other => Err(Error::UnknownAlgebra(other.to_string())),
    }
}

fn parse_weight(alg: &AlgebraData, text: &str) -> Result<Weight, Error> {
    let labels: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Parse(format!("weight `{text}` is not comma-separated integers")))?;
    if labels.len() != alg.rank || labels.iter().any(|&l| l < 0) {
        return Err(Error::InvalidWeight(format!(
            "weight `{text}` needs {} nonnegative labels for {}",
            alg.rank, alg.id
        )));
    }
    Ok(Weight(labels))
}

// ---------------------------------------------------------------------------
// fuse
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct FuseTerm {
    weight: Vec<i64>,
    multiplicity: i64,
    /// Threshold level of each contributing coupling, ascending.
    thresholds: Vec<i64>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct FuseOutput {
    algebra: String,
    level: i64,
    lhs: Vec<i64>,
    rhs: Vec<i64>,
    terms: Vec<FuseTerm>,
}

fn cmd_fuse(format: Format, alg: &str, k: i64, lhs: &str, rhs: &str) -> anyhow::Result<ExitCode> {
    let id = parse_algebra(alg)?;
    let data = build_algebra(id);
    let lambda = parse_weight(&data, lhs)?;
    let mu = parse_weight(&data, rhs)?;
    let fus = kac_walton_fusion(&data, &lambda, &mu, k)?;
    let mut terms = Vec::new();
    for (nu, &mult) in &fus.map {
        let rec = threshold_bruteforce(&data, &lambda, &mu, nu)?;
        let thresholds: Vec<i64> = rec.thresholds.iter().copied().filter(|&t| t <= k).collect();
        if thresholds.len() as i64 != mult {
            return Err(Error::Invariant(format!(
                "threshold count for {nu} disagrees with the fusion coefficient at level {k}"
            ))
            .into());
        }
        // Independent cross-check against the fusion-basis count.
        let counted = count_by_basis(&data, &lambda, &mu, nu, k)?;
        if counted != mult {
            return Err(Error::Invariant(format!(
                "basis count for {nu} disagrees with Kac-Walton at level {k}"
            ))
            .into());
        }
        terms.push(FuseTerm { weight: nu.0.clone(), multiplicity: mult, thresholds });
    }
    let out = FuseOutput {
        algebra: id.to_string(),
        level: k,
        lhs: lambda.0.clone(),
        rhs: mu.0.clone(),
        terms,
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        Format::Table => {
            let rendered: Vec<String> = out
                .terms
                .iter()
                .flat_map(|t| {
                    t.thresholds
                        .iter()
                        .map(|k0| format!("{}_{k0}", fmt_weight(&t.weight)))
                        .collect::<Vec<_>>()
                })
                .collect();
            println!(
                "{} x {} @ {} k={} = {}",
                fmt_weight(&out.lhs),
                fmt_weight(&out.rhs),
                out.algebra,
                out.level,
                if rendered.is_empty() { "0".to_string() } else { rendered.join(" + ") }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_weight(labels: &[i64]) -> String {
    format!(
        "({})",
        labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    )
}

// ---------------------------------------------------------------------------
// basis
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct BasisOutput {
    algebra: String,
    variables: Vec<String>,
    /// Rendered inequality rows, `k`-rows first.
    k_rows: Vec<Vec<i64>>,
    tensor_rows: Vec<Vec<i64>>,
    elementaries: Vec<ElementaryOutput>,
    syzygies: Vec<SyzygyOutput>,
    roundtrip: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct ElementaryOutput {
    name: String,
    lambda: Vec<i64>,
    mu: Vec<i64>,
    nu: Vec<i64>,
    threshold: i64,
    vector: Vec<i64>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct SyzygyOutput {
    left: Vec<(String, u32)>,
    right: Vec<(String, u32)>,
}

fn cmd_basis(format: Format, alg: &str) -> anyhow::Result<ExitCode> {
    let id = parse_algebra(alg)?;
    // `verified_fusion_basis` re-derives the inequality list by Farkas
    // dualization and fails if it disagrees with the catalog.
    let basis = verified_fusion_basis(id)?;
    if !roundtrip_check(&exponent_matrix(id)?)? {
        return Err(Error::Invariant(format!("{id}: Hilbert-basis roundtrip failed")).into());
    }
    let catalog = fusion_elementaries(id)?;
    let relations = syzygies(id)?;
    let out = BasisOutput {
        algebra: id.to_string(),
        variables: basis.system.vars.clone(),
        k_rows: basis.k_rows(),
        tensor_rows: basis.system.rows.iter().filter(|r| r[0] == 0).cloned().collect(),
        elementaries: catalog
            .iter()
            .map(|c| ElementaryOutput {
                name: c.name.clone(),
                lambda: c.lambda.0.clone(),
                mu: c.mu.0.clone(),
                nu: c.nu.0.clone(),
                threshold: c.k0,
                vector: c.vector.clone(),
            })
            .collect(),
        syzygies: relations
            .iter()
            .map(|s| SyzygyOutput { left: s.left.clone(), right: s.right.clone() })
            .collect(),
        roundtrip: true,
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        Format::Table => {
            println!("fusion basis for {} ({} k-rows)", out.algebra, out.k_rows.len());
            println!("{}", basis.system.render());
            println!("elementary couplings:");
            for e in &out.elementaries {
                println!(
                    "  {:4} {} x {} > {}  k0={}",
                    e.name,
                    fmt_weight(&e.lambda),
                    fmt_weight(&e.mu),
                    fmt_weight(&e.nu),
                    e.threshold
                );
            }
            println!("syzygies:");
            for s in &out.syzygies {
                println!("  {} = {}", fmt_side(&s.left), fmt_side(&s.right));
            }
            println!("roundtrip: pass");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_side(side: &[(String, u32)]) -> String {
    side.iter()
        .map(|(n, p)| if *p == 1 { n.clone() } else { format!("{n}^{p}") })
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct Check {
    suite: String,
    name: String,
    pass: bool,
    detail: String,
}

fn check(out: &mut Vec<Check>, suite: &str, name: &str, pass: bool, detail: String) {
    out.push(Check { suite: suite.into(), name: name.into(), pass, detail });
}

fn cmd_verify(format: Format, suite: Suite, order: i64, quick: bool) -> anyhow::Result<ExitCode> {
    let mut checks: Vec<Check> = Vec::new();
    let run = |s: Suite| suite == Suite::All || suite == s;
    if run(Suite::Oracles) {
        verify_oracles(&mut checks, quick)?;
    }
    if run(Suite::Thresholds) {
        verify_thresholds(&mut checks, quick)?;
    }
    if run(Suite::Bases) {
        verify_bases(&mut checks)?;
    }
    if run(Suite::Series) {
        verify_series(&mut checks, order, quick)?;
    }
    if run(Suite::Duality) {
        verify_duality(&mut checks)?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&checks)?),
        Format::Table => {
            for c in &checks {
                println!(
                    "{:10} {:40} {}  {}",
                    c.suite,
                    c.name,
                    if c.pass { "pass" } else { "FAIL" },
                    c.detail
                );
            }
            println!(
                "{}/{} checks passed",
                checks.len() - failed,
                checks.len()
            );
        }
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Ŵ_f word lists per algebra, memoized in `FUSIONKIT_CACHE_DIR` when set.
fn wf_words(id: AlgebraId) -> anyhow::Result<Vec<Vec<usize>>> {
    let compute = || -> Vec<Vec<usize>> {
        compute_wf(&build_algebra(id)).into_iter().map(|e| e.word).collect()
    };
    let Ok(dir) = std::env::var("FUSIONKIT_CACHE_DIR") else {
        return Ok(compute());
    };
    std::fs::create_dir_all(&dir)?;
    let path = std::path::Path::new(&dir).join(format!("wf_{id}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(words) = serde_json::from_str::<Vec<Vec<usize>>>(&text) {
            return Ok(words);
        }
    }
    let words = compute();
    std::fs::write(&path, serde_json::to_string(&words)?)?;
    Ok(words)
}

fn verify_oracles(out: &mut Vec<Check>, quick: bool) -> anyhow::Result<()> {
    let bounds: &[(AlgebraId, i64)] = if quick {
        &[(AlgebraId::Su(2), 5), (AlgebraId::Su(3), 3), (AlgebraId::Sp4, 2), (AlgebraId::Su(4), 2)]
    } else {
        &[(AlgebraId::Su(2), 8), (AlgebraId::Su(3), 5), (AlgebraId::Sp4, 4), (AlgebraId::Su(4), 3)]
    };
    for &(id, kmax) in bounds {
        let alg = build_algebra(id);
        let wf = wf_words(id)?;
        check(out, "oracles", &format!("{id} Wf size"), !wf.is_empty(), format!("|Wf|={}", wf.len()));
        let mut triples = 0usize;
        let mut bad = 0usize;
        for k in 0..=kmax {
            let table = VerlindeTable::new(&alg, k);
            let weights: Vec<Weight> =
                alg.integrable_weights(k).iter().map(|x| x.finite()).collect();
            for lambda in &weights {
                for mu in &weights {
                    let kw = kac_walton_fusion(&alg, lambda, mu, k)?;
                    for nu in &weights {
                        triples += 1;
                        let a = kw.coefficient(nu);
                        if table.coefficient(lambda, mu, nu)? != a
                            || count_by_basis(&alg, lambda, mu, nu, k)? != a
                        {
                            bad += 1;
                        }
                    }
                }
            }
        }
        check(
            out,
            "oracles",
            &format!("{id} triangle k<={kmax}"),
            bad == 0,
            format!("{triples} triples, {bad} mismatches"),
        );
    }
    Ok(())
}

fn all_weights(rank: usize, bound: i64) -> Vec<Weight> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=bound).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Weight).collect()
}

fn verify_thresholds(out: &mut Vec<Check>, quick: bool) -> anyhow::Result<()> {
    let bounds: &[(AlgebraId, i64)] = if quick {
        &[(AlgebraId::Su(2), 2), (AlgebraId::Su(3), 2), (AlgebraId::Sp4, 2), (AlgebraId::Su(4), 1)]
    } else {
        &[(AlgebraId::Su(2), 3), (AlgebraId::Su(3), 3), (AlgebraId::Sp4, 3), (AlgebraId::Su(4), 2)]
    };
    for &(id, bound) in bounds {
        let alg = build_algebra(id);
        let mut couplings = 0usize;
        let mut bad = 0usize;
        for lambda in all_weights(alg.rank, bound) {
            for mu in all_weights(alg.rank, bound) {
                // Brute-force multiset per product weight.
                let mut brute: BTreeMap<Weight, Vec<i64>> = BTreeMap::new();
                for (nu, k0) in threshold_expansion(&alg, &lambda, &mu)? {
                    couplings += 1;
                    brute.entry(nu).or_default().push(k0);
                }
                for (nu, expected) in brute {
                    let mut closed: Vec<i64> =
                        fusionkit::basisgen::coupling_solutions(&alg, &lambda, &mu, &nu)?
                            .iter()
                            .map(|a| threshold_closed_form(id, a))
                            .collect::<Result<_, _>>()?;
                    closed.sort();
                    if closed != expected {
                        bad += 1;
                    }
                }
            }
        }
        check(
            out,
            "thresholds",
            &format!("{id} labels<={bound}"),
            bad == 0,
            format!("{couplings} couplings, {bad} mismatches"),
        );
    }
    Ok(())
}

fn verify_bases(out: &mut Vec<Check>) -> anyhow::Result<()> {
    for id in [AlgebraId::Su(2), AlgebraId::Su(3), AlgebraId::Sp4, AlgebraId::Su(4)] {
        let dual_ok = verified_fusion_basis(id).is_ok();
        let rt = roundtrip_check(&exponent_matrix(id)?)?;
        let hb = {
            let basis = verified_fusion_basis(id)?;
            let mut columns = exponent_matrix(id)?.columns;
            columns.sort();
            hilbert_basis(&basis.system)? == columns
        };
        let closure = {
            let alg = build_algebra(id);
            let mut expected: Vec<Vec<i64>> =
                fusion_elementaries(id)?.iter().map(|c| c.vector.clone()).collect();
            expected.sort();
            derive_fusion_elementaries(&alg)? == expected
        };
        let syz = {
            let catalog = fusion_elementaries(id)?;
            syzygies(id)?.iter().all(|s| {
                syzygy_side_vector(&s.left, &catalog).unwrap()
                    == syzygy_side_vector(&s.right, &catalog).unwrap()
            })
        };
        check(
            out,
            "bases",
            &format!("{id} roundtrip"),
            dual_ok && rt && hb && closure && syz,
            format!("dual={dual_ok} hilbert={} closure={closure} syzygies={syz}", rt && hb),
        );
    }
    Ok(())
}

fn verify_series(out: &mut Vec<Check>, order: i64, quick: bool) -> anyhow::Result<()> {
    // su(2): pipeline vs closed form.
    let t2 = if quick { 3 } else { order.max(3) };
    let gf = su2_fusion_gf().expand(vec![0; 4], vec![t2; 4])?;
    let pipeline = su2_fusion_pipeline(t2)?;
    check(
        out,
        "series",
        &format!("su2 pipeline order {t2}"),
        gf.terms == pipeline.terms,
        format!("{} terms", gf.terms.len()),
    );
    // su(3): composition vs Kac-Walton.
    let t3 = if quick { 2 } else { order.min(4) };
    let f = su3_fusion_composition(t3)?;
    let su3 = build_algebra(AlgebraId::Su(3));
    let mut bad = 0usize;
    let mut total = 0i64;
    for k in 0..=t3 {
        let weights: Vec<Weight> = su3.integrable_weights(k).iter().map(|x| x.finite()).collect();
        for lambda in &weights {
            for mu in &weights {
                let kw = kac_walton_fusion(&su3, lambda, mu, k)?;
                for nu in &weights {
                    let e = vec![k, lambda.0[0], lambda.0[1], mu.0[0], mu.0[1], nu.0[0], nu.0[1]];
                    if f.coeff(&e) != kw.coefficient(nu) {
                        bad += 1;
                    }
                    total += kw.coefficient(nu);
                }
            }
        }
    }
    let complete = f.terms.values().sum::<i64>() == total;
    check(
        out,
        "series",
        &format!("su3 composition k<={t3}"),
        bad == 0 && complete,
        format!("{bad} mismatches, complete={complete}"),
    );
    // Level-count specializations.
    let su4_orders = order.min(3);
    let su4 = su4_level_gf().coefficients(su4_orders)?;
    let mut bad = 0usize;
    for (k, &c) in su4.iter().enumerate() {
        if c != coupling_count(AlgebraId::Su(4), k as i64)? {
            bad += 1;
        }
    }
    check(
        out,
        "series",
        &format!("su4 level counts d^0..d^{su4_orders}"),
        bad == 0,
        format!("{:?}", su4),
    );
    let sp4 = sp4_level_gf().coefficients(if quick { 4 } else { 6 })?;
    let mut bad = 0usize;
    for (k, &c) in sp4.iter().enumerate() {
        if c != coupling_count(AlgebraId::Sp4, k as i64)? {
            bad += 1;
        }
    }
    check(out, "series", "sp4 level counts", bad == 0, format!("{:?}", sp4));
    Ok(())
}

fn verify_duality(out: &mut Vec<Check>) -> anyhow::Result<()> {
    let rows_ok = g_rational(1)?.coefficients(5)? == [1, 4, 9, 16, 25, 36]
        && g_rational(2)?.coefficients(5)? == [1, 9, 40, 125, 315, 686]
        && g_rational(3)?.coefficients(5)? == [1, 16, 125, 656, 2646, 8832];
    check(out, "duality", "g rows through d^5", rows_ok, String::new());
    let table = g_table(4, 4)?;
    let sym = (0..=4usize).all(|n| (0..=4usize).all(|k| table[n][k] == table[k][n]));
    check(out, "duality", "g table symmetric", sym, format!("5x5"));
    let mut tilde_ok = g_tilde_rational(1)?.coefficients(6)? == [0, 2, 3, 4, 5, 6, 7];
    for n in 2..=4usize {
        let closed = g_tilde_rational(n)?.coefficients(6)?;
        for (k, &c) in closed.iter().enumerate() {
            tilde_ok &= c == g_tilde_value(n, k as i64)?;
        }
    }
    check(out, "duality", "g~ closed forms", tilde_ok, String::new());
    let f = f_tilde_series(5)?;
    let fsym = (0..=5i64).all(|n| (0..=5i64).all(|k| f.coeff(&[n, k]) == f.coeff(&[k, n])));
    check(out, "duality", "f~ symmetric", fsym, String::new());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuse_output_json_roundtrip() {
        let out = FuseOutput {
            algebra: "sp4".into(),
            level: 2,
            lhs: vec![1, 1],
            rhs: vec![1, 1],
            terms: vec![FuseTerm { weight: vec![0, 0], multiplicity: 1, thresholds: vec![2] }],
        };
        let text = serde_json::to_string(&out).unwrap();
        let parsed: FuseOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, out);
    }

    #[test]
    fn basis_output_json_roundtrip() {
        let out = BasisOutput {
            algebra: "su2".into(),
            variables: vec!["k".into(), "l1".into()],
            k_rows: vec![vec![1, -1]],
            tensor_rows: vec![],
            elementaries: vec![ElementaryOutput {
                name: "E0".into(),
                lambda: vec![0],
                mu: vec![0],
                nu: vec![0],
                threshold: 1,
                vector: vec![1, 0],
            }],
            syzygies: vec![SyzygyOutput { left: vec![("E1".into(), 2)], right: vec![] }],
            roundtrip: true,
        };
        let text = serde_json::to_string(&out).unwrap();
        let parsed: BasisOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, out);
    }

    #[test]
    fn weight_parsing_rejects_bad_input() {
        let su3 = build_algebra(AlgebraId::Su(3));
        assert!(parse_weight(&su3, "1,1").is_ok());
        assert!(parse_weight(&su3, "1").is_err());
        assert!(parse_weight(&su3, "1,-1").is_err());
        assert!(parse_weight(&su3, "a,b").is_err());
        assert!(parse_algebra("g2").is_err());
    }
}
