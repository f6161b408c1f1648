//! One handler per subcommand; each returns the rows of its report.

use std::fs;
use std::path::Path;

use hyperavoid::avoidance::{enumerate_avoiders, exact_expected_avoiders, mc_expected_avoiders_by_lambda, mc_expected_avoiders_by_sigma};
use hyperavoid::combin::binomial;
use hyperavoid::containers::{build_h, count_independent_of_size, delta_ell, PatternHypergraph};
use hyperavoid::contraction::{contract_b, preimage_count_contract2, ContractionFactor};
use hyperavoid::hypergraph::{
    max_clique, multipartite_lambda_star, random_uniform_hypergraph, sliding_window_cover, validate_clique_cover,
};
use hyperavoid::matrix::{count_matrix_copies, permutation_matrix, sampling_estimates};
use hyperavoid::perm::{copy_count_distribution, count_occurrences, enumerate_occurrences};
use hyperavoid::supersat::{
    count_snm, extremal_block_diagonal, max_ones_avoiding, min_copies_brute, supersaturation_bound, verify_sna_budget,
};
use hyperavoid::{BinaryMatrix, Error, KUniformHypergraph, Limits, Permutation};
use serde_json::json;

use crate::args::{Command, LambdaArgs, LambdaKind, MatrixArgs, MethodArg};
use crate::report::Report;
use crate::CliError;

fn one_based(edges: impl Iterator<Item = impl AsRef<[u32]>>) -> Vec<Vec<u32>> {
    edges.map(|e| e.as_ref().iter().map(|v| v + 1).collect()).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Λ of uniformity k on [n] as selected on the command line.
pub fn load_lambda(n: usize, k: usize, args: &LambdaArgs) -> Result<KUniformHypergraph, CliError> {
    let kind = if args.lambda_file.is_some() { LambdaKind::File } else { args.kind };
    Ok(match kind {
        LambdaKind::Complete => KUniformHypergraph::complete(n, k),
        LambdaKind::Empty => KUniformHypergraph::empty(n, k),
        LambdaKind::Star => multipartite_lambda_star(n, k)?,
        LambdaKind::Random => random_uniform_hypergraph(n, k, &args.lambda_alpha.0, args.lambda_seed)?,
        LambdaKind::File => {
            let path = args.lambda_file.as_deref().ok_or_else(|| CliError::Input("--lambda file needs --lambda-file".into()))?;
            let text = read(path)?;
            if text.trim_start().starts_with('{') {
                let h: KUniformHypergraph = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                if h.n() != n || h.k() != k {
                    return Err(Error::DimensionMismatch(format!(
                        "hypergraph file is {}-uniform on {} vertices, expected {k}-uniform on {n}",
                        h.k(),
                        h.n()
                    ))
                    .into());
                }
                h
            } else {
                KUniformHypergraph::parse_edge_list(n, k, &text)?
            }
        }
    })
}

pub fn load_matrix(args: &MatrixArgs) -> Result<BinaryMatrix, CliError> {
    if let Some(inline) = &args.matrix {
        let rows: Vec<&str> = inline.split('/').collect();
        return Ok(BinaryMatrix::from_row_strings(&rows)?);
    }
    if let Some(pi) = &args.perm_matrix {
        return Ok(permutation_matrix(&pi.0));
    }
    let path = args.from_file.as_deref().expect("clap requires one matrix source");
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    } else {
        Ok(text.parse()?)
    }
}

fn check_uniformity(k: usize, pi: &Permutation) -> Result<(), CliError> {
    if pi.len() != k {
        return Err(Error::DimensionMismatch(format!("pattern has length {}, expected {k}", pi.len())).into());
    }
    Ok(())
}

fn h_for(n: usize, pi: &Permutation, lambda: &LambdaArgs, limits: &Limits) -> Result<(KUniformHypergraph, PatternHypergraph), CliError> {
    let l = load_lambda(n, pi.len(), lambda)?;
    let h = build_h(n, pi, &l, limits)?;
    Ok((l, h))
}

const EXTREMAL_COLUMNS: &[&str] = &[
    "n",
    "a",
    "pattern",
    "mode",
    "measured",
    "bound",
    "bound_decimal",
    "ratio",
    "ratio_decimal",
    "witness.rows",
    "witness.cols",
    "witness.data",
];

pub fn execute(command: &Command, limits: &Limits) -> Result<Report, CliError> {
    let report = match command {
        Command::Count { sigma, pi } => Report::single(&["count"], &json!({ "count": count_occurrences(&sigma.0, &pi.0) }))?,
        Command::Occurrences { sigma, pi } => {
            let occ = enumerate_occurrences(&sigma.0, &pi.0);
            Report::single(&["count", "occurrences"], &json!({ "count": occ.len(), "occurrences": occ }))?
        }
        Command::Distribution { n, pi } => {
            let dist = copy_count_distribution(*n, &pi.0, limits)?;
            let mut row = serde_json::to_value(&dist)?;
            row["avoiders"] = dist.avoiders().into();
            row["max_copies"] = dist.max_copies().into();
            Report::single(&["n", "pattern", "total", "avoiders", "max_copies", "histogram"], &row)?
        }
        Command::Avoiders { n, pi, lambda, list } => {
            let l = load_lambda(*n, pi.0.len(), lambda)?;
            let r = enumerate_avoiders(*n, &pi.0, &l, limits, *list)?;
            Report::single(&["n", "k", "pattern", "lambda_edges", "lambda_complete", "count", "avoiders"], &r)?
        }
        Command::Expect { n, k, pi, alpha } => {
            let mut report = Report::new(&[
                "n",
                "k",
                "pattern",
                "alpha",
                "alpha_decimal",
                "exact_value",
                "exact_value_decimal",
                "bound_value",
                "empirical_constant",
            ]);
            for &n in &n.0 {
                for a in &alpha.0 {
                    report.push(&exact_expected_avoiders(n, *k, &pi.0, &a.0, limits)?)?;
                }
            }
            report
        }
        Command::ExpectMc { n, k, pi, alpha, method, samples, seed } => {
            check_uniformity(*k, &pi.0)?;
            let mut report = Report::new(&["method", "n", "pattern", "alpha", "alpha_decimal", "samples", "seed", "estimate", "std_error"]);
            for a in &alpha.0 {
                let est = match method {
                    MethodArg::Sigma => {
                        limits.check_enumeration(*n)?;
                        mc_expected_avoiders_by_sigma(*n, &pi.0, &a.0, *samples, *seed)?
                    }
                    MethodArg::Lambda => mc_expected_avoiders_by_lambda(*n, *k, &pi.0, &a.0, *samples, *seed, limits)?,
                };
                report.push(&est)?;
            }
            report
        }
        Command::Hypergraph { n, k, alpha, seed } => {
            let h = random_uniform_hypergraph(*n, *k, &alpha.0, *seed)?;
            let row = json!({
                "n": n, "k": k, "alpha": alpha.0, "seed": seed,
                "edge_count": h.edge_count(), "edges": one_based(h.edges()),
            });
            Report::single(&["n", "k", "alpha", "alpha_decimal", "seed", "edge_count", "edges"], &row)?
        }
        Command::LambdaStar { n, k, clique } => {
            let h = multipartite_lambda_star(*n, *k)?;
            let total = binomial(*n as u64, *k as u64).unwrap_or(u64::MAX);
            let inside = binomial((*n / 2) as u64, *k as u64).unwrap_or(0);
            let mut row = json!({
                "n": n, "k": k, "edge_count": h.edge_count(),
                "expected_edge_count": total - 2 * inside, "edges": one_based(h.edges()),
            });
            if *clique {
                let c = max_clique(&h, limits)?;
                row["max_clique_size"] = c.len().into();
                row["max_clique"] = json!(c.iter().map(|v| v + 1).collect::<Vec<_>>());
            }
            Report::single(&["n", "k", "edge_count", "expected_edge_count", "max_clique_size", "max_clique", "edges"], &row)?
        }
        Command::CliqueCover { n, k, lambda, cliques, window } => {
            let l = load_lambda(*n, *k, lambda)?;
            let cliques = match (cliques, window) {
                (Some(text), _) => parse_cliques(*n, text)?,
                (None, Some(size)) => sliding_window_cover(*n, *size),
                (None, None) => return Err(CliError::Input("give --cliques or --window".into())),
            };
            let row = match validate_clique_cover(&l, &cliques) {
                Ok(cover) => {
                    let mut v = serde_json::to_value(&cover)?;
                    v["valid"] = true.into();
                    v
                }
                Err(e) => {
                    let mut v = serde_json::to_value(&e)?;
                    v["valid"] = false.into();
                    v
                }
            };
            Report::single(&["valid", "L", "delta", "Delta", "reason", "index", "witness", "vertex", "cliques"], &row)?
        }
        Command::Contract { input, b, pi } => {
            let m = load_matrix(input)?;
            let b = ContractionFactor::parse(b)?;
            let out = contract_b(&m, b);
            let mut row = json!({
                "b": b.to_string(), "ones_before": m.ones(), "ones_after": out.ones(), "input": m, "output": out,
            });
            if let Some(pi) = pi {
                row["pattern"] = json!(pi.0);
                row["copies_before"] = count_matrix_copies(&m, &pi.0).into();
                row["copies_after"] = count_matrix_copies(&out, &pi.0).into();
            }
            Report::single(
                &[
                    "b",
                    "b_decimal",
                    "ones_before",
                    "ones_after",
                    "pattern",
                    "copies_before",
                    "copies_after",
                    "output.rows",
                    "output.cols",
                    "output.data",
                ],
                &row,
            )?
        }
        Command::Preimage { input } => {
            let m = load_matrix(input)?;
            let row = json!({ "ones": m.ones(), "count": preimage_count_contract2(&m).to_string(), "target": m });
            Report::single(&["ones", "count", "target.rows", "target.cols", "target.data"], &row)?
        }
        Command::Extremal { n, a, pi } => {
            let m = extremal_block_diagonal(*n, *a)?;
            let bound = supersaturation_bound(*n, *a, pi.0.len());
            let row = json!({
                "n": n, "a": a, "pattern": pi.0, "ones": m.ones(), "copies": count_matrix_copies(&m, &pi.0),
                "bound": bound.as_ref().map(hyperavoid::rational::format_rational), "matrix": m,
            });
            Report::single(&["n", "a", "pattern", "ones", "copies", "bound", "bound_decimal", "matrix.data"], &row)?
        }
        Command::MinCopies { n, a, pi } => {
            let mut report = Report::new(EXTREMAL_COLUMNS);
            for &a in &a.0 {
                report.push(&min_copies_brute(*n, a, &pi.0, limits)?)?;
            }
            report
        }
        Command::MaxOnes { n, pi, node_budget } => {
            let mut report = Report::new(EXTREMAL_COLUMNS);
            for &n in &n.0 {
                report.push(&max_ones_avoiding(n, &pi.0, limits, *node_budget)?)?;
            }
            report
        }
        Command::Sna { n, a, pi } => {
            let mut report = Report::new(&[
                "family.n",
                "family.a",
                "family.q",
                "family.r",
                "pattern",
                "budget.budget",
                "budget.ceiling",
                "expected_size",
                "members",
                "max_copies",
                "within_budget",
                "within_ceiling",
            ]);
            for &a in &a.0 {
                report.push(&verify_sna_budget(*n, a, &pi.0, limits)?)?;
            }
            report
        }
        Command::Snm { n, m, pi } => {
            let mut report = Report::new(&["n", "m", "pattern", "count"]);
            for &m in &m.0 {
                report.push(&json!({ "n": n, "m": m, "pattern": pi.0, "count": count_snm(*n, m, &pi.0, limits)? }))?;
            }
            report
        }
        Command::BuildH { n, pi, lambda } => {
            let (l, h) = h_for(*n, &pi.0, lambda, limits)?;
            let mut row = serde_json::to_value(&h)?;
            row["lambda_edges"] = l.edge_count().into();
            row["edge_count"] = h.edge_count().into();
            row["expected_edge_count"] = (l.edge_count() as u64 * binomial(*n as u64, pi.0.len() as u64).unwrap_or(0)).into();
            Report::single(&["n", "k", "pattern", "lambda_edges", "edge_count", "expected_edge_count", "edges"], &row)?
        }
        Command::Delta { n, pi, lambda, ell } => {
            let (l, h) = h_for(*n, &pi.0, lambda, limits)?;
            let mut report = Report::new(&["n", "pattern", "lambda_edges", "edge_count", "ell", "delta"]);
            for &ell in &ell.0 {
                report.push(&json!({
                    "n": n, "pattern": pi.0, "lambda_edges": l.edge_count(), "edge_count": h.edge_count(),
                    "ell": ell, "delta": delta_ell(&h, ell)?,
                }))?;
            }
            report
        }
        Command::Independents { n, pi, lambda, size } => {
            let (l, h) = h_for(*n, &pi.0, lambda, limits)?;
            let mut report = Report::new(&["n", "pattern", "lambda_edges", "size", "count"]);
            for &size in &size.0 {
                let count = count_independent_of_size(&h, size, limits)?;
                report.push(&json!({
                    "n": n, "pattern": pi.0, "lambda_edges": l.edge_count(), "size": size, "count": count.to_string(),
                }))?;
            }
            report
        }
        Command::SampleDensity { input, pi, r, trials, seed } => {
            let m = load_matrix(input)?;
            let est = sampling_estimates(&m, &pi.0, *r, *trials, *seed)?;
            let mut row = serde_json::to_value(&est)?;
            row["pattern"] = json!(pi.0);
            Report::single(
                &[
                    "pattern",
                    "r",
                    "trials",
                    "seed",
                    "mean_one",
                    "mean_one_decimal",
                    "se_one",
                    "exact.one_density",
                    "exact.one_density_decimal",
                    "mean_pi",
                    "mean_pi_decimal",
                    "se_pi",
                    "exact.pi_density",
                    "exact.pi_density_decimal",
                ],
                &row,
            )?
        }
        Command::Replay { .. } => unreachable!("replay is dispatched before execute"),
    };
    Ok(report)
}

/// "1,2,3;2,3,4" with 1-based vertices, returned 0-based.
fn parse_cliques(n: usize, text: &str) -> Result<Vec<Vec<u32>>, CliError> {
    let mut out = Vec::new();
    for (ci, part) in text.split(';').enumerate() {
        let mut clique = Vec::new();
        for (vi, item) in part.split(',').enumerate() {
            let v: u32 = item.trim().parse().map_err(|e| Error::parse(ci + 1, format!("clique {}, entry {}: {e}", ci + 1, vi + 1)))?;
            if v == 0 || v as usize > n {
                return Err(Error::parse(ci + 1, format!("clique {}, vertex {v} outside 1..={n}", ci + 1)).into());
            }
            clique.push(v - 1);
        }
        out.push(clique);
    }
    Ok(out)
}
