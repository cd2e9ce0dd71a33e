use serde_json::json;
use twolevel::bounds::{
    iterate_group, lower_bound_low_rank, optimal_value, optimal_value_numeric,
    two_level_coefficient, upper_bound_order, ReferenceConstants,
};
use twolevel::fnspace::self_correlate;
use twolevel::fredholm::solve_quadratic;
use twolevel::kernels::quadratic_coefficients;
use twolevel::{BoundError, GridFunction, Level, Support, SymmetryGroup};

use crate::render::{csv, fixed, full, significant, tiny};
use crate::{CliError, Report, RunConfig, ORACLE_TOLERANCE};

/// `--level` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LevelArg {
    /// 1-level, support [-2, 2]
    One2,
    /// 1-level, support [-3, 3]
    One3,
    /// 2-level, support [-1, 1]
    Two,
}

impl LevelArg {
    fn level(self) -> Level {
        match self {
            LevelArg::One2 => Level::OneLevel(Support::Two),
            LevelArg::One3 => Level::OneLevel(Support::Three),
            LevelArg::Two => Level::TwoLevel,
        }
    }

    fn slug(self) -> &'static str {
        match self {
            LevelArg::One2 => "one2",
            LevelArg::One3 => "one3",
            LevelArg::Two => "two",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DumpTarget {
    /// Optimal g on [-1/2, 1/2]
    G,
    /// Correlation g * g on [-1, 1]
    PhiHat,
    /// Normalized kernel on [-1, 1]
    Kernel,
}

impl DumpTarget {
    fn slug(self) -> &'static str {
        match self {
            DumpTarget::G => "g",
            DumpTarget::PhiHat => "phi_hat",
            DumpTarget::Kernel => "kernel",
        }
    }
}

fn report(command: &'static str, cfg: &RunConfig) -> Report {
    Report {
        command,
        config: cfg.clone(),
        results: json!(null),
        provenance: json!(null),
        text: String::new(),
        csv: String::new(),
        failure: None,
        warnings: Vec::new(),
    }
}

/// Naive and optimal values for all groups, with a Nyström cross-check.
pub fn table1(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.precision;
    let mut rows = Vec::new();
    let mut text = vec!["group, naive, optimal, numeric, gap".to_string()];
    let mut csv_rows = Vec::new();
    let mut max_gap = 0.0f64;
    // The dense solves dominate and are independent, so run them side by side.
    let checks: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = SymmetryGroup::ALL
            .map(|group| scope.spawn(move || optimal_value_numeric(group, cfg.grid_n)))
            .into_iter()
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("Nystrom worker panicked"))
            .collect()
    });
    for (group, numeric) in SymmetryGroup::ALL.into_iter().zip(checks) {
        let exact = optimal_value(group)?;
        let numeric = numeric?;
        let gap = (exact.optimal_value - numeric.optimal_value).abs();
        max_gap = max_gap.max(gap);
        text.push(format!(
            "{}, {}, {}, {}, {}",
            group.label(),
            fixed(exact.naive_value, p),
            significant(exact.optimal_value, p),
            significant(numeric.optimal_value, p),
            tiny(gap)
        ));
        csv_rows.push(format!(
            "{},{},{},{},{}",
            group.slug(),
            full(exact.naive_value),
            full(exact.optimal_value),
            full(numeric.optimal_value),
            full(gap)
        ));
        rows.push(json!({
            "group": group,
            "naive": exact.naive_value,
            "optimal": exact.optimal_value,
            "numeric": numeric.optimal_value,
            "gap": gap,
        }));
    }
    let ok = max_gap <= ORACLE_TOLERANCE;
    let mut r = report("table1", cfg);
    r.results =
        json!({ "rows": rows, "max_gap": max_gap, "tolerance": ORACLE_TOLERANCE, "ok": ok });
    r.provenance = json!({
        "kind": "analytic",
        "naive": "objective at the trivial choice f = 1",
        "optimal": "closed-form solution of the quadratic-kernel Fredholm equation",
        "numeric": { "kind": "nystrom", "nodes": cfg.grid_n },
    });
    r.text = text.join("\n") + "\n";
    r.csv = csv("group,naive,optimal,numeric,gap", csv_rows);
    if !ok {
        r.failure = Some(format!(
            "Nystrom check disagrees with the closed form: max gap {max_gap:e} > {ORACLE_TOLERANCE:e}"
        ));
    }
    Ok(r)
}

/// Where the constant in a bound comes from.
fn constant_for(group: SymmetryGroup, level: Level) -> Result<(f64, String), CliError> {
    Ok(match level {
        Level::TwoLevel => (
            optimal_value(group)?.optimal_value,
            "B2: optimal 2-level value, support [-1, 1]".to_string(),
        ),
        Level::OneLevel(support) => {
            let b = ReferenceConstants::one_level(group, support)
                .ok_or(BoundError::NoReference { group, support })?;
            (b, format!("B1: {}", ReferenceConstants::source(support)))
        }
    })
}

/// Upper bound on `Prob(rank ≥ r)`.
pub fn vanishing(
    group: SymmetryGroup,
    rank: u64,
    level: LevelArg,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let bound = upper_bound_order(group, rank, level.level())?;
    let (constant, source) = constant_for(group, level.level())?;
    let (coefficient, rule) = match level {
        LevelArg::Two => {
            let m = rank / 2;
            let rule = if rank.is_multiple_of(2) {
                format!("c2({rank}) = 4m(m-1) with m = {m}")
            } else {
                format!("c2({rank}) = 4m^2 with m = {m}")
            };
            (two_level_coefficient(rank), rule)
        }
        _ => (rank, format!("1-level weight r = {rank}")),
    };
    let p = cfg.precision;
    let mut r = report("vanishing", cfg);
    r.results = json!({
        "group": group,
        "rank": rank,
        "level": level.slug(),
        "bound": bound,
        "constant": constant,
        "coefficient": coefficient,
    });
    r.provenance = json!({ "kind": level.slug(), "constant": source, "coefficient": rule });
    r.text = format!(
        "Prob(rank >= {rank}) <= {} for {}\nconstant: {} ({source})\ncoefficient: {rule}\n",
        significant(bound, p),
        group.label(),
        significant(constant, p),
    );
    r.csv = csv(
        "group,rank,level,bound,constant,coefficient",
        [format!(
            "{},{rank},{},{},{},{coefficient}",
            group.slug(),
            level.slug(),
            full(bound),
            full(constant)
        )],
    );
    Ok(r)
}

/// Lower bound on the proportion of low ranks.
pub fn lower_bound(
    group: SymmetryGroup,
    k: u64,
    level: LevelArg,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let bound = lower_bound_low_rank(group, k, level.level())?;
    let (constant, source) = constant_for(group, level.level())?;
    let ranks = match group {
        SymmetryGroup::SOEven => (0..=k).map(|j| (2 * j).to_string()).collect::<Vec<_>>(),
        SymmetryGroup::SOOdd => (0..=k).map(|j| (2 * j + 1).to_string()).collect(),
        _ => vec!["0".into(), "1".into(), "2".into()],
    };
    let event = format!("Prob({})", ranks.join(") + Prob("));
    let p = cfg.precision;
    let mut r = report("lower-bound", cfg);
    r.results = json!({
        "group": group,
        "k": k,
        "level": level.slug(),
        "ranks": ranks,
        "bound": bound,
        "constant": constant,
    });
    r.provenance = json!({ "kind": level.slug(), "constant": source });
    r.text = format!(
        "{event} >= {} for {}\nconstant: {} ({source})\n",
        significant(bound, p),
        group.label(),
        significant(constant, p),
    );
    r.csv = csv(
        "group,k,level,bound,constant",
        [format!(
            "{},{k},{},{},{}",
            group.slug(),
            level.slug(),
            full(bound),
            full(constant)
        )],
    );
    Ok(r)
}

/// One round of iteration followed by a truncated Neumann series.
pub fn iterate(group: SymmetryGroup, terms: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    if terms == 0 {
        return Err(CliError::Invalid("--terms must be at least 1".into()));
    }
    let it = iterate_group(group, cfg.grid_n, terms)?;
    let p = cfg.precision;
    let mut r = report("iterate", cfg);
    r.results = serde_json::to_value(&it)?;
    r.provenance = json!({
        "kind": "neumann_truncated",
        "terms": terms,
        "nodes": cfg.grid_n,
        "test_function": "closed-form optimum for the Fejer test function, correlated with itself",
    });
    if !it.certified {
        r.warnings.push(format!(
            "kernel norm squared {} >= 1: the series is not certified to converge",
            significant(it.norm_sq, p)
        ));
    }
    if !it.nonnegative_terms {
        r.warnings
            .push("some series terms are negative: truncations are not upper bounds".into());
    }
    let mut text = vec![
        format!(
            "iterated {} on {} nodes, {terms} terms",
            group.label(),
            cfg.grid_n
        ),
        format!("c = {}", significant(it.c_const, p)),
        format!(
            "norm_sq = {} ({})",
            significant(it.norm_sq, p),
            if it.certified {
                "certified"
            } else {
                "not certified"
            }
        ),
        "n, partial_sum, bound".to_string(),
    ];
    for (n, (s, b)) in it.partial_sums.iter().zip(&it.partial_bounds).enumerate() {
        text.push(format!(
            "{n}, {}, {}",
            significant(*s, p),
            significant(*b, p)
        ));
    }
    text.push(format!(
        "final bound: {}{}",
        significant(it.final_bound, p),
        if it.certified { "" } else { " (not certified)" }
    ));
    text.push(format!(
        "direct solve: {}",
        significant(it.nystrom_value, p)
    ));
    text.push(format!(
        "previous bound: {}",
        significant(it.previous_value, p)
    ));
    r.text = text.join("\n") + "\n";
    r.csv = csv(
        "n,partial_sum,bound",
        it.partial_sums
            .iter()
            .zip(&it.partial_bounds)
            .enumerate()
            .map(|(n, (s, b))| format!("{n},{},{}", full(*s), full(*b))),
    );
    Ok(r)
}

/// Samples of one of the objects behind the closed-form optimum.
pub fn dump(what: DumpTarget, group: SymmetryGroup, cfg: &RunConfig) -> Result<Report, CliError> {
    let kernel = quadratic_coefficients(group);
    let g = || -> Result<GridFunction, CliError> {
        let s = solve_quadratic(&kernel).map_err(BoundError::from)?;
        Ok(s.sample(cfg.grid_n).map_err(BoundError::from)?)
    };
    let f = match what {
        DumpTarget::G => g()?,
        DumpTarget::PhiHat => self_correlate(&g()?),
        DumpTarget::Kernel => kernel.sample(cfg.grid_n).map_err(BoundError::from)?,
    };
    let (x, value): (Vec<f64>, Vec<f64>) = f.points().unzip();
    let body = csv(
        "x,value",
        f.points().map(|(x, v)| format!("{},{}", full(x), full(v))),
    );
    let mut r = report("dump", cfg);
    r.results = json!({
        "what": what.slug(),
        "group": group,
        "interval": [f.lo(), f.hi()],
        "x": x,
        "value": value,
    });
    r.provenance = json!({
        "kind": match what {
            DumpTarget::G => "analytic",
            DumpTarget::PhiHat => "correlation",
            DumpTarget::Kernel => "kernel",
        },
        "kernel": { "a": kernel.a(), "b": kernel.b(), "c": kernel.c() },
    });
    // Plain text dumps are the same CSV; there is nothing to round.
    r.text = body.clone();
    r.csv = body;
    Ok(r)
}
