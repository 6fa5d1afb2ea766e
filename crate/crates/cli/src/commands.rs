use std::process::ExitCode;

use anyhow::Context;
use diqss_core::channel::{distance_for_efficiency, global_efficiency, transmittance};
use diqss_core::outcome_model::svetlichny_polynomial;
use diqss_core::rates::{raw_qber, secret_rate, ProtocolConfig, Variant};
use diqss_core::simulate::{run_pipeline, Estimate, SimulationConfig};
use diqss_core::sweep::{run_sweep, table1, SweepSpec, Table1Inputs};
use diqss_core::thresholds::threshold_report;

use crate::args::{
    ChannelArgs, Cli, Command, DistanceArgs, EtaOrDistance, Format, PointArgs, SimulateArgs, Suite,
    SweepArgs, Table1Args, ThresholdArgs, VerifyArgs,
};
use crate::output::{emit, to_json_string, Table, Value};
use crate::verify::{mc_suite, oracle_suite, table1_suite, Check};

/// Executes a parsed command line. Domain errors come back as `Err`; a
/// failing `verify` returns exit code 1.
pub fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let format = cli.output.format;
    let (content, status) = match &cli.command {
        Command::Rate(a) => (rate(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Qber(a) => (qber(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Threshold(a) => (threshold(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Distance(a) => (distance(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Sweep(a) => (sweep(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Table1(a) => (table_one(a)?.render(format)?, ExitCode::SUCCESS),
        Command::Simulate(a) => (simulate(a, format)?, ExitCode::SUCCESS),
        Command::Verify(a) => {
            let checks = verify(a)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let content = match format {
                Format::Human => verify_summary(&checks),
                _ => checks_table(&checks).render(format)?,
            };
            let status = if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            (content, status)
        }
    };
    emit(&content, cli.output.output.as_deref())?;
    Ok(status)
}

fn resolve_eta(point: &EtaOrDistance, channel: &ChannelArgs) -> anyhow::Result<f64> {
    match (point.eta, point.distance) {
        (Some(eta), _) => Ok(eta),
        (None, Some(d)) => Ok(global_efficiency(d, &channel.params()?)?),
        (None, None) => Ok(1.0),
    }
}

fn point_columns() -> Vec<(&'static str, Option<&'static str>)> {
    vec![
        ("variant", None),
        ("fidelity", None),
        ("eta", None),
        ("q", None),
    ]
}

fn point_values(v: &Variant, config: &ProtocolConfig) -> Vec<Value> {
    vec![
        v.id().to_string().into(),
        config.fidelity.into(),
        config.eta.into(),
        config.q.into(),
    ]
}

fn rate(a: &PointArgs) -> anyhow::Result<Table> {
    let v = a.variant.variant();
    let config = ProtocolConfig::from_variant(&v, a.fidelity, resolve_eta(&a.point, &a.channel)?)?;
    let r = secret_rate(&config)?;
    let mut columns = point_columns();
    columns.extend([
        ("s_value", None),
        ("raw_qber", None),
        ("effective_qber", None),
        ("eve_bound", Some("bits")),
        ("ad_retention", None),
        ("rate", Some("bits/round")),
        ("rate_unclamped", Some("bits/round")),
    ]);
    let mut t = Table::new(columns);
    let mut row = point_values(&v, &config);
    row.extend([
        r.s_value.into(),
        r.raw_qber.into(),
        r.effective_qber.into(),
        r.eve_bound.into(),
        r.ad_retention.into(),
        r.rate.into(),
        r.rate_unclamped.into(),
    ]);
    t.push(row);
    Ok(t)
}

fn qber(a: &PointArgs) -> anyhow::Result<Table> {
    let v = a.variant.variant();
    let config = ProtocolConfig::from_variant(&v, a.fidelity, resolve_eta(&a.point, &a.channel)?)?;
    let r = secret_rate(&config)?;
    let mut columns = point_columns();
    columns.extend([
        ("loss_inclusive_qber", None),
        ("click_conditional_qber", None),
        ("post_selected_qber", None),
        ("effective_qber", None),
        ("ad_retention", None),
        ("s_value", None),
        ("svetlichny_at_unit_eta", None),
    ]);
    let mut t = Table::new(columns);
    let mut row = point_values(&v, &config);
    row.extend([
        raw_qber(config.fidelity, config.eta, false)?.into(),
        ((1.0 - config.fidelity) / 2.0).into(),
        raw_qber(config.fidelity, config.eta, true)?.into(),
        r.effective_qber.into(),
        r.ad_retention.into(),
        r.s_value.into(),
        svetlichny_polynomial(config.fidelity)?.into(),
    ]);
    t.push(row);
    Ok(t)
}

fn threshold(a: &ThresholdArgs) -> anyhow::Result<Table> {
    let v = a.variant.variant();
    let params = a.channel.params()?;
    let r = threshold_report(&v, a.fidelity, Some(&params))
        .with_context(|| format!("{} at fidelity {}", v.id(), a.fidelity))?;
    let d = r
        .max_distance
        .context("distance missing from threshold report")?;
    let mut t = Table::new([
        ("variant", None),
        ("fidelity", None),
        ("q", None),
        ("eta_threshold", None),
        ("delta_threshold", None),
        ("bracket_residual", Some("bits/round")),
        ("reachable", None),
        ("max_distance", Some("km")),
        ("max_distance_bisection", Some("km")),
        ("user_to_user_distance", Some("km")),
    ]);
    t.push(vec![
        v.id().to_string().into(),
        a.fidelity.into(),
        v.q.into(),
        r.eta_threshold.into(),
        r.delta_threshold.into(),
        r.bracket_residual.into(),
        d.reachable.into(),
        d.km.into(),
        d.km_by_bisection.into(),
        d.user_to_user_km.into(),
    ]);
    Ok(t)
}

fn distance(a: &DistanceArgs) -> anyhow::Result<Table> {
    let params = a.channel.params()?;
    let (d, eta) = match (a.distance, a.eta) {
        (Some(d), _) => (d, global_efficiency(d, &params)?),
        (None, Some(eta)) => (distance_for_efficiency(eta, &params)?, eta),
        (None, None) => anyhow::bail!("one of --eta or --distance is required"),
    };
    let mut t = Table::new([
        ("distance", Some("km")),
        ("user_to_user_distance", Some("km")),
        ("transmittance", None),
        ("eta", None),
    ]);
    t.push(vec![
        d.into(),
        (2.0 * d).into(),
        transmittance(d, params.alpha)?.into(),
        eta.into(),
    ]);
    Ok(t)
}

fn sweep(a: &SweepArgs) -> anyhow::Result<Table> {
    let spec = SweepSpec {
        axes: a.axes.clone(),
        fidelity: a.fidelity,
        eta: a.eta,
        variants: a.variants(),
        channel: Some(a.channel.params()?),
    };
    let rows = run_sweep(&spec)?;
    let mut columns: Vec<(String, Option<&'static str>)> = spec
        .axes
        .iter()
        .map(|axis| (axis.name.as_str().to_owned(), None))
        .collect();
    columns.extend(["variant", "rate", "s_value", "effective_qber"].map(|c| (c.to_owned(), None)));
    let mut t = Table::new(columns);
    for row in rows {
        let mut cells: Vec<Value> = row.axis_values.iter().map(|&x| x.into()).collect();
        cells.extend([
            row.variant.id().to_string().into(),
            row.rate.into(),
            row.s_value.into(),
            row.effective_qber.into(),
        ]);
        t.push(cells);
    }
    Ok(t)
}

fn table_one(a: &Table1Args) -> anyhow::Result<Table> {
    let inputs = Table1Inputs {
        fidelity: a.fidelity,
        q: a.q,
        eta: a.eta,
        distance_fidelity: a.distance_fidelity,
        channel: a.channel.params()?,
    };
    let mut t = Table::new([
        ("variant", None),
        ("protocol", None),
        ("rate", Some("bits/round")),
        ("delta_threshold", None),
        ("eta_threshold", None),
        ("max_distance", Some("km")),
    ]);
    for row in table1(&inputs)? {
        let v = row.variant;
        let title = if v.advantage_distillation {
            format!("AD+{}", v.strategy.title())
        } else {
            v.strategy.title().to_owned()
        };
        t.push(vec![
            v.id().to_string().into(),
            title.into(),
            row.rate.into(),
            row.delta_threshold.into(),
            row.eta_threshold.into(),
            row.max_distance_km.into(),
        ]);
    }
    Ok(t)
}

fn simulate(a: &SimulateArgs, format: Format) -> anyhow::Result<String> {
    let v = a.variant.variant();
    let config = SimulationConfig {
        protocol: ProtocolConfig::from_variant(&v, a.fidelity, resolve_eta(&a.point, &a.channel)?)?,
        rounds: a.rounds,
        seed: a.seed,
    };
    let report = run_pipeline(&config)?;
    if format == Format::Json {
        return to_json_string(&serde_json::to_value(report)?);
    }
    let mut t = Table::new([
        ("statistic", None),
        ("empirical", None),
        ("ci_low", None),
        ("ci_high", None),
        ("analytic", None),
        ("deviation", Some("sigma")),
        ("successes", None),
        ("trials", None),
    ]);
    let stats: [(&str, Estimate, f64); 4] = [
        (
            "qber_before_ad",
            report.qber_before_ad,
            report.analytic_qber_before,
        ),
        (
            "qber_loss_inclusive",
            report.qber_loss_inclusive,
            report.analytic_qber_loss_inclusive,
        ),
        (
            "qber_after_ad",
            report.qber_after_ad,
            report.analytic_qber_after,
        ),
        ("retention", report.retention, report.analytic_retention),
    ];
    for (name, e, p) in stats {
        t.push(vec![
            name.into(),
            e.value.into(),
            e.ci_low.into(),
            e.ci_high.into(),
            p.into(),
            e.deviation_sigmas(p).into(),
            e.successes.into(),
            e.trials.into(),
        ]);
    }
    t.render(format)
}

fn verify(a: &VerifyArgs) -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    if matches!(a.suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle_suite()?);
    }
    if matches!(a.suite, Suite::Table1 | Suite::All) {
        checks.extend(table1_suite()?);
    }
    if matches!(a.suite, Suite::Mc | Suite::All) {
        checks.extend(mc_suite(a.rounds, a.seed)?);
    }
    Ok(checks)
}

fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new([
        ("suite", None),
        ("check", None),
        ("passed", None),
        ("detail", None),
    ]);
    for c in checks {
        t.push(vec![
            c.suite.into(),
            c.name.clone().into(),
            c.passed.into(),
            c.detail.clone().into(),
        ]);
    }
    t
}

fn verify_summary(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<7} {}", c.suite, c.name));
        if !c.detail.is_empty() {
            out.push_str(&format!("  ({})", c.detail));
        }
        out.push('\n');
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    out
}
