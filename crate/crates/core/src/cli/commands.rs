use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use super::args::*;
use super::io::{BoundsFile, Dataset};
use super::report::RunReport;
use super::{CliError, CliResult};
use crate::accountant::{BudgetLedger, Totals};
use crate::erm::{ErmConfig, Perturbation};
use crate::mechanisms::{
    exponential_mechanism, gaussian_mechanism, laplace_mechanism, BudgetAllocation,
    PrivacyBudget, SensitivitySpec,
};
use crate::models::{
    fit_linreg, fit_logistic, fit_svm, predict_linreg, predict_logistic, predict_svm, Kernel,
    LinregOptions, ModelKind, SvmOptions, TrainedModel,
};
use crate::stats::{
    cov_dp, histogram_dp, mean_dp, pooled_cov_dp, pooled_var_dp, quantile_dp, sd_dp, table_dp,
    var_dp, Breaks, Factor, GroupCollection, HistogramSpec, MechanismKind, NeighborChoice,
    PairedGroup, Release, StatRequest,
};
use crate::tuning::{tune_classification, tune_linreg, ClassifierCandidate};
use crate::{DpError, RandomSource};

pub(crate) fn execute(cli: Cli) -> CliResult<RunReport> {
    match cli.command {
        Command::Stat { kind, args } => stat(kind, &args),
        Command::Fit { kind, args } => fit(kind, &args),
        Command::Predict(args) => predict(&args),
        Command::Tune {
            kind,
            gamma_grid,
            args,
        } => tune(kind, &gamma_grid, &args),
        Command::Mech { mechanism } => mech(mechanism),
        Command::Budget {
            action,
            ledger,
            cap_eps,
            cap_delta,
            eps,
            delta,
        } => budget(action, ledger, cap_eps, cap_delta, eps, delta),
    }
}

fn source(seed: Option<u64>) -> RandomSource {
    seed.map_or_else(RandomSource::from_entropy, RandomSource::from_seed)
}

fn cap_from(cap_eps: Option<f64>, cap_delta: Option<f64>) -> CliResult<Option<Totals>> {
    if cap_eps.is_none() && cap_delta.is_none() {
        return Ok(None);
    }
    let epsilon = cap_eps.unwrap_or(f64::INFINITY);
    let delta = cap_delta.unwrap_or(f64::INFINITY);
    if epsilon.is_nan() || epsilon < 0.0 || delta.is_nan() || delta < 0.0 {
        return Err(CliError::Usage("budget caps must be nonnegative".into()));
    }
    Ok(Some(Totals { epsilon, delta }))
}

/// Entries recorded by one run. Nothing is written until [`Charges::commit`],
/// so a refused charge leaves the ledger file untouched.
struct Charges {
    ledger: BudgetLedger,
    path: Option<PathBuf>,
    start: usize,
    tag: Option<String>,
}

impl Charges {
    fn open(args: &LedgerArgs) -> CliResult<Self> {
        let mut ledger = match &args.ledger {
            Some(p) => BudgetLedger::load(p)?,
            None => BudgetLedger::new(),
        };
        ledger.set_cap(cap_from(args.cap_eps, args.cap_delta)?);
        Ok(Self {
            start: ledger.len(),
            ledger,
            path: args.ledger.clone(),
            tag: args.tag.clone(),
        })
    }

    fn record(&mut self, op: &str, epsilon: f64, delta: f64) -> CliResult<()> {
        self.ledger.record(op, epsilon, delta, self.tag.clone())?;
        Ok(())
    }

    fn commit(self, report: &mut RunReport) -> CliResult<()> {
        if let Some(p) = &self.path {
            self.ledger.append_to(p, self.start)?;
        }
        report.charged = crate::accountant::sequential_total(&self.ledger.entries()[self.start..]);
        Ok(())
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values always serialize")
}

fn stat_request(a: &StatArgs) -> CliResult<StatRequest> {
    let (budget, mechanism) = match a.mechanism {
        MechanismArg::Laplace => {
            if a.delta != 0.0 {
                return Err(CliError::Usage(
                    "--delta is only used with --mechanism gaussian".into(),
                ));
            }
            (PrivacyBudget::pure(a.eps)?, MechanismKind::Laplace)
        }
        MechanismArg::Gaussian => {
            let b = match a.type_dp {
                TypeDp::Adp => PrivacyBudget::approximate(a.eps, a.delta)?,
                TypeDp::Pdp => PrivacyBudget::probabilistic(a.eps, a.delta)?,
            };
            (b, MechanismKind::Gaussian)
        }
    };
    let neighbor = match a.neighbor {
        NeighborArg::Bounded => NeighborChoice::Bounded,
        NeighborArg::Unbounded => NeighborChoice::Unbounded,
        NeighborArg::Both => NeighborChoice::Both,
    };
    Ok(StatRequest::new(budget, mechanism, neighbor)?)
}

fn need<'a>(opt: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    opt.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{flag} is required for this statistic")))
}

fn need_columns(cols: &[String], n: usize) -> CliResult<()> {
    if cols.len() != n {
        return Err(CliError::Usage(format!("--columns needs exactly {n} names")));
    }
    Ok(())
}

fn grouped(data: &Dataset, group: &str, cols: &[String]) -> CliResult<Vec<Vec<Vec<f64>>>> {
    let labels = data.strings(group)?;
    let values = cols
        .iter()
        .map(|c| data.numeric(c))
        .collect::<CliResult<Vec<_>>>()?;
    let mut groups: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        let g = groups
            .entry(label.as_str())
            .or_insert_with(|| vec![Vec::new(); cols.len()]);
        for (k, col) in values.iter().enumerate() {
            g[k].push(col[i]);
        }
    }
    Ok(groups.into_values().collect())
}

fn release_json<T: Serialize>(releases: &[Release<T>]) -> Value {
    Value::Array(
        releases
            .iter()
            .map(|r| {
                json!({
                    "neighbor": r.meta.neighbor,
                    "value": to_value(&r.value),
                    "delta_used": r.meta.sensitivity,
                })
            })
            .collect(),
    )
}

fn stat(kind: StatKind, a: &StatArgs) -> CliResult<RunReport> {
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut rng = source(a.seed);
    let mut report = RunReport::new(format!("stat {name}"), Some(rng.seed()));
    let mut charges = Charges::open(&a.ledger)?;
    let data = Dataset::read(&a.input)?;

    let is_quantile = matches!(kind, StatKind::Quantile | StatKind::Median);
    let (result, columns) = if is_quantile {
        if a.mechanism != MechanismArg::Laplace || a.delta != 0.0 {
            return Err(CliError::Usage(
                "quantiles use the exponential mechanism with a pure budget; drop --mechanism and --delta"
                    .into(),
            ));
        }
        let col = need(&a.column, "--column")?;
        let bounds = BoundsFile::load_required(a.bounds_file.as_deref())?.range(col)?;
        let q = match kind {
            StatKind::Median => 0.5,
            _ => a.q.ok_or_else(|| CliError::Usage("--q is required for quantile".into()))?,
        };
        let budget = PrivacyBudget::pure(a.eps)?;
        let x = data.numeric(col)?;
        let value = quantile_dp(&x, q, &budget, bounds, a.uniform_sampling, &mut rng)?;
        charges.record(&report.command, a.eps, 0.0)?;
        (json!([{ "neighbor": null, "value": value, "delta_used": 1.0 }]), vec![col.to_string()])
    } else {
        let req = stat_request(a)?;
        let (result, columns, releases) = match kind {
            StatKind::Mean | StatKind::Var | StatKind::Sd => {
                let col = need(&a.column, "--column")?;
                let bounds = BoundsFile::load_required(a.bounds_file.as_deref())?.range(col)?;
                let x = data.numeric(col)?;
                let r = match kind {
                    StatKind::Mean => mean_dp(&x, bounds, &req, &mut rng)?,
                    StatKind::Var => var_dp(&x, bounds, &req, &mut rng)?,
                    _ => sd_dp(&x, bounds, &req, &mut rng)?,
                };
                (release_json(&r), vec![col.to_string()], r.len())
            }
            StatKind::Cov => {
                need_columns(&a.columns, 2)?;
                let bf = BoundsFile::load_required(a.bounds_file.as_deref())?;
                let (b1, b2) = (bf.range(&a.columns[0])?, bf.range(&a.columns[1])?);
                let x1 = data.numeric(&a.columns[0])?;
                let x2 = data.numeric(&a.columns[1])?;
                let r = cov_dp(&x1, &x2, b1, b2, &req, &mut rng)?;
                (release_json(&r), a.columns.clone(), r.len())
            }
            StatKind::PooledVar => {
                let col = need(&a.column, "--column")?;
                let group = need(&a.group_column, "--group-column")?;
                let bounds = BoundsFile::load_required(a.bounds_file.as_deref())?.range(col)?;
                let groups: Vec<Vec<f64>> = grouped(&data, group, &[col.to_string()])?
                    .into_iter()
                    .map(|mut g| g.remove(0))
                    .collect();
                let gc = GroupCollection::new(&groups, bounds, a.approx_n_max)?;
                let r = pooled_var_dp(&gc, &req, &mut rng)?;
                (release_json(&r), vec![col.to_string()], r.len())
            }
            StatKind::PooledCov => {
                need_columns(&a.columns, 2)?;
                let group = need(&a.group_column, "--group-column")?;
                let bf = BoundsFile::load_required(a.bounds_file.as_deref())?;
                let (b1, b2) = (bf.range(&a.columns[0])?, bf.range(&a.columns[1])?);
                let groups: Vec<PairedGroup> = grouped(&data, group, &a.columns)?
                    .into_iter()
                    .map(|mut g| {
                        let x2 = g.pop().expect("two columns");
                        let x1 = g.pop().expect("two columns");
                        PairedGroup { x1, x2 }
                    })
                    .collect();
                let r = pooled_cov_dp(&groups, b1, b2, a.approx_n_max, &req, &mut rng)?;
                (release_json(&r), a.columns.clone(), r.len())
            }
            StatKind::Histogram => {
                let col = need(&a.column, "--column")?;
                let breaks_raw = need(&a.breaks, "--breaks")?;
                let breaks = if breaks_raw.contains(',') {
                    let edges = breaks_raw
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| CliError::Usage(format!("bad --breaks '{breaks_raw}'")))?;
                    Breaks::Edges(edges)
                } else {
                    let bins = breaks_raw
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad --breaks '{breaks_raw}'")))?;
                    let range = BoundsFile::load_required(a.bounds_file.as_deref())?.range(col)?;
                    Breaks::Count {
                        bins,
                        lower: range.lower(),
                        upper: range.upper(),
                    }
                };
                let spec = HistogramSpec {
                    breaks,
                    normalize: a.normalize,
                    allow_negative: a.allow_negative,
                };
                let x = data.numeric(col)?;
                let r = histogram_dp(&x, &spec, &req, &mut rng)?;
                (release_json(&r), vec![col.to_string()], r.len())
            }
            StatKind::Table => {
                let cols: Vec<String> = if a.columns.is_empty() {
                    vec![need(&a.column, "--columns")?.to_string()]
                } else {
                    a.columns.clone()
                };
                let bf = BoundsFile::load_required(a.bounds_file.as_deref())?;
                let factors = cols
                    .iter()
                    .map(|c| Ok(Factor::new(data.strings(c)?, bf.categories(c)?)?))
                    .collect::<CliResult<Vec<_>>>()?;
                let r = table_dp(&factors, &req, a.allow_negative, &mut rng)?;
                (release_json(&r), cols, r.len())
            }
            StatKind::Quantile | StatKind::Median => unreachable!("handled above"),
        };
        for _ in 0..releases {
            charges.record(&report.command, req.budget.epsilon(), req.budget.delta())?;
        }
        report.metadata = json!({
            "mechanism": req.mechanism,
            "variant": req.budget.variant(),
        });
        (result, columns)
    };

    if is_quantile {
        report.metadata = json!({ "mechanism": "exponential", "variant": "pure" });
    }
    if let Value::Object(m) = &mut report.metadata {
        m.insert("statistic".into(), json!(name));
        m.insert("columns".into(), json!(columns));
        m.insert("epsilon".into(), json!(a.eps));
        m.insert("delta".into(), json!(a.delta));
    }
    report.result = result;
    charges.commit(&mut report)?;
    Ok(report)
}

fn feature_columns(data: &Dataset, a: &FitArgs) -> Vec<String> {
    if !a.features.is_empty() {
        return a.features.clone();
    }
    data.headers()
        .iter()
        .filter(|h| **h != a.label && Some(h.as_str()) != a.weights_column.as_deref())
        .cloned()
        .collect()
}

fn perturbation(m: MethodArg) -> Perturbation {
    match m {
        MethodArg::Output => Perturbation::Output,
        MethodArg::Objective => Perturbation::Objective,
    }
}

fn classifier_config(a: &FitArgs, gamma: f64) -> CliResult<ErmConfig> {
    if a.delta != 0.0 {
        return Err(CliError::Usage("classifiers take a pure budget; drop --delta".into()));
    }
    Ok(ErmConfig::new(
        PrivacyBudget::pure(a.eps)?,
        gamma,
        perturbation(a.method),
    )?)
}

fn svm_options(a: &FitArgs, data: &Dataset, features: &[String]) -> CliResult<SvmOptions> {
    let bounds_file = a.bounds_file.as_deref().map(BoundsFile::load).transpose()?;
    let mut opts = match a.kernel {
        KernelArg::Linear => {
            let bf = bounds_file
                .ok_or_else(|| CliError::Usage("--bounds-file is required for the linear kernel".into()))?;
            SvmOptions::linear(bf.ranges(features)?)
        }
        KernelArg::Gaussian => {
            let mut o = SvmOptions::gaussian(a.d);
            o.kernel_param = a.kernel_param;
            if let Some(bf) = bounds_file {
                o.bounds = Some(bf.ranges(features).unwrap_or_default());
            }
            o
        }
    };
    opts.huber_h = a.huber_h;
    opts.add_bias = a.add_bias;
    if let Some(w) = &a.weights_column {
        opts.weights = Some(data.numeric(w)?);
        opts.weight_upper_bound = Some(
            a.weight_bound
                .ok_or_else(|| CliError::Usage("--weights-column needs --weight-bound".into()))?,
        );
    }
    Ok(opts)
}

fn model_name(kind: ModelArg) -> &'static str {
    match kind {
        ModelArg::Logit => "logit",
        ModelArg::Svm => "svm",
        ModelArg::Linreg => "linreg",
    }
}

fn finish_model(
    mut model: TrainedModel,
    features: Vec<String>,
    a: &FitArgs,
    report: &mut RunReport,
) -> CliResult<()> {
    model.feature_names = features;
    if let Some(path) = &a.model_out {
        model.save(path)?;
    }
    report.warnings.extend(model.warnings.iter().cloned());
    report.metadata = json!({
        "kind": model.kind,
        "epsilon": model.config.epsilon,
        "delta": model.config.delta,
        "gamma": model.config.gamma,
        "method": model.config.method,
        "model_out": a.model_out,
    });
    report.result = json!({ "model": to_value(&model) });
    Ok(())
}

fn fit(kind: ModelArg, a: &FitArgs) -> CliResult<RunReport> {
    let mut rng = source(a.seed);
    let mut report = RunReport::new(format!("fit {}", model_name(kind)), Some(rng.seed()));
    let mut charges = Charges::open(&a.ledger)?;
    let data = Dataset::read(&a.input)?;
    let features = feature_columns(&data, a);
    let x = data.matrix(&features)?;
    let y = data.numeric(&a.label)?;

    let model = match kind {
        ModelArg::Logit => {
            let cfg = classifier_config(a, a.gamma)?;
            let bounds = BoundsFile::load_required(a.bounds_file.as_deref())?.ranges(&features)?;
            fit_logistic(x.view(), &y, &bounds, &cfg, a.add_bias, &mut rng)?
        }
        ModelArg::Svm => {
            let cfg = classifier_config(a, a.gamma)?;
            let opts = svm_options(a, &data, &features)?;
            fit_svm(x.view(), &y, &opts, &cfg, &mut rng)?
        }
        ModelArg::Linreg => {
            let bf = BoundsFile::load_required(a.bounds_file.as_deref())?;
            let mut bounds = bf.ranges(&features)?;
            bounds.push(bf.response(&a.label)?);
            let opts = LinregOptions {
                epsilon: a.eps,
                delta: a.delta,
                gamma: a.gamma,
                add_bias: a.add_bias,
            };
            fit_linreg(x.view(), &y, &bounds, &opts, &mut rng)?
        }
    };
    charges.record(&report.command, model.config.epsilon, model.config.delta)?;
    finish_model(model, features, a, &mut report)?;
    charges.commit(&mut report)?;
    Ok(report)
}

fn tune(kind: ModelArg, grid: &[f64], a: &FitArgs) -> CliResult<RunReport> {
    let mut rng = source(a.seed);
    let mut report = RunReport::new(format!("tune {}", model_name(kind)), Some(rng.seed()));
    let mut charges = Charges::open(&a.ledger)?;
    let data = Dataset::read(&a.input)?;
    let features = feature_columns(&data, a);
    let x = data.matrix(&features)?;
    let y = data.numeric(&a.label)?;

    let tuned = match kind {
        ModelArg::Logit | ModelArg::Svm => {
            let mut candidates = Vec::with_capacity(grid.len());
            let mut bounds = Vec::new();
            for &g in grid {
                let cfg = classifier_config(a, g)?;
                candidates.push(match kind {
                    ModelArg::Logit => ClassifierCandidate::Logistic(cfg),
                    _ => {
                        let opts = svm_options(a, &data, &features)?;
                        if opts.kernel == Kernel::Linear {
                            bounds = opts.bounds.clone().unwrap_or_default();
                        }
                        ClassifierCandidate::Svm(cfg, opts)
                    }
                });
            }
            if kind == ModelArg::Logit {
                bounds = BoundsFile::load_required(a.bounds_file.as_deref())?.ranges(&features)?;
            }
            tune_classification(&candidates, x.view(), &y, &bounds, a.add_bias, &mut rng)?
        }
        ModelArg::Linreg => {
            let bf = BoundsFile::load_required(a.bounds_file.as_deref())?;
            let mut bounds = bf.ranges(&features)?;
            bounds.push(bf.response(&a.label)?);
            let candidates: Vec<LinregOptions> = grid
                .iter()
                .map(|&g| LinregOptions {
                    epsilon: a.eps,
                    delta: a.delta,
                    gamma: g,
                    add_bias: a.add_bias,
                })
                .collect();
            tune_linreg(&candidates, x.view(), &y, &bounds, a.add_bias, &mut rng)?
        }
    };
    charges.record(&report.command, tuned.epsilon, tuned.delta)?;
    let chosen = grid[tuned.selected];
    finish_model(tuned.model, features, a, &mut report)?;
    if let Value::Object(r) = &mut report.result {
        r.insert("gamma_grid".into(), json!(grid));
        r.insert("chosen_gamma".into(), json!(chosen));
        r.insert("selected_index".into(), json!(tuned.selected));
    }
    charges.commit(&mut report)?;
    Ok(report)
}

fn predict(a: &PredictArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("predict", None);
    let model = TrainedModel::load(&a.model)?;
    if a.add_bias && !model.add_bias {
        return Err(CliError::Data("--add-bias given but the model has no intercept".into()));
    }
    let features = if a.features.is_empty() {
        model.feature_names.clone()
    } else {
        a.features.clone()
    };
    if features.is_empty() {
        return Err(CliError::Usage(
            "the model stores no feature names; pass --features".into(),
        ));
    }
    let data = Dataset::read(&a.input)?;
    let x = data.matrix(&features)?;
    let predictions = match model.kind {
        ModelKind::Logistic => predict_logistic(&model, x.view(), a.raw)?,
        ModelKind::SvmLinear | ModelKind::SvmGaussian => predict_svm(&model, x.view(), a.raw)?,
        ModelKind::Linear => predict_linreg(&model, x.view())?,
    };
    report.metadata = json!({ "kind": model.kind, "raw": a.raw, "features": features });
    report.result = json!({ "predictions": predictions });
    Ok(report)
}

fn allocation(alloc: &[f64]) -> CliResult<Option<BudgetAllocation>> {
    if alloc.is_empty() {
        Ok(None)
    } else {
        Ok(Some(BudgetAllocation::new(alloc.to_vec())?))
    }
}

fn mech(cmd: MechCommand) -> CliResult<RunReport> {
    match cmd {
        MechCommand::Laplace {
            values,
            sensitivity,
            eps,
            alloc,
            seed,
            ledger,
        } => {
            let mut rng = source(seed);
            let mut report = RunReport::new("mech laplace", Some(rng.seed()));
            let mut charges = Charges::open(&ledger)?;
            let budget = PrivacyBudget::pure(eps)?;
            let sens = SensitivitySpec::l1(sensitivity)?;
            let alloc = allocation(&alloc)?;
            let out = laplace_mechanism(&values, &budget, &sens, alloc.as_ref(), &mut rng)?;
            charges.record("mech laplace", eps, 0.0)?;
            report.result = json!({ "values": out });
            report.metadata = json!({ "epsilon": eps, "delta": 0.0, "sensitivity": sens.per_coordinate() });
            charges.commit(&mut report)?;
            Ok(report)
        }
        MechCommand::Gaussian {
            values,
            sensitivity,
            eps,
            delta,
            type_dp,
            alloc,
            seed,
            ledger,
        } => {
            let mut rng = source(seed);
            let mut report = RunReport::new("mech gaussian", Some(rng.seed()));
            let mut charges = Charges::open(&ledger)?;
            let budget = match type_dp {
                TypeDp::Adp => PrivacyBudget::approximate(eps, delta)?,
                TypeDp::Pdp => PrivacyBudget::probabilistic(eps, delta)?,
            };
            let sens = SensitivitySpec::l2(sensitivity)?;
            let alloc = allocation(&alloc)?;
            let out = gaussian_mechanism(&values, &budget, &sens, alloc.as_ref(), &mut rng)?;
            charges.record("mech gaussian", eps, delta)?;
            report.result = json!({ "values": out });
            report.metadata = json!({
                "epsilon": eps,
                "delta": delta,
                "variant": budget.variant(),
                "sensitivity": sens.per_coordinate(),
            });
            charges.commit(&mut report)?;
            Ok(report)
        }
        MechCommand::Exponential {
            utility,
            sensitivity,
            eps,
            measure,
            candidates,
            seed,
            ledger,
        } => {
            let mut rng = source(seed);
            let mut report = RunReport::new("mech exponential", Some(rng.seed()));
            let mut charges = Charges::open(&ledger)?;
            if !candidates.is_empty() && candidates.len() != utility.len() {
                return Err(CliError::Usage("--candidates must match --utility in length".into()));
            }
            let budget = PrivacyBudget::pure(eps)?;
            let measure = (!measure.is_empty()).then_some(measure);
            let index = exponential_mechanism(&utility, &budget, sensitivity, measure.as_deref(), &mut rng)?;
            charges.record("mech exponential", eps, 0.0)?;
            report.result = json!({ "index": index, "candidate": candidates.get(index) });
            report.metadata = json!({ "epsilon": eps, "delta": 0.0, "sensitivity": sensitivity });
            charges.commit(&mut report)?;
            Ok(report)
        }
    }
}

fn budget(
    action: BudgetAction,
    path: PathBuf,
    cap_eps: Option<f64>,
    cap_delta: Option<f64>,
    eps: Option<f64>,
    delta: Option<f64>,
) -> CliResult<RunReport> {
    let mut ledger = BudgetLedger::load(&path)?;
    let cap = cap_from(cap_eps, cap_delta)?;
    ledger.set_cap(cap);
    let sequential = ledger.sequential_total();
    let mut report = RunReport::new(
        match action {
            BudgetAction::Report => "budget report",
            BudgetAction::Check => "budget check",
        },
        None,
    );
    let parallel = match ledger.parallel_total() {
        Ok(t) => Some(t),
        Err(e) => {
            report.warnings.push(format!("parallel composition unavailable: {e}"));
            None
        }
    };
    report.metadata = json!({ "ledger": path, "cap": cap });
    match action {
        BudgetAction::Report => {
            report.result = json!({
                "entries": ledger.len(),
                "sequential": sequential,
                "parallel": parallel,
                "remaining": ledger.remaining(),
            });
        }
        BudgetAction::Check => {
            let cap = cap.ok_or_else(|| CliError::Usage("check needs --cap-eps or --cap-delta".into()))?;
            let req = Totals {
                epsilon: eps.unwrap_or(0.0),
                delta: delta.unwrap_or(0.0),
            };
            let within = sequential.epsilon + req.epsilon <= cap.epsilon + 1e-12
                && sequential.delta + req.delta <= cap.delta + 1e-12;
            if !within {
                let rem = ledger.remaining().unwrap_or_default();
                return Err(CliError::Dp(DpError::BudgetExhausted {
                    requested_eps: req.epsilon,
                    requested_delta: req.delta,
                    remaining_eps: rem.epsilon,
                    remaining_delta: rem.delta,
                }));
            }
            report.result = json!({
                "within_cap": true,
                "sequential": sequential,
                "requested": req,
                "remaining": ledger.remaining(),
            });
        }
    }
    Ok(report)
}
