//! Command implementations: resolve parameters, run the library, emit.

use ammsim_core::{
    arb_condition, compare_strategies, numeric_argmax, optimal_fee, optimal_flashloan,
    optimal_profit, run_single, simulate_walk, summarize, threshold, ArbParams, PathConfig,
    RunRecord, SimConfig, WalkConfig,
};
use serde_json::Value;

use crate::config::FileConfig;
use crate::output::{
    fmt_f64, json_document, json_f64, with_writer, write_csv, write_json, SpecPairs,
};
use crate::{
    ArbQuoteArgs, CliError, FeeSweepArgs, FormatArg, ModeArg, SimulateArgs, WalkArgs,
    WalkCompareArgs,
};

impl ModeArg {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeArg::Multiplicative => "multiplicative",
            ModeArg::Additive => "additive",
        }
    }
}

struct Quote {
    params: ArbParams,
    threshold: f64,
    triggered: bool,
    flashloan: f64,
    profit: f64,
    revenue: f64,
    oracle_flashloan: f64,
    oracle_profit: f64,
    numeric_sizing: bool,
}

const QUOTE_HEADER: &str = "alpha,fee,flashloan_fee,price_impact,txn_cost,threshold,\
triggered,flashloan,profit,revenue,oracle_flashloan,oracle_profit";

fn quote_rows(q: &Quote) -> Vec<Vec<String>> {
    vec![vec![
        fmt_f64(q.params.alpha),
        fmt_f64(q.params.fee),
        fmt_f64(q.params.flashloan_fee),
        fmt_f64(q.params.price_impact),
        fmt_f64(q.params.txn_cost),
        fmt_f64(q.threshold),
        q.triggered.to_string(),
        fmt_f64(q.flashloan),
        fmt_f64(q.profit),
        fmt_f64(q.revenue),
        fmt_f64(q.oracle_flashloan),
        fmt_f64(q.oracle_profit),
    ]]
}

fn quote_text(q: &Quote) -> String {
    let mut lines = Vec::new();
    let mut push = |label: &str, value: String| lines.push(format!("{label:<22} {value}"));
    push("alpha", q.params.alpha.to_string());
    push("fee", q.params.fee.to_string());
    push("flashloan-fee", q.params.flashloan_fee.to_string());
    push("price-impact", q.params.price_impact.to_string());
    push("txn-cost", q.params.txn_cost.to_string());
    push("threshold", q.threshold.to_string());
    if q.triggered {
        push("verdict", "arbitrage".to_string());
        push(
            "sizing",
            if q.numeric_sizing {
                "numeric (txn-cost > 0)".to_string()
            } else {
                "closed form".to_string()
            },
        );
        push("flashloan", q.flashloan.to_string());
        push("profit", q.profit.to_string());
        push("revenue", q.revenue.to_string());
        push("oracle flashloan", q.oracle_flashloan.to_string());
        push("oracle profit", q.oracle_profit.to_string());
        if !q.numeric_sizing {
            let rel = |a: f64, b: f64| ((a - b) / a).abs();
            push(
                "rel delta flashloan",
                format!("{:.2e}", rel(q.flashloan, q.oracle_flashloan)),
            );
            push(
                "rel delta profit",
                format!("{:.2e}", rel(q.profit, q.oracle_profit)),
            );
        }
    } else {
        push("verdict", "below threshold (no arbitrage)".to_string());
    }
    let delta_alpha = q.params.alpha - 1.0;
    if delta_alpha > 0.0 {
        if let Ok((fee_opt, retention)) = optimal_fee(delta_alpha) {
            push("small-spread fee*", fee_opt.to_string());
            push("retention at fee*", format!("{retention:.4}"));
        }
    }
    lines.join("\n")
}

pub fn arb_quote(args: ArbQuoteArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let params = ArbParams {
        alpha: file.resolve_required(args.alpha, "alpha")?,
        fee: file.resolve(args.fee, "fee", 0.0)?,
        flashloan_fee: file.resolve(args.flashloan_fee, "flashloan-fee", 0.0)?,
        price_impact: file.resolve_required(args.price_impact, "price-impact")?,
        txn_cost: file.resolve(args.txn_cost, "txn-cost", 0.0)?,
    };
    params.validate()?;
    let format = file.resolve_optional(args.common.format, "format")?;

    let bound = threshold(params.fee, params.flashloan_fee);
    let feasible = arb_condition(params.alpha, params.fee, params.flashloan_fee);
    let (oracle_flashloan, oracle_profit) = numeric_argmax(&params);
    let quote = if !feasible {
        Quote {
            params,
            threshold: bound,
            triggered: false,
            flashloan: 0.0,
            profit: 0.0,
            revenue: 0.0,
            oracle_flashloan,
            oracle_profit,
            numeric_sizing: params.txn_cost > 0.0,
        }
    } else if params.txn_cost == 0.0 {
        let flashloan = optimal_flashloan(&params)?;
        Quote {
            params,
            threshold: bound,
            triggered: true,
            flashloan,
            profit: optimal_profit(&params)?,
            revenue: flashloan * params.fee,
            oracle_flashloan,
            oracle_profit,
            numeric_sizing: false,
        }
    } else {
        let triggered = oracle_flashloan > 0.0 && oracle_profit > 0.0;
        Quote {
            params,
            threshold: bound,
            triggered,
            flashloan: if triggered { oracle_flashloan } else { 0.0 },
            profit: if triggered { oracle_profit } else { 0.0 },
            revenue: if triggered {
                oracle_flashloan * params.fee
            } else {
                0.0
            },
            oracle_flashloan,
            oracle_profit,
            numeric_sizing: true,
        }
    };

    let mut pairs: SpecPairs = vec![
        ("command", "arb-quote".to_string()),
        ("alpha", fmt_f64(params.alpha)),
        ("fee", fmt_f64(params.fee)),
        ("flashloan-fee", fmt_f64(params.flashloan_fee)),
        ("price-impact", fmt_f64(params.price_impact)),
        ("txn-cost", fmt_f64(params.txn_cost)),
    ];
    if let Some(format) = format {
        pairs.push(("format", format.as_str().to_string()));
    }

    with_writer(args.common.out.as_deref(), |w| match format {
        None => writeln!(w, "{}", quote_text(&quote)),
        Some(FormatArg::Csv) => write_csv(w, &pairs, QUOTE_HEADER, &quote_rows(&quote)),
        Some(FormatArg::Json) => write_json(
            w,
            &json_document(
                &pairs,
                vec![
                    ("threshold", json_f64(quote.threshold)),
                    ("triggered", Value::Bool(quote.triggered)),
                    ("flashloan", json_f64(quote.flashloan)),
                    ("profit", json_f64(quote.profit)),
                    ("revenue", json_f64(quote.revenue)),
                    ("oracle_flashloan", json_f64(quote.oracle_flashloan)),
                    ("oracle_profit", json_f64(quote.oracle_profit)),
                ],
            ),
        ),
    })?;

    if !quote.triggered {
        return Err(CliError::NoArbitrage(if feasible {
            format!(
                "no profitable trade: txn cost {} exceeds the gross arbitrage gain",
                params.txn_cost
            )
        } else {
            format!(
                "no arbitrage: alpha {} does not exceed threshold {}",
                params.alpha, bound
            )
        }));
    }
    Ok(())
}

const SIMULATE_HEADER: &str = "step,p_cex,spot,reserve_a,reserve_b,triggered,direction,\
flashloan,arb_profit,fee_revenue,cum_fee_revenue";

fn simulate_rows(records: &[RunRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.step.to_string(),
                fmt_f64(r.p_cex),
                fmt_f64(r.spot),
                fmt_f64(r.reserve_a),
                fmt_f64(r.reserve_b),
                r.triggered.to_string(),
                r.direction.map_or("", |d| d.as_str()).to_string(),
                fmt_f64(r.flashloan),
                fmt_f64(r.arb_profit),
                fmt_f64(r.fee_revenue),
                fmt_f64(r.cum_fee_revenue),
            ]
        })
        .collect()
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let steps = file.resolve(args.steps, "steps", 100usize)?;
    let sigma = file.resolve(args.sigma, "sigma", 0.01)?;
    let mu = file.resolve(args.mu, "mu", 0.0)?;
    let p0 = file.resolve(args.p0, "p0", 1.0)?;
    let liquidity = file.resolve(args.liquidity, "liquidity", 15000.0)?;
    let fee = file.resolve(args.fee, "fee", 0.005)?;
    let flashloan_fee = file.resolve(args.flashloan_fee, "flashloan-fee", 0.0)?;
    let txn_cost = file.resolve(args.txn_cost, "txn-cost", 0.0)?;
    let mode = file.resolve(args.mode, "mode", ModeArg::Multiplicative)?;
    let seed = file.resolve(args.common.seed, "seed", 0u64)?;
    let format = file.resolve(args.common.format, "format", FormatArg::Csv)?;

    let cfg = SimConfig {
        pool_price0: p0,
        liquidity,
        fee,
        flashloan_fee,
        txn_cost,
        path: PathConfig {
            n_steps: steps,
            sigma,
            mu,
            p0,
            mode: mode.to_mode(),
            seed,
        },
    };
    let records = run_single(&cfg)?;
    let summary = summarize(&records)?;

    let pairs: SpecPairs = vec![
        ("command", "simulate".to_string()),
        ("steps", steps.to_string()),
        ("sigma", fmt_f64(sigma)),
        ("mu", fmt_f64(mu)),
        ("p0", fmt_f64(p0)),
        ("liquidity", fmt_f64(liquidity)),
        ("fee", fmt_f64(fee)),
        ("flashloan-fee", fmt_f64(flashloan_fee)),
        ("txn-cost", fmt_f64(txn_cost)),
        ("mode", mode.as_str().to_string()),
        ("seed", seed.to_string()),
        ("format", format.as_str().to_string()),
    ];

    with_writer(args.common.out.as_deref(), |w| match format {
        FormatArg::Csv => write_csv(w, &pairs, SIMULATE_HEADER, &simulate_rows(&records)),
        FormatArg::Json => write_json(
            w,
            &json_document(
                &pairs,
                vec![
                    ("records", serde_json::to_value(&records).expect("records")),
                    ("summary", serde_json::to_value(summary).expect("summary")),
                ],
            ),
        ),
    })
}

const SWEEP_HEADER: &str = "fee,mean_revenue,stderr,mean_triggers,replicas";
const DEFAULT_SWEEP_FEES: [f64; 6] = [1e-4, 2.5e-4, 5e-4, 1e-3, 2e-3, 4e-3];

pub fn fee_sweep(args: FeeSweepArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let steps = file.resolve(args.steps, "steps", 1000usize)?;
    let sigma = file.resolve(args.sigma, "sigma", 0.001)?;
    let mu = file.resolve(args.mu, "mu", 0.0)?;
    let p0 = file.resolve(args.p0, "p0", 1.0)?;
    let liquidity = file.resolve(args.liquidity, "liquidity", 15000.0)?;
    let fees = file.resolve_list(args.fees, "fees", &DEFAULT_SWEEP_FEES)?;
    let replicas = file.resolve(args.replicas, "replicas", 1000usize)?;
    let flashloan_fee = file.resolve(args.flashloan_fee, "flashloan-fee", 0.0)?;
    let txn_cost = file.resolve(args.txn_cost, "txn-cost", 0.0)?;
    let mode = file.resolve(args.mode, "mode", ModeArg::Multiplicative)?;
    let seed = file.resolve(args.common.seed, "seed", 0u64)?;
    let format = file.resolve(args.common.format, "format", FormatArg::Csv)?;

    // `fee` here is a placeholder; the sweep substitutes each entry of `fees`.
    let cfg = SimConfig {
        pool_price0: p0,
        liquidity,
        fee: 0.0,
        flashloan_fee,
        txn_cost,
        path: PathConfig {
            n_steps: steps,
            sigma,
            mu,
            p0,
            mode: mode.to_mode(),
            seed,
        },
    };
    let stats = ammsim_core::fee_sweep(&cfg, &fees, replicas, seed)?;

    let fees_str = fees.iter().map(|&f| fmt_f64(f)).collect::<Vec<_>>().join(",");
    let pairs: SpecPairs = vec![
        ("command", "fee-sweep".to_string()),
        ("steps", steps.to_string()),
        ("sigma", fmt_f64(sigma)),
        ("mu", fmt_f64(mu)),
        ("p0", fmt_f64(p0)),
        ("liquidity", fmt_f64(liquidity)),
        ("fees", fees_str),
        ("replicas", replicas.to_string()),
        ("flashloan-fee", fmt_f64(flashloan_fee)),
        ("txn-cost", fmt_f64(txn_cost)),
        ("mode", mode.as_str().to_string()),
        ("seed", seed.to_string()),
        ("format", format.as_str().to_string()),
    ];

    let rows: Vec<Vec<String>> = stats
        .per_fee
        .iter()
        .map(|s| {
            vec![
                fmt_f64(s.fee),
                fmt_f64(s.mean_revenue),
                fmt_f64(s.stderr),
                fmt_f64(s.mean_triggers),
                s.replicas.to_string(),
            ]
        })
        .collect();

    with_writer(args.common.out.as_deref(), |w| match format {
        FormatArg::Csv => write_csv(w, &pairs, SWEEP_HEADER, &rows),
        FormatArg::Json => write_json(
            w,
            &json_document(
                &pairs,
                vec![(
                    "per_fee",
                    serde_json::to_value(&stats.per_fee).expect("stats"),
                )],
            ),
        ),
    })
}

const WALK_HEADER: &str = "step,level,triggered,cum_reward";

pub fn walk(args: WalkArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let steps = file.resolve(args.steps, "steps", 10000usize)?;
    let k = file.resolve(args.k, "k", 1u32)?;
    let p_up = file.resolve(args.p_up, "p-up", 0.5)?;
    let seed = file.resolve(args.common.seed, "seed", 0u64)?;
    let format = file.resolve(args.common.format, "format", FormatArg::Csv)?;

    let cfg = WalkConfig {
        p_up,
        n_steps: steps,
        threshold_k: k,
        seed,
    };
    let result = simulate_walk(&cfg)?;

    let pairs: SpecPairs = vec![
        ("command", "walk".to_string()),
        ("steps", steps.to_string()),
        ("k", k.to_string()),
        ("p-up", fmt_f64(p_up)),
        ("seed", seed.to_string()),
        ("format", format.as_str().to_string()),
    ];

    let reward = f64::from(k) * f64::from(k);
    let mut triggers = result.trigger_steps.iter().copied().peekable();
    let mut cum = 0.0;
    let rows: Vec<Vec<String>> = result
        .levels
        .iter()
        .enumerate()
        .map(|(t, &level)| {
            let fired = triggers.peek() == Some(&t);
            if fired {
                triggers.next();
                cum += reward;
            }
            vec![
                t.to_string(),
                level.to_string(),
                fired.to_string(),
                fmt_f64(cum),
            ]
        })
        .collect();

    with_writer(args.common.out.as_deref(), |w| match format {
        FormatArg::Csv => write_csv(w, &pairs, WALK_HEADER, &rows),
        FormatArg::Json => write_json(
            w,
            &json_document(
                &pairs,
                vec![
                    ("cumulative_reward", json_f64(result.cumulative_reward)),
                    (
                        "trigger_steps",
                        serde_json::to_value(&result.trigger_steps).expect("steps"),
                    ),
                    (
                        "inter_trigger_gaps",
                        serde_json::to_value(&result.inter_trigger_gaps).expect("gaps"),
                    ),
                    (
                        "levels",
                        serde_json::to_value(&result.levels).expect("levels"),
                    ),
                ],
            ),
        ),
    })
}

const COMPARE_HEADER: &str = "k,mean_reward,stderr,replicas";

pub fn walk_compare(args: WalkCompareArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let steps = file.resolve(args.steps, "steps", 10000usize)?;
    let ks = file.resolve_list(args.k, "k", &[1u32, 2])?;
    let replicas = file.resolve(args.replicas, "replicas", 1000usize)?;
    let seed = file.resolve(args.common.seed, "seed", 0u64)?;
    let format = file.resolve(args.common.format, "format", FormatArg::Csv)?;

    let stats = compare_strategies(steps, replicas, &ks, seed)?;

    let ks_str = ks.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let pairs: SpecPairs = vec![
        ("command", "walk-compare".to_string()),
        ("steps", steps.to_string()),
        ("k", ks_str),
        ("replicas", replicas.to_string()),
        ("seed", seed.to_string()),
        ("format", format.as_str().to_string()),
    ];

    let rows: Vec<Vec<String>> = stats
        .iter()
        .map(|s| {
            vec![
                s.threshold_k.to_string(),
                fmt_f64(s.mean_reward),
                fmt_f64(s.stderr),
                s.replicas.to_string(),
            ]
        })
        .collect();

    with_writer(args.common.out.as_deref(), |w| match format {
        FormatArg::Csv => write_csv(w, &pairs, COMPARE_HEADER, &rows),
        FormatArg::Json => write_json(
            w,
            &json_document(
                &pairs,
                vec![("per_k", serde_json::to_value(&stats).expect("stats"))],
            ),
        ),
    })
}
