//! Assemble a benchmark suite programmatically, run every cell, and render
//! all four report formats. Per-cell JSON records land next to the reports,
//! so re-running the example reuses finished cells.

use vqopt::bench::{report, run_suite, summarize, OptimizerSpec, ReportKind, SuiteSpec};
use vqopt::circuits::{ErParams, TaskSpec};

fn main() -> vqopt::Result<()> {
    let out = std::env::temp_dir().join("vqopt_suite_demo");
    let suite = SuiteSpec {
        seed: 17,
        steps: 60,
        replicates: 3,
        tasks: vec![
            TaskSpec::RandomPqc { n_qubits: 3, layers: 2, seed: 1 },
            TaskSpec::QaoaMaxcut {
                graph: None,
                graph_file: None,
                er: Some(ErParams { vertices: 5, edge_prob: 0.6 }),
                p_layers: 1,
                seed: 2,
                label: None,
            },
        ],
        optimizers: vec![
            OptimizerSpec::Baseline { name: "gd".into(), lr: None, id: None },
            OptimizerSpec::Baseline { name: "adam".into(), lr: None, id: None },
            OptimizerSpec::Baseline { name: "qngd".into(), lr: None, id: None },
        ],
    };

    let records = run_suite(&suite, &out, &out)?;
    println!("ran {} cells\n", records.len());
    println!("{:<28} {:<10} {:>10} {:>10}", "task", "optimizer", "mean", "std");
    for row in summarize(&records) {
        println!(
            "{:<28} {:<10} {:>10.5} {:>10.5}",
            row.task_id,
            row.optimizer_id,
            row.mean.unwrap_or(f64::NAN),
            row.std.unwrap_or(f64::NAN)
        );
    }

    for (kind, name) in [
        (ReportKind::Csv, "results.csv"),
        (ReportKind::Json, "results.json"),
        (ReportKind::SvgCurves, "curves.svg"),
        (ReportKind::SvgBars, "bars.svg"),
    ] {
        let path = out.join(name);
        report(&records, kind, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
