//! Driving an external MILP solver through LP files on disk.
//!
//! The backend shells out with a command template whose arguments may hold
//! `{lp}`, `{sol}` and `{limit}` placeholders. To stay runnable anywhere,
//! the "external solver" here is this very example re-invoked with `--shim`;
//! point the template at your real solver in production (or at `zf milp`).

use std::env;

use zeroforcing::gen::gen_cycle;
use zeroforcing::milp::{parse_lp, ExternalBackend, InternalBackend, MilpBackend, MilpStatus};
use zeroforcing::models::{solve_fort_cover, ConnectivityMode, FortSource};

fn main() {
    let args: Vec<String> = env::args().collect();
    if args.len() == 4 && args[1] == "--shim" {
        shim(&args[2], &args[3]);
        return;
    }

    let me = env::current_exe().unwrap().to_string_lossy().into_owned();
    let backend =
        ExternalBackend::new(vec![me, "--shim".into(), "{lp}".into(), "{sol}".into()]).unwrap();

    let g = gen_cycle(8).unwrap();
    let out = solve_fort_cover(&g, FortSource::default(), ConnectivityMode::None, &backend, None)
        .unwrap();
    println!(
        "C8 through the external backend: Z = {}, witness {:?}",
        out.best_value.unwrap(),
        out.incumbent.unwrap().to_vec()
    );
}

/// The solver side of the contract: read an LP file, write a solution file
/// (status line, then `name value` lines).
fn shim(lp: &str, sol: &str) {
    let model = parse_lp(&std::fs::read_to_string(lp).unwrap()).unwrap();
    let out = InternalBackend.solve(&model, None, None).unwrap();
    let mut text = String::from(match out.status {
        MilpStatus::Optimal => "optimal\n",
        MilpStatus::Timeout => "timeout\n",
        MilpStatus::Infeasible => "infeasible\n",
    });
    if let Some(values) = &out.values {
        for (var, value) in model.vars().iter().zip(values) {
            text.push_str(&format!("{} {}\n", var.name, value));
        }
    }
    std::fs::write(sol, text).unwrap();
}
