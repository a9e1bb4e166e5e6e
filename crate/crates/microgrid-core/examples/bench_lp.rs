use microgrid_core::dispatch::{build_model, optimize_dispatch, DispatchOptions};
use microgrid_core::io::{generate_synthetic, ScenarioProfile, ScenarioShape};

fn main() {
    let scenario = generate_synthetic(7, &ScenarioShape::default(), ScenarioProfile::Weekday);
    let model = build_model(&scenario, &DispatchOptions::default()).unwrap();
    println!(
        "vars={} rows={}",
        model.problem.variable_count(),
        model.problem.constraints().len()
    );
    let t0 = std::time::Instant::now();
    let outcome = optimize_dispatch(&scenario, &DispatchOptions::default()).unwrap();
    println!(
        "solved in {:.2}s iters={} status={} obj={:.2}",
        t0.elapsed().as_secs_f64(),
        outcome.stats.simplex_iterations,
        outcome.stats.status,
        outcome.stats.objective_value
    );
}
