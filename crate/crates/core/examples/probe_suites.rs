use cqms_core::verify::{run_suite, Suite};

fn main() {
    for s in [Suite::Channels, Suite::Stinespring, Suite::Si, Suite::Covariance, Suite::Qms, Suite::Poincare] {
        let t0 = std::time::Instant::now();
        let report = run_suite(s, 42);
        println!("{}: cases={} failures={} elapsed={:.2?}", report.suite, report.cases, report.failures, t0.elapsed());
        for c in report.results.iter().filter(|c| !c.pass) {
            println!("  FAIL {} residual={:.3e} thr={:?}", c.id, c.residual, c.threshold);
        }
    }
}
