use crewpair::ga::*;
use crewpair::oracle::*;
use crewpair::network::*;
fn main() {
    let a: Vec<String> = std::env::args().collect();
    let seed: u64 = a[1].parse().unwrap();
    let secs: f64 = a[2].parse().unwrap();
    let inst = generate_instance(&SyntheticSpec::new(50, 6, 1, 2)).unwrap();
    let all = enumerate_pairings(&inst, &ConnectionGraph::for_instance(&inst), Some(1)).unwrap();
    let opt = solve_exact(&all, 25000).unwrap().objective_cents;
    let cfg = GaConfig { termination: Termination::Seconds(secs), seed: Seed(seed), ..GaConfig::with_variant(Variant::GA4) };
    let r = run_with_workers(&all, &cfg, Some(1)).unwrap();
    for t in [1.0, 3.0, 6.0, 15.0, 30.0, 60.0] {
        if let Some(p) = r.trace_at(t) { println!("seed {seed} t={t} gen={} gap={:.2}%", p.generation, (p.best_cost_cents - opt) as f64 / opt as f64 * 100.0); }
    }
}
