//! Budget sweep of ezr and random over the synthetic suite.
use ezr::bench::{run_cells, Method, Prepared};
use ezr::evalstats::{group_records, ks_significant, mean_optimality, median, Evaluator};
use ezr::synth::{benchmark_suite, gen_sparse};

fn main() {
    let prepared: Vec<Prepared> = benchmark_suite(20, 1)
        .iter()
        .map(|s| {
            let data = gen_sparse(s).unwrap().data;
            let eval = Evaluator::new(&data).unwrap();
            Prepared { data, eval }
        })
        .collect();
    let recs = run_cells(&prepared, &[Method::Ezr, Method::Random], &[32, 64], 20, 0).unwrap();
    for ((m, b), v) in mean_optimality(&recs) {
        println!("{m:<8} {b:>4} {v:.3}");
    }
    let cells = group_records(&recs);
    let mut favour = 0;
    for (name, c) in &cells[&32] {
        let (e, r) = (&c["ezr"], &c["random"]);
        let ks = ks_significant(e, r, 0.05).unwrap();
        let win = ks.significant && median(e) > median(r);
        favour += win as usize;
        println!("{name:<32} ezr {:.3} random {:.3} ks {:.2} {}", median(e), median(r), ks.statistic, if win { "*" } else { "" });
    }
    println!("significant in favour: {favour}/20");
}
