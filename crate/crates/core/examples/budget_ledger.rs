//! Track spending across several releases.
use dpkit::accountant::{BudgetLedger, Totals};
use dpkit::stats::{mean_dp, Bounds, StatRequest};
use dpkit::RandomSource;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("dpkit-ledger-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("ledger.jsonl");
    let _ = std::fs::remove_file(&path);

    let mut ledger = BudgetLedger::load(&path)?;
    ledger.set_cap(Some(Totals { epsilon: 1.0, delta: 0.0 }));
    let mut rng = RandomSource::from_seed(1);
    let x: Vec<f64> = (0..100).map(|_| rng.uniform()).collect();
    let unit = Bounds::new(0.0, 1.0)?;

    for eps in [0.4, 0.4, 0.4] {
        match ledger.record("mean", eps, 0.0, None) {
            Ok(_) => {
                let r = &mean_dp(&x, unit, &StatRequest::laplace(eps)?, &mut rng)?[0];
                println!("released mean {:.3} at eps {eps}", r.value);
            }
            Err(e) => println!("refused: {e}"),
        }
    }
    ledger.append_to(&path, 0)?;
    println!("spent {:?}, remaining {:?}", ledger.sequential_total(), ledger.remaining());
    Ok(())
}
