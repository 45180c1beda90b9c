//! Pick a candidate privately with the exponential mechanism.
use dpkit::mechanisms::{exponential_mechanism, selection_probabilities, PrivacyBudget};
use dpkit::RandomSource;

fn main() -> dpkit::Result<()> {
    let names = ["north", "south", "east", "west"];
    // votes per option; one person changes a score by at most 1
    let votes = [12.0, 15.0, 9.0, 14.0];
    let budget = PrivacyBudget::pure(1.0)?;

    let probs = selection_probabilities(&votes, budget.epsilon(), 1.0, None)?;
    for (n, p) in names.iter().zip(&probs) {
        println!("{n:>6}: {p:.3}");
    }

    let mut rng = RandomSource::from_seed(3);
    let mut wins = [0usize; 4];
    for _ in 0..10_000 {
        wins[exponential_mechanism(&votes, &budget, 1.0, None, &mut rng)?] += 1;
    }
    println!("observed frequencies: {:?}", wins.map(|w| w as f64 / 10_000.0));
    Ok(())
}
