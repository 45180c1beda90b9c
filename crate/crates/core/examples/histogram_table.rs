//! Private histogram and contingency table.
use dpkit::stats::{histogram_dp, table_dp, Breaks, Factor, HistogramSpec, StatRequest};
use dpkit::RandomSource;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(5);
    let scores: Vec<f64> = (0..1000).map(|_| 50.0 + 15.0 * rng.standard_normal()).collect();
    let req = StatRequest::laplace(1.0)?;

    let spec = HistogramSpec {
        breaks: Breaks::Count { bins: 5, lower: 0.0, upper: 100.0 },
        normalize: false,
        allow_negative: false,
    };
    let h = &histogram_dp(&scores, &spec, &req, &mut rng)?[0];
    for (w, c) in h.value.edges.windows(2).zip(&h.value.values) {
        println!("({:>5.1}, {:>5.1}]  {:8.1}", w[0], w[1], c);
    }

    let levels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let sex: Vec<String> = (0..200).map(|i| ["f", "m"][i % 2].to_string()).collect();
    let smoker: Vec<String> = (0..200).map(|i| ["yes", "no", "no"][i % 3].to_string()).collect();
    let t = &table_dp(
        &[Factor::new(sex, levels(&["f", "m"]))?, Factor::new(smoker, levels(&["yes", "no"]))?],
        &req,
        false,
        &mut rng,
    )?[0];
    for i in 0..2 {
        println!("{}: yes {:.1}  no {:.1}", t.value.levels[0][i], t.value.get(&[i, 0]), t.value.get(&[i, 1]));
    }
    Ok(())
}
