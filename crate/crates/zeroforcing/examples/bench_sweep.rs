//! A miniature benchmark sweep: config text in, CSV rows and a table out.

use zeroforcing::bench::{run_bench, render_summary, summarize, BenchConfig};

fn main() {
    let config = BenchConfig::from_toml(
        r#"
        seed = 3
        instances = 3
        time_limit_s = 30.0
        methods = ["wavefront", "fort-cover", "infection"]

        [[family]]
        name = "cubic"
        sizes = [8, 10]

        [[family]]
        name = "star"
        sizes = [11, 21]
        "#,
    )
    .unwrap();

    let records = run_bench(&config, 2).unwrap();

    // Methods must agree wherever they both proved an optimum.
    for window in records.chunks(config.methods.len()) {
        let values: Vec<Option<usize>> = window.iter().map(|r| r.value).collect();
        let proven: Vec<usize> = values.iter().flatten().copied().collect();
        assert!(
            proven.windows(2).all(|p| p[0] == p[1]),
            "{} disagrees: {values:?}",
            window[0].instance
        );
    }

    print!("{}", render_summary(&summarize(&records)));
}
