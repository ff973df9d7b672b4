//! Regenerate the plot-ready comparison surfaces (variance curves,
//! bias ratio, MINMSE and optimal-k contours, and their quantile
//! variants) as CSV grids.
//!
//! ```bash
//! cargo run --release --example comparison_grids
//! ```

use std::fs::File;
use std::io::BufWriter;

use evt_pwm::asymptotics::{grid_eval, write_grid_csv, GridMetric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::temp_dir().join("evt-pwm-grids");
    std::fs::create_dir_all(&out_dir)?;

    // the variance curves depend on gamma only; one rho row suffices
    let curves = [
        (GridMetric::VarBm, (-1.0, 0.45), (-0.5, -0.5)),
        (GridMetric::VarPot, (-1.0, 0.45), (-0.5, -0.5)),
        (GridMetric::QuantVarBm, (-1.0, 0.45), (-0.5, -0.5)),
        (GridMetric::QuantVarPot, (-1.0, 0.45), (-0.5, -0.5)),
    ];
    for (metric, gr, rr) in curves {
        let table = grid_eval(metric, gr, rr, (0.01, 0.02))?;
        let path = out_dir.join(format!("{}.csv", metric.name()));
        write_grid_csv(&table, &mut BufWriter::new(File::create(&path)?))?;
        println!("wrote {} ({} cells)", path.display(), table.cells.len());
    }

    // full (gamma, rho) contour surfaces
    let contours = [
        GridMetric::BiasRatio,
        GridMetric::MinmseRatio,
        GridMetric::K0Ratio,
        GridMetric::QuantBiasBm,
        GridMetric::QuantBiasPot,
        GridMetric::QuantMinmseRatio,
        GridMetric::QuantK0Ratio,
    ];
    for metric in contours {
        let table = grid_eval(metric, (-1.0, 0.45), (-1.0, 0.0), (0.01, 0.02))?;
        let path = out_dir.join(format!("{}.csv", metric.name()));
        write_grid_csv(&table, &mut BufWriter::new(File::create(&path)?))?;
        println!("wrote {} ({} cells)", path.display(), table.cells.len());
    }

    println!("\nplot-ready grids in {}", out_dir.display());
    Ok(())
}
