//! Median time per IoU for every criterion, with the integral oracle at two
//! resolutions.
//!
//! cargo run --release --example benchmark

use sphere_iou::criteria::{CriterionId, ErpImageSpec};
use sphere_iou::eval::{bench, random_pairs, FovRange};

fn main() {
    let pairs = random_pairs(100, 0, FovRange::default());
    let grids = [ErpImageSpec::new(4096, 2048).unwrap(), ErpImageSpec::new(8192, 4096).unwrap()];
    let mut criteria = CriterionId::table_columns(grids[0]).to_vec();
    criteria.push(CriterionId::MonteCarlo { n_samples: 1_000_000, seed: 0 });
    let report = bench(&criteria, &pairs, &grids).unwrap();
    print!("{}", report.to_text());
}
