//! Every IoU criterion on a few box pairs, at three ERP resolutions. The
//! integral column closes in on the exact value as the grid gets finer.
//!
//! cargo run --release --example criteria_table

use sphere_iou::criteria::{CriterionId, ErpImageSpec};
use sphere_iou::eval::{compare_criteria, random_pairs, FovRange};
use sphere_iou::geometry::SphericalRect;

fn main() {
    let mut pairs = vec![(
        SphericalRect::new(0.5, 1.2, 1.0, 0.7).unwrap(),
        SphericalRect::new(0.8, 1.0, 0.9, 0.9).unwrap(),
    )];
    pairs.extend(random_pairs(2, 3, FovRange { min: 0.5, max: 1.5 }));
    let res: Vec<ErpImageSpec> = [(2048, 1024), (4096, 2048), (8192, 4096)]
        .iter()
        .map(|&(w, h)| ErpImageSpec::new(w, h).unwrap())
        .collect();
    let table = compare_criteria(&pairs, &CriterionId::table_columns(res[0]), &res).unwrap();
    print!("{}", table.to_text());
}
