//! Heatmap splat radius: the three closed-form candidates, which of them
//! reproduce their IoU relation, and the radius finally used.
//!
//! cargo run --example radius_breakdown

use sphere_iou::detector::radius;

fn main() {
    println!("{:>5} {:>5} {:>4} {:>10} {:>10} {:>10} {:>9}", "alpha", "beta", "t", "gamma_a", "gamma_b", "gamma_c", "gamma");
    for (a, b) in [(0.2, 0.2), (0.5, 0.5), (1.0, 0.4), (1.4, 1.4), (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)] {
        for t in [0.5, 0.7, 1.0] {
            let r = radius(a, b, t);
            let mark = |g: f64, ok: bool| format!("{g:>9.5}{}", if ok { ' ' } else { '*' });
            println!(
                "{a:>5.2} {b:>5.2} {t:>4.1} {} {} {} {:>9.5}",
                mark(r.gamma_a, r.a_valid),
                mark(r.gamma_b, r.b_valid),
                mark(r.gamma_c, r.c_valid),
                r.gamma
            );
        }
    }
    println!("* = candidate rejected");
}
