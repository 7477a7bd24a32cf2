//! End-to-end runs of the `sphiou` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sphiou(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphiou"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const GT: &str = r#"{"image_id":"a","class_id":0,"theta":1.0,"phi":1.2,"alpha":0.5,"beta":0.4}
{"image_id":"a","class_id":1,"theta":3.0,"phi":1.8,"alpha":0.6,"beta":0.3}
{"image_id":"b","class_id":0,"theta":5.0,"phi":0.9,"alpha":0.4,"beta":0.4}
"#;

fn perfect_dets() -> String {
    GT.lines()
        .enumerate()
        .map(|(i, l)| l.replace('}', &format!(",\"score\":0.{}}}", 9 - i)) + "\n")
        .collect()
}

fn json_ap(out: &str) -> (f64, f64, f64) {
    let v: serde_json::Value = serde_json::from_str(out).unwrap();
    (v["ap"].as_f64().unwrap(), v["ap50"].as_f64().unwrap(), v["ap75"].as_f64().unwrap())
}

#[test]
fn iou_prints_one_value_or_one_line_per_criterion() {
    let o = sphiou(&["iou", "--b1", "0,1.5708,0.5,0.5", "--b2", "0,1.5708,0.5,0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.0");

    let o = sphiou(&["iou", "--b1", "0,1.5708,0.5,0.5", "--b2", "3,1.5708,0.5,0.5"]);
    assert_eq!(stdout(&o).trim(), "0.0");

    let o = sphiou(&["iou", "--b1", "1,1.2,0.5,0.5", "--b2", "1.1,1.3,0.6,0.4", "--all"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    for label in ["Ours", "Rectangle", "Circle", "Polygon", "SphIoU", "Sph.Integral", "MonteCarlo"] {
        assert!(out.contains(label), "{label} missing from\n{out}");
    }
}

#[test]
fn iou_range_error_exits_2_naming_the_field() {
    let o = sphiou(&["iou", "--b1", "0,4,0.5,0.5", "--b2", "0,1,0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("b1") && err.contains("phi"), "{err}");
}

#[test]
fn degree_flag_matches_radians() {
    let rad = sphiou(&["iou", "--b1", "1,1.2,0.5,0.4", "--b2", "1.2,1.1,0.7,0.3"]);
    let d = |v: &[f64]| v.iter().map(|x| x.to_degrees().to_string()).collect::<Vec<_>>().join(",");
    let deg = sphiou(&[
        "--angle-unit",
        "degrees",
        "iou",
        "--b1",
        &d(&[1.0, 1.2, 0.5, 0.4]),
        "--b2",
        &d(&[1.2, 1.1, 0.7, 0.3]),
    ]);
    let (a, b): (f64, f64) = (stdout(&rad).trim().parse().unwrap(), stdout(&deg).trim().parse().unwrap());
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn compare_shapes() {
    let dir = TempDir::new().unwrap();
    let pairs = write(dir.path(), "pairs.jsonl", "{\"b1\":[1,1.2,0.5,0.5],\"b2\":[1,1.2,0.5,0.5]}\n");
    let o = sphiou(&["compare", "--pairs", &pairs, "--resolutions", "256x128,512x256", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    for r in rows {
        for v in r.split(',').skip(3) {
            assert!((v.parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "{r}");
        }
    }

    let o = sphiou(&["compare", "--random", "3", "--resolutions", "128x64,256x128,512x256", "--format", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 3 * 6);
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 6));

    let bad = write(dir.path(), "bad.jsonl", "{\"b1\":[1,1.2]}\n");
    assert_eq!(sphiou(&["compare", "--pairs", &bad]).status.code(), Some(2));
}

#[test]
fn eval_perfect_empty_and_mismatch() {
    let dir = TempDir::new().unwrap();
    let gt = write(dir.path(), "gt.jsonl", GT);
    let det = write(dir.path(), "det.jsonl", &perfect_dets());
    let empty = write(dir.path(), "empty.jsonl", "");

    let o = sphiou(&["eval", "--gt", &gt, "--det", &det, "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json_ap(&stdout(&o)), (1.0, 1.0, 1.0));

    let o = sphiou(&["eval", "--gt", &gt, "--det", &empty, "--format", "json"]);
    assert_eq!(json_ap(&stdout(&o)), (0.0, 0.0, 0.0));

    let stray = perfect_dets() + "{\"image_id\":\"a\",\"class_id\":5,\"theta\":2,\"phi\":1,\"alpha\":0.3,\"beta\":0.3,\"score\":0.5}\n";
    let stray = write(dir.path(), "stray.jsonl", &stray);
    assert_eq!(sphiou(&["eval", "--gt", &gt, "--det", &stray]).status.code(), Some(3));
    let o = sphiou(&["eval", "--gt", &gt, "--det", &stray, "--allow-class-mismatch"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let broken = write(dir.path(), "broken.jsonl", "{\"image_id\":\"a\",\"class_id\":0}\n");
    let o = sphiou(&["eval", "--gt", &gt, "--det", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(sphiou(&["eval", "--gt", "/nonexistent/gt", "--det", &det]).status.code(), Some(2));
}

#[test]
fn eval_shows_the_planar_bias_near_a_pole() {
    // near the pole a 1 rad azimuth shift keeps the ERP box identical but
    // halves the true overlap
    let dir = TempDir::new().unwrap();
    let gt = write(dir.path(), "gt.jsonl", "{\"image_id\":\"p\",\"class_id\":0,\"theta\":1.0,\"phi\":0.2,\"alpha\":0.6,\"beta\":0.6}\n");
    let det = write(
        dir.path(),
        "det.jsonl",
        "{\"image_id\":\"p\",\"class_id\":0,\"theta\":2.0,\"phi\":0.2,\"alpha\":0.6,\"beta\":0.6,\"score\":0.9}\n",
    );
    let ap = |crit: &str| json_ap(&stdout(&sphiou(&["eval", "--gt", &gt, "--det", &det, "--criterion", crit, "--format", "json"])));
    let (planar, unbiased) = (ap("planar"), ap("unbiased"));
    assert_eq!(planar.1, 1.0);
    assert_eq!(unbiased.1, 0.0);
}

#[test]
fn eval_degree_header_matches_radians() {
    let dir = TempDir::new().unwrap();
    let to_deg = |text: &str| -> String {
        let mut out = String::from("{\"angle_unit\":\"degrees\"}\n");
        for l in text.lines() {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            for k in ["theta", "phi", "alpha", "beta"] {
                v[k] = v[k].as_f64().unwrap().to_degrees().into();
            }
            out += &format!("{v}\n");
        }
        out
    };
    let dets = perfect_dets().replace("\"theta\":1.0", "\"theta\":1.05");
    let r = |g: &str, d: &str| {
        let gt = write(dir.path(), "g.jsonl", g);
        let det = write(dir.path(), "d.jsonl", d);
        json_ap(&stdout(&sphiou(&["eval", "--gt", &gt, "--det", &det, "--format", "json"])))
    };
    let (a, b) = (r(GT, &dets), r(&to_deg(GT), &to_deg(&dets)));
    assert!((a.0 - b.0).abs() < 1e-12 && a.1 == b.1 && a.2 == b.2);
}

#[test]
fn radius_flags_the_invalid_case_c() {
    let o = sphiou(&["radius", "--alpha", "1.5707963267948966", "--beta", "1.5707963267948966", "--t", "1.0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("gamma_c") && l.ends_with("invalid")), "{out}");
    let last: f64 = out.lines().last().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(last.abs() < 1e-9);
    assert_eq!(sphiou(&["radius", "--alpha", "0.5", "--beta", "0.5", "--t", "1.5"]).status.code(), Some(2));
}

#[test]
fn render_writes_svg_and_png_and_fails_on_bad_output() {
    let dir = TempDir::new().unwrap();
    let gt = write(dir.path(), "gt.jsonl", GT);
    let svg = dir.path().join("boxes.svg");
    let o = sphiou(&["render", "--gt", &gt, "--image-size", "512x256", "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("<polyline").count() >= 3);

    let png = dir.path().join("boxes.png");
    let o = sphiou(&["render", "--gt", &gt, "--image-size", "512x256", "--out", png.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(&fs::read(&png).unwrap()[1..4], b"PNG");

    let o = sphiou(&["render", "--gt", &gt, "--out", "/nonexistent/dir/x.svg"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn gt_then_decode_recovers_the_boxes() {
    let dir = TempDir::new().unwrap();
    let gt = write(dir.path(), "gt.jsonl", GT);
    let tensor = dir.path().join("a.sphm");
    let o = sphiou(&["gt", "--gt", &gt, "--image-id", "a", "--out", tensor.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(sphiou(&["gt", "--gt", &gt, "--out", tensor.to_str().unwrap()]).status.code(), Some(2));

    let o = sphiou(&["decode", "--tensor", tensor.to_str().unwrap(), "--image-id", "a", "--top-k", "2"]);
    assert!(o.status.success());
    let dets = sphere_iou::eval::parse_detections(&stdout(&o)).unwrap().records;
    let truth = sphere_iou::eval::parse_annotations(GT).unwrap();
    assert_eq!(dets.len(), 2);
    for (d, t) in dets.iter().zip(&truth.by_image["a"]) {
        assert_eq!(d.class_id, t.class_id);
        assert!(d.bbox.center().angle_to(t.bbox.center()) < 1e-9);
        assert_eq!((d.bbox.alpha(), d.bbox.beta()), (t.bbox.alpha(), t.bbox.beta()));
    }
}

#[test]
fn bench_reports_every_row() {
    let o = sphiou(&["bench", "--resolutions", "256x128", "--criteria", "unbiased,sphzone,integral", "--min-speedup", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("Ours") && out.contains("integral:256x128") && out.contains("PASS"), "{out}");
    assert_eq!(sphiou(&["bench", "--pairs", "5"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.txt");
    let o = sphiou(&["--output", out.to_str().unwrap(), "radius", "--alpha", "0.5", "--beta", "0.5"]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert!(fs::read_to_string(&out).unwrap().contains("gamma_a"));
}
