use repeval_core::curve::{estimate_curve, EvalPlan, LossDataCurve};
use repeval_core::data::{gen_gaussian_task, load_dataset, save_dataset};
use repeval_core::measures::{esc_from_curve, sdl_from_curve, va_at};
use repeval_core::report::{curve_to_csv, plot_svg, ComparisonTable};
use repeval_core::{DatasetFormat, LearningAlgorithm, ProbeSpec, RandomStream};

#[test]
fn dataset_file_to_report() {
    let dir = tempfile::tempdir().unwrap();
    let ds = gen_gaussian_task(3, 1.0, 3000, &RandomStream::new(1)).unwrap();
    let bin = dir.path().join("g.rpev");
    let csv = dir.path().join("g.csv");
    save_dataset(&ds, &bin, DatasetFormat::Binary).unwrap();
    save_dataset(&ds, &csv, DatasetFormat::Csv).unwrap();
    let from_bin = load_dataset(&bin, DatasetFormat::Binary).unwrap();
    assert_eq!(from_bin, ds);
    let from_csv = load_dataset(&csv, DatasetFormat::Csv).unwrap();
    assert_eq!(from_csv.features(), ds.features());
    assert_eq!(from_csv.labels(), ds.labels());

    let mut spec = ProbeSpec::linear();
    spec.steps = 2000;
    spec.learning_rate = 1e-2;
    let plan = EvalPlan {
        replicates: 3,
        master_seed: 4,
        ..EvalPlan::with_grid(vec![4, 32, 256, 2000])
    };
    let curve = estimate_curve(&LearningAlgorithm::Probe(spec), &from_bin, &plan).unwrap();
    let means = curve.means();
    assert!(means[3] < means[0], "{means:?}");
    let oracle = ds.oracle_loss().unwrap();
    assert!((means[3] - oracle).abs() < 0.05, "{} vs {oracle}", means[3]);

    let reread = LossDataCurve::from_json(&curve.to_json()).unwrap();
    assert_eq!(reread, curve);

    let mut table = ComparisonTable::new(["gaussian"]);
    table
        .insert("gaussian", va_at(&curve, 2000).unwrap())
        .unwrap();
    table
        .insert("gaussian", sdl_from_curve(&curve, 0.2).unwrap())
        .unwrap();
    table
        .insert("gaussian", esc_from_curve(&curve, 0.2).unwrap())
        .unwrap();
    let md = table.to_markdown().unwrap();
    assert_eq!(md.lines().count(), 5);

    let svg = plot_svg(std::slice::from_ref(&curve), Some(0.2)).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(curve_to_csv(&curve).lines().count(), 5);
}

#[test]
fn curve_reproducible_from_seed() {
    let ds = gen_gaussian_task(2, 1.0, 600, &RandomStream::new(3)).unwrap();
    let mut spec = ProbeSpec::mlp2(8);
    spec.steps = 50;
    let plan = EvalPlan {
        replicates: 2,
        master_seed: 8,
        ..EvalPlan::with_grid(vec![10, 100])
    };
    let alg = LearningAlgorithm::Probe(spec);
    let a = estimate_curve(&alg, &ds, &plan).unwrap();
    let b = estimate_curve(&alg, &ds, &plan).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let other = estimate_curve(
        &alg,
        &ds,
        &EvalPlan {
            master_seed: 9,
            ..plan
        },
    )
    .unwrap();
    assert_ne!(a.means(), other.means());
}
