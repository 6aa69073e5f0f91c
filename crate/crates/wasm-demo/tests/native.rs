use aldc_wasm::{hadamard_failure_curve, overflow_bound_curve, paldc_locality};

#[test]
fn hadamard_curve_shape() {
    let rows = hadamard_failure_curve(10, 3, 0.1, 5, 200, 1).unwrap();
    assert_eq!(rows.len(), 20);
    assert_eq!(&rows[..4], &[0.0, 0.0, 0.0, 0.0]);
    for row in rows.chunks(4) {
        assert!(row[1] <= 1.0 && row[2] <= 1.0);
    }
}

#[test]
fn overflow_curve_marks_domain() {
    let rows = overflow_bound_curve(2000, 0.1, 0.1, 3);
    assert_eq!(rows.len(), 9);
    assert!((rows[4] - 9.8e-4).abs() < 1e-5, "{rows:?}");
    assert!(rows[7].is_nan());
}

#[test]
fn locality_within_bound() {
    let v = paldc_locality(2048, 256, 512, 100, 355, 0.01, 3).unwrap();
    assert_eq!(v[0], 1024.0);
    assert!(v[2] <= v[3]);
    assert_eq!(v[4], 1.0);
    assert_eq!(v[5], 2.0);
}
