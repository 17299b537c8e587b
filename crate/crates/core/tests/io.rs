use spintomo::io::*;
use spintomo::random::{random_density_matrix, seeded};
use spintomo::tomography::tomogram;
use spintomo::*;

fn sample(tj: u32) -> (SymbolTable, SphereQuadrature) {
    let spin = Spin::from_twice(tj);
    let quad = SphereQuadrature::for_spin(spin);
    let rho = random_density_matrix(spin, &mut seeded(40 + u64::from(tj)));
    (tomogram(&rho, &quad).unwrap(), quad)
}

#[test]
fn json_table_round_trip_is_exact() {
    for tj in 0..=3 {
        let (t, q) = sample(tj);
        let mut buf = Vec::new();
        write_symbol_table_json(&t, &q, &mut buf).unwrap();
        let (back, q2) = read_symbol_table_json(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert_eq!(q2, q);
    }
}

#[test]
fn csv_table_round_trip_is_exact() {
    for tj in 0..=3 {
        let (t, q) = sample(tj);
        let mut buf = Vec::new();
        write_symbol_table_csv(&t, &q, &mut buf).unwrap();
        let (back, q2) = read_symbol_table(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert_eq!(q2, q);
    }
}

#[test]
fn csv_with_wrong_nodes_is_rejected() {
    let (t, q) = sample(1);
    let mut buf = Vec::new();
    write_symbol_table_csv(&t, &q, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut fields: Vec<String> = lines[3].split(',').map(str::to_owned).collect();
    fields[2] = "0.125".into();
    lines[3] = fields.join(",");
    let err = read_symbol_table_csv(lines.join("\n").as_bytes()).unwrap_err();
    assert!(matches!(err, Error::GridMismatch(_)), "{err}");
}

#[test]
fn density_matrix_round_trip_and_validation() {
    let rho = random_density_matrix(Spin::ONE, &mut seeded(41));
    let mut buf = Vec::new();
    write_density_matrix_json(&rho, &mut buf).unwrap();
    let back = read_density_matrix_json(buf.as_slice()).unwrap();
    assert_eq!(back.matrix(), rho.matrix());

    let mut file = DensityMatrixFile::from_matrix(Spin::ONE, rho.matrix());
    file.re[0] += 0.5;
    let text = serde_json::to_string(&file).unwrap();
    assert!(matches!(
        read_density_matrix_json(text.as_bytes()),
        Err(Error::TraceNotUnit { .. })
    ));
    file.basis = "ascending_m".into();
    let text = serde_json::to_string(&file).unwrap();
    assert!(matches!(
        read_density_matrix_json(text.as_bytes()),
        Err(Error::Format(_))
    ));
}
