//! Image spans and how plane-to-plane degrees propagate.

use orthopair::{spanlab, workbench, MPoly};

fn main() {
    let z = |k| MPoly::var(3, k);
    let conic = vec![z(0).pow(2), &z(0) * &z(1), z(1).pow(2), z(2).pow(2)];
    println!("conic map sends lines to {}-planes", spanlab::generic_plane_map_degree(&conic, 1, 0).unwrap());

    let linear = vec![z(0), &z(0) + &z(1), z(2), MPoly::zero(3)];
    let report = spanlab::check_plane_propagation(&linear, 1, 0).unwrap();
    for row in &report.rows {
        println!("  {}-planes -> measured {}, bound {}", row.plane_dim, row.measured, row.bound);
    }

    let pair = workbench::remark_pair();
    match spanlab::check_plane_propagation(pair.f1(), 1, 0) {
        Ok(r) => println!("boundary pair propagates: {}", r.passed),
        Err(e) => println!("boundary pair: {e}"),
    }
    for (name, d) in ["f1", "f2"].iter().zip(spanlab::is_degenerate_pair(&pair)) {
        println!("{name}: span dim {}, degenerate {}", d.span_dim, d.degenerate);
    }
}
