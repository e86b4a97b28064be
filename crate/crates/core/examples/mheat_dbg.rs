use zetamass_core::mheat::{mheat_eval, MHeatParams};

fn main() {
    let p = MHeatParams::new(2, 3, 1.0).unwrap();
    let reference = [
        (0.5, 1.504778037978962e-02),
        (1.5, 1.167521575727765e-02),
        (3.0, 4.406927560940481e-03),
        (4.0, 1.040072843047874e-03),
        (5.0, -3.605900945126241e-04),
        (6.0, -4.570987990253864e-04),
        (8.0, 2.851337588222157e-05),
        (10.0, 1.284957917257370e-05),
    ];
    for (r, exact) in reference {
        match mheat_eval(p, r) {
            Ok(v) => println!("r={r}: {v:.15e} ref {exact:.15e} err {:.3e}", (v - exact).abs()),
            Err(e) => println!("r={r}: ERROR {e}"),
        }
    }
}
