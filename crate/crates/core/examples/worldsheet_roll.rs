//! A flat sheet of strings rolled into a cylinder and bent into a torus.

use std::f64::consts::TAU;

use strbut::geometry::cover_check;
use strbut::worldsheet::{bend_to_torus, roll_to_cylinder, torus_surface_area, FlatSheet};

fn main() -> strbut::Result<()> {
    let sheet = FlatSheet::new(TAU, 20.0, 8)?;
    let ws = sheet.worldsheet()?;
    println!("sheet {}x{}: {} strings, covered={}", sheet.width(), sheet.height(), ws.strings().len(), cover_check(&ws));

    let cyl = roll_to_cylinder(&sheet);
    println!("cylinder r={} h={} area {} vs sheet {}", cyl.radius(), cyl.height(), cyl.lateral_area(), sheet.area());
    let seam = cyl.map(0.0, 5.0).distance(&cyl.map(sheet.width(), 5.0));
    println!("seam gap {seam:e}");

    let torus = bend_to_torus(cyl.radius(), cyl.height())?;
    println!("torus c={} r={} area {}", torus.c(), torus.r(), torus_surface_area(&torus));
    match bend_to_torus(1.0, 3.0) {
        Err(e) => println!("short cylinder rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
