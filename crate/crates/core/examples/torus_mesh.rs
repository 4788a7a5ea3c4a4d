//! Ring-torus closed forms against quadrature, plus a small mesh on stdout.

use strbut::worldsheet::{
    torus_area_quadrature, torus_mesh, torus_surface_area, torus_volume, torus_volume_quadrature,
    write_mesh_csv, RingTorus,
};

fn main() -> strbut::Result<()> {
    for (c, r) in [(2.0, 1.0), (3.0, 0.5), (10.0, 1.0)] {
        let t = RingTorus::new(c, r)?;
        let a = torus_area_quadrature(&t, 512)?;
        let v = torus_volume_quadrature(&t, 128)?;
        println!(
            "c={c} r={r} area={:.9} (quad {:.9}) volume={:.9} (quad {:.9})",
            torus_surface_area(&t),
            a,
            torus_volume(&t),
            v
        );
    }
    let mesh = torus_mesh(&RingTorus::new(2.0, 1.0)?, 4, 3)?;
    write_mesh_csv(&mesh, std::io::stdout())
}
