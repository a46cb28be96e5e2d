use fracmap::commutator::*;
use fracmap::field::{ScalarField, VectorFieldMap};
use fracmap::flow::{el_residual, perturbed_circle_map};
use fracmap::grid::PeriodicGrid;
use fracmap::manifold::{projector_fields, ManifoldMap, SphereTarget};
use fracmap::spectral::{matrix_fractional_laplacian, vector_fractional_laplacian};

fn blaschke(grid: &PeriodicGrid, a: f64) -> ManifoldMap {
    let den = move |x: f64| 1.0 + a * a - 2.0 * a * x.cos();
    let u = VectorFieldMap::new(vec![
        ScalarField::from_fn(grid, move |x| ((1.0 + a * a) * x[0].cos() - 2.0 * a) / den(x[0])),
        ScalarField::from_fn(grid, move |x| ((1.0 - a * a) * x[0].sin()) / den(x[0])),
    ])
    .unwrap();
    ManifoldMap::new(u, SphereTarget::new(2).unwrap()).unwrap()
}

// euler1 top-row defect: (-L)^{n/4}(P^T v0) - [T(P^T,u) - A v0]
fn euler1_defect(u: &ManifoldMap) -> (f64, f64) {
    let grid = &u.field.grid;
    let s = grid.n as f64 / 4.0;
    let p = projector_fields(u).unwrap();
    let v0 = vector_fractional_laplacian(&u.field, s).unwrap();
    let lhs = vector_fractional_laplacian(&p.tangent.matvec(&v0).unwrap(), s).unwrap();
    let a = matrix_fractional_laplacian(&p.tangent, s).unwrap();
    let rhs = op_t_matrix(&p.tangent, &u.field)
        .unwrap()
        .sub(&a.matvec(&v0).unwrap())
        .unwrap();
    let d = lhs.sub(&rhs).unwrap().magnitude().linf();
    (d, lhs.magnitude().linf().max(rhs.magnitude().linf()))
}

// eqstructbis bottom defect: (-L)^{n/4}(P^N v0) - ((-L)^{n/4} Rbar) f(P^N,u)
fn structbis_defect(u: &ManifoldMap) -> (f64, f64) {
    let grid = &u.field.grid;
    let s = grid.n as f64 / 4.0;
    let p = projector_fields(u).unwrap();
    let v0 = vector_fractional_laplacian(&u.field, s).unwrap();
    let lhs = vector_fractional_laplacian(&p.normal.matvec(&v0).unwrap(), s).unwrap();
    let rhs = structure_equation_rhs(&p.normal, &u.field).unwrap();
    let d = lhs.sub(&rhs).unwrap().magnitude().linf();
    (d, lhs.magnitude().linf().max(rhs.magnitude().linf()))
}

fn main() {
    for nn in [64usize, 128, 256] {
        let grid = PeriodicGrid::new(1, nn).unwrap();
        let u = blaschke(&grid, 0.6);
        let (d1, s1) = euler1_defect(&u);
        let (d2, s2) = structbis_defect(&u);
        println!(
            "blaschke a=0.6 N={nn}: el_res {:.3e}  euler1 defect {:.3e} (scale {:.2e})  structbis defect {:.3e} (scale {:.2e})",
            el_residual(&u).unwrap(), d1, s1, d2, s2
        );
    }
    // Non-critical map for comparison.
    let grid = PeriodicGrid::new(1, 128).unwrap();
    let u = perturbed_circle_map(&grid, 2, 0.1, 3).unwrap();
    let (d1, s1) = euler1_defect(&u);
    let (d2, s2) = structbis_defect(&u);
    println!(
        "perturbed circle N=128: el_res {:.3e}  euler1 defect {:.3e} (scale {:.2e})  structbis defect {:.3e} (scale {:.2e})",
        el_residual(&u).unwrap(), d1, s1, d2, s2
    );
    // n=3 smooth sphere map for the structbis refinement behaviour.
    for nn in [12usize, 24] {
        let grid = PeriodicGrid::new(3, nn).unwrap();
        let raw = VectorFieldMap::new(vec![
            ScalarField::from_fn(&grid, |x| x[0].cos()),
            ScalarField::from_fn(&grid, |x| x[0].sin()),
            ScalarField::from_fn(&grid, |x| 0.4 + 0.3 * (2.0 * x[0]).sin() + 0.2 * x[1].cos()),
        ])
        .unwrap();
        let u = fracmap::manifold::nearest_projection(&raw).unwrap();
        let (d2, s2) = structbis_defect(&u);
        let (d1, s1) = euler1_defect(&u);
        println!(
            "curved n=3 N={nn}: el_res {:.3e}  euler1 defect {:.3e} (scale {:.2e})  structbis defect {:.3e} (scale {:.2e})",
            el_residual(&u).unwrap(), d1, s1, d2, s2
        );
    }
}
