use jacobi_tori::grid::TorusGrid;
use jacobi_tori::jacobi::JacobiTable;
use jacobi_tori::pw::{intformula_check, pw_from_bump, BumpProfile};
use jacobi_tori::root_system::{RootSystem, SystemKind};
use jacobi_tori::shiftop::{solve_d, AnsatzOptions};

fn main() {
    let rs = RootSystem::new(SystemKind::A1, &[2]).unwrap();
    let table = JacobiTable::new(rs.clone());
    let eps = 0.6 * 0.9 * rs.max_admissible_radius();
    let pw = pw_from_bump(rs.clone(), eps, BumpProfile { sharpness: 6.0 }).unwrap();
    let d_op = solve_d(&table, &AnsatzOptions::default()).unwrap();
    let grid = TorusGrid::new(rs.clone(), 128);
    let rep = intformula_check(&table, &d_op, &pw, &grid).unwrap();
    println!("{rep:?}");
}
