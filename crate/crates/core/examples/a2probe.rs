use jacobi_tori::jacobi::JacobiTable;
use jacobi_tori::root_system::{RootSystem, SystemKind};
use jacobi_tori::shiftop::{solve_d, AnsatzOptions};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("b22");
    let (kind, mults) = match which {
        "b22" => (SystemKind::B2, vec![2u32, 2]),
        "b24" => (SystemKind::B2, vec![2, 4]),
        _ => (SystemKind::A2, vec![2]),
    };
    let t0 = std::time::Instant::now();
    let rs = RootSystem::new(kind, &mults).unwrap();
    let t = JacobiTable::new(rs);
    let opts = AnsatzOptions { verify_level: 2, ..Default::default() };
    match solve_d(&t, &opts) {
        Ok(d) => println!(
            "{kind} m={mults:?} solved: {} terms, order {}, unique={} in {:?}",
            d.terms.len(),
            d.order(),
            d.unique,
            t0.elapsed()
        ),
        Err(e) => println!("{kind} m={mults:?}: {e} in {:?}", t0.elapsed()),
    }
}
