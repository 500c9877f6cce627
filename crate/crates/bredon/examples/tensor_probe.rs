use bredon::chartab::DEFAULT_ORDER_BOUND;
use bredon::group::{build_group, GroupSpec};
use bredon::repring::rep_ring;
use bredon::rmod::{submodule_from_generators, tensor_over_ring, BaseRing, RMod};
use num_bigint::BigInt;
use std::time::Instant;

fn main() {
    let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
    let ring = BaseRing::from_rep_ring(&rep_ring(&c4, DEFAULT_ORDER_BOUND).unwrap());
    let unit = RMod::free(&ring, 1);
    let vals: Vec<i64> = vec![-2, -1, 0, 1, 2];
    // single-generator modules over the 5^4 grid, tensored with themselves
    let mut worst = Vec::new();
    for a in &vals { for b in &vals { for c in &vals { for d in &vals {
        let g = vec![BigInt::from(*a), BigInt::from(*b), BigInt::from(*c), BigInt::from(*d)];
        let (m, _) = submodule_from_generators(&unit, &[g.clone()]);
        let t0 = Instant::now();
        let t = tensor_over_ring(&m, &m).unwrap();
        let dt = t0.elapsed();
        if dt.as_millis() > 200 {
            worst.push((format!("{:?}", [a,b,c,d]), dt, t.gens()));
        }
    }}}}
    worst.sort_by_key(|w| w.1);
    for (g, dt, gens) in worst.iter().rev().take(10) {
        println!("gen {} tensor self: {:?}, result gens {}", g, dt, gens);
    }
    println!("slow count: {}", worst.len());
}
