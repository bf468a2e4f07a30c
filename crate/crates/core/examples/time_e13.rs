use std::time::Instant;
fn main() {
    let g = tensorsq_core::catalog::extra_special_exponent_p(3).unwrap();
    let t0 = Instant::now();
    let t = tensorsq_core::tensor::tensor_square(&g, 2_000_000).unwrap();
    println!("E1(3): |T| = {}, |nu| = {}, elapsed = {:.2?}", t.order(), t.nu_order, t0.elapsed());
    println!("invariants: {:?}", t.invariants().map(|i| i.factors));
    let t0 = Instant::now();
    let s = tensorsq_core::tensor::schur_multiplier(&t).unwrap();
    println!("schur: |M| = {}, |nabla| = {}, elapsed = {:.2?}", s.multiplier_order, t.nabla.len(), t0.elapsed());
}
