use std::time::Instant;
fn main() {
    let start = Instant::now();
    for (name, g) in zc1::catalog::corpus() {
        let t = Instant::now();
        let v = zc1::Verifier::new(zc1::VerifyConfig::default());
        match v.verify(&g, &name) {
            Ok(r) => println!("{:>10} order {:>3} -> {:<22} {:?}", name, g.order(), r.verdict.as_str(), t.elapsed()),
            Err(e) => println!("{:>10} order {:>3} -> ERROR {} {:?}", name, g.order(), e, t.elapsed()),
        }
    }
    println!("total: {:?}", start.elapsed());
}
