use std::time::Instant;
fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(|s| s.as_str()).unwrap_or("C8xC2");
    let g = zc1::catalog::corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .expect("group exists")
        .1;
    let conj = zc1::group::conjugacy_data(&g);
    eprintln!("group {} order {} classes {}", name, g.order(), conj.class_count());
    let t = Instant::now();
    let a = zc1::group::cyclic_normal_witness(&g).unwrap();
    eprintln!("witness |A|={} {:?}", a.order(), t.elapsed());
    let d = zc1::group::compute_d(&g, &a).unwrap();
    let basis = zc1::abelian::AbelianBasis::new(&g, &d).unwrap();
    eprintln!("D order {} {:?}", d.order(), t.elapsed());
    let kernels = zc1::abelian::admissible_kernels(&g, &basis, Some(&a)).unwrap();
    eprintln!("kernels {} {:?}", kernels.len(), t.elapsed());
    let fam = zc1::character::k_induced_family(&g, &conj, &basis, &kernels).unwrap();
    eprintln!("family {} {:?}", fam.len(), t.elapsed());
    let kers = zc1::abelian::cyclic_kernels(&basis);
    eprintln!("cyclic kernels {} {:?}", kers.len(), t.elapsed());
    let v = zc1::Verifier::new(zc1::VerifyConfig::default());
    let t2 = Instant::now();
    let r = v.verify(&g, name);
    match r {
        Ok(rep) => eprintln!("verify -> {} in {:?}", rep.verdict.as_str(), t2.elapsed()),
        Err(e) => eprintln!("verify error {e} in {:?}", t2.elapsed()),
    }
}
