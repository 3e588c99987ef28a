fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(|s| s.as_str()).unwrap_or("D16");
    let g = zc1::catalog::corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .expect("group exists")
        .1;
    let v = zc1::Verifier::new(zc1::VerifyConfig::default());
    match v.verify(&g, name) {
        Ok(r) => print!("{}", zc1::verify::emit(&r, zc1::verify::EmitFormat::Text)),
        Err(e) => println!("error: {e}"),
    }
}
