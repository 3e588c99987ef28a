use std::time::Instant;
use zc1::constraints::*;
use zc1::solver::*;

fn main() {
    let g = zc1::catalog::abelian(&[8, 2]);
    let conj = zc1::group::conjugacy_data(&g);
    let a = zc1::group::cyclic_normal_witness(&g).unwrap();
    let d = zc1::group::compute_d(&g, &a).unwrap();
    let basis = zc1::abelian::AbelianBasis::new(&g, &d).unwrap();
    for m in [2u64, 4, 8] {
        let vars = var_layout(&g, &conj, m, true);
        // trivial chain of an element of order m if one exists
        let elt = g.elements().find(|&x| g.elt_order(x) as u64 == m).unwrap();
        let chain = PaChain::trivial(&g, &conj, elt);
        let mut sys = ConstraintSystem::new(vars.clone());
        sys.push_all(vec![augmentation_one(&vars)]);
        let cert = omega_trivial_certificate(&chain, &conj, &d, true, &vars).unwrap();
        sys.push_all(cert.zero_rows(vars.len()));
        sys.push_all(leo_constraints(&g, &conj, &basis, &vars, Some(&cert)).unwrap());
        let t = Instant::now();
        let cfg = SolverConfig::default();
        let bx = propagate_bounds(&sys, &cfg);
        eprintln!(
            "m={m}: vars={} rows={} box lo={:?} hi={:?} exh={} (prop {:?})",
            vars.len(),
            sys.constraints.len(),
            bx.lo,
            bx.hi,
            bx.exhaustive,
            t.elapsed()
        );
        let t2 = Instant::now();
        let budget = SolverConfig { node_budget: 2_000_000, ..cfg.clone() };
        match enumerate_bnb(&sys, &bx, &budget) {
            Ok(s) => eprintln!("  bnb: {} sols, {} nodes, {:?}", s.vectors.len(), s.nodes, t2.elapsed()),
            Err(e) => eprintln!("  bnb: {e} after {:?}", t2.elapsed()),
        }
    }
}
