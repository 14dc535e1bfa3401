//! Acceptance run: one `[PASS]` or `[FAIL]` line per criterion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use fell_core::bundle::{pullback, semidirect_bundle, twisted_semidirect_bundle};
use fell_core::catalog::{
    pauli_quotient, pauli_z2, s3_coset_action, s3_scalar_example, swap_action, trivial_scalar_bundle, twisted_z4,
};
use fell_core::duality::{
    extract_twist, is_g_simple, olesen_pedersen_forward, pullback_round_trips, stabilizer_obstruction, transported_family,
};
use fell_core::ep::{ep_defect, ep_pullback_witness, EpWitness};
use fell_core::{Bundle, Cx, CrossedProduct, FiniteGroup, Imprimitivity, Matrix, Quotient, SectionAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn battery() -> Result<Vec<(&'static str, Bundle)>, String> {
    let (q, d) = pauli_quotient(TOL).map_err(err)?;
    Ok(vec![
        ("pauli_z2", pauli_z2(TOL).map_err(err)?),
        ("trivial_z4", trivial_scalar_bundle(Arc::new(FiniteGroup::cyclic(4).map_err(err)?), TOL).map_err(err)?),
        ("trivial_s3", trivial_scalar_bundle(Arc::new(FiniteGroup::symmetric(3).map_err(err)?), TOL).map_err(err)?),
        ("pullback_pauli_z4", pullback(&d, &q, TOL).map_err(err)?),
        ("twisted_z4", twisted_semidirect_bundle(&twisted_z4(-1.0, TOL).map_err(err)?).concretize(TOL).map_err(err)?.bundle),
        ("swap", semidirect_bundle(&swap_action(TOL).map_err(err)?).concretize(TOL).map_err(err)?.bundle),
    ])
}

fn quotient_examples() -> Result<Vec<(&'static str, Quotient, Bundle)>, String> {
    let (q, d) = pauli_quotient(TOL).map_err(err)?;
    let (action, s3) = s3_scalar_example(TOL).map_err(err)?;
    Ok(vec![("pauli/z4", q, d), ("s3/a3", action.quotient().clone(), s3.bundle)])
}

fn fell_axioms() -> Check {
    let list = battery()?;
    for (name, b) in &list {
        let r = b.verify(1e-8);
        ensure(r.passed(), format!("{name}: {:?}", r.violations))?;
    }
    Ok(format!("{} bundles, 5 axiom families each", list.len()))
}

fn imprimitivity() -> Check {
    let mut worst = 0.0f64;
    for (name, q, d) in quotient_examples()? {
        let imp = Imprimitivity::new(q, d, TOL).map_err(err)?;
        let r = imp.verify(1e-8);
        for item in &r.items {
            ensure(item.passed, format!("{name}: item {} failed ({})", item.item, item.residual))?;
            worst = worst.max(item.residual);
        }
        ensure(r.items.len() == 8, format!("{name}: {} items", r.items.len()))?;
    }
    Ok(format!("8 items on 2 examples, worst residual {worst:.1e}"))
}

fn gauss_rank(mut rows: Vec<Vec<Cx<f64>>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).max_by(|&a, &b| rows[a][c].norm().total_cmp(&rows[b][c].norm())) else { break };
        if rows[p][c].norm() <= 1e-9 {
            continue;
        }
        rows.swap(rank, p);
        let pivot = rows[rank][c];
        for r in 0..rows.len() {
            if r != rank {
                let f = rows[r][c] / pivot;
                for k in c..cols {
                    let v = rows[rank][k];
                    rows[r][k] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn center_dim(basis: &[Matrix<f64>]) -> usize {
    let k = basis.len();
    let mut cols: Vec<Vec<Cx<f64>>> = vec![Vec::new(); k];
    for bi in basis {
        for (j, bj) in basis.iter().enumerate() {
            cols[j].extend_from_slice((&(bj * bi) - &(bi * bj)).as_slice());
        }
    }
    let rows = (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    k - gauss_rank(rows)
}

fn morita_anchor() -> Check {
    let (q, d) = pauli_quotient(TOL).map_err(err)?;
    let imp = Imprimitivity::new(q, d, TOL).map_err(err)?;
    let zb = center_dim(imp.realization_b().algebra().basis());
    let zc = center_dim(imp.realization_c().algebra().basis());
    ensure((zb, zc) == (1, 1), format!("center oracle gave ({zb}, {zc})"))?;
    let m = imp.morita_report(TOL).map_err(err)?;
    let got = (m.dim_c, m.dim_b, m.dim_x, m.blocks_b, m.blocks_c);
    ensure(got == (4, 16, 8, zb, zc), format!("got {got:?}"))?;
    Ok("dim C0 = 4, dim B0 = 16, dim X0 = 8, blocks 1 = 1".into())
}

fn equivariance() -> Check {
    let mut worst = 0.0f64;
    for (name, q, d) in quotient_examples()? {
        let e = Imprimitivity::new(q, d, TOL).map_err(err)?.equivariance();
        let r = e.left_inner.max(e.right_action);
        ensure(r <= 1e-10, format!("{name}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("worst residual {worst:.1e}"))
}

fn char_round_trips() -> Check {
    let mut worst = 0.0f64;
    for (name, q, d) in quotient_examples()? {
        let (a, b) = pullback_round_trips(&d, &q, TOL).map_err(err)?;
        ensure(a.holds(1e-8), format!("{name}: quotient of pull-back {a:?}"))?;
        ensure(b.holds(1e-8), format!("{name}: pull-back of quotient {b:?}"))?;
        worst = worst.max(a.max_residual()).max(b.max_residual());
    }
    Ok(format!("both directions on 2 quotients, worst residual {worst:.1e}"))
}

fn olesen_pedersen() -> Check {
    let twisted = twisted_z4(-1.0, TOL).map_err(err)?;
    let control = twisted.untwisted_part();
    for (name, t) in [("twisted", &twisted), ("untwisted", &control)] {
        let op = olesen_pedersen_forward(t, TOL).map_err(err)?;
        ensure(op.isomorphism.holds(1e-8), format!("{name}: {:?}", op.isomorphism))?;
    }
    let op = olesen_pedersen_forward(&twisted, TOL).map_err(err)?;
    let u = transported_family(&twisted, &op, TOL).map_err(err)?;
    let tau = extract_twist(&twisted, &op.semidirect, &u, TOL).map_err(err)?;
    let t2 = tau.iter().find(|(n, _)| *n == 2).ok_or("no tau(2)")?.1[(0, 0)];
    let off = (t2 - Cx::new(-1.0, 0.0)).norm();
    ensure(off <= 1e-12, format!("tau(2) = {t2}"))?;
    Ok(format!("forward map on twisted and control, tau(2) = {:.1}", t2.re))
}

fn obstruction() -> Check {
    let act = s3_coset_action();
    let r = stabilizer_obstruction(&act, &[0, 3, 4]).map_err(err)?;
    ensure(r.kernel == vec![0], format!("kernel {:?}", r.kernel))?;
    ensure(!r.induced_possible, "declared inducible")?;
    let b = act.crossed_product_bundle::<f64>(TOL).map_err(err)?;
    let s = SectionAlgebra::new(&b, TOL).map_err(err)?;
    ensure(is_g_simple(&s, TOL).map_err(err)?, "dual grading is not G-simple")?;
    Ok("kernel {e}, not weakly induced from S3/A3, dual grading G-simple".into())
}

fn ep() -> Check {
    for (name, b) in battery()? {
        let w = EpWitness::uniform(&b, TOL).map_err(err)?;
        let r = ep_defect(&b, &w);
        ensure((r.bound - 1.0).abs() <= 1e-10 && r.defect <= 1e-10, format!("{name}: {r:?}"))?;
    }
    let (q, d) = pauli_quotient(TOL).map_err(err)?;
    let p = pullback(&d, &q, TOL).map_err(err)?;
    let f = EpWitness::uniform(&d, TOL).map_err(err)?;
    let c = Cx::new(0.5f64.sqrt(), 0.0);
    let h = ep_pullback_witness(&d, &f, &BTreeMap::from([(0, c), (2, c)]), &q, &p, TOL).map_err(err)?;
    let r = ep_defect(&p, &h);
    ensure(r.defect <= 1e-10 && r.bound <= 1.0 + 1e-10, format!("constant g: {r:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut next = || rng.gen_range(-1.0..1.0);
    for i in 0..100 {
        let fv = (0..2).map(|k| (k, Matrix::identity(2).scale(Cx::new(next(), next())))).collect();
        let f = EpWitness::new(&d, fv, TOL).map_err(err)?;
        let mut g: BTreeMap<usize, Cx<f64>> = [0, 2].iter().map(|&n| (n, Cx::new(next(), next()))).collect();
        let norm = g.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let target = 0.5 * (next() + 1.0) * 0.95 + 0.05;
        for z in g.values_mut() {
            *z *= target / norm;
        }
        let gsum: f64 = g.values().map(|z| z.norm_sqr()).sum();
        let h = ep_pullback_witness(&d, &f, &g, &q, &p, TOL).map_err(err)?;
        ensure(h.bound() <= f.bound() * gsum + 1e-10, format!("pair {i}: {} > {}", h.bound(), f.bound() * gsum))?;
    }
    Ok("uniform witnesses exact, constant g exact, 100 random pairs within bound".into())
}

fn crossed_products() -> Check {
    let mut worst = 0.0f64;
    for (name, b) in battery()? {
        let cp = CrossedProduct::new(&b, TOL).map_err(err)?;
        ensure(cp.dim() == b.group().order() * b.total_dim(), format!("{name}: dim {}", cp.dim()))?;
        let r = cp.verify(TOL);
        ensure(r.dimension_law && r.isometry <= 1e-10, format!("{name}: {r:?}"))?;
        worst = worst.max(r.isometry);
    }
    Ok(format!("dimension law on battery, worst isometry residual {worst:.1e}"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fellbundle")).args(args).output().map_err(err)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_contract() -> Check {
    let pauli = fixture("pauli.json");
    let p = pauli.to_str().unwrap();
    for args in [vec!["report", p], vec!["imprimitivity", p, "--group", "cyclic:4", "--normal", "0,2"]] {
        let (c1, o1) = cli(&args)?;
        let (c2, o2) = cli(&args)?;
        ensure(c1 == 0 && c2 == 0, format!("{args:?} exited {c1}"))?;
        ensure(o1 == o2 && !o1.is_empty(), format!("{args:?}: outputs differ"))?;
    }
    let (code, _) = cli(&["verify", fixture("broken.json").to_str().unwrap()])?;
    ensure(code == 1, format!("corrupted involution exited {code}"))?;
    let (code, _) = cli(&["verify", fixture("malformed.json").to_str().unwrap()])?;
    ensure(code == 2, format!("malformed spec exited {code}"))?;
    Ok("byte-identical reports, exit 1 on broken involution, exit 2 on malformed spec".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fell axioms on the example battery", fell_axioms),
        ("imprimitivity bimodule checklist", imprimitivity),
        ("morita anchor for pauli over z4", morita_anchor),
        ("gamma equivariance", equivariance),
        ("pull-back characterization round trips", char_round_trips),
        ("olesen-pedersen forward map and twist extraction", olesen_pedersen),
        ("stabilizer obstruction and g-simplicity", obstruction),
        ("approximation property witnesses", ep),
        ("crossed product dimension law", crossed_products),
        ("cli determinism and fault injection", cli_contract),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({:.2?})", i + 1, t.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
