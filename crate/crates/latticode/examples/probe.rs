use latticode::catalog::*;
use latticode::linalg::*;
fn main() {
    let spec = catalog_get(LatticeName::Bw64);
    let b = spec.basis.as_ref().unwrap().full_matrix();
    let n = 64usize;
    let mut fails = 0;
    'outer: for i in 0..n {
        for j in 0..n {
            // minor deleting row i, col j
            let mut rows: Vec<Vec<i64>> = Vec::new();
            for r in 0..n {
                if r == i { continue; }
                let mut row = Vec::new();
                for c in 0..n {
                    if c == j { continue; }
                    row.push(b.numerators()[r * n + c]);
                }
                rows.push(row);
            }
            let m = DyadicMatrix::from_rows(&rows, 0);
            if m.det_exact().is_err() {
                println!("minor ({i},{j}) overflows");
                fails += 1;
                if fails > 5 { break 'outer; }
            }
        }
    }
    println!("done, {fails} failing minors (of sampled)");
}
