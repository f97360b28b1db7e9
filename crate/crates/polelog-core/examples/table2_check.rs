use polelog_core::poly::Poly;
use polelog_core::spectral::{ss_pages, Mode, SsOptions};

fn main() {
    // x⁵ + y⁴z + x³y² + w⁵
    let f = Poly::homogeneous(
        4,
        &[
            (1, &[5, 0, 0, 0]),
            (1, &[0, 4, 1, 0]),
            (1, &[3, 2, 0, 0]),
            (1, &[0, 0, 0, 5]),
        ],
    )
    .unwrap();
    let start = std::time::Instant::now();
    let t = ss_pages(
        &f,
        &SsOptions {
            k_max: Some(16),
            r_max: 3,
            mode: Mode::Exact,
            ..Default::default()
        },
    )
    .unwrap();
    println!("elapsed: {:?}", start.elapsed());
    for r in 1..=3 {
        let mu: Vec<usize> = (4..=16).map(|k| t.mu(r, k)).collect();
        let nu: Vec<usize> = (4..=16).map(|k| t.nu(r, k)).collect();
        println!("mu({r}): {mu:?}");
        println!("nu({r}): {nu:?}");
    }
}
