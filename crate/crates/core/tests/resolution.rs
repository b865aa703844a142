//! Golden resolutions and a toric oracle for monomial pencils.
//!
//! Set `G2FIB_BLESS=1` to rewrite the golden files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use g2fib_core::format::to_json;
use g2fib_core::resolve::{type20_note, Origin};
use g2fib_core::{assemble_global_example, resolve_pencil, validate_fiber, PencilGerm};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("G2FIB_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, want, "golden mismatch for {name}");
}

/// `(nu_num, nu_den, self_int)` of every curve resolving `y^a / x^b`, found by
/// Farey insertion of weight vectors `(p, q)` with `v(x) = p`, `v(y) = q`.
fn toric_oracle(a: u64, b: u64) -> Vec<(u64, u64, i64)> {
    let sign = |w: (u64, u64)| (w.1 * a) as i64 - (w.0 * b) as i64;
    let mut rays = vec![(1u64, 0u64), (0, 1)];
    loop {
        let at = rays.windows(2).position(|w| (sign(w[0]) < 0 && sign(w[1]) > 0) || (sign(w[0]) > 0 && sign(w[1]) < 0));
        match at {
            Some(i) => {
                let (l, r) = (rays[i], rays[i + 1]);
                rays.insert(i + 1, (l.0 + r.0, l.1 + r.1));
            }
            None => break,
        }
    }
    let n = rays.len();
    (0..n)
        .map(|i| {
            let self_int = if i == 0 {
                // Strict transforms start at 0 and drop once per ray inserted next to
                // them; the edge neighbour of (1, 0) is (k, 1) after k insertions.
                -(rays[1].0 as i64)
            } else if i == n - 1 {
                -(rays[n - 2].1 as i64)
            } else {
                let (l, r, w) = (rays[i - 1], rays[i + 1], rays[i]);
                let c = if w.0 > 0 { (l.0 + r.0) / w.0 } else { (l.1 + r.1) / w.1 };
                -(c as i64)
            };
            (rays[i].1 * a, rays[i].0 * b, self_int)
        })
        .collect()
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

#[test]
fn toric_oracle_matches_resolution() {
    for a in 1..=9u64 {
        for b in 1..=12u64 {
            let r = resolve_pencil(&PencilGerm::parse(&format!("y^{a} / x^{b}")).unwrap());
            let got = sorted(r.curves.iter().map(|c| (c.nu_num, c.nu_den, c.self_int)).collect());
            assert_eq!(got, sorted(toric_oracle(a, b)), "y^{a} / x^{b}");
        }
    }
}

#[test]
fn v4_u10_golden() {
    let r = resolve_pencil(&PencilGerm::parse("y^4 / x^10").unwrap());
    assert_eq!(r.blowups, 4);
    golden("v4_u10.json", &(serde_json::to_string_pretty(&r).unwrap() + "\n"));
}

#[test]
fn global_example_golden() {
    let ex = assemble_global_example();
    for f in [&ex.zero, &ex.inf] {
        assert!(validate_fiber(f).pass());
        assert_eq!(f.genus, 2);
    }
    let mults: BTreeMap<&str, u64> = ex.zero.components.iter().map(|c| (c.id.as_str(), c.mult)).collect();
    assert_eq!((mults["Lx"], mults["Ly"], mults["Ld"]), (5, 4, 1));
    assert!(ex.resolution.curves.iter().filter(|c| c.origin == Origin::Strict).count() == 4);
    assert!(type20_note(&ex.inf).is_some());
    golden("global_zero.json", &to_json(&ex.zero));
    golden("global_inf.json", &to_json(&ex.inf));
}
