use std::collections::BTreeSet;

use spreadweb::field::{is_prime, QuadField};
use spreadweb::projgeom::Pg3;
use spreadweb::replace::reguli_in_spread;
use spreadweb::Context;

/// GF(q²) multiplication written out by hand: (a + bω)(c + dω) with ω² = n.
fn mul_oracle(q: u32, n: u32, (a, b): (u32, u32), (c, d): (u32, u32)) -> (u32, u32) {
    ((a * c + n * b * d) % q, (a * d + b * c) % q)
}

#[test]
fn extension_field_matches_hand_multiplication() {
    for q in [3, 5, 7] {
        let f = QuadField::new(q).unwrap();
        let n = f.nonsquare();
        assert!((0..q).all(|x| x * x % q != n), "ω² must be a non-square");
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let x = f.element(a, b).mul(f.element(c, d));
                        assert_eq!((x.a.value(), x.b.value()), mul_oracle(q, n, (a, b), (c, d)));
                    }
                }
            }
        }
        let g = f.primitive_element();
        assert_eq!(g.multiplicative_order(), Some(u64::from(q * q - 1)));
    }
}

#[test]
fn small_primes() {
    let primes: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
    assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    assert!(Pg3::new(4).is_err());
}

#[test]
fn point_and_line_counts() {
    for q in [3u32, 5, 7] {
        let pg = Pg3::new(q).unwrap();
        let q = q as usize;
        assert_eq!(pg.point_count(), (q.pow(4) - 1) / (q - 1));
        assert_eq!(pg.line_count(), (q * q + 1) * (q * q + q + 1));
        assert_eq!(pg.points_per_line(), q + 1);
        for l in (0..pg.line_count()).step_by(97) {
            assert_eq!(pg.points_of_line(l as u16).len(), q + 1);
        }
    }
}

/// Lines closed under multiplication by ω on each coordinate pair: the
/// GF(q²)-subspaces of GF(q²)², found without the spread construction.
fn omega_closed_lines(pg: &Pg3, n: u32) -> BTreeSet<u16> {
    let q = pg.q();
    let omega = |v: [u32; 4]| [n * v[1] % q, v[0], n * v[3] % q, v[2]];
    (0..pg.line_count() as u16)
        .filter(|&l| {
            let pts = pg.points_of_line(l);
            pts.iter().all(|&p| {
                let img = pg.point_of(&omega(pg.coords(p))).unwrap();
                pts.contains(&img)
            })
        })
        .collect()
}

#[test]
fn regular_spread_is_the_field_reduction() {
    for q in [3, 5, 7] {
        let ctx = Context::new(q).unwrap();
        let pg = ctx.pg();
        let s = ctx.regular_spread();
        let n = ctx.regular().field().nonsquare();
        let expected = omega_closed_lines(pg, n);
        let got: BTreeSet<u16> = s.lines().iter().copied().collect();
        assert_eq!(got, expected);
        let q = q as usize;
        assert_eq!(got.len(), q * q + 1);
    }
}

#[test]
fn structure_at_q5() {
    let ctx = Context::new(5).unwrap();
    let pg = ctx.pg();
    let s = ctx.regular_spread();
    let lines = s.lines();
    for (i, &a) in lines.iter().enumerate() {
        for &b in &lines[i + 1..] {
            assert!(pg.skew(a, b));
        }
    }
    let covered: BTreeSet<u16> = lines.iter().flat_map(|&l| pg.points_of_line(l).iter().copied()).collect();
    assert_eq!(covered.len(), 156);
    // Baer sublines of PG(1,25): |PGL(2,25)| / |PGL(2,5)|
    assert_eq!(reguli_in_spread(pg, &s).len(), (25 * 26 * 24) / (5 * 6 * 4));
    let k = ctx.regular().bruck_kernel();
    assert_eq!(k.order(), 6);
    assert!(lines.iter().all(|&l| k.apply_line(pg, l) == l));
}

#[test]
fn circles_at_q7() {
    let ctx = Context::new(7).unwrap();
    assert_eq!(ctx.regular().circle_count(), (49 * 50 * 48) / (7 * 8 * 6));
    assert_eq!(ctx.regular().bruck_kernel().order(), 8);
}

#[test]
fn semitransversals_partition_the_opposite_regulus() {
    let ctx = Context::new(5).unwrap();
    let rs = ctx.regular();
    for c in [0, 50, 129] {
        let opp = rs.opposite_regulus(c);
        for alpha in [1, 2, 3, 6] {
            let parts = rs.semitransversals(c, alpha).unwrap();
            assert_eq!(parts.len(), alpha as usize);
            let mut all: Vec<u16> = parts.iter().flat_map(|p| p.lines.iter().copied()).collect();
            all.sort_unstable();
            assert_eq!(all, opp);
            let pts: BTreeSet<u16> = parts[0]
                .lines
                .iter()
                .flat_map(|&l| ctx.pg().points_of_line(l).iter().copied())
                .collect();
            assert_eq!(pts.len(), 6 / alpha as usize * 6);
        }
        assert!(rs.semitransversals(c, 4).is_err());
    }
}
