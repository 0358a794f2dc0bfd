//! Solver kernels checked against independent computations.

use num_traits::{Signed, Zero};
use rand::Rng;

use tcspace::solvers::{
    least_squares_exact, min_cost_flow, simplex_solve, FlowNetwork, LinearProgram, Rational,
    Relation,
};
use tcspace::sweep::{random_metric, random_problem, random_rational, seeded_rng};
use tcspace::{int, tc_brute_force, tc_norm, Error};

/// Solves a square system by Gaussian elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let delta = &f * &a[c][k];
                    a[r][k] -= delta;
                }
                let delta = &f * &b[c];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    with.extend(subsets(n - 1, k));
    with
}

struct BoxedLp {
    lp: LinearProgram,
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
    cost: Vec<Rational>,
}

fn feasible(p: &BoxedLp, x: &[Rational]) -> bool {
    let in_box = x
        .iter()
        .zip(p.lower.iter().zip(&p.upper))
        .all(|(v, (l, u))| v >= l && v <= u);
    in_box
        && p.rows.iter().all(|(row, rel, rhs)| {
            let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
            match rel {
                Relation::Le => lhs <= *rhs,
                Relation::Eq => lhs == *rhs,
                Relation::Ge => lhs >= *rhs,
            }
        })
}

/// Minimum over all basic feasible points of a bounded LP.
fn vertex_enumeration(p: &BoxedLp) -> Option<Rational> {
    let nv = p.cost.len();
    let mut planes: Vec<(Vec<Rational>, Rational)> =
        p.rows.iter().map(|(r, _, b)| (r.clone(), b.clone())).collect();
    for j in 0..nv {
        let mut e = vec![int(0); nv];
        e[j] = int(1);
        planes.push((e.clone(), p.lower[j].clone()));
        planes.push((e, p.upper[j].clone()));
    }
    let mut best: Option<Rational> = None;
    for subset in subsets(planes.len(), nv) {
        let a = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b = subset.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if !feasible(p, &x) {
            continue;
        }
        let value: Rational = p.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    best
}

fn random_boxed_lp<R: Rng>(rng: &mut R) -> BoxedLp {
    let nv = rng.gen_range(1..=4);
    let nc = rng.gen_range(0..=6);
    let cost: Vec<Rational> = (0..nv).map(|_| random_rational(rng, -5, 5, 2)).collect();
    let mut lp = LinearProgram::minimize(cost.clone());
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for j in 0..nv {
        let l = random_rational(rng, -4, 1, 2);
        let u = &l + random_rational(rng, 0, 6, 2);
        lp.set_bounds(j, Some(l.clone()), Some(u.clone())).unwrap();
        lower.push(l);
        upper.push(u);
    }
    let mut rows = Vec::new();
    for _ in 0..nc {
        let row: Vec<Rational> = (0..nv).map(|_| random_rational(rng, -3, 3, 2)).collect();
        let rel = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Le,
            _ => Relation::Ge,
        };
        let rhs = random_rational(rng, -6, 6, 2);
        lp.add_constraint(row.clone(), rel, rhs.clone()).unwrap();
        rows.push((row, rel, rhs));
    }
    BoxedLp {
        lp,
        rows,
        lower,
        upper,
        cost,
    }
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = seeded_rng(2024);
    let (mut solved, mut infeasible) = (0, 0);
    for _ in 0..400 {
        let p = random_boxed_lp(&mut rng);
        match (simplex_solve(&p.lp), vertex_enumeration(&p)) {
            (Ok(sol), Some(best)) => {
                assert_eq!(sol.value, best);
                assert!(feasible(&p, &sol.x), "simplex point infeasible");
                solved += 1;
            }
            (Err(Error::Infeasible), None) => infeasible += 1,
            (got, want) => panic!("simplex {got:?} vs enumeration {want:?}"),
        }
    }
    assert!(solved > 100 && infeasible > 10, "{solved} solved, {infeasible} infeasible");
}

/// The min-cost flow LP: flow bounds per arc, conservation per node.
fn flow_lp(net: &FlowNetwork) -> LinearProgram {
    let arcs = net.arcs();
    let mut lp = LinearProgram::minimize(arcs.iter().map(|a| a.cost.clone()).collect());
    for (k, a) in arcs.iter().enumerate() {
        lp.set_bounds(k, Some(int(0)), a.capacity.clone()).unwrap();
    }
    for (v, s) in net.supplies().iter().enumerate() {
        let row = arcs
            .iter()
            .map(|a| match (a.tail == v, a.head == v) {
                (true, false) => int(1),
                (false, true) => int(-1),
                _ => int(0),
            })
            .collect();
        lp.add_constraint(row, Relation::Eq, s.clone()).unwrap();
    }
    lp
}

#[test]
fn min_cost_flow_matches_lp() {
    let mut rng = seeded_rng(99);
    let (mut agree, mut infeasible) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(2..=5);
        let mut supplies: Vec<Rational> = (0..n - 1).map(|_| random_rational(&mut rng, -3, 3, 2)).collect();
        let total: Rational = supplies.iter().sum();
        supplies.push(-total);
        let mut net = FlowNetwork::new(supplies.clone()).unwrap();
        for _ in 0..rng.gen_range(1..=2 * n * n) {
            let t = rng.gen_range(0..n);
            let h = rng.gen_range(0..n);
            if t == h {
                continue;
            }
            let cap = rng.gen_bool(0.5).then(|| random_rational(&mut rng, 0, 4, 3));
            net.add_arc(t, h, random_rational(&mut rng, 0, 6, 2), cap).unwrap();
        }
        let lp = flow_lp(&net);
        match (min_cost_flow(&net), simplex_solve(&lp)) {
            (Ok(flow), Ok(sol)) => {
                assert_eq!(flow.cost, sol.value);
                for (v, s) in supplies.iter().enumerate() {
                    let net_out: Rational = net
                        .arcs()
                        .iter()
                        .zip(&flow.flows)
                        .map(|(a, f)| {
                            if a.tail == v {
                                f.clone()
                            } else if a.head == v {
                                -f.clone()
                            } else {
                                int(0)
                            }
                        })
                        .sum();
                    assert_eq!(&net_out, s, "conservation at {v}");
                }
                for (a, f) in net.arcs().iter().zip(&flow.flows) {
                    assert!(!f.is_negative());
                    assert!(a.capacity.as_ref().is_none_or(|c| f <= c));
                }
                agree += 1;
            }
            (Err(Error::Infeasible), Err(Error::Infeasible)) => infeasible += 1,
            (a, b) => panic!("flow {a:?} vs lp {b:?}"),
        }
    }
    assert!(agree > 100 && infeasible > 10, "{agree} agree, {infeasible} infeasible");
}

#[test]
fn transport_flow_matches_transport_lp() {
    let mut rng = seeded_rng(5);
    for _ in 0..150 {
        let n = rng.gen_range(2..=8);
        let space = random_metric(&mut rng, n);
        let f = random_problem(&mut rng, n, 8);
        assert_eq!(tc_norm(&space, &f).unwrap().0, tc_brute_force(&space, &f).unwrap());
    }
}

#[test]
fn least_squares_residual_is_orthogonal() {
    let mut rng = seeded_rng(17);
    for _ in 0..100 {
        let m = rng.gen_range(1..=7);
        let k = rng.gen_range(1..=5);
        let mut rows: Vec<Vec<Rational>> = (0..m)
            .map(|_| (0..k).map(|_| random_rational(&mut rng, -3, 3, 2)).collect())
            .collect();
        if k > 1 && rng.gen_bool(0.3) {
            // force rank deficiency
            for row in &mut rows {
                row[k - 1] = row[0].clone() * int(2);
            }
        }
        let t: Vec<Rational> = (0..m).map(|_| random_rational(&mut rng, -4, 4, 3)).collect();
        let x = least_squares_exact(&rows, &t).unwrap();
        let residual: Vec<Rational> = rows
            .iter()
            .zip(&t)
            .map(|(r, ti)| r.iter().zip(&x).map(|(a, b)| a * b).sum::<Rational>() - ti)
            .collect();
        for c in 0..k {
            let dot: Rational = rows.iter().zip(&residual).map(|(r, e)| &r[c] * e).sum();
            assert!(dot.is_zero());
        }
    }
}
