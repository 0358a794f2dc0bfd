//! Min-cost flow by successive shortest paths with node potentials.
//!
//! All quantities are exact rationals. Rational capacities are commensurable,
//! so every augmentation moves at least one unit of their common denominator
//! and the method terminates.

use num_traits::{Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cost: Rational,
    /// `None` means uncapacitated.
    pub capacity: Option<Rational>,
}

/// Supplies (positive) and demands (negative) on nodes, joined by arcs with
/// nonnegative unit costs.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    supplies: Vec<Rational>,
    arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSolution {
    pub cost: Rational,
    /// Flow on each arc, in the order the arcs were added.
    pub flows: Vec<Rational>,
}

impl FlowNetwork {
    pub fn new(supplies: Vec<Rational>) -> Result<Self> {
        let total: Rational = supplies.iter().sum();
        if !total.is_zero() {
            return Err(Error::NotZeroSum(total.to_string()));
        }
        Ok(FlowNetwork {
            supplies,
            arcs: Vec::new(),
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.supplies.len()
    }

    pub fn supplies(&self) -> &[Rational] {
        &self.supplies
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(
        &mut self,
        tail: usize,
        head: usize,
        cost: Rational,
        capacity: Option<Rational>,
    ) -> Result<usize> {
        let n = self.num_nodes();
        for index in [tail, head] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        if cost.is_negative() {
            return Err(Error::InvalidNetwork(format!(
                "arc {tail}->{head} has negative cost {cost}"
            )));
        }
        if capacity.as_ref().is_some_and(|c| c.is_negative()) {
            return Err(Error::InvalidNetwork(format!(
                "arc {tail}->{head} has negative capacity"
            )));
        }
        self.arcs.push(Arc {
            tail,
            head,
            cost,
            capacity,
        });
        Ok(self.arcs.len() - 1)
    }
}

struct ResidualEdge {
    to: usize,
    cap: Option<Rational>,
    cost: Rational,
    rev: usize,
}

struct Residual {
    edges: Vec<ResidualEdge>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn add(&mut self, from: usize, to: usize, cap: Option<Rational>, cost: Rational) -> usize {
        let e = self.edges.len();
        self.edges.push(ResidualEdge {
            to,
            cap,
            cost: cost.clone(),
            rev: e + 1,
        });
        self.edges.push(ResidualEdge {
            to: from,
            cap: Some(Rational::zero()),
            cost: -cost,
            rev: e,
        });
        self.adj[from].push(e);
        self.adj[to].push(e + 1);
        e
    }

    fn has_room(&self, e: usize) -> bool {
        self.edges[e].cap.as_ref().is_none_or(|c| c.is_positive())
    }
}

pub fn min_cost_flow(net: &FlowNetwork) -> Result<FlowSolution> {
    let n = net.num_nodes();
    let source = n;
    let sink = n + 1;
    let mut g = Residual {
        edges: Vec::new(),
        adj: vec![Vec::new(); n + 2],
    };
    let arc_edges: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| g.add(a.tail, a.head, a.capacity.clone(), a.cost.clone()))
        .collect();
    let mut required = Rational::zero();
    for (v, s) in net.supplies.iter().enumerate() {
        if s.is_positive() {
            g.add(source, v, Some(s.clone()), Rational::zero());
            required += s;
        } else if s.is_negative() {
            g.add(v, sink, Some(-s.clone()), Rational::zero());
        }
    }

    let mut potential = vec![Rational::zero(); n + 2];
    let mut shipped = Rational::zero();
    while shipped < required {
        let (dist, parent) = shortest_paths(&g, &potential, source);
        let Some(sink_dist) = dist[sink].clone() else {
            return Err(Error::Infeasible);
        };
        for (p, d) in potential.iter_mut().zip(&dist) {
            match d {
                Some(d) if *d < sink_dist => *p += d,
                _ => *p += &sink_dist,
            }
        }

        let mut bottleneck = &required - &shipped;
        let mut v = sink;
        while v != source {
            let e = parent[v].expect("node on shortest path has a parent");
            if let Some(c) = &g.edges[e].cap {
                if *c < bottleneck {
                    bottleneck = c.clone();
                }
            }
            v = g.edges[g.edges[e].rev].to;
        }
        let mut v = sink;
        while v != source {
            let e = parent[v].expect("node on shortest path has a parent");
            if let Some(c) = &mut g.edges[e].cap {
                *c -= &bottleneck;
            }
            let r = g.edges[e].rev;
            if let Some(c) = &mut g.edges[r].cap {
                *c += &bottleneck;
            }
            v = g.edges[r].to;
        }
        shipped += bottleneck;
    }

    let flows: Vec<Rational> = arc_edges
        .iter()
        .map(|&e| {
            g.edges[g.edges[e].rev]
                .cap
                .clone()
                .expect("reverse residual edges are capacitated")
        })
        .collect();
    let cost = net
        .arcs
        .iter()
        .zip(&flows)
        .fold(Rational::zero(), |acc, (a, f)| acc + &a.cost * f);
    Ok(FlowSolution { cost, flows })
}

type Paths = (Vec<Option<Rational>>, Vec<Option<usize>>);

/// Dense Dijkstra on reduced costs. Ties go to the lowest node index and the
/// first edge in insertion order.
fn shortest_paths(g: &Residual, potential: &[Rational], source: usize) -> Paths {
    let n = g.adj.len();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    dist[source] = Some(Rational::zero());
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if best.is_none_or(|b| d < dist[b].as_ref().unwrap()) {
                    best = Some(v);
                }
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for &e in &g.adj[u] {
            if !g.has_room(e) {
                continue;
            }
            let edge = &g.edges[e];
            let v = edge.to;
            if done[v] {
                continue;
            }
            let candidate = &du + &edge.cost + &potential[u] - &potential[v];
            if dist[v].as_ref().is_none_or(|d| candidate < *d) {
                dist[v] = Some(candidate);
                parent[v] = Some(e);
            }
        }
    }
    (dist, parent)
}
