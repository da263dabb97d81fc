//! Minimum-cost circulation with edge lower bounds, and the reduction of
//! the hard-limit nomination problem to it.
//!
//! The solver removes lower bounds by pushing the forced flow up front,
//! saturates negative-cost edges so every residual cost is nonnegative,
//! then routes the resulting node imbalances from a super source to a
//! super sink by successive shortest paths (Dijkstra with potentials).
//! All capacities are integers, so every augmentation and the returned
//! flow are integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, Solution, SolveReport, Status, Variant, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowEdge {
    pub tail: usize,
    pub head: usize,
    pub lower: i64,
    pub capacity: i64,
    pub cost: f64,
}

/// Directed network with per-edge lower bound, capacity and cost, plus a
/// per-vertex supply (positive) or demand (negative). With all supplies
/// zero a feasible flow is a circulation.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    pub vertices: usize,
    pub edges: Vec<FlowEdge>,
    pub supply: Vec<i64>,
}

/// Integral flow per edge (edge order of the network) and its total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Circulation {
    pub flow: Vec<i64>,
    pub cost: f64,
}

impl FlowNetwork {
    pub fn new(vertices: usize) -> Self {
        Self {
            vertices,
            edges: Vec::new(),
            supply: vec![0; vertices],
        }
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, tail: usize, head: usize, lower: i64, capacity: i64, cost: f64) -> usize {
        self.edges.push(FlowEdge {
            tail,
            head,
            lower,
            capacity,
            cost,
        });
        self.edges.len() - 1
    }

    pub fn check(&self) -> Result<()> {
        if self.supply.len() != self.vertices {
            return Err(Error::MalformedNetwork(format!(
                "{} supply values for {} vertices",
                self.supply.len(),
                self.vertices
            )));
        }
        if self.supply.iter().sum::<i64>() != 0 {
            return Err(Error::MalformedNetwork("supplies do not sum to zero".into()));
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertices || e.head >= self.vertices {
                return Err(Error::MalformedNetwork(format!(
                    "edge {k} has an endpoint out of range"
                )));
            }
            if e.lower < 0 || e.lower > e.capacity {
                return Err(Error::MalformedNetwork(format!(
                    "edge {k} has lower {} and capacity {}",
                    e.lower, e.capacity
                )));
            }
            if !e.cost.is_finite() {
                return Err(Error::MalformedNetwork(format!("edge {k} has a non-finite cost")));
            }
        }
        Ok(())
    }

    /// Net outflow minus inflow at every vertex under `flow`.
    pub fn net_outflow(&self, flow: &[i64]) -> Vec<i64> {
        let mut net = vec![0; self.vertices];
        for (e, &f) in self.edges.iter().zip(flow) {
            net[e.tail] += f;
            net[e.head] -= f;
        }
        net
    }

    /// True when `flow` respects every bound and every vertex balance.
    pub fn is_feasible(&self, flow: &[i64]) -> bool {
        flow.len() == self.edges.len()
            && self
                .edges
                .iter()
                .zip(flow)
                .all(|(e, &f)| e.lower <= f && f <= e.capacity)
            && self.net_outflow(flow) == self.supply
    }

    pub fn cost_of(&self, flow: &[i64]) -> f64 {
        self.edges.iter().zip(flow).map(|(e, &f)| e.cost * f as f64).sum()
    }

    /// Edge-list dump with 1-based vertices.
    pub fn to_json_string(&self) -> String {
        let file = NetworkFile {
            format: FORMAT_VERSION,
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .map(|e| FlowEdge {
                    tail: e.tail + 1,
                    head: e.head + 1,
                    ..e.clone()
                })
                .collect(),
            supply: self.supply.clone(),
        };
        let mut s = serde_json::to_string(&file).expect("network serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct NetworkFile {
    format: u32,
    vertices: usize,
    edges: Vec<FlowEdge>,
    supply: Vec<i64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Queued {
    dist: f64,
    vertex: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    // reversed for a min-heap; ties by vertex index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(vertices: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); vertices],
        }
    }

    /// Adds an arc and its reverse; the reverse is always `arc ^ 1`.
    fn add(&mut self, tail: usize, head: usize, cap: i64, cost: f64) {
        let k = self.head.len();
        self.head.extend([head, tail]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[tail].push(k);
        self.adj[head].push(k + 1);
    }

    fn push(&mut self, arc: usize, amount: i64) {
        self.cap[arc] -= amount;
        self.cap[arc ^ 1] += amount;
    }
}

/// Minimum-cost integral flow meeting every lower bound, capacity and
/// vertex supply; `None` when no such flow exists.
pub fn min_cost_circulation(network: &FlowNetwork) -> Result<Option<Circulation>> {
    network.check()?;
    let n = network.vertices;
    let source = n;
    let sink = n + 1;
    let mut res = Residual::new(n + 2);
    let mut need = network.supply.clone();
    for e in &network.edges {
        res.add(e.tail, e.head, e.capacity - e.lower, e.cost);
        need[e.tail] -= e.lower;
        need[e.head] += e.lower;
    }
    for (k, e) in network.edges.iter().enumerate() {
        let arc = 2 * k;
        if e.cost < 0.0 && res.cap[arc] > 0 {
            let amount = res.cap[arc];
            res.push(arc, amount);
            need[e.tail] -= amount;
            need[e.head] += amount;
        }
    }
    let mut required = 0i64;
    for (v, &r) in need.iter().enumerate() {
        match r.cmp(&0) {
            Ordering::Greater => {
                res.add(source, v, r, 0.0);
                required += r;
            }
            Ordering::Less => res.add(v, sink, -r, 0.0),
            Ordering::Equal => {}
        }
    }

    // every residual cost is nonnegative here, so zero potentials are valid
    let mut potential = vec![0.0; n + 2];
    let mut dist = vec![f64::INFINITY; n + 2];
    let mut parent = vec![usize::MAX; n + 2];
    let mut done = vec![false; n + 2];
    let mut heap = BinaryHeap::new();
    let mut sent = 0i64;
    while sent < required {
        dist.fill(f64::INFINITY);
        parent.fill(usize::MAX);
        done.fill(false);
        heap.clear();
        dist[source] = 0.0;
        heap.push(Queued {
            dist: 0.0,
            vertex: source,
        });
        while let Some(Queued { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == sink {
                break;
            }
            for &arc in &res.adj[u] {
                if res.cap[arc] == 0 {
                    continue;
                }
                let v = res.head[arc];
                if done[v] {
                    continue;
                }
                let reduced = (res.cost[arc] + potential[u] - potential[v]).max(0.0);
                let nd = d + reduced;
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = arc;
                    heap.push(Queued { dist: nd, vertex: v });
                }
            }
        }
        if !done[sink] {
            return Ok(None);
        }
        let reach = dist[sink];
        for (pot, &d) in potential.iter_mut().zip(&dist) {
            *pot += d.min(reach);
        }
        let mut amount = required - sent;
        let mut v = sink;
        while v != source {
            let arc = parent[v];
            amount = amount.min(res.cap[arc]);
            v = res.head[arc ^ 1];
        }
        let mut v = sink;
        while v != source {
            let arc = parent[v];
            res.push(arc, amount);
            v = res.head[arc ^ 1];
        }
        sent += amount;
    }

    let flow: Vec<i64> = network
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| e.lower + res.cap[2 * k + 1])
        .collect();
    let cost = network.cost_of(&flow);
    Ok(Some(Circulation { flow, cost }))
}

/// The nomination network: source, target, one vertex per author and one
/// per paper. `pair_edges[k]` is the author-to-paper edge of the `k`-th
/// incident pair (paper-major order).
#[derive(Debug, Clone)]
pub struct NominationNetwork {
    pub network: FlowNetwork,
    pub pair_edges: Vec<usize>,
}

pub const SOURCE: usize = 0;
pub const TARGET: usize = 1;

pub fn author_vertex(j: usize) -> usize {
    j + 2
}

pub fn paper_vertex(instance: &Instance, i: usize) -> usize {
    instance.m() + 2 + i
}

/// Circulation network whose integral optima are exactly the optimal
/// nominations under the hard limit `b`:
/// source->author (cap b), author->paper (cap 1, cost p_j),
/// paper->target (lower = cap = 1), target->source (cap n).
pub fn build_hard_network(instance: &Instance, b: usize) -> Result<NominationNetwork> {
    instance.ensure_valid()?;
    if b == 0 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    let (n, m) = (instance.n(), instance.m());
    let mut net = FlowNetwork::new(n + m + 2);
    let cap = i64::try_from(b).unwrap_or(i64::MAX);
    for j in 0..m {
        net.add_edge(SOURCE, author_vertex(j), 0, cap, 0.0);
    }
    let p = instance.p();
    let pair_edges = instance
        .pairs()
        .map(|(i, j)| net.add_edge(author_vertex(j), paper_vertex(instance, i), 0, 1, p[j]))
        .collect();
    for i in 0..n {
        net.add_edge(paper_vertex(instance, i), TARGET, 1, 1, 0.0);
    }
    net.add_edge(TARGET, SOURCE, 0, n as i64, 0.0);
    Ok(NominationNetwork {
        network: net,
        pair_edges,
    })
}

impl NominationNetwork {
    /// Reads `x_ij` off the author-to-paper edges.
    pub fn extract(&self, instance: &Instance, circulation: &Circulation) -> Result<Assignment> {
        let mut nominee = Vec::with_capacity(instance.n());
        for i in 0..instance.n() {
            let start = instance.pair_offset(i);
            let authors = instance.authors(i);
            let chosen: Vec<usize> = authors
                .iter()
                .enumerate()
                .filter(|&(k, _)| circulation.flow[self.pair_edges[start + k]] == 1)
                .map(|(_, &j)| j)
                .collect();
            match chosen.as_slice() {
                [j] => nominee.push(*j),
                _ => {
                    return Err(Error::Numerical(format!(
                        "paper {} carries {} units of flow",
                        i + 1,
                        chosen.len()
                    )))
                }
            }
        }
        Ok(Assignment::new(nominee))
    }
}

/// Exact solver for the hard-limit problem via the circulation reduction.
pub fn solve_hard(instance: &Instance, b: usize) -> Result<Solution> {
    let variant = Variant::Hard { b };
    let net = build_hard_network(instance, b)?;
    let Some(circ) = min_cost_circulation(&net.network)? else {
        return Ok(Solution {
            assignment: None,
            report: SolveReport::infeasible(variant, "flow"),
        });
    };
    let assignment = net.extract(instance, &circ)?;
    let report = SolveReport::for_assignment(instance, &assignment, variant, "flow", None, Status::Optimal)?;
    if report.loads.as_ref().is_some_and(|l| l.iter().any(|&x| x > b)) {
        return Err(Error::Numerical("extracted nomination exceeds the limit".into()));
    }
    Ok(Solution {
        assignment: Some(assignment),
        report,
    })
}
