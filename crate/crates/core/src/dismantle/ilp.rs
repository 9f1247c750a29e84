//! Integer program for choosing at most `k` nodes to remove, written in the
//! CPLEX LP text format, and a checker for assignments returned by external
//! solvers.
//!
//! Variables (node ids `i` are the graph's 0-based ids, component slots `j`
//! run `1..=n`, sizes `t` run `0..=n`):
//!
//! | name     | meaning                                   | domain      |
//! |----------|-------------------------------------------|-------------|
//! | `x_i_j`  | node `i` sits in component slot `j`       | binary      |
//! | `y_i`    | node `i` is removed                       | binary      |
//! | `m_j_t`  | slot `j` holds a component of size `t`    | binary      |
//! | `C_j`    | size of slot `j`                          | integer     |
//! | `S_t`    | number of slots of size `t`               | integer     |
//!
//! The objective `sum_t t * W_t * S_t - W_1 * sum_i y_i` counts every removed
//! node as a singleton slot and subtracts it again. Nothing pins a removed
//! node into its own slot, so the model's optimum may undercut the strength
//! of the induced residual graph when the weights are not monotone;
//! [`IlpCheck`] reports both values so the difference is visible.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::graph::{components, remove_nodes, Graph};
use crate::metrics::{sigma, WeightVector};
use crate::{Error, Result};

const TOL: f64 = 1e-6;
const TERMS_PER_LINE: usize = 8;

pub fn x_name(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

pub fn y_name(i: usize) -> String {
    format!("y_{i}")
}

pub fn m_name(j: usize, t: usize) -> String {
    format!("m_{j}_{t}")
}

pub fn c_name(j: usize) -> String {
    format!("C_{j}")
}

pub fn s_name(t: usize) -> String {
    format!("S_{t}")
}

/// Variable counts per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableCounts {
    pub x: usize,
    pub y: usize,
    pub m: usize,
    pub c: usize,
    pub s: usize,
}

#[derive(Clone, Debug)]
pub struct IlpModel<'a> {
    graph: &'a Graph,
    k: usize,
    /// `W_1..W_n` resolved through the weight vector's extension policy.
    weights: Vec<f64>,
}

impl<'a> IlpModel<'a> {
    pub fn new(graph: &'a Graph, k: usize, w: &WeightVector) -> Result<Self> {
        let n = graph.n();
        if k == 0 || k >= n {
            return Err(Error::InvalidBudget { k, n });
        }
        let weights = (1..=n).map(|t| w.get(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self { graph, k, weights })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    fn weight(&self, t: usize) -> f64 {
        self.weights[t - 1]
    }

    pub fn counts(&self) -> VariableCounts {
        let n = self.n();
        VariableCounts {
            x: n * n,
            y: n,
            m: n * (n + 1),
            c: n,
            s: n + 1,
        }
    }

    /// Coefficient of `S_t` in the objective.
    fn size_coefficient(&self, t: usize) -> f64 {
        t as f64 * self.weight(t)
    }

    /// Objective value of a (not necessarily feasible) assignment.
    fn objective_value(&self, sizes: &[i64], removed: usize) -> f64 {
        let mut total = 0.0;
        for t in 1..=self.n() {
            total += self.size_coefficient(t) * sizes[t] as f64;
        }
        total - self.weight(1) * removed as f64
    }

    /// Renders the model in CPLEX LP format.
    pub fn to_lp(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "\\ remove at most {} of {} nodes to minimize weighted component strength",
            self.k, n
        );
        out.push_str("Minimize\n");
        let mut terms: Vec<(f64, String)> = (1..=n)
            .map(|t| (self.size_coefficient(t), s_name(t)))
            .collect();
        terms.extend((0..n).map(|i| (-self.weight(1), y_name(i))));
        write_row(&mut out, "obj", &terms, None);

        out.push_str("Subject To\n");
        for &(u, v) in self.graph.edges() {
            for j in 1..=n {
                let le = [
                    (1.0, x_name(u, j)),
                    (-1.0, x_name(v, j)),
                    (-1.0, y_name(u)),
                    (-1.0, y_name(v)),
                ];
                write_row(
                    &mut out,
                    &format!("edge_le_{u}_{v}_{j}"),
                    &le,
                    Some(("<=", 0)),
                );
                let ge = [
                    (1.0, x_name(u, j)),
                    (-1.0, x_name(v, j)),
                    (1.0, y_name(u)),
                    (1.0, y_name(v)),
                ];
                write_row(
                    &mut out,
                    &format!("edge_ge_{u}_{v}_{j}"),
                    &ge,
                    Some((">=", 0)),
                );
            }
        }
        for i in 0..n {
            let terms: Vec<_> = (1..=n).map(|j| (1.0, x_name(i, j))).collect();
            write_row(&mut out, &format!("assign_{i}"), &terms, Some(("=", 1)));
        }
        for j in 1..=n {
            let mut terms = alloc::vec![(1.0, c_name(j))];
            terms.extend((0..n).map(|i| (-1.0, x_name(i, j))));
            write_row(&mut out, &format!("members_{j}"), &terms, Some(("=", 0)));
        }
        let budget: Vec<_> = (0..n).map(|i| (1.0, y_name(i))).collect();
        write_row(&mut out, "budget", &budget, Some(("<=", self.k as i64)));
        for j in 1..=n {
            let terms: Vec<_> = (0..=n).map(|t| (1.0, m_name(j, t))).collect();
            write_row(&mut out, &format!("pick_{j}"), &terms, Some(("=", 1)));
        }
        for j in 1..=n {
            let mut terms = alloc::vec![(1.0, c_name(j))];
            terms.extend((1..=n).map(|t| (-(t as f64), m_name(j, t))));
            write_row(&mut out, &format!("size_{j}"), &terms, Some(("=", 0)));
        }
        for t in 0..=n {
            let mut terms = alloc::vec![(1.0, s_name(t))];
            terms.extend((1..=n).map(|j| (-1.0, m_name(j, t))));
            write_row(&mut out, &format!("count_{t}"), &terms, Some(("=", 0)));
        }

        out.push_str("Bounds\n");
        for j in 1..=n {
            let _ = writeln!(out, " 0 <= {} <= {}", c_name(j), n);
        }
        for t in 0..=n {
            let _ = writeln!(out, " 0 <= {} <= {}", s_name(t), n);
        }

        out.push_str("General\n");
        let general: Vec<String> = (1..=n).map(c_name).chain((0..=n).map(s_name)).collect();
        write_names(&mut out, &general);

        out.push_str("Binary\n");
        let mut binary = Vec::with_capacity(n * n + n + n * (n + 1));
        for i in 0..n {
            for j in 1..=n {
                binary.push(x_name(i, j));
            }
        }
        binary.extend((0..n).map(y_name));
        for j in 1..=n {
            for t in 0..=n {
                binary.push(m_name(j, t));
            }
        }
        write_names(&mut out, &binary);
        out.push_str("End\n");
        out
    }

    /// Checks `assignment` against every constraint and evaluates it.
    pub fn verify(&self, assignment: &BTreeMap<String, f64>) -> Result<IlpCheck> {
        let n = self.n();
        let get = |name: String| -> Result<f64> {
            assignment
                .get(&name)
                .copied()
                .ok_or(Error::MissingVariable(name))
        };
        let binary = |name: String| -> Result<bool> {
            let v = get(name.clone())?;
            if (v - 0.0).abs() <= TOL {
                Ok(false)
            } else if (v - 1.0).abs() <= TOL {
                Ok(true)
            } else {
                Err(violation("binary", format!("{name} = {v}")))
            }
        };
        let integer = |name: String| -> Result<i64> {
            let v = get(name.clone())?;
            let r = libm::round(v);
            if (v - r).abs() > TOL {
                return Err(violation("integrality", format!("{name} = {v}")));
            }
            Ok(r as i64)
        };

        let mut x = alloc::vec![alloc::vec![false; n + 1]; n];
        for (i, row) in x.iter_mut().enumerate() {
            for j in 1..=n {
                row[j] = binary(x_name(i, j))?;
            }
        }
        let y = (0..n)
            .map(|i| binary(y_name(i)))
            .collect::<Result<Vec<_>>>()?;
        let mut m = alloc::vec![alloc::vec![false; n + 1]; n + 1];
        for (j, row) in m.iter_mut().enumerate().skip(1) {
            for t in 0..=n {
                row[t] = binary(m_name(j, t))?;
            }
        }
        let c = core::iter::once(Ok(0))
            .chain((1..=n).map(|j| integer(c_name(j))))
            .collect::<Result<Vec<_>>>()?;
        let s = (0..=n)
            .map(|t| integer(s_name(t)))
            .collect::<Result<Vec<_>>>()?;

        for &(u, v) in self.graph.edges() {
            let relax = i64::from(y[u]) + i64::from(y[v]);
            for j in 1..=n {
                let (xu, xv) = (i64::from(x[u][j]), i64::from(x[v][j]));
                if xu > xv + relax {
                    return Err(violation("edge-le", format!("edge {{{u}, {v}}}, slot {j}")));
                }
                if xu < xv - relax {
                    return Err(violation("edge-ge", format!("edge {{{u}, {v}}}, slot {j}")));
                }
            }
        }
        for (i, row) in x.iter().enumerate() {
            let slots = row.iter().filter(|&&b| b).count();
            if slots != 1 {
                return Err(violation(
                    "node-assignment",
                    format!("node {i} is in {slots} slots, expected exactly 1"),
                ));
            }
        }
        for j in 1..=n {
            let members = x.iter().filter(|row| row[j]).count() as i64;
            if c[j] != members {
                return Err(violation(
                    "slot-membership",
                    format!("{} = {} but slot holds {members} nodes", c_name(j), c[j]),
                ));
            }
        }
        let removed: Vec<usize> = (0..n).filter(|&i| y[i]).collect();
        if removed.len() > self.k {
            return Err(violation(
                "removal-budget",
                format!("{} nodes removed, budget {}", removed.len(), self.k),
            ));
        }
        for j in 1..=n {
            let picked = m[j].iter().filter(|&&b| b).count();
            if picked != 1 {
                return Err(violation(
                    "size-selection",
                    format!("slot {j} selects {picked} sizes"),
                ));
            }
            let t = m[j].iter().position(|&b| b).expect("one size selected") as i64;
            if c[j] != t {
                return Err(violation(
                    "size-link",
                    format!("{} = {} but m selects size {t}", c_name(j), c[j]),
                ));
            }
        }
        for t in 0..=n {
            let slots = (1..=n).filter(|&j| m[j][t]).count() as i64;
            if s[t] != slots {
                return Err(violation(
                    "size-count",
                    format!("{} = {} but {slots} slots have size {t}", s_name(t), s[t]),
                ));
            }
        }

        let objective = self.objective_value(&s, removed.len());
        let residual = remove_nodes(self.graph, &removed)?;
        let residual_value = if residual.n() == 0 {
            0.0
        } else {
            let w = WeightVector::new(self.weights.clone())?;
            sigma(&residual, &w)?.raw
        };
        Ok(IlpCheck {
            objective,
            removed,
            residual_value,
        })
    }

    /// A feasible assignment realizing the removal of `removed`: residual
    /// components fill the first slots (ordered by smallest member), each
    /// removed node gets its own singleton slot, the rest stay empty.
    pub fn assignment_for_removal(&self, removed: &[usize]) -> Result<BTreeMap<String, f64>> {
        let n = self.n();
        let residual = remove_nodes(self.graph, removed)?;
        let mut original = Vec::with_capacity(residual.n());
        let mut gone = alloc::vec![false; n];
        for &r in removed {
            gone[r] = true;
        }
        original.extend((0..n).filter(|&v| !gone[v]));
        let decomposition = components(&residual);

        let mut slot_of = alloc::vec![0usize; n];
        for (local, &comp) in decomposition.assignment.iter().enumerate() {
            slot_of[original[local]] = comp + 1;
        }
        let mut next = decomposition.count() + 1;
        let mut sorted: Vec<usize> = removed.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &r in &sorted {
            slot_of[r] = next;
            next += 1;
        }
        let mut slot_size = alloc::vec![0usize; n + 1];
        for &slot in &slot_of {
            slot_size[slot] += 1;
        }

        let mut a = BTreeMap::new();
        for i in 0..n {
            for j in 1..=n {
                a.insert(x_name(i, j), f64::from(u8::from(slot_of[i] == j)));
            }
            a.insert(y_name(i), f64::from(u8::from(gone[i])));
        }
        let mut count = alloc::vec![0usize; n + 1];
        for j in 1..=n {
            let size = slot_size[j];
            count[size] += 1;
            a.insert(c_name(j), size as f64);
            for t in 0..=n {
                a.insert(m_name(j, t), f64::from(u8::from(t == size)));
            }
        }
        for (t, &cnt) in count.iter().enumerate() {
            a.insert(s_name(t), cnt as f64);
        }
        Ok(a)
    }
}

/// Outcome of checking a solver assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct IlpCheck {
    /// Model objective evaluated on the assignment.
    pub objective: f64,
    /// Nodes with `y_i = 1`, ascending.
    pub removed: Vec<usize>,
    /// Weighted strength of the induced residual graph after removing them.
    pub residual_value: f64,
}

impl IlpCheck {
    /// `objective - residual_value`; nonzero when the assignment groups
    /// nodes differently from the residual graph's components.
    pub fn gap(&self) -> f64 {
        self.objective - self.residual_value
    }
}

fn violation(family: &'static str, detail: String) -> Error {
    Error::ConstraintViolation { family, detail }
}

pub fn emit_ilp(g: &Graph, k: usize, w: &WeightVector) -> Result<String> {
    Ok(IlpModel::new(g, k, w)?.to_lp())
}

pub fn verify_ilp_solution(
    g: &Graph,
    k: usize,
    w: &WeightVector,
    assignment: &BTreeMap<String, f64>,
) -> Result<IlpCheck> {
    IlpModel::new(g, k, w)?.verify(assignment)
}

fn write_row(out: &mut String, name: &str, terms: &[(f64, String)], rhs: Option<(&str, i64)>) {
    let _ = write!(out, " {name}:");
    for (idx, (coef, var)) in terms.iter().enumerate() {
        if idx > 0 && idx % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if *coef < 0.0 { '-' } else { '+' };
        let mag = coef.abs();
        if idx == 0 && sign == '+' {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag == 1.0 {
            out.push_str(var);
        } else {
            let _ = write!(out, "{mag} {var}");
        }
    }
    if let Some((op, value)) = rhs {
        let _ = write!(out, " {op} {value}");
    }
    out.push('\n');
}

fn write_names(out: &mut String, names: &[String]) {
    for chunk in names.chunks(TERMS_PER_LINE * 2) {
        out.push(' ');
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
}
