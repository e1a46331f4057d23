//! 2-SAT via the implication graph and Tarjan's SCC algorithm.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    pub fn not(self) -> Lit {
        Lit { var: self.var, positive: !self.positive }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatProblem {
    pub vars: usize,
    pub clauses: Vec<(Lit, Lit)>,
}

impl TwoSatProblem {
    pub fn new(vars: usize) -> TwoSatProblem {
        TwoSatProblem { vars, clauses: Vec::new() }
    }

    pub fn new_var(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    pub fn clause(&mut self, a: Lit, b: Lit) {
        assert!(a.var < self.vars && b.var < self.vars, "literal references an undeclared variable");
        self.clauses.push((a, b));
    }

    pub fn unit(&mut self, a: Lit) {
        self.clause(a, a);
    }

    pub fn implies(&mut self, a: Lit, b: Lit) {
        self.clause(a.not(), b);
    }

    pub fn equal(&mut self, a: Lit, b: Lit) {
        self.implies(a, b);
        self.implies(b, a);
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        let val = |l: Lit| assignment[l.var] == l.positive;
        self.clauses.iter().all(|&(a, b)| val(a) || val(b))
    }
}

/// A satisfying assignment, or `None` when unsatisfiable.
pub fn two_sat_solve(p: &TwoSatProblem) -> Option<Vec<bool>> {
    let n = 2 * p.vars;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &p.clauses {
        adj[a.not().node()].push(b.node());
        adj[b.not().node()].push(a.node());
    }
    let comp = tarjan(&adj);
    let mut out = Vec::with_capacity(p.vars);
    for v in 0..p.vars {
        let (t, f) = (comp[2 * v], comp[2 * v + 1]);
        if t == f {
            return None;
        }
        // Tarjan numbers components in reverse topological order
        out.push(t < f);
    }
    Some(out)
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSET; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for s in 0..n {
        if index[s] != UNSET {
            continue;
        }
        call.push((s, 0));
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                let w = adj[v][i];
                call.last_mut().unwrap().1 += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    call.push((w, 0));
                } else if comp[w] == UNSET {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}
