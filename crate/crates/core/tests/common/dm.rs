//! Classical Dulmage–Mendelsohn decomposition of a 0/1 pattern by maximum
//! matching, alternating reachability and strongly connected components.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Hopcroft–Karp. Returns (row → col, col → row).
pub fn max_matching(adj: &[Vec<usize>], ncols: usize) -> (Vec<usize>, Vec<usize>) {
    let nrows = adj.len();
    let mut mr = vec![NIL; nrows];
    let mut mc = vec![NIL; ncols];
    loop {
        // BFS layers from free rows
        let mut dist = vec![usize::MAX; nrows];
        let mut q = VecDeque::new();
        for r in 0..nrows {
            if mr[r] == NIL {
                dist[r] = 0;
                q.push_back(r);
            }
        }
        let mut found = false;
        while let Some(r) = q.pop_front() {
            for &c in &adj[r] {
                let r2 = mc[c];
                if r2 == NIL {
                    found = true;
                } else if dist[r2] == usize::MAX {
                    dist[r2] = dist[r] + 1;
                    q.push_back(r2);
                }
            }
        }
        if !found {
            return (mr, mc);
        }
        fn dfs(
            r: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            mr: &mut [usize],
            mc: &mut [usize],
        ) -> bool {
            for &c in &adj[r] {
                let r2 = mc[c];
                if r2 == NIL || (dist[r2] == dist[r] + 1 && dfs(r2, adj, dist, mr, mc)) {
                    mr[r] = c;
                    mc[c] = r;
                    return true;
                }
            }
            dist[r] = usize::MAX;
            false
        }
        for r in 0..nrows {
            if mr[r] == NIL {
                dfs(r, adj, &mut dist, &mut mr, &mut mc);
            }
        }
    }
}

/// Tarjan's SCC on a digraph given by adjacency lists.
fn sccs(g: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        g: &'a [Vec<usize>],
        idx: Vec<usize>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St, v: usize) {
        s.idx[v] = s.next;
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for i in 0..s.g[v].len() {
            let w = s.g[v][i];
            if s.idx[w] == usize::MAX {
                visit(s, w);
                s.low[v] = s.low[v].min(s.low[w]);
            } else if s.on[w] {
                s.low[v] = s.low[v].min(s.idx[w]);
            }
        }
        if s.low[v] == s.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = g.len();
    let mut s = St {
        g,
        idx: vec![usize::MAX; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: vec![],
        next: 0,
        out: vec![],
    };
    for v in 0..n {
        if s.idx[v] == usize::MAX {
            visit(&mut s, v);
        }
    }
    s.out
}

/// Sizes `(rows, cols)` of the DM blocks of the pattern, sorted, empty tails dropped.
pub fn dm_block_sizes(pattern: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let nrows = pattern.len();
    let ncols = pattern.first().map_or(0, |r| r.len());
    let adj: Vec<Vec<usize>> = pattern
        .iter()
        .map(|r| (0..ncols).filter(|&j| r[j]).collect())
        .collect();
    let mut cadj = vec![Vec::new(); ncols];
    for (i, r) in adj.iter().enumerate() {
        for &j in r {
            cadj[j].push(i);
        }
    }
    let (mr, mc) = max_matching(&adj, ncols);
    // rows reachable from free rows: row -> col by edge, col -> row by matching
    let mut r0 = vec![false; nrows];
    let mut c0 = vec![false; ncols];
    let mut q: VecDeque<usize> = (0..nrows).filter(|&r| mr[r] == NIL).collect();
    q.iter().for_each(|&r| r0[r] = true);
    while let Some(r) = q.pop_front() {
        for &c in &adj[r] {
            if !c0[c] {
                c0[c] = true;
                let r2 = mc[c];
                if r2 != NIL && !r0[r2] {
                    r0[r2] = true;
                    q.push_back(r2);
                }
            }
        }
    }
    // columns reachable from free columns: col -> row by edge, row -> col by matching
    let mut ri = vec![false; nrows];
    let mut ci = vec![false; ncols];
    let mut q: VecDeque<usize> = (0..ncols).filter(|&c| mc[c] == NIL).collect();
    q.iter().for_each(|&c| ci[c] = true);
    while let Some(c) = q.pop_front() {
        for &r in &cadj[c] {
            if !ri[r] {
                ri[r] = true;
                let c2 = mr[r];
                if c2 != NIL && !ci[c2] {
                    ci[c2] = true;
                    q.push_back(c2);
                }
            }
        }
    }
    let mut out = Vec::new();
    let t0 = (
        r0.iter().filter(|&&b| b).count(),
        c0.iter().filter(|&&b| b).count(),
    );
    let ti = (
        ri.iter().filter(|&&b| b).count(),
        ci.iter().filter(|&&b| b).count(),
    );
    for t in [t0, ti] {
        if t.0 + t.1 > 0 {
            out.push(t);
        }
    }
    // the rest is perfectly matched; SCCs of row -> matched row through shared columns
    let rest: Vec<usize> = (0..nrows).filter(|&r| !r0[r] && !ri[r]).collect();
    let pos: std::collections::HashMap<usize, usize> =
        rest.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let g: Vec<Vec<usize>> = rest
        .iter()
        .map(|&r| {
            adj[r]
                .iter()
                .filter_map(|&c| pos.get(&mc[c]).copied())
                .collect()
        })
        .collect();
    for comp in sccs(&g) {
        out.push((comp.len(), comp.len()));
    }
    out.sort();
    out
}
