use crate::error::{Error, Result};
use crate::rauzy_graph::Direction;
use crate::words::{Factor, Rope};

use super::model::Scheme;

/// A chain of edge numbers.
pub type SchemePath = Vec<u32>;

pub fn check_path(s: &Scheme, path: &[u32]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidPath("empty path".into()));
    }
    for &n in path {
        s.edge(n)?;
    }
    for w in path.windows(2) {
        if s.e(w[0]).head != s.e(w[1]).tail {
            return Err(Error::InvalidPath(format!("edge {} does not continue edge {}", w[1], w[0])));
        }
    }
    Ok(())
}

/// Starts at a collecting vertex and ends at a distributing one.
pub fn is_symmetric(s: &Scheme, path: &[u32]) -> bool {
    check_path(s, path).is_ok()
        && s.is_collecting(s.e(path[0]).tail)
        && s.is_distributing(s.e(*path.last().unwrap()).head)
}

/// `ω₁ ++ ω₂` with the shared label written once.
pub fn glue(mut left: Rope, right: Factor, overlap: u64) -> Rope {
    left.push(right.drop_front(overlap));
    left
}

/// The word read along a path, consecutive edge words glued on the shared labels.
pub fn path_word(s: &Scheme, path: &[u32]) -> Rope {
    let mut r = Rope::from_factor(s.e(path[0]).word);
    for &n in &path[1..] {
        let e = s.e(n);
        r = glue(r, e.word, s.label(e.tail).len);
    }
    r
}

pub fn natural_extension(s: &Scheme, path: &[u32], dir: Direction) -> Result<SchemePath> {
    check_path(s, path)?;
    let mut out = path.to_vec();
    let mut steps = 0;
    match dir {
        Direction::Right => {
            while !s.is_distributing(s.e(*out.last().unwrap()).head) {
                let head = s.e(*out.last().unwrap()).head;
                let &[next] = s.out_edges(head) else {
                    return Err(Error::InvalidPath(format!("vertex {head} has no unique out-edge")));
                };
                out.push(next);
                steps += 1;
                if steps > s.edge_count() {
                    return Err(Error::GraphIsCycle);
                }
            }
        }
        Direction::Left => {
            while !s.is_collecting(s.e(out[0]).tail) {
                let tail = s.e(out[0]).tail;
                let &[prev] = s.in_edges(tail) else {
                    return Err(Error::InvalidPath(format!("vertex {tail} has no unique in-edge")));
                };
                out.insert(0, prev);
                steps += 1;
                if steps > s.edge_count() {
                    return Err(Error::GraphIsCycle);
                }
            }
        }
    }
    Ok(out)
}

/// Word of the right natural extension of `e`, without the tail label when
/// the tail distributes.
pub fn front(s: &Scheme, number: u32) -> Result<Rope> {
    let ext = natural_extension(s, &[number], Direction::Right)?;
    let w = path_word(s, &ext);
    let tail = s.edge(number)?.tail;
    Ok(if s.is_distributing(tail) { w.drop_front(s.label(tail).len) } else { w })
}

/// Word of the left natural extension of `e`, without the head label when
/// the head collects.
pub fn back(s: &Scheme, number: u32) -> Result<Rope> {
    let ext = natural_extension(s, &[number], Direction::Left)?;
    let w = path_word(s, &ext);
    let head = s.edge(number)?.head;
    Ok(if s.is_collecting(head) { w.drop_back(s.label(head).len) } else { w })
}

/// Front and back words of a path.
///
/// The front word concatenates the fronts of the first edge and of every edge
/// leaving a distributing vertex; the back word concatenates the backs of
/// every edge entering a collecting vertex and of the last edge.
pub fn path_words(s: &Scheme, path: &[u32]) -> Result<(Rope, Rope)> {
    check_path(s, path)?;
    let mut f = Rope::new();
    let mut b = Rope::new();
    for (i, &n) in path.iter().enumerate() {
        let e = s.e(n);
        if i == 0 || s.is_distributing(e.tail) {
            f.append(&front(s, n)?);
        }
        if i + 1 == path.len() || s.is_collecting(e.head) {
            b.append(&back(s, n)?);
        }
    }
    Ok((f, b))
}

/// Every symmetric path with at most `max_edges` edges, in lexicographic order of numbers.
pub fn symmetric_paths(s: &Scheme, max_edges: usize) -> Vec<SchemePath> {
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn walk(s: &Scheme, max: usize, stack: &mut Vec<u32>, out: &mut Vec<SchemePath>) {
        let head = s.e(*stack.last().unwrap()).head;
        if s.is_distributing(head) {
            out.push(stack.clone());
        }
        if stack.len() == max {
            return;
        }
        for &n in s.out_edges(head) {
            stack.push(n);
            walk(s, max, stack, out);
            stack.pop();
        }
    }
    if max_edges == 0 {
        return out;
    }
    for e in s.edges() {
        if s.is_collecting(e.tail) {
            stack.push(e.number);
            walk(s, max_edges, &mut stack, &mut out);
            stack.pop();
        }
    }
    out
}

/// Minimal symmetric path containing the edge.
pub fn symmetric_closure(s: &Scheme, number: u32) -> Result<SchemePath> {
    let left = natural_extension(s, &[number], Direction::Left)?;
    natural_extension(s, &left, Direction::Right)
}

/// Number of (possibly overlapping) occurrences of `needle` as a consecutive run in `hay`.
pub fn count_subpath(needle: &[u32], hay: &[u32]) -> usize {
    if needle.is_empty() || needle.len() > hay.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|w| *w == needle).count()
}
