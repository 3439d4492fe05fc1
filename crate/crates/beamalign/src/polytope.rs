//! Newton polytopes and the Bernstein–Kushnirenko root bound.
//!
//! The exponent set of each truncated polynomial spans a lattice polygon;
//! the mixed volume of the two polygons bounds the number of isolated
//! common roots in the algebraic torus. In 2D the mixed volume reduces to
//! `Area(P ⊕ Q) - Area(P) - Area(Q)`, so everything here is exact integer
//! arithmetic: monotone-chain hulls, doubled shoelace areas, and a sorted
//! edge-vector merge for the Minkowski sum.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector as a lattice point.
pub type LatticePoint = (i64, i64);

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull of an exponent set: vertices in counter-clockwise order,
/// extreme points only, starting at the lexicographically smallest vertex.
/// Points and segments are valid degenerate hulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolytope {
    vertices: Vec<LatticePoint>,
}

impl NewtonPolytope {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Twice the enclosed area (shoelace); exact, nonnegative for the CCW
    /// orientation, zero for degenerate hulls.
    fn doubled_area(&self) -> i64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0;
        }
        let mut acc = 0i64;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            acc += p.0 * q.1 - q.0 * p.1;
        }
        acc
    }

    /// Cyclic edge vectors; empty for a point, two antiparallel vectors for
    /// a segment.
    fn edge_vectors(&self) -> Vec<LatticePoint> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let p = self.vertices[i];
                let q = self.vertices[(i + 1) % n];
                (q.0 - p.0, q.1 - p.1)
            })
            .collect()
    }

    /// Index of the bottom-most (then leftmost) vertex, the natural start
    /// for an angle-ordered edge walk.
    fn bottom_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            let b = self.vertices[best];
            if (v.1, v.0) < (b.1, b.0) {
                best = i;
            }
        }
        best
    }
}

/// Monotone-chain convex hull. Collinear boundary points are removed, so
/// the result carries extreme points only; idempotent by construction.
pub fn convex_hull(points: &[LatticePoint]) -> Result<NewtonPolytope> {
    if points.is_empty() {
        return Err(Error::Domain("convex hull of an empty point set".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(NewtonPolytope { vertices: pts });
    }
    // Strict turns only (cross <= 0 pops), which drops collinear points.
    let chain = |input: &[LatticePoint]| {
        let mut out: Vec<LatticePoint> = Vec::with_capacity(input.len());
        for &p in input {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 0 {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&pts);
    let rev: Vec<LatticePoint> = pts.iter().rev().copied().collect();
    let upper = chain(&rev);
    // Drop each chain's last point (it starts the other chain).
    lower.pop();
    let mut vertices = lower;
    vertices.extend_from_slice(&upper[..upper.len() - 1]);
    if vertices.len() < 2 {
        // Fully collinear input collapses to its two endpoints.
        vertices = vec![pts[0], *pts.last().unwrap()];
    }
    Ok(NewtonPolytope { vertices })
}

/// Euclidean area via the shoelace formula; 0 for points and segments.
pub fn polygon_area<T: Scalar>(p: &NewtonPolytope) -> T {
    T::from_i64(p.doubled_area()).unwrap() / (T::one() + T::one())
}

/// Angle order on edge vectors over [0, 2*pi), measured from the positive
/// x-axis: upper half-plane first, exact cross-product comparison within a
/// half-plane.
fn angle_cmp(u: LatticePoint, v: LatticePoint) -> std::cmp::Ordering {
    let half = |w: LatticePoint| usize::from(!(w.1 > 0 || (w.1 == 0 && w.0 > 0)));
    half(u).cmp(&half(v)).then_with(|| {
        let c = u.0 * v.1 - u.1 * v.0;
        0.cmp(&c)
    })
}

/// Minkowski sum by merging the two angle-sorted edge sequences, starting
/// from the sum of the bottom-most vertices; a final hull pass fuses
/// parallel edges. Commutative; a point summand translates the other
/// polytope.
pub fn minkowski_sum(p: &NewtonPolytope, q: &NewtonPolytope) -> NewtonPolytope {
    let bp = p.vertices[p.bottom_index()];
    let bq = q.vertices[q.bottom_index()];

    // Edge vectors in CCW walk order starting from the bottom vertex: both
    // sequences are already sorted by angle in [0, 2*pi).
    let rotate = |poly: &NewtonPolytope| -> Vec<LatticePoint> {
        let k = poly.bottom_index();
        let e = poly.edge_vectors();
        let n = e.len();
        (0..n).map(|i| e[(k + i) % n]).collect()
    };
    let ep = rotate(p);
    let eq = rotate(q);

    let mut cur = (bp.0 + bq.0, bp.1 + bq.1);
    let mut walk = vec![cur];
    let (mut i, mut j) = (0, 0);
    while i < ep.len() || j < eq.len() {
        let take_p = if i == ep.len() {
            false
        } else if j == eq.len() {
            true
        } else {
            angle_cmp(ep[i], eq[j]) != std::cmp::Ordering::Greater
        };
        let e = if take_p {
            i += 1;
            ep[i - 1]
        } else {
            j += 1;
            eq[j - 1]
        };
        cur = (cur.0 + e.0, cur.1 + e.1);
        walk.push(cur);
    }
    // The walk closes on its start; hulling canonicalizes and removes the
    // duplicate and any collinear break points from parallel edges.
    convex_hull(&walk).expect("walk is nonempty")
}

/// Bernstein–Kushnirenko bound on isolated torus roots:
/// `eta = MV(P1, P2) = Area(P1 ⊕ P2) - Area(P1) - Area(P2)`. Exact integer
/// arithmetic; the doubled mixed area of lattice polygons is even.
pub fn root_bound_eta(b1: &[LatticePoint], b2: &[LatticePoint]) -> Result<u64> {
    if b1.is_empty() || b2.is_empty() {
        return Err(Error::Domain("root bound needs nonempty supports".into()));
    }
    let p1 = convex_hull(b1)?;
    let p2 = convex_hull(b2)?;
    let sum = minkowski_sum(&p1, &p2);
    let doubled = sum.doubled_area() - p1.doubled_area() - p2.doubled_area();
    debug_assert!(doubled >= 0, "mixed volume must be nonnegative");
    debug_assert!(
        doubled % 2 == 0,
        "doubled mixed area of lattice polygons is even"
    );
    // Round to nearest just in case; exact division in practice.
    Ok(((doubled + 1) / 2).max(0) as u64)
}

/// The selection objective `eta + delta`.
pub fn objective_value<T: Scalar>(eta: u64, delta: T) -> T {
    T::from_u64(eta).unwrap() + delta
}
