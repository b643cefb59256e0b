//! Exact ear clipping for simple counter-clockwise polygons. Collinear
//! vertices along the boundary are kept, so neighbouring polygons that share
//! them stay edge-to-edge.

use super::{cross, Point, SurfaceError};

fn in_closed_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    cross(&b.sub(a), &p.sub(a)).sign() >= 0
        && cross(&c.sub(b), &p.sub(b)).sign() >= 0
        && cross(&a.sub(c), &p.sub(c)).sign() >= 0
}

/// Triangles as index triples into `poly`, each counter-clockwise.
pub fn ear_clip(poly: &[Point]) -> Result<Vec<[usize; 3]>, SurfaceError> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let (ip, ic, inx) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
            let (a, b, c) = (&poly[ip], &poly[ic], &poly[inx]);
            if cross(&b.sub(a), &c.sub(b)).sign() <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != ip && j != ic && j != inx && in_closed_triangle(&poly[j], a, b, c)
            });
            if blocked {
                continue;
            }
            out.push([ip, ic, inx]);
            idx.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(SurfaceError::Invalid("ear clipping found no ear".into()));
        }
    }
    let (a, b, c) = (&poly[idx[0]], &poly[idx[1]], &poly[idx[2]]);
    if cross(&b.sub(a), &c.sub(b)).sign() <= 0 {
        return Err(SurfaceError::Invalid("degenerate final triangle".into()));
    }
    out.push([idx[0], idx[1], idx[2]]);
    Ok(out)
}
