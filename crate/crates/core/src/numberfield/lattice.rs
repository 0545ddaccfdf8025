use super::field::{AbelianFieldSpec, AlgebraicInt};

/// All totally positive integers of trace `t`, sorted by coordinates.
///
/// Each conjugate of such `nu` lies in `(0, t)`, so the coordinates lie in
/// the image of the open simplex under the inverse conjugate matrix. That
/// image is bounded in floating point and widened by one unit on each side;
/// membership is then decided exactly.
pub fn enumerate_tot_pos_trace(spec: &AbelianFieldSpec, t: i64) -> Vec<AlgebraicInt> {
    if t <= 0 {
        return Vec::new();
    }
    let pu = spec.degree() as usize;
    let boxes = coordinate_box(spec, t);
    let mut out = Vec::new();
    let mut x = vec![0i64; pu];
    scan(spec, t, &boxes, 0, 0, &mut x, &mut out);
    out.sort();
    out
}

fn scan(
    spec: &AbelianFieldSpec,
    t: i64,
    boxes: &[(i64, i64)],
    i: usize,
    partial: i64,
    x: &mut Vec<i64>,
    out: &mut Vec<AlgebraicInt>,
) {
    let pu = x.len();
    if i == pu - 1 {
        // trace = -sum x
        let last = -t - partial;
        if last < boxes[i].0 || last > boxes[i].1 {
            return;
        }
        x[i] = last;
        let nu = AlgebraicInt::new(x.clone());
        if spec.is_totally_positive(&nu) {
            out.push(nu);
        }
        return;
    }
    for v in boxes[i].0..=boxes[i].1 {
        x[i] = v;
        scan(spec, t, boxes, i + 1, partial + v, x, out);
    }
}

/// Conservative integer bounds on each coordinate of a totally positive
/// element of trace `t`.
fn coordinate_box(spec: &AbelianFieldSpec, t: i64) -> Vec<(i64, i64)> {
    let pu = spec.degree() as usize;
    let eta = spec.period_approximations();
    // conjugate r of sum x_i eta_i is sum_i x_i eta_{i+r}
    let m: Vec<Vec<f64>> = (0..pu)
        .map(|r| (0..pu).map(|i| eta[(i + r) % pu]).collect())
        .collect();
    let w = invert(&m);
    (0..pu)
        .map(|i| {
            let lo = (0..pu).map(|r| w[i][r]).fold(f64::INFINITY, f64::min).min(0.0);
            let hi = (0..pu).map(|r| w[i][r]).fold(f64::NEG_INFINITY, f64::max).max(0.0);
            let tf = t as f64;
            ((lo * tf).floor() as i64 - 1, (hi * tf).ceil() as i64 + 1)
        })
        .collect()
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                for c in 0..2 * n {
                    a[r][c] -= factor * a[col][c];
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}
