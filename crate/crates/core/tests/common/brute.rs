//! Slow, direct reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

/// Pixel sets of the 4- or 8-connected components of `mask` (row-major),
/// by breadth-first flood fill, in raster order of their first pixel.
pub fn flood_fill(h: usize, w: usize, mask: &[bool], eight: bool) -> Vec<Vec<(usize, usize)>> {
    let mut seen = vec![false; h * w];
    let mut out = Vec::new();
    for start in 0..h * w {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let (r, c) = (p / w, p % w);
            comp.push((r, c));
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if (dr == 0 && dc == 0) || (!eight && dr != 0 && dc != 0) {
                        continue;
                    }
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let q = nr as usize * w + nc as usize;
                    if mask[q] && !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// `P(Bin(n, p) >= k)` by summing the pmf with exact binomial coefficients.
pub fn binomial_tail_direct(n: u64, k: u64, p: f64) -> f64 {
    let choose = |n: u64, k: u64| -> u128 {
        let mut c: u128 = 1;
        for i in 0..k.min(n - k) {
            c = c * u128::from(n - i) / u128::from(i + 1);
        }
        c
    };
    (k..=n)
        .map(|i| choose(n, i) as f64 * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32))
        .sum()
}

/// Inverse of a 3×3 row-major matrix by cofactors.
pub fn inverse3(m: &[f64; 9]) -> [f64; 9] {
    let [a, b, c, d, e, f, g, h, i] = *m;
    let det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    let adj = [
        e * i - f * h,
        c * h - b * i,
        b * f - c * e,
        f * g - d * i,
        a * i - c * g,
        c * d - a * f,
        d * h - e * g,
        b * g - a * h,
        a * e - b * d,
    ];
    adj.map(|v| v / det)
}

/// Box as `(x_min, y_min, x_max, y_max)`, inclusive.
pub type RawBox = (u32, u32, u32, u32);

fn pixels(b: RawBox) -> HashSet<(u32, u32)> {
    let mut s = HashSet::new();
    for y in b.1..=b.3 {
        for x in b.0..=b.2 {
            s.insert((x, y));
        }
    }
    s
}

/// IoU by counting pixels.
pub fn iou_pixels(a: RawBox, b: RawBox) -> f64 {
    let pa = pixels(a);
    let pb = pixels(b);
    let inter = pa.intersection(&pb).count();
    let union = pa.union(&pb).count();
    inter as f64 / union as f64
}

#[derive(Debug, Clone)]
pub struct Det {
    pub image: u32,
    pub bbox: RawBox,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct Gt {
    pub image: u32,
    pub bbox: RawBox,
}

/// Greedy matching replayed step by step: repeatedly take the highest-scoring
/// unvisited detection (lowest index on ties), scan every ground truth and
/// keep the best eligible one. Returns `(det, gt)` pairs in visiting order and
/// the unmatched detections.
pub fn greedy_trace(dets: &[Det], gts: &[Gt], iou_min: f64) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut visited = vec![false; dets.len()];
    let mut taken = vec![false; gts.len()];
    let mut pairs = Vec::new();
    let mut fps = Vec::new();
    for _ in 0..dets.len() {
        let mut next: Option<usize> = None;
        for (i, d) in dets.iter().enumerate() {
            if visited[i] {
                continue;
            }
            if next.is_none_or(|n| d.score > dets[n].score) {
                next = Some(i);
            }
        }
        let d = next.unwrap();
        visited[d] = true;
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in gts.iter().enumerate() {
            if taken[g] || gt.image != dets[d].image {
                continue;
            }
            let v = iou_pixels(dets[d].bbox, gt.bbox);
            if v < iou_min {
                continue;
            }
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((g, v));
            }
        }
        match best {
            Some((g, _)) => {
                taken[g] = true;
                pairs.push((d, g));
            }
            None => fps.push(d),
        }
    }
    (pairs, fps)
}

/// All-point interpolated AP by sweeping every distinct score threshold and
/// re-matching the retained detections from scratch.
pub fn ap_threshold_sweep(dets: &[Det], gts: &[Gt], iou_min: f64) -> f64 {
    if gts.is_empty() {
        return 0.0;
    }
    let mut levels: Vec<f64> = dets.iter().map(|d| d.score).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for t in levels {
        let kept: Vec<Det> = dets.iter().filter(|d| d.score >= t).cloned().collect();
        let (pairs, _) = greedy_trace(&kept, gts, iou_min);
        let recall = pairs.len() as f64 / gts.len() as f64;
        let precision = pairs.len() as f64 / kept.len() as f64;
        points.push((recall, precision));
    }
    let mut recalls: Vec<f64> = points.iter().map(|p| p.0).collect();
    recalls.sort_by(f64::total_cmp);
    recalls.dedup();
    let mut ap = 0.0;
    let mut prev = 0.0;
    for r in recalls {
        let p = points
            .iter()
            .filter(|q| q.0 >= r)
            .map(|q| q.1)
            .fold(0.0, f64::max);
        ap += (r - prev) * p;
        prev = r;
    }
    ap
}
