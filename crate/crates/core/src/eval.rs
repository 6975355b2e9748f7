//! Object-level evaluation: IoU matching, precision / recall / F1 and
//! all-point interpolated average precision.
//!
//! Boxes use inclusive pixel coordinates, so a box's width is
//! `x_max - x_min + 1`. Detections only ever match ground truths of the same
//! `image_id`; average precision pools all images (single class).

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default IoU needed for a true positive.
pub const DEFAULT_IOU_MIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBox {
    pub x_min: u32,
    pub y_min: u32,
    pub x_max: u32,
    pub y_max: u32,
}

impl BBox {
    pub fn new(x_min: u32, y_min: u32, x_max: u32, y_max: u32) -> Result<Self> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::InvalidParameter(format!(
                "invalid box ({x_min}, {y_min}, {x_max}, {y_max})"
            )));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn width(&self) -> u64 {
        u64::from(self.x_max - self.x_min) + 1
    }

    pub fn height(&self) -> u64 {
        u64::from(self.y_max - self.y_min) + 1
    }

    pub fn area(&self) -> u64 {
        self.width() * self.height()
    }

    pub fn intersection(&self, other: &BBox) -> u64 {
        let x0 = self.x_min.max(other.x_min);
        let x1 = self.x_max.min(other.x_max);
        let y0 = self.y_min.max(other.y_min);
        let y1 = self.y_max.min(other.y_max);
        if x0 > x1 || y0 > y1 {
            return 0;
        }
        (u64::from(x1 - x0) + 1) * (u64::from(y1 - y0) + 1)
    }
}

/// Intersection over union in pixel areas.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection(b);
    let union = a.area() + b.area() - inter;
    inter as f64 / union as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthBox {
    pub image_id: String,
    pub bbox: BBox,
    /// Pixel count of the source object.
    pub extent: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDetection {
    pub image_id: String,
    pub bbox: BBox,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchResult {
    /// `(detection index, ground truth index)`, in processing order.
    pub true_positives: Vec<(usize, usize)>,
    pub false_positives: Vec<usize>,
    pub false_negatives: Vec<usize>,
}

/// Detection indices by descending score; ties keep input order.
fn ranking(dets: &[ScoredDetection]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].score.total_cmp(&dets[a].score));
    order
}

/// Greedy one-to-one matching.
///
/// Detections are visited by descending score. Each takes the unmatched
/// ground truth of its image with the highest IoU `>= iou_min`, the lowest
/// ground-truth index winning ties. A detection that finds nothing, including
/// a second detection on an already matched object, is a false positive.
pub fn match_detections(
    dets: &[ScoredDetection],
    gts: &[GroundTruthBox],
    iou_min: f64,
) -> MatchResult {
    let mut by_image: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, g) in gts.iter().enumerate() {
        by_image.entry(g.image_id.as_str()).or_default().push(i);
    }
    let mut matched = vec![false; gts.len()];
    let mut result = MatchResult::default();
    for d in ranking(dets) {
        let det = &dets[d];
        let mut best: Option<(usize, f64)> = None;
        for &g in by_image.get(det.image_id.as_str()).into_iter().flatten() {
            if matched[g] {
                continue;
            }
            let v = iou(&det.bbox, &gts[g].bbox);
            if v >= iou_min && best.is_none_or(|(_, b)| v > b) {
                best = Some((g, v));
            }
        }
        match best {
            Some((g, _)) => {
                matched[g] = true;
                result.true_positives.push((d, g));
            }
            None => result.false_positives.push(d),
        }
    }
    result.false_negatives = (0..gts.len()).filter(|g| !matched[*g]).collect();
    result
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub ap: f64,
    pub iou_min: f64,
    /// `(recall, precision)` at every distinct score threshold, from the
    /// highest score down.
    pub pr_samples: Vec<(f64, f64)>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// `(recall, precision)` after each distinct score level.
///
/// Greedy matching visits detections by descending score, so the matching of
/// the detections retained at a threshold is a prefix of the full matching.
pub fn pr_curve(dets: &[ScoredDetection], gts: &[GroundTruthBox], iou_min: f64) -> Vec<(f64, f64)> {
    let result = match_detections(dets, gts, iou_min);
    let mut is_tp = vec![false; dets.len()];
    for &(d, _) in &result.true_positives {
        is_tp[d] = true;
    }
    let order = ranking(dets);
    let mut samples = Vec::new();
    let (mut tp, mut seen) = (0usize, 0usize);
    for (pos, &d) in order.iter().enumerate() {
        seen += 1;
        tp += usize::from(is_tp[d]);
        let last_of_level = order
            .get(pos + 1)
            .is_none_or(|&next| dets[next].score != dets[d].score);
        if last_of_level {
            samples.push((ratio(tp, gts.len()), ratio(tp, seen)));
        }
    }
    samples
}

/// Area under the PR curve with precision made monotone from the right:
/// `sum_i (r_i - r_{i-1}) · max_{j >= i} p_j`, starting from `r_0 = 0`.
pub fn ap_from_samples(samples: &[(f64, f64)]) -> f64 {
    let mut interp: Vec<f64> = samples.iter().map(|s| s.1).collect();
    for i in (0..interp.len().saturating_sub(1)).rev() {
        interp[i] = interp[i].max(interp[i + 1]);
    }
    let mut prev = 0.0;
    let mut ap = 0.0;
    for ((r, _), p) in samples.iter().zip(&interp) {
        ap += (r - prev) * p;
        prev = *r;
    }
    ap
}

pub fn average_precision(dets: &[ScoredDetection], gts: &[GroundTruthBox], iou_min: f64) -> f64 {
    ap_from_samples(&pr_curve(dets, gts, iou_min))
}

/// Single-point precision, recall and F1 of the whole detection set, plus AP
/// and the PR samples over its scores.
pub fn f1_at_epsilon(dets: &[ScoredDetection], gts: &[GroundTruthBox], iou_min: f64) -> EvalReport {
    let m = match_detections(dets, gts, iou_min);
    let tp = m.true_positives.len();
    let fp = m.false_positives.len();
    let fn_ = m.false_negatives.len();
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let pr_samples = pr_curve(dets, gts, iou_min);
    EvalReport {
        tp,
        fp,
        fn_,
        precision,
        recall,
        f1: f1_score(precision, recall),
        ap: ap_from_samples(&pr_samples),
        iou_min,
        pr_samples,
    }
}

// CSV formats

pub const DETECTIONS_HEADER: [&str; 8] = [
    "image_id",
    "x_min",
    "y_min",
    "x_max",
    "y_max",
    "log10_nfa",
    "score",
    "pixel_count",
];

pub const GROUND_TRUTH_HEADER: [&str; 6] =
    ["image_id", "x_min", "y_min", "x_max", "y_max", "extent"];

/// One row of the detections CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub image_id: String,
    pub x_min: u32,
    pub y_min: u32,
    pub x_max: u32,
    pub y_max: u32,
    pub log10_nfa: f64,
    pub score: f64,
    pub pixel_count: u64,
}

impl DetectionRecord {
    pub fn from_detection(image_id: &str, d: &crate::detect::Detection) -> Self {
        Self {
            image_id: image_id.to_string(),
            x_min: d.bbox.x_min,
            y_min: d.bbox.y_min,
            x_max: d.bbox.x_max,
            y_max: d.bbox.y_max,
            log10_nfa: d.log10_nfa,
            score: d.score,
            pixel_count: d.pixel_count as u64,
        }
    }

    pub fn bbox(&self) -> Result<BBox> {
        BBox::new(self.x_min, self.y_min, self.x_max, self.y_max)
    }

    pub fn to_scored(&self) -> Result<ScoredDetection> {
        Ok(ScoredDetection {
            image_id: self.image_id.clone(),
            bbox: self.bbox()?,
            score: self.score,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GroundTruthRecord {
    image_id: String,
    x_min: u32,
    y_min: u32,
    x_max: u32,
    y_max: u32,
    extent: u64,
}

fn check_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Malformed(format!(
            "expected CSV header '{}', found '{}'",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

pub fn write_detections_csv(w: impl Write, rows: &[DetectionRecord]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record(DETECTIONS_HEADER)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_detections_csv(r: impl Read) -> Result<Vec<DetectionRecord>> {
    let mut reader = csv::Reader::from_reader(r);
    check_header(&mut reader, &DETECTIONS_HEADER)?;
    let rows: Vec<DetectionRecord> = reader.deserialize().collect::<Result<_, _>>()?;
    for row in &rows {
        row.bbox()?;
        if !row.score.is_finite() {
            return Err(Error::Malformed(format!(
                "non-finite score for {}",
                row.image_id
            )));
        }
    }
    Ok(rows)
}

pub fn write_ground_truth_csv(w: impl Write, gts: &[GroundTruthBox]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record(GROUND_TRUTH_HEADER)?;
    for g in gts {
        writer.serialize(GroundTruthRecord {
            image_id: g.image_id.clone(),
            x_min: g.bbox.x_min,
            y_min: g.bbox.y_min,
            x_max: g.bbox.x_max,
            y_max: g.bbox.y_max,
            extent: g.extent,
        })?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_ground_truth_csv(r: impl Read) -> Result<Vec<GroundTruthBox>> {
    let mut reader = csv::Reader::from_reader(r);
    check_header(&mut reader, &GROUND_TRUTH_HEADER)?;
    let mut out = Vec::new();
    for rec in reader.deserialize::<GroundTruthRecord>() {
        let rec = rec?;
        if rec.extent == 0 {
            return Err(Error::Malformed(format!(
                "zero extent for {}",
                rec.image_id
            )));
        }
        out.push(GroundTruthBox {
            bbox: BBox::new(rec.x_min, rec.y_min, rec.x_max, rec.y_max)?,
            image_id: rec.image_id,
            extent: rec.extent,
        });
    }
    Ok(out)
}

/// `recall,precision` rows.
pub fn write_pr_csv(w: impl Write, samples: &[(f64, f64)]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    writer.write_record(["recall", "precision"])?;
    for (r, p) in samples {
        writer.write_record([r.to_string(), p.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bx(x0: u32, y0: u32, x1: u32, y1: u32) -> BBox {
        BBox::new(x0, y0, x1, y1).unwrap()
    }

    fn det(b: BBox, score: f64) -> ScoredDetection {
        ScoredDetection {
            image_id: "a".into(),
            bbox: b,
            score,
        }
    }

    fn gt(b: BBox) -> GroundTruthBox {
        GroundTruthBox {
            image_id: "a".into(),
            bbox: b,
            extent: b.area(),
        }
    }

    #[test]
    fn iou_examples() {
        let a = bx(0, 0, 9, 9);
        assert_eq!(iou(&a, &a), 1.0);
        assert_eq!(iou(&a, &bx(10, 0, 12, 3)), 0.0);
        assert!((iou(&a, &bx(5, 5, 14, 14)) - 1.0 / 7.0).abs() < 1e-15);
        assert!(BBox::new(3, 0, 2, 0).is_err());
    }

    #[test]
    fn single_match() {
        // IoU 50/100 = 0.5
        let m = match_detections(&[det(bx(0, 0, 9, 4), 0.9)], &[gt(bx(0, 0, 9, 9))], 0.05);
        assert_eq!(m.true_positives, vec![(0, 0)]);
        assert!(m.false_positives.is_empty() && m.false_negatives.is_empty());
    }

    #[test]
    fn duplicate_detection_is_false_positive() {
        let g = [gt(bx(0, 0, 4, 4))];
        let d = [det(bx(0, 0, 4, 4), 0.5), det(bx(1, 1, 4, 4), 0.9)];
        let m = match_detections(&d, &g, 0.05);
        assert_eq!(m.true_positives, vec![(1, 0)]);
        assert_eq!(m.false_positives, vec![0]);
    }

    #[test]
    fn other_images_never_match() {
        let g = [GroundTruthBox {
            image_id: "b".into(),
            bbox: bx(0, 0, 4, 4),
            extent: 25,
        }];
        let m = match_detections(&[det(bx(0, 0, 4, 4), 1.0)], &g, 0.05);
        assert_eq!(m.false_positives, vec![0]);
        assert_eq!(m.false_negatives, vec![0]);
    }

    #[test]
    fn iou_threshold_is_inclusive() {
        // 1 px inside a 5x5 truth: IoU 1/25 = 0.04
        let g = [gt(bx(0, 0, 4, 4))];
        let d = [det(bx(2, 2, 2, 2), 1.0)];
        assert_eq!(match_detections(&d, &g, 0.05).true_positives.len(), 0);
        assert_eq!(match_detections(&d, &g, 0.04).true_positives.len(), 1);
    }

    #[test]
    fn ap_examples() {
        let g = [gt(bx(0, 0, 4, 4)), gt(bx(20, 20, 24, 24))];
        let perfect = [det(bx(0, 0, 4, 4), 0.9), det(bx(20, 20, 24, 24), 0.3)];
        assert_eq!(average_precision(&perfect, &g, 0.05), 1.0);

        let none = [det(bx(50, 50, 52, 52), 0.9)];
        assert_eq!(average_precision(&none, &g, 0.05), 0.0);
        assert_eq!(average_precision(&[], &g, 0.05), 0.0);

        let mixed = [
            det(bx(0, 0, 4, 4), 0.9),
            det(bx(50, 50, 52, 52), 0.8),
            det(bx(20, 20, 24, 24), 0.7),
        ];
        assert!((average_precision(&mixed, &g, 0.05) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(
            pr_curve(&mixed, &g, 0.05),
            vec![(0.5, 1.0), (0.5, 0.5), (1.0, 2.0 / 3.0)]
        );
    }

    #[test]
    fn tied_scores_form_one_threshold() {
        let g = [gt(bx(0, 0, 4, 4))];
        let d = [det(bx(50, 50, 52, 52), 0.5), det(bx(0, 0, 4, 4), 0.5)];
        assert_eq!(pr_curve(&d, &g, 0.05), vec![(1.0, 0.5)]);
        assert_eq!(average_precision(&d, &g, 0.05), 0.5);
    }

    #[test]
    fn f1_examples() {
        let g = [gt(bx(0, 0, 4, 4))];
        let r = f1_at_epsilon(&[det(bx(0, 0, 4, 4), 1.0)], &g, 0.05);
        assert_eq!((r.tp, r.fp, r.fn_, r.f1), (1, 0, 0, 1.0));

        let r = f1_at_epsilon(&[det(bx(40, 40, 44, 44), 1.0)], &g, 0.05);
        assert_eq!((r.tp, r.f1), (0, 0.0));

        let r = f1_at_epsilon(&[], &[], 0.05);
        assert_eq!((r.precision, r.recall, r.f1, r.ap), (0.0, 0.0, 0.0, 0.0));

        assert!((f1_score(0.8, 0.8) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn counts_from_eight_two_two() {
        // 10 truths, 8 hit, 2 spurious detections
        let gts: Vec<_> = (0..10).map(|i| gt(bx(i * 10, 0, i * 10 + 4, 4))).collect();
        let mut dets: Vec<_> = (0..8)
            .map(|i| det(bx(i * 10, 0, i * 10 + 4, 4), 1.0 - i as f64 * 0.01))
            .collect();
        dets.push(det(bx(0, 100, 2, 102), 0.5));
        dets.push(det(bx(10, 100, 12, 102), 0.4));
        let r = f1_at_epsilon(&dets, &gts, 0.05);
        assert_eq!((r.tp, r.fp, r.fn_), (8, 2, 2));
        assert!((r.precision - 0.8).abs() < 1e-15);
        assert!((r.recall - 0.8).abs() < 1e-15);
        assert!((r.f1 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_and_header_check() {
        let rows = vec![DetectionRecord {
            image_id: "img_1".into(),
            x_min: 1,
            y_min: 2,
            x_max: 3,
            y_max: 4,
            log10_nfa: -1.25,
            score: 0.777_f64,
            pixel_count: 5,
        }];
        let mut buf = Vec::new();
        write_detections_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("image_id,x_min,y_min,x_max,y_max,log10_nfa,score,pixel_count\n"));
        assert_eq!(read_detections_csv(buf.as_slice()).unwrap(), rows);

        let bad = "image_id,x_min,y_min,x_max,y_max,extent\na,0,0,1,1,4\n";
        assert!(read_detections_csv(bad.as_bytes()).is_err());
        let gts = read_ground_truth_csv(bad.as_bytes()).unwrap();
        assert_eq!(gts[0].bbox.area(), 4);
        let inverted = "image_id,x_min,y_min,x_max,y_max,extent\na,2,0,1,1,4\n";
        assert!(read_ground_truth_csv(inverted.as_bytes()).is_err());
    }

    #[test]
    fn empty_detections_csv_is_header_only() {
        let mut buf = Vec::new();
        write_detections_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "image_id,x_min,y_min,x_max,y_max,log10_nfa,score,pixel_count\n"
        );
        assert!(read_detections_csv(buf.as_slice()).unwrap().is_empty());
    }
}
