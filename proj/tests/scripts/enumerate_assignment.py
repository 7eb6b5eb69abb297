#!/usr/bin/env python3
# Copyright 2026 The piou Authors.
# SPDX-License-Identifier: Apache-2.0

"""Independent brute-force enumeration of assignment counts.

Reads a COCO-style annotation file, projects every pyramid location to the
image, scores it against every ground-truth box with the closed-form
Pseudo-IoU (or centerness), and prints per-image and aggregate counts. Used to
produce the frozen expectations in the C++ test suites.
"""

import argparse
import json
import math
from fractions import Fraction


def cell_centers(extent, stride):
    n = -(-extent // stride)
    out = []
    for i in range(n):
        start = i * stride
        if start + stride <= extent:
            out.append(Fraction(start) + Fraction(stride, 2))
        else:
            out.append(Fraction(start) + Fraction(extent - start, 2))
    return out


def pseudo_iou(l, r, t, b):
    w, h = l + r, t + b
    s = (Fraction(1, 2) + min(l, r) / w) * (Fraction(1, 2) + min(t, b) / h)
    return s / (2 - s)


def centerness(l, r, t, b):
    return math.sqrt((min(l, r) / max(l, r)) * (min(t, b) / max(t, b)))


def load(path):
    doc = json.load(open(path))
    images = {img["id"]: dict(img, boxes=[]) for img in doc["images"]}
    for ann in doc["annotations"]:
        if ann.get("iscrowd", 0):
            continue
        x, y, w, h = (Fraction(v).limit_denominator(10**9) for v in ann["bbox"])
        if w <= 0 or h <= 0:
            continue
        img = images[ann["image_id"]]
        box = (max(x, 0), max(y, 0), min(x + w, img["width"]), min(y + h, img["height"]))
        if box[2] <= box[0] or box[3] <= box[1]:
            continue
        img["boxes"].append(box)
    return [images[i["id"]] for i in doc["images"]]


def enumerate_image(img, strides, metric, threshold):
    per_gt = [0] * len(img["boxes"])
    total = 0
    for s in strides:
        for y in cell_centers(img["height"], s):
            for x in cell_centers(img["width"], s):
                total += 1
                best = None
                for k, (x0, y0, x1, y1) in enumerate(img["boxes"]):
                    l, r, t, b = x - x0, x1 - x, y - y0, y1 - y
                    if min(l, r, t, b) < 0:
                        continue
                    v = pseudo_iou(l, r, t, b) if metric == "pseudo-iou" else centerness(l, r, t, b)
                    area = (x1 - x0) * (y1 - y0)
                    key = (-v, area, k)
                    if best is None or key < best[0]:
                        best = (key, k, v)
                if best is not None and best[2] >= threshold:
                    per_gt[best[1]] += 1
    return total, per_gt


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("annotations")
    ap.add_argument("--metric", default="pseudo-iou")
    ap.add_argument("--threshold", default="0.4")
    ap.add_argument("--strides", default="8,16,32,64,128")
    args = ap.parse_args()
    strides = [int(s) for s in args.strides.split(",")]
    threshold = Fraction(args.threshold)
    agg_total = agg_pos = agg_zero = 0
    for img in load(args.annotations):
        total, per_gt = enumerate_image(img, strides, args.metric, threshold)
        pos = sum(per_gt)
        zero = sum(1 for c in per_gt if c == 0)
        print(f"image {img['id']}: points={total} positive={pos} per_gt={per_gt} zero={zero}")
        agg_total += total
        agg_pos += pos
        agg_zero += zero
    print(f"aggregate: points={agg_total} positive={agg_pos} zero={agg_zero}")


if __name__ == "__main__":
    main()
