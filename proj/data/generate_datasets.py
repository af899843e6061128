#!/usr/bin/env python3
# Copyright 2026 The lpnn Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the CSV files vendored in this directory.

iris.csv and breast_cancer.csv are written from scikit-learn's bundled
copies of the classic UCI tables. mushroom.csv is a seeded synthetic
stand-in with the UCI mushroom schema (22 categorical columns, 8124 rows,
'?' markers in stalk-root): the original file cannot be redistributed
here, so we sample from a fixed generative model whose class structure
mimics the well-known odor/spore-print rules. Running this script is
only needed when changing the data; the CSVs are checked in.
"""

import csv
import numpy as np

RNG_SEED = 20260809


def write_iris(path):
    from sklearn.datasets import load_iris

    d = load_iris()
    names = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(names + ["species"])
        for row, t in zip(d.data, d.target):
            w.writerow([f"{v:g}" for v in row] + [d.target_names[t]])


def write_breast_cancer(path):
    from sklearn.datasets import load_breast_cancer

    d = load_breast_cancer()
    names = [n.replace(" ", "_") for n in d.feature_names]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(names + ["diagnosis"])
        for row, t in zip(d.data, d.target):
            w.writerow([repr(float(v)) for v in row] + [d.target_names[t]])


MUSHROOM_COLUMNS = [
    ("cap-shape", list("bcxfks")),
    ("cap-surface", list("fgys")),
    ("cap-color", list("nbcgrpuewy")),
    ("bruises", list("tf")),
    ("odor", list("alcyfmnps")),
    ("gill-attachment", list("af")),
    ("gill-spacing", list("cw")),
    ("gill-size", list("bn")),
    ("gill-color", list("knbhgropuewy")),
    ("stalk-shape", list("et")),
    ("stalk-root", list("bcer?")),
    ("stalk-surface-above-ring", list("fyks")),
    ("stalk-surface-below-ring", list("fyks")),
    ("stalk-color-above-ring", list("nbcgopewy")),
    ("stalk-color-below-ring", list("nbcgopewy")),
    ("veil-type", list("p")),
    ("veil-color", list("nowy")),
    ("ring-number", list("not")),
    ("ring-type", list("eflnp")),
    ("spore-print-color", list("knbhrouwy")),
    ("population", list("acnsvy")),
    ("habitat", list("glmpuwd")),
]


def _pick(rng, values, probs):
    return values[rng.choice(len(values), p=probs)]


def write_mushroom(path, n_rows=8124):
    rng = np.random.default_rng(RNG_SEED)
    rows = []
    for _ in range(n_rows):
        poisonous = rng.random() < 0.482
        r = {}
        if poisonous:
            r["odor"] = _pick(rng, list("fyspcmn"),
                              [0.44, 0.18, 0.18, 0.08, 0.04, 0.02, 0.06])
        else:
            r["odor"] = _pick(rng, list("nal"), [0.72, 0.14, 0.14])

        # Poisonous caps with a neutral odor look edible on every other
        # feature; spore print r flags about a third of them.
        hidden = poisonous and r["odor"] == "n"
        if hidden:
            r["spore-print-color"] = _pick(
                rng, list("rknbhwu"), [0.35, 0.22, 0.21, 0.06, 0.06, 0.06, 0.04])
        if poisonous and not hidden:
            r["spore-print-color"] = _pick(
                rng, list("whknr"), [0.35, 0.28, 0.16, 0.16, 0.05])
            r["gill-size"] = _pick(rng, list("nb"), [0.65, 0.35])
            r["bruises"] = _pick(rng, list("ft"), [0.8, 0.2])
            r["gill-color"] = _pick(rng, list("bpwhgkn"),
                                    [0.3, 0.2, 0.2, 0.1, 0.1, 0.05, 0.05])
            r["ring-type"] = _pick(rng, list("eln"), [0.5, 0.3, 0.2])
            r["stalk-surface-above-ring"] = _pick(
                rng, list("ksfy"), [0.45, 0.25, 0.2, 0.1])
            r["population"] = _pick(rng, list("vsyca"),
                                    [0.4, 0.25, 0.2, 0.1, 0.05])
            r["habitat"] = _pick(rng, list("pudglm"),
                                 [0.3, 0.25, 0.15, 0.15, 0.1, 0.05])
        else:
            if not hidden:
                r["spore-print-color"] = _pick(
                    rng, list("knbhwu"), [0.33, 0.33, 0.1, 0.1, 0.08, 0.06])
            r["gill-size"] = _pick(rng, list("bn"), [0.75, 0.25])
            r["bruises"] = _pick(rng, list("tf"), [0.6, 0.4])
            r["gill-color"] = _pick(rng, list("wnkpghue"),
                                    [0.25, 0.2, 0.15, 0.15, 0.1, 0.05, 0.05, 0.05])
            r["ring-type"] = _pick(rng, list("pef"), [0.6, 0.3, 0.1])
            r["stalk-surface-above-ring"] = _pick(
                rng, list("sfyk"), [0.55, 0.25, 0.1, 0.1])
            r["population"] = _pick(rng, list("vynsac"),
                                    [0.25, 0.2, 0.2, 0.15, 0.1, 0.1])
            r["habitat"] = _pick(rng, list("dgmluw"),
                                 [0.35, 0.3, 0.15, 0.1, 0.05, 0.05])

        # class-independent plumage
        r["cap-shape"] = _pick(rng, list("xfbks c".replace(" ", "")),
                               [0.45, 0.35, 0.08, 0.08, 0.03, 0.01])
        r["cap-surface"] = _pick(rng, list("ysfg"), [0.4, 0.3, 0.28, 0.02])
        r["cap-color"] = _pick(rng, list("negywbupcr"),
                               [0.28, 0.20, 0.18, 0.13, 0.12, 0.02, 0.02, 0.02, 0.02, 0.01])
        r["gill-attachment"] = _pick(rng, list("fa"), [0.97, 0.03])
        r["gill-spacing"] = _pick(rng, list("cw"), [0.84, 0.16])
        r["stalk-shape"] = _pick(rng, list("te"), [0.57, 0.43])
        # stalk-root carries the '?' missing marker; the loader drops the column
        r["stalk-root"] = _pick(rng, list("b?ecr"), [0.45, 0.25, 0.15, 0.1, 0.05])
        r["stalk-surface-below-ring"] = _pick(rng, list("sfyk"),
                                              [0.45, 0.25, 0.17, 0.13])
        r["stalk-color-above-ring"] = _pick(rng, list("wpgnbeoyc"),
                                            [0.55, 0.22, 0.07, 0.06, 0.05, 0.02, 0.01, 0.01, 0.01])
        r["stalk-color-below-ring"] = _pick(rng, list("wpgnbeoyc"),
                                            [0.54, 0.23, 0.07, 0.06, 0.05, 0.02, 0.01, 0.01, 0.01])
        r["veil-type"] = "p"
        r["veil-color"] = _pick(rng, list("wnoy"), [0.97, 0.01, 0.01, 0.01])
        r["ring-number"] = _pick(rng, list("ont"), [0.92, 0.04, 0.04])

        rows.append([("p" if poisonous else "e")] +
                    [r[name] for name, _ in MUSHROOM_COLUMNS])

    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["class"] + [name for name, _ in MUSHROOM_COLUMNS])
        w.writerows(rows)


if __name__ == "__main__":
    write_iris("iris.csv")
    write_breast_cancer("breast_cancer.csv")
    write_mushroom("mushroom.csv")
    print("wrote iris.csv breast_cancer.csv mushroom.csv")
