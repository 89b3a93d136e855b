"""Slow, independent re-derivations used to cross-check the evaluation code.

Everything here works from raw (truth, predicted) string pairs with exact
fractions; nothing is imported from the package's evaluation module.
"""

import random
from fractions import Fraction

from namegender.core import BackendId, GenderLabel, PersonRecord, Prediction

COUNTRIES = ["US", "DE", "IT", "CN", "BR", "KR", "GB", "IN", None]
SCORE_FOR = {"M": 0.7, "F": -0.7, "U": 0.0}


def brute_counts(pairs):
    """pairs: list of (truth in 'MF', predicted in 'MFU')."""
    cells = {}
    for truth in "FM":
        for pred in "FMU":
            cells[truth, pred] = sum(1 for t, p in pairs if t == truth and p == pred)
    return cells


def brute_metrics(pairs):
    c = brute_counts(pairs)
    n = len(pairs)

    def ratio(num, den):
        return (Fraction(1), True) if den == 0 else (Fraction(num, den), False)

    def f1(p, r):
        return Fraction(0) if p + r == 0 else 2 * p * r / (p + r)

    pred_f = c["F", "F"] + c["M", "F"]
    pred_m = c["M", "M"] + c["F", "M"]
    true_f = c["F", "F"] + c["F", "M"] + c["F", "U"]
    true_m = c["M", "M"] + c["M", "F"] + c["M", "U"]
    p_f, zpf = ratio(c["F", "F"], pred_f)
    p_m, zpm = ratio(c["M", "M"], pred_m)
    r_f, zrf = ratio(c["F", "F"], true_f)
    r_m, zrm = ratio(c["M", "M"], true_m)
    return {
        "cells": {
            "tp_f": c["F", "F"], "fp_f": c["M", "F"], "tp_m": c["M", "M"], "fp_m": c["F", "M"],
            "abstain_f": c["F", "U"], "abstain_m": c["M", "U"],
        },
        "precision_f": p_f, "recall_f": r_f, "f1_f": f1(p_f, r_f),
        "precision_m": p_m, "recall_m": r_m, "f1_m": f1(p_m, r_m),
        "accuracy": Fraction(c["F", "F"] + c["M", "M"], n),
        "coverage": Fraction(pred_f + pred_m, n),
        "n": n,
        "flags": (zpf, zpm, zrf, zrm),
    }


def brute_country(rows, min_instances):
    """rows: list of (country or None, truth, pred) for one method -> (instances, accuracy)."""
    raw = {}
    for country, _, _ in rows:
        raw[country] = raw.get(country, 0) + 1
    kept = {c for c, k in raw.items() if c is not None and k >= min_instances}
    buckets = {}
    for country, truth, pred in rows:
        key = country if country in kept else "other"
        total, good = buckets.get(key, (0, 0))
        buckets[key] = (total + 1, good + (truth == pred))
    names = sorted((k for k in buckets if k != "other"), key=lambda k: (-buckets[k][0], k))
    if "other" in buckets:
        names.append("other")
    return ({k: buckets[k][0] for k in names},
            {k: Fraction(buckets[k][1], buckets[k][0]) for k in names})


def random_rows(rng: random.Random, n: int):
    rows = []
    for _ in range(n):
        rows.append((rng.choice(COUNTRIES), rng.choice("FM"), rng.choice("FMU")))
    return rows


def to_records(rows, source=BackendId.GENDERIZE):
    out = []
    for i, (country, truth, pred) in enumerate(rows):
        person = PersonRecord(f"Person{i} X", country,
                              GenderLabel.FEMALE if truth == "F" else GenderLabel.MALE)
        out.append((person, Prediction.from_score(SCORE_FOR[pred], source)))
    return out
