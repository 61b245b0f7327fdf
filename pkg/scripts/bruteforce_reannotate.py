#!/usr/bin/env python3
"""Re-derive per-barrier labels for a corpus directly from its CSV files.

Deliberately independent of the newsbarriers package: plain dict lookups and
math over pairs.csv, countries.csv, publishers.csv, and concepts.jsonl. Used
to cross-check pipeline annotation output.

Usage:
    python3 scripts/bruteforce_reannotate.py CORPUS_DIR [-o labels.csv] [--threshold 0.9]

Output rows: pair_index, article_id, barrier, label (TRUE / FALSE / DROPPED),
one row per barrier for every propagated pair whose publishers are known and
whose source article has concepts.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

BARRIERS = ("economic", "cultural", "geographical", "timezone", "political")
EPSILON = 1e-6

ECONOMIC_COLUMNS = [
    "Rank", "Safety-Security", "Personal-Freedom", "Governance", "Social-Capital",
    "Investment-Environment", "Enterprise-Conditions", "Market-Infrastructure",
    "Economic-Quality", "Living-Conditions", "Health", "Education", "Natural-Environment",
]
CULTURAL_COLUMNS = [
    "Power-Distance", "Uncertainty-Avoidance-By-Individuals", "Individualistic-Cultures",
    "Masculinity-Femininity", "Long-Term-Orientation", "Indulgence-Restraint",
]


def read_countries(path):
    countries = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            code = row["country_code"].strip().upper()
            countries[code] = {
                "economic": [float(row[c]) for c in ECONOMIC_COLUMNS],
                "cultural": [float(row[c]) for c in CULTURAL_COLUMNS],
                "lat": float(row["latitude"]),
                "lon": float(row["longitude"]),
                "utc": int(float(row["utc_offset"])),
            }
    return countries


def read_publishers(path):
    publishers = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            alignment = "-".join(row["political_alignment"].strip().lower().split()) or None
            publishers[row["publisher_uri"].strip().lower()] = {
                "country": row["country_code"].strip().upper(),
                "alignment": alignment,
            }
    return publishers


def read_concepts(path):
    concepts = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            concepts.setdefault(record["article"], set()).update(record["concepts"])
    return concepts


def cosine(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    return dot / (math.sqrt(sum(a * a for a in u)) * math.sqrt(sum(b * b for b in v)))


def label_pair(src, dst, countries, barrier, threshold):
    """TRUE / FALSE / DROPPED for one propagated pair and one barrier."""
    if barrier == "political":
        if src["alignment"] is None or dst["alignment"] is None:
            return "DROPPED"
        return "TRUE" if src["alignment"] != dst["alignment"] else "FALSE"
    a = countries.get(src["country"])
    b = countries.get(dst["country"])
    if a is None or b is None:
        return "DROPPED"
    if barrier == "timezone":
        return "TRUE" if a["utc"] != b["utc"] else "FALSE"
    if barrier == "geographical":
        same = src["country"] == dst["country"] or (
            abs(a["lat"] - b["lat"]) <= EPSILON and abs(a["lon"] - b["lon"]) <= EPSILON
        )
        return "FALSE" if same else "TRUE"
    key = "economic" if barrier == "economic" else "cultural"
    return "FALSE" if cosine(a[key], b[key]) > threshold else "TRUE"


def reannotate(corpus_dir, threshold):
    corpus = Path(corpus_dir)
    countries = read_countries(corpus / "countries.csv")
    publishers = read_publishers(corpus / "publishers.csv")
    concepts = read_concepts(corpus / "concepts.jsonl")

    rows = []
    with open(corpus / "pairs.csv", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, skipinitialspace=True)
        for index, row in enumerate(reader):
            if row["Class"].strip().lower() != "information-propagated":
                continue
            src = publishers.get(row["from-pub-uri"].strip().lower())
            dst = publishers.get(row["to-pub-uri"].strip().lower())
            if src is None or dst is None:
                continue
            article = row["from"].strip()
            if not concepts.get(article):
                continue
            for barrier in BARRIERS:
                rows.append((index, article, barrier, label_pair(src, dst, countries, barrier, threshold)))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus", help="directory with pairs.csv, countries.csv, publishers.csv, concepts.jsonl")
    parser.add_argument("-o", "--out", help="output CSV path (default: stdout)")
    parser.add_argument("--threshold", type=float, default=0.9)
    args = parser.parse_args(argv)

    rows = reannotate(args.corpus, args.threshold)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(("pair_index", "article_id", "barrier", "label"))
    writer.writerows(rows)
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
