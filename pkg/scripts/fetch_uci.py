#!/usr/bin/env python3
"""Fetch the benchmark datasets from the UCI repository into data/.

The CSVs are not bundled with the repo (size and licensing); this script
documents the exact sources and preprocessing and materializes them in the
dialect the loader expects: comma-separated, header row, "?" for missing.

Per-dataset recipe (column names are ours; raw files have no headers):

  glass     glass.data; drop the leading Id column; target "type"
  bupa      bupa.data; target "selector"
  heart     heart.dat, space-separated -> commas; target "disease"
  balance   balance-scale.data; target "class" (first raw column)
  survival  haberman.data; target "survived5y"
  pima      pima-indians-diabetes.data; removed from UCI, fetched from the
            widely used jbrownlee/Datasets mirror; target "outcome"
  wine      wine.data; target "class" (first raw column); also available
            offline through scikit-learn's bundled copy
  letter    letter-recognition.data; target "letter" (first raw column)
  income    adult.data ("adult" a.k.a. census income); cells arrive comma+
            space separated and are stripped; target "income"
  bank      bank.zip -> bank-full.csv, semicolon-separated and quoted ->
            normalized; target "y"

Run:  python scripts/fetch_uci.py [--only name,name] [--data-dir data]
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

DATASETS = {
    "glass": {
        "url": f"{UCI}/glass/glass.data",
        "columns": ["id", "ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe",
                    "type"],
        "drop": ["id"],
        "target": "type",
        "rows": 214,
    },
    "bupa": {
        "url": f"{UCI}/liver-disorders/bupa.data",
        "columns": ["mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks",
                    "selector"],
        "target": "selector",
        "rows": 345,
    },
    "heart": {
        "url": f"{UCI}/statlog/heart/heart.dat",
        "columns": ["age", "sex", "chest_pain", "rest_bp", "cholesterol",
                    "fasting_sugar", "rest_ecg", "max_rate", "angina",
                    "oldpeak", "slope", "vessels", "thal", "disease"],
        "target": "disease",
        "separator": "whitespace",
        "rows": 270,
    },
    "balance": {
        "url": f"{UCI}/balance-scale/balance-scale.data",
        "columns": ["class", "left_weight", "left_distance", "right_weight",
                    "right_distance"],
        "target": "class",
        "rows": 625,
    },
    "survival": {
        "url": f"{UCI}/haberman/haberman.data",
        "columns": ["age", "year", "nodes", "survived5y"],
        "target": "survived5y",
        "rows": 306,
    },
    "pima": {
        "url": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
               "pima-indians-diabetes.data.csv",
        "columns": ["pregnancies", "glucose", "blood_pressure", "skin_thickness",
                    "insulin", "bmi", "pedigree", "age", "outcome"],
        "target": "outcome",
        "rows": 768,
    },
    "wine": {
        "url": f"{UCI}/wine/wine.data",
        "columns": ["class", "alcohol", "malic_acid", "ash", "alcalinity",
                    "magnesium", "total_phenols", "flavanoids",
                    "nonflavanoid_phenols", "proanthocyanins", "color_intensity",
                    "hue", "od280_od315", "proline"],
        "target": "class",
        "rows": 178,
    },
    "letter": {
        "url": f"{UCI}/letter-recognition/letter-recognition.data",
        "columns": ["letter", "xbox", "ybox", "width", "height", "onpix",
                    "xbar", "ybar", "x2bar", "y2bar", "xybar", "x2ybar",
                    "xy2bar", "xedge", "xedgey", "yedge", "yedgex"],
        "target": "letter",
        "rows": 20000,
    },
    "income": {
        "url": f"{UCI}/adult/adult.data",
        "columns": ["age", "workclass", "fnlwgt", "education", "education_num",
                    "marital_status", "occupation", "relationship", "race",
                    "sex", "capital_gain", "capital_loss", "hours_per_week",
                    "native_country", "income"],
        "target": "income",
        "rows": 32561,
    },
    "bank": {
        "url": "https://archive.ics.uci.edu/static/public/222/bank+marketing.zip",
        "columns": None,  # bank-full.csv ships its own header
        "target": "y",
        "zip_member": "bank-full.csv",
        "separator": ";",
        "rows": 45211,
    },
}


def download(url: str) -> bytes:
    print(f"  fetching {url}")
    with urllib.request.urlopen(url, timeout=120) as response:
        return response.read()


def extract_zip_member(payload: bytes, member: str) -> bytes:
    """Pull a file out of a (possibly nested) zip archive."""
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        names = zf.namelist()
        if member in names:
            return zf.read(member)
        for inner in names:
            if inner.endswith(".zip"):
                try:
                    return extract_zip_member(zf.read(inner), member)
                except KeyError:
                    continue
    raise KeyError(member)


def parse_rows(raw: str, spec: dict) -> list[list[str]]:
    sep = spec.get("separator", ",")
    rows = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line == ".":
            continue
        if sep == "whitespace":
            cells = line.split()
        else:
            cells = next(csv.reader(io.StringIO(line), delimiter=sep))
        rows.append([c.strip() for c in cells])
    return rows


def fetch_one(name: str, data_dir: Path) -> None:
    spec = DATASETS[name]
    print(f"{name}:")
    payload = download(spec["url"])
    if "zip_member" in spec:
        payload = extract_zip_member(payload, spec["zip_member"])
    raw = payload.decode("utf-8", errors="replace")
    rows = parse_rows(raw, spec)

    columns = spec["columns"]
    if columns is None:  # header included in the raw file
        columns, rows = rows[0], rows[1:]
        columns = [c.strip().strip('"') for c in columns]
    if spec.get("drop"):
        keep = [j for j, c in enumerate(columns) if c not in spec["drop"]]
        columns = [columns[j] for j in keep]
        rows = [[row[j] for j in keep] for row in rows]

    expected = spec["rows"]
    if len(rows) != expected:
        print(f"  WARNING: {len(rows)} rows, expected {expected}")
    bad = [r for r in rows if len(r) != len(columns)]
    if bad:
        raise SystemExit(f"{name}: {len(bad)} malformed rows")

    out = data_dir / f"{name}.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)
    print(f"  wrote {out} ({len(rows)} rows, target column "
          f"{spec['target']!r})")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", help="comma-separated subset of dataset names")
    parser.add_argument("--data-dir", default="data")
    args = parser.parse_args()
    names = list(DATASETS) if not args.only else \
        [n.strip() for n in args.only.split(",")]
    unknown = set(names) - set(DATASETS)
    if unknown:
        raise SystemExit(f"unknown dataset(s): {', '.join(sorted(unknown))}")
    data_dir = Path(args.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for name in names:
        try:
            fetch_one(name, data_dir)
        except Exception as exc:  # keep going; report at the end
            print(f"  FAILED: {exc}", file=sys.stderr)
            failures.append(name)
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
