import csv
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

REPO_ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = REPO_ROOT / "data"

#: Table-1-style roster: file stem -> (target column, reference accuracies
#: as (gain-ratio, balanced-gain-ratio) percents).
UCI_REFERENCE = {
    "glass": ("type", (64.02, 65.42)),
    "bupa": ("selector", (60.58, 66.67)),
    "heart": ("disease", (78.15, 77.78)),
    "balance": ("class", (73.92, 77.60)),
    "survival": ("survived5y", (73.86, 72.87)),
    "pima": ("outcome", (72.79, 75.26)),
    "wine": ("class", (94.38, 94.38)),
    "letter": ("letter", (86.85, 87.40)),
    "income": ("income", (83.92, 84.26)),
    "bank": ("y", (89.87, 90.23)),
}


def dataset_path(name: str) -> Path | None:
    path = DATA_DIR / f"{name}.csv"
    return path if path.exists() else None


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.fixture
def make_csv(tmp_path):
    counter = [0]

    def _make(header, rows, name=None):
        counter[0] += 1
        return write_csv(tmp_path / (name or f"data{counter[0]}.csv"), header, rows)

    return _make


@pytest.fixture(scope="session")
def wine_csv(tmp_path_factory) -> Path:
    """The classic 178-sample wine chemistry dataset, written as CSV."""
    from sklearn.datasets import load_wine

    wine = load_wine()
    out = tmp_path_factory.mktemp("wine") / "wine.csv"
    header = [name.replace("/", "_") for name in wine.feature_names] + ["class"]
    rows = [[repr(float(v)) for v in x] + [wine.target_names[t]]
            for x, t in zip(wine.data, wine.target)]
    return write_csv(out, header, rows)


def toy_separable_rows(n_per_side=5):
    rows = []
    for i in range(n_per_side):
        rows.append([repr(-1.0 - i), "a"])
        rows.append([repr(1.0 + i), "b"])
    return rows


@pytest.fixture
def separable_csv(make_csv):
    return make_csv(["x", "cls"], toy_separable_rows())
