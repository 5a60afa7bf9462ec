"""Asset universe and per-scenario return/investment data.

Assets are unique (technology, country) combinations tagged Secured or
Merchant.  A ScenarioSet holds an m-by-n return matrix and an m-by-n
investment matrix (currency per production unit); all investment entries
must be strictly positive.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataFormatError, ValidationError


class Category(str, Enum):
    SECURED = "Secured"
    MERCHANT = "Merchant"


_LABEL_RE = re.compile(r"^T(\d+)_C(\d+)_(Secured|Merchant)$")


@dataclass(frozen=True)
class Asset:
    """One investable asset: a (technology, country) pair with a category."""

    id: int
    technology: int
    country: int
    category: Category
    max_production: float = math.inf
    capex_per_unit: float = 1.0

    def __post_init__(self) -> None:
        if self.technology < 1:
            raise ValidationError(f"technology index must be >= 1, got {self.technology}")
        if self.country < 1:
            raise ValidationError(f"country index must be >= 1, got {self.country}")
        if self.max_production < 0:
            raise ValidationError(f"max_production must be >= 0, got {self.max_production}")
        if not self.capex_per_unit > 0:
            raise ValidationError(f"capex_per_unit must be > 0, got {self.capex_per_unit}")

    @property
    def label(self) -> str:
        return f"T{self.technology}_C{self.country}_{self.category.value}"


def asset_label(asset: Asset) -> str:
    """Render the canonical ``T{t}_C{c}_{Category}`` label."""
    return asset.label


def parse_asset_label(label: str) -> tuple[int, int, Category]:
    match = _LABEL_RE.match(label)
    if match is None:
        raise DataFormatError(f"malformed asset label {label!r}")
    return int(match.group(1)), int(match.group(2)), Category(match.group(3))


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    """Immutable bundle of assets plus return and investment matrices."""

    assets: tuple[Asset, ...]
    returns: np.ndarray
    investments: np.ndarray

    def __post_init__(self) -> None:
        returns = np.asarray(self.returns, dtype=float)
        investments = np.asarray(self.investments, dtype=float)
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "investments", investments)

        n = len(self.assets)
        if n == 0:
            raise ValidationError("assets must be non-empty")
        for matrix, name in ((returns, "returns"), (investments, "investments")):
            if matrix.ndim != 2:
                raise ValidationError(f"{name} must be a 2-d matrix")
            if matrix.shape[1] != n:
                raise ValidationError(
                    f"{name} has {matrix.shape[1]} columns, expected {n} (one per asset)"
                )
        if returns.shape[0] != investments.shape[0]:
            raise ValidationError(
                f"returns has {returns.shape[0]} rows but investments has "
                f"{investments.shape[0]}"
            )
        if returns.shape[0] == 0:
            raise ValidationError("at least one scenario is required")
        if not np.all(np.isfinite(returns)):
            raise ValidationError("returns contains a non-finite entry")
        if not np.all(np.isfinite(investments)):
            raise ValidationError("investments contains a non-finite entry")
        bad = np.argwhere(investments <= 0)
        if bad.size:
            s, i = bad[0]
            raise ValidationError(f"non-positive investment at ({s},{i})")
        seen: set[tuple[int, int, Category]] = set()
        for asset in self.assets:
            key = (asset.technology, asset.country, asset.category)
            if key in seen:
                raise ValidationError(f"duplicate asset {asset.label}")
            seen.add(key)
        returns.setflags(write=False)
        investments.setflags(write=False)

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    @property
    def n_scenarios(self) -> int:
        return self.returns.shape[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.assets)

    @property
    def ratios(self) -> np.ndarray:
        """Per-scenario, per-asset ratio of return to investment."""
        return self.returns / self.investments

    def mean_ratios(self) -> np.ndarray:
        return self.ratios.mean(axis=0)

    def subset(self, indices: Sequence[int]) -> "ScenarioSet":
        """Restrict to the given asset columns (re-indexed from 0)."""
        idx = list(indices)
        assets = tuple(
            replace(self.assets[i], id=k) for k, i in enumerate(idx)
        )
        return ScenarioSet(assets, self.returns[:, idx], self.investments[:, idx])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScenarioSet):
            return NotImplemented
        return (
            self.assets == other.assets
            and np.array_equal(self.returns, other.returns)
            and np.array_equal(self.investments, other.investments)
        )


@dataclass(frozen=True)
class CategoryDispersion:
    """Relative standard deviations of the lognormal scenario noise."""

    return_sigma: float
    investment_sigma: float

    def __post_init__(self) -> None:
        if self.return_sigma < 0:
            raise ValidationError(f"return_sigma must be >= 0, got {self.return_sigma}")
        if self.investment_sigma < 0:
            raise ValidationError(
                f"investment_sigma must be >= 0, got {self.investment_sigma}"
            )


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of the synthetic universe and scenario sampler.

    Each (technology, country) pair becomes one asset; the default category
    rule alternates Secured/Merchant on the parity of t + c so both
    categories cover every technology, and ``categories`` overrides it with
    an explicit assignment in (t, c) iteration order.  Per-unit investment
    is lognormal around the asset's CAPEX, returns are lognormal around
    target_roi * CAPEX, with the category's dispersion.
    """

    n_technologies: int = 3
    n_countries: int = 2
    n_scenarios: int = 100
    secured: CategoryDispersion = CategoryDispersion(0.05, 0.05)
    merchant: CategoryDispersion = CategoryDispersion(0.30, 0.25)
    roi_band: tuple[float, float] = (0.06, 0.22)
    capex_band: tuple[float, float] = (0.8, 1.25)
    categories: tuple[Category, ...] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_technologies < 1:
            raise ValidationError(f"n_technologies must be >= 1, got {self.n_technologies}")
        if self.n_countries < 1:
            raise ValidationError(f"n_countries must be >= 1, got {self.n_countries}")
        if self.n_scenarios < 1:
            raise ValidationError(f"n_scenarios must be >= 1, got {self.n_scenarios}")
        if self.categories is not None and len(self.categories) != self.n_assets:
            raise ValidationError(
                f"categories lists {len(self.categories)} entries, expected {self.n_assets}"
            )
        if not (self.secured.return_sigma < self.merchant.return_sigma):
            raise ValidationError(
                "secured.return_sigma must be below merchant.return_sigma "
                f"({self.secured.return_sigma} vs {self.merchant.return_sigma})"
            )
        if not (self.secured.investment_sigma < self.merchant.investment_sigma):
            raise ValidationError(
                "secured.investment_sigma must be below merchant.investment_sigma "
                f"({self.secured.investment_sigma} vs {self.merchant.investment_sigma})"
            )
        lo, hi = self.roi_band
        if not (0 < lo <= hi):
            raise ValidationError(f"roi_band must satisfy 0 < low <= high, got {self.roi_band}")
        clo, chi = self.capex_band
        if not (0 < clo <= chi):
            raise ValidationError(
                f"capex_band must satisfy 0 < low <= high, got {self.capex_band}"
            )

    @property
    def n_assets(self) -> int:
        return self.n_technologies * self.n_countries


def category_for(technology: int, country: int) -> Category:
    """Default category assignment: alternate on the parity of t + c."""
    return Category.SECURED if (technology + country) % 2 == 0 else Category.MERCHANT


def generate_synthetic(spec: GeneratorSpec) -> ScenarioSet:
    """Draw a ScenarioSet from the sampler; deterministic for a fixed seed."""
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n_assets, spec.n_scenarios

    capex = rng.uniform(spec.capex_band[0], spec.capex_band[1], size=n)
    target_roi = rng.uniform(spec.roi_band[0], spec.roi_band[1], size=n)
    eps_r = rng.standard_normal(size=(m, n))
    eps_i = rng.standard_normal(size=(m, n))

    assets = []
    k = 0
    for t in range(1, spec.n_technologies + 1):
        for c in range(1, spec.n_countries + 1):
            category = (
                spec.categories[k] if spec.categories is not None else category_for(t, c)
            )
            assets.append(
                Asset(
                    id=k,
                    technology=t,
                    country=c,
                    category=category,
                    capex_per_unit=float(capex[k]),
                )
            )
            k += 1

    sigma_r = np.array(
        [
            spec.secured.return_sigma
            if a.category is Category.SECURED
            else spec.merchant.return_sigma
            for a in assets
        ]
    )
    sigma_i = np.array(
        [
            spec.secured.investment_sigma
            if a.category is Category.SECURED
            else spec.merchant.investment_sigma
            for a in assets
        ]
    )

    investments = capex * np.exp(sigma_i * eps_i)
    returns = target_roi * capex * np.exp(sigma_r * eps_r)
    return ScenarioSet(tuple(assets), returns, investments)


def _asset_to_json(asset: Asset) -> dict:
    return {
        "id": asset.id,
        "technology": asset.technology,
        "country": asset.country,
        "category": asset.category.value,
        "max_production": None if math.isinf(asset.max_production) else asset.max_production,
        "capex_per_unit": asset.capex_per_unit,
    }


def _asset_from_json(doc: dict, position: int) -> Asset:
    try:
        max_production = doc.get("max_production")
        return Asset(
            id=int(doc["id"]),
            technology=int(doc["technology"]),
            country=int(doc["country"]),
            category=Category(doc["category"]),
            max_production=math.inf if max_production is None else float(max_production),
            capex_per_unit=float(doc["capex_per_unit"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataFormatError(f"bad asset record at index {position}: {exc}") from exc


def save_json(scenario_set: ScenarioSet, path: str | Path) -> None:
    doc = {
        "assets": [_asset_to_json(a) for a in scenario_set.assets],
        "returns": [[float(v) for v in row] for row in scenario_set.returns],
        "investments": [[float(v) for v in row] for row in scenario_set.investments],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_json(path: str | Path) -> ScenarioSet:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"scenario file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"invalid JSON in {path}: {exc}") from exc
    for key in ("assets", "returns", "investments"):
        if key not in doc:
            raise DataFormatError(f"{path}: missing top-level key {key!r}")
    assets = tuple(_asset_from_json(a, i) for i, a in enumerate(doc["assets"]))
    returns = _matrix_from_rows(doc["returns"], len(assets), "returns")
    investments = _matrix_from_rows(doc["investments"], len(assets), "investments")
    return _build_checked(assets, returns, investments)


def _matrix_from_rows(rows: list, n: int, name: str) -> np.ndarray:
    out = []
    for s, row in enumerate(rows):
        if len(row) != n:
            raise DataFormatError(
                f"{name} row {s} has {len(row)} values, expected {n}"
            )
        try:
            out.append([float(v) for v in row])
        except (TypeError, ValueError) as exc:
            raise DataFormatError(f"{name} row {s}: non-numeric entry ({exc})") from exc
    if not out:
        raise DataFormatError(f"{name} has no rows")
    return np.array(out)


def _build_checked(assets, returns, investments) -> ScenarioSet:
    bad = np.argwhere(investments <= 0)
    if bad.size:
        s, i = bad[0]
        raise DataFormatError(f"non-positive investment at ({s},{i})")
    try:
        return ScenarioSet(assets, returns, investments)
    except ValidationError as exc:
        raise DataFormatError(str(exc)) from exc


def save_csv(scenario_set: ScenarioSet, returns_path: str | Path, investments_path: str | Path) -> None:
    """Write the matrix pair: one header row of labels, one row per scenario."""
    for matrix, path in (
        (scenario_set.returns, returns_path),
        (scenario_set.investments, investments_path),
    ):
        lines = [",".join(scenario_set.labels)]
        for row in matrix:
            lines.append(",".join(repr(float(v)) for v in row))
        Path(path).write_text("\n".join(lines) + "\n")


def load_csv(returns_path: str | Path, investments_path: str | Path) -> ScenarioSet:
    labels_r, returns = _read_csv_matrix(returns_path)
    labels_i, investments = _read_csv_matrix(investments_path)
    if labels_r != labels_i:
        raise DataFormatError("returns and investments headers disagree")
    if returns.shape[0] != investments.shape[0]:
        raise DataFormatError(
            f"returns has {returns.shape[0]} scenario rows but investments has "
            f"{investments.shape[0]}"
        )
    assets = []
    for i, label in enumerate(labels_r):
        t, c, category = parse_asset_label(label)
        capex = float(np.mean(investments[:, i])) if investments.size else 1.0
        assets.append(Asset(id=i, technology=t, country=c, category=category, capex_per_unit=capex))
    return _build_checked(tuple(assets), returns, investments)


def _read_csv_matrix(path: str | Path) -> tuple[tuple[str, ...], np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"scenario file not found: {path}")
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    labels = tuple(v.strip() for v in rows[0])
    n = len(labels)
    data = []
    for s, row in enumerate(rows[1:]):
        if len(row) != n:
            raise DataFormatError(f"{path}: row {s} has {len(row)} values, expected {n}")
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            raise DataFormatError(f"{path}: row {s}: non-numeric entry ({exc})") from exc
    if not data:
        raise DataFormatError(f"{path}: no scenario rows")
    return labels, np.array(data)


def save(scenario_set: ScenarioSet, path: str | Path) -> None:
    """Save as JSON (``*.json``, canonical) or as a CSV pair (any other path).

    The CSV form writes ``<path>.returns.csv`` and ``<path>.investments.csv``.
    """
    path = Path(path)
    if path.suffix == ".json":
        save_json(scenario_set, path)
    else:
        save_csv(
            scenario_set,
            path.with_name(path.name + ".returns.csv"),
            path.with_name(path.name + ".investments.csv"),
        )


def load(path: str | Path) -> ScenarioSet:
    """Inverse of :func:`save`; dispatches on the path shape."""
    path = Path(path)
    if path.suffix == ".json":
        return load_json(path)
    returns_path = path.with_name(path.name + ".returns.csv")
    investments_path = path.with_name(path.name + ".investments.csv")
    if returns_path.exists() or investments_path.exists():
        return load_csv(returns_path, investments_path)
    raise DataFormatError(f"scenario file not found: {path}")
