"""Discrete data ingestion and decomposable, score-equivalent quality criteria.

Two criteria are provided: maximized log-likelihood (``ll``) and BIC
(``bic`` = log-likelihood minus half * ln(rows) * free parameters).  Both are
decomposable into per-node local scores and give equal values to Markov
equivalent graphs, which is what every learner in this package relies on.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import CharVector, Dag, Imset, VarSet, bit_indices, characteristic_imset, masks_by_size

CRITERIA = ("ll", "bic")


class DatasetError(ValueError):
    """Malformed input data."""


class RaggedRowError(DatasetError):
    """A data row has a different number of cells than the header."""


class EmptyCellError(DatasetError):
    """A data cell is empty; only complete data is supported."""


class SingleStateError(DatasetError):
    """A column shows fewer than two distinct states."""


@dataclass(frozen=True)
class Dataset:
    """Complete discrete data table: per-variable state counts plus rows of state indices."""

    base: VarSet
    cardinalities: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]
    states: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "cardinalities", tuple(int(c) for c in self.cardinalities))
        object.__setattr__(self, "rows", tuple(tuple(int(v) for v in row) for row in self.rows))
        n = self.base.n
        if len(self.cardinalities) != n:
            raise DatasetError("one cardinality per variable required")
        if any(c < 2 for c in self.cardinalities):
            raise SingleStateError("every variable needs at least two states")
        if not self.rows:
            raise DatasetError("at least one observation required")
        for row in self.rows:
            if len(row) != n:
                raise RaggedRowError(f"row {row!r} does not match {n} variables")
            for value, card in zip(row, self.cardinalities):
                if not 0 <= value < card:
                    raise DatasetError(f"state index {value} out of range")

    @property
    def num_rows(self) -> int:
        return len(self.rows)


def ingest_csv(text: str | io.TextIOBase) -> Dataset:
    """Parse a comma-separated table of categorical tokens into a `Dataset`.

    First row is the header of variable names.  State indices are assigned
    per column by first appearance of each token; cardinalities are the
    number of distinct tokens seen.  Ragged rows, empty cells and columns
    with fewer than two states are rejected.
    """
    lines = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty input: missing header row") from None
    header = [name.strip() for name in header]
    base = VarSet(tuple(header))
    n = base.n
    seen: list[dict[str, int]] = [{} for _ in range(n)]
    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != n:
            raise RaggedRowError(f"line {lineno}: expected {n} cells, got {len(cells)}")
        row = []
        for col, token in enumerate(cells):
            token = token.strip()
            if token == "":
                raise EmptyCellError(f"line {lineno}: empty cell in column {header[col]!r}")
            row.append(seen[col].setdefault(token, len(seen[col])))
        rows.append(tuple(row))
    if not rows:
        raise DatasetError("no data rows")
    for col, tokens in enumerate(seen):
        if len(tokens) < 2:
            raise SingleStateError(f"column {header[col]!r} has fewer than two states")
    states = tuple(tuple(sorted(tokens, key=tokens.get)) for tokens in seen)
    cards = tuple(len(tokens) for tokens in seen)
    return Dataset(base, cards, tuple(rows), states)


class ScoreOracle:
    """Memoizing evaluator of decomposable local scores over a fixed dataset.

    Repeated queries for the same (node, parent set) hit the memo table, so a
    full-graph score costs one dictionary lookup per node after warm-up.
    Instances behave as pure functions of the dataset and criterion.
    """

    def __init__(self, dataset: Dataset, criterion: str = "bic"):
        criterion = criterion.lower()
        if criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
        self.dataset = dataset
        self.criterion = criterion
        self._memo: dict[tuple[int, int], float] = {}

    @property
    def base(self) -> VarSet:
        return self.dataset.base

    def local_score(self, i: int, parents: int = 0) -> float:
        """Local score of node ``i`` with the given parent-set mask.

        Log-likelihood part: sum over observed (parent config, child state)
        cells of count * ln(count / parent count), with 0 * ln 0 = 0.  The BIC
        criterion subtracts 0.5 * ln(rows) * (|states_i| - 1) * prod of parent
        cardinalities.
        """
        if parents >> i & 1:
            raise ValueError(f"node {i} cannot be its own parent")
        key = (i, parents)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        idx = tuple(bit_indices(parents))
        joint: Counter = Counter()
        margin: Counter = Counter()
        for row in self.dataset.rows:
            config = tuple(row[j] for j in idx)
            joint[(config, row[i])] += 1
            margin[config] += 1
        ll = 0.0
        for (config, _), count in sorted(joint.items()):
            ll += count * math.log(count / margin[config])
        value = ll
        if self.criterion == "bic":
            params = self.dataset.cardinalities[i] - 1
            for j in idx:
                params *= self.dataset.cardinalities[j]
            value -= 0.5 * math.log(self.dataset.num_rows) * params
        self._memo[key] = value
        return value

    def score(self, g: Dag) -> float:
        """Total score: sum of local scores over the graph's parent sets."""
        if g.base != self.base:
            raise ValueError("graph is over a different variable set than the data")
        return sum(self.local_score(i, g.parents_mask(i)) for i in range(g.base.n))

    def edge_weight(self, a: int, b: int) -> float:
        """Score gain of the single-arc graph a -> b over the empty graph.

        Score equivalence makes the value symmetric in (a, b); it is computed
        on the normalized pair so the symmetry is exact, not just up to
        rounding.  Under ``ll`` this equals rows * empirical mutual
        information of the two columns.
        """
        if a == b:
            raise ValueError("edge weight needs two distinct variables")
        u, v = (a, b) if a < b else (b, a)
        return self.local_score(v, 1 << u) - self.local_score(v, 0)


@dataclass(frozen=True)
class AffineFit:
    """Least-squares affine model of a score in characteristic coordinates."""

    intercept: float
    coefficients: dict[int, float]
    residual: float


def affine_fit(oracle) -> AffineFit:
    """Fit score(g) = intercept + <coefficients, characteristic vector of g>.

    The fit runs over one representative per Markov equivalence class, which
    requires exhaustive enumeration and is therefore limited to four
    variables.  For any decomposable score-equivalent criterion the model is
    exact and the reported residual (largest absolute error over the classes)
    vanishes up to rounding; a non-decomposable score leaves a visible
    residual.
    """
    from .bruteforce import enumerate_dags

    base = oracle.base
    if base.n > 4:
        raise ValueError("affine fit enumerates equivalence classes; at most 4 variables")
    universe = enumerate_dags(base.n, base=base)
    reps = universe.representatives
    coords = list(masks_by_size(base.n, 2))
    design = np.array(
        [[1.0] + [float(characteristic_imset(g)[t]) for t in coords] for g in reps]
    )
    target = np.array([oracle.score(g) for g in reps])
    solution, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.max(np.abs(design @ solution - target)))
    coeffs = {t: float(c) for t, c in zip(coords, solution[1:])}
    return AffineFit(float(solution[0]), coeffs, residual)
