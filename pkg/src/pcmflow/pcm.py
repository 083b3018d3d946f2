"""Pairwise comparison matrices: validation, error metrics and baseline priorities.

Vertex indices reported in exceptions are 1-based; arrays are 0-based.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

RECIPROCITY_RTOL = 1e-9


class PCMError(ValueError):
    """Base class for invalid pairwise comparison input."""


class NonSquare(PCMError):
    pass


class NonPositiveEntry(PCMError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"entry ({i},{j}) = {value!r} is not a positive finite number")


class ReciprocityViolation(PCMError):
    def __init__(self, i, j, product):
        self.i, self.j, self.product = i, j, product
        super().__init__(f"a_{i}{j} * a_{j}{i} = {product:.12g}, expected 1")


class BadDiagonal(PCMError):
    def __init__(self, i, value):
        self.i, self.value = i, value
        super().__init__(f"diagonal entry ({i},{i}) = {value!r}, expected 1")


class MissingEntry(PCMError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"missing judgment for pair ({i},{j})")


class MatrixParseError(PCMError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NoConvergence(RuntimeError):
    def __init__(self, max_iters):
        self.max_iters = max_iters
        super().__init__(f"power iteration did not converge in {max_iters} iterations")


class PairwiseComparisonMatrix:
    """A validated positive reciprocal matrix.

    Construct through :func:`validate_pcm`, :func:`complete_upper_triangle`
    or :func:`random_pcm`; the constructor itself does not check anything.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        entries = np.array(entries, dtype=float)
        entries.setflags(write=False)
        self.entries = entries

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __getitem__(self, key):
        return self.entries[key]

    def __eq__(self, other):
        if not isinstance(other, PairwiseComparisonMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"PairwiseComparisonMatrix(n={self.n})"


@dataclass(frozen=True)
class WeightVector:
    """Positive priorities normalized so that ``v[0] == 1``."""

    v: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("weights must be a 1-d array of positive finite numbers")
        v = v / v[0]
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_log(cls, w) -> WeightVector:
        w = np.asarray(w, dtype=float)
        return cls(np.exp(w - w[0]))

    @property
    def w(self) -> np.ndarray:
        return np.log(self.v)

    @property
    def n(self) -> int:
        return self.v.shape[0]

    def normalized_sum(self) -> np.ndarray:
        return self.v / self.v.sum()

    def __array__(self, dtype=None, copy=None):
        return self.v if dtype is None else self.v.astype(dtype)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"WeightVector({np.array2string(self.v, precision=6)})"


def entries_of(A) -> np.ndarray:
    if isinstance(A, PairwiseComparisonMatrix):
        return A.entries
    return np.asarray(A, dtype=float)


def validate_pcm(raw, rtol: float = RECIPROCITY_RTOL) -> PairwiseComparisonMatrix:
    """Check that ``raw`` is a positive reciprocal matrix and wrap it.

    Raises
    ------
    NonSquare, NonPositiveEntry, BadDiagonal, ReciprocityViolation
    """
    a = np.array(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise NonSquare(f"expected an n x n array with n >= 2, got shape {a.shape}")
    n = a.shape[0]
    bad = ~(np.isfinite(a) & (a > 0))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NonPositiveEntry(i + 1, j + 1, float(a[i, j]))
    for i in range(n):
        if abs(a[i, i] - 1.0) > rtol:
            raise BadDiagonal(i + 1, float(a[i, i]))
    prod = a * a.T
    for i in range(n):
        for j in range(i + 1, n):
            if abs(prod[i, j] - 1.0) > rtol:
                raise ReciprocityViolation(i + 1, j + 1, float(prod[i, j]))
    np.fill_diagonal(a, 1.0)
    return PairwiseComparisonMatrix(a)


def complete_upper_triangle(upper, n: int) -> PairwiseComparisonMatrix:
    """Build the full matrix from the judgments above the diagonal.

    ``upper`` is an iterable of ``(i, j, a_ij)`` with 1-based ``i < j``, or a
    mapping ``{(i, j): a_ij}``. Lower entries become exact reciprocals.
    """
    if isinstance(upper, dict):
        upper = [(i, j, a) for (i, j), a in upper.items()]
    a = np.ones((n, n))
    seen = np.zeros((n, n), dtype=bool)
    for i, j, value in upper:
        if not (1 <= i < j <= n):
            raise PCMError(f"pair ({i},{j}) is not above the diagonal of a {n}x{n} matrix")
        value = float(Fraction(value)) if isinstance(value, str) else float(value)
        if not (np.isfinite(value) and value > 0):
            raise NonPositiveEntry(i, j, value)
        a[i - 1, j - 1] = value
        a[j - 1, i - 1] = 1.0 / value
        seen[i - 1, j - 1] = True
    for i in range(n):
        for j in range(i + 1, n):
            if not seen[i, j]:
                raise MissingEntry(i + 1, j + 1)
    return PairwiseComparisonMatrix(a)


def consistent_pcm(v) -> PairwiseComparisonMatrix:
    """The consistent matrix ``a_ij = v_i / v_j`` generated by ``v``."""
    v = np.asarray(v, dtype=float)
    return PairwiseComparisonMatrix(v[:, None] / v[None, :])


def is_consistent(A, tol: float = 1e-9) -> bool:
    a = entries_of(A)
    # a_ij * a_jk vs a_ik for all triples, as an (i, j, k) tensor
    chained = a[:, :, None] * a[None, :, :]
    return bool(np.all(np.abs(chained - a[:, None, :]) <= tol * a[:, None, :]))


def deviations(A, v) -> np.ndarray:
    """Matrix of absolute errors ``|a_ij - v_i / v_j|``."""
    a = entries_of(A)
    v = np.asarray(v, dtype=float)
    return np.abs(a - v[:, None] / v[None, :])


def gp_error(A, v, p: float = np.inf) -> float:
    """Generalized-mean approximation error of ``v`` with respect to ``A``.

    For finite ``p`` this is ``(sum |a_ij - v_i/v_j|^p / n^2)^(1/p)``. For
    ``p = inf`` the plain maximum is returned, without the ``1/n^2`` factor.
    """
    dev = deviations(A, v)
    if np.isinf(p):
        return float(dev.max())
    if p < 1:
        raise ValueError("p must be >= 1 or inf")
    return float(np.mean(dev**p) ** (1.0 / p))


def geometric_mean_vector(A) -> WeightVector:
    a = entries_of(A)
    # mean of logs avoids overflow of the row product for large n
    return WeightVector.from_log(np.log(a).mean(axis=1))


def principal_eigenvector(A, tol: float = 1e-12, max_iters: int = 100_000):
    """Perron eigenvector by power iteration, started from the geometric means.

    Returns
    -------
    (WeightVector, float)
        The eigenvector scaled to ``v[0] == 1`` and the Perron root.
    """
    a = entries_of(A)
    v = geometric_mean_vector(a).v.copy()
    for _ in range(max_iters):
        av = a @ v
        lam = av[0] / v[0]
        if np.max(np.abs(av - lam * v)) <= tol * np.max(np.abs(v)):
            return WeightVector(v), float(lam)
        v = av / av[0]
    raise NoConvergence(max_iters)


def saaty_index(A, lambda_max: float) -> float:
    n = entries_of(A).shape[0]
    # a positive reciprocal matrix has lambda_max >= n; clip roundoff below it
    return max(0.0, (lambda_max - n) / (n - 1))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_pcm(n: int, a_max: int, rng=None) -> PairwiseComparisonMatrix:
    """Random matrix with judgments drawn uniformly from ``{1, ..., a_max}``.

    Each drawn value goes above or below the diagonal with probability 1/2
    and its reciprocal fills the mirrored cell. ``rng`` is a seed or a
    ``numpy.random.Generator``.
    """
    if n < 2 or a_max < 2:
        raise ValueError("need n >= 2 and a_max >= 2")
    gen = _as_generator(rng)
    m = n * (n - 1) // 2
    k = gen.integers(1, a_max + 1, size=m).astype(float)
    above = gen.random(m) < 0.5
    iu = np.triu_indices(n, 1)
    a = np.ones((n, n))
    a[iu] = np.where(above, k, 1.0 / k)
    a[iu[1], iu[0]] = np.where(above, 1.0 / k, k)
    return PairwiseComparisonMatrix(a)


def _parse_cell(text: str, line: int) -> float:
    text = text.strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise MatrixParseError(line, f"cannot parse entry {text!r}") from None


def parse_matrix_csv(text: str) -> PairwiseComparisonMatrix:
    """Parse the CSV matrix format: one row per line, '#' lines ignored."""
    rows = []
    lines = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        rows.append([_parse_cell(c, lineno) for c in row])
        lines.append(lineno)
    if not rows:
        raise MatrixParseError(1, "no matrix rows found")
    n = len(rows)
    for row, lineno in zip(rows, lines):
        if len(row) != n:
            raise MatrixParseError(lineno, f"expected {n} entries, found {len(row)}")
    try:
        return validate_pcm(rows)
    except (NonPositiveEntry, BadDiagonal, ReciprocityViolation) as exc:
        raise MatrixParseError(lines[exc.i - 1], str(exc)) from exc


def read_matrix_csv(path) -> PairwiseComparisonMatrix:
    return parse_matrix_csv(Path(path).read_text())


def _format_cell(x: float) -> str:
    if x == round(x):
        return str(int(x))
    k = round(1.0 / x)
    if 1.0 / k == x:
        return f"1/{k}"
    return repr(float(x))


def format_matrix_csv(A, header: str | None = None) -> str:
    a = entries_of(A)
    out = io.StringIO()
    if header:
        out.write(f"# {header}\n")
    for row in a:
        out.write(",".join(_format_cell(x) for x in row) + "\n")
    return out.getvalue()


def write_matrix_csv(A, path, header: str | None = None) -> None:
    Path(path).write_text(format_matrix_csv(A, header))
