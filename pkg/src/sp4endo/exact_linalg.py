"""Exact 4x4 linear algebra over Q and Q(i), with a float64 counterpart.

Three scalar modes are supported:

``"rational"``
    entries are :class:`fractions.Fraction`;
``"gaussian"``
    entries are :class:`GaussianRational` (pairs of fractions);
``"float"``
    entries are Python floats (IEEE double).

Matrices are immutable.  Binary operations require both operands to share a
mode; use :meth:`ExactMatrix.to_mode` to promote explicitly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

MODES = ("rational", "gaussian", "float")
DEFAULT_TOL = 1e-12


class ModeMismatchError(ValueError):
    """Raised when two matrices with different scalar modes are combined."""


class NotInAlgebraError(ValueError):
    """Raised when an operation needs an element of sp(4) and gets something else."""


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self, "gaussian")


I = GaussianRational(0, 1)

Scalar = Union[Fraction, GaussianRational, float]


def parse_scalar(text, mode: str) -> Scalar:
    """Parse a JSON matrix entry (``"p/q"``, ``"p/q+r/si"``, or a number)."""
    if mode == "float":
        if isinstance(text, str):
            return float(Fraction(text)) if "/" in text else float(text)
        return float(text)
    if isinstance(text, (int, Fraction)):
        value = Fraction(text)
        return value if mode == "rational" else GaussianRational(value)
    if isinstance(text, float):
        raise ValueError("float literals are not allowed in exact modes; use 'p/q' strings")
    s = str(text).replace(" ", "")
    if mode == "rational":
        return Fraction(s)
    # gaussian: "a", "bi", "a+bi", "a-b/ci", "-i"
    if s.endswith("i"):
        m = re.match(r"^([+-]?\d+(?:/\d+)?)?([+-])(\d+(?:/\d+)?)?i$", s)
        if m:
            re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
            im_part = Fraction(m.group(3)) if m.group(3) else Fraction(1)
            return GaussianRational(re_part, im_part if m.group(2) == "+" else -im_part)
        m = re.match(r"^(\d+(?:/\d+)?)?i$", s)
        if m:
            return GaussianRational(0, Fraction(m.group(1)) if m.group(1) else 1)
        raise ValueError(f"cannot parse gaussian rational {text!r}")
    return GaussianRational(Fraction(s))


def format_scalar(x: Scalar, mode: str):
    if mode == "float":
        return float(x)
    if mode == "rational":
        return str(x)
    x = GaussianRational(x)
    if x.im == 0:
        return str(x.re)
    im = x.im
    sign = "-" if im < 0 else "+"
    mag = "" if abs(im) == 1 else str(abs(im))
    if x.re == 0:
        return f"{'-' if im < 0 else ''}{mag}i"
    return f"{x.re}{sign}{mag}i"


def _convert(x, mode: str) -> Scalar:
    if mode == "float":
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError("cannot convert a non-real gaussian rational to float mode")
            return float(x.re)
        if isinstance(x, complex):
            raise ValueError("complex entries are not supported in float mode")
        return float(x)
    if mode == "rational":
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError("cannot convert a non-real gaussian rational to rational mode")
            return x.re
        if isinstance(x, float):
            raise ValueError("refusing to convert a float to an exact rational implicitly")
        return Fraction(x)
    if mode == "gaussian":
        if isinstance(x, float):
            raise ValueError("refusing to convert a float to an exact gaussian rational implicitly")
        return GaussianRational(x)
    raise ValueError(f"unknown scalar mode {mode!r}")


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable 4x4 matrix whose entries share one scalar mode."""

    rows: tuple
    mode: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown scalar mode {self.mode!r}")
        if len(self.rows) != 4 or any(len(r) != 4 for r in self.rows):
            raise ValueError("ExactMatrix must be 4x4")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], mode: str = "rational") -> "ExactMatrix":
        return cls(tuple(tuple(_convert(x, mode) for x in r) for r in rows), mode)

    @classmethod
    def from_numpy(cls, a: np.ndarray) -> "ExactMatrix":
        a = np.asarray(a, dtype=float)
        return cls(tuple(tuple(float(x) for x in r) for r in a), "float")

    @classmethod
    def identity(cls, mode: str = "rational") -> "ExactMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(4)] for i in range(4)], mode)

    @classmethod
    def zeros(cls, mode: str = "rational") -> "ExactMatrix":
        return cls.from_rows([[0] * 4 for _ in range(4)], mode)

    @classmethod
    def diag(cls, entries: Sequence, mode: str = "rational") -> "ExactMatrix":
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(4)] for i in range(4)], mode)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    @property
    def is_exact(self) -> bool:
        return self.mode != "float"

    def to_mode(self, mode: str) -> "ExactMatrix":
        if mode == self.mode:
            return self
        return ExactMatrix.from_rows(self.rows, mode)

    def to_numpy(self) -> np.ndarray:
        if self.mode == "gaussian":
            return np.array([[complex(x) for x in r] for r in self.rows], dtype=complex)
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)

    def _check(self, other: "ExactMatrix"):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.mode != self.mode:
            raise ModeMismatchError(f"scalar mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.mode)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        return ExactMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.mode)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(-a for a in r) for r in self.rows), self.mode)

    def scale(self, c) -> "ExactMatrix":
        c = _convert(c, self.mode)
        return ExactMatrix(tuple(tuple(c * a for a in r) for r in self.rows), self.mode)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.rows)), self.mode)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conjugate(self) -> "ExactMatrix":
        if self.mode != "gaussian":
            return self
        return ExactMatrix(tuple(tuple(a.conjugate() for a in r) for r in self.rows), self.mode)

    def real_part(self) -> "ExactMatrix":
        if self.mode != "gaussian":
            return self
        return ExactMatrix(tuple(tuple(a.re for a in r) for r in self.rows), "rational")

    def imag_part(self) -> "ExactMatrix":
        if self.mode != "gaussian":
            return ExactMatrix.zeros(self.mode)
        return ExactMatrix(tuple(tuple(a.im for a in r) for r in self.rows), "rational")

    def is_zero(self) -> bool:
        if self.mode == "float":
            return all(x == 0.0 for x in self.entries())
        return not any(self.entries())

    def max_abs(self) -> float:
        return max(abs(complex(x)) if self.mode == "gaussian" else abs(float(x))
                   for x in self.entries())

    def det(self):
        return _det4(self.rows)

    def inverse(self) -> "ExactMatrix":
        """Adjugate/determinant in exact modes, partial-pivot elimination in float mode."""
        if self.mode == "float":
            return ExactMatrix.from_numpy(_float_inverse(self.to_numpy()))
        d = self.det()
        if d == 0:
            raise ZeroDivisionError("matrix is singular")
        adj = [[_cofactor(self.rows, j, i) for j in range(4)] for i in range(4)]
        return ExactMatrix(tuple(tuple(c / d for c in r) for r in adj), self.mode)

    def to_json(self) -> list:
        return [[format_scalar(x, self.mode) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, mode: str | None = None) -> "ExactMatrix":
        """Inverse of :meth:`to_json`; ``mode`` is inferred when omitted."""
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            mode = mode or data.get("mode")
            data = data["matrix"]
        if mode is None:
            flat = [x for r in data for x in r]
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in flat) \
                    and any(isinstance(x, float) for x in flat):
                mode = "float"
            elif any(isinstance(x, str) and "i" in x for x in flat):
                mode = "gaussian"
            else:
                mode = "rational"
        return cls(tuple(tuple(parse_scalar(x, mode) for x in r) for r in data), mode)

    def __str__(self):
        w = [[str(format_scalar(x, self.mode)) for x in r] for r in self.rows]
        width = max(len(s) for r in w for s in r)
        return "\n".join("[" + " ".join(s.rjust(width) for s in r) + "]" for r in w)


def _minor(rows, i, j):
    return [[rows[r][c] for c in range(len(rows)) if c != j] for r in range(len(rows)) if r != i]


def _det_generic(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            term = rows[0][j] * _det_generic(_minor(rows, 0, j))
            total = total + term if j % 2 == 0 else total - term
    return total


def _det4(rows):
    return _det_generic([list(r) for r in rows])


def _cofactor(rows, i, j):
    c = _det_generic(_minor([list(r) for r in rows], i, j))
    return c if (i + j) % 2 == 0 else -c


def _float_inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    aug = np.hstack([a.astype(float), np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if aug[piv, col] == 0.0:
            raise ZeroDivisionError("matrix is singular")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for r in range(n):
            if r != col:
                aug[r] -= aug[r, col] * aug[col]
    return aug[:, n:]


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Matrix product; exact in exact modes, IEEE in float mode."""
    a._check(b)
    if a.mode == "float":
        return ExactMatrix.from_numpy(a.to_numpy() @ b.to_numpy())
    cols = list(zip(*b.rows))
    rows = []
    for r in a.rows:
        row = []
        for c in cols:
            acc = r[0] * c[0]
            for k in range(1, 4):
                acc = acc + r[k] * c[k]
            row.append(acc)
        rows.append(tuple(row))
    return ExactMatrix(tuple(rows), a.mode)


def commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Lie bracket ``ab - ba``."""
    return mat_mul(a, b) - mat_mul(b, a)


def _std_form(mode: str) -> ExactMatrix:
    return ExactMatrix.from_rows([[0, 0, 1, 0],
                                  [0, 0, 0, 1],
                                  [-1, 0, 0, 0],
                                  [0, -1, 0, 0]], mode)


J4 = _std_form("rational")
"""Matrix of the symplectic form, ``[[0, I2], [-I2, 0]]``.

This is the form for which the block description ``A^T = -D, B^T = B, C^T = C``
of the Lie algebra, the diagonal Cartan ``diag(a1, a2, 1/a1, 1/a2)`` and the
maximal compact ``K = {[[A, B], [-B, A]]}`` all hold.
"""

J4_PRINTED = ExactMatrix.from_rows([[0, 1, 0, 0],
                                    [-1, 0, 0, 0],
                                    [0, 0, 0, 1],
                                    [0, 0, -1, 0]])
"""The form with pairs (1,2), (3,4).  Kept for reference only; it is not the
form preserved by the group elements used in this package."""


def form(mode: str = "rational") -> ExactMatrix:
    return J4 if mode == "rational" else _std_form(mode)


def _residual_ok(m: ExactMatrix, tol: float) -> bool:
    if m.is_exact:
        return m.is_zero()
    return m.max_abs() <= tol


def is_symplectic(g: ExactMatrix, tol: float = DEFAULT_TOL) -> bool:
    """``g^T J g == J`` (max-norm residual within ``tol`` in float mode)."""
    if g.mode == "float":
        a = g.to_numpy()
        J = form("float").to_numpy()
        return float(np.max(np.abs(a.T @ J @ a - J))) <= tol
    J = form(g.mode)
    return _residual_ok(mat_mul(mat_mul(g.T, J), g) - J, tol)


def is_in_algebra(X: ExactMatrix, tol: float = DEFAULT_TOL) -> bool:
    """``X^T J + J X == 0``, i.e. ``X`` lies in sp(4) (complexified in gaussian mode)."""
    if X.mode == "float":
        a = X.to_numpy()
        J = form("float").to_numpy()
        return float(np.max(np.abs(a.T @ J + J @ a))) <= tol
    J = form(X.mode)
    return _residual_ok(mat_mul(X.T, J) + mat_mul(J, X), tol)


def cartan_involution_algebra(X: ExactMatrix, tol: float = DEFAULT_TOL) -> ExactMatrix:
    """Algebra-level Cartan involution ``X -> -X^T``.

    Its +1 eigenspace is the Lie algebra of ``K``.  The group-level involution
    is ``g -> (g^T)^{-1}``, see :func:`cartan_involution_group`.
    """
    if not is_in_algebra(X, tol):
        raise NotInAlgebraError("cartan_involution_algebra expects an element of sp(4)")
    return -X.T


def cartan_involution_group(g: ExactMatrix) -> ExactMatrix:
    return g.T.inverse()


def symplectic_inverse(g: ExactMatrix) -> ExactMatrix:
    """``g^{-1} = -J g^T J`` for symplectic ``g`` (no division needed)."""
    J = form(g.mode)
    return -mat_mul(mat_mul(J, g.T), J)


# -- small exact solvers -------------------------------------------------------

def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of the right nullspace of an exact matrix given as row lists.

    Works over any exact field type (``Fraction`` or :class:`GaussianRational`).
    The basis is the reduced-row-echelon one: one vector per free column, with a
    1 in that column.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    zero = m[0][0] * 0 if m and m[0] else Fraction(0)
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = zero + 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def solve_exact(columns: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve ``sum_j x_j columns[j] == rhs`` exactly; ``None`` if inconsistent.

    Raises ``ValueError`` when the solution is not unique.
    """
    ncols = len(columns)
    nrows = len(rhs)
    aug = [[columns[j][i] for j in range(ncols)] + [rhs[i]] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [x / p for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][ncols] != 0 for i in range(r, nrows)):
        return None
    if len(pivots) < ncols:
        raise ValueError("linear system has no unique solution")
    sol = [None] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol
