"""Exact structure constants of sp(4): basis catalog, C2 roots, Weyl group.

Root convention: a weight ``(m1, m2)`` is the character
``r(t1) r(t2) -> exp(i (m1 t1 + m2 t2))`` of the compact Cartan subgroup,
so ``[T_j, X_beta] = i m_j X_beta`` for the generators ``T1, T2`` of the two
circle factors.  In the complex basis ``Z = T1 + T2``, ``H' = -i (T1 - T2)`` this
reads ``beta(Z) = i (m1 + m2)``, ``beta(H') = m1 - m2``; :func:`pairing_matrix`
recomputes that from the bracket table instead of assuming it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .exact_linalg import (
    ExactMatrix,
    GaussianRational,
    I,
    commutator,
    is_in_algebra,
    solve_exact,
)

Weight = tuple[int, int]


def _q(rows) -> ExactMatrix:
    return ExactMatrix.from_rows(rows, "rational")


def _g(rows) -> ExactMatrix:
    return ExactMatrix.from_rows(rows, "gaussian")


i = I

# -- real basis ----------------------------------------------------------------

H1 = _q([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 0]])
H2 = _q([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]])
E_2E1 = _q([[0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
E_E1_PLUS_E2 = _q([[0, 0, 0, 1], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
E_2E2 = _q([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
E_E1_MINUS_E2 = _q([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0]])

REAL_BASIS: dict[str, ExactMatrix] = {
    "H1": H1,
    "H2": H2,
    "E_2e1": E_2E1,
    "E_e1+e2": E_E1_PLUS_E2,
    "E_2e2": E_2E2,
    "E_e1-e2": E_E1_MINUS_E2,
    "F_2e1": E_2E1.T,
    "F_e1+e2": E_E1_PLUS_E2.T,
    "F_2e2": E_2E2.T,
    "F_e1-e2": E_E1_MINUS_E2.T,
}
"""Basis of sp(4, R): the Borel part as displayed plus the transposed
(negative-root) vectors."""

# generators of the compact Cartan r(t1) r(t2) = exp(t1 T1 + t2 T2)
T1 = _q([[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]])
T2 = _q([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, -1, 0, 0]])

# -- complex basis of k_C ------------------------------------------------------

Z = _g([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
H_PRIME = _g([[0, 0, -i, 0], [0, 0, 0, i], [i, 0, 0, 0], [0, -i, 0, 0]])
half = Fraction(1, 2)
X = _g([[0, half, 0, -half * i],
        [-half, 0, -half * i, 0],
        [0, half * i, 0, half],
        [half * i, 0, -half, 0]])
X_BAR_PRINTED = X.conjugate()
X_BAR = -X_BAR_PRINTED
"""Lowering partner of ``X``.  With the entrywise conjugate of ``X`` one gets
``[X, conj X] = -H'``; the sign is flipped so that ``(H', X, X_BAR)`` is an
sl2-triple satisfying ``[H', X] = 2X``, ``[H', X_BAR] = -2X_BAR`` and
``[X, X_BAR] = H'`` simultaneously."""

# -- root vectors --------------------------------------------------------------

def _root_2_0(s):
    return _g([[1, 0, s * i, 0], [0, 0, 0, 0], [s * i, 0, -1, 0], [0, 0, 0, 0]])


def _root_1_1(s):
    return _g([[0, 1, 0, s * i], [1, 0, s * i, 0], [0, s * i, 0, -1], [s * i, 0, -1, 0]])


def _root_0_2(s):
    return _g([[0, 0, 0, 0], [0, 1, 0, s * i], [0, 0, 0, 0], [0, s * i, 0, -1]])


ROOT_VECTORS: dict[Weight, ExactMatrix] = {
    (2, 0): _root_2_0(1),
    (-2, 0): _root_2_0(-1),
    (1, 1): _root_1_1(1),
    (-1, -1): _root_1_1(-1),
    (0, 2): _root_0_2(1),
    (0, -2): _root_0_2(-1),
    (1, -1): X.scale(2),
    (-1, 1): X_BAR.scale(2),
}

PRINTED_ROOT_VECTORS: dict[Weight, ExactMatrix] = {
    (2, 0): _root_2_0(1),
    (-2, 0): _root_2_0(-1),
    (1, 1): _root_1_1(1),
    (-1, -1): _root_1_1(-1),
    (0, 2): _g([[0, 0, 0, 0], [0, 1, 0, i], [0, 0, 0, 0], [0, i, 0, 1]]),
    (0, -2): _g([[0, 0, 0, 0], [0, 1, 0, -i], [0, 0, 0, 0], [0, -i, 0, 1]]),
    (1, -1): _g([[0, 1, 0, i], [-1, 0, i, 0], [0, i, 0, 1], [i, 0, -1, 0]]),
    (-1, 1): _g([[0, 1, 0, -i], [-1, 0, -i, 0], [0, -i, 0, 1], [-i, 0, -1, 0]]),
}
"""Root vectors exactly as displayed; kept for the consistency report.  The
``(0, +-2)`` pair misses a sign in the (4,4) entry and the ``(1, -1)`` pair is
not an ad-eigenvector at all, so :data:`ROOT_VECTORS` replaces them."""

# -- images of su(1,1) and u(2) ------------------------------------------------

_S = ((1, 0), (0, -1))


def _block(a, b, c, d) -> ExactMatrix:
    rows = [list(a[0]) + list(b[0]), list(a[1]) + list(b[1]),
            list(c[0]) + list(d[0]), list(c[1]) + list(d[1])]
    return _q(rows)


def _mul2(a, b):
    return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(2)) for c in range(2)) for r in range(2))


def _neg2(a):
    return tuple(tuple(-x for x in r) for r in a)


def j_map(x, y) -> ExactMatrix:
    """su(1,1) -> sp(4): ``X + iY -> [[X, -SY], [SY, SXS]]`` with ``S = diag(1,-1)``."""
    sy = _mul2(_S, y)
    return _block(x, _neg2(sy), sy, _mul2(_mul2(_S, x), _S))


def j_prime_map(x, y) -> ExactMatrix:
    """u(2) -> k: ``X + iY -> [[X, -Y], [Y, X]]``."""
    return _block(x, _neg2(y), y, x)


_Z2 = ((0, 0), (0, 0))
J_IMAGES: dict[str, ExactMatrix] = {
    "j(U1)": j_map(_Z2, ((1, 0), (0, 0))),
    "j(U2)": j_map(_Z2, ((0, 0), (0, 1))),
    "j(U3)": j_map(((0, 1), (1, 0)), _Z2),
    "j(U4)": j_map(_Z2, ((0, 1), (-1, 0))),
    "j'(U1)": j_prime_map(_Z2, ((1, 0), (0, 0))),
    "j'(U2)": j_prime_map(_Z2, ((0, 0), (0, 1))),
    "j'(V3)": j_prime_map(((0, 1), (-1, 0)), _Z2),
    "j'(V4)": j_prime_map(_Z2, ((0, 1), (1, 0))),
}

# -- roots and Weyl group ------------------------------------------------------

ROOTS: tuple[Weight, ...] = ((2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (-1, -1), (1, -1), (-1, 1))
COMPACT_POSITIVE: frozenset[Weight] = frozenset({(1, -1)})
NONCOMPACT_POSITIVE: frozenset[Weight] = frozenset({(2, 0), (1, 1), (0, 2)})
POSITIVE_ROOTS: frozenset[Weight] = COMPACT_POSITIVE | NONCOMPACT_POSITIVE
RHO: Weight = (2, -1)
"""The stored value of rho.  Note ``half_sum(POSITIVE_ROOTS) == (2, 1)``;
``(2, -1)`` is the half-sum for the system containing ``(0, -2)``."""


def half_sum(roots) -> tuple[Fraction, Fraction]:
    return (Fraction(sum(r[0] for r in roots), 2), Fraction(sum(r[1] for r in roots), 2))


@dataclass(frozen=True)
class Root:
    m1: int
    m2: int

    def __post_init__(self):
        if (self.m1, self.m2) not in ROOTS:
            raise ValueError(f"({self.m1}, {self.m2}) is not a root of C2")

    @property
    def weight(self) -> Weight:
        return (self.m1, self.m2)

    @property
    def compact(self) -> bool:
        return abs(self.m1) == 1 and self.m1 == -self.m2

    @property
    def positive(self) -> bool:
        return self.weight in POSITIVE_ROOTS


def all_roots() -> list[Root]:
    return [Root(*w) for w in ROOTS]


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation ``(m1, m2) -> (s0 * m[p0], s1 * m[p1])``."""

    perm: tuple[int, int]
    signs: tuple[int, int]

    def __call__(self, m):
        return (self.signs[0] * m[self.perm[0]], self.signs[1] * m[self.perm[1]])

    @property
    def det(self) -> int:
        psign = 1 if self.perm == (0, 1) else -1
        return psign * self.signs[0] * self.signs[1]

    def compose(self, other: "WeylElement") -> "WeylElement":
        """``(self o other)(m) == self(other(m))``."""
        perm = (other.perm[self.perm[0]], other.perm[self.perm[1]])
        signs = (self.signs[0] * other.signs[self.perm[0]],
                 self.signs[1] * other.signs[self.perm[1]])
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        for w in weyl_group():
            if w.compose(self).is_identity:
                return w
        raise AssertionError("unreachable")

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1) and self.signs == (1, 1)

    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        rows = [[0, 0], [0, 0]]
        for r in range(2):
            rows[r][self.perm[r]] = self.signs[r]
        return (tuple(rows[0]), tuple(rows[1]))

    @property
    def name(self) -> str:
        def coord(r):
            s = "-" if self.signs[r] < 0 else ""
            return f"{s}m{self.perm[r] + 1}"
        return f"({coord(0)},{coord(1)})"


IDENTITY = WeylElement((0, 1), (1, 1))
LONG_ELEMENT = WeylElement((0, 1), (-1, -1))
COMPACT_REFLECTION = WeylElement((1, 0), (1, 1))
"""Reflection in the compact root (1, -1), i.e. the swap of coordinates."""


def weyl_group() -> list[WeylElement]:
    """The 8 signed permutations of two letters, identity first."""
    out = []
    for perm in ((0, 1), (1, 0)):
        for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            out.append(WeylElement(perm, signs))
    return out


def even_weyl_elements() -> list[WeylElement]:
    return [w for w in weyl_group() if w.det == 1]


def compact_weyl_group() -> list[WeylElement]:
    return [IDENTITY, COMPACT_REFLECTION]


# -- Cartan action -------------------------------------------------------------

CARTAN_BASIS = {"Z": Z, "H'": H_PRIME}


def eigenvalue(h: ExactMatrix, x: ExactMatrix):
    """Scalar ``c`` with ``[h, x] == c x``, or ``None`` when ``x`` is not an eigenvector."""
    h = h.to_mode("gaussian")
    x = x.to_mode("gaussian")
    br = commutator(h, x)
    pivot = next(((r, c) for r in range(4) for c in range(4) if x[r, c] != 0), None)
    if pivot is None:
        raise ValueError("zero vector has no eigenvalue")
    c = br[pivot] / x[pivot]
    return c if br == x.scale(c) else None


def eigenvalue_table(vectors: Mapping[Weight, ExactMatrix] = ROOT_VECTORS) -> dict:
    """``{weight: (c_Z, c_H')}``, ``None`` entries where not an eigenvector."""
    return {w: (eigenvalue(Z, v), eigenvalue(H_PRIME, v)) for w, v in vectors.items()}


def pairing_matrix(vectors: Mapping[Weight, ExactMatrix] = ROOT_VECTORS):
    """2x2 matrix ``P`` with ``(beta(Z), beta(H')) = P (m1, m2)``.

    Solved exactly from the ad-eigenvalues of two roots and checked on all
    of them; raises ``ValueError`` on an inconsistent table.
    """
    table = eigenvalue_table(vectors)
    if any(c is None for pair in table.values() for c in pair):
        raise ValueError("some root vectors are not Cartan eigenvectors")
    w1, w2 = (2, 0), (0, 2)
    cols = [[GaussianRational(w1[0]), GaussianRational(w2[0])],
            [GaussianRational(w1[1]), GaussianRational(w2[1])]]
    P = []
    for k in range(2):
        rhs = [table[w1][k], table[w2][k]]
        P.append(solve_exact(cols, rhs))
    for w, (cz, ch) in table.items():
        if P[0][0] * w[0] + P[0][1] * w[1] != cz or P[1][0] * w[0] + P[1][1] * w[1] != ch:
            raise ValueError(f"eigenvalue table is not linear in the weight at {w}")
    return P


def root_value(weight: Weight, cartan_coeffs) -> GaussianRational:
    """``beta(c_Z Z + c_H' H')`` via the computed pairing matrix."""
    P = _PAIRING
    cz, ch = (GaussianRational(c) for c in cartan_coeffs)
    bz = P[0][0] * weight[0] + P[0][1] * weight[1]
    bh = P[1][0] * weight[0] + P[1][1] * weight[1]
    return cz * bz + ch * bh


# -- decomposition -------------------------------------------------------------

DECOMPOSITION_BASIS: list[tuple[str | Weight, ExactMatrix]] = (
    [("Z", Z), ("H'", H_PRIME)] + [(w, ROOT_VECTORS[w]) for w in ROOTS])


@dataclass(frozen=True)
class RootDecomposition:
    cartan_part: tuple
    components: dict

    def reconstruct(self) -> ExactMatrix:
        out = Z.scale(self.cartan_part[0]) + H_PRIME.scale(self.cartan_part[1])
        for w, c in self.components.items():
            out = out + ROOT_VECTORS[w].scale(c)
        return out


def root_decompose(xc: ExactMatrix) -> RootDecomposition:
    """Coordinates of ``xc`` in the basis ``{Z, H'} + {X_beta}``.

    Raises ``ValueError`` when ``xc`` is outside the complexified algebra.
    """
    xc = xc.to_mode("gaussian")
    if not (is_in_algebra(xc.real_part()) and is_in_algebra(xc.imag_part())):
        raise ValueError("input is not in the complexified sp(4)")
    columns = [list(m.entries()) for _, m in DECOMPOSITION_BASIS]
    sol = solve_exact(columns, list(xc.entries()))
    if sol is None:
        raise ValueError("input is outside the span of the root-space basis")
    cartan = (sol[0], sol[1])
    comps = {w: c for (w, _), c in zip(DECOMPOSITION_BASIS[2:], sol[2:]) if c != 0}
    return RootDecomposition(cartan, comps)


def dimension() -> int:
    """Rank of the real basis over Q (computed, not assumed)."""
    from .exact_linalg import nullspace

    vecs = [list(m.entries()) for m in REAL_BASIS.values()]
    rows = [[v[k] for v in vecs] for k in range(16)]
    return len(vecs) - len(nullspace(rows, len(vecs)))


# -- bracket report ------------------------------------------------------------

Relation = tuple[str, Callable[[Mapping[str, ExactMatrix]], bool]]


def default_catalog() -> dict[str, ExactMatrix]:
    return {"Z": Z, "H'": H_PRIME, "X": X, "Xbar": X_BAR}


RELATIONS: list[Relation] = [
    ("[Z,Z]=0", lambda c: commutator(c["Z"], c["Z"]).is_zero()),
    ("[Z,H']=0", lambda c: commutator(c["Z"], c["H'"]).is_zero()),
    ("[Z,X]=0", lambda c: commutator(c["Z"], c["X"]).is_zero()),
    ("[Z,Xbar]=0", lambda c: commutator(c["Z"], c["Xbar"]).is_zero()),
    ("[H',X]=2X", lambda c: commutator(c["H'"], c["X"]) == c["X"].scale(2)),
    ("[H',Xbar]=-2Xbar", lambda c: commutator(c["H'"], c["Xbar"]) == c["Xbar"].scale(-2)),
    ("[X,Xbar]=H'", lambda c: commutator(c["X"], c["Xbar"]) == c["H'"]),
]


def verify_bracket_table(catalog: Mapping[str, ExactMatrix] | None = None) -> dict:
    """Check the k_C bracket relations and the root-space eigen-relations.

    Failures are reported, never raised.  ``printed`` entries document how the
    displayed (uncorrected) matrices fare; they do not count towards
    ``all_passed``.
    """
    cat = dict(default_catalog() if catalog is None else catalog)
    relations = []
    for name, check in RELATIONS:
        try:
            ok = bool(check(cat))
        except (KeyError, ValueError):
            ok = False
        relations.append({"relation": name, "passed": ok})

    roots = []
    for w, vec in ROOT_VECTORS.items():
        cz, ch = eigenvalue(Z, vec), eigenvalue(H_PRIME, vec)
        expected = (root_value(w, (1, 0)), root_value(w, (0, 1)))
        roots.append({"root": list(w), "in_algebra": is_in_algebra(vec.real_part())
                      and is_in_algebra(vec.imag_part()),
                      "eigenvalues": [str(cz), str(ch)],
                      "passed": (cz, ch) == expected})

    printed = []
    for w, vec in PRINTED_ROOT_VECTORS.items():
        ok = (eigenvalue(Z, vec), eigenvalue(H_PRIME, vec)) == (
            root_value(w, (1, 0)), root_value(w, (0, 1)))
        printed.append({"matrix": f"X_{w}", "is_root_vector": ok})
    printed.append({"matrix": "conj(X) as Xbar",
                    "relation": "[X,Xbar]=-H'",
                    "holds": commutator(X, X_BAR_PRINTED) == -H_PRIME})

    real_ok = all(is_in_algebra(m) for m in REAL_BASIS.values())
    dim = dimension()
    all_passed = (all(r["passed"] for r in relations) and all(r["passed"] for r in roots)
                  and real_ok and dim == 10)
    return {
        "relations": relations,
        "root_vectors": roots,
        "real_basis_in_algebra": real_ok,
        "dimension": dim,
        "pairing_matrix": [[str(x) for x in row] for row in _PAIRING],
        "printed_matrix_checks": printed,
        "all_passed": all_passed,
    }


def jacobi_basis() -> list[ExactMatrix]:
    """10 real basis elements plus the 8 root vectors, all in gaussian mode."""
    return [m.to_mode("gaussian") for m in REAL_BASIS.values()] + list(ROOT_VECTORS.values())


def check_jacobi(basis: list[ExactMatrix] | None = None) -> tuple[int, int]:
    """Jacobi identity on all 3-subsets of ``basis``; returns ``(n_passed, n_total)``."""
    basis = jacobi_basis() if basis is None else basis
    n = len(basis)
    br = {}
    for a, b in itertools.combinations(range(n), 2):
        br[a, b] = commutator(basis[a], basis[b])
    passed = total = 0
    for a, b, c in itertools.combinations(range(n), 3):
        # [[a,b],c] + [[b,c],a] + [[c,a],b]
        s = (commutator(br[a, b], basis[c]) + commutator(br[b, c], basis[a])
             - commutator(br[a, c], basis[b]))
        total += 1
        passed += s.is_zero()
    return passed, total


_PAIRING = pairing_matrix()
