"""Enumeration and classification of quiver representations over prime fields,
plus the raw counting primitives (orbits, homs, submodules, extensions) that
the algebra layer is built on.

A representation is a point of E_V(F_p), one matrix per arrow. Isomorphism
classes are G_V-orbits, computed exactly by a union-find sweep over all points
with a generating set of G_V. All counts are exact integers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from . import fpmat
from .fpmat import Matrix
from .quiver import DimVector, Quiver

SUPPORTED_PRIMES = (2, 3, 5, 7, 11)

# smallest primitive root mod p, used to generate GL_1 and the determinant part
_PRIMITIVE_ROOT = {2: 1, 3: 2, 5: 2, 7: 3, 11: 2}

DEFAULT_POINT_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed the configured point budget."""


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise ValueError(f"p must be one of {SUPPORTED_PRIMES}, got {self.p}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class Rep:
    """A point x = (x_h) of E_V(F_p); matrices follow the quiver's arrow order,
    with x_h of shape dim[t(h)] x dim[s(h)]."""

    quiver: Quiver
    p: int
    dim: DimVector
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for (s, t), m in zip(self.quiver.arrows, self.matrices):
            rows = len(m)
            if rows != self.dim[t]:
                raise ValueError(f"matrix for arrow ({s},{t}) has {rows} rows, want {self.dim[t]}")
            if rows and len(m[0]) != self.dim[s]:
                raise ValueError("matrix column count mismatch")


def zero_rep(Q: Quiver, dim: DimVector, p: int) -> Rep:
    mats = tuple(fpmat.zeros(dim[t], dim[s]) for s, t in Q.arrows)
    return Rep(Q, p, dim, mats)


def simple_rep(Q: Quiver, vertex: int, p: int) -> Rep:
    return zero_rep(Q, Q.unit(vertex), p)


class PointCodec:
    """Bijection between E_V(F_p) and 0..p^D-1 via mixed-radix digits.

    Digit order: arrows in quiver order, entries row-major. The encoding is
    the enumeration order contract: deterministic and prefix-partitionable.
    """

    def __init__(self, Q: Quiver, dim: DimVector, p: int):
        self.quiver = Q
        self.dim = dim
        self.p = p
        self.shapes = tuple((dim[t], dim[s]) for s, t in Q.arrows)
        self.dim_e = sum(r * c for r, c in self.shapes)
        self.size = p**self.dim_e

    def encode(self, matrices: tuple[Matrix, ...]) -> int:
        p = self.p
        idx = 0
        mult = 1
        for m in matrices:
            for row in m:
                for x in row:
                    idx += (x % p) * mult
                    mult *= p
        return idx

    def decode(self, idx: int) -> Rep:
        p = self.p
        mats = []
        for rows, cols in self.shapes:
            m = []
            for _ in range(rows):
                row = []
                for _ in range(cols):
                    idx, d = divmod(idx, p)
                    row.append(d)
                m.append(tuple(row))
            mats.append(tuple(m))
        return Rep(self.quiver, p, self.dim, tuple(mats))


def enumerate_points(
    Q: Quiver, dim: DimVector, p: int, budget: int = DEFAULT_POINT_BUDGET
) -> Iterator[Rep]:
    """Every point of E_V(F_p) exactly once, in codec order."""
    PrimeField(p)
    codec = PointCodec(Q, dim, p)
    if codec.size > budget:
        raise BudgetExceededError(
            f"enumerating E_V(F_{p}) at dim {dim} requires {codec.size} points, budget is {budget}"
        )
    for idx in range(codec.size):
        yield codec.decode(idx)


def group_order(Q: Quiver, dim: DimVector, p: int) -> int:
    """|G_V| = prod_i |GL_{dim_i}(F_p)|."""
    out = 1
    for n in dim:
        for k in range(n):
            out *= p**n - p**k
    return out


# -- hom spaces ---------------------------------------------------------------


def _intertwiner_system(x: Rep, y: Rep) -> tuple[list[list[int]], int]:
    """Linear system for graded maps f with f_{t(h)} x_h = y_h f_{s(h)}.

    Unknowns are the entries of all f_v (shape dim_y[v] x dim_x[v]), row-major,
    vertex blocks in vertex order. Returns (rows, unknown_count).
    """
    if x.quiver != y.quiver or x.p != y.p:
        raise ValueError("hom requires same quiver and prime")
    Q, p = x.quiver, x.p
    offs = []
    u = 0
    for v in range(Q.n):
        offs.append(u)
        u += y.dim[v] * x.dim[v]
    rows: list[list[int]] = []
    for (s, t), xh, yh in zip(Q.arrows, x.matrices, y.matrices):
        for i in range(y.dim[t]):
            for j in range(x.dim[s]):
                row = [0] * u
                # (f_t x_h)[i][j]
                for k in range(x.dim[t]):
                    row[offs[t] + i * x.dim[t] + k] = (row[offs[t] + i * x.dim[t] + k] + xh[k][j]) % p
                # -(y_h f_s)[i][j]
                for k in range(y.dim[s]):
                    row[offs[s] + k * x.dim[s] + j] = (row[offs[s] + k * x.dim[s] + j] - yh[i][k]) % p
                if any(row):
                    rows.append(row)
    return rows, u


def hom_dimension(x: Rep, y: Rep) -> int:
    rows, u = _intertwiner_system(x, y)
    if u == 0:
        return 0
    return u - fpmat.rank(rows, x.p)


def _hom_basis(x: Rep, y: Rep) -> list[tuple[Matrix, ...]]:
    """Basis of the intertwiner space as tuples of per-vertex matrices."""
    rows, u = _intertwiner_system(x, y)
    p = x.p
    if u == 0:
        return []
    if rows:
        r, pivots = fpmat.rref(rows, p)
    else:
        r, pivots = (), ()
    basis_vecs = []
    free = fpmat.nonpivot_columns(u, pivots)
    for j in free:
        vec = [0] * u
        vec[j] = 1
        for rr, c in zip(r, pivots):
            vec[c] = (-rr[j]) % p
        basis_vecs.append(vec)
    Q = x.quiver
    out = []
    for vec in basis_vecs:
        mats = []
        off = 0
        for v in range(Q.n):
            ry, cx = y.dim[v], x.dim[v]
            mats.append(tuple(tuple(vec[off + i * cx + j] for j in range(cx)) for i in range(ry)))
            off += ry * cx
        out.append(tuple(mats))
    return out


def aut_count_brute(x: Rep, limit: int = 300000) -> int:
    """|Aut(x)| by enumerating the endomorphism space and testing invertibility.

    Independent of the orbit-stabilizer route used by classification tables;
    kept as a cross-check oracle for small endomorphism spaces.
    """
    basis = _hom_basis(x, x)
    p = x.p
    d = len(basis)
    if p**d > limit:
        raise ValueError(f"endomorphism space too large to enumerate: {p}^{d}")
    Q = x.quiver
    count = 0
    for coeffs in product(range(p), repeat=d):
        fs = []
        for v in range(Q.n):
            n = x.dim[v]
            m = [[0] * n for _ in range(n)]
            for c, b in zip(coeffs, basis):
                if c:
                    bv = b[v]
                    for i in range(n):
                        for j in range(n):
                            m[i][j] = (m[i][j] + c * bv[i][j]) % p
            fs.append(tuple(tuple(row) for row in m))
        ok = True
        for v in range(Q.n):
            if x.dim[v] == 0:
                continue
            try:
                fpmat.mat_inv(fs[v], p)
            except ValueError:
                ok = False
                break
        if ok:
            count += 1
    return count


# -- classification ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class IsoClassId:
    """Deterministic label: dimension vector, hom fingerprint, tiebreak index.

    The fingerprint is (dim End, hom(x, S_v) for each vertex, hom(S_v, x) for
    each vertex). Equality of labels coincides with isomorphism inside a fixed
    table because classes are exact orbits; the fingerprint exists for cross
    run and cross prime identification.
    """

    dim: tuple[int, ...]
    fingerprint: tuple[int, ...]
    tiebreak: int

    def __str__(self) -> str:
        f = ".".join(str(k) for k in self.fingerprint)
        return f"[{','.join(str(d) for d in self.dim)}|{f}|{self.tiebreak}]"


@dataclass(frozen=True)
class ClassInfo:
    id: IsoClassId
    representative: Rep
    orbit_size: int
    aut_count: int


class ClassificationTable:
    """G_V-orbit decomposition of E_V(F_p) for one (quiver, dim, p)."""

    def __init__(
        self,
        Q: Quiver,
        dim: DimVector,
        p: int,
        classes: list[ClassInfo],
        class_of_point: list[int],
    ):
        self.quiver = Q
        self.dim = dim
        self.p = p
        self.classes = classes
        self._class_of_point = class_of_point
        self._codec = PointCodec(Q, dim, p)
        self._index = {c.id: k for k, c in enumerate(classes)}
        total = sum(c.orbit_size for c in classes)
        if total != self._codec.size:
            raise AssertionError("orbit equation violated: sum of orbit sizes != p^dim E_V")
        g = group_order(Q, dim, p)
        for c in classes:
            if c.orbit_size * c.aut_count != g:
                raise AssertionError("orbit-stabilizer violated for a class")

    def __len__(self) -> int:
        return len(self.classes)

    def ids(self) -> list[IsoClassId]:
        return [c.id for c in self.classes]

    def index_of(self, cid: IsoClassId) -> int:
        try:
            return self._index[cid]
        except KeyError:
            raise KeyError(f"unknown isomorphism class {cid}") from None

    def info(self, cid: IsoClassId) -> ClassInfo:
        return self.classes[self.index_of(cid)]

    def label(self, cid: IsoClassId) -> str:
        """CLI-facing name dim:index, index in table order."""
        return f"{self.dim.to_csv()}:{self.index_of(cid)}"

    def class_of_index(self, point_index: int) -> IsoClassId:
        return self.classes[self._class_of_point[point_index]].id

    def iso_class_of(self, x: Rep) -> IsoClassId:
        if x.quiver != self.quiver or x.p != self.p or x.dim != self.dim:
            raise ValueError("representation does not match table context")
        return self.class_of_index(self._codec.encode(x.matrices))

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_text(),
            "quiver_hash": quiver_hash(self.quiver),
            "p": self.p,
            "dim": list(self.dim.entries),
            "classes": [
                {
                    "id": {
                        "dim": list(c.id.dim),
                        "fingerprint": list(c.id.fingerprint),
                        "tiebreak": c.id.tiebreak,
                    },
                    "representative": [
                        [x for row in m for x in row] for m in c.representative.matrices
                    ],
                    "orbit_size": c.orbit_size,
                    "aut_count": c.aut_count,
                }
                for c in self.classes
            ],
            "class_of_point": list(self._class_of_point),
        }

    @staticmethod
    def from_json(data: dict) -> "ClassificationTable":
        Q = Quiver.from_text(data["quiver"])
        p = data["p"]
        dim = DimVector(tuple(data["dim"]))
        classes = []
        for c in data["classes"]:
            cid = IsoClassId(
                tuple(c["id"]["dim"]), tuple(c["id"]["fingerprint"]), c["id"]["tiebreak"]
            )
            mats = []
            for (s, t), flat in zip(Q.arrows, c["representative"]):
                rows, cols = dim[t], dim[s]
                mats.append(
                    tuple(tuple(flat[i * cols + j] for j in range(cols)) for i in range(rows))
                )
            rep = Rep(Q, p, dim, tuple(mats))
            classes.append(ClassInfo(cid, rep, c["orbit_size"], c["aut_count"]))
        return ClassificationTable(Q, dim, p, classes, list(data["class_of_point"]))


def quiver_hash(Q: Quiver) -> str:
    return hashlib.sha256(Q.to_text().encode()).hexdigest()[:16]


def _gl_generators(n: int, p: int) -> list[tuple[Matrix, Matrix]]:
    """Generating set of GL_n(F_p) as (g, g^{-1}) pairs: adjacent transvections
    plus one diagonal with a primitive root (transvections alone give SL_n)."""
    gens: list[tuple[Matrix, Matrix]] = []
    if n == 0:
        return gens
    g = _PRIMITIVE_ROOT[p]
    if g != 1:
        d = [[0] * n for _ in range(n)]
        for i in range(n):
            d[i][i] = 1
        d[0][0] = g
        dm = tuple(tuple(r) for r in d)
        gens.append((dm, fpmat.mat_inv(dm, p)))
    for k in range(n - 1):
        for (i, j) in ((k, k + 1), (k + 1, k)):
            e = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            e[i][j] = 1
            em = tuple(tuple(r) for r in e)
            gens.append((em, fpmat.mat_inv(em, p)))
    return gens


def classify(
    Q: Quiver, dim: DimVector, p: int, budget: int = DEFAULT_POINT_BUDGET
) -> ClassificationTable:
    """Partition E_V(F_p) into G_V-orbits.

    Orbits are connected components of the action graph of a generating set,
    found by union-find; representatives are the minimal points in enumeration
    order, and aut counts come from orbit-stabilizer (|G_V| / orbit size, with
    exact divisibility asserted).
    """
    PrimeField(p)
    codec = PointCodec(Q, dim, p)
    n_pts = codec.size
    if n_pts > budget:
        raise BudgetExceededError(
            f"classification at dim {dim}, p={p} requires {n_pts} points, budget is {budget}"
        )

    parent = list(range(n_pts))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    gens = []  # (vertex, g, g_inv)
    for v in range(Q.n):
        for g, ginv in _gl_generators(dim[v], p):
            gens.append((v, g, ginv))

    arrows = Q.arrows
    for idx in range(n_pts):
        x = codec.decode(idx)
        for v, g, ginv in gens:
            mats = list(x.matrices)
            for a, (s, t) in enumerate(arrows):
                m = mats[a]
                if t == v:
                    m = fpmat.mat_mul(g, m, p)
                if s == v:
                    m = fpmat.mat_mul(m, ginv, p)
                mats[a] = m
            union(idx, codec.encode(tuple(mats)))

    members: dict[int, list[int]] = {}
    for idx in range(n_pts):
        members.setdefault(find(idx), []).append(idx)

    g_order = group_order(Q, dim, p)
    simples = [simple_rep(Q, v, p) for v in range(Q.n)]
    raw = []
    for root, pts in members.items():
        rep = codec.decode(min(pts))
        fp = (
            hom_dimension(rep, rep),
            *(hom_dimension(rep, s) for s in simples),
            *(hom_dimension(s, rep) for s in simples),
        )
        raw.append((fp, min(pts), pts, rep))
    raw.sort(key=lambda r: (r[0], r[1]))

    classes = []
    tiebreaks: dict[tuple, int] = {}
    roots_in_order = []
    for fp, _, pts, rep in raw:
        k = tiebreaks.get(fp, 0)
        tiebreaks[fp] = k + 1
        cid = IsoClassId(dim.entries, fp, k)
        orbit = len(pts)
        if g_order % orbit:
            raise AssertionError("orbit size does not divide group order")
        classes.append(ClassInfo(cid, rep, orbit, g_order // orbit))
        roots_in_order.append(pts)

    class_of_point = [0] * n_pts
    for ci, pts in enumerate(roots_in_order):
        for idx in pts:
            class_of_point[idx] = ci
    return ClassificationTable(Q, dim, p, classes, class_of_point)


def iso_class_of(table: ClassificationTable, x: Rep) -> IsoClassId:
    return table.iso_class_of(x)


class TableCache:
    """Memoized classification tables for one (quiver, p), shared by all counts."""

    def __init__(self, Q: Quiver, p: int, budget: int = DEFAULT_POINT_BUDGET,
                 loader: Callable[[DimVector], ClassificationTable | None] | None = None,
                 saver: Callable[[ClassificationTable], None] | None = None):
        PrimeField(p)
        self.quiver = Q
        self.p = p
        self.budget = budget
        self._tables: dict[tuple[int, ...], ClassificationTable] = {}
        self._loader = loader
        self._saver = saver

    def table(self, dim: DimVector) -> ClassificationTable:
        key = dim.entries
        t = self._tables.get(key)
        if t is None:
            if self._loader is not None:
                t = self._loader(dim)
            if t is None:
                t = classify(self.quiver, dim, self.p, self.budget)
                if self._saver is not None:
                    self._saver(t)
            self._tables[key] = t
        return t


# -- graded subspaces and submodule counting -----------------------------------


@dataclass(frozen=True)
class GradedSubspace:
    """An x-stable I-graded subspace with its induced sub and quotient points.

    `bases` holds one RREF row basis per vertex; quotient coordinates are the
    non-pivot standard vectors in increasing order.
    """

    bases: tuple[Matrix, ...]
    sub_rep: Rep
    quot_rep: Rep


def stable_subspaces(x: Rep, beta: DimVector) -> Iterator[GradedSubspace]:
    """All x-stable graded subspaces of dimension vector beta, each once."""
    Q, p = x.quiver, x.p
    if not beta <= x.dim:
        return
    per_vertex = [list(fpmat.subspaces(x.dim[v], beta[v], p)) for v in range(Q.n)]
    pivot_cache = {}

    def pivots_of(basis: Matrix, n: int) -> tuple[int, ...]:
        key = (basis, n)
        if key not in pivot_cache:
            pivot_cache[key] = tuple(next(j for j in range(n) if row[j]) for row in basis)
        return pivot_cache[key]

    for combo in product(*per_vertex):
        stable = True
        sub_mats: list[Matrix] = []
        quot_mats: list[Matrix] = []
        for (s, t), xh in zip(Q.arrows, x.matrices):
            ws, wt = combo[s], combo[t]
            piv_t = pivots_of(wt, x.dim[t]) if wt else ()
            sub_rows = []
            for w in ws:
                img = fpmat.mat_vec(xh, w, p)
                coords, res = fpmat.reduce_by_basis(img, wt, piv_t, p)
                if any(res):
                    stable = False
                    break
                sub_rows.append(coords)
            if not stable:
                break
            # sub matrix: shape beta_t x beta_s, columns indexed by basis of W_s
            sub_mats.append(tuple(zip(*sub_rows)) if sub_rows else fpmat.zeros(beta[t], 0))
            # quotient matrix on non-pivot coordinates
            np_s = fpmat.nonpivot_columns(x.dim[s], pivots_of(ws, x.dim[s]) if ws else ())
            np_t = fpmat.nonpivot_columns(x.dim[t], piv_t)
            qcols = []
            for j in np_s:
                e = [0] * x.dim[s]
                e[j] = 1
                img = fpmat.mat_vec(xh, e, p)
                _, res = fpmat.reduce_by_basis(img, wt, piv_t, p)
                qcols.append(tuple(res[k] for k in np_t))
            quot_mats.append(tuple(zip(*qcols)) if qcols else fpmat.zeros(len(np_t), 0))
        if not stable:
            continue
        sub = Rep(Q, p, beta, tuple(_normalize_shape(m, beta[t], beta[s]) for m, (s, t) in zip(sub_mats, Q.arrows)))
        qdim = x.dim - beta
        quot = Rep(Q, p, qdim, tuple(_normalize_shape(m, qdim[t], qdim[s]) for m, (s, t) in zip(quot_mats, Q.arrows)))
        yield GradedSubspace(tuple(combo), sub, quot)


def _normalize_shape(m, rows: int, cols: int) -> Matrix:
    if rows == 0:
        return ()
    if cols == 0:
        return tuple(() for _ in range(rows))
    return tuple(tuple(int(v) for v in row) for row in m)


def filtration_counts(
    tables: TableCache, M: IsoClassId, beta: DimVector
) -> dict[tuple[IsoClassId, IsoClassId], int]:
    """For the representative of M, count stable subspaces of dimension beta
    bucketed by (quotient class, sub class)."""
    dim = DimVector(M.dim)
    big = tables.table(dim)
    x = big.info(M).representative
    sub_t = tables.table(beta)
    quot_t = tables.table(dim - beta)
    out: dict[tuple[IsoClassId, IsoClassId], int] = {}
    for gs in stable_subspaces(x, beta):
        key = (quot_t.iso_class_of(gs.quot_rep), sub_t.iso_class_of(gs.sub_rep))
        out[key] = out.get(key, 0) + 1
    return out


def filtration_number(
    tables: TableCache, M: IsoClassId, N: IsoClassId, L: IsoClassId
) -> int:
    """F^M_{N,L}: number of stable subspaces of M with sub in L, quotient in N."""
    if tuple(a + b for a, b in zip(N.dim, L.dim)) != M.dim:
        raise ValueError("dimension mismatch: dim N + dim L must equal dim M")
    return filtration_counts(tables, M, DimVector(L.dim)).get((N, L), 0)


# -- extension counting (restriction fibers) ------------------------------------


def _assemble(Q: Quiver, p: int, quot: Rep, sub: Rep, corners: tuple[Matrix, ...]) -> Rep:
    """Block representation on V_{alpha+beta} with the quotient on the leading
    coordinates and the sub on the trailing ones; corner blocks are the lower
    left entries, one per arrow."""
    alpha, beta = quot.dim, sub.dim
    mats = []
    for a, (s, t) in enumerate(Q.arrows):
        zr, yr, cr = quot.matrices[a], sub.matrices[a], corners[a]
        rows = []
        for i in range(alpha[t]):
            rows.append(tuple(zr[i]) + (0,) * beta[s])
        for i in range(beta[t]):
            rows.append(tuple(cr[i]) + tuple(yr[i]))
        mats.append(tuple(rows))
    return Rep(Q, p, alpha + beta, tuple(mats))


def _corner_shapes(Q: Quiver, alpha: DimVector, beta: DimVector) -> list[tuple[int, int]]:
    return [(beta[t], alpha[s]) for s, t in Q.arrows]


def _iter_corners(Q: Quiver, alpha: DimVector, beta: DimVector, p: int) -> Iterator[tuple[Matrix, ...]]:
    shapes = _corner_shapes(Q, alpha, beta)
    total = sum(r * c for r, c in shapes)
    for flat in product(range(p), repeat=total):
        mats = []
        off = 0
        for r, c in shapes:
            mats.append(tuple(tuple(flat[off + i * c + j] for j in range(c)) for i in range(r)))
            off += r * c
        yield tuple(mats)


def extension_histogram(
    tables: TableCache, N: IsoClassId, L: IsoClassId
) -> dict[IsoClassId, int]:
    """All extension counts with quotient point rep(N) and sub point rep(L):
    the map M -> e^M_{N,L} obtained from one sweep over the corner blocks."""
    Q, p = tables.quiver, tables.p
    alpha, beta = DimVector(N.dim), DimVector(L.dim)
    z = tables.table(alpha).info(N).representative
    y = tables.table(beta).info(L).representative
    big = tables.table(alpha + beta)
    out: dict[IsoClassId, int] = {}
    for corners in _iter_corners(Q, alpha, beta, p):
        cid = big.iso_class_of(_assemble(Q, p, z, y, corners))
        out[cid] = out.get(cid, 0) + 1
    return out


def extension_count(
    tables: TableCache, N: IsoClassId, L: IsoClassId, M: IsoClassId
) -> int:
    """e^M_{N,L}: points of the fixed-subspace fiber with sub point rep(L),
    quotient point rep(N), and total isomorphic to M. The fixed subspace is
    the coordinate span of the trailing dim(L) basis vectors at each vertex."""
    if tuple(a + b for a, b in zip(N.dim, L.dim)) != M.dim:
        raise ValueError("dimension mismatch: dim N + dim L must equal dim M")
    return extension_histogram(tables, N, L).get(M, 0)


# -- derivation fibers ----------------------------------------------------------


def _point_class_at(tables: TableCache, dim: DimVector) -> IsoClassId:
    """The unique class on a one-point representation space (dims concentrated
    at a single vertex have no arrows inside)."""
    t = tables.table(dim)
    if len(t) != 1:
        raise AssertionError(f"expected a single class at dim {dim}")
    return t.classes[0].id


def derive_sub_histogram(
    tables: TableCache, alpha: DimVector, i: int, m: int
) -> dict[tuple[IsoClassId, IsoClassId], int]:
    """Counts for the restriction with quotient part m*e_i.

    Entry (M, N) is the number of points x of the fixed-subspace fiber with
    x restricted to the trailing subspace equal to rep(N) and x isomorphic
    to M. Empty when m exceeds alpha_i.
    """
    Q = tables.quiver
    mi = Q.unit(i).scale(m)
    if not mi <= alpha:
        return {}
    gamma = alpha - mi
    quot_id = _point_class_at(tables, mi)
    out: dict[tuple[IsoClassId, IsoClassId], int] = {}
    for N in tables.table(gamma).ids():
        for M, c in extension_histogram(tables, quot_id, N).items():
            out[(M, N)] = c
    return out


def derive_quot_histogram(
    tables: TableCache, alpha: DimVector, i: int, m: int
) -> dict[tuple[IsoClassId, IsoClassId], int]:
    """Counts for the restriction with sub part m*e_i: entry (M, N) counts
    fiber points with quotient equal to rep(N) and total isomorphic to M."""
    Q = tables.quiver
    mi = Q.unit(i).scale(m)
    if not mi <= alpha:
        return {}
    gamma = alpha - mi
    sub_id = _point_class_at(tables, mi)
    out: dict[tuple[IsoClassId, IsoClassId], int] = {}
    for N in tables.table(gamma).ids():
        for M, c in extension_histogram(tables, N, sub_id).items():
            out[(M, N)] = c
    return out


def derive_sub_w_counts(
    tables: TableCache, M: IsoClassId, i: int, m: int
) -> dict[IsoClassId, int]:
    """Sum-over-subspaces oracle: for the representative x of M, count the
    x-stable graded subspaces full away from i and of codimension m at i,
    bucketed by the class of the induced sub representation.

    Related to derive_sub_histogram by orbit sizes: with G the number of
    codimension-m subspaces at vertex i,
    |O_M| * w_counts[N] = G * |O_N| * histogram[(M, N)].
    """
    alpha = DimVector(M.dim)
    Q = tables.quiver
    mi = Q.unit(i).scale(m)
    if not mi <= alpha:
        return {}
    x = tables.table(alpha).info(M).representative
    sub_t = tables.table(alpha - mi)
    out: dict[IsoClassId, int] = {}
    for gs in stable_subspaces(x, alpha - mi):
        n = sub_t.iso_class_of(gs.sub_rep)
        out[n] = out.get(n, 0) + 1
    return out


def derive_quot_w_counts(
    tables: TableCache, M: IsoClassId, i: int, m: int
) -> dict[IsoClassId, int]:
    """Mirror oracle: x-stable subspaces of dimension m*e_i, bucketed by the
    class of the quotient representation."""
    alpha = DimVector(M.dim)
    Q = tables.quiver
    mi = Q.unit(i).scale(m)
    if not mi <= alpha:
        return {}
    x = tables.table(alpha).info(M).representative
    quot_t = tables.table(alpha - mi)
    out: dict[IsoClassId, int] = {}
    for gs in stable_subspaces(x, mi):
        n = quot_t.iso_class_of(gs.quot_rep)
        out[n] = out.get(n, 0) + 1
    return out


def _suffix_intersection_dim(basis: Matrix, lead_cols: int, p: int) -> int:
    """dim of (row span of basis) meet (span of coordinates past lead_cols).

    The intersection is the kernel of projection onto the leading columns, so
    its dimension is rank defect of the left block.
    """
    if not basis:
        return 0
    left = [row[:lead_cols] for row in basis]
    return len(basis) - fpmat.rank(left, p)


def stratified_pair_counts(
    tables: TableCache,
    alpha: DimVector,
    beta: DimVector,
    A: IsoClassId,
    B: IsoClassId,
    i: int,
    m: int,
    side: str,
) -> dict[int, dict[IsoClassId, int]]:
    """Per-stratum fiber counts for the derivation of an induction product.

    Pairs (x, W) are counted where x runs over the fixed-subspace fiber of the
    derivation at the product grading, W over x-stable subspaces of dimension
    beta with quotient in A and sub in B. Each pair lands in the stratum
    indexed by the intersection dimension of W with the fixed subspace at
    vertex i; strata[t][N] counts pairs over the fiber point rep(N).

    side "sub" is the quotient-at-m*e_i flavor, side "quot" the mirror.
    """
    if side not in ("sub", "quot"):
        raise ValueError("side must be 'sub' or 'quot'")
    Q, p = tables.quiver, tables.p
    nu = alpha + beta
    mi = Q.unit(i).scale(m)
    if not mi <= nu:
        return {}
    rest = nu - mi
    a_t = tables.table(alpha)
    b_t = tables.table(beta)
    strata: dict[int, dict[IsoClassId, int]] = {}
    point_id = _point_class_at(tables, mi)
    for N in tables.table(rest).ids():
        z = tables.table(rest).info(N).representative
        if side == "sub":
            quot, sub = tables.table(mi).info(point_id).representative, z
            corner_dims = (mi, rest)
        else:
            quot, sub = z, tables.table(mi).info(point_id).representative
            corner_dims = (rest, mi)
        for corners in _iter_corners(Q, corner_dims[0], corner_dims[1], p):
            x = _assemble(Q, p, quot, sub, corners)
            for gs in stable_subspaces(x, beta):
                if a_t.iso_class_of(gs.quot_rep) != A or b_t.iso_class_of(gs.sub_rep) != B:
                    continue
                if side == "sub":
                    cut = _suffix_intersection_dim(gs.bases[i], m, p)
                    t = m - beta[i] + cut
                else:
                    cut = _suffix_intersection_dim(gs.bases[i], nu[i] - m, p)
                    t = m - cut
                strata.setdefault(t, {})
                strata[t][N] = strata[t].get(N, 0) + 1
    return strata
