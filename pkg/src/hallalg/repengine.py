"""Module-category engines for quiver representations over finite fields.

Two engines feed the Hall algebra layer with isoclass lists, automorphism
orders, Hall numbers, Hom dimensions, socles and Krull-Schmidt data:

  * NilpotentCyclicEngine: nilpotent representations of the cyclic quiver
    with r vertices, classified by multisegments.  Isomorphism testing is
    a rank computation, automorphism orders come from a closed formula,
    and Hall numbers are exact submodule counts on explicit points.
  * BruteForceEngine: any small quiver (full cyclic, Kronecker, A2).
    The representation variety is partitioned into group orbits by
    breadth-first closure under generators, so isomorphism is orbit
    identity and automorphism orders follow from orbit-stabilizer.

Dimension vectors are plain tuples.  All computations are exact.
"""

from __future__ import annotations

from itertools import product

from . import gf
from .coeffring import QPolynomial, interpolate_q
from .gf import FieldSpec
from .partitions import Partition

_SUBSPACE_CACHE: dict = {}

__all__ = [
    "Quiver",
    "jordan_quiver",
    "cyclic_quiver",
    "kronecker_quiver",
    "a2_quiver",
    "euler_form",
    "add_dim",
    "IsoClass",
    "NilpotentCyclicEngine",
    "BruteForceEngine",
    "get_nilpotent_engine",
    "get_brute_engine",
    "hall_polynomial",
    "multisegment_str",
    "parse_multisegment",
    "jordan_block",
    "jordan_matrix",
    "kronecker_point_zero",
    "kronecker_point_infty",
    "is_regular_kronecker",
    "kronecker_regular_classes",
]

BRUTE_TOTAL_DIM_CAP = 8
POINT_CAP = 10 ** 6
END_ENUM_CAP = 2 ** 16


class Quiver:
    """A finite quiver: vertex count plus a tuple of (tail, head) arrows."""

    __slots__ = ("nv", "arrows", "name")

    def __init__(self, nv: int, arrows, name: str = "Q"):
        arrows = tuple((int(t), int(h)) for t, h in arrows)
        for t, h in arrows:
            if not (0 <= t < nv and 0 <= h < nv):
                raise ValueError("arrow endpoint out of range")
        self.nv = nv
        self.arrows = arrows
        self.name = name

    def reverse_arrows(self, subset) -> "Quiver":
        """The quiver with the arrows at the given indices reversed."""
        subset = set(subset)
        arrows = tuple((h, t) if i in subset else (t, h)
                       for i, (t, h) in enumerate(self.arrows))
        return Quiver(self.nv, arrows, name=self.name + "'")

    def is_cycle(self) -> bool:
        if self.nv == 1:
            return self.arrows == ((0, 0),)
        expected = tuple((i, (i + 1) % self.nv) for i in range(self.nv))
        return self.arrows == expected

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.nv == other.nv
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.nv, self.arrows))

    def __repr__(self):
        return f"Quiver({self.name}, nv={self.nv}, arrows={self.arrows})"


def jordan_quiver() -> Quiver:
    return Quiver(1, [(0, 0)], name="C1")


def cyclic_quiver(r: int) -> Quiver:
    if r < 1:
        raise ValueError("cyclic quiver needs at least one vertex")
    if r == 1:
        return jordan_quiver()
    return Quiver(r, [(i, (i + 1) % r) for i in range(r)], name=f"C{r}")


def kronecker_quiver() -> Quiver:
    return Quiver(2, [(0, 1), (0, 1)], name="K2")


def a2_quiver() -> Quiver:
    return Quiver(2, [(0, 1)], name="A2")


def euler_form(quiver: Quiver, x, y) -> int:
    """<x, y> = sum_i x_i y_i - sum_arrows x_tail y_head."""
    if len(x) != quiver.nv or len(y) != quiver.nv:
        raise ValueError("dimension vector length does not match the quiver")
    total = sum(a * b for a, b in zip(x, y))
    for t, h in quiver.arrows:
        total -= x[t] * y[h]
    return total


def add_dim(x, y):
    return tuple(a + b for a, b in zip(x, y))


def sub_dim(x, y):
    return tuple(a - b for a, b in zip(x, y))


# ---------------------------------------------------------------------------
# Multisegments (nilpotent cyclic classes)
# ---------------------------------------------------------------------------
#
# A multisegment is stored canonically as a sorted tuple of entries
# ((vertex, length), multiplicity) with 0-based vertices.  The segment
# (i, l) is the indecomposable of length l whose top sits at vertex i
# and whose socle sits at vertex i + l - 1 (mod r).

def ms_canonical(entries) -> tuple:
    merged = {}
    for (i, l), m in entries:
        if m:
            merged[(i, l)] = merged.get((i, l), 0) + m
    return tuple(sorted(((k, m) for k, m in merged.items() if m)))


def ms_dim_vector(ms, r: int) -> tuple:
    d = [0] * r
    for (i, l), m in ms:
        for t in range(l):
            d[(i + t) % r] += m
    return tuple(d)


def ms_total(ms) -> int:
    return sum(l * m for (_, l), m in ms)


def multisegment_str(ms) -> str:
    """Text form like 'S1[2]+S2[1]' or '2*S1[3]' (1-based vertices)."""
    if not ms:
        return "0"
    parts = []
    for (i, l), m in ms:
        seg = f"S{i + 1}[{l}]"
        parts.append(seg if m == 1 else f"{m}*{seg}")
    return "+".join(parts)


def parse_multisegment(text: str, r: int) -> tuple:
    text = text.strip()
    if text == "0" or not text:
        return ()
    entries = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        mult = 1
        if "*" in chunk:
            head, chunk = chunk.split("*")
            mult = int(head)
        if not (chunk.startswith("S") and "[" in chunk and chunk.endswith("]")):
            raise ValueError(f"bad segment syntax {chunk!r}")
        vertex, length = chunk[1:-1].split("[")
        i = int(vertex) - 1
        l = int(length)
        if not (0 <= i < r and l >= 1):
            raise ValueError(f"segment {chunk!r} out of range for C{r}")
        entries.append(((i, l), mult))
    return ms_canonical(entries)


def hom_dim_segments(r: int, seg1, seg2) -> int:
    """dim Hom(S_i[l], S_j[m]) = #{1 <= t <= min(l,m) : t = j+m-i (mod r)}."""
    (i, l), (j, m) = seg1, seg2
    target = (j + m - i) % r
    return sum(1 for t in range(1, min(l, m) + 1) if t % r == target)


# ---------------------------------------------------------------------------
# Isomorphism classes
# ---------------------------------------------------------------------------

class IsoClass:
    """Engine-scoped canonical key for an isomorphism class.

    Nilpotent cyclic engines key classes by multisegment; brute-force
    engines key them by (grade, orbit index).
    """

    __slots__ = ("engine_id", "kind", "grade", "key")

    def __init__(self, engine_id: str, kind: str, grade: tuple, key):
        self.engine_id = engine_id
        self.kind = kind
        self.grade = grade
        self.key = key

    def __eq__(self, other):
        return (isinstance(other, IsoClass) and self.engine_id == other.engine_id
                and self.kind == other.kind and self.grade == other.grade
                and self.key == other.key)

    def __hash__(self):
        return hash((self.engine_id, self.kind, self.grade, self.key))

    def sort_key(self):
        return (self.grade, self.key)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def render(self) -> str:
        if self.kind == "ms":
            return multisegment_str(self.key)
        d = "(" + ",".join(str(x) for x in self.grade) + ")"
        return f"{self.engine_id}|d:{d}|#{self.key}"

    def __repr__(self):
        return f"IsoClass({self.render()})"


# ---------------------------------------------------------------------------
# Shared submodule enumeration
# ---------------------------------------------------------------------------

def _apply_to_row(F: FieldSpec, X, u):
    """Image of the column vector with coordinate row u under X, as a row."""
    out = []
    for row in X:
        s = 0
        for a, x in zip(row, u):
            if a and x:
                s = F.add(s, F.mul(a, x))
        out.append(s)
    return tuple(out)


def _subspace_lists(F: FieldSpec, n: int):
    """All subspaces of F^n as (basis rows, pivots), grouped in one list."""
    key = (F.q, n)
    if key in _SUBSPACE_CACHE:
        return _SUBSPACE_CACHE[key]
    out = []
    for k in range(n + 1):
        for basis in gf.subspaces(F, n, k):
            pivots = tuple(next(j for j, x in enumerate(row) if x) for row in basis)
            out.append((basis, pivots))
    _SUBSPACE_CACHE[key] = out
    return out


def _sub_quotient_point(F: FieldSpec, quiver: Quiver, mats, dims, bases, pivots):
    """Sub and quotient representations induced on a stable subspace tuple.

    Returns (sub_mats, sub_dims, quot_mats, quot_dims) or None when the
    subspace tuple is not stable under every arrow.
    """
    nv = quiver.nv
    sub_dims = tuple(len(bases[i]) for i in range(nv))
    # stability plus coordinates of images in the sub bases
    sub_cols = [None] * len(quiver.arrows)
    for a_idx, (t, h) in enumerate(quiver.arrows):
        cols = []
        X = mats[a_idx]
        for u in bases[t]:
            w = _apply_to_row(F, X, u)
            coords = gf.rref_membership_coords(F, bases[h], pivots[h], w)
            if coords is None:
                return None
            cols.append(coords)
        sub_cols[a_idx] = cols
    sub_mats = []
    quot_mats = []
    nonpivots = [tuple(c for c in range(dims[i]) if c not in pivots[i])
                 for i in range(nv)]
    quot_dims = tuple(len(nonpivots[i]) for i in range(nv))
    for a_idx, (t, h) in enumerate(quiver.arrows):
        cols = sub_cols[a_idx]
        S = tuple(tuple(cols[j][i] for j in range(sub_dims[t]))
                  for i in range(sub_dims[h]))
        sub_mats.append(S)
        # quotient: push the non-pivot standard vectors through and reduce
        X = mats[a_idx]
        qcols = []
        for c in nonpivots[t]:
            w = list(X[i][c] for i in range(dims[h]))
            for row, p in zip(bases[h], pivots[h]):
                f = w[p]
                if f:
                    for j, x in enumerate(row):
                        if x:
                            w[j] = F.sub(w[j], F.mul(f, x))
            qcols.append(tuple(w[c2] for c2 in nonpivots[h]))
        Qm = tuple(tuple(qcols[j][i] for j in range(quot_dims[t]))
                   for i in range(quot_dims[h]))
        quot_mats.append(Qm)
    return tuple(sub_mats), sub_dims, tuple(quot_mats), quot_dims


def _submodule_table(F, quiver, mats, dims, classify):
    """Count stable subspace tuples of a point by (quotient class, sub class).

    classify(mats, dims) must return a hashable class key.  The returned
    dict maps (quot_key, sub_key) -> number of submodules, which is the
    Hall number F^L_{quot, sub}.
    """
    per_vertex = [_subspace_lists(F, dims[i]) for i in range(quiver.nv)]
    table = {}
    for choice in product(*per_vertex):
        bases = tuple(c[0] for c in choice)
        pivots = tuple(c[1] for c in choice)
        res = _sub_quotient_point(F, quiver, mats, dims, bases, pivots)
        if res is None:
            continue
        sub_mats, sub_dims, quot_mats, quot_dims = res
        key = (classify(quot_mats, quot_dims), classify(sub_mats, sub_dims))
        table[key] = table.get(key, 0) + 1
    return table


def _hom_space_basis(F, quiver, matsM, dimsM, matsN, dimsN):
    """Basis of Hom(M, N): tuples of per-vertex matrices f_i with
    f_h X^M = X^N f_t for every arrow."""
    nv = quiver.nv
    offsets = []
    total = 0
    for i in range(nv):
        offsets.append(total)
        total += dimsN[i] * dimsM[i]
    if total == 0:
        return [], 0

    def var(i, a, b):  # entry f_i[a][b]
        return offsets[i] + a * dimsM[i] + b

    rows = []
    for a_idx, (t, h) in enumerate(quiver.arrows):
        XM = matsM[a_idx]
        XN = matsN[a_idx]
        for a in range(dimsN[h]):
            for b in range(dimsM[t]):
                row = [0] * total
                for c in range(dimsM[h]):
                    coeff = XM[c][b]
                    if coeff:
                        j = var(h, a, c)
                        row[j] = F.add(row[j], coeff)
                for c in range(dimsN[t]):
                    coeff = XN[a][c]
                    if coeff:
                        j = var(t, c, b)
                        row[j] = F.sub(row[j], coeff)
                if any(row):
                    rows.append(tuple(row))
    if rows:
        kernel = gf.mat_kernel_basis(F, tuple(rows))
    else:
        kernel = [tuple(1 if i == j else 0 for i in range(total)) for j in range(total)]

    def unflatten(vec):
        mats = []
        for i in range(nv):
            base = offsets[i]
            mats.append(tuple(tuple(vec[base + a * dimsM[i] + b]
                                    for b in range(dimsM[i]))
                              for a in range(dimsN[i])))
        return tuple(mats)

    return [unflatten(v) for v in kernel], total


# ---------------------------------------------------------------------------
# Nilpotent cyclic engine
# ---------------------------------------------------------------------------

class NilpotentCyclicEngine:
    """Nilpotent representations of the cyclic quiver with r vertices over GF(q0).

    Classes are multisegments; automorphism orders and Hom dimensions use
    the structured combinatorial formulas, Hall numbers use exact
    submodule enumeration on explicit matrix realizations.
    """

    def __init__(self, r: int, q0: int):
        if r < 1:
            raise ValueError("need r >= 1")
        self.r = r
        self.q0 = q0
        self.field = FieldSpec.from_order(q0)
        self.quiver = cyclic_quiver(r)
        self.engine_id = f"C{r}^0|q:{q0}"
        self._classes = {}
        self._subtables = {}
        self._aut = {}

    # -- classes -------------------------------------------------------------

    def make_class(self, ms) -> IsoClass:
        ms = ms_canonical(ms)
        return IsoClass(self.engine_id, "ms", ms_dim_vector(ms, self.r), ms)

    def zero_class(self) -> IsoClass:
        return self.make_class(())

    def simple(self, i: int) -> IsoClass:
        return self.make_class((((i % self.r, 1), 1),))

    def segment_class(self, i: int, l: int, mult: int = 1) -> IsoClass:
        return self.make_class((((i % self.r, l), mult),))

    def classes(self, d) -> list:
        """All isoclasses with dimension vector d, sorted canonically."""
        d = tuple(d)
        if d in self._classes:
            return self._classes[d]
        total = sum(d)
        segs = []
        for l in range(1, total + 1):
            for i in range(self.r):
                dv = ms_dim_vector((((i, l), 1),), self.r)
                if all(a <= b for a, b in zip(dv, d)):
                    segs.append(((i, l), dv))
        found = []

        def search(idx, remaining, acc):
            if not any(remaining):
                found.append(ms_canonical(acc))
                return
            if idx == len(segs):
                return
            (seg, dv) = segs[idx]
            max_mult = min((rem // c if c else 10 ** 9)
                           for rem, c in zip(remaining, dv) if c)
            for m in range(max_mult, -1, -1):
                if m:
                    new_rem = tuple(rem - m * c for rem, c in zip(remaining, dv))
                    if min(new_rem) < 0:
                        continue
                    search(idx + 1, new_rem, acc + [(seg, m)])
                else:
                    search(idx + 1, remaining, acc)

        search(0, d, [])
        out = sorted(IsoClass(self.engine_id, "ms", d, ms) for ms in set(found))
        self._classes[d] = out
        return out

    # -- explicit points -----------------------------------------------------

    def rep_point(self, c: IsoClass):
        """Matrix realization of a multisegment class: one matrix per arrow."""
        ms = c.key
        r = self.r
        segments = []
        for (i, l), m in ms:
            segments.extend([(i, l)] * m)
        index = [{} for _ in range(r)]
        dims = [0] * r
        for s_idx, (i, l) in enumerate(segments):
            for t in range(1, l + 1):
                v = (i + t - 1) % r
                index[v][(s_idx, t)] = dims[v]
                dims[v] += 1
        mats = []
        for (t, h) in self.quiver.arrows:
            M = [[0] * dims[t] for _ in range(dims[h])]
            for (s_idx, pos), col in index[t].items():
                i, l = segments[s_idx]
                if pos < l:
                    row = index[h][(s_idx, pos + 1)]
                    M[row][col] = 1
            mats.append(tuple(tuple(r_) for r_ in M))
        return tuple(mats), tuple(dims)

    def class_of_point(self, mats, dims) -> IsoClass:
        """Identify the multisegment of a nilpotent point via path ranks."""
        F = self.field
        r = self.r
        total = sum(dims)
        if total == 0:
            return self.zero_class()
        # rank[j][l] = rank of the composite of l arrows starting at vertex j
        rank = [[0] * (total + 1) for _ in range(r)]
        for j in range(r):
            M = gf.mat_identity(dims[j])
            rank[j][0] = dims[j]
            for l in range(1, total + 1):
                a_idx = (j + l - 1) % r
                M = gf.mat_mul(F, mats[a_idx], M)
                rank[j][l] = gf.mat_rank(F, M)
        entries = []
        for i in range(r):
            prev = None
            for m in range(1, total + 1):
                at_least_m = rank[i][m - 1] - rank[(i - 1) % r][m]
                if prev is not None:
                    mult = prev - at_least_m
                    if mult:
                        entries.append((((i, m - 1), mult)))
                prev = at_least_m
            if prev:
                entries.append((((i, total), prev)))
        ms = ms_canonical(entries)
        if ms_dim_vector(ms, r) != tuple(dims):
            raise RuntimeError("point identification failed (non-nilpotent input?)")
        return IsoClass(self.engine_id, "ms", tuple(dims), ms)

    # -- structured invariants -------------------------------------------------

    def dim_end(self, c: IsoClass) -> int:
        return self.hom_dim(c, c)

    def hom_dim(self, c1: IsoClass, c2: IsoClass) -> int:
        total = 0
        for (seg1, m1) in c1.key:
            for (seg2, m2) in c2.key:
                total += m1 * m2 * hom_dim_segments(self.r, seg1, seg2)
        return total

    def hom_dim_solve(self, c1: IsoClass, c2: IsoClass) -> int:
        """Hom dimension by solving the intertwining system (cross-check path)."""
        m1, d1 = self.rep_point(c1)
        m2, d2 = self.rep_point(c2)
        basis, _ = _hom_space_basis(self.field, self.quiver, m1, d1, m2, d2)
        return len(basis)

    def aut_order(self, c: IsoClass) -> int:
        """|Aut| = q^(dim End - sum m_c^2) * prod_c |GL_{m_c}(F_q)|."""
        if c.key in self._aut:
            return self._aut[c.key]
        q = self.q0
        exponent = self.dim_end(c)
        out = 1
        for (_, m) in c.key:
            exponent -= m * m
            out *= gf.gl_order(self.field, m)
        value = q ** exponent * out
        self._aut[c.key] = value
        return value

    def socle(self, c: IsoClass) -> tuple:
        """Multiplicity of each simple in the socle: S_i[l] contributes S_{i+l-1}."""
        out = [0] * self.r
        for (i, l), m in c.key:
            out[(i + l - 1) % self.r] += m
        return tuple(out)

    def socle_solve(self, c: IsoClass) -> tuple:
        """Socle as the joint kernel of the outgoing arrow maps (cross-check path)."""
        mats, dims = self.rep_point(c)
        return _socle_from_point(self.field, self.quiver, mats, dims)

    def is_indecomposable(self, c: IsoClass) -> bool:
        return len(c.key) == 1 and c.key[0][1] == 1

    def decompose(self, c: IsoClass) -> list:
        out = []
        for (seg, m) in c.key:
            out.extend([self.make_class(((seg, 1),))] * m)
        return out

    # -- Hall numbers ----------------------------------------------------------

    def sub_table(self, c: IsoClass) -> dict:
        """All Hall numbers F^c_{quot, sub} by exact submodule enumeration."""
        if c.key in self._subtables:
            return self._subtables[c.key]
        mats, dims = self.rep_point(c)
        table = _submodule_table(
            self.field, self.quiver, mats, dims,
            lambda m, d: self.class_of_point(m, d).key)
        self._subtables[c.key] = table
        return table

    def hall_number(self, L: IsoClass, M: IsoClass, N: IsoClass) -> int:
        if add_dim(M.grade, N.grade) != L.grade:
            return 0
        return self.sub_table(L).get((M.key, N.key), 0)

    def class_from_key(self, key) -> IsoClass:
        return IsoClass(self.engine_id, "ms", ms_dim_vector(key, self.r), key)

    def delta(self) -> tuple:
        return (1,) * self.r


def _socle_from_point(F, quiver, mats, dims):
    out = []
    for j in range(quiver.nv):
        stacked = []
        for a_idx, (t, _) in enumerate(quiver.arrows):
            if t == j:
                stacked.extend(mats[a_idx])
        if not stacked:
            out.append(dims[j])
        else:
            out.append(dims[j] - gf.mat_rank(F, tuple(stacked)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Brute-force orbit engine
# ---------------------------------------------------------------------------

class _GradeData:
    __slots__ = ("classes", "orbit_of", "reps", "sizes")

    def __init__(self, classes, orbit_of, reps, sizes):
        self.classes = classes
        self.orbit_of = orbit_of
        self.reps = reps
        self.sizes = sizes


class BruteForceEngine:
    """Generic engine for a small quiver: full orbit partition of E_V.

    Points are tuples of matrices, one per arrow.  Orbits are found by
    breadth-first closure under generators of prod_i GL(V_i), scanning
    points in lexicographic order so representatives and indices are
    deterministic.
    """

    def __init__(self, quiver: Quiver, q0: int, nilpotent: bool = False):
        self.quiver = quiver
        self.q0 = q0
        self.field = FieldSpec.from_order(q0)
        self.nilpotent = nilpotent
        if nilpotent and not quiver.is_cycle():
            raise ValueError("nilpotent restriction only supported for cyclic quivers")
        tag = "|nil" if nilpotent else ""
        self.engine_id = f"Q:{quiver.name}{tag}|q:{q0}"
        self._grades = {}
        self._subtables = {}
        self._decomp = {}

    # -- enumeration -----------------------------------------------------------

    def _point_count(self, d):
        total = 0
        for (t, h) in self.quiver.arrows:
            total += d[t] * d[h]
        return self.q0 ** total

    def _iter_points(self, d):
        shapes = [(d[h], d[t]) for (t, h) in self.quiver.arrows]
        entry_counts = [rows * cols for rows, cols in shapes]
        ranges = [range(self.q0)] * sum(entry_counts)
        for combo in product(*ranges):
            mats = []
            pos = 0
            for (rows, cols) in shapes:
                flat = combo[pos:pos + rows * cols]
                pos += rows * cols
                mats.append(tuple(tuple(flat[r * cols: (r + 1) * cols])
                                  for r in range(rows)))
            yield tuple(mats)

    def _is_nilpotent_point(self, mats, d):
        r = self.quiver.nv
        F = self.field
        M = gf.mat_identity(d[0])
        for a_idx in range(r):
            M = gf.mat_mul(F, mats[a_idx], M)
        P = M
        for _ in range(max(d[0] - 1, 0)):
            P = gf.mat_mul(F, P, M)
        return all(all(x == 0 for x in row) for row in P)

    def group_order(self, d) -> int:
        out = 1
        for n in d:
            out *= gf.gl_order(self.field, n)
        return out

    def _generators(self, d):
        gens = []
        for i, n in enumerate(d):
            for g in gf.gl_generators(self.field, n):
                gens.append((i, g, gf.mat_inverse(self.field, g)))
        return gens

    def _act(self, gen, mats):
        i, g, g_inv = gen
        F = self.field
        out = []
        for a_idx, (t, h) in enumerate(self.quiver.arrows):
            X = mats[a_idx]
            if h == i:
                X = gf.mat_mul(F, g, X)
            if t == i:
                X = gf.mat_mul(F, X, g_inv)
            out.append(X)
        return tuple(out)

    def grade_data(self, d) -> _GradeData:
        d = tuple(d)
        if d in self._grades:
            return self._grades[d]
        if sum(d) > BRUTE_TOTAL_DIM_CAP:
            raise ValueError(
                f"total dimension {sum(d)} exceeds the brute-force cap "
                f"{BRUTE_TOTAL_DIM_CAP}")
        if self._point_count(d) > POINT_CAP:
            raise ValueError("representation variety exceeds the point cap")
        gens = self._generators(d)
        orbit_of = {}
        reps = []
        sizes = []
        for point in self._iter_points(d):
            if point in orbit_of:
                continue
            if self.nilpotent and not self._is_nilpotent_point(point, d):
                continue
            idx = len(reps)
            orbit_of[point] = idx
            queue = [point]
            size = 1
            while queue:
                x = queue.pop()
                for gen in gens:
                    y = self._act(gen, x)
                    if y not in orbit_of:
                        orbit_of[y] = idx
                        size += 1
                        queue.append(y)
            reps.append(point)
            sizes.append(size)
        classes = [IsoClass(self.engine_id, "orbit", d, i) for i in range(len(reps))]
        data = _GradeData(classes, orbit_of, reps, sizes)
        self._grades[d] = data
        return data

    def classes(self, d) -> list:
        return list(self.grade_data(d).classes)

    def class_of_point(self, mats, dims) -> IsoClass:
        data = self.grade_data(tuple(dims))
        idx = data.orbit_of.get(tuple(mats))
        if idx is None:
            raise ValueError("point does not belong to this engine's variety")
        return data.classes[idx]

    def rep_point(self, c: IsoClass):
        data = self.grade_data(c.grade)
        return data.reps[c.key], c.grade

    def orbit_size(self, c: IsoClass) -> int:
        return self.grade_data(c.grade).sizes[c.key]

    # -- invariants --------------------------------------------------------------

    def aut_order(self, c: IsoClass) -> int:
        """Orbit-stabilizer: |Aut(M)| = |G_V| / |orbit of M|."""
        return self.group_order(c.grade) // self.orbit_size(c)

    def aut_order_point(self, mats, dims) -> int:
        """Automorphism order of an explicit point, without a grade partition.

        The stabilizer of the point is exactly the group of invertible
        endomorphisms, so when End(M) is small enough it is enumerated
        and its units counted; otherwise the orbit is closed explicitly
        and orbit-stabilizer gives the same number.
        """
        basis, _ = _hom_space_basis(self.field, self.quiver, mats, dims, mats, dims)
        h = len(basis)
        if self.q0 ** h <= 2 ** 13:
            return self._count_invertible_end(basis, dims)
        size = self._orbit_size_of_point(tuple(mats), tuple(dims))
        return self.group_order(dims) // size

    def _count_invertible_end(self, basis, dims) -> int:
        F = self.field
        nv = self.quiver.nv
        blocks = []
        for elem in basis:
            blocks.append([tuple(x for row in elem[i] for x in row)
                           for i in range(nv)])
        zero_flat = [tuple([0] * (dims[i] * dims[i])) for i in range(nv)]
        count = 0

        def invertible(flats):
            for i in range(nv):
                n = dims[i]
                if n and gf.mat_rank(F, tuple(
                        tuple(flats[i][r * n:(r + 1) * n]) for r in range(n))) != n:
                    return False
            return True

        def recurse(level, flats):
            nonlocal count
            if level == len(blocks):
                if invertible(flats):
                    count += 1
                return
            blk = blocks[level]
            for c in range(F.q):
                if c == 0:
                    recurse(level + 1, flats)
                else:
                    shifted = [tuple(F.add(a, F.mul(c, b)) for a, b in zip(flats[i], blk[i]))
                               for i in range(nv)]
                    recurse(level + 1, shifted)

        recurse(0, zero_flat)
        return count

    def _orbit_size_of_point(self, point, d, cap: int = 500000):
        gens = self._generators(d)
        seen = {point}
        queue = [point]
        while queue:
            x = queue.pop()
            for gen in gens:
                y = self._act(gen, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise ValueError("orbit closure exceeds the point cap")
                    queue.append(y)
        return len(seen)

    def hom_dim(self, c1: IsoClass, c2: IsoClass) -> int:
        m1, d1 = self.rep_point(c1)
        m2, d2 = self.rep_point(c2)
        basis, _ = _hom_space_basis(self.field, self.quiver, m1, d1, m2, d2)
        return len(basis)

    def dim_end(self, c: IsoClass) -> int:
        return self.hom_dim(c, c)

    def socle(self, c: IsoClass) -> tuple:
        mats, dims = self.rep_point(c)
        return _socle_from_point(self.field, self.quiver, mats, dims)

    # -- Hall numbers --------------------------------------------------------------

    def sub_table(self, c: IsoClass) -> dict:
        key = (c.grade, c.key)
        if key in self._subtables:
            return self._subtables[key]
        mats, dims = self.rep_point(c)
        table = _submodule_table(
            self.field, self.quiver, mats, dims,
            lambda m, d: (tuple(d), self.class_of_point(m, d).key))
        self._subtables[key] = table
        return table

    def hall_number(self, L: IsoClass, M: IsoClass, N: IsoClass) -> int:
        if add_dim(M.grade, N.grade) != L.grade:
            return 0
        return self.sub_table(L).get(((M.grade, M.key), (N.grade, N.key)), 0)

    def class_from_key(self, key) -> IsoClass:
        grade, idx = key
        return self.grade_data(grade).classes[idx]

    # -- Krull-Schmidt ---------------------------------------------------------------

    def zero_class(self) -> IsoClass:
        d = (0,) * self.quiver.nv
        return self.classes(d)[0]

    def simple(self, i: int) -> IsoClass:
        d = tuple(1 if j == i else 0 for j in range(self.quiver.nv))
        return self.classes(d)[0]

    def direct_sum_class(self, parts) -> IsoClass:
        """Class of the block-diagonal direct sum of the given classes."""
        F = self.field
        points = [self.rep_point(c) for c in parts]
        dims = tuple(sum(p[1][i] for p in points) for i in range(self.quiver.nv))
        mats = []
        for a_idx, (t, h) in enumerate(self.quiver.arrows):
            M = [[0] * dims[t] for _ in range(dims[h])]
            ro = co = 0
            for pmats, pdims in points:
                X = pmats[a_idx]
                for rr in range(pdims[h]):
                    for cc in range(pdims[t]):
                        M[ro + rr][co + cc] = X[rr][cc]
                ro += pdims[h]
                co += pdims[t]
            mats.append(tuple(tuple(r_) for r_ in M))
        return self.class_of_point(tuple(mats), dims)

    def _decomposition_map(self, d) -> dict:
        """Map class -> multiset of indecomposable summands, for grade d."""
        d = tuple(d)
        if d in self._decomp:
            return self._decomp[d]
        smaller = []
        for dd in _proper_subgrades(d):
            for c in self.indecomposables(dd):
                smaller.append(c)
        hit = {}

        def assemble(idx, remaining, acc):
            if not any(remaining):
                if len(acc) >= 2:
                    cls = self.direct_sum_class(acc)
                    key = (cls.grade, cls.key)
                    if key not in hit:
                        hit[key] = list(acc)
                return
            if idx == len(smaller):
                return
            c = smaller[idx]
            max_mult = min((rem // g if g else 10 ** 9)
                           for rem, g in zip(remaining, c.grade) if g)
            for m in range(max_mult, -1, -1):
                new_rem = tuple(rem - m * g for rem, g in zip(remaining, c.grade))
                if min(new_rem) < 0:
                    continue
                assemble(idx + 1, new_rem, acc + [c] * m)

        assemble(0, d, [])
        self._decomp[d] = hit
        return hit

    def decompose(self, c: IsoClass) -> list:
        """Krull-Schmidt decomposition into indecomposable classes."""
        if sum(c.grade) == 0:
            return []
        hit = self._decomposition_map(c.grade)
        found = hit.get((c.grade, c.key))
        if found is not None:
            return list(found)
        return [c]

    def is_indecomposable(self, c: IsoClass) -> bool:
        if sum(c.grade) == 0:
            return False
        return len(self.decompose(c)) == 1

    def is_indecomposable_by_idempotents(self, c: IsoClass) -> bool:
        """Indecomposable iff End(M) has exactly two idempotents (0 and 1)."""
        if sum(c.grade) == 0:
            return False
        mats, dims = self.rep_point(c)
        F = self.field
        basis, _ = _hom_space_basis(self.field, self.quiver, mats, dims, mats, dims)
        h = len(basis)
        if self.q0 ** h > END_ENUM_CAP:
            raise ValueError(
                "endomorphism space too large to enumerate; use smaller parameters")
        count = 0
        for endo in _iter_hom_combinations(F, basis, dims, dims):
            if all(gf.mat_mul(F, f, f) == f for f in endo):
                count += 1
                if count > 2:
                    return False
        return count == 2

    def indecomposables(self, d) -> list:
        return [c for c in self.classes(d) if self.is_indecomposable(c)]

    def delta(self) -> tuple:
        return (1,) * self.quiver.nv


def _proper_subgrades(d):
    """All nonzero grades componentwise <= d, excluding d itself."""
    ranges = [range(x + 1) for x in d]
    for combo in product(*ranges):
        if any(combo) and combo != d:
            yield combo


def _iter_hom_combinations(F, basis, dimsM, dimsN):
    """All F-linear combinations of a Hom-space basis, as matrix tuples."""
    h = len(basis)
    if h == 0:
        yield tuple(gf.mat_zero(dimsN[i], dimsM[i]) for i in range(len(dimsM)))
        return
    for coeffs in product(range(F.q), repeat=h):
        acc = [
            [[0] * dimsM[i] for _ in range(dimsN[i])] for i in range(len(dimsM))
        ]
        for coef, elem in zip(coeffs, basis):
            if not coef:
                continue
            for i, mat in enumerate(elem):
                for a in range(dimsN[i]):
                    row = mat[a]
                    for b in range(dimsM[i]):
                        if row[b]:
                            acc[i][a][b] = F.add(acc[i][a][b], F.mul(coef, row[b]))
        yield tuple(tuple(tuple(r) for r in m) for m in acc)


# ---------------------------------------------------------------------------
# Engine factories (per-thread caches so parallel verification cells never
# share mutable engine state)
# ---------------------------------------------------------------------------

import threading

_ENGINE_LOCAL = threading.local()


def _engine_store():
    store = getattr(_ENGINE_LOCAL, "store", None)
    if store is None:
        store = {}
        _ENGINE_LOCAL.store = store
    return store


def get_nilpotent_engine(r: int, q0: int) -> "NilpotentCyclicEngine":
    store = _engine_store()
    key = ("nil", r, q0)
    if key not in store:
        store[key] = NilpotentCyclicEngine(r, q0)
    return store[key]


def get_brute_engine(quiver: Quiver, q0: int, nilpotent: bool = False) -> "BruteForceEngine":
    store = _engine_store()
    key = ("brute", quiver.name, quiver.arrows, q0, nilpotent)
    if key not in store:
        store[key] = BruteForceEngine(quiver, q0, nilpotent=nilpotent)
    return store[key]


# ---------------------------------------------------------------------------
# Kronecker-specific helpers
# ---------------------------------------------------------------------------

def jordan_block(n: int):
    """Nilpotent Jordan block of size n (ones on the subdiagonal)."""
    return tuple(tuple(1 if j == i - 1 else 0 for j in range(n)) for i in range(n))


def jordan_matrix(lam: Partition):
    """Block-diagonal nilpotent matrix J_lambda."""
    n = lam.size()
    M = [[0] * n for _ in range(n)]
    off = 0
    for part in lam:
        blk = jordan_block(part)
        for i in range(part):
            for j in range(part):
                M[off + i][off + j] = blk[i][j]
        off += part
    return tuple(tuple(r) for r in M)


def kronecker_point_zero(engine: BruteForceEngine, lam: Partition):
    """The K2 point (I_n, J_lambda) and its class."""
    n = lam.size()
    mats = (gf.mat_identity(n), jordan_matrix(lam))
    return engine.class_of_point(mats, (n, n))


def kronecker_point_infty(engine: BruteForceEngine, lam: Partition):
    """The K2 point (J_lambda, I_n) and its class."""
    n = lam.size()
    mats = (jordan_matrix(lam), gf.mat_identity(n))
    return engine.class_of_point(mats, (n, n))


def is_regular_kronecker(engine: BruteForceEngine, c: IsoClass) -> bool:
    """Regular = every indecomposable summand has a square dimension vector."""
    if sum(c.grade) == 0:
        return True
    return all(p.grade[0] == p.grade[1] for p in engine.decompose(c))


def kronecker_regular_classes(engine: BruteForceEngine, n: int) -> list:
    """All regular classes at dimension vector (n, n)."""
    if engine.quiver != kronecker_quiver():
        raise ValueError("engine is not a Kronecker engine")
    cap = 3 if engine.q0 == 2 else 2
    if n > cap:
        raise ValueError(f"regular classification capped at n={cap} for q={engine.q0}")
    return [c for c in engine.classes((n, n)) if is_regular_kronecker(engine, c)]


# ---------------------------------------------------------------------------
# Hall polynomials by interpolation
# ---------------------------------------------------------------------------

_PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31)


def hall_polynomial(r: int, L, M, N, degree_bound=None) -> QPolynomial:
    """Hall polynomial F^L_{M,N}(q) for nilpotent C_r multisegments.

    Samples exact Hall numbers at enough prime powers and interpolates;
    the degree bound defaults to dim(M) * dim(N), a safe overestimate.
    """
    L, M, N = ms_canonical(L), ms_canonical(M), ms_canonical(N)
    if degree_bound is None:
        degree_bound = ms_total(M) * ms_total(N)
    needed = degree_bound + 1
    if needed > len(_PRIME_POWERS):
        raise ValueError("degree bound exceeds the sampling budget")
    points = []
    for q0 in _PRIME_POWERS[:needed]:
        eng = NilpotentCyclicEngine(r, q0)
        value = eng.hall_number(eng.class_from_key(L), eng.class_from_key(M),
                                eng.class_from_key(N))
        points.append((q0, value))
    poly = interpolate_q(points, degree_bound)
    return poly
