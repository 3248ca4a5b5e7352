"""The twisted Hall bialgebra over a representation engine.

Multiplication counts extensions with a v-power twist by the Euler form,
comultiplication is its adjoint for the Green form { [M], [N] } =
delta_{MN} / |Aut M|, and primitivity means Delta(x) = x ox 1 + 1 ox x.
The primitive-subspace solver runs exact Gaussian elimination over
Q(sqrt(q0)).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coeffring import CycloSqrt, SqrtExt, v_power
from .repengine import IsoClass, add_dim, euler_form
from .report import timed_report

__all__ = [
    "HallElement",
    "TensorElement",
    "multiply",
    "comultiply",
    "comultiply_restricted",
    "green_form",
    "tensor_green_form",
    "one_d",
    "one_subset",
    "one_reg",
    "is_primitive",
    "primitive_subspace",
    "adjointness_check",
    "associativity_check",
    "coassociativity_check",
    "in_span",
    "rank_of_elements",
]


def _coerce_coeff(engine, c):
    if isinstance(c, (int, Fraction)):
        return SqrtExt(engine.q0, c, 0)
    if isinstance(c, (SqrtExt, CycloSqrt)):
        if c.base != engine.q0:
            raise TypeError("coefficient base does not match the engine's field")
        return c
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class HallElement:
    """Finite formal linear combination of isoclasses of one engine."""

    __slots__ = ("engine", "terms")

    def __init__(self, engine, terms=None):
        clean = {}
        if terms:
            for cls, coeff in terms.items():
                coeff = _coerce_coeff(engine, coeff)
                if not coeff.is_zero():
                    if cls.engine_id != engine.engine_id:
                        raise ValueError("isoclass belongs to a different engine")
                    clean[cls] = coeff
        self.engine = engine
        self.terms = clean

    @staticmethod
    def zero(engine):
        return HallElement(engine)

    @staticmethod
    def basis(engine, cls: IsoClass, coeff=1):
        return HallElement(engine, {cls: coeff})

    @staticmethod
    def unit(engine):
        return HallElement.basis(engine, engine.zero_class())

    def is_zero(self):
        return not self.terms

    def grades(self):
        return sorted({c.grade for c in self.terms})

    def grade(self):
        gs = self.grades()
        if len(gs) != 1:
            raise ValueError("element is not homogeneous")
        return gs[0]

    def coefficient(self, cls: IsoClass):
        return self.terms.get(cls, SqrtExt.zero(self.engine.q0))

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.engine.engine_id == other.engine.engine_id and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        out = dict(self.terms)
        for cls, coeff in other.terms.items():
            cur = out.get(cls)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(cls, None)
            else:
                out[cls] = s
        res = HallElement.__new__(HallElement)
        res.engine = self.engine
        res.terms = out
        return res

    def __neg__(self):
        res = HallElement.__new__(HallElement)
        res.engine = self.engine
        res.terms = {c: -x for c, x in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _coerce_coeff(self.engine, c) if not isinstance(c, (int, Fraction)) else c
        out = {}
        for cls, coeff in self.terms.items():
            s = coeff * c
            if not s.is_zero():
                out[cls] = s
        res = HallElement.__new__(HallElement)
        res.engine = self.engine
        res.terms = out
        return res

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def restrict(self, predicate) -> "HallElement":
        """Keep only the terms whose class satisfies the predicate."""
        return HallElement(self.engine,
                           {c: x for c, x in self.terms.items() if predicate(c)})

    def support(self):
        return sorted(self.terms, key=lambda c: c.sort_key())

    def to_json_dict(self):
        gs = self.grades()
        out = {"grade": list(gs[0]) if len(gs) == 1 else [list(g) for g in gs],
               "terms": [{"class": c.render(), "coeff": _coeff_str(x)}
                         for c, x in sorted(self.terms.items(),
                                            key=lambda kv: kv[0].sort_key())]}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for c in self.support():
            bits.append(f"({_coeff_str(self.terms[c])})*[{c.render()}]")
        return " + ".join(bits)

    def __repr__(self):
        return f"HallElement({self.render()})"


def _coeff_str(x):
    return x.render()


class TensorElement:
    """Sparse element of H ox H: map (class, class) -> coefficient."""

    __slots__ = ("engine", "terms")

    def __init__(self, engine, terms=None):
        clean = {}
        if terms:
            for pair, coeff in terms.items():
                coeff = _coerce_coeff(engine, coeff)
                if not coeff.is_zero():
                    clean[pair] = coeff
        self.engine = engine
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.engine.engine_id == other.engine.engine_id and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for pair, coeff in other.terms.items():
            cur = out.get(pair)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(pair, None)
            else:
                out[pair] = s
        res = TensorElement.__new__(TensorElement)
        res.engine = self.engine
        res.terms = out
        return res

    def __neg__(self):
        res = TensorElement.__new__(TensorElement)
        res.engine = self.engine
        res.terms = {p: -x for p, x in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def coefficient(self, pair):
        return self.terms.get(pair, SqrtExt.zero(self.engine.q0))

    def __repr__(self):
        bits = [f"({x.render()})*[{a.render()}]ox[{b.render()}]"
                for (a, b), x in sorted(self.terms.items(),
                                        key=lambda kv: (kv[0][0].sort_key(),
                                                        kv[0][1].sort_key()))]
        return "TensorElement(" + (" + ".join(bits) if bits else "0") + ")"


# ---------------------------------------------------------------------------
# Structure maps
# ---------------------------------------------------------------------------

def multiply(a: HallElement, b: HallElement) -> HallElement:
    """[M] . [N] = sum_L v^<dim M, dim N> F^L_{M,N} [L], extended bilinearly."""
    if a.engine.engine_id != b.engine.engine_id:
        raise ValueError("cannot multiply elements of different engines")
    engine = a.engine
    quiver = engine.quiver
    out = {}
    for Ma, ca in a.terms.items():
        for Mb, cb in b.terms.items():
            target = add_dim(Ma.grade, Mb.grade)
            twist = v_power(euler_form(quiver, Ma.grade, Mb.grade), engine.q0)
            base = ca * cb * twist
            for L in engine.classes(target):
                count = engine.hall_number(L, Ma, Mb)
                if count:
                    cur = out.get(L)
                    s = base * count if cur is None else cur + base * count
                    if s.is_zero():
                        out.pop(L, None)
                    else:
                        out[L] = s
    res = HallElement.__new__(HallElement)
    res.engine = engine
    res.terms = out
    return res


def comultiply(x: HallElement, predicate=None) -> TensorElement:
    """Delta([M]) = sum v^<dim X, dim Y> (a_X a_Y / a_M) F^M_{X,Y} [X] ox [Y].

    With a predicate, the sum is restricted to pairs (X, Y) of classes
    satisfying it (the zero class always qualifies); this is the
    comultiplication of the subcategory spanned by those classes, which
    is a coalgebra whenever the predicate cuts out an extension-closed
    subcategory.
    """
    engine = x.engine
    quiver = engine.quiver
    out = {}
    for M, c in x.terms.items():
        aM = engine.aut_order(M)
        for (quot_key, sub_key), count in engine.sub_table(M).items():
            X = engine.class_from_key(quot_key)
            Y = engine.class_from_key(sub_key)
            if predicate is not None:
                if sum(X.grade) and not predicate(X):
                    continue
                if sum(Y.grade) and not predicate(Y):
                    continue
            aX = engine.aut_order(X)
            aY = engine.aut_order(Y)
            twist = v_power(euler_form(quiver, X.grade, Y.grade), engine.q0)
            coeff = c * twist * Fraction(count * aX * aY, aM)
            pair = (X, Y)
            cur = out.get(pair)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(pair, None)
            else:
                out[pair] = s
    res = TensorElement.__new__(TensorElement)
    res.engine = engine
    res.terms = out
    return res


def comultiply_restricted(x: HallElement, predicate) -> TensorElement:
    return comultiply(x, predicate=predicate)


def green_form(x: HallElement, y: HallElement):
    """{x, y} = sum over common support of x_M y_M / a_M."""
    if x.engine.engine_id != y.engine.engine_id:
        raise ValueError("cannot pair elements of different engines")
    total = SqrtExt.zero(x.engine.q0)
    for cls, cx in x.terms.items():
        cy = y.terms.get(cls)
        if cy is not None:
            total = total + cx * cy / Fraction(x.engine.aut_order(cls))
    return total


def tensor_green_form(x: HallElement, y: HallElement, t: TensorElement):
    """{x ox y, t} with {a ox b, c ox d} = {a, c}{b, d}."""
    engine = x.engine
    total = SqrtExt.zero(engine.q0)
    for (A, B), ct in t.terms.items():
        cx = x.terms.get(A)
        cy = y.terms.get(B)
        if cx is not None and cy is not None:
            denom = Fraction(engine.aut_order(A)) * Fraction(engine.aut_order(B))
            total = total + cx * cy * ct / denom
    return total


def one_d(engine, d) -> HallElement:
    """Sum of all classes of dimension vector d with coefficient 1."""
    return HallElement(engine, {c: 1 for c in engine.classes(d)})


def one_subset(engine, d, predicate) -> HallElement:
    return HallElement(engine, {c: 1 for c in engine.classes(d) if predicate(c)})


def one_reg(engine, n: int) -> HallElement:
    """Sum of the regular Kronecker classes at dimension vector (n, n)."""
    from .repengine import kronecker_regular_classes
    return HallElement(engine, {c: 1 for c in kronecker_regular_classes(engine, n)})


def is_primitive(x: HallElement, predicate=None) -> bool:
    """Exact test of Delta(x) = x ox 1 + 1 ox x for homogeneous nonzero x."""
    if x.is_zero():
        raise ValueError("primitivity is tested on nonzero homogeneous elements")
    x.grade()  # raises when inhomogeneous
    engine = x.engine
    zero_cls = engine.zero_class()
    delta = comultiply(x, predicate=predicate)
    expected = {}
    for cls, c in x.terms.items():
        expected[(cls, zero_cls)] = c
        expected[(zero_cls, cls)] = c
    return delta == TensorElement(engine, expected)


# ---------------------------------------------------------------------------
# Exact linear algebra over Q(sqrt(q0)) and the primitive-subspace solver
# ---------------------------------------------------------------------------

def sqrtext_rref(rows, ncols, q0):
    """Reduced row echelon form of a matrix of SqrtExt entries.

    Returns (rref_rows, pivot_columns); first-nonzero pivoting keeps the
    output deterministic.
    """
    rows = [list(r) for r in rows if any(not x.is_zero() for x in r)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return [tuple(r) for r in rows[:rank]], pivots


def sqrtext_kernel(rows, ncols, q0):
    """Reduced-echelon basis of the right kernel of a SqrtExt matrix."""
    rref, pivots = sqrtext_rref(rows, ncols, q0)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    one = SqrtExt.one(q0)
    zero = SqrtExt.zero(q0)
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(tuple(vec))
    if basis:
        basis, _ = sqrtext_rref(basis, ncols, q0)
    return basis


def primitive_subspace(engine, d, predicate=None) -> list:
    """Echelon-normalized basis of the primitive elements at grade d.

    The kernel of x -> Delta(x) - x ox 1 - 1 ox x is computed by exact
    Gaussian elimination over Q(sqrt(q0)); with a predicate both the
    ambient span and the comultiplication are restricted to classes
    satisfying it.
    """
    d = tuple(d)
    classes = engine.classes(d)
    if predicate is not None:
        classes = [c for c in classes if predicate(c)]
    if not classes:
        return []
    col_of = {c: j for j, c in enumerate(classes)}
    quiver = engine.quiver
    q0 = engine.q0
    row_map = {}
    for j, M in enumerate(classes):
        aM = engine.aut_order(M)
        for (quot_key, sub_key), count in engine.sub_table(M).items():
            X = engine.class_from_key(quot_key)
            Y = engine.class_from_key(sub_key)
            if not sum(X.grade) or not sum(Y.grade):
                continue
            if predicate is not None and not (predicate(X) and predicate(Y)):
                continue
            twist = v_power(euler_form(quiver, X.grade, Y.grade), q0)
            aX = engine.aut_order(X)
            aY = engine.aut_order(Y)
            coeff = twist * Fraction(count * aX * aY, aM)
            key = (X.sort_key(), Y.sort_key())
            row = row_map.setdefault(key, [SqrtExt.zero(q0)] * len(classes))
            row[j] = row[j] + coeff
    rows = [row_map[k] for k in sorted(row_map)]
    kernel = sqrtext_kernel(rows, len(classes), q0)
    out = []
    for vec in kernel:
        out.append(HallElement(engine, {c: x for c, x in zip(classes, vec)
                                        if not x.is_zero()}))
    return out


def in_span(basis, x: HallElement) -> bool:
    """Exact membership of x in the span of the given Hall elements."""
    engine = x.engine
    support = sorted({c for e in basis for c in e.terms} | set(x.terms),
                     key=lambda c: c.sort_key())
    cols = {c: j for j, c in enumerate(support)}
    q0 = engine.q0
    zero = SqrtExt.zero(q0)
    rows = []
    for e in basis:
        row = [zero] * len(support)
        for c, v in e.terms.items():
            row[cols[c]] = v
        rows.append(row)
    rref, pivots = sqrtext_rref(rows, len(support), q0)
    target = [zero] * len(support)
    for c, v in x.terms.items():
        target[cols[c]] = v
    for r, pc in zip(rref, pivots):
        f = target[pc]
        if not f.is_zero():
            target = [t - f * y for t, y in zip(target, r)]
    return all(t.is_zero() for t in target)


def rank_of_elements(elements) -> int:
    """Rank of a family of Hall elements over Q(sqrt(q0))."""
    if not elements:
        return 0
    engine = elements[0].engine
    support = sorted({c for e in elements for c in e.terms},
                     key=lambda c: c.sort_key())
    cols = {c: j for j, c in enumerate(support)}
    zero = SqrtExt.zero(engine.q0)
    rows = []
    for e in elements:
        row = [zero] * len(support)
        for c, v in e.terms.items():
            row[cols[c]] = v
        rows.append(row)
    rref, _ = sqrtext_rref(rows, len(support), engine.q0)
    return len(rref)


def adjointness_check(engine, total_dim_bound: int):
    """Verify {xy, z} = {x ox y, Delta z} on all basis triples in range."""

    def run():
        checked = 0
        for d_total in range(0, total_dim_bound + 1):
            for dm in _grades_with_total(engine, d_total):
                for dn_total in range(0, total_dim_bound - d_total + 1):
                    for dn in _grades_with_total(engine, dn_total):
                        target = add_dim(dm, dn)
                        if sum(target) > total_dim_bound:
                            continue
                        for M in engine.classes(dm):
                            xM = HallElement.basis(engine, M)
                            for N in engine.classes(dn):
                                xN = HallElement.basis(engine, N)
                                prod = multiply(xM, xN)
                                for L in engine.classes(target):
                                    xL = HallElement.basis(engine, L)
                                    lhs = green_form(prod, xL)
                                    rhs = tensor_green_form(xM, xN, comultiply(xL))
                                    if lhs != rhs:
                                        return (False, lhs.render(), rhs.render(),
                                                f"triple {M.render()},{N.render()},{L.render()}")
                                    checked += 1
        return True, f"{checked} triples", f"{checked} triples", ""

    return timed_report("adjointness", {"engine": engine.engine_id,
                                        "bound": total_dim_bound}, run)


def _grades_with_total(engine, total):
    from itertools import product as iproduct
    nv = engine.quiver.nv
    out = []
    for combo in iproduct(range(total + 1), repeat=nv):
        if sum(combo) == total:
            out.append(combo)
    return out


def associativity_check(engine, total_dim_bound: int):
    """(a.b).c = a.(b.c) on all basis triples with total dimension in range."""

    def run():
        checked = 0
        for t1 in range(0, total_dim_bound + 1):
            for d1 in _grades_with_total(engine, t1):
                basis1 = engine.classes(d1)
                for t2 in range(0, total_dim_bound - t1 + 1):
                    for d2 in _grades_with_total(engine, t2):
                        basis2 = engine.classes(d2)
                        for t3 in range(0, total_dim_bound - t1 - t2 + 1):
                            for d3 in _grades_with_total(engine, t3):
                                for A in basis1:
                                    xa = HallElement.basis(engine, A)
                                    for B in basis2:
                                        xb = HallElement.basis(engine, B)
                                        ab = multiply(xa, xb)
                                        for C in engine.classes(d3):
                                            xc = HallElement.basis(engine, C)
                                            lhs = multiply(ab, xc)
                                            rhs = multiply(xa, multiply(xb, xc))
                                            if lhs != rhs:
                                                return (False, lhs.render(), rhs.render(),
                                                        f"{A.render()},{B.render()},{C.render()}")
                                            checked += 1
        return True, f"{checked} triples", f"{checked} triples", ""

    return timed_report("associativity",
                        {"engine": engine.engine_id, "bound": total_dim_bound}, run)


def coassociativity_check(engine, total_dim_bound: int):
    """(Delta ox id)Delta = (id ox Delta)Delta on basis classes in range."""

    def run():
        checked = 0
        for total in range(0, total_dim_bound + 1):
            for d in _grades_with_total(engine, total):
                for L in engine.classes(d):
                    delta = comultiply(HallElement.basis(engine, L))
                    left = {}
                    right = {}
                    for (X, Y), c in delta.terms.items():
                        for (A, B), c2 in comultiply(
                                HallElement.basis(engine, X)).terms.items():
                            _acc(left, (A, B, Y), c * c2)
                        for (A, B), c2 in comultiply(
                                HallElement.basis(engine, Y)).terms.items():
                            _acc(right, (X, A, B), c * c2)
                    if left != right:
                        return False, "(Delta ox id)Delta", "(id ox Delta)Delta", L.render()
                    checked += 1
        return True, f"{checked} classes", f"{checked} classes", ""

    return timed_report("coassociativity",
                        {"engine": engine.engine_id, "bound": total_dim_bound}, run)


def _acc(store, key, value):
    cur = store.get(key)
    s = value if cur is None else cur + value
    if s.is_zero():
        store.pop(key, None)
    else:
        store[key] = s
