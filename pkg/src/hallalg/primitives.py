"""Constructors for the distinguished primitive elements and their verifiers.

Families covered: the classical partition-indexed primitives over the
Jordan quiver, the central elements and normalized primitives of the
nilpotent cyclic quiver, tube primitives on the Kronecker quiver, and
the difference elements that give a basis of the full primitive space.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffring import QPolynomial, v_power
from .hallcore import (
    HallElement,
    TensorElement,
    comultiply,
    green_form,
    in_span,
    is_primitive,
    multiply,
    one_d,
    one_reg,
    primitive_subspace,
    rank_of_elements,
)
from .partitions import Partition, a_lambda, a_lambda_factored, partitions_of, \
    phi_irreducible_count
from .repengine import (
    BruteForceEngine,
    NilpotentCyclicEngine,
    IsoClass,
    get_brute_engine,
    get_nilpotent_engine,
    is_regular_kronecker,
    kronecker_point_infty,
    kronecker_point_zero,
    kronecker_quiver,
)
from .report import VerificationReport, timed_report

__all__ = [
    "PrimitiveSpec",
    "jordan_primitive_coeff",
    "p_jordan",
    "p_jordan_symbolic",
    "c_central",
    "x_element",
    "p_cyclic",
    "p_tube_homog",
    "kron_tube_classes",
    "kron_p0",
    "kron_pinf",
    "kron_pK2",
    "KroneckerTube",
    "kronecker_tubes",
    "verify_xi_identity",
    "verify_aut_sum_identities",
    "verify_key_pairing",
    "central_family_check",
    "kernel_theorem_check",
    "difference_basis_check",
    "xi_partition_sum_value",
]

_FAMILIES = {
    "jordan_pn", "cyclic_cn", "cyclic_xn", "cyclic_pnr",
    "tube_pm", "kron_p0", "kron_pinf",
}


class PrimitiveSpec:
    """A request for one named primitive element family."""

    __slots__ = ("family", "params")

    def __init__(self, family: str, **params):
        if family not in _FAMILIES:
            raise ValueError(f"unknown primitive family {family!r}")
        self.family = family
        self.params = params

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"PrimitiveSpec({self.family}, {args})"


# ---------------------------------------------------------------------------
# Partition coefficient prod_{s=1}^{len-1} (1 - q^(s e))
# ---------------------------------------------------------------------------

def jordan_primitive_coeff(lam: Partition, e: int = 1, q0=None):
    """The coefficient of [I_lambda]: prod_{s=1}^{len(lambda)-1} (1 - q^(s e))."""
    if q0 is not None:
        out = Fraction(1)
        for s in range(1, lam.length()):
            out *= 1 - Fraction(q0) ** (s * e)
        return out
    out = QPolynomial.one()
    for s in range(1, lam.length()):
        out = out * QPolynomial({0: 1, s * e: -1})
    return out


def _jordan_class(engine: NilpotentCyclicEngine, lam: Partition) -> IsoClass:
    return engine.make_class(tuple(((0, part), mult)
                                   for part, mult in lam.exponential().items()))


def p_jordan(engine: NilpotentCyclicEngine, n: int) -> HallElement:
    """sum_{lambda |- n} prod_{s=1}^{len-1} (1 - q^s) [I_lambda] over nilpotent C1."""
    if engine.r != 1:
        raise ValueError("p_jordan lives over the Jordan quiver engine")
    if n < 1:
        raise ValueError("need n >= 1")
    terms = {}
    for lam in partitions_of(n):
        terms[_jordan_class(engine, lam)] = jordan_primitive_coeff(lam, q0=engine.q0)
    return HallElement(engine, terms)


def p_jordan_symbolic(n: int):
    """The same element with polynomial coefficients, as (partition, poly) pairs."""
    return [(lam, jordan_primitive_coeff(lam)) for lam in partitions_of(n)]


# ---------------------------------------------------------------------------
# Central elements and normalized primitives of the nilpotent cyclic quiver
# ---------------------------------------------------------------------------

def c_central(engine: NilpotentCyclicEngine, n: int) -> HallElement:
    """(-1)^n v^(-2rn) sum over square-free-socle classes at n*delta of
    (-1)^(dim End M) a_M [M]."""
    if engine.r < 2:
        raise ValueError("central elements are defined for r >= 2")
    if n < 0:
        raise ValueError("need n >= 0")
    cache = _engine_cache(engine, "central")
    if n in cache:
        return cache[n]
    if n == 0:
        out = HallElement.unit(engine)
        cache[0] = out
        return out
    r = engine.r
    grade = tuple(n for _ in range(r))
    sign = (-1) ** n
    scale = v_power(-2 * r * n, engine.q0)
    terms = {}
    for cls in engine.classes(grade):
        if any(m > 1 for m in engine.socle(cls)):
            continue
        coeff = sign * (-1) ** engine.dim_end(cls) * engine.aut_order(cls)
        terms[cls] = scale * coeff
    out = HallElement(engine, terms)
    cache[n] = out
    return out


def x_element(engine: NilpotentCyclicEngine, n: int) -> HallElement:
    """The inductive primitive x_n = n c_n - sum_{s=1}^{n-1} x_s c_{n-s}."""
    if n < 1:
        raise ValueError("need n >= 1")
    cache = _engine_cache(engine, "xelt")
    if n in cache:
        return cache[n]
    out = c_central(engine, n).scale(n)
    for s in range(1, n):
        out = out - multiply(x_element(engine, s), c_central(engine, n - s))
    cache[n] = out
    return out


def p_cyclic(engine: NilpotentCyclicEngine, n: int) -> HallElement:
    """Normalized primitive: (v^(2rn-n)/(v^n - v^-n)) x_n = (q^(rn)/(q^n-1)) x_n.

    The coefficient of each indecomposable [S_i[rn]] is exactly 1.
    """
    if engine.r == 1:
        return p_jordan(engine, n)
    q0 = engine.q0
    scalar = Fraction(q0 ** (engine.r * n), q0 ** n - 1)
    return x_element(engine, n).scale(scalar)


def _engine_cache(engine, name):
    caches = getattr(engine, "_primitive_caches", None)
    if caches is None:
        caches = {}
        engine._primitive_caches = caches
    return caches.setdefault(name, {})


# ---------------------------------------------------------------------------
# Tube primitives
# ---------------------------------------------------------------------------

def p_tube_homog(engine, e_deg: int, m: int, classes_by_partition) -> HallElement:
    """sum_{lambda |- m} prod_{s=1}^{len-1} (1 - q^(s e)) [I_lambda(x)].

    classes_by_partition must supply the class of I_lambda(x) for every
    partition of m; e_deg is the degree of the tube's point.
    """
    terms = {}
    for lam in partitions_of(m):
        key = lam.parts
        if key not in classes_by_partition:
            raise ValueError(f"missing tube class for partition {key}")
        terms[classes_by_partition[key]] = jordan_primitive_coeff(
            lam, e=e_deg, q0=engine.q0)
    return HallElement(engine, terms)


def kron_tube_classes(engine: BruteForceEngine, n: int, infinity: bool) -> dict:
    """Classes of I_lambda(0) or I_lambda(infinity) for all lambda |- n."""
    _check_kron_cap(engine, n)
    out = {}
    for lam in partitions_of(n):
        cls = (kronecker_point_infty(engine, lam) if infinity
               else kronecker_point_zero(engine, lam))
        out[lam.parts] = cls
    return out


def _check_kron_cap(engine, n):
    if engine.quiver != kronecker_quiver():
        raise ValueError("needs a Kronecker engine")
    cap = 3 if engine.q0 == 2 else 2
    if not 1 <= n <= cap:
        raise ValueError(f"n={n} outside the supported range for q={engine.q0}")


def kron_p0(engine: BruteForceEngine, n: int) -> HallElement:
    """Tube primitive at the point 0: matrix pairs (I, J_lambda)."""
    return p_tube_homog(engine, 1, n, kron_tube_classes(engine, n, infinity=False))


def kron_pinf(engine: BruteForceEngine, n: int) -> HallElement:
    """Tube primitive at the point infinity: matrix pairs (J_lambda, I)."""
    return p_tube_homog(engine, 1, n, kron_tube_classes(engine, n, infinity=True))


def kron_pK2(engine: BruteForceEngine, n: int) -> HallElement:
    """The difference of the 0 and infinity tube primitives; primitive for
    the full comultiplication of the Kronecker quiver."""
    return kron_p0(engine, n) - kron_pinf(engine, n)


# ---------------------------------------------------------------------------
# Tube identification on the Kronecker quiver
# ---------------------------------------------------------------------------

class KroneckerTube:
    """A homogeneous tube: its quasi-simple class, degree, and the classes
    of the modules I_lambda(x) indexed by partitions."""

    __slots__ = ("simple", "degree", "classes")

    def __init__(self, simple: IsoClass, degree: int, classes: dict):
        self.simple = simple
        self.degree = degree
        self.classes = classes

    def __repr__(self):
        return f"KroneckerTube(deg={self.degree}, simple={self.simple.render()})"


def _regular_simples_of_degree(engine: BruteForceEngine, d: int):
    """Regular quasi-simples at (d, d): indecomposable regular classes with
    no proper nonzero regular submodule of square dimension vector."""
    out = []
    for cls in engine.classes((d, d)):
        if not engine.is_indecomposable(cls):
            continue
        has_regular_sub = False
        for (_, sub_key), count in engine.sub_table(cls).items():
            if not count:
                continue
            sub_grade = sub_key[0]
            total = sum(sub_grade)
            if total == 0 or total == 2 * d:
                continue
            if sub_grade[0] != sub_grade[1]:
                continue
            sub_cls = engine.class_from_key(sub_key)
            if is_regular_kronecker(engine, sub_cls):
                has_regular_sub = True
                break
        if not has_regular_sub:
            out.append(cls)
    return out


def _quasi_length_classes(engine: BruteForceEngine, simple: IsoClass, m: int):
    """E_x[1..m] inside the tube of a degree-d quasi-simple E_x."""
    d = simple.grade[0]
    chain = [simple]
    for j in range(2, m + 1):
        grade = (j * d, j * d)
        found = None
        for cls in engine.classes(grade):
            if not engine.is_indecomposable(cls):
                continue
            if engine.hall_number(cls, simple, chain[-1]):
                if found is not None:
                    raise RuntimeError("tube extension is not unique")
                found = cls
        if found is None:
            raise RuntimeError("missing tube extension class")
        chain.append(found)
    return chain


def kronecker_tubes(engine: BruteForceEngine, n: int):
    """All tubes with deg(x) | n, with I_lambda(x) classes resolved up to
    quasi-length n/deg(x).  Sorted by (degree, quasi-simple key)."""
    _check_kron_cap(engine, n)
    tubes = []
    for d in range(1, n + 1):
        if n % d:
            continue
        m = n // d
        for simple in _regular_simples_of_degree(engine, d):
            chain = _quasi_length_classes(engine, simple, m)
            classes = {}
            for lam in partitions_of(m):
                parts = [chain[part - 1] for part in lam]
                if len(parts) == 1:
                    classes[lam.parts] = parts[0]
                else:
                    classes[lam.parts] = engine.direct_sum_class(parts)
            tubes.append(KroneckerTube(simple, d, classes))
    tubes.sort(key=lambda t: (t.degree, t.simple.sort_key()))
    return tubes


def tube_primitive(engine: BruteForceEngine, tube: KroneckerTube, m: int) -> HallElement:
    return p_tube_homog(engine, tube.degree, m, tube.classes)


# ---------------------------------------------------------------------------
# Identity verifiers
# ---------------------------------------------------------------------------

def _xi_common_denominator(n: int):
    """Shared factored denominator for the sums over partitions of n."""
    max_e = 0
    max_c = {}
    data = []
    for lam in partitions_of(n):
        e, factors = a_lambda_factored(lam)
        max_e = max(max_e, e)
        for j, c in factors.items():
            max_c[j] = max(max_c.get(j, 0), c)
        data.append((lam, e, factors))
    D = QPolynomial.q(1) ** max_e if max_e else QPolynomial.one()
    for j, c in max_c.items():
        D = D * QPolynomial({j: 1, 0: -1}) ** c
    cofactors = []
    for lam, e, factors in data:
        cof = QPolynomial.q(1) ** (max_e - e) if max_e > e else QPolynomial.one()
        for j, c in max_c.items():
            extra = c - factors.get(j, 0)
            if extra:
                cof = cof * QPolynomial({j: 1, 0: -1}) ** extra
        cofactors.append((lam, cof))
    return D, cofactors


def xi_partition_sum_value(n: int, q0) -> Fraction:
    """sum_{lambda |- n} prod(1 - q^s) / a_lambda(q) at a numeric q."""
    total = Fraction(0)
    for lam in partitions_of(n):
        total += jordan_primitive_coeff(lam, q0=q0) / a_lambda(lam, q0)
    return total


def verify_xi_identity(n: int) -> VerificationReport:
    """Symbolic check of sum_{lambda |- n} prod(1-q^s)/a_lambda = 1/(q^n - 1)."""
    if not 1 <= n <= 12:
        raise ValueError("n out of the supported range 1..12")

    def run():
        D, cofactors = _xi_common_denominator(n)
        N = QPolynomial.zero()
        for lam, cof in cofactors:
            N = N + jordan_primitive_coeff(lam) * cof
        lhs = N * QPolynomial({n: 1, 0: -1})
        return lhs == D, f"N*(q^{n}-1)", "common denominator", ""

    return timed_report("xi", {"n": n}, run)


def verify_aut_sum_identities(n: int) -> VerificationReport:
    """Two companion sums over partitions of n, checked symbolically:
    sum (prod(1-q^s))^2 / a_lambda = n/(q^n - 1) and
    sum 1/a_lambda = q^(n(n-1)/2) / prod_{i=1}^n (q^i - 1)."""
    if not 1 <= n <= 10:
        raise ValueError("n out of the supported range 1..10")

    def run():
        D, cofactors = _xi_common_denominator(n)
        N1 = QPolynomial.zero()
        N2 = QPolynomial.zero()
        for lam, cof in cofactors:
            coeff = jordan_primitive_coeff(lam)
            N1 = N1 + coeff * coeff * cof
            N2 = N2 + cof
        ok1 = N1 * QPolynomial({n: 1, 0: -1}) == D * QPolynomial.const(n)
        denom = QPolynomial.one()
        for i in range(1, n + 1):
            denom = denom * QPolynomial({i: 1, 0: -1})
        ok2 = N2 * denom == D * QPolynomial.q(1) ** (n * (n - 1) // 2)
        detail = "" if ok1 and ok2 else f"squared-sum: {ok1}, plain-sum: {ok2}"
        return ok1 and ok2, "both sums", "closed forms", detail

    return timed_report("autsum", {"n": n}, run)


def verify_key_pairing(r: int, n: int, q0: int) -> VerificationReport:
    """Green pairing of the normalized cyclic primitive against the full sum
    of classes at n*delta equals the partition sum, which equals 1/(q^n-1)."""
    if not (1 <= r <= 3 and 1 <= n <= 2 and q0 in (2, 3)):
        raise ValueError("parameters outside the verified range")

    def run():
        engine = get_nilpotent_engine(r, q0)
        p = p_cyclic(engine, n)
        one = one_d(engine, tuple(n for _ in range(r)))
        pairing = green_form(p, one)
        partition_sum = xi_partition_sum_value(n, q0)
        closed = Fraction(1, q0 ** n - 1)
        ok = pairing == partition_sum and pairing == closed
        return ok, pairing.render(), str(closed), ""

    return timed_report("pairing", {"r": r, "n": n, "q": q0}, run)


def central_family_check(r: int, n: int, q0: int) -> VerificationReport:
    """The central elements commute with every simple and satisfy
    Delta(c_n) = sum_s c_s ox c_{n-s}."""
    if not (2 <= r <= 3 and 1 <= n <= 2 and q0 in (2, 3)):
        raise ValueError("parameters outside the verified range")

    def run():
        engine = get_nilpotent_engine(r, q0)
        cn = c_central(engine, n)
        for i in range(r):
            si = HallElement.basis(engine, engine.simple(i))
            if multiply(cn, si) != multiply(si, cn):
                return False, f"c_{n}*[S_{i + 1}]", f"[S_{i + 1}]*c_{n}", "centrality failed"
        delta = comultiply(cn)
        expected = {}
        for s in range(n + 1):
            cs = c_central(engine, s)
            cns = c_central(engine, n - s)
            for A, ca in cs.terms.items():
                for B, cb in cns.terms.items():
                    pair = (A, B)
                    val = ca * cb
                    cur = expected.get(pair)
                    expected[pair] = val if cur is None else cur + val
        ok = delta == TensorElement(engine, expected)
        return ok, "Delta(c_n)", "sum c_s ox c_(n-s)", ""

    return timed_report("central", {"r": r, "n": n, "q": q0}, run)


# ---------------------------------------------------------------------------
# The two main Kronecker statements
# ---------------------------------------------------------------------------

def kernel_theorem_check(n: int, q0: int) -> VerificationReport:
    """Full primitive space at (n,n) = kernel of z -> {z, 1^reg} on the
    regular primitive space, with the expected dimensions."""
    if not (1 <= n <= 2 and q0 in (2, 3)) or (n == 2 and q0 != 2):
        raise ValueError("parameters outside the verified range")

    def run():
        engine = get_brute_engine(kronecker_quiver(), q0)
        d = (n, n)
        full = primitive_subspace(engine, d)
        reg_pred = lambda c: is_regular_kronecker(engine, c)
        regular = primitive_subspace(engine, d, predicate=reg_pred)
        reg_sum = one_reg(engine, n)
        pairings = [green_form(z, reg_sum) for z in regular]
        pivot = next((i for i, v in enumerate(pairings) if not v.is_zero()), None)
        if pivot is None:
            return False, "functional", "0", "regular integral functional vanished"
        kernel = []
        inv = pairings[pivot].inverse()
        for i, z in enumerate(regular):
            if i == pivot:
                continue
            kernel.append(z - regular[pivot].scale(pairings[i] * inv))

        expected_dim = sum(phi_irreducible_count(s, q0) for s in range(1, n + 1)
                           if n % s == 0)
        checks = {
            "dim_full": len(full) == expected_dim,
            "codim_one": len(regular) == len(full) + 1,
            "full_in_regular": all(in_span(regular, z) for z in full),
            "full_equals_kernel": (
                len(kernel) == len(full)
                and all(in_span(kernel, z) for z in full)
                and all(in_span(full, z) for z in kernel)),
            "annihilates": all(green_form(z, reg_sum).is_zero() for z in full),
        }
        ok = all(checks.values())
        detail = "" if ok else str({k: v for k, v in checks.items() if not v})
        return (ok, f"dim full={len(full)}, dim regular={len(regular)}",
                f"expected {expected_dim} and {expected_dim + 1}", detail)

    return timed_report("kernel", {"n": n, "q": q0}, run)


def difference_basis_check(n: int, q0: int, anchor_index: int = 0) -> VerificationReport:
    """The differences p_m(x) - p_t(y) over tubes with t*deg(y) = n form a
    basis of the full primitive space at (n, n)."""
    if not (1 <= n <= 2 and q0 in (2, 3)) or (n == 2 and q0 != 2):
        raise ValueError("parameters outside the verified range")

    def run():
        engine = get_brute_engine(kronecker_quiver(), q0)
        tubes = kronecker_tubes(engine, n)
        if not 0 <= anchor_index < len(tubes):
            return False, "anchor", "tubes", f"anchor {anchor_index} out of range"
        anchor = tubes[anchor_index]
        p_anchor = tube_primitive(engine, anchor, n // anchor.degree)
        diffs = []
        for tube in tubes:
            if tube is anchor:
                continue
            diffs.append(p_anchor - tube_primitive(engine, tube, n // tube.degree))
        full = primitive_subspace(engine, (n, n))
        checks = {
            "cardinality": len(diffs) == len(full),
            "all_primitive": all(is_primitive(x) for x in diffs),
            "independent": rank_of_elements(diffs) == len(diffs),
            "spans": all(in_span(diffs, z) for z in full),
        }
        ok = all(checks.values())
        detail = "" if ok else str({k: v for k, v in checks.items() if not v})
        return (ok, f"{len(diffs)} differences", f"dim {len(full)}", detail)

    return timed_report("basis", {"n": n, "q": q0}, run)
