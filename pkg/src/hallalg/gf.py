"""Finite fields GF(p^e) with exact arithmetic, traces and additive characters.

Elements are coded as integers 0 .. p^e - 1: the code of an element with
coefficient vector (c_0, ..., c_{e-1}) over GF(p) is c_0 + c_1*p + ...
(low-to-high base-p digits).  The modulus is the lexicographically
smallest monic irreducible polynomial of the right degree under that
same digit order, so field construction is fully deterministic.

Dense matrices over a field are tuples of row tuples of codes; the
helpers at the bottom cover the small-dimension linear algebra the
representation engines need.
"""

from __future__ import annotations

from .coeffring import CycloSqrt

__all__ = [
    "FieldSpec",
    "FieldElem",
    "enumerate_field",
    "trace_to_prime",
    "additive_character",
]

_ENUM_CAP = 10 ** 4
_TABLE_CAP = 64


def _factor_prime_power(q: int):
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


def _poly_mod_mul(a, b, modulus, p):
    """Multiply coefficient tuples over GF(p) modulo a monic modulus."""
    e = len(modulus) - 1
    raw = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            raw[i + j] = (raw[i + j] + x * y) % p
    for k in range(len(raw) - 1, e - 1, -1):
        c = raw[k]
        if not c:
            continue
        raw[k] = 0
        for j in range(e):
            raw[k - e + j] = (raw[k - e + j] - c * modulus[j]) % p
    out = raw[:e]
    out += [0] * (e - len(out))
    return tuple(out)


def _is_irreducible(poly, p):
    """Check irreducibility of a monic polynomial over GF(p) by trial division."""
    e = len(poly) - 1
    if e == 1:
        return True
    # root search covers degrees 2 and 3 completely
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if e <= 3:
        return True
    # degree 4+: divide by all monic polynomials of degree 2 .. e//2
    for d in range(2, e // 2 + 1):
        for code in range(p ** d):
            div = _decode_poly(code, d, p) + (1,)
            if _poly_divides(div, poly, p):
                return False
    return True


def _decode_poly(code, length, p):
    out = []
    for _ in range(length):
        out.append(code % p)
        code //= p
    return tuple(out)


def _poly_divides(div, poly, p):
    rem = list(poly)
    dd = len(div) - 1
    inv_lead = pow(div[-1], p - 2, p)
    while len(rem) - 1 >= dd:
        if rem[-1] == 0:
            rem.pop()
            continue
        f = rem[-1] * inv_lead % p
        off = len(rem) - 1 - dd
        for i in range(dd + 1):
            rem[off + i] = (rem[off + i] - f * div[i]) % p
        rem.pop()
    while rem and rem[-1] == 0:
        rem.pop()
    return not rem


class FieldSpec:
    """Immutable description of GF(p^e) with precomputed arithmetic."""

    _cache: dict = {}

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = self._find_modulus(p, e)
        self._mul_table = None
        self._inv_table = None
        if self.q <= _TABLE_CAP and e > 1:
            self._build_tables()

    @staticmethod
    def from_order(q: int) -> "FieldSpec":
        if q in FieldSpec._cache:
            return FieldSpec._cache[q]
        p, e = _factor_prime_power(q)
        spec = FieldSpec(p, e)
        FieldSpec._cache[q] = spec
        return spec

    @staticmethod
    def _find_modulus(p, e):
        if e == 1:
            return (0, 1)  # x, a formal placeholder for the prime field
        for code in range(p ** e):
            poly = _decode_poly(code, e, p) + (1,)
            if _is_irreducible(poly, p):
                return poly
        raise RuntimeError("no irreducible polynomial found")  # unreachable

    def _build_tables(self):
        q, p, e = self.q, self.p, self.e
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            va = _decode_poly(a, e, p)
            for b in range(a, q):
                vb = _decode_poly(b, e, p)
                prod = _poly_mod_mul(va, vb, self.modulus, p)
                c = self._encode(prod)
                mul[a][b] = c
                mul[b][a] = c
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self._mul_table = mul
        self._inv_table = inv

    def _encode(self, vec):
        code = 0
        for c in reversed(vec):
            code = code * self.p + c
        return code

    def decode(self, code: int):
        return _decode_poly(code, self.e, self.p)

    # -- arithmetic on codes -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((a % p) + (b % p)) % p * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += (-(a % p)) % p * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._encode(_poly_mod_mul(
            self.decode(a), self.decode(b), self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.power(a, self.q - 2)

    def power(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def multiplicative_generator(self) -> int:
        """A generator of the cyclic group GF(q)^*."""
        order = self.q - 1
        for g in range(1, self.q):
            acc = g
            k = 1
            while acc != 1:
                acc = self.mul(acc, g)
                k += 1
            if k == order:
                return g
        raise RuntimeError("no multiplicative generator found")  # unreachable

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.q == other.q

    def __hash__(self):
        return hash(("FieldSpec", self.q))

    def __repr__(self):
        return f"FieldSpec(GF({self.q}))"


class FieldElem:
    """A field element: a spec reference plus a coefficient code."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        if not 0 <= code < spec.q:
            raise ValueError(f"code {code} out of range for GF({spec.q})")
        self.spec = spec
        self.code = code

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and self.spec == other.spec
                and self.code == other.code)

    def __hash__(self):
        return hash((self.spec.q, self.code))

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.spec, self.spec.add(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.spec, self.spec.sub(self.code, other.code))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.spec, self.spec.mul(self.code, other.code))

    def __truediv__(self, other):
        self._check(other)
        return FieldElem(self.spec, self.spec.mul(self.code, self.spec.inv(other.code)))

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.code))

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.spec != self.spec:
            raise TypeError("field mismatch")

    def render(self) -> str:
        digits = ",".join(str(c) for c in self.spec.decode(self.code))
        return f"GF({self.spec.q}):[{digits}]"

    def __repr__(self):
        return self.render()


def enumerate_field(spec: FieldSpec):
    """All p^e elements in deterministic base-p counting order."""
    if spec.q > _ENUM_CAP:
        raise ValueError(f"field of size {spec.q} exceeds the enumeration cap")
    return [FieldElem(spec, code) for code in range(spec.q)]


def trace_to_prime(x: FieldElem) -> int:
    """Tr(x) = x + x^p + ... + x^(p^(e-1)), returned as an element of GF(p)."""
    spec = x.spec
    total = 0
    acc = x.code
    for _ in range(spec.e):
        total = spec.add(total, acc)
        acc = spec.power(acc, spec.p)
    vec = spec.decode(total)
    if any(vec[1:]):
        raise RuntimeError("trace landed outside the prime subfield")  # unreachable
    return vec[0]


def additive_character(x: FieldElem, base: int) -> CycloSqrt:
    """psi(x) = zeta_p^Tr(x), as an element of Q(zeta_p)(sqrt(base))."""
    p_base, _ = _factor_prime_power(base)
    if p_base != x.spec.p:
        raise TypeError(
            f"characteristic {x.spec.p} does not match cyclotomic prime of base {base}")
    return CycloSqrt.zeta(x.spec.p, base, trace_to_prime(x))


# ---------------------------------------------------------------------------
# Dense matrices over a FieldSpec (tuples of row tuples of codes)
# ---------------------------------------------------------------------------

def mat_zero(rows: int, cols: int):
    return tuple((0,) * cols for _ in range(rows))


def mat_identity(n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(F: FieldSpec, A, B):
    if not A or not B:
        return tuple(() for _ in A) if A else ()
    n, k = len(A), len(A[0])
    m = len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = 0
            for t in range(k):
                a = Ai[t]
                if a:
                    s = F.add(s, F.mul(a, B[t][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_add(F: FieldSpec, A, B):
    return tuple(tuple(F.add(a, b) for a, b in zip(ra, rb))
                 for ra, rb in zip(A, B))


def mat_neg(F: FieldSpec, A):
    return tuple(tuple(F.neg(a) for a in row) for row in A)


def mat_vec(F: FieldSpec, A, v):
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if a and x:
                s = F.add(s, F.mul(a, x))
        out.append(s)
    return tuple(out)


def vec_add(F: FieldSpec, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_scale(F: FieldSpec, c, v):
    return tuple(F.mul(c, x) for x in v)


def mat_rank(F: FieldSpec, A) -> int:
    rows = [list(r) for r in A if any(r)]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < cols:
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def mat_rref(F: FieldSpec, A):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in A]
    rows = [r for r in rows if any(r)]
    if not rows:
        return [], []
    cols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(cols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, x) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    rows = [tuple(r) for r in rows[:rank]]
    return rows, pivots


def mat_is_invertible(F: FieldSpec, A) -> bool:
    n = len(A)
    return n == 0 or (len(A[0]) == n and mat_rank(F, A) == n)


def mat_inverse(F: FieldSpec, A):
    n = len(A)
    if n == 0:
        return ()
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = F.inv(aug[rank][col])
        aug[rank] = [F.mul(inv, x) for x in aug[rank]]
        for r in range(n):
            if r != rank and aug[r][col]:
                f = aug[r][col]
                aug[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[r], aug[rank])]
        rank += 1
    return tuple(tuple(row[n:]) for row in aug)


def mat_kernel_basis(F: FieldSpec, A):
    """Basis (list of tuples) of the right kernel {x : A x = 0}."""
    if not A:
        return []
    cols = len(A[0])
    rows, pivots = mat_rref(F, A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * cols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = F.neg(rows[r][fc])
        basis.append(tuple(vec))
    return basis


def mat_trace(F: FieldSpec, A) -> int:
    t = 0
    for i in range(len(A)):
        t = F.add(t, A[i][i])
    return t


def gl_order(F: FieldSpec, n: int) -> int:
    """|GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i)."""
    q = F.q
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gl_generators(F: FieldSpec, n: int):
    """A generating set for GL_n(F_q): all unit transvections plus a torus generator."""
    if n == 0:
        return []
    gens = []
    if F.q > 2:
        g = F.multiplicative_generator()
        diag = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        diag[0][0] = g
        gens.append(tuple(tuple(r) for r in diag))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for a in F.units():
                t = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
                t[i][j] = a
                gens.append(tuple(tuple(r) for r in t))
    return gens


def subspaces(F: FieldSpec, n: int, k: int):
    """All k-dimensional subspaces of F^n as RREF row bases (tuples of rows)."""
    if k == 0:
        yield ()
        return
    if k > n:
        return
    from itertools import combinations, product
    for pivots in combinations(range(n), k):
        free_positions = []
        for i in range(k):
            for c in range(pivots[i] + 1, n):
                if c not in pivots:
                    free_positions.append((i, c))
        for values in product(range(F.q), repeat=len(free_positions)):
            rows = [[0] * n for _ in range(k)]
            for i in range(k):
                rows[i][pivots[i]] = 1
            for (i, c), val in zip(free_positions, values):
                rows[i][c] = val
            yield tuple(tuple(r) for r in rows)


def all_subspaces(F: FieldSpec, n: int):
    for k in range(n + 1):
        yield from subspaces(F, n, k)


def rref_membership_coords(F: FieldSpec, basis, pivots, w):
    """Coordinates of w in an RREF basis, or None if w is not in the span."""
    coords = tuple(w[p] for p in pivots)
    recon = [0] * len(w)
    for c, row in zip(coords, basis):
        if c:
            for j, x in enumerate(row):
                if x:
                    recon[j] = F.add(recon[j], F.mul(c, x))
    if tuple(recon) != tuple(w):
        return None
    return coords
