"""Exact linear algebra over GF(2) for small ambient dimensions.

Vectors are plain Python ints: bit ``i-1`` holds coordinate ``i``, so the
bitstring ``01001`` (coordinate 1 first) is the integer ``0b10010 = 18``.
Subspaces are canonicalized by reduced row echelon form and additionally
carry a point-membership bitmask, which makes meets and disjointness tests
single AND operations.

Points also have a compact textual form used throughout the command-line
tools: a token is a string of generator symbols whose mod-2 sum is the
vector, where ``1``..``5`` name the canonical basis vectors and ``u`` is
the all-ones vector.  For example ``25`` is ``01001`` and ``3u`` is
``11011``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

__all__ = [
    "Subspace",
    "span",
    "meet",
    "join",
    "dual",
    "subspace_distance",
    "enumerate_subspaces",
    "parse_point",
    "format_point",
    "point_from_bitstring",
    "point_to_bitstring",
    "rref",
    "rank",
    "span_mask",
    "dot",
    "gaussian_binomial",
]


def dot(a: int, b: int) -> int:
    """Standard dot product of two GF(2) vectors, reduced mod 2."""
    return (a & b).bit_count() & 1


def rref(vectors) -> tuple:
    """Canonical reduced-row-echelon basis of the span of ``vectors``.

    Pivot of each row is its lowest set bit; rows are back-eliminated and
    sorted by pivot, so equal subspaces always produce identical tuples.
    """
    basis = []
    for v in vectors:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            basis.append(v)
            basis.sort(key=lambda x: x & -x)
    out = sorted(basis, key=lambda x: x & -x)
    for i in range(len(out)):
        for j in range(len(out)):
            if i != j and out[j] & (out[i] & -out[i]):
                out[j] ^= out[i]
    return tuple(sorted(out, key=lambda x: x & -x))


def rank(vectors) -> int:
    return len(rref(vectors))


def span_mask(basis) -> int:
    """Membership bitmask of the span: bit v is set iff vector v lies in it.

    Bit 0 (the zero vector) is always set.
    """
    m = 1
    for b in basis:
        new = 0
        mm = m
        while mm:
            low = mm & -mm
            v = low.bit_length() - 1
            new |= 1 << (v ^ b)
            mm ^= low
        m |= new
    return m


class Subspace:
    """A subspace of GF(2)^n, canonical under RREF.

    Immutable and hashable; two Subspace objects are equal iff they are the
    same subspace of the same ambient space.
    """

    __slots__ = ("n", "basis", "_mask")

    def __init__(self, vectors, n: int):
        if n < 1 or n > 12:
            raise ValueError(f"unsupported ambient dimension {n}")
        basis = rref(vectors)
        if basis and basis[-1] >> n:
            raise ValueError("vector outside ambient space")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_mask", None)

    def __setattr__(self, *args):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def mask(self) -> int:
        m = self._mask
        if m is None:
            m = span_mask(self.basis)
            object.__setattr__(self, "_mask", m)
        return m

    def points(self):
        """The nonzero vectors of the subspace, ascending."""
        m = self.mask & ~1
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < (1 << self.n) and bool(self.mask >> v & 1)

    def __le__(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return (self.mask & ~other.mask) == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, self.basis))

    def __lt__(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return self.basis < other.basis

    def __repr__(self):
        gens = ",".join(format_point(v, self.n) for v in self.basis)
        return f"Subspace({self.n}, <{gens}>)"


def _check_ambient(u: Subspace, v: Subspace):
    if u.n != v.n:
        raise ValueError(f"mixed ambient dimensions {u.n} and {v.n}")


def span(points, n: int) -> Subspace:
    """Smallest subspace of GF(2)^n containing all the given vectors."""
    return Subspace(points, n)


def meet(u: Subspace, v: Subspace) -> Subspace:
    """Intersection of two subspaces."""
    _check_ambient(u, v)
    m = u.mask & v.mask & ~1
    pts = []
    while m:
        low = m & -m
        pts.append(low.bit_length() - 1)
        m ^= low
    return Subspace(pts, u.n)


def join(u: Subspace, v: Subspace) -> Subspace:
    """Span of the union of two subspaces."""
    _check_ambient(u, v)
    return Subspace(u.basis + v.basis, u.n)


def dual(u: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    pts = [v for v in range(1, 1 << u.n) if all(dot(v, b) == 0 for b in u.basis)]
    return Subspace(pts, u.n)


def subspace_distance(u: Subspace, v: Subspace) -> int:
    """d(U,V) = dim U + dim V - 2 dim(U ∩ V)."""
    _check_ambient(u, v)
    inter = u.mask & v.mask
    dim_meet = inter.bit_count().bit_length() - 1
    return u.dim + v.dim - 2 * dim_meet


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q)."""
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


@lru_cache(maxsize=None)
def enumerate_subspaces(n: int, k: int):
    """All k-dimensional subspaces of GF(2)^n, each exactly once.

    Enumerates RREF matrices directly (choose pivot columns, then free
    entries) and returns them sorted by canonical basis, which fixes a
    deterministic ID order used everywhere else.
    """
    if k < 0 or k > n:
        raise ValueError(f"dimension {k} out of range for ambient {n}")
    out = set()
    for piv in itertools.combinations(range(n), k):
        free = [
            (r, c)
            for r, p in enumerate(piv)
            for c in range(p + 1, n)
            if c not in piv
        ]
        for bits in range(1 << len(free)):
            rows = [1 << p for p in piv]
            for idx, (r, c) in enumerate(free):
                if bits >> idx & 1:
                    rows[r] |= 1 << c
            out.add(rref(rows))
    assert len(out) == gaussian_binomial(n, k)
    return tuple(Subspace(b, n) for b in sorted(out))


# ---------------------------------------------------------------------------
# compact point notation


def _generators(n: int):
    gens = [(str(i + 1), 1 << i) for i in range(n)]
    gens.append(("u", (1 << n) - 1))
    return gens


def parse_point(token: str, n: int = 5) -> int:
    """Parse a compact point token such as ``25`` or ``3u``.

    The token is a nonempty string over {1..n, u} with no repeated symbol;
    its value is the mod-2 sum of the named generators.
    """
    if not token:
        raise ValueError("empty point token")
    if len(set(token)) != len(token):
        raise ValueError(f"repeated symbol in point token {token!r}")
    v = 0
    for ch in token:
        if ch == "u":
            v ^= (1 << n) - 1
        elif ch.isdigit() and 1 <= int(ch) <= n:
            v ^= 1 << (int(ch) - 1)
        else:
            raise ValueError(f"unknown symbol {ch!r} in point token {token!r}")
    return v


@lru_cache(maxsize=None)
def _format_table(n: int):
    gens = _generators(n)
    table = {}
    for size in (1, 2, 3):
        for combo in itertools.combinations(gens, size):
            v = 0
            for _, g in combo:
                v ^= g
            if v and v not in table:
                table[v] = "".join(sym for sym, _ in combo)
    return table


def format_point(v: int, n: int = 5) -> str:
    """Compact token for a point; shortest decomposition into ≤3 generators.

    Falls back to the raw bitstring if no such decomposition exists (cannot
    happen for n ≤ 6).
    """
    if not 0 < v < (1 << n):
        raise ValueError(f"not a point of GF(2)^{n}: {v}")
    tok = _format_table(n).get(v)
    return tok if tok is not None else point_to_bitstring(v, n)


def point_to_bitstring(v: int, n: int = 5) -> str:
    """Bitstring with coordinate 1 leftmost, e.g. 18 -> '01001' for n=5."""
    return "".join("1" if v >> i & 1 else "0" for i in range(n))


def point_from_bitstring(s: str) -> int:
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
        elif ch != "0":
            raise ValueError(f"bad bitstring {s!r}")
    return v
