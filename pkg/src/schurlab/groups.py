"""Small finite groups as multiplication tables, with characters and coset states.

Element orderings are fixed per family:

* ``cyclic:N``    -- residues 0..N-1 under addition.
* ``dihedral:N``  -- rotations r^0..r^{N-1}, then reflections s r^0..s r^{N-1};
  ``(s^f r^a)(s^g r^b) = s^{f+g} r^{(-1)^g a + b}``.
* ``sym:n``       -- permutations of 0..n-1 in lexicographic order of their
  image tuples; ``(p q)(i) = p(q(i))``.
* ``wreath_s2:n`` -- S_n wr Z_2 acting on 2n points ``(copy, x)``; element
  ``(p0, p1, f)`` sends ``(c, x)`` to ``(c xor f, p_c(x))``. Ordered by ``f``,
  then ``p0``, then ``p1`` (each lexicographic).
"""
from __future__ import annotations

import itertools
from math import factorial
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .characters import character, cycle_type
from .errors import CapExceeded, InvariantViolation
from .young import Partition, enumerate_partitions

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "CharacterTable",
    "DensityMatrix",
    "make_group",
    "subgroups",
    "subgroup_from_generators",
    "parse_subgroup",
    "regular_rep",
    "character_table",
    "use_table_store",
    "isotypic_projector",
    "hidden_subgroup_state",
    "fourier_probability",
    "fourier_probability_exact",
]

ORDER_CAP = 48
WREATH_ORDER_CAP = 72
SUBGROUP_SEARCH_CAP = 48


@dataclass(eq=False)
class FiniteGroup:
    family: str
    param: int
    elements: tuple
    mult: np.ndarray
    identity: int
    inv: np.ndarray
    points: Optional[int] = None  # degree of the permutation action, if any

    @property
    def name(self) -> str:
        return f"{self.family}:{self.param}"

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def index(self, element) -> int:
        return self._index[element]

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def conjugacy_classes(self) -> tuple:
        n = self.order
        seen = np.zeros(n, dtype=bool)
        classes = []
        for x in range(n):
            if seen[x]:
                continue
            cls = sorted({int(self.mult[self.mult[g, x], self.inv[g]]) for g in range(n)})
            seen[cls] = True
            classes.append(tuple(cls))
        return tuple(classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=int)
        for c, cls in enumerate(self.conjugacy_classes):
            out[list(cls)] = c
        return out

    def check_axioms(self) -> None:
        n, m = self.order, self.mult
        e = self.identity
        if not (np.array_equal(m[e], np.arange(n)) and np.array_equal(m[:, e], np.arange(n))):
            raise InvariantViolation(f"{self.name}: identity is not two-sided")
        if not np.all(m[np.arange(n), self.inv] == e):
            raise InvariantViolation(f"{self.name}: inverse table is wrong")
        # (ab)c == a(bc) for every triple
        left = m[m[:, :, None], np.arange(n)[None, None, :]]
        right = m[np.arange(n)[:, None, None], m[None, :, :]]
        if not np.array_equal(left, right):
            raise InvariantViolation(f"{self.name}: multiplication is not associative")


def _from_elements(family, param, elements, compose, identity, points=None) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[i, j] = index[compose(a, b)]
    e = index[identity]
    inv = np.argmax(mult == e, axis=1)
    return FiniteGroup(family, param, tuple(elements), mult, e, inv, points)


def _compose_perm(p, q):
    return tuple(p[i] for i in q)


def _cyclic(n):
    return _from_elements("cyclic", n, list(range(n)), lambda a, b: (a + b) % n, 0)


def _dihedral(n):
    elements = [(f, a) for f in (0, 1) for a in range(n)]

    def compose(x, y):
        (f, a), (g, b) = x, y
        return ((f + g) % 2, ((-1) ** g * a + b) % n)

    return _from_elements("dihedral", n, elements, compose, (0, 0))


def _sym(n):
    perms = list(itertools.permutations(range(n)))
    return _from_elements("sym", n, perms, _compose_perm, tuple(range(n)), points=n)


def wreath_element(p0, p1, f, n) -> tuple:
    """The permutation of 2n points representing ``(p0, p1, f)``."""
    image = [0] * (2 * n)
    for c, p in ((0, p0), (1, p1)):
        for x in range(n):
            image[c * n + x] = (c ^ f) * n + p[x]
    return tuple(image)


def wreath_parts(perm, n) -> tuple:
    """Inverse of :func:`wreath_element`: recover ``(p0, p1, f)``."""
    f = perm[0] // n
    p0 = tuple(perm[x] % n for x in range(n))
    p1 = tuple(perm[n + x] % n for x in range(n))
    return p0, p1, f


def _wreath(n):
    perms = list(itertools.permutations(range(n)))
    elements = [wreath_element(p0, p1, f, n) for f in (0, 1) for p0 in perms for p1 in perms]
    return _from_elements("wreath_s2", n, elements, _compose_perm, tuple(range(2 * n)), points=2 * n)


def _parse_group_spec(spec) -> tuple[str, int]:
    if isinstance(spec, tuple):
        family, param = spec
    else:
        family, _, param = str(spec).partition(":")
    try:
        param = int(param)
    except ValueError:
        raise ValueError(f"bad group spec {spec!r}; expected <family>:<int>") from None
    return family.strip(), param


def make_group(spec) -> FiniteGroup:
    """Build a group from ``"family:param"`` (or a ``(family, param)`` pair)."""
    family, n = _parse_group_spec(spec)
    if n < 1:
        raise ValueError(f"group parameter must be positive: {spec!r}")
    if family == "cyclic":
        order = n
    elif family == "dihedral":
        order = 2 * n
    elif family == "sym":
        if n > 4:
            raise CapExceeded(f"sym:{n} exceeds the cap sym:4")
        order = 0
    elif family == "wreath_s2":
        order = 2 * factorial(n) ** 2
        if order > WREATH_ORDER_CAP:
            raise CapExceeded(f"wreath_s2:{n} has order {order} > {WREATH_ORDER_CAP}")
        order = 0
    else:
        raise ValueError(f"unsupported group family {family!r}")
    if order > ORDER_CAP:
        raise CapExceeded(f"{family}:{n} has order {order} > {ORDER_CAP}")
    return {"cyclic": _cyclic, "dihedral": _dihedral, "sym": _sym, "wreath_s2": _wreath}[family](n)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    def __post_init__(self):
        g, els = self.parent, set(self.elements)
        if g.identity not in els:
            raise InvariantViolation("subgroup does not contain the identity")
        for a in els:
            if int(g.inv[a]) not in els or any(int(g.mult[a, b]) not in els for b in els):
                raise InvariantViolation("element set is not closed under the group law")
        if g.order % len(els):
            raise InvariantViolation("subgroup order does not divide the group order")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.elements == self.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self):
        return f"Subgroup({self.parent.name}, order={self.order}, elements={list(self.elements)})"


def _closure(group: FiniteGroup, gens) -> frozenset:
    found = {group.identity}
    frontier = list(found)
    gens = [int(g) for g in gens]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = int(group.mult[x, g])
                if y not in found:
                    found.add(y)
                    new.append(y)
        frontier = new
    return frozenset(found)


def subgroup_from_generators(group: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    return Subgroup(group, tuple(sorted(_closure(group, gens))))


def subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by joining cyclic subgroups until nothing new appears.

    Any subgroup is generated by the cyclic subgroups it contains, so the
    join-closure of the cyclic subgroups is the full lattice.
    """
    if group.order > SUBGROUP_SEARCH_CAP:
        raise CapExceeded(f"subgroup search limited to |G| <= {SUBGROUP_SEARCH_CAP}")
    cyclic = {_closure(group, [g]) for g in range(group.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for h in frontier:
            for c in cyclic:
                if c <= h:
                    continue
                j = _closure(group, h | c)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Subgroup(group, tuple(sorted(s))) for s in ordered]


def _parse_cycles(text: str, points: int) -> tuple:
    """``"(12)(34)"`` or ``"(1,2)(3,4)"``, 1-based, into an image tuple."""
    image = list(range(points))
    for body in text.replace(" ", "").strip("()").split(")("):
        if not body:
            continue
        pts = [int(x) for x in body.split(",")] if "," in body else [int(c) for c in body]
        pts = [p - 1 for p in pts]
        if any(not 0 <= p < points for p in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle {body!r} on {points} points")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            image[a] = b
    return tuple(image)


def parse_subgroup(group: FiniteGroup, spec: str) -> Subgroup:
    """``trivial``, ``full``, ``reflection:<j>`` (dihedral) or ``gen:<...>``.

    ``gen:`` takes either cycle notation on the permutation points
    (``gen:(12)``, ``gen:(12)(34)``, several generators separated by ``;``)
    for permutation groups, or a
    comma-separated list of element indices (``gen:2,5``).
    """
    spec = spec.strip()
    if spec == "trivial":
        return Subgroup(group, (group.identity,))
    if spec == "full":
        return Subgroup(group, tuple(range(group.order)))
    kind, _, arg = spec.partition(":")
    if kind == "reflection":
        if group.family != "dihedral":
            raise ValueError("reflection:<j> subgroups exist only for dihedral groups")
        j = int(arg) % group.param
        return subgroup_from_generators(group, [group.index((1, j))])
    if kind == "gen":
        if "(" in arg:
            if group.points is None:
                raise ValueError(f"cycle notation needs a permutation group, not {group.name}")
            gens = [group.index(_parse_cycles(g, group.points)) for g in arg.split(";")]
        else:
            gens = [int(x) for x in arg.split(",") if x.strip()]
            if any(not 0 <= g < group.order for g in gens):
                raise ValueError(f"element index out of range for {group.name}")
        return subgroup_from_generators(group, gens)
    raise ValueError(f"unsupported subgroup spec {spec!r}")


def regular_rep(group: FiniteGroup, side: str, g: int) -> np.ndarray:
    """Permutation matrix of the left (|x> -> |g x>) or right (|x> -> |x g^-1>) action."""
    n = group.order
    cols = np.arange(n)
    if side == "left":
        rows = group.mult[g, cols]
    elif side == "right":
        rows = group.mult[cols, group.inv[g]]
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    out = np.zeros((n, n))
    out[rows, cols] = 1.0
    return out


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters, stored per element (``values[irrep, element]``)."""

    group: FiniteGroup
    labels: tuple
    dims: tuple
    values: np.ndarray

    @property
    def d_max(self) -> int:
        return max(self.dims)

    def index(self, label) -> int:
        return self.labels.index(str(label))

    def chi(self, label) -> np.ndarray:
        return self.values[self.index(label)]

    @property
    def class_values(self) -> np.ndarray:
        reps = [cls[0] for cls in self.group.conjugacy_classes]
        return self.values[:, reps]


def _dihedral_table(group):
    n = group.param
    f = np.array([e[0] for e in group.elements])
    a = np.array([e[1] for e in group.elements])
    labels, dims, rows = ["trivial", "sign"], [1, 1], [np.ones(2 * n), (-1.0) ** f]
    if n % 2 == 0:
        labels += ["alt", "alt_sign"]
        dims += [1, 1]
        rows += [(-1.0) ** a, (-1.0) ** (a + f)]
    for h in range(1, (n - 1) // 2 + 1):
        labels.append(f"rho{h}")
        dims.append(2)
        rows.append(np.where(f == 0, 2 * np.cos(2 * np.pi * h * a / n), 0.0))
    return labels, dims, rows


def _wreath_table(group):
    n = group.param
    parts = [wreath_parts(e, n) for e in group.elements]
    irreps = enumerate_partitions(n)
    labels, dims, rows = [], [], []

    def chi(lam, p):
        return character(lam, cycle_type(p))

    for i, lam in enumerate(irreps):
        for mu in irreps[i:]:
            dl, dm = chi(lam, tuple(range(n))), chi(mu, tuple(range(n)))
            if lam != mu:
                labels.append(f"{lam}x{mu}")
                dims.append(2 * dl * dm)
                rows.append(np.array([
                    0.0 if f else chi(lam, p0) * chi(mu, p1) + chi(mu, p0) * chi(lam, p1)
                    for p0, p1, f in parts
                ]))
                continue
            for sign, tag in ((1, "+"), (-1, "-")):
                labels.append(f"{lam}x{lam}{tag}")
                dims.append(dl * dl)
                rows.append(np.array([
                    sign * chi(lam, _compose_perm(p1, p0)) if f else chi(lam, p0) * chi(lam, p1)
                    for p0, p1, f in parts
                ], dtype=float))
    return labels, dims, rows


_table_store = None


def use_table_store(store) -> None:
    """Install a ``load(name) -> dict | None`` / ``save(name, dict)`` store for character tables."""
    global _table_store
    _table_store = store


def _table_to_json(table: CharacterTable) -> dict:
    return {
        "group": table.group.name,
        "labels": list(table.labels),
        "dims": list(table.dims),
        "values": [[[float(z.real), float(z.imag)] for z in row] for row in table.values],
    }


def character_table(group: FiniteGroup) -> CharacterTable:
    """Complete character table for the supported families (through the store, if any)."""
    store = _table_store
    data = store.load(group.name) if store is not None else None
    if data is not None and data.get("group") == group.name:
        values = np.array([[complex(re, im) for re, im in row] for row in data["values"]])
        return CharacterTable(group, tuple(data["labels"]), tuple(data["dims"]), values)
    table = _compute_character_table(group)
    if store is not None:
        store.save(group.name, _table_to_json(table))
    return table


def _compute_character_table(group: FiniteGroup) -> CharacterTable:
    fam, n = group.family, group.param
    if fam == "cyclic":
        j = np.arange(n)
        labels = [f"chi{m}" for m in range(n)]
        dims = [1] * n
        rows = [np.exp(2j * np.pi * m * j / n) for m in range(n)]
    elif fam == "dihedral":
        labels, dims, rows = _dihedral_table(group)
    elif fam == "sym":
        lams = enumerate_partitions(n)
        labels = [str(lam) for lam in lams]
        dims = [character(lam, (1,) * n) for lam in lams]
        rows = [np.array([character(lam, cycle_type(p)) for p in group.elements], float) for lam in lams]
    elif fam == "wreath_s2":
        labels, dims, rows = _wreath_table(group)
    else:
        raise ValueError(f"no character table for family {fam!r}")
    values = np.array(rows, dtype=complex)
    if sum(d * d for d in dims) != group.order:
        raise InvariantViolation(f"{group.name}: squared irrep dimensions do not sum to |G|")
    return CharacterTable(group, tuple(labels), tuple(int(d) for d in dims), values)


def isotypic_projector(group: FiniteGroup, table: CharacterTable, label) -> np.ndarray:
    """(dim/|G|) sum_g conj(chi(g)) L(g), the projector onto one isotypic block.

    Entry ``[x, y]`` is ``dim/|G| * conj(chi(x y^-1))`` since L(g) maps y to x
    exactly when g = x y^-1.
    """
    i = table.index(label)
    chi = table.values[i]
    n = group.order
    ratio = group.mult[np.arange(n)[:, None], group.inv[None, :]]
    return table.dims[i] / n * np.conj(chi[ratio])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    atol: float = 1e-12

    def __post_init__(self):
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if not np.allclose(m, m.conj().T, atol=self.atol, rtol=0):
            raise InvariantViolation("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > self.atol:
            raise InvariantViolation(f"density matrix has trace {np.trace(m)}")
        if np.linalg.eigvalsh(m).min() < -self.atol:
            raise InvariantViolation("density matrix has a negative eigenvalue")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def rank(self) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.entries) > 1e-9))


def hidden_subgroup_state(group: FiniteGroup, sub: Subgroup) -> DensityMatrix:
    """rho_H = (1/|G|) sum_{h in H} R(h)."""
    total = sum(regular_rep(group, "right", h) for h in sub.elements)
    return DensityMatrix(total.astype(complex) / group.order)


def fourier_probability(group: FiniteGroup, sub: Subgroup, label, table: Optional[CharacterTable] = None) -> float:
    """Probability that weak Fourier sampling of rho_H returns the irrep ``label``."""
    table = table or character_table(group)
    i = table.index(label)
    val = table.dims[i] / group.order * np.conj(table.values[i, list(sub.elements)]).sum()
    if abs(val.imag) > 1e-9:
        raise InvariantViolation(f"complex Fourier probability {val}")
    return float(val.real)


def fourier_probability_exact(group: FiniteGroup, sub: Subgroup, label,
                              table: Optional[CharacterTable] = None) -> Fraction:
    """Exact form of :func:`fourier_probability`.

    sum_{h in H} chi(h) is |H| times the multiplicity of the trivial
    character in the restriction to H, hence an integer multiple of |H|.
    """
    table = table or character_table(group)
    i = table.index(label)
    total = np.conj(table.values[i, list(sub.elements)]).sum()
    mult = round(total.real / sub.order)
    if abs(total - mult * sub.order) > 1e-8:
        raise InvariantViolation(f"restriction multiplicity {total / sub.order} is not an integer")
    return Fraction(table.dims[i] * sub.order * mult, group.order)
