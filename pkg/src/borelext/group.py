"""GL_n(F_q) and its Borel-related subgroups as explicit finite matrix
groups: full element tables, Cayley edges against a fixed generator set,
commutator subgroups, conjugate intersections and Bruhat double cosets.

Groups are immutable once built.  Elements are canonicalized as flat tuples
of F_q codes, which makes identity tests and table lookups cheap.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

from . import linalg
from .field import FieldCtx, Fq

DEFAULT_GROUP_BUDGET = 20_000_000


class SizeBudgetError(RuntimeError):
    pass


class StructureError(RuntimeError):
    pass


def gl_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def borel_order(q: int, n: int) -> int:
    return (q - 1) ** n * q ** (n * (n - 1) // 2)


def torus_order(q: int, n: int) -> int:
    return (q - 1) ** n


def unipotent_order(q: int, n: int) -> int:
    return q ** (n * (n - 1) // 2)


class Mat:
    """An n x n matrix over F_q, entries stored row-major as codes."""

    __slots__ = ("field", "n", "codes")

    def __init__(self, field: FieldCtx, n: int, codes: tuple[int, ...]):
        self.field = field
        self.n = n
        self.codes = codes

    def __eq__(self, other):
        return isinstance(other, Mat) and self.codes == other.codes and self.n == other.n

    def __hash__(self):
        return hash(self.codes)

    def __mul__(self, other: "Mat") -> "Mat":
        return Mat(self.field, self.n, _mul_codes(self.field, self.n, self.codes, other.codes))

    def entry(self, i: int, j: int) -> Fq:
        """Entry in row i, column j (1-based)."""
        return self.field.from_code(self.codes[(i - 1) * self.n + (j - 1)])

    def diagonal_codes(self) -> tuple[int, ...]:
        n = self.n
        return tuple(self.codes[i * n + i] for i in range(n))

    def is_diagonal(self) -> bool:
        n = self.n
        return all(self.codes[i * n + j] == 0 for i in range(n) for j in range(n) if i != j)

    def is_upper_triangular(self) -> bool:
        n = self.n
        return all(self.codes[i * n + j] == 0 for i in range(n) for j in range(i))

    def has_unit_diagonal(self) -> bool:
        return all(c == 1 for c in self.diagonal_codes())

    def inv(self) -> "Mat":
        rows = [self.codes[i * self.n : (i + 1) * self.n] for i in range(self.n)]
        out = linalg.fq_invert(rows, self.field)
        if out is None:
            raise StructureError("matrix is singular")
        return Mat(self.field, self.n, tuple(c for row in out for c in row))

    def det_code(self) -> int:
        n, fld = self.n, self.field
        rows = [list(self.codes[i * n : (i + 1) * n]) for i in range(n)]
        det = 1
        for c in range(n):
            piv = None
            for i in range(c, n):
                if rows[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                return 0
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = fld.neg_code(det)
            det = fld.mul_code(det, rows[c][c])
            inv = fld.inv_code(rows[c][c])
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    fac = fld.mul_code(rows[i][c], inv)
                    for j in range(c, n):
                        rows[i][j] = fld.sub_code(rows[i][j], fld.mul_code(fac, rows[c][j]))
        return det

    def entry_grid(self) -> list[list[Fq]]:
        n = self.n
        return [[self.entry(i + 1, j + 1) for j in range(n)] for i in range(n)]

    def __repr__(self):
        n, fld = self.n, self.field
        rows = [
            "[" + " ".join(fld.poly_str(self.codes[i * n + j]) for j in range(n)) + "]"
            for i in range(n)
        ]
        return "Mat(" + "; ".join(rows) + ")"


def _mul_codes(field: FieldCtx, n: int, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    mul = field._mulL
    add = field._addL
    if mul is None:
        out = []
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = field.add_code(acc, field.mul_code(a[i * n + k], b[k * n + j]))
                out.append(acc)
        return tuple(out)
    out = []
    for i in range(n):
        arow = a[i * n : (i + 1) * n]
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc][mul[arow[k]][b[k * n + j]]]
            out.append(acc)
    return tuple(out)


def identity_mat(field: FieldCtx, n: int) -> Mat:
    return Mat(field, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def diag_mat(field: FieldCtx, codes) -> Mat:
    n = len(codes)
    return Mat(field, n, tuple(codes[i] if i == j else 0 for i in range(n) for j in range(n)))


def transvection(field: FieldCtx, n: int, i: int, j: int, code: int) -> Mat:
    """e_{ij}(c): identity plus c in row i, column j (1-based, i != j)."""
    ent = [1 if a == b else 0 for a in range(n) for b in range(n)]
    ent[(i - 1) * n + (j - 1)] = code
    return Mat(field, n, tuple(ent))


def perm_mat(field: FieldCtx, perm: tuple[int, ...]) -> Mat:
    """Permutation matrix P with P e_j = e_{perm(j)} (1-based images)."""
    n = len(perm)
    ent = [0] * (n * n)
    for j in range(n):
        ent[(perm[j] - 1) * n + j] = 1
    return Mat(field, n, tuple(ent))


class WeylElement:
    """A permutation together with its matrix representative."""

    __slots__ = ("perm", "rep")

    def __init__(self, field: FieldCtx, perm: tuple[int, ...]):
        self.perm = tuple(perm)
        self.rep = perm_mat(field, self.perm)

    @property
    def length(self) -> int:
        p = self.perm
        return sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])

    def is_identity(self) -> bool:
        return all(self.perm[i] == i + 1 for i in range(len(self.perm)))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"WeylElement{self.perm}"


def weyl_elements(field: FieldCtx, n: int) -> list[WeylElement]:
    """All n! Weyl representatives, sorted by Bruhat length then one-line form."""
    ws = [WeylElement(field, p) for p in itertools.permutations(range(1, n + 1))]
    ws.sort(key=lambda w: (w.length, w.perm))
    return ws


class MatrixGroup:
    """A finite matrix group with a full element table and Cayley edges.

    elements[i] is the i-th element; index maps entry tuples back to ids;
    cayley[i, s] is the id of elements[i] * generators[s].  bfs_order walks
    ids from the identity so that bfs_parent/bfs_gen give, for every
    non-identity element, a tree edge along which generator words resolve.
    """

    def __init__(self, field, n, label, elements, generators):
        self.field = field
        self.n = n
        self.label = label
        self.elements: list[Mat] = elements
        self.generators: list[Mat] = generators
        self.index: dict[tuple[int, ...], int] = {m.codes: i for i, m in enumerate(elements)}
        if len(self.index) != len(elements):
            raise StructureError("duplicate elements in table")
        size = len(elements)
        ns = len(generators)
        self.cayley = np.empty((size, ns), dtype=np.int32)
        for i, m in enumerate(elements):
            codes = m.codes
            for s, g in enumerate(generators):
                prod = _mul_codes(field, n, codes, g.codes)
                j = self.index.get(prod)
                if j is None:
                    raise StructureError("element table not closed under generators")
                self.cayley[i, s] = j
        self.identity_id = self.index[identity_mat(field, n).codes]
        self._build_bfs()
        self._inv_ids: dict[int, int] = {}

    def _build_bfs(self):
        size = len(self.elements)
        parent = np.full(size, -1, dtype=np.int32)
        via = np.full(size, -1, dtype=np.int32)
        order = np.empty(size, dtype=np.int32)
        seen = np.zeros(size, dtype=bool)
        q = deque([self.identity_id])
        seen[self.identity_id] = True
        k = 0
        while q:
            i = q.popleft()
            order[k] = i
            k += 1
            for s in range(self.cayley.shape[1]):
                j = int(self.cayley[i, s])
                if not seen[j]:
                    seen[j] = True
                    parent[j] = i
                    via[j] = s
                    q.append(j)
        if k != size:
            raise StructureError("generators do not generate the element table")
        self.bfs_order = order
        self.bfs_parent = parent
        self.bfs_gen = via
        # tree edges grouped by (BFS level, generator) for batched propagation
        level = np.full(size, -1, dtype=np.int32)
        level[self.identity_id] = 0
        for i in order[1:]:
            level[i] = level[parent[i]] + 1
        batches = []
        for lv in range(1, int(level.max(initial=0)) + 1):
            at = order[(level[order] == lv)]
            for s in range(self.cayley.shape[1]):
                children = at[via[at] == s]
                if children.size:
                    batches.append((s, parent[children], children))
        self.tree_batches = batches

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_id(self, m: Mat) -> int:
        try:
            return self.index[m.codes]
        except KeyError:
            raise StructureError("matrix is not in the group") from None

    def __contains__(self, m: Mat) -> bool:
        return m.codes in self.index

    def mul_ids(self, i: int, j: int) -> int:
        prod = _mul_codes(self.field, self.n, self.elements[i].codes, self.elements[j].codes)
        return self.index[prod]

    def inv_id(self, i: int) -> int:
        j = self._inv_ids.get(i)
        if j is None:
            j = self.index[self.elements[i].inv().codes]
            self._inv_ids[i] = j
        return j

    def gen_ids(self) -> list[int]:
        return [self.index[g.codes] for g in self.generators]

    def is_subgroup_of(self, other: "MatrixGroup") -> bool:
        return all(m.codes in other.index for m in self.elements)

    def word_for(self, i: int) -> list[int]:
        """Generator ids multiplying to elements[i] along the BFS tree."""
        out = []
        while i != self.identity_id:
            out.append(int(self.bfs_gen[i]))
            i = int(self.bfs_parent[i])
        out.reverse()
        return out

    def dump(self) -> dict:
        return {
            "p": self.field.p,
            "f": self.field.f,
            "n": self.n,
            "label": self.label,
            "order": self.order,
            "generators": [
                [list(self.field.code_coeffs(c)) for c in g.codes] for g in self.generators
            ],
        }

    def __repr__(self):
        return f"MatrixGroup({self.label}, order={self.order}, gens={len(self.generators)})"


def _mulclose(field, n, gen_codes, cap=None) -> set[tuple[int, ...]]:
    """Closure of a generator set under multiplication (identity included)."""
    ident = identity_mat(field, n).codes
    seen = {ident}
    frontier = deque([ident])
    while frontier:
        a = frontier.popleft()
        for g in gen_codes:
            b = _mul_codes(field, n, a, g)
            if b not in seen:
                if cap is not None and len(seen) >= cap:
                    raise SizeBudgetError(f"closure exceeded the budget of {cap} elements")
                seen.add(b)
                frontier.append(b)
    return seen


def _greedy_generators(field, n, element_codes, candidates) -> list[Mat]:
    """Pick generators greedily: walk the candidates, keeping any element
    not yet inside the closure of what was kept so far."""
    target = set(element_codes)
    ident = identity_mat(field, n).codes
    kept: list[tuple[int, ...]] = []
    have = {ident}
    for cand in candidates:
        if cand in have:
            continue
        if cand not in target:
            raise StructureError("candidate generator outside the subgroup")
        kept.append(cand)
        have = _mulclose(field, n, kept)
        if len(have) == len(target):
            break
    if len(have) != len(target):
        raise StructureError("candidates do not generate the subgroup")
    return [Mat(field, n, c) for c in kept]


def build_gl(field: FieldCtx, n: int, budget: int = DEFAULT_GROUP_BUDGET) -> MatrixGroup:
    """Full GL_n(F_q) by BFS closure from transvections and one torus coord."""
    expected = gl_order(field.q, n)
    if expected > budget:
        raise SizeBudgetError(
            f"|GL_{n}(F_{field.q})| = {expected} exceeds the enumeration budget of {budget}"
        )
    gens = [transvection(field, n, i, j, 1) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    if field.q > 2:
        gens.append(diag_mat(field, (field.generator_code,) + (1,) * (n - 1)))
    elements = _bfs_elements(field, n, gens)
    if len(elements) != expected:
        raise StructureError(f"GL closure has {len(elements)} elements, expected {expected}")
    return MatrixGroup(field, n, "G", elements, gens)


def _bfs_elements(field, n, gens) -> list[Mat]:
    ident = identity_mat(field, n).codes
    seen = {ident}
    out = [ident]
    frontier = deque([ident])
    gcodes = [g.codes for g in gens]
    while frontier:
        a = frontier.popleft()
        for g in gcodes:
            b = _mul_codes(field, n, a, g)
            if b not in seen:
                seen.add(b)
                out.append(b)
                frontier.append(b)
    return [Mat(field, n, c) for c in out]


def _borel_candidates(field, n) -> list[tuple[int, ...]]:
    cands = []
    g = field.generator_code
    for i in range(n):
        d = [1] * n
        d[i] = g
        cands.append(diag_mat(field, tuple(d)).codes)
    for off in range(1, n):
        for i in range(1, n - off + 1):
            for m in range(field.f):
                cands.append(transvection(field, n, i, i + off, field._pp[m]).codes)
    return cands


def build_borel(field: FieldCtx, n: int, budget: int = DEFAULT_GROUP_BUDGET) -> MatrixGroup:
    """Invertible upper-triangular matrices, by direct enumeration."""
    expected = borel_order(field.q, n)
    if expected > budget:
        raise SizeBudgetError(f"|B| = {expected} exceeds the enumeration budget of {budget}")
    q = field.q
    nz = list(range(1, q))
    upos = [(i, j) for i in range(n) for j in range(n) if i < j]
    elements = []
    for diag in itertools.product(nz, repeat=n):
        for upper in itertools.product(range(q), repeat=len(upos)):
            ent = [0] * (n * n)
            for i in range(n):
                ent[i * n + i] = diag[i]
            for (i, j), c in zip(upos, upper):
                ent[i * n + j] = c
            elements.append(Mat(field, n, tuple(ent)))
    gens = _greedy_generators(field, n, [m.codes for m in elements], _borel_candidates(field, n))
    grp = MatrixGroup(field, n, "B", elements, gens)
    if grp.order != expected:
        raise StructureError(f"|B| = {grp.order}, expected {expected}")
    return grp


def build_torus(field: FieldCtx, n: int) -> MatrixGroup:
    q = field.q
    elements = [diag_mat(field, d) for d in itertools.product(range(1, q), repeat=n)]
    g = field.generator_code
    cands = []
    for i in range(n):
        d = [1] * n
        d[i] = g
        cands.append(diag_mat(field, tuple(d)).codes)
    gens = _greedy_generators(field, n, [m.codes for m in elements], cands)
    grp = MatrixGroup(field, n, "T", elements, gens)
    if grp.order != torus_order(q, n):
        raise StructureError("torus order mismatch")
    return grp


def build_unipotent(field: FieldCtx, n: int) -> MatrixGroup:
    q = field.q
    upos = [(i, j) for i in range(n) for j in range(n) if i < j]
    elements = []
    for upper in itertools.product(range(q), repeat=len(upos)):
        ent = [1 if i == j else 0 for i in range(n) for j in range(n)]
        for (i, j), c in zip(upos, upper):
            ent[i * n + j] = c
        elements.append(Mat(field, n, tuple(ent)))
    cands = [c for c in _borel_candidates(field, n) if Mat(field, n, c).has_unit_diagonal()]
    gens = _greedy_generators(field, n, [m.codes for m in elements], cands)
    grp = MatrixGroup(field, n, "N", elements, gens)
    if grp.order != unipotent_order(q, n):
        raise StructureError("unipotent order mismatch")
    return grp


def subgroup_from_elements(field, n, mats, label) -> MatrixGroup:
    """Materialize a subgroup from its element set; generators greedily."""
    codes = [m.codes for m in mats]
    gens = _greedy_generators(field, n, codes, codes)
    return MatrixGroup(field, n, label, list(mats), gens)


def tn_factor(b: Mat) -> tuple[Mat, Mat]:
    """Unique factorization b = t * n with t diagonal, n unit upper-triangular."""
    if not b.is_upper_triangular():
        raise StructureError("element is not upper-triangular")
    t = diag_mat(b.field, b.diagonal_codes())
    n = t.inv() * b
    return t, n


def intersect_conjugate(B: MatrixGroup, w: WeylElement) -> MatrixGroup:
    """B ∩ w^{-1} B w, as a group containing the torus."""
    wi = w.rep.inv()
    keep = []
    for m in B.elements:
        conj = (w.rep * m) * wi
        if conj.codes in B.index:
            keep.append(m)
    label = f"B∩B^w{w.perm}"
    return subgroup_from_elements(B.field, B.n, keep, label)


def unipotent_part(H: MatrixGroup) -> MatrixGroup:
    """Unit-diagonal elements of an upper-triangular group."""
    keep = [m for m in H.elements if m.has_unit_diagonal()]
    return subgroup_from_elements(H.field, H.n, keep, f"U({H.label})")


def commutator_subgroup(H: MatrixGroup) -> MatrixGroup:
    """Closure of all commutators a b a^{-1} b^{-1}."""
    field, n = H.field, H.n
    invs = {m.codes: m.inv().codes for m in H.elements}
    comms = set()
    for a in H.elements:
        for b in H.elements:
            c = _mul_codes(field, n, _mul_codes(field, n, a.codes, b.codes),
                           _mul_codes(field, n, invs[a.codes], invs[b.codes]))
            comms.add(c)
    closure = _mulclose(field, n, sorted(comms))
    mats = [Mat(field, n, c) for c in sorted(closure)]
    return subgroup_from_elements(field, n, mats, f"[{H.label},{H.label}]")


def double_cosets(G: MatrixGroup, B: MatrixGroup, return_sizes: bool = False):
    """Partition of G into B-double cosets; one permutation representative
    per coset, returned sorted by Bruhat length."""
    field, n = G.field, G.n
    perm_lookup = {}
    for p in itertools.permutations(range(1, n + 1)):
        perm_lookup[perm_mat(field, p).codes] = p
    bgen = [g.codes for g in B.generators]
    visited = np.zeros(G.order, dtype=bool)
    found = []
    for start in range(G.order):
        if visited[start]:
            continue
        coset = {start}
        frontier = deque([start])
        visited[start] = True
        while frontier:
            i = frontier.popleft()
            codes = G.elements[i].codes
            for g in bgen:
                for prod in (
                    _mul_codes(field, n, g, codes),
                    _mul_codes(field, n, codes, g),
                ):
                    j = G.index[prod]
                    if not visited[j]:
                        visited[j] = True
                        coset.add(j)
                        frontier.append(j)
        reps = [perm_lookup[G.elements[i].codes] for i in coset if G.elements[i].codes in perm_lookup]
        if len(reps) != 1:
            raise StructureError(
                f"double coset has {len(reps)} permutation representatives"
            )
        found.append((WeylElement(field, reps[0]), len(coset)))
    found.sort(key=lambda t: (t[0].length, t[0].perm))
    ws = [w for w, _ in found]
    if return_sizes:
        return ws, [s for _, s in found]
    return ws
