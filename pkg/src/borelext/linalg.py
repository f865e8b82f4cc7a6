"""Linear algebra over prime fields F_p, plus small dense elimination over
extension fields F_q driven by a field context's arithmetic tables.

The central object is RowReducer: an incremental row-reduced basis that rows
can be streamed through in batches.  Reducing a batch against the basis is a
single matrix product, so constraint systems far larger than memory-resident
matrices can be ranked while storage stays bounded by ncols^2.
"""

from __future__ import annotations

import numpy as np


class RowReducer:
    """Incremental RREF basis over F_p for streamed rank/nullspace work."""

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, batch) -> np.ndarray:
        """Reduce rows against the current basis without inserting them."""
        B = np.asarray(batch, dtype=np.int64) % self.p
        if B.ndim == 1:
            B = B[None, :]
        if self.pivots:
            B = (B - B[:, self.pivots] @ self.rows) % self.p
        return B

    def add_rows(self, batch) -> int:
        """Insert a batch of rows; returns how many new pivots appeared."""
        B = self.reduce(batch)
        B = B[np.any(B, axis=1)]
        added = 0
        while B.shape[0]:
            r = B[0]
            c = int(np.nonzero(r)[0][0])
            r = (r * pow(int(r[c]), -1, self.p)) % self.p
            B = B[1:]
            if B.shape[0]:
                B = (B - np.outer(B[:, c], r)) % self.p
                B = B[np.any(B, axis=1)]
            if self.rows.shape[0]:
                # keep RREF: clear the new pivot column everywhere
                self.rows = (self.rows - np.outer(self.rows[:, c], r)) % self.p
            self.rows = np.vstack([self.rows, r[None, :]])
            self.pivots.append(c)
            added += 1
        if added:
            order = np.argsort(self.pivots, kind="stable")
            self.rows = self.rows[order]
            self.pivots = [self.pivots[i] for i in order]
        return added

    def free_columns(self) -> list[int]:
        pivset = set(self.pivots)
        return [c for c in range(self.ncols) if c not in pivset]

    def nullspace(self) -> np.ndarray:
        """Basis of {x : R x = 0}, one vector per free column.  Vector k is
        1 at its free column, 0 at the other free columns, so coordinates
        in this basis can be read off at the free columns."""
        free = self.free_columns()
        out = np.zeros((len(free), self.ncols), dtype=np.int64)
        for k, c in enumerate(free):
            out[k, c] = 1
            if self.pivots:
                out[k, self.pivots] = (-self.rows[:, c]) % self.p
        return out


def rank_mod(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    red = RowReducer(p, A.shape[1])
    red.add_rows(A)
    return red.rank


def nullspace_mod(A, p: int) -> np.ndarray:
    A = np.asarray(A)
    red = RowReducer(p, A.shape[1])
    if A.size:
        red.add_rows(A)
    return red.nullspace()


def solvable_mod(A, b, p: int) -> bool:
    """Whether A x = b has a solution over F_p."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    return rank_mod(A, p) == rank_mod(np.hstack([A, b]), p)


def is_invertible_mod(A, p: int) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank_mod(A, p) == A.shape[0]


def fq_rank(rows, field) -> int:
    """Rank of a matrix with entries given as F_q codes, via the field's
    arithmetic.  Intended for the small systems that arise in eigenspace
    and intertwiner computations."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(M)):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = field.inv_code(M[rank][c])
        M[rank] = [field.mul_code(inv, v) for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [
                    field.sub_code(M[i][j], field.mul_code(fac, M[rank][j]))
                    for j in range(ncols)
                ]
        rank += 1
        if rank == len(M):
            break
    return rank


def fq_nullity(rows, field, ncols: int) -> int:
    if not rows:
        return ncols
    return ncols - fq_rank(rows, field)


def fq_invert(mat, field):
    """Inverse of a square matrix of F_q codes, or None if singular."""
    n = len(mat)
    M = [list(mat[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    row = 0
    for c in range(n):
        piv = None
        for i in range(row, n):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            return None
        M[row], M[piv] = M[piv], M[row]
        inv = field.inv_code(M[row][c])
        M[row] = [field.mul_code(inv, v) for v in M[row]]
        for i in range(n):
            if i != row and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [
                    field.sub_code(M[i][j], field.mul_code(fac, M[row][j]))
                    for j in range(2 * n)
                ]
        row += 1
    return [tuple(M[i][n:]) for i in range(n)]
