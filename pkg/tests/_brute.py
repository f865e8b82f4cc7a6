"""Independent desk-scale oracles used only by the tests.

Everything here deliberately avoids the library's solvers: the H^1 oracle
sets up the full function-space linear system over all of H x H with its own
Gaussian elimination, and the polynomial helpers work on plain coefficient
lists.  Agreement between these and the package is what the tests freeze.
"""

from __future__ import annotations


def gauss_rank(rows, p):
    """Rank over F_p of a list-of-lists matrix; pure python, no numpy."""
    M = [list(r) for r in rows if any(v % p for v in r)]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(M)):
            if M[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c] % p, -1, p)
        M[rank] = [(v * inv) % p for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c] % p:
                fac = M[i][c] % p
                M[i] = [(M[i][j] - fac * M[rank][j]) % p for j in range(ncols)]
        rank += 1
    return rank


def brute_h1(H, M):
    """(dim Z^1, dim B^1, dim H^1) by solving for f : H -> M directly.

    Unknowns are all |H| * d values of f; every pair (g, h) contributes the
    constraint f(gh) - f(g) - rho(g) f(h) = 0 and f(identity) = 0 is imposed.
    Only usable for small groups.
    """
    size = H.order
    d = M.dim
    p = M.p
    rho = [[[int(x) for x in row] for row in M.act(i)] for i in range(size)]
    nun = size * d

    def var(g, i):
        return g * d + i

    rows = []
    for i in range(d):
        row = [0] * nun
        row[var(H.identity_id, i)] = 1
        rows.append(row)
    for g in range(size):
        for h in range(size):
            gh = H.mul_ids(g, h)
            for i in range(d):
                row = [0] * nun
                row[var(gh, i)] += 1
                row[var(g, i)] -= 1
                for j in range(d):
                    row[var(h, j)] -= rho[g][i][j]
                rows.append([v % p for v in row])
    z1 = nun - gauss_rank(rows, p)
    # coboundaries: the image of m -> (g m - m)_g
    cob = []
    for j in range(d):
        row = [0] * nun
        for g in range(size):
            for i in range(d):
                row[var(g, i)] = (rho[g][i][j] - (1 if i == j else 0)) % p
        cob.append(row)
    b1 = gauss_rank(cob, p) if cob else 0
    return z1, b1, z1 - b1


def poly_mul_mod(a, b, modulus, p):
    """Product of coefficient lists reduced by a monic modulus, over F_p."""
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    deg = len(modulus) - 1
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for j in range(deg):
                out[k - deg + j] = (out[k - deg + j] - c * modulus[j]) % p
    out = out[:deg]
    return out + [0] * (deg - len(out))


def poly_order(a, modulus, p, qm1):
    """Multiplicative order of a nonzero coefficient vector."""
    deg = len(modulus) - 1
    one = [1] + [0] * (deg - 1)
    acc = list(a) + [0] * (deg - len(a))
    for k in range(1, qm1 + 1):
        if k > 1:
            acc = poly_mul_mod(acc, a, modulus, p)
        if acc == one:
            return k
    raise AssertionError("element has no finite order; not invertible?")


def equivariant_hom_dim(Q_actions, chi_matrices, fdim, qdim, p):
    """dim of {psi in Hom_{F_p}(Q, F_q) : psi A_t = M_{chi(t)} psi} for all
    torus generators t; the restriction-side of the two-step computation of
    H^1(B, F_q[chi])."""
    nun = fdim * qdim  # psi entries, row-major (fdim x qdim)
    rows = []
    for A, C in zip(Q_actions, chi_matrices):
        # psi A - C psi = 0
        for r in range(fdim):
            for c in range(qdim):
                row = [0] * nun
                for k in range(qdim):
                    row[r * qdim + k] += A[k][c]
                for k in range(fdim):
                    row[k * qdim + c] -= C[r][k]
                rows.append([v % p for v in row])
    if not rows:
        return nun
    return nun - gauss_rank(rows, p)
