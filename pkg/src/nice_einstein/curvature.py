"""Brute-force curvature oracle for left-invariant metrics.

Independent of the root-matrix machinery: given raw structure constants and
an arbitrary nondegenerate symmetric Gram matrix, computes the Levi-Civita
connection through the Koszul formula, the full Riemann tensor, the Ricci
tensor/operator, curvature norms, and ad-invariance.  Exact when the inputs
are Fractions; the same code runs on floats for numerically recovered
metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .algebra import NiceLieAlgebra


class DegenerateMetricError(ValueError):
    pass


@dataclass(frozen=True)
class LieBrackets:
    """Dense structure constants: [e_a, e_b] = sum_k c[a][b][k] e_k (0-based)."""

    n: int
    c: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def from_nice(cls, a: NiceLieAlgebra) -> "LieBrackets":
        n = a.n
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), (k, cv) in a.brackets().items():
            c[i - 1][j - 1][k - 1] = cv
            c[j - 1][i - 1][k - 1] = -cv
        return cls(n, tuple(tuple(tuple(row) for row in plane) for plane in c))

    @classmethod
    def from_constants(cls, n: int, entries: Sequence[tuple[int, int, int, Fraction]]) -> "LieBrackets":
        """entries are 1-based (i, j, k, value) for i < j."""
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k, v) in entries:
            v = Fraction(v)
            c[i - 1][j - 1][k - 1] += v
            c[j - 1][i - 1][k - 1] -= v
        return cls(n, tuple(tuple(tuple(row) for row in plane) for plane in c))

    def bracket(self, a: int, b: int) -> tuple:
        return self.c[a][b]


def diagonal_gram(g: Sequence) -> list[list]:
    n = len(g)
    return [[g[i] if i == j else 0 * g[i] for j in range(n)] for i in range(n)]


def sigma_gram(g: Sequence, sigma: Sequence[int]) -> list[list]:
    """Gram matrix of sum_i g_i e^i (x) e^{sigma(i)}; sigma 1-based images."""
    n = len(g)
    G = [[0 * g[0] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        G[i][sigma[i] - 1] = g[i]
    return G


def _invert(G: Sequence[Sequence]) -> list[list]:
    n = len(G)
    A = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(G)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise DegenerateMetricError("metric is degenerate")
        A[col], A[piv] = A[piv], A[col]
        f = A[col][col]
        A[col] = [x / f for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                g = A[r][col]
                A[r] = [x - g * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _mat_mul(A, B):
    # zero-skipping pays off: connections on nice algebras are very sparse
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = [[0 for _ in range(m)] for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    if Bt[j]:
                        row[j] += a * Bt[j]
    return out


def _mat_vec(A, v):
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s)
    return out


def levi_civita(brackets: LieBrackets, gram: Sequence[Sequence]) -> list:
    """Connection matrices D[a], with D[a][c][b] the e_c-component of nabla_{e_a} e_b.

    Koszul formula for left-invariant metrics:
    2<nabla_a b, z> = <[a,b],z> - <[b,z],a> + <[z,a],b>.
    """
    n = brackets.n
    G = [list(row) for row in gram]
    Ginv = _invert(G)
    c = brackets.c

    def ip_bracket(x: int, y: int, z: int):
        # <[e_x, e_y], e_z>
        return sum(c[x][y][k] * G[k][z] for k in range(n) if c[x][y][k] != 0)

    D = []
    for a in range(n):
        mat = [[None] * n for _ in range(n)]
        for b in range(n):
            rhs = [
                ip_bracket(a, b, d) - ip_bracket(b, d, a) + ip_bracket(d, a, b)
                for d in range(n)
            ]
            col = _mat_vec(Ginv, rhs)
            for cidx in range(n):
                mat[cidx][b] = col[cidx] / 2 if col[cidx] else col[cidx]
        D.append(mat)
    return D


def riemann_endomorphisms(brackets: LieBrackets, gram: Sequence[Sequence]) -> dict:
    """R(e_a, e_b) as matrices, for a < b (0-based keys)."""
    n = brackets.n
    D = levi_civita(brackets, gram)
    c = brackets.c
    R = {}
    for a in range(n):
        for b in range(a + 1, n):
            AB = _mat_mul(D[a], D[b])
            BA = _mat_mul(D[b], D[a])
            M = [[AB[i][j] - BA[i][j] for j in range(n)] for i in range(n)]
            for k in range(n):
                ck = c[a][b][k]
                if ck != 0:
                    for i in range(n):
                        for j in range(n):
                            M[i][j] -= ck * D[k][i][j]
            R[(a, b)] = M
    return R


def riemann_operator(R: dict, n: int, u: Sequence, v: Sequence) -> list:
    """R(u, v) for arbitrary coefficient vectors by bilinearity."""
    out = [[0 * (u[0] * v[0]) for _ in range(n)] for _ in range(n)]
    for (a, b), M in R.items():
        coef = u[a] * v[b] - u[b] * v[a]
        if coef != 0:
            for i in range(n):
                for j in range(n):
                    out[i][j] += coef * M[i][j]
    return out


def ricci_tensor(brackets: LieBrackets, gram: Sequence[Sequence]) -> tuple[list, list]:
    """(Ricci tensor matrix, Ricci operator matrix).

    Ric(x, y) = trace of z -> R(z, x) y; the operator is G^{-1} Ric.  Only
    the needed components of R are formed, not the full tensor.
    """
    n = brackets.n
    D = levi_civita(brackets, gram)
    c = brackets.c
    zero = 0 * gram[0][0]
    ric = [[zero for _ in range(n)] for _ in range(n)]
    for b in range(n):
        for cc in range(n):
            s = zero
            for a in range(n):
                if a == b:
                    continue
                # (D_a D_b - D_b D_a - D_[a,b])[a][cc]
                for t in range(n):
                    x = D[a][a][t]
                    if x and D[b][t][cc]:
                        s += x * D[b][t][cc]
                    y = D[b][a][t]
                    if y and D[a][t][cc]:
                        s -= y * D[a][t][cc]
                for k in range(n):
                    ck = c[a][b][k]
                    if ck != 0 and D[k][a][cc]:
                        s -= ck * D[k][a][cc]
            ric[b][cc] = s
    Ginv = _invert([list(r) for r in gram])
    op = _mat_mul(Ginv, ric)
    return ric, op


def ricci_operator_diagonal(brackets: LieBrackets, gram: Sequence[Sequence]) -> list:
    """Diagonal of the Ricci operator, asserting it is diagonal is the caller's job."""
    _, op = ricci_tensor(brackets, gram)
    return [op[i][i] for i in range(brackets.n)]


def scalar_curvature(brackets: LieBrackets, gram: Sequence[Sequence]):
    _, op = ricci_tensor(brackets, gram)
    return sum(op[i][i] for i in range(brackets.n))


def _derived_subalgebra_rows(brackets: LieBrackets) -> list[list[Fraction]]:
    """Deterministic basis (rref) of the span of all bracket images."""
    from .linalg import MatQ, rref

    vecs = []
    n = brackets.n
    for a in range(n):
        for b in range(a + 1, n):
            v = list(brackets.c[a][b])
            if any(v):
                vecs.append(v)
    if not vecs:
        return []
    R, pivots = rref(MatQ.from_rows(vecs))
    return [R[r] for r in range(len(pivots))]


def _norm_of_curvature_map(R: dict, G: list, pair_list: list, rows: Optional[list] = None):
    """g(R, R) with inputs/outputs restricted to span(rows) when given."""
    n = len(G)
    Ginv = _invert(G)
    if rows is None:
        # Inputs e_a ^ e_b for (a,b) in pair_list, outputs full space.
        def end_of(pair):
            return R[pair]

        metric = G
        metric_inv = Ginv
        dim = n
        basis_pairs = pair_list
        gram2 = [
            [
                metric[a][cdx] * metric[b][d] - metric[a][d] * metric[b][cdx]
                for (cdx, d) in basis_pairs
            ]
            for (a, b) in basis_pairs
        ]
    else:
        dim = len(rows)
        metric = [[_bilinear(G, rows[i], rows[j]) for j in range(dim)] for i in range(dim)]
        try:
            metric_inv = _invert(metric)
        except DegenerateMetricError:
            raise DegenerateMetricError("induced metric on the derived algebra is degenerate")
        basis_pairs = list(combinations(range(dim), 2))
        gram2 = [
            [
                metric[a][cdx] * metric[b][d] - metric[a][d] * metric[b][cdx]
                for (cdx, d) in basis_pairs
            ]
            for (a, b) in basis_pairs
        ]

        def end_of(pair):
            I, J = pair
            A = riemann_operator(R, n, rows[I], rows[J])
            # Project columns onto span(rows), coordinates in that basis.
            cols = []
            for j in range(dim):
                w = _mat_vec(A, rows[j])
                rhs = [_bilinear_vec(G, rows[i], w) for i in range(dim)]
                cols.append(_mat_vec(metric_inv, rhs))
            return [[cols[j][i] for j in range(dim)] for i in range(dim)]

    if not basis_pairs:
        return 0 * G[0][0]
    gram2_inv = _invert(gram2)
    ends = [end_of(p) for p in basis_pairs]
    # <A, B>_End = sum A[i][j] B[k][l] metric[i][k] metric_inv[j][l]
    #            = sum_{k,l} (metric^T A metric_inv)[k][l] * B[k][l]
    lowered = [_mat_mul(_mat_mul(metric, A), metric_inv) for A in ends]

    def end_inner(LA, B):
        s = 0 * G[0][0]
        for k in range(dim):
            for l in range(dim):
                if B[k][l] != 0 and LA[k][l] != 0:
                    s += LA[k][l] * B[k][l]
        return s

    total = 0 * G[0][0]
    for I in range(len(basis_pairs)):
        for J in range(len(basis_pairs)):
            if gram2_inv[I][J] != 0:
                total += gram2_inv[I][J] * end_inner(lowered[I], ends[J])
    return total


def _bilinear(G, u, v):
    return sum(u[i] * G[i][j] * v[j] for i in range(len(u)) for j in range(len(v))
               if u[i] != 0 and G[i][j] != 0)


def _bilinear_vec(G, u, w):
    return _bilinear(G, u, w)


def riemann_norm(brackets: LieBrackets, gram: Sequence[Sequence]):
    """Full contraction g(R, R) of the curvature map Lambda^2 g -> End g."""
    n = brackets.n
    G = [list(r) for r in gram]
    R = riemann_endomorphisms(brackets, G)
    pairs = list(combinations(range(n), 2))
    return _norm_of_curvature_map(R, G, pairs)


def projected_riemann_norm(brackets: LieBrackets, gram: Sequence[Sequence]):
    """g(R', R') for the restriction of R to the derived algebra."""
    G = [list(r) for r in gram]
    rows = _derived_subalgebra_rows(brackets)
    if not rows:
        return 0 * G[0][0]
    R = riemann_endomorphisms(brackets, G)
    return _norm_of_curvature_map(R, G, [], rows=rows)


def ad_invariance_check(
    brackets: LieBrackets, gram: Sequence[Sequence]
) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Whether <[x,y],z> + <y,[x,z]> = 0 on all basis triples; witness on failure."""
    n = brackets.n
    G = [list(r) for r in gram]
    c = brackets.c

    def ip_bracket(x, y, z):
        return sum(c[x][y][k] * G[k][z] for k in range(n) if c[x][y][k] != 0)

    for x in range(n):
        for y in range(n):
            for z in range(n):
                if ip_bracket(x, y, z) + ip_bracket(x, z, y) != 0:
                    return False, (x + 1, y + 1, z + 1)
    return True, None
