"""Exact linear algebra over the rationals and over GF(2).

Everything in this module is exact: matrix entries are `fractions.Fraction`
(or plain ints for GF(2) and Smith-form work) and no floating point ever
enters.  Sizes are tiny (at most ~15 x 12), so the algorithms are the
straightforward textbook ones with deterministic left-to-right pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

Rat = Fraction
VecQ = tuple[Fraction, ...]
VecF2 = tuple[int, ...]

#: Refuse to enumerate GF(2) solution cosets larger than this.
F2_KERNEL_CAP = 1 << 20


class EnumerationCapExceeded(Exception):
    """A requested exhaustive enumeration would exceed its configured cap."""


def vec_q(items: Iterable) -> VecQ:
    return tuple(Fraction(x) for x in items)


@dataclass(frozen=True)
class MatQ:
    """Immutable rational matrix, row-major."""

    rows: int
    cols: int
    data: tuple[VecQ, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "MatQ":
        data = tuple(vec_q(r) for r in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), ncols, data)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "MatQ":
        return cls(rows, cols, tuple(tuple([Fraction(0)] * cols) for _ in range(rows)))

    def row(self, i: int) -> VecQ:
        return self.data[i]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.data[ij[0]][ij[1]]

    def transpose(self) -> "MatQ":
        return MatQ(self.cols, self.rows, tuple(zip(*self.data)) if self.data else ())

    def mul_vec(self, v: Sequence) -> VecQ:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def to_int_rows(self) -> list[list[int]]:
        out = []
        for row in self.data:
            if any(x.denominator != 1 for x in row):
                raise ValueError("matrix is not integral")
            out.append([int(x) for x in row])
        return out

    def mod2(self) -> "MatF2":
        return MatF2.from_rows([[int(x.numerator) % 2 for x in row] for row in self.data])


@dataclass(frozen=True)
class MatF2:
    """Immutable matrix over GF(2), entries 0/1."""

    rows: int
    cols: int
    data: tuple[VecF2, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "MatF2":
        data = tuple(tuple(int(x) % 2 for x in r) for r in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), ncols, data)

    def mul_vec(self, v: Sequence[int]) -> VecF2:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a & b for a, b in zip(row, v)) % 2 for row in self.data)

    def stack(self, other: "MatF2") -> "MatF2":
        if other.cols != self.cols:
            raise ValueError("dimension mismatch")
        return MatF2(self.rows + other.rows, self.cols, self.data + other.data)


@dataclass(frozen=True)
class AffineSet:
    """Solution set of a linear system: particular + span(basis)."""

    particular: VecQ
    basis: tuple[VecQ, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.particular)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, t: Sequence) -> VecQ:
        if len(t) != self.dim:
            raise ValueError("dimension mismatch")
        out = list(self.particular)
        for ti, b in zip(t, self.basis):
            if ti:
                for j, bj in enumerate(b):
                    out[j] += ti * bj
        return tuple(out)


# ---------------------------------------------------------------------------
# Rational Gaussian elimination


def rref(M: MatQ) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivots chosen left to right.

    Returns (reduced rows, pivot column indices).
    """
    A = [list(row) for row in M.data]
    nrows, ncols = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        f = A[r][c]
        A[r] = [x / f for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                g = A[i][c]
                A[i] = [a - g * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def rank(M: MatQ) -> int:
    return len(rref(M)[1])


def kernel_basis(M: MatQ) -> list[VecQ]:
    """Basis of {v : Mv = 0}; one vector per free column, in column order."""
    R, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * M.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(tuple(v))
    return basis


def solve_affine(M: MatQ, b: Sequence) -> Optional[AffineSet]:
    """Full solution set of Mx = b, or None when inconsistent."""
    bq = vec_q(b)
    if len(bq) != M.rows:
        raise ValueError("dimension mismatch")
    aug = MatQ.from_rows([list(row) + [bq[i]] for i, row in enumerate(M.data)])
    R, pivots = rref(aug)
    if M.cols in pivots:
        return None
    particular = [Fraction(0)] * M.cols
    for r, pc in enumerate(pivots):
        particular[pc] = R[r][M.cols]
    return AffineSet(tuple(particular), tuple(kernel_basis(M)))


# ---------------------------------------------------------------------------
# GF(2)


def f2_rref(M: MatF2) -> tuple[list[list[int]], list[int]]:
    A = [list(row) for row in M.data]
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        p = next((i for i in range(r, M.rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(M.rows):
            if i != r and A[i][c]:
                A[i] = [a ^ b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    return A, pivots


def f2_rank(M: MatF2) -> int:
    return len(f2_rref(M)[1])


def f2_kernel_basis(M: MatF2) -> list[VecF2]:
    R, pivots = f2_rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * M.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = R[r][fc]
        basis.append(tuple(v))
    return basis


def f2_solve_all(M2: MatF2, e: Sequence[int], cap: int = F2_KERNEL_CAP) -> list[VecF2]:
    """All x with M2 x = e, sorted; empty when e is not in the image.

    Raises EnumerationCapExceeded when the kernel coset has more than `cap`
    elements.
    """
    ev = tuple(int(x) % 2 for x in e)
    if len(ev) != M2.rows:
        raise ValueError("dimension mismatch")
    aug = MatF2.from_rows([list(row) + [ev[i]] for i, row in enumerate(M2.data)])
    R, pivots = f2_rref(aug)
    if M2.cols in pivots:
        return []
    free = [c for c in range(M2.cols) if c not in pivots]
    if 1 << len(free) > cap:
        raise EnumerationCapExceeded(
            f"kernel has 2^{len(free)} elements, cap is {cap}"
        )
    sols = []
    for bits in product((0, 1), repeat=len(free)):
        x = [0] * M2.cols
        for fc, bit in zip(free, bits):
            x[fc] = bit
        for r, pc in enumerate(pivots):
            s = R[r][M2.cols]
            for fc, bit in zip(free, bits):
                s ^= R[r][fc] & bit
            x[pc] = s
        sols.append(tuple(x))
    sols.sort()
    return sols


def f2_in_image(M2: MatF2, e: Sequence[int]) -> bool:
    ev = tuple(int(x) % 2 for x in e)
    aug = MatF2.from_rows([list(row) + [ev[i]] for i, row in enumerate(M2.data)])
    _, pivots = f2_rref(aug)
    return M2.cols not in pivots


# ---------------------------------------------------------------------------
# Exact strict-inequality feasibility (Fourier-Motzkin)


def _normalize_ineq(coeffs: Sequence[Fraction], const: Fraction):
    """Scale coeffs*t + const > 0 to primitive integer form for dedup."""
    nums = [c for c in coeffs] + [const]
    denom_lcm = 1
    for x in nums:
        denom_lcm = denom_lcm * x.denominator // _gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in nums]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def feasible_strict(
    ineqs: list[tuple[VecQ, Fraction]], nvars: int
) -> Optional[list[Fraction]]:
    """Feasibility of {t : coeffs.t + const > 0 for all rows}, exactly.

    Returns a rational witness t, or None when the open polyhedron is empty.
    Fourier-Motzkin elimination from the last variable down; fine for the
    handful of variables that occur here.
    """
    if not ineqs:
        return [Fraction(0)] * nvars
    stages: list[list[tuple[VecQ, Fraction]]] = []
    current = [(vec_q(c), Fraction(v)) for c, v in ineqs]
    for k in range(nvars - 1, -1, -1):
        stages.append(current)
        nxt: dict = {}
        lowers = []   # coeff of t_k > 0:  t_k > -(rest)/coef
        uppers = []   # coeff of t_k < 0:  t_k < -(rest)/coef
        for coeffs, const in current:
            ck = coeffs[k]
            rest = (coeffs[:k], const)
            if ck == 0:
                key = _normalize_ineq(rest[0], const)
                nxt[key] = (rest[0], const)
            elif ck > 0:
                lowers.append((ck, rest))
            else:
                uppers.append((ck, rest))
        for cl, (rl, kl) in lowers:
            for cu, (ru, ku) in uppers:
                # cl*t_k + rl > 0 and cu*t_k + ru > 0 with cu < 0 combine to
                # cl*ru - cu*rl > 0 (strict since both strict).
                coeffs = tuple(cl * b - cu * a for a, b in zip(rl, ru))
                const = cl * ku - cu * kl
                key = _normalize_ineq(coeffs, const)
                nxt[key] = (coeffs, const)
        current = list(nxt.values())
    for coeffs, const in current:
        if const <= 0:
            return None
    # Back-substitute a witness, innermost variable first.
    witness: list[Fraction] = []
    for k, stage in zip(range(nvars), reversed(stages)):
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for coeffs, const in stage:
            ck = coeffs[k]
            if ck == 0:
                continue
            rest = const + sum(c * w for c, w in zip(coeffs[:k], witness))
            bound = -rest / ck
            if ck > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            witness.insert(k, Fraction(0))
        elif lo is None:
            witness.insert(k, hi - 1)
        elif hi is None:
            witness.insert(k, lo + 1)
        else:
            witness.insert(k, (lo + hi) / 2)
    # witness was built innermost-first with inserts at position k; rebuild order
    return witness


def strict_sign_witness(S: AffineSet, eps: Sequence[int]) -> Optional[VecQ]:
    """A point X in S with sign(X_j) = (-1)^eps_j for all j, or None.

    The witness is rechecked exactly before being returned.
    """
    if len(eps) != S.ambient_dim:
        raise ValueError("dimension mismatch")
    ineqs = []
    for j in range(S.ambient_dim):
        s = -1 if eps[j] else 1
        coeffs = tuple(Fraction(s) * b[j] for b in S.basis)
        const = Fraction(s) * S.particular[j]
        if not any(coeffs):
            if const <= 0:
                return None
            continue
        ineqs.append((coeffs, const))
    t = feasible_strict(ineqs, S.dim)
    if t is None:
        return None
    X = S.point(t)
    for j, x in enumerate(X):
        if (x < 0) != bool(eps[j]) or x == 0:
            raise AssertionError("Fourier-Motzkin witness failed recheck")
    return X


def strict_sign_feasible(S: AffineSet, eps: Sequence[int]) -> bool:
    return strict_sign_witness(S, eps) is not None


def symmetric_signature(G: Sequence[Sequence]) -> tuple[int, int]:
    """Signature (p, q) of a nondegenerate symmetric rational matrix, exactly.

    Congruence (Lagrange) reduction; raises ValueError on degeneracy.
    """
    A = [[Fraction(x) for x in row] for row in G]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix not square")
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix not symmetric")
    p = q = 0
    while A:
        nn = len(A)
        d = next((i for i in range(nn) if A[i][i] != 0), None)
        if d is None:
            pair = next(
                ((i, j) for i in range(nn) for j in range(i + 1, nn) if A[i][j] != 0),
                None,
            )
            if pair is None:
                raise ValueError("matrix is degenerate")
            i, j = pair
            for c in range(nn):
                A[i][c] += A[j][c]
            for r in range(nn):
                A[r][i] += A[r][j]
            continue
        a = A[d][d]
        if a > 0:
            p += 1
        else:
            q += 1
        B = []
        for r in range(nn):
            if r == d:
                continue
            f = A[r][d] / a
            row = [A[r][c] - f * A[d][c] for c in range(nn)]
            B.append([row[c] for c in range(nn) if c != d])
        A = B
    return p, q


# ---------------------------------------------------------------------------
# Smith normal form and multiplicative solving


def smith_normal_form(
    M: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """U, S, V with U*M*V = S, U and V unimodular, S in Smith form."""
    A = [[int(x) for x in row] for row in M]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(nr, nc):
        # Find a pivot: nonzero entry of minimal absolute value in the block.
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if A[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, nr):
            if A[i][t] != 0:
                q = A[i][t] // A[t][t]
                row_op(i, t, q)
                if A[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if A[t][j] != 0:
                q = A[t][j] // A[t][t]
                col_op(j, t, q)
                if A[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # Enforce divisibility: A[t][t] must divide the remaining block.
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if A[i][j] % A[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # add offending row to pivot row
            continue
        t += 1
    return U, A, V


def _mat_vec_int(M: list[list[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    n = abs(n)
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def solve_multiplicative(
    M: Sequence[Sequence[int]], rhs: Sequence[Fraction]
) -> Optional[VecQ]:
    """One g in (Q*)^n with prod_j g_j^(M_ij) = rhs_i for all i, or None.

    Solves the sign part over GF(2) and the magnitude part prime-by-prime
    through the Smith form; None means no rational solution exists (either
    inconsistent signs or a fractional power would be required).
    """
    nr = len(M)
    nc = len(M[0]) if nr else 0
    rhs = [Fraction(r) for r in rhs]
    if any(r == 0 for r in rhs):
        return None
    # Sign part: M mod 2 applied to logsign g.
    M2 = MatF2.from_rows([[x % 2 for x in row] for row in M])
    target = [1 if r < 0 else 0 for r in rhs]
    sign_sols = f2_solve_all(M2, target, cap=F2_KERNEL_CAP)
    if not sign_sols:
        return None
    delta = sign_sols[0]
    # Magnitude part: for each prime p, solve M a = v_p(rhs) over Z.
    U, S, V = smith_normal_form(M)
    diag = [S[i][i] for i in range(min(nr, nc))]
    r = sum(1 for d in diag if d != 0)
    primes: set[int] = set()
    vals: list[dict[int, int]] = []
    for q in rhs:
        fac_n = _factor(q.numerator)
        fac_d = _factor(q.denominator)
        v = dict(fac_n)
        for p, e in fac_d.items():
            v[p] = v.get(p, 0) - e
        vals.append(v)
        primes.update(v)
    exps = [dict() for _ in range(nc)]
    for p in sorted(primes):
        b = [vals[i].get(p, 0) for i in range(nr)]
        c = _mat_vec_int(U, b)
        if any(c[i] != 0 for i in range(r, nr)):
            return None
        y = [0] * nc
        for i in range(r):
            if c[i] % diag[i] != 0:
                return None
            y[i] = c[i] // diag[i]
        a = _mat_vec_int(V, y)
        for j in range(nc):
            if a[j]:
                exps[j][p] = a[j]
    g = []
    for j in range(nc):
        val = Fraction(-1 if delta[j] else 1)
        for p, e in exps[j].items():
            val *= Fraction(p) ** e
        g.append(val)
    # Exact recheck.
    for i in range(nr):
        prod = Fraction(1)
        for j in range(nc):
            prod *= g[j] ** M[i][j]
        if prod != rhs[i]:
            raise AssertionError("multiplicative solve failed recheck")
    return tuple(g)
