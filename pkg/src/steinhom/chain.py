"""Chain complexes of finite-rank free modules over Z or Q.

A complex carries its boundary matrices d_1..d_N.  Unless it is marked
``complete`` (nothing above degree N), degree N is only a truncation edge and
homology is reported for degrees <= N-1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .abgroup import FgAbelianGroup, IntMatrix, block, invariant_factors, rank


class WindowError(ValueError):
    pass


class ChainComplex:
    def __init__(self, ranks, boundaries, ring="Z", complete=False, check=True, name=""):
        """ranks r_0..r_N; boundaries[n] : r_n -> r_{n-1} for n = 1..N.

        ``boundaries`` may be given with a leading None placeholder or without.
        """
        ranks = list(ranks)
        bds = list(boundaries)
        if len(bds) == len(ranks):
            bds = bds[1:]
        if len(bds) != len(ranks) - 1:
            raise ValueError("need one boundary per positive degree")
        if ring not in ("Z", "Q"):
            raise ValueError(f"unknown ring {ring!r}")
        self.ring = ring
        self.ranks = ranks
        self.d = [None] + bds
        self.complete = complete
        self.name = name
        for n in range(1, len(ranks)):
            if self.d[n].shape != (ranks[n - 1], ranks[n]):
                raise ValueError(f"boundary d_{n} has shape {self.d[n].shape}, expected "
                                 f"{(ranks[n - 1], ranks[n])}")
            if ring == "Z" and not self.d[n].is_integral():
                raise ValueError(f"non-integral boundary d_{n} over Z")
        if check:
            for n in range(2, len(ranks)):
                if not (self.d[n - 1] @ self.d[n]).is_zero():
                    raise ValueError(f"d_{n - 1} d_{n} != 0")
        self._rank_cache = {}
        self._inv_cache = {}

    @property
    def max_degree(self):
        return len(self.ranks) - 1

    @property
    def reliable(self):
        """Largest degree whose homology is exact."""
        return self.max_degree if self.complete else self.max_degree - 1

    def _rank(self, n):
        if n not in self._rank_cache:
            if n <= 0 or n > self.max_degree:
                self._rank_cache[n] = 0
            elif self.ring == "Z":
                self._rank_cache[n] = len(self._invariants(n))
            else:
                self._rank_cache[n] = rank(self.d[n])
        return self._rank_cache[n]

    def _invariants(self, n):
        if n not in self._inv_cache:
            self._inv_cache[n] = invariant_factors(self.d[n]) if 0 < n <= self.max_degree else []
        return self._inv_cache[n]

    def homology(self, n) -> FgAbelianGroup:
        if n < 0:
            return FgAbelianGroup()
        if n > self.reliable:
            raise WindowError(f"degree {n} outside the reliable window (<= {self.reliable})")
        kernel_rank = self.ranks[n] - self._rank(n)
        free = kernel_rank - self._rank(n + 1)
        if self.ring == "Q":
            return FgAbelianGroup(free)
        tors = tuple(d for d in self._invariants(n + 1) if d > 1)
        return FgAbelianGroup(free, tors)

    def homologies(self, upto=None):
        top = self.reliable if upto is None else min(upto, self.reliable)
        return [self.homology(n) for n in range(top + 1)]

    def euler_characteristic(self, upto):
        """Alternating sum of rational homology ranks in degrees <= upto."""
        return sum((-1) ** n * self.homology(n).free_rank for n in range(upto + 1))

    def truncate(self, N):
        return ChainComplex(self.ranks[:N + 1], self.d[1:N + 1], self.ring, check=False, name=self.name)


class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, components, check=True):
        self.source = source
        self.target = target
        self.f = list(components)
        top = min(source.max_degree, target.max_degree)
        if len(self.f) < top + 1:
            raise ValueError("need a component in every degree of the window")
        for n in range(top + 1):
            if self.f[n].shape != (target.ranks[n], source.ranks[n]):
                raise ValueError(f"component {n} has shape {self.f[n].shape}")
        if check:
            bad = self.failing_square()
            if bad is not None:
                raise ValueError(f"not a chain map: square in degree {bad} fails")

    def failing_square(self):
        top = min(self.source.max_degree, self.target.max_degree)
        for n in range(1, top + 1):
            lhs = self.target.d[n] @ self.f[n]
            rhs = self.f[n - 1] @ self.source.d[n]
            if lhs != rhs:
                return n
        return None

    def __sub__(self, other):
        return ChainMap(self.source, self.target, [a - b for a, b in zip(self.f, other.f)], check=False)


def cone(f: ChainMap) -> ChainComplex:
    """cone_n = target_n + source_{n-1}, d = [[d_T, f], [0, -d_S]]."""
    S, T = f.source, f.target
    if S.ring != T.ring:
        raise ValueError("ring mismatch")
    complete = S.complete and T.complete
    if complete:
        N = max(T.max_degree, S.max_degree + 1)
    else:
        if S.max_degree != T.max_degree:
            raise WindowError("source and target windows differ")
        N = T.max_degree

    def tr(n):
        return T.ranks[n] if 0 <= n <= T.max_degree else 0

    def sr(n):
        return S.ranks[n] if 0 <= n <= S.max_degree else 0

    def dT(n):
        if 1 <= n <= T.max_degree:
            return T.d[n]
        return IntMatrix(tr(n - 1), tr(n))

    def dS(n):
        if 1 <= n <= S.max_degree:
            return S.d[n]
        return IntMatrix(sr(n - 1), sr(n))

    def fn(n):
        if 0 <= n < len(f.f) and n <= min(S.max_degree, T.max_degree):
            return f.f[n]
        return IntMatrix(tr(n), sr(n))

    ranks = [tr(n) + sr(n - 1) for n in range(N + 1)]
    bds = []
    for n in range(1, N + 1):
        bds.append(block([[dT(n), fn(n - 1)],
                          [IntMatrix(sr(n - 2), tr(n)), -dS(n - 1)]]))
    return ChainComplex(ranks, bds, S.ring, complete=complete, name=f"cone({S.name}->{T.name})")


# ---------------------------------------------------------------------
# Semicyclic modules
# ---------------------------------------------------------------------

@dataclass
class SemicyclicReport:
    ok: bool
    failure: tuple | None = None  # (identity, degree, index)
    checked: int = 0

    def __str__(self):
        if self.ok:
            return f"semicyclic identities hold ({self.checked} checks)"
        ident, n, i = self.failure
        return f"identity {ident} fails in degree {n}" + (f" (i={i})" if i is not None else "")


class SemicyclicModule:
    """Faces d_i (0 <= i <= n) and cyclic operators t_n on free modules M_0..M_N."""

    def __init__(self, ranks, faces, cyclic, ring="Z", name=""):
        self.ranks = list(ranks)
        self.faces = faces  # faces[n] = [d_0, ..., d_n] for n >= 1; faces[0] = []
        self.t = cyclic  # t[n] for n = 0..N
        self.ring = ring
        self.name = name
        if len(self.faces) == len(self.ranks) - 1:
            self.faces = [[]] + list(self.faces)

    @property
    def max_degree(self):
        return len(self.ranks) - 1

    def b(self, n):
        out = IntMatrix(self.ranks[n - 1], self.ranks[n])
        for i, d in enumerate(self.faces[n]):
            out = out + d if i % 2 == 0 else out - d
        return out

    def bprime(self, n):
        out = IntMatrix(self.ranks[n - 1], self.ranks[n])
        for i, d in enumerate(self.faces[n][:n]):
            out = out + d if i % 2 == 0 else out - d
        return out

    def norm(self, n):
        tn = self.t[n]
        acc = IntMatrix.identity(self.ranks[n])
        power = IntMatrix.identity(self.ranks[n])
        for _ in range(n):
            power = tn @ power
            acc = acc + power
        return acc

    def hochschild_complex(self, check=True) -> ChainComplex:
        return ChainComplex(self.ranks, [self.b(n) for n in range(1, len(self.ranks))],
                            self.ring, check=check, name=self.name)

    def validate(self) -> SemicyclicReport:
        checks = 0
        for n in range(self.max_degree + 1):
            tn = self.t[n]
            power = IntMatrix.identity(self.ranks[n])
            for _ in range(n + 1):
                power = tn @ power
            checks += 1
            if power != IntMatrix.identity(self.ranks[n]):
                return SemicyclicReport(False, ("t^(n+1) = id", n, None), checks)
            if n == 0:
                continue
            d = self.faces[n]
            if len(d) != n + 1:
                return SemicyclicReport(False, ("face count", n, None), checks)
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    if n >= 2:
                        checks += 1
                        # simplicial identity d_i d_j = d_{j-1} d_i for i < j
                        if self.faces[n - 1][i] @ d[j] != self.faces[n - 1][j - 1] @ d[i]:
                            return SemicyclicReport(False, ("d_i d_j = d_(j-1) d_i", n, (i, j)), checks)
            if n >= 2:
                for j in range(1, n + 1):
                    checks += 1
                    if self.faces[n - 1][0] @ d[j] != self.faces[n - 1][j - 1] @ d[0]:
                        return SemicyclicReport(False, ("d_i d_j = d_(j-1) d_i", n, (0, j)), checks)
            for i in range(1, n + 1):
                checks += 1
                if d[i] @ tn != -(self.t[n - 1] @ d[i - 1]):
                    return SemicyclicReport(False, ("d_i t = -t d_(i-1)", n, i), checks)
            checks += 1
            sign = 1 if n % 2 == 0 else -1
            if d[0] @ tn != d[n].scale(sign):
                return SemicyclicReport(False, ("d_0 t = (-1)^n d_n", n, 0), checks)
        return SemicyclicReport(True, None, checks)

    def restrict(self, basis_by_degree, name=""):
        """Submodule spanned by basis vectors (index lists) closed under faces and t."""
        pos = [{b: k for k, b in enumerate(bs)} for bs in basis_by_degree]
        N = len(basis_by_degree) - 1

        def sub(M, n_from, n_to):
            out = []
            for j in basis_by_degree[n_from]:
                col = {}
                for i, v in M._c[j].items():
                    if i not in pos[n_to]:
                        raise ValueError("index set is not closed under the structure maps")
                    col[pos[n_to][i]] = v
                out.append(col)
            return IntMatrix(len(basis_by_degree[n_to]), len(basis_by_degree[n_from]), out)

        faces = [[]] + [[sub(d, n, n - 1) for d in self.faces[n]] for n in range(1, N + 1)]
        ts = [sub(self.t[n], n, n) for n in range(N + 1)]
        return SemicyclicModule([len(b) for b in basis_by_degree], faces, ts, self.ring, name or self.name)


class Bicomplex:
    """First-quadrant grid: vertical[p][q]: (p,q)->(p,q-1), horizontal[p][q]: (p,q)->(p-1,q)."""

    def __init__(self, ranks, vertical, horizontal, ring="Z"):
        self.ranks = ranks  # ranks[p][q]
        self.v = vertical
        self.h = horizontal
        self.ring = ring

    def anticommutes(self):
        P = len(self.ranks)
        for p in range(1, P):
            Q = len(self.ranks[p])
            for q in range(1, Q):
                if q >= len(self.ranks[p - 1]):
                    continue
                lhs = self.v[p - 1][q] @ self.h[p][q]
                rhs = self.h[p][q - 1] @ self.v[p][q]
                if lhs + rhs != IntMatrix(lhs.rows, lhs.cols):
                    return False
        return True

    def total(self, N) -> ChainComplex:
        """Tot_n = sum over p+q=n with p <= n (columns ordered by p)."""
        def rk(p, q):
            return self.ranks[p][q]

        ranks = [sum(rk(p, n - p) for p in range(n + 1)) for n in range(N + 1)]
        bds = []
        for n in range(1, N + 1):
            grid = []
            for p_to in range(n):  # target Tot_{n-1} blocks
                row = []
                for p_from in range(n + 1):
                    q_from = n - p_from
                    q_to = n - 1 - p_to
                    if p_from == p_to:
                        row.append(self.v[p_from][q_from])
                    elif p_from == p_to + 1:
                        row.append(self.h[p_from][q_from])
                    else:
                        row.append(IntMatrix(rk(p_to, q_to), rk(p_from, q_from)))
                grid.append(row)
            bds.append(block(grid))
        return ChainComplex(ranks, bds, self.ring)


def cc_bicomplex(M: SemicyclicModule, columns=None, check=True) -> Bicomplex:
    """CC(M): columns alternate (M, b) and (M, -b'); rows alternate 1-t and N."""
    if check:
        rep = M.validate()
        if not rep.ok:
            raise ValueError(f"not a semicyclic module: {rep}")
    N = M.max_degree
    P = N if columns is None else columns
    ranks, vert, hor = [], [], []
    b = [None] + [M.b(n) for n in range(1, N + 1)]
    bp = [None] + [-M.bprime(n) for n in range(1, N + 1)]
    one_minus_t = [IntMatrix.identity(M.ranks[q]) - M.t[q] for q in range(N + 1)]
    norms = [M.norm(q) for q in range(N + 1)]
    for p in range(P + 1):
        ranks.append(list(M.ranks))
        vert.append(b if p % 2 == 0 else bp)
        if p == 0:
            hor.append([None] * (N + 1))
        elif p % 2 == 1:
            hor.append(one_minus_t)
        else:
            hor.append(norms)
    return Bicomplex(ranks, vert, hor, M.ring)


def hc(M: SemicyclicModule, n: int, check=True) -> FgAbelianGroup:
    """HC_n from the totalization truncated at column n+1."""
    if n > M.max_degree - 1:
        raise WindowError(f"HC_{n} needs the module up to degree {n + 1}")
    bic = cc_bicomplex(M, columns=n + 1, check=check)
    tot = bic.total(n + 1)
    return tot.homology(n)


def hc_closed_form(H, n):
    """Sum of H_{n-2i}, i >= 0, for a list H of homology groups."""
    out = FgAbelianGroup()
    for k in range(n, -1, -2):
        out = out + H[k]
    return out


def direct_sum(complexes, ring=None, name=""):
    """Block-diagonal sum of complexes sharing a window."""
    ring = ring or (complexes[0].ring if complexes else "Z")
    if not complexes:
        raise ValueError("empty direct sum needs an explicit window; use zero_complex")
    N = complexes[0].max_degree
    if any(C.max_degree != N for C in complexes):
        raise WindowError("summands have different windows")
    ranks = [sum(C.ranks[n] for C in complexes) for n in range(N + 1)]
    bds = []
    for n in range(1, N + 1):
        bds.append(_block_diag([C.d[n] for C in complexes]))
    complete = all(C.complete for C in complexes)
    return ChainComplex(ranks, bds, ring, complete=complete, check=False, name=name)


def _block_diag(ms):
    rows = sum(m.rows for m in ms)
    cols = []
    off = 0
    for m in ms:
        for c in m._c:
            cols.append({i + off: v for i, v in c.items()})
        off += m.rows
    return IntMatrix(rows, len(cols), cols)


def zero_complex(N, ring="Z"):
    return ChainComplex([0] * (N + 1), [IntMatrix(0, 0) for _ in range(N)], ring)
