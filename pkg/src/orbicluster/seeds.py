"""Quantum seeds, mutation, and the mutation oracle.

A seed is a compatible pair (btilde, lam): an m-by-n extended exchange
matrix and an m-by-m integer skew form with btilde^T * lam = (D 0) for a
positive diagonal D.  Mutation transforms both; the oracle recomputes any
quantum cluster variable as an element of the initial quantum torus by
iterated exchange relations, dividing exactly.

A small independent commutative engine (tropical coefficient dynamics and
the classical exchange formula) lives at the bottom; it deliberately shares
no code with the quantum path so it can serve as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .qalg import (
    CLaurent,
    DivisionError,
    QTorusElement,
    SkewForm,
    VLaurent,
    divide_exact,
    unit_vector,
    vec_add,
)


class NotCompatible(Exception):
    """btilde^T * lam is not (D 0) with positive diagonal D."""


class OracleError(Exception):
    """Non-monomial denominator encountered: contradicts the quantum
    Laurent phenomenon, so it signals an implementation bug upstream."""


Matrix = tuple  # tuple of row tuples


def mat(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def mat_transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def pos(x: int) -> int:
    return x if x > 0 else 0


def mutate_matrix(btilde: Matrix, k: int) -> Matrix:
    """Extended exchange matrix mutation in direction k (0-based column)."""
    m = len(btilde)
    n = len(btilde[0])
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range")
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            b = btilde[i][j]
            if i == k or j == k:
                row.append(-b)
            else:
                row.append(b + pos(btilde[i][k]) * pos(btilde[k][j])
                           - pos(-btilde[i][k]) * pos(-btilde[k][j]))
        out.append(tuple(row))
    return tuple(out)


def check_compatible(btilde: Matrix, lam: SkewForm) -> tuple:
    """Return the diagonal D with btilde^T * lam = (D 0), else raise."""
    m = len(btilde)
    n = len(btilde[0])
    if lam.m != m:
        raise NotCompatible("dimension mismatch between btilde and lam")
    prod = mat_mul(mat_transpose(btilde), lam.matrix)
    d = []
    for k in range(n):
        for j in range(m):
            if j == k:
                if prod[k][j] <= 0:
                    raise NotCompatible(f"diagonal entry {prod[k][j]} at {k} is not positive")
                d.append(prod[k][j])
            elif prod[k][j] != 0:
                raise NotCompatible(f"off-diagonal entry {prod[k][j]} at ({k},{j})")
    return tuple(d)


# ---------------------------------------------------------------------------
# Integer linear algebra: solving btilde^T * lam = (D 0) for lam
# ---------------------------------------------------------------------------

def _smith_normal_form(a: list[list[int]]):
    """Return (d, u, v) with u*a*v = d diagonal, u and v unimodular."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [row[:] for row in a]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(rows, cols):
        # find the nonzero entry of smallest magnitude in the remaining block
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = d[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, rows):
            if d[i][t]:
                q = d[i][t] // d[t][t]
                add_row(t, i, -q)
                if d[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if d[t][j]:
                q = d[t][j] // d[t][t]
                add_col(t, j, -q)
                if d[t][j]:
                    dirty = True
        if dirty:
            continue
        t += 1
    return d, u, v


def solve_integer_system(a: list[list[int]], b: list[int]):
    """All integer solutions of a*x = b: (particular, kernel basis) or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        return [0] * cols, [
            [int(i == j) for i in range(cols)] for j in range(cols)
        ]
    d, u, v = _smith_normal_form(a)
    c = [sum(u[i][j] * b[j] for j in range(rows)) for i in range(rows)]
    y = [0] * cols
    free = []
    for i in range(cols):
        di = d[i][i] if i < rows else 0
        ci = c[i] if i < rows else 0
        if di == 0:
            if i < rows and ci != 0:
                return None
            free.append(i)
        else:
            if ci % di:
                return None
            y[i] = ci // di
    for i in range(cols, rows):
        if c[i] != 0:
            return None
    x = [sum(v[i][j] * y[j] for j in range(cols)) for i in range(cols)]
    kernel = [[v[i][j] for i in range(cols)] for j in free]
    return x, kernel


def solve_lambda(btilde: Matrix, d_target: Sequence[int]) -> SkewForm:
    """Solve btilde^T * lam = (D 0) for a skew integer lam.

    Among integer solutions, greedily reduces toward small max-norm over the
    kernel lattice and breaks remaining ties lexicographically on the entry
    list.  Raises NotCompatible when no integer solution exists.
    """
    m = len(btilde)
    n = len(btilde[0])
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    index = {p: t for t, p in enumerate(pairs)}

    def coeff(i, j):
        # lam[i][j] as a signed unknown
        if i == j:
            return None, 0
        if i < j:
            return index[(i, j)], 1
        return index[(j, i)], -1

    a_rows = []
    b_vec = []
    for k in range(n):
        for j in range(m):
            row = [0] * len(pairs)
            for i in range(m):
                if not btilde[i][k]:
                    continue
                t, s = coeff(i, j)
                if t is not None:
                    row[t] += s * btilde[i][k]
            a_rows.append(row)
            b_vec.append(d_target[k] if j == k else 0)
    solved = solve_integer_system(a_rows, b_vec)
    if solved is None:
        raise NotCompatible("no integer quantization with the requested symmetrizers")
    x, kernel = solved

    def maxnorm(vec):
        return max((abs(t) for t in vec), default=0)

    # greedy descent over kernel directions, deterministic
    improved = True
    guard = 0
    while improved and guard < 200:
        improved = False
        guard += 1
        for h in kernel:
            best_t, best_key = 0, (maxnorm(x), tuple(x))
            for t in range(-4, 5):
                if t == 0:
                    continue
                cand = [xi + t * hi for xi, hi in zip(x, h)]
                key = (maxnorm(cand), tuple(cand))
                if key < best_key:
                    best_key, best_t = key, t
            if best_t:
                x = [xi + best_t * hi for xi, hi in zip(x, h)]
                improved = True

    lam = [[0] * m for _ in range(m)]
    for (i, j), t in index.items():
        lam[i][j] = x[t]
        lam[j][i] = -x[t]
    form = SkewForm(lam)
    check_compatible(btilde, form)
    return form


# ---------------------------------------------------------------------------
# Quantum seeds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumSeed:
    """Compatible pair with labels; frozen split into boundary and
    coefficient generators (the latter feed the tropical semifield)."""

    btilde: Matrix
    lam: SkewForm
    labels: tuple
    n: int
    boundary_idx: frozenset = field(default_factory=frozenset)
    coeff_idx: frozenset = field(default_factory=frozenset)
    d_diag: tuple = field(default=None, compare=False)

    def __post_init__(self):
        d = check_compatible(self.btilde, self.lam)
        object.__setattr__(self, "d_diag", d)
        if len(self.labels) != self.m:
            raise ValueError("label count must equal m")

    @property
    def m(self) -> int:
        return len(self.btilde)

    def position(self, label: str) -> int:
        return self.labels.index(label)

    def mutate(self, k: int) -> "QuantumSeed":
        bt = mutate_matrix(self.btilde, k)
        m = self.m
        lam = self.lam.matrix
        col = [self.btilde[i][k] for i in range(m)]
        new = [list(row) for row in lam]
        target = [-1 if l == k else pos(col[l]) for l in range(m)]
        # lam'(e_i, e_k) = lam(e_i, -e_k + sum_l [b_lk]+ e_l) for i != k
        for i in range(m):
            if i == k:
                continue
            val = sum(lam[i][l] * target[l] for l in range(m))
            new[i][k] = val
            new[k][i] = -val
        new[k][k] = 0
        out = QuantumSeed(bt, SkewForm(new), self.labels, self.n,
                          self.boundary_idx, self.coeff_idx)
        if out.d_diag != self.d_diag:
            raise NotCompatible("mutation changed the symmetrizers")
        return out

    def coefficient_column(self, k: int) -> tuple:
        """Exponents of the coefficient y for direction k (coeff rows only)."""
        return tuple(self.btilde[i][k] for i in sorted(self.coeff_idx))


def mutate_seed(seed: QuantumSeed, k: int) -> QuantumSeed:
    return seed.mutate(k)


# ---------------------------------------------------------------------------
# The oracle: cluster variables via iterated exchange in the initial torus
# ---------------------------------------------------------------------------

def _ordered_power_product(form: SkewForm, elements, exps, lam_t: Matrix) -> QTorusElement:
    """X(t)^c for c >= 0, written in the initial torus.

    Normalizes the ordered product prod_i E_i^(c_i) by the v-power
    -sum_{i<j} c_i c_j lam_t[i][j] so that the result represents the single
    torus monomial of the seed t."""
    m = len(exps)
    shift = 0
    for i in range(m):
        if not exps[i]:
            continue
        for j in range(i + 1, m):
            if exps[j]:
                shift -= exps[i] * exps[j] * lam_t[i][j]
    out = None
    for i, e in enumerate(exps):
        if not e:
            continue
        p = elements[i].pow(e)
        out = p if out is None else out * p
    if out is None:
        out = QTorusElement.one(form)
    return out.vshift(shift)


def oracle_variable(seed: QuantumSeed, word: Sequence[int], target: int,
                    trace: list | None = None) -> QTorusElement:
    """Quantum cluster variable at `target` of the seed reached by `word`,
    expanded in the quantum torus of `seed`."""
    form = seed.lam
    elements = [QTorusElement.monomial(form, unit_vector(seed.m, i)) for i in range(seed.m)]
    cur = seed
    for k in word:
        if not 0 <= k < seed.n:
            raise IndexError(f"mutation index {k} is not mutable")
        elements = list(elements)
        elements[k] = exchange_element(cur, elements, k)
        if trace is not None:
            trace.append((k, elements[k]))
        cur = cur.mutate(k)
    if not 0 <= target < seed.m:
        raise IndexError("target out of range")
    return elements[target]


def exchange_element(cur: QuantumSeed, elements, k: int) -> QTorusElement:
    """One exchange step: the new k-th variable as an initial-torus element."""
    form = elements[0].form
    m = cur.m
    col = [cur.btilde[i][k] for i in range(m)]
    c_plus = tuple(pos(x) for x in col)
    c_minus = tuple(pos(-x) for x in col)
    lam_t = cur.lam.matrix
    ek = unit_vector(m, k)
    num = QTorusElement.zero(form)
    for c in (c_plus, c_minus):
        tw = cur.lam.eval(c, ek)
        num = num + _ordered_power_product(form, elements, c, lam_t).vshift(tw)
    try:
        return divide_exact(num, elements[k])
    except DivisionError as exc:
        raise OracleError(f"non-monomial denominator encountered: {exc}") from exc


def exchange_graph(seed: QuantumSeed, max_seeds: int = 20000, max_depth: int | None = None):
    """BFS closure of the seed under mutation.

    Returns (variables, states) where `variables` maps each discovered
    non-frozen cluster variable to a witness (word, position) and `states`
    is the list of distinct (btilde, lam, vars) states visited.
    """
    form = seed.lam
    init = tuple(QTorusElement.monomial(form, unit_vector(seed.m, i)) for i in range(seed.m))
    start = (seed, init, ())
    seen = {(seed.btilde, seed.lam.matrix, init)}
    variables = {init[i]: ((), i) for i in range(seed.n)}
    queue = [start]
    states = [start]
    while queue:
        cur, elements, word = queue.pop(0)
        if max_depth is not None and len(word) >= max_depth:
            continue
        for k in range(seed.n):
            new_elements = list(elements)
            new_elements[k] = exchange_element(cur, elements, k)
            new_seed = cur.mutate(k)
            key = (new_seed.btilde, new_seed.lam.matrix, tuple(new_elements))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_seeds:
                raise OracleError("exchange graph search exceeded the node cap")
            nw = word + (k,)
            if new_elements[k] not in variables:
                variables[new_elements[k]] = (nw, k)
            state = (new_seed, tuple(new_elements), nw)
            states.append(state)
            queue.append(state)
    return variables, states


# ---------------------------------------------------------------------------
# Tropical coefficients and the independent commutative engine
# ---------------------------------------------------------------------------

def tropical_oplus(a: tuple, b: tuple) -> tuple:
    return tuple(min(x, y) for x, y in zip(a, b))


def tropical_one(l: int) -> tuple:
    return (0,) * l


def mutate_y(y: Sequence[tuple], b: Matrix, k: int) -> list:
    """Coefficient mutation: y'_k = 1/y_k and
    y'_i = y_i * y_k^[b_ki]+ * (1 (+) y_k)^(-b_ki), evaluated tropically."""
    n = len(y)
    l = len(y[0]) if y else 0
    zero = tropical_one(l)
    out = []
    for i in range(n):
        if i == k:
            out.append(tuple(-e for e in y[k]))
            continue
        bki = b[k][i]
        min_part = tropical_oplus(zero, y[k])
        out.append(tuple(
            y[i][t] + pos(bki) * y[k][t] - bki * min_part[t] for t in range(l)
        ))
    return out


@dataclass
class CommutativeSeed:
    """Geometric-type seed for the independent classical computation.

    The x-variables are Laurent polynomials in an ambient Z^(n+l): the first
    n coordinates are the initial mutable variables, the last l the frozen
    semifield generators u_1..u_l (boundary and coefficient rows alike)."""

    b: Matrix            # n x n
    y: list              # n tropical monomials, exponent tuples of length l
    x: list              # n CLaurent elements

    @staticmethod
    def initial(b: Matrix, c_rows: Matrix) -> "CommutativeSeed":
        n = len(b)
        l = len(c_rows)
        y = [tuple(c_rows[i][j] for i in range(l)) for j in range(n)]
        x = [CLaurent.monomial(unit_vector(n + l, j)) for j in range(n)]
        return CommutativeSeed(b, y, x)

    def mutate(self, k: int) -> "CommutativeSeed":
        n = len(self.b)
        l = len(self.y[0]) if self.y else 0
        yk = self.y[k]
        mono_num_plus = CLaurent.monomial(
            (0,) * n + tuple(pos(e) for e in yk))
        mono_num_minus = CLaurent.monomial(
            (0,) * n + tuple(pos(-e) for e in yk))
        prod_plus = CLaurent.monomial((0,) * (n + l), 1)
        prod_minus = CLaurent.monomial((0,) * (n + l), 1)
        for i in range(n):
            bik = self.b[i][k]
            if bik > 0:
                for _ in range(bik):
                    prod_plus = prod_plus * self.x[i]
            elif bik < 0:
                for _ in range(-bik):
                    prod_minus = prod_minus * self.x[i]
        # the (y_k (+) 1) division is already folded into the two monomials
        numerator = mono_num_plus * prod_plus + mono_num_minus * prod_minus
        new_xk = numerator.divide_exact(self.x[k])
        b2 = mutate_matrix(self.b, k)
        x2 = list(self.x)
        x2[k] = new_xk
        return CommutativeSeed(b2, mutate_y(self.y, self.b, k), x2)


def commutative_variable(b: Matrix, c_rows: Matrix, word: Sequence[int], target: int) -> CLaurent:
    """Classical cluster variable via tropical coefficient dynamics."""
    seed = CommutativeSeed.initial(b, c_rows)
    for k in word:
        seed = seed.mutate(k)
    return seed.x[target]
