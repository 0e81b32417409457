"""The matrix of U_p on a finite section of the annulus basis.

U_p of each basis element is re-expanded in the basis by exact linear
algebra over Z/p^N on the q-expansions.  The expansion uses an *extended*
family of depth ``D > d`` (indices ``|j| <= D``) and keeps only the rows
``|j| <= d``: the finite section of the infinite matrix.  Matching only
``2d+1`` q-coefficients against the ``2d+1`` section elements would pin the
high-index coordinates by interpolation at the cusp, and those coordinates
then carry an error of size ``p^-1/2`` after regrading.

All solving happens on the unit-normalized family ``w^i E_k u^i``, whose
q-coefficient matrix has unit determinant; the factor ``pi^|i|`` is put
back afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .basis import BasisFamily, BasisSpec, build_basis
from .qseries import LaurentSeries, PrecisionError, u_p_decimate
from .ring import RingContext, RingElement


class SingularSystem(ArithmeticError):
    pass


class ResidualMismatch(ArithmeticError):
    pass


class IntegralityError(ArithmeticError):
    pass


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def solve_mod(A: list[list[int]], rhs: list[list[int]], p: int, N: int) -> list[list[int]]:
    """Solve A x = b mod p^N for each column b in ``rhs``.

    Gaussian elimination choosing, in each column, a pivot of minimal
    valuation; a pivot that is not a unit raises :class:`SingularSystem`.
    """
    n = len(A)
    m = p**N
    k = len(rhs)
    rows = [[x % m for x in A[r]] + [b[r] % m for b in rhs] for r in range(n)]
    for c in range(n):
        best, best_v = None, N + 1
        for r in range(c, n):
            v = _vp(rows[r][c], p, N)
            if v < best_v:
                best, best_v = r, v
                if v == 0:
                    break
        if best_v > 0:
            raise SingularSystem(f"non-unit pivot in column {c} (valuation >= {best_v}); raise precision")
        rows[c], rows[best] = rows[best], rows[c]
        inv = pow(rows[c][c], -1, m)
        pivot = [x * inv % m for x in rows[c]]
        rows[c] = pivot
        for r in range(n):
            if r != c:
                f = rows[r][c]
                if f:
                    rows[r] = [(x - f * y) % m for x, y in zip(rows[r], pivot)]
    return [[rows[r][n + j] for r in range(n)] for j in range(k)]


def _coefficient_rows(series: list[LaurentSeries], start: int, stop: int) -> list[list[int]]:
    return [[g.coeffs[r - g.low] if r >= g.low else 0 for g in series] for r in range(start, stop)]


def _column(f: LaurentSeries, start: int, stop: int, part: str = "coeffs") -> list[int]:
    src = getattr(f, part)
    if src is None:
        return [0] * (stop - start)
    return [src[r - f.low] if r >= f.low else 0 for r in range(start, stop)]


def _check_residual(fam: BasisFamily, f_cols: list[list[int]], X: list[list[int]], start: int, stop: int) -> None:
    m = fam.ring.modulus
    rows = _coefficient_rows(fam.normalized, start, stop)
    for col, x in zip(f_cols, X):
        for r, row in enumerate(rows):
            if (col[start + r] - sum(a * b for a, b in zip(row, x))) % m:
                raise ResidualMismatch(
                    f"q^{start + r} coefficient does not match mod p^{fam.ring.N}; "
                    "increase the expansion depth or qprec"
                )


def expand_in_basis(f: LaurentSeries, fam: BasisFamily, margin: int | None = None) -> list[RingElement]:
    """Coordinates x with sum x_i element(i) = f mod p^N on the checked q-range.

    The square system uses q^0..q^(2d); the next ``margin`` coefficients
    (default 2d) are verified.
    """
    n = len(fam.indices)
    margin = 2 * fam.spec.d if margin is None else margin
    if f.low < 0:
        raise ValueError("expansion needs a series without polar part")
    if f.qprec < n + margin or fam.qprec < n + margin:
        raise PrecisionError("series known to too few q-coefficients")
    ring = fam.ring
    A = _coefficient_rows(fam.normalized, 0, n)
    stop = n + margin
    cols = [_column(f, 0, stop)]
    if f.pcoeffs:
        cols.append(_column(f, 0, stop, "pcoeffs"))
    X = solve_mod(A, [c[:n] for c in cols], ring.p, ring.N)
    _check_residual(fam, cols, X, n, stop)
    xa = X[0]
    xb = X[1] if f.pcoeffs else [0] * n
    out = []
    for k in range(n):
        x = RingElement(ring, xa[k], xb[k])
        try:
            out.append(x.divide_by_pi(fam.pi_grading[k]))
        except ArithmeticError as exc:
            raise IntegralityError(f"coordinate {fam.indices[k]} is not integral") from exc
    return out


@dataclass
class UpMatrix:
    spec: BasisSpec
    entries: list[list[RingElement]]  # entries[row][col]; column i = coordinates of U_p(element i)
    ring: RingContext
    residual_margin: int
    precision_report: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> list[int]:
        return self.spec.indices()

    def column(self, k: int) -> list[RingElement]:
        return [row[k] for row in self.entries]

    def section(self, d: int) -> "UpMatrix":
        """Top-left (2d+1)-section, i.e. the matrix on basis indices |i| <= d."""
        n = 2 * d + 1
        return UpMatrix(
            self.spec.with_depth(d, None),
            [row[:n] for row in self.entries[:n]],
            self.ring,
            self.residual_margin,
            dict(self.precision_report),
        )

    def permuted(self, perm: list[int]) -> "UpMatrix":
        """The matrix in the basis reordered by ``perm`` (new position k holds old perm[k])."""
        return UpMatrix(
            self.spec,
            [[self.entries[i][j] for j in perm] for i in perm],
            self.ring,
            self.residual_margin,
            dict(self.precision_report),
        )

    def apply(self, v: list[RingElement]) -> list[RingElement]:
        return [sum((a * x for a, x in zip(row, v)), self.ring.zero()) for row in self.entries]


def working_precision(N: int, d: int) -> int:
    return N + (d + 1) // 2 + 4


def default_depth(d: int, work_N: int) -> int:
    return d + work_N // 2 + 4


def _solve_section(fam: BasisFamily, d: int, margin: int):
    p = fam.spec.p
    n_ext = len(fam.indices)
    n = 2 * d + 1
    stop = n_ext + margin
    A = _coefficient_rows(fam.normalized, 0, n_ext)
    images = [u_p_decimate(g, p) for g in fam.normalized[:n]]
    if any(img.qprec < stop for img in images):
        raise PrecisionError("qprec too small for the requested expansion depth")
    cols = [_column(img, 0, stop) for img in images]
    X = solve_mod(A, [c[:n_ext] for c in cols], p, fam.ring.N)
    _check_residual(fam, cols, X, n_ext, stop)
    return X


def up_matrix(
    source: BasisSpec | BasisFamily,
    depth: int | None = None,
    margin: int | None = None,
    work_N: int | None = None,
    max_depth: int | None = None,
    cache=None,
) -> UpMatrix:
    """U_p on the basis section ``{E_k z^i, E_k (p/z)^i : |i| <= d}`` modulo p^N.

    ``depth`` fixes the extended expansion depth D; by default D starts at
    d + N_work/2 + 4 and grows until the residual check passes.  A q-precision
    set on the BasisSpec is used as given; otherwise it is p(2D + 1 + margin).
    """
    spec = source.spec if isinstance(source, BasisFamily) else source
    d, N, p = spec.d, spec.N, spec.p
    work_N = work_N or working_precision(N, d)
    margin = 2 * d if margin is None else margin
    if margin < 1:
        raise ValueError("residual margin must be positive")
    auto = depth is None
    D = depth if depth is not None else default_depth(d, work_N)
    if D < d:
        raise ValueError("expansion depth must be at least d")
    max_depth = max_depth or D + 6 * work_N
    while True:
        qprec = spec.qprec or p * (2 * D + 1 + margin)
        fam = None
        if isinstance(source, BasisFamily) and source.spec.d >= D and source.qprec >= qprec and source.ring.N >= work_N:
            fam = source
        if fam is None:
            fam = build_basis(spec.with_depth(D, qprec), work_N, cache)
        try:
            X = _solve_section(fam, d, margin)
            break
        except ResidualMismatch:
            if not auto or D + 4 > max_depth:
                raise
            D += 4
    ring = fam.ring
    out_ring = RingContext(p, N, ramified=True)
    n = 2 * d + 1
    grading = fam.pi_grading
    entries = [[out_ring.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # U_p(element i) = pi^g_i * U_p(normalized i) = sum_j pi^(g_i - g_j) x_ji element j
            x = RingElement(ring, X[i][j], 0)
            e = grading[i] - grading[j]
            if e >= 0:
                y = x * ring.pi_power(e)
            else:
                try:
                    y = x.divide_by_pi(-e)
                except ArithmeticError as exc:
                    raise IntegralityError(
                        f"entry ({fam.indices[j]}, {fam.indices[i]}) has negative valuation"
                    ) from exc
            entries[j][i] = y.reduce(N)
    loss = (max(grading[:n]) + 1) // 2
    if work_N - loss < N:
        raise PrecisionError("working precision too small for the regrading loss")
    report = {
        "p_precision": N,
        "working_precision": work_N,
        "regrading_loss": loss,
        "expansion_depth": D,
        "qprec": fam.qprec,
        "residual_margin": margin,
        "lift": spec.lift,
    }
    return UpMatrix(spec, entries, out_ring, margin, report)
