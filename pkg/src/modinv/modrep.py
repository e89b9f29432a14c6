"""Frames of commuting or non-commuting nilpotent generators and the
catalog of named example modules.

A ModuleRep is r generator matrices over F_p acting on an n-dimensional
space, subject to the frame condition that the generic operator
theta = sum_i t_i X_i satisfies theta^p = 0 identically.  For commuting
frames with X_i^p = 0 this is automatic in characteristic p and is accepted
without expansion; everything else is checked symbolically.

Basis conventions.  Monomial bases are ordered by total degree, then by
descending exponent of the earlier variables, so the regular module over
two generators starts 1, x, y, x^2, xy, y^2, ...  Submodules carry the
canonical reduced-row-echelon basis of their subspace; quotients use the
complement of the pivot coordinates in ambient order.  These orders are
what make Pluecker tuples reproducible across runs.
"""

from __future__ import annotations

import itertools
import json

from .fields import PrimeField
from .linalg import Mat, PolyMat, Subspace, theta as _theta_of
from .mpoly import MPoly

ORDER_CAP = 3125   # largest p**r for the regular module
DIM_CAP = 64


class InvalidFrameError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CatalogError(KeyError):
    pass


class CapExceededError(ValueError):
    pass


class FrameCertificate:
    __slots__ = ("route",)

    def __init__(self, route: str):
        self.route = route

    def __repr__(self):
        return f"FrameCertificate({self.route})"


def _monomial_key(alpha):
    return (sum(alpha), tuple(-a for a in alpha))


class ModuleRep:
    """r generator matrices over F_p on an n-dimensional space."""

    __slots__ = ("p", "r", "n", "generators", "commuting", "name", "known",
                 "_theta_powers", "_cache")

    def __init__(self, p, r, generators, name="", known=None, validate=True,
                 dim_cap: int | None = None):
        field = PrimeField(p)
        gens = []
        for X in generators:
            if isinstance(X, Mat):
                if X.field != field:
                    raise ValueError("generator over the wrong field")
                gens.append(X)
            else:
                gens.append(Mat(field, [[int(x) % p for x in row] for row in X]))
        if len(gens) != r or r < 1:
            raise ValueError("need r >= 1 generators")
        n = gens[0].nrows
        if any(g.nrows != n or g.ncols != n for g in gens):
            raise ValueError("generators must be square of equal size")
        if n > (dim_cap if dim_cap is not None else DIM_CAP):
            raise CapExceededError(f"dimension {n} exceeds cap {DIM_CAP}")
        self.p, self.r, self.n = p, r, n
        self.generators = tuple(gens)
        self.commuting = all(
            gens[i].matmul(gens[j]) == gens[j].matmul(gens[i])
            for i in range(r) for j in range(i + 1, r))
        self.name = name or f"frame(p={p},r={r},n={n})"
        self.known = dict(known or {})
        self._theta_powers = {}
        self._cache = {}
        if validate:
            validate_frame(self)

    @property
    def field(self):
        return PrimeField(self.p)

    def theta(self) -> PolyMat:
        return self.theta_power(1)

    def theta_power(self, j: int) -> PolyMat:
        if not 1 <= j <= self.p - 1:
            raise ValueError(f"power {j} outside 1..{self.p - 1}")
        if j not in self._theta_powers:
            if j == 1:
                self._theta_powers[1] = _theta_of(self)
            else:
                self._theta_powers[j] = self.theta_power(j - 1).matmul(self.theta())
        return self._theta_powers[j]

    def point_operator(self, point, field=None) -> Mat:
        """sum_i point_i X_i over the given field."""
        if field is None:
            field = self.field
        if len(point) != self.r:
            raise ValueError("point length differs from generator count")
        acc = Mat.zeros(field, self.n, self.n)
        for lam, X in zip(point, self.generators):
            if field.is_zero(lam):
                continue
            lifted = Mat(field, [[field.element(x) for x in row] for row in X.rows])
            acc = acc.add(lifted.smul(lam))
        return acc

    def __eq__(self, other):
        return (isinstance(other, ModuleRep) and self.p == other.p
                and self.r == other.r and self.generators == other.generators)

    def __repr__(self):
        return f"ModuleRep({self.name}, dim {self.n})"

    def to_dict(self):
        return {"p": self.p, "r": self.r, "dim": self.n,
                "generators": [g.rows for g in self.generators]}


def validate_frame(m: ModuleRep) -> FrameCertificate:
    """Accept iff theta^p = 0 identically.

    Commuting frames with X_i^p = 0 are accepted without expansion, since
    theta^p = sum_i t_i^p X_i^p in characteristic p.  Otherwise theta^p is
    expanded symbolically; a failure names a witness monomial.
    """
    if m.commuting:
        for i, X in enumerate(m.generators):
            if not X.power(m.p).is_zero():
                raise InvalidFrameError(
                    f"generator {i + 1} is not p-nilpotent", witness=(0,) * m.r)
        return FrameCertificate("commuting")
    th = _theta_of(m)
    power = th
    for _ in range(m.p - 1):
        power = power.matmul(th)
    for row in power.rows:
        for e in row:
            if not e.is_zero:
                witness = sorted(e.terms)[0]
                raise InvalidFrameError(
                    f"theta^{m.p} has nonzero coefficient at monomial "
                    f"t^{witness}", witness=witness)
    return FrameCertificate("symbolic")


# -- constructors ---------------------------------------------------------------


def regular_module(p: int, r: int) -> ModuleRep:
    """Truncated polynomial algebra k[x_1..x_r]/(x_i^p) acting on itself.

    Basis: monomials in degree-then-lexicographic order (earlier variables
    first within a degree).
    """
    PrimeField(p)
    if r < 1:
        raise ValueError("need r >= 1")
    if p ** r > ORDER_CAP:
        raise CapExceededError(f"p^r = {p ** r} exceeds cap {ORDER_CAP}")
    basis = sorted(itertools.product(range(p), repeat=r), key=_monomial_key)
    index = {alpha: i for i, alpha in enumerate(basis)}
    n = len(basis)
    gens = []
    for i in range(r):
        rows = [[0] * n for _ in range(n)]
        for alpha, col in index.items():
            if alpha[i] + 1 < p:
                beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                rows[index[beta]][col] = 1
        gens.append(rows)
    tau = tuple(p - 1 for _ in range(r))
    form = [[0] * n for _ in range(n)]
    for alpha, a in index.items():
        beta = tuple(t - x for t, x in zip(tau, alpha))
        form[a][index[beta]] = (-1) ** (sum(alpha) % 2) % p
    m = ModuleRep(p, r, gens, name=f"regular:p={p},r={r}", dim_cap=ORDER_CAP)
    m.known["invariant_form"] = Mat(PrimeField(p), form)
    m.known["monomial_basis"] = basis
    return m


def trivial_module(p: int, r: int, dim: int) -> ModuleRep:
    if dim < 1 or dim > DIM_CAP:
        raise CapExceededError(f"dimension {dim} out of range")
    zero = [[0] * dim for _ in range(dim)]
    return ModuleRep(p, r, [zero] * r, name=f"trivial:p={p},r={r},dim={dim}")


def v_module(p: int, r: int) -> ModuleRep:
    """(r+1)-dimensional module with x_i.v_j = delta_ij v_(r+1)."""
    n = r + 1
    gens = []
    for i in range(r):
        rows = [[0] * n for _ in range(n)]
        rows[r][i] = 1
        gens.append(rows)
    return ModuleRep(p, r, gens, name=f"vr:p={p},r={r}")


def socle_width_module(p: int, r: int = 2) -> ModuleRep:
    """(r+2)-dimensional module: v -> w_i -> delta_ij z, of Loewy length 3."""
    if p < 3:
        raise ValueError("needs p >= 3")
    n = r + 2
    gens = []
    for i in range(r):
        rows = [[0] * n for _ in range(n)]
        rows[1 + i][0] = 1
        rows[r + 1][1 + i] = 1
        gens.append(rows)
    return ModuleRep(p, r, gens, name=f"mr2:p={p},r={r}")


def heisenberg3(p: int) -> ModuleRep:
    """Three strictly upper triangular generators E12, E23, E13 on k^3."""
    if p < 3:
        raise ValueError("needs p >= 3")
    e12 = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    e23 = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    e13 = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    return ModuleRep(p, 3, [e12, e23, e13], name=f"heisenberg:p={p}")


# -- submodules, quotients, series ----------------------------------------------


class Submodule:
    """Subspace closed under all generators, with frame back-reference."""

    __slots__ = ("p", "r", "n", "space")

    def __init__(self, frame: ModuleRep, space: Subspace):
        for X in frame.generators:
            for v in space.basis:
                if not space.contains(X.apply(v)):
                    raise ValueError("subspace is not generator-stable")
        self.p, self.r, self.n = frame.p, frame.r, frame.n
        self.space = space

    @property
    def dim(self):
        return self.space.dim

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.space == other.space

    def __repr__(self):
        return f"Submodule(dim {self.dim} of {self.n})"


def submodule_span(m: ModuleRep, vectors) -> Submodule:
    """Smallest submodule containing the vectors (closure under X_i)."""
    f = m.field
    space = Subspace.from_vectors(f, m.n, [list(v) for v in vectors])
    while True:
        images = [X.apply(v) for X in m.generators for v in space.basis]
        bigger = space.sum(Subspace.from_vectors(f, m.n, images))
        if bigger.dim == space.dim:
            return Submodule(m, space)
        space = bigger


def radical_series(m: ModuleRep) -> list[Submodule]:
    """Strictly decreasing chain M = Rad^0 > Rad^1 > ... > 0."""
    f = m.field
    out = [Submodule(m, Subspace.full(f, m.n))]
    current = out[0].space
    while current.dim > 0:
        images = [X.apply(v) for X in m.generators for v in current.basis]
        current = Subspace.from_vectors(f, m.n, images)
        out.append(Submodule(m, current))
    return out


def socle_series(m: ModuleRep) -> list[Submodule]:
    """Increasing chain 0 = Soc^0 < Soc^1 < ... < M."""
    f = m.field
    out = [Submodule(m, Subspace.from_vectors(f, m.n, []))]
    current = out[0].space
    while current.dim < m.n:
        proj = _quotient_coordinates(f, m.n, current)
        stacked = []
        for X in m.generators:
            reduced = [proj(col) for col in zip(*X.rows)]
            stacked.extend(list(zip(*reduced)) if reduced and reduced[0] else [])
        if stacked:
            nxt = Mat(f, [list(row) for row in stacked]).kernel()
        else:
            nxt = Subspace.full(f, m.n)
        out.append(Submodule(m, nxt))
        current = nxt
    return out


def series(m: ModuleRep, kind: str) -> list[Submodule]:
    if kind == "radical":
        return radical_series(m)
    if kind == "socle":
        return socle_series(m)
    raise ValueError(f"unknown series kind {kind!r}")


def socle_submodule(m: ModuleRep, s: int) -> Submodule:
    chain = socle_series(m)
    if not 1 <= s <= len(chain) - 1:
        raise ValueError(f"socle index {s} out of range 1..{len(chain) - 1}")
    return chain[s]


def _quotient_coordinates(field, n, space: Subspace):
    """Linear map v -> coordinates of v + space on the complement basis."""
    pivots = set(space.pivots)
    free = [c for c in range(n) if c not in pivots]

    def proj(vec):
        v = list(vec)
        for row, c in zip(space.basis, space.pivots):
            if not field.is_zero(v[c]):
                m = v[c]
                v = [field.sub(x, field.mul(m, y)) for x, y in zip(v, row)]
        return [v[c] for c in free]

    return proj


def quotient_module(m: ModuleRep, sub: Submodule) -> ModuleRep:
    """Quotient by a submodule; basis = complement of the pivot coordinates."""
    f = m.field
    space = sub.space
    proj = _quotient_coordinates(f, m.n, space)
    pivots = set(space.pivots)
    free = [c for c in range(m.n) if c not in pivots]
    gens = []
    for X in m.generators:
        cols = []
        for c in free:
            e = [f.zero] * m.n
            e[c] = f.one
            cols.append(proj(X.apply(e)))
        gens.append([list(row) for row in zip(*cols)])
    return ModuleRep(m.p, m.r, gens, name=f"{m.name}/sub(dim {sub.dim})",
                     dim_cap=m.n)


def submodule_module(m: ModuleRep, sub: Submodule) -> ModuleRep:
    """A submodule as a module in its own right, on the canonical basis."""
    f = m.field
    space = sub.space
    gens = []
    for X in m.generators:
        rows = []
        for v in space.basis:
            w = X.apply(list(v))
            if not space.contains(w):
                raise ValueError("subspace is not generator-stable")
            rows.append([w[c] for c in space.pivots])
        gens.append([list(col) for col in zip(*rows)])
    return ModuleRep(m.p, m.r, gens, name=f"{m.name}|sub(dim {sub.dim})",
                     dim_cap=m.n)


def rad_quotient(m: ModuleRep, s: int) -> ModuleRep:
    """Quotient by the s-th radical layer."""
    chain = radical_series(m)
    if not 1 <= s <= len(chain) - 1:
        raise ValueError(f"radical index {s} out of range 1..{len(chain) - 1}")
    return quotient_module(m, chain[s])


def mn_module(p: int, n: int) -> ModuleRep:
    """Quotient of the two-generator regular module by its n-th radical."""
    if not 1 <= n <= 2 * p - 1:
        raise ValueError(f"n = {n} out of range 1..{2 * p - 1}")
    m = rad_quotient(regular_module(p, 2), n)
    m.name = f"mn:p={p},n={n}"
    return m


def radical_submodule(p: int, s: int = 1) -> ModuleRep:
    m = regular_module(p, 2)
    chain = radical_series(m)
    if not 1 <= s <= len(chain) - 1:
        raise ValueError(f"radical index {s} out of range")
    out = submodule_module(m, chain[s])
    out.name = f"rad:p={p},s={s}"
    return out


def rad_mod_socle(p: int) -> ModuleRep:
    """Radical modulo socle of the two-generator regular module."""
    if p < 3:
        raise ValueError("needs p >= 3")
    m = regular_module(p, 2)
    rad = submodule_module(m, radical_series(m)[1])
    soc = socle_submodule(rad, 1)
    out = quotient_module(rad, soc)
    out.name = f"radmodsoc:p={p}"
    return out


def soc2_module(p: int, r: int) -> ModuleRep:
    """Second socle layer of the regular module as a module."""
    m = regular_module(p, r)
    out = submodule_module(m, socle_submodule(m, 2))
    out.name = f"soc2:p={p},r={r}"
    return out


# -- functors -------------------------------------------------------------------


def dual_module(m: ModuleRep) -> ModuleRep:
    """Dual frame: generators replaced by negated transposes."""
    cached = m._cache.get("dual")
    if cached is not None:
        return cached
    p = m.p
    gens = [X.transpose().smul(p - 1) for X in m.generators]
    if m.name.startswith("dual(") and m.name.endswith(")"):
        name = m.name[5:-1]
    else:
        name = f"dual({m.name})"
    out = ModuleRep(p, m.r, gens, name=name, dim_cap=m.n)
    m._cache["dual"] = out
    out._cache["dual"] = m
    return out


def direct_sum(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    if a.p != b.p or a.r != b.r:
        raise ValueError("summands must share p and r")
    n = a.n + b.n
    gens = []
    for Xa, Xb in zip(a.generators, b.generators):
        rows = [[0] * n for _ in range(n)]
        for i in range(a.n):
            for j in range(a.n):
                rows[i][j] = Xa.rows[i][j]
        for i in range(b.n):
            for j in range(b.n):
                rows[a.n + i][a.n + j] = Xb.rows[i][j]
        gens.append(rows)
    return ModuleRep(a.p, a.r, gens, name=f"{a.name}+{b.name}", dim_cap=n)


def change_of_generators(m: ModuleRep, g: Mat) -> ModuleRep:
    """New generators Y_i = sum_j g[j][i] X_j for invertible g."""
    if g.nrows != m.r or g.ncols != m.r:
        raise ValueError("change of generators needs an r x r matrix")
    if g.rank() != m.r:
        raise ValueError("generator change matrix is singular")
    f = m.field
    gens = []
    for i in range(m.r):
        acc = Mat.zeros(f, m.n, m.n)
        for j in range(m.r):
            c = g.rows[j][i]
            if not f.is_zero(c):
                acc = acc.add(m.generators[j].smul(c))
        gens.append(acc)
    return ModuleRep(m.p, m.r, gens, name=f"{m.name}@gen-change",
                     dim_cap=m.n)


class PPoint:
    """Polynomial in the generators with zero constant term and nonzero
    linear part; exponent entries stay below p."""

    __slots__ = ("p", "r", "terms")

    def __init__(self, p: int, r: int, terms: dict):
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != r or any(k < 0 or k >= p for k in e):
                raise ValueError(f"bad exponent {e}")
            if c % p:
                clean[e] = c % p
        if any(sum(e) == 0 for e in clean):
            raise ValueError("constant term must be zero")
        if not any(sum(e) == 1 for e in clean):
            raise ValueError("linear part must be nonzero")
        self.p, self.r, self.terms = p, r, clean

    @classmethod
    def linear(cls, p: int, point) -> "PPoint":
        r = len(point)
        terms = {}
        for i, c in enumerate(point):
            if c % p:
                terms[tuple(1 if k == i else 0 for k in range(r))] = c % p
        return cls(p, r, terms)

    def __repr__(self):
        return f"PPoint({self.terms})"


def pullback_ppoint(m: ModuleRep, u: PPoint) -> Mat:
    """Evaluate the p-point at the generators of a commuting frame."""
    if not m.commuting:
        raise ValueError("p-point evaluation needs a commuting frame")
    if u.p != m.p or u.r != m.r:
        raise ValueError("p-point and frame dimensions differ")
    f = m.field
    acc = Mat.zeros(f, m.n, m.n)
    for e, c in sorted(u.terms.items()):
        term = Mat.identity(f, m.n).smul(c)
        for X, k in zip(m.generators, e):
            if k:
                term = term.matmul(X.power(k))
        acc = acc.add(term)
    if not acc.power(m.p).is_zero():
        raise InvalidFrameError("p-point image is not p-nilpotent")
    return acc


# -- on-disk format -------------------------------------------------------------


def save_module(m: ModuleRep, path) -> None:
    data = json.dumps(m.to_dict(), sort_keys=True, separators=(",", ":"))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(data + "\n")


class ModuleFileError(ValueError):
    pass


def module_from_dict(obj) -> ModuleRep:
    if not isinstance(obj, dict):
        raise ModuleFileError("module file must hold a JSON object")
    for key in ("p", "r", "dim", "generators"):
        if key not in obj:
            raise ModuleFileError(f"missing key {key!r}")
    p, r, dim = obj["p"], obj["r"], obj["dim"]
    gens = obj["generators"]
    if not (isinstance(p, int) and isinstance(r, int) and isinstance(dim, int)):
        raise ModuleFileError("p, r, dim must be integers")
    if not isinstance(gens, list) or len(gens) != r:
        raise ModuleFileError("generators must be a list of length r")
    for g in gens:
        if (not isinstance(g, list) or len(g) != dim
                or any(not isinstance(row, list) or len(row) != dim for row in g)):
            raise ModuleFileError("each generator must be a dim x dim matrix")
        for row in g:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < p:
                    raise ModuleFileError(f"entry {x!r} outside [0, {p})")
    try:
        PrimeField(p)
    except ValueError as exc:
        raise ModuleFileError(str(exc)) from exc
    return ModuleRep(p, r, gens)


def load_module(path) -> ModuleRep:
    """Parse and validate a module file; runs the frame check on load."""
    with open(path, "r", encoding="ascii") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModuleFileError(f"not valid JSON: {exc}") from exc
    return module_from_dict(obj)


# -- catalog --------------------------------------------------------------------

ZOO = {
    "regular": (regular_module, ("p", "r")),
    "trivial": (trivial_module, ("p", "r", "dim")),
    "mn": (mn_module, ("p", "n")),
    "mr2": (socle_width_module, ("p", "r")),
    "vr": (v_module, ("p", "r")),
    "rad": (radical_submodule, ("p", "s")),
    "radmodsoc": (rad_mod_socle, ("p",)),
    "soc2": (soc2_module, ("p", "r")),
    "heisenberg": (heisenberg3, ("p",)),
}

ZOO_DEFAULTS = {"r": 2, "s": 1, "dim": 4}


def zoo(name: str, params: dict) -> ModuleRep:
    """Catalog constructor: zoo("regular", {"p": 3, "r": 2})."""
    if name not in ZOO:
        raise CatalogError(f"unknown zoo entry {name!r}; "
                           f"known: {', '.join(sorted(ZOO))}")
    fn, argnames = ZOO[name]
    args = []
    for a in argnames:
        if a in params:
            args.append(params[a])
        elif a in ZOO_DEFAULTS:
            args.append(ZOO_DEFAULTS[a])
        else:
            raise CatalogError(f"zoo entry {name!r} needs parameter {a!r}")
    extra = set(params) - set(argnames)
    if extra:
        raise CatalogError(f"unknown parameters {sorted(extra)} for {name!r}")
    return fn(*args)


def zoo_standard_instances(p: int) -> list[ModuleRep]:
    """The default table rows for one prime, in catalog order."""
    out = [regular_module(p, 2), radical_submodule(p, 1), rad_mod_socle(p)]
    out.extend(mn_module(p, n) for n in range(2, 2 * p - 1))
    out.append(v_module(p, 2))
    out.append(v_module(p, 3))
    out.append(soc2_module(p, 2))
    out.append(socle_width_module(p, 2))
    out.append(heisenberg3(p))
    out.append(trivial_module(p, 2, 4))
    return out
