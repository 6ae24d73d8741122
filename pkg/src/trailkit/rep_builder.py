"""Exact construction of fundamental modules in finite type.

The module V(-omega_t) is built as follows: first the highest-weight module
V(omega_t) is realized as the quotient of the free action of the lowering
operators by the radical of the contravariant form, computed weight space by
weight space over exact rationals; then the Chevalley involution swaps the
raising/lowering matrices to produce the lowest-weight picture.

Two independent character oracles (Freudenthal recursion and the Weyl
dimension formula) cross-check every weight multiplicity during the build;
disagreement raises RadicalRankMismatch.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cartan_core import (
    CartanData,
    Weight,
    positive_roots,
    require_finite,
    root_coordinates,
    wadd,
    wneg,
    wscale,
    wsub,
)
from .errors import (
    NotExtremalWeightError,
    RadicalRankMismatch,
    ZeroVectorError,
)
from .linalg import rref, solve

_F0 = Fraction(0)


# ---------------------------------------------------------------------------
# character oracles


def saturated_weight_set(cartan: CartanData, highest: Weight) -> set[Weight]:
    """The full weight set of the irreducible module with this highest weight.

    Computed as the saturation closure of {highest}: from any weight walk the
    whole interval towards its image under each simple reflection.
    """
    require_finite(cartan)
    seen = {highest}
    queue = [highest]
    while queue:
        mu = queue.pop()
        for i in cartan.labels:
            p = mu[i - 1]
            alpha = cartan.simple_root(i)
            step = wneg(alpha) if p > 0 else alpha
            for _ in range(abs(p)):
                mu2 = wadd(mu, step)
                if mu2 not in seen:
                    seen.add(mu2)
                    queue.append(mu2)
                mu = mu2
    return seen


def _height(cartan: CartanData, w: Weight) -> int:
    coords = root_coordinates(cartan, w)
    assert all(c.denominator == 1 for c in coords)
    return int(sum(coords))


def freudenthal_multiplicities(cartan: CartanData, highest: Weight) -> dict[Weight, int]:
    """Weight multiplicities of the irreducible highest-weight module."""
    require_finite(cartan)
    d = cartan.symmetrizer
    n = cartan.n
    weights = saturated_weight_set(cartan, highest)
    by_height = sorted(weights, key=lambda mu: (_height(cartan, wsub(highest, mu)), mu))
    pos = positive_roots(cartan)
    # each positive root in fundamental-weight coordinates, for stepping
    pos_w = [tuple(sum(cartan.gcm[k][j] * b[j] for j in range(n)) for k in range(n))
             for b, _ in pos]
    rho = cartan.rho()
    mult: dict[Weight, int] = {}
    for mu in by_height:
        if mu == highest:
            mult[mu] = 1
            continue
        num = 0
        for (b, _), beta_w in zip(pos, pos_w):
            k = 1
            while True:
                nu = wadd(mu, wscale(k, beta_w))
                if nu not in mult:
                    break
                # (nu, beta) with beta in root coordinates b
                num += mult[nu] * sum(b[j] * d[j] * nu[j] for j in range(n))
                k += 1
        # denominator (|highest+rho|^2 - |mu+rho|^2) = (highest+mu+2rho, highest-mu)
        diff = root_coordinates(cartan, wsub(highest, mu))
        tot = wadd(wadd(highest, mu), wadd(rho, rho))
        denom = sum(diff[j] * d[j] * tot[j] for j in range(n))
        assert denom != 0
        val = Fraction(2 * num) / denom
        assert val.denominator == 1 and val >= 0
        if val:
            mult[mu] = int(val)
    return mult


def weyl_dimension(cartan: CartanData, highest: Weight) -> int:
    """Closed-form dimension of the irreducible module (Weyl formula)."""
    require_finite(cartan)
    n = cartan.n
    dim = Fraction(1)
    for _, coroot in positive_roots(cartan):
        num = sum(coroot[j] * (highest[j] + 1) for j in range(n))
        den = sum(coroot)
        dim *= Fraction(num, den)
    assert dim.denominator == 1
    return int(dim)


# ---------------------------------------------------------------------------
# contravariant form on words in the lowering operators


@lru_cache(maxsize=None)
def _shapovalov(cartan: CartanData, t: int):
    """Memoized contravariant form on lowering words for highest weight
    omega_t:  S(I, J) = <f_I v, f_J v>  with  <f_i x, y> = <x, e_i y>."""
    a = cartan.gcm
    memo: dict[tuple, int] = {}

    def s(left: tuple[int, ...], right: tuple[int, ...]) -> int:
        if not left:
            return 1 if not right else 0
        key = (left, right)
        if key in memo:
            return memo[key]
        i = left[0]
        rest = left[1:]
        total = 0
        for p, jp in enumerate(right):
            if jp != i:
                continue
            # e_i crossing f_{right[p]} leaves h_i acting on the tail
            coeff = (1 if i == t else 0) - sum(a[i - 1][q - 1] for q in right[p + 1:])
            if coeff:
                total += coeff * s(rest, right[:p] + right[p + 1:])
        memo[key] = total
        return total

    return s


# ---------------------------------------------------------------------------
# the module


@dataclass
class ModuleVector:
    """Sparse exact-rational vector in a module basis.

    ``coords`` maps basis index -> non-zero Fraction; the zero vector has
    empty coords and weight None.
    """

    coords: dict[int, Fraction]
    weight: Weight | None

    def is_zero(self) -> bool:
        return not self.coords

    def scale(self, c) -> "ModuleVector":
        c = Fraction(c)
        if c == 0 or self.is_zero():
            return ModuleVector({}, None)
        return ModuleVector({b: x * c for b, x in self.coords.items()}, self.weight)

    def add(self, other: "ModuleVector") -> "ModuleVector":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        assert self.weight == other.weight
        out = dict(self.coords)
        for b, x in other.coords.items():
            y = out.get(b, _F0) + x
            if y:
                out[b] = y
            else:
                out.pop(b, None)
        return ModuleVector(out, self.weight if out else None)

    def key(self):
        """Hashable canonical form (for proportionality-free comparisons)."""
        return self.weight, tuple(sorted(self.coords.items()))


Columns = tuple[tuple[tuple[int, Fraction], ...], ...]


class LowestWeightModule:
    """V(-omega_t): lowest-weight fundamental module with exact matrices.

    ``e_cols[i]`` / ``f_cols[i]`` map 1-based simple index i to a tuple of
    sparse columns (one per basis index); e_i raises the weight by alpha_i.
    """

    def __init__(self, cartan: CartanData, t: int, weights: tuple[Weight, ...],
                 lowest_index: int, e_cols: dict[int, Columns],
                 f_cols: dict[int, Columns]):
        self.cartan = cartan
        self.t = t
        self.weights = weights
        self.lowest_index = lowest_index
        self.e_cols = e_cols
        self.f_cols = f_cols
        spaces: dict[Weight, list[int]] = {}
        for idx, mu in enumerate(weights):
            spaces.setdefault(mu, []).append(idx)
        self.weight_spaces = {mu: tuple(v) for mu, v in spaces.items()}

    @property
    def dim(self) -> int:
        return len(self.weights)

    def zero(self) -> ModuleVector:
        return ModuleVector({}, None)

    def lowest_vector(self) -> ModuleVector:
        return ModuleVector({self.lowest_index: Fraction(1)},
                            self.weights[self.lowest_index])

    def basis_vector(self, idx: int) -> ModuleVector:
        return ModuleVector({idx: Fraction(1)}, self.weights[idx])

    def weight_space(self, mu: Weight) -> tuple[int, ...]:
        return self.weight_spaces.get(mu, ())

    def _apply(self, cols: Columns, v: ModuleVector, step: Weight) -> ModuleVector:
        if v.is_zero():
            return v
        out: dict[int, Fraction] = {}
        for b, c in v.coords.items():
            for r, m in cols[b]:
                y = out.get(r, _F0) + c * m
                if y:
                    out[r] = y
                else:
                    out.pop(r, None)
        if not out:
            return ModuleVector({}, None)
        return ModuleVector(out, wadd(v.weight, step))

    def apply_e(self, i: int, v: ModuleVector) -> ModuleVector:
        self.cartan.check_label(i)
        return self._apply(self.e_cols[i], v, self.cartan.simple_root(i))

    def apply_f(self, i: int, v: ModuleVector) -> ModuleVector:
        self.cartan.check_label(i)
        return self._apply(self.f_cols[i], v, wneg(self.cartan.simple_root(i)))

    def e_string_length(self, i: int, v: ModuleVector) -> int:
        """Largest p with e_i^p v != 0 (v non-zero)."""
        if v.is_zero():
            raise ZeroVectorError("string length of the zero vector")
        p = 0
        while True:
            v = self.apply_e(i, v)
            if v.is_zero():
                return p
            p += 1


def _build_matrices(cartan: CartanData, t: int):
    """Highest-weight build: returns (words, weights, e_cols, f_cols)."""
    lam = cartan.fundamental_weight(t)
    s = _shapovalov(cartan, t)
    fmult = freudenthal_multiplicities(cartan, lam)
    words: list[tuple[int, ...]] = [()]
    weights: list[Weight] = [lam]
    prev: list[tuple[tuple[int, ...], Weight]] = [((), lam)]
    while prev:
        groups: dict[Weight, list[tuple[int, ...]]] = {}
        for w, mu in prev:
            for i in cartan.labels:
                groups.setdefault(wsub(mu, cartan.simple_root(i)), []).append((i,) + w)
        new: list[tuple[tuple[int, ...], Weight]] = []
        for nu in sorted(groups):
            cands = sorted(groups[nu])
            gram = [[s(x, y) for y in cands] for x in cands]
            _, pivots = rref(gram)
            if len(pivots) != fmult.get(nu, 0):
                raise RadicalRankMismatch(
                    f"weight {nu}: Gram rank {len(pivots)} != "
                    f"Freudenthal multiplicity {fmult.get(nu, 0)}")
            new.extend((cands[p], nu) for p in pivots)
        for w, nu in new:
            words.append(w)
            weights.append(nu)
        prev = new
    index: dict[tuple[int, ...], int] = {w: k for k, w in enumerate(words)}
    spaces: dict[Weight, list[int]] = {}
    for idx, mu in enumerate(weights):
        spaces.setdefault(mu, []).append(idx)
    grams = {mu: [[s(words[x], words[y]) for y in idxs] for x in idxs]
             for mu, idxs in spaces.items()}

    def expand(word_vec: tuple[int, ...], nu: Weight) -> list[tuple[int, Fraction]]:
        """Coordinates of the (possibly non-basis) word vector at weight nu."""
        idxs = spaces.get(nu)
        if not idxs:
            return []
        if word_vec in index:
            return [(index[word_vec], Fraction(1))]
        rhs = [s(words[x], word_vec) for x in idxs]
        x = solve(grams[nu], rhs)
        return [(idxs[k], c) for k, c in enumerate(x) if c]

    f_cols: dict[int, list] = {i: [] for i in cartan.labels}
    e_cols: dict[int, list] = {i: [] for i in cartan.labels}
    for idx, (w, mu) in enumerate(zip(words, weights)):
        for i in cartan.labels:
            f_cols[i].append(tuple(expand((i,) + w, wsub(mu, cartan.simple_root(i)))))
            nu = wadd(mu, cartan.simple_root(i))
            idxs = spaces.get(nu)
            if not idxs:
                e_cols[i].append(())
                continue
            rhs = [s((i,) + words[x], w) for x in idxs]
            x = solve(grams[nu], rhs)
            e_cols[i].append(tuple((idxs[k], c) for k, c in enumerate(x) if c))
    return (words, weights,
            {i: tuple(cols) for i, cols in e_cols.items()},
            {i: tuple(cols) for i, cols in f_cols.items()})


def _verify_module(m: LowestWeightModule) -> None:
    """Build-time invariants: sl(2) commutators and the lowest vector."""
    for i in m.cartan.labels:
        low = m.apply_f(i, m.lowest_vector())
        if not low.is_zero():
            raise RadicalRankMismatch(f"f_{i} does not kill the lowest vector")
        for idx, mu in enumerate(m.weights):
            v = m.basis_vector(idx)
            comm = m.apply_e(i, m.apply_f(i, v)).add(
                m.apply_f(i, m.apply_e(i, v)).scale(-1))
            want = v.scale(mu[i - 1])
            if comm.key() != want.key():
                raise RadicalRankMismatch(
                    f"[e_{i}, f_{i}] is not alpha_{i}^vee on weight {mu}")


def _cache_key(cartan: CartanData, t: int) -> str:
    payload = json.dumps({"gcm": [list(r) for r in cartan.gcm], "t": t},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


def _cache_save(path: str, m: LowestWeightModule) -> None:
    def enc(cols_by_i):
        return {str(i): [[[r, x.numerator, x.denominator] for r, x in col]
                         for col in cols] for i, cols in cols_by_i.items()}

    data = {
        "t": m.t,
        "weights": [list(w) for w in m.weights],
        "lowest": m.lowest_index,
        "E": enc(m.e_cols),
        "F": enc(m.f_cols),
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)


def _cache_load(path: str, cartan: CartanData, t: int) -> LowestWeightModule | None:
    try:
        with open(path) as fh:
            data = json.load(fh)
        if data["t"] != t:
            return None

        def dec(cols_by_i):
            return {int(i): tuple(tuple((r, Fraction(num, den)) for r, num, den in col)
                                  for col in cols) for i, cols in cols_by_i.items()}

        return LowestWeightModule(
            cartan, t, tuple(tuple(w) for w in data["weights"]),
            data["lowest"], dec(data["E"]), dec(data["F"]))
    except (OSError, KeyError, ValueError, TypeError):
        return None


@lru_cache(maxsize=None)
def build_fundamental(cartan: CartanData, t: int) -> LowestWeightModule:
    """Build V(-omega_t) with exact raising/lowering matrices.

    Set TRAILKIT_CACHE_DIR to persist built modules as JSON across runs.
    """
    require_finite(cartan)
    cartan.check_label(t)
    cache_dir = os.environ.get("TRAILKIT_CACHE_DIR")
    cache_path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(cache_dir, _cache_key(cartan, t) + ".json")
        cached = _cache_load(cache_path, cartan, t)
        if cached is not None:
            return cached
    _, weights, e_cols, f_cols = _build_matrices(cartan, t)
    # Chevalley flip: negate weights, swap the operator families.
    module = LowestWeightModule(
        cartan, t,
        weights=tuple(wneg(mu) for mu in weights),
        lowest_index=0,
        e_cols=f_cols,
        f_cols=e_cols,
    )
    if module.dim != weyl_dimension(cartan, cartan.fundamental_weight(t)):
        raise RadicalRankMismatch("dimension disagrees with the Weyl formula")
    _verify_module(module)
    if cache_path:
        _cache_save(cache_path, module)
    return module


# ---------------------------------------------------------------------------
# operations on module vectors


def apply_raising_monomial(m: LowestWeightModule, exps, v: ModuleVector) -> ModuleVector:
    """Apply e_{i_1}^{p_1}, then e_{i_2}^{p_2}, ... (list order acts first)."""
    for i, p in exps:
        for _ in range(p):
            v = m.apply_e(i, v)
            if v.is_zero():
                return v
    return v


def extremal_vector(m: LowestWeightModule, word) -> ModuleVector:
    """The vector of weight -w_j omega_t along a reduced prefix.

    Computed by successive maximal raisings e_i^{alpha_i^vee(w omega_t)}; each
    intermediate weight space is checked to be one-dimensional.
    """
    v = m.lowest_vector()
    gamma = m.weights[m.lowest_index]
    for i in word:
        m.cartan.check_label(i)
        p = -gamma[i - 1]
        assert p >= 0, "word is not a reduced prefix"
        for _ in range(p):
            v = m.apply_e(i, v)
        gamma = wadd(gamma, wscale(p, m.cartan.simple_root(i)))
        if v.is_zero() or len(m.weight_space(gamma)) != 1:
            raise NotExtremalWeightError(
                f"weight {gamma} is not a multiplicity-one extremal weight")
    return v


def proportionality(u: ModuleVector, v: ModuleVector):
    """Return the exact scalar c with u = c v, or None if not proportional."""
    if u.is_zero() or v.is_zero():
        raise ZeroVectorError("proportionality requires non-zero vectors")
    if u.weight != v.weight:
        return None
    b = next(iter(v.coords))
    if b not in u.coords:
        return None
    c = u.coords[b] / v.coords[b]
    if u.key() == v.scale(c).key():
        return c
    return None
