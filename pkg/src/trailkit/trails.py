"""Trails in a fundamental lowest-weight module and their linear functions.

A trail for a reduced word ``J = (i_1, ..., i_m)`` and a node ``t`` is a
sequence of weights ``gamma_1, ..., gamma_{m+1}`` with

* (T)  ``gamma_{j+1} - gamma_j = n_j alpha_{i_j}`` for a non-negative
  integer exponent ``n_j``;
* (B)  ``gamma_1 = -s_t(omega_t)`` and ``gamma_{j+1} = -w_j(omega_t)`` for
  all ``j >= phi``, where ``phi <= m`` is the trivialization step;
* (P)  ``gamma_j`` exceeds the driving trail's weight by an element of the
  non-negative root lattice, at every step;
* realizability: the partial monomial vectors
  ``e_{i_j}^{n_j} ... e_{i_1}^{n_1} v_{-s_t omega_t}`` are all non-zero in
  ``V(-omega_t)``.

Each trail K determines a linear function ``z^K = sum_j c_j m_j`` on
exponent coordinates, with ``c_j`` the coroot pairing of ``alpha_{i_j}``
against the midpoint of ``gamma_j`` and ``gamma_{j+1}``.  Together with the
Kashiwara functions ``r_s^k``, their consecutive differences (the closed
face functions) and the cone X_t they span, these tie the trail calculus to
the coordinates of the word.  Trails trivializing at a common step are
grouped into classes carrying the a/k/l/c/c' data used downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cartan_core import (
    CartanData,
    Weight,
    WordJ,
    root_coordinates,
    wadd,
    wneg,
    wscale,
    wsub,
)
from .errors import (
    ConsistencyError,
    DepthExhausted,
    MixedTrivialization,
    NoMaximalTrail,
    OpenFaceRequest,
    TNotInWord,
)
from .rep_builder import LowestWeightModule, ModuleVector, extremal_vector


@dataclass(frozen=True)
class LinearFunctionBJ:
    """An integer linear function sum_j c_j m_j of exponent coordinates.

    ``terms`` is the canonical representation: (position, coefficient)
    pairs sorted by 1-based position, zero coefficients dropped.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        assert all(c != 0 for _, c in self.terms)
        assert list(self.terms) == sorted(self.terms)

    @staticmethod
    def from_coeffs(coeffs) -> "LinearFunctionBJ":
        """Build from a mapping position -> coefficient."""
        return LinearFunctionBJ(
            tuple(sorted((j, c) for j, c in coeffs.items() if c != 0)))

    @staticmethod
    def zero() -> "LinearFunctionBJ":
        return LinearFunctionBJ(())

    def coeff(self, j: int) -> int:
        for pos, c in self.terms:
            if pos == j:
                return c
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.terms)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __add__(self, other: "LinearFunctionBJ") -> "LinearFunctionBJ":
        coeffs = self.as_dict()
        for j, c in other.terms:
            coeffs[j] = coeffs.get(j, 0) + c
        return LinearFunctionBJ.from_coeffs(coeffs)

    def __sub__(self, other: "LinearFunctionBJ") -> "LinearFunctionBJ":
        return self + other.scale(-1)

    def scale(self, c: int) -> "LinearFunctionBJ":
        if c == 0:
            return LinearFunctionBJ(())
        return LinearFunctionBJ(tuple((j, c * v) for j, v in self.terms))

    def evaluate(self, values) -> int:
        """Evaluate at exponents given as a sequence (index j-1) or mapping."""
        if hasattr(values, "get"):
            return sum(c * values.get(j, 0) for j, c in self.terms)
        return sum(c * values[j - 1] for j, c in self.terms)


def _as_word(cartan: CartanData, word) -> WordJ:
    if isinstance(word, WordJ):
        return word
    return WordJ(cartan, tuple(word))


def _driving_weights(word: WordJ, t: int) -> tuple[Weight, ...]:
    """Weights gamma_1..gamma_{m+1} of the driving trail of type t."""
    if word.count(t) == 0:
        raise TNotInWord(f"letter {t} does not occur in {word.letters}")
    p1 = word.position(t, 1)
    start = wsub(word.cartan.simple_root(t),
                 word.cartan.fundamental_weight(t))  # -s_t(omega_t)
    gamma = [start] * (p1 + 1)
    for j in range(p1 + 1, word.m + 1):
        gamma.append(word.prefix_weight(t, j))
    return tuple(gamma)


@dataclass(frozen=True)
class Trail:
    """A trail, stored by its weight sequence and exponents.

    Structural axioms (T), (B) and (P) are enforced on construction;
    realizability against the module is enforced by the constructors that
    hold a module (:func:`enumerate_trails`, :func:`make_trail`,
    :func:`try_adjoin_face`), since the weight data alone cannot decide it.
    """

    word: WordJ
    t: int
    gamma: tuple[Weight, ...]
    exps: tuple[int, ...]
    phi: int

    def __post_init__(self):
        word, m = self.word, self.word.m
        assert len(self.gamma) == m + 1 and len(self.exps) == m
        drive = _driving_weights(word, self.t)
        if self.gamma[0] != drive[0]:
            raise ConsistencyError("trail does not start at -s_t(omega_t)")
        for j in range(1, m + 1):
            n = self.exps[j - 1]
            if n < 0:
                raise ConsistencyError(f"negative exponent at position {j}")
            alpha = word.cartan.simple_root(word.letters[j - 1])
            if wsub(self.gamma[j], self.gamma[j - 1]) != wscale(n, alpha):
                raise ConsistencyError(f"weight step at position {j} is not "
                                       f"{n} alpha_{word.letters[j - 1]}")
            diff = root_coordinates(word.cartan, wsub(self.gamma[j], drive[j]))
            if any(x < 0 or x.denominator != 1 for x in diff):
                raise ConsistencyError(
                    f"weight at position {j} drops below the driving trail")
        if self.phi != _trivialization_step(word, self.t, self.gamma):
            raise ConsistencyError("declared trivialization step is wrong")

    @property
    def m(self) -> int:
        return self.word.m

    def weight(self, j: int) -> Weight:
        """gamma_j, 1-based, j in [1, m+1]."""
        return self.gamma[j - 1]

    def pairing_delta(self, j: int) -> int:
        """alpha_{i_j}^vee of the midpoint (gamma_j + gamma_{j+1})/2."""
        i = self.word.letters[j - 1]
        tot = self.gamma[j - 1][i - 1] + self.gamma[j][i - 1]
        assert tot % 2 == 0
        return tot // 2

    def sort_key(self):
        return self.exps

    def to_json_dict(self) -> dict:
        return {
            "gamma": [list(g) for g in self.gamma],
            "exps": list(self.exps),
            "phi": self.phi,
            "z": {str(j): c for j, c in trail_function(self).terms},
        }


def _trivialization_step(word: WordJ, t: int, gamma) -> int:
    """Least phi with gamma_{j+1} = -w_j(omega_t) for every j >= phi."""
    if gamma[word.m] != word.prefix_weight(t, word.m):
        raise ConsistencyError("trail does not end at -w_m(omega_t)")
    phi = word.m
    for j in range(word.m - 1, 0, -1):
        if gamma[j] != word.prefix_weight(t, j):
            break
        phi = j
    return phi


def driving_trail(cartan: CartanData, word, t: int) -> Trail:
    """The driving trail of type t: constant at -s_t(omega_t) through the
    first occurrence of t, then the extremal weights -w_j(omega_t)."""
    word = _as_word(cartan, word)
    gamma = _driving_weights(word, t)
    exps = []
    for j in range(1, word.m + 1):
        i = word.letters[j - 1]
        d = wsub(gamma[j], gamma[j - 1])
        n = d[i - 1] // 2
        assert d == wscale(n, cartan.simple_root(i)) and n >= 0
        exps.append(n)
    return Trail(word, t, gamma, tuple(exps), word.position(t, 1))


def trail_function(K: Trail) -> LinearFunctionBJ:
    """z^K: the coefficient at position j is the coroot pairing of
    alpha_{i_j} against (gamma_j + gamma_{j+1})/2."""
    coeffs = {j: K.pairing_delta(j) for j in range(1, K.m + 1)}
    f = LinearFunctionBJ.from_coeffs(coeffs)
    if any(j > K.phi for j in f.support):
        raise ConsistencyError(
            f"trail function supported beyond the trivialization step {K.phi}")
    return f


def kashiwara_function(cartan: CartanData, word, s: int, k: int) -> LinearFunctionBJ:
    """r_s^k = m_s^k + sum over positions j after (s,k) of
    alpha_{i_j}^vee(alpha_s) m_j; for k = 0 the sum runs over the whole word."""
    word = _as_word(cartan, word)
    cartan.check_label(s)
    if k == 0:
        coeffs = {j: cartan.pairing(word.letters[j - 1], s)
                  for j in range(1, word.m + 1)}
        return LinearFunctionBJ.from_coeffs(coeffs)
    u = word.position(s, k)
    coeffs = {u: 1}
    for j in range(u + 1, word.m + 1):
        coeffs[j] = cartan.pairing(word.letters[j - 1], s)
    return LinearFunctionBJ.from_coeffs(coeffs)


def driving_function(cartan: CartanData, word, s: int) -> LinearFunctionBJ:
    """z_s^1 = r_s^0 - r_s^1 = m_s^1 + sum over positions j before (s,1) of
    alpha_{i_j}^vee(alpha_s) m_j."""
    word = _as_word(cartan, word)
    return (kashiwara_function(cartan, word, s, 0)
            - kashiwara_function(cartan, word, s, 1))


def face_function(cartan: CartanData, word, s: int,
                  k: int) -> tuple[tuple[Weight, ...], LinearFunctionBJ]:
    """The closed face of type (s, k > 1): weights equal to alpha_s on the
    half-open stretch ((s,k-1), (s,k)], zero elsewhere, and its function
    m_u + sum_{v<j<u} alpha_{i_j}^vee(alpha_s) m_j + m_v."""
    word = _as_word(cartan, word)
    if k == 1:
        raise OpenFaceRequest(
            "k = 1 is the open face; its trail is driving_trail(cartan, word, s)")
    u = word.position(s, k)
    v = word.position(s, k - 1)
    alpha = cartan.simple_root(s)
    zero = tuple(0 for _ in range(cartan.n))
    weights = tuple(alpha if v < j <= u else zero
                    for j in range(1, word.m + 2))
    coeffs = {u: 1, v: 1}
    for j in range(v + 1, u):
        coeffs[j] = cartan.pairing(word.letters[j - 1], s)
    return weights, LinearFunctionBJ.from_coeffs(coeffs)


@lru_cache(maxsize=None)
def _face_basis(word: WordJ) -> dict[int, LinearFunctionBJ]:
    """Closed-face functions keyed by their top support position (s,k)."""
    basis = {}
    for s in word.cartan.labels:
        for k in range(2, word.count(s) + 1):
            _, f = face_function(word.cartan, word, s, k)
            basis[word.position(s, k)] = f
    return basis


def face_cone_coordinates(word: WordJ, f: LinearFunctionBJ):
    """Coordinates of f over the closed-face functions, or None.

    The face functions have unit leading coefficient at distinct top
    positions, so back-substitution from the highest position down either
    expresses f exactly or proves it is outside their integer span.
    """
    basis = _face_basis(word)
    residual = f.as_dict()
    coords = {}
    for u in range(word.m, 0, -1):
        c = residual.get(u, 0)
        if c == 0:
            continue
        if u not in basis:
            return None
        coords[u] = c
        for j, v in basis[u].terms:
            residual[j] = residual.get(j, 0) - c * v
    return coords


def xt_leq(word: WordJ, f: LinearFunctionBJ, g: LinearFunctionBJ) -> bool:
    """The cone order: g - f is a non-negative integer combination of the
    closed-face functions."""
    coords = face_cone_coordinates(word, g - f)
    return coords is not None and all(c >= 0 for c in coords.values())


def in_xt_cone(word: WordJ, t: int, f: LinearFunctionBJ) -> bool:
    """Membership in X_t = z_t^1 + (non-negative span of closed faces)."""
    return xt_leq(word, driving_function(word.cartan, word, t), f)


def _chain(M: LowestWeightModule, word: WordJ, t: int,
           exps) -> list[ModuleVector] | None:
    """Vectors v_1..v_{m+1} along the word, or None if any vanishes."""
    v = extremal_vector(M, (t,))
    out = [v]
    for j in range(1, word.m + 1):
        i = word.letters[j - 1]
        for _ in range(exps[j - 1]):
            v = M.apply_e(i, v)
            if v.is_zero():
                return None
        out.append(v)
    return out


def make_trail(M: LowestWeightModule, word, t: int, exps) -> Trail | None:
    """The trail with the given exponents, or None if the axioms or
    realizability fail."""
    word = _as_word(M.cartan, word)
    exps = tuple(exps)
    if len(exps) != word.m or any(n < 0 for n in exps):
        return None
    drive = _driving_weights(word, t)
    gamma = [drive[0]]
    for j in range(1, word.m + 1):
        i = word.letters[j - 1]
        g = wadd(gamma[-1], wscale(exps[j - 1], M.cartan.simple_root(i)))
        diff = root_coordinates(M.cartan, wsub(g, drive[j]))
        if any(x < 0 for x in diff):
            return None
        gamma.append(g)
    if gamma[word.m] != word.prefix_weight(t, word.m):
        return None
    if _chain(M, word, t, exps) is None:
        return None
    phi = _trivialization_step(word, t, gamma)
    return Trail(word, t, tuple(gamma), exps, phi)


def enumerate_trails(M: LowestWeightModule, word, t: int,
                     max_exp: int | None = None) -> frozenset[Trail]:
    """All trails for (word, t), by depth-first search on exponents.

    Branches are cut when the partial monomial vector vanishes, when a
    weight drops below the driving trail, or when the deficit to the final
    extremal weight -w_m(omega_t) can no longer be filled by the remaining
    letters.  Finite-dimensionality bounds every branch; ``max_exp`` is a
    safety cap for use with truncations and raises DepthExhausted when hit.
    """
    word = _as_word(M.cartan, word)
    if t != M.t:
        raise ConsistencyError(f"module is built for t={M.t}, not t={t}")
    cartan = M.cartan
    m = word.m
    drive = _driving_weights(word, t)
    final = word.prefix_weight(t, m)
    letters_after = [set(word.letters[j:]) for j in range(m + 1)]
    found: list[Trail] = []

    def admissible(g: Weight, j: int) -> bool:
        over = root_coordinates(cartan, wsub(g, drive[j]))
        if any(x < 0 for x in over):
            return False
        deficit = root_coordinates(cartan, wsub(final, g))
        return all(x >= 0 for x in deficit) and all(
            c + 1 in letters_after[j] for c, x in enumerate(deficit) if x > 0)

    def search(j: int, gamma: list[Weight], v: ModuleVector, exps: list[int]):
        if j > m:
            phi = _trivialization_step(word, t, gamma)
            found.append(Trail(word, t, tuple(gamma), tuple(exps), phi))
            return
        i = word.letters[j - 1]
        alpha = cartan.simple_root(i)
        n = 0
        g = gamma[-1]
        while True:
            if admissible(g, j):
                search(j + 1, gamma + [g], v, exps + [n])
            n += 1
            if max_exp is not None and n > max_exp:
                raise DepthExhausted(
                    f"exponent cap {max_exp} hit at position {j}")
            v = M.apply_e(i, v)
            if v.is_zero():
                return
            g = wadd(g, alpha)

    search(1, [drive[0]], extremal_vector(M, (t,)), [])

    trails = frozenset(found)
    first = word.position(t, 1)
    drv = driving_trail(cartan, word, t)
    earliest = [K for K in trails if K.phi <= first]
    if earliest != [drv]:
        raise ConsistencyError(
            "the unique earliest-trivializing trail should be the driving trail")
    return trails


@dataclass(frozen=True)
class TsClass:
    """Trails of one signature, trivializing together at step j = (s, n).

    ``e_signature`` records the exponents at the non-s positions before j;
    ``positions`` are the occurrences (s,1)..(s,n); ``a`` the eigenvalue
    drops; ``members`` are sorted by their exponent tuples ``k_tuples`` at
    the s-positions; ``l_min`` is the lexicographically least member, whose
    exponents ``l`` give the coefficients c_i = a^(i) - l^(i) - l^(i-1);
    each member's c'_i = k^(i) - l^(i) is in ``c_primes``.
    """

    s: int
    j: int
    e_signature: tuple[tuple[int, int], ...]
    positions: tuple[int, ...]
    a: tuple[int, ...]
    members: tuple[Trail, ...]
    k_tuples: tuple[tuple[int, ...], ...]
    l_min: Trail
    c: tuple[int, ...]
    c_primes: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def l(self) -> tuple[int, ...]:
        return self.k_tuples[0]

    def lower_members(self) -> tuple[Trail, ...]:
        """Members already trivializing at the previous step w_{j-1}."""
        return tuple(K for K in self.members if K.phi < self.j)

    def member_c_prime(self, K: Trail) -> tuple[int, ...]:
        return self.c_primes[self.members.index(K)]


def _partial_sums(xs) -> list[int]:
    out = [0]
    for x in xs:
        out.append(out[-1] + x)
    return out


def group_ts_classes(trails, s: int, j: int) -> list[TsClass]:
    """Partition trails trivializing at step j (a position of letter s) by
    signature, and compute each class's a/l/c/c' data.

    The driving trail of type s is never a class member when s = t.  All
    per-class identities that the calculus guarantees are re-verified here
    from the weight data, and violations raise ConsistencyError.
    """
    trails = sorted(trails, key=Trail.sort_key)
    if not trails:
        return []
    word, t = trails[0].word, trails[0].t
    if any(K.word != word or K.t != t for K in trails):
        raise ConsistencyError("trails come from different enumerations")
    if word.letters[j - 1] != s:
        raise ValueError(f"position {j} carries letter {word.letters[j - 1]}, not {s}")
    n = word.count(s, upto=j)
    positions = tuple(word.position(s, i) for i in range(1, n + 1))

    groups: dict[tuple, list[Trail]] = {}
    for K in trails:
        if K.phi > j:
            raise MixedTrivialization(
                f"trail with phi={K.phi} does not trivialize at step {j}")
        if s == t and K.phi <= word.position(t, 1):
            continue  # the driving trail is never a member of its own type
        sig = tuple((q, K.exps[q - 1]) for q in range(1, j)
                    if word.letters[q - 1] != s)
        groups.setdefault(sig, []).append(K)

    out = []
    for sig in sorted(groups):
        members = tuple(sorted(groups[sig], key=Trail.sort_key))
        k_tuples = tuple(tuple(K.exps[p - 1] for p in positions)
                         for K in members)
        a = _class_a(word, s, positions, members[0])
        for K in members:
            if _class_a(word, s, positions, K) != a:
                raise ConsistencyError("members of one class disagree on a")
        l_idx = min(range(len(members)), key=lambda q: k_tuples[q])
        l_min = members[l_idx]
        l = k_tuples[l_idx]
        a_sum, l_sum = _partial_sums(a), _partial_sums(l)
        c = tuple(a_sum[i] - l_sum[i] - l_sum[i - 1] for i in range(1, n + 1))
        _check_class_bounds(s, a, l, c, l_min, positions)
        c_primes = []
        for k in k_tuples:
            k_sum = _partial_sums(k)
            cp = tuple(k_sum[i] - l_sum[i] for i in range(1, n + 1))
            if any(cp[i] > c[i] for i in range(n)):
                raise ConsistencyError(
                    f"member c'={cp} exceeds the class bound c={c}")
            c_primes.append(cp)
        if c_primes[l_idx] != (0,) * n:
            raise ConsistencyError("the lex-least member must have c' = 0")
        out.append(TsClass(s, j, sig, positions, a, members, k_tuples,
                           l_min, c, tuple(c_primes)))
    return out


def _class_a(word: WordJ, s: int, positions, K: Trail) -> tuple[int, ...]:
    """The drops a_1..a_n: a_1 from the weight entering (s,1), the rest from
    the in-between segments; cross-checked against the weight data."""
    cartan = word.cartan
    a = [-K.weight(positions[0])[s - 1]]
    for i in range(1, len(positions)):
        drop = 0
        for q in range(positions[i - 1] + 1, positions[i]):
            drop -= K.exps[q - 1] * cartan.pairing(s, word.letters[q - 1])
        a.append(drop)
    a_sum, k_sum = _partial_sums(a), 0
    for i, p in enumerate(positions, start=1):
        if K.weight(p)[s - 1] != -a_sum[i] + 2 * k_sum:
            raise ConsistencyError(
                "segment drops disagree with the weight pairing")
        k_sum += K.exps[p - 1]
    return tuple(a)


def _check_class_bounds(s, a, l, c, l_min: Trail, positions) -> None:
    n = len(a)
    for i in range(n - 1):
        if l[i] > a[i + 1]:
            raise ConsistencyError(f"l_{i + 1}={l[i]} exceeds a_{i + 2}={a[i + 1]}")
    if any(x < 0 for x in c):
        raise ConsistencyError(f"negative class coefficient in c={c}")
    if c[n - 1] != 0:
        raise ConsistencyError(f"c_n={c[n - 1]} must vanish")
    for i, p in enumerate(positions, start=1):
        if c[i - 1] != -l_min.pairing_delta(p):
            raise ConsistencyError(
                "c from the exponent sums disagrees with the midpoint pairing")


def try_adjoin_face(K: Trail, s: int, k: int, M: LowestWeightModule) -> Trail | None:
    """K + F_s^k (k > 1) if it is again a trail, else None."""
    return _shift_face(K, s, k, M, +1)


def try_remove_face(K: Trail, s: int, k: int, M: LowestWeightModule) -> Trail | None:
    """K - F_s^k (k > 1) if it is again a trail, else None."""
    return _shift_face(K, s, k, M, -1)


def _shift_face(K: Trail, s: int, k: int, M: LowestWeightModule,
                sign: int) -> Trail | None:
    if k <= 1:
        raise OpenFaceRequest("only closed faces (k > 1) can be adjoined")
    u = K.word.position(s, k)
    v = K.word.position(s, k - 1)
    exps = list(K.exps)
    exps[v - 1] += sign
    exps[u - 1] -= sign
    if exps[v - 1] < 0 or exps[u - 1] < 0:
        return None
    return make_trail(M, K.word, K.t, exps)


def minimal_in_class(M: LowestWeightModule, cls: TsClass, K: Trail) -> bool:
    """Whether f_s kills the vector entering every position (s,i)."""
    chain = _chain(M, K.word, K.t, K.exps)
    return all(M.apply_f(cls.s, chain[p - 1]).is_zero() for p in cls.positions)


def maximal_in_class(M: LowestWeightModule, cls: TsClass, K: Trail) -> bool:
    """Whether e_s kills the vector leaving every position (s,i)."""
    chain = _chain(M, K.word, K.t, K.exps)
    return all(M.apply_e(cls.s, chain[p]).is_zero() for p in cls.positions)


def minimax_decompose(cls: TsClass, M: LowestWeightModule) -> tuple[Trail, tuple[int, ...]]:
    """Locate the maximal member, then strip d_l copies of the face F_s^l
    for l = 2..n in increasing order, landing on the minimal member.

    Returns (K_min, d).  Raises NoMaximalTrail when no member is maximal;
    every step of the descent is re-verified (the midpoint sign pattern,
    the defining vanishing of K_min, d_{k+1} matching K_min's coefficients,
    and the exact round trip back to K_max).
    """
    s, positions, n = cls.s, cls.positions, cls.n
    maximal = [K for K in cls.members if maximal_in_class(M, cls, K)]
    if not maximal:
        raise NoMaximalTrail(f"no maximal member among {len(cls.members)} trails")
    if len(maximal) > 1:
        raise ConsistencyError("the maximal member should be unique")
    k_max = maximal[0]
    d = tuple(k_max.pairing_delta(p) for p in positions)
    if d[0] != 0:
        raise ConsistencyError(f"d_1={d[0]} must vanish")
    if any(x < 0 for x in d):
        raise ConsistencyError(f"negative entry in d={d}")

    def check_sign_pattern(K: Trail, level: int) -> None:
        for i, p in enumerate(positions, start=1):
            val = K.pairing_delta(p)
            want = -d[i] if i < level else (0 if i == level else d[i - 1])
            if val != want:
                raise ConsistencyError(
                    f"midpoint pairing {val} at (s,{i}) after level {level}, "
                    f"expected {want}")

    K = k_max
    check_sign_pattern(K, 1)
    for level in range(2, n + 1):
        for _ in range(d[level - 1]):
            nxt = try_remove_face(K, s, level, M)
            if nxt is None:
                raise ConsistencyError(
                    f"removing a face at level {level} left the trail set")
            K = nxt
        check_sign_pattern(K, level)
    k_min = K
    if not minimal_in_class(M, cls, k_min):
        raise ConsistencyError("descent did not land on a minimal trail")
    c_min = tuple(-k_min.pairing_delta(p) for p in positions)
    if any(d[i] != c_min[i - 1] for i in range(1, n)):
        raise ConsistencyError(f"d={d} does not match shifted c={c_min}")
    back = k_min
    for level in range(2, n + 1):
        for _ in range(c_min[level - 2]):
            back = try_adjoin_face(back, s, level, M)
            if back is None:
                raise ConsistencyError("re-adjoining the faces failed")
    if back != k_max:
        raise ConsistencyError("face adjunction did not return to the maximal trail")
    return k_min, d


def rigidify(l, a) -> tuple[int, ...]:
    """Deform the exponents l to the least rigid tuple below them:
    lt_1 = l_1, lt_i = min(l_i, a_i - lt_{i-1}), lt_n = 0.

    The coefficients a^(i) - lt^(i) - lt^(i-1) of the result are verified
    to be non-decreasing over the class range.
    """
    n = len(a)
    assert len(l) == n
    if n == 1:
        lt = [0]
    else:
        lt = [l[0]]
        for i in range(2, n):
            lt.append(min(l[i - 1], a[i - 1] - lt[-1]))
        lt.append(0)
    a_sum, lt_sum = _partial_sums(a), _partial_sums(lt)
    ct = [a_sum[i] - lt_sum[i] - lt_sum[i - 1] for i in range(1, n + 1)]
    for i in range(n - 2):
        if ct[i] > ct[i + 1]:
            raise ConsistencyError(f"rigidified coefficients {ct} decrease")
    return tuple(lt)
