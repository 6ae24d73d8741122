"""Step-by-step envelope construction over a reduced word: every settled
trail function must embed into a disjoint union of class blocks, each block
being the lattice-point expansion of an S-graph around an l-minimal driving
function.

A block of type s at step j is built purely from functions: a driving
function with non-positive coefficients at the occurrences of s yields a
coefficient tuple c, the S-graph machinery turns c into lattice points and
vertex functions, and adding c'_u copies of the u-th closed face to the
driver realizes each point.  The construction never touches module vectors;
the enumerated trails serve as the ground truth that every per-step check
is measured against.

Checks recorded per step (JSON report keys "54", "56", "57" follow the
external schema):
  - cover: every function settled before the step lies in exactly one
    block's lower part (the points whose last coordinate vanishes);
  - exact: the functions settled by the step equal the disjoint union of
    the blocks;
  - forward: each step's vertex functions reappear in the next step's
    lower blocks;
  - forward_vertex: the extremal elements among those vertex functions
    reappear in the next step's lower vertex sets (a vertex of one block
    may sit strictly inside the union, so only extremal elements are
    required to survive as vertices).

A failed cover or exact check raises :class:`FalseTrailDetected` with the
offending function and the nearest block; forward checks are report data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan_core import CartanData, WordJ
from .errors import (ConsistencyError, EnvelopeIncomplete, FalseTrailDetected,
                     UnknownLetterError)
from .linalg import extremal_points
from .rep_builder import LowestWeightModule
from .sgraph import CoeffVector, binary_fusion, integer_points
from .trails import (LinearFunctionBJ, _as_word, driving_trail,
                     enumerate_trails, face_function, group_ts_classes,
                     trail_function, xt_leq)


def _fn_key(f: LinearFunctionBJ):
    return f.terms


def _extremal_subset(funcs) -> frozenset[LinearFunctionBJ]:
    """Extremal elements of a finite set of linear functions.

    Coefficients at positions outside every support are zero throughout, so
    the union of supports serves as the coordinate axes.
    """
    fs = sorted(funcs, key=_fn_key)
    if len(fs) <= 2:
        return frozenset(fs)
    axes = sorted({q for f in fs for q, _ in f.terms})
    coords = [tuple(f.coeff(q) for q in axes) for f in fs]
    return frozenset(fs[i] for i in extremal_points(coords))


@dataclass(frozen=True)
class ClassBlock:
    """One type-s class realized as driving function plus face multiples.

    ``points`` are the lattice tuples of the coefficient polytope, in the
    same order as ``functions``; ``lower`` collects the functions whose
    last point coordinate vanishes (equivalently, for a block built at word
    step j, whose support stays below j).  ``vertices`` are the S-graph
    vertex functions and ``lower_vertices`` the extremal elements of the
    lower set; when the last entry of ``c`` is non-zero these coincide with
    the label-n vertex functions.
    """

    s: int
    step: int | None
    c: tuple[int, ...]
    a: tuple[int, ...] | None
    driving: LinearFunctionBJ
    points: tuple[tuple[int, ...], ...]
    functions: frozenset[LinearFunctionBJ]
    lower: frozenset[LinearFunctionBJ]
    vertices: frozenset[LinearFunctionBJ]
    lower_vertices: frozenset[LinearFunctionBJ]
    exceptional: bool = False

    def with_a(self, a) -> "ClassBlock":
        return ClassBlock(self.s, self.step, self.c, tuple(a), self.driving,
                          self.points, self.functions, self.lower,
                          self.vertices, self.lower_vertices, self.exceptional)


@dataclass(frozen=True)
class EnvelopeLayer:
    j: int
    s: int
    blocks: tuple[ClassBlock, ...]
    discarded: tuple[LinearFunctionBJ, ...]
    functions: frozenset[LinearFunctionBJ]
    cover_ok: bool
    exact_ok: bool
    forward_ok: bool
    forward_vertex_ok: bool


@dataclass(frozen=True)
class Envelope:
    """The full per-step decomposition plus the whole-word sweep per type."""

    t: int
    word: WordJ
    layers: tuple[EnvelopeLayer, ...]
    global_blocks: tuple[ClassBlock, ...]
    functions: frozenset[LinearFunctionBJ]
    driving: LinearFunctionBJ
    complete: bool = True

    @property
    def cartan(self) -> CartanData:
        return self.word.cartan

    def layer(self, j: int) -> EnvelopeLayer:
        return self.layers[j - 1]

    def z_t(self, s: int) -> frozenset[LinearFunctionBJ]:
        """Vertex functions of the whole-word type-s decomposition."""
        out: set[LinearFunctionBJ] = set()
        for b in self.global_blocks:
            if b.s == s:
                out |= b.vertices
        if not out:
            raise UnknownLetterError(f"no type-{s} decomposition recorded")
        return frozenset(out)

    def to_json_dict(self) -> dict:
        layers = []
        for L in self.layers:
            classes = []
            for b in sorted(L.blocks, key=lambda b: _fn_key(b.driving)):
                classes.append({
                    "s": b.s,
                    "a": list(b.a) if b.a is not None else [],
                    "c": list(b.c),
                    "z_vertices": sorted(
                        [list(p) for p in _fn_key(v)] for v in b.vertices),
                    "kz_size": len(b.points),
                })
            layers.append({
                "j": L.j,
                "classes": classes,
                "checks": {"54": L.cover_ok, "56": L.forward_ok,
                           "57": L.forward_vertex_ok},
            })
        return {"t": self.t, "layers": layers}


def _expand(driving: LinearFunctionBJ, faces: dict[int, LinearFunctionBJ],
            point) -> LinearFunctionBJ:
    f = driving
    for u, cp in enumerate(point, start=1):
        if cp:
            f = f + faces[u + 1].scale(cp)
    return f


def _make_block(cartan: CartanData, word: WordJ, s: int, step: int | None,
                z: LinearFunctionBJ, c: tuple[int, ...]) -> ClassBlock:
    faces = {k: face_function(cartan, word, s, k)[1]
             for k in range(2, len(c) + 2)}
    cv = CoeffVector.make(c)
    g = binary_fusion(cv)
    pts = tuple(sorted(integer_points(cv)))
    funcs = tuple(_expand(z, faces, p) for p in pts)
    if len(set(funcs)) != len(funcs):
        raise ConsistencyError("distinct lattice points expanded to one "
                               "function")
    lower, functions = set(), set()
    for p, f in zip(pts, funcs):
        functions.add(f)
        is_lower = not p or p[-1] == 0
        if step is not None:
            below = not f.support or f.support[-1] <= step - 1
            if below != is_lower:
                raise ConsistencyError("support bound disagrees with the "
                                       "last point coordinate")
        if is_lower:
            lower.add(f)
    vertices = frozenset(_expand(z, faces, v.func) for v in g.vertices)
    lower_vertices = _extremal_subset(lower)
    if c and c[-1] != 0:
        label_n = frozenset(_expand(z, faces, g.vertices[i].func)
                            for i in g.with_label(cv.n))
        if lower_vertices != label_n:
            raise ConsistencyError("extremal lower functions deviate from "
                                   "the label-n vertex functions")
    return ClassBlock(s, step, c, None, z, pts, frozenset(functions),
                      frozenset(lower), vertices, lower_vertices)


def _exceptional_block(t: int, step: int | None, zt1: LinearFunctionBJ,
                       settled: bool) -> ClassBlock:
    """The lone driving function, which belongs to no type-t class."""
    lower = frozenset({zt1}) if settled else frozenset()
    return ClassBlock(t, step, (), None, zt1, ((),), frozenset({zt1}), lower,
                      frozenset({zt1}), lower, exceptional=True)


def _linear_extension(word: WordJ, cands):
    """Deterministic linear extension of the face-cone order, least first."""
    remaining = sorted(cands, key=lambda zc: _fn_key(zc[0]))
    out = []
    while remaining:
        for idx, (z, _) in enumerate(remaining):
            if not any(xt_leq(word, w, z) for w, _ in remaining if w != z):
                out.append(remaining.pop(idx))
                break
        else:
            raise ConsistencyError("cycle in the face-cone order")
    return out


def _candidates(word: WordJ, s: int, n: int, pool):
    positions = [word.position(s, k) for k in range(1, n + 1)]
    out = []
    for z in sorted(pool, key=_fn_key):
        coeffs = [z.coeff(p) for p in positions]
        if all(x <= 0 for x in coeffs):
            out.append((z, tuple(-x for x in coeffs[:-1])))
    return out


def _nearest_block(blocks, f: LinearFunctionBJ):
    best, best_d = None, None
    for b in blocks:
        for g in b.functions:
            d = sum(abs(c) for _, c in (f - g).terms)
            if best_d is None or (d, _fn_key(b.driving)) < best_d:
                best, best_d = b, (d, _fn_key(b.driving))
    return best


def _check_disjoint(j: int, blocks) -> None:
    for i, a in enumerate(blocks):
        for b in blocks[i + 1:]:
            overlap = a.functions & b.functions
            if overlap:
                f = min(overlap, key=_fn_key)
                raise FalseTrailDetected(
                    j, (a.s, a.c, b.c), f,
                    nearest=b.driving,
                    detail="two blocks overlap instead of being disjoint")


def _check_cover(word: WordJ, j: int, prev, blocks) -> None:
    for f in sorted(prev, key=_fn_key):
        if not any(f in b.lower for b in blocks):
            near = _nearest_block(blocks, f)
            raise FalseTrailDetected(
                j, near.c if near else None, f,
                nearest=near.driving if near else None,
                detail="settled function missing from every lower block")


def _check_exact(word: WordJ, j: int, truth, blocks) -> None:
    constructed = set()
    for b in blocks:
        constructed |= b.functions
    for f in sorted(truth - constructed, key=_fn_key):
        near = _nearest_block(blocks, f)
        raise FalseTrailDetected(
            j, near.c if near else None, f,
            nearest=near.driving if near else None,
            detail="settled function not produced by any block")
    for f in sorted(constructed - truth, key=_fn_key):
        near = _nearest_block(blocks, f)
        raise FalseTrailDetected(
            j, near.c if near else None, f,
            nearest=near.driving if near else None,
            detail="block predicts a function with no trail behind it")


def _attach_class_data(M, word, t, trails, j, s, blocks):
    """Cross-check blocks against the module-level classes and keep their a.

    Each non-exceptional block must correspond to exactly one class whose
    l-minimal function is the block driver, with equal coefficient tuples,
    member functions and member coordinates.
    """
    classes = group_ts_classes([K for K in trails if K.phi <= j], s, j)
    by_driver = {trail_function(cls.l_min): cls for cls in classes}
    out = []
    for b in blocks:
        if b.exceptional:
            out.append(b)
            continue
        cls = by_driver.pop(b.driving, None)
        if cls is None:
            raise FalseTrailDetected(
                j, b.c, b.driving,
                detail="no module class is driven by this function")
        if cls.c != b.c + (0,):
            raise ConsistencyError(
                f"class coefficients {cls.c} disagree with block {b.c}")
        member_fns = frozenset(trail_function(K) for K in cls.members)
        if member_fns != b.functions:
            f = min(member_fns ^ b.functions, key=_fn_key)
            raise FalseTrailDetected(
                j, b.c, f, nearest=b.driving,
                detail="class members differ from the block lattice points")
        if frozenset(cls.c_primes) != frozenset(p + (0,) for p in b.points):
            raise ConsistencyError("member coordinates disagree with the "
                                   "block lattice points")
        out.append(b.with_a(cls.a))
    for cls in by_driver.values():
        raise FalseTrailDetected(
            j, cls.c, trail_function(cls.l_min),
            detail="module class missed by the block construction")
    return out


def _step_blocks(M, word, t, trails, j, s, prev, zt1):
    blocks, discarded = [], []
    if s == t:
        blocks.append(_exceptional_block(t, j, zt1, settled=True))
    n = word.count(s, upto=j)
    for z, c in _linear_extension(word, _candidates(word, s, n, prev)):
        if any(z in b.functions for b in blocks):
            discarded.append(z)
            continue
        blocks.append(_make_block(M.cartan, word, s, j, z, c))
    return blocks, discarded


def _sweep_blocks(M, word, t, s, all_funcs, zt1):
    """Whole-word type-s decomposition, including classes settling after
    the last occurrence of s."""
    blocks, discarded = [], []
    if s == t:
        blocks.append(_exceptional_block(t, None, zt1, settled=True))
    n = word.count(s)
    for z, c in _linear_extension(word, _candidates(word, s, n, all_funcs)):
        if any(z in b.functions for b in blocks):
            discarded.append(z)
            continue
        blocks.append(_make_block(M.cartan, word, s, None, z, c))
    _check_disjoint(word.m, blocks)
    constructed = set()
    for b in blocks:
        constructed |= b.functions
    if constructed != all_funcs:
        f = min(constructed ^ all_funcs, key=_fn_key)
        near = _nearest_block(blocks, f)
        raise FalseTrailDetected(
            word.m, ("sweep", s), f,
            nearest=near.driving if near else None,
            detail=f"whole-word type-{s} decomposition does not match")
    return blocks


def construct_envelope(M: LowestWeightModule, word, t: int | None = None, *,
                       spurious: LinearFunctionBJ | None = None) -> Envelope:
    """Build and verify the step decomposition of all trail functions.

    ``spurious`` smuggles one extra function into the settled layers so the
    detection path can be exercised end to end.
    """
    if t is None:
        t = M.t
    if t != M.t:
        raise ConsistencyError(f"module was built for t={M.t}, not t={t}")
    w = _as_word(M.cartan, word)
    trails = enumerate_trails(M, w, t)
    seen: dict[LinearFunctionBJ, object] = {}
    for K in sorted(trails, key=lambda K: K.exps):
        z = trail_function(K)
        if z in seen:
            raise ConsistencyError("two trails define one function")
        seen[z] = K
    all_funcs = frozenset(seen) | (
        frozenset() if spurious is None else frozenset({spurious}))
    t1 = w.position(t, 1)
    zt1 = trail_function(driving_trail(M.cartan, w, t))

    def settled(j):
        return frozenset(z for z in all_funcs
                         if not z.support or z.support[-1] <= j)

    raw = []
    prev: frozenset[LinearFunctionBJ] = frozenset()
    for j in range(1, w.m + 1):
        s = w.letters[j - 1]
        truth = settled(j)
        if j < t1:
            if truth:
                raise FalseTrailDetected(
                    j, None, min(truth, key=_fn_key),
                    detail="function settles before the driving step")
            raw.append(dict(j=j, s=s, blocks=(), discarded=(),
                            functions=truth, cover=True, exact=True))
            continue
        if j == t1:
            blocks, discarded = [_exceptional_block(t, j, zt1,
                                                    settled=False)], []
            if truth != frozenset({zt1}):
                f = min(truth ^ {zt1}, key=_fn_key)
                raise FalseTrailDetected(
                    j, (), f, nearest=zt1,
                    detail="driving layer is not the single driving function")
        else:
            blocks, discarded = _step_blocks(M, w, t, trails, j, s, prev, zt1)
            _check_disjoint(j, blocks)
            _check_cover(w, j, prev, blocks)
            _check_exact(w, j, truth, blocks)
            blocks = _attach_class_data(M, w, t, trails, j, s, blocks)
        raw.append(dict(j=j, s=s, blocks=tuple(blocks),
                        discarded=tuple(discarded), functions=truth,
                        cover=True, exact=True))
        prev = truth

    layers = []
    for idx, L in enumerate(raw):
        j = L["j"]
        if j < t1 or j == w.m:
            fwd = fwd_v = True
        else:
            lhs = set()
            for b in L["blocks"]:
                lhs |= b.vertices
            rhs, rhs_v = set(), set()
            for b in raw[idx + 1]["blocks"]:
                rhs |= b.lower
                rhs_v |= b.lower_vertices
            fwd = lhs <= rhs
            fwd_v = _extremal_subset(lhs) <= rhs_v
        layers.append(EnvelopeLayer(j, L["s"], L["blocks"], L["discarded"],
                                    L["functions"], L["cover"], L["exact"],
                                    fwd, fwd_v))

    global_blocks = []
    for s in M.cartan.labels:
        global_blocks.extend(_sweep_blocks(M, w, t, s, all_funcs, zt1))
    return Envelope(t, w, tuple(layers), tuple(global_blocks), all_funcs, zt1)


def check_constructibility(M: LowestWeightModule, word, t: int,
                           j1: int) -> dict:
    """Forward-containment report up to step j1; failures are entries."""
    env = construct_envelope(M, word, t)
    t1 = env.word.position(t, 1)
    steps = []
    for L in env.layers:
        if L.j < t1 or L.j > j1:
            continue
        steps.append({"j": L.j, "s": L.s, "forward": L.forward_ok,
                      "forward_vertex": L.forward_vertex_ok})
    return {
        "t": t,
        "driving_step": t1,
        "j1": j1,
        "steps": steps,
        "pass": all(e["forward"] for e in steps),
        "pass_strong": all(e["forward_vertex"] for e in steps),
    }


def epsilon_star(env: Envelope, s: int, b) -> int:
    """Largest value at b among the type-s vertex functions; checked to
    agree with the maximum over every settled function."""
    if not env.complete:
        raise EnvelopeIncomplete("envelope carries unverified layers")
    env.cartan.check_label(s)
    val = max(z.evaluate(b) for z in env.z_t(s))
    full = max(z.evaluate(b) for z in env.functions)
    if val != full:
        raise ConsistencyError(
            f"type-{s} maximum {val} misses the overall maximum {full}")
    return val


def extremality_report(env: Envelope) -> dict:
    """Extremal functions of the whole set versus per-type vertex sets.

    Containment or equality is reported, never asserted.
    """
    funcs = sorted(env.functions, key=_fn_key)
    ext = _extremal_subset(funcs)
    per_s = {}
    for s in env.cartan.labels:
        zs = env.z_t(s)
        per_s[s] = {
            "z_size": len(zs),
            "containment": ext <= zs,
            "equality": ext == zs,
        }
    return {
        "t": env.t,
        "functions": len(funcs),
        "extremal": len(ext),
        "extremal_functions": [list(map(list, _fn_key(z))) for z in
                               sorted(ext, key=_fn_key)],
        "per_s": per_s,
    }
