"""Finite categories, set-valued presheaves, truncated simplicial sets, and the
strict locality checkers (chain decomposition, completeness, degeneration).

Composition tables are stored in diagrammatic order: ``then_table[(f, g)]``
is the composite "f followed by g".  All validation is exhaustive enumeration,
which is the point — every carrier here is finite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .shapes import (
    GammaMorphism,
    MonotoneMap,
    Multisimplex,
    MultisimplexOperator,
    compose_operators,
    gamma_compose,
    hat_multisimplex,
)

Arrow = Hashable
Obj = Hashable


# ---------------------------------------------------------------------------
# Finite categories and functors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinCategory:
    """A finite category given by explicit tables.

    ``arrows`` maps an arrow name to its (source, target) pair,
    ``identity`` picks the identity arrow of each object, and
    ``then_table[(f, g)]`` is the composite f-then-g for every composable
    pair.  Associativity and unitality are checked by enumeration unless
    ``validate=False`` (for carriers that are associative by construction).
    """

    objects: tuple[Obj, ...]
    arrows: Mapping[Arrow, tuple[Obj, Obj]]
    identity: Mapping[Obj, Arrow]
    then_table: Mapping[tuple[Arrow, Arrow], Arrow]
    validate: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "arrows", dict(self.arrows))
        object.__setattr__(self, "identity", dict(self.identity))
        object.__setattr__(self, "then_table", dict(self.then_table))
        objs = set(self.objects)
        if len(self.objects) != len(objs):
            raise ValueError("duplicate objects")
        for name, (s, t) in self.arrows.items():
            if s not in objs or t not in objs:
                raise ValueError(f"arrow {name!r} has endpoints outside the category")
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or self.arrows.get(i) != (x, x):
                raise ValueError(f"object {x!r} lacks a well-formed identity")
        if not self.validate:
            return
        for f, (fs, ft) in self.arrows.items():
            for g, (gs, gt) in self.arrows.items():
                if ft == gs:
                    h = self.then_table.get((f, g))
                    if h is None:
                        raise ValueError(f"missing composite for {f!r};{g!r}")
                    if self.arrows[h] != (fs, gt):
                        raise ValueError(f"composite {h!r} has wrong endpoints")
                elif (f, g) in self.then_table:
                    raise ValueError(f"composite defined for non-composable {f!r};{g!r}")
        for f, (fs, ft) in self.arrows.items():
            if self.then_table[(self.identity[fs], f)] != f:
                raise ValueError(f"left identity fails at {f!r}")
            if self.then_table[(f, self.identity[ft])] != f:
                raise ValueError(f"right identity fails at {f!r}")
        for f, (_, ft) in self.arrows.items():
            for g, (gs, gt) in self.arrows.items():
                if ft != gs:
                    continue
                for h, (hs, _) in self.arrows.items():
                    if gt != hs:
                        continue
                    if self.then_table[(self.then_table[(f, g)], h)] != self.then_table[
                        (f, self.then_table[(g, h)])
                    ]:
                        raise ValueError(f"associativity fails at {f!r};{g!r};{h!r}")

    def src(self, f: Arrow) -> Obj:
        return self.arrows[f][0]

    def dst(self, f: Arrow) -> Obj:
        return self.arrows[f][1]

    def then(self, f: Arrow, g: Arrow) -> Arrow:
        return self.then_table[(f, g)]

    def hom(self, x: Obj, y: Obj) -> list[Arrow]:
        return [f for f, (s, t) in self.arrows.items() if s == x and t == y]

    def arrows_into(self, y: Obj) -> list[Arrow]:
        return [f for f, (_, t) in self.arrows.items() if t == y]

    def is_isomorphism(self, f: Arrow) -> bool:
        x, y = self.arrows[f]
        return any(
            self.then(f, g) == self.identity[x] and self.then(g, f) == self.identity[y]
            for g in self.hom(y, x)
        )


@dataclass(frozen=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    on_objects: Mapping[Obj, Obj]
    on_arrows: Mapping[Arrow, Arrow]

    def __post_init__(self) -> None:
        object.__setattr__(self, "on_objects", dict(self.on_objects))
        object.__setattr__(self, "on_arrows", dict(self.on_arrows))
        for x in self.source.objects:
            if self.on_objects.get(x) not in set(self.target.objects):
                raise ValueError(f"object {x!r} has no valid image")
        for f, (s, t) in self.source.arrows.items():
            g = self.on_arrows.get(f)
            if g is None or self.target.arrows[g] != (
                self.on_objects[s],
                self.on_objects[t],
            ):
                raise ValueError(f"arrow {f!r} has no compatible image")
        for x in self.source.objects:
            if self.on_arrows[self.source.identity[x]] != self.target.identity[
                self.on_objects[x]
            ]:
                raise ValueError(f"identity of {x!r} not preserved")
        for (f, g), h in self.source.then_table.items():
            if self.target.then(self.on_arrows[f], self.on_arrows[g]) != self.on_arrows[h]:
                raise ValueError(f"composition not preserved at {f!r};{g!r}")


@dataclass(frozen=True)
class FinPresheaf:
    """A contravariant set-valued functor on a finite category.

    ``actions[f]`` for f: x -> y is the restriction map F(y) -> F(x), given
    as a dict.  Functoriality is checked by enumeration unless
    ``validate=False`` (used for deliberately broken negative fixtures).
    """

    base: FinCategory
    sets: Mapping[Obj, frozenset]
    actions: Mapping[Arrow, Mapping]
    validate: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", {x: frozenset(s) for x, s in self.sets.items()})
        object.__setattr__(
            self, "actions", {f: dict(a) for f, a in self.actions.items()}
        )
        if not self.validate:
            return
        for x in self.base.objects:
            if x not in self.sets:
                raise ValueError(f"no set assigned to object {x!r}")
        for f, (s, t) in self.base.arrows.items():
            act = self.actions.get(f)
            if act is None:
                raise ValueError(f"no action for arrow {f!r}")
            if set(act.keys()) != set(self.sets[t]) or not set(act.values()) <= set(
                self.sets[s]
            ):
                raise ValueError(f"action of {f!r} is not a map F({t!r}) -> F({s!r})")
        for x in self.base.objects:
            ident = self.actions[self.base.identity[x]]
            if any(ident[e] != e for e in self.sets[x]):
                raise ValueError(f"identity action at {x!r} is not the identity")
        for (f, g), h in self.base.then_table.items():
            af, ag, ah = self.actions[f], self.actions[g], self.actions[h]
            for e in self.sets[self.base.dst(g)]:
                if af[ag[e]] != ah[e]:
                    raise ValueError(f"contravariant functoriality fails at {f!r};{g!r}")

    def act(self, f: Arrow, element):
        return self.actions[f][element]


# ---------------------------------------------------------------------------
# Truncated simplicial sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncSSet:
    """A simplicial set truncated at a finite level.

    ``faces[(k, i)]`` is d_i: X_k -> X_{k-1} and ``degeneracies[(k, i)]`` is
    s_i: X_k -> X_{k+1}; all simplicial identities that fit inside the
    truncation are enforced.
    """

    level: int
    simplices: tuple[frozenset, ...]
    faces: Mapping[tuple[int, int], Mapping]
    degeneracies: Mapping[tuple[int, int], Mapping]
    validate: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "simplices", tuple(frozenset(s) for s in self.simplices))
        object.__setattr__(self, "faces", {k: dict(v) for k, v in self.faces.items()})
        object.__setattr__(
            self, "degeneracies", {k: dict(v) for k, v in self.degeneracies.items()}
        )
        if len(self.simplices) != self.level + 1:
            raise ValueError("need one simplex set per degree 0..level")
        if not self.validate:
            return
        for k in range(1, self.level + 1):
            for i in range(k + 1):
                m = self.faces.get((k, i))
                if m is None or set(m) != set(self.simplices[k]) or not set(
                    m.values()
                ) <= set(self.simplices[k - 1]):
                    raise ValueError(f"face ({k},{i}) is not a map X_{k} -> X_{k-1}")
        for k in range(self.level):
            for i in range(k + 1):
                m = self.degeneracies.get((k, i))
                if m is None or set(m) != set(self.simplices[k]) or not set(
                    m.values()
                ) <= set(self.simplices[k + 1]):
                    raise ValueError(f"degeneracy ({k},{i}) is not a map X_{k} -> X_{k+1}")
        self._check_simplicial_identities()

    def _check_simplicial_identities(self) -> None:
        d, s = self.faces, self.degeneracies
        for k in range(2, self.level + 1):
            for j in range(k + 1):
                for i in range(j):
                    for x in self.simplices[k]:
                        if d[(k - 1, i)][d[(k, j)][x]] != d[(k - 1, j - 1)][d[(k, i)][x]]:
                            raise ValueError(f"face identity fails at degree {k}")
        for k in range(self.level - 1):
            for j in range(k + 1):
                for i in range(j + 1):
                    for x in self.simplices[k]:
                        if s[(k + 1, j + 1)][s[(k, i)][x]] != s[(k + 1, i)][s[(k, j)][x]]:
                            raise ValueError(f"degeneracy identity fails at degree {k}")
        for k in range(self.level):
            for j in range(k + 1):
                for i in range(k + 2):
                    for x in self.simplices[k]:
                        y = s[(k, j)][x]
                        got = d[(k + 1, i)][y]
                        if i == j or i == j + 1:
                            want = x
                        elif i < j:
                            want = s[(k - 1, j - 1)][d[(k, i)][x]]
                        else:
                            want = s[(k - 1, j)][d[(k, i - 1)][x]]
                        if got != want:
                            raise ValueError(f"mixed identity fails at degree {k}")

    def face(self, k: int, i: int, x):
        return self.faces[(k, i)][x]

    def vertex(self, k: int, j: int, x):
        """The j-th vertex of a k-simplex, via iterated faces."""
        cur, deg = x, k
        while deg > j:
            cur = self.faces[(deg, deg)][cur]
            deg -= 1
        while deg > 0:
            cur = self.faces[(deg, 0)][cur]
            deg -= 1
        return cur

    def restrict(self, alpha: MonotoneMap, x):
        """The action of an arbitrary monotone map [a] -> [level-part]: X(alpha)
        applied to x in X_{alpha.target}, computed through the epi-mono
        factorization (delete missed vertices top-down, then insert repeats)."""
        image = sorted(set(alpha.values))
        cur, deg = x, alpha.target
        for v in sorted(set(range(alpha.target + 1)) - set(image), reverse=True):
            cur = self.faces[(deg, v)][cur]
            deg -= 1
        for j in [j for j in range(alpha.source) if alpha.values[j] == alpha.values[j + 1]]:
            cur = self.degeneracies[(deg, j)][cur]
            deg += 1
        return cur


def nerve(category: FinCategory, n: int) -> TruncSSet:
    """Chains of composable arrows: degree k holds the k-tuples
    (f_1, ..., f_k), faces drop an outer vertex or compose at an inner one,
    degeneracies insert identities."""
    if n < 0:
        raise ValueError("truncation level must be nonnegative")
    simplices: list[frozenset] = [frozenset(category.objects)]
    if n >= 1:
        simplices.append(frozenset((f,) for f in category.arrows))
    for k in range(2, n + 1):
        chains = set()
        for chain in simplices[k - 1]:
            for g in category.arrows:
                if category.src(g) == category.dst(chain[-1]):
                    chains.add(chain + (g,))
        simplices.append(frozenset(chains))

    faces: dict[tuple[int, int], dict] = {}
    for k in range(1, n + 1):
        for i in range(k + 1):
            table = {}
            for chain in simplices[k]:
                if i == 0:
                    table[chain] = chain[1:] if k > 1 else category.dst(chain[0])
                elif i == k:
                    table[chain] = chain[:-1] if k > 1 else category.src(chain[0])
                else:
                    table[chain] = (
                        chain[: i - 1]
                        + (category.then(chain[i - 1], chain[i]),)
                        + chain[i + 1 :]
                    )
            faces[(k, i)] = table
    degeneracies: dict[tuple[int, int], dict] = {}
    for k in range(n):
        for i in range(k + 1):
            table = {}
            for chain in simplices[k]:
                if k == 0:
                    table[chain] = (category.identity[chain],)
                else:
                    vert = category.src(chain[0]) if i == 0 else category.dst(chain[i - 1])
                    table[chain] = chain[:i] + (category.identity[vert],) + chain[i:]
            degeneracies[(k, i)] = table
    return TruncSSet(n, tuple(simplices), faces, degeneracies)


def pi0(sset: TruncSSet) -> list[frozenset]:
    """Connected components of the vertex set, generated by the two outer
    faces of the edges."""
    if sset.level < 1:
        raise ValueError("need at least the edge level to form components")
    parent = {v: v for v in sset.simplices[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in sset.simplices[1]:
        a, b = find(sset.faces[(1, 0)][e]), find(sset.faces[(1, 1)][e])
        if a != b:
            parent[a] = b
    groups: dict = {}
    for v in sset.simplices[0]:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(map(repr, g)))


# ---------------------------------------------------------------------------
# Category of elements and discrete fibrations
# ---------------------------------------------------------------------------

def elements_category(presheaf: FinPresheaf) -> tuple[FinCategory, FinFunctor]:
    """Objects are pairs (c, x) with x in F(c); an arrow (c, x) -> (c', x')
    is a base arrow phi: c -> c' whose restriction sends x' back to x.
    Returns the category together with the projection functor."""
    base = presheaf.base
    objects = tuple((c, x) for c in base.objects for x in sorted(presheaf.sets[c], key=repr))
    arrows: dict[Arrow, tuple[Obj, Obj]] = {}
    for phi, (c, c2) in base.arrows.items():
        for x2 in presheaf.sets[c2]:
            arrows[(phi, x2)] = ((c, presheaf.act(phi, x2)), (c2, x2))
    identity = {(c, x): (base.identity[c], x) for (c, x) in objects}
    then_table: dict[tuple[Arrow, Arrow], Arrow] = {}
    for (phi, x2), (_, mid) in arrows.items():
        for (psi, x3), (mid2, _) in arrows.items():
            if mid2 == mid:
                then_table[((phi, x2), (psi, x3))] = (base.then(phi, psi), x3)
    cat = FinCategory(objects, arrows, identity, then_table)
    projection = FinFunctor(
        cat,
        base,
        {(c, x): c for (c, x) in objects},
        {(phi, x2): phi for (phi, x2) in arrows},
    )
    return cat, projection


def is_discrete_fibration(p: FinFunctor) -> bool:
    """True iff every arrow of the target landing on p(y) lifts uniquely to an
    arrow with codomain y."""
    for y in p.source.objects:
        py = p.on_objects[y]
        for g in p.target.arrows_into(py):
            lifts = [
                f
                for f in p.source.arrows_into(y)
                if p.on_arrows[f] == g
            ]
            if len(lifts) != 1:
                return False
    return True


# ---------------------------------------------------------------------------
# Strict locality checkers
# ---------------------------------------------------------------------------

def check_segal_delta(sset: TruncSSet, a: int, b: int) -> bool:
    """Strict chain decomposition: X_{a+b} -> X_a x_{X_0} X_b (initial-a and
    final-b restrictions, matching at the shared vertex) is a bijection."""
    if a < 0 or b < 0:
        raise ValueError("chain lengths must be nonnegative")
    if a + b > sset.level:
        raise ValueError(f"level {sset.level} too low for a+b={a + b}")
    init = MonotoneMap(a, a + b, tuple(range(a + 1)))
    fin = MonotoneMap(b, a + b, tuple(range(a, a + b + 1)))
    pairs = {}
    for x in sset.simplices[a + b]:
        u, v = sset.restrict(init, x), sset.restrict(fin, x)
        key = (u, v)
        if key in pairs:
            return False  # not injective
        pairs[key] = x
    target = {
        (u, v)
        for u in sset.simplices[a]
        for v in sset.simplices[b]
        if sset.vertex(a, a, u) == sset.vertex(b, 0, v)
    }
    return set(pairs.keys()) == target


def check_completeness_nerve(category: FinCategory) -> bool:
    """The strict completeness condition for nerves of finite categories:
    every isomorphism is an identity."""
    idents = set(category.identity.values())
    return all(
        f in idents or not category.is_isomorphism(f) for f in category.arrows
    )


def preorder_diagnostics(category: FinCategory) -> dict:
    """Hom-set sizes and cospan cones.

    ``is_preorder``: every hom-set has at most one element.
    ``has_cospan_cones``: every cospan a -> c <- b admits an object mapping to
    both legs, commuting over c.
    """
    is_preorder = all(
        len(category.hom(x, y)) <= 1
        for x in category.objects
        for y in category.objects
    )
    has_cones = True
    for f in category.arrows:
        for g in category.arrows:
            if category.dst(f) != category.dst(g):
                continue
            a, b = category.src(f), category.src(g)
            found = any(
                category.then(u, f) == category.then(v, g)
                for w in category.objects
                for u in category.hom(w, a)
                for v in category.hom(w, b)
            )
            if not found:
                has_cones = False
                break
        if not has_cones:
            break
    return {"is_preorder": is_preorder, "has_cospan_cones": has_cones}


# ---------------------------------------------------------------------------
# Pointed label-map diagrams and their Segal check
# ---------------------------------------------------------------------------

def gamma_segal_category(n: int) -> FinCategory:
    """The base category for label diagrams up to size n: an arrow a -> b
    carries a basepointed function <b> -> <a>, so a contravariant presheaf on
    this base pushes labels forward along its restriction maps.

    Composition of functions is associative, so table validation is skipped.
    """
    objects = tuple(range(n + 1))
    arrows: dict[Arrow, tuple[Obj, Obj]] = {}
    for a in objects:
        for b in objects:
            for action in itertools.product(range(a + 1), repeat=b):
                arrows[("g", a, b, action)] = (a, b)
    identity = {a: ("g", a, a, tuple(range(1, a + 1))) for a in objects}
    then_table: dict[tuple[Arrow, Arrow], Arrow] = {}
    for f, (a, b) in arrows.items():
        for g, (b2, c) in arrows.items():
            if b != b2:
                continue
            uf = GammaMorphism(b, a, f[3])
            ug = GammaMorphism(c, b, g[3])
            comp = gamma_compose(ug, uf)  # <c> -> <a>
            then_table[(f, g)] = ("g", a, c, comp.action)
    return FinCategory(objects, arrows, identity, then_table, validate=False)


def segal_projection_arrows(kappa: int, ell: int) -> tuple[Arrow, Arrow]:
    """The two arrows of gamma_segal_category realizing the splitting maps
    X<kappa+ell> -> X<kappa> and X<kappa+ell> -> X<ell>."""
    first = tuple(j if j <= kappa else 0 for j in range(1, kappa + ell + 1))
    second = tuple(0 if j <= kappa else j - kappa for j in range(1, kappa + ell + 1))
    return ("g", kappa, kappa + ell, first), ("g", ell, kappa + ell, second)


def check_segal_gamma(presheaf: FinPresheaf, kappa: int, ell: int) -> bool:
    """Strict label-splitting condition: X<kappa+ell> -> X<kappa> x X<ell> is
    a bijection and X<0> is a singleton."""
    if kappa < 0 or ell < 0:
        raise ValueError("label counts must be nonnegative")
    if kappa + ell not in presheaf.sets:
        raise ValueError(f"size {kappa + ell} outside the diagram")
    if len(presheaf.sets[0]) != 1:
        return False
    p1, p2 = segal_projection_arrows(kappa, ell)
    if p1 not in presheaf.actions or p2 not in presheaf.actions:
        raise ValueError("presheaf does not carry the splitting arrows")
    seen = set()
    for x in presheaf.sets[kappa + ell]:
        key = (presheaf.act(p1, x), presheaf.act(p2, x))
        if key in seen:
            return False
        seen.add(key)
    full = {(u, v) for u in presheaf.sets[kappa] for v in presheaf.sets[ell]}
    return seen == full


def monoid_power_presheaf(elements: Iterable, add: Callable, zero, n: int) -> FinPresheaf:
    """The label diagram X<k> = E^k of a commutative monoid (E, add, zero):
    a restriction map along a pointed function u sends a tuple to the tuple of
    sums over preimages.  Strictly splitting by construction."""
    elems = tuple(elements)
    base = gamma_segal_category(n)
    sets = {k: frozenset(itertools.product(elems, repeat=k)) for k in base.objects}
    actions = {}
    for f, (a, b) in base.arrows.items():
        u = GammaMorphism(b, a, f[3])
        table = {}
        for y in sets[b]:
            out = []
            for j in range(1, a + 1):
                acc = zero
                for i in range(1, b + 1):
                    if u(i) == j:
                        acc = add(acc, y[i - 1])
                out.append(acc)
            table[y] = tuple(out)
        actions[f] = table
    return FinPresheaf(base, sets, actions)


def constant_gamma_presheaf(value_set: Iterable, n: int) -> FinPresheaf:
    base = gamma_segal_category(n)
    vs = frozenset(value_set)
    sets = {k: vs for k in base.objects}
    actions = {f: {v: v for v in vs} for f in base.arrows}
    return FinPresheaf(base, sets, actions)


# ---------------------------------------------------------------------------
# Multi-direction presheaves and the degeneration checker
# ---------------------------------------------------------------------------

class MultisimplexPresheaf:
    """A set-valued presheaf on multisimplices, given functionally: ``sets(m)``
    returns the value set and ``action(op)`` the restriction map X(target) ->
    X(source-composed)... i.e. for op: m -> n it returns a dict X(n) -> X(m).

    The degeneration checker only evaluates single canonical operators, so no
    global base category is materialized.
    """

    def __init__(self, d: int, sets: Callable[[Multisimplex], frozenset],
                 action: Callable[[MultisimplexOperator], Mapping]) -> None:
        self.d = d
        self._sets = sets
        self._action = action

    def sets(self, m: Multisimplex) -> frozenset:
        return frozenset(self._sets(m))

    def action(self, op: MultisimplexOperator) -> Mapping:
        return dict(self._action(op))


def constant_multisimplex_presheaf(d: int, value_set: Iterable) -> MultisimplexPresheaf:
    vs = frozenset(value_set)
    return MultisimplexPresheaf(d, lambda m: vs, lambda op: {v: v for v in vs})


def _monotone_maps(a: int, b: int) -> list[MonotoneMap]:
    return [
        MonotoneMap(a, b, values)
        for values in itertools.combinations_with_replacement(range(b + 1), a + 1)
    ]


def representable_multisimplex_presheaf(c: Multisimplex) -> MultisimplexPresheaf:
    """X(m) = all operators m -> c, acting by precomposition."""

    def sets(m: Multisimplex) -> frozenset:
        if m.d != c.d:
            raise ValueError("direction count mismatch")
        per_direction = [_monotone_maps(m[i], c[i]) for i in range(c.d)]
        return frozenset(
            MultisimplexOperator(combo) for combo in itertools.product(*per_direction)
        )

    def action(op: MultisimplexOperator) -> dict:
        return {f: compose_operators(op, f) for f in sets(op.target)}

    return MultisimplexPresheaf(c.d, sets, action)


class OneDirectionPresheaf:
    """A simplicial-direction factor for external products: value sets per
    ordinal plus an action for arbitrary monotone maps."""

    def __init__(self, sets: Callable[[int], frozenset],
                 action: Callable[[MonotoneMap], Mapping]) -> None:
        self.sets = sets
        self.action = action

    @classmethod
    def discrete(cls, value_set: Iterable) -> "OneDirectionPresheaf":
        vs = frozenset(value_set)
        return cls(lambda k: vs, lambda alpha: {v: v for v in vs})

    @classmethod
    def from_trunc_sset(cls, sset: TruncSSet) -> "OneDirectionPresheaf":
        def action(alpha: MonotoneMap) -> dict:
            return {x: sset.restrict(alpha, x) for x in sset.simplices[alpha.target]}

        return cls(lambda k: sset.simplices[k], action)


def external_product(factors: list[OneDirectionPresheaf]) -> MultisimplexPresheaf:
    d = len(factors)

    def sets(m: Multisimplex) -> frozenset:
        return frozenset(
            itertools.product(*(factors[i].sets(m[i]) for i in range(d)))
        )

    def action(op: MultisimplexOperator) -> dict:
        tables = [factors[i].action(op.components[i]) for i in range(d)]
        return {
            x: tuple(tables[i][x[i]] for i in range(d))
            for x in sets(op.target)
        }

    return MultisimplexPresheaf(d, sets, action)


def check_globularity_presheaf(presheaf: MultisimplexPresheaf, m: Multisimplex) -> bool:
    """True iff restriction along the canonical collapse operator m -> m-hat
    is a bijection X(m-hat) -> X(m)."""
    if m.d != presheaf.d:
        raise ValueError("direction count mismatch")
    hat, op = hat_multisimplex(m)
    table = presheaf.action(op)
    source_set = presheaf.sets(hat)
    target_set = presheaf.sets(m)
    if set(table.keys()) != set(source_set):
        raise ValueError("restriction table does not cover X(m-hat)")
    values = list(table.values())
    return len(set(values)) == len(values) == len(target_set) and set(values) == set(
        target_set
    )


# ---------------------------------------------------------------------------
# Small builders used across the test-suite and CLI examples
# ---------------------------------------------------------------------------

def discrete_category(n: int) -> FinCategory:
    objs = tuple(range(n))
    arrows = {("id", x): (x, x) for x in objs}
    identity = {x: ("id", x) for x in objs}
    then_table = {((("id", x)), (("id", x))): ("id", x) for x in objs}
    return FinCategory(objs, arrows, identity, then_table)


def poset_category(elements: Iterable, leq: Callable) -> FinCategory:
    """The category of a preorder: one arrow x -> y whenever leq(x, y)."""
    objs = tuple(elements)
    arrows = {("le", x, y): (x, y) for x in objs for y in objs if leq(x, y)}
    for x in objs:
        if ("le", x, x) not in arrows:
            raise ValueError("relation must be reflexive")
    identity = {x: ("le", x, x) for x in objs}
    then_table = {}
    for (_, x, y) in list(arrows):
        for (_, y2, z) in list(arrows):
            if y == y2:
                if ("le", x, z) not in arrows:
                    raise ValueError("relation must be transitive")
                then_table[(("le", x, y), ("le", y2, z))] = ("le", x, z)
    return FinCategory(objs, arrows, identity, then_table)


def chain_poset(n: int) -> FinCategory:
    """The linear order 0 < 1 < ... < n."""
    return poset_category(range(n + 1), lambda x, y: x <= y)


def cospan_poset() -> FinCategory:
    """Three objects a -> c <- b with no lower bound of {a, b}."""
    rel = {("a", "a"), ("b", "b"), ("c", "c"), ("a", "c"), ("b", "c")}
    return poset_category(("a", "b", "c"), lambda x, y: (x, y) in rel)


def parallel_pair_category() -> FinCategory:
    objs = ("x", "y")
    arrows = {
        ("id", "x"): ("x", "x"),
        ("id", "y"): ("y", "y"),
        "f": ("x", "y"),
        "g": ("x", "y"),
    }
    identity = {"x": ("id", "x"), "y": ("id", "y")}
    then_table = {}
    for name, (s, t) in arrows.items():
        then_table[(("id", s), name)] = name
        then_table[(name, ("id", t))] = name
    then_table[(("id", "x"), ("id", "x"))] = ("id", "x")
    then_table[(("id", "y"), ("id", "y"))] = ("id", "y")
    return FinCategory(objs, arrows, identity, then_table)


def cyclic_group_category(k: int) -> FinCategory:
    """One object, arrows the integers mod k under addition."""
    objs = ("*",)
    arrows = {("z", r): ("*", "*") for r in range(k)}
    identity = {"*": ("z", 0)}
    then_table = {
        ((("z", a)), (("z", b))): ("z", (a + b) % k) for a in range(k) for b in range(k)
    }
    return FinCategory(objs, arrows, identity, then_table)


def chaotic_groupoid(n: int) -> FinCategory:
    """Exactly one arrow between every ordered pair of n objects."""
    objs = tuple(range(n))
    arrows = {("u", x, y): (x, y) for x in objs for y in objs}
    identity = {x: ("u", x, x) for x in objs}
    then_table = {
        ((("u", x, y)), (("u", y, z))): ("u", x, z)
        for x in objs
        for y in objs
        for z in objs
    }
    return FinCategory(objs, arrows, identity, then_table)


def disjoint_union_category(c1: FinCategory, c2: FinCategory) -> FinCategory:
    objs = tuple((0, x) for x in c1.objects) + tuple((1, x) for x in c2.objects)
    arrows: dict[Arrow, tuple[Obj, Obj]] = {}
    for f, (s, t) in c1.arrows.items():
        arrows[(0, f)] = ((0, s), (0, t))
    for f, (s, t) in c2.arrows.items():
        arrows[(1, f)] = ((1, s), (1, t))
    identity = {(0, x): (0, c1.identity[x]) for x in c1.objects}
    identity.update({(1, x): (1, c2.identity[x]) for x in c2.objects})
    then_table: dict[tuple[Arrow, Arrow], Arrow] = {}
    for (f, g), h in c1.then_table.items():
        then_table[((0, f), (0, g))] = (0, h)
    for (f, g), h in c2.then_table.items():
        then_table[((1, f), (1, g))] = (1, h)
    return FinCategory(objs, arrows, identity, then_table)
