"""Built-in schemas: the ladder algebra, rooted trees, and a JSON loader.

Rooted trees carry the admissible-cut coproduct (prune a set of edges with
at most one cut per root-to-leaf path; the pruned forest goes left, the
trunk right).  The construction is validated against the schema invariants
rather than trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .algebra import Generator, Monomial
from .errors import DomainError, HopfError, SchemaError
from .hopf import HopfSchema, ReducedTerm, TableSchema
from .rings import parse_rational

# -- the ladder schema --------------------------------------------------------


class LadderSchema(HopfSchema):
    """Generators t_n of degree n with reduced coproduct sum_k t_k (x) t_(n-k).

    There is one generator in every positive degree, so the schema is
    unbounded; generators are created on demand.
    """

    name = "ladder"
    max_degree = None

    def __init__(self):
        self._gens: Dict[int, Generator] = {}

    def generator(self, n: int) -> Generator:
        if n < 1:
            raise SchemaError("ladder generators are indexed by n >= 1")
        g = self._gens.get(n)
        if g is None:
            g = Generator(degree=n, name=f"t{n}")
            self._gens[n] = g
        return g

    def generators_of_degree(self, degree: int) -> Tuple[Generator, ...]:
        if degree < 1:
            return ()
        return (self.generator(degree),)

    def reduced_terms(self, gen: Generator) -> Tuple[ReducedTerm, ...]:
        n = gen.degree
        return tuple(
            ReducedTerm(
                left=Monomial.of(self.generator(k)),
                right=self.generator(n - k),
                coeff=Fraction(1),
            )
            for k in range(1, n)
        )

    def generator_by_name(self, name: str, search_to: Optional[int] = None) -> Generator:
        if name.startswith("t") and name[1:].isdigit() and int(name[1:]) >= 1:
            return self.generator(int(name[1:]))
        raise SchemaError(f"unknown generator {name!r} in the ladder schema")


def ladder_schema() -> LadderSchema:
    return LadderSchema()


# -- rooted trees ---------------------------------------------------------------


@dataclass(frozen=True)
class RootedTree:
    """A rooted tree in canonical form: children sorted by their encoding."""

    children: Tuple["RootedTree", ...]

    @staticmethod
    def make(children=()) -> "RootedTree":
        return RootedTree(tuple(sorted(children, key=lambda t: t.encoding())))

    @staticmethod
    def leaf() -> "RootedTree":
        return RootedTree(())

    def encoding(self) -> str:
        return "[" + "".join(c.encoding() for c in self.children) + "]"

    @property
    def vertex_count(self) -> int:
        return 1 + sum(c.vertex_count for c in self.children)

    def __str__(self) -> str:
        return self.encoding()


def parse_tree(text: str) -> RootedTree:
    """Parse a balanced-bracket tree encoding such as "[[][]]"."""
    text = text.strip()
    pos = 0

    def node() -> RootedTree:
        nonlocal pos
        if pos >= len(text) or text[pos] != "[":
            raise HopfError(f"bad tree encoding {text!r}: expected '[' at {pos}")
        pos += 1
        children = []
        while pos < len(text) and text[pos] == "[":
            children.append(node())
        if pos >= len(text) or text[pos] != "]":
            raise HopfError(f"bad tree encoding {text!r}: expected ']' at {pos}")
        pos += 1
        return RootedTree.make(children)

    t = node()
    if pos != len(text):
        raise HopfError(f"bad tree encoding {text!r}: trailing characters")
    return t


def parse_forest(text: str) -> Tuple[RootedTree, ...]:
    """Space-separated trees."""
    parts = text.split()
    return tuple(parse_tree(p) for p in parts)


@lru_cache(maxsize=None)
def enumerate_trees(n: int) -> Tuple[RootedTree, ...]:
    """All isomorphism classes of rooted trees with n vertices.

    Canonical, deterministic order (sorted by encoding).  The counts follow
    the classical sequence 1, 1, 2, 4, 9, 20, ...
    """
    if n < 1:
        raise DomainError("trees have at least one vertex")
    if n == 1:
        return (RootedTree.leaf(),)
    out = [RootedTree.make(forest) for forest in _forests(n - 1)]
    uniq = {t.encoding(): t for t in out}
    return tuple(uniq[k] for k in sorted(uniq))


@lru_cache(maxsize=None)
def _forests(n: int, max_rank: Optional[Tuple[int, str]] = None) -> Tuple[Tuple[RootedTree, ...], ...]:
    """Multisets of trees with n total vertices.

    ``max_rank`` bounds the (size, encoding) rank of every chosen tree, so
    each multiset is produced exactly once, in non-increasing rank order.
    """
    if n == 0:
        return ((),)
    out: List[Tuple[RootedTree, ...]] = []
    for size in range(n, 0, -1):
        for tree in enumerate_trees(size):
            rank = (size, tree.encoding())
            if max_rank is not None and rank > max_rank:
                continue
            for rest in _forests(n - size, rank):
                out.append((tree,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class AdmissibleCut:
    """A nonempty admissible edge cut: pruned forest plus the root's trunk."""

    pruned: Tuple[RootedTree, ...]
    trunk: RootedTree


@lru_cache(maxsize=None)
def _cuts_with_empty(tree: RootedTree) -> Tuple[Tuple[Tuple[RootedTree, ...], RootedTree], ...]:
    # Per child, either cut its edge (prune the whole subtree), or keep the
    # edge and apply any cut (possibly empty) inside the child.
    options_per_child = []
    for child in tree.children:
        opts = [((child,), None)]  # cut the edge above this child
        for pruned, trunk in _cuts_with_empty(child):
            opts.append((pruned, trunk))
        options_per_child.append(opts)
    results: List[Tuple[Tuple[RootedTree, ...], RootedTree]] = [((), tree)]
    if options_per_child:
        combos: List[Tuple[Tuple[RootedTree, ...], List[RootedTree]]] = [((), [])]
        for opts in options_per_child:
            new_combos = []
            for pruned_acc, kept in combos:
                for pruned, trunk in opts:
                    kept_next = kept if trunk is None else kept + [trunk]
                    new_combos.append((pruned_acc + pruned, kept_next))
            combos = new_combos
        results = [
            (pruned, RootedTree.make(kept)) for pruned, kept in combos
        ]
    return tuple(results)


def admissible_cuts(tree: RootedTree) -> Tuple[AdmissibleCut, ...]:
    """All nonempty admissible cuts; equal (forest, trunk) pairs may repeat,
    carrying the multiplicity of distinct edge subsets."""
    out = []
    for pruned, trunk in _cuts_with_empty(tree):
        if not pruned:
            continue
        out.append(AdmissibleCut(pruned=tuple(sorted(pruned, key=lambda t: t.encoding())), trunk=trunk))
    return tuple(out)


def tree_generator(tree: RootedTree) -> Generator:
    return Generator(degree=tree.vertex_count, name=tree.encoding())


def forest_monomial(forest: Tuple[RootedTree, ...]) -> Monomial:
    return Monomial.from_powers((tree_generator(t), 1) for t in forest)


def rooted_tree_schema(max_vertices: int) -> TableSchema:
    """The rooted-tree schema with generators up to the given vertex count.

    Computations that would need larger trees fail with an explicit
    cutoff-exceeded error; nothing is silently truncated.
    """
    if max_vertices < 1:
        raise DomainError("max_vertices must be >= 1")
    generators: List[Generator] = []
    reduced: Dict[Generator, Tuple[ReducedTerm, ...]] = {}
    for n in range(1, max_vertices + 1):
        for tree in enumerate_trees(n):
            g = tree_generator(tree)
            generators.append(g)
            acc: Dict[Tuple[Monomial, Generator], Fraction] = {}
            for cut in admissible_cuts(tree):
                left = forest_monomial(cut.pruned)
                right = tree_generator(cut.trunk)
                key = (left, right)
                acc[key] = acc.get(key, Fraction(0)) + 1
            reduced[g] = tuple(
                ReducedTerm(left=left, right=right, coeff=c)
                for (left, right), c in sorted(
                    acc.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])
                )
            )
    return TableSchema(
        name=f"trees:{max_vertices}",
        generators=generators,
        reduced=reduced,
        max_degree=max_vertices,
        complete=False,
    )


# -- custom schema loading ------------------------------------------------------


def schema_from_dict(data: dict, name: str = "custom") -> TableSchema:
    """Build and structurally validate a schema from its JSON dict form.

    Violations are reported with the offending generator and the invariant
    that failed (right leg a declared generator, gradedness, strictly
    positive left degree).
    """
    if not isinstance(data, dict) or "generators" not in data:
        raise SchemaError("schema JSON must be an object with a 'generators' list")
    gens: Dict[str, Generator] = {}
    for entry in data["generators"]:
        gname = entry.get("name")
        degree = entry.get("degree")
        if not isinstance(gname, str) or not gname:
            raise SchemaError(f"generator entry {entry!r} needs a non-empty 'name'")
        if not isinstance(degree, int) or degree < 1:
            raise SchemaError(
                f"generator {gname!r} has degree {degree!r}; generators must be "
                "homogeneous of degree >= 1"
            )
        if gname in gens:
            raise SchemaError(f"duplicate generator name {gname!r}")
        gens[gname] = Generator(degree=degree, name=gname)

    reduced: Dict[Generator, Tuple[ReducedTerm, ...]] = {}
    for gname, terms in data.get("reducedCoproduct", {}).items():
        if gname not in gens:
            raise SchemaError(f"reducedCoproduct mentions unknown generator {gname!r}")
        g = gens[gname]
        built: List[ReducedTerm] = []
        for term in terms:
            right_name = term.get("right")
            if right_name not in gens:
                raise SchemaError(
                    f"reduced coproduct of {gname!r}: right leg {right_name!r} "
                    "must be a single declared generator"
                )
            powers = []
            for pair in term.get("left", []):
                lname, exp = pair
                if lname not in gens:
                    raise SchemaError(
                        f"reduced coproduct of {gname!r}: left factor {lname!r} "
                        "is not a declared generator"
                    )
                if not isinstance(exp, int) or exp < 1:
                    raise SchemaError(
                        f"reduced coproduct of {gname!r}: exponents must be >= 1"
                    )
                powers.append((gens[lname], exp))
            left = Monomial.from_powers(powers)
            coeff = parse_rational(term.get("coeff", "1"))
            if coeff == 0:
                raise SchemaError(
                    f"reduced coproduct of {gname!r} stores a zero coefficient"
                )
            left_deg = left.y_degree
            if left_deg < 1:
                raise SchemaError(
                    f"reduced coproduct of {gname!r} is not progressive: left leg "
                    "must have strictly positive degree"
                )
            if left_deg + gens[right_name].degree != g.degree:
                raise SchemaError(
                    f"reduced coproduct of {gname!r} is not graded: left degree "
                    f"{left_deg} + right degree {gens[right_name].degree} != {g.degree}"
                )
            built.append(ReducedTerm(left=left, right=gens[right_name], coeff=coeff))
        reduced[g] = tuple(built)

    return TableSchema(name=name, generators=gens.values(), reduced=reduced)


def load_schema(path: str) -> TableSchema:
    """Load a schema from a JSON file; full validation happens at load."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"cannot parse schema file {path}: {exc}") from exc
    return schema_from_dict(data, name=f"custom:{path}")


def schema_to_dict(schema: HopfSchema, up_to: Optional[int] = None) -> dict:
    """Serialize a schema to the JSON contract (finite slice for unbounded ones)."""
    bound = schema.max_degree if schema.max_degree is not None else up_to
    if bound is None:
        raise DomainError("serializing an unbounded schema needs an explicit degree bound")
    gens = schema.generators_up_to(bound)
    out = {
        "generators": [{"name": g.name, "degree": g.degree} for g in gens],
        "reducedCoproduct": {},
    }
    for g in gens:
        terms = schema.reduced_terms(g)
        if not terms:
            continue
        out["reducedCoproduct"][g.name] = [
            {
                "left": [[lg.name, e] for lg, e in t.left.powers],
                "right": t.right.name,
                "coeff": str(t.coeff),
            }
            for t in terms
        ]
    return out
