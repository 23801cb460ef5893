"""Reduced ordered binary decision diagrams with arbitrary leaf values.

Nodes are multi-terminal: a leaf carries any hashable value, not just a
Boolean, so the same structure serves as a compact map from variable
assignments into an arbitrary codomain (state identifiers, sets of states,
expressions).  Boolean BDDs are the special case where leaves are True and
False.

All nodes are hash-consed by a manager: building the same leaf or the same
(var, lo, hi) triple twice returns the identical object, and a node is never
created with lo is hi.  Reducedness and sharing are therefore invariants of
construction, and semantic equality of two diagrams over the same manager is
pointer equality.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence


class OrderingError(ValueError):
    """Raised when a branch would violate the variable order."""


class Node:
    """A BDD node.  Leaves have var None and carry a value; branches have a
    variable index and two children with strictly larger variable indices.

    Never instantiate directly; use the manager so that interning holds.
    """

    __slots__ = ("manager", "var", "lo", "hi", "value", "uid")

    def __init__(self, manager, var, lo, hi, value, uid):
        self.manager = manager
        self.var = var
        self.lo = lo
        self.hi = hi
        self.value = value
        self.uid = uid

    @property
    def is_leaf(self) -> bool:
        return self.var is None

    def __repr__(self):
        if self.is_leaf:
            return f"<leaf {self.value!r}>"
        name = self.manager.var_names[self.var]
        return f"<node {name} lo={self.lo.uid} hi={self.hi.uid}>"


class BddManager:
    """Owns the unique tables and the operation caches for one variable
    universe.

    The variable order is fixed up front: ``var_names[i]`` is the name of
    variable ``i`` and smaller indices sit closer to the root.  Nodes from
    different managers must never be mixed.
    """

    def __init__(self, var_names: Sequence[str]):
        self.var_names = list(var_names)
        self._leaves: dict = {}
        self._branches: dict = {}
        self._memo: dict = {}
        self._uid = 0

    def __len__(self) -> int:
        return len(self._leaves) + len(self._branches)

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def _fresh_uid(self) -> int:
        self._uid += 1
        return self._uid

    # -- construction -----------------------------------------------------

    def constant(self, value: Hashable) -> Node:
        """The leaf carrying ``value`` (interned)."""
        # key includes the type so that e.g. False and 0 stay distinct leaves
        key = (type(value), value)
        node = self._leaves.get(key)
        if node is None:
            node = Node(self, None, None, None, value, self._fresh_uid())
            self._leaves[key] = node
        return node

    def node(self, var: int, lo: Node, hi: Node) -> Node:
        """Branch on ``var`` with children ``lo`` (var false) and ``hi``.

        Collapses to the child when both are identical, and rejects children
        whose variable does not come strictly later in the order.
        """
        if lo is hi:
            return lo
        if not 0 <= var < len(self.var_names):
            raise OrderingError(f"unknown variable index {var}")
        for child in (lo, hi):
            if child.manager is not self:
                raise ValueError("child node belongs to a different manager")
            if not child.is_leaf and child.var <= var:
                raise OrderingError(
                    f"child tests {self.var_names[child.var]} which does not "
                    f"come after {self.var_names[var]}"
                )
        key = (var, lo, hi)
        node = self._branches.get(key)
        if node is None:
            node = Node(self, var, lo, hi, None, self._fresh_uid())
            self._branches[key] = node
        return node

    @property
    def true(self) -> Node:
        return self.constant(True)

    @property
    def false(self) -> Node:
        return self.constant(False)

    def literal(self, var: int, positive: bool = True) -> Node:
        """Boolean BDD of the literal ``var`` or its negation."""
        if positive:
            return self.node(var, self.false, self.true)
        return self.node(var, self.true, self.false)

    # -- evaluation --------------------------------------------------------

    def eval(self, node: Node, assignment) -> Any:
        """Follow ``assignment`` (sequence or mapping of bools, indexed by
        variable) from ``node`` down to a leaf and return its value."""
        while not node.is_leaf:
            node = node.hi if assignment[node.var] else node.lo
        return node.value

    # -- combinators ---------------------------------------------------------

    def apply(self, fn: Callable[[Any, Any], Any], x: Node, y: Node,
              tag: Hashable = None) -> Node:
        """Combine two diagrams leafwise: the result maps each assignment to
        ``fn(value of x, value of y)``.

        Results are cached on ``(tag, x, y)``; the cache persists across
        calls so that repeated combinations share work.  ``tag`` defaults to
        ``fn`` itself, so pass a stable tag when using closures.
        """
        if tag is None:
            tag = fn
        key = (tag, x, y)
        memo = self._memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        if x.is_leaf and y.is_leaf:
            out = self.constant(fn(x.value, y.value))
        elif y.is_leaf or (not x.is_leaf and x.var < y.var):
            out = self.node(x.var, self.apply(fn, x.lo, y, tag),
                            self.apply(fn, x.hi, y, tag))
        elif x.is_leaf or y.var < x.var:
            out = self.node(y.var, self.apply(fn, x, y.lo, tag),
                            self.apply(fn, x, y.hi, tag))
        else:
            out = self.node(x.var, self.apply(fn, x.lo, y.lo, tag),
                            self.apply(fn, x.hi, y.hi, tag))
        memo[key] = out
        return out

    def map_leaves(self, fn: Callable[[Any], Any], node: Node,
                   tag: Hashable = None) -> Node:
        """Rewrite every leaf value through ``fn`` (cached like apply)."""
        if tag is None:
            tag = fn
        key = (tag, node)
        memo = self._memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        if node.is_leaf:
            out = self.constant(fn(node.value))
        else:
            out = self.node(node.var, self.map_leaves(fn, node.lo, tag),
                            self.map_leaves(fn, node.hi, tag))
        memo[key] = out
        return out

    # -- Boolean operations on True/False leaves ---------------------------

    def dsj(self, x: Node, y: Node) -> Node:
        return self.apply(_or, x, y, tag="or")

    def cnj(self, x: Node, y: Node) -> Node:
        return self.apply(_and, x, y, tag="and")

    def neg(self, x: Node) -> Node:
        return self.map_leaves(_not, x, tag="not")

    def implies(self, x: Node, y: Node) -> bool:
        """Entailment test: x implies y iff x or y equals y."""
        return self.dsj(x, y) is y

    def guard(self, cond: Node, node: Node, zero: Hashable) -> Node:
        """Restrict ``node`` to where Boolean ``cond`` holds; elsewhere the
        leaf becomes ``zero``."""
        zero_leaf = self.constant(zero)

        def pick(c, v):
            return v if c else zero

        return self.apply(pick, cond, node, tag=("guard", zero_leaf))

    # -- maintenance and debugging ------------------------------------------

    def clear_memo(self) -> None:
        """Drop the operation caches.  Unique tables are kept, so nodes
        built afterwards still intern to the same objects."""
        self._memo.clear()

    def check_invariants(self) -> None:
        """Walk the whole store and assert orderedness, reducedness and
        injectivity of the unique tables."""
        seen = {}
        for (var, lo, hi), node in self._branches.items():
            assert node.var == var and node.lo is lo and node.hi is hi
            assert lo is not hi, "unreduced branch in store"
            for child in (lo, hi):
                assert child.is_leaf or child.var > var, "order violation"
            assert node.uid not in seen
            seen[node.uid] = node
        for (_, value), node in self._leaves.items():
            assert node.is_leaf and node.value == value
            assert node.uid not in seen
            seen[node.uid] = node

    def support(self, node: Node) -> set:
        """Variable indices actually tested in ``node``."""
        out = set()
        stack = [node]
        visited = set()
        while stack:
            n = stack.pop()
            if n.uid in visited or n.is_leaf:
                continue
            visited.add(n.uid)
            out.add(n.var)
            stack.append(n.lo)
            stack.append(n.hi)
        return out

    def to_dot(self, roots: Iterable[Node] | Node,
               leaf_label: Callable[[Any], str] = repr) -> str:
        """DOT text for the diagram(s): square leaves, dashed lo edges,
        solid hi edges."""
        if isinstance(roots, Node):
            roots = [roots]
        lines = ["digraph bdd {"]
        seen = set()
        stack = list(roots)
        while stack:
            n = stack.pop()
            if n.uid in seen:
                continue
            seen.add(n.uid)
            if n.is_leaf:
                lines.append(
                    f'  n{n.uid} [shape=box, label="{leaf_label(n.value)}"];')
            else:
                lines.append(
                    f'  n{n.uid} [shape=circle, label="{self.var_names[n.var]}"];')
                lines.append(f"  n{n.uid} -> n{n.lo.uid} [style=dashed];")
                lines.append(f"  n{n.uid} -> n{n.hi.uid};")
                stack.append(n.lo)
                stack.append(n.hi)
        lines.append("}")
        return "\n".join(lines)


def _or(a, b):
    return a or b


def _and(a, b):
    return a and b


def _not(a):
    return not a
