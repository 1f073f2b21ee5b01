"""Parser for the small group-description language.

Grammar::

    spec    := term (("x" | "⋊" [action]) term)* ;
    term    := "C" int | "S" int | "D" int | "Q8"
             | "perm[" cycles ("," cycles)* "]" | "(" spec ")" ;
    cycles  := ("(" int+ ")")+ ;
    action  := "[" name "]"            e.g. [hol], [pow2]

``|x`` is accepted as an ASCII spelling of ``⋊``.  Products associate to the
left.  A semidirect product ``A ⋊ B`` needs a cyclic ``A`` and a cyclic ``B``;
the action ``hol`` (the default) lets the generator of ``B`` act as the
smallest unit of matching order, ``pow<u>`` as multiplication by ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass

from grpforge import groups as gr
from grpforge.errors import GroupSpecError, InvalidAction
from grpforge.fp import mult_order, unit_of_order


@dataclass(frozen=True)
class Cyclic:
    m: int


@dataclass(frozen=True)
class Symmetric:
    m: int


@dataclass(frozen=True)
class Dihedral:
    order: int


@dataclass(frozen=True)
class Quaternion8:
    pass


@dataclass(frozen=True)
class Perm:
    gens: tuple  # tuple of tuple-of-cycles


@dataclass(frozen=True)
class Direct:
    left: object
    right: object


@dataclass(frozen=True)
class Semidirect:
    normal: object
    acting: object
    action: str = "hol"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        return line, col

    def error(self, msg, pos=None):
        raise GroupSpecError(msg, *self.where(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self):
        node = self.spec()
        self.skip()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.text[self.pos]!r}")
        return node

    def spec(self):
        node = self.term()
        while True:
            if self.peek("⋊") or self.peek("|x"):
                self.pos += 1 if self.text[self.pos] == "⋊" else 2
                action = "hol"
                if self.peek("["):
                    self.pos += 1
                    self.skip()
                    start = self.pos
                    while self.pos < len(self.text) and self.text[self.pos].isalnum():
                        self.pos += 1
                    action = self.text[start:self.pos]
                    if not action:
                        self.error("expected an action name")
                    self.expect("]")
                node = Semidirect(node, self.term(), action)
            elif self.peek("x"):
                self.pos += 1
                node = Direct(node, self.term())
            else:
                return node

    def term(self):
        self.skip()
        start = self.pos
        if self.peek("("):
            self.pos += 1
            node = self.spec()
            self.expect(")")
            return node
        if self.peek("perm["):
            self.pos += len("perm[")
            gens = [self.cycles()]
            while self.peek(","):
                self.pos += 1
                gens.append(self.cycles())
            self.expect("]")
            return Perm(tuple(gens))
        if self.peek("Q8"):
            self.pos += 2
            return Quaternion8()
        for letter, cls in (("C", Cyclic), ("S", Symmetric), ("D", Dihedral)):
            if self.peek(letter):
                self.pos += 1
                m = self.integer()
                if m < 1:
                    self.error("group parameter must be >= 1", start)
                if cls is Dihedral and (m < 2 or m % 2):
                    self.error("dihedral order must be even", start)
                return cls(m)
        self.error("expected a group term")

    def cycles(self):
        cycs = []
        while self.peek("("):
            start = self.pos
            self.pos += 1
            pts = [self.integer()]
            while not self.peek(")"):
                pts.append(self.integer())
            self.expect(")")
            if len(set(pts)) != len(pts):
                self.error("point repeated inside a cycle", start)
            cycs.append(tuple(pts))
        if not cycs:
            self.error("expected a cycle")
        seen = set()
        for c in cycs:
            if seen & set(c):
                self.error("cycles of one permutation must be disjoint")
            seen |= set(c)
        return tuple(cycs)


def parse_group_spec(text: str):
    return _Parser(text).parse()


def _cyclic_param(node) -> int | None:
    return node.m if isinstance(node, Cyclic) else None


def realize(spec, bound: int = gr.DEFAULT_BOUND) -> gr.ConcreteGroup:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if isinstance(spec, Cyclic):
        return gr.cyclic(spec.m, bound)
    if isinstance(spec, Symmetric):
        return gr.symmetric(spec.m, bound)
    if isinstance(spec, Dihedral):
        return gr.dihedral(spec.order, bound)
    if isinstance(spec, Quaternion8):
        return gr.quaternion8()
    if isinstance(spec, Perm):
        points = sorted({pt for g in spec.gens for c in g for pt in c})
        perms = [gr.perm_from_cycles(g, points) for g in spec.gens]
        text = ", ".join("".join("(" + " ".join(map(str, c)) + ")" for c in g) for g in spec.gens)
        return gr.permutation_group(perms, f"perm[{text}]", bound)
    if isinstance(spec, Direct):
        A, B = realize(spec.left, bound), realize(spec.right, bound)
        return gr.direct_product([A, B], bound=bound)
    if isinstance(spec, Semidirect):
        m, k = _cyclic_param(spec.normal), _cyclic_param(spec.acting)
        if m is None or k is None:
            raise GroupSpecError("named semidirect actions need cyclic factors")
        if spec.action == "hol":
            try:
                u = unit_of_order(k, m)
            except ValueError as exc:
                raise GroupSpecError(str(exc)) from None
        elif spec.action.startswith("pow") and spec.action[3:].isdigit():
            u = int(spec.action[3:]) % m
            if k % mult_order(u, m):
                raise InvalidAction(f"x -> {u}x does not define an action of C{k}")
        else:
            raise GroupSpecError(f"unknown action {spec.action!r}")
        N, A = gr.cyclic(m, bound), gr.cyclic(k, bound)
        funcs = [lambda x, u=u: x * u % m] * len(A.gens)
        act = gr.ActionMap.from_functions(A, N, funcs)
        return gr.semidirect(N, A, act, f"C{m} ⋊ C{k}", bound)
    raise GroupSpecError(f"cannot realize {spec!r}")
