"""The sandboxed strategy language: parsing, validation, evaluation.

A strategy file declares a first move, an ordered list of guarded rules
(first match wins) with a mandatory default, optional bounded integer
registers, and optional post-round register updates. Guards only read the
realized game history, running scores, registers and a per-match random
stream, so evaluation is sandboxed by construction and terminates in
O(rules * MAX_WINDOW) per round.

Specs are compiled to Python functions for speed. The generated source is
assembled purely from the validated AST (never from raw user text), so
compilation introduces no code-injection surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EvaluationError, LimitError, ParseError

MAX_WINDOW = 20
MAX_RULES = 64
MAX_REGISTERS = 64

ATTITUDES = ("aggressive", "cooperative", "neutral")

_KEYWORDS = {
    "strategy", "attitude", "registers", "first", "rules", "default",
    "after_round", "if", "and", "or", "not", "true", "false", "in",
    "C", "D", "random", "my", "opp",
}

# name -> number of arguments
_ACCESSORS_0 = {
    "round", "total_rounds", "my_coops", "opp_coops", "my_defects",
    "opp_defects", "my_score", "opp_score", "consec_opp_defects",
    "consec_mutual_defects",
}
_ACCESSORS_CALL = {"my_last": 1, "opp_last": 1, "coop_rate": 2, "pattern": 2, "rand": 0}


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: object  # int or float


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class ActLit:
    value: int  # 0 = C, 1 = D


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple  # ints, 'my'/'opp' strings, or pattern strings


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Un:
    op: str
    operand: object


@dataclass(frozen=True)
class ActConst:
    value: int


@dataclass(frozen=True)
class ActMix:
    """Cooperate with probability p, else defect."""
    p: float


@dataclass(frozen=True)
class Rule:
    guard: object
    action: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Update:
    target: str
    expr: object
    guard: object = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Register:
    name: str
    init: int
    lo: int
    hi: int


@dataclass(frozen=True)
class StrategySpec:
    name: str
    attitude: str
    first: object  # ActConst | ActMix
    registers: tuple
    rules: tuple
    updates: tuple
    default: object


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    rule_index: object = None

    def __str__(self):
        where = f" (rule {self.rule_index})" if self.rule_index is not None else ""
        return f"{self.severity}{where}: {self.message}"


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<float>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>:=|->|==|!=|<=|>=|[{}()\[\],:=<>+\-*%])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int','float','string','name','op','eof'
    value: object
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(val)
        else:
            if kind == "int":
                tokens.append(Token("int", int(val), line, col))
            elif kind == "float":
                tokens.append(Token("float", float(val), line, col))
            elif kind == "string":
                tokens.append(Token("string", val[1:-1], line, col))
            elif kind == "name":
                tokens.append(Token("name", val, line, col))
            else:
                tokens.append(Token("op", val, line, col))
            col += len(val)
        pos = m.end()
    tokens.append(Token("eof", None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected):
        t = self.cur
        shown = "end of input" if t.kind == "eof" else repr(str(t.value))
        raise ParseError(f"unexpected {shown}", t.line, t.col, expected=expected)

    def eat_op(self, op):
        t = self.cur
        if t.kind == "op" and t.value == op:
            self.i += 1
            return t
        self.error({op})

    def eat_kw(self, word):
        t = self.cur
        if t.kind == "name" and t.value == word:
            self.i += 1
            return t
        self.error({word})

    def at_kw(self, word):
        t = self.cur
        return t.kind == "name" and t.value == word

    def at_op(self, op):
        t = self.cur
        return t.kind == "op" and t.value == op

    def eat_name(self):
        t = self.cur
        if t.kind == "name":
            self.i += 1
            return t
        self.error({"identifier"})

    def eat_int(self):
        neg = False
        if self.at_op("-"):
            self.i += 1
            neg = True
        t = self.cur
        if t.kind == "int":
            self.i += 1
            return -t.value if neg else t.value
        self.error({"integer"})

    # -- grammar ------------------------------------------------------

    def strategy(self) -> StrategySpec:
        self.eat_kw("strategy")
        t = self.cur
        if t.kind != "string":
            self.error({"strategy name string"})
        name = t.value
        self.i += 1
        self.eat_kw("attitude")
        self.eat_op("=")
        att = self.eat_name()
        if att.value not in ATTITUDES:
            raise ParseError(
                f"unknown attitude {att.value!r}", att.line, att.col,
                expected=set(ATTITUDES),
            )
        self.eat_op("{")

        registers = ()
        if self.at_kw("registers"):
            registers = self.register_block()
        self.eat_kw("first")
        self.eat_op(":")
        first = self.action_expr()
        self.eat_kw("rules")
        self.eat_op(":")
        rules = []
        while self.at_kw("if"):
            t0 = self.cur
            self.i += 1
            guard = self.expr()
            self.eat_op("->")
            action = self.action_expr()
            rules.append(Rule(guard, action, line=t0.line))
            if len(rules) > MAX_RULES:
                raise LimitError(f"more than {MAX_RULES} rules")
        self.eat_kw("default")
        self.eat_op(":")
        default = self.action_expr()
        updates = ()
        if self.at_kw("after_round"):
            updates = self.update_block()
        self.eat_op("}")
        if self.cur.kind != "eof":
            self.error({"end of input"})
        return StrategySpec(
            name=name, attitude=att.value, first=first,
            registers=tuple(registers), rules=tuple(rules),
            updates=tuple(updates), default=default,
        )

    def register_block(self):
        self.eat_kw("registers")
        self.eat_op(":")
        decls = []
        while self.cur.kind == "name" and self.cur.value not in (
            "first", "rules", "default", "after_round",
        ):
            nm = self.eat_name()
            self.eat_op("=")
            init = self.eat_int()
            self.eat_kw("in")
            self.eat_op("[")
            lo = self.eat_int()
            self.eat_op(",")
            hi = self.eat_int()
            self.eat_op("]")
            decls.append(Register(nm.value, init, lo, hi))
            if len(decls) > MAX_REGISTERS:
                raise LimitError(f"more than {MAX_REGISTERS} registers")
        return decls

    def update_block(self):
        self.eat_kw("after_round")
        self.eat_op(":")
        updates = []
        while self.cur.kind == "name" and not self.at_op("}"):
            if self.cur.value in ("first", "rules", "default"):
                self.error({"register update or '}'"})
            nm = self.eat_name()
            t0 = nm
            self.eat_op(":=")
            expr = self.expr()
            guard = None
            if self.at_kw("if"):
                self.i += 1
                guard = self.expr()
            updates.append(Update(nm.value, expr, guard, line=t0.line))
            if len(updates) > MAX_REGISTERS:
                raise LimitError(f"more than {MAX_REGISTERS} register updates")
        return updates

    def action_expr(self):
        t = self.cur
        if t.kind == "name" and t.value in ("C", "D"):
            self.i += 1
            return ActConst(0 if t.value == "C" else 1)
        if t.kind == "name" and t.value == "random":
            self.i += 1
            self.eat_op("(")
            p = self.cur
            if p.kind not in ("float", "int"):
                self.error({"probability literal"})
            self.i += 1
            self.eat_op(")")
            return ActMix(float(p.value))
        self.error({"C", "D", "random(p)"})

    # expressions, lowest to highest precedence
    def expr(self):
        node = self.and_expr()
        while self.at_kw("or"):
            self.i += 1
            node = Bin("or", node, self.and_expr())
        return node

    def and_expr(self):
        node = self.not_expr()
        while self.at_kw("and"):
            self.i += 1
            node = Bin("and", node, self.not_expr())
        return node

    def not_expr(self):
        if self.at_kw("not"):
            self.i += 1
            return Un("not", self.not_expr())
        return self.cmp_expr()

    def cmp_expr(self):
        node = self.sum_expr()
        t = self.cur
        if t.kind == "op" and t.value in ("==", "!=", "<", "<=", ">", ">="):
            self.i += 1
            node = Bin(t.value, node, self.sum_expr())
        return node

    def sum_expr(self):
        node = self.term_expr()
        while self.cur.kind == "op" and self.cur.value in ("+", "-"):
            op = self.cur.value
            self.i += 1
            node = Bin(op, node, self.term_expr())
        return node

    def term_expr(self):
        node = self.unary_expr()
        while self.cur.kind == "op" and self.cur.value in ("*", "%"):
            op = self.cur.value
            self.i += 1
            node = Bin(op, node, self.unary_expr())
        return node

    def unary_expr(self):
        if self.at_op("-"):
            self.i += 1
            return Un("-", self.unary_expr())
        return self.atom()

    def atom(self):
        t = self.cur
        if t.kind in ("int", "float"):
            self.i += 1
            return Num(t.value)
        if t.kind == "op" and t.value == "(":
            self.i += 1
            node = self.expr()
            self.eat_op(")")
            return node
        if t.kind == "name":
            if t.value == "true":
                self.i += 1
                return BoolLit(True)
            if t.value == "false":
                self.i += 1
                return BoolLit(False)
            if t.value in ("C", "D"):
                self.i += 1
                return ActLit(0 if t.value == "C" else 1)
            name = t.value
            self.i += 1
            if self.at_op("("):
                return self.call(name, t)
            return Name(name)
        self.error({"expression"})

    def call(self, name, tok):
        self.eat_op("(")
        if name in ("my_last", "opp_last"):
            k = self.eat_int()
            self.eat_op(")")
            if not 1 <= k <= MAX_WINDOW:
                raise LimitError(
                    f"{name} look-back {k} outside 1..{MAX_WINDOW} "
                    f"(line {tok.line})"
                )
            return Call(name, (k,))
        if name == "coop_rate":
            who = self.eat_name()
            if who.value not in ("my", "opp"):
                raise ParseError(
                    "coop_rate subject must be 'my' or 'opp'",
                    who.line, who.col, expected={"my", "opp"},
                )
            self.eat_op(",")
            w = self.eat_int()
            self.eat_op(")")
            if not 1 <= w <= MAX_WINDOW:
                raise LimitError(
                    f"coop_rate window {w} outside 1..{MAX_WINDOW} "
                    f"(line {tok.line})"
                )
            return Call(name, (who.value, w))
        if name == "pattern":
            who = self.eat_name()
            if who.value not in ("my", "opp"):
                raise ParseError(
                    "pattern subject must be 'my' or 'opp'",
                    who.line, who.col, expected={"my", "opp"},
                )
            self.eat_op(",")
            s = self.cur
            if s.kind != "string":
                self.error({"action pattern string"})
            self.i += 1
            self.eat_op(")")
            if not 1 <= len(s.value) <= MAX_WINDOW:
                raise LimitError(
                    f"pattern length {len(s.value)} outside 1..{MAX_WINDOW} "
                    f"(line {tok.line})"
                )
            if any(ch not in "CD" for ch in s.value):
                raise ParseError(
                    f"pattern must contain only C and D: {s.value!r}",
                    s.line, s.col,
                )
            return Call(name, (who.value, s.value))
        if name == "rand":
            self.eat_op(")")
            return Call(name, ())
        raise ParseError(
            f"unknown function {name!r}", tok.line, tok.col,
            expected=set(_ACCESSORS_CALL),
        )


def parse(text: str) -> StrategySpec:
    """Parse one strategy source into a StrategySpec."""
    return _Parser(text).strategy()


# ---------------------------------------------------------------------------
# Validation

def _walk(node):
    yield node
    if isinstance(node, Bin):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Un):
        yield from _walk(node.operand)


def _is_literal_true(guard):
    return isinstance(guard, BoolLit) and guard.value


def validate(spec: StrategySpec):
    """Static checks. Returns a list of Diagnostics; empty means clean."""
    diags = []
    declared = {}
    for reg in spec.registers:
        if reg.name in declared:
            diags.append(Diagnostic("error", f"duplicate register {reg.name!r}"))
        declared[reg.name] = reg
        if reg.name in _ACCESSORS_0 or reg.name in _ACCESSORS_CALL or reg.name in _KEYWORDS:
            diags.append(Diagnostic(
                "error", f"register {reg.name!r} shadows a built-in name"))
        if reg.lo > reg.hi:
            diags.append(Diagnostic(
                "error", f"register {reg.name!r} has empty range [{reg.lo}, {reg.hi}]"))
        elif not reg.lo <= reg.init <= reg.hi:
            diags.append(Diagnostic(
                "error",
                f"register {reg.name!r} initial value {reg.init} outside "
                f"[{reg.lo}, {reg.hi}]"))

    def check_expr(node, where, rule_index=None, allow_rand=True):
        for sub in _walk(node):
            if isinstance(sub, Name):
                if sub.name not in declared and sub.name not in _ACCESSORS_0:
                    diags.append(Diagnostic(
                        "error",
                        f"undeclared register {sub.name!r} in {where}",
                        rule_index))
            elif isinstance(sub, Call) and sub.name == "rand" and not allow_rand:
                diags.append(Diagnostic(
                    "error", f"rand() is not allowed in {where}", rule_index))

    def check_action(act, where, rule_index=None):
        if isinstance(act, ActMix) and not 0.0 <= act.p <= 1.0:
            diags.append(Diagnostic(
                "error",
                f"probability {act.p} outside [0,1] in {where}", rule_index))

    check_action(spec.first, "first move")
    check_action(spec.default, "default action")
    for idx, rule in enumerate(spec.rules):
        check_expr(rule.guard, f"rule {idx} guard", idx)
        check_action(rule.action, f"rule {idx} action", idx)
    for upd in spec.updates:
        if upd.target not in declared:
            diags.append(Diagnostic(
                "error", f"update assigns undeclared register {upd.target!r}"))
        check_expr(upd.expr, "register update", allow_rand=False)
        if upd.guard is not None:
            check_expr(upd.guard, "register update guard", allow_rand=False)

    for idx, rule in enumerate(spec.rules):
        if _is_literal_true(rule.guard):
            if idx + 1 < len(spec.rules):
                msg = f"rules after index {idx} unreachable (guard is literal true)"
            else:
                msg = f"default action unreachable (rule {idx} guard is literal true)"
            diags.append(Diagnostic("warning", msg, idx))
            break
    return diags


# ---------------------------------------------------------------------------
# Pretty printing

_PREC = {
    "or": 1, "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "%": 6,
}


def _fmt_expr(node, parent_prec=0):
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, ActLit):
        return "C" if node.value == 0 else "D"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Call):
        if node.name == "rand":
            return "rand()"
        if node.name in ("my_last", "opp_last"):
            return f"{node.name}({node.args[0]})"
        if node.name == "coop_rate":
            return f"coop_rate({node.args[0]}, {node.args[1]})"
        if node.name == "pattern":
            return f'pattern({node.args[0]}, "{node.args[1]}")'
        raise AssertionError(node.name)
    if isinstance(node, Un):
        prec = 3 if node.op == "not" else 7
        inner = _fmt_expr(node.operand, prec)
        text = f"not {inner}" if node.op == "not" else f"-{inner}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(node, Bin):
        prec = _PREC[node.op]
        left = _fmt_expr(node.left, prec)
        right = _fmt_expr(node.right, prec + 1)
        text = f"{left} {node.op} {right}"
        return f"({text})" if prec < parent_prec else text
    raise AssertionError(type(node))


def _fmt_action(act):
    if isinstance(act, ActConst):
        return "C" if act.value == 0 else "D"
    return f"random({act.p!r})"


def pretty_print(spec: StrategySpec) -> str:
    lines = [f'strategy "{spec.name}" attitude={spec.attitude} {{']
    if spec.registers:
        lines.append("  registers:")
        for reg in spec.registers:
            lines.append(f"    {reg.name} = {reg.init} in [{reg.lo}, {reg.hi}]")
    lines.append(f"  first: {_fmt_action(spec.first)}")
    lines.append("  rules:")
    for rule in spec.rules:
        lines.append(f"    if {_fmt_expr(rule.guard)} -> {_fmt_action(rule.action)}")
    lines.append(f"    default: {_fmt_action(spec.default)}")
    if spec.updates:
        lines.append("  after_round:")
        for upd in spec.updates:
            text = f"    {upd.target} := {_fmt_expr(upd.expr)}"
            if upd.guard is not None:
                text += f" if {_fmt_expr(upd.guard)}"
            lines.append(text)
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Compilation

_OVF_LIMIT = 1 << 63


def _ck(value):
    if value > _OVF_LIMIT or value < -_OVF_LIMIT:
        raise EvaluationError(f"register arithmetic overflow: {value}")
    return value


def _cr(hist, window):
    n = len(hist)
    if n == 0:
        return 1.0
    k = window if window < n else n
    return (k - sum(hist[-k:])) / k


class _Codegen:
    def __init__(self, reg_index):
        self.reg_index = reg_index
        self.consts = {}

    def const(self, value):
        key = repr(value)
        if key not in self.consts:
            self.consts[key] = (f"_K{len(self.consts)}", value)
        return self.consts[key][0]

    def expr(self, node):
        if isinstance(node, Num):
            return repr(node.value)
        if isinstance(node, BoolLit):
            return "True" if node.value else "False"
        if isinstance(node, ActLit):
            return str(node.value)
        if isinstance(node, Name):
            if node.name in _ACCESSORS_0:
                return self.zero_accessor(node.name)
            return f"regs[{self.reg_index[node.name]}]"
        if isinstance(node, Call):
            return self.call(node)
        if isinstance(node, Un):
            if node.op == "not":
                return f"(not {self.expr(node.operand)})"
            return f"(-{self.expr(node.operand)})"
        if isinstance(node, Bin):
            left = self.expr(node.left)
            right = self.expr(node.right)
            if node.op in ("and", "or"):
                return f"({left} {node.op} {right})"
            if node.op in ("+", "-", "*"):
                return f"_ck(({left}) {node.op} ({right}))"
            return f"(({left}) {node.op} ({right}))"
        raise AssertionError(type(node))

    def call(self, node):
        name = node.name
        if name == "rand":
            return "rng.random()"
        if name in ("my_last", "opp_last"):
            k = node.args[0]
            hist = "v.my_hist" if name == "my_last" else "v.opp_hist"
            return f"({hist}[-{k}] if v.round >= {k} else 0)"
        if name == "coop_rate":
            who, w = node.args
            hist = "v.my_hist" if who == "my" else "v.opp_hist"
            return f"_cr({hist}, {w})"
        if name == "pattern":
            who, pat = node.args
            hist = "v.my_hist" if who == "my" else "v.opp_hist"
            lst = [0 if ch == "C" else 1 for ch in pat]
            cname = self.const(lst)
            return f"({hist}[-{len(lst)}:] == {cname})"
        # zero-arg accessors
        raise AssertionError(name)

    def zero_accessor(self, name):
        simple = {
            "round": "v.round",
            "total_rounds": "v.total_rounds",
            "my_coops": "v.my_coops",
            "opp_coops": "v.opp_coops",
            "my_score": "v.my_score",
            "opp_score": "v.opp_score",
            "consec_opp_defects": "v.consec_opp_defects",
            "consec_mutual_defects": "v.consec_mutual_defects",
        }
        if name in simple:
            return simple[name]
        if name == "my_defects":
            return "(v.round - v.my_coops)"
        if name == "opp_defects":
            return "(v.round - v.opp_coops)"
        raise AssertionError(name)


def _action_code(act, codegen):
    if isinstance(act, ActConst):
        return str(act.value)
    return f"(0 if rng.random() < {act.p!r} else 1)"


class CompiledStrategy:
    """Executable form of a StrategySpec; shareable across matches."""

    __slots__ = ("spec", "decide_fn", "update_fn", "init_regs", "deterministic")

    def __init__(self, spec, decide_fn, update_fn, init_regs, deterministic):
        self.spec = spec
        self.decide_fn = decide_fn
        self.update_fn = update_fn
        self.init_regs = init_regs
        self.deterministic = deterministic

    @property
    def name(self):
        return self.spec.name

    @property
    def attitude(self):
        return self.spec.attitude

    def instantiate(self):
        return DslInstance(self)


class DslInstance:
    __slots__ = ("compiled", "regs")

    def __init__(self, compiled):
        self.compiled = compiled
        self.regs = list(compiled.init_regs)

    def decide(self, view, rng):
        return self.compiled.decide_fn(view, self.regs, rng)

    def after_round(self, view):
        fn = self.compiled.update_fn
        if fn is not None:
            fn(view, self.regs)


def _uses_rand(node):
    return any(
        isinstance(sub, Call) and sub.name == "rand" for sub in _walk(node)
    )


def compile_spec(spec: StrategySpec) -> CompiledStrategy:
    """Compile a validated spec into fast Python callables."""
    reg_index = {reg.name: i for i, reg in enumerate(spec.registers)}
    cg = _Codegen(reg_index)

    lines = ["def _decide(v, regs, rng):"]
    lines.append("    if v.round == 0:")
    lines.append(f"        return {_action_code(spec.first, cg)}")
    for rule in spec.rules:
        lines.append(f"    if {cg.expr(rule.guard)}:")
        lines.append(f"        return {_action_code(rule.action, cg)}")
    lines.append(f"    return {_action_code(spec.default, cg)}")
    decide_src = "\n".join(lines)

    update_src = None
    if spec.updates:
        lines = ["def _update(v, regs):"]
        for upd in spec.updates:
            reg = next(r for r in spec.registers if r.name == upd.target)
            idx = reg_index[upd.target]
            body = [
                f"_x = {cg.expr(upd.expr)}",
                f"regs[{idx}] = {reg.lo} if _x < {reg.lo} else "
                f"({reg.hi} if _x > {reg.hi} else _x)",
            ]
            if upd.guard is not None:
                lines.append(f"    if {cg.expr(upd.guard)}:")
                lines.extend(f"        {stmt}" for stmt in body)
            else:
                lines.extend(f"    {stmt}" for stmt in body)
        update_src = "\n".join(lines)

    namespace = {"_ck": _ck, "_cr": _cr}
    for cname, value in cg.consts.values():
        namespace[cname] = value
    exec(decide_src, namespace)  # noqa: S102 - source built from validated AST
    decide_fn = namespace["_decide"]
    update_fn = None
    if update_src is not None:
        exec(update_src, namespace)  # noqa: S102
        update_fn = namespace["_update"]

    deterministic = not (
        isinstance(spec.first, ActMix)
        or isinstance(spec.default, ActMix)
        or any(isinstance(r.action, ActMix) for r in spec.rules)
        or any(_uses_rand(r.guard) for r in spec.rules)
    )
    init_regs = tuple(reg.init for reg in spec.registers)
    return CompiledStrategy(spec, decide_fn, update_fn, init_regs, deterministic)


def decide(spec_or_compiled, view, registers, rng):
    """One decision for the given view and register state."""
    compiled = (
        spec_or_compiled
        if isinstance(spec_or_compiled, CompiledStrategy)
        else compile_spec(spec_or_compiled)
    )
    return compiled.decide_fn(view, registers, rng)


def update_registers(spec_or_compiled, view, registers):
    """Apply post-round register updates; returns the new register list."""
    compiled = (
        spec_or_compiled
        if isinstance(spec_or_compiled, CompiledStrategy)
        else compile_spec(spec_or_compiled)
    )
    regs = list(registers)
    if compiled.update_fn is not None:
        compiled.update_fn(view, regs)
    return regs


def load_spec(text: str, require_clean: bool = True) -> CompiledStrategy:
    """Parse + validate + compile in one step."""
    spec = parse(text)
    diags = validate(spec)
    errors = [d for d in diags if d.severity == "error"]
    if require_clean and errors:
        raise ParseError("; ".join(str(d) for d in errors))
    return compile_spec(spec)
