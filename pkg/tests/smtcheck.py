"""A tiny independent interpreter for the engine's exported QF_LRA documents.

Decides satisfiability by enumerating candidate assignments at the same
granularity the document expresses (boolean features, one-hot indicator
groups plus the deliberately broken all-false combination, and one
representative rational per threshold interval), deriving the per-tree and
per-class score variables by constraint propagation, and then checking
every assertion.  It shares no code with the engine's search or its
brute-force oracle, so agreement is a real cross-check of the export.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction


def _tokenize(text: str):
    out = []
    for line in text.splitlines():
        line = line.split(";", 1)[0]
        out.extend(line.replace("(", " ( ").replace(")", " ) ").split())
    return out


def _parse(tokens, pos=0):
    if tokens[pos] != "(":
        return tokens[pos], pos + 1
    pos += 1
    items = []
    while tokens[pos] != ")":
        node, pos = _parse(tokens, pos)
        items.append(node)
    return items, pos + 1


def _top_level(text: str):
    tokens = _tokenize(text)
    pos = 0
    forms = []
    while pos < len(tokens):
        node, pos = _parse(tokens, pos)
        forms.append(node)
    return forms


def _atom_value(token: str):
    if re.fullmatch(r"-?\d+(\.\d+)?", token):
        return Fraction(token.replace(".", "")) / Fraction(10 ** (len(token.split(".")[1]) if "." in token else 0))
    return None


class _Unknown(Exception):
    pass


def _eval(expr, env):
    if isinstance(expr, str):
        value = _atom_value(expr)
        if value is not None:
            return value
        if expr == "true":
            return True
        if expr == "false":
            return False
        if expr in env:
            return env[expr]
        raise _Unknown(expr)
    op, *args = expr
    if op == "-" and len(args) == 1:
        return -_eval(args[0], env)
    if op == "/":
        return _eval(args[0], env) / _eval(args[1], env)
    if op == "+":
        return sum(_eval(a, env) for a in args)
    if op == "not":
        return not _eval(args[0], env)
    if op == "and":
        return all(_eval(a, env) for a in args)
    if op == "or":
        return any(_eval(a, env) for a in args)
    if op == "=>":
        return (not _eval(args[0], env)) or _eval(args[1], env)
    if op == "=":
        return _eval(args[0], env) == _eval(args[1], env)
    if op == "<":
        return _eval(args[0], env) < _eval(args[1], env)
    if op == ">":
        return _eval(args[0], env) > _eval(args[1], env)
    if op == ">=":
        return _eval(args[0], env) >= _eval(args[1], env)
    if op == "<=":
        return _eval(args[0], env) <= _eval(args[1], env)
    raise _Unknown(op)


def smt_satisfiable(doc: str) -> bool:
    forms = _top_level(doc)
    decls: dict[str, str] = {}
    asserts = []
    for form in forms:
        if isinstance(form, list) and form and form[0] == "declare-const":
            decls[form[1]] = form[2]
        elif isinstance(form, list) and form and form[0] == "assert":
            asserts.append(form[1])

    bool_feats = sorted(n for n in decls if re.fullmatch(r"b\d+", n))
    reals = sorted(n for n in decls if re.fullmatch(r"x\d+", n))
    groups: dict[str, list[str]] = {}
    for n in decls:
        m = re.fullmatch(r"c(\d+)_(\d+)", n)
        if m:
            groups.setdefault(m.group(1), []).append(n)
    for g in groups.values():
        g.sort(key=lambda s: int(s.split("_")[1]))

    # representative values per threshold interval, from the defining asserts,
    # plus any directly pinned values so fixed literals stay reachable
    cuts: dict[str, list[Fraction]] = {x: [] for x in reals}
    pins: dict[str, list[Fraction]] = {x: [] for x in reals}
    for a in asserts:
        if not isinstance(a, list) or a[0] != "=":
            continue
        if isinstance(a[2], list) and a[2][0] == "<" and a[2][1] in cuts:
            cuts[a[2][1]].append(_eval(a[2][2], {}))
        elif isinstance(a[1], str) and a[1] in pins:
            try:
                pins[a[1]].append(_eval(a[2], {}))
            except _Unknown:
                pass
    real_choices: dict[str, list[Fraction]] = {}
    for x, cs in cuts.items():
        cs = sorted(set(cs))
        picks = list(pins[x])
        if not cs:
            picks.append(Fraction(0))
        else:
            picks.append(cs[0] - 1)
            picks.extend((a + b) / 2 for a, b in zip(cs, cs[1:]))
            picks.append(cs[-1] + 1)
        real_choices[x] = sorted(set(picks))

    domains = []
    for b in bool_feats:
        domains.append([(b, v) for v in (False, True)])
    for feat, g in sorted(groups.items(), key=lambda kv: int(kv[0])):
        options = []
        for hot in g:
            options.append(tuple((n, n == hot) for n in g))
        options.append(tuple((n, False) for n in g))  # probes the one-hot constraint
        domains.append(options)
    for x in reals:
        domains.append([(x, v) for v in real_choices[x]])

    derived = [n for n in decls if re.fullmatch(r"[rvt]\d+(_\d+)?", n)]

    for combo in itertools.product(*domains):
        env = {}
        for entry in combo:
            if isinstance(entry, tuple) and isinstance(entry[0], str):
                env[entry[0]] = entry[1]
            else:
                for n, v in entry:
                    env[n] = v
        # propagate (= var expr) and (=> guard (= var expr)) definitions
        changed = True
        while changed:
            changed = False
            for a in asserts:
                if not isinstance(a, list):
                    continue
                eq = None
                if a[0] == "=" and isinstance(a[1], str) and a[1] in decls and a[1] not in env:
                    eq = a
                elif a[0] == "=>" and isinstance(a[2], list) and a[2][0] == "=":
                    target = a[2][1]
                    if isinstance(target, str) and target in decls and target not in env:
                        try:
                            if _eval(a[1], env):
                                eq = a[2]
                        except _Unknown:
                            continue
                if eq is None:
                    continue
                try:
                    env[eq[1]] = _eval(eq[2], env)
                    changed = True
                except _Unknown:
                    continue
        if any(n not in env for n in derived):
            continue  # a score variable stayed unconstrained; cannot satisfy via this probe
        try:
            if all(_eval(a, env) for a in asserts):
                return True
        except _Unknown:
            continue
    return False
