"""Pure-Python reduction machine.

Leftmost call-by-value with an explicit frame stack, so deep or looping
reductions never touch the interpreter's recursion limit. One step is one
application of a value to a value, whether it contracts a redex or only
builds a partial application.

The compiled kernel in ``_ckernel.pyx`` implements the same transition rules;
the two are checked against each other in the test suite.
"""

from __future__ import annotations

from .terms import (
    App,
    C_FIX,
    C_IFZ,
    C_K,
    C_P,
    C_P0,
    C_P1,
    C_S,
    C_SUCC,
    Const,
    Fix,
    Num,
    OpenTermError,
    P,
    Term,
    Var,
)

# outcome kinds shared with the compiled kernel
VALUE, UNDEFINED, TIMEOUT = 0, 1, 2

# frame kinds
_ARG, _FN, _APPTO, _SAPP = range(4)


def run(t: Term, budget: int):
    """Reduce ``t``; returns ``(kind, value_or_None, steps, reason)``."""
    stack = []
    push = stack.append
    pop = stack.pop
    steps = 0
    # mode: True = evaluate `cur`, False = `cur` is a value to return
    cur = t
    evaluating = True
    f = v = None
    while True:
        if evaluating:
            tc = type(cur)
            if tc is App:
                push((_ARG, cur.x, None))
                cur = cur.f
                continue
            if tc is Var:
                raise OpenTermError(f"free variable {cur.name!r}")
            evaluating = False
            continue

        # returning the value `cur`
        if not stack:
            return VALUE, cur, steps, None
        kind, a, b = pop()
        if kind == _ARG:
            push((_FN, cur, None))
            cur = a
            evaluating = True
            continue
        if kind == _FN:
            f, v = a, cur
        elif kind == _APPTO:
            f, v = cur, a
        else:  # _SAPP
            push((_FN, cur, None))
            f, v = a, b

        # apply loop: tail calls stay inside this inner loop
        while True:
            steps += 1
            if steps > budget:
                return TIMEOUT, None, budget, None
            tf = type(f)
            if tf is Const:
                c = f.code
                if c == C_K or c == C_S or c == C_P:
                    cur = App(f, v)
                    break
                if c == C_P0 or c == C_P1:
                    tv = type(v)
                    if tv is App and type(v.f) is App and v.f.f is P:
                        cur = v.f.x if c == C_P0 else v.x
                        break
                    if tv is Fix:
                        push((_FN, f, None))
                        f, v = v.f, v
                        continue
                    return UNDEFINED, None, steps, "projection of a non-pair"
                if c == C_SUCC:
                    tv = type(v)
                    if tv is Num:
                        cur = Num(v.k + 1)
                        break
                    if tv is Fix:
                        push((_FN, f, None))
                        f, v = v.f, v
                        continue
                    return UNDEFINED, None, steps, "successor of a non-numeral"
                if c == C_IFZ:
                    tv = type(v)
                    if tv is Num:
                        cur = App(f, v)
                        break
                    if tv is Fix:
                        push((_FN, f, None))
                        f, v = v.f, v
                        continue
                    return UNDEFINED, None, steps, "zero test of a non-numeral"
                # C_FIX
                cur = Fix(v)
                break
            if tf is Num:
                return UNDEFINED, None, steps, "numeral applied as a function"
            if tf is Fix:
                push((_APPTO, v, None))
                f, v = f.f, f
                continue
            # partial application: App(Const, a) or App(App(Const, a), b)
            g = f.f
            if type(g) is Const:
                c = g.code
                if c == C_K:
                    cur = f.x
                    break
                if c == C_S or c == C_P or c == C_IFZ:
                    cur = App(f, v)
                    break
            else:
                c = g.f.code
                if c == C_S:
                    # S a b v -> (a v) (b v): evaluate a v, then b v, then apply
                    push((_SAPP, f.x, v))
                    f = g.x
                    continue
                if c == C_IFZ:
                    n = g.x.k
                    if n == 0:
                        cur = f.x
                        break
                    f, v = v, Num(n - 1)
                    continue
                if c == C_P:
                    return UNDEFINED, None, steps, "pair applied as a function"
            return UNDEFINED, None, steps, "application of an unapplicable value"
        # `cur` now holds the result value; loop returns it
