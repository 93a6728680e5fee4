#!/usr/bin/env python3
"""Solve an exported LP-format model with scipy's MILP (HiGHS) backend.

Reads the LP subset the engine emits: Minimize / Subject To / Bounds /
Generals / Binaries / End, with `\\`-prefixed comment lines. Prints one line:
`optimal <objective>`, `infeasible`, or `status <code>`.
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def is_number(tok):
    try:
        float(tok)
        return True
    except ValueError:
        return False


def parse_expr(tokens):
    """Return ({var: coef}, constant) from a token stream like
    '2 x + 3.5 y - z + 4'."""
    terms = {}
    const = 0.0
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            if coef is not None:
                const += sign * coef
            sign, coef = 1.0, None
        elif tok == "-":
            if coef is not None:
                const += sign * coef
            sign, coef = -1.0, None
        elif is_number(tok):
            coef = float(tok) if coef is None else coef * float(tok)
        else:
            c = 1.0 if coef is None else coef
            terms[tok] = terms.get(tok, 0.0) + sign * c
            sign, coef = 1.0, None
    if coef is not None:
        const += sign * coef
    return terms, const


def main():
    if len(sys.argv) < 2:
        print("usage: solve_lp.py <model.lp> [--vars]", file=sys.stderr)
        return 2
    show_vars = "--vars" in sys.argv[2:]

    with open(sys.argv[1]) as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("\\")]

    section = None
    objective = ({}, 0.0)
    rows = []  # (name, terms, op, rhs)
    explicit = {}  # var -> (lb, ub)
    integers = set()
    binaries = set()

    headers = {
        "minimize": "objective",
        "subject to": "rows",
        "bounds": "bounds",
        "generals": "generals",
        "binaries": "binaries",
        "end": "end",
    }
    for ln in lines:
        key = ln.lower()
        if key in headers:
            section = headers[key]
            continue
        if section == "objective":
            body = ln.split(":", 1)[1] if ":" in ln else ln
            objective = parse_expr(body.split())
        elif section == "rows":
            name, body = ln.split(":", 1)
            toks = body.split()
            for op in ("<=", ">=", "="):
                if op in toks:
                    k = toks.index(op)
                    terms, const = parse_expr(toks[:k])
                    rhs = float(toks[k + 1]) - const
                    rows.append((name.strip(), terms, op, rhs))
                    break
            else:
                raise ValueError(f"row without relation: {ln}")
        elif section == "bounds":
            toks = ln.split()
            if len(toks) == 3 and toks[1] == "=":
                v = float(toks[2])
                explicit[toks[0]] = (v, v)
            elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                explicit[toks[2]] = (float(toks[0]), float(toks[4]))
            else:
                raise ValueError(f"unsupported bound: {ln}")
        elif section == "generals":
            integers.add(ln)
        elif section == "binaries":
            binaries.add(ln)

    order = []
    seen = set()

    def note(var):
        if var not in seen:
            seen.add(var)
            order.append(var)

    for var in objective[0]:
        note(var)
    for _, terms, _, _ in rows:
        for var in terms:
            note(var)
    for var in list(explicit) + sorted(integers) + sorted(binaries):
        note(var)

    idx = {v: k for k, v in enumerate(order)}
    nvar = len(order)

    c = np.zeros(nvar)
    for var, coef in objective[0].items():
        c[idx[var]] = coef

    data, ri, ci = [], [], []
    lo, hi = [], []
    for k, (_, terms, op, rhs) in enumerate(rows):
        for var, coef in terms.items():
            ri.append(k)
            ci.append(idx[var])
            data.append(coef)
        lo.append(rhs if op in ("=", ">=") else -np.inf)
        hi.append(rhs if op in ("=", "<=") else np.inf)
    a = csr_matrix((data, (ri, ci)), shape=(len(rows), nvar))

    lb = np.zeros(nvar)
    ub = np.full(nvar, np.inf)
    for var in binaries:
        ub[idx[var]] = 1.0
    for var, (vlo, vhi) in explicit.items():
        lb[idx[var]] = vlo
        ub[idx[var]] = vhi
    integrality = np.zeros(nvar)
    for var in integers | binaries:
        integrality[idx[var]] = 1

    res = milp(
        c=c,
        constraints=LinearConstraint(a, lo, hi),
        integrality=integrality,
        bounds=Bounds(lb, ub),
    )
    if res.status == 0:
        print(f"optimal {res.fun + objective[1]:.12g}")
        if show_vars:
            for var in order:
                v = res.x[idx[var]]
                if abs(v) > 1e-6:
                    print(f"  {var} = {v:.6g}")
        return 0
    if res.status == 2:
        print("infeasible")
        return 0
    print(f"status {res.status}")
    return 1


if __name__ == "__main__":
    sys.exit(main())
