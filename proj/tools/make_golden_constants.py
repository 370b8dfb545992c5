#!/usr/bin/env python3
"""Reference evaluation of the level constants at high precision.

Evaluates every constant printed by `dmt constants <alpha> <beta>` with the
decimal module at 50+ significant digits and writes a golden file used by the
acceptance suite. The minimizing delta of C2 is obtained from the exact
first-order condition (a quadratic in sqrt(delta)), so it is precise to the
working precision rather than to a search tolerance.

Usage: make_golden_constants.py <alpha> <beta> [out_path]
"""

import sys
from decimal import Decimal, getcontext

getcontext().prec = 60


def x_of(gamma: Decimal) -> Decimal:
    return -gamma.ln()


def c_alpha_of(alpha: Decimal) -> Decimal:
    x = x_of(alpha)
    return 1 + 2 * (2 * x.sqrt() + x)


def c1_constant(alpha: Decimal, beta: Decimal) -> Decimal:
    xa2 = x_of(alpha / 2)
    xb = x_of(beta)
    inner = 2 * (xa2 + xb) + Decimal(2).sqrt() * (xa2.sqrt() + xb.sqrt()).sqrt()
    return (2 * xb).sqrt() + inner.sqrt()


def c2_of(alpha: Decimal, beta: Decimal, delta: Decimal) -> Decimal:
    x = x_of(beta / 2)
    numer = c_alpha_of(alpha) + 2 * x.sqrt() * (1 + 1 / delta.sqrt())
    denom = 1 - 2 * delta.sqrt() * x.sqrt()
    return numer / denom


def c2_minimizer(alpha: Decimal, beta: Decimal) -> Decimal:
    # With u = sqrt(delta), A = c_alpha, B = 2 sqrt(x_{beta/2}), s = sqrt(x_{beta/2}):
    # d/du [(A + B + B/u) / (1 - 2 s u)] = 0
    # <=> 2 s (A + B) u^2 + 4 s B u - B = 0.
    x = x_of(beta / 2)
    s = x.sqrt()
    a_const = c_alpha_of(alpha)
    b_const = 2 * s
    qa = 2 * s * (a_const + b_const)
    qb = 4 * s * b_const
    qc = -b_const
    u = (-qb + (qb * qb - 4 * qa * qc).sqrt()) / (2 * qa)
    return u * u


def main() -> int:
    if len(sys.argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    alpha = Decimal(sys.argv[1])
    beta = Decimal(sys.argv[2])
    out_path = sys.argv[3] if len(sys.argv) > 3 else None

    delta = c2_minimizer(alpha, beta)
    lines = [
        ("alpha", alpha),
        ("beta", beta),
        ("x_alpha", x_of(alpha)),
        ("x_beta", x_of(beta)),
        ("c_alpha", c_alpha_of(alpha)),
        ("C1", c1_constant(alpha, beta)),
        ("C_ab", 1 + 4 * (1 - alpha - beta) ** 2),
    ]
    if alpha + beta < 1:
        c_ab = 1 + 4 * (1 - alpha - beta) ** 2
        lines.append(("c1", (2 * c_ab.ln()).sqrt().sqrt()))
    else:
        lines.append(("c1", "absent"))
    lines.append(("delta", delta))
    lines.append(("C2", c2_of(alpha, beta, delta)))

    text = "".join(f"{name} = {value}\n" for name, value in lines)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
