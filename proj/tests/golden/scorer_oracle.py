"""Regenerates scorer_oracle.json with 50-digit mpmath arithmetic.

    python3 tests/golden/scorer_oracle.py > tests/golden/scorer_oracle.json
"""

import json
import random

import mpmath

mpmath.mp.dps = 50


def case(logits, rank):
    xs = [mpmath.mpf(x) for x in logits]
    m = max(xs)
    ex = [mpmath.e ** (x - m) for x in xs]
    z = mpmath.fsum(ex)
    p = [e / z for e in ex]
    out = {"logits": logits, "sampled_rank": rank,
           "token_likelihood": float(p[rank]), "max_likelihood": float(p[0]), "entropy": {}}
    for k in (1, 2, 5, 10, 24):
        zk = mpmath.fsum(ex[:k])
        h = -mpmath.fsum((e / zk) * mpmath.log(e / zk) for e in ex[:k])
        out["entropy"][str(k)] = float(h)
    return out


def main():
    rng = random.Random(20240917)
    cases = []
    cases.append(case([0.0] * 24, 0))
    cases.append(case([30.0] + [0.0] * 23, 0))
    cases.append(case([float(24 - i) for i in range(24)], 3))
    cases.append(case([1000.0 - 0.5 * i for i in range(24)], 23))
    for _ in range(12):
        spread = rng.choice([0.5, 3.0, 10.0, 40.0])
        logits = sorted((round(rng.gauss(0.0, spread), 6) for _ in range(24)), reverse=True)
        cases.append(case(logits, rng.randrange(24)))
    print(json.dumps(cases, indent=1))


if __name__ == "__main__":
    main()
