"""Independent sympy computation of the r-matrix Poisson brackets.

Writes {"N":..,"n":..,"brackets": {"gen_a,gen_b": "expr"}} for every ordered
pair of shape generators with a nonzero bracket.  With --check PATH the
result is compared against an existing file instead.
"""
import argparse
import json
import sys

import sympy as sp


def shape(N, n):
    gens = []
    for a in range(n + 1):
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                if i == j or (i < j and a <= n - 1) or (i > j and a >= 1):
                    gens.append((a, i, j))
    return gens


def brackets(N, n):
    z, zp = sp.symbols("z zp")
    gens = shape(N, n)
    sym = {g: sp.Symbol("l%d_%d%d" % g) for g in gens}

    def lax(x):
        m = sp.zeros(N, N)
        for (a, i, j), s in sym.items():
            m[i - 1, j - 1] += s * x**a
        return m

    def E(i, j):
        m = sp.zeros(N, N)
        m[i, j] = 1
        return m

    # numerator of r(z,z') times (z - z')
    num = sp.zeros(N * N, N * N)
    for i in range(N):
        num += (z + zp) / 2 * sp.kronecker_product(E(i, i), E(i, i))
        for j in range(N):
            if j > i:
                num += z * sp.kronecker_product(E(j, i), E(i, j))
            elif j < i:
                num += zp * sp.kronecker_product(E(j, i), E(i, j))
    LL = sp.kronecker_product(lax(z), lax(zp))
    C = (num * LL - LL * num).applyfunc(sp.expand)
    out = {}
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    e = C[i * N + k, j * N + l]
                    if e == 0:
                        continue
                    q, r = sp.div(sp.Poly(e, z, zp), sp.Poly(z - zp, z, zp))
                    assert r.is_zero, "not divisible by z - zp"
                    for (pa, pb), c in q.terms():
                        g, h = (pa, i + 1, j + 1), (pb, k + 1, l + 1)
                        assert g in sym and h in sym, "bracket leaves the shape"
                        key = "%s,%s" % (sym[g], sym[h])
                        out[key] = sp.expand(out.get(key, 0) + c)
    return {k: str(v) for k, v in sorted(out.items()) if v != 0}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--out")
    ap.add_argument("--check")
    ap.add_argument("--compare-cli", help="qsep executable; compare its 'classical table' output")
    args = ap.parse_args()
    doc = {"N": args.N, "n": args.n, "brackets": brackets(args.N, args.n)}
    if args.compare_cli:
        import subprocess
        out = subprocess.run([args.compare_cli, "classical", "table", "--N", str(args.N), "--n", str(args.n)],
                             check=True, capture_output=True, text=True).stdout
        theirs = json.loads(out)[0]["brackets"]
        mine = doc["brackets"]
        bad = [k for k in set(mine) | set(theirs)
               if sp.simplify(sp.sympify(mine.get(k, "0")) - sp.sympify(theirs.get(k, "0"))) != 0]
        print("%d brackets compared, %d differ %s" % (len(set(mine) | set(theirs)), len(bad), bad[:5]))
        sys.exit(1 if bad else 0)
    if args.check:
        with open(args.check) as f:
            old = json.load(f)
        same = old["brackets"].keys() == doc["brackets"].keys() and all(
            sp.simplify(sp.sympify(old["brackets"][k]) - sp.sympify(v)) == 0 for k, v in doc["brackets"].items())
        print("golden matches" if same else "golden differs")
        sys.exit(0 if same else 1)
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    main()
