"""Independent sympy count of the RTT coefficient relations.

R(z1,z2) L1(z1) L2(z2) = L2(z2) L1(z1) R(z1,z2) with R(z,z') = z R12 - z' R21^{-1},
R12 = sum_{i != j} E^{ii}(x)E^{jj} + q sum_i E^{ii}(x)E^{ii} + (q - q^-1) sum_{j>i} E^{ji}(x)E^{ij}.
Relations are counted up to scalar multiples, and the rank of their span is
reported as well.
"""
import argparse
import json
import sys

import sympy as sp


def relations(N, n):
    q = sp.Symbol("q")
    z1, z2 = sp.symbols("z1 z2")

    def E(i, j):
        m = sp.zeros(N, N)
        m[i, j] = 1
        return m

    R12 = sp.zeros(N * N, N * N)
    for i in range(N):
        for j in range(N):
            R12 += (q if i == j else 1) * sp.kronecker_product(E(i, i), E(j, j))
            if j > i:
                R12 += (q - 1 / q) * sp.kronecker_product(E(j, i), E(i, j))
    P = sum((sp.kronecker_product(E(i, j), E(j, i)) for i in range(N) for j in range(N)), sp.zeros(N * N, N * N))
    R21inv = (P * R12 * P).inv().applyfunc(sp.simplify)
    R = z1 * R12 - z2 * R21inv

    gens = {}

    def gen(name):
        if name not in gens:
            gens[name] = sp.Symbol(name, commutative=False)
        return gens[name]

    def L(z):
        m = sp.zeros(N, N)
        for i in range(N):
            for j in range(N):
                for a in range(n):
                    m[i, j] += gen("L%d_%d%d" % (a, i + 1, j + 1)) * z**a
                if i >= j and not (i == 0 and j == 0):
                    m[i, j] += gen("m%d%d" % (i + 1, j + 1)) * z**n
        return m

    A, B = L(z1), L(z2)
    # (L1 L2)_{(i,k),(j,l)} = A_ij B_kl, (L2 L1)_{(i,k),(j,l)} = B_kl A_ij
    L1L2 = sp.zeros(N * N, N * N)
    L2L1 = sp.zeros(N * N, N * N)
    for i in range(N):
        for k in range(N):
            for j in range(N):
                for l in range(N):
                    L1L2[i * N + k, j * N + l] = sp.expand(A[i, j] * B[k, l])
                    L2L1[i * N + k, j * N + l] = sp.expand(B[k, l] * A[i, j])
    D = (R * L1L2 - L2L1 * R).applyfunc(sp.expand)
    rels = []
    for e in D:
        if e == 0:
            continue
        by_power = {}
        for t in sp.Add.make_args(e):
            c, nc = t.args_cnc()
            cpart = sp.Mul(*c)
            a = sp.degree(cpart, z1)
            b = sp.degree(cpart, z2)
            rest = sp.simplify(cpart / (z1**a * z2**b))
            by_power[(a, b)] = by_power.get((a, b), 0) + rest * sp.Mul(*nc)
        for c in by_power.values():
            c = sp.expand(c)
            if c != 0:
                rels.append(c)
    # deduplicate up to scalar multiples: normalize each relation by the
    # coefficient of its first noncommutative monomial
    keys, vecs = set(), []
    mons = {}
    for c in rels:
        terms = {}
        for t in sp.Add.make_args(c):
            coeff, nc = t.args_cnc()
            word = sp.Mul(*nc)
            terms[word] = sp.together(terms.get(word, 0) + sp.Mul(*coeff))
        terms = {w: v for w, v in terms.items() if sp.simplify(v) != 0}
        first = sorted(terms, key=str)[0]
        norm = tuple(sorted((str(w), str(sp.simplify(v / terms[first]))) for w, v in terms.items()))
        if norm in keys:
            continue
        keys.add(norm)
        for w in terms:
            mons.setdefault(str(w), len(mons))
        vecs.append({str(w): v for w, v in terms.items()})
    M = sp.zeros(len(vecs), len(mons))
    for r, v in enumerate(vecs):
        for w, c in v.items():
            M[r, mons[w]] = c
    rank = M.subs(q, sp.Rational(9, 4)).rank()
    return {"N": N, "n": n, "generators": len(gens), "relations": len(vecs), "rank": rank}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--check", help="golden counts file; exit 1 on mismatch")
    args = ap.parse_args()
    got = relations(args.N, args.n)
    if args.check:
        with open(args.check) as f:
            golden = [r for r in json.load(f)["instances"] if r["N"] == args.N and r["n"] == args.n]
        ok = len(golden) == 1 and golden[0] == got
        print(json.dumps(got), "matches golden" if ok else "differs from golden")
        sys.exit(0 if ok else 1)
    print(json.dumps(got))


if __name__ == "__main__":
    main()
