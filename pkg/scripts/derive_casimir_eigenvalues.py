#!/usr/bin/env python3
"""Derive closed-form Casimir eigenvalues on the power function phi_ell.

The degree-(j+1) invariant operators are the trace words

    C^(j) = (n-j-1)!/n! * sum_{i_1..i_{j+1}} D_{i_1 i_2} D_{i_2 i_3} ... D_{i_{j+1} i_1}

acting by right-invariant derivatives on SL(n,R).  phi_ell restricted to the
diagonal torus is prod_i d_i^(mu_i) with mu_i = ell_i + (n-2i+1)/2, it is
left-N-invariant and right-SO(n)-invariant.  Writing gl(n) = n+ (+) h (+) so(n)
and straightening every word into the PBW order [n+][h][so(n)], a word
contributes to the eigenvalue iff its n+ and so(n) parts are empty, in which
case it contributes the product of the diagonal weights mu(H).

Run:  python scripts/derive_casimir_eigenvalues.py
Output: the eigenvalue polynomials for (n=2, j=1), (n=3, j=1), (n=3, j=2),
expressed in the entries of ell; the (n=3, j=2) result is hard-coded in
maass_certify.geometry and cross-checked there by a finite-difference test.
"""

from fractions import Fraction
from itertools import product
import math

import sympy as sp


def basis_symbols(n):
    """Basis of gl(n) split as uppers E_ij (i<j), diagonals E_ii, rotations
    F_ij = E_ij - E_ji (i<j).  Returns (symbols, matrices, class ranks)."""
    syms = []
    mats = []
    kinds = []
    for i in range(n):
        for j in range(i + 1, n):
            syms.append(("U", i, j))
            m = sp.zeros(n)
            m[i, j] = 1
            mats.append(m)
            kinds.append(0)
    for i in range(n):
        syms.append(("H", i, i))
        m = sp.zeros(n)
        m[i, i] = 1
        mats.append(m)
        kinds.append(1)
    for i in range(n):
        for j in range(i + 1, n):
            syms.append(("K", i, j))
            m = sp.zeros(n)
            m[i, j] = 1
            m[j, i] = -1
            mats.append(m)
            kinds.append(2)
    return syms, mats, kinds


def decompose(mat, n):
    """Coefficients of a gl(n) matrix in the U/H/K basis above."""
    coeffs = {}
    for i in range(n):
        for j in range(i + 1, n):
            ck = -mat[j, i]
            cu = mat[i, j] + mat[j, i]
            if ck:
                coeffs[("K", i, j)] = ck
            if cu:
                coeffs[("U", i, j)] = cu
    for i in range(n):
        if mat[i, i]:
            coeffs[("H", i, i)] = mat[i, i]
    return coeffs


def normal_order(words, n):
    """Straighten a dict {word-tuple: coeff} into PBW order U < H < K."""
    syms, mats, kinds = basis_symbols(n)
    mat_of = dict(zip(syms, mats))
    rank = {}
    for s, k in zip(syms, kinds):
        rank[s] = (k, s[1], s[2])
    done = {}
    todo = dict(words)
    while todo:
        word, coeff = todo.popitem()
        if coeff == 0:
            continue
        pos = None
        for a in range(len(word) - 1):
            if rank[word[a]] > rank[word[a + 1]]:
                pos = a
                break
        if pos is None:
            done[word] = done.get(word, 0) + coeff
            continue
        x, y = word[pos], word[pos + 1]
        swapped = word[:pos] + (y, x) + word[pos + 2:]
        todo[swapped] = todo.get(swapped, 0) + coeff
        comm = mat_of[x] * mat_of[y] - mat_of[y] * mat_of[x]
        for sym, c in decompose(comm, n).items():
            w2 = word[:pos] + (sym,) + word[pos + 2:]
            todo[w2] = todo.get(w2, 0) + coeff * c
    return done


def casimir_eigenvalue(n, j):
    """Eigenvalue of C^(j) on phi_ell as a sympy expression in ell_1..ell_n."""
    ell = sp.symbols(f"l1:{n + 1}")
    mu = [ell[i] + sp.Rational(n - 2 * i - 1, 2) for i in range(n)]

    words = {}
    for idx in product(range(n), repeat=j + 1):
        word = []
        for a in range(j + 1):
            r, c = idx[a], idx[(a + 1) % (j + 1)]
            word.append((r, c))
        words[tuple(word)] = words.get(tuple(word), 0) + 1

    # rewrite each E_rc word over the U/H/K basis (lower E_cr = U_rc... )
    expanded = {}
    for word, coeff in words.items():
        parts = [[]]
        coefs = [coeff]
        for (r, c) in word:
            if r == c:
                for p in parts:
                    p.append(("H", r, r))
            elif r < c:
                for p in parts:
                    p.append(("U", r, c))
            else:
                # E_rc (lower) = E_cr - F_cr
                new_parts, new_coefs = [], []
                for p, cf in zip(parts, coefs):
                    new_parts.append(p + [("U", c, r)])
                    new_coefs.append(cf)
                    new_parts.append(p + [("K", c, r)])
                    new_coefs.append(-cf)
                parts, coefs = new_parts, new_coefs
        for p, cf in zip(parts, coefs):
            t = tuple(p)
            expanded[t] = expanded.get(t, 0) + cf

    ordered = normal_order(expanded, n)

    total = sp.Integer(0)
    for word, coeff in ordered.items():
        if any(s[0] != "H" for s in word):
            continue
        term = sp.Integer(coeff)
        for s in word:
            term *= mu[s[1]]
        total += term
    pref = Fraction(math.factorial(n - j - 1), math.factorial(n))
    total = sp.Rational(pref.numerator, pref.denominator) * total
    total = sp.expand(total)
    # impose ell_n = -(ell_1+...+ell_{n-1}) only for display of checks
    return ell, sp.simplify(total)


def main():
    for (n, j) in [(2, 1), (3, 1), (3, 2)]:
        ell, val = casimir_eigenvalue(n, j)
        print(f"n={n} j={j}:")
        print("  lambda^(j)(ell) =", sp.nsimplify(val))
        # check j=1 against -( (n+1)/12 - sum ell^2 / (n(n-1)) )
        if j == 1:
            lap = sp.Rational(n + 1, 12) - sum(e**2 for e in ell) / (n * (n - 1))
            diff = sp.simplify(val + lap)
            zs = {e: 0 for e in ell}
            print("  check vs Laplace formula (should be 0):",
                  sp.simplify(diff.subs(ell[n - 1], -sum(ell[:n - 1]))))
        if (n, j) == (3, 2):
            rho = [sp.Rational(n - 2 * i - 1, 2) for i in range(n)]
            at_rho = val.subs({ell[i]: -rho[i] for i in range(n)})
            print("  value at ell = -rho (should be 0):", sp.simplify(at_rho))
            poly = sp.Poly(val, *ell)
            print("  monomials:", poly.as_dict())


if __name__ == "__main__":
    main()
