#!/usr/bin/env python3
"""Generate the built-in genus-0 point-target correlator tables.

Non-permutative keys (n <= 5): moments <prod (L_i - 1)^k_i>_{0,n} from Riemann-Roch,
integrating prod (e^psi_i - 1)^k_i against the Todd class. Intersection numbers come from
the multinomial formula for psi monomials and K = sum psi_i - 2 delta.

Permutative keys (n <= 4): holomorphic Lefschetz on the fixed points of the relabeling
action; every r-cycle slot is probed on its Adams image.

Output: src/generated/point_tables.inc
"""

import cmath
import itertools
import math
import sys
from fractions import Fraction
from pathlib import Path

CONDUCTOR = 12


# --- Q(zeta_12) with basis 1, z, z^2, z^3 and z^4 = z^2 - 1 -----------------------------

def cyc_reduce(c):
    c = list(c) + [Fraction(0)] * max(0, 7 - len(c))
    for d in range(len(c) - 1, 3, -1):
        if c[d]:
            c[d - 2] += c[d]
            c[d - 4] -= c[d]
            c[d] = Fraction(0)
    return tuple(c[:4])


def cyc_mul(a, b):
    out = [Fraction(0)] * 7
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return cyc_reduce(out)


def cyc_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def cyc_root(e):
    e %= CONDUCTOR
    c = [Fraction(0)] * (e + 1)
    c[e] = Fraction(1)
    return cyc_reduce(c)


def cyc_inv(a):
    # Solve a * x = 1 via the multiplication matrix.
    cols = [cyc_mul(a, cyc_root(j)) for j in range(4)]
    m = [[cols[j][i] for j in range(4)] + [Fraction(int(i == 0))] for i in range(4)]
    for c in range(4):
        p = next(r for r in range(c, 4) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        for r in range(4):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][4] / m[i][i] for i in range(4))


def cyc_scale(a, s):
    return tuple(x * s for x in a)


def root_exponent(z):
    """Exponent e with z = zeta_12^e, for z a numerically known root of unity."""
    for e in range(CONDUCTOR):
        if abs(z - cmath.exp(2j * math.pi * e / CONDUCTOR)) < 1e-9:
            return e
    raise ValueError(f"{z} is not a 12th root of unity")


# --- non-permutative moments -----------------------------------------------------------

def psi_integral(n, ks):
    """int_{M_0,n} prod psi_i^k_i for sum k = n - 3."""
    if sum(ks) != n - 3:
        return Fraction(0)
    r = Fraction(math.factorial(n - 3))
    for k in ks:
        r /= math.factorial(k)
    return r


def canonical_dot_psi(n, i):
    """K . psi_i on M_0,n for n = 5 via K = sum psi - 2 delta."""
    assert n == 5
    psi_sum = sum(psi_integral(n, [int(j == i) + int(j == l) for j in range(n)]) for l in range(n))
    # psi_i restricted to D_{A|B} is nonzero only when i lies on the 4-pointed side:
    # the 2-element side A must avoid i.
    delta = sum(1 for a in itertools.combinations(range(n), 2) if i not in a)
    return psi_sum - 2 * delta


def moment(n, ks):
    """<prod (L_i - 1)^k_i>_{0,n} = int prod (e^psi_i - 1)^k_i Td."""
    if n == 3:
        return Fraction(int(sum(ks) == 0))
    if n == 4:
        # M_0,4 = P^1, psi_i of degree 1, Td = 1 + pt/1 (chi(O) = 1).
        s = sum(ks)
        return Fraction(1) if s == 0 else Fraction(int(s == 1))
    assert n == 5
    s = sum(ks)
    if s == 0:
        return Fraction(1)  # chi(O) of a rational surface
    if s == 1:
        i = ks.index(1)
        # int (psi_i + psi_i^2/2)(1 + c1/2) = -K.psi_i/2 + psi_i^2/2
        return -canonical_dot_psi(n, i) / 2 + psi_integral(n, [2 * int(j == i) for j in range(n)]) / 2
    if s == 2:
        return psi_integral(n, ks)
    return Fraction(0)


def nonperm_terms(n):
    terms = []
    for ks in itertools.product(range(n - 2), repeat=n):
        v = moment(n, list(ks))
        if v != 0:
            terms.append((cyc_scale(cyc_root(0), v), [(0, k) for k in ks]))
    return terms


# --- permutative keys by holomorphic Lefschetz -----------------------------------------

INF = None  # the point at infinity


def hom(z):
    return (1 + 0j, 0j) if z is INF else (complex(z), 1 + 0j)


def normalizer(a, b, c):
    """Mobius map sending a -> 0, b -> inf, c -> 1, acting on homogeneous pairs."""
    def form(p, z):
        return p[1] * z[0] - p[0] * z[1]
    A, B, C = hom(a), hom(b), hom(c)
    ka, kb = form(B, C), form(A, C)

    def m(z):
        Z = hom(z) if not isinstance(z, tuple) else z
        return (form(A, Z) * ka, form(B, Z) * kb)
    return m


def dehom(w):
    return INF if abs(w[1]) < 1e-14 * max(1.0, abs(w[0])) else w[0] / w[1]


def fixed_derivative(f, p, h=1e-6):
    """Derivative of f at a fixed point p, in the affine chart around p."""
    if p is INF:
        src = lambda t: (1 + 0j, t)
        tgt = lambda w: w[1] / w[0]
    else:
        src = lambda t: (p + t, 1 + 0j)
        tgt = lambda w: w[0] / w[1]
    return (tgt(f(src(h))) - tgt(f(src(-h)))) / (2 * h)


def mobius_fixed_points(f):
    """Fixed points of a Mobius map given on homogeneous pairs, recovered from three samples."""
    samples = [2 + 0j, 3 + 0j, 5 + 0j]
    images = [dehom(f(hom(z))) for z in samples]

    def matrix(a, b, c):
        m = normalizer(a, b, c)
        col0, col1 = m((1 + 0j, 0j)), m((0j, 1 + 0j))
        return [[col0[0], col1[0]], [col0[1], col1[1]]]
    src, dst = matrix(*samples), matrix(*images)
    det = dst[0][0] * dst[1][1] - dst[0][1] * dst[1][0]
    inv = [[dst[1][1] / det, -dst[0][1] / det], [-dst[1][0] / det, dst[0][0] / det]]
    (a, b), (c, d) = [[sum(inv[i][k] * src[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) < 1e-12 * scale:
        points = [INF]
        if abs(a - d) > 1e-12 * scale:
            points.append(b / (d - a))
    else:
        disc = cmath.sqrt((d - a) ** 2 + 4 * b * c)
        points = [((a - d) + disc) / (2 * c), ((a - d) - disc) / (2 * c)]
    if len(points) == 2 and points[0] is not INF and points[1] is not INF and abs(points[0] - points[1]) < 1e-9:
        raise ValueError("parabolic action: fixed point is not isolated")
    return [p if p is INF else snap(p) for p in points]


def snap(z):
    r = complex(round(z.real, 12), round(z.imag, 12))
    return r


def lefschetz_terms(cycles):
    """cycles: list of tuples of point indices; returns raw (normalized) probe terms."""
    n = sum(len(c) for c in cycles)
    h = {}
    for c in cycles:
        for i, p in enumerate(c):
            h[p] = c[(i + 1) % len(c)]
    norm = Fraction(1)
    for c in cycles:
        norm /= len(c)

    def slot_probes(eig_of_point):
        probes = []
        for c in cycles:
            probes.append((root_exponent(eig_of_point(c)), 0))
        return probes

    points3 = [0j, INF, 1 + 0j]
    terms = []
    if n == 3:
        x = points3
        # m(x_{h(i)}) = x_i
        m = normalizer(x[h[0]], x[h[1]], x[h[2]])

        def eig(c):
            return 1 / fixed_derivative(m, x[c[0]]) if len(c) == 1 else 1 + 0j
        terms.append((cyc_scale(cyc_root(0), norm), slot_probes(eig)))
        return terms
    assert n == 4

    def F(Lam):
        lam = dehom(Lam)
        x = points3 + [lam]
        m = normalizer(x[h[0]], x[h[1]], x[h[2]])
        return m(x[h[3]])

    fixed = mobius_fixed_points(F)
    for p in fixed:
        lam_p = 1 / fixed_derivative(F, p)
        e_p = root_exponent(lam_p)
        weight = cyc_scale(cyc_inv(cyc_add(cyc_root(0), cyc_scale(cyc_root(e_p), -1))), norm)
        nodal = p is INF or abs(p) < 1e-12 or abs(p - 1) < 1e-12
        if nodal:
            def eig(c):
                return 1 + 0j
        else:
            x = points3 + [p]
            m = normalizer(x[h[0]], x[h[1]], x[h[2]])

            def eig(c, m=m, x=x):
                return 1 / fixed_derivative(m, x[c[0]]) if len(c) == 1 else 1 + 0j
        terms.append((weight, slot_probes(eig)))
    return terms


def trivial_action_terms(cycles):
    """h acts trivially on the moduli space: the non-permutative functional on the cycle
    representatives, each r-cycle slot read through its Adams image."""
    n = sum(len(c) for c in cycles)
    norm = Fraction(1)
    for c in cycles:
        norm /= len(c)
    reps = [c[0] for c in cycles]
    terms = []
    for ks in itertools.product(range(n - 2), repeat=len(cycles)):
        full = [0] * n
        for r, k in zip(reps, ks):
            full[r] = k
        v = moment(n, full)
        if v != 0:
            terms.append((cyc_scale(cyc_root(0), v * norm), [(0, k) for k in ks]))
    return terms


PERM_TYPES = {
    # name: (cycles ordered by length, trivial action?)
    "1_1+1_2": ([(2,), (0, 1)], False),
    "1_3": ([(0, 1, 2)], False),
    "2_1+1_2": ([(0,), (1,), (2, 3)], False),
    "1_1+1_3": ([(3,), (0, 1, 2)], False),
    "2_2": ([(0, 1), (2, 3)], True),
    "1_4": ([(0, 1, 2, 3)], False),
}


def emit(out):
    lines = [
        "// Generated by tools/gen_point_tables.py. Do not edit.",
        "// Raw genus-0 point-target correlators as probe terms: weight in Q(zeta_12)",
        "// (coefficients of 1, z, z^2, z^3) and per-slot (root exponent, Taylor order).",
        "",
        "// clang-format off",
        "inline const std::vector<GeneratedKey> kGeneratedPointKeys = {",
    ]

    def fmt_terms(terms):
        parts = []
        for w, probes in terms:
            ws = ", ".join(f'"{x}"' for x in w)
            ps = ", ".join(f"{{{e}, {k}}}" for e, k in probes)
            parts.append(f"        {{{{{ws}}}, {{{ps}}}}},")
        return parts

    for n in (3, 4, 5):
        lines.append(f'    {{"{n}_1", {{')
        lines += fmt_terms(nonperm_terms(n))
        lines.append("    }},")
    for name, (cycles, trivial) in PERM_TYPES.items():
        terms = trivial_action_terms(cycles) if trivial else lefschetz_terms(cycles)
        lines.append(f'    {{"{name}", {{')
        lines += fmt_terms(terms)
        lines.append("    }},")
    lines.append("};")
    lines.append("// clang-format on")
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    root = Path(__file__).resolve().parent.parent
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "src" / "generated" / "point_tables.inc"
    target.parent.mkdir(parents=True, exist_ok=True)
    emit(target)
    print(f"wrote {target}")
