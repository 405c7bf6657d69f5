#!/usr/bin/env python3
"""Independent reference implementation of the grid, sampling and discrete
energy rules. Run it to regenerate the frozen constants quoted in the C++
unit tests; the C++ library must reproduce these numbers to ~1e-12."""
import numpy as np

INTERIOR, BOUNDARY, EXTERIOR = 0, 1, 2


def build_disc(n):
    h = 2.0 / (n - 4)
    c = -1.0 - 1.5 * h + h * np.arange(n)
    X, Y = np.meshgrid(c, c, indexing="xy")  # X[j,i] = cx(i), Y[j,i] = cy(j)
    r = np.hypot(X, Y)
    interior = r < 1.0 - h / 2.0
    cls = np.full((n, n), EXTERIOR, dtype=int)
    cls[interior] = INTERIOR
    nb = np.zeros_like(interior)
    nb[:, :-1] |= interior[:, 1:]
    nb[:, 1:] |= interior[:, :-1]
    nb[:-1, :] |= interior[1:, :]
    nb[1:, :] |= interior[:-1, :]
    cls[nb & ~interior] = BOUNDARY
    return h, X, Y, cls


def psi(theta):
    t = np.mod(theta, 2 * np.pi)
    out = []
    for shift in (0.0, 2 * np.pi / 3, 4 * np.pi / 3):
        s = np.mod(t - shift, 2 * np.pi)
        out.append(np.where(s <= 4 * np.pi / 3, np.abs(np.sin(0.75 * s)), 0.0))
    return out


def exact_field(X, Y, cls):
    r = np.hypot(X, Y)
    th = np.arctan2(Y, X)
    p = psi(th)
    fs = [np.where(cls != EXTERIOR, r ** 0.75 * pi, 0.0) for pi in p]
    return fs


def dirichlet(fs, cls):
    # edges with no EXTERIOR endpoint, squared forward differences, h^2 cancels
    tot = 0.0
    ok = cls != EXTERIOR
    for u in fs:
        dx = (u[:, 1:] - u[:, :-1]) ** 2
        dy = (u[1:, :] - u[:-1, :]) ** 2
        tot += dx[ok[:, 1:] & ok[:, :-1]].sum()
        tot += dy[ok[1:, :] & ok[:-1, :]].sum()
    return tot


def penalty(fs, cls, h, beta):
    prod = (fs[0] ** 2) * (fs[1] ** 2) * (fs[2] ** 2)
    return beta * h * h * prod[cls == INTERIOR].sum()


def main():
    np.set_printoptions(precision=17)
    for n in (16, 64, 128, 256):
        h, X, Y, cls = build_disc(n)
        ni = int((cls == INTERIOR).sum())
        nb = int((cls == BOUNDARY).sum())
        print(f"disc n={n}: h={h!r} interior={ni} boundary={nb} "
              f"pi/h^2={np.pi / h ** 2:.6f} ratio={ni * h * h / np.pi:.6f}")
    for n in (64, 256):
        h, X, Y, cls = build_disc(n)
        fs = exact_field(X, Y, cls)
        d = dirichlet(fs, cls)
        print(f"exact minimizer dirichlet n={n}: {d!r} (3pi/2={1.5 * np.pi!r}) "
              f"rel={(d - 1.5 * np.pi) / (1.5 * np.pi):+.5f}")
    # tiny grid frozen numbers for the C++ tests
    n = 8
    h, X, Y, cls = build_disc(n)
    print(f"disc n=8: h={h!r}")
    print("classes row-major (j then i):")
    for j in range(n):
        print("  ", "".join(str(cls[j, i]) for i in range(n)))
    fs = [np.where(cls != EXTERIOR, 1.0 + 2.0 * X + 3.0 * Y, 0.0),
          np.zeros((n, n)), np.zeros((n, n))]
    print(f"dirichlet(1+2x+3y, 0, 0) on n=8 disc: {dirichlet(fs, cls)!r}")
    g = np.where(cls != EXTERIOR, 0.5 + X * Y, 0.0)
    fs3 = [g, g, g]
    print(f"penalty(g,g,g) beta=2 n=8: {penalty(fs3, cls, h, 2.0)!r}")
    print(f"dirichlet(g,g,g) n=8: {dirichlet(fs3, cls)!r}")
    # gradient entry at one interior cell, component 0
    i, j = 4, 3
    assert cls[j, i] == INTERIOR
    beta = 2.0
    u = fs3[0]
    nbsum = u[j, i - 1] + u[j, i + 1] + u[j - 1, i] + u[j + 1, i]
    grad = 2.0 * (4.0 * u[j, i] - nbsum) + \
        2.0 * beta * h * h * u[j, i] * (fs3[1][j, i] ** 2) * (fs3[2][j, i] ** 2)
    print(f"gradient comp0 cell(i=4,j=3) beta=2: {grad!r}")


if __name__ == "__main__":
    main()
