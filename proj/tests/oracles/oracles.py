"""Independent reference values frozen into the unit tests.

Closed forms are evaluated in 40-digit arithmetic with mpmath; the optimal
detunings are found with a generic root finder on the two conditions as
written, and the reduced-model numbers come from a plain numpy/scipy build of
the full model. Run with python3; prints C++-ready literals.
"""
import mpmath as mp
import numpy as np
import scipy.linalg as sla

mp.mp.dps = 40


def coefficients(g, k, ga, D, d, J, Om):
    g, k, ga, D, d, J, Om = map(mp.mpf, (g, k, ga, D, d, J, Om))
    dp = mp.mpc(d, -k / 2)
    Dp = mp.mpc(D, -ga / 2)
    R1 = -(dp - J) * (dp + J) / (dp * g**2 - Dp * (dp - J) * (dp + J))
    den = (g**2 - Dp * (dp - J)) * (g**2 - Dp * (dp + J))
    R2 = (-g**2 * J - dp * g**2 + Dp * (dp - J) * (dp + J)) / den
    R3 = (g**2 * J - dp * g**2 + Dp * (dp - J) * (dp + J)) / den
    A = d * g**2 / D - (d**2 - J**2)
    B = k * (d - g**2 / (2 * D)) + ga * (d**2 - J**2) / (2 * D)
    C1 = g**2 / D - (d - J)
    D1 = k / 2 + ga * (d - J) / (2 * D)
    C2 = g**2 / D - (d + J)
    D2 = k / 2 + ga * (d + J) / (2 * D)
    ge = g * Om / D
    rates = dict(
        k11=(d + J) ** 2 * ge**2 * k / 4 / (A**2 + B**2),
        k12=ge**2 * k / 4 / (C1**2 + D1**2),
        k21=(d - J) ** 2 * ge**2 * k / 4 / (A**2 + B**2),
        k22=ge**2 * k / 4 / (C2**2 + D2**2),
    )
    return dict(ge=ge, R1=R1, R2=R2, R3=R3, A=A, B=B, C1=C1, D1=D1, C2=C2, D2=D2), rates


def gamma_eff(g, k, ga, D, d, J, Om):
    g, k, ga, D, d, J, Om = map(mp.mpf, (g, k, ga, D, d, J, Om))
    br = k * (D * d - g**2 / 2) + ga * (d * d - J * J) / 2
    return (ga * Om**2 / 2) * ((g**2 * J) ** 2 + br**2) / ((g**2 - D * d) ** 2 * (g**4 + k**2 * D**2))


def optimal(g, k, ga, J):
    g, k, ga, J = map(mp.mpf, (g, k, ga, J))
    f = lambda D, d: [d * g**2 - D * (d**2 - J**2), k * (D * d - g**2 / 2) - ga * (d**2 - J**2) / 2]
    return mp.findroot(f, (mp.mpf(1), J + 1))


def fmt(x):
    return mp.nstr(x, 17)


print("// coefficient set g=1 kappa=0.1 gamma=0.05 Delta=5 delta=0.3 J=0.2 Omega=0.05")
c, r = coefficients(1, 0.1, 0.05, 5, 0.3, 0.2, 0.05)
for key in ("R1", "R2", "R3"):
    print(f"{key} = ({fmt(c[key].real)}, {fmt(c[key].imag)})")
for key in ("ge", "A", "B", "C1", "D1", "C2", "D2"):
    print(f"{key} = {fmt(c[key])}")
for key, v in r.items():
    print(f"{key} = {fmt(v)}")
print("gamma_eff =", fmt(gamma_eff(1, 0.1, 0.05, 5, 0.3, 0.2, 0.05)))

print("// C=200 kappa=gamma/2, J=5")
ga = 1 / mp.sqrt(200 * mp.mpf(0.5))
k = ga / 2
D, d = optimal(1, k, ga, 5)
print("Delta =", fmt(D), " delta =", fmt(d))
c, r = coefficients(1, k, ga, D, d, 5, 0.05)
geff = gamma_eff(1, k, ga, D, d, 5, 0.05)
print("gamma_eff =", fmt(geff))
for key, v in r.items():
    print(f"{key} = {fmt(v)}")
inf_S = (3 * c["ge"] ** 2 * k / (c["C1"] ** 2 + c["D1"] ** 2) + 9 * geff) / (
    (d + 5) ** 2 * c["ge"] ** 2 * k / (c["A"] ** 2 + c["B"] ** 2))
print("rate infidelity S =", fmt(inf_S))


# Full model in numpy, reduced model by second-order perturbation theory, and
# the closed-form reduced model's steady state.
def ann(n):
    return np.diag(np.sqrt(np.arange(1, n + 1)), 1).astype(complex)


def aop(i, j):
    m = np.zeros((3, 3), complex)
    m[i, j] = 1
    return m


def kr(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def bell():
    def ab(a, b):
        v = np.zeros(9, complex)
        v[3 * a + b] = 1
        return v
    s2 = np.sqrt(2)
    return np.array([ab(0, 0), (ab(0, 1) - ab(1, 0)) / s2, (ab(0, 1) + ab(1, 0)) / s2, ab(1, 1)]).T


def numerical_rates(g, k, ga, Om, D, d, J, n=2):
    I3, Ic, a = np.eye(3), np.eye(n + 1), ann(n)
    a1, a2 = kr(I3, I3, a, Ic), kr(I3, I3, Ic, a)
    s = lambda i, j, at: kr(aop(i, j), I3, Ic, Ic) if at == 1 else kr(I3, aop(i, j), Ic, Ic)
    H0 = d * (a1.conj().T @ a1 + a2.conj().T @ a2) + D * (s(2, 2, 1) + s(2, 2, 2))
    X = g * (s(2, 1, 1) @ a1 + s(2, 1, 2) @ a2)
    H0 = H0 + X + X.conj().T + J * (a1.conj().T @ a2 + a2.conj().T @ a1)
    Vp = Om / 2 * (s(2, 0, 1) + s(2, 0, 2))
    c1, c2 = (a1 - a2) / np.sqrt(2), (a1 + a2) / np.sqrt(2)
    Ls = [np.sqrt(k) * c1, np.sqrt(k) * c2, np.sqrt(ga / 2) * s(0, 2, 1), np.sqrt(ga / 2) * s(0, 2, 2),
          np.sqrt(ga / 2) * s(1, 2, 1), np.sqrt(ga / 2) * s(1, 2, 2)]
    nc = (n + 1) ** 2
    dim = 9 * nc
    B = np.kron(bell(), np.eye(nc)[:, :1])
    exc = [i for i in range(dim) if i // (3 * nc) == 2 or (i // nc) % 3 == 2 or i % nc != 0]
    LdL = sum(L.conj().T @ L for L in Ls)
    Hinv = np.zeros((dim, dim), complex)
    Hinv[np.ix_(exc, exc)] = np.linalg.inv((H0 - 0.5j * LdL)[np.ix_(exc, exc)])
    Le = [B.conj().T @ L @ Hinv @ Vp @ B for L in Ls]
    return dict(k11=abs(Le[0][1, 0]) ** 2, k12=abs(Le[0][3, 1]) ** 2, k21=abs(Le[1][2, 0]) ** 2,
                k22=abs(Le[1][3, 2]) ** 2, geff=16 * abs(Le[2][2, 1]) ** 2)


def closed_steady_state_S(g, k, ga, Om, OmM, D, d, J):
    c, r = coefficients(g, k, ga, D, d, J, Om)
    c = {key: complex(v) for key, v in c.items()}
    r = {key: float(v) for key, v in r.items()}
    E = lambda i, j: np.eye(4)[:, [i]] @ np.eye(4)[[j], :]
    # microwave block leaving |S> dark: couples |00> and |11> to |T>
    m = OmM / 2 * (kr(aop(1, 0), np.eye(3)) * -np.exp(1j * np.pi) + kr(np.eye(3), aop(1, 0)))
    hg = bell().conj().T @ (m + m.conj().T) @ bell()
    h = hg - (Om**2 * c["R3"] / 4).real * E(1, 1) - (Om**2 * c["R2"] / 4).real * E(2, 2) \
        - (Om**2 * c["R1"] / 2).real * E(0, 0)
    Lk1 = np.sqrt(r["k11"]) * E(1, 0) + np.sqrt(r["k12"]) * E(3, 1)
    Lk2 = np.sqrt(r["k21"]) * E(2, 0) + np.sqrt(r["k22"]) * E(3, 2)
    R1, R2, R3 = abs(c["R1"]), abs(c["R2"]), abs(c["R3"])
    Lg1 = np.sqrt(ga / 2) * (Om / 2 * R1 * E(0, 0) + Om / 4 * R2 * (E(2, 2) + E(1, 2)) + Om / 4 * R3 * (E(2, 1) + E(1, 1)))
    q = Om / (2 * np.sqrt(2))
    Lg3 = np.sqrt(ga / 2) * (q * R1 * (E(2, 0) + E(1, 0)) + q * (R2 * E(3, 2) + R3 * E(3, 1)))
    Ls = [Lk1, Lk2, Lg1, Lg1, Lg3, Lg3]
    I = np.eye(4)
    L = -1j * (np.kron(h, I) - np.kron(I, h.T))
    for Lk in Ls:
        LdL = Lk.conj().T @ Lk
        L += np.kron(Lk, Lk.conj()) - 0.5 * np.kron(LdL, I) - 0.5 * np.kron(I, LdL.T)
    v = sla.null_space(L)[:, 0].reshape(4, 4)
    v = v / np.trace(v)
    return v[1, 1].real


Dn, dn = float(D), float(d)
kn, gan = float(k), float(ga)
num = numerical_rates(1, kn, gan, 0.05, Dn, dn, 5.0)
for key, v in num.items():
    print(f"numerical {key} = {v:.17g}")
print(f"closed-form steady-state F_S = {closed_steady_state_S(1, kn, gan, 0.05, 0.02, Dn, dn, 5.0):.17g}")
