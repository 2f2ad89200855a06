"""High-precision reference values for the channel and SINR unit tests.

Independent of the Rust implementation: evaluates the near-field channel
formula directly in 50-digit arithmetic and prints values that are frozen
into the Rust test suite.
"""
from mpmath import mp, mpf, sqrt, pi, exp, mpc, fabs

mp.dps = 50
c = mpf(3) * 10**8
fc = mpf(28) * 10**9
neff = mpf("1.4")
lam = c / fc
lamg = lam / neff
eta = c / (4 * pi * fc)
d = mpf(3)


def h(pa_x, feed_x, rx):
    r = sqrt((rx[0] - pa_x) ** 2 + (rx[1]) ** 2 + d**2)
    return eta / r * exp(mpc(0, -2) * pi * r / lam) * exp(mpc(0, -2) * pi * fabs(feed_x - pa_x) / lamg)


print("distance (0,0,3)-(10,6,0):", sqrt(mpf(145)))
print("eta:", eta)
print("eta/3:", eta / 3)
print("(eta/3)^2:", (eta / 3) ** 2)

layout = [mpf("1.25"), mpf("3.5"), mpf("6.125"), mpf("8.75")]
rx = (mpf("4.2"), mpf("2.7"))
s = sum(h(x, 0, rx) for x in layout)
print("aggregate re:", mp.nstr(s.real, 30))
print("aggregate im:", mp.nstr(s.imag, 30))

# two-IR SINR oracle
irs = [(mpf("2.0"), mpf("1.0")), (mpf("7.5"), mpf("4.0"))]
g = [abs(sum(h(x, 0, ir) for x in layout)) ** 2 for ir in irs]
print("ir gains:", [mp.nstr(v, 30) for v in g])
p = [mpf("1.75"), mpf("0.5")]
sigma2 = mpf(10) ** -12
order = sorted(range(2), key=lambda i: (g[i], i))
for k, u in enumerate(order):
    interf = sum(p[order[l]] for l in range(k + 1, 2))
    sinr = p[u] * g[u] / (g[u] * interf + sigma2)
    print("order pos", k, "ir", u, "sinr", mp.nstr(sinr, 30))
