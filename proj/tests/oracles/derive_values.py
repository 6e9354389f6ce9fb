"""Independent high-precision evaluation of the closed forms used as frozen
expected values in the C++ unit tests. Run with `python3 derive_values.py`."""
from itertools import combinations

import mpmath as mp

mp.mp.dps = 40


def beta(n, k, delta):
    return mp.sqrt(mp.log(mp.pi ** 2 * k * n ** 2 / (3 * delta)) / (2 * n))


def scan_t0(c):
    t = 3
    while t / mp.log(t) < c:
        t += 1
    return t


print("beta(1;K=2,d=.1)", beta(1, 2, mp.mpf("0.1")))
print("beta(1;K=20,d=.1)", beta(1, 20, mp.mpf("0.1")))
print("beta(100;K=2,d=.1)", beta(100, 2, mp.mpf("0.1")))
print("ucb(1,100,1000,4)", 1 + mp.sqrt(4 * mp.log(1000) / 200))
print("ucb raw(4.9,1,10,10)", mp.mpf("4.9") + mp.sqrt(10 * mp.log(10) / 2))

# homogeneous CO-UCB attack fixture
b1 = beta(1, 2, mp.mpf("0.1"))
req = mp.mpf("0.5") - 2 * b1 - mp.mpf("0.1")
print("homo required mean", req)
print("homo gamma", 1 * 1 + 1 - 2 * req)

# oracle attack fixture
b4 = beta(4, 3, mp.mpf("0.1"))
bounds = [mp.mpf(m) - 2 * b4 - mp.mpf("0.1") for m in ("0.8", "0.6")]
print("beta(4;K=3)", b4, "min bound", min(bounds))
print("oa gamma", mp.mpf("0.9") * 2 + mp.mpf("0.7") - 3 * min(bounds))

# LTA threshold
for k, d, g in ((20, "0.1", "0.1"), (2, "0.5", "1.0"), (2, "0.5", "2.0")):
    v = 2 * mp.log(2 * k / mp.mpf(d)) / mp.mpf(g) ** 2
    print("L", k, d, g, v, mp.ceil(v))

print("T0 scan(100)", scan_t0(100))
print("T0 scan(4000)", scan_t0(4000))

# homogeneous CO-UCB pulls bound, K=20 alpha=4 d0=.1 T=1e5
print("thm1 pulls", 19 * 4 / (2 * mp.mpf("0.01")) * mp.log(100000))


# AAS brute-force oracle for the four-agent example
def brute(means, sets):
    order = sorted(range(len(means)), key=lambda k: -means[k])
    opt = {m: max(s, key=lambda k: means[k]) for m, s in enumerate(sets)}
    arms = sorted(set(opt.values()))
    best = 0
    for r in range(1, len(arms) + 1):
        for sub in combinations(arms, r):
            agents = [m for m in opt if opt[m] in sub]
            if all(set(sets[m]) - set(sub) for m in agents):
                best = max(best, len(agents))
    return best


print("brute aas example", brute([4, 3, 2, 1], [{0, 1}, {0, 1, 2}, {1, 2}, {2, 3}]))
print("brute fig1b", brute([9, 8, 3], [{0, 1}, {1, 2}]))

# LTA learning-stage term: K=20, c=1, dmin=.1, T=1e5, with (D(1,K)+beta(1)+b)=1
print("thm4 first-term coefficient", 4 * 20 * mp.log(100000) / (1 * mp.mpf("0.01")))
