"""Reference values for the unit tests, computed independently of the C++ code."""
import csv
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[2] / "data"


def cusum(x, s, b, e, sigma=1.0):
    left = sum(x[s - 1:b])
    right = sum(x[b:e])
    n = e - s + 1
    nl = b - s + 1
    nr = e - b
    return (math.sqrt(nr / (n * nl)) * left - math.sqrt(nl / (n * nr)) * right) / sigma


def dc(ordered, m, phi):
    n = len(ordered)
    w = (m * (2 * n - m) / (2 * n)) ** phi
    return w * (sum(ordered[:m]) / m - sum(ordered[m:]) / (2 * n - m))


def dc_max(panel, s, e, scales, phi):
    best = None
    for b in range(s, e):
        vals = sorted((abs(cusum(row, s, b, e, sc)) for row, sc in zip(panel, scales)), reverse=True)
        for m in range(1, len(vals) + 1):
            v = dc(vals, m, phi)
            if best is None or v > best[2]:
                best = (b, m, v)
    return best


def haar(x, k):
    T = len(x)
    half = 2 ** (k - 1)
    ext = list(x) + list(reversed(x))
    out = []
    for t in range(T):
        w = ext[t:t + 2 * half]
        d = 2 ** (-k / 2) * (sum(w[:half]) - sum(w[half:]))
        out.append(d * d)
    return out


def show(name, value):
    if isinstance(value, (list, tuple)):
        print(f"{name} = {{" + ", ".join(repr(float(v)) if isinstance(v, float) else repr(v) for v in value) + "}")
    else:
        print(f"{name} = {value!r}")


def main():
    x = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0, 6.0]
    show("cusum_full", [cusum(x, 1, b, 8) for b in range(1, 8)])
    show("cusum_sub", [cusum(x, 3, b, 7, 2.0) for b in range(3, 7)])
    show("hand_case", cusum([0, 0, 0, 1, 1, 1], 1, 3, 6))

    ordered = [3.0, 2.0, 1.5, 0.5]
    for phi in (0.0, 0.5, 1.0):
        show(f"dc_phi_{phi}", [dc(ordered, m, phi) for m in range(1, 5)])

    panel = [
        [0.3, -0.2, 0.5, 0.1, 2.2, 1.9, 2.4, 2.0, 2.1, 1.8],
        [1.0, 1.2, 0.8, 1.1, 1.0, 1.3, 0.9, 1.2, 1.1, 1.0],
        [-0.5, -0.4, -0.6, -0.2, 1.4, 1.6, 1.1, 1.5, 1.3, 1.7],
    ]
    show("dc_max_unit", dc_max(panel, 1, 10, [1.0, 1.0, 1.0], 0.5))
    show("dc_max_sub", dc_max(panel, 3, 9, [0.5, 1.0, 2.0], 0.5))

    y = [2.0, 3.5, 1.0, 4.0, 4.5, 2.5, 6.0]
    d = np.abs(np.diff(y))
    show("mad_diff", float(np.median(d) / (0.6745 * math.sqrt(2))))
    show("sd_diff", float(np.std(np.diff(y), ddof=1) / math.sqrt(2)))

    z = [1.0, 3.0, 2.0, 5.0, 4.0, 4.0, 7.0, 0.0]
    show("haar_1", haar(z, 1))
    show("haar_2", haar(z, 2))
    show("haar_3", haar(z, 3))

    show("det_threshold_C1_T120", math.sqrt(math.log(120)) * math.log(math.log(960)))

    rng = np.random.default_rng(7)
    base = rng.normal(size=(4, 12)).round(3)
    print("factor_panel =", base.tolist())
    c = base - base.mean(axis=1, keepdims=True)
    cov = c @ c.T / (c.shape[1] - 1)
    evals = np.sort(np.linalg.eigvalsh(cov))[::-1]
    show("factor_eigenvalues", [float(v) for v in evals])
    w, v = np.linalg.eigh(cov)
    top = v[:, np.argsort(w)[::-1][:1]]
    resid = c - top @ (top.T @ c)
    show("factor_resid_frobenius_r1", float(np.linalg.norm(resid)))
    ratios = evals[:-1] / evals[1:]
    show("factor_ratio_choice", int(np.argmax(ratios[: max(1, min(4, 12) // 2)]) + 1))

    show("zscore_5_of_1to5", float(Fraction(2) / 1) / math.sqrt(2.5))

    rows = list(csv.DictReader(open(DATA / "lahman_teams_1871_2020.csv")))
    nyy27 = [r for r in rows if r["yearID"] == "1927" and r["franchID"] == "NYY"][0]
    show("nyy_1927_hr_per_game", int(nyy27["HR"]) / int(nyy27["G"]))
    atl20 = [r for r in rows if r["yearID"] == "2020" and r["franchID"] == "ATL"][0]
    show("atl_2020_so_per_game", int(atl20["SO"]) / int(atl20["G"]))

    league = {}
    for stat in ("HR", "SO", "BB", "SB"):
        series = []
        for year in range(1900, 2021):
            rates = [int(r[stat]) / int(r["G"]) for r in rows if int(r["yearID"]) == year and r[stat] != ""]
            series.append(sum(rates) / len(rates))
        a = np.array(series)
        league[stat] = (a - a.mean()) / a.std(ddof=1)
    show("league_hr_1900", float(league["HR"][0]))
    show("league_so_2020", float(league["SO"][-1]))

    def rate(r, stat):
        return int(r[stat]) / int(r["G"])

    season = [r for r in rows if r["yearID"] == "1965"]
    own = [r for r in season if r["franchID"] == "MIN"][0]
    peers = np.array([rate(r, "R") for r in season])
    show("min_1965_runs_z", float((rate(own, "R") - peers.mean()) / peers.std(ddof=1)))
    peers = np.array([rate(r, "SOA") for r in season])
    show("min_1965_soa_z", float((rate(own, "SOA") - peers.mean()) / peers.std(ddof=1)))


if __name__ == "__main__":
    main()
