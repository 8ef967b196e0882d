"""Independent oracle for fixture S1.

Windows: fixed 100 s from origin 0 -> [0,100), [100,200), [200,300).
Degree values are computed with exact fractions from hand-listed edge sets;
closeness (harmonic, wf) and betweenness come from networkx. Run with
`python3 s1_oracle.py > s1_oracle.json`.
"""
import csv
import json
from fractions import Fraction as F
from pathlib import Path

import networkx as nx

here = Path(__file__).parent
rows = list(csv.DictReader(open(here / "s1_events.csv")))
m = 3
wins = [nx.Graph() for _ in range(m)]
for r in rows:
    s, t, ts = r["source"], r["target"], int(r["timestamp"])
    if s == t:
        continue
    wins[ts // 100].add_edge(s, t)
agg = nx.compose_all(wins)
actors = sorted(agg.nodes)
n = len(actors)

present = {a: [a in g.nodes for g in wins] for a in actors}


def alpha(a, j):
    if not present[a][j]:
        return F(0)
    if j == 0:
        return F(1)
    return F(1) if present[a][j - 1] else F(1, 2)


def degree(g):
    k = g.number_of_nodes()
    return {v: F(g.degree(v), k - 1) if k > 1 else F(0) for v in g.nodes}


def harmonic(g):
    k = g.number_of_nodes()
    h = nx.harmonic_centrality(g)
    return {v: h[v] / (k - 1) if k > 1 else 0.0 for v in g.nodes}


def wf(g):
    k = g.number_of_nodes()
    out = {}
    for v in g.nodes:
        d = nx.single_source_shortest_path_length(g, v)
        r = len(d) - 1
        tot = sum(d.values())
        out[v] = (r / tot) * (r / (k - 1)) if r > 0 and k > 1 else 0.0
    return out


def betweenness(g):
    return nx.betweenness_centrality(g, normalized=True)


def measures(fn):
    an = fn(agg)
    sins = [fn(g) for g in wins]
    ov = lambda a, j: sins[j].get(a, 0)
    matrix = {a: [alpha(a, j) * abs(an[a] - ov(a, j)) for j in range(m)] for a in actors}
    dda = {a: sum(matrix[a]) / m for a in actors}
    star = max(dda.values())
    contrib = {a: (1 - (star - dda[a])) / n for a in actors}
    windows = []
    for j in range(m):
        pres = [a for a in actors if present[a][j]]
        windows.append(sum(matrix[a][j] for a in pres) / len(pres) if pres else None)
    eq6 = sum(1 - (star - dda[a]) for a in actors) / n
    mean = sum(dda.values()) / n
    f = float
    return {
        "dda": {a: f(v) for a, v in dda.items()},
        "contribution": {a: f(v) for a, v in contrib.items()},
        "ddn_sin": [None if w is None else f(w) for w in windows],
        "ddn_eq6": f(eq6),
        "ddn_mean": f(mean),
        "matrix": {a: [f(x) for x in row] for a, row in matrix.items()},
    }


print(json.dumps({
    "actors": actors,
    "m": m,
    "presence": present,
    "alpha": {a: [float(alpha(a, j)) for j in range(m)] for a in actors},
    "degree": measures(degree),
    "closeness_harmonic": measures(harmonic),
    "closeness_wf": measures(wf),
    "betweenness": measures(betweenness),
}, indent=2, sort_keys=True))
