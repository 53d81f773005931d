"""The quantum 4-ball E_2: generators, relations and recovered phases.

Run:  python demos/four_ball.py [q]
"""

import sys

from qball.graphs import SHORT_LABELS, ball_graph
from qball.representation import PiRep, build_irrep
from qball.verify import check_ball_relations, check_generator_recovery, check_projection_lemma

q = float(sys.argv[1]) if len(sys.argv) > 1 else 0.5
labels = SHORT_LABELS[2]
alias = {v: k for k, v in labels.items()}
g = ball_graph(2)

print("vertices:", [f"{v} ({alias[v]})" for v in g.vertices])
for e in g.edges:
    print(f"  edge {e.id} ({alias[e.id]}): {e.src} -> {e.dst}")

rep = build_irrep(PiRep(), 2, q, 6)
print(f"\nfaithful representation at q={q}: {rep.dim} basis vectors, first few:")
print("  ", rep.labels(labels)[:8])

for title, checks in (
    ("ball relations", check_ball_relations(rep)),
    ("projection lemma", check_projection_lemma(rep)),
    ("generator recovery", check_generator_recovery(rep)),
):
    print(f"\n{title}:")
    for r in checks:
        extra = f"  trace={r.detail['trace']:g}" if "trace" in r.detail else ""
        print(f"  {'ok  ' if r.passed else 'FAIL'} {r.id:<28} h={r.headroom} residual={r.residual:.1e}{extra}")
