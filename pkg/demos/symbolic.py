"""Normal forms of words in S_e, S_e^*, P_v and their numeric images.

Run:  python demos/symbolic.py
"""

import math

from qball.graphs import SHORT_LABELS, ball_graph
from qball.representation import TruncatedPathSpace, build_generators, evaluate_word
from qball.verify import residual
from qball.words import adjoint, ck_expand, gauge, multiply, parse_expr, render

labels = SHORT_LABELS[2]
g = ball_graph(2)
gens = build_generators(TruncatedPathSpace(g, "v0", 8))

for text in ("S[e]* S[e]", "S[b] S[b]* S[e]", "S[c]* S[c] S[b]", "S[c] S[b]* + S[b] S[c]*", ""):
    expr = parse_expr(g, text, labels)
    print(f"{text or '(empty word)':<26} -> {render(expr, labels)}")

a = parse_expr(g, "S[c] S[b]* - 0.5 P[w]", labels)
b = parse_expr(g, "S[b] S[b]* + 2 S[e] S[e]*", labels)
ab = multiply(a, b)
print("\na =", render(a, labels))
print("b =", render(b, labels))
print("ab =", render(ab, labels))
print("(ab)* =", render(adjoint(ab), labels))
num = evaluate_word(a, gens) @ evaluate_word(b, gens) - evaluate_word(ab, gens)
print("numeric check residual:", residual(num, gens.space.interior(ab.max_mu_length() + 2)))

print("\nP[v] expanded by the Cuntz-Krieger relation:", render(ck_expand(parse_expr(g, "P[v]", labels), labels["v"]), labels))
t = math.pi / 2
cb = parse_expr(g, "S[c] S[b]*", labels)
se = parse_expr(g, "S[e]", labels)
print("gauge(t) fixes the degree-0 word S[c]S[b]*:", gauge(cb, t) == cb)
print("gauge(pi/2) of S[e] equals i S[e]:", gauge(se, t).close_to(1j * se))
