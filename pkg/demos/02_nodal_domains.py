"""Nodal domains and the Courant bound l <= n + k - 1.

Walks the path graph P_8 (where the count is exactly n), then the star
K_{1,7} where an eigenfunction in the large middle eigenspace attains the
bound with equality. Writes an SVG of one decomposition.
"""

from pathlib import Path

from nodalforms import assemble_operator, courant_check, eigensystem
from nodalforms.corpus import path_graph, star_graph, star_tight_vector
from nodalforms.render import render_graph_svg

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

g = path_graph(8)
es = eigensystem(assemble_operator(g))
print("P_8: n, lambda_n, domains l, bound n+k-1")
for n in range(1, 9):
    r = courant_check(g, es, n)
    print(f"  {n}  {r.lambda_n:8.5f}  l={r.l}  bound={r.bound}  "
          f"{'ok' if r.passes else 'VIOLATED'}")

# the star: eigenvalue 1 has multiplicity 6, and the alternating-leaf
# eigenfunction splits every leaf into its own domain
leaves = 7
star = star_graph(leaves)
es_star = eigensystem(assemble_operator(star))
witness = star_tight_vector(leaves)
r = courant_check(star, es_star, 2, source="explicit", vector=witness)
print(f"\nK_1,{leaves}: n=2, k={r.k}, l={r.l}, bound={r.bound} "
      f"-> bound attained: {r.l == r.bound}")

# random rotations inside the same eigenspace stay within the bound
for seed in range(5):
    rot = courant_check(star, es_star, 2, source="sample", seed=seed)
    print(f"  random rotation seed={seed}: l={rot.l} <= {rot.bound}")

svg = render_graph_svg(star, witness, r.decomposition)
(out_dir / "star_tight.svg").write_text(svg)
print(f"\nwrote {out_dir / 'star_tight.svg'}")
