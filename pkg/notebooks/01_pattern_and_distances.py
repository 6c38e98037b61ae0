# coding: utf-8

# # The checkered pattern and its smocked distance
#
# Horizontal unit stitches sit on the lattice 3Z x 3Z and vertical ones on
# (3Z + 1.5) x (3Z + 1.5). Collapsing each stitch to a point gives a
# pseudometric on the plane. This script walks through the basic objects.

# In[1]:

import math
import os

import numpy as np

from smocking import closedform as cf
from smocking.metric import CheckeredMetric, geodesic, pseudometric, required_window
from smocking.pattern import checkered_pattern, separation_factor, smocking_depth
from smocking.render import render_svg

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT, exist_ok=True)


# ## A window of the pattern
#
# Windows are taken on stitch indices: radius 4 keeps every index with
# max(|j1|, |j2|) <= 4.

# In[2]:

p4 = checkered_pattern(4)
print(p4)
print("horizontal:", sum(s.index.horizontal for s in p4), "vertical:", sum(not s.index.horizontal for s in p4))
print("separation:", separation_factor(p4), "(sqrt 2 =", math.sqrt(2), ")")
print("depth on a 0.01 grid:", smocking_depth(checkered_pattern(6), 0.01))


# ## Distances between points
#
# A straight segment is always available, so the smocked distance never
# exceeds the Euclidean one. Points on the same stitch are at distance 0.

# In[3]:

p = checkered_pattern(20)
for x, y in [((0.6, 0), (2.4, 0)), ((0, 2), (0, -2)), ((0.1, 0), (-0.3, 0)), ((0, 0), (9, 0))]:
    print(x, y, "smocked", round(pseudometric(p, x, y), 6), "euclidean", round(math.dist(x, y), 6))

print("window needed for (0,0)-(9,0):", required_window((0, 0), (9, 0)))


# ## Geodesics are chains of network parts
#
# From I_0 to I_(6,3) the shortest route uses one horizontal part and two
# diagonals.

# In[4]:

g = geodesic(p, (0, 0), (6, 3))
print("length", g.distance, "= 2 + 2 sqrt 2 =", 2 + 2 * math.sqrt(2))
for s in g.path.segments:
    print("  ", tuple(s.start), "->", tuple(s.end), cf.classify_network_part(s, p).kind.value)

with open(os.path.join(OUT, "geodesic_6_3.svg"), "w") as fh:
    fh.write(render_svg(checkered_pattern(9), [g.path, cf.awesome_path((0, 0), (0, 3))]))


# ## Far away: the periodic table
#
# For long queries the whole pattern is never built; distances come from a
# table of stitch-to-stitch distances and the pattern's symmetries.

# In[5]:

m = CheckeredMetric()
for R in (10, 100, 1000):
    x = np.array([R, R / 3])
    print(R, m.distance((0, 0), x), "F =", cf.norm_F(x))
