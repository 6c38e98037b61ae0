# coding: utf-8

# # The limiting norm
#
# F(x) = (sqrt2/3)(|x1| + |x2|) + ((2 - sqrt2)/3) | |x1| - |x2| |.
# Its unit ball is a regular octagon and it sandwiches the stitch distance.

# In[1]:

import math

import numpy as np

from smocking import analysis as an
from smocking import closedform as cf
from smocking.pattern import checkered_indices


# ## The unit sphere
#
# Vertices lie on the axes and the diagonals, all at Euclidean radius 1.5.

# In[2]:

pts = an.trace_unit_sphere(16)
for (x, y) in pts:
    print(f"{x:+.4f} {y:+.4f}  |v| = {math.hypot(x, y):.4f}")
print("max distance to the octagon:", an.octagon_distance(an.trace_unit_sphere(720)).max())


# ## Stitch distance against F
#
# d_H(I_0, I_j) sits between F(j) and F(j) + 2 sqrt2 - 2. The upper end is
# reached on the vertical column j1 = 0.

# In[3]:

gaps = np.array([cf.d_H_closed_form(j) - cf.norm_F(j.key) for j in checkered_indices(30) if j.key != (0, 0)])
print("gap range:", gaps.min(), gaps.max(), "constant:", cf.SANDWICH_GAP)


# ## Lipschitz constant
#
# The steepest direction of F relative to the Euclidean norm is where F is
# largest on the unit circle.

# In[4]:

est = an.estimate_dilation(200000, seed=0)
print("empirical:", est.empirical)
print("max of F on the unit circle:", est.analytic)
print("bounds:", cf.LIPSCHITZ_BOUND, cf.DILATION_BOUND)
