# coding: utf-8

# # Rescaling toward the tangent cone
#
# Shrinking the smocked plane by R, the distortion of the identity map
# against the normed plane (R^2, F) falls like 1/R.

# In[1]:

import os

from smocking import analysis as an

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT, exist_ok=True)


# ## Uniform deviation at scale 1

# In[2]:

r = an.deviation_sup(100, 2000, seed=0)
print("sup |d - F(x - x')| =", r.max_abs_error, "bound K =", an.DEVIATION_K)
print("with F(x) - F(x') in place of F(x - x'):", r.extras["printed_bracket_sup"])


# ## The curve

# In[3]:

points = an.convergence_curve([2 ** i for i in range(9)], 5, 300, seed=0)
for p in points:
    print(f"R={p.scale:5g}  sup={p.sup_deviation:.5f}  K/R={p.bound:.5f}  R*sup={p.scale * p.sup_deviation:.3f}")

with open(os.path.join(OUT, "convergence.csv"), "w", newline="") as fh:
    fh.write(an.convergence_csv(points))
