# coding: utf-8

# # Predicted chromatic and independence numbers
#
# For a random r-uniform d-regular hypergraph the chromatic number is expected to sit near
# ((r-1) d / (r ln d))^(1/(r-1)) and the independence ratio near its reciprocal.
# This notebook evaluates both, then looks at when the first-moment condition starts to
# certify the upper bound on the independence number.

# In[1]:

import math

import numpy as np

from hypercolor import certify_alpha_upper, predicted_alpha_frac, predicted_chi, solve_z2
from hypercolor.harness import log_grid, theory_table


# ## A few predictions
#
# The two quantities multiply to exactly 1.

# In[2]:

for d in (10, 100, 1000, 10**6):
    chi = predicted_chi(3, d)
    frac = predicted_alpha_frac(3, d)
    print(f"d={d:>8}  chi ~ {chi:8.3f}  alpha/n ~ {frac:.5f}  product {chi * frac:.12f}")


# ## The auxiliary root z2
#
# z2 solves z((z+1)^(r-1) - z^(r-1)) / ((z+1)^r - z^r) = c. At z = 1 and r = 3 the left side is 3/7.

# In[3]:

print(solve_z2(3, 3 / 7))
for c in (1e-2, 1e-3, 1e-4):
    z = solve_z2(3, c)
    print(f"c={c:g}: z2={z:.15g}, z2 - c/(1-c) = {z - c / (1 - c):.3e}  (c^3 = {c**3:.1e})")


# ## Where does the certificate kick in?
#
# With eps = 0.1 the candidate c = 1.1 * alpha/n leaves the admissible window for very small d,
# and the condition only turns negative once d is large.

# In[4]:

reports, d0 = theory_table(3, 0.1, log_grid(3, 1e9, 25))
for rep in reports:
    fm = "   n/a" if math.isnan(rep.fm_value) else f"{rep.fm_value:10.4f}"
    print(f"d={rep.d:12.4g}  c={rep.c:.5f}  fm={fm}  certified={rep.certified}")
print("empirical d0 on this grid:", d0)


# In[5]:

# the condition value scales like -c ln d at the top of the range
for d in np.logspace(7, 9, 5):
    cert = certify_alpha_upper(3, float(d), 0.1)
    print(f"d={d:.2e}  fm/(c ln d) = {cert.fm_value / (cert.c * math.log(d)):.4f}")
