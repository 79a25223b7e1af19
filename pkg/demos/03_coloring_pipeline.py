# coding: utf-8

# # Coloring while sampling
#
# Color the simple hypergraph from the first stage greedily, keep that coloring fixed while the
# sampler completes the regular hypergraph, then repair the monochromatic edges with a few fresh
# colors. Whether the repair succeeds depends on how many edges augmentation creates.

# In[1]:

import numpy as np

from hypercolor import pipeline_chi_upper, predicted_chi
from hypercolor.coloring import repair_delta


# ## A setting where repair has room
#
# A generous eps gives a larger fresh palette.

# In[2]:

res = pipeline_chi_upper(3000, 24, 3, 4.0, np.random.default_rng(3))
print(res.summary())


# ## The default large setting
#
# At d = 100 about 46% of the points are added by augmentation. Those edges ignore the
# coloring, so roughly sum_A (|A|/n)^3 of them end up monochromatic, far more than one fresh
# color can absorb. This takes around ten seconds.

# In[3]:

res = pipeline_chi_upper(20001, 100, 3, 0.2, np.random.default_rng(0))
print(res.status, "bad:", res.bad_edges, "|U|:", res.u, "degeneracy(U):", res.degeneracy_u,
      "delta:", repair_delta(3, 100, 0.2), "chi_pred: %.2f" % predicted_chi(3, 100))
