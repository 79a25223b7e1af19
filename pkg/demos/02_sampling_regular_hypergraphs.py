# coding: utf-8

# # Sampling random regular hypergraphs
#
# Buckets hold points, points get grouped into parts of size r, and each part becomes an edge.
# Here we walk through the stages one at a time on a small instance.

# In[1]:

import numpy as np

from hypercolor import sample_multi, sample_regular, strip, to_hypergraph, trim
from hypercolor.sampler import augment_to_regular, degree_diagnostics, initial_edge_count

rng = np.random.default_rng(1)
n, d, r = 3000, 30, 3


# ## Stage 1: a multi-hypergraph with independent uniform vertices

# In[2]:

m = initial_edge_count(n, d, r)
multi = sample_multi(n, m, r, rng)
h_multi = to_hypergraph(multi)
print("edges:", h_multi.m, " max bucket load:", multi.occupancy().max())


# ## Stage 2: strip loops and repeated edges

# In[3]:

simple, loops, repeats = strip(h_multi)
print("loops removed:", loops, " repeated copies removed:", repeats, " M =", simple.m)
print("first-order loop estimate 3m/n =", round(3 * m / n, 2))


# ## Stage 3: trim over-full buckets, Stage 4: augment

# In[4]:

trimmed = trim(multi, d)
diag = degree_diagnostics(multi, trimmed, d)
print(diag)
final = augment_to_regular(trimmed, d, rng)
degrees = to_hypergraph(final).degrees()
print("degree range after augmentation:", degrees.min(), degrees.max())
print("share of points added by augmentation: %.3f" % final.new_flags.mean())


# ## All in one call

# In[5]:

h, diag, ps = sample_regular(n, d, r, rng)
print(h.m == n * d // r, bool((h.degrees() == d).all()), h.is_simple())
