# coding: utf-8

# # Is augmentation uniform?
#
# Six points in two buckets of three, grouped into triples: there are ten partitions. Building
# the partition purely by augmentation should hit each of them with probability 1/10.

# In[1]:

from collections import Counter

import numpy as np
from scipy import stats

from hypercolor import sample_regular
from hypercolor.harness import enumerate_partitions, validate_uniformity


# In[2]:

rng = np.random.default_rng(0)
counts = Counter(sample_regular(2, 3, 3, rng, m=0)[2].canonical_partition() for _ in range(20_000))
universe = [frozenset(frozenset(b) for b in p) for p in enumerate_partitions(range(6), 3)]
obs = np.array([counts[p] for p in universe])
print(obs)
print(stats.chisquare(obs))


# ## The same check through the harness, for both modes

# In[3]:

for rep in validate_uniformity(2, 3, 3, 20_000, seed=1):
    print(rep.mode, rep.cells, round(rep.pvalue, 4), rep.passed)
