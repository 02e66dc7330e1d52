"""reusecore: bytecode-level API usage mining and reuse-core metrics for
JVM artifact corpora.

The package decodes class files from jar archives, extracts counted API
usages between client and library artifacts, assembles per-library
bipartite usage graphs, and computes dependency-usage and reuse-core
metrics (DUR, TUR, extinction sequences, Core_n, CR_n, core-index),
including detection of declared-but-unused dependencies.
"""

__version__ = "0.1.0"
