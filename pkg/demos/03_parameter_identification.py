# %% [markdown]
# # Recovering the noise level by clustering
#
# Simulate several runs per noise value, summarize each run, compare runs by
# Euclidean distance between vectorized summaries, cluster with K-medoids,
# and score each run by whether its cluster's medoid shares its noise value.
#
# This is a reduced version of the desk-scale comparison; the full one is
#
#     python -m crocker experiment --preset exp1 --out exp1

# %%
import tempfile

from crocker import pipeline

config = pipeline.preset(
    "exp1",
    sims_per_eta=6,
    steps=300,
    features=("order_parameter", "crocker_plot_H0", "crocker_stack_H0"),
)

with tempfile.TemporaryDirectory() as out:
    report = pipeline.cmd_experiment(config, out)
    print(pipeline.format_report(report))

# %% [markdown]
# The order parameter mostly sees whether the flock aligned.  The H0
# crocker plot also sees how the agents group in space and heading, which
# separates the noise levels far better.
