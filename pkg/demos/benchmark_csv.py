"""A small timing run, end to end.

Generates a synthetic workload, times three matchers at two worker
counts in count-only mode, and prints the harness CSV. The same thing is
available from the command line:

    regionmatch bench --algo all --N 40000 --alpha 10 --P 1,2 --reps 3
"""

from regionmatch import MatcherConfig, SyntheticSpec, gen_uniform
from regionmatch.bench import run_bench, runs_to_csv
from regionmatch.geometry import COUNT_ONLY

spec = SyntheticSpec(total_regions=40_000, alpha=10.0, seed=1)
S, U = gen_uniform(spec)
print(f"workload: N={spec.total_regions}, alpha={spec.alpha}, l={spec.region_length:g}")

runs = run_bench(
    ["sbm-par", "itm", "gbm"],
    S,
    U,
    alpha_or_trace=str(spec.alpha),
    workers_list=[1, 2],
    reps=3,
    cfg=MatcherConfig(mode=COUNT_ONLY),
)
print()
print(runs_to_csv(runs))
