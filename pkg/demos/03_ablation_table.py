"""Reproduce the validation-accuracy ablation table.

Generates a 20-mission corpus containing 50% clean missions, 20%
capability violations, and 30% affordance violations, labels each mission
with the brute-force oracle, and scores the three validator
configurations. Dropping the taxonomy (KG_ONLY) false-accepts exactly the
affordance violations; dropping the graph too (STATE_ONLY) also
false-accepts the capability violations, so the accuracy trend is forced
by construction: 1.00 > 0.70 > 0.50.
"""

from abyssal.ablation import generate_corpus, run_ablation
from abyssal.scenario import load_builtin

scenario = load_builtin("two_auv")
mix = {"none": 0.5, "capability": 0.2, "affordance": 0.3}

for seed in (1, 2, 3):
    corpus = generate_corpus(scenario, seed=seed, n=20, mix=mix)
    result = run_ablation(corpus, scenario)
    print(f"\nseed {seed}")
    print(result.render_table())

print("\nsample corpus entries (seed 1):")
corpus = generate_corpus(scenario, seed=1, n=20, mix=mix)
for entry in corpus.entries[:6]:
    line = entry.text.splitlines()[1]
    print(f"  [{entry.tag:<10}] oracle={'ok' if entry.oracle_feasible else 'reject':<6} {line}")
